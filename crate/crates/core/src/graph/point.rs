use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use super::agraph::{AGraph, CollapsedGraph, ValidationReport, WedgeCycle};
use super::cw::{cyclically_reduce_path, reduce_path, reverse_path, CWGraph, Edge, EdgeRef};
use super::enumerate::Shape;
use crate::error::{Error, Result};
use crate::scalar::{rat, FormalReal};
use crate::word::fold::generates_free_group;
use crate::word::{Endomap, FreeFactorSystem, Letter, Word};

/// A point of relative outer space: an A-graph with a metric and a marking.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedMetricAGraph {
    pub system: FreeFactorSystem,
    pub agraph: AGraph,
    /// One length per edge of the graph; wedge edges are forced to zero.
    pub lengths: Vec<FormalReal>,
    pub base: usize,
    /// `marking[g]` is the based loop representing generator `g`.
    pub marking: Vec<Vec<EdgeRef>>,
}

/// How to fill in edge lengths of a graph built from a shape.
#[derive(Clone, Debug)]
pub enum Lengths {
    /// Edge `e{i}` gets the formal symbol `λ{i}`.
    Symbolic,
    /// Every collapsed edge gets `1/E`.
    Uniform,
    Explicit(Vec<FormalReal>),
}

impl MarkedMetricAGraph {
    pub fn new(
        system: FreeFactorSystem,
        agraph: AGraph,
        lengths: Vec<FormalReal>,
        base: usize,
        marking: Vec<Vec<EdgeRef>>,
    ) -> Result<Self> {
        let g = &agraph.graph;
        if lengths.len() != g.edge_count() {
            return Err(Error::Structural("one length per edge is required".into()));
        }
        if base >= g.vertex_count() {
            return Err(Error::Structural("base vertex outside the graph".into()));
        }
        if marking.len() != system.gen_count() as usize {
            return Err(Error::Structural("marking must give a loop for every generator".into()));
        }
        if marking.iter().flatten().any(|r| r.edge >= g.edge_count()) {
            return Err(Error::Structural("marking uses an unknown edge".into()));
        }
        let mut lengths = lengths;
        for e in agraph.wedge_edges() {
            lengths[e] = FormalReal::zero();
        }
        Ok(MarkedMetricAGraph {
            system,
            agraph,
            lengths,
            base,
            marking,
        })
    }

    /// The canonical marking of an A-graph whose wedge circles are single loop
    /// edges: a breadth-first spanning tree from `base`, free generators sent
    /// to the fundamental loops of non-tree collapsed edges in edge order, and
    /// `y^j_t` to the tree path to hub `j`, circle `t`, and back.
    pub fn with_canonical_marking(
        system: FreeFactorSystem,
        agraph: AGraph,
        lengths: Vec<FormalReal>,
        base: usize,
    ) -> Result<Self> {
        let g = &agraph.graph;
        for w in &agraph.wedges {
            if w.circles.iter().any(|c| c.len() != 1) {
                return Err(Error::Unsupported(
                    "canonical markings need every wedge circle to be a single loop edge".into(),
                ));
            }
        }
        let tree = g.spanning_tree(base);
        let mut marking = vec![Vec::new(); system.gen_count() as usize];
        let loop_at = |r: EdgeRef| -> Vec<EdgeRef> {
            let mut p = tree.path_to(g, g.origin(r));
            p.push(r);
            p.extend(tree.path_from(g, g.terminus(r)));
            p
        };
        let free_edges: Vec<usize> = tree.non_tree_edges().filter(|&e| !agraph.is_wedge_edge(e)).collect();
        if free_edges.len() != system.free_rank() {
            return Err(Error::Structural(format!(
                "graph has {} free loops, system needs {}",
                free_edges.len(),
                system.free_rank()
            )));
        }
        for (i, gen) in system.free_gens().enumerate() {
            marking[gen as usize] = loop_at(EdgeRef::fwd(free_edges[i]));
        }
        for w in &agraph.wedges {
            for (t, gen) in system.factor_gens(w.factor).enumerate() {
                marking[gen as usize] = loop_at(w.circles[t][0]);
            }
        }
        MarkedMetricAGraph::new(system, agraph, lengths, base, marking)
    }

    /// Blows up a collapsed shape and marks it canonically, based at the
    /// first special point (or vertex 0 when `k = 0`).
    pub fn from_shape(system: &FreeFactorSystem, shape: &Shape, lengths: Lengths) -> Result<Self> {
        let agraph = shape.expand(system)?;
        let edges = shape.edges.len();
        let collapsed: Vec<FormalReal> = match lengths {
            Lengths::Symbolic => (1..=edges).map(|i| FormalReal::symbol(&format!("λ{i}"))).collect(),
            Lengths::Uniform => vec![FormalReal::ratio(1, edges as i64); edges],
            Lengths::Explicit(v) => {
                if v.len() != edges {
                    return Err(Error::Structural(format!(
                        "{edges} edge lengths expected, got {}",
                        v.len()
                    )));
                }
                v
            }
        };
        let mut all = collapsed;
        all.resize(agraph.graph.edge_count(), FormalReal::zero());
        MarkedMetricAGraph::with_canonical_marking(system.clone(), agraph, all, 0)
    }

    pub fn graph(&self) -> &CWGraph {
        &self.agraph.graph
    }

    pub fn collapse(&self) -> Result<CollapsedGraph> {
        self.agraph.collapse(&self.system)
    }

    /// Full check: A-graph clauses, positive lengths, marking loops at the
    /// base, wedge generators sent to their circles, and generation of `π₁`.
    pub fn validate(&self) -> Result<ValidationReport> {
        use super::agraph::Clause;
        let report = self.agraph.validate(&self.system)?;
        if !report.ok {
            return Ok(report);
        }
        let g = self.graph();
        for (e, l) in self.lengths.iter().enumerate() {
            if !self.agraph.is_wedge_edge(e) && !l.is_positive() {
                return Ok(ValidationReport {
                    ok: false,
                    failed: None,
                    detail: format!("edge {} has non-positive length {l}", g.edge(e).id),
                });
            }
        }
        for (gen, path) in self.marking.iter().enumerate() {
            let closed = match g.path_endpoints(path) {
                Some((s, t)) => s == self.base && t == self.base,
                None => false,
            };
            if !closed {
                return Ok(ValidationReport {
                    ok: false,
                    failed: None,
                    detail: format!("marking of {} is not a loop at the base", self.system.name(gen as u32)),
                });
            }
        }
        for w in &self.agraph.wedges {
            let mut stem: Option<Vec<EdgeRef>> = None;
            for (t, gen) in self.system.factor_gens(w.factor).enumerate() {
                let path = reduce_path(self.marking[gen as usize].iter().copied());
                let circle = &w.circles[t];
                let ok = path.len() >= circle.len() && (path.len() - circle.len()) % 2 == 0 && {
                    let k = (path.len() - circle.len()) / 2;
                    let p = &path[..k];
                    let same_stem = stem.as_ref().is_none_or(|s| s.as_slice() == p);
                    if stem.is_none() {
                        stem = Some(p.to_vec());
                    }
                    same_stem
                        && &path[k..k + circle.len()] == circle.as_slice()
                        && path[k + circle.len()..] == reverse_path(p)[..]
                };
                if !ok {
                    return Ok(ValidationReport::fail(
                        Clause::Embedding,
                        format!(
                            "marking of {} is not its circle conjugated by the common path to the hub",
                            self.system.name(gen)
                        ),
                    ));
                }
            }
        }
        if !self.marking_generates() {
            return Ok(ValidationReport {
                ok: false,
                failed: None,
                detail: "marking loops do not generate the fundamental group".into(),
            });
        }
        Ok(ValidationReport::pass())
    }

    /// Rewrites every marking loop in the free basis given by the non-tree
    /// edges of a spanning tree and folds.
    fn marking_generates(&self) -> bool {
        let g = self.graph();
        let tree = g.spanning_tree(self.base);
        let mut basis_index = vec![None; g.edge_count()];
        for (i, e) in tree.non_tree_edges().enumerate() {
            basis_index[e] = Some(i as u32);
        }
        let words: Vec<Word> = self
            .marking
            .iter()
            .map(|p| {
                Word::reduce(
                    p.iter()
                        .filter_map(|r| basis_index[r.edge].map(|i| Letter::new(i, !r.forward))),
                )
            })
            .collect();
        generates_free_group(&words, g.rank() as u32)
    }

    /// Based loop in the graph representing `w`.
    pub fn loop_of(&self, w: &Word) -> Vec<EdgeRef> {
        reduce_path(w.letters().iter().flat_map(|l| {
            let p = &self.marking[l.gen as usize];
            if l.inverse {
                reverse_path(p)
            } else {
                p.clone()
            }
        }))
    }

    pub fn loop_length(&self, path: &[EdgeRef]) -> FormalReal {
        cyclically_reduce_path(&reduce_path(path.iter().copied()))
            .iter()
            .map(|r| self.lengths[r.edge].clone())
            .sum()
    }

    /// Length of the immersed loop representing `w`, wedge edges counting 0.
    pub fn translation_length(&self, w: &Word) -> FormalReal {
        self.loop_length(&self.loop_of(w))
    }

    /// `X · Ψ`: same metric graph, marking precomposed with `Ψ`.
    pub fn act(&self, psi: &Endomap) -> Result<Self> {
        let cert = psi.relative_certificate(&self.system)?;
        if !cert.is_relative() {
            return Err(Error::Domain("map is not a relative automorphism".into()));
        }
        let marking = psi.images().iter().map(|img| self.loop_of(img)).collect();
        Ok(MarkedMetricAGraph {
            marking,
            ..self.clone()
        })
    }

    pub fn volume(&self) -> FormalReal {
        self.lengths.iter().sum()
    }

    /// Rescales so the collapsed edges have total length 1.
    pub fn normalize_volume(&self) -> Result<Self> {
        for (e, l) in self.lengths.iter().enumerate() {
            if !self.agraph.is_wedge_edge(e) && !l.is_positive() {
                return Err(Error::Domain(format!(
                    "edge {} has length {l}; points need positive lengths",
                    self.graph().edge(e).id
                )));
            }
        }
        let total = self
            .volume()
            .as_rational()
            .ok_or_else(|| Error::Domain("volume is not rational; symbolic lengths are kept projectively".into()))?;
        let inv = rat(1, 1) / total;
        Ok(MarkedMetricAGraph {
            lengths: self.lengths.iter().map(|l| l.scale(&inv)).collect(),
            ..self.clone()
        })
    }

    /// Dimension of the open simplex containing the point.
    pub fn simplex_dim(&self) -> i64 {
        let collapsed = (0..self.graph().edge_count())
            .filter(|&e| !self.agraph.is_wedge_edge(e))
            .count();
        collapsed as i64 - 1
    }

    /// Same coloured graph, same lengths, and marking loops equal after
    /// reduction.
    pub fn same_point(&self, other: &Self) -> bool {
        self.system == other.system
            && self.agraph == other.agraph
            && self.lengths == other.lengths
            && self.base == other.base
            && self
                .marking
                .iter()
                .zip(&other.marking)
                .all(|(a, b)| reduce_path(a.iter().copied()) == reduce_path(b.iter().copied()))
    }

    pub fn to_json(&self) -> Value {
        let g = self.graph();
        let edges: Vec<Value> = g
            .edges()
            .iter()
            .map(|e| json!({"id": e.id, "from": g.vertex_id(e.from), "to": g.vertex_id(e.to)}))
            .collect();
        let wedges: Vec<Value> = self
            .agraph
            .wedges
            .iter()
            .map(|w| {
                json!({
                    "factor": w.factor + 1,
                    "hub": g.vertex_id(w.hub),
                    "circles": w.circles.iter().map(|c| c.iter().map(|&r| g.format_edge_ref(r)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                })
            })
            .collect();
        let lengths: BTreeMap<&str, &FormalReal> = g
            .edges()
            .iter()
            .zip(&self.lengths)
            .filter(|(_, l)| !l.is_zero())
            .map(|(e, l)| (e.id.as_str(), l))
            .collect();
        let marking: BTreeMap<&str, Vec<String>> = self
            .marking
            .iter()
            .enumerate()
            .map(|(i, p)| {
                (
                    self.system.name(i as u32),
                    p.iter().map(|&r| g.format_edge_ref(r)).collect(),
                )
            })
            .collect();
        json!({
            "rospace_format": 1,
            "system": self.system,
            "vertices": g.vertex_ids(),
            "edges": edges,
            "wedge_cycles": wedges,
            "lengths": lengths,
            "marking": marking,
            "base": g.vertex_id(self.base),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct EdgeJson {
            id: String,
            from: String,
            to: String,
        }
        #[derive(Deserialize)]
        struct WedgeJson {
            factor: usize,
            hub: String,
            circles: Vec<Vec<String>>,
        }
        #[derive(Deserialize)]
        struct PointJson {
            system: FreeFactorSystem,
            vertices: Vec<String>,
            edges: Vec<EdgeJson>,
            #[serde(default)]
            wedge_cycles: Vec<WedgeJson>,
            #[serde(default)]
            lengths: BTreeMap<String, FormalReal>,
            marking: BTreeMap<String, Vec<String>>,
            base: Option<String>,
        }
        let p: PointJson = serde_json::from_value(v.clone()).map_err(|e| Error::schema("$", e.to_string()))?;
        let vid = |id: &str, path: &str| {
            p.vertices
                .iter()
                .position(|x| x == id)
                .ok_or_else(|| Error::schema(path, format!("unknown vertex {id:?}")))
        };
        let mut edges = Vec::new();
        for (i, e) in p.edges.iter().enumerate() {
            edges.push(Edge {
                id: e.id.clone(),
                from: vid(&e.from, &format!("$.edges[{i}].from"))?,
                to: vid(&e.to, &format!("$.edges[{i}].to"))?,
            });
        }
        let graph = CWGraph::new(p.vertices.clone(), edges)?;
        let eref = |s: &str, path: &str| {
            graph
                .parse_edge_ref(s)
                .ok_or_else(|| Error::schema(path, format!("unknown edge {s:?}")))
        };
        let mut wedges = Vec::new();
        for (i, w) in p.wedge_cycles.iter().enumerate() {
            if w.factor == 0 || w.factor > p.system.k() {
                return Err(Error::schema(
                    format!("$.wedge_cycles[{i}].factor"),
                    "factor out of range",
                ));
            }
            let hub = vid(&w.hub, &format!("$.wedge_cycles[{i}].hub"))?;
            let mut circles = Vec::new();
            for (t, c) in w.circles.iter().enumerate() {
                let path = format!("$.wedge_cycles[{i}].circles[{t}]");
                let signed = c.iter().any(|s| s.starts_with('-'));
                let refs: Vec<EdgeRef> = c.iter().map(|s| eref(s, &path)).collect::<Result<_>>()?;
                circles.push(if signed {
                    refs
                } else {
                    AGraph::orient_circle(&graph, hub, &refs.iter().map(|r| r.edge).collect::<Vec<_>>())?
                });
            }
            wedges.push(WedgeCycle {
                factor: w.factor - 1,
                hub,
                circles,
            });
        }
        let mut lengths = vec![FormalReal::zero(); graph.edge_count()];
        for (id, l) in &p.lengths {
            let e = graph
                .edge_index(id)
                .ok_or_else(|| Error::schema(format!("$.lengths.{id}"), "unknown edge"))?;
            lengths[e] = l.clone();
        }
        let mut marking = vec![Vec::new(); p.system.gen_count() as usize];
        for (name, path) in &p.marking {
            let gen = p
                .system
                .gen_id(name)
                .map_err(|e| Error::schema(format!("$.marking.{name}"), e.to_string()))?;
            marking[gen as usize] = path
                .iter()
                .map(|s| eref(s, &format!("$.marking.{name}")))
                .collect::<Result<_>>()?;
        }
        if let Some(missing) = (0..p.system.gen_count()).find(|&g| !p.marking.contains_key(p.system.name(g))) {
            return Err(Error::schema(
                "$.marking",
                format!("no loop for generator {}", p.system.name(missing)),
            ));
        }
        let base = match &p.base {
            Some(b) => vid(b, "$.base")?,
            None => 0,
        };
        MarkedMetricAGraph::new(p.system, AGraph::new(graph, wedges), lengths, base, marking)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x2(lengths: Lengths) -> MarkedMetricAGraph {
        let sys = FreeFactorSystem::standard(2, &[1]).unwrap();
        let shape = Shape {
            vertices: 2,
            edges: vec![(0, 1), (1, 1)],
        };
        MarkedMetricAGraph::from_shape(&sys, &shape, lengths).unwrap()
    }

    #[test]
    fn canonical_marking_of_stem_and_loop() {
        let x = x2(Lengths::Uniform);
        assert!(x.validate().unwrap().ok);
        let b = x.system.gen_id("b").unwrap();
        let g = x.graph();
        let loop_b: Vec<String> = x.marking[b as usize].iter().map(|&r| g.format_edge_ref(r)).collect();
        assert_eq!(loop_b, ["e1", "e2", "-e1"]);
    }

    #[test]
    fn lengths_follow_the_immersed_loop() {
        let x = x2(Lengths::Symbolic);
        let sys = x.system.clone();
        let l = |s: &str| x.translation_length(&sys.parse_word(s).unwrap());
        let l1 = FormalReal::symbol("λ1");
        let l2 = FormalReal::symbol("λ2");
        assert_eq!(l("a"), FormalReal::zero());
        assert_eq!(l("b"), l2.clone());
        assert_eq!(l("a*b"), l2 + l1.scale_int(2));
    }

    #[test]
    fn normalize_and_simplex_dimension() {
        let x = x2(Lengths::Explicit(vec![FormalReal::int(1), FormalReal::int(1)]));
        let y = x.normalize_volume().unwrap();
        assert_eq!(y.volume(), FormalReal::int(1));
        assert_eq!(y.lengths[0], FormalReal::ratio(1, 2));
        assert_eq!(y.simplex_dim(), 1);
        assert!(matches!(
            x2(Lengths::Symbolic).normalize_volume(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn zero_collapsed_edge_is_rejected() {
        let x = x2(Lengths::Explicit(vec![FormalReal::zero(), FormalReal::int(1)]));
        assert!(matches!(x.normalize_volume(), Err(Error::Domain(_))));
        assert!(!x.validate().unwrap().ok);
    }

    #[test]
    fn action_precomposes_marking() {
        let x = x2(Lengths::Symbolic);
        let sys = x.system.clone();
        let psi = Endomap::parse(&sys, "b->a*b", Some("b->a^-1*b")).unwrap();
        let y = x.act(&psi).unwrap();
        for w in crate::word::word_ball(2, 3) {
            assert_eq!(y.translation_length(&w), x.translation_length(&psi.apply(&w)));
        }
        assert!(y.validate().unwrap().ok);
        assert!(x.act(&Endomap::identity(2)).unwrap().same_point(&x));
        let swap = Endomap::parse(&sys, "a->b, b->a", Some("a->b, b->a")).unwrap();
        assert!(matches!(x.act(&swap), Err(Error::Domain(_))));
    }

    #[test]
    fn json_round_trip() {
        let x = x2(Lengths::Symbolic);
        let back = MarkedMetricAGraph::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn non_generating_marking_fails() {
        let mut x = x2(Lengths::Uniform);
        let b = x.system.gen_id("b").unwrap() as usize;
        let twice = [x.marking[b].clone(), x.marking[b].clone()].concat();
        x.marking[b] = reduce_path(twice);
        assert!(!x.validate().unwrap().ok);
    }
}
