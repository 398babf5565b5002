use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::cw::{CWGraph, Edge, EdgeRef};
use crate::error::{Error, Result};
use crate::word::FreeFactorSystem;

/// Embedded wedge of circles realizing the generators of one factor.
/// Each circle is a closed oriented edge path starting and ending at `hub`;
/// traversing circle `t` in the stored direction reads generator `t` of the
/// factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeCycle {
    pub factor: usize,
    pub hub: usize,
    pub circles: Vec<Vec<EdgeRef>>,
}

impl WedgeCycle {
    pub fn edges(&self) -> BTreeSet<usize> {
        self.circles.iter().flatten().map(|r| r.edge).collect()
    }

    pub fn vertices(&self, g: &CWGraph) -> BTreeSet<usize> {
        let mut vs: BTreeSet<usize> = self.circles.iter().flatten().map(|&r| g.origin(r)).collect();
        vs.insert(self.hub);
        vs
    }
}

/// A graph of rank `n` with one wedge cycle per factor of the system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AGraph {
    pub graph: CWGraph,
    pub wedges: Vec<WedgeCycle>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Clause {
    Connectivity,
    Rank,
    Valence,
    Embedding,
    PairwiseIntersection,
    DualForest,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub failed: Option<Clause>,
    pub detail: String,
}

impl ValidationReport {
    pub fn pass() -> Self {
        ValidationReport {
            ok: true,
            failed: None,
            detail: String::new(),
        }
    }

    pub fn fail(clause: Clause, detail: impl Into<String>) -> Self {
        ValidationReport {
            ok: false,
            failed: Some(clause),
            detail: detail.into(),
        }
    }
}

/// `Γ̂`: the graph with every wedge cycle collapsed to a special point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CollapsedGraph {
    pub graph: CWGraph,
    /// `special_points[j]` is the vertex of factor `j`.
    pub special_points: Vec<usize>,
    /// Vertex of `Γ̂` that each vertex of `Γ` maps to.
    pub vertex_map: Vec<usize>,
    /// Edge of `Γ̂` for each edge of `Γ`; `None` for wedge edges.
    pub edge_map: Vec<Option<usize>>,
}

impl CollapsedGraph {
    pub fn special_factor(&self, v: usize) -> Option<usize> {
        self.special_points.iter().position(|&p| p == v)
    }

    pub fn rank(&self) -> i64 {
        self.graph.rank()
    }
}

impl AGraph {
    pub fn new(graph: CWGraph, wedges: Vec<WedgeCycle>) -> Self {
        AGraph { graph, wedges }
    }

    /// Orients an unsigned circle edge list by walking it from `hub`.
    pub fn orient_circle(graph: &CWGraph, hub: usize, edges: &[usize]) -> Result<Vec<EdgeRef>> {
        let mut at = hub;
        let mut out = Vec::with_capacity(edges.len());
        for &e in edges {
            let edge = graph.edge(e);
            let r = if edge.from == at {
                EdgeRef::fwd(e)
            } else if edge.to == at {
                EdgeRef::back(e)
            } else {
                return Err(Error::Structural(format!(
                    "circle edge {} does not continue the path",
                    edge.id
                )));
            };
            at = graph.terminus(r);
            out.push(r);
        }
        if at != hub {
            return Err(Error::Structural("circle does not close up at its hub".into()));
        }
        Ok(out)
    }

    pub fn wedge_edges(&self) -> BTreeSet<usize> {
        self.wedges.iter().flat_map(WedgeCycle::edges).collect()
    }

    pub fn is_wedge_edge(&self, e: usize) -> bool {
        self.wedges
            .iter()
            .any(|w| w.circles.iter().flatten().any(|r| r.edge == e))
    }

    pub fn wedge_of_factor(&self, j: usize) -> Option<&WedgeCycle> {
        self.wedges.iter().find(|w| w.factor == j)
    }

    /// Checks the defining clauses in order, reporting the first failure.
    pub fn validate(&self, sys: &FreeFactorSystem) -> Result<ValidationReport> {
        let g = &self.graph;
        for w in &self.wedges {
            if w.hub >= g.vertex_count() || w.factor >= sys.k() {
                return Err(Error::Structural(
                    "wedge cycle refers to a missing hub or factor".into(),
                ));
            }
            for r in w.circles.iter().flatten() {
                if r.edge >= g.edge_count() {
                    return Err(Error::Structural("wedge cycle refers to a missing edge".into()));
                }
            }
        }
        if !g.is_connected() {
            return Ok(ValidationReport::fail(Clause::Connectivity, "graph is not connected"));
        }
        if g.rank() != sys.rank() as i64 {
            return Ok(ValidationReport::fail(
                Clause::Rank,
                format!("rank {} differs from n = {}", g.rank(), sys.rank()),
            ));
        }
        if let Some(v) = (0..g.vertex_count()).find(|&v| g.valence(v) < 3) {
            return Ok(ValidationReport::fail(
                Clause::Valence,
                format!("vertex {} has valence {}", g.vertex_id(v), g.valence(v)),
            ));
        }
        if let Some(detail) = self.embedding_defect(sys) {
            return Ok(ValidationReport::fail(Clause::Embedding, detail));
        }
        for (a, wa) in self.wedges.iter().enumerate() {
            for wb in &self.wedges[a + 1..] {
                let shared_edges = wa.edges().intersection(&wb.edges()).count();
                let shared_vertices = wa.vertices(g).intersection(&wb.vertices(g)).count();
                if shared_edges > 0 || shared_vertices > 1 {
                    return Ok(ValidationReport::fail(
                        Clause::PairwiseIntersection,
                        format!(
                            "wedge cycles of factors {} and {} meet in more than a point",
                            wa.factor + 1,
                            wb.factor + 1
                        ),
                    ));
                }
            }
        }
        if !self.dual_graph_is_forest() {
            return Ok(ValidationReport::fail(
                Clause::DualForest,
                "dual graph of the wedge cycles has a cycle",
            ));
        }
        Ok(ValidationReport::pass())
    }

    fn embedding_defect(&self, sys: &FreeFactorSystem) -> Option<String> {
        let g = &self.graph;
        let mut seen = vec![false; sys.k()];
        for w in &self.wedges {
            if std::mem::replace(&mut seen[w.factor], true) {
                return Some(format!("factor {} has two wedge cycles", w.factor + 1));
            }
            if w.circles.len() != sys.s(w.factor) {
                return Some(format!(
                    "factor {} needs {} circles, found {}",
                    w.factor + 1,
                    sys.s(w.factor),
                    w.circles.len()
                ));
            }
            let mut used_edges = BTreeSet::new();
            let mut used_vertices = BTreeSet::new();
            for c in &w.circles {
                match g.path_endpoints(c) {
                    Some((s, t)) if s == w.hub && t == w.hub => {}
                    _ => {
                        return Some(format!(
                            "a circle of factor {} is not a closed path at its hub",
                            w.factor + 1
                        ))
                    }
                }
                for r in c {
                    if !used_edges.insert(r.edge) {
                        return Some(format!("wedge of factor {} reuses an edge", w.factor + 1));
                    }
                }
                for &r in &c[1..] {
                    if !used_vertices.insert(g.origin(r)) || g.origin(r) == w.hub {
                        return Some(format!("wedge of factor {} is not embedded", w.factor + 1));
                    }
                }
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Some(format!("factor {} has no wedge cycle", j + 1));
        }
        None
    }

    /// Bipartite dual graph: wedge nodes, plus one node per vertex shared by
    /// two or more wedges. A forest iff `E = V − components`.
    fn dual_graph_is_forest(&self) -> bool {
        let g = &self.graph;
        let vsets: Vec<BTreeSet<usize>> = self.wedges.iter().map(|w| w.vertices(g)).collect();
        let mut meeting: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, vs) in vsets.iter().enumerate() {
            for &v in vs {
                meeting.entry(v).or_default().push(i);
            }
        }
        meeting.retain(|_, ws| ws.len() >= 2);
        let nodes = self.wedges.len() + meeting.len();
        let mut uf: Vec<usize> = (0..nodes).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        for (m, ws) in meeting.values().enumerate() {
            let mnode = self.wedges.len() + m;
            for &w in ws {
                let (a, b) = (find(&mut uf, mnode), find(&mut uf, w));
                if a == b {
                    return false;
                }
                uf[a] = b;
            }
        }
        true
    }

    /// Collapses every wedge cycle to a special point.
    pub fn collapse(&self, sys: &FreeFactorSystem) -> Result<CollapsedGraph> {
        let g = &self.graph;
        let nv = g.vertex_count();
        let mut uf: Vec<usize> = (0..nv).collect();
        fn find(uf: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while uf[r] != r {
                r = uf[r];
            }
            uf[x] = r;
            r
        }
        let wedge_edges = self.wedge_edges();
        for &e in &wedge_edges {
            let (a, b) = (find(&mut uf, g.edge(e).from), find(&mut uf, g.edge(e).to));
            uf[a] = b;
        }
        let mut class_index = BTreeMap::new();
        let mut vertices = Vec::new();
        let mut vertex_map = vec![0; nv];
        for (v, slot) in vertex_map.iter_mut().enumerate() {
            let root = find(&mut uf, v);
            let idx = *class_index.entry(root).or_insert_with(|| {
                vertices.push(g.vertex_id(root).to_string());
                vertices.len() - 1
            });
            *slot = idx;
        }
        let mut edges = Vec::new();
        let mut edge_map = vec![None; g.edge_count()];
        for (i, e) in g.edges().iter().enumerate() {
            if wedge_edges.contains(&i) {
                continue;
            }
            edge_map[i] = Some(edges.len());
            edges.push(Edge {
                id: e.id.clone(),
                from: vertex_map[e.from],
                to: vertex_map[e.to],
            });
        }
        let mut special_points = vec![usize::MAX; sys.k()];
        for w in &self.wedges {
            special_points[w.factor] = vertex_map[w.hub];
        }
        if special_points.contains(&usize::MAX) {
            return Err(Error::Structural("a factor has no wedge cycle".into()));
        }
        Ok(CollapsedGraph {
            graph: CWGraph::new(vertices, edges)?,
            special_points,
            vertex_map,
            edge_map,
        })
    }

    /// Rebuilds an A-graph from a collapsed shape by blowing each special
    /// point up into a rose of `s(j)` loop edges `c{j}_{t}`.
    pub fn expand(collapsed: &CWGraph, special_points: &[usize], sys: &FreeFactorSystem) -> Result<AGraph> {
        let mut edges = collapsed.edges().to_vec();
        let mut wedges = Vec::new();
        for (j, &hub) in special_points.iter().enumerate() {
            let mut circles = Vec::new();
            for t in 0..sys.s(j) {
                circles.push(vec![EdgeRef::fwd(edges.len())]);
                edges.push(Edge {
                    id: format!("c{}_{}", j + 1, t + 1),
                    from: hub,
                    to: hub,
                });
            }
            wedges.push(WedgeCycle {
                factor: j,
                hub,
                circles,
            });
        }
        Ok(AGraph::new(
            CWGraph::new(collapsed.vertex_ids().to_vec(), edges)?,
            wedges,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys21() -> FreeFactorSystem {
        FreeFactorSystem::standard(2, &[1]).unwrap()
    }

    /// Special hub u with the a-loop, stem to v, loop b at v.
    fn stem_and_loop() -> AGraph {
        let g = CWGraph::from_pairs(2, &[(0, 1), (1, 1), (0, 0)]).unwrap();
        AGraph::new(
            g,
            vec![WedgeCycle {
                factor: 0,
                hub: 0,
                circles: vec![vec![EdgeRef::fwd(2)]],
            }],
        )
    }

    #[test]
    fn stem_and_loop_is_valid() {
        let a = stem_and_loop();
        assert!(a.validate(&sys21()).unwrap().ok);
    }

    #[test]
    fn wedges_sharing_an_edge_fail_pairwise() {
        let sys = FreeFactorSystem::standard(3, &[1, 1]).unwrap();
        // theta-like: loop shared by both wedges
        let g = CWGraph::from_pairs(2, &[(0, 0), (0, 1), (1, 1), (0, 1)]).unwrap();
        let a = AGraph::new(
            g,
            vec![
                WedgeCycle {
                    factor: 0,
                    hub: 0,
                    circles: vec![vec![EdgeRef::fwd(0)]],
                },
                WedgeCycle {
                    factor: 1,
                    hub: 0,
                    circles: vec![vec![EdgeRef::fwd(0)]],
                },
            ],
        );
        let r = a.validate(&sys).unwrap();
        assert_eq!(r.failed, Some(Clause::PairwiseIntersection));
    }

    #[test]
    fn valence_two_vertex_fails() {
        // subdivide the stem
        let g = CWGraph::from_pairs(3, &[(0, 2), (2, 1), (1, 1), (0, 0)]).unwrap();
        let mut a = AGraph::new(
            g,
            vec![WedgeCycle {
                factor: 0,
                hub: 0,
                circles: vec![vec![EdgeRef::fwd(3)]],
            }],
        );
        assert_eq!(a.validate(&sys21()).unwrap().failed, Some(Clause::Valence));
        a.wedges.clear();
        assert_eq!(a.validate(&sys21()).unwrap().failed, Some(Clause::Valence));
    }

    #[test]
    fn missing_edge_is_structural() {
        let mut a = stem_and_loop();
        a.wedges[0].circles[0][0] = EdgeRef::fwd(9);
        assert!(matches!(a.validate(&sys21()), Err(Error::Structural(_))));
    }

    #[test]
    fn dual_graph_cycle_detected() {
        // three two-edge circles on a triangle of hubs, pairwise meeting in one vertex
        let sys = FreeFactorSystem::standard(6, &[1, 1, 1]).unwrap();
        let g = CWGraph::from_pairs(3, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2), (0, 0), (1, 1)]).unwrap();
        let w = |f, hub, a: usize, b: usize| WedgeCycle {
            factor: f,
            hub,
            circles: vec![vec![EdgeRef::fwd(a), EdgeRef::fwd(b)]],
        };
        let a = AGraph::new(g, vec![w(0, 0, 0, 1), w(1, 1, 2, 3), w(2, 2, 4, 5)]);
        let r = a.validate(&sys).unwrap();
        assert_eq!(r.failed, Some(Clause::DualForest), "{r:?}");
    }

    #[test]
    fn collapse_stem_and_loop() {
        let c = stem_and_loop().collapse(&sys21()).unwrap();
        assert_eq!(c.graph.vertex_count(), 2);
        assert_eq!(c.graph.edge_count(), 2);
        assert_eq!(c.special_points, vec![0]);
        assert_eq!(c.rank(), 1);
    }

    #[test]
    fn collapse_of_k0_graph_is_unchanged() {
        let sys = FreeFactorSystem::standard(2, &[]).unwrap();
        let g = CWGraph::from_pairs(2, &[(0, 1), (0, 1), (0, 1)]).unwrap();
        let a = AGraph::new(g.clone(), vec![]);
        let c = a.collapse(&sys).unwrap();
        assert_eq!(c.graph, g);
        assert!(c.special_points.is_empty());
    }

    #[test]
    fn collapse_relative_rose() {
        // R_2(A): wedge circle a at the hub joined by a zero-length stem
        // convention to the b petal; after collapse: one special point, rank 1.
        let c = stem_and_loop().collapse(&sys21()).unwrap();
        assert_eq!(c.special_points.len(), 1);
        assert_eq!(c.rank(), 1);
    }

    #[test]
    fn expand_then_collapse_round_trip() {
        let sys = sys21();
        let shape = CWGraph::from_pairs(2, &[(0, 1), (1, 1)]).unwrap();
        let a = AGraph::expand(&shape, &[0], &sys).unwrap();
        assert!(a.validate(&sys).unwrap().ok);
        assert_eq!(a.collapse(&sys).unwrap().graph, shape);
    }
}
