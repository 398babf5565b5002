use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{CWGraph, Edge, EdgeRef};
use crate::scalar::FormalReal;
use crate::word::{FreeFactorSystem, Word};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VertexLabel {
    Trivial,
    /// Carries the factor `A_j` (0-based `j`).
    Special(usize),
    /// Infinite cyclic, generated by the given word.
    Cyclic(Word),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum EdgeLabel {
    Trivial,
    Cyclic(Word),
}

impl VertexLabel {
    pub fn is_trivial(&self) -> bool {
        matches!(self, VertexLabel::Trivial)
    }

    /// Membership of `g` in the vertex group.
    pub fn contains(&self, sys: &FreeFactorSystem, g: &Word) -> bool {
        match self {
            VertexLabel::Trivial => g.is_identity(),
            VertexLabel::Special(j) => sys.in_factor(g, *j),
            VertexLabel::Cyclic(w) => is_power_of(g, w),
        }
    }

    /// Generators of the vertex group.
    pub fn generators(&self, sys: &FreeFactorSystem) -> Vec<Word> {
        match self {
            VertexLabel::Trivial => Vec::new(),
            VertexLabel::Special(j) => sys.factor_gens(*j).map(Word::gen).collect(),
            VertexLabel::Cyclic(w) => vec![w.clone()],
        }
    }

    pub fn rank(&self, sys: &FreeFactorSystem) -> usize {
        match self {
            VertexLabel::Trivial => 0,
            VertexLabel::Special(j) => sys.s(*j),
            VertexLabel::Cyclic(_) => 1,
        }
    }
}

/// Whether `g = w^m` for some integer `m`.
pub fn is_power_of(g: &Word, w: &Word) -> bool {
    if g.is_identity() {
        return true;
    }
    if w.is_identity() {
        return false;
    }
    let (wc, _) = w.cyclic_reduce();
    let m = g.len() / wc.len().max(1) + 1;
    (1..=m as i64).any(|k| w.pow(k) == *g || w.pow(-k) == *g)
}

/// A path in a graph of groups: `g₀ e₁ g₁ … e_m g_m` starting at `start`,
/// with `gᵢ` an element of the vertex group at the `i`-th vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GogPath {
    pub start: usize,
    pub elems: Vec<Word>,
    pub edges: Vec<EdgeRef>,
}

impl GogPath {
    pub fn at(start: usize) -> Self {
        GogPath {
            start,
            elems: vec![Word::identity()],
            edges: Vec::new(),
        }
    }

    pub fn vertex_element(start: usize, g: Word) -> Self {
        GogPath {
            start,
            elems: vec![g],
            edges: Vec::new(),
        }
    }

    pub fn end(&self, graph: &CWGraph) -> usize {
        self.edges.last().map_or(self.start, |&r| graph.terminus(r))
    }

    pub fn is_trivial(&self) -> bool {
        self.edges.is_empty() && self.elems[0].is_identity()
    }

    /// Right-multiplies the final vertex element.
    pub fn times(&mut self, g: &Word) {
        let last = self.elems.last_mut().expect("paths carry at least one element");
        *last = last.mul(g);
    }

    /// Appends an edge followed by a vertex element, cancelling `e·1·ē`.
    pub fn push(&mut self, r: EdgeRef, g: Word) {
        if self.edges.last() == Some(&r.flip()) && self.elems.last().is_some_and(Word::is_identity) {
            self.edges.pop();
            self.elems.pop();
            self.times(&g);
        } else {
            self.edges.push(r);
            self.elems.push(g);
        }
    }

    /// Concatenation, reduced at the junction. The caller guarantees the
    /// endpoints match.
    pub fn concat(&self, other: &GogPath) -> GogPath {
        let mut out = self.clone();
        out.times(&other.elems[0]);
        for (i, &r) in other.edges.iter().enumerate() {
            out.push(r, other.elems[i + 1].clone());
        }
        out
    }

    pub fn reduced(&self) -> GogPath {
        GogPath::at(self.start).concat(self)
    }

    pub fn inverse(&self, graph: &CWGraph) -> GogPath {
        GogPath {
            start: self.end(graph),
            elems: self.elems.iter().rev().map(Word::inverse).collect(),
            edges: self.edges.iter().rev().map(|r| r.flip()).collect(),
        }
    }

    pub fn is_loop_at(&self, graph: &CWGraph, v: usize) -> bool {
        self.start == v && self.end(graph) == v
    }

    /// Cyclic normal form of a closed path: the edges of a cyclically reduced
    /// conjugate. Empty iff the loop is elliptic.
    pub fn cyclic_edges(&self) -> Vec<EdgeRef> {
        let p = self.reduced();
        let mut edges = p.edges;
        let mut elems = p.elems;
        // wrap element sits between the last and the first edge
        let first = elems.remove(0);
        if let Some(last) = elems.last_mut() {
            *last = last.mul(&first);
        }
        while edges.len() >= 2 {
            let m = edges.len();
            if edges[0] == edges[m - 1].flip() && elems[m - 1].is_identity() {
                let after_first = elems.remove(0);
                edges.remove(0);
                edges.pop();
                elems.pop();
                if let Some(last) = elems.last_mut() {
                    *last = last.mul(&after_first);
                }
            } else {
                break;
            }
        }
        edges
    }
}

/// A simplicial tree with special points presented by a finite graph of groups
/// with a marking of the system generators by loops at `root`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphOfGroupsTree {
    pub system: FreeFactorSystem,
    pub graph: CWGraph,
    pub lengths: Vec<FormalReal>,
    pub vertex_labels: Vec<VertexLabel>,
    pub edge_labels: Vec<EdgeLabel>,
    pub marking: Vec<GogPath>,
    pub root: usize,
}

impl GraphOfGroupsTree {
    pub fn new(
        system: FreeFactorSystem,
        graph: CWGraph,
        lengths: Vec<FormalReal>,
        vertex_labels: Vec<VertexLabel>,
        edge_labels: Vec<EdgeLabel>,
        marking: Vec<GogPath>,
        root: usize,
    ) -> Result<Self> {
        let t = GraphOfGroupsTree {
            system,
            graph,
            lengths,
            vertex_labels,
            edge_labels,
            marking,
            root,
        };
        t.check_structure()?;
        Ok(t)
    }

    fn check_structure(&self) -> Result<()> {
        let g = &self.graph;
        if self.lengths.len() != g.edge_count() || self.edge_labels.len() != g.edge_count() {
            return Err(Error::Structural("one length and label per edge is required".into()));
        }
        if self.vertex_labels.len() != g.vertex_count() {
            return Err(Error::Structural("one label per vertex is required".into()));
        }
        if self.root >= g.vertex_count() {
            return Err(Error::Structural("root outside the graph".into()));
        }
        if !g.is_connected() {
            return Err(Error::Structural("quotient graph is not connected".into()));
        }
        if self.marking.len() != self.system.gen_count() as usize {
            return Err(Error::Structural("marking must give a loop for every generator".into()));
        }
        for (e, l) in self.lengths.iter().enumerate() {
            if !l.is_positive() {
                return Err(Error::Domain(format!(
                    "edge {} needs a positive length, has {l}",
                    g.edge(e).id
                )));
            }
        }
        let mut seen = vec![false; self.system.k()];
        for label in &self.vertex_labels {
            match label {
                VertexLabel::Special(j) if *j < self.system.k() => {
                    if std::mem::replace(&mut seen[*j], true) {
                        return Err(Error::Structural(format!("factor {} labels two vertices", j + 1)));
                    }
                }
                VertexLabel::Special(j) => {
                    return Err(Error::Structural(format!("no factor {}", j + 1)));
                }
                VertexLabel::Cyclic(w) if w.is_identity() => {
                    return Err(Error::Structural("cyclic vertex label must be nontrivial".into()));
                }
                _ => {}
            }
        }
        if let Some(j) = seen.iter().position(|s| !s) {
            return Err(Error::Structural(format!("factor {} labels no vertex", j + 1)));
        }
        // each cyclic edge group is amalgamated away once
        let rank: usize = self.vertex_labels.iter().map(|l| l.rank(&self.system)).sum::<usize>();
        let amalgamated = self.edge_labels.iter().filter(|l| **l != EdgeLabel::Trivial).count();
        if rank as i64 - amalgamated as i64 + g.rank() != self.system.rank() as i64 {
            return Err(Error::Structural(format!(
                "vertex groups of total rank {rank}, {amalgamated} cyclic edge groups and graph rank {} do not give n = {}",
                g.rank(),
                self.system.rank()
            )));
        }
        for (gen, p) in self.marking.iter().enumerate() {
            let name = self.system.name(gen as u32);
            if p.edges.len() + 1 != p.elems.len() || p.start != self.root || !p.is_loop_at(g, self.root) {
                return Err(Error::Structural(format!(
                    "marking of {name} is not a loop at the root"
                )));
            }
            let mut at = p.start;
            for (i, elem) in p.elems.iter().enumerate() {
                if !self.vertex_labels[at].contains(&self.system, elem) {
                    return Err(Error::Structural(format!(
                        "marking of {name} uses {} outside the group at {}",
                        self.system.format_word(elem),
                        g.vertex_id(at)
                    )));
                }
                if let Some(&r) = p.edges.get(i) {
                    at = g.terminus(r);
                }
            }
        }
        for j in 0..self.system.k() {
            let mut stem: Option<(Vec<EdgeRef>, Vec<Word>)> = None;
            let mut pairs = Vec::new();
            for y in self.system.factor_gens(j) {
                let p = self.marking[y as usize].reduced();
                let m = p.edges.len();
                let ok = m.is_multiple_of(2) && {
                    let h = m / 2;
                    let mid = self.graph_vertex_after(&p, h);
                    let pre = (p.edges[..h].to_vec(), p.elems[..h].to_vec());
                    let ok_stem = stem.as_ref().is_none_or(|s| *s == pre);
                    stem.get_or_insert(pre.clone());
                    pairs.push((Word::gen(y), p.elems[h].clone()));
                    ok_stem
                        && self.vertex_labels[mid] == VertexLabel::Special(j)
                        && p.edges[h..].iter().rev().map(|r| r.flip()).eq(pre.0.iter().copied())
                        && p.elems[h + 1..]
                            .iter()
                            .rev()
                            .map(Word::inverse)
                            .eq(pre.1.iter().cloned())
                };
                if !ok {
                    return Err(Error::Structural(format!(
                        "marking of {} does not conjugate it into its special vertex",
                        self.system.name(y)
                    )));
                }
            }
            if crate::word::common_conjugator(&pairs).is_none() {
                return Err(Error::Structural(format!(
                    "marking does not send factor {} to a conjugate of its vertex group",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    fn graph_vertex_after(&self, p: &GogPath, k: usize) -> usize {
        if k == 0 {
            p.start
        } else {
            self.graph.terminus(p.edges[k - 1])
        }
    }

    pub fn has_nontrivial_edge_labels(&self) -> bool {
        self.edge_labels.iter().any(|l| *l != EdgeLabel::Trivial)
    }

    /// Errors with `Unsupported` when edge groups are nontrivial.
    pub fn require_trivial_edge_groups(&self) -> Result<()> {
        if self.has_nontrivial_edge_labels() {
            return Err(Error::Unsupported(
                "computation needs trivial edge groups; nontrivial cyclic edge labels are only validated".into(),
            ));
        }
        Ok(())
    }

    /// Loop at the root representing `w`.
    pub fn loop_of(&self, w: &Word) -> GogPath {
        let mut out = GogPath::at(self.root);
        for l in w.letters() {
            let p = &self.marking[l.gen as usize];
            let p = if l.inverse { p.inverse(&self.graph) } else { p.clone() };
            out = out.concat(&p);
        }
        out
    }

    pub fn path_length(&self, edges: &[EdgeRef]) -> FormalReal {
        edges.iter().map(|r| self.lengths[r.edge].clone()).sum()
    }

    pub fn loop_length(&self, p: &GogPath) -> FormalReal {
        self.path_length(&p.cyclic_edges())
    }

    pub fn total_length(&self) -> FormalReal {
        self.lengths.iter().sum()
    }

    pub fn vertex_edge_ends(&self, v: usize) -> Vec<EdgeRef> {
        self.graph.star(v)
    }

    /// Whether every tree vertex over `v` has at least three directions.
    pub fn is_branch_vertex(&self, v: usize) -> bool {
        let label = &self.vertex_labels[v];
        let mut directions = 0usize;
        for r in self.graph.star(v) {
            directions += match (&self.edge_labels[r.edge], label) {
                (_, VertexLabel::Trivial) => 1,
                (EdgeLabel::Trivial, _) => 3,
                (EdgeLabel::Cyclic(_), VertexLabel::Cyclic(_)) => 1,
                (EdgeLabel::Cyclic(_), VertexLabel::Special(_)) => 3,
            };
        }
        directions >= 3
    }

    pub fn with_lengths(&self, lengths: Vec<FormalReal>) -> Result<Self> {
        GraphOfGroupsTree::new(
            self.system.clone(),
            self.graph.clone(),
            lengths,
            self.vertex_labels.clone(),
            self.edge_labels.clone(),
            self.marking.clone(),
            self.root,
        )
    }

    pub fn to_json(&self) -> Value {
        let g = &self.graph;
        let sys = &self.system;
        let edges: Vec<Value> = g
            .edges()
            .iter()
            .map(|e| json!({"id": e.id, "from": g.vertex_id(e.from), "to": g.vertex_id(e.to)}))
            .collect();
        let lengths: BTreeMap<&str, &FormalReal> = g.edges().iter().map(|e| e.id.as_str()).zip(&self.lengths).collect();
        let labels: BTreeMap<&str, Value> = self
            .vertex_labels
            .iter()
            .enumerate()
            .map(|(v, l)| {
                let js = match l {
                    VertexLabel::Trivial => json!("trivial"),
                    VertexLabel::Special(j) => json!({"special": j + 1}),
                    VertexLabel::Cyclic(w) => json!({"cyclic": sys.format_word(w)}),
                };
                (g.vertex_id(v), js)
            })
            .collect();
        let edge_labels: BTreeMap<&str, Value> = self
            .edge_labels
            .iter()
            .enumerate()
            .filter_map(|(e, l)| match l {
                EdgeLabel::Trivial => None,
                EdgeLabel::Cyclic(w) => Some((g.edge(e).id.as_str(), json!({"cyclic": sys.format_word(w)}))),
            })
            .collect();
        let marking: BTreeMap<&str, Vec<Value>> = self
            .marking
            .iter()
            .enumerate()
            .map(|(gen, p)| {
                let mut items = Vec::new();
                let mut at = p.start;
                for (i, elem) in p.elems.iter().enumerate() {
                    if !elem.is_identity() {
                        items.push(json!({"v": g.vertex_id(at), "g": sys.format_word(elem)}));
                    }
                    if let Some(&r) = p.edges.get(i) {
                        items.push(json!(g.format_edge_ref(r)));
                        at = g.terminus(r);
                    }
                }
                (sys.name(gen as u32), items)
            })
            .collect();
        let mut out = json!({
            "rospace_format": 1,
            "system": sys,
            "graph": {"vertices": g.vertex_ids(), "edges": edges},
            "lengths": lengths,
            "vertex_labels": labels,
            "marking": marking,
            "root": g.vertex_id(self.root),
        });
        if !edge_labels.is_empty() {
            out["edge_labels"] = json!(edge_labels);
        }
        out
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct EdgeJson {
            id: String,
            from: String,
            to: String,
        }
        #[derive(Deserialize)]
        struct GraphJson {
            vertices: Vec<String>,
            edges: Vec<EdgeJson>,
        }
        #[derive(Deserialize)]
        #[serde(rename_all = "lowercase")]
        enum LabelJson {
            Special(usize),
            Cyclic(String),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum LabelOrName {
            Name(String),
            Label(LabelJson),
        }
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Item {
            Edge(String),
            Elem { v: String, g: String },
        }
        #[derive(Deserialize)]
        struct TreeJson {
            #[serde(default)]
            rospace_format: Option<u32>,
            system: FreeFactorSystem,
            graph: GraphJson,
            lengths: BTreeMap<String, FormalReal>,
            #[serde(default)]
            vertex_labels: BTreeMap<String, LabelOrName>,
            #[serde(default)]
            edge_labels: BTreeMap<String, LabelOrName>,
            marking: BTreeMap<String, Vec<Item>>,
            root: Option<String>,
        }
        let t: TreeJson = serde_json::from_value(v.clone()).map_err(|e| Error::schema("$", e.to_string()))?;
        if let Some(f) = t.rospace_format {
            if f != 1 {
                return Err(Error::schema(
                    "$.rospace_format",
                    format!("unsupported format version {f}"),
                ));
            }
        }
        let sys = t.system;
        let vid = |id: &str, path: &str| {
            t.graph
                .vertices
                .iter()
                .position(|x| x == id)
                .ok_or_else(|| Error::schema(path, format!("unknown vertex {id:?}")))
        };
        let mut edges = Vec::new();
        for (i, e) in t.graph.edges.iter().enumerate() {
            edges.push(Edge {
                id: e.id.clone(),
                from: vid(&e.from, &format!("$.graph.edges[{i}].from"))?,
                to: vid(&e.to, &format!("$.graph.edges[{i}].to"))?,
            });
        }
        let graph = CWGraph::new(t.graph.vertices.clone(), edges)?;
        let mut lengths = vec![None; graph.edge_count()];
        for (id, l) in &t.lengths {
            let e = graph
                .edge_index(id)
                .ok_or_else(|| Error::schema(format!("$.lengths.{id}"), "unknown edge"))?;
            lengths[e] = Some(l.clone());
        }
        let lengths = lengths
            .into_iter()
            .enumerate()
            .map(|(e, l)| {
                l.ok_or_else(|| Error::schema("$.lengths", format!("no length for edge {}", graph.edge(e).id)))
            })
            .collect::<Result<Vec<_>>>()?;
        let mut vertex_labels = vec![VertexLabel::Trivial; graph.vertex_count()];
        for (id, l) in &t.vertex_labels {
            let path = format!("$.vertex_labels.{id}");
            let v = vid(id, &path)?;
            vertex_labels[v] = match l {
                LabelOrName::Name(s) if s == "trivial" => VertexLabel::Trivial,
                LabelOrName::Name(s) => return Err(Error::schema(path, format!("unknown label {s:?}"))),
                LabelOrName::Label(LabelJson::Special(j)) if *j >= 1 => VertexLabel::Special(j - 1),
                LabelOrName::Label(LabelJson::Special(_)) => {
                    return Err(Error::schema(path, "factors are numbered from 1"))
                }
                LabelOrName::Label(LabelJson::Cyclic(w)) => {
                    VertexLabel::Cyclic(sys.parse_word(w).map_err(|e| Error::schema(&path, e.to_string()))?)
                }
            };
        }
        let mut edge_labels = vec![EdgeLabel::Trivial; graph.edge_count()];
        for (id, l) in &t.edge_labels {
            let path = format!("$.edge_labels.{id}");
            let e = graph
                .edge_index(id)
                .ok_or_else(|| Error::schema(&path, "unknown edge"))?;
            edge_labels[e] = match l {
                LabelOrName::Name(s) if s == "trivial" => EdgeLabel::Trivial,
                LabelOrName::Label(LabelJson::Cyclic(w)) => {
                    EdgeLabel::Cyclic(sys.parse_word(w).map_err(|e| Error::schema(&path, e.to_string()))?)
                }
                _ => return Err(Error::schema(path, "edge labels are \"trivial\" or {\"cyclic\": word}")),
            };
        }
        let root = match &t.root {
            Some(r) => vid(r, "$.root")?,
            None => 0,
        };
        let mut marking = vec![GogPath::at(root); sys.gen_count() as usize];
        for (name, items) in &t.marking {
            let path = format!("$.marking.{name}");
            let gen = sys.gen_id(name).map_err(|e| Error::schema(&path, e.to_string()))?;
            let mut p = GogPath::at(root);
            for (i, item) in items.iter().enumerate() {
                let ipath = format!("{path}[{i}]");
                match item {
                    Item::Edge(s) => {
                        let r = graph
                            .parse_edge_ref(s)
                            .ok_or_else(|| Error::schema(&ipath, format!("unknown edge {s:?}")))?;
                        if graph.origin(r) != p.end(&graph) {
                            return Err(Error::schema(&ipath, "edge does not continue the path"));
                        }
                        p.edges.push(r);
                        p.elems.push(Word::identity());
                    }
                    Item::Elem { v, g } => {
                        if vid(v, &ipath)? != p.end(&graph) {
                            return Err(Error::schema(&ipath, "vertex element away from the current vertex"));
                        }
                        p.times(&sys.parse_word(g).map_err(|e| Error::schema(&ipath, e.to_string()))?);
                    }
                }
            }
            marking[gen as usize] = p;
        }
        if let Some(missing) = (0..sys.gen_count()).find(|&g| !t.marking.contains_key(sys.name(g))) {
            return Err(Error::schema(
                "$.marking",
                format!("no loop for generator {}", sys.name(missing)),
            ));
        }
        GraphOfGroupsTree::new(sys, graph, lengths, vertex_labels, edge_labels, marking, root)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn push_cancels_backtracking_through_trivial_elements() {
        let mut p = GogPath::at(0);
        p.push(EdgeRef::fwd(0), Word::identity());
        p.push(EdgeRef::back(0), Word::gen(1));
        assert_eq!(p, GogPath::vertex_element(0, Word::gen(1)));
        let mut q = GogPath::at(0);
        q.push(EdgeRef::fwd(0), Word::gen(0));
        q.push(EdgeRef::back(0), Word::identity());
        assert_eq!(q.edges.len(), 2);
    }

    #[test]
    fn cyclic_edges_pinch_across_the_base() {
        let mut p = GogPath::at(0);
        p.push(EdgeRef::fwd(0), Word::gen(0));
        p.push(EdgeRef::back(0), Word::identity());
        assert!(p.cyclic_edges().is_empty());
        p.times(&Word::gen(1));
        assert_eq!(p.cyclic_edges().len(), 2);
        let mut q = GogPath::vertex_element(0, Word::identity());
        q.push(EdgeRef::fwd(0), Word::identity());
        q.push(EdgeRef::fwd(1), Word::identity());
        q.push(EdgeRef::back(0), Word::identity());
        assert_eq!(q.cyclic_edges(), vec![EdgeRef::fwd(1)]);
    }

    #[test]
    fn powers() {
        let w = Word::gen(0).mul(&Word::gen(1));
        assert!(is_power_of(&w.pow(3), &w));
        assert!(is_power_of(&w.pow(-2), &w));
        assert!(!is_power_of(&Word::gen(0), &w));
    }
}
