use std::collections::VecDeque;

use crate::error::{Error, Result};

/// An oriented edge: edge `edge` traversed forwards or backwards. Reversal is
/// `flip`, a fixed-point-free involution on oriented edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeRef {
    pub edge: usize,
    pub forward: bool,
}

impl EdgeRef {
    pub fn fwd(edge: usize) -> Self {
        EdgeRef { edge, forward: true }
    }

    pub fn back(edge: usize) -> Self {
        EdgeRef { edge, forward: false }
    }

    pub fn flip(self) -> Self {
        EdgeRef {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub id: String,
    pub from: usize,
    pub to: usize,
}

/// A finite connected 1-dimensional CW complex.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CWGraph {
    vertices: Vec<String>,
    edges: Vec<Edge>,
}

impl CWGraph {
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>) -> Result<Self> {
        let g = CWGraph { vertices, edges };
        g.check_structure()?;
        Ok(g)
    }

    /// Vertices named `v0, v1, ...` and edges `e0, e1, ...`.
    pub fn from_pairs(nv: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        CWGraph::new(
            (0..nv).map(|i| format!("v{i}")).collect(),
            pairs
                .iter()
                .enumerate()
                .map(|(i, &(from, to))| Edge {
                    id: format!("e{i}"),
                    from,
                    to,
                })
                .collect(),
        )
    }

    fn check_structure(&self) -> Result<()> {
        let nv = self.vertices.len();
        for e in &self.edges {
            if e.from >= nv || e.to >= nv {
                return Err(Error::Structural(format!(
                    "edge {} has an endpoint outside the vertex set",
                    e.id
                )));
            }
        }
        let mut ids: Vec<&str> = self.vertices.iter().map(String::as_str).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structural("duplicate vertex id".into()));
        }
        let mut ids: Vec<&str> = self.edges.iter().map(|e| e.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Structural("duplicate edge id".into()));
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == id)
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.id == id)
    }

    /// Parses `e3` / `-e3` into an oriented edge.
    pub fn parse_edge_ref(&self, s: &str) -> Option<EdgeRef> {
        let (id, forward) = match s.strip_prefix('-') {
            Some(rest) => (rest, false),
            None => (s, true),
        };
        self.edge_index(id).map(|edge| EdgeRef { edge, forward })
    }

    pub fn format_edge_ref(&self, r: EdgeRef) -> String {
        if r.forward {
            self.edges[r.edge].id.clone()
        } else {
            format!("-{}", self.edges[r.edge].id)
        }
    }

    pub fn origin(&self, r: EdgeRef) -> usize {
        let e = &self.edges[r.edge];
        if r.forward {
            e.from
        } else {
            e.to
        }
    }

    pub fn terminus(&self, r: EdgeRef) -> usize {
        self.origin(r.flip())
    }

    /// Oriented edges leaving `v`; a loop contributes both orientations.
    pub fn star(&self, v: usize) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        for (i, e) in self.edges.iter().enumerate() {
            if e.from == v {
                out.push(EdgeRef::fwd(i));
            }
            if e.to == v {
                out.push(EdgeRef::back(i));
            }
        }
        out
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|e| usize::from(e.from == v) + usize::from(e.to == v))
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        self.bfs_tree(0).iter().all(Option::is_some)
    }

    /// Rank of the fundamental group, `E − V + 1` for connected graphs.
    pub fn rank(&self) -> i64 {
        self.edges.len() as i64 - self.vertices.len() as i64 + 1
    }

    /// Breadth-first spanning tree from `root`: for every reached vertex, the
    /// oriented edge from its parent (`None` for the root itself is encoded as
    /// `Some(None)`); unreached vertices map to `None`.
    pub fn bfs_tree(&self, root: usize) -> Vec<Option<Option<EdgeRef>>> {
        let mut parent: Vec<Option<Option<EdgeRef>>> = vec![None; self.vertices.len()];
        if root >= self.vertices.len() {
            return parent;
        }
        parent[root] = Some(None);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for r in self.star(v) {
                let w = self.terminus(r);
                if parent[w].is_none() {
                    parent[w] = Some(Some(r));
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    pub fn spanning_tree(&self, root: usize) -> SpanningTree {
        let parent: Vec<Option<EdgeRef>> = self.bfs_tree(root).into_iter().map(|p| p.flatten()).collect();
        let mut in_tree = vec![false; self.edges.len()];
        for r in parent.iter().flatten() {
            in_tree[r.edge] = true;
        }
        SpanningTree { root, parent, in_tree }
    }

    /// Combinatorial diameter (edge count) of the graph.
    pub fn diameter(&self) -> usize {
        (0..self.vertices.len())
            .map(|v| {
                let mut dist = vec![usize::MAX; self.vertices.len()];
                dist[v] = 0;
                let mut q = VecDeque::from([v]);
                while let Some(x) = q.pop_front() {
                    for r in self.star(x) {
                        let y = self.terminus(r);
                        if dist[y] == usize::MAX {
                            dist[y] = dist[x] + 1;
                            q.push_back(y);
                        }
                    }
                }
                dist.into_iter().filter(|&d| d != usize::MAX).max().unwrap_or(0)
            })
            .max()
            .unwrap_or(0)
    }

    /// Whether `path` is a connected edge path, returning its endpoints.
    pub fn path_endpoints(&self, path: &[EdgeRef]) -> Option<(usize, usize)> {
        let first = path.first()?;
        let mut at = self.terminus(*first);
        for r in &path[1..] {
            if self.origin(*r) != at {
                return None;
            }
            at = self.terminus(*r);
        }
        Some((self.origin(*first), at))
    }
}

#[derive(Clone, Debug)]
pub struct SpanningTree {
    pub root: usize,
    pub parent: Vec<Option<EdgeRef>>,
    pub in_tree: Vec<bool>,
}

impl SpanningTree {
    /// Tree path from the root to `v`.
    pub fn path_to(&self, graph: &CWGraph, v: usize) -> Vec<EdgeRef> {
        let mut path = Vec::new();
        let mut at = v;
        while let Some(r) = self.parent[at] {
            path.push(r);
            at = graph.origin(r);
        }
        path.reverse();
        path
    }

    pub fn path_from(&self, graph: &CWGraph, v: usize) -> Vec<EdgeRef> {
        reverse_path(&self.path_to(graph, v))
    }

    pub fn non_tree_edges(&self) -> impl Iterator<Item = usize> + '_ {
        self.in_tree.iter().enumerate().filter(|(_, &t)| !t).map(|(i, _)| i)
    }
}

pub fn reverse_path(path: &[EdgeRef]) -> Vec<EdgeRef> {
    path.iter().rev().map(|r| r.flip()).collect()
}

/// Removes backtracking `e ē`.
pub fn reduce_path(path: impl IntoIterator<Item = EdgeRef>) -> Vec<EdgeRef> {
    let mut out: Vec<EdgeRef> = Vec::new();
    for r in path {
        if out.last() == Some(&r.flip()) {
            out.pop();
        } else {
            out.push(r);
        }
    }
    out
}

/// Cyclic reduction of a reduced closed path.
pub fn cyclically_reduce_path(path: &[EdgeRef]) -> Vec<EdgeRef> {
    let mut i = 0;
    let mut j = path.len();
    while j >= i + 2 && path[j - 1] == path[i].flip() {
        i += 1;
        j -= 1;
    }
    path[i..j].to_vec()
}
