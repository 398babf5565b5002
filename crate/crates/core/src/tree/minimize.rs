use super::gog::{EdgeLabel, GogPath, GraphOfGroupsTree, VertexLabel};
use crate::error::{Error, Result};
use crate::graph::{CWGraph, Edge, EdgeRef};
use crate::scalar::FormalReal;
use crate::word::Word;

enum Step {
    Leaf(usize),
    Absorb(usize),
}

/// Deletes valence-1 trivial vertices and absorbs valence-2 trivial vertices
/// until none remain. Vertices touching labeled edges are left alone.
pub fn minimize(t: &GraphOfGroupsTree) -> Result<GraphOfGroupsTree> {
    let mut t = t.clone();
    loop {
        let step = (0..t.graph.vertex_count()).find_map(|v| {
            if !t.vertex_labels[v].is_trivial() {
                return None;
            }
            let star = t.graph.star(v);
            if star.iter().any(|r| t.edge_labels[r.edge] != EdgeLabel::Trivial) {
                return None;
            }
            match star.as_slice() {
                [_] => Some(Step::Leaf(v)),
                [a, b] if a.edge != b.edge => Some(Step::Absorb(v)),
                _ => None,
            }
        });
        t = match step {
            None => return Ok(t),
            Some(Step::Leaf(v)) => remove_leaf(&t, v)?,
            Some(Step::Absorb(v)) => absorb(&t, v)?,
        };
    }
}

/// Moves the root across the edge `r` leaving it; the marking is conjugated
/// by that edge, so lengths are unchanged.
pub fn reroot(t: &GraphOfGroupsTree, r: EdgeRef) -> Result<GraphOfGroupsTree> {
    if t.graph.origin(r) != t.root {
        return Err(Error::Structural("rerooting edge must leave the root".into()));
    }
    let to = t.graph.terminus(r);
    let marking = t
        .marking
        .iter()
        .map(|m| {
            let mut p = GogPath::at(to);
            p.push(r.flip(), Word::identity());
            let mut p = p.concat(m);
            p.push(r, Word::identity());
            p.reduced()
        })
        .collect();
    Ok(GraphOfGroupsTree {
        marking,
        root: to,
        ..t.clone()
    })
}

/// Reroots along a path of edges starting at the root.
pub fn reroot_along(t: &GraphOfGroupsTree, path: &[EdgeRef]) -> Result<GraphOfGroupsTree> {
    let mut t = t.clone();
    for &r in path {
        t = reroot(&t, r)?;
    }
    Ok(t)
}

/// Rebuilds the tree without vertex `drop_v` from an edge list
/// `(from, to, id, length, label)` in old vertex indices.
fn rebuild(
    t: &GraphOfGroupsTree,
    drop_v: usize,
    edges: Vec<(usize, usize, String, FormalReal, EdgeLabel)>,
    marking: Vec<GogPath>,
) -> Result<GraphOfGroupsTree> {
    let vmap = |v: usize| if v > drop_v { v - 1 } else { v };
    let vertices: Vec<String> = (0..t.graph.vertex_count())
        .filter(|&v| v != drop_v)
        .map(|v| t.graph.vertex_id(v).to_string())
        .collect();
    let mut lengths = Vec::new();
    let mut labels = Vec::new();
    let edges: Vec<Edge> = edges
        .into_iter()
        .map(|(from, to, id, len, label)| {
            lengths.push(len);
            labels.push(label);
            Edge {
                id,
                from: vmap(from),
                to: vmap(to),
            }
        })
        .collect();
    let graph = CWGraph::new(vertices, edges)?;
    let marking = marking
        .into_iter()
        .map(|p| GogPath {
            start: vmap(p.start),
            ..p
        })
        .collect();
    GraphOfGroupsTree::new(
        t.system.clone(),
        graph,
        lengths,
        t.vertex_labels
            .iter()
            .enumerate()
            .filter(|&(v, _)| v != drop_v)
            .map(|(_, l)| l.clone())
            .collect(),
        labels,
        marking,
        vmap(t.root),
    )
}

fn edge_list(t: &GraphOfGroupsTree) -> Vec<(usize, usize, String, FormalReal, EdgeLabel)> {
    t.graph
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            (
                e.from,
                e.to,
                e.id.clone(),
                t.lengths[i].clone(),
                t.edge_labels[i].clone(),
            )
        })
        .collect()
}

fn step_off(t: &GraphOfGroupsTree, v: usize) -> Result<GraphOfGroupsTree> {
    if t.root == v {
        reroot(t, t.graph.star(v)[0])
    } else {
        Ok(t.clone())
    }
}

fn remove_leaf(t: &GraphOfGroupsTree, v: usize) -> Result<GraphOfGroupsTree> {
    let t = step_off(t, v)?;
    let e = t.graph.star(v)[0].edge;
    let remap = |r: EdgeRef| EdgeRef {
        edge: if r.edge > e { r.edge - 1 } else { r.edge },
        ..r
    };
    let mut marking = Vec::new();
    for p in &t.marking {
        let p = p.reduced();
        if p.edges.iter().any(|r| r.edge == e) {
            return Err(Error::Structural("marking loop runs into a leaf".into()));
        }
        marking.push(GogPath {
            edges: p.edges.iter().map(|&r| remap(r)).collect(),
            ..p
        });
    }
    let mut edges = edge_list(&t);
    edges.remove(e);
    rebuild(&t, v, edges, marking)
}

fn absorb(t: &GraphOfGroupsTree, v: usize) -> Result<GraphOfGroupsTree> {
    let t = step_off(t, v)?;
    let star = t.graph.star(v);
    let (r1, r2) = (star[0], star[1]);
    let (a, b) = (t.graph.terminus(r1), t.graph.terminus(r2));
    let (keep, gone) = (r1.edge.min(r2.edge), r1.edge.max(r2.edge));
    let remap = |edge: usize| if edge > gone { edge - 1 } else { edge };
    // the merged edge runs a -> b, replacing r̄1·r2
    let merged = |forward: bool| EdgeRef {
        edge: remap(keep),
        forward,
    };
    let mut marking = Vec::new();
    for p in &t.marking {
        let p = p.reduced();
        let mut out = GogPath::vertex_element(p.start, p.elems[0].clone());
        let mut i = 0;
        while i < p.edges.len() {
            let r = p.edges[i];
            let through = if r == r1.flip() {
                Some((r2, true))
            } else if r == r2.flip() {
                Some((r1, false))
            } else {
                None
            };
            match through {
                Some((next, forward)) => {
                    if p.edges.get(i + 1) != Some(&next) {
                        return Err(Error::Structural("marking loop stops at a valence-2 vertex".into()));
                    }
                    out.push(merged(forward), p.elems[i + 2].clone());
                    i += 2;
                }
                None => {
                    out.push(
                        EdgeRef {
                            edge: remap(r.edge),
                            ..r
                        },
                        p.elems[i + 1].clone(),
                    );
                    i += 1;
                }
            }
        }
        marking.push(out);
    }
    let mut edges = edge_list(&t);
    let length = t.lengths[r1.edge].clone() + t.lengths[r2.edge].clone();
    let id = t.graph.edge(keep).id.clone();
    edges[keep] = (a, b, id, length, EdgeLabel::Trivial);
    edges.remove(gone);
    rebuild(&t, v, edges, marking)
}

/// Splits edge `e` at its midpoint with a new trivial vertex, returned
/// alongside the tree.
pub fn subdivide(t: &GraphOfGroupsTree, e: usize) -> Result<(GraphOfGroupsTree, usize)> {
    if t.edge_labels[e] != EdgeLabel::Trivial {
        return Err(Error::Unsupported("only trivially labeled edges are subdivided".into()));
    }
    let g = &t.graph;
    let old = g.edge(e).clone();
    let mid = g.vertex_count();
    let mut vertices = g.vertex_ids().to_vec();
    vertices.push(format!("{}_mid", old.id));
    let mut edges = g.edges().to_vec();
    edges[e] = Edge {
        id: old.id.clone(),
        from: old.from,
        to: mid,
    };
    let second = edges.len();
    edges.push(Edge {
        id: format!("{}_2", old.id),
        from: mid,
        to: old.to,
    });
    let half = t.lengths[e].scale(&crate::scalar::rat(1, 2));
    let mut lengths = t.lengths.clone();
    lengths[e] = half.clone();
    lengths.push(half);
    let mut edge_labels = t.edge_labels.clone();
    edge_labels.push(EdgeLabel::Trivial);
    let mut vertex_labels = t.vertex_labels.clone();
    vertex_labels.push(VertexLabel::Trivial);
    let marking = t
        .marking
        .iter()
        .map(|p| {
            let mut out = GogPath::vertex_element(p.start, p.elems[0].clone());
            for (i, &r) in p.edges.iter().enumerate() {
                let g_next = p.elems[i + 1].clone();
                if r.edge != e {
                    out.push(r, g_next);
                } else if r.forward {
                    out.push(EdgeRef::fwd(e), Word::identity());
                    out.push(EdgeRef::fwd(second), g_next);
                } else {
                    out.push(EdgeRef::back(second), Word::identity());
                    out.push(EdgeRef::back(e), g_next);
                }
            }
            out
        })
        .collect();
    let out = GraphOfGroupsTree::new(
        t.system.clone(),
        CWGraph::new(vertices, edges)?,
        lengths,
        vertex_labels,
        edge_labels,
        marking,
        t.root,
    )?;
    Ok((out, mid))
}
