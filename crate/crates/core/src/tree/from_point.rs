use std::collections::HashMap;

use super::gog::{EdgeLabel, GogPath, GraphOfGroupsTree, VertexLabel};
use crate::error::{Error, Result};
use crate::graph::cw::reduce_path;
use crate::graph::{EdgeRef, MarkedMetricAGraph};
use crate::word::{Letter, Word};

/// Position of a wedge vertex: factor, and the path from the hub to it
/// along one circle.
struct WedgeSlot {
    factor: usize,
    from_hub: Vec<EdgeRef>,
}

/// The tree of a point: the collapsed graph with special vertex groups, the
/// marking transported by reading every wedge excursion as a factor element.
pub fn tree_from_point(x: &MarkedMetricAGraph) -> Result<GraphOfGroupsTree> {
    let g = x.graph();
    let sys = &x.system;
    let collapsed = x.collapse()?;
    let mut slots: HashMap<usize, WedgeSlot> = HashMap::new();
    for w in &x.agraph.wedges {
        slots.insert(
            w.hub,
            WedgeSlot {
                factor: w.factor,
                from_hub: Vec::new(),
            },
        );
        for c in &w.circles {
            for i in 1..c.len() {
                slots.insert(
                    g.origin(c[i]),
                    WedgeSlot {
                        factor: w.factor,
                        from_hub: c[..i].to_vec(),
                    },
                );
            }
        }
    }

    // reads a closed reduced path at a hub as a word in the factor generators
    let read_wedge_loop = |factor: usize, path: &[EdgeRef]| -> Result<Word> {
        let wedge = x.agraph.wedge_of_factor(factor).expect("factor has a wedge");
        let mut letters = Vec::new();
        let mut i = 0;
        'outer: while i < path.len() {
            for (t, c) in wedge.circles.iter().enumerate() {
                let gen = sys.factor_gens(factor).nth(t).expect("circle count matches s(j)");
                let back: Vec<EdgeRef> = c.iter().rev().map(|r| r.flip()).collect();
                for (dir, inverse) in [(c, false), (&back, true)] {
                    if path[i..].starts_with(dir) {
                        letters.push(Letter::new(gen, inverse));
                        i += dir.len();
                        continue 'outer;
                    }
                }
            }
            return Err(Error::Structural("wedge excursion is not a product of circles".into()));
        }
        Ok(Word::reduce(letters))
    };

    // element of the vertex group at the collapsed image of a wedge segment
    let element = |segment: &[EdgeRef], from: usize, to: usize| -> Result<Word> {
        match (slots.get(&from), slots.get(&to)) {
            (Some(a), Some(b)) => {
                let mut p = a.from_hub.clone();
                p.extend_from_slice(segment);
                p.extend(b.from_hub.iter().rev().map(|r| r.flip()));
                read_wedge_loop(a.factor, &reduce_path(p))
            }
            _ if segment.is_empty() => Ok(Word::identity()),
            _ => Err(Error::Structural("wedge segment outside a wedge".into())),
        }
    };

    let root = collapsed.vertex_map[x.base];
    let mut marking = Vec::new();
    for path in &x.marking {
        let mut out = GogPath::at(root);
        let mut seg_start = x.base;
        let mut segment: Vec<EdgeRef> = Vec::new();
        let mut at = x.base;
        for &r in path {
            if x.agraph.is_wedge_edge(r.edge) {
                segment.push(r);
            } else {
                out.times(&element(&segment, seg_start, at)?);
                segment.clear();
                let e = collapsed.edge_map[r.edge].expect("non-wedge edge survives collapse");
                out.push(
                    EdgeRef {
                        edge: e,
                        forward: r.forward,
                    },
                    Word::identity(),
                );
                seg_start = g.terminus(r);
            }
            at = g.terminus(r);
        }
        out.times(&element(&segment, seg_start, at)?);
        marking.push(out.reduced());
    }

    let mut vertex_labels = vec![VertexLabel::Trivial; collapsed.graph.vertex_count()];
    for (j, &v) in collapsed.special_points.iter().enumerate() {
        vertex_labels[v] = VertexLabel::Special(j);
    }
    let lengths = (0..g.edge_count())
        .filter(|&e| collapsed.edge_map[e].is_some())
        .map(|e| x.lengths[e].clone())
        .collect();
    let edges = collapsed.graph.edge_count();
    GraphOfGroupsTree::new(
        sys.clone(),
        collapsed.graph,
        lengths,
        vertex_labels,
        vec![EdgeLabel::Trivial; edges],
        marking,
        root,
    )
}
