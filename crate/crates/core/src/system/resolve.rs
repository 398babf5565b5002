use std::collections::{BTreeMap, BTreeSet};

use super::SystemK;
use crate::error::{Error, Result};
use crate::graph::MarkedMetricAGraph;
use crate::tree::{tree_from_point, GogPath, GraphOfGroupsTree, TreeVertex, VertexLabel};
use crate::word::Word;

/// A system together with the tree it was cut from: `lifts[p]` is the tree
/// vertex under `K`-vertex `p`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub k: SystemK,
    pub tree: GraphOfGroupsTree,
    pub lifts: Vec<TreeVertex>,
}

/// The same graph of groups with its standard marking: free generators go
/// first to cyclic vertices labelled by a single letter, the rest to non-tree
/// edges of a breadth-first spanning tree in edge order; factor generators
/// are conjugated out to their special vertex along the tree.
pub fn standardize(t: &GraphOfGroupsTree) -> Result<GraphOfGroupsTree> {
    t.require_trivial_edge_groups()?;
    let sys = &t.system;
    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    let stem = |v: usize| {
        let mut p = GogPath::at(t.root);
        for r in tree.path_to(g, v) {
            p.push(r, Word::identity());
        }
        p
    };
    let conj = |v: usize, elem: &Word| {
        let s = stem(v);
        let mut mid = s.clone();
        mid.times(elem);
        mid.concat(&s.inverse(g))
    };
    let mut marking: Vec<Option<GogPath>> = vec![None; sys.gen_count() as usize];
    let mut labels = t.vertex_labels.clone();
    for (v, label) in t.vertex_labels.iter().enumerate() {
        match label {
            VertexLabel::Special(j) => {
                for y in sys.factor_gens(*j) {
                    marking[y as usize] = Some(conj(v, &Word::gen(y)));
                }
            }
            VertexLabel::Cyclic(w) => {
                let [l] = w.letters() else {
                    return Err(Error::Unsupported(format!(
                        "cyclic vertex {} must be labelled by a single free generator",
                        g.vertex_id(v)
                    )));
                };
                if sys.factor_of(l.gen).is_some() || marking[l.gen as usize].is_some() {
                    return Err(Error::Unsupported(format!(
                        "cyclic vertex {} needs its own free generator",
                        g.vertex_id(v)
                    )));
                }
                marking[l.gen as usize] = Some(conj(v, &Word::gen(l.gen)));
                labels[v] = VertexLabel::Cyclic(Word::gen(l.gen));
            }
            VertexLabel::Trivial => {}
        }
    }
    let unassigned: Vec<u32> = sys.free_gens().filter(|&x| marking[x as usize].is_none()).collect();
    let mut spare = unassigned.into_iter();
    for e in tree.non_tree_edges() {
        let x = spare
            .next()
            .ok_or_else(|| Error::Structural("more cycles than free generators".into()))?;
        let mut p = stem(g.edge(e).from);
        p.push(crate::graph::EdgeRef::fwd(e), Word::identity());
        marking[x as usize] = Some(p.concat(&stem(g.edge(e).to).inverse(g)));
    }
    if spare.next().is_some() {
        return Err(Error::Structural("fewer cycles than free generators".into()));
    }
    GraphOfGroupsTree::new(
        sys.clone(),
        g.clone(),
        t.lengths.clone(),
        labels,
        t.edge_labels.clone(),
        marking
            .into_iter()
            .map(|m| m.expect("every generator assigned"))
            .collect(),
        t.root,
    )
}

/// `K` = convex hull of the lifted spanning tree and its translates by the
/// edge generators, with `φ_g` the restriction of `g` to `K ∩ g⁻¹K`.
pub fn resolve_tree(t: &GraphOfGroupsTree) -> Result<Resolution> {
    let t = standardize(t)?;
    let sys = &t.system;
    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    let base: Vec<TreeVertex> = (0..g.vertex_count())
        .map(|v| TreeVertex {
            steps: tree.path_to(g, v).into_iter().map(|r| (Word::identity(), r)).collect(),
        })
        .collect();
    let mut points: BTreeSet<TreeVertex> = base.iter().cloned().collect();
    let in_tree: BTreeSet<usize> = (0..g.edge_count()).filter(|&e| tree.in_tree[e]).collect();
    let edge_gens: Vec<u32> = sys
        .free_gens()
        .filter(|&x| t.marking[x as usize].edges.iter().any(|r| !in_tree.contains(&r.edge)))
        .collect();
    for &x in &edge_gens {
        for b in &base {
            points.insert(t.act_word(&Word::gen(x), b));
        }
    }
    let mut hull: BTreeSet<TreeVertex> = BTreeSet::new();
    for p in &points {
        hull.extend(p.prefixes());
    }
    let mut lifts: Vec<TreeVertex> = hull.into_iter().collect();
    lifts.sort_by(|a, b| (a.depth(), a).cmp(&(b.depth(), b)));
    let index: BTreeMap<&TreeVertex, usize> = lifts.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let edges = lifts
        .iter()
        .skip(1)
        .map(|x| {
            let parent = TreeVertex {
                steps: x.steps[..x.depth() - 1].to_vec(),
            };
            let (_, r) = *x.steps.last().expect("non-root lifts have a last step");
            (index[&parent], index[x], t.lengths[r.edge].clone())
        })
        .collect();
    let maps = (0..sys.gen_count())
        .map(|gen| {
            lifts
                .iter()
                .enumerate()
                .filter_map(|(i, x)| index.get(&t.act_word(&Word::gen(gen), x)).map(|&j| (i, j)))
                .collect()
        })
        .collect();
    let special = (0..sys.k())
        .map(|j| {
            let v = t
                .vertex_labels
                .iter()
                .position(|l| *l == VertexLabel::Special(j))
                .expect("every factor labels a vertex");
            index[&base[v]]
        })
        .collect();
    let k = SystemK {
        system: sys.clone(),
        vertices: (0..lifts.len()).map(|i| format!("p{i}")).collect(),
        edges,
        maps,
        special,
    };
    k.check()?;
    Ok(Resolution { k, tree: t, lifts })
}

pub fn resolve_point(x: &MarkedMetricAGraph) -> Result<Resolution> {
    resolve_tree(&tree_from_point(x)?)
}
