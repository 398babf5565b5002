//! Built-in fixtures. The JSON files under `fixtures/` are these trees
//! serialized with `to_json`.

use crate::error::Result;
use crate::graph::{Budget, CWGraph, Edge, EdgeRef, Lengths, MarkedMetricAGraph, Shape};
use crate::scalar::FormalReal;
use crate::tree::converge::{middle_point, rose_point};
use crate::tree::{boundary_simplex, tree_from_point, EdgeLabel, GogPath, GraphOfGroupsTree, VertexLabel};
use crate::word::{FreeFactorSystem, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    /// A point of outer space.
    Point,
    /// A very small tree with an extra elliptic element.
    Boundary,
    /// Fails the very small conditions.
    Violation,
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub kind: FixtureKind,
    pub tree: GraphOfGroupsTree,
    /// The marked graph the tree was cut from, for `Point` fixtures.
    pub point: Option<MarkedMetricAGraph>,
}

pub const NAMES: [&str; 7] = [
    "t1",
    "x2-middle",
    "theta",
    "dumbbell",
    "boundary-2-1",
    "boundary-3-1",
    "tripod-violation",
];

fn from_point(name: &'static str, x: MarkedMetricAGraph) -> Result<Fixture> {
    Ok(Fixture {
        name,
        kind: FixtureKind::Point,
        tree: tree_from_point(&x)?,
        point: Some(x),
    })
}

fn rank_two_point(edges: Vec<(usize, usize)>, lengths: Lengths) -> Result<MarkedMetricAGraph> {
    let sys = FreeFactorSystem::standard(2, &[])?;
    MarkedMetricAGraph::from_shape(&sys, &Shape { vertices: 2, edges }, lengths)
}

fn boundary(name: &'static str, n: usize, s: &[usize]) -> Result<Fixture> {
    let sys = FreeFactorSystem::standard(n, s)?;
    let family = boundary_simplex(&sys, Budget::default())?;
    Ok(Fixture {
        name,
        kind: FixtureKind::Boundary,
        tree: family.simplices[0].tree.clone(),
        point: None,
    })
}

/// `F₄ = ⟨a, b, c, d⟩` split as a cyclic `⟨a⟩` vertex joined by three
/// `⟨a⟩`-edges to `⟨a⟩` vertices carrying the loops `b`, `c`, `d`: the
/// element `a` fixes a tripod.
pub fn tripod_violation() -> Result<GraphOfGroupsTree> {
    let sys = FreeFactorSystem::standard(4, &[])?;
    let a = Word::gen(0);
    let edge = |id: &str, from: usize, to: usize| Edge {
        id: id.into(),
        from,
        to,
    };
    let graph = CWGraph::new(
        ["c", "v1", "v2", "v3"].map(String::from).to_vec(),
        vec![
            edge("e1", 0, 1),
            edge("e2", 0, 2),
            edge("e3", 0, 3),
            edge("l1", 1, 1),
            edge("l2", 2, 2),
            edge("l3", 3, 3),
        ],
    )?;
    let mut marking = vec![GogPath::vertex_element(0, a.clone())];
    for i in 0..3 {
        let mut p = GogPath::at(0);
        for r in [EdgeRef::fwd(i), EdgeRef::fwd(i + 3), EdgeRef::back(i)] {
            p.push(r, Word::identity());
        }
        marking.push(p);
    }
    let mut edge_labels = vec![EdgeLabel::Cyclic(a.clone()); 3];
    edge_labels.extend([EdgeLabel::Trivial, EdgeLabel::Trivial, EdgeLabel::Trivial]);
    GraphOfGroupsTree::new(
        sys,
        graph,
        vec![FormalReal::int(1); 6],
        vec![VertexLabel::Cyclic(a); 4],
        edge_labels,
        marking,
        0,
    )
}

pub fn fixture(name: &str) -> Result<Fixture> {
    match name {
        "t1" => from_point("t1", rose_point()?),
        "x2-middle" => from_point("x2-middle", middle_point()?),
        "theta" => from_point(
            "theta",
            rank_two_point(vec![(0, 1), (0, 1), (0, 1)], Lengths::Symbolic)?,
        ),
        "dumbbell" => from_point(
            "dumbbell",
            rank_two_point(
                vec![(0, 0), (0, 1), (1, 1)],
                Lengths::Explicit(vec![FormalReal::int(1), FormalReal::ratio(1, 2), FormalReal::int(1)]),
            )?,
        ),
        "boundary-2-1" => boundary("boundary-2-1", 2, &[1]),
        "boundary-3-1" => boundary("boundary-3-1", 3, &[1]),
        "tripod-violation" => Ok(Fixture {
            name: "tripod-violation",
            kind: FixtureKind::Violation,
            tree: tripod_violation()?,
            point: None,
        }),
        _ => Err(crate::Error::Domain(format!(
            "no fixture {name:?}; known: {}",
            NAMES.join(", ")
        ))),
    }
}

pub fn all() -> Result<Vec<Fixture>> {
    NAMES.iter().map(|n| fixture(n)).collect()
}

/// Pretty JSON with a trailing newline, as written to `fixtures/`.
pub fn file_contents(f: &Fixture) -> String {
    let mut s = serde_json::to_string_pretty(&f.tree.to_json()).expect("JSON values serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::validate_very_small;

    #[test]
    fn tripod_fails_only_the_tripod_clause() {
        let t = tripod_violation().unwrap();
        let r = validate_very_small(&t);
        assert!(!r.ok);
        assert_eq!(r.failed, Some(crate::tree::VerySmallClause::NoFixedTripods));
    }

    #[test]
    fn fixtures_build() {
        let all = all().unwrap();
        assert_eq!(all.len(), NAMES.len());
        for f in &all {
            let back = GraphOfGroupsTree::from_json(&f.tree.to_json()).unwrap();
            assert_eq!(back, f.tree, "{}", f.name);
        }
    }
}
