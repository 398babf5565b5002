use serde::Serialize;
use serde_json::Value;

use super::from_point::tree_from_point;
use super::gog::{GogPath, GraphOfGroupsTree, VertexLabel};
use super::minimize::minimize;
use super::very_small::validate_very_small;
use crate::error::{Error, Result};
use crate::graph::{enumerate_maximal, Budget, Lengths, MarkedMetricAGraph, Shape};
use crate::scalar::FormalReal;
use crate::word::{FreeFactorSystem, Letter, Word};

#[derive(Clone, Debug, Serialize)]
pub struct MemberCheck {
    pub lengths: Vec<FormalReal>,
    pub very_small: bool,
    pub minimal: bool,
    pub factors_elliptic: bool,
    /// `l(c) = 0`, so the tree is not a point of outer space.
    pub extra_elliptic: bool,
}

impl MemberCheck {
    pub fn ok(&self) -> bool {
        self.very_small && self.minimal && self.factors_elliptic && self.extra_elliptic
    }
}

#[derive(Clone, Debug)]
pub struct BoundarySimplex {
    pub shape: Shape,
    /// Symbolic edge lengths; every positive assignment is a member.
    pub tree: GraphOfGroupsTree,
    pub checks: Vec<MemberCheck>,
}

#[derive(Clone, Debug)]
pub struct BoundaryFamily {
    pub system: FreeFactorSystem,
    /// The free generator made elliptic.
    pub elliptic: String,
    pub edges: usize,
    /// Projective dimension, `edges − 1`.
    pub dim: i64,
    pub simplices: Vec<BoundarySimplex>,
}

impl BoundaryFamily {
    pub fn all_pass(&self) -> bool {
        self.simplices.iter().all(|s| s.checks.iter().all(MemberCheck::ok))
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "rospace_format": 1,
            "system": self.system,
            "elliptic": self.elliptic,
            "edges": self.edges,
            "dim": self.dim,
            "all_pass": self.all_pass(),
            "simplices": self.simplices.iter().map(|s| serde_json::json!({
                "shape": s.shape,
                "tree": s.tree.to_json(),
                "checks": s.checks,
            })).collect::<Vec<_>>(),
        })
    }
}

fn rename(w: &Word, from: &FreeFactorSystem, to: &FreeFactorSystem) -> Word {
    Word::reduce(
        w.letters()
            .iter()
            .map(|l| Letter::new(to.gen_id(from.name(l.gen)).expect("systems share names"), l.inverse)),
    )
}

/// Reads a tree of the system with `c` promoted to a factor as a tree of the
/// original system whose `c` vertex is cyclic.
fn demote(t: &GraphOfGroupsTree, sys: &FreeFactorSystem) -> Result<GraphOfGroupsTree> {
    let big = &t.system;
    let extra = big.k() - 1;
    let vertex_labels = t
        .vertex_labels
        .iter()
        .map(|l| match l {
            VertexLabel::Special(j) if *j == extra => {
                VertexLabel::Cyclic(rename(&Word::gen(big.factor_gens(extra).start), big, sys))
            }
            other => other.clone(),
        })
        .collect();
    let marking = (0..sys.gen_count())
        .map(|g| {
            let p = &t.marking[big.gen_id(sys.name(g)).expect("systems share names") as usize];
            GogPath {
                elems: p.elems.iter().map(|w| rename(w, big, sys)).collect(),
                ..p.clone()
            }
        })
        .collect();
    GraphOfGroupsTree::new(
        sys.clone(),
        t.graph.clone(),
        t.lengths.clone(),
        vertex_labels,
        t.edge_labels.clone(),
        marking,
        t.root,
    )
}

fn check_member(t: &GraphOfGroupsTree, c: &Word) -> Result<MemberCheck> {
    let sys = &t.system;
    let minimal = minimize(t)?.graph.vertex_count() == t.graph.vertex_count();
    let mut factors_elliptic = true;
    for j in 0..sys.k() {
        for y in sys.factor_gens(j) {
            factors_elliptic &= t.translation_length(&Word::gen(y))?.is_zero();
        }
    }
    Ok(MemberCheck {
        lengths: t.lengths.clone(),
        very_small: validate_very_small(t).ok,
        minimal,
        factors_elliptic,
        extra_elliptic: t.translation_length(c)?.is_zero(),
    })
}

/// Trees with the last free generator `c` elliptic: maximal graphs of the
/// system with `⟨c⟩` added as a factor, whose special point for `c` becomes a
/// cyclic vertex. Each shape gives an open simplex of dimension
/// `3n + 2k − 5 − 3Σs`; members are checked at the symbolic point, the
/// barycenter and one generic rational point.
pub fn boundary_simplex(sys: &FreeFactorSystem, budget: Budget) -> Result<BoundaryFamily> {
    let Some(c_name) = sys.free_names().last().cloned() else {
        return Err(Error::Degenerate(format!(
            "system {} has no free generator to make elliptic",
            sys.describe()
        )));
    };
    let mut factors = sys.factor_names().to_vec();
    factors.push(vec![c_name.clone()]);
    let free = sys.free_names()[..sys.free_rank() - 1].to_vec();
    let big = FreeFactorSystem::new(sys.rank(), factors, free)?;
    let c = Word::gen(sys.gen_id(&c_name)?);
    let shapes = enumerate_maximal(&big, false, budget)?.maximal;
    let edges = shapes.first().map_or(0, |s| s.edges.len());
    let mut simplices = Vec::new();
    for shape in shapes {
        let e = shape.edges.len();
        let total = (e * (e + 1) / 2) as i64;
        let generic = (1..=e as i64).map(|i| FormalReal::ratio(i, total)).collect();
        let mut checks = Vec::new();
        let mut symbolic = None;
        for lengths in [Lengths::Symbolic, Lengths::Uniform, Lengths::Explicit(generic)] {
            let x = MarkedMetricAGraph::from_shape(&big, &shape, lengths)?;
            let t = demote(&tree_from_point(&x)?, sys)?;
            checks.push(check_member(&t, &c)?);
            symbolic.get_or_insert(t);
        }
        simplices.push(BoundarySimplex {
            shape,
            tree: symbolic.expect("three members were built"),
            checks,
        });
    }
    Ok(BoundaryFamily {
        system: sys.clone(),
        elliptic: c_name,
        edges,
        dim: edges as i64 - 1,
        simplices,
    })
}
