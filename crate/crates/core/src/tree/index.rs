use serde::Serialize;

use super::gog::{EdgeLabel, GraphOfGroupsTree, VertexLabel};
use super::minimize::minimize;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchOrbit {
    pub vertex: String,
    pub stabilizer: String,
    pub rk_st: i64,
    pub v1: i64,
    pub index: i64,
    pub special: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexReport {
    pub orbits: Vec<BranchOrbit>,
    pub total: i64,
    /// `2n + 2k − 2 − 2Σs`.
    pub expected: i64,
    pub equality: bool,
    pub orbit_count_within_bound: bool,
    pub all_nonnegative: bool,
    pub non_special_at_least_one: bool,
}

/// Rank of the stabilizer modulo the factors: cyclic labels count when the
/// generator is not conjugate into a factor, special vertices add one.
pub fn stabilizer_rank(t: &GraphOfGroupsTree, v: usize) -> i64 {
    match &t.vertex_labels[v] {
        VertexLabel::Trivial => 0,
        VertexLabel::Special(_) => 1,
        VertexLabel::Cyclic(w) => i64::from(t.system.conjugate_into_factor(w).is_none()),
    }
}

/// One record per quotient vertex whose lifts are branch points.
pub fn branch_orbits(t: &GraphOfGroupsTree) -> Vec<BranchOrbit> {
    let sys = &t.system;
    (0..t.graph.vertex_count())
        .filter(|&v| t.is_branch_vertex(v))
        .map(|v| {
            let rk_st = stabilizer_rank(t, v);
            let v1 = t
                .graph
                .star(v)
                .iter()
                .filter(|r| t.edge_labels[r.edge] == EdgeLabel::Trivial)
                .count() as i64;
            let stabilizer = match &t.vertex_labels[v] {
                VertexLabel::Trivial => "trivial".to_string(),
                VertexLabel::Special(j) => format!("A{}", j + 1),
                VertexLabel::Cyclic(w) => format!("<{}>", sys.format_word(w)),
            };
            BranchOrbit {
                vertex: t.graph.vertex_id(v).to_string(),
                stabilizer,
                rk_st,
                v1,
                index: 2 * rk_st + v1 - 2,
                special: matches!(t.vertex_labels[v], VertexLabel::Special(_)),
            }
        })
        .collect()
}

/// `2n + 2k − 2 − 2Σs`.
pub fn index_bound(t: &GraphOfGroupsTree) -> i64 {
    let sys = &t.system;
    2 * sys.rank() as i64 + 2 * sys.k() as i64 - 2 - 2 * sys.sum_s() as i64
}

/// Sum of orbit indices after minimizing, compared with `2n + 2k − 2 − 2Σs`.
pub fn total_index(t: &GraphOfGroupsTree) -> Result<IndexReport> {
    let t = minimize(t)?;
    let orbits = branch_orbits(&t);
    let total = orbits.iter().map(|o| o.index).sum();
    let expected = index_bound(&t);
    Ok(IndexReport {
        total,
        expected,
        equality: total == expected,
        orbit_count_within_bound: orbits.len() as i64 <= expected,
        all_nonnegative: orbits.iter().all(|o| o.index >= 0),
        non_special_at_least_one: orbits.iter().filter(|o| !o.special).all(|o| o.index >= 1),
        orbits,
    })
}
