use std::collections::BTreeMap;

use serde::Serialize;

use super::gog::{EdgeLabel, GraphOfGroupsTree, VertexLabel};
use crate::word::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerySmallClause {
    CyclicEdgeStabilizers,
    NoFixedTripods,
    NoObtrusivePowers,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerySmallReport {
    pub ok: bool,
    pub failed: Option<VerySmallClause>,
    pub detail: String,
    /// How "1 ≠ g ∈ Fₙ/𝒜" is read: g not conjugate into any factor.
    pub interpretation: &'static str,
}

const INTERPRETATION: &str = "nontrivial modulo the factor system = not conjugate into any factor";

impl VerySmallReport {
    fn pass() -> Self {
        VerySmallReport {
            ok: true,
            failed: None,
            detail: String::new(),
            interpretation: INTERPRETATION,
        }
    }

    fn fail(clause: VerySmallClause, detail: String) -> Self {
        VerySmallReport {
            ok: false,
            failed: Some(clause),
            detail,
            interpretation: INTERPRETATION,
        }
    }
}

/// Canonical key of the maximal cyclic subgroup containing `w`, up to
/// conjugacy: the least rotation of the cyclically reduced root or its inverse.
fn cyclic_class(w: &Word) -> Word {
    let (core, _) = w.cyclic_reduce();
    let (root, _) = core.root();
    let inv = root.inverse();
    (0..root.len().max(1))
        .flat_map(|k| [root.rotate(k), inv.rotate(k)])
        .min_by(|a, b| a.shortlex().cmp(&b.shortlex()))
        .unwrap_or_default()
}

/// Checks the quotient presentation: edge groups trivial or cyclic and
/// contained in both end groups, no element fixing three directions at a
/// vertex, and no stabilizer generated by a proper power.
pub fn validate_very_small(t: &GraphOfGroupsTree) -> VerySmallReport {
    use VerySmallClause::*;
    let g = &t.graph;
    let sys = &t.system;
    for (e, label) in t.edge_labels.iter().enumerate() {
        let EdgeLabel::Cyclic(w) = label else { continue };
        let id = &g.edge(e).id;
        if w.is_identity() {
            return VerySmallReport::fail(CyclicEdgeStabilizers, format!("edge {id} has a trivial cyclic label"));
        }
        for v in [g.edge(e).from, g.edge(e).to] {
            if !t.vertex_labels[v].contains(sys, w) {
                return VerySmallReport::fail(
                    CyclicEdgeStabilizers,
                    format!("edge group of {id} is not inside the group at {}", g.vertex_id(v)),
                );
            }
        }
        if w.is_proper_power() {
            return VerySmallReport::fail(
                NoObtrusivePowers,
                format!("edge {id} is fixed by {} but not by its root", sys.format_word(w)),
            );
        }
        for v in [g.edge(e).from, g.edge(e).to] {
            if let VertexLabel::Cyclic(c) = &t.vertex_labels[v] {
                if *w != *c && *w != c.inverse() {
                    return VerySmallReport::fail(
                        NoObtrusivePowers,
                        format!(
                            "edge {id} is fixed by {} while {} fixes only {}",
                            sys.format_word(w),
                            sys.format_word(c),
                            g.vertex_id(v)
                        ),
                    );
                }
            }
        }
    }
    for (v, label) in t.vertex_labels.iter().enumerate() {
        if let VertexLabel::Cyclic(c) = label {
            if c.is_proper_power() {
                return VerySmallReport::fail(
                    NoObtrusivePowers,
                    format!(
                        "vertex {} is fixed by {} but not by its root",
                        g.vertex_id(v),
                        sys.format_word(c)
                    ),
                );
            }
        }
        let mut fixed: BTreeMap<Word, usize> = BTreeMap::new();
        for r in g.star(v) {
            if let EdgeLabel::Cyclic(w) = &t.edge_labels[r.edge] {
                *fixed.entry(cyclic_class(w)).or_default() += 1;
            }
        }
        if let Some((w, count)) = fixed.into_iter().find(|&(_, c)| c >= 3) {
            return VerySmallReport::fail(
                NoFixedTripods,
                format!("{} fixes {count} directions at {}", sys.format_word(&w), g.vertex_id(v)),
            );
        }
    }
    VerySmallReport::pass()
}
