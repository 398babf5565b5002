//! Vertices of the Bass–Serre tree as reduced paths from the root, and the
//! independent ball oracle for translation lengths.

use std::collections::{BTreeSet, VecDeque};

use super::gog::{GogPath, GraphOfGroupsTree};
use crate::error::{Error, Result};
use crate::graph::EdgeRef;
use crate::scalar::FormalReal;
use crate::word::Word;

/// The coset `g₀ e₁ g₁ ⋯ e_m · G_v`: a reduced path from the root with the
/// trailing vertex element dropped. `steps[i] = (gᵢ, eᵢ₊₁)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeVertex {
    pub steps: Vec<(Word, EdgeRef)>,
}

impl TreeVertex {
    pub fn root() -> Self {
        TreeVertex { steps: Vec::new() }
    }

    pub fn depth(&self) -> usize {
        self.steps.len()
    }

    fn as_path(&self, root: usize) -> GogPath {
        let mut elems: Vec<Word> = self.steps.iter().map(|(g, _)| g.clone()).collect();
        elems.push(Word::identity());
        GogPath {
            start: root,
            elems,
            edges: self.steps.iter().map(|&(_, r)| r).collect(),
        }
    }

    fn from_path(p: &GogPath) -> Self {
        TreeVertex {
            steps: p
                .edges
                .iter()
                .enumerate()
                .map(|(i, &r)| (p.elems[i].clone(), r))
                .collect(),
        }
    }

    /// Geodesic prefixes from the root, root first.
    pub fn prefixes(&self) -> impl Iterator<Item = TreeVertex> + '_ {
        (0..=self.steps.len()).map(|k| TreeVertex {
            steps: self.steps[..k].to_vec(),
        })
    }
}

impl GraphOfGroupsTree {
    /// Quotient vertex under a tree vertex.
    pub fn project(&self, x: &TreeVertex) -> usize {
        x.steps.last().map_or(self.root, |&(_, r)| self.graph.terminus(r))
    }

    /// `γ · x` for a loop `γ` at the root.
    pub fn act_on_vertex(&self, gamma: &GogPath, x: &TreeVertex) -> TreeVertex {
        TreeVertex::from_path(&gamma.concat(&x.as_path(self.root)))
    }

    pub fn act_word(&self, w: &Word, x: &TreeVertex) -> TreeVertex {
        self.act_on_vertex(&self.loop_of(w), x)
    }

    pub fn distance(&self, x: &TreeVertex, y: &TreeVertex) -> FormalReal {
        let common = x.steps.iter().zip(&y.steps).take_while(|(a, b)| a == b).count();
        x.steps[common..]
            .iter()
            .chain(&y.steps[common..])
            .map(|&(_, r)| self.lengths[r.edge].clone())
            .sum()
    }

    /// Tree vertices within `radius` edges of the root, reached using the
    /// identity and the listed generators (and their inverses when asked) as
    /// vertex elements. Errors once more than `limit` vertices appear.
    pub fn ball(&self, radius: usize, inverses: bool, limit: usize) -> Result<Vec<TreeVertex>> {
        let elements: Vec<Vec<Word>> = self
            .vertex_labels
            .iter()
            .map(|l| {
                let mut v = vec![Word::identity()];
                for g in l.generators(&self.system) {
                    if inverses {
                        v.push(g.inverse());
                    }
                    v.push(g);
                }
                v
            })
            .collect();
        let mut out = vec![TreeVertex::root()];
        let mut queue = VecDeque::from([TreeVertex::root()]);
        while let Some(x) = queue.pop_front() {
            if x.depth() == radius {
                continue;
            }
            let v = self.project(&x);
            for g in &elements[v] {
                for r in self.graph.star(v) {
                    if g.is_identity() && x.steps.last().is_some_and(|&(_, last)| last == r.flip()) {
                        continue;
                    }
                    let mut y = x.clone();
                    y.steps.push((g.clone(), r));
                    out.push(y.clone());
                    if out.len() > limit {
                        return Err(Error::Resource(format!("tree ball exceeds {limit} vertices")));
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(out)
    }

    /// `l(w) = max(0, d(x, w²x) − d(x, wx))` at the root, exact in any
    /// simplicial tree.
    pub fn two_point_length(&self, w: &Word) -> Result<FormalReal> {
        let r = TreeVertex::root();
        let d1 = self.distance(&r, &self.act_word(w, &r));
        let d2 = self.distance(&r, &self.act_word(&w.mul(w), &r));
        let diff = d2 - d1;
        match diff.sign_hint() {
            Some(std::cmp::Ordering::Less) | Some(std::cmp::Ordering::Equal) => Ok(FormalReal::zero()),
            Some(std::cmp::Ordering::Greater) => Ok(diff),
            None => Err(Error::Domain(format!("cannot compare {diff} with zero"))),
        }
    }

    /// Minimum of `d(x, wx)` over the geodesic from the root to `w·root` and
    /// a ball of the given radius. The geodesic meets the axis (or the fixed
    /// set), so the minimum is attained on it.
    pub fn ball_length(&self, w: &Word, radius: usize) -> Result<FormalReal> {
        let gamma = self.loop_of(w);
        let target = self.act_on_vertex(&gamma, &TreeVertex::root());
        let mut candidates: BTreeSet<TreeVertex> = target.prefixes().collect();
        candidates.extend(self.ball(radius, true, 200_000)?);
        let values: BTreeSet<FormalReal> = candidates
            .iter()
            .map(|x| self.distance(x, &self.act_on_vertex(&gamma, x)))
            .collect();
        // every value is l(w) plus twice a distance to the axis, so the
        // minimum is dominated coefficientwise by all the others
        values
            .iter()
            .find(|&d| {
                values.iter().all(|o| {
                    matches!(
                        (o - d).sign_hint(),
                        Some(std::cmp::Ordering::Greater | std::cmp::Ordering::Equal)
                    )
                })
            })
            .cloned()
            .ok_or_else(|| Error::Domain("no candidate distance is below all others".into()))
    }
}
