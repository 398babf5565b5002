//! Finitely generated additive subgroups of the formal reals.
//!
//! A lattice is stored by its generators. Membership, canonical form and
//! ranks go through the integer matrix obtained by writing each generator in
//! the basis of occurring symbols and clearing a common denominator.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{FormalReal, Rational};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeZ {
    generators: Vec<FormalReal>,
}

/// Integer coordinates of a family of formal reals: `rows[i] = D · xᵢ`
/// in the basis `symbols`.
struct IntegerFrame {
    symbols: Vec<String>,
    denom: BigInt,
    rows: Vec<Vec<BigInt>>,
}

impl IntegerFrame {
    fn new<'a, I: IntoIterator<Item = &'a FormalReal>>(elements: I) -> Self {
        let elements: Vec<&FormalReal> = elements.into_iter().collect();
        let symbols: Vec<String> = elements
            .iter()
            .flat_map(|x| x.symbols().map(str::to_string))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let denom = elements
            .iter()
            .flat_map(|x| x.terms().map(|(_, c)| c.denom().clone()))
            .fold(BigInt::one(), |a, b| a.lcm(&b));
        let rows = elements
            .iter()
            .map(|x| {
                symbols
                    .iter()
                    .map(|s| {
                        let c = x.coeff(s) * Rational::from_integer(denom.clone());
                        debug_assert!(c.is_integer());
                        c.to_integer()
                    })
                    .collect()
            })
            .collect();
        IntegerFrame { symbols, denom, rows }
    }

    fn to_formal(&self, row: &[BigInt]) -> FormalReal {
        FormalReal::from_terms(
            self.symbols
                .iter()
                .zip(row)
                .map(|(s, c)| (s, Rational::new(c.clone(), self.denom.clone()))),
        )
    }
}

fn sub_multiple(target: &mut [BigInt], src: &[BigInt], q: &BigInt) {
    if q.is_zero() {
        return;
    }
    for (t, s) in target.iter_mut().zip(src) {
        *t -= q * s;
    }
}

/// Row-style Hermite normal form of the row lattice: positive pivots, strictly
/// increasing pivot columns, entries above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let mut r = 0;
    for col in 0..ncols {
        loop {
            let pivot = (r..m.len())
                .filter(|&i| !m[i][col].is_zero())
                .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()));
            let Some(p) = pivot else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                let (head, tail) = m.split_at_mut(i);
                sub_multiple(&mut tail[0], &head[r], &q);
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r >= m.len() || m[r][col].is_zero() {
            continue;
        }
        if m[r][col].is_negative() {
            for x in m[r].iter_mut() {
                *x = -x.clone();
            }
        }
        for i in 0..r {
            let q = m[i][col].div_floor(&m[r][col]);
            let (head, tail) = m.split_at_mut(r);
            sub_multiple(&mut head[i], &tail[0], &q);
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    m.retain(|row| row.iter().any(|x| !x.is_zero()));
    m
}

/// Invariant factors (Smith normal form diagonal, nonzero entries only).
pub fn smith_invariants(rows: &[Vec<BigInt>], ncols: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let nrows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < nrows.min(ncols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nrows {
            for j in t..ncols {
                if !m[i][j].is_zero() && best.is_none_or(|(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }
        let mut clean = true;
        for i in t + 1..nrows {
            let q = m[i][t].div_floor(&m[t][t]);
            let (head, tail) = m.split_at_mut(i);
            sub_multiple(&mut tail[0], &head[t], &q);
            clean &= m[i][t].is_zero();
        }
        for j in t + 1..ncols {
            let q = m[t][j].div_floor(&m[t][t]);
            if !q.is_zero() {
                for row in m.iter_mut() {
                    let v = row[t].clone();
                    row[j] -= &q * v;
                }
            }
            clean &= m[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        // divisibility: fold offending rows into row t and retry
        let p = m[t][t].clone();
        if let Some(i) = (t + 1..nrows).find(|&i| (t + 1..ncols).any(|j| !(&m[i][j] % &p).is_zero())) {
            let (head, tail) = m.split_at_mut(i);
            for (a, b) in head[t].iter_mut().zip(tail[0].iter()) {
                *a += b;
            }
            continue;
        }
        diag.push(p.abs());
        t += 1;
    }
    diag
}

/// Rank over ℚ of the span of `elements`.
pub fn q_rank(elements: &[FormalReal]) -> usize {
    let frame = IntegerFrame::new(elements);
    let mut m: Vec<Vec<Rational>> = frame
        .rows
        .iter()
        .map(|r| r.iter().map(|x| Rational::from_integer(x.clone())).collect())
        .collect();
    let ncols = frame.symbols.len();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let pivot = m[rank][col].clone();
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        for row in rest {
            if row[col].is_zero() {
                continue;
            }
            let f = &row[col] / &pivot;
            for (x, p) in row[col..].iter_mut().zip(&prow[col..]) {
                *x -= p * &f;
            }
        }
        rank += 1;
    }
    rank
}

impl LatticeZ {
    pub fn new(generators: Vec<FormalReal>) -> Self {
        LatticeZ { generators }
    }

    pub fn zero() -> Self {
        LatticeZ::default()
    }

    pub fn generators(&self) -> &[FormalReal] {
        &self.generators
    }

    /// `{2x : x ∈ self}`, or any integer multiple.
    pub fn scaled(&self, m: i64) -> LatticeZ {
        LatticeZ::new(self.generators.iter().map(|g| g.scale_int(m)).collect())
    }

    /// Sum of two subgroups.
    pub fn join(&self, other: &LatticeZ) -> LatticeZ {
        let mut g = self.generators.clone();
        g.extend(other.generators.iter().cloned());
        LatticeZ::new(g)
    }

    pub fn with(&self, extra: &[FormalReal]) -> LatticeZ {
        let mut g = self.generators.clone();
        g.extend(extra.iter().cloned());
        LatticeZ::new(g)
    }

    /// Canonical ℤ-basis (Hermite normal form, mapped back to formal reals).
    pub fn canonical_basis(&self) -> Vec<FormalReal> {
        let frame = IntegerFrame::new(&self.generators);
        hermite_normal_form(&frame.rows, frame.symbols.len())
            .iter()
            .map(|r| frame.to_formal(r))
            .collect()
    }

    pub fn canonical(&self) -> LatticeZ {
        LatticeZ::new(self.canonical_basis())
    }

    /// Whether `x` is an integer combination of the generators.
    pub fn contains(&self, x: &FormalReal) -> bool {
        let frame = IntegerFrame::new(self.generators.iter().chain(std::iter::once(x)));
        let (gens, target) = frame.rows.split_at(frame.rows.len() - 1);
        let mut v = target[0].clone();
        let basis = hermite_normal_form(gens, frame.symbols.len());
        for row in &basis {
            let col = row.iter().position(|c| !c.is_zero()).expect("HNF rows are nonzero");
            if v[..col].iter().any(|c| !c.is_zero()) {
                return false;
            }
            let (q, rem) = v[col].div_mod_floor(&row[col]);
            if !rem.is_zero() {
                return false;
            }
            sub_multiple(&mut v, row, &q);
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_all(&self, xs: &[FormalReal]) -> bool {
        xs.iter().all(|x| self.contains(x))
    }

    /// Subgroup inclusion `self ⊆ other`.
    pub fn is_subgroup_of(&self, other: &LatticeZ) -> bool {
        other.contains_all(&self.generators)
    }

    pub fn same_as(&self, other: &LatticeZ) -> bool {
        self.is_subgroup_of(other) && other.is_subgroup_of(self)
    }

    pub fn q_rank(&self) -> usize {
        q_rank(&self.generators)
    }

    /// Rank `r` with `Lat / 2Lat ≅ (ℤ/2)^r`, read off the Smith normal form of
    /// the generator matrix: the lattice is the row space, free of rank equal
    /// to the number of nonzero invariant factors.
    pub fn two_torsion_rank(&self) -> usize {
        let frame = IntegerFrame::new(&self.generators);
        smith_invariants(&frame.rows, frame.symbols.len()).len()
    }
}

/// Whether every generator of `target` lies in `⟨candidates⟩ + modulus`.
pub fn generates_modulo(candidates: &[FormalReal], target: &LatticeZ, modulus: &LatticeZ) -> bool {
    modulus.with(candidates).contains_all(target.generators())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn l(i: usize) -> FormalReal {
        FormalReal::symbol(&format!("λ{i}"))
    }

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect()
    }

    #[test]
    fn q_rank_examples() {
        assert_eq!(q_rank(&[l(1), l(2), l(1) + l(2)]), 2);
        assert_eq!(q_rank(&[]), 0);
        let half = l(1).scale(&rat(1, 2)) + l(2);
        // rows (1/2, 1), (0, 3), (1, 0): the first is a combination of the others
        assert_eq!(q_rank(&[half, l(2).scale_int(3), l(1)]), 2);
    }

    #[test]
    fn contains_examples() {
        assert!(!LatticeZ::new(vec![l(1).scale_int(2)]).contains(&l(1)));
        assert!(LatticeZ::new(vec![l(1), l(2)]).contains(&(l(1).scale_int(3) - l(2))));
        let lat = LatticeZ::new(vec![l(1) + l(2), l(1) - l(2)]);
        assert!(lat.contains(&l(1).scale_int(2)));
        assert!(!lat.contains(&l(1)));
        assert!(lat.contains(&FormalReal::zero()));
        assert!(!lat.contains(&FormalReal::int(1)));
    }

    #[test]
    fn generates_modulo_examples() {
        let target = LatticeZ::new(vec![l(2), l(1).scale_int(2)]);
        let modulus = LatticeZ::new(vec![l(1).scale_int(2), l(2).scale_int(2)]);
        assert!(generates_modulo(&[l(2)], &target, &modulus));
        assert!(!generates_modulo(
            &[],
            &LatticeZ::new(vec![l(1)]),
            &LatticeZ::new(vec![l(1).scale_int(2)])
        ));
        assert!(generates_modulo(
            &[l(1)],
            &LatticeZ::new(vec![l(1), l(2)]),
            &LatticeZ::new(vec![l(2)])
        ));
    }

    #[test]
    fn two_torsion_examples() {
        assert_eq!(LatticeZ::new(vec![l(1), l(2)]).two_torsion_rank(), 2);
        assert_eq!(LatticeZ::new(vec![l(1), l(1).scale_int(2)]).two_torsion_rank(), 1);
        assert_eq!(
            LatticeZ::new(vec![l(2), l(2) + l(1).scale_int(2)]).two_torsion_rank(),
            2
        );
        assert_eq!(LatticeZ::zero().two_torsion_rank(), 0);
    }

    #[test]
    fn smith_of_small_matrix() {
        // [[0,1],[2,1]] has invariant factors 1, 2
        assert_eq!(
            smith_invariants(&ints(&[&[0, 1], &[2, 1]]), 2),
            vec![BigInt::from(1), BigInt::from(2)]
        );
        assert_eq!(
            smith_invariants(&ints(&[&[2, 4], &[6, 8]]), 2),
            vec![BigInt::from(2), BigInt::from(4)]
        );
        assert_eq!(
            smith_invariants(&ints(&[&[2, 0], &[0, 3]]), 2),
            vec![BigInt::from(1), BigInt::from(6)]
        );
    }

    #[test]
    fn hnf_is_canonical() {
        let a = hermite_normal_form(&ints(&[&[2, 1], &[0, 1]]), 2);
        let b = hermite_normal_form(&ints(&[&[2, 2], &[4, 3], &[0, 5]]), 2);
        assert_eq!(a, ints(&[&[2, 0], &[0, 1]]));
        assert_eq!(b, a);
        let lat = LatticeZ::new(vec![FormalReal::ratio(1, 2), FormalReal::ratio(3, 2)]);
        assert_eq!(lat.canonical_basis(), vec![FormalReal::ratio(1, 2)]);
    }
}
