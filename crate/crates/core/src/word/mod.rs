//! Free-group words over the alphabet of a free factor system.

mod endomap;
mod factors;
pub mod fold;

pub use endomap::{common_conjugator, Endomap, RelativeCertificate};
pub use factors::{FreeFactorSystem, GenKind};

use std::fmt;

/// A generator or its inverse. Generators are numbered by their position in a
/// [`FreeFactorSystem`]: factor generators first, then the free ones.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Letter {
    pub gen: u32,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: u32, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: u32) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: u32) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A reduced word. The identity is the empty word.
///
/// Ordering is lexicographic on letters (generator index, then positive before
/// inverse); combine with length for shortlex comparisons.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(gen: u32) -> Self {
        Word(vec![Letter::pos(gen)])
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(raw: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in raw {
            if out.last().is_some_and(|&last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last().is_some_and(|&last| last.cancels(l)) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, m: i64) -> Word {
        let base = if m < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..m.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `g · self · g⁻¹`
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (Some(&f), Some(&l)) => self.0.len() == 1 || !f.cancels(l),
            _ => true,
        }
    }

    /// Splits the word as `conjugator · core · conjugator⁻¹` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let w = &self.0;
        let mut i = 0;
        let mut j = w.len();
        while j >= i + 2 && w[i].cancels(w[j - 1]) {
            i += 1;
            j -= 1;
        }
        (Word(w[i..j].to_vec()), Word(w[..i].to_vec()))
    }

    /// Rotation `w[k..] · w[..k]` of a cyclically reduced word.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return Word::identity();
        }
        let k = k % n;
        let mut v = self.0[k..].to_vec();
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Smallest `p` dividing the length with `w` periodic of period `p`.
    fn primitive_period(&self) -> usize {
        let n = self.0.len();
        (1..=n)
            .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| self.0[i] == self.0[i - p]))
            .unwrap_or(0)
    }

    /// The primitive root `r` with `self = r^m`, `m ≥ 1`, for nontrivial words.
    pub fn root(&self) -> (Word, usize) {
        if self.is_identity() {
            return (Word::identity(), 0);
        }
        let (core, conj) = self.cyclic_reduce();
        let p = core.primitive_period();
        let r = Word(core.0[..p].to_vec());
        (r.conjugate_by(&conj), core.len() / p)
    }

    pub fn is_proper_power(&self) -> bool {
        !self.is_identity() && self.root().1 > 1
    }

    /// Whether the two cyclically reduced words are cyclic rotations of each other.
    pub fn is_rotation_of(&self, other: &Word) -> bool {
        self.len() == other.len() && (self.is_empty() || (0..self.len()).any(|k| other.rotate(k) == *self))
    }

    /// Conjugacy in the free group, via cyclically reduced cores.
    pub fn is_conjugate_to(&self, other: &Word) -> bool {
        self.cyclic_reduce().0.is_rotation_of(&other.cyclic_reduce().0)
    }

    pub fn generators_used(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().map(|l| l.gen)
    }

    /// Shortlex comparison key.
    pub fn shortlex(&self) -> (usize, &Word) {
        (self.len(), self)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "g{}", l.gen)?;
            if l.inverse {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

/// All reduced words of length exactly `len` over `gens` generators, in
/// shortlex order.
pub fn words_of_length(gens: u32, len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for g in 0..gens {
                for inverse in [false, true] {
                    let l = Letter::new(g, inverse);
                    if w.0.last().is_some_and(|&last| last.cancels(l)) {
                        continue;
                    }
                    let mut v = w.0.clone();
                    v.push(l);
                    next.push(Word(v));
                }
            }
        }
        out = next;
    }
    out
}

/// All reduced words of length at most `max_len`, identity first.
pub fn word_ball(gens: u32, max_len: usize) -> Vec<Word> {
    (0..=max_len).flat_map(|l| words_of_length(gens, l)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &[i32]) -> Word {
        Word::reduce(spec.iter().map(|&x| Letter::new(x.unsigned_abs() - 1, x < 0)))
    }

    #[test]
    fn reduce_cancels_adjacent_pairs() {
        // a=1, b=2
        assert_eq!(w(&[1, -1, 2]), w(&[2]));
        assert_eq!(w(&[]), Word::identity());
        assert_eq!(w(&[2, 1, -2, 2, -1, -2]), Word::identity());
    }

    #[test]
    fn cyclic_reduce_examples() {
        assert_eq!(w(&[2, 1, -2]).cyclic_reduce(), (w(&[1]), w(&[2])));
        assert_eq!(w(&[1, 2]).cyclic_reduce(), (w(&[1, 2]), Word::identity()));
        assert_eq!(w(&[-2, 1, 2, 2]).cyclic_reduce(), (w(&[1, 2]), w(&[-2])));
    }

    #[test]
    fn roots_and_powers() {
        let ab = w(&[1, 2]);
        let (r, m) = ab.pow(3).root();
        assert_eq!((r, m), (ab.clone(), 3));
        let conj = ab.pow(2).conjugate_by(&w(&[2]));
        assert_eq!(conj.root(), (ab.conjugate_by(&w(&[2])), 2));
        assert!(!w(&[1, 2, 1]).is_proper_power());
    }

    #[test]
    fn ball_sizes() {
        // 2n(2n-1)^(l-1) reduced words of length l
        assert_eq!(words_of_length(2, 3).len(), 4 * 9);
        assert_eq!(word_ball(3, 2).len(), 1 + 6 + 30);
    }

    #[test]
    fn display_uses_generator_indices() {
        assert_eq!(w(&[1, -2]).to_string(), "g0*g1^-1");
        assert_eq!(Word::identity().to_string(), "1");
    }
}
