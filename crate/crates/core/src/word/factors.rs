use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{Letter, Word};
use crate::error::{Error, Result};

/// Where a generator lives in the splitting `Fₙ = A₁ * ... * A_k * B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    /// `index`-th generator of factor `factor`.
    Wedge { factor: usize, index: usize },
    /// `index`-th generator of the complement `B`.
    Free { index: usize },
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    n: usize,
    factors: Vec<Vec<String>>,
    free: Vec<String>,
}

/// A free factor system `{A₁, ..., A_k}` of `Fₙ` together with a basis
/// adapted to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemJson", into = "SystemJson")]
pub struct FreeFactorSystem {
    n: usize,
    factors: Vec<Vec<String>>,
    free: Vec<String>,
    #[serde(skip)]
    lookup: HashMap<String, u32>,
}

impl TryFrom<SystemJson> for FreeFactorSystem {
    type Error = Error;
    fn try_from(j: SystemJson) -> Result<Self> {
        FreeFactorSystem::new(j.n, j.factors, j.free)
    }
}

impl From<FreeFactorSystem> for SystemJson {
    fn from(s: FreeFactorSystem) -> Self {
        SystemJson {
            n: s.n,
            factors: s.factors,
            free: s.free,
        }
    }
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => chars.all(|c| c.is_alphanumeric() || c == '_'),
        _ => false,
    }
}

impl FreeFactorSystem {
    pub fn new(n: usize, factors: Vec<Vec<String>>, free: Vec<String>) -> Result<Self> {
        if n == 0 {
            return Err(Error::System("rank n must be positive".into()));
        }
        if factors.iter().any(|f| f.is_empty()) {
            return Err(Error::System("every factor needs at least one generator".into()));
        }
        let sum_s: usize = factors.iter().map(Vec::len).sum();
        if sum_s > n {
            return Err(Error::System(format!("factor ranks sum to {sum_s} > n = {n}")));
        }
        if sum_s + free.len() != n {
            return Err(Error::System(format!(
                "expected {} free generators, found {}",
                n - sum_s,
                free.len()
            )));
        }
        let mut lookup = HashMap::new();
        for (i, name) in factors.iter().flatten().chain(free.iter()).enumerate() {
            if !valid_name(name) {
                return Err(Error::System(format!("invalid generator name {name:?}")));
            }
            if lookup.insert(name.clone(), i as u32).is_some() {
                return Err(Error::System(format!("duplicate generator name {name:?}")));
            }
        }
        Ok(FreeFactorSystem {
            n,
            factors,
            free,
            lookup,
        })
    }

    /// The system `(n, k, s)` with generators named `a, b, c, ...` (factor
    /// generators first), or `y{j}_{t}` / `x{i}` once the alphabet runs out.
    pub fn standard(n: usize, s: &[usize]) -> Result<Self> {
        let sum_s: usize = s.iter().sum();
        if sum_s > n {
            return Err(Error::System(format!("factor ranks sum to {sum_s} > n = {n}")));
        }
        let lettered = n <= 26;
        let mut next = 0u8;
        let mut fresh = |fallback: String| {
            if lettered {
                let c = (b'a' + next) as char;
                next += 1;
                c.to_string()
            } else {
                fallback
            }
        };
        let factors = s
            .iter()
            .enumerate()
            .map(|(j, &sj)| (0..sj).map(|t| fresh(format!("y{}_{}", j + 1, t + 1))).collect())
            .collect();
        let free = (0..n - sum_s).map(|i| fresh(format!("x{}", i + 1))).collect();
        FreeFactorSystem::new(n, factors, free)
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.factors.len()
    }

    pub fn s(&self, factor: usize) -> usize {
        self.factors[factor].len()
    }

    pub fn factor_ranks(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    pub fn sum_s(&self) -> usize {
        self.factors.iter().map(Vec::len).sum()
    }

    /// Rank of the complement `B`, i.e. `n − Σ s(i)`.
    pub fn free_rank(&self) -> usize {
        self.free.len()
    }

    pub fn factor_names(&self) -> &[Vec<String>] {
        &self.factors
    }

    pub fn free_names(&self) -> &[String] {
        &self.free
    }

    pub fn gen_count(&self) -> u32 {
        self.n as u32
    }

    /// Generator ids of factor `j`.
    pub fn factor_gens(&self, j: usize) -> std::ops::Range<u32> {
        let start: usize = self.factors[..j].iter().map(Vec::len).sum();
        start as u32..(start + self.factors[j].len()) as u32
    }

    pub fn free_gens(&self) -> std::ops::Range<u32> {
        self.sum_s() as u32..self.n as u32
    }

    pub fn kind(&self, gen: u32) -> GenKind {
        let mut g = gen as usize;
        for (factor, f) in self.factors.iter().enumerate() {
            if g < f.len() {
                return GenKind::Wedge { factor, index: g };
            }
            g -= f.len();
        }
        GenKind::Free { index: g }
    }

    pub fn factor_of(&self, gen: u32) -> Option<usize> {
        match self.kind(gen) {
            GenKind::Wedge { factor, .. } => Some(factor),
            GenKind::Free { .. } => None,
        }
    }

    pub fn name(&self, gen: u32) -> &str {
        match self.kind(gen) {
            GenKind::Wedge { factor, index } => &self.factors[factor][index],
            GenKind::Free { index } => &self.free[index],
        }
    }

    pub fn gen_id(&self, name: &str) -> Result<u32> {
        self.lookup
            .get(name)
            .copied()
            .ok_or_else(|| Error::Alphabet(format!("unknown generator {name:?}")))
    }

    /// Reduces a raw sequence of `(name, ±1)` letters.
    pub fn reduce_named<'a, I>(&self, raw: I) -> Result<Word>
    where
        I: IntoIterator<Item = (&'a str, i8)>,
    {
        let letters = raw
            .into_iter()
            .map(|(name, e)| {
                let g = self.gen_id(name)?;
                match e {
                    1 => Ok(Letter::pos(g)),
                    -1 => Ok(Letter::neg(g)),
                    _ => Err(Error::Alphabet(format!("exponent {e} is not ±1"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word::reduce(letters))
    }

    /// Parses `a*b^-1*c^2`; `1` or the empty string is the identity.
    pub fn parse_word(&self, s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((name, e)) => {
                    let e: i64 = e
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?;
                    (name.trim(), e)
                }
                None => (factor, 1),
            };
            if name == "1" {
                continue;
            }
            let g = self.gen_id(name)?;
            let l = Letter::new(g, exp < 0);
            letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
        }
        Ok(Word::reduce(letters))
    }

    pub fn format_word(&self, w: &Word) -> String {
        if w.is_identity() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|l| {
                if l.inverse {
                    format!("{}^-1", self.name(l.gen))
                } else {
                    self.name(l.gen).to_string()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Whether every letter of `w` belongs to factor `j`.
    pub fn in_factor(&self, w: &Word, j: usize) -> bool {
        let r = self.factor_gens(j);
        w.generators_used().all(|g| r.contains(&g))
    }

    /// The factor `w` is conjugate into, if any.
    pub fn conjugate_into_factor(&self, w: &Word) -> Option<usize> {
        if w.is_identity() {
            return None;
        }
        let core = w.cyclic_reduce().0;
        (0..self.k()).find(|&j| self.in_factor(&core, j))
    }

    pub fn describe(&self) -> String {
        format!("(n={}, k={}, s={:?})", self.n, self.k(), self.factor_ranks())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_naming_matches_rank_two_example() {
        let sys = FreeFactorSystem::standard(2, &[1]).unwrap();
        assert_eq!(sys.factor_names(), &[vec!["a".to_string()]]);
        assert_eq!(sys.free_names(), &["b".to_string()]);
        assert_eq!(sys.kind(1), GenKind::Free { index: 0 });
        assert_eq!(sys.free_rank(), 1);
    }

    #[test]
    fn rejects_bad_systems() {
        assert!(FreeFactorSystem::standard(2, &[2, 1]).is_err());
        assert!(FreeFactorSystem::new(2, vec![vec!["a".into()]], vec!["a".into()]).is_err());
        assert!(FreeFactorSystem::new(2, vec![vec![]], vec!["a".into(), "b".into()]).is_err());
        assert!(FreeFactorSystem::new(0, vec![], vec![]).is_err());
    }

    #[test]
    fn k_zero_is_legal() {
        let sys = FreeFactorSystem::standard(3, &[]).unwrap();
        assert_eq!(sys.k(), 0);
        assert_eq!(sys.free_rank(), 3);
    }

    #[test]
    fn parse_and_format() {
        let sys = FreeFactorSystem::standard(2, &[1]).unwrap();
        let w = sys.parse_word("a*a^-1*b").unwrap();
        assert_eq!(sys.format_word(&w), "b");
        let w = sys.parse_word("b^-1*a^-2").unwrap();
        assert_eq!(sys.format_word(&w), "b^-1*a^-1*a^-1");
        assert_eq!(sys.parse_word("").unwrap(), Word::identity());
        assert!(matches!(sys.parse_word("a*z"), Err(Error::Alphabet(_))));
    }

    #[test]
    fn reduce_named_rejects_unknown_names() {
        let sys = FreeFactorSystem::standard(2, &[1]).unwrap();
        let w = sys.reduce_named([("a", 1), ("a", -1), ("b", 1)]).unwrap();
        assert_eq!(w, Word::gen(1));
        assert!(sys.reduce_named([("q", 1)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let sys = FreeFactorSystem::standard(3, &[1, 1]).unwrap();
        let js = serde_json::to_string(&sys).unwrap();
        assert_eq!(js, r#"{"n":3,"factors":[["a"],["b"]],"free":["c"]}"#);
        let back: FreeFactorSystem = serde_json::from_str(&js).unwrap();
        assert_eq!(back, sys);
    }
}
