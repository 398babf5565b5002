use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{FreeFactorSystem, Word};
use crate::error::{Error, Result};

/// A homomorphism `Fₙ → Fₙ` given by generator images, optionally with a
/// declared inverse (needed to certify bijectivity).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Endomap {
    images: Vec<Word>,
    inverse: Option<Vec<Word>>,
}

/// Outcome of [`Endomap::relative_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeCertificate {
    pub bijective: bool,
    /// `conjugators[j] = g_j` with `f(y) = g_j y g_j⁻¹` on all of `A_j`.
    pub conjugators: Vec<Option<Word>>,
}

impl RelativeCertificate {
    pub fn is_relative(&self) -> bool {
        self.bijective && self.conjugators.iter().all(Option::is_some)
    }
}

#[derive(Serialize, Deserialize)]
struct EndomapJson {
    images: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inverse: Option<BTreeMap<String, String>>,
}

impl Endomap {
    pub fn new(images: Vec<Word>, inverse: Option<Vec<Word>>) -> Result<Self> {
        if let Some(inv) = &inverse {
            if inv.len() != images.len() {
                return Err(Error::Domain("inverse has a different number of generators".into()));
            }
        }
        Ok(Endomap { images, inverse })
    }

    pub fn identity(gens: u32) -> Self {
        let images: Vec<Word> = (0..gens).map(Word::gen).collect();
        Endomap {
            inverse: Some(images.clone()),
            images,
        }
    }

    /// Builds a map from `name -> image` pairs; unlisted generators are fixed.
    pub fn from_named(
        sys: &FreeFactorSystem,
        images: &[(&str, &str)],
        inverse: Option<&[(&str, &str)]>,
    ) -> Result<Self> {
        let build = |pairs: &[(&str, &str)]| -> Result<Vec<Word>> {
            let mut out: Vec<Word> = (0..sys.gen_count()).map(Word::gen).collect();
            for (name, img) in pairs {
                out[sys.gen_id(name)? as usize] = sys.parse_word(img)?;
            }
            Ok(out)
        };
        Endomap::new(build(images)?, inverse.map(build).transpose()?)
    }

    /// Parses `a->a, b->a^3*b`.
    pub fn parse(sys: &FreeFactorSystem, images: &str, inverse: Option<&str>) -> Result<Self> {
        fn pairs(s: &str) -> Result<Vec<(&str, &str)>> {
            s.split(',')
                .filter(|p| !p.trim().is_empty())
                .map(|p| {
                    p.split_once("->")
                        .map(|(a, b)| (a.trim(), b.trim()))
                        .ok_or_else(|| Error::Parse(format!("expected name->word, got {p:?}")))
                })
                .collect()
        }
        let img = pairs(images)?;
        let inv = inverse.map(pairs).transpose()?;
        Endomap::from_named(sys, &img, inv.as_deref())
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, gen: u32) -> &Word {
        &self.images[gen as usize]
    }

    pub fn declared_inverse(&self) -> Option<Endomap> {
        self.inverse.as_ref().map(|inv| Endomap {
            images: inv.clone(),
            inverse: Some(self.images.clone()),
        })
    }

    pub fn apply(&self, w: &Word) -> Word {
        Word::reduce(w.letters().iter().flat_map(|l| {
            let img = &self.images[l.gen as usize];
            let img = if l.inverse { img.inverse() } else { img.clone() };
            img.letters().to_vec()
        }))
    }

    /// `self ∘ other`, i.e. `g ↦ self(other(g))`.
    pub fn compose(&self, other: &Endomap) -> Endomap {
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        let inverse = match (self.declared_inverse(), other.declared_inverse()) {
            (Some(si), Some(oi)) => Some(oi.compose_images(&si)),
            _ => None,
        };
        Endomap { images, inverse }
    }

    fn compose_images(&self, other: &Endomap) -> Vec<Word> {
        other.images.iter().map(|w| self.apply(w)).collect()
    }

    /// Checks bijectivity against the declared inverse and computes, for
    /// each factor, the common conjugator of the restriction.
    pub fn relative_certificate(&self, sys: &FreeFactorSystem) -> Result<RelativeCertificate> {
        if self.images.len() != sys.gen_count() as usize {
            return Err(Error::Domain("map is not total on the generator alphabet".into()));
        }
        let inv = self.declared_inverse().ok_or_else(|| {
            Error::VerificationIncomplete("no declared inverse, bijectivity cannot be certified".into())
        })?;
        let bijective = (0..sys.gen_count()).all(|g| {
            let gw = Word::gen(g);
            self.apply(&inv.apply(&gw)) == gw && inv.apply(&self.apply(&gw)) == gw
        });
        let conjugators = (0..sys.k())
            .map(|j| {
                let pairs: Vec<(Word, Word)> = sys
                    .factor_gens(j)
                    .map(|g| (Word::gen(g), self.images[g as usize].clone()))
                    .collect();
                common_conjugator(&pairs)
            })
            .collect();
        Ok(RelativeCertificate { bijective, conjugators })
    }

    pub fn is_relative_automorphism(&self, sys: &FreeFactorSystem) -> Result<bool> {
        Ok(self.relative_certificate(sys)?.is_relative())
    }

    pub fn to_json(&self, sys: &FreeFactorSystem) -> serde_json::Value {
        let named = |ws: &[Word]| -> BTreeMap<String, String> {
            ws.iter()
                .enumerate()
                .map(|(g, w)| (sys.name(g as u32).to_string(), sys.format_word(w)))
                .collect()
        };
        serde_json::to_value(EndomapJson {
            images: named(&self.images),
            inverse: self.inverse.as_deref().map(named),
        })
        .expect("endomap serializes")
    }

    pub fn from_json(sys: &FreeFactorSystem, v: &serde_json::Value) -> Result<Self> {
        let j: EndomapJson = serde_json::from_value(v.clone()).map_err(|e| Error::schema("endomap", e.to_string()))?;
        let img: Vec<(&str, &str)> = j.images.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        let inv: Option<Vec<(&str, &str)>> = j
            .inverse
            .as_ref()
            .map(|m| m.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect());
        Endomap::from_named(sys, &img, inv.as_deref())
    }
}

/// Finds `g` with `v = g u g⁻¹` for every pair simultaneously.
///
/// The first pair pins `g` to a coset `g₀ · C(u)` of the centralizer
/// `C(u) = ⟨root(u)⟩`, found by aligning cyclically reduced cores; the
/// remaining pairs select among `g₀ rᵐ`. Among all solutions the shortlex
/// smallest is returned.
pub fn common_conjugator(pairs: &[(Word, Word)]) -> Option<Word> {
    let Some((u0, v0)) = pairs.first() else {
        return Some(Word::identity());
    };
    if u0.is_identity() || v0.is_identity() {
        return if pairs.iter().all(|(u, v)| u == v) && u0.is_identity() && v0.is_identity() {
            common_conjugator(&pairs[1..])
        } else {
            None
        };
    }
    let (cu, a) = u0.cyclic_reduce();
    let (cv, b) = v0.cyclic_reduce();
    if cu.len() != cv.len() {
        return None;
    }
    let k = (0..cu.len()).find(|&k| cu.rotate(k) == cv)?;
    let p = Word::reduce(cu.letters()[..k].iter().copied());
    let g0 = b.mul(&p.inverse()).mul(&a.inverse());
    debug_assert_eq!(u0.conjugate_by(&g0), *v0);

    let (r, _) = u0.root();
    let total: usize = pairs.iter().map(|(u, v)| u.len() + v.len()).sum();
    let bound = (total + 2 * g0.len() + 4) as i64;
    let mut best: Option<Word> = None;
    for m in -bound..=bound {
        let g = g0.mul(&r.pow(m));
        if pairs.iter().all(|(u, v)| u.conjugate_by(&g) == *v)
            && best.as_ref().is_none_or(|b| g.shortlex() < b.shortlex())
        {
            best = Some(g);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::word_ball;

    fn sys21() -> FreeFactorSystem {
        FreeFactorSystem::standard(2, &[1]).unwrap()
    }

    #[test]
    fn conjugator_examples() {
        let s = sys21();
        let a = s.parse_word("a").unwrap();
        let bab = s.parse_word("b*a*b^-1").unwrap();
        assert_eq!(common_conjugator(&[(a.clone(), bab)]), Some(s.parse_word("b").unwrap()));
        assert_eq!(common_conjugator(&[(a.clone(), a.clone())]), Some(Word::identity()));
        let bainvb = s.parse_word("b*a^-1*b^-1").unwrap();
        assert_eq!(common_conjugator(&[(a, bainvb)]), None);
    }

    /// Exhaustive oracle: every g up to the given length.
    fn brute_conjugator(pairs: &[(Word, Word)], gens: u32, max_len: usize) -> Option<Word> {
        word_ball(gens, max_len)
            .into_iter()
            .find(|g| pairs.iter().all(|(u, v)| u.conjugate_by(g) == *v))
    }

    #[test]
    fn non_conjugate_pair_has_no_short_conjugator() {
        let s = sys21();
        let u = s.parse_word("a").unwrap();
        let v = s.parse_word("b*a^-1*b^-1").unwrap();
        assert_eq!(brute_conjugator(&[(u.clone(), v.clone())], 2, u.len() + v.len()), None);
        // cyclic-word comparison: a vs a^-1 are not rotations
        assert!(!u.is_conjugate_to(&v));
    }

    #[test]
    fn simultaneous_conjugator_matches_brute_force() {
        let s = FreeFactorSystem::standard(3, &[2]).unwrap();
        let g = s.parse_word("c*a^-1").unwrap();
        let pairs: Vec<(Word, Word)> = ["a", "b"]
            .iter()
            .map(|n| {
                let y = s.parse_word(n).unwrap();
                let img = y.conjugate_by(&g);
                (y, img)
            })
            .collect();
        let found = common_conjugator(&pairs).unwrap();
        assert_eq!(found, g);
        assert_eq!(brute_conjugator(&pairs, 3, 2), Some(g));
    }

    #[test]
    fn relative_automorphism_examples() {
        let s = sys21();
        let f = Endomap::parse(&s, "a->a, b->a^3*b", Some("a->a, b->a^-3*b")).unwrap();
        let cert = f.relative_certificate(&s).unwrap();
        assert!(cert.is_relative());
        assert_eq!(cert.conjugators, vec![Some(Word::identity())]);

        let swap = Endomap::parse(&s, "a->b, b->a", Some("a->b, b->a")).unwrap();
        assert!(!swap.is_relative_automorphism(&s).unwrap());

        let inner = Endomap::parse(&s, "a->b*a*b^-1, b->b", Some("a->b^-1*a*b")).unwrap();
        let cert = inner.relative_certificate(&s).unwrap();
        assert!(cert.is_relative());
        assert_eq!(cert.conjugators, vec![Some(s.parse_word("b").unwrap())]);
    }

    #[test]
    fn missing_inverse_is_incomplete_not_false() {
        let s = sys21();
        let f = Endomap::parse(&s, "b->a*b", None).unwrap();
        assert!(matches!(
            f.relative_certificate(&s),
            Err(Error::VerificationIncomplete(_))
        ));
    }

    #[test]
    fn apply_examples() {
        let s = sys21();
        let f = Endomap::parse(&s, "b->a*b", None).unwrap();
        assert_eq!(s.format_word(&f.apply(&s.parse_word("b*b").unwrap())), "a*b*a*b");
        let id = Endomap::identity(2);
        let w = s.parse_word("a*b^-1*a").unwrap();
        assert_eq!(id.apply(&w), w);
        let g = Endomap::parse(&s, "b->a^2*b", None).unwrap();
        assert_eq!(
            g.apply(&s.parse_word("b^-1").unwrap()),
            s.parse_word("b^-1*a^-2").unwrap()
        );
    }

    #[test]
    fn json_round_trip() {
        let s = sys21();
        let f = Endomap::parse(&s, "b->a*b", Some("b->a^-1*b")).unwrap();
        let v = f.to_json(&s);
        assert_eq!(Endomap::from_json(&s, &v).unwrap(), f);
    }
}
