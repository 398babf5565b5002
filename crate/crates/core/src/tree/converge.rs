use num_traits::{Signed, Zero};
use serde::Serialize;

use super::from_point::tree_from_point;
use super::gog::GraphOfGroupsTree;
use crate::error::{Error, Result};
use crate::graph::{Lengths, MarkedMetricAGraph, Shape};
use crate::scalar::{format_rational, FormalReal, Rational};
use crate::word::{word_ball, Endomap, FreeFactorSystem, Word};

#[derive(Clone, Debug, Serialize)]
pub struct Deviation {
    #[serde(serialize_with = "ser_rational")]
    pub max: Rational,
    /// Normalizing word.
    pub w0: String,
    /// A word attaining the maximum (empty when it is zero).
    pub worst: String,
    pub words: usize,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

fn rational_length(t: &GraphOfGroupsTree, w: &Word) -> Result<Rational> {
    let l = t.translation_length(w)?;
    l.as_rational()
        .ok_or_else(|| Error::Domain(format!("length {l} is not rational; comparison needs numeric lengths")))
}

/// `max |l_a(w)/l_a(w₀) − l_b(w)/l_b(w₀)|` over nontrivial reduced words up
/// to `ball`, with `w₀` the first generator hyperbolic in both trees.
pub fn compare_projective(ta: &GraphOfGroupsTree, tb: &GraphOfGroupsTree, ball: usize) -> Result<Deviation> {
    if ta.system != tb.system {
        return Err(Error::Domain("trees belong to different systems".into()));
    }
    let sys = &ta.system;
    let mut w0 = None;
    for g in 0..sys.gen_count() {
        let w = Word::gen(g);
        let (la, lb) = (rational_length(ta, &w)?, rational_length(tb, &w)?);
        if !la.is_zero() && !lb.is_zero() {
            w0 = Some((w, la, lb));
            break;
        }
    }
    let Some((w0, la0, lb0)) = w0 else {
        return Err(Error::Degenerate("no generator is hyperbolic in both trees".into()));
    };
    let mut max = Rational::zero();
    let mut worst = String::new();
    let words = word_ball(sys.gen_count(), ball);
    let mut count = 0;
    for w in words.iter().filter(|w| !w.is_identity()) {
        count += 1;
        let d = (rational_length(ta, w)? / &la0 - rational_length(tb, w)? / &lb0).abs();
        if d > max {
            max = d;
            worst = sys.format_word(w);
        }
    }
    Ok(Deviation {
        max,
        w0: sys.format_word(&w0),
        worst,
        words: count,
    })
}

/// The rose point with `a` on the special vertex and a unit loop for `b`.
pub fn rose_point() -> Result<MarkedMetricAGraph> {
    let sys = FreeFactorSystem::standard(2, &[1])?;
    let shape = Shape {
        vertices: 1,
        edges: vec![(0, 0)],
    };
    MarkedMetricAGraph::from_shape(&sys, &shape, Lengths::Explicit(vec![FormalReal::int(1)]))
}

/// The stem-and-loop point of `(2, 1, (1))` with both lengths `1/2`.
pub fn middle_point() -> Result<MarkedMetricAGraph> {
    let sys = FreeFactorSystem::standard(2, &[1])?;
    let shape = Shape {
        vertices: 2,
        edges: vec![(0, 1), (1, 1)],
    };
    MarkedMetricAGraph::from_shape(&sys, &shape, Lengths::Uniform)
}

/// `b ↦ aᴺb`, with inverse `b ↦ a⁻ᴺb`.
pub fn shear(sys: &FreeFactorSystem, n: i64) -> Result<Endomap> {
    Endomap::parse(sys, &format!("b->a^{n}*b"), Some(&format!("b->a^{}*b", -n)))
}

#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceRow {
    pub n: i64,
    /// Against the rose point the sequence converges to.
    pub to_rose: Deviation,
    /// Against the unsheared middle point.
    pub to_middle: Deviation,
}

/// The middle point sheared by `b ↦ aᴺb` for `N = 1..=n_max`, compared with
/// the rose point and the middle point on the word ball.
pub fn convergence(n_max: i64, ball: usize) -> Result<Vec<ConvergenceRow>> {
    let middle = middle_point()?;
    let rose = tree_from_point(&rose_point()?)?;
    let t_middle = tree_from_point(&middle)?;
    (1..=n_max)
        .map(|n| {
            let tn = tree_from_point(&middle.act(&shear(&middle.system, n)?)?)?;
            Ok(ConvergenceRow {
                n,
                to_rose: compare_projective(&tn, &rose, ball)?,
                to_middle: compare_projective(&tn, &t_middle, ball)?,
            })
        })
        .collect()
}
