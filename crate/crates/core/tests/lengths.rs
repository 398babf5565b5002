//! Translation lengths: quotient normal form against the marked graph, the
//! two-point formula and ball minimization.

use proptest::prelude::*;
use rospace::fixtures::{self, FixtureKind};
use rospace::graph::{enumerate_maximal, Budget, Lengths, MarkedMetricAGraph};
use rospace::tree::{tree_from_point, GraphOfGroupsTree};
use rospace::word::{word_ball, FreeFactorSystem, Letter, Word};

fn maximal_points(n: usize, s: &[usize]) -> Vec<MarkedMetricAGraph> {
    let sys = FreeFactorSystem::standard(n, s).unwrap();
    enumerate_maximal(&sys, false, Budget::default())
        .unwrap()
        .maximal
        .iter()
        .map(|sh| MarkedMetricAGraph::from_shape(&sys, sh, Lengths::Symbolic).unwrap())
        .collect()
}

#[test]
fn tree_and_graph_lengths_agree() {
    for (n, s) in [
        (2usize, vec![]),
        (2, vec![1]),
        (3, vec![1]),
        (3, vec![2]),
        (3, vec![1, 1]),
    ] {
        for x in maximal_points(n, &s) {
            let t = tree_from_point(&x).unwrap();
            for w in word_ball(x.system.gen_count(), 4) {
                let l = t.translation_length(&w).unwrap();
                assert_eq!(l, x.translation_length(&w), "{}", x.system.format_word(&w));
                assert_eq!(l, t.two_point_length(&w).unwrap(), "{}", x.system.format_word(&w));
            }
        }
    }
}

#[test]
fn fixture_lengths_match_the_ball_oracle() {
    for f in fixtures::all().unwrap() {
        if f.kind == FixtureKind::Violation {
            assert!(f.tree.translation_length(&Word::gen(0)).is_err());
            continue;
        }
        for w in word_ball(f.tree.system.gen_count(), 4) {
            assert_eq!(
                f.tree.translation_length(&w).unwrap(),
                f.tree.ball_length(&w, 2).unwrap(),
                "{} {}",
                f.name,
                f.tree.system.format_word(&w)
            );
        }
    }
}

#[test]
fn t1_worked_lengths() {
    let t = fixtures::fixture("t1").unwrap().tree;
    let sys = t.system.clone();
    let l = |s: &str| t.translation_length(&sys.parse_word(s).unwrap()).unwrap().to_string();
    assert_eq!(l("a"), "0");
    assert_eq!(l("b"), "1");
    assert_eq!(l("a*b"), "1");
    assert_eq!(l("a*b*a^-1*b^-1"), "2");
}

#[test]
fn boundary_fixture_has_its_extra_elliptic() {
    for name in ["boundary-2-1", "boundary-3-1"] {
        let t = fixtures::fixture(name).unwrap().tree;
        let last = t.system.gen_count() - 1;
        assert!(t.translation_length(&Word::gen(last)).unwrap().is_zero(), "{name}");
        assert!(t.translation_length(&Word::gen(0)).unwrap().is_zero(), "{name}");
    }
}

fn word(gens: u32, max: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max)
        .prop_map(|ls| Word::reduce(ls.into_iter().map(|(g, i)| Letter::new(g, i))))
}

fn trees() -> Vec<GraphOfGroupsTree> {
    ["x2-middle", "theta", "boundary-3-1"]
        .iter()
        .map(|n| fixtures::fixture(n).unwrap().tree)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_invariance(w in word(3, 8), g in word(3, 6), which in 0usize..3) {
        let t = &trees()[which];
        let gens = t.system.gen_count();
        let fit = |u: &Word| Word::reduce(u.letters().iter().map(|l| Letter::new(l.gen % gens, l.inverse)));
        let (w, g) = (fit(&w), fit(&g));
        prop_assert_eq!(t.translation_length(&w.conjugate_by(&g)).unwrap(), t.translation_length(&w).unwrap());
    }

    #[test]
    fn lengths_scale_with_powers(w in word(3, 6), m in 1i64..5, which in 0usize..3) {
        let t = &trees()[which];
        let gens = t.system.gen_count();
        let w = Word::reduce(w.letters().iter().map(|l| Letter::new(l.gen % gens, l.inverse)));
        let l = t.translation_length(&w).unwrap();
        prop_assert_eq!(t.translation_length(&w.pow(m)).unwrap(), l.scale_int(m));
        prop_assert_eq!(t.translation_length(&w.inverse()).unwrap(), l);
    }
}
