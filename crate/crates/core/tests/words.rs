//! Free group words: reduction, cyclic reduction, roots and folding.

use proptest::prelude::*;
use rospace::word::fold::SubgroupGraph;
use rospace::word::{Letter, Word};

fn raw(gens: u32, max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0..gens, any::<bool>()), 0..=max)
        .prop_map(|ls| ls.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
}

fn word(gens: u32, max: usize) -> impl Strategy<Value = Word> {
    raw(gens, max).prop_map(Word::reduce)
}

/// Free reduction with an explicit stack, letter by letter.
fn stack_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in letters {
        if out.last().is_some_and(|&t| t.gen == l.gen && t.inverse != l.inverse) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

proptest! {
    #[test]
    fn reduction_matches_a_stack(letters in raw(3, 16)) {
        let w = Word::reduce(letters.clone());
        prop_assert_eq!(w.letters(), &stack_reduce(&letters)[..]);
    }

    #[test]
    fn group_laws(u in word(3, 8), v in word(3, 8), w in word(3, 8)) {
        prop_assert_eq!(u.mul(&v).mul(&w), u.mul(&v.mul(&w)));
        prop_assert!(u.mul(&u.inverse()).is_identity());
        prop_assert_eq!(u.mul(&v).inverse(), v.inverse().mul(&u.inverse()));
    }

    #[test]
    fn cyclic_core_is_a_conjugacy_invariant(w in word(3, 8), g in word(3, 8)) {
        let (core, conj) = w.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(core.conjugate_by(&conj), w.clone());
        let (core2, _) = w.conjugate_by(&g).cyclic_reduce();
        prop_assert!(core2.is_rotation_of(&core));
        prop_assert!(w.conjugate_by(&g).is_conjugate_to(&w));
    }

    #[test]
    fn roots_recover_powers(w in word(2, 6), m in 1i64..5) {
        prop_assume!(!w.is_identity());
        let (r, k) = w.root();
        prop_assert_eq!(r.pow(k as i64), w.clone());
        let (r2, k2) = w.pow(m).root();
        prop_assert_eq!(r2, r);
        prop_assert_eq!(k2, k * m as usize);
        prop_assert_eq!(w.pow(m).is_proper_power(), k * m as usize > 1);
    }

    #[test]
    fn folded_graphs_accept_their_subgroup(gens in prop::collection::vec(word(2, 5), 1..4), c in prop::collection::vec((0usize..3, any::<bool>()), 0..6)) {
        let g = SubgroupGraph::fold(&gens);
        let x = c.iter().fold(Word::identity(), |acc, &(i, inv)| {
            let h = &gens[i % gens.len()];
            acc.mul(&if inv { h.inverse() } else { h.clone() })
        });
        prop_assert!(g.accepts(&x));
    }
}

#[test]
fn squares_are_not_primitive_roots() {
    let ab = Word::reduce([Letter::pos(0), Letter::pos(1)]);
    assert!(ab.pow(2).is_proper_power());
    assert!(!ab.is_proper_power());
    let sub = SubgroupGraph::fold(&[Word::gen(0).pow(2)]);
    assert!(!sub.accepts(&Word::gen(0)));
    assert_eq!(sub.rank(), 1);
}
