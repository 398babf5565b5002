//! Length lattices against closed forms, and lattice arithmetic properties.

use proptest::prelude::*;
use rospace::fixtures;
use rospace::graph::{enumerate_maximal, Budget, EdgeRef, Lengths, MarkedMetricAGraph};
use rospace::lattice::LatticeZ;
use rospace::scalar::{rat, FormalReal};
use rospace::tree::{lattice_l, q_rank_report, tree_from_point, verify_prop41, GraphOfGroupsTree, VertexLabel};
use rospace::word::FreeFactorSystem;

/// Fundamental cycle lengths of the quotient plus twice every edge length.
fn closed_form_l(t: &GraphOfGroupsTree) -> LatticeZ {
    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    let mut gens: Vec<FormalReal> = t.lengths.iter().map(|l| l.scale_int(2)).collect();
    for e in tree.non_tree_edges() {
        let from = g.edge(e).from;
        let to = g.edge(e).to;
        let mut path = tree.path_to(g, from);
        path.push(EdgeRef::fwd(e));
        path.extend(tree.path_from(g, to));
        gens.push(t.path_length(&path));
    }
    LatticeZ::new(gens)
}

fn symbolic_trees() -> Vec<GraphOfGroupsTree> {
    let mut out = Vec::new();
    for (n, s) in [
        (2usize, vec![]),
        (2, vec![1]),
        (3, vec![]),
        (3, vec![1]),
        (3, vec![2]),
        (3, vec![1, 1]),
    ] {
        let sys = FreeFactorSystem::standard(n, &s).unwrap();
        for sh in enumerate_maximal(&sys, false, Budget::default()).unwrap().maximal {
            out.push(tree_from_point(&MarkedMetricAGraph::from_shape(&sys, &sh, Lengths::Symbolic).unwrap()).unwrap());
        }
    }
    out
}

#[test]
fn l_matches_the_closed_form() {
    let mut trees = symbolic_trees();
    trees.extend(
        fixtures::all()
            .unwrap()
            .into_iter()
            .filter(|f| f.kind != fixtures::FixtureKind::Violation)
            .map(|f| f.tree),
    );
    for t in &trees {
        let l = lattice_l(t).unwrap();
        assert!(l.lattice.same_as(&closed_form_l(t)), "{:?}", l.basis);
    }
}

#[test]
fn symbolic_maximal_trees_meet_the_rank_bound() {
    for t in symbolic_trees() {
        let sys = &t.system;
        let (n, k, s) = (sys.rank() as i64, sys.k() as i64, sys.sum_s() as i64);
        let r = q_rank_report(&t, None).unwrap();
        assert_eq!(r.r_q as i64, 3 * n + 2 * k - 3 - 3 * s);
        assert_eq!(r.r_q, t.graph.edge_count());
        assert!(r.equality && r.only_factors_elliptic);
        let p = verify_prop41(&t, None).unwrap();
        assert!(p.lengths_generate_l_mod_2lambda && p.distances_generate_lambda_mod_l && p.lambda_mod_2lambda_bound);
    }
}

#[test]
fn rational_degenerations_drop_rank() {
    for t in symbolic_trees() {
        let ones = t.with_lengths(vec![FormalReal::int(1); t.graph.edge_count()]).unwrap();
        let r = q_rank_report(&ones, None).unwrap();
        assert_eq!(r.r_q, 1);
        assert!(!r.equality);
    }
}

#[test]
fn boundary_fixtures_stay_below_the_bound() {
    for name in ["boundary-2-1", "boundary-3-1"] {
        let t = fixtures::fixture(name).unwrap().tree;
        let r = q_rank_report(&t, None).unwrap();
        assert!((r.r_q as i64) < r.theorem, "{name}");
        assert!(!r.only_factors_elliptic);
        assert!(t.vertex_labels.iter().any(|l| matches!(l, VertexLabel::Cyclic(_))));
    }
}

#[test]
fn t1_lattice_is_the_integers() {
    let t = fixtures::fixture("t1").unwrap().tree;
    let l = lattice_l(&t).unwrap();
    assert_eq!(l.basis, vec![FormalReal::int(1)]);
}

fn formal(coeffs: &[i64]) -> FormalReal {
    FormalReal::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| (format!("λ{}", i + 1), rat(c, 1))),
    )
}

fn lattice() -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 1..=4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn closed_under_integer_combinations(rows in lattice(), c in prop::collection::vec(-20i64..=20, 4)) {
        let gens: Vec<FormalReal> = rows.iter().map(|r| formal(r)).collect();
        let x = gens.iter().zip(&c).fold(FormalReal::zero(), |acc, (g, &k)| acc + g.scale_int(k));
        prop_assert!(LatticeZ::new(gens).contains(&x));
    }

    #[test]
    fn canonical_basis_spans_the_same_lattice(rows in lattice()) {
        let l = LatticeZ::new(rows.iter().map(|r| formal(r)).collect());
        let c = l.canonical();
        prop_assert!(l.same_as(&c));
        prop_assert!(c.generators().len() <= 3);
        prop_assert_eq!(c.generators().len(), l.q_rank());
        prop_assert_eq!(l.two_torsion_rank(), l.q_rank());
    }

    #[test]
    fn halves_of_odd_vectors_are_outside(rows in lattice(), odd in 0usize..3) {
        let l = LatticeZ::new(rows.iter().map(|r| formal(r)).collect());
        let mut v = vec![0i64; 3];
        v[odd] = 1;
        prop_assert!(!l.contains(&(&formal(&v) * &rat(1, 2))));
    }
}
