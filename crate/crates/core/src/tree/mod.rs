//! Simplicial trees with special points, presented as graphs of groups.

pub mod bass_serre;
pub mod boundary;
pub mod converge;
pub mod from_point;
pub mod gog;
pub mod index;
pub mod lattices;
pub mod minimize;
pub mod very_small;

pub use bass_serre::TreeVertex;
pub use boundary::{boundary_simplex, BoundaryFamily, BoundarySimplex, MemberCheck};
pub use converge::{compare_projective, convergence, ConvergenceRow, Deviation};
pub use from_point::tree_from_point;
pub use gog::{is_power_of, EdgeLabel, GogPath, GraphOfGroupsTree, VertexLabel};
pub use index::{branch_orbits, total_index, BranchOrbit, IndexReport};
pub use lattices::{lattice_l, lattice_lambda, q_rank_report, verify_prop41, LatticeReport, Prop41Report, RankReport};
pub use minimize::{minimize, reroot, subdivide};
pub use very_small::{validate_very_small, VerySmallClause, VerySmallReport};

use crate::error::Result;
use crate::scalar::FormalReal;
use crate::word::Word;

impl GraphOfGroupsTree {
    /// Translation length of `w`, read from the cyclic normal form of its loop.
    pub fn translation_length(&self, w: &Word) -> Result<FormalReal> {
        self.require_trivial_edge_groups()?;
        Ok(self.loop_length(&self.loop_of(w)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Lengths, MarkedMetricAGraph, Shape};
    use crate::word::{word_ball, FreeFactorSystem};

    fn point(edges: Vec<(usize, usize)>, vertices: usize, lengths: Lengths) -> MarkedMetricAGraph {
        let sys = FreeFactorSystem::standard(2, &[1]).unwrap();
        MarkedMetricAGraph::from_shape(&sys, &Shape { vertices, edges }, lengths).unwrap()
    }

    #[test]
    fn rose_with_special_hub() {
        let x = point(vec![(0, 0)], 1, Lengths::Explicit(vec![FormalReal::int(1)]));
        let t = tree_from_point(&x).unwrap();
        let sys = t.system.clone();
        let l = |s: &str| t.translation_length(&sys.parse_word(s).unwrap()).unwrap();
        assert_eq!(l("a"), FormalReal::zero());
        assert_eq!(l("b"), FormalReal::int(1));
        assert_eq!(l("a*b"), FormalReal::int(1));
        assert_eq!(l("b*a*b^-1*a"), FormalReal::int(2));
    }

    #[test]
    fn tree_lengths_match_the_graph_and_both_oracles() {
        let x = point(vec![(0, 1), (1, 1)], 2, Lengths::Symbolic);
        let t = tree_from_point(&x).unwrap();
        for w in word_ball(2, 4) {
            let l = t.translation_length(&w).unwrap();
            assert_eq!(l, x.translation_length(&w), "{w:?}");
            assert_eq!(t.two_point_length(&w).unwrap(), l, "{w:?}");
        }
        for w in word_ball(2, 3) {
            assert_eq!(
                t.ball_length(&w, 2).unwrap(),
                t.translation_length(&w).unwrap(),
                "{w:?}"
            );
        }
    }

    #[test]
    fn json_round_trip_keeps_the_tree() {
        let x = point(vec![(0, 1), (1, 1)], 2, Lengths::Uniform);
        let t = tree_from_point(&x).unwrap();
        assert_eq!(GraphOfGroupsTree::from_json(&t.to_json()).unwrap(), t);
    }

    fn x2(lengths: Lengths) -> GraphOfGroupsTree {
        tree_from_point(&point(vec![(0, 1), (1, 1)], 2, lengths)).unwrap()
    }

    fn t1() -> GraphOfGroupsTree {
        tree_from_point(&point(vec![(0, 0)], 1, Lengths::Explicit(vec![FormalReal::int(1)]))).unwrap()
    }

    #[test]
    fn worked_index_examples() {
        let r = total_index(&t1()).unwrap();
        assert_eq!(r.orbits.len(), 1);
        assert_eq!((r.orbits[0].rk_st, r.orbits[0].v1, r.total), (1, 2, 2));
        assert!(r.equality);
        let r = total_index(&x2(Lengths::Symbolic)).unwrap();
        let pairs: Vec<(i64, i64, i64)> = r.orbits.iter().map(|o| (o.rk_st, o.v1, o.index)).collect();
        assert_eq!(pairs, [(1, 1, 1), (0, 3, 1)]);
        assert!(r.equality);
    }

    #[test]
    fn lattices_of_the_stem_and_loop() {
        let t = x2(Lengths::Symbolic);
        let l1 = FormalReal::symbol("λ1");
        let l2 = FormalReal::symbol("λ2");
        let l = lattice_l(&t).unwrap();
        assert!(l
            .lattice
            .same_as(&crate::lattice::LatticeZ::new(vec![l2.clone(), l1.scale_int(2)])));
        let lambda = lattice_lambda(&t, None).unwrap();
        assert!(lambda.lattice.same_as(&crate::lattice::LatticeZ::new(vec![l1, l2])));
        let p = verify_prop41(&t, None).unwrap();
        assert!(p.lengths_generate_l_mod_2lambda && p.distances_generate_lambda_mod_l && p.lambda_mod_2lambda_bound);
        assert_eq!((p.two_torsion_rank, p.bound), (2, 2));
        let q = q_rank_report(&t, None).unwrap();
        assert_eq!((q.r_q, q.theorem), (2, 2));
        assert!(q.equality && q.only_factors_elliptic);
        let half = lattice_l(&x2(Lengths::Uniform)).unwrap();
        assert_eq!(half.basis, vec![FormalReal::ratio(1, 2)]);
        assert_eq!(lattice_l(&t1()).unwrap().basis, vec![FormalReal::int(1)]);
    }

    #[test]
    fn boundary_of_rank_two() {
        let sys = FreeFactorSystem::standard(2, &[1]).unwrap();
        let fam = boundary_simplex(&sys, crate::graph::Budget::default()).unwrap();
        assert_eq!((fam.edges, fam.dim, fam.simplices.len()), (1, 0, 1));
        assert!(fam.all_pass());
        let t = &fam.simplices[0].tree;
        let r = total_index(t).unwrap();
        assert_eq!(r.total, 2);
        let q = q_rank_report(t, None).unwrap();
        assert_eq!(q.r_q, 1);
        assert!(!q.only_factors_elliptic);
    }

    #[test]
    fn shear_sequence_converges_to_the_rose() {
        let rows = convergence(6, 4).unwrap();
        assert!(rows[0].to_rose.max > crate::scalar::rat(0, 1));
        for row in &rows[4..] {
            assert_eq!(row.to_rose.max, crate::scalar::rat(0, 1), "N = {}", row.n);
        }
    }

    #[test]
    fn minimize_and_subdivide_keep_lengths() {
        let t = x2(Lengths::Symbolic);
        let (s, mid) = subdivide(&t, 0).unwrap();
        assert!(!s.is_branch_vertex(mid));
        let m = minimize(&s).unwrap();
        assert_eq!(m.graph.vertex_count(), t.graph.vertex_count());
        for w in word_ball(2, 3) {
            assert_eq!(s.translation_length(&w).unwrap(), t.translation_length(&w).unwrap());
            assert_eq!(m.translation_length(&w).unwrap(), t.translation_length(&w).unwrap());
        }
        assert!(validate_very_small(&t).ok);
    }
}
