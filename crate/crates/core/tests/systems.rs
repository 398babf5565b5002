//! Systems of isometries cut from trees of every maximal class.

use rospace::error::Error;
use rospace::fixtures;
use rospace::graph::{enumerate_maximal, Budget, Lengths, MarkedMetricAGraph};
use rospace::system::{build_tk_ball, cross_check, index_via_orbit_graph, resolve_point, resolve_tree, SystemK};
use rospace::tree::total_index;
use rospace::word::FreeFactorSystem;

#[test]
fn every_maximal_class_resolves_faithfully() {
    for (n, s) in [
        (2usize, vec![]),
        (2, vec![1]),
        (3, vec![1]),
        (3, vec![2]),
        (3, vec![1, 1]),
    ] {
        let sys = FreeFactorSystem::standard(n, &s).unwrap();
        for sh in enumerate_maximal(&sys, false, Budget::default()).unwrap().maximal {
            for lengths in [Lengths::Symbolic, Lengths::Uniform] {
                let x = MarkedMetricAGraph::from_shape(&sys, &sh, lengths).unwrap();
                let res = resolve_point(&x).unwrap();
                let c = cross_check(&res, 2).unwrap();
                assert!(c.ok(), "{sh:?}: {c:?}");
                let via: i64 = index_via_orbit_graph(&res)
                    .unwrap()
                    .iter()
                    .map(|o| o.via_orbit_graph)
                    .sum();
                assert_eq!(via, total_index(&res.tree).unwrap().total);
            }
        }
    }
}

#[test]
fn depth_zero_is_k_itself() {
    for f in fixtures::all().unwrap() {
        let Some(x) = f.point else { continue };
        let res = resolve_point(&x).unwrap();
        let ball = build_tk_ball(&res.k, 0);
        assert_eq!(ball.points.len(), res.k.vertex_count());
        assert_eq!(ball.edges.len(), res.k.edges.len());
        assert!(ball.is_tree && ball.k_isometric);
    }
}

#[test]
fn boundary_trees_resolve() {
    for name in ["boundary-2-1", "boundary-3-1"] {
        let res = resolve_tree(&fixtures::fixture(name).unwrap().tree).unwrap();
        assert!(cross_check(&res, 2).unwrap().ok(), "{name}");
    }
}

#[test]
fn cyclic_edge_groups_are_unsupported() {
    let t = fixtures::fixture("tripod-violation").unwrap().tree;
    assert!(matches!(resolve_tree(&t), Err(Error::Unsupported(_))));
}

#[test]
fn json_schema_errors_name_a_path() {
    let res = resolve_point(&fixtures::fixture("t1").unwrap().point.unwrap()).unwrap();
    let mut v = res.k.to_json();
    v["maps"]["b"] = serde_json::json!({"p0": "nowhere"});
    match SystemK::from_json(&v) {
        Err(Error::Schema { path, .. }) => assert_eq!(path, "$.maps.b"),
        other => panic!("expected a schema error, got {other:?}"),
    }
    v["special"] = serde_json::json!({});
    assert!(SystemK::from_json(&v).is_err());
}
