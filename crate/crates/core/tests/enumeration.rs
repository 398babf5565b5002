//! Maximal collapsed shapes against a brute-force search over edge multisets.

use std::collections::BTreeSet;

use rospace::graph::{enumerate_maximal, Budget};
use rospace::word::FreeFactorSystem;

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}

/// Least sorted edge list over relabelings fixing the first `k` vertices.
fn canonical(v: usize, k: usize, edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let plain: Vec<usize> = (k..v).collect();
    permutations(&plain)
        .into_iter()
        .map(|p| {
            let map = |x: usize| if x < k { x } else { p[x - k] };
            let mut e: Vec<(usize, usize)> = edges
                .iter()
                .map(|&(a, b)| {
                    let (a, b) = (map(a), map(b));
                    (a.min(b), a.max(b))
                })
                .collect();
            e.sort_unstable();
            e
        })
        .min()
        .expect("at least the identity")
}

fn connected(v: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; v];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            for (p, q) in [(a, b), (b, a)] {
                if p == x && !seen[q] {
                    seen[q] = true;
                    stack.push(q);
                }
            }
        }
    }
    seen.iter().all(|&s| s)
}

/// Every multiset of `e` edges on `v` vertices where the first `k` vertices
/// have valence 1, the rest valence 3, and the graph is connected.
fn brute_force(v: usize, e: usize, k: usize) -> BTreeSet<Vec<(usize, usize)>> {
    let pairs: Vec<(usize, usize)> = (0..v).flat_map(|a| (a..v).map(move |b| (a, b))).collect();
    let mut out = BTreeSet::new();
    let mut chosen = Vec::new();
    fn go(
        from: usize,
        e: usize,
        pairs: &[(usize, usize)],
        chosen: &mut Vec<(usize, usize)>,
        v: usize,
        k: usize,
        out: &mut BTreeSet<Vec<(usize, usize)>>,
    ) {
        if chosen.len() == e {
            let mut deg = vec![0; v];
            for &(a, b) in chosen.iter() {
                deg[a] += 1;
                deg[b] += 1;
            }
            if (0..v).all(|x| deg[x] == if x < k { 1 } else { 3 }) && connected(v, chosen) {
                out.insert(canonical(v, k, chosen));
            }
            return;
        }
        for i in from..pairs.len() {
            chosen.push(pairs[i]);
            go(i, e, pairs, chosen, v, k, out);
            chosen.pop();
        }
    }
    go(0, e, &pairs, &mut chosen, v, k, &mut out);
    out
}

fn check(n: usize, s: &[usize]) -> usize {
    let sys = FreeFactorSystem::standard(n, s).unwrap();
    let k = s.len();
    let sum: usize = s.iter().sum();
    let v = 2 * n + 2 * k - 2 - 2 * sum;
    let e = 3 * n + 2 * k - 3 - 3 * sum;
    let found: BTreeSet<Vec<(usize, usize)>> = enumerate_maximal(&sys, false, Budget::default())
        .unwrap()
        .maximal
        .iter()
        .map(|sh| {
            assert_eq!((sh.vertices, sh.edges.len()), (v, e));
            canonical(sh.vertices, k, &sh.edges)
        })
        .collect();
    let expected = brute_force(v, e, k);
    assert_eq!(found, expected, "system ({n}, {s:?})");
    found.len()
}

#[test]
fn rank_two() {
    // theta and dumbbell
    assert_eq!(check(2, &[]), 2);
    assert_eq!(check(2, &[1]), 1);
}

#[test]
fn rank_three() {
    assert_eq!(check(3, &[]), 5);
    check(3, &[1]);
    check(3, &[2]);
    check(3, &[1, 1]);
}

#[test]
fn nothing_valid_beyond_the_maximum() {
    for (n, s) in [
        (2usize, vec![]),
        (2, vec![1]),
        (3, vec![1]),
        (3, vec![2]),
        (3, vec![1, 1]),
    ] {
        let sys = FreeFactorSystem::standard(n, &s).unwrap();
        let en = enumerate_maximal(&sys, true, Budget::default()).unwrap();
        let counts = en.valid_by_vertices.unwrap();
        let (last, c) = *counts.last().unwrap();
        assert_eq!(
            last as i64,
            2 * n as i64 + 2 * s.len() as i64 - 1 - 2 * s.iter().sum::<usize>() as i64
        );
        assert_eq!(c, 0);
    }
}
