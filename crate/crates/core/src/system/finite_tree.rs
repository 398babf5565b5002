use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A uniformly random labelled tree on `n ≥ 2` vertices from a random Prüfer
/// sequence.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2, "a tree here has at least two vertices");
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.random_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &x in &seq {
        degree[x] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &x in &seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf remains");
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// `Σ_p (v(p) − 2)` over the vertices of a graph on `n` vertices.
pub fn valence_defect(n: usize, edges: &[(usize, usize)]) -> i64 {
    let mut v = vec![0i64; n];
    for &(a, b) in edges {
        v[a] += 1;
        v[b] += 1;
    }
    v.iter().map(|d| d - 2).sum()
}

/// `count` random trees with 2 to 12 vertices from a fixed seed.
pub fn random_trees(seed: u64, count: usize) -> Vec<(usize, Vec<(usize, usize)>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=12);
            (n, random_tree(&mut rng, n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_trees_are_trees() {
        for (n, edges) in random_trees(7, 100) {
            assert_eq!(edges.len(), n - 1);
            let mut parent: Vec<usize> = (0..n).collect();
            fn find(p: &mut Vec<usize>, x: usize) -> usize {
                if p[x] != x {
                    let r = find(p, p[x]);
                    p[x] = r;
                }
                p[x]
            }
            for &(a, b) in &edges {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                assert_ne!(ra, rb);
                parent[ra] = rb;
            }
            assert_eq!(valence_defect(n, &edges), -2);
        }
    }

    #[test]
    fn defect_of_a_cycle_is_zero() {
        assert_eq!(valence_defect(3, &[(0, 1), (1, 2), (2, 0)]), 0);
    }
}
