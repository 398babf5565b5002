//! Stallings folding of a bouquet of words into a subgroup graph.

use super::{Letter, Word};

/// Folded core graph of the subgroup generated by a set of words. Vertex 0 is
/// the base point; `out[v]` lists labelled edges `(letter, target)`, with each
/// edge stored in both directions.
#[derive(Clone, Debug)]
pub struct SubgroupGraph {
    out: Vec<Vec<(Letter, usize)>>,
}

impl SubgroupGraph {
    pub fn fold(words: &[Word]) -> SubgroupGraph {
        let mut parent: Vec<usize> = vec![0];
        let mut edges: Vec<(usize, Letter, usize)> = Vec::new();
        for w in words {
            if w.is_identity() {
                continue;
            }
            let mut at = 0;
            for (i, &l) in w.letters().iter().enumerate() {
                let next = if i + 1 == w.len() {
                    0
                } else {
                    parent.push(parent.len());
                    parent.len() - 1
                };
                edges.push((at, l, next));
                at = next;
            }
        }

        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut c = x;
            while parent[c] != r {
                let n = parent[c];
                parent[c] = r;
                c = n;
            }
            r
        }

        // Repeatedly identify targets of equally labelled edges leaving one vertex.
        loop {
            let mut seen: std::collections::HashMap<(usize, Letter), usize> = Default::default();
            let mut merged = false;
            for &(a, l, b) in &edges {
                let (a, b) = (find(&mut parent, a), find(&mut parent, b));
                for (src, lab, dst) in [(a, l, b), (b, l.inv(), a)] {
                    match seen.get(&(src, lab)) {
                        Some(&d) => {
                            let (x, y) = (find(&mut parent, d), find(&mut parent, dst));
                            if x != y {
                                let (lo, hi) = (x.min(y), x.max(y));
                                parent[hi] = lo;
                                merged = true;
                            }
                        }
                        None => {
                            seen.insert((src, lab), dst);
                        }
                    }
                }
            }
            if !merged {
                break;
            }
        }

        let mut index = vec![usize::MAX; parent.len()];
        let mut count = 0;
        for v in 0..parent.len() {
            let r = find(&mut parent, v);
            if index[r] == usize::MAX {
                index[r] = count;
                count += 1;
            }
        }
        let mut out: Vec<Vec<(Letter, usize)>> = vec![Vec::new(); count];
        for &(a, l, b) in &edges {
            let (a, b) = (index[find(&mut parent, a)], index[find(&mut parent, b)]);
            for (src, lab, dst) in [(a, l, b), (b, l.inv(), a)] {
                if !out[src].contains(&(lab, dst)) {
                    out[src].push((lab, dst));
                }
            }
        }
        for v in &mut out {
            v.sort();
        }
        SubgroupGraph { out }
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Number of undirected edges.
    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn rank(&self) -> i64 {
        self.edge_count() as i64 - self.vertex_count() as i64 + 1
    }

    /// Membership of `w` in the subgroup: read it from the base point.
    pub fn accepts(&self, w: &Word) -> bool {
        let mut at = 0;
        for &l in w.letters() {
            match self.out[at].iter().find(|(lab, _)| *lab == l) {
                Some(&(_, t)) => at = t,
                None => return false,
            }
        }
        at == 0
    }
}

/// Whether the words generate the free group on `gens` generators.
pub fn generates_free_group(words: &[Word], gens: u32) -> bool {
    let g = SubgroupGraph::fold(words);
    g.vertex_count() == 1 && (0..gens).all(|x| g.accepts(&Word::gen(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(spec: &[i32]) -> Word {
        Word::reduce(spec.iter().map(|&x| Letter::new(x.unsigned_abs() - 1, x < 0)))
    }

    #[test]
    fn basis_changes_generate() {
        assert!(generates_free_group(&[w(&[1]), w(&[1, 1, 1, 2])], 2));
        assert!(generates_free_group(&[w(&[2, 1]), w(&[2])], 2));
    }

    #[test]
    fn proper_subgroups_do_not() {
        assert!(!generates_free_group(&[w(&[1, 1]), w(&[2])], 2));
        assert!(!generates_free_group(&[w(&[1]), w(&[2, 1, -2])], 2));
        assert!(!generates_free_group(&[w(&[1])], 2));
    }

    #[test]
    fn membership_and_rank() {
        let g = SubgroupGraph::fold(&[w(&[1, 2]), w(&[1, -2])]);
        assert_eq!(g.rank(), 2);
        assert!(g.accepts(&w(&[1, 2, 2, -1])));
        assert!(!g.accepts(&w(&[1])));
    }
}
