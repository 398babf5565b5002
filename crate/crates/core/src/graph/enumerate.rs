use std::collections::BTreeSet;

use serde::Serialize;

use super::agraph::AGraph;
use super::cw::CWGraph;
use super::dims::dimension_report;
use crate::error::{Error, Result};
use crate::word::FreeFactorSystem;

#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Largest vertex count attempted.
    pub max_vertices: usize,
    /// Cap on search nodes visited over the whole enumeration.
    pub max_nodes: u64,
    /// Cap on relabelings tried per canonical form.
    pub max_relabelings: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_vertices: 9,
            max_nodes: 20_000_000,
            max_relabelings: 50_000,
        }
    }
}

/// A collapsed graph `Γ̂` in canonical form: vertices `0..k` are the special
/// points of factors `1..=k` in order, and `edges` is the sorted edge list that
/// is lexicographically least over relabelings of the remaining vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Shape {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Shape {
    pub fn graph(&self) -> CWGraph {
        CWGraph::new(
            (0..self.vertices).map(|i| format!("v{i}")).collect(),
            self.edges
                .iter()
                .enumerate()
                .map(|(i, &(from, to))| super::cw::Edge {
                    id: format!("e{}", i + 1),
                    from,
                    to,
                })
                .collect(),
        )
        .expect("shape edges stay inside the vertex range")
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertices];
        for &(a, b) in &self.edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }

    /// The A-graph obtained by blowing special points up into roses.
    pub fn expand(&self, sys: &FreeFactorSystem) -> Result<AGraph> {
        AGraph::expand(&self.graph(), &(0..sys.k()).collect::<Vec<_>>(), sys)
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Degrees {
    /// Special points of valence 1, all other vertices trivalent.
    Maximal,
    /// Any valid A-graph: valence at least 3 after blowing up.
    Valid,
}

struct Search<'a> {
    sys: &'a FreeFactorSystem,
    vertices: usize,
    edges: usize,
    mode: Degrees,
    pairs: Vec<(usize, usize)>,
    degree: Vec<usize>,
    chosen: Vec<(usize, usize)>,
    found: BTreeSet<Shape>,
    nodes: u64,
    budget: Budget,
}

impl Search<'_> {
    fn min_degree(&self, v: usize) -> usize {
        match (self.mode, v < self.sys.k()) {
            (Degrees::Maximal, true) => 1,
            (Degrees::Maximal, false) => 3,
            (Degrees::Valid, true) => 3usize.saturating_sub(2 * self.sys.s(v)),
            (Degrees::Valid, false) => 3,
        }
    }

    fn max_degree(&self, v: usize) -> usize {
        match self.mode {
            Degrees::Maximal => self.min_degree(v),
            Degrees::Valid => 2 * self.edges,
        }
    }

    fn run(&mut self, start: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget.max_nodes {
            return Err(Error::Resource(format!(
                "enumeration exceeded {} search nodes",
                self.budget.max_nodes
            )));
        }
        let remaining = self.edges - self.chosen.len();
        let deficit: usize = (0..self.vertices)
            .map(|v| self.min_degree(v).saturating_sub(self.degree[v]))
            .sum();
        if deficit > 2 * remaining {
            return Ok(());
        }
        if remaining == 0 {
            self.accept()?;
            return Ok(());
        }
        for i in start..self.pairs.len() {
            let (a, b) = self.pairs[i];
            let add_a = if a == b { 2 } else { 1 };
            if self.degree[a] + add_a > self.max_degree(a) || (a != b && self.degree[b] + 1 > self.max_degree(b)) {
                continue;
            }
            self.degree[a] += 1;
            self.degree[b] += 1;
            self.chosen.push((a, b));
            self.run(i)?;
            self.chosen.pop();
            self.degree[a] -= 1;
            self.degree[b] -= 1;
        }
        Ok(())
    }

    fn accept(&mut self) -> Result<()> {
        if (0..self.vertices).any(|v| self.degree[v] < self.min_degree(v)) {
            return Ok(());
        }
        let shape = Shape {
            vertices: self.vertices,
            edges: self.chosen.clone(),
        };
        if !shape.graph().is_connected() {
            return Ok(());
        }
        let canon = canonical_form(&shape, self.sys.k(), self.budget.max_relabelings)?;
        self.found.insert(canon);
        Ok(())
    }
}

fn search(sys: &FreeFactorSystem, vertices: usize, mode: Degrees, budget: Budget) -> Result<(Vec<Shape>, u64)> {
    let free_rank = sys.rank() - sys.sum_s();
    if vertices < sys.k().max(1) {
        return Ok((Vec::new(), 0));
    }
    if vertices > budget.max_vertices {
        return Err(Error::Resource(format!(
            "{vertices} vertices exceeds the enumeration budget of {}",
            budget.max_vertices
        )));
    }
    let edges = vertices - 1 + free_rank;
    let pairs = (0..vertices).flat_map(|a| (a..vertices).map(move |b| (a, b))).collect();
    let mut s = Search {
        sys,
        vertices,
        edges,
        mode,
        pairs,
        degree: vec![0; vertices],
        chosen: Vec::new(),
        found: BTreeSet::new(),
        nodes: 0,
        budget,
    };
    s.run(0)?;
    Ok((s.found.into_iter().collect(), s.nodes))
}

/// Relabels non-special vertices to the lexicographically least sorted edge
/// list. Vertices are first split into cells by (degree, loop count, sorted
/// neighbour degrees); only permutations inside cells are tried.
pub fn canonical_form(shape: &Shape, specials: usize, max_relabelings: u64) -> Result<Shape> {
    let n = shape.vertices;
    let deg = shape.degrees();
    let mut loops = vec![0usize; n];
    let mut nbr: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &(a, b) in &shape.edges {
        if a == b {
            loops[a] += 1;
        } else {
            nbr[a].push(deg[b]);
            nbr[b].push(deg[a]);
        }
    }
    for x in &mut nbr {
        x.sort_unstable();
    }
    let mut plain: Vec<usize> = (specials..n).collect();
    plain.sort_by(|&x, &y| (deg[x], loops[x], &nbr[x]).cmp(&(deg[y], loops[y], &nbr[y])));
    let mut cells: Vec<Vec<usize>> = Vec::new();
    for &v in &plain {
        match cells.last_mut() {
            Some(c) if (deg[c[0]], loops[c[0]], &nbr[c[0]]) == (deg[v], loops[v], &nbr[v]) => c.push(v),
            _ => cells.push(vec![v]),
        }
    }
    let total: u64 = cells
        .iter()
        .map(|c| (1..=c.len() as u64).product::<u64>())
        .try_fold(1u64, |acc, f| acc.checked_mul(f))
        .unwrap_or(u64::MAX);
    if total > max_relabelings {
        return Err(Error::Resource(format!(
            "canonical labelling needs {total} relabelings, budget is {max_relabelings}"
        )));
    }

    let mut best: Option<Vec<(usize, usize)>> = None;
    let mut order: Vec<Vec<usize>> = cells.clone();
    fn permute(
        cell: usize,
        order: &mut Vec<Vec<usize>>,
        shape: &Shape,
        specials: usize,
        best: &mut Option<Vec<(usize, usize)>>,
    ) {
        if cell == order.len() {
            let mut label = vec![0; shape.vertices];
            for (v, l) in label.iter_mut().enumerate().take(specials) {
                *l = v;
            }
            let mut next = specials;
            for c in order.iter() {
                for &v in c {
                    label[v] = next;
                    next += 1;
                }
            }
            let mut edges: Vec<(usize, usize)> = shape
                .edges
                .iter()
                .map(|&(a, b)| {
                    let (x, y) = (label[a], label[b]);
                    (x.min(y), x.max(y))
                })
                .collect();
            edges.sort_unstable();
            if best.as_ref().is_none_or(|b| edges < *b) {
                *best = Some(edges);
            }
            return;
        }
        let len = order[cell].len();
        heap_permutations(len, &mut |perm| {
            let saved = order[cell].clone();
            order[cell] = perm.iter().map(|&i| saved[i]).collect();
            permute(cell + 1, order, shape, specials, best);
            order[cell] = saved;
        });
    }
    permute(0, &mut order, shape, specials, &mut best);
    Ok(Shape {
        vertices: n,
        edges: best.unwrap_or_default(),
    })
}

fn heap_permutations(n: usize, f: &mut dyn FnMut(&[usize])) {
    let mut p: Vec<usize> = (0..n).collect();
    let mut c = vec![0; n];
    f(&p);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                p.swap(0, i);
            } else {
                p.swap(c[i], i);
            }
            f(&p);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub maximal: Vec<Shape>,
    /// Number of valid collapsed shapes for each vertex count `1..=V_max+1`,
    /// when requested.
    pub valid_by_vertices: Option<Vec<(usize, usize)>>,
    pub search_nodes: u64,
}

/// Isomorphism classes of maximal collapsed graphs, in canonical order.
pub fn enumerate_maximal(sys: &FreeFactorSystem, count_all: bool, budget: Budget) -> Result<Enumeration> {
    let dims = dimension_report(sys);
    if dims.v_max < 1 {
        return Err(Error::Degenerate(format!(
            "system {} has no maximal graph",
            sys.describe()
        )));
    }
    let v_max = dims.v_max as usize;
    let (maximal, mut nodes) = search(sys, v_max, Degrees::Maximal, budget)?;
    let valid_by_vertices = if count_all {
        let mut counts = Vec::new();
        for v in 1..=v_max + 1 {
            let (found, n) = search(sys, v, Degrees::Valid, budget)?;
            nodes += n;
            counts.push((v, found.len()));
        }
        Some(counts)
    } else {
        None
    };
    Ok(Enumeration {
        maximal,
        valid_by_vertices,
        search_nodes: nodes,
    })
}

/// All valid collapsed shapes with the given vertex count.
pub fn enumerate_valid(sys: &FreeFactorSystem, vertices: usize, budget: Budget) -> Result<Vec<Shape>> {
    Ok(search(sys, vertices, Degrees::Valid, budget)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize, s: &[usize]) -> usize {
        let sys = FreeFactorSystem::standard(n, s).unwrap();
        enumerate_maximal(&sys, false, Budget::default()).unwrap().maximal.len()
    }

    #[test]
    fn small_systems() {
        assert_eq!(count(2, &[1]), 1);
        assert_eq!(count(2, &[]), 2);
    }

    #[test]
    fn canonical_form_is_label_independent() {
        let a = Shape {
            vertices: 4,
            edges: vec![(0, 1), (1, 2), (1, 3), (2, 3), (2, 3)],
        };
        let b = Shape {
            vertices: 4,
            edges: vec![(0, 1), (1, 3), (1, 2), (2, 3), (2, 3)],
        };
        assert_eq!(canonical_form(&a, 1, 100).unwrap(), canonical_form(&b, 1, 100).unwrap());
    }

    #[test]
    fn heap_visits_every_permutation() {
        let mut seen = BTreeSet::new();
        heap_permutations(4, &mut |p| {
            seen.insert(p.to_vec());
        });
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn budget_is_enforced() {
        let sys = FreeFactorSystem::standard(3, &[1]).unwrap();
        let tight = Budget {
            max_nodes: 3,
            ..Budget::default()
        };
        assert!(matches!(enumerate_maximal(&sys, false, tight), Err(Error::Resource(_))));
    }
}
