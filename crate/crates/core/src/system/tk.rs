use std::collections::{BTreeMap, HashMap};

use serde::Serialize;

use super::resolve::Resolution;
use super::SystemK;
use crate::error::Result;
use crate::scalar::FormalReal;
use crate::word::{word_ball, Letter, Word};

/// A finite piece of the tree of a system: classes of `(p, ω)` with `|ω| ≤ N`
/// under `(p, ω) ~ (φ_g p, ω g⁻¹)`.
#[derive(Clone, Debug)]
pub struct TkBall {
    pub depth: usize,
    pub words: Vec<Word>,
    /// Class of node `(p, ω)` at `class[ω_index · |K| + p]`.
    pub class: Vec<usize>,
    /// One representative `(p, ω_index)` per class, shortest word first.
    pub points: Vec<(usize, usize)>,
    pub edges: Vec<(usize, usize, FormalReal)>,
    /// The quotient is connected with one fewer edge than points.
    pub is_tree: bool,
    /// Distinct `K` vertices stay distinct and keep their `K` distances.
    pub k_isometric: bool,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut x = x;
        while self.0[x] != r {
            let next = self.0[x];
            self.0[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra.max(rb)] = ra.min(rb);
        true
    }
}

fn tree_distances(n: usize, edges: &[(usize, usize, FormalReal)], from: usize) -> Vec<Option<FormalReal>> {
    let mut adj = vec![Vec::new(); n];
    for (a, b, l) in edges {
        adj[*a].push((*b, l));
        adj[*b].push((*a, l));
    }
    let mut d = vec![None; n];
    d[from] = Some(FormalReal::zero());
    let mut stack = vec![from];
    while let Some(x) = stack.pop() {
        let dx = d[x].clone().expect("visited");
        for &(y, l) in &adj[x] {
            if d[y].is_none() {
                d[y] = Some(dx.clone() + l.clone());
                stack.push(y);
            }
        }
    }
    d
}

pub fn build_tk_ball(k: &SystemK, depth: usize) -> TkBall {
    let nk = k.vertex_count();
    let words = word_ball(k.system.gen_count(), depth);
    let word_index: HashMap<&Word, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let node = |p: usize, w: usize| w * nk + p;
    let mut uf = UnionFind((0..nk * words.len()).collect());
    for (wi, w) in words.iter().enumerate() {
        for gen in 0..k.system.gen_count() {
            let shifted = w.mul(&Word::letter(Letter::neg(gen)));
            let Some(&si) = word_index.get(&shifted) else { continue };
            for (&p, &q) in &k.maps[gen as usize] {
                uf.union(node(p, wi), node(q, si));
            }
        }
    }
    let roots: Vec<usize> = (0..nk * words.len()).map(|x| uf.find(x)).collect();
    let mut class_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut points = Vec::new();
    let mut class = vec![0; roots.len()];
    // words are listed shortlex, so the first node met in each class is a
    // shortest representative
    for (x, &r) in roots.iter().enumerate() {
        let c = *class_of_root.entry(r).or_insert_with(|| {
            points.push((x % nk, x / nk));
            points.len() - 1
        });
        class[x] = c;
    }
    let mut edge_set: BTreeMap<(usize, usize), FormalReal> = BTreeMap::new();
    let mut consistent = true;
    for wi in 0..words.len() {
        for (a, b, l) in &k.edges {
            let (ca, cb) = (class[node(*a, wi)], class[node(*b, wi)]);
            let key = (ca.min(cb), ca.max(cb));
            if ca == cb {
                consistent = false;
            }
            if let Some(old) = edge_set.insert(key, l.clone()) {
                consistent &= old == *l;
            }
        }
    }
    let edges: Vec<(usize, usize, FormalReal)> = edge_set.into_iter().map(|((a, b), l)| (a, b, l)).collect();
    let mut conn = UnionFind((0..points.len()).collect());
    let mut merges = 0;
    for (a, b, _) in &edges {
        if conn.union(*a, *b) {
            merges += 1;
        }
    }
    let is_tree = consistent && merges + 1 == points.len() && edges.len() + 1 == points.len();
    let k_isometric = is_tree && {
        let base: Vec<usize> = (0..nk).map(|p| class[node(p, 0)]).collect();
        let mut distinct = base.clone();
        distinct.sort_unstable();
        distinct.dedup();
        distinct.len() == nk
            && (0..nk).all(|p| {
                let dk = k.distances_from(p);
                let dt = tree_distances(points.len(), &edges, base[p]);
                (0..nk).all(|q| dk[q] == dt[base[q]])
            })
    };
    TkBall {
        depth,
        words,
        class,
        points,
        edges,
        is_tree,
        k_isometric,
    }
}

/// Applies `u` to `p` letter by letter from the right through the partial
/// maps.
fn apply_word(k: &SystemK, u: &Word, p: usize) -> Option<usize> {
    u.letters()
        .iter()
        .rev()
        .try_fold(p, |q, l| k.apply(l.gen, l.inverse, q))
}

/// `(p₁, ω₁)` and `(p₂, ω₂)` name the same point iff `p₁ = φ_u(p₂)` for
/// `u = ω₁⁻¹ω₂`. Checks this against the gluing for every node and word.
pub fn word_criterion_agrees(k: &SystemK, ball: &TkBall) -> bool {
    let nk = k.vertex_count();
    let words = &ball.words;
    for (w2, omega2) in words.iter().enumerate() {
        for p2 in 0..nk {
            let c = ball.class[w2 * nk + p2];
            for (w1, omega1) in words.iter().enumerate() {
                let u = omega1.inverse().mul(omega2);
                let predicted = apply_word(k, &u, p2);
                let glued: Vec<usize> = (0..nk).filter(|&p1| ball.class[w1 * nk + p1] == c).collect();
                let agrees = match predicted {
                    Some(p1) => glued == [p1],
                    None => glued.is_empty(),
                };
                if !agrees {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct TkCrossCheck {
    pub depth: usize,
    pub points: usize,
    pub edges: usize,
    pub is_tree: bool,
    pub k_isometric: bool,
    /// Every node of a class lands on the same tree vertex.
    pub well_defined: bool,
    pub injective: bool,
    /// Every ball edge spans a tree segment of its length.
    pub edges_isometric: bool,
    pub word_criterion: bool,
}

impl TkCrossCheck {
    pub fn ok(&self) -> bool {
        self.is_tree
            && self.k_isometric
            && self.well_defined
            && self.injective
            && self.edges_isometric
            && self.word_criterion
    }
}

/// Maps the ball into the tree the system was cut from by `(p, ω) ↦ ω·p̃`.
/// A well-defined injective map that is isometric on edges is an isometry
/// onto the union of translates `ω·K`.
pub fn cross_check(res: &Resolution, depth: usize) -> Result<TkCrossCheck> {
    let k = &res.k;
    let t = &res.tree;
    let ball = build_tk_ball(k, depth);
    let nk = k.vertex_count();
    let mut image = vec![None; ball.points.len()];
    let mut well_defined = true;
    for (wi, w) in ball.words.iter().enumerate() {
        for p in 0..nk {
            let x = t.act_word(w, &res.lifts[p]);
            let c = ball.class[wi * nk + p];
            match &image[c] {
                None => image[c] = Some(x),
                Some(y) => well_defined &= *y == x,
            }
        }
    }
    let image: Vec<_> = image.into_iter().map(|x| x.expect("every class has a node")).collect();
    let mut sorted = image.clone();
    sorted.sort();
    sorted.dedup();
    let injective = sorted.len() == image.len();
    let edges_isometric = ball
        .edges
        .iter()
        .all(|(a, b, l)| t.distance(&image[*a], &image[*b]) == *l);
    Ok(TkCrossCheck {
        depth,
        points: ball.points.len(),
        edges: ball.edges.len(),
        is_tree: ball.is_tree,
        k_isometric: ball.k_isometric,
        well_defined,
        injective,
        edges_isometric,
        word_criterion: word_criterion_agrees(k, &ball),
    })
}
