use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use super::bass_serre::TreeVertex;
use super::gog::{GogPath, GraphOfGroupsTree, VertexLabel};
use super::index::branch_orbits;
use super::minimize::{minimize, reroot_along};
use crate::error::{Error, Result};
use crate::graph::EdgeRef;
use crate::lattice::{generates_modulo, LatticeZ};
use crate::scalar::FormalReal;
use crate::word::{word_ball, Word};

/// Tree vertices visited by `Λ` ball searches before giving up.
pub const BALL_LIMIT: usize = 400_000;

#[derive(Clone, Debug, Serialize)]
pub struct LatticeReport {
    /// Canonical ℤ-basis.
    pub basis: Vec<FormalReal>,
    pub q_rank: usize,
    pub family_size: usize,
    pub audit: String,
    #[serde(skip)]
    pub lattice: LatticeZ,
}

impl LatticeReport {
    fn new(lattice: LatticeZ, family_size: usize, audit: String) -> Self {
        LatticeReport {
            basis: lattice.canonical_basis(),
            q_rank: lattice.q_rank(),
            family_size,
            audit,
            lattice,
        }
    }
}

/// A loop at `from` with nonzero cyclic length that stays in the component of
/// `from` once `avoid` is deleted: a vertex group generator or a cycle,
/// whichever a breadth-first search meets first.
fn turnaround(t: &GraphOfGroupsTree, from: usize, avoid: usize) -> Option<GogPath> {
    let g = &t.graph;
    let mut parent: Vec<Option<Option<EdgeRef>>> = vec![None; g.vertex_count()];
    parent[from] = Some(None);
    let mut queue = VecDeque::from([from]);
    let path_to = |parent: &[Option<Option<EdgeRef>>], mut v: usize| {
        let mut p = Vec::new();
        while let Some(Some(r)) = parent[v] {
            p.push(r);
            v = g.origin(r);
        }
        p.reverse();
        p
    };
    let walk = |edges: &[EdgeRef], middle: Option<&Word>| {
        let mut p = GogPath::at(from);
        for &r in edges {
            p.push(r, Word::identity());
        }
        if let Some(m) = middle {
            p.times(m);
        }
        p
    };
    while let Some(v) = queue.pop_front() {
        if let Some(gen) = t.vertex_labels[v].generators(&t.system).first() {
            let p = path_to(&parent, v);
            let out = walk(&p, Some(gen));
            return Some(out.concat(&walk(&p, None).inverse(g)));
        }
        for r in g.star(v) {
            if r.edge == avoid {
                continue;
            }
            let w = g.terminus(r);
            let tree_edge = parent[v] == Some(Some(r.flip()));
            if tree_edge {
                continue;
            }
            if parent[w].is_some() {
                // closes a cycle: from → v → w → from
                let mut edges = path_to(&parent, v);
                edges.push(r);
                let back = path_to(&parent, w);
                edges.extend(back.iter().rev().map(|x| x.flip()));
                return Some(walk(&edges, None).reduced());
            }
            parent[w] = Some(Some(r));
            queue.push_back(w);
        }
    }
    None
}

/// A loop at the root crossing quotient edge `e` exactly twice: a barbell
/// through turnarounds on both sides.
fn edge_loop(t: &GraphOfGroupsTree, e: usize) -> Result<GogPath> {
    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    let edge = g.edge(e);
    let stem = {
        let mut p = GogPath::at(t.root);
        for r in tree.path_to(g, edge.from) {
            p.push(r, Word::identity());
        }
        p
    };
    let a = turnaround(t, edge.from, e);
    let b = turnaround(t, edge.to, e);
    let (Some(a), Some(b)) = (a, b) else {
        return Err(Error::Degenerate(format!(
            "no loop crosses edge {}; the tree is not minimal",
            edge.id
        )));
    };
    let mut cross = GogPath::at(edge.from);
    cross.push(EdgeRef::fwd(e), Word::identity());
    let barbell = a.concat(&cross).concat(&b).concat(&cross.inverse(g));
    Ok(stem.concat(&barbell).concat(&stem.inverse(g)))
}

/// Longest words whose lengths seed `L`; the audit runs two letters further.
pub const L_FAMILY_WORDS: usize = 3;

/// `L`: the span of translation lengths of all words of length at most
/// three, one fundamental cycle per non-tree edge and one loop through every
/// quotient edge. All words of length at most five must then lie in it.
pub fn lattice_l(t: &GraphOfGroupsTree) -> Result<LatticeReport> {
    t.require_trivial_edge_groups()?;
    let t = minimize(t)?;
    let gens = t.system.gen_count();
    let mut family: Vec<FormalReal> = Vec::new();
    for w in word_ball(gens, L_FAMILY_WORDS) {
        family.push(t.translation_length(&w)?);
    }
    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    for e in tree.non_tree_edges() {
        let mut cycle = tree.path_to(g, g.edge(e).from);
        cycle.push(EdgeRef::fwd(e));
        cycle.extend(tree.path_from(g, g.edge(e).to));
        let mut p = GogPath::at(t.root);
        for r in cycle {
            p.push(r, Word::identity());
        }
        family.push(t.loop_length(&p));
    }
    for e in 0..g.edge_count() {
        family.push(t.loop_length(&edge_loop(&t, e)?));
    }
    let lattice = LatticeZ::new(family.clone()).canonical();
    let audit_len = L_FAMILY_WORDS + 2;
    let audit_words = word_ball(gens, audit_len);
    for w in &audit_words {
        let l = t.translation_length(w)?;
        if !lattice.contains(&l) {
            return Err(Error::Audit(format!(
                "l({}) = {l} lies outside the lattice of the generating family",
                t.system.format_word(w)
            )));
        }
    }
    Ok(LatticeReport::new(
        lattice,
        family.len(),
        format!("stable on {} words of length ≤ {audit_len}", audit_words.len()),
    ))
}

/// Reroots at the nearest branch vertex if the root is not one.
fn branch_rooted(t: &GraphOfGroupsTree) -> Result<GraphOfGroupsTree> {
    if t.is_branch_vertex(t.root) {
        return Ok(t.clone());
    }
    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    let target = (0..g.vertex_count())
        .filter(|&v| t.is_branch_vertex(v))
        .min_by_key(|&v| tree.path_to(g, v).len())
        .ok_or_else(|| Error::Degenerate("tree has no branch points".into()))?;
    reroot_along(t, &tree.path_to(g, target))
}

/// Span of distances from each branch point in the ball to its nearest
/// branch ancestor towards the root; with a branch root this is the span of
/// all pairwise branch distances in the (prefix-closed) ball.
fn lambda_in_ball(t: &GraphOfGroupsTree, radius: usize) -> Result<LatticeZ> {
    let ball = t.ball(radius, false, BALL_LIMIT)?;
    let mut segments = BTreeSet::new();
    for x in &ball {
        if x.depth() == 0 || !t.is_branch_vertex(t.project(x)) {
            continue;
        }
        let ancestor = (0..x.depth())
            .rev()
            .map(|k| TreeVertex {
                steps: x.steps[..k].to_vec(),
            })
            .find(|y| t.is_branch_vertex(t.project(y)))
            .expect("the root is a branch point");
        segments.insert(t.distance(&ancestor, x));
    }
    Ok(LatticeZ::new(segments.into_iter().collect()).canonical())
}

/// Default `Λ` search radius: twice the quotient diameter plus one.
pub fn default_lambda_radius(t: &GraphOfGroupsTree) -> usize {
    2 * t.graph.diameter() + 1
}

/// `Λ`: distances between branch points in a ball of the given radius,
/// audited against the ball one step larger.
pub fn lattice_lambda(t: &GraphOfGroupsTree, radius: Option<usize>) -> Result<LatticeReport> {
    t.require_trivial_edge_groups()?;
    let t = branch_rooted(&minimize(t)?)?;
    let r = radius.unwrap_or_else(|| default_lambda_radius(&t));
    let inner = lambda_in_ball(&t, r)?;
    let outer = lambda_in_ball(&t, r + 1)?;
    if !outer.is_subgroup_of(&inner) {
        return Err(Error::Audit(format!(
            "branch distances grow between radius {r} and {}",
            r + 1
        )));
    }
    let size = inner.generators().len();
    Ok(LatticeReport::new(
        inner,
        size,
        format!("radius {r} agrees with radius {}", r + 1),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct Prop41Report {
    /// `{l(x₁), …}` over the free generators generates `L` mod `2Λ`.
    pub lengths_generate_l_mod_2lambda: bool,
    /// Distances from the base branch orbit generate `Λ` mod `L`.
    pub distances_generate_lambda_mod_l: bool,
    /// `Λ/2Λ` needs at most `n − Σs + b − 1` generators.
    pub lambda_mod_2lambda_bound: bool,
    pub two_torsion_rank: usize,
    pub bound: i64,
    pub branch_orbits: usize,
    pub l: LatticeReport,
    pub lambda: LatticeReport,
}

pub fn verify_prop41(t: &GraphOfGroupsTree, radius: Option<usize>) -> Result<Prop41Report> {
    let l = lattice_l(t)?;
    let lambda = lattice_lambda(t, radius)?;
    let t = branch_rooted(&minimize(t)?)?;
    let sys = &t.system;
    let free_lengths: Vec<FormalReal> = sys
        .free_gens()
        .map(|g| t.translation_length(&Word::gen(g)))
        .collect::<Result<_>>()?;
    let i = generates_modulo(&free_lengths, &l.lattice, &lambda.lattice.scaled(2));

    let g = &t.graph;
    let tree = g.spanning_tree(t.root);
    let branch: Vec<usize> = (0..g.vertex_count()).filter(|&v| t.is_branch_vertex(v)).collect();
    let distances: Vec<FormalReal> = branch.iter().map(|&v| t.path_length(&tree.path_to(g, v))).collect();
    let ii = generates_modulo(&distances, &lambda.lattice, &l.lattice);

    let b = branch_orbits(&t).len();
    let bound = sys.rank() as i64 - sys.sum_s() as i64 + b as i64 - 1;
    let two = lambda.lattice.two_torsion_rank();
    Ok(Prop41Report {
        lengths_generate_l_mod_2lambda: i,
        distances_generate_lambda_mod_l: ii,
        lambda_mod_2lambda_bound: two as i64 <= bound,
        two_torsion_rank: two,
        bound,
        branch_orbits: b,
        l,
        lambda,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RankReport {
    pub r_q: usize,
    pub b: usize,
    /// `n − Σs + b − 1`.
    pub cor43: i64,
    /// `3n + 2k − 3 − 3Σs`.
    pub theorem: i64,
    pub equality: bool,
    /// Every elliptic element is conjugate into a factor.
    pub only_factors_elliptic: bool,
    pub l: LatticeReport,
    pub lambda: LatticeReport,
}

/// Q-rank of `L` against both upper bounds. Exceeding either, or meeting the
/// theorem bound with extra elliptic elements, is an invariant failure.
pub fn q_rank_report(t: &GraphOfGroupsTree, radius: Option<usize>) -> Result<RankReport> {
    let l = lattice_l(t)?;
    let lambda = lattice_lambda(t, radius)?;
    let t = minimize(t)?;
    let sys = &t.system;
    let (n, k, s) = (sys.rank() as i64, sys.k() as i64, sys.sum_s() as i64);
    let b = branch_orbits(&t).len();
    let cor43 = n - s + b as i64 - 1;
    let theorem = 3 * n + 2 * k - 3 - 3 * s;
    let r_q = l.q_rank;
    let only_factors_elliptic = t.vertex_labels.iter().all(|v| match v {
        VertexLabel::Trivial | VertexLabel::Special(_) => true,
        VertexLabel::Cyclic(w) => sys.conjugate_into_factor(w).is_some(),
    });
    if r_q as i64 > theorem {
        return Err(Error::Invariant(format!(
            "Q-rank {r_q} exceeds 3n+2k-3-3Σs = {theorem}"
        )));
    }
    if r_q as i64 > cor43 {
        return Err(Error::Invariant(format!("Q-rank {r_q} exceeds n-Σs+b-1 = {cor43}")));
    }
    let equality = r_q as i64 == theorem;
    if equality && !only_factors_elliptic {
        return Err(Error::Invariant(
            "Q-rank meets the bound although elements outside the factors are elliptic".into(),
        ));
    }
    Ok(RankReport {
        r_q,
        b,
        cor43,
        theorem,
        equality,
        only_factors_elliptic,
        l,
        lambda,
    })
}
