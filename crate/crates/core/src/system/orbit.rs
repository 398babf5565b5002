use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;

use super::resolve::Resolution;
use super::SystemK;
use crate::error::{Error, Result};
use crate::tree::branch_orbits;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitEdge {
    pub from: String,
    pub to: String,
    /// Generator name, or `γj` for the loop of factor `j`.
    pub label: String,
    /// Directions at `from` inside the domain; 1 for `γj`.
    pub weight: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitGraph {
    pub vertices: Vec<String>,
    pub edges: Vec<OrbitEdge>,
    /// `rk π₁ = E − V + 1`.
    pub rank: i64,
    /// Components of the direction graph that are trees.
    pub tree_components: usize,
    pub direction_vertices: usize,
    pub index: i64,
}

/// Vertex budget for orbit closures.
pub const ORBIT_LIMIT: usize = 10_000;

/// The orbit of `p` inside `K` under the partial maps, with an edge for each
/// map applied at each orbit point (factor generators at their fixed special
/// vertex give one loop `γj` per factor instead), and the direction graph
/// built from the directions each map carries.
pub fn orbit_graph(k: &SystemK, p: usize) -> Result<OrbitGraph> {
    let sys = &k.system;
    let gens = sys.gen_count();
    let mut seen = BTreeSet::from([p]);
    let mut queue = VecDeque::from([p]);
    while let Some(q) = queue.pop_front() {
        for gen in 0..gens {
            for inverse in [false, true] {
                if let Some(r) = k.apply(gen, inverse, q) {
                    if seen.insert(r) {
                        if seen.len() > ORBIT_LIMIT {
                            return Err(Error::Resource(format!("orbit exceeds {ORBIT_LIMIT} points")));
                        }
                        queue.push_back(r);
                    }
                }
            }
        }
    }
    let orbit: Vec<usize> = seen.into_iter().collect();
    let mut edges = Vec::new();
    let mut direction_edges: Vec<((usize, usize), (usize, usize))> = Vec::new();
    for &q in &orbit {
        for (j, &s) in k.special.iter().enumerate() {
            if s == q {
                edges.push(OrbitEdge {
                    from: k.vertices[q].clone(),
                    to: k.vertices[q].clone(),
                    label: format!("γ{}", j + 1),
                    weight: 1,
                });
            }
        }
        for gen in 0..gens {
            let Some(r) = k.apply(gen, false, q) else { continue };
            if sys.factor_of(gen).is_some_and(|j| k.special[j] == q) {
                continue;
            }
            let dom = k.domain(gen);
            let dirs: Vec<usize> = k
                .neighbours(q)
                .into_iter()
                .map(|(x, _)| x)
                .filter(|x| dom.contains(x))
                .collect();
            for &d in &dirs {
                let image = k.apply(gen, false, d).expect("domain vertex");
                direction_edges.push(((q, d), (r, image)));
            }
            edges.push(OrbitEdge {
                from: k.vertices[q].clone(),
                to: k.vertices[r].clone(),
                label: sys.name(gen).to_string(),
                weight: dirs.len(),
            });
        }
    }
    let rank = edges.len() as i64 - orbit.len() as i64 + 1;

    let mut nodes: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &q in &orbit {
        for (d, _) in k.neighbours(q) {
            let n = nodes.len();
            nodes.insert((q, d), n);
        }
    }
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for (a, b) in &direction_edges {
        let (ra, rb) = (find(&mut parent, nodes[a]), find(&mut parent, nodes[b]));
        parent[ra.max(rb)] = ra.min(rb);
    }
    let mut comp_vertices: BTreeMap<usize, i64> = BTreeMap::new();
    let mut comp_edges: BTreeMap<usize, i64> = BTreeMap::new();
    for i in 0..nodes.len() {
        *comp_vertices.entry(find(&mut parent, i)).or_default() += 1;
    }
    for (a, _) in &direction_edges {
        *comp_edges.entry(find(&mut parent, nodes[a])).or_default() += 1;
    }
    let tree_components = comp_vertices
        .iter()
        .filter(|(c, v)| comp_edges.get(c).copied().unwrap_or(0) == **v - 1)
        .count();
    Ok(OrbitGraph {
        vertices: orbit.iter().map(|&q| k.vertices[q].clone()).collect(),
        edges,
        rank,
        tree_components,
        direction_vertices: nodes.len(),
        index: 2 * rank - 2 + tree_components as i64,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitIndex {
    pub vertex: String,
    pub point: String,
    pub via_orbit_graph: i64,
    pub direct: i64,
    pub graph: OrbitGraph,
}

/// For every branch orbit of the resolved tree, the index through the orbit
/// graph of its lift in `K`; a mismatch with the direct count is an
/// invariant failure.
pub fn index_via_orbit_graph(res: &Resolution) -> Result<Vec<OrbitIndex>> {
    let t = &res.tree;
    let mut out = Vec::new();
    for orbit in branch_orbits(t) {
        let v = t.graph.vertex_index(&orbit.vertex).expect("orbit names a vertex");
        let p = res
            .lifts
            .iter()
            .position(|x| t.project(x) == v)
            .ok_or_else(|| Error::Structural(format!("no lift of {} in K", orbit.vertex)))?;
        let graph = orbit_graph(&res.k, p)?;
        if graph.index != orbit.index {
            return Err(Error::Invariant(format!(
                "orbit of {}: index {} through the orbit graph, {} directly",
                orbit.vertex, graph.index, orbit.index
            )));
        }
        out.push(OrbitIndex {
            vertex: orbit.vertex,
            point: res.k.vertices[p].clone(),
            via_orbit_graph: graph.index,
            direct: orbit.index,
            graph,
        });
    }
    Ok(out)
}
