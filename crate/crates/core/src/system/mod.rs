//! Finite systems of partial isometries `(K, {φ_g})`, the trees they
//! generate, and orbit graphs.

pub mod finite_tree;
pub mod orbit;
pub mod resolve;
pub mod tk;

pub use finite_tree::{random_tree, random_trees, valence_defect};
pub use orbit::{index_via_orbit_graph, orbit_graph, OrbitEdge, OrbitGraph};
pub use resolve::{resolve_point, resolve_tree, standardize, Resolution};
pub use tk::{build_tk_ball, cross_check, word_criterion_agrees, TkBall, TkCrossCheck};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::FormalReal;
use crate::word::FreeFactorSystem;

/// A finite metric tree `K` with one partial map per generator, given on
/// vertices, and a fixed vertex per factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystemK {
    pub system: FreeFactorSystem,
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize, FormalReal)>,
    /// `maps[g]`: domain vertex ↦ image vertex.
    pub maps: Vec<BTreeMap<usize, usize>>,
    pub special: Vec<usize>,
}

impl SystemK {
    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Neighbours with edge lengths.
    pub fn neighbours(&self, p: usize) -> Vec<(usize, &FormalReal)> {
        self.edges
            .iter()
            .filter_map(|(a, b, l)| {
                if *a == p {
                    Some((*b, l))
                } else if *b == p {
                    Some((*a, l))
                } else {
                    None
                }
            })
            .collect()
    }

    /// `φ_g(p)` or `φ_g⁻¹(p)`, where defined.
    pub fn apply(&self, gen: u32, inverse: bool, p: usize) -> Option<usize> {
        let m = &self.maps[gen as usize];
        if inverse {
            m.iter().find(|&(_, &q)| q == p).map(|(&d, _)| d)
        } else {
            m.get(&p).copied()
        }
    }

    pub fn domain(&self, gen: u32) -> BTreeSet<usize> {
        self.maps[gen as usize].keys().copied().collect()
    }

    /// Distances from `p` to every vertex of `K`.
    pub fn distances_from(&self, p: usize) -> Vec<Option<FormalReal>> {
        let mut d = vec![None; self.vertex_count()];
        d[p] = Some(FormalReal::zero());
        let mut queue = VecDeque::from([p]);
        while let Some(x) = queue.pop_front() {
            let dx = d[x].clone().expect("queued vertices have distances");
            for (y, l) in self.neighbours(x) {
                if d[y].is_none() {
                    d[y] = Some(dx.clone() + l.clone());
                    queue.push_back(y);
                }
            }
        }
        d
    }

    fn is_subtree(&self, set: &BTreeSet<usize>) -> bool {
        let Some(&start) = set.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for (y, _) in self.neighbours(x) {
                if set.contains(&y) && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == set.len()
    }

    /// `K` is a tree, every domain is a nonempty subtree mapped isometrically,
    /// and factor generators fix their special vertex.
    pub fn check(&self) -> Result<()> {
        let n = self.vertex_count();
        if n == 0 || self.edges.len() + 1 != n || self.distances_from(0).iter().any(Option::is_none) {
            return Err(Error::Structural("K is not a finite tree".into()));
        }
        if self.maps.len() != self.system.gen_count() as usize || self.special.len() != self.system.k() {
            return Err(Error::Structural(
                "one map per generator and one special vertex per factor".into(),
            ));
        }
        for (g, m) in self.maps.iter().enumerate() {
            let name = self.system.name(g as u32);
            let dom: BTreeSet<usize> = m.keys().copied().collect();
            if !self.is_subtree(&dom) {
                return Err(Error::Structural(format!("domain of {name} is empty or not a subtree")));
            }
            let images: BTreeSet<usize> = m.values().copied().collect();
            if images.len() != dom.len() {
                return Err(Error::Structural(format!("map of {name} is not injective")));
            }
            for &p in &dom {
                let dp = self.distances_from(p);
                let dq = self.distances_from(m[&p]);
                if dom.iter().any(|&r| dp[r] != dq[m[&r]]) {
                    return Err(Error::Structural(format!("map of {name} is not an isometry")));
                }
            }
        }
        for (j, &p) in self.special.iter().enumerate() {
            for y in self.system.factor_gens(j) {
                if self.maps[y as usize].get(&p) != Some(&p) {
                    return Err(Error::Structural(format!(
                        "{} does not fix the special vertex {}",
                        self.system.name(y),
                        self.vertices[p]
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let sys = &self.system;
        let ids: Vec<String> = (1..=self.edges.len()).map(|i| format!("k{i}")).collect();
        let edges: Vec<Value> = self
            .edges
            .iter()
            .zip(&ids)
            .map(|((a, b, _), id)| json!({"id": id, "from": self.vertices[*a], "to": self.vertices[*b]}))
            .collect();
        let lengths: BTreeMap<&str, &FormalReal> = ids
            .iter()
            .map(String::as_str)
            .zip(self.edges.iter().map(|e| &e.2))
            .collect();
        let mut domains = serde_json::Map::new();
        let mut maps = serde_json::Map::new();
        for (g, m) in self.maps.iter().enumerate() {
            let name = sys.name(g as u32).to_string();
            let dom: Vec<&str> = m.keys().map(|&p| self.vertices[p].as_str()).collect();
            domains.insert(name.clone(), json!({"vertices": dom}));
            let pairs: BTreeMap<&str, &str> = m
                .iter()
                .map(|(&p, &q)| (self.vertices[p].as_str(), self.vertices[q].as_str()))
                .collect();
            maps.insert(name, json!(pairs));
        }
        let special: BTreeMap<String, &str> = self
            .special
            .iter()
            .enumerate()
            .map(|(j, &p)| ((j + 1).to_string(), self.vertices[p].as_str()))
            .collect();
        json!({
            "rospace_format": 1,
            "system": sys,
            "tree": {"vertices": self.vertices, "edges": edges, "lengths": lengths},
            "domains": domains,
            "maps": maps,
            "special": special,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct EdgeJson {
            id: String,
            from: String,
            to: String,
        }
        #[derive(Deserialize)]
        struct TreeJson {
            vertices: Vec<String>,
            edges: Vec<EdgeJson>,
            lengths: BTreeMap<String, FormalReal>,
        }
        #[derive(Deserialize)]
        struct SystemJson {
            system: FreeFactorSystem,
            tree: TreeJson,
            maps: BTreeMap<String, BTreeMap<String, String>>,
            #[serde(default)]
            special: BTreeMap<String, String>,
        }
        let s: SystemJson = serde_json::from_value(v.clone()).map_err(|e| Error::schema("$", e.to_string()))?;
        let index: BTreeMap<&str, usize> = s
            .tree
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let vid = |id: &str, path: &str| {
            index
                .get(id)
                .copied()
                .ok_or_else(|| Error::schema(path, format!("unknown vertex {id:?}")))
        };
        let mut edges = Vec::new();
        for (i, e) in s.tree.edges.iter().enumerate() {
            let path = format!("$.tree.edges[{i}]");
            let len = s
                .tree
                .lengths
                .get(&e.id)
                .cloned()
                .ok_or_else(|| Error::schema("$.tree.lengths", format!("no length for {}", e.id)))?;
            edges.push((vid(&e.from, &path)?, vid(&e.to, &path)?, len));
        }
        let sys = s.system;
        let mut maps = vec![BTreeMap::new(); sys.gen_count() as usize];
        for (name, pairs) in &s.maps {
            let g = sys.gen_id(name).map_err(|e| Error::schema("$.maps", e.to_string()))?;
            let path = format!("$.maps.{name}");
            for (p, q) in pairs {
                maps[g as usize].insert(vid(p, &path)?, vid(q, &path)?);
            }
        }
        let mut special = vec![None; sys.k()];
        for (j, p) in &s.special {
            let idx: usize = j
                .parse::<usize>()
                .ok()
                .filter(|&j| (1..=sys.k()).contains(&j))
                .ok_or_else(|| Error::schema("$.special", format!("no factor {j}")))?;
            special[idx - 1] = Some(vid(p, "$.special")?);
        }
        let special = special
            .into_iter()
            .enumerate()
            .map(|(j, p)| p.ok_or_else(|| Error::schema("$.special", format!("factor {} has no vertex", j + 1))))
            .collect::<Result<_>>()?;
        let k = SystemK {
            system: sys,
            vertices: s.tree.vertices,
            edges,
            maps,
            special,
        };
        k.check()?;
        Ok(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Lengths;
    use crate::tree::converge::{middle_point, rose_point};
    use crate::tree::{subdivide, tree_from_point};

    fn total(k: &SystemK) -> FormalReal {
        k.edges.iter().fold(FormalReal::zero(), |s, e| s + e.2.clone())
    }

    #[test]
    fn rose_resolves_to_one_segment() {
        let res = resolve_point(&rose_point().unwrap()).unwrap();
        assert_eq!(res.k.vertex_count(), 2);
        assert_eq!(total(&res.k), FormalReal::int(1));
        let b = res.k.system.gen_id("b").unwrap();
        assert_eq!(res.k.maps[b as usize].len(), 1);
        let c = cross_check(&res, 3).unwrap();
        assert!(c.ok(), "{c:?}");
    }

    #[test]
    fn middle_point_resolves() {
        let res = resolve_point(&middle_point().unwrap()).unwrap();
        assert_eq!(total(&res.k), FormalReal::ratio(3, 2));
        for depth in 0..=3 {
            let c = cross_check(&res, depth).unwrap();
            assert!(c.ok(), "depth {depth}: {c:?}");
        }
        assert_eq!(build_tk_ball(&res.k, 0).points.len(), res.k.vertex_count());
    }

    #[test]
    fn orbit_indices_match_direct_counts() {
        let res = resolve_point(&rose_point().unwrap()).unwrap();
        let v: Vec<i64> = index_via_orbit_graph(&res)
            .unwrap()
            .iter()
            .map(|o| o.via_orbit_graph)
            .collect();
        assert_eq!(v, [2]);
        let g = &index_via_orbit_graph(&res).unwrap()[0].graph;
        assert_eq!(g.rank, 1);
        let x = crate::graph::MarkedMetricAGraph::from_shape(
            &middle_point().unwrap().system,
            &crate::graph::Shape {
                vertices: 2,
                edges: vec![(0, 1), (1, 1)],
            },
            Lengths::Symbolic,
        )
        .unwrap();
        let res = resolve_point(&x).unwrap();
        let o = index_via_orbit_graph(&res).unwrap();
        let v: Vec<(i64, i64)> = o.iter().map(|o| (o.graph.rank, o.via_orbit_graph)).collect();
        assert_eq!(v, [(1, 1), (0, 1)]);
        assert_eq!(o[1].graph.tree_components, 3);
    }

    #[test]
    fn interior_orbit_is_a_path() {
        let t = tree_from_point(&middle_point().unwrap()).unwrap();
        let (t, mid) = subdivide(&t, 0).unwrap();
        let res = resolve_tree(&t).unwrap();
        let p = res.lifts.iter().position(|x| res.tree.project(x) == mid).unwrap();
        let g = orbit_graph(&res.k, p).unwrap();
        assert_eq!((g.rank, g.index), (0, 0));
    }

    #[test]
    fn json_round_trip() {
        let res = resolve_point(&middle_point().unwrap()).unwrap();
        let v = res.k.to_json();
        assert_eq!(SystemK::from_json(&v).unwrap(), res.k);
    }

    #[test]
    fn rejects_a_non_isometric_map() {
        let res = resolve_point(&middle_point().unwrap()).unwrap();
        let mut k = res.k.clone();
        let b = k.system.gen_id("b").unwrap() as usize;
        let n = k.vertex_count();
        k.maps[b] = (0..n).map(|p| (p, (p + 1) % n)).collect();
        assert!(k.check().is_err());
    }
}
