//! Maximum rainbow spanning forests.
//!
//! A rainbow forest is a common independent set of two matroids on the edge
//! set: the graphic matroid (acyclic edge sets) and the partition matroid
//! that allows at most one edge per color. The maximum is found with the
//! augmenting-path algorithm on the exchange graph. Paths are found by
//! breadth-first search seeded and expanded in increasing edge-index order,
//! so the result is a deterministic function of the input.

use std::collections::VecDeque;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeColoredGraph, VertexPartition};
use crate::partitions::set_partitions;
use crate::union_find::UnionFind;

/// Default largest `n` for [`schrijver_bruteforce`] (Bell(10) = 115975 partitions).
pub const DEFAULT_SCHRIJVER_CAP: usize = 10;

/// An acyclic, color-distinct set of edges (indices into the graph's edge list).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RainbowForest {
    pub edges: Vec<usize>,
    /// True iff the forest has `n − 1` edges, i.e. spans every vertex.
    pub spanning: bool,
}

impl RainbowForest {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Replays the edges through a union-find and counts colors.
    pub fn is_valid_in(&self, g: &EdgeColoredGraph) -> bool {
        let mut uf = UnionFind::new(g.n());
        let mut seen = vec![false; g.num_colors()];
        let mut prev = None;
        for &id in &self.edges {
            if id >= g.num_edges() || prev.is_some_and(|p| p >= id) {
                return false;
            }
            prev = Some(id);
            let e = g.edges()[id];
            if seen[e.color] || !uf.union(e.u, e.v) {
                return false;
            }
            seen[e.color] = true;
        }
        self.spanning == (g.n() > 0 && self.edges.len() == g.n() - 1)
    }
}

/// Maximum-cardinality rainbow forest of the whole graph.
pub fn max_rainbow_forest(g: &EdgeColoredGraph) -> RainbowForest {
    let all: Vec<usize> = (0..g.num_edges()).collect();
    max_rainbow_forest_in(g, &all)
}

/// Maximum rainbow forest using only the listed edges.
pub fn max_rainbow_forest_in(g: &EdgeColoredGraph, edge_ids: &[usize]) -> RainbowForest {
    let mut ground = edge_ids.to_vec();
    ground.sort_unstable();
    ground.dedup();
    let mut solver = Intersection::new(g, ground);
    while solver.augment() {}
    let mut edges: Vec<usize> = solver
        .ground
        .iter()
        .zip(&solver.chosen)
        .filter(|(_, &c)| c)
        .map(|(&id, _)| id)
        .collect();
    edges.sort_unstable();
    RainbowForest {
        spanning: g.n() > 0 && edges.len() == g.n() - 1,
        edges,
    }
}

struct Intersection<'a> {
    g: &'a EdgeColoredGraph,
    ground: Vec<usize>,
    chosen: Vec<bool>,
}

impl<'a> Intersection<'a> {
    fn new(g: &'a EdgeColoredGraph, ground: Vec<usize>) -> Self {
        let chosen = vec![false; ground.len()];
        Self { g, ground, chosen }
    }

    /// Finds one shortest augmenting path and applies it.
    fn augment(&mut self) -> bool {
        let g = self.g;
        let n = g.n();
        let m = self.ground.len();
        let edge = |i: usize| g.edges()[self.ground[i]];

        // Rooted spanning forest of the current independent set.
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut holder: Vec<Option<usize>> = vec![None; g.num_colors()];
        for i in (0..m).filter(|&i| self.chosen[i]) {
            let e = edge(i);
            adj[e.u].push((e.v, i));
            adj[e.v].push((e.u, i));
            holder[e.color] = Some(i);
        }
        let mut comp = vec![usize::MAX; n];
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut depth = vec![0usize; n];
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            comp[root] = root;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for &(y, i) in &adj[x] {
                    if comp[y] == usize::MAX {
                        comp[y] = root;
                        parent[y] = Some((x, i));
                        depth[y] = depth[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }

        // For y in I: the x ∉ I with I − y + x acyclic (y on the cycle of x).
        let mut exchanges: Vec<Vec<usize>> = vec![Vec::new(); m];
        let mut in_x1 = vec![false; m];
        let mut in_x2 = vec![false; m];
        for x in (0..m).filter(|&x| !self.chosen[x]) {
            let e = edge(x);
            in_x2[x] = holder[e.color].is_none();
            if comp[e.u] != comp[e.v] {
                in_x1[x] = true;
                continue;
            }
            let (mut a, mut b) = (e.u, e.v);
            while a != b {
                if depth[a] < depth[b] {
                    std::mem::swap(&mut a, &mut b);
                }
                let (up, i) = parent[a].expect("non-root has a parent");
                exchanges[i].push(x);
                a = up;
            }
        }

        let mut prev: Vec<Option<usize>> = vec![None; m];
        let mut visited = vec![false; m];
        let mut queue = VecDeque::new();
        for x in (0..m).filter(|&x| in_x1[x]) {
            visited[x] = true;
            queue.push_back(x);
        }
        let mut target = None;
        while let Some(z) = queue.pop_front() {
            if !self.chosen[z] {
                if in_x2[z] {
                    target = Some(z);
                    break;
                }
                // I − y + z keeps colors distinct only for y holding z's color.
                if let Some(y) = holder[edge(z).color] {
                    if !visited[y] {
                        visited[y] = true;
                        prev[y] = Some(z);
                        queue.push_back(y);
                    }
                }
            } else {
                for &x in &exchanges[z] {
                    if !visited[x] {
                        visited[x] = true;
                        prev[x] = Some(z);
                        queue.push_back(x);
                    }
                }
            }
        }

        let Some(mut z) = target else {
            return false;
        };
        loop {
            self.chosen[z] = !self.chosen[z];
            match prev[z] {
                Some(p) => z = p,
                None => break,
            }
        }
        true
    }
}

/// Whether `g` has a rainbow spanning tree.
pub fn has_rainbow_spanning_tree(g: &EdgeColoredGraph) -> bool {
    max_rainbow_forest(g).spanning
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchrijverVerdict {
    pub has_rst: bool,
    /// First partition in canonical order with fewer than `t − 1` crossing colors.
    pub violating_partition: Option<VertexPartition>,
}

/// Decides rainbow spanning tree existence by checking every set partition:
/// a tree exists iff every partition into `t` parts has at least `t − 1`
/// colors on edges between parts.
pub fn schrijver_bruteforce(g: &EdgeColoredGraph) -> Result<SchrijverVerdict> {
    schrijver_bruteforce_with_cap(g, DEFAULT_SCHRIJVER_CAP)
}

pub fn schrijver_bruteforce_with_cap(g: &EdgeColoredGraph, cap: usize) -> Result<SchrijverVerdict> {
    if g.n() > cap {
        return Err(Error::TooLarge { n: g.n(), cap });
    }
    let violating = set_partitions(g.n()).find(|p| g.colors_across(p) + 1 < p.t());
    Ok(SchrijverVerdict {
        has_rst: violating.is_none(),
        violating_partition: violating,
    })
}

/// Greedily peels up to `k` edge-disjoint rainbow spanning trees: extract a
/// maximum rainbow forest from the remaining edges, stop unless it spans,
/// delete its edges, repeat. Not optimal for the packing number.
pub fn extract_disjoint_rsts(g: &EdgeColoredGraph, k: usize) -> Vec<RainbowForest> {
    let mut remaining: Vec<usize> = (0..g.num_edges()).collect();
    let mut trees = Vec::new();
    while trees.len() < k {
        let forest = max_rainbow_forest_in(g, &remaining);
        if !forest.spanning {
            break;
        }
        remaining.retain(|id| forest.edges.binary_search(id).is_err());
        trees.push(forest);
    }
    trees
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rainbow_triangle() -> EdgeColoredGraph {
        EdgeColoredGraph::new(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)]).unwrap()
    }

    fn mono_path() -> EdgeColoredGraph {
        EdgeColoredGraph::new(3, [(0, 1, 0), (1, 2, 0)]).unwrap()
    }

    fn k4_factorized() -> EdgeColoredGraph {
        EdgeColoredGraph::new(4, [(0, 1, 0), (2, 3, 0), (0, 2, 1), (1, 3, 1), (0, 3, 2), (1, 2, 2)]).unwrap()
    }

    #[test]
    fn forest_examples() {
        let f = max_rainbow_forest(&rainbow_triangle());
        assert_eq!(f.size(), 2);
        assert!(f.spanning);

        let mono = EdgeColoredGraph::new(3, [(0, 1, 0), (1, 2, 0), (0, 2, 0)]).unwrap();
        assert_eq!(max_rainbow_forest(&mono).size(), 1);

        let g = k4_factorized();
        let f = max_rainbow_forest(&g);
        assert_eq!(f.size(), 3);
        assert!(f.spanning && f.is_valid_in(&g));
    }

    #[test]
    fn existence_examples() {
        assert!(has_rainbow_spanning_tree(&rainbow_triangle()));
        let two_k2 = EdgeColoredGraph::new(4, [(0, 1, 0), (2, 3, 1)]).unwrap();
        assert!(!has_rainbow_spanning_tree(&two_k2));
        assert!(!has_rainbow_spanning_tree(&mono_path()));
    }

    #[test]
    fn schrijver_examples() {
        assert!(schrijver_bruteforce(&rainbow_triangle()).unwrap().has_rst);

        let v = schrijver_bruteforce(&mono_path()).unwrap();
        assert!(!v.has_rst);
        let p = v.violating_partition.unwrap();
        assert_eq!(p, VertexPartition::singletons(3));
        assert_eq!(mono_path().colors_across(&p), 1);

        // one color on four edges of K4, two singleton colors
        let g = EdgeColoredGraph::new(4, [(0, 1, 0), (0, 2, 0), (0, 3, 0), (1, 2, 0), (1, 3, 1), (2, 3, 2)]).unwrap();
        assert_eq!(schrijver_bruteforce(&g).unwrap().has_rst, has_rainbow_spanning_tree(&g));
    }

    #[test]
    fn schrijver_cap() {
        let g = EdgeColoredGraph::new::<usize>(11, []).unwrap();
        assert!(matches!(
            schrijver_bruteforce(&g),
            Err(Error::TooLarge { n: 11, cap: 10 })
        ));
    }

    #[test]
    fn peeling() {
        assert!(extract_disjoint_rsts(&rainbow_triangle(), 0).is_empty());
        assert!(extract_disjoint_rsts(&mono_path(), 1).is_empty());

        // the first tree is the path 0-1-2-3, which leaves the path 2-0-3-1
        let g = EdgeColoredGraph::new(4, [(0, 1, 0), (1, 2, 1), (2, 3, 2), (0, 2, 3), (1, 3, 4), (0, 3, 5)]).unwrap();
        let trees = extract_disjoint_rsts(&g, 3);
        assert_eq!(trees.len(), 2);
        assert_eq!(trees[0].edges, vec![0, 1, 2]);
        assert!(trees.iter().all(|t| t.spanning && t.is_valid_in(&g)));
        assert!(trees[0].edges.iter().all(|e| !trees[1].edges.contains(e)));
    }

    #[test]
    fn restricted_ground_set() {
        let g = k4_factorized();
        // only the color-0 matching: one edge usable
        let f = max_rainbow_forest_in(&g, &[0, 1]);
        assert_eq!(f.edges, vec![0]);
        assert!(!f.spanning);
    }

    #[test]
    fn validity_check_rejects_bad_forests() {
        let g = rainbow_triangle();
        let cyclic = RainbowForest {
            edges: vec![0, 1, 2],
            spanning: false,
        };
        assert!(!cyclic.is_valid_in(&g));
        let repeated = RainbowForest {
            edges: vec![0, 1],
            spanning: true,
        };
        assert!(repeated.is_valid_in(&g));
        assert!(!repeated.is_valid_in(&mono_path()));
    }
}
