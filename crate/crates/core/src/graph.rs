//! Edge-colored simple graphs, vertex partitions, volumes and cuts.

use std::collections::{HashMap, HashSet, VecDeque};
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected edge with endpoints stored as `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub color: usize,
}

impl Edge {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// A simple undirected graph on vertices `0..n` with a color per edge.
///
/// Colors are dense: every id in `0..num_colors()` labels at least one edge.
/// The edge list and the per-vertex incidence lists are built together and
/// never mutated, so the graph can be shared freely across threads.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColoredGraph {
    n: usize,
    edges: Vec<Edge>,
    num_colors: usize,
    // (neighbor, edge index)
    incidence: Vec<Vec<(usize, usize)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphDoc {
    n: usize,
    edges: Vec<(i64, i64, i64)>,
}

#[derive(Serialize)]
struct GraphDocOut {
    n: usize,
    edges: Vec<[usize; 3]>,
}

impl EdgeColoredGraph {
    /// Builds a graph, re-indexing colors densely in order of first appearance.
    pub fn new<C>(n: usize, edges: impl IntoIterator<Item = (usize, usize, C)>) -> Result<Self>
    where
        C: Eq + Hash,
    {
        let mut palette: HashMap<C, usize> = HashMap::new();
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut incidence = vec![Vec::new(); n];
        for (a, b, c) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(Error::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(Error::LoopEdge(a));
            }
            let (u, v) = (a.min(b), a.max(b));
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge(u, v));
            }
            let next = palette.len();
            let color = *palette.entry(c).or_insert(next);
            let id = out.len();
            incidence[u].push((v, id));
            incidence[v].push((u, id));
            out.push(Edge { u, v, color });
        }
        Ok(Self {
            n,
            edges: out,
            num_colors: palette.len(),
            incidence,
        })
    }

    /// Parses the JSON graph format `{"n": N, "edges": [[u, v, color], ...]}`.
    pub fn from_json(bytes: &[u8]) -> Result<Self> {
        let doc: GraphDoc = serde_json::from_slice(bytes).map_err(|e| Error::Malformed(e.to_string()))?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for (u, v, c) in doc.edges {
            let u = vertex_id(u, doc.n)?;
            let v = vertex_id(v, doc.n)?;
            edges.push((u, v, c));
        }
        Self::new(doc.n, edges)
    }

    /// Canonical JSON: edges sorted by `(min(u,v), max(u,v))`, dense colors.
    pub fn to_json(&self) -> String {
        let mut edges: Vec<[usize; 3]> = self.edges.iter().map(|e| [e.u, e.v, e.color]).collect();
        edges.sort_unstable();
        serde_json::to_string(&GraphDocOut { n: self.n, edges }).expect("graph serializes")
    }

    /// Same vertices and edges with new colors, one per edge in edge order.
    pub fn recolored<C: Eq + Hash + Copy>(&self, colors: &[C]) -> Result<Self> {
        if colors.len() != self.edges.len() {
            return Err(Error::InvalidParameter(format!(
                "{} colors for {} edges",
                colors.len(),
                self.edges.len()
            )));
        }
        Self::new(self.n, self.edges.iter().zip(colors).map(|(e, &c)| (e.u, e.v, c)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    /// `(neighbor, edge index)` pairs incident to `v`.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.incidence[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.incidence[a].iter().any(|&(w, _)| w == b)
    }

    pub fn degrees(&self) -> DegreeStats {
        let degrees: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        DegreeStats {
            min_degree: degrees.iter().copied().min().unwrap_or(0),
            volume: degrees.iter().sum(),
            degrees,
        }
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    /// Sizes `c_i` of the color classes, indexed by color.
    pub fn color_class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors];
        for e in &self.edges {
            sizes[e.color] += 1;
        }
        sizes
    }

    /// Edge indices of every color class, in edge order.
    pub fn color_classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (i, e) in self.edges.iter().enumerate() {
            classes[e.color].push(i);
        }
        classes
    }

    pub fn volume(&self, set: &[usize]) -> usize {
        set.iter().map(|&v| self.degree(v)).sum()
    }

    /// Crossing edges and volumes of a nonempty proper vertex subset.
    pub fn cut(&self, set: &[usize]) -> Result<CutStats> {
        let mask = self.membership(set)?;
        let count = mask.iter().filter(|&&b| b).count();
        if count == 0 || count == self.n {
            return Err(Error::ImproperSubset);
        }
        let cut_edges = self.edges.iter().filter(|e| mask[e.u] != mask[e.v]).count();
        let vol = self.volume(set);
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        Ok(CutStats {
            set: sorted,
            cut_edges,
            vol,
            vol_complement: 2 * self.num_edges() - vol,
        })
    }

    /// Crossing edge count and volume of the subset encoded by `mask` (n ≤ 64).
    pub(crate) fn cut_mask(&self, mask: u64) -> (usize, usize) {
        let cut = self
            .edges
            .iter()
            .filter(|e| ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1)
            .count();
        let mut vol = 0;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            vol += self.degree(v);
            m &= m - 1;
        }
        (cut, vol)
    }

    fn membership(&self, set: &[usize]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.n];
        for &v in set {
            if v >= self.n {
                return Err(Error::VertexOutOfRange { vertex: v, n: self.n });
            }
            mask[v] = true;
        }
        Ok(mask)
    }

    /// Number of distinct colors on edges joining different parts.
    pub fn colors_across(&self, p: &VertexPartition) -> usize {
        let labels = p.labels();
        let mut seen = vec![false; self.num_colors];
        let mut count = 0;
        for e in &self.edges {
            if labels[e.u] != labels[e.v] && !seen[e.color] {
                seen[e.color] = true;
                count += 1;
            }
        }
        count
    }

    /// Number of edges joining different parts, `e_G(P)`.
    pub fn edges_across(&self, p: &VertexPartition) -> usize {
        let labels = p.labels();
        self.edges.iter().filter(|e| labels[e.u] != labels[e.v]).count()
    }

    /// Connected component label per vertex, labels in order of discovery.
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        let mut queue = VecDeque::new();
        for s in 0..self.n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = next;
            queue.push_back(s);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in &self.incidence[x] {
                    if label[y] == usize::MAX {
                        label[y] = next;
                        queue.push_back(y);
                    }
                }
            }
            next += 1;
        }
        label
    }

    /// Connectivity by breadth-first search. The empty graph is not connected.
    pub fn is_connected(&self) -> bool {
        self.n > 0 && self.components().iter().all(|&c| c == 0)
    }
}

fn vertex_id(x: i64, n: usize) -> Result<usize> {
    usize::try_from(x)
        .ok()
        .filter(|&v| v < n)
        .ok_or(Error::VertexOutOfRange {
            vertex: x.max(0) as usize,
            n,
        })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeStats {
    pub degrees: Vec<usize>,
    /// δ; zero for the empty vertex set.
    pub min_degree: usize,
    /// Vol(G) = 2|E|.
    pub volume: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutStats {
    pub set: Vec<usize>,
    pub cut_edges: usize,
    pub vol: usize,
    pub vol_complement: usize,
}

impl CutStats {
    /// `h_G(S) = e(S, S̄) / min{Vol(S), Vol(S̄)}`; infinite if one side has no volume.
    pub fn ratio(&self) -> f64 {
        let denom = self.vol.min(self.vol_complement);
        if denom == 0 {
            f64::INFINITY
        } else {
            self.cut_edges as f64 / denom as f64
        }
    }
}

/// A partition of `0..n` into nonempty disjoint parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<usize>>", into = "Vec<Vec<usize>>")]
pub struct VertexPartition {
    parts: Vec<Vec<usize>>,
    labels: Vec<usize>,
}

impl VertexPartition {
    /// Validates that `parts` covers `0..n` with disjoint nonempty sets.
    pub fn new(n: usize, parts: Vec<Vec<usize>>) -> Result<Self> {
        if parts.is_empty() && n > 0 {
            return Err(Error::InvalidPartition("no parts".into()));
        }
        let mut labels = vec![usize::MAX; n];
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return Err(Error::InvalidPartition(format!("part {i} is empty")));
            }
            for &v in part {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("vertex {v} repeated")));
                }
                labels[v] = i;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidPartition(format!("vertex {v} uncovered")));
        }
        Ok(Self { parts, labels })
    }

    /// Builds a partition from a part label per vertex; parts are numbered by
    /// first appearance, so a restricted-growth string maps to itself.
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut remap = HashMap::new();
        let mut parts: Vec<Vec<usize>> = Vec::new();
        let mut dense = Vec::with_capacity(labels.len());
        for (v, &l) in labels.iter().enumerate() {
            let next = parts.len();
            let id = *remap.entry(l).or_insert(next);
            if id == parts.len() {
                parts.push(Vec::new());
            }
            parts[id].push(v);
            dense.push(id);
        }
        Self { parts, labels: dense }
    }

    /// The partition into `n` singletons.
    pub fn singletons(n: usize) -> Self {
        Self::from_labels(&(0..n).collect::<Vec<_>>())
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    /// Part index of each vertex.
    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    /// Number of parts `t`.
    pub fn t(&self) -> usize {
        self.parts.len()
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Part sizes in weakly increasing order.
    pub fn sorted_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.parts.iter().map(Vec::len).collect();
        sizes.sort_unstable();
        sizes
    }
}

impl TryFrom<Vec<Vec<usize>>> for VertexPartition {
    type Error = Error;

    fn try_from(parts: Vec<Vec<usize>>) -> Result<Self> {
        let n = parts.iter().map(Vec::len).sum();
        Self::new(n, parts)
    }
}

impl From<VertexPartition> for Vec<Vec<usize>> {
    fn from(p: VertexPartition) -> Self {
        p.parts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize) -> EdgeColoredGraph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v, edges.len()));
            }
        }
        EdgeColoredGraph::new(n, edges).unwrap()
    }

    #[test]
    fn loads_rainbow_triangle() {
        let g = EdgeColoredGraph::from_json(br#"{"n":3,"edges":[[0,1,0],[1,2,1],[0,2,2]]}"#).unwrap();
        assert_eq!(g.n(), 3);
        assert_eq!(g.num_edges(), 3);
        assert_eq!(g.num_colors(), 3);
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(
            EdgeColoredGraph::from_json(br#"{"n":2,"edges":[[0,0,0]]}"#),
            Err(Error::LoopEdge(0))
        ));
        assert!(matches!(
            EdgeColoredGraph::from_json(br#"{"n":2,"edges":[[0,1,0],[1,0,3]]}"#),
            Err(Error::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            EdgeColoredGraph::from_json(br#"{"n":2,"edges":[[0,2,0]]}"#),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(
            EdgeColoredGraph::from_json(br#"{"n":2,"edges":[[0,1]]}"#),
            Err(Error::Malformed(_))
        ));
        assert!(matches!(
            EdgeColoredGraph::from_json(b"not json"),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn colors_are_reindexed_by_first_appearance() {
        let g = EdgeColoredGraph::from_json(br#"{"n":4,"edges":[[0,1,5],[2,3,9]]}"#).unwrap();
        assert_eq!(g.num_colors(), 2);
        assert_eq!(g.edges()[0].color, 0);
        assert_eq!(g.edges()[1].color, 1);

        let g = EdgeColoredGraph::from_json(br#"{"n":3,"edges":[[0,1,-7],[1,2,40],[0,2,-7]]}"#).unwrap();
        assert_eq!(g.color_class_sizes(), vec![2, 1]);
    }

    #[test]
    fn canonical_json_sorts_edges() {
        let g = EdgeColoredGraph::new(3, [(2, 1, 0), (1, 0, 1)]).unwrap();
        assert_eq!(g.to_json(), r#"{"n":3,"edges":[[0,1,1],[1,2,0]]}"#);
    }

    #[test]
    fn degree_statistics() {
        let d = k(4).degrees();
        assert_eq!(d.degrees, vec![3; 4]);
        assert_eq!((d.min_degree, d.volume), (3, 12));

        let star = EdgeColoredGraph::new(4, [(0, 1, 0), (0, 2, 0), (0, 3, 0)]).unwrap();
        let d = star.degrees();
        assert_eq!(d.degrees, vec![3, 1, 1, 1]);
        assert_eq!(d.min_degree, 1);

        let empty = EdgeColoredGraph::new::<usize>(3, []).unwrap();
        assert_eq!(empty.degrees().degrees, vec![0, 0, 0]);
        assert_eq!(empty.min_degree(), 0);
    }

    #[test]
    fn cuts() {
        let g = k(4);
        let c = g.cut(&[0]).unwrap();
        assert_eq!((c.cut_edges, c.vol, c.vol_complement), (3, 3, 9));
        assert_eq!(g.cut(&[0, 1]).unwrap().cut_edges, 4);
        assert!(matches!(g.cut(&[]), Err(Error::ImproperSubset)));
        assert!(matches!(g.cut(&[0, 1, 2, 3]), Err(Error::ImproperSubset)));

        let two_k2 = EdgeColoredGraph::new(4, [(0, 1, 0), (2, 3, 1)]).unwrap();
        assert_eq!(two_k2.cut(&[0, 1]).unwrap().cut_edges, 0);
        assert_eq!(two_k2.cut_mask(0b0011), (0, 2));
    }

    #[test]
    fn colors_across_partitions() {
        let tri = EdgeColoredGraph::new(3, [(0, 1, 0), (1, 2, 1), (0, 2, 2)]).unwrap();
        assert_eq!(tri.colors_across(&VertexPartition::singletons(3)), 3);

        let p3 = EdgeColoredGraph::new(3, [(0, 1, 0), (1, 2, 0)]).unwrap();
        assert_eq!(p3.colors_across(&VertexPartition::singletons(3)), 1);

        let whole = VertexPartition::from_labels(&[0, 0, 0]);
        assert_eq!(tri.colors_across(&whole), 0);
    }

    #[test]
    fn partition_validation() {
        assert!(VertexPartition::new(3, vec![vec![0, 1], vec![2]]).is_ok());
        assert!(VertexPartition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(VertexPartition::new(3, vec![vec![0, 1]]).is_err());
        assert!(VertexPartition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
        let p = VertexPartition::from_labels(&[7, 3, 7, 1]);
        assert_eq!(p.parts(), &[vec![0, 2], vec![1], vec![3]]);
        assert_eq!(p.labels(), &[0, 1, 0, 2]);
        assert_eq!(p.sorted_sizes(), vec![1, 1, 2]);
    }

    #[test]
    fn incidence_matches_edge_list() {
        let g = k(5);
        for v in 0..5 {
            for &(w, id) in g.incident(v) {
                let e = g.edges()[id];
                assert_eq!(e.other(v), w);
                assert!(e.u == v || e.v == v);
            }
        }
        let total: usize = (0..5).map(|v| g.incident(v).len()).sum();
        assert_eq!(total, 2 * g.num_edges());
    }

    #[test]
    fn connectivity() {
        assert!(k(3).is_connected());
        let two_k2 = EdgeColoredGraph::new(4, [(0, 1, 0), (2, 3, 1)]).unwrap();
        assert!(!two_k2.is_connected());
        assert_eq!(two_k2.components(), vec![0, 0, 1, 1]);
        assert!(EdgeColoredGraph::new::<usize>(1, []).unwrap().is_connected());
    }
}
