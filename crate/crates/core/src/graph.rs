//! The r-uniform hypergraph model, `.hg` I/O and edge subsets.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Error, Result};

pub type Vertex = u32;

/// An unordered pair of distinct vertices, stored with `u < v`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "[Vertex; 2]", try_from = "[Vertex; 2]")]
pub struct VertexPair {
    u: Vertex,
    v: Vertex,
}

impl VertexPair {
    /// Returns `None` when `a == b`.
    pub fn new(a: Vertex, b: Vertex) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(VertexPair { u: a, v: b }),
            std::cmp::Ordering::Greater => Some(VertexPair { u: b, v: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn u(self) -> Vertex {
        self.u
    }

    pub fn v(self) -> Vertex {
        self.v
    }

    pub fn contains(self, x: Vertex) -> bool {
        self.u == x || self.v == x
    }
}

impl From<VertexPair> for [Vertex; 2] {
    fn from(p: VertexPair) -> Self {
        [p.u, p.v]
    }
}

impl TryFrom<[Vertex; 2]> for VertexPair {
    type Error = String;

    fn try_from(a: [Vertex; 2]) -> std::result::Result<Self, String> {
        VertexPair::new(a[0], a[1]).ok_or_else(|| format!("degenerate pair {a:?}"))
    }
}

impl fmt::Debug for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.u, self.v)
    }
}

impl fmt::Display for VertexPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

/// All pairs inside a sorted vertex slice, in lexicographic order.
pub fn pairs_of(vertices: &[Vertex]) -> impl Iterator<Item = VertexPair> + '_ {
    vertices.iter().enumerate().flat_map(move |(i, &a)| {
        vertices[i + 1..]
            .iter()
            .map(move |&b| VertexPair { u: a, v: b })
    })
}

/// An n-vertex r-uniform hypergraph with pair and vertex incidence indexes.
///
/// Edge indices are positions in insertion order; [`HyperGraph::parse`]
/// and [`HyperGraph::sorted`] produce lexicographically ordered edges.
#[derive(Clone)]
pub struct HyperGraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<Vertex>>,
    masks: Vec<BitSet>,
    incidence: Vec<Vec<usize>>,
    pair_index: HashMap<VertexPair, Vec<usize>>,
    lookup: HashMap<Vec<Vertex>, usize>,
    max_overlap: usize,
}

impl PartialEq for HyperGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.r == other.r && self.edges == other.edges
    }
}

impl Eq for HyperGraph {}

impl fmt::Debug for HyperGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("HyperGraph")
            .field("n", &self.n)
            .field("r", &self.r)
            .field("edges", &self.edges)
            .finish()
    }
}

impl HyperGraph {
    /// The empty graph. `r` must be at least 2.
    pub fn new(n: usize, r: usize) -> Result<Self> {
        if r < 2 {
            return Err(Error::InvalidParameter(format!("uniformity r = {r} < 2")));
        }
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("n = {n} too large")));
        }
        Ok(HyperGraph {
            n,
            r,
            edges: Vec::new(),
            masks: Vec::new(),
            incidence: vec![Vec::new(); n],
            pair_index: HashMap::new(),
            lookup: HashMap::new(),
            max_overlap: 0,
        })
    }

    /// Builds a graph keeping the given edge order. Vertices inside each edge
    /// may be given in any order.
    pub fn from_edges<E: AsRef<[Vertex]>>(n: usize, r: usize, edges: &[E]) -> Result<Self> {
        let mut g = Self::new(n, r)?;
        for (i, e) in edges.iter().enumerate() {
            g.push_checked(e.as_ref().to_vec(), i + 1)?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its index.
    pub fn add_edge(&mut self, edge: &[Vertex]) -> Result<usize> {
        let line = self.edges.len() + 1;
        self.push_checked(edge.to_vec(), line)
    }

    fn push_checked(&mut self, mut edge: Vec<Vertex>, line: usize) -> Result<usize> {
        edge.sort_unstable();
        edge.dedup();
        if edge.len() != self.r {
            return Err(Error::WrongArity {
                line,
                expected: self.r,
                found: edge.len(),
            });
        }
        if let Some(&v) = edge.iter().find(|&&v| v as usize >= self.n) {
            return Err(Error::VertexOutOfRange {
                line,
                vertex: v as u64,
                n: self.n,
            });
        }
        if self.lookup.contains_key(&edge) {
            return Err(Error::DuplicateEdge { line });
        }
        Ok(self.push_unchecked(edge))
    }

    fn push_unchecked(&mut self, edge: Vec<Vertex>) -> usize {
        let idx = self.edges.len();
        self.max_overlap = self.max_overlap.max(self.max_overlap_with(&edge));
        for p in pairs_of(&edge) {
            self.pair_index.entry(p).or_default().push(idx);
        }
        for &v in &edge {
            self.incidence[v as usize].push(idx);
        }
        self.masks
            .push(BitSet::from_iter_n(self.n, edge.iter().copied()));
        self.lookup.insert(edge.clone(), idx);
        self.edges.push(edge);
        idx
    }

    /// Largest `|edge ∩ f|` over existing edges `f`.
    pub fn max_overlap_with(&self, edge: &[Vertex]) -> usize {
        let mut counts: HashMap<usize, usize> = HashMap::new();
        let mut best = 0;
        for &v in edge {
            if let Some(inc) = self.incidence.get(v as usize) {
                for &e in inc {
                    let c = counts.entry(e).or_insert(0);
                    *c += 1;
                    best = best.max(*c);
                }
            }
        }
        best
    }

    /// Copy with edges in lexicographic order.
    pub fn sorted(&self) -> HyperGraph {
        let mut edges = self.edges.clone();
        edges.sort();
        let mut g = HyperGraph::new(self.n, self.r).expect("validated parameters");
        for e in edges {
            g.push_unchecked(e);
        }
        g
    }

    /// Copy without the listed edge indices (order of the rest preserved).
    pub fn without_edges(&self, drop: &[usize]) -> HyperGraph {
        let mut g = HyperGraph::new(self.n, self.r).expect("validated parameters");
        for (i, e) in self.edges.iter().enumerate() {
            if !drop.contains(&i) {
                g.push_unchecked(e.clone());
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn edge(&self, i: usize) -> &[Vertex] {
        &self.edges[i]
    }

    pub fn edges(&self) -> &[Vec<Vertex>] {
        &self.edges
    }

    pub fn mask(&self, i: usize) -> &BitSet {
        &self.masks[i]
    }

    pub fn incidence(&self, v: Vertex) -> &[usize] {
        &self.incidence[v as usize]
    }

    /// Edge indices containing both vertices of `p`.
    pub fn edges_with_pair(&self, p: VertexPair) -> &[usize] {
        self.pair_index.get(&p).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn index_of(&self, edge: &[Vertex]) -> Option<usize> {
        let mut e = edge.to_vec();
        e.sort_unstable();
        self.lookup.get(&e).copied()
    }

    pub fn contains_edge(&self, edge: &[Vertex]) -> bool {
        self.index_of(edge).is_some()
    }

    /// Largest intersection between two distinct edges (0 with < 2 edges).
    pub fn max_overlap(&self) -> usize {
        self.max_overlap
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.incidence[v as usize].len()
    }

    pub fn vertex_mask(&self, edge: &[Vertex]) -> BitSet {
        BitSet::from_iter_n(self.n, edge.iter().copied())
    }

    /// Rebuilds the pair index from the edge list; used to check consistency.
    pub fn rebuilt_pair_index(&self) -> HashMap<VertexPair, Vec<usize>> {
        let mut idx: HashMap<VertexPair, Vec<usize>> = HashMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            for p in pairs_of(e) {
                idx.entry(p).or_default().push(i);
            }
        }
        idx
    }

    pub fn pair_index(&self) -> &HashMap<VertexPair, Vec<usize>> {
        &self.pair_index
    }

    pub fn all(&self) -> EdgeSubset<'_> {
        EdgeSubset {
            graph: self,
            indices: (0..self.len()).collect(),
        }
    }

    pub fn subset(&self, indices: &[usize]) -> Result<EdgeSubset<'_>> {
        EdgeSubset::new(self, indices.to_vec())
    }

    /// Parses the `.hg` text format: optional `#` comment lines, a header
    /// `r n m`, then `m` lines of `r` strictly increasing vertex ids.
    /// Edges come back in lexicographic order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::MalformedHeader("missing header line".into()))?;
        let fields: Vec<usize> = header
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::MalformedHeader(format!("not three integers: {header:?}")))?;
        let [r, n, m] = fields[..] else {
            return Err(Error::MalformedHeader(format!(
                "expected \"r n m\", got {header:?}"
            )));
        };
        if r < 2 {
            return Err(Error::MalformedHeader(format!("uniformity r = {r} < 2")));
        }

        let mut edges: Vec<(usize, Vec<Vertex>)> = Vec::with_capacity(m);
        let mut seen: HashMap<Vec<Vertex>, usize> = HashMap::new();
        for (line, l) in lines {
            let mut edge = Vec::with_capacity(r);
            for tok in l.split_whitespace() {
                let v: u64 = tok.parse().map_err(|_| Error::WrongArity {
                    line,
                    expected: r,
                    found: l.split_whitespace().count(),
                })?;
                if v >= n as u64 {
                    return Err(Error::VertexOutOfRange { line, vertex: v, n });
                }
                edge.push(v as Vertex);
            }
            if edge.len() != r {
                return Err(Error::WrongArity {
                    line,
                    expected: r,
                    found: edge.len(),
                });
            }
            if edge.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::UnsortedEdge { line });
            }
            if seen.insert(edge.clone(), line).is_some() {
                return Err(Error::DuplicateEdge { line });
            }
            edges.push((line, edge));
        }
        if edges.len() != m {
            return Err(Error::EdgeCountMismatch {
                expected: m,
                found: edges.len(),
            });
        }
        edges.sort_by(|a, b| a.1.cmp(&b.1));
        let mut g = HyperGraph::new(n, r)?;
        for (_, e) in edges {
            g.push_unchecked(e);
        }
        Ok(g)
    }

    /// Bit-exact `.hg` serialization: header, sorted edges, single spaces,
    /// trailing newline.
    pub fn to_hg_string(&self) -> String {
        let mut edges: Vec<&Vec<Vertex>> = self.edges.iter().collect();
        edges.sort();
        let mut out = format!("{} {} {}\n", self.r, self.n, self.edges.len());
        for e in edges {
            let line: Vec<String> = e.iter().map(u32::to_string).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphWire {
    n: usize,
    r: usize,
    edges: Vec<Vec<Vertex>>,
}

/// JSON shape: `{"n": .., "r": .., "edges": [[..], ..]}` in stored order.
impl Serialize for HyperGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphWire {
            n: self.n,
            r: self.r,
            edges: self.edges.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for HyperGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = GraphWire::deserialize(d)?;
        HyperGraph::from_edges(w.n, w.r, &w.edges).map_err(serde::de::Error::custom)
    }
}

/// A set of edge indices of a parent graph, kept sorted.
#[derive(Clone, PartialEq, Eq)]
pub struct EdgeSubset<'g> {
    graph: &'g HyperGraph,
    indices: Vec<usize>,
}

impl fmt::Debug for EdgeSubset<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.indices.iter().map(|&i| self.graph.edge(i)))
            .finish()
    }
}

impl<'g> EdgeSubset<'g> {
    pub fn new(graph: &'g HyperGraph, mut indices: Vec<usize>) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= graph.len()) {
            return Err(Error::InvalidParameter(format!(
                "edge index {bad} out of range for {} edges",
                graph.len()
            )));
        }
        Ok(EdgeSubset { graph, indices })
    }

    pub fn graph(&self) -> &'g HyperGraph {
        self.graph
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, edge_index: usize) -> bool {
        self.indices.binary_search(&edge_index).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = &'g [Vertex]> + '_ {
        self.indices.iter().map(|&i| self.graph.edge(i))
    }

    /// `V(F)` as a bitset.
    pub fn vertices(&self) -> BitSet {
        let mut s = BitSet::with_capacity(self.graph.n());
        for &i in &self.indices {
            s.union_with(self.graph.mask(i));
        }
        s
    }

    pub fn vertex_list(&self) -> Vec<Vertex> {
        self.vertices().iter().map(|v| v as Vertex).collect()
    }

    /// `|V(F)|`; zero for the empty set.
    pub fn span(&self) -> usize {
        self.vertices().len()
    }

    pub fn minus(&self, other: &EdgeSubset<'_>) -> EdgeSubset<'g> {
        EdgeSubset {
            graph: self.graph,
            indices: self
                .indices
                .iter()
                .copied()
                .filter(|i| !other.contains(*i))
                .collect(),
        }
    }

    pub fn union(&self, other: &EdgeSubset<'_>) -> EdgeSubset<'g> {
        let mut indices = self.indices.clone();
        indices.extend_from_slice(&other.indices);
        indices.sort_unstable();
        indices.dedup();
        EdgeSubset {
            graph: self.graph,
            indices,
        }
    }

    pub fn is_subset_of(&self, other: &EdgeSubset<'_>) -> bool {
        self.indices.iter().all(|&i| other.contains(i))
    }

    /// Connected under the "share at least two vertices" relation.
    pub fn is_connected(&self) -> bool {
        if self.indices.len() <= 1 {
            return true;
        }
        let mut reached = vec![false; self.indices.len()];
        reached[0] = true;
        let mut stack = vec![0usize];
        while let Some(a) = stack.pop() {
            let ma = self.graph.mask(self.indices[a]);
            for (b, &eb) in self.indices.iter().enumerate() {
                if !reached[b] && ma.intersection_len(self.graph.mask(eb)) >= 2 {
                    reached[b] = true;
                    stack.push(b);
                }
            }
        }
        reached.into_iter().all(|x| x)
    }
}

/// `|V(E)|` for an arbitrary list of edges.
pub fn span_of<E: AsRef<[Vertex]>>(edges: &[E]) -> usize {
    let mut vs: Vec<Vertex> = edges.iter().flat_map(|e| e.as_ref().to_vec()).collect();
    vs.sort_unstable();
    vs.dedup();
    vs.len()
}
