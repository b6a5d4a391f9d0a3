//! Canonical labels for isomorph rejection.
//!
//! Small graphs take the lexicographic minimum over every vertex
//! permutation. Larger ones use colour refinement with individualisation
//! and take the minimum over the leaves of the search tree; automorphisms
//! discovered along the way prune sibling branches.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{HyperGraph, Vertex};

/// Default largest vertex count accepted by [`canonical_form`].
pub const CANON_LIMIT: usize = 16;

/// Graphs with at most this many vertices are labelled by brute force.
pub const BRUTE_FORCE_MAX: usize = 6;

/// Canonical byte string: `[n, r]` followed by the relabelled edges in
/// lexicographic order, one byte per vertex.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct CanonicalLabel(Vec<u8>);

impl CanonicalLabel {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// Graph whose vertex labelling is the canonical one.
    pub fn to_graph(&self) -> HyperGraph {
        let n = self.0[0] as usize;
        let r = self.0[1] as usize;
        let edges: Vec<Vec<Vertex>> = self.0[2..]
            .chunks(r)
            .map(|c| c.iter().map(|&b| b as Vertex).collect())
            .collect();
        HyperGraph::from_edges(n, r, &edges).expect("label encodes a valid graph")
    }

    pub fn edge_count(&self) -> usize {
        (self.0.len() - 2) / self.0[1] as usize
    }
}

pub fn canonical_form(g: &HyperGraph) -> Result<CanonicalLabel> {
    canonical_form_with_limit(g, CANON_LIMIT)
}

pub fn canonical_form_with_limit(g: &HyperGraph, limit: usize) -> Result<CanonicalLabel> {
    let limit = limit.min(255);
    if g.n() > limit {
        return Err(Error::TooLarge { n: g.n(), limit });
    }
    if g.n() <= BRUTE_FORCE_MAX {
        Ok(brute_force_label(g))
    } else {
        Ok(refined_label(g))
    }
}

fn encode(g: &HyperGraph, perm: &[u8]) -> Vec<u8> {
    let r = g.r();
    let mut edges: Vec<Vec<u8>> = g
        .edges()
        .iter()
        .map(|e| {
            let mut m: Vec<u8> = e.iter().map(|&v| perm[v as usize]).collect();
            m.sort_unstable();
            m
        })
        .collect();
    edges.sort_unstable();
    let mut out = Vec::with_capacity(2 + r * edges.len());
    out.push(g.n() as u8);
    out.push(r as u8);
    for e in edges {
        out.extend_from_slice(&e);
    }
    out
}

/// Minimum encoding over all `n!` relabellings.
pub fn brute_force_label(g: &HyperGraph) -> CanonicalLabel {
    let n = g.n();
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut best = encode(g, &perm);
    // Heap's algorithm
    let mut c = vec![0usize; n];
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            let cand = encode(g, &perm);
            if cand < best {
                best = cand;
            }
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    CanonicalLabel(best)
}

struct Refiner<'a> {
    g: &'a HyperGraph,
    best: Option<(Vec<u8>, Vec<u8>)>,
    first: Option<(Vec<u8>, Vec<u8>)>,
    automorphisms: Vec<Vec<u8>>,
}

/// Minimum encoding over the leaves of the individualisation-refinement tree.
pub fn refined_label(g: &HyperGraph) -> CanonicalLabel {
    let colors = vec![0u32; g.n()];
    let mut refiner = Refiner {
        g,
        best: None,
        first: None,
        automorphisms: Vec::new(),
    };
    let colors = refiner.refine(colors);
    refiner.search(colors, &mut Vec::new());
    CanonicalLabel(refiner.best.expect("at least one leaf").0)
}

impl Refiner<'_> {
    /// Equitable refinement; colours are ranks of invariant signatures.
    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.g.n();
        let mut classes = count_classes(&colors);
        loop {
            let sigs: Vec<(u32, Vec<Vec<u32>>)> = (0..n)
                .map(|v| {
                    let mut per_edge: Vec<Vec<u32>> = self
                        .g
                        .incidence(v as Vertex)
                        .iter()
                        .map(|&e| {
                            let mut cs: Vec<u32> = self
                                .g
                                .edge(e)
                                .iter()
                                .filter(|&&w| w as usize != v)
                                .map(|&w| colors[w as usize])
                                .collect();
                            cs.sort_unstable();
                            cs
                        })
                        .collect();
                    per_edge.sort_unstable();
                    (colors[v], per_edge)
                })
                .collect();
            let mut distinct: Vec<&(u32, Vec<Vec<u32>>)> = sigs.iter().collect();
            distinct.sort();
            distinct.dedup();
            let rank: HashMap<&(u32, Vec<Vec<u32>>), u32> = distinct
                .iter()
                .enumerate()
                .map(|(i, s)| (*s, i as u32))
                .collect();
            colors = sigs.iter().map(|s| rank[s]).collect();
            let now = distinct.len();
            if now == classes {
                return colors;
            }
            classes = now;
        }
    }

    fn search(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = self.g.n();
        if count_classes(&colors) == n {
            let perm: Vec<u8> = colors.iter().map(|&c| c as u8).collect();
            self.leaf(perm);
            return;
        }
        // first smallest non-singleton cell
        let mut sizes: HashMap<u32, usize> = HashMap::new();
        for &c in &colors {
            *sizes.entry(c).or_default() += 1;
        }
        let target = sizes
            .iter()
            .filter(|(_, &s)| s > 1)
            .map(|(&c, &s)| (s, c))
            .min()
            .expect("non-discrete colouring")
            .1;
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target).collect();
        let isolated = cell.iter().all(|&v| self.g.degree(v as Vertex) == 0);

        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored.iter().any(|&w| self.same_orbit(prefix, w, v)) {
                continue;
            }
            let mut next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(u, &c)| 2 * c + u32::from(c == target && u != v))
                .collect();
            next = compress(&next);
            let next = self.refine(next);
            prefix.push(v);
            self.search(next, prefix);
            prefix.pop();
            explored.push(v);
            if isolated {
                // isolated vertices are interchangeable
                break;
            }
        }
    }

    fn leaf(&mut self, perm: Vec<u8>) {
        let code = encode(self.g, &perm);
        for known in [&self.first, &self.best].into_iter().flatten() {
            if known.0 == code {
                let aut = compose_inverse(&known.1, &perm);
                if !self.automorphisms.contains(&aut) {
                    self.automorphisms.push(aut);
                }
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), perm.clone()));
        }
        match &self.best {
            Some((b, _)) if *b <= code => {}
            _ => self.best = Some((code, perm)),
        }
    }

    /// Whether some product of known automorphisms fixing `prefix`
    /// pointwise maps `a` to `b`.
    fn same_orbit(&self, prefix: &[usize], a: usize, b: usize) -> bool {
        let n = self.g.n();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut x = x;
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for aut in &self.automorphisms {
            if prefix.iter().all(|&p| aut[p] as usize == p) {
                for (x, &y) in aut.iter().enumerate() {
                    let (rx, ry) = (find(&mut parent, x), find(&mut parent, y as usize));
                    if rx != ry {
                        parent[rx] = ry;
                    }
                }
            }
        }
        find(&mut parent, a) == find(&mut parent, b)
    }
}

/// `γ = π1⁻¹ ∘ π2` as a vertex map.
fn compose_inverse(p1: &[u8], p2: &[u8]) -> Vec<u8> {
    let mut inv = vec![0u8; p1.len()];
    for (v, &img) in p1.iter().enumerate() {
        inv[img as usize] = v as u8;
    }
    p2.iter().map(|&img| inv[img as usize]).collect()
}

fn count_classes(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn compress(colors: &[u32]) -> Vec<u32> {
    let mut d = colors.to_vec();
    d.sort_unstable();
    d.dedup();
    colors
        .iter()
        .map(|c| d.binary_search(c).unwrap() as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, r: usize, edges: &[&[Vertex]]) -> HyperGraph {
        HyperGraph::from_edges(n, r, edges).unwrap()
    }

    #[test]
    fn same_edge_set_same_label() {
        let a = g(3, 3, &[&[0, 1, 2]]);
        let b = g(3, 3, &[&[2, 1, 0]]);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn relabelling_same_label() {
        let a = g(4, 3, &[&[0, 1, 2]]);
        let b = g(4, 3, &[&[1, 2, 3]]);
        assert_eq!(canonical_form(&a).unwrap(), canonical_form(&b).unwrap());
    }

    #[test]
    fn diamond_vs_disjoint_differ() {
        let diamond = g(6, 3, &[&[0, 1, 2], &[1, 2, 3]]);
        let disjoint = g(6, 3, &[&[0, 1, 2], &[3, 4, 5]]);
        assert_ne!(
            canonical_form(&diamond).unwrap(),
            canonical_form(&disjoint).unwrap()
        );
        assert_ne!(refined_label(&diamond), refined_label(&disjoint));
    }

    #[test]
    fn too_large() {
        let big = HyperGraph::new(17, 3).unwrap();
        assert_eq!(
            canonical_form(&big),
            Err(Error::TooLarge { n: 17, limit: 16 })
        );
        assert!(canonical_form_with_limit(&big, 20).is_ok());
    }

    #[test]
    fn label_decodes_to_isomorphic_graph() {
        let a = g(8, 3, &[&[0, 4, 7], &[1, 4, 5], &[2, 5, 7]]);
        let label = canonical_form(&a).unwrap();
        let back = label.to_graph();
        assert_eq!(back.len(), 3);
        assert_eq!(canonical_form(&back).unwrap(), label);
        assert_eq!(label.edge_count(), 3);
    }

    #[test]
    fn symmetric_graphs_terminate() {
        // complete 3-graph on 9 vertices: |Aut| = 9!
        let mut k9 = HyperGraph::new(9, 3).unwrap();
        for a in 0..9 {
            for b in a + 1..9 {
                for c in b + 1..9 {
                    k9.add_edge(&[a, b, c]).unwrap();
                }
            }
        }
        let l = refined_label(&k9);
        assert_eq!(l.edge_count(), 84);
        let empty = HyperGraph::new(16, 4).unwrap();
        assert_eq!(refined_label(&empty).edge_count(), 0);
    }
}
