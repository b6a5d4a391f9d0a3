//! Claim sets, the pair families built from them, and diamonds.
//!
//! An edge set `F` i-claims a pair `xy` when some `i` edges of `F` together
//! with `{x, y}` span at most `(r−2)i + 2` vertices. `C_F(xy)` is the set
//! of such `i`; it always contains 0.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{pairs_of, EdgeSubset, HyperGraph, Vertex, VertexPair};
use crate::spansearch::SpanSearch;

/// Largest claim index the command line computes unless told otherwise.
pub const DEFAULT_CLAIM_CAP: usize = 6;

/// JSON shape: `{"pair": [u, v], "claims": [..], "truncated_at": t}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSet {
    pub pair: VertexPair,
    #[serde(rename = "claims")]
    pub members: Vec<usize>,
    #[serde(rename = "truncated_at")]
    pub i_max: usize,
}

impl ClaimSet {
    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }
}

/// Pair-family membership rules.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairKind {
    /// `P_A`: every member of `A` is claimed.
    Claims(Vec<usize>),
    /// `P_i`.
    Exactly(usize),
    /// `P_{1̄2}`: 2-claimed but not 1-claimed.
    OneBarTwo,
    /// `P_{≤t}`: some claim in `1..=t`.
    UpTo(usize),
}

impl PairKind {
    fn i_max(&self) -> usize {
        match self {
            PairKind::Claims(a) => a.iter().copied().max().unwrap_or(0),
            PairKind::Exactly(i) => *i,
            PairKind::OneBarTwo => 2,
            PairKind::UpTo(t) => *t,
        }
    }

    fn admits(&self, c: &ClaimSet) -> bool {
        match self {
            PairKind::Claims(a) => a.iter().all(|&i| c.contains(i)),
            PairKind::Exactly(i) => c.contains(*i),
            PairKind::OneBarTwo => c.contains(2) && !c.contains(1),
            PairKind::UpTo(t) => c.members.iter().any(|&i| 1 <= i && i <= *t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairFamily {
    pub kind: PairKind,
    pub pairs: Vec<VertexPair>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diamond {
    pub e1: usize,
    pub e2: usize,
    pub core: VertexPair,
}

fn pair_mask(g: &HyperGraph, xy: VertexPair) -> BitSet {
    BitSet::from_iter_n(g.n(), [xy.u(), xy.v()])
}

fn check_pair(g: &HyperGraph, xy: VertexPair) -> Result<()> {
    if xy.v() as usize >= g.n() {
        return Err(Error::InvalidParameter(format!(
            "pair {xy} has a vertex outside 0..{}",
            g.n()
        )));
    }
    Ok(())
}

/// Whether `F` i-claims `xy`, by exhaustive search.
pub fn claims(f: &EdgeSubset<'_>, xy: VertexPair, i: usize, budget: &Budget) -> Result<bool> {
    let g = f.graph();
    check_pair(g, xy)?;
    if i == 0 {
        return Ok(true);
    }
    if i > f.len() {
        return Ok(false);
    }
    let s = (g.r() - 2) * i + 2;
    if i == 1 {
        return Ok(f
            .edges()
            .any(|e| e.contains(&xy.u()) && e.contains(&xy.v())));
    }
    let mut allowed = vec![false; g.len()];
    for &e in f.indices() {
        allowed[e] = true;
    }
    let search = SpanSearch {
        g,
        allowed: Some(&allowed),
        min_index: None,
        connected: false,
        s,
        budget,
    };
    Ok(search.find(&pair_mask(g, xy), i)?.is_some())
}

/// `C_F(xy) ∩ [0, i_max]`.
pub fn claim_set(
    f: &EdgeSubset<'_>,
    xy: VertexPair,
    i_max: usize,
    budget: &Budget,
) -> Result<ClaimSet> {
    let mut members = vec![0];
    for i in 1..=i_max.min(f.len()) {
        if claims(f, xy, i, budget)? {
            members.push(i);
        }
    }
    Ok(ClaimSet {
        pair: xy,
        members,
        i_max,
    })
}

/// Pairs over `V(F)` (or over `ambient` for `P_A` and `P_i`) whose claim
/// sets satisfy `kind`. `P_{{0}}` is every pair of the domain.
pub fn pair_family(
    f: &EdgeSubset<'_>,
    kind: PairKind,
    ambient: Option<&[Vertex]>,
    budget: &Budget,
) -> Result<PairFamily> {
    let g = f.graph();
    let domain: Vec<Vertex> = match (ambient, &kind) {
        (None, _) => f.vertex_list(),
        (Some(_), PairKind::OneBarTwo | PairKind::UpTo(_)) => {
            return Err(Error::InvalidParameter(
                "this pair family is defined over V(F) only".into(),
            ))
        }
        (Some(a), _) => {
            let mut a = a.to_vec();
            a.sort_unstable();
            a.dedup();
            if let Some(&v) = a.iter().find(|&&v| v as usize >= g.n()) {
                return Err(Error::InvalidParameter(format!("vertex {v} out of range")));
            }
            a
        }
    };
    let i_max = kind.i_max();
    let pairs: Vec<VertexPair> = pairs_of(&domain).collect();
    let keep: Vec<bool> = pairs
        .par_iter()
        .map(|&p| claim_set(f, p, i_max, budget).map(|c| kind.admits(&c)))
        .collect::<Result<_>>()?;
    Ok(PairFamily {
        kind,
        pairs: pairs
            .into_iter()
            .zip(keep)
            .filter_map(|(p, k)| k.then_some(p))
            .collect(),
    })
}

/// All edge pairs of `F` meeting in exactly two vertices.
pub fn diamonds(f: &EdgeSubset<'_>) -> Vec<Diamond> {
    let g = f.graph();
    let idx = f.indices();
    let mut out = Vec::new();
    for (a, &e1) in idx.iter().enumerate() {
        for &e2 in &idx[a + 1..] {
            if g.mask(e1).intersection_len(g.mask(e2)) == 2 {
                let common: Vec<Vertex> = g
                    .edge(e1)
                    .iter()
                    .copied()
                    .filter(|v| g.edge(e2).contains(v))
                    .collect();
                out.push(Diamond {
                    e1,
                    e2,
                    core: VertexPair::new(common[0], common[1]).expect("distinct"),
                });
            }
        }
    }
    out
}

/// Whether each edge of `d` meets `V(F∖D)` in exactly one vertex.
pub fn flexible_diamond(f: &EdgeSubset<'_>, d: &Diamond) -> Result<bool> {
    if !f.contains(d.e1) || !f.contains(d.e2) || d.e1 == d.e2 {
        return Err(Error::DiamondNotInF);
    }
    let g = f.graph();
    let rest = EdgeSubset::new(g, vec![d.e1, d.e2])
        .map(|dd| f.minus(&dd))?
        .vertices();
    Ok([d.e1, d.e2]
        .iter()
        .all(|&e| g.mask(e).intersection_len(&rest) == 1))
}

/// Whether picking one element from each set can sum to exactly `target`.
pub fn sumset_hits(sets: &[Vec<usize>], target: usize) -> bool {
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for set in sets {
        let mut next = vec![false; target + 1];
        for (s, _) in reach.iter().enumerate().filter(|(_, &on)| on) {
            for &c in set {
                if s + c <= target {
                    next[s + c] = true;
                }
            }
        }
        reach = next;
    }
    reach[target]
}

/// 1- and 2-claims of an edge set, answered without search.
///
/// Two edges `e, f` together with `xy` span at most `2r − 2` vertices only
/// when `|e ∩ f| ≥ 2`, so it suffices to keep the unions of such edge pairs
/// with their slack `2r − 2 − |e ∪ f|`.
#[derive(Clone, Debug)]
pub struct LowClaims {
    r: usize,
    edges: Vec<usize>,
    one: BTreeSet<VertexPair>,
    unions: Vec<(BitSet, usize)>,
}

impl LowClaims {
    pub fn new(g: &HyperGraph, edges: &[usize]) -> Self {
        let mut lc = LowClaims {
            r: g.r(),
            edges: Vec::new(),
            one: BTreeSet::new(),
            unions: Vec::new(),
        };
        for &e in edges {
            lc.push(g, e);
        }
        lc
    }

    fn push(&mut self, g: &HyperGraph, e: usize) {
        self.one.extend(pairs_of(g.edge(e)));
        for &f in &self.edges {
            let u = g.mask(e).union_len(g.mask(f));
            if u <= 2 * self.r - 2 {
                let mut m = g.mask(e).clone();
                m.union_with(g.mask(f));
                self.unions.push((m, 2 * self.r - 2 - u));
            }
        }
        self.edges.push(e);
    }

    /// Absorbs the edges of `other`.
    pub fn absorb(&mut self, g: &HyperGraph, other: &LowClaims) {
        for &e in &other.edges {
            self.push(g, e);
        }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn one(&self, xy: VertexPair) -> bool {
        self.one.contains(&xy)
    }

    pub fn two(&self, xy: VertexPair) -> bool {
        self.unions.iter().any(|(u, slack)| {
            let missing = usize::from(!u.contains(xy.u() as usize))
                + usize::from(!u.contains(xy.v() as usize));
            missing <= *slack
        })
    }

    /// `P_1`, sorted.
    pub fn p1(&self) -> &BTreeSet<VertexPair> {
        &self.one
    }

    /// `P_{1̄2}` over the given vertex domain.
    pub fn p12(&self, domain: &[Vertex]) -> BTreeSet<VertexPair> {
        pairs_of(domain)
            .filter(|&p| !self.one(p) && self.two(p))
            .collect()
    }

    /// 2-claimed pairs of the domain, sorted.
    pub fn p2(&self, domain: &[Vertex]) -> BTreeSet<VertexPair> {
        pairs_of(domain).filter(|&p| self.two(p)).collect()
    }
}
