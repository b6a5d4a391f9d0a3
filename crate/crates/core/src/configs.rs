//! Detection of (s,k)-configurations and 𝒢ₖ-freeness.
//!
//! An (s,k)-configuration is a set of `k` edges spanning at most `s`
//! vertices. 𝒢ₖ collects the k-configurations (`s = (r−2)k+2`) together with
//! the ℓ⁻-configurations (`s = (r−2)ℓ+1`) for every `2 ≤ ℓ ≤ k−1`.
//!
//! A smallest member of 𝒢ₖ inside any graph is vertex-connected: splitting
//! it into two vertex-disjoint parts leaves one part so dense that it is a
//! smaller ℓ⁻-configuration. The freeness checks therefore walk sizes in
//! increasing order and only grow connected edge sets, which is exact and
//! much cheaper than the general search behind [`contains_config`].

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::graph::{HyperGraph, Vertex};
use crate::spansearch::SpanSearch;

/// Below this many anchor edges the search stays on the calling thread.
const PAR_THRESHOLD: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Family {
    pub s: usize,
    pub k: usize,
}

impl Family {
    /// The k-configuration family `((r−2)k+2, k)`.
    pub fn k_config(r: usize, k: usize) -> Self {
        Family {
            s: (r - 2) * k + 2,
            k,
        }
    }

    /// The ℓ⁻-configuration family `((r−2)ℓ+1, ℓ)`.
    pub fn minus_config(r: usize, l: usize) -> Self {
        Family {
            s: (r - 2) * l + 1,
            k: l,
        }
    }

    /// Members of 𝒢ₖ in the order they are checked: ℓ⁻ for ℓ = 2..k−1, then k.
    pub fn gk_members(r: usize, k: usize) -> Vec<Family> {
        (2..k)
            .map(|l| Self::minus_config(r, l))
            .chain(std::iter::once(Self::k_config(r, k)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigWitness {
    /// Sorted edge indices.
    pub edge_indices: Vec<usize>,
    pub span: usize,
}

/// JSON shape: `{"family": {"s": .., "k": ..}, "edges": [..], "span": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub family: Family,
    pub edges: Vec<usize>,
    pub span: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreenessReport {
    pub free: bool,
    pub violation: Option<Violation>,
}

impl FreenessReport {
    fn free() -> Self {
        FreenessReport {
            free: true,
            violation: None,
        }
    }

    fn violated(family: Family, w: ConfigWitness) -> Self {
        FreenessReport {
            free: false,
            violation: Some(Violation {
                family,
                edges: w.edge_indices,
                span: w.span,
            }),
        }
    }
}

/// Evidence, required by merging and certification, that a graph was
/// checked 𝒢ₖ-free for a given `k` or that the caller waived the check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Freeness {
    k: usize,
    verified: bool,
}

impl Freeness {
    /// Runs [`is_gk_free`] and fails with [`Error::NotFree`] on a violation.
    pub fn verify(g: &HyperGraph, k: usize, budget: &Budget) -> Result<Self> {
        let rep = is_gk_free(g, k, budget)?;
        match rep.violation {
            None => Ok(Freeness { k, verified: true }),
            Some(v) => Err(Error::NotFree(format!(
                "edges {:?} span {} <= {} ({}-edge member of G_{k})",
                v.edges, v.span, v.family.s, v.family.k
            ))),
        }
    }

    /// Skips the check. Results on non-free graphs carry no guarantees.
    pub fn waived(k: usize) -> Self {
        Freeness { k, verified: false }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub(crate) fn expect_k(&self, k: usize) -> Result<()> {
        if self.k == k {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "freeness was established for k = {}, not k = {k}",
                self.k
            )))
        }
    }
}

fn span_with(g: &HyperGraph, edges: &[usize], extra: Option<&BitSet>) -> usize {
    let mut u = BitSet::with_capacity(g.n());
    for &e in edges {
        u.union_with(g.mask(e));
    }
    if let Some(x) = extra {
        u.union_with(x);
    }
    u.len()
}

/// Runs `search(anchor)` over every edge as anchor and returns the result of
/// the lowest anchor that produced one.
fn first_anchor<F>(m: usize, search: F) -> Result<Option<Vec<usize>>>
where
    F: Fn(usize) -> Result<Option<Vec<usize>>> + Sync,
{
    let lift = |a: usize| match search(a) {
        Ok(Some(w)) => Some(Ok(w)),
        Ok(None) => None,
        Err(e) => Some(Err(e)),
    };
    let hit = if m < PAR_THRESHOLD {
        (0..m).find_map(lift)
    } else {
        (0..m).into_par_iter().find_map_first(lift)
    };
    hit.transpose()
}

fn witness(g: &HyperGraph, mut edges: Vec<usize>, extra: Option<&BitSet>) -> ConfigWitness {
    let span = span_with(g, &edges, extra);
    edges.sort_unstable();
    ConfigWitness {
        edge_indices: edges,
        span,
    }
}

/// Some `k` distinct edges spanning at most `s` vertices, if any exist.
pub fn contains_config(
    g: &HyperGraph,
    s: usize,
    k: usize,
    budget: &Budget,
) -> Result<Option<ConfigWitness>> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if s < g.r() {
        return Err(Error::InvalidParameter(format!(
            "s = {s} is below the uniformity r = {}",
            g.r()
        )));
    }
    if k > g.len() {
        return Ok(None);
    }
    let found = first_anchor(g.len(), |a| {
        let search = SpanSearch {
            g,
            allowed: None,
            min_index: Some(a),
            connected: false,
            s,
            budget,
        };
        Ok(search.find(g.mask(a), k - 1)?.map(|mut rest| {
            rest.push(a);
            rest
        }))
    })?;
    Ok(found.map(|edges| witness(g, edges, None)))
}

fn connected_config(
    g: &HyperGraph,
    family: Family,
    budget: &Budget,
) -> Result<Option<ConfigWitness>> {
    if family.k > g.len() {
        return Ok(None);
    }
    let found = first_anchor(g.len(), |a| {
        let search = SpanSearch {
            g,
            allowed: None,
            min_index: Some(a),
            connected: true,
            s: family.s,
            budget,
        };
        Ok(search.find(g.mask(a), family.k - 1)?.map(|mut rest| {
            rest.push(a);
            rest
        }))
    })?;
    Ok(found.map(|edges| witness(g, edges, None)))
}

/// Decides 𝒢ₖ-freeness; a violation names the smallest violated member.
pub fn is_gk_free(g: &HyperGraph, k: usize, budget: &Budget) -> Result<FreenessReport> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    for family in Family::gk_members(g.r(), k) {
        if let Some(w) = connected_config(g, family, budget)? {
            return Ok(FreenessReport::violated(family, w));
        }
    }
    Ok(FreenessReport::free())
}

fn check_new_edge(g: &HyperGraph, new_edge: &[Vertex]) -> Result<BitSet> {
    let mut e = new_edge.to_vec();
    e.sort_unstable();
    e.dedup();
    if e.len() != g.r() || e.iter().any(|&v| v as usize >= g.n()) {
        return Err(Error::InvalidParameter(format!(
            "{new_edge:?} is not an r-set of vertices below {}",
            g.n()
        )));
    }
    if g.contains_edge(&e) {
        return Err(Error::InvalidParameter(format!(
            "{new_edge:?} is already an edge"
        )));
    }
    Ok(g.vertex_mask(&e))
}

/// 𝒢ₖ-freeness of `G + new_edge` for a 𝒢ₖ-free `G`, looking only at
/// edge sets through the new edge. In a violation the new edge has index
/// `G.len()`.
pub fn incremental_free_check(
    g: &HyperGraph,
    new_edge: &[Vertex],
    k: usize,
    budget: &Budget,
) -> Result<FreenessReport> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let start = check_new_edge(g, new_edge)?;
    for family in Family::gk_members(g.r(), k) {
        let search = SpanSearch {
            g,
            allowed: None,
            min_index: None,
            connected: true,
            s: family.s,
            budget,
        };
        if let Some(mut rest) = search.find(&start, family.k - 1)? {
            let span = span_with(g, &rest, Some(&start));
            rest.sort_unstable();
            rest.push(g.len());
            return Ok(FreenessReport::violated(
                family,
                ConfigWitness {
                    edge_indices: rest,
                    span,
                },
            ));
        }
    }
    Ok(FreenessReport::free())
}

/// Whether `G + new_edge` contains a `(s,k)`-configuration through the new
/// edge (no connectivity assumption; used for plain ℱ(s,k) searches).
pub fn new_edge_creates_config(
    g: &HyperGraph,
    new_edge: &[Vertex],
    s: usize,
    k: usize,
    budget: &Budget,
) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let start = check_new_edge(g, new_edge)?;
    if s < g.r() {
        return Ok(false);
    }
    let search = SpanSearch {
        g,
        allowed: None,
        min_index: None,
        connected: false,
        s,
        budget,
    };
    Ok(search.find(&start, k - 1)?.is_some())
}
