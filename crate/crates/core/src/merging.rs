//! 1-clusters, 2-clusters and the structural laws they obey.
//!
//! 𝓜₁ groups edges into the components of the "share at least two
//! vertices" relation. 𝓜₂ starts from 𝓜₁ and keeps merging two parts
//! whenever one 1-claims a pair that the other 2-claims.
//!
//! Part ids in a [`MergeLog`] are positions in its starting partition; when
//! two parts merge, the smaller id survives.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::claims::{claim_set, sumset_hits, LowClaims};
use crate::configs::Freeness;
use crate::error::{Error, Result};
use crate::graph::{EdgeSubset, HyperGraph, Vertex, VertexPair};

/// Largest number of 1-clusters the Property ℙ search accepts in one part.
pub const PROPERTY_P_CAP: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Trivial,
    M1,
    M2,
    Partial,
}

/// Disjoint parts covering every edge; each part sorted, parts ordered by
/// their smallest edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub parts: Vec<Vec<usize>>,
    pub stage: Stage,
}

impl Partition {
    pub fn trivial(edges: usize) -> Self {
        Partition {
            parts: (0..edges).map(|e| vec![e]).collect(),
            stage: Stage::Trivial,
        }
    }

    fn normalised(mut parts: Vec<Vec<usize>>, stage: Stage) -> Self {
        for p in &mut parts {
            p.sort_unstable();
        }
        parts.sort();
        Partition { parts, stage }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Checks disjointness, coverage and non-empty parts.
    pub fn validate(&self, edges: usize) -> Result<()> {
        let mut seen = vec![false; edges];
        for p in &self.parts {
            if p.is_empty() {
                return Err(Error::InvalidParameter("empty part".into()));
            }
            for &e in p {
                if e >= edges || std::mem::replace(&mut seen[e], true) {
                    return Err(Error::InvalidParameter(format!(
                        "edge {e} repeated or out of range"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidParameter("partition misses an edge".into()));
        }
        Ok(())
    }
}

/// Which side 1-claims the via pair: `OneTwo` means `part_a` 1-claims it
/// and `part_b` 2-claims it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MergeMode {
    #[serde(rename = "1|1")]
    OneOne,
    #[serde(rename = "1|2")]
    OneTwo,
    #[serde(rename = "2|1")]
    TwoOne,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeEvent {
    pub part_a: usize,
    pub part_b: usize,
    pub via: VertexPair,
    pub mode: MergeMode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MergeLog {
    pub start: Partition,
    pub events: Vec<MergeEvent>,
    /// Stage of the partition the log ends in.
    pub stage: Stage,
}

impl MergeLog {
    /// For each surviving starting id, the absorbed starting ids in log order.
    fn groups(&self) -> Result<Vec<(usize, Vec<usize>)>> {
        let mut groups: Vec<Option<Vec<usize>>> =
            (0..self.start.len()).map(|i| Some(vec![i])).collect();
        for ev in &self.events {
            if ev.part_a >= ev.part_b || ev.part_b >= groups.len() {
                return Err(Error::UnknownPart(ev.part_b));
            }
            let b = groups[ev.part_b]
                .take()
                .ok_or(Error::UnknownPart(ev.part_b))?;
            groups[ev.part_a]
                .as_mut()
                .ok_or(Error::UnknownPart(ev.part_a))?
                .extend(b);
        }
        Ok(groups
            .into_iter()
            .enumerate()
            .filter_map(|(i, g)| g.map(|g| (i, g)))
            .collect())
    }

    /// Replays the events on the starting partition.
    pub fn replay(&self) -> Result<Partition> {
        let parts = self
            .groups()?
            .into_iter()
            .map(|(_, ids)| {
                ids.iter()
                    .flat_map(|&i| self.start.parts[i].iter().copied())
                    .collect()
            })
            .collect();
        Ok(Partition::normalised(parts, self.stage))
    }
}

/// Sizes of the absorbed starting parts of one final part, in an order in
/// which each is mergeable with the union of those before it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterStats {
    pub composition: Vec<usize>,
    pub m: usize,
    pub size: usize,
    /// Edge sets of the absorbed parts, in composition order.
    pub clusters: Vec<Vec<usize>>,
}

impl ClusterStats {
    pub fn edges(&self) -> Vec<usize> {
        let mut e: Vec<usize> = self.clusters.iter().flatten().copied().collect();
        e.sort_unstable();
        e
    }
}

fn mergeable_12(a: &LowClaims, b: &LowClaims) -> bool {
    a.p1().iter().any(|&p| b.two(p)) || b.p1().iter().any(|&p| a.two(p))
}

fn mergeable_11(a: &LowClaims, b: &LowClaims) -> bool {
    a.p1().iter().any(|&p| b.one(p))
}

/// Orders `rest` so each cluster is mergeable with everything before it,
/// starting from `base`. Falls back to log order when no cluster fits,
/// which cannot happen for a replayed log.
fn greedy_extend(
    g: &HyperGraph,
    base: &mut LowClaims,
    rest: Vec<Vec<usize>>,
    one_one: bool,
) -> Vec<Vec<usize>> {
    let mut pending: Vec<(Vec<usize>, LowClaims)> = rest
        .into_iter()
        .map(|c| {
            let lc = LowClaims::new(g, &c);
            (c, lc)
        })
        .collect();
    let mut out = Vec::new();
    while !pending.is_empty() {
        let pick = pending
            .iter()
            .position(|(_, lc)| {
                if one_one {
                    mergeable_11(base, lc)
                } else {
                    mergeable_12(base, lc)
                }
            })
            .unwrap_or(0);
        let (c, lc) = pending.remove(pick);
        base.absorb(g, &lc);
        out.push(c);
    }
    out
}

/// Absorption order of every surviving group, keyed by its root id.
fn absorption_orders(g: &HyperGraph, log: &MergeLog) -> Result<Vec<(usize, Vec<Vec<usize>>)>> {
    log.groups()?;
    let one_one = log.stage != Stage::M2;
    let mut order: Vec<Option<Vec<Vec<usize>>>> = log
        .start
        .parts
        .iter()
        .map(|p| Some(vec![p.clone()]))
        .collect();
    for ev in &log.events {
        let b = order[ev.part_b].take().expect("checked by groups");
        let a = order[ev.part_a].as_mut().expect("checked by groups");
        let mut base = LowClaims::new(g, &a.iter().flatten().copied().collect::<Vec<_>>());
        let ext = greedy_extend(g, &mut base, b, one_one);
        a.extend(ext);
    }
    Ok(order
        .into_iter()
        .enumerate()
        .filter_map(|(i, o)| o.map(|o| (i, o)))
        .collect())
}

fn stats_of(clusters: Vec<Vec<usize>>) -> ClusterStats {
    let composition: Vec<usize> = clusters.iter().map(Vec::len).collect();
    ClusterStats {
        m: composition.len(),
        size: composition.iter().sum(),
        composition,
        clusters,
    }
}

/// Stats for every final part, in [`MergeLog::replay`] order.
pub fn all_cluster_stats(g: &HyperGraph, log: &MergeLog) -> Result<Vec<ClusterStats>> {
    let mut all: Vec<ClusterStats> = absorption_orders(g, log)?
        .into_iter()
        .map(|(_, c)| stats_of(c))
        .collect();
    all.sort_by_key(|s| s.edges());
    Ok(all)
}

/// Composition of the final part with index `part` (in [`MergeLog::replay`]
/// order).
pub fn cluster_stats(g: &HyperGraph, log: &MergeLog, part: usize) -> Result<ClusterStats> {
    let mut all = all_cluster_stats(g, log)?;
    if part >= all.len() {
        return Err(Error::UnknownPart(part));
    }
    Ok(all.swap_remove(part))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut x = x;
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

/// The 1-cluster partition 𝓜₁ with the merges that built it from single
/// edges.
pub fn merge_1(g: &HyperGraph) -> (Partition, MergeLog) {
    let m = g.len();
    let mut uf = UnionFind((0..m).collect());
    let mut pairs: Vec<(&VertexPair, &Vec<usize>)> = g.pair_index().iter().collect();
    pairs.sort_unstable_by_key(|(p, _)| **p);
    let mut events = Vec::new();
    for (&p, edges) in pairs {
        for &e in &edges[1..] {
            let (ra, rb) = (uf.find(edges[0]), uf.find(e));
            if ra != rb {
                let (lo, hi) = (ra.min(rb), ra.max(rb));
                uf.0[hi] = lo;
                events.push(MergeEvent {
                    part_a: lo,
                    part_b: hi,
                    via: p,
                    mode: MergeMode::OneOne,
                });
            }
        }
    }
    let log = MergeLog {
        start: Partition::trivial(m),
        events,
        stage: Stage::M1,
    };
    let part = log.replay().expect("log built from valid ids");
    (part, log)
}

struct Part {
    claims: LowClaims,
    vertices: BitSet,
    max_slack: usize,
}

impl Part {
    fn new(g: &HyperGraph, edges: &[usize]) -> Self {
        let sub = EdgeSubset::new(g, edges.to_vec()).expect("valid part");
        let r = g.r();
        let max_slack = edges
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| edges[i + 1..].iter().map(move |&f| (e, f)))
            .map(|(e, f)| (2 * r - 2).saturating_sub(g.mask(e).union_len(g.mask(f))))
            .max()
            .unwrap_or(0);
        Part {
            claims: LowClaims::new(g, edges),
            vertices: sub.vertices(),
            max_slack,
        }
    }

    fn absorb(&mut self, g: &HyperGraph, other: Part) {
        self.claims.absorb(g, &other.claims);
        self.vertices.union_with(&other.vertices);
        let fresh = Part::new(g, self.claims.edges());
        self.max_slack = fresh.max_slack;
    }
}

/// Smallest pair via which `a` and `b` are 1|2-mergeable, with the mode.
fn best_pair(a: &Part, b: &Part) -> Option<(VertexPair, MergeMode)> {
    let slack = a.max_slack.max(b.max_slack);
    if a.vertices.intersection_len(&b.vertices) + slack < 2 {
        return None;
    }
    let ab = a
        .claims
        .p1()
        .iter()
        .find(|&&p| b.claims.two(p))
        .map(|&p| (p, MergeMode::OneTwo));
    let ba = b
        .claims
        .p1()
        .iter()
        .find(|&&p| a.claims.two(p))
        .map(|&p| (p, MergeMode::TwoOne));
    match (ab, ba) {
        (Some(x), Some(y)) => Some(if y.0 < x.0 { y } else { x }),
        (x, y) => x.or(y),
    }
}

fn check_m1(g: &HyperGraph, m1: &Partition) -> Result<()> {
    if m1.stage != Stage::M1 || merge_1(g).0.parts != m1.parts {
        return Err(Error::NotM1Input);
    }
    Ok(())
}

/// 𝓜₂ with the merges that built it from 𝓜₁. Among all mergeable
/// `(part, part, pair)` triples the smallest is merged first.
pub fn merge_12(
    g: &HyperGraph,
    k: usize,
    m1: &Partition,
    freeness: Freeness,
) -> Result<(Partition, MergeLog)> {
    freeness.expect_k(k)?;
    check_m1(g, m1)?;
    run_12(g, m1, None)
}

/// Like [`merge_12`] but merges a uniformly random mergeable pair of parts
/// at every step.
pub fn merge_12_random(
    g: &HyperGraph,
    k: usize,
    m1: &Partition,
    freeness: Freeness,
    seed: u64,
) -> Result<(Partition, MergeLog)> {
    freeness.expect_k(k)?;
    check_m1(g, m1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run_12(g, m1, Some(&mut rng))
}

fn run_12(
    g: &HyperGraph,
    m1: &Partition,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<(Partition, MergeLog)> {
    let mut parts: Vec<Option<Part>> = m1.parts.iter().map(|p| Some(Part::new(g, p))).collect();
    let mut events = Vec::new();
    loop {
        let alive: Vec<usize> = (0..parts.len()).filter(|&i| parts[i].is_some()).collect();
        let pairs: Vec<(usize, usize)> = alive
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| alive[i + 1..].iter().map(move |&b| (a, b)))
            .collect();
        let found: Vec<(usize, usize, VertexPair, MergeMode)> = match rng {
            None => pairs
                .iter()
                .find_map(|&(a, b)| {
                    best_pair(parts[a].as_ref()?, parts[b].as_ref()?).map(|(p, m)| (a, b, p, m))
                })
                .into_iter()
                .collect(),
            Some(_) => pairs
                .par_iter()
                .filter_map(|&(a, b)| {
                    best_pair(parts[a].as_ref()?, parts[b].as_ref()?).map(|(p, m)| (a, b, p, m))
                })
                .collect(),
        };
        let Some(&(a, b, via, mode)) = (match rng.as_deref_mut() {
            None => found.first(),
            Some(r) => found.choose(r),
        }) else {
            break;
        };
        let pb = parts[b].take().expect("alive");
        parts[a].as_mut().expect("alive").absorb(g, pb);
        events.push(MergeEvent {
            part_a: a,
            part_b: b,
            via,
            mode,
        });
    }
    let log = MergeLog {
        start: m1.clone(),
        events,
        stage: Stage::M2,
    };
    let part = log.replay()?;
    Ok((part, log))
}

/// An order `X₁, …, X_s` of `F ∖ F₀` such that `F₀ ∪ {X₁..X_i}` stays
/// connected for every `i`.
pub fn trimming_order(f: &EdgeSubset<'_>, f0: &EdgeSubset<'_>) -> Result<Vec<usize>> {
    if !f0.is_subset_of(f) {
        return Err(Error::InvalidParameter("F0 is not contained in F".into()));
    }
    if f0.is_empty() || !f.is_connected() || !f0.is_connected() {
        return Err(Error::NotConnected);
    }
    let g = f.graph();
    let mut have: Vec<usize> = f0.indices().to_vec();
    let mut rest: Vec<usize> = f.minus(f0).indices().to_vec();
    let mut out = Vec::with_capacity(rest.len());
    while !rest.is_empty() {
        let pos = rest
            .iter()
            .position(|&e| {
                have.iter()
                    .any(|&h| g.mask(e).intersection_len(g.mask(h)) >= 2)
            })
            .ok_or(Error::NotConnected)?;
        let e = rest.remove(pos);
        have.push(e);
        out.push(e);
    }
    Ok(out)
}

/// A Property ℙ witness: 1-clusters `T₁..T_ℓ` merging in this order with
/// `|H| = k + 1` and flexible diamonds at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyPWitness {
    pub clusters: Vec<Vec<usize>>,
    pub h: Vec<usize>,
    /// Pair 1̄2-claimed by `T₁` and 1-claimed by `T₂`.
    pub first_pair: VertexPair,
    /// Pair 1̄2-claimed by `T_ℓ` and 1-claimed by `T_{ℓ−1}`.
    pub last_pair: VertexPair,
}

fn vertices_of(g: &HyperGraph, edges: impl IntoIterator<Item = usize>) -> BitSet {
    let mut s = BitSet::with_capacity(g.n());
    for e in edges {
        s.union_with(g.mask(e));
    }
    s
}

/// A pair 1̄2-claimed by `end` and 1-claimed by `next`.
fn bar12_link(end: &LowClaims, next: &LowClaims) -> Option<VertexPair> {
    next.p1()
        .iter()
        .copied()
        .find(|&p| !end.one(p) && end.two(p))
}

/// Whether the two-edge cluster `d` is a flexible diamond of `h` meeting
/// the rest of `h` in exactly two vertices.
fn flexible_end(g: &HyperGraph, d: &[usize], h: &[usize]) -> bool {
    if d.len() != 2 || g.mask(d[0]).intersection_len(g.mask(d[1])) != 2 {
        return false;
    }
    let rest = vertices_of(g, h.iter().copied().filter(|e| !d.contains(e)));
    d.iter().all(|&e| g.mask(e).intersection_len(&rest) == 1)
        && vertices_of(g, d.iter().copied()).intersection_len(&rest) == 2
}

struct PSearch<'a> {
    g: &'a HyperGraph,
    k: usize,
    clusters: &'a [Vec<usize>],
    claims: Vec<LowClaims>,
    want: usize,
    budget: &'a Budget,
}

impl PSearch<'_> {
    fn go(
        &self,
        seq: &mut Vec<usize>,
        used: &mut [bool],
        union: &LowClaims,
        size: usize,
    ) -> Result<Option<PropertyPWitness>> {
        self.budget.tick()?;
        if size == self.k + 1 {
            return Ok(self.finish(seq));
        }
        for c in 0..self.clusters.len() {
            let len = self.clusters[c].len();
            if used[c] || size + len > self.k + 1 {
                continue;
            }
            if seq.is_empty() {
                if len != 2 {
                    continue;
                }
            } else {
                if !mergeable_12(union, &self.claims[c]) {
                    continue;
                }
                if seq.len() == 1 && bar12_link(&self.claims[seq[0]], &self.claims[c]).is_none() {
                    continue;
                }
            }
            let mut next = union.clone();
            next.absorb(self.g, &self.claims[c]);
            used[c] = true;
            seq.push(c);
            let hit = self.go(seq, used, &next, size + len)?;
            seq.pop();
            used[c] = false;
            if hit.is_some() {
                return Ok(hit);
            }
        }
        Ok(None)
    }

    fn finish(&self, seq: &[usize]) -> Option<PropertyPWitness> {
        let l = seq.len();
        if l < 2 || !seq.contains(&self.want) {
            return None;
        }
        let (first, last) = (seq[0], seq[l - 1]);
        if self.clusters[last].len() != 2 {
            return None;
        }
        let mut h: Vec<usize> = seq.iter().flat_map(|&c| self.clusters[c].clone()).collect();
        h.sort_unstable();
        if !flexible_end(self.g, &self.clusters[first], &h)
            || !flexible_end(self.g, &self.clusters[last], &h)
        {
            return None;
        }
        let first_pair = bar12_link(&self.claims[first], &self.claims[seq[1]])?;
        let last_pair = bar12_link(&self.claims[last], &self.claims[seq[l - 2]])?;
        Some(PropertyPWitness {
            clusters: seq.iter().map(|&c| self.clusters[c].clone()).collect(),
            h,
            first_pair,
            last_pair,
        })
    }
}

/// Searches merge orders of the 1-clusters of a part for a Property ℙ
/// witness that includes the cluster `clusters[want]`.
pub fn check_property_p(
    g: &HyperGraph,
    k: usize,
    clusters: &[Vec<usize>],
    want: usize,
    budget: &Budget,
) -> Result<Option<PropertyPWitness>> {
    if want >= clusters.len() {
        return Err(Error::UnknownPart(want));
    }
    let size: usize = clusters.iter().map(Vec::len).sum();
    if size <= k {
        return Ok(None);
    }
    if clusters.len() > PROPERTY_P_CAP {
        return Err(Error::TooManyClusters {
            found: clusters.len(),
            cap: PROPERTY_P_CAP,
        });
    }
    let search = PSearch {
        g,
        k,
        clusters,
        claims: clusters.iter().map(|c| LowClaims::new(g, c)).collect(),
        want,
        budget,
    };
    let empty = LowClaims::new(g, &[]);
    search.go(&mut Vec::new(), &mut vec![false; clusters.len()], &empty, 0)
}

/// Whether every 1-cluster of the part lies in some Property ℙ witness.
pub fn satisfies_property_p(
    g: &HyperGraph,
    k: usize,
    clusters: &[Vec<usize>],
    budget: &Budget,
) -> Result<bool> {
    for t in 0..clusters.len() {
        if check_property_p(g, k, clusters, t, budget)?.is_none() {
            return Ok(false);
        }
    }
    Ok(!clusters.is_empty())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckMode {
    /// A failed check is an error: the input was verified free, so a
    /// failure points at a bug.
    Trusted,
    /// Failed checks are reported as findings.
    Audit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub edges: Vec<usize>,
    pub size: usize,
    pub m: usize,
    pub composition: Vec<usize>,
    /// `|F| ≠ k`.
    pub size_not_k: bool,
    /// Whether `|F| ≥ k + 1`, which arms the next check.
    pub large: bool,
    /// `|F| ≥ 2m − k + 3` (vacuously true unless `large`).
    pub merge_bound_ok: bool,
    pub p1: usize,
    pub p1_expected: usize,
    pub p1_ok: bool,
    pub p12: usize,
    pub p12_bound: i64,
    pub p12_ok: bool,
    pub max_one_cluster: usize,
    /// Every 1-cluster has at most `k − 1` edges.
    pub one_cluster_ok: bool,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.size_not_k && self.merge_bound_ok && self.p1_ok && self.p12_ok && self.one_cluster_ok
    }
}

/// Checks the counting and size laws on one 2-cluster.
pub fn verify_structure(
    g: &HyperGraph,
    k: usize,
    stats: &ClusterStats,
    mode: CheckMode,
) -> Result<StructureReport> {
    let r = g.r() as i64;
    let pairs_per_edge = r * (r - 1) / 2;
    let edges = stats.edges();
    let lc = LowClaims::new(g, &edges);
    let domain: Vec<Vertex> = vertices_of(g, edges.iter().copied())
        .iter()
        .map(|v| v as Vertex)
        .collect();
    let p1 = lc.p1().len();
    let p12 = lc.p12(&domain).len();
    let p1_expected: i64 = stats
        .composition
        .iter()
        .map(|&e| e as i64 * pairs_per_edge - e as i64 + 1)
        .sum();
    let p12_bound: i64 = 1 - stats.m as i64
        + stats
            .composition
            .iter()
            .map(|&e| (e as i64 - 1) * (r - 2) * (r - 2))
            .sum::<i64>();
    let size = stats.size;
    let large = size > k;
    let max_one_cluster = stats.composition.iter().copied().max().unwrap_or(0);
    let report = StructureReport {
        size,
        m: stats.m,
        composition: stats.composition.clone(),
        size_not_k: size != k,
        large,
        merge_bound_ok: !large || size as i64 >= 2 * stats.m as i64 - k as i64 + 3,
        p1,
        p1_expected: p1_expected as usize,
        p1_ok: p1 as i64 == p1_expected,
        p12,
        p12_bound,
        p12_ok: p12 as i64 >= p12_bound,
        max_one_cluster,
        one_cluster_ok: max_one_cluster < k,
        edges,
    };
    if mode == CheckMode::Trusted && !report.ok() {
        return Err(Error::StructureViolation(format!("{report:?}")));
    }
    Ok(report)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SumSetReport {
    pub pairs_checked: usize,
    /// Pairs with nonzero claims from at least two parts.
    pub shared_pairs: usize,
    pub violations: Vec<VertexPair>,
}

/// For every pair, the sums of one claim from each part (claims truncated
/// at `k`) never reach exactly `k`.
///
/// In a 𝒢ₖ-free graph a part only claims pairs inside its own vertex set
/// (a claim through an outside vertex would be a denser configuration), so
/// each pair is checked against the parts containing it.
pub fn sumset_law(
    g: &HyperGraph,
    k: usize,
    partition: &Partition,
    budget: &Budget,
) -> Result<SumSetReport> {
    let subsets: Vec<(EdgeSubset<'_>, BitSet)> = partition
        .parts
        .iter()
        .map(|p| {
            let s = EdgeSubset::new(g, p.clone())?;
            let v = s.vertices();
            Ok((s, v))
        })
        .collect::<Result<_>>()?;
    let all: Vec<Vertex> = (0..g.n() as Vertex).filter(|&v| g.degree(v) > 0).collect();
    let pairs: Vec<VertexPair> = crate::graph::pairs_of(&all).collect();
    let per_pair: Vec<(bool, bool)> = pairs
        .par_iter()
        .map(|&p| {
            let mut sets = Vec::new();
            for (s, v) in &subsets {
                if v.contains(p.u() as usize) && v.contains(p.v() as usize) {
                    let c = claim_set(s, p, k, budget)?;
                    if c.members.len() > 1 {
                        sets.push(c.members);
                    }
                }
            }
            Ok((sets.len() >= 2, sumset_hits(&sets, k)))
        })
        .collect::<Result<_>>()?;
    let mut rep = SumSetReport {
        pairs_checked: pairs.len(),
        ..Default::default()
    };
    for (p, (shared, hit)) in pairs.into_iter().zip(per_pair) {
        rep.shared_pairs += usize::from(shared);
        if hit {
            rep.violations.push(p);
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoEdgeReport {
    /// Prefixes found to satisfy Property ℙ and followed by another cluster.
    pub triggers: usize,
    /// Prefixes skipped because they exceed [`PROPERTY_P_CAP`].
    pub skipped: usize,
    /// `(part edges, prefix length, size of the next cluster)` for failures.
    pub violations: Vec<(Vec<usize>, usize, usize)>,
}

/// Walks each part's composition order and, whenever a prefix satisfies
/// Property ℙ, checks that the next absorbed 1-cluster has two edges.
pub fn two_edge_law(
    g: &HyperGraph,
    k: usize,
    stats: &[ClusterStats],
    budget: &Budget,
) -> Result<TwoEdgeReport> {
    let mut rep = TwoEdgeReport::default();
    for st in stats {
        let mut size = 0;
        for i in 0..st.clusters.len().saturating_sub(1) {
            size += st.clusters[i].len();
            if size <= k {
                continue;
            }
            let prefix = &st.clusters[..=i];
            if prefix.len() > PROPERTY_P_CAP {
                rep.skipped += 1;
                continue;
            }
            if satisfies_property_p(g, k, prefix, budget)? {
                rep.triggers += 1;
                let next = st.clusters[i + 1].len();
                if next != 2 {
                    rep.violations.push((st.edges(), i + 1, next));
                }
            }
        }
    }
    Ok(rep)
}

/// Merging number of every final part, keyed by its edge set.
pub fn merging_numbers(g: &HyperGraph, log: &MergeLog) -> Result<Vec<(Vec<usize>, usize)>> {
    Ok(all_cluster_stats(g, log)?
        .into_iter()
        .map(|s| (s.edges(), s.m))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configs::is_gk_free;
    use crate::fixtures;

    fn b() -> Budget {
        Budget::default()
    }

    fn pair(u: Vertex, v: Vertex) -> VertexPair {
        VertexPair::new(u, v).unwrap()
    }

    fn m2(g: &HyperGraph, k: usize) -> (Partition, MergeLog) {
        let (m1, _) = merge_1(g);
        merge_12(g, k, &m1, Freeness::waived(k)).unwrap()
    }

    #[test]
    fn merge_1_examples() {
        let g = HyperGraph::from_edges(8, 3, &[[0, 1, 2], [1, 2, 3], [5, 6, 7]]).unwrap();
        let (p, log) = merge_1(&g);
        assert_eq!(p.parts, vec![vec![0, 1], vec![2]]);
        assert_eq!(p.stage, Stage::M1);
        assert_eq!(log.replay().unwrap(), p);
        assert_eq!(log.events[0].via, pair(1, 2));

        let g = HyperGraph::from_edges(5, 3, &[[0, 1, 2], [2, 3, 4]]).unwrap();
        assert_eq!(merge_1(&g).0.len(), 2);

        let g = HyperGraph::from_edges(5, 3, &[[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
        assert_eq!(merge_1(&g).0.parts, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn merge_12_edge_and_diamond() {
        let g = fixtures::edge_and_diamond();
        let (m1, _) = merge_1(&g);
        assert_eq!(m1.parts, vec![vec![0], vec![1, 2]]);
        let (p, log) = merge_12(&g, 4, &m1, Freeness::verify(&g, 4, &b()).unwrap()).unwrap();
        assert_eq!(p.parts, vec![vec![0, 1, 2]]);
        assert_eq!(log.events.len(), 1);
        assert_eq!(log.events[0].via, pair(0, 1));
        assert_eq!(log.events[0].mode, MergeMode::OneTwo);
        let st = cluster_stats(&g, &log, 0).unwrap();
        assert_eq!(st.composition, vec![1, 2]);
        assert_eq!(st.m, 2);
        assert_eq!(st.size, 3);
    }

    #[test]
    fn merge_12_no_shared_pairs() {
        let g = HyperGraph::from_edges(6, 3, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        let (m1, _) = merge_1(&g);
        let (p, log) = merge_12(&g, 4, &m1, Freeness::waived(4)).unwrap();
        assert_eq!(p.parts, m1.parts);
        assert!(log.events.is_empty());

        let g = fixtures::sts7();
        let (p, _) = m2(&g, 4);
        assert_eq!(p.len(), 7);
    }

    #[test]
    fn merge_12_rejects_wrong_input() {
        let g = fixtures::edge_and_diamond();
        let trivial = Partition::trivial(3);
        assert_eq!(
            merge_12(&g, 4, &trivial, Freeness::waived(4)).map(|_| ()),
            Err(Error::NotM1Input)
        );
        let (m1, _) = merge_1(&g);
        assert!(merge_12(&g, 6, &m1, Freeness::waived(4)).is_err());
    }

    #[test]
    fn trimming_examples() {
        let g = HyperGraph::from_edges(5, 3, &[[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
        let f = g.all();
        let f0 = g.subset(&[2]).unwrap();
        assert_eq!(trimming_order(&f, &f0).unwrap(), vec![1, 0]);
        assert!(trimming_order(&f, &f).unwrap().is_empty());
        let h = HyperGraph::from_edges(6, 3, &[[0, 1, 2], [3, 4, 5]]).unwrap();
        assert_eq!(
            trimming_order(&h.all(), &h.subset(&[0]).unwrap()),
            Err(Error::NotConnected)
        );
    }

    #[test]
    fn composition_bookkeeping() {
        let g = HyperGraph::from_edges(5, 3, &[[0, 1, 2], [1, 2, 3], [0, 3, 4]]).unwrap();
        let log = MergeLog {
            start: Partition {
                parts: vec![vec![0], vec![1], vec![2]],
                stage: Stage::Partial,
            },
            events: vec![],
            stage: Stage::Partial,
        };
        assert_eq!(cluster_stats(&g, &log, 1).unwrap().composition, vec![1]);
        assert_eq!(cluster_stats(&g, &log, 3), Err(Error::UnknownPart(3)));
    }

    #[test]
    fn property_p_on_capped_chain() {
        let g = fixtures::capped_chain();
        assert!(is_gk_free(&g, 6, &b()).unwrap().free);
        let (p, log) = m2(&g, 6);
        assert_eq!(p.len(), 1);
        let st = cluster_stats(&g, &log, 0).unwrap();
        assert_eq!(st.m, 3);
        assert_eq!(st.size, 7);
        for t in 0..st.clusters.len() {
            let w = check_property_p(&g, 6, &st.clusters, t, &b())
                .unwrap()
                .unwrap();
            assert_eq!(w.h.len(), 7);
            assert_eq!(w.clusters.first().unwrap().len(), 2);
            assert_eq!(w.clusters.last().unwrap().len(), 2);
        }
        assert!(satisfies_property_p(&g, 6, &st.clusters, &b()).unwrap());
        let rep = verify_structure(&g, 6, &st, CheckMode::Trusted).unwrap();
        assert!(rep.large && rep.merge_bound_ok);
    }

    #[test]
    fn property_p_needs_diamond_ends() {
        let g = fixtures::uncapped_chain();
        let (p, log) = m2(&g, 6);
        assert_eq!(p.len(), 1);
        let st = cluster_stats(&g, &log, 0).unwrap();
        assert_eq!(st.size, 7);
        for t in 0..st.clusters.len() {
            assert!(check_property_p(&g, 6, &st.clusters, t, &b())
                .unwrap()
                .is_none());
        }
    }

    #[test]
    fn property_p_small_part_is_none() {
        let g = fixtures::edge_and_diamond();
        let (_, log) = m2(&g, 4);
        let st = cluster_stats(&g, &log, 0).unwrap();
        assert!(check_property_p(&g, 4, &st.clusters, 0, &b())
            .unwrap()
            .is_none());
    }

    #[test]
    fn structure_examples() {
        let g = fixtures::edge_and_diamond();
        let (_, log) = m2(&g, 4);
        let st = cluster_stats(&g, &log, 0).unwrap();
        let rep = verify_structure(&g, 4, &st, CheckMode::Trusted).unwrap();
        assert_eq!(rep.p1, 8);
        assert_eq!(rep.p1_expected, 8);
        assert_eq!(rep.p12, 0);
        assert_eq!(rep.p12_bound, 0);
        assert!(rep.ok());

        let single = fixtures::single_edge(5);
        let (_, log) = m2(&single, 4);
        let st = cluster_stats(&single, &log, 0).unwrap();
        let rep = verify_structure(&single, 4, &st, CheckMode::Audit).unwrap();
        assert_eq!(rep.p1, 10);
        assert_eq!(rep.p12_bound, 0);
    }

    #[test]
    fn trusted_mode_escalates() {
        // a 3-configuration for k = 3: three edges on five vertices
        let g = HyperGraph::from_edges(5, 3, &[[0, 1, 2], [1, 2, 3], [2, 3, 4]]).unwrap();
        let (_, log) = m2(&g, 3);
        let st = cluster_stats(&g, &log, 0).unwrap();
        assert!(!verify_structure(&g, 3, &st, CheckMode::Audit).unwrap().ok());
        assert!(matches!(
            verify_structure(&g, 3, &st, CheckMode::Trusted),
            Err(Error::StructureViolation(_))
        ));
    }

    #[test]
    fn sumset_law_on_examples() {
        let g = fixtures::twin_diamonds();
        let (p, _) = m2(&g, 6);
        let rep = sumset_law(&g, 6, &p, &b()).unwrap();
        assert!(rep.violations.is_empty());
        assert!(rep.shared_pairs >= 1);
    }

    #[test]
    fn random_orders_agree_on_small_example() {
        let g = fixtures::capped_chain();
        let (m1, _) = merge_1(&g);
        let (p0, _) = merge_12(&g, 6, &m1, Freeness::waived(6)).unwrap();
        for seed in 0..5 {
            let (p, log) = merge_12_random(&g, 6, &m1, Freeness::waived(6), seed).unwrap();
            assert_eq!(p, p0);
            assert_eq!(log.replay().unwrap(), p);
        }
    }
}
