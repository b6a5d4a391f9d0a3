//! Pair weights over 𝓜₂ and the edge-count certificate they imply.
//!
//! Inside a 2-cluster `F` a pair weighs 1 if `F` 1-claims it, `2/(k−2)` if
//! `F` 2-claims but does not 1-claim it, and 0 otherwise. If every pair
//! collects total weight at most 1 and every cluster collects at least
//! `C(r,2)·|F|`, then `|G| ≤ C(n,2) / C(r,2)`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::claims::LowClaims;
use crate::configs::Freeness;
use crate::error::{Error, Result};
use crate::graph::{pairs_of, EdgeSubset, HyperGraph, Vertex, VertexPair};
use crate::merging::{merge_1, merge_12, sumset_law, Partition, Stage, SumSetReport};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWeight {
    pub pair: VertexPair,
    pub weight: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterWeights {
    pub edges: Vec<usize>,
    /// Nonzero weights only, by pair.
    pub pairs: Vec<PairWeight>,
    pub weight_total: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightCertificate {
    pub n: usize,
    pub r: usize,
    pub k: usize,
    pub clusters: Vec<ClusterWeights>,
    /// `w(xy)` for every pair with nonzero total, by pair.
    pub pairs: Vec<PairWeight>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertReport {
    pub pair_lemma_ok: bool,
    pub cluster_lemma_ok: bool,
    /// `2(r−2)² ≥ 3k − 8`.
    pub r_threshold_ok: bool,
    pub bound: Rational,
    pub edges: usize,
    pub holds: bool,
    pub pair_violations: Vec<PairWeight>,
    /// Indices into the certificate's cluster list.
    pub cluster_violations: Vec<usize>,
}

/// Certification needs an even `k ≥ 4`.
pub fn check_k(k: usize) -> Result<()> {
    if k % 2 == 1 {
        return Err(Error::OddK(k));
    }
    if k < 4 {
        return Err(Error::KTooSmall(k));
    }
    Ok(())
}

/// Integer form of `r ≥ 2 + √(3k/2 − 4)`.
pub fn r_threshold(r: usize, k: usize) -> bool {
    let d = r as i64 - 2;
    2 * d * d >= 3 * k as i64 - 8
}

fn binom2(x: usize) -> i64 {
    (x * x.saturating_sub(1) / 2) as i64
}

/// `C(n,2) / C(r,2)`.
pub fn edge_bound(n: usize, r: usize) -> Rational {
    Rational::new(binom2(n), binom2(r))
}

fn cluster_weights(g: &HyperGraph, k: usize, edges: &[usize]) -> Result<ClusterWeights> {
    let sub = EdgeSubset::new(g, edges.to_vec())?;
    let lc = LowClaims::new(g, sub.indices());
    let two = Rational::new(2, k as i64 - 2);
    let domain: Vec<Vertex> = sub.vertex_list();
    let pairs: Vec<PairWeight> = pairs_of(&domain)
        .filter_map(|p| {
            let w = if lc.one(p) {
                Rational::one()
            } else if lc.two(p) {
                two
            } else {
                return None;
            };
            Some(PairWeight { pair: p, weight: w })
        })
        .collect();
    let weight_total = pairs.iter().map(|p| p.weight).sum();
    Ok(ClusterWeights {
        edges: sub.indices().to_vec(),
        pairs,
        weight_total,
    })
}

/// Weights `w_F(xy)` for every part of `m2`, with cluster and pair totals.
pub fn assign_weights(
    g: &HyperGraph,
    k: usize,
    m2: &Partition,
    freeness: Freeness,
) -> Result<WeightCertificate> {
    check_k(k)?;
    freeness.expect_k(k)?;
    m2.validate(g.len())?;
    if m2.stage != Stage::M2 {
        return Err(Error::InvalidParameter(
            "weights are defined over the 2-cluster partition".into(),
        ));
    }
    let clusters: Vec<ClusterWeights> = m2
        .parts
        .par_iter()
        .map(|p| cluster_weights(g, k, p))
        .collect::<Result<_>>()?;
    let mut totals: BTreeMap<VertexPair, Rational> = BTreeMap::new();
    for c in &clusters {
        for pw in &c.pairs {
            *totals.entry(pw.pair).or_default() += pw.weight;
        }
    }
    Ok(WeightCertificate {
        n: g.n(),
        r: g.r(),
        k,
        clusters,
        pairs: totals
            .into_iter()
            .map(|(pair, weight)| PairWeight { pair, weight })
            .collect(),
    })
}

/// Recomputes the certificate from `g`, then checks both weight lemmas and
/// the resulting edge bound.
pub fn verify_certificate(
    g: &HyperGraph,
    k: usize,
    cert: &WeightCertificate,
    freeness: Freeness,
) -> Result<CertReport> {
    check_k(k)?;
    if (cert.n, cert.r, cert.k) != (g.n(), g.r(), k) {
        return Err(Error::CertMismatch(format!(
            "certificate is for n={}, r={}, k={}",
            cert.n, cert.r, cert.k
        )));
    }
    let (m1, _) = merge_1(g);
    let (m2, _) = merge_12(g, k, &m1, freeness)?;
    let fresh = assign_weights(g, k, &m2, freeness)?;
    if fresh != *cert {
        return Err(Error::CertMismatch(
            "weights differ from those recomputed from the graph".into(),
        ));
    }
    let per_edge = Rational::from_int(binom2(g.r()));
    let pair_violations: Vec<PairWeight> = cert
        .pairs
        .iter()
        .filter(|p| p.weight > Rational::one())
        .cloned()
        .collect();
    let cluster_violations: Vec<usize> = cert
        .clusters
        .iter()
        .enumerate()
        .filter(|(_, c)| c.weight_total < per_edge * Rational::from_int(c.edges.len() as i64))
        .map(|(i, _)| i)
        .collect();
    let bound = edge_bound(g.n(), g.r());
    let holds = Rational::from_int(g.len() as i64) <= bound;
    let report = CertReport {
        pair_lemma_ok: pair_violations.is_empty(),
        cluster_lemma_ok: cluster_violations.is_empty(),
        r_threshold_ok: r_threshold(g.r(), k),
        bound,
        edges: g.len(),
        holds,
        pair_violations,
        cluster_violations,
    };
    debug_assert!(!(report.pair_lemma_ok && report.cluster_lemma_ok) || report.holds);
    Ok(report)
}

/// Full pipeline: 𝓜₁, 𝓜₂, weights and their verification.
pub fn certify(
    g: &HyperGraph,
    k: usize,
    freeness: Freeness,
) -> Result<(Partition, WeightCertificate, CertReport)> {
    check_k(k)?;
    let (m1, _) = merge_1(g);
    let (m2, _) = merge_12(g, k, &m1, freeness)?;
    let cert = assign_weights(g, k, &m2, freeness)?;
    let report = verify_certificate(g, k, &cert, freeness)?;
    Ok((m2, cert, report))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub pairs_checked: usize,
    /// Pairs 1-claimed by one part and also claimed at level 1 or 2 by
    /// another.
    pub one_claim_conflicts: Vec<VertexPair>,
    /// Pairs with no 1-claimer and at least one 2-claimer.
    pub level2_pairs: usize,
    pub max_two_claimers: usize,
    /// Pairs with more than `(k−2)/2` 2-claimers and no 1-claimer.
    pub two_claimer_violations: Vec<(VertexPair, usize)>,
    pub sumset: SumSetReport,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.one_claim_conflicts.is_empty()
            && self.two_claimer_violations.is_empty()
            && self.sumset.violations.is_empty()
    }
}

/// Checks how 2-clusters share pairs: no pair is 1-claimed by one cluster
/// and claimed by another, at most `(k−2)/2` clusters 2-claim a pair nobody
/// 1-claims, and per-pair claim sums avoid `k`.
pub fn pair_interaction_audit(
    g: &HyperGraph,
    k: usize,
    m2: &Partition,
    freeness: Freeness,
    budget: &Budget,
) -> Result<AuditReport> {
    check_k(k)?;
    freeness.expect_k(k)?;
    m2.validate(g.len())?;
    let parts: Vec<LowClaims> = m2.parts.iter().map(|p| LowClaims::new(g, p)).collect();
    let all: Vec<Vertex> = (0..g.n() as Vertex).filter(|&v| g.degree(v) > 0).collect();
    let cap = (k - 2) / 2;
    let mut rep = AuditReport::default();
    for p in pairs_of(&all) {
        rep.pairs_checked += 1;
        let ones = parts.iter().filter(|c| c.one(p)).count();
        let twos = parts.iter().filter(|c| c.two(p)).count();
        let claimers = parts.iter().filter(|c| c.one(p) || c.two(p)).count();
        if ones >= 1 && claimers > 1 {
            rep.one_claim_conflicts.push(p);
        }
        if ones == 0 && twos > 0 {
            rep.level2_pairs += 1;
            rep.max_two_claimers = rep.max_two_claimers.max(twos);
            if twos > cap {
                rep.two_claimer_violations.push((p, twos));
            }
        }
    }
    rep.sumset = sumset_law(g, k, m2, budget)?;
    Ok(rep)
}
