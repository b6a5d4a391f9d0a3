//! Exact small-n extremal numbers, packings and random free instances.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::canon::{canonical_form, CanonicalLabel, CANON_LIMIT};
use crate::claims::{pair_family, PairKind};
use crate::configs::{incremental_free_check, is_gk_free, new_edge_creates_config, FreenessReport};
use crate::error::{Error, Result};
use crate::graph::{HyperGraph, Vertex};
use crate::rational::Rational;

/// Consecutive rejected proposals after which the random generator stops.
pub const DEFAULT_MAX_REJECTIONS: usize = 400;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub value: usize,
    pub witness: HyperGraph,
    pub nodes_explored: u64,
    /// False when the budget ran out; `value` is then a verified lower bound.
    pub exact: bool,
}

/// One row of the results table `n,r,s,k,value,exact,nodes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    pub r: usize,
    pub s: usize,
    pub k: usize,
    pub value: usize,
    pub exact: bool,
    pub nodes: u64,
}

impl From<&ExtremalRecord> for TableRow {
    fn from(rec: &ExtremalRecord) -> Self {
        TableRow {
            n: rec.n,
            r: rec.r,
            s: rec.s,
            k: rec.k,
            value: rec.value,
            exact: rec.exact,
            nodes: rec.nodes_explored,
        }
    }
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn all_r_sets(n: usize, r: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut cur: Vec<Vertex> = Vec::with_capacity(r);
    fn rec(n: usize, r: usize, from: usize, cur: &mut Vec<Vertex>, out: &mut Vec<Vec<Vertex>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for v in from..n {
            if n - v < r - cur.len() {
                break;
            }
            cur.push(v as Vertex);
            rec(n, r, v + 1, cur, out);
            cur.pop();
        }
    }
    rec(n, r, 0, &mut cur, &mut out);
    out
}

fn with_edge(g: &HyperGraph, e: &[Vertex]) -> HyperGraph {
    let mut h = g.clone();
    h.add_edge(e).expect("new edge checked by caller");
    h
}

/// `f^(r)(n; s, k)`: the largest ℱ(s,k)-free r-graph on `n` vertices.
///
/// Free graphs are generated one edge at a time, level by level, keeping a
/// single representative per isomorphism class. Every free graph with
/// `m + 1` edges loses an edge to a free graph with `m` edges, so the levels
/// reach every class and the last nonempty level is the answer.
pub fn search_extremal(
    n: usize,
    r: usize,
    s: usize,
    k: usize,
    budget: &Budget,
) -> Result<ExtremalRecord> {
    if n < r || r < 2 {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= r <= n (r={r}, n={n})"
        )));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if n > CANON_LIMIT {
        return Err(Error::TooLarge {
            n,
            limit: CANON_LIMIT,
        });
    }
    let candidates = all_r_sets(n, r);
    let nodes = AtomicU64::new(0);
    let empty = HyperGraph::new(n, r)?;
    let mut level: BTreeSet<CanonicalLabel> = BTreeSet::from([canonical_form(&empty)?]);
    let mut best = level.first().cloned().expect("one graph");
    let mut exact = true;
    let inner = Budget::unlimited();
    loop {
        let step: Result<Vec<Vec<CanonicalLabel>>> = level
            .par_iter()
            .map(|label| {
                let g = label.to_graph();
                let mut out = Vec::new();
                for e in &candidates {
                    if g.contains_edge(e) {
                        continue;
                    }
                    budget.tick()?;
                    nodes.fetch_add(1, Ordering::Relaxed);
                    if !new_edge_creates_config(&g, e, s, k, &inner)? {
                        out.push(canonical_form(&with_edge(&g, e))?);
                    }
                }
                Ok(out)
            })
            .collect();
        match step {
            Ok(children) => {
                let next: BTreeSet<CanonicalLabel> = children.into_iter().flatten().collect();
                match next.first() {
                    Some(l) => best = l.clone(),
                    None => break,
                }
                level = next;
            }
            Err(Error::BudgetExceeded(_)) => {
                exact = false;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    let mut witness = best.to_graph();
    if !exact {
        witness = polish(&witness, s, k, 0, 200)?;
    }
    Ok(ExtremalRecord {
        n,
        r,
        s,
        k,
        value: witness.len(),
        witness,
        nodes_explored: nodes.load(Ordering::Relaxed),
        exact,
    })
}

/// Local search on an ℱ(s,k)-free graph: fill greedily, then repeatedly
/// drop one edge and try to add two.
pub fn polish(g: &HyperGraph, s: usize, k: usize, seed: u64, rounds: usize) -> Result<HyperGraph> {
    let budget = Budget::unlimited();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = all_r_sets(g.n(), g.r());
    let fill = |h: &mut HyperGraph, order: &[Vec<Vertex>]| -> Result<()> {
        for e in order {
            if !h.contains_edge(e) && !new_edge_creates_config(h, e, s, k, &budget)? {
                h.add_edge(e)?;
            }
        }
        Ok(())
    };
    let mut best = g.clone();
    fill(&mut best, &candidates)?;
    for _ in 0..rounds {
        if best.is_empty() {
            break;
        }
        let drop = rng.gen_range(0..best.len());
        let mut h = best.without_edges(&[drop]);
        let mut order = candidates.clone();
        order.shuffle(&mut rng);
        fill(&mut h, &order)?;
        if h.len() > best.len() {
            best = h;
        }
    }
    Ok(best)
}

/// Tracks which vertex pairs are already covered by an edge.
struct Cover {
    adj: Vec<BitSet>,
}

impl Cover {
    fn new(n: usize) -> Self {
        Cover {
            adj: (0..n).map(|_| BitSet::with_capacity(n)).collect(),
        }
    }

    fn free(&self, u: Vertex, v: Vertex) -> bool {
        !self.adj[u as usize].contains(v as usize)
    }

    fn fits(&self, e: &[Vertex]) -> bool {
        e.iter()
            .enumerate()
            .all(|(i, &u)| e[i + 1..].iter().all(|&v| self.free(u, v)))
    }

    fn cover(&mut self, e: &[Vertex]) {
        for &u in e {
            for &v in e {
                if u != v {
                    self.adj[u as usize].insert(v as usize);
                }
            }
        }
    }
}

/// Visits every r-set whose pairs are all uncovered, in lexicographic order
/// of `perm`-relabelled vertices, re-checking coverage as `visit` adds edges.
fn sweep_uncovered(
    n: usize,
    r: usize,
    perm: &[Vertex],
    cover: &mut Cover,
    visit: &mut dyn FnMut(&[Vertex], &mut Cover) -> Result<()>,
) -> Result<()> {
    fn rec(
        n: usize,
        r: usize,
        perm: &[Vertex],
        from: usize,
        cur: &mut Vec<Vertex>,
        cover: &mut Cover,
        visit: &mut dyn FnMut(&[Vertex], &mut Cover) -> Result<()>,
    ) -> Result<()> {
        if cur.len() == r {
            if cover.fits(cur) {
                let mut e = cur.clone();
                e.sort_unstable();
                visit(&e, cover)?;
            }
            return Ok(());
        }
        for i in from..n {
            let v = perm[i];
            if cur.iter().all(|&u| cover.free(u, v)) {
                cur.push(v);
                rec(n, r, perm, i + 1, cur, cover, visit)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(n, r, perm, 0, &mut Vec::with_capacity(r), cover, visit)
}

/// A maximal linear r-graph (every pair in at most one edge) built by
/// seeded random greedy insertion.
pub fn greedy_packing(n: usize, r: usize, seed: u64) -> Result<HyperGraph> {
    if n < r || r < 2 {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= r <= n (r={r}, n={n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = HyperGraph::new(n, r)?;
    let mut cover = Cover::new(n);
    let mut misses = 0;
    let verts: Vec<Vertex> = (0..n as Vertex).collect();
    while misses < 20 * n {
        let v = verts[rng.gen_range(0..n)];
        let mut pool: Vec<Vertex> = verts
            .iter()
            .copied()
            .filter(|&u| u != v && cover.free(u, v))
            .collect();
        pool.shuffle(&mut rng);
        let mut edge = vec![v];
        for u in pool {
            if edge.iter().all(|&w| cover.free(u, w)) {
                edge.push(u);
                if edge.len() == r {
                    break;
                }
            }
        }
        if edge.len() == r {
            edge.sort_unstable();
            cover.cover(&edge);
            g.add_edge(&edge)?;
            misses = 0;
        } else {
            misses += 1;
        }
    }
    // the sweep makes the packing maximal
    let mut perm = verts.clone();
    perm.shuffle(&mut rng);
    sweep_uncovered(n, r, &perm, &mut cover, &mut |e, c| {
        c.cover(e);
        g.add_edge(e)?;
        Ok(())
    })?;
    Ok(g)
}

/// Keeps the edges of `g` (in order) that leave the kept set 𝒢ₖ-free.
pub fn repair_free(g: &HyperGraph, k: usize, budget: &Budget) -> Result<HyperGraph> {
    let mut h = HyperGraph::new(g.n(), g.r())?;
    for e in g.edges() {
        if incremental_free_check(&h, e, k, budget)?.free {
            h.add_edge(e)?;
        }
    }
    Ok(h)
}

/// Adds every r-set with uncovered pairs that keeps `g` linear and
/// 𝒢ₖ-free, scanning in a seeded random vertex order.
pub fn extend_free(g: &HyperGraph, k: usize, seed: u64, budget: &Budget) -> Result<HyperGraph> {
    let (n, r) = (g.n(), g.r());
    let mut h = g.clone();
    let mut cover = Cover::new(n);
    for e in g.edges() {
        cover.cover(e);
    }
    let mut perm: Vec<Vertex> = (0..n as Vertex).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    sweep_uncovered(n, r, &perm, &mut cover, &mut |e, c| {
        if incremental_free_check(&h, e, k, budget)?.free {
            c.cover(e);
            h.add_edge(e)?;
        }
        Ok(())
    })?;
    Ok(h)
}

/// `|G| (r² − r) / n²`, the edge count relative to `n²/(r² − r)`.
pub fn density_ratio(g: &HyperGraph) -> Rational {
    let r = g.r() as i64;
    let n = g.n() as i64;
    Rational::new(g.len() as i64 * (r * r - r), n * n)
}

/// `|F| / (2 |P_{≤⌊k/2⌋}(F)|)` for a 𝒢ₖ-free `F`.
pub fn lower_bound_ratio(f: &HyperGraph, k: usize, budget: &Budget) -> Result<Rational> {
    if f.is_empty() {
        return Err(Error::InvalidParameter("F must have an edge".into()));
    }
    let rep = is_gk_free(f, k, budget)?;
    if let Some(v) = rep.violation {
        return Err(Error::NotFree(format!(
            "edges {:?} span {} <= {}",
            v.edges, v.span, v.family.s
        )));
    }
    let fam = pair_family(&f.all(), PairKind::UpTo(k / 2), None, budget)?;
    Ok(Rational::new(f.len() as i64, 2 * fam.pairs.len() as i64))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub graph: HyperGraph,
    pub packing_edges: usize,
    pub density_ratio: Rational,
    pub freeness: FreenessReport,
    /// The single-edge ratio `1/(r² − r)`.
    pub lower_bound_ratio: Rational,
}

/// Greedy packing, 𝒢ₖ repair (drop violators, then refill), a full
/// freeness re-check and the density report.
pub fn construct(
    n: usize,
    r: usize,
    k: usize,
    seed: u64,
    budget: &Budget,
) -> Result<ConstructionReport> {
    let packing = greedy_packing(n, r, seed)?;
    let kept = repair_free(&packing, k, budget)?;
    let graph = extend_free(&kept, k, seed.wrapping_add(1), budget)?;
    let freeness = is_gk_free(&graph, k, budget)?;
    let single = HyperGraph::from_edges(r, r, &[(0..r as Vertex).collect::<Vec<_>>()])?;
    Ok(ConstructionReport {
        packing_edges: packing.len(),
        density_ratio: density_ratio(&graph),
        lower_bound_ratio: lower_bound_ratio(&single, k, budget)?,
        freeness,
        graph,
    })
}

/// Random 𝒢ₖ-free graph: propose uniform r-sets (or, with probability
/// `diamond_bias`, r-sets through two vertices of an existing edge) and keep
/// those passing the incremental check. Stops at `target` edges or after
/// `max_rejections` consecutive rejections.
pub fn random_free_graph_with(
    n: usize,
    r: usize,
    k: usize,
    target: usize,
    seed: u64,
    diamond_bias: f64,
    max_rejections: usize,
) -> Result<HyperGraph> {
    if n < r || r < 2 {
        return Err(Error::InvalidParameter(format!(
            "need 2 <= r <= n (r={r}, n={n})"
        )));
    }
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = HyperGraph::new(n, r)?;
    let budget = Budget::unlimited();
    let verts: Vec<Vertex> = (0..n as Vertex).collect();
    let mut misses = 0;
    while g.len() < target && misses < max_rejections {
        let mut e: Vec<Vertex> = if !g.is_empty() && r > 2 && rng.gen_bool(diamond_bias) {
            let base = g.edge(rng.gen_range(0..g.len()));
            let mut core: Vec<Vertex> = base.choose_multiple(&mut rng, 2).copied().collect();
            let rest: Vec<Vertex> = verts
                .iter()
                .copied()
                .filter(|v| !base.contains(v))
                .collect();
            if rest.len() < r - 2 {
                misses += 1;
                continue;
            }
            core.extend(rest.choose_multiple(&mut rng, r - 2));
            core
        } else {
            verts.choose_multiple(&mut rng, r).copied().collect()
        };
        e.sort_unstable();
        if g.contains_edge(&e) || !incremental_free_check(&g, &e, k, &budget)?.free {
            misses += 1;
            continue;
        }
        g.add_edge(&e)?;
        misses = 0;
    }
    Ok(g)
}

/// [`random_free_graph_with`] using uniform proposals and the default
/// rejection cap.
pub fn random_free_graph(
    n: usize,
    r: usize,
    k: usize,
    target: usize,
    seed: u64,
) -> Result<HyperGraph> {
    random_free_graph_with(n, r, k, target, seed, 0.0, DEFAULT_MAX_REJECTIONS)
}
