//! Fixed-seed invariant suites. The report lines are deterministic, so
//! their digest pins the whole run.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use besk::certify::certify;
use besk::claims::claim_set;
use besk::configs::{contains_config, Freeness};
use besk::fixtures;
use besk::merging::{
    all_cluster_stats, merge_1, merge_12, merge_12_random, merging_numbers, sumset_law,
    verify_structure, CheckMode,
};
use besk::search::{greedy_packing, random_free_graph_with, search_extremal};
use besk::{Budget, HyperGraph, Rational, Vertex, VertexPair};

use crate::commands::Output;
use crate::Status;

#[derive(Serialize)]
struct Suite {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn span(edges: &[&[Vertex]], extra: &[Vertex]) -> usize {
    let mut v: Vec<Vertex> = edges.iter().flat_map(|e| e.iter().copied()).collect();
    v.extend_from_slice(extra);
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Subsets of `0..m` with `k` members, as bit masks.
fn k_subsets(m: usize, k: usize) -> impl Iterator<Item = u32> {
    (0u32..1 << m).filter(move |s| s.count_ones() as usize == k)
}

fn pick(g: &HyperGraph, mask: u32) -> Vec<&[Vertex]> {
    (0..g.len())
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| g.edge(i))
        .collect()
}

fn fixtures_suite() -> Suite {
    let g = fixtures::diamond4();
    let free = Freeness::verify(&g, 4, &Budget::default()).expect("diamond is free");
    let (_, cert, rep) = certify(&g, 4, free).expect("certify");
    let ok = cert.clusters[0].weight_total == Rational::from_int(15)
        && rep.bound == Rational::new(15, 6)
        && rep.holds;
    Suite {
        name: "diamond certificate",
        ok,
        detail: format!(
            "w(F) = {}, bound = {}",
            cert.clusters[0].weight_total, rep.bound
        ),
    }
}

fn extremal_suite() -> Suite {
    let vals: Vec<(usize, bool)> = (3..=7)
        .map(|n| {
            let rec = search_extremal(n, 3, 4, 2, &Budget::default()).expect("search");
            (rec.value, rec.exact)
        })
        .collect();
    let ok = vals == [(1, true), (1, true), (2, true), (4, true), (7, true)];
    Suite {
        name: "extremal table",
        ok,
        detail: format!(
            "f(n;4,2), n=3..7: {:?}",
            vals.iter().map(|v| v.0).collect::<Vec<_>>()
        ),
    }
}

fn oracle_suite() -> Suite {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let budget = Budget::default();
    let mut checks = 0;
    let mut bad = 0;
    for _ in 0..150 {
        let r = rng.gen_range(3..=4);
        let n = rng.gen_range(r + 1..=8);
        let mut edges: Vec<Vec<Vertex>> = Vec::new();
        for _ in 0..rng.gen_range(1..=8) {
            let mut e: Vec<Vertex> = rand::seq::index::sample(&mut rng, n, r)
                .into_iter()
                .map(|v| v as Vertex)
                .collect();
            e.sort_unstable();
            if !edges.contains(&e) {
                edges.push(e);
            }
        }
        let g = HyperGraph::from_edges(n, r, &edges).expect("valid");
        let m = g.len();
        for k in 1..=m.min(4) {
            for s in r..=(r - 2) * k + 2 {
                let slow = k_subsets(m, k).any(|mask| span(&pick(&g, mask), &[]) <= s);
                let fast = contains_config(&g, s, k, &budget)
                    .expect("budget")
                    .is_some();
                checks += 1;
                bad += usize::from(slow != fast);
            }
        }
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                let p = VertexPair::new(u, v).expect("distinct");
                let fast = claim_set(&g.all(), p, 4, &budget).expect("budget").members;
                let slow: Vec<usize> = (0..=m.min(4))
                    .filter(|&i| {
                        i == 0
                            || k_subsets(m, i)
                                .any(|mask| span(&pick(&g, mask), &[u, v]) <= (r - 2) * i + 2)
                    })
                    .collect();
                checks += 1;
                bad += usize::from(fast != slow);
            }
        }
    }
    Suite {
        name: "oracle agreement",
        ok: bad == 0,
        detail: format!("{checks} queries, {bad} disagreements"),
    }
}

fn corpus_suite() -> Suite {
    let budget = Budget::default();
    let mut clusters = 0;
    let mut merged = 0;
    let mut bad = 0;
    for seed in 0..40u64 {
        let (r, k) = if seed % 2 == 0 { (5, 4) } else { (4, 4) };
        let g = random_free_graph_with(14, r, k, 20, seed, 0.8, 1000).expect("generator");
        let free = Freeness::verify(&g, k, &budget).expect("generator output is free");
        let (m1, _) = merge_1(&g);
        let (m2, log) = merge_12(&g, k, &m1, free).expect("merge");
        for st in all_cluster_stats(&g, &log).expect("stats") {
            clusters += 1;
            merged += usize::from(st.m >= 2);
            let rep = verify_structure(&g, k, &st, CheckMode::Audit).expect("structure");
            bad += usize::from(!rep.ok());
        }
        bad += sumset_law(&g, k, &m2, &budget)
            .expect("sumset")
            .violations
            .len();
        let (_, _, rep) = certify(&g, k, free).expect("certify");
        bad += usize::from(!(rep.pair_lemma_ok && rep.cluster_lemma_ok && rep.holds));
        let base: BTreeMap<_, _> = merging_numbers(&g, &log).expect("m").into_iter().collect();
        for s in 0..3 {
            let (_, l) = merge_12_random(&g, k, &m1, free, s).expect("merge");
            let other: BTreeMap<_, _> = merging_numbers(&g, &l).expect("m").into_iter().collect();
            bad += usize::from(other != base);
        }
    }
    Suite {
        name: "cluster laws",
        ok: bad == 0,
        detail: format!("40 instances, {clusters} clusters, {merged} with m>=2, {bad} failures"),
    }
}

fn packing_suite() -> Suite {
    let g = greedy_packing(60, 4, 3).expect("packing");
    let linear = g.pair_index().values().all(|v| v.len() <= 1);
    Suite {
        name: "packing",
        ok: linear,
        detail: format!("n=60 r=4: {} edges, linear {linear}", g.len()),
    }
}

pub fn run() -> Output {
    let suites = vec![
        fixtures_suite(),
        extremal_suite(),
        oracle_suite(),
        corpus_suite(),
        packing_suite(),
    ];
    let lines: Vec<String> = suites
        .iter()
        .map(|s| {
            format!(
                "{} {}: {}",
                if s.ok { "ok" } else { "FAIL" },
                s.name,
                s.detail
            )
        })
        .collect();
    let mut hasher = Sha256::new();
    for l in &lines {
        hasher.update(l.as_bytes());
        hasher.update(b"\n");
    }
    let digest = hex::encode(hasher.finalize());
    let ok = suites.iter().all(|s| s.ok);
    let mut text = lines.join("\n");
    text.push_str(&format!("\ndigest: {digest}\n"));
    Output {
        status: if ok { Status::Ok } else { Status::Finding },
        json: json!({"suites": suites, "digest": digest}),
        text,
    }
}
