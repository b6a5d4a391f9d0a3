//! Acceptance suite. One line per criterion; exits non-zero if any fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use besk::certify::{certify, r_threshold};
use besk::claims::claim_set;
use besk::configs::{contains_config, Freeness};
use besk::merging::{
    all_cluster_stats, merge_1, merge_12, merge_12_random, merging_numbers, sumset_law,
    two_edge_law, verify_structure, CheckMode,
};
use besk::search::{construct, lower_bound_ratio, random_free_graph_with, search_extremal};
use besk::{Budget, HyperGraph, Rational, VertexPair};

type Edge = Vec<u32>;

fn span(edges: &[&Edge], extra: &[u32]) -> usize {
    let mut v: Vec<u32> = edges.iter().flat_map(|e| e.iter().copied()).collect();
    v.extend_from_slice(extra);
    v.sort_unstable();
    v.dedup();
    v.len()
}

fn naive_contains(edges: &[Edge], s: usize, k: usize) -> bool {
    edges.iter().combinations(k).any(|c| span(&c, &[]) <= s)
}

fn naive_gk_free(edges: &[Edge], r: usize, k: usize) -> bool {
    !naive_contains(edges, (r - 2) * k + 2, k)
        && (2..k).all(|l| !naive_contains(edges, (r - 2) * l + 1, l))
}

fn naive_claims(edges: &[Edge], r: usize, x: u32, y: u32, i_max: usize) -> Vec<usize> {
    let mut out = vec![0];
    for i in 1..=i_max.min(edges.len()) {
        if edges
            .iter()
            .combinations(i)
            .any(|c| span(&c, &[x, y]) <= (r - 2) * i + 2)
        {
            out.push(i);
        }
    }
    out
}

/// Largest set of r-sets on `n` vertices with no `k` edges on `<= s`
/// vertices. Walks the include/exclude tree over all subsets, cutting a
/// branch only once it already holds a configuration.
fn naive_extremal(n: usize, r: usize, s: usize, k: usize) -> usize {
    fn walk(all: &[Edge], i: usize, chosen: &mut Vec<Edge>, s: usize, k: usize, best: &mut usize) {
        if chosen.len() + (all.len() - i) <= *best {
            return;
        }
        if i == all.len() {
            *best = chosen.len();
            return;
        }
        chosen.push(all[i].clone());
        if !naive_contains(chosen, s, k) {
            walk(all, i + 1, chosen, s, k, best);
        }
        chosen.pop();
        walk(all, i + 1, chosen, s, k, best);
    }
    let all: Vec<Edge> = (0..n as u32).combinations(r).collect();
    let mut best = 0;
    walk(&all, 0, &mut Vec::new(), s, k, &mut best);
    best
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, r: usize, m: usize) -> HyperGraph {
    let mut edges: Vec<Edge> = Vec::new();
    for _ in 0..4 * m {
        if edges.len() == m {
            break;
        }
        let mut e: Edge = rand::seq::index::sample(rng, n, r)
            .into_iter()
            .map(|v| v as u32)
            .collect();
        e.sort_unstable();
        if !edges.contains(&e) {
            edges.push(e);
        }
    }
    HyperGraph::from_edges(n, r, &edges).unwrap()
}

#[derive(Clone)]
struct Instance {
    g: HyperGraph,
    k: usize,
}

/// Seeded 𝒢ₖ-free instances over r in {4,5}, k in {4,6}, n in 10..=14,
/// with a spread of targets and proposal biases.
fn corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    for r in [4usize, 5] {
        for k in [4usize, 6] {
            for n in 10..=14usize {
                for (target, bias) in [(6, 0.0), (12, 0.5), (20, 0.8), (40, 0.9)] {
                    for _ in 0..5 {
                        seed += 1;
                        let g = random_free_graph_with(n, r, k, target, seed, bias, 4000).unwrap();
                        out.push(Instance { g, k });
                    }
                }
            }
        }
    }
    out
}

/// Larger instances (n up to 30) that give the structural laws more to
/// bite on than the n <= 14 corpus.
fn wide_corpus() -> Vec<Instance> {
    let mut out = Vec::new();
    for k in [4usize, 6] {
        for n in [20usize, 25, 30] {
            for seed in 0..10u64 {
                let g = random_free_graph_with(n, 4, k, 60, 1000 + seed, 0.9, 2000).unwrap();
                out.push(Instance { g, k });
            }
        }
    }
    out
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: usize, name: &str, t: Duration, o: &Outcome) -> bool {
    println!(
        "{} [{id}] {name}: {} ({:.1}s)",
        if o.pass { "PASS" } else { "FAIL" },
        o.detail,
        t.as_secs_f64()
    );
    o.pass
}

fn extremal_table() -> Outcome {
    let oracle: Vec<usize> = (3..=7).map(|n| naive_extremal(n, 3, 4, 2)).collect();
    let expected = vec![1, 1, 2, 4, 7];
    let budget = Budget::default();
    let mut got = Vec::new();
    let mut all_exact = true;
    let mut witnesses_ok = true;
    for n in 3..=7 {
        let rec = search_extremal(n, 3, 4, 2, &budget).unwrap();
        all_exact &= rec.exact;
        witnesses_ok &=
            rec.witness.len() == rec.value && !naive_contains(rec.witness.edges(), 4, 2);
        got.push(rec.value);
    }
    Outcome {
        pass: oracle == expected && got == oracle && all_exact && witnesses_ok,
        detail: format!("oracle {oracle:?}, search {got:?}, exact={all_exact}"),
    }
}

fn counting_formula(corpus: &[Instance]) -> Outcome {
    let mut clusters = 0;
    let mut merged = 0;
    let mut violations = 0;
    for inst in corpus {
        let free = Freeness::verify(&inst.g, inst.k, &Budget::default()).unwrap();
        let (m1, _) = merge_1(&inst.g);
        let (_, log) = merge_12(&inst.g, inst.k, &m1, free).unwrap();
        for st in all_cluster_stats(&inst.g, &log).unwrap() {
            let rep = verify_structure(&inst.g, inst.k, &st, CheckMode::Audit).unwrap();
            clusters += 1;
            merged += usize::from(st.m >= 2);
            violations += usize::from(!(rep.p1_ok && rep.p12_ok));
        }
    }
    Outcome {
        pass: corpus.len() >= 200 && violations == 0 && merged >= 50,
        detail: format!(
            "{} instances, {clusters} clusters, {merged} with m>=2, {violations} violations",
            corpus.len()
        ),
    }
}

fn weight_lemmas(corpus: &[Instance]) -> Outcome {
    let mut instances = 0;
    let mut pairs = 0;
    let mut clusters = 0;
    let mut violations = 0;
    let mut bound_fail = 0;
    for inst in corpus.iter().filter(|i| r_threshold(i.g.r(), i.k)) {
        let free = Freeness::verify(&inst.g, inst.k, &Budget::default()).unwrap();
        let (_, cert, rep) = certify(&inst.g, inst.k, free).unwrap();
        instances += 1;
        pairs += cert.pairs.len();
        clusters += cert.clusters.len();
        // recomputed here rather than read from the report
        let per_edge = Rational::from_int((inst.g.r() * (inst.g.r() - 1) / 2) as i64);
        violations += cert
            .pairs
            .iter()
            .filter(|p| p.weight > Rational::one())
            .count();
        violations += cert
            .clusters
            .iter()
            .filter(|c| c.weight_total < per_edge * Rational::from_int(c.edges.len() as i64))
            .count();
        let n = inst.g.n();
        let r = inst.g.r();
        if inst.g.len() * r * (r - 1) > n * (n - 1) || !rep.holds {
            bound_fail += 1;
        }
    }
    Outcome {
        pass: instances > 0 && violations == 0 && bound_fail == 0,
        detail: format!(
            "{instances} threshold instances, {clusters} clusters, {pairs} weighted pairs, \
             {violations} violations, {bound_fail} bound failures"
        ),
    }
}

fn structural_laws(corpus: &[Instance]) -> Outcome {
    let budget = Budget::default();
    let mut one_cluster = 0;
    let mut size_k = 0;
    let mut merge_bound = 0;
    let mut large = 0;
    let mut shared = 0;
    let mut sumset = 0;
    let mut p_triggers = 0;
    let mut p_fail = 0;
    for inst in corpus {
        let free = Freeness::verify(&inst.g, inst.k, &budget).unwrap();
        let (m1, _) = merge_1(&inst.g);
        let (m2, log) = merge_12(&inst.g, inst.k, &m1, free).unwrap();
        let stats = all_cluster_stats(&inst.g, &log).unwrap();
        for st in &stats {
            let rep = verify_structure(&inst.g, inst.k, st, CheckMode::Audit).unwrap();
            one_cluster += usize::from(!rep.one_cluster_ok);
            size_k += usize::from(!rep.size_not_k);
            merge_bound += usize::from(!rep.merge_bound_ok);
            large += usize::from(rep.large);
        }
        let ss = sumset_law(&inst.g, inst.k, &m2, &budget).unwrap();
        shared += ss.shared_pairs;
        sumset += ss.violations.len();
        let te = two_edge_law(&inst.g, inst.k, &stats, &budget).unwrap();
        p_triggers += te.triggers;
        p_fail += te.violations.len();
    }
    let violations = one_cluster + size_k + merge_bound + sumset + p_fail;
    Outcome {
        pass: violations == 0,
        detail: format!(
            "{} instances; violations: 1-cluster >= k {one_cluster}, |F|=k {size_k}, merge \
             bound {merge_bound}, sum-set {sumset}, two-edge {p_fail}; triggers: large \
             clusters {large}, shared pairs {shared}, property-P prefixes {p_triggers}",
            corpus.len()
        ),
    }
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let budget = Budget::default();
    let mut disagreements = 0;
    let mut config_checks = 0;
    let mut claim_checks = 0;
    let mut positives = 0;
    for _ in 0..1000 {
        let r = rng.gen_range(3..=4);
        let n = rng.gen_range(r + 1..=9);
        let m = rng.gen_range(1..=10);
        let g = random_graph(&mut rng, n, r, m);
        let edges = g.edges().to_vec();
        for k in 1..=g.len().min(5) {
            for s in r..=(r - 2) * k + 3 {
                let fast = contains_config(&g, s, k, &budget).unwrap();
                let slow = naive_contains(&edges, s, k);
                config_checks += 1;
                positives += usize::from(slow);
                if fast.is_some() != slow {
                    disagreements += 1;
                } else if let Some(w) = fast {
                    let chosen: Vec<&Edge> = w.edge_indices.iter().map(|&i| &edges[i]).collect();
                    if chosen.len() != k || span(&chosen, &[]) > s {
                        disagreements += 1;
                    }
                }
            }
        }
        let sub = g.all();
        for (x, y) in (0..n as u32).tuple_combinations() {
            let xy = VertexPair::new(x, y).unwrap();
            let fast = claim_set(&sub, xy, 5, &budget).unwrap();
            claim_checks += 1;
            if fast.members != naive_claims(&edges, r, x, y, 5) {
                disagreements += 1;
            }
        }
    }
    Outcome {
        pass: disagreements == 0,
        detail: format!(
            "1000 graphs, {config_checks} config queries ({positives} positive), \
             {claim_checks} claim sets, {disagreements} disagreements"
        ),
    }
}

fn order_invariance(corpus: &[Instance]) -> Outcome {
    let budget = Budget::default();
    let mut used = 0;
    let mut merging = 0;
    let mut m_mismatch = 0;
    let mut part_mismatch = 0;
    // instances where 𝓜₂ merges the most come first
    let mut ranked: Vec<(usize, usize, usize)> = corpus
        .iter()
        .enumerate()
        .map(|(i, inst)| {
            let free = Freeness::verify(&inst.g, inst.k, &budget).unwrap();
            let (m1, _) = merge_1(&inst.g);
            let (m2, _) = merge_12(&inst.g, inst.k, &m1, free).unwrap();
            (m1.len() - m2.len(), inst.g.len(), i)
        })
        .collect();
    ranked.sort_by(|a, b| b.cmp(a));
    for &(merges, _, i) in ranked.iter().take(50) {
        let inst = &corpus[i];
        used += 1;
        merging += usize::from(merges > 0);
        let free = Freeness::verify(&inst.g, inst.k, &budget).unwrap();
        let (m1, _) = merge_1(&inst.g);
        let (_, log) = merge_12(&inst.g, inst.k, &m1, free).unwrap();
        let base: BTreeMap<Vec<usize>, usize> = merging_numbers(&inst.g, &log)
            .unwrap()
            .into_iter()
            .collect();
        let mut bad_m = false;
        let mut bad_p = false;
        for seed in 0..10 {
            let (_, l) = merge_12_random(&inst.g, inst.k, &m1, free, seed).unwrap();
            let other: BTreeMap<Vec<usize>, usize> =
                merging_numbers(&inst.g, &l).unwrap().into_iter().collect();
            bad_p |= other.keys().ne(base.keys());
            bad_m |= other != base;
        }
        m_mismatch += usize::from(bad_m);
        part_mismatch += usize::from(bad_p);
    }
    Outcome {
        pass: used == 50 && m_mismatch == 0,
        detail: format!(
            "{used} instances ({merging} with merges) x 10 orders, {m_mismatch} with differing \
             m(F), {part_mismatch} with differing partitions"
        ),
    }
}

fn lower_bound_trend() -> Outcome {
    let budget = Budget::unlimited();
    let rep = construct(200, 4, 4, 7, &budget).unwrap();
    let density = rep.density_ratio.to_f64();
    let mut exact = true;
    for r in 3..=8 {
        let single = HyperGraph::from_edges(r, r, &[(0..r as u32).collect::<Vec<_>>()]).unwrap();
        for k in [4, 6, 8] {
            let got = lower_bound_ratio(&single, k, &budget).unwrap();
            exact &= got == Rational::new(1, (r * r - r) as i64);
        }
    }
    Outcome {
        pass: rep.freeness.free && density >= 0.6 && exact,
        detail: format!(
            "n=200 r=4: packing {} edges, {} after repair, density {:.4}, free={}; \
             single-edge ratios exact={exact}",
            rep.packing_edges,
            rep.graph.len(),
            density,
            rep.freeness.free
        ),
    }
}

fn main() -> ExitCode {
    let mut ok = true;

    let t = Instant::now();
    let o = extremal_table();
    let el = t.elapsed();
    let o = Outcome {
        pass: o.pass && el < Duration::from_secs(60),
        ..o
    };
    ok &= report(1, "exact extremal table f(n;4,2), r=3, n=3..7", el, &o);

    let t = Instant::now();
    let corpus = corpus();
    let naive_ok = corpus
        .iter()
        .filter(|i| i.g.len() <= 14)
        .all(|i| naive_gk_free(i.g.edges(), i.g.r(), i.k));
    println!(
        "corpus: {} instances, {} edges total, generated in {:.1}s, naive freeness re-check {}",
        corpus.len(),
        corpus.iter().map(|i| i.g.len()).sum::<usize>(),
        t.elapsed().as_secs_f64(),
        if naive_ok { "ok" } else { "FAILED" }
    );

    let t = Instant::now();
    let o = counting_formula(&corpus);
    let o = Outcome {
        pass: o.pass && naive_ok,
        ..o
    };
    ok &= report(2, "counting formulas for P1 and P_1bar2", t.elapsed(), &o);

    let t = Instant::now();
    let o = weight_lemmas(&corpus);
    ok &= report(3, "weight lemmas", t.elapsed(), &o);

    let t = Instant::now();
    let both: Vec<Instance> = corpus.iter().cloned().chain(wide_corpus()).collect();
    let o = structural_laws(&both);
    ok &= report(4, "structural laws", t.elapsed(), &o);

    let t = Instant::now();
    let o = oracle_equivalence();
    let el = t.elapsed();
    let o = Outcome {
        pass: o.pass && el < Duration::from_secs(120),
        ..o
    };
    ok &= report(5, "oracle equivalence", el, &o);

    let t = Instant::now();
    let o = order_invariance(&corpus);
    ok &= report(6, "merge order invariance of m(F)", t.elapsed(), &o);

    let t = Instant::now();
    let o = lower_bound_trend();
    ok &= report(7, "lower-bound trend", t.elapsed(), &o);

    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
