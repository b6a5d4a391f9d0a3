use itertools::Itertools;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use besk::canon::{brute_force_label, canonical_form, refined_label};
use besk::certify::certify;
use besk::configs::{contains_config, is_gk_free, Freeness};
use besk::merging::{merge_1, merge_12};
use besk::search::{greedy_packing, random_free_graph, search_extremal};
use besk::{Budget, HyperGraph, VertexPair};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = HyperGraph> {
    (2usize..=4, 0usize..=max_n - 4)
        .prop_flat_map(|(r, extra)| {
            let n = r + 1 + extra;
            let all: Vec<Vec<u32>> = (0..n as u32).combinations(r).collect();
            let len = all.len();
            (
                Just((n, r, all)),
                prop::collection::btree_set(0..len, 0..len.min(9)),
            )
        })
        .prop_map(|((n, r, all), pick)| {
            let edges: Vec<Vec<u32>> = pick.into_iter().map(|i| all[i].clone()).collect();
            HyperGraph::from_edges(n, r, &edges).unwrap()
        })
}

fn relabel(g: &HyperGraph, perm: &[u32]) -> HyperGraph {
    let mut edges: Vec<Vec<u32>> = g
        .edges()
        .iter()
        .map(|e| {
            let mut f: Vec<u32> = e.iter().map(|&v| perm[v as usize]).collect();
            f.sort_unstable();
            f
        })
        .collect();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(perm.len() as u64));
    HyperGraph::from_edges(g.n(), g.r(), &edges).unwrap()
}

proptest! {
    #[test]
    fn hg_round_trip(g in graph_strategy(10)) {
        let text = g.to_hg_string();
        let back = HyperGraph::parse(&text).unwrap();
        prop_assert_eq!(back.to_hg_string(), text);
        prop_assert_eq!(back, g.sorted());
    }

    #[test]
    fn json_round_trip(g in graph_strategy(10)) {
        let json = serde_json::to_string(&g).unwrap();
        let back: HyperGraph = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, g);
    }

    #[test]
    fn pair_index_matches_edges(g in graph_strategy(9)) {
        for (u, v) in (0..g.n() as u32).tuple_combinations() {
            let p = VertexPair::new(u, v).unwrap();
            let want: Vec<usize> = (0..g.len())
                .filter(|&i| g.edge(i).contains(&u) && g.edge(i).contains(&v))
                .collect();
            let mut got = g.edges_with_pair(p).to_vec();
            got.sort_unstable();
            prop_assert_eq!(got, want);
        }
    }

    #[test]
    fn refined_agrees_with_brute_force(a in graph_strategy(6), b in graph_strategy(6)) {
        if a.n() == b.n() && a.r() == b.r() {
            let same = brute_force_label(&a) == brute_force_label(&b);
            prop_assert_eq!(refined_label(&a) == refined_label(&b), same);
        }
    }
}

#[test]
fn canonical_label_is_permutation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strategy = graph_strategy(12);
    for _ in 0..100 {
        let g = strategy.new_tree(&mut runner).unwrap().current();
        let label = canonical_form(&g).unwrap();
        for _ in 0..10 {
            let mut perm: Vec<u32> = (0..g.n() as u32).collect();
            perm.shuffle(&mut rng);
            assert_eq!(canonical_form(&relabel(&g, &perm)).unwrap(), label);
        }
    }
}

#[test]
fn parse_examples() {
    let g = HyperGraph::parse("3 4 2\n0 1 2\n1 2 3").unwrap();
    assert_eq!((g.n(), g.r(), g.len()), (4, 3, 2));
    assert!(HyperGraph::parse("3 4 2\n0 1 2\n0 1 2").is_err());
    assert!(HyperGraph::parse("3 4 1\n0 1 5").is_err());
}

#[test]
fn search_witnesses_are_free() {
    let b = Budget::default();
    for (n, s, k) in [(6, 4, 2), (6, 5, 3), (7, 5, 3)] {
        let rec = search_extremal(n, 3, s, k, &b).unwrap();
        assert!(rec.exact);
        assert_eq!(rec.witness.len(), rec.value);
        assert!(contains_config(&rec.witness, s, k, &b).unwrap().is_none());
        let row = besk::search::TableRow::from(&rec);
        assert_eq!(row.value, rec.value);
    }
}

#[test]
fn packing_is_linear_and_seeded() {
    for seed in 0..5 {
        let g = greedy_packing(40, 4, seed).unwrap();
        assert!(g.pair_index().values().all(|v| v.len() <= 1));
        assert_eq!(g, greedy_packing(40, 4, seed).unwrap());
    }
}

#[test]
fn pipeline_on_generated_instances() {
    let b = Budget::default();
    for seed in 0..30 {
        let g = random_free_graph(16, 5, 4, 20, seed).unwrap();
        assert!(is_gk_free(&g, 4, &b).unwrap().free);
        let free = Freeness::verify(&g, 4, &b).unwrap();
        let (m1, _) = merge_1(&g);
        let (m2, _) = merge_12(&g, 4, &m1, free).unwrap();
        m2.validate(g.len()).unwrap();
        let (_, _, rep) = certify(&g, 4, free).unwrap();
        assert!(rep.pair_lemma_ok && rep.cluster_lemma_ok && rep.holds);
    }
}
