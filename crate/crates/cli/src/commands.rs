use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Value};

use besk::certify::{self as cert, check_k};
use besk::claims::{claim_set, ClaimSet};
use besk::configs::{is_gk_free, Freeness};
use besk::merging::{all_cluster_stats, merge_1, merge_12, merge_12_random, Partition};
use besk::search::{self, ExtremalRecord, TableRow};
use besk::{Budget, Error, HyperGraph, VertexPair};

use crate::{status_of, Status};

pub struct Output {
    pub status: Status,
    pub json: Value,
    pub text: String,
}

type Res<T> = Result<T, (Status, String)>;

fn fail(e: Error) -> (Status, String) {
    (status_of(&e), e.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn verified(g: &HyperGraph, k: usize, budget: &Budget) -> Res<Freeness> {
    Freeness::verify(g, k, budget).map_err(fail)
}

fn fmt_parts(p: &Partition) -> String {
    p.parts
        .iter()
        .map(|part| format!("{part:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn check_free(g: &HyperGraph, k: usize, budget: &Budget) -> Res<Output> {
    let rep = is_gk_free(g, k, budget).map_err(fail)?;
    let mut text = format!("graph: n={} r={} edges={}\nk: {k}\n", g.n(), g.r(), g.len());
    match &rep.violation {
        None => text.push_str("free: yes\n"),
        Some(v) => {
            let _ = writeln!(
                text,
                "free: no\nviolation: ({},{})-configuration on edges {:?}, span {}",
                v.family.s, v.family.k, v.edges, v.span
            );
            for &i in &v.edges {
                let _ = writeln!(text, "  {:?}", g.edge(i));
            }
        }
    }
    Ok(Output {
        status: if rep.free {
            Status::Ok
        } else {
            Status::Finding
        },
        json: json!({"n": g.n(), "r": g.r(), "edges": g.len(), "k": k, "report": rep}),
        text,
    })
}

pub fn merge(g: &HyperGraph, k: usize, seed: Option<u64>, budget: &Budget) -> Res<Output> {
    let free = verified(g, k, budget)?;
    let (m1, _) = merge_1(g);
    let (m2, log) = match seed {
        None => merge_12(g, k, &m1, free),
        Some(s) => merge_12_random(g, k, &m1, free, s),
    }
    .map_err(fail)?;
    let stats = all_cluster_stats(g, &log).map_err(fail)?;
    let mut text = format!("M1 ({} parts): {}\n", m1.len(), fmt_parts(&m1));
    let _ = writeln!(text, "M2 ({} parts): {}", m2.len(), fmt_parts(&m2));
    for ev in &log.events {
        let _ = writeln!(
            text,
            "merge {} <- {} via {} ({})",
            ev.part_a,
            ev.part_b,
            ev.via,
            to_value(&ev.mode).as_str().unwrap_or("?")
        );
    }
    for st in &stats {
        let _ = writeln!(
            text,
            "cluster {:?}: size {} m {} composition {:?}",
            st.edges(),
            st.size,
            st.m,
            st.composition
        );
    }
    Ok(Output {
        status: Status::Ok,
        json: json!({"k": k, "m1": m1, "m2": m2, "log": log, "clusters": stats}),
        text,
    })
}

pub fn claims(g: &HyperGraph, pairs: &[(u32, u32)], i_max: usize, budget: &Budget) -> Res<Output> {
    let all = g.all();
    let mut sets: Vec<ClaimSet> = Vec::new();
    for &(u, v) in pairs {
        let p = VertexPair::new(u, v).ok_or_else(|| {
            (
                Status::Usage,
                format!("pair {u},{v} needs two distinct vertices"),
            )
        })?;
        sets.push(claim_set(&all, p, i_max, budget).map_err(fail)?);
    }
    let mut text = String::new();
    for c in &sets {
        let _ = writeln!(
            text,
            "{}: claims {:?} (up to {})",
            c.pair, c.members, c.i_max
        );
    }
    Ok(Output {
        status: Status::Ok,
        json: to_value(&sets),
        text,
    })
}

pub fn certify(g: &HyperGraph, k: usize, budget: &Budget) -> Res<Output> {
    check_k(k).map_err(|e| {
        (
            Status::Usage,
            format!("{e}; the weight argument only covers even k >= 4"),
        )
    })?;
    let free = verified(g, k, budget)?;
    let (m2, certificate, report) = cert::certify(g, k, free).map_err(fail)?;
    let mut text = format!(
        "graph: n={} r={} edges={}\nk: {k}\nfree: yes\nclusters: {}\n",
        g.n(),
        g.r(),
        g.len(),
        m2.len()
    );
    for c in &certificate.clusters {
        let _ = writeln!(
            text,
            "cluster {:?}: w(F) = {} over {} weighted pairs",
            c.edges,
            c.weight_total,
            c.pairs.len()
        );
    }
    let _ = writeln!(
        text,
        "pair lemma (w(xy) <= 1): {}\ncluster lemma (w(F) >= C(r,2)|F|): {}\n\
         r threshold 2(r-2)^2 >= 3k-8: {}\nbound C(n,2)/C(r,2) = {}\nedges {} <= bound: {}",
        report.pair_lemma_ok,
        report.cluster_lemma_ok,
        report.r_threshold_ok,
        report.bound,
        report.edges,
        report.holds
    );
    let ok = report.pair_lemma_ok && report.cluster_lemma_ok && report.holds;
    Ok(Output {
        status: if ok { Status::Ok } else { Status::Finding },
        json: json!({"partition": m2, "certificate": certificate, "report": report}),
        text,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn search(
    n_min: usize,
    n_max: usize,
    r: usize,
    s: usize,
    k: usize,
    csv_path: Option<PathBuf>,
    witness: Option<PathBuf>,
    budget: &Budget,
) -> Res<Output> {
    if n_max < n_min {
        return Err((Status::Usage, "--n-max must be at least --n".into()));
    }
    let mut records: Vec<ExtremalRecord> = Vec::new();
    for n in n_min..=n_max {
        // each n gets the full budget
        let b = Budget::new(budget.limit());
        records.push(search::search_extremal(n, r, s, k, &b).map_err(fail)?);
    }
    let rows: Vec<TableRow> = records.iter().map(TableRow::from).collect();
    if let Some(path) = &csv_path {
        let io = |e: csv::Error| (Status::Usage, format!("{}: {e}", path.display()));
        let mut w = csv::Writer::from_path(path).map_err(io)?;
        for row in &rows {
            w.serialize(row).map_err(io)?;
        }
        w.flush()
            .map_err(|e| (Status::Usage, format!("{}: {e}", path.display())))?;
    }
    if let (Some(path), Some(last)) = (&witness, records.last()) {
        std::fs::write(path, last.witness.to_hg_string())
            .map_err(|e| (Status::Usage, format!("{}: {e}", path.display())))?;
    }
    let mut text = String::from("n,r,s,k,value,exact,nodes\n");
    for row in &rows {
        let _ = writeln!(
            text,
            "{},{},{},{},{},{},{}",
            row.n, row.r, row.s, row.k, row.value, row.exact, row.nodes
        );
    }
    if let Some(last) = records.last() {
        let _ = write!(
            text,
            "witness (n={}):\n{}",
            last.n,
            last.witness.to_hg_string()
        );
    }
    let exact = records.iter().all(|r| r.exact);
    Ok(Output {
        status: if exact { Status::Ok } else { Status::Budget },
        json: json!({"records": records}),
        text,
    })
}

pub fn construct(
    n: usize,
    r: usize,
    k: usize,
    seed: u64,
    output: Option<PathBuf>,
    budget: &Budget,
) -> Res<Output> {
    let rep = search::construct(n, r, k, seed, budget).map_err(fail)?;
    if let Some(path) = &output {
        std::fs::write(path, rep.graph.to_hg_string())
            .map_err(|e| (Status::Usage, format!("{}: {e}", path.display())))?;
    }
    let text = format!(
        "n={n} r={r} k={k} seed={seed}\npacking edges: {}\nedges after repair: {}\n\
         density |G|(r^2-r)/n^2: {} ({:.4})\nfree: {}\nsingle-edge ratio: {}\n",
        rep.packing_edges,
        rep.graph.len(),
        rep.density_ratio,
        rep.density_ratio.to_f64(),
        rep.freeness.free,
        rep.lower_bound_ratio
    );
    Ok(Output {
        status: if rep.freeness.free {
            Status::Ok
        } else {
            Status::Finding
        },
        json: to_value(&rep),
        text,
    })
}
