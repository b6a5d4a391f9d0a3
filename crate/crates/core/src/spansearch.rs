//! Exact search for edge subsets with bounded vertex span.
//!
//! Given a starting vertex set `U₀`, find `q` further edges whose union with
//! `U₀` has at most `s` vertices. Every subset is generated in exactly one
//! order: the next edge is always one of maximum overlap `t = |e ∩ U|` with
//! the current union (ties by smallest index), and that choice is recorded
//! as a constraint on all later edges. In that order the i-th later edge
//! overlaps the union in at most `min(r, T + i·c)` vertices, where `T` is the
//! overlap of the edge chosen now and `c` bounds the intersection of two
//! distinct candidate edges; a branch is cut as soon as even those maxima
//! cannot pull the span under `s`.

use crate::bitset::BitSet;
use crate::budget::Budget;
use crate::error::Result;
use crate::graph::{pairs_of, HyperGraph, Vertex};

pub(crate) struct SpanSearch<'a> {
    pub g: &'a HyperGraph,
    /// Candidate edges (by index); `None` allows every edge.
    pub allowed: Option<&'a [bool]>,
    /// Candidates must have a larger index than this.
    pub min_index: Option<usize>,
    /// Only grow through edges meeting the current union.
    pub connected: bool,
    pub s: usize,
    pub budget: &'a Budget,
}

struct Constraint {
    union: BitSet,
    overlap: usize,
    edge: usize,
}

impl SpanSearch<'_> {
    /// Returns the chosen edge indices (in search order) of one completion.
    pub fn find(&self, start: &BitSet, q: usize) -> Result<Option<Vec<usize>>> {
        let mut chosen = Vec::with_capacity(q);
        let mut stack = Vec::with_capacity(q);
        let mut scratch: Vec<BitSet> = (0..=q).map(|_| BitSet::with_capacity(self.g.n())).collect();
        scratch[0] = start.clone();
        if self.go(&mut scratch, 0, q, &mut chosen, &mut stack)? {
            Ok(Some(chosen))
        } else {
            Ok(None)
        }
    }

    fn go(
        &self,
        unions: &mut Vec<BitSet>,
        depth: usize,
        q: usize,
        chosen: &mut Vec<usize>,
        stack: &mut Vec<Constraint>,
    ) -> Result<bool> {
        let span = unions[depth].len();
        if span > self.s {
            return Ok(false);
        }
        if q == 0 {
            return Ok(true);
        }
        self.budget.tick()?;

        let r = self.g.r();
        let c = self.g.max_overlap();
        let need = (q * r) as isize - (self.s - span) as isize;
        let best_sum =
            |t: usize| -> isize { (0..q).map(|i| (t + i * c).min(r)).sum::<usize>() as isize };
        let Some(mut t_min) = (0..=r).find(|&t| best_sum(t) >= need) else {
            return Ok(false);
        };
        if self.connected {
            t_min = t_min.max(1);
        }

        let mut cands = self.candidates(&unions[depth], t_min, chosen);
        cands.retain(|&(e, _)| {
            stack.iter().all(|con| {
                let t = self.g.mask(e).intersection_len(&con.union);
                t < con.overlap || (t == con.overlap && e > con.edge)
            })
        });
        cands.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        for (e, t) in cands {
            let (lo, hi) = unions.split_at_mut(depth + 1);
            hi[0].set_union(&lo[depth], self.g.mask(e));
            stack.push(Constraint {
                union: lo[depth].clone(),
                overlap: t,
                edge: e,
            });
            chosen.push(e);
            if self.go(unions, depth + 1, q - 1, chosen, stack)? {
                return Ok(true);
            }
            chosen.pop();
            stack.pop();
        }
        Ok(false)
    }

    fn admissible(&self, e: usize, chosen: &[usize]) -> bool {
        self.min_index.is_none_or(|m| e > m)
            && self.allowed.is_none_or(|a| a[e])
            && !chosen.contains(&e)
    }

    /// Edges with `|e ∩ U| >= t_min`, paired with that overlap.
    fn candidates(&self, u: &BitSet, t_min: usize, chosen: &[usize]) -> Vec<(usize, usize)> {
        let g = self.g;
        if t_min == 0 {
            return (0..g.len())
                .filter(|&e| self.admissible(e, chosen))
                .map(|e| (e, g.mask(e).intersection_len(u)))
                .collect();
        }
        let verts: Vec<Vertex> = u.iter().map(|v| v as Vertex).collect();
        let incident: usize = verts.iter().map(|&v| g.degree(v)).sum();
        let pair_count = verts.len() * verts.len().saturating_sub(1) / 2;
        let mut out = Vec::new();
        if t_min >= 2 && pair_count < incident {
            let mut raw: Vec<usize> = pairs_of(&verts)
                .flat_map(|p| g.edges_with_pair(p).iter().copied())
                .collect();
            raw.sort_unstable();
            raw.dedup();
            for e in raw {
                if self.admissible(e, chosen) {
                    let t = g.mask(e).intersection_len(u);
                    if t >= t_min {
                        out.push((e, t));
                    }
                }
            }
        } else {
            let mut raw: Vec<usize> = verts
                .iter()
                .flat_map(|&v| g.incidence(v).iter().copied())
                .collect();
            raw.sort_unstable();
            let mut i = 0;
            while i < raw.len() {
                let e = raw[i];
                let mut j = i;
                while j < raw.len() && raw[j] == e {
                    j += 1;
                }
                let t = j - i;
                if t >= t_min && self.admissible(e, chosen) {
                    out.push((e, t));
                }
                i = j;
            }
        }
        out
    }
}
