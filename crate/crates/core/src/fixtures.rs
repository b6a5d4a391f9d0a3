//! Small named graphs used by tests, the self-test and the docs.

use crate::graph::HyperGraph;

fn build(n: usize, r: usize, edges: &[&[u32]]) -> HyperGraph {
    HyperGraph::from_edges(n, r, edges).expect("fixture is a valid graph")
}

/// The Fano plane, the Steiner triple system on 7 points.
pub fn sts7() -> HyperGraph {
    build(
        7,
        3,
        &[
            &[0, 1, 2],
            &[0, 3, 4],
            &[0, 5, 6],
            &[1, 3, 5],
            &[1, 4, 6],
            &[2, 3, 6],
            &[2, 4, 5],
        ],
    )
}

/// `{0,1,2}, {1,2,3}`.
pub fn diamond3() -> HyperGraph {
    build(4, 3, &[&[0, 1, 2], &[1, 2, 3]])
}

/// `{0,1,2,3}, {2,3,4,5}`.
pub fn diamond4() -> HyperGraph {
    build(6, 4, &[&[0, 1, 2, 3], &[2, 3, 4, 5]])
}

/// A single edge on `r` vertices.
pub fn single_edge(r: usize) -> HyperGraph {
    let e: Vec<u32> = (0..r as u32).collect();
    HyperGraph::from_edges(r, r, &[e]).expect("valid edge")
}

/// `{0,1,2}, {0,3,4}, {1,3,4}`: an edge and a diamond that 2-claims `01`.
pub fn edge_and_diamond() -> HyperGraph {
    build(5, 3, &[&[0, 1, 2], &[0, 3, 4], &[1, 3, 4]])
}

/// A 4-graph with k = 6 in mind: a three-edge chain capped at each end by
/// a diamond that meets the rest of the graph in exactly two vertices.
pub fn capped_chain() -> HyperGraph {
    build(
        16,
        4,
        &[
            &[0, 1, 2, 3],
            &[2, 3, 4, 5],
            &[0, 5, 6, 7],
            &[6, 7, 8, 9],
            &[8, 9, 10, 11],
            &[10, 12, 13, 14],
            &[11, 13, 14, 15],
        ],
    )
}

/// Same cluster shape as [`capped_chain`] but the ends are three-edge
/// chains joined through a single edge, so no end is a diamond.
pub fn uncapped_chain() -> HyperGraph {
    build(
        17,
        4,
        &[
            &[0, 1, 2, 3],
            &[2, 3, 4, 5],
            &[4, 5, 6, 7],
            &[0, 4, 8, 13],
            &[8, 10, 11, 12],
            &[11, 12, 13, 14],
            &[13, 14, 15, 16],
        ],
    )
}

/// Two vertex-disjoint-apart-from-`x`,`y` diamonds, each 2-claiming `xy`
/// with `x = 0`, `y = 9`.
pub fn twin_diamonds() -> HyperGraph {
    build(
        10,
        4,
        &[&[0, 1, 2, 3], &[1, 2, 4, 9], &[0, 5, 6, 7], &[5, 6, 8, 9]],
    )
}
