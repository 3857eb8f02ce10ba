#![allow(dead_code)]

//! Shared test fixtures: small planar graphs with boundary nodes in circular
//! order.

use num_bigint::BigInt;
use num_rational::BigRational;

use dycktile::graph::{grid, WeightedGraph};

pub fn rat(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}

pub fn ratq(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// 2x2 grid (a 4-cycle) with nodes at all four vertices.
pub fn four_cycle() -> WeightedGraph {
    grid(2, 2).with_nodes(vec![0, 1, 3, 2]).unwrap()
}

/// 2x3 grid with 4 boundary nodes of alternating color.
pub fn grid23_four_nodes() -> WeightedGraph {
    grid(2, 3).with_nodes(vec![0, 1, 2, 5]).unwrap()
}

/// 2x3 grid with all 6 boundary vertices as nodes.
pub fn grid23_six_nodes() -> WeightedGraph {
    grid(2, 3).with_nodes(vec![0, 1, 2, 5, 4, 3]).unwrap()
}

/// 4x4 grid with nodes at the corners.
pub fn grid44_four_nodes() -> WeightedGraph {
    grid(4, 4).with_nodes(vec![0, 3, 15, 12]).unwrap()
}

/// 4x4 grid with six boundary nodes of alternating color.
pub fn grid44_six_nodes() -> WeightedGraph {
    grid(4, 4).with_nodes(vec![0, 1, 2, 3, 15, 12]).unwrap()
}

/// 2x3 grid with non-unit rational weights (still bipartite planar).
pub fn weighted_grid23() -> WeightedGraph {
    let weights = [
        ratq(1, 1),
        ratq(3, 2),
        ratq(2, 1),
        ratq(5, 3),
        ratq(1, 2),
        ratq(7, 4),
        ratq(4, 3),
    ];
    let base = grid(2, 3);
    let edges: Vec<(usize, usize, BigRational)> = base
        .edges()
        .iter()
        .zip(weights.iter())
        .map(|(&(u, v, _), w)| (u, v, w.clone()))
        .collect();
    WeightedGraph::new(6, edges, vec![0, 1, 2, 5]).unwrap()
}

/// 4-cycle with one diagonal; the outer face is the 4-cycle.
pub fn braced_cycle() -> WeightedGraph {
    WeightedGraph::new(
        4,
        vec![
            (0, 1, rat(1)),
            (1, 2, rat(2)),
            (2, 3, rat(1)),
            (3, 0, rat(3)),
            (0, 2, rat(2)),
        ],
        vec![0, 1, 2, 3],
    )
    .unwrap()
}

/// Wheel on five vertices: hub 4 inside the 4-cycle boundary.
pub fn wheel() -> WeightedGraph {
    WeightedGraph::new(
        5,
        vec![
            (0, 1, rat(1)),
            (1, 2, rat(1)),
            (2, 3, rat(2)),
            (3, 0, rat(1)),
            (0, 4, rat(1)),
            (1, 4, rat(3)),
            (2, 4, rat(1)),
            (3, 4, rat(2)),
        ],
        vec![0, 1, 2, 3],
    )
    .unwrap()
}

/// 3x3 grid network with six of the eight boundary vertices as nodes.
pub fn grid33_six_nodes() -> WeightedGraph {
    grid(3, 3).with_nodes(vec![0, 1, 2, 5, 8, 6]).unwrap()
}
