//! Exact combinatorics of Dyck paths and their relatives: the incidence
//! matrix of the parenthesis-reversal relation and its inverse, ribbon
//! tilings of skew shapes with equal-height endpoints, q-polynomial
//! identities, double-dimer pairing probabilities computed from boundary
//! measurements, and grove partition-function ratios computed from electrical
//! response matrices — all validated against brute-force oracles on small
//! graphs.
//!
//! Everything is exact: integers and rationals are arbitrary precision, and
//! the only floating-point values are final outputs of the evenly-spaced-node
//! formulas, which are computed in fixed-point decimal first.

pub mod catalan;
pub mod closed_forms;
pub mod config;
pub mod ddimer;
pub mod error;
pub mod euler;
pub mod evenly;
pub mod graph;
pub mod grove;
pub mod highprec;
pub mod linalg;
pub mod matrix;
pub mod oracle;
pub mod qpoly;
pub mod skew;
pub mod sums;
pub mod tiling;

pub use catalan::{BalancedWord, Chord, ConfiningSet, DyckPath, NoncrossingPairing};
pub use config::Caps;
pub use ddimer::{PairingDistribution, Subpairing, XMatrix};
pub use error::{Error, Result};
pub use graph::WeightedGraph;
pub use grove::{GroveRatios, ResponseMatrix};
pub use matrix::TriMatrix;
pub use qpoly::QPoly;
pub use skew::SkewShape;
pub use tiling::{DyckTile, DyckTiling};
