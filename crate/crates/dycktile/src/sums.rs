//! Row- and column-sum identity harnesses for the inverse matrix.
//!
//! These identities were observed experimentally; the harnesses verify them
//! on demand and report rather than assume.  A row fixes the lower path and
//! sums over every upper path above it; a column fixes the upper path and
//! sums over every lower path below it.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::catalan::{chords_of, DyckPath};
use crate::error::Result;
use crate::matrix::minv_of_skew;
use crate::qpoly::{q_fact, q_int, QPoly};
use crate::skew::SkewShape;
use crate::tiling::f_poly_recursive;

/// All Dyck paths lying weakly above `lower` (pointwise).
pub fn paths_above(lower: &DyckPath) -> Vec<DyckPath> {
    let len = lower.len();
    let mut out = Vec::new();
    let mut heights = vec![0i64];
    fn rec(i: usize, len: usize, lower: &DyckPath, heights: &mut Vec<i64>, out: &mut Vec<DyckPath>) {
        if i == len {
            out.push(DyckPath::from_heights(heights.clone()).expect("constructed path is valid"));
            return;
        }
        let h = heights[i];
        for step in [-1i64, 1] {
            let nh = h + step;
            // stay above the floor, keep the return to zero reachable
            if nh >= lower.height(i + 1) && nh >= 0 && nh <= (len - i - 1) as i64 {
                heights.push(nh);
                rec(i + 1, len, lower, heights, out);
                heights.pop();
            }
        }
    }
    rec(0, len, lower, &mut heights, &mut out);
    out
}

/// All Dyck paths lying weakly below `upper` (pointwise).
pub fn paths_below(upper: &DyckPath) -> Vec<DyckPath> {
    let len = upper.len();
    let mut out = Vec::new();
    let mut heights = vec![0i64];
    fn rec(i: usize, len: usize, upper: &DyckPath, heights: &mut Vec<i64>, out: &mut Vec<DyckPath>) {
        if i == len {
            out.push(DyckPath::from_heights(heights.clone()).expect("constructed path is valid"));
            return;
        }
        let h = heights[i];
        for step in [-1i64, 1] {
            let nh = h + step;
            if nh >= 0 && nh <= upper.height(i + 1) && nh <= (len - i - 1) as i64 {
                heights.push(nh);
                rec(i + 1, len, upper, heights, out);
                heights.pop();
            }
        }
    }
    rec(0, len, upper, &mut heights, &mut out);
    out
}

/// Result of a row-sum check: the tiling-side sum, the predicted quotient
/// (when the division is exact), and whether they agree.
#[derive(Debug, Clone)]
pub struct RowSumReport {
    pub lhs: QPoly,
    pub rhs: Option<QPoly>,
    pub holds: bool,
}

/// Row identity: sum over upper paths of `q^(area/2) f(q^(1/2))` against
/// `n!_q` divided by the product of chord-length analogues of the row path.
pub fn rowsum_check(lower: &DyckPath) -> Result<RowSumReport> {
    let mut lhs = QPoly::zero();
    for mu in paths_above(lower) {
        let shape = SkewShape::new(lower.clone(), mu)?;
        let f_half = f_poly_recursive(&shape).substitute_sqrt()?;
        let weight = QPoly::monomial_doubled(shape.area() as i64, 1.into());
        lhs = &lhs + &(&weight * &f_half);
    }
    let mut denom = QPoly::one();
    for chord in chords_of(lower) {
        denom = &denom * &q_int(chord.length());
    }
    let rhs = q_fact(lower.n()).div_exact(&denom).ok();
    let holds = rhs.as_ref().map(|r| r == &lhs).unwrap_or(false);
    Ok(RowSumReport { lhs, rhs, holds })
}

/// Scalar row sum (q = 1): total number of cover-inclusive tilings over all
/// upper paths, compared against `n!` over the product of chord lengths.
pub fn rowsum_count(lower: &DyckPath) -> (BigInt, Option<BigInt>) {
    let mut total = BigInt::from(0);
    for mu in paths_above(lower) {
        let shape = SkewShape::new(lower.clone(), mu).expect("equal lengths");
        total += minv_of_skew(&shape).abs();
    }
    let mut fact = BigInt::from(1);
    for k in 1..=lower.n() {
        fact *= BigInt::from(k);
    }
    let mut denom = BigInt::from(1);
    for chord in chords_of(lower) {
        denom *= BigInt::from(chord.length());
    }
    let expected = if (&fact % &denom) == BigInt::from(0) {
        Some(fact / denom)
    } else {
        None
    };
    (total, expected)
}

/// Result of a column-sum check.
#[derive(Debug, Clone)]
pub struct ColSumReport {
    pub lhs: QPoly,
    pub rhs: QPoly,
    pub holds: bool,
}

/// Column identity: sum over lower paths of `f(q)` against the product of
/// chord-height analogues of the column path (heights counted from 1).
pub fn colsum_check(upper: &DyckPath) -> Result<ColSumReport> {
    let mut lhs = QPoly::zero();
    for lambda in paths_below(upper) {
        let shape = SkewShape::new(lambda, upper.clone())?;
        lhs = &lhs + &f_poly_recursive(&shape);
    }
    let mut rhs = QPoly::one();
    for chord in chords_of(upper) {
        rhs = &rhs * &q_int(chord.height as usize + 1);
    }
    let holds = lhs == rhs;
    Ok(ColSumReport { lhs, rhs, holds })
}

/// Scalar column sum (q = 1).
pub fn colsum_count(upper: &DyckPath) -> (BigInt, BigInt) {
    let mut total = BigInt::from(0);
    for lambda in paths_below(upper) {
        let shape = SkewShape::new(lambda, upper.clone()).expect("equal lengths");
        total += minv_of_skew(&shape).abs();
    }
    let mut expected = BigInt::from(1);
    for chord in chords_of(upper) {
        expected *= BigInt::from(chord.height + 1);
    }
    (total, expected)
}
