//! Evenly spaced boundary nodes: closed product forms for the normalized
//! determinants `D_S/D_∅` in three geometries — finitely many nodes on the
//! half-plane boundary, nodes at roots of unity on the disk, and the
//! infinite-node limit — plus marginals built from the same formal
//! combinations as the finite case.
//!
//! Limit values are exact objects: rational combinations of powers of
//! `2/pi`, converted to floating point only on output.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::config::Caps;
use crate::ddimer::{marginal_combo, Subpairing};
use crate::error::{Error, Result};
use crate::highprec::FixedCtx;

/// Normalized determinant for nodes at rational positions on the boundary of
/// the half plane: product over pairs (i in S, j outside) of
/// `|x_j - x_i|^((-1)^(1+i+j))`.
pub fn half_plane_ds(positions: &[BigRational], s: &BTreeSet<usize>) -> Result<BigRational> {
    let m = positions.len();
    for (a, xa) in positions.iter().enumerate() {
        for xb in positions.iter().skip(a + 1) {
            if xa == xb {
                return Err(Error::BadParameter("coincident node positions".into()));
            }
        }
    }
    if let Some(&max) = s.iter().next_back() {
        if max > m || s.iter().any(|&v| v == 0) {
            return Err(Error::BadParameter("set element out of range".into()));
        }
    }
    let mut value = BigRational::one();
    for &i in s {
        for j in 1..=m {
            if s.contains(&j) {
                continue;
            }
            let mut gap = &positions[j - 1] - &positions[i - 1];
            if gap < BigRational::zero() {
                gap = -gap;
            }
            if (i + j) % 2 == 1 {
                value *= gap;
            } else {
                value /= gap;
            }
        }
    }
    Ok(value)
}

/// A value carrying its decimal precision.
#[derive(Debug, Clone)]
pub struct PrecisionValue {
    pub value: f64,
    pub digits: u32,
    pub decimal: String,
}

/// Normalized determinant for 2n nodes at the 2n-th roots of unity: the
/// product form `(2/n)^|S| prod (2 sin(pi |i-j| / 2n))^(±2)` with the
/// exponent positive for even gaps and negative for odd gaps.
pub fn disk_ds(n: usize, s: &BTreeSet<usize>, digits: u32) -> Result<PrecisionValue> {
    let ctx = FixedCtx::new(digits);
    let fixed = disk_ds_fixed(&ctx, n, s)?;
    Ok(PrecisionValue {
        value: ctx.to_f64(&fixed),
        digits,
        decimal: ctx.to_decimal_string(&fixed),
    })
}

fn disk_ds_fixed(ctx: &FixedCtx, n: usize, s: &BTreeSet<usize>) -> Result<num_bigint::BigInt> {
    use num_bigint::BigInt;
    if n == 0 {
        return Err(Error::BadParameter("need at least one node pair".into()));
    }
    if let Some(&max) = s.iter().next_back() {
        if max > 2 * n || s.iter().any(|&v| v == 0) {
            return Err(Error::BadParameter("set element out of range".into()));
        }
    }
    let two_over_n = BigRational::new(BigInt::from(2), BigInt::from(n as i64));
    let mut value = ctx.one();
    for _ in 0..s.len() {
        value = ctx.mul(&value, &ctx.from_rational(&two_over_n));
    }
    let members: Vec<usize> = s.iter().copied().collect();
    for (a, &i) in members.iter().enumerate() {
        for &j in members.iter().skip(a + 1) {
            let gap = j - i;
            let t = BigRational::new(BigInt::from(gap as i64), BigInt::from(2 * n as i64));
            let sin = ctx.sin_pi_times(&t);
            let factor = ctx.mul(&(BigInt::from(2) * &sin), &(BigInt::from(2) * &sin));
            if factor.is_zero() {
                return Err(Error::BadParameter("coincident node positions".into()));
            }
            if gap % 2 == 0 {
                value = ctx.mul(&value, &factor);
            } else {
                value = ctx.div(&value, &factor);
            }
        }
    }
    Ok(value)
}

/// An exact rational combination of powers of `2/pi`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PiExpr {
    terms: BTreeMap<usize, BigRational>,
}

impl PiExpr {
    pub fn zero() -> Self {
        PiExpr::default()
    }

    pub fn term(power: usize, coeff: BigRational) -> Self {
        let mut e = PiExpr::default();
        e.add_term(power, coeff);
        e
    }

    pub fn add_term(&mut self, power: usize, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(power).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&power);
        }
    }

    pub fn add_scaled(&mut self, other: &PiExpr, scale: &BigInt) {
        for (&p, c) in &other.terms {
            self.add_term(p, c * BigRational::from(scale.clone()));
        }
    }

    pub fn terms(&self) -> &BTreeMap<usize, BigRational> {
        &self.terms
    }

    pub fn to_f64(&self) -> f64 {
        let two_over_pi = 2.0 / std::f64::consts::PI;
        self.terms
            .iter()
            .map(|(&p, c)| c.to_f64().unwrap_or(f64::NAN) * two_over_pi.powi(p as i32))
            .sum()
    }
}

impl fmt::Display for PiExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&p, c) in self.terms.iter().rev() {
            if first {
                first = false;
            } else {
                f.write_str(" + ")?;
            }
            if p == 0 {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*(2/pi)^{p}")?;
            }
        }
        Ok(())
    }
}

/// Normalized determinant in the infinite-node limit (unit spacing): the
/// exact value `(2/pi)^|S|` times even-gap squares over odd-gap squares.
/// The product expression also serves as the definition for non-balanced
/// sets.
pub fn limit_ds(s: &BTreeSet<usize>) -> Result<PiExpr> {
    if s.iter().any(|&v| v == 0) {
        return Err(Error::BadParameter("set elements are 1-based".into()));
    }
    let members: Vec<usize> = s.iter().copied().collect();
    let mut coeff = BigRational::one();
    for (a, &i) in members.iter().enumerate() {
        for &j in members.iter().skip(a + 1) {
            let gap = BigInt::from((j - i) as i64);
            let square = BigRational::from(&gap * &gap);
            if (j - i) % 2 == 0 {
                coeff *= square;
            } else {
                coeff /= square;
            }
        }
    }
    Ok(PiExpr::term(s.len(), coeff))
}

/// Marginal probability of a local subpairing in the infinite-node limit.
pub fn limit_marginal(sub: &Subpairing, caps: &Caps) -> Result<PiExpr> {
    let combo = marginal_combo(sub, caps)?;
    let mut out = PiExpr::zero();
    for (set, c) in combo.terms() {
        out.add_scaled(&limit_ds(set)?, c);
    }
    Ok(out)
}

/// Marginal probability of a local subpairing for 2n nodes on the disk,
/// accumulated in fixed point.
pub fn disk_marginal(n: usize, sub: &Subpairing, caps: &Caps, digits: u32) -> Result<PrecisionValue> {
    let ctx = FixedCtx::new(digits);
    let combo = marginal_combo(sub, caps)?;
    let mut total = num_bigint::BigInt::from(0);
    for (set, c) in combo.terms() {
        total += c * disk_ds_fixed(&ctx, n, set)?;
    }
    Ok(PrecisionValue {
        value: ctx.to_f64(&total),
        digits,
        decimal: ctx.to_decimal_string(&total),
    })
}

/// Marginal probability for nodes at explicit half-plane positions.
pub fn half_plane_marginal(
    positions: &[BigRational],
    sub: &Subpairing,
    caps: &Caps,
) -> Result<BigRational> {
    let combo = marginal_combo(sub, caps)?;
    let mut total = BigRational::zero();
    for (set, c) in combo.terms() {
        total += BigRational::from(c.clone()) * half_plane_ds(positions, set)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn disk_singleton_is_two_over_n() {
        for n in [3usize, 5, 10, 100] {
            for i in [1usize, 2, 3] {
                let d = disk_ds(n, &set(&[i]), 40).unwrap();
                let expect = 2.0 / n as f64;
                assert!((d.value - expect).abs() < 1e-12, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn limit_pair_odd_gap() {
        // S = {i, j} with odd gap: (4/pi^2) / (i-j)^2
        let e = limit_ds(&set(&[2, 5])).unwrap();
        assert_eq!(e.terms().len(), 1);
        let coeff = &e.terms()[&2];
        assert_eq!(coeff, &BigRational::new(BigInt::from(1), BigInt::from(9)));
        let expect = (2.0 / std::f64::consts::PI).powi(2) / 9.0;
        assert!((e.to_f64() - expect).abs() < 1e-15);
    }

    #[test]
    fn adjacent_pairs_limit_value() {
        // Pr(1-2, 3-4 among infinitely many nodes) =
        // (2/pi)^4 * 16/9 - (2/pi)^2 * 1/9 = 0.246979...
        let sub = Subpairing::parse("1-2,3-4", 4).unwrap();
        let e = limit_marginal(&sub, &Caps::default()).unwrap();
        assert_eq!(
            e.terms()[&4],
            BigRational::new(BigInt::from(16), BigInt::from(9))
        );
        assert_eq!(
            e.terms()[&2],
            BigRational::new(BigInt::from(-1), BigInt::from(9))
        );
        assert!((e.to_f64() - 0.246979).abs() < 1e-6);
    }

    #[test]
    fn disk_converges_to_limit() {
        let n = 10_000usize;
        for s in [
            set(&[1, 2]),
            set(&[1, 4]),
            set(&[1, 2, 3, 4]),
            set(&[2, 3, 5, 8]),
        ] {
            let disk = disk_ds(n, &s, 40).unwrap();
            let limit = limit_ds(&s).unwrap().to_f64();
            let rel = ((disk.value - limit) / limit).abs();
            assert!(rel < 1e-6, "set {s:?}: rel {rel}");
        }
    }

    #[test]
    fn disk_marginal_converges() {
        let sub = Subpairing::parse("1-2,3-4", 4).unwrap();
        let caps = Caps::default();
        let limit = limit_marginal(&sub, &caps).unwrap().to_f64();
        let disk = disk_marginal(10_000, &sub, &caps, 40).unwrap();
        assert!(((disk.value - limit) / limit).abs() < 1e-3);
    }

    #[test]
    fn half_plane_matches_limit_at_integers() {
        // with positions 1..=2m (unit spacing), the product formula is the
        // finite-n version of the limit's gap products
        let positions: Vec<BigRational> =
            (1..=8).map(|k| BigRational::from(BigInt::from(k))).collect();
        let v = half_plane_ds(&positions, &set(&[3, 4])).unwrap();
        // exponents: pairs (i in S, j outside S)
        assert!(v > BigRational::zero());
        // coincident positions rejected
        let bad: Vec<BigRational> = vec![
            BigRational::from(BigInt::from(1)),
            BigRational::from(BigInt::from(1)),
        ];
        assert!(half_plane_ds(&bad, &set(&[1])).is_err());
    }

    #[test]
    fn full_set_equals_empty_set() {
        // S = everything: no (in, out) pairs, value 1 = D_empty/D_empty
        let positions: Vec<BigRational> =
            (1..=4).map(|k| BigRational::from(BigInt::from(k))).collect();
        assert_eq!(
            half_plane_ds(&positions, &set(&[1, 2, 3, 4])).unwrap(),
            BigRational::one()
        );
        assert_eq!(
            half_plane_ds(&positions, &BTreeSet::new()).unwrap(),
            BigRational::one()
        );
    }
}
