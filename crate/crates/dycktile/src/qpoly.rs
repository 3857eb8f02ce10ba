//! Sparse integer-coefficient polynomials in `q` whose exponents may be
//! half-integers (and may be negative).  Exponents are stored doubled, so all
//! arithmetic stays in exact integers; substituting `q -> q^(1/2)` or
//! `q -> q^(-2)` is an exponent relabeling.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A finitely supported map from half-integer exponents to integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    // key = 2 * exponent
    coeffs: BTreeMap<i64, BigInt>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if c != 0 {
            coeffs.insert(0, BigInt::from(c));
        }
        QPoly { coeffs }
    }

    /// The monomial `c * q^(num/2)` given the doubled exponent `num`.
    pub fn monomial_doubled(doubled_exp: i64, c: BigInt) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(doubled_exp, c);
        }
        QPoly { coeffs }
    }

    /// The monomial `c * q^e` for integer `e`.
    pub fn monomial(e: i64, c: i64) -> Self {
        QPoly::monomial_doubled(2 * e, BigInt::from(c))
    }

    /// Builds from integer-exponent coefficient pairs.
    pub fn from_pairs(pairs: &[(i64, i64)]) -> Self {
        let mut p = QPoly::zero();
        for &(e, c) in pairs {
            p.add_term(2 * e, BigInt::from(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).map(|c| c.is_one()).unwrap_or(false)
    }

    /// Coefficient of `q^e` for integer `e`.
    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&(2 * e)).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Coefficient for a doubled exponent.
    pub fn coeff_doubled(&self, doubled: i64) -> BigInt {
        self.coeffs.get(&doubled).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterates `(doubled_exponent, coefficient)` in ascending exponent order.
    pub fn terms_doubled(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&d, c)| (d, c))
    }

    /// True when every exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.coeffs.keys().all(|d| d % 2 == 0)
    }

    pub fn min_doubled_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_doubled_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_term(&mut self, doubled: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(doubled).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&doubled);
        }
    }

    /// Multiplies by `q^(doubled/2)`.
    pub fn shift_doubled(&self, doubled: i64) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d + doubled, c.clone())).collect(),
        }
    }

    /// Multiplies by `q^e` for integer `e`.
    pub fn shift(&self, e: i64) -> QPoly {
        self.shift_doubled(2 * e)
    }

    /// Substitutes `q -> q^(1/2)`; requires integer exponents.
    pub fn substitute_sqrt(&self) -> Result<QPoly> {
        if !self.has_integer_exponents() {
            return Err(Error::BadParameter(
                "q -> q^(1/2) substitution needs integer exponents".into(),
            ));
        }
        Ok(QPoly {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d / 2, c.clone())).collect(),
        })
    }

    /// Substitutes `q -> q^(-2)`.
    pub fn substitute_inv_square(&self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(&d, c)| (-2 * d, c.clone())).collect(),
        }
    }

    /// Evaluates at an integer point; requires integer exponents (and a
    /// nonzero point when negative exponents are present).
    pub fn eval_int(&self, q: i64) -> Result<BigRational> {
        self.eval(&BigRational::from(BigInt::from(q)))
    }

    /// Evaluates at a rational point; requires integer exponents.
    pub fn eval(&self, q: &BigRational) -> Result<BigRational> {
        if !self.has_integer_exponents() {
            return Err(Error::BadParameter("evaluation needs integer exponents".into()));
        }
        let mut acc = BigRational::zero();
        for (&d, c) in &self.coeffs {
            let e = d / 2;
            if e < 0 && q.is_zero() {
                return Err(Error::BadParameter("negative exponent at q = 0".into()));
            }
            let p = if e >= 0 {
                q.pow(e as i32)
            } else {
                BigRational::one() / q.pow((-e) as i32)
            };
            acc += BigRational::from(c.clone()) * p;
        }
        Ok(acc)
    }

    /// Value at q = 1, i.e. the coefficient sum.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Value at q = -1; requires integer exponents.
    pub fn eval_minus_one(&self) -> Result<BigInt> {
        if !self.has_integer_exponents() {
            return Err(Error::BadParameter("evaluation needs integer exponents".into()));
        }
        let mut acc = BigInt::zero();
        for (&d, c) in &self.coeffs {
            if (d / 2).rem_euclid(2) == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        Ok(acc)
    }

    /// Exact division; errors when the remainder is nonzero.  Works on any
    /// exponent support (Laurent-style) because the quotient of two finitely
    /// supported polynomials is shifted back into place.
    pub fn div_exact(&self, divisor: &QPoly) -> Result<QPoly> {
        if divisor.is_zero() {
            return Err(Error::BadParameter("division by the zero polynomial".into()));
        }
        if self.is_zero() {
            return Ok(QPoly::zero());
        }
        // Normalize both so the lowest exponent is 0.
        let a_shift = self.min_doubled_exp().unwrap();
        let b_shift = divisor.min_doubled_exp().unwrap();
        let mut rem = self.shift_doubled(-a_shift);
        let div = divisor.shift_doubled(-b_shift);
        let div_top = div.max_doubled_exp().unwrap();
        let div_lead = div.coeff_doubled(div_top);
        let mut quot = QPoly::zero();
        while !rem.is_zero() {
            let rem_top = rem.max_doubled_exp().unwrap();
            if rem_top < div_top {
                return Err(Error::BadParameter("non-exact polynomial division".into()));
            }
            let rem_lead = rem.coeff_doubled(rem_top);
            let (q, r) = num_integer::Integer::div_rem(&rem_lead, &div_lead);
            if !r.is_zero() {
                return Err(Error::BadParameter("non-exact polynomial division".into()));
            }
            let mono = QPoly::monomial_doubled(rem_top - div_top, q);
            rem = &rem - &(&mono * &div);
            quot = &quot + &mono;
        }
        Ok(quot.shift_doubled(a_shift - b_shift))
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (&d, c) in &rhs.coeffs {
            out.add_term(d, c.clone());
        }
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (&d, c) in &rhs.coeffs {
            out.add_term(d, -c.clone());
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|(&d, c)| (d, -c.clone())).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (&da, ca) in &self.coeffs {
            for (&db, cb) in &rhs.coeffs {
                out.add_term(da + db, ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (&d, c) in &self.coeffs {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
                first = false;
            } else if neg {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let exp = ExpHalf(d);
            if d == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "q{exp}")?;
            } else {
                write!(f, "{mag}*q{exp}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QPoly({self})")
    }
}

struct ExpHalf(i64);

impl fmt::Display for ExpHalf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.0;
        if d == 2 {
            Ok(())
        } else if d % 2 == 0 {
            write!(f, "^{}", d / 2)
        } else {
            write!(f, "^({d}/2)")
        }
    }
}

/// Exponent label for JSON output: `"3"` or `"5/2"`.
pub fn exponent_label(doubled: i64) -> String {
    if doubled % 2 == 0 {
        format!("{}", doubled / 2)
    } else {
        format!("{doubled}/2")
    }
}

// ---- q-analogues ----

/// `k_q = 1 + q + … + q^(k-1)`.
pub fn q_int(k: usize) -> QPoly {
    let mut p = QPoly::zero();
    for e in 0..k {
        p.add_term(2 * e as i64, BigInt::one());
    }
    p
}

/// `k!_q = k_q (k-1)_q … 1_q`.
pub fn q_fact(k: usize) -> QPoly {
    let mut p = QPoly::one();
    for j in 1..=k {
        p = &p * &q_int(j);
    }
    p
}

/// Gaussian binomial coefficient, built by the Pascal recursion so no
/// division is involved.
pub fn q_binom(a: usize, b: usize) -> Result<QPoly> {
    if b > a {
        return Err(Error::BadParameter(format!("binomial ({a} choose {b}) needs b <= a")));
    }
    let b = b.min(a - b);
    let mut row = vec![QPoly::one()];
    for i in 1..=a {
        let upto = b.min(i);
        let mut next = Vec::with_capacity(upto + 1);
        next.push(QPoly::one());
        for j in 1..=upto {
            let left = if j - 1 < row.len() { row[j - 1].clone() } else { QPoly::zero() };
            let right = if j < row.len() { row[j].shift(j as i64) } else { QPoly::zero() };
            next.push(&left + &right);
        }
        row = next;
    }
    Ok(row[b].clone())
}
