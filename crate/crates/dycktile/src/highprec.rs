//! Fixed-point decimal arithmetic on big integers, enough for the
//! trigonometric products of the disk geometry at configurable precision.
//! Values are integers scaled by `10^digits`; pi comes from a Machin-style
//! arctangent series and sine from its Taylor series after range reduction.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

/// Fixed-point context with a given number of decimal digits.
#[derive(Debug, Clone, Copy)]
pub struct FixedCtx {
    pub digits: u32,
}

impl FixedCtx {
    pub fn new(digits: u32) -> Self {
        FixedCtx { digits }
    }

    pub fn scale(&self) -> BigInt {
        BigInt::from(10u32).pow(self.digits)
    }

    pub fn one(&self) -> BigInt {
        self.scale()
    }

    pub fn from_rational(&self, r: &BigRational) -> BigInt {
        div_round(&(r.numer() * self.scale()), r.denom())
    }

    pub fn from_int(&self, v: i64) -> BigInt {
        BigInt::from(v) * self.scale()
    }

    pub fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        div_round(&(a * b), &self.scale())
    }

    pub fn div(&self, a: &BigInt, b: &BigInt) -> BigInt {
        div_round(&(a * self.scale()), b)
    }

    pub fn to_f64(&self, a: &BigInt) -> f64 {
        let r = BigRational::new(a.clone(), self.scale());
        r.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with the context's full precision.
    pub fn to_decimal_string(&self, a: &BigInt) -> String {
        let scale = self.scale();
        let neg = a.is_negative();
        let mag = a.abs();
        let (int, frac) = mag.div_rem(&scale);
        let frac_str = format!("{:0>width$}", frac.to_string(), width = self.digits as usize);
        format!("{}{}.{}", if neg { "-" } else { "" }, int, frac_str)
    }

    /// Pi by Machin's formula with guard digits.
    pub fn pi(&self) -> BigInt {
        let guard = FixedCtx::new(self.digits + 10);
        let pi = BigInt::from(16) * atan_inv(&guard, 5) - BigInt::from(4) * atan_inv(&guard, 239);
        div_round(&pi, &BigInt::from(10u32).pow(10))
    }

    /// `sin(pi * t)` for rational `t`.
    pub fn sin_pi_times(&self, t: &BigRational) -> BigInt {
        let guard = FixedCtx::new(self.digits + 10);
        // reduce to [0, 2)
        let two = BigRational::from(BigInt::from(2));
        let mut t = t - (t / &two).floor() * &two;
        let mut sign = 1i64;
        if t >= BigRational::from(BigInt::from(1)) {
            sign = -1;
            t -= BigRational::from(BigInt::from(1));
        }
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        if t > half {
            t = BigRational::from(BigInt::from(1)) - t;
        }
        let x = guard.mul(&guard.pi(), &guard.from_rational(&t));
        let x2 = guard.mul(&x, &x);
        let mut term = x.clone();
        let mut sum = x;
        let mut k = 1i64;
        while !term.is_zero() {
            term = guard.mul(&term, &x2);
            term = div_round(&term, &BigInt::from(2 * k * (2 * k + 1)));
            term = -term;
            sum += &term;
            k += 1;
        }
        div_round(&(sum * BigInt::from(sign)), &BigInt::from(10u32).pow(10))
    }
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // round to nearest, ties away from zero
    let (q, r) = a.div_rem(b);
    let doubled = r.abs() * BigInt::from(2);
    if doubled >= b.abs() {
        if (a.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

fn atan_inv(ctx: &FixedCtx, k: i64) -> BigInt {
    // atan(1/k) = sum (-1)^i / ((2i+1) k^(2i+1))
    let k2 = BigInt::from(k * k);
    let mut power = ctx.one() / BigInt::from(k);
    let mut total = BigInt::zero();
    let mut i = 0i64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * i + 1);
        if i % 2 == 0 {
            total += &term;
        } else {
            total -= &term;
        }
        power /= &k2;
        i += 1;
    }
    total
}
