//! Truncated continued-fraction expansion whose power-series coefficients are
//! the q-factorials: partial numerators alternate `q^(k-1) k_q x` and
//! `q^k k_q x` for k = 1, 2, 3, …

use crate::config::Caps;
use crate::error::{Error, Result};
use crate::qpoly::{q_int, QPoly};

/// Coefficients of x^0..=order of the continued fraction
/// `1/(1 - a1 x/(1 - a2 x/(…)))`.  The coefficient of x^n equals `n!_q`.
pub fn q_euler_series(order: usize, caps: &Caps) -> Result<Vec<QPoly>> {
    if order > caps.max_series_order {
        return Err(Error::CapExceeded {
            what: "series order",
            value: order,
            cap: caps.max_series_order,
        });
    }
    // Partial numerator coefficients a_1, a_2, …: a_(2k-1) = q^(k-1) k_q,
    // a_(2k) = q^k k_q.
    let depth = 2 * order + 2;
    let mut numerators = Vec::with_capacity(depth);
    for j in 1..=depth {
        let k = j.div_ceil(2);
        let power = if j % 2 == 1 { k - 1 } else { k };
        numerators.push(q_int(k).shift(power as i64));
    }
    // Evaluate bottom-up: F <- 1 / (1 - a_j x F), truncated at x^order.
    let mut f = series_one(order);
    for a in numerators.iter().rev() {
        let mut g = scale_shift(&f, a); // a_j x F
        for c in g.iter_mut() {
            *c = -&*c;
        }
        g[0] = &g[0] + &QPoly::one(); // 1 - a_j x F
        f = series_invert(&g);
    }
    Ok(f)
}

fn series_one(order: usize) -> Vec<QPoly> {
    let mut v = vec![QPoly::zero(); order + 1];
    v[0] = QPoly::one();
    v
}

/// Multiplies a series by `a * x`, truncating.
fn scale_shift(series: &[QPoly], a: &QPoly) -> Vec<QPoly> {
    let order = series.len() - 1;
    let mut out = vec![QPoly::zero(); order + 1];
    for k in 1..=order {
        out[k] = a * &series[k - 1];
    }
    out
}

/// Inverts a series with constant term 1.
fn series_invert(series: &[QPoly]) -> Vec<QPoly> {
    let order = series.len() - 1;
    let mut inv = vec![QPoly::zero(); order + 1];
    inv[0] = QPoly::one();
    for k in 1..=order {
        let mut acc = QPoly::zero();
        for i in 1..=k {
            acc = &acc + &(&series[i] * &inv[k - i]);
        }
        inv[k] = -&acc;
    }
    inv
}
