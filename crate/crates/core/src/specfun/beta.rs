//! Regularized incomplete beta function.

use crate::math::*;
use crate::specfun::kernels::binomial_density;
use crate::{Error, Result};

/// `I_x(a, b)`.
pub fn regularized_incomplete_beta(a: f64, b: f64, x: f64) -> Result<f64> {
    if x.is_nan() || !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("incomplete beta requires 0 <= x <= 1", x));
    }
    regularized_beta_pair(a, b, x, 1.0 - x).map(|(i, _)| i)
}

/// `(I_x(a, b), 1 - I_x(a, b))` with `y = 1 - x` supplied by the caller so
/// that neither tail loses precision to the subtraction.
pub fn regularized_beta_pair(a: f64, b: f64, x: f64, y: f64) -> Result<(f64, f64)> {
    if !a.is_finite() || a <= 0.0 {
        return Err(Error::domain("incomplete beta requires finite a > 0", a));
    }
    if !b.is_finite() || b <= 0.0 {
        return Err(Error::domain("incomplete beta requires finite b > 0", b));
    }
    if x.is_nan() || !(0.0..=1.0).contains(&x) {
        return Err(Error::domain("incomplete beta requires 0 <= x <= 1", x));
    }
    if x == 0.0 {
        return Ok((0.0, 1.0));
    }
    if y == 0.0 || x == 1.0 {
        return Ok((1.0, 0.0));
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        let i = beta_front(a, b, x, y) * continued_fraction(a, b, x)?;
        let i = i.clamp(0.0, 1.0);
        Ok((i, 1.0 - i))
    } else {
        let j = beta_front(b, a, y, x) * continued_fraction(b, a, y)?;
        let j = j.clamp(0.0, 1.0);
        Ok((1.0 - j, j))
    }
}

/// `x^a y^b Γ(a+b) / (Γ(a+1) Γ(b))`, the step `I_x(a,b) - I_x(a+1,b)`.
pub(crate) fn beta_front(a: f64, b: f64, x: f64, y: f64) -> f64 {
    binomial_density(a, a + b, x, y) * b / (a + b)
}

fn continued_fraction(a: f64, b: f64, x: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let cap = 10_000 + (50.0 * sqrt(a.max(b))) as usize;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if abs(d) < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=cap {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if abs(d) < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if abs(c) < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if abs(delta - 1.0) < f64::EPSILON {
            // continued fraction is for I_x(a,b) * a B(a,b) / (x^a y^b)
            return Ok(h);
        }
    }
    Err(Error::NoConvergence { what: "incomplete beta continued fraction", iterations: cap })
}
