//! Saddle-point forms of the Poisson and binomial densities.
//!
//! Evaluating `x^a e^{-x} / Γ(a+1)` as `exp(a ln x - x - lnΓ(a+1))` loses
//! roughly `|lnΓ(a+1)| · ε` absolute accuracy in the exponent, which for
//! `a ~ 10^5` is already 1e-10 relative. The deviance forms below keep full
//! relative precision for any size of argument.

use crate::math::*;
use crate::specfun::gamma::log_gamma_unchecked;

/// `lnΓ(n+1) - [(n+½) ln n - n + ln√(2π)]`, the Stirling remainder.
pub(crate) fn stirlerr(n: f64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if n <= 15.0 {
        return log_gamma_unchecked(n + 1.0) - (n + 0.5) * ln(n) + n - LN_SQRT_2PI;
    }
    let nn = n * n;
    if n > 500.0 {
        (S0 - S1 / nn) / n
    } else if n > 80.0 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if n > 35.0 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x/np) + np - x`, accurate when `x ≈ np`.
pub(crate) fn bd0(x: f64, np: f64) -> f64 {
    if abs(x - np) < 0.1 * (x + np) {
        let v = (x - np) / (x + np);
        let mut s = (x - np) * v;
        let mut ej = 2.0 * x * v;
        let v2 = v * v;
        for j in 1..1000 {
            ej *= v2;
            let s1 = s + ej / f64::from(2 * j + 1);
            if s1 == s {
                return s1;
            }
            s = s1;
        }
        return s;
    }
    x * ln(x / np) + np - x
}

/// `x^s e^{-x} / Γ(s+1)` for real `s ≥ 0`, `x ≥ 0`.
///
/// At integer `s` this is the Poisson probability mass `P(N = s)` for
/// `N ~ Poisson(x)`.
pub(crate) fn poisson_density(s: f64, x: f64) -> f64 {
    if x == 0.0 {
        return if s == 0.0 { 1.0 } else { 0.0 };
    }
    if s == 0.0 {
        return exp(-x);
    }
    if s < 1.0 {
        // stirlerr is poorly conditioned near zero; the direct form is exact enough here.
        return exp(s * ln(x) - x - log_gamma_unchecked(s + 1.0));
    }
    exp(-stirlerr(s) - bd0(s, x)) / sqrt(core::f64::consts::TAU * s)
}

/// Generalised binomial density
/// `Γ(n+1)/(Γ(x+1)Γ(n-x+1)) p^x q^(n-x)` for real `0 ≤ x ≤ n`, `p + q = 1`.
pub(crate) fn binomial_density(x: f64, n: f64, p: f64, q: f64) -> f64 {
    if p == 0.0 {
        return if x == 0.0 { 1.0 } else { 0.0 };
    }
    if q == 0.0 {
        return if x == n { 1.0 } else { 0.0 };
    }
    if x == 0.0 {
        return exp(n * ln(q));
    }
    if x == n {
        return exp(n * ln(p));
    }
    if x < 1.0 || n - x < 1.0 {
        let lc = log_gamma_unchecked(n + 1.0)
            - log_gamma_unchecked(x + 1.0)
            - log_gamma_unchecked(n - x + 1.0);
        return exp(lc + x * ln(p) + (n - x) * ln(q));
    }
    let lc = stirlerr(n) - stirlerr(x) - stirlerr(n - x) - bd0(x, n * p) - bd0(n - x, n * q);
    let lf = LN_2PI + ln(x) + ln_1p(-x / n);
    exp(lc - 0.5 * lf)
}
