//! Modified Bessel function of the first kind, real order `ν ≥ 0`.

use crate::math::*;
use crate::specfun::kernels::poisson_density;
use crate::{Error, Result};

/// Below this argument the Hankel expansion is never attempted.
const HANKEL_MIN_T: f64 = 50.0;

/// `I_ν(t)`. Errors with [`Error::Overflow`] when the value exceeds `f64`.
pub fn bessel_i(nu: f64, t: f64) -> Result<f64> {
    let scaled = bessel_i_scaled(nu, t)?;
    if t < 700.0 {
        return Ok(scaled * exp(t));
    }
    if scaled == 0.0 {
        return Ok(0.0);
    }
    let log_value = ln(scaled) + t;
    if log_value >= ln(f64::MAX) {
        return Err(Error::Overflow("bessel_i exceeds f64 range; use bessel_i_scaled"));
    }
    Ok(exp(log_value))
}

/// Exponentially scaled `e^{-t} I_ν(t)`; finite for every finite `t`.
pub fn bessel_i_scaled(nu: f64, t: f64) -> Result<f64> {
    if !nu.is_finite() || nu < 0.0 {
        return Err(Error::domain("bessel_i requires finite order nu >= 0", nu));
    }
    if !t.is_finite() || t < 0.0 {
        return Err(Error::domain("bessel_i requires finite t >= 0", t));
    }
    if t == 0.0 {
        return Ok(if nu == 0.0 { 1.0 } else { 0.0 });
    }
    if t >= HANKEL_MIN_T {
        if let Some(v) = hankel_scaled(nu, t) {
            return Ok(v);
        }
    }
    Ok(series_scaled(nu, t))
}

/// Large-argument expansion
/// `e^{-t} I_ν(t) ~ (2πt)^{-1/2} Σ_k (-1)^k a_k(ν) / t^k`.
/// Returns `None` when the terms stop shrinking before reaching round-off.
fn hankel_scaled(nu: f64, t: f64) -> Option<f64> {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        let odd = f64::from(2 * k - 1);
        let next = -term * (mu - odd * odd) / (f64::from(k) * 8.0 * t);
        if abs(next) >= abs(term) && abs(next) > f64::EPSILON * abs(sum) {
            return None;
        }
        term = next;
        sum += term;
        if abs(term) <= 0.25 * f64::EPSILON * abs(sum) {
            return Some(sum / sqrt(core::f64::consts::TAU * t));
        }
    }
    None
}

/// Power series summed outward from its largest term. Each scaled term
/// factors as `Pois(n; t/2) · (t/2)^{n+ν} e^{-t/2} / Γ(n+ν+1)`, so every
/// term and the starting point carry full relative precision.
fn series_scaled(nu: f64, t: f64) -> f64 {
    let half = 0.5 * t;
    let h2 = half * half;
    // ratio term(n+1)/term(n) = h2 / ((n+1)(n+ν+1)); largest term where it crosses 1
    let peak = 0.5 * (sqrt(nu * nu + t * t) - nu - 2.0);
    let n0 = if peak > 0.0 { floor(peak) + 1.0 } else { 0.0 };
    let start = poisson_density(n0, half) * poisson_density(n0 + nu, half);
    if start == 0.0 {
        return 0.0;
    }
    let mut sum = start;
    let mut term = start;
    let mut n = n0;
    loop {
        term *= h2 / ((n + 1.0) * (n + nu + 1.0));
        n += 1.0;
        sum += term;
        if term <= 0.25 * f64::EPSILON * sum {
            break;
        }
    }
    let mut term = start;
    let mut n = n0;
    while n > 0.0 {
        term *= n * (n + nu) / h2;
        n -= 1.0;
        sum += term;
        if term <= 0.25 * f64::EPSILON * sum {
            break;
        }
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_points() {
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(1.0, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(2.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn reference_values() {
        // (nu, t, I, e^{-t} I) from 40-digit mpmath
        let cases = [
            (0.0, 1.0, 1.266_065_877_752_008_335_6, 0.465_759_607_593_640_436_5),
            (2.5, 7.0, 104.613_367_572_348_712_5, 0.095_395_043_245_150_431_53),
            (20.0, 10.0, 1.250_799_735_644_947_559e-4, 5.678_622_014_521_523_913e-9),
            (0.5, 100.0, 1.072_403_582_542_310_479e42, 0.039_894_228_040_143_267_79),
            (0.0, 0.001, 1.000_000_250_000_015_625, 0.999_000_749_583_515_559_4),
            (7.5, 30.0, 302_785_501_061.833_431_9, 0.028_333_525_593_679_935_99),
        ];
        for (nu, t, want, want_scaled) in cases {
            let got = bessel_i(nu, t).unwrap();
            assert!((got / want - 1.0).abs() < 1e-12, "I({nu},{t}) = {got} vs {want}");
            let got = bessel_i_scaled(nu, t).unwrap();
            assert!((got / want_scaled - 1.0).abs() < 1e-12, "scaled ({nu},{t})");
        }
    }

    #[test]
    fn large_arguments_scaled_and_overflow() {
        let cases = [
            (3.0, 800.0, 0.014_027_766_908_065_232_32),
            (50.0, 2000.0, 0.004_774_571_786_995_649_048),
        ];
        for (nu, t, want) in cases {
            let got = bessel_i_scaled(nu, t).unwrap();
            assert!((got / want - 1.0).abs() < 1e-12, "({nu},{t}) {got} vs {want}");
            assert!(matches!(bessel_i(nu, t), Err(Error::Overflow(_))));
        }
    }

    #[test]
    fn hankel_and_series_agree_in_overlap() {
        for &nu in &[0.0, 0.5, 1.0, 3.5, 7.0] {
            for &t in &[60.0, 120.0, 400.0] {
                let h = hankel_scaled(nu, t).expect("hankel converges");
                let s = series_scaled(nu, t);
                assert!((h / s - 1.0).abs() < 1e-12, "nu={nu} t={t}: {h} vs {s}");
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(bessel_i(-1.0, 1.0).is_err());
        assert!(bessel_i(1.0, -1.0).is_err());
        assert!(bessel_i(f64::NAN, 1.0).is_err());
    }
}
