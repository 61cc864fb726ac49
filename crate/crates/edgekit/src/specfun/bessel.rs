//! Bessel functions of the first kind by the defining power series,
//! for real order a ≥ 0 and the desk-scale arguments the Bessel kernel needs.

use super::gamma::ln_gamma;

/// J_a(x) = Σ_m (-1)^m / (m! Γ(m+a+1)) (x/2)^{2m+a}.
pub fn bessel_j(a: f64, x: f64) -> f64 {
    assert!(a >= 0.0 && x >= 0.0);
    if x == 0.0 {
        return if a == 0.0 { 1.0 } else { 0.0 };
    }
    let half = x / 2.0;
    // First term (x/2)^a / Γ(a+1), then the ratio -half² / (m (m+a)).
    let mut term = (a * half.ln() - ln_gamma(a + 1.0)).exp();
    let mut sum = term;
    for m in 1..500 {
        let mf = m as f64;
        term *= -(half * half) / (mf * (mf + a));
        sum += term;
        if term.abs() < 1e-16 * sum.abs().max(1e-280) {
            break;
        }
    }
    sum
}

/// d/dx J_a(x), by term-wise differentiation of the same series.
pub fn bessel_j_prime(a: f64, x: f64) -> f64 {
    assert!(a >= 0.0 && x >= 0.0);
    if x == 0.0 {
        // (x/2)^{a-1}·a/2/Γ(a+1) limit: finite only for a = 0 (0) and a = 1 (1/2).
        return if a == 1.0 {
            0.5
        } else if a == 0.0 {
            0.0
        } else if a < 1.0 {
            f64::INFINITY
        } else {
            0.0
        };
    }
    let half = x / 2.0;
    let mut term = (a * half.ln() - ln_gamma(a + 1.0)).exp();
    let mut sum = term * a / x;
    for m in 1..500 {
        let mf = m as f64;
        term *= -(half * half) / (mf * (mf + a));
        let d = term * (2.0 * mf + a) / x;
        sum += d;
        if d.abs() < 1e-16 * sum.abs().max(1e-280) {
            break;
        }
    }
    sum
}
