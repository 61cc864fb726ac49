//! Modulus, weight and phase companions of the Airy pair.
//!
//! For x above the crossover point c (the largest negative root of Ai = Bi)
//! the weight is E = √(Bi/Ai) and the modulus M = √(2·Ai·Bi); below c the
//! weight is pinned to 1 and M = √(Ai² + Bi²).  The phases θ, ω recover Ai,
//! Bi and their derivatives through
//! Ai = (M/E)·sin θ, Bi = M·E·cos θ, Ai′ = (N/E)·sin ω, Bi′ = N·E·cos ω.

use std::sync::OnceLock;

use super::airy::airy_eval;

#[derive(Debug, Clone, Copy)]
pub struct AiryModulus {
    /// Weight E(x); equals 1 for x ≤ crossover_c.
    pub big_e: f64,
    /// Modulus M(x).
    pub big_m: f64,
    /// Derivative modulus N(x).
    pub big_n: f64,
    /// Phase θ(x) in radians, with Ai = (M/E)·sin θ and Bi = M·E·cos θ.
    pub theta: f64,
    /// Phase ω(x) in radians, with Ai′ = (N/E)·sin ω and Bi′ = N·E·cos ω.
    pub omega: f64,
    /// Largest negative root of Ai(x) = Bi(x).
    pub crossover_c: f64,
}

/// Crossover point c, found once by bisection on Ai − Bi over [-1.5, 0].
pub fn crossover() -> f64 {
    static C: OnceLock<f64> = OnceLock::new();
    *C.get_or_init(|| {
        let g = |x: f64| {
            let p = airy_eval(x);
            p.ai - p.bi
        };
        let (mut lo, mut hi) = (-1.5f64, 0.0f64);
        debug_assert!(g(lo) > 0.0 && g(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-15 {
                break;
            }
        }
        0.5 * (lo + hi)
    })
}

/// Modulus/weight/phase data at x.
pub fn airy_modulus(x: f64) -> AiryModulus {
    assert!(x.is_finite());
    let c = crossover();
    let p = airy_eval(x);
    let (big_e, big_m, big_n);
    if x > c {
        big_e = (p.bi / p.ai).sqrt();
        big_m = (2.0 * p.ai * p.bi).sqrt();
        big_n = ((p.ai_prime * p.ai_prime * p.bi * p.bi
            + p.ai * p.ai * p.bi_prime * p.bi_prime)
            / (p.ai * p.bi))
            .sqrt();
    } else {
        big_e = 1.0;
        big_m = p.ai.hypot(p.bi);
        big_n = p.ai_prime.hypot(p.bi_prime);
    }
    // atan2 rather than arctan of the quotient: Bi changes sign on the
    // oscillatory side and the reconstruction must survive that.
    let e2 = big_e * big_e;
    AiryModulus {
        big_e,
        big_m,
        big_n,
        theta: f64::atan2(e2 * p.ai, p.bi),
        omega: f64::atan2(e2 * p.ai_prime, p.bi_prime),
        crossover_c: c,
    }
}

/// M(x)/E(x) without forming the weight: equals √2·Ai for x > c (so it stays
/// representable far out on the positive axis where E alone overflows).
pub fn modulus_over_weight(x: f64) -> f64 {
    if x > crossover() {
        std::f64::consts::SQRT_2 * airy_eval(x).ai
    } else {
        let p = airy_eval(x);
        p.ai.hypot(p.bi)
    }
}

/// sup over a dense grid of π·|x|^{1/2}·M²(x); a number slightly above 1.
pub fn lambda0_estimate() -> f64 {
    static L0: OnceLock<f64> = OnceLock::new();
    *L0.get_or_init(|| {
        let mut best = 0.0f64;
        // The sup lives at moderate |x|; the tail contribution decays to 1.
        for i in 0..=40_000 {
            let x = -100.0 + 200.0 * i as f64 / 40_000.0;
            let m = airy_modulus(x).big_m;
            let v = std::f64::consts::PI * x.abs().sqrt() * m * m;
            if v > best {
                best = v;
            }
        }
        best
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn crossover_value() {
        // Independent 17-digit reference: -0.36604632808053503.
        assert!((crossover() + 0.366_046_328_080_535).abs() < 1e-12);
    }

    #[test]
    fn weight_is_one_below_crossover() {
        for &x in &[-0.4, -1.0, -3.0, -7.5] {
            assert_eq!(airy_modulus(x).big_e, 1.0);
        }
    }

    #[test]
    fn weight_nondecreasing_on_positive_axis() {
        let mut prev = 0.0;
        for i in 0..=300 {
            let x = 30.0 * i as f64 / 300.0;
            let e = airy_modulus(x).big_e;
            assert!(e >= prev, "E decreased at x = {x}");
            prev = e;
        }
    }

    #[test]
    fn phase_reconstruction() {
        let c = crossover();
        for i in 0..=250 {
            let x = c + (10.0 - c) * i as f64 / 250.0;
            let m = airy_modulus(x);
            let p = airy_eval(x);
            let ai_rec = m.big_m / m.big_e * m.theta.sin();
            let bi_rec = m.big_m * m.big_e * m.theta.cos();
            assert!((ai_rec - p.ai).abs() <= 1e-9 * p.ai.abs().max(1e-300), "x={x}");
            assert!((bi_rec - p.bi).abs() <= 1e-9 * p.bi.abs(), "x={x}");
            let aip_rec = m.big_n / m.big_e * m.omega.sin();
            let bip_rec = m.big_n * m.big_e * m.omega.cos();
            assert!((aip_rec - p.ai_prime).abs() <= 1e-9 * p.ai_prime.abs());
            assert!((bip_rec - p.bi_prime).abs() <= 1e-9 * p.bi_prime.abs());
        }
    }

    #[test]
    fn phase_reconstruction_oscillatory_side() {
        for i in 0..=100 {
            let x = -8.0 + 7.5 * i as f64 / 100.0;
            let m = airy_modulus(x);
            let p = airy_eval(x);
            let ai_rec = m.big_m / m.big_e * m.theta.sin();
            let bi_rec = m.big_m * m.big_e * m.theta.cos();
            assert!((ai_rec - p.ai).abs() <= 1e-9 * m.big_m, "x={x}");
            assert!((bi_rec - p.bi).abs() <= 1e-9 * m.big_m, "x={x}");
        }
    }

    #[test]
    fn modulus_asymptotics_at_20() {
        let m = airy_modulus(20.0).big_m;
        let pred = 1.0 / (std::f64::consts::PI.sqrt() * 20.0f64.powf(0.25));
        assert!((m - pred).abs() / pred < 0.02);
    }

    #[test]
    fn lambda_sups() {
        let l0 = lambda0_estimate();
        assert!(l0 >= 1.0 && l0 < 1.2, "lambda0 = {l0}");
        // Oracle: 1.0395225 at x ≈ 1.32.
        assert!((l0 - 1.039_522_5).abs() < 1e-4);
        // x = 0 contributes 0 to the sup.
        assert_eq!(std::f64::consts::PI * 0.0f64.abs().sqrt() * airy_modulus(0.0).big_m.powi(2), 0.0);

        // λ₁ = sup π·E·M·|x|^{1/2}·|Ai|, approached (from below) as x → -∞.
        let mut l1: f64 = 0.0;
        for i in 0..=22_000 {
            let x = -60.0 + 110.0 * i as f64 / 22_000.0;
            let m = airy_modulus(x);
            let v = std::f64::consts::PI
                * m.big_e
                * m.big_m
                * x.abs().sqrt()
                * airy_eval(x).ai.abs();
            l1 = l1.max(v);
        }
        assert!((l1 - 1.0).abs() < 1e-3, "lambda1 = {l1}");
    }
}
