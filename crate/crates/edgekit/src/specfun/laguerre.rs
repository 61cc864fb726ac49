//! Generalized Laguerre polynomials and exponentially weighted Laguerre
//! functions ψ(x) = x^{a/2}·e^{-x/2}·L_j^a(x).
//!
//! Raw L_j^a overflows f64 near j ≈ 150, so the weighted function is carried
//! through the three-term recurrence with a separate base-2 exponent
//! ([`Scaled`]); kernels combine these scaled values with log-domain Γ-ratio
//! prefactors and only reconstruct an f64 at the very end.

/// A nonzero real represented as mantissa · 2^exp2 (mantissa kept in
/// [1, 2) ∪ (-2, -1] by renormalization; zero is mantissa 0, exp2 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: f64,
    pub exp2: i64,
}

impl Scaled {
    pub const ZERO: Scaled = Scaled { mantissa: 0.0, exp2: 0 };

    pub fn from_f64(v: f64) -> Scaled {
        if v == 0.0 {
            return Scaled::ZERO;
        }
        let (m, e) = frexp(v);
        Scaled { mantissa: m * 2.0, exp2: e - 1 }
    }

    fn renormalize(self) -> Scaled {
        if self.mantissa == 0.0 {
            Scaled::ZERO
        } else {
            let (m, e) = frexp(self.mantissa);
            Scaled { mantissa: m * 2.0, exp2: self.exp2 + i64::from(e) - 1 }
        }
    }

    pub fn mul(self, other: Scaled) -> Scaled {
        Scaled {
            mantissa: self.mantissa * other.mantissa,
            exp2: self.exp2 + other.exp2,
        }
        .renormalize()
    }

    pub fn scale(self, c: f64) -> Scaled {
        Scaled { mantissa: self.mantissa * c, exp2: self.exp2 }.renormalize()
    }

    pub fn add(self, other: Scaled) -> Scaled {
        self.sub(Scaled { mantissa: -other.mantissa, exp2: other.exp2 })
    }

    pub fn sub(self, other: Scaled) -> Scaled {
        if self.mantissa == 0.0 {
            return Scaled { mantissa: -other.mantissa, exp2: other.exp2 };
        }
        if other.mantissa == 0.0 {
            return self;
        }
        let shift = other.exp2 - self.exp2;
        let m = if shift <= -120 {
            self.mantissa
        } else if shift >= 120 {
            return Scaled { mantissa: -other.mantissa, exp2: other.exp2 };
        } else {
            self.mantissa - other.mantissa * (shift as f64).exp2()
        };
        Scaled { mantissa: m, exp2: self.exp2 }.renormalize()
    }

    /// Reconstruct mantissa · 2^(exp2 + log2_offset) as an f64, saturating to
    /// ±∞ / 0 outside the representable range.
    pub fn to_f64_with_log2(self, log2_offset: f64) -> f64 {
        if self.mantissa == 0.0 {
            return 0.0;
        }
        let total = self.exp2 as f64 + log2_offset;
        if total > 1035.0 {
            return f64::INFINITY * self.mantissa.signum();
        }
        if total < -1120.0 {
            return 0.0;
        }
        // Split the offset to keep each exp2 within range.
        let half = total / 2.0;
        self.mantissa * half.exp2() * (total - half).exp2()
    }

    pub fn to_f64(self) -> f64 {
        self.to_f64_with_log2(0.0)
    }

    /// log2 of the absolute value.
    pub fn log2_abs(self) -> f64 {
        self.mantissa.abs().log2() + self.exp2 as f64
    }
}

fn frexp(v: f64) -> (f64, i64) {
    // Decompose v = m · 2^e with m in [0.5, 1).
    if v == 0.0 || !v.is_finite() {
        return (v, 0);
    }
    let bits = v.to_bits();
    let exp_field = ((bits >> 52) & 0x7ff) as i64;
    if exp_field == 0 {
        // Subnormal: scale up first.
        let (m, e) = frexp(v * 2f64.powi(64));
        return (m, e - 64);
    }
    let e = exp_field - 1022;
    let m = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1022u64 << 52));
    (m, e)
}

/// L_j^a(x) by the three-term recurrence, in plain f64.
///
/// Overflow for large (j, x) combinations is surfaced as ±∞; callers needing
/// those regimes use [`laguerre_fn`] / [`laguerre_fn_scaled`] instead.
pub fn laguerre_poly(j: u32, a: u32, x: f64) -> f64 {
    assert!(x >= 0.0, "laguerre_poly requires x >= 0");
    let af = a as f64;
    let mut prev = 1.0f64; // L_0
    if j == 0 {
        return prev;
    }
    let mut cur = 1.0 + af - x; // L_1
    for k in 1..j {
        let kf = k as f64;
        let next = ((2.0 * kf + af + 1.0 - x) * cur - (kf + af) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Weighted Laguerre function ψ(x) = x^{a/2}·e^{-x/2}·L_j^a(x) in scaled form.
///
/// The recurrence runs on the scaled polynomial value; the weight enters once
/// at the end as a log2 offset, so no intermediate overflows occur.
pub fn laguerre_fn_scaled(j: u32, a: u32, x: f64) -> Scaled {
    let (cur, _) = laguerre_fn_scaled_pair(j, a, x);
    cur
}

/// (ψ_j, ψ_{j-1}) with a shared scaling, as the Christoffel–Darboux kernel
/// consumes both.  For j = 0 the second component is zero.
pub fn laguerre_fn_scaled_pair(j: u32, a: u32, x: f64) -> (Scaled, Scaled) {
    assert!(x >= 0.0, "laguerre_fn requires x >= 0");
    if x == 0.0 {
        if a > 0 {
            return (Scaled::ZERO, Scaled::ZERO);
        }
        // a = 0: weight is 1 at the origin and L_j^0(0) = 1 for every j.
        let one = Scaled::from_f64(1.0);
        return (one, if j == 0 { Scaled::ZERO } else { one });
    }
    let af = a as f64;
    let log2_weight = (af / 2.0 * x.ln() - x / 2.0) / std::f64::consts::LN_2;

    // Recurrence on the polynomial with both iterates held against one
    // common base-2 exponent, rescaled whenever they drift out of range.
    let mut p = 1.0f64; // L_{k-1}
    let mut c = 1.0 + af - x; // L_k
    let mut e: i64 = 0;
    if j == 0 {
        return (apply(Scaled { mantissa: 1.0, exp2: 0 }, log2_weight), Scaled::ZERO);
    }
    for k in 1..j {
        let kf = k as f64;
        let n = ((2.0 * kf + af + 1.0 - x) * c - (kf + af) * p) / (kf + 1.0);
        p = c;
        c = n;
        let m = c.abs().max(p.abs());
        if m > 1e280 {
            c *= 2f64.powi(-1000);
            p *= 2f64.powi(-1000);
            e += 1000;
        } else if m != 0.0 && m < 1e-280 {
            c *= 2f64.powi(1000);
            p *= 2f64.powi(1000);
            e -= 1000;
        }
    }
    (
        apply(Scaled { mantissa: c, exp2: e }, log2_weight),
        apply(Scaled { mantissa: p, exp2: e }, log2_weight),
    )
}

fn apply(s: Scaled, log2_weight: f64) -> Scaled {
    if s.mantissa == 0.0 {
        return Scaled::ZERO;
    }
    let whole = log2_weight.trunc();
    let frac = log2_weight - whole;
    Scaled { mantissa: s.mantissa * frac.exp2(), exp2: s.exp2 + whole as i64 }.renormalize()
}

/// ψ(x) = x^{a/2}·e^{-x/2}·L_j^a(x) as an f64 (saturating if the true value
/// exceeds the double range; see [`laguerre_fn_scaled`] for the exact form).
pub fn laguerre_fn(j: u32, a: u32, x: f64) -> f64 {
    laguerre_fn_scaled(j, a, x).to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gamma::ln_gamma;
    use proptest::prelude::*;

    /// Explicit finite sum L_j^a(x) = Σ_k binom(j+a, j-k)·(-x)^k/k!, with the
    /// integer parts computed exactly so the oracle's only error is the
    /// rounding of the alternating f64 sum.  Returns (value, largest |term|);
    /// the largest term sets the achievable absolute accuracy of both routes.
    fn laguerre_sum(j: u32, a: u32, x: f64) -> (f64, f64) {
        fn binom(n: u64, k: u64) -> u128 {
            let mut acc: u128 = 1;
            for i in 0..k.min(n - k) {
                acc = acc * (n - i) as u128 / (i + 1) as u128;
            }
            acc
        }
        let mut total = 0.0f64;
        let mut max_term = 0.0f64;
        let mut factorial = 1.0f64;
        for k in 0..=j {
            if k > 0 {
                factorial *= k as f64;
            }
            let b = binom((j + a) as u64, (j - k) as u64) as f64;
            let term = b * (-x).powi(k as i32) / factorial;
            max_term = max_term.max(term.abs());
            total += term;
        }
        (total, max_term)
    }

    #[test]
    fn degree_zero_and_one() {
        assert_eq!(laguerre_poly(0, 7, 3.5), 1.0);
        assert_eq!(laguerre_poly(1, 3, 2.0), 2.0); // 1 + 3 - 2
    }

    #[test]
    fn bound_example() {
        // |L_10^2(5)| <= binom(12,10)·e^{2.5}; the value itself is 0.48884618.
        let v = laguerre_poly(10, 2, 5.0);
        assert!((v - 0.488_846_175_044_091_71).abs() < 1e-12);
        assert!(v.abs() <= 66.0 * (2.5f64).exp());
    }

    #[test]
    fn weighted_function_basics() {
        // j = 0, a = 0: ψ(x) = e^{-x/2}.
        assert!((laguerre_fn(0, 0, 2.0) - (-1.0f64).exp()).abs() < 1e-15);
        // a > 0 vanishes at the origin.
        assert_eq!(laguerre_fn(7, 4, 0.0), 0.0);
    }

    #[test]
    fn big_degree_against_reference() {
        // 40-digit reference: ψ_{50}^{50}(10) = 10^25·e^{-5}·L_50^50(10).
        let want = 9.313_726_516_337_298_6e45;
        let got = laguerre_fn(50, 50, 10.0);
        assert!((got - want).abs() / want < 1e-10, "got {got}");
    }

    #[test]
    fn scaled_form_never_overflows() {
        let s = laguerre_fn_scaled(10_000, 10_000, 1.0e5);
        assert!(s.mantissa.is_finite() && s.mantissa != 0.0);
        // log2|ψ| is finite and large; the f64 view saturates.
        assert!(s.log2_abs().is_finite());
        let s2 = laguerre_fn_scaled(10_000, 10_000, 4.0e4);
        assert!(s2.mantissa.is_finite());
    }

    #[test]
    fn pair_consistency() {
        let (cur, prev) = laguerre_fn_scaled_pair(12, 3, 7.25);
        assert!((cur.to_f64() - laguerre_fn(12, 3, 7.25)).abs() < 1e-15);
        assert!((prev.to_f64() - laguerre_fn(11, 3, 7.25)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn recurrence_matches_explicit_sum(j in 0u32..=12, a in 0u32..=6, x in 0.0f64..20.0) {
            let rec = laguerre_poly(j, a, x);
            let (sum, max_term) = laguerre_sum(j, a, x);
            let scale = rec.abs().max(sum.abs()).max(max_term * 1e-4).max(1.0);
            prop_assert!((rec - sum).abs() <= 1e-10 * scale);
        }

        #[test]
        fn poly_bound(j in 0u32..=15, a in 0u32..=8, x in 0.0f64..30.0) {
            let v = laguerre_poly(j, a, x);
            let ln_binom = ln_gamma((j + a) as f64 + 1.0)
                - ln_gamma(j as f64 + 1.0)
                - ln_gamma(a as f64 + 1.0);
            prop_assert!(v.abs() <= (ln_binom + x / 2.0).exp() * (1.0 + 1e-9));
        }
    }
}
