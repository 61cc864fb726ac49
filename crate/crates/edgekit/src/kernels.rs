//! Determinantal point process kernels: Airy, Bessel, LUE, the factorization
//! kernels ξ and η, their left-soft-edge scaled versions, and the
//! Marchenko–Pastur density.
//!
//! All kernels are symmetric and total on their stated domains; LUE-family
//! kernels vanish whenever an argument falls on the nonpositive axis (the
//! indicator carried by the Laguerre functions).  Log-domain prefactors and
//! scaled Laguerre values keep every evaluation finite up to N ~ 10⁵.

use crate::error::{domain, Result};
use crate::quad::integrate_adaptive;
use crate::scaling::{EdgeScaling, EdgeSide, EnsembleParams};
use crate::specfun::{
    airy_eval, bessel_j, bessel_j_prime, laguerre_fn_scaled, laguerre_fn_scaled_pair, ln_gamma,
};

const LN_2: f64 = std::f64::consts::LN_2;

/// A kernel selection, evaluable as a symmetric function of two variables.
#[derive(Debug, Clone, Copy)]
pub enum KernelSpec {
    Airy,
    Bessel { a: f64 },
    Lue { params: EnsembleParams },
    /// σ̃·K_LUE(μ̃ − σ̃x, μ̃ − σ̃y).
    LueScaledLeft { params: EnsembleParams, scaling: EdgeScaling },
    /// G_τ(x, y) = ξ_τ(x + y − s0).
    GTau { params: EnsembleParams, scaling: EdgeScaling, s0: f64 },
    /// H_τ(x, y) = −η_τ(x + y − s0).
    HTau { params: EnsembleParams, scaling: EdgeScaling, s0: f64 },
    /// Ai(x + y − s0), the square root of the Airy kernel operator.
    AirySum { s0: f64 },
}

impl KernelSpec {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match *self {
            KernelSpec::Airy => airy_kernel(x, y),
            KernelSpec::Bessel { a } => bessel_kernel(a, x, y),
            KernelSpec::Lue { params } => lue_kernel(params, x, y),
            KernelSpec::LueScaledLeft { params, scaling } => {
                scaling.sigma
                    * lue_kernel(
                        params,
                        scaling.mu - scaling.sigma * x,
                        scaling.mu - scaling.sigma * y,
                    )
            }
            KernelSpec::GTau { params, scaling, s0 } => xi_tau(params, &scaling, x + y - s0),
            KernelSpec::HTau { params, scaling, s0 } => -eta_tau(params, &scaling, x + y - s0),
            KernelSpec::AirySum { s0 } => airy_eval(x + y - s0).ai,
        }
    }

    pub fn description(&self) -> String {
        match *self {
            KernelSpec::Airy => "Airy kernel".into(),
            KernelSpec::Bessel { a } => format!("Bessel kernel, a = {a}"),
            KernelSpec::Lue { params } => {
                format!("LUE kernel, N = {}, a = {}", params.big_n, params.a)
            }
            KernelSpec::LueScaledLeft { params, .. } => format!(
                "left-soft-edge scaled LUE kernel, N = {}, a = {}",
                params.big_n, params.a
            ),
            KernelSpec::GTau { params, .. } => {
                format!("G kernel xi_tau(x+y-s0), N = {}, a = {}", params.big_n, params.a)
            }
            KernelSpec::HTau { params, .. } => {
                format!("H kernel -eta_tau(x+y-s0), N = {}, a = {}", params.big_n, params.a)
            }
            KernelSpec::AirySum { .. } => "Ai(x+y-s0) square-root kernel".into(),
        }
    }
}

fn diagonal_width(x: f64) -> f64 {
    1e-6 * x.abs().max(1.0)
}

/// Airy kernel; confluent form within |x−y| ≤ 1e-6·max(1, |x|).
pub fn airy_kernel(x: f64, y: f64) -> f64 {
    if (x - y).abs() <= diagonal_width(x) {
        let m = 0.5 * (x + y);
        let p = airy_eval(m);
        p.ai_prime * p.ai_prime - m * p.ai * p.ai
    } else {
        let px = airy_eval(x);
        let py = airy_eval(y);
        (px.ai * py.ai_prime - py.ai * px.ai_prime) / (x - y)
    }
}

/// Bessel kernel with parameter a ≥ 0 on x, y ≥ 0.
pub fn bessel_kernel(a: f64, x: f64, y: f64) -> f64 {
    assert!(x >= 0.0 && y >= 0.0, "bessel_kernel needs x, y >= 0");
    if (x - y).abs() <= diagonal_width(x) {
        let m = 0.5 * (x + y);
        if m == 0.0 {
            // Limits of the diagonal branch at the origin.
            return if a == 0.0 {
                0.25
            } else if a == 1.0 {
                0.0
            } else if a < 1.0 {
                f64::INFINITY
            } else {
                0.0
            };
        }
        let r = m.sqrt();
        let j = bessel_j(a, r);
        let jp = bessel_j_prime(a, r);
        (m - a * a) / (4.0 * m) * j * j + 0.25 * jp * jp
    } else {
        let (rx, ry) = (x.sqrt(), y.sqrt());
        (ry * bessel_j_prime(a, ry) * bessel_j(a, rx)
            - rx * bessel_j_prime(a, rx) * bessel_j(a, ry))
            / (2.0 * (x - y))
    }
}

/// LUE Christoffel–Darboux kernel; vanishes off the positive axis.
/// Confluent (derivative) form near the diagonal.
pub fn lue_kernel(params: EnsembleParams, x: f64, y: f64) -> f64 {
    let (big_n, a) = (params.big_n, params.a);
    if x < 0.0 || y < 0.0 {
        return 0.0;
    }
    let nf = f64::from(big_n);
    let af = f64::from(a);
    let ln_pref = ln_gamma(nf + 1.0) - ln_gamma((nf + af).max(1.0));
    if (x - y).abs() <= diagonal_width(x) {
        let m = 0.5 * (x + y);
        if m == 0.0 {
            // a = 0: K(0,0) = Σ_{j<N} φ_j(0)² = N; a > 0: the weight vanishes.
            return if a > 0 { 0.0 } else { nf };
        }
        let (psi_n, psi_nm1) = laguerre_fn_scaled_pair(big_n, a, m);
        // K(x,x) = pref·[N ψ_N² + (N+a) ψ_{N-1}² − (2N+a−x) ψ_N ψ_{N-1}]/x,
        // obtained from the confluent limit with the recurrence folded in.
        let s = psi_n
            .mul(psi_n)
            .scale(nf)
            .add(psi_nm1.mul(psi_nm1).scale(nf + af))
            .add(psi_n.mul(psi_nm1).scale(-(2.0 * nf + af - m)));
        s.to_f64_with_log2((ln_pref - m.ln()) / LN_2)
    } else {
        let (pnx, pmx) = laguerre_fn_scaled_pair(big_n, a, x);
        let (pny, pmy) = laguerre_fn_scaled_pair(big_n, a, y);
        let d = pnx.mul(pmy).sub(pny.mul(pmx));
        -d.to_f64_with_log2(ln_pref / LN_2) / (x - y)
    }
}

/// Factorization kernels ξ_{a,N}, η_{a,N}; both vanish on x ≤ 0.
pub fn xi_eta(params: EnsembleParams, x: f64) -> Result<(f64, f64)> {
    if params.a < 2 {
        return Err(domain(format!("xi/eta require a >= 2, got a = {}", params.a)));
    }
    if x <= 0.0 {
        return Ok((0.0, 0.0));
    }
    let (big_n, a) = (params.big_n, params.a);
    let nf = f64::from(big_n);
    let nn = f64::from(params.n());
    let ln_common = 0.25 * (nf * nn).ln() - 0.5 * LN_2;
    let sign_n = if big_n % 2 == 0 { 1.0 } else { -1.0 };

    let lp = 0.5 * (ln_gamma(nf + 1.0) - ln_gamma(nf + f64::from(a)));
    let s_xi = laguerre_fn_scaled(big_n, a - 1, x);
    let xi = sign_n * s_xi.to_f64_with_log2((ln_common + lp - 0.5 * x.ln()) / LN_2);

    let lq = 0.5 * (ln_gamma(nf) - ln_gamma(nf + f64::from(a) + 1.0));
    let s_eta = laguerre_fn_scaled(big_n - 1, a + 1, x);
    let eta = -sign_n * s_eta.to_f64_with_log2((ln_common + lq - 0.5 * x.ln()) / LN_2);
    Ok((xi, eta))
}

/// ξ_τ(s) = σ̃·ξ_{a,N}(μ̃ − σ̃s); zero once the argument leaves (0, ∞).
pub fn xi_tau(params: EnsembleParams, scaling: &EdgeScaling, s: f64) -> f64 {
    let x = scaling.mu - scaling.sigma * s;
    if x <= 0.0 {
        return 0.0;
    }
    let (xi, _) = xi_eta(params, x).expect("xi_tau needs a >= 2");
    scaling.sigma * xi
}

/// η_τ(s) = σ̃·η_{a,N}(μ̃ − σ̃s).
pub fn eta_tau(params: EnsembleParams, scaling: &EdgeScaling, s: f64) -> f64 {
    let x = scaling.mu - scaling.sigma * s;
    if x <= 0.0 {
        return 0.0;
    }
    let (_, eta) = xi_eta(params, x).expect("eta_tau needs a >= 2");
    scaling.sigma * eta
}

/// (G_τ, H_τ, K^{LS}) at scaled coordinates: G_τ = ξ_τ(s + t − s0),
/// H_τ = −η_τ(s + t − s0), K^{LS}(s, t) = σ̃·K_LUE(μ̃ − σ̃s, μ̃ − σ̃t).
pub fn scaled_kernels(
    params: EnsembleParams,
    scaling: &EdgeScaling,
    s0: f64,
    s: f64,
    t: f64,
) -> Result<(f64, f64, f64)> {
    if scaling.side != EdgeSide::LeftSoft {
        return Err(domain("scaled kernels are defined for the left-soft side"));
    }
    if params.a < 2 {
        return Err(domain("scaled kernels require a >= 2"));
    }
    let g = xi_tau(params, scaling, s + t - s0);
    let h = -eta_tau(params, scaling, s + t - s0);
    let k_ls = scaling.sigma
        * lue_kernel(
            params,
            scaling.mu - scaling.sigma * s,
            scaling.mu - scaling.sigma * t,
        );
    Ok((g, h, k_ls))
}

/// |K_LUE(x, y) − ∫₀^∞ [ξ(x+t)η(t+y) + η(x+t)ξ(t+y)] dt| by adaptive
/// quadrature; the residual of the operator factorization identity.
pub fn factorization_residual(
    params: EnsembleParams,
    x: f64,
    y: f64,
    tail_length: f64,
) -> Result<f64> {
    if params.a < 2 {
        return Err(domain("factorization residual requires a >= 2"));
    }
    if !(x > 0.0 && y > 0.0) {
        return Err(domain("factorization residual needs x, y > 0"));
    }
    // ξ and η oscillate all the way to the right spectral edge before turning
    // exponentially small, so the truncation must clear that edge for the
    // smaller of the two shifted arguments.
    let (edge, _) = crate::scaling::mu_sigma_right(params.n(), params.big_n)?;
    let upper = tail_length.max(edge + 60.0 - x.min(y)).max(80.0);
    let integral = integrate_adaptive(
        |t| {
            let (xi_xt, eta_xt) = xi_eta(params, x + t).unwrap();
            let (xi_ty, eta_ty) = xi_eta(params, t + y).unwrap();
            xi_xt * eta_ty + eta_xt * xi_ty
        },
        0.0,
        upper,
        1e-10,
        1e-9,
        4000,
    )?;
    Ok((lue_kernel(params, x, y) - integral).abs())
}

/// Marchenko–Pastur density g_{λ,σ} with edges λ± = σ²(1 ± √λ)².
pub fn mp_density(lambda: f64, sigma: f64, x: f64) -> f64 {
    assert!(lambda > 0.0 && sigma > 0.0);
    let lo = sigma * sigma * (1.0 - lambda.sqrt()).powi(2);
    let hi = sigma * sigma * (1.0 + lambda.sqrt()).powi(2);
    if x <= lo || x >= hi {
        return 0.0;
    }
    ((hi - x) * (x - lo)).sqrt() / (2.0 * std::f64::consts::PI * sigma * sigma * lambda * x)
}
