//! Liouville–Green machinery for the transformed Laguerre ODE
//! w″ = (κ²f + g)w with f(z) = (z−z₁)(z−z₂)/(4z²) and g(z) = −1/(4z²).
//!
//! Provides the transform ζ (closed form below the left turning point,
//! adaptive quadrature between the turning points, and a local series inside
//! a narrow window around z₁ where the closed form cancels), the regularized
//! ratio f̃ = f/ζ, the perturbation Ψ, the normalization constants c_N and
//! r_N, and the error-bound evaluator for the Airy approximation remainder.

use crate::error::{domain, Result};
use crate::quad::{integrate_adaptive, QUAD_ABS_TOL, QUAD_MAX_SUBDIV, QUAD_REL_TOL};
use crate::scaling::EnsembleParams;
use crate::specfun::{lambda0_estimate, ln_gamma, modulus_over_weight};

/// Liouville–Green quantities for one ensemble.
#[derive(Debug, Clone, Copy)]
pub struct LGContext {
    pub ensemble: EnsembleParams,
    /// κ = N + (a+1)/2.
    pub kappa: f64,
    /// λ = a/2.
    pub lambda_half: f64,
    /// ω = 2λ/κ = a/κ.
    pub omega: f64,
    /// Left turning point 2 − √(4 − ω²).
    pub z1: f64,
    /// Right turning point 2 + √(4 − ω²).
    pub z2: f64,
}

/// Width (relative to z₁) of the window around z₁ where ζ switches from the
/// closed form to its local series; the closed form cancels there.
const SERIES_WINDOW: f64 = 1e-6;

/// Build the L–G context for an ensemble.
pub fn lg_context(params: EnsembleParams) -> LGContext {
    let kappa = f64::from(params.big_n) + (f64::from(params.a) + 1.0) / 2.0;
    let lambda_half = f64::from(params.a) / 2.0;
    let omega = 2.0 * lambda_half / kappa;
    let disc = (4.0 - omega * omega).sqrt();
    LGContext {
        ensemble: params,
        kappa,
        lambda_half,
        omega,
        z1: 2.0 - disc,
        z2: 2.0 + disc,
    }
}

impl LGContext {
    /// z₂ − z₁ = 2√(4 − ω²).
    fn gap(&self) -> f64 {
        self.z2 - self.z1
    }

    /// s_N = 1/z₁ + 1/(2(z₂−z₁)), the first-order coefficient of the local
    /// expansions around z₁.
    pub fn series_coefficient(&self) -> f64 {
        1.0 / self.z1 + 1.0 / (2.0 * self.gap())
    }

    /// ζ′(z₁)² = ((z₂−z₁)/(4z₁²))^{2/3}, the limit filling f̃ at z₁.
    fn f_tilde_at_z1(&self) -> f64 {
        (self.gap() / (4.0 * self.z1 * self.z1)).powf(2.0 / 3.0)
    }
}

/// f(z) = (z − z₁)(z − z₂)/(4z²).
pub fn f_eval(ctx: &LGContext, z: f64) -> f64 {
    assert!(z > 0.0, "f is evaluated on z > 0");
    (z - ctx.z1) * (z - ctx.z2) / (4.0 * z * z)
}

fn q_poly(ctx: &LGContext, z: f64) -> f64 {
    // (z−z₁)(z−z₂) = z² − 4z + ω², the radicand under the closed form.
    z * z - 4.0 * z + ctx.omega * ctx.omega
}

/// The Liouville–Green transform around the left turning point.
///
/// ζ ≥ 0 for z ≤ z₁ (closed-form antiderivative difference), ζ < 0 on
/// (z₁, z₂) (adaptive quadrature of (−f)^{1/2}); ζ(z₁) = 0 and ζ is
/// strictly decreasing in z.
pub fn zeta_left(ctx: &LGContext, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < ctx.z2) {
        return Err(domain(format!(
            "zeta_left needs z in (0, z2) = (0, {:.6}), got {z}",
            ctx.z2
        )));
    }
    if (z - ctx.z1).abs() < SERIES_WINDOW * ctx.z1 {
        return Ok(zeta_series(ctx, z));
    }
    if z < ctx.z1 {
        let two_thirds = closed_form_integral(ctx, z);
        Ok((1.5 * two_thirds).powf(2.0 / 3.0))
    } else {
        let i = integrate_adaptive(
            |t| (-f_eval(ctx, t)).max(0.0).sqrt(),
            ctx.z1,
            z,
            QUAD_ABS_TOL,
            QUAD_REL_TOL,
            QUAD_MAX_SUBDIV,
        )?;
        Ok(-(1.5 * i).powf(2.0 / 3.0))
    }
}

/// Local series for ζ near z₁: ζ(z₁ − ε) = (gap/(4z₁²))^{1/3}·ε·(1 + (2/5)s_N·ε),
/// valid on both sides of z₁ (signed ε).
fn zeta_series(ctx: &LGContext, z: f64) -> f64 {
    let eps = ctx.z1 - z;
    let c = (ctx.gap() / (4.0 * ctx.z1 * ctx.z1)).cbrt();
    c * eps * (1.0 + 0.4 * ctx.series_coefficient() * eps)
}

/// ∫_z^{z₁} f^{1/2}(t) dt as an explicit antiderivative difference; equals
/// (2/3)ζ^{3/2} for z ≤ z₁.
fn closed_form_integral(ctx: &LGContext, z: f64) -> f64 {
    let om = ctx.omega;
    let z1 = ctx.z1;
    let q = q_poly(ctx, z);
    let sq = q.max(0.0).sqrt();
    (om / 2.0) * (z1 / z).ln() - (2.0 - z1).ln() - (om / 2.0) * (z1 * (2.0 - z1)).ln()
        - 0.5 * sq
        + (2.0 - z - sq).ln()
        + (om / 2.0) * (om * sq + om * om - 2.0 * z).ln()
}

/// Quadrature route for ζ on z ≤ z₁, kept as a cross-check of the closed form.
pub fn zeta_left_by_quadrature(ctx: &LGContext, z: f64) -> Result<f64> {
    if !(z > 0.0 && z <= ctx.z1) {
        return Err(domain("quadrature route is for 0 < z <= z1"));
    }
    let i = integrate_adaptive(
        |t| f_eval(ctx, t).max(0.0).sqrt(),
        z,
        ctx.z1,
        QUAD_ABS_TOL,
        QUAD_REL_TOL,
        QUAD_MAX_SUBDIV,
    )?;
    Ok((1.5 * i).powf(2.0 / 3.0))
}

/// f̃ = f/ζ, with the removable singularity at z₁ filled by ζ′(z₁)².
pub fn f_tilde(ctx: &LGContext, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < ctx.z2) {
        return Err(domain("f_tilde needs z in (0, z2)"));
    }
    if (z - ctx.z1).abs() < 1e-12 * ctx.z1 {
        return Ok(ctx.f_tilde_at_z1());
    }
    Ok(f_eval(ctx, z) / zeta_left(ctx, z)?)
}

/// Perturbation Ψ(ζ(z)) of the transformed equation, explicit form.
///
/// Defined on 0 < z < z₁ (the region used by the error bound); the formula
/// has a pole at ζ = 0, i.e. z = z₁.
pub fn psi_eval(ctx: &LGContext, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < ctx.z1) {
        return Err(domain(format!(
            "psi_eval needs z in (0, z1) = (0, {:.6}), got {z}",
            ctx.z1
        )));
    }
    let zeta = zeta_left(ctx, z)?;
    let om2 = ctx.omega * ctx.omega;
    let q = q_poly(ctx, z);
    // Collecting 4ζz⁶(-2/z³ + (6+3ω²)/(2z⁴) - 3ω²/z⁵ + ω⁴/(4z⁶))/q³ with
    // gζ/f = -ζq²/q³ gives the z² coefficient 4(1-ω²); cross-checked against
    // finite differences of the defining form.
    let num = z.powi(4) + 4.0 * (1.0 - om2) * z * z + 4.0 * om2 * z;
    Ok(5.0 / (16.0 * zeta * zeta) - zeta * num / q.powi(3))
}

/// Normalization constant c_N of the Airy-form solution, as (ln c, sign);
/// the sign is always +1 for the left turning point.
pub fn c_constant(params: EnsembleParams) -> Result<(f64, f64)> {
    if params.a < 1 {
        return Err(domain("c_N requires a >= 1"));
    }
    let nn = f64::from(params.big_n);
    let n = f64::from(params.n());
    let a = f64::from(params.a);
    let kappa = nn + (a + 1.0) / 2.0;
    let ln_c = 0.5 * (2.0 * std::f64::consts::PI * a).ln() + ln_gamma(n + 1.0)
        - ln_gamma(a + 1.0)
        - ln_gamma(nn + 1.0)
        + kappa.ln() / 6.0
        + a * a.ln()
        - a / 2.0
        + (nn + 0.5) / 2.0 * (nn + 0.5).ln()
        - (n + 0.5) / 2.0 * (n + 0.5).ln();
    Ok((ln_c, 1.0))
}

/// r_N = √(N!/n!)·c_N·κ^{-1/6}; equals 1 + O(N⁻¹).
pub fn r_constant(params: EnsembleParams) -> Result<f64> {
    let (ln_c, _) = c_constant(params)?;
    let nn = f64::from(params.big_n);
    let n = f64::from(params.n());
    let kappa = nn + (f64::from(params.a) + 1.0) / 2.0;
    let ln_r = 0.5 * (ln_gamma(nn + 1.0) - ln_gamma(n + 1.0)) + ln_c - kappa.ln() / 6.0;
    Ok(ln_r.exp())
}

/// V(ζ(z)) = ∫_{ζ(z)}^∞ |Ψ(t)|·|t|^{-1/2} dt, computed in the z variable as
/// ∫₀^z |Ψ(ζ(u))|·√f(u)/ζ(u) du.
///
/// The z → 0 end carries an integrable 1/(u·log²u) tail which is not
/// negligible; below `z_cut` it is replaced by the analytic tail of the
/// Ψ ~ 5/(16ζ²) regime, ∫_{ζ_c}^∞ (5/16) t^{-5/2} dt = (5/24)·ζ_c^{-3/2}.
pub fn v_integral(ctx: &LGContext, z: f64) -> Result<f64> {
    if !(z > 0.0 && z < ctx.z1) {
        return Err(domain("v_integral needs z in (0, z1)"));
    }
    let z_cut = (z / 2.0).min(1e-8);
    let zeta_cut = zeta_left(ctx, z_cut)?;
    let tail = 5.0 / 24.0 * zeta_cut.powf(-1.5);
    let body = integrate_adaptive(
        |u| {
            let zeta = zeta_left(ctx, u).unwrap_or(f64::NAN);
            let psi = psi_eval(ctx, u).unwrap_or(f64::NAN);
            psi.abs() * f_eval(ctx, u).max(0.0).sqrt() / zeta
        },
        z_cut,
        z,
        1e-11,
        1e-9,
        QUAD_MAX_SUBDIV,
    )?;
    Ok(body + tail)
}

/// Error-bound evaluator for the Airy-approximation remainder:
/// (M/E)(κ^{2/3}ζ)·(exp(λ₀·V(ζ)/κ) − 1).
pub fn eps2_bound(ctx: &LGContext, z: f64) -> Result<f64> {
    let zeta = zeta_left(ctx, z)?;
    let v = v_integral(ctx, z)?;
    let me = modulus_over_weight(ctx.kappa.powf(2.0 / 3.0) * zeta);
    Ok(me * ((lambda0_estimate() * v / ctx.kappa).exp() - 1.0))
}
