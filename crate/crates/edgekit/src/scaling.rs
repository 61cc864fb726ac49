//! Edge-scaling constants for the Laguerre unitary ensemble: the elementary
//! pairs (μ_{j,k}, σ_{j,k}) on each side, the composite left pair (μ̃, σ̃)
//! that kills the first-order scaling mismatch between the two factor
//! kernels, and the deviation parameters θ, δ that quantify how far a given
//! scaling sits from the per-pair standard ones.

use serde::Serialize;

use crate::error::{domain, Result};

/// One LUE instance: an (N+a)×N complex Gaussian matrix X with W = X*X.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EnsembleParams {
    pub big_n: u32,
    pub a: u32,
}

impl EnsembleParams {
    pub fn new(big_n: u32, a: u32) -> Result<Self> {
        if big_n == 0 {
            return Err(domain("ensemble dimension N must be at least 1"));
        }
        Ok(EnsembleParams { big_n, a })
    }

    /// n = N + a.
    pub fn n(&self) -> u32 {
        self.big_n + self.a
    }

    /// Shape ratio γ = N/n ∈ (0, 1].
    pub fn gamma(&self) -> f64 {
        f64::from(self.big_n) / f64::from(self.n())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EdgeSide {
    LeftSoft,
    RightSoft,
}

/// Affine spectral scaling x ↦ μ − σs (left) or μ + σs (right).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EdgeScaling {
    pub mu: f64,
    pub sigma: f64,
    pub side: EdgeSide,
}

/// Deviation parameters of a left scaling relative to the two factor pairs
/// (n-1, N) and (n, N-1).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct DeviationParams {
    /// θ_{n-1,N}
    pub theta_left: f64,
    /// θ_{n,N-1}
    pub theta_right: f64,
    /// (μ_{n-1,N} − μ̃)/κ_{n-1,N}
    pub delta_left: f64,
    /// (μ_{n,N-1} − μ̃)/κ_{n,N-1}
    pub delta_right: f64,
}

/// Left-edge pair: μ = (√(j+½) − √(k+½))², σ = (√(j+½) − √(k+½))·((k+½)^{-1/2} − (j+½)^{-1/2})^{1/3}.
///
/// Positive convention: requires j > k ≥ 1 so both factors are positive.
pub fn mu_sigma_left(j: u32, k: u32) -> Result<(f64, f64)> {
    if j <= k || k < 1 {
        return Err(domain(format!(
            "left pair requires j > k >= 1, got (j, k) = ({j}, {k})"
        )));
    }
    let aj = (f64::from(j) + 0.5).sqrt();
    let bk = (f64::from(k) + 0.5).sqrt();
    let mu = (aj - bk) * (aj - bk);
    let sigma = (aj - bk) * (1.0 / bk - 1.0 / aj).cbrt();
    Ok((mu, sigma))
}

/// Right-edge pair: same shape with sums instead of differences.
pub fn mu_sigma_right(j: u32, k: u32) -> Result<(f64, f64)> {
    if j < 1 || k < 1 {
        return Err(domain("right pair requires j, k >= 1"));
    }
    let aj = (f64::from(j) + 0.5).sqrt();
    let bk = (f64::from(k) + 0.5).sqrt();
    let mu = (aj + bk) * (aj + bk);
    let sigma = (aj + bk) * (1.0 / bk + 1.0 / aj).cbrt();
    Ok((mu, sigma))
}

/// Center parameter κ_{j,k} = (j + k + 1)/2 of a pair; μ_{j,k} = κ_{j,k}·z₁.
pub fn kappa_pair(j: u32, k: u32) -> f64 {
    (f64::from(j) + f64::from(k) + 1.0) / 2.0
}

/// The composite left-soft-edge scaling (μ̃, σ̃) built from the pairs
/// (n-1, N) and (n, N-1); the weighted combination that zeroes both
/// first-order deviation sums.
pub fn composite_left(params: EnsembleParams) -> Result<EdgeScaling> {
    if params.a < 2 {
        return Err(domain(format!(
            "composite left scaling requires a >= 2, got a = {}",
            params.a
        )));
    }
    let n = params.n();
    let (mu1, s1) = mu_sigma_left(n - 1, params.big_n)?;
    let (mu2, s2) = mu_sigma_left(n, params.big_n - 1)?;
    let denom = 1.0 / (mu1 * s1.sqrt()) + 1.0 / (mu2 * s2.sqrt());
    let mu = (1.0 / s1.sqrt() + 1.0 / s2.sqrt()) / denom;
    let sigma = (s1.sqrt() / mu1 + s2.sqrt() / mu2) / denom;
    Ok(EdgeScaling { mu, sigma, side: EdgeSide::LeftSoft })
}

/// Deviation parameters θ_{j,k} = (nN)^{1/4}·√σ_{j,k}·σ̃/μ̃ and δ for the two
/// factor pairs under a given left scaling.
pub fn deviation_params(params: EnsembleParams, scaling: &EdgeScaling) -> Result<DeviationParams> {
    if scaling.side != EdgeSide::LeftSoft {
        return Err(domain("deviation parameters are defined for left-soft scalings"));
    }
    let n = params.n();
    let (mu1, s1) = mu_sigma_left(n - 1, params.big_n)?;
    let (mu2, s2) = mu_sigma_left(n, params.big_n - 1)?;
    let quarter = (f64::from(n) * f64::from(params.big_n)).powf(0.25);
    let ratio = scaling.sigma / scaling.mu;
    Ok(DeviationParams {
        theta_left: quarter * s1.sqrt() * ratio,
        theta_right: quarter * s2.sqrt() * ratio,
        delta_left: (mu1 - scaling.mu) / kappa_pair(n - 1, params.big_n),
        delta_right: (mu2 - scaling.mu) / kappa_pair(n, params.big_n - 1),
    })
}
