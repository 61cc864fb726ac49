//! Monte Carlo sampling of complex Wishart ensembles: extreme-eigenvalue
//! batches under the left-soft-edge scaling, Kolmogorov–Smirnov comparison
//! against TW₂, and empirical-spectrum histograms against Marchenko–Pastur.
//!
//! Determinism contract: every artifact is a pure function of
//! (params, reps, seed).  Repetition r draws from an independent ChaCha
//! stream keyed by r, so batches parallelize without reordering effects.

use rand::distributions::Distribution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{domain, Result};
use crate::kernels::{mp_density, KernelSpec};
use crate::linalg::sym_eigenvalues;
use crate::operator::{fredholm_det, QuadratureSpec};
use crate::quad::integrate_adaptive;
use crate::scaling::{composite_left, EnsembleParams};

/// One batch of least-eigenvalue draws with their scaled coordinates
/// s = (μ_L − λ_min)/σ_L.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleBatch {
    pub params: EnsembleParams,
    pub seed: u64,
    pub reps: u32,
    pub min_eigs: Vec<f64>,
    pub scaled_min: Vec<f64>,
}

fn rng_for_rep(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

/// Eigenvalues (ascending) of W = X*X for one draw of the (N+a)×N complex
/// Gaussian matrix X with E|X_jk|² = 1.
pub fn sample_wishart(params: EnsembleParams, seed: u64) -> Result<Vec<f64>> {
    wishart_spectrum(params, &mut rng_for_rep(seed, 0))
}

fn wishart_spectrum(params: EnsembleParams, rng: &mut ChaCha8Rng) -> Result<Vec<f64>> {
    let big_n = params.big_n as usize;
    let rows = params.n() as usize;
    let normal = StandardNormal;
    let root_half = 0.5f64.sqrt();
    // Column-major real and imaginary parts of X.
    let mut re = vec![0.0f64; rows * big_n];
    let mut im = vec![0.0f64; rows * big_n];
    for r in 0..rows {
        for c in 0..big_n {
            let re_v: f64 = normal.sample(rng);
            let im_v: f64 = normal.sample(rng);
            re[c * rows + r] = re_v * root_half;
            im[c * rows + r] = im_v * root_half;
        }
    }
    let dot = |u: &[f64], v: &[f64]| -> f64 { u.iter().zip(v).map(|(a, b)| a * b).sum() };
    // W = X*X is Hermitian; its real embedding [[Re W, −Im W], [Im W, Re W]]
    // is symmetric with each eigenvalue of W doubled.
    let m = 2 * big_n;
    let mut emb = vec![0.0f64; m * m];
    for i in 0..big_n {
        let (ai, bi) = (&re[i * rows..(i + 1) * rows], &im[i * rows..(i + 1) * rows]);
        for j in 0..=i {
            let (aj, bj) = (&re[j * rows..(j + 1) * rows], &im[j * rows..(j + 1) * rows]);
            let re_w = dot(ai, aj) + dot(bi, bj);
            let im_w = dot(aj, bi) - dot(bj, ai); // Im W_ij, antisymmetric
            emb[i * m + j] = re_w;
            emb[j * m + i] = re_w;
            emb[(big_n + i) * m + (big_n + j)] = re_w;
            emb[(big_n + j) * m + (big_n + i)] = re_w;
            emb[(big_n + i) * m + j] = im_w;
            emb[j * m + (big_n + i)] = im_w;
            emb[(big_n + j) * m + i] = -im_w;
            emb[i * m + (big_n + j)] = -im_w;
        }
    }
    let doubled = sym_eigenvalues(emb, m)?;
    // Adjacent sorted values are the doubled copies; average each pair.
    Ok((0..big_n).map(|k| 0.5 * (doubled[2 * k] + doubled[2 * k + 1])).collect())
}

/// Draw `reps` least eigenvalues and scale them by the composite left pair.
pub fn scaled_min_batch(params: EnsembleParams, reps: u32, seed: u64) -> Result<SampleBatch> {
    if params.a < 2 {
        return Err(domain("scaled batches require a >= 2"));
    }
    let scaling = composite_left(params)?;
    let min_eigs: Vec<f64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng_for_rep(seed, u64::from(rep));
            wishart_spectrum(params, &mut rng).map(|ev| ev[0])
        })
        .collect::<Result<_>>()?;
    let scaled_min = min_eigs.iter().map(|l| (scaling.mu - l) / scaling.sigma).collect();
    Ok(SampleBatch { params, seed, reps, min_eigs, scaled_min })
}

/// Tabulated TW₂ distribution function F₂(s) = det(I − K_Ai) on (s, ∞),
/// built once on a grid and interpolated linearly.
#[derive(Debug, Clone)]
pub struct Tw2Cdf {
    s_min: f64,
    step: f64,
    values: Vec<f64>,
}

impl Tw2Cdf {
    pub fn build(quad: &QuadratureSpec) -> Result<Tw2Cdf> {
        let (s_min, s_max, step) = (-12.0f64, 5.0f64, 0.02f64);
        let count = ((s_max - s_min) / step).round() as usize + 1;
        let values: Vec<f64> = (0..count)
            .into_par_iter()
            .map(|i| fredholm_det(&KernelSpec::Airy, s_min + step * i as f64, quad))
            .collect::<Result<_>>()?;
        Ok(Tw2Cdf { s_min, step, values })
    }

    pub fn eval(&self, s: f64) -> f64 {
        let t = (s - self.s_min) / self.step;
        if t <= 0.0 {
            return 0.0;
        }
        let last = (self.values.len() - 1) as f64;
        if t >= last {
            return 1.0;
        }
        let i = t.floor() as usize;
        let frac = t - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Inverse by bisection on the tabulated range.
    pub fn quantile(&self, p: f64) -> f64 {
        let (mut lo, mut hi) = (self.s_min, self.s_min + self.step * (self.values.len() - 1) as f64);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if self.eval(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

/// Kolmogorov–Smirnov distance between the batch's empirical law and TW₂,
/// evaluated at every jump of the ECDF.
pub fn ks_to_tw2(batch: &SampleBatch, quad: &QuadratureSpec) -> Result<f64> {
    if batch.scaled_min.is_empty() {
        return Err(domain("KS statistic needs a nonempty batch"));
    }
    let cdf = Tw2Cdf::build(quad)?;
    Ok(ks_statistic(&batch.scaled_min, |s| cdf.eval(s)))
}

pub(crate) fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut ks = 0.0f64;
    for (i, s) in sorted.iter().enumerate() {
        let f = cdf(*s);
        ks = ks.max((f - (i as f64) / n).abs());
        ks = ks.max((f - (i as f64 + 1.0) / n).abs());
    }
    ks
}

/// Histogram of eigenvalues of W/n against the Marchenko–Pastur density
/// g_{γ,1}, plus the L¹ discrepancy between bin masses.
#[derive(Debug, Clone)]
pub struct MpComparison {
    pub bin_edges: Vec<f64>,
    pub hist_mass: Vec<f64>,
    pub density_mass: Vec<f64>,
    pub l1_discrepancy: f64,
}

pub fn esm_vs_mp(
    params: EnsembleParams,
    reps: u32,
    seed: u64,
    bins: usize,
) -> Result<MpComparison> {
    if params.big_n < 10 {
        return Err(domain("spectrum histograms need N >= 10"));
    }
    if bins == 0 || reps == 0 {
        return Err(domain("need at least one bin and one repetition"));
    }
    let gamma = params.gamma();
    let lo = (1.0 - gamma.sqrt()).powi(2) - 0.2;
    let hi = (1.0 + gamma.sqrt()).powi(2) + 0.2;
    let width = (hi - lo) / bins as f64;
    let n_scale = f64::from(params.n());

    let counts: Vec<u64> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rng_for_rep(seed, u64::from(rep));
            let ev = wishart_spectrum(params, &mut rng)?;
            let mut local = vec![0u64; bins];
            for v in ev {
                let idx = (((v / n_scale) - lo) / width).floor();
                let idx = (idx.max(0.0) as usize).min(bins - 1);
                local[idx] += 1;
            }
            Ok(local)
        })
        .reduce(
            || Ok(vec![0u64; bins]),
            |a: Result<Vec<u64>>, b| {
                let (mut a, b) = (a?, b?);
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;

    let total: u64 = counts.iter().sum();
    let hist_mass: Vec<f64> = counts.iter().map(|c| *c as f64 / total as f64).collect();
    let mut density_mass = Vec::with_capacity(bins);
    for b in 0..bins {
        let (a, c) = (lo + width * b as f64, lo + width * (b + 1) as f64);
        let mass = integrate_adaptive(|x| mp_density(gamma, 1.0, x), a, c, 1e-10, 1e-8, 400)?;
        density_mass.push(mass);
    }
    let l1_discrepancy = hist_mass
        .iter()
        .zip(&density_mass)
        .map(|(h, d)| (h - d).abs())
        .sum();
    let bin_edges = (0..=bins).map(|b| lo + width * b as f64).collect();
    Ok(MpComparison { bin_edges, hist_mass, density_mass, l1_discrepancy })
}
