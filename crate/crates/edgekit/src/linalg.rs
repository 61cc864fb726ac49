//! Eigenvalues-only solver for dense real symmetric matrices:
//! Householder tridiagonalization followed by implicit-shift QL.
//!
//! The Monte Carlo path solves thousands of 2N×2N embeddings per batch and
//! needs no eigenvectors, which general-purpose decompositions insist on
//! accumulating; this routine does roughly a quarter of that work.

use crate::error::{convergence, Result};

/// Eigenvalues (ascending) of the symmetric matrix stored row-major in `a`.
/// The buffer is consumed as scratch.
pub fn sym_eigenvalues(mut a: Vec<f64>, n: usize) -> Result<Vec<f64>> {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return Ok(Vec::new());
    }
    if n == 1 {
        return Ok(vec![a[0]]);
    }
    let (mut d, mut e) = tridiagonalize(&mut a, n);
    ql_implicit(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction to tridiagonal form; returns (diagonal, subdiagonal)
/// with the subdiagonal in e[1..].
fn tridiagonalize(a: &mut [f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0f64; n];
    let mut e = vec![0.0f64; n];
    for i in (1..n).rev() {
        let l = i;
        let mut h = 0.0f64;
        if l > 1 {
            let scale: f64 = (0..l).map(|k| a[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = a[i * n + l - 1];
            } else {
                for k in 0..l {
                    a[i * n + k] /= scale;
                    h += a[i * n + k] * a[i * n + k];
                }
                let f = a[i * n + l - 1];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i * n + l - 1] = f - g;
                let mut f_acc = 0.0f64;
                for j in 0..l {
                    // A·u restricted to the lower triangle.
                    let mut g_acc = 0.0f64;
                    for k in 0..=j {
                        g_acc += a[j * n + k] * a[i * n + k];
                    }
                    for k in j + 1..l {
                        g_acc += a[k * n + j] * a[i * n + k];
                    }
                    e[j] = g_acc / h;
                    f_acc += e[j] * a[i * n + j];
                }
                let hh = f_acc / (h + h);
                for j in 0..l {
                    let fj = a[i * n + j];
                    let gj = e[j] - hh * fj;
                    e[j] = gj;
                    for k in 0..=j {
                        a[j * n + k] -= fj * e[k] + gj * a[i * n + k];
                    }
                }
            }
        } else {
            e[i] = a[i * n + l - 1];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i * n + i];
    }
    e[0] = 0.0;
    (d, e)
}

/// Implicit-shift QL on a tridiagonal (d, e); e[0] unused on entry.
fn ql_implicit(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(convergence("QL iteration stalled on a tridiagonal block"));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                f = (d[i] - g) * s + 2.0 * c * b;
                p = s * f;
                d[i + 1] = g + p;
                g = c * f - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};

    #[test]
    fn matches_reference_decomposition() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for &n in &[1usize, 2, 3, 7, 24, 61] {
            let mut flat = vec![0.0f64; n * n];
            for i in 0..n {
                for j in 0..=i {
                    let v = rng.gen_range(-2.0..2.0);
                    flat[i * n + j] = v;
                    flat[j * n + i] = v;
                }
            }
            let reference = {
                let m = DMatrix::from_row_slice(n, n, &flat);
                let mut ev = m.symmetric_eigen().eigenvalues.as_slice().to_vec();
                ev.sort_by(f64::total_cmp);
                ev
            };
            let got = sym_eigenvalues(flat, n).unwrap();
            let scale = reference.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            for (g, want) in got.iter().zip(&reference) {
                assert!((g - want).abs() <= 1e-11 * scale, "n = {n}: {g} vs {want}");
            }
        }
    }

    #[test]
    fn diagonal_and_identity() {
        let got = sym_eigenvalues(vec![3.0, 0.0, 0.0, -1.0], 2).unwrap();
        assert!((got[0] + 1.0).abs() < 1e-14 && (got[1] - 3.0).abs() < 1e-14);
    }
}
