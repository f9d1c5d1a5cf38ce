//! Density matrices: validation, eigenvalue extraction, and decoherence in a
//! conserved-quantity eigenbasis.
//!
//! Dimensions stay small (≤ 64), so spectra are extracted with a hand-rolled
//! cyclic Jacobi iteration on the complex Hermitian matrix: deterministic
//! pivot order, no external linear-algebra dependency, reproducible output.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::math;
use crate::spectra::Spectrum;
use crate::{Error, Result};

const HERM_TOL: f64 = 1e-10;
const TRACE_TOL: f64 = 1e-10;
const PSD_TOL: f64 = 1e-10;
/// Sweep until the off-diagonal Frobenius mass drops below this.
const OFF_DIAG_TOL: f64 = 1e-14;
const MAX_SWEEPS: usize = 100;

/// A validated density matrix: Hermitian within `1e-10` entrywise and of unit
/// trace within `1e-10`. Positive semidefiniteness is checked when the
/// spectrum is extracted.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates and wraps a row-major `dim x dim` complex matrix.
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::LengthMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        let mut max_asym = 0.0_f64;
        for i in 0..dim {
            for j in i..dim {
                let diff = data[i * dim + j] - data[j * dim + i].conj();
                max_asym = max_asym.max(math::sqrt(diff.norm_sqr()));
            }
        }
        if max_asym > HERM_TOL {
            return Err(Error::NotHermitian {
                max_asymmetry: max_asym,
            });
        }
        let trace: f64 = (0..dim).map(|i| data[i * dim + i].re).sum();
        if math::abs(trace - 1.0) > TRACE_TOL {
            return Err(Error::NotUnitTrace { trace });
        }
        Ok(Self { dim, data })
    }

    /// Diagonal real matrix.
    pub fn diagonal(values: &[f64]) -> Result<Self> {
        let dim = values.len();
        let mut data = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (i, &v) in values.iter().enumerate() {
            data[i * dim + i] = Complex64::new(v, 0.0);
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }
}

/// Spectrum plus diagnostics from the Jacobi iteration.
#[derive(Clone, Debug)]
pub struct EigenReport {
    pub spectrum: Spectrum,
    /// Max entrywise deviation of the reconstruction `V diag(λ) V†` from the
    /// input matrix.
    pub residual: f64,
    pub sweeps: usize,
}

/// Extracts the sorted eigenvalue spectrum of a density matrix.
///
/// Eigenvalues in `(-1e-10, 0)` are clipped to zero so that PSD noise cannot
/// create spurious rank; anything below `-1e-10` is rejected as not positive
/// semidefinite.
pub fn eigen_spectrum(rho: &DensityMatrix) -> Result<Spectrum> {
    eigen_report(rho).map(|r| r.spectrum)
}

/// As [`eigen_spectrum`], but also reports the reconstruction residual and
/// sweep count. Eigenvectors themselves stay internal.
pub fn eigen_report(rho: &DensityMatrix) -> Result<EigenReport> {
    let (evals, evecs, sweeps) = jacobi(rho.dim, rho.data.clone());
    let mut clipped = Vec::with_capacity(evals.len());
    for &l in &evals {
        if l < -PSD_TOL {
            return Err(Error::NotPsd { eigenvalue: l });
        }
        clipped.push(if l < 0.0 { 0.0 } else { l });
    }
    let residual = reconstruction_residual(rho, &evals, &evecs);
    let spectrum = Spectrum::from_probs(&clipped)?;
    Ok(EigenReport {
        spectrum,
        residual,
        sweeps,
    })
}

/// Projects out entries between different label sectors: entry `(i, j)` is
/// zeroed whenever `labels[i] != labels[j]` (exact comparison). The result is
/// block diagonal and still a density matrix.
pub fn decohere(rho: &DensityMatrix, labels: &[f64]) -> Result<DensityMatrix> {
    if labels.len() != rho.dim {
        return Err(Error::LengthMismatch {
            expected: rho.dim,
            found: labels.len(),
        });
    }
    let mut data = rho.data.clone();
    for i in 0..rho.dim {
        for j in 0..rho.dim {
            if labels[i] != labels[j] {
                data[i * rho.dim + j] = Complex64::new(0.0, 0.0);
            }
        }
    }
    DensityMatrix::new(rho.dim, data)
}

/// Cyclic Jacobi for complex Hermitian matrices. Returns eigenvalues, the
/// accumulated unitary (columns are eigenvectors), and the number of sweeps.
fn jacobi(n: usize, mut a: Vec<Complex64>) -> (Vec<f64>, Vec<Complex64>, usize) {
    let mut v = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        v[i * n + i] = Complex64::new(1.0, 0.0);
    }
    if n <= 1 {
        let evals = (0..n).map(|i| a[i * n + i].re).collect();
        return (evals, v, 0);
    }

    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..n - 1 {
            for q in p + 1..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if math::sqrt(off) < OFF_DIAG_TOL {
            break;
        }
        sweeps += 1;

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = math::sqrt(apq.norm_sqr());
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag; // e^{i arg(a_pq)}
                let theta = (a[q * n + q].re - a[p * n + p].re) / (2.0 * mag);
                // Smaller-magnitude root of t^2 - 2 theta t - 1 = 0.
                let t = {
                    let sign = if theta < 0.0 { -1.0 } else { 1.0 };
                    -sign / (math::abs(theta) + math::sqrt(theta * theta + 1.0))
                };
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let sigma = t * c;
                let s = phase.conj() * sigma; // complex rotation entry

                // Columns: M = A * U with U[pp]=c, U[pq]=-conj(s), U[qp]=s, U[qq]=c.
                for r in 0..n {
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    a[r * n + p] = arp * c + arq * s;
                    a[r * n + q] = arp * (-s.conj()) + arq * c;
                }
                // Rows: A' = U† * M.
                for r in 0..n {
                    let apr = a[p * n + r];
                    let aqr = a[q * n + r];
                    a[p * n + r] = apr * c + aqr * s.conj();
                    a[q * n + r] = apr * (-s) + aqr * c;
                }
                // Accumulate the eigenvector matrix.
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp * c + vrq * s;
                    v[r * n + q] = vrp * (-s.conj()) + vrq * c;
                }
                // Pin the annihilated pair to exact zero.
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);
            }
        }
    }

    let evals = (0..n).map(|i| a[i * n + i].re).collect();
    (evals, v, sweeps)
}

fn reconstruction_residual(rho: &DensityMatrix, evals: &[f64], v: &[Complex64]) -> f64 {
    let n = rho.dim;
    let mut max_dev = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..n {
                acc += v[i * n + k] * evals[k] * v[j * n + k].conj();
            }
            let diff = acc - rho.data[i * n + j];
            max_dev = max_dev.max(math::sqrt(diff.norm_sqr()));
        }
    }
    max_dev
}
