//! Reduced density matrices, Schmidt spectra, and the two entanglement
//! entropies (von Neumann and linear), all in natural log units.

use crate::error::{Error, Result};
use crate::linalg::{self, Eigh};
use crate::scalar::Real;
use crate::tops::BipartiteState;
use ndarray::Array2;
use num_complex::Complex;

/// Which subsystem survives the partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// A reduced density matrix: Hermitian, unit trace, positive semidefinite
/// up to eigensolver noise.
#[derive(Debug, Clone)]
pub struct DensityMatrix<R: Real> {
    matrix: Array2<Complex<R>>,
}

impl<R: Real> DensityMatrix<R> {
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex<R>> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex<R> {
        let mut t = Complex::new(R::zero(), R::zero());
        for i in 0..self.dim() {
            t += self.matrix[[i, i]];
        }
        t
    }

    pub fn hermiticity_residual(&self) -> R {
        linalg::hermiticity_residual(&self.matrix.view())
    }

    /// Tr ρ² (purity).
    pub fn purity(&self) -> R {
        let mut p = R::zero();
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                p += (self.matrix[[i, j]] * self.matrix[[j, i]]).re;
            }
        }
        p
    }
}

/// Schmidt spectrum: descending nonnegative eigenvalues of the smaller
/// RDM, clamped at zero within 1e-12 and renormalized to unit sum.
#[derive(Debug, Clone)]
pub struct SchmidtSpectrum<R: Real> {
    values: Vec<R>,
}

impl<R: Real> SchmidtSpectrum<R> {
    /// Clamp, validate, sort descending, renormalize.
    pub fn new(mut raw: Vec<R>) -> Result<Self> {
        let clamp = R::tol(1e-12);
        let mut sum = R::zero();
        for v in raw.iter_mut() {
            if *v < R::zero() {
                if *v < -clamp {
                    return Err(Error::InvalidParameter(format!(
                        "schmidt value {:e} below the clamping window",
                        v.to_f64().unwrap_or(f64::NAN)
                    )));
                }
                *v = R::zero();
            }
            sum += *v;
        }
        if (sum - R::one()).abs() > R::tol(1e-10) {
            return Err(Error::InvalidParameter(format!(
                "schmidt values sum to {} (need 1)",
                sum
            )));
        }
        let inv = R::one() / sum;
        for v in raw.iter_mut() {
            *v *= inv;
        }
        raw.sort_by(|a, b| b.partial_cmp(a).expect("schmidt value NaN"));
        Ok(Self { values: raw })
    }

    pub fn values(&self) -> &[R] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Partial trace of |ψ⟩⟨ψ| via the amplitude matrix A: AA† for the first
/// subsystem (N×N), A†A for the second (M×M).
pub fn reduced_density_matrix<R: Real>(psi: &BipartiteState<R>, keep: Subsystem) -> DensityMatrix<R> {
    let a = psi.as_matrix();
    let (n, m) = a.dim();
    let matrix = match keep {
        Subsystem::First => {
            let mut rho = Array2::zeros((n, n));
            for i in 0..n {
                for j in i..n {
                    let mut acc = Complex::new(R::zero(), R::zero());
                    for k in 0..m {
                        acc += a[[i, k]] * a[[j, k]].conj();
                    }
                    rho[[i, j]] = acc;
                    rho[[j, i]] = acc.conj();
                }
            }
            rho
        }
        Subsystem::Second => {
            let mut rho = Array2::zeros((m, m));
            for i in 0..m {
                for j in i..m {
                    let mut acc = Complex::new(R::zero(), R::zero());
                    for k in 0..n {
                        acc += a[[k, i]].conj() * a[[k, j]];
                    }
                    rho[[i, j]] = acc;
                    rho[[j, i]] = acc.conj();
                }
            }
            rho
        }
    };
    DensityMatrix { matrix }
}

/// Schmidt spectrum of a state: eigenvalues of the smaller RDM.
pub fn schmidt_spectrum<R: Real>(psi: &BipartiteState<R>) -> Result<SchmidtSpectrum<R>> {
    let keep = if psi.n_dim() <= psi.m_dim() { Subsystem::First } else { Subsystem::Second };
    let rho = reduced_density_matrix(psi, keep);
    let Eigh { values, vectors: _ } = linalg::eigh(&rho.matrix().view())?;
    SchmidtSpectrum::new(values.to_vec())
}

/// S_V = −Σ λ ln λ, with 0·ln 0 = 0. Nats.
pub fn von_neumann_entropy<R: Real>(spectrum: &SchmidtSpectrum<R>) -> R {
    let mut s = R::zero();
    for &v in spectrum.values() {
        if v > R::zero() {
            s -= v * v.ln();
        }
    }
    s
}

/// S_R = 1 − Σ λ² (linear entropy).
pub fn linear_entropy<R: Real>(spectrum: &SchmidtSpectrum<R>) -> R {
    let mut sq = R::zero();
    for &v in spectrum.values() {
        sq += v * v;
    }
    R::one() - sq
}
