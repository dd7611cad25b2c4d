//! Floquet eigenproblem, eigenstate entanglement statistics,
//! nearest-neighbor spacing analysis, and the symmetry checks.

use crate::entanglement::{linear_entropy, schmidt_spectrum, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::linalg::{self, expi_hermitian};
use crate::rmt::MPDensity;
use crate::scalar::Real;
use crate::spin::{build_spin_operators, Spin, UnitaryMatrix};
use crate::tops::BipartiteState;
use ndarray::{Array2, ArrayView1};
use num_complex::Complex;
use rayon::prelude::*;

/// Full eigendecomposition of a Floquet operator: eigenangles in [0, 2π)
/// ascending, eigenvector columns aligned.
pub struct FloquetSpectrum<R: Real> {
    eigenangles: Vec<R>,
    eigenstates: Array2<Complex<R>>,
}

impl<R: Real> FloquetSpectrum<R> {
    pub fn dim(&self) -> usize {
        self.eigenangles.len()
    }

    pub fn eigenangles(&self) -> &[R] {
        &self.eigenangles
    }

    pub fn eigenstates(&self) -> &Array2<Complex<R>> {
        &self.eigenstates
    }

    pub fn eigenstate(&self, k: usize) -> ArrayView1<'_, Complex<R>> {
        self.eigenstates.column(k)
    }

    /// max over eigenpairs of ‖U v − e^{iθ} v‖₂.
    pub fn max_residual(&self, u: &UnitaryMatrix<R>) -> R {
        let mut worst = R::zero();
        for (k, theta) in self.eigenangles.iter().enumerate() {
            let v = self.eigenstates.column(k);
            let uv = linalg::matvec(&u.view(), &v);
            let phase = Complex::from_polar(R::one(), *theta);
            let mut acc = R::zero();
            for (a, b) in uv.iter().zip(v.iter()) {
                acc += (*a - phase * *b).norm_sqr();
            }
            worst = worst.max(acc.sqrt());
        }
        worst
    }

    /// Orthonormality defect ‖V†V − I‖_max.
    pub fn orthonormality_residual(&self) -> R {
        linalg::unitarity_residual(&self.eigenstates.view())
    }
}

/// Diagonalize a unitary Floquet operator (Hermitian solver underneath).
pub fn diagonalize_floquet<R: Real>(u: &UnitaryMatrix<R>) -> Result<FloquetSpectrum<R>> {
    let (angles, vectors) = linalg::eig_unitary(&u.view())?;
    Ok(FloquetSpectrum { eigenangles: angles, eigenstates: vectors })
}

/// Means and spreads of eigenstate entanglement over a spectrum.
#[derive(Debug, Clone, Copy)]
pub struct EntanglementAverage<R: Real> {
    pub states: usize,
    pub sv_mean: R,
    pub sv_std: R,
    pub sv_std_err: R,
    pub sr_mean: R,
    pub sr_std: R,
    pub sr_std_err: R,
}

fn eigenstate_as_bipartite<R: Real>(
    col: ArrayView1<Complex<R>>,
    n_dim: usize,
    m_dim: usize,
) -> Result<BipartiteState<R>> {
    BipartiteState::from_unnormalized(n_dim, m_dim, col.to_owned())
}

/// Per-eigenstate Schmidt entropies, unweighted-averaged over the whole
/// spectrum (both parity sectors included when parity is present).
pub fn eigenstate_entanglement_average<R: Real>(
    spectrum: &FloquetSpectrum<R>,
    n_dim: usize,
    m_dim: usize,
) -> Result<EntanglementAverage<R>> {
    let d = spectrum.dim();
    if n_dim * m_dim != d {
        return Err(Error::DimensionMismatch(format!(
            "spectrum dimension {} does not factor as {}x{}",
            d, n_dim, m_dim
        )));
    }
    let entropies: Vec<(R, R)> = (0..d)
        .into_par_iter()
        .map(|k| {
            let psi = eigenstate_as_bipartite(spectrum.eigenstate(k), n_dim, m_dim)?;
            let spec = schmidt_spectrum(&psi)?;
            Ok((von_neumann_entropy(&spec), linear_entropy(&spec)))
        })
        .collect::<Result<Vec<_>>>()?;

    let nd = R::of(d as f64);
    let (mut sv_sum, mut sr_sum) = (R::zero(), R::zero());
    for &(sv, sr) in &entropies {
        sv_sum += sv;
        sr_sum += sr;
    }
    let sv_mean = sv_sum / nd;
    let sr_mean = sr_sum / nd;
    let (mut sv_var, mut sr_var) = (R::zero(), R::zero());
    for &(sv, sr) in &entropies {
        sv_var += (sv - sv_mean) * (sv - sv_mean);
        sr_var += (sr - sr_mean) * (sr - sr_mean);
    }
    let denom = if d > 1 { nd - R::one() } else { R::one() };
    let sv_std = (sv_var / denom).sqrt();
    let sr_std = (sr_var / denom).sqrt();
    Ok(EntanglementAverage {
        states: d,
        sv_mean,
        sv_std,
        sv_std_err: sv_std / nd.sqrt(),
        sr_mean,
        sr_std,
        sr_std_err: sr_std / nd.sqrt(),
    })
}

/// All Schmidt eigenvalues of all eigenstates, pooled.
pub fn pooled_eigenstate_schmidt_values<R: Real>(
    spectrum: &FloquetSpectrum<R>,
    n_dim: usize,
    m_dim: usize,
) -> Result<Vec<R>> {
    let d = spectrum.dim();
    if n_dim * m_dim != d {
        return Err(Error::DimensionMismatch(format!(
            "spectrum dimension {} does not factor as {}x{}",
            d, n_dim, m_dim
        )));
    }
    let per_state: Vec<Vec<R>> = (0..d)
        .into_par_iter()
        .map(|k| {
            let psi = eigenstate_as_bipartite(spectrum.eigenstate(k), n_dim, m_dim)?;
            Ok(schmidt_spectrum(&psi)?.values().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_state.into_iter().flatten().collect())
}

/// Pooled eigenstate RDM spectra as a density-normalized histogram over
/// [0, 1.2·λ_max], directly comparable to the analytic density.
pub fn pooled_eigenstate_rdm_spectrum<R: Real>(
    spectrum: &FloquetSpectrum<R>,
    n_dim: usize,
    m_dim: usize,
    bins: usize,
) -> Result<Histogram<R>> {
    let values = pooled_eigenstate_schmidt_values(spectrum, n_dim, m_dim)?;
    let q = R::of(m_dim as f64) / R::of(n_dim as f64);
    let mp = MPDensity::new(n_dim, q)?;
    Histogram::from_values(&values, bins, R::zero(), mp.lambda_max() * R::of(1.2))
}

/// Wigner surmise P(s) = (π/2)·s·exp(−πs²/4).
pub fn wigner_surmise_pdf<R: Real>(s: R) -> R {
    R::FRAC_PI_2() * s * (-R::PI() * s * s / R::of(4.0)).exp()
}

/// Wigner surmise CDF 1 − exp(−πs²/4).
pub fn wigner_surmise_cdf<R: Real>(s: R) -> R {
    R::one() - (-R::PI() * s * s / R::of(4.0)).exp()
}

/// Kolmogorov–Smirnov distance between a spacing sample and the Wigner
/// surmise CDF.
pub fn ks_distance_to_wigner<R: Real>(spacings: &[R]) -> R {
    let mut sorted = spacings.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("spacing NaN"));
    let n = R::of(sorted.len() as f64);
    let mut d = R::zero();
    for (i, &s) in sorted.iter().enumerate() {
        let cdf = wigner_surmise_cdf(s);
        let lo = R::of(i as f64) / n;
        let hi = R::of((i + 1) as f64) / n;
        d = d.max((cdf - lo).abs()).max((hi - cdf).abs());
    }
    d
}

/// Nearest-neighbor spacing analysis of a set of eigenangles.
pub struct NnsdResult<R: Real> {
    /// Unfolded spacings in spectral order, wrap-around spacing last;
    /// exactly as many spacings as angles.
    pub spacings: Vec<R>,
    /// Mean spacing; equals 1 up to roundoff by construction.
    pub mean_spacing: R,
    /// KS distance to the Wigner surmise CDF.
    pub ks_distance: R,
    pub histogram: Histogram<R>,
}

/// Unfold eigenangles by the uniform circular density
/// (spacing = d·Δθ/2π, wrap-around included) and compare to the Wigner
/// surmise. `bins` histogram bins cover [0, 4].
pub fn nnsd_from_angles<R: Real>(angles: &[R], bins: usize) -> Result<NnsdResult<R>> {
    let d = angles.len();
    if d < 2 {
        return Err(Error::InvalidParameter("need at least 2 eigenangles".into()));
    }
    let mut sorted = angles.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("eigenangle NaN"));
    let scale = R::of(d as f64) / R::TAU();
    let mut spacings = Vec::with_capacity(d);
    for w in sorted.windows(2) {
        spacings.push((w[1] - w[0]) * scale);
    }
    spacings.push((sorted[0] + R::TAU() - sorted[d - 1]) * scale);
    let mean_spacing = spacings.iter().cloned().sum::<R>() / R::of(d as f64);
    let ks_distance = ks_distance_to_wigner(&spacings);
    let histogram = Histogram::from_values(&spacings, bins.max(2), R::zero(), R::of(4.0))?;
    Ok(NnsdResult { spacings, mean_spacing, ks_distance, histogram })
}

/// NNSD of a Floquet spectrum.
pub fn nnsd<R: Real>(spectrum: &FloquetSpectrum<R>, bins: usize) -> Result<NnsdResult<R>> {
    nnsd_from_angles(spectrum.eigenangles(), bins)
}

/// Parity operator R = exp(iπ J_{y₁}) ⊗ exp(iπ J_{y₂}); commutes with the
/// Floquet map exactly when α₁ = α₂ = 0.
pub fn parity_operator<R: Real>(j1: Spin, j2: Spin) -> Result<UnitaryMatrix<R>> {
    let r1 = expi_hermitian(&build_spin_operators::<R>(j1).jy().view(), R::PI())?;
    let r2 = expi_hermitian(&build_spin_operators::<R>(j2).jy().view(), R::PI())?;
    UnitaryMatrix::new(linalg::kron(&r1.view(), &r2.view()))
}

/// ‖R·U·R† − U‖_max: zero iff U commutes with R.
pub fn commutant_residual<R: Real>(r: &UnitaryMatrix<R>, u: &UnitaryMatrix<R>) -> R {
    let conj = r.mul(u).mul(&r.dagger());
    linalg::max_abs_diff(&conj.view(), &u.view())
}

/// Unitary part V of the antiunitary time-reversal T = V·K for the
/// coupled-top map: V = [exp(iπJx)·exp(−iπJy/2)] ⊗ [same for top 2].
///
/// With K complex conjugation in the |m₁, m₂⟩ basis, T·U_T·T⁻¹ = U_T⁻¹
/// holds for every (k, ε, α); the kick and coupling phases conjugate to
/// their inverses and the precession factors are real.
pub fn time_reversal_unitary<R: Real>(j1: Spin, j2: Spin) -> Result<UnitaryMatrix<R>> {
    let factor = |spin: Spin| -> Result<Array2<Complex<R>>> {
        let ops = build_spin_operators::<R>(spin);
        let x = expi_hermitian(&ops.jx().view(), R::PI())?;
        let y = expi_hermitian(&ops.jy().view(), -R::FRAC_PI_2())?;
        Ok(linalg::matmul(&x.view(), &y.view()))
    };
    let v1 = factor(j1)?;
    let v2 = factor(j2)?;
    UnitaryMatrix::new(linalg::kron(&v1.view(), &v2.view()))
}

/// Residual ‖V·conj(U)·V† − U†‖_max of the time-reversal relation
/// T·U·T⁻¹ = U⁻¹ with T = V·K. Values ≲ 1e-8 certify the symmetry.
pub fn time_reversal_check<R: Real>(u: &UnitaryMatrix<R>, j1: Spin, j2: Spin) -> Result<R> {
    if j1.dim() * j2.dim() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "operator dimension {} does not match spins {} x {}",
            u.dim(),
            j1,
            j2
        )));
    }
    let v = time_reversal_unitary::<R>(j1, j2)?;
    let u_conj = UnitaryMatrix::new(u.matrix().mapv(|c| c.conj()))?;
    let lhs = v.mul(&u_conj).mul(&v.dagger());
    let rhs = u.dagger();
    Ok(linalg::max_abs_diff(&lhs.view(), &rhs.view()))
}

/// Eigenstates labeled by their parity eigenvalue.
pub struct ParitySectors<R: Real> {
    /// One label per eigenstate, aligned with the spectrum: the eigenvalue
    /// of R on that state (±1, or ±i for mixed integer/half-odd spins).
    pub labels: Vec<Complex<R>>,
    /// max over states of ‖R v − label·v‖₂ after degeneracy resolution.
    pub max_label_residual: R,
    /// Eigenangles grouped by distinct label, each group sorted ascending.
    pub sectors: Vec<(Complex<R>, Vec<R>)>,
    /// The resolved eigenvector basis (rotated within degenerate clusters).
    pub eigenstates: Array2<Complex<R>>,
}

/// Label every eigenstate by its R-eigenvalue, resolving eigenangle
/// degeneracies (within 1e-9) by diagonalizing R inside each cluster.
pub fn parity_sectors<R: Real>(
    spectrum: &FloquetSpectrum<R>,
    r_op: &UnitaryMatrix<R>,
) -> Result<ParitySectors<R>> {
    let d = spectrum.dim();
    if r_op.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "parity operator dimension {} vs spectrum {}",
            r_op.dim(),
            d
        )));
    }
    let mut vectors = spectrum.eigenstates().clone();
    let angles = spectrum.eigenangles();
    let tol = R::tol(1e-9);

    // resolve degenerate clusters against R
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && angles[end] - angles[end - 1] <= tol {
            end += 1;
        }
        if end - start > 1 {
            let w = vectors.slice(ndarray::s![.., start..end]).to_owned();
            let rw = linalg::matmul(&r_op.view(), &w.view());
            let s = linalg::matmul(&linalg::adjoint(&w.view()).view(), &rw.view());
            let (_phases, g) = linalg::eig_unitary(&s.view())?;
            let rotated = linalg::matmul(&w.view(), &g.view());
            vectors.slice_mut(ndarray::s![.., start..end]).assign(&rotated);
        }
        start = end;
    }

    let mut labels = Vec::with_capacity(d);
    let mut max_label_residual = R::zero();
    for k in 0..d {
        let v = vectors.column(k);
        let rv = linalg::matvec(&r_op.view(), &v);
        let mut mu = Complex::new(R::zero(), R::zero());
        for (a, b) in v.iter().zip(rv.iter()) {
            mu += a.conj() * *b;
        }
        // snap to the nearest quarter-turn phase (R² = ±I)
        let snapped = snap_to_quarter_turn(mu);
        let mut resid = R::zero();
        for (a, b) in rv.iter().zip(v.iter()) {
            resid += (*a - snapped * *b).norm_sqr();
        }
        max_label_residual = max_label_residual.max(resid.sqrt());
        labels.push(snapped);
    }

    // group angles by label
    let mut sectors: Vec<(Complex<R>, Vec<R>)> = Vec::new();
    for (k, label) in labels.iter().enumerate() {
        match sectors.iter_mut().find(|(l, _)| (*l - *label).norm() < R::of(0.5)) {
            Some((_, list)) => list.push(angles[k]),
            None => sectors.push((*label, vec![angles[k]])),
        }
    }
    for (_, list) in sectors.iter_mut() {
        list.sort_by(|a, b| a.partial_cmp(b).expect("eigenangle NaN"));
    }

    Ok(ParitySectors { labels, max_label_residual, sectors, eigenstates: vectors })
}

fn snap_to_quarter_turn<R: Real>(mu: Complex<R>) -> Complex<R> {
    let candidates = [
        Complex::new(R::one(), R::zero()),
        Complex::new(-R::one(), R::zero()),
        Complex::new(R::zero(), R::one()),
        Complex::new(R::zero(), -R::one()),
    ];
    let mut best = candidates[0];
    let mut best_d = (mu - best).norm();
    for c in &candidates[1..] {
        let dist = (mu - *c).norm();
        if dist < best_d {
            best_d = dist;
            best = *c;
        }
    }
    best
}

/// Pooled NNSD over parity sectors: each sector is unfolded by its own
/// size (spacing = n_sector·Δθ/2π, wrap-around included), then spacings
/// are pooled. Required for meaningful statistics when α₁ = α₂ = 0.
pub fn nnsd_by_sectors<R: Real>(sectors: &ParitySectors<R>, bins: usize) -> Result<NnsdResult<R>> {
    let mut pooled: Vec<R> = Vec::new();
    for (_, angles) in &sectors.sectors {
        if angles.len() < 2 {
            continue;
        }
        let part = nnsd_from_angles(angles, 2)?;
        pooled.extend(part.spacings);
    }
    if pooled.len() < 2 {
        return Err(Error::InvalidParameter("parity sectors too small for spacing statistics".into()));
    }
    let mean_spacing = pooled.iter().cloned().sum::<R>() / R::of(pooled.len() as f64);
    let ks_distance = ks_distance_to_wigner(&pooled);
    let histogram = Histogram::from_values(&pooled, bins.max(2), R::zero(), R::of(4.0))?;
    Ok(NnsdResult { spacings: pooled, mean_spacing, ks_distance, histogram })
}
