//! Random-matrix side of the laboratory: random bipartite pure states,
//! Monte Carlo spectral statistics, and the analytic predictions for the
//! RDM eigenvalue density and the entanglement saturation values.

use crate::entanglement::{linear_entropy, schmidt_spectrum, von_neumann_entropy};
use crate::error::{Error, Result};
use crate::histogram::Histogram;
use crate::quadrature::integrate;
use crate::scalar::Real;
use crate::tops::BipartiteState;
use ndarray::{Array1, Array2};
use num_complex::Complex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

/// Amplitude statistics of the random-state ensemble: real Gaussian
/// (time-reversal-symmetric, orthogonal class) or complex Gaussian
/// (unitary class).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnsembleKind {
    Real,
    Complex,
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "real" => Ok(Self::Real),
            "complex" => Ok(Self::Complex),
            other => Err(Error::InvalidParameter(format!(
                "unknown ensemble '{}': expected 'real' or 'complex'",
                other
            ))),
        }
    }
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Real => write!(f, "real"),
            Self::Complex => write!(f, "complex"),
        }
    }
}

/// The limiting eigenvalue density of RDMs of random pure states, for
/// subsystem dimension N and ratio Q = M/N ≥ 1:
///
///   f(λ) = (NQ/2π)·√((λ_max−λ)(λ−λ_min))/λ,
///   λ_min^max = (1 + 1/Q ∓ 2/√Q)/N.
///
/// Normalized so ∫f dλ = 1 (N·f(λ)dλ counts eigenvalues).
#[derive(Debug, Clone, Copy)]
pub struct MPDensity<R: Real> {
    n_dim: usize,
    q_ratio: R,
    lambda_min: R,
    lambda_max: R,
}

impl<R: Real> MPDensity<R> {
    pub fn new(n_dim: usize, q_ratio: R) -> Result<Self> {
        if n_dim == 0 {
            return Err(Error::InvalidParameter("N must be at least 1".into()));
        }
        if !(q_ratio >= R::one()) || !q_ratio.is_finite() {
            return Err(Error::InvalidParameter(format!("Q = {} must be >= 1", q_ratio)));
        }
        let n = R::of(n_dim as f64);
        let inv_q = R::one() / q_ratio;
        let two_rt = R::of(2.0) / q_ratio.sqrt();
        let lambda_min = ((R::one() + inv_q - two_rt) / n).max(R::zero());
        let lambda_max = (R::one() + inv_q + two_rt) / n;
        Ok(Self { n_dim, q_ratio, lambda_min, lambda_max })
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn q_ratio(&self) -> R {
        self.q_ratio
    }

    pub fn lambda_min(&self) -> R {
        self.lambda_min
    }

    pub fn lambda_max(&self) -> R {
        self.lambda_max
    }

    /// f(λ): zero outside the support; +∞ at the λ = λ_min = 0 endpoint of
    /// the Q = 1 case (an integrable singularity, never a quadrature node).
    pub fn density(&self, lambda: R) -> R {
        if lambda < self.lambda_min || lambda > self.lambda_max {
            return R::zero();
        }
        if lambda <= R::zero() {
            return R::infinity();
        }
        let prod = (self.lambda_max - lambda) * (lambda - self.lambda_min);
        let n = R::of(self.n_dim as f64);
        n * self.q_ratio / R::TAU() * prod.max(R::zero()).sqrt() / lambda
    }

    /// ∫ f(λ) g(λ) dλ over the support ∩ [lo, hi].
    fn integrate_weighted<F: Fn(R) -> R>(&self, lo: R, hi: R, g: F, tol: R) -> Result<R> {
        let a = lo.max(self.lambda_min);
        let b = hi.min(self.lambda_max);
        if !(b > a) {
            return Ok(R::zero());
        }
        integrate(|lam| self.density(lam) * g(lam), a, b, tol)
    }

    /// ∫ f over the whole support; equals 1 up to quadrature error.
    pub fn normalization(&self) -> Result<R> {
        self.integrate_weighted(self.lambda_min, self.lambda_max, |_| R::one(), R::tol(1e-12))
    }

    /// ∫ λ f dλ; equals 1/N (unit trace of the RDM).
    pub fn first_moment(&self) -> Result<R> {
        self.integrate_weighted(self.lambda_min, self.lambda_max, |lam| lam, R::tol(1e-12))
    }

    /// The statistical entanglement bound S_V = −N ∫ f(λ) λ ln λ dλ
    /// = ln(γ(Q)·N), by adaptive quadrature with endpoint handling.
    pub fn entropy_bound(&self) -> Result<R> {
        let n = R::of(self.n_dim as f64);
        let v = self.integrate_weighted(
            self.lambda_min,
            self.lambda_max,
            |lam| lam * lam.ln(),
            R::tol(1e-12),
        )?;
        Ok(-n * v)
    }

    /// Per-bin masses ∫ f over each [edges[i], edges[i+1]], for comparing
    /// histograms against the analytic density.
    pub fn bin_masses(&self, edges: &[R]) -> Result<Vec<R>> {
        let mut masses = Vec::with_capacity(edges.len().saturating_sub(1));
        for w in edges.windows(2) {
            masses.push(self.integrate_weighted(w[0], w[1], |_| R::one(), R::tol(1e-11))?);
        }
        Ok(masses)
    }
}

/// Generalized hypergeometric series ₃F₂(a₁,a₂,a₃; b₁,b₂; z) by direct
/// summation, terminated when the increment falls below 1e-14 relative.
pub fn hyp3f2_series<R: Real>(a: [R; 3], b: [R; 2], z: R) -> Result<R> {
    const TERM_CAP: usize = 1_000_000;
    if !(z >= R::zero() && z <= R::one()) {
        return Err(Error::InvalidParameter(format!("z = {} outside [0, 1]", z)));
    }
    for bv in b {
        if bv <= R::zero() && bv.fract() == R::zero() {
            return Err(Error::InvalidParameter("nonpositive integer lower parameter".into()));
        }
    }
    if z == R::one() {
        let excess = b[0] + b[1] + R::one() - a[0] - a[1] - a[2];
        if !(excess > R::one()) {
            return Err(Error::InvalidParameter(
                "series at z = 1 needs parameter excess > 1".into(),
            ));
        }
    }
    let rel = R::tol(1e-14);
    let mut sum = R::one();
    let mut term = R::one();
    for n in 0..TERM_CAP {
        let nf = R::of(n as f64);
        term = term * (a[0] + nf) * (a[1] + nf) * (a[2] + nf) * z
            / ((b[0] + nf) * (b[1] + nf) * (nf + R::one()));
        sum += term;
        if term.abs() < rel * sum.abs() {
            return Ok(sum);
        }
    }
    Err(Error::SeriesNonConvergence(TERM_CAP))
}

/// γ(Q) = Q/(Q+1) · exp[ Q/(2(Q+1)²) · ₃F₂(1,1,3/2; 2,3; 4Q/(Q+1)²) ].
///
/// γ(1) = e^{−1/2}; γ → 1 as Q → ∞. ln(γN) is the entanglement
/// saturation value.
pub fn gamma_factor<R: Real>(q: R) -> Result<R> {
    if !(q >= R::one()) || !q.is_finite() {
        return Err(Error::InvalidParameter(format!("Q = {} must be >= 1", q)));
    }
    let one = R::one();
    let qp1 = q + one;
    let z = R::of(4.0) * q / (qp1 * qp1);
    let f = hyp3f2_series(
        [one, one, R::of(1.5)],
        [R::of(2.0), R::of(3.0)],
        z.min(one), // roundoff can push 4Q/(Q+1)² a ulp past 1 at Q = 1
    )?;
    Ok(q / qp1 * (q / (R::of(2.0) * qp1 * qp1) * f).exp())
}

/// Mean linear entropy of random pure states: 1 − (M+N+1)/(MN+2).
pub fn mean_linear_entropy<R: Real>(n_dim: usize, m_dim: usize) -> R {
    let n = R::of(n_dim as f64);
    let m = R::of(m_dim as f64);
    R::one() - (m + n + R::one()) / (m * n + R::of(2.0))
}

/// Exact mean von Neumann entropy of complex random pure states with
/// N ≤ M: Σ_{k=M+1}^{MN} 1/k − (N−1)/(2M). Used as an independent oracle
/// for the complex-ensemble Monte Carlo.
pub fn mean_von_neumann_entropy_complex<R: Real>(n_dim: usize, m_dim: usize) -> R {
    let mut s = R::zero();
    for k in (m_dim + 1)..=(n_dim * m_dim) {
        s += R::one() / R::of(k as f64);
    }
    s - R::of((n_dim - 1) as f64) / (R::of(2.0) * R::of(m_dim as f64))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn sample_with_rng<R: Real>(
    n_dim: usize,
    m_dim: usize,
    kind: EnsembleKind,
    rng: &mut ChaCha8Rng,
) -> Result<BipartiteState<R>> {
    let d = n_dim * m_dim;
    let amps: Array1<Complex<R>> = match kind {
        EnsembleKind::Real => Array1::from_iter((0..d).map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            Complex::new(R::of(x), R::zero())
        })),
        EnsembleKind::Complex => Array1::from_iter((0..d).map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex::new(R::of(re), R::of(im))
        })),
    };
    BipartiteState::from_unnormalized(n_dim, m_dim, amps)
}

/// A random bipartite pure state: i.i.d. Gaussian amplitudes, normalized.
/// Deterministic in (seed, N, M, kind).
pub fn sample_random_state<R: Real>(
    n_dim: usize,
    m_dim: usize,
    kind: EnsembleKind,
    seed: u64,
) -> Result<BipartiteState<R>> {
    if n_dim == 0 || n_dim > m_dim {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= N <= M, got N = {}, M = {}",
            n_dim, m_dim
        )));
    }
    sample_with_rng(n_dim, m_dim, kind, &mut trial_rng(seed, 0))
}

/// Sample means, spreads, and standard errors of the two entropies over
/// independent random states.
#[derive(Debug, Clone, Copy)]
pub struct MeanEntropies<R: Real> {
    pub trials: usize,
    pub sv_mean: R,
    pub sv_std: R,
    pub sv_std_err: R,
    pub sr_mean: R,
    pub sr_std: R,
    pub sr_std_err: R,
}

/// Monte Carlo means of S_V and S_R over `trials` random states. Each
/// trial uses its own RNG stream derived from (seed, trial index), so the
/// result is identical regardless of thread schedule.
pub fn monte_carlo_mean_entropies<R: Real>(
    n_dim: usize,
    m_dim: usize,
    kind: EnsembleKind,
    trials: usize,
    seed: u64,
) -> Result<MeanEntropies<R>> {
    if trials < 2 {
        return Err(Error::InvalidParameter("need at least 2 trials".into()));
    }
    if n_dim == 0 || n_dim > m_dim {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= N <= M, got N = {}, M = {}",
            n_dim, m_dim
        )));
    }
    let samples: Vec<(R, R)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let psi = sample_with_rng::<R>(n_dim, m_dim, kind, &mut rng)?;
            let spec = schmidt_spectrum(&psi)?;
            Ok((von_neumann_entropy(&spec), linear_entropy(&spec)))
        })
        .collect::<Result<Vec<_>>>()?;

    let nt = R::of(trials as f64);
    let (mut sv_sum, mut sr_sum) = (R::zero(), R::zero());
    for &(sv, sr) in &samples {
        sv_sum += sv;
        sr_sum += sr;
    }
    let sv_mean = sv_sum / nt;
    let sr_mean = sr_sum / nt;
    let (mut sv_var, mut sr_var) = (R::zero(), R::zero());
    for &(sv, sr) in &samples {
        sv_var += (sv - sv_mean) * (sv - sv_mean);
        sr_var += (sr - sr_mean) * (sr - sr_mean);
    }
    let denom = nt - R::one();
    let sv_std = (sv_var / denom).sqrt();
    let sr_std = (sr_var / denom).sqrt();
    Ok(MeanEntropies {
        trials,
        sv_mean,
        sv_std,
        sv_std_err: sv_std / nt.sqrt(),
        sr_mean,
        sr_std,
        sr_std_err: sr_std / nt.sqrt(),
    })
}

/// All Schmidt eigenvalues of `trials` random states, pooled, in trial
/// order. Deterministic in (seed, trials, N, M, kind).
pub fn pooled_rdm_eigenvalues<R: Real>(
    n_dim: usize,
    m_dim: usize,
    kind: EnsembleKind,
    trials: usize,
    seed: u64,
) -> Result<Vec<R>> {
    if trials < 1 {
        return Err(Error::InvalidParameter("need at least 1 trial".into()));
    }
    if n_dim == 0 || n_dim > m_dim {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= N <= M, got N = {}, M = {}",
            n_dim, m_dim
        )));
    }
    let per_trial: Vec<Vec<R>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t as u64);
            let psi = sample_with_rng::<R>(n_dim, m_dim, kind, &mut rng)?;
            Ok(schmidt_spectrum(&psi)?.values().to_vec())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_trial.into_iter().flatten().collect())
}

/// Pooled Schmidt spectra of random states as a density-normalized
/// histogram over [0, 1.2·λ_max].
pub fn monte_carlo_rdm_histogram<R: Real>(
    n_dim: usize,
    m_dim: usize,
    kind: EnsembleKind,
    trials: usize,
    bins: usize,
    seed: u64,
) -> Result<Histogram<R>> {
    if bins < 2 {
        return Err(Error::InvalidParameter("need at least 2 bins".into()));
    }
    let q = R::of(m_dim as f64) / R::of(n_dim as f64);
    let mp = MPDensity::new(n_dim, q)?;
    let values = pooled_rdm_eigenvalues(n_dim, m_dim, kind, trials, seed)?;
    Histogram::from_values(&values, bins, R::zero(), mp.lambda_max() * R::of(1.2))
}

/// Haar-distributed random unitary via Gram–Schmidt on a Ginibre matrix
/// (with one reorthogonalization pass).
pub fn haar_random_unitary<R: Real, G: Rng>(dim: usize, rng: &mut G) -> Array2<Complex<R>> {
    let mut cols: Vec<Vec<Complex<R>>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Complex::new(R::of(re), R::of(im))
                })
                .collect()
        })
        .collect();
    for c in 0..dim {
        for _pass in 0..2 {
            for prev in 0..c {
                let mut overlap = Complex::new(R::zero(), R::zero());
                for i in 0..dim {
                    overlap += cols[prev][i].conj() * cols[c][i];
                }
                for i in 0..dim {
                    let corr = overlap * cols[prev][i];
                    cols[c][i] -= corr;
                }
            }
        }
        let norm = cols[c]
            .iter()
            .map(|x| x.norm_sqr())
            .fold(R::zero(), |a, b| a + b)
            .sqrt();
        let inv = R::one() / norm;
        for x in cols[c].iter_mut() {
            *x *= inv;
        }
    }
    Array2::from_shape_fn((dim, dim), |(i, j)| cols[j][i])
}
