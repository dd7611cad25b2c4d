//! The coupled kicked tops: Floquet operator assembly, initial states,
//! and stroboscopic time evolution.

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::Real;
use crate::spin::{
    build_spin_operators, coupling_unitary, free_precession_unitary, kick_unitary, Spin,
    UnitaryMatrix,
};
use ndarray::{Array1, ArrayView1, ArrayView2};
use num_complex::Complex;

/// Physical parameters of the coupled-top map.
#[derive(Debug, Clone, Copy)]
pub struct TopConfig<R: Real> {
    j1: Spin,
    j2: Spin,
    pub kick: R,
    pub coupling: R,
    pub alpha1: R,
    pub alpha2: R,
}

impl<R: Real> TopConfig<R> {
    /// The convention dim H₁ = N ≤ dim H₂ = M is enforced here.
    pub fn new(j1: Spin, j2: Spin, kick: R, coupling: R, alpha1: R, alpha2: R) -> Result<Self> {
        if j1.dim() > j2.dim() {
            return Err(Error::InvalidParameter(format!(
                "j1 = {} exceeds j2 = {}; the first top must be the smaller subsystem",
                j1, j2
            )));
        }
        for (name, v) in [("k", kick), ("epsilon", coupling), ("alpha1", alpha1), ("alpha2", alpha2)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{} must be finite", name)));
            }
        }
        Ok(Self { j1, j2, kick, coupling, alpha1, alpha2 })
    }

    pub fn j1(&self) -> Spin {
        self.j1
    }

    pub fn j2(&self) -> Spin {
        self.j2
    }

    /// N = 2j₁ + 1.
    pub fn n_dim(&self) -> usize {
        self.j1.dim()
    }

    /// M = 2j₂ + 1.
    pub fn m_dim(&self) -> usize {
        self.j2.dim()
    }

    /// d = N·M.
    pub fn total_dim(&self) -> usize {
        self.n_dim() * self.m_dim()
    }
}

/// A pure state of the bipartite system, unit-normalized, stored in the
/// product-basis layout idx = (row of m₁)·M + (row of m₂).
#[derive(Debug, Clone)]
pub struct BipartiteState<R: Real> {
    n_dim: usize,
    m_dim: usize,
    amplitudes: Array1<Complex<R>>,
}

impl<R: Real> BipartiteState<R> {
    pub fn new(n_dim: usize, m_dim: usize, amplitudes: Array1<Complex<R>>) -> Result<Self> {
        if amplitudes.len() != n_dim * m_dim {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector of length {} does not factor as {}x{}",
                amplitudes.len(),
                n_dim,
                m_dim
            )));
        }
        let norm = vec_norm(&amplitudes);
        let drift = (norm - R::one()).abs();
        if drift > R::tol(1e-10) {
            return Err(Error::NotNormalized(drift.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { n_dim, m_dim, amplitudes })
    }

    /// Normalize an arbitrary nonzero vector into a state.
    pub fn from_unnormalized(n_dim: usize, m_dim: usize, mut amplitudes: Array1<Complex<R>>) -> Result<Self> {
        let norm = vec_norm(&amplitudes);
        if !(norm > R::zero()) || !norm.is_finite() {
            return Err(Error::InvalidParameter("cannot normalize a zero or non-finite vector".into()));
        }
        let inv = R::one() / norm;
        amplitudes.map_inplace(|c| *c *= inv);
        Self::new(n_dim, m_dim, amplitudes)
    }

    pub fn n_dim(&self) -> usize {
        self.n_dim
    }

    pub fn m_dim(&self) -> usize {
        self.m_dim
    }

    pub fn amplitudes(&self) -> &Array1<Complex<R>> {
        &self.amplitudes
    }

    /// The amplitude matrix A with a_{nm} laid out N×M; a no-copy view.
    pub fn as_matrix(&self) -> ArrayView2<'_, Complex<R>> {
        self.amplitudes
            .view()
            .into_shape((self.n_dim, self.m_dim))
            .expect("length checked at construction")
    }

    pub fn norm(&self) -> R {
        vec_norm(&self.amplitudes)
    }
}

fn vec_norm<R: Real>(v: &Array1<Complex<R>>) -> R {
    v.iter().map(|c| c.norm_sqr()).fold(R::zero(), |a, b| a + b).sqrt()
}

/// The one-period Floquet operator U_T = (U₁ ⊗ U₂)·U₁₂, with
/// Uᵢ = Uᵢ^f·Uᵢ^k. Acting on a state, the coupling applies first, then the
/// kicks, then the precessions.
pub fn build_floquet<R: Real>(cfg: &TopConfig<R>) -> Result<UnitaryMatrix<R>> {
    let ops1 = build_spin_operators::<R>(cfg.j1());
    let ops2 = build_spin_operators::<R>(cfg.j2());
    let u1 = free_precession_unitary(&ops1)?.mul(&kick_unitary(&ops1, cfg.kick, cfg.alpha1)?);
    let u2 = free_precession_unitary(&ops2)?.mul(&kick_unitary(&ops2, cfg.kick, cfg.alpha2)?);
    let coupling = coupling_unitary(&ops1, &ops2, cfg.coupling)?;

    // (U₁ ⊗ U₂) · diag(coupling): a column scaling, no full product needed.
    let mut m = linalg::kron(&u1.view(), &u2.view());
    for (c, mut col) in m.columns_mut().into_iter().enumerate() {
        let phase = coupling.matrix()[[c, c]];
        col.map_inplace(|x| *x *= phase);
    }
    UnitaryMatrix::new(m)
}

/// Directed angular momentum (spin coherent) state
/// exp(iθ(jx sinφ − jy cosφ)) |j, j⟩.
pub fn coherent_state<R: Real>(spin: Spin, theta: R, phi: R) -> Result<Array1<Complex<R>>> {
    if !(theta >= R::zero() && theta <= R::PI()) {
        return Err(Error::InvalidParameter(format!("theta = {} outside [0, pi]", theta)));
    }
    if !(phi >= R::zero() && phi < R::TAU()) {
        return Err(Error::InvalidParameter(format!("phi = {} outside [0, 2pi)", phi)));
    }
    let ops = build_spin_operators::<R>(spin);
    let (sin_phi, cos_phi) = (phi.sin(), phi.cos());
    let mut gen = ops.jx().mapv(|c| c * sin_phi);
    gen.zip_mut_with(ops.jy(), |g, y| *g -= *y * cos_phi);
    let rot = linalg::expi_hermitian(&gen.view(), theta)?;
    // |j, j⟩ is the first basis vector; the state is the first column.
    let mut state = rot.column(0).to_owned();
    let norm = vec_norm(&state);
    let inv = R::one() / norm;
    state.map_inplace(|c| *c *= inv);
    Ok(state)
}

/// Product state a_{nm} = v1[n]·v2[m]; completely unentangled.
pub fn product_state<R: Real>(
    v1: &ArrayView1<Complex<R>>,
    v2: &ArrayView1<Complex<R>>,
) -> Result<BipartiteState<R>> {
    let (n, m) = (v1.len(), v2.len());
    let mut amps = Array1::zeros(n * m);
    for (i, a) in v1.iter().enumerate() {
        for (k, b) in v2.iter().enumerate() {
            amps[i * m + k] = *a * *b;
        }
    }
    BipartiteState::new(n, m, amps)
}

/// The maximally entangled state of Eq.-type δ_{m₁m₂}/√N: the first N basis
/// states of each subsystem paired up. Entanglement entropy ln N.
pub fn maximally_entangled_state<R: Real>(n_dim: usize, m_dim: usize) -> Result<BipartiteState<R>> {
    if n_dim == 0 || n_dim > m_dim {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= N <= M, got N = {}, M = {}",
            n_dim, m_dim
        )));
    }
    let mut amps = Array1::zeros(n_dim * m_dim);
    let amp = Complex::new(R::one() / R::of(n_dim as f64).sqrt(), R::zero());
    for r in 0..n_dim {
        amps[r * m_dim + r] = amp;
    }
    BipartiteState::new(n_dim, m_dim, amps)
}

/// Result of a stroboscopic run: ψ_t for t = 0..=steps, plus how many
/// times the norm drifted past 1e-12 and was rescaled.
pub struct Evolution<R: Real> {
    pub states: Vec<BipartiteState<R>>,
    pub renormalizations: usize,
}

/// Evolve by repeated matrix–vector products (U^t is never formed).
pub fn evolve<R: Real>(
    u: &UnitaryMatrix<R>,
    psi0: &BipartiteState<R>,
    steps: usize,
) -> Result<Evolution<R>> {
    if u.dim() != psi0.amplitudes().len() {
        return Err(Error::DimensionMismatch(format!(
            "operator dimension {} vs state dimension {}",
            u.dim(),
            psi0.amplitudes().len()
        )));
    }
    let (n, m) = (psi0.n_dim(), psi0.m_dim());
    let mut states = Vec::with_capacity(steps + 1);
    let mut renormalizations = 0usize;
    let mut current = psi0.amplitudes().clone();
    states.push(psi0.clone());
    let drift_tol = R::tol(1e-12);
    for _ in 0..steps {
        let mut next = u.apply(&current.view());
        let norm = vec_norm(&next);
        if (norm - R::one()).abs() > drift_tol {
            let inv = R::one() / norm;
            next.map_inplace(|c| *c *= inv);
            renormalizations += 1;
        }
        states.push(BipartiteState::new(n, m, next.clone())?);
        current = next;
    }
    Ok(Evolution { states, renormalizations })
}
