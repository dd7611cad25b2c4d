//! Spin-j angular momentum matrices and the unitary factors of the
//! kicked-top map.
//!
//! Basis convention throughout: |j, m⟩ with m descending, m = j, j−1, …, −j,
//! so row r holds m = j − r and jz is `diag(j, j−1, …, −j)`. ħ = 1.

use crate::error::{Error, Result};
use crate::linalg::{self, expi_hermitian};
use crate::scalar::Real;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex;
use std::fmt;

/// Half-integer spin quantum number, stored as 2j.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Spin {
    twice: u32,
}

impl Spin {
    /// Validate a floating-point j: positive and half-integral.
    pub fn new(j: f64) -> Result<Self> {
        let twice = (2.0 * j).round();
        if !j.is_finite() || j <= 0.0 || (2.0 * j - twice).abs() > 1e-9 || twice < 1.0 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self { twice: twice as u32 })
    }

    /// From 2j directly (2j ≥ 1).
    pub fn from_twice(twice: u32) -> Result<Self> {
        if twice == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice })
    }

    pub fn twice(self) -> u32 {
        self.twice
    }

    pub fn j<R: Real>(self) -> R {
        R::of(self.twice as f64 / 2.0)
    }

    /// Hilbert-space dimension 2j + 1.
    pub fn dim(self) -> usize {
        self.twice as usize + 1
    }

    /// True for half-odd-integer j (fermionic representation).
    pub fn is_half_odd(self) -> bool {
        self.twice % 2 == 1
    }

    /// m value of basis row r (descending order).
    pub fn m_value<R: Real>(self, row: usize) -> R {
        debug_assert!(row < self.dim());
        R::of((self.twice as f64 - 2.0 * row as f64) / 2.0)
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice.is_multiple_of(2) {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// A dim×dim unitary matrix.
#[derive(Debug, Clone)]
pub struct UnitaryMatrix<R: Real> {
    matrix: Array2<Complex<R>>,
}

impl<R: Real> UnitaryMatrix<R> {
    /// Wrap a square matrix. Unitarity itself is established by the
    /// constructors in this crate (eigenbasis exponentials, diagonal
    /// phases, products); `unitarity_residual` verifies it on demand.
    pub fn new(matrix: Array2<Complex<R>>) -> Result<Self> {
        let (n, m) = matrix.dim();
        if n != m {
            return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", n, m)));
        }
        Ok(Self { matrix })
    }

    /// Diagonal unitary from unit-modulus phases e^{iφ}.
    pub fn from_phases(phases: &[R]) -> Self {
        let n = phases.len();
        let mut m = Array2::zeros((n, n));
        for (i, phi) in phases.iter().enumerate() {
            m[[i, i]] = Complex::from_polar(R::one(), *phi);
        }
        Self { matrix: m }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: Array2::eye(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<Complex<R>> {
        &self.matrix
    }

    pub fn view(&self) -> ArrayView2<'_, Complex<R>> {
        self.matrix.view()
    }

    pub fn into_matrix(self) -> Array2<Complex<R>> {
        self.matrix
    }

    /// ‖U†U − I‖_max.
    pub fn unitarity_residual(&self) -> R {
        linalg::unitarity_residual(&self.matrix.view())
    }

    /// U · other.
    pub fn mul(&self, other: &Self) -> Self {
        Self { matrix: linalg::matmul(&self.matrix.view(), &other.view()) }
    }

    /// U†.
    pub fn dagger(&self) -> Self {
        Self { matrix: linalg::adjoint(&self.matrix.view()) }
    }

    /// U ⊗ other.
    pub fn kron(&self, other: &Self) -> Self {
        Self { matrix: linalg::kron(&self.matrix.view(), &other.view()) }
    }

    /// U · x.
    pub fn apply(&self, x: &ArrayView1<Complex<R>>) -> Array1<Complex<R>> {
        linalg::matvec(&self.matrix.view(), x)
    }
}

/// The spin-j operator triple (jx, jy, jz) in the |j, m⟩ basis.
pub struct SpinOperators<R: Real> {
    spin: Spin,
    jx: Array2<Complex<R>>,
    jy: Array2<Complex<R>>,
    jz: Array2<Complex<R>>,
}

impl<R: Real> SpinOperators<R> {
    pub fn spin(&self) -> Spin {
        self.spin
    }

    pub fn dim(&self) -> usize {
        self.spin.dim()
    }

    pub fn jx(&self) -> &Array2<Complex<R>> {
        &self.jx
    }

    pub fn jy(&self) -> &Array2<Complex<R>> {
        &self.jy
    }

    pub fn jz(&self) -> &Array2<Complex<R>> {
        &self.jz
    }
}

/// Build jx, jy, jz from the ladder-operator matrix elements
/// ⟨j,m±1|J±|j,m⟩ = √(j(j+1) − m(m±1)).
pub fn build_spin_operators<R: Real>(spin: Spin) -> SpinOperators<R> {
    let dim = spin.dim();
    let j: R = spin.j();
    let jj1 = j * (j + R::one());
    let half = R::of(0.5);

    let mut jx = Array2::zeros((dim, dim));
    let mut jy = Array2::zeros((dim, dim));
    let mut jz = Array2::zeros((dim, dim));
    for r in 0..dim {
        let m: R = spin.m_value(r);
        jz[[r, r]] = Complex::new(m, R::zero());
        if r > 0 {
            // J₊ raises m: row r−1 holds m+1
            let c = (jj1 - m * (m + R::one())).sqrt();
            // jx = (J₊ + J₋)/2, jy = (J₊ − J₋)/2i
            jx[[r - 1, r]] = Complex::new(c * half, R::zero());
            jx[[r, r - 1]] = Complex::new(c * half, R::zero());
            jy[[r - 1, r]] = Complex::new(R::zero(), -c * half);
            jy[[r, r - 1]] = Complex::new(R::zero(), c * half);
        }
    }
    SpinOperators { spin, jx, jy, jz }
}

/// Free-precession factor exp(−i(π/2)·jy), via Hermitian eigendecomposition
/// of jy so the result is unitary to solver accuracy.
pub fn free_precession_unitary<R: Real>(ops: &SpinOperators<R>) -> Result<UnitaryMatrix<R>> {
    let m = expi_hermitian(&ops.jy().view(), -R::FRAC_PI_2())?;
    UnitaryMatrix::new(m)
}

/// Torsion kick exp(−i·k·(m+α)²/(2j)): diagonal in the |j, m⟩ basis.
pub fn kick_unitary<R: Real>(ops: &SpinOperators<R>, kick: R, alpha: R) -> Result<UnitaryMatrix<R>> {
    if !kick.is_finite() || !alpha.is_finite() {
        return Err(Error::InvalidParameter("kick strength and alpha must be finite".into()));
    }
    let spin = ops.spin();
    let j: R = spin.j();
    let scale = -kick / (R::of(2.0) * j);
    let phases: Vec<R> = (0..spin.dim())
        .map(|r| {
            let m: R = spin.m_value(r);
            scale * (m + alpha) * (m + alpha)
        })
        .collect();
    Ok(UnitaryMatrix::from_phases(&phases))
}

/// Spin–spin coupling exp(−i·ε·m₁·m₂/√(j₁j₂)): diagonal in the product
/// basis |m₁⟩⊗|m₂⟩ with index (row of m₁)·M + (row of m₂), both descending.
pub fn coupling_unitary<R: Real>(
    ops1: &SpinOperators<R>,
    ops2: &SpinOperators<R>,
    epsilon: R,
) -> Result<UnitaryMatrix<R>> {
    if !epsilon.is_finite() {
        return Err(Error::InvalidParameter("coupling strength must be finite".into()));
    }
    let (s1, s2) = (ops1.spin(), ops2.spin());
    let j1: R = s1.j();
    let j2: R = s2.j();
    let scale = -epsilon / (j1 * j2).sqrt();
    let mut phases = Vec::with_capacity(s1.dim() * s2.dim());
    for r1 in 0..s1.dim() {
        let m1: R = s1.m_value(r1);
        for r2 in 0..s2.dim() {
            let m2: R = s2.m_value(r2);
            phases.push(scale * m1 * m2);
        }
    }
    Ok(UnitaryMatrix::from_phases(&phases))
}
