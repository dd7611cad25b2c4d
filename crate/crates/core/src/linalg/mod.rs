//! Dense complex linear algebra: products, Kronecker products, and the
//! Hermitian eigensolver everything else is built on.
//!
//! Matrices are `ndarray::Array2<Complex<R>>` in standard (row-major)
//! layout. The kernels are hand-written loops over slices; at the
//! dimensions this crate works with (d ≲ 2·10³) that is fast enough and
//! keeps the whole stack generic over the scalar type.

mod eigh;

pub use eigh::{eigh, Eigh};

use crate::error::{Error, Result};
use crate::scalar::Real;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2};
use num_complex::Complex;

/// Conjugate transpose.
pub fn adjoint<R: Real>(a: &ArrayView2<Complex<R>>) -> Array2<Complex<R>> {
    let (n, m) = a.dim();
    Array2::from_shape_fn((m, n), |(i, j)| a[[j, i]].conj())
}

/// Dense product `a · b`.
pub fn matmul<R: Real>(a: &ArrayView2<Complex<R>>, b: &ArrayView2<Complex<R>>) -> Array2<Complex<R>> {
    let (m, ka) = a.dim();
    let (kb, n) = b.dim();
    assert_eq!(ka, kb, "matmul: inner dimensions differ");
    let mut out = Array2::zeros((m, n));
    for i in 0..m {
        let mut row = out.row_mut(i);
        for k in 0..ka {
            let aik = a[[i, k]];
            row.zip_mut_with(&b.row(k), |o, &bv| *o += aik * bv);
        }
    }
    out
}

/// Matrix–vector product `a · x`.
pub fn matvec<R: Real>(a: &ArrayView2<Complex<R>>, x: &ArrayView1<Complex<R>>) -> Array1<Complex<R>> {
    let (m, k) = a.dim();
    assert_eq!(k, x.len(), "matvec: dimensions differ");
    let mut out = Array1::zeros(m);
    for i in 0..m {
        let mut acc = Complex::new(R::zero(), R::zero());
        for (av, xv) in a.row(i).iter().zip(x.iter()) {
            acc += *av * *xv;
        }
        out[i] = acc;
    }
    out
}

/// Kronecker product `a ⊗ b`.
pub fn kron<R: Real>(a: &ArrayView2<Complex<R>>, b: &ArrayView2<Complex<R>>) -> Array2<Complex<R>> {
    let (ra, ca) = a.dim();
    let (rb, cb) = b.dim();
    let mut out = Array2::zeros((ra * rb, ca * cb));
    for i in 0..ra {
        for j in 0..ca {
            let aij = a[[i, j]];
            for k in 0..rb {
                for l in 0..cb {
                    out[[i * rb + k, j * cb + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Largest elementwise modulus of `a − b`.
pub fn max_abs_diff<R: Real>(a: &ArrayView2<Complex<R>>, b: &ArrayView2<Complex<R>>) -> R {
    assert_eq!(a.dim(), b.dim());
    let mut m = R::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        m = m.max((*x - *y).norm());
    }
    m
}

/// Largest elementwise modulus of `m − I`.
pub fn identity_residual<R: Real>(m: &ArrayView2<Complex<R>>) -> R {
    let (n, nc) = m.dim();
    assert_eq!(n, nc);
    let mut r = R::zero();
    for i in 0..n {
        for j in 0..n {
            let expect = if i == j { R::one() } else { R::zero() };
            r = r.max((m[[i, j]] - Complex::new(expect, R::zero())).norm());
        }
    }
    r
}

/// ‖U†U − I‖_max.
pub fn unitarity_residual<R: Real>(u: &ArrayView2<Complex<R>>) -> R {
    let prod = matmul(&adjoint(u).view(), u);
    identity_residual(&prod.view())
}

/// ‖A − A†‖_max.
pub fn hermiticity_residual<R: Real>(a: &ArrayView2<Complex<R>>) -> R {
    let (n, nc) = a.dim();
    assert_eq!(n, nc);
    let mut r = R::zero();
    for i in 0..n {
        for j in i..n {
            r = r.max((a[[i, j]] - a[[j, i]].conj()).norm());
        }
    }
    r
}

/// `exp(i·scale·H)` for Hermitian `H`, via eigendecomposition.
///
/// The result is unitary to eigensolver accuracy by construction.
pub fn expi_hermitian<R: Real>(h: &ArrayView2<Complex<R>>, scale: R) -> Result<Array2<Complex<R>>> {
    let Eigh { values, vectors } = eigh(h)?;
    let _n = values.len();
    // V · diag(e^{i s λ}) · V†
    let mut scaled = vectors.clone();
    for (k, lam) in values.iter().enumerate() {
        let phase = Complex::from_polar(R::one(), scale * *lam);
        scaled.column_mut(k).map_inplace(|c| *c *= phase);
    }
    Ok(matmul(&scaled.view(), &adjoint(&vectors.view()).view()))
}

/// Eigendecomposition of a unitary matrix using only the Hermitian solver.
///
/// `U` is normal, so its Hermitian and anti-Hermitian parts commute and
/// share its eigenvectors. We diagonalize `(U+U†)/2`, then split each
/// cluster of near-equal cosines with the projection of `(U−U†)/2i`
/// (which separates the `±θ` partners), and read eigenangles off
/// Rayleigh quotients. Returns angles in `[0, 2π)` ascending with the
/// eigenvector columns aligned.
pub fn eig_unitary<R: Real>(u: &ArrayView2<Complex<R>>) -> Result<(Vec<R>, Array2<Complex<R>>)> {
    let (n, nc) = u.dim();
    if n != nc {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", n, nc)));
    }
    let half = R::of(0.5);
    let re = Array2::from_shape_fn((n, n), |(i, j)| (u[[i, j]] + u[[j, i]].conj()) * half);
    let Eigh { values: cosines, vectors: mut v } = eigh(&re.view())?;

    let cluster_tol = R::tol(1e-8);
    let mut start = 0;
    while start < n {
        let mut end = start + 1;
        while end < n && cosines[end] - cosines[end - 1] <= cluster_tol {
            end += 1;
        }
        if end - start > 1 {
            split_cluster(u, &mut v, start, end)?;
        }
        start = end;
    }

    // Eigenangles from Rayleigh quotients of U itself.
    let mut angles: Vec<R> = Vec::with_capacity(n);
    for k in 0..n {
        let col = v.column(k);
        let uv = matvec(u, &col);
        let mut mu = Complex::new(R::zero(), R::zero());
        for (a, b) in col.iter().zip(uv.iter()) {
            mu += a.conj() * *b;
        }
        let mut theta = mu.arg();
        if theta < R::zero() {
            theta += R::TAU();
        }
        if theta >= R::TAU() {
            theta = R::zero();
        }
        angles.push(theta);
    }

    // Sort ascending by angle, carrying columns along.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| angles[a].partial_cmp(&angles[b]).expect("eigenangle NaN"));
    let sorted_angles: Vec<R> = order.iter().map(|&i| angles[i]).collect();
    let mut sorted_v = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        sorted_v.column_mut(dst).assign(&v.column(src));
    }
    Ok((sorted_angles, sorted_v))
}

/// Rotate the columns `start..end` of `v` so they also diagonalize the
/// anti-Hermitian part of `u` projected onto that subspace.
fn split_cluster<R: Real>(
    u: &ArrayView2<Complex<R>>,
    v: &mut Array2<Complex<R>>,
    start: usize,
    end: usize,
) -> Result<()> {
    let n = v.nrows();
    let k = end - start;
    let w = v.slice(ndarray::s![.., start..end]).to_owned();
    // im_w = ((U − U†)/2i) · W, computed column by column.
    let mut im_w = Array2::zeros((n, k));
    let halfi = Complex::new(R::zero(), R::of(-0.5)); // 1/(2i)
    let mut udag_w: Vec<Complex<R>> = vec![Complex::new(R::zero(), R::zero()); n];
    for c in 0..k {
        let col = w.column(c);
        let uv = matvec(u, &col);
        // (U† w)_i = Σ_j conj(U[j,i]) w_j, accumulated row by row of U
        udag_w.iter_mut().for_each(|x| *x = Complex::new(R::zero(), R::zero()));
        for j in 0..n {
            let wj = col[j];
            for (acc, uv) in udag_w.iter_mut().zip(u.row(j).iter()) {
                *acc += uv.conj() * wj;
            }
        }
        for i in 0..n {
            im_w[[i, c]] = (uv[i] - udag_w[i]) * halfi;
        }
    }
    // s = W† · im_w, symmetrized.
    let mut s = matmul(&adjoint(&w.view()).view(), &im_w.view());
    for i in 0..k {
        for j in i..k {
            let avg = (s[[i, j]] + s[[j, i]].conj()) * Complex::new(R::of(0.5), R::zero());
            s[[i, j]] = avg;
            s[[j, i]] = avg.conj();
        }
    }
    let Eigh { values: _, vectors: g } = eigh(&s.view())?;
    let rotated = matmul(&w.view(), &g.view());
    v.slice_mut(ndarray::s![.., start..end]).assign(&rotated);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matmul_small() {
        let a = array![[c(1.0, 0.0), c(0.0, 1.0)], [c(2.0, 0.0), c(0.0, 0.0)]];
        let b = array![[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]];
        let ab = matmul(&a.view(), &b.view());
        assert_eq!(ab[[0, 0]], c(0.0, 1.0));
        assert_eq!(ab[[0, 1]], c(1.0, 0.0));
        assert_eq!(ab[[1, 0]], c(0.0, 0.0));
        assert_eq!(ab[[1, 1]], c(2.0, 0.0));
    }

    #[test]
    fn kron_dims_and_entries() {
        let a = array![[c(1.0, 0.0), c(2.0, 0.0)]];
        let b = array![[c(0.0, 1.0)], [c(3.0, 0.0)]];
        let k = kron(&a.view(), &b.view());
        assert_eq!(k.dim(), (2, 2));
        assert_eq!(k[[0, 0]], c(0.0, 1.0));
        assert_eq!(k[[1, 1]], c(6.0, 0.0));
    }

    #[test]
    fn expi_of_zero_is_identity() {
        let h = Array2::<Complex64>::zeros((4, 4));
        let e = expi_hermitian(&h.view(), 1.7).unwrap();
        assert!(identity_residual(&e.view()) < 1e-14);
    }

    #[test]
    fn eig_unitary_diagonal_phases() {
        let phases = [0.3, 5.9, 2.2, 4.4];
        let mut u = Array2::<Complex64>::zeros((4, 4));
        for (i, p) in phases.iter().enumerate() {
            u[[i, i]] = Complex64::from_polar(1.0, *p);
        }
        let (angles, v) = eig_unitary(&u.view()).unwrap();
        let mut expect = phases.to_vec();
        expect.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (a, e) in angles.iter().zip(expect.iter()) {
            assert!((a - e).abs() < 1e-12, "angle {} vs {}", a, e);
        }
        // columns must be (permuted) basis vectors
        for k in 0..4 {
            let col = v.column(k);
            let mass: f64 = col.iter().map(|x| x.norm_sqr()).sum();
            let peak = col.iter().map(|x| x.norm_sqr()).fold(0.0, f64::max);
            assert!((mass - 1.0).abs() < 1e-12);
            assert!(peak > 1.0 - 1e-12);
        }
    }

    #[test]
    fn eig_unitary_identity() {
        let u = Array2::<Complex64>::eye(5);
        let (angles, _) = eig_unitary(&u.view()).unwrap();
        for a in angles {
            assert!(a.abs() < 1e-14);
        }
    }
}
