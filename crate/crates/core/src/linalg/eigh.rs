//! Complex Hermitian eigendecomposition.
//!
//! Householder reduction to real symmetric tridiagonal form (with a
//! diagonal phase transform to absorb the complex subdiagonal), followed
//! by implicit-shift QL iteration with accumulated eigenvectors. The
//! classic EISPACK route, written generically over the real scalar.

use crate::error::{Error, Result};
use crate::scalar::Real;
use ndarray::{Array1, Array2, ArrayView2};
use num_complex::Complex;
use rayon::prelude::*;

/// Row count above which the O(n³) passes fan out across threads.
const PAR_THRESHOLD: usize = 192;

/// Eigendecomposition of a Hermitian matrix: `a = V diag(values) V†`,
/// eigenvalues ascending, eigenvectors in the columns of `vectors`.
pub struct Eigh<R: Real> {
    pub values: Array1<R>,
    pub vectors: Array2<Complex<R>>,
}

/// Decompose a Hermitian matrix. Only the Hermitian part of the input is
/// meaningful; small anti-Hermitian noise (roundoff) is tolerated because
/// the reduction reads each off-diagonal pair once.
pub fn eigh<R: Real>(a: &ArrayView2<Complex<R>>) -> Result<Eigh<R>> {
    let (n, nc) = a.dim();
    if n != nc {
        return Err(Error::DimensionMismatch(format!("{}x{} matrix is not square", n, nc)));
    }
    if n == 0 {
        return Ok(Eigh { values: Array1::zeros(0), vectors: Array2::zeros((0, 0)) });
    }

    let mut m: Vec<Complex<R>> = a.iter().cloned().collect();
    let mut q: Vec<Complex<R>> = vec![Complex::new(R::zero(), R::zero()); n * n];
    for i in 0..n {
        q[i * n + i] = Complex::new(R::one(), R::zero());
    }

    let mut sub: Vec<Complex<R>> = vec![Complex::new(R::zero(), R::zero()); n.saturating_sub(1)];
    tridiagonalize(&mut m, &mut q, &mut sub, n);

    let mut diag: Vec<R> = (0..n).map(|i| m[i * n + i].re).collect();

    // Phase transform: make the subdiagonal real nonnegative, folding the
    // phases into the accumulated columns.
    let mut off: Vec<R> = vec![R::zero(); n]; // off[i] couples diag[i], diag[i+1]; off[n-1] = 0
    let mut phase = Complex::new(R::one(), R::zero());
    for k in 0..n.saturating_sub(1) {
        let e = sub[k];
        let mag = e.norm();
        off[k] = mag;
        if mag > R::zero() {
            phase = phase * e / Complex::new(mag, R::zero());
            let col = k + 1;
            for r in 0..n {
                q[r * n + col] *= phase;
            }
        }
        // mag == 0 splits the matrix; the running phase just carries over.
    }

    ql_implicit(&mut diag, &mut off, &mut q, n)?;

    // Ascending sort with column permutation.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).expect("eigenvalue NaN"));
    let values = Array1::from_iter(order.iter().map(|&i| diag[i]));
    let mut vectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            vectors[[r, dst]] = q[r * n + src];
        }
    }
    Ok(Eigh { values, vectors })
}

/// Householder similarity reduction to (complex) tridiagonal form,
/// accumulating the transform into `q`. On return `m`'s diagonal holds
/// the real diagonal and `sub[k]` the complex coupling of rows k, k+1.
fn tridiagonalize<R: Real>(m: &mut [Complex<R>], q: &mut [Complex<R>], sub: &mut [Complex<R>], n: usize) {
    let zero = Complex::new(R::zero(), R::zero());
    let two = R::of(2.0);
    let mut w: Vec<Complex<R>> = vec![zero; n];
    let mut p: Vec<Complex<R>> = vec![zero; n];

    for k in 0..n.saturating_sub(2) {
        let len = n - k - 1;
        // x = column k below the diagonal
        let mut norm_sq = R::zero();
        for i in 0..len {
            norm_sq += m[(k + 1 + i) * n + k].norm_sqr();
        }
        let sigma = norm_sq.sqrt();
        let x0 = m[(k + 1) * n + k];
        if sigma == R::zero() {
            sub[k] = zero;
            continue;
        }
        // Reflect x onto α e₁ with α chosen against cancellation.
        let alpha = if x0.norm() > R::zero() {
            -(x0 / Complex::new(x0.norm(), R::zero())) * sigma
        } else {
            Complex::new(-sigma, R::zero())
        };
        sub[k] = alpha;

        w[0] = x0 - alpha;
        for i in 1..len {
            w[i] = m[(k + 1 + i) * n + k];
        }
        let mut wn = R::zero();
        for wi in w.iter().take(len) {
            wn += wi.norm_sqr();
        }
        let wn = wn.sqrt();
        if wn == R::zero() {
            continue;
        }
        let inv = R::one() / wn;
        for wi in w.iter_mut().take(len) {
            *wi *= inv;
        }

        // p = B w over the trailing block B = m[k+1.., k+1..]
        let base = k + 1;
        {
            let rows: Vec<usize> = (0..len).collect();
            let compute = |i: &usize| -> Complex<R> {
                let i = *i;
                let row = &m[(base + i) * n + base..(base + i) * n + base + len];
                let mut acc = zero;
                for (bv, wv) in row.iter().zip(&w[..len]) {
                    acc += *bv * *wv;
                }
                acc
            };
            let result: Vec<Complex<R>> = if len >= PAR_THRESHOLD {
                rows.par_iter().map(compute).collect()
            } else {
                rows.iter().map(compute).collect()
            };
            p[..len].copy_from_slice(&result);
        }
        // κ = w† p (real for Hermitian B)
        let mut kappa = R::zero();
        for i in 0..len {
            kappa += (w[i].conj() * p[i]).re;
        }
        // p ← p − κ w  (the "q" vector of the rank-2 update)
        for i in 0..len {
            p[i] -= w[i] * kappa;
        }
        // B ← B − 2 w p† − 2 p w†
        {
            let w_ref = &w[..len];
            let p_ref = &p[..len];
            let update_row = |(i, row): (usize, &mut [Complex<R>])| {
                let wi = w_ref[i] * two;
                let pi = p_ref[i] * two;
                for j in 0..len {
                    row[j] = row[j] - wi * p_ref[j].conj() - pi * w_ref[j].conj();
                }
            };
            // rows are disjoint slices of m
            let block_rows: Vec<(usize, &mut [Complex<R>])> = {
                let mut rows = Vec::with_capacity(len);
                let mut rest = &mut m[base * n..];
                for i in 0..len {
                    let (head, tail) = rest.split_at_mut(n);
                    rows.push((i, &mut head[base..base + len]));
                    rest = tail;
                }
                rows
            };
            if len >= PAR_THRESHOLD {
                block_rows.into_par_iter().for_each(update_row);
            } else {
                block_rows.into_iter().for_each(update_row);
            }
        }
        // Q ← Q · P: each row r gets rank-1 corrected on columns k+1..
        {
            let w_ref = &w[..len];
            let apply_row = |row: &mut [Complex<R>]| {
                let seg = &mut row[base..base + len];
                let mut dot = zero;
                for (qv, wv) in seg.iter().zip(w_ref) {
                    dot += *qv * *wv;
                }
                let dot2 = dot * two;
                for (qv, wv) in seg.iter_mut().zip(w_ref) {
                    *qv -= dot2 * wv.conj();
                }
            };
            if len >= PAR_THRESHOLD {
                q.par_chunks_mut(n).for_each(apply_row);
            } else {
                q.chunks_mut(n).for_each(apply_row);
            }
        }
    }
    if n >= 2 {
        sub[n - 2] = m[(n - 1) * n + (n - 2)];
    }
}

/// Implicit-shift QL on a real symmetric tridiagonal matrix, rotating the
/// complex eigenvector columns of `q` along. `off[n-1]` must be zero.
fn ql_implicit<R: Real>(diag: &mut [R], off: &mut [R], q: &mut [Complex<R>], n: usize) -> Result<()> {
    let zero = R::zero();
    let one = R::one();
    let two = R::of(2.0);
    let eps = R::epsilon();
    let mut rotations: Vec<(usize, R, R)> = Vec::new();

    for l in 0..n {
        let mut iter = 0usize;
        loop {
            // Find the first negligible coupling at or after l.
            let mut seg_end = l;
            while seg_end + 1 < n {
                let dd = diag[seg_end].abs() + diag[seg_end + 1].abs();
                if off[seg_end].abs() <= eps * dd {
                    break;
                }
                seg_end += 1;
            }
            if seg_end == l {
                break;
            }
            iter += 1;
            if iter > 50 {
                return Err(Error::EigNonConvergence(l));
            }

            // Wilkinson-style shift from the 2x2 at l.
            let mut g = (diag[l + 1] - diag[l]) / (two * off[l]);
            let mut r = g.hypot(one);
            let sign_r = if g >= zero { r.abs() } else { -r.abs() };
            g = diag[seg_end] - diag[l] + off[l] / (g + sign_r);
            let mut s = one;
            let mut c = one;
            let mut p = zero;

            rotations.clear();
            let mut underflow = false;
            for i in (l..seg_end).rev() {
                let f = s * off[i];
                let b = c * off[i];
                r = f.hypot(g);
                off[i + 1] = r;
                if r == zero {
                    diag[i + 1] -= p;
                    off[seg_end] = zero;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + two * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                rotations.push((i, c, s));
            }
            apply_rotations(q, n, &rotations);
            if underflow {
                continue;
            }
            diag[l] -= p;
            off[l] = g;
            off[seg_end] = zero;
        }
    }
    Ok(())
}

/// Apply a sweep of real plane rotations to the complex columns of `q`,
/// row-parallel when large. The rotations must be applied in recorded
/// order within each row.
fn apply_rotations<R: Real>(q: &mut [Complex<R>], n: usize, rotations: &[(usize, R, R)]) {
    if rotations.is_empty() {
        return;
    }
    let rotate_row = |row: &mut [Complex<R>]| {
        for &(i, c, s) in rotations {
            let f = row[i + 1];
            row[i + 1] = row[i] * s + f * c;
            row[i] = row[i] * c - f * s;
        }
    };
    if n * rotations.len() >= 32 * 1024 {
        q.par_chunks_mut(n).for_each(rotate_row);
    } else {
        q.chunks_mut(n).for_each(rotate_row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_residual, identity_residual, matmul, adjoint};
    use num_complex::Complex64;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_hermitian(n: usize, seed: u64) -> Array2<Complex64> {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = Array2::from_shape_fn((n, n), |_| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let mut h = Array2::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                h[[i, j]] = (g[[i, j]] + g[[j, i]].conj()) * 0.5;
            }
        }
        h
    }

    fn check_decomposition(h: &Array2<Complex64>, tol: f64) {
        let n = h.nrows();
        let Eigh { values, vectors } = eigh(&h.view()).unwrap();
        // residual ‖H V − V Λ‖_max
        let hv = matmul(&h.view(), &vectors.view());
        let mut resid: f64 = 0.0;
        for j in 0..n {
            for i in 0..n {
                resid = resid.max((hv[[i, j]] - vectors[[i, j]] * values[j]).norm());
            }
        }
        assert!(resid < tol, "residual {} (n = {})", resid, n);
        let vtv = matmul(&adjoint(&vectors.view()).view(), &vectors.view());
        assert!(identity_residual(&vtv.view()) < tol, "orthonormality (n = {})", n);
        for j in 1..n {
            assert!(values[j] >= values[j - 1], "values not ascending");
        }
    }

    #[test]
    fn random_matrices_various_sizes() {
        for (n, seed) in [(1, 1u64), (2, 2), (3, 3), (5, 4), (16, 5), (33, 6), (64, 7), (150, 8)] {
            let h = random_hermitian(n, seed);
            assert!(hermiticity_residual(&h.view()) < 1e-15);
            check_decomposition(&h, 1e-11 * (n as f64));
        }
    }

    #[test]
    fn diagonal_matrix_recovers_entries() {
        let mut h = Array2::<Complex64>::zeros((6, 6));
        let entries = [3.0, -1.0, 0.0, 7.5, -2.25, 0.5];
        for (i, e) in entries.iter().enumerate() {
            h[[i, i]] = Complex64::new(*e, 0.0);
        }
        let Eigh { values, .. } = eigh(&h.view()).unwrap();
        let mut sorted = entries.to_vec();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (v, e) in values.iter().zip(sorted.iter()) {
            assert!((v - e).abs() < 1e-14);
        }
    }

    #[test]
    fn degenerate_spectrum_identity() {
        let h = Array2::<Complex64>::eye(12);
        check_decomposition(&h, 1e-13);
    }

    #[test]
    fn rank_one_projector() {
        // |v⟩⟨v| for a normalized v: spectrum {1, 0, ..., 0}
        let n = 9;
        let mut rng = StdRng::seed_from_u64(11);
        let mut v: Vec<Complex64> =
            (0..n).map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)).collect();
        let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        let h = Array2::from_shape_fn((n, n), |(i, j)| v[i] * v[j].conj());
        let Eigh { values, .. } = eigh(&h.view()).unwrap();
        assert!((values[n - 1] - 1.0).abs() < 1e-13);
        for k in 0..n - 1 {
            assert!(values[k].abs() < 1e-13);
        }
    }

    #[test]
    fn f32_instantiation() {
        let h = ndarray::array![
            [Complex::<f32>::new(1.0, 0.0), Complex::new(0.0, 0.5)],
            [Complex::new(0.0, -0.5), Complex::new(-1.0, 0.0)]
        ];
        let Eigh { values, .. } = eigh(&h.view()).unwrap();
        let expect = (1.25f32).sqrt();
        assert!((values[0] + expect).abs() < 1e-5);
        assert!((values[1] - expect).abs() < 1e-5);
    }
}
