//! Eigen/SVD kernels: cyclic Jacobi for Hermitian matrices and one-sided
//! Jacobi for the SVD. Both avoid forming A†A explicitly where it would cost
//! accuracy, converge quadratically at these sizes, and need no external
//! backend.

use super::ComplexMatrix;
use crate::error::{Error, Result};
use num_complex::Complex64;

const MAX_SWEEPS: usize = 64;
const CONV_EPS: f64 = 1e-14;

/// Relative clamp for eigenvalue roundoff on Hermitian inputs.
pub(crate) const EIG_CLAMP_REL: f64 = 1e-12;

/// Result of a polar decomposition A = U·P.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub positive: ComplexMatrix,
}

/// Singular value decomposition A = U·Σ·V†, singular values descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

/// 2x2 unitary G (as entries g00,g01,g10,g11) diagonalizing the Hermitian
/// block [[a, b], [conj(b), c]] via G† M G.
fn jacobi_rotation(a: f64, c: f64, b: Complex64) -> (Complex64, Complex64, Complex64, Complex64) {
    let babs = b.norm();
    let phase = b / babs;
    // Real symmetric Schur: zero the off-diagonal of [[a, |b|], [|b|, c]].
    let tau = (c - a) / (2.0 * babs);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let cos = 1.0 / (1.0 + t * t).sqrt();
    let sin = t * cos;
    // G = diag(phase, 1) · [[cos, sin], [-sin, cos]]
    (
        phase * cos,
        phase * sin,
        Complex64::new(-sin, 0.0),
        Complex64::new(cos, 0.0),
    )
}

/// Phase-fix a column in place: make its largest-magnitude entry real and
/// positive, ties broken by lowest row index. Returns the applied phase factor.
fn fix_column_phase(col: &mut [Complex64]) -> Complex64 {
    let mut best = 0.0;
    let mut idx = 0;
    for (k, z) in col.iter().enumerate() {
        let a = z.norm();
        if a > best + 1e-300 && a > best {
            best = a;
            idx = k;
        }
    }
    if best == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let phase = col[idx] / best;
    let fix = phase.conj();
    for z in col.iter_mut() {
        *z *= fix;
    }
    fix
}

fn get_col(m: &ComplexMatrix, j: usize) -> Vec<Complex64> {
    (0..m.rows()).map(|i| m[(i, j)]).collect()
}

fn set_col(m: &mut ComplexMatrix, j: usize, col: &[Complex64]) {
    for (i, z) in col.iter().enumerate() {
        m[(i, j)] = *z;
    }
}

/// Hermitian eigendecomposition A = V·diag(λ)·V†.
///
/// Eigenvalues are returned in descending order; eigenvector columns are
/// phase-fixed. The input is symmetrized before iterating so callers may pass
/// matrices carrying Hermitian roundoff.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = a.require_square()?;
    // Symmetrize: work on (A + A†)/2.
    let mut m = ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5);
    let mut v = ComplexMatrix::identity(n);
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok((vec![0.0; n], v));
    }
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += m[(p, q)].norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= CONV_EPS * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let b = m[(p, q)];
                if b.norm() <= 1e-300 {
                    continue;
                }
                let (g00, g01, g10, g11) = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, b);
                // Columns: M ← M·G, V ← V·G.
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = mp * g00 + mq * g10;
                    m[(k, q)] = mp * g01 + mq * g11;
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * g00 + vq * g10;
                    v[(k, q)] = vp * g01 + vq * g11;
                }
                // Rows: M ← G†·M.
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = g00.conj() * mp + g10.conj() * mq;
                    m[(q, k)] = g01.conj() * mp + g11.conj() * mq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenFailure(MAX_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let eigs: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| eigs[j].partial_cmp(&eigs[i]).unwrap().then(i.cmp(&j)));
    let mut vals = Vec::with_capacity(n);
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (slot, &i) in order.iter().enumerate() {
        vals.push(eigs[i]);
        let mut col = get_col(&v, i);
        fix_column_phase(&mut col);
        set_col(&mut vecs, slot, &col);
    }
    Ok((vals, vecs))
}

/// One-sided Jacobi SVD of a square matrix.
pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    let n = a.require_square()?;
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    let scale = w.frobenius_norm();
    if scale > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let mut gpp = 0.0;
                    let mut gqq = 0.0;
                    let mut gpq = Complex64::new(0.0, 0.0);
                    for k in 0..n {
                        let wp = w[(k, p)];
                        let wq = w[(k, q)];
                        gpp += wp.norm_sqr();
                        gqq += wq.norm_sqr();
                        gpq += wp.conj() * wq;
                    }
                    if gpp == 0.0 || gqq == 0.0 {
                        continue;
                    }
                    if gpq.norm() <= CONV_EPS * (gpp * gqq).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let (g00, g01, g10, g11) = jacobi_rotation(gpp, gqq, gpq);
                    for k in 0..n {
                        let wp = w[(k, p)];
                        let wq = w[(k, q)];
                        w[(k, p)] = wp * g00 + wq * g10;
                        w[(k, q)] = wp * g01 + wq * g11;
                        let vp = v[(k, p)];
                        let vq = v[(k, q)];
                        v[(k, p)] = vp * g00 + vq * g10;
                        v[(k, q)] = vp * g01 + vq * g11;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::EigenFailure(MAX_SWEEPS));
        }
    }
    // Singular values and ordering.
    let norms: Vec<f64> = (0..n)
        .map(|j| get_col(&w, j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).unwrap().then(i.cmp(&j)));
    let sigma_max = norms.iter().cloned().fold(0.0, f64::max);
    let cutoff = sigma_max * (n as f64) * 1e-15;

    let mut sigma = Vec::with_capacity(n);
    let mut u = ComplexMatrix::zeros(n, n);
    let mut vv = ComplexMatrix::zeros(n, n);
    let mut filled: Vec<usize> = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        sigma.push(norms[j]);
        let mut vcol = get_col(&v, j);
        if norms[j] > cutoff && norms[j] > 0.0 {
            let mut ucol: Vec<Complex64> =
                get_col(&w, j).iter().map(|z| z / norms[j]).collect();
            let fix = fix_column_phase(&mut ucol);
            for z in vcol.iter_mut() {
                *z *= fix;
            }
            set_col(&mut u, slot, &ucol);
            filled.push(slot);
        } else {
            // Deferred: completed below against the span of the kept columns.
            fix_column_phase(&mut vcol);
        }
        set_col(&mut vv, slot, &vcol);
    }
    // Complete null-space columns of U deterministically from basis vectors:
    // greatest residual after orthogonalization wins, ties by lowest index.
    for slot in 0..n {
        if filled.contains(&slot) {
            continue;
        }
        let mut best_res: Option<Vec<Complex64>> = None;
        let mut best_norm = -1.0;
        for e in 0..n {
            let mut cand = vec![Complex64::new(0.0, 0.0); n];
            cand[e] = Complex64::new(1.0, 0.0);
            for &f in &filled {
                let col = get_col(&u, f);
                let overlap: Complex64 = col.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                for (ci, cv) in col.iter().enumerate() {
                    cand[ci] -= overlap * cv;
                }
            }
            let nrm = cand.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if nrm > best_norm + 1e-12 {
                best_norm = nrm;
                best_res = Some(cand);
            }
        }
        let mut col = best_res.expect("basis completion always finds a candidate");
        for z in col.iter_mut() {
            *z /= best_norm;
        }
        fix_column_phase(&mut col);
        set_col(&mut u, slot, &col);
        filled.push(slot);
    }
    Ok(Svd { u, sigma, v: vv })
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.sigma.first().copied().unwrap_or(0.0))
}

/// Matrix absolute value |A| = (A†A)^{1/2}, Hermitian positive semidefinite.
pub fn abs_value(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = svd(a)?;
    Ok(psd_from_factors(&d.v, &d.sigma))
}

/// Polar decomposition A = U·P with P = |A|; the unitary is completed
/// deterministically when A is singular.
pub fn polar_decompose(a: &ComplexMatrix) -> Result<PolarFactors> {
    let d = svd(a)?;
    let unitary = d.u.mul(&d.v.adjoint());
    let positive = psd_from_factors(&d.v, &d.sigma);
    Ok(PolarFactors { unitary, positive })
}

/// Sum of singular values tr|A|.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.sigma.iter().sum())
}

fn psd_from_factors(v: &ComplexMatrix, sigma: &[f64]) -> ComplexMatrix {
    let n = v.rows();
    let mut p = ComplexMatrix::zeros(n, n);
    for (k, &s) in sigma.iter().enumerate() {
        if s == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)];
            for j in 0..n {
                p[(i, j)] += vik * v[(j, k)].conj() * s;
            }
        }
    }
    // Symmetrize roundoff.
    ComplexMatrix::from_fn(n, n, |i, j| (p[(i, j)] + p[(j, i)].conj()) * 0.5)
}

/// Hermitian positive square root. Eigenvalues in [-tol·‖A‖, 0] are clamped
/// to zero; anything further below is an error.
pub fn hermitian_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.require_square()?;
    let defect = a.hermitian_defect();
    let scale = a.frobenius_norm().max(1e-300);
    if defect > 1e-9 * scale {
        return Err(Error::NotHermitian { defect });
    }
    let (vals, vecs) = hermitian_eig(a)?;
    let norm = vals.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let clamp = EIG_CLAMP_REL * norm.max(1e-300);
    let mut roots = Vec::with_capacity(n);
    for &l in &vals {
        if l < -clamp {
            return Err(Error::NegativeEigenvalue {
                value: l,
                tol: clamp,
            });
        }
        roots.push(l.max(0.0).sqrt());
    }
    Ok(psd_from_factors(&vecs, &roots))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(m: &ComplexMatrix, e: &ComplexMatrix, tol: f64) {
        let d = m.frobenius_distance(e);
        assert!(d < tol, "distance {d:.3e} exceeds {tol:.1e}\n{m:?}\nvs\n{e:?}");
    }

    #[test]
    fn abs_value_sign_removal() {
        let a = ComplexMatrix::diag_real(&[-2.0, 3.0]);
        assert_close(&abs_value(&a).unwrap(), &ComplexMatrix::diag_real(&[2.0, 3.0]), 1e-14);
    }

    #[test]
    fn abs_value_nilpotent() {
        // A†A = diag(0, 1); square root computed directly.
        let a = ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(0.0, 0.0), (0.0, 0.0)]])
            .unwrap();
        assert_close(&abs_value(&a).unwrap(), &ComplexMatrix::diag_real(&[0.0, 1.0]), 1e-14);
    }

    #[test]
    fn abs_value_diagonal_branch_operator() {
        let d1 = ComplexMatrix::diag_real(&[
            (1.0f64 / 6.0).sqrt(),
            (1.0f64 / 3.0).sqrt(),
            (1.0f64 / 2.0).sqrt(),
        ]);
        let u = ComplexMatrix::from_rows(&[
            vec![(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
            vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
        ])
        .unwrap();
        let t1 = u.mul(&d1);
        assert_close(&abs_value(&t1).unwrap(), &d1, 1e-14);
    }

    #[test]
    fn polar_identity_and_signs() {
        let id = ComplexMatrix::identity(3);
        let pf = polar_decompose(&id).unwrap();
        assert_close(&pf.unitary, &id, 1e-14);
        assert_close(&pf.positive, &id, 1e-14);

        let a = ComplexMatrix::diag_real(&[1.0, -1.0]);
        let pf = polar_decompose(&a).unwrap();
        assert_close(&pf.unitary, &a, 1e-14);
        assert_close(&pf.positive, &ComplexMatrix::identity(2), 1e-14);
    }

    #[test]
    fn polar_singular_uses_deterministic_completion() {
        let a = ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(0.0, 0.0), (0.0, 0.0)]])
            .unwrap();
        let pf = polar_decompose(&a).unwrap();
        let swap =
            ComplexMatrix::from_rows(&[vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]])
                .unwrap();
        assert_close(&pf.unitary, &swap, 1e-14);
        assert_close(&pf.positive, &ComplexMatrix::diag_real(&[0.0, 1.0]), 1e-14);
        assert_close(&pf.unitary.mul(&pf.positive), &a, 1e-14);
    }

    #[test]
    fn trace_norm_values() {
        assert!((trace_norm(&ComplexMatrix::identity(3)).unwrap() - 3.0).abs() < 1e-14);
        // |t2|·u·|t1| branch of the two-step example channel; the Gram matrix
        // is diag(1/9, 5/18, 1/4) so tr|A| = 1/3 + sqrt(5/18) + 1/2.
        let d1 = ComplexMatrix::diag_real(&[
            (1.0f64 / 6.0).sqrt(),
            (1.0f64 / 3.0).sqrt(),
            (1.0f64 / 2.0).sqrt(),
        ]);
        let d2 = ComplexMatrix::diag_real(&[
            (5.0f64 / 6.0).sqrt(),
            (2.0f64 / 3.0).sqrt(),
            (1.0f64 / 2.0).sqrt(),
        ]);
        let u = ComplexMatrix::from_rows(&[
            vec![(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
            vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
            vec![(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
        ])
        .unwrap();
        let a = d2.mul(&u).mul(&d1);
        let expect = 1.0 / 3.0 + (5.0f64 / 18.0).sqrt() + 0.5;
        assert!((trace_norm(&a).unwrap() - expect).abs() < 1e-12);
        assert!((expect - 1.360379).abs() < 1e-6);
    }

    #[test]
    fn hermitian_sqrt_values() {
        let a = ComplexMatrix::diag_real(&[4.0, 9.0]);
        assert_close(
            &hermitian_sqrt(&a).unwrap(),
            &ComplexMatrix::diag_real(&[2.0, 3.0]),
            1e-14,
        );
        let id = ComplexMatrix::identity(4);
        assert_close(&hermitian_sqrt(&id).unwrap(), &id, 1e-14);
        let g = ComplexMatrix::diag_real(&[1.0 / 9.0, 5.0 / 18.0, 0.25]);
        let r = hermitian_sqrt(&g).unwrap();
        let expect = ComplexMatrix::diag_real(&[1.0 / 3.0, (5.0f64 / 18.0).sqrt(), 0.5]);
        assert_close(&r, &expect, 1e-14);
        assert!((r[(1, 1)].re - 0.527046).abs() < 1e-6);
    }

    #[test]
    fn hermitian_sqrt_rejects_negative() {
        let a = ComplexMatrix::diag_real(&[1.0, -0.5]);
        assert!(matches!(
            hermitian_sqrt(&a),
            Err(Error::NegativeEigenvalue { .. })
        ));
    }

    #[test]
    fn eig_of_random_hermitian_reconstructs() {
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in [2usize, 3, 5, 8, 17] {
            let raw = ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()));
            let h = raw.add(&raw.adjoint());
            let (vals, vecs) = hermitian_eig(&h).unwrap();
            let rebuilt = psd_from_factors(&vecs, &vals);
            // psd_from_factors skips zero eigenvalues but random spectra have none.
            assert_close(&rebuilt, &h, 1e-10 * h.frobenius_norm().max(1.0));
            let vtv = vecs.adjoint().mul(&vecs);
            assert_close(&vtv, &ComplexMatrix::identity(n), 1e-12);
            for w in vals.windows(2) {
                assert!(w[0] >= w[1]);
            }
        }
    }

    #[test]
    fn svd_of_random_reconstructs() {
        let mut state = 0x243f6a8885a308d3u64;
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        for n in [2usize, 3, 4, 7, 12] {
            let a = ComplexMatrix::from_fn(n, n, |_, _| c(next(), next()));
            let d = svd(&a).unwrap();
            let mut us = d.u.clone();
            for j in 0..n {
                for i in 0..n {
                    us[(i, j)] *= d.sigma[j];
                }
            }
            assert_close(&us.mul(&d.v.adjoint()), &a, 1e-11 * a.frobenius_norm().max(1.0));
            assert_close(&d.u.adjoint().mul(&d.u), &ComplexMatrix::identity(n), 1e-12);
            assert_close(&d.v.adjoint().mul(&d.v), &ComplexMatrix::identity(n), 1e-12);
        }
    }
}
