//! Dense complex linear algebra at desk scale (dimensions up to 64).
//!
//! All decompositions are deterministic: eigenvalues and singular values are
//! sorted descending and every eigen/singular vector is phase-fixed so that
//! its largest-magnitude entry is real and positive (ties broken by lowest
//! row index). This keeps downstream correction policies reproducible across
//! runs and thread counts.

mod decomp;

pub use decomp::{
    abs_value, hermitian_eig, hermitian_sqrt, operator_norm, polar_decompose, svd, PolarFactors,
    Svd,
};

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Largest supported matrix dimension.
pub const MAX_DIM: usize = 64;

/// Dense square-or-rectangular complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl std::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows > MAX_DIM || cols > MAX_DIM {
            return Err(Error::DimensionTooLarge(rows.max(cols)));
        }
        if data.len() != rows * cols {
            return Err(Error::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFiniteEntry);
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0 && rows <= MAX_DIM && cols <= MAX_DIM);
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Diagonal matrix from complex entries.
    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, z) in entries.iter().enumerate() {
            m[(i, i)] = *z;
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(entries: &[f64]) -> Self {
        Self::diag(
            &entries
                .iter()
                .map(|&x| Complex64::new(x, 0.0))
                .collect::<Vec<_>>(),
        )
    }

    /// Build from rows of (re, im) pairs; convenience for tests and fixtures.
    pub fn from_rows(rows: &[Vec<(f64, f64)>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::BadShape {
                    rows: r,
                    cols: c,
                    len: row.len(),
                });
            }
            data.extend(row.iter().map(|&(re, im)| Complex64::new(re, im)));
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        debug_assert!(self.is_square());
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= a;
        }
        out
    }

    pub fn scale_re(&self, a: f64) -> Self {
        self.scale(Complex64::new(a, 0.0))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance to another matrix of the same shape.
    pub fn frobenius_distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Hermitian defect ‖A − A†‖_F.
    pub fn hermitian_defect(&self) -> f64 {
        debug_assert!(self.is_square());
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                s += (self[(i, j)] - self[(j, i)].conj()).norm_sqr();
            }
        }
        s.sqrt()
    }

    /// Hilbert-Schmidt inner product tr(A† B).
    pub fn hs_inner(&self, other: &Self) -> Complex64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z += w;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z -= w;
        }
        out
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    /// ⟨u| A |v⟩ with the physics convention (u conjugated).
    pub fn sandwich(&self, u: &[Complex64], v: &[Complex64]) -> Complex64 {
        let av = self.mul_vec(v);
        u.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }

    /// Kronecker product, first factor major: (A⊗B)[(i·p+k),(j·q+l)] = A[i,j]·B[k,l].
    pub fn kron(&self, other: &Self) -> Self {
        let (r1, c1) = (self.rows, self.cols);
        let (r2, c2) = (other.rows, other.cols);
        assert!(
            r1 * r2 <= MAX_DIM && c1 * c2 <= MAX_DIM,
            "kron result exceeds the supported dimension"
        );
        Self::from_fn(r1 * r2, c1 * c2, |i, j| {
            self[(i / r2, j / c2)] * other[(i % r2, j % c2)]
        })
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Which tensor factor of an N²-dimensional bipartite space to trace out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    First,
    Second,
}

/// Partial trace of an N²×N² matrix over the selected factor of H⊗H.
pub fn partial_trace(m: &ComplexMatrix, dim: usize, which: Factor) -> Result<ComplexMatrix> {
    let n2 = m.require_square()?;
    if n2 != dim * dim {
        return Err(Error::DimensionMismatch {
            expected: dim * dim,
            got: n2,
        });
    }
    let mut out = ComplexMatrix::zeros(dim, dim);
    match which {
        Factor::First => {
            for b in 0..dim {
                for bp in 0..dim {
                    let mut s = Complex64::new(0.0, 0.0);
                    for a in 0..dim {
                        s += m[(a * dim + b, a * dim + bp)];
                    }
                    out[(b, bp)] = s;
                }
            }
        }
        Factor::Second => {
            for a in 0..dim {
                for ap in 0..dim {
                    let mut s = Complex64::new(0.0, 0.0);
                    for b in 0..dim {
                        s += m[(a * dim + b, ap * dim + b)];
                    }
                    out[(a, ap)] = s;
                }
            }
        }
    }
    Ok(out)
}

/// Row-major vectorization: vec(X)[i·N+j] = X[i,j]. The first tensor factor
/// of the result indexes the row (output) side.
pub fn vec_mat(x: &ComplexMatrix) -> Vec<Complex64> {
    x.data().to_vec()
}

/// Inverse of [`vec_mat`] for square matrices.
pub fn unvec_mat(v: &[Complex64], n: usize) -> ComplexMatrix {
    assert_eq!(v.len(), n * n);
    ComplexMatrix::new(n, n, v.to_vec()).expect("unvec of finite data")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn construction_validates() {
        assert!(ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 4]).is_ok());
        assert!(matches!(
            ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]),
            Err(Error::BadShape { .. })
        ));
        assert!(matches!(
            ComplexMatrix::new(65, 1, vec![c(0.0, 0.0); 65]),
            Err(Error::DimensionTooLarge(65))
        ));
        assert!(matches!(
            ComplexMatrix::new(1, 1, vec![c(f64::NAN, 0.0)]),
            Err(Error::NonFiniteEntry)
        ));
    }

    #[test]
    fn matmul_and_trace() {
        let a = ComplexMatrix::from_rows(&[vec![(1.0, 0.0), (2.0, 0.0)], vec![(0.0, 1.0), (0.0, 0.0)]])
            .unwrap();
        let b = ComplexMatrix::identity(2);
        assert_eq!(a.mul(&b), a);
        assert_eq!(a.trace(), c(1.0, 0.0));
        let aa = a.mul(&a.adjoint());
        assert!((aa.trace().re - 6.0).abs() < 1e-14);
    }

    #[test]
    fn partial_trace_of_identity() {
        let id4 = ComplexMatrix::identity(4);
        for which in [Factor::First, Factor::Second] {
            let t = partial_trace(&id4, 2, which).unwrap();
            let expect = ComplexMatrix::identity(2).scale_re(2.0);
            assert!(t.frobenius_distance(&expect) < 1e-14);
        }
    }

    #[test]
    fn partial_trace_of_entangled_projector() {
        // |Ω'⟩⟨Ω'| with Ω' = Σ|ii⟩, N = 2; tracing out the second factor gives I.
        let mut omega = vec![c(0.0, 0.0); 4];
        omega[0] = c(1.0, 0.0);
        omega[3] = c(1.0, 0.0);
        let proj = ComplexMatrix::from_fn(4, 4, |i, j| omega[i] * omega[j].conj());
        let t = partial_trace(&proj, 2, Factor::Second).unwrap();
        assert!(t.frobenius_distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn partial_trace_of_kron() {
        let a = ComplexMatrix::from_rows(&[vec![(1.0, 0.5), (0.0, 2.0)], vec![(3.0, 0.0), (4.0, -1.0)]])
            .unwrap();
        let b = ComplexMatrix::from_rows(&[vec![(0.5, 0.0), (1.0, 1.0)], vec![(0.0, 0.0), (2.5, 0.0)]])
            .unwrap();
        let ab = a.kron(&b);
        let tr_b = b.trace();
        let tr_a = a.trace();
        let t2 = partial_trace(&ab, 2, Factor::Second).unwrap();
        assert!(t2.frobenius_distance(&a.scale(tr_b)) < 1e-13);
        let t1 = partial_trace(&ab, 2, Factor::First).unwrap();
        assert!(t1.frobenius_distance(&b.scale(tr_a)) < 1e-13);
    }
}
