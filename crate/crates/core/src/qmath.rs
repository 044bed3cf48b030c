//! Dense complex linear algebra for the small operators used throughout the
//! crate (at most 64×64).
//!
//! Basis convention: for a qubit, index 0 is |0⟩ = |H⟩ and index 1 is
//! |1⟩ = |V⟩. Composite indices are row-major over the tensor factors, so the
//! first factor of a [`kron`] is the most significant digit.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
pub use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tol::TOL;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub const fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            write!(f, "  ")?;
            for c in 0..self.cols() {
                let z = self[(r, c)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::dims(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let z: Vec<Complex64> = entries.iter().map(|&x| c64(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &z)
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (k, &d) in diag.iter().enumerate() {
            m[(k, k)] = d;
        }
        m
    }

    /// |ψ⟩⟨φ|
    pub fn outer(ket: &[Complex64], bra: &[Complex64]) -> Self {
        Self(DMatrix::from_fn(ket.len(), bra.len(), |r, c| ket[r] * bra[c].conj()))
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self(DMatrix::from_fn(rows, cols, f))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self[(r, c)]);
            }
        }
        out
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn from_nalgebra(m: DMatrix<Complex64>) -> Self {
        Self(m)
    }

    pub fn dagger(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn conj(&self) -> Self {
        Self(self.0.map(|z| z.conj()))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|z| z * s))
    }

    pub fn scale_c(&self, s: Complex64) -> Self {
        Self(&self.0 * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Frobenius distance; the default distance between superoperators.
    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).frobenius_norm()
    }

    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * c64(0.5, 0.0))
    }

    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn unitarity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        (&(self.dagger() * self) - &Self::identity(n)).max_abs()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Column-stacking vectorization: entry (i, j) lands at index i + j·rows.
    pub fn vec(&self) -> Vec<Complex64> {
        self.0.as_slice().to_vec()
    }

    /// Inverse of [`ComplexMatrix::vec`].
    pub fn unvec(v: &[Complex64], rows: usize, cols: usize) -> Result<Self> {
        if v.len() != rows * cols {
            return Err(Error::dims(format!(
                "cannot reshape {} entries into {rows}x{cols}",
                v.len()
            )));
        }
        Ok(Self(DMatrix::from_column_slice(rows, cols, v)))
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| self[(r, c)] * v[c]).sum())
            .collect()
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::dims(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self(&self.0 * &rhs.0))
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, idx: (usize, usize)) -> &Complex64 {
        &self.0[idx]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, idx: (usize, usize)) -> &mut Complex64 {
        &mut self.0[idx]
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr<&ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op &rhs.0)
            }
        }
        impl $tr<ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op rhs.0)
            }
        }
        impl $tr<&ComplexMatrix> for ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: &ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(self.0 $op &rhs.0)
            }
        }
        impl $tr<ComplexMatrix> for &ComplexMatrix {
            type Output = ComplexMatrix;
            fn $method(self, rhs: ComplexMatrix) -> ComplexMatrix {
                ComplexMatrix(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        ComplexMatrix(-self.0)
    }
}

/// Eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column k is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.eigenvectors.rows()).map(|r| self.eigenvectors[(r, k)]).collect()
    }

    /// V f(Λ) V†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> Complex64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let fl: Vec<Complex64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |r, c| {
            (0..n).map(|k| v[(r, k)] * fl[k] * v[(c, k)].conj()).sum()
        })
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::dims(format!("eigendecomposition of {}x{} matrix", m.rows(), m.cols())));
    }
    let scale = m.max_abs().max(1.0);
    let defect = m.hermiticity_defect();
    if defect > TOL.structural * scale {
        return Err(Error::NonHermitian(defect));
    }
    let eig = SymmetricEigen::new(m.hermitian_part().0);
    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(HermitianEig { eigenvalues, eigenvectors })
}

/// Matrix exponential.
///
/// Hermitian and anti-Hermitian inputs go through the spectral decomposition;
/// everything else (the Liouvillians are not normal) uses scaling and
/// squaring with a Padé approximant.
pub fn expm(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::dims(format!("exponential of {}x{} matrix", m.rows(), m.cols())));
    }
    let scale = m.max_abs().max(1.0);
    if m.hermiticity_defect() <= TOL.structural * 1e-3 * scale {
        let eig = hermitian_eig(m)?;
        return Ok(eig.map_spectrum(|l| c64(l.exp(), 0.0)));
    }
    let h = m.scale_c(-I);
    if h.hermiticity_defect() <= TOL.structural * 1e-3 * scale {
        let eig = hermitian_eig(&h)?;
        return Ok(eig.map_spectrum(|l| Complex64::from_polar(1.0, l)));
    }
    Ok(ComplexMatrix(m.0.exp()))
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix(a.0.kronecker(&b.0))
}

fn check_dims(m: &ComplexMatrix, dims: &[usize], which: usize) -> Result<usize> {
    let total: usize = dims.iter().product();
    if !m.is_square() || m.rows() != total {
        return Err(Error::dims(format!(
            "subsystem dims {dims:?} do not match {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if which >= dims.len() {
        return Err(Error::dims(format!("subsystem {which} out of range for dims {dims:?}")));
    }
    Ok(total)
}

/// Splits a composite index into per-subsystem digits (row-major).
fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut d = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        d[k] = idx % dims[k];
        idx /= dims[k];
    }
    d
}

fn compose_index(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (&x, &n)| acc * n + x)
}

/// Traces out every subsystem except `keep`.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: usize) -> Result<ComplexMatrix> {
    let total = check_dims(m, dims, keep)?;
    let dk = dims[keep];
    let mut out = ComplexMatrix::zeros(dk, dk);
    for r in 0..total {
        let dr = digits(r, dims);
        for c in 0..total {
            let dc = digits(c, dims);
            let same_rest = (0..dims.len()).all(|k| k == keep || dr[k] == dc[k]);
            if same_rest {
                out[(dr[keep], dc[keep])] += m[(r, c)];
            }
        }
    }
    Ok(out)
}

/// Transposes subsystem `which`, leaving the others untouched.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], which: usize) -> Result<ComplexMatrix> {
    let total = check_dims(m, dims, which)?;
    let mut out = ComplexMatrix::zeros(total, total);
    for r in 0..total {
        for c in 0..total {
            let mut dr = digits(r, dims);
            let mut dc = digits(c, dims);
            std::mem::swap(&mut dr[which], &mut dc[which]);
            out[(compose_index(&dr, dims), compose_index(&dc, dims))] = m[(r, c)];
        }
    }
    Ok(out)
}

/// Pauli and ladder operators in the {|0⟩, |1⟩} basis.
pub mod pauli {
    use super::{c64, ComplexMatrix, ONE, ZERO};

    fn m2(a: [[num_complex::Complex64; 2]; 2]) -> ComplexMatrix {
        ComplexMatrix::from_fn(2, 2, |r, c| a[r][c])
    }

    pub fn identity() -> ComplexMatrix {
        ComplexMatrix::identity(2)
    }

    pub fn x() -> ComplexMatrix {
        m2([[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> ComplexMatrix {
        m2([[ZERO, c64(0.0, -1.0)], [c64(0.0, 1.0), ZERO]])
    }

    pub fn z() -> ComplexMatrix {
        m2([[ONE, ZERO], [ZERO, -ONE]])
    }

    /// |0⟩⟨1|: the jump operator that relaxes population into |0⟩.
    pub fn lowering() -> ComplexMatrix {
        m2([[ZERO, ONE], [ZERO, ZERO]])
    }

    /// |1⟩⟨0|
    pub fn raising() -> ComplexMatrix {
        m2([[ZERO, ZERO], [ONE, ZERO]])
    }
}
