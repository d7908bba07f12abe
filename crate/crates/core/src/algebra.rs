//! q-number arithmetic and truncated Fock-space realizations of the quon
//! ladder operators.
//!
//! The quon operators satisfy `B B† − q B† B = 1`. On the orthonormal Fock
//! basis `φ_0, φ_1, …` they act as `B φ_{n+1} = β_n φ_n` with
//! `β_n² = 1 + q + … + q^n`, and `h1 = B† B` is diagonal with eigenvalues
//! `ε_n = 1 + q + … + q^{n−1}`.
//!
//! Truncating to `φ_0 … φ_{N−1}` breaks the q-mutator on the last basis
//! vector only; every identity check in this crate therefore looks at the
//! "interior" of the truncated space.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{QuonError, Result};

pub type C64 = Complex64;

/// `ε_n = Σ_{k<n} q^k`, by direct summation so that `q = 1` needs no special case.
pub fn q_number(n: usize, q: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for _ in 0..n {
        sum += term;
        term *= q;
    }
    sum
}

/// `ε_n! = ε_1 ⋯ ε_n`, with `ε_0! = 1`.
pub fn q_factorial(n: usize, q: f64) -> f64 {
    let mut eps = 0.0;
    let mut term = 1.0;
    let mut prod = 1.0;
    for _ in 0..n {
        eps += term;
        term *= q;
        prod *= eps;
    }
    prod
}

/// `β_n = √ε_{n+1}`, the matrix element `⟨φ_n|B|φ_{n+1}⟩`.
pub fn beta_coeff(n: usize, q: f64) -> Result<f64> {
    let radicand = q_number(n + 1, q);
    if radicand < 0.0 {
        return Err(QuonError::domain(format!(
            "beta_{n}^2 = {radicand} is negative for q = {q}"
        )));
    }
    Ok(radicand.sqrt())
}

/// Ladder coefficients `β_0 … β_{count−1}` for a `q` already known to be in `[−1, 1]`.
pub(crate) fn ladder_coeffs(count: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut eps = 0.0;
    let mut term = 1.0;
    for _ in 0..count {
        eps += term;
        term *= q;
        out.push(eps.max(0.0).sqrt());
    }
    out
}

pub(crate) fn check_deformation(q: f64) -> Result<()> {
    if !q.is_finite() || !(-1.0..=1.0).contains(&q) {
        return Err(QuonError::domain(format!(
            "q = {q} must lie in [-1, 1]"
        )));
    }
    Ok(())
}

/// Deformation parameter and Fock truncation dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuonParams {
    q: f64,
    dim: usize,
}

impl QuonParams {
    pub fn new(q: f64, dim: usize) -> Result<Self> {
        check_deformation(q)?;
        if dim < 2 {
            return Err(QuonError::domain(format!(
                "truncation dimension {dim} must be at least 2"
            )));
        }
        Ok(Self { q, dim })
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The same deformation at another truncation.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.q, dim)
    }

    /// `ε_0 … ε_{N−1}`.
    pub fn spectrum(&self) -> Vec<f64> {
        (0..self.dim).map(|n| q_number(n, self.q)).collect()
    }
}

/// A square complex matrix acting on the truncated Fock basis.
#[derive(Clone, PartialEq)]
pub struct FockOperator {
    matrix: DMatrix<C64>,
}

impl fmt::Debug for FockOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FockOperator")
            .field("dim", &self.dim())
            .finish_non_exhaustive()
    }
}

impl FockOperator {
    pub fn from_matrix(matrix: DMatrix<C64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(QuonError::usage(format!(
                "operator matrix must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QuonError::usage("operator matrix has non-finite entries"));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d = DVector::from_iterator(diag.len(), diag.iter().map(|&x| C64::new(x, 0.0)));
        Self {
            matrix: DMatrix::from_diagonal(&d),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.matrix[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            matrix: &self.matrix * factor,
        }
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        self.scale(C64::new(factor, 0.0))
    }

    /// `self + shift·I`.
    pub fn shift(&self, shift: f64) -> Self {
        let mut matrix = self.matrix.clone();
        for i in 0..self.dim() {
            matrix[(i, i)] += shift;
        }
        Self { matrix }
    }

    pub fn powi(&self, exponent: u32) -> Self {
        let mut out = Self::identity(self.dim());
        for _ in 0..exponent {
            out = &out * self;
        }
        out
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.matrix * v
    }

    /// `[self, other] = self·other − other·self`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// Leading `size × size` sub-block.
    pub fn leading_block(&self, size: usize) -> DMatrix<C64> {
        self.matrix.view((0, 0), (size, size)).into_owned()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.norm()
    }

    /// Largest entrywise modulus of `self − other` on the leading `size × size` block.
    pub fn max_abs_diff_on(&self, other: &Self, size: usize) -> f64 {
        let size = size.min(self.dim()).min(other.dim());
        let mut worst = 0.0_f64;
        for j in 0..size {
            for i in 0..size {
                worst = worst.max((self.matrix[(i, j)] - other.matrix[(i, j)]).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus on the leading `size × size` block.
    pub fn max_abs_on(&self, size: usize) -> f64 {
        let size = size.min(self.dim());
        self.matrix
            .view((0, 0), (size, size))
            .iter()
            .fold(0.0_f64, |acc, z| acc.max(z.norm()))
    }

    /// `max |A_ij − conj(A_ji)|`.
    pub fn self_adjoint_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0_f64;
        for j in 0..n {
            for i in 0..n {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Eigen-decomposition of the Hermitian part `(A + A†)/2`.
    pub fn hermitian_spectrum(&self) -> SpectralData {
        SpectralData::from_hermitian(&self.matrix)
    }
}

impl Mul for &FockOperator {
    type Output = FockOperator;

    fn mul(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            matrix: &self.matrix * &rhs.matrix,
        }
    }
}

impl Add for &FockOperator {
    type Output = FockOperator;

    fn add(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            matrix: &self.matrix + &rhs.matrix,
        }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;

    fn sub(self, rhs: &FockOperator) -> FockOperator {
        FockOperator {
            matrix: &self.matrix - &rhs.matrix,
        }
    }
}

/// Ascending real eigenvalues with the matching unitary eigenvector columns.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

impl SpectralData {
    pub fn from_hermitian(matrix: &DMatrix<C64>) -> Self {
        let herm = (matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let eig = herm.symmetric_eigen();
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::zeros(matrix.nrows(), matrix.ncols());
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
        }
        Self {
            eigenvalues,
            eigenvectors,
        }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(f64::NAN)
    }
}

/// `B`: `β_n` on the superdiagonal.
pub fn annihilator(params: &QuonParams) -> FockOperator {
    let n = params.dim();
    let betas = ladder_coeffs(n - 1, params.q());
    let mut m = DMatrix::zeros(n, n);
    for (k, b) in betas.into_iter().enumerate() {
        m[(k, k + 1)] = C64::new(b, 0.0);
    }
    FockOperator { matrix: m }
}

/// `B†`: `β_n` on the subdiagonal.
pub fn creator(params: &QuonParams) -> FockOperator {
    annihilator(params).adjoint()
}

/// `h1 = B† B = diag(ε_0, …, ε_{N−1})`.
pub fn hamiltonian_h1(params: &QuonParams) -> FockOperator {
    FockOperator::from_real_diagonal(&params.spectrum())
}

/// Largest column norm of `B B† − q B† B − 1` over the interior basis vectors
/// `φ_0 … φ_{N−2}`.
pub fn qmutator_residual(params: &QuonParams) -> f64 {
    let b = annihilator(params);
    let bd = b.adjoint();
    let defect = (&(&b * &bd) - &(&bd * &b).scale_real(params.q())).shift(-1.0);
    (0..params.dim() - 1)
        .map(|col| defect.matrix.column(col).norm())
        .fold(0.0, f64::max)
}

/// `X = (B + B†)/√2` and `P = (B − B†)/(i√2)`.
pub fn quadratures(params: &QuonParams) -> (FockOperator, FockOperator) {
    let b = annihilator(params);
    let bd = b.adjoint();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let x = (&b + &bd).scale_real(s);
    let p = (&b - &bd).scale(C64::new(0.0, -s));
    (x, p)
}

/// Matrix-free `B v`: `(B v)_n = β_n v_{n+1}`, same truncation as [`annihilator`].
pub fn lower(q: f64, v: &[C64]) -> Vec<C64> {
    let betas = ladder_coeffs(v.len().saturating_sub(1), q);
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (n, b) in betas.into_iter().enumerate() {
        out[n] = v[n + 1] * b;
    }
    out
}

/// Matrix-free `B† v`: `(B† v)_{n+1} = β_n v_n`, same truncation as [`creator`].
pub fn raise(q: f64, v: &[C64]) -> Vec<C64> {
    let betas = ladder_coeffs(v.len().saturating_sub(1), q);
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    for (n, b) in betas.into_iter().enumerate() {
        out[n + 1] = v[n] * b;
    }
    out
}

pub(crate) fn vec_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn vdot(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}
