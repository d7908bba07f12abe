//! Intertwining operators.
//!
//! Given a self-adjoint `h1` and an operator `X` with `[h1, X X†] = 0` and
//! `N2 = X† X` invertible, `h2 = N2⁻¹ X† h1 X` is self-adjoint, satisfies
//! `X†(X h2 − h1 X) = 0`, and `X† φ_n` (when nonzero) is an `h2` eigenvector
//! with the same eigenvalue as `φ_n`.
//!
//! All operators live in a truncated Fock space. Each factor of `B` or `B†`
//! leaks one basis index at the truncation edge, so every construction here
//! is evaluated on a leading "interior" block where the infinite-dimensional
//! identities hold exactly.

use nalgebra::DMatrix;

use crate::algebra::{annihilator, creator, hamiltonian_h1, q_number, FockOperator, QuonParams, C64};
use crate::error::{QuonError, Result};

/// Minimum eigenvalue `N2` must exceed on the interior block.
pub const INVERTIBILITY_THRESHOLD: f64 = 1e-8;

/// `[h1, N1] = 0` is accepted when `‖[h1, N1]‖ ≤ COMMUTATOR_RTOL · ‖h1‖ · ‖N1‖`.
pub const COMMUTATOR_RTOL: f64 = 1e-10;

/// Spectral-match tolerance for σ(h2) ⊂ σ(h1).
pub const SPECTRAL_TOL: f64 = 1e-8;

fn block(m: &DMatrix<C64>, size: usize) -> DMatrix<C64> {
    m.view((0, 0), (size, size)).into_owned()
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
}

/// An intertwined pair `(h1, h2)` with the diagnostics of its construction.
#[derive(Debug, Clone)]
pub struct IntertwinePair {
    pub x: FockOperator,
    pub h1: FockOperator,
    pub n1: FockOperator,
    pub n2: FockOperator,
    /// `h2` on the interior block.
    pub h2: FockOperator,
    pub interior: usize,
    /// Frobenius norm of `[h1, N1]` on the interior block.
    pub commutator_norm: f64,
    pub min_eig_n2: f64,
    pub self_adjoint_defect: f64,
    /// Largest entry of `X†(X h2 − h1 X)` on the interior block.
    pub intertwining_defect: f64,
}

/// One h1 eigenvector pushed through `X†`.
#[derive(Debug, Clone)]
pub struct MappedState {
    pub n: usize,
    pub eigenvalue: f64,
    pub vector: Vec<C64>,
    pub is_zero: bool,
    /// `‖h2 φ⁽²⁾ − ε_n φ⁽²⁾‖/‖φ⁽²⁾‖`, absent for zero images.
    pub residual: Option<f64>,
}

impl IntertwinePair {
    /// Builds `h2 = N2⁻¹ X† h1 X` on the leading `interior × interior` block,
    /// solving against `N2` by Cholesky rather than inverting it.
    pub fn build(x: &FockOperator, h1: &FockOperator, interior: usize, threshold: f64) -> Result<Self> {
        let dim = x.dim();
        if h1.dim() != dim {
            return Err(QuonError::usage(format!(
                "X is {dim}-dimensional but h1 is {}-dimensional",
                h1.dim()
            )));
        }
        if interior == 0 || interior > dim {
            return Err(QuonError::usage(format!(
                "interior block size {interior} must lie in 1..={dim}"
            )));
        }
        let xd = x.adjoint();
        let n1 = x * &xd;
        let n2 = &xd * x;

        let comm = block(h1.commutator(&n1).matrix(), interior);
        let commutator_norm = comm.norm();
        let tolerance = COMMUTATOR_RTOL * block(h1.matrix(), interior).norm() * block(n1.matrix(), interior).norm();
        if commutator_norm > tolerance {
            return Err(QuonError::PremiseViolation {
                commutator_norm,
                tolerance,
            });
        }

        let n2_int = block(n2.matrix(), interior);
        let min_eig_n2 = crate::algebra::SpectralData::from_hermitian(&n2_int).min();
        if !(min_eig_n2 > threshold) {
            return Err(QuonError::NotInvertible {
                min_eigenvalue: min_eig_n2,
                threshold,
            });
        }
        let sandwiched = &(&xd * h1) * x;
        let rhs = block(sandwiched.matrix(), interior);
        let chol = nalgebra::Cholesky::new(n2_int).ok_or(QuonError::NotInvertible {
            min_eigenvalue: min_eig_n2,
            threshold,
        })?;
        let h2 = FockOperator::from_matrix(chol.solve(&rhs))?;
        let self_adjoint_defect = h2.self_adjoint_defect();

        let mut h2_full = DMatrix::zeros(dim, dim);
        h2_full.view_mut((0, 0), (interior, interior)).copy_from(h2.matrix());
        let h2_full = FockOperator::from_matrix(h2_full)?;
        let defect = &xd * &(&(x * &h2_full) - &(h1 * x));
        let intertwining_defect = max_abs(&block(defect.matrix(), interior));

        Ok(Self {
            x: x.clone(),
            h1: h1.clone(),
            n1,
            n2,
            h2,
            interior,
            commutator_norm,
            min_eig_n2,
            self_adjoint_defect,
            intertwining_defect,
        })
    }

    /// `h2` embedded in the full space, zero outside the interior block.
    pub fn h2_embedded(&self) -> FockOperator {
        let dim = self.x.dim();
        let mut m = DMatrix::zeros(dim, dim);
        m.view_mut((0, 0), (self.interior, self.interior))
            .copy_from(self.h2.matrix());
        FockOperator::from_matrix(m).expect("finite square matrix")
    }

    /// `φ⁽²⁾_n = X† φ⁽¹⁾_n` for the interior h1 eigenvectors, in ascending eigenvalue order.
    pub fn map_eigenstates(&self) -> Vec<MappedState> {
        let spec = self.h1.hermitian_spectrum();
        let xd = self.x.adjoint();
        let h2 = self.h2_embedded();
        let zero_cut = 1e-12 * self.x.frobenius_norm().max(1.0);
        (0..self.interior)
            .map(|n| {
                let phi1 = spec.eigenvectors.column(n).into_owned();
                let phi2 = xd.apply(&phi1);
                let norm = phi2.norm();
                let eigenvalue = spec.eigenvalues[n];
                let is_zero = norm <= zero_cut;
                let residual = (!is_zero).then(|| {
                    let r = h2.apply(&phi2) - &phi2 * C64::new(eigenvalue, 0.0);
                    r.norm() / norm
                });
                MappedState {
                    n,
                    eigenvalue,
                    vector: phi2.iter().copied().collect(),
                    is_zero,
                    residual,
                }
            })
            .collect()
    }
}

/// Result of matching σ(h2) against σ(h1).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralInclusion {
    /// Every h2 eigenvalue matched a distinct h1 eigenvalue within tolerance.
    pub included: bool,
    pub max_mismatch: f64,
    /// `outer` values left unmatched.
    pub missing: Vec<f64>,
}

/// Sorted-merge matching of `inner` against the multiset `outer`.
pub fn spectral_inclusion(inner: &[f64], outer: &[f64], tol: f64) -> SpectralInclusion {
    let mut inner = inner.to_vec();
    let mut outer = outer.to_vec();
    inner.sort_by(f64::total_cmp);
    outer.sort_by(f64::total_cmp);
    let mut missing = Vec::new();
    let mut max_mismatch = 0.0_f64;
    let mut included = true;
    let mut j = 0;
    for &e in &inner {
        while j < outer.len() && outer[j] < e - tol {
            missing.push(outer[j]);
            j += 1;
        }
        if j < outer.len() && (outer[j] - e).abs() <= tol {
            max_mismatch = max_mismatch.max((outer[j] - e).abs());
            j += 1;
        } else {
            included = false;
        }
    }
    missing.extend_from_slice(&outer[j..]);
    SpectralInclusion {
        included,
        max_mismatch,
        missing,
    }
}

/// The intertwiner `X = (B†)^l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerIntertwiner {
    l: usize,
    params: QuonParams,
}

/// A power pair together with its checks against the closed form
/// `h2 = q^l h1 + (1 + q + … + q^{l−1})`.
#[derive(Debug, Clone)]
pub struct PowerPair {
    pub pair: IntertwinePair,
    /// Largest entrywise deviation of `h2` from the closed form on the interior block.
    pub closed_form_residual: f64,
    pub spectrum: SpectralInclusion,
    /// `{ε_0 … ε_{l−1}}`, the eigenvalues h2 should not reach.
    pub expected_missing: Vec<f64>,
}

impl PowerPair {
    /// The missing eigenvalues are exactly `ε_0 … ε_{l−1}`.
    pub fn missing_matches_expected(&self) -> bool {
        self.spectrum.missing.len() == self.expected_missing.len()
            && self
                .spectrum
                .missing
                .iter()
                .zip(&self.expected_missing)
                .all(|(a, b)| (a - b).abs() <= SPECTRAL_TOL)
    }
}

impl PowerIntertwiner {
    pub fn new(l: usize, params: QuonParams) -> Result<Self> {
        if l == 0 {
            return Err(QuonError::domain("power l must be at least 1"));
        }
        if params.q() < 0.0 {
            return Err(QuonError::domain(format!(
                "power intertwiners need q >= 0 for N2 >= 1, got q = {}",
                params.q()
            )));
        }
        if params.dim() <= 2 * l {
            return Err(QuonError::domain(format!(
                "dimension {} must exceed 2l = {}",
                params.dim(),
                2 * l
            )));
        }
        Ok(Self { l, params })
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn params(&self) -> &QuonParams {
        &self.params
    }

    /// Interior block size `dim − 2l`.
    pub fn interior(&self) -> usize {
        self.params.dim() - 2 * self.l
    }

    pub fn operator(&self) -> FockOperator {
        creator(&self.params).powi(self.l as u32)
    }

    /// `q^l h1 + ε_l`.
    pub fn closed_form(&self) -> FockOperator {
        let q = self.params.q();
        hamiltonian_h1(&self.params)
            .scale_real(q.powi(self.l as i32))
            .shift(q_number(self.l, q))
    }

    pub fn pair(&self) -> Result<PowerPair> {
        let h1 = hamiltonian_h1(&self.params);
        let k = self.interior();
        let pair = IntertwinePair::build(&self.operator(), &h1, k, INVERTIBILITY_THRESHOLD)?;
        let closed = self.closed_form();
        let closed_form_residual = pair.h2.max_abs_diff_on(&closed, k);
        let h2_eigs = pair.h2.hermitian_spectrum().eigenvalues;
        let reference: Vec<f64> = (0..k + self.l).map(|n| q_number(n, self.params.q())).collect();
        let spectrum = spectral_inclusion(&h2_eigs, &reference, SPECTRAL_TOL);
        let expected_missing = (0..self.l).map(|n| q_number(n, self.params.q())).collect();
        Ok(PowerPair {
            pair,
            closed_form_residual,
            spectrum,
            expected_missing,
        })
    }
}

/// Interior residuals of the three ladder identities used for power intertwiners.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResiduals {
    /// `B† B^{l+1} = q^{−l} B^l (B†B − ε_l)`; undefined for `q ≤ 0`.
    pub lowering: Result<f64>,
    /// `N1^{(l+1)} = q^{−l} N1^{(l)} (N1^{(1)} − ε_l)`; undefined for `q ≤ 0`.
    pub number: Result<f64>,
    /// `B (B†)^l = (B†)^{l−1} (q^l B†B + ε_l)`.
    pub raising: f64,
}

/// Evaluates the three identities as matrices on the block of size `dim − 2(l+1)`.
pub fn identity_checks(l: usize, params: &QuonParams) -> Result<IdentityResiduals> {
    if l == 0 {
        return Err(QuonError::domain("power l must be at least 1"));
    }
    if params.dim() <= 2 * (l + 1) {
        return Err(QuonError::domain(format!(
            "dimension {} must exceed 2(l+1) = {}",
            params.dim(),
            2 * (l + 1)
        )));
    }
    let q = params.q();
    let k = params.dim() - 2 * (l + 1);
    let b = annihilator(params);
    let bd = creator(params);
    let h1 = &bd * &b;
    let eps_l = q_number(l, q);
    let bl = b.powi(l as u32);
    let bdl = bd.powi(l as u32);

    let raising = {
        let lhs = &b * &bdl;
        let rhs = &bd.powi(l as u32 - 1) * &h1.scale_real(q.powi(l as i32)).shift(eps_l);
        lhs.max_abs_diff_on(&rhs, k)
    };

    let needs_positive_q = || {
        QuonError::domain(format!(
            "identity divides by q^l and needs q > 0, got q = {q}"
        ))
    };
    let (lowering, number) = if q > 0.0 {
        let inv = q.powi(-(l as i32));
        let lhs = &bd * &(&bl * &b);
        let rhs = (&bl * &h1.shift(-eps_l)).scale_real(inv);
        let lowering = lhs.max_abs_diff_on(&rhs, k);

        let n1_l = &bdl * &bl;
        let n1_next = &(&bdl * &bd) * &(&bl * &b);
        let rhs = (&n1_l * &h1.shift(-eps_l)).scale_real(inv);
        let number = n1_next.max_abs_diff_on(&rhs, k);
        (Ok(lowering), Ok(number))
    } else {
        (Err(needs_positive_q()), Err(needs_positive_q()))
    };

    Ok(IdentityResiduals {
        lowering,
        number,
        raising,
    })
}

/// Diagnostics for `X = f(B†)` with a polynomial `f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticProbe {
    /// Frobenius norm of `[h1, X X†]` on the interior block.
    pub commutator_norm: f64,
    /// Largest entry of `X† h1 X − f(B)(f(qB†) B†B + (f(B†) − f(qB†))/(1−q))`
    /// on the interior block.
    pub formula_residual: f64,
    pub interior: usize,
}

/// `Σ a_k A^k` by Horner's rule.
pub fn polynomial_in(op: &FockOperator, coeffs: &[f64]) -> FockOperator {
    let mut acc = FockOperator::zeros(op.dim());
    for &a in coeffs.iter().rev() {
        acc = (&acc * op).shift(a);
    }
    acc
}

pub fn analytic_probe(f_coeffs: &[f64], params: &QuonParams) -> Result<AnalyticProbe> {
    let q = params.q();
    if !(q > 0.0 && q < 1.0) {
        return Err(QuonError::domain(format!("analytic probe needs 0 < q < 1, got q = {q}")));
    }
    let degree = f_coeffs.iter().rposition(|&a| a != 0.0).unwrap_or(0);
    if params.dim() <= 2 * degree + 2 {
        return Err(QuonError::domain(format!(
            "dimension {} must exceed 2 deg(f) + 2 = {}",
            params.dim(),
            2 * degree + 2
        )));
    }
    let k = params.dim() - 2 * degree;
    let b = annihilator(params);
    let bd = creator(params);
    let h1 = &bd * &b;

    let x = polynomial_in(&bd, f_coeffs);
    let commutator_norm = block(h1.commutator(&(&x * &x.adjoint())).matrix(), k).norm();

    let scaled: Vec<f64> = f_coeffs
        .iter()
        .enumerate()
        .map(|(j, &a)| a * q.powi(j as i32))
        .collect();
    let f_b = polynomial_in(&b, f_coeffs);
    let f_qbd = polynomial_in(&bd, &scaled);
    let q_diff = (&x - &f_qbd).scale_real(1.0 / (1.0 - q));
    let formula = &f_b * &(&(&f_qbd * &h1) + &q_diff);
    let sandwiched = &(&x.adjoint() * &h1) * &x;
    let formula_residual = sandwiched.max_abs_diff_on(&formula, k);

    Ok(AnalyticProbe {
        commutator_norm,
        formula_residual,
        interior: k,
    })
}
