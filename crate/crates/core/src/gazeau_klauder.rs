//! Gazeau–Klauder states
//! `|J,γ⟩ = M(J)^{−1/2} Σ_n J^{n/2} e^{−iε_nγ}/√ρ_n φ_n` with `ρ_n = ρ₀ ε_n!`,
//! and the γ-dependent lowering operator `B_γ` that has them as eigenvectors.

use nalgebra::DMatrix;

use crate::algebra::{check_deformation, lower, q_number, vdot, vec_norm, FockOperator, QuonParams, C64};
use crate::error::{QuonError, Result};
use crate::qexp::{q_exponential, radius, TruncatedSeries};

/// Action labels must satisfy `J ≤ ACTION_MARGIN · R`.
pub const ACTION_MARGIN: f64 = 0.9;

/// `R = lim ρ_{n+1}/ρ_n = lim ε_{n+1} = 1/(1−q)`.
pub fn action_radius(q: f64) -> f64 {
    radius(q)
}

fn check_rho0(rho0: f64) -> Result<()> {
    if !(rho0 > 0.0) || !rho0.is_finite() {
        return Err(QuonError::domain(format!("rho0 = {rho0} must be finite and positive")));
    }
    Ok(())
}

/// `M(J) = Σ J^n / ρ_n`, tail-certified to relative accuracy `tol`.
pub fn gk_normalizer(j: f64, q: f64, rho0: f64, tol: f64) -> Result<f64> {
    check_deformation(q)?;
    check_rho0(rho0)?;
    if !(j >= 0.0) {
        return Err(QuonError::domain(format!("action J = {j} must be non-negative")));
    }
    Ok(q_exponential(C64::new(j, 0.0), q, tol)?.re / rho0)
}

/// A Gazeau–Klauder state truncated to `M` Fock components.
#[derive(Debug, Clone)]
pub struct GKState {
    j: f64,
    gamma: f64,
    rho0: f64,
    q: f64,
    tol: f64,
    coeffs: Vec<C64>,
}

impl GKState {
    /// Builds `|J,γ⟩`; the dropped part of the state has norm at most `tol`.
    pub fn build(j: f64, gamma: f64, q: f64, rho0: f64, tol: f64) -> Result<Self> {
        check_deformation(q)?;
        check_rho0(rho0)?;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(QuonError::domain(format!("tolerance {tol} must lie in (0, 1)")));
        }
        if !gamma.is_finite() {
            return Err(QuonError::domain(format!("gamma = {gamma} must be finite")));
        }
        let limit = ACTION_MARGIN * action_radius(q);
        if !(j >= 0.0) || j > limit || !j.is_finite() {
            return Err(QuonError::domain(format!(
                "action J = {j} must lie in [0, {ACTION_MARGIN}/(1-q)] = [0, {limit}] for q = {q}"
            )));
        }
        let series = TruncatedSeries::new(j, q, tol * tol)?;
        // |c_n|² = (J^n/ρ_n)/M(J); ρ₀ enters both and cancels.
        let normalizer = series.sum / rho0;
        let coeffs = series
            .terms
            .iter()
            .enumerate()
            .map(|(n, &t)| {
                let modulus = (t / rho0 / normalizer).sqrt();
                C64::from_polar(modulus, -q_number(n, q) * gamma)
            })
            .collect();
        Ok(Self {
            j,
            gamma,
            rho0,
            q,
            tol,
            coeffs,
        })
    }

    pub fn action(&self) -> f64 {
        self.j
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.coeffs)
    }

    /// `e^{−i h1 t} |J,γ⟩ = |J,γ+t⟩`.
    pub fn evolve(&self, t: f64) -> Result<Self> {
        Self::build(self.j, self.gamma + t, self.q, self.rho0, self.tol)
    }

    /// `‖e^{−iε_n t} c_n − c_n(J, γ+t)‖`, the diagonal propagator checked
    /// against [`GKState::evolve`].
    pub fn temporal_stability_residual(&self, t: f64) -> Result<f64> {
        let evolved = self.evolve(t)?;
        let diff: Vec<C64> = self
            .coeffs
            .iter()
            .zip(evolved.coeffs())
            .enumerate()
            .map(|(n, (&c, &e))| c * C64::from_polar(1.0, -q_number(n, self.q) * t) - e)
            .collect();
        Ok(vec_norm(&diff))
    }

    /// `⟨J,γ| h1 |J,γ⟩ = Σ ε_n |c_n|²`.
    pub fn action_expectation(&self) -> f64 {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(n, c)| q_number(n, self.q) * c.norm_sqr())
            .sum()
    }

    fn padded(&self) -> Vec<C64> {
        let mut v = self.coeffs.clone();
        v.push(C64::new(0.0, 0.0));
        v
    }

    /// `‖B_{γ'} |J,γ⟩ − √J |J,γ⟩‖`.
    pub fn b_gamma_eigen_residual(&self, gamma_probe: f64) -> f64 {
        let v = self.padded();
        let bv = apply_b_gamma(self.q, gamma_probe, &v);
        let sj = self.j.sqrt();
        let diff: Vec<C64> = bv.iter().zip(&v).map(|(b, c)| b - c * sj).collect();
        vec_norm(&diff)
    }

    /// `min_λ ‖B v − λ v‖` for the plain annihilator; zero iff the state is a `B` eigenvector.
    pub fn annihilator_defect(&self) -> f64 {
        let v = self.padded();
        let bv = lower(self.q, &v);
        let lambda = vdot(&v, &bv);
        let diff: Vec<C64> = bv.iter().zip(&v).map(|(b, c)| b - c * lambda).collect();
        vec_norm(&diff)
    }
}

/// Matrix-free `B_γ v`: `(B_γ v)_{n−1} = √ε_n e^{i q^{n−1} γ} v_n`.
pub fn apply_b_gamma(q: f64, gamma: f64, v: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); v.len()];
    let mut power = 1.0;
    for n in 1..v.len() {
        out[n - 1] = v[n] * C64::from_polar(q_number(n, q).max(0.0).sqrt(), power * gamma);
        power *= q;
    }
    out
}

/// `B_γ` with `⟨φ_{n−1}|B_γ|φ_n⟩ = √ε_n e^{i q^{n−1} γ}`.
pub fn b_gamma(gamma: f64, params: &QuonParams) -> FockOperator {
    let n = params.dim();
    let q = params.q();
    let mut m = DMatrix::zeros(n, n);
    let mut power = 1.0;
    for k in 1..n {
        m[(k - 1, k)] = C64::from_polar(q_number(k, q).max(0.0).sqrt(), power * gamma);
        power *= q;
    }
    FockOperator::from_matrix(m).expect("finite square matrix")
}
