//! Non-linear coherent states
//! `Φ_z = N(|z|²)^{−1/2} Σ_k z^k/√(ε_k!) φ_k`, eigenvectors of `B`.

use crate::algebra::{check_deformation, lower, raise, vdot, vec_norm, C64};
use crate::error::{QuonError, Result};
use crate::qexp::{q_exponential, radius, TruncatedSeries};

/// Labels must satisfy `|z|² ≤ BOUNDARY_MARGIN · ρ`.
pub const BOUNDARY_MARGIN: f64 = 0.999;

/// Relative accuracy used for the closed-form overlap kernel.
const KERNEL_TOL: f64 = 1e-16;

pub(crate) fn check_label(modulus_sq: f64, q: f64, what: &str) -> Result<()> {
    let limit = BOUNDARY_MARGIN * radius(q);
    if !modulus_sq.is_finite() || modulus_sq > limit {
        return Err(QuonError::domain(format!(
            "{what} = {modulus_sq} exceeds {BOUNDARY_MARGIN}/(1-q) = {limit} for q = {q}"
        )));
    }
    Ok(())
}

/// A non-linear coherent state truncated to `M` Fock components.
#[derive(Debug, Clone)]
pub struct NonlinearCS {
    z: C64,
    q: f64,
    coeffs: Vec<C64>,
    dropped_mass: f64,
}

/// Spreads of the quadratures `X`, `P` in a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Uncertainty {
    pub dx: f64,
    pub dp: f64,
    pub product: f64,
    /// `|⟨−i/2 [X, P]⟩|`, the Heisenberg lower bound for `ΔX ΔP`.
    pub commutator_bound: f64,
}

impl NonlinearCS {
    /// Builds `Φ_z`, keeping enough components that the dropped part of the
    /// state has norm at most `tol` (so the dropped share of `N(|z|²)` is at
    /// most `tol²`).
    pub fn build(z: C64, q: f64, tol: f64) -> Result<Self> {
        check_deformation(q)?;
        if !(tol > 0.0 && tol < 1.0) {
            return Err(QuonError::domain(format!("tolerance {tol} must lie in (0, 1)")));
        }
        let s = z.norm_sqr();
        check_label(s, q, "|z|^2")?;
        let series = TruncatedSeries::new(s, q, tol * tol)?;
        let m = series.len();

        let mut coeffs = Vec::with_capacity(m);
        let mut c = C64::new(1.0, 0.0);
        let mut eps = 0.0;
        let mut power = 1.0;
        for _ in 0..m {
            coeffs.push(c);
            eps += power;
            power *= q;
            c = c * z / f64::sqrt(eps);
        }
        let norm = vec_norm(&coeffs);
        for c in &mut coeffs {
            *c /= norm;
        }
        Ok(Self {
            z,
            q,
            coeffs,
            dropped_mass: series.tail_bound / series.sum,
        })
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Number of Fock components kept.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    /// Certified bound on the fraction of `N(|z|²)` that was dropped.
    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.coeffs)
    }

    /// Coefficients padded with one zero so ladder actions are exact.
    fn padded(&self) -> Vec<C64> {
        let mut v = self.coeffs.clone();
        v.push(C64::new(0.0, 0.0));
        v
    }

    /// `‖B Φ_z − z Φ_z‖` in the Fock space of dimension `M + 1`.
    pub fn eigen_residual(&self) -> f64 {
        let v = self.padded();
        let bv = lower(self.q, &v);
        let diff: Vec<C64> = bv.iter().zip(&v).map(|(b, c)| b - self.z * c).collect();
        vec_norm(&diff)
    }

    pub fn uncertainty(&self) -> Uncertainty {
        quadrature_spread(self.q, &self.padded())
    }

    /// `⟨Φ_z, Φ_w⟩` from the stored coefficients.
    pub fn inner(&self, other: &Self) -> C64 {
        let n = self.coeffs.len().min(other.coeffs.len());
        vdot(&self.coeffs[..n], &other.coeffs[..n])
    }
}

/// `ΔX`, `ΔP` and `|⟨−i/2 [X,P]⟩|` for a normalized vector whose last component
/// is zero, so that `B` and `B†` act without truncation loss.
pub(crate) fn quadrature_spread(q: f64, v: &[C64]) -> Uncertainty {
    let bv = lower(q, v);
    let bdv = raise(q, v);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let xv: Vec<C64> = bv.iter().zip(&bdv).map(|(a, b)| (a + b) * s).collect();
    let pv: Vec<C64> = bv
        .iter()
        .zip(&bdv)
        .map(|(a, b)| (a - b) * C64::new(0.0, -s))
        .collect();
    let mean_x = vdot(v, &xv).re;
    let mean_p = vdot(v, &pv).re;
    let dx = (vdot(&xv, &xv).re - mean_x * mean_x).max(0.0).sqrt();
    let dp = (vdot(&pv, &pv).re - mean_p * mean_p).max(0.0).sqrt();
    // ⟨[X,P]⟩ = 2i Im⟨Xv, Pv⟩, so ⟨−i/2 [X,P]⟩ = Im⟨Xv, Pv⟩.
    let commutator_bound = vdot(&xv, &pv).im.abs();
    Uncertainty {
        dx,
        dp,
        product: dx * dp,
        commutator_bound,
    }
}

/// `½(1 + |z|²(q − 1))`.
pub fn uncertainty_closed_form(z: C64, q: f64) -> f64 {
    0.5 * (1.0 + z.norm_sqr() * (q - 1.0))
}

/// `⟨Φ_z, Φ_w⟩ = N(z w̄)/√(N(|z|²) N(|w|²))`.
pub fn overlap(z: C64, w: C64, q: f64) -> Result<C64> {
    check_deformation(q)?;
    check_label(z.norm_sqr(), q, "|z|^2")?;
    check_label(w.norm_sqr(), q, "|w|^2")?;
    if q == 1.0 {
        return Ok((z.conj() * w - 0.5 * (z.norm_sqr() + w.norm_sqr())).exp());
    }
    let cross = q_exponential(z.conj() * w, q, KERNEL_TOL)?;
    let nz = q_exponential(C64::new(z.norm_sqr(), 0.0), q, KERNEL_TOL)?.re;
    let nw = q_exponential(C64::new(w.norm_sqr(), 0.0), q, KERNEL_TOL)?.re;
    Ok(cross / (nz * nw).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn vacuum_label() {
        let cs = NonlinearCS::build(C64::new(0.0, 0.0), 0.4, 1e-12).unwrap();
        assert_eq!(cs.coeffs(), &[C64::new(1.0, 0.0)]);
        assert_eq!(cs.eigen_residual(), 0.0);
        let u = cs.uncertainty();
        assert_abs_diff_eq!(u.product, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn normalized_and_ratio() {
        let cs = NonlinearCS::build(C64::new(1.0, 0.0), 0.5, 1e-12).unwrap();
        assert_abs_diff_eq!(cs.norm(), 1.0, epsilon = 1e-14);
        let c = cs.coeffs();
        assert_abs_diff_eq!((c[1] / c[0]).re, 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!((c[2] / c[1]).re, 1.0 / 1.5_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn eigen_residual_examples() {
        let cs = NonlinearCS::build(C64::new(1.2, 0.0), 0.5, 1e-12).unwrap();
        assert!(cs.eigen_residual() <= 1e-8);
        let cs = NonlinearCS::build(C64::new(2.0, 0.0), 1.0, 1e-12).unwrap();
        assert!(cs.eigen_residual() <= 1e-8);
    }

    #[test]
    fn label_outside_disc_is_rejected() {
        assert!(matches!(
            NonlinearCS::build(C64::new(1.5, 0.0), 0.5, 1e-12),
            Err(QuonError::Domain(_))
        ));
        // 0.9995 ρ is inside the disc but beyond the safety margin.
        let z = C64::new((0.9995 * 2.0_f64).sqrt(), 0.0);
        assert!(NonlinearCS::build(z, 0.5, 1e-12).is_err());
        assert!(overlap(C64::new(0.1, 0.0), C64::new(2.0, 0.0), 0.5).is_err());
    }

    #[test]
    fn uncertainty_closed_forms() {
        let cs = NonlinearCS::build(C64::new(0.6, 0.8), 0.5, 1e-12).unwrap();
        let u = cs.uncertainty();
        assert_abs_diff_eq!(u.product, 0.25, epsilon = 1e-10);
        assert_abs_diff_eq!(u.dx, u.dp, epsilon = 1e-10);
        for z in [C64::new(0.3, -1.1), C64::new(2.5, 0.4)] {
            let u = NonlinearCS::build(z, 1.0, 1e-12).unwrap().uncertainty();
            assert_abs_diff_eq!(u.product, 0.5, epsilon = 1e-10);
        }
    }

    #[test]
    fn overlap_examples() {
        let z = C64::new(0.7, 0.2);
        assert_abs_diff_eq!(overlap(z, z, 0.6).unwrap().re, 1.0, epsilon = 1e-14);
        let n = q_exponential(C64::new(z.norm_sqr(), 0.0), 0.6, 1e-16).unwrap().re;
        let o = overlap(z, C64::new(0.0, 0.0), 0.6).unwrap();
        assert_abs_diff_eq!(o.re, 1.0 / n.sqrt(), epsilon = 1e-14);
        assert_abs_diff_eq!(o.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_fermionic_point() {
        assert!(NonlinearCS::build(C64::new(0.0, 0.0), -1.0, 1e-12).is_ok());
        assert!(matches!(
            NonlinearCS::build(C64::new(0.2, 0.0), -1.0, 1e-12),
            Err(QuonError::Degenerate { .. })
        ));
    }
}
