//! Named invariant suite for a single `(q, dim)`.

use std::fmt;

use crate::algebra::{
    annihilator, beta_coeff, creator, hamiltonian_h1, q_number, qmutator_residual, QuonParams, C64,
};
use crate::coherent::{overlap, uncertainty_closed_form, NonlinearCS};
use crate::error::Result;
use crate::gazeau_klauder::{action_radius, b_gamma, GKState};
use crate::intertwining::{identity_checks, PowerIntertwiner};
use crate::moments::{gauss_from_moments, moments_gk, moments_nonlinear, verify_resolution, Family};
use crate::position::{RepParams, WavePolynomial};
use crate::qexp::{q_exponential, radius};

/// Outcome of one invariant.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// Measured residual; `NaN` when the computation itself failed.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub note: Option<String>,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<32} value={:.3e} tol={:.1e}",
            self.name, self.value, self.tolerance
        )?;
        if let Some(note) = &self.note {
            write!(f, " ({note})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn below(&mut self, name: &str, value: Result<f64>, tolerance: f64) {
        self.push(name, value, tolerance, |v| v <= tolerance);
    }

    fn push(&mut self, name: &str, value: Result<f64>, tolerance: f64, ok: impl Fn(f64) -> bool) {
        let check = match value {
            Ok(v) => Check {
                name: name.to_owned(),
                value: v,
                tolerance,
                passed: ok(v),
                note: None,
            },
            Err(e) => Check {
                name: name.to_owned(),
                value: f64::NAN,
                tolerance,
                passed: false,
                note: Some(e.to_string()),
            },
        };
        self.checks.push(check);
    }
}

/// Runs every invariant that is defined at this `q`.
///
/// Checks needing `0 < q < 1` (position representation, power intertwiners
/// with the `q^{−l}` identities) or `q > 0` (moment problems) are skipped
/// outside that range; the `q = 1` closed forms run only at `q = 1`.
pub fn run_suite(params: &QuonParams) -> Report {
    let q = params.q();
    let dim = params.dim();
    let mut r = Report::default();

    algebra_checks(&mut r, params);
    if q > -1.0 {
        coherent_checks(&mut r, q);
    }
    if q > 0.0 {
        gk_checks(&mut r, params);
        moment_checks(&mut r, q);
    }
    if q >= 0.0 {
        intertwining_checks(&mut r, params);
    }
    if q > 0.0 && q < 1.0 {
        position_checks(&mut r, q, dim.min(10));
    }
    if q == 1.0 {
        bosonic_checks(&mut r, params);
    }
    r
}

fn algebra_checks(r: &mut Report, p: &QuonParams) {
    r.below("qmutator_interior", Ok(qmutator_residual(p)), 1e-10);
    let h1 = hamiltonian_h1(p);
    let spectrum = p.spectrum();
    let diag_err = (0..p.dim())
        .map(|n| (h1.entry(n, n).re - spectrum[n]).abs())
        .fold(0.0, f64::max);
    r.below("h1_diagonal_is_q_numbers", Ok(diag_err), 1e-12);
    r.below("h1_self_adjoint", Ok(h1.self_adjoint_defect()), 1e-14);
    let b = annihilator(p);
    let adj = b.adjoint().max_abs_diff_on(&creator(p), p.dim());
    r.below("creator_is_adjoint", Ok(adj), 0.0);
    let rec = (1..p.dim())
        .map(|n| (q_number(n + 1, p.q()) - (1.0 + p.q() * q_number(n, p.q()))).abs())
        .fold(0.0, f64::max);
    r.below("q_number_recursion", Ok(rec), 1e-12);
}

fn coherent_checks(r: &mut Report, q: f64) {
    let s = (0.5 * radius(q)).min(2.0);
    let z = C64::from_polar(s.sqrt(), 0.7);
    let cs = NonlinearCS::build(z, q, 1e-12);
    r.below("cs_eigen_residual", cs.as_ref().map(|c| c.eigen_residual()).map_err(Clone::clone), 1e-8);
    let u = cs.as_ref().map(|c| c.uncertainty()).map_err(Clone::clone);
    r.below(
        "cs_uncertainty_closed_form",
        u.clone().map(|u| (u.product - uncertainty_closed_form(z, q)).abs()),
        1e-8,
    );
    r.below(
        "cs_uncertainty_saturation",
        u.map(|u| (u.product - u.commutator_bound).abs()),
        1e-8,
    );
    let w = C64::from_polar((0.3 * s).sqrt(), -0.4);
    let kernel = (|| {
        let a = NonlinearCS::build(z, q, 1e-14)?;
        let b = NonlinearCS::build(w, q, 1e-14)?;
        Ok((a.inner(&b) - overlap(z, w, q)?).norm())
    })();
    r.below("cs_overlap_kernel", kernel, 1e-10);
}

fn gk_checks(r: &mut Report, p: &QuonParams) {
    let q = p.q();
    let j = (0.5 * action_radius(q)).min(2.0);
    let gamma = 0.8;
    let state = GKState::build(j, gamma, q, 1.0, 1e-12);
    r.below(
        "gk_temporal_stability",
        state.as_ref().map_err(Clone::clone).and_then(|s| s.temporal_stability_residual(1.3)),
        1e-12,
    );
    r.below(
        "gk_action_identity",
        state.as_ref().map(|s| (s.action_expectation() - j).abs()).map_err(Clone::clone),
        1e-8,
    );
    r.below(
        "gk_b_gamma_eigen_residual",
        state.as_ref().map(|s| s.b_gamma_eigen_residual(gamma)).map_err(Clone::clone),
        1e-8,
    );
    let bg = b_gamma(gamma, p);
    let lhs = &bg * &bg.adjoint();
    let b = annihilator(p);
    let rhs = &b * &b.adjoint();
    r.below("gk_b_gamma_bbdagger", Ok(lhs.max_abs_diff_on(&rhs, p.dim() - 1)), 1e-12);
}

fn moment_checks(r: &mut Report, q: f64) {
    let m = 6;
    let run = |family: Family| -> Result<f64> {
        let spec = match family {
            Family::Nonlinear => moments_nonlinear(2 * m, q)?,
            Family::GazeauKlauder { rho0 } => moments_gk(2 * m, q, rho0)?,
        };
        let measure = gauss_from_moments(&spec)?;
        let res = verify_resolution(&measure, family, q, m - 1)?;
        Ok(res.deviation.max(measure.moment_residual(&spec)))
    };
    r.below("moments_nonlinear_resolution", run(Family::Nonlinear), 1e-8);
    r.below("moments_gk_resolution", run(Family::GazeauKlauder { rho0: 1.0 }), 1e-8);
}

fn intertwining_checks(r: &mut Report, p: &QuonParams) {
    for l in 1..=2 {
        if p.dim() <= 2 * (l + 1) {
            continue;
        }
        let pair = PowerIntertwiner::new(l, *p).and_then(|pi| pi.pair());
        r.below(
            &format!("power_l{l}_closed_form"),
            pair.as_ref().map(|pp| pp.closed_form_residual).map_err(Clone::clone),
            1e-10,
        );
        r.below(
            &format!("power_l{l}_intertwining"),
            pair.as_ref().map(|pp| pp.pair.intertwining_defect).map_err(Clone::clone),
            1e-10,
        );
        let inclusion = pair.as_ref().map_err(Clone::clone).map(|pp| {
            if pp.spectrum.included && pp.missing_matches_expected() {
                pp.spectrum.max_mismatch
            } else {
                f64::INFINITY
            }
        });
        r.below(&format!("power_l{l}_spectral_inclusion"), inclusion, 1e-8);
        let ids = identity_checks(l, p);
        match ids {
            Ok(ids) => {
                r.below(&format!("power_l{l}_raising_identity"), Ok(ids.raising), 1e-10);
                if p.q() > 0.0 {
                    r.below(&format!("power_l{l}_lowering_identity"), ids.lowering, 1e-10);
                    r.below(&format!("power_l{l}_number_identity"), ids.number, 1e-10);
                }
            }
            Err(e) => r.below(&format!("power_l{l}_identities"), Err(e), 1e-10),
        }
    }
}

fn position_checks(r: &mut Report, q: f64, count: usize) {
    let gram = (|| {
        let rep = RepParams::new(q, 1.0, 1.0)?;
        let states = WavePolynomial::eigenstates(count, rep)?;
        let mut worst = 0.0_f64;
        for (m, a) in states.iter().enumerate() {
            for (n, b) in states.iter().enumerate() {
                let target = if m == n { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b)? - C64::new(target, 0.0)).norm());
            }
        }
        Ok(worst)
    })();
    r.below("position_gram_identity", gram, 1e-9);
    let consistency = (|| {
        let rep = RepParams::new(q, 1.0, 1.0)?;
        let states = WavePolynomial::eigenstates(count, rep)?;
        let mut worst = 0.0_f64;
        for n in 1..count {
            let expect = states[n - 1].scale(C64::new(beta_coeff(n - 1, q)?, 0.0));
            worst = worst.max(states[n].apply_b().max_coeff_diff(&expect));
        }
        Ok(worst)
    })();
    r.below("position_matrix_consistency", consistency, 1e-9);
}

fn bosonic_checks(r: &mut Report, p: &QuonParams) {
    let eps_err = (0..p.dim())
        .map(|n| (q_number(n, 1.0) - n as f64).abs())
        .fold(0.0, f64::max);
    r.below("bosonic_q_numbers", Ok(eps_err), 0.0);
    let s = 1.7;
    r.below(
        "bosonic_exponential",
        q_exponential(C64::new(s, 0.0), 1.0, 1e-16).map(|v| (v.re - s.exp()).abs() / s.exp()),
        1e-14,
    );
    let prod = NonlinearCS::build(C64::new(1.1, -0.6), 1.0, 1e-12).map(|c| (c.uncertainty().product - 0.5).abs());
    r.below("bosonic_uncertainty", prod, 1e-10);
    for l in 1..=2 {
        if p.dim() <= 2 * l {
            continue;
        }
        let shifted = PowerIntertwiner::new(l, *p).and_then(|pi| {
            let pp = pi.pair()?;
            let target = hamiltonian_h1(p).shift(l as f64);
            Ok(pp.pair.h2.max_abs_diff_on(&target, pi.interior()))
        });
        r.below(&format!("bosonic_h2_shift_l{l}"), shifted, 1e-10);
    }
}
