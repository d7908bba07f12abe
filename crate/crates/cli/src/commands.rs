use std::io::{self, Write};
use std::path::{Path, PathBuf};

use quon::coherent::uncertainty_closed_form;
use quon::intertwining::identity_checks;
use quon::moments::{gauss_from_moments, moments_gk, moments_nonlinear, verify_resolution, Family};
use quon::position::{sample, Grid};
use quon::verify::run_suite;
use quon::{
    qmutator_residual, GKState, NonlinearCS, PowerIntertwiner, QuonError, QuonParams, RepParams, WavePolynomial, C64,
};
use serde_json::Value;

use crate::output::{complex, fmt_f64, int, num, nums, object, write_csv, write_json};
use crate::{FamilyArg, Format};

pub const EXIT_INVALID: u8 = 2;
pub const EXIT_FAILED: u8 = 3;

/// Largest Gauss-measure moment error accepted by `moments`.
const MOMENT_TOL: f64 = 1e-8;
/// Largest resolution-of-identity deviation accepted by `moments`.
const RESOLUTION_TOL: f64 = 1e-6;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn failed(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_FAILED,
            message: message.into(),
        }
    }
}

impl From<QuonError> for Failure {
    fn from(e: QuonError) -> Self {
        let code = match e {
            QuonError::Domain(_)
            | QuonError::Degenerate { .. }
            | QuonError::Divergence { .. }
            | QuonError::Usage(_) => EXIT_INVALID,
            QuonError::NoConvergence { .. }
            | QuonError::PremiseViolation { .. }
            | QuonError::NotInvertible { .. }
            | QuonError::Conditioning { .. } => EXIT_FAILED,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::failed(format!("output error: {e}"))
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self::failed(format!("output error: {e}"))
    }
}

type Outcome = Result<(), Failure>;

pub fn spectrum(q: f64, dim: usize, format: Format, out: Option<&Path>) -> Outcome {
    let params = QuonParams::new(q, dim)?;
    let eps = params.spectrum();
    let residual = qmutator_residual(&params);
    match format {
        Format::Csv => {
            write_csv(
                out,
                &["n", "eps"],
                eps.iter().enumerate().map(|(n, &e)| vec![n.to_string(), fmt_f64(e)]),
            )?;
            eprintln!("qmutator_residual={}", fmt_f64(residual));
        }
        Format::Json => write_json(
            out,
            &object([
                ("q", num(q)),
                ("dim", int(dim)),
                ("eps", nums(&eps)),
                ("qmutator_residual", num(residual)),
            ]),
        )?,
    }
    Ok(())
}

pub fn wave(q: f64, n: usize, gamma: f64, nu2: f64, grid: (f64, f64, usize), out: Option<&Path>) -> Outcome {
    let rep = RepParams::new(q, gamma, nu2)?;
    let grid = Grid::new(grid.0, grid.1, grid.2)?;
    let phi = WavePolynomial::eigenstate(n, rep)?;
    let rows = sample(&phi, &grid)
        .into_iter()
        .map(|(x, v)| vec![fmt_f64(x), fmt_f64(v.re), fmt_f64(v.im), fmt_f64(v.norm_sqr())]);
    write_csv(out, &["x", "re", "im", "abs2"], rows)?;
    Ok(())
}

pub fn cs_nonlinear(q: f64, z_re: f64, z_im: f64, tol: f64, out: Option<&Path>) -> Outcome {
    let z = C64::new(z_re, z_im);
    let cs = NonlinearCS::build(z, q, tol)?;
    let u = cs.uncertainty();
    write_json(
        out,
        &object([
            ("z", complex(z.re, z.im)),
            ("q", num(q)),
            ("M", int(cs.truncation())),
            ("norm", num(cs.norm())),
            ("eigen_residual", num(cs.eigen_residual())),
            ("dx", num(u.dx)),
            ("dp", num(u.dp)),
            ("product", num(u.product)),
            ("product_closed_form", num(uncertainty_closed_form(z, q))),
        ]),
    )?;
    Ok(())
}

pub fn cs_gk(q: f64, j: f64, gamma: f64, rho0: f64, t: f64, tol: f64, out: Option<&Path>) -> Outcome {
    let state = GKState::build(j, gamma, q, rho0, tol)?;
    let stability = state.temporal_stability_residual(t)?;
    write_json(
        out,
        &object([
            ("J", num(j)),
            ("gamma", num(gamma)),
            ("q", num(q)),
            ("rho0", num(rho0)),
            ("M", int(state.truncation())),
            ("norm", num(state.norm())),
            ("action_expectation", num(state.action_expectation())),
            ("stability_residual", num(stability)),
            ("bgamma_residual", num(state.b_gamma_eigen_residual(gamma))),
        ]),
    )?;
    Ok(())
}

pub fn intertwine(q: f64, dim: usize, l: usize, out: Option<&Path>) -> Outcome {
    let params = QuonParams::new(q, dim)?;
    let pp = PowerIntertwiner::new(l, params)?.pair()?;
    let ids = identity_checks(l, &params)?;
    let optional = |r: &quon::Result<f64>| r.as_ref().map_or(Value::Null, |&v| num(v));
    write_json(
        out,
        &object([
            ("l", int(l)),
            ("q", num(q)),
            ("dim", int(dim)),
            ("closed_form_residual", num(pp.closed_form_residual)),
            (
                "spectral_inclusion",
                Value::Bool(pp.spectrum.included && pp.missing_matches_expected()),
            ),
            ("missing_eigenvalues", nums(&pp.spectrum.missing)),
            (
                "identity_residuals",
                object([
                    ("eq55b", optional(&ids.lowering)),
                    ("eq56", optional(&ids.number)),
                    ("eq57", num(ids.raising)),
                ]),
            ),
        ]),
    )?;
    Ok(())
}

pub struct MomentsArgs {
    pub q: f64,
    pub m: usize,
    pub family: FamilyArg,
    pub rho0: f64,
    pub m_proj: Option<usize>,
    pub format: Format,
    pub summary: Option<PathBuf>,
}

pub fn moments(args: MomentsArgs, out: Option<&Path>) -> Outcome {
    let MomentsArgs {
        q,
        m,
        family,
        rho0,
        m_proj,
        format,
        summary,
    } = args;
    if m == 0 {
        return Err(Failure::invalid("--m must be at least 1"));
    }
    let (family, spec) = match family {
        FamilyArg::Nonlinear => (Family::Nonlinear, moments_nonlinear(2 * m, q)?),
        FamilyArg::Gk => (Family::GazeauKlauder { rho0 }, moments_gk(2 * m, q, rho0)?),
    };
    let measure = gauss_from_moments(&spec)?;
    let m_proj = m_proj.unwrap_or(m - 1);
    let check = verify_resolution(&measure, family, q, m_proj)?;
    let moment_residual = measure.moment_residual(&spec);
    let passed = moment_residual <= MOMENT_TOL && check.deviation <= RESOLUTION_TOL;
    let summary_json = object([
        ("q", num(q)),
        ("M", int(m)),
        (
            "family",
            Value::String(match family {
                Family::Nonlinear => "nonlinear".into(),
                Family::GazeauKlauder { .. } => "gk".into(),
            }),
        ),
        ("rho0", num(if matches!(family, Family::Nonlinear) { 1.0 } else { rho0 })),
        ("support_hint", num(spec.support_hint())),
        ("moment_residual", num(moment_residual)),
        ("m_proj", int(m_proj)),
        ("resolution_deviation", num(check.deviation)),
        ("resolution_constant", num(check.constant)),
        ("passed", Value::Bool(passed)),
    ]);
    match format {
        Format::Csv => {
            let rows = measure
                .nodes()
                .iter()
                .zip(measure.weights())
                .enumerate()
                .map(|(i, (&u, &w))| vec![i.to_string(), fmt_f64(u), fmt_f64(w)]);
            write_csv(out, &["i", "node", "weight"], rows)?;
            match summary {
                Some(path) => write_json(Some(&path), &summary_json)?,
                None => eprintln!("{}", serde_json::to_string(&summary_json).expect("serializable")),
            }
        }
        Format::Json => write_json(
            out,
            &object([
                ("nodes", nums(measure.nodes())),
                ("weights", nums(measure.weights())),
                ("summary", summary_json),
            ]),
        )?,
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::failed(format!(
            "verification failed: moment residual {} (tol {MOMENT_TOL:e}), resolution deviation {} (tol {RESOLUTION_TOL:e})",
            fmt_f64(moment_residual),
            fmt_f64(check.deviation)
        )))
    }
}

pub fn verify(q: f64, dim: usize, out: Option<&Path>) -> Outcome {
    let params = QuonParams::new(q, dim)?;
    let report = run_suite(&params);
    let mut w = crate::output::open(out)?;
    for check in &report.checks {
        writeln!(w, "{check}")?;
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    writeln!(w, "{} of {} checks passed", report.checks.len() - failed, report.checks.len())?;
    w.flush()?;
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::failed(format!("{failed} invariant check(s) failed")))
    }
}
