//! The q-exponential `N(s) = Σ s^k / ε_k!` and tail-certified truncation of
//! its series, shared by both coherent-state families.

use crate::algebra::{check_deformation, q_number, C64};
use crate::error::{QuonError, Result};

/// Hard cap on the number of series terms any builder will generate.
pub const MAX_TERMS: usize = 1_000_000;

/// Convergence radius `lim ε_{k+1} = 1/(1−q)`; infinite at `q = 1`.
pub fn radius(q: f64) -> f64 {
    if q >= 1.0 {
        f64::INFINITY
    } else {
        1.0 / (1.0 - q)
    }
}

/// Lower bound on `ε_j` over all `j ≥ n`.
fn eps_floor(n: usize, q: f64) -> f64 {
    if q >= 1.0 {
        n as f64
    } else if q >= 0.0 {
        q_number(n, q)
    } else {
        (1.0 - q.abs().powi(n.min(i32::MAX as usize) as i32)) / (1.0 - q)
    }
}

/// Bound on `Σ_{j>k} |t_j|` given `|t_{k+1}|`, using `|t_{j+1}/t_j| = |s|/ε_{j+1}`.
fn tail_bound(next_term: f64, modulus: f64, k: usize, q: f64) -> f64 {
    if next_term == 0.0 {
        return 0.0;
    }
    let ratio = modulus / eps_floor(k + 2, q);
    if ratio < 1.0 {
        next_term / (1.0 - ratio)
    } else {
        f64::INFINITY
    }
}

fn check_inside(modulus: f64, q: f64) -> Result<()> {
    let r = radius(q);
    if modulus >= r {
        return Err(QuonError::Divergence { modulus, radius: r });
    }
    Ok(())
}

/// `N(s)` summed until the certified remainder is at most `tol·|N(s)|`.
///
/// At `q = 1` this is the ordinary exponential.
pub fn q_exponential(s: C64, q: f64, tol: f64) -> Result<C64> {
    check_deformation(q)?;
    if s == C64::new(0.0, 0.0) {
        return Ok(C64::new(1.0, 0.0));
    }
    if q == 1.0 {
        return Ok(s.exp());
    }
    let modulus = s.norm();
    check_inside(modulus, q)?;

    let mut sum = C64::new(0.0, 0.0);
    let mut term = C64::new(1.0, 0.0);
    let mut eps = 0.0;
    let mut power = 1.0;
    for k in 0..MAX_TERMS {
        sum += term;
        eps += power;
        power *= q;
        if eps == 0.0 {
            return Err(QuonError::Degenerate { index: k, q });
        }
        term = term * s / eps;
        if tail_bound(term.norm(), modulus, k, q) <= tol * sum.norm() {
            return Ok(sum);
        }
    }
    Err(QuonError::NoConvergence {
        max_terms: MAX_TERMS,
    })
}

/// Leading terms `t_k = s^k/ε_k!` of `N(s)` for real `s ≥ 0`, cut where the
/// certified remainder is at most `mass_tol · Σ t_k`.
#[derive(Debug, Clone)]
pub struct TruncatedSeries {
    pub terms: Vec<f64>,
    pub sum: f64,
    pub tail_bound: f64,
}

impl TruncatedSeries {
    pub fn new(s: f64, q: f64, mass_tol: f64) -> Result<Self> {
        check_deformation(q)?;
        if !(s >= 0.0) || !s.is_finite() {
            return Err(QuonError::domain(format!(
                "series argument {s} must be finite and non-negative"
            )));
        }
        if s == 0.0 {
            return Ok(Self {
                terms: vec![1.0],
                sum: 1.0,
                tail_bound: 0.0,
            });
        }
        check_inside(s, q)?;

        let mut terms = Vec::new();
        let mut sum = 0.0;
        let mut term = 1.0;
        let mut eps = 0.0;
        let mut power = 1.0;
        for k in 0..MAX_TERMS {
            terms.push(term);
            sum += term;
            eps += power;
            power *= q;
            if eps == 0.0 {
                return Err(QuonError::Degenerate { index: k, q });
            }
            term = term * s / eps;
            if !sum.is_finite() {
                return Err(QuonError::domain(format!(
                    "series at s = {s} overflows double precision"
                )));
            }
            let tail = tail_bound(term, s, k, q);
            if tail <= mass_tol * sum {
                return Ok(Self {
                    terms,
                    sum,
                    tail_bound: tail,
                });
            }
        }
        Err(QuonError::NoConvergence {
            max_terms: MAX_TERMS,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}
