//! Truncated moment problems in the variable `u = r²` and their Gauss measures.
//!
//! Both coherent-state families resolve the identity iff a measure on `u ≥ 0`
//! has moments `μ_n = ε_n!` (times `ρ₀` for Gazeau–Klauder states). Moments are
//! kept as exact rationals: the Hankel factorization is done in exact
//! arithmetic and only the final Jacobi eigenproblem runs in `f64`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::check_deformation;
use crate::error::{QuonError, Result};
use crate::qexp::radius;

/// Largest supported number of quadrature nodes.
pub const MAX_NODES: usize = 8;

/// A finite moment sequence `μ₀ … μ_{K−1}` with an upper bound on the support.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSpec {
    moments: Vec<BigRational>,
    support_hint: f64,
}

fn exact(x: f64) -> Result<BigRational> {
    BigRational::from_float(x).ok_or_else(|| QuonError::domain(format!("{x} is not a finite number")))
}

/// `ε_0!, …, ε_{count−1}!` as exact rationals in the binary value of `q`.
fn exact_factorials(count: usize, q: f64) -> Result<Vec<BigRational>> {
    let q = exact(q)?;
    let mut out = Vec::with_capacity(count);
    let mut fact = BigRational::one();
    let mut eps = BigRational::zero();
    let mut power = BigRational::one();
    for _ in 0..count {
        out.push(fact.clone());
        eps += &power;
        power *= &q;
        fact *= &eps;
    }
    Ok(out)
}

fn check_family(count: usize, q: f64) -> Result<()> {
    check_deformation(q)?;
    if q <= -1.0 {
        return Err(QuonError::domain("moment sequences need q > -1 (ε_2! vanishes at q = -1)"));
    }
    if count == 0 {
        return Err(QuonError::domain("need at least one moment"));
    }
    Ok(())
}

/// `μ_k = ε_k!` for `k < count`.
pub fn moments_nonlinear(count: usize, q: f64) -> Result<MomentSpec> {
    check_family(count, q)?;
    Ok(MomentSpec {
        moments: exact_factorials(count, q)?,
        support_hint: radius(q),
    })
}

/// `μ_k = ρ₀ ε_k!` for `k < count`.
pub fn moments_gk(count: usize, q: f64, rho0: f64) -> Result<MomentSpec> {
    check_family(count, q)?;
    if !(rho0 > 0.0) || !rho0.is_finite() {
        return Err(QuonError::domain(format!("rho0 = {rho0} must be finite and positive")));
    }
    let r = exact(rho0)?;
    Ok(MomentSpec {
        moments: exact_factorials(count, q)?.into_iter().map(|m| m * &r).collect(),
        support_hint: radius(q),
    })
}

impl MomentSpec {
    /// Arbitrary moments, taken exactly from their binary values.
    pub fn new(moments: &[f64], support_hint: f64) -> Result<Self> {
        if moments.is_empty() {
            return Err(QuonError::domain("need at least one moment"));
        }
        let moments = moments.iter().map(|&m| exact(m)).collect::<Result<Vec<_>>>()?;
        if !moments[0].is_positive() {
            return Err(QuonError::domain("mu_0 must be positive"));
        }
        Ok(Self { moments, support_hint })
    }

    pub fn len(&self) -> usize {
        self.moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moments.is_empty()
    }

    pub fn support_hint(&self) -> f64 {
        self.support_hint
    }

    pub fn exact_moments(&self) -> &[BigRational] {
        &self.moments
    }

    pub fn moment(&self, k: usize) -> f64 {
        self.moments[k].to_f64().unwrap_or(f64::NAN)
    }

    pub fn moments(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.moment(k)).collect()
    }

    /// Number of Gauss nodes the sequence determines, `⌊K/2⌋`.
    pub fn max_nodes(&self) -> usize {
        self.moments.len() / 2
    }
}

/// Exact LDLᵀ of the Hankel matrix `[μ_{i+j+shift}]`, rows `0..rows`, pivots `0..size`.
/// Returns `(L, D)` or the first non-positive leading minor.
fn hankel_ldl(
    mu: &[BigRational],
    shift: usize,
    size: usize,
    rows: usize,
    name: &'static str,
) -> Result<(Vec<Vec<BigRational>>, Vec<BigRational>)> {
    let mut l = vec![vec![BigRational::zero(); size]; rows];
    let mut d: Vec<BigRational> = Vec::with_capacity(size);
    for j in 0..size {
        let mut dj = mu[2 * j + shift].clone();
        for k in 0..j {
            dj -= &l[j][k] * &l[j][k] * &d[k];
        }
        if !dj.is_positive() {
            return Err(QuonError::Conditioning {
                matrix: name,
                minor: j + 1,
                sign: if dj.is_zero() { "zero" } else { "negative" },
            });
        }
        l[j][j] = BigRational::one();
        for i in j + 1..rows {
            let mut v = mu[i + j + shift].clone();
            for k in 0..j {
                v -= &l[i][k] * &l[j][k] * &d[k];
            }
            l[i][j] = v / &dj;
        }
        d.push(dj);
    }
    Ok((l, d))
}

/// A finite positive measure `Σ w_i δ(u − u_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Validates equal lengths, strictly increasing nodes and positive weights.
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() || nodes.len() != weights.len() {
            return Err(QuonError::usage(format!(
                "{} nodes but {} weights",
                nodes.len(),
                weights.len()
            )));
        }
        if nodes.windows(2).any(|p| !(p[0] < p[1])) {
            return Err(QuonError::usage("nodes must be strictly increasing"));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(QuonError::usage("weights must be finite and positive"));
        }
        Ok(Self { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ w_i u_i^k`.
    pub fn moment(&self, k: usize) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * u.powi(k as i32))
            .sum()
    }

    /// Largest relative deviation from `spec` over `μ₀ … μ_{2M−1}`.
    pub fn moment_residual(&self, spec: &MomentSpec) -> f64 {
        let top = (2 * self.len()).min(spec.len());
        (0..top)
            .map(|k| {
                let target = spec.moment(k);
                (self.moment(k) - target).abs() / target.abs()
            })
            .fold(0.0, f64::max)
    }
}

/// The `M = ⌊K/2⌋`-node Gauss quadrature of a moment sequence.
///
/// Positivity of `H₀ = [μ_{i+j}]` and `H₁ = [μ_{i+j+1}]` (size `M`) is checked
/// exactly. The three-term recurrence comes from the exact LDLᵀ of `H₀`
/// extended by one row; nodes and weights from the `f64` Jacobi matrix.
pub fn gauss_from_moments(spec: &MomentSpec) -> Result<DiscreteMeasure> {
    let m = spec.max_nodes();
    if m == 0 {
        return Err(QuonError::usage("need at least two moments for one node"));
    }
    if m > MAX_NODES {
        return Err(QuonError::usage(format!(
            "{m} nodes requested; at most {MAX_NODES} are supported"
        )));
    }
    let mu = spec.exact_moments();
    let (l, d) = hankel_ldl(mu, 0, m, m + 1, "H0")?;
    hankel_ldl(mu, 1, m, m, "H1")?;

    let mut jacobi = DMatrix::<f64>::zeros(m, m);
    for j in 0..m {
        let prev = if j == 0 { BigRational::zero() } else { l[j][j - 1].clone() };
        let alpha = &l[j + 1][j] - prev;
        jacobi[(j, j)] = alpha.to_f64().unwrap_or(f64::NAN);
        if j + 1 < m {
            let ratio = (&d[j + 1] / &d[j]).to_f64().unwrap_or(f64::NAN);
            let b = ratio.sqrt();
            jacobi[(j, j + 1)] = b;
            jacobi[(j + 1, j)] = b;
        }
    }
    let eig = SymmetricEigen::new(jacobi);
    let mu0 = spec.moment(0);
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mu0 * v0 * v0)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    DiscreteMeasure::new(nodes, weights)
}

/// Which coherent-state family a measure is meant to resolve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Nonlinear,
    GazeauKlauder { rho0: f64 },
}

/// Diagonal resolution-of-identity check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolutionCheck {
    /// `max_{m,n ≤ M_proj} |⟨φ_m| ∫ |state⟩⟨state| |φ_n⟩ − δ_mn|`.
    pub deviation: f64,
    /// Largest relative moment error over `k ≤ M_proj`.
    pub moment_residual: f64,
    /// `deviation / moment_residual`; the two coincide so this is 1 unless both vanish.
    pub constant: f64,
}

/// After the angular (resp. γ) average only the diagonal survives, and entry
/// `n` equals `Σ_i w_i u_i^n / μ_n`, where `μ_n` is the family's n-th moment.
pub fn verify_resolution(
    measure: &DiscreteMeasure,
    family: Family,
    q: f64,
    m_proj: usize,
) -> Result<ResolutionCheck> {
    if m_proj + 1 > measure.len() {
        return Err(QuonError::usage(format!(
            "a {}-node measure matches moments only to order {}, but M_proj = {m_proj} needs order {}",
            measure.len(),
            2 * measure.len() - 1,
            2 * m_proj
        )));
    }
    let spec = match family {
        Family::Nonlinear => moments_nonlinear(m_proj + 1, q)?,
        Family::GazeauKlauder { rho0 } => moments_gk(m_proj + 1, q, rho0)?,
    };
    let mut deviation = 0.0_f64;
    for n in 0..=m_proj {
        let target = spec.moment(n);
        deviation = deviation.max((measure.moment(n) / target - 1.0).abs());
    }
    let moment_residual = (0..=m_proj)
        .map(|k| (measure.moment(k) - spec.moment(k)).abs() / spec.moment(k))
        .fold(0.0, f64::max);
    let constant = if moment_residual > 0.0 {
        deviation / moment_residual
    } else {
        1.0
    };
    Ok(ResolutionCheck {
        deviation,
        moment_residual,
        constant,
    })
}
