//! Position-space realization of the quon ladder operators.
//!
//! With `q = e^{2βγ}`, the operators
//!
//! ```text
//! B  = e^{2iβx}/√(1−q) + c₂ e^{iγ d/dx} e^{iβx}
//! B† = e^{−2iβx}/√(1−q) + c₂ e^{−iβx} e^{iγ d/dx},     c₂ = −ν₂/√(1−q)
//! ```
//!
//! satisfy the q-mutator, and `e^{iγ d/dx}` acts as the complex shift
//! `f(x) ↦ f(x + iγ)`. Every eigenfunction is a Gaussian envelope
//!
//! ```text
//! G(x) = (−β/(πγ))^{1/4} exp(βx²/(2γ) − i(3β/2 − ln ν₂/γ) x)
//! ```
//!
//! times a finite trigonometric polynomial `Σ_k d_k e^{ikβx}`. Both ladder
//! operators map that class into itself, so [`WavePolynomial`] stores only the
//! coefficients `d_k` and all operations are exact up to rounding. Overlaps
//! use the closed-form kernel `∫ |G|² e^{i(m−k)βx} dx = q^{(m−k)²/8}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use crate::algebra::{beta_coeff, C64};
use crate::error::{QuonError, Result};

/// Coefficients below this fraction of the largest one are dropped.
pub const PRUNE_RELATIVE: f64 = 1e-15;

/// Parameters `(q, γ, ν₂)` of the position representation, with derived
/// `β = ln q/(2γ)` and `c₂ = −ν₂/√(1−q)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepParams {
    q: f64,
    gamma: f64,
    nu2: f64,
    beta: f64,
    c2: f64,
}

impl RepParams {
    pub fn new(q: f64, gamma: f64, nu2: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QuonError::domain(format!(
                "position representation needs 0 < q < 1, got q = {q}"
            )));
        }
        if !gamma.is_finite() || gamma == 0.0 {
            return Err(QuonError::domain(format!(
                "translation parameter gamma = {gamma} must be finite and nonzero"
            )));
        }
        if !(nu2 > 0.0) || !nu2.is_finite() {
            return Err(QuonError::domain(format!(
                "nu2 = {nu2} must be finite and positive"
            )));
        }
        let beta = q.ln() / (2.0 * gamma);
        Ok(Self {
            q,
            gamma,
            nu2,
            beta,
            c2: -nu2 / (1.0 - q).sqrt(),
        })
    }

    /// The harmonic-oscillator regime `ν₂ = 1`, `β = −γ`, taken with `β > 0`.
    pub fn oscillator_limit(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(QuonError::domain(format!(
                "oscillator limit needs 0 < q < 1, got q = {q}"
            )));
        }
        let gamma = -(-q.ln() / 2.0).sqrt();
        Self::new(q, gamma, 1.0)
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn nu2(&self) -> f64 {
        self.nu2
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    /// `|β/γ|`; larger values localize the eigenfunctions around `x = 0`.
    pub fn dilation_ratio(&self) -> f64 {
        (self.beta / self.gamma).abs()
    }

    /// `(−β/(πγ))^{1/4}`, the envelope's value at `x = 0`.
    pub fn envelope_amplitude(&self) -> f64 {
        (-self.beta / (PI * self.gamma)).powf(0.25)
    }

    pub fn kernel(&self) -> GramKernel {
        GramKernel { q: self.q }
    }

    /// `G(x)`.
    pub fn envelope(&self, x: f64) -> C64 {
        let phase = -(1.5 * self.beta - self.nu2.ln() / self.gamma) * x;
        let modulus = self.envelope_amplitude() * (self.beta * x * x / (2.0 * self.gamma)).exp();
        C64::from_polar(modulus, phase)
    }
}

/// Overlap `g(k, m) = ⟨G e^{ikβx}, G e^{imβx}⟩ = q^{(m−k)²/8}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GramKernel {
    q: f64,
}

impl GramKernel {
    pub fn value(&self, k: i64, m: i64) -> f64 {
        let d = (m - k) as f64;
        self.q.powf(d * d / 8.0)
    }
}

/// `ψ(x) = G(x) Σ_k d_k e^{ikβx}` with finitely many nonzero `d_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct WavePolynomial {
    coeffs: BTreeMap<i64, C64>,
    rep: RepParams,
}

impl WavePolynomial {
    pub fn new(rep: RepParams, coeffs: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, d) in coeffs {
            *map.entry(k).or_insert(C64::new(0.0, 0.0)) += d;
        }
        let mut w = Self { coeffs: map, rep };
        w.prune();
        w
    }

    pub fn zero(rep: RepParams) -> Self {
        Self {
            coeffs: BTreeMap::new(),
            rep,
        }
    }

    /// The envelope itself, `{0 ↦ 1}`.
    pub fn vacuum(rep: RepParams) -> Self {
        Self::new(rep, [(0, C64::new(1.0, 0.0))])
    }

    /// `φ_n = B† φ_{n−1} / β_{n−1}` starting from the vacuum.
    pub fn eigenstate(n: usize, rep: RepParams) -> Result<Self> {
        let mut w = Self::vacuum(rep);
        for k in 0..n {
            let b = beta_coeff(k, rep.q)?;
            if b == 0.0 {
                return Err(QuonError::Degenerate { index: k, q: rep.q });
            }
            w = w.apply_bdagger().scale(C64::new(1.0 / b, 0.0));
        }
        Ok(w)
    }

    /// All eigenstates `φ_0 … φ_{count−1}`, sharing the recursion.
    pub fn eigenstates(count: usize, rep: RepParams) -> Result<Vec<Self>> {
        let mut out = Vec::with_capacity(count);
        let mut w = Self::vacuum(rep);
        for k in 0..count {
            if k > 0 {
                let b = beta_coeff(k - 1, rep.q)?;
                if b == 0.0 {
                    return Err(QuonError::Degenerate { index: k - 1, q: rep.q });
                }
                w = w.apply_bdagger().scale(C64::new(1.0 / b, 0.0));
            }
            out.push(w.clone());
        }
        Ok(out)
    }

    pub fn rep(&self) -> &RepParams {
        &self.rep
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, C64> {
        &self.coeffs
    }

    pub fn coefficient(&self, k: i64) -> C64 {
        self.coeffs.get(&k).copied().unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn prune(&mut self) {
        let max = self.coeffs.values().fold(0.0_f64, |m, d| m.max(d.norm()));
        let cut = max * PRUNE_RELATIVE;
        self.coeffs.retain(|_, d| d.norm() > cut);
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self::new(self.rep, self.coeffs.iter().map(|(&k, &d)| (k, d * factor)))
    }

    fn check_same_rep(&self, other: &Self) -> Result<()> {
        if self.rep != other.rep {
            return Err(QuonError::usage(
                "wave polynomials belong to different representation parameters",
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_rep(other)?;
        Ok(Self::new(
            self.rep,
            self.coeffs.iter().chain(other.coeffs.iter()).map(|(&k, &d)| (k, d)),
        ))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    /// `out_{k+2} += d_k (1 − q^{−k/2})/√(1−q)`.
    pub fn apply_b(&self) -> Self {
        let q = self.rep.q;
        let s = 1.0 / (1.0 - q).sqrt();
        Self::new(
            self.rep,
            self.coeffs
                .iter()
                .map(|(&k, &d)| (k + 2, d * ((1.0 - q.powf(-(k as f64) / 2.0)) * s))),
        )
    }

    /// `out_{k−2} += d_k/√(1−q)`, `out_k −= d_k q^{(1−k)/2}/√(1−q)`.
    pub fn apply_bdagger(&self) -> Self {
        let q = self.rep.q;
        let s = 1.0 / (1.0 - q).sqrt();
        Self::new(
            self.rep,
            self.coeffs.iter().flat_map(|(&k, &d)| {
                [
                    (k - 2, d * s),
                    (k, -d * (q.powf((1.0 - k as f64) / 2.0) * s)),
                ]
            }),
        )
    }

    /// `h1 = B† B`.
    pub fn apply_h1(&self) -> Self {
        self.apply_b().apply_bdagger()
    }

    /// `Σ_{k,m} conj(u_k) v_m q^{(m−k)²/8}`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_same_rep(other)?;
        let kernel = self.rep.kernel();
        let mut acc = C64::new(0.0, 0.0);
        for (&k, &u) in &self.coeffs {
            for (&m, &v) in &other.coeffs {
                acc += u.conj() * v * kernel.value(k, m);
            }
        }
        Ok(acc)
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).map(|z| z.re.max(0.0).sqrt()).unwrap_or(f64::NAN)
    }

    /// `ψ(x)`.
    pub fn evaluate(&self, x: f64) -> C64 {
        let b = self.rep.beta;
        let poly: C64 = self
            .coeffs
            .iter()
            .map(|(&k, &d)| d * C64::from_polar(1.0, k as f64 * b * x))
            .sum();
        self.rep.envelope(x) * poly
    }

    /// Largest coefficientwise modulus of `self − other`.
    pub fn max_coeff_diff(&self, other: &Self) -> f64 {
        let keys: std::collections::BTreeSet<i64> =
            self.coeffs.keys().chain(other.coeffs.keys()).copied().collect();
        keys.into_iter()
            .map(|k| (self.coefficient(k) - other.coefficient(k)).norm())
            .fold(0.0, f64::max)
    }
}

/// Uniform grid `min, …, max` with `points` nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl Grid {
    pub fn new(min: f64, max: f64, points: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite() && min < max) || points < 2 {
            return Err(QuonError::domain(format!(
                "grid [{min}, {max}] with {points} points needs min < max and at least 2 points"
            )));
        }
        Ok(Self { min, max, points })
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let step = (self.max - self.min) / (self.points - 1) as f64;
        (0..self.points).map(move |i| self.min + step * i as f64)
    }
}

/// `(x, ψ(x))` on every grid node.
pub fn sample(w: &WavePolynomial, grid: &Grid) -> Vec<(f64, C64)> {
    grid.nodes().map(|x| (x, w.evaluate(x))).collect()
}

/// Normalized Hermite function `f_n(x) = (2ⁿ n! √π)^{−1/2} H_n(x) e^{−x²/2}`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let f0 = PI.powf(-0.25) * (-x * x / 2.0).exp();
    if n == 0 {
        return f0;
    }
    let mut prev = f0;
    let mut cur = 2.0_f64.sqrt() * x * f0;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Outcome of comparing `φ_n` near `q = 1` with the oscillator eigenfunction.
#[derive(Debug, Clone, Copy)]
pub struct LimitCheck {
    /// Unit-modulus factor `φ_n/f_n` at the grid point where `|f_n|` peaks.
    pub phase: C64,
    /// `max_x |φ_n(x)·conj(phase) − f_n(x)|`.
    pub deviation: f64,
}

/// Compares `φ_n` in the regime `ν₂ = 1`, `β = −γ` with `f_n` after one global
/// phase fit.
pub fn hermite_limit_check(n: usize, q_near_1: f64, grid: &Grid) -> Result<LimitCheck> {
    if !(q_near_1 > 0.99 && q_near_1 < 1.0) {
        return Err(QuonError::domain(format!(
            "limit check needs 0.99 < q < 1, got {q_near_1}"
        )));
    }
    let rep = RepParams::oscillator_limit(q_near_1)?;
    let phi = WavePolynomial::eigenstate(n, rep)?;
    let samples: Vec<(C64, f64)> = grid
        .nodes()
        .map(|x| (phi.evaluate(x), hermite_function(n, x)))
        .collect();
    let (anchor_psi, anchor_f) = samples
        .iter()
        .copied()
        .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
        .expect("grid has at least two points");
    let ratio = anchor_psi / anchor_f;
    let phase = ratio / ratio.norm();
    let deviation = samples
        .iter()
        .map(|&(psi, f)| (psi * phase.conj() - f).norm())
        .fold(0.0, f64::max);
    Ok(LimitCheck { phase, deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn rep(q: f64) -> RepParams {
        RepParams::new(q, 0.8, 1.3).unwrap()
    }

    #[test]
    fn rep_params_validation() {
        assert!(RepParams::new(1.0, 1.0, 1.0).is_err());
        assert!(RepParams::new(0.0, 1.0, 1.0).is_err());
        assert!(RepParams::new(0.5, 0.0, 1.0).is_err());
        assert!(RepParams::new(0.5, 1.0, 0.0).is_err());
        let r = RepParams::new(0.5, -0.7, 2.0).unwrap();
        assert!(r.beta() * r.gamma() < 0.0);
        assert_abs_diff_eq!((2.0 * r.beta() * r.gamma()).exp(), 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(r.c2(), -2.0 / 0.5_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn vacuum_is_annihilated() {
        let r = rep(0.3);
        let v = WavePolynomial::vacuum(r);
        assert_eq!(v.coeffs().len(), 1);
        assert_eq!(v.coefficient(0), C64::new(1.0, 0.0));
        assert!(v.apply_b().is_zero());
        assert_abs_diff_eq!(v.inner(&v).unwrap().re, 1.0, epsilon = 1e-15);
        assert!(v.apply_h1().is_zero());
    }

    #[test]
    fn shift_by_two_example() {
        let r = RepParams::new(0.25, 1.0, 1.0).unwrap();
        let w = WavePolynomial::new(r, [(-2, C64::new(1.0, 0.0))]);
        let out = w.apply_b();
        assert_eq!(out.coeffs().len(), 1);
        assert_abs_diff_eq!(out.coefficient(0).re, 0.75_f64.sqrt(), epsilon = 1e-15);
    }

    #[test]
    fn first_excited_state() {
        let r = RepParams::new(0.25, 1.0, 1.0).unwrap();
        let phi1 = WavePolynomial::vacuum(r).apply_bdagger();
        assert_abs_diff_eq!(phi1.coefficient(-2).re, 1.154_700_538_379_251_5, epsilon = 1e-15);
        assert_abs_diff_eq!(phi1.coefficient(0).re, -0.577_350_269_189_625_8, epsilon = 1e-15);

        let r = rep(0.6);
        let phi1 = WavePolynomial::eigenstate(1, r).unwrap();
        let s = 1.0 / (1.0 - 0.6_f64).sqrt();
        assert_abs_diff_eq!(phi1.coefficient(-2).re, s, epsilon = 1e-14);
        assert_abs_diff_eq!(phi1.coefficient(0).re, -(0.6_f64.sqrt()) * s, epsilon = 1e-14);
    }

    #[test]
    fn second_excited_state_matches_closed_form() {
        let q: f64 = 0.45;
        let r = rep(q);
        let phi2 = WavePolynomial::eigenstate(2, r).unwrap();
        let pre = 1.0 / ((1.0 - q) * (1.0 + q).sqrt());
        assert_abs_diff_eq!(phi2.coefficient(-4).re, pre, epsilon = 1e-13);
        assert_abs_diff_eq!(phi2.coefficient(-2).re, -pre * q.sqrt() * (1.0 + q), epsilon = 1e-13);
        assert_abs_diff_eq!(phi2.coefficient(0).re, pre * q, epsilon = 1e-13);
    }

    #[test]
    fn lowering_first_state() {
        let r = rep(0.7);
        let phi1 = WavePolynomial::eigenstate(1, r).unwrap();
        let phi0 = WavePolynomial::vacuum(r);
        assert!(phi1.apply_b().max_coeff_diff(&phi0) <= 1e-13);
    }

    #[test]
    fn h1_eigenvalues() {
        let r = RepParams::new(0.5, 1.1, 0.9).unwrap();
        let phi1 = WavePolynomial::eigenstate(1, r).unwrap();
        assert!(phi1.apply_h1().max_coeff_diff(&phi1) <= 1e-12);
        let phi2 = WavePolynomial::eigenstate(2, r).unwrap();
        assert!(phi2.apply_h1().max_coeff_diff(&phi2.scale(C64::new(1.5, 0.0))) <= 1e-12);
    }

    #[test]
    fn kernel_examples() {
        let r = RepParams::new(0.25, 1.0, 1.0).unwrap();
        let a = WavePolynomial::new(r, [(0, C64::new(1.0, 0.0))]);
        let b = WavePolynomial::new(r, [(2, C64::new(1.0, 0.0))]);
        assert_abs_diff_eq!(a.inner(&b).unwrap().re, 0.5, epsilon = 1e-15);
        let k = r.kernel();
        assert_eq!(k.value(3, 3), 1.0);
        assert_eq!(k.value(1, 4), k.value(4, 1));
        assert!(k.value(-6, 6) > 0.0 && k.value(-6, 6) < 1.0);
    }

    #[test]
    fn mismatched_reps_are_rejected() {
        let a = WavePolynomial::vacuum(rep(0.3));
        let b = WavePolynomial::vacuum(rep(0.4));
        assert!(matches!(a.inner(&b), Err(QuonError::Usage(_))));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn envelope_at_origin() {
        let r = rep(0.35);
        let v = WavePolynomial::vacuum(r);
        let g0 = v.evaluate(0.0);
        assert_abs_diff_eq!(g0.re, r.envelope_amplitude(), epsilon = 1e-15);
        assert_abs_diff_eq!(g0.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn evaluate_is_linear() {
        let r = rep(0.55);
        let u = WavePolynomial::new(r, [(0, C64::new(0.3, 1.0)), (-2, C64::new(-1.0, 0.2))]);
        let v = WavePolynomial::new(r, [(-2, C64::new(0.5, 0.5)), (4, C64::new(0.0, -2.0))]);
        let a = C64::new(0.7, -0.4);
        let combo = u.scale(a).add(&v).unwrap();
        for x in [-2.0, -0.3, 0.0, 1.7] {
            let lhs = combo.evaluate(x);
            let rhs = a * u.evaluate(x) + v.evaluate(x);
            assert!((lhs - rhs).norm() <= 1e-14);
        }
    }

    #[test]
    fn hermite_functions_match_explicit_forms() {
        for x in [-2.5, -0.4, 0.0, 1.1, 3.0] {
            let g = (-x * x / 2.0_f64).exp();
            assert_abs_diff_eq!(hermite_function(1, x), (4.0 / PI).powf(0.25) * x * g, epsilon = 1e-15);
            assert_abs_diff_eq!(
                hermite_function(2, x),
                (1.0 / (4.0 * PI)).powf(0.25) * (2.0 * x * x - 1.0) * g,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn limit_check_rejects_q_far_from_one() {
        let grid = Grid::new(-4.0, 4.0, 201).unwrap();
        assert!(hermite_limit_check(0, 0.9, &grid).is_err());
        assert!(hermite_limit_check(0, 1.0, &grid).is_err());
    }

    #[test]
    fn grid_nodes() {
        let g = Grid::new(-4.0, 4.0, 201).unwrap();
        let nodes: Vec<f64> = g.nodes().collect();
        assert_eq!(nodes.len(), 201);
        assert_eq!(nodes[0], -4.0);
        assert_abs_diff_eq!(nodes[100], 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(nodes[200], 4.0, epsilon = 1e-14);
        assert!(Grid::new(1.0, 0.0, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }
}
