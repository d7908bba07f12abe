//! Reference computations shared by the integration tests.

#![allow(dead_code)]

use quon::C64;

/// Trapezoid rule on a window wide enough that Gaussian tails are below 1e-30.
pub fn integrate(f: impl Fn(f64) -> C64, half_width: f64, points: usize) -> C64 {
    let h = 2.0 * half_width / (points - 1) as f64;
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..points {
        let x = -half_width + h * i as f64;
        let w = if i == 0 || i == points - 1 { 0.5 } else { 1.0 };
        acc += f(x) * w;
    }
    acc * h
}

/// Gauss–Laguerre nodes by Newton iteration on `L_M` from the three-term
/// recurrence, weights `x_i / ((M+1)² L_{M+1}(x_i)²)`.
pub fn laguerre_gauss(m: usize) -> (Vec<f64>, Vec<f64>) {
    let eval = |n: usize, x: f64| -> (f64, f64) {
        // (L_n(x), L_{n−1}(x))
        let (mut prev, mut cur) = (1.0, 1.0 - x);
        if n == 0 {
            return (1.0, 0.0);
        }
        for k in 1..n {
            let kf = k as f64;
            let next = ((2.0 * kf + 1.0 - x) * cur - kf * prev) / (kf + 1.0);
            prev = cur;
            cur = next;
        }
        (cur, prev)
    };
    let mut nodes = Vec::with_capacity(m);
    for i in 0..m {
        // Standard initial guesses for Laguerre roots.
        let mut x = if i == 0 {
            3.0 / (1.0 + 2.4 * m as f64)
        } else if i == 1 {
            nodes[0] + 15.0 / (1.0 + 2.5 * m as f64)
        } else {
            let ai = (i - 1) as f64;
            nodes[i - 1] + (1.0 + 2.55 * ai) / (1.9 * ai) * (nodes[i - 1] - nodes[i - 2])
        };
        for _ in 0..100 {
            let (l, lm1) = eval(m, x);
            let deriv = m as f64 * (l - lm1) / x;
            let dx = l / deriv;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs() {
                break;
            }
        }
        nodes.push(x);
    }
    let weights = nodes
        .iter()
        .map(|&x| {
            let (l_next, _) = eval(m + 1, x);
            x / (((m + 1) as f64).powi(2) * l_next * l_next)
        })
        .collect();
    (nodes, weights)
}

