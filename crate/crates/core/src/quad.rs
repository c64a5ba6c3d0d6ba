//! Gauss–Legendre quadrature: node/weight generation by Newton refinement of
//! the Legendre recurrence, plus composite panel integrators for finite
//! intervals and for half-line integrands with exponentially decaying tails.

use crate::error::{Error, Result};

/// Legendre polynomial P_n and its derivative at x, by the three-term
/// recurrence (n+1)P_{n+1} = (2n+1)x P_n − n P_{n−1}.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 1..n {
        let p_next = ((2 * k + 1) as f64 * x * p - k as f64 * p_prev) / (k + 1) as f64;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess, then Newton.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss–Legendre integral of `f` over [a, b] with `panels` equal
/// panels of `nodes_per_panel` points each.
pub fn integrate_panels<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    panels: usize,
    nodes_per_panel: usize,
) -> f64 {
    let (nodes, weights) = gauss_legendre(nodes_per_panel);
    let width = (b - a) / panels as f64;
    let half = 0.5 * width;
    let mut total = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * width;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            acc += w * f(mid + half * x);
        }
        total += half * acc;
    }
    total
}

/// Integral of `f` over [0, ∞) for integrands that eventually decay
/// exponentially. Unit-width panels of `nodes_per_panel` Gauss–Legendre
/// points are accumulated until `consecutive_quiet` panels in a row each
/// contribute less than `tail_rel` of the running absolute mass.
pub fn integrate_half_line<F: FnMut(f64) -> f64>(
    mut f: F,
    nodes_per_panel: usize,
    tail_rel: f64,
    max_panels: usize,
) -> Result<f64> {
    let (nodes, weights) = gauss_legendre(nodes_per_panel);
    let consecutive_quiet = 3;
    let mut total = 0.0;
    let mut abs_total = 0.0;
    let mut quiet = 0;
    for p in 0..max_panels {
        let mid = p as f64 + 0.5;
        let mut acc = 0.0;
        let mut abs_acc = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            let v = f(mid + 0.5 * x);
            acc += w * v;
            abs_acc += w * v.abs();
        }
        total += 0.5 * acc;
        abs_total += 0.5 * abs_acc;
        if 0.5 * abs_acc <= tail_rel * abs_total.max(f64::MIN_POSITIVE) {
            quiet += 1;
            if quiet >= consecutive_quiet {
                return Ok(total);
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Quadrature(format!(
        "half-line tail not negligible after {max_panels} unit panels"
    )))
}
