//! Gauss–Legendre quadrature with rule doubling.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Initial number of nodes for [`integrate_doubling`].
pub const START_NODES: usize = 32;
/// Largest rule tried by [`integrate_doubling`].
pub const MAX_NODES: usize = 512;
/// Convergence threshold on the largest componentwise change.
pub const TOLERANCE: f64 = 1e-10;

/// Nodes and weights of the `n`-point rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut deriv = 1.0;
            for _ in 0..100 {
                // three-term recurrence for P_n(x) and P_n'(x)
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                let pn = if n == 0 { 1.0 } else if n == 1 { x } else { p1 };
                let pm = if n == 1 { 1.0 } else { p0 };
                deriv = nf * (x * pn - pm) / (x * x - 1.0);
                let dx = pn / deriv;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on_interval(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }
}

/// Integrates a vector-valued `f` over `[a, b]` with 32, 64, … nodes until two
/// successive rules agree to [`TOLERANCE`] in every component.
///
/// Returns the integral and the number of nodes of the accepted rule.
pub fn integrate_doubling<F>(a: f64, b: f64, mut f: F) -> Result<(Vec<f64>, usize)>
where
    F: FnMut(f64) -> Result<Vec<f64>>,
{
    let mut rule = |n: usize| -> Result<Vec<f64>> {
        let gl = GaussLegendre::new(n);
        let mut acc: Vec<f64> = Vec::new();
        for (x, w) in gl.on_interval(a, b) {
            let v = f(x)?;
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (s, y) in acc.iter_mut().zip(v) {
                *s += w * y;
            }
        }
        Ok(acc)
    };
    let mut n = START_NODES;
    let mut prev = rule(n)?;
    let mut change = f64::INFINITY;
    while n < MAX_NODES {
        n *= 2;
        let cur = rule(n)?;
        change = prev
            .iter()
            .zip(&cur)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        prev = cur;
        if change < TOLERANCE {
            return Ok((prev, n));
        }
    }
    Err(Error::Quadrature { change })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_nodes_symmetric() {
        for n in [1usize, 2, 5, 32, 64, 512] {
            let gl = GaussLegendre::new(n);
            let s: f64 = gl.weights.iter().sum();
            assert!((s - 2.0).abs() < 1e-13, "n={n}: {s}");
            for i in 0..n {
                assert!((gl.nodes[i] + gl.nodes[n - 1 - i]).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn exact_for_polynomials() {
        let gl = GaussLegendre::new(5);
        // degree 9 integrates exactly
        let v: f64 = gl.on_interval(0.0, 2.0).map(|(x, w)| w * x.powi(9)).sum();
        assert!((v - 2f64.powi(10) / 10.0).abs() < 1e-11);
    }

    #[test]
    fn two_point_rule_nodes() {
        let gl = GaussLegendre::new(2);
        assert!((gl.nodes[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15);
        assert!((gl.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn doubling_converges_on_smooth_integrand() {
        let (v, n) = integrate_doubling(0.0, 1.0, |x| Ok(vec![x.exp(), (3.0 * x).cos()])).unwrap();
        assert!((v[0] - (1f64.exp() - 1.0)).abs() < 1e-13);
        assert!((v[1] - 3f64.sin() / 3.0).abs() < 1e-13);
        assert_eq!(n, 64);
    }

    #[test]
    fn doubling_reports_failure() {
        let r = integrate_doubling(0.0, 1.0, |x| Ok(vec![(x - 0.5).abs().sqrt()]));
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }
}
