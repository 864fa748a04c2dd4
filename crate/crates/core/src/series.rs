//! Truncated complex power series and local expansions of the root family.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

/// Evaluates `Σ c_k x^k` by Horner's rule.
pub fn eval(coeffs: &[Complex64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

/// Cauchy product truncated to `len` coefficients.
pub fn mul_trunc(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); len];
    for (i, &x) in a.iter().enumerate().take(len) {
        for (j, &y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Taylor coefficients `u_0..u_order` of one branch `ζ(q)` of
/// `ζ^b = e^{αb(ζ-1)} q` about `q0`, given its value `zeta0 = ζ(q0)`.
///
/// Uses `b q (1 - αζ) ζ' = ζ`. With `w = ζ - (α/2) ζ²` the equation reads
/// `b q w' = ζ`, which gives one new coefficient per step.
pub fn zeta_taylor(b: usize, alpha: f64, q0: Complex64, zeta0: Complex64, order: usize) -> Vec<Complex64> {
    let bf = b as f64;
    let mut u = vec![zeta0];
    let mut w = vec![zeta0 - zeta0 * zeta0 * (alpha / 2.0)];
    let lead = Complex64::new(1.0, 0.0) - zeta0 * alpha;
    for k in 0..order {
        let kf = k as f64;
        let w_next = (u[k] / bf - w[k] * kf) / (q0 * (kf + 1.0));
        let mut cross = Complex64::new(0.0, 0.0);
        for i in 1..=k {
            cross += u[i] * u[k + 1 - i];
        }
        let u_next = (w_next + cross * (alpha / 2.0)) / lead;
        u.push(u_next);
        w.push(w_next);
    }
    u
}

/// `(e^x - 1)/x`, using the series when `|x|` is small.
pub fn expm1_over_x(x: Complex64) -> Complex64 {
    if x.norm() < 1e-2 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..20 {
            term = term * x / k as f64;
            sum += term;
        }
        sum
    } else {
        (x.exp() - 1.0) / x
    }
}
