//! Tree function, the root family `ζ_ℓ(q; α)` and related special functions.
//!
//! `T(z) = Σ n^{n-1} z^n / n!` is the inverse of `t ↦ t e^{-t}` on the closed
//! disc `|z| ≤ e^{-1}`, with `T(e^{-1}) = 1`. It equals `-W(-z)` for the
//! principal Lambert W branch.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{E, PI};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// `e^{-1}`, the radius of convergence of the tree function series.
pub const INV_E: f64 = 0.367_879_441_171_442_33;

/// Slack allowed beyond `|z| = e^{-1}` before a domain error is raised.
pub const DOMAIN_SLACK: f64 = 1e-12;

const SERIES_RADIUS: f64 = 0.25;
const BRANCH_ZONE: f64 = 0.3;
const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 50;

/// Largest `n` for which [`tree_polynomial`] uses exact rational arithmetic.
pub const TREE_POLY_EXACT_MAX: usize = 300;
/// Default cap on the index of [`tree_polynomial`].
pub const TREE_POLY_CAP: usize = 2000;

/// Partial sum of the tree function series with `terms` terms.
fn tree_series(z: Complex64, terms: usize) -> Complex64 {
    // c_{k+1}/c_k = ((k+1)/k)^{k-1} for c_k = k^{k-1}/k!
    let mut term = z;
    let mut sum = z;
    for k in 1..terms {
        let kf = k as f64;
        term = term * z * ((kf + 1.0) / kf).powi(k as i32 - 1);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Puiseux expansion of `T` at the branch point, `w = 1 - e z`.
fn branch_seed(w: Complex64) -> Complex64 {
    let p = (w * 2.0).sqrt();
    let one = Complex64::new(1.0, 0.0);
    one - p + p * p / 3.0 - p * p * p * (11.0 / 72.0) + p * p * p * p * (43.0 / 540.0)
}

/// Principal branch of the tree function on `|z| ≤ e^{-1}`.
pub fn tree_fn(z: Complex64) -> Result<Complex64> {
    let r = z.norm();
    if !r.is_finite() || r > INV_E + DOMAIN_SLACK {
        return Err(Error::Domain("tree function needs |z| <= 1/e"));
    }
    if r == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if r <= SERIES_RADIUS {
        return Ok(tree_series(z, 400));
    }
    let w = Complex64::new(1.0, 0.0) - z * E;
    if w.norm() < 1e-15 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let mut t = if w.norm() < BRANCH_ZONE {
        branch_seed(w)
    } else {
        tree_series(z, 12)
    };
    let residual = |t: Complex64| (t * (-t).exp() - z).norm();
    let mut best = t;
    let mut best_res = residual(t);
    for _ in 0..NEWTON_MAX_ITER {
        // Newton on t e^{-t} - z, written as (t - z e^t) / (1 - t).
        let step = (t - z * t.exp()) / (Complex64::new(1.0, 0.0) - t);
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        t -= step;
        let res = residual(t);
        if res < best_res {
            best = t;
            best_res = res;
        }
        if step.norm() <= NEWTON_TOL * t.norm().max(1e-300) {
            break;
        }
    }
    Ok(best)
}

/// `T'(z) = T / (z (1 - T))`, with the series limit `1` at `z = 0`.
pub fn tree_fn_deriv(z: Complex64, t: Complex64) -> Result<Complex64> {
    if (t - Complex64::new(1.0, 0.0)).norm() < 1e-15 {
        return Err(Error::Singular("tree function derivative at z = 1/e"));
    }
    if z.norm() < 1e-300 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    Ok(t / (z * (Complex64::new(1.0, 0.0) - t)))
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha.is_finite() && alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain("load factor must lie in (0, 1)"))
    }
}

/// `R = (e^{α-1}/α)^b`, the largest `|q|` for which every `ζ_ℓ(q)` is defined.
pub fn root_radius(b: usize, alpha: f64) -> f64 {
    ((alpha - 1.0).exp() / alpha).powi(b as i32)
}

/// The real root `q* > 1` of `q^b = e^{αb(q-1)}`, i.e. of `ln q = α (q - 1)`.
///
/// It is the nearest pole outside the unit disc of the profile and overflow
/// generating functions and does not depend on `b`.
pub fn pole_radius(alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let g = |q: f64| q.ln() - alpha * (q - 1.0);
    // g > 0 on (1, 1/α], negative far out.
    let mut lo = 1.0 / alpha;
    let mut hi = 2.0 * lo;
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Radius of the circle used for coefficient extraction: halfway between the
/// unit circle and the nearer of `q*` and `R`.
pub fn analyticity_radius(b: usize, alpha: f64) -> Result<f64> {
    let q_star = pole_radius(alpha)?;
    let big_r = root_radius(b, alpha);
    Ok(1.0 + 0.5 * (q_star - 1.0).min(big_r - 1.0))
}

/// The `b` numbers `ζ_ℓ(q; α) = T(ω^ℓ α e^{-α} q^{1/b}) / α`, `ℓ = 0..b`.
///
/// `q^{1/b}` is the principal root (argument in `(-π/b, π/b]`). For `|q| ≤ 1`
/// these are the roots in the closed unit disc of `ζ^b = e^{αb(ζ-1)} q`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootFamily {
    pub b: usize,
    pub alpha: f64,
    pub q: Complex64,
    pub roots: Vec<Complex64>,
}

impl RootFamily {
    /// Coefficients of `Π_ℓ (t - ζ_ℓ)`, lowest degree first (length `b + 1`).
    pub fn monic_poly(&self) -> Vec<Complex64> {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &root in &self.roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * root;
            }
            coeffs = next;
        }
        coeffs
    }

    /// Elementary symmetric functions `e_0..=e_b` of the roots.
    pub fn elementary_symmetric(&self) -> Vec<Complex64> {
        let poly = self.monic_poly();
        let b = self.b;
        (0..=b)
            .map(|k| {
                let c = poly[b - k];
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .collect()
    }

    /// `Π_ℓ (t - ζ_ℓ)` evaluated directly.
    pub fn product_at(&self, t: Complex64) -> Complex64 {
        self.roots
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &z| acc * (t - z))
    }

    /// Largest `|ζ^b - e^{αb(ζ-1)} q|` over the family.
    pub fn max_residual(&self) -> f64 {
        let b = self.b as f64;
        self.roots
            .iter()
            .map(|&z| (z.powu(self.b as u32) - ((z - 1.0) * (self.alpha * b)).exp() * self.q).norm())
            .fold(0.0, f64::max)
    }
}

/// Builds the root family `ζ_0(q), …, ζ_{b-1}(q)` for `|q| ≤ R`.
pub fn zeta_roots(b: usize, alpha: f64, q: Complex64) -> Result<RootFamily> {
    if b == 0 {
        return Err(Error::Domain("bucket size must be positive"));
    }
    check_alpha(alpha)?;
    let big_r = root_radius(b, alpha);
    let qn = q.norm();
    if !qn.is_finite() || qn > big_r * (1.0 + 1e-12) {
        return Err(Error::Domain("|q| exceeds the root radius (e^(a-1)/a)^b"));
    }
    let base = alpha * (-alpha).exp();
    let root_q = if qn == 0.0 {
        Complex64::new(0.0, 0.0)
    } else if q.im == 0.0 && q.re > 0.0 {
        Complex64::new(q.re.powf(1.0 / b as f64), 0.0)
    } else {
        Complex64::from_polar(qn.powf(1.0 / b as f64), q.arg() / b as f64)
    };
    let is_one = q == Complex64::new(1.0, 0.0);
    let mut roots = Vec::with_capacity(b);
    for l in 0..b {
        if l == 0 && is_one {
            roots.push(Complex64::new(1.0, 0.0));
            continue;
        }
        let omega = Complex64::from_polar(1.0, 2.0 * PI * l as f64 / b as f64);
        let mut arg = omega * root_q * base;
        let an = arg.norm();
        if an > INV_E {
            arg *= INV_E / an;
        }
        roots.push(tree_fn(arg)? / alpha);
    }
    Ok(RootFamily { b, alpha, q, roots })
}

/// Ramanujan's generalized Q-function
/// `Q_r(m, n) = Σ_{k=0}^{n} C(k+r, k) n^{(k)} / m^k` with falling factorials.
pub fn ramanujan_q(r: u32, m: u64, n: u64) -> f64 {
    let mf = m as f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..n {
        let kf = k as f64;
        term *= (kf + 1.0 + r as f64) / (kf + 1.0) * ((n - k) as f64) / mf;
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Value of the tree polynomial `t_n(y) = n! [z^n] (1 - T(z))^{-y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TreePolyValue {
    pub n: usize,
    /// `t_n(y) / n^n` (with `0^0 = 1`).
    pub scaled: f64,
    /// Exact value, present when `n ≤ TREE_POLY_EXACT_MAX`.
    pub exact: Option<BigRational>,
}

/// `t_0(y), …, t_n(y)` as exact rationals. `y` is taken as the exact dyadic
/// rational it represents.
///
/// With `y = p/s` and `u_j = s^j t_j(y)` (an integer), the power rule for
/// `(1 - T)^{-y}` gives
/// `u_n = (1/n) Σ_{k=1}^{n} (ns - (s-p)k) C(n,k) (ks)^{k-1} u_{n-k}`.
pub fn tree_polynomials_exact(n: usize, y: f64) -> Result<Vec<BigRational>> {
    if n > TREE_POLY_CAP {
        return Err(Error::CapExceeded {
            what: "tree polynomial index",
            value: n as u64,
            cap: TREE_POLY_CAP as u64,
        });
    }
    let yr = BigRational::from_float(y).ok_or(Error::Domain("tree polynomial needs finite y"))?;
    let p = yr.numer().clone();
    let s = yr.denom().clone();
    let mut u: Vec<BigInt> = Vec::with_capacity(n + 1);
    u.push(BigInt::one());
    // (k s)^{k-1} for k = 1..=n
    let pow_ks: Vec<BigInt> = (0..=n)
        .map(|k| {
            if k == 0 {
                BigInt::zero()
            } else {
                num_traits::pow(BigInt::from(k) * &s, k - 1)
            }
        })
        .collect();
    for j in 1..=n {
        let mut binom = BigInt::one();
        let mut acc = BigInt::zero();
        for k in 1..=j {
            binom = binom * BigInt::from(j - k + 1) / BigInt::from(k);
            let factor = BigInt::from(j) * &s - (&s - &p) * BigInt::from(k);
            acc += factor * &binom * &pow_ks[k] * &u[j - k];
        }
        u.push(acc / BigInt::from(j));
    }
    Ok(u
        .into_iter()
        .enumerate()
        .map(|(j, uj)| BigRational::new(uj, num_traits::pow(s.clone(), j)))
        .collect())
}

fn log_factorials(n: usize) -> Vec<f64> {
    let mut lf = vec![0.0; n + 1];
    for i in 2..=n {
        lf[i] = lf[i - 1] + (i as f64).ln();
    }
    lf
}

/// Neumaier-compensated accumulator.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// `t_j(y) / j^j` for `j = 0..=n` in floating point.
pub fn tree_polynomials_scaled(n: usize, y: f64) -> Result<Vec<f64>> {
    if n > TREE_POLY_CAP {
        return Err(Error::CapExceeded {
            what: "tree polynomial index",
            value: n as u64,
            cap: TREE_POLY_CAP as u64,
        });
    }
    let lf = log_factorials(n);
    let ln = |k: usize| if k == 0 { 0.0 } else { (k as f64).ln() };
    let mut s = vec![1.0];
    for j in 1..=n {
        let mut acc = CompensatedSum::default();
        for k in 1..=j {
            // C(j,k) k^{k-1} (j-k)^{j-k} / j^j
            let log_w = lf[j] - lf[k] - lf[j - k]
                + (k as f64 - 1.0) * ln(k)
                + (j - k) as f64 * ln(j - k)
                - j as f64 * ln(j);
            let factor = j as f64 - (1.0 - y) * k as f64;
            acc.add(factor * log_w.exp() * s[j - k]);
        }
        s.push(acc.value() / j as f64);
    }
    Ok(s)
}

/// Tree polynomial `t_n(y)`: exact for `n ≤ 300`, compensated floating point
/// (scaled by `n^n`) up to the cap.
pub fn tree_polynomial(n: usize, y: f64) -> Result<TreePolyValue> {
    if n <= TREE_POLY_EXACT_MAX {
        let exact = tree_polynomials_exact(n, y)?.pop().expect("non-empty");
        let nn = BigRational::from_integer(BigInt::from(num_traits::pow(BigUint::from(n.max(1)), n)));
        let nn = if n == 0 { BigRational::one() } else { nn };
        let scaled = (&exact / &nn).to_f64().unwrap_or(f64::NAN);
        Ok(TreePolyValue {
            n,
            scaled,
            exact: Some(exact),
        })
    } else {
        let scaled = *tree_polynomials_scaled(n, y)?.last().expect("non-empty");
        Ok(TreePolyValue {
            n,
            scaled,
            exact: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(z: Complex64) -> f64 {
        let t = tree_fn(z).unwrap();
        (t * (-t).exp() - z).norm()
    }

    #[test]
    fn tree_fn_fixed_points() {
        assert_eq!(tree_fn(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        assert!((tree_fn(c(INV_E, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let z = 0.3 * (-0.3f64).exp();
        assert!((tree_fn(c(z, 0.0)).unwrap() - c(0.3, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn tree_fn_negative_real_matches_bisection() {
        let z = -0.5 * (-0.5f64).exp();
        // bisection of t e^{-t} - z on (-1, 0)
        let f = |t: f64| t * (-t).exp() - z;
        let (mut lo, mut hi) = (-1.0, 0.0);
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = tree_fn(c(z, 0.0)).unwrap();
        assert!((t.re - lo).abs() < 1e-13, "{} vs {}", t.re, lo);
        assert!(t.im.abs() < 1e-14);
    }

    #[test]
    fn tree_fn_rejects_outside_disc() {
        assert!(matches!(tree_fn(c(0.4, 0.0)), Err(Error::Domain(_))));
        assert!(tree_fn(c(INV_E + 1e-13, 0.0)).is_ok());
    }

    #[test]
    fn tree_fn_residual_on_grid() {
        for ri in 1..=40 {
            let r = (INV_E - 1e-9) * ri as f64 / 40.0;
            for ai in 0..72 {
                let z = Complex64::from_polar(r, 2.0 * PI * ai as f64 / 72.0);
                let res = residual(z);
                assert!(res <= 1e-12 * z.norm() + 1e-14, "z={z} res={res}");
                assert!(tree_fn(z).unwrap().norm() <= 1.0 + 1e-9);
            }
        }
    }

    #[test]
    fn tree_fn_matches_long_series_inside() {
        for &z in &[c(0.3, 0.1), c(-0.33, 0.0), c(0.0, 0.35), c(0.2, -0.25)] {
            let newton = tree_fn(z).unwrap();
            let series = tree_series(z, 5000);
            assert!((newton - series).norm() < 1e-10, "{z}: {newton} vs {series}");
        }
    }

    #[test]
    fn tree_fn_near_branch_point() {
        for &eps in &[1e-3, 1e-6, 1e-9, 1e-12] {
            let z = c(INV_E * (1.0 - eps), 0.0);
            assert!(residual(z) <= 1e-12 * INV_E + 1e-14);
            let t = tree_fn(z).unwrap();
            assert!(t.re < 1.0 && t.re > 1.0 - 2.0 * (2.0 * eps).sqrt());
        }
    }

    #[test]
    fn tree_fn_deriv_values() {
        assert_eq!(tree_fn_deriv(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let z = 0.2 * (-0.2f64).exp();
        let d = tree_fn_deriv(c(z, 0.0), c(0.2, 0.0)).unwrap();
        assert!((d.re - 0.2 / (z * 0.8)).abs() < 1e-14);
        assert!(tree_fn_deriv(c(INV_E, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn tree_fn_deriv_finite_difference() {
        let z = c(0.1, 0.0);
        let h = 1e-6;
        let t = tree_fn(z).unwrap();
        let fd = (tree_fn(z + h).unwrap() - tree_fn(z - h).unwrap()) / (2.0 * h);
        let d = tree_fn_deriv(z, t).unwrap();
        assert!((fd - d).norm() < 1e-6);
    }

    #[test]
    fn zeta_roots_at_one_starts_with_one() {
        for b in 1..8 {
            let fam = zeta_roots(b, 0.7, c(1.0, 0.0)).unwrap();
            assert_eq!(fam.roots[0], c(1.0, 0.0));
            assert!(fam.max_residual() < 1e-10);
        }
    }

    #[test]
    fn zeta_roots_b1_newton_oracle() {
        // ζ e^{-ζ α}... solve x e^{-x} = 0.8 * 0.5 e^{-0.5} with x = αζ by Newton.
        let target = 0.8 * 0.5 * (-0.5f64).exp();
        let mut x = 0.3;
        for _ in 0..100 {
            x -= (x * (-x).exp() - target) / ((1.0 - x) * (-x).exp());
        }
        let fam = zeta_roots(1, 0.5, c(0.8, 0.0)).unwrap();
        assert!((fam.roots[0].re - x / 0.5).abs() < 1e-13);
    }

    #[test]
    fn zeta_roots_b2_second_root_by_bisection() {
        // ζ² = e^{ζ-1} on (-1, 0)
        let f = |z: f64| z * z - (z - 1.0).exp();
        let (mut lo, mut hi) = (-1.0, 0.0);
        assert!(f(lo) > 0.0 && f(hi) < 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let fam = zeta_roots(2, 0.5, c(1.0, 0.0)).unwrap();
        assert!((fam.roots[1].re - lo).abs() < 1e-12);
        assert!(fam.roots[1].im.abs() < 1e-14);
    }

    #[test]
    fn zeta_roots_domain() {
        let r = root_radius(3, 0.6);
        assert!(r > 1.0);
        assert!(zeta_roots(3, 0.6, c(r, 0.0)).is_ok());
        assert!(zeta_roots(3, 0.6, c(r * 1.01, 0.0)).is_err());
        assert!(zeta_roots(3, 1.0, c(0.5, 0.0)).is_err());
        assert!(zeta_roots(0, 0.5, c(0.5, 0.0)).is_err());
    }

    #[test]
    fn zeta_roots_at_zero() {
        let fam = zeta_roots(4, 0.5, c(0.0, 0.0)).unwrap();
        assert!(fam.roots.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn zeta_roots_continuous_along_arc() {
        let (b, alpha) = (5, 0.6);
        let mut prev = zeta_roots(b, alpha, Complex64::from_polar(0.8, -0.5)).unwrap();
        for i in 1..=200 {
            let theta = -0.5 + i as f64 * 0.005;
            let q = Complex64::from_polar(0.8, theta);
            let cur = zeta_roots(b, alpha, q).unwrap();
            for l in 0..b {
                // |dζ/dq| = |ζ / (b q (1 - αζ))| ≤ 1 / (b·0.8·(1-α)) on this arc
                let bound = 0.8 * 0.005 / (b as f64 * 0.8 * (1.0 - alpha)) * 1.5;
                assert!((cur.roots[l] - prev.roots[l]).norm() <= bound);
            }
            prev = cur;
        }
    }

    #[test]
    fn elementary_symmetric_matches_expansion() {
        let fam = zeta_roots(3, 0.4, c(0.7, 0.2)).unwrap();
        let e = fam.elementary_symmetric();
        let z = &fam.roots;
        assert!((e[1] - (z[0] + z[1] + z[2])).norm() < 1e-14);
        assert!((e[2] - (z[0] * z[1] + z[0] * z[2] + z[1] * z[2])).norm() < 1e-14);
        assert!((e[3] - z[0] * z[1] * z[2]).norm() < 1e-14);
        let t = c(0.3, -0.1);
        let poly = fam.monic_poly();
        let val = poly.iter().rev().fold(c(0.0, 0.0), |acc, &k| acc * t + k);
        assert!((val - fam.product_at(t)).norm() < 1e-14);
    }

    #[test]
    fn radius_b1_half() {
        let q_star = pole_radius(0.5).unwrap();
        assert!((q_star.ln() - 0.5 * (q_star - 1.0)).abs() < 1e-12);
        assert!(q_star > 2.0);
        let r = analyticity_radius(1, 0.5).unwrap();
        let big_r = (-0.5f64).exp() / 0.5;
        assert!(r > 1.0 && r < big_r);
        assert!(analyticity_radius(2, 0.9).unwrap() > 1.0);
        let near_one = analyticity_radius(1, 0.999).unwrap();
        assert!(near_one > 1.0 && near_one < 1.001);
    }

    #[test]
    fn ramanujan_q_values() {
        assert_eq!(ramanujan_q(0, 7, 0), 1.0);
        assert_eq!(ramanujan_q(0, 1, 1), 2.0);
        // direct summation
        let mut direct = 0.0;
        let mut ff = 1.0;
        for k in 0..=5u32 {
            direct += ff / 10f64.powi(k as i32);
            ff *= (5 - k) as f64;
        }
        let q = ramanujan_q(0, 10, 5);
        assert!((q - direct).abs() < 1e-14 && q > 1.0);
        for m in 1..30u64 {
            assert!(ramanujan_q(0, m + 1, 7) < ramanujan_q(0, m, 7));
        }
    }

    #[test]
    fn tree_polynomial_small_cases() {
        let t0 = tree_polynomial(0, 2.5).unwrap();
        assert_eq!(t0.exact.unwrap(), BigRational::one());
        let t1 = tree_polynomial(1, 2.5).unwrap();
        assert_eq!(t1.exact.unwrap(), BigRational::from_float(2.5).unwrap());
        // (1 - T)^{-1} is the EGF of n^n
        for n in 0..12 {
            let v = tree_polynomial(n, 1.0).unwrap();
            assert_eq!(v.exact.unwrap(), BigRational::from_integer(BigInt::from(n.max(1)).pow(n as u32)));
        }
    }

    #[test]
    fn tree_polynomial_scaled_agrees_with_exact() {
        let exact = tree_polynomials_exact(120, 2.0).unwrap();
        let scaled = tree_polynomials_scaled(120, 2.0).unwrap();
        for n in [1usize, 10, 50, 120] {
            let nn = BigRational::from_integer(BigInt::from(n).pow(n as u32));
            let e = (&exact[n] / nn).to_f64().unwrap();
            assert!((e - scaled[n]).abs() < 1e-12 * e, "n={n}: {e} vs {}", scaled[n]);
        }
    }
}
