//! The infinite Poisson model: every bucket independently receives
//! `Poisson(bα)` keys. Probability generating functions, closed-form moments
//! and numeric coefficient extraction.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::pmf::{Pmf, Provenance};
use crate::quadrature::integrate_doubling;
use crate::series::{self, expm1_over_x, zeta_taylor};
use crate::specialfn::{pole_radius, root_radius, zeta_roots, RootFamily};

/// Below this `|q - 1|` the overflow and profile PGFs use the series of
/// `(q^b - e^{αb(q-1)}) / (q - 1)`.
const RATIO_SERIES_ZONE: f64 = 1e-2;
const RATIO_SERIES_TERMS: usize = 40;
/// Upper limit for the local expansion of the root family near `q = 1`.
const TAYLOR_ZONE: f64 = 1e-3;
const TAYLOR_ORDER: usize = 20;
/// Relative slack on radius checks.
const RADIUS_SLACK: f64 = 1e-9;
/// Largest imaginary part tolerated in an extracted coefficient.
pub const IMAG_RESIDUAL: f64 = 1e-9;
/// Largest contour size chosen by [`AnalyticContext::contour_points`].
pub const MAX_CONTOUR_POINTS: usize = 1 << 17;

/// Statistics with a closed-form PGF in the Poisson model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    /// Profile `H`: keys that probe a given bucket.
    H,
    /// Overflow `Q` from a given bucket.
    Q,
    /// Final occupancy `Y = min(H, b)`.
    Y,
    /// Length of a block (cluster) in buckets.
    B,
    /// Length of the block containing a given bucket.
    Bhat,
    /// Full buckets inspected by an unsuccessful search.
    U,
    /// Keys inspected by an unsuccessful search.
    Ukeys,
    /// Robin Hood displacement of a new key.
    DRh,
    /// Keys ahead of a new key in the Robin Hood order, `C = bD + (rest)`.
    C,
    /// Keys in the home bucket that win over a new key under Robin Hood.
    V,
    /// FCFS displacement of a random key.
    DFcfs,
}

impl Statistic {
    pub const ALL: [Statistic; 11] = [
        Statistic::H,
        Statistic::Q,
        Statistic::Y,
        Statistic::B,
        Statistic::Bhat,
        Statistic::U,
        Statistic::Ukeys,
        Statistic::DRh,
        Statistic::C,
        Statistic::V,
        Statistic::DFcfs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::H => "H",
            Statistic::Q => "Q",
            Statistic::Y => "Y",
            Statistic::B => "B",
            Statistic::Bhat => "Bhat",
            Statistic::U => "U",
            Statistic::Ukeys => "Ukeys",
            Statistic::DRh => "D_RH",
            Statistic::C => "C",
            Statistic::V => "V",
            Statistic::DFcfs => "D_FCFS",
        }
    }

    pub fn from_name(name: &str) -> Option<Statistic> {
        Statistic::ALL
            .iter()
            .copied()
            .find(|s| s.name().eq_ignore_ascii_case(name))
    }
}

/// Load factor `α`, bucket size `b` and the quantities every formula needs.
#[derive(Debug, Clone)]
pub struct AnalyticContext {
    pub b: usize,
    pub alpha: f64,
    /// `ζ_ℓ(1; α)` for `ℓ = 0..b`; `zeta1[0] = 1`.
    pub zeta1: Vec<Complex64>,
    /// `T_0(bα)`, the probability that a bucket is not full.
    pub t0: f64,
    /// Contour radius for coefficient extraction.
    pub radius: f64,
    /// Real pole `q* > 1` of the overflow PGF.
    pub q_star: f64,
    /// `R = (e^{α-1}/α)^b`.
    pub root_radius: f64,
    family1: RootFamily,
    /// Taylor coefficients of each `ζ_ℓ(q)` about `q = 1`.
    taylor1: Vec<Vec<Complex64>>,
    taylor_zone: f64,
    sum_inv: f64,
    sum_block: f64,
    sum_keys: f64,
}

impl AnalyticContext {
    pub fn new(b: usize, alpha: f64) -> Result<Self> {
        if b == 0 {
            return Err(Error::Domain("bucket size must be positive"));
        }
        if !(alpha.is_finite() && alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain("load factor must lie in (0, 1)"));
        }
        let one = Complex64::new(1.0, 0.0);
        let family1 = zeta_roots(b, alpha, one)?;
        let zeta1 = family1.roots.clone();
        let prod: Complex64 = zeta1[1..].iter().fold(one, |acc, &z| acc * (one - z));
        let t0 = b as f64 * (1.0 - alpha) / prod.re;
        let q_star = pole_radius(alpha)?;
        let big_r = root_radius(b, alpha);
        let radius = 1.0 + 0.5 * (q_star - 1.0).min(big_r - 1.0);
        let taylor1 = zeta1
            .iter()
            .map(|&z| zeta_taylor(b, alpha, one, z, TAYLOR_ORDER))
            .collect();
        let mut sum_inv = 0.0;
        let mut sum_block = 0.0;
        let mut sum_keys = 0.0;
        for &z in &zeta1[1..] {
            let d = (one - z) * (one - z * alpha);
            sum_inv += (one / (one - z)).re;
            sum_block += (z / d).re;
            sum_keys += ((one - z * (2.0 * alpha)) / d).re;
        }
        Ok(AnalyticContext {
            b,
            alpha,
            zeta1,
            t0,
            radius,
            q_star,
            root_radius: big_r,
            family1,
            taylor1,
            taylor_zone: TAYLOR_ZONE.min(0.1 * (big_r - 1.0)),
            sum_inv,
            sum_block,
            sum_keys,
        })
    }

    fn bf(&self) -> f64 {
        self.b as f64
    }

    fn check_radius(&self, q: Complex64, limit: f64) -> Result<()> {
        if !(q.re.is_finite() && q.im.is_finite()) || q.norm() > limit * (1.0 + RADIUS_SLACK) {
            Err(Error::Domain("argument outside the analyticity radius"))
        } else {
            Ok(())
        }
    }

    /// Radius of the disc on which [`Self::psi_u_keys`] is defined, `R^{1/b}`.
    pub fn keys_root_radius(&self) -> f64 {
        self.root_radius.powf(1.0 / self.bf())
    }

    /// Contour radius used for `Ũ`.
    pub fn keys_radius(&self) -> f64 {
        1.0 + 0.5 * (self.keys_root_radius() - 1.0)
    }

    /// `(q - 1) / (q^b - e^{αb(q-1)})`.
    fn overflow_ratio(&self, q: Complex64) -> Result<Complex64> {
        let h = q - 1.0;
        let ab = self.alpha * self.bf();
        if h.norm() < RATIO_SERIES_ZONE {
            // g(h) = Σ_{j≥1} (C(b,j) - (αb)^j/j!) h^{j-1}
            let mut binom = 1.0;
            let mut pow = 1.0;
            let mut g = Complex64::new(0.0, 0.0);
            let mut hp = Complex64::new(1.0, 0.0);
            for j in 1..=RATIO_SERIES_TERMS {
                let jf = j as f64;
                binom = if j <= self.b {
                    binom * (self.bf() - jf + 1.0) / jf
                } else {
                    0.0
                };
                pow *= ab / jf;
                g += hp * (binom - pow);
                hp *= h;
            }
            Ok(g.inv())
        } else {
            let den = q.powu(self.b as u32) - (h * ab).exp();
            if den.norm() == 0.0 {
                return Err(Error::Singular("pole of the overflow PGF"));
            }
            Ok(h / den)
        }
    }

    fn product_shifted(&self, q: Complex64) -> Complex64 {
        self.zeta1[1..]
            .iter()
            .fold(Complex64::new(1.0, 0.0), |acc, &z| acc * (q - z))
    }

    /// `E q^Q` for the overflow `Q` from a bucket.
    pub fn psi_q(&self, q: Complex64) -> Result<Complex64> {
        self.check_radius(q, self.radius)?;
        Ok(self.overflow_ratio(q)? * self.product_shifted(q) * self.t0)
    }

    /// `E q^H` for the profile `H = X + Q_{-1}`.
    pub fn psi_h(&self, q: Complex64) -> Result<Complex64> {
        Ok(((q - 1.0) * (self.alpha * self.bf())).exp() * self.psi_q(q)?)
    }

    pub fn mean_q(&self) -> f64 {
        1.0 / (2.0 * (1.0 - self.alpha)) - (1.0 + self.alpha) * self.bf() / 2.0 + self.sum_inv
    }

    pub fn mean_h(&self) -> f64 {
        1.0 / (2.0 * (1.0 - self.alpha)) - (1.0 - self.alpha) * self.bf() / 2.0 + self.sum_inv
    }

    /// `P(Y = k)` for `k = 0..=b`.
    pub fn prob_y(&self, k: usize) -> Result<f64> {
        if k > self.b {
            return Err(Error::Domain("occupancy cannot exceed the bucket size"));
        }
        if k == self.b {
            return Ok(1.0 - self.t0);
        }
        let poly = self.family1.monic_poly();
        Ok(-self.t0 * poly[k].re)
    }

    /// Law of `Y` as a vector of length `b + 1`.
    pub fn pmf_y(&self) -> Result<Vec<f64>> {
        (0..=self.b).map(|k| self.prob_y(k)).collect()
    }

    /// `T_d(bα)`: probability that a bucket has more than `d` empty slots.
    pub fn t_d(&self, d: usize) -> Result<f64> {
        if d >= self.b {
            return Err(Error::Domain("d must be below the bucket size"));
        }
        let mut s = 0.0;
        for k in 0..self.b - d {
            s += self.prob_y(k)?;
        }
        Ok(s)
    }

    /// Probability of no overflow from a bucket, `e^{bα} T_{b-1}(bα) = ψ_Q(0)`.
    pub fn prob_no_overflow(&self) -> Result<f64> {
        let via_t = (self.alpha * self.bf()).exp() * self.t_d(self.b - 1)?;
        let via_psi = self.psi_q(Complex64::new(0.0, 0.0))?.re;
        let difference = (via_t - via_psi).abs();
        if difference > 1e-10 {
            return Err(Error::Identity {
                what: "no-overflow probability",
                difference,
            });
        }
        Ok(via_t)
    }

    /// `E q^V`, `V` uniform on `{0, …, X_0}` with `X_0 ~ Poisson(bα)` size-biased.
    pub fn psi_v(&self, q: Complex64) -> Result<Complex64> {
        if !(q.re.is_finite() && q.im.is_finite()) {
            return Err(Error::Domain("non-finite argument"));
        }
        Ok(expm1_over_x((q - 1.0) * (self.alpha * self.bf())))
    }

    pub fn psi_c(&self, q: Complex64) -> Result<Complex64> {
        Ok(self.psi_q(q)? * self.psi_v(q)?)
    }

    /// `E q^{D_RH}` from the `b`-section of `ψ_C`. Intended for
    /// `|q| ∈ [0.1, radius]`; the law of `D_RH` is extracted from that of `C`.
    pub fn psi_rh(&self, q: Complex64) -> Result<Complex64> {
        if q.norm() == 0.0 {
            return Err(Error::Singular("Robin Hood PGF formula at q = 0"));
        }
        self.check_radius(q, self.radius)?;
        let b = self.b;
        let root = if q.im == 0.0 && q.re > 0.0 {
            Complex64::new(q.re.powf(1.0 / b as f64), 0.0)
        } else {
            Complex64::from_polar(q.norm().powf(1.0 / b as f64), q.arg() / b as f64)
        };
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..b {
            let omega = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / b as f64);
            let x = omega.conj() / root;
            let mut geo = Complex64::new(0.0, 0.0);
            let mut xp = Complex64::new(1.0, 0.0);
            for _ in 0..b {
                geo += xp;
                xp *= x;
            }
            sum += self.psi_c(omega * root)? * geo;
        }
        Ok(sum / b as f64)
    }

    pub fn mean_c(&self) -> f64 {
        1.0 / (2.0 * (1.0 - self.alpha)) - self.bf() / 2.0 + self.sum_inv
    }

    pub fn mean_d_rh(&self) -> f64 {
        let (a, b) = (self.alpha, self.bf());
        (1.0 / (1.0 - a) - b - b * a) / (2.0 * b * a) + self.sum_inv / (b * a)
    }

    /// Root family `ζ_ℓ(q)`, with `ζ_ℓ(1)` returned from the cache.
    pub fn roots(&self, q: Complex64) -> Result<RootFamily> {
        if q == Complex64::new(1.0, 0.0) {
            return Ok(self.family1.clone());
        }
        zeta_roots(self.b, self.alpha, q)
    }

    /// `E q^B = 1 - Π_ℓ (1 - ζ_ℓ(q))`, `|q| ≤ R`.
    pub fn psi_b(&self, q: Complex64) -> Result<Complex64> {
        let fam = self.roots(q)?;
        Ok(Complex64::new(1.0, 0.0) - fam.product_at(Complex64::new(1.0, 0.0)))
    }

    /// `E(q^B t^{Y_B}) = t^b - Π_ℓ (t - ζ_ℓ(q))`, where `Y_B` is the occupancy
    /// of the last bucket of the block.
    pub fn joint_b_y(&self, q: Complex64, t: Complex64) -> Result<Complex64> {
        let fam = self.roots(q)?;
        Ok(t.powu(self.b as u32) - fam.product_at(t))
    }

    /// `E q^{B̂} = T_0 q ψ_B'(q)`, `|q| < R`.
    pub fn psi_bhat(&self, q: Complex64) -> Result<Complex64> {
        let fam = self.roots(q)?;
        let one = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for (l, &z) in fam.roots.iter().enumerate() {
            let denom = one - z * self.alpha;
            if denom.norm() < 1e-14 {
                return Err(Error::Singular("size-biased block PGF at |q| = R"));
            }
            let mut term = z / (denom * self.bf());
            for (j, &w) in fam.roots.iter().enumerate() {
                if j != l {
                    term *= one - w;
                }
            }
            sum += term;
        }
        Ok(sum * self.t0)
    }

    pub fn mean_b(&self) -> f64 {
        1.0 / self.t0
    }

    pub fn var_b(&self) -> f64 {
        let (a, b, t0) = (self.alpha, self.bf(), self.t0);
        1.0 / (b * (1.0 - a) * (1.0 - a) * t0) - 2.0 * self.sum_block / (b * t0) - 1.0 / (t0 * t0)
    }

    pub fn mean_bhat(&self) -> f64 {
        let (a, b) = (self.alpha, self.bf());
        1.0 / (b * (1.0 - a) * (1.0 - a)) - 2.0 * self.sum_block / b
    }

    /// `E q^U = T_0 Π_ℓ (1 - ζ_ℓ(q)) / (1 - q)`, `|q| ≤ R`.
    pub fn psi_u(&self, q: Complex64) -> Result<Complex64> {
        let one = Complex64::new(1.0, 0.0);
        let h = q - 1.0;
        if h.norm() < self.taylor_zone {
            // (1 - ζ_0(q)) / (1 - q) = Σ_{k≥1} u_k h^{k-1}
            let factor0 = series::eval(&self.taylor1[0][1..], h);
            let fam = self.roots(q)?;
            let rest = fam.roots[1..].iter().fold(one, |acc, &z| acc * (one - z));
            return Ok(factor0 * rest * self.t0);
        }
        let fam = self.roots(q)?;
        Ok(fam.product_at(one) / (one - q) * self.t0)
    }

    /// `E q^Ũ` for the number of keys inspected by an unsuccessful search,
    /// `|q|^b ≤ R`.
    pub fn psi_u_keys(&self, q: Complex64) -> Result<Complex64> {
        self.check_radius(q, self.keys_root_radius())?;
        let s = q.powu(self.b as u32);
        let delta = s - 1.0;
        if delta.norm() < self.taylor_zone {
            // expand Π_ℓ (q - ζ_ℓ(s)) in powers of δ = s - 1
            let len = TAYLOR_ORDER + 1;
            let mut poly = vec![Complex64::new(0.0, 0.0); len];
            poly[0] = Complex64::new(1.0, 0.0);
            for coeffs in &self.taylor1 {
                let factor: Vec<Complex64> = coeffs
                    .iter()
                    .enumerate()
                    .map(|(k, &u)| if k == 0 { q - u } else { -u })
                    .collect();
                poly = series::mul_trunc(&poly, &factor, len);
            }
            return Ok(-series::eval(&poly[1..], delta) * self.t0);
        }
        let fam_s = self.roots(s)?;
        let diff = fam_s.product_at(q) - self.family1.product_at(q);
        Ok(diff / (Complex64::new(1.0, 0.0) - s) * self.t0)
    }

    pub fn mean_u(&self) -> f64 {
        let (a, b) = (self.alpha, self.bf());
        1.0 / (2.0 * b * (1.0 - a) * (1.0 - a)) - 0.5 - self.sum_block / b
    }

    pub fn mean_u_keys(&self) -> f64 {
        let a = self.alpha;
        1.0 / (2.0 * (1.0 - a) * (1.0 - a)) - self.bf() / 2.0 + self.sum_keys
    }

    /// `E q^{D_FCFS} = (1/α) ∫_0^α ψ_U(q; β) dβ`.
    pub fn psi_fcfs(&self, q: Complex64) -> Result<Complex64> {
        self.check_radius(q, self.radius)?;
        let (v, _) = integrate_doubling(0.0, self.alpha, |beta| {
            let ctx = AnalyticContext::new(self.b, beta)?;
            let z = ctx.psi_u(q)?;
            Ok(vec![z.re, z.im])
        })?;
        Ok(Complex64::new(v[0], v[1]) / self.alpha)
    }

    /// Mean FCFS displacement. Equal to the Robin Hood mean; the value is also
    /// obtained by integrating `E U_β` and the two must agree to `1e-8`.
    pub fn mean_d_fcfs(&self) -> Result<f64> {
        let closed = self.mean_d_rh();
        let (v, _) = integrate_doubling(0.0, self.alpha, |beta| {
            Ok(vec![AnalyticContext::new(self.b, beta)?.mean_u()])
        })?;
        let integrated = v[0] / self.alpha;
        let difference = (closed - integrated).abs();
        if difference > 1e-8 {
            return Err(Error::Identity {
                what: "FCFS mean versus integrated unsuccessful search mean",
                difference,
            });
        }
        Ok(closed)
    }

    /// Law of the FCFS displacement, atoms `0..=kmax`, by integrating the laws
    /// of `U_β` over `β ∈ (0, α)`.
    pub fn pmf_d_fcfs(&self, kmax: usize) -> Result<Pmf> {
        let n_points = self.contour_points(kmax, self.radius, self.singular_radius());
        let radius = self.radius;
        let (v, _) = integrate_doubling(0.0, self.alpha, |beta| {
            let ctx = AnalyticContext::new(self.b, beta)?;
            Ok(pmf_from_pgf(|q| ctx.psi_u(q), radius, kmax, n_points)?.values)
        })?;
        Pmf::new(v.into_iter().map(|x| x / self.alpha).collect(), Provenance::Analytic)
    }

    /// The nearest singularity of the PGFs extracted on [`Self::radius`].
    pub fn singular_radius(&self) -> f64 {
        self.q_star.min(self.root_radius)
    }

    /// Number of contour points for atoms `0..=kmax` on radius `r` when the
    /// nearest singularity is at `rho`: at least `4(kmax + 1)` and enough that
    /// `(r/rho)^N` is negligible.
    pub fn contour_points(&self, kmax: usize, r: f64, rho: f64) -> usize {
        let by_atoms = (4 * (kmax + 1)).next_power_of_two();
        let gap = (rho / r).ln();
        let by_alias = if gap > 0.0 {
            let need = (40.0 / gap).ceil();
            if need >= MAX_CONTOUR_POINTS as f64 {
                MAX_CONTOUR_POINTS
            } else {
                (need as usize).next_power_of_two()
            }
        } else {
            MAX_CONTOUR_POINTS
        };
        by_atoms.max(by_alias).min(MAX_CONTOUR_POINTS).max(by_atoms)
    }

    /// Evaluates the PGF of `stat` at `q`.
    pub fn psi(&self, stat: Statistic, q: Complex64) -> Result<Complex64> {
        match stat {
            Statistic::H => self.psi_h(q),
            Statistic::Q => self.psi_q(q),
            Statistic::Y => {
                let p = self.pmf_y()?;
                Ok(series::eval(
                    &p.iter().map(|&x| Complex64::new(x, 0.0)).collect::<Vec<_>>(),
                    q,
                ))
            }
            Statistic::B => self.psi_b(q),
            Statistic::Bhat => self.psi_bhat(q),
            Statistic::U => self.psi_u(q),
            Statistic::Ukeys => self.psi_u_keys(q),
            Statistic::DRh => self.psi_rh(q),
            Statistic::C => self.psi_c(q),
            Statistic::V => self.psi_v(q),
            Statistic::DFcfs => self.psi_fcfs(q),
        }
    }

    /// Closed-form mean of `stat`.
    pub fn mean(&self, stat: Statistic) -> Result<f64> {
        Ok(match stat {
            Statistic::H => self.mean_h(),
            Statistic::Q => self.mean_q(),
            Statistic::Y => self
                .pmf_y()?
                .iter()
                .enumerate()
                .map(|(k, p)| k as f64 * p)
                .sum(),
            Statistic::B => self.mean_b(),
            Statistic::Bhat => self.mean_bhat(),
            Statistic::U => self.mean_u(),
            Statistic::Ukeys => self.mean_u_keys(),
            Statistic::DRh => self.mean_d_rh(),
            Statistic::C => self.mean_c(),
            Statistic::V => self.alpha * self.bf() / 2.0,
            Statistic::DFcfs => self.mean_d_fcfs()?,
        })
    }

    /// Law of `stat` on atoms `0..=kmax`.
    pub fn pmf(&self, stat: Statistic, kmax: usize) -> Result<Pmf> {
        let r = self.radius;
        let rho = self.singular_radius();
        match stat {
            Statistic::Y => {
                let mut p = self.pmf_y()?;
                p.resize(kmax + 1, 0.0);
                Pmf::new(p, Provenance::Analytic)
            }
            Statistic::Ukeys => {
                let r = self.keys_radius();
                let n = self.contour_points(kmax, r, self.keys_root_radius());
                pmf_from_pgf(|q| self.psi_u_keys(q), r, kmax, n)
            }
            Statistic::DRh => {
                let len = self.b * (kmax + 1);
                let n = self.contour_points(len - 1, r, rho);
                let c = pmf_from_pgf(|q| self.psi_c(q), r, len - 1, n)?;
                Ok(c.aggregate(self.b))
            }
            Statistic::DFcfs => self.pmf_d_fcfs(kmax),
            Statistic::V => {
                // V is bounded by a Poisson variable; a unit-circle contour is exact enough
                let n = (4 * (kmax + 1)).next_power_of_two().max(1024);
                pmf_from_pgf(|q| self.psi_v(q), 1.0, kmax, n)
            }
            _ => {
                let n = self.contour_points(kmax, r, rho);
                pmf_from_pgf(|q| self.psi(stat, q), r, kmax, n)
            }
        }
    }
}

/// Coefficients `p_0..=p_kmax` of a PGF from its values on `|q| = radius`:
/// `p_k = r^{-k} (1/N) Σ_j ψ(r e^{iθ_j}) e^{-ikθ_j}`, `θ_j = 2π(j + ½)/N`.
///
/// `n_points` must be a power of two and at least `4 kmax`. The PGF must be
/// analytic on the closed disc of the given radius.
pub fn pmf_from_pgf<F>(mut psi: F, radius: f64, kmax: usize, n_points: usize) -> Result<Pmf>
where
    F: FnMut(Complex64) -> Result<Complex64>,
{
    if !n_points.is_power_of_two() || n_points < 4 * kmax {
        return Err(Error::Domain("contour size must be a power of two and at least 4 kmax"));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::Domain("contour radius must be positive"));
    }
    let n = n_points;
    // cis(π t / N) for t in 0..2N covers every angle k(2j+1)π/N
    let table: Vec<Complex64> = (0..2 * n)
        .map(|t| Complex64::from_polar(1.0, PI * t as f64 / n as f64))
        .collect();
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        values.push(psi(table[2 * j + 1] * radius)?);
    }
    let mut out = Vec::with_capacity(kmax + 1);
    let mut scale = 1.0;
    for k in 0..=kmax {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let t = (k * (2 * j + 1)) % (2 * n);
            acc += v * table[t].conj();
        }
        let p = acc * (scale / n as f64);
        if p.im.abs() > IMAG_RESIDUAL {
            return Err(Error::Residual {
                index: k,
                residual: p.im.abs(),
            });
        }
        out.push(p.re);
        scale /= radius;
    }
    Pmf::new(out, Provenance::Analytic)
}
