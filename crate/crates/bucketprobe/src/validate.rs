//! Cross-validation suites: special functions, PGF identities, exact counts
//! against exhaustive enumeration, and analytic laws against simulation.

use std::f64::consts::PI;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use rand::Rng;
use rayon::prelude::*;

use bucketprobe_core::exact::{
    block_law_exact, expected_block_exact, expected_displacement_exact, expected_overflow_exact, fcfs_exact_law_b1,
    ExactCounter,
};
use bucketprobe_core::pmf::Pmf;
use bucketprobe_core::poisson::{pmf_from_pgf, AnalyticContext, Statistic};
use bucketprobe_core::specialfn::{tree_fn, zeta_roots, INV_E};
use bucketprobe_core::table::{brute_force_enumerate_many, EnumStatistic, EnumeratedLaw, Heuristic, Topology};
use bucketprobe_core::{Error, Result};

use crate::montecarlo::{monte_carlo, Filling, Histogram, SimSpec, SimStatistic};
use crate::report::{ReportRow, RunReport};
use crate::sampling::replication_rng;

/// Largest tree-function residual accepted on the domain grid.
pub const TREE_RESIDUAL: f64 = 1e-12;
/// Largest root-family residual accepted.
pub const ROOT_RESIDUAL: f64 = 1e-10;
/// Largest PGF identity error accepted.
pub const IDENTITY_TOL: f64 = 1e-9;
/// Standard errors allowed between simulation and theory.
pub const Z_LIMIT: f64 = 4.0;
/// Atoms compared per simulated law.
pub const SIM_ATOMS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Roots,
    Pgf,
    Exact,
    Simulation,
    All,
}

impl Suite {
    pub fn from_name(name: &str) -> Option<Suite> {
        Some(match name.to_ascii_lowercase().as_str() {
            "roots" => Suite::Roots,
            "pgf" => Suite::Pgf,
            "exact" => Suite::Exact,
            "simulation" => Suite::Simulation,
            "all" => Suite::All,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Small,
    Full,
}

impl Scale {
    pub fn from_name(name: &str) -> Option<Scale> {
        match name.to_ascii_lowercase().as_str() {
            "small" => Some(Scale::Small),
            "full" => Some(Scale::Full),
            _ => None,
        }
    }

    /// Largest `m^n` enumerated by the exact suite.
    pub fn enumeration_cap(self) -> u64 {
        match self {
            Scale::Small => 1 << 16,
            Scale::Full => 1 << 20,
        }
    }
}

/// Runs one suite (or all of them) into a report.
pub fn run_suite(suite: Suite, scale: Scale, seed: u64, threads: usize) -> Result<RunReport> {
    let mut report = RunReport::new("validate");
    report.param("scale", format!("{scale:?}").to_lowercase());
    report.param("seed", seed);
    if matches!(suite, Suite::Roots | Suite::All) {
        report.extend(roots_suite(seed)?);
    }
    if matches!(suite, Suite::Pgf | Suite::All) {
        report.extend(pgf_suite()?);
    }
    if matches!(suite, Suite::Exact | Suite::All) {
        report.extend(exact_suite(scale.enumeration_cap())?);
    }
    if matches!(suite, Suite::Simulation | Suite::All) {
        let config = GridConfig::for_scale(scale, seed, threads);
        report.extend(simulation_grid(&config)?);
    }
    Ok(report)
}

/// Tree-function residual on a polar grid of the closed disc `|z| ≤ 1/e`, and
/// root-family residuals over 1000 random contexts.
pub fn roots_suite(seed: u64) -> Result<Vec<ReportRow>> {
    let mut worst_tree: f64 = 0.0;
    for i in 0..=40 {
        let r = INV_E * i as f64 / 40.0;
        for j in 0..128 {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 128.0);
            let t = tree_fn(z)?;
            worst_tree = worst_tree.max((t - z * t.exp()).norm());
        }
    }
    let mut rng = replication_rng(seed, u64::MAX);
    let mut worst_root: f64 = 0.0;
    for _ in 0..1000 {
        let b = rng.random_range(1..=50usize);
        let alpha = rng.random_range(0.01..0.99);
        let q = Complex64::from_polar(rng.random_range(0.0..1.0f64).sqrt(), rng.random_range(-PI..PI));
        worst_root = worst_root.max(zeta_roots(b, alpha, q)?.max_residual());
    }
    Ok(vec![
        ReportRow::within("tree_fn residual on |z| <= 1/e", "analytic", worst_tree, 0.0, TREE_RESIDUAL),
        ReportRow::within("root family residual, 1000 contexts", "analytic", worst_root, 0.0, ROOT_RESIDUAL),
    ])
}

/// Contexts on which the PGF identities are checked.
pub const IDENTITY_CONTEXTS: [(usize, f64); 6] = [(1, 0.5), (1, 0.9), (2, 0.7), (3, 0.9), (5, 0.3), (20, 0.9)];

fn circle(r: f64, points: usize) -> impl Iterator<Item = Complex64> {
    (0..points).map(move |j| Complex64::from_polar(r, 2.0 * PI * (j as f64 + 0.25) / points as f64))
}

/// `ψ'(q)` by the trapezoid rule on a circle of radius `h` about `q`.
fn cauchy_derivative<F: Fn(Complex64) -> Result<Complex64>>(f: F, q: Complex64, h: f64) -> Result<Complex64> {
    let n = 64;
    let mut acc = Complex64::new(0.0, 0.0);
    for w in circle(1.0, n) {
        acc += f(q + w * h)? / w;
    }
    Ok(acc / (n as f64 * h))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Test circles inside the disc where every PGF of `ctx` is analytic.
fn test_radii(ctx: &AnalyticContext) -> [f64; 3] {
    [0.5, 1.0, ctx.radius]
}

/// PGF identities on test circles, each with a coefficient-level counterpart.
pub fn pgf_suite() -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for &(b, alpha) in &IDENTITY_CONTEXTS {
        let ctx = AnalyticContext::new(b, alpha)?;
        let tag = format!("b={b} alpha={alpha}");
        let ab = alpha * b as f64;
        let mut e_h: f64 = 0.0;
        let mut e_u: f64 = 0.0;
        let mut e_bhat: f64 = 0.0;
        for r in test_radii(&ctx) {
            for q in circle(r, 64) {
                let h = ctx.psi_h(q)?;
                e_h = e_h.max((h - ((q - 1.0) * ab).exp() * ctx.psi_q(q)?).norm());
                let lhs = ctx.psi_u(q)? * (1.0 - q);
                e_u = e_u.max((lhs - (1.0 - ctx.psi_b(q)?) * ctx.t0).norm());
                if r <= 1.0 {
                    let step = (0.5 * (ctx.root_radius - r)).min(0.05);
                    let deriv = cauchy_derivative(|w| ctx.psi_b(w), q, step)?;
                    e_bhat = e_bhat.max((ctx.psi_bhat(q)? - deriv * q * ctx.t0).norm());
                }
            }
        }
        rows.push(ReportRow::within(format!("{tag}: psi_H = e^(ab(q-1)) psi_Q"), "analytic", e_h, 0.0, IDENTITY_TOL));
        rows.push(ReportRow::within(format!("{tag}: psi_U (1-q) = T0 (1 - psi_B)"), "analytic", e_u, 0.0, IDENTITY_TOL));
        rows.push(ReportRow::within(format!("{tag}: psi_Bhat = T0 q psi_B'"), "analytic", e_bhat, 0.0, IDENTITY_TOL));

        let kmax = 40;
        // C = Q + V with independent summands
        let q_law = ctx.pmf(Statistic::Q, kmax)?;
        let v_law = ctx.pmf(Statistic::V, kmax)?;
        let c_law = ctx.pmf(Statistic::C, kmax)?;
        let conv: Vec<f64> = (0..=kmax)
            .map(|k| (0..=k).map(|j| q_law.values[j] * v_law.values[k - j]).sum())
            .collect();
        let e_c = max_abs_diff(&c_law.values, &conv);
        rows.push(ReportRow::within(format!("{tag}: law of C = law of Q * law of V"), "analytic", e_c, 0.0, IDENTITY_TOL));

        // P(U = k) = T0 P(B > k)
        let u_law = ctx.pmf(Statistic::U, kmax)?;
        let b_law = ctx.pmf(Statistic::B, kmax + 1)?;
        let via_b: Vec<f64> = (0..=kmax).map(|k| ctx.t0 * b_law.survival(k)).collect();
        let e_ub = max_abs_diff(&u_law.values, &via_b);
        rows.push(ReportRow::within(format!("{tag}: P(U=k) = T0 P(B>k)"), "analytic", e_ub, 0.0, IDENTITY_TOL));

        // P(Bhat = k) = T0 k P(B = k)
        let bhat_law = ctx.pmf(Statistic::Bhat, kmax)?;
        let biased: Vec<f64> = (0..=kmax).map(|k| ctx.t0 * k as f64 * b_law.values[k]).collect();
        let e_sb = max_abs_diff(&bhat_law.values, &biased);
        rows.push(ReportRow::within(format!("{tag}: P(Bhat=k) = T0 k P(B=k)"), "analytic", e_sb, 0.0, IDENTITY_TOL));

        // D_RH = floor(C / b): law from psi_RH against the aggregated law of C
        let drh_kmax = 20;
        let aggregated = ctx.pmf(Statistic::DRh, drh_kmax)?;
        let n = ctx.contour_points(drh_kmax, ctx.radius, ctx.singular_radius());
        let direct = pmf_from_pgf(|q| ctx.psi_rh(q), ctx.radius, drh_kmax, n)?;
        let e_rh = max_abs_diff(&aggregated.values, &direct.values);
        rows.push(ReportRow::within(format!("{tag}: D_RH = floor(C/b)"), "analytic", e_rh, 0.0, IDENTITY_TOL));
    }
    Ok(rows)
}

/// Cases `(b, m, n)` with `b ≤ 3`, `m ≤ 5` and `m^n ≤ cap`.
pub fn enumerable_cases(cap: u64) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for b in 1..=3usize {
        for m in 1..=5usize {
            let mut n = 0usize;
            let mut size = 1u64;
            while size <= cap {
                out.push((b, m, n));
                n += 1;
                size = size.saturating_mul(m as u64);
                if m == 1 && n > 40 {
                    break;
                }
            }
        }
    }
    out
}

#[derive(Debug, Default, Clone)]
struct Mismatches {
    overflow: (usize, usize),
    displacement: (usize, usize),
    block_mean: (usize, usize),
    block_law: (usize, usize),
    last_not_full: (usize, usize),
    fcfs_law: (usize, usize),
    first: Vec<String>,
}

impl Mismatches {
    fn tick(slot: &mut (usize, usize), ok: bool) {
        slot.0 += 1;
        if !ok {
            slot.1 += 1;
        }
    }

    fn merge(mut self, o: Mismatches) -> Mismatches {
        for (a, b) in [
            (&mut self.overflow, o.overflow),
            (&mut self.displacement, o.displacement),
            (&mut self.block_mean, o.block_mean),
            (&mut self.block_law, o.block_law),
            (&mut self.last_not_full, o.last_not_full),
            (&mut self.fcfs_law, o.fcfs_law),
        ] {
            a.0 += b.0;
            a.1 += b.1;
        }
        self.first.extend(o.first);
        self
    }
}

fn law_matches(law: &EnumeratedLaw, exact: &[BigRational]) -> bool {
    let len = law.counts.len().max(exact.len());
    (0..len).all(|k| law.probability(k) == exact.get(k).cloned().unwrap_or_else(BigRational::zero))
}

fn check_case(b: usize, m: usize, n: usize, cap: u64) -> Result<Mismatches> {
    let mut stats = vec![EnumStatistic::ParkingOverflow];
    stats.extend((0..b).map(|d| EnumStatistic::MoreThanDEmpty { d }));
    let with_displacement = n >= 1 && n <= b * m;
    if with_displacement {
        stats.extend(Heuristic::ALL.iter().map(|&heuristic| EnumStatistic::Displacement {
            heuristic,
            topology: Topology::Cyclic,
        }));
    }
    let with_block = n < b * m;
    if with_block {
        stats.push(EnumStatistic::LastBlockLength);
    }
    let laws = brute_force_enumerate_many(m, b, n, &stats, cap)?;
    let mut out = Mismatches::default();
    let note = |out: &mut Mismatches, what: &str, ok: bool| {
        if !ok && out.first.len() < 5 {
            out.first.push(format!("{what} at b={b} m={m} n={n}"));
        }
    };
    let mut i = 0;
    let ok = laws[i].mean() == expected_overflow_exact(m as u64, n as u64, b as u64)?;
    Mismatches::tick(&mut out.overflow, ok);
    note(&mut out, "overflow", ok);
    i += 1;
    let counter = ExactCounter::new(b, m, n)?;
    for d in 0..b {
        let hits = laws[i].counts.get(1).copied().unwrap_or(0);
        let ok = counter.more_than_d_empty(m, n, d)? == &BigUint::from(hits)
            && laws[i].total == (m as u64).pow(n as u32);
        Mismatches::tick(&mut out.last_not_full, ok);
        note(&mut out, "Q_{m,n,d}", ok);
        i += 1;
    }
    if with_displacement {
        let exact = expected_displacement_exact(m as u64, n as u64, b as u64)?;
        for _ in Heuristic::ALL {
            let ok = laws[i].mean() == exact;
            Mismatches::tick(&mut out.displacement, ok);
            note(&mut out, "displacement", ok);
            i += 1;
        }
        if b == 1 {
            // the FCFS law comes first among the heuristics
            let fcfs = &laws[i - 3];
            let ok = law_matches(fcfs, &fcfs_exact_law_b1(m as u64, n as u64)?);
            Mismatches::tick(&mut out.fcfs_law, ok);
            note(&mut out, "FCFS law", ok);
        }
    }
    if with_block {
        let law = &laws[i];
        let ok = law.mean() == expected_block_exact(m, n, b)?;
        Mismatches::tick(&mut out.block_mean, ok);
        note(&mut out, "block mean", ok);
        let ok = law_matches(law, &block_law_exact(m, n, b)?);
        Mismatches::tick(&mut out.block_law, ok);
        note(&mut out, "block law", ok);
    }
    Ok(out)
}

/// Exact results against exhaustive enumeration for every `b ≤ 3`, `m ≤ 5`,
/// `m^n ≤ cap`. Every comparison is between exact rationals.
pub fn exact_suite(cap: u64) -> Result<Vec<ReportRow>> {
    let cases = enumerable_cases(cap);
    let results: Vec<Mismatches> = cases
        .par_iter()
        .map(|&(b, m, n)| check_case(b, m, n, cap))
        .collect::<Result<_>>()?;
    let all = results.into_iter().fold(Mismatches::default(), Mismatches::merge);
    let row = |name: &str, (cases, bad): (usize, usize)| {
        ReportRow::check(
            format!("{name} ({cases} cases, {bad} mismatches)"),
            "exact",
            Some(bad as f64),
            bad == 0 && cases > 0,
        )
    };
    let mut rows = vec![
        row("expected overflow = enumeration", all.overflow),
        row("expected displacement = enumeration, all heuristics", all.displacement),
        row("expected last block = enumeration", all.block_mean),
        row("last block law = enumeration", all.block_law),
        row("Q_{m,n,d} = enumeration", all.last_not_full),
        row("FCFS law b=1 = enumeration", all.fcfs_law),
    ];
    for msg in all.first {
        rows.push(ReportRow::check(format!("mismatch: {msg}"), "exact", None, false));
    }
    Ok(rows)
}

/// Settings of the simulation grid.
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub bucket_sizes: Vec<usize>,
    pub loads: Vec<f64>,
    pub m: usize,
    /// Target number of keys over all replications of one grid point.
    pub keys: f64,
    pub seed: u64,
    pub threads: usize,
}

impl GridConfig {
    pub fn for_scale(scale: Scale, seed: u64, threads: usize) -> Self {
        let (m, keys) = match scale {
            Scale::Small => (500, 5e4),
            Scale::Full => (2000, 1e6),
        };
        GridConfig {
            bucket_sizes: vec![1, 2, 3],
            loads: vec![0.3, 0.5, 0.7, 0.9],
            m,
            keys,
            seed,
            threads,
        }
    }
}

/// Statistics compared on the simulation grid.
pub const GRID_STATISTICS: [SimStatistic; 9] = [
    SimStatistic::Q,
    SimStatistic::H,
    SimStatistic::Y,
    SimStatistic::B,
    SimStatistic::Bhat,
    SimStatistic::U,
    SimStatistic::Ukeys,
    SimStatistic::DRh,
    SimStatistic::DFcfs,
];

/// z-test rows for the mean and the first `atoms` probabilities of a
/// simulated law. The standard error of an atom is never taken below the
/// binomial error of the analytic probability, scaled by the square root of
/// the dispersion of its count. That dispersion is the largest observed at
/// any value `≤ k`, since deep tail values come from the same long clusters
/// as shallower ones and are often seen too rarely to estimate their own; it
/// is at least `lump(k)` when value `k` is always observed in lumps of that
/// size (size-biased blocks).
pub fn compare_law(
    tag: &str,
    hist: &Histogram,
    law: &Pmf,
    mean: f64,
    atoms: usize,
    lump: impl Fn(usize) -> f64,
) -> Vec<ReportRow> {
    let mut rows = vec![ReportRow::z_test(format!("{tag} mean"), hist.mean, hist.mean_se, mean, Z_LIMIT)];
    let n = hist.observations as f64;
    let mut dispersion: f64 = 1.0;
    for k in 0..atoms {
        let p = law.mass(k);
        dispersion = dispersion.max(hist.dispersion(k));
        let floor = (lump(k).max(dispersion) * p * (1.0 - p) / n).sqrt();
        let se = hist.probability_se(k).max(floor);
        rows.push(ReportRow::z_test(format!("{tag} P(={k})"), hist.probability(k), se, p, Z_LIMIT));
    }
    rows
}

/// Poisson-filled cyclic tables against the Poisson-model laws over the grid.
pub fn simulation_grid(config: &GridConfig) -> Result<Vec<ReportRow>> {
    let mut rows = Vec::new();
    for &b in &config.bucket_sizes {
        for &alpha in &config.loads {
            let per_table = alpha * (b * config.m) as f64;
            let reps = (config.keys / per_table).ceil().max(2.0) as u64;
            let spec = SimSpec {
                m: config.m,
                b,
                filling: Filling::Poisson(alpha),
                topology: Topology::Cyclic,
                statistics: GRID_STATISTICS.to_vec(),
                reps,
                seed: config.seed ^ ((b as u64) << 32) ^ (alpha * 1000.0) as u64,
                threads: config.threads,
            };
            let sim = monte_carlo(&spec)?;
            let ctx = AnalyticContext::new(b, alpha)?;
            for stat in GRID_STATISTICS {
                let analytic = stat.analytic().expect("grid statistics have PGFs");
                let law = ctx.pmf(analytic, SIM_ATOMS - 1)?;
                let mean = ctx.mean(analytic)?;
                let hist = sim.get(stat).ok_or(Error::Domain("missing histogram"))?;
                let tag = format!("b={b} alpha={alpha} {}", stat.name());
                let size_biased = stat == SimStatistic::Bhat;
                let lump = |k: usize| if size_biased { k.max(1) as f64 } else { 1.0 };
                rows.extend(compare_law(&tag, hist, &law, mean, SIM_ATOMS, lump));
            }
        }
    }
    Ok(rows)
}

/// Total variation between the simulated law of `Q` in exactly filled cyclic
/// tables of `m` buckets and the Poisson-model law, for each `m`.
pub fn convergence_distances(b: usize, alpha: f64, sizes: &[usize], observations: f64, seed: u64, threads: usize) -> Result<Vec<f64>> {
    let ctx = AnalyticContext::new(b, alpha)?;
    let law = ctx.pmf(Statistic::Q, 60)?;
    let mut out = Vec::new();
    for &m in sizes {
        let n = (alpha * (b * m) as f64).round() as usize;
        let spec = SimSpec {
            m,
            b,
            filling: Filling::Exact(n),
            topology: Topology::Cyclic,
            statistics: vec![SimStatistic::Q],
            reps: (observations / m as f64).ceil() as u64,
            seed: seed ^ m as u64,
            threads,
        };
        let sim = monte_carlo(&spec)?;
        let hist = sim.get(SimStatistic::Q).expect("requested");
        let simulated = Pmf::new(hist.pmf.clone(), bucketprobe_core::Provenance::Simulated)?;
        out.push(simulated.total_variation(&law));
    }
    Ok(out)
}

/// Rows for the convergence check: one distance per size, then monotone
/// decrease and the final distance below `limit`.
pub fn convergence_rows(distances: &[f64], sizes: &[usize], limit: f64) -> Vec<ReportRow> {
    let mut rows: Vec<ReportRow> = sizes
        .iter()
        .zip(distances)
        .map(|(m, d)| ReportRow::value(format!("TV(Q law, m={m})"), "simulated", *d))
        .collect();
    let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    rows.push(ReportRow::check("TV decreases with m", "simulated", None, decreasing));
    let last = *distances.last().unwrap_or(&f64::NAN);
    rows.push(ReportRow::within(
        format!("TV at m={}", sizes.last().copied().unwrap_or(0)),
        "simulated",
        last,
        0.0,
        limit,
    ));
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_parse() {
        assert_eq!(Suite::from_name("ALL"), Some(Suite::All));
        assert_eq!(Suite::from_name("nope"), None);
        assert_eq!(Scale::from_name("small"), Some(Scale::Small));
    }

    #[test]
    fn case_list_respects_cap() {
        let cases = enumerable_cases(1 << 8);
        assert!(cases.iter().all(|&(_, m, n)| (m as u64).pow(n as u32) <= 1 << 8));
        assert!(cases.contains(&(3, 2, 8)));
        assert!(!cases.contains(&(3, 2, 9)));
    }

    #[test]
    fn small_exact_suite_passes() {
        let rows = exact_suite(1 << 8).unwrap();
        assert!(rows.iter().all(|r| r.pass == Some(true)), "{rows:?}");
    }

    #[test]
    fn roots_suite_passes() {
        let rows = roots_suite(5).unwrap();
        assert!(rows.iter().all(|r| r.pass == Some(true)), "{rows:?}");
    }
}
