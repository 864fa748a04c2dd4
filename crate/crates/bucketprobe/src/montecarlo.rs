//! Parallel Monte Carlo estimation of bucket, block, search and displacement
//! laws, with standard errors taken across replications.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use bucketprobe_core::poisson::Statistic;
use bucketprobe_core::table::{insert_keys, profile_from_counts, Heuristic, Topology};
use bucketprobe_core::{Error, Result};

use crate::sampling::{replication_rng, sample_exact, sample_poisson_count};

/// How many keys go into each simulated table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Filling {
    /// Exactly `n` keys.
    Exact(usize),
    /// `N ~ Poisson(bαm)` keys; cyclic draws with `N ≥ bm` are redrawn.
    Poisson(f64),
}

/// Quantities the simulator can observe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SimStatistic {
    H,
    Q,
    Y,
    B,
    Bhat,
    U,
    Ukeys,
    DFcfs,
    DRh,
    DLcfs,
    /// 1 when no key falls off a parking table.
    NoOverflow,
}

impl SimStatistic {
    pub const ALL: [SimStatistic; 11] = [
        SimStatistic::H,
        SimStatistic::Q,
        SimStatistic::Y,
        SimStatistic::B,
        SimStatistic::Bhat,
        SimStatistic::U,
        SimStatistic::Ukeys,
        SimStatistic::DFcfs,
        SimStatistic::DRh,
        SimStatistic::DLcfs,
        SimStatistic::NoOverflow,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SimStatistic::DLcfs => "D_LCFS",
            SimStatistic::NoOverflow => "no_overflow",
            other => other.analytic().expect("has analytic counterpart").name(),
        }
    }

    pub fn from_name(name: &str) -> Option<SimStatistic> {
        SimStatistic::ALL
            .into_iter()
            .find(|s| s.name().eq_ignore_ascii_case(name))
    }

    /// The Poisson-model statistic with the same law as `m → ∞`.
    pub fn analytic(self) -> Option<Statistic> {
        Some(match self {
            SimStatistic::H => Statistic::H,
            SimStatistic::Q => Statistic::Q,
            SimStatistic::Y => Statistic::Y,
            SimStatistic::B => Statistic::B,
            SimStatistic::Bhat => Statistic::Bhat,
            SimStatistic::U => Statistic::U,
            SimStatistic::Ukeys => Statistic::Ukeys,
            SimStatistic::DFcfs => Statistic::DFcfs,
            SimStatistic::DRh => Statistic::DRh,
            SimStatistic::DLcfs | SimStatistic::NoOverflow => return None,
        })
    }

    fn heuristic(self) -> Option<Heuristic> {
        match self {
            SimStatistic::DFcfs => Some(Heuristic::Fcfs),
            SimStatistic::DRh => Some(Heuristic::RobinHood),
            SimStatistic::DLcfs => Some(Heuristic::Lcfs),
            _ => None,
        }
    }

    fn needs_cycle(self) -> bool {
        matches!(
            self,
            SimStatistic::B | SimStatistic::Bhat | SimStatistic::U | SimStatistic::Ukeys
        )
    }
}

/// A Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct SimSpec {
    pub m: usize,
    pub b: usize,
    pub filling: Filling,
    pub topology: Topology,
    pub statistics: Vec<SimStatistic>,
    pub reps: u64,
    pub seed: u64,
    /// Worker threads, 0 for the rayon default.
    pub threads: usize,
}

/// Estimated law of one statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `counts[k]`: observations equal to `k`.
    pub counts: Vec<u64>,
    pub observations: u64,
    pub mean: f64,
    pub mean_se: f64,
    pub pmf: Vec<f64>,
    pub pmf_se: Vec<f64>,
    /// Index of dispersion `Var(c_r) / E(c_r)` of the per-replication count
    /// of each value, at least 1. Values observed in clumps (all keys of one
    /// long cluster, all buckets of one block) have a dispersion near the mean
    /// clump size.
    pub pmf_dispersion: Vec<f64>,
}

impl Histogram {
    pub fn probability(&self, k: usize) -> f64 {
        self.pmf.get(k).copied().unwrap_or(0.0)
    }

    pub fn probability_se(&self, k: usize) -> f64 {
        self.pmf_se.get(k).copied().unwrap_or(0.0)
    }

    pub fn dispersion(&self, k: usize) -> f64 {
        self.pmf_dispersion.get(k).copied().unwrap_or(1.0)
    }
}

/// Result of [`monte_carlo`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimStats {
    pub seed: u64,
    pub reps: u64,
    pub histograms: BTreeMap<String, Histogram>,
}

impl SimStats {
    pub fn get(&self, stat: SimStatistic) -> Option<&Histogram> {
        self.histograms.get(stat.name())
    }
}

/// Per-replication observations of one statistic.
#[derive(Debug, Default)]
struct RepObs {
    counts: Vec<u64>,
    n: u64,
    sum: u64,
}

impl RepObs {
    fn push(&mut self, value: usize, weight: u64) {
        if self.counts.len() <= value {
            self.counts.resize(value + 1, 0);
        }
        self.counts[value] += weight;
        self.n += weight;
        self.sum += value as u64 * weight;
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct BinSums {
    c: u128,
    c2: u128,
    cn: u128,
}

/// Integer sums over replications; merging is exact, so the result does not
/// depend on the reduction order.
#[derive(Debug, Clone, Default)]
struct Tally {
    bins: Vec<BinSums>,
    reps: u64,
    n: u128,
    n2: u128,
    s: u128,
    s2: u128,
    sn: u128,
}

impl Tally {
    fn add(&mut self, obs: &RepObs) {
        if self.bins.len() < obs.counts.len() {
            self.bins.resize(obs.counts.len(), BinSums::default());
        }
        let n = obs.n as u128;
        for (bin, &c) in self.bins.iter_mut().zip(&obs.counts) {
            let c = c as u128;
            bin.c += c;
            bin.c2 += c * c;
            bin.cn += c * n;
        }
        let s = obs.sum as u128;
        self.reps += 1;
        self.n += n;
        self.n2 += n * n;
        self.s += s;
        self.s2 += s * s;
        self.sn += s * n;
    }

    fn merge(mut self, other: Tally) -> Tally {
        if self.bins.len() < other.bins.len() {
            self.bins.resize(other.bins.len(), BinSums::default());
        }
        for (a, b) in self.bins.iter_mut().zip(&other.bins) {
            a.c += b.c;
            a.c2 += b.c2;
            a.cn += b.cn;
        }
        self.reps += other.reps;
        self.n += other.n;
        self.n2 += other.n2;
        self.s += other.s;
        self.s2 += other.s2;
        self.sn += other.sn;
        self
    }

    /// Ratio estimate `Σx_r / Σn_r` and its standard error across replications.
    fn ratio(&self, x: u128, x2: u128, xn: u128) -> (f64, f64) {
        if self.n == 0 {
            return (f64::NAN, f64::NAN);
        }
        let n = self.n as f64;
        let est = x as f64 / n;
        if self.reps < 2 {
            return (est, f64::NAN);
        }
        let r = self.reps as f64;
        let spread = x2 as f64 - 2.0 * est * xn as f64 + est * est * self.n2 as f64;
        let nbar = n / r;
        let var = spread.max(0.0) / (r * (r - 1.0) * nbar * nbar);
        (est, var.sqrt())
    }

    fn histogram(&self) -> Histogram {
        let (mean, mean_se) = self.ratio(self.s, self.s2, self.sn);
        let mut pmf = Vec::with_capacity(self.bins.len());
        let mut pmf_se = Vec::with_capacity(self.bins.len());
        for bin in &self.bins {
            let (p, se) = self.ratio(bin.c, bin.c2, bin.cn);
            pmf.push(p);
            pmf_se.push(se);
        }
        Histogram {
            counts: self.bins.iter().map(|b| b.c as u64).collect(),
            observations: self.n as u64,
            mean,
            mean_se,
            pmf,
            pmf_se,
            pmf_dispersion: self
                .bins
                .iter()
                .map(|b| {
                    if b.c == 0 {
                        return 1.0;
                    }
                    let c = b.c as f64;
                    (b.c2 as f64 / c - c / self.reps as f64).max(1.0)
                })
                .collect(),
        }
    }
}

fn check(spec: &SimSpec) -> Result<()> {
    if spec.m == 0 || spec.b == 0 {
        return Err(Error::Domain("need m >= 1 and b >= 1"));
    }
    if spec.reps == 0 {
        return Err(Error::Domain("need at least one replication"));
    }
    let slots = spec.b * spec.m;
    let profile_stats = spec.statistics.iter().any(|s| s.heuristic().is_none());
    if spec.topology == Topology::Parking {
        if spec.statistics.iter().any(|s| s.needs_cycle()) {
            return Err(Error::Domain("block and search statistics need the cyclic topology"));
        }
    } else {
        if spec.statistics.contains(&SimStatistic::NoOverflow) {
            return Err(Error::Domain("overflow indicator needs the parking topology"));
        }
        if let Filling::Exact(n) = spec.filling {
            if n > slots || (profile_stats && n == slots) {
                return Err(Error::Capacity { keys: n, slots });
            }
        }
    }
    if let Filling::Poisson(alpha) = spec.filling {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::Domain("Poisson load must lie in (0, 1)"));
        }
    }
    Ok(())
}

fn replicate(spec: &SimSpec, rep: u64) -> Result<Vec<RepObs>> {
    let (m, b) = (spec.m, spec.b);
    let mut rng = replication_rng(spec.seed, rep);
    let n = match spec.filling {
        Filling::Exact(n) => n,
        Filling::Poisson(alpha) => loop {
            let n = sample_poisson_count(&mut rng, m, b, alpha)?;
            if spec.topology == Topology::Parking || n < b * m {
                break n;
            }
        },
    };
    let hashes = sample_exact(&mut rng, m, n);
    let keys: Vec<(u64, usize)> = hashes.iter().map(|&h| (rng.random::<u64>(), h)).collect();
    let mut x = vec![0usize; m];
    for &h in &hashes {
        x[h] += 1;
    }
    let profile = if spec.statistics.iter().any(|s| s.heuristic().is_none()) {
        Some(profile_from_counts(&x, b, spec.topology)?)
    } else {
        None
    };
    let search = if spec.statistics.iter().any(|s| s.needs_cycle()) {
        Some(cyclic_runs(&profile.as_ref().expect("profile").y, b))
    } else {
        None
    };
    let mut out = Vec::with_capacity(spec.statistics.len());
    for &stat in &spec.statistics {
        let mut obs = RepObs::default();
        match stat {
            SimStatistic::H | SimStatistic::Q | SimStatistic::Y => {
                let p = profile.as_ref().expect("profile");
                let v = match stat {
                    SimStatistic::H => &p.h,
                    SimStatistic::Q => &p.q,
                    _ => &p.y,
                };
                for &value in v {
                    obs.push(value, 1);
                }
            }
            SimStatistic::B | SimStatistic::Bhat => {
                let (_, blocks) = search.as_ref().expect("runs");
                for &len in blocks {
                    let weight = if stat == SimStatistic::B { 1 } else { len as u64 };
                    obs.push(len, weight);
                }
            }
            SimStatistic::U | SimStatistic::Ukeys => {
                let y = &profile.as_ref().expect("profile").y;
                let (runs, _) = search.as_ref().expect("runs");
                for (i, &u) in runs.iter().enumerate() {
                    let value = match stat {
                        SimStatistic::U => u,
                        _ => b * u + y[(i + u) % m],
                    };
                    obs.push(value, 1);
                }
            }
            SimStatistic::NoOverflow => {
                let p = profile.as_ref().expect("profile");
                obs.push(usize::from(p.q[m - 1] == 0), 1);
            }
            SimStatistic::DFcfs | SimStatistic::DRh | SimStatistic::DLcfs => {
                let h = stat.heuristic().expect("displacement");
                let table = insert_keys(m, b, &keys, h, spec.topology)?;
                for k in 0..table.keys.len() {
                    if let Some(d) = table.displacement(k) {
                        obs.push(d, 1);
                    }
                }
                if spec.topology == Topology::Cyclic {
                    debug_assert_eq!(
                        table.total_displacement(),
                        table.overflow_profile().iter().sum::<usize>()
                    );
                }
            }
        }
        out.push(obs);
    }
    Ok(out)
}

/// For a cyclic occupancy vector with at least one non-full bucket: the number
/// of consecutive full buckets starting at each bucket, and the lengths of all
/// blocks (runs of full buckets closed by a non-full one).
pub fn cyclic_runs(y: &[usize], b: usize) -> (Vec<usize>, Vec<usize>) {
    let m = y.len();
    let start = y.iter().position(|&v| v < b).expect("a non-full bucket");
    let mut runs = vec![0usize; m];
    for step in 1..m {
        let i = (start + m - step) % m;
        if y[i] == b {
            runs[i] = runs[(i + 1) % m] + 1;
        }
    }
    let mut blocks = Vec::new();
    let mut len = 0;
    for step in 1..=m {
        let i = (start + step) % m;
        len += 1;
        if y[i] < b {
            blocks.push(len);
            len = 0;
        }
    }
    (runs, blocks)
}

/// Runs the replications of `spec` in parallel and merges their tallies.
pub fn monte_carlo(spec: &SimSpec) -> Result<SimStats> {
    check(spec)?;
    let empty = || vec![Tally::default(); spec.statistics.len()];
    let run = || {
        (0..spec.reps)
            .into_par_iter()
            .map(|rep| replicate(spec, rep))
            .try_fold(empty, |mut acc, obs| {
                for (t, o) in acc.iter_mut().zip(&obs?) {
                    t.add(o);
                }
                Ok::<_, Error>(acc)
            })
            .try_reduce(empty, |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()))
    };
    let tallies = if spec.threads == 0 {
        run()?
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(spec.threads)
            .build()
            .map_err(|_| Error::Domain("could not build the worker pool"))?
            .install(run)?
    };
    let histograms = spec
        .statistics
        .iter()
        .zip(&tallies)
        .map(|(s, t)| (s.name().to_string(), t.histogram()))
        .collect();
    Ok(SimStats {
        seed: spec.seed,
        reps: spec.reps,
        histograms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(stats: Vec<SimStatistic>, reps: u64, threads: usize) -> SimSpec {
        SimSpec {
            m: 50,
            b: 2,
            filling: Filling::Poisson(0.6),
            topology: Topology::Cyclic,
            statistics: stats,
            reps,
            seed: 99,
            threads,
        }
    }

    #[test]
    fn runs_and_blocks() {
        let (runs, blocks) = cyclic_runs(&[2, 2, 1, 0, 2], 2);
        assert_eq!(runs, vec![2, 1, 0, 0, 3]);
        assert_eq!(blocks, vec![1, 4]);
        assert_eq!(blocks.iter().sum::<usize>(), 5);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let stats = vec![SimStatistic::Q, SimStatistic::DRh, SimStatistic::Bhat];
        let a = monte_carlo(&spec(stats.clone(), 64, 1)).unwrap();
        let b = monte_carlo(&spec(stats, 64, 4)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn histogram_mass_matches_observations() {
        let s = monte_carlo(&spec(SimStatistic::ALL[..10].to_vec(), 20, 0)).unwrap();
        for h in s.histograms.values() {
            assert_eq!(h.counts.iter().sum::<u64>(), h.observations);
            assert!((h.pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert_eq!(s.get(SimStatistic::Q).unwrap().observations, 20 * 50);
        // displacement means agree across heuristics table by table
        let f = s.get(SimStatistic::DFcfs).unwrap();
        let r = s.get(SimStatistic::DRh).unwrap();
        assert_eq!(f.observations, r.observations);
        assert!((f.mean - r.mean).abs() < 1e-12);
    }

    #[test]
    fn size_biased_blocks() {
        let s = monte_carlo(&spec(vec![SimStatistic::B, SimStatistic::Bhat], 40, 0)).unwrap();
        let b = s.get(SimStatistic::B).unwrap();
        let bh = s.get(SimStatistic::Bhat).unwrap();
        for k in 1..b.counts.len() {
            assert_eq!(bh.counts[k], k as u64 * b.counts[k]);
        }
    }

    #[test]
    fn rejects_bad_combinations() {
        let mut s = spec(vec![SimStatistic::B], 1, 0);
        s.topology = Topology::Parking;
        assert!(monte_carlo(&s).is_err());
        let mut s = spec(vec![SimStatistic::Q], 1, 0);
        s.filling = Filling::Exact(101);
        assert!(monte_carlo(&s).is_err());
        let s = spec(vec![SimStatistic::NoOverflow], 1, 0);
        assert!(monte_carlo(&s).is_err());
    }

    #[test]
    fn statistic_names_round_trip() {
        for s in SimStatistic::ALL {
            assert_eq!(SimStatistic::from_name(s.name()), Some(s));
        }
    }
}
