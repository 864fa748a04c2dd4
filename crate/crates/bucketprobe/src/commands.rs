//! The CLI subcommands as library functions returning reports.

use num_traits::ToPrimitive;

use bucketprobe_core::exact::{
    block_law_exact, count_more_than_d_empty, expected_block_exact, expected_displacement_exact,
    expected_overflow_alt, expected_overflow_exact, fcfs_exact_law_b1, full_table_b1_asym, full_table_displacement,
    successful_search_b1,
};
use bucketprobe_core::poisson::{AnalyticContext, Statistic};
use bucketprobe_core::table::Topology;
use bucketprobe_core::{Error, Result};
use num_rational::BigRational;

use crate::montecarlo::{monte_carlo, Filling, SimSpec, SimStatistic};
use crate::report::{ReportRow, RunReport};
use crate::tables::{self, search_length_exact_b1};
use crate::validate::{self, Scale, Suite, Z_LIMIT};

fn decimal(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn exact_row(name: impl Into<String>, r: &BigRational) -> ReportRow {
    ReportRow::value(name, "exact", decimal(r)).with_exact(r.to_string())
}

/// Moments and law of one Poisson-model statistic.
pub fn cmd_analytic(b: usize, alpha: f64, stat: Statistic, kmax: usize) -> Result<RunReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain("alpha must lie in (0, 1)"));
    }
    let ctx = AnalyticContext::new(b, alpha)?;
    let mut report = RunReport::new("analytic");
    report.param("b", b);
    report.param("alpha", alpha);
    report.param("stat", stat.name());
    report.param("kmax", kmax);
    let law = ctx.pmf(stat, kmax)?;
    report.push(ReportRow::value(format!("{} mean", stat.name()), "analytic", ctx.mean(stat)?));
    if stat == Statistic::B {
        report.push(ReportRow::value("B variance", "analytic", ctx.var_b()));
    }
    for (k, p) in law.values.iter().enumerate() {
        report.push(ReportRow::value(format!("P({} = {k})", stat.name()), "analytic", *p));
    }
    report.push(ReportRow::value("tail mass beyond kmax", "analytic", law.tail_bound));
    Ok(report)
}

/// Quantities available from `exact`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExactStat {
    Overflow,
    Displacement,
    Block,
    LastNotFull,
    SearchB1,
    FcfsB1,
    FullTable,
}

impl ExactStat {
    pub fn from_name(name: &str) -> Option<ExactStat> {
        Some(match name.to_ascii_lowercase().replace('-', "_").as_str() {
            "overflow" => ExactStat::Overflow,
            "displacement" => ExactStat::Displacement,
            "block" => ExactStat::Block,
            "last_not_full" => ExactStat::LastNotFull,
            "search_b1" => ExactStat::SearchB1,
            "fcfs_b1" => ExactStat::FcfsB1,
            "full_table" => ExactStat::FullTable,
            _ => return None,
        })
    }
}

/// Exact finite-table results.
pub fn cmd_exact(m: usize, n: usize, b: usize, stat: ExactStat) -> Result<RunReport> {
    let mut report = RunReport::new("exact");
    report.param("m", m);
    report.param("n", n);
    report.param("b", b);
    let (mu, nu, bu) = (m as u64, n as u64, b as u64);
    match stat {
        ExactStat::Overflow => {
            let e = expected_overflow_exact(mu, nu, bu)?;
            report.push(exact_row("expected overflow", &e));
            if n <= b * m {
                let alt = expected_overflow_alt(mu, nu, bu)?;
                let name = if alt.ill_conditioned {
                    "expected overflow, alternating sum (ill-conditioned)"
                } else {
                    "expected overflow, alternating sum"
                };
                report.push(ReportRow::value(name, "exact", alt.value));
            }
        }
        ExactStat::Displacement => {
            report.push(exact_row("expected displacement", &expected_displacement_exact(mu, nu, bu)?));
        }
        ExactStat::Block => {
            report.push(exact_row("expected last block length", &expected_block_exact(m, n, b)?));
            for (k, p) in block_law_exact(m, n, b)?.iter().enumerate().skip(1) {
                report.push(exact_row(format!("P(B = {k})"), p));
            }
        }
        ExactStat::LastNotFull => {
            for d in 0..b {
                let c = count_more_than_d_empty(m, n, d, b)?;
                let row = ReportRow::value(format!("Q(m,n,{d})"), "exact", c.to_f64().unwrap_or(f64::NAN));
                report.push(row.with_exact(c.to_string()));
            }
        }
        ExactStat::SearchB1 => {
            if b != 1 {
                return Err(Error::Domain("search_b1 needs b = 1"));
            }
            let (mean, var) = successful_search_b1(mu, nu)?;
            report.push(ReportRow::value("successful search mean", "exact", mean));
            report.push(ReportRow::value("successful search variance", "exact", var));
            report.push(ReportRow::value(
                "tabulated exact search length (1 + Q0(m,n))/2",
                "exact",
                search_length_exact_b1(m, n),
            ));
        }
        ExactStat::FcfsB1 => {
            if b != 1 {
                return Err(Error::Domain("fcfs_b1 needs b = 1"));
            }
            for (k, p) in fcfs_exact_law_b1(mu, nu)?.iter().enumerate() {
                report.push(exact_row(format!("P(D_FCFS = {k})"), p));
            }
        }
        ExactStat::FullTable => {
            let (exact, asym) = full_table_displacement(bu, mu)?;
            report.push(ReportRow::value("full table mean displacement", "exact", exact));
            report.push(ReportRow::value("full table mean displacement, asymptotic", "analytic", asym));
            if b == 1 {
                let (mean, var) = full_table_b1_asym(mu);
                report.push(ReportRow::value("full table search mean, asymptotic", "analytic", mean));
                report.push(ReportRow::value("full table search variance, asymptotic", "analytic", var));
            }
        }
    }
    Ok(report)
}

/// Monte Carlo run. With Poisson filling, statistics of a cyclic table are
/// z-tested against the Poisson-model laws, and the parking success frequency
/// against the probability of no overflow.
pub fn cmd_simulate(spec: &SimSpec, kmax: usize) -> Result<RunReport> {
    let mut report = RunReport::new("simulate");
    report.param("m", spec.m);
    report.param("b", spec.b);
    match spec.filling {
        Filling::Exact(n) => report.param("n", n),
        Filling::Poisson(alpha) => report.param("alpha", alpha),
    }
    report.param(
        "topology",
        match spec.topology {
            Topology::Cyclic => "cyclic",
            Topology::Parking => "parking",
        },
    );
    report.param("reps", spec.reps);
    report.param("seed", spec.seed);
    let sim = monte_carlo(spec)?;
    let ctx = match spec.filling {
        Filling::Poisson(alpha) => Some(AnalyticContext::new(spec.b, alpha)?),
        Filling::Exact(_) => None,
    };
    for &stat in &spec.statistics {
        let hist = sim.get(stat).ok_or(Error::Domain("missing histogram"))?;
        let name = stat.name();
        let analytic = match spec.topology {
            Topology::Cyclic => ctx.as_ref().zip(stat.analytic()),
            Topology::Parking => None,
        };
        match (stat, analytic) {
            (SimStatistic::NoOverflow, _) => {
                let value = hist.probability(1);
                let se = hist.probability_se(1);
                match &ctx {
                    Some(c) => report.push(ReportRow::z_test(
                        "parking success frequency",
                        value,
                        se,
                        c.prob_no_overflow()?,
                        Z_LIMIT,
                    )),
                    None => {
                        let mut row = ReportRow::value("parking success frequency", "simulated", value);
                        row.stderr = Some(se);
                        report.push(row);
                    }
                }
            }
            (_, Some((c, s))) => {
                let law = c.pmf(s, kmax)?;
                let size_biased = stat == SimStatistic::Bhat;
                let lump = |k: usize| if size_biased { k.max(1) as f64 } else { 1.0 };
                report.extend(validate::compare_law(name, hist, &law, c.mean(s)?, kmax + 1, lump));
            }
            _ => {
                let mut row = ReportRow::value(format!("{name} mean"), "simulated", hist.mean);
                row.stderr = Some(hist.mean_se);
                report.push(row);
                for k in 0..=kmax.min(hist.pmf.len().saturating_sub(1)) {
                    let mut row = ReportRow::value(format!("{name} P(={k})"), "simulated", hist.probability(k));
                    row.stderr = Some(hist.probability_se(k));
                    report.push(row);
                }
            }
        }
    }
    Ok(report)
}

pub fn cmd_validate(suite: Suite, scale: Scale, seed: u64, threads: usize) -> Result<RunReport> {
    validate::run_suite(suite, scale, seed, threads)
}

pub fn cmd_tables(which: &str) -> Result<RunReport> {
    tables::table_by_name(which)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_rejects_bad_load() {
        assert!(cmd_analytic(1, 0.0, Statistic::Q, 5).is_err());
        assert!(cmd_analytic(1, 1.0, Statistic::Q, 5).is_err());
    }

    #[test]
    fn analytic_fcfs_mean() {
        let r = cmd_analytic(1, 0.8, Statistic::DFcfs, 5).unwrap();
        assert!((r.rows[0].value.unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn exact_small_values() {
        let r = cmd_exact(2, 2, 1, ExactStat::Overflow).unwrap();
        assert_eq!(r.rows[0].exact.as_deref(), Some("1/4"));
        let r = cmd_exact(2, 1, 1, ExactStat::Block).unwrap();
        assert_eq!(r.rows[0].exact.as_deref(), Some("2"));
        let r = cmd_exact(500, 450, 1, ExactStat::SearchB1).unwrap();
        assert!((r.rows[2].value.unwrap() - 4.889).abs() < 1e-3);
        assert!(cmd_exact(5, 3, 2, ExactStat::SearchB1).is_err());
    }

    #[test]
    fn exact_names() {
        assert_eq!(ExactStat::from_name("search-b1"), Some(ExactStat::SearchB1));
        assert_eq!(ExactStat::from_name("nope"), None);
    }
}
