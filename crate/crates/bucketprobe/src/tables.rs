//! Theoretical columns of the classic bucket hashing comparison tables, next
//! to the printed experimental and theoretical values kept in `data/`.

use serde::Deserialize;

use bucketprobe_core::exact::full_table_displacement;
use bucketprobe_core::poisson::AnalyticContext;
use bucketprobe_core::specialfn::ramanujan_q;
use bucketprobe_core::{Error, Result};

use crate::report::{ReportRow, RunReport};

const T3_CSV: &str = include_str!("../data/t3.csv");
const T4_CSV: &str = include_str!("../data/t4.csv");
const T5A_CSV: &str = include_str!("../data/t5a.csv");
const T5B_CSV: &str = include_str!("../data/t5b.csv");

/// Tolerance for four-decimal probabilities and three-decimal search lengths
/// printed for `b = 20`.
pub const TOL_FINE: f64 = 5e-4;
/// Tolerance for the `b = 1` columns.
pub const TOL_B1: f64 = 1e-3;
/// Tolerance for the `b = 2` column and the multi-`b` table.
pub const TOL_COARSE: f64 = 5e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableId {
    T3,
    T4,
    T5a,
    T5b,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T3, TableId::T4, TableId::T5a, TableId::T5b];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T3 => "t3",
            TableId::T4 => "t4",
            TableId::T5a => "t5a",
            TableId::T5b => "t5b",
        }
    }

    pub fn from_name(name: &str) -> Option<TableId> {
        TableId::ALL.into_iter().find(|t| t.name().eq_ignore_ascii_case(name))
    }
}

#[derive(Debug, Deserialize)]
pub struct T3Row {
    pub length: String,
    pub records: u64,
    pub length_times_records: u64,
    pub empirical: f64,
    pub theoretical: f64,
}

#[derive(Debug, Deserialize)]
pub struct T4Row {
    pub percent: u32,
    pub run1: f64,
    pub run2: f64,
    pub run3: f64,
    pub run4: f64,
    pub theoretical: f64,
}

#[derive(Debug, Deserialize)]
pub struct T5aRow {
    pub b: usize,
    pub bm: usize,
    pub runs: u32,
    pub percent: u32,
    pub experimental: f64,
    pub theoretical: f64,
}

#[derive(Debug, Deserialize)]
pub struct T5bRow {
    pub b: usize,
    pub percent: u32,
    pub experimental: f64,
    pub poisson: Option<f64>,
    pub exact: Option<f64>,
}

fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Vec<T> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .expect("embedded table data is well formed")
}

pub fn golden_t3() -> Vec<T3Row> {
    parse(T3_CSV)
}

pub fn golden_t4() -> Vec<T4Row> {
    parse(T4_CSV)
}

pub fn golden_t5a() -> Vec<T5aRow> {
    parse(T5A_CSV)
}

pub fn golden_t5b() -> Vec<T5bRow> {
    parse(T5B_CSV)
}

/// Search length `1 + E D_FCFS` in the Poisson model.
pub fn search_length_poisson(b: usize, alpha: f64) -> Result<f64> {
    Ok(1.0 + AnalyticContext::new(b, alpha)?.mean_d_fcfs()?)
}

/// Search length in a full table with `m` buckets, from the asymptotic
/// expansion of the Robin Hood (equivalently FCFS) mean displacement.
pub fn search_length_full(b: usize, m: usize) -> Result<f64> {
    Ok(1.0 + full_table_displacement(b as u64, m as u64)?.1)
}

/// The `b = 1` exact search length as tabulated, `(1 + Q_0(m, n)) / 2`.
pub fn search_length_exact_b1(m: usize, n: usize) -> f64 {
    (1.0 + ramanujan_q(0, m as u64, n as u64)) / 2.0
}

fn load(percent: u32) -> f64 {
    percent as f64 / 100.0
}

/// FCFS displacement law for `b = 20`, `α = 0.9`, shown as search lengths.
pub fn t3() -> Result<RunReport> {
    let mut report = RunReport::new("tables t3");
    report.param("b", 20);
    report.param("alpha", 0.9);
    let golden = golden_t3();
    let ctx = AnalyticContext::new(20, 0.9)?;
    let kmax = golden.len() - 2;
    let pmf = ctx.pmf_d_fcfs(kmax)?;
    for (k, row) in golden.iter().take(kmax + 1).enumerate() {
        let name = format!("P(search length = {})", row.length);
        report.push(ReportRow::within(&name, "analytic", pmf.values[k], row.theoretical, TOL_FINE));
        report.push(ReportRow::value(format!("{name} experimental"), "golden", row.empirical));
    }
    let last = golden.last().expect("mean row");
    let mean = 1.0 + ctx.mean_d_fcfs()?;
    report.push(ReportRow::within("mean search length", "analytic", mean, last.theoretical, TOL_FINE));
    report.push(ReportRow::value("mean search length experimental", "golden", last.empirical));
    Ok(report)
}

/// Average search length for `b = 20`, `m = 500` against the load.
pub fn t4() -> Result<RunReport> {
    let mut report = RunReport::new("tables t4");
    report.param("b", 20);
    report.param("m", 500);
    for row in golden_t4() {
        let value = if row.percent == 100 {
            search_length_full(20, 500)?
        } else {
            search_length_poisson(20, load(row.percent))?
        };
        let name = format!("search length at {}%", row.percent);
        report.push(ReportRow::within(&name, "analytic", value, row.theoretical, TOL_FINE));
        let runs = (row.run1 + row.run2 + row.run3 + row.run4) / 4.0;
        report.push(ReportRow::value(format!("{name} experimental mean of runs"), "golden", runs));
    }
    Ok(report)
}

/// Buckets used for the full-table row of the multi-`b` table.
pub const T5A_FULL_BUCKETS: usize = 500;

/// Average search length for several bucket sizes.
pub fn t5a() -> Result<RunReport> {
    let mut report = RunReport::new("tables t5a");
    report.param("full_table_m", T5A_FULL_BUCKETS);
    for row in golden_t5a() {
        let value = if row.percent == 100 {
            search_length_full(row.b, T5A_FULL_BUCKETS)?
        } else {
            search_length_poisson(row.b, load(row.percent))?
        };
        let name = format!("b={} search length at {}%", row.b, row.percent);
        report.push(ReportRow::within(&name, "analytic", value, row.theoretical, TOL_COARSE));
        report.push(ReportRow::value(format!("{name} experimental"), "golden", row.experimental));
    }
    Ok(report)
}

/// Average search length for `b = 1` and `b = 2`, `m = 500`.
pub fn t5b() -> Result<RunReport> {
    let m = 500;
    let mut report = RunReport::new("tables t5b");
    report.param("m", m);
    for row in golden_t5b() {
        let prefix = format!("b={} at {}%", row.b, row.percent);
        if let Some(printed) = row.poisson {
            let tol = if row.b == 1 { TOL_B1 } else { TOL_COARSE };
            let value = if row.percent == 100 {
                search_length_full(row.b, m)?
            } else {
                search_length_poisson(row.b, load(row.percent))?
            };
            report.push(ReportRow::within(format!("{prefix} Poisson"), "analytic", value, printed, tol));
        }
        if let Some(printed) = row.exact {
            let n = row.b * m * row.percent as usize / 100;
            let value = search_length_exact_b1(m, n);
            report.push(ReportRow::within(format!("{prefix} exact"), "exact", value, printed, TOL_B1));
        }
        report.push(ReportRow::value(format!("{prefix} experimental"), "golden", row.experimental));
    }
    Ok(report)
}

pub fn table_report(id: TableId) -> Result<RunReport> {
    match id {
        TableId::T3 => t3(),
        TableId::T4 => t4(),
        TableId::T5a => t5a(),
        TableId::T5b => t5b(),
    }
}

/// Looks up a table by name.
pub fn table_by_name(name: &str) -> Result<RunReport> {
    let id = TableId::from_name(name).ok_or(Error::Domain("unknown table id"))?;
    table_report(id)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_data_parses() {
        assert_eq!(golden_t3().len(), 15);
        assert_eq!(golden_t4().len(), 10);
        assert_eq!(golden_t5a().len(), 60);
        let t5b = golden_t5b();
        assert_eq!(t5b.len(), 18);
        assert!(t5b[9].poisson.is_none());
        assert!(t5b[10].exact.is_none());
        let t3 = golden_t3();
        assert_eq!(t3.iter().take(14).map(|r| r.records).sum::<u64>(), 9000);
        assert_eq!(t3.iter().take(14).map(|r| r.length_times_records).sum::<u64>(), 10134);
    }

    #[test]
    fn unknown_table_is_rejected() {
        assert!(table_by_name("t9").is_err());
        assert_eq!(TableId::from_name("T5B"), Some(TableId::T5b));
    }
}
