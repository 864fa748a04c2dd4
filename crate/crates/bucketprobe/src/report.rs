//! Run reports and their JSON and CSV renderings.

use std::io::Write;

use serde::Serialize;

/// One reported quantity, optionally compared against a reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub name: String,
    /// `analytic`, `exact` or `simulated`.
    pub provenance: String,
    pub value: Option<f64>,
    /// Exact rational rendering, when available.
    pub exact: Option<String>,
    /// Value compared against (golden, analytic or exact).
    pub reference: Option<f64>,
    pub stderr: Option<f64>,
    pub z_score: Option<f64>,
    pub tolerance: Option<f64>,
    pub pass: Option<bool>,
}

impl ReportRow {
    pub fn value(name: impl Into<String>, provenance: &str, value: f64) -> Self {
        ReportRow {
            name: name.into(),
            provenance: provenance.to_string(),
            value: Some(value),
            exact: None,
            reference: None,
            stderr: None,
            z_score: None,
            tolerance: None,
            pass: None,
        }
    }

    /// `|value - reference| ≤ tolerance`.
    pub fn within(name: impl Into<String>, provenance: &str, value: f64, reference: f64, tolerance: f64) -> Self {
        let pass = (value - reference).abs() <= tolerance;
        ReportRow {
            reference: Some(reference),
            tolerance: Some(tolerance),
            pass: Some(pass),
            ..ReportRow::value(name, provenance, value)
        }
    }

    /// Simulated `value` with standard error `stderr` against an analytic
    /// reference; passes when `|z| ≤ limit`.
    pub fn z_test(name: impl Into<String>, value: f64, stderr: f64, reference: f64, limit: f64) -> Self {
        let z = if stderr > 0.0 {
            (value - reference) / stderr
        } else if value == reference {
            0.0
        } else {
            f64::INFINITY
        };
        ReportRow {
            reference: Some(reference),
            stderr: Some(stderr),
            z_score: Some(z.abs()),
            tolerance: Some(limit),
            pass: Some(z.abs() <= limit),
            ..ReportRow::value(name, "simulated", value)
        }
    }

    /// A boolean check with an optional measured value.
    pub fn check(name: impl Into<String>, provenance: &str, value: Option<f64>, pass: bool) -> Self {
        ReportRow {
            name: name.into(),
            provenance: provenance.to_string(),
            value,
            exact: None,
            reference: None,
            stderr: None,
            z_score: None,
            tolerance: None,
            pass: Some(pass),
        }
    }

    pub fn with_exact(mut self, exact: impl Into<String>) -> Self {
        self.exact = Some(exact.into());
        self
    }
}

/// The outcome of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub parameters: Vec<(String, String)>,
    pub rows: Vec<ReportRow>,
    pub pass: bool,
    /// Wall time in seconds; kept out of the rendered output so that repeated
    /// runs produce identical bytes.
    #[serde(skip)]
    pub wall_time: f64,
}

impl RunReport {
    pub fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            parameters: Vec::new(),
            rows: Vec::new(),
            pass: true,
            wall_time: 0.0,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.push((key.to_string(), value.to_string()));
    }

    pub fn push(&mut self, row: ReportRow) {
        if row.pass == Some(false) {
            self.pass = false;
        }
        self.rows.push(row);
    }

    pub fn extend(&mut self, rows: impl IntoIterator<Item = ReportRow>) {
        for row in rows {
            self.push(row);
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.pass == Some(false))
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    /// Header row plus one line per row.
    pub fn write_csv<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        if self.rows.is_empty() {
            w.write_record([
                "name",
                "provenance",
                "value",
                "exact",
                "reference",
                "stderr",
                "z_score",
                "tolerance",
                "pass",
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> csv::Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
    }
}
