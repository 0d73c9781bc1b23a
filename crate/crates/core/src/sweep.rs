//! Parameter sweeps and their CSV/JSON encodings.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantifiers::{QuantifierReport, Reference};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamValue {
    Integer(i64),
    Real(f64),
}

impl ParamValue {
    pub fn as_f64(self) -> f64 {
        match self {
            ParamValue::Integer(i) => i as f64,
            ParamValue::Real(x) => x,
        }
    }

    fn cell(self) -> String {
        match self {
            ParamValue::Integer(i) => i.to_string(),
            ParamValue::Real(x) => float_cell(x),
        }
    }
}

fn float_cell(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub params: Vec<ParamValue>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<QuantifierReport>,
    /// Values for [`SweepTable::extra_columns`], when the row is valid.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extras: Vec<f64>,
    pub valid: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl SweepRow {
    /// Wraps an evaluation; errors and reports that fail their own checks
    /// become invalid rows.
    pub fn from_result(params: Vec<ParamValue>, result: Result<(QuantifierReport, Vec<f64>)>) -> Self {
        match result {
            Ok((report, extras)) => {
                let bad_extra = extras.iter().any(|x| !x.is_finite());
                match report.check() {
                    Ok(()) if !bad_extra => Self {
                        params,
                        report: Some(report),
                        extras,
                        valid: true,
                        reason: None,
                    },
                    Ok(()) => Self::invalid(params, "non-finite derived column".into()),
                    Err(reason) => Self::invalid(params, reason),
                }
            }
            Err(e) => Self::invalid(params, e.to_string()),
        }
    }

    pub fn invalid(params: Vec<ParamValue>, reason: String) -> Self {
        Self {
            params,
            report: None,
            extras: Vec::new(),
            valid: false,
            reason: Some(reason),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub family: String,
    pub parameter_columns: Vec<String>,
    pub extra_columns: Vec<String>,
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<SweepRow>,
}

const REPORT_COLUMNS: [&str; 15] = [
    "dim",
    "reference",
    "c_h",
    "s_h",
    "nc_h",
    "c_hs",
    "s_hs",
    "nc_hs",
    "pythagoras_residual_h",
    "pythagoras_residual_hs",
    "x_sum",
    "renyi_half",
    "tail_mass",
    "guard_amplitude",
    "xi_max",
];

fn report_cells(r: &QuantifierReport) -> Vec<String> {
    let (reference, xi_max) = match r.reference {
        Reference::MaximallyMixed { .. } => ("maximally_mixed", String::new()),
        Reference::ThermalLimit { xi_max } => ("thermal_limit", float_cell(xi_max)),
    };
    let (tail, guard) = match r.truncation {
        Some(t) => (float_cell(t.tail_mass), float_cell(t.guard_amplitude)),
        None => (String::new(), String::new()),
    };
    vec![
        r.dim.to_string(),
        reference.to_string(),
        float_cell(r.c_h),
        float_cell(r.s_h),
        float_cell(r.nc_h),
        float_cell(r.c_hs),
        float_cell(r.s_hs),
        float_cell(r.nc_hs),
        float_cell(r.pythagoras_residual_h),
        float_cell(r.pythagoras_residual_hs),
        float_cell(r.x_sum),
        float_cell(r.renyi_half),
        tail,
        guard,
        xi_max,
    ]
}

impl SweepTable {
    pub fn new(family: impl Into<String>, parameter_columns: &[&str], extra_columns: &[&str]) -> Self {
        Self {
            family: family.into(),
            parameter_columns: parameter_columns.iter().map(|s| s.to_string()).collect(),
            extra_columns: extra_columns.iter().map(|s| s.to_string()).collect(),
            metadata: vec![
                ("family".into(), String::new()),
                ("library_version".into(), env!("CARGO_PKG_VERSION").into()),
            ],
            rows: Vec::new(),
        }
        .with_family_meta()
    }

    fn with_family_meta(mut self) -> Self {
        self.metadata[0].1 = self.family.clone();
        self
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.metadata.push((key.to_string(), value.to_string()));
    }

    /// Evaluates `points` in parallel; rows come back in input order, then
    /// are sorted by their parameter tuple.
    pub fn fill<F>(&mut self, points: Vec<Vec<ParamValue>>, eval: F)
    where
        F: Fn(&[ParamValue]) -> Result<(QuantifierReport, Vec<f64>)> + Sync,
    {
        let mut rows: Vec<SweepRow> = points
            .into_par_iter()
            .map(|p| {
                let result = eval(&p);
                SweepRow::from_result(p, result)
            })
            .collect();
        rows.sort_by(|a, b| {
            a.params
                .iter()
                .zip(b.params.iter())
                .map(|(x, y)| x.as_f64().total_cmp(&y.as_f64()))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        self.rows = rows;
    }

    pub fn header(&self) -> Vec<String> {
        let mut h = self.parameter_columns.clone();
        h.extend(REPORT_COLUMNS.iter().map(|s| s.to_string()));
        h.extend(self.extra_columns.iter().cloned());
        h.push("valid".into());
        h.push("reason".into());
        h
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        for (k, v) in &self.metadata {
            writeln!(out, "# {k}: {v}")?;
        }
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(std::io::Error::other(e));
        w.write_record(self.header()).map_err(io)?;
        let blank = REPORT_COLUMNS.len() + self.extra_columns.len();
        for row in &self.rows {
            let mut rec: Vec<String> = row.params.iter().map(|p| p.cell()).collect();
            match &row.report {
                Some(r) if row.valid => {
                    rec.extend(report_cells(r));
                    rec.extend(row.extras.iter().map(|&x| float_cell(x)));
                }
                _ => rec.extend(std::iter::repeat_n(String::new(), blank)),
            }
            rec.push(row.valid.to_string());
            rec.push(row.reason.clone().unwrap_or_default());
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("tables always serialize")
    }

    pub fn valid_rows(&self) -> impl Iterator<Item = (&[ParamValue], &QuantifierReport)> {
        self.rows
            .iter()
            .filter(|r| r.valid)
            .filter_map(|r| r.report.as_ref().map(|rep| (r.params.as_slice(), rep)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::qubit_from_bloch;

    fn table() -> SweepTable {
        let mut t = SweepTable::new("demo", &["x"], &["twice"]);
        t.fill(
            vec![vec![ParamValue::Real(0.5)], vec![ParamValue::Real(0.0)], vec![ParamValue::Real(2.0)]],
            |p| {
                let x = p[0].as_f64();
                let r = QuantifierReport::from_density(&qubit_from_bloch([x, 0.0, 0.0])?)?;
                Ok((r, vec![2.0 * x]))
            },
        );
        t
    }

    #[test]
    fn rows_sorted_and_invalid_marked() {
        let t = table();
        let xs: Vec<f64> = t.rows.iter().map(|r| r.params[0].as_f64()).collect();
        assert_eq!(xs, vec![0.0, 0.5, 2.0]);
        assert!(t.rows[0].valid && t.rows[1].valid);
        assert!(!t.rows[2].valid);
        assert!(t.rows[2].reason.as_deref().unwrap().contains("Bloch"));
    }

    #[test]
    fn csv_layout() {
        let csv = table().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "# family: demo");
        assert!(lines[1].starts_with("# library_version: "));
        assert!(lines[2].starts_with("x,dim,reference,c_h,"));
        assert!(lines[2].ends_with(",twice,valid,reason"));
        assert!(lines[4].starts_with("5.0000000000000000e-1,2,maximally_mixed,5.0000000000000000e-1,"));
        assert!(!csv.contains("NaN") && !csv.contains("inf"));
        assert_eq!(csv, table().to_csv().unwrap());
    }

    #[test]
    fn json_round_trip() {
        let t = table();
        let back: SweepTable = serde_json::from_str(&t.to_json()).unwrap();
        assert_eq!(back, t);
    }
}
