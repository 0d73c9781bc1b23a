//! Sweeps behind the coherence figures: rotated number states, squeezed
//! coherent states and displaced number states.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::infinite::{fock_report, number_statistics};
use crate::quantifiers::QuantifierReport;
use crate::states::{
    displaced_number_state_with, energy_split, rotated_number_state, squeezed_coherent_state_with,
    Construction, TruncatedState, TruncationConfig,
};
use crate::sweep::{ParamValue, SweepTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

impl FigureId {
    pub const ALL: [FigureId; 6] = [
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
        }
    }

    fn keys(self) -> &'static [&'static str] {
        match self {
            FigureId::Fig2 => &["nt"],
            FigureId::Fig3 => &["nt", "m"],
            FigureId::Fig4 => &["r", "R"],
            FigureId::Fig5 => &["R", "r"],
            FigureId::Fig6 => &["nbar", "f"],
            FigureId::Fig7 => &["n0", "alpha"],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown figure {s:?}; expected fig2..fig7")))
    }
}

/// Grid overrides (`key=value`) plus truncation and construction choices.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureOptions {
    pub overrides: BTreeMap<String, String>,
    pub trunc: TruncationConfig,
    pub method: Construction,
}

impl Default for FigureOptions {
    fn default() -> Self {
        Self {
            overrides: BTreeMap::new(),
            trunc: TruncationConfig::default(),
            method: Construction::ClosedForm,
        }
    }
}

impl FigureOptions {
    /// Parses `key=value` pairs; `method`, `tail_tol` and `trunc_dim` are
    /// accepted alongside the figure's grid keys.
    pub fn with_sets<S: AsRef<str>>(mut self, sets: &[S]) -> Result<Self> {
        for s in sets {
            let s = s.as_ref();
            let (k, v) = s
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got {s:?}")))?;
            let (k, v) = (k.trim(), v.trim());
            match k {
                "method" => {
                    self.method = match v {
                        "operator" => Construction::Operator,
                        "closed_form" => Construction::ClosedForm,
                        _ => return Err(Error::Parse(format!("unknown method {v:?}"))),
                    }
                }
                "tail_tol" => self.trunc.tail_mass_tol = parse_f64(k, v)?,
                "trunc_dim" => {
                    self.trunc.dim = Some(parse_f64(k, v)? as usize);
                    self.trunc.auto_grow = false;
                }
                _ => {
                    self.overrides.insert(k.to_string(), v.to_string());
                }
            }
        }
        Ok(self)
    }
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::Parse(format!("{key}: cannot parse {v:?} as a number")))
}

/// `a:b:step` (inclusive) or a comma-separated list.
pub fn parse_grid(key: &str, text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let grid = match parts.as_slice() {
        [a, b, step] => {
            let (a, b, step) = (parse_f64(key, a)?, parse_f64(key, b)?, parse_f64(key, step)?);
            if step.is_nan() || step <= 0.0 || b < a {
                return Err(Error::Parse(format!("{key}: bad range {text:?}")));
            }
            let n = ((b - a) / step + 1e-9).floor() as usize;
            (0..=n).map(|k| a + k as f64 * step).collect()
        }
        [single] => single
            .split(',')
            .map(|x| parse_f64(key, x.trim()))
            .collect::<Result<Vec<f64>>>()?,
        _ => return Err(Error::Parse(format!("{key}: bad grid {text:?}"))),
    };
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("{key}: empty or non-finite grid")));
    }
    Ok(grid)
}

fn parse_int_grid(key: &str, text: &str) -> Result<Vec<u32>> {
    parse_grid(key, text)?
        .into_iter()
        .map(|x| {
            if x < 0.0 || x.fract() != 0.0 {
                Err(Error::Parse(format!("{key}: {x} is not a nonnegative integer")))
            } else {
                Ok(x as u32)
            }
        })
        .collect()
}

struct Grids<'a> {
    id: FigureId,
    opts: &'a FigureOptions,
}

impl Grids<'_> {
    fn real(&self, key: &str, default: &str) -> Result<Vec<f64>> {
        parse_grid(key, self.raw(key, default))
    }

    fn int(&self, key: &str, default: &str) -> Result<Vec<u32>> {
        parse_int_grid(key, self.raw(key, default))
    }

    fn raw<'b>(&'b self, key: &str, default: &'b str) -> &'b str {
        self.opts.overrides.get(key).map(String::as_str).unwrap_or(default)
    }

    fn check_keys(&self) -> Result<()> {
        for k in self.opts.overrides.keys() {
            if !self.id.keys().contains(&k.as_str()) {
                return Err(Error::Parse(format!(
                    "{} has no parameter {k:?}; known: {}",
                    self.id,
                    self.id.keys().join(", ")
                )));
            }
        }
        Ok(())
    }
}

const FOCK_EXTRAS: [&str; 3] = ["mean_n", "var_n", "gaussian_estimate"];

fn fock_row(t: TruncatedState) -> Result<(QuantifierReport, Vec<f64>)> {
    let report = fock_report(&t)?;
    let (mean, var) = number_statistics(&t.state.probabilities());
    let gauss = 2.0 * (2.0 * std::f64::consts::PI * var.max(0.0)).sqrt() - 1.0;
    Ok((report, vec![mean, var, gauss]))
}

fn finite_row(n: u32, m: u32) -> Result<(QuantifierReport, Vec<f64>)> {
    let psi = rotated_number_state(n, m)?;
    Ok((QuantifierReport::from_density(&psi.to_density())?, Vec::new()))
}

fn fock_meta(table: &mut SweepTable, opts: &FigureOptions) {
    let method = match opts.method {
        Construction::Operator => "operator",
        Construction::ClosedForm => "closed_form",
    };
    table.push_meta("construction", method);
    table.push_meta("tail_mass_tol", opts.trunc.tail_mass_tol);
    match opts.trunc.dim {
        Some(d) if !opts.trunc.auto_grow => table.push_meta("trunc_dim", d),
        _ => table.push_meta("trunc_dim", format!("auto (ceiling {})", opts.trunc.max_dim)),
    }
    table.push_meta(
        "reference",
        "thermal rho_T extrapolated to xi -> 1 (s_h, nc_h); c_h from amplitudes",
    );
}

fn squeeze_meta(table: &mut SweepTable) {
    table.push_meta("state", "D(R) S(-r) |0>, squeezing the phase quadrature");
    table.push_meta("displacement_axis", "R is the coherent amplitude (mean photons R^2 at r = 0)");
}

/// Runs one figure sweep.
pub fn figure(id: FigureId, opts: &FigureOptions) -> Result<SweepTable> {
    let g = Grids { id, opts };
    g.check_keys()?;
    let trunc = opts.trunc;
    let method = opts.method;
    match id {
        FigureId::Fig2 => {
            let nts = g.int("nt", "2:60:2")?;
            let mut t = SweepTable::new("fig2", &["nt", "n", "m"], &[]);
            t.push_meta("states", "SU(2) coherent (m = 0) and twin (n = m) rotated number states");
            let mut points = Vec::new();
            for nt in nts {
                points.push(ints(&[nt, nt, 0]));
                if nt % 2 == 0 && nt > 0 {
                    points.push(ints(&[nt, nt / 2, nt / 2]));
                }
            }
            t.fill(points, |p| finite_row(as_u32(p[1]), as_u32(p[2])));
            Ok(t)
        }
        FigureId::Fig3 => {
            let nts = g.int("nt", "50")?;
            let mut t = SweepTable::new("fig3", &["nt", "n", "m"], &[]);
            t.push_meta("states", "rotated number states |NT - m>|m>");
            let mut points = Vec::new();
            for nt in nts {
                let ms = g.int("m", &format!("0:{nt}:1"))?;
                for m in ms.into_iter().filter(|&m| m <= nt) {
                    points.push(ints(&[nt, nt - m, m]));
                }
            }
            t.fill(points, |p| finite_row(as_u32(p[1]), as_u32(p[2])));
            Ok(t)
        }
        FigureId::Fig4 | FigureId::Fig5 => {
            let (outer_key, inner_key, outer_default, inner_default) = if id == FigureId::Fig4 {
                ("r", "R", "0,0.5,1", "0:6:0.25")
            } else {
                ("R", "r", "1,2,4", "0:1.5:0.05")
            };
            let outer = g.real(outer_key, outer_default)?;
            let inner = g.real(inner_key, inner_default)?;
            let mut t = SweepTable::new(id.name(), &[outer_key, inner_key], &FOCK_EXTRAS);
            squeeze_meta(&mut t);
            fock_meta(&mut t, opts);
            let points = outer
                .iter()
                .flat_map(|&o| inner.iter().map(move |&i| vec![ParamValue::Real(o), ParamValue::Real(i)]))
                .collect();
            t.fill(points, |p| {
                let (a, b) = (p[0].as_f64(), p[1].as_f64());
                let (big_r, r) = if id == FigureId::Fig4 { (b, a) } else { (a, b) };
                fock_row(squeezed_coherent_state_with(big_r, r, &trunc, method)?)
            });
            Ok(t)
        }
        FigureId::Fig6 => {
            let nbars = g.real("nbar", "16,20,30,40")?;
            let fs = g.real("f", "0:1:0.01")?;
            let mut t = SweepTable::new("fig6", &["nbar", "f", "R", "r"], &FOCK_EXTRAS);
            squeeze_meta(&mut t);
            t.push_meta("energy_split", "sinh^2 r = f nbar, R^2 = (1 - f) nbar");
            fock_meta(&mut t, opts);
            let mut points = Vec::new();
            for &nbar in &nbars {
                for &f in &fs {
                    let (big_r, r) = energy_split(nbar, f.min(1.0))?;
                    points.push(vec![
                        ParamValue::Real(nbar),
                        ParamValue::Real(f),
                        ParamValue::Real(big_r),
                        ParamValue::Real(r),
                    ]);
                }
            }
            t.fill(points, |p| {
                fock_row(squeezed_coherent_state_with(p[2].as_f64(), p[3].as_f64(), &trunc, method)?)
            });
            Ok(t)
        }
        FigureId::Fig7 => {
            let n0s = g.int("n0", "0,1,2,4")?;
            let alphas = g.real("alpha", "0:6:0.1")?;
            let mut t = SweepTable::new("fig7", &["n0", "alpha"], &FOCK_EXTRAS);
            t.push_meta("state", "D(alpha) |n0> with real alpha >= 0");
            fock_meta(&mut t, opts);
            let points = n0s
                .iter()
                .flat_map(|&n0| {
                    alphas
                        .iter()
                        .map(move |&a| vec![ParamValue::Integer(n0 as i64), ParamValue::Real(a)])
                })
                .collect();
            t.fill(points, |p| {
                let alpha = Complex64::new(p[1].as_f64(), 0.0);
                fock_row(displaced_number_state_with(alpha, as_u32(p[0]) as usize, &trunc, method)?)
            });
            Ok(t)
        }
    }
}

fn ints(v: &[u32]) -> Vec<ParamValue> {
    v.iter().map(|&x| ParamValue::Integer(x as i64)).collect()
}

fn as_u32(p: ParamValue) -> u32 {
    p.as_f64() as u32
}

/// `(x, c_h)` for valid rows whose parameter columns match every
/// `(column, value)` in `fixed`, with `x` taken from column `x_col`.
pub fn coherence_curve(table: &SweepTable, fixed: &[(usize, f64)], x_col: usize) -> Vec<(f64, f64)> {
    table
        .valid_rows()
        .filter(|(p, _)| fixed.iter().all(|&(i, v)| (p[i].as_f64() - v).abs() < 1e-12))
        .map(|(p, r)| (p[x_col].as_f64(), r.c_h))
        .collect()
}

/// The `x` at which a curve attains its largest coherence.
pub fn argmax(curve: &[(f64, f64)]) -> Option<(f64, f64)> {
    curve.iter().copied().max_by(|a, b| a.1.total_cmp(&b.1))
}
