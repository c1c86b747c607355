//! File formats: two-column CSV data and the JSON profile descriptor.
//!
//! All CSV output is UTF-8 with LF line endings, one header row, and decimal
//! values printed with 17 significant digits so a value survives a
//! write/read round trip bit-exactly.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::media::{ImpedanceProfile, Interval, Medium, StepMedium};

/// 17-significant-digit decimal rendering (round-trip safe for f64).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows<W: Write>(out: &mut W, header: &str, rows: &[Vec<f64>]) -> Result<()> {
    out.write_all(header.as_bytes())?;
    out.write_all(b"\n")?;
    for row in rows {
        let line: Vec<String> = row.iter().map(|v| fmt_f64(*v)).collect();
        out.write_all(line.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

fn read_rows(path: &Path, header: &str) -> Result<Vec<Vec<f64>>> {
    let file = std::fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::Parse(format!("{}: empty file", path.display())))??;
    if first.trim() != header {
        return Err(Error::Parse(format!(
            "{}: expected header '{header}', found '{first}'",
            path.display()
        )));
    }
    let cols = header.split(',').count();
    let mut rows = Vec::new();
    for (i, line) in lines.enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let vals: Vec<f64> = line
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|e| Error::Parse(format!("{}: row {}: {e}", path.display(), i + 2)))
            })
            .collect::<Result<_>>()?;
        if vals.len() != cols {
            return Err(Error::Parse(format!(
                "{}: row {} has {} columns, expected {cols}",
                path.display(),
                i + 2,
                vals.len()
            )));
        }
        rows.push(vals);
    }
    Ok(rows)
}

/// Write impedance samples as `x,zeta`.
pub fn write_impedance_csv(path: &Path, xs: &[f64], zeta: &[f64]) -> Result<()> {
    let rows: Vec<Vec<f64>> = xs.iter().zip(zeta).map(|(x, z)| vec![*x, *z]).collect();
    let mut f = std::fs::File::create(path)?;
    write_rows(&mut f, "x,zeta", &rows)
}

/// Read `x,zeta` impedance samples.
pub fn read_impedance_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let rows = read_rows(path, "x,zeta")?;
    Ok(rows.iter().map(|r| (r[0], r[1])).unzip())
}

/// Write α samples as `x,alpha`.
pub fn write_alpha_csv(path: &Path, xs: &[f64], alpha: &[f64]) -> Result<()> {
    let rows: Vec<Vec<f64>> = xs.iter().zip(alpha).map(|(x, a)| vec![*x, *a]).collect();
    let mut f = std::fs::File::create(path)?;
    write_rows(&mut f, "x,alpha", &rows)
}

/// Write echo data as `t,d`.
pub fn write_data_csv(path: &Path, times: &[f64], data: &[f64]) -> Result<()> {
    let rows: Vec<Vec<f64>> = times.iter().zip(data).map(|(t, d)| vec![*t, *d]).collect();
    let mut f = std::fs::File::create(path)?;
    write_rows(&mut f, "t,d", &rows)
}

/// Read `t,d` echo data.
pub fn read_data_csv(path: &Path) -> Result<(Vec<f64>, Vec<f64>)> {
    let rows = read_rows(path, "t,d")?;
    Ok(rows.iter().map(|r| (r[0], r[1])).unzip())
}

/// Write a sampled spectrum as `omega,re,im`.
pub fn write_spectrum_csv(path: &Path, omegas: &[f64], values: &[Complex64]) -> Result<()> {
    let rows: Vec<Vec<f64>> = omegas
        .iter()
        .zip(values)
        .map(|(w, v)| vec![*w, v.re, v.im])
        .collect();
    let mut f = std::fs::File::create(path)?;
    write_rows(&mut f, "omega,re,im", &rows)
}

/// Write an almost-periodic series as `lambda,re,im`.
pub fn write_ap_csv(path: &Path, terms: &[(f64, Complex64)]) -> Result<()> {
    let rows: Vec<Vec<f64>> = terms.iter().map(|(l, c)| vec![*l, c.re, c.im]).collect();
    let mut f = std::fs::File::create(path)?;
    write_rows(&mut f, "lambda,re,im", &rows)
}

/// JSON profile descriptor:
/// `{ "kind": "paper53" | "samples" | "exp" | "const" | "step", "params": {...}, "x0": ..., "x1": ... }`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileDescriptor {
    pub kind: String,
    #[serde(default)]
    pub params: serde_json::Value,
    pub x0: f64,
    pub x1: f64,
}

impl ProfileDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("profile descriptor: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serializes")
    }

    fn param_f64(&self, name: &str, default: Option<f64>) -> Result<f64> {
        match self.params.get(name) {
            Some(v) => v
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("parameter '{name}' must be a number"))),
            None => default.ok_or_else(|| Error::Parse(format!("missing parameter '{name}'"))),
        }
    }

    fn param_vec(&self, name: &str) -> Result<Vec<f64>> {
        let v = self
            .params
            .get(name)
            .ok_or_else(|| Error::Parse(format!("missing parameter '{name}'")))?;
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse(format!("parameter '{name}' must be an array")))?;
        arr.iter()
            .map(|x| {
                x.as_f64()
                    .ok_or_else(|| Error::Parse(format!("'{name}' entries must be numbers")))
            })
            .collect()
    }

    /// Realize the descriptor as a medium.
    pub fn build(&self) -> Result<Medium> {
        match self.kind.as_str() {
            "paper53" => {
                let a = self.param_f64("a", Some(5.0))?;
                let b = self.param_f64("b", Some(15.0))?;
                let c = self.param_f64("c", Some(0.065))?;
                let d = self.param_f64("d", Some(std::f64::consts::PI / 10.0))?;
                Ok(Medium::Profile(ImpedanceProfile::paper53_with(
                    self.x0, self.x1, a, b, c, d,
                )?))
            }
            "exp" => {
                let alpha0 = self.param_f64("alpha0", None)?;
                Ok(Medium::Profile(ImpedanceProfile::exponential(
                    self.x0, self.x1, alpha0,
                )?))
            }
            "const" => {
                let value = self.param_f64("value", Some(1.0))?;
                Ok(Medium::Profile(ImpedanceProfile::constant(
                    self.x0, self.x1, value,
                )?))
            }
            "samples" => {
                let xs = self.param_vec("x")?;
                let zs = self.param_vec("zeta")?;
                Ok(Medium::Profile(ImpedanceProfile::from_samples(xs, zs)?))
            }
            "step" => {
                let jumps = self.param_vec("jumps")?;
                let values = self.param_vec("values")?;
                Ok(Medium::Step(StepMedium::new(
                    Interval::new(self.x0, self.x1)?,
                    jumps,
                    values,
                )?))
            }
            other => Err(Error::Parse(format!("unknown profile kind '{other}'"))),
        }
    }
}
