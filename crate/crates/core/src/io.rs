//! File formats shared by the command-line tool and the tests: coefficient
//! and sample CSV files, matrix and report JSON, and barycentric
//! resampling of scattered samples.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::frac_ops::{Convention, OperatorKind, OperatorMatrix};
use crate::jacobi_basis::JacobiBasis;
use crate::zm_analysis::ZMReport;

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}

/// Shortest form that still carries 17 significant digits.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Writes `index,value` rows.
pub fn write_coefficients_csv<W: Write>(w: W, values: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "value"]).map_err(csv_err)?;
    for (i, v) in values.iter().enumerate() {
        out.write_record([i.to_string(), format_f64(*v)])
            .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::Parse(e.to_string()))
}

fn parse_number(field: &str, line: usize) -> Result<f64> {
    let v: f64 = field
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("line {line}: '{field}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::Parse(format!(
            "line {line}: non-finite value '{field}'"
        )));
    }
    Ok(v)
}

fn check_header<R: Read>(reader: &mut csv::Reader<R>, want: [&str; 2]) -> Result<()> {
    let header = reader.headers().map_err(csv_err)?;
    let got: Vec<&str> = header.iter().map(str::trim).collect();
    if got != want {
        return Err(Error::Parse(format!(
            "expected header '{}', found '{}'",
            want.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

/// Reads `index,value` rows; indices must run 0, 1, 2, ...
pub fn read_coefficients_csv<R: Read>(r: R) -> Result<Vec<f64>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    check_header(&mut reader, ["index", "value"])?;
    let mut values = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        if rec.len() != 2 {
            return Err(Error::Parse(format!(
                "line {line}: expected 2 fields, found {}",
                rec.len()
            )));
        }
        let idx: usize = rec[0]
            .parse()
            .map_err(|_| Error::Parse(format!("line {line}: bad index '{}'", &rec[0])))?;
        if idx != i {
            return Err(Error::Parse(format!(
                "line {line}: index {idx} out of sequence, expected {i}"
            )));
        }
        values.push(parse_number(&rec[1], line)?);
    }
    Ok(values)
}

/// Reads `x,fx` rows into two columns.
pub fn read_samples_csv<R: Read>(r: R) -> Result<(Vec<f64>, Vec<f64>)> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(r);
    check_header(&mut reader, ["x", "fx"])?;
    let (mut xs, mut fs) = (Vec::new(), Vec::new());
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let line = i + 2;
        if rec.len() != 2 {
            return Err(Error::Parse(format!(
                "line {line}: expected 2 fields, found {}",
                rec.len()
            )));
        }
        xs.push(parse_number(&rec[0], line)?);
        fs.push(parse_number(&rec[1], line)?);
    }
    Ok((xs, fs))
}

pub fn write_samples_csv<W: Write>(w: W, xs: &[f64], fs: &[f64]) -> Result<()> {
    write_columns_csv(w, ["x", "fx"], xs, fs)
}

/// Two-column CSV with an arbitrary header.
pub fn write_columns_csv<W: Write>(w: W, header: [&str; 2], xs: &[f64], fs: &[f64]) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(header).map_err(csv_err)?;
    for (x, f) in xs.iter().zip(fs) {
        out.write_record([format_f64(*x), format_f64(*f)])
            .map_err(csv_err)?;
    }
    out.flush().map_err(|e| Error::Parse(e.to_string()))
}

/// JSON layout of an operator matrix; `entries` are row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub kind: OperatorKind,
    pub n: usize,
    pub convention: Convention,
    pub entries: Vec<f64>,
}

impl MatrixFile {
    pub fn from_matrix(
        basis: &JacobiBasis,
        matrix: &OperatorMatrix,
        convention: Convention,
    ) -> Self {
        MatrixFile {
            alpha: matrix.alpha(),
            beta: basis.weight().beta(),
            gamma: basis.weight().gamma(),
            a: basis.interval().a(),
            b: basis.interval().b(),
            kind: matrix.kind(),
            n: matrix.size() - 1,
            convention,
            entries: matrix.entries_in(convention),
        }
    }
}

/// JSON number, or a string tag for values JSON cannot carry.
pub fn json_number(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else if v.is_nan() {
        json!("nan")
    } else if v > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn zm_report_json(zm: &ZMReport) -> Value {
    json!({
        "regime": zm.regime.as_str(),
        "lambda": json_number(zm.lambda),
        "growth_beta": json_number(zm.growth_beta),
        "nu": json_number(zm.nu),
        "p": json_number(zm.p),
        "q_sup": json_number(zm.q_sup),
        "probe_q": json_number(zm.probe_q),
        "series_value": zm.series_value.map_or(Value::Null, json_number),
        "series_converged": zm.series_converged,
        "constant_factor": json_number(zm.constant_factor),
    })
}

/// Piecewise barycentric Lagrange interpolant of degree `d`.
///
/// On each cell `[x_j, x_{j+1}]` the interpolant is the polynomial through
/// the `d + 1` samples nearest that cell. Only nearby data enter a value,
/// so a rough spot in the samples (such as `√x` at 0 on a clustered grid)
/// does not leak into the rest of the interval.
#[derive(Debug, Clone)]
pub struct Barycentric {
    xs: Vec<f64>,
    ys: Vec<f64>,
    degree: usize,
}

impl Barycentric {
    pub fn new(xs: &[f64], ys: &[f64], d: usize) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::Shape(format!(
                "{} abscissae for {} values",
                xs.len(),
                ys.len()
            )));
        }
        if xs.is_empty() {
            return Err(Error::InsufficientData("no samples".into()));
        }
        let mut pairs: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("sample abscissae must be distinct".into()));
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let degree = d.min(xs.len() - 1);
        Ok(Barycentric { xs, ys, degree })
    }

    pub fn min_x(&self) -> f64 {
        self.xs[0]
    }

    pub fn max_x(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// First index of the stencil serving the cell that holds `x`.
    fn stencil_start(&self, x: f64) -> usize {
        let n = self.xs.len();
        let cell = self
            .xs
            .partition_point(|&v| v <= x)
            .saturating_sub(1)
            .min(n.saturating_sub(2));
        // cell j uses samples j - (d-1)/2 ..= j + 1 + d/2, shifted inside the grid
        let lo = cell.saturating_sub((self.degree.saturating_sub(1)) / 2);
        lo.min(n - 1 - self.degree)
    }

    pub fn evaluate(&self, x: f64) -> f64 {
        let lo = self.stencil_start(x);
        let xs = &self.xs[lo..=lo + self.degree];
        let ys = &self.ys[lo..=lo + self.degree];
        let (mut num, mut den) = (0.0, 0.0);
        for (k, (&xk, &yk)) in xs.iter().zip(ys).enumerate() {
            let diff = x - xk;
            if diff == 0.0 {
                return yk;
            }
            let w: f64 = xs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &xj)| 1.0 / (xk - xj))
                .product();
            let t = w / diff;
            num += t * yk;
            den += t;
        }
        num / den
    }
}
