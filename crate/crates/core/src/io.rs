//! File formats.
//!
//! - coefficients: JSON `{"parity": "cosine"|"sine", "coeffs": [a_1, ...]}`
//! - inner analytic functions: JSON `{"coeffs": [a_1, ...]}`
//! - signals: CSV with header `theta,value`, one row per grid point
//! - coefficient tables: CSV with header `k,coefficient`
//!
//! Floats are written with 17 significant digits so they read back bit-exact.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::complex::InnerAnalytic;
use crate::error::{invalid, Result};
use crate::series::{grid_point, HarmonicCoefficients, SampledSignal};

/// Formats a float with 17 significant digits.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn read_coefficients(path: &Path) -> Result<HarmonicCoefficients> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

pub fn write_coefficients(path: &Path, coeffs: &HarmonicCoefficients) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut out, coeffs)?;
    out.write_all(b"\n")?;
    Ok(out.flush()?)
}

pub fn read_inner(path: &Path) -> Result<InnerAnalytic> {
    Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
}

pub fn write_inner(path: &Path, w: &InnerAnalytic) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    serde_json::to_writer(&mut out, w)?;
    out.write_all(b"\n")?;
    Ok(out.flush()?)
}

/// Writes `theta,value` rows for the grid `θ_j = -π + 2πj/M`.
pub fn write_signal<W: Write>(out: W, signal: &SampledSignal) -> Result<()> {
    write_pairs(
        out,
        ["theta", "value"],
        signal.thetas().zip(signal.values().iter().copied()),
    )
}

/// Writes `theta,value` rows for arbitrary abscissae.
pub fn write_curve<W: Write>(out: W, points: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    write_pairs(out, ["theta", "value"], points)
}

/// Writes `k,coefficient` rows, `k` starting at 1.
pub fn write_coefficient_table<W: Write>(out: W, coeffs: &[f64]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(["k", "coefficient"])?;
    for (i, a) in coeffs.iter().enumerate() {
        writer.write_record([(i + 1).to_string(), format_float(*a)])?;
    }
    writer.flush()?;
    Ok(())
}

fn write_pairs<W: Write>(out: W, header: [&str; 2], rows: impl IntoIterator<Item = (f64, f64)>) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record(header)?;
    for (x, y) in rows {
        writer.write_record([format_float(x), format_float(y)])?;
    }
    writer.flush()?;
    Ok(())
}

/// Reads a signal CSV; the `theta` column must match the standard grid.
pub fn read_signal<R: Read>(input: R) -> Result<SampledSignal> {
    let mut reader = csv::Reader::from_reader(input);
    let headers = reader.headers()?.clone();
    if headers.len() != 2 || &headers[0] != "theta" || &headers[1] != "value" {
        return Err(invalid("signal CSV must have the header `theta,value`"));
    }
    let mut thetas = Vec::new();
    let mut values = Vec::new();
    for record in reader.records() {
        let record = record?;
        let row = thetas.len() + 1;
        let parse = |i: usize| -> Result<f64> {
            record[i]
                .trim()
                .parse::<f64>()
                .map_err(|e| invalid(format!("row {row}: {e}")))
        };
        thetas.push(parse(0)?);
        values.push(parse(1)?);
    }
    let m = values.len();
    for (j, theta) in thetas.iter().enumerate() {
        if (theta - grid_point(j, m)).abs() > 1e-9 {
            return Err(invalid(format!(
                "row {} has theta {theta}, expected the grid point {}",
                j + 1,
                grid_point(j, m)
            )));
        }
    }
    SampledSignal::new(values)
}

pub fn read_signal_file(path: &Path) -> Result<SampledSignal> {
    read_signal(BufReader::new(File::open(path)?))
}
