//! Persisted per-run results and their CSV encoding.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::engine::AlgorithmVariant;
use crate::error::{Error, Result};

/// Column order of the results CSV.
pub const RESULT_HEADER: [&str; 10] = [
    "experiment",
    "problem",
    "n",
    "variant",
    "run",
    "seed",
    "metric",
    "value",
    "covered",
    "censored",
];

/// Column order of the front-point CSV.
pub const FRONT_HEADER: [&str; 7] = ["experiment", "problem", "n", "variant", "run", "f1", "f2"];

/// What the `value` column of a row measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    /// Generations until the front was covered (the cap when censored).
    Generations,
    /// Hypervolume of the returned set against the instance reference point.
    Hv,
}

/// One independent run. `(experiment, problem, n, variant, run)` is unique within a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub experiment: String,
    pub problem: String,
    pub n: usize,
    pub variant: AlgorithmVariant,
    pub run: usize,
    pub seed: u64,
    pub metric: Metric,
    pub value: f64,
    pub covered: bool,
    pub censored: bool,
}

/// One objective vector of a returned set, in the problem's natural orientation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontRow {
    pub experiment: String,
    pub problem: String,
    pub n: usize,
    pub variant: AlgorithmVariant,
    pub run: usize,
    pub f1: f64,
    pub f2: f64,
}

fn write_csv<S: Serialize, W: Write>(
    rows: &[S],
    header: &[&str],
    out: W,
    path: &Path,
) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(header).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_csv<S: for<'de> Deserialize<'de>, R: Read>(
    input: R,
    header: &[&str],
    path: &Path,
) -> Result<Vec<S>> {
    let mut r = csv::Reader::from_reader(input);
    let found = r.headers().map_err(|e| Error::csv(path, e))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(Error::Parse(format!(
            "{}: expected header {:?}, found {:?}",
            path.display(),
            header.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    r.deserialize()
        .map(|row| row.map_err(|e| Error::csv(path, e)))
        .collect()
}

/// Encode rows with the standard header. Floats use the shortest round-trip form.
pub fn rows_to_csv(rows: &[ResultRow]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &RESULT_HEADER, &mut buf, Path::new("<memory>"))?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn rows_from_csv(text: &str) -> Result<Vec<ResultRow>> {
    read_csv(text.as_bytes(), &RESULT_HEADER, Path::new("<memory>"))
}

pub fn write_rows(rows: &[ResultRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(rows, &RESULT_HEADER, file, path)
}

pub fn read_rows(path: &Path) -> Result<Vec<ResultRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, &RESULT_HEADER, path)
}

pub fn write_fronts(rows: &[FrontRow], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(rows, &FRONT_HEADER, file, path)
}

pub fn read_fronts(path: &Path) -> Result<Vec<FrontRow>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_csv(file, &FRONT_HEADER, path)
}
