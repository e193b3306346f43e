//! File formats: JSON documents with stable key order (struct order) and
//! comma-separated CSV with LF line endings, a metadata preamble in `#`
//! comments, one header row, and full-precision floats.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;
use su11kit::TruncatedOperator;

/// Operator table: `{dim, basis_tag, entries: [[re, im], ...]}` row-major.
#[derive(Serialize)]
pub struct OperatorTable {
    pub dim: usize,
    pub basis_tag: &'static str,
    pub entries: Vec<[f64; 2]>,
}

impl OperatorTable {
    pub fn from_operator(op: &TruncatedOperator) -> Self {
        OperatorTable {
            dim: op.dim(),
            basis_tag: op.basis().name(),
            entries: op.entries_row_major(),
        }
    }
}

#[derive(Serialize)]
pub struct CheckRow {
    pub name: String,
    pub value: f64,
    pub relation: &'static str,
    pub bound: f64,
    pub pass: bool,
}

impl CheckRow {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckRow {
            name: name.into(),
            value,
            relation: "<=",
            bound,
            pass: value <= bound,
        }
    }

    pub fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckRow {
            name: name.into(),
            value,
            relation: ">=",
            bound,
            pass: value >= bound,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckRow {
            name: name.into(),
            value,
            relation: "<",
            bound,
            pass: value < bound,
        }
    }
}

#[derive(Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub parameters: Vec<(String, f64)>,
    pub checks: Vec<CheckRow>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(suite: impl Into<String>, parameters: Vec<(String, f64)>, checks: Vec<CheckRow>) -> Self {
        let pass = checks.iter().all(|c| c.pass);
        SuiteReport {
            suite: suite.into(),
            parameters,
            checks,
            pass,
        }
    }
}

#[derive(Serialize)]
pub struct ExtensionReportDoc {
    pub construction: String,
    pub dims: Vec<usize>,
    pub normality_residual: f64,
    pub extension_residual: f64,
    pub ancilla: String,
    pub test_family: String,
    pub grid_spec: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain_violation_residual: Option<f64>,
    pub normality_bound: f64,
    pub extension_bound: f64,
    pub pass: bool,
}

#[derive(Serialize)]
pub struct ReductionTable {
    pub rows: Vec<ReductionRowDoc>,
}

#[derive(Serialize)]
pub struct ReductionRowDoc {
    pub particles: usize,
    pub k: f64,
    pub lambda: f64,
    pub subnormal: bool,
}

#[derive(Serialize)]
pub struct ResolutionDefects {
    pub lambda: f64,
    pub dim: usize,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    pub r_max: f64,
    pub diagonal: Vec<f64>,
    pub analytic_defect: Vec<f64>,
    pub max_off_diagonal: f64,
}

#[derive(Serialize)]
pub struct NaimarkDoc {
    pub dim: usize,
    pub effects: usize,
    /// `(K dim) x dim` isometry, row-major `[re, im]` pairs.
    pub isometry: Vec<[f64; 2]>,
    pub projective: Vec<OperatorTable>,
    pub reconstruction_error: f64,
    pub isometry_defect: f64,
}

#[derive(Serialize)]
pub struct SpectrumDoc {
    pub which: String,
    pub dim: usize,
    pub parameters: Vec<(String, f64)>,
    pub eigenvalues: Vec<[f64; 2]>,
}

/// Destination for command output.
pub enum Sink {
    Stdout,
    File(File),
}

impl Sink {
    pub fn create(path: Option<&Path>) -> io::Result<Self> {
        match path {
            None => Ok(Sink::Stdout),
            Some(p) => Ok(Sink::File(File::create(p)?)),
        }
    }

    fn writer(&mut self) -> Box<dyn Write + '_> {
        match self {
            Sink::Stdout => Box::new(io::stdout().lock()),
            Sink::File(f) => Box::new(f),
        }
    }

    pub fn write_json<T: Serialize>(&mut self, doc: &T) -> io::Result<()> {
        let mut w = self.writer();
        serde_json::to_writer_pretty(&mut w, doc)?;
        w.write_all(b"\n")
    }

    /// CSV: `#` metadata lines, one header row, LF endings, 17 significant
    /// digits so values round-trip bit-exactly.
    pub fn write_csv(
        &mut self,
        metadata: &[String],
        header: &[&str],
        rows: impl Iterator<Item = Vec<f64>>,
    ) -> io::Result<()> {
        let mut w = io::BufWriter::new(self.writer());
        for line in metadata {
            writeln!(w, "# {line}")?;
        }
        writeln!(w, "{}", header.join(","))?;
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        w.flush()
    }
}
