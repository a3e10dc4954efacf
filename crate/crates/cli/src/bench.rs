use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::{Computation, Disk, RunConfig};
use crate::error::{CliError, Result, Stage};
use crate::pipeline::{run, RunReport};

/// A list of runs; each row is executed once per computation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default)]
    pub rows: Vec<RunConfig>,
}

impl Manifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::input(Stage::Config, format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(Stage::Config, format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum Cell {
    Done { iterations: usize, err: f64, converged: bool },
    Fail { stage: String, message: String },
}

impl Cell {
    fn from_run(r: &std::result::Result<RunReport, CliError>) -> Self {
        match r {
            Ok(rep) => Self::Done { iterations: rep.iterations, err: rep.err, converged: rep.converged },
            Err(e) => Self::Fail { stage: e.stage.to_string(), message: e.message.clone() },
        }
    }

    pub fn iterations(&self) -> Option<usize> {
        match self {
            Self::Done { iterations, .. } => Some(*iterations),
            Self::Fail { .. } => None,
        }
    }
}

/// One matrix across the three computations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkRow {
    pub matrix: String,
    pub contour: Option<Disk>,
    pub eig_inside: Option<usize>,
    pub m: Option<usize>,
    pub plain: Cell,
    pub contour_deflate: Cell,
    pub eig_deflate: Cell,
}

pub fn bench_row(base: &RunConfig) -> BenchmarkRow {
    let with = |c: Computation| {
        let mut cfg = base.clone();
        cfg.computation = c;
        cfg.output = None;
        cfg.history_csv = None;
        run(&cfg)
    };
    let plain = with(Computation::Plain);
    let contour = with(Computation::ContourDeflate);
    let eig = with(Computation::EigDeflate);
    let eig_inside = eig.as_ref().ok().and_then(|r| r.eig_inside).or_else(|| contour.as_ref().ok().and_then(|r| r.eig_inside));
    BenchmarkRow {
        matrix: base.label(),
        contour: base.contour,
        eig_inside,
        m: base.m,
        plain: Cell::from_run(&plain),
        contour_deflate: Cell::from_run(&contour),
        eig_deflate: Cell::from_run(&eig),
    }
}

/// Rows run in manifest order; a failing row never stops the others.
pub fn bench_table(manifest: &Manifest) -> Vec<BenchmarkRow> {
    manifest.rows.iter().map(bench_row).collect()
}

fn cell_text(c: &Cell) -> (String, String) {
    match c {
        Cell::Done { iterations, err, converged } => {
            let its = if *converged { iterations.to_string() } else { format!("{iterations}*") };
            (its, format!("{err:.1e}"))
        }
        Cell::Fail { stage, .. } => (format!("FAIL({stage})"), "-".into()),
    }
}

/// Aligned text table; `*` marks runs that stopped without converging.
pub fn format_table(rows: &[BenchmarkRow]) -> String {
    let header = ["matrix", "contour", "#eig", "m", "#1 its", "#1 Err", "#2 its", "#2 Err", "#3 its", "#3 Err"];
    let mut cells: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in rows {
        let mut line = vec![
            r.matrix.clone(),
            r.contour.map_or("-".into(), |d| d.to_string()),
            r.eig_inside.map_or("-".into(), |v| v.to_string()),
            r.m.map_or("-".into(), |v| v.to_string()),
        ];
        for c in [&r.plain, &r.contour_deflate, &r.eig_deflate] {
            let (a, b) = cell_text(c);
            line.push(a);
            line.push(b);
        }
        cells.push(line);
    }
    let widths: Vec<usize> = (0..header.len()).map(|j| cells.iter().map(|l| l[j].len()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for line in &cells {
        let padded: Vec<String> = line.iter().zip(&widths).map(|(s, w)| format!("{s:<w$}")).collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    }
    out
}
