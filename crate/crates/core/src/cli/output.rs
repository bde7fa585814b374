//! Artifact writing: CSV tables, metadata sidecars, gnuplot scripts.
//!
//! Numbers are written as the shortest decimal string that parses back to
//! the same `f64` (switching to exponent form for very small or large
//! magnitudes); integer columns are written as integers. Metadata maps are
//! key-sorted, so identical jobs give identical bytes.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::gaussian::CONVENTION_TAG;

use super::CliError;

/// A CSV table with a header row.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        CsvTable {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: impl IntoIterator<Item = f64>) {
        self.rows.push(row.into_iter().map(fmt_f64).collect());
    }

    pub fn push_cells(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Shortest round-trip decimal form of `v`.
pub fn fmt_f64(v: f64) -> String {
    ryu::Buffer::new().format(v).to_string()
}

/// How a table should be drawn.
#[derive(Debug, Clone, PartialEq)]
pub enum PlotKind {
    /// Columns `y_cols` against column `x_col` (1-based).
    Lines { x_col: usize, y_cols: Vec<usize> },
    /// Surface of column 3 over columns 1 and 2.
    Surface,
    /// Impulses of the last column against the first.
    Bars,
}

/// Files produced by a job, relative to the output directory.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ArtifactSet {
    pub files: Vec<PathBuf>,
}

pub struct Writer<'a> {
    pub out_dir: &'a Path,
    pub artifacts: ArtifactSet,
}

impl<'a> Writer<'a> {
    pub fn new(out_dir: &'a Path) -> Result<Self, CliError> {
        fs::create_dir_all(out_dir)
            .map_err(|e| CliError::io("write_output", out_dir, e))?;
        Ok(Writer {
            out_dir,
            artifacts: ArtifactSet::default(),
        })
    }

    pub fn path(&self, file: &str) -> PathBuf {
        self.out_dir.join(file)
    }

    /// Records a file written by another routine.
    pub fn record(&mut self, file: &str) {
        self.artifacts.files.push(PathBuf::from(file));
    }

    pub fn text(&mut self, file: &str, content: &str) -> Result<(), CliError> {
        let path = self.path(file);
        fs::write(&path, content).map_err(|e| CliError::io("write_output", &path, e))?;
        self.record(file);
        Ok(())
    }

    pub fn table(&mut self, file: &str, table: &CsvTable) -> Result<(), CliError> {
        self.text(file, &table.render())
    }

    pub fn json(&mut self, file: &str, value: &Value) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("JSON value serializes");
        text.push('\n');
        self.text(file, &text)
    }

    /// gnuplot script next to `csv`, referring to it by file name.
    pub fn plot(
        &mut self,
        csv: &str,
        header: &[String],
        kind: &PlotKind,
        title: &str,
    ) -> Result<(), CliError> {
        let stem = csv.trim_end_matches(".csv");
        let mut gp = format!(
            "# run from this directory: gnuplot {stem}.gp\n\
             set datafile separator ','\n\
             set key autotitle columnhead\n\
             set title '{title}'\n\
             set terminal pngcairo size 900,650\n\
             set output '{stem}.png'\n"
        );
        match kind {
            PlotKind::Lines { x_col, y_cols } => {
                gp.push_str(&format!("set xlabel '{}'\n", header[x_col - 1]));
                let parts: Vec<String> = y_cols
                    .iter()
                    .map(|c| format!("'{csv}' using {x_col}:{c} with lines"))
                    .collect();
                gp.push_str(&format!("plot {}\n", parts.join(", \\\n     ")));
            }
            PlotKind::Surface => {
                gp.push_str(&format!(
                    "set xlabel '{}'\nset ylabel '{}'\nset view map\nset pm3d at b\n\
                     set dgrid3d\nsplot '{csv}' using 1:2:3 with pm3d notitle\n",
                    header[0], header[1]
                ));
            }
            PlotKind::Bars => {
                let last = header.len();
                gp.push_str(&format!(
                    "set xlabel '{}'\nplot '{csv}' using 1:{last} with impulses lw 3\n",
                    header[0]
                ));
            }
        }
        self.text(&format!("{stem}.gp"), &gp)
    }
}

/// Sidecar document common to all commands.
pub fn meta_document(config: &Value, tolerances: Value, summary: Value, files: &[PathBuf]) -> Value {
    json!({
        "library": { "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") },
        "convention": CONVENTION_TAG,
        "csv_number_format": "shortest round-trip decimal",
        "config": config,
        "tolerances": tolerances,
        "summary": summary,
        "outputs": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shortest_round_trip_cells() {
        let mut t = CsvTable::new(["a", "b"]);
        t.push([0.1, 1.0 / 3.0]);
        t.push([2.5e-14, -0.0]);
        assert_eq!(t.render(), "a,b\n0.1,0.3333333333333333\n2.5e-14,-0.0\n");
        let back: f64 = t.rows[0][1].parse().unwrap();
        assert_eq!(back, 1.0 / 3.0);
    }

    #[test]
    fn plot_refers_to_csv_by_name() {
        let dir = tempfile::tempdir().unwrap();
        let mut w = Writer::new(dir.path()).unwrap();
        let header = vec!["t".to_string(), "x".to_string()];
        w.plot(
            "traj.csv",
            &header,
            &PlotKind::Lines {
                x_col: 1,
                y_cols: vec![2],
            },
            "x(t)",
        )
        .unwrap();
        let gp = fs::read_to_string(dir.path().join("traj.gp")).unwrap();
        assert!(gp.contains("'traj.csv' using 1:2"));
        assert!(!gp.contains(&dir.path().display().to_string()));
    }
}
