//! Run traces and their on-disk form.
//!
//! `write_trace` emits three files, byte-stable for identical inputs:
//! `trace.csv` with the full per-step table, `metrics.json` with the summary,
//! and `plot.csv` with a downsampled 2-D track for plotting. Floats are
//! written with 17 significant digits and a `.` decimal separator.

use std::io::Write;
use std::path::{Path, PathBuf};

use super::metrics::MetricsReport;
use super::scenario::Scenario;

/// One completed simulation step.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRow {
    /// Time at the end of the step (s); strictly increasing by `dt`.
    pub t: f64,
    pub truth: Vec<f64>,
    pub measurement: Vec<f64>,
    /// Estimate after extrapolation, before the measurement update.
    pub est_prior: Vec<f64>,
    /// Estimate after the measurement update.
    pub est_post: Vec<f64>,
    /// Control applied during the step.
    pub control: Vec<f64>,
    pub innovation: Vec<f64>,
}

/// Full record of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    pub metrics: MetricsReport,
}

/// Paths written by [`write_trace`].
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFiles {
    pub trace_csv: PathBuf,
    pub metrics_json: PathBuf,
    pub plot_csv: PathBuf,
}

/// Errors from trace output.
#[derive(Debug)]
pub enum TraceError {
    EmptyTrace,
    Io { path: PathBuf, source: std::io::Error },
}

impl std::fmt::Display for TraceError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TraceError::EmptyTrace => write!(f, "trace has no rows"),
            TraceError::Io { path, source } => {
                write!(f, "cannot write `{}`: {source}", path.display())
            }
        }
    }
}

impl std::error::Error for TraceError {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        match self {
            TraceError::Io { source, .. } => Some(source),
            _ => None,
        }
    }
}

/// 17-significant-digit float formatting used across all CSV output.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_file(path: &Path, contents: &str) -> Result<(), TraceError> {
    let mut f = std::fs::File::create(path).map_err(|source| TraceError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    f.write_all(contents.as_bytes()).map_err(|source| TraceError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_header(prefix: &str, count: usize, out: &mut String) {
    for i in 0..count {
        out.push(',');
        out.push_str(prefix);
        out.push('_');
        out.push_str(&i.to_string());
    }
}

fn csv_values(values: &[f64], out: &mut String) {
    for v in values {
        out.push(',');
        out.push_str(&fmt_float(*v));
    }
}

/// Writes `trace.csv`, `metrics.json`, and `plot.csv` into `dir` (created if
/// missing). Rejects empty traces.
pub fn write_trace(trace: &RunTrace, scenario: &Scenario, dir: &Path) -> Result<TraceFiles, TraceError> {
    if trace.rows.is_empty() {
        return Err(TraceError::EmptyTrace);
    }
    std::fs::create_dir_all(dir).map_err(|source| TraceError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let first = &trace.rows[0];

    let mut csv = String::from("t");
    csv_header("truth", first.truth.len(), &mut csv);
    csv_header("meas", first.measurement.len(), &mut csv);
    csv_header("est", first.est_post.len(), &mut csv);
    csv_header("ctrl", first.control.len(), &mut csv);
    csv_header("innov", first.innovation.len(), &mut csv);
    csv.push('\n');
    for row in &trace.rows {
        csv.push_str(&fmt_float(row.t));
        csv_values(&row.truth, &mut csv);
        csv_values(&row.measurement, &mut csv);
        csv_values(&row.est_post, &mut csv);
        csv_values(&row.control, &mut csv);
        csv_values(&row.innovation, &mut csv);
        csv.push('\n');
    }
    let trace_csv = dir.join("trace.csv");
    write_file(&trace_csv, &csv)?;

    let mut metrics = serde_json::to_string_pretty(&trace.metrics).expect("metrics serialize");
    metrics.push('\n');
    let metrics_json = dir.join("metrics.json");
    write_file(&metrics_json, &metrics)?;

    // downsampled 2-D track: first position state on x, second (if any) on y
    let px = scenario.position_states[0];
    let py = scenario.position_states.get(1).copied();
    let stride = (trace.rows.len() / 200).max(1);
    let mut plot = String::from("t,x,y,est_x,est_y\n");
    let mut emit = |row: &TraceRow| {
        let y = py.map_or(0.0, |i| row.truth[i]);
        let est_y = py.map_or(0.0, |i| row.est_post[i]);
        plot.push_str(&fmt_float(row.t));
        for v in [row.truth[px], y, row.est_post[px], est_y] {
            plot.push(',');
            plot.push_str(&fmt_float(v));
        }
        plot.push('\n');
    };
    let mut last_emitted = 0;
    for (i, row) in trace.rows.iter().enumerate().step_by(stride) {
        emit(row);
        last_emitted = i;
    }
    if last_emitted != trace.rows.len() - 1 {
        emit(trace.rows.last().unwrap());
    }
    let plot_csv = dir.join("plot.csv");
    write_file(&plot_csv, &plot)?;

    Ok(TraceFiles {
        trace_csv,
        metrics_json,
        plot_csv,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::metrics::compute_metrics;
    use crate::sim::scenario::Scenario;

    fn tiny_trace(n_rows: usize) -> (RunTrace, Scenario) {
        let s = Scenario::preset("planar-goal").unwrap();
        let rows: Vec<TraceRow> = (0..n_rows)
            .map(|k| TraceRow {
                t: (k + 1) as f64 * 0.5,
                truth: vec![1.0, 2.0, 3.0, 4.0],
                measurement: vec![1.1, 2.1, 3.1, 4.1],
                est_prior: vec![1.0, 2.0, 3.0, 4.0],
                est_post: vec![1.05, 2.05, 3.05, 4.05],
                control: vec![0.5, -0.5],
                innovation: vec![0.1, 0.1, 0.1, 0.1],
            })
            .collect();
        let metrics = compute_metrics(&rows, &s);
        (RunTrace { rows, metrics }, s)
    }

    #[test]
    fn writes_expected_line_counts() {
        let dir = tempfile::tempdir().unwrap();
        let (trace, s) = tiny_trace(540);
        let files = write_trace(&trace, &s, dir.path()).unwrap();
        let csv = std::fs::read_to_string(&files.trace_csv).unwrap();
        assert_eq!(csv.lines().count(), 541); // header + rows
        let header = csv.lines().next().unwrap();
        assert_eq!(
            header,
            "t,truth_0,truth_1,truth_2,truth_3,meas_0,meas_1,meas_2,meas_3,est_0,est_1,est_2,est_3,ctrl_0,ctrl_1,innov_0,innov_1,innov_2,innov_3"
        );
        let plot = std::fs::read_to_string(&files.plot_csv).unwrap();
        // stride 2 over 540 rows: 270 samples + header + appended final row
        assert_eq!(plot.lines().count(), 272);
        assert!(std::fs::read_to_string(&files.metrics_json)
            .unwrap()
            .contains("\"mse\""));
    }

    #[test]
    fn rewriting_is_byte_identical() {
        let dir = tempfile::tempdir().unwrap();
        let (trace, s) = tiny_trace(17);
        let a = write_trace(&trace, &s, &dir.path().join("a")).unwrap();
        let b = write_trace(&trace, &s, &dir.path().join("b")).unwrap();
        for (x, y) in [
            (&a.trace_csv, &b.trace_csv),
            (&a.metrics_json, &b.metrics_json),
            (&a.plot_csv, &b.plot_csv),
        ] {
            assert_eq!(std::fs::read(x).unwrap(), std::fs::read(y).unwrap());
        }
    }

    #[test]
    fn empty_trace_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let (mut trace, s) = tiny_trace(3);
        trace.rows.clear();
        assert!(matches!(
            write_trace(&trace, &s, dir.path()),
            Err(TraceError::EmptyTrace)
        ));
    }

    #[test]
    fn float_format_has_17_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_float(-1.0 / 3.0), "-3.3333333333333331e-1");
    }
}
