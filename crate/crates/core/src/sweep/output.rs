//! CSV output.
//!
//! Columns, in order, are [`CSV_COLUMNS`]. Probabilities use `.` as the
//! decimal separator, in plain notation for magnitudes in `[1e-4, 1e6)` and
//! scientific notation (`1.25e-7`) otherwise; both forms are the shortest
//! that parse back to the identical `f64`. Cells for outputs that were not
//! requested or failed are empty; quoting follows RFC 4180.

use std::io::Write;
use std::path::Path;

use crate::model::SolutionId;

use super::{SweepError, SweepResult, SweepRow};

pub const CSV_COLUMNS: [&str; 17] = [
    "curve",
    "axis",
    "axis_value",
    "solution",
    "sopN_exact",
    "sopF_exact",
    "sopO_exact",
    "sopN_asym",
    "sopF_asym",
    "sopO_asym",
    "sopN_mc",
    "sopN_mc_stderr",
    "sopF_mc",
    "sopF_mc_stderr",
    "sopO_mc",
    "sopO_mc_stderr",
    "error",
];

fn format_float(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e6).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn cell(x: Option<f64>) -> String {
    x.map(format_float).unwrap_or_default()
}

fn record(r: &SweepRow) -> [String; 17] {
    [
        r.curve.clone(),
        r.axis.clone(),
        format_float(r.axis_value),
        r.solution.to_string(),
        cell(r.sop_near_exact),
        cell(r.sop_far_exact),
        cell(r.sop_overall_exact),
        cell(r.sop_near_asym),
        cell(r.sop_far_asym),
        cell(r.sop_overall_asym),
        cell(r.sop_near_mc),
        cell(r.sop_near_mc_stderr),
        cell(r.sop_far_mc),
        cell(r.sop_far_mc_stderr),
        cell(r.sop_overall_mc),
        cell(r.sop_overall_mc_stderr),
        r.error.clone().unwrap_or_default(),
    ]
}

/// Writes the header and one line per row.
pub fn write_csv<W: Write>(rows: &[SweepRow], writer: W) -> SweepResult<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record(record(r))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Writes `rows` to `path`; `rows` must be non-empty.
pub fn emit_csv(rows: &[SweepRow], path: &Path) -> SweepResult<()> {
    if rows.is_empty() {
        return Err(SweepError::Spec("no rows to write".into()));
    }
    let file = std::fs::File::create(path).map_err(|source| SweepError::Io {
        path: path.display().to_string(),
        source,
    })?;
    write_csv(rows, std::io::BufWriter::new(file))
}

fn parse_cell(s: &str, column: &str) -> SweepResult<Option<f64>> {
    if s.is_empty() {
        return Ok(None);
    }
    s.parse()
        .map(Some)
        .map_err(|_| SweepError::Spec(format!("column {column}: `{s}` is not a number")))
}

/// Reads a file written by [`emit_csv`].
pub fn read_csv(path: &Path) -> SweepResult<Vec<SweepRow>> {
    let mut reader = csv::Reader::from_path(path)?;
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header != CSV_COLUMNS {
        return Err(SweepError::Spec(format!(
            "{}: unexpected header {header:?}",
            path.display()
        )));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let f = |i: usize| parse_cell(&rec[i], CSV_COLUMNS[i]);
        let solution = match &rec[3] {
            "I" => SolutionId::SolutionI,
            "II" => SolutionId::SolutionII,
            other => return Err(SweepError::Spec(format!("unknown solution `{other}`"))),
        };
        rows.push(SweepRow {
            curve: rec[0].to_string(),
            axis: rec[1].to_string(),
            axis_value: f(2)?
                .ok_or_else(|| SweepError::Spec("empty axis_value".into()))?,
            solution,
            sop_near_exact: f(4)?,
            sop_far_exact: f(5)?,
            sop_overall_exact: f(6)?,
            sop_near_asym: f(7)?,
            sop_far_asym: f(8)?,
            sop_overall_asym: f(9)?,
            sop_near_mc: f(10)?,
            sop_near_mc_stderr: f(11)?,
            sop_far_mc: f(12)?,
            sop_far_mc_stderr: f(13)?,
            sop_overall_mc: f(14)?,
            sop_overall_mc_stderr: f(15)?,
            error: Some(rec[16].to_string()).filter(|s| !s.is_empty()),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> SweepRow {
        SweepRow {
            curve: "a, \"quoted\" label".into(),
            axis: "gamma0_dB".into(),
            axis_value: 10.0,
            solution: SolutionId::SolutionII,
            sop_near_exact: Some(0.1234567890123456),
            sop_far_exact: Some(3.3e-9),
            sop_overall_exact: Some(1.0),
            sop_near_asym: None,
            sop_far_asym: None,
            sop_overall_asym: None,
            sop_near_mc: None,
            sop_near_mc_stderr: None,
            sop_far_mc: None,
            sop_far_mc_stderr: None,
            sop_overall_mc: None,
            sop_overall_mc_stderr: None,
            error: None,
        }
    }

    #[test]
    fn float_format_round_trips() {
        for x in [0.0, 1e-4, 0.5, 1.0 / 3.0, 2.5e-300, 7e-5, 1e6, 123.456] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(3.3e-9), "3.3e-9");
        assert_eq!(format_float(0.25), "0.25");
    }

    #[test]
    fn exact_only_row_has_empty_mc_cells() {
        let mut buf = Vec::new();
        write_csv(&[row()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_COLUMNS.join(","));
        assert!(lines[1].starts_with("\"a, \"\"quoted\"\" label\",gamma0_dB,10,II,"));
        assert!(lines[1].ends_with(",,,,,,,,,,"));
    }

    #[test]
    fn round_trip_through_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let mut r2 = row();
        r2.error = Some("exact: boom".into());
        r2.sop_overall_mc_stderr = Some(1.5e-4);
        emit_csv(&[row(), r2.clone()], &path).unwrap();
        assert_eq!(read_csv(&path).unwrap(), vec![row(), r2]);
        assert!(emit_csv(&[], &path).is_err());
    }
}
