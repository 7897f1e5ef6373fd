//! Long-format CSV for sweep results.
//!
//! ```text
//! # target = cqfi_interacting
//! # axis = g
//! ...
//! g,cqfi,bound
//! 0.00000000000e0,2.30510971915e3,2.50000000000e3
//! ```

use std::path::Path;

use crate::config::{Axis, Target};
use crate::error::{CliError, Result};
use crate::sweep::{SweepResult, SweepRow};

pub const BOUND_COLUMN: &str = "bound";
pub const IDEAL_COLUMN: &str = "ideal";

/// Twelve significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.11e}")
}

pub fn header(result: &SweepResult) -> Vec<String> {
    let mut h = Vec::new();
    if let Some(s) = result.series_axis {
        h.push(s.name().to_string());
    }
    h.push(result.axis.name().to_string());
    h.push(result.target.value_column().to_string());
    h.push(BOUND_COLUMN.to_string());
    if result.has_ideal() {
        h.push(IDEAL_COLUMN.to_string());
    }
    h
}

pub fn render_csv(result: &SweepResult) -> Result<String> {
    let mut text = String::new();
    for (k, v) in &result.metadata {
        text.push_str(&format!("# {k} = {v}\n"));
    }
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let invalid = |e: csv::Error| CliError::Invalid(format!("CSV encoding failed: {e}"));
    writer.write_record(header(result)).map_err(invalid)?;
    let ideal = result.has_ideal();
    for row in &result.rows {
        let mut record = Vec::with_capacity(5);
        if result.series_axis.is_some() {
            record.push(format_value(row.series.unwrap_or(f64::NAN)));
        }
        record.push(format_value(row.x));
        record.push(format_value(row.value));
        record.push(format_value(row.bound));
        if ideal {
            record.push(format_value(row.ideal.unwrap_or(f64::NAN)));
        }
        writer.write_record(&record).map_err(invalid)?;
    }
    let bytes = writer.into_inner().map_err(|e| CliError::Invalid(format!("CSV encoding failed: {e}")))?;
    text.push_str(std::str::from_utf8(&bytes).expect("CSV output is ASCII"));
    Ok(text)
}

/// Writes `result` to `path`. An empty path is rejected before anything is written.
pub fn emit_csv(result: &SweepResult, path: &Path) -> Result<()> {
    if path.as_os_str().is_empty() {
        return Err(CliError::Invalid("CSV output path is empty".into()));
    }
    let text = render_csv(result)?;
    std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

pub fn parse_csv(text: &str, path: &Path) -> Result<SweepResult> {
    let bad = |message: String| CliError::Csv { path: path.to_owned(), message };
    let mut metadata = Vec::new();
    let mut body = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            let (k, v) = rest.split_once('=').ok_or_else(|| bad(format!("metadata line without '=': {line}")))?;
            metadata.push((k.trim().to_string(), v.trim().to_string()));
        } else if !line.trim().is_empty() {
            body.push_str(line);
            body.push('\n');
        }
    }
    let lookup = |key: &str| metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let target: Target = lookup("target").ok_or_else(|| bad("missing '# target' line".into()))?.parse().map_err(bad)?;
    let axis: Axis = lookup("axis").ok_or_else(|| bad("missing '# axis' line".into()))?.parse().map_err(bad)?;
    let series_axis: Option<Axis> = lookup("series_axis").map(str::parse).transpose().map_err(bad)?;

    let mut reader = csv::ReaderBuilder::new().from_reader(body.as_bytes());
    let head: Vec<String> = reader.headers().map_err(|e| bad(e.to_string()))?.iter().map(String::from).collect();
    let column = |name: &str| head.iter().position(|h| h == name).ok_or_else(|| bad(format!("missing column '{name}'")));
    let series_col = series_axis.map(|a| column(a.name())).transpose()?;
    let x_col = column(axis.name())?;
    let value_col = column(target.value_column())?;
    let bound_col = column(BOUND_COLUMN)?;
    let ideal_col = head.iter().position(|h| h == IDEAL_COLUMN);

    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let num = |c: usize| -> Result<f64> {
            let field = record.get(c).ok_or_else(|| bad(format!("row {}: missing field {c}", i + 1)))?;
            field.trim().parse().map_err(|_| bad(format!("row {}: '{field}' is not a number", i + 1)))
        };
        rows.push(SweepRow {
            series: series_col.map(num).transpose()?,
            x: num(x_col)?,
            value: num(value_col)?,
            bound: num(bound_col)?,
            ideal: ideal_col.map(num).transpose()?,
        });
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(SweepResult { target, axis, series_axis, rows, metadata })
}

pub fn read_csv(path: &Path) -> Result<SweepResult> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })?;
    parse_csv(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> SweepResult {
        SweepResult {
            target: Target::ProtocolQfi,
            axis: Axis::G,
            series_axis: Some(Axis::DeltaEps),
            rows: vec![
                SweepRow { series: Some(1.0), x: 0.0, value: 12.5, bound: 2500.0, ideal: Some(10.0) },
                SweepRow { series: Some(1.0), x: 2.0, value: 1.0 / 3.0, bound: 2500.0, ideal: Some(0.1) },
            ],
            metadata: vec![
                ("target".into(), "protocol_qfi".into()),
                ("axis".into(), "g".into()),
                ("series_axis".into(), "delta_eps".into()),
            ],
        }
    }

    #[test]
    fn format_has_twelve_significant_digits() {
        assert_eq!(format_value(2500.0), "2.50000000000e3");
        assert_eq!(format_value(1.0 / 3.0), "3.33333333333e-1");
    }

    #[test]
    fn render_and_parse_round_trip() {
        let r = sample();
        let text = render_csv(&r).unwrap();
        assert!(!text.contains('\r'));
        assert!(text.contains("\ndelta_eps,g,qfi,bound,ideal\n"));
        let back = parse_csv(&text, Path::new("mem")).unwrap();
        assert_eq!(back.rows.len(), 2);
        assert_eq!(back.rows[0], r.rows[0]);
        assert!((back.rows[1].value - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(back.metadata, r.metadata);
    }

    #[test]
    fn empty_path_writes_nothing() {
        let err = emit_csv(&sample(), Path::new("")).unwrap_err();
        assert!(err.to_string().contains("empty"));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(parse_csv("g,cqfi,bound\n1,2,3\n", Path::new("x")).is_err());
        assert!(parse_csv("# target = cqfi_interacting\n# axis = g\ng,cqfi,bound\n1,abc,3\n", Path::new("x")).is_err());
        assert!(parse_csv("# target = cqfi_interacting\n# axis = g\ng,cqfi\n1,2\n", Path::new("x")).is_err());
    }
}
