//! CSV and JSON writers.
//!
//! CSV reals carry 17 significant digits, nulls are empty fields, lines end
//! in LF. JSON numbers use the shortest representation that round-trips.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::OutputFormat;
use crate::error::Result;
use crate::eval::{EvalOutput, EvalValue};
use crate::row::{Cell, SweepRow, SWEEP_COLUMNS};
use crate::validate::ValidationReport;

/// `x` with 17 significant digits, enough to round-trip any `f64`.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn cell_text(cell: Cell<'_>) -> String {
    match cell {
        Cell::Real(Some(x)) => format_real(x),
        Cell::Real(None) => String::new(),
        Cell::Count(k) => k.to_string(),
        Cell::Text(s) => s.to_string(),
    }
}

pub fn write_rows<W: Write>(rows: &[SweepRow], format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(SWEEP_COLUMNS)?;
            for row in rows {
                w.write_record(row.cells().map(cell_text))?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, rows)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub const REPORT_COLUMNS: [&str; 8] = [
    "equation",
    "max_abs_err",
    "max_rel_err",
    "tolerance",
    "tolerance_kind",
    "points",
    "pass",
    "worst_params",
];

pub fn write_report<W: Write>(report: &ValidationReport, format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            w.write_record(REPORT_COLUMNS)?;
            for (name, e) in &report.equations {
                let params: Vec<String> = e.worst_params.iter().map(|(k, v)| format!("{k}={v}")).collect();
                w.write_record([
                    name.clone(),
                    format_real(e.max_abs_err),
                    format_real(e.max_rel_err),
                    format_real(e.tolerance),
                    serde_json::to_value(e.tolerance_kind)?
                        .as_str()
                        .unwrap_or_default()
                        .to_string(),
                    e.points.to_string(),
                    e.pass.to_string(),
                    params.join(";"),
                ])?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer_pretty(&mut out, report)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_eval<W: Write>(op: &str, values: &EvalOutput, format: OutputFormat, mut out: W) -> Result<()> {
    match format {
        OutputFormat::Csv => {
            let mut w = csv_writer(out);
            let header = std::iter::once("op").chain(values.iter().map(|(k, _)| *k));
            w.write_record(header)?;
            let cells = values.iter().map(|(_, v)| match *v {
                EvalValue::Real(x) => format_real(x),
                EvalValue::Count(k) => k.to_string(),
                EvalValue::Flag(b) => b.to_string(),
            });
            w.write_record(std::iter::once(op.to_string()).chain(cells))?;
            w.flush()?;
        }
        OutputFormat::Json => {
            let mut map = Map::new();
            map.insert("op".into(), Value::from(op));
            for (k, v) in values {
                let v = match *v {
                    EvalValue::Real(x) => Value::from(x),
                    EvalValue::Count(k) => Value::from(k),
                    EvalValue::Flag(b) => Value::from(b),
                };
                map.insert((*k).into(), v);
            }
            serde_json::to_writer_pretty(&mut out, &Value::Object(map))?;
            writeln!(out)?;
        }
    }
    Ok(())
}
