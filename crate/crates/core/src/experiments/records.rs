//! CSV serialization of run records.
//!
//! One header row, then one row per record. Floats use Rust's shortest
//! round-trip decimal form; an undefined mean delay is an empty field.

use std::io::{Read, Write};

use crate::baselines::SchemeKind;
use crate::error::RecordError;
use crate::experiments::sweep::{RunRecord, SweepAxis};

pub const HEADER: [&str; 7] = [
    "scheme",
    "param",
    "value",
    "seed",
    "completed",
    "throughput_bps",
    "mean_delay_s",
];

pub fn write_csv<W: Write>(records: &[RunRecord], out: W) -> Result<(), RecordError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.scheme.name().to_string(),
            r.axis.name().to_string(),
            r.value.to_string(),
            r.seed.to_string(),
            r.completed.to_string(),
            r.throughput_bps.to_string(),
            r.mean_delay_s.map(|d| d.to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn to_csv_string(records: &[RunRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("csv output is utf-8")
}

pub fn parse_csv<R: Read>(input: R) -> Result<Vec<RunRecord>, RecordError> {
    let mut rd = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(input);
    let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
    if header != HEADER {
        return Err(RecordError::Header(header));
    }
    let mut out = Vec::new();
    for row in rd.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line());
        let bad = |reason: String| RecordError::Field { line, reason };
        if row.len() != HEADER.len() {
            return Err(bad(format!(
                "expected {} fields, got {}",
                HEADER.len(),
                row.len()
            )));
        }
        let float = |k: usize| -> Result<f64, RecordError> {
            let v: f64 = row[k]
                .parse()
                .map_err(|e| bad(format!("{}: {e}", HEADER[k])))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(bad(format!("{}: not finite", HEADER[k])))
            }
        };
        let scheme: SchemeKind = row[0].parse().map_err(|e| bad(format!("{e}")))?;
        let axis: SweepAxis = row[1].parse().map_err(|e| bad(format!("{e}")))?;
        let value = float(2)?;
        let seed: u64 = row[3].parse().map_err(|e| bad(format!("seed: {e}")))?;
        let completed: usize = row[4].parse().map_err(|e| bad(format!("completed: {e}")))?;
        let throughput_bps = float(5)?;
        if throughput_bps < 0.0 {
            return Err(bad("throughput_bps: negative".into()));
        }
        let mean_delay_s = if row[6].is_empty() {
            None
        } else {
            Some(float(6)?)
        };
        out.push(RunRecord {
            scheme,
            axis,
            value,
            seed,
            completed,
            throughput_bps,
            mean_delay_s,
        });
    }
    Ok(out)
}
