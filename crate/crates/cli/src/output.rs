//! CSV persistence.
//!
//! The file starts with `# key: value` metadata lines, followed by a header
//! and one record per row. Numbers are written in shortest round-trip form,
//! so reading a file back reproduces the [`SweepResult`] exactly. Failed rows
//! carry `failed` in the value column.

use std::io::{Read, Write};

use crate::config::{Metric, Mode};
use crate::error::CliError;
use crate::sweep::{Metadata, Row, SweepResult};

pub const COLUMNS: [&str; 9] = [
    "K",
    "power_dbm",
    "metric",
    "mode",
    "value",
    "std_error",
    "ci_low",
    "ci_high",
    "wall_ms",
];

const FAILED: &str = "failed";

fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn to_csv_string(res: &SweepResult) -> String {
    let mut out = Vec::new();
    write_csv(res, &mut out).expect("writing to memory");
    String::from_utf8(out).expect("utf-8")
}

pub fn write_csv<W: Write>(res: &SweepResult, mut w: W) -> std::io::Result<()> {
    let m = &res.meta;
    writeln!(w, "# tool: foxlink {}", m.tool_version)?;
    writeln!(w, "# name: {}", m.name)?;
    writeln!(w, "# config_sha256: {}", m.config_hash)?;
    writeln!(w, "# seed: {}", m.seed)?;
    for n in &res.notes {
        writeln!(w, "# note: {}", n.replace('\n', " "))?;
    }
    let mut cw = csv::Writer::from_writer(w);
    cw.write_record(COLUMNS)?;
    for r in &res.rows {
        cw.write_record([
            r.k.to_string(),
            num(r.power_dbm),
            r.metric.to_string(),
            r.mode.to_string(),
            r.value.map(num).unwrap_or_else(|| FAILED.into()),
            opt(r.std_error),
            opt(r.ci.map(|c| c.0)),
            opt(r.ci.map(|c| c.1)),
            opt(r.wall_ms),
        ])?;
    }
    cw.flush()
}

fn parse_f64(field: &str, what: &str) -> Result<f64, CliError> {
    field
        .parse()
        .map_err(|_| CliError::Parse(format!("{what}: {field:?} is not a number")))
}

fn parse_opt(field: &str, what: &str) -> Result<Option<f64>, CliError> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_f64(field, what).map(Some)
    }
}

pub fn read_csv<R: Read>(mut r: R) -> Result<SweepResult, CliError> {
    let mut text = String::new();
    r.read_to_string(&mut text)
        .map_err(|e| CliError::Parse(e.to_string()))?;
    let mut meta = Metadata {
        tool_version: String::new(),
        name: String::new(),
        config_hash: String::new(),
        seed: 0,
    };
    let mut notes = Vec::new();
    let mut body_start = 0;
    for line in text.split_inclusive('\n') {
        let Some(rest) = line.strip_prefix("# ") else {
            break;
        };
        body_start += line.len();
        let rest = rest.trim_end_matches(['\n', '\r']);
        let (key, value) = rest
            .split_once(": ")
            .ok_or_else(|| CliError::Parse(format!("metadata line {rest:?}")))?;
        match key {
            "tool" => meta.tool_version = value.trim_start_matches("foxlink ").into(),
            "name" => meta.name = value.into(),
            "config_sha256" => meta.config_hash = value.into(),
            "seed" => {
                meta.seed = value
                    .parse()
                    .map_err(|_| CliError::Parse(format!("seed {value:?}")))?
            }
            "note" => notes.push(value.into()),
            _ => return Err(CliError::Parse(format!("unknown metadata key {key:?}"))),
        }
    }
    let mut reader = csv::Reader::from_reader(text[body_start..].as_bytes());
    let header = reader
        .headers()
        .map_err(|e| CliError::Parse(e.to_string()))?;
    if header.iter().ne(COLUMNS) {
        return Err(CliError::Parse(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| CliError::Parse(e.to_string()))?;
        let f = |i: usize| rec.get(i).unwrap_or("");
        let ci = match (parse_opt(f(6), "ci_low")?, parse_opt(f(7), "ci_high")?) {
            (Some(a), Some(b)) => Some((a, b)),
            (None, None) => None,
            _ => {
                return Err(CliError::Parse(
                    "ci_low and ci_high must both be present".into(),
                ))
            }
        };
        rows.push(Row {
            k: f(0)
                .parse()
                .map_err(|_| CliError::Parse(format!("K {:?}", f(0))))?,
            power_dbm: parse_f64(f(1), "power_dbm")?,
            metric: f(2)
                .parse::<Metric>()
                .map_err(|e| CliError::Parse(e.to_string()))?,
            mode: f(3)
                .parse::<Mode>()
                .map_err(|e| CliError::Parse(e.to_string()))?,
            value: if f(4) == FAILED {
                None
            } else {
                Some(parse_f64(f(4), "value")?)
            },
            std_error: parse_opt(f(5), "std_error")?,
            ci,
            wall_ms: parse_opt(f(8), "wall_ms")?,
        });
    }
    Ok(SweepResult { meta, rows, notes })
}
