use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

/// Version stamped into every JSON report as `schema_version`.
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

/// A rendered command result: the JSON document plus a flat table for csv / md.
pub struct Report {
    pub json: Value,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, body: Value, headers: Vec<&'static str>, rows: Vec<Vec<String>>) -> Report {
        let mut json = serde_json::json!({ "schema_version": REPORT_SCHEMA_VERSION, "command": command });
        if let (Value::Object(dst), Value::Object(src)) = (&mut json, body) {
            dst.extend(src);
        }
        Report { json, headers, rows }
    }

    pub fn render(&self, format: Format, timings: bool) -> anyhow::Result<Vec<u8>> {
        Ok(match format {
            Format::Json => {
                let mut v = self.json.clone();
                if !timings {
                    strip_key(&mut v, "seconds");
                }
                let mut out = serde_json::to_vec_pretty(&v)?;
                out.push(b'\n');
                out
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.headers)?;
                for r in &self.rows {
                    w.write_record(r)?;
                }
                w.into_inner()?
            }
            Format::Md => {
                let mut out = Vec::new();
                let cell = |s: &str| s.replace('|', "\\|");
                writeln!(out, "| {} |", self.headers.join(" | "))?;
                writeln!(out, "|{}", "---|".repeat(self.headers.len()))?;
                for r in &self.rows {
                    let cells: Vec<String> = r.iter().map(|s| cell(s)).collect();
                    writeln!(out, "| {} |", cells.join(" | "))?;
                }
                out
            }
        })
    }
}

/// Wall-clock fields make reports non-reproducible; they are dropped unless asked for.
fn strip_key(v: &mut Value, key: &str) {
    match v {
        Value::Object(m) => {
            m.remove(key);
            m.values_mut().for_each(|x| strip_key(x, key));
        }
        Value::Array(a) => a.iter_mut().for_each(|x| strip_key(x, key)),
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        Report::new(
            "demo",
            serde_json::json!({ "items": [{ "seconds": 1.5, "x": 1 }] }),
            vec!["a", "b"],
            vec![vec!["1".into(), "Z/2|Z/4".into()], vec!["x,y".into(), "".into()]],
        )
    }

    #[test]
    fn json_drops_timings_by_default() {
        let r = sample();
        let plain: Value = serde_json::from_slice(&r.render(Format::Json, false).unwrap()).unwrap();
        assert_eq!(plain["items"][0], serde_json::json!({ "x": 1 }));
        assert_eq!(plain["schema_version"], REPORT_SCHEMA_VERSION);
        let timed: Value = serde_json::from_slice(&r.render(Format::Json, true).unwrap()).unwrap();
        assert_eq!(timed["items"][0]["seconds"], 1.5);
    }

    #[test]
    fn csv_quotes_and_md_escapes() {
        let r = sample();
        let csv = String::from_utf8(r.render(Format::Csv, false).unwrap()).unwrap();
        assert_eq!(csv, "a,b\n1,Z/2|Z/4\n\"x,y\",\n");
        let md = String::from_utf8(r.render(Format::Md, false).unwrap()).unwrap();
        assert_eq!(md, "| a | b |\n|---|---|\n| 1 | Z/2\\|Z/4 |\n| x,y |  |\n");
    }
}
