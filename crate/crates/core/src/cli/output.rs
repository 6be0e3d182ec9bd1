use std::io::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Plain,
    Json,
    Csv,
}

/// A command result, renderable in each [`Format`].
///
/// Plain output prints `value` alone when set (single answers), otherwise
/// the rows separated by two spaces, then the verdict line if any.
pub(crate) struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
    pub value: Option<String>,
    pub json: Value,
    pub verdict: Option<String>,
    pub passed: bool,
}

impl Report {
    pub fn value(value: String, columns: Vec<&'static str>, row: Vec<String>, json: Value) -> Self {
        Report {
            columns,
            rows: vec![row],
            value: Some(value),
            json,
            verdict: None,
            passed: true,
        }
    }

    pub fn table(columns: Vec<&'static str>, rows: Vec<Vec<String>>, json: Value) -> Self {
        Report {
            columns,
            rows,
            value: None,
            json,
            verdict: None,
            passed: true,
        }
    }

    pub fn with_verdict(mut self, passed: bool) -> Self {
        self.passed = passed;
        self.verdict = Some(if passed { "PASS" } else { "FAIL" }.to_string());
        if let Value::Object(map) = &mut self.json {
            map.insert("passed".into(), Value::Bool(passed));
        }
        self
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Plain => {
                if let Some(v) = &self.value {
                    writeln!(out, "{v}")?;
                } else {
                    for row in &self.rows {
                        writeln!(out, "{}", row.join("  "))?;
                    }
                }
                if let Some(v) = &self.verdict {
                    writeln!(out, "{v}")?;
                }
            }
            Format::Json => {
                let text = serde_json::to_string_pretty(&self.json).map_err(std::io::Error::other)?;
                writeln!(out, "{text}")?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
                out.write_all(&bytes)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn render(r: &Report, f: Format) -> String {
        let mut buf = Vec::new();
        r.write(f, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn formats() {
        let r = Report::value(
            "1/24".into(),
            vec!["key", "value"],
            vec!["{1,2}|{1,2}".into(), "1/24".into()],
            json!({"value": "1/24"}),
        );
        assert_eq!(render(&r, Format::Plain), "1/24\n");
        assert_eq!(render(&r, Format::Csv), "key,value\n\"{1,2}|{1,2}\",1/24\n");
        assert!(render(&r, Format::Json).contains("\"value\": \"1/24\""));
        let t = Report::table(vec!["a"], vec![vec!["x".into()]], json!({})).with_verdict(false);
        assert_eq!(render(&t, Format::Plain), "x\nFAIL\n");
        assert!(render(&t, Format::Json).contains("\"passed\": false"));
    }
}
