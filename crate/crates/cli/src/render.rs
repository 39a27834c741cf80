use std::io::Write;
use std::path::Path;

use qcrit::{Field, TruncSeries, VerifyReport};
use serde_json::Value;

use crate::Format;

/// A command result in both renderings, plus its exit code.
pub struct Output {
    pub json: Value,
    pub text: String,
    pub code: u8,
}

impl Output {
    pub fn new(json: Value, text: impl Into<String>) -> Self {
        Output {
            json,
            text: text.into(),
            code: 0,
        }
    }

    pub fn with_code(mut self, code: u8) -> Self {
        self.code = code;
        self
    }

    pub fn emit(&self, format: Format, path: Option<&Path>) -> std::io::Result<()> {
        let mut body = match format {
            Format::Json => serde_json::to_string_pretty(&self.json)?,
            Format::Text => self.text.clone(),
        };
        body.push('\n');
        match path {
            Some(p) => std::fs::write(p, body),
            None => std::io::stdout().lock().write_all(body.as_bytes()),
        }
    }
}

pub fn report_text(r: &VerifyReport) -> String {
    let mut out = format!(
        "{} {} ({}): {} checks, {} failures, {} ms",
        if r.pass { "PASS" } else { "FAIL" },
        r.statement,
        r.range,
        r.checks,
        r.failures,
        r.elapsed_ms
    );
    for c in &r.counterexamples {
        out.push_str("\n  counterexample: ");
        out.push_str(&c.to_string());
    }
    out
}

fn coeff_text(field: &Field, c: qcrit::Fe) -> String {
    let coords = field.coords(c);
    if coords.len() == 1 {
        coords[0].to_string()
    } else {
        format!(
            "[{}]",
            coords
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

/// `1 + X + [0,1] X^3 + O(X^{N+1})`.
pub fn series_text(s: &TruncSeries) -> String {
    let f = s.field();
    let mut terms = Vec::new();
    for e in s.support() {
        let c = s.coeff(e);
        let coeff = if c == qcrit::Fe::ONE && e > 0 {
            String::new()
        } else {
            coeff_text(f, c)
        };
        let mono = match e {
            0 => String::new(),
            1 => "X".into(),
            e => format!("X^{e}"),
        };
        terms.push(match (coeff.is_empty(), mono.is_empty()) {
            (true, _) => mono,
            (_, true) => coeff,
            _ => format!("{coeff} {mono}"),
        });
    }
    if terms.is_empty() {
        terms.push("0".into());
    }
    format!("{} + O(X^{})", terms.join(" + "), s.prec() + 1)
}
