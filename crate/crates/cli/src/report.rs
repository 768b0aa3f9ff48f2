//! Line-oriented reports: `KEY: value` lines plus `WITNESS:` lines that
//! the audit pass can parse back.

use std::fmt::Display;

use multival_core::field::FieldElem;
use multival_core::valuation::Valuation;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_REFUTED: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

pub const WITNESS_PREFIX: &str = "WITNESS: ";

#[derive(Debug, Default)]
pub struct Report {
    pub lines: Vec<String>,
    pub code: i32,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn kv(&mut self, key: &str, value: impl Display) {
        self.lines.push(format!("{key}: {value}"));
    }

    pub fn line(&mut self, text: impl Into<String>) {
        self.lines.push(text.into());
    }

    /// `WITNESS: kind f1 | f2 | ...`
    pub fn witness(&mut self, kind: &str, fields: &[String]) {
        self.lines.push(format!("{WITNESS_PREFIX}{kind} {}", fields.join(" | ")));
    }

    /// Raises the exit code; refutation outranks success, unknown outranks both.
    pub fn escalate(&mut self, code: i32) {
        self.code = self.code.max(code);
    }

    pub fn extend(&mut self, other: Report) {
        self.lines.extend(other.lines);
        self.escalate(other.code);
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        if !s.is_empty() {
            s.push('\n');
        }
        s
    }
}

pub fn tuple(xs: &[FieldElem]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub fn vals(vs: &[Valuation]) -> String {
    vs.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

pub fn list<T: Display>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// `x^2 - s*x + p` written in `t`.
pub fn quadratic(s: &FieldElem, p: &FieldElem) -> String {
    let mut out = String::from("t^2");
    let term = |c: &FieldElem, suffix: &str, out: &mut String| {
        if c.is_zero() {
            return;
        }
        let text = c.to_string();
        let real = *c == FieldElem::rational(c.re().clone());
        if real && text.starts_with('-') {
            out.push_str(&format!(" - {}{suffix}", &text[1..]));
        } else if real {
            out.push_str(&format!(" + {text}{suffix}"));
        } else {
            out.push_str(&format!(" + ({text}){suffix}"));
        }
    };
    term(&-s, "*t", &mut out);
    term(p, "", &mut out);
    out
}
