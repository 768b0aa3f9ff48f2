//! Parsing of command-line payloads into library values.

use std::fmt::Display;

use multival_core::approx::ValueTarget;
use multival_core::field::{parse_tuple, FieldElem, FieldId};
use multival_core::rings::RingSpec;
use multival_core::topology::TopologySpec;
use multival_core::valuation::{parse_valuations, Valuation};

use crate::report::EXIT_USAGE;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Library failures on valid-looking input are reported like usage errors:
/// the input named something the operation cannot handle.
pub fn fail<E: Display>(what: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::usage(format!("{what}: {e}"))
}

pub type CliResult<T> = Result<T, CliError>;

pub fn field(text: &str) -> CliResult<FieldId> {
    text.parse().map_err(fail("--field"))
}

pub fn valuations(text: &str) -> CliResult<Vec<Valuation>> {
    let vs = parse_valuations(text).map_err(fail("--vals"))?;
    if vs.is_empty() {
        return Err(CliError::usage("--vals: no valuations"));
    }
    let f = vs[0].field();
    if vs.iter().any(|v| v.field() != f) {
        return Err(CliError::usage("--vals: valuations over different fields"));
    }
    for (k, v) in vs.iter().enumerate() {
        if vs[..k].contains(v) {
            return Err(CliError::usage(format!("--vals: {v} listed twice")));
        }
    }
    Ok(vs)
}

/// The field named by `--field`, or else the field of the valuations.
pub fn resolve_field(flag: Option<&str>, vals: &[Valuation]) -> CliResult<FieldId> {
    let implied = vals.first().map(Valuation::field).unwrap_or(FieldId::Rationals);
    match flag {
        None => Ok(implied),
        Some(t) => {
            let f = field(t)?;
            if vals.iter().any(|v| v.field() != f) {
                return Err(CliError::usage(format!("--field {f} does not match the valuations")));
            }
            Ok(f)
        }
    }
}

pub fn element(field: FieldId, text: &str) -> CliResult<FieldElem> {
    FieldElem::parse_in(field, text).map_err(|e| CliError::usage(format!("element `{text}`: {e}")))
}

pub fn tuple(field: FieldId, text: &str) -> CliResult<Vec<FieldElem>> {
    parse_tuple(field, text).map_err(|e| CliError::usage(format!("tuple `{text}`: {e}")))
}

pub fn ring(text: &str) -> CliResult<RingSpec> {
    text.parse().map_err(|e| CliError::usage(format!("ring spec `{text}`: {e}")))
}

pub fn topology(text: &str) -> CliResult<TopologySpec> {
    let inner = text
        .trim()
        .strip_prefix("tau(")
        .and_then(|s| s.strip_suffix(')'))
        .unwrap_or(text);
    Ok(TopologySpec::new(ring(inner)?))
}

/// Ring specs separated by `;`.
pub fn topologies(text: &str) -> CliResult<Vec<TopologySpec>> {
    text.split(';').map(|s| topology(s.trim())).collect()
}

pub fn target(text: &str) -> CliResult<ValueTarget> {
    text.parse().map_err(|e| CliError::usage(format!("target `{text}`: {e}")))
}

pub fn integers(text: &str) -> CliResult<Vec<i64>> {
    text.split([';', ','])
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::usage(format!("`{}` is not an integer", s.trim())))
        })
        .collect()
}
