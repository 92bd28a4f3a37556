//! File formats: truth tables (JSON or CSV), code files, requirement
//! matrices, search results, encoding schemes and verifier verdicts.
//!
//! Every writer here produces text the matching reader accepts, and reading
//! then writing again yields the same text.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::codes::{Code, RequirementMatrix};
use crate::encoders::EncodingScheme;
use crate::error::{Error, Result};
use crate::functions::FunctionTable;
use crate::metric::Word;

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}

/// Parses `{"k": …, "values": [label, …]}`; labels may be numbers or strings.
pub fn table_from_json(text: &str) -> Result<FunctionTable> {
    #[derive(Deserialize)]
    struct Raw {
        k: usize,
        values: Vec<Value>,
    }
    let raw: Raw = serde_json::from_str(text).map_err(parse_err)?;
    let labels = raw
        .values
        .into_iter()
        .map(|v| match v {
            Value::String(s) => Ok(s),
            Value::Number(n) => Ok(n.to_string()),
            Value::Bool(b) => Ok(b.to_string()),
            other => Err(Error::Parse(format!("unsupported label {other}"))),
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionTable::from_labels(raw.k, labels)
}

/// Labels that read back as integers are written as JSON numbers.
pub fn table_to_json(f: &FunctionTable) -> String {
    let values: Vec<Value> = f
        .values()
        .map(|l| match l.parse::<u64>() {
            Ok(n) if n.to_string() == l => Value::from(n),
            _ => Value::from(l),
        })
        .collect();
    to_json(&serde_json::json!({ "k": f.k(), "values": values }))
}

/// Parses lines `bitstring,label`, one per message, in any order. Blank lines
/// and a leading `bitstring,label` header are skipped.
pub fn table_from_csv(text: &str) -> Result<FunctionTable> {
    let mut rows: Vec<(Word, String)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.eq_ignore_ascii_case("bitstring,label")) {
            continue;
        }
        let (bits, label) = line
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("line {}: expected bitstring,label", lineno + 1)))?;
        rows.push((bits.trim().parse()?, label.trim().to_string()));
    }
    let k = rows
        .first()
        .map(|(w, _)| w.len())
        .ok_or_else(|| Error::Parse("empty table".into()))?;
    if k > crate::metric::DEFAULT_ENUM_CAP {
        return Err(Error::InvalidTable(format!("k={k} outside 1..=24")));
    }
    let mut labels: Vec<Option<String>> = vec![None; 1 << k];
    for (w, label) in rows {
        if w.len() != k {
            return Err(Error::LengthMismatch {
                left: k,
                right: w.len(),
            });
        }
        let slot = &mut labels[w.index() as usize];
        if slot.is_some() {
            return Err(Error::DuplicateMessage(w.to_string()));
        }
        *slot = Some(label);
    }
    let labels = labels
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or_else(|| Error::InvalidTable(format!("missing message {}", Word::from_raw(i as u64, k))))
        })
        .collect::<Result<Vec<_>>>()?;
    FunctionTable::from_labels(k, labels)
}

pub fn table_to_csv(f: &FunctionTable) -> String {
    let mut out = String::new();
    for (i, label) in f.values().enumerate() {
        out.push_str(&format!("{},{label}\n", Word::from_raw(i as u64, f.k())));
    }
    out
}

/// JSON when the first non-blank character is `{`, CSV otherwise.
pub fn table_from_str(text: &str) -> Result<FunctionTable> {
    if text.trim_start().starts_with('{') {
        table_from_json(text)
    } else {
        table_from_csv(text)
    }
}

/// First line `n M b`, then `M` bitstring lines.
pub fn code_from_str(text: &str) -> Result<Code> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
    let nums = header
        .split_whitespace()
        .map(|s| s.parse::<usize>().map_err(|_| Error::Parse(format!("bad header {header:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let [n, m, b] = nums[..] else {
        return Err(Error::Parse(format!("header must be \"n M b\", got {header:?}")));
    };
    let words = lines.map(str::parse).collect::<Result<Vec<Word>>>()?;
    if words.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: words.len(),
        });
    }
    let code = Code::new(words, b)?;
    if code.n() != n {
        return Err(Error::LengthMismatch {
            left: n,
            right: code.n(),
        });
    }
    Ok(code)
}

pub fn code_to_string(code: &Code) -> String {
    let mut out = format!("{} {} {}\n", code.n(), code.len(), code.b());
    for w in code.words() {
        out.push_str(&format!("{w}\n"));
    }
    out
}

pub fn matrix_from_json(text: &str) -> Result<RequirementMatrix> {
    let raw: RequirementMatrix = serde_json::from_str(text).map_err(parse_err)?;
    raw.validate_json()
}

pub fn matrix_to_json(m: &RequirementMatrix) -> String {
    to_json(m)
}

#[derive(Serialize, Deserialize)]
struct SchemeFile {
    k: usize,
    r: usize,
    t: usize,
    b: usize,
    parity: Vec<String>,
    provenance: String,
}

pub fn scheme_from_json(text: &str) -> Result<EncodingScheme> {
    let raw: SchemeFile = serde_json::from_str(text).map_err(parse_err)?;
    let parity = raw
        .parity
        .iter()
        .map(|s| {
            if s.len() != raw.r {
                return Err(Error::LengthMismatch {
                    left: raw.r,
                    right: s.len(),
                });
            }
            if s.is_empty() {
                Ok(0)
            } else {
                s.parse::<Word>().map(|w| w.index())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    EncodingScheme::new(raw.k, raw.r, raw.t, raw.b, parity, raw.provenance)
}

pub fn scheme_to_json(s: &EncodingScheme) -> String {
    to_json(&SchemeFile {
        k: s.k(),
        r: s.r(),
        t: s.t(),
        b: s.b(),
        parity: (0..s.raw_parity().len() as u64).map(|i| s.parity_string(i)).collect(),
        provenance: s.provenance().to_string(),
    })
}

/// Pretty JSON with a trailing newline, for any serializable result record.
pub fn record_to_json<T: Serialize>(value: &T) -> String {
    to_json(value)
}

pub fn record_from_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(parse_err)
}
