//! One exact integer per line; `#` lines and blank lines are skipped.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;

#[derive(Debug)]
pub enum SequenceError {
    Io(std::io::Error),
    Parse { line: usize, text: String },
}

impl fmt::Display for SequenceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceError::Io(e) => write!(f, "{e}"),
            SequenceError::Parse { line, text } => write!(f, "line {line}: not an integer: {text:?}"),
        }
    }
}

pub fn parse(contents: &str) -> Result<Vec<BigInt>, SequenceError> {
    contents
        .lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.trim();
            (!line.is_empty() && !line.starts_with('#')).then_some((i + 1, line))
        })
        .map(|(line, text)| {
            let digits = text.strip_prefix('-').unwrap_or(text);
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(SequenceError::Parse {
                    line,
                    text: text.to_owned(),
                });
            }
            Ok(text.parse().expect("validated digits"))
        })
        .collect()
}

pub fn read(path: &Path) -> Result<Vec<BigInt>, SequenceError> {
    let contents = std::fs::read_to_string(path).map_err(SequenceError::Io)?;
    parse(&contents)
}
