//! Line-oriented text formats for designs and sequencings.
//!
//! ```text
//! # comment
//! kind STS
//! params 2 3 1
//! n 7
//! block 0 1 2
//! ```
//!
//! A sequencing is `seq <n>` followed by one line of `n` ids.

use std::fmt::Write as _;

use thiserror::Error;

use crate::designs::{build_system, BlockSystem, DesignError, Kind, Point};
use crate::goodness::{Sequencing, SequencingError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("line {line}: {source}")]
    Design { line: usize, source: DesignError },
    #[error(transparent)]
    Sequencing(#[from] SequencingError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse { line, msg: msg.into() }
}

fn numbers<T: std::str::FromStr>(line: usize, words: &[&str]) -> Result<Vec<T>, FormatError> {
    words
        .iter()
        .map(|w| w.parse().map_err(|_| parse_err(line, format!("`{w}` is not a number"))))
        .collect()
}

pub fn parse_design(text: &str) -> Result<BlockSystem, FormatError> {
    let mut kind = None;
    let mut params = None;
    let mut n = None;
    let mut blocks = Vec::new();
    let mut block_lines = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let words: Vec<&str> = raw.split_whitespace().collect();
        let Some((&head, rest)) = words.split_first() else {
            continue;
        };
        if head.starts_with('#') {
            continue;
        }
        match head {
            "kind" => {
                let [k] = rest else {
                    return Err(parse_err(line, "expected `kind <name>`"));
                };
                kind = Some(k.parse::<Kind>().map_err(|e| parse_err(line, e.to_string()))?);
            }
            "params" => {
                let v: Vec<usize> = numbers(line, rest)?;
                let [t, k, lambda] = v[..] else {
                    return Err(parse_err(line, "expected `params <t> <k> <lambda>`"));
                };
                params = Some((t, k, lambda));
            }
            "n" => {
                let v: Vec<usize> = numbers(line, rest)?;
                let [value] = v[..] else {
                    return Err(parse_err(line, "expected `n <int>`"));
                };
                n = Some(value);
            }
            "block" => {
                blocks.push(numbers::<Point>(line, rest)?);
                block_lines.push(line);
            }
            other => return Err(parse_err(line, format!("unknown directive `{other}`"))),
        }
    }
    let kind = kind.ok_or_else(|| parse_err(last, "missing `kind` line"))?;
    let (t, k, lambda) = params.ok_or_else(|| parse_err(last, "missing `params` line"))?;
    let n = n.ok_or_else(|| parse_err(last, "missing `n` line"))?;
    build_system(kind, n, t, k, lambda, blocks.clone()).map_err(|source| {
        let line = blame(&source, &blocks, &block_lines).unwrap_or(last);
        FormatError::Design { line, source }
    })
}

/// The line of the block an error refers to, when there is one.
fn blame(err: &DesignError, blocks: &[Vec<Point>], lines: &[usize]) -> Option<usize> {
    let same_set = |a: &[Point], b: &[Point]| {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        a.sort_unstable();
        b.sort_unstable();
        a == b
    };
    match err {
        DesignError::WrongBlockSize { index, .. } => lines.get(*index).copied(),
        DesignError::PointOutOfRange { point, .. } => {
            blocks.iter().position(|b| b.contains(point)).map(|i| lines[i])
        }
        DesignError::RepeatedPointInBlock(pts) => blocks.iter().position(|b| b == pts).map(|i| lines[i]),
        DesignError::DuplicateBlock(pts) => blocks
            .iter()
            .enumerate()
            .filter(|(_, b)| same_set(b, pts))
            .nth(1)
            .map(|(i, _)| lines[i]),
        _ => None,
    }
}

pub fn write_design(sys: &BlockSystem) -> String {
    let mut out = String::new();
    writeln!(out, "kind {}", sys.kind()).unwrap();
    writeln!(out, "params {} {} {}", sys.t(), sys.k(), sys.lambda()).unwrap();
    writeln!(out, "n {}", sys.n()).unwrap();
    for b in sys.blocks() {
        out.push_str("block");
        for p in b.points() {
            write!(out, " {p}").unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_seq(text: &str) -> Result<Sequencing, FormatError> {
    let mut n = None;
    let mut ids: Vec<Point> = Vec::new();
    let mut last = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last = line;
        let words: Vec<&str> = raw.split_whitespace().collect();
        match words.first() {
            None => continue,
            Some(w) if w.starts_with('#') => continue,
            Some(&"seq") => {
                let v: Vec<usize> = numbers(line, &words[1..])?;
                let [value] = v[..] else {
                    return Err(parse_err(line, "expected `seq <n>`"));
                };
                if n.is_some() {
                    return Err(parse_err(line, "repeated `seq` header"));
                }
                n = Some(value);
            }
            Some(_) => {
                if n.is_none() {
                    return Err(parse_err(line, "ids before the `seq` header"));
                }
                ids.extend(numbers::<Point>(line, &words)?);
            }
        }
    }
    let n = n.ok_or_else(|| parse_err(last.max(1), "missing `seq` header"))?;
    if ids.len() != n {
        return Err(parse_err(last.max(1), format!("expected {n} ids, found {}", ids.len())));
    }
    Ok(Sequencing::from_order(ids)?)
}

pub fn write_seq(seq: &Sequencing) -> String {
    let mut out = format!("seq {}\n", seq.len());
    for (i, p) in seq.order().iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{p}").unwrap();
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FANO: &str = "kind STS\nparams 2 3 1\nn 7\nblock 0 1 2\nblock 0 3 4\nblock 0 5 6\nblock 1 3 5\nblock 1 4 6\nblock 2 3 6\nblock 2 4 5\n";

    #[test]
    fn fano_round_trip() {
        let sys = parse_design(FANO).unwrap();
        assert_eq!(sys.blocks().len(), 7);
        assert_eq!(write_design(&sys), FANO);
    }

    #[test]
    fn tolerant_parser() {
        let text = "# Fano plane\n  kind   sts\nparams 2 3 1\n\nn 7\nblock 2 1 0\nblock 4 3 0\nblock 0 5 6\nblock 1 3 5\nblock 1 4 6\nblock 2 3 6\nblock 2 4 5\n";
        assert_eq!(write_design(&parse_design(text).unwrap()), FANO);
    }

    #[test]
    fn duplicate_block_line() {
        let text = "kind PSTS\nparams 2 3 1\nn 5\nblock 0 1 2\nblock 2 1 0\n";
        match parse_design(text) {
            Err(FormatError::Design {
                line,
                source: DesignError::DuplicateBlock(_),
            }) => assert_eq!(line, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let text = "kind STS\nparams 2 x 1\n";
        assert_eq!(parse_design(text).unwrap_err(), parse_err(2, "`x` is not a number"));
        assert!(matches!(parse_design("kind STS\n"), Err(FormatError::Parse { .. })));
        assert!(matches!(parse_design("bogus 1\n"), Err(FormatError::Parse { line: 1, .. })));
    }

    #[test]
    fn seq_format() {
        let s = Sequencing::natural(5).unwrap();
        assert_eq!(write_seq(&s), "seq 5\n0 1 2 3 4\n");
        assert_eq!(parse_seq("seq 5\n0 1 2 3 4\n").unwrap(), s);
        assert!(parse_seq("seq 3\n0 1\n").is_err());
        assert!(parse_seq("seq 3\n0 1 1\n").is_err());
        assert!(parse_seq("0 1 2\n").is_err());
    }
}
