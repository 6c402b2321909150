use std::fmt::Display;
use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, Context};
use seqdesign::format::{parse_design, parse_seq};
use seqdesign::{BlockSystem, Sequencing};

pub const OK: u8 = 0;
pub const REFUTED: u8 = 1;
pub const USAGE: u8 = 2;
pub const ALGORITHM: u8 = 3;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub error: anyhow::Error,
}

impl Failure {
    pub fn new(code: u8, error: impl Into<anyhow::Error>) -> Failure {
        Failure {
            code,
            error: error.into(),
        }
    }
}

pub type CmdResult = Result<u8, Failure>;

pub trait ExitContext<T> {
    fn usage(self) -> Result<T, Failure>;
    fn algorithm(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> ExitContext<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: USAGE,
            error: e.into(),
        })
    }

    fn algorithm(self) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: ALGORITHM,
            error: e.into(),
        })
    }
}

pub fn usage_error(msg: impl Display) -> Failure {
    Failure {
        code: USAGE,
        error: anyhow!("{msg}"),
    }
}

pub fn algorithm_error(msg: impl Display) -> Failure {
    Failure {
        code: ALGORITHM,
        error: anyhow!("{msg}"),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return std::io::read_to_string(std::io::stdin()).context("reading stdin").usage();
    }
    fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .usage()
}

pub fn load_design(path: &Path) -> Result<BlockSystem, Failure> {
    parse_design(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .usage()
}

pub fn load_seq(path: &Path) -> Result<Sequencing, Failure> {
    parse_seq(&read(path)?)
        .with_context(|| format!("parsing {}", path.display()))
        .usage()
}

pub fn check_lengths(sys: &BlockSystem, seq: &Sequencing) -> Result<(), Failure> {
    if sys.n() != seq.len() {
        return Err(usage_error(format!(
            "sequencing has {} points but the design has {}",
            seq.len(),
            sys.n()
        )));
    }
    Ok(())
}

/// Writes to a file, or to stdout for `-`.
pub fn emit(path: &Path, text: &str) -> Result<(), Failure> {
    if path == Path::new("-") {
        let mut out = std::io::stdout().lock();
        return out.write_all(text.as_bytes()).context("writing stdout").usage();
    }
    fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .usage()
}

pub fn print_json(value: serde_json::Value) {
    println!("{value}");
}

/// Decimal with nine significant digits.
pub fn sig9(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = (8 - x.abs().log10().floor() as i32).max(0) as usize;
    format!("{x:.decimals$}")
}
