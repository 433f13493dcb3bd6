//! Module files: `key = value` lines with `#` comments.
//!
//! ```text
//! # C_8 over F_5
//! p = 5
//! k = 1
//! n = 2
//! vars = s, t
//! A = [[s^3 + s*t^2, s^2*t + 4*t^3];
//!      [3*s^2*t + 2*t^3, s^3 + s*t^2]]
//! ```
//!
//! `A` may span several lines as long as its brackets are open. Every key is
//! required exactly once; anything else is rejected.

use frobgen::matfrob::{parse_matrix, Matrix};
use frobgen::symfield::{RatFunc, Ring};

const KEYS: [&str; 5] = ["p", "k", "n", "vars", "A"];

#[derive(Clone, Debug)]
pub struct ModuleFile {
    pub p: u64,
    pub k: u32,
    pub ring: Ring,
    pub a: Matrix<RatFunc>,
}

impl ModuleFile {
    pub fn q(&self) -> u64 {
        self.p.pow(self.k)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ModFileError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing key `{0}`")]
    Missing(&'static str),
    #[error("{0}")]
    Invalid(String),
}

fn depth(s: &str) -> i32 {
    s.chars()
        .map(|c| match c {
            '[' | '(' => 1,
            ']' | ')' => -1,
            _ => 0,
        })
        .sum()
}

pub fn parse_module_file(text: &str) -> Result<ModuleFile, ModFileError> {
    let mut values: [Option<String>; 5] = Default::default();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((idx, raw)) = lines.next() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| ModFileError::Line { line: idx + 1, msg };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let key = key.trim();
        let slot = KEYS
            .iter()
            .position(|k| *k == key)
            .ok_or_else(|| err(format!("unknown key `{key}`")))?;
        if values[slot].is_some() {
            return Err(err(format!("duplicate key `{key}`")));
        }
        let mut value = value.trim().to_string();
        while depth(&value) > 0 {
            let Some((_, more)) = lines.next() else {
                return Err(err(format!("unterminated value for `{key}`")));
            };
            value.push(' ');
            value.push_str(more.split('#').next().unwrap_or("").trim());
        }
        values[slot] = Some(value);
    }
    let [p, k, n, vars, a] = values;
    let p = p.ok_or(ModFileError::Missing("p"))?;
    let k = k.ok_or(ModFileError::Missing("k"))?;
    let n = n.ok_or(ModFileError::Missing("n"))?;
    let vars = vars.ok_or(ModFileError::Missing("vars"))?;
    let a = a.ok_or(ModFileError::Missing("A"))?;
    let int = |key: &str, v: &str| {
        v.parse::<u64>()
            .map_err(|_| ModFileError::Invalid(format!("`{key}` must be a non-negative integer")))
    };
    let p = int("p", &p)?;
    let k = int("k", &k)?;
    let n = int("n", &n)?;
    if k == 0 || k > 62 || p.checked_pow(k as u32).is_none() {
        return Err(ModFileError::Invalid(format!("k = {k} out of range")));
    }
    let names: Vec<&str> = vars
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .collect();
    let ring = Ring::new(p, &names).map_err(|e| ModFileError::Invalid(e.to_string()))?;
    let a = parse_matrix(&a, &ring).map_err(|e| ModFileError::Invalid(format!("A: {e}")))?;
    if a.rows() as u64 != n {
        return Err(ModFileError::Invalid(format!(
            "A is {}x{} but n = {n}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(ModuleFile {
        p,
        k: k as u32,
        ring,
        a,
    })
}
