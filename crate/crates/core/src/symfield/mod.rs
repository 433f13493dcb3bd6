//! Multivariate polynomials and rational functions over a prime field.
//!
//! All symbolic matrices in the crate have [`RatFunc`] entries. Values are
//! kept canonical (coprime numerator and denominator, denominator with
//! leading coefficient 1 in graded-lex order), so structural equality is
//! mathematical equality.

mod gcd;
mod mpoly;
mod parse;
mod ratfunc;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::gf::{make_field, FieldSpec};

pub use gcd::gcd;
pub use mpoly::{MPoly, Monomial};
pub use parse::{parse_expr, parse_poly};
pub use ratfunc::{specialize, RatFunc};

struct RingData {
    field: FieldSpec,
    vars: Vec<String>,
}

/// F_p[v_1, ..., v_r] with named indeterminates.
#[derive(Clone)]
pub struct Ring(Arc<RingData>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars)
    }
}

impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}[{}]", self.p(), self.0.vars.join(","))
    }
}

fn valid_var_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase())
        && chars.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

impl Ring {
    pub fn new<S: AsRef<str>>(p: u64, vars: &[S]) -> Result<Ring> {
        let field = make_field(p, 1, None)?;
        Ring::over(&field, vars)
    }

    pub fn over<S: AsRef<str>>(field: &FieldSpec, vars: &[S]) -> Result<Ring> {
        if !field.is_prime_field() {
            return Err(Error::InvalidField(
                "symbolic coefficients must lie in a prime field".into(),
            ));
        }
        let vars: Vec<String> = vars.iter().map(|v| v.as_ref().to_string()).collect();
        for (i, v) in vars.iter().enumerate() {
            if !valid_var_name(v) {
                return Err(Error::InvalidInput(format!("invalid variable name `{v}`")));
            }
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
            }
        }
        Ok(Ring(Arc::new(RingData {
            field: field.clone(),
            vars,
        })))
    }

    pub fn p(&self) -> u64 {
        self.0.field.p()
    }

    pub fn field(&self) -> &FieldSpec {
        &self.0.field
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub(crate) fn reduce(&self, v: i64) -> u64 {
        v.rem_euclid(self.p() as i64) as u64
    }
}
