use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use super::Ring;
use crate::error::{Error, Result};
use crate::gf::poly::inv_mod;
use crate::scalar::Scalar;

/// Exponent vector, one entry per ring variable.
pub type Monomial = Vec<u32>;

fn total(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// Graded lexicographic order with the first variable largest.
pub(crate) fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    total(a).cmp(&total(b)).then_with(|| a.cmp(b))
}

/// Sparse polynomial; terms sorted by descending graded-lex order, no
/// zero coefficients.
#[derive(Clone)]
pub struct MPoly {
    ring: Ring,
    terms: Vec<(Monomial, u64)>,
}

impl PartialEq for MPoly {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.terms == other.terms
    }
}

impl Eq for MPoly {}

impl fmt::Debug for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl MPoly {
    pub fn zero(ring: &Ring) -> Self {
        MPoly {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Ring) -> Self {
        Self::constant(ring, 1)
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        let c = ring.reduce(c);
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(vec![0; ring.nvars()], c)]
        };
        MPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        let i = ring
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(Self::var_at(ring, i))
    }

    pub(crate) fn var_at(ring: &Ring, i: usize) -> Self {
        let mut e = vec![0; ring.nvars()];
        e[i] = 1;
        MPoly {
            ring: ring.clone(),
            terms: vec![(e, 1)],
        }
    }

    /// Builds a polynomial from arbitrary (monomial, coefficient) pairs.
    pub fn from_terms(ring: &Ring, terms: impl IntoIterator<Item = (Monomial, i64)>) -> Self {
        let mut acc: HashMap<Monomial, u64> = HashMap::new();
        let p = ring.p();
        for (m, c) in terms {
            assert_eq!(m.len(), ring.nvars(), "monomial arity");
            let e = acc.entry(m).or_insert(0);
            *e = (*e + ring.reduce(c)) % p;
        }
        Self::from_map(ring, acc)
    }

    fn from_map(ring: &Ring, acc: HashMap<Monomial, u64>) -> Self {
        let mut terms: Vec<(Monomial, u64)> = acc.into_iter().filter(|(_, c)| *c != 0).collect();
        terms.sort_by(|a, b| grlex(&b.0, &a.0));
        MPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value() == Some(1)
    }

    /// The value if this polynomial is constant.
    pub fn constant_value(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(m, c)] if m.iter().all(|&e| e == 0) => Some(*c),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monomial, u64)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> u64 {
        self.terms.first().map_or(0, |t| t.1)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| total(m)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.iter().map(|(m, _)| m[var]).max().unwrap_or(0)
    }

    /// Which variables occur.
    pub fn support(&self) -> Vec<bool> {
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for (u, &e) in used.iter_mut().zip(m) {
                *u |= e > 0;
            }
        }
        used
    }

    fn check(&self, other: &Self) {
        assert!(
            self.ring == other.ring,
            "ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    pub fn add(&self, other: &Self) -> Self {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.merge(other, true)
    }

    fn merge(&self, other: &Self, negate: bool) -> Self {
        self.check(other);
        let p = self.ring.p();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let neg = |c: u64| if negate { (p - c) % p } else { c };
        while i < self.terms.len() || j < other.terms.len() {
            let ord = match (self.terms.get(i), other.terms.get(j)) {
                (Some(a), Some(b)) => grlex(&a.0, &b.0),
                (Some(_), None) => Ordering::Greater,
                _ => Ordering::Less,
            };
            match ord {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), neg(*c)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (self.terms[i].1 + neg(other.terms[j].1)) % p;
                    if c != 0 {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        MPoly {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(self.ring.p() - 1)
    }

    pub fn scale(&self, s: u64) -> Self {
        let p = self.ring.p();
        let s = s % p;
        if s == 0 {
            return Self::zero(&self.ring);
        }
        MPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * s % p))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.ring);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(c);
        }
        let p = self.ring.p();
        let mut acc: HashMap<Monomial, u64> =
            HashMap::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                let e = acc.entry(m).or_insert(0);
                *e = (*e + ca * cb) % p;
            }
        }
        Self::from_map(&self.ring, acc)
    }

    /// Multiplies by a single term c * m.
    pub(crate) fn mul_term(&self, m: &[u32], c: u64) -> Self {
        let p = self.ring.p();
        let c = c % p;
        if c == 0 {
            return Self::zero(&self.ring);
        }
        // multiplying by a monomial preserves the order
        MPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(a, ca)| (a.iter().zip(m).map(|(x, y)| x + y).collect(), ca * c % p))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(&self.ring);
        let mut base = self.clone();
        // x -> x^p is additive in characteristic p
        let p = self.ring.p();
        if e > 0 && e % p == 0 && self.terms.len() > 1 {
            let frob = MPoly {
                ring: self.ring.clone(),
                terms: self
                    .terms
                    .iter()
                    .map(|(m, c)| (m.iter().map(|x| x * p as u32).collect(), *c))
                    .collect(),
            };
            return frob.pow(e / p);
        }
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        self.check(divisor);
        if divisor.is_zero() {
            return None;
        }
        if let Some(c) = divisor.constant_value() {
            return Some(self.scale(inv_mod(c, self.ring.p())));
        }
        let p = self.ring.p();
        let (lm, lc) = divisor.leading().cloned().expect("nonzero");
        let lc_inv = inv_mod(lc, p);
        let mut rem = self.clone();
        let mut quot: Vec<(Monomial, u64)> = Vec::new();
        while let Some((m, c)) = rem.leading().cloned() {
            if m.iter().zip(&lm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = m.iter().zip(&lm).map(|(a, b)| a - b).collect();
            let qc = c * lc_inv % p;
            rem = rem.sub(&divisor.mul_term(&qm, qc));
            quot.push((qm, qc));
        }
        // quotient terms were produced in descending order
        Some(MPoly {
            ring: self.ring.clone(),
            terms: quot,
        })
    }

    /// Scales so the leading coefficient is 1; returns the scale used.
    pub fn monic(&self) -> (Self, u64) {
        if self.is_zero() {
            return (self.clone(), 1);
        }
        let inv = inv_mod(self.leading_coeff(), self.ring.p());
        (self.scale(inv), inv)
    }

    /// Evaluates with `values[i]` substituted for variable i; constants
    /// are mapped through `lift`.
    pub fn eval_with<T: Scalar>(&self, values: &[T], lift: &dyn Fn(u64) -> T) -> T {
        assert_eq!(values.len(), self.ring.nvars(), "assignment arity");
        let zero = lift(0);
        let mut cache: HashMap<(usize, u32), T> = HashMap::new();
        let mut acc = zero;
        for (m, c) in &self.terms {
            let mut t = lift(*c);
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = cache
                    .entry((i, e))
                    .or_insert_with(|| values[i].power(e as u64))
                    .clone();
                t = t.times(&pw);
            }
            acc = acc.plus(&t);
        }
        acc
    }

    /// Rewrites in another ring whose variables include all used ones.
    pub fn into_ring(&self, target: &Ring) -> Result<Self> {
        if target.p() != self.ring.p() {
            return Err(Error::DomainMismatch);
        }
        let map: Vec<Option<usize>> = self
            .ring
            .vars()
            .iter()
            .map(|v| target.var_index(v))
            .collect();
        let mut terms = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut nm = vec![0u32; target.nvars()];
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j =
                    map[i].ok_or_else(|| Error::UnknownVariable(self.ring.vars()[i].clone()))?;
                nm[j] = e;
            }
            terms.push((nm, *c as i64));
        }
        Ok(Self::from_terms(target, terms))
    }

    /// Coefficients as a univariate polynomial in variable `v`.
    pub(crate) fn to_uni(&self, v: usize) -> Vec<MPoly> {
        let deg = self.degree_in(v) as usize;
        let mut parts: Vec<Vec<(Monomial, u64)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let d = m[v] as usize;
            let mut mm = m.clone();
            mm[v] = 0;
            parts[d].push((mm, *c));
        }
        parts
            .into_iter()
            .map(|mut terms| {
                terms.sort_by(|a, b| grlex(&b.0, &a.0));
                MPoly {
                    ring: self.ring.clone(),
                    terms,
                }
            })
            .collect()
    }

    pub(crate) fn from_uni(ring: &Ring, coeffs: &[MPoly], v: usize) -> MPoly {
        let mut acc = MPoly::zero(ring);
        for (d, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut m = vec![0u32; ring.nvars()];
            m[v] = d as u32;
            acc = acc.add(&c.mul_term(&m, 1));
        }
        acc
    }
}

pub(crate) fn fmt_monomial(ring: &Ring, m: &[u32]) -> String {
    let parts: Vec<String> = m
        .iter()
        .enumerate()
        .filter(|(_, &e)| e > 0)
        .map(|(i, &e)| {
            if e == 1 {
                ring.vars()[i].clone()
            } else {
                format!("{}^{}", ring.vars()[i], e)
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = fmt_monomial(&self.ring, m);
                match (mono.is_empty(), *c) {
                    (true, c) => c.to_string(),
                    (false, 1) => mono,
                    (false, c) => format!("{c}*{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Ring {
        Ring::new(5, &["s", "t"]).unwrap()
    }

    #[test]
    fn printing_uses_descending_grlex() {
        let r = ring();
        let s = MPoly::var(&r, "s").unwrap();
        let t = MPoly::var(&r, "t").unwrap();
        let f = s
            .mul(&t)
            .mul(&t)
            .add(&s.pow(3))
            .add(&MPoly::constant(&r, -1));
        assert_eq!(f.to_string(), "s^3 + s*t^2 + 4");
    }

    #[test]
    fn exact_division() {
        let r = ring();
        let s = MPoly::var(&r, "s").unwrap();
        let t = MPoly::var(&r, "t").unwrap();
        let a = s.add(&t);
        let b = s.sub(&t.scale(2));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!(prod.add(&MPoly::one(&r)).div_exact(&b), None);
    }

    #[test]
    fn frobenius_power_shortcut_matches_repeated_product() {
        let r = ring();
        let s = MPoly::var(&r, "s").unwrap();
        let t = MPoly::var(&r, "t").unwrap();
        let f = s.add(&t.scale(3)).add(&MPoly::one(&r));
        let mut slow = MPoly::one(&r);
        for _ in 0..10 {
            slow = slow.mul(&f);
        }
        assert_eq!(f.pow(10), slow);
    }

    #[test]
    fn univariate_view_round_trips() {
        let r = ring();
        let s = MPoly::var(&r, "s").unwrap();
        let t = MPoly::var(&r, "t").unwrap();
        let f = s.pow(3).mul(&t).add(&s.mul(&t.pow(2))).add(&t);
        let u = f.to_uni(0);
        assert_eq!(u.len(), 4);
        assert_eq!(MPoly::from_uni(&r, &u, 0), f);
    }
}
