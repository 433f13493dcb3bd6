//! Finite fields F_{p^k} as residues of F_p[x] modulo a monic irreducible.
//!
//! A [`FieldSpec`] is a cheap shared handle; [`FieldElement`] values carry
//! their spec and refuse to mix with elements of another field.

pub(crate) mod linalg;
pub(crate) mod poly;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use rand::Rng;

use crate::error::{Error, Result};
pub use linalg::MatP;

/// Largest field that [`enumerate`] will list.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Largest field order accepted by [`find_generator`]; the order test
/// works through the factorization of p^k - 1, not by enumeration.
pub const GENERATOR_BUDGET: u64 = 1 << 48;

/// Default-modulus fields are built once per (p, k); sweeps over
/// extension degrees request the same fields repeatedly.
static DEFAULT_FIELDS: OnceLock<Mutex<HashMap<(u64, usize), FieldSpec>>> = OnceLock::new();

struct FieldData {
    p: u64,
    k: usize,
    /// Monic modulus, low-to-high, length k + 1.
    modulus: Vec<u64>,
    /// Column j holds the coordinates of (x^j)^p.
    frob: Vec<Vec<u64>>,
    order: u64,
}

/// Handle to F_{p^k} = F_p[x]/(modulus).
#[derive(Clone)]
pub struct FieldSpec(Arc<FieldData>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p && self.0.modulus == other.0.modulus)
    }
}

impl Eq for FieldSpec {}

impl Hash for FieldSpec {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.p.hash(state);
        self.0.modulus.hash(state);
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.k == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            let coeffs: Vec<String> = self.0.modulus.iter().map(|c| c.to_string()).collect();
            write!(f, "GF({}^{}; {})", self.0.p, self.0.k, coeffs.join(","))
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Prime factors of `n` without multiplicity, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn checked_order(p: u64, k: usize) -> Result<u64> {
    let mut order = 1u64;
    for _ in 0..k {
        order = order
            .checked_mul(p)
            .filter(|&o| o < (1 << 62))
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} is too large")))?;
    }
    Ok(order)
}

/// Builds F_{p^k}. Without a modulus the smallest monic irreducible of
/// degree k is used, ordering candidates by their coefficient vectors
/// read from the x^{k-1} coefficient down to the constant.
pub fn make_field(p: u64, k: usize, modulus: Option<&[u64]>) -> Result<FieldSpec> {
    if p < 2 || p >= 1 << 31 {
        return Err(Error::InvalidField(format!(
            "characteristic {p} out of range"
        )));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if k == 0 {
        return Err(Error::InvalidField(
            "extension degree must be at least 1".into(),
        ));
    }
    let order = checked_order(p, k)?;
    if modulus.is_none() {
        let cache = DEFAULT_FIELDS.get_or_init(Default::default);
        if let Some(spec) = cache.lock().expect("field cache").get(&(p, k)) {
            return Ok(spec.clone());
        }
    }
    let default = modulus.is_none();
    let modulus = match modulus {
        Some(m) => {
            let m: Vec<u64> = m.iter().map(|&c| c % p).collect();
            if m.len() != k + 1 {
                return Err(Error::InvalidModulus(format!(
                    "expected degree {k}, got {} coefficients",
                    m.len()
                )));
            }
            if m[k] != 1 {
                return Err(Error::InvalidModulus("modulus is not monic".into()));
            }
            if !poly::is_irreducible(&m, p) {
                return Err(Error::InvalidModulus(format!(
                    "{m:?} is reducible over F_{p}"
                )));
            }
            m
        }
        None if k == 1 => vec![0, 1],
        None => default_modulus(p, k),
    };
    let spec = FieldSpec::from_modulus(p, k, modulus, order);
    if default {
        let cache = DEFAULT_FIELDS.get_or_init(Default::default);
        cache
            .lock()
            .expect("field cache")
            .insert((p, k), spec.clone());
    }
    Ok(spec)
}

fn default_modulus(p: u64, k: usize) -> Vec<u64> {
    let mut lower = vec![0u64; k];
    loop {
        let mut f = lower.clone();
        f.push(1);
        if poly::is_irreducible(&f, p) {
            return f;
        }
        // odometer with the x^{k-1} coefficient most significant
        for c in lower.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
}

/// Parses `GF(p)`, `GF(p^k)` or `GF(p^k; c_0,...,c_k)`.
pub fn parse_field_literal(text: &str) -> Result<FieldSpec> {
    let bad = |msg: &str| Error::Syntax {
        pos: 0,
        msg: format!("field literal `{text}`: {msg}"),
    };
    let t = text.trim();
    let inner = t
        .strip_prefix("GF(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| bad("expected GF(...)"))?;
    let (head, modulus) = match inner.split_once(';') {
        Some((h, m)) => (h.trim(), Some(m.trim())),
        None => (inner.trim(), None),
    };
    let (p, k) = match head.split_once('^') {
        Some((p, k)) => (
            p.trim()
                .parse::<u64>()
                .map_err(|_| bad("bad characteristic"))?,
            k.trim().parse::<usize>().map_err(|_| bad("bad degree"))?,
        ),
        None => (
            head.parse::<u64>().map_err(|_| bad("bad characteristic"))?,
            1,
        ),
    };
    let coeffs = match modulus {
        Some(m) => Some(
            m.split(',')
                .map(|c| {
                    c.trim()
                        .parse::<i64>()
                        .map_err(|_| bad("bad modulus coefficient"))
                })
                .collect::<Result<Vec<i64>>>()?
                .into_iter()
                .map(|c| c.rem_euclid(p.max(1) as i64) as u64)
                .collect::<Vec<u64>>(),
        ),
        None => None,
    };
    make_field(p, k, coeffs.as_deref())
}

impl FieldSpec {
    fn from_modulus(p: u64, k: usize, modulus: Vec<u64>, order: u64) -> Self {
        let mut data = FieldData {
            p,
            k,
            modulus,
            frob: Vec::new(),
            order,
        };
        // (x^j)^p = (x^p)^j
        let xp = poly::pow_poly_mod(&[0, 1], p, &data.modulus, p);
        let mut col = vec![1u64];
        for _ in 0..k {
            let mut padded = col.clone();
            padded.resize(k, 0);
            data.frob.push(padded);
            col = poly::rem(&poly::mul(&col, &xp, p), &data.modulus, p);
        }
        FieldSpec(Arc::new(data))
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    pub fn k(&self) -> usize {
        self.0.k
    }

    pub fn order(&self) -> u64 {
        self.0.order
    }

    pub fn modulus(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn is_prime_field(&self) -> bool {
        self.0.k == 1
    }

    pub fn prime_field(&self) -> FieldSpec {
        if self.is_prime_field() {
            return self.clone();
        }
        make_field(self.0.p, 1, None).expect("prime field")
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            spec: self.clone(),
            c: vec![0; self.0.k],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> FieldElement {
        let mut e = self.zero();
        e.c[0] = v.rem_euclid(self.0.p as i64) as u64;
        e
    }

    /// The residue class of x, i.e. the chosen root of the modulus.
    pub fn generator_root(&self) -> FieldElement {
        if self.0.k == 1 {
            // x ≡ -c_0 modulo x + c_0
            return self.from_int(-(self.0.modulus[0] as i64));
        }
        let mut e = self.zero();
        e.c[1] = 1;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement> {
        if coeffs.len() > self.0.k {
            return Err(Error::InvalidInput(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.0.k
            )));
        }
        let mut e = self.zero();
        for (i, &c) in coeffs.iter().enumerate() {
            e.c[i] = c % self.0.p;
        }
        Ok(e)
    }

    /// Element with coefficient vector given by the base-p digits of
    /// `index`, constant coefficient least significant.
    pub fn element_from_index(&self, mut index: u64) -> FieldElement {
        let mut e = self.zero();
        for c in e.c.iter_mut() {
            *c = index % self.0.p;
            index /= self.0.p;
        }
        e
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        let mut e = self.zero();
        for c in e.c.iter_mut() {
            *c = rng.gen_range(0..self.0.p);
        }
        e
    }

    /// Power basis 1, x, ..., x^{k-1}.
    pub fn basis(&self) -> Vec<FieldElement> {
        (0..self.0.k)
            .map(|i| {
                let mut e = self.zero();
                e.c[i] = 1;
                e
            })
            .collect()
    }

    /// The degree-m extension with default modulus together with the
    /// embedding of `self` into it.
    pub fn extension(&self, m: usize) -> Result<(FieldSpec, Embedding)> {
        if m == 0 {
            return Err(Error::InvalidField(
                "extension degree must be at least 1".into(),
            ));
        }
        if m == 1 {
            return Ok((self.clone(), Embedding::identity(self)));
        }
        let big = make_field(self.0.p, self.0.k * m, None)?;
        let emb = self.embed_into(&big)?;
        Ok((big, emb))
    }

    /// Embedding into `target`, sending the modulus root to the first root
    /// found in the copy of F_{p^k} inside `target`.
    pub fn embed_into(&self, target: &FieldSpec) -> Result<Embedding> {
        if self == target {
            return Ok(Embedding::identity(self));
        }
        if target.p() != self.p() || target.k() % self.k() != 0 {
            return Err(Error::InvalidField(format!(
                "{self} does not embed into {target}"
            )));
        }
        if self.is_prime_field() {
            return Ok(Embedding {
                source: self.clone(),
                target: target.clone(),
                powers: vec![target.one()],
            });
        }
        // the subfield F_{p^k} is the kernel of y -> y^{p^k} - y
        let n = target.k();
        let columns: Vec<Vec<u64>> = target
            .basis()
            .into_iter()
            .map(|b| (b.frobenius_power(self.k() as u64) - b.clone()).c)
            .collect();
        let kernel = MatP::from_columns(self.p(), n, &columns).kernel();
        debug_assert_eq!(kernel.len(), self.k());
        let sub_basis: Vec<FieldElement> = kernel
            .iter()
            .map(|v| FieldElement {
                spec: target.clone(),
                c: v.clone(),
            })
            .collect();
        for idx in 1..self.order() {
            let mut y = target.zero();
            let mut rest = idx;
            for b in &sub_basis {
                y = y + b.scale(rest % self.p());
                rest /= self.p();
            }
            // evaluate the modulus at y
            let mut acc = target.zero();
            for &c in self.modulus().iter().rev() {
                acc = acc * y.clone() + target.from_int(c as i64);
            }
            if acc.is_zero() {
                let mut powers = Vec::with_capacity(self.k());
                let mut pw = target.one();
                for _ in 0..self.k() {
                    powers.push(pw.clone());
                    pw = pw * y.clone();
                }
                return Ok(Embedding {
                    source: self.clone(),
                    target: target.clone(),
                    powers,
                });
            }
        }
        Err(Error::InvalidField(format!(
            "no root of the modulus of {self} in {target}"
        )))
    }
}

/// A field homomorphism F_{p^k} -> F_{p^K}, k | K.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldSpec,
    target: FieldSpec,
    /// Images of 1, x, ..., x^{k-1}.
    powers: Vec<FieldElement>,
}

impl Embedding {
    pub fn identity(spec: &FieldSpec) -> Self {
        Embedding {
            source: spec.clone(),
            target: spec.clone(),
            powers: spec.basis(),
        }
    }

    pub fn source(&self) -> &FieldSpec {
        &self.source
    }

    pub fn target(&self) -> &FieldSpec {
        &self.target
    }

    pub fn apply(&self, x: &FieldElement) -> FieldElement {
        assert_eq!(
            x.spec, self.source,
            "embedding applied to a foreign element"
        );
        if self.source == self.target {
            return x.clone();
        }
        x.c.iter()
            .zip(&self.powers)
            .fold(self.target.zero(), |acc, (&c, pw)| acc + pw.scale(c))
    }
}

/// An element of a finite field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElement {
    spec: FieldSpec,
    c: Vec<u64>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.spec.is_prime_field() {
            write!(f, "{}", self.c[0])
        } else {
            let parts: Vec<String> = self.c.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", parts.join(","))
        }
    }
}

impl FieldElement {
    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&c| c == 0)
    }

    /// Index in the enumeration order of [`enumerate`].
    pub fn index(&self) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * self.spec.p() + c)
    }

    /// The element as a residue mod p when it lies in the prime subfield.
    pub fn as_prime(&self) -> Option<u64> {
        self.c[1..].iter().all(|&c| c == 0).then_some(self.c[0])
    }

    fn check(&self, other: &Self) {
        assert!(
            self.spec == other.spec,
            "field mismatch: {} vs {}",
            self.spec,
            other.spec
        );
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::DomainMismatch);
        }
        Ok(self.clone() + other.clone())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.spec != other.spec {
            return Err(Error::DomainMismatch);
        }
        Ok(self.clone() * other.clone())
    }

    pub fn scale(&self, s: u64) -> Self {
        let p = self.spec.p();
        let s = s % p;
        FieldElement {
            spec: self.spec.clone(),
            c: self.c.iter().map(|&c| c * s % p).collect(),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.check(other);
        let p = self.spec.p();
        let k = self.spec.k();
        if k == 1 {
            return FieldElement {
                spec: self.spec.clone(),
                c: vec![self.c[0] * other.c[0] % p],
            };
        }
        // accumulate without reducing when k p^2 (k + 1) cannot overflow
        let lazy = (k as u128 + 1) * (k as u128) * (p as u128) * (p as u128) < (1u128 << 63);
        let mut prod = vec![0u64; 2 * k - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if lazy {
                for (j, &b) in other.c.iter().enumerate() {
                    prod[i + j] += a * b;
                }
            } else {
                for (j, &b) in other.c.iter().enumerate() {
                    prod[i + j] = (prod[i + j] + a * b) % p;
                }
            }
        }
        let m = self.spec.modulus();
        for top in (k..2 * k - 1).rev() {
            let t = prod[top] % p;
            prod[top] = 0;
            if t == 0 {
                continue;
            }
            for i in 0..k {
                let idx = top - k + i;
                if lazy {
                    prod[idx] += t * ((p - m[i]) % p);
                } else {
                    prod[idx] = (prod[idx] + p - t * m[i] % p) % p;
                }
            }
        }
        if lazy {
            for x in prod.iter_mut() {
                *x %= p;
            }
        }
        prod.truncate(k);
        FieldElement {
            spec: self.spec.clone(),
            c: prod,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul_ref(&base),
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result.unwrap_or_else(|| self.spec.one())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(self.pow(self.spec.order() - 2))
    }

    /// x^{p^e}; the exponent is taken modulo k.
    pub fn frobenius_power(&self, e: u64) -> Self {
        let k = self.spec.k();
        let p = self.spec.p();
        let mut cur = self.c.clone();
        let lazy = (k as u128) * (p as u128) * (p as u128) < (1u128 << 63);
        for _ in 0..(e % k as u64) {
            let mut next = vec![0u64; k];
            for (j, &cj) in cur.iter().enumerate() {
                if cj == 0 {
                    continue;
                }
                for (i, &f) in self.spec.0.frob[j].iter().enumerate() {
                    next[i] = if lazy {
                        next[i] + cj * f
                    } else {
                        (next[i] + cj * f) % p
                    };
                }
            }
            if lazy {
                for x in next.iter_mut() {
                    *x %= p;
                }
            }
            cur = next;
        }
        FieldElement {
            spec: self.spec.clone(),
            c: cur,
        }
    }

    /// x^q for q a power of the characteristic.
    pub fn pow_q(&self, q: u64) -> Self {
        match log_p(q, self.spec.p()) {
            Some(e) => self.frobenius_power(e),
            None => self.pow(q),
        }
    }

    /// Product of the k conjugates, as an element of F_p.
    pub fn norm(&self) -> FieldElement {
        let k = self.spec.k() as u64;
        let prod = (0..k).fold(self.spec.one(), |acc, i| acc * self.frobenius_power(i));
        let prime = self.spec.prime_field();
        prime.from_int(prod.c[0] as i64)
    }

    /// Multiplicative order; None for zero.
    pub fn multiplicative_order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let group = self.spec.order() - 1;
        let mut ord = group;
        for l in prime_factors(group) {
            while ord % l == 0 && self.pow(ord / l).is_one() {
                ord /= l;
            }
        }
        Some(ord)
    }
}

/// e with p^e = q, if q is a power of p.
pub fn log_p(q: u64, p: u64) -> Option<u64> {
    let mut e = 0;
    let mut v = 1u64;
    while v < q {
        v = v.checked_mul(p)?;
        e += 1;
    }
    (v == q).then_some(e)
}

impl Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: Self) -> Self {
        self.check(&rhs);
        let p = self.spec.p();
        let c = self
            .c
            .iter()
            .zip(&rhs.c)
            .map(|(a, b)| (a + b) % p)
            .collect();
        FieldElement { spec: self.spec, c }
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: Self) -> Self {
        self.check(&rhs);
        let p = self.spec.p();
        let c = self
            .c
            .iter()
            .zip(&rhs.c)
            .map(|(a, b)| (a + p - b) % p)
            .collect();
        FieldElement { spec: self.spec, c }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> Self {
        let p = self.spec.p();
        let c = self.c.iter().map(|&a| (p - a) % p).collect();
        FieldElement { spec: self.spec, c }
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &'a FieldElement) -> FieldElement {
        self.mul_ref(rhs)
    }
}

impl<'a> Add<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &'a FieldElement) -> FieldElement {
        self.clone() + rhs.clone()
    }
}

impl<'a> Sub<&'a FieldElement> for &'a FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &'a FieldElement) -> FieldElement {
        self.clone() - rhs.clone()
    }
}

pub fn frobenius_power(x: &FieldElement, e: u64) -> FieldElement {
    x.frobenius_power(e)
}

pub fn norm(x: &FieldElement) -> FieldElement {
    x.norm()
}

/// All p^k elements in index order.
pub fn enumerate(spec: &FieldSpec) -> Result<Vec<FieldElement>> {
    if spec.order() > ENUMERATION_BUDGET {
        return Err(Error::BudgetExceeded {
            what: format!("enumerating {spec}"),
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok((0..spec.order())
        .map(|i| spec.element_from_index(i))
        .collect())
}

/// The first element in index order of multiplicative order p^k - 1.
pub fn find_generator(spec: &FieldSpec) -> Result<FieldElement> {
    if spec.order() > GENERATOR_BUDGET {
        return Err(Error::BudgetExceeded {
            what: format!("generator search in {spec}"),
            budget: GENERATOR_BUDGET,
        });
    }
    let group = spec.order() - 1;
    let factors = prime_factors(group);
    for idx in 1..spec.order() {
        let g = spec.element_from_index(idx);
        if factors.iter().all(|&l| !g.pow(group / l).is_one()) {
            return Ok(g);
        }
    }
    unreachable!("the multiplicative group of a finite field is cyclic")
}
