//! q-linearized polynomials Σ c_i Y^{q^i}, optionally with a constant
//! term, and their root spaces over finite fields.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{log_p, Embedding, FieldElement, FieldSpec, MatP};
use crate::matfrob::Matrix;
use crate::scalar::Scalar;
use crate::symfield::{parse_expr, specialize, RatFunc, Ring};

/// Hard ceiling on extension-degree sweeps.
pub const M_CEILING: u32 = 64;

#[derive(Clone, PartialEq)]
pub struct LinearizedPoly<T> {
    q: u64,
    /// c_0, ..., c_n with c_n = 1.
    coeffs: Vec<T>,
    affine: Option<T>,
}

impl<T: Scalar> fmt::Debug for LinearizedPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Scalar> LinearizedPoly<T> {
    pub fn new(q: u64, coeffs: Vec<T>, affine: Option<T>) -> Result<Self> {
        let Some(lead) = coeffs.last() else {
            return Err(Error::InvalidInput("empty coefficient list".into()));
        };
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput("q-degree must be at least 1".into()));
        }
        if !lead.is_one() {
            return Err(Error::InvalidInput(
                "linearized polynomial must be monic".into(),
            ));
        }
        if log_p(q, lead.characteristic()).is_none() {
            return Err(Error::InvalidInput(format!(
                "q = {q} is not a power of the characteristic"
            )));
        }
        if coeffs.iter().chain(&affine).any(|c| !c.same_domain(lead)) {
            return Err(Error::DomainMismatch);
        }
        let affine = affine.filter(|a| !a.is_zero());
        Ok(LinearizedPoly { q, coeffs, affine })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn q_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn affine(&self) -> Option<&T> {
        self.affine.as_ref()
    }

    pub fn is_separable(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> LinearizedPoly<S> {
        LinearizedPoly {
            q: self.q,
            coeffs: self.coeffs.iter().map(&f).collect(),
            affine: self.affine.as_ref().map(&f).filter(|a| !a.is_zero()),
        }
    }

    pub fn try_map<S: Scalar>(&self, f: impl Fn(&T) -> Result<S>) -> Result<LinearizedPoly<S>> {
        Ok(LinearizedPoly {
            q: self.q,
            coeffs: self.coeffs.iter().map(&f).collect::<Result<_>>()?,
            affine: match &self.affine {
                Some(a) => Some(f(a)?).filter(|a| !a.is_zero()),
                None => None,
            },
        })
    }

    /// f(y) with y in the coefficient domain.
    pub fn eval(&self, y: &T) -> T {
        let mut acc = match &self.affine {
            Some(a) => a.clone(),
            None => y.zero_like(),
        };
        let mut pw = y.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pw = pw.twist(self.q);
            }
            if !c.is_zero() {
                acc = acc.plus(&c.times(&pw));
            }
        }
        acc
    }
}

impl LinearizedPoly<RatFunc> {
    pub fn specialize(
        &self,
        assignment: &HashMap<String, FieldElement>,
    ) -> Result<LinearizedPoly<FieldElement>> {
        self.try_map(|c| specialize(c, assignment))
    }
}

impl LinearizedPoly<FieldElement> {
    pub fn field(&self) -> &FieldSpec {
        self.coeffs[0].spec()
    }

    /// Coefficients pushed into a larger field.
    pub fn embed(&self, emb: &Embedding) -> LinearizedPoly<FieldElement> {
        self.map(|c| emb.apply(c))
    }
}

/// Roots of a linearized polynomial inside one finite field: the empty
/// set, or `particular + span_{F_p}(kernel)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RootSpace {
    pub field: FieldSpec,
    pub q: u64,
    pub particular: Option<FieldElement>,
    /// F_p-basis of the homogeneous root space.
    pub kernel: Vec<FieldElement>,
}

impl RootSpace {
    pub fn is_empty(&self) -> bool {
        self.particular.is_none()
    }

    /// Dimension of the homogeneous root space over F_q.
    pub fn dim(&self) -> usize {
        let e = log_p(self.q, self.field.p()).expect("q is a power of p") as usize;
        self.kernel.len() / e
    }

    /// Number of roots in the field.
    pub fn count(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            self.field.p().pow(self.kernel.len() as u32)
        }
    }

    /// All roots, by enumerating F_p-combinations of the kernel.
    pub fn elements(&self) -> Vec<FieldElement> {
        let Some(base) = &self.particular else {
            return Vec::new();
        };
        let p = self.field.p();
        (0..self.count())
            .map(|mut idx| {
                let mut y = base.clone();
                for b in &self.kernel {
                    y = y + b.scale(idx % p);
                    idx /= p;
                }
                y
            })
            .collect()
    }
}

/// Coordinates of the F_p-linear map y ↦ g(y) on `field` in its power basis.
pub(crate) fn linear_map_matrix(
    field: &FieldSpec,
    g: impl Fn(&FieldElement) -> Vec<FieldElement>,
) -> MatP {
    let columns: Vec<Vec<u64>> = field
        .basis()
        .iter()
        .map(|b| g(b).iter().flat_map(|x| x.coeffs().to_vec()).collect())
        .collect();
    let rows = columns.first().map_or(0, Vec::len);
    MatP::from_columns(field.p(), rows, &columns)
}

/// Root space of `f` (coefficients already in `field`).
pub fn root_space(f: &LinearizedPoly<FieldElement>, field: &FieldSpec) -> Result<RootSpace> {
    if f.field() != field {
        return Err(Error::DomainMismatch);
    }
    let homogeneous = LinearizedPoly {
        q: f.q,
        coeffs: f.coeffs.clone(),
        affine: None,
    };
    let m = linear_map_matrix(field, |y| vec![homogeneous.eval(y)]);
    let to_elem = |v: &[u64]| field.from_coeffs(v).expect("coordinate vector");
    let kernel: Vec<FieldElement> = m.kernel().iter().map(|v| to_elem(v)).collect();
    let particular = match &f.affine {
        None => Some(field.zero()),
        Some(a) => {
            let rhs: Vec<u64> = (-a.clone()).coeffs().to_vec();
            m.solve(&rhs).map(|v| to_elem(&v))
        }
    };
    Ok(RootSpace {
        field: field.clone(),
        q: f.q,
        particular,
        kernel,
    })
}

/// Root space of `f` in the degree-m extension of its coefficient field.
pub fn root_space_in_extension(f: &LinearizedPoly<FieldElement>, m: usize) -> Result<RootSpace> {
    let (big, emb) = f.field().extension(m)?;
    root_space(&f.embed(&emb), &big)
}

/// Largest usable sweep bound: at most `m_max`, the hard ceiling, and
/// the largest extension degree whose field order is representable.
pub fn effective_bound(base: &FieldSpec, m_max: u32) -> u32 {
    let mut bound = 0;
    let mut order: u64 = 1;
    while bound < m_max.min(M_CEILING) {
        match order.checked_mul(base.order()) {
            Some(o) if o < 1 << 62 => order = o,
            _ => break,
        }
        bound += 1;
    }
    bound
}

/// Least m ≤ m_max such that f has a full root space (dimension `n`
/// over F_q, nonempty in the affine case) in the degree-m extension of
/// its coefficient field.
pub fn splitting_degree(f: &LinearizedPoly<FieldElement>, n: usize, m_max: u32) -> Result<u32> {
    if !f.is_separable() {
        return Err(Error::Inseparable);
    }
    let bound = effective_bound(f.field(), m_max);
    for m in 1..=bound {
        let rs = root_space_in_extension(f, m as usize)?;
        if rs.dim() == n && !rs.is_empty() {
            return Ok(m);
        }
    }
    Err(Error::SplittingBoundExceeded(bound))
}

/// Result of a Galois-order computation for a finite Frobenius module.
#[derive(Clone, Debug)]
pub struct GaloisReport {
    /// Splitting degree over the coefficient field.
    pub order: u32,
    /// The splitting field.
    pub field: FieldSpec,
    /// Solution matrix: A U^(q) = U, equivalently λ(U) = A.
    pub u: Matrix<FieldElement>,
    /// U^-1 σ(U) for σ the Frobenius of the coefficient field; lies in
    /// GL_n(F_q).
    pub rho: Matrix<FieldElement>,
}

/// F_p-basis of the solutions X ∈ L^n of A X^(q) = X, where `a` already
/// has entries in L.
pub fn solution_space(a: &Matrix<FieldElement>, q: u64) -> Result<Vec<Vec<FieldElement>>> {
    let field = a.sample().spec().clone();
    let n = a.rows();
    let k = field.k();
    let p = field.p();
    let dim = n * k;
    let unit = |idx: usize| -> Vec<FieldElement> {
        let mut v = vec![field.zero(); n];
        let mut c = vec![0u64; k];
        c[idx % k] = 1;
        v[idx / k] = field.from_coeffs(&c).expect("basis coefficient");
        v
    };
    let columns: Vec<Vec<u64>> = (0..dim)
        .map(|idx| {
            let x = unit(idx);
            let xq: Vec<FieldElement> = x.iter().map(|e| e.pow_q(q)).collect();
            let ax = a.mul_vec(&xq).expect("square module matrix");
            ax.iter()
                .zip(&x)
                .flat_map(|(l, r)| (l.clone() - r.clone()).coeffs().to_vec())
                .collect()
        })
        .collect();
    let mat = MatP::from_columns(p, dim, &columns);
    Ok(mat
        .kernel()
        .iter()
        .map(|v| {
            (0..n)
                .map(|i| {
                    field
                        .from_coeffs(&v[i * k..(i + 1) * k])
                        .expect("coordinates")
                })
                .collect()
        })
        .collect())
}

/// Picks n L-linearly independent vectors from a spanning set.
pub(crate) fn independent_columns(
    vectors: &[Vec<FieldElement>],
    n: usize,
) -> Option<Matrix<FieldElement>> {
    let mut chosen: Vec<Vec<FieldElement>> = Vec::new();
    // echelon copies for the rank test
    let mut echelon: Vec<Vec<FieldElement>> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for e in &echelon {
            let piv = e.iter().position(|x| !x.is_zero()).expect("nonzero row");
            if !r[piv].is_zero() {
                let f = &r[piv] * &e[piv].inv().expect("pivot");
                r = r.iter().zip(e).map(|(a, b)| a.clone() - &f * b).collect();
            }
        }
        if r.iter().any(|x| !x.is_zero()) {
            echelon.push(r);
            chosen.push(v.clone());
            if chosen.len() == n {
                return Matrix::from_columns(&chosen).ok();
            }
        }
    }
    None
}

/// Splitting degree of the finite module (K^n, Φ_A) over K, with the
/// Frobenius image computed from a solution matrix.
pub fn galois_order_of_specialization(
    a: &Matrix<FieldElement>,
    q: u64,
    m_max: u32,
) -> Result<GaloisReport> {
    let base = a.sample().spec().clone();
    let p = base.p();
    let e =
        log_p(q, p).ok_or_else(|| Error::InvalidInput(format!("q = {q} is not a power of {p}")))?;
    if base.k() as u64 % e != 0 {
        return Err(Error::InvalidInput(format!(
            "{base} does not contain F_{q}"
        )));
    }
    if a.det()?.is_zero() {
        return Err(Error::Singular);
    }
    let n = a.rows();
    let full = n * e as usize;
    let bound = effective_bound(&base, m_max);
    for m in 1..=bound {
        let (big, emb) = base.extension(m as usize)?;
        let am = a.map(|x| emb.apply(x));
        let sols = solution_space(&am, q)?;
        if sols.len() < full {
            continue;
        }
        let u = independent_columns(&sols, n)
            .ok_or_else(|| Error::InvalidInput("solution space does not span".into()))?;
        let rho = u.inv()?.mul(&u.frob_twist(base.order()))?;
        return Ok(GaloisReport {
            order: m,
            field: big,
            u,
            rho,
        });
    }
    Err(Error::SplittingBoundExceeded(bound))
}

/// Order of A A^(q) ... A^(q^{r-1}) where |K| = q^r: the matrix by which
/// the Frobenius of K acts, an independent route to the splitting degree.
pub fn frobenius_norm_matrix(a: &Matrix<FieldElement>, q: u64) -> Result<Matrix<FieldElement>> {
    let base = a.sample().spec();
    let r = log_p(base.order(), q)
        .ok_or_else(|| Error::InvalidInput(format!("{base} is not an extension of F_{q}")))?;
    let mut acc = Matrix::identity(a.rows(), a.sample());
    let mut tw = a.clone();
    for _ in 0..r {
        acc = acc.mul(&tw)?;
        tw = tw.frob_twist(q);
    }
    Ok(acc)
}

fn q_exponent_label(q: u64, i: usize) -> String {
    match i {
        0 => "Y".to_string(),
        _ => format!("Y^{}", q.pow(i as u32)),
    }
}

impl<T: Scalar> fmt::Display for LinearizedPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let label = q_exponent_label(self.q, i);
            if i == self.coeffs.len() - 1 {
                parts.push(label);
            } else {
                parts.push(format!("({c})*{label}"));
            }
        }
        if let Some(a) = &self.affine {
            parts.push(format!("({a})"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Parses the print format back, e.g. `Y^25 + (4*s^15)*Y^5 + (s)*Y`.
pub fn parse_linearized(text: &str, ring: &Ring, q: u64) -> Result<LinearizedPoly<RatFunc>> {
    let syntax = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };
    let mut coeffs: Vec<Option<RatFunc>> = Vec::new();
    let mut affine = None;
    let mut depth = 0i32;
    let mut pieces = Vec::new();
    let mut last = 0;
    let bytes = text.as_bytes();
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' if depth == 0 => {
                pieces.push((last, &text[last..i]));
                last = i + 1;
            }
            _ => {}
        }
    }
    pieces.push((last, &text[last..]));
    for (start, piece) in pieces {
        let body = piece.trim();
        let lead = piece.len() - piece.trim_start().len();
        let pos = start + lead;
        let (coeff, mono) = if let Some(rest) = body.strip_prefix('(') {
            let close =
                matching_paren(rest).ok_or_else(|| syntax(pos, "unbalanced parentheses"))?;
            let inner = &rest[..close];
            let value = parse_expr(inner, ring).map_err(|e| match e {
                Error::Syntax { pos: p, msg } => Error::Syntax {
                    pos: p + pos + 1,
                    msg,
                },
                other => other,
            })?;
            let tail = rest[close + 1..].trim();
            if tail.is_empty() {
                if affine.is_some() {
                    return Err(syntax(pos, "repeated constant term"));
                }
                affine = Some(value);
                continue;
            }
            let mono = tail
                .strip_prefix('*')
                .ok_or_else(|| syntax(pos, "expected `*` after coefficient"))?
                .trim();
            (value, mono)
        } else {
            (RatFunc::one(ring), body)
        };
        let exp: u64 = match mono {
            "Y" => 1,
            _ => mono
                .strip_prefix("Y^")
                .and_then(|e| e.trim().parse().ok())
                .ok_or_else(|| syntax(pos, "expected Y or Y^e"))?,
        };
        let i = log_p(exp, q).ok_or_else(|| syntax(pos, "exponent is not a power of q"))? as usize;
        if coeffs.len() <= i {
            coeffs.resize(i + 1, None);
        }
        if coeffs[i].is_some() {
            return Err(syntax(pos, "repeated monomial"));
        }
        coeffs[i] = Some(coeff);
    }
    let coeffs: Vec<RatFunc> = coeffs
        .into_iter()
        .map(|c| c.unwrap_or_else(|| RatFunc::zero(ring)))
        .collect();
    LinearizedPoly::new(q, coeffs, affine)
}

fn matching_paren(s: &str) -> Option<usize> {
    let mut depth = 1i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            _ => {}
        }
    }
    None
}
