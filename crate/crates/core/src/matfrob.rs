//! Dense matrices over a [`Scalar`] domain, with the Frobenius twist
//! A^(q), the Lang map U ↦ U (U^(q))^-1 and Frobenius conjugation
//! U^-1 A U^(q).

use std::fmt;

use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::scalar::Scalar;
use crate::symfield::{parse_expr, specialize, RatFunc, Ring};

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data: Vec<T> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| !x.same_domain(&data[0])) {
            return Err(Error::DomainMismatch);
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data,
        })
    }

    pub fn from_columns(cols: &[Vec<T>]) -> Result<Self> {
        let n = cols.first().map_or(0, Vec::len);
        let rows = (0..n)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Identity matrix with entries in the domain of `like`.
    pub fn identity(n: usize, like: &T) -> Self {
        let (zero, one) = (like.zero_like(), like.one_like());
        let data = (0..n * n)
            .map(|k| {
                if k / n == k % n {
                    one.clone()
                } else {
                    zero.clone()
                }
            })
            .collect();
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize, like: &T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![like.zero_like(); rows * cols],
        }
    }

    pub fn diagonal(entries: &[T]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n, &entries[0]);
        for (i, e) in entries.iter().enumerate() {
            m.set(i, i, e.clone());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn sample(&self) -> &T {
        &self.data[0]
    }

    pub fn map<S: Scalar>(&self, f: impl Fn(&T) -> S) -> Matrix<S> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<S: Scalar>(&self, f: impl Fn(&T) -> Result<S>) -> Result<Matrix<S>> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect::<Result<_>>()?,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    fn check_domain(&self, other: &Self) -> Result<()> {
        if self.sample().same_domain(other.sample()) {
            Ok(())
        } else {
            Err(Error::DomainMismatch)
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        self.check_domain(other)?;
        let zero = self.sample().zero_like();
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.plus(&a.times(b));
                }
                data.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.plus(b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.minus(b))
    }

    fn zip(&self, other: &Self, f: impl Fn(&T, &T) -> T) -> Result<Self> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Dimension("shape mismatch".into()));
        }
        self.check_domain(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        let col = Matrix::from_columns(&[v.to_vec()])?;
        Ok(self.mul(&col)?.data)
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("power of a non-square matrix".into()));
        }
        let mut result = Self::identity(self.rows, self.sample());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::Dimension(
                "determinant of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m = self.data.clone();
        let mut det = self.sample().one_like();
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| !m[r * n + col].is_zero()) else {
                return Ok(self.sample().zero_like());
            };
            if piv != col {
                for j in 0..n {
                    m.swap(piv * n + j, col * n + j);
                }
                det = det.negate();
            }
            let pv = m[col * n + col].clone();
            det = det.times(&pv);
            let pinv = pv.inverse().expect("nonzero pivot");
            for r in col + 1..n {
                if m[r * n + col].is_zero() {
                    continue;
                }
                let factor = m[r * n + col].times(&pinv);
                for j in col..n {
                    let v = m[col * n + j].times(&factor);
                    m[r * n + j] = m[r * n + j].minus(&v);
                }
            }
        }
        Ok(det)
    }

    /// Gauss-Jordan inverse, pivoting on the first nonzero entry.
    pub fn inv(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Dimension("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.data.clone();
        let mut b = Self::identity(n, self.sample()).data;
        for col in 0..n {
            let piv = (col..n)
                .find(|&r| !a[r * n + col].is_zero())
                .ok_or(Error::Singular)?;
            if piv != col {
                for j in 0..n {
                    a.swap(piv * n + j, col * n + j);
                    b.swap(piv * n + j, col * n + j);
                }
            }
            let pinv = a[col * n + col].inverse().expect("nonzero pivot");
            for j in 0..n {
                a[col * n + j] = a[col * n + j].times(&pinv);
                b[col * n + j] = b[col * n + j].times(&pinv);
            }
            for r in 0..n {
                if r == col || a[r * n + col].is_zero() {
                    continue;
                }
                let factor = a[r * n + col].clone();
                for j in 0..n {
                    let va = a[col * n + j].times(&factor);
                    a[r * n + j] = a[r * n + j].minus(&va);
                    let vb = b[col * n + j].times(&factor);
                    b[r * n + j] = b[r * n + j].minus(&vb);
                }
            }
        }
        Ok(Matrix {
            rows: n,
            cols: n,
            data: b,
        })
    }

    /// Entrywise q-th power A^(q).
    pub fn frob_twist(&self, q: u64) -> Self {
        self.map(|x| x.twist(q))
    }

    /// λ(U) = U (U^(q))^-1.
    pub fn lang_steinberg_image(&self, q: u64) -> Result<Self> {
        self.mul(&self.frob_twist(q).inv()?)
    }

    /// U^-1 A U^(q) for `self` = A.
    pub fn frobenius_conjugate(&self, u: &Self, q: u64) -> Result<Self> {
        u.inv()?.mul(self)?.mul(&u.frob_twist(q))
    }

    /// Multiplicative order, if at most `bound`.
    pub fn order(&self, bound: u64) -> Result<Option<u64>> {
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc.is_identity() {
                return Ok(Some(k));
            }
            acc = acc.mul(self)?;
        }
        Ok(None)
    }
}

/// Whether B = U^-1 A U^(q) holds exactly.
pub fn check_equivalence_witness<T: Scalar>(
    a: &Matrix<T>,
    b: &Matrix<T>,
    u: &Matrix<T>,
    q: u64,
) -> Result<bool> {
    if !(a.is_square() && b.is_square() && u.is_square())
        || a.rows() != b.rows()
        || a.rows() != u.rows()
    {
        return Err(Error::Dimension(
            "witness check needs equal square sizes".into(),
        ));
    }
    // U B = A U^(q) avoids an inversion but still requires U invertible
    if u.det()?.is_zero() {
        return Err(Error::Singular);
    }
    Ok(u.mul(b)? == a.mul(&u.frob_twist(q))?)
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Parses `[[a, b]; [c, d]]` with entries in the expression grammar.
pub fn parse_matrix(text: &str, ring: &Ring) -> Result<Matrix<RatFunc>> {
    let syntax = |pos: usize, msg: &str| Error::Syntax {
        pos,
        msg: msg.to_string(),
    };
    let trimmed = text.trim();
    let offset = text.len() - text.trim_start().len();
    let inner = trimmed
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| syntax(offset, "matrix must be enclosed in [ ]"))?;
    let mut rows = Vec::new();
    let mut start = offset + 1;
    for chunk in split_top(inner, ';') {
        let body = chunk.trim();
        let lead = chunk.len() - chunk.trim_start().len();
        let row_inner = body
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| syntax(start + lead, "row must be enclosed in [ ]"))?;
        let mut entry_start = start + lead + 1;
        let mut row = Vec::new();
        for entry in split_top(row_inner, ',') {
            let value = parse_expr(entry, ring).map_err(|e| match e {
                Error::Syntax { pos, msg } => Error::Syntax {
                    pos: pos + entry_start,
                    msg,
                },
                other => other,
            })?;
            row.push(value);
            entry_start += entry.len() + 1;
        }
        rows.push(row);
        start += chunk.len() + 1;
    }
    let m = Matrix::from_rows(rows)?;
    if !m.is_square() {
        return Err(Error::Dimension("matrix must be square".into()));
    }
    Ok(m)
}

/// Splits on `sep` outside parentheses and brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut depth = 0i32;
    let mut parts = Vec::new();
    let mut last = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                parts.push(&s[last..i]);
                last = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[last..]);
    parts
}

/// Specializes every entry at a point of a finite field.
pub fn specialize_matrix(
    m: &Matrix<RatFunc>,
    assignment: &std::collections::HashMap<String, FieldElement>,
) -> Result<Matrix<FieldElement>> {
    m.try_map(|x| specialize(x, assignment))
}
