//! Frobenius modules (K^n, Φ_A) with Φ(X) = A X^(q): cyclic bases,
//! companion forms and extraction of a linearized polynomial.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gf::{log_p, FieldElement};
use crate::linpoly::LinearizedPoly;
use crate::matfrob::{specialize_matrix, Matrix};
use crate::scalar::Scalar;
use crate::symfield::RatFunc;

pub use crate::matfrob::check_equivalence_witness;

/// Seeded pseudorandom candidates tried after the standard basis.
pub const CYCLIC_RANDOM_BUDGET: usize = 64;

/// Fixed default seed for every randomized search.
pub const DEFAULT_SEED: u64 = 0x5eed_f00d;

#[derive(Clone, Debug, PartialEq)]
pub struct FrobModule<T: Scalar> {
    q: u64,
    a: Matrix<T>,
}

pub fn make_module<T: Scalar>(q: u64, a: Matrix<T>) -> Result<FrobModule<T>> {
    if !a.is_square() {
        return Err(Error::Dimension("module matrix must be square".into()));
    }
    if log_p(q, a.sample().characteristic()).is_none() {
        return Err(Error::InvalidInput(format!(
            "q = {q} is not a power of the characteristic {}",
            a.sample().characteristic()
        )));
    }
    if a.det()?.is_zero() {
        return Err(Error::Singular);
    }
    Ok(FrobModule { q, a })
}

impl<T: Scalar> FrobModule<T> {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.a
    }

    /// Φ(v) = A v^(q).
    pub fn apply_phi(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.n() {
            return Err(Error::Dimension("vector length".into()));
        }
        let vq: Vec<T> = v.iter().map(|x| x.twist(self.q)).collect();
        self.a.mul_vec(&vq)
    }

    /// N = [v, Φv, ..., Φ^{n-1}v].
    pub fn krylov(&self, v: &[T]) -> Result<Matrix<T>> {
        let mut cols = vec![v.to_vec()];
        for _ in 1..self.n() {
            let next = self.apply_phi(cols.last().expect("nonempty"))?;
            cols.push(next);
        }
        Matrix::from_columns(&cols)
    }

    /// Searches e_1, ..., e_n and then seeded pseudorandom vectors for a
    /// cyclic vector and returns the companion form in that basis.
    pub fn cyclic_basis(&self, seed: u64) -> Result<CompanionForm<T>> {
        let n = self.n();
        let like = self.a.sample();
        let mut candidates: Vec<Vec<T>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            like.one_like()
                        } else {
                            like.zero_like()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..CYCLIC_RANDOM_BUDGET {
            candidates.push((0..n).map(|_| like.random_like(&mut rng)).collect());
        }
        for v in candidates {
            let basis = self.krylov(&v)?;
            if basis.det()?.is_zero() {
                continue;
            }
            return self.companion_form(v, basis, seed);
        }
        Err(Error::NoCyclicVector {
            budget: n + CYCLIC_RANDOM_BUDGET,
            seed,
        })
    }

    /// Companion form for an explicit cyclic vector.
    pub fn cyclic_basis_from(&self, v: &[T]) -> Result<CompanionForm<T>> {
        let basis = self.krylov(v)?;
        if basis.det()?.is_zero() {
            return Err(Error::Singular);
        }
        self.companion_form(v.to_vec(), basis, DEFAULT_SEED)
    }

    fn companion_form(&self, v: Vec<T>, basis: Matrix<T>, seed: u64) -> Result<CompanionForm<T>> {
        let b = self.a.frobenius_conjugate(&basis, self.q)?;
        let cf = CompanionForm {
            q: self.q,
            b,
            basis,
            cyclic_vector: v,
            seed,
        };
        cf.check_shape()?;
        Ok(cf)
    }
}

impl FrobModule<RatFunc> {
    /// The finite module A(ξ).
    pub fn specialize(
        &self,
        xi: &HashMap<String, FieldElement>,
    ) -> Result<FrobModule<FieldElement>> {
        let a = specialize_matrix(&self.a, xi)?;
        make_module(self.q, a)
    }
}

/// B = N^-1 A N^(q) in companion shape.
#[derive(Clone, Debug, PartialEq)]
pub struct CompanionForm<T: Scalar> {
    pub q: u64,
    pub b: Matrix<T>,
    /// Change of basis N.
    pub basis: Matrix<T>,
    pub cyclic_vector: Vec<T>,
    pub seed: u64,
}

/// How the linearized polynomial is read off a companion matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Convention {
    /// Eliminate along B^T X = X^(q).
    #[default]
    Transpose,
    /// Y^{q^n} - Σ a_j Y^{q^j} with a_j the last column of B.
    LastColumn,
}

impl<T: Scalar> CompanionForm<T> {
    pub fn n(&self) -> usize {
        self.b.rows()
    }

    /// Last column a_0, ..., a_{n-1}.
    pub fn last_column(&self) -> Vec<T> {
        self.b.column(self.n() - 1)
    }

    /// Zero outside the subdiagonal and the last column, with a nonzero
    /// subdiagonal.
    pub fn check_shape(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            for j in 0..n - 1 {
                let x = self.b.get(i, j);
                let ok = if i == j + 1 {
                    !x.is_zero()
                } else {
                    x.is_zero()
                };
                if !ok {
                    return Err(Error::NotCompanion);
                }
            }
        }
        Ok(())
    }

    pub fn extract(&self, convention: Convention) -> Result<LinearizedPoly<T>> {
        extract_generic_polynomial(&self.b, self.q, convention)
    }
}

/// Linearized polynomial of a companion-shaped matrix.
///
/// Transpose convention: with subdiagonal entries c_k, the system
/// B^T X = X^(q) gives x_{k+1} = x_k^q / c_k, so x_k = coef_k Y^{q^k}
/// with coef_0 = 1, and the last row yields
/// Y^{q^n} = Σ_j b_j coef_j / coef_{n-1}^q · Y^{q^j}.
pub fn extract_generic_polynomial<T: Scalar>(
    b: &Matrix<T>,
    q: u64,
    convention: Convention,
) -> Result<LinearizedPoly<T>> {
    let n = b.rows();
    let like = b.sample();
    let shape = CompanionForm {
        q,
        b: b.clone(),
        basis: Matrix::identity(n, like),
        cyclic_vector: Vec::new(),
        seed: 0,
    };
    shape.check_shape()?;
    let last = b.column(n - 1);
    let mut coeffs: Vec<T> = match convention {
        Convention::LastColumn => last.iter().map(Scalar::negate).collect(),
        Convention::Transpose => {
            let mut chain = vec![like.one_like()];
            for k in 0..n - 1 {
                let c = b.get(k + 1, k);
                let next = chain[k].twist(q).divide(c).ok_or(Error::NotCompanion)?;
                chain.push(next);
            }
            let top = chain[n - 1].twist(q);
            let top_inv = top.inverse().ok_or(Error::NotCompanion)?;
            last.iter()
                .zip(&chain)
                .map(|(bj, cj)| bj.times(cj).times(&top_inv).negate())
                .collect()
        }
    };
    coeffs.push(like.one_like());
    LinearizedPoly::new(q, coeffs, None)
}

/// Seeded search for Y (drawn by `sample`) with g(Y^-1 A Y^(q)) ≠ 0;
/// returns the first witness and the conjugated matrix.
pub fn equivalence_search<T: Scalar>(
    a: &Matrix<T>,
    q: u64,
    mut sample: impl FnMut(&mut ChaCha8Rng) -> Matrix<T>,
    nonvanishing: impl Fn(&Matrix<T>) -> bool,
    budget: usize,
    seed: u64,
) -> Result<(Matrix<T>, Matrix<T>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..budget {
        let y = sample(&mut rng);
        if y.det()?.is_zero() {
            continue;
        }
        let b = a.frobenius_conjugate(&y, q)?;
        if nonvanishing(&b) {
            return Ok((y, b));
        }
    }
    Err(Error::NoWitness(format!(
        "no conjugate with nonvanishing condition among {budget} candidates (seed {seed})"
    )))
}
