//! The torus Res_{F_{p^n}/F_p} G_m through the regular representation
//! z ↦ M_z in the power basis 1, α, ..., α^{n-1}.

use crate::error::{Error, Result};
use crate::gf::{
    enumerate, make_field, prime_factors, FieldElement, FieldSpec, ENUMERATION_BUDGET,
};
use crate::matfrob::Matrix;
use crate::symfield::{MPoly, RatFunc, Ring};

#[derive(Clone, Debug)]
pub struct TorusSpec {
    pub p: u64,
    pub n: usize,
    /// F_{p^n}.
    pub field: FieldSpec,
    pub ring: Ring,
    /// Entry (r, j) is the linear form Σ_i x_i · [α^{i+j}]_r.
    pub general_matrix: Matrix<RatFunc>,
    /// structure[i][j][r] = r-th coordinate of α^{i+j}.
    structure: Vec<Vec<Vec<u64>>>,
}

/// Default coordinate names x1, ..., xn.
pub fn default_vars(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

pub fn weil_restriction<S: AsRef<str>>(
    p: u64,
    n: usize,
    modulus: Option<&[u64]>,
    vars: &[S],
) -> Result<TorusSpec> {
    if vars.len() != n {
        return Err(Error::Dimension(format!(
            "{} coordinate names for n = {n}",
            vars.len()
        )));
    }
    let field = make_field(p, n, modulus)?;
    let ring = Ring::new(p, vars)?;
    let basis = field.basis();
    let structure: Vec<Vec<Vec<u64>>> = basis
        .iter()
        .map(|bi| basis.iter().map(|bj| (bi * bj).coeffs().to_vec()).collect())
        .collect();
    let mut rows = vec![vec![RatFunc::zero(&ring); n]; n];
    for (r, row) in rows.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut form = MPoly::zero(&ring);
            for (i, v) in ring.vars().iter().enumerate() {
                let c = structure[i][j][r];
                if c != 0 {
                    form = form.add(&MPoly::var(&ring, v)?.scale(c));
                }
            }
            *entry = form.into();
        }
    }
    let general_matrix = Matrix::from_rows(rows)?;
    Ok(TorusSpec {
        p,
        n,
        field,
        ring,
        general_matrix,
        structure,
    })
}

impl TorusSpec {
    /// Coordinates of z in the power basis.
    pub fn coordinates(&self, z: &FieldElement) -> Vec<u64> {
        z.coeffs().to_vec()
    }

    /// The general matrix evaluated at coordinates in any field of
    /// characteristic p.
    pub fn matrix_at(&self, x: &[FieldElement]) -> Result<Matrix<FieldElement>> {
        if x.len() != self.n {
            return Err(Error::Dimension("coordinate count".into()));
        }
        let spec = x[0].spec();
        let mut rows = vec![vec![spec.zero(); self.n]; self.n];
        for (r, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut acc = spec.zero();
                for (i, xi) in x.iter().enumerate() {
                    let c = self.structure[i][j][r];
                    if c != 0 {
                        acc = acc + xi.scale(c);
                    }
                }
                *entry = acc;
            }
        }
        Matrix::from_rows(rows)
    }

    /// M_z over F_p.
    pub fn regular_rep(&self, z: &FieldElement) -> Result<Matrix<FieldElement>> {
        if z.spec() != &self.field {
            return Err(Error::DomainMismatch);
        }
        let fp = self.field.prime_field();
        let x: Vec<FieldElement> = z.coeffs().iter().map(|&c| fp.from_int(c as i64)).collect();
        self.matrix_at(&x)
    }

    /// Whether `m` has the shape of the general matrix (read off its first
    /// column) and is invertible.
    pub fn contains(&self, m: &Matrix<FieldElement>) -> Result<bool> {
        if m.rows() != self.n || !m.is_square() {
            return Ok(false);
        }
        let x = m.column(0);
        Ok(self.matrix_at(&x)? == *m && !m.det()?.is_zero())
    }

    /// All points of T over `over` as (coordinates, matrix) pairs.
    pub fn torus_points(
        &self,
        over: &FieldSpec,
    ) -> Result<Vec<(Vec<FieldElement>, Matrix<FieldElement>)>> {
        if over.p() != self.p {
            return Err(Error::DomainMismatch);
        }
        let size = over
            .order()
            .checked_pow(self.n as u32)
            .filter(|&s| s <= ENUMERATION_BUDGET)
            .ok_or_else(|| Error::BudgetExceeded {
                what: format!("torus points over {over}"),
                budget: ENUMERATION_BUDGET,
            })?;
        let elems = enumerate(over)?;
        let q = over.order();
        let mut out = Vec::new();
        for idx in 0..size {
            let mut rest = idx;
            let x: Vec<FieldElement> = (0..self.n)
                .map(|_| {
                    let e = elems[(rest % q) as usize].clone();
                    rest /= q;
                    e
                })
                .collect();
            let m = self.matrix_at(&x)?;
            if !m.det()?.is_zero() {
                out.push((x, m));
            }
        }
        Ok(out)
    }

    /// |T(F_p)| and a generator certifying cyclicity, if one exists.
    pub fn order_and_cyclicity(&self) -> Result<(u64, Option<Matrix<FieldElement>>)> {
        let fp = self.field.prime_field();
        let points = self.torus_points(&fp)?;
        let order = points.len() as u64;
        let factors = prime_factors(order);
        let generator = points.into_iter().map(|(_, m)| m).find(|m| {
            factors
                .iter()
                .all(|&l| !m.pow(order / l).expect("square").is_identity())
        });
        Ok((order, generator))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g_m_is_one_by_one() {
        let t = weil_restriction(7, 1, None, &["x1"]).unwrap();
        assert_eq!(t.general_matrix.to_string(), "[[x1]]");
    }
}
