use std::collections::HashMap;
use std::fmt;

use super::{gcd, MPoly, Ring};
use crate::error::{Error, Result};
use crate::gf::FieldElement;
use crate::scalar::Scalar;

/// Canonical quotient num/den of polynomials.
#[derive(Clone, PartialEq, Eq)]
pub struct RatFunc {
    num: MPoly,
    den: MPoly,
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl From<MPoly> for RatFunc {
    fn from(num: MPoly) -> Self {
        let den = MPoly::one(num.ring());
        RatFunc { num, den }
    }
}

impl RatFunc {
    pub fn new(num: MPoly, den: MPoly) -> Result<Self> {
        if num.ring() != den.ring() {
            return Err(Error::DomainMismatch);
        }
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: MPoly, den: MPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.ring());
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g).unwrap(), den.div_exact(&g).unwrap())
        };
        Self::normalized(num, den)
    }

    /// Makes an already coprime pair canonical.
    fn normalized(num: MPoly, den: MPoly) -> Self {
        let (den, s) = den.monic();
        RatFunc {
            num: num.scale(s),
            den,
        }
    }

    pub fn zero(ring: &Ring) -> Self {
        MPoly::zero(ring).into()
    }

    pub fn one(ring: &Ring) -> Self {
        MPoly::one(ring).into()
    }

    pub fn constant(ring: &Ring, c: i64) -> Self {
        MPoly::constant(ring, c).into()
    }

    pub fn var(ring: &Ring, name: &str) -> Result<Self> {
        Ok(MPoly::var(ring, name)?.into())
    }

    pub fn ring(&self) -> &Ring {
        self.num.ring()
    }

    pub fn num(&self) -> &MPoly {
        &self.num
    }

    pub fn den(&self) -> &MPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<u64> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true)
    }

    fn combine(&self, other: &Self, negate: bool) -> Self {
        let rhs_num = if negate {
            other.num.neg()
        } else {
            other.num.clone()
        };
        if self.den == other.den {
            return Self::canonical(self.num.add(&rhs_num), self.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).unwrap();
        let d2 = other.den.div_exact(&g).unwrap();
        let num = self.num.mul(&d2).add(&rhs_num.mul(&d1));
        Self::canonical(num, self.den.mul(&d2))
    }

    pub fn neg(&self) -> Self {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ring());
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let a = self.num.div_exact(&g1).unwrap();
        let d = other.den.div_exact(&g1).unwrap();
        let c = other.num.div_exact(&g2).unwrap();
        let b = self.den.div_exact(&g2).unwrap();
        Self::normalized(a.mul(&c), b.mul(&d))
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::normalized(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        let inv = other.inv().ok_or(Error::ZeroDenominator)?;
        Ok(self.mul(&inv))
    }

    pub fn pow(&self, e: u64) -> Self {
        // coprime stays coprime and the power of a monic leading term is monic
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Evaluates at points of any field of the same characteristic.
    pub fn eval_at<T: Scalar>(&self, values: &[T], lift: &dyn Fn(u64) -> T) -> Result<T> {
        if self.den.is_one() {
            return Ok(self.num.eval_with(values, lift));
        }
        let d = self.den.eval_with(values, lift);
        let inv = d.inverse().ok_or(Error::DenominatorVanishes)?;
        Ok(self.num.eval_with(values, lift).times(&inv))
    }

    /// Substitutes rational functions (all in one ring) for the variables.
    pub fn substitute(&self, values: &[RatFunc]) -> Result<RatFunc> {
        let target = values
            .first()
            .ok_or_else(|| Error::Dimension("substitution needs one value per variable".into()))?;
        if values.len() != self.ring().nvars() {
            return Err(Error::Dimension(
                "substitution needs one value per variable".into(),
            ));
        }
        let ring = target.ring().clone();
        self.eval_at(values, &|c| RatFunc::constant(&ring, c as i64))
            .map_err(|e| match e {
                Error::DenominatorVanishes => Error::ZeroDenominator,
                other => other,
            })
    }

    pub fn into_ring(&self, target: &Ring) -> Result<RatFunc> {
        // the term order, hence the leading coefficient, may change
        Ok(Self::normalized(
            self.num.into_ring(target)?,
            self.den.into_ring(target)?,
        ))
    }
}

/// Evaluates at a named assignment into a finite field (possibly an
/// extension of the coefficient field).
pub fn specialize(f: &RatFunc, assignment: &HashMap<String, FieldElement>) -> Result<FieldElement> {
    let ring = f.ring();
    let mut target = None;
    let mut values = Vec::with_capacity(ring.nvars());
    let used_num = f.num.support();
    let used_den = f.den.support();
    for (i, v) in ring.vars().iter().enumerate() {
        match assignment.get(v) {
            Some(x) => {
                values.push(Some(x.clone()));
                if target.is_none() {
                    target = Some(x.spec().clone());
                }
            }
            None if used_num[i] || used_den[i] => return Err(Error::MissingAssignment(v.clone())),
            None => values.push(None),
        }
    }
    let spec = match target {
        Some(s) => s,
        None => ring.field().clone(),
    };
    if spec.p() != ring.p() {
        return Err(Error::DomainMismatch);
    }
    let mut vals = Vec::with_capacity(values.len());
    for v in values {
        let x = v.unwrap_or_else(|| spec.zero());
        if x.spec() != &spec {
            return Err(Error::DomainMismatch);
        }
        vals.push(x);
    }
    f.eval_at(&vals, &|c| spec.from_int(c as i64))
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
