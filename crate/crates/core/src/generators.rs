//! End-to-end pipelines: generic polynomials for cyclic 2-groups and for
//! SL_n, and executable reproductions of the Q_8 and C_8/F_5 examples.

use std::collections::HashMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frobmod::{
    extract_generic_polynomial, make_module, CompanionForm, Convention, DEFAULT_SEED,
};
use crate::gf::{enumerate, is_prime, make_field, FieldElement, FieldSpec};
use crate::langsteinberg::{first_nonempty_fiber, lambda_star_generators, q8_param, sln_param};
use crate::linpoly::{
    galois_order_of_specialization, parse_linearized, splitting_degree, LinearizedPoly,
};
use crate::matfrob::{specialize_matrix, Matrix};
use crate::symfield::{parse_expr, parse_poly, MPoly, RatFunc, Ring};
use crate::tori::{weil_restriction, TorusSpec};

/// Largest number of monomials allowed in an entry of A^d.
pub const TERM_BUDGET: u64 = 20_000;

/// 2-adic valuation.
pub fn v2(a: u128) -> Result<u32> {
    if a == 0 {
        return Err(Error::InvalidInput("v2 needs a positive integer".into()));
    }
    Ok(a.trailing_zeros())
}

/// v2(p^e - 1), computed modulo 2^128 so large powers do not overflow.
pub fn v2_power_minus_one(p: u64, e: u32) -> Result<u32> {
    v2((p as u128).wrapping_pow(e).wrapping_sub(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cyclic2Case {
    /// p ≡ 1 mod 2^m.
    Kummer,
    /// p ≡ -1 mod 2^m.
    MinusOne,
    /// Otherwise, through Res_{F_{p^n}/F_p} G_m with d = (p^n - 1) / 2^m.
    Torus { n: u32, d: u128 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cyclic2Plan {
    pub p: u64,
    pub m: u32,
    pub case: Cyclic2Case,
}

impl fmt::Display for Cyclic2Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.case {
            Cyclic2Case::Kummer => write!(f, "kummer (p = {} ≡ 1 mod 2^{})", self.p, self.m),
            Cyclic2Case::MinusOne => write!(f, "minus-one (p = {} ≡ -1 mod 2^{})", self.p, self.m),
            Cyclic2Case::Torus { n, d } => write!(f, "torus (n = {n}, d = {d})"),
        }
    }
}

/// Multiplicative order of p modulo 2^m.
pub fn order_mod_2m(p: u64, m: u32) -> u32 {
    let modulus = 1u128 << m;
    let base = p as u128 % modulus;
    let mut acc = base;
    let mut n = 1;
    while acc % modulus != 1 % modulus {
        acc = acc * base % modulus;
        n += 1;
    }
    n
}

pub fn cyclic2_plan(p: u64, m: u32) -> Result<Cyclic2Plan> {
    if p == 2 || !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if m == 0 || m > 64 {
        return Err(Error::InvalidInput(format!("m = {m} out of range")));
    }
    let modulus = 1u128 << m;
    let r = p as u128 % modulus;
    let case = if r == 1 % modulus {
        Cyclic2Case::Kummer
    } else if r == modulus - 1 {
        Cyclic2Case::MinusOne
    } else {
        let n = order_mod_2m(p, m);
        let pn = (p as u128)
            .checked_pow(n)
            .ok_or_else(|| Error::InvalidInput(format!("{p}^{n} overflows")))?;
        Cyclic2Case::Torus {
            n,
            d: (pn - 1) / modulus,
        }
    };
    Ok(Cyclic2Plan { p, m, case })
}

/// Output of the torus pipeline together with every choice it made.
#[derive(Clone, Debug)]
pub struct TorusPipeline {
    pub plan: Cyclic2Plan,
    pub torus: TorusSpec,
    /// A^d over F_p(t_1, ..., t_n).
    pub module_matrix: Matrix<RatFunc>,
    pub form: CompanionForm<RatFunc>,
    pub poly: LinearizedPoly<RatFunc>,
    /// Largest total degree among the entries of A^d.
    pub degree: u32,
}

#[derive(Clone, Debug)]
pub enum Cyclic2Poly {
    /// Y^{2^m} - t.
    Kummer {
        text: String,
    },
    Torus(Box<TorusPipeline>),
}

impl fmt::Display for Cyclic2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cyclic2Poly::Kummer { text } => write!(f, "{text}"),
            Cyclic2Poly::Torus(t) => write!(f, "{}", t.poly),
        }
    }
}

fn binomial_saturating(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return u128::MAX;
        }
    }
    acc
}

/// The torus setup the (p, m) pipeline uses: x^2 - 2 and (s, t) for
/// (5, 3), default modulus and t1..tn otherwise.
pub fn cyclic2_torus(p: u64, n: usize) -> Result<TorusSpec> {
    if (p, n) == (5, 2) {
        weil_restriction(5, 2, Some(&[3, 0, 1]), &["s", "t"])
    } else if n == 2 {
        weil_restriction(p, n, None, &["s", "t"])
    } else {
        let vars: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
        weil_restriction(p, n, None, &vars)
    }
}

pub fn cyclic2_generic_poly(p: u64, m: u32) -> Result<Cyclic2Poly> {
    let plan = cyclic2_plan(p, m)?;
    match plan.case {
        Cyclic2Case::Kummer => Ok(Cyclic2Poly::Kummer {
            text: format!("Y^{} - t", 1u128 << m),
        }),
        Cyclic2Case::MinusOne => Err(Error::ExistenceOnly(format!(
            "p = {p} ≡ -1 mod 2^{m}: a two-parameter generic polynomial exists by invariant theory \
             (faithful 2-dimensional representation), no explicit construction"
        ))),
        Cyclic2Case::Torus { n, d } => {
            // entries of A^d are homogeneous of degree d in n variables
            let terms = binomial_saturating(d + n as u128 - 1, n as u128 - 1);
            if terms > TERM_BUDGET as u128 {
                return Err(Error::BudgetExceeded {
                    what: format!("A^{d} with {n} parameters"),
                    budget: TERM_BUDGET,
                });
            }
            let torus = cyclic2_torus(p, n as usize)?;
            let a = torus.general_matrix.pow(d as u64)?;
            let degree = a
                .entries()
                .iter()
                .map(|e| e.num().total_degree())
                .max()
                .unwrap_or(0);
            let module = make_module(p, a.clone())?;
            let form = module.cyclic_basis(DEFAULT_SEED)?;
            let poly = form.extract(Convention::Transpose)?;
            Ok(Cyclic2Poly::Torus(Box::new(TorusPipeline {
                plan,
                torus,
                module_matrix: a,
                form,
                poly,
                degree,
            })))
        }
    }
}

/// Galois orders of all specializations ξ ∈ F_p^n of a torus pipeline.
#[derive(Clone, Debug)]
pub struct SpecializationSweep {
    /// (ξ as integers, Galois order) for every nonsingular point.
    pub orders: Vec<(Vec<u64>, u32)>,
    pub singular: usize,
}

impl SpecializationSweep {
    pub fn max_order(&self) -> u32 {
        self.orders.iter().map(|(_, o)| *o).max().unwrap_or(0)
    }
}

pub fn specialization_sweep(pipeline: &TorusPipeline, m_max: u32) -> Result<SpecializationSweep> {
    let p = pipeline.plan.p;
    let fp = make_field(p, 1, None)?;
    let vars = pipeline.torus.ring.vars().to_vec();
    let n = vars.len() as u32;
    let mut out = SpecializationSweep {
        orders: Vec::new(),
        singular: 0,
    };
    for idx in 0..p.pow(n) {
        let xi: Vec<u64> = (0..n).map(|i| idx / p.pow(i) % p).collect();
        let assignment: HashMap<String, FieldElement> = vars
            .iter()
            .cloned()
            .zip(xi.iter().map(|&v| fp.from_int(v as i64)))
            .collect();
        let a = specialize_matrix(&pipeline.module_matrix, &assignment)?;
        if a.det()?.is_zero() {
            out.singular += 1;
            continue;
        }
        let rep = galois_order_of_specialization(&a, p, m_max)?;
        out.orders.push((xi, rep.order));
    }
    Ok(out)
}

/// The three printed degree-8 factors of the C_8/F_5 polynomial, in y.
pub const C8F5_FACTORS: [&str; 3] = [
    "y^8 + (3*s^3 + 4*s^2*t + 4*s*t^2 + 2*t^3)*y^4 + s^6 + s^5*t + 4*s^4*t^2 + 4*s^3*t^3 + 4*s^2*t^4 + 3*s*t^5 + 3*t^6",
    "y^8 + (3*s^3 + s^2*t + 4*s*t^2 + 3*t^3)*y^4 + s^6 + 4*s^5*t + 4*s^4*t^2 + s^3*t^3 + 4*s^2*t^4 + 2*s*t^5 + 3*t^6",
    "y^8 + (4*s^3 + 2*s*t^2)*y^4 + s^2*t^4 + 3*t^6",
];

/// The printed C_8/F_5 polynomial.
pub const C8F5_POLY: &str = "Y^25 + (4*s^15 + 4*s^11*t^4 + 3*s^9*t^6 + 3*s^7*t^8 + 2*s^5*t^10 + 3*s^3*t^12 + 4*s*t^14)*Y^5 \
     + (s^14*t^4 + 2*s^10*t^8 + 4*s^8*t^10 + 4*s^6*t^12 + 3*s^4*t^14 + 4*s^2*t^16 + 2*t^18)*Y";

/// A polynomial-coefficient linearized polynomial as an ordinary polynomial
/// in the extra variable `y` of `target`.
pub fn as_polynomial_in_y(f: &LinearizedPoly<RatFunc>, target: &Ring) -> Result<MPoly> {
    let y = MPoly::var(target, "y")?;
    let mut acc = MPoly::zero(target);
    for (i, c) in f.coeffs().iter().enumerate() {
        if !c.is_polynomial() {
            return Err(Error::InvalidInput(
                "coefficient is not a polynomial".into(),
            ));
        }
        let c = c.num().into_ring(target)?;
        acc = acc.add(&c.mul(&y.pow(f.q().pow(i as u32))));
    }
    if let Some(a) = f.affine() {
        acc = acc.add(&a.num().into_ring(target)?);
    }
    Ok(acc)
}

/// Whether y · Π factors equals f over F_5[s, t, y].
pub fn check_c8f5_factorization(f: &LinearizedPoly<RatFunc>, factors: &[&str]) -> Result<bool> {
    let ring = Ring::new(5, &["s", "t", "y"])?;
    let mut product = MPoly::var(&ring, "y")?;
    for text in factors {
        product = product.mul(&parse_poly(text, &ring)?);
    }
    Ok(product == as_polynomial_in_y(f, &ring)?)
}

/// Runs the (5, 3) pipeline and checks it against the printed factors.
pub fn verify_c8f5_factorization() -> Result<bool> {
    let Cyclic2Poly::Torus(t) = cyclic2_generic_poly(5, 3)? else {
        unreachable!("(5, 3) is a torus case")
    };
    check_c8f5_factorization(&t.poly, &C8F5_FACTORS)
}

/// f(Y) = Y^{q^n} + Σ t_i s^{q^{n-1} - q^{i-1}} Y^{q^i} + (-1)^n s^{q^{n-1} - 1} Y.
pub fn sln_closed_form(q: u64, n: usize) -> Result<LinearizedPoly<RatFunc>> {
    let param = sln_param(q, n)?;
    let ring = &param.ring;
    let s = RatFunc::var(ring, "s")?;
    let top = q.pow(n as u32 - 1);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    let mut coeffs = vec![s.pow(top - 1).mul(&RatFunc::constant(ring, sign))];
    for i in 1..n {
        let ti = RatFunc::var(ring, &format!("t{i}"))?;
        coeffs.push(ti.mul(&s.pow(top - q.pow(i as u32 - 1))));
    }
    coeffs.push(RatFunc::one(ring));
    LinearizedPoly::new(q, coeffs, None)
}

/// The polynomial obtained by eliminating along the companion-shaped SL_n
/// matrix: x_2 = s^-1 x_1^q, x_{k+1} = x_k^q, and the last row.
pub fn sln_elimination_chain(q: u64, n: usize) -> Result<LinearizedPoly<RatFunc>> {
    let param = sln_param(q, n)?;
    extract_generic_polynomial(&param.matrix, q, Convention::Transpose)
}

/// The SL_n generic polynomial, computed both ways.
pub fn sln_generic_poly(q: u64, n: usize) -> Result<LinearizedPoly<RatFunc>> {
    let closed = sln_closed_form(q, n)?;
    let chain = sln_elimination_chain(q, n)?;
    if closed != chain {
        return Err(Error::RouteMismatch(format!(
            "closed form {closed} vs elimination {chain}"
        )));
    }
    Ok(closed)
}

/// The printed λ triple for Q_8, with the printed minus signs.
pub const Q8_PRINTED_LAMBDA: [&str; 3] = [
    "t1^2 - t1",
    "t2^2 - t2",
    "t3^2 - t3 - t1^3 - t2*t1^2 - t2^3",
];

/// The printed Q_8 generic polynomial in a, b, c (for t1, t2, t3).
pub const Q8_PRINTED_F: &str = "Y^8 + (1 + a^2 + a*b + b^2)*Y^4 + (a^2 + a*b + a^2*b + b^2 + a*b^2)*Y^2 \
     + (a^2*b + a*b^2)*Y + (a^8 + a^5*b + a^4*b^2 + a^3*b^3 + a^4*b^4 + a*b^5 + b^8 + a^2*b*c + a*b^2*c \
     + a^2*c^2 + a*b*c^2 + b^2*c^2 + c^4)";

pub fn q8_printed_f() -> Result<LinearizedPoly<RatFunc>> {
    parse_linearized(Q8_PRINTED_F, &Ring::new(2, &["a", "b", "c"])?, 2)
}

/// One specialization (a, b, c) of the Q_8 example.
#[derive(Clone, Debug)]
pub struct Q8PointCheck {
    pub field: FieldSpec,
    pub coords: Vec<FieldElement>,
    /// Splitting degree of A X^(2) = X over F_{2^r}.
    pub system_degree: u32,
    /// Splitting degree of the printed f at the point.
    pub f_degree: Result<u32>,
    /// Extension degree of the first nonempty brute-force fiber.
    pub fiber_degree: Option<u32>,
    pub fiber_size: usize,
    /// U^-1 U^(|K|) lies in Q_8 for every U in the fiber.
    pub rho_in_q8: bool,
}

impl Q8PointCheck {
    pub fn ok(&self) -> bool {
        8 % self.system_degree == 0
            && self.f_degree.as_ref().ok() == Some(&self.system_degree)
            && self.fiber_degree == Some(self.system_degree)
            && self.fiber_size == 8
            && self.rho_in_q8
    }
}

#[derive(Clone, Debug)]
pub struct Q8Report {
    pub lambda_computed: Vec<RatFunc>,
    pub lambda_printed: Vec<RatFunc>,
    pub lambda_matches: bool,
    /// Whether the printed triple equals the coordinates of A(t) A(t)^(2).
    pub printed_is_product_with_twist: bool,
    pub f_printed: LinearizedPoly<RatFunc>,
    pub points: Vec<Q8PointCheck>,
}

impl Q8Report {
    pub fn points_ok(&self) -> bool {
        self.points.iter().all(Q8PointCheck::ok)
    }

    pub fn failures(&self) -> Vec<&Q8PointCheck> {
        self.points.iter().filter(|c| !c.ok()).collect()
    }
}

/// Valid Q_8 sample points: all of them over F_4, then `extra` seeded
/// points each over F_8 and F_16.
pub fn q8_sample_points(extra: usize) -> Result<Vec<Vec<FieldElement>>> {
    let param = q8_param();
    let mut out = Vec::new();
    let f4 = make_field(2, 2, None)?;
    let elems = enumerate(&f4)?;
    for a in &elems {
        for b in &elems {
            for c in &elems {
                let pt = vec![a.clone(), b.clone(), c.clone()];
                if param.is_valid_point(&pt) {
                    out.push(pt);
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    for r in [3, 4] {
        let f = make_field(2, r, None)?;
        let mut taken = 0;
        while taken < extra {
            let pt: Vec<FieldElement> = (0..3).map(|_| f.random(&mut rng)).collect();
            if param.is_valid_point(&pt) {
                out.push(pt);
                taken += 1;
            }
        }
    }
    Ok(out)
}

pub fn q8_check_point(
    coords: &[FieldElement],
    f: &LinearizedPoly<RatFunc>,
) -> Result<Q8PointCheck> {
    let param = q8_param();
    let field = coords[0].spec().clone();
    let a = param.matrix_at(coords, &field)?;
    let system_degree = galois_order_of_specialization(&a, 2, 8)?.order;
    let assignment: HashMap<String, FieldElement> = ["a", "b", "c"]
        .iter()
        .map(|v| v.to_string())
        .zip(coords.iter().cloned())
        .collect();
    let f_degree = f
        .specialize(&assignment)
        .and_then(|fs| splitting_degree(&fs, 3, 8));
    let fiber = first_nonempty_fiber(&a, &param, 2, 8)?;
    let (fiber_degree, fiber_size, rho_in_q8) = match fiber {
        None => (None, 0, false),
        Some((m, _, fiber)) => {
            let k = field.order();
            let mut ok = true;
            for u in &fiber {
                let rho = u.inv()?.mul(&u.frob_twist(k))?;
                ok &= rho.frob_twist(2) == rho && param.contains(&rho)?;
            }
            (Some(m), fiber.len(), ok)
        }
    };
    Ok(Q8PointCheck {
        field,
        coords: coords.to_vec(),
        system_degree,
        f_degree,
        fiber_degree,
        fiber_size,
        rho_in_q8,
    })
}

pub fn q8_reproduction(extra: usize) -> Result<Q8Report> {
    let param = q8_param();
    let lambda_computed = lambda_star_generators(&param, 2)?;
    let lambda_printed = Q8_PRINTED_LAMBDA
        .iter()
        .map(|e| parse_expr(e, &param.ring))
        .collect::<Result<Vec<_>>>()?;
    let lambda_matches = lambda_computed == lambda_printed;
    let with_twist = param.matrix.mul(&param.matrix.frob_twist(2))?;
    let printed_is_product_with_twist = [(0, 1), (0, 2), (0, 3)]
        .iter()
        .zip(&lambda_printed)
        .all(|(&(i, j), e)| with_twist.get(i, j) == e);
    let f_printed = q8_printed_f()?;
    let points = q8_sample_points(extra)?
        .iter()
        .map(|pt| q8_check_point(pt, &f_printed))
        .collect::<Result<Vec<_>>>()?;
    Ok(Q8Report {
        lambda_computed,
        lambda_printed,
        lambda_matches,
        printed_is_product_with_twist,
        f_printed,
        points,
    })
}
