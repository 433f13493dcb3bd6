//! The Lang-Steinberg map λ(X) = X (X^(q))^-1 on parametrized groups:
//! symbolic images, λ* generators and brute-force fibers over finite fields.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gf::{
    enumerate, log_p, make_field, prime_factors, FieldElement, FieldSpec, ENUMERATION_BUDGET,
};
use crate::linpoly::galois_order_of_specialization;
use crate::matfrob::Matrix;
use crate::symfield::{MPoly, RatFunc, Ring};
use crate::tori::TorusSpec;

/// Candidate evaluations allowed in a single fiber search.
pub const FIBER_BUDGET: u64 = 4_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Membership {
    /// Points are exactly the matrices `matrix(t)` with det != 0, and the
    /// coordinates t_i can be read off the listed entries.
    Linear { coordinates: Vec<(usize, usize)> },
    /// det = 1; the parametrization is a rational map into the group, not
    /// a coordinate system.
    SpecialLinear,
}

#[derive(Clone, Debug)]
pub struct GroupParam {
    pub name: String,
    pub ring: Ring,
    pub matrix: Matrix<RatFunc>,
    pub membership: Membership,
    /// Specializations must avoid the zeros of this polynomial.
    pub validity: Option<MPoly>,
}

impl GroupParam {
    pub fn d(&self) -> usize {
        self.ring.nvars()
    }

    pub fn vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn n(&self) -> usize {
        self.matrix.rows()
    }

    pub fn p(&self) -> u64 {
        self.ring.p()
    }

    /// The constant group {I} in dimension n (d = 0).
    pub fn trivial(p: u64, n: usize) -> Result<GroupParam> {
        let ring = Ring::new::<&str>(p, &[])?;
        Ok(GroupParam {
            name: "trivial".into(),
            matrix: Matrix::identity(n, &RatFunc::one(&ring)),
            ring,
            membership: Membership::Linear {
                coordinates: Vec::new(),
            },
            validity: None,
        })
    }

    /// A group given by an arbitrary parametrized matrix. Each variable must
    /// occur on its own as some entry, so that points can be read back.
    pub fn from_matrix(name: &str, matrix: Matrix<RatFunc>) -> Result<GroupParam> {
        let ring = matrix.sample().ring().clone();
        let mut coordinates = Vec::with_capacity(ring.nvars());
        for v in ring.vars() {
            let var = RatFunc::var(&ring, v)?;
            let cell = (0..matrix.rows())
                .flat_map(|i| (0..matrix.cols()).map(move |j| (i, j)))
                .find(|&(i, j)| *matrix.get(i, j) == var)
                .ok_or_else(|| Error::NoExtractionRule(format!("{name}: no entry equal to {v}")))?;
            coordinates.push(cell);
        }
        Ok(GroupParam {
            name: name.to_string(),
            ring,
            matrix,
            membership: Membership::Linear { coordinates },
            validity: None,
        })
    }

    /// The matrix at coordinates lying in `field`.
    pub fn matrix_at(
        &self,
        coords: &[FieldElement],
        field: &FieldSpec,
    ) -> Result<Matrix<FieldElement>> {
        if coords.len() != self.d() {
            return Err(Error::Dimension(format!(
                "{} coordinates for d = {}",
                coords.len(),
                self.d()
            )));
        }
        if field.p() != self.p() || coords.iter().any(|c| c.spec() != field) {
            return Err(Error::DomainMismatch);
        }
        let lift = |c: u64| field.from_int(c as i64);
        self.matrix.try_map(|e| e.eval_at(coords, &lift))
    }

    /// Whether a specialization point avoids the validity locus.
    pub fn is_valid_point(&self, coords: &[FieldElement]) -> bool {
        match (&self.validity, coords.first()) {
            (Some(g), Some(c)) => {
                let spec = c.spec().clone();
                !g.eval_with(coords, &|v| spec.from_int(v as i64)).is_zero()
            }
            _ => true,
        }
    }

    /// Exact membership test for a finite matrix.
    pub fn contains(&self, m: &Matrix<FieldElement>) -> Result<bool> {
        if !m.is_square() || m.rows() != self.n() {
            return Ok(false);
        }
        match &self.membership {
            Membership::SpecialLinear => Ok(m.det()?.is_one()),
            Membership::Linear { coordinates } => {
                let field = m.sample().spec().clone();
                let coords: Vec<FieldElement> = coordinates
                    .iter()
                    .map(|&(i, j)| m.get(i, j).clone())
                    .collect();
                Ok(self.matrix_at(&coords, &field)? == *m && !m.det()?.is_zero())
            }
        }
    }

    /// All points over `field` as (coordinates, matrix) pairs.
    pub fn points(
        &self,
        field: &FieldSpec,
    ) -> Result<Vec<(Vec<FieldElement>, Matrix<FieldElement>)>> {
        if !matches!(self.membership, Membership::Linear { .. }) {
            return Err(Error::NoExtractionRule(self.name.clone()));
        }
        let d = self.d() as u32;
        let size = field
            .order()
            .checked_pow(d)
            .filter(|&s| s <= ENUMERATION_BUDGET)
            .ok_or_else(|| Error::BudgetExceeded {
                what: format!("{} points over {field}", self.name),
                budget: ENUMERATION_BUDGET,
            })?;
        let elems = enumerate(field)?;
        let q = field.order();
        let mut out = Vec::new();
        for idx in 0..size {
            let mut rest = idx;
            let coords: Vec<FieldElement> = (0..d)
                .map(|_| {
                    let e = elems[(rest % q) as usize].clone();
                    rest /= q;
                    e
                })
                .collect();
            let m = self.matrix_at(&coords, field)?;
            if !m.det()?.is_zero() {
                out.push((coords, m));
            }
        }
        Ok(out)
    }
}

/// The unipotent group Q = I + t1 e1 + t2 e2 + t3 e3 ⊂ U^4 over F_2 whose
/// F_2-points form Q_8.
pub fn q8_param() -> GroupParam {
    let ring = Ring::new(2, &["t1", "t2", "t3"]).expect("fixed ring");
    let matrix = crate::matfrob::parse_matrix(
        "[[1, t1, t2, t3]; [0, 1, 0, t1]; [0, 0, 1, t1 + t2]; [0, 0, 0, 1]]",
        &ring,
    )
    .expect("fixed matrix");
    let t1 = MPoly::var(&ring, "t1").expect("t1");
    let t2 = MPoly::var(&ring, "t2").expect("t2");
    GroupParam {
        name: "q8".into(),
        validity: Some(t1.mul(&t2).mul(&t1.add(&t2))),
        ring,
        matrix,
        membership: Membership::Linear {
            coordinates: vec![(0, 1), (0, 2), (0, 3)],
        },
    }
}

/// The torus through its general matrix; coordinates are the first column.
pub fn torus_param(spec: &TorusSpec) -> GroupParam {
    GroupParam {
        name: format!("torus({},{})", spec.p, spec.n),
        ring: spec.ring.clone(),
        matrix: spec.general_matrix.clone(),
        membership: Membership::Linear {
            coordinates: (0..spec.n).map(|i| (i, 0)).collect(),
        },
        validity: None,
    }
}

/// The companion-shaped SL_n element over F_q(s, t1, ..., t_{n-1}):
/// (-1)^{n+1} s^-1 in the top right corner, s at (2,1), ones further down
/// the subdiagonal and -t_i in the last column.
pub fn sln_param(q: u64, n: usize) -> Result<GroupParam> {
    if n < 2 {
        return Err(Error::InvalidInput("SL_n needs n >= 2".into()));
    }
    let p = match prime_factors(q).as_slice() {
        [p] if log_p(q, *p).is_some() => *p,
        _ => return Err(Error::InvalidField(format!("{q} is not a prime power"))),
    };
    let mut vars = vec!["s".to_string()];
    vars.extend((1..n).map(|i| format!("t{i}")));
    let ring = Ring::new(p, &vars)?;
    let s = RatFunc::var(&ring, "s")?;
    let mut m = Matrix::zeros(n, n, &RatFunc::zero(&ring));
    let corner = s.inv().expect("s != 0");
    m.set(0, n - 1, if n % 2 == 0 { corner.neg() } else { corner });
    m.set(1, 0, s);
    for k in 1..n - 1 {
        m.set(k + 1, k, RatFunc::one(&ring));
    }
    for i in 1..n {
        m.set(i, n - 1, RatFunc::var(&ring, &format!("t{i}"))?.neg());
    }
    Ok(GroupParam {
        name: format!("sl{n}"),
        validity: Some(MPoly::var(&ring, "s")?),
        ring,
        matrix: m,
        membership: Membership::SpecialLinear,
    })
}

/// λ(A(t)) = A(t) (A(t)^(q))^-1 as an exact symbolic matrix.
pub fn symbolic_lambda(param: &GroupParam, q: u64) -> Result<Matrix<RatFunc>> {
    check_q(param.p(), q)?;
    param.matrix.lang_steinberg_image(q)
}

/// λ*(t_i): the coordinates of λ(A(t)), verified by substituting them back
/// into the parametrization.
pub fn lambda_star_generators(param: &GroupParam, q: u64) -> Result<Vec<RatFunc>> {
    let Membership::Linear { coordinates } = &param.membership else {
        return Err(Error::NoExtractionRule(param.name.clone()));
    };
    let lam = symbolic_lambda(param, q)?;
    let gens: Vec<RatFunc> = coordinates
        .iter()
        .map(|&(i, j)| lam.get(i, j).clone())
        .collect();
    if gens.is_empty() {
        return if lam.is_identity() {
            Ok(gens)
        } else {
            Err(Error::NoExtractionRule(param.name.clone()))
        };
    }
    let resub = param.matrix.try_map(|e| e.substitute(&gens))?;
    if resub != lam {
        return Err(Error::NoExtractionRule(param.name.clone()));
    }
    Ok(gens)
}

fn check_q(p: u64, q: u64) -> Result<()> {
    match log_p(q, p) {
        Some(e) if e >= 1 => Ok(()),
        _ => Err(Error::InvalidModulus(format!(
            "q = {q} is not a power of {p}"
        ))),
    }
}

/// Every U in the group over `field` with λ(U) = A.
///
/// Coordinates are assigned in order and a column of U - A U^(q) is tested
/// as soon as all coordinates it involves are fixed.
pub fn brute_force_fiber(
    a: &Matrix<FieldElement>,
    param: &GroupParam,
    q: u64,
    field: &FieldSpec,
) -> Result<Vec<Matrix<FieldElement>>> {
    let Membership::Linear { .. } = param.membership else {
        return Err(Error::NoExtractionRule(param.name.clone()));
    };
    check_q(param.p(), q)?;
    if !a.is_square() || a.rows() != param.n() {
        return Err(Error::Dimension("target does not match the group".into()));
    }
    let emb = a.sample().spec().embed_into(field)?;
    let a = a.map(|x| emb.apply(x));
    let n = param.n();
    let d = param.d();
    // stage[k] = columns whose entries involve only the first k coordinates
    let mut stage = vec![Vec::new(); d + 1];
    for j in 0..n {
        let last = (0..n)
            .flat_map(|i| {
                let e = param.matrix.get(i, j);
                let mut s = e.num().support();
                for (k, used) in e.den().support().into_iter().enumerate() {
                    s[k] |= used;
                }
                s.into_iter()
                    .enumerate()
                    .filter(|(_, u)| *u)
                    .map(|(k, _)| k + 1)
            })
            .max()
            .unwrap_or(0);
        stage[last].push(j);
    }
    let elems = enumerate(field)?;
    let zero = field.zero();
    let mut evaluations = 0u64;
    let mut out = Vec::new();
    let mut coords = vec![zero.clone(); d];

    // entries as (coefficient, [(variable, exponent)]) lists over `field`
    let mut compiled = Vec::with_capacity(n * n);
    for e in param.matrix.entries() {
        if !e.is_polynomial() {
            return Err(Error::InvalidInput(
                "fiber search needs a polynomial parametrization".into(),
            ));
        }
        let terms: Vec<(FieldElement, Vec<(usize, u32)>)> = e
            .num()
            .terms()
            .iter()
            .map(|(mono, c)| {
                let vars = mono
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(v, &x)| (v, x))
                    .collect();
                (field.from_int(*c as i64), vars)
            })
            .collect();
        compiled.push(terms);
    }
    let eval = |coords: &[FieldElement], i: usize, j: usize| -> FieldElement {
        let mut acc = zero.clone();
        for (c, vars) in &compiled[i * n + j] {
            let mut t = c.clone();
            for &(v, x) in vars {
                t = if x == 1 {
                    &t * &coords[v]
                } else {
                    &t * &coords[v].pow(x as u64)
                };
            }
            acc = acc + t;
        }
        acc
    };
    let support: Vec<Vec<usize>> = (0..n)
        .map(|i| (0..n).filter(|&k| !a.get(i, k).is_zero()).collect())
        .collect();
    let column_ok = |coords: &[FieldElement], j: usize| -> Result<bool> {
        let col: Vec<FieldElement> = (0..n).map(|i| eval(coords, i, j)).collect();
        let twisted: Vec<FieldElement> = col.iter().map(|x| x.pow_q(q)).collect();
        for i in 0..n {
            let mut acc = zero.clone();
            for &k in &support[i] {
                acc = acc + a.get(i, k) * &twisted[k];
            }
            if acc != col[i] {
                return Ok(false);
            }
        }
        Ok(true)
    };
    for &j in &stage[0] {
        if !column_ok(&coords, j)? {
            return Ok(out);
        }
    }

    fn search(
        k: usize,
        coords: &mut Vec<FieldElement>,
        elems: &[FieldElement],
        stage: &[Vec<usize>],
        column_ok: &dyn Fn(&[FieldElement], usize) -> Result<bool>,
        evaluations: &mut u64,
        emit: &mut dyn FnMut(&[FieldElement]) -> Result<()>,
    ) -> Result<()> {
        if k == coords.len() {
            return emit(coords);
        }
        for e in elems {
            *evaluations += 1;
            if *evaluations > FIBER_BUDGET {
                return Err(Error::BudgetExceeded {
                    what: "fiber search".into(),
                    budget: FIBER_BUDGET,
                });
            }
            coords[k] = e.clone();
            let mut ok = true;
            for &j in &stage[k + 1] {
                if !column_ok(coords, j)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                search(k + 1, coords, elems, stage, column_ok, evaluations, emit)?;
            }
        }
        coords[k] = elems[0].clone();
        Ok(())
    }

    let mut emit = |c: &[FieldElement]| -> Result<()> {
        let u = param.matrix_at(c, field)?;
        if !u.det()?.is_zero() {
            out.push(u);
        }
        Ok(())
    };
    search(
        0,
        &mut coords,
        &elems,
        &stage,
        &column_ok,
        &mut evaluations,
        &mut emit,
    )?;
    Ok(out)
}

/// The first extension F_{|K|^m}, m <= m_max, of the field K of A over
/// which the fiber of A is nonempty, together with that fiber.
pub fn first_nonempty_fiber(
    a: &Matrix<FieldElement>,
    param: &GroupParam,
    q: u64,
    m_max: u32,
) -> Result<Option<(u32, FieldSpec, Vec<Matrix<FieldElement>>)>> {
    let base = a.sample().spec().clone();
    for m in 1..=m_max {
        let (big, _) = base.extension(m as usize)?;
        let fiber = brute_force_fiber(a, param, q, &big)?;
        if !fiber.is_empty() {
            return Ok(Some((m, big, fiber)));
        }
    }
    Ok(None)
}

/// The fiber of A over its splitting field, from the solution space of
/// X = A X^(q): every U with λ(U) = A is U_0 C for a fundamental solution
/// U_0 and C in GL_n(F_q), so it suffices to enumerate C.
pub fn solution_fiber(
    a: &Matrix<FieldElement>,
    param: &GroupParam,
    q: u64,
    m_max: u32,
) -> Result<(u32, FieldSpec, Vec<Matrix<FieldElement>>)> {
    check_q(param.p(), q)?;
    let report = galois_order_of_specialization(a, q, m_max)?;
    let n = a.rows();
    let k = log_p(q, param.p()).expect("checked") as usize;
    let fq = make_field(param.p(), k, None)?;
    let emb = fq.embed_into(&report.field)?;
    let cells = (n * n) as u32;
    let total = q
        .checked_pow(cells)
        .filter(|&s| s <= ENUMERATION_BUDGET)
        .ok_or_else(|| Error::BudgetExceeded {
            what: format!("GL_{n}(F_{q})"),
            budget: ENUMERATION_BUDGET,
        })?;
    let elems: Vec<FieldElement> = enumerate(&fq)?.iter().map(|x| emb.apply(x)).collect();
    let mut out = Vec::new();
    for idx in 0..total {
        let mut rest = idx;
        let data: Vec<FieldElement> = (0..cells)
            .map(|_| {
                let e = elems[(rest % q) as usize].clone();
                rest /= q;
                e
            })
            .collect();
        let c = Matrix::from_rows(data.chunks(n).map(|r| r.to_vec()).collect())?;
        if c.det()?.is_zero() {
            continue;
        }
        let u = report.u.mul(&c)?;
        if param.contains(&u)? {
            out.push(u);
        }
    }
    Ok((report.order, report.field, out))
}

/// Result of enumerating G(F_{q^m}) and grouping by λ.
#[derive(Clone, Debug)]
pub struct FiberCensus {
    pub m: usize,
    /// |G(F_q)|.
    pub base_order: usize,
    /// |G(F_{q^m})|.
    pub points: usize,
    pub fibers: usize,
    /// Every fiber has exactly |G(F_q)| elements.
    pub sizes_ok: bool,
    /// V^-1 U is fixed by the q-power map for U, V in one fiber.
    pub cosets_ok: bool,
    /// Each fiber is closed under right multiplication by G(F_q).
    pub closed_ok: bool,
}

impl FiberCensus {
    pub fn ok(&self) -> bool {
        self.sizes_ok && self.cosets_ok && self.closed_ok
    }
}

fn key(m: &Matrix<FieldElement>) -> Vec<u64> {
    m.entries().iter().map(FieldElement::index).collect()
}

/// Groups all points of G over F_{q^m} (q = |base|) by their λ-image.
pub fn fiber_census(param: &GroupParam, base: &FieldSpec, m: usize) -> Result<FiberCensus> {
    let q = base.order();
    let g_q: Vec<Matrix<FieldElement>> = param.points(base)?.into_iter().map(|(_, u)| u).collect();
    let (big, emb) = base.extension(m)?;
    let g_q: Vec<Matrix<FieldElement>> = g_q.iter().map(|g| g.map(|x| emb.apply(x))).collect();
    let pts = param.points(&big)?;
    let mut fibers: HashMap<Vec<u64>, Vec<Matrix<FieldElement>>> = HashMap::new();
    for (_, u) in &pts {
        fibers
            .entry(key(&u.lang_steinberg_image(q)?))
            .or_default()
            .push(u.clone());
    }
    let sizes_ok = fibers.values().all(|f| f.len() == g_q.len());
    let mut cosets_ok = true;
    let mut closed_ok = true;
    for fiber in fibers.values() {
        let u0 = &fiber[0];
        let u0_inv = u0.inv()?;
        for v in fiber {
            let g = u0_inv.mul(v)?;
            cosets_ok &= g.frob_twist(q) == g;
        }
        let members: std::collections::HashSet<Vec<u64>> = fiber.iter().map(key).collect();
        for g in &g_q {
            closed_ok &= members.contains(&key(&u0.mul(g)?));
        }
    }
    Ok(FiberCensus {
        m,
        base_order: g_q.len(),
        points: pts.len(),
        fibers: fibers.len(),
        sizes_ok,
        cosets_ok,
        closed_ok,
    })
}
