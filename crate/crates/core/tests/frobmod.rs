use std::collections::HashMap;

use frobgen::frobmod::{
    check_equivalence_witness, extract_generic_polynomial, make_module, Convention, FrobModule,
    DEFAULT_SEED,
};
use frobgen::gf::{make_field, FieldElement};
use frobgen::linpoly::{galois_order_of_specialization, parse_linearized, splitting_degree};
use frobgen::matfrob::{parse_matrix, Matrix};
use frobgen::symfield::{parse_expr, RatFunc, Ring};
use frobgen::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn st() -> Ring {
    Ring::new(5, &["s", "t"]).unwrap()
}

fn c8_module() -> FrobModule<RatFunc> {
    let r = st();
    let a = parse_matrix("[[s, 2*t]; [t, s]]", &r)
        .unwrap()
        .pow(3)
        .unwrap();
    make_module(5, a).unwrap()
}

const C8_F: &str = "Y^25 + (4*s^15 + 4*s^11*t^4 + 3*s^9*t^6 + 3*s^7*t^8 + 2*s^5*t^10 + 3*s^3*t^12 + 4*s*t^14)*Y^5 \
                    + (s^14*t^4 + 2*s^10*t^8 + 4*s^8*t^10 + 4*s^6*t^12 + 3*s^4*t^14 + 4*s^2*t^16 + 2*t^18)*Y";

fn point(f: &frobgen::gf::FieldSpec, s: i64, t: i64) -> HashMap<String, FieldElement> {
    HashMap::from([
        ("s".to_string(), f.from_int(s)),
        ("t".to_string(), f.from_int(t)),
    ])
}

#[test]
fn module_validation() {
    let f5 = make_field(5, 1, None).unwrap();
    assert!(make_module(5, Matrix::identity(2, &f5.one())).is_ok());
    assert_eq!(
        make_module(5, Matrix::zeros(2, 2, &f5.one())),
        Err(Error::Singular)
    );
    assert!(make_module(7, Matrix::identity(2, &f5.one())).is_err());
    let m = c8_module();
    assert_eq!(
        m.matrix().det().unwrap(),
        parse_expr("(s^2-2*t^2)^3", &st()).unwrap()
    );
}

#[test]
fn phi_examples() {
    let f5 = make_field(5, 1, None).unwrap();
    let id = make_module(5, Matrix::identity(2, &f5.one())).unwrap();
    let v = vec![f5.from_int(3), f5.from_int(4)];
    assert_eq!(id.apply_phi(&v).unwrap(), v);

    let r = st();
    let m = c8_module();
    let e1 = vec![RatFunc::one(&r), RatFunc::zero(&r)];
    let image = m.apply_phi(&e1).unwrap();
    assert_eq!(image[0], parse_expr("s^3+s*t^2", &r).unwrap());
    assert_eq!(image[1], parse_expr("3*s^2*t+2*t^3", &r).unwrap());
}

#[test]
fn cyclic_basis_of_the_c8_module() {
    let r = st();
    let cf = c8_module().cyclic_basis(DEFAULT_SEED).unwrap();
    assert_eq!(cf.cyclic_vector, vec![RatFunc::one(&r), RatFunc::zero(&r)]);
    assert_eq!(
        cf.basis,
        parse_matrix("[[1, s^3+s*t^2]; [0, 3*s^2*t+2*t^3]]", &r).unwrap()
    );
    let f = cf.extract(Convention::Transpose).unwrap();
    assert_eq!(f, parse_linearized(C8_F, &r, 5).unwrap());
    assert_eq!(f.to_string(), C8_F);
    assert!(check_equivalence_witness(c8_module().matrix(), &cf.b, &cf.basis, 5).unwrap());
}

#[test]
fn last_column_convention_negates_the_column() {
    let r = st();
    let cf = c8_module().cyclic_basis(DEFAULT_SEED).unwrap();
    let g = cf.extract(Convention::LastColumn).unwrap();
    let col = cf.last_column();
    assert_eq!(g.coeffs()[0], col[0].neg());
    assert_eq!(g.coeffs()[1], col[1].neg());
    assert!(g.coeffs()[2].is_one());
    // here the first subdiagonal entry is 1, so both conventions agree
    assert_eq!(g, cf.extract(Convention::Transpose).unwrap());
    assert_eq!(g.coeffs()[0].ring(), &r);
}

#[test]
fn identity_module_over_prime_field_has_no_cyclic_vector() {
    let f5 = make_field(5, 1, None).unwrap();
    let id = make_module(5, Matrix::identity(2, &f5.one())).unwrap();
    assert!(matches!(
        id.cyclic_basis(DEFAULT_SEED),
        Err(Error::NoCyclicVector { budget: 66, .. })
    ));
}

#[test]
fn one_dimensional_module() {
    let r = Ring::new(3, &["a"]).unwrap();
    let a = parse_matrix("[[a]]", &r).unwrap();
    let m = make_module(3, a).unwrap();
    let cf = m.cyclic_basis(DEFAULT_SEED).unwrap();
    assert!(cf.basis.is_identity());
    assert_eq!(cf.b, parse_matrix("[[a]]", &r).unwrap());
    assert_eq!(
        cf.extract(Convention::Transpose).unwrap().to_string(),
        "Y^3 + (2*a)*Y"
    );
}

#[test]
fn sl2_chain_from_a_scaled_companion() {
    // [[0, s^-1], [s, t1]] style companion over F_2: Y^4 + t1*s*Y^2 + s*Y
    let r = Ring::new(2, &["s", "t1"]).unwrap();
    let b = parse_matrix("[[0, 1/s]; [s, t1]]", &r).unwrap();
    let f = extract_generic_polynomial(&b, 2, Convention::Transpose).unwrap();
    assert_eq!(
        f,
        parse_linearized("Y^4 + (s*t1)*Y^2 + (s)*Y", &r, 2).unwrap()
    );
}

#[test]
fn specialization_of_the_c8_module() {
    let f5 = make_field(5, 1, None).unwrap();
    let m = c8_module();
    assert_eq!(m.specialize(&point(&f5, 0, 0)), Err(Error::Singular));
    let fin = m.specialize(&point(&f5, 1, 1)).unwrap();
    assert_eq!(fin.n(), 2);
    assert!(matches!(
        m.specialize(&HashMap::from([("s".to_string(), f5.one())])),
        Err(Error::MissingAssignment(_))
    ));
}

#[test]
fn extracted_polynomial_and_module_split_together() {
    let f5 = make_field(5, 1, None).unwrap();
    let m = c8_module();
    let f = m
        .cyclic_basis(DEFAULT_SEED)
        .unwrap()
        .extract(Convention::Transpose)
        .unwrap();
    let mut checked = 0;
    for s in 0..5 {
        for t in 0..5 {
            let xi = point(&f5, s, t);
            let Ok(fin) = m.specialize(&xi) else { continue };
            let module_degree = galois_order_of_specialization(fin.matrix(), 5, 8)
                .unwrap()
                .order;
            match f.specialize(&xi) {
                Ok(fs) if fs.is_separable() => {
                    assert_eq!(
                        splitting_degree(&fs, 2, 8).unwrap(),
                        module_degree,
                        "(s,t) = ({s},{t})"
                    );
                    checked += 1;
                }
                // degenerate exactly where det N = t(3s^2 + 2t^2) vanishes
                _ => assert_eq!((t * (3 * s * s + 2 * t * t)) % 5, 0, "(s,t) = ({s},{t})"),
            }
        }
    }
    assert_eq!(checked, 12);
}

#[test]
fn equivalence_witness_rejects_wrong_target() {
    let f5 = make_field(5, 1, None).unwrap();
    let a = Matrix::from_rows(vec![
        vec![f5.from_int(1), f5.from_int(2)],
        vec![f5.from_int(3), f5.from_int(1)],
    ])
    .unwrap();
    let i = Matrix::identity(2, &f5.one());
    assert!(check_equivalence_witness(&a, &a, &i, 5).unwrap());
    let c = Matrix::from_rows(vec![vec![f5.one(), f5.one()], vec![f5.zero(), f5.one()]]).unwrap();
    assert!(!check_equivalence_witness(&a, &a.mul(&c).unwrap(), &i, 5).unwrap());
    assert_eq!(
        check_equivalence_witness(&a, &a, &Matrix::zeros(2, 2, &f5.one()), 5),
        Err(Error::Singular)
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn phi_is_q_semilinear(seed in any::<u64>(), n in 1usize..4, which in 0usize..3) {
        let (p, k, q) = [(2u64, 4usize, 4u64), (3, 2, 3), (5, 2, 5)][which];
        let f = make_field(p, k, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = loop {
            let rows = (0..n).map(|_| (0..n).map(|_| f.random(&mut rng)).collect()).collect();
            let m = Matrix::from_rows(rows).unwrap();
            if !m.det().unwrap().is_zero() { break m; }
        };
        let module = make_module(q, a).unwrap();
        let u: Vec<FieldElement> = (0..n).map(|_| f.random(&mut rng)).collect();
        let v: Vec<FieldElement> = (0..n).map(|_| f.random(&mut rng)).collect();
        let c = f.random(&mut rng);
        let sum: Vec<FieldElement> = u.iter().zip(&v).map(|(x, y)| x.clone() + y.clone()).collect();
        let lhs = module.apply_phi(&sum).unwrap();
        let rhs: Vec<FieldElement> = module.apply_phi(&u).unwrap().into_iter()
            .zip(module.apply_phi(&v).unwrap()).map(|(x, y)| x + y).collect();
        prop_assert_eq!(lhs, rhs);
        let cu: Vec<FieldElement> = u.iter().map(|x| &c * x).collect();
        let scaled: Vec<FieldElement> = module.apply_phi(&u).unwrap().iter().map(|x| &c.pow(q) * x).collect();
        prop_assert_eq!(module.apply_phi(&cu).unwrap(), scaled);
    }
}
