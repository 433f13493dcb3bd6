//! Recursive multivariate gcd: content/primitive-part splitting in one
//! variable, primitive pseudo-remainder sequence for the rest.

use super::MPoly;

/// Monic (leading coefficient 1) greatest common divisor; gcd(0, 0) = 0.
pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
    if a.is_zero() {
        return b.monic().0;
    }
    if b.is_zero() {
        return a.monic().0;
    }
    if a.constant_value().is_some() || b.constant_value().is_some() {
        return MPoly::one(a.ring());
    }
    let (sa, sb) = (a.support(), b.support());
    // prefer a variable both operands share; otherwise split by content
    let v = (0..sa.len())
        .find(|&i| sa[i] && sb[i])
        .or_else(|| (0..sa.len()).find(|&i| sa[i] || sb[i]))
        .expect("nonconstant");
    let ua = a.to_uni(v);
    let ub = b.to_uni(v);
    let ca = content(&ua);
    let cb = content(&ub);
    let c = gcd(&ca, &cb);
    let pa = primitive(&ua, &ca);
    let pb = primitive(&ub, &cb);
    let g = uni_prs_gcd(pa, pb);
    MPoly::from_uni(a.ring(), &g, v).mul(&c).monic().0
}

fn content(u: &[MPoly]) -> MPoly {
    let mut c = MPoly::zero(u[0].ring());
    for x in u {
        if x.is_zero() {
            continue;
        }
        c = gcd(&c, x);
        if c.is_one() {
            break;
        }
    }
    c
}

fn primitive(u: &[MPoly], c: &MPoly) -> Vec<MPoly> {
    u.iter()
        .map(|x| x.div_exact(c).expect("content divides coefficients"))
        .collect()
}

fn trim(u: &mut Vec<MPoly>) {
    while u.len() > 1 && u.last().is_some_and(MPoly::is_zero) {
        u.pop();
    }
}

fn is_zero_uni(u: &[MPoly]) -> bool {
    u.iter().all(MPoly::is_zero)
}

/// Pseudo-remainder of a by b (as polynomials in the split variable).
fn prem(a: &[MPoly], b: &[MPoly]) -> Vec<MPoly> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !is_zero_uni(&r) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for x in r.iter_mut() {
            *x = x.mul(lb);
        }
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].sub(&lr.mul(bi));
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
    }
    r
}

fn uni_prs_gcd(mut a: Vec<MPoly>, mut b: Vec<MPoly>) -> Vec<MPoly> {
    trim(&mut a);
    trim(&mut b);
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    loop {
        if is_zero_uni(&b) {
            return a;
        }
        if b.len() == 1 {
            // a nonzero constant in the split variable; a and b are primitive
            return vec![MPoly::one(b[0].ring())];
        }
        let r = prem(&a, &b);
        if is_zero_uni(&r) {
            return b;
        }
        let c = content(&r);
        a = b;
        b = primitive(&r, &c);
    }
}
