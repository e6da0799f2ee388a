#![allow(dead_code)]

use num_traits::{Signed, Zero};
use rand::Rng;
use smphull::{supermodularity, BoxDomain, Rational, SymmetricPoly};

pub fn rat(rng: &mut impl Rng, lo: i64, hi: i64) -> Rational {
    let d = rng.gen_range(1..=4);
    Rational::new(rng.gen_range(lo * d..=hi * d).into(), d.into())
}

pub fn positive(rng: &mut impl Rng, hi: i64) -> Rational {
    loop {
        let r = rat(rng, 0, hi);
        if r.is_positive() {
            return r;
        }
    }
}

pub fn random_box(rng: &mut impl Rng, n: usize) -> BoxDomain {
    let ell = rat(rng, -3, 3);
    let u = &ell + positive(rng, 3);
    BoxDomain::new(n, ell, u).unwrap()
}

pub fn random_poly(rng: &mut impl Rng, n: usize) -> SymmetricPoly {
    loop {
        if let Ok(f) = SymmetricPoly::new(n, (2..=n).map(|_| rat(rng, -5, 5)).collect()) {
            return f;
        }
    }
}

/// A supermodular instance: rejection sampling over general data, falling
/// back to nonnegative coefficients on a nonnegative box.
pub fn supermodular_instance(rng: &mut impl Rng, n: usize) -> (SymmetricPoly, BoxDomain) {
    for _ in 0..50 {
        let b = random_box(rng, n);
        let f = random_poly(rng, n);
        if supermodularity(&f, &b).unwrap().rest0_holds {
            return (f, b);
        }
        if supermodularity(&f.negated(), &b).unwrap().rest0_holds {
            return (f.negated(), b);
        }
    }
    strictly_supermodular_instance(rng, n)
}

/// Positive coefficients on a box with `ell > 0`.
pub fn strictly_supermodular_instance(rng: &mut impl Rng, n: usize) -> (SymmetricPoly, BoxDomain) {
    let ell = positive(rng, 2);
    let u = &ell + positive(rng, 3);
    let f = SymmetricPoly::new(n, (2..=n).map(|_| positive(rng, 5)).collect()).unwrap();
    (f, BoxDomain::new(n, ell, u).unwrap())
}

pub fn reflection_instance(rng: &mut impl Rng, n: usize) -> (SymmetricPoly, BoxDomain) {
    let u = positive(rng, 3);
    let mut c = rat(rng, -5, 5);
    while c.is_zero() {
        c = rat(rng, -5, 5);
    }
    let b = BoxDomain::new(n, -u.clone(), u).unwrap();
    (SymmetricPoly::monomial(n, c).unwrap(), b)
}

/// A point with coordinates drawn from a slightly enlarged box and `y` near
/// the graph.
pub fn random_point(rng: &mut impl Rng, f: &SymmetricPoly, b: &BoxDomain) -> smphull::GraphPoint {
    let w = b.width();
    let x: Vec<Rational> = (0..b.n())
        .map(|_| {
            let t = Rational::new(rng.gen_range(-2..=26).into(), 24.into());
            b.ell() + &w * t
        })
        .collect();
    let inside: Vec<Rational> = x.iter().map(|v| v.clone().clamp(b.ell().clone(), b.u().clone())).collect();
    let y = f.eval(&inside).unwrap() + rat(rng, -3, 3);
    smphull::GraphPoint::new(x, y)
}
