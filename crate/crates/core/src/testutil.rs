//! Shared generators and independent reference computations for unit tests.

use num_traits::Zero;
use proptest::prelude::*;

use crate::model::{BoxDomain, SymmetricPoly};
use crate::rational::{frac, int, Rational};

pub fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&a| int(a)).collect()
}

pub fn arb_rational(lo: i64, hi: i64) -> impl Strategy<Value = Rational> {
    (lo..=hi, 1i64..=3).prop_map(|(p, q)| frac(p, q))
}

pub fn arb_box(n: usize) -> impl Strategy<Value = BoxDomain> {
    (arb_rational(-4, 4), arb_rational(1, 6))
        .prop_map(move |(ell, w)| BoxDomain::new(n, ell.clone(), ell + w).unwrap())
}

pub fn arb_poly(n: usize) -> impl Strategy<Value = SymmetricPoly> {
    prop::collection::vec(arb_rational(-5, 5), n - 1)
        .prop_filter("nonzero polynomial", |c| c.iter().any(|v| !v.is_zero()))
        .prop_map(move |c| SymmetricPoly::new(n, c).unwrap())
}

pub fn arb_instance(
    dims: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = (SymmetricPoly, BoxDomain)> {
    dims.prop_flat_map(|n| (arb_poly(n), arb_box(n)))
}

/// Sum over every square-free monomial of degree at least 2.
pub fn brute_eval(f: &SymmetricPoly, x: &[Rational]) -> Rational {
    let n = x.len();
    let mut acc = Rational::zero();
    for mask in 0u64..(1 << n) {
        let d = mask.count_ones() as usize;
        if d < 2 {
            continue;
        }
        let mut term = f.coeff(d);
        for (j, xj) in x.iter().enumerate() {
            if mask >> j & 1 == 1 {
                term *= xj;
            }
        }
        acc += term;
    }
    acc
}

/// All `2^n` lifted box vertices, evaluated without the library's
/// evaluation routines.
pub fn brute_vertices(f: &SymmetricPoly, b: &BoxDomain) -> Vec<(Vec<Rational>, Rational)> {
    (0u64..(1 << b.n()))
        .map(|mask| {
            let x: Vec<Rational> = (0..b.n())
                .map(|j| if mask >> j & 1 == 1 { b.u().clone() } else { b.ell().clone() })
                .collect();
            let y = brute_eval(f, &x);
            (x, y)
        })
        .collect()
}
