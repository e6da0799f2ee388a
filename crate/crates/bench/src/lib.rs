//! Deterministic inputs for the benchmarks.

use smphull::{BoxDomain, GraphPoint, Rational, RunLengthIneq, SymmetricPoly};

fn int(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

/// `sum_i (i - 1) e_i` on `[1, 3]^n`, supermodular since every coefficient is
/// nonnegative and the box is positive.
pub fn supermodular_instance(n: usize) -> (SymmetricPoly, BoxDomain) {
    let coeffs = (2..=n).map(|d| int(d as i64 - 1)).collect();
    let f = SymmetricPoly::new(n, coeffs).expect("nonzero coefficients");
    let bx = BoxDomain::new(n, int(1), int(3)).expect("valid box");
    (f, bx)
}

/// `2 prod x_j` on `[-3/2, 3/2]^n`.
pub fn reflection_instance(n: usize) -> (SymmetricPoly, BoxDomain) {
    let u = Rational::new(3.into(), 2.into());
    let f = SymmetricPoly::monomial(n, int(2)).expect("nonzero coefficient");
    let bx = BoxDomain::new(n, -u.clone(), u).expect("valid box");
    (f, bx)
}

/// Run-length core facets of the reflection instance.
pub fn reflection_runs(n: usize) -> Vec<RunLengthIneq> {
    let (f, bx) = reflection_instance(n);
    smphull::reflection_core_runs(n, bx.u(), &f.coeff(n))
        .expect("valid reflection instance")
        .into_iter()
        .map(|(_, r)| r)
        .collect()
}

/// A point of the box with coordinates cycling through eight interior values,
/// lifted to `y = f(x) + dy`.
pub fn box_point(f: &SymmetricPoly, bx: &BoxDomain, dy: i64) -> GraphPoint {
    let w = bx.width();
    let x: Vec<Rational> = (0..bx.n())
        .map(|j| bx.ell() + &w * Rational::new(((j * 5) % 8).into(), 8.into()))
        .collect();
    let y = f.eval(&x).expect("point in box") + int(dy);
    GraphPoint::new(x, y)
}

/// A point far from the graph: `y` is set without evaluating `f`.
pub fn box_point_with_y(bx: &BoxDomain, y: i64) -> GraphPoint {
    let w = bx.width();
    let x = (0..bx.n())
        .map(|j| bx.ell() + &w * Rational::new(((j * 5) % 8).into(), 8.into()))
        .collect();
    GraphPoint::new(x, int(y))
}

/// Objective `(alpha, alpha')` with alternating signs.
pub fn objective(n: usize) -> (Vec<Rational>, Rational) {
    let alpha = (0..n)
        .map(|j| if j % 2 == 0 { int(j as i64 + 1) } else { int(-(j as i64)) })
        .collect();
    (alpha, int(-1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn instances_are_well_formed() {
        for n in 3..=6 {
            let (f, bx) = supermodular_instance(n);
            assert!(smphull::supermodularity(&f, &bx).unwrap().rest0_holds);
            assert_eq!(box_point(&f, &bx, 0).x.len(), n);
            assert_eq!(reflection_runs(n).len(), n + 3);
        }
    }
}
