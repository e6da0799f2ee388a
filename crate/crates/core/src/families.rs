//! Closed-form hull descriptions for supermodular symmetric polynomials and
//! for monomials over boxes of the form `[-u, u]^n`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::facet::multiset_permutation_count;
use crate::model::{
    check_dim, simplex_values, BoxDomain, GraphPoint, LinIneq, SymmetricPoly,
};
use crate::oracles::{validity_slacks, RunLengthIneq};
use crate::rational::{self, int, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SupermodReport {
    pub rest0_holds: bool,
    pub strict: bool,
    /// Sign test on the coefficient expansion of the second differences.
    pub coeff_criterion_holds: bool,
    /// Binomial partial-sum test, only defined on `[0, 1]^n`.
    pub unitbox_criterion: Option<bool>,
    /// `m(x^k) - m(x^{k-1})` for `k = 1..=n`.
    #[serde(with = "rational::serde_vec")]
    pub differences: Vec<Rational>,
}

pub fn simplex_differences(f: &SymmetricPoly, bx: &BoxDomain) -> Result<Vec<Rational>> {
    let m = simplex_values(f, bx)?;
    Ok(m.windows(2).map(|w| &w[1] - &w[0]).collect())
}

pub fn supermodularity(f: &SymmetricPoly, bx: &BoxDomain) -> Result<SupermodReport> {
    let n = f.n();
    check_dim(n, bx.n())?;
    let differences = simplex_differences(f, bx)?;
    let rest0_holds = differences.windows(2).all(|w| w[0] <= w[1]);
    let strict = differences.windows(2).all(|w| w[0] < w[1]);
    let coeff_criterion_holds = (1..n).all(|k| !second_difference_by_coeffs(f, bx, k).is_negative());
    let unitbox_criterion = (bx.ell().is_zero() && bx.u().is_one()).then(|| {
        (1..n).all(|k| {
            let s: Rational = (2..=k + 1)
                .map(|d| Rational::from_integer(rational::binomial(k - 1, d - 2)) * f.coeff(d))
                .sum();
            !s.is_negative()
        })
    });
    Ok(SupermodReport {
        rest0_holds,
        strict,
        coeff_criterion_holds,
        unitbox_criterion,
        differences,
    })
}

/// `sum_d c_d (u - ell)^2 theta_{k,d}`, where `theta_{k,d}` is the degree
/// `d - 2` elementary symmetric value of `x^{k-1}` with entries `k` and `k + 1`
/// removed: `k - 1` copies of `u` and `n - k - 1` copies of `ell`.
fn second_difference_by_coeffs(f: &SymmetricPoly, bx: &BoxDomain, k: usize) -> Rational {
    let n = f.n();
    let (ups, lows) = (k - 1, n - k - 1);
    let w2 = bx.width() * bx.width();
    let mut acc = Rational::zero();
    for d in 2..=n {
        let c = f.coeff(d);
        if c.is_zero() {
            continue;
        }
        let deg = d - 2;
        let theta: Rational = (deg.saturating_sub(lows)..=deg.min(ups))
            .map(|a| {
                Rational::from_integer(rational::binomial(ups, a) * rational::binomial(lows, deg - a))
                    * rational::pow(bx.u(), a)
                    * rational::pow(bx.ell(), deg - a)
            })
            .sum();
        acc += c * &w2 * theta;
    }
    acc
}

/// Identifies a core facet of one of the two closed-form families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum FamilyFacet {
    /// Concave-side facet with slopes `m(x^j) - m(x^{j-1})`.
    Res1,
    /// Convex-side facet through `x^{k-1}` and `x^k`.
    Res2 { k: usize },
    /// `1 - y >= 0` in unit form.
    UpperY,
    /// `1 + y >= 0` in unit form.
    LowerY,
    /// `(n - 1) + sum x + (-1)^n y >= 0` in unit form.
    Pair1,
    /// `(n - 1) - sum x + y >= 0` in unit form.
    Pair2,
    /// `(n - 1) - (x_1 + .. + x_{t+1}) + (x_{t+2} + .. + x_n) + (-1)^(n-t-1) y >= 0`.
    Dominate { t: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyTag {
    Supermodular,
    Submodular,
    ReflectionMonomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullDescription {
    pub family: FamilyTag,
    /// Canonical core facets (`beta' = +-1`, nondecreasing `beta`).
    pub core_facets: Vec<LinIneq>,
    /// Family label of each core facet, in the same order.
    pub core_ids: Vec<FamilyFacet>,
    /// Variable bounds that are facets.
    pub trivial_facets: Vec<LinIneq>,
    /// Facets after permutation expansion, excluding trivial facets.
    #[serde(serialize_with = "ser_bigint")]
    pub expanded_nontrivial: BigInt,
    /// `expanded_nontrivial` plus the trivial facets.
    #[serde(serialize_with = "ser_bigint")]
    pub expanded_count: BigInt,
}

fn ser_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl HullDescription {
    fn assemble(
        family: FamilyTag,
        core: Vec<(FamilyFacet, LinIneq)>,
        trivial_facets: Vec<LinIneq>,
    ) -> Self {
        let expanded_nontrivial: BigInt = core
            .iter()
            .map(|(_, q)| multiset_permutation_count(&q.beta))
            .sum();
        let expanded_count = &expanded_nontrivial + BigInt::from(trivial_facets.len());
        let (core_ids, core_facets) = core.into_iter().unzip();
        Self {
            family,
            core_facets,
            core_ids,
            trivial_facets,
            expanded_nontrivial,
            expanded_count,
        }
    }
}

/// Bound facets. The face `x_j = b` is the graph of the restriction of `m`,
/// a symmetric polynomial in `n - 1` variables with degree-`d` coefficient
/// `c_d + b c_{d+1}`; the face is a facet exactly when that restriction is
/// not affine, i.e. some coefficient of degree at least 2 survives.
pub fn trivial_facets(f: &SymmetricPoly, bx: &BoxDomain) -> Result<Vec<LinIneq>> {
    let n = f.n();
    check_dim(n, bx.n())?;
    let restricted_nonaffine =
        |b: &Rational| (2..n).any(|d| !(f.coeff(d) + b * f.coeff(d + 1)).is_zero());
    let mut out = Vec::new();
    if restricted_nonaffine(bx.ell()) {
        out.extend((0..n).map(|j| LinIneq::lower_bound(n, j, bx.ell())));
    }
    if restricted_nonaffine(bx.u()) {
        out.extend((0..n).map(|j| LinIneq::upper_bound(n, j, bx.u())));
    }
    out.sort();
    Ok(out)
}

/// Orientation under which the family applies: `Some(false)` for
/// supermodular `f`, `Some(true)` when `-f` is supermodular instead.
fn supermodular_orientation(f: &SymmetricPoly, bx: &BoxDomain) -> Result<Option<bool>> {
    let d = simplex_differences(f, bx)?;
    if d.windows(2).all(|w| w[0] <= w[1]) {
        Ok(Some(false))
    } else if d.windows(2).all(|w| w[0] >= w[1]) {
        Ok(Some(true))
    } else {
        Ok(None)
    }
}

fn res1(mvals: &[Rational], bx: &BoxDomain) -> LinIneq {
    let n = mvals.len() - 1;
    let w = bx.width();
    let beta0 = (bx.u() * &mvals[0] - bx.ell() * &mvals[n]) / &w;
    let beta = (1..=n).map(|j| (&mvals[j] - &mvals[j - 1]) / &w).collect();
    LinIneq::new(beta0, beta, -Rational::one())
}

fn res2(mvals: &[Rational], bx: &BoxDomain, k: usize) -> LinIneq {
    let n = mvals.len() - 1;
    let slope = (&mvals[k] - &mvals[k - 1]) / bx.width();
    let anchor = bx.u() * int(k as i64) + bx.ell() * int((n - k) as i64);
    let beta0 = -&mvals[k] + &slope * anchor;
    LinIneq::new(beta0, vec![-slope; n], Rational::one())
}

fn flip(q: LinIneq) -> LinIneq {
    LinIneq::new(q.beta0, q.beta, -q.beta_prime)
}

/// Core facets of a supermodular polynomial (or of a submodular one, through
/// its negation): one concave-side facet and the distinct convex-side facets,
/// with the bound facets attached.
pub fn supermodular_core_facets(f: &SymmetricPoly, bx: &BoxDomain) -> Result<HullDescription> {
    check_dim(f.n(), bx.n())?;
    let negated = supermodular_orientation(f, bx)?.ok_or(HullError::NotSupermodular)?;
    let g = if negated { f.negated() } else { f.clone() };
    let mvals = simplex_values(&g, bx)?;
    let orient = |q: LinIneq| if negated { flip(q) } else { q };
    let mut core: Vec<(FamilyFacet, LinIneq)> = vec![(FamilyFacet::Res1, orient(res1(&mvals, bx)).canonical())];
    for k in 1..=f.n() {
        let q = orient(res2(&mvals, bx, k)).canonical();
        if !core.iter().any(|(_, c)| *c == q) {
            core.push((FamilyFacet::Res2 { k }, q));
        }
    }
    let tag = if negated {
        FamilyTag::Submodular
    } else {
        FamilyTag::Supermodular
    };
    Ok(HullDescription::assemble(tag, core, trivial_facets(f, bx)?))
}

fn reflection_ids(n: usize) -> Vec<FamilyFacet> {
    let mut ids = Vec::with_capacity(n + 3);
    // For n = 2 the bounds on y touch only two vertices and are not facets.
    if n >= 3 {
        ids.push(FamilyFacet::UpperY);
        ids.push(FamilyFacet::LowerY);
    }
    ids.push(FamilyFacet::Pair1);
    ids.push(FamilyFacet::Pair2);
    ids.extend((0..n - 1).map(|t| FamilyFacet::Dominate { t }));
    ids
}

fn sign_pow(e: usize) -> i64 {
    if e.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Unit-form reflection facet for `x_1 ... x_n` on `[-1, 1]^n`.
fn reflection_unit_runs(n: usize, id: FamilyFacet) -> Result<RunLengthIneq> {
    let nm1 = int(n as i64 - 1);
    let (beta0, runs, bp) = match id {
        FamilyFacet::UpperY => (int(1), vec![(int(0), n)], -1),
        FamilyFacet::LowerY => (int(1), vec![(int(0), n)], 1),
        FamilyFacet::Pair1 => (nm1, vec![(int(1), n)], sign_pow(n)),
        FamilyFacet::Pair2 => (nm1, vec![(int(-1), n)], 1),
        FamilyFacet::Dominate { t } if t + 2 <= n => (
            nm1,
            vec![(int(-1), t + 1), (int(1), n - t - 1)],
            sign_pow(n - t - 1),
        ),
        other => {
            return Err(HullError::Unsupported(format!(
                "{other:?} is not a reflection facet for n = {n}"
            )))
        }
    };
    let runs = runs.into_iter().filter(|(_, c)| *c > 0).collect();
    Ok(RunLengthIneq {
        beta0,
        runs,
        beta_prime: int(bp),
    })
}

fn check_reflection_args(n: usize, u: &Rational, c_n: &Rational) -> Result<()> {
    if n < 2 {
        return Err(HullError::InvalidPolynomial(format!("need n >= 2, got {n}")));
    }
    if !u.is_positive() {
        return Err(HullError::InvalidBox(format!(
            "need u > 0, got {}",
            rational::to_text(u)
        )));
    }
    if c_n.is_zero() {
        return Err(HullError::InvalidPolynomial("c_n must be nonzero".into()));
    }
    Ok(())
}

/// Rescales unit-form facets to `c_n x_1 ... x_n` on `[-u, u]^n`:
/// `x -> x / u`, `y -> y / (c_n u^n)`, then multiplied by `|c_n| u^n` so
/// that `beta' = +-1`. Scaled values are memoized since every facet draws its
/// coefficients from a handful of unit values.
struct RunScale {
    big: Rational,
    per_x: Rational,
    negative: bool,
    constants: BTreeMap<Rational, Rational>,
    coefficients: BTreeMap<Rational, Rational>,
}

impl RunScale {
    fn new(n: usize, u: &Rational, c_n: &Rational) -> Self {
        let big = c_n.abs() * rational::pow(u, n);
        let per_x = &big / u;
        Self {
            big,
            per_x,
            negative: c_n.is_negative(),
            constants: BTreeMap::new(),
            coefficients: BTreeMap::new(),
        }
    }

    fn apply(&mut self, q: RunLengthIneq) -> RunLengthIneq {
        let beta0 = self
            .constants
            .entry(q.beta0)
            .or_insert_with_key(|v| v * &self.big)
            .clone();
        let runs = q
            .runs
            .into_iter()
            .map(|(v, c)| {
                let scaled = self
                    .coefficients
                    .entry(v)
                    .or_insert_with_key(|v| v * &self.per_x)
                    .clone();
                (scaled, c)
            })
            .collect();
        RunLengthIneq {
            beta0,
            runs,
            beta_prime: if self.negative { -q.beta_prime } else { q.beta_prime },
        }
    }
}

/// Reflection core facets in run-length form, for separation at large `n`.
pub fn reflection_core_runs(n: usize, u: &Rational, c_n: &Rational) -> Result<Vec<(FamilyFacet, RunLengthIneq)>> {
    check_reflection_args(n, u, c_n)?;
    let mut scale = RunScale::new(n, u, c_n);
    reflection_ids(n)
        .into_iter()
        .map(|id| Ok((id, scale.apply(reflection_unit_runs(n, id)?))))
        .collect()
}

/// Core facets of `c_n x_1 ... x_n` over `[-u, u]^n`.
pub fn reflection_monomial_core_facets(n: usize, u: &Rational, c_n: &Rational) -> Result<HullDescription> {
    let core = reflection_core_runs(n, u, c_n)?
        .into_iter()
        .map(|(id, q)| (id, q.expand().canonical()))
        .collect();
    let trivial = if n >= 3 {
        let mut t: Vec<LinIneq> = (0..n)
            .flat_map(|j| [LinIneq::lower_bound(n, j, &-u), LinIneq::upper_bound(n, j, u)])
            .collect();
        t.sort();
        t
    } else {
        Vec::new()
    };
    Ok(HullDescription::assemble(FamilyTag::ReflectionMonomial, core, trivial))
}

fn reflection_instance(f: &SymmetricPoly, bx: &BoxDomain) -> Option<Rational> {
    let c = f.monomial_coeff()?;
    (*bx.ell() == -bx.u()).then(|| c.clone())
}

/// Closed-form hull for whichever family applies.
pub fn family_hull(f: &SymmetricPoly, bx: &BoxDomain) -> Result<HullDescription> {
    check_dim(f.n(), bx.n())?;
    if let Some(c) = reflection_instance(f, bx) {
        return reflection_monomial_core_facets(f.n(), bx.u(), &c);
    }
    if supermodular_orientation(f, bx)?.is_some() {
        return supermodular_core_facets(f, bx);
    }
    if f.monomial_coeff().is_some() && bx.ell().is_negative() && bx.u().is_positive() {
        return Err(HullError::OpenProblem(
            "monomials over sign-mixed boxes with ell != -u have no known hull".into(),
        ));
    }
    Err(HullError::Unsupported(
        "polynomial is neither supermodular nor submodular and is not a reflection-symmetric monomial"
            .into(),
    ))
}

/// The inequality a family facet denotes for this instance.
pub fn family_facet_ineq(id: FamilyFacet, f: &SymmetricPoly, bx: &BoxDomain) -> Result<LinIneq> {
    check_dim(f.n(), bx.n())?;
    let n = f.n();
    match id {
        FamilyFacet::Res1 | FamilyFacet::Res2 { .. } => {
            let negated = supermodular_orientation(f, bx)?.ok_or(HullError::NotSupermodular)?;
            let g = if negated { f.negated() } else { f.clone() };
            let mvals = simplex_values(&g, bx)?;
            let q = match id {
                FamilyFacet::Res2 { k } if (1..=n).contains(&k) => res2(&mvals, bx, k),
                FamilyFacet::Res2 { k } => return Err(HullError::IndexOutOfRange { k, n }),
                _ => res1(&mvals, bx),
            };
            Ok(if negated { flip(q) } else { q }.canonical())
        }
        _ => {
            let c = reflection_instance(f, bx).ok_or_else(|| {
                HullError::Unsupported("not a monomial over a box [-u, u]^n".into())
            })?;
            check_reflection_args(n, bx.u(), &c)?;
            Ok(RunScale::new(n, bx.u(), &c)
                .apply(reflection_unit_runs(n, id)?)
                .expand()
                .canonical())
        }
    }
}

/// Counts of entries at `u` and at `ell`.
fn bound_counts(x: &[Rational], bx: &BoxDomain) -> (usize, usize) {
    let at_u = x.iter().filter(|v| *v == bx.u()).count();
    let at_l = x.iter().filter(|v| *v == bx.ell()).count();
    (at_u, at_l)
}

/// True when `x = (u, .., u, t, ell, .., ell)` for a single free entry `t`,
/// i.e. `x` lies on an edge `[x^j, x^{j+1}]` of the sorting simplex.
fn on_simplex_edge(x: &[Rational], bx: &BoxDomain) -> bool {
    let lead = x.iter().take_while(|v| *v == bx.u()).count();
    x[(lead + 1).min(x.len())..].iter().all(|v| v == bx.ell())
}

fn is_simplex_vertex(x: &[Rational], bx: &BoxDomain) -> bool {
    let lead = x.iter().take_while(|v| *v == bx.u()).count();
    x[lead..].iter().all(|v| v == bx.ell())
}

/// `r = min{j : x_j < u}` and `s = max{j : x_j > ell}` (zero-based), when both
/// exist.
pub(crate) fn run_window(x: &[Rational], bx: &BoxDomain) -> Option<(usize, usize)> {
    let r = x.iter().position(|v| v < bx.u())?;
    let s = x.iter().rposition(|v| v > bx.ell())?;
    Some((r, s))
}

fn constant_on(beta: &[Rational], r: usize, s: usize) -> bool {
    r > s || beta[r..=s].iter().all(|b| *b == beta[r])
}

/// Convex-side facet tightness from its tight simplex indices: every `x^j`
/// with `j` between the count at `u` and `n` minus the count at `ell` must be
/// tight.
fn res2_tight_by_range(tight: &[bool], at_u: usize, at_l: usize) -> bool {
    let n = tight.len() - 1;
    (at_u..=n - at_l).all(|j| tight[j])
}

/// Same verdict through the extreme tight indices `v`, `w`: at least `v`
/// entries at `u` and at least `n - w` at `ell`.
pub fn res2_tight_by_extent(tight: &[bool], at_u: usize, at_l: usize) -> bool {
    let n = tight.len() - 1;
    match (tight.iter().position(|&t| t), tight.iter().rposition(|&t| t)) {
        (Some(v), Some(w)) => at_u >= v && at_l + w >= n,
        _ => false,
    }
}

/// Decides whether a point of the graph is tight for a family core facet
/// using the combinatorial characterizations, without evaluating the
/// inequality at the point.
pub fn family_tightness(
    id: FamilyFacet,
    point: &GraphPoint,
    f: &SymmetricPoly,
    bx: &BoxDomain,
) -> Result<bool> {
    point.check_in_graph(f, bx)?;
    let n = f.n();
    let x = &point.x;
    match id {
        FamilyFacet::Res1 | FamilyFacet::Res2 { .. } => {
            let negated = supermodular_orientation(f, bx)?.ok_or(HullError::NotSupermodular)?;
            let g = if negated { f.negated() } else { f.clone() };
            let d = simplex_differences(&g, bx)?;
            let strict = d.windows(2).all(|w| w[0] < w[1]);
            let (at_u, at_l) = bound_counts(x, bx);
            match id {
                FamilyFacet::Res1 if strict => Ok(on_simplex_edge(x, bx)),
                FamilyFacet::Res1 => Ok(is_simplex_vertex(x, bx)
                    || run_window(x, bx).is_some_and(|(r, s)| constant_on(&d, r, s))),
                FamilyFacet::Res2 { k } => {
                    if !(1..=n).contains(&k) {
                        return Err(HullError::IndexOutOfRange { k, n });
                    }
                    if strict {
                        Ok(at_u + 1 >= k && at_l + k >= n)
                    } else {
                        let q = family_facet_ineq(id, f, bx)?;
                        let mvals = simplex_values(f, bx)?;
                        let tight: Vec<bool> = validity_slacks(&q, bx, &mvals)?
                            .iter()
                            .map(Zero::is_zero)
                            .collect();
                        Ok(res2_tight_by_range(&tight, at_u, at_l))
                    }
                }
                _ => unreachable!(),
            }
        }
        _ => {
            reflection_instance(f, bx).ok_or_else(|| {
                HullError::Unsupported("not a monomial over a box [-u, u]^n".into())
            })?;
            let unit: Vec<Rational> = x.iter().map(|v| v / bx.u()).collect();
            let one = Rational::one();
            let minus = -Rational::one();
            let ones = unit.iter().filter(|v| **v == one).count();
            let minuses = unit.iter().filter(|v| **v == minus).count();
            let sign_vertex = ones + minuses == n;
            Ok(match id {
                // Unit-form y is the sign pattern's product; c only rescales.
                FamilyFacet::UpperY => sign_vertex && minuses % 2 == 0,
                FamilyFacet::LowerY => sign_vertex && minuses % 2 == 1,
                FamilyFacet::Pair1 => minuses + 1 >= n,
                FamilyFacet::Pair2 => ones + 1 >= n,
                FamilyFacet::Dominate { t } => {
                    if t + 2 > n {
                        return Err(HullError::IndexOutOfRange { k: t, n: n - 2 });
                    }
                    let differing = (0..n)
                        .filter(|&j| unit[j] != if j <= t { one.clone() } else { minus.clone() })
                        .count();
                    differing <= 1
                }
                _ => unreachable!(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::facet::certify_facet;
    use crate::rational::frac;
    use crate::testutil::{arb_box, arb_instance, arb_rational, ints};
    use proptest::prelude::*;

    fn mono(n: usize, c: i64) -> SymmetricPoly {
        SymmetricPoly::monomial(n, int(c)).unwrap()
    }

    fn bx(n: usize, ell: i64, u: i64) -> BoxDomain {
        BoxDomain::new(n, int(ell), int(u)).unwrap()
    }

    fn poly(n: usize, c: &[i64]) -> SymmetricPoly {
        SymmetricPoly::new(n, ints(c)).unwrap()
    }

    #[test]
    fn supermodularity_examples() {
        let r = supermodularity(&mono(3, 1), &bx(3, 1, 2)).unwrap();
        assert!(r.rest0_holds && r.strict && r.coeff_criterion_holds);
        assert_eq!(r.differences, ints(&[1, 2, 4]));
        assert_eq!(r.unitbox_criterion, None);
        let r = supermodularity(&poly(3, &[1, -1]), &bx(3, 0, 1)).unwrap();
        assert!(r.rest0_holds && !r.strict);
        assert_eq!(r.differences, ints(&[0, 1, 1]));
        assert_eq!(r.unitbox_criterion, Some(true));
        let r = supermodularity(&mono(3, 1), &bx(3, -1, 1)).unwrap();
        assert!(!r.rest0_holds);
        assert!(!r.coeff_criterion_holds);
        assert_eq!(r.differences, ints(&[2, -2, 2]));
    }

    #[test]
    fn supermodular_table1_core() {
        let h = supermodular_core_facets(&mono(3, 1), &bx(3, 1, 2)).unwrap();
        assert_eq!(h.family, FamilyTag::Supermodular);
        assert_eq!(h.core_facets[0], LinIneq::new(int(-6), ints(&[1, 2, 4]), int(-1)));
        assert_eq!(h.core_facets[1], LinIneq::new(int(2), ints(&[-1, -1, -1]), int(1)));
        assert_eq!(h.core_facets[2], LinIneq::new(int(6), ints(&[-2, -2, -2]), int(1)));
        assert_eq!(h.core_facets[3], LinIneq::new(int(16), ints(&[-4, -4, -4]), int(1)));
        assert_eq!(h.expanded_nontrivial, BigInt::from(9));
        assert_eq!(h.trivial_facets.len(), 6);
        assert_eq!(h.expanded_count, BigInt::from(15));
    }

    #[test]
    fn supermodular_unit_cube_merges_repeats() {
        let h = supermodular_core_facets(&mono(3, 1), &bx(3, 0, 1)).unwrap();
        assert_eq!(h.core_facets.len(), 3);
        assert_eq!(h.expanded_nontrivial, BigInt::from(5));
        assert_eq!(h.core_ids, vec![FamilyFacet::Res1, FamilyFacet::Res2 { k: 1 }, FamilyFacet::Res2 { k: 3 }]);
        // Only the upper bounds are facets on [0, 1]^3.
        assert_eq!(h.trivial_facets.len(), 3);
        assert!(h.trivial_facets.iter().all(|q| q.beta0 == int(1)));
    }

    #[test]
    fn second_example_family_at_unit_box() {
        // c_2 = 2u - ell, c_3 = -1 at ell = 0, u = 1.
        let h = supermodular_core_facets(&poly(3, &[2, -1]), &bx(3, 0, 1)).unwrap();
        assert_eq!(h.core_facets.len(), 4);
        assert_eq!(h.core_facets[0], LinIneq::new(int(0), ints(&[0, 2, 3]), int(-1)));
    }

    #[test]
    fn submodular_by_negation() {
        let h = supermodular_core_facets(&mono(3, -1), &bx(3, 1, 2)).unwrap();
        assert_eq!(h.family, FamilyTag::Submodular);
        assert_eq!(h.core_facets[0], LinIneq::new(int(-6), ints(&[1, 2, 4]), int(1)));
    }

    #[test]
    fn reflection_examples() {
        let h = reflection_monomial_core_facets(3, &int(2), &int(5)).unwrap();
        assert_eq!(h.core_facets.len(), 6);
        assert_eq!(h.expanded_nontrivial, BigInt::from(10));
        assert_eq!(h.expanded_count, BigInt::from(16));
        assert!(h.core_facets.contains(&LinIneq::new(int(80), ints(&[20, 20, 20]), int(-1))));
        assert!(h.core_facets.contains(&LinIneq::new(int(40), ints(&[0, 0, 0]), int(-1))));
        assert!(h.core_facets.contains(&LinIneq::new(int(40), ints(&[0, 0, 0]), int(1))));

        let h = reflection_monomial_core_facets(3, &int(1), &int(1)).unwrap();
        let expect = [
            LinIneq::new(int(1), ints(&[0, 0, 0]), int(-1)),
            LinIneq::new(int(1), ints(&[0, 0, 0]), int(1)),
            LinIneq::new(int(2), ints(&[1, 1, 1]), int(-1)),
            LinIneq::new(int(2), ints(&[-1, -1, -1]), int(1)),
            LinIneq::new(int(2), ints(&[-1, 1, 1]), int(1)),
            LinIneq::new(int(2), ints(&[-1, -1, 1]), int(-1)),
        ];
        assert_eq!(h.core_facets, expect.to_vec());

        let h = reflection_monomial_core_facets(2, &int(1), &int(1)).unwrap();
        assert_eq!(h.core_facets.len(), 3);
        assert_eq!(h.expanded_count, BigInt::from(4));

        assert!(reflection_monomial_core_facets(3, &int(0), &int(1)).is_err());
        assert!(reflection_monomial_core_facets(3, &int(1), &int(0)).is_err());
    }

    #[test]
    fn dispatch() {
        assert_eq!(
            family_hull(&mono(3, 5), &bx(3, -2, 2)).unwrap().family,
            FamilyTag::ReflectionMonomial
        );
        assert!(matches!(
            family_hull(&mono(3, 1), &bx(3, -1, 2)),
            Err(HullError::OpenProblem(_))
        ));
        // Neither sub- nor supermodular and not a monomial.
        assert!(matches!(
            family_hull(&poly(3, &[1, 3]), &bx(3, -1, 1)),
            Err(HullError::Unsupported(_))
        ));
    }

    #[test]
    fn tightness_examples() {
        let f = mono(3, 1);
        let b = bx(3, 1, 2);
        let p = GraphPoint::on_graph(&f, vec![int(2), frac(3, 2), int(1)]).unwrap();
        assert!(family_tightness(FamilyFacet::Res1, &p, &f, &b).unwrap());
        let g = mono(3, 5);
        let c = bx(3, -2, 2);
        let p = GraphPoint::on_graph(&g, ints(&[2, 2, 0])).unwrap();
        assert!(family_tightness(FamilyFacet::Pair2, &p, &g, &c).unwrap());
        let p = GraphPoint::on_graph(&g, ints(&[0, 0, 0])).unwrap();
        assert!(!family_tightness(FamilyFacet::Pair1, &p, &g, &c).unwrap());
        let off = GraphPoint::new(ints(&[0, 0, 0]), int(1));
        assert!(matches!(
            family_tightness(FamilyFacet::Pair1, &off, &g, &c),
            Err(HullError::NotInGraph(_))
        ));
    }

    #[test]
    fn bound_facets_match_certification() {
        for (f, b) in [
            (mono(3, 1), bx(3, 0, 1)),
            (mono(3, 1), bx(3, 1, 2)),
            (poly(4, &[1, 0, -2]), bx(4, 0, 1)),
            (poly(3, &[2, -1]), bx(3, 0, 1)),
            (mono(2, 1), bx(2, 0, 1)),
        ] {
            let t = trivial_facets(&f, &b).unwrap();
            for j in 0..f.n() {
                for q in [LinIneq::lower_bound(f.n(), j, b.ell()), LinIneq::upper_bound(f.n(), j, b.u())] {
                    let c = certify_facet(&q, &f, &b).unwrap();
                    assert_eq!(c.is_facet, t.contains(&q), "{q} for {f:?} on {b:?}");
                }
            }
        }
    }

    fn grid(b: &BoxDomain) -> Vec<Vec<Rational>> {
        let levels = [b.ell().clone(), b.midpoint(), b.u().clone()];
        let n = b.n();
        (0..3usize.pow(n as u32))
            .map(|mut code| {
                (0..n)
                    .map(|_| {
                        let v = levels[code % 3].clone();
                        code /= 3;
                        v
                    })
                    .collect()
            })
            .collect()
    }

    fn check_family_tightness(f: &SymmetricPoly, b: &BoxDomain) -> std::result::Result<(), TestCaseError> {
        let h = family_hull(f, b).unwrap();
        let mvals = simplex_values(f, b).unwrap();
        for (id, q) in h.core_ids.iter().zip(&h.core_facets) {
            prop_assert_eq!(&family_facet_ineq(*id, f, b).unwrap(), q);
            let tight: Vec<bool> = validity_slacks(q, b, &mvals).unwrap().iter().map(Zero::is_zero).collect();
            for x in grid(b) {
                let p = GraphPoint::on_graph(f, x).unwrap();
                let direct = q.eval(&p.x, &p.y).is_zero();
                prop_assert_eq!(family_tightness(*id, &p, f, b).unwrap(), direct, "{:?} at {:?}", id, p.x);
                if let FamilyFacet::Res2 { .. } = id {
                    let (at_u, at_l) = bound_counts(&p.x, b);
                    prop_assert_eq!(res2_tight_by_extent(&tight, at_u, at_l), direct);
                }
            }
        }
        Ok(())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn coefficient_criterion_matches_differences((f, b) in arb_instance(2..=6)) {
            let r = supermodularity(&f, &b).unwrap();
            prop_assert_eq!(r.coeff_criterion_holds, r.rest0_holds);
        }

        #[test]
        fn unitbox_criterion_matches_differences(f in (2usize..=6).prop_flat_map(crate::testutil::arb_poly)) {
            let b = BoxDomain::new(f.n(), int(0), int(1)).unwrap();
            let r = supermodularity(&f, &b).unwrap();
            prop_assert_eq!(r.unitbox_criterion, Some(r.rest0_holds));
        }

        #[test]
        fn nonnegative_data_is_supermodular(
            n in 2usize..=6,
            c in prop::collection::vec(0i64..=5, 5),
            ell in arb_rational(0, 4),
            w in arb_rational(1, 4),
        ) {
            prop_assume!(c[..n - 1].iter().any(|&v| v != 0));
            let f = SymmetricPoly::new(n, c[..n - 1].iter().map(|&v| int(v)).collect()).unwrap();
            let b = BoxDomain::new(n, ell.clone(), ell + w).unwrap();
            prop_assert!(supermodularity(&f, &b).unwrap().rest0_holds);
        }

        #[test]
        fn quadratics_are_sub_or_supermodular(
            b in (2usize..=6).prop_flat_map(arb_box),
            tau in arb_rational(-5, 5),
        ) {
            prop_assume!(!tau.is_zero());
            let n = b.n();
            let mut c = vec![Rational::zero(); n - 1];
            c[0] = tau;
            let f = SymmetricPoly::new(n, c).unwrap();
            let up = supermodularity(&f, &b).unwrap().rest0_holds;
            let down = supermodularity(&f.negated(), &b).unwrap().rest0_holds;
            prop_assert!(up != down);
        }

        #[test]
        fn emitted_facets_certify((f, b) in arb_instance(2..=5)) {
            if let Ok(h) = family_hull(&f, &b) {
                for q in h.core_facets.iter().chain(&h.trivial_facets) {
                    prop_assert!(certify_facet(q, &f, &b).unwrap().is_facet, "{}", q);
                }
                if h.family != FamilyTag::ReflectionMonomial && supermodularity(&f, &b).unwrap().strict {
                    prop_assert_eq!(h.core_facets.len(), f.n() + 1);
                }
            }
        }

        #[test]
        fn family_tightness_matches_evaluation((f, b) in arb_instance(2..=4)) {
            if family_hull(&f, &b).is_ok() {
                check_family_tightness(&f, &b)?;
            }
        }

        #[test]
        fn reflection_tightness_matches_evaluation(
            n in 2usize..=4,
            u in arb_rational(1, 4),
            c in arb_rational(-4, 4),
        ) {
            prop_assume!(!c.is_zero());
            let f = SymmetricPoly::monomial(n, c).unwrap();
            let b = BoxDomain::new(n, -u.clone(), u).unwrap();
            check_family_tightness(&f, &b)?;
        }
    }

    #[test]
    fn reflection_runs_at_scale() {
        let runs = reflection_core_runs(10_000, &int(1), &int(1)).unwrap();
        assert_eq!(runs.len(), 10_003);
        assert!(runs.iter().all(|(_, q)| q.runs.len() <= 2 && q.n() == 10_000));
    }
}
