//! Reference hull by brute force: every hyperplane through `n + 1` affinely
//! independent lifted vertices that leaves all vertices on one side.
//!
//! Vertices are first mapped to integer coordinates (`x` to `{0, 1}^n`, `y`
//! shifted and scaled), the scan runs in checked `i128` arithmetic, and the
//! whole scan is repeated with big integers if any operation overflows.

use std::collections::{BTreeMap, HashSet};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HullError, Result};
use crate::facet::core_representative;
use crate::model::{check_dim, BoxDomain, GraphPoint, LinIneq, SymmetricPoly};
use crate::oracles::{SeparationStatus, SeparationVerdict};
use crate::rational::{self, Rational};

pub const MAX_BRUTE_N: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoreMultiplicity {
    pub facet: LinIneq,
    /// Number of distinct permuted copies among the hull facets.
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BruteHull {
    #[serde(skip)]
    pub bx: BoxDomain,
    pub vertices: Vec<GraphPoint>,
    /// Canonical facets, sorted.
    pub facets: Vec<LinIneq>,
    /// Core representatives of the facets with `beta' != 0`, sorted.
    pub core_facets: Vec<CoreMultiplicity>,
}

impl BruteHull {
    pub fn trivial_facets(&self) -> Vec<LinIneq> {
        self.facets.iter().filter(|q| q.beta_prime.is_zero()).cloned().collect()
    }

    pub fn nontrivial_facets(&self) -> Vec<LinIneq> {
        self.facets.iter().filter(|q| !q.beta_prime.is_zero()).cloned().collect()
    }

    pub fn core_set(&self) -> Vec<LinIneq> {
        self.core_facets.iter().map(|c| c.facet.clone()).collect()
    }
}

/// Integer arithmetic used by the scan.
trait Exact: Clone + Eq + Hash + Send + Sync + Sized {
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn signum(&self) -> i32;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn gcd(&self, o: &Self) -> Self;
    fn div_exact(&self, o: &Self) -> Self;
    fn abs(&self) -> Option<Self>;
    /// Whether the value is big enough to be worth dividing out common factors.
    fn is_large(&self) -> bool;
}

impl Exact for i128 {
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn signum(&self) -> i32 {
        i128::signum(*self) as i32
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn abs(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn is_large(&self) -> bool {
        self.unsigned_abs() > 1 << 40
    }
}

impl Exact for BigInt {
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn signum(&self) -> i32 {
        if Signed::is_positive(self) {
            1
        } else if Signed::is_negative(self) {
            -1
        } else {
            0
        }
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn gcd(&self, o: &Self) -> Self {
        Integer::gcd(self, o)
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn abs(&self) -> Option<Self> {
        Some(Signed::abs(self))
    }
    fn is_large(&self) -> bool {
        self.bits() > 40
    }
}

struct Overflow;

fn normalize<T: Exact>(v: &mut [T]) {
    let g = v.iter().fold(T::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && g.to_big() != BigInt::one() {
        for x in v.iter_mut() {
            *x = x.div_exact(&g);
        }
    }
}

/// `a * s - b * t`, entrywise.
fn combine<T: Exact>(a: &[T], s: &T, b: &[T], t: &T) -> Option<Vec<T>> {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.mul(s)?.sub(&y.mul(t)?))
        .collect()
}

/// Integer row echelon form kept as a stack: each row is zero in the pivot
/// columns of the rows below it.
struct IntEchelon<T> {
    rows: Vec<(usize, Vec<T>)>,
}

impl<T: Exact> IntEchelon<T> {
    /// Pushes `v` reduced against the stack; `Ok(false)` when it is dependent.
    fn push(&mut self, v: &[T]) -> std::result::Result<bool, Overflow> {
        let mut v = v.to_vec();
        for (p, r) in &self.rows {
            if !v[*p].is_zero() {
                let vp = v[*p].clone();
                v = combine(&v, &r[*p], r, &vp).ok_or(Overflow)?;
                if v.iter().any(Exact::is_large) {
                    normalize(&mut v);
                }
            }
        }
        let Some(q) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        self.rows.push((q, v));
        Ok(true)
    }

    fn pop(&mut self) {
        self.rows.pop();
    }

    /// The primitive kernel vector when exactly one column is free.
    fn kernel(&self, width: usize) -> std::result::Result<Vec<T>, Overflow> {
        let c = (0..width)
            .find(|c| self.rows.iter().all(|(p, _)| p != c))
            .expect("one free column");
        let mut out = vec![T::zero(); width];
        out[c] = T::from_big(&BigInt::one()).expect("one fits");
        for (p, r) in self.rows.iter().rev() {
            let mut s = T::zero();
            for (j, (a, x)) in r.iter().zip(&out).enumerate() {
                if j != *p && !a.is_zero() && !x.is_zero() {
                    s = s.add(&a.mul(x).ok_or(Overflow)?).ok_or(Overflow)?;
                }
            }
            if s.is_zero() {
                continue;
            }
            let rp = r[*p].abs().ok_or(Overflow)?;
            let d = rp.div_exact(&rp.gcd(&s));
            if d.to_big() != BigInt::one() {
                for x in out.iter_mut() {
                    *x = x.mul(&d).ok_or(Overflow)?;
                }
                s = s.mul(&d).ok_or(Overflow)?;
            }
            out[*p] = s.div_exact(&r[*p]).neg().ok_or(Overflow)?;
        }
        normalize(&mut out);
        Ok(out)
    }
}

struct Scan<'a, T> {
    /// Homogenized integer points `(1, x', y')`.
    pts: &'a [Vec<T>],
    order: &'a [usize],
    target: usize,
}

/// Per-branch search state.
struct Found<T> {
    /// Sign-normalized hyperplanes already tested.
    tested: HashSet<Vec<T>>,
    /// Supporting hyperplanes, oriented `>= 0`.
    facets: HashSet<Vec<T>>,
}

impl<T: Exact> Scan<'_, T> {
    fn dot(a: &[T], b: &[T]) -> Option<T> {
        let mut acc = T::zero();
        for (x, y) in a.iter().zip(b) {
            if !x.is_zero() && !y.is_zero() {
                acc = acc.add(&x.mul(y)?)?;
            }
        }
        Some(acc)
    }

    fn leaf(&self, ech: &IntEchelon<T>, found: &mut Found<T>) -> std::result::Result<(), Overflow> {
        let mut normal = ech.kernel(self.pts[0].len())?;
        let lead = normal.iter().find(|v| !v.is_zero()).expect("nonzero kernel");
        if lead.signum() < 0 {
            normal = negate(&normal)?;
        }
        if !found.tested.insert(normal.clone()) {
            return Ok(());
        }
        let (mut pos, mut neg) = (false, false);
        for p in self.pts {
            match Self::dot(&normal, p).ok_or(Overflow)?.signum() {
                1 => pos = true,
                -1 => neg = true,
                _ => {}
            }
            if pos && neg {
                return Ok(());
            }
        }
        if neg {
            normal = negate(&normal)?;
        }
        found.facets.insert(normal);
        Ok(())
    }

    fn dfs(
        &self,
        start: usize,
        ech: &mut IntEchelon<T>,
        found: &mut Found<T>,
    ) -> std::result::Result<(), Overflow> {
        let depth = ech.rows.len();
        if depth == self.target {
            return self.leaf(ech, found);
        }
        let remaining = self.target - depth;
        for i in start..=self.order.len() - remaining {
            if ech.push(&self.pts[self.order[i]])? {
                let r = self.dfs(i + 1, ech, found);
                ech.pop();
                r?;
            }
        }
        Ok(())
    }

    fn run(&self) -> std::result::Result<Vec<Vec<T>>, Overflow> {
        let m = self.order.len();
        let parts = (0..=m - self.target)
            .into_par_iter()
            .map(|i| {
                let mut ech = IntEchelon { rows: Vec::new() };
                let mut found = Found { tested: HashSet::new(), facets: HashSet::new() };
                ech.push(&self.pts[self.order[i]])?;
                self.dfs(i + 1, &mut ech, &mut found)?;
                Ok(found.facets)
            })
            .collect::<std::result::Result<Vec<_>, Overflow>>()?;
        let mut all: HashSet<Vec<T>> = HashSet::new();
        for p in parts {
            all.extend(p);
        }
        Ok(all.into_iter().collect())
    }
}

fn negate<T: Exact>(v: &[T]) -> std::result::Result<Vec<T>, Overflow> {
    v.iter().map(|x| x.neg()).collect::<Option<Vec<T>>>().ok_or(Overflow)
}

/// Integer images of the lifted vertices plus the data to map normals back.
struct Transformed {
    pts: Vec<Vec<BigInt>>,
    y0: Rational,
    scale: BigInt,
}

fn transform(vertices: &[GraphPoint], bx: &BoxDomain) -> Transformed {
    let y0 = vertices[0].y.clone();
    let shifted: Vec<Rational> = vertices.iter().map(|v| &v.y - &y0).collect();
    let scale = rational::common_denominator(&shifted);
    let pts = vertices
        .iter()
        .zip(&shifted)
        .map(|(v, dy)| {
            let mut row = vec![BigInt::one()];
            row.extend(
                v.x.iter()
                    .map(|xj| if xj == bx.u() { BigInt::one() } else { <BigInt as Zero>::zero() }),
            );
            row.push((dy * Rational::from_integer(scale.clone())).to_integer());
            row
        })
        .collect();
    Transformed { pts, y0, scale }
}

/// `a0 + sum a_j x'_j + a' y' >= 0` back in the original coordinates.
fn map_back(normal: &[BigInt], t: &Transformed, bx: &BoxDomain) -> LinIneq {
    let n = normal.len() - 2;
    let w = bx.width();
    let a: Vec<Rational> = normal.iter().map(|v| Rational::from_integer(v.clone())).collect();
    let beta: Vec<Rational> = a[1..=n].iter().map(|aj| aj / &w).collect();
    let bp = &a[n + 1] * Rational::from_integer(t.scale.clone());
    let beta0 = &a[0] - bx.ell() * beta.iter().sum::<Rational>() - &bp * &t.y0;
    LinIneq::new(beta0, beta, bp).canonical()
}

fn lifted_vertices(f: &SymmetricPoly, bx: &BoxDomain) -> Result<Vec<GraphPoint>> {
    let count = bx.vertex_count().expect("small n");
    (0..count)
        .map(|mask| GraphPoint::on_graph(f, bx.vertex(mask)))
        .collect()
}

pub fn enumerate_hull_facets(f: &SymmetricPoly, bx: &BoxDomain) -> Result<BruteHull> {
    let count = 1usize << f.n().min(MAX_BRUTE_N);
    enumerate_hull_facets_in_order(f, bx, &(0..count).collect::<Vec<_>>())
}

/// Same scan with the vertices visited in `order` (a permutation of
/// `0..2^n`); the result does not depend on it.
pub fn enumerate_hull_facets_in_order(
    f: &SymmetricPoly,
    bx: &BoxDomain,
    order: &[usize],
) -> Result<BruteHull> {
    let n = f.n();
    check_dim(n, bx.n())?;
    if n > MAX_BRUTE_N {
        return Err(HullError::BudgetExceeded {
            needed: format!("C(2^{n}, {}) vertex subsets", n + 1),
            budget: binomial_u64(1 << MAX_BRUTE_N, MAX_BRUTE_N + 1),
        });
    }
    let vertices = lifted_vertices(f, bx)?;
    let mut seen = vec![false; vertices.len()];
    if order.len() != vertices.len() || order.iter().any(|&i| i >= seen.len() || std::mem::replace(&mut seen[i], true)) {
        return Err(HullError::InvalidBox("vertex order is not a permutation".into()));
    }
    let t = transform(&vertices, bx);
    let small: Option<Vec<Vec<i128>>> = t
        .pts
        .iter()
        .map(|row| row.iter().map(|v| v.to_i128()).collect())
        .collect();
    let normals: Vec<Vec<BigInt>> = match small.and_then(|pts| {
        Scan { pts: &pts, order, target: n + 1 }.run().ok()
    }) {
        Some(ns) => ns.iter().map(|v| v.iter().map(|x| x.to_big()).collect()).collect(),
        None => Scan { pts: &t.pts, order, target: n + 1 }
            .run()
            .unwrap_or_else(|_| unreachable!("big integers do not overflow")),
    };
    let mut facets: Vec<LinIneq> = normals.iter().map(|v| map_back(v, &t, bx)).collect();
    facets.sort();
    facets.dedup();
    let mut cores: BTreeMap<LinIneq, usize> = BTreeMap::new();
    for q in facets.iter().filter(|q| !q.beta_prime.is_zero()) {
        *cores.entry(core_representative(q)).or_default() += 1;
    }
    Ok(BruteHull {
        bx: bx.clone(),
        vertices,
        facets,
        core_facets: cores
            .into_iter()
            .map(|(facet, multiplicity)| CoreMultiplicity { facet, multiplicity })
            .collect(),
    })
}

fn binomial_u64(n: usize, k: usize) -> u64 {
    rational::binomial(n, k).to_u64().unwrap_or(u64::MAX)
}

pub fn brute_optimize(alpha: &[Rational], alpha_prime: &Rational, hull: &BruteHull) -> Result<Rational> {
    check_dim(hull.bx.n(), alpha.len())?;
    Ok(hull
        .vertices
        .iter()
        .map(|v| alpha.iter().zip(&v.x).map(|(a, x)| a * x).sum::<Rational>() + alpha_prime * &v.y)
        .max()
        .expect("vertices exist"))
}

/// Checks the box, then every stored facet scaled to `beta' = +-1`; returns
/// the most violated facet, ties going to the first in sorted order.
pub fn brute_separate(point: &GraphPoint, hull: &BruteHull) -> Result<SeparationVerdict> {
    let bx = &hull.bx;
    check_dim(bx.n(), point.x.len())?;
    let n = bx.n();
    for (j, xj) in point.x.iter().enumerate() {
        let (ineq, gap) = if xj < bx.ell() {
            (LinIneq::lower_bound(n, j, bx.ell()), bx.ell() - xj)
        } else if xj > bx.u() {
            (LinIneq::upper_bound(n, j, bx.u()), xj - bx.u())
        } else {
            continue;
        };
        return Ok(SeparationVerdict {
            status: SeparationStatus::ViolatedBound,
            violated: Some(ineq),
            violation: gap,
        });
    }
    let mut best: Option<(Rational, &LinIneq)> = None;
    for q in hull.facets.iter().filter(|q| !q.beta_prime.is_zero()) {
        let lhs = q.eval(&point.x, &point.y);
        if lhs.is_negative() && best.as_ref().is_none_or(|(b, _)| lhs < *b) {
            best = Some((lhs, q));
        }
    }
    Ok(match best {
        None => SeparationVerdict::inside(),
        Some((lhs, q)) => SeparationVerdict {
            status: SeparationStatus::ViolatedFacet,
            violated: Some(q.clone()),
            violation: -lhs,
        },
    })
}

/// Vertex check of an inequality, used as the reference for validity.
pub fn brute_is_valid(ineq: &LinIneq, hull: &BruteHull) -> bool {
    hull.vertices
        .iter()
        .all(|v| !ineq.eval(&v.x, &v.y).is_negative())
}
