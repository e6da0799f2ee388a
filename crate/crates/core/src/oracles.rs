//! Validity, linear optimization and separation over the hull of the graph,
//! all reduced to the `n + 1` vertices of the sorting simplex.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::model::{
    check_dim, linear_parts, simplex_values, BoxDomain, GraphPoint, LinIneq, SymmetricPoly,
};
use crate::rational::{self, Rational};

/// Validity of `beta0 + beta.x + beta' y >= 0` over the hull: sort `beta`
/// ascending and check the `n + 1` sorting-simplex vertices.
pub fn is_valid(ineq: &LinIneq, f: &SymmetricPoly, bx: &BoxDomain) -> Result<bool> {
    check_dim(f.n(), ineq.n())?;
    check_dim(f.n(), bx.n())?;
    let mvals = simplex_values(f, bx)?;
    Ok(validity_slacks(ineq, bx, &mvals)?
        .iter()
        .all(|s| !s.is_negative()))
}

/// Slack of the sorted form of `ineq` at each `(x^k, m(x^k))`.
pub fn validity_slacks(
    ineq: &LinIneq,
    bx: &BoxDomain,
    mvals: &[Rational],
) -> Result<Vec<Rational>> {
    let mut beta = ineq.beta.clone();
    beta.sort();
    let lk = linear_parts(&ineq.beta0, &beta, bx)?;
    Ok(lk
        .into_iter()
        .zip(mvals)
        .map(|(l, m)| l + &ineq.beta_prime * m)
        .collect())
}

/// Maximizes `alpha.x + alpha' y` over the hull.
///
/// Among maximizers the smallest `k` wins, then the lexicographically
/// smallest vertex.
pub fn optimize(
    alpha: &[Rational],
    alpha_prime: &Rational,
    f: &SymmetricPoly,
    bx: &BoxDomain,
) -> Result<(Rational, GraphPoint)> {
    let n = f.n();
    check_dim(n, alpha.len())?;
    check_dim(n, bx.n())?;
    let mvals = simplex_values(f, bx)?;
    // Descending alpha; among equal entries the later index takes u first so
    // that earlier coordinates stay at ell.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| alpha[b].cmp(&alpha[a]).then(b.cmp(&a)));
    let total: Rational = alpha.iter().sum();
    let mut head = Rational::zero();
    let mut best: Option<(Rational, usize)> = None;
    for k in 0..=n {
        if k > 0 {
            head += &alpha[order[k - 1]];
        }
        let value = bx.u() * &head + bx.ell() * (&total - &head) + alpha_prime * &mvals[k];
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, k));
        }
    }
    let (value, k) = best.expect("k = 0 is always evaluated");
    let mut x = vec![bx.ell().clone(); n];
    for &j in &order[..k] {
        x[j] = bx.u().clone();
    }
    Ok((value, GraphPoint::new(x, mvals[k].clone())))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparationStatus {
    Inside,
    ViolatedBound,
    ViolatedFacet,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparationVerdict {
    pub status: SeparationStatus,
    /// The violated inequality, permuted to the query point and canonical.
    pub violated: Option<LinIneq>,
    /// Magnitude of the negative left-hand side; zero when inside.
    #[serde(with = "rational::serde_str")]
    pub violation: Rational,
}

impl SeparationVerdict {
    pub fn inside() -> Self {
        Self {
            status: SeparationStatus::Inside,
            violated: None,
            violation: Rational::zero(),
        }
    }

    pub fn is_inside(&self) -> bool {
        self.status == SeparationStatus::Inside
    }
}

/// A core inequality with `beta` stored as runs of equal values, so that
/// families with few distinct coefficients can be handled for very large `n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunLengthIneq {
    pub beta0: Rational,
    /// `(value, multiplicity)` in nondecreasing value order.
    pub runs: Vec<(Rational, usize)>,
    pub beta_prime: Rational,
}

impl RunLengthIneq {
    /// Compresses a core inequality.
    pub fn from_core(ineq: &LinIneq) -> Result<Self> {
        if ineq.beta_prime.is_zero() || !ineq.beta_nondecreasing() {
            return Err(HullError::NotCore(ineq.to_string()));
        }
        let mut runs: Vec<(Rational, usize)> = Vec::new();
        for b in &ineq.beta {
            match runs.last_mut() {
                Some((v, c)) if v == b => *c += 1,
                _ => runs.push((b.clone(), 1)),
            }
        }
        Ok(Self {
            beta0: ineq.beta0.clone(),
            runs,
            beta_prime: ineq.beta_prime.clone(),
        })
    }

    pub fn n(&self) -> usize {
        self.runs.iter().map(|(_, c)| c).sum()
    }

    pub fn expand(&self) -> LinIneq {
        let beta = self
            .runs
            .iter()
            .flat_map(|(v, c)| std::iter::repeat_n(v.clone(), *c))
            .collect();
        LinIneq::new(self.beta0.clone(), beta, self.beta_prime.clone())
    }

    /// Rescaled so that `beta' = +-1`.
    fn unit_scaled(&self) -> Self {
        let s = self.beta_prime.abs();
        if s.is_one() {
            return self.clone();
        }
        Self {
            beta0: &self.beta0 / &s,
            runs: self.runs.iter().map(|(v, c)| (v / &s, *c)).collect(),
            beta_prime: &self.beta_prime / &s,
        }
    }
}

/// Unreduced fraction with positive denominator, reduced once at the end.
#[derive(Clone, Debug)]
struct Fraction {
    num: BigInt,
    den: BigInt,
}

impl From<&Rational> for Fraction {
    fn from(r: &Rational) -> Self {
        Self {
            num: r.numer().clone(),
            den: r.denom().clone(),
        }
    }
}

impl Fraction {
    fn add_product(&mut self, a: &Rational, b: &Rational) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let num = a.numer() * b.numer();
        let den = a.denom() * b.denom();
        if den == self.den {
            self.num += num;
        } else {
            self.num = &self.num * &den + num * &self.den;
            self.den *= den;
        }
    }

    fn is_negative(&self) -> bool {
        self.num.is_negative()
    }

    fn cmp(&self, o: &Self) -> Ordering {
        (&self.num * &o.den).cmp(&(&o.num * &self.den))
    }

    fn reduced(self) -> Rational {
        Rational::new(self.num, self.den)
    }
}

/// Query point sorted once, with prefix sums shared by every inequality.
struct SortedPoint<'a> {
    point: &'a GraphPoint,
    /// Coordinate indices by ascending value; ties by index.
    order: Vec<usize>,
    /// `prefix[i]` is the sum of the `i` smallest coordinates.
    prefix: Vec<Rational>,
}

impl<'a> SortedPoint<'a> {
    fn new(point: &'a GraphPoint) -> Self {
        let x = &point.x;
        let mut order: Vec<usize> = (0..x.len()).collect();
        order.sort_by(|&a, &b| x[a].cmp(&x[b]));
        let mut prefix = Vec::with_capacity(x.len() + 1);
        prefix.push(Rational::zero());
        for (i, &j) in order.iter().enumerate() {
            let next = &prefix[i] + &x[j];
            prefix.push(next);
        }
        Self {
            point,
            order,
            prefix,
        }
    }

    /// Minimum of the left-hand side over all coefficient permutations: the
    /// largest coefficient meets the smallest coordinate.
    fn min_lhs(&self, q: &RunLengthIneq) -> Fraction {
        let n = self.order.len();
        let mut acc = Fraction::from(&q.beta0);
        acc.add_product(&q.beta_prime, &self.point.y);
        let mut a = 0;
        for (v, c) in &q.runs {
            let b = a + c;
            // Ascending-beta indices a..b pair with ascending-x positions n-b..n-a.
            let sum = &self.prefix[n - a] - &self.prefix[n - b];
            acc.add_product(v, &sum);
            a = b;
        }
        acc
    }

    /// The permutation of `q` attaining [`Self::min_lhs`].
    fn permuted(&self, q: &RunLengthIneq) -> LinIneq {
        let n = self.order.len();
        let sorted = q.expand();
        let mut beta = vec![Rational::zero(); n];
        for (i, &j) in self.order.iter().enumerate() {
            beta[j] = sorted.beta[n - 1 - i].clone();
        }
        LinIneq::new(q.beta0.clone(), beta, q.beta_prime.clone()).canonical()
    }
}

fn bound_violation(point: &GraphPoint, bx: &BoxDomain) -> Option<SeparationVerdict> {
    let n = point.x.len();
    point.x.iter().enumerate().find_map(|(j, xj)| {
        let (ineq, gap) = if xj < bx.ell() {
            (LinIneq::lower_bound(n, j, bx.ell()), bx.ell() - xj)
        } else if xj > bx.u() {
            (LinIneq::upper_bound(n, j, bx.u()), xj - bx.u())
        } else {
            return None;
        };
        // Canonical bounds have unit coefficient on x_j, so the gap is the
        // violation.
        Some(SeparationVerdict {
            status: SeparationStatus::ViolatedBound,
            violated: Some(ineq),
            violation: gap,
        })
    })
}

/// Separates `point` from the hull using a list of core inequalities.
///
/// Box bounds are checked first. Each core inequality is measured with
/// `beta' = +-1`; the most violated permuted copy is returned, ties going to
/// the earliest list entry. `inside` is exact only when the list holds every
/// core facet.
pub fn separate(
    point: &GraphPoint,
    core_list: &[LinIneq],
    f: &SymmetricPoly,
    bx: &BoxDomain,
) -> Result<SeparationVerdict> {
    check_dim(f.n(), bx.n())?;
    let runs = core_list
        .iter()
        .map(|q| {
            check_dim(f.n(), q.n())?;
            RunLengthIneq::from_core(q)
        })
        .collect::<Result<Vec<_>>>()?;
    separate_runs(point, &runs, bx)
}

/// [`separate`] for run-length inequalities; `O(n log n + total runs)` plus
/// `O(n)` to materialize the returned cut.
pub fn separate_runs(
    point: &GraphPoint,
    core_list: &[RunLengthIneq],
    bx: &BoxDomain,
) -> Result<SeparationVerdict> {
    let n = bx.n();
    check_dim(n, point.x.len())?;
    for q in core_list {
        check_dim(n, q.n())?;
        if q.beta_prime.is_zero() || q.runs.windows(2).any(|w| w[0].0 > w[1].0) {
            return Err(HullError::NotCore(q.expand().to_string()));
        }
    }
    if let Some(v) = bound_violation(point, bx) {
        return Ok(v);
    }
    let sp = SortedPoint::new(point);
    let scaled: Vec<RunLengthIneq> = core_list.iter().map(RunLengthIneq::unit_scaled).collect();
    let best = scaled
        .par_iter()
        .enumerate()
        .map(|(i, q)| (sp.min_lhs(q), i))
        .filter(|(lhs, _)| lhs.is_negative())
        .reduce_with(|a, b| match a.0.cmp(&b.0) {
            Ordering::Less => a,
            Ordering::Greater => b,
            Ordering::Equal => {
                if a.1 <= b.1 {
                    a
                } else {
                    b
                }
            }
        });
    Ok(match best {
        None => SeparationVerdict::inside(),
        Some((lhs, i)) => SeparationVerdict {
            status: SeparationStatus::ViolatedFacet,
            violated: Some(sp.permuted(&scaled[i])),
            violation: -lhs.reduced(),
        },
    })
}
