//! RLT product basis on a general box, the multiplier decomposition of a
//! multilinear polynomial, vertex-based nonnegativity, and tight-point
//! characterization of valid core inequalities.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{HullError, Result};
use crate::model::{
    check_dim, simplex_values, subset_key, BoxDomain, GeneralBox, GraphPoint, LinIneq,
    MultilinearPoly, SymmetricPoly,
};
use crate::oracles::validity_slacks;
use crate::rational::{self, Rational};

pub const DEFAULT_RLT_BUDGET: u64 = 1 << 25;

/// `F_K(x) = prod_{j in K} (x_j - L_j) prod_{j not in K} (U_j - x_j)`.
pub fn fk_eval(k: u64, x: &[Rational], bx: &GeneralBox) -> Result<Rational> {
    let n = bx.n();
    check_dim(n, x.len())?;
    if n < 64 && k >> n != 0 {
        return Err(HullError::InvalidPolynomial(format!(
            "subset {} is not within 1..={n}",
            subset_key(k)
        )));
    }
    Ok((0..n).fold(Rational::one(), |acc, j| {
        if k >> j & 1 == 1 {
            acc * (&x[j] - &bx.lower()[j])
        } else {
            acc * (&bx.upper()[j] - &x[j])
        }
    }))
}

/// `p = sum_K pi_K F_K` with `pi_K = p(x_K) / d_n`, where `x_K` takes `U` on
/// `K` and `L` elsewhere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RltDecomposition {
    pub pi: BTreeMap<u64, Rational>,
    /// `prod_j (U_j - L_j)`.
    pub d_n: Rational,
}

impl RltDecomposition {
    /// `sum_K pi_K F_K(x)`.
    pub fn reconstruct(&self, x: &[Rational], bx: &GeneralBox) -> Result<Rational> {
        let mut acc = Rational::zero();
        for (&k, pi) in &self.pi {
            if !pi.is_zero() {
                acc += pi * fk_eval(k, x, bx)?;
            }
        }
        Ok(acc)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.pi.values().all(|v| !v.is_negative())
    }
}

impl Serialize for RltDecomposition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Pi<'a>(&'a BTreeMap<u64, Rational>);
        impl Serialize for Pi<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, v) in self.0 {
                    m.serialize_entry(&subset_key(*k), &rational::to_text(v))?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("pi", &Pi(&self.pi))?;
        m.serialize_entry("d_n", &rational::to_text(&self.d_n))?;
        m.end()
    }
}

fn vertex_budget(n: usize, budget: u64) -> Result<u64> {
    match (n < 64).then(|| 1u64 << n) {
        Some(c) if c <= budget => Ok(c),
        other => Err(HullError::BudgetExceeded {
            needed: other.map_or_else(|| format!("2^{n}"), |c| c.to_string()),
            budget,
        }),
    }
}

pub fn decompose(p: &MultilinearPoly, bx: &GeneralBox) -> Result<RltDecomposition> {
    decompose_with_budget(p, bx, DEFAULT_RLT_BUDGET)
}

pub fn decompose_with_budget(
    p: &MultilinearPoly,
    bx: &GeneralBox,
    budget: u64,
) -> Result<RltDecomposition> {
    check_dim(bx.n(), p.n())?;
    let count = vertex_budget(bx.n(), budget)?;
    let d_n = bx.volume();
    let pi = (0..count)
        .into_par_iter()
        .map(|k| Ok((k, p.eval(&bx.vertex(k))? / &d_n)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .collect();
    Ok(RltDecomposition { pi, d_n })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonnegVerdict {
    pub nonneg: bool,
    /// Minimizing vertex when the minimum is negative; the lexicographically
    /// greatest one among ties.
    #[serde(serialize_with = "ser_opt_vec")]
    pub witness: Option<Vec<Rational>>,
    #[serde(serialize_with = "ser_rational")]
    pub min_value: Rational,
}

fn ser_opt_vec<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(x) => s.collect_seq(x.iter().map(rational::to_text)),
        None => s.serialize_none(),
    }
}

fn ser_rational<S: Serializer>(v: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::to_text(v))
}

pub fn nonneg_on_box(p: &MultilinearPoly, bx: &GeneralBox) -> Result<NonnegVerdict> {
    nonneg_on_box_with_budget(p, bx, DEFAULT_RLT_BUDGET)
}

/// A multilinear polynomial is nonnegative on a box iff it is nonnegative at
/// every vertex.
pub fn nonneg_on_box_with_budget(
    p: &MultilinearPoly,
    bx: &GeneralBox,
    budget: u64,
) -> Result<NonnegVerdict> {
    check_dim(bx.n(), p.n())?;
    let count = vertex_budget(bx.n(), budget)?;
    let (min_value, witness) = (0..count)
        .into_par_iter()
        .map(|k| {
            let x = bx.vertex(k);
            p.eval(&x).map(|v| (v, x))
        })
        .try_reduce_with(|a, b| {
            Ok(match a.0.cmp(&b.0) {
                std::cmp::Ordering::Less => a,
                std::cmp::Ordering::Greater => b,
                std::cmp::Ordering::Equal => {
                    if a.1 >= b.1 {
                        a
                    } else {
                        b
                    }
                }
            })
        })
        .expect("a box has at least one vertex")?;
    let nonneg = !min_value.is_negative();
    Ok(NonnegVerdict {
        nonneg,
        witness: (!nonneg).then_some(witness),
        min_value,
    })
}

/// Which rule decided a [`tight_characterization`] call.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TightRule {
    /// `x` is a vertex of the sorting simplex; decided by its slack.
    SimplexVertex,
    /// Tight at every `x^k`: only the coefficient run matters.
    AllSimplexTight,
    /// Equal coefficients: only the simplex range matters.
    EqualCoefficients,
    General,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TightVerdict {
    pub tight: bool,
    pub rule: TightRule,
    /// Zero-based first entry below `u` and last entry above `ell`.
    pub r: Option<usize>,
    pub s: Option<usize>,
    /// Entries at `u` and at `ell`.
    pub p: usize,
    pub b: usize,
}

/// Tightness of a valid core inequality at a graph point with `x` sorted
/// nonincreasing: tight iff every `x^j` with `p <= j <= n - b` is tight and
/// `beta_r = .. = beta_s`.
pub fn tight_characterization(
    ineq: &LinIneq,
    f: &SymmetricPoly,
    bx: &BoxDomain,
    point: &GraphPoint,
) -> Result<bool> {
    tight_characterization_detail(ineq, f, bx, point).map(|v| v.tight)
}

pub fn tight_characterization_detail(
    ineq: &LinIneq,
    f: &SymmetricPoly,
    bx: &BoxDomain,
    point: &GraphPoint,
) -> Result<TightVerdict> {
    let n = f.n();
    check_dim(n, ineq.n())?;
    if !ineq.is_core() {
        return Err(HullError::NotCore(ineq.to_string()));
    }
    point.check_in_graph(f, bx)?;
    let x = &point.x;
    if x.windows(2).any(|w| w[0] < w[1]) {
        return Err(HullError::NotSorted);
    }
    let mvals = simplex_values(f, bx)?;
    let slacks = validity_slacks(ineq, bx, &mvals)?;
    if slacks.iter().any(Signed::is_negative) {
        return Err(HullError::NotValid);
    }
    let p = x.iter().filter(|v| *v == bx.u()).count();
    let b = x.iter().filter(|v| *v == bx.ell()).count();
    let r = x.iter().position(|v| v < bx.u());
    let s = x.iter().rposition(|v| v > bx.ell());
    let beta = &ineq.beta;
    let verdict = |tight, rule| TightVerdict {
        tight,
        rule,
        r,
        s,
        p,
        b,
    };
    if p + b == n {
        // A sorted box vertex is x^p.
        return Ok(verdict(slacks[p].is_zero(), TightRule::SimplexVertex));
    }
    let (r0, s0) = (r.expect("fractional entry"), s.expect("fractional entry"));
    let run_equal = beta[r0..=s0].iter().all(|v| *v == beta[r0]);
    let range_tight = slacks[p..=n - b].iter().all(Zero::is_zero);
    if slacks.iter().all(Zero::is_zero) {
        return Ok(verdict(run_equal, TightRule::AllSimplexTight));
    }
    if beta.windows(2).all(|w| w[0] == w[1]) {
        return Ok(verdict(range_tight, TightRule::EqualCoefficients));
    }
    Ok(verdict(range_tight && run_equal, TightRule::General))
}
