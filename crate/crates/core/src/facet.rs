//! Core representatives, permutation expansion, rank-based facet
//! certification and the simplex-vertex condition battery.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::linalg::Echelon;
use crate::model::{check_dim, simplex_values, BoxDomain, LinIneq, SymmetricPoly};
use crate::oracles::validity_slacks;
use crate::rational::{self, Rational};

pub const DEFAULT_VERTEX_BUDGET: u64 = 1 << 20;

/// Sorted `beta`, then the canonical positive rescaling.
pub fn core_representative(ineq: &LinIneq) -> LinIneq {
    let mut beta = ineq.beta.clone();
    beta.sort();
    LinIneq::new(ineq.beta0.clone(), beta, ineq.beta_prime.clone()).canonical()
}

/// `n! / prod m_i!` for the multiplicities `m_i` of equal entries.
pub fn multiset_permutation_count(values: &[Rational]) -> BigInt {
    let mut sorted: Vec<&Rational> = values.iter().collect();
    sorted.sort();
    let mut count = BigInt::one();
    let mut placed = 0usize;
    let mut i = 0;
    while i < sorted.len() {
        let run = sorted[i..].iter().take_while(|v| **v == sorted[i]).count();
        // Choose positions for this run among the ones filled so far.
        count *= rational::binomial(placed + run, run);
        placed += run;
        i += run;
    }
    count
}

/// Every distinct coordinate permutation of a core inequality, canonical and
/// sorted.
pub fn expand_core(ineq: &LinIneq, cap: u64) -> Result<Vec<LinIneq>> {
    let count = multiset_permutation_count(&ineq.beta);
    if count > BigInt::from(cap) {
        return Err(HullError::CapExceeded {
            count: count.to_string(),
            cap,
        });
    }
    let mut beta = ineq.beta.clone();
    beta.sort();
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    loop {
        out.push(LinIneq::new(ineq.beta0.clone(), beta.clone(), ineq.beta_prime.clone()).canonical());
        if !next_permutation(&mut beta) {
            break;
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Lexicographic successor; false once the sequence is nonincreasing.
fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetCertificate {
    pub valid: bool,
    /// `k` with `L_k + beta' m(x^k) = 0` for the core representative.
    pub tight_simplex_ks: BTreeSet<usize>,
    pub tight_vertex_count: u64,
    /// Tight box vertices, in increasing bitmask order.
    #[serde(with = "rational::serde_vec_vec")]
    pub tight_vertices: Vec<Vec<Rational>>,
    pub affine_rank: usize,
    pub is_facet: bool,
}

/// Tight simplex indices of `ineq` after sorting its coefficients.
pub fn tight_simplex_ks(
    ineq: &LinIneq,
    bx: &BoxDomain,
    mvals: &[Rational],
) -> Result<BTreeSet<usize>> {
    Ok(validity_slacks(ineq, bx, mvals)?
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_zero())
        .map(|(k, _)| k)
        .collect())
}

pub fn certify_facet(ineq: &LinIneq, f: &SymmetricPoly, bx: &BoxDomain) -> Result<FacetCertificate> {
    certify_facet_with_budget(ineq, f, bx, DEFAULT_VERTEX_BUDGET)
}

/// Scans all `2^n` vertices for tightness and decides facetness by the affine
/// rank of the tight lifted vertices.
pub fn certify_facet_with_budget(
    ineq: &LinIneq,
    f: &SymmetricPoly,
    bx: &BoxDomain,
    budget: u64,
) -> Result<FacetCertificate> {
    let n = f.n();
    check_dim(n, ineq.n())?;
    check_dim(n, bx.n())?;
    let total = bx.check_vertex_budget(budget)?;
    let mvals = simplex_values(f, bx)?;
    let slacks = validity_slacks(ineq, bx, &mvals)?;
    let valid = slacks.iter().all(|s| !s.is_negative());
    let tight_ks = slacks
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_zero())
        .map(|(k, _)| k)
        .collect();

    // lhs(mask) = base_k + sum over set bits of (u - ell) beta_j.
    let width = bx.width();
    let step: Vec<Rational> = ineq.beta.iter().map(|b| b * &width).collect();
    let low: Rational = &ineq.beta0 + bx.ell() * ineq.beta.iter().sum::<Rational>();
    let base: Vec<Rational> = mvals.iter().map(|m| &low + &ineq.beta_prime * m).collect();
    let tight_masks: Vec<u64> = (0..total)
        .into_par_iter()
        .filter(|&mask| {
            let mut acc = base[mask.count_ones() as usize].clone();
            for (j, s) in step.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    acc += s;
                }
            }
            acc.is_zero()
        })
        .collect();

    let mut ech = Echelon::new(n + 2);
    let mut tight_vertices = Vec::with_capacity(tight_masks.len());
    for &mask in &tight_masks {
        let x = bx.vertex(mask);
        if !ech.is_full() {
            let mut row = Vec::with_capacity(n + 2);
            row.push(Rational::one());
            row.extend(x.iter().cloned());
            row.push(mvals[mask.count_ones() as usize].clone());
            ech.insert(row);
        }
        tight_vertices.push(x);
    }
    let affine_rank = ech.rank();
    Ok(FacetCertificate {
        valid,
        tight_simplex_ks: tight_ks,
        tight_vertex_count: tight_masks.len() as u64,
        tight_vertices,
        affine_rank,
        is_facet: valid && affine_rank == n + 1,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub tight_simplex_ks: BTreeSet<usize>,
    /// At least two tight simplex vertices, one of them other than `x^0`, `x^n`.
    pub two_tight_with_interior: bool,
    /// With all coefficients equal, the previous flag decides facetness.
    pub equal_coeff_iff: Option<bool>,
    /// With strictly increasing coefficients, facetness means tight at every `x^k`.
    pub distinct_coeff_iff: Option<bool>,
    /// `beta_1 = .. = beta_{r+1}` and `beta_s = .. = beta_n` for the extreme
    /// tight indices `r`, `s`; false when either index is undefined.
    pub run_bounds_ok: bool,
}

pub fn condition_report(ineq: &LinIneq, f: &SymmetricPoly, bx: &BoxDomain) -> Result<ConditionReport> {
    let n = f.n();
    check_dim(n, ineq.n())?;
    check_dim(n, bx.n())?;
    if !ineq.is_core() {
        return Err(HullError::NotCore(ineq.to_string()));
    }
    let mvals = simplex_values(f, bx)?;
    let slacks = validity_slacks(ineq, bx, &mvals)?;
    if slacks.iter().any(Signed::is_negative) {
        return Err(HullError::NotValid);
    }
    let t: BTreeSet<usize> = (0..=n).filter(|&k| slacks[k].is_zero()).collect();
    let two_tight_with_interior = t.len() >= 2 && t.iter().any(|&k| k >= 1 && k < n);
    let beta = &ineq.beta;
    let equal_coeff_iff = beta
        .windows(2)
        .all(|w| w[0] == w[1])
        .then_some(two_tight_with_interior);
    let distinct_coeff_iff = beta
        .windows(2)
        .all(|w| w[0] < w[1])
        .then(|| t.len() == n + 1);
    let r = t.iter().copied().find(|&k| k < n);
    let s = t.iter().copied().rev().find(|&k| k >= 1);
    let run_bounds_ok = match (r, s) {
        (Some(r), Some(s)) => {
            beta[..=r].iter().all(|b| *b == beta[0]) && beta[s - 1..].iter().all(|b| *b == beta[n - 1])
        }
        _ => false,
    };
    Ok(ConditionReport {
        tight_simplex_ks: t,
        two_tight_with_interior,
        equal_coeff_iff,
        distinct_coeff_iff,
        run_bounds_ok,
    })
}

/// True when `a` certifies that `b` is not a facet: either `a`'s simplex
/// values sit below `b`'s everywhere with one strict, or `b`'s ties are ties
/// of `a` and `b`'s tight simplex set is a proper subset of `a`'s.
pub fn dominates(a: &LinIneq, b: &LinIneq, f: &SymmetricPoly, bx: &BoxDomain) -> Result<bool> {
    let n = f.n();
    check_dim(n, a.n())?;
    check_dim(n, b.n())?;
    let a = core_representative(a);
    let b = core_representative(b);
    if a.beta_prime != b.beta_prime {
        return Err(HullError::MismatchedOrientation(format!(
            "beta' differs: {} vs {}",
            rational::to_text(&a.beta_prime),
            rational::to_text(&b.beta_prime)
        )));
    }
    let mvals = simplex_values(f, bx)?;
    let sa = validity_slacks(&a, bx, &mvals)?;
    let sb = validity_slacks(&b, bx, &mvals)?;
    // The slacks differ from L_k by a common beta' m(x^k) term.
    let below = sa.iter().zip(&sb).all(|(x, y)| x <= y) && sa.iter().zip(&sb).any(|(x, y)| x < y);
    if below {
        return Ok(true);
    }
    let ties_refine = (0..n).all(|p| {
        (p + 1..n).all(|q| b.beta[p] != b.beta[q] || a.beta[p] == a.beta[q])
    });
    let ta: BTreeSet<usize> = (0..=n).filter(|&k| sa[k].is_zero()).collect();
    let tb: BTreeSet<usize> = (0..=n).filter(|&k| sb[k].is_zero()).collect();
    Ok(ties_refine && tb.is_subset(&ta) && tb != ta)
}
