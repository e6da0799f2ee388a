//! Polynomial, box and inequality types plus the evaluation primitives the
//! rest of the crate builds on.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{HullError, Result};
use crate::rational::{self, Rational};

/// A symmetric multilinear polynomial `sum_{i=2..n} c_i e_i(x)`, where `e_i`
/// is the i-th elementary symmetric polynomial. Constant and linear terms are
/// not represented.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPoly {
    n: usize,
    /// `coeffs[i]` is the coefficient of degree `i + 2`.
    coeffs: Vec<Rational>,
}

impl SymmetricPoly {
    /// `coeffs` lists `c_2, ..., c_n`.
    pub fn new(n: usize, coeffs: Vec<Rational>) -> Result<Self> {
        if n < 2 {
            return Err(HullError::InvalidPolynomial(format!(
                "need at least 2 variables, got {n}"
            )));
        }
        if coeffs.len() != n - 1 {
            return Err(HullError::DimensionMismatch {
                expected: n - 1,
                found: coeffs.len(),
            });
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(HullError::InvalidPolynomial(
                "the zero polynomial has no nontrivial hull".into(),
            ));
        }
        Ok(Self { n, coeffs })
    }

    /// Builds from a sparse degree map; absent degrees are zero.
    pub fn from_degrees(n: usize, degrees: &BTreeMap<usize, Rational>) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); n.saturating_sub(1)];
        for (&d, c) in degrees {
            if d < 2 || d > n {
                return Err(HullError::InvalidPolynomial(format!(
                    "degree {d} outside 2..={n}"
                )));
            }
            coeffs[d - 2] = c.clone();
        }
        Self::new(n, coeffs)
    }

    pub fn monomial(n: usize, c: Rational) -> Result<Self> {
        let mut coeffs = vec![Rational::zero(); n.saturating_sub(1)];
        if let Some(last) = coeffs.last_mut() {
            *last = c;
        }
        Self::new(n, coeffs)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient of degree `d`; zero outside `2..=n`.
    pub fn coeff(&self, d: usize) -> Rational {
        if d < 2 || d > self.n {
            Rational::zero()
        } else {
            self.coeffs[d - 2].clone()
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `Some(c_n)` when every lower-degree coefficient vanishes.
    pub fn monomial_coeff(&self) -> Option<&Rational> {
        let (last, rest) = self.coeffs.split_last()?;
        rest.iter().all(Zero::is_zero).then_some(last)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        eval_smp(self, x)
    }

    /// Expands into the monomial basis. Exponential in `n`.
    pub fn to_multilinear(&self) -> MultilinearPoly {
        let mut alpha = BTreeMap::new();
        for mask in 0u64..(1u64 << self.n) {
            let c = self.coeff(mask.count_ones() as usize);
            if !c.is_zero() {
                alpha.insert(mask, c);
            }
        }
        MultilinearPoly { n: self.n, alpha }
    }
}

#[derive(Serialize, Deserialize)]
struct SymmetricPolyJson {
    n: usize,
    c: BTreeMap<String, String>,
}

impl Serialize for SymmetricPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let c = (2..=self.n)
            .map(|d| (d.to_string(), rational::to_text(&self.coeff(d))))
            .collect();
        SymmetricPolyJson { n: self.n, c }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymmetricPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SymmetricPolyJson::deserialize(d)?;
        let mut degrees = BTreeMap::new();
        for (k, v) in raw.c {
            let deg: usize = k
                .trim()
                .parse()
                .map_err(|_| D::Error::custom(format!("bad degree key {k:?}")))?;
            degrees.insert(deg, rational::parse(&v).map_err(D::Error::custom)?);
        }
        SymmetricPoly::from_degrees(raw.n, &degrees).map_err(D::Error::custom)
    }
}

/// The symmetric box `[ell, u]^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxDomain {
    n: usize,
    ell: Rational,
    u: Rational,
}

/// Dimension-free JSON form of a [`BoxDomain`]: `{"ell":"-2","u":"2"}`. The
/// dimension comes from the polynomial it is paired with.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxBounds {
    #[serde(with = "rational::serde_str")]
    pub ell: Rational,
    #[serde(with = "rational::serde_str")]
    pub u: Rational,
}

impl BoxBounds {
    pub fn with_dim(&self, n: usize) -> Result<BoxDomain> {
        BoxDomain::new(n, self.ell.clone(), self.u.clone())
    }
}

impl BoxDomain {
    pub fn new(n: usize, ell: Rational, u: Rational) -> Result<Self> {
        if n < 2 {
            return Err(HullError::InvalidBox(format!("need n >= 2, got {n}")));
        }
        if ell >= u {
            return Err(HullError::InvalidBox(format!(
                "need ell < u, got ell = {}, u = {}",
                rational::to_text(&ell),
                rational::to_text(&u)
            )));
        }
        Ok(Self { n, ell, u })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> &Rational {
        &self.ell
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }

    pub fn width(&self) -> Rational {
        &self.u - &self.ell
    }

    pub fn midpoint(&self) -> Rational {
        (&self.u + &self.ell) / rational::int(2)
    }

    /// Same bounds in another dimension.
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        Self::new(n, self.ell.clone(), self.u.clone())
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.n && x.iter().all(|v| *v >= self.ell && *v <= self.u)
    }

    pub fn is_vertex(&self, x: &[Rational]) -> bool {
        x.len() == self.n && x.iter().all(|v| *v == self.ell || *v == self.u)
    }

    /// Vertex whose coordinate `j` is `u` exactly when bit `j` of `mask` is set.
    pub fn vertex(&self, mask: u64) -> Vec<Rational> {
        (0..self.n)
            .map(|j| {
                if mask >> j & 1 == 1 {
                    self.u.clone()
                } else {
                    self.ell.clone()
                }
            })
            .collect()
    }

    /// `2^n`, or `None` when it does not fit in a `u64`.
    pub fn vertex_count(&self) -> Option<u64> {
        (self.n < 64).then(|| 1u64 << self.n)
    }

    pub fn check_vertex_budget(&self, budget: u64) -> Result<u64> {
        match self.vertex_count() {
            Some(c) if c <= budget => Ok(c),
            other => Err(HullError::BudgetExceeded {
                needed: other.map_or_else(|| format!("2^{}", self.n), |c| c.to_string()),
                budget,
            }),
        }
    }

    pub fn bounds(&self) -> BoxBounds {
        BoxBounds {
            ell: self.ell.clone(),
            u: self.u.clone(),
        }
    }

    pub fn to_general(&self) -> GeneralBox {
        GeneralBox {
            lower: vec![self.ell.clone(); self.n],
            upper: vec![self.u.clone(); self.n],
        }
    }
}

/// Per-coordinate box `prod_j [L_j, U_j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GeneralBoxJson")]
pub struct GeneralBox {
    #[serde(rename = "L", with = "rational::serde_vec")]
    lower: Vec<Rational>,
    #[serde(rename = "U", with = "rational::serde_vec")]
    upper: Vec<Rational>,
}

#[derive(Deserialize)]
struct GeneralBoxJson {
    #[serde(rename = "L", with = "rational::serde_vec")]
    lower: Vec<Rational>,
    #[serde(rename = "U", with = "rational::serde_vec")]
    upper: Vec<Rational>,
}

impl TryFrom<GeneralBoxJson> for GeneralBox {
    type Error = HullError;
    fn try_from(raw: GeneralBoxJson) -> Result<Self> {
        GeneralBox::new(raw.lower, raw.upper)
    }
}

impl GeneralBox {
    pub fn new(lower: Vec<Rational>, upper: Vec<Rational>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(HullError::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.is_empty() {
            return Err(HullError::InvalidBox("dimension must be positive".into()));
        }
        if let Some(j) = (0..lower.len()).find(|&j| lower[j] >= upper[j]) {
            return Err(HullError::InvalidBox(format!(
                "need L_{0} < U_{0}",
                j + 1
            )));
        }
        Ok(Self { lower, upper })
    }

    pub fn n(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[Rational] {
        &self.lower
    }

    pub fn upper(&self) -> &[Rational] {
        &self.upper
    }

    /// Vertex with `U_j` on the coordinates in `mask` and `L_j` elsewhere.
    pub fn vertex(&self, mask: u64) -> Vec<Rational> {
        (0..self.n())
            .map(|j| {
                if mask >> j & 1 == 1 {
                    self.upper[j].clone()
                } else {
                    self.lower[j].clone()
                }
            })
            .collect()
    }

    /// `prod_j (U_j - L_j)`.
    pub fn volume(&self) -> Rational {
        self.lower
            .iter()
            .zip(&self.upper)
            .fold(Rational::one(), |acc, (l, u)| acc * (u - l))
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.n()
            && x
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (l, u))| v >= l && v <= u)
    }
}

/// A general multilinear polynomial `sum_J alpha_J prod_{j in J} x_j`, with
/// subsets encoded as bitmasks (bit `j` is variable `j + 1`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultilinearPoly {
    n: usize,
    alpha: BTreeMap<u64, Rational>,
}

impl MultilinearPoly {
    pub fn new(n: usize, terms: impl IntoIterator<Item = (u64, Rational)>) -> Result<Self> {
        if n == 0 || n > 63 {
            return Err(HullError::InvalidPolynomial(format!(
                "variable count {n} outside 1..=63"
            )));
        }
        let mut alpha: BTreeMap<u64, Rational> = BTreeMap::new();
        for (mask, c) in terms {
            if mask >> n != 0 {
                return Err(HullError::InvalidPolynomial(format!(
                    "subset mask {mask:#b} uses variables beyond {n}"
                )));
            }
            *alpha.entry(mask).or_insert_with(Rational::zero) += c;
        }
        alpha.retain(|_, c| !c.is_zero());
        Ok(Self { n, alpha })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<u64, Rational> {
        &self.alpha
    }

    pub fn coeff(&self, mask: u64) -> Rational {
        self.alpha.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational> {
        if x.len() != self.n {
            return Err(HullError::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        let mut acc = Rational::zero();
        for (&mask, c) in &self.alpha {
            let mut term = c.clone();
            for (j, xj) in x.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    term *= xj;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// `beta0 + beta . x + beta' * m(x)`: the left side of an inequality with
    /// `y` replaced by the polynomial.
    pub fn from_inequality_on_graph(ineq: &LinIneq, f: &SymmetricPoly) -> Result<Self> {
        let n = f.n();
        check_dim(n, ineq.n())?;
        let mut terms: Vec<(u64, Rational)> = vec![(0, ineq.beta0.clone())];
        terms.extend(
            ineq.beta
                .iter()
                .enumerate()
                .map(|(j, b)| (1u64 << j, b.clone())),
        );
        if !ineq.beta_prime.is_zero() {
            for (mask, c) in f.to_multilinear().alpha {
                terms.push((mask, c * &ineq.beta_prime));
            }
        }
        Self::new(n, terms)
    }
}

/// `"[1,3]"` style key for a subset bitmask (one-based indices).
pub fn subset_key(mask: u64) -> String {
    let idx: Vec<String> = (0..64)
        .filter(|j| mask >> j & 1 == 1)
        .map(|j| (j + 1).to_string())
        .collect();
    format!("[{}]", idx.join(","))
}

pub fn parse_subset_key(key: &str) -> Result<u64> {
    let bad = || HullError::Parse(format!("bad subset key {key:?}"));
    let inner = key
        .trim()
        .strip_prefix('[')
        .and_then(|k| k.strip_suffix(']'))
        .ok_or_else(bad)?;
    let mut mask = 0u64;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let j: u32 = part.parse().map_err(|_| bad())?;
        if j == 0 || j > 63 {
            return Err(bad());
        }
        mask |= 1 << (j - 1);
    }
    Ok(mask)
}

#[derive(Serialize, Deserialize)]
struct MultilinearJson {
    n: usize,
    alpha: BTreeMap<String, String>,
}

impl Serialize for MultilinearPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let alpha = self
            .alpha
            .iter()
            .map(|(m, c)| (subset_key(*m), rational::to_text(c)))
            .collect();
        MultilinearJson { n: self.n, alpha }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultilinearPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = MultilinearJson::deserialize(d)?;
        let mut terms = Vec::with_capacity(raw.alpha.len());
        for (k, v) in raw.alpha {
            terms.push((
                parse_subset_key(&k).map_err(D::Error::custom)?,
                rational::parse(&v).map_err(D::Error::custom)?,
            ));
        }
        MultilinearPoly::new(raw.n, terms).map_err(D::Error::custom)
    }
}

/// The inequality `beta0 + sum_j beta_j x_j + beta' y >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LinIneq {
    #[serde(with = "rational::serde_str")]
    pub beta0: Rational,
    #[serde(with = "rational::serde_vec")]
    pub beta: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub beta_prime: Rational,
}

impl LinIneq {
    pub fn new(beta0: Rational, beta: Vec<Rational>, beta_prime: Rational) -> Self {
        Self {
            beta0,
            beta,
            beta_prime,
        }
    }

    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// Left-hand side at `(x, y)`.
    pub fn eval(&self, x: &[Rational], y: &Rational) -> Rational {
        debug_assert_eq!(x.len(), self.beta.len());
        let mut acc = self.beta0.clone() + &self.beta_prime * y;
        for (b, v) in self.beta.iter().zip(x) {
            acc += b * v;
        }
        acc
    }

    /// Positive rescaling to the canonical representative: `beta'` becomes
    /// `+1` or `-1` when nonzero; otherwise the coefficients become coprime
    /// integers. Scaling is always by a positive factor, so the half-space is
    /// unchanged.
    pub fn canonical(&self) -> LinIneq {
        if !self.beta_prime.is_zero() {
            let s = self.beta_prime.abs();
            if s.is_one() {
                return self.clone();
            }
            LinIneq {
                beta0: &self.beta0 / &s,
                beta: self.beta.iter().map(|b| b / &s).collect(),
                beta_prime: &self.beta_prime / &s,
            }
        } else {
            self.integerized()
        }
    }

    /// Positive rescaling to coprime integer coefficients.
    pub fn integerized(&self) -> LinIneq {
        let mut all = Vec::with_capacity(self.beta.len() + 2);
        all.push(self.beta0.clone());
        all.extend(self.beta.iter().cloned());
        all.push(self.beta_prime.clone());
        let scaled = rational::primitive_integer_scaling(&all);
        let n = self.beta.len();
        LinIneq {
            beta0: scaled[0].clone(),
            beta: scaled[1..=n].to_vec(),
            beta_prime: scaled[n + 1].clone(),
        }
    }

    pub fn is_canonical(&self) -> bool {
        *self == self.canonical()
    }

    pub fn beta_nondecreasing(&self) -> bool {
        self.beta.windows(2).all(|w| w[0] <= w[1])
    }

    /// Core form: `beta' = +-1` and nondecreasing `beta`.
    pub fn is_core(&self) -> bool {
        (self.beta_prime.is_one() || (-&self.beta_prime).is_one()) && self.beta_nondecreasing()
    }

    pub fn is_zero(&self) -> bool {
        self.beta0.is_zero() && self.beta_prime.is_zero() && self.beta.iter().all(Zero::is_zero)
    }

    /// Coordinates permuted: coefficient `j` of the result is `beta[perm[j]]`.
    pub fn permuted(&self, perm: &[usize]) -> LinIneq {
        LinIneq {
            beta0: self.beta0.clone(),
            beta: perm.iter().map(|&p| self.beta[p].clone()).collect(),
            beta_prime: self.beta_prime.clone(),
        }
    }

    /// `x_j >= ell`, in canonical form (`j` is zero-based).
    pub fn lower_bound(n: usize, j: usize, ell: &Rational) -> LinIneq {
        let mut beta = vec![Rational::zero(); n];
        beta[j] = Rational::one();
        LinIneq::new(-ell, beta, Rational::zero()).canonical()
    }

    /// `x_j <= u`, in canonical form (`j` is zero-based).
    pub fn upper_bound(n: usize, j: usize, u: &Rational) -> LinIneq {
        let mut beta = vec![Rational::zero(); n];
        beta[j] = -Rational::one();
        LinIneq::new(u.clone(), beta, Rational::zero()).canonical()
    }
}

impl fmt::Display for LinIneq {
    /// Human-readable form such as `80 + 20x1 - 20x2 - y >= 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<(Rational, String)> = Vec::new();
        if !self.beta0.is_zero() {
            terms.push((self.beta0.clone(), String::new()));
        }
        for (j, b) in self.beta.iter().enumerate() {
            if !b.is_zero() {
                terms.push((b.clone(), format!("x{}", j + 1)));
            }
        }
        if !self.beta_prime.is_zero() {
            terms.push((self.beta_prime.clone(), "y".into()));
        }
        if terms.is_empty() {
            return write!(f, "0 >= 0");
        }
        for (i, (c, var)) in terms.iter().enumerate() {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if i == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            if var.is_empty() {
                write!(f, "{}", rational::to_text(&mag))?;
            } else if mag.is_one() {
                write!(f, "{var}")?;
            } else {
                write!(f, "{}{var}", rational::to_text(&mag))?;
            }
        }
        write!(f, " >= 0")
    }
}

/// A point `(x, y)` in `R^n x R`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphPoint {
    #[serde(with = "rational::serde_vec")]
    pub x: Vec<Rational>,
    #[serde(with = "rational::serde_str")]
    pub y: Rational,
}

impl GraphPoint {
    pub fn new(x: Vec<Rational>, y: Rational) -> Self {
        Self { x, y }
    }

    /// The graph point above `x`.
    pub fn on_graph(f: &SymmetricPoly, x: Vec<Rational>) -> Result<Self> {
        let y = eval_smp(f, &x)?;
        Ok(Self { x, y })
    }

    /// Membership in `G`: `x` in the box and `y = m(x)`.
    pub fn check_in_graph(&self, f: &SymmetricPoly, bx: &BoxDomain) -> Result<()> {
        check_dim(f.n(), self.x.len())?;
        if !bx.contains(&self.x) {
            return Err(HullError::NotInGraph("x lies outside the box".into()));
        }
        if eval_smp(f, &self.x)? != self.y {
            return Err(HullError::NotInGraph("y differs from m(x)".into()));
        }
        Ok(())
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(HullError::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k > n {
        Err(HullError::IndexOutOfRange { k, n })
    } else {
        Ok(())
    }
}

/// `x^k = (u, ..., u, ell, ..., ell)` with `k` leading copies of `u`.
pub fn simplex_vertex(bx: &BoxDomain, k: usize) -> Result<Vec<Rational>> {
    check_k(k, bx.n())?;
    Ok((0..bx.n())
        .map(|j| if j < k { bx.u.clone() } else { bx.ell.clone() })
        .collect())
}

/// Elementary symmetric polynomials `e_0..e_n` of `x`, from the coefficients
/// of `prod_j (1 + t x_j)`.
pub fn elementary_symmetric(x: &[Rational]) -> Vec<Rational> {
    let mut e = vec![Rational::zero(); x.len() + 1];
    e[0] = Rational::one();
    for (j, xj) in x.iter().enumerate() {
        for i in (1..=j + 1).rev() {
            let add = &e[i - 1] * xj;
            e[i] += add;
        }
    }
    e
}

pub fn eval_smp(f: &SymmetricPoly, x: &[Rational]) -> Result<Rational> {
    check_dim(f.n(), x.len())?;
    let e = elementary_symmetric(x);
    Ok(f.coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| c * &e[i + 2])
        .sum())
}

/// `m(x^k)` from the closed form
/// `e_i(x^k) = sum_a C(k,a) C(n-k,i-a) u^a ell^(i-a)`.
pub fn eval_at_simplex_vertex(f: &SymmetricPoly, bx: &BoxDomain, k: usize) -> Result<Rational> {
    let n = f.n();
    check_dim(n, bx.n())?;
    check_k(k, n)?;
    let upow = powers(&bx.u, n);
    let lpow = powers(&bx.ell, n);
    let bin_k: Vec<BigInt> = (0..=k).map(|a| rational::binomial(k, a)).collect();
    let bin_rest: Vec<BigInt> = (0..=n - k).map(|b| rational::binomial(n - k, b)).collect();
    let mut total = Rational::zero();
    for i in 2..=n {
        let c = f.coeff(i);
        if c.is_zero() {
            continue;
        }
        let mut e = Rational::zero();
        let a_lo = i.saturating_sub(n - k);
        for a in a_lo..=k.min(i) {
            let mult = Rational::from_integer(&bin_k[a] * &bin_rest[i - a]);
            e += mult * &upow[a] * &lpow[i - a];
        }
        total += c * e;
    }
    Ok(total)
}

/// `m(x^k)` for every `k = 0..=n`.
pub fn simplex_values(f: &SymmetricPoly, bx: &BoxDomain) -> Result<Vec<Rational>> {
    (0..=f.n())
        .map(|k| eval_at_simplex_vertex(f, bx, k))
        .collect()
}

fn powers(base: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(Rational::one());
    for i in 1..=n {
        let next = &out[i - 1] * base;
        out.push(next);
    }
    out
}

/// `L_k = beta0 + u sum_{j<=k} beta_j + ell sum_{j>k} beta_j`.
pub fn linear_part(beta0: &Rational, beta: &[Rational], bx: &BoxDomain, k: usize) -> Result<Rational> {
    check_dim(bx.n(), beta.len())?;
    check_k(k, beta.len())?;
    let head: Rational = beta[..k].iter().sum();
    let tail: Rational = beta[k..].iter().sum();
    Ok(beta0 + &bx.u * head + &bx.ell * tail)
}

/// All `L_k` for `k = 0..=n`, via running sums.
pub fn linear_parts(beta0: &Rational, beta: &[Rational], bx: &BoxDomain) -> Result<Vec<Rational>> {
    check_dim(bx.n(), beta.len())?;
    let total: Rational = beta.iter().sum();
    let mut head = Rational::zero();
    let mut out = Vec::with_capacity(beta.len() + 1);
    for k in 0..=beta.len() {
        if k > 0 {
            head += &beta[k - 1];
        }
        let tail = &total - &head;
        out.push(beta0 + &bx.u * &head + &bx.ell * tail);
    }
    Ok(out)
}

/// `L_k + beta' m(x^k)` for every `k`, given precomputed `m(x^k)` values.
pub fn simplex_slacks(ineq: &LinIneq, bx: &BoxDomain, mvals: &[Rational]) -> Result<Vec<Rational>> {
    let lk = linear_parts(&ineq.beta0, &ineq.beta, bx)?;
    Ok(lk
        .into_iter()
        .zip(mvals)
        .map(|(l, m)| l + &ineq.beta_prime * m)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&a| int(a)).collect()
    }

    fn b(ell: i64, u: i64, n: usize) -> BoxDomain {
        BoxDomain::new(n, int(ell), int(u)).unwrap()
    }

    #[test]
    fn simplex_vertex_examples() {
        assert_eq!(simplex_vertex(&b(1, 2, 3), 0).unwrap(), ints(&[1, 1, 1]));
        assert_eq!(simplex_vertex(&b(1, 2, 3), 2).unwrap(), ints(&[2, 2, 1]));
        assert_eq!(simplex_vertex(&b(-2, 2, 3), 3).unwrap(), ints(&[2, 2, 2]));
        assert!(matches!(
            simplex_vertex(&b(1, 2, 3), 4),
            Err(HullError::IndexOutOfRange { k: 4, n: 3 })
        ));
    }

    #[test]
    fn eval_smp_examples() {
        let mono = SymmetricPoly::monomial(3, int(1)).unwrap();
        assert_eq!(eval_smp(&mono, &ints(&[1, 1, 1])).unwrap(), int(1));
        let five = SymmetricPoly::monomial(3, int(5)).unwrap();
        assert_eq!(eval_smp(&five, &ints(&[-2, -2, -2])).unwrap(), int(-40));
        let f = SymmetricPoly::new(3, ints(&[1, -1])).unwrap();
        assert_eq!(eval_smp(&f, &ints(&[1, 1, 1])).unwrap(), int(2));
        assert!(matches!(
            eval_smp(&f, &ints(&[1, 1])),
            Err(HullError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn simplex_value_examples() {
        let mono = SymmetricPoly::monomial(3, int(1)).unwrap();
        let vals = simplex_values(&mono, &b(1, 2, 3)).unwrap();
        assert_eq!(vals, ints(&[1, 2, 4, 8]));
        let f = SymmetricPoly::new(3, ints(&[1, -1])).unwrap();
        assert_eq!(eval_at_simplex_vertex(&f, &b(0, 1, 3), 3).unwrap(), int(2));
        assert_eq!(eval_at_simplex_vertex(&f, &b(0, 1, 3), 0).unwrap(), int(0));
        assert!(eval_at_simplex_vertex(&f, &b(0, 1, 3), 5).is_err());
    }

    #[test]
    fn linear_part_examples() {
        let bx = b(-1, 1, 3);
        assert_eq!(linear_part(&int(0), &ints(&[1, 1, 1]), &bx, 2).unwrap(), int(1));
        assert_eq!(
            linear_part(&int(-6), &ints(&[1, 2, 4]), &b(1, 2, 3), 3).unwrap(),
            int(8)
        );
        assert_eq!(linear_part(&int(2), &ints(&[1, 1, 1]), &bx, 0).unwrap(), int(-1));
        assert!(linear_part(&int(0), &ints(&[1, 1, 1]), &bx, 4).is_err());
        let all = linear_parts(&int(-6), &ints(&[1, 2, 4]), &b(1, 2, 3)).unwrap();
        assert_eq!(all, ints(&[1, 2, 4, 8]));
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert!(SymmetricPoly::new(3, ints(&[0, 0])).is_err());
        assert!(SymmetricPoly::new(1, vec![]).is_err());
        assert!(SymmetricPoly::new(3, ints(&[1])).is_err());
        assert!(BoxDomain::new(3, int(2), int(2)).is_err());
        assert!(GeneralBox::new(ints(&[0, 1]), ints(&[1, 1])).is_err());
    }

    #[test]
    fn canonical_forms() {
        let q = LinIneq::new(int(80), ints(&[20, -20, 20]), int(-5));
        assert_eq!(q.canonical(), LinIneq::new(int(16), ints(&[4, -4, 4]), int(-1)));
        let v = LinIneq::new(frac(-1, 2), vec![frac(1, 4), int(0)], int(0));
        assert_eq!(v.canonical(), LinIneq::new(int(-2), ints(&[1, 0]), int(0)));
        // u - x_1 >= 0 keeps its orientation.
        let ub = LinIneq::upper_bound(2, 0, &int(3));
        assert_eq!(ub, LinIneq::new(int(3), ints(&[-1, 0]), int(0)));
        let t3 = LinIneq::new(int(1), vec![frac(1, 2); 3], frac(-1, 40));
        assert_eq!(t3.integerized(), LinIneq::new(int(40), ints(&[20, 20, 20]), int(-1)));
    }

    #[test]
    fn display_form() {
        let q = LinIneq::new(int(80), ints(&[20, -20, 1]), int(-1));
        assert_eq!(q.to_string(), "80 + 20x1 - 20x2 + x3 - y >= 0");
        let z = LinIneq::new(int(0), ints(&[0, 0]), int(1));
        assert_eq!(z.to_string(), "y >= 0");
    }

    #[test]
    fn json_encodings() {
        let f: SymmetricPoly =
            serde_json::from_str(r#"{"n":3,"c":{"2":"0","3":"1"}}"#).unwrap();
        assert_eq!(f, SymmetricPoly::monomial(3, int(1)).unwrap());
        let q: LinIneq = serde_json::from_str(
            r#"{"beta0":"80","beta":["20","20","20"],"beta_prime":"-1"}"#,
        )
        .unwrap();
        assert_eq!(q.beta0, int(80));
        assert_eq!(
            serde_json::to_string(&q).unwrap(),
            r#"{"beta0":"80","beta":["20","20","20"],"beta_prime":"-1"}"#
        );
        let p: MultilinearPoly = serde_json::from_str(r#"{"n":2,"alpha":{"[1,2]":"1"}}"#).unwrap();
        assert_eq!(p.coeff(0b11), int(1));
        assert_eq!(serde_json::to_string(&p).unwrap(), r#"{"n":2,"alpha":{"[1,2]":"1"}}"#);
        let gb: GeneralBox = serde_json::from_str(r#"{"L":["0","-1"],"U":["1","1/2"]}"#).unwrap();
        assert_eq!(gb.upper()[1], frac(1, 2));
        assert!(serde_json::from_str::<SymmetricPoly>(r#"{"n":3,"c":{"3":"0"}}"#).is_err());
    }
}
