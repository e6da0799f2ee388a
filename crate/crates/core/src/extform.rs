//! Disjunctive extended formulation over the `n + 1` sorting-simplex blocks:
//! variables `x`, `w^k`, `y`, `v_k`, `lambda_k`, with `x = sum_k w^k`,
//! `y = sum_k v_k` and each block scaled by `lambda_k`.

use std::fmt::Write as _;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{HullError, Result};
use crate::model::{check_dim, simplex_values, BoxDomain, SymmetricPoly};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X(usize),
    W { k: usize, j: usize },
    Y,
    V(usize),
    Lambda(usize),
}

impl Var {
    pub fn index(self, n: usize) -> usize {
        match self {
            Var::X(j) => j,
            Var::W { k, j } => n + k * n + j,
            Var::Y => n + n * (n + 1),
            Var::V(k) => n + n * (n + 1) + 1 + k,
            Var::Lambda(k) => n + n * (n + 1) + 1 + (n + 1) + k,
        }
    }

    pub fn name(self) -> String {
        match self {
            Var::X(j) => format!("x{}", j + 1),
            Var::W { k, j } => format!("w{k}_{}", j + 1),
            Var::Y => "y".into(),
            Var::V(k) => format!("v{k}"),
            Var::Lambda(k) => format!("lambda{k}"),
        }
    }
}

pub fn variable_count(n: usize) -> usize {
    n * n + 4 * n + 3
}

pub fn equality_count(n: usize) -> usize {
    3 * n + 4
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Term {
    pub var: String,
    #[serde(with = "rational::serde_str")]
    pub coef: Rational,
    #[serde(skip)]
    index: usize,
}

/// `sum coef * var (= or >=) rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub name: String,
    pub terms: Vec<Term>,
    #[serde(with = "rational::serde_str")]
    pub rhs: Rational,
}

impl Row {
    fn new(name: String, n: usize, terms: Vec<(Var, Rational)>, rhs: Rational) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, coef)| Term { var: v.name(), coef, index: v.index(n) })
            .collect();
        Row { name, terms, rhs }
    }

    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.terms.iter().map(|t| &t.coef * &values[t.index]).sum()
    }

    /// Scaled by the common denominator of its entries.
    pub fn integerized(&self) -> Row {
        let d = Rational::from_integer(rational::common_denominator(
            self.terms.iter().map(|t| &t.coef).chain(std::iter::once(&self.rhs)),
        ));
        Row {
            name: self.name.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| Term { var: t.var.clone(), coef: &t.coef * &d, index: t.index })
                .collect(),
            rhs: &self.rhs * &d,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedFormulation {
    pub n: usize,
    pub variables: Vec<String>,
    pub equalities: Vec<Row>,
    /// Rows of the form `sum >= rhs`: the block bounds and `lambda >= 0`.
    pub inequalities: Vec<Row>,
}

pub fn build_extform(f: &SymmetricPoly, bx: &BoxDomain) -> Result<ExtendedFormulation> {
    let n = f.n();
    check_dim(n, bx.n())?;
    let mvals = simplex_values(f, bx)?;
    let one = Rational::one;
    let mut variables = vec![String::new(); variable_count(n)];
    let all_vars = (0..n)
        .map(Var::X)
        .chain((0..=n).flat_map(|k| (0..n).map(move |j| Var::W { k, j })))
        .chain(std::iter::once(Var::Y))
        .chain((0..=n).map(Var::V))
        .chain((0..=n).map(Var::Lambda));
    for v in all_vars {
        variables[v.index(n)] = v.name();
    }

    let mut eq = Vec::with_capacity(equality_count(n));
    for j in 0..n {
        let mut terms = vec![(Var::X(j), one())];
        terms.extend((0..=n).map(|k| (Var::W { k, j }, -one())));
        eq.push(Row::new(format!("link_x{}", j + 1), n, terms, Rational::zero()));
    }
    let mut terms = vec![(Var::Y, one())];
    terms.extend((0..=n).map(|k| (Var::V(k), -one())));
    eq.push(Row::new("link_y".into(), n, terms, Rational::zero()));
    eq.push(Row::new(
        "convexity".into(),
        n,
        (0..=n).map(|k| (Var::Lambda(k), one())).collect(),
        one(),
    ));
    for k in 0..=n {
        let total = bx.u() * Rational::from_integer(k.into())
            + bx.ell() * Rational::from_integer((n - k).into());
        let mut terms: Vec<(Var, Rational)> = (0..n).map(|j| (Var::W { k, j }, one())).collect();
        terms.push((Var::Lambda(k), -total));
        eq.push(Row::new(format!("sum_w{k}"), n, terms, Rational::zero()));
    }
    for (k, mk) in mvals.iter().enumerate() {
        eq.push(Row::new(
            format!("value_v{k}"),
            n,
            vec![(Var::V(k), one()), (Var::Lambda(k), -mk.clone())],
            Rational::zero(),
        ));
    }

    let mut ineq = Vec::new();
    for k in 0..=n {
        for j in 0..n {
            let w = Var::W { k, j };
            ineq.push(Row::new(
                format!("lower_w{k}_{}", j + 1),
                n,
                vec![(w, one()), (Var::Lambda(k), -bx.ell().clone())],
                Rational::zero(),
            ));
            ineq.push(Row::new(
                format!("upper_w{k}_{}", j + 1),
                n,
                vec![(w, -one()), (Var::Lambda(k), bx.u().clone())],
                Rational::zero(),
            ));
        }
        ineq.push(Row::new(
            format!("nonneg_lambda{k}"),
            n,
            vec![(Var::Lambda(k), one())],
            Rational::zero(),
        ));
    }
    Ok(ExtendedFormulation { n, variables, equalities: eq, inequalities: ineq })
}

impl ExtendedFormulation {
    /// First violated row, if any.
    pub fn first_violation(&self, values: &[Rational]) -> Option<&Row> {
        if values.len() != self.variables.len() {
            return self.equalities.first();
        }
        self.equalities
            .iter()
            .find(|r| r.lhs(values) != r.rhs)
            .or_else(|| self.inequalities.iter().find(|r| r.lhs(values) < r.rhs))
    }

    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        self.first_violation(values).is_none()
    }

    /// The `(x, y)` part of an assignment.
    pub fn project(&self, values: &[Rational]) -> (Vec<Rational>, Rational) {
        let n = self.n;
        (values[..n].to_vec(), values[Var::Y.index(n)].clone())
    }

    /// Text in the common LP file format, objective zero, every row scaled
    /// to integer coefficients.
    pub fn to_lp(&self) -> String {
        let mut out = String::new();
        out.push_str("Minimize\n obj: 0 x1\nSubject To\n");
        for (rows, sense) in [(&self.equalities, "="), (&self.inequalities, ">=")] {
            for r in rows {
                let r = r.integerized();
                let _ = write!(out, " {}:", r.name);
                for (i, t) in r.terms.iter().enumerate() {
                    if t.coef.is_negative() {
                        out.push_str(" -");
                    } else if i > 0 {
                        out.push_str(" +");
                    }
                    let mag = t.coef.abs();
                    if !mag.is_one() {
                        let _ = write!(out, " {}", rational::to_text(&mag));
                    }
                    let _ = write!(out, " {}", t.var);
                }
                let _ = writeln!(out, " {sense} {}", rational::to_text(&r.rhs));
            }
        }
        out.push_str("Bounds\n");
        for v in &self.variables {
            let _ = writeln!(out, " {v} free");
        }
        out.push_str("End\n");
        out
    }
}

/// The assignment supported on block `k = #{j : x_j = u}`, checked against
/// every row.
pub fn embed_vertex(
    vertex_x: &[Rational],
    f: &SymmetricPoly,
    bx: &BoxDomain,
    form: &ExtendedFormulation,
) -> Result<Vec<Rational>> {
    let n = form.n;
    check_dim(n, vertex_x.len())?;
    if !bx.is_vertex(vertex_x) {
        return Err(HullError::NotBoxVertex(format!("{vertex_x:?}")));
    }
    let k = vertex_x.iter().filter(|v| *v == bx.u()).count();
    let mut values = vec![Rational::zero(); form.variables.len()];
    for (j, xj) in vertex_x.iter().enumerate() {
        values[Var::X(j).index(n)] = xj.clone();
        values[Var::W { k, j }.index(n)] = xj.clone();
    }
    let y = f.eval(vertex_x)?;
    values[Var::Y.index(n)] = y.clone();
    values[Var::V(k).index(n)] = y;
    values[Var::Lambda(k).index(n)] = Rational::one();
    match form.first_violation(&values) {
        None => Ok(values),
        Some(r) => Err(HullError::FormulationViolated(r.name.clone())),
    }
}
