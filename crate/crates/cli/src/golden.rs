//! Reference tables embedded as JSON and checked against the facet families.
//!
//! Each row holds an integer-scaled facet, its printed form and the points
//! of the graph where it is tight, as patterns over `x` in which `*` stands
//! for any value in `[ell, u]`. Patterns are compared with direct evaluation
//! on the grid `{ell, (ell + u) / 2, u}^n`.

use std::collections::{BTreeMap, BTreeSet};

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use smphull::rational;
use smphull::{
    certify_facet, family_hull, BoxBounds, BoxDomain, HullError, LinIneq, Rational, SymmetricPoly,
};

use crate::expanded_facets;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
#[value(rename_all = "lowercase")]
pub enum TableId {
    Table1,
    Table2,
    Table3,
    Example3b,
}

const GOLDEN: &[(TableId, &str)] = &[
    (TableId::Table1, include_str!("../golden/table1_l1_u2.json")),
    (TableId::Table1, include_str!("../golden/table1_l2_u5.json")),
    (TableId::Table2, include_str!("../golden/table2_u1.json")),
    (TableId::Table2, include_str!("../golden/table2_u3.json")),
    (TableId::Table3, include_str!("../golden/table3.json")),
    (TableId::Example3b, include_str!("../golden/example3b_l0_u1.json")),
    (TableId::Example3b, include_str!("../golden/example3b_l1_u3.json")),
];

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenRow {
    pub text: String,
    pub ineq: LinIneq,
    pub tight: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct GoldenTable {
    pub table: String,
    pub instance: String,
    pub poly: SymmetricPoly,
    #[serde(rename = "box")]
    pub bx: BoxBounds,
    pub rows: Vec<GoldenRow>,
    /// Valid inequalities that must not be facets.
    pub non_facets: Vec<LinIneq>,
}

pub fn golden_tables(table: TableId) -> smphull::Result<Vec<GoldenTable>> {
    GOLDEN
        .iter()
        .filter(|(id, _)| *id == table)
        .map(|(_, text)| serde_json::from_str(text).map_err(|e| HullError::Parse(e.to_string())))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct TightMismatch {
    pub row: String,
    /// Grid points matched by the table but not tight.
    pub only_in_table: Vec<String>,
    /// Tight grid points the table does not list.
    pub only_by_evaluation: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub instance: String,
    pub pass: bool,
    pub golden_rows: usize,
    pub generated_rows: usize,
    pub nontrivial: usize,
    pub trivial: usize,
    pub missing: Vec<String>,
    pub extra: Vec<String>,
    /// Rows whose printed form differs from the generated facet.
    pub text_mismatches: Vec<String>,
    pub tight_mismatches: Vec<TightMismatch>,
    pub non_facets_certified: usize,
    pub non_facet_failures: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GoldenReport {
    pub table: TableId,
    pub pass: bool,
    pub instances: Vec<InstanceReport>,
}

fn grid(bx: &BoxDomain) -> Vec<Vec<Rational>> {
    let vals = [bx.ell().clone(), bx.midpoint(), bx.u().clone()];
    let mut out = vec![Vec::new()];
    for _ in 0..bx.n() {
        out = out
            .into_iter()
            .flat_map(|p| {
                vals.iter().map(move |v| {
                    let mut q = p.clone();
                    q.push(v.clone());
                    q
                })
            })
            .collect();
    }
    out
}

fn matches(pattern: &[String], x: &[Rational]) -> smphull::Result<bool> {
    for (p, v) in pattern.iter().zip(x) {
        if p != "*" && rational::parse(p)? != *v {
            return Ok(false);
        }
    }
    Ok(pattern.len() == x.len())
}

fn show(x: &[Rational]) -> String {
    let parts: Vec<String> = x.iter().map(rational::to_text).collect();
    format!("({})", parts.join(","))
}

fn check_instance(g: &GoldenTable) -> smphull::Result<InstanceReport> {
    let f = &g.poly;
    let bx = g.bx.with_dim(f.n())?;
    let hull = family_hull(f, &bx)?;
    let generated: BTreeMap<LinIneq, LinIneq> = expanded_facets(&hull, 1 << 16)?
        .into_iter()
        .map(|q| (q.integerized(), q))
        .collect();
    let golden: BTreeMap<LinIneq, &GoldenRow> =
        g.rows.iter().map(|r| (r.ineq.integerized(), r)).collect();

    let missing: Vec<String> = golden
        .iter()
        .filter(|(k, _)| !generated.contains_key(*k))
        .map(|(_, r)| r.text.clone())
        .collect();
    let extra: Vec<String> = generated
        .keys()
        .filter(|k| !golden.contains_key(*k))
        .map(|k| k.to_string())
        .collect();

    let points: Vec<(Vec<Rational>, Rational)> = grid(&bx)
        .into_iter()
        .map(|x| {
            let y = f.eval(&x)?;
            Ok((x, y))
        })
        .collect::<smphull::Result<_>>()?;
    let mut text_mismatches = Vec::new();
    let mut tight_mismatches = Vec::new();
    for (key, row) in &golden {
        if !generated.contains_key(key) {
            continue;
        }
        if key.to_string() != row.text {
            text_mismatches.push(format!("{} vs {}", row.text, key));
        }
        let mut by_table = BTreeSet::new();
        let mut by_eval = BTreeSet::new();
        for (x, y) in &points {
            let mut listed = false;
            for p in &row.tight {
                listed |= matches(p, x)?;
            }
            if listed {
                by_table.insert(show(x));
            }
            if key.eval(x, y) == Rational::from_integer(0.into()) {
                by_eval.insert(show(x));
            }
        }
        if by_table != by_eval {
            tight_mismatches.push(TightMismatch {
                row: row.text.clone(),
                only_in_table: by_table.difference(&by_eval).cloned().collect(),
                only_by_evaluation: by_eval.difference(&by_table).cloned().collect(),
            });
        }
    }

    let mut non_facet_failures = Vec::new();
    for q in &g.non_facets {
        let cert = certify_facet(q, f, &bx)?;
        if !cert.valid || cert.is_facet {
            non_facet_failures.push(q.to_string());
        }
    }

    let trivial = hull.trivial_facets.len();
    let pass = missing.is_empty()
        && extra.is_empty()
        && text_mismatches.is_empty()
        && tight_mismatches.is_empty()
        && non_facet_failures.is_empty()
        && generated.len() == g.rows.len();
    Ok(InstanceReport {
        instance: g.instance.clone(),
        pass,
        golden_rows: g.rows.len(),
        generated_rows: generated.len(),
        nontrivial: generated.len() - trivial,
        trivial,
        missing,
        extra,
        text_mismatches,
        tight_mismatches,
        non_facets_certified: g.non_facets.len() - non_facet_failures.len(),
        non_facet_failures,
    })
}

pub fn golden_check(table: TableId) -> smphull::Result<GoldenReport> {
    let instances = golden_tables(table)?
        .iter()
        .map(check_instance)
        .collect::<smphull::Result<Vec<_>>>()?;
    Ok(GoldenReport {
        table,
        pass: instances.iter().all(|i| i.pass),
        instances,
    })
}
