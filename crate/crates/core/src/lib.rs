//! Convex hulls of graphs of symmetric multilinear polynomials over symmetric
//! boxes, in exact rational arithmetic.
//!
//! The crate covers validity, optimization and separation oracles, facet
//! certification, closed-form facet families for supermodular polynomials and
//! reflection-symmetric monomials, RLT decompositions, a brute-force hull
//! oracle for cross-checking, and the compact extended formulation.

pub mod error;
pub mod extform;
pub mod facet;
pub mod brute;
pub mod families;
pub mod linalg;
pub mod model;
pub mod oracles;
pub mod rational;
pub mod rlt;

#[cfg(test)]
mod testutil;

pub use brute::{
    brute_is_valid, brute_optimize, brute_separate, enumerate_hull_facets,
    enumerate_hull_facets_in_order, BruteHull, CoreMultiplicity,
};
pub use error::{HullError, Result};
pub use extform::{build_extform, embed_vertex, ExtendedFormulation, Row, Term, Var};
pub use facet::{
    certify_facet, certify_facet_with_budget, condition_report, core_representative, dominates,
    expand_core, ConditionReport, FacetCertificate,
};
pub use families::{
    family_facet_ineq, family_hull, family_tightness, reflection_core_runs,
    reflection_monomial_core_facets, supermodular_core_facets, supermodularity, FamilyFacet,
    FamilyTag, HullDescription, SupermodReport,
};
pub use model::{
    eval_at_simplex_vertex, eval_smp, linear_part, linear_parts, simplex_values, simplex_vertex,
    BoxBounds, BoxDomain, GeneralBox, GraphPoint, LinIneq, MultilinearPoly, SymmetricPoly,
};
pub use oracles::{
    is_valid, optimize, separate, separate_runs, RunLengthIneq, SeparationStatus, SeparationVerdict,
};
pub use rational::Rational;
pub use rlt::{
    decompose, decompose_with_budget, fk_eval, nonneg_on_box, nonneg_on_box_with_budget,
    tight_characterization, tight_characterization_detail, NonnegVerdict, RltDecomposition,
    TightRule, TightVerdict,
};
