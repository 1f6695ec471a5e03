//! Finite graded-commutative algebras and the "induces periodicity"
//! decision procedure.

mod algebra;
mod decide;

pub use algebra::{make_algebra, model, model_catalog, Element, GradedAlgebra, Model, StructureBlock};
pub use decide::{
    candidates, clause_one, cup_condition, cup_map, divide, induces_periodicity, lemma_checks, periodicity_spectrum, Checker,
    LemmaReport, PeriodicityReport, SEARCH_BOUND,
};
