//! Rational projective configurations (Sylvester–Gallai, Hansen and the
//! two-set incidence conditions) and the triangle normal-form classifier.

mod config;
mod search;
mod triangle;

pub use config::{
    collinear, extended_sg_check, hansen_witness, normalize, rational_vector, s2comb_check, span_rank, sylvester_gallai_witness,
    Configuration, HansenWitness, LineViolation, ProjPoint, SgWitness,
};
pub use search::{dimension_bound_search, grid_points, sg_grid_sweep, Conditions, DimensionReport, SearchOutcome, SgSweepReport};
pub use triangle::{
    apply_basis_change, lindep_products_check, normal_form, normal_form_triangle, triangle_axioms_check, triangle_classify, ClassifyOptions, Triangle,
    TriangleClassification, TriangleKind, Vector,
};
