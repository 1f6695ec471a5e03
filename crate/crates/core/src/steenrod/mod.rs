//! Reduced power operations on the symmetric-function model and the
//! identities built on them.

mod decompose;
mod descent;
mod power;
mod verify;

pub use decompose::{chern_to_monomial_mod, decompose_chern, decomposition_plan, eligible, split_prime_power, DecompositionCertificate};
pub use descent::{descent_trace, residue, residue_inequality, DescentRow, DescentTrace};
pub use power::{frobenius_power, sq, steenrod_power, PrimeContext};
pub use verify::{
    adem_expansion, bp_leading_coefficient, chern_coefficient_profile, in_sl, sl_ideal_counterexample, verify_adem_instance,
    verify_cartan, verify_sl_ideal, verify_wu, wu_rhs, AdemTerm, SlCounterexample,
};
