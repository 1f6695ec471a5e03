//! The monomial-basis model of `H*(BU)`: partitions, products via
//! matchings, and conversion to Chern monomials.

mod chern;
mod matching;
pub mod oracle;
mod partition;
mod symfunc;

pub use chern::{dominated, elementary_to_monomial, monomial_to_elementary, monomial_to_elementary_mod, zero_one_count, ChernPoly};
pub use matching::{enumerate_matchings, matching_coefficient, Block, Matching};
pub use oracle::{expand_oracle, product_oracle};
pub use partition::{parse_partition, partitions_bounded, partitions_of, partitions_up_to, Partition};
pub use symfunc::{mult, mult_monomial, parse_symfunc, power, reduce_mod, SymFunc};
