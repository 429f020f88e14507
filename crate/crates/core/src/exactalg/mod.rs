//! Exact coefficient arithmetic and sparse linear algebra.

mod field;
mod ring;
mod smith;
mod sparse;

pub use field::{dense_rank, rank, rank_stacked, solve_in_span, ColumnReducer, Insertion};
pub use ring::{is_prime, CoefficientRing, Integers, PrimeField, Rationals, Ring, MAX_PRIME};
pub use smith::{prime_power_factors, smith_normal_form, smith_normal_form_with_transforms, SmithForm};
pub use sparse::{axpy, collect_terms, SparseMatrix, SparseVec};
