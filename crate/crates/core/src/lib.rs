//! Generating functions of permutation classes with finitely many simple
//! permutations, built from substitution decomposition and query-complete
//! property families.

pub mod class;
pub mod eliminate;
pub mod perm;
pub mod pipeline;
pub mod poly;
pub mod property;
pub mod scalar;
pub mod series;
pub mod solver;
pub mod system;

use num_bigint::BigInt;

pub use class::{ClassSpec, SideCondition, SimpleSet};
pub use perm::Permutation;
pub use property::{Property, PropertyUniverse};
pub use system::AlgebraicSystem;

/// Integer power series, the working type for counting.
pub type Series = series::TruncatedSeries<BigInt>;
/// Integer multivariate polynomials.
pub type Poly = poly::MultiPoly<BigInt>;
/// Integer annihilating polynomial in `x` and `f`.
pub type Annihilator = eliminate::AnnihilatorPoly<BigInt>;
/// Solution of a system over the integers.
pub type Solution = solver::Solution<BigInt>;
