//! Exact expectations of permutation statistics on products of random
//! elements drawn from a union of conjugacy classes of `S_n`.
//!
//! The engine expands a statistic's class-wise mean in irreducible
//! characters ([`mean::decompose`]), expands the product-count function of
//! the walk the same way ([`walk::b_coefficients`]), and pairs the two
//! ([`walk::expectation`]). Everything is exact rational arithmetic.
//! [`oracle`] holds the independent enumeration, dynamic-programming and
//! Monte Carlo engines used to check it.

pub mod arith;
pub mod character;
pub mod error;
pub mod mean;
pub mod oracle;
pub mod partition;
pub mod perm;
pub mod verify;
pub mod walk;

pub use character::{build_table, character, content, dimension, CharTable};
pub use error::{Error, Result};
pub use mean::{decompose, mean_value, project, CharDecomposition, ClassFunction};
pub use oracle::{monte_carlo, McReport};
pub use partition::{class_size, enumerate_partitions, z_order, Partition, PartitionStats};
pub use perm::{compose, cycle_type, evaluate, Perm, Statistic};
pub use walk::{
    b_coefficients, count_products, expectation, walk_distribution, ExpectationResult,
    GeneratorSet, WalkCoefficients,
};

pub use num::{BigInt, BigRational};
