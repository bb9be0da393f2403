//! Fixtures shared by the criterion benchmarks.

use symwalk_core::{GeneratorSet, Statistic};

/// Generator sets benchmarked at each size.
pub fn walks(n: usize) -> Vec<(&'static str, GeneratorSet)> {
    vec![
        ("transpositions", GeneratorSet::transpositions(n).expect("n >= 2")),
        ("ncycles", GeneratorSet::ncycles(n).expect("n >= 1")),
        ("one-fixed-point", GeneratorSet::one_fixed_point(n).expect("n >= 3")),
    ]
}

pub const STATS: [Statistic; 3] = [Statistic::Inv, Statistic::Exc, Statistic::Cyc(2)];
