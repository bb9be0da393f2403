//! Random walks on `S_n` driven by a union of conjugacy classes.
//!
//! With `Γ = Γ₁ ⊎ … ⊎ Γ_k` (each `Γᵢ` the class of type `μᵢ`), the number of
//! `t`-tuples from `Γ` multiplying to a fixed `π` is a class function with
//! character coefficients
//!
//! ```text
//! b_λ(t) = (Σᵢ |Γᵢ| χ^λ(μᵢ))^t / (n! (f^λ)^(t-1))
//! ```
//!
//! and the expectation of a statistic after `t` steps is
//! `n!/|Γ|^t · Σ_λ a_λ b_λ(t)`. Every coefficient is real and rational, so the
//! inner product needs no conjugation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::traits::{One, Zero};
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorial, int_pow, rat, rat_int, rat_pow, serde_rational, to_f64};
use crate::character::{character, dimension};
use crate::error::{Error, Result};
use crate::mean::{decompose, mean_value};
use crate::partition::{class_size, enumerate_partitions, Partition};
use crate::perm::Statistic;

/// A conjugation-invariant generating set: a union of distinct conjugacy classes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    n: usize,
    types: Vec<Partition>,
    sizes: Vec<BigInt>,
    total: BigInt,
    name: Option<&'static str>,
}

impl GeneratorSet {
    pub fn new(n: usize, types: Vec<Partition>) -> Result<Self> {
        if types.is_empty() {
            return Err(Error::InvalidGenerators("no classes given".into()));
        }
        for (i, mu) in types.iter().enumerate() {
            if mu.n() != n {
                return Err(Error::InvalidGenerators(format!("{mu} is not a partition of {n}")));
            }
            if types[..i].contains(mu) {
                return Err(Error::InvalidGenerators(format!("class {mu} listed twice")));
            }
        }
        let sizes: Vec<BigInt> = types.iter().map(class_size).collect();
        let total = sizes.iter().sum();
        Ok(GeneratorSet {
            n,
            types,
            sizes,
            total,
            name: None,
        })
    }

    fn named(mut self, name: &'static str) -> Self {
        self.name = Some(name);
        self
    }

    /// All transpositions, type `(2, 1^{n-2})`.
    pub fn transpositions(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidGenerators("S_n has no transpositions for n < 2".into()));
        }
        Ok(Self::new(n, vec![Partition::transposition(n)])?.named("transpositions"))
    }

    /// All `n`-cycles.
    pub fn ncycles(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidGenerators("n must be positive".into()));
        }
        Ok(Self::new(n, vec![Partition::row(n)])?.named("ncycles"))
    }

    /// Every class whose permutations have exactly one fixed point.
    pub fn one_fixed_point(n: usize) -> Result<Self> {
        let types = enumerate_partitions(n)
            .into_iter()
            .filter(|l| l.multiplicity(1) == 1)
            .collect();
        Ok(Self::new(n, types)?.named("one-fixed-point"))
    }

    /// Parses a named shortcut (`transpositions`, `ncycles`, `one-fixed-point`)
    /// or a `;`-separated list of cycle types such as `"2,2,1;4,1"`.
    pub fn parse(n: usize, text: &str) -> Result<Self> {
        match text.trim() {
            "transpositions" => Self::transpositions(n),
            "ncycles" => Self::ncycles(n),
            "one-fixed-point" => Self::one_fixed_point(n),
            list => {
                let types = list
                    .split(';')
                    .map(Partition::from_str)
                    .collect::<Result<Vec<_>>>()?;
                Self::new(n, types)
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn types(&self) -> &[Partition] {
        &self.types
    }

    pub fn sizes(&self) -> &[BigInt] {
        &self.sizes
    }

    /// `|Γ|`.
    pub fn total(&self) -> &BigInt {
        &self.total
    }

    /// `Σᵢ |Γᵢ| χ^λ(μᵢ)`.
    fn character_sum(&self, lambda: &Partition) -> BigInt {
        self.types
            .iter()
            .zip(&self.sizes)
            .map(|(mu, size)| size * character(lambda, mu).expect("same n"))
            .sum()
    }
}

impl fmt::Display for GeneratorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.name {
            return f.write_str(name);
        }
        for (i, mu) in self.types.iter().enumerate() {
            if i > 0 {
                f.write_str(";")?;
            }
            write!(f, "{mu}")?;
        }
        Ok(())
    }
}

/// Character coefficients `b_λ(t)` of the product-count class function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkCoefficients {
    pub n: usize,
    pub t: u32,
    pub coeffs: BTreeMap<Partition, BigRational>,
}

impl WalkCoefficients {
    /// `n̄_t(μ) = Σ_λ b_λ χ^λ(μ)`.
    pub fn evaluate_at(&self, mu: &Partition) -> BigRational {
        self.coeffs
            .iter()
            .filter(|(_, b)| !b.is_zero())
            .map(|(lambda, b)| b * rat_int(character(lambda, mu).expect("same n")))
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectationResult {
    pub n: usize,
    pub gamma: String,
    pub stat: Statistic,
    pub t: u32,
    #[serde(with = "serde_rational")]
    pub exact: BigRational,
    pub float: f64,
}

impl ExpectationResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("result serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

pub fn b_coefficients(gamma: &GeneratorSet, t: u32) -> WalkCoefficients {
    let n_fact = factorial(gamma.n);
    let coeffs = enumerate_partitions(gamma.n)
        .into_iter()
        .map(|lambda| {
            let f = dimension(&lambda);
            // s^t f / (n! f^t); at t = 0 this is f/n! since 0^0 = 1.
            let numer = int_pow(&gamma.character_sum(&lambda), t) * &f;
            let denom = &n_fact * int_pow(&f, t);
            (lambda, BigRational::new(numer, denom))
        })
        .collect();
    WalkCoefficients {
        n: gamma.n,
        t,
        coeffs,
    }
}

/// Expected value of `stat` on a product of `t` independent uniform elements of `gamma`.
pub fn expectation(gamma: &GeneratorSet, stat: Statistic, t: u32) -> Result<ExpectationResult> {
    let n = gamma.n;
    let a = decompose(stat, n)?;
    let b = b_coefficients(gamma, t);
    let inner: BigRational = a
        .coeffs()
        .iter()
        .map(|(lambda, a_l)| a_l * &b.coeffs[lambda])
        .sum();
    let exact = inner * rat_int(factorial(n)) / rat_int(int_pow(&gamma.total, t));
    if t == 0 {
        assert_eq!(
            exact,
            mean_value(stat, &Partition::column(n))?,
            "zero-step expectation must be the identity's value"
        );
    }
    Ok(ExpectationResult {
        n,
        gamma: gamma.to_string(),
        stat,
        t,
        float: to_f64(&exact),
        exact,
    })
}

/// The displayed closed forms for a walk by uniformly random transpositions.
/// Shares no code with [`expectation`].
pub fn closed_form_transpositions(stat: Statistic, n: usize, t: u32) -> Result<BigRational> {
    if n < 3 {
        return Err(Error::BadN(n));
    }
    let ni = n as i64;
    let r2 = rat_pow(&(rat(1, 1) - rat(2, ni - 1)), t);
    let r4 = rat_pow(&(rat(1, 1) - rat(4, ni - 1)), t);
    let one = BigRational::one();
    Ok(match stat {
        Statistic::Exc => rat(ni - 1, 2) * (one - r2),
        Statistic::Wexc => rat(ni + 1, 2) * (one + rat(ni - 1, ni + 1) * r2),
        Statistic::Des => rat(ni - 1, 2) * (one - rat(2, ni) * r2 - rat(ni - 2, ni) * r4),
        Statistic::Maj => rat(ni * (ni - 1), 4) * (one - rat(2, ni) * r2 - rat(ni - 2, ni) * r4),
        Statistic::Inv => {
            rat(ni * (ni - 1), 4)
                * (one - rat(2 * (ni + 1), 3 * ni) * r2 - rat(ni - 2, 3 * ni) * r4)
        }
        Statistic::Cyc(_) => {
            return Err(Error::UnknownStatistic(format!(
                "no transposition closed form for {stat}"
            )))
        }
    })
}

/// Expected number of `k`-cycles after `t ≥ 1` uniformly random `n`-cycles,
/// `1/k + (-1)^{k(t+1)-1} / (k C(n-1,k)^{t-1})`.
pub fn expected_k_cycles_ncycle_walk(n: usize, k: usize, t: u32) -> Result<BigRational> {
    if k == 0 || k >= n {
        return Err(Error::BadK { k, n });
    }
    if t == 0 {
        return Err(Error::BadSteps);
    }
    let kk = k as i64;
    let sign = if (k * (t as usize + 1) - 1) % 2 == 0 { 1 } else { -1 };
    let denom = rat_int(BigInt::from(k) * int_pow(&binomial(n - 1, k), t - 1));
    Ok(rat(1, kk) + rat(sign, 1) / denom)
}

/// `n̄_t(target)` as an exact rational; an integer whenever the engine is right.
pub fn product_count_rational(
    gamma: &GeneratorSet,
    t: u32,
    target: &Partition,
) -> Result<BigRational> {
    if target.n() != gamma.n {
        return Err(Error::SizeMismatch(gamma.n, target.n()));
    }
    Ok(b_coefficients(gamma, t).evaluate_at(target))
}

/// Number of `t`-tuples from `gamma` whose product equals a fixed permutation
/// of cycle type `target`.
pub fn count_products(gamma: &GeneratorSet, t: u32, target: &Partition) -> Result<BigInt> {
    let v = product_count_rational(gamma, t, target)?;
    assert!(
        v.is_integer() && v >= BigRational::zero(),
        "product count {v} is not a nonnegative integer"
    );
    Ok(v.to_integer())
}

/// Probability that the `t`-step product lies in each class. Zero-probability
/// classes are omitted.
pub fn walk_distribution(gamma: &GeneratorSet, t: u32) -> BTreeMap<Partition, BigRational> {
    let b = b_coefficients(gamma, t);
    let paths = rat_int(int_pow(&gamma.total, t));
    let dist: BTreeMap<Partition, BigRational> = enumerate_partitions(gamma.n)
        .into_iter()
        .filter_map(|nu| {
            let prob = rat_int(class_size(&nu)) * b.evaluate_at(&nu) / &paths;
            (!prob.is_zero()).then_some((nu, prob))
        })
        .collect();
    debug_assert!(dist.values().all(|p| *p > BigRational::zero() && *p <= BigRational::one()));
    debug_assert_eq!(dist.values().sum::<BigRational>(), BigRational::one());
    dist
}
