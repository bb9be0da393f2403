//! Ground-truth engines that share nothing with the character machinery
//! beyond the permutation statistics themselves:
//!
//! * exhaustive enumeration of `t`-tuples from `Γ`,
//! * an exact dynamic program over conjugacy classes,
//! * a seeded Monte Carlo sampler.

use std::collections::{BTreeMap, HashMap};

use num::traits::{One, ToPrimitive, Zero};
use num::{BigInt, BigRational};
use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{factorial, int_pow, rat, rat_int, serde_rational, to_f64};
use crate::error::{Error, Result};
use crate::mean::empirical_mean_statistic_bounded;
use crate::partition::{class_size, enumerate_partitions, Partition};
use crate::perm::{
    all_perms, class_members, class_representative, compose, cycle_type, evaluate_unchecked,
    Perm, Statistic,
};
use crate::walk::{expectation, GeneratorSet};

/// Cap on product evaluations for exhaustive enumeration.
pub const BRUTE_FORCE_BUDGET: u128 = 10_000_000;
/// Largest `n` for exhaustive enumeration.
pub const BRUTE_FORCE_MAX_N: usize = 7;
/// Largest `n` for the class-transition dynamic program.
pub const TRANSITION_MAX_N: usize = 8;
/// Random source used by [`monte_carlo`].
pub const RNG_ALGORITHM: &str = "chacha8";
/// Trials are split across this many independent generator streams.
pub const MC_STREAMS: u64 = 64;

/// Every element of `Γ`, class by class.
pub fn generator_elements(gamma: &GeneratorSet) -> Vec<Perm> {
    all_perms(gamma.n())
        .filter(|pi| gamma.types().contains(&cycle_type(pi)))
        .collect()
}

fn check_brute_n(n: usize) -> Result<()> {
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            bound: BRUTE_FORCE_MAX_N,
        });
    }
    Ok(())
}

/// `(1/|Γ|^t) Σ_{(γ₁,…,γ_t) ∈ Γ^t} stat(γ₁⋯γ_t)`.
///
/// Tuples are enumerated one by one while `|Γ|^t` fits the budget. Beyond
/// that the same sum is evaluated by tallying how many tuple prefixes reach
/// each permutation of `S_n`, which costs `t·n!·|Γ|` products and still
/// does not assume that the product distribution is a class function.
pub fn exact_expectation_bruteforce(
    gamma: &GeneratorSet,
    stat: Statistic,
    t: u32,
) -> Result<BigRational> {
    let n = gamma.n();
    check_brute_n(n)?;
    stat.check(n)?;
    let elements = generator_elements(gamma);
    let g = elements.len() as u128;
    let tuples = g.checked_pow(t).unwrap_or(u128::MAX);
    if tuples <= BRUTE_FORCE_BUDGET {
        return Ok(enumerate_tuples(&elements, n, stat, t));
    }
    let tallied = t as u128 * factorial(n).to_u128().unwrap_or(u128::MAX) * g;
    if tallied <= BRUTE_FORCE_BUDGET {
        return Ok(tally_prefixes(&elements, n, stat, t));
    }
    Err(Error::BudgetExceeded {
        needed: tallied.min(tuples),
        budget: BRUTE_FORCE_BUDGET,
    })
}

fn enumerate_tuples(elements: &[Perm], n: usize, stat: Statistic, t: u32) -> BigRational {
    let t = t as usize;
    if t == 0 {
        return rat_int(evaluate_unchecked(stat, &Perm::identity(n)));
    }
    // prefix[d] = γ_{idx[0]} ⋯ γ_{idx[d-1]}
    let mut idx = vec![0usize; t];
    let mut prefix = vec![Perm::identity(n); t + 1];
    for d in 0..t {
        let (head, tail) = prefix.split_at_mut(d + 1);
        head[d].compose_into(&elements[0], &mut tail[0]);
    }
    let mut total: u128 = 0;
    let mut count: u128 = 0;
    loop {
        total += evaluate_unchecked(stat, &prefix[t]) as u128;
        count += 1;
        // advance the odometer from the last position
        let mut d = t;
        loop {
            if d == 0 {
                return BigRational::new(BigInt::from(total), BigInt::from(count));
            }
            d -= 1;
            idx[d] += 1;
            if idx[d] < elements.len() {
                break;
            }
            idx[d] = 0;
        }
        for e in d..t {
            let (head, tail) = prefix.split_at_mut(e + 1);
            head[e].compose_into(&elements[idx[e]], &mut tail[0]);
        }
    }
}

fn tally_prefixes(elements: &[Perm], n: usize, stat: Statistic, t: u32) -> BigRational {
    let mut counts: HashMap<Perm, BigInt> = HashMap::from([(Perm::identity(n), BigInt::one())]);
    let mut scratch = Perm::identity(n);
    for _ in 0..t {
        let mut next: HashMap<Perm, BigInt> = HashMap::with_capacity(counts.len());
        for (prefix, c) in &counts {
            for g in elements {
                prefix.compose_into(g, &mut scratch);
                *next.entry(scratch.clone()).or_insert_with(BigInt::zero) += c;
            }
        }
        counts = next;
    }
    let total: BigInt = counts
        .iter()
        .map(|(pi, c)| c * evaluate_unchecked(stat, pi))
        .sum();
    let paths = int_pow(&BigInt::from(elements.len()), t);
    BigRational::new(total, paths)
}

/// One step of the walk seen on conjugacy classes.
/// `entries[ν][μ] = P(rep(μ)·γ ∈ C_ν)` for uniform `γ ∈ Γ`; columns sum to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub order: Vec<Partition>,
    pub entries: Vec<Vec<BigRational>>,
}

impl TransitionMatrix {
    fn index_of(&self, p: &Partition) -> usize {
        self.order.binary_search(p).expect("partition of n")
    }

    pub fn get(&self, to: &Partition, from: &Partition) -> &BigRational {
        &self.entries[self.index_of(to)][self.index_of(from)]
    }

    /// `M^t δ_{(1^n)}`, omitting zero entries.
    pub fn distribution_after(&self, t: u32) -> BTreeMap<Partition, BigRational> {
        let k = self.order.len();
        let mut v = vec![BigRational::zero(); k];
        v[k - 1] = BigRational::one(); // (1^n) is last in canonical order
        for _ in 0..t {
            let mut next = vec![BigRational::zero(); k];
            for (to, row) in self.entries.iter().enumerate() {
                for (from, m) in row.iter().enumerate() {
                    if !m.is_zero() && !v[from].is_zero() {
                        next[to] += m * &v[from];
                    }
                }
            }
            v = next;
        }
        self.order
            .iter()
            .cloned()
            .zip(v)
            .filter(|(_, p)| !p.is_zero())
            .collect()
    }
}

fn transition_column(
    rep: &Perm,
    elements: &[Perm],
    order: &[Partition],
) -> Vec<BigRational> {
    let mut counts = vec![0u64; order.len()];
    for g in elements {
        let prod = compose(rep, g).expect("same n");
        let at = order.binary_search(&cycle_type(&prod)).expect("partition of n");
        counts[at] += 1;
    }
    let total = elements.len() as i64;
    counts.into_iter().map(|c| rat(c as i64, total)).collect()
}

pub fn class_transition_matrix(gamma: &GeneratorSet) -> Result<TransitionMatrix> {
    let n = gamma.n();
    if n > TRANSITION_MAX_N {
        return Err(Error::TooLarge {
            n,
            bound: TRANSITION_MAX_N,
        });
    }
    let order = enumerate_partitions(n);
    let elements = generator_elements(gamma);
    // conjugating by the rotation i -> i+1 gives a second representative
    let shift = Perm::from_zero_based((0..n).map(|i| (i + 1) % n).collect());
    let shift_inv = shift.inverse();
    let mut columns = Vec::with_capacity(order.len());
    for mu in &order {
        let rep = class_representative(mu);
        let col = transition_column(&rep, &elements, &order);
        let other = compose(&compose(&shift, &rep)?, &shift_inv)?;
        debug_assert_eq!(cycle_type(&other), *mu);
        assert_eq!(
            col,
            transition_column(&other, &elements, &order),
            "transition column for {mu} depends on the representative"
        );
        assert_eq!(col.iter().sum::<BigRational>(), BigRational::one());
        columns.push(col);
    }
    let entries = (0..order.len())
        .map(|to| columns.iter().map(|col| col[to].clone()).collect())
        .collect();
    Ok(TransitionMatrix { order, entries })
}

/// Expectation via the class dynamic program, with per-class means obtained by
/// enumerating `S_n`.
pub fn dp_expectation(gamma: &GeneratorSet, stat: Statistic, t: u32) -> Result<BigRational> {
    let n = gamma.n();
    let means = empirical_mean_statistic_bounded(stat, n, TRANSITION_MAX_N)?;
    let dist = class_transition_matrix(gamma)?.distribution_after(t);
    Ok(dist
        .iter()
        .map(|(nu, p)| p * means.get(nu).expect("every class"))
        .sum())
}

/// Brute force when affordable, otherwise the class dynamic program.
pub fn exact_expectation(gamma: &GeneratorSet, stat: Statistic, t: u32) -> Result<BigRational> {
    match exact_expectation_bruteforce(gamma, stat, t) {
        Err(Error::BudgetExceeded { .. }) | Err(Error::TooLarge { .. }) => {
            dp_expectation(gamma, stat, t)
        }
        other => other,
    }
}

/// Class sizes of the seven sets `T₁ … T₇` that partition `C_λ` for a fixed
/// index pair, plus the number of members with `π(i) > π(j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InversionSplit {
    pub sizes: [u64; 7],
    pub inversions: u64,
}

/// Classifies every `π ∈ C_λ` (one-based `i < j`):
/// `T₁`: i, j fixed; `T₂`: i ↔ j swapped; `T₃`: π(i) = i, i < π(j) < j;
/// `T₄`: π(j) = j, i < π(i) < j; `T₅`: π(i) = j, i < π(j) < j;
/// `T₆`: π(j) = i, i < π(i) < j; `T₇`: everything else.
pub fn inversion_split_bruteforce(lambda: &Partition, i: usize, j: usize) -> Result<InversionSplit> {
    let n = lambda.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::BadIndices { i, j, n });
    }
    check_brute_n(n)?;
    let (a, b) = (i - 1, j - 1);
    let between = |x: usize| a < x && x < b;
    let mut sizes = [0u64; 7];
    let mut inversions = 0;
    for pi in class_members(lambda) {
        let (pa, pb) = (pi.apply(a), pi.apply(b));
        let set = if pa == a && pb == b {
            0
        } else if pa == b && pb == a {
            1
        } else if pa == a && between(pb) {
            2
        } else if pb == b && between(pa) {
            3
        } else if pa == b && between(pb) {
            4
        } else if pb == a && between(pa) {
            5
        } else {
            6
        };
        sizes[set] += 1;
        if pa > pb {
            inversions += 1;
        }
    }
    Ok(InversionSplit { sizes, inversions })
}

/// Closed-form sizes of `T₁ … T₆` in terms of `p`, `q`, `n` and `j - i`.
pub fn inversion_split_closed_form(lambda: &Partition, i: usize, j: usize) -> Result<[BigRational; 6]> {
    let n = lambda.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::BadIndices { i, j, n });
    }
    let st = lambda.stats();
    let (ni, p, q) = (n as i64, st.p as i64, st.q as i64);
    let size = rat_int(class_size(lambda));
    let gap = (j - i - 1) as i64;
    let pair = rat(1, ni * (ni - 1));
    let triple = if gap == 0 {
        BigRational::zero()
    } else {
        rat(gap, ni * (ni - 1) * (ni - 2))
    };
    let t1 = &size * rat(p * (p - 1), 1) * &pair;
    let t2 = &size * rat(2 * q, 1) * &pair;
    let t3 = &size * rat(p * (ni - p), 1) * &triple;
    let t5 = &size * rat(ni - p - 2 * q, 1) * &triple;
    Ok([t1, t2, t3.clone(), t3, t5.clone(), t5])
}

/// Outcome of a seeded Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub trials: u64,
    pub seed: u64,
    pub rng: String,
    #[serde(rename = "mean")]
    pub sample_mean: f64,
    #[serde(rename = "stddev")]
    pub sample_stddev: f64,
    #[serde(rename = "reference", with = "serde_rational")]
    pub reference_exact: BigRational,
    /// `None` when the sample has zero spread but misses the reference.
    #[serde(rename = "z")]
    pub z_score: Option<f64>,
}

impl McReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn within(&self, zmax: f64) -> bool {
        self.z_score.is_some_and(|z| z.abs() < zmax)
    }
}

/// Uniform member of `C_μ`: a uniformly shuffled list of points cut into
/// consecutive cycles of the lengths in `μ`. Each permutation of type `μ`
/// arises from exactly `z_μ` orderings, so no correction is needed.
pub fn sample_class_member<R: Rng + ?Sized>(mu: &Partition, rng: &mut R) -> Perm {
    let n = mu.n();
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(rng);
    let mut images = vec![0; n];
    let mut start = 0;
    for &len in mu.parts() {
        let cycle = &points[start..start + len];
        for (k, &x) in cycle.iter().enumerate() {
            images[x] = cycle[(k + 1) % len];
        }
        start += len;
    }
    Perm::from_zero_based(images)
}

/// Draws uniform elements of `Γ`: a class with probability `|Γᵢ|/|Γ|`, then a
/// uniform member of it.
pub struct GeneratorSampler<'a> {
    gamma: &'a GeneratorSet,
    classes: WeightedIndex<u64>,
}

impl<'a> GeneratorSampler<'a> {
    pub fn new(gamma: &'a GeneratorSet) -> Result<Self> {
        let weights = gamma
            .sizes()
            .iter()
            .map(|s| {
                s.to_u64().ok_or(Error::TooLarge {
                    n: gamma.n(),
                    bound: 20,
                })
            })
            .collect::<Result<Vec<u64>>>()?;
        let classes = WeightedIndex::new(weights).expect("class sizes are positive");
        Ok(GeneratorSampler { gamma, classes })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Perm {
        let mu = &self.gamma.types()[self.classes.sample(rng)];
        sample_class_member(mu, rng)
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Samples `trials` products of `t` uniform elements of `gamma`, and compares
/// the sample mean of `stat` with the exact expectation.
pub fn monte_carlo(
    gamma: &GeneratorSet,
    stat: Statistic,
    t: u32,
    trials: u64,
    seed: u64,
) -> Result<McReport> {
    assert!(trials >= 1, "at least one trial");
    let n = gamma.n();
    let reference = expectation(gamma, stat, t)?.exact;
    let sampler = GeneratorSampler::new(gamma)?;
    let per_stream = |s: u64| trials / MC_STREAMS + u64::from(s < trials % MC_STREAMS);
    let partials: Vec<(u128, u128)> = (0..MC_STREAMS)
        .into_par_iter()
        .map(|s| {
            let mut rng = stream_rng(seed, s);
            let mut scratch = Perm::identity(n);
            let (mut sum, mut sumsq) = (0u128, 0u128);
            for _ in 0..per_stream(s) {
                let mut acc = Perm::identity(n);
                for _ in 0..t {
                    let g = sampler.sample(&mut rng);
                    acc.compose_into(&g, &mut scratch);
                    std::mem::swap(&mut acc, &mut scratch);
                }
                let v = evaluate_unchecked(stat, &acc) as u128;
                sum += v;
                sumsq += v * v;
            }
            (sum, sumsq)
        })
        .collect();
    let (sum, sumsq) = partials
        .iter()
        .fold((0u128, 0u128), |(a, b), (c, d)| (a + c, b + d));
    let trials_big = BigInt::from(trials);
    let mean = BigRational::new(BigInt::from(sum), trials_big.clone());
    let stddev = if trials > 1 {
        // (N Σx² - (Σx)²) / (N (N-1))
        let numer = &trials_big * BigInt::from(sumsq) - BigInt::from(sum) * BigInt::from(sum);
        let var = BigRational::new(numer, &trials_big * (&trials_big - 1));
        to_f64(&var).sqrt()
    } else {
        0.0
    };
    let diff = to_f64(&(&mean - &reference));
    let z = if stddev > 0.0 {
        Some(diff / (stddev / (trials as f64).sqrt()))
    } else if mean == reference {
        Some(0.0)
    } else {
        None
    };
    Ok(McReport {
        trials,
        seed,
        rng: RNG_ALGORITHM.to_string(),
        sample_mean: to_f64(&mean),
        sample_stddev: stddev,
        reference_exact: reference,
        z_score: z,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::walk_distribution;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn brute_force_examples() {
        let g = GeneratorSet::transpositions(3).unwrap();
        assert_eq!(exact_expectation_bruteforce(&g, Statistic::Exc, 1).unwrap(), rat(1, 1));
        let mixed = GeneratorSet::parse(5, "2,2,1;3,1,1").unwrap();
        for stat in Statistic::all_for(5) {
            let id_value = evaluate_unchecked(stat, &Perm::identity(5)) as i64;
            assert_eq!(exact_expectation_bruteforce(&mixed, stat, 0).unwrap(), rat(id_value, 1));
        }
        assert!(matches!(
            exact_expectation_bruteforce(&GeneratorSet::transpositions(8).unwrap(), Statistic::Inv, 1),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn tallying_matches_tuple_enumeration() {
        let g = GeneratorSet::parse(4, "2,1,1;3,1").unwrap();
        let elements = generator_elements(&g);
        for t in 0..=3 {
            for stat in Statistic::all_for(4) {
                assert_eq!(
                    enumerate_tuples(&elements, 4, stat, t),
                    tally_prefixes(&elements, 4, stat, t)
                );
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let g = GeneratorSet::one_fixed_point(7).unwrap();
        assert!(matches!(
            exact_expectation_bruteforce(&g, Statistic::Inv, 6),
            Err(Error::BudgetExceeded { .. })
        ));
        // the fallback still answers
        let e = exact_expectation(&GeneratorSet::one_fixed_point(6).unwrap(), Statistic::Exc, 9).unwrap();
        assert_eq!(e, rat(5, 2));
    }

    #[test]
    fn transition_columns() {
        let g = GeneratorSet::transpositions(3).unwrap();
        let m = class_transition_matrix(&g).unwrap();
        let id = Partition::column(3);
        assert_eq!(m.get(&p("2,1"), &id), &rat(1, 1));
        assert_eq!(m.get(&id, &p("2,1")), &rat(1, 3));
        assert_eq!(m.get(&p("3"), &p("2,1")), &rat(2, 3));
        assert!(m.get(&p("2,1"), &p("2,1")).is_zero());
    }

    #[test]
    fn dp_matches_character_distribution() {
        for n in 2..=6 {
            let mut gammas = vec![
                GeneratorSet::transpositions(n).unwrap(),
                GeneratorSet::ncycles(n).unwrap(),
            ];
            if let Ok(g) = GeneratorSet::one_fixed_point(n) {
                gammas.push(g);
            }
            for g in gammas {
                let m = class_transition_matrix(&g).unwrap();
                for t in 0..=8 {
                    assert_eq!(m.distribution_after(t), walk_distribution(&g, t), "{g} n={n} t={t}");
                }
            }
        }
    }

    #[test]
    fn inversion_split_sizes() {
        for n in 3..=6 {
            for lambda in enumerate_partitions(n) {
                for j in 2..=n {
                    for i in 1..j {
                        let split = inversion_split_bruteforce(&lambda, i, j).unwrap();
                        let closed = inversion_split_closed_form(&lambda, i, j).unwrap();
                        for k in 0..6 {
                            assert_eq!(rat(split.sizes[k] as i64, 1), closed[k]);
                        }
                        let s = split.sizes;
                        assert_eq!(s[6] % 2, 0);
                        assert_eq!(split.inversions, s[1] + s[4] + s[5] + s[6] / 2);
                    }
                }
            }
        }
    }

    #[test]
    fn class_sampler_is_deterministic() {
        let mu = p("3,2,1");
        let mut a = stream_rng(7, 3);
        let mut b = stream_rng(7, 3);
        for _ in 0..100 {
            let x = sample_class_member(&mu, &mut a);
            assert_eq!(cycle_type(&x), mu);
            assert_eq!(x, sample_class_member(&mu, &mut b));
        }
    }

    #[test]
    fn monte_carlo_zero_steps() {
        let g = GeneratorSet::transpositions(5).unwrap();
        let r = monte_carlo(&g, Statistic::Wexc, 0, 1000, 1).unwrap();
        assert_eq!(r.sample_stddev, 0.0);
        assert_eq!(r.sample_mean, 5.0);
        assert_eq!(r.z_score, Some(0.0));
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let g = GeneratorSet::ncycles(6).unwrap();
        let a = monte_carlo(&g, Statistic::Cyc(2), 3, 5000, 42).unwrap();
        let b = monte_carlo(&g, Statistic::Cyc(2), 3, 5000, 42).unwrap();
        assert_eq!(a, b);
        let c = monte_carlo(&g, Statistic::Cyc(2), 3, 5000, 43).unwrap();
        assert_ne!(a.sample_mean, c.sample_mean);
        assert_eq!(McReport::from_json(&a.to_json()).unwrap(), a);
    }
}
