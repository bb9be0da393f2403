//! The one-shot exact verification suite behind `symwalk verify`.
//!
//! Every check compares two independent routes exactly and reports the first
//! disagreement it finds.

use std::time::{Duration, Instant};

use num::traits::Zero;
use num::{BigInt, BigRational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{binomial, factorial, rat, rat_int};
use crate::character::{build_table, character, content, dimension};
use crate::mean::{
    decompose, empirical_mean_statistic, inversion_count_above, mean_value, project,
};
use crate::oracle::{
    class_transition_matrix, dp_expectation, exact_expectation_bruteforce, generator_elements,
    inversion_split_bruteforce, inversion_split_closed_form,
};
use crate::partition::{class_size, enumerate_partitions, Partition};
use crate::perm::{class_representative, compose, Perm, Statistic};
use crate::walk::{
    b_coefficients, closed_form_transpositions, expectation, expected_k_cycles_ncycle_walk,
    product_count_rational, walk_distribution, GeneratorSet,
};

#[derive(Debug, Clone)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub n: usize,
    pub result: std::result::Result<(), String>,
    pub elapsed: Duration,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.result.is_ok()
    }
}

type Check = fn(usize) -> std::result::Result<(), String>;

/// Named checks with the smallest and largest `n` each one supports.
pub const CHECKS: &[(&str, usize, usize, Check)] = &[
    ("characters", 2, usize::MAX, check_characters),
    ("decomposition", 2, 8, check_decomposition),
    ("inversion-pairs", 3, 7, check_inversion_pairs),
    ("transposition-walk", 3, usize::MAX, check_transposition_walk),
    ("ncycle-walk", 2, usize::MAX, check_ncycle_walk),
    ("one-fixed-point", 3, usize::MAX, check_one_fixed_point),
    ("triple-path", 2, 6, check_triple_path),
    ("factorizations", 3, usize::MAX, check_factorizations),
    ("distribution", 2, 8, check_distribution),
];

/// Runs every check for every supported `n` in `2..=nmax`.
pub fn run_suite(nmax: usize) -> Vec<CheckOutcome> {
    let mut out = Vec::new();
    for &(name, lo, hi, check) in CHECKS {
        for n in lo..=nmax.min(hi) {
            let start = Instant::now();
            let result = check(n);
            out.push(CheckOutcome {
                name,
                n,
                result,
                elapsed: start.elapsed(),
            });
        }
    }
    out
}

fn expect_eq<T: PartialEq + std::fmt::Display>(
    what: impl FnOnce() -> String,
    got: T,
    want: T,
) -> std::result::Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{}: got {got}, expected {want}", what()))
    }
}

fn e2s(e: crate::error::Error) -> String {
    e.to_string()
}

/// Orthogonality, hook values and dimensions, the `(n-1,1)` and `(n-2,1,1)`
/// characters, and hook contents.
pub fn check_characters(n: usize) -> std::result::Result<(), String> {
    let table = build_table(n);
    let sizes: Vec<BigInt> = table.order.iter().map(class_size).collect();
    let k = table.order.len();
    for a in 0..k {
        for b in 0..k {
            let row: BigInt = (0..k).map(|m| &sizes[m] * &table.rows[a][m] * &table.rows[b][m]).sum();
            let want = if a == b { factorial(n) } else { BigInt::zero() };
            expect_eq(|| format!("row orthogonality ({a},{b})"), row, want)?;
            let col: BigInt = (0..k).map(|l| &table.rows[l][a] * &table.rows[l][b]).sum::<BigInt>() * &sizes[a];
            let want = if a == b { factorial(n) } else { BigInt::zero() };
            expect_eq(|| format!("column orthogonality ({a},{b})"), col, want)?;
        }
    }
    let full = Partition::row(n);
    for lambda in &table.order {
        let at_cycle = character(lambda, &full).map_err(e2s)?;
        if !lambda.is_hook() {
            expect_eq(|| format!("χ^{lambda}((n))"), at_cycle, BigInt::zero())?;
        }
    }
    for kk in 0..n {
        let hook = Partition::hook(n, kk);
        let sign = if kk % 2 == 0 { 1 } else { -1 };
        expect_eq(|| format!("χ^{hook}((n))"), character(&hook, &full).map_err(e2s)?, BigInt::from(sign))?;
        expect_eq(|| format!("f^{hook}"), dimension(&hook), binomial(n - 1, kk))?;
        let ni = n as i64;
        expect_eq(
            || format!("c_{hook}"),
            rat_int(content(&hook).map_err(e2s)?),
            rat(ni * (ni - 2 * kk as i64 - 1), 2),
        )?;
    }
    for mu in &table.order {
        let st = mu.stats();
        let p = st.p as i64;
        let q = st.q as i64;
        expect_eq(
            || format!("χ^(n-1,1)({mu})"),
            character(&Partition::hook(n, 1), mu).map_err(e2s)?,
            BigInt::from(p - 1),
        )?;
        if n >= 3 {
            let want = (p - 1) * (p - 2) / 2 - q;
            expect_eq(
                || format!("χ^(n-2,1,1)({mu})"),
                character(&Partition::hook(n, 2), mu).map_err(e2s)?,
                BigInt::from(want),
            )?;
        }
    }
    Ok(())
}

/// Closed-form decompositions against projections of enumerated means.
pub fn check_decomposition(n: usize) -> std::result::Result<(), String> {
    for stat in Statistic::all_for(n) {
        let closed = decompose(stat, n).map_err(e2s)?;
        let oracle = project(&empirical_mean_statistic(stat, n).map_err(e2s)?);
        if closed != oracle {
            return Err(format!("{stat}: closed {} vs oracle {}", closed.to_json(), oracle.to_json()));
        }
    }
    Ok(())
}

/// Inversion counts `I_λ(i,j)` and the seven-set split of each class.
pub fn check_inversion_pairs(n: usize) -> std::result::Result<(), String> {
    for lambda in enumerate_partitions(n) {
        for j in 2..=n {
            for i in 1..j {
                let split = inversion_split_bruteforce(&lambda, i, j).map_err(e2s)?;
                let closed = inversion_split_closed_form(&lambda, i, j).map_err(e2s)?;
                for (k, c) in closed.iter().enumerate() {
                    expect_eq(
                        || format!("#T{} for {lambda} ({i},{j})", k + 1),
                        rat(split.sizes[k] as i64, 1),
                        c.clone(),
                    )?;
                }
                expect_eq(
                    || format!("I_{lambda}({i},{j})"),
                    inversion_count_above(&lambda, i, j).map_err(e2s)?,
                    BigInt::from(split.inversions),
                )?;
            }
        }
    }
    Ok(())
}

pub fn check_transposition_walk(n: usize) -> std::result::Result<(), String> {
    let g = GeneratorSet::transpositions(n).map_err(e2s)?;
    for t in 0..=10 {
        for stat in Statistic::NON_CLASS {
            expect_eq(
                || format!("E_T({stat}, {t})"),
                closed_form_transpositions(stat, n, t).map_err(e2s)?,
                expectation(&g, stat, t).map_err(e2s)?.exact,
            )?;
        }
    }
    Ok(())
}

pub fn check_ncycle_walk(n: usize) -> std::result::Result<(), String> {
    let g = GeneratorSet::ncycles(n).map_err(e2s)?;
    for t in 1..=4 {
        for (lambda, b) in &b_coefficients(&g, t).coeffs {
            if !lambda.is_hook() && !b.is_zero() {
                return Err(format!("b_{lambda}({t}) = {b} on a non-hook"));
            }
        }
        for k in 1..n {
            let engine = expectation(&g, Statistic::Cyc(k), t).map_err(e2s)?.exact / rat(k as i64, 1);
            expect_eq(
                || format!("k-cycles k={k} t={t}"),
                expected_k_cycles_ncycle_walk(n, k, t).map_err(e2s)?,
                engine,
            )?;
        }
    }
    Ok(())
}

pub fn check_one_fixed_point(n: usize) -> std::result::Result<(), String> {
    let g = GeneratorSet::one_fixed_point(n).map_err(e2s)?;
    for t in 1..=6 {
        expect_eq(
            || format!("exc t={t}"),
            expectation(&g, Statistic::Exc, t).map_err(e2s)?.exact,
            rat(n as i64 - 1, 2),
        )?;
        expect_eq(
            || format!("wexc t={t}"),
            expectation(&g, Statistic::Wexc, t).map_err(e2s)?.exact,
            rat(n as i64 + 1, 2),
        )?;
    }
    Ok(())
}

/// Generator sets exercised by the cross-engine checks at this `n`.
pub fn sample_generator_sets(n: usize) -> Vec<GeneratorSet> {
    let mut out = vec![
        GeneratorSet::transpositions(n).expect("n >= 2"),
        GeneratorSet::ncycles(n).expect("n >= 1"),
    ];
    if let Ok(g) = GeneratorSet::one_fixed_point(n) {
        out.push(g);
    }
    if n >= 4 {
        let mut double = vec![2, 2];
        double.extend(std::iter::repeat(1).take(n - 4));
        let types = vec![
            Partition::new(double).expect("valid"),
            Partition::hook(n, 1),
        ];
        out.push(GeneratorSet::new(n, types).expect("distinct classes"));
    }
    out
}

/// Tuple enumeration, the class dynamic program and the character engine.
pub fn check_triple_path(n: usize) -> std::result::Result<(), String> {
    for g in sample_generator_sets(n) {
        for t in 0..=4 {
            for stat in Statistic::all_for(n) {
                let engine = expectation(&g, stat, t).map_err(e2s)?.exact;
                let brute = exact_expectation_bruteforce(&g, stat, t).map_err(e2s)?;
                let dp = dp_expectation(&g, stat, t).map_err(e2s)?;
                expect_eq(|| format!("{g} {stat} t={t} brute"), brute, engine.clone())?;
                expect_eq(|| format!("{g} {stat} t={t} dp"), dp, engine)?;
            }
        }
    }
    Ok(())
}

/// Counts `t`-tuples from `elements` whose product is `target`.
pub fn brute_force_product_count(elements: &[Perm], t: usize, target: &Perm) -> u64 {
    fn go(elements: &[Perm], left: usize, acc: &Perm, target: &Perm) -> u64 {
        if left == 0 {
            return u64::from(acc == target);
        }
        elements
            .iter()
            .map(|g| go(elements, left - 1, &compose(acc, g).expect("same n"), target))
            .sum()
    }
    go(elements, t, &Perm::identity(target.n()), target)
}

pub fn check_factorizations(n: usize) -> std::result::Result<(), String> {
    let g = GeneratorSet::transpositions(n).map_err(e2s)?;
    let full = Partition::row(n);
    let count = product_count_rational(&g, n as u32 - 1, &full).map_err(e2s)?;
    let want = BigInt::from(n).pow(n as u32 - 2);
    expect_eq(|| "n-cycle factorizations".into(), count, rat_int(want.clone()))?;
    if n <= 4 {
        let brute = brute_force_product_count(&generator_elements(&g), n - 1, &class_representative(&full));
        expect_eq(|| "brute n-cycle factorizations".into(), BigInt::from(brute), want)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
    let classes = enumerate_partitions(n);
    for _ in 0..20 {
        let picked: Vec<Partition> = classes.iter().filter(|_| rng.gen_bool(0.4)).cloned().collect();
        let Ok(gamma) = GeneratorSet::new(n, picked) else { continue };
        let t = rng.gen_range(0..=6);
        let target = &classes[rng.gen_range(0..classes.len())];
        let v = product_count_rational(&gamma, t, target).map_err(e2s)?;
        if !v.is_integer() || v < BigRational::zero() {
            return Err(format!("count for {gamma}, t={t}, {target} is {v}"));
        }
    }
    Ok(())
}

pub fn check_distribution(n: usize) -> std::result::Result<(), String> {
    for g in sample_generator_sets(n) {
        let m = class_transition_matrix(&g).map_err(e2s)?;
        for t in 0..=6 {
            let dist = walk_distribution(&g, t);
            let total: BigRational = dist.values().sum();
            expect_eq(|| format!("{g} t={t} total"), total, rat(1, 1))?;
            if dist != m.distribution_after(t) {
                return Err(format!("{g} t={t}: character and DP distributions differ"));
            }
        }
        for stat in Statistic::all_for(n) {
            let one_step: BigRational = g
                .types()
                .iter()
                .zip(g.sizes())
                .map(|(mu, size)| rat_int(size.clone()) * mean_value(stat, mu).unwrap_or_default())
                .sum::<BigRational>()
                / rat_int(g.total().clone());
            expect_eq(
                || format!("{g} {stat} one step"),
                expectation(&g, stat, 1).map_err(e2s)?.exact,
                one_step,
            )?;
        }
    }
    Ok(())
}
