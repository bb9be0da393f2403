//! Mean statistics as class functions and their expansions in the basis of
//! irreducible characters.
//!
//! For a statistic `s`, the mean statistic averages `s` over each conjugacy
//! class. [`mean_value`] evaluates it from per-class closed forms in the part
//! counts `p` (ones) and `q` (twos); [`decompose`] gives its coefficients
//! `a_λ` in the orthonormal character basis. [`project`] and
//! [`empirical_mean_statistic`] are the independent route used to check both.

use std::collections::{BTreeMap, HashMap};

use num::traits::{One, Zero};
use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::arith::{binomial, factorial, rat, rat_int, serde_rational};
use crate::character::character;
use crate::error::{Error, Result};
use crate::partition::{class_size, enumerate_partitions, Partition};
use crate::perm::{all_perms, cycle_type, evaluate_unchecked, Statistic};

/// Largest `n` for which [`empirical_mean_statistic`] enumerates `S_n` by default.
pub const DEFAULT_ENUMERATION_BOUND: usize = 8;

/// An exact rational-valued function on the conjugacy classes of `S_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFunction {
    pub n: usize,
    pub values: BTreeMap<Partition, BigRational>,
}

impl ClassFunction {
    pub fn from_fn(n: usize, mut f: impl FnMut(&Partition) -> BigRational) -> Self {
        let values = enumerate_partitions(n)
            .into_iter()
            .map(|mu| {
                let v = f(&mu);
                (mu, v)
            })
            .collect();
        ClassFunction { n, values }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        Self::from_fn(n, |_| c.clone())
    }

    /// `χ^λ` as a class function.
    pub fn from_character(lambda: &Partition) -> Self {
        Self::from_fn(lambda.n(), |mu| {
            rat_int(character(lambda, mu).expect("same n"))
        })
    }

    /// The mean statistic of `stat`, from its closed form.
    pub fn mean_statistic(stat: Statistic, n: usize) -> Result<Self> {
        stat.check(n)?;
        if n == 0 {
            return Err(Error::BadN(0));
        }
        Ok(Self::from_fn(n, |mu| mean_value(stat, mu).expect("checked")))
    }

    pub fn get(&self, mu: &Partition) -> Option<&BigRational> {
        self.values.get(mu)
    }
}

/// Coefficients `a_λ` of a class function in the irreducible-character basis.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharDecomposition {
    pub n: usize,
    coeffs: BTreeMap<Partition, BigRational>,
}

impl CharDecomposition {
    pub fn new(n: usize, coeffs: impl IntoIterator<Item = (Partition, BigRational)>) -> Self {
        let mut map: BTreeMap<Partition, BigRational> = BTreeMap::new();
        for (lambda, c) in coeffs {
            assert_eq!(lambda.n(), n, "{lambda} is not a partition of {n}");
            *map.entry(lambda).or_insert_with(BigRational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        CharDecomposition { n, coeffs: map }
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, BigRational> {
        &self.coeffs
    }

    /// Coefficient of `χ^λ`, zero when absent.
    pub fn coeff(&self, lambda: &Partition) -> BigRational {
        self.coeffs.get(lambda).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scaled(&self, factor: &BigRational) -> Self {
        Self::new(self.n, self.coeffs.iter().map(|(l, c)| (l.clone(), c * factor)))
    }

    /// `Σ_λ a_λ χ^λ(μ)`.
    pub fn evaluate_at(&self, mu: &Partition) -> BigRational {
        self.coeffs
            .iter()
            .map(|(lambda, a)| a * rat_int(character(lambda, mu).expect("same n")))
            .sum()
    }

    pub fn reconstruct(&self) -> ClassFunction {
        ClassFunction::from_fn(self.n, |mu| self.evaluate_at(mu))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("decomposition serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffEntry {
    lambda: Partition,
    #[serde(with = "serde_rational")]
    value: BigRational,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    n: usize,
    coeffs: Vec<CoeffEntry>,
}

impl Serialize for CharDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionJson {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .map(|(lambda, value)| CoeffEntry {
                    lambda: lambda.clone(),
                    value: value.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CharDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = DecompositionJson::deserialize(d)?;
        if let Some(bad) = raw.coeffs.iter().find(|e| e.lambda.n() != raw.n) {
            return Err(serde::de::Error::custom(format!(
                "{} is not a partition of {}",
                bad.lambda, raw.n
            )));
        }
        Ok(CharDecomposition::new(
            raw.n,
            raw.coeffs.into_iter().map(|e| (e.lambda, e.value)),
        ))
    }
}

/// Mean of `stat` over the conjugacy class `C_λ`, from closed forms in the
/// number of fixed points `p` and 2-cycles `q` of `λ`.
pub fn mean_value(stat: Statistic, lambda: &Partition) -> Result<BigRational> {
    let n = lambda.n();
    stat.check(n)?;
    if n == 0 {
        return Err(Error::BadN(0));
    }
    let st = lambda.stats();
    let (ni, p, q) = (n as i64, st.p as i64, st.q as i64);
    let choose_p2 = rat_int(binomial(st.p, 2));
    let nn1_4 = rat(ni * (ni - 1), 4);
    Ok(match stat {
        Statistic::Exc => rat(ni - p, 2),
        Statistic::Wexc => rat(ni + p, 2),
        Statistic::Des => rat(ni - 1, 2) + rat(q, ni) - choose_p2 / rat(ni, 1),
        Statistic::Maj => nn1_4 + rat(q, 2) - choose_p2 / rat(2, 1),
        Statistic::Inv => {
            nn1_4 - rat(p * (p - 1), 12) - rat(ni * (p - 1), 6) + rat(q, 6)
        }
        Statistic::Cyc(k) => rat_int(k * lambda.multiplicity(k)),
    })
}

/// `I_λ(i, j)`: the number of `π ∈ C_λ` with `π(i) > π(j)`, for one-based
/// `1 ≤ i < j ≤ n`.
pub fn inversion_count_above(lambda: &Partition, i: usize, j: usize) -> Result<BigInt> {
    let n = lambda.n();
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::BadIndices { i, j, n });
    }
    let st = lambda.stats();
    let (ni, p, q) = (n as i64, st.p as i64, st.q as i64);
    let size = class_size(lambda);
    let gap = (j - i - 1) as i64;
    let mut bracket = BigRational::one() + rat(2 * q - p * (p - 1), ni * (ni - 1));
    // For n = 2 the gap is necessarily zero, so the 1/(n-2) term never fires.
    if gap != 0 {
        bracket += rat(
            2 * gap * ((ni - p) * (1 - p) - 2 * q),
            ni * (ni - 1) * (ni - 2),
        );
    }
    let value = rat_int(size.clone()) * bracket / rat(2, 1);
    assert!(value.is_integer(), "I_{lambda}({i},{j}) = {value} is not an integer");
    let value = value.to_integer();
    assert!(
        value >= BigInt::zero() && value <= size,
        "I_{lambda}({i},{j}) = {value} is out of range"
    );
    Ok(value)
}

/// Closed-form character expansion of the mean statistic of `stat` on `S_n`.
pub fn decompose(stat: Statistic, n: usize) -> Result<CharDecomposition> {
    stat.check(n)?;
    let row = Partition::row(n);
    let ni = n as i64;
    if let Statistic::Cyc(k) = stat {
        return Ok(cycle_decomposition(n, k));
    }
    if n < 2 {
        return Err(Error::BadN(n));
    }
    let standard = Partition::hook(n, 1);
    if n == 2 && matches!(stat, Statistic::Des | Statistic::Maj | Statistic::Inv) {
        // (n-2,1,1) does not exist; projecting the means (0 on (1,1), 1 on (2))
        // gives this for all three statistics.
        return Ok(CharDecomposition::new(
            2,
            [(row, rat(1, 2)), (standard, rat(-1, 2))],
        ));
    }
    let terms: Vec<(Partition, BigRational)> = match stat {
        Statistic::Exc => vec![(row, rat(ni - 1, 2)), (standard, rat(-1, 2))],
        Statistic::Wexc => vec![(row, rat(ni + 1, 2)), (standard, rat(1, 2))],
        Statistic::Des => vec![
            (row, rat(ni - 1, 2)),
            (standard, rat(-1, ni)),
            (Partition::hook(n, 2), rat(-1, ni)),
        ],
        Statistic::Maj => vec![
            (row, rat(ni * (ni - 1), 4)),
            (standard, rat(-1, 2)),
            (Partition::hook(n, 2), rat(-1, 2)),
        ],
        Statistic::Inv => vec![
            (row, rat(ni * (ni - 1), 4)),
            (standard, rat(-(ni + 1), 6)),
            (Partition::hook(n, 2), rat(-1, 6)),
        ],
        Statistic::Cyc(_) => unreachable!(),
    };
    Ok(CharDecomposition::new(n, terms))
}

fn cycle_decomposition(n: usize, k: usize) -> CharDecomposition {
    let sign = |e: usize| if e % 2 == 0 { rat(1, 1) } else { rat(-1, 1) };
    let mut terms = vec![(Partition::row(n), BigRational::one())];
    // (n-k, i, 1^{k-i}) for 1 <= i <= min(k, n-k)
    for i in 1..=k.min(n - k) {
        let mut parts = vec![n - k, i];
        parts.extend(std::iter::repeat(1).take(k - i));
        terms.push((shape(parts), sign(k - i)));
    }
    // (j, n-k+1, 1^{k-j-1}) for n-k+1 <= j <= k-1
    for j in (n - k + 1)..k {
        let mut parts = vec![j, n - k + 1];
        parts.extend(std::iter::repeat(1).take(k - j - 1));
        terms.push((shape(parts), sign(k - j)));
    }
    CharDecomposition::new(n, terms)
}

fn shape(parts: Vec<usize>) -> Partition {
    Partition::new(parts).expect("index ranges only produce valid shapes")
}

/// `a_λ = ⟨f, χ^λ⟩ = (1/n!) Σ_μ |C_μ| f(μ) χ^λ(μ)` for every `λ ⊢ n`.
pub fn project(f: &ClassFunction) -> CharDecomposition {
    let n_fact = rat_int(factorial(f.n));
    let weighted: Vec<(Partition, BigRational)> = f
        .values
        .iter()
        .map(|(mu, v)| (mu.clone(), v * rat_int(class_size(mu))))
        .collect();
    let coeffs = enumerate_partitions(f.n).into_iter().map(|lambda| {
        let sum: BigRational = weighted
            .iter()
            .map(|(mu, w)| w * rat_int(character(&lambda, mu).expect("same n")))
            .sum();
        (lambda, sum / &n_fact)
    });
    CharDecomposition::new(f.n, coeffs)
}

/// The mean statistic obtained by enumerating all of `S_n` and averaging
/// `stat` within each cycle type. Uses no closed form.
pub fn empirical_mean_statistic(stat: Statistic, n: usize) -> Result<ClassFunction> {
    empirical_mean_statistic_bounded(stat, n, DEFAULT_ENUMERATION_BOUND)
}

pub fn empirical_mean_statistic_bounded(
    stat: Statistic,
    n: usize,
    bound: usize,
) -> Result<ClassFunction> {
    if n > bound {
        return Err(Error::TooLarge { n, bound });
    }
    stat.check(n)?;
    let mut buckets: HashMap<Partition, (u64, u64)> = HashMap::new();
    for pi in all_perms(n) {
        let entry = buckets.entry(cycle_type(&pi)).or_insert((0, 0));
        entry.0 += evaluate_unchecked(stat, &pi);
        entry.1 += 1;
    }
    Ok(ClassFunction::from_fn(n, |mu| {
        let (sum, count) = buckets[mu];
        BigRational::new(BigInt::from(sum), BigInt::from(count))
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::class_members;
    use proptest::prelude::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn mean_value_examples() {
        assert_eq!(mean_value(Statistic::Exc, &Partition::column(6)).unwrap(), rat(0, 1));
        assert_eq!(mean_value(Statistic::Des, &Partition::row(3)).unwrap(), rat(1, 1));
        for n in 3..=7i64 {
            let expected = rat(n * (n - 1), 4) - rat((n - 2) * (n - 3), 12) - rat(n * (n - 3), 6)
                + rat(1, 6);
            let got = mean_value(Statistic::Inv, &Partition::transposition(n as usize)).unwrap();
            assert_eq!(got, expected);
        }
        assert_eq!(
            mean_value(Statistic::Cyc(5), &Partition::row(4)),
            Err(Error::BadK { k: 5, n: 4 })
        );
    }

    #[test]
    fn empirical_examples() {
        // S_3 transpositions: (2,1,3), (3,2,1), (1,3,2) have 1, 3, 1 inversions.
        let f = empirical_mean_statistic(Statistic::Inv, 3).unwrap();
        assert_eq!(f.get(&Partition::column(3)), Some(&rat(0, 1)));
        assert_eq!(f.get(&p("2,1")), Some(&rat(5, 3)));
        assert_eq!(f.get(&p("3")), Some(&rat(2, 1)));
        let g = empirical_mean_statistic(Statistic::Des, 2).unwrap();
        assert_eq!(g.get(&p("1,1")), Some(&rat(0, 1)));
        assert_eq!(g.get(&p("2")), Some(&rat(1, 1)));
        assert_eq!(
            empirical_mean_statistic(Statistic::Des, 9),
            Err(Error::TooLarge { n: 9, bound: 8 })
        );
    }

    #[test]
    fn closed_forms_match_enumeration() {
        for n in 1..=7 {
            for stat in Statistic::all_for(n) {
                let emp = empirical_mean_statistic(stat, n).unwrap();
                let closed = ClassFunction::mean_statistic(stat, n).unwrap();
                assert_eq!(emp, closed, "{stat} n = {n}");
            }
        }
    }

    #[test]
    fn decompose_examples() {
        for n in 1..=8 {
            let d = decompose(Statistic::Cyc(1), n).unwrap();
            let mut expected = vec![(Partition::row(n), rat(1, 1))];
            if n >= 2 {
                expected.push((Partition::hook(n, 1), rat(1, 1)));
            }
            assert_eq!(d, CharDecomposition::new(n, expected));
        }
        assert_eq!(
            decompose(Statistic::Exc, 5).unwrap(),
            CharDecomposition::new(5, [(p("5"), rat(2, 1)), (p("4,1"), rat(-1, 2))])
        );
        for n in 2..=8 {
            let d = decompose(Statistic::Cyc(n), n).unwrap();
            for mu in enumerate_partitions(n) {
                let expected = if mu == Partition::row(n) { n as i64 } else { 0 };
                assert_eq!(d.evaluate_at(&mu), rat(expected, 1));
            }
        }
        assert_eq!(decompose(Statistic::Des, 1), Err(Error::BadN(1)));
        assert_eq!(decompose(Statistic::Cyc(4), 3), Err(Error::BadK { k: 4, n: 3 }));
    }

    #[test]
    fn n_equals_two_matches_projection() {
        for stat in [Statistic::Des, Statistic::Maj, Statistic::Inv, Statistic::Exc, Statistic::Wexc] {
            let emp = empirical_mean_statistic(stat, 2).unwrap();
            assert_eq!(project(&emp), decompose(stat, 2).unwrap(), "{stat}");
        }
    }

    #[test]
    fn reconstruction_and_oracle_equivalence() {
        for n in 4..=7 {
            for stat in Statistic::all_for(n) {
                let d = decompose(stat, n).unwrap();
                assert_eq!(d.reconstruct(), ClassFunction::mean_statistic(stat, n).unwrap());
                let emp = empirical_mean_statistic(stat, n).unwrap();
                assert_eq!(project(&emp), d, "{stat} n = {n}");
            }
        }
    }

    #[test]
    fn maj_is_half_n_des() {
        for n in 2..=12 {
            let des = decompose(Statistic::Des, n).unwrap();
            assert_eq!(decompose(Statistic::Maj, n).unwrap(), des.scaled(&rat(n as i64, 2)));
        }
    }

    #[test]
    fn projections_of_basic_functions() {
        for n in 1..=6 {
            assert_eq!(
                project(&ClassFunction::constant(n, rat(1, 1))),
                CharDecomposition::new(n, [(Partition::row(n), rat(1, 1))])
            );
            for lambda in enumerate_partitions(n) {
                assert_eq!(
                    project(&ClassFunction::from_character(&lambda)),
                    CharDecomposition::new(n, [(lambda.clone(), rat(1, 1))])
                );
            }
        }
    }

    #[test]
    fn inversion_count_examples() {
        for n in 2..=6 {
            for j in 2..=n {
                for i in 1..j {
                    assert!(inversion_count_above(&Partition::column(n), i, j).unwrap().is_zero());
                }
            }
        }
        assert_eq!(inversion_count_above(&p("2"), 1, 2).unwrap(), BigInt::from(1));
        assert_eq!(inversion_count_above(&p("3"), 1, 3).unwrap(), BigInt::from(2));
        assert!(inversion_count_above(&p("3"), 2, 2).is_err());
        assert!(inversion_count_above(&p("3"), 0, 2).is_err());
        assert!(inversion_count_above(&p("3"), 1, 4).is_err());
    }

    #[test]
    fn inversion_counts_match_brute_force() {
        for n in 2..=6 {
            for lambda in enumerate_partitions(n) {
                let members: Vec<_> = class_members(&lambda).collect();
                for j in 1..n {
                    for i in 0..j {
                        let direct = members.iter().filter(|pi| pi.apply(i) > pi.apply(j)).count();
                        assert_eq!(
                            inversion_count_above(&lambda, i + 1, j + 1).unwrap(),
                            BigInt::from(direct)
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn inversion_sums_give_means() {
        for n in 2..=7 {
            for lambda in enumerate_partitions(n) {
                let size = rat_int(class_size(&lambda));
                let i_rat = |i, j| rat_int(inversion_count_above(&lambda, i, j).unwrap()) / &size;
                let des: BigRational = (1..n).map(|i| i_rat(i, i + 1)).sum();
                let maj: BigRational = (1..n).map(|i| rat(i as i64, 1) * i_rat(i, i + 1)).sum();
                let inv: BigRational = (1..n)
                    .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
                    .map(|(i, j)| i_rat(i, j))
                    .sum();
                assert_eq!(des, mean_value(Statistic::Des, &lambda).unwrap());
                assert_eq!(maj, mean_value(Statistic::Maj, &lambda).unwrap());
                assert_eq!(inv, mean_value(Statistic::Inv, &lambda).unwrap());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let d = decompose(Statistic::Exc, 5).unwrap();
        let text = d.to_json();
        assert_eq!(
            text,
            r#"{"n":5,"coeffs":[{"lambda":"5","value":"2"},{"lambda":"4,1","value":"-1/2"}]}"#
        );
        assert_eq!(CharDecomposition::from_json(&text).unwrap(), d);
        assert!(CharDecomposition::from_json(r#"{"n":4,"coeffs":[{"lambda":"5","value":"1"}]}"#).is_err());
    }

    proptest! {
        #[test]
        fn cycle_shapes_are_valid(n in 1usize..=12, k_seed in 0usize..12) {
            let k = k_seed % n + 1;
            let d = decompose(Statistic::Cyc(k), n).unwrap();
            for (lambda, c) in d.coeffs() {
                prop_assert_eq!(lambda.n(), n);
                prop_assert!(Partition::new(lambda.parts().to_vec()).is_ok());
                prop_assert!(*c == rat(1, 1) || *c == rat(-1, 1));
            }
        }

        #[test]
        fn decomposition_json_round_trips(n in 2usize..=9, which in 0usize..6) {
            let stat = Statistic::all_for(n)[which];
            let d = decompose(stat, n).unwrap();
            prop_assert_eq!(CharDecomposition::from_json(&d.to_json()).unwrap(), d);
        }
    }
}
