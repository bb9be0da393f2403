//! Explicit permutations and the statistics evaluated on them.
//!
//! Permutations are kept in one-line notation. Products follow function
//! application: `compose(a, b)(i) = a(b(i))`.

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A permutation of `{1, …, n}`. Internally zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// From one-line notation with one-based images, e.g. `[3, 1, 2]`.
    pub fn from_one_line(images: &[usize]) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        let mut zero_based = Vec::with_capacity(n);
        for &v in images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPerm(format!("{images:?}")));
            }
            seen[v - 1] = true;
            zero_based.push(v - 1);
        }
        Ok(Perm { images: zero_based })
    }

    /// From zero-based images; callers guarantee validity.
    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        debug_assert!({
            let mut s = images.clone();
            s.sort_unstable();
            s.iter().enumerate().all(|(i, &v)| i == v)
        });
        Perm { images }
    }

    /// From disjoint cycles over one-based points; unspecified points are fixed.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self> {
        let mut images: Vec<Option<usize>> = vec![None; n];
        let mut used = vec![false; n];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                let b = cycle[(idx + 1) % cycle.len()];
                if a == 0 || a > n || b == 0 || b > n || used[a - 1] {
                    return Err(Error::InvalidPerm(format!("{cycles:?} in S_{n}")));
                }
                used[a - 1] = true;
                images[a - 1] = Some(b - 1);
            }
        }
        Ok(Perm {
            images: images
                .into_iter()
                .enumerate()
                .map(|(i, v)| v.unwrap_or(i))
                .collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    /// Zero-based image of zero-based `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn zero_based(&self) -> &[usize] {
        &self.images
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.n()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Perm { images: inv }
    }

    /// Disjoint-cycle lengths, including fixed points.
    pub fn cycle_lengths(&self) -> Vec<usize> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut lengths = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cur = self.images[cur];
                len += 1;
            }
            lengths.push(len);
        }
        lengths
    }

    /// `self ∘ other`, writing into `out` without allocating.
    pub(crate) fn compose_into(&self, other: &Perm, out: &mut Perm) {
        for (o, &b) in out.images.iter_mut().zip(&other.images) {
            *o = self.images[b];
        }
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.images.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", v + 1)?;
        }
        Ok(())
    }
}

impl FromStr for Perm {
    type Err = Error;

    /// One-line `"3,1,2"`, or cycle notation `"(1 3 2)(4 5)"` which fixes
    /// every point up to the largest one mentioned.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidPerm(s.to_string());
        if s.starts_with('(') {
            let mut cycles = Vec::new();
            for chunk in s.split('(').skip(1) {
                let body = chunk.trim().strip_suffix(')').ok_or_else(bad)?;
                let cycle = body
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<usize>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                cycles.push(cycle);
            }
            let n = cycles.iter().flatten().copied().max().unwrap_or(0);
            Perm::from_cycles(n, &cycles)
        } else {
            let images = s
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            Perm::from_one_line(&images)
        }
    }
}

/// A permutation statistic. `Cyc(k)` counts the *elements* lying in
/// `k`-cycles, so it is always a multiple of `k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Statistic {
    Exc,
    Wexc,
    Des,
    Maj,
    Inv,
    Cyc(usize),
}

impl Statistic {
    /// The five non-class statistics, in a fixed order.
    pub const NON_CLASS: [Statistic; 5] = [
        Statistic::Exc,
        Statistic::Wexc,
        Statistic::Des,
        Statistic::Maj,
        Statistic::Inv,
    ];

    /// Every built-in statistic that is meaningful on `S_n`.
    pub fn all_for(n: usize) -> Vec<Statistic> {
        let mut v = Self::NON_CLASS.to_vec();
        v.extend((1..=n).map(Statistic::Cyc));
        v
    }

    pub fn check(&self, n: usize) -> Result<()> {
        match *self {
            Statistic::Cyc(k) if k == 0 || k > n => Err(Error::BadK { k, n }),
            _ => Ok(()),
        }
    }

    /// Builds a statistic from a name and an optional `k` (`"cyc"` + `Some(3)`),
    /// also accepting the fused form `"cyc_3"`.
    pub fn from_parts(name: &str, k: Option<usize>) -> Result<Self> {
        match (name.trim(), k) {
            ("cyc", Some(k)) => Ok(Statistic::Cyc(k)),
            ("cyc", None) => Err(Error::UnknownStatistic("cyc needs k".into())),
            (other, None) => other.parse(),
            (other, Some(_)) => Err(Error::UnknownStatistic(format!(
                "{other} does not take k"
            ))),
        }
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statistic::Exc => f.write_str("exc"),
            Statistic::Wexc => f.write_str("wexc"),
            Statistic::Des => f.write_str("des"),
            Statistic::Maj => f.write_str("maj"),
            Statistic::Inv => f.write_str("inv"),
            Statistic::Cyc(k) => write!(f, "cyc_{k}"),
        }
    }
}

impl FromStr for Statistic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Ok(match s {
            "exc" => Statistic::Exc,
            "wexc" => Statistic::Wexc,
            "des" => Statistic::Des,
            "maj" => Statistic::Maj,
            "inv" => Statistic::Inv,
            _ => match s.strip_prefix("cyc_").or_else(|| s.strip_prefix("cyc")) {
                Some(k) => Statistic::Cyc(
                    k.parse()
                        .map_err(|_| Error::UnknownStatistic(s.to_string()))?,
                ),
                None => return Err(Error::UnknownStatistic(s.to_string())),
            },
        })
    }
}

impl Serialize for Statistic {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Statistic {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(de::Error::custom)
    }
}

/// Value of `stat` on `pi`.
pub fn evaluate(stat: Statistic, pi: &Perm) -> Result<u64> {
    let n = pi.n();
    stat.check(n)?;
    Ok(evaluate_unchecked(stat, pi))
}

pub(crate) fn evaluate_unchecked(stat: Statistic, pi: &Perm) -> u64 {
    let im = &pi.images;
    let n = im.len();
    match stat {
        Statistic::Exc => im.iter().enumerate().filter(|&(i, &v)| v > i).count() as u64,
        Statistic::Wexc => im.iter().enumerate().filter(|&(i, &v)| v >= i).count() as u64,
        Statistic::Des => im.windows(2).filter(|w| w[0] > w[1]).count() as u64,
        Statistic::Maj => im
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[0] > w[1])
            .map(|(i, _)| i as u64 + 1)
            .sum(),
        Statistic::Inv => {
            let mut count = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if im[i] > im[j] {
                        count += 1;
                    }
                }
            }
            count
        }
        Statistic::Cyc(k) => pi
            .cycle_lengths()
            .into_iter()
            .filter(|&len| len == k)
            .map(|len| len as u64)
            .sum(),
    }
}

pub fn cycle_type(pi: &Perm) -> Partition {
    Partition::from_multiset(pi.cycle_lengths()).expect("cycle lengths are positive")
}

/// `(a·b)(i) = a(b(i))`.
pub fn compose(a: &Perm, b: &Perm) -> Result<Perm> {
    if a.n() != b.n() {
        return Err(Error::SizeMismatch(a.n(), b.n()));
    }
    let mut out = Perm::identity(a.n());
    a.compose_into(b, &mut out);
    Ok(out)
}

/// Every permutation of `S_n` in lexicographic one-line order.
pub fn all_perms(n: usize) -> impl Iterator<Item = Perm> {
    use itertools::Itertools;
    (0..n)
        .permutations(n)
        .map(Perm::from_zero_based)
}

/// Every element of the conjugacy class with cycle type `lambda`.
pub fn class_members(lambda: &Partition) -> impl Iterator<Item = Perm> + '_ {
    all_perms(lambda.n()).filter(move |pi| &cycle_type(pi) == lambda)
}

/// A fixed representative of `C_λ`: cycles on consecutive points, largest first.
pub fn class_representative(lambda: &Partition) -> Perm {
    let mut images = Vec::with_capacity(lambda.n());
    let mut start = 0;
    for &len in lambda.parts() {
        for off in 0..len {
            images.push(start + (off + 1) % len);
        }
        start += len;
    }
    Perm::from_zero_based(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::enumerate_partitions;

    fn perm(s: &str) -> Perm {
        s.parse().unwrap()
    }

    fn eval(stat: Statistic, pi: &Perm) -> u64 {
        evaluate(stat, pi).unwrap()
    }

    #[test]
    fn identity_values() {
        let id = Perm::identity(4);
        assert_eq!(eval(Statistic::Exc, &id), 0);
        assert_eq!(eval(Statistic::Wexc, &id), 4);
        assert_eq!(eval(Statistic::Des, &id), 0);
        assert_eq!(eval(Statistic::Maj, &id), 0);
        assert_eq!(eval(Statistic::Inv, &id), 0);
        assert_eq!(eval(Statistic::Cyc(1), &id), 4);
    }

    #[test]
    fn three_cycle_values() {
        let pi = perm("3,1,2");
        assert_eq!(eval(Statistic::Exc, &pi), 1);
        assert_eq!(eval(Statistic::Wexc, &pi), 1);
        assert_eq!(eval(Statistic::Des, &pi), 1);
        assert_eq!(eval(Statistic::Maj, &pi), 1);
        assert_eq!(eval(Statistic::Inv, &pi), 2);
        assert_eq!(eval(Statistic::Cyc(3), &pi), 3);
        assert_eq!(cycle_type(&pi), Partition::row(3));
    }

    #[test]
    fn reverse_is_maximal() {
        for n in 1..=8 {
            let rev = Perm::from_one_line(&(1..=n).rev().collect::<Vec<_>>()).unwrap();
            let m = (n * (n - 1) / 2) as u64;
            assert_eq!(eval(Statistic::Inv, &rev), m);
            assert_eq!(eval(Statistic::Des, &rev), n as u64 - 1);
            assert_eq!(eval(Statistic::Maj, &rev), m);
        }
    }

    #[test]
    fn bad_k() {
        assert_eq!(
            evaluate(Statistic::Cyc(5), &Perm::identity(4)),
            Err(Error::BadK { k: 5, n: 4 })
        );
        assert!(evaluate(Statistic::Cyc(0), &Perm::identity(4)).is_err());
    }

    #[test]
    fn cycle_types_and_composition() {
        assert_eq!(cycle_type(&Perm::identity(5)), Partition::column(5));
        assert_eq!(cycle_type(&perm("2,1,4,3")), "2,2".parse().unwrap());
        assert_eq!(cycle_type(&perm("(1 2 3 4 5)")), Partition::row(5));

        let t12 = Perm::from_cycles(3, &[vec![1, 2]]).unwrap();
        let t23 = Perm::from_cycles(3, &[vec![2, 3]]).unwrap();
        let pi = perm("3,1,2");
        assert_eq!(compose(&pi, &Perm::identity(3)).unwrap(), pi);
        assert_eq!(compose(&t12, &t12).unwrap(), Perm::identity(3));
        let prod = compose(&t12, &t23).unwrap();
        assert_eq!(cycle_type(&prod), Partition::row(3));
        // a(b(1)) = t12(1) = 2
        assert_eq!(prod.one_line(), vec![2, 3, 1]);
        assert!(compose(&t12, &Perm::identity(4)).is_err());
    }

    #[test]
    fn parsing() {
        assert_eq!(perm("(1 3 2)"), perm("3,1,2"));
        assert_eq!(perm("(1,2)(3 4)").to_string(), "2,1,4,3");
        assert!("1,1,2".parse::<Perm>().is_err());
        assert!("(1 2".parse::<Perm>().is_err());
        assert_eq!("cyc_3".parse::<Statistic>().unwrap(), Statistic::Cyc(3));
        assert_eq!(Statistic::from_parts("cyc", Some(2)).unwrap(), Statistic::Cyc(2));
        assert!("foo".parse::<Statistic>().is_err());
        for s in Statistic::all_for(4) {
            assert_eq!(s.to_string().parse::<Statistic>().unwrap(), s);
        }
    }

    #[test]
    fn representatives_have_their_type() {
        for n in 1..=8 {
            for lambda in enumerate_partitions(n) {
                assert_eq!(cycle_type(&class_representative(&lambda)), lambda);
            }
        }
    }

    #[test]
    fn small_n_invariants() {
        for n in 1..=7 {
            let (mut inv_total, mut maj_total) = (0u64, 0u64);
            for pi in all_perms(n) {
                let fixed = eval(Statistic::Cyc(1), &pi);
                assert_eq!(eval(Statistic::Wexc, &pi) - eval(Statistic::Exc, &pi), fixed);
                let cyc_sum: u64 = (1..=n).map(|k| eval(Statistic::Cyc(k), &pi)).sum();
                assert_eq!(cyc_sum, n as u64);
                for k in 1..=n {
                    assert_eq!(eval(Statistic::Cyc(k), &pi) % k as u64, 0);
                }
                let one = pi.one_line();
                let maj_direct: u64 = (1..n).filter(|&i| one[i - 1] > one[i]).map(|i| i as u64).sum();
                assert_eq!(eval(Statistic::Maj, &pi), maj_direct);
                inv_total += eval(Statistic::Inv, &pi);
                maj_total += eval(Statistic::Maj, &pi);
            }
            assert_eq!(inv_total, maj_total, "n = {n}");
        }
    }
}
