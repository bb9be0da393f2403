//! Integer partitions: the index set for both conjugacy classes and
//! irreducible characters of the symmetric group.
//!
//! A [`Partition`] is always stored weakly decreasing. The canonical order
//! (its [`Ord`] impl) is reverse-lexicographic within a fixed `n`, so `(n)`
//! comes first and `(1^n)` last.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::BigInt;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::factorial;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<usize>,
    n: usize,
}

/// Part multiplicities of a partition. `p` counts parts equal to 1 and `q`
/// parts equal to 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionStats {
    pub p: usize,
    pub q: usize,
    pub part_multiplicities: BTreeMap<usize, usize>,
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.iter().any(|&x| x == 0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Self::from_sorted(parts))
    }

    /// Sorts arbitrary positive part sizes (e.g. cycle lengths) into canonical form.
    pub fn from_multiset(mut parts: Vec<usize>) -> Result<Self> {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self::new(parts)
    }

    fn from_sorted(parts: Vec<usize>) -> Self {
        let n = parts.iter().sum();
        Partition { parts, n }
    }

    pub fn empty() -> Self {
        Self::from_sorted(Vec::new())
    }

    /// The one-row shape `(n)`.
    pub fn row(n: usize) -> Self {
        if n == 0 {
            Self::empty()
        } else {
            Self::from_sorted(vec![n])
        }
    }

    /// The one-column shape `(1^n)`, i.e. the identity class.
    pub fn column(n: usize) -> Self {
        Self::from_sorted(vec![1; n])
    }

    /// The hook `(n-k, 1^k)`; requires `k < n`.
    pub fn hook(n: usize, k: usize) -> Self {
        assert!(k < n, "hook (n-k,1^k) needs k < n");
        let mut parts = vec![n - k];
        parts.extend(std::iter::repeat(1).take(k));
        Self::from_sorted(parts)
    }

    /// Cycle type of a transposition in `S_n`, `(2, 1^{n-2})`.
    pub fn transposition(n: usize) -> Self {
        assert!(n >= 2);
        let mut parts = vec![2];
        parts.extend(std::iter::repeat(1).take(n - 2));
        Self::from_sorted(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn multiplicity(&self, k: usize) -> usize {
        self.parts.iter().filter(|&&x| x == k).count()
    }

    pub fn stats(&self) -> PartitionStats {
        let mut part_multiplicities = BTreeMap::new();
        for &x in &self.parts {
            *part_multiplicities.entry(x).or_insert(0) += 1;
        }
        PartitionStats {
            p: self.multiplicity(1),
            q: self.multiplicity(2),
            part_multiplicities,
        }
    }

    pub fn is_hook(&self) -> bool {
        self.parts.len() <= 1 || self.parts[1] == 1
    }

    /// Sign of any permutation with this cycle type.
    pub fn sign(&self) -> i32 {
        if (self.n - self.parts.len()) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// The partition with its largest part removed.
    pub fn tail(&self) -> Partition {
        Self::from_sorted(self.parts.get(1..).unwrap_or_default().to_vec())
    }

    /// Sum of `column - row` over the cells of the Young diagram.
    pub fn cell_content_sum(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(row, &len)| (0..len).map(|col| col as i64 - row as i64).sum::<i64>())
            .sum()
    }

    /// Beta-set (first-column hook lengths) with `len` entries, strictly decreasing.
    fn beta_set(&self) -> Vec<usize> {
        let l = self.parts.len();
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &x)| x + (l - 1 - i))
            .collect()
    }

    fn from_beta_set(mut betas: Vec<usize>) -> Self {
        betas.sort_unstable_by(|a, b| b.cmp(a));
        let l = betas.len();
        let parts = betas
            .iter()
            .enumerate()
            .map(|(i, &b)| b - (l - 1 - i))
            .filter(|&x| x > 0)
            .collect();
        Self::from_sorted(parts)
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Accepts `"3,1,1"` and the exponent sugar `"3,1^2"`. Whitespace around
/// tokens is ignored; parts may be given in any order.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')').trim();
        if s.is_empty() {
            return Ok(Partition::empty());
        }
        let bad = |tok: &str| Error::InvalidPartition(format!("bad token {tok:?} in {s:?}"));
        let mut parts = Vec::new();
        for tok in s.split(',') {
            let tok = tok.trim();
            let (base, exp) = match tok.split_once('^') {
                Some((b, e)) => (b.trim(), e.trim().parse::<usize>().map_err(|_| bad(tok))?),
                None => (tok, 1),
            };
            let base: usize = base.parse().map_err(|_| bad(tok))?;
            if base == 0 {
                return Err(bad(tok));
            }
            parts.extend(std::iter::repeat(base).take(exp));
        }
        Partition::from_multiset(parts)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Every partition of `n`, each exactly once, in reverse-lexicographic order
/// starting from `(n)`. `n = 0` yields the single empty partition.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    fn go(remaining: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition::from_sorted(prefix.clone()));
            return;
        }
        for first in (1..=remaining.min(max)).rev() {
            prefix.push(first);
            go(remaining - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Centralizer order `z_λ = Π k^{m_k} m_k!`.
pub fn z_order(lambda: &Partition) -> BigInt {
    lambda
        .stats()
        .part_multiplicities
        .iter()
        .map(|(&k, &m)| num::traits::pow(BigInt::from(k), m) * factorial(m))
        .product()
}

/// Size of the conjugacy class `C_λ`, `n! / z_λ`.
pub fn class_size(lambda: &Partition) -> BigInt {
    factorial(lambda.n()) / z_order(lambda)
}

/// All shapes reachable from `lambda` by removing one border strip (rim hook)
/// of exactly `size` cells, paired with the strip's height (rows spanned
/// minus one). Results are in canonical order.
pub fn removable_border_strips(lambda: &Partition, size: usize) -> Vec<(Partition, usize)> {
    assert!(size >= 1, "border strip size must be positive");
    let betas = lambda.beta_set();
    let mut out = Vec::new();
    for (idx, &b) in betas.iter().enumerate() {
        let Some(target) = b.checked_sub(size) else {
            continue;
        };
        if betas.contains(&target) {
            continue;
        }
        let height = betas.iter().filter(|&&x| x > target && x < b).count();
        let mut moved = betas.clone();
        moved[idx] = target;
        out.push((Partition::from_beta_set(moved), height));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}
