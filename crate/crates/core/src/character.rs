//! Irreducible characters of `S_n` via the Murnaghan–Nakayama rule.
//!
//! `χ^λ(μ)` is computed by stripping border strips of size `μ₁` from `λ` and
//! recursing on the remaining parts of `μ`. Every evaluated pair is stored in
//! a process-wide write-once cache keyed by the canonical `(λ, μ)` pair, so
//! sub-evaluations are shared across calls, threads, and table builds.

use std::collections::{BTreeMap, HashMap};
use std::sync::{OnceLock, RwLock};

use num::traits::{One, ToPrimitive, Zero};
use num::{BigInt, Integer};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::partition::{enumerate_partitions, removable_border_strips, Partition};

type CacheKey = (Partition, Partition);

fn cache() -> &'static RwLock<HashMap<CacheKey, BigInt>> {
    static CACHE: OnceLock<RwLock<HashMap<CacheKey, BigInt>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Number of memoized `(λ, μ)` entries.
pub fn cache_len() -> usize {
    cache().read().expect("character cache poisoned").len()
}

/// Drops every memoized value. Only useful for benchmarking cold evaluation.
pub fn clear_cache() {
    cache().write().expect("character cache poisoned").clear();
}

/// `χ^λ(μ)`, the irreducible character indexed by `lambda` evaluated on the
/// class of cycle type `mu`.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<BigInt> {
    if lambda.n() != mu.n() {
        return Err(Error::SizeMismatch(lambda.n(), mu.n()));
    }
    Ok(murnaghan_nakayama(lambda, mu))
}

fn murnaghan_nakayama(lambda: &Partition, mu: &Partition) -> BigInt {
    if mu.is_empty() {
        return BigInt::one();
    }
    let key = (lambda.clone(), mu.clone());
    if let Some(v) = cache().read().expect("character cache poisoned").get(&key) {
        return v.clone();
    }
    let strip = mu.parts()[0];
    let rest = mu.tail();
    let mut value = BigInt::zero();
    for (smaller, height) in removable_border_strips(lambda, strip) {
        let term = murnaghan_nakayama(&smaller, &rest);
        if height % 2 == 0 {
            value += term;
        } else {
            value -= term;
        }
    }
    // Racing writers compute equal values; keep whichever landed first.
    cache()
        .write()
        .expect("character cache poisoned")
        .entry(key)
        .or_insert_with(|| value.clone());
    value
}

/// `f^λ = χ^λ(1^n)`, the number of standard Young tableaux of shape `λ`.
pub fn dimension(lambda: &Partition) -> BigInt {
    let f = murnaghan_nakayama(lambda, &Partition::column(lambda.n()));
    assert!(f >= BigInt::one(), "dimension of {lambda} must be positive, got {f}");
    f
}

/// Content `c_λ = C(n,2) χ^λ(2,1^{n-2}) / f^λ`.
///
/// The character formula is checked against the sum of `column - row` over
/// the diagram; a disagreement is an internal error and panics.
pub fn content(lambda: &Partition) -> Result<BigInt> {
    let n = lambda.n();
    if n < 2 {
        return Err(Error::TooSmall(n));
    }
    let chi = murnaghan_nakayama(lambda, &Partition::transposition(n));
    let (c, rem) = (binomial(n, 2) * chi).div_rem(&dimension(lambda));
    assert!(rem.is_zero(), "content of {lambda} is not an integer");
    assert_eq!(
        c,
        BigInt::from(lambda.cell_content_sum()),
        "content of {lambda} disagrees with its cell sum"
    );
    Ok(c)
}

/// Full character table of `S_n`. Rows are characters `χ^λ`, columns classes
/// `μ`, both in canonical partition order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharTable {
    pub n: usize,
    pub order: Vec<Partition>,
    pub rows: Vec<Vec<BigInt>>,
}

impl CharTable {
    fn index_of(&self, p: &Partition) -> Option<usize> {
        self.order.binary_search(p).ok()
    }

    pub fn get(&self, lambda: &Partition, mu: &Partition) -> Option<&BigInt> {
        Some(&self.rows[self.index_of(lambda)?][self.index_of(mu)?])
    }

    pub fn row(&self, lambda: &Partition) -> Option<&[BigInt]> {
        self.index_of(lambda).map(|i| self.rows[i].as_slice())
    }

    /// CSV with a `lambda` header column followed by one column per class.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["lambda".to_string()];
        header.extend(self.order.iter().map(|p| p.to_string()));
        w.write_record(&header).expect("in-memory csv write");
        for (lambda, row) in self.order.iter().zip(&self.rows) {
            let mut rec = vec![lambda.to_string()];
            rec.extend(row.iter().map(|v| v.to_string()));
            w.write_record(&rec).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Cell {
            Int(i64),
            Text(String),
        }
        #[derive(Deserialize)]
        struct Raw {
            n: usize,
            order: Vec<Partition>,
            rows: BTreeMap<String, Vec<Cell>>,
        }
        let raw: Raw = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        let mut rows = Vec::with_capacity(raw.order.len());
        for lambda in &raw.order {
            let cells = raw
                .rows
                .get(&lambda.to_string())
                .ok_or_else(|| Error::Parse(format!("missing row {lambda}")))?;
            let row = cells
                .iter()
                .map(|c| match c {
                    Cell::Int(v) => Ok(BigInt::from(*v)),
                    Cell::Text(t) => t.parse().map_err(|_| Error::Parse(t.clone())),
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Ok(CharTable {
            n: raw.n,
            order: raw.order,
            rows,
        })
    }
}

impl Serialize for CharTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Row<'a>(&'a [BigInt]);
        impl Serialize for Row<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_seq(self.0.iter().map(|v| match v.to_i64() {
                    Some(x) => serde_json::Value::from(x),
                    None => serde_json::Value::from(v.to_string()),
                }))
            }
        }
        struct Rows<'a>(&'a CharTable);
        impl Serialize for Rows<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.order.len()))?;
                for (lambda, row) in self.0.order.iter().zip(&self.0.rows) {
                    m.serialize_entry(&lambda.to_string(), &Row(row))?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(Some(3))?;
        m.serialize_entry("n", &self.n)?;
        m.serialize_entry("order", &self.order)?;
        m.serialize_entry("rows", &Rows(self))?;
        m.end()
    }
}

/// Builds the full `p(n) × p(n)` character table.
pub fn build_table(n: usize) -> CharTable {
    if n > 20 {
        log::warn!("building a character table for n = {n}; this has p(n)^2 entries");
    }
    let order = enumerate_partitions(n);
    let rows = order
        .iter()
        .map(|lambda| order.iter().map(|mu| murnaghan_nakayama(lambda, mu)).collect())
        .collect();
    CharTable { n, order, rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorial;
    use crate::partition::class_size;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn chi(l: &str, m: &str) -> i64 {
        character(&p(l), &p(m)).unwrap().to_i64().unwrap()
    }

    /// Standard Young tableaux counted by removing the largest entry from a
    /// corner, recursively. Independent of the border-strip code.
    fn syt_count(parts: &[usize]) -> u64 {
        if parts.iter().all(|&x| x == 0) {
            return 1;
        }
        let mut total = 0;
        for i in 0..parts.len() {
            let is_corner = parts[i] > 0 && (i + 1 == parts.len() || parts[i + 1] < parts[i]);
            if is_corner {
                let mut smaller = parts.to_vec();
                smaller[i] -= 1;
                total += syt_count(&smaller);
            }
        }
        total
    }

    #[test]
    fn named_values() {
        for mu in enumerate_partitions(6) {
            assert_eq!(character(&Partition::row(6), &mu).unwrap(), BigInt::one());
        }
        assert_eq!(chi("2,1", "3"), -1);
        assert_eq!(chi("3,1", "2,1,1"), 1);
        assert_eq!(chi("2,2", "1,1,1,1"), 2);
        assert_eq!(chi("2,2", "2,2"), 2);
        assert!(matches!(
            character(&p("2,1"), &p("2,2")),
            Err(Error::SizeMismatch(3, 4))
        ));
    }

    #[test]
    fn dimensions_match_tableau_counts() {
        for n in 1..=9 {
            for lambda in enumerate_partitions(n) {
                assert_eq!(dimension(&lambda), BigInt::from(syt_count(lambda.parts())));
            }
        }
        assert_eq!(dimension(&p("3,1,1")), BigInt::from(6));
        assert_eq!(dimension(&Partition::row(7)), BigInt::one());
    }

    #[test]
    fn squared_dimensions_sum_to_factorial() {
        for n in 1..=10 {
            let s: BigInt = enumerate_partitions(n)
                .iter()
                .map(|l| dimension(l).pow(2))
                .sum();
            assert_eq!(s, factorial(n));
        }
    }

    #[test]
    fn contents() {
        assert_eq!(content(&p("4,1")).unwrap(), BigInt::from(5));
        assert_eq!(content(&Partition::row(6)).unwrap(), BigInt::from(15));
        // cells contribute 0 + 1 - 1 + 0; χ^(2,2)((2,1,1)) = 0 agrees
        assert_eq!(content(&p("2,2")).unwrap(), BigInt::from(0));
        assert_eq!(content(&p("3,1")).unwrap(), BigInt::from(2));
        assert_eq!(content(&Partition::column(1)), Err(Error::TooSmall(1)));
        for n in 2..=10 {
            for lambda in enumerate_partitions(n) {
                content(&lambda).unwrap();
            }
        }
    }

    #[test]
    fn small_tables() {
        let t1 = build_table(1);
        assert_eq!(t1.rows, vec![vec![BigInt::one()]]);
        let t3 = build_table(3);
        let as_i64: Vec<Vec<i64>> = t3
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_i64().unwrap()).collect())
            .collect();
        // columns (3), (2,1), (1^3)
        assert_eq!(as_i64, vec![vec![1, 1, 1], vec![-1, 0, 2], vec![1, -1, 1]]);
    }

    #[test]
    fn orthogonality_n5() {
        let t = build_table(5);
        let sizes: Vec<BigInt> = t.order.iter().map(class_size).collect();
        for (a, ra) in t.rows.iter().enumerate() {
            for (b, rb) in t.rows.iter().enumerate() {
                let s: BigInt = (0..t.order.len()).map(|m| &sizes[m] * &ra[m] * &rb[m]).sum();
                let expected = if a == b { factorial(5) } else { BigInt::zero() };
                assert_eq!(s, expected);
            }
        }
        for m1 in 0..t.order.len() {
            for m2 in 0..t.order.len() {
                let s: BigInt = t.rows.iter().map(|r| &r[m1] * &r[m2]).sum();
                if m1 == m2 {
                    assert_eq!(s * &sizes[m1], factorial(5));
                } else {
                    assert!(s.is_zero());
                }
            }
        }
    }

    #[test]
    fn table_json_round_trip() {
        let t = build_table(5);
        let back = CharTable::from_json(&t.to_json()).unwrap();
        assert_eq!(back, t);
        let csv = build_table(3).to_csv();
        assert_eq!(
            csv,
            "lambda,3,\"2,1\",\"1,1,1\"\n3,1,1,1\n\"2,1\",-1,0,2\n\"1,1,1\",1,-1,1\n"
        );
    }

    #[test]
    fn concurrent_evaluation_agrees() {
        let handles: Vec<_> = (0..4)
            .map(|_| std::thread::spawn(|| build_table(9)))
            .collect();
        let tables: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(tables.windows(2).all(|w| w[0] == w[1]));
    }
}
