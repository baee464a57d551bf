//! Partitions, Young diagram statistics and symmetric-group characters.
//!
//! A [`Partition`] doubles as a Young diagram (for irreducible
//! representations of `S_d`) and as a cycle type (for conjugacy classes).
//! Characters are evaluated with the Murnaghan–Nakayama rule on beta-sets,
//! memoized per thread.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A weakly decreasing sequence of positive integers.
///
/// The canonical form has no trailing zeros, so `[2,1,0]` and `[2,1]`
/// construct the same value.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Builds a partition from arbitrary non-negative parts; sorts and drops zeros.
    pub fn new(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// The one-row partition `(d)`; empty when `d == 0`.
    pub fn row(d: u32) -> Self {
        Partition::new(vec![d])
    }

    /// The one-column partition `(1^d)`.
    pub fn column(d: u32) -> Self {
        Partition::new(vec![1; d as usize])
    }

    /// The transposition class `(2, 1^{d-2})` for `d >= 2`.
    pub fn transposition(d: u32) -> Self {
        assert!(d >= 2, "transposition class needs d >= 2");
        let mut parts = vec![2];
        parts.extend(std::iter::repeat_n(1, d as usize - 2));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|lambda|`, the sum of the parts.
    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Part `i` (zero-based), zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Multiplicities `m_i` as `(i, m_i)` pairs with `m_i > 0`, increasing in `i`.
    pub fn multiplicities(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        for &p in self.parts.iter().rev() {
            match out.last_mut() {
                Some((v, m)) if *v == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Cells `(i, j)` of the Young diagram, one-based row and column.
    pub fn cells(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &row)| (1..=row).map(move |j| (i as u32 + 1, j)))
    }

    /// Hook length at the one-based cell `(i, j)`.
    pub fn hook_length(&self, i: u32, j: u32) -> u32 {
        let arm = self.part(i as usize - 1) - j;
        let leg = self.parts[i as usize..]
            .iter()
            .take_while(|&&p| p >= j)
            .count() as u32;
        arm + leg + 1
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl FromStr for Partition {
    type Err = Error;

    /// Parses `"[3,1,1]"`; `"[]"` is the empty partition. Parts must already
    /// be weakly decreasing (zeros are allowed and dropped).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let inner = s
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("partition must look like [a,b,...]: {s:?}")))?;
        let inner = inner.trim();
        if inner.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = inner
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|e| Error::Parse(format!("bad part {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts not weakly decreasing: {s:?}")));
        }
        Ok(Partition::new(parts))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Cycle-type data of a conjugacy class `C(mu)` of `S_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassData {
    pub mu: Partition,
    /// `z_mu = prod_i m_i! i^{m_i}`, the centralizer order.
    pub z: u64,
    /// `|C(mu)| = d! / z_mu`.
    pub class_size: u64,
}

/// `n!` as `u64`; panics above 20.
pub fn factorial(n: u32) -> u64 {
    assert!(n <= 20, "factorial({n}) overflows u64");
    (1..=n as u64).product()
}

/// All partitions of `d` in reverse lexicographic order: `(d)` first, `(1^d)` last.
pub fn partitions_of(d: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, d, &mut Vec::new(), &mut out);
    out
}

/// All partitions with `|lambda| <= max_size`, grouped by size ascending.
pub fn partitions_up_to(max_size: u32) -> Vec<Partition> {
    (0..=max_size).flat_map(partitions_of).collect()
}

/// Conjugate (transposed) diagram.
pub fn transpose(lambda: &Partition) -> Partition {
    let cols = lambda.part(0);
    let parts = (1..=cols)
        .map(|j| lambda.parts.iter().take_while(|&&p| p >= j).count() as u32)
        .collect();
    Partition { parts }
}

/// Dimension of the irreducible `S_d` representation via the hook length formula.
pub fn dim_irrep(lambda: &Partition) -> u64 {
    let d = lambda.size();
    let hooks: u64 = lambda
        .cells()
        .map(|(i, j)| lambda.hook_length(i, j) as u64)
        .product();
    factorial(d) / hooks
}

/// `kappa_lambda = sum_i lambda_i (lambda_i - 2i + 1)`.
pub fn kappa(lambda: &Partition) -> i64 {
    lambda
        .parts
        .iter()
        .enumerate()
        .map(|(idx, &l)| {
            let l = l as i64;
            let i = idx as i64 + 1;
            l * (l - 2 * i + 1)
        })
        .sum()
}

/// Centralizer order and class size of the cycle type `mu`.
pub fn class_data(mu: &Partition) -> ClassData {
    let z = mu
        .multiplicities()
        .into_iter()
        .map(|(i, m)| factorial(m) * (i as u64).pow(m))
        .product::<u64>();
    let class_size = factorial(mu.size()) / z;
    ClassData {
        mu: mu.clone(),
        z,
        class_size,
    }
}

thread_local! {
    static CHARACTER_MEMO: RefCell<HashMap<(Partition, Vec<u32>), i64>> = RefCell::new(HashMap::new());
}

/// Irreducible character `chi_lambda(C(mu))` by the Murnaghan–Nakayama rule.
pub fn character(lambda: &Partition, mu: &Partition) -> Result<i64> {
    if lambda.size() != mu.size() {
        return Err(Error::SizeMismatch {
            expected: lambda.size() as usize,
            found: mu.size() as usize,
        });
    }
    Ok(mn_character(lambda, mu.parts()))
}

fn mn_character(lambda: &Partition, mu: &[u32]) -> i64 {
    let Some((&r, rest)) = mu.split_first() else {
        return 1;
    };
    let key = (lambda.clone(), mu.to_vec());
    if let Some(v) = CHARACTER_MEMO.with(|m| m.borrow().get(&key).copied()) {
        return v;
    }

    // beta-set: first-column hook lengths, distinct, strictly decreasing
    let len = lambda.len();
    let beta: Vec<u32> = (0..len)
        .map(|i| lambda.parts[i] + (len - 1 - i) as u32)
        .collect();
    let mut total = 0i64;
    for (idx, &x) in beta.iter().enumerate() {
        if x < r {
            continue;
        }
        let target = x - r;
        if beta.contains(&target) {
            continue;
        }
        // beads strictly between target and x give the leg length
        let height = beta.iter().filter(|&&y| y > target && y < x).count();
        let mut moved = beta.clone();
        moved[idx] = target;
        moved.sort_unstable_by(|a, b| b.cmp(a));
        let parts = moved
            .iter()
            .enumerate()
            .map(|(i, &b)| b - (len - 1 - i) as u32)
            .collect();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        total += sign * mn_character(&Partition::new(parts), rest);
    }
    CHARACTER_MEMO.with(|m| m.borrow_mut().insert(key, total));
    total
}

/// Central character `f_lambda(mu) = chi_lambda(mu) |C(mu)| / dim lambda`.
pub fn f_class(lambda: &Partition, mu: &Partition) -> Result<BigRational> {
    let chi = character(lambda, mu)?;
    let size = class_data(mu).class_size;
    Ok(BigRational::new(
        BigInt::from(chi) * BigInt::from(size),
        BigInt::from(dim_irrep(lambda)),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn enumeration_order_and_counts() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        let counts: Vec<usize> = (0..=10).map(|d| partitions_of(d).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]);
    }

    #[test]
    fn transpose_examples() {
        assert_eq!(transpose(&p(&[1])), p(&[1]));
        assert_eq!(transpose(&p(&[3, 1])), p(&[2, 1, 1]));
        assert_eq!(transpose(&p(&[2, 2])), p(&[2, 2]));
        assert_eq!(transpose(&Partition::empty()), Partition::empty());
    }

    #[test]
    fn dims_and_kappa() {
        assert_eq!(dim_irrep(&p(&[1, 1, 1])), 1);
        assert_eq!(dim_irrep(&p(&[2, 1])), 2);
        assert_eq!(dim_irrep(&p(&[2, 2])), 2);
        assert_eq!(dim_irrep(&Partition::empty()), 1);
        assert_eq!(kappa(&p(&[1])), 0);
        assert_eq!(kappa(&p(&[2])), 2);
        assert_eq!(kappa(&p(&[1, 1])), -2);
    }

    #[test]
    fn class_data_examples() {
        let c = class_data(&p(&[1, 1, 1]));
        assert_eq!((c.z, c.class_size), (6, 1));
        let c = class_data(&p(&[2, 1]));
        assert_eq!((c.z, c.class_size), (2, 3));
        let c = class_data(&p(&[3]));
        assert_eq!((c.z, c.class_size), (3, 2));
    }

    #[test]
    fn character_examples() {
        for mu in partitions_of(4) {
            assert_eq!(character(&p(&[4]), &mu).unwrap(), 1);
        }
        assert_eq!(character(&p(&[1, 1]), &p(&[2])).unwrap(), -1);
        assert_eq!(character(&p(&[2, 1]), &p(&[3])).unwrap(), -1);
        assert!(matches!(
            character(&p(&[2, 1]), &p(&[2])),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn f_class_examples() {
        let one = BigRational::from_integer(1.into());
        for d in 2..=6 {
            for lambda in partitions_of(d) {
                assert_eq!(f_class(&lambda, &Partition::column(d)).unwrap(), one);
                let expected = BigRational::new(kappa(&lambda).into(), 2.into());
                assert_eq!(
                    f_class(&lambda, &Partition::transposition(d)).unwrap(),
                    expected
                );
            }
        }
        assert_eq!(f_class(&p(&[2]), &p(&[2])).unwrap(), one);
        assert!(f_class(&p(&[2]), &p(&[1])).is_err());
    }

    #[test]
    fn parse_and_display() {
        let l: Partition = "[3,1,1]".parse().unwrap();
        assert_eq!(l, p(&[3, 1, 1]));
        assert_eq!(l.to_string(), "[3,1,1]");
        assert_eq!("[]".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "[]");
        assert_eq!(p(&[2, 0, 1]), p(&[2, 1]));
        assert!("[1,2]".parse::<Partition>().is_err());
        assert!("3,1".parse::<Partition>().is_err());
    }

    #[test]
    fn hook_lengths() {
        let l = p(&[3, 1]);
        let hooks: Vec<u32> = l.cells().map(|(i, j)| l.hook_length(i, j)).collect();
        assert_eq!(hooks, vec![4, 2, 1, 1]);
    }
}
