//! Fermionic basis states as Maya diagrams.
//!
//! `|λ, s⟩` occupies the levels `{λ_i + s − i + 1}`; the charge-`s` vacuum
//! occupies every level `≤ s`. `ψ_{−j}` creates a particle at level `j` and
//! `ψ*_j` removes one, each with sign `(−1)^{#occupied levels above j}`.
//! With this ordering the displayed products of modes building `|λ,s⟩` from
//! `|s⟩` (and the dual bras) carry sign `+1`.

use std::collections::BTreeSet;
use std::fmt;

use crate::combinat::Partition;

/// A basis vector `|λ, s⟩`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FockIndex {
    pub lambda: Partition,
    pub s: i64,
}

impl FockIndex {
    pub fn new(lambda: Partition, s: i64) -> Self {
        FockIndex { lambda, s }
    }

    pub fn vacuum(s: i64) -> Self {
        FockIndex {
            lambda: Partition::empty(),
            s,
        }
    }
}

impl fmt::Display for FockIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "|{},{}⟩", self.lambda, self.s)
    }
}

/// A fermion mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// `ψ_n`, creates level `−n`.
    Psi(i64),
    /// `ψ*_n`, annihilates level `n`.
    PsiStar(i64),
}

/// Occupied set with every level `≤ floor` filled and an explicit set above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MayaState {
    floor: i64,
    above: BTreeSet<i64>,
}

impl MayaState {
    /// Builds the Maya diagram of `|λ, s⟩` with room for `band` extra
    /// levels of movement below the lowest hole.
    pub fn from_index(idx: &FockIndex, band: i64) -> Self {
        let len = idx.lambda.len() as i64;
        let floor = idx.s.min(0) - len - band - 1;
        let mut above = BTreeSet::new();
        for i in 1..=(idx.s - floor) {
            let lam = idx.lambda.part(i as usize - 1) as i64;
            above.insert(lam + idx.s - i + 1);
        }
        MayaState { floor, above }
    }

    /// Canonical `(λ, s)` label.
    pub fn to_index(&self) -> FockIndex {
        let s = self.floor + self.above.len() as i64;
        let parts = self
            .above
            .iter()
            .rev()
            .enumerate()
            .map(|(i, &a)| (a - s + i as i64) as u32)
            .collect();
        FockIndex {
            lambda: Partition::new(parts),
            s,
        }
    }

    fn lower_floor_to(&mut self, level: i64) {
        while self.floor >= level {
            self.above.insert(self.floor);
            self.floor -= 1;
        }
    }

    pub fn is_occupied(&self, level: i64) -> bool {
        level <= self.floor || self.above.contains(&level)
    }

    fn count_above(&self, level: i64) -> usize {
        self.above.range(level + 1..).count()
    }

    /// Places a particle at `level`; `None` if it is already there.
    pub fn create(&mut self, level: i64) -> Option<i64> {
        self.lower_floor_to(level);
        if self.above.contains(&level) {
            return None;
        }
        let sign = if self.count_above(level).is_multiple_of(2) {
            1
        } else {
            -1
        };
        self.above.insert(level);
        Some(sign)
    }

    /// Removes the particle at `level`; `None` if the level is empty.
    pub fn annihilate(&mut self, level: i64) -> Option<i64> {
        self.lower_floor_to(level);
        if !self.above.contains(&level) {
            return None;
        }
        let sign = if self.count_above(level).is_multiple_of(2) {
            1
        } else {
            -1
        };
        self.above.remove(&level);
        Some(sign)
    }

    /// Applies one mode, returning the sign or `None` for the zero vector.
    pub fn apply(&mut self, mode: Mode) -> Option<i64> {
        match mode {
            Mode::Psi(n) => self.create(-n),
            Mode::PsiStar(n) => self.annihilate(n),
        }
    }
}

/// `mode |idx⟩ = sign · |result⟩`, or `None` if it vanishes.
pub fn apply_mode(idx: &FockIndex, mode: Mode) -> Option<(i64, FockIndex)> {
    let mut st = MayaState::from_index(idx, 0);
    let sign = st.apply(mode)?;
    Some((sign, st.to_index()))
}

/// Applies a word of modes right to left (the last entry acts first).
pub fn apply_word(idx: &FockIndex, word: &[Mode]) -> Option<(i64, FockIndex)> {
    let mut st = MayaState::from_index(idx, 0);
    let mut sign = 1;
    for &m in word.iter().rev() {
        sign *= st.apply(m)?;
    }
    Some((sign, st.to_index()))
}

/// The word of modes creating `|λ, s⟩` from `|s⟩`:
/// `ψ_{−λ₁−s} ⋯ ψ_{−λ_n−s+n−1} ψ*_{s−n+1} ⋯ ψ*_s`.
pub fn ket_word(idx: &FockIndex) -> Vec<Mode> {
    let n = idx.lambda.len() as i64;
    let s = idx.s;
    let mut word: Vec<Mode> = (1..=n)
        .map(|i| Mode::Psi(-(idx.lambda.part(i as usize - 1) as i64) - s + i - 1))
        .collect();
    word.extend((1..=n).map(|i| Mode::PsiStar(s - n + i)));
    word
}

/// The word following `⟨s|` in `⟨λ, s|`:
/// `ψ_{−s} ⋯ ψ_{−s+n−1} ψ*_{λ_n+s−n+1} ⋯ ψ*_{λ₁+s}`.
pub fn bra_word(idx: &FockIndex) -> Vec<Mode> {
    let n = idx.lambda.len() as i64;
    let s = idx.s;
    let mut word: Vec<Mode> = (0..n).map(|i| Mode::Psi(-s + i)).collect();
    word.extend(
        (1..=n)
            .rev()
            .map(|i| Mode::PsiStar(idx.lambda.part(i as usize - 1) as i64 + s - i + 1)),
    );
    word
}

/// `⟨λ, r | μ, s⟩` evaluated by letting the bra's word act on the ket.
pub fn pairing(bra: &FockIndex, ket: &FockIndex) -> i64 {
    match apply_word(ket, &bra_word(bra)) {
        Some((sign, res)) if res == FockIndex::vacuum(bra.s) => sign,
        _ => 0,
    }
}

/// Sparse action of `Σ_n w(n) :ψ_{−n+m} ψ*_n:` on `|idx⟩`, as `(target,
/// level n, sign)` triples; the weight is applied by the caller. For
/// `m = 0` the normal-ordered diagonal is returned as level list with the
/// convention that each listed `n` contributes `sign · w(n)`.
pub(crate) fn bilinear_action(idx: &FockIndex, m: i64) -> Vec<(FockIndex, i64, i64)> {
    let band = m.abs();
    let st = MayaState::from_index(idx, band);
    if m == 0 {
        // Σ_n w(n) (occ_n − [n ≤ 0]) over the finite window where they differ
        let hi = st
            .above
            .iter()
            .next_back()
            .copied()
            .unwrap_or(st.floor)
            .max(0);
        let mut out = Vec::new();
        for n in (st.floor + 1)..=hi {
            let occ = st.is_occupied(n) as i64;
            let vac = (n <= 0) as i64;
            if occ != vac {
                out.push((idx.clone(), n, occ - vac));
            }
        }
        return out;
    }
    let mut out = Vec::new();
    for &n in st.above.iter() {
        let target = n - m;
        if st.is_occupied(target) {
            continue;
        }
        let mut next = st.clone();
        let s1 = next.annihilate(n).expect("occupied");
        let s2 = next.create(target).expect("empty");
        out.push((next.to_index(), n, s1 * s2));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::partitions_up_to;

    fn idx(parts: &[u32], s: i64) -> FockIndex {
        FockIndex::new(Partition::new(parts.to_vec()), s)
    }

    #[test]
    fn round_trip_labels() {
        for l in partitions_up_to(6) {
            for s in -3..=3 {
                let i = FockIndex::new(l.clone(), s);
                for band in 0..3 {
                    assert_eq!(MayaState::from_index(&i, band).to_index(), i);
                }
            }
        }
    }

    #[test]
    fn vacuum_annihilation() {
        for s in -3..=3 {
            let v = FockIndex::vacuum(s);
            for n in -s..(-s + 5) {
                assert!(apply_mode(&v, Mode::Psi(n)).is_none());
            }
            for n in (s + 1)..(s + 5) {
                assert!(apply_mode(&v, Mode::PsiStar(n)).is_none());
            }
        }
    }

    #[test]
    fn displayed_ket_for_one_box() {
        let got = apply_word(&FockIndex::vacuum(0), &[Mode::Psi(-1), Mode::PsiStar(0)]);
        assert_eq!(got, Some((1, idx(&[1], 0))));
    }

    #[test]
    fn displayed_words_have_positive_sign() {
        for l in partitions_up_to(6) {
            for s in -3..=3 {
                let i = FockIndex::new(l.clone(), s);
                assert_eq!(
                    apply_word(&FockIndex::vacuum(s), &ket_word(&i)),
                    Some((1, i.clone()))
                );
            }
        }
    }

    #[test]
    fn duality() {
        let basis: Vec<FockIndex> = partitions_up_to(4)
            .into_iter()
            .flat_map(|l| (-2..=2).map(move |s| FockIndex::new(l.clone(), s)))
            .collect();
        for a in &basis {
            for b in &basis {
                assert_eq!(pairing(a, b), (a == b) as i64, "{a} {b}");
            }
        }
    }

    #[test]
    fn anticommutation() {
        for l in partitions_up_to(4) {
            for s in -2..=2 {
                let i = FockIndex::new(l.clone(), s);
                for m in -5..=5 {
                    for n in -5..=5 {
                        let mut total: std::collections::BTreeMap<FockIndex, i64> =
                            Default::default();
                        for word in [
                            [Mode::Psi(m), Mode::PsiStar(n)],
                            [Mode::PsiStar(n), Mode::Psi(m)],
                        ] {
                            if let Some((sign, st)) = apply_word(&i, &word) {
                                *total.entry(st).or_default() += sign;
                            }
                        }
                        total.retain(|_, c| *c != 0);
                        let mut expected = std::collections::BTreeMap::new();
                        if m + n == 0 {
                            expected.insert(i.clone(), 1);
                        }
                        assert_eq!(total, expected, "m={m} n={n} {i}");
                    }
                }
            }
        }
    }
}
