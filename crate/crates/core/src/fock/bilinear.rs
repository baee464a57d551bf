//! Fermion bilinears `Â = Σ a_{ij} :ψ_{−i} ψ*_j:` of finite band, and their
//! matrices on the truncated basis `{|λ, s⟩ : |λ| ≤ d_max}`.
//!
//! A band-`m` component with weight `w` is `Σ_n w(n) :ψ_{−n+m} ψ*_n:`, i.e.
//! `a_{n−m, n} = w(n)`. It moves a particle from level `n` to `n − m` and
//! lowers `|λ|` by `m`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::combinat::{kappa, partitions_up_to, Partition};
use crate::error::{Error, Result};
use crate::series::{ratio, BetaMode, ParamScalar};

use super::maya::{bilinear_action, FockIndex};

/// Weight `n ↦ w(n)` of one band.
pub type Weight = Arc<dyn Fn(i64) -> ParamScalar + Send + Sync>;

/// A finite sum of bands; repeated offsets add.
#[derive(Clone)]
pub struct BilinearSpec {
    mode: BetaMode,
    bands: Vec<(i64, Weight)>,
}

impl fmt::Debug for BilinearSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let offsets: Vec<i64> = self.bands.iter().map(|(m, _)| *m).collect();
        write!(
            f,
            "BilinearSpec {{ mode: {}, offsets: {offsets:?} }}",
            self.mode
        )
    }
}

impl BilinearSpec {
    pub fn new(mode: BetaMode) -> Self {
        BilinearSpec {
            mode,
            bands: Vec::new(),
        }
    }

    /// Adds a band `Σ_n w(n) :ψ_{−n+m} ψ*_n:`.
    pub fn band(mut self, m: i64, w: impl Fn(i64) -> ParamScalar + Send + Sync + 'static) -> Self {
        self.bands.push((m, Arc::new(w)));
        self
    }

    pub fn mode(&self) -> BetaMode {
        self.mode
    }

    pub fn bands(&self) -> impl Iterator<Item = (i64, &Weight)> {
        self.bands.iter().map(|(m, w)| (*m, w))
    }

    /// Largest `|m|` over the bands.
    pub fn width(&self) -> i64 {
        self.bands.iter().map(|(m, _)| m.abs()).max().unwrap_or(0)
    }

    /// Matrix entry `a_{ij}`.
    pub fn entry(&self, i: i64, j: i64) -> ParamScalar {
        let mut out = ParamScalar::zero(self.mode);
        for (m, w) in &self.bands {
            if i == j - m {
                out += &w(j);
            }
        }
        out
    }

    /// Matrix product `AB` in `gl(∞)`: `(AB)_{n−m_A−m_B, n} = w_A(n − m_B) w_B(n)`.
    pub fn compose(&self, other: &BilinearSpec) -> BilinearSpec {
        let mut out = BilinearSpec::new(self.mode);
        for (ma, wa) in &self.bands {
            for (mb, wb) in &other.bands {
                let (wa, wb, mb) = (wa.clone(), wb.clone(), *mb);
                out.bands
                    .push((ma + mb, Arc::new(move |n| &wa(n - mb) * &wb(n))));
            }
        }
        out
    }

    pub fn scaled(&self, c: ParamScalar) -> BilinearSpec {
        let mut out = BilinearSpec::new(self.mode);
        for (m, w) in &self.bands {
            let (w, c) = (w.clone(), c.clone());
            out.bands.push((*m, Arc::new(move |n| &w(n) * &c)));
        }
        out
    }

    pub fn plus(&self, other: &BilinearSpec) -> BilinearSpec {
        let mut out = self.clone();
        out.bands.extend(other.bands.iter().cloned());
        out
    }

    /// `[A, B] = AB − BA` in `gl(∞)`.
    pub fn bracket(&self, other: &BilinearSpec) -> BilinearSpec {
        self.compose(other).plus(
            &other
                .compose(self)
                .scaled(ParamScalar::from_int(-1, self.mode)),
        )
    }
}

/// `γ(A, B) = Σ_{i≤0<j} a_{ij} b_{ji} − Σ_{i>0≥j} a_{ij} b_{ji}`, the
/// central term in `[Â, B̂] = hat([A, B]) + γ(A, B)`.
pub fn cocycle(a: &BilinearSpec, b: &BilinearSpec) -> ParamScalar {
    let mut out = ParamScalar::zero(a.mode);
    for (ma, wa) in &a.bands {
        for (mb, wb) in &b.bands {
            if ma + mb != 0 {
                continue;
            }
            // a_{i, i+ma} b_{i+ma, i}
            if *ma > 0 {
                for i in (1 - ma)..=0 {
                    out += &(&wa(i + ma) * &wb(i));
                }
            } else if *ma < 0 {
                for i in 1..=(-ma) {
                    out = &out - &(&wa(i + ma) * &wb(i));
                }
            }
        }
    }
    out
}

/// The basis `{λ : |λ| ≤ d_max}` with a lookup table.
#[derive(Debug)]
pub struct Basis {
    pub d_max: u32,
    pub parts: Vec<Partition>,
    index: HashMap<Partition, usize>,
}

impl Basis {
    pub fn new(d_max: u32) -> Self {
        let parts = partitions_up_to(d_max);
        let index = parts
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        Basis {
            d_max,
            parts,
            index,
        }
    }

    pub fn index_of(&self, p: &Partition) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

/// Matrix of a charge-preserving operator on `{|λ, s⟩ : |λ| ≤ d_max}`.
///
/// Column `μ` is *complete* when every component of the operator applied to
/// `|μ, s⟩` lies inside the basis, so products can be formed exactly on it.
#[derive(Clone, Debug)]
pub struct BilinearOp {
    basis: Arc<Basis>,
    s: i64,
    mode: BetaMode,
    cols: Vec<BTreeMap<usize, ParamScalar>>,
    complete: Vec<bool>,
}

impl BilinearOp {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn charge(&self) -> i64 {
        self.s
    }

    pub fn mode(&self) -> BetaMode {
        self.mode
    }

    pub fn d_max(&self) -> u32 {
        self.basis.d_max
    }

    pub fn is_complete(&self, col: usize) -> bool {
        self.complete[col]
    }

    /// `⟨λ, s| A |μ, s⟩`; `None` if either label is outside the basis.
    pub fn entry(&self, lambda: &Partition, mu: &Partition) -> Option<ParamScalar> {
        let i = self.basis.index_of(lambda)?;
        let j = self.basis.index_of(mu)?;
        Some(
            self.cols[j]
                .get(&i)
                .cloned()
                .unwrap_or_else(|| ParamScalar::zero(self.mode)),
        )
    }

    /// Diagonal entry at `λ`.
    pub fn diagonal(&self, lambda: &Partition) -> Option<ParamScalar> {
        self.entry(lambda, lambda)
    }

    /// Nonzero entries of column `μ` as `(λ, value)`.
    pub fn column(&self, mu: &Partition) -> Vec<(Partition, ParamScalar)> {
        match self.basis.index_of(mu) {
            None => Vec::new(),
            Some(j) => self.cols[j]
                .iter()
                .map(|(i, v)| (self.basis.parts[*i].clone(), v.clone()))
                .collect(),
        }
    }

    pub fn is_diagonal(&self) -> bool {
        self.cols
            .iter()
            .enumerate()
            .all(|(j, c)| c.keys().all(|&i| i == j))
    }

    pub fn identity(basis: Arc<Basis>, s: i64, mode: BetaMode) -> Self {
        Self::from_diagonal(basis, s, mode, |_| ParamScalar::one(mode))
    }

    pub fn from_diagonal(
        basis: Arc<Basis>,
        s: i64,
        mode: BetaMode,
        f: impl Fn(&Partition) -> ParamScalar,
    ) -> Self {
        let cols = basis
            .parts
            .iter()
            .enumerate()
            .map(|(j, p)| {
                let v = f(p);
                let mut c = BTreeMap::new();
                if !v.is_zero() {
                    c.insert(j, v);
                }
                c
            })
            .collect();
        let n = basis.len();
        BilinearOp {
            basis,
            s,
            mode,
            cols,
            complete: vec![true; n],
        }
    }

    /// Applies `f` to every diagonal entry; fails on a non-diagonal operator.
    pub fn map_diagonal(&self, f: impl Fn(&ParamScalar) -> Result<ParamScalar>) -> Result<Self> {
        if !self.is_diagonal() {
            return Err(Error::NotInvertible("operator is not diagonal".into()));
        }
        let zero = ParamScalar::zero(self.mode);
        let mut out = self.clone();
        for (j, c) in out.cols.iter_mut().enumerate() {
            let v = f(c.get(&j).unwrap_or(&zero))?;
            c.clear();
            if !v.is_zero() {
                c.insert(j, v);
            }
        }
        Ok(out)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.s != other.s || self.basis.d_max != other.basis.d_max {
            return Err(Error::DegreeMismatch {
                left: self.basis.d_max,
                right: other.basis.d_max,
            });
        }
        if self.mode != other.mode {
            return Err(Error::BetaModeMismatch {
                left: self.mode.to_string(),
                right: other.mode.to_string(),
            });
        }
        Ok(())
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (j, c) in other.cols.iter().enumerate() {
            for (i, v) in c {
                let slot = out.cols[j]
                    .entry(*i)
                    .or_insert_with(|| ParamScalar::zero(self.mode));
                *slot = &*slot + &v.scale_int(sign);
                if slot.is_zero() {
                    out.cols[j].remove(i);
                }
            }
            out.complete[j] = self.complete[j] && other.complete[j];
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn scalar_mul(&self, c: &ParamScalar) -> Self {
        let mut out = self.clone();
        for col in out.cols.iter_mut() {
            let mut next = BTreeMap::new();
            for (i, v) in col.iter() {
                let x = v * c;
                if !x.is_zero() {
                    next.insert(*i, x);
                }
            }
            *col = next;
        }
        out
    }

    /// Matrix product. Column `μ` of `AB` is complete iff column `μ` of `B`
    /// is complete and `A` is complete on every column `B` reaches from `μ`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let n = self.basis.len();
        let mut cols = vec![BTreeMap::new(); n];
        let mut complete = vec![false; n];
        for j in 0..n {
            let mut acc: BTreeMap<usize, ParamScalar> = BTreeMap::new();
            let mut ok = other.complete[j];
            for (k, b) in &other.cols[j] {
                ok &= self.complete[*k];
                for (i, a) in &self.cols[*k] {
                    acc.entry(*i)
                        .or_insert_with(|| ParamScalar::zero(self.mode))
                        .add_product(a, b);
                }
            }
            acc.retain(|_, v| !v.is_zero());
            cols[j] = acc;
            complete[j] = ok;
        }
        Ok(BilinearOp {
            basis: self.basis.clone(),
            s: self.s,
            mode: self.mode,
            cols,
            complete,
        })
    }

    /// `AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// Columns complete in both operators where they differ; empty means
    /// equality on every jointly complete column.
    pub fn mismatches(&self, other: &Self) -> Result<Vec<(Partition, Partition)>> {
        self.check(other)?;
        let zero = ParamScalar::zero(self.mode);
        let mut out = Vec::new();
        for j in 0..self.basis.len() {
            if !(self.complete[j] && other.complete[j]) {
                continue;
            }
            let rows: std::collections::BTreeSet<usize> = self.cols[j]
                .keys()
                .chain(other.cols[j].keys())
                .copied()
                .collect();
            for i in rows {
                let a = self.cols[j].get(&i).unwrap_or(&zero);
                let b = other.cols[j].get(&i).unwrap_or(&zero);
                if a != b {
                    out.push((self.basis.parts[i].clone(), self.basis.parts[j].clone()));
                }
            }
        }
        Ok(out)
    }

    /// Number of complete columns.
    pub fn complete_count(&self) -> usize {
        self.complete.iter().filter(|&&c| c).count()
    }
}

/// Matrix of `Â` on the truncated charge-`s` sector.
pub fn bilinear_on(spec: &BilinearSpec, basis: Arc<Basis>, s: i64) -> BilinearOp {
    let n = basis.len();
    let mut cols = vec![BTreeMap::new(); n];
    let mut complete = vec![true; n];
    for (j, mu) in basis.parts.iter().enumerate() {
        let idx = FockIndex::new(mu.clone(), s);
        let mut acc: BTreeMap<usize, ParamScalar> = BTreeMap::new();
        for (m, w) in &spec.bands {
            for (target, level, sign) in bilinear_action(&idx, *m) {
                let v = w(level).scale_int(sign);
                if v.is_zero() {
                    continue;
                }
                match basis.index_of(&target.lambda) {
                    Some(i) => {
                        let slot = acc.entry(i).or_insert_with(|| ParamScalar::zero(spec.mode));
                        *slot = &*slot + &v;
                    }
                    None => complete[j] = false,
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        cols[j] = acc;
    }
    BilinearOp {
        basis,
        s,
        mode: spec.mode,
        cols,
        complete,
    }
}

/// Matrix of `Â` on `{|λ, s⟩ : |λ| ≤ d_max}`.
pub fn bilinear(spec: &BilinearSpec, d_max: u32, s: i64) -> BilinearOp {
    bilinear_on(spec, Arc::new(Basis::new(d_max)), s)
}

/// `Δ`: weight `n`, giving `L₀`.
pub fn spec_l0(mode: BetaMode) -> BilinearSpec {
    BilinearSpec::new(mode).band(0, move |n| ParamScalar::from_int(n, mode))
}

/// `Δ²`: weight `n²`, giving `W₀`.
pub fn spec_w0(mode: BetaMode) -> BilinearSpec {
    BilinearSpec::new(mode).band(0, move |n| ParamScalar::from_int(n * n, mode))
}

/// `Λ^m`: weight `1` at offset `m`, giving `J_m`.
pub fn spec_j(m: i64, mode: BetaMode) -> BilinearSpec {
    BilinearSpec::new(mode).band(m, move |_| ParamScalar::one(mode))
}

/// `½(Δ − ½)²`: weight `(n − ½)²/2`, giving the fermionic cut-and-join `M₀`.
pub fn spec_m0(mode: BetaMode) -> BilinearSpec {
    BilinearSpec::new(mode).band(0, move |n| {
        ParamScalar::from_rational(ratio((2 * n - 1) * (2 * n - 1), 8), mode)
    })
}

/// `e^{c β}` for a rational `c` in the truncated ring.
fn exp_beta(c: num_rational::BigRational, mode: BetaMode) -> ParamScalar {
    ParamScalar::beta(mode)
        .scale(&c)
        .exp_nilpotent()
        .expect("beta is nilpotent in truncated mode")
}

/// `Λ^{±k} e^{βkΔ}`: weight `e^{βkn}` at offset `±k`.
pub fn spec_lambda_exp(k: i64, sign: i64, mode: BetaMode) -> BilinearSpec {
    BilinearSpec::new(mode).band(sign * k, move |n| exp_beta(ratio(k * n, 1), mode))
}

/// The quantum torus generator `V^{(k)}_m = q^{−km} Σ_n q^{kn} :ψ_{−n+m} ψ*_n:`
/// with `q = e^β`.
pub fn spec_quantum_torus(k: i64, m: i64, mode: BetaMode) -> BilinearSpec {
    BilinearSpec::new(mode).band(m, move |n| exp_beta(ratio(k * (n - m), 1), mode))
}

/// `L₀`, `W₀`, `J₀` on the truncated sector.
pub fn build_l0(d_max: u32, s: i64, mode: BetaMode) -> BilinearOp {
    bilinear(&spec_l0(mode), d_max, s)
}

pub fn build_w0(d_max: u32, s: i64, mode: BetaMode) -> BilinearOp {
    bilinear(&spec_w0(mode), d_max, s)
}

pub fn build_j(m: i64, d_max: u32, s: i64, mode: BetaMode) -> BilinearOp {
    bilinear(&spec_j(m, mode), d_max, s)
}

/// `M₀ = W₀/2 − L₀/2 + J₀/8`.
pub fn build_m0_fermionic(d_max: u32, s: i64, mode: BetaMode) -> Result<BilinearOp> {
    let basis = Arc::new(Basis::new(d_max));
    let w = bilinear_on(&spec_w0(mode), basis.clone(), s);
    let l = bilinear_on(&spec_l0(mode), basis.clone(), s);
    let j = bilinear_on(&spec_j(0, mode), basis, s);
    let half = ParamScalar::from_rational(ratio(1, 2), mode);
    let eighth = ParamScalar::from_rational(ratio(1, 8), mode);
    w.scalar_mul(&half)
        .sub(&l.scalar_mul(&half))?
        .add(&j.scalar_mul(&eighth))
}

/// The diagonal element `g = e^{βW₀/2} Q^{L₀}` from its closed form
/// `exp(β/2 (κ_λ + (2s+1)|λ| + s(s+1)(2s+1)/6)) · Q^{|λ| + s(s+1)/2}`.
pub fn build_g(d_max: u32, s: i64, n_beta: u32) -> BilinearOp {
    let mode = BetaMode::Trunc(n_beta);
    BilinearOp::from_diagonal(Arc::new(Basis::new(d_max)), s, mode, |l| {
        let size = l.size() as i64;
        let w = kappa(l) + (2 * s + 1) * size + s * (s + 1) * (2 * s + 1) / 6;
        let qe = size + s * (s + 1) / 2;
        &exp_beta(ratio(w, 2), mode) * &ParamScalar::q_pow(qe as i32, mode)
    })
}

/// `Q^{±L₀}` from the diagonal of `L₀`.
pub fn q_pow_l0(sign: i32, d_max: u32, s: i64, mode: BetaMode) -> Result<BilinearOp> {
    build_l0(d_max, s, mode).map_diagonal(|v| {
        let e = v
            .as_rational()
            .and_then(|r| r.is_integer().then(|| r.to_integer()))
            .ok_or_else(|| Error::NotInvertible(format!("L0 eigenvalue {v}")))?;
        let e: i32 = i32::try_from(&e).map_err(|_| Error::ResourceBound("Q exponent".into()))?;
        Ok(ParamScalar::q_pow(sign * e, mode))
    })
}

/// `e^{±βW₀/2}` from the diagonal of `W₀`.
pub fn exp_w0(sign: i64, d_max: u32, s: i64, mode: BetaMode) -> Result<BilinearOp> {
    build_w0(d_max, s, mode).map_diagonal(|v| {
        (&ParamScalar::beta(mode) * v)
            .scale(&ratio(sign, 2))
            .exp_nilpotent()
    })
}

/// `([Â, B̂], γ(A, B))` on the truncated sector.
pub fn commutator_with_cocycle(
    a: &BilinearSpec,
    b: &BilinearSpec,
    d_max: u32,
    s: i64,
) -> Result<(BilinearOp, ParamScalar)> {
    let basis = Arc::new(Basis::new(d_max));
    let am = bilinear_on(a, basis.clone(), s);
    let bm = bilinear_on(b, basis, s);
    Ok((am.commutator(&bm)?, cocycle(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: BetaMode = BetaMode::Poly;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec())
    }

    #[test]
    fn diagonal_closed_forms() {
        for s in -3..=3i64 {
            let l0 = build_l0(6, s, P);
            let w0 = build_w0(6, s, P);
            let j0 = build_j(0, 6, s, P);
            assert!(l0.is_diagonal() && w0.is_diagonal() && j0.is_diagonal());
            for l in &l0.basis().parts {
                let size = l.size() as i64;
                assert_eq!(
                    l0.diagonal(l).unwrap(),
                    ParamScalar::from_int(size + s * (s + 1) / 2, P)
                );
                assert_eq!(
                    w0.diagonal(l).unwrap(),
                    ParamScalar::from_int(
                        kappa(l) + (2 * s + 1) * size + s * (s + 1) * (2 * s + 1) / 6,
                        P
                    )
                );
                assert_eq!(j0.diagonal(l).unwrap(), ParamScalar::from_int(s, P));
            }
        }
    }

    #[test]
    fn m0_examples() {
        let m = build_m0_fermionic(4, 0, P).unwrap();
        assert!(m.diagonal(&Partition::empty()).unwrap().is_zero());
        assert!(m.diagonal(&p(&[2])).unwrap().is_one());
        let m1 = build_m0_fermionic(4, 1, P).unwrap();
        assert_eq!(
            m1.diagonal(&p(&[1])).unwrap(),
            ParamScalar::from_rational(ratio(9, 8), P)
        );
        let direct = bilinear(&spec_m0(P), 4, 1);
        assert!(direct.mismatches(&m1).unwrap().is_empty());
    }

    #[test]
    fn g_examples() {
        let mode = BetaMode::Trunc(4);
        let g = build_g(3, 0, 4);
        assert!(g.diagonal(&Partition::empty()).unwrap().is_one());
        let e = |c: i64| exp_beta(ratio(c, 2), mode);
        assert_eq!(
            g.diagonal(&p(&[1])).unwrap(),
            &e(1) * &ParamScalar::q_pow(1, mode)
        );
        assert_eq!(
            g.diagonal(&p(&[2])).unwrap(),
            &e(4) * &ParamScalar::q_pow(2, mode)
        );
    }

    #[test]
    fn g_factorizes() {
        let mode = BetaMode::Trunc(4);
        for s in -2..=2 {
            let g = build_g(5, s, 4);
            let prod = exp_w0(1, 5, s, mode)
                .unwrap()
                .mul(&q_pow_l0(1, 5, s, mode).unwrap())
                .unwrap();
            assert!(g.mismatches(&prod).unwrap().is_empty());
        }
    }

    #[test]
    fn cocycle_examples() {
        assert!(cocycle(&spec_j(1, P), &spec_j(-1, P)).is_one());
        assert!(cocycle(&spec_l0(P), &spec_l0(P)).is_zero());
        assert_eq!(
            cocycle(&spec_j(3, P), &spec_j(-3, P)),
            ParamScalar::from_int(3, P)
        );
        let (c, gamma) = commutator_with_cocycle(&spec_j(1, P), &spec_j(-1, P), 6, 0).unwrap();
        let id = BilinearOp::identity(Arc::new(Basis::new(6)), 0, P).scalar_mul(&gamma);
        assert!(c.mismatches(&id).unwrap().is_empty());
        assert!(c.complete_count() > 0);
    }

    #[test]
    fn commutator_is_bracket_plus_cocycle() {
        let mode = BetaMode::Trunc(3);
        let specs = vec![
            spec_j(1, mode),
            spec_j(-2, mode),
            spec_l0(mode),
            spec_w0(mode),
            spec_lambda_exp(1, 1, mode),
            spec_lambda_exp(2, -1, mode),
        ];
        for s in -1..=1 {
            let basis = Arc::new(Basis::new(5));
            for a in &specs {
                for b in &specs {
                    let (c, gamma) = commutator_with_cocycle(a, b, 5, s).unwrap();
                    let hat = bilinear_on(&a.bracket(b), basis.clone(), s);
                    let id = BilinearOp::identity(basis.clone(), s, mode).scalar_mul(&gamma);
                    let rhs = hat.add(&id).unwrap();
                    assert!(c.mismatches(&rhs).unwrap().is_empty(), "{a:?} {b:?} s={s}");
                }
            }
        }
    }

    #[test]
    fn quantum_torus_diagonal_resummation() {
        let mode = BetaMode::Trunc(4);
        for k in 1..=2i64 {
            for s in -2..=2i64 {
                let v = bilinear(&spec_quantum_torus(k, 0, mode), 5, s);
                for l in &v.basis().parts {
                    let q = |n: i64| exp_beta(ratio(k * n, 1), mode);
                    let mut expected = ParamScalar::zero(mode);
                    for i in 1..=l.len() as i64 {
                        let lam = l.part(i as usize - 1) as i64;
                        expected = &(&expected + &q(lam + s - i + 1)) - &q(s - i + 1);
                    }
                    if s > 0 {
                        for n in 1..=s {
                            expected = &expected + &q(n);
                        }
                    } else {
                        for n in (s + 1)..=0 {
                            expected = &expected - &q(n);
                        }
                    }
                    assert_eq!(v.diagonal(l).unwrap(), expected, "k={k} s={s} {l}");
                }
            }
        }
        let v00 = bilinear(&spec_quantum_torus(0, 0, mode), 4, 2);
        assert!(v00.mismatches(&build_j(0, 4, 2, mode)).unwrap().is_empty());
    }
}
