//! Exact arithmetic in `R_∞ = Γ[z, t]`.
//!
//! `Γ` is the ring generated by the Schur Q-functions `Q_r(x)` subject to
//! `Q_r² + 2 Σ_{i=1}^{r} (−1)^i Q_{r+i} Q_{r−i} = 0`. Products of distinct
//! `Q_r` form a ℤ-basis of `Γ`, so an element of `R_∞` is stored as a finite
//! map from (strict Q-monomial, z-monomial, t-monomial) to integers.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::rc::Rc;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::kstrict::{grassmannian_data, KStrictPartition};

/// Exponent or index storage with a small inline buffer.
pub type Exps = SmallVec<[u32; 6]>;

/// A strictly decreasing product `Q_{a_1} Q_{a_2} ⋯`; empty means `1`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial(Exps);

impl QMonomial {
    /// Builds a strictly decreasing monomial.
    pub fn new(indices: &[u32]) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] <= w[1]) || indices.contains(&0) {
            return Err(Error::InvalidPartition(format!(
                "{indices:?} is not a strictly decreasing list of positive indices"
            )));
        }
        Ok(QMonomial(indices.iter().copied().collect()))
    }

    pub fn one() -> Self {
        QMonomial(Exps::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u64 {
        self.0.iter().map(|&a| a as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }
}

/// A basis element `Q_λ z^α t^β` of `R_∞` over ℤ.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisKey {
    pub q: QMonomial,
    pub z: Exps,
    pub t: Exps,
}

fn trim(v: &mut Exps) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn exp_at(v: &Exps, i: usize) -> u32 {
    v.get(i).copied().unwrap_or(0)
}

fn set_exp(v: &mut Exps, i: usize, e: u32) {
    if v.len() <= i {
        v.resize(i + 1, 0);
    }
    v[i] = e;
    trim(v);
}

fn add_exps(a: &Exps, b: &Exps) -> Exps {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.clone();
    for (o, s) in out.iter_mut().zip(short.iter()) {
        *o += s;
    }
    out
}

impl BasisKey {
    /// Builds a key, trimming trailing zero exponents.
    pub fn new(q: QMonomial, z: &[u32], t: &[u32]) -> Self {
        let mut z: Exps = z.iter().copied().collect();
        let mut t: Exps = t.iter().copied().collect();
        trim(&mut z);
        trim(&mut t);
        BasisKey { q, z, t }
    }

    /// Total degree with `deg Q_r = r`, `deg z_i = deg t_i = 1`.
    pub fn degree(&self) -> u64 {
        self.q.degree()
            + self.z.iter().map(|&e| e as u64).sum::<u64>()
            + self.t.iter().map(|&e| e as u64).sum::<u64>()
    }

    fn display_ord(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.cmp(self))
    }
}

/// An element of `R_∞` in canonical form. Zero coefficients are never stored.
#[derive(Clone, Default)]
pub struct RingElement {
    terms: FxHashMap<BasisKey, BigInt>,
}

fn accumulate(map: &mut FxHashMap<BasisKey, BigInt>, key: BasisKey, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

type QReduceMemo = FxHashMap<Exps, Rc<Vec<(QMonomial, BigInt)>>>;
type S0Memo = FxHashMap<(bool, QMonomial), Rc<Vec<(QMonomial, u32, BigInt)>>>;

thread_local! {
    static Q_REDUCE: RefCell<QReduceMemo> =
        RefCell::new(FxHashMap::default());
    static S0_IMAGE: RefCell<S0Memo> =
        RefCell::new(FxHashMap::default());
}

/// Rewrites a weakly decreasing product of `Q`'s in the strict basis, as a
/// list of `(strict monomial, coefficient)` pairs.
fn reduce_q_list(indices: &[u32]) -> Rc<Vec<(QMonomial, BigInt)>> {
    if indices.windows(2).all(|w| w[0] > w[1]) {
        return Rc::new(vec![(QMonomial(indices.iter().copied().collect()), BigInt::one())]);
    }
    let key: Exps = indices.iter().copied().collect();
    if let Some(hit) = Q_REDUCE.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let p = indices.windows(2).position(|w| w[0] == w[1]).expect("has a repeat");
    let a = indices[p];
    let mut rest: Vec<u32> = indices[..p].to_vec();
    rest.extend_from_slice(&indices[p + 2..]);
    let mut acc: FxHashMap<QMonomial, BigInt> = FxHashMap::default();
    for i in 1..=a {
        let sign: i64 = if i % 2 == 1 { 2 } else { -2 };
        let mut next = rest.clone();
        next.push(a + i);
        if a > i {
            next.push(a - i);
        }
        next.sort_unstable_by(|x, y| y.cmp(x));
        for (m, c) in reduce_q_list(&next).iter() {
            let e = acc.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += c * sign;
        }
    }
    let mut out: Vec<(QMonomial, BigInt)> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    out.sort_by(|x, y| x.0.cmp(&y.0));
    let out = Rc::new(out);
    Q_REDUCE.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

fn merge_desc(a: &[u32], b: &[u32]) -> Exps {
    let mut out = Exps::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i] >= b[j]) {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out
}

/// Image of a strict Q-monomial under `s_0^z` (`z_side = true`, series
/// `(1+z_1u)/(1−z_1u)`) or `s_0^t` (series `(1−t_1u)/(1+t_1u)`), as triples
/// `(monomial, exponent of the variable, coefficient)`.
fn s0_image(q: &QMonomial, z_side: bool) -> Rc<Vec<(QMonomial, u32, BigInt)>> {
    let key = (z_side, q.clone());
    if let Some(hit) = S0_IMAGE.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let mut cur: FxHashMap<(Exps, u32), BigInt> = FxHashMap::default();
    cur.insert((Exps::new(), 0), BigInt::one());
    for &r in q.indices() {
        let mut next: FxHashMap<(Exps, u32), BigInt> = FxHashMap::default();
        for ((qs, e), c) in &cur {
            for j in 0..=r {
                let coef: i64 = if j == 0 {
                    1
                } else if z_side || j % 2 == 0 {
                    2
                } else {
                    -2
                };
                let mut nq = qs.clone();
                if r > j {
                    nq.push(r - j);
                }
                let v = next.entry((nq, e + j)).or_insert_with(BigInt::zero);
                *v += c * coef;
            }
        }
        cur = next;
    }
    let mut acc: FxHashMap<(QMonomial, u32), BigInt> = FxHashMap::default();
    for ((mut qs, e), c) in cur {
        qs.sort_unstable_by(|x, y| y.cmp(x));
        for (m, rc) in reduce_q_list(&qs).iter() {
            let v = acc.entry((m.clone(), e)).or_insert_with(BigInt::zero);
            *v += &c * rc;
        }
    }
    let mut out: Vec<(QMonomial, u32, BigInt)> = acc
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((m, e), c)| (m, e, c))
        .collect();
    out.sort_by(|x, y| (&x.0, x.1).cmp(&(&y.0, y.1)));
    let out = Rc::new(out);
    S0_IMAGE.with(|m| m.borrow_mut().insert(key, out.clone()));
    out
}

/// `Q_{a_1} ⋯ Q_{a_m}` for a weakly decreasing list, in the strict basis.
pub fn reduce_q_monomial(indices: &[u32]) -> RingElement {
    let mut sorted: Vec<u32> = indices.iter().copied().filter(|&a| a > 0).collect();
    sorted.sort_unstable_by(|x, y| y.cmp(x));
    let mut out = RingElement::zero();
    for (m, c) in reduce_q_list(&sorted).iter() {
        accumulate(&mut out.terms, BasisKey { q: m.clone(), ..Default::default() }, c.clone());
    }
    out
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement { terms: FxHashMap::default() }
    }

    pub fn one() -> Self {
        RingElement::constant(BigInt::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        RingElement::monomial(BasisKey::default(), c)
    }

    /// `c · key`.
    pub fn monomial(key: BasisKey, c: impl Into<BigInt>) -> Self {
        let mut out = RingElement::zero();
        accumulate(&mut out.terms, key, c.into());
        out
    }

    /// `Q_r` (with `Q_0 = 1`).
    pub fn q(r: u32) -> Self {
        if r == 0 {
            return RingElement::one();
        }
        RingElement::monomial(BasisKey { q: QMonomial(Exps::from_slice(&[r])), ..Default::default() }, 1)
    }

    /// The variable `z_i` (1-based).
    pub fn z(i: usize) -> Self {
        RingElement::z_pow(i, 1)
    }

    /// The variable `t_i` (1-based).
    pub fn t(i: usize) -> Self {
        RingElement::t_pow(i, 1)
    }

    pub fn z_pow(i: usize, e: u32) -> Self {
        assert!(i >= 1, "variables are 1-based");
        let mut key = BasisKey::default();
        set_exp(&mut key.z, i - 1, e);
        RingElement::monomial(key, 1)
    }

    pub fn t_pow(i: usize, e: u32) -> Self {
        assert!(i >= 1, "variables are 1-based");
        let mut key = BasisKey::default();
        set_exp(&mut key.t, i - 1, e);
        RingElement::monomial(key, 1)
    }

    /// Builds an element from `(key, coefficient)` pairs, merging duplicates.
    pub fn from_terms(terms: impl IntoIterator<Item = (BasisKey, BigInt)>) -> Self {
        let mut out = RingElement::zero();
        for (k, c) in terms {
            let mut k = k;
            trim(&mut k.z);
            trim(&mut k.t);
            if k.q.0.windows(2).any(|w| w[0] <= w[1]) {
                let qs: Vec<u32> = k.q.0.to_vec();
                for (m, rc) in reduce_q_list(&sorted_desc(&qs)).iter() {
                    accumulate(&mut out.terms, BasisKey { q: m.clone(), z: k.z.clone(), t: k.t.clone() }, &c * rc);
                }
            } else {
                accumulate(&mut out.terms, k, c);
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Coefficient of a basis element.
    pub fn coeff(&self, key: &BasisKey) -> BigInt {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    /// Terms in the canonical order: decreasing degree, then decreasing key.
    pub fn sorted_terms(&self) -> Vec<(&BasisKey, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.display_ord(b.0));
        v
    }

    /// Unordered iteration over the terms.
    pub fn terms(&self) -> impl Iterator<Item = (&BasisKey, &BigInt)> {
        self.terms.iter()
    }

    /// Degree of the highest term, or `None` for zero.
    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|k| k.degree()).max()
    }

    /// Whether every term has degree `d` (zero is homogeneous of every degree).
    pub fn is_homogeneous_of(&self, d: u64) -> bool {
        self.terms.keys().all(|k| k.degree() == d)
    }

    pub fn is_homogeneous(&self) -> bool {
        match self.degree() {
            None => true,
            Some(d) => self.is_homogeneous_of(d),
        }
    }

    /// Largest index `i` with `z_i` occurring.
    pub fn max_z(&self) -> usize {
        self.terms.keys().map(|k| k.z.len()).max().unwrap_or(0)
    }

    /// Largest index `i` with `t_i` occurring.
    pub fn max_t(&self) -> usize {
        self.terms.keys().map(|k| k.t.len()).max().unwrap_or(0)
    }

    /// Whether no `Q` and no `z` occurs.
    pub fn is_t_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.q.is_one() && k.z.is_empty())
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        if c.is_zero() {
            return RingElement::zero();
        }
        RingElement { terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect() }
    }

    /// Exact product.
    pub fn mul_ref(&self, other: &RingElement) -> RingElement {
        let (a, b) = if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut out: FxHashMap<BasisKey, BigInt> = FxHashMap::default();
        out.reserve(a.terms.len() * b.terms.len() / 2 + 1);
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let z = add_exps(&ka.z, &kb.z);
                let t = add_exps(&ka.t, &kb.t);
                let c = ca * cb;
                if ka.q.is_one() || kb.q.is_one() {
                    let q = if ka.q.is_one() { kb.q.clone() } else { ka.q.clone() };
                    accumulate(&mut out, BasisKey { q, z, t }, c);
                    continue;
                }
                let merged = merge_desc(&ka.q.0, &kb.q.0);
                if merged.windows(2).all(|w| w[0] > w[1]) {
                    accumulate(&mut out, BasisKey { q: QMonomial(merged), z, t }, c);
                } else {
                    for (m, rc) in reduce_q_list(&merged).iter() {
                        accumulate(&mut out, BasisKey { q: m.clone(), z: z.clone(), t: t.clone() }, &c * rc);
                    }
                }
            }
        }
        RingElement { terms: out }
    }

    /// `f^e`.
    pub fn pow(&self, e: u32) -> RingElement {
        let mut out = RingElement::one();
        for _ in 0..e {
            out = out.mul_ref(self);
        }
        out
    }

    fn swap_vars(&self, i: usize, z_side: bool) -> RingElement {
        let mut out = FxHashMap::default();
        out.reserve(self.terms.len());
        for (k, c) in &self.terms {
            let mut k = k.clone();
            let v = if z_side { &mut k.z } else { &mut k.t };
            let a = exp_at(v, i - 1);
            let b = exp_at(v, i);
            if a != b {
                set_exp(v, i, a);
                set_exp(v, i - 1, b);
            }
            out.insert(k, c.clone());
        }
        RingElement { terms: out }
    }

    fn s0(&self, z_side: bool) -> RingElement {
        let mut out = FxHashMap::default();
        for (k, c) in &self.terms {
            let v = if z_side { &k.z } else { &k.t };
            let e1 = exp_at(v, 0);
            let base = if e1 % 2 == 1 { -c.clone() } else { c.clone() };
            let img = s0_image(&k.q, z_side);
            for (m, e, ic) in img.iter() {
                let mut nk = BasisKey { q: m.clone(), z: k.z.clone(), t: k.t.clone() };
                let v = if z_side { &mut nk.z } else { &mut nk.t };
                set_exp(v, 0, e1 + e);
                accumulate(&mut out, nk, &base * ic);
            }
        }
        RingElement { terms: out }
    }

    /// Left action `s_i^t`.
    pub fn s_t(&self, i: usize) -> RingElement {
        if i == 0 {
            self.s0(false)
        } else {
            self.swap_vars(i, false)
        }
    }

    /// Right action `s_i^z`.
    pub fn s_z(&self, i: usize) -> RingElement {
        if i == 0 {
            self.s0(true)
        } else {
            self.swap_vars(i, true)
        }
    }

    /// The involution `t_i ↦ −z_i`, `z_i ↦ −t_i`, `Q_r ↦ Q_r`.
    pub fn omega(&self) -> RingElement {
        RingElement {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    let deg: u32 = k.z.iter().chain(k.t.iter()).sum();
                    let c = if deg % 2 == 1 { -c.clone() } else { c.clone() };
                    (BasisKey { q: k.q.clone(), z: k.t.clone(), t: k.z.clone() }, c)
                })
                .collect(),
        }
    }

    /// Divided difference for `i ≥ 1` on the `t` (`z_side = false`) or `z`
    /// variables, applied monomial by monomial. For `t` the denominator is
    /// `t_{i+1} − t_i`, for `z` it is `z_i − z_{i+1}`.
    fn divided_swap(&self, i: usize, z_side: bool) -> RingElement {
        let mut out = FxHashMap::default();
        for (k, c) in &self.terms {
            let v = if z_side { &k.z } else { &k.t };
            let a = exp_at(v, i - 1);
            let b = exp_at(v, i);
            if a == b {
                continue;
            }
            let (lo, d) = if a > b { (b, a - b) } else { (a, b - a) };
            // (x^a y^b − x^b y^a)/(x − y) = ±(xy)^lo h_{d−1}(x, y), + when a > b
            let sign_pos = (a > b) == z_side;
            let cc = if sign_pos { c.clone() } else { -c.clone() };
            for e in 0..d {
                let mut nk = k.clone();
                let v = if z_side { &mut nk.z } else { &mut nk.t };
                set_exp(v, i - 1, lo + e);
                set_exp(v, i, lo + d - 1 - e);
                accumulate(&mut out, nk, cc.clone());
            }
        }
        RingElement { terms: out }
    }

    /// Divides `self − s_0(self)` by `±2·x_1`, checking exactness.
    fn divided_zero(&self, z_side: bool) -> Result<RingElement> {
        let diff = self - &self.s0(z_side);
        let mut out = FxHashMap::default();
        let two = BigInt::from(2);
        for (k, c) in diff.terms {
            let v = if z_side { &k.z } else { &k.t };
            let e1 = exp_at(v, 0);
            let (quot, rem) = c.div_rem(&two);
            if e1 == 0 || !rem.is_zero() {
                return Err(Error::NonDivisible { op: if z_side { "partial" } else { "delta" }, index: 0 });
            }
            let mut nk = k;
            let v = if z_side { &mut nk.z } else { &mut nk.t };
            set_exp(v, 0, e1 - 1);
            let quot = if z_side { -quot } else { quot };
            accumulate(&mut out, nk, quot);
        }
        Ok(RingElement { terms: out })
    }

    /// `δ_i f = (f − s_i^t f)/α_i` with `α_0 = 2t_1`, `α_i = t_{i+1} − t_i`.
    pub fn delta(&self, i: usize) -> Result<RingElement> {
        if i == 0 {
            self.divided_zero(false)
        } else {
            Ok(self.divided_swap(i, false))
        }
    }

    /// `∂_i f = (f − s_i^z f)/ω(α_i)` with `ω(α_0) = −2z_1`, `ω(α_i) = z_i − z_{i+1}`.
    pub fn partial(&self, i: usize) -> Result<RingElement> {
        if i == 0 {
            self.divided_zero(true)
        } else {
            Ok(self.divided_swap(i, true))
        }
    }

    /// `δ_{i_1} ∘ ⋯ ∘ δ_{i_l}` applied to `self` (the last letter acts first).
    pub fn delta_word(&self, word: &[usize]) -> Result<RingElement> {
        let mut f = self.clone();
        for &i in word.iter().rev() {
            if f.is_zero() {
                break;
            }
            f = f.delta(i)?;
        }
        Ok(f)
    }

    /// `∂_{i_1} ∘ ⋯ ∘ ∂_{i_l}` applied to `self`.
    pub fn partial_word(&self, word: &[usize]) -> Result<RingElement> {
        let mut f = self.clone();
        for &i in word.iter().rev() {
            if f.is_zero() {
                break;
            }
            f = f.partial(i)?;
        }
        Ok(f)
    }

    /// Substitutes integers for `x_1..x_N` (through the generating function of
    /// `Q_r`), `z_i` and `t_i`; missing variables are zero.
    pub fn eval_at(&self, x: &[BigInt], z: &[BigInt], t: &[BigInt]) -> BigInt {
        let max_q = self.terms.keys().filter_map(|k| k.q.0.first().copied()).max().unwrap_or(0);
        let q_vals = q_values(x, max_q as usize);
        let get = |v: &[BigInt], i: usize| v.get(i).cloned().unwrap_or_default();
        let mut total = BigInt::zero();
        for (k, c) in &self.terms {
            let mut term = c.clone();
            for &a in k.q.indices() {
                term *= &q_vals[a as usize];
            }
            for (i, &e) in k.z.iter().enumerate() {
                term *= num_traits::pow(get(z, i), e as usize);
            }
            for (i, &e) in k.t.iter().enumerate() {
                term *= num_traits::pow(get(t, i), e as usize);
            }
            total += term;
        }
        total
    }
}

fn sorted_desc(v: &[u32]) -> Exps {
    let mut s: Exps = v.iter().copied().filter(|&a| a > 0).collect();
    s.sort_unstable_by(|x, y| y.cmp(x));
    s
}

/// `Q_0(x), ..., Q_r(x)` at integer points, from `Π (1 + x_i u)/(1 − x_i u)`.
pub fn q_values(x: &[BigInt], r: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::zero(); r + 1];
    series[0] = BigInt::one();
    for xi in x {
        // multiply by (1 + x u)/(1 − x u) = 1 + Σ_{j≥1} 2 x^j u^j
        let mut next = series.clone();
        for d in 1..=r {
            let mut p = BigInt::one();
            for j in 1..=d {
                p *= xi;
                next[d] += &series[d - j] * &p * 2;
            }
        }
        series = next;
    }
    series
}

impl PartialEq for RingElement {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for RingElement {}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RingElement({self})")
    }
}

impl<'a> Add<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn add(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn sub(self, rhs: &RingElement) -> RingElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a RingElement> for &'a RingElement {
    type Output = RingElement;
    fn mul(self, rhs: &RingElement) -> RingElement {
        self.mul_ref(rhs)
    }
}

impl Add for RingElement {
    type Output = RingElement;
    fn add(mut self, rhs: RingElement) -> RingElement {
        self += &rhs;
        self
    }
}

impl Sub for RingElement {
    type Output = RingElement;
    fn sub(mut self, rhs: RingElement) -> RingElement {
        self -= &rhs;
        self
    }
}

impl Mul for RingElement {
    type Output = RingElement;
    fn mul(self, rhs: RingElement) -> RingElement {
        self.mul_ref(&rhs)
    }
}

impl AddAssign<&RingElement> for RingElement {
    fn add_assign(&mut self, rhs: &RingElement) {
        for (k, c) in &rhs.terms {
            accumulate(&mut self.terms, k.clone(), c.clone());
        }
    }
}

impl SubAssign<&RingElement> for RingElement {
    fn sub_assign(&mut self, rhs: &RingElement) {
        for (k, c) in &rhs.terms {
            accumulate(&mut self.terms, k.clone(), -c.clone());
        }
    }
}

impl Neg for &RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        RingElement { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect() }
    }
}

impl Neg for RingElement {
    type Output = RingElement;
    fn neg(self) -> RingElement {
        -&self
    }
}

impl std::iter::Sum for RingElement {
    fn sum<I: Iterator<Item = RingElement>>(iter: I) -> RingElement {
        let mut out = RingElement::zero();
        for x in iter {
            out += &x;
        }
        out
    }
}

/// Restriction `f|_μ`: `z_i ↦ t_{v_i}` and `x ↦ (t_{ζ_1}, …, t_{ζ_s}, 0, …)`,
/// where `w_μ = v | ζ̄ u` at rank `n`.
pub fn localize(f: &RingElement, mu: &KStrictPartition, n: usize) -> Result<RingElement> {
    let g = grassmannian_data(mu, n)?;
    let k = mu.k();
    if f.max_z() > k {
        return Err(Error::UnsupportedVariable { index: f.max_z(), max: k });
    }
    let ys: Vec<RingElement> = g.zeta.iter().map(|&z| RingElement::t(z as usize)).collect();
    let max_q = f.terms.keys().filter_map(|key| key.q.0.first().copied()).max().unwrap_or(0) as usize;
    let qs = q_series(&ys, max_q);
    let mut cache: HashMap<QMonomial, RingElement> = HashMap::new();
    let mut out = RingElement::zero();
    for (key, c) in &f.terms {
        let qimg = cache
            .entry(key.q.clone())
            .or_insert_with(|| {
                key.q.indices().iter().fold(RingElement::one(), |acc, &a| acc.mul_ref(&qs[a as usize]))
            })
            .clone();
        let mut mono = RingElement::one();
        for (i, &e) in key.z.iter().enumerate() {
            if e > 0 {
                mono = mono.mul_ref(&RingElement::t_pow(g.v[i] as usize, e));
            }
        }
        let texp = BasisKey { t: key.t.clone(), ..BasisKey::default() };
        let mono = mono.mul_ref(&RingElement::monomial(texp, c.clone()));
        out += &mono.mul_ref(&qimg);
    }
    Ok(out)
}

/// `Q_0, …, Q_r` evaluated at the given ring elements, from the series
/// `Π (1 + y u)/(1 − y u)`.
pub fn q_series(ys: &[RingElement], r: usize) -> Vec<RingElement> {
    let mut series = vec![RingElement::zero(); r + 1];
    series[0] = RingElement::one();
    let two = BigInt::from(2);
    for y in ys {
        let pows: Vec<RingElement> = (0..=r as u32).map(|j| y.pow(j)).collect();
        let mut next = series.clone();
        for d in 1..=r {
            for j in 1..=d {
                next[d] += &series[d - j].mul_ref(&pows[j]).scale(&two);
            }
        }
        series = next;
    }
    series
}

fn fmt_key(key: &BasisKey) -> String {
    let mut parts = Vec::new();
    if !key.q.is_one() {
        let idx: Vec<String> = key.q.indices().iter().map(|a| a.to_string()).collect();
        parts.push(format!("Q[{}]", idx.join(",")));
    }
    for (name, v) in [("z", &key.z), ("t", &key.t)] {
        for (i, &e) in v.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("{name}{}", i + 1)),
                _ => parts.push(format!("{name}{}^{e}", i + 1)),
            }
        }
    }
    parts.join("*")
}

impl fmt::Display for RingElement {
    /// Canonical text form, e.g. `2*Q[3,1]*z1^2*t2 - Q[2]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (key, c)) in self.sorted_terms().into_iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let body = fmt_key(key);
            if body.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&body)?;
            } else {
                write!(f, "{abs}*{body}")?;
            }
        }
        Ok(())
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn number(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a number"));
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits");
        text.parse().map_err(|_| Error::parse(start, "invalid number"))
    }

    fn small(&mut self) -> Result<u32> {
        let at = self.pos;
        let n = self.number()?;
        u32::try_from(n).map_err(|_| Error::parse(at, "index too large"))
    }

    fn expr(&mut self) -> Result<RingElement> {
        let mut acc = RingElement::zero();
        let mut first = true;
        loop {
            let mut sign = 1;
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ if !first => break,
                _ => {}
            }
            let t = self.term()?;
            if sign < 0 {
                acc -= &t;
            } else {
                acc += &t;
            }
            first = false;
            match self.peek() {
                Some(b'+') | Some(b'-') => continue,
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RingElement> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul_ref(&self.factor()?);
        }
        Ok(acc)
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.small()
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<RingElement> {
        let at = self.pos;
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(RingElement::constant(self.number()?)),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::parse(self.pos, "expected `)`"));
                }
                self.pos += 1;
                let e_pow = self.exponent()?;
                Ok(e.pow(e_pow))
            }
            Some(b'Q') => {
                self.pos += 1;
                let mut idx = Vec::new();
                if self.peek() == Some(b'[') {
                    self.pos += 1;
                    if self.peek() != Some(b']') {
                        loop {
                            idx.push(self.small()?);
                            match self.peek() {
                                Some(b',') => self.pos += 1,
                                Some(b']') => break,
                                _ => return Err(Error::parse(self.pos, "expected `,` or `]`")),
                            }
                        }
                    }
                    self.pos += 1;
                } else {
                    idx.push(self.small()?);
                }
                let e = self.exponent()?;
                Ok(reduce_q_monomial(&idx).pow(e))
            }
            Some(c @ (b'z' | b't')) => {
                self.pos += 1;
                let i = self.small()? as usize;
                if i == 0 {
                    return Err(Error::parse(at, "variable indices start at 1"));
                }
                let e = self.exponent()?;
                Ok(if c == b'z' { RingElement::z_pow(i, e) } else { RingElement::t_pow(i, e) })
            }
            Some(_) => Err(Error::parse(self.pos, "unexpected character")),
            None => Err(Error::parse(self.pos, "unexpected end of input")),
        }
    }
}

impl FromStr for RingElement {
    type Err = Error;

    /// Parses sums of products of integers, `Q[a,b,…]`, `Qr`, `zi^e`, `ti^e`
    /// and parenthesised subexpressions.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(Error::parse(p.pos, "trailing input"));
        }
        Ok(e)
    }
}

/// One serialized term: `{q: [...], z: [...], t: [...], c: "int"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub q: Vec<u32>,
    pub z: Vec<u32>,
    pub t: Vec<u32>,
    pub c: String,
}

impl RingElement {
    /// Terms as serializable records, in canonical order.
    pub fn to_repr(&self) -> Vec<TermRepr> {
        self.sorted_terms()
            .into_iter()
            .map(|(k, c)| TermRepr {
                q: k.q.indices().to_vec(),
                z: k.z.to_vec(),
                t: k.t.to_vec(),
                c: c.to_string(),
            })
            .collect()
    }

    /// Inverse of [`RingElement::to_repr`].
    pub fn from_repr(terms: &[TermRepr]) -> Result<RingElement> {
        let mut pairs = Vec::with_capacity(terms.len());
        for (i, t) in terms.iter().enumerate() {
            let c: BigInt = t.c.parse().map_err(|_| Error::parse(i, format!("bad coefficient `{}`", t.c)))?;
            let q = if t.q.windows(2).all(|w| w[0] > w[1]) && !t.q.contains(&0) {
                QMonomial(t.q.iter().copied().collect())
            } else {
                return Err(Error::parse(i, format!("Q-indices {:?} are not strictly decreasing", t.q)));
            };
            pairs.push((BasisKey::new(q, &t.z, &t.t), c));
        }
        Ok(RingElement::from_terms(pairs))
    }
}

impl Serialize for RingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_repr().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RingElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(d)?;
        RingElement::from_repr(&terms).map_err(serde::de::Error::custom)
    }
}
