//! Signed permutations: the hyperoctahedral Weyl group of type C.
//!
//! An element of `W_n` is stored in one-line notation `(w(1), ..., w(n))`.
//! The simple reflections are `s_0 = (1, -1)` and `s_i = (i, i+1)` for
//! `i >= 1`. Acting on the left permutes *values*, acting on the right
//! permutes *positions*. Elements of different rank are compared through the
//! embedding `W_n ⊂ W_{n+1}` that appends fixed points, so `(1,2)` equals `(1)`.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank accepted by the constructors.
pub const DEFAULT_MAX_RANK: usize = 16;

/// A signed permutation in one-line notation.
#[derive(Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<i32>", into = "Vec<i32>")]
pub struct SignedPermutation {
    oneline: Vec<i32>,
}

impl SignedPermutation {
    /// Builds a signed permutation from its one-line form.
    pub fn new(oneline: Vec<i32>) -> Result<Self> {
        let n = oneline.len();
        if n > DEFAULT_MAX_RANK {
            return Err(Error::InvalidPermutation(format!(
                "rank {n} exceeds the maximum {DEFAULT_MAX_RANK}"
            )));
        }
        let mut seen = vec![false; n + 1];
        for &v in &oneline {
            let a = v.unsigned_abs() as usize;
            if a == 0 || a > n || seen[a] {
                return Err(Error::InvalidPermutation(format!(
                    "{oneline:?} is not a signed permutation of 1..{n}"
                )));
            }
            seen[a] = true;
        }
        Ok(SignedPermutation { oneline })
    }

    /// The identity of `W_n`.
    pub fn identity(n: usize) -> Self {
        SignedPermutation { oneline: (1..=n as i32).collect() }
    }

    /// The longest element `w_0 = (-1, -2, ..., -n)` of `W_n`.
    pub fn longest(n: usize) -> Self {
        SignedPermutation { oneline: (1..=n as i32).map(|v| -v).collect() }
    }

    /// Rank `n` of the ambient group `W_n` this value is stored in.
    pub fn n(&self) -> usize {
        self.oneline.len()
    }

    /// One-line entries.
    pub fn oneline(&self) -> &[i32] {
        &self.oneline
    }

    /// One-line form with trailing fixed points removed.
    pub fn trimmed(&self) -> &[i32] {
        let mut end = self.oneline.len();
        while end > 0 && self.oneline[end - 1] == end as i32 {
            end -= 1;
        }
        &self.oneline[..end]
    }

    /// Smallest rank in which this element lives.
    pub fn support(&self) -> usize {
        self.trimmed().len()
    }

    /// `w(i)` for a positive position `i`, using fixed points beyond the rank.
    pub fn value(&self, i: usize) -> i32 {
        if i <= self.oneline.len() {
            self.oneline[i - 1]
        } else {
            i as i32
        }
    }

    /// The same element viewed in `W_m`.
    pub fn with_rank(&self, m: usize) -> Result<Self> {
        if m < self.support() {
            return Err(Error::InvalidPermutation(format!(
                "{self} does not lie in W_{m}"
            )));
        }
        if m > DEFAULT_MAX_RANK {
            return Err(Error::InvalidPermutation(format!(
                "rank {m} exceeds the maximum {DEFAULT_MAX_RANK}"
            )));
        }
        Ok(SignedPermutation { oneline: (1..=m).map(|i| self.value(i)).collect() })
    }

    /// The product `self · other`, that is `i ↦ self(other(i))`.
    pub fn compose(&self, other: &SignedPermutation) -> SignedPermutation {
        let m = self.n().max(other.n());
        let oneline = (1..=m)
            .map(|i| {
                let o = other.value(i);
                let v = self.value(o.unsigned_abs() as usize);
                if o < 0 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        SignedPermutation { oneline }
    }

    /// The inverse element.
    pub fn inverse(&self) -> SignedPermutation {
        let mut oneline = vec![0; self.n()];
        for (i, &v) in self.oneline.iter().enumerate() {
            let pos = v.unsigned_abs() as usize - 1;
            oneline[pos] = if v < 0 { -(i as i32 + 1) } else { i as i32 + 1 };
        }
        SignedPermutation { oneline }
    }

    /// Number of pairs `i < j` with `w_i > w_j`.
    pub fn inv(&self) -> usize {
        let w = &self.oneline;
        let mut c = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    c += 1;
                }
            }
        }
        c
    }

    /// Number of negative entries.
    pub fn neg(&self) -> usize {
        self.oneline.iter().filter(|&&v| v < 0).count()
    }

    /// Number of pairs `i < j` with `w_i + w_j < 0`.
    pub fn nsp(&self) -> usize {
        let w = &self.oneline;
        let mut c = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] + w[j] < 0 {
                    c += 1;
                }
            }
        }
        c
    }

    /// Coxeter length `inv + neg + nsp`.
    pub fn length(&self) -> usize {
        self.inv() + self.neg() + self.nsp()
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.n() {
            Err(Error::IndexOutOfSupport { index: i, n: self.n() })
        } else {
            Ok(())
        }
    }

    /// `s_i · w`: permutes the values `i ↔ i+1` (or negates `±1` when `i = 0`).
    pub fn left_mul_simple(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let oneline = self
            .oneline
            .iter()
            .map(|&v| {
                let a = v.abs();
                let sign = v.signum();
                if i == 0 {
                    if a == 1 {
                        -v
                    } else {
                        v
                    }
                } else if a == i as i32 {
                    sign * (i as i32 + 1)
                } else if a == i as i32 + 1 {
                    sign * i as i32
                } else {
                    v
                }
            })
            .collect();
        Ok(SignedPermutation { oneline })
    }

    /// `w · s_i`: swaps positions `i, i+1` (or negates position 1 when `i = 0`).
    pub fn right_mul_simple(&self, i: usize) -> Result<Self> {
        self.check_index(i)?;
        let mut oneline = self.oneline.clone();
        if i == 0 {
            oneline[0] = -oneline[0];
        } else {
            oneline.swap(i - 1, i);
        }
        Ok(SignedPermutation { oneline })
    }

    /// Whether `ℓ(s_i w) < ℓ(w)`, i.e. `i` is a right descent of `w⁻¹`.
    pub fn is_left_descent(&self, i: usize) -> bool {
        self.inverse().is_right_descent(i)
    }

    /// Whether `ℓ(w s_i) < ℓ(w)`.
    pub fn is_right_descent(&self, i: usize) -> bool {
        if i == 0 {
            self.value(1) < 0
        } else {
            self.value(i) > self.value(i + 1)
        }
    }

    /// Indices `i < n` with `ℓ(s_i w) < ℓ(w)`.
    pub fn left_descents(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.is_left_descent(i)).collect()
    }

    /// Reduced word `(i_1, ..., i_l)` with `w = s_{i_1} ⋯ s_{i_l}`, taking the
    /// smallest left descent at every step.
    pub fn reduced_word(&self) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.length());
        let mut cur = self.clone();
        'outer: loop {
            for i in 0..cur.n() {
                if cur.is_left_descent(i) {
                    word.push(i);
                    cur = cur.left_mul_simple(i).expect("descent index is in range");
                    continue 'outer;
                }
            }
            break;
        }
        word
    }

    /// The product `s_{i_1} ⋯ s_{i_l}` in `W_n`.
    pub fn from_word(word: &[usize], n: usize) -> Result<Self> {
        let mut w = SignedPermutation::identity(n);
        for &i in word.iter().rev() {
            w = w.left_mul_simple(i)?;
        }
        Ok(w)
    }

    /// Formats the one-line form with a bar after each position listed in `cuts`.
    pub fn to_bar_string(&self, cuts: &[usize]) -> String {
        let mut out = String::new();
        for (idx, v) in self.oneline.iter().enumerate() {
            if idx > 0 {
                out.push(if cuts.contains(&idx) { '|' } else { ',' });
            }
            out.push_str(&v.to_string());
        }
        out
    }
}

impl PartialEq for SignedPermutation {
    fn eq(&self, other: &Self) -> bool {
        self.trimmed() == other.trimmed()
    }
}

impl Eq for SignedPermutation {}

impl Hash for SignedPermutation {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.trimmed().hash(state);
    }
}

impl PartialOrd for SignedPermutation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SignedPermutation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.trimmed().cmp(other.trimmed())
    }
}

impl fmt::Debug for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SignedPermutation({self})")
    }
}

impl fmt::Display for SignedPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bar_string(&[]))
    }
}

impl FromStr for SignedPermutation {
    type Err = Error;

    /// Parses entries separated by `,` or `|`, e.g. `5|-4,-2,-1,3`.
    fn from_str(s: &str) -> Result<Self> {
        let mut entries = Vec::new();
        let mut pos = 0;
        for piece in s.split([',', '|']) {
            let trimmed = piece.trim();
            if trimmed.is_empty() {
                if s.trim().is_empty() {
                    break;
                }
                return Err(Error::parse(pos, "empty entry"));
            }
            let v: i32 = trimmed
                .parse()
                .map_err(|_| Error::parse(pos, format!("invalid entry `{trimmed}`")))?;
            entries.push(v);
            pos += piece.len() + 1;
        }
        SignedPermutation::new(entries)
    }
}

impl TryFrom<Vec<i32>> for SignedPermutation {
    type Error = Error;
    fn try_from(v: Vec<i32>) -> Result<Self> {
        SignedPermutation::new(v)
    }
}

impl From<SignedPermutation> for Vec<i32> {
    fn from(w: SignedPermutation) -> Vec<i32> {
        w.oneline
    }
}

/// A parabolic index set `J = {k_1 < ... < k_p} ⊆ {0, ..., n-1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParabolicSet {
    ks: Vec<usize>,
    n: usize,
}

impl ParabolicSet {
    /// Validates and builds `J` for rank `n`.
    pub fn new(ks: Vec<usize>, n: usize) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::InvalidParabolic("J must be nonempty".into()));
        }
        if ks.windows(2).any(|p| p[0] >= p[1]) {
            return Err(Error::InvalidParabolic(format!("{ks:?} is not strictly increasing")));
        }
        if *ks.last().unwrap() >= n {
            return Err(Error::InvalidParabolic(format!("{ks:?} has an entry >= {n}")));
        }
        Ok(ParabolicSet { ks, n })
    }

    /// The Grassmannian set `{k}`.
    pub fn single(k: usize, n: usize) -> Result<Self> {
        ParabolicSet::new(vec![k], n)
    }

    /// The entries `k_1 < ... < k_p`.
    pub fn ks(&self) -> &[usize] {
        &self.ks
    }

    /// The rank `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether `i ∈ J`.
    pub fn contains(&self, i: usize) -> bool {
        self.ks.binary_search(&i).is_ok()
    }

    /// `(k_1, ..., k_p, n)`.
    pub fn bounds(&self) -> Vec<usize> {
        let mut b = self.ks.clone();
        b.push(self.n);
        b
    }

    /// `J ∪ {0}`.
    pub fn with_zero(&self) -> ParabolicSet {
        let mut ks = self.ks.clone();
        if !self.contains(0) {
            ks.insert(0, 0);
        }
        ParabolicSet { ks, n: self.n }
    }

    /// All nonempty parabolic sets of rank `n`.
    pub fn all(n: usize) -> Vec<ParabolicSet> {
        (1u32..(1 << n))
            .map(|mask| ParabolicSet {
                ks: (0..n).filter(|i| mask & (1 << i) != 0).collect(),
                n,
            })
            .collect()
    }
}

impl fmt::Display for ParabolicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.ks.iter().map(|k| k.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// The three-way split of `{0, ..., n-1}` attached to a k-Grassmannian element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescentProfile {
    pub i_minus: BTreeSet<usize>,
    pub i_plus: BTreeSet<usize>,
    pub i_zero: BTreeSet<usize>,
}

fn rank_for(w: &SignedPermutation, j: &ParabolicSet) -> Result<SignedPermutation> {
    w.with_rank(w.n().max(j.n()))
}

/// Whether `ℓ(w s_i) > ℓ(w)` for every `i ∈ {0, ..., n-1} \ J`.
pub fn is_min_coset_rep(w: &SignedPermutation, j: &ParabolicSet) -> bool {
    let Ok(w) = rank_for(w, j) else { return false };
    let l = w.length();
    (0..w.n())
        .filter(|&i| !j.contains(i))
        .all(|i| w.right_mul_simple(i).expect("index in range").length() > l)
}

/// Whether `w` is a minimum-length coset representative for `J = {k}`,
/// viewed at rank `max(n, k+1)`.
pub fn is_grassmannian(w: &SignedPermutation, k: usize) -> bool {
    let m = w.n().max(k + 1);
    let Ok(j) = ParabolicSet::single(k, m) else { return false };
    is_min_coset_rep(w, &j)
}

/// Splits `{0, ..., n-1}` into left descents `I_-`, ascents staying in
/// `W_n^(k)` (`I_+`) and ascents leaving it (`I_0`).
pub fn descent_profile(w: &SignedPermutation, k: usize) -> Result<DescentProfile> {
    let n = w.n();
    let j = ParabolicSet::single(k, n).map_err(|_| Error::NotCosetRep(w.to_string()))?;
    if !is_min_coset_rep(w, &j) {
        return Err(Error::NotCosetRep(w.to_string()));
    }
    let mut p = DescentProfile {
        i_minus: BTreeSet::new(),
        i_plus: BTreeSet::new(),
        i_zero: BTreeSet::new(),
    };
    for i in 0..n {
        if w.is_left_descent(i) {
            p.i_minus.insert(i);
        } else if is_min_coset_rep(&w.left_mul_simple(i)?, &j) {
            p.i_plus.insert(i);
        } else {
            p.i_zero.insert(i);
        }
    }
    Ok(p)
}

/// The longest element `12⋯k | n̄ ⋯ (k+1)‾` of `W_n^(k)`.
pub fn w_max(n: usize, k: usize) -> SignedPermutation {
    let mut oneline: Vec<i32> = (1..=k as i32).collect();
    oneline.extend((k as i32 + 1..=n as i32).rev().map(|v| -v));
    SignedPermutation { oneline }
}

/// The dual `w^∨ = w · w_max` of a k-Grassmannian element of rank `n`.
pub fn dual(w: &SignedPermutation, n: usize, k: usize) -> Result<SignedPermutation> {
    let w = w.with_rank(n).map_err(|_| Error::NotCosetRep(w.to_string()))?;
    let j = ParabolicSet::single(k, n).map_err(|_| Error::NotCosetRep(w.to_string()))?;
    if !is_min_coset_rep(&w, &j) {
        return Err(Error::NotCosetRep(w.to_string()));
    }
    Ok(w.compose(&w_max(n, k)))
}

/// The longest element of `W_n^J`.
pub fn longest_in_wnj(j: &ParabolicSet) -> SignedPermutation {
    let b = j.bounds();
    let mut oneline: Vec<i32> = (1..=b[0] as i32).collect();
    for w in b.windows(2) {
        oneline.extend((w[0] as i32 + 1..=w[1] as i32).rev().map(|v| -v));
    }
    SignedPermutation { oneline }
}

/// Closed-form length of the longest element of `W_n^J`:
/// `n² − k_1² − Σ_i b_i(b_i − 1)/2` with block sizes `b_i = k_{i+1} − k_i`.
pub fn longest_in_wnj_length(j: &ParabolicSet) -> usize {
    let n = j.n();
    let b = j.bounds();
    let k1 = b[0];
    let blocks: usize = b.windows(2).map(|w| (w[1] - w[0]) * (w[1] - w[0] - 1) / 2).sum();
    n * n - k1 * k1 - blocks
}

/// Reduced-word segments that, followed by a reduced word of the longest
/// element of `W_n^J`, give a reduced word of `w_0`.
///
/// One segment per block of `J ∪ {0}`; when `0 ∉ J` a final segment holds a
/// reduced word of the longest element of `W_{k_1}^{(0)}`.
pub fn prefix_words(j: &ParabolicSet) -> Vec<Vec<usize>> {
    let b = j.with_zero().bounds();
    let mut segs: Vec<Vec<usize>> = b
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let mut seg = Vec::new();
            for start in lo + 1..hi {
                seg.extend((start..hi).rev());
            }
            seg
        })
        .collect();
    if !j.contains(0) {
        let k = j.ks()[0];
        let j0 = ParabolicSet::single(0, k).expect("k >= 1");
        segs.push(longest_in_wnj(&j0).reduced_word());
    }
    segs
}

/// Bruhat order `u ≤ w`, decided along the deterministic reduced word of `w`.
///
/// For each letter `s` of the word (a left descent of the current `w`), `u` is
/// replaced by `s·u` when `s` is also a left descent of `u`; `u ≤ w` holds iff
/// `u` reaches the identity.
pub fn bruhat_leq(u: &SignedPermutation, w: &SignedPermutation) -> bool {
    let m = u.support().max(w.support()).max(1);
    let (Ok(mut u), Ok(w)) = (u.with_rank(m), w.with_rank(m)) else { return false };
    if u.length() > w.length() {
        return false;
    }
    for i in w.reduced_word() {
        if u.is_left_descent(i) {
            u = u.left_mul_simple(i).expect("index in range");
        }
    }
    u.support() == 0
}

/// Whether `w ∈ W_n^J` has the form `w_1⋯w_{k_2} | k̄_3⋯(k_2+1)‾ | ⋯ | n̄⋯(k_p+1)‾`.
pub fn is_pseudo_k_grassmannian(w: &SignedPermutation, j: &ParabolicSet) -> Result<bool> {
    let w = rank_for(w, j).map_err(|_| Error::NotCosetRep(w.to_string()))?;
    if !is_min_coset_rep(&w, j) {
        return Err(Error::NotCosetRep(w.to_string()));
    }
    let b = j.bounds();
    for blk in b.windows(2).skip(1) {
        let (lo, hi) = (blk[0], blk[1]);
        for (offset, pos) in (lo + 1..=hi).enumerate() {
            if w.value(pos) != -((hi - offset) as i32) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All `2^n n!` elements of `W_n`, in lexicographic order of one-line forms.
pub fn all_elements(n: usize) -> Vec<SignedPermutation> {
    let mut out = Vec::new();
    let mut perm: Vec<i32> = Vec::with_capacity(n);
    let mut used = vec![false; n + 1];
    fn rec(n: usize, perm: &mut Vec<i32>, used: &mut [bool], out: &mut Vec<SignedPermutation>) {
        if perm.len() == n {
            out.push(SignedPermutation { oneline: perm.clone() });
            return;
        }
        for v in (1..=n as i32).rev().map(|v| -v).chain(1..=n as i32) {
            let a = v.unsigned_abs() as usize;
            if !used[a] {
                used[a] = true;
                perm.push(v);
                rec(n, perm, used, out);
                perm.pop();
                used[a] = false;
            }
        }
    }
    rec(n, &mut perm, &mut used, &mut out);
    out
}

/// All minimum-length coset representatives in `W_n^J`.
pub fn coset_reps(j: &ParabolicSet) -> Vec<SignedPermutation> {
    all_elements(j.n()).into_iter().filter(|w| is_min_coset_rep(w, j)).collect()
}
