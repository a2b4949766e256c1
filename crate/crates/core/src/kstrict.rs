//! k-strict partitions and their k-Grassmannian signed permutations.
//!
//! A partition is k-strict when no part larger than `k` repeats. At rank `n`
//! the k-strict partitions fitting in the `(n-k) × (n+k)` rectangle are in
//! bijection with the minimum-length coset representatives
//! `w = v_1⋯v_k | ζ̄_1⋯ζ̄_s u_1⋯u_{n-k-s}` of `W_n / W_(k)`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::weylc::{is_grassmannian, SignedPermutation};

/// A k-strict partition; trailing zeros are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct KStrictPartition {
    parts: Vec<usize>,
    k: usize,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    k: usize,
    parts: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
}

impl TryFrom<PartitionRepr> for KStrictPartition {
    type Error = Error;
    fn try_from(r: PartitionRepr) -> Result<Self> {
        let lam = KStrictPartition::new(r.parts, r.k)?;
        if let Some(n) = r.n {
            lam.check_fits(n)?;
        }
        Ok(lam)
    }
}

impl From<KStrictPartition> for PartitionRepr {
    fn from(l: KStrictPartition) -> Self {
        PartitionRepr { k: l.k, parts: l.parts, n: None }
    }
}

impl KStrictPartition {
    /// Validates a weakly decreasing, k-strict sequence of nonnegative parts.
    pub fn new(mut parts: Vec<usize>, k: usize) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|p| p[0] < p[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not weakly decreasing")));
        }
        if parts.windows(2).any(|p| p[0] == p[1] && p[0] > k) {
            return Err(Error::InvalidPartition(format!("{parts:?} is not {k}-strict")));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidPartition(format!("{parts:?} has interior zeros")));
        }
        Ok(KStrictPartition { parts, k })
    }

    /// The empty partition.
    pub fn empty(k: usize) -> Self {
        KStrictPartition { parts: Vec::new(), k }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`.
    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    /// The `i`-th part (1-based), zero beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i - 1).copied().unwrap_or(0)
    }

    /// Whether `λ` lies in the `(n-k) × (n+k)` rectangle.
    pub fn fits_in(&self, n: usize) -> bool {
        self.k <= n && self.len() <= n - self.k && self.part(1) <= n + self.k
    }

    pub fn check_fits(&self, n: usize) -> Result<()> {
        if self.fits_in(n) {
            Ok(())
        } else {
            Err(Error::DoesNotFit(format!(
                "{self} does not fit in the {}x{} rectangle at rank {n}",
                n.saturating_sub(self.k),
                n + self.k
            )))
        }
    }

    /// Parts padded with zeros to length `m`.
    pub fn padded(&self, m: usize) -> Vec<usize> {
        (1..=m).map(|i| self.part(i)).collect()
    }

    /// Conjugate partition.
    pub fn conjugate_parts(parts: &[usize]) -> Vec<usize> {
        let first = parts.first().copied().unwrap_or(0);
        (1..=first).map(|j| parts.iter().filter(|&&p| p >= j).count()).collect()
    }
}

impl fmt::Display for KStrictPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p: Vec<String> = self.parts.iter().map(|x| x.to_string()).collect();
        write!(f, "k:{} lambda:{}", self.k, p.join(","))
    }
}

impl FromStr for KStrictPartition {
    type Err = Error;

    /// Parses `k:2 lambda:6,5,3,2,1,1`.
    fn from_str(s: &str) -> Result<Self> {
        let mut k = None;
        let mut parts = None;
        let mut pos = 0;
        for tok in s.split_whitespace() {
            let at = s[pos..].find(tok).map(|o| o + pos).unwrap_or(pos);
            pos = at + tok.len();
            if let Some(v) = tok.strip_prefix("k:") {
                k = Some(v.parse::<usize>().map_err(|_| Error::parse(at + 2, "invalid k"))?);
            } else if let Some(v) = tok.strip_prefix("lambda:") {
                parts = Some(parse_parts(v).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::parse(at + 7 + pos, msg),
                    other => other,
                })?);
            } else {
                return Err(Error::parse(at, format!("unexpected token `{tok}`")));
            }
        }
        let k = k.ok_or_else(|| Error::parse(0, "missing `k:`"))?;
        KStrictPartition::new(parts.unwrap_or_default(), k)
    }
}

/// Parses a comma-separated list of nonnegative parts; the empty string is `∅`.
pub fn parse_parts(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut pos = 0;
    for piece in s.split(',') {
        let t = piece.trim();
        out.push(t.parse::<usize>().map_err(|_| Error::parse(pos, format!("invalid part `{t}`")))?);
        pos += piece.len() + 1;
    }
    Ok(out)
}

/// The pieces `v | ζ̄ u` of a k-Grassmannian element at rank `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannianData {
    pub v: Vec<i32>,
    pub zeta: Vec<i32>,
    pub u: Vec<i32>,
    pub n: usize,
}

impl GrassmannianData {
    /// The one-line element `v_1⋯v_k ζ̄_1⋯ζ̄_s u_1⋯`.
    pub fn to_perm(&self) -> SignedPermutation {
        let mut one = self.v.clone();
        one.extend(self.zeta.iter().map(|z| -z));
        one.extend(&self.u);
        SignedPermutation::new(one).expect("valid Grassmannian data")
    }
}

/// Decomposes `w_λ^{(k)}` at rank `n` into `(v, ζ, u)`.
pub fn grassmannian_data(lambda: &KStrictPartition, n: usize) -> Result<GrassmannianData> {
    lambda.check_fits(n)?;
    let k = lambda.k;
    let s = lambda.parts.iter().filter(|&&p| p > k).count();
    let zeta: Vec<i32> = lambda.parts[..s].iter().map(|&p| (p - k) as i32).collect();
    let mu: Vec<usize> = (1..=k)
        .map(|i| lambda.parts[s..].iter().filter(|&&p| p >= i).count())
        .collect();
    let rest: Vec<i32> = (1..=n as i32).filter(|y| !zeta.contains(y)).collect();
    let mut v = vec![0i32; k];
    for i in 1..=k {
        v[k - i] = rest[mu[i - 1] + k - i];
    }
    let u: Vec<i32> = rest.into_iter().filter(|y| !v.contains(y)).collect();
    Ok(GrassmannianData { v, zeta, u, n })
}

/// `w_λ^{(k)}` at rank `n`.
pub fn partition_to_perm(lambda: &KStrictPartition, n: usize) -> Result<SignedPermutation> {
    Ok(grassmannian_data(lambda, n)?.to_perm())
}

/// Inverse of [`partition_to_perm`]; independent of the rank `w` is stored in.
pub fn perm_to_partition(w: &SignedPermutation, k: usize) -> Result<KStrictPartition> {
    if !is_grassmannian(w, k) {
        return Err(Error::NotGrassmannian(w.to_string(), k));
    }
    let m = w.n().max(k + 1);
    let one: Vec<i32> = (1..=m).map(|i| w.value(i)).collect();
    let v = &one[..k];
    let zeta: Vec<i32> = one[k..].iter().filter(|&&x| x < 0).map(|x| -x).collect();
    let u: Vec<i32> = one[k..].iter().filter(|&&x| x > 0).copied().collect();
    let mu: Vec<usize> = (1..=k).map(|i| u.iter().filter(|&&x| x < v[k - i]).count()).collect();
    let mut parts: Vec<usize> = zeta.iter().map(|&z| z as usize + k).collect();
    parts.extend(KStrictPartition::conjugate_parts(&mu));
    KStrictPartition::new(parts, k)
}

/// The characteristic index `χ_λ = (ζ_1−1, …, ζ_s−1, −u_1, …, −u_{n−k−s})`.
pub fn characteristic_index(lambda: &KStrictPartition, n: usize) -> Result<Vec<i32>> {
    let g = grassmannian_data(lambda, n)?;
    let mut chi: Vec<i32> = g.zeta.iter().map(|z| z - 1).collect();
    chi.extend(g.u.iter().map(|u| -u));
    Ok(chi)
}

/// The pair set `D(λ) = {(i,j) : i<j, χ_i + χ_j < 0}` inside `Δ_m`, `m = n − k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DSet {
    pub pairs: BTreeSet<(usize, usize)>,
    pub m: usize,
}

impl DSet {
    /// `Δ_m \ D(λ)`.
    pub fn complement(&self) -> BTreeSet<(usize, usize)> {
        all_pairs(self.m).into_iter().filter(|p| !self.pairs.contains(p)).collect()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }
}

/// All pairs `1 ≤ i < j ≤ m`.
pub fn all_pairs(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 1..=m {
        for j in i + 1..=m {
            out.push((i, j));
        }
    }
    out
}

/// `D(λ)` at rank `n`.
pub fn d_set(lambda: &KStrictPartition, n: usize) -> Result<DSet> {
    let chi = characteristic_index(lambda, n)?;
    let m = chi.len();
    let pairs = all_pairs(m)
        .into_iter()
        .filter(|&(i, j)| chi[i - 1] + chi[j - 1] < 0)
        .collect();
    Ok(DSet { pairs, m })
}

/// `p_j(λ) = n + k + j − λ_j − #{i < j : λ_i + λ_j > 2k + j − i}`.
pub fn p_index(lambda: &KStrictPartition, j: usize, n: usize) -> Result<i64> {
    if j == 0 || j > lambda.len() {
        return Err(Error::IndexOutOfRange { index: j, max: lambda.len() });
    }
    lambda.check_fits(n)?;
    let k = lambda.k as i64;
    let lj = lambda.part(j) as i64;
    let c = (1..j)
        .filter(|&i| lambda.part(i) as i64 + lj > 2 * k + j as i64 - i as i64)
        .count() as i64;
    Ok(n as i64 + k + j as i64 - lj - c)
}

/// All of `P_n^{(k)}`, ordered by size and then reverse-lexicographically.
pub fn enumerate(n: usize, k: usize) -> Vec<KStrictPartition> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let rows = n - k;
    let width = n + k;
    fn rec(rows: usize, max: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == rows {
            return;
        }
        for p in (1..=max).rev() {
            if let Some(&last) = cur.last() {
                if p > last || (p == last && p > k) {
                    continue;
                }
            }
            cur.push(p);
            rec(rows, max, k, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(rows, width, k, &mut Vec::new(), &mut raw);
    for parts in raw {
        out.push(KStrictPartition { parts, k });
    }
    out.sort_by(|a, b| a.size().cmp(&b.size()).then_with(|| b.parts.cmp(&a.parts)));
    out
}
