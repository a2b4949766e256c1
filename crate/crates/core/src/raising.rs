//! Raising operators on formal exponent vectors.
//!
//! `R_{ij}` raises the `i`-th and lowers the `j`-th coordinate of an exponent
//! vector `(s_1, …, s_m)` standing for `c_{s_1}^{(1)} ⋯ c_{s_m}^{(m)}`. After
//! the substitution `c_r^{(i)} = 0` for `r < 0`, a product of factors
//! `(1−R)/(1+R)`, `1−R` and `1+R` applied to a seed has finitely many
//! surviving terms, computed here exactly.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kstrict::{all_pairs, characteristic_index, d_set, KStrictPartition};
use crate::pfaffian::substitute;
use crate::ring::RingElement;

/// Default bound on the number of live terms during an expansion.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

/// The three factor shapes used by the Pfaffian and `R_λ` formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// `(1 − R_{ij}) / (1 + R_{ij}) = 1 + Σ_{e≥1} 2(−1)^e R_{ij}^e`.
    Ratio,
    /// `1 − R_{ij}`.
    Minus,
    /// `1 + R_{ij}`.
    Plus,
}

/// A factor acting on the pair `(i, j)`, `1 ≤ i < j ≤ m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorSpec {
    pub i: usize,
    pub j: usize,
    pub kind: FactorKind,
}

impl FactorSpec {
    pub fn new(i: usize, j: usize, kind: FactorKind) -> Result<Self> {
        if i == 0 || i >= j {
            return Err(Error::ShapeMismatch(format!("raising pair ({i},{j}) needs 1 <= i < j")));
        }
        Ok(FactorSpec { i, j, kind })
    }

    pub fn ratio(i: usize, j: usize) -> Self {
        FactorSpec { i, j, kind: FactorKind::Ratio }
    }

    pub fn minus(i: usize, j: usize) -> Self {
        FactorSpec { i, j, kind: FactorKind::Minus }
    }

    pub fn plus(i: usize, j: usize) -> Self {
        FactorSpec { i, j, kind: FactorKind::Plus }
    }
}

/// The surviving terms of a raising-operator product: nonnegative exponent
/// vectors with nonzero integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RaisingExpansion {
    pub coeffs: BTreeMap<Vec<i64>, BigInt>,
}

impl RaisingExpansion {
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, v: &[i64]) -> BigInt {
        self.coeffs.get(v).cloned().unwrap_or_default()
    }

    /// `(vector, coefficient)` pairs in increasing order of vector.
    pub fn terms(&self) -> Vec<(Vec<i64>, BigInt)> {
        self.coeffs.iter().map(|(k, c)| (k.clone(), c.clone())).collect()
    }

    /// Substitutes `ₖᵢθ_s^{(lᵢ)}` for `c_s^{(i)}`.
    pub fn substitute(&self, entries: &[(usize, i64)]) -> RingElement {
        substitute(&self.terms(), entries)
    }
}

/// Applies a product of factors to `seed` and keeps the terms that survive
/// `c_r = 0` for `r < 0`, with the default term cap.
pub fn apply_product(factors: &[FactorSpec], seed: &[i64]) -> Result<RaisingExpansion> {
    apply_product_capped(factors, seed, DEFAULT_TERM_CAP)
}

/// [`apply_product`] with an explicit bound on the number of live terms.
///
/// Factors are applied grouped by their raised index `i`, from `m−1` down to
/// `1`. Coordinate `j` is raised only by factors with first index `j`, so once
/// those are applied it only decreases; lowering it below zero then kills the
/// term. This bounds every ratio series by the current value of `v_j`.
pub fn apply_product_capped(factors: &[FactorSpec], seed: &[i64], cap: usize) -> Result<RaisingExpansion> {
    let m = seed.len();
    for f in factors {
        if f.i == 0 || f.i >= f.j || f.j > m {
            return Err(Error::ShapeMismatch(format!(
                "raising pair ({},{}) does not fit a vector of length {m}",
                f.i, f.j
            )));
        }
    }
    let mut out = RaisingExpansion::default();
    if m == 0 {
        out.coeffs.insert(Vec::new(), BigInt::one());
        return Ok(out);
    }
    if seed[m - 1] < 0 {
        return Ok(out);
    }
    let mut live: FxHashMap<Vec<i64>, BigInt> = FxHashMap::default();
    live.insert(seed.to_vec(), BigInt::one());
    for i in (1..m).rev() {
        for f in factors.iter().filter(|f| f.i == i) {
            let mut next: FxHashMap<Vec<i64>, BigInt> = FxHashMap::default();
            for (v, c) in &live {
                let vj = v[f.j - 1];
                if vj < 0 {
                    continue;
                }
                let top = match f.kind {
                    FactorKind::Ratio => vj,
                    FactorKind::Minus | FactorKind::Plus => vj.min(1),
                };
                for e in 0..=top {
                    let w: i64 = match (f.kind, e) {
                        (_, 0) => 1,
                        (FactorKind::Ratio, e) => {
                            if e % 2 == 0 {
                                2
                            } else {
                                -2
                            }
                        }
                        (FactorKind::Minus, _) => -1,
                        (FactorKind::Plus, _) => 1,
                    };
                    let mut u = v.clone();
                    u[f.i - 1] += e;
                    u[f.j - 1] -= e;
                    *next.entry(u).or_insert_with(BigInt::zero) += c * w;
                }
                if next.len() > cap {
                    return Err(Error::ResourceLimit(format!("raising expansion exceeded {cap} terms")));
                }
            }
            next.retain(|_, c| !c.is_zero());
            live = next;
        }
        live.retain(|v, _| v[i - 1..].iter().all(|&x| x >= 0));
    }
    live.retain(|v, _| v.iter().all(|&x| x >= 0));
    out.coeffs = live.into_iter().collect();
    Ok(out)
}

/// `Π_{(i,j)∈Δ_m} (1−R_{ij})/(1+R_{ij})` applied to `r`, restricted to
/// nonnegative vectors.
pub fn pf_via_raising(r: &[i64]) -> Result<RaisingExpansion> {
    let factors: Vec<FactorSpec> = all_pairs(r.len()).into_iter().map(|(i, j)| FactorSpec::ratio(i, j)).collect();
    apply_product(&factors, r)
}

/// The factor list `Π_{D(λ)^c} (1−R)/(1+R) · Π_{D(λ)} (1−R)` of Wilson's `R_λ`.
pub fn r_lambda_factors(lambda: &KStrictPartition, n: usize) -> Result<Vec<FactorSpec>> {
    let d = d_set(lambda, n)?;
    Ok(all_pairs(d.m)
        .into_iter()
        .map(|(i, j)| if d.contains(i, j) { FactorSpec::minus(i, j) } else { FactorSpec::ratio(i, j) })
        .collect())
}

/// Wilson's double theta polynomial `R_λ` at rank `n`: the mixed product
/// applied to `(λ_1, …, λ_{n−k})`, then `c_s^{(i)} ↦ ₖθ_s^{(χ_i)}`.
pub fn r_lambda(lambda: &KStrictPartition, n: usize) -> Result<RingElement> {
    let factors = r_lambda_factors(lambda, n)?;
    let chi = characteristic_index(lambda, n)?;
    let seed: Vec<i64> = lambda.padded(chi.len()).into_iter().map(|p| p as i64).collect();
    let exp = apply_product(&factors, &seed)?;
    let entries: Vec<(usize, i64)> = chi.iter().map(|&c| (lambda.k(), c as i64)).collect();
    Ok(exp.substitute(&entries))
}
