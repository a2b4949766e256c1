//! Double Schubert polynomials: Pfaffian sums `Θ_λ`, divided differences from
//! the top class, block formulas for partial flags, and verification.

use std::cell::RefCell;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kstrict::{characteristic_index, d_set, enumerate, partition_to_perm, perm_to_partition, KStrictPartition};
use crate::pfaffian::{FormalPfaffian, TableExpr, TableTerm};
use crate::ring::RingElement;
use crate::theta::ThetaSpec;
use crate::weylc::{is_min_coset_rep, is_pseudo_k_grassmannian, longest_in_wnj, ParabolicSet, SignedPermutation};

/// Default largest rank for exhaustive verification.
pub const DEFAULT_VERIFY_MAX_N: usize = 4;

/// A signed sum of formal Pfaffians.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PfaffianSum {
    pub terms: Vec<(FormalPfaffian, i64)>,
}

impl PfaffianSum {
    pub fn single(pf: FormalPfaffian) -> Self {
        PfaffianSum { terms: vec![(pf, 1)] }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of the evaluated terms.
    pub fn evaluate(&self) -> Result<RingElement> {
        let mut out = RingElement::zero();
        for (pf, c) in &self.terms {
            let v = pf.evaluate()?;
            match *c {
                1 => out += &v,
                -1 => out -= &v,
                c => out += &v.scale(&c.into()),
            }
        }
        Ok(out)
    }

    /// The same sum without the terms that evaluate to zero.
    pub fn without_zero_terms(&self) -> Result<PfaffianSum> {
        let mut terms = Vec::new();
        for (pf, c) in &self.terms {
            if !pf.evaluate()?.is_zero() {
                terms.push((pf.clone(), *c));
            }
        }
        Ok(PfaffianSum { terms })
    }

    /// As a table expression of Pfaffian terms.
    pub fn to_table_expr(&self) -> TableExpr {
        TableExpr::new(
            self.terms
                .iter()
                .map(|(pf, c)| TableTerm { kind: crate::pfaffian::TableKind::Pf, entries: pf.entries.clone(), coeff: *c })
                .collect(),
        )
    }

    pub fn to_latex(&self) -> String {
        self.to_table_expr().to_latex()
    }
}

impl fmt::Display for PfaffianSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_table_expr().fmt(f)
    }
}

/// `a^I_s = #{j : (s,j) ∈ I} − #{i : (i,s) ∈ I}` for `s = 1..m`.
pub fn shift_vector(pairs: &[(usize, usize)], m: usize) -> Vec<i64> {
    let mut a = vec![0i64; m];
    for &(i, j) in pairs {
        a[i - 1] += 1;
        a[j - 1] -= 1;
    }
    a
}

/// The theta entries `ₖθ_{λ_s + a^I_s}^{(χ_s)}` for each subset `I ⊆ D(λ)`,
/// with subsets ordered by their bitmask over the sorted pairs of `D(λ)`.
fn subset_entries(lambda: &KStrictPartition, n: usize) -> Result<Vec<Vec<ThetaSpec>>> {
    let chi = characteristic_index(lambda, n)?;
    let d = d_set(lambda, n)?;
    let m = chi.len();
    let parts = lambda.padded(m);
    let pairs: Vec<(usize, usize)> = d.pairs.iter().copied().collect();
    if pairs.len() > 20 {
        return Err(Error::ResourceLimit(format!("D(λ) has {} pairs", pairs.len())));
    }
    let mut out = Vec::with_capacity(1 << pairs.len());
    for mask in 0u32..(1 << pairs.len()) {
        let chosen: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, p)| *p).collect();
        let a = shift_vector(&chosen, m);
        out.push(
            (0..m)
                .map(|s| ThetaSpec::new(lambda.k(), parts[s] as i64 + a[s], chi[s] as i64))
                .collect(),
        );
    }
    Ok(out)
}

/// `Θ_λ = Σ_{I ⊆ D(λ)} Pf[ₖθ_{λ_1+a^I_1}^{(χ_1)} ⋯ ₖθ_{λ_{n−k}+a^I_{n−k}}^{(χ_{n−k})}]`.
///
/// For `k = n` there are no rows and the sum is the single constant `1`,
/// represented by the one-entry Pfaffian `Pf[ₖθ_0^{(0)}]`.
pub fn theta_sum(lambda: &KStrictPartition, n: usize) -> Result<PfaffianSum> {
    lambda.check_fits(n)?;
    if lambda.k() == n {
        return Ok(PfaffianSum::single(FormalPfaffian { entries: vec![ThetaSpec::new(n, 0, 0)] }));
    }
    Ok(PfaffianSum {
        terms: subset_entries(lambda, n)?.into_iter().map(|e| (FormalPfaffian { entries: e }, 1)).collect(),
    })
}

/// `Pf[ₙ₋₁θ_{2n−1}^{(n−1)} ₙ₋₂θ_{2n−3}^{(n−2)} ⋯ ₀θ_1^{(0)}]`, the class of the
/// longest element `w_0`.
pub fn top_class(n: usize) -> FormalPfaffian {
    let entries = (0..n).rev().map(|i| ThetaSpec::new(i, 2 * i as i64 + 1, i as i64)).collect();
    FormalPfaffian { entries }
}

/// The entries `ϑ_{B̃_i} = ₖᵢθ_{k_i+k_{i+1}}^{(k_{i+1}−1)} ⋯ ₖᵢθ_{2k_i+1}^{(k_i)}`,
/// one list per element `k_i` of `J` (with `k_{p+1} = n`), in the order of `J`.
pub fn block_entries(j: &ParabolicSet) -> Vec<Vec<ThetaSpec>> {
    j.bounds()
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            (0..hi - lo)
                .map(|t| ThetaSpec::new(lo, (lo + hi - t) as i64, (hi - 1 - t) as i64))
                .collect()
        })
        .collect()
}

/// `Pf[ϑ_{B̃_p} ⋯ ϑ_{B̃_1}]`, the class of the longest element of `W_n^J`.
pub fn block_longest(n: usize, j: &ParabolicSet) -> Result<FormalPfaffian> {
    if j.n() != n {
        return Err(Error::InvalidParabolic(format!("{j} is not a parabolic set at rank {n}")));
    }
    let entries: Vec<ThetaSpec> = block_entries(j).into_iter().rev().flatten().collect();
    Ok(FormalPfaffian { entries })
}

/// The `k`-strict partition of the leading `k_2` letters of a pseudo
/// `k`-Grassmannian element, with `k_2 = n` when `J` has one element.
pub fn pseudo_partition(w: &SignedPermutation, j: &ParabolicSet) -> Result<(KStrictPartition, usize)> {
    if !is_pseudo_k_grassmannian(w, j).unwrap_or(false) {
        return Err(Error::NotPseudoGrassmannian(w.to_string()));
    }
    let b = j.bounds();
    let (k, m) = (b[0], b[1]);
    let head: Vec<i32> = (1..=m).map(|i| w.value(i)).collect();
    let head = SignedPermutation::new(head).map_err(|_| Error::NotPseudoGrassmannian(w.to_string()))?;
    Ok((perm_to_partition(&head, k)?, m))
}

/// `Σ_{I⊆D(λ)} Pf[ϑ_{B̃_p} ⋯ ϑ_{B̃_2} ₖθ_{λ_1+a^I_1}^{(χ_1)} ⋯ ₖθ_{λ_{m−k}+a^I_{m−k}}^{(χ_{m−k})}]`
/// for a pseudo `k`-Grassmannian `w ∈ W_n^J`.
pub fn pseudo_grassmannian_sum(w: &SignedPermutation, j: &ParabolicSet, n: usize) -> Result<PfaffianSum> {
    if j.n() != n || w.support() > n {
        return Err(Error::NotPseudoGrassmannian(w.to_string()));
    }
    let (lambda, m) = pseudo_partition(w, j)?;
    let prefix: Vec<ThetaSpec> = block_entries(j).into_iter().skip(1).rev().flatten().collect();
    if lambda.k() == m {
        return Ok(PfaffianSum::single(FormalPfaffian { entries: prefix }));
    }
    let terms = subset_entries(&lambda, m)?
        .into_iter()
        .map(|tail| {
            let mut e = prefix.clone();
            e.extend(tail);
            (FormalPfaffian { entries: e }, 1)
        })
        .collect();
    Ok(PfaffianSum { terms })
}

/// All parabolic sets `J` at rank `n` for which `w` is pseudo `k`-Grassmannian.
pub fn pseudo_parabolic_sets(w: &SignedPermutation, n: usize) -> Vec<ParabolicSet> {
    ParabolicSet::all(n)
        .into_iter()
        .filter(|j| is_min_coset_rep(w, j) && is_pseudo_k_grassmannian(w, j).unwrap_or(false))
        .collect()
}

type EngineKey = (Vec<usize>, usize, Vec<i32>);

thread_local! {
    static ENGINE_MEMO: RefCell<FxHashMap<EngineKey, Rc<RingElement>>> = RefCell::new(FxHashMap::default());
}

/// Clears the per-thread memo of [`schubert_poly`] and [`schubert_poly_below`].
pub fn clear_memo() {
    ENGINE_MEMO.with(|m| m.borrow_mut().clear());
}

/// `C_w` for `w ∈ W_n^J`, obtained from the class of the longest element of
/// `W_n^J` by left divided differences through elements of `W_n^J`.
///
/// The start class is `top_class(n)` when `J = {0, …, n−1}` and
/// `block_longest(n, J)` otherwise.
pub fn schubert_poly_below(w: &SignedPermutation, j: &ParabolicSet) -> Result<RingElement> {
    let n = j.n();
    let w = w.with_rank(n).map_err(|_| Error::NotCosetRep(w.to_string()))?;
    if !is_min_coset_rep(&w, j) {
        return Err(Error::NotCosetRep(w.to_string()));
    }
    let key_of = |u: &SignedPermutation| (j.ks().to_vec(), n, u.trimmed().to_vec());
    let lookup = |u: &SignedPermutation| ENGINE_MEMO.with(|m| m.borrow().get(&key_of(u)).cloned());
    let top = longest_in_wnj(j);

    // Climb in left weak order inside W_n^J until a memoized class or the top.
    let mut chain: Vec<(SignedPermutation, usize)> = Vec::new();
    let mut u = w.clone();
    let mut known = lookup(&u);
    while known.is_none() && u != top {
        let i = (0..n)
            .find(|&i| {
                !u.is_left_descent(i) && is_min_coset_rep(&u.left_mul_simple(i).expect("i < n"), j)
            })
            .expect("every non-maximal element of W_n^J has an upward step");
        let up = u.left_mul_simple(i)?;
        chain.push((u, i));
        u = up;
        known = lookup(&u);
    }
    let mut cur = match known {
        Some(c) => c,
        None => {
            let start = if j.ks().len() == n { top_class(n) } else { block_longest(n, j)? };
            let c = Rc::new(start.evaluate()?);
            ENGINE_MEMO.with(|m| m.borrow_mut().insert(key_of(&top), c.clone()));
            c
        }
    };
    for (below, i) in chain.into_iter().rev() {
        let next = Rc::new(cur.delta(i)?);
        ENGINE_MEMO.with(|m| m.borrow_mut().insert(key_of(&below), next.clone()));
        cur = next;
    }
    Ok((*cur).clone())
}

/// `C_w` for `w ∈ W_n`: divided differences `δ_v` applied to the evaluated
/// top class, with `v = w·w_0`.
pub fn schubert_poly(w: &SignedPermutation, n: usize) -> Result<RingElement> {
    let j = ParabolicSet::new((0..n).collect(), n)?;
    schubert_poly_below(w, &j)
}

/// `C_w = δ_{i_1} ⋯ δ_{i_ℓ} C_{w_0}` for a given reduced word `(i_1, …, i_ℓ)`
/// of `v = w·w_0`, without memoization.
pub fn schubert_poly_by_word(w: &SignedPermutation, n: usize, word: &[usize]) -> Result<RingElement> {
    let w = w.with_rank(n)?;
    let v = w.compose(&SignedPermutation::longest(n));
    let check = SignedPermutation::from_word(word, n)?;
    if check != v || word.len() != v.length() {
        return Err(Error::ShapeMismatch(format!("{word:?} is not a reduced word of {v}")));
    }
    top_class(n).evaluate()?.delta_word(word)
}

/// Outcome of comparing `Θ_λ` with `C_{w_λ}` for one partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyEntry {
    pub lambda: KStrictPartition,
    pub w: SignedPermutation,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pfaffian_sum: Option<RingElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divided_difference: Option<RingElement>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Result of [`verify_equality`], sorted like [`enumerate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub n: usize,
    pub k: usize,
    pub entries: Vec<VerifyEntry>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

fn verify_one(lambda: &KStrictPartition, n: usize, cache: Option<&DiskCache>) -> VerifyEntry {
    let w = match partition_to_perm(lambda, n) {
        Ok(w) => w,
        Err(e) => {
            return VerifyEntry {
                lambda: lambda.clone(),
                w: SignedPermutation::identity(n),
                pass: false,
                pfaffian_sum: None,
                divided_difference: None,
                error: Some(e.to_string()),
            }
        }
    };
    let both = theta_sum(lambda, n)
        .and_then(|s| s.evaluate())
        .and_then(|a| cached_schubert_poly(&w, n, cache).map(|b| (a, b)));
    match both {
        Ok((a, b)) if a == b => VerifyEntry {
            lambda: lambda.clone(),
            w,
            pass: true,
            pfaffian_sum: None,
            divided_difference: None,
            error: None,
        },
        Ok((a, b)) => VerifyEntry {
            lambda: lambda.clone(),
            w,
            pass: false,
            pfaffian_sum: Some(a),
            divided_difference: Some(b),
            error: None,
        },
        Err(e) => VerifyEntry {
            lambda: lambda.clone(),
            w,
            pass: false,
            pfaffian_sum: None,
            divided_difference: None,
            error: Some(e.to_string()),
        },
    }
}

/// Compares `Θ_λ` with `C_{w_λ}` for every `λ ∈ P_n^{(k)}`, in parallel over
/// `λ`. Each worker thread keeps its own memo tables.
pub fn verify_equality(n: usize, k: usize) -> VerifyReport {
    verify_equality_with_cache(n, k, None)
}

/// [`verify_equality`] reading and filling an optional on-disk cache of
/// divided-difference classes.
pub fn verify_equality_with_cache(n: usize, k: usize, cache: Option<&DiskCache>) -> VerifyReport {
    let lambdas = enumerate(n, k);
    let entries: Vec<VerifyEntry> = lambdas.par_iter().map(|l| verify_one(l, n, cache)).collect();
    VerifyReport { n, k, entries }
}

/// Version of the on-disk cache layout.
pub const CACHE_SCHEMA_VERSION: u32 = 1;

/// Per-entry on-disk cache of divided-difference classes.
///
/// Each key `(n, w)` is stored in its own file holding the JSON term list of
/// the class. Files are written to a temporary name and renamed into place,
/// so readers never see a partial entry.
#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir).map_err(|e| Error::Cache(format!("{}: {e}", dir.display())))?;
        Ok(DiskCache { dir })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    /// File path for the class of `w` at rank `n`.
    pub fn path_for(&self, n: usize, w: &SignedPermutation) -> PathBuf {
        let one: Vec<String> = w.trimmed().iter().map(|v| v.to_string()).collect();
        let name = format!(
            "s{}-v{}-n{}-w{}.json",
            CACHE_SCHEMA_VERSION,
            env!("CARGO_PKG_VERSION"),
            n,
            if one.is_empty() { "e".to_string() } else { one.join("_") }
        );
        self.dir.join(name)
    }

    pub fn get(&self, n: usize, w: &SignedPermutation) -> Result<Option<RingElement>> {
        let path = self.path_for(n, w);
        match fs::read_to_string(&path) {
            Ok(s) => serde_json::from_str(&s)
                .map(Some)
                .map_err(|e| Error::Cache(format!("{}: {e}", path.display()))),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(Error::Cache(format!("{}: {e}", path.display()))),
        }
    }

    pub fn put(&self, n: usize, w: &SignedPermutation, value: &RingElement) -> Result<()> {
        let path = self.path_for(n, w);
        if path.exists() {
            return Ok(());
        }
        let body = serde_json::to_string(value).map_err(|e| Error::Cache(e.to_string()))?;
        let tmp = self.dir.join(format!(
            ".{}.{}.{:?}.tmp",
            path.file_name().and_then(|s| s.to_str()).unwrap_or("entry"),
            std::process::id(),
            std::thread::current().id()
        ));
        let io = |e: std::io::Error| Error::Cache(format!("{}: {e}", tmp.display()));
        let mut f = fs::File::create(&tmp).map_err(io)?;
        f.write_all(body.as_bytes()).map_err(io)?;
        f.sync_all().map_err(io)?;
        drop(f);
        fs::rename(&tmp, &path).map_err(|e| Error::Cache(format!("{}: {e}", path.display())))
    }
}

/// [`schubert_poly`] backed by an optional [`DiskCache`].
pub fn cached_schubert_poly(w: &SignedPermutation, n: usize, cache: Option<&DiskCache>) -> Result<RingElement> {
    let Some(cache) = cache else { return schubert_poly(w, n) };
    if let Some(hit) = cache.get(n, w)? {
        return Ok(hit);
    }
    let v = schubert_poly(w, n)?;
    cache.put(n, w, &v)?;
    Ok(v)
}
