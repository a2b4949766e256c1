//! Kazarian's multi Schur-Pfaffian over formal variables, its substitution by
//! theta polynomials, and Pfaffian/determinant expression trees.
//!
//! For formal families `c^{(1)}, …, c^{(m)}` the Pfaffian `Pf[c_{r_1}^{(1)} ⋯ c_{r_m}^{(m)}]`
//! is defined recursively:
//!
//! * `m = 1`: `c_{r}^{(1)}`;
//! * `m = 2`: `c_{r_1}^{(1)} c_{r_2}^{(2)} + 2 Σ_{s=1}^{r_2} (−1)^s c_{r_1+s}^{(1)} c_{r_2−s}^{(2)}`;
//! * even `m ≥ 4`: `Σ_{s=2}^{m} (−1)^s Pf[c^{(1)} c^{(s)}] · Pf[c^{(2)} ⋯ ĉ^{(s)} ⋯ c^{(m)}]`;
//! * odd `m ≥ 3`: `Σ_{s=1}^{m} (−1)^{s−1} c^{(s)} · Pf[c^{(1)} ⋯ ĉ^{(s)} ⋯ c^{(m)}]`.
//!
//! Substituting `ₖᵢθ_s^{(lᵢ)}` for `c_s^{(i)}` happens only after the full
//! formal expansion.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::RingElement;
use crate::theta::{theta_rc, ThetaSpec};

/// Largest number of entries accepted by [`expand_formal`].
pub const MAX_PFAFFIAN_LEN: usize = 12;

/// A monomial `coeff · c_{s_1}^{(1)} ⋯ c_{s_m}^{(m)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormalTerm {
    pub exponents: Vec<i64>,
    pub coeff: BigInt,
}

type Expansion = FxHashMap<Vec<i64>, BigInt>;
type ExpandMemo = FxHashMap<(Vec<i64>, bool), Rc<Expansion>>;

thread_local! {
    static EXPAND_MEMO: RefCell<ExpandMemo> =
        RefCell::new(FxHashMap::default());
}

fn add_term(map: &mut Expansion, key: Vec<i64>, c: BigInt) {
    if c.is_zero() {
        return;
    }
    *map.entry(key).or_insert_with(BigInt::zero) += c;
}

fn finish(mut map: Expansion) -> Expansion {
    map.retain(|_, c| !c.is_zero());
    map
}

fn pf2(r1: i64, r2: i64, nonneg: bool) -> Expansion {
    let mut out = Expansion::default();
    if !nonneg || (r1 >= 0 && r2 >= 0) {
        add_term(&mut out, vec![r1, r2], BigInt::one());
    }
    for s in 1..=r2.max(0) {
        let (a, b) = (r1 + s, r2 - s);
        if nonneg && a < 0 {
            continue;
        }
        let c = if s % 2 == 0 { 2 } else { -2 };
        add_term(&mut out, vec![a, b], BigInt::from(c));
    }
    finish(out)
}

/// Places the exponents of `sub` (over positions `pos`) and `pair` (over
/// positions `pair_pos`) into vectors of length `m`, multiplying coefficients.
fn combine(
    out: &mut Expansion,
    m: usize,
    sign: i64,
    pair_pos: &[usize],
    pair: &Expansion,
    pos: &[usize],
    sub: &Expansion,
) {
    for (pk, pc) in pair {
        for (sk, sc) in sub {
            let mut key = vec![0i64; m];
            for (&p, &e) in pair_pos.iter().zip(pk) {
                key[p] = e;
            }
            for (&p, &e) in pos.iter().zip(sk) {
                key[p] = e;
            }
            add_term(out, key, pc * sc * sign);
        }
    }
}

fn expand_rc(r: &[i64], nonneg: bool) -> Rc<Expansion> {
    let key = (r.to_vec(), nonneg);
    if let Some(hit) = EXPAND_MEMO.with(|m| m.borrow().get(&key).cloned()) {
        return hit;
    }
    let m = r.len();
    let result = match m {
        0 => {
            let mut e = Expansion::default();
            e.insert(Vec::new(), BigInt::one());
            e
        }
        1 => {
            let mut e = Expansion::default();
            if !nonneg || r[0] >= 0 {
                e.insert(vec![r[0]], BigInt::one());
            }
            e
        }
        2 => pf2(r[0], r[1], nonneg),
        _ if m.is_multiple_of(2) => {
            let mut out = Expansion::default();
            for s in 1..m {
                let pair = pf2(r[0], r[s], nonneg);
                if pair.is_empty() {
                    continue;
                }
                let pos: Vec<usize> = (1..m).filter(|&p| p != s).collect();
                let rest: Vec<i64> = pos.iter().map(|&p| r[p]).collect();
                let sub = expand_rc(&rest, nonneg);
                // (−1)^s with s counted from 1, i.e. position index s+1.
                let sign = if (s + 1) % 2 == 0 { 1 } else { -1 };
                combine(&mut out, m, sign, &[0, s], &pair, &pos, &sub);
            }
            finish(out)
        }
        _ => {
            let mut out = Expansion::default();
            for s in 0..m {
                if nonneg && r[s] < 0 {
                    continue;
                }
                let mut single = Expansion::default();
                single.insert(vec![r[s]], BigInt::one());
                let pos: Vec<usize> = (0..m).filter(|&p| p != s).collect();
                let rest: Vec<i64> = pos.iter().map(|&p| r[p]).collect();
                let sub = expand_rc(&rest, nonneg);
                let sign = if s % 2 == 0 { 1 } else { -1 };
                combine(&mut out, m, sign, &[s], &single, &pos, &sub);
            }
            finish(out)
        }
    };
    let rc = Rc::new(result);
    EXPAND_MEMO.with(|memo| memo.borrow_mut().insert(key, rc.clone()));
    rc
}

fn check_len(m: usize) -> Result<()> {
    if m > MAX_PFAFFIAN_LEN {
        return Err(Error::ResourceLimit(format!(
            "Pfaffian with {m} entries exceeds the limit of {MAX_PFAFFIAN_LEN}"
        )));
    }
    Ok(())
}

fn to_terms(map: &Expansion) -> Vec<FormalTerm> {
    let mut out: Vec<FormalTerm> = map
        .iter()
        .map(|(k, c)| FormalTerm { exponents: k.clone(), coeff: c.clone() })
        .collect();
    out.sort_by(|a, b| b.exponents.cmp(&a.exponents));
    out
}

/// The full formal expansion of `Pf[c_{r_1}^{(1)} ⋯ c_{r_m}^{(m)}]`, sorted by
/// exponent vector in decreasing lexicographic order.
pub fn expand_formal(r: &[i64]) -> Result<Vec<FormalTerm>> {
    check_len(r.len())?;
    Ok(to_terms(&expand_rc(r, false)))
}

/// The formal expansion restricted to nonnegative exponent vectors.
///
/// Every formal variable occurs in exactly one factor of each recursive
/// product, so terms with a negative exponent can be dropped at every level.
pub fn expand_formal_nonneg(r: &[i64]) -> Result<Vec<FormalTerm>> {
    check_len(r.len())?;
    Ok(to_terms(&expand_rc(r, true)))
}

/// Substitutes `theta(entries[i] with r = s_i)` for `c_{s_i}^{(i)}` in a
/// list of formal terms over nonnegative exponents.
///
/// Terms are grouped by successive coordinates so that each theta factor is
/// multiplied into an already collected partial sum.
pub fn substitute(terms: &[(Vec<i64>, BigInt)], entries: &[(usize, i64)]) -> RingElement {
    let mut sorted: Vec<&(Vec<i64>, BigInt)> = terms.iter().filter(|(k, _)| k.iter().all(|&e| e >= 0)).collect();
    sorted.sort_by(|a, b| a.0.cmp(&b.0));
    subst_rec(&sorted, entries, entries.len())
}

/// `depth` is the number of trailing coordinates still to substitute; the
/// terms share all earlier coordinates and are sorted.
fn subst_rec(terms: &[&(Vec<i64>, BigInt)], entries: &[(usize, i64)], depth: usize) -> RingElement {
    if terms.is_empty() {
        return RingElement::zero();
    }
    if depth == 0 {
        let c: BigInt = terms.iter().map(|(_, c)| c.clone()).sum();
        return RingElement::constant(c);
    }
    let mut out = RingElement::zero();
    let mut i = 0;
    let lead = entries.len() - depth;
    while i < terms.len() {
        let s = terms[i].0[lead];
        let mut j = i + 1;
        while j < terms.len() && terms[j].0[lead] == s {
            j += 1;
        }
        let (k, l) = entries[lead];
        let th = theta_rc(ThetaSpec::new(k, s, l));
        if !th.is_zero() {
            let rest = subst_rec(&terms[i..j], entries, depth - 1);
            if !rest.is_zero() {
                out += &th.mul_ref(&rest);
            }
        }
        i = j;
    }
    out
}

/// A Pfaffian `Pf[ₖ₁θ_{r_1}^{(l_1)} ⋯ ₖₘθ_{r_m}^{(l_m)}]` awaiting evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FormalPfaffian {
    pub entries: Vec<ThetaSpec>,
}

impl FormalPfaffian {
    pub fn new(entries: Vec<ThetaSpec>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::ShapeMismatch("a Pfaffian needs at least one entry".into()));
        }
        Ok(FormalPfaffian { entries })
    }

    /// Expands formally, then substitutes theta polynomials.
    pub fn evaluate(&self) -> Result<RingElement> {
        let r: Vec<i64> = self.entries.iter().map(|e| e.r).collect();
        check_len(r.len())?;
        let exp = expand_rc(&r, true);
        let terms: Vec<(Vec<i64>, BigInt)> = exp.iter().map(|(k, c)| (k.clone(), c.clone())).collect();
        let kl: Vec<(usize, i64)> = self.entries.iter().map(|e| (e.k, e.l)).collect();
        Ok(substitute(&terms, &kl))
    }

    /// LaTeX with explicit `k` prefixes: `{\operatorname{Pf}}[{}_{3}{\vartheta}_{7}^{(3)}⋯]`.
    pub fn to_latex(&self) -> String {
        latex_full(TableKind::Pf, &self.entries)
    }
}

impl fmt::Display for FormalPfaffian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_plain(f, TableKind::Pf, &self.entries)
    }
}

/// Evaluates `Pf[entries]`.
pub fn evaluate(pf: &FormalPfaffian) -> Result<RingElement> {
    pf.evaluate()
}

/// The two bracket forms used in displayed formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableKind {
    Pf,
    Det,
}

impl TableKind {
    fn name(self) -> &'static str {
        match self {
            TableKind::Pf => "Pf",
            TableKind::Det => "Det",
        }
    }
}

/// `coeff · Pf[entries]` or `coeff · Det[entries]`.
///
/// `Det[θ_{r_1}^{(l_1)} ⋯ θ_{r_m}^{(l_m)}]` denotes `det(θ_{r_i+j−i}^{(l_i)})_{1≤i,j≤m}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableTerm {
    pub kind: TableKind,
    pub entries: Vec<ThetaSpec>,
    #[serde(default = "one_coeff")]
    pub coeff: i64,
}

fn one_coeff() -> i64 {
    1
}

/// A signed sum of Pfaffian and determinant terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TableExpr {
    pub terms: Vec<TableTerm>,
}

impl TableTerm {
    pub fn pf(entries: Vec<ThetaSpec>) -> Self {
        TableTerm { kind: TableKind::Pf, entries, coeff: 1 }
    }

    pub fn det(entries: Vec<ThetaSpec>) -> Self {
        TableTerm { kind: TableKind::Det, entries, coeff: 1 }
    }

    pub fn evaluate(&self) -> Result<RingElement> {
        if self.entries.is_empty() {
            return Err(Error::ShapeMismatch(format!("{} with no entries", self.kind.name())));
        }
        let v = match self.kind {
            TableKind::Pf => FormalPfaffian { entries: self.entries.clone() }.evaluate()?,
            TableKind::Det => determinant(&self.entries),
        };
        Ok(v.scale(&BigInt::from(self.coeff)))
    }

    /// The bracket notation of the printed tables, with `k` left implicit:
    /// `{\operatorname{Pf}}[{\vartheta}_8^4{\vartheta}_7^3]`.
    pub fn to_table_latex(&self) -> String {
        let mut s = String::new();
        if self.coeff != 1 {
            s.push_str(&self.coeff.to_string());
        }
        s.push_str(&format!("{{\\operatorname{{{}}}}}[", self.kind.name()));
        for e in &self.entries {
            s.push_str(&format!("{{\\vartheta}}_{}^{}", tex_script(e.r), tex_script(e.l)));
        }
        s.push(']');
        s
    }

    /// LaTeX with explicit `k` prefixes and parenthesized superscripts.
    pub fn to_latex(&self) -> String {
        let body = latex_full(self.kind, &self.entries);
        if self.coeff == 1 {
            body
        } else {
            format!("{}{}", self.coeff, body)
        }
    }
}

impl TableExpr {
    pub fn new(terms: Vec<TableTerm>) -> Self {
        TableExpr { terms }
    }

    /// Sum of the evaluated terms; an empty expression is zero.
    pub fn evaluate(&self) -> Result<RingElement> {
        let mut out = RingElement::zero();
        for t in &self.terms {
            out += &t.evaluate()?;
        }
        Ok(out)
    }

    /// The stacked table notation `{A\atop{+B\atop{+C}}}`; a single term is
    /// emitted bare.
    pub fn to_table_latex(&self) -> String {
        match self.terms.len() {
            0 => "0".to_string(),
            1 => self.terms[0].to_table_latex(),
            n => {
                let mut s = String::from("{");
                s.push_str(&self.terms[0].to_table_latex());
                for t in &self.terms[1..] {
                    s.push_str("\\atop{");
                    if t.coeff >= 0 {
                        s.push('+');
                    }
                    s.push_str(&t.to_table_latex());
                }
                s.push_str(&"}".repeat(n));
                s
            }
        }
    }

    /// Inline `A + B + ⋯` with explicit `k` prefixes.
    pub fn to_latex(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                s.push_str(if t.coeff < 0 { " - " } else { " + " });
                let mut t = t.clone();
                t.coeff = t.coeff.abs();
                s.push_str(&t.to_latex());
            } else {
                s.push_str(&t.to_latex());
            }
        }
        s
    }
}

/// `evaluate_table`: sums of Pfaffians and determinants, evaluated termwise.
pub fn evaluate_table(expr: &TableExpr) -> Result<RingElement> {
    expr.evaluate()
}

impl fmt::Display for TableExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            let c = if i == 0 { t.coeff } else { t.coeff.abs() };
            if i > 0 {
                write!(f, "{}", if t.coeff < 0 { " - " } else { " + " })?;
            } else if c == -1 {
                write!(f, "-")?;
            }
            if c != 1 && c != -1 {
                write!(f, "{c}*")?;
            }
            write_plain(f, t.kind, &t.entries)?;
        }
        Ok(())
    }
}

fn write_plain(f: &mut fmt::Formatter<'_>, kind: TableKind, entries: &[ThetaSpec]) -> fmt::Result {
    write!(f, "{}[", kind.name())?;
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        write!(f, "{}θ_{}^({})", subscript_digits(e.k), e.r, e.l)?;
    }
    write!(f, "]")
}

fn subscript_digits(k: usize) -> String {
    const SUB: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    k.to_string().chars().map(|c| SUB[c.to_digit(10).unwrap() as usize]).collect()
}

fn tex_script(v: i64) -> String {
    let s = v.to_string();
    if s.len() == 1 {
        s
    } else {
        format!("{{{s}}}")
    }
}

fn latex_full(kind: TableKind, entries: &[ThetaSpec]) -> String {
    let mut s = format!("{{\\operatorname{{{}}}}}[", kind.name());
    for e in entries {
        s.push_str(&format!("{{}}_{{{}}}{{\\vartheta}}_{{{}}}^{{({})}}", e.k, e.r, e.l));
    }
    s.push(']');
    s
}

/// `det(ₖᵢθ_{r_i+j−i}^{(l_i)})` by cofactor expansion along rows, memoized on
/// the set of used columns.
pub fn determinant(entries: &[ThetaSpec]) -> RingElement {
    let m = entries.len();
    let cell = |i: usize, j: usize| -> Rc<RingElement> {
        let e = entries[i];
        theta_rc(ThetaSpec::new(e.k, e.r + j as i64 - i as i64, e.l))
    };
    let mut memo: FxHashMap<u32, RingElement> = FxHashMap::default();
    fn rec(
        row: usize,
        used: u32,
        m: usize,
        cell: &dyn Fn(usize, usize) -> Rc<RingElement>,
        memo: &mut FxHashMap<u32, RingElement>,
    ) -> RingElement {
        if row == m {
            return RingElement::one();
        }
        if let Some(v) = memo.get(&used) {
            return v.clone();
        }
        let mut out = RingElement::zero();
        let mut free_before = 0;
        for col in 0..m {
            if used & (1 << col) != 0 {
                continue;
            }
            let a = cell(row, col);
            if !a.is_zero() {
                let minor = rec(row + 1, used | (1 << col), m, cell, memo);
                if !minor.is_zero() {
                    let p = a.mul_ref(&minor);
                    if free_before % 2 == 0 {
                        out += &p;
                    } else {
                        out -= &p;
                    }
                }
            }
            free_before += 1;
        }
        memo.insert(used, out.clone());
        out
    }
    rec(0, 0, m, &cell, &mut memo)
}
