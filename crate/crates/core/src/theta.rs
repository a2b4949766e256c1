//! Double theta polynomials `ₖθ_r^{(l)}(x, z | t)`.
//!
//! `ₖθ_r^{(l)}` is the coefficient of `u^r` in
//! `Π_i (1+x_i u)/(1−x_i u) · Π_{i≤k} (1+z_i u) · τ(u)` where
//! `τ(u) = Π_{j≤l} (1 − t_j u)` for `l ≥ 0` and `Π_{j≤|l|} 1/(1 + t_j u)` for `l < 0`.

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{BasisKey, RingElement};

/// The triple `(k, r, l)` naming `ₖθ_r^{(l)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ThetaSpec {
    pub k: usize,
    pub r: i64,
    pub l: i64,
}

impl ThetaSpec {
    pub fn new(k: usize, r: i64, l: i64) -> Self {
        ThetaSpec { k, r, l }
    }
}

impl fmt::Display for ThetaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "theta k={} r={} l={}", self.k, self.r, self.l)
    }
}

impl FromStr for ThetaSpec {
    type Err = Error;

    /// Parses `theta k=2 r=5 l=-3` (the leading word is optional).
    fn from_str(s: &str) -> Result<Self> {
        let (mut k, mut r, mut l) = (None, None, None);
        let mut pos = 0;
        for tok in s.split_whitespace() {
            let at = s[pos..].find(tok).map(|o| o + pos).unwrap_or(pos);
            pos = at + tok.len();
            if tok == "theta" {
                continue;
            }
            let (name, val) = tok
                .split_once('=')
                .ok_or_else(|| Error::parse(at, format!("expected `name=value`, got `{tok}`")))?;
            let bad = || Error::parse(at + name.len() + 1, format!("invalid value `{val}`"));
            match name {
                "k" => k = Some(val.parse::<usize>().map_err(|_| bad())?),
                "r" => r = Some(val.parse::<i64>().map_err(|_| bad())?),
                "l" => l = Some(val.parse::<i64>().map_err(|_| bad())?),
                _ => return Err(Error::parse(at, format!("unknown field `{name}`"))),
            }
        }
        match (k, r, l) {
            (Some(k), Some(r), Some(l)) => Ok(ThetaSpec { k, r, l }),
            _ => Err(Error::parse(s.len(), "expected fields k, r and l")),
        }
    }
}

thread_local! {
    static THETA_MEMO: RefCell<FxHashMap<ThetaSpec, Rc<RingElement>>> = RefCell::new(FxHashMap::default());
}

/// Elementary symmetric polynomial `e_d` in the variables produced by `var`.
fn elementary(d: usize, count: usize, var: &dyn Fn(usize) -> RingElement) -> RingElement {
    // e_d(v_1..v_m) = e_d(v_1..v_{m-1}) + v_m e_{d-1}(v_1..v_{m-1})
    let mut e = vec![RingElement::zero(); d + 1];
    e[0] = RingElement::one();
    for m in 1..=count {
        let v = var(m);
        for j in (1..=d.min(m)).rev() {
            let add = e[j - 1].mul_ref(&v);
            e[j] += &add;
        }
    }
    e.swap_remove(d)
}

/// Complete homogeneous polynomial `h_d` in the variables produced by `var`.
fn complete(d: usize, count: usize, var: &dyn Fn(usize) -> RingElement) -> RingElement {
    if count == 0 {
        return if d == 0 { RingElement::one() } else { RingElement::zero() };
    }
    let mut h = vec![RingElement::zero(); d + 1];
    h[0] = RingElement::one();
    for m in 1..=count {
        let v = var(m);
        for j in 1..=d {
            let add = h[j - 1].mul_ref(&v);
            h[j] += &add;
        }
    }
    h.swap_remove(d)
}

fn compute(spec: ThetaSpec) -> RingElement {
    if spec.r < 0 {
        return RingElement::zero();
    }
    let r = spec.r as usize;
    let zvar = |i: usize| RingElement::z(i);
    let tvar = |i: usize| RingElement::t(i);
    let width = spec.l.unsigned_abs() as usize;
    let e_z: Vec<RingElement> = (0..=r).map(|b| elementary(b, spec.k, &zvar)).collect();
    let tau: Vec<RingElement> = (0..=r)
        .map(|c| {
            let p = if spec.l >= 0 { elementary(c, width, &tvar) } else { complete(c, width, &tvar) };
            if c % 2 == 1 {
                -p
            } else {
                p
            }
        })
        .collect();
    let mut out = RingElement::zero();
    for a in 0..=r {
        let qa = RingElement::q(a as u32);
        for (b, ez) in e_z.iter().enumerate().take(r - a + 1) {
            if ez.is_zero() {
                continue;
            }
            let c = r - a - b;
            if tau[c].is_zero() {
                continue;
            }
            out += &qa.mul_ref(ez).mul_ref(&tau[c]);
        }
    }
    out
}

/// `ₖθ_r^{(l)}`, memoized per thread.
pub fn theta_rc(spec: ThetaSpec) -> Rc<RingElement> {
    if let Some(hit) = THETA_MEMO.with(|m| m.borrow().get(&spec).cloned()) {
        return hit;
    }
    let v = Rc::new(compute(spec));
    THETA_MEMO.with(|m| m.borrow_mut().insert(spec, v.clone()));
    v
}

/// `ₖθ_r^{(l)}`; zero for `r < 0` and one for `r = 0`.
pub fn theta(spec: ThetaSpec) -> RingElement {
    (*theta_rc(spec)).clone()
}

/// Shorthand for `theta(ThetaSpec::new(k, r, l))`.
pub fn theta_klr(k: usize, r: i64, l: i64) -> RingElement {
    theta(ThetaSpec::new(k, r, l))
}

/// The special class `ₖθ_r^{(r−k−1)}` of the one-row partition `(r)`.
pub fn special_schubert(k: usize, r: i64) -> Result<RingElement> {
    if r < 1 {
        return Err(Error::InvalidDegree(r));
    }
    Ok(theta_klr(k, r, r - k as i64 - 1))
}

/// `e_d(v_1², …, v_m²)` for the `z` (`z_side = true`) or `t` variables.
pub fn elementary_in_squares(d: usize, m: usize, z_side: bool) -> RingElement {
    let var = |i: usize| {
        let mut key = BasisKey::default();
        let v = if z_side { &mut key.z } else { &mut key.t };
        v.resize(i, 0);
        v[i - 1] = 2;
        RingElement::monomial(key, 1)
    };
    elementary(d, m, &var)
}
