#![allow(dead_code)]

use num_bigint::BigInt;
use proptest::prelude::*;
use schubpf::ring::{reduce_q_monomial, RingElement};

/// One random term: coefficient, Q-indices (any order), z and t exponents.
pub type TermSpec = (i64, Vec<u32>, Vec<u32>, Vec<u32>);

pub fn build(terms: &[TermSpec]) -> RingElement {
    let mut f = RingElement::zero();
    for (c, q, z, t) in terms {
        let mut m = reduce_q_monomial(q).scale(&BigInt::from(*c));
        for (i, &e) in z.iter().enumerate() {
            m = m.mul_ref(&RingElement::z_pow(i + 1, e));
        }
        for (i, &e) in t.iter().enumerate() {
            m = m.mul_ref(&RingElement::t_pow(i + 1, e));
        }
        f += &m;
    }
    f
}

/// A term of total degree at most `max_deg` over `Q_1..Q_3`, `z_1..z_3`, `t_1..t_3`.
pub fn arb_term(max_deg: u32) -> impl Strategy<Value = TermSpec> {
    (
        -3i64..=3,
        prop::collection::vec(1u32..=3, 0..=2),
        prop::collection::vec(0u32..=2, 0..=3),
        prop::collection::vec(0u32..=2, 0..=3),
    )
        .prop_map(move |(c, mut q, mut z, mut t)| {
            let deg = |q: &[u32], z: &[u32], t: &[u32]| q.iter().chain(z).chain(t).sum::<u32>();
            while deg(&q, &z, &t) > max_deg {
                if let Some(x) = t.iter_mut().rev().find(|x| **x > 0) {
                    *x -= 1;
                } else if let Some(x) = z.iter_mut().rev().find(|x| **x > 0) {
                    *x -= 1;
                } else {
                    q.pop();
                }
            }
            (if c == 0 { 1 } else { c }, q, z, t)
        })
}

pub fn arb_element(max_deg: u32) -> impl Strategy<Value = RingElement> {
    prop::collection::vec(arb_term(max_deg), 1..=4).prop_map(|ts| build(&ts))
}

/// A homogeneous element of degree `d`.
pub fn arb_homogeneous(d: u32) -> impl Strategy<Value = RingElement> {
    prop::collection::vec(
        (-3i64..=3, prop::collection::vec(0u32..=2, 0..=3), prop::collection::vec(0u32..=2, 0..=3)),
        1..=4,
    )
    .prop_map(move |ts| {
        let specs: Vec<TermSpec> = ts
            .into_iter()
            .map(|(c, mut z, mut t)| {
                while z.iter().chain(t.iter()).sum::<u32>() > d {
                    if let Some(x) = t.iter_mut().rev().find(|x| **x > 0) {
                        *x -= 1;
                    } else if let Some(x) = z.iter_mut().rev().find(|x| **x > 0) {
                        *x -= 1;
                    }
                }
                let mut rest = d - z.iter().chain(t.iter()).sum::<u32>();
                let mut q = Vec::new();
                while rest > 0 {
                    let a = rest.min(3);
                    q.push(a);
                    rest -= a;
                }
                (if c == 0 { 1 } else { c }, q, z, t)
            })
            .collect();
        build(&specs)
    })
}

/// `Q_0(x), …, Q_r(x)` by direct power-series multiplication of
/// `Π (1 + x_i u)/(1 − x_i u)`, written independently of the library.
pub fn q_oracle(x: &[i64], r: usize) -> Vec<BigInt> {
    let mut series = vec![BigInt::from(0); r + 1];
    series[0] = BigInt::from(1);
    for &xi in x {
        // (1 + x u) · Σ_j x^j u^j
        let geo: Vec<BigInt> = (0..=r).map(|j| BigInt::from(xi).pow(j as u32)).collect();
        let mut factor = geo.clone();
        for j in 1..=r {
            factor[j] += BigInt::from(xi) * &geo[j - 1];
        }
        let mut next = vec![BigInt::from(0); r + 1];
        for a in 0..=r {
            for b in 0..=r - a {
                next[a + b] += &series[a] * &factor[b];
            }
        }
        series = next;
    }
    series
}

/// Evaluates `f` at integer points using [`q_oracle`] for the Q-part.
pub fn eval_oracle(f: &RingElement, x: &[i64], z: &[i64], t: &[i64]) -> BigInt {
    let max_q = f.terms().filter_map(|(k, _)| k.q.indices().first().copied()).max().unwrap_or(0);
    let qs = q_oracle(x, max_q as usize);
    let get = |v: &[i64], i: usize| BigInt::from(v.get(i).copied().unwrap_or(0));
    let mut total = BigInt::from(0);
    for (k, c) in f.terms() {
        let mut term = c.clone();
        for &a in k.q.indices() {
            term *= &qs[a as usize];
        }
        for (i, &e) in k.z.iter().enumerate() {
            term *= get(z, i).pow(e);
        }
        for (i, &e) in k.t.iter().enumerate() {
            term *= get(t, i).pow(e);
        }
        total += term;
    }
    total
}
