mod common;

use common::{eval_oracle, q_oracle};
use num_bigint::BigInt;
use proptest::prelude::*;
use schubpf::kstrict::{partition_to_perm, KStrictPartition};
use schubpf::ring::RingElement;
use schubpf::schubert::schubert_poly;
use schubpf::theta::{special_schubert, theta, theta_klr, ThetaSpec};
use schubpf::Error;

fn th(k: usize, r: i64, l: i64) -> RingElement {
    theta_klr(k, r, l)
}

fn t(i: usize) -> RingElement {
    RingElement::t(i)
}

fn z(i: usize) -> RingElement {
    RingElement::z(i)
}

/// `e_d` of the squares `z_1², …, z_k², t_1², …, t_l²`, by subset enumeration.
fn e_of_squares(d: usize, k: usize, l: usize) -> RingElement {
    let vars: Vec<RingElement> = (1..=k).map(|i| z(i).pow(2)).chain((1..=l).map(|j| t(j).pow(2))).collect();
    let mut out = RingElement::zero();
    for mask in 0u32..(1 << vars.len()) {
        if mask.count_ones() as usize != d {
            continue;
        }
        let mut m = RingElement::one();
        for (i, v) in vars.iter().enumerate() {
            if mask >> i & 1 == 1 {
                m = m.mul_ref(v);
            }
        }
        out += &m;
    }
    out
}

/// Coefficient of `u^r` in the defining generating function at integer points.
fn theta_oracle(k: usize, r: i64, l: i64, x: &[i64], zv: &[i64], tv: &[i64]) -> BigInt {
    if r < 0 {
        return BigInt::from(0);
    }
    let r = r as usize;
    let mut series = q_oracle(x, r);
    let mul_linear = |s: &mut Vec<BigInt>, a: i64| {
        for d in (1..=r).rev() {
            let prev = s[d - 1].clone();
            s[d] += prev * a;
        }
    };
    for &zi in zv.iter().take(k) {
        mul_linear(&mut series, zi);
    }
    if l >= 0 {
        for &tj in tv.iter().take(l as usize) {
            mul_linear(&mut series, -tj);
        }
    } else {
        for &tj in tv.iter().take(l.unsigned_abs() as usize) {
            // divide by (1 + t u)
            for d in 1..=r {
                let prev = series[d - 1].clone();
                series[d] -= prev * tj;
            }
        }
    }
    series.swap_remove(r)
}

#[test]
fn theta_examples() {
    for k in 0..=3 {
        for l in -4..=4 {
            assert_eq!(th(k, 0, l), RingElement::one());
            assert!(th(k, -1, l).is_zero());
        }
    }
    for r in 1..=6 {
        assert_eq!(th(0, r, 0), RingElement::q(r as u32));
    }
    assert_eq!(th(1, 1, 0), &RingElement::q(1) + &z(1));
}

#[test]
fn special_schubert_examples() {
    assert_eq!(special_schubert(0, 1).unwrap(), RingElement::q(1));
    assert_eq!(special_schubert(1, 1).unwrap(), "Q1 + z1 - t1".parse::<RingElement>().unwrap());
    assert_eq!(special_schubert(2, 0), Err(Error::InvalidDegree(0)));
}

#[test]
fn spec_text_form() {
    let s: ThetaSpec = "theta k=2 r=5 l=-3".parse().unwrap();
    assert_eq!(s, ThetaSpec::new(2, 5, -3));
    assert_eq!(s.to_string().parse::<ThetaSpec>().unwrap(), s);
    assert_eq!("l=1 r=0 k=0".parse::<ThetaSpec>().unwrap(), ThetaSpec::new(0, 0, 1));
    assert!(matches!("theta k=2 r=5".parse::<ThetaSpec>(), Err(Error::Parse { .. })));
    assert!(matches!("theta k=-1 r=5 l=0".parse::<ThetaSpec>(), Err(Error::Parse { .. })));
}

#[test]
fn matches_the_generating_function_at_integer_points() {
    let x = [3i64, -2, 1, 4, -1, 2, 5, -3];
    let zv = [2i64, -5, 3];
    let tv = [1i64, 4, -2, 3];
    for k in 0..=3 {
        for l in -4..=4 {
            for r in -1..=8 {
                let f = th(k, r, l);
                assert_eq!(eval_oracle(&f, &x, &zv, &tv), theta_oracle(k, r, l, &x, &zv, &tv), "k={k} r={r} l={l}");
            }
        }
    }
}

#[test]
fn square_relation() {
    for k in 0..=3usize {
        for l in 0..=3i64 {
            for r in 1..=8i64 {
                let mut f = th(k, r, l).pow(2);
                for j in 1..=r {
                    let sign = if j % 2 == 0 { 2 } else { -2 };
                    f += &(&th(k, r + j, l) * &th(k, r - j, l)).scale(&BigInt::from(sign));
                }
                let expected = if r as usize <= k + l as usize {
                    e_of_squares(r as usize, k, l as usize)
                } else {
                    RingElement::zero()
                };
                assert_eq!(f, expected, "k={k} r={r} l={l}");
            }
        }
    }
}

#[test]
fn window_recurrences() {
    for k in 0..=3 {
        for r in 0..=8 {
            for l in 1..=4i64 {
                assert_eq!(th(k, r, l), &th(k, r, l - 1) - &(&t(l as usize) * &th(k, r - 1, l - 1)));
            }
            for l in 0..=4i64 {
                assert_eq!(th(k, r, -l), &th(k, r, -l - 1) + &(&t(l as usize + 1) * &th(k, r - 1, -l - 1)));
            }
        }
    }
}

#[test]
fn simple_reflection_action() {
    for k in 0..=3 {
        for r in 0..=8 {
            for l in -4..=4i64 {
                for i in 0..=4usize {
                    let f = th(k, r, l);
                    let got = f.s_t(i);
                    let ii = i as i64;
                    let expected = if i >= 1 && l == ii {
                        &th(k, r, ii - 1) - &(&t(i + 1) * &th(k, r - 1, ii - 1))
                    } else if i >= 1 && l == -ii {
                        &th(k, r, -ii - 1) + &(&t(i) * &th(k, r - 1, -ii - 1))
                    } else if l.unsigned_abs() as usize == i {
                        continue;
                    } else {
                        f.clone()
                    };
                    assert_eq!(got, expected, "k={k} r={r} l={l} i={i}");
                }
            }
        }
    }
}

#[test]
fn divided_difference_action() {
    for k in 0..=3 {
        for r in 0..=8 {
            for l in -4..=4i64 {
                for i in 0..=4usize {
                    let got = th(k, r, l).delta(i).unwrap();
                    let on_window = l == i as i64 || l == -(i as i64);
                    let expected = if on_window { th(k, r - 1, l - 1) } else { RingElement::zero() };
                    assert_eq!(got, expected, "k={k} r={r} l={l} i={i}");
                }
            }
        }
    }
}

#[test]
fn product_rule() {
    for k1 in 0..=3 {
        for k2 in 0..=3 {
            for i in 1..=3i64 {
                for r in 0..=5 {
                    for s in 0..=5 {
                        let lhs = (&th(k1, r, i) * &th(k2, s, -i)).delta(i as usize).unwrap();
                        let rhs = &(&th(k1, r - 1, i - 1) * &th(k2, s, -i - 1))
                            + &(&th(k1, r, i - 1) * &th(k2, s - 1, -i - 1));
                        assert_eq!(lhs, rhs, "k=({k1},{k2}) i={i} r={r} s={s}");
                    }
                }
            }
        }
    }
}

#[test]
fn k_shift() {
    for k in 1..=3 {
        for l in 0..=4i64 {
            for r in 0..=8 {
                let rhs =
                    &th(k - 1, r, l + 1) + &(&(&t(l as usize + 1) + &z(k)) * &th(k - 1, r - 1, l));
                assert_eq!(th(k, r, l), rhs, "k={k} r={r} l={l}");
            }
        }
    }
}

#[test]
fn right_invariance() {
    for k in 0..=3 {
        for l in -4..=4 {
            for r in 0..=8 {
                let f = th(k, r, l);
                if k >= 1 {
                    assert_eq!(f.s_z(0), f, "k={k} r={r} l={l}");
                }
                for j in 0..=k + 2 {
                    if j != k {
                        assert!(f.partial(j).unwrap().is_zero(), "k={k} r={r} l={l} j={j}");
                    }
                }
            }
        }
    }
}

#[test]
fn special_classes_match_divided_differences() {
    for k in 0..=2usize {
        for r in 1..=4usize {
            let n = (k + 1).max(r.saturating_sub(k)).max(2);
            let lam = KStrictPartition::new(vec![r], k).unwrap();
            let w = partition_to_perm(&lam, n).unwrap();
            assert_eq!(schubert_poly(&w, n).unwrap(), special_schubert(k, r as i64).unwrap(), "k={k} r={r}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn theta_is_homogeneous_of_degree_r(k in 0usize..=3, r in 0i64..=8, l in -4i64..=4) {
        let f = theta(ThetaSpec::new(k, r, l));
        prop_assert!(f.is_homogeneous_of(r as u64));
        prop_assert!(f.max_z() <= k);
        prop_assert!(f.max_t() <= l.unsigned_abs() as usize);
    }
}
