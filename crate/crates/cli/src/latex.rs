//! LaTeX rendering of polynomials in `Γ[z, t]`.

use num_traits::{One, Signed};
use schubpf::ring::BasisKey;
use schubpf::RingElement;

fn var(out: &mut String, name: &str, exps: &[u32]) {
    for (i, &e) in exps.iter().enumerate() {
        match e {
            0 => {}
            1 => out.push_str(&format!("{name}_{{{}}}", i + 1)),
            _ => out.push_str(&format!("{name}_{{{}}}^{{{e}}}", i + 1)),
        }
    }
}

fn key_latex(key: &BasisKey) -> String {
    let mut out = String::new();
    for r in key.q.indices() {
        out.push_str(&format!("Q_{{{r}}}"));
    }
    var(&mut out, "z", &key.z);
    var(&mut out, "t", &key.t);
    out
}

/// `2Q_{3}Q_{1}z_{1}^{2}t_{2} - Q_{2}` style rendering in canonical term order.
pub fn polynomial_latex(f: &RingElement) -> String {
    if f.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (idx, (key, c)) in f.sorted_terms().into_iter().enumerate() {
        let neg = c.is_negative();
        if idx == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let abs = c.abs();
        let body = key_latex(key);
        if body.is_empty() {
            out.push_str(&abs.to_string());
        } else {
            if !abs.is_one() {
                out.push_str(&abs.to_string());
            }
            out.push_str(&body);
        }
    }
    out
}
