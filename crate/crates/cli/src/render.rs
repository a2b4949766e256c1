//! Text, JSON and LaTeX rendering of output documents.

use std::fmt::Write;

use crate::args::Format;
use crate::document::{MethodResult, OutputDocument, Payload, TableRow};
use crate::latex::polynomial_latex;

/// Renders `doc` in `format`. LaTeX output is for display only.
pub fn render(doc: &OutputDocument, format: Format) -> Result<String, serde_json::Error> {
    Ok(match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(doc)?;
            s.push('\n');
            s
        }
        Format::Text => text(doc),
        Format::Latex => latex(doc),
    })
}

fn parts(row: &TableRow) -> String {
    let p: Vec<String> = row.lambda.parts().iter().map(|x| x.to_string()).collect();
    format!("({})", p.join(","))
}

fn text(doc: &OutputDocument) -> String {
    let mut out = String::new();
    match &doc.result {
        Payload::Compute(c) => {
            let t = &c.target;
            let cuts: Vec<usize> = t.k.into_iter().collect();
            let _ = write!(out, "n={} w={}", t.n, t.w.to_bar_string(&cuts));
            if let Some(l) = &t.lambda {
                let _ = write!(out, " {l}");
            }
            if let Some(j) = &t.j {
                let _ = write!(out, " J={:?}", j.ks());
            }
            out.push('\n');
            for MethodResult { method, sum, polynomial } in &c.results {
                let _ = writeln!(out, "{}:", method.name());
                if let Some(s) = sum {
                    let _ = writeln!(out, "  {s}");
                }
                if let Some(p) = polynomial {
                    let _ = writeln!(out, "  = {p}");
                }
            }
            if let Some(eq) = c.equal {
                let _ = writeln!(out, "equal: {eq}");
            }
        }
        Payload::Table(t) => {
            let _ = writeln!(out, "n={} k={} ({} rows)", t.n, t.k, t.rows.len());
            for row in &t.rows {
                let _ = write!(out, "{} w={} chi={:?} D={:?}  {}", parts(row), row.w.to_bar_string(&[t.k]), row.chi, row.d_set, row.expr);
                if let Some(m) = row.matches {
                    let _ = write!(out, "  [{}]", if m { "ok" } else { "MISMATCH" });
                }
                out.push('\n');
            }
        }
        Payload::Verify(v) => {
            for r in &v.reports {
                let fails = r.failures().count();
                let _ = writeln!(
                    out,
                    "n={} k={}: {}/{} pass",
                    r.n,
                    r.k,
                    r.entries.len() - fails,
                    r.entries.len()
                );
                for f in r.failures() {
                    let _ = writeln!(out, "  FAIL {} w={} {}", f.lambda, f.w, f.error.as_deref().unwrap_or(""));
                }
            }
            let _ = writeln!(out, "all pass: {}", v.all_pass);
        }
        Payload::Localize(l) => {
            let _ = writeln!(out, "{}", l.localization);
        }
        Payload::Theta(t) => {
            let _ = writeln!(out, "{}", t.polynomial);
        }
    }
    out
}


fn latex(doc: &OutputDocument) -> String {
    let mut out = String::new();
    match &doc.result {
        Payload::Compute(c) => {
            for r in &c.results {
                match (&r.sum, &r.polynomial) {
                    (Some(s), _) => {
                        let _ = writeln!(out, "{}", s.to_latex());
                    }
                    (None, Some(p)) => {
                        let _ = writeln!(out, "{}", polynomial_latex(p));
                    }
                    (None, None) => {}
                }
            }
        }
        Payload::Table(t) => {
            for row in &t.rows {
                let _ = writeln!(out, "{} & {} \\\\", parts(row), row.expr.to_table_latex());
            }
        }
        Payload::Verify(_) => out = text(doc),
        Payload::Localize(l) => {
            let _ = writeln!(out, "{}", polynomial_latex(&l.localization));
        }
        Payload::Theta(t) => {
            let _ = writeln!(out, "{}", polynomial_latex(&t.polynomial));
        }
    }
    out
}
