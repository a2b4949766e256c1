use std::collections::BTreeSet;
use std::process::Command as Process;

use clap::Parser;
use schubpf::kstrict::{enumerate, partition_to_perm};
use schubpf::ring::localize;
use schubpf::schubert::{schubert_poly, theta_sum, top_class, DiskCache};
use schubpf::theta::theta;
use schubpf::weylc::bruhat_leq;
use schubpf::{KStrictPartition, RingElement, ThetaSpec};
use schubpf_cli::document::{ComputeResult, Payload};
use schubpf_cli::error::{EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, EXIT_RESOURCE_LIMIT};
use schubpf_cli::fixtures::{fixture, AVAILABLE};
use schubpf_cli::latex::polynomial_latex;
use schubpf_cli::render::render;
use schubpf_cli::{run, Cli, Format, OutputDocument};

fn doc(args: &[&str]) -> OutputDocument {
    let mut full = vec!["schubpf", "--no-cache"];
    full.extend_from_slice(args);
    run(&Cli::try_parse_from(full).unwrap()).unwrap()
}

fn compute(args: &[&str]) -> ComputeResult {
    let mut full = vec!["compute"];
    full.extend_from_slice(args);
    match doc(&full).result {
        Payload::Compute(c) => c,
        other => panic!("unexpected payload {other:?}"),
    }
}

fn lam(parts: &[usize], k: usize) -> KStrictPartition {
    KStrictPartition::new(parts.to_vec(), k).unwrap()
}

fn bin() -> Process {
    Process::new(env!("CARGO_BIN_EXE_schubpf"))
}

#[test]
fn trivial_partition_gives_one() {
    let c = compute(&["--n", "3", "--k", "0", "--lambda", ""]);
    assert_eq!(c.results.len(), 1);
    assert_eq!(c.results[0].polynomial, Some(RingElement::one()));
    let out = bin().args(["--no-cache", "compute", "--n", "3", "--k", "0", "--lambda", ""]).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8(out.stdout).unwrap().lines().any(|l| l.trim() == "= 1"));
}

#[test]
fn example_sum_in_latex() {
    let d = doc(&["compute", "--n", "5", "--k", "1", "--lambda", "5,3,2,1", "--format", "latex"]);
    let s = render(&d, Format::Latex).unwrap();
    let expect = theta_sum(&lam(&[5, 3, 2, 1], 1), 5).unwrap().to_latex();
    assert_eq!(s.trim(), expect);
    assert_eq!(s.matches("{\\operatorname{Pf}}").count(), 4);
    assert!(s.starts_with("{\\operatorname{Pf}}[{}_{1}{\\vartheta}_{5}^{(3)}{}_{1}{\\vartheta}_{3}^{(1)}"));
}

#[test]
fn top_class_by_divided_differences() {
    let c = compute(&["--n", "4", "--w", "-1,-2,-3,-4", "--method", "divided-difference"]);
    assert_eq!(c.results[0].polynomial.as_ref().unwrap(), &top_class(4).evaluate().unwrap());
    assert!(c.results[0].sum.is_none());
}

#[test]
fn two_methods_give_a_verdict() {
    let c = compute(&[
        "--n", "4", "--k", "1", "--lambda", "4,2", "--method", "pfaffian-sum", "--method", "raising", "--method",
        "divided-difference",
    ]);
    assert_eq!(c.equal, Some(true));
    assert_eq!(c.results.len(), 3);
    let c = compute(&["--n", "3", "--w", "-2,1|-3", "--j", "0,2", "--method", "block", "--method", "divided-difference"]);
    assert_eq!(c.equal, Some(true));
    assert!(compute(&["--n", "3", "--k", "1", "--lambda", "2"]).equal.is_none());
}

#[test]
fn expand_false_keeps_only_the_sum() {
    let c = compute(&["--n", "4", "--k", "2", "--lambda", "3", "--expand", "false"]);
    assert!(c.results[0].polynomial.is_none());
    assert!(c.results[0].sum.is_some());
    let c = compute(&["--n", "4", "--k", "2", "--lambda", "3", "--expand"]);
    assert!(c.results[0].polynomial.is_some());
}

#[test]
fn prune_zero_preserves_the_value() {
    let a = compute(&["--n", "5", "--k", "1", "--lambda", "5,3,2,1"]);
    let b = compute(&["--n", "5", "--k", "1", "--lambda", "5,3,2,1", "--prune-zero"]);
    assert_eq!(a.results[0].polynomial, b.results[0].polynomial);
    assert_eq!(a.results[0].sum.as_ref().unwrap().terms.len(), 4);
    assert_eq!(b.results[0].sum.as_ref().unwrap().terms.len(), 3);
}

#[test]
fn grassmannian_w_infers_its_partition() {
    let c = compute(&["--n", "5", "--w", "1,3|-5,-4,2", "--k", "2"]);
    assert_eq!(c.target.lambda, Some(lam(&[7, 6, 1], 2)));
    let c = compute(&["--n", "5", "--w", "1,3|-5,-4,2", "--method", "pfaffian-sum", "--method", "divided-difference"]);
    assert_eq!(c.equal, Some(true));
}

#[test]
fn input_errors_map_to_exit_code_4() {
    let cases: &[&[&str]] = &[
        &["compute", "--n", "3", "--k", "1", "--lambda", "2,x"],
        &["compute", "--n", "3", "--k", "1", "--lambda", "9"],
        &["compute", "--n", "3", "--lambda", "1"],
        &["compute", "--n", "3", "--w", "1,1,2"],
        &["compute", "--n", "3", "--w", "2,1,3", "--method", "pfaffian-sum", "--k", "2"],
        &["compute", "--n", "3", "--w", "-3,-2,-1", "--j", "0,1", "--method", "block"],
        &["verify", "--n", "5", "--k", "1"],
        &["table", "--n", "4", "--k", "1", "--check"],
        &["theta", "k=2", "r=x"],
        &["localize", "--n", "3", "--k", "1", "--mu", "9", "--lambda", "1"],
    ];
    for args in cases {
        let mut full = vec!["schubpf", "--no-cache"];
        full.extend_from_slice(args);
        let err = run(&Cli::try_parse_from(full).unwrap()).unwrap_err();
        assert_eq!(err.exit_code(), EXIT_INPUT, "{args:?}: {err}");
    }
    let err = run(&Cli::try_parse_from(["schubpf", "compute", "--n", "3", "--k", "1", "--lambda", "2,x"]).unwrap())
        .unwrap_err();
    assert!(err.to_string().contains("position 2"), "{err}");
}

#[test]
fn binary_exit_codes() {
    let code = |args: &[&str]| bin().arg("--no-cache").args(args).output().unwrap().status.code();
    assert_eq!(code(&["verify", "--n", "2", "--k", "0"]), Some(EXIT_OK));
    assert_eq!(code(&["compute", "--n", "3", "--k", "1", "--lambda", "x"]), Some(EXIT_INPUT));
    assert_eq!(code(&["bogus"]), Some(EXIT_INPUT));
    assert_eq!(code(&["compute", "--n", "13", "--k", "0", "--lambda", "", "--expand", "false"]), Some(EXIT_RESOURCE_LIMIT));
    assert_eq!(code(&["table", "--n", "5", "--k", "2", "--check"]), Some(EXIT_MISMATCH));
    assert_eq!(code(&["table", "--n", "5", "--k", "3", "--check"]), Some(EXIT_OK));
    assert_eq!(code(&["--help"]), Some(EXIT_OK));
}

#[test]
fn verify_examples_pass() {
    for args in [
        &["verify", "--n", "3", "--all-k"][..],
        &["verify", "--n", "4", "--k", "2"],
        &["verify", "--n", "2", "--k", "0"],
    ] {
        let d = doc(args);
        assert_eq!(d.exit_code(), EXIT_OK);
        let Payload::Verify(v) = &d.result else { panic!() };
        assert!(v.all_pass);
        for r in &v.reports {
            assert_eq!(r.entries.len(), enumerate(r.n, r.k).len());
        }
    }
}

#[test]
fn table_rows_and_reference_checks() {
    let d = doc(&["table", "--n", "5", "--k", "3", "--check"]);
    let Payload::Table(t) = &d.result else { panic!() };
    assert_eq!(t.rows.len(), 40);
    assert!(t.rows.iter().all(|r| r.matches == Some(true)));
    let top = t.rows.iter().find(|r| r.lambda.parts() == [8, 7]).unwrap();
    assert_eq!(top.expr.to_table_latex(), "{\\operatorname{Pf}}[{\\vartheta}_8^4{\\vartheta}_7^3]");
    let empty = &t.rows[0];
    assert!(empty.lambda.is_empty());
    assert_eq!(empty.reference.as_ref().unwrap().evaluate().unwrap(), RingElement::one());
    assert_eq!(empty.chi, vec![-4, -5]);

    let d = doc(&["table", "--n", "5", "--k", "2", "--check"]);
    assert_eq!(d.exit_code(), EXIT_MISMATCH);
    let Payload::Table(t) = &d.result else { panic!() };
    assert_eq!(t.rows.len(), 80);
    let bad: BTreeSet<Vec<usize>> =
        t.rows.iter().filter(|r| r.matches == Some(false)).map(|r| r.lambda.parts().to_vec()).collect();
    let known: BTreeSet<Vec<usize>> = [
        &[2, 1][..],
        &[4, 1],
        &[3, 1, 1],
        &[4, 1, 1],
        &[3, 2, 1],
        &[5, 1, 1],
        &[4, 2, 1],
        &[5, 2, 1],
        &[4, 3, 1],
        &[5, 3, 1],
        &[5, 4, 1],
    ]
    .iter()
    .map(|p| p.to_vec())
    .collect();
    assert_eq!(bad, known);
}

#[test]
fn table_without_check_covers_any_rank() {
    let d = doc(&["table", "--n", "3", "--k", "1", "--prune-zero"]);
    let Payload::Table(t) = &d.result else { panic!() };
    assert_eq!(t.rows.len(), enumerate(3, 1).len());
    for r in &t.rows {
        assert!(r.matches.is_none());
        assert_eq!(r.expr.evaluate().unwrap(), schubert_poly(&r.w, 3).unwrap());
    }
}

fn normalize_table_latex(s: &str) -> String {
    let mut s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    // `\atop+X` without braces around the continuation.
    while let Some(at) = s.find("\\atop+") {
        s.insert(at + 5, '{');
        s.push('}');
    }
    // A single term wrapped in a redundant pair of braces.
    if s.starts_with("{{") && s.ends_with("]}") && !s.contains("\\atop") {
        s = s[1..s.len() - 1].to_string();
    }
    s
}

fn brace_balanced(s: &str) -> bool {
    let mut depth = 0i64;
    for c in s.chars() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

#[test]
fn latex_emitter_matches_reference_tokens() {
    for &(n, k) in AVAILABLE {
        let fx = fixture(n, k).unwrap();
        for row in &fx.rows {
            let ours = row.expr.to_table_latex();
            let theirs = normalize_table_latex(&row.latex);
            assert!(brace_balanced(&theirs), "{theirs}");
            assert_eq!(ours, theirs, "({n},{k}) row {:?}", row.lambda);
            assert_eq!(row.term_latex.len(), row.expr.terms.len());
            for (t, tex) in row.expr.terms.iter().zip(&row.term_latex) {
                let mut single = t.clone();
                single.coeff = 1;
                let tex: String = tex.chars().filter(|c| !c.is_whitespace()).collect();
                assert_eq!(single.to_table_latex(), tex, "({n},{k}) row {:?}", row.lambda);
            }
        }
    }
}

#[test]
fn fixtures_are_consistent_with_the_enumeration() {
    for &(n, k) in AVAILABLE {
        let fx = fixture(n, k).unwrap();
        assert_eq!((fx.n, fx.k), (n, k));
        let ps = enumerate(n, k);
        assert_eq!(fx.rows.len(), ps.len());
        for l in &ps {
            let row = fx.row(l.parts()).unwrap_or_else(|| panic!("missing row {l}"));
            let w = partition_to_perm(l, n).unwrap();
            assert_eq!(row.w, w.oneline().to_vec(), "{l}");
            assert!(row.expr.terms.iter().all(|t| t.entries.iter().all(|e| e.k == k)));
        }
    }
}

#[test]
fn localize_examples() {
    let loc = |args: &[&str]| {
        let mut full = vec!["localize"];
        full.extend_from_slice(args);
        match doc(&full).result {
            Payload::Localize(l) => l.localization,
            other => panic!("{other:?}"),
        }
    };
    assert_eq!(loc(&["--n", "3", "--k", "1", "--mu", "", "--lambda", ""]), RingElement::one());
    for l in enumerate(3, 1).into_iter().skip(1) {
        let parts: Vec<String> = l.parts().iter().map(|p| p.to_string()).collect();
        assert!(loc(&["--n", "3", "--k", "1", "--mu", "", "--lambda", &parts.join(",")]).is_zero());
    }
    let ps = enumerate(3, 1);
    let mut vanishing = 0;
    for lam in &ps {
        let w = partition_to_perm(lam, 3).unwrap();
        for mu in &ps {
            let v = partition_to_perm(mu, 3).unwrap();
            let ws: Vec<String> = w.oneline().iter().map(|x| x.to_string()).collect();
            let ms: Vec<String> = mu.parts().iter().map(|x| x.to_string()).collect();
            let got = loc(&["--n", "3", "--k", "1", "--mu", &ms.join(","), "--w", &ws.join(",")]);
            assert!(got.is_t_polynomial());
            if !bruhat_leq(&w, &v) {
                assert!(got.is_zero(), "{w} at {v}");
                vanishing += 1;
            }
        }
    }
    assert!(vanishing > 0);
    let poly = loc(&["--n", "2", "--k", "1", "--mu", "1", "--poly", "Q[1] + z1"]);
    let expect = localize(&"Q[1] + z1".parse().unwrap(), &lam(&[1], 1), 2).unwrap();
    assert_eq!(poly, expect);
}

#[test]
fn theta_subcommand() {
    let d = doc(&["theta", "k=2", "r=5", "l=-3"]);
    let Payload::Theta(t) = &d.result else { panic!() };
    assert_eq!(t.spec, ThetaSpec::new(2, 5, -3));
    assert_eq!(t.polynomial, theta(ThetaSpec::new(2, 5, -3)));
    let d = doc(&["theta", "theta k=0 r=1 l=0"]);
    let Payload::Theta(t) = &d.result else { panic!() };
    assert_eq!(t.polynomial, RingElement::q(1));
}

#[test]
fn json_documents_round_trip() {
    let requests: &[&[&str]] = &[
        &["compute", "--n", "4", "--k", "1", "--lambda", "3,1", "--method", "pfaffian-sum", "--method", "raising"],
        &["compute", "--n", "3", "--w", "-3,-2,-1", "--method", "divided-difference"],
        &["compute", "--n", "4", "--w", "-2,1|-4,-3", "--j", "0,2", "--method", "block", "--expand", "false"],
        &["table", "--n", "5", "--k", "3", "--check"],
        &["table", "--n", "3", "--k", "0"],
        &["verify", "--n", "3", "--all-k"],
        &["localize", "--n", "3", "--k", "1", "--mu", "2", "--lambda", "1"],
        &["theta", "k=1", "r=3", "l=-2"],
    ];
    for args in requests {
        let d = doc(args);
        let js = render(&d, Format::Json).unwrap();
        let back: OutputDocument = serde_json::from_str(&js).unwrap();
        assert_eq!(back, d, "{args:?}");
        assert_eq!(render(&back, Format::Json).unwrap(), js);
        let v: serde_json::Value = serde_json::from_str(&js).unwrap();
        assert_eq!(v["provenance"]["version"], env!("CARGO_PKG_VERSION"));
        assert!(v["result"]["kind"].is_string());
        assert!(v["request"]["command"]["command"].is_string());
    }
}

#[test]
fn text_and_latex_render_every_payload() {
    for args in [
        &["compute", "--n", "3", "--k", "1", "--lambda", "2", "--method", "pfaffian-sum", "--method", "divided-difference"][..],
        &["table", "--n", "3", "--k", "1"],
        &["verify", "--n", "2", "--k", "1"],
        &["localize", "--n", "3", "--k", "1", "--mu", "2", "--lambda", "1"],
        &["theta", "k=1", "r=2", "l=0"],
    ] {
        let d = doc(args);
        assert!(!render(&d, Format::Text).unwrap().trim().is_empty(), "{args:?}");
        assert!(!render(&d, Format::Latex).unwrap().trim().is_empty(), "{args:?}");
    }
}

#[test]
fn polynomial_latex_form() {
    let f: RingElement = "2*Q[3,1]*z1^2*t2 - Q[2] + 3".parse().unwrap();
    assert_eq!(polynomial_latex(&f), "2Q_{3}Q_{1}z_{1}^{2}t_{2} - Q_{2} + 3");
    assert_eq!(polynomial_latex(&RingElement::zero()), "0");
    assert_eq!(polynomial_latex(&"-z2".parse().unwrap()), "-z_{2}");
}

#[test]
fn cache_hit_is_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().to_str().unwrap();
    let args = ["--cache-dir", path, "--format", "json", "compute", "--n", "4", "--w", "2,-4,1,-3"];
    let cold = bin().args(args).output().unwrap();
    assert_eq!(cold.status.code(), Some(EXIT_OK));
    let cache = DiskCache::new(dir.path()).unwrap();
    let w = "2,-4,1,-3".parse().unwrap();
    let stored = cache.get(4, &w).unwrap().expect("cold run fills the cache");
    assert_eq!(stored, schubert_poly(&w, 4).unwrap());
    let warm = bin().args(args).output().unwrap();
    assert_eq!(warm.stdout, cold.stdout);
    let uncached = bin()
        .args(["--no-cache", "--cache-dir", path, "--format", "json", "compute", "--n", "4", "--w", "2,-4,1,-3"])
        .output()
        .unwrap();
    let a: serde_json::Value = serde_json::from_slice(&uncached.stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&cold.stdout).unwrap();
    assert_eq!(a["result"], b["result"]);
}

#[test]
fn cache_directory_precedence() {
    let root = tempfile::tempdir().unwrap();
    let sub = |name: &str| root.path().join(name);
    let run_with = |envs: &[(&str, std::path::PathBuf)], extra: &[&str]| {
        let mut p = bin();
        p.env_remove("SCHUBPF_CACHE_DIR").env_remove("XDG_DATA_HOME");
        for (k, v) in envs {
            p.env(k, v);
        }
        p.args(extra).args(["compute", "--n", "2", "--w", "-1,-2"]).output().unwrap()
    };
    let files = |d: &std::path::Path| std::fs::read_dir(d).map(|r| r.count()).unwrap_or(0);

    run_with(&[("HOME", sub("home"))], &[]);
    assert_eq!(files(&sub("home").join(".local/share/schubpf")), 1);
    run_with(&[("HOME", sub("home2")), ("XDG_DATA_HOME", sub("xdg"))], &[]);
    assert_eq!(files(&sub("xdg").join("schubpf")), 1);
    assert_eq!(files(&sub("home2")), 0);
    run_with(&[("XDG_DATA_HOME", sub("xdg2")), ("SCHUBPF_CACHE_DIR", sub("env"))], &[]);
    assert_eq!(files(&sub("env")), 1);
    assert_eq!(files(&sub("xdg2")), 0);
    let flag = sub("flag");
    run_with(&[("SCHUBPF_CACHE_DIR", sub("env2"))], &["--cache-dir", flag.to_str().unwrap()]);
    assert_eq!(files(&flag), 1);
    assert_eq!(files(&sub("env2")), 0);
    run_with(&[("SCHUBPF_CACHE_DIR", sub("env3"))], &["--no-cache"]);
    assert_eq!(files(&sub("env3")), 0);
}
