//! The subcommands, each producing an [`OutputDocument`].

use std::path::PathBuf;

use schubpf::kstrict::{characteristic_index, d_set, parse_parts, partition_to_perm, perm_to_partition};
use schubpf::raising::r_lambda;
use schubpf::ring::localize;
use schubpf::schubert::{
    block_longest, cached_schubert_poly, pseudo_grassmannian_sum, pseudo_parabolic_sets, theta_sum,
    verify_equality_with_cache, DiskCache, PfaffianSum,
};
use schubpf::theta::theta;
use schubpf::weylc::{is_grassmannian, longest_in_wnj};
use schubpf::{KStrictPartition, ParabolicSet, RingElement, SignedPermutation, ThetaSpec};

use crate::args::{Cli, Command, ComputeArgs, LocalizeArgs, Method, TableArgs, ThetaArgs, VerifyArgs};
use crate::document::{
    ComputeResult, LocalizeResult, MethodResult, OutputDocument, Payload, Provenance, TableResult, TableRow,
    Target, ThetaResult, VerifyResult,
};
use crate::error::CliError;
use crate::fixtures::{fixture, AVAILABLE};

type Result<T> = std::result::Result<T, CliError>;

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "SCHUBPF_CACHE_DIR";

/// The cache directory: `--cache-dir`, then `$SCHUBPF_CACHE_DIR`, then
/// `$XDG_DATA_HOME/schubpf`, then `~/.local/share/schubpf`.
pub fn resolve_cache_dir(flag: Option<&PathBuf>) -> Option<PathBuf> {
    if let Some(p) = flag {
        return Some(p.clone());
    }
    let env = |name: &str| std::env::var_os(name).filter(|v| !v.is_empty()).map(PathBuf::from);
    env(CACHE_DIR_ENV)
        .or_else(|| env("XDG_DATA_HOME").map(|p| p.join("schubpf")))
        .or_else(|| env("HOME").map(|p| p.join(".local/share/schubpf")))
}

fn open_cache(cli: &Cli) -> Result<Option<DiskCache>> {
    if cli.no_cache {
        return Ok(None);
    }
    match resolve_cache_dir(cli.cache_dir.as_ref()) {
        Some(dir) => Ok(Some(DiskCache::new(dir)?)),
        None => Ok(None),
    }
}

/// Runs the parsed command.
pub fn run(cli: &Cli) -> Result<OutputDocument> {
    match &cli.command {
        Command::Compute(a) => compute(cli, a),
        Command::Table(a) => table(cli, a),
        Command::Verify(a) => verify(cli, a),
        Command::Localize(a) => localize_cmd(cli, a),
        Command::Theta(a) => theta_cmd(cli, a),
    }
}

fn parse_lambda(flag: &'static str, s: &str, k: usize) -> Result<KStrictPartition> {
    let parts = parse_parts(s).map_err(CliError::arg(flag))?;
    KStrictPartition::new(parts, k).map_err(CliError::arg(flag))
}

fn parse_perm(flag: &'static str, s: &str, n: usize) -> Result<SignedPermutation> {
    let w: SignedPermutation = s.parse().map_err(CliError::arg(flag))?;
    w.with_rank(n).map_err(CliError::arg(flag))
}

fn parse_j(s: &str, n: usize) -> Result<ParabolicSet> {
    let ks = parse_parts(s).map_err(CliError::arg("--j"))?;
    ParabolicSet::new(ks, n).map_err(CliError::arg("--j"))
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k >= n {
        return Err(CliError::input(format!("k = {k} must be smaller than n = {n}")));
    }
    Ok(())
}

/// Resolves `--lambda`/`--w`/`--k`/`--j` into one [`Target`].
pub fn resolve_target(a: &ComputeArgs) -> Result<Target> {
    let n = a.n;
    if n == 0 {
        return Err(CliError::input("n must be positive"));
    }
    if let Some(k) = a.k {
        check_k(k, n)?;
    }
    let j = a.j.as_deref().map(|s| parse_j(s, n)).transpose()?;
    match (&a.lambda, &a.w) {
        (Some(l), None) => {
            let k = a.k.ok_or_else(|| CliError::input("--lambda needs --k"))?;
            let lambda = parse_lambda("--lambda", l, k)?;
            let w = partition_to_perm(&lambda, n)?;
            let j = j.or_else(|| ParabolicSet::single(k, n).ok());
            Ok(Target { n, k: Some(k), lambda: Some(lambda), w, j })
        }
        (None, Some(ws)) => {
            let w = parse_perm("--w", ws, n)?;
            let k = a.k.or_else(|| match &j {
                Some(j) if j.ks().len() == 1 => Some(j.ks()[0]),
                _ => None,
            });
            let lambda = match k {
                Some(k) if is_grassmannian(&w, k) => Some(perm_to_partition(&w, k)?),
                _ => None,
            };
            let j = j.or_else(|| k.and_then(|k| ParabolicSet::single(k, n).ok()));
            Ok(Target { n, k, lambda, w, j })
        }
        _ => Err(CliError::input("give exactly one of --lambda and --w")),
    }
}

fn target_partition(t: &Target) -> Result<KStrictPartition> {
    if let Some(l) = &t.lambda {
        return Ok(l.clone());
    }
    if let Some(k) = t.k {
        return Err(schubpf::Error::NotGrassmannian(t.w.to_string(), k).into());
    }
    (0..t.n)
        .find(|&k| is_grassmannian(&t.w, k))
        .map(|k| perm_to_partition(&t.w, k))
        .transpose()?
        .ok_or_else(|| CliError::input(format!("{} is not k-Grassmannian for any k; use --method divided-difference or block", t.w)))
}

fn block_sum(t: &Target) -> Result<PfaffianSum> {
    let j = match &t.j {
        Some(j) => j.clone(),
        None => pseudo_parabolic_sets(&t.w, t.n)
            .into_iter()
            .next()
            .ok_or_else(|| schubpf::Error::NotPseudoGrassmannian(t.w.to_string()))?,
    };
    if t.w == longest_in_wnj(&j) {
        return Ok(PfaffianSum::single(block_longest(t.n, &j)?));
    }
    Ok(pseudo_grassmannian_sum(&t.w, &j, t.n)?)
}

fn sum_result(method: Method, sum: PfaffianSum, expand: bool, prune: bool) -> Result<MethodResult> {
    let sum = if prune { sum.without_zero_terms()? } else { sum };
    let polynomial = if expand { Some(sum.evaluate()?) } else { None };
    Ok(MethodResult { method, sum: Some(sum.to_table_expr()), polynomial })
}

fn compute(cli: &Cli, a: &ComputeArgs) -> Result<OutputDocument> {
    let target = resolve_target(a)?;
    let mut methods = a.method.clone();
    if methods.is_empty() {
        methods.push(if a.lambda.is_some() { Method::PfaffianSum } else { Method::DividedDifference });
    }
    methods.dedup();
    let expand = a.expand || methods.len() > 1;
    let cache = if methods.contains(&Method::DividedDifference) { open_cache(cli)? } else { None };
    let mut results = Vec::new();
    for &m in &methods {
        let r = match m {
            Method::PfaffianSum => {
                let lambda = target_partition(&target)?;
                sum_result(m, theta_sum(&lambda, target.n)?, expand, a.prune_zero)?
            }
            Method::Block => sum_result(m, block_sum(&target)?, expand, a.prune_zero)?,
            Method::Raising => {
                let lambda = target_partition(&target)?;
                MethodResult { method: m, sum: None, polynomial: Some(r_lambda(&lambda, target.n)?) }
            }
            Method::DividedDifference => MethodResult {
                method: m,
                sum: None,
                polynomial: Some(cached_schubert_poly(&target.w, target.n, cache.as_ref())?),
            },
        };
        results.push(r);
    }
    let equal = (results.len() > 1).then(|| results.windows(2).all(|p| p[0].polynomial == p[1].polynomial));
    let provenance = Provenance::new(Some(target.n), target.k, methods);
    Ok(OutputDocument {
        request: cli.clone(),
        result: Payload::Compute(ComputeResult { target, results, equal }),
        provenance,
    })
}

fn table(cli: &Cli, a: &TableArgs) -> Result<OutputDocument> {
    check_k(a.k, a.n)?;
    let reference = if a.check {
        Some(fixture(a.n, a.k).ok_or_else(|| {
            CliError::input(format!("no reference table for (n,k) = ({},{}); available: {AVAILABLE:?}", a.n, a.k))
        })?)
    } else {
        None
    };
    let mut rows = Vec::new();
    for lambda in schubpf::kstrict::enumerate(a.n, a.k) {
        let sum = theta_sum(&lambda, a.n)?;
        let sum = if a.prune_zero { sum.without_zero_terms()? } else { sum };
        let (reference, matches) = match &reference {
            Some(fx) => match fx.row(lambda.parts()) {
                Some(row) => (Some(row.expr.clone()), Some(row.expr.evaluate()? == sum.evaluate()?)),
                None => (None, Some(false)),
            },
            None => (None, None),
        };
        rows.push(TableRow {
            w: partition_to_perm(&lambda, a.n)?,
            chi: characteristic_index(&lambda, a.n)?,
            d_set: d_set(&lambda, a.n)?.pairs.into_iter().collect(),
            expr: sum.to_table_expr(),
            lambda,
            reference,
            matches,
        });
    }
    Ok(OutputDocument {
        request: cli.clone(),
        result: Payload::Table(TableResult { n: a.n, k: a.k, rows }),
        provenance: Provenance::new(Some(a.n), Some(a.k), vec![Method::PfaffianSum]),
    })
}

fn verify(cli: &Cli, a: &VerifyArgs) -> Result<OutputDocument> {
    if a.n == 0 {
        return Err(CliError::input("n must be positive"));
    }
    if a.n > a.max_n {
        return Err(CliError::input(format!("n = {} exceeds --max-n {}", a.n, a.max_n)));
    }
    let ks: Vec<usize> = match a.k {
        Some(k) => {
            check_k(k, a.n)?;
            vec![k]
        }
        None => (0..a.n).collect(),
    };
    let cache = open_cache(cli)?;
    let reports: Vec<_> = ks.iter().map(|&k| verify_equality_with_cache(a.n, k, cache.as_ref())).collect();
    let all_pass = reports.iter().all(|r| r.all_pass());
    Ok(OutputDocument {
        request: cli.clone(),
        result: Payload::Verify(VerifyResult { reports, all_pass }),
        provenance: Provenance::new(Some(a.n), a.k, vec![Method::PfaffianSum, Method::DividedDifference]),
    })
}

fn localize_cmd(cli: &Cli, a: &LocalizeArgs) -> Result<OutputDocument> {
    check_k(a.k, a.n)?;
    let mu = parse_lambda("--mu", &a.mu, a.k)?;
    let (class, method): (RingElement, Option<Method>) = if let Some(l) = &a.lambda {
        let lambda = parse_lambda("--lambda", l, a.k)?;
        (theta_sum(&lambda, a.n)?.evaluate()?, Some(Method::PfaffianSum))
    } else if let Some(ws) = &a.w {
        let w = parse_perm("--w", ws, a.n)?;
        let cache = open_cache(cli)?;
        (cached_schubert_poly(&w, a.n, cache.as_ref())?, Some(Method::DividedDifference))
    } else if let Some(p) = &a.poly {
        (p.parse().map_err(CliError::arg("--poly"))?, None)
    } else {
        return Err(CliError::input("give one of --lambda, --w and --poly"));
    };
    let localization = localize(&class, &mu, a.n)?;
    Ok(OutputDocument {
        request: cli.clone(),
        result: Payload::Localize(LocalizeResult { mu, class, localization }),
        provenance: Provenance::new(Some(a.n), Some(a.k), method.into_iter().collect()),
    })
}

fn theta_cmd(cli: &Cli, a: &ThetaArgs) -> Result<OutputDocument> {
    let spec: ThetaSpec = a.spec.join(" ").parse().map_err(CliError::arg("theta"))?;
    Ok(OutputDocument {
        request: cli.clone(),
        result: Payload::Theta(ThetaResult { spec, polynomial: theta(spec) }),
        provenance: Provenance::new(None, Some(spec.k), Vec::new()),
    })
}
