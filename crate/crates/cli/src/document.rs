//! The output document: request echo, result payload and provenance.

use serde::{Deserialize, Serialize};

use schubpf::schubert::{VerifyReport, CACHE_SCHEMA_VERSION};
use schubpf::{KStrictPartition, ParabolicSet, RingElement, SignedPermutation, TableExpr, ThetaSpec};

use crate::args::{Cli, Method};
use crate::error::{EXIT_MISMATCH, EXIT_OK};

/// Everything a command produces. JSON round-trips losslessly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDocument {
    pub request: Cli,
    pub result: Payload,
    pub provenance: Provenance,
}

impl OutputDocument {
    /// `EXIT_MISMATCH` when any comparison in the payload failed.
    pub fn exit_code(&self) -> i32 {
        let mismatch = match &self.result {
            Payload::Compute(c) => c.equal == Some(false),
            Payload::Table(t) => t.rows.iter().any(|r| r.matches == Some(false)),
            Payload::Verify(v) => !v.all_pass,
            Payload::Localize(_) | Payload::Theta(_) => false,
        };
        if mismatch {
            EXIT_MISMATCH
        } else {
            EXIT_OK
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub cache_schema: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub methods: Vec<Method>,
}

impl Provenance {
    pub fn new(n: Option<usize>, k: Option<usize>, methods: Vec<Method>) -> Self {
        Provenance {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            cache_schema: CACHE_SCHEMA_VERSION,
            n,
            k,
            methods,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    Compute(ComputeResult),
    Table(TableResult),
    Verify(VerifyResult),
    Localize(LocalizeResult),
    Theta(ThetaResult),
}

/// The class being computed, with every derived description of it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<KStrictPartition>,
    pub w: SignedPermutation,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<ParabolicSet>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: Method,
    /// The formal sum, for the methods that produce one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sum: Option<TableExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polynomial: Option<RingElement>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComputeResult {
    pub target: Target,
    pub results: Vec<MethodResult>,
    /// Whether all methods gave the same polynomial; present for two or more methods.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equal: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub lambda: KStrictPartition,
    pub w: SignedPermutation,
    pub chi: Vec<i32>,
    pub d_set: Vec<(usize, usize)>,
    pub expr: TableExpr,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<TableExpr>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableResult {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<TableRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyResult {
    pub reports: Vec<VerifyReport>,
    pub all_pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizeResult {
    pub mu: KStrictPartition,
    pub class: RingElement,
    pub localization: RingElement,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThetaResult {
    pub spec: ThetaSpec,
    pub polynomial: RingElement,
}
