//! Built-in reference tables of Pfaffian and determinant expressions.
//!
//! Each row stores the expression as a [`TableExpr`] AST together with the
//! LaTeX exactly as typeset in the reference, both as a whole and per term.

use serde::{Deserialize, Serialize};

use schubpf::TableExpr;

const TABLE_5_2: &str = include_str!("../data/table_5_2.json");
const TABLE_5_3: &str = include_str!("../data/table_5_3.json");

/// The `(n, k)` pairs with a built-in table.
pub const AVAILABLE: &[(usize, usize)] = &[(5, 2), (5, 3)];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub lambda: Vec<usize>,
    pub w: Vec<i32>,
    pub expr: TableExpr,
    pub latex: String,
    pub term_latex: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub n: usize,
    pub k: usize,
    pub rows: Vec<FixtureRow>,
}

impl Fixture {
    pub fn row(&self, lambda: &[usize]) -> Option<&FixtureRow> {
        self.rows.iter().find(|r| r.lambda == lambda)
    }
}

/// The reference table for `(n, k)`, if one is built in.
pub fn fixture(n: usize, k: usize) -> Option<Fixture> {
    let raw = match (n, k) {
        (5, 2) => TABLE_5_2,
        (5, 3) => TABLE_5_3,
        _ => return None,
    };
    Some(serde_json::from_str(raw).expect("built-in table is valid JSON"))
}
