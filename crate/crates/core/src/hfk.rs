//! Bigraded homology tables and their consistency checks.
//!
//! A table records the dimensions `d(mu, A)` of a hat-flavor homology over
//! F2, stored sparsely. Tables pass through [`verify_table`] before any
//! bound computation consumes them: the total dimension must be odd, the
//! dimensions must satisfy the symmetry `d(mu, A) = d(mu - 2A, -A)`, and the
//! graded Euler characteristic must evaluate to 1 at `t = 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::LaurentPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TableError {
    #[error("syntax error at line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("duplicate cell at (mu, A) = ({mu}, {a})")]
    DuplicateCell { mu: i32, a: i32 },
    #[error("cell at (mu, A) = ({mu}, {a}) has dimension 0; omit empty cells")]
    ZeroCell { mu: i32, a: i32 },
    #[error("table failed verification: {0}")]
    Unverified(String),
    #[error("bad JSON table: {0}")]
    Json(String),
}

/// A sparse bigraded dimension table; absent cells have dimension zero.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct HfkTable {
    dims: BTreeMap<(i32, i32), u64>,
    name: Option<String>,
}

impl HfkTable {
    pub fn from_cells<I: IntoIterator<Item = ((i32, i32), u64)>>(cells: I) -> Self {
        let mut dims = BTreeMap::new();
        for ((mu, a), d) in cells {
            if d > 0 {
                *dims.entry((mu, a)).or_insert(0) += d;
            }
        }
        HfkTable { dims, name: None }
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn dim(&self, mu: i32, a: i32) -> u64 {
        self.dims.get(&(mu, a)).copied().unwrap_or(0)
    }

    /// Cells in `(mu, A)` order.
    pub fn cells(&self) -> Vec<((i32, i32), u64)> {
        self.dims.iter().map(|(&k, &v)| (k, v)).collect()
    }

    pub fn total_dim(&self) -> u64 {
        self.dims.values().sum()
    }

    /// Inclusive `(min, max)` ranges of the populated gradings.
    pub fn mu_range(&self) -> Option<(i32, i32)> {
        let mus: Vec<i32> = self.dims.keys().map(|&(mu, _)| mu).collect();
        Some((*mus.iter().min()?, *mus.iter().max()?))
    }

    pub fn a_range(&self) -> Option<(i32, i32)> {
        let avs: Vec<i32> = self.dims.keys().map(|&(_, a)| a).collect();
        Some((*avs.iter().min()?, *avs.iter().max()?))
    }

    /// Renders the `.hfk` CSV format (header `A,mu,dim`, cells sorted by
    /// `(A, mu)`).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("# name: {name}\n"));
        }
        out.push_str("A,mu,dim\n");
        let mut cells: Vec<(i32, i32, u64)> =
            self.dims.iter().map(|(&(mu, a), &d)| (a, mu, d)).collect();
        cells.sort_unstable();
        for (a, mu, d) in cells {
            out.push_str(&format!("{a},{mu},{d}\n"));
        }
        out
    }

    /// Canonical JSON form with the same fields as the CSV.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&TableJson::from(self)).expect("serializable") + "\n"
    }
}

impl fmt::Display for HfkTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_csv())
    }
}

#[derive(Serialize, Deserialize)]
struct TableJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    cells: Vec<CellJson>,
}

#[derive(Serialize, Deserialize)]
struct CellJson {
    #[serde(rename = "A")]
    a: i32,
    mu: i32,
    dim: u64,
}

impl From<&HfkTable> for TableJson {
    fn from(t: &HfkTable) -> Self {
        let mut cells: Vec<CellJson> = t
            .dims
            .iter()
            .map(|(&(mu, a), &d)| CellJson { a, mu, dim: d })
            .collect();
        cells.sort_by_key(|c| (c.a, c.mu));
        TableJson { name: t.name.clone(), cells }
    }
}

/// Parses the `.hfk` CSV format.
pub fn parse_hfk(text: &str) -> Result<HfkTable, TableError> {
    let mut name = None;
    let mut cells: BTreeMap<(i32, i32), u64> = BTreeMap::new();
    let mut header_seen = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        if let Some(rest) = raw.trim().strip_prefix('#') {
            if let Some(n) = rest.trim().strip_prefix("name:") {
                name = Some(n.trim().to_string());
            }
            continue;
        }
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if !header_seen {
            if content != "A,mu,dim" {
                return Err(TableError::Syntax {
                    line,
                    msg: format!("expected header `A,mu,dim`, found `{content}`"),
                });
            }
            header_seen = true;
            continue;
        }
        let fields: Vec<&str> = content.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(TableError::Syntax { line, msg: "expected `A,mu,dim`".into() });
        }
        let a: i32 = fields[0]
            .parse()
            .map_err(|_| TableError::Syntax { line, msg: format!("bad A `{}`", fields[0]) })?;
        let mu: i32 = fields[1]
            .parse()
            .map_err(|_| TableError::Syntax { line, msg: format!("bad mu `{}`", fields[1]) })?;
        let dim: u64 = fields[2]
            .parse()
            .map_err(|_| TableError::Syntax { line, msg: format!("bad dim `{}`", fields[2]) })?;
        if dim == 0 {
            return Err(TableError::ZeroCell { mu, a });
        }
        if cells.insert((mu, a), dim).is_some() {
            return Err(TableError::DuplicateCell { mu, a });
        }
    }
    if !header_seen {
        return Err(TableError::Syntax { line: 1, msg: "missing `A,mu,dim` header".into() });
    }
    let mut table = HfkTable { dims: cells, name: None };
    if let Some(n) = name {
        table = table.with_name(n);
    }
    Ok(table)
}

/// Parses the canonical JSON form.
pub fn parse_hfk_json(text: &str) -> Result<HfkTable, TableError> {
    let parsed: TableJson =
        serde_json::from_str(text).map_err(|e| TableError::Json(e.to_string()))?;
    let mut dims = BTreeMap::new();
    for c in parsed.cells {
        if c.dim == 0 {
            return Err(TableError::ZeroCell { mu: c.mu, a: c.a });
        }
        if dims.insert((c.mu, c.a), c.dim).is_some() {
            return Err(TableError::DuplicateCell { mu: c.mu, a: c.a });
        }
    }
    Ok(HfkTable { dims, name: parsed.name })
}

/// Graded Euler characteristic `sum (-1)^mu d(mu, A) t^A`.
pub fn euler_characteristic(tab: &HfkTable) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    for (&(mu, a), &d) in tab.dims.iter() {
        let c = if mu.rem_euclid(2) == 0 {
            BigInt::from(d)
        } else {
            -BigInt::from(d)
        };
        p.add_term(a as i64, c);
    }
    p
}

/// A mismatched symmetry pair: the two cells and their dimensions.
pub type SymmetryOffender = ((i32, i32), (i32, i32), (u64, u64));

/// Outcome of the symmetry check `d(mu, A) = d(mu - 2A, -A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub pass: bool,
    /// Cell pairs with mismatched dimensions: `(cell, partner, dims)`.
    pub offenders: Vec<SymmetryOffender>,
}

pub fn check_symmetry(tab: &HfkTable) -> SymmetryReport {
    let mut offenders = Vec::new();
    let mut checked = std::collections::BTreeSet::new();
    let mut keys: Vec<(i32, i32)> = tab.dims.keys().copied().collect();
    keys.sort_unstable();
    for (mu, a) in keys {
        let partner = (mu - 2 * a, -a);
        let pair = if (mu, a) <= partner { ((mu, a), partner) } else { (partner, (mu, a)) };
        if !checked.insert(pair) {
            continue;
        }
        let d1 = tab.dim(pair.0 .0, pair.0 .1);
        let d2 = tab.dim(pair.1 .0, pair.1 .1);
        if d1 != d2 {
            offenders.push((pair.0, pair.1, (d1, d2)));
        }
    }
    SymmetryReport { pass: offenders.is_empty(), offenders }
}

/// Aggregate verification report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub total_dim: u64,
    pub parity_pass: bool,
    pub symmetry: SymmetryReport,
    /// Euler characteristic rendered as text plus its value at `t = 1`.
    pub euler: String,
    pub euler_at_one: i64,
    pub euler_pass: bool,
    pub verified: bool,
}

/// A table that passed [`verify_table`]; bound computations require this.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifiedTable(HfkTable);

impl VerifiedTable {
    pub fn table(&self) -> &HfkTable {
        &self.0
    }
}

impl std::ops::Deref for VerifiedTable {
    type Target = HfkTable;

    fn deref(&self) -> &HfkTable {
        &self.0
    }
}

/// Runs all integrity checks and wraps the table on success.
pub fn verify_table(tab: &HfkTable) -> (VerifyReport, Option<VerifiedTable>) {
    let total = tab.total_dim();
    let parity_pass = total % 2 == 1;
    let symmetry = check_symmetry(tab);
    let chi = euler_characteristic(tab);
    let at_one_big = chi.eval_at_one();
    let euler_at_one = i64::try_from(&at_one_big).unwrap_or(i64::MAX);
    let euler_pass = euler_at_one == 1;
    let verified = parity_pass && symmetry.pass && euler_pass;
    let report = VerifyReport {
        total_dim: total,
        parity_pass,
        symmetry,
        euler: chi.to_string(),
        euler_at_one,
        euler_pass,
        verified,
    };
    let wrapped = verified.then(|| VerifiedTable(tab.clone()));
    (report, wrapped)
}

/// Shorthand when only the verified table is wanted.
pub fn verified(tab: &HfkTable) -> Result<VerifiedTable, TableError> {
    let (report, wrapped) = verify_table(tab);
    wrapped.ok_or_else(|| {
        let mut reasons = Vec::new();
        if !report.parity_pass {
            reasons.push(format!("total dimension {} is even", report.total_dim));
        }
        if !report.symmetry.pass {
            reasons.push(format!("symmetry fails at {:?}", report.symmetry.offenders));
        }
        if !report.euler_pass {
            reasons.push(format!("Euler characteristic at t=1 is {}", report.euler_at_one));
        }
        TableError::Unverified(reasons.join("; "))
    })
}
