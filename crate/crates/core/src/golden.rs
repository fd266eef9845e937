//! Published reference values and a checker that recomputes them.
//!
//! Reference tables are bundled as CSV under `data/`:
//!
//! | id       | contents                                         |
//! |----------|--------------------------------------------------|
//! | `T000`   | counts of `<3,4,σ>`-structures, σ = 3, 4, n = 8..24 |
//! | `Table1` | growth rates of `<k,4,σ>`, k = 3..9, σ = 3..9     |
//! | `tab1b`  | growth rates of `<k,2,1>`, k = 2..10              |
//! | `tab2`   | growth rates of `<k,4,1>`, k = 4..9               |
//! | `tab3`   | growth rates of `<k,2,σ>`, k = 2..10, σ = 2..5    |

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::asymptotics::{solve_growth, RootEquation, RootKind, DEFAULT_TOLERANCE};
use crate::enumeration::CountTable;
use crate::{Count, Error, Result};

/// Largest accepted deviation between a recomputed and a tabulated rate.
pub const RATE_TOLERANCE: f64 = 5e-4;

const T000: &str = include_str!("../data/t000.csv");
const TABLE1: &str = include_str!("../data/table1.csv");
const TAB1B: &str = include_str!("../data/tab1b.csv");
const TAB2: &str = include_str!("../data/tab2.csv");
const TAB3: &str = include_str!("../data/tab3.csv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GoldenTable {
    T000,
    Table1,
    Tab1b,
    Tab2,
    Tab3,
}

impl GoldenTable {
    pub const ALL: [GoldenTable; 5] = [
        GoldenTable::T000,
        GoldenTable::Table1,
        GoldenTable::Tab1b,
        GoldenTable::Tab2,
        GoldenTable::Tab3,
    ];

    pub fn id(self) -> &'static str {
        match self {
            GoldenTable::T000 => "T000",
            GoldenTable::Table1 => "Table1",
            GoldenTable::Tab1b => "tab1b",
            GoldenTable::Tab2 => "tab2",
            GoldenTable::Tab3 => "tab3",
        }
    }

    fn source(self) -> &'static str {
        match self {
            GoldenTable::T000 => T000,
            GoldenTable::Table1 => TABLE1,
            GoldenTable::Tab1b => TAB1B,
            GoldenTable::Tab2 => TAB2,
            GoldenTable::Tab3 => TAB3,
        }
    }

    /// Root equation behind a rate table; `None` for count tables.
    pub fn root_kind(self) -> Option<RootKind> {
        match self {
            GoldenTable::T000 => None,
            GoldenTable::Table1 => Some(RootKind::K4Sigma),
            GoldenTable::Tab1b => Some(RootKind::K21),
            GoldenTable::Tab2 => Some(RootKind::K41),
            GoldenTable::Tab3 => Some(RootKind::K2Sigma),
        }
    }
}

impl fmt::Display for GoldenTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for GoldenTable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace(':', "").to_ascii_lowercase();
        GoldenTable::ALL
            .into_iter()
            .find(|t| t.id().to_ascii_lowercase() == key)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown table `{s}`")))
    }
}

/// One tabulated count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub k: usize,
    pub sigma: usize,
    pub n: usize,
    pub count: Count,
}

/// One tabulated growth rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateEntry {
    pub kind: RootKind,
    pub k: usize,
    pub sigma: usize,
    pub rate: f64,
}

fn records(src: &str) -> impl Iterator<Item = Vec<&str>> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::trim).collect())
}

fn field<T: FromStr>(rec: &[&str], i: usize) -> T {
    rec[i]
        .parse()
        .unwrap_or_else(|_| panic!("malformed bundled record {rec:?}"))
}

pub fn t000_rows() -> Vec<CountRow> {
    records(T000)
        .map(|r| CountRow {
            k: field(&r, 0),
            sigma: field(&r, 1),
            n: field(&r, 2),
            count: field(&r, 3),
        })
        .collect()
}

/// Entries of a rate table; empty for [`GoldenTable::T000`].
pub fn rate_entries(table: GoldenTable) -> Vec<RateEntry> {
    let Some(kind) = table.root_kind() else {
        return Vec::new();
    };
    records(table.source())
        .map(|r| RateEntry {
            kind,
            k: field(&r, 0),
            sigma: field(&r, 1),
            rate: field(&r, 2),
        })
        .collect()
}

/// One recomputed entry.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyLine {
    pub label: String,
    pub expected: String,
    pub computed: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub table: GoldenTable,
    pub lines: Vec<VerifyLine>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.ok)
    }

    pub fn failures(&self) -> impl Iterator<Item = &VerifyLine> {
        self.lines.iter().filter(|l| !l.ok)
    }
}

/// Recomputes every entry of `table`: counts exactly, rates within
/// [`RATE_TOLERANCE`].
pub fn verify_table(table: GoldenTable) -> Result<VerifyReport> {
    let lines = match table.root_kind() {
        None => verify_counts()?,
        Some(_) => rate_entries(table)
            .into_iter()
            .map(verify_rate)
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(VerifyReport { table, lines })
}

fn verify_counts() -> Result<Vec<VerifyLine>> {
    let rows = t000_rows();
    let mut horizon: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for row in &rows {
        let n = horizon.entry((row.k, row.sigma)).or_default();
        *n = (*n).max(row.n);
    }
    let tables = horizon
        .into_iter()
        .map(|((k, sigma), n_max)| Ok(((k, sigma), CountTable::t4_sigma(k, sigma, n_max, false)?)))
        .collect::<Result<BTreeMap<_, _>>>()?;
    Ok(rows
        .into_iter()
        .map(|row| {
            let computed = tables[&(row.k, row.sigma)]
                .get(row.n)
                .cloned()
                .unwrap_or_default();
            VerifyLine {
                label: format!("k={} sigma={} n={}", row.k, row.sigma, row.n),
                expected: row.count.to_string(),
                computed: computed.to_string(),
                ok: computed == row.count,
            }
        })
        .collect())
}

fn verify_rate(entry: RateEntry) -> Result<VerifyLine> {
    let eq = RootEquation::new(entry.kind, entry.k, entry.sigma)?;
    let rate = solve_growth(&eq, DEFAULT_TOLERANCE)?.rate_f64();
    Ok(VerifyLine {
        label: format!("{} k={} sigma={}", entry.kind, entry.k, entry.sigma),
        expected: format!("{:.4}", entry.rate),
        computed: format!("{rate:.4}"),
        ok: (rate - entry.rate).abs() <= RATE_TOLERANCE,
    })
}
