//! Exact counting formulas.
//!
//! Canonical structures with arc length at least 4 are counted through three
//! layers:
//!
//! 1. `T*_k(n, h)`: k-noncrossing diagrams with `h` arcs, no 1-arc and no
//!    β-arc, by inclusion-exclusion over marked 1-, β2- and β3-arcs;
//! 2. `C*_k(n, h)`: the core diagrams among them, by Möbius inversion of the
//!    stack-contraction relation;
//! 3. `T^[4]_{k,σ}(n, h)`: re-inflating every core arc to a stack of length
//!    at least `σ`.
//!
//! Every alternating sum is accumulated as separate positive and negative
//! parts; a negative total is a bug and panics.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::combinat::{binomial, multinomial};
use crate::walks::{self, WalkCounter};
use crate::{Count, Error, Result};

/// Running signed sum over nonnegative terms.
#[derive(Default)]
struct SignedSum {
    positive: Count,
    negative: Count,
}

impl SignedSum {
    fn add(&mut self, negative: bool, term: Count) {
        if negative {
            self.negative += term;
        } else {
            self.positive += term;
        }
    }

    fn finish(self, what: &str) -> Count {
        assert!(
            self.positive >= self.negative,
            "{what}: inclusion-exclusion produced a negative count"
        );
        self.positive - self.negative
    }
}

/// `T_2^[λ](n)` for `n = 0..=n_max`: secondary structures with arc length at
/// least `lambda`.
pub fn secondary_counts(lambda: usize, n_max: usize) -> Vec<Count> {
    assert!(lambda >= 1, "lambda must be >= 1");
    let mut t: Vec<Count> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        if n <= lambda {
            t.push(BigUint::one());
            continue;
        }
        let mut value = t[n - 1].clone();
        for j in 0..=(n - lambda - 1) {
            value += &t[n - 2 - j] * &t[j];
        }
        t.push(value);
    }
    t
}

pub fn secondary_count(lambda: usize, n: usize) -> Count {
    secondary_counts(lambda, n).pop().expect("nonempty")
}

/// Ways to place `j1` 1-arcs, `j2` β2-arcs and `j3` β3-arcs on `[n]`:
/// `(n - j1 - 2j2 - 3j3)! / (j1! j2! j3! (n - 2j1 - 3j2 - 4j3)!)`.
pub fn arc_selection(n: i64, j1: i64, j2: i64, j3: i64) -> Count {
    if n < 0 {
        return BigUint::zero();
    }
    multinomial(&[j1, j2, j3, n - 2 * j1 - 3 * j2 - 4 * j3])
}

/// Compositions `(a_1, ..., a_parts)` of `b` with every `a_j >= σ - 1`.
pub fn composition_count(b: i64, parts: i64, sigma: i64) -> Count {
    if parts < 1 {
        return BigUint::zero();
    }
    binomial(b + (2 - sigma) * parts - 1, parts - 1)
}

/// `T*_k(n, h)` computed directly from the walk counts.
fn t_star_with(walks: &WalkCounter, n: i64, h: i64) -> Count {
    if n < 0 || h < 0 {
        return BigUint::zero();
    }
    let mut sum = SignedSum::default();
    for j1 in 0..=h {
        for j2 in 0..=(h - j1) {
            for j3 in 0..=(h - j1 - j2) {
                let removed = 2 * j1 + 3 * j2 + 4 * j3;
                if removed > n {
                    continue;
                }
                let selections = arc_selection(n, j1, j2, j3);
                if selections.is_zero() {
                    continue;
                }
                let rest = walks.partial(n - removed, n - 2 * h - j2 - 2 * j3);
                if rest.is_zero() {
                    continue;
                }
                sum.add((j1 + j2 + j3) % 2 == 1, selections * rest);
            }
        }
    }
    sum.finish("T*")
}

/// `T*_k(n, h)`.
pub fn t_star(k: usize, n: i64, h: i64) -> Count {
    t_star_with(&walks::counter(k), n, h)
}

/// `C*_k(n, h)` from `T*` by Möbius inversion.
pub fn c_star(k: usize, n: i64, h: i64) -> Count {
    let walks = walks::counter(k);
    c_star_from(n, h, |n, h| t_star_with(&walks, n, h))
}

fn c_star_from(n: i64, h: i64, mut t_star: impl FnMut(i64, i64) -> Count) -> Count {
    if h == 0 {
        return BigUint::one();
    }
    if h < 0 {
        return BigUint::zero();
    }
    let mut sum = SignedSum::default();
    for b in 0..h {
        let t = t_star(n - 2 * h + 2 * b + 2, b + 1);
        if t.is_zero() {
            continue;
        }
        sum.add((h - b - 1) % 2 == 1, binomial(h - 1, b) * t);
    }
    sum.finish("C*")
}

fn t4_sigma_from(sigma: i64, n: i64, h: i64, mut c_star: impl FnMut(i64, i64) -> Count) -> Count {
    if h == 0 {
        return BigUint::one();
    }
    let mut total = BigUint::zero();
    for b in (sigma - 1)..h {
        let multiplicity = composition_count(b, h - b, sigma);
        if multiplicity.is_zero() {
            continue;
        }
        total += multiplicity * c_star(n - 2 * b, h - b);
    }
    total
}

/// `T^[4]_{k,σ}(n, h)`: `<k,4,σ>`-structures on `[n]` with exactly `h` arcs.
pub fn t4_sigma(k: usize, sigma: usize, n: usize, h: usize) -> Count {
    assert!(sigma >= 3, "the stack-inflation formula needs sigma >= 3");
    StarTables::build(k, n).t4_sigma(sigma, n, h)
}

/// `T^[4]_{k,σ}(n) = Σ_h T^[4]_{k,σ}(n, h)`.
pub fn t4_sigma_total(k: usize, sigma: usize, n: usize) -> Count {
    assert!(sigma >= 3, "the stack-inflation formula needs sigma >= 3");
    StarTables::build(k, n).t4_sigma_total(sigma, n)
}

/// `<k,2,1>`-structures: `Σ_b (-1)^b C(n - b, b) M_k(n - 2b)`.
pub fn tk21(k: usize, n: usize) -> Count {
    let walks = walks::counter(k);
    let mut sum = SignedSum::default();
    for b in 0..=n / 2 {
        let term = binomial((n - b) as i64, b as i64) * walks.all_partial(n - 2 * b);
        sum.add(b % 2 == 1, term);
    }
    sum.finish("T_k")
}

/// `T*_k` and `C*_k` tabulated for all `n <= n_max`, `h <= n/2`.
///
/// Immutable once built; the per-`σ` inflation reads from it.
#[derive(Debug, Clone)]
pub struct StarTables {
    k: usize,
    n_max: usize,
    t_star: Vec<Vec<Count>>,
    c_star: Vec<Vec<Count>>,
}

impl StarTables {
    pub fn build(k: usize, n_max: usize) -> Self {
        assert!(k >= 2, "crossing bound must be at least 2");
        let walks = walks::counter(k);
        walks.perfect(n_max / 2);
        let t_star: Vec<Vec<Count>> = (0..=n_max)
            .map(|n| {
                (0..=n / 2)
                    .map(|h| t_star_with(&walks, n as i64, h as i64))
                    .collect()
            })
            .collect();
        let c_star: Vec<Vec<Count>> = (0..=n_max)
            .map(|n| {
                (0..=n / 2)
                    .map(|h| c_star_from(n as i64, h as i64, |n, h| Self::get(&t_star, n, h)))
                    .collect()
            })
            .collect();
        Self {
            k,
            n_max,
            t_star,
            c_star,
        }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn get(table: &[Vec<Count>], n: i64, h: i64) -> Count {
        if n < 0 || h < 0 {
            return BigUint::zero();
        }
        table
            .get(n as usize)
            .and_then(|row| row.get(h as usize))
            .cloned()
            .unwrap_or_default()
    }

    pub fn t_star(&self, n: usize, h: usize) -> Count {
        Self::get(&self.t_star, n as i64, h as i64)
    }

    pub fn c_star(&self, n: usize, h: usize) -> Count {
        Self::get(&self.c_star, n as i64, h as i64)
    }

    pub fn t4_sigma(&self, sigma: usize, n: usize, h: usize) -> Count {
        assert!(n <= self.n_max, "table built up to n = {}", self.n_max);
        if 2 * h > n {
            return BigUint::zero();
        }
        t4_sigma_from(sigma as i64, n as i64, h as i64, |n, h| {
            Self::get(&self.c_star, n, h)
        })
    }

    pub fn t4_sigma_total(&self, sigma: usize, n: usize) -> Count {
        (0..=n / 2).map(|h| self.t4_sigma(sigma, n, h)).sum()
    }
}

/// Which formula a [`CountTable`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// `T_2^[λ](n)`, secondary structures.
    T2Lambda,
    /// `T_k(n)`, `<k,2,1>`-structures.
    Tk21,
    /// `<k,2,σ>`-structures (generating-function coefficients).
    Tk2Sigma,
    Tstar,
    Cstar,
    /// `T^[4]_{k,σ}`.
    T4Sigma,
}

/// Parameters `(k, λ, σ)` of a table; `k` is absent for secondary structures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableParams {
    pub k: Option<usize>,
    pub lambda: usize,
    pub sigma: usize,
}

/// Counts keyed by `n`, or by `(n, h)` for per-arc-count tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub kind: TableKind,
    pub params: TableParams,
    pub provenance: String,
    entries: BTreeMap<(usize, Option<usize>), Count>,
}

impl CountTable {
    pub fn new(kind: TableKind, params: TableParams, provenance: impl Into<String>) -> Self {
        Self {
            kind,
            params,
            provenance: provenance.into(),
            entries: BTreeMap::new(),
        }
    }

    /// A table of totals `values[n - first_n]` for consecutive `n`.
    pub fn from_totals(
        kind: TableKind,
        params: TableParams,
        provenance: impl Into<String>,
        first_n: usize,
        values: impl IntoIterator<Item = Count>,
    ) -> Self {
        let mut table = Self::new(kind, params, provenance);
        for (offset, v) in values.into_iter().enumerate() {
            table.insert(first_n + offset, None, v);
        }
        table
    }

    pub fn insert(&mut self, n: usize, h: Option<usize>, value: Count) {
        self.entries.insert((n, h), value);
    }

    pub fn get(&self, n: usize) -> Option<&Count> {
        self.entries.get(&(n, None))
    }

    pub fn get_h(&self, n: usize, h: usize) -> Option<&Count> {
        self.entries.get(&(n, Some(h)))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All entries in `(n, h)` order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, Option<usize>, &Count)> {
        self.entries.iter().map(|(&(n, h), v)| (n, h, v))
    }

    /// Per-`n` totals: the stored totals if present, otherwise sums over `h`.
    pub fn totals(&self) -> BTreeMap<usize, Count> {
        let mut totals: BTreeMap<usize, Count> = BTreeMap::new();
        let has_totals = self.entries.keys().any(|(_, h)| h.is_none());
        for (&(n, h), v) in &self.entries {
            if h.is_none() == has_totals {
                *totals.entry(n).or_default() += v;
            }
        }
        totals
    }

    /// `T^[4]_{k,σ}(n)` for `n = 0..=n_max`, optionally split by arc count.
    pub fn t4_sigma(k: usize, sigma: usize, n_max: usize, per_h: bool) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
        }
        if sigma < 3 {
            return Err(Error::InvalidParameter(format!(
                "arc length 4 counts need sigma >= 3, got {sigma}"
            )));
        }
        let tables = StarTables::build(k, n_max);
        let params = TableParams {
            k: Some(k),
            lambda: 4,
            sigma,
        };
        let mut table = Self::new(TableKind::T4Sigma, params, "stack inflation of C* cores");
        for n in 0..=n_max {
            if per_h {
                for h in 0..=n / 2 {
                    table.insert(n, Some(h), tables.t4_sigma(sigma, n, h));
                }
            } else {
                table.insert(n, None, tables.t4_sigma_total(sigma, n));
            }
        }
        Ok(table)
    }

    pub fn secondary(lambda: usize, n_max: usize) -> Result<Self> {
        if lambda < 1 {
            return Err(Error::InvalidParameter("lambda must be >= 1".into()));
        }
        let params = TableParams {
            k: None,
            lambda,
            sigma: 1,
        };
        Ok(Self::from_totals(
            TableKind::T2Lambda,
            params,
            "secondary structure recursion",
            0,
            secondary_counts(lambda, n_max),
        ))
    }

    pub fn tk21(k: usize, n_max: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
        }
        let params = TableParams {
            k: Some(k),
            lambda: 2,
            sigma: 1,
        };
        Ok(Self::from_totals(
            TableKind::Tk21,
            params,
            "alternating sum over 1-arcs of M_k",
            0,
            (0..=n_max).map(|n| tk21(k, n)),
        ))
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            TableKind::T2Lambda => "T2_lambda",
            TableKind::Tk21 => "Tk21",
            TableKind::Tk2Sigma => "Tk2sigma",
            TableKind::Tstar => "Tstar",
            TableKind::Cstar => "Cstar",
            TableKind::T4Sigma => "T4sigma",
        };
        f.write_str(name)
    }
}
