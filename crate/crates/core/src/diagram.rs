//! Diagrams over `[n]`, their structural predicates, and exhaustive
//! brute-force enumerators used as ground truth for every counting formula.
//!
//! Vertices are 1-based. An arc `(i, j)` always has `i < j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::{Count, Error, Result};

/// An arc `(i, j)` with `1 <= i < j <= n`.
pub type Arc = (usize, usize);

/// A partial matching on `[n]`: every vertex has degree at most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Diagram {
    n: usize,
    arcs: Vec<Arc>,
}

/// `<k, λ, σ>`: at most `k - 1` mutually crossing arcs, arc length at least
/// `lambda`, stack length at least `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StructureClass {
    pub k: usize,
    pub lambda: usize,
    pub sigma: usize,
}

impl StructureClass {
    pub fn new(k: usize, lambda: usize, sigma: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidClass(format!("k must be >= 2, got {k}")));
        }
        if lambda < 1 {
            return Err(Error::InvalidClass("lambda must be >= 1".into()));
        }
        if sigma < 1 {
            return Err(Error::InvalidClass("sigma must be >= 1".into()));
        }
        Ok(Self { k, lambda, sigma })
    }
}

impl fmt::Display for StructureClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{},{},{}>", self.k, self.lambda, self.sigma)
    }
}

/// A maximal run of parallel arcs `(i, j), (i+1, j-1), ..., (i+s-1, j-s+1)`,
/// stored outermost first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stack {
    pub arcs: Vec<Arc>,
}

impl Stack {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn outermost(&self) -> Arc {
        self.arcs[0]
    }

    pub fn innermost(&self) -> Arc {
        *self.arcs.last().expect("stacks are nonempty")
    }
}

/// Partition of a diagram's arcs into maximal stacks, ordered by outermost arc.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackDecomposition {
    pub stacks: Vec<Stack>,
}

impl StackDecomposition {
    /// Minimum stack length, `None` for an arcless diagram.
    pub fn min_stack_length(&self) -> Option<usize> {
        self.stacks.iter().map(Stack::len).min()
    }

    pub fn lengths(&self) -> Vec<usize> {
        self.stacks.iter().map(Stack::len).collect()
    }
}

fn crosses(a: Arc, b: Arc) -> bool {
    let ((i, j), (p, q)) = (a, b);
    (i < p && p < j && j < q) || (p < i && i < q && q < j)
}

impl Diagram {
    /// Builds a diagram, validating bounds and degree, and sorting the arcs.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = Arc>) -> Result<Self> {
        let mut arcs: Vec<Arc> = arcs.into_iter().collect();
        let mut seen = vec![false; n + 1];
        for &(i, j) in &arcs {
            if !(1 <= i && i < j && j <= n) {
                return Err(Error::InvalidDiagram(format!(
                    "arc ({i},{j}) is not of the form 1 <= i < j <= {n}"
                )));
            }
            for v in [i, j] {
                if seen[v] {
                    return Err(Error::InvalidDiagram(format!("vertex {v} has degree > 1")));
                }
                seen[v] = true;
            }
        }
        arcs.sort_unstable();
        Ok(Self { n, arcs })
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            arcs: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn contains_arc(&self, arc: Arc) -> bool {
        self.arcs.binary_search(&arc).is_ok()
    }

    /// `partners()[v]` is the partner of vertex `v` (index 0 unused).
    pub fn partners(&self) -> Vec<Option<usize>> {
        let mut partner = vec![None; self.n + 1];
        for &(i, j) in &self.arcs {
            partner[i] = Some(j);
            partner[j] = Some(i);
        }
        partner
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        let partner = self.partners();
        (1..=self.n).filter(|&v| partner[v].is_none()).collect()
    }

    /// Mirror image `i -> n + 1 - i`.
    pub fn reversed(&self) -> Self {
        let n = self.n;
        let arcs = self.arcs.iter().map(|&(i, j)| (n + 1 - j, n + 1 - i));
        Self::new(n, arcs).expect("reversal preserves validity")
    }

    /// Size of the largest set of pairwise crossing arcs (0 when arcless).
    ///
    /// Maximum clique of the crossing graph by branch and bound. Exponential in
    /// the number of arcs; meant for oracle-sized diagrams.
    pub fn max_crossing(&self) -> usize {
        let h = self.arcs.len();
        if h == 0 {
            return 0;
        }
        let adjacent: Vec<Vec<bool>> = (0..h)
            .map(|a| {
                (0..h)
                    .map(|b| crosses(self.arcs[a], self.arcs[b]))
                    .collect()
            })
            .collect();
        let mut best = 1;
        let all: Vec<usize> = (0..h).collect();
        extend_clique(&adjacent, 0, &all, &mut best);
        best
    }

    /// Minimum of `j - i` over the arcs; `None` is the `+∞` sentinel of an
    /// arcless diagram.
    pub fn min_arc_length(&self) -> Option<usize> {
        self.arcs.iter().map(|&(i, j)| j - i).min()
    }

    pub fn stack_decompose(&self) -> StackDecomposition {
        let mut stacks = Vec::new();
        for &(i, j) in &self.arcs {
            // an arc starts a stack unless its outer neighbour is present
            if i > 1 && self.contains_arc((i - 1, j + 1)) {
                continue;
            }
            let mut run = vec![(i, j)];
            let (mut a, mut b) = (i, j);
            while b > a + 2 && self.contains_arc((a + 1, b - 1)) {
                a += 1;
                b -= 1;
                run.push((a, b));
            }
            stacks.push(Stack { arcs: run });
        }
        StackDecomposition { stacks }
    }

    pub fn is_member(&self, class: &StructureClass) -> bool {
        if self.arcs.is_empty() {
            return true;
        }
        self.min_arc_length().is_some_and(|l| l >= class.lambda)
            && self
                .stack_decompose()
                .min_stack_length()
                .is_some_and(|s| s >= class.sigma)
            && self.max_crossing() < class.k
    }

    /// Whether the diagram has an arc `(i, i+2)` with `i+1` isolated, or an
    /// arc `(i, i+3)` with `i+1` and `i+2` isolated.
    pub fn has_beta_arc(&self) -> bool {
        let partner = self.partners();
        self.arcs.iter().any(|&(i, j)| match j - i {
            2 => partner[i + 1].is_none(),
            3 => partner[i + 1].is_none() && partner[i + 2].is_none(),
            _ => false,
        })
    }

    pub fn has_one_arc(&self) -> bool {
        self.arcs.iter().any(|&(i, j)| j == i + 1)
    }

    /// No two arcs `(i, j), (i+1, j-1)`.
    pub fn is_core(&self) -> bool {
        self.arcs
            .iter()
            .all(|&(i, j)| j < i + 3 || !self.contains_arc((i + 1, j - 1)))
    }

    /// Contracts every maximal stack to its innermost arc, keeps isolated
    /// vertices, and relabels the survivors `1..n'` in order.
    pub fn core_map(&self) -> Diagram {
        let mut dropped = vec![false; self.n + 1];
        for stack in self.stack_decompose().stacks {
            for &(i, j) in &stack.arcs[..stack.len() - 1] {
                dropped[i] = true;
                dropped[j] = true;
            }
        }
        let mut label = vec![0; self.n + 1];
        let mut next = 0;
        for v in 1..=self.n {
            if !dropped[v] {
                next += 1;
                label[v] = next;
            }
        }
        let arcs = self
            .arcs
            .iter()
            .filter(|&&(i, _)| !dropped[i])
            .map(|&(i, j)| (label[i], label[j]));
        Diagram::new(next, arcs).expect("relabeling preserves validity")
    }

    /// Smallest class the diagram belongs to: `k = max_crossing + 1` (at
    /// least 2), `λ` the minimum arc length and `σ` the minimum stack length.
    /// The length fields are `None` for an arcless diagram.
    pub fn classify(&self) -> Classification {
        Classification {
            k: (self.max_crossing() + 1).max(2),
            lambda: self.min_arc_length(),
            sigma: self.stack_decompose().min_stack_length(),
        }
    }
}

fn extend_clique(adjacent: &[Vec<bool>], size: usize, candidates: &[usize], best: &mut usize) {
    if size + candidates.len() <= *best {
        if size > *best {
            *best = size;
        }
        return;
    }
    if candidates.is_empty() {
        *best = (*best).max(size);
        return;
    }
    for (pos, &v) in candidates.iter().enumerate() {
        if size + candidates.len() - pos <= *best {
            break;
        }
        let next: Vec<usize> = candidates[pos + 1..]
            .iter()
            .copied()
            .filter(|&u| adjacent[v][u])
            .collect();
        extend_clique(adjacent, size + 1, &next, best);
    }
}

/// Minimal class parameters of a diagram.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    pub k: usize,
    pub lambda: Option<usize>,
    pub sigma: Option<usize>,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<usize>| v.map_or_else(|| "inf".to_string(), |v| v.to_string());
        write!(f, "<{},{},{}>", self.k, show(self.lambda), show(self.sigma))
    }
}

/// Text format: `n=<int>` on the first non-comment line, then one `<i> <j>`
/// per arc. `#` starts a comment.
impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n={}", self.n)?;
        for (i, j) in &self.arcs {
            writeln!(f, "{i} {j}")?;
        }
        Ok(())
    }
}

impl FromStr for Diagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut n = None;
        let mut arcs = Vec::new();
        for (idx, raw) in s.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            match n {
                None => {
                    let value = line
                        .strip_prefix("n=")
                        .ok_or_else(|| parse_err(format!("expected `n=<int>`, got `{line}`")))?;
                    n = Some(
                        value
                            .trim()
                            .parse::<usize>()
                            .map_err(|e| parse_err(format!("bad vertex count: {e}")))?,
                    );
                }
                Some(_) => {
                    let fields: Vec<&str> = line.split_whitespace().collect();
                    let [i, j] = fields[..] else {
                        return Err(parse_err(format!("expected `<i> <j>`, got `{line}`")));
                    };
                    let i = i
                        .parse()
                        .map_err(|e| parse_err(format!("bad vertex `{i}`: {e}")))?;
                    let j = j
                        .parse()
                        .map_err(|e| parse_err(format!("bad vertex `{j}`: {e}")))?;
                    arcs.push((i, j));
                }
            }
        }
        let n = n.ok_or(Error::Parse {
            line: 0,
            message: "missing `n=<int>` header".into(),
        })?;
        Diagram::new(n, arcs)
    }
}

/// Default largest `n` the brute-force enumerators accept.
pub const DEFAULT_ORACLE_BOUND: usize = 16;

/// Exhaustive enumerators over partial matchings.
///
/// Matchings are generated with the smallest undecided vertex first: it is
/// either left isolated or paired with each admissible partner in ascending
/// order. Output order is therefore deterministic.
#[derive(Debug, Clone, Copy)]
pub struct BruteForce {
    pub bound: usize,
}

impl Default for BruteForce {
    fn default() -> Self {
        Self {
            bound: DEFAULT_ORACLE_BOUND,
        }
    }
}

/// Generation constraints. All are necessary conditions of the predicates
/// applied afterwards, so pruning by them never loses a diagram.
#[derive(Debug, Clone, Copy)]
struct Generation {
    min_len: usize,
    max_arcs: usize,
    allow_isolated: bool,
}

impl BruteForce {
    pub fn new(bound: usize) -> Self {
        Self { bound }
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.bound {
            Err(Error::OracleTooLarge {
                n,
                bound: self.bound,
            })
        } else {
            Ok(())
        }
    }

    fn generate(&self, n: usize, rules: Generation, visit: &mut dyn FnMut(&Diagram)) {
        let mut partner = vec![0usize; n + 2];
        let mut arcs = Vec::new();
        generate_from(1, n, rules, &mut partner, &mut arcs, visit);
    }

    /// All partial matchings on `[n]` (with arcs of length at least
    /// `class.lambda`) that are members of `class`.
    pub fn enumerate_class(&self, n: usize, class: &StructureClass) -> Result<Vec<Diagram>> {
        self.check(n)?;
        let rules = Generation {
            min_len: class.lambda,
            max_arcs: n / 2,
            allow_isolated: true,
        };
        let mut out = Vec::new();
        self.generate(n, rules, &mut |d| {
            if d.is_member(class) {
                out.push(d.clone());
            }
        });
        Ok(out)
    }

    /// `counts[h]` = members of `class` on `[n]` with exactly `h` arcs.
    pub fn class_counts_by_arcs(&self, n: usize, class: &StructureClass) -> Result<Vec<Count>> {
        let mut counts = vec![0u64; n / 2 + 1];
        for d in self.enumerate_class(n, class)? {
            counts[d.arc_count()] += 1;
        }
        Ok(counts.into_iter().map(BigUint::from).collect())
    }

    /// Diagrams on `[n]` with exactly `h` arcs, at most `k - 1` mutually
    /// crossing, no 1-arc and no β-arc.
    pub fn count_tstar(&self, n: usize, h: usize, k: usize) -> Result<Count> {
        self.count_exact_arcs(n, h, |d| d.max_crossing() < k && !d.has_beta_arc())
    }

    /// As [`count_tstar`](Self::count_tstar), restricted to core diagrams.
    pub fn count_cstar(&self, n: usize, h: usize, k: usize) -> Result<Count> {
        self.count_exact_arcs(n, h, |d| {
            d.is_core() && d.max_crossing() < k && !d.has_beta_arc()
        })
    }

    fn count_exact_arcs(
        &self,
        n: usize,
        h: usize,
        keep: impl Fn(&Diagram) -> bool,
    ) -> Result<Count> {
        self.check(n)?;
        if 2 * h > n {
            return Ok(BigUint::from(0u8));
        }
        let rules = Generation {
            min_len: 2,
            max_arcs: h,
            allow_isolated: true,
        };
        let mut count = 0u64;
        self.generate(n, rules, &mut |d| {
            if d.arc_count() == h && !d.has_one_arc() && keep(d) {
                count += 1;
            }
        });
        Ok(BigUint::from(count))
    }

    /// k-noncrossing perfect matchings on `[n]`.
    pub fn count_perfect_matchings(&self, n: usize, k: usize) -> Result<Count> {
        self.check(n)?;
        if n % 2 == 1 {
            return Ok(BigUint::from(0u8));
        }
        let rules = Generation {
            min_len: 1,
            max_arcs: n / 2,
            allow_isolated: false,
        };
        let mut count = 0u64;
        self.generate(n, rules, &mut |d| {
            if d.max_crossing() < k {
                count += 1;
            }
        });
        Ok(BigUint::from(count))
    }

    /// k-noncrossing partial matchings on `[n]` with exactly `isolated`
    /// isolated vertices.
    pub fn count_partial_matchings(&self, n: usize, isolated: usize, k: usize) -> Result<Count> {
        self.check(n)?;
        let rules = Generation {
            min_len: 1,
            max_arcs: n / 2,
            allow_isolated: true,
        };
        let mut count = 0u64;
        self.generate(n, rules, &mut |d| {
            if n - 2 * d.arc_count() == isolated && d.max_crossing() < k {
                count += 1;
            }
        });
        Ok(BigUint::from(count))
    }
}

// partner[v]: 0 undecided, usize::MAX isolated, otherwise the partner.
fn generate_from(
    start: usize,
    n: usize,
    rules: Generation,
    partner: &mut [usize],
    arcs: &mut Vec<Arc>,
    visit: &mut dyn FnMut(&Diagram),
) {
    let mut v = start;
    while v <= n && partner[v] != 0 {
        v += 1;
    }
    if v > n {
        let d = Diagram {
            n,
            arcs: sorted(arcs),
        };
        visit(&d);
        return;
    }
    if rules.allow_isolated {
        partner[v] = usize::MAX;
        generate_from(v + 1, n, rules, partner, arcs, visit);
        partner[v] = 0;
    }
    if arcs.len() < rules.max_arcs {
        for p in (v + rules.min_len)..=n {
            if partner[p] != 0 {
                continue;
            }
            partner[v] = p;
            partner[p] = v;
            arcs.push((v, p));
            generate_from(v + 1, n, rules, partner, arcs, visit);
            arcs.pop();
            partner[p] = 0;
        }
        partner[v] = 0;
    }
}

fn sorted(arcs: &[Arc]) -> Vec<Arc> {
    // arcs are pushed in increasing order of their left endpoint
    debug_assert!(arcs.windows(2).all(|w| w[0].0 < w[1].0));
    arcs.to_vec()
}
