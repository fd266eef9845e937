//! Dominant singularities and exponential growth rates.
//!
//! Every generating function in this crate is a k-noncrossing matching series
//! composed with an algebraic substitution `ϑ(x)`. The dominant singularity
//! is the minimal positive solution `γ` of `ϑ(x) = ρ_k`, `ρ_k = 1/(2(k-1))`,
//! and the coefficients grow like `(1/γ)^n` times a power of `n`.
//!
//! Root finding scans `(0, 1)` on a uniform grid for the first sign change of
//! `ϑ(x) - ρ_k` and bisects it in 256-bit binary floating point.

use std::cmp::Ordering;
use std::fmt;
use std::io::{self, Write};

use astro_float::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::enumeration::CountTable;
use crate::{Error, Result};

const PREC: usize = 256;
const RM: RoundingMode = RoundingMode::ToEven;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 1000;

/// A 256-bit binary floating point number.
#[derive(Clone, Debug)]
pub struct Real(BigFloat);

impl Real {
    pub fn from_i64(v: i64) -> Self {
        Self(BigFloat::from_i64(v, PREC))
    }

    pub fn from_f64(v: f64) -> Self {
        Self(BigFloat::from_f64(v, PREC))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).div(&Self::from_i64(den))
    }

    pub fn zero() -> Self {
        Self::from_i64(0)
    }

    pub fn one() -> Self {
        Self::from_i64(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self(self.0.add(&o.0, PREC, RM))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self(self.0.sub(&o.0, PREC, RM))
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self(self.0.mul(&o.0, PREC, RM))
    }

    pub fn div(&self, o: &Self) -> Self {
        Self(self.0.div(&o.0, PREC, RM))
    }

    pub fn neg(&self) -> Self {
        Self(self.0.neg())
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    pub fn powi(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Square root; `None` for negative input.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            None
        } else {
            Some(Self(self.0.sqrt(PREC, RM)))
        }
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        !self.0.is_negative() && !self.0.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_string().parse().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl PartialEq for Real {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Real {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.0.cmp(&other.0).map(|c| c.cmp(&0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RootKind {
    /// `x / (x^2 - x + 1)`
    K21,
    /// `x r1(-x^2) / (1 - x r1(-x^2))`
    K41,
    /// `sqrt(u0) x / (u0 x^2 - x + 1)`
    K2Sigma,
    /// `sqrt(w0) x / v0`
    K4Sigma,
}

impl RootKind {
    pub fn lambda(self) -> usize {
        match self {
            RootKind::K21 | RootKind::K2Sigma => 2,
            RootKind::K41 | RootKind::K4Sigma => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RootKind::K21 => "k21",
            RootKind::K41 => "k41",
            RootKind::K2Sigma => "k2sigma",
            RootKind::K4Sigma => "k4sigma",
        }
    }
}

impl fmt::Display for RootKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for RootKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "k21" => Ok(RootKind::K21),
            "k41" => Ok(RootKind::K41),
            "k2sigma" => Ok(RootKind::K2Sigma),
            "k4sigma" => Ok(RootKind::K4Sigma),
            _ => Err(Error::InvalidParameter(format!(
                "unknown root equation `{s}`"
            ))),
        }
    }
}

/// `ϑ(x) = ρ` for one structure class, with `ρ = rho_num / rho_den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootEquation {
    pub kind: RootKind,
    pub k: usize,
    pub sigma: usize,
    rho_num: i64,
    rho_den: i64,
}

impl RootEquation {
    /// The equation with `ρ = ρ_k`. `sigma` is ignored (set to 1) for the
    /// `K21` and `K41` kinds.
    pub fn new(kind: RootKind, k: usize, sigma: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(format!("k must be >= 2, got {k}")));
        }
        let sigma = match kind {
            RootKind::K21 | RootKind::K41 => 1,
            RootKind::K2Sigma if sigma < 1 => {
                return Err(Error::InvalidParameter("sigma must be >= 1".into()))
            }
            RootKind::K4Sigma if sigma < 3 => {
                return Err(Error::InvalidParameter(format!(
                    "sigma must be >= 3 for lambda = 4, got {sigma}"
                )))
            }
            _ => sigma,
        };
        Ok(Self {
            kind,
            k,
            sigma,
            rho_num: 1,
            rho_den: 2 * (k as i64 - 1),
        })
    }

    /// The same left-hand side against `-ρ`.
    pub fn negated(&self) -> Self {
        Self {
            rho_num: -self.rho_num,
            ..*self
        }
    }

    pub fn lambda(&self) -> usize {
        self.kind.lambda()
    }

    pub fn rho(&self) -> Real {
        Real::ratio(self.rho_num, self.rho_den)
    }

    pub fn rho_f64(&self) -> f64 {
        self.rho_num as f64 / self.rho_den as f64
    }

    /// `ϑ(x)`.
    pub fn theta(&self, x: &Real) -> Result<Real> {
        match self.kind {
            RootKind::K21 => {
                let d = x.mul(x).sub(x).add(&Real::one());
                positive(&d, x)?;
                Ok(x.div(&d))
            }
            RootKind::K41 => {
                let r = r1_eval(&x.mul(x).neg())?;
                let xr = x.mul(&r);
                let d = Real::one().sub(&xr);
                positive(&d, x)?;
                Ok(xr.div(&d))
            }
            RootKind::K2Sigma => {
                let (root_w, w) = self.stack_weight(x)?;
                let d = w.mul(x).mul(x).sub(x).add(&Real::one());
                positive(&d, x)?;
                Ok(root_w.mul(x).div(&d))
            }
            RootKind::K4Sigma => {
                let (root_w, w) = self.stack_weight(x)?;
                let x2 = x.mul(x);
                let tail = x2.add(&x2.mul(x)).add(&x2.mul(&x2));
                let v0 = Real::one().sub(x).add(&w.mul(&tail));
                positive(&v0, x)?;
                Ok(root_w.mul(x).div(&v0))
            }
        }
    }

    /// `ϑ(x) - ρ`.
    pub fn residual(&self, x: &Real) -> Result<Real> {
        Ok(self.theta(x)?.sub(&self.rho()))
    }

    /// `(sqrt(w), w)` for `w = x^{2σ-2} / (1 - x^2 + x^{2σ})`, with the
    /// branch `sqrt(w) = x^{σ-1} / sqrt(1 - x^2 + x^{2σ})`.
    fn stack_weight(&self, x: &Real) -> Result<(Real, Real)> {
        let s = self.sigma;
        let x2 = x.mul(x);
        let den = Real::one().sub(&x2).add(&x2.powi(s));
        positive(&den, x)?;
        let lead = x.powi(s - 1);
        let root_den = den.sqrt().expect("positive");
        Ok((lead.div(&root_den), lead.mul(&lead).div(&den)))
    }
}

fn positive(d: &Real, x: &Real) -> Result<()> {
    if d.is_positive() {
        Ok(())
    } else {
        Err(Error::DenominatorVanishes { x: x.to_f64() })
    }
}

/// `r1(z) = -(-2z^2 + z^3 - 1 - u(z)) / (2(1 - 2z - z^2 + z^4))` with
/// `u(z) = sqrt(1 + 4z - 4z^2 - 6z^3 + 4z^4 + z^6)`, so that `r1(0) = 1`.
pub fn r1_eval(z: &Real) -> Result<Real> {
    let p = |coeffs: &[i64]| {
        coeffs
            .iter()
            .rev()
            .fold(Real::zero(), |acc, &c| acc.mul(z).add(&Real::from_i64(c)))
    };
    let radicand = p(&[1, 4, -4, -6, 4, 0, 1]);
    let u = radicand
        .sqrt()
        .ok_or(Error::NegativeRadicand { x: z.to_f64() })?;
    let den = p(&[1, -2, -1, 0, 1]);
    if den.is_zero() {
        return Err(Error::DenominatorVanishes { x: z.to_f64() });
    }
    let num = p(&[-1, 0, -2, 1]).sub(&u);
    Ok(num.neg().div(&den.mul(&Real::from_i64(2))))
}

#[derive(Debug, Clone)]
pub struct GrowthResult {
    pub k: usize,
    pub sigma: usize,
    pub lambda: usize,
    pub kind: RootKind,
    pub gamma: Real,
    pub rate: Real,
    pub dominance_verified: bool,
    pub dominance_note: String,
    pub iterations: usize,
    pub residual: f64,
}

impl GrowthResult {
    pub fn rate_f64(&self) -> f64 {
        self.rate.to_f64()
    }

    pub fn gamma_f64(&self) -> f64 {
        self.gamma.to_f64()
    }
}

pub fn solve_growth(eq: &RootEquation, tol: f64) -> Result<GrowthResult> {
    solve_growth_with_grid(eq, tol, DEFAULT_GRID)
}

/// Minimal root of `ϑ(x) = ρ` in `(0, 1)`, scanning the grid `i / grid`.
pub fn solve_growth_with_grid(eq: &RootEquation, tol: f64, grid: usize) -> Result<GrowthResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if grid < 2 {
        return Err(Error::InvalidParameter(
            "grid needs at least two cells".into(),
        ));
    }
    let (mut lo, mut hi, start_negative) = first_sign_change(eq, grid)?;
    let tol_r = Real::from_f64(tol);
    let mut iterations = 0;
    let (gamma, residual) = loop {
        iterations += 1;
        let mid = lo.add(&hi).div(&Real::from_i64(2));
        let r = eq.residual(&mid)?;
        let width = hi.sub(&lo);
        if r.is_zero() || (r.abs() <= tol_r && width <= tol_r) || iterations >= PREC {
            break (mid, r.abs());
        }
        if r.is_negative() == start_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    };
    let (dominance_verified, dominance_note) = dominance_report(eq, &gamma);
    Ok(GrowthResult {
        k: eq.k,
        sigma: eq.sigma,
        lambda: eq.lambda(),
        kind: eq.kind,
        rate: Real::one().div(&gamma),
        gamma,
        dominance_verified,
        dominance_note,
        iterations,
        residual: residual.to_f64(),
    })
}

fn grid_point(i: usize, grid: usize) -> Real {
    Real::ratio(i as i64, grid as i64)
}

/// The first grid cell on which `ϑ - ρ` leaves the sign it has at `0`, and
/// whether that initial sign is negative.
fn first_sign_change(eq: &RootEquation, grid: usize) -> Result<(Real, Real, bool)> {
    let start_negative = eq.residual(&Real::zero())?.is_negative();
    let mut prev = grid_point(0, grid);
    for i in 1..grid {
        let x = grid_point(i, grid);
        let r = eq.residual(&x)?;
        if r.is_zero() || r.is_negative() != start_negative {
            return Ok((prev, x, start_negative));
        }
        prev = x;
    }
    Err(Error::NoSignChange)
}

/// Whether `ϑ(x) = -ρ` has a real solution with `0 < |x| <= gamma`.
pub fn dominance_check(eq: &RootEquation, gamma: &Real) -> bool {
    dominance_report(eq, gamma).0
}

fn dominance_report(eq: &RootEquation, gamma: &Real) -> (bool, String) {
    let opposite = eq.negated();
    let hit = opposite_root_within(&opposite, gamma, DEFAULT_GRID);
    let scan = match &hit {
        Some(x) => format!("real-line scan found theta = -rho at x = {x:.6}"),
        None => "real-line scan of 0 < |x| <= gamma found no solution of theta = -rho; complex solutions not examined"
            .to_string(),
    };
    if eq.kind == RootKind::K4Sigma && !(3..=9).contains(&eq.k) {
        return (
            false,
            format!("{scan}; uniqueness only established for k = 3..9"),
        );
    }
    (hit.is_none(), scan)
}

/// Scans `x = ±i/grid` up to `|x| <= gamma` for a zero or sign change of
/// `ϑ(x) - ρ'`, where `ρ'` is the right-hand side of `eq`. The endpoint is
/// widened by a relative `1e-9` so that a root at modulus `gamma` itself is
/// not lost to bisection rounding.
fn opposite_root_within(eq: &RootEquation, gamma: &Real, grid: usize) -> Option<f64> {
    let edge = gamma.mul(&Real::one().add(&Real::from_f64(1e-9)));
    for sign in [1i64, -1] {
        let mut prev: Option<Real> = None;
        let points = (1..grid)
            .map(|i| Real::ratio(sign * i as i64, grid as i64))
            .take_while(|x| x.abs() < edge)
            .chain(std::iter::once(if sign > 0 {
                edge.clone()
            } else {
                edge.neg()
            }));
        for x in points {
            let Ok(r) = eq.residual(&x) else { break };
            if r.is_zero() {
                return Some(x.to_f64());
            }
            if let Some(p) = &prev {
                if p.is_negative() != r.is_negative() {
                    return Some(x.to_f64());
                }
            }
            prev = Some(r);
        }
    }
    None
}

/// Power of `n` in the asymptotics of `<k,λ,σ>`-structures:
/// `-(k-1)^2 - (k-1)/2`.
pub fn subexponential_exponent(k: usize) -> f64 {
    let m = k as f64 - 1.0;
    -m * m - m / 2.0
}

/// Ratio diagnostics from exact counts.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalRate {
    /// Largest `n` with both `T(n)` and `T(n+1)` present; the ratio is
    /// `T(n+1)/T(n)`.
    pub n: usize,
    pub rate: f64,
    /// `rate (n/(n+1))^e` with `e` the subexponential exponent.
    pub corrected: f64,
    /// `T(m+1)/T(m)` for the last `window` values of `m`, ascending.
    pub window: Vec<f64>,
}

pub fn empirical_rate(table: &CountTable, window: usize) -> Result<EmpiricalRate> {
    let totals = table.totals();
    let Some((&last, _)) = totals.iter().next_back() else {
        return Err(Error::InsufficientData {
            needed: window + 1,
            have: 0,
        });
    };
    let window = window.max(1);
    let have = (0..=last)
        .rev()
        .take_while(|n| totals.contains_key(n))
        .count();
    if have < window + 1 {
        return Err(Error::InsufficientData {
            needed: window + 1,
            have,
        });
    }
    let ratio = |m: usize| -> Result<f64> {
        let a = BigInt::from(totals[&m].clone());
        let b = BigInt::from(totals[&(m + 1)].clone());
        if a.is_zero() {
            return Err(Error::InvalidParameter(format!("zero count at n = {m}")));
        }
        Ok(BigRational::new(b, a).to_f64().unwrap_or(f64::NAN))
    };
    let n = last - 1;
    let ratios = ((n + 1 - window)..=n)
        .map(ratio)
        .collect::<Result<Vec<_>>>()?;
    let rate = *ratios.last().expect("window >= 1");
    let e = subexponential_exponent(table.params.k.unwrap_or(2));
    let corrected = rate * (n as f64 / (n as f64 + 1.0)).powf(e);
    Ok(EmpiricalRate {
        n,
        rate,
        corrected,
        window: ratios,
    })
}

/// Exact reference data: `q_{0,k}` and its nonzero roots `M_k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceRoots {
    pub k: usize,
    /// Sparse coefficients `(power, coefficient)`.
    pub polynomial: Vec<(usize, BigRational)>,
    pub roots: Vec<BigRational>,
}

impl ReferenceRoots {
    pub fn evaluate(&self, z: &BigRational) -> BigRational {
        self.polynomial
            .iter()
            .map(|(p, c)| c * num_traits::pow(z.clone(), *p))
            .sum()
    }

    pub fn contains(&self, r: &BigRational) -> bool {
        self.roots.contains(r)
    }
}

/// `q_{0,k}(z)` and its nonzero roots for `3 <= k <= 9`.
pub fn polynomial_roots_reference(k: usize) -> Result<ReferenceRoots> {
    let (poly, denominators): (&[(usize, i64, i64)], &[i64]) = match k {
        3 => (&[(2, 1, 4), (4, -4, 1)], &[4]),
        4 => (&[(6, 1, 1), (8, -40, 1), (10, 144, 1)], &[2, 6]),
        5 => (&[(8, 1, 1), (10, -80, 1), (12, 1024, 1)], &[4, 8]),
        6 => (
            &[(10, -1, 1), (12, 140, 1), (14, -4144, 1), (16, 14400, 1)],
            &[2, 6, 10],
        ),
        7 => (
            &[(12, -1, 1), (14, 224, 1), (16, -12544, 1), (18, 147456, 1)],
            &[4, 8, 12],
        ),
        8 => (
            &[
                (14, 1, 1),
                (16, -336, 1),
                (18, 31584, 1),
                (20, -826624, 1),
                (22, 2822400, 1),
            ],
            &[2, 6, 10, 14],
        ),
        9 => (
            &[
                (16, -1, 1),
                (18, 480, 1),
                (20, -69888, 1),
                (22, 3358720, 1),
                (24, -37748736, 1),
            ],
            &[4, 8, 12, 16],
        ),
        _ => return Err(Error::UnsupportedK(k)),
    };
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    let polynomial = poly.iter().map(|&(p, n, d)| (p, q(n, d))).collect();
    let roots = denominators
        .iter()
        .flat_map(|&d| [q(1, d), q(-1, d)])
        .collect();
    let reference = ReferenceRoots {
        k,
        polynomial,
        roots,
    };
    let rho = q(1, 2 * (k as i64 - 1));
    assert!(reference.contains(&rho) && reference.contains(&-rho.clone()));
    Ok(reference)
}

/// Writes results as CSV with header
/// `k,sigma,lambda,gamma,rate,dominance_verified,residual`.
pub fn write_growth_csv<W: Write>(out: &mut W, results: &[GrowthResult]) -> io::Result<()> {
    writeln!(out, "k,sigma,lambda,gamma,rate,dominance_verified,residual")?;
    for r in results {
        writeln!(
            out,
            "{},{},{},{:.15},{},{},{:.3e}",
            r.k,
            r.sigma,
            r.lambda,
            r.gamma_f64(),
            format_rate(r.rate_f64()),
            r.dominance_verified,
            r.residual
        )?;
    }
    Ok(())
}

/// Six significant digits.
pub fn format_rate(rate: f64) -> String {
    if rate == 0.0 || !rate.is_finite() {
        return rate.to_string();
    }
    let digits = 6 - 1 - rate.abs().log10().floor() as i32;
    format!("{:.*}", digits.max(0) as usize, rate)
}
