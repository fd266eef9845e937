//! Truncated power series with exact rational coefficients, and the
//! generating functions of the structure classes built on them.
//!
//! A [`Series`] of order `N` stores the coefficients of `x^0 ..= x^N`; every
//! operation is exact modulo `x^{N+1}` and the result carries the smaller of
//! the operand orders. No floating point is used anywhere in this module.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::enumeration::StarTables;
use crate::walks;
use crate::{Count, Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn rat_from_count(v: &Count) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigRational::one(), 0, order)
    }

    /// `c x^power`, truncated.
    pub fn monomial(c: BigRational, power: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// The polynomial `Σ terms[i] x^i`, truncated to `order`.
    pub fn polynomial(terms: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (i, &c) in terms.iter().enumerate().take(order + 1) {
            s.coeffs[i] = rat(c);
        }
        s
    }

    /// The sparse polynomial `Σ c x^p` over `(p, c)` pairs, truncated.
    pub fn sparse(terms: &[(usize, i64)], order: usize) -> Self {
        let mut s = Self::zero(order);
        for &(p, c) in terms {
            if p <= order {
                s.coeffs[p] += rat(c);
            }
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::TruncationOrder { min: 0, got: 0 });
        }
        Ok(Self { coeffs })
    }

    pub fn from_counts(counts: &[Count]) -> Result<Self> {
        Self::from_coeffs(counts.iter().map(rat_from_count).collect())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &BigRational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Keeps terms up to `x^order` (or pads with zeros).
    pub fn truncate(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, BigRational::zero());
        Self { coeffs }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Coefficients as nonnegative integers, if they all are.
    pub fn to_counts(&self) -> Option<Vec<Count>> {
        self.coeffs
            .iter()
            .map(|c| {
                if c.is_integer() && !c.is_negative() {
                    c.to_integer().to_biguint()
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        Self { coeffs }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        Self { coeffs }
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        if self.is_integral() && other.is_integral() {
            return Self::mul_integral(&self.coeffs, &other.coeffs, order);
        }
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self { coeffs }
    }

    // Integer convolution without per-term gcd normalization.
    fn mul_integral(a: &[BigRational], b: &[BigRational], order: usize) -> Self {
        let a: Vec<BigInt> = a.iter().take(order + 1).map(|c| c.to_integer()).collect();
        let b: Vec<BigInt> = b.iter().take(order + 1).map(|c| c.to_integer()).collect();
        let mut out = vec![BigInt::zero(); order + 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(order + 1 - i) {
                if !y.is_zero() {
                    out[i + j] += x * y;
                }
            }
        }
        Self {
            coeffs: out.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    pub fn pow(&self, mut e: usize) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn recip(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NonUnitDivision);
        }
        let inv0 = c0.recip();
        let order = self.order();
        let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
        out.push(inv0.clone());
        for n in 1..=order {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[n - i];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.recip()?))
    }

    /// `self(inner(x))`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::CompositionValuation);
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::monomial(self.coeffs[order].clone(), 0, order);
        for c in self.coeffs[..order].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// Multiplication by `x^shift`, keeping the order.
    pub fn shift_up(&self, shift: usize) -> Self {
        let order = self.order();
        let mut s = Self::zero(order);
        for i in 0..=order.saturating_sub(shift) {
            if i + shift <= order {
                s.coeffs[i + shift] = self.coeffs[i].clone();
            }
        }
        s
    }

    /// Exact division by `x^shift`; the order drops by `shift`.
    pub fn shift_down(&self, shift: usize) -> Result<Self> {
        if let Some(index) = self.coeffs.iter().take(shift).position(|c| !c.is_zero()) {
            return Err(Error::NotDivisibleByMonomial { shift, index });
        }
        if shift > self.order() {
            return Err(Error::TruncationOrder {
                min: shift,
                got: self.order(),
            });
        }
        Ok(Self {
            coeffs: self.coeffs[shift..].to_vec(),
        })
    }

    /// Square root with constant term 1, by Newton iteration
    /// `s <- (s + self / s) / 2`, doubling the correct prefix each round.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::InvalidParameter(
                "series square root needs constant term 1".into(),
            ));
        }
        let target = self.order();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut s = Self::one(0);
        let mut correct = 1;
        while correct <= target {
            correct = (2 * correct).min(target + 1);
            let order = correct - 1;
            let s_ext = s.truncate(order);
            let quotient = self.truncate(order).div(&s_ext)?;
            s = s_ext.add(&quotient).scale(&half);
        }
        Ok(s.truncate(target))
    }

    /// One coefficient per line as `n<TAB>num/den`, after a
    /// `# order=N recipe=<id>` header.
    pub fn dump(&self, recipe: &str) -> String {
        let mut out = format!("# order={} recipe={}\n", self.order(), recipe);
        for (n, c) in self.coeffs.iter().enumerate() {
            out.push_str(&format!("{n}\t{}/{}\n", c.numer(), c.denom()));
        }
        out
    }

    /// Inverse of [`dump`](Self::dump); returns the series and the recipe id.
    pub fn parse_dump(text: &str) -> Result<(Self, String)> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            message: "empty series dump".into(),
        })?;
        let header_err = || Error::Parse {
            line: 1,
            message: format!("bad header `{header}`"),
        };
        let rest = header.strip_prefix("# order=").ok_or_else(header_err)?;
        let (order, recipe) = rest.split_once(" recipe=").ok_or_else(header_err)?;
        let order: usize = order.parse().map_err(|_| header_err())?;
        let mut coeffs = Vec::with_capacity(order + 1);
        for (idx, line) in lines {
            let err = |message: String| Error::Parse {
                line: idx + 1,
                message,
            };
            let (n, value) = line
                .split_once('\t')
                .ok_or_else(|| err(format!("expected `n<TAB>p/q`, got `{line}`")))?;
            let n: usize = n
                .trim()
                .parse()
                .map_err(|_| err(format!("bad index `{n}`")))?;
            if n != coeffs.len() {
                return Err(err(format!("expected index {}, got {n}", coeffs.len())));
            }
            let (p, q) = value
                .trim()
                .split_once('/')
                .ok_or_else(|| err(format!("expected a fraction, got `{value}`")))?;
            let p: BigInt = p.parse().map_err(|_| err(format!("bad numerator `{p}`")))?;
            let q: BigInt = q
                .parse()
                .map_err(|_| err(format!("bad denominator `{q}`")))?;
            if q.is_zero() {
                return Err(err("zero denominator".into()));
            }
            coeffs.push(BigRational::new(p, q));
        }
        if coeffs.len() != order + 1 {
            return Err(Error::Parse {
                line: 0,
                message: format!(
                    "header says order {order}, found {} coefficients",
                    coeffs.len()
                ),
            });
        }
        Ok((Self { coeffs }, recipe.to_string()))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "Series[{}]", terms.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
    Div,
    Compose,
}

pub fn series_arith(a: &Series, b: &Series, op: SeriesOp) -> Result<Series> {
    match op {
        SeriesOp::Add => Ok(a.add(b)),
        SeriesOp::Sub => Ok(a.sub(b)),
        SeriesOp::Mul => Ok(a.mul(b)),
        SeriesOp::Div => a.div(b),
        SeriesOp::Compose => a.compose(b),
    }
}

fn require_order(order: usize, min: usize) -> Result<()> {
    if order < min {
        Err(Error::TruncationOrder { min, got: order })
    } else {
        Ok(())
    }
}

/// Secondary-structure generating function from its closed radical form:
/// `(-1 + 2z - 2z^2 + z^{λ+1} + sqrt(D(z))) / (2(z^3 - z^2))` with
/// `D = 1 - 4z + 4z^2 - 2z^{λ+1} + 4z^{λ+2} - 4z^{λ+3} + z^{2λ+2}`.
pub fn gf_secondary(lambda: usize, order: usize) -> Result<Series> {
    require_order(order, 1)?;
    if lambda < 1 {
        return Err(Error::InvalidParameter("lambda must be >= 1".into()));
    }
    let wide = order + 2;
    let l = lambda;
    let radicand = Series::sparse(
        &[
            (0, 1),
            (1, -4),
            (2, 4),
            (l + 1, -2),
            (l + 2, 4),
            (l + 3, -4),
            (2 * l + 2, 1),
        ],
        wide,
    );
    let numerator =
        Series::sparse(&[(0, -1), (1, 2), (2, -2), (l + 1, 1)], wide).add(&radicand.sqrt()?);
    // 2(z^3 - z^2) = -2 z^2 (1 - z)
    let reduced = numerator.shift_down(2)?;
    reduced.div(&Series::polynomial(&[-2, 2], order))
}

/// Same series by fixed-point iteration of
/// `T = (1 + z^2 T^2) / (1 - z + z^2 + ... + z^λ)`.
pub fn gf_secondary_fixed_point(lambda: usize, order: usize) -> Result<Series> {
    require_order(order, 1)?;
    if lambda < 1 {
        return Err(Error::InvalidParameter("lambda must be >= 1".into()));
    }
    let mut q: Vec<(usize, i64)> = vec![(0, 1), (1, -1)];
    q.extend((2..=lambda).map(|p| (p, 1)));
    let inv_q = Series::sparse(&q, order).recip()?;
    let one = Series::one(order);
    let mut t = one.clone();
    for _ in 0..=order {
        let next = one.add(&t.mul(&t).shift_up(2)).mul(&inv_q);
        if next == t {
            break;
        }
        t = next;
    }
    Ok(t)
}

/// `w0 = x^{2σ-2} / (1 - x^2 + x^{2σ})` and
/// `v0 = 1 - x + w0 (x^2 + x^3 + x^4)`.
pub fn gf_w0_v0(sigma: usize, order: usize) -> Result<(Series, Series)> {
    if sigma < 1 {
        return Err(Error::InvalidParameter("sigma must be >= 1".into()));
    }
    let w0 = stack_weight(sigma, order)?;
    let v0 = Series::polynomial(&[1, -1], order)
        .add(&w0.mul(&Series::sparse(&[(2, 1), (3, 1), (4, 1)], order)));
    Ok((w0, v0))
}

fn stack_weight(sigma: usize, order: usize) -> Result<Series> {
    let denominator = Series::sparse(&[(0, 1), (2, -1), (2 * sigma, 1)], order);
    Ok(denominator.recip()?.shift_up(2 * sigma - 2))
}

/// `outer · Σ_n f_k(2n, 0) y^n`, summed while `y^n` is visible at this order.
fn matching_substitution(k: usize, outer: &Series, y: &Series) -> Result<Series> {
    let order = y.order();
    let valuation = match y.valuation() {
        None => return Ok(outer.clone()),
        Some(0) => return Err(Error::CompositionValuation),
        Some(v) => v,
    };
    let terms = order / valuation;
    let f = walks::counter(k).perfect_upto(terms);
    let mut acc = Series::monomial(rat_from_count(&f[terms]), 0, order);
    for fn_ in f[..terms].iter().rev() {
        acc = acc.mul(y);
        acc.coeffs[0] += rat_from_count(fn_);
    }
    Ok(outer.mul(&acc))
}

/// Generating function of `<k,4,σ>`-structures:
/// `(1/v0) Σ_n f_k(2n,0) (w0 x^2 / v0^2)^n`.
pub fn gf_k4sigma(k: usize, sigma: usize, order: usize) -> Result<Series> {
    if k < 2 || sigma < 3 {
        return Err(Error::InvalidParameter(format!(
            "needs k >= 2 and sigma >= 3, got k = {k}, sigma = {sigma}"
        )));
    }
    let (w0, v0) = gf_w0_v0(sigma, order)?;
    let inv_v0 = v0.recip()?;
    let y = w0.shift_up(2).mul(&inv_v0).mul(&inv_v0);
    matching_substitution(k, &inv_v0, &y)
}

/// Generating function of `<k,2,σ>`-structures:
/// `(1/d) Σ_n f_k(2n,0) (u0 x^2 / d^2)^n`, `d = u0 x^2 - x + 1`,
/// `u0 = x^{2σ-2} / (x^{2σ} - x^2 + 1)`.
pub fn gf_k2sigma(k: usize, sigma: usize, order: usize) -> Result<Series> {
    if k < 2 || sigma < 1 {
        return Err(Error::InvalidParameter(format!(
            "needs k >= 2 and sigma >= 1, got k = {k}, sigma = {sigma}"
        )));
    }
    let u0x2 = stack_weight(sigma, order)?.shift_up(2);
    let d = u0x2.add(&Series::polynomial(&[1, -1], order));
    let inv_d = d.recip()?;
    let y = u0x2.mul(&inv_d).mul(&inv_d);
    matching_substitution(k, &inv_d, &y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecipeKind {
    SecondaryClosedForm,
    K2Sigma,
    K4Sigma,
}

/// A named generating-function evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GfRecipe {
    pub kind: RecipeKind,
    pub k: usize,
    pub lambda: usize,
    pub sigma: usize,
    pub order: usize,
}

impl GfRecipe {
    pub fn secondary(lambda: usize, order: usize) -> Self {
        Self {
            kind: RecipeKind::SecondaryClosedForm,
            k: 2,
            lambda,
            sigma: 1,
            order,
        }
    }

    pub fn k2sigma(k: usize, sigma: usize, order: usize) -> Self {
        Self {
            kind: RecipeKind::K2Sigma,
            k,
            lambda: 2,
            sigma,
            order,
        }
    }

    pub fn k4sigma(k: usize, sigma: usize, order: usize) -> Self {
        Self {
            kind: RecipeKind::K4Sigma,
            k,
            lambda: 4,
            sigma,
            order,
        }
    }

    pub fn id(&self) -> String {
        match self.kind {
            RecipeKind::SecondaryClosedForm => {
                format!("secondary_closed_form(lambda={})", self.lambda)
            }
            RecipeKind::K2Sigma => format!("k2sigma(k={},sigma={})", self.k, self.sigma),
            RecipeKind::K4Sigma => format!("k4sigma(k={},sigma={})", self.k, self.sigma),
        }
    }

    pub fn evaluate(&self) -> Result<Series> {
        match self.kind {
            RecipeKind::SecondaryClosedForm => gf_secondary(self.lambda, self.order),
            RecipeKind::K2Sigma => gf_k2sigma(self.k, self.sigma, self.order),
            RecipeKind::K4Sigma => gf_k4sigma(self.k, self.sigma, self.order),
        }
    }
}

/// Power series in `u` (degree `<= u_degree`) with [`Series`] coefficients in
/// `x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bivariate {
    by_u: Vec<Series>,
}

impl Bivariate {
    pub fn zero(u_degree: usize, order: usize) -> Self {
        Self {
            by_u: vec![Series::zero(order); u_degree + 1],
        }
    }

    pub fn from_u_coeffs(by_u: Vec<Series>) -> Self {
        Self { by_u }
    }

    pub fn u_degree(&self) -> usize {
        self.by_u.len() - 1
    }

    pub fn u_coeff(&self, h: usize) -> &Series {
        &self.by_u[h]
    }

    pub fn add(&self, other: &Self) -> Self {
        let by_u = self
            .by_u
            .iter()
            .zip(&other.by_u)
            .map(|(a, b)| a.add(b))
            .collect();
        Self { by_u }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let deg = self.u_degree().min(other.u_degree());
        let order = self.by_u[0].order().min(other.by_u[0].order());
        let mut out = Self::zero(deg, order);
        for (i, a) in self.by_u.iter().enumerate().take(deg + 1) {
            if a.valuation().is_none() {
                continue;
            }
            for (j, b) in other.by_u.iter().enumerate().take(deg + 1 - i) {
                out.by_u[i + j] = out.by_u[i + j].add(&a.mul(b));
            }
        }
        out
    }

    pub fn scale_x(&self, s: &Series) -> Self {
        Self {
            by_u: self.by_u.iter().map(|c| c.mul(s)).collect(),
        }
    }

    /// `Σ_h coeff_h(x) s(x)^h`.
    pub fn substitute_u(&self, s: &Series) -> Series {
        let order = self.by_u[0].order().min(s.order());
        let mut acc = self.by_u[self.u_degree()].truncate(order);
        for c in self.by_u[..self.u_degree()].iter().rev() {
            acc = acc.mul(s).add(c);
        }
        acc
    }
}

/// Outcome of [`moebius_identity_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MoebiusReport {
    /// `Σ T*(n,h) u^h x^n = Σ C*(n,h) (u / (1 - u x^2))^h x^n`.
    pub tstar_cstar: bool,
    /// `Σ C*(n,h) (x^{2σ-2} / (1 - x^2))^h x^n` equals the `<k,4,σ>` series.
    pub cstar_inflation: bool,
    /// `Σ T*(n,h) w0^h x^n` equals the `<k,4,σ>` series.
    pub tstar_w0: bool,
}

impl MoebiusReport {
    pub fn holds(&self) -> bool {
        self.tstar_cstar && self.cstar_inflation && self.tstar_w0
    }
}

/// Checks the bivariate identities linking `T*`, `C*` and the `<k,4,σ>`
/// generating function, to order `order` in `x` and `order / 2` in `u`.
pub fn moebius_identity_report(k: usize, sigma: usize, order: usize) -> Result<MoebiusReport> {
    let target = gf_k4sigma(k, sigma, order)?;
    let tables = StarTables::build(k, order);
    let u_degree = order / 2;
    let by_h = |get: &dyn Fn(usize, usize) -> Count| -> Bivariate {
        let by_u = (0..=u_degree)
            .map(|h| {
                let coeffs: Vec<Count> = (0..=order).map(|n| get(n, h)).collect();
                Series::from_counts(&coeffs).expect("order + 1 coefficients")
            })
            .collect();
        Bivariate::from_u_coeffs(by_u)
    };
    let tstar = by_h(&|n, h| tables.t_star(n, h));
    let cstar = by_h(&|n, h| tables.c_star(n, h));

    // u / (1 - u x^2) = Σ_m u^{m+1} x^{2m}
    let mut geometric = Bivariate::zero(u_degree, order);
    for m in 0..u_degree {
        geometric.by_u[m + 1] = Series::monomial(BigRational::one(), 2 * m, order);
    }
    let mut power = Bivariate::zero(u_degree, order);
    power.by_u[0] = Series::one(order);
    let mut rhs = Bivariate::zero(u_degree, order);
    for h in 0..=u_degree {
        rhs = rhs.add(&power.scale_x(cstar.u_coeff(h)));
        power = power.mul(&geometric);
    }
    let tstar_cstar = rhs == tstar;

    let inflation = Series::polynomial(&[1, 0, -1], order)
        .recip()?
        .shift_up(2 * sigma - 2);
    let cstar_inflation = cstar.substitute_u(&inflation) == target;

    let (w0, _) = gf_w0_v0(sigma, order)?;
    let tstar_w0 = tstar.substitute_u(&w0) == target;

    Ok(MoebiusReport {
        tstar_cstar,
        cstar_inflation,
        tstar_w0,
    })
}

pub fn moebius_identity_check(k: usize, sigma: usize, order: usize) -> Result<bool> {
    Ok(moebius_identity_report(k, sigma, order)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{secondary_counts, t4_sigma_total, tk21};

    fn ints(s: &Series) -> Vec<i64> {
        s.coeffs()
            .iter()
            .map(|c| {
                assert!(c.is_integer(), "non-integral coefficient {c}");
                i64::try_from(c.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn product_of_binomials() {
        let a = Series::polynomial(&[1, 1], 4);
        let b = Series::polynomial(&[1, -1], 4);
        assert_eq!(
            ints(&series_arith(&a, &b, SeriesOp::Mul).unwrap()),
            vec![1, 0, -1, 0, 0]
        );
    }

    #[test]
    fn geometric_series() {
        let g = Series::polynomial(&[1], 6)
            .div(&Series::polynomial(&[1, -1], 6))
            .unwrap();
        assert_eq!(ints(&g), vec![1; 7]);
    }

    #[test]
    fn composition_with_square() {
        let geometric = Series::polynomial(&[1, -1], 8).recip().unwrap();
        let inner = Series::sparse(&[(2, 1)], 8);
        let composed = series_arith(&geometric, &inner, SeriesOp::Compose).unwrap();
        assert_eq!(ints(&composed), vec![1, 0, 1, 0, 1, 0, 1, 0, 1]);
    }

    #[test]
    fn arithmetic_errors() {
        let nonunit = Series::polynomial(&[0, 1], 4);
        let one = Series::one(4);
        assert_eq!(one.div(&nonunit), Err(Error::NonUnitDivision));
        assert_eq!(one.compose(&one), Err(Error::CompositionValuation));
        assert!(matches!(
            one.shift_down(1),
            Err(Error::NotDivisibleByMonomial { .. })
        ));
    }

    #[test]
    fn order_is_minimum_of_operands() {
        let a = Series::polynomial(&[1, 2, 3], 5);
        let b = Series::polynomial(&[1, 1], 3);
        assert_eq!(a.add(&b).order(), 3);
        assert_eq!(a.mul(&b).order(), 3);
        assert_eq!(a.div(&b).unwrap().order(), 3);
    }

    #[test]
    fn rational_coefficients_stay_exact() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let s = Series::polynomial(&[3, 1], 5).scale(&third);
        let back = s.recip().unwrap().recip().unwrap();
        assert_eq!(back, s);
        assert!(!s.is_integral());
    }

    #[test]
    fn sqrt_squares_back() {
        let d = Series::polynomial(&[1, -4, 4, 7, -2], 12);
        let s = d.sqrt().unwrap();
        assert_eq!(s.mul(&s), d);
        // sqrt(1 - 4x) generates -2 * Catalan shifted
        let s = Series::polynomial(&[1, -4], 6).sqrt().unwrap();
        assert_eq!(ints(&s), vec![1, -2, -2, -4, -10, -28, -84]);
    }

    #[test]
    fn secondary_closed_form_matches_recursion() {
        for lambda in 1..6 {
            let series = gf_secondary(lambda, 40).unwrap();
            let fixed = gf_secondary_fixed_point(lambda, 40).unwrap();
            assert_eq!(series, fixed, "lambda = {lambda}");
            let want = Series::from_counts(&secondary_counts(lambda, 40)).unwrap();
            assert_eq!(series, want, "lambda = {lambda}");
        }
    }

    #[test]
    fn secondary_closed_form_small_coefficients() {
        assert_eq!(
            ints(&gf_secondary(2, 6).unwrap()),
            vec![1, 1, 1, 2, 4, 8, 17]
        );
        assert_eq!(
            ints(&gf_secondary(3, 6).unwrap()),
            vec![1, 1, 1, 1, 2, 4, 8]
        );
        assert_eq!(gf_secondary(4, 8).unwrap().coeff(4), &rat(1));
        assert!(gf_secondary(2, 0).is_err());
    }

    #[test]
    fn secondary_functional_equation_residual() {
        for lambda in 1..5 {
            let order = 30;
            let t = gf_secondary(lambda, order).unwrap();
            let mut q = vec![(0, 1), (1, -1)];
            q.extend((2..=lambda).map(|p| (p, 1)));
            let q = Series::sparse(&q, order);
            let residual = t
                .mul(&t)
                .shift_up(2)
                .sub(&q.mul(&t))
                .add(&Series::one(order));
            assert_eq!(residual, Series::zero(order));
        }
    }

    #[test]
    fn w0_v0_leading_terms() {
        let (w0, v0) = gf_w0_v0(3, 12).unwrap();
        assert_eq!(w0.valuation(), Some(4));
        assert_eq!(ints(&w0)[..11], [0, 0, 0, 0, 1, 0, 1, 0, 1, 0, 0]);
        for sigma in 3..7 {
            let (_, v0) = gf_w0_v0(sigma, 10).unwrap();
            assert_eq!(v0.coeff(0), &rat(1));
            assert_eq!(v0.coeff(1), &rat(-1));
        }
        assert_eq!(v0.coeff(0), &rat(1));
    }

    #[test]
    fn k4sigma_reproduces_reference_counts() {
        let s = gf_k4sigma(3, 3, 24).unwrap();
        let want = [
            1, 2, 4, 8, 15, 28, 52, 96, 176, 316, 557, 965, 1660, 2860, 4974, 8754, 15562,
        ];
        assert_eq!(ints(&s)[8..], want);
        assert_eq!(ints(&s)[..9], [1; 9]);
    }

    #[test]
    fn k4sigma_matches_inflation_formula() {
        for k in 3..5 {
            for sigma in 3..5 {
                let s = gf_k4sigma(k, sigma, 20).unwrap();
                for n in 0..=20 {
                    assert_eq!(s.coeff(n), &rat_from_count(&t4_sigma_total(k, sigma, n)));
                }
            }
        }
    }

    #[test]
    fn k2sigma_sigma_one_matches_arc_removal_sum() {
        for k in 2..5 {
            let s = gf_k2sigma(k, 1, 30).unwrap();
            assert_eq!(s.coeff(0), &rat(1));
            for n in 0..=30 {
                assert_eq!(s.coeff(n), &rat_from_count(&tk21(k, n)), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn recipes_have_stable_ids() {
        assert_eq!(GfRecipe::k4sigma(3, 3, 10).id(), "k4sigma(k=3,sigma=3)");
        assert_eq!(
            GfRecipe::secondary(4, 10).id(),
            "secondary_closed_form(lambda=4)"
        );
        let a = GfRecipe::k2sigma(3, 2, 12).evaluate().unwrap();
        let b = GfRecipe::k2sigma(3, 2, 12).evaluate().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dump_roundtrip_and_errors() {
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        let s = Series::polynomial(&[1, 0, 5], 3).add(&Series::monomial(half, 3, 3));
        let text = s.dump("test");
        assert!(text.starts_with("# order=3 recipe=test\n0\t1/1\n"));
        assert!(text.contains("3\t-1/2\n"));
        let (back, recipe) = Series::parse_dump(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(recipe, "test");
        assert!(Series::parse_dump("# order=2 recipe=x\n0\t1/1\n").is_err());
        assert!(Series::parse_dump("# order=0 recipe=x\n0\t1/0\n").is_err());
        assert!(Series::parse_dump("order=0\n").is_err());
    }

    #[test]
    fn moebius_identities_hold() {
        assert!(moebius_identity_check(3, 3, 0).unwrap());
        let report = moebius_identity_report(3, 3, 16).unwrap();
        assert!(report.tstar_cstar && report.cstar_inflation && report.tstar_w0);
    }
}
