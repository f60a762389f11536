//! Exact multivariate polynomials and rational functions over the rationals.
//!
//! Every polynomial lives in a [`Chart`], an ordered list of variable names.
//! Terms are kept in a map keyed by exponent vectors ordered graded-lexicographically,
//! so the leading term is always the last entry.

mod gcd;
pub mod parse;
mod ratfunc;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational as Rational;
pub use ratfunc::RatFunc;

/// Errors raised by polynomial and rational-function operations.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("chart must declare at least one variable")]
    EmptyChart,
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("invalid variable name `{0}`")]
    InvalidVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("chart mismatch: [{left}] vs [{right}]")]
    ChartMismatch { left: String, right: String },
    #[error("point has {got} coordinates, chart has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("all inputs are zero")]
    AllZero,
    #[error("zero polynomial")]
    ZeroInput,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected {expected} substitution components, got {got}")]
    SubstitutionArity { expected: usize, got: usize },
}

/// Ordered, non-empty set of distinct variable names.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Chart {
    vars: Arc<[String]>,
}

impl Chart {
    pub fn new<I, S>(vars: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        if vars.is_empty() {
            return Err(PolyError::EmptyChart);
        }
        for (i, v) in vars.iter().enumerate() {
            let ok = v
                .chars()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !ok {
                return Err(PolyError::InvalidVariable(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Self { vars: vars.into() })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn var_index(&self, name: &str) -> Result<usize, PolyError> {
        self.index_of(name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))
    }

    pub(crate) fn ensure_same(&self, other: &Chart) -> Result<(), PolyError> {
        if self == other {
            Ok(())
        } else {
            Err(PolyError::ChartMismatch {
                left: self.vars.join(" "),
                right: other.vars.join(" "),
            })
        }
    }
}

impl fmt::Debug for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Chart({})", self.vars.join(","))
    }
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    chart: Chart,
    terms: BTreeMap<Monomial, Rational>,
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero(chart: &Chart) -> Self {
        Self {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(chart: &Chart) -> Self {
        Self::constant(chart, Rational::one())
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        let mut p = Self::zero(chart);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(chart.len()), c);
        }
        p
    }

    /// The coordinate function of variable `i`.
    pub fn var(chart: &Chart, i: usize) -> Self {
        let mut p = Self::zero(chart);
        p.terms
            .insert(Monomial::var(chart.len(), i), Rational::one());
        p
    }

    pub fn var_named(chart: &Chart, name: &str) -> Result<Self, PolyError> {
        Ok(Self::var(chart, chart.var_index(name)?))
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging repeats.
    pub fn from_terms<I>(chart: &Chart, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, Rational)>,
    {
        let mut p = Self::zero(chart);
        for (e, c) in terms {
            assert_eq!(e.len(), chart.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn nvars(&self) -> usize {
        self.chart.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.is_constant() && self.constant_term().is_one()
    }

    /// True for constants, including zero.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&Monomial::one(self.nvars()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(Monomial::degree)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coefficient(&self) -> Rational {
        self.terms
            .values()
            .next_back()
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Same polynomial viewed in another chart with the same number of variables.
    pub fn with_chart(&self, chart: &Chart) -> Self {
        assert_eq!(chart.len(), self.nvars());
        Self {
            chart: chart.clone(),
            terms: self.terms.clone(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.chart);
        }
        Self {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    fn mul_term(&self, m: &Monomial, c: &Rational) -> Self {
        Self {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(n, a)| (n.mul(m), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.chart);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable index `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.chart);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut n = m.clone();
            n.0[i] -= 1;
            p.add_term(n, c * Rational::from_integer(BigInt::from(e)));
        }
        p
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Self, PolyError> {
        Ok(self.derivative(self.chart.var_index(var)?))
    }

    /// Sum of the terms of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        Self {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        if point.len() != self.nvars() {
            return Err(PolyError::LengthMismatch {
                expected: self.nvars(),
                got: point.len(),
            });
        }
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Substitutes `images[i]` for variable `i`; the result lives in the images' chart.
    pub fn substitute(&self, images: &[Poly]) -> Result<Self, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::SubstitutionArity {
                expected: self.nvars(),
                got: images.len(),
            });
        }
        let Some(target) = images.first().map(|p| p.chart().clone()) else {
            return Err(PolyError::SubstitutionArity {
                expected: self.nvars(),
                got: 0,
            });
        };
        for p in images {
            target.ensure_same(p.chart())?;
        }
        // powers[i][e] = images[i]^e, grown on demand
        let mut powers: Vec<Vec<Poly>> = images.iter().map(|_| vec![Poly::one(&target)]).collect();
        let mut acc = Poly::zero(&target);
        for (m, c) in &self.terms {
            let mut t = Poly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap() * &images[i];
                    powers[i].push(next);
                }
                t = &t * &powers[i][e as usize];
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Substitutes rational-function images for the variables.
    pub fn compose(&self, images: &[RatFunc]) -> Result<RatFunc, PolyError> {
        if images.len() != self.nvars() {
            return Err(PolyError::SubstitutionArity {
                expected: self.nvars(),
                got: images.len(),
            });
        }
        let Some(target) = images.first().map(|p| p.chart().clone()) else {
            return Err(PolyError::SubstitutionArity {
                expected: self.nvars(),
                got: 0,
            });
        };
        let mut acc = RatFunc::zero(&target);
        for (m, c) in &self.terms {
            let mut t = RatFunc::constant(&target, c.clone());
            for (img, &e) in images.iter().zip(&m.0) {
                if e > 0 {
                    target.ensure_same(img.chart())?;
                    t = &t * &img.pow(e);
                }
            }
            acc = &acc + &t;
        }
        Ok(acc)
    }

    /// Coefficient of `x_i^k`, as a polynomial free of `x_i`.
    pub fn coeff_in(&self, i: usize, k: u32) -> Self {
        Self {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0[i] == k)
                .map(|(m, c)| {
                    let mut n = m.clone();
                    n.0[i] = 0;
                    (n, c.clone())
                })
                .collect(),
        }
    }

    /// Multivariate division by a single divisor in graded-lex order.
    pub fn div_rem(&self, divisor: &Poly) -> Result<(Poly, Poly), PolyError> {
        self.chart.ensure_same(divisor.chart())?;
        let (lm, lc) = match divisor.terms.iter().next_back() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(PolyError::DivisionByZero),
        };
        let mut q = Poly::zero(&self.chart);
        let mut r = Poly::zero(&self.chart);
        let mut p = self.clone();
        while let Some((m, c)) = p
            .terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
        {
            if lm.divides(&m) {
                let qm = m.div(&lm);
                let qc = &c / &lc;
                p = &p - &divisor.mul_term(&qm, &qc);
                q.add_term(qm, qc);
            } else {
                p.terms.remove(&m);
                r.add_term(m, c);
            }
        }
        Ok((q, r))
    }

    /// Quotient if `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Poly) -> Option<Poly> {
        match self.div_rem(divisor) {
            Ok((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.exact_div(self).is_some()
    }

    /// Rational factor that makes the coefficients coprime integers with a
    /// positive leading coefficient.
    pub fn unit_normalizer(&self) -> Rational {
        if self.is_zero() {
            return Rational::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(c.numer());
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut f = Rational::new(den_lcm, num_gcd);
        if self.leading_coefficient().is_negative() {
            f = -f;
        }
        f
    }

    /// Associate with coprime integer coefficients and positive leading coefficient.
    pub fn normalize_unit(&self) -> Self {
        self.scale(&self.unit_normalizer())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coefficient().recip())
    }

    /// Normalized greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Result<Poly, PolyError> {
        self.chart.ensure_same(other.chart())?;
        if self.is_zero() && other.is_zero() {
            return Err(PolyError::AllZero);
        }
        Ok(gcd::gcd(self, other).normalize_unit())
    }

    /// `p / gcd(p, ∂p/∂x_1, …, ∂p/∂x_n)`, normalized.
    pub fn squarefree_part(&self) -> Result<Poly, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroInput);
        }
        let mut g = self.clone();
        for i in 0..self.nvars() {
            if g.is_constant() {
                break;
            }
            g = gcd::gcd(&g, &self.derivative(i));
        }
        let q = self.exact_div(&g).expect("gcd divides its argument");
        Ok(q.normalize_unit())
    }

    /// Canonical text: descending graded-lex, reduced rational coefficients.
    pub fn to_canonical(&self) -> String {
        self.to_string()
    }
}

/// GCD of a family of polynomials, with positive leading coefficient and
/// coprime integer coefficients.
pub fn content(coeffs: &[Poly]) -> Result<Poly, PolyError> {
    let first = coeffs.first().ok_or(PolyError::AllZero)?;
    for p in coeffs {
        first.chart().ensure_same(p.chart())?;
    }
    if coeffs.iter().all(Poly::is_zero) {
        return Err(PolyError::AllZero);
    }
    let mut g = Poly::zero(first.chart());
    for p in coeffs {
        if g.is_one() {
            break;
        }
        g = gcd::gcd(&g, p);
        if g.is_constant() && !g.is_zero() {
            g = Poly::one(first.chart());
        }
    }
    Ok(g.normalize_unit())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mono =
                m.0.iter()
                    .zip(self.chart.vars())
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, v)| {
                        if *e == 1 {
                            v.clone()
                        } else {
                            format!("{v}^{e}")
                        }
                    })
                    .collect::<Vec<_>>()
                    .join("*");
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{a}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.chart, rhs.chart, "chart mismatch in add");
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        assert_eq!(self.chart, rhs.chart, "chart mismatch in sub");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.chart, rhs.chart, "chart mismatch in mul");
        let mut out = Poly::zero(&self.chart);
        for (m, a) in &self.terms {
            for (n, b) in &rhs.terms {
                out.add_term(m.mul(n), a * b);
            }
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            chart: self.chart.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident, $ty:ty) => {
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add, Poly);
forward_owned!(Sub, sub, Poly);
forward_owned!(Mul, mul, Poly);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}
