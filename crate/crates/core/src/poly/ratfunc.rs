use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;

use super::{gcd, Chart, Poly, PolyError, Rational};

/// Reduced quotient of polynomials with a monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self, PolyError> {
        num.chart().ensure_same(den.chart())?;
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero(num.chart()));
        }
        if den.is_constant() {
            let c = den.constant_term().recip();
            let one = Poly::one(num.chart());
            return Ok(Self {
                num: num.scale(&c),
                den: one,
            });
        }
        let g = gcd::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading_coefficient().recip();
        Ok(Self {
            num: num.scale(&lc),
            den: den.scale(&lc),
        })
    }

    pub fn from_poly(p: Poly) -> Self {
        let den = Poly::one(p.chart());
        Self { num: p, den }
    }

    pub fn zero(chart: &Chart) -> Self {
        Self::from_poly(Poly::zero(chart))
    }

    pub fn one(chart: &Chart) -> Self {
        Self::from_poly(Poly::one(chart))
    }

    pub fn constant(chart: &Chart, c: Rational) -> Self {
        Self::from_poly(Poly::constant(chart, c))
    }

    pub fn var(chart: &Chart, i: usize) -> Self {
        Self::from_poly(Poly::var(chart, i))
    }

    pub fn chart(&self) -> &Chart {
        self.num.chart()
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn is_constant(&self) -> bool {
        self.is_polynomial() && self.num.is_constant()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            num: self.num.scale(c),
            den: if c.is_zero() {
                Poly::one(self.chart())
            } else {
                self.den.clone()
            },
        }
    }

    pub fn mul_poly(&self, p: &Poly) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(&self.num * p);
        }
        Self::new(&self.num * p, self.den.clone()).expect("denominator is non-zero")
    }

    pub fn recip(&self) -> Result<Self, PolyError> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self, PolyError> {
        Ok(self * &other.recip()?)
    }

    /// Quotient rule: `(n' d - n d') / d^2`.
    pub fn derivative(&self, i: usize) -> Self {
        if self.is_polynomial() {
            return Self::from_poly(self.num.derivative(i));
        }
        let n = &(&self.num.derivative(i) * &self.den) - &(&self.num * &self.den.derivative(i));
        Self::new(n, &self.den * &self.den).expect("denominator is non-zero")
    }

    pub fn partial_derivative(&self, var: &str) -> Result<Self, PolyError> {
        Ok(self.derivative(self.chart().var_index(var)?))
    }

    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let d = self.den.evaluate(point)?;
        if d.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(self.num.evaluate(point)? / d)
    }

    /// Substitutes polynomial images for the variables.
    pub fn substitute(&self, images: &[Poly]) -> Result<Self, PolyError> {
        let n = self.num.substitute(images)?;
        let d = self.den.substitute(images)?;
        Self::new(n, d)
    }

    /// Substitutes rational-function images for the variables.
    pub fn compose(&self, images: &[RatFunc]) -> Result<Self, PolyError> {
        let n = self.num.compose(images)?;
        let d = self.den.compose(images)?;
        n.checked_div(&d)
    }

    pub fn pow(&self, e: u32) -> Self {
        Self {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            if self.is_polynomial() {
                return RatFunc::from_poly(&self.num + &rhs.num);
            }
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).expect("non-zero");
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(n, &self.den * &rhs.den).expect("non-zero")
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.chart());
        }
        if self.is_polynomial() && rhs.is_polynomial() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("non-zero")
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; see [`RatFunc::checked_div`].
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
