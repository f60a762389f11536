//! Compactification of planar polynomial vector fields to the projective plane.
//!
//! The chart at infinity is `s = 1/x`, `t = y/x`; the line at infinity is `s = 0`.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::liecalc::VectorField;
use crate::poly::{Chart, Poly, Rational};

/// Chart `(s, t)` at infinity.
pub fn infinity_chart() -> &'static Chart {
    static CHART: OnceLock<Chart> = OnceLock::new();
    CHART.get_or_init(|| Chart::new(["s", "t"]).expect("valid chart"))
}

/// Chart `(t)` carrying `P(t)`.
pub fn line_chart() -> &'static Chart {
    static CHART: OnceLock<Chart> = OnceLock::new();
    CHART.get_or_init(|| Chart::new(["t"]).expect("valid chart"))
}

/// `a ∂/∂x + b ∂/∂y` with coprime polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarField {
    a: Poly,
    b: Poly,
    degree: u32,
}

impl PlanarField {
    pub fn new(a: Poly, b: Poly) -> Result<Self> {
        a.chart().ensure_same(b.chart())?;
        if a.nvars() != 2 {
            return Err(Error::InvalidArgument(format!(
                "planar fields need a 2-variable chart, got {}",
                a.nvars()
            )));
        }
        if a.is_zero() && b.is_zero() {
            return Err(Error::ZeroField);
        }
        if !a.gcd(&b)?.is_one() {
            return Err(Error::InvalidArgument(format!(
                "coefficients share the factor {}; saturate the field first",
                a.gcd(&b)?
            )));
        }
        let degree = a
            .total_degree()
            .unwrap_or(0)
            .max(b.total_degree().unwrap_or(0));
        Ok(Self { a, b, degree })
    }

    pub fn from_field(v: &VectorField) -> Result<Self> {
        let coeffs = v.polynomial_coefficients().ok_or_else(|| {
            Error::InvalidArgument("planar fields need polynomial coefficients".into())
        })?;
        if coeffs.len() != 2 {
            return Err(Error::InvalidArgument(format!(
                "planar fields need a 2-variable chart, got {}",
                coeffs.len()
            )));
        }
        let mut it = coeffs.into_iter();
        Self::new(it.next().unwrap(), it.next().unwrap())
    }

    pub fn a(&self) -> &Poly {
        &self.a
    }

    pub fn b(&self) -> &Poly {
        &self.b
    }

    /// Working degree `n = max(deg a, deg b)`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn chart(&self) -> &Chart {
        self.a.chart()
    }

    pub fn to_field(&self) -> VectorField {
        VectorField::from_polys(self.chart(), vec![self.a.clone(), self.b.clone()])
            .expect("two coefficients on a two-variable chart")
    }

    /// Same field with the roles of the two coordinates exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            a: swap_variables(&self.b),
            b: swap_variables(&self.a),
            degree: self.degree,
        }
    }
}

/// `p(y, x)` on the chart with the two names exchanged.
pub fn swap_variables(p: &Poly) -> Poly {
    let c = p.chart();
    assert_eq!(c.len(), 2, "two-variable chart expected");
    let swapped = Chart::new([c.vars()[1].clone(), c.vars()[0].clone()]).expect("valid chart");
    Poly::from_terms(
        &swapped,
        p.terms().map(|(m, c)| {
            let e = m.exponents();
            (vec![e[1], e[0]], c.clone())
        }),
    )
}

/// `sⁿ · p(1/s, t/s)` as a polynomial in `(s, t)`.
fn hat(p: &Poly, n: u32) -> Poly {
    Poly::from_terms(
        infinity_chart(),
        p.terms().map(|(m, c)| {
            let e = m.exponents();
            (vec![n - e[0] - e[1], e[1]], c.clone())
        }),
    )
}

/// `(w_s, w_t) = (−s·â, −t·â + b̂)`, the field `s^{n−1}·v` in the chart at infinity.
pub fn to_infinity_chart(v: &PlanarField) -> (Poly, Poly) {
    let ch = infinity_chart();
    let a_hat = hat(&v.a, v.degree);
    let b_hat = hat(&v.b, v.degree);
    let s = Poly::var(ch, 0);
    let t = Poly::var(ch, 1);
    let w_s = -&(&s * &a_hat);
    let w_t = &b_hat - &(&t * &a_hat);
    (w_s, w_t)
}

/// `Q(x, y) = x·bₙ − y·aₙ`.
pub fn q_polynomial(v: &PlanarField) -> Poly {
    let c = v.chart();
    let x = Poly::var(c, 0);
    let y = Poly::var(c, 1);
    let an = v.a.homogeneous_part(v.degree);
    let bn = v.b.homogeneous_part(v.degree);
    &(&x * &bn) - &(&y * &an)
}

/// Restriction `w_t(0, t)`.
fn p_polynomial(w_t: &Poly) -> Poly {
    Poly::from_terms(
        line_chart(),
        w_t.terms()
            .filter(|(m, _)| m.exponents()[0] == 0)
            .map(|(m, c)| (vec![m.exponents()[1]], c.clone())),
    )
}

/// Point `[x : y]` of the line at infinity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectivePoint {
    pub x: Rational,
    pub y: Rational,
}

impl std::fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{}:{}]", self.x, self.y)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InfinityReport {
    pub w_s: Poly,
    pub w_t: Poly,
    pub p: Poly,
    pub q: Poly,
    pub line_invariant: bool,
    /// `s | w_s`.
    pub s_divides_ws: bool,
    /// Squarefree part of `Q`, present when the line at infinity is invariant.
    pub sing_infinity: Option<Poly>,
    /// Rational roots of `Q` on the line at infinity.
    pub rational_points: Vec<ProjectivePoint>,
}

pub fn infinity_analysis(v: &PlanarField) -> Result<InfinityReport> {
    let (w_s, w_t) = to_infinity_chart(v);
    let q = q_polynomial(v);
    let p = p_polynomial(&w_t);
    let s = Poly::var(infinity_chart(), 0);
    let s_divides_ws = s.divides(&w_s);
    let line_invariant = !q.is_zero();
    let (sing_infinity, rational_points) = if line_invariant {
        let sq = q.squarefree_part()?;
        let mut pts: Vec<ProjectivePoint> = rational_roots(&p)
            .into_iter()
            .map(|t| ProjectivePoint {
                x: Rational::one(),
                y: t,
            })
            .collect();
        if Poly::var(v.chart(), 0).divides(&q) {
            pts.push(ProjectivePoint {
                x: Rational::zero(),
                y: Rational::one(),
            });
        }
        (Some(sq), pts)
    } else {
        (None, Vec::new())
    };
    Ok(InfinityReport {
        w_s,
        w_t,
        p,
        q,
        line_invariant,
        s_divides_ws,
        sing_infinity,
        rational_points,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveVerdict {
    /// Every point of the curve at infinity is a root of `Q`.
    Consistent,
    /// The curve cannot be invariant.
    Excluded,
}

impl CurveVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveVerdict::Consistent => "consistent",
            CurveVerdict::Excluded => "excluded",
        }
    }
}

/// Necessary condition for `C = 0` to be an invariant curve: the points of
/// `C` at infinity are singular points of the compactified foliation.
pub fn invariant_curve_constraint(curve: &Poly, v: &PlanarField) -> Result<CurveVerdict> {
    curve.chart().ensure_same(v.chart())?;
    if curve.is_constant() {
        return Err(Error::ConstantInput);
    }
    let q = q_polynomial(v);
    if q.is_zero() {
        return Err(Error::DegenerateQ);
    }
    let top = curve.homogeneous_part(curve.total_degree().expect("non-zero"));
    let at_infinity = top.squarefree_part()?;
    let sing = q.squarefree_part()?;
    Ok(if at_infinity.divides(&sing) {
        CurveVerdict::Consistent
    } else {
        CurveVerdict::Excluded
    })
}

/// Distinct rational roots of a univariate polynomial, ascending.
pub fn rational_roots(p: &Poly) -> Vec<Rational> {
    assert_eq!(p.nvars(), 1, "univariate polynomial expected");
    if p.is_zero() || p.is_constant() {
        return Vec::new();
    }
    let prim = p.normalize_unit();
    let deg = prim.total_degree().unwrap_or(0);
    let low = prim
        .terms()
        .map(|(m, _)| m.exponents()[0])
        .min()
        .unwrap_or(0);
    let coeff = |k: u32| -> BigInt {
        prim.terms()
            .find(|(m, _)| m.exponents()[0] == k)
            .map(|(_, c)| c.numer().clone())
            .unwrap_or_else(BigInt::zero)
    };
    let mut roots = Vec::new();
    if low > 0 {
        roots.push(Rational::zero());
    }
    if deg > low {
        let a0 = coeff(low).abs();
        let an = coeff(deg).abs();
        let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
            return roots;
        };
        for num in &ps {
            for den in &qs {
                if !num.gcd(den).is_one() {
                    continue;
                }
                for sign in [1i32, -1] {
                    let r = Rational::new(num * BigInt::from(sign), den.clone());
                    if p.evaluate(std::slice::from_ref(&r))
                        .map(|v| v.is_zero())
                        .unwrap_or(false)
                        && !roots.contains(&r)
                    {
                        roots.push(r);
                    }
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Positive divisors, or `None` when the integer is too large to factor by trial division.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.to_u64().filter(|&n| n <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_poly;

    fn xy() -> Chart {
        Chart::new(["x", "y"]).unwrap()
    }

    fn pf(a: &str, b: &str) -> PlanarField {
        let c = xy();
        PlanarField::new(parse_poly(&c, a).unwrap(), parse_poly(&c, b).unwrap()).unwrap()
    }

    fn st(s: &str) -> Poly {
        parse_poly(infinity_chart(), s).unwrap()
    }

    #[test]
    fn transform_examples() {
        assert_eq!(to_infinity_chart(&pf("x", "-y")), (st("-s"), st("-2*t")));
        assert_eq!(
            to_infinity_chart(&pf("-y", "x")),
            (st("s*t"), st("t^2 + 1"))
        );
        assert_eq!(to_infinity_chart(&pf("1", "0")), (st("-s"), st("-t")));
    }

    #[test]
    fn q_examples() {
        let c = xy();
        assert_eq!(
            q_polynomial(&pf("x", "-y")),
            parse_poly(&c, "-2*x*y").unwrap()
        );
        assert_eq!(
            q_polynomial(&pf("-y", "x")),
            parse_poly(&c, "x^2 + y^2").unwrap()
        );
        assert!(q_polynomial(&pf("x", "y")).is_zero());
    }

    #[test]
    fn analysis_examples() {
        let r = infinity_analysis(&pf("x", "-y")).unwrap();
        assert!(r.line_invariant && r.s_divides_ws);
        assert_eq!(r.sing_infinity.unwrap().to_string(), "x*y");
        let pts: Vec<String> = r.rational_points.iter().map(ToString::to_string).collect();
        assert_eq!(pts, ["[1:0]", "[0:1]"]);

        let r = infinity_analysis(&pf("-y", "x")).unwrap();
        assert_eq!(r.sing_infinity.unwrap().to_string(), "x^2 + y^2");
        assert!(r.rational_points.is_empty());
        assert_eq!(r.p.to_string(), "t^2 + 1");

        let r = infinity_analysis(&pf("x", "y")).unwrap();
        assert!(!r.line_invariant);
        assert!(r.sing_infinity.is_none());
    }

    #[test]
    fn curve_constraint_examples() {
        let c = xy();
        let p = |s: &str| parse_poly(&c, s).unwrap();
        let hyper = pf("x", "-y");
        assert_eq!(
            invariant_curve_constraint(&p("x*y - 1"), &hyper).unwrap(),
            CurveVerdict::Consistent
        );
        assert!(
            crate::foliation::invariant_hypersurface(&p("x*y - 1"), &hyper.to_field()).unwrap()
        );
        assert_eq!(
            invariant_curve_constraint(&p("x + y - 1"), &hyper).unwrap(),
            CurveVerdict::Excluded
        );
        assert_eq!(
            invariant_curve_constraint(&p("x^2 - y^2 - 1"), &pf("y", "x")).unwrap(),
            CurveVerdict::Consistent
        );
        assert_eq!(
            invariant_curve_constraint(&p("2"), &hyper),
            Err(Error::ConstantInput)
        );
        assert_eq!(
            invariant_curve_constraint(&p("x"), &pf("x", "y")),
            Err(Error::DegenerateQ)
        );
    }

    #[test]
    fn unequal_degrees_use_max() {
        // a = y^2 (degree 2), b = 1 (degree 0): n = 2
        let v = pf("y^2", "1");
        assert_eq!(v.degree(), 2);
        let c = xy();
        assert_eq!(q_polynomial(&v), parse_poly(&c, "-y^3").unwrap());
        let (ws, wt) = to_infinity_chart(&v);
        assert_eq!(ws, st("-s*t^2"));
        assert_eq!(wt, st("-t^3 + s^2"));
    }

    #[test]
    fn rejects_non_coprime() {
        let c = xy();
        let e = PlanarField::new(
            parse_poly(&c, "x^2").unwrap(),
            parse_poly(&c, "x*y").unwrap(),
        );
        assert!(matches!(e, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn rational_root_search() {
        let t = line_chart();
        let p = parse_poly(t, "(2*t - 1)*(t + 3)*t*(t^2 + 1)").unwrap();
        let r: Vec<String> = rational_roots(&p).iter().map(ToString::to_string).collect();
        assert_eq!(r, ["-3", "0", "1/2"]);
    }

    #[test]
    fn swap_exchanges_roles() {
        let v = pf("x^2", "y");
        let w = v.swapped();
        assert_eq!(w.a().to_string(), "y");
        assert_eq!(w.b().to_string(), "x^2");
        assert_eq!(w.chart().vars(), ["y", "x"]);
    }
}
