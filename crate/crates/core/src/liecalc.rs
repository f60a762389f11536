//! Vector fields on an affine chart, Lie brackets and truncated flow series.

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::linalg::RatMatrix;
use crate::poly::{Chart, Poly, RatFunc, Rational};

/// `Σ vᵢ ∂/∂xᵢ` with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VectorField {
    chart: Chart,
    coeffs: Vec<RatFunc>,
}

impl VectorField {
    pub fn new(chart: &Chart, coeffs: Vec<RatFunc>) -> Result<Self> {
        if coeffs.len() != chart.len() {
            return Err(Error::LengthMismatch {
                expected: chart.len(),
                got: coeffs.len(),
            });
        }
        for c in &coeffs {
            chart.ensure_same(c.chart())?;
        }
        Ok(Self {
            chart: chart.clone(),
            coeffs,
        })
    }

    pub fn from_polys(chart: &Chart, coeffs: Vec<Poly>) -> Result<Self> {
        Self::new(chart, coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn zero(chart: &Chart) -> Self {
        Self {
            chart: chart.clone(),
            coeffs: vec![RatFunc::zero(chart); chart.len()],
        }
    }

    /// The coordinate field `∂/∂xᵢ`.
    pub fn basis(chart: &Chart, i: usize) -> Self {
        let mut v = Self::zero(chart);
        v.coeffs[i] = RatFunc::one(chart);
        v
    }

    /// `Σⱼ aᵢⱼ xⱼ ∂/∂xᵢ` for a constant matrix.
    pub fn linear(chart: &Chart, a: &[Vec<Rational>]) -> Result<Self> {
        let coeffs = a
            .iter()
            .map(|row| {
                let terms = row.iter().enumerate().map(|(j, c)| {
                    let mut e = vec![0; chart.len()];
                    e[j] = 1;
                    (e, c.clone())
                });
                RatFunc::from_poly(Poly::from_terms(chart, terms))
            })
            .collect();
        Self::new(chart, coeffs)
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn coefficients(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> &RatFunc {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_zero)
    }

    pub fn is_polynomial(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_polynomial)
    }

    /// Coefficients as polynomials, if they all are.
    pub fn polynomial_coefficients(&self) -> Option<Vec<Poly>> {
        self.coeffs.iter().map(|c| c.as_poly().cloned()).collect()
    }

    pub fn add(&self, other: &VectorField) -> Result<Self> {
        self.chart.ensure_same(&other.chart)?;
        Ok(Self {
            chart: self.chart.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    /// Multiplication by a function, `f·v`.
    pub fn scale(&self, f: &RatFunc) -> Result<Self> {
        self.chart.ensure_same(f.chart())?;
        Ok(Self {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|a| a * f).collect(),
        })
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        Self {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Canonical textual forms of the coefficients.
    pub fn coefficient_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(ToString::to_string).collect()
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (c, v) in self.coeffs.iter().zip(self.chart.vars()) {
            if c.is_zero() {
                continue;
            }
            let s = c.to_string();
            let simple = c.is_polynomial() && c.numer().num_terms() == 1;
            let (neg, body) = match s.strip_prefix('-') {
                Some(rest) if simple => (true, rest.to_string()),
                _ => (false, s),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if body == "1" {
                write!(f, "d{v}")?;
            } else if simple {
                write!(f, "{body}*d{v}")?;
            } else {
                write!(f, "({body})*d{v}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorField({self})")
    }
}

/// `δ_v(f) = Σᵢ vᵢ ∂f/∂xᵢ`.
pub fn apply_derivation(v: &VectorField, f: &RatFunc) -> Result<RatFunc> {
    v.chart.ensure_same(f.chart())?;
    let mut acc = RatFunc::zero(&v.chart);
    for (i, vi) in v.coeffs.iter().enumerate() {
        if vi.is_zero() {
            continue;
        }
        let d = f.derivative(i);
        if !d.is_zero() {
            acc = &acc + &(vi * &d);
        }
    }
    Ok(acc)
}

/// Coordinate Lie bracket: `[v,w]ᵢ = Σⱼ vⱼ ∂wᵢ/∂xⱼ − wⱼ ∂vᵢ/∂xⱼ`.
pub fn lie_bracket(v: &VectorField, w: &VectorField) -> Result<VectorField> {
    v.chart.ensure_same(&w.chart)?;
    let coeffs = (0..v.chart.len())
        .map(|i| {
            let a = apply_derivation(v, &w.coeffs[i])?;
            let b = apply_derivation(w, &v.coeffs[i])?;
            Ok(&a - &b)
        })
        .collect::<Result<Vec<_>>>()?;
    VectorField::new(&v.chart, coeffs)
}

/// The matrix `A = (∂vᵢ/∂xⱼ)` with `𝓛_v(w) = ∇₀(w) − A·w`.
pub fn lie_connection_matrix(v: &VectorField) -> RatMatrix {
    let n = v.chart.len();
    let rows = v
        .coeffs
        .iter()
        .map(|vi| (0..n).map(|j| vi.derivative(j)).collect())
        .collect();
    RatMatrix::new(&v.chart, rows, n)
}

/// Truncated formal power series in `t`; `coefficients[k]` multiplies `t^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowSeries<T> {
    coefficients: Vec<T>,
}

impl<T> FlowSeries<T> {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn base(&self) -> &T {
        &self.coefficients[0]
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> Option<&T> {
        self.coefficients.get(k)
    }
}

impl FlowSeries<RatFunc> {
    /// Term-by-term `d/dt`, one order shorter.
    pub fn derivative_t(&self) -> Option<Self> {
        (self.order() > 0).then(|| Self {
            coefficients: self.coefficients[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale(&int_rat(k + 1)))
                .collect(),
        })
    }
}

impl FlowSeries<VectorField> {
    pub fn derivative_t(&self) -> Option<Self> {
        (self.order() > 0).then(|| Self {
            coefficients: self.coefficients[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c.scale_rational(&int_rat(k + 1)))
                .collect(),
        })
    }

    /// `𝓛_v` applied coefficientwise.
    pub fn lie_derivative(&self, v: &VectorField) -> Result<Self> {
        Ok(Self {
            coefficients: self
                .coefficients
                .iter()
                .map(|c| lie_bracket(v, c))
                .collect::<Result<_>>()?,
        })
    }
}

fn int_rat(k: usize) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

/// `Σ_{k≤N} δ_v^k(f)/k! tᵏ`.
pub fn flow_series_function(
    v: &VectorField,
    f: &RatFunc,
    order: usize,
) -> Result<FlowSeries<RatFunc>> {
    v.chart.ensure_same(f.chart())?;
    let mut coefficients = Vec::with_capacity(order + 1);
    coefficients.push(f.clone());
    for k in 1..=order {
        let prev = &coefficients[k - 1];
        let next = apply_derivation(v, prev)?.scale(&int_rat(k).recip());
        coefficients.push(next);
    }
    Ok(FlowSeries { coefficients })
}

/// `Σ_{n≤N} 𝓛_vⁿ(w)/n! tⁿ`.
pub fn flow_series_field(
    v: &VectorField,
    w: &VectorField,
    order: usize,
) -> Result<FlowSeries<VectorField>> {
    v.chart.ensure_same(&w.chart)?;
    let mut coefficients = Vec::with_capacity(order + 1);
    coefficients.push(w.clone());
    for k in 1..=order {
        let next = lie_bracket(v, &coefficients[k - 1])?.scale_rational(&int_rat(k).recip());
        coefficients.push(next);
    }
    Ok(FlowSeries { coefficients })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::parse_ratfunc;
    use crate::poly::{int, rat};

    fn chart2() -> Chart {
        Chart::new(["x", "y"]).unwrap()
    }

    fn field(c: &Chart, coeffs: &[&str]) -> VectorField {
        VectorField::new(
            c,
            coeffs
                .iter()
                .map(|s| parse_ratfunc(c, s).unwrap())
                .collect(),
        )
        .unwrap()
    }

    fn f(c: &Chart, s: &str) -> RatFunc {
        parse_ratfunc(c, s).unwrap()
    }

    #[test]
    fn derivation_examples() {
        let c = chart2();
        let radial = field(&c, &["x", "y"]);
        assert!(apply_derivation(&radial, &f(&c, "y/x")).unwrap().is_zero());
        assert_eq!(
            apply_derivation(&VectorField::basis(&c, 0), &f(&c, "x")).unwrap(),
            f(&c, "1")
        );
        assert_eq!(
            apply_derivation(&field(&c, &["x^2", "0"]), &f(&c, "1/x")).unwrap(),
            f(&c, "-1")
        );
        let other = Chart::new(["u"]).unwrap();
        assert!(apply_derivation(&radial, &RatFunc::one(&other)).is_err());
    }

    #[test]
    fn bracket_examples() {
        let c = chart2();
        let dx = VectorField::basis(&c, 0);
        let dy = VectorField::basis(&c, 1);
        assert!(lie_bracket(&dx, &dy).unwrap().is_zero());
        let radial = field(&c, &["x", "y"]);
        let rot = field(&c, &["-y", "x"]);
        assert!(lie_bracket(&radial, &rot).unwrap().is_zero());
        assert_eq!(lie_bracket(&field(&c, &["x", "0"]), &dx).unwrap(), dx.neg());
    }

    #[test]
    fn connection_matrix_examples() {
        let c1 = Chart::new(["x"]).unwrap();
        let a = lie_connection_matrix(&field(&c1, &["x"]));
        assert_eq!(a.get(0, 0), &f(&c1, "1"));
        let c = chart2();
        assert!(lie_connection_matrix(&field(&c, &["3", "-1/2"])).is_zero());
        let a = lie_connection_matrix(&field(&c, &["0", "x"]));
        assert_eq!(format!("{a:?}"), r#"[["0", "0"], ["1", "0"]]"#);
    }

    #[test]
    fn function_series_examples() {
        let c = chart2();
        let s = flow_series_function(&VectorField::basis(&c, 0), &f(&c, "x"), 3).unwrap();
        assert_eq!(
            s.coefficients(),
            &[f(&c, "x"), f(&c, "1"), f(&c, "0"), f(&c, "0")]
        );
        let s = flow_series_function(&field(&c, &["x*y", "y^2"]), &f(&c, "x+y"), 0).unwrap();
        assert_eq!(s.order(), 0);
        assert_eq!(s.base(), &f(&c, "x+y"));
        let s = flow_series_function(&field(&c, &["x", "0"]), &f(&c, "x"), 2).unwrap();
        assert_eq!(s.coefficients(), &[f(&c, "x"), f(&c, "x"), f(&c, "x/2")]);
    }

    #[test]
    fn field_series_examples() {
        let c = chart2();
        let dx = VectorField::basis(&c, 0);
        let xdx = field(&c, &["x", "0"]);
        let s = flow_series_field(&dx, &xdx, 2).unwrap();
        assert_eq!(
            s.coefficients(),
            &[xdx.clone(), dx.clone(), VectorField::zero(&c)]
        );
        let rot = field(&c, &["-y", "x"]);
        let radial = field(&c, &["x", "y"]);
        let s = flow_series_field(&rot, &radial, 5).unwrap();
        assert!(s.coefficients()[1..].iter().all(VectorField::is_zero));
        let s = flow_series_field(&xdx, &dx, 2).unwrap();
        assert_eq!(
            s.coefficients(),
            &[dx.clone(), dx.neg(), dx.scale_rational(&rat(1, 2))]
        );
    }

    #[test]
    fn display_round_trip_shape() {
        let c = chart2();
        assert_eq!(field(&c, &["x", "-y"]).to_string(), "x*dx - y*dy");
        assert_eq!(
            field(&c, &["-1", "x^2+1"]).to_string(),
            "-dx + (x^2 + 1)*dy"
        );
        assert_eq!(field(&c, &["1/x", "0"]).to_string(), "((1)/(x))*dx");
        assert_eq!(VectorField::zero(&c).to_string(), "0");
        assert_eq!(
            VectorField::linear(&c, &[vec![int(1), int(2)], vec![int(0), int(-1)]])
                .unwrap()
                .to_string(),
            "(x + 2*y)*dx - y*dy"
        );
    }
}
