//! Foliations represented at the generic point by polynomial generating fields.
//!
//! Membership in the span of the generators is decided over the rational
//! function field by comparing ranks, and saturation is content removal.

use crate::error::{Error, Result};
use crate::liecalc::{apply_derivation, lie_bracket, VectorField};
use crate::linalg::{clear_denominators, common_denominator, primitive_vector, RatMatrix};
use crate::poly::{content, Chart, Poly, RatFunc};

/// Generators of a subsheaf of the tangent sheaf, cleared to polynomial
/// coefficients with content 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoliationGens {
    chart: Chart,
    generators: Vec<VectorField>,
    rank: usize,
}

impl FoliationGens {
    pub fn new(chart: &Chart, generators: Vec<VectorField>) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidArgument(
                "a foliation needs at least one generator".into(),
            ));
        }
        Self::from_generators(chart, generators)
    }

    fn from_generators(chart: &Chart, generators: Vec<VectorField>) -> Result<Self> {
        let generators = generators
            .iter()
            .map(|g| {
                chart.ensure_same(g.chart())?;
                if g.is_zero() {
                    return Err(Error::ZeroField);
                }
                VectorField::from_polys(chart, primitive_vector(g.coefficients()))
            })
            .collect::<Result<Vec<_>>>()?;
        let rank = coefficient_matrix(chart, &generators).rank();
        Ok(Self {
            chart: chart.clone(),
            generators,
            rank,
        })
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn generators(&self) -> &[VectorField] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Whether `w` lies in the span of the generators over the function field.
    pub fn contains(&self, w: &VectorField) -> Result<bool> {
        self.chart.ensure_same(w.chart())?;
        if w.is_zero() {
            return Ok(true);
        }
        let mut rows = self.generators.clone();
        rows.push(w.clone());
        Ok(coefficient_matrix(&self.chart, &rows).rank() == self.rank)
    }

    /// A maximal independent subset of the generators, in order.
    pub fn independent_subset(&self) -> Self {
        let mut kept: Vec<VectorField> = Vec::new();
        let mut rank = 0;
        for g in &self.generators {
            let mut trial = kept.clone();
            trial.push(g.clone());
            let r = coefficient_matrix(&self.chart, &trial).rank();
            if r > rank {
                kept = trial;
                rank = r;
            }
        }
        Self {
            chart: self.chart.clone(),
            generators: kept,
            rank,
        }
    }
}

fn coefficient_matrix(chart: &Chart, fields: &[VectorField]) -> RatMatrix {
    RatMatrix::new(
        chart,
        fields.iter().map(|f| f.coefficients().to_vec()).collect(),
        chart.len(),
    )
}

pub fn generic_rank(f: &FoliationGens) -> usize {
    f.rank
}

/// Result of [`is_involutive`]; the witness is the first bracket outside the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involutivity {
    pub involutive: bool,
    pub witness: Option<(usize, usize, VectorField)>,
}

pub fn is_involutive(f: &FoliationGens) -> Result<Involutivity> {
    let g = &f.generators;
    for i in 0..g.len() {
        for j in i + 1..g.len() {
            let b = lie_bracket(&g[i], &g[j])?;
            if !f.contains(&b)? {
                return Ok(Involutivity {
                    involutive: false,
                    witness: Some((i, j, b)),
                });
            }
        }
    }
    Ok(Involutivity {
        involutive: true,
        witness: None,
    })
}

/// Divides a field by the content of its coefficients (after clearing denominators).
pub fn saturate_rank1(v: &VectorField) -> Result<VectorField> {
    if v.is_zero() {
        return Err(Error::ZeroField);
    }
    VectorField::from_polys(v.chart(), primitive_vector(v.coefficients()))
}

/// `v` and `w` span the same line over the function field.
pub fn same_rank1_foliation(v: &VectorField, w: &VectorField) -> Result<bool> {
    v.chart().ensure_same(w.chart())?;
    if v.is_zero() || w.is_zero() {
        return Err(Error::ZeroField);
    }
    let (a, b) = (v.coefficients(), w.coefficients());
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if &a[i] * &b[j] != &a[j] * &b[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Maximal minors of the generator matrix, with their common factor removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularIdeal {
    pub chart: Chart,
    pub generators: Vec<Poly>,
    /// Common content divided out of the minors.
    pub removed_divisor: Poly,
}

impl SingularIdeal {
    /// True when the ideal contains a non-zero constant.
    pub fn is_unit(&self) -> bool {
        self.generators
            .iter()
            .any(|g| g.is_constant() && !g.is_zero())
    }

    pub fn generator_strings(&self) -> Vec<String> {
        self.generators.iter().map(ToString::to_string).collect()
    }
}

pub fn singular_locus(f: &FoliationGens) -> Result<SingularIdeal> {
    let p = f.generators.len();
    if f.rank < p {
        return Err(Error::DependentGenerators {
            rank: f.rank,
            count: p,
        });
    }
    let minors = coefficient_matrix(&f.chart, &f.generators).maximal_minors();
    let removed = content(&minors)?;
    let mut gens: Vec<Poly> = minors
        .iter()
        .filter(|m| !m.is_zero())
        .map(|m| {
            m.exact_div(&removed)
                .expect("content divides")
                .normalize_unit()
        })
        .collect();
    if gens.iter().any(Poly::is_constant) {
        gens = vec![Poly::one(&f.chart)];
    }
    gens.sort_by(|a, b| {
        b.leading_monomial()
            .cmp(&a.leading_monomial())
            .then_with(|| b.to_string().cmp(&a.to_string()))
    });
    gens.dedup();
    Ok(SingularIdeal {
        chart: f.chart.clone(),
        generators: gens,
        removed_divisor: removed,
    })
}

/// Result of [`is_invariant_subsheaf`]; the witness is `[v, g]` for the first
/// generator `g` whose bracket leaves the span.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCheck {
    pub invariant: bool,
    pub witness: Option<VectorField>,
}

pub fn is_invariant_subsheaf(f: &FoliationGens, v: &VectorField) -> Result<InvarianceCheck> {
    f.chart.ensure_same(v.chart())?;
    for g in &f.generators {
        let b = lie_bracket(v, g)?;
        if !f.contains(&b)? {
            return Ok(InvarianceCheck {
                invariant: false,
                witness: Some(b),
            });
        }
    }
    Ok(InvarianceCheck {
        invariant: true,
        witness: None,
    })
}

/// Kernel of the Jacobian of a dominant rational map, as a foliation.
pub fn tangent_foliation(phi: &[RatFunc], chart: &Chart) -> Result<FoliationGens> {
    for f in phi {
        chart.ensure_same(f.chart())?;
    }
    let n = chart.len();
    let rows = phi
        .iter()
        .map(|f| (0..n).map(|i| f.derivative(i)).collect())
        .collect();
    let jac = RatMatrix::new(chart, rows, n);
    let rank = jac.rank();
    if rank < phi.len() {
        return Err(Error::NotDominant {
            rank,
            expected: phi.len(),
        });
    }
    let generators = jac
        .kernel()
        .into_iter()
        .map(|k| VectorField::from_polys(chart, k))
        .collect::<Result<Vec<_>>>()?;
    FoliationGens::from_generators(chart, generators)
}

/// Whether the hypersurface `f = 0` is invariant: `f | δ_v(f)` once `v` is
/// cleared of denominators.
pub fn invariant_hypersurface(f: &Poly, v: &VectorField) -> Result<bool> {
    f.chart().ensure_same(v.chart())?;
    if f.is_constant() {
        return Err(Error::ConstantInput);
    }
    if f.squarefree_part()? != f.normalize_unit() {
        return Err(Error::NotSquarefree(f.to_string()));
    }
    let d = common_denominator(v.coefficients());
    if !f.gcd(&d)?.is_one() {
        return Err(Error::InvalidArgument(
            "vector field has poles along the hypersurface".into(),
        ));
    }
    let cleared = clear_denominators(v.coefficients());
    let w = VectorField::from_polys(v.chart(), cleared)?;
    let df = apply_derivation(&w, &RatFunc::from_poly(f.clone()))?;
    let df = df
        .as_poly()
        .expect("polynomial field maps polynomials to polynomials");
    Ok(f.divides(df))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse::{parse_poly, parse_ratfunc};

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

    fn fol(c: &Chart, gens: &[&[&str]]) -> FoliationGens {
        FoliationGens::new(c, gens.iter().map(|g| field(c, g)).collect()).unwrap()
    }

    fn xyz() -> Chart {
        Chart::new(["x", "y", "z"]).unwrap()
    }

    fn xy() -> Chart {
        Chart::new(["x", "y"]).unwrap()
    }

    #[test]
    fn rank_examples() {
        let c = xyz();
        assert_eq!(
            generic_rank(&fol(&c, &[&["1", "0", "0"], &["0", "1", "0"]])),
            2
        );
        assert_eq!(
            generic_rank(&fol(&c, &[&["x", "y", "0"], &["2*x", "2*y", "0"]])),
            1
        );
        assert_eq!(
            generic_rank(&fol(&c, &[&["-y", "x", "0"], &["0", "0", "1"]])),
            2
        );
    }

    #[test]
    fn admission_clears_to_content_one() {
        let c = xy();
        let f = fol(&c, &[&["x^2/y", "x*y"]]);
        assert_eq!(f.generators()[0], field(&c, &["x", "y^2"]));
    }

    #[test]
    fn involutivity_examples() {
        let c = xyz();
        assert!(
            is_involutive(&fol(&c, &[&["x*y", "z", "1"]]))
                .unwrap()
                .involutive
        );
        let r = is_involutive(&fol(&c, &[&["1", "0", "0"], &["0", "1", "x"]])).unwrap();
        assert!(!r.involutive);
        assert_eq!(r.witness.unwrap().2, field(&c, &["0", "0", "1"]));
        assert!(
            is_involutive(&fol(&c, &[&["-y", "x", "0"], &["0", "0", "1"]]))
                .unwrap()
                .involutive
        );
    }

    #[test]
    fn saturation_examples() {
        let c = xy();
        assert_eq!(
            saturate_rank1(&field(&c, &["x", "0"])).unwrap(),
            field(&c, &["1", "0"])
        );
        let radial = field(&c, &["x", "y"]);
        assert_eq!(saturate_rank1(&radial).unwrap(), radial);
        assert_eq!(
            saturate_rank1(&field(&c, &["x^2*y", "x*y^2"])).unwrap(),
            radial
        );
        assert_eq!(
            saturate_rank1(&VectorField::zero(&c)),
            Err(Error::ZeroField)
        );
    }

    #[test]
    fn proportionality_examples() {
        let c = xy();
        let v = field(&c, &["x^2 - y", "3*x"]);
        assert!(same_rank1_foliation(&v, &v.scale_rational(&crate::poly::int(3))).unwrap());
        assert!(!same_rank1_foliation(&field(&c, &["x", "y"]), &field(&c, &["-y", "x"])).unwrap());
        let c1 = Chart::new(["x"]).unwrap();
        assert!(same_rank1_foliation(&field(&c1, &["x"]), &field(&c1, &["x^2"])).unwrap());
        assert_eq!(
            same_rank1_foliation(&v, &VectorField::zero(&c)),
            Err(Error::ZeroField)
        );
    }

    #[test]
    fn singular_locus_examples() {
        let c = xy();
        let s = singular_locus(&fol(&c, &[&["x", "y"]])).unwrap();
        assert_eq!(s.generator_strings(), ["x", "y"]);
        let s = singular_locus(&fol(&c, &[&["1", "0"]])).unwrap();
        assert_eq!(s.generator_strings(), ["1"]);
        assert!(s.is_unit());
        let s = singular_locus(&fol(&xyz(), &[&["-y", "x", "0"], &["0", "0", "1"]])).unwrap();
        assert_eq!(s.generator_strings(), ["x", "y"]);
        let dep = fol(&c, &[&["x", "y"], &["2*x", "2*y"]]);
        assert_eq!(
            singular_locus(&dep),
            Err(Error::DependentGenerators { rank: 1, count: 2 })
        );
        assert_eq!(dep.independent_subset().generators().len(), 1);
    }

    #[test]
    fn singular_locus_removes_common_divisor() {
        let c = xyz();
        // the only non-zero minor is x^2 - y^2, a divisor
        let s = singular_locus(&fol(&c, &[&["x", "y", "0"], &["y", "x", "0"]])).unwrap();
        assert_eq!(s.removed_divisor.to_string(), "x^2 - y^2");
        assert_eq!(s.generator_strings(), ["1"]);
    }

    #[test]
    fn invariance_examples() {
        let c = xy();
        let dx = fol(&c, &[&["1", "0"]]);
        assert!(
            is_invariant_subsheaf(&dx, &field(&c, &["x", "2*y"]))
                .unwrap()
                .invariant
        );
        let r = is_invariant_subsheaf(&dx, &field(&c, &["0", "x"])).unwrap();
        assert!(!r.invariant);
        assert_eq!(r.witness.unwrap(), field(&c, &["0", "-1"]));
        let v = field(&c, &["x^2 + y", "x*y - 1"]);
        let f = FoliationGens::new(&c, vec![v.clone()]).unwrap();
        assert!(is_invariant_subsheaf(&f, &v).unwrap().invariant);
    }

    #[test]
    fn tangent_foliation_examples() {
        let c = xy();
        let r = |s: &str| parse_ratfunc(&c, s).unwrap();
        let f = tangent_foliation(&[r("x")], &c).unwrap();
        assert_eq!(f.generators(), &[field(&c, &["0", "1"])]);
        let f = tangent_foliation(&[r("x^2 + y^2")], &c).unwrap();
        assert_eq!(f.generators(), &[field(&c, &["-y", "x"])]);
        let f = tangent_foliation(&[r("y/x")], &c).unwrap();
        assert_eq!(f.generators(), &[field(&c, &["x", "y"])]);
        assert_eq!(
            tangent_foliation(&[r("x + y"), r("2*x + 2*y")], &c),
            Err(Error::NotDominant {
                rank: 1,
                expected: 2
            })
        );
        assert_eq!(tangent_foliation(&[r("x"), r("y")], &c).unwrap().rank(), 0);
    }

    #[test]
    fn hypersurface_examples() {
        let c = xy();
        let p = |s: &str| parse_poly(&c, s).unwrap();
        assert!(invariant_hypersurface(&p("y"), &field(&c, &["x", "-y"])).unwrap());
        assert!(!invariant_hypersurface(&p("x + y"), &field(&c, &["1", "0"])).unwrap());
        assert!(invariant_hypersurface(&p("x^2 - y^2 - 1"), &field(&c, &["y", "x"])).unwrap());
        assert_eq!(
            invariant_hypersurface(&p("3"), &field(&c, &["y", "x"])),
            Err(Error::ConstantInput)
        );
        assert!(matches!(
            invariant_hypersurface(&p("y^2"), &field(&c, &["y", "x"])),
            Err(Error::NotSquarefree(_))
        ));
        // rational field x/(y+1) ∂x: denominator coprime to x
        assert!(invariant_hypersurface(&p("x"), &field(&c, &["x/(y+1)", "1"])).unwrap());
    }
}
