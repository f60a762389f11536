use foliage::liecalc::apply_derivation;
use foliage::planar::{
    infinity_analysis, infinity_chart, invariant_curve_constraint, q_polynomial, to_infinity_chart,
    CurveVerdict,
};
use foliage::poly::{Poly, RatFunc};
use foliage::sample::{PolyShape, Sampler};
use proptest::prelude::*;

/// `P(y/x)·x^{n+1}` rebuilt from the coefficients of `P`.
fn homogenize(p: &Poly, degree: u32, chart: &foliage::poly::Chart) -> Poly {
    Poly::from_terms(
        chart,
        p.terms().map(|(m, c)| {
            let k = m.exponents()[0];
            (vec![degree - k, k], c.clone())
        }),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transform_matches_substitution(seed in any::<u64>(), n in 1u32..=3) {
        let v = Sampler::new(seed).planar_field(n, PolyShape::new(n, 9, 4));
        let (ws, wt) = to_infinity_chart(&v);
        let st = infinity_chart();
        let s = RatFunc::var(st, 0);
        let t = RatFunc::var(st, 1);
        let x = RatFunc::var(v.chart(), 0);
        let y = RatFunc::var(v.chart(), 1);
        let field = v.to_field();
        // ṡ = δ(1/x), ṫ = δ(y/x), in the coordinates x = 1/s, y = t/s
        let sdot = apply_derivation(&field, &x.recip().unwrap()).unwrap();
        let tdot = apply_derivation(&field, &(&y / &x)).unwrap();
        let images = [s.recip().unwrap(), &t / &s];
        let scale = RatFunc::from_poly(Poly::var(st, 0).pow(n - 1));
        prop_assert_eq!(&sdot.compose(&images).unwrap() * &scale, RatFunc::from_poly(ws.clone()));
        prop_assert_eq!(&tdot.compose(&images).unwrap() * &scale, RatFunc::from_poly(wt.clone()));
        prop_assert!(Poly::var(st, 0).divides(&ws));
    }

    #[test]
    fn q_is_homogeneous_of_degree_n_plus_one(seed in any::<u64>(), n in 1u32..=3) {
        let v = Sampler::new(seed).planar_field(n, PolyShape::new(n, 9, 4));
        let q = q_polynomial(&v);
        prop_assert!(q.is_homogeneous());
        prop_assert_eq!(q.total_degree(), Some(n + 1));
        let r = infinity_analysis(&v).unwrap();
        prop_assert_eq!(&homogenize(&r.p, n + 1, v.chart()), &q);
        for pt in &r.rational_points {
            prop_assert!(q.evaluate(&[pt.x.clone(), pt.y.clone()]).unwrap() == foliage::poly::int(0));
        }
    }

    #[test]
    fn invariant_curves_are_never_excluded(seed in any::<u64>()) {
        let (c, v) = Sampler::new(seed).invariant_curve_pair();
        prop_assert_eq!(invariant_curve_constraint(&c, &v).unwrap(), CurveVerdict::Consistent);
    }
}
