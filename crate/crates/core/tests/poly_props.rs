mod common;

use common::{chart, nonzero_poly, poly, ratfunc};
use foliage::poly::parse::{parse_poly, parse_ratfunc};
use foliage::poly::{content, Poly, RatFunc};
use proptest::prelude::*;

proptest! {
    #[test]
    fn ring_axioms(p in poly(3, 3, 5), q in poly(3, 3, 5), r in poly(3, 3, 5)) {
        prop_assert_eq!(&(&p + &q) * &r, &(&p * &r) + &(&q * &r));
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&(&p + &q) - &q, p.clone());
        prop_assert_eq!((&(&p + &q) * &r).to_canonical(), (&(&r * &q) + &(&r * &p)).to_canonical());
    }

    #[test]
    fn leibniz(p in poly(3, 3, 5), q in poly(3, 3, 5), i in 0usize..3) {
        let lhs = (&p * &q).derivative(i);
        let rhs = &(&p.derivative(i) * &q) + &(&p * &q.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_text_round_trips(p in poly(3, 4, 6)) {
        prop_assert_eq!(parse_poly(&chart(3), &p.to_canonical()).unwrap(), p);
    }

    #[test]
    fn ratfunc_text_round_trips(f in ratfunc(2, 2, 3)) {
        prop_assert_eq!(parse_ratfunc(&chart(2), &f.to_string()).unwrap(), f);
    }

    #[test]
    fn ratfunc_field_axioms(f in ratfunc(2, 2, 3), g in ratfunc(2, 2, 3)) {
        prop_assert_eq!(&(&f + &g) - &g, f.clone());
        if !g.is_zero() {
            prop_assert_eq!(&(&f / &g) * &g, f.clone());
        }
        prop_assert!(f.denom().leading_coefficient() == foliage::poly::int(1));
        prop_assert!(f.numer().gcd(f.denom()).unwrap().is_one());
    }

    #[test]
    fn quotient_rule(f in ratfunc(2, 2, 3), g in ratfunc(2, 2, 3), i in 0usize..2) {
        let lhs = (&f * &g).derivative(i);
        let rhs = &(&f.derivative(i) * &g) + &(&f * &g.derivative(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn division_identity(p in poly(2, 4, 6), d in nonzero_poly(2, 2, 3)) {
        let (q, r) = p.div_rem(&d).unwrap();
        prop_assert_eq!(&(&q * &d) + &r, p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn gcd_contract(p in nonzero_poly(2, 3, 4), q in nonzero_poly(2, 3, 4)) {
        let g = p.gcd(&q).unwrap();
        prop_assert!(g.divides(&p) && g.divides(&q));
        let a = p.exact_div(&g).unwrap();
        let b = q.exact_div(&g).unwrap();
        prop_assert!(content(&[a, b]).unwrap().is_one());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn gcd_recovers_planted_factor(
        a in nonzero_poly(3, 2, 3),
        b in nonzero_poly(3, 2, 3),
        c in nonzero_poly(3, 2, 3),
    ) {
        let g = (&a * &c).gcd(&(&b * &c)).unwrap();
        prop_assert!(c.divides(&g));
        prop_assert_eq!(g, (&a.gcd(&b).unwrap() * &c).normalize_unit());
    }

    #[test]
    fn squarefree_times_gcd_recovers(p in nonzero_poly(2, 3, 4), q in nonzero_poly(2, 2, 3)) {
        let p = &(&p * &q) * &q;
        let sq = p.squarefree_part().unwrap();
        let mut g = p.clone();
        for i in 0..2 {
            g = g.gcd(&p.derivative(i)).unwrap_or(g);
        }
        prop_assert_eq!((&sq * &g).normalize_unit(), p.normalize_unit());
        if !q.is_constant() {
            prop_assert!(q.squarefree_part().unwrap().divides(&sq));
        }
        prop_assert_eq!(sq.squarefree_part().unwrap(), sq.clone());
    }

    #[test]
    fn rational_evaluation_is_a_homomorphism(
        p in poly(2, 3, 4),
        q in poly(2, 3, 4),
        x in -5i64..=5,
        y in -5i64..=5,
    ) {
        let pt = [x.into(), y.into()];
        let pt: Vec<_> = pt.into_iter().map(foliage::poly::Rational::from_integer).collect();
        prop_assert_eq!(
            (&p * &q).evaluate(&pt).unwrap(),
            p.evaluate(&pt).unwrap() * q.evaluate(&pt).unwrap()
        );
        let f = RatFunc::from_poly(p.clone());
        prop_assert_eq!(f.evaluate(&pt).unwrap(), p.evaluate(&pt).unwrap());
    }
}

#[test]
fn display_examples() {
    let c = chart(2);
    let p = parse_poly(&c, "y + x^2 - 3 - 1/2*x*y").unwrap();
    assert_eq!(p.to_string(), "x^2 - 1/2*x*y + y - 3");
    assert_eq!(Poly::zero(&c).to_string(), "0");
}
