#![allow(dead_code)]

pub mod golden;

use foliage::liecalc::VectorField;
use foliage::poly::{int, Chart, Poly, RatFunc};
use proptest::prelude::*;

pub fn chart(n: usize) -> Chart {
    Chart::new(["x", "y", "z", "w"][..n].iter().copied()).unwrap()
}

/// Polynomials in `n` variables with total degree at most `deg` and integer
/// coefficients in `[-9, 9]`.
pub fn poly(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=deg, n), -9i64..=9);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let c = chart(n);
        Poly::from_terms(
            &c,
            terms.into_iter().map(|(mut e, k)| {
                while e.iter().sum::<u32>() > deg {
                    let i = e.iter().position(|&x| x > 0).unwrap();
                    e[i] -= 1;
                }
                (e, int(k))
            }),
        )
    })
}

pub fn nonzero_poly(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = Poly> {
    poly(n, deg, max_terms).prop_filter("non-zero", |p| !p.is_zero())
}

pub fn field(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = VectorField> {
    prop::collection::vec(poly(n, deg, max_terms), n)
        .prop_map(move |c| VectorField::from_polys(&chart(n), c).unwrap())
}

/// Quotient of two polynomials with a non-zero denominator.
pub fn ratfunc(n: usize, deg: u32, max_terms: usize) -> impl Strategy<Value = RatFunc> {
    (poly(n, deg, max_terms), nonzero_poly(n, deg, max_terms))
        .prop_map(|(a, b)| RatFunc::new(a, b).unwrap())
}
