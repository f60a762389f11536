//! Recursive primitive-PRS gcd.
//!
//! A polynomial in `x_1..x_n` is viewed as univariate in one variable with
//! coefficients in the remaining ones. Contents are taken recursively, and the
//! remainder sequence is kept primitive to bound coefficient growth.

use super::Poly;

/// GCD up to a rational unit. Returns the zero polynomial only if both inputs are zero.
pub(super) fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return b.normalize_unit();
    }
    if b.is_zero() {
        return a.normalize_unit();
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one(a.chart());
    }
    if a == b {
        return a.normalize_unit();
    }
    let n = a.nvars();
    let Some(v) = (0..n).find(|&i| a.degree_in(i) > 0 || b.degree_in(i) > 0) else {
        return Poly::one(a.chart());
    };
    if a.degree_in(v) == 0 {
        return gcd(a, &content_in(b, v));
    }
    if b.degree_in(v) == 0 {
        return gcd(&content_in(a, v), b);
    }

    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = gcd(&ca, &cb);
    let mut p = a.exact_div(&ca).expect("content divides");
    let mut q = b.exact_div(&cb).expect("content divides");
    if p.degree_in(v) < q.degree_in(v) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        let r = pseudo_rem(&p, &q, v);
        if r.is_zero() {
            break;
        }
        if r.degree_in(v) == 0 {
            q = Poly::one(a.chart());
            break;
        }
        p = q;
        q = primitive_in(&r, v);
    }
    let g = primitive_in(&q, v);
    (&c * &g).normalize_unit()
}

/// GCD of the coefficients of `p` viewed as a polynomial in variable `v`.
fn content_in(p: &Poly, v: usize) -> Poly {
    let d = p.degree_in(v);
    let mut g = Poly::zero(p.chart());
    for k in (0..=d).rev() {
        let c = p.coeff_in(v, k);
        if c.is_zero() {
            continue;
        }
        g = gcd(&g, &c);
        if g.is_constant() {
            return Poly::one(p.chart());
        }
    }
    g
}

fn primitive_in(p: &Poly, v: usize) -> Poly {
    let c = content_in(p, v);
    p.exact_div(&c).expect("content divides").normalize_unit()
}

/// Pseudo-remainder of `p` by `q` in variable `v`.
fn pseudo_rem(p: &Poly, q: &Poly, v: usize) -> Poly {
    let dq = q.degree_in(v);
    let lq = q.coeff_in(v, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.degree_in(v) >= dq {
        let dr = r.degree_in(v);
        let lr = r.coeff_in(v, dr);
        let mut shift = vec![0u32; p.nvars()];
        shift[v] = dr - dq;
        let xv = Poly::from_terms(p.chart(), [(shift, num_traits::One::one())]);
        r = &(&lq * &r) - &(&(&lr * &xv) * q);
        // keep the integer content small
        if !r.is_zero() {
            r = r.normalize_unit();
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::super::{parse::parse_poly, Chart};
    use super::*;

    #[test]
    fn univariate() {
        let c = Chart::new(["x"]).unwrap();
        let a = parse_poly(&c, "x^4 - 1").unwrap();
        let b = parse_poly(&c, "x^6 - 1").unwrap();
        assert_eq!(gcd(&a, &b), parse_poly(&c, "x^2 - 1").unwrap());
    }

    #[test]
    fn content_in_variable() {
        let c = Chart::new(["x", "y"]).unwrap();
        let p = parse_poly(&c, "x^2*y^2 + x*y^2 - 2*x^2*y").unwrap();
        // as a polynomial in y: coefficients x^2 + x, -2x^2, 0
        assert_eq!(content_in(&p, 1), parse_poly(&c, "x").unwrap());
    }
}
