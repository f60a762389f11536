//! Seeded generators for random polynomials, fields and structured test corpora.

use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dmod::PolyMap;
use crate::foliation::invariant_hypersurface;
use crate::liecalc::VectorField;
use crate::planar::{q_polynomial, PlanarField};
use crate::poly::{int, Chart, Poly, RatFunc, Rational};

/// Random polynomial shape: degree bound, coefficient bound and term count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyShape {
    pub max_degree: u32,
    pub coeff_bound: i64,
    pub max_terms: usize,
}

impl PolyShape {
    pub const fn new(max_degree: u32, coeff_bound: i64, max_terms: usize) -> Self {
        Self {
            max_degree,
            coeff_bound,
            max_terms,
        }
    }
}

impl Default for PolyShape {
    fn default() -> Self {
        Self::new(3, 9, 4)
    }
}

/// `phi : X → Y` with fields `v` on `X` and `w` on `Y`.
#[derive(Clone, Debug)]
pub struct MorphismSample {
    pub phi: PolyMap,
    pub v: VectorField,
    pub w: VectorField,
}

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.random_range(lo..=hi)
    }

    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let c = self.int(-bound, bound);
            if c != 0 {
                return c;
            }
        }
    }

    /// Exponent vector of total degree exactly `d`.
    fn monomial(&mut self, nvars: usize, d: u32) -> Vec<u32> {
        let mut e = vec![0u32; nvars];
        for _ in 0..d {
            let i = self.rng.random_range(0..nvars);
            e[i] += 1;
        }
        e
    }

    /// Sum of up to `max_terms` random terms; may be zero.
    pub fn poly(&mut self, chart: &Chart, shape: PolyShape) -> Poly {
        let terms = self.rng.random_range(1..=shape.max_terms.max(1));
        let mut out = Vec::with_capacity(terms);
        for _ in 0..terms {
            let d = self.rng.random_range(0..=shape.max_degree);
            let e = self.monomial(chart.len(), d);
            out.push((e, int(self.nonzero_int(shape.coeff_bound))));
        }
        Poly::from_terms(chart, out)
    }

    pub fn nonzero_poly(&mut self, chart: &Chart, shape: PolyShape) -> Poly {
        loop {
            let p = self.poly(chart, shape);
            if !p.is_zero() {
                return p;
            }
        }
    }

    /// Polynomial whose total degree is exactly `d`.
    pub fn poly_of_degree(&mut self, chart: &Chart, d: u32, shape: PolyShape) -> Poly {
        loop {
            let e = self.monomial(chart.len(), d);
            let lead = Poly::from_terms(chart, [(e, int(self.nonzero_int(shape.coeff_bound)))]);
            let rest = self.poly(
                chart,
                PolyShape {
                    max_degree: d,
                    ..shape
                },
            );
            let p = &lead + &rest;
            if p.total_degree() == Some(d) {
                return p;
            }
        }
    }

    pub fn field(&mut self, chart: &Chart, shape: PolyShape) -> VectorField {
        let coeffs = (0..chart.len()).map(|_| self.poly(chart, shape)).collect();
        VectorField::from_polys(chart, coeffs).expect("one coefficient per variable")
    }

    pub fn nonzero_field(&mut self, chart: &Chart, shape: PolyShape) -> VectorField {
        loop {
            let v = self.field(chart, shape);
            if !v.is_zero() {
                return v;
            }
        }
    }

    pub fn rational(&mut self, bound: i64) -> Rational {
        Rational::new(self.int(-bound, bound).into(), self.int(1, bound).into())
    }

    pub fn int_matrix(&mut self, n: usize, bound: i64) -> Vec<Vec<i64>> {
        (0..n)
            .map(|_| (0..n).map(|_| self.int(-bound, bound)).collect())
            .collect()
    }

    /// A valid D-morphism of product type.
    ///
    /// `X = Y × Z`, `v = lift(w₀) + u` with `u` vertical, `φ = ψ ∘ π` for a
    /// triangular automorphism `ψ` of `Y`, and `w = ψ_* w₀`.
    pub fn dmorphism(&mut self) -> MorphismSample {
        let q = self.rng.random_range(1..=2usize);
        let r = self.rng.random_range(1..=2usize);
        let y_names: Vec<String> = (1..=q).map(|i| format!("u{i}")).collect();
        let x_names: Vec<String> = (1..=q)
            .map(|i| format!("x{i}"))
            .chain((1..=r).map(|i| format!("z{i}")))
            .collect();
        let y = Chart::new(y_names).expect("valid chart");
        let x = Chart::new(x_names).expect("valid chart");
        let shape = PolyShape::new(2, 5, 3);

        let w0: Vec<Poly> = (0..q).map(|_| self.poly(&y, shape)).collect();

        // ψ(u)ᵢ = aᵢ uᵢ + gᵢ(u₁, …, u_{i−1}) + bᵢ
        let mut psi = Vec::with_capacity(q);
        let mut psi_inv: Vec<Poly> = Vec::with_capacity(q);
        for i in 0..q {
            let a = int(self.nonzero_int(3));
            let g = if i == 0 {
                Poly::zero(&y)
            } else {
                let g = self.poly(&y, PolyShape::new(2, 4, 2));
                Poly::from_terms(
                    &y,
                    g.terms()
                        .filter(|(m, _)| m.exponents()[i..].iter().all(|&e| e == 0))
                        .map(|(m, c)| (m.exponents().to_vec(), c.clone())),
                )
            };
            let b = int(self.int(-4, 4));
            let comp = &(&Poly::var(&y, i).scale(&a) + &g) + &Poly::constant(&y, b.clone());
            // uᵢ = (yᵢ − gᵢ∘ψ⁻¹ − bᵢ) / aᵢ
            let g_inv = g
                .substitute(
                    &(0..q)
                        .map(|k| {
                            if k < i {
                                psi_inv[k].clone()
                            } else {
                                Poly::zero(&y)
                            }
                        })
                        .collect::<Vec<_>>(),
                )
                .expect("arity matches");
            let inv = (&(&Poly::var(&y, i) - &g_inv) - &Poly::constant(&y, b))
                .scale(&(Rational::one() / a));
            psi.push(comp);
            psi_inv.push(inv);
        }

        // w = (dψ · w₀) ∘ ψ⁻¹
        let w: Vec<Poly> = (0..q)
            .map(|j| {
                let dpsi_w0 = (0..q).fold(Poly::zero(&y), |acc, k| {
                    &acc + &(&psi[j].derivative(k) * &w0[k])
                });
                dpsi_w0.substitute(&psi_inv).expect("arity matches")
            })
            .collect();

        let proj: Vec<Poly> = (0..q).map(|i| Poly::var(&x, i)).collect();
        let phi: Vec<Poly> = psi
            .iter()
            .map(|p| p.substitute(&proj).expect("arity matches"))
            .collect();

        let mut v: Vec<Poly> = w0
            .iter()
            .map(|p| p.substitute(&proj).expect("arity matches"))
            .collect();
        for _ in 0..r {
            v.push(self.poly(&x, shape));
        }

        MorphismSample {
            phi: PolyMap::new(&x, &y, phi).expect("component per target variable"),
            v: VectorField::from_polys(&x, v).expect("one coefficient per variable"),
            w: VectorField::from_polys(&y, w).expect("one coefficient per variable"),
        }
    }

    /// A product-type morphism with one component of `w` perturbed, so that
    /// `dφ(v) ≠ w ∘ φ`. Returns the sample and the perturbed coordinate.
    pub fn non_morphism(&mut self) -> (MorphismSample, usize) {
        let mut s = self.dmorphism();
        let y = s.phi.target().clone();
        let j = self.rng.random_range(0..y.len());
        let bump = self.nonzero_poly(&y, PolyShape::new(2, 5, 2));
        let mut w: Vec<Poly> = s.w.polynomial_coefficients().expect("polynomial field");
        w[j] = &w[j] + &bump;
        s.w = VectorField::from_polys(&y, w).expect("one coefficient per variable");
        (s, j)
    }

    /// `m` random polynomial components on `chart` whose Jacobian has rank `m`.
    pub fn dominant_map(&mut self, chart: &Chart, m: usize, shape: PolyShape) -> Vec<RatFunc> {
        loop {
            let comps: Vec<RatFunc> = (0..m)
                .map(|_| RatFunc::from_poly(self.nonzero_poly(chart, shape)))
                .collect();
            let rows = comps
                .iter()
                .map(|f| (0..chart.len()).map(|i| f.derivative(i)).collect())
                .collect();
            if crate::linalg::RatMatrix::new(chart, rows, chart.len()).rank() == m {
                return comps;
            }
        }
    }

    /// Coprime pair of exact degree `n` with `Q ≢ 0`.
    pub fn planar_field(&mut self, n: u32, shape: PolyShape) -> PlanarField {
        let chart = Chart::new(["x", "y"]).expect("valid chart");
        loop {
            let a = self.poly_of_degree(&chart, n, shape);
            let b = self.poly_of_degree(&chart, n, shape);
            let Ok(v) = PlanarField::new(a, b) else {
                continue;
            };
            if !q_polynomial(&v).is_zero() {
                return v;
            }
        }
    }

    /// Invariant curve and planar field, built either as a level set of a
    /// Hamiltonian `H` with `v = (−H_y, H_x)` or from the Darboux form
    /// `v = g·(−C_y, C_x) + C·(p₁, p₂)`.
    pub fn invariant_curve_pair(&mut self) -> (Poly, PlanarField) {
        let chart = Chart::new(["x", "y"]).expect("valid chart");
        loop {
            let h = self.nonzero_poly(&chart, PolyShape::new(3, 6, 4));
            if h.is_constant() {
                continue;
            }
            let (hx, hy) = (h.derivative(0), h.derivative(1));
            let (curve, a, b) = if self.rng.random_bool(0.5) {
                let g = self.nonzero_poly(&chart, PolyShape::new(1, 4, 2));
                let p1 = self.poly(&chart, PolyShape::new(1, 4, 2));
                let p2 = self.poly(&chart, PolyShape::new(1, 4, 2));
                let a = &(&g * &-&hy) + &(&h * &p1);
                let b = &(&g * &hx) + &(&h * &p2);
                (h, a, b)
            } else {
                let level = &h - &Poly::constant(&chart, int(self.int(-5, 5)));
                (level, -&hy, hx)
            };
            if curve.squarefree_part().ok() != Some(curve.normalize_unit()) {
                continue;
            }
            let Ok(v) = PlanarField::new(a, b) else {
                continue;
            };
            if q_polynomial(&v).is_zero() {
                continue;
            }
            if invariant_hypersurface(&curve, &v.to_field()) == Ok(true) {
                return (curve, v);
            }
        }
    }
}
