//! D-module structures on the free trivialisation given by coordinate fields.
//!
//! A [`Connection`] stores a derivation `δ` (as a vector field) and a square
//! matrix `M`, and acts on coefficient columns by `∇(f) = δ(f) + M·f`.

use crate::error::{Error, Result};
use crate::liecalc::{apply_derivation, lie_connection_matrix, VectorField};
use crate::linalg::RatMatrix;
use crate::poly::{Chart, Poly, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    base: VectorField,
    matrix: RatMatrix,
}

impl Connection {
    pub fn new(base: VectorField, matrix: RatMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidArgument(format!(
                "connection matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        base.chart().ensure_same(matrix.chart())?;
        Ok(Self { base, matrix })
    }

    /// `∇₀`: the derivation applied componentwise on a free module of the given rank.
    pub fn trivial(base: VectorField, rank: usize) -> Self {
        let matrix = RatMatrix::zeros(base.chart(), rank, rank);
        Self { base, matrix }
    }

    /// The Lie derivative `𝓛_v = ∇₀ − A` on the tangent sheaf, `aᵢⱼ = ∂vᵢ/∂xⱼ`.
    pub fn lie_derivative(v: &VectorField) -> Self {
        Self {
            base: v.clone(),
            matrix: lie_connection_matrix(v).neg(),
        }
    }

    pub fn chart(&self) -> &Chart {
        self.base.chart()
    }

    pub fn base_field(&self) -> &VectorField {
        &self.base
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.nrows()
    }

    /// `∇ − ∇′` as a matrix; requires the same base derivation.
    pub fn difference(&self, other: &Connection) -> Result<RatMatrix> {
        if self.base != other.base {
            return Err(Error::InvalidArgument(
                "connections over different derivations".into(),
            ));
        }
        Ok(self.matrix.add(&other.matrix.neg()))
    }
}

/// `∇(Σ fᵢ εᵢ) = Σ δ(fᵢ) εᵢ + M·(f₁,…,fₙ)`.
pub fn nabla_apply(conn: &Connection, section: &[RatFunc]) -> Result<Vec<RatFunc>> {
    if section.len() != conn.rank() {
        return Err(Error::LengthMismatch {
            expected: conn.rank(),
            got: section.len(),
        });
    }
    let action = conn.matrix.mul_vec(section);
    section
        .iter()
        .zip(action)
        .map(|(f, a)| Ok(&apply_derivation(&conn.base, f)? + &a))
        .collect()
}

/// Polynomial map from a source chart to a target chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    source: Chart,
    target: Chart,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source: &Chart, target: &Chart, components: Vec<Poly>) -> Result<Self> {
        if components.len() != target.len() {
            return Err(Error::LengthMismatch {
                expected: target.len(),
                got: components.len(),
            });
        }
        for c in &components {
            source.ensure_same(c.chart())?;
        }
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            components,
        })
    }

    pub fn identity(chart: &Chart) -> Self {
        Self {
            source: chart.clone(),
            target: chart.clone(),
            components: (0..chart.len()).map(|i| Poly::var(chart, i)).collect(),
        }
    }

    pub fn source(&self) -> &Chart {
        &self.source
    }

    pub fn target(&self) -> &Chart {
        &self.target
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// `(∂φᵢ/∂xₖ)`, rows indexed by target coordinates.
    pub fn jacobian(&self) -> RatMatrix {
        let rows = self
            .components
            .iter()
            .map(|p| {
                (0..self.source.len())
                    .map(|k| RatFunc::from_poly(p.derivative(k)))
                    .collect()
            })
            .collect();
        RatMatrix::new(&self.source, rows, self.source.len())
    }

    /// `f ∘ φ` for a function on the target.
    pub fn pull_function(&self, f: &RatFunc) -> Result<RatFunc> {
        self.target.ensure_same(f.chart())?;
        Ok(f.substitute(&self.components)?)
    }

    /// `dφ(v)` as a column of functions on the source.
    pub fn push_field(&self, v: &VectorField) -> Result<Vec<RatFunc>> {
        self.source.ensure_same(v.chart())?;
        Ok(self.jacobian().mul_vec(v.coefficients()))
    }
}

/// Pull-back of a connection on the target: entries `aᵢⱼ ∘ φ`, base derivation `v`.
pub fn pullback_connection(
    conn: &Connection,
    phi: &PolyMap,
    v: &VectorField,
) -> Result<Connection> {
    conn.chart().ensure_same(phi.target())?;
    phi.source().ensure_same(v.chart())?;
    let matrix = conn
        .matrix
        .try_map(phi.source(), |a| phi.pull_function(a))?;
    Connection::new(v.clone(), matrix)
}

/// Outcome of [`check_dmorphism`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMorphismCheck {
    pub holds: bool,
    /// First entry `(row, column, lhs, rhs)` where `dφ∘𝓛_v` and `φ*𝓛_w∘dφ` differ.
    pub witness: Option<(usize, usize, String, String)>,
}

/// Checks that `dφ : (Θ_X, 𝓛_v) → φ*(Θ_Y, 𝓛_w)` commutes with the connections.
///
/// With `∇ = ∇₀ + M` on both sides the identity reads
/// `J·M_X − δ_v(J) = M_Y^φ·J`, where `J` is the Jacobian of `φ`.
pub fn check_dmorphism(phi: &PolyMap, v: &VectorField, w: &VectorField) -> Result<DMorphismCheck> {
    phi.source().ensure_same(v.chart())?;
    phi.target().ensure_same(w.chart())?;
    let pushed = phi.push_field(v)?;
    for (j, (lhs, wj)) in pushed.iter().zip(w.coefficients()).enumerate() {
        let rhs = phi.pull_function(wj)?;
        if *lhs != rhs {
            return Err(Error::MorphismPrecondition {
                coordinate: j + 1,
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    let jac = phi.jacobian();
    let lie_x = Connection::lie_derivative(v);
    let lie_y = pullback_connection(&Connection::lie_derivative(w), phi, v)?;
    let d_jac = jac.try_map(phi.source(), |a| apply_derivation(v, a))?;
    let lhs = jac.mul(lie_x.matrix()).add(&d_jac.neg());
    let rhs = lie_y.matrix().mul(&jac);
    for i in 0..lhs.nrows() {
        for k in 0..lhs.ncols() {
            if lhs.get(i, k) != rhs.get(i, k) {
                return Ok(DMorphismCheck {
                    holds: false,
                    witness: Some((i, k, lhs.get(i, k).to_string(), rhs.get(i, k).to_string())),
                });
            }
        }
    }
    Ok(DMorphismCheck {
        holds: true,
        witness: None,
    })
}
