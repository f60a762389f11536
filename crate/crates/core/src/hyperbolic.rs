//! Suspension of the cat map `A = [[2, 1], [1, 1]]` on the 2-torus.
//!
//! Points are `(x, y, r)` with `(x, y)` on the torus and roof coordinate `r ∈ [0, 1)`.
//! Crossing `r = 1` applies `A` to the base. Tangent vectors are `(u_x, u_y, u_r)`,
//! and the derivative of the time-`t` map is `diag(Aᵏ, 1)` with `k` the number of
//! roof crossings.

use nalgebra::{Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::par::Exec;

pub const CAT_MAP: [[i64; 2]; 2] = [[2, 1], [1, 1]];

/// Tolerance for recognising a periodic orbit.
pub const PERIOD_TOLERANCE: f64 = 1e-9;

/// Tolerance for invariant lines and planes (sine of the angle).
pub const INVARIANCE_TOLERANCE: f64 = 1e-9;

/// Golden ratio.
fn phi() -> f64 {
    (1.0 + 5f64.sqrt()) / 2.0
}

/// Contracting eigenvalue `(3 − √5)/2`.
pub fn lambda_s() -> f64 {
    2.0 / (3.0 + 5f64.sqrt())
}

/// Expanding eigenvalue `(3 + √5)/2`.
pub fn lambda_u() -> f64 {
    (3.0 + 5f64.sqrt()) / 2.0
}

fn wrap(x: f64) -> f64 {
    let r = x - x.floor();
    if r >= 1.0 {
        0.0
    } else {
        r
    }
}

fn circle_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(1.0);
    d.min(1.0 - d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SuspensionState {
    pub base: [f64; 2],
    pub roof: f64,
}

impl SuspensionState {
    pub fn new(base: [f64; 2], roof: f64) -> Self {
        Self {
            base: [wrap(base[0]), wrap(base[1])],
            roof: wrap(roof),
        }
    }

    /// The fixed point `((0, 0), 0)`, periodic with period 1.
    pub fn fixed_point() -> Self {
        Self::new([0.0, 0.0], 0.0)
    }

    /// Largest coordinate distance on the circle.
    pub fn distance(&self, other: &SuspensionState) -> f64 {
        circle_distance(self.base[0], other.base[0])
            .max(circle_distance(self.base[1], other.base[1]))
            .max(circle_distance(self.roof, other.roof))
    }
}

fn cat_step(p: [f64; 2]) -> [f64; 2] {
    [wrap(2.0 * p[0] + p[1]), wrap(p[0] + p[1])]
}

fn cat_step_inverse(p: [f64; 2]) -> [f64; 2] {
    [wrap(p[0] - p[1]), wrap(2.0 * p[1] - p[0])]
}

/// Number of roof crossings during time `t` starting from roof height `roof`.
pub fn crossings(roof: f64, t: f64) -> i64 {
    (roof + t).floor() as i64
}

pub fn suspension_flow(state: &SuspensionState, t: f64) -> SuspensionState {
    let total = state.roof + t;
    let k = total.floor();
    let mut base = state.base;
    let steps = k as i64;
    if steps >= 0 {
        for _ in 0..steps {
            base = cat_step(base);
        }
    } else {
        for _ in 0..-steps {
            base = cat_step_inverse(base);
        }
    }
    SuspensionState::new(base, total - k)
}

/// Orthonormal eigenframe of the cat map together with the flow direction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TangentFrame {
    pub e_ss: [f64; 2],
    pub e_su: [f64; 2],
    pub e_flow: [f64; 3],
    pub lambda_s: f64,
    pub lambda_u: f64,
}

impl TangentFrame {
    pub fn canonical() -> Self {
        let g = phi();
        let ns = (1.0 + g * g).sqrt();
        let nu = (1.0 + 1.0 / (g * g)).sqrt();
        Self {
            e_ss: [1.0 / ns, -g / ns],
            e_su: [1.0 / nu, 1.0 / (g * nu)],
            e_flow: [0.0, 0.0, 1.0],
            lambda_s: lambda_s(),
            lambda_u: lambda_u(),
        }
    }
}

/// Tangent vector in frame coordinates `ss·e_ss + su·e_su + flow·e_flow`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrameVector {
    pub ss: f64,
    pub su: f64,
    pub flow: f64,
}

impl FrameVector {
    pub const E_SS: FrameVector = FrameVector {
        ss: 1.0,
        su: 0.0,
        flow: 0.0,
    };
    pub const E_SU: FrameVector = FrameVector {
        ss: 0.0,
        su: 1.0,
        flow: 0.0,
    };
    pub const E_FLOW: FrameVector = FrameVector {
        ss: 0.0,
        su: 0.0,
        flow: 1.0,
    };

    pub fn from_cartesian(u: [f64; 3]) -> Self {
        let f = TangentFrame::canonical();
        Self {
            ss: u[0] * f.e_ss[0] + u[1] * f.e_ss[1],
            su: u[0] * f.e_su[0] + u[1] * f.e_su[1],
            flow: u[2],
        }
    }

    pub fn to_cartesian(&self) -> [f64; 3] {
        let f = TangentFrame::canonical();
        [
            self.ss * f.e_ss[0] + self.su * f.e_su[0],
            self.ss * f.e_ss[1] + self.su * f.e_su[1],
            self.flow,
        ]
    }

    /// `ln ‖u‖`, safe against overflow of the squares.
    pub fn log_norm(&self) -> f64 {
        let m = self.ss.abs().max(self.su.abs()).max(self.flow.abs());
        if m == 0.0 {
            return f64::NEG_INFINITY;
        }
        let (a, b, c) = (self.ss / m, self.su / m, self.flow / m);
        m.ln() + 0.5 * (a * a + b * b + c * c).ln()
    }
}

/// `dφ_t(u)` in frame coordinates: exact scaling of each component.
pub fn differential_flow_frame(u: FrameVector, t: f64, state: &SuspensionState) -> FrameVector {
    let k = crossings(state.roof, t) as i32;
    FrameVector {
        ss: u.ss * lambda_s().powi(k),
        su: u.su * lambda_u().powi(k),
        flow: u.flow,
    }
}

/// `dφ_t(u)` for a Cartesian tangent vector.
pub fn differential_flow(u: [f64; 3], t: f64, state: &SuspensionState) -> [f64; 3] {
    differential_flow_frame(FrameVector::from_cartesian(u), t, state).to_cartesian()
}

/// Matrix of `dφ_t` at `state`, assembled from the spectral projectors of `A`.
pub fn differential_matrix(t: f64, state: &SuspensionState) -> Matrix3<f64> {
    let f = TangentFrame::canonical();
    let k = crossings(state.roof, t) as i32;
    let (ls, lu) = (lambda_s().powi(k), lambda_u().powi(k));
    let mut m = Matrix3::zeros();
    for i in 0..2 {
        for j in 0..2 {
            m[(i, j)] = ls * f.e_ss[i] * f.e_ss[j] + lu * f.e_su[i] * f.e_su[j];
        }
    }
    m[(2, 2)] = 1.0;
    m
}

/// Integer power of the cat map, computed exactly while it fits in `i64`.
pub fn cat_power(k: u32) -> [[i64; 2]; 2] {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..k {
        m = [
            [2 * m[0][0] + m[1][0], 2 * m[0][1] + m[1][1]],
            [m[0][0] + m[1][0], m[0][1] + m[1][1]],
        ];
    }
    m
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnosovConfig {
    pub samples: usize,
    pub t_max: f64,
    pub seed: u64,
    /// Direction fed as the contracting bundle.
    pub stable: FrameVector,
    /// Direction fed as the expanding bundle.
    pub unstable: FrameVector,
}

impl AnosovConfig {
    pub fn new(samples: usize, t_max: f64, seed: u64) -> Self {
        Self {
            samples,
            t_max,
            seed,
            stable: FrameVector::E_SS,
            unstable: FrameVector::E_SU,
        }
    }

    /// Feeds the unstable bundle as stable and vice versa.
    pub fn swapped(self) -> Self {
        Self {
            stable: self.unstable,
            unstable: self.stable,
            ..self
        }
    }
}

impl Default for AnosovConfig {
    fn default() -> Self {
        Self::new(50, 100.0, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AnosovReport {
    pub samples: usize,
    pub t_max: f64,
    /// `exp` of the fitted growth rate of the stable direction.
    pub lambda_est: f64,
    /// `exp` of the fitted growth rate of the unstable direction.
    pub lambda_u_est: f64,
    /// Fitted growth rate of `ln ‖dφ_t(e_flow)‖`.
    pub flow_exponent: f64,
    /// Smallest `C` with `‖dφ_t e_s‖ ≤ C λ_sᵗ` and `‖dφ_t e_u‖ ≥ C⁻¹ λ_uᵗ` on the sampled times.
    pub c_est: f64,
    pub pass: bool,
}

/// Accumulator for a least-squares line through `(t, y)`.
#[derive(Clone, Copy, Debug, Default)]
struct Fit {
    n: f64,
    st: f64,
    sy: f64,
    stt: f64,
    sty: f64,
}

impl Fit {
    fn push(&mut self, t: f64, y: f64) {
        self.n += 1.0;
        self.st += t;
        self.sy += y;
        self.stt += t * t;
        self.sty += t * y;
    }

    fn merge(&mut self, o: &Fit) {
        self.n += o.n;
        self.st += o.st;
        self.sy += o.sy;
        self.stt += o.stt;
        self.sty += o.sty;
    }

    fn slope(&self) -> f64 {
        (self.n * self.sty - self.st * self.sy) / (self.n * self.stt - self.st * self.st)
    }
}

struct SampleStats {
    stable: Fit,
    unstable: Fit,
    flow: Fit,
    log_c: f64,
}

const FINE_STEP: f64 = 0.125;

fn sample_stats(cfg: &AnosovConfig, state: &SuspensionState) -> SampleStats {
    let mut stable = Fit::default();
    let mut unstable = Fit::default();
    let mut flow = Fit::default();
    let s0 = cfg.stable.log_norm();
    let u0 = cfg.unstable.log_norm();
    // Integer times see exactly t crossings from any roof height in [0, 1).
    for i in 0..=(cfg.t_max.floor() as u64) {
        let t = i as f64;
        stable.push(
            t,
            differential_flow_frame(cfg.stable, t, state).log_norm() - s0,
        );
        unstable.push(
            t,
            differential_flow_frame(cfg.unstable, t, state).log_norm() - u0,
        );
        flow.push(
            t,
            differential_flow_frame(FrameVector::E_FLOW, t, state).log_norm(),
        );
    }
    let (ls, lu) = (lambda_s().ln(), lambda_u().ln());
    let mut log_c = 0.0f64;
    for i in 0..=((cfg.t_max / FINE_STEP).floor() as u64) {
        let t = i as f64 * FINE_STEP;
        let s = differential_flow_frame(cfg.stable, t, state).log_norm() - s0;
        let u = differential_flow_frame(cfg.unstable, t, state).log_norm() - u0;
        log_c = log_c.max(s - t * ls).max(t * lu - u);
    }
    SampleStats {
        stable,
        unstable,
        flow,
        log_c,
    }
}

/// Random initial states for the configuration, reproducible from the seed.
pub fn sample_states(samples: usize, seed: u64) -> Vec<SuspensionState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| SuspensionState::new([rng.random(), rng.random()], rng.random()))
        .collect()
}

pub fn verify_anosov_bounds(samples: usize, t_max: f64, seed: u64) -> Result<AnosovReport> {
    verify_anosov_bounds_with(&AnosovConfig::new(samples, t_max, seed), Exec::default())
}

pub fn verify_anosov_bounds_with(cfg: &AnosovConfig, exec: Exec) -> Result<AnosovReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    if !cfg.t_max.is_finite() || cfg.t_max < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "t_max must be a finite number at least 1, got {}",
            cfg.t_max
        )));
    }
    let states = sample_states(cfg.samples, cfg.seed);
    let stats = exec.map(&states, |s| sample_stats(cfg, s));
    let mut stable = Fit::default();
    let mut unstable = Fit::default();
    let mut flow = Fit::default();
    let mut log_c = 0.0f64;
    for s in &stats {
        stable.merge(&s.stable);
        unstable.merge(&s.unstable);
        flow.merge(&s.flow);
        log_c = log_c.max(s.log_c);
    }
    let lambda_est = stable.slope().exp();
    let lambda_u_est = unstable.slope().exp();
    let c_est = log_c.exp();
    let pass = (lambda_est - lambda_s()).abs() < 1e-6
        && (lambda_u_est - lambda_u()).abs() < 1e-6
        && c_est.is_finite();
    Ok(AnosovReport {
        samples: cfg.samples,
        t_max: cfg.t_max,
        lambda_est,
        lambda_u_est,
        flow_exponent: flow.slope(),
        c_est,
        pass,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LineLabel {
    #[serde(rename = "W^ss")]
    StrongStable,
    #[serde(rename = "F")]
    Flow,
    #[serde(rename = "W^su")]
    StrongUnstable,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantLine {
    pub label: LineLabel,
    pub eigenvalue: f64,
    /// Unit vector, first non-negligible component positive.
    pub direction: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PlaneLabel {
    /// `F ⊕ W^ss`
    #[serde(rename = "W^s")]
    Stable,
    /// `F ⊕ W^su`
    #[serde(rename = "W^u")]
    Unstable,
    /// `W^ss ⊕ W^su`
    #[serde(rename = "W^ss+W^su")]
    Transverse,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InvariantPlane {
    pub label: PlaneLabel,
    pub spanning: [[f64; 3]; 2],
    pub normal: [f64; 3],
}

/// Matrix of `dφ_T` at a periodic state.
pub fn period_matrix(state: &SuspensionState, period: f64) -> Result<Matrix3<f64>> {
    if !period.is_finite() || period <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "period must be positive, got {period}"
        )));
    }
    let distance = suspension_flow(state, period).distance(state);
    if distance > PERIOD_TOLERANCE {
        return Err(Error::NonPeriodic { distance });
    }
    Ok(differential_matrix(period, state))
}

fn oriented(v: Vector3<f64>) -> [f64; 3] {
    let v = v.normalize();
    let lead = v.iter().copied().find(|c| c.abs() > 1e-12).unwrap_or(1.0);
    let v = if lead < 0.0 { -v } else { v };
    v.map(|c| if c.abs() <= 1e-12 { 0.0 } else { c }).into()
}

fn eigenline(m: &Matrix3<f64>, lambda: f64) -> Result<Vector3<f64>> {
    let shifted = m - Matrix3::identity() * lambda;
    let svd = shifted.svd(false, true);
    let scale = m.norm().max(1.0);
    let small: Vec<usize> = (0..3)
        .filter(|&i| svd.singular_values[i] <= 1e-9 * scale)
        .collect();
    if small.len() != 1 {
        return Err(Error::DefectiveSpectrum(format!(
            "eigenvalue {lambda} has geometric multiplicity {}",
            small.len()
        )));
    }
    let vt = svd.v_t.expect("requested right singular vectors");
    Ok(vt.row(small[0]).transpose())
}

fn classify_matrix_lines(m: &Matrix3<f64>) -> Result<Vec<InvariantLine>> {
    let scale = m.norm().max(1.0);
    let mut eig = Vec::with_capacity(3);
    for z in m.complex_eigenvalues().iter() {
        if z.im.abs() > 1e-9 * scale {
            return Err(Error::DefectiveSpectrum(format!(
                "complex eigenvalue {}{:+}i",
                z.re, z.im
            )));
        }
        eig.push(z.re);
    }
    eig.sort_by(|a, b| a.abs().total_cmp(&b.abs()));
    for w in eig.windows(2) {
        if (w[1].abs() - w[0].abs()) <= 1e-9 * scale {
            return Err(Error::DefectiveSpectrum(format!(
                "eigenvalues {} and {} share a modulus",
                w[0], w[1]
            )));
        }
    }
    let mut lines = Vec::with_capacity(3);
    for &lambda in &eig {
        let label = if (lambda.abs() - 1.0).abs() <= 1e-9 {
            LineLabel::Flow
        } else if lambda.abs() < 1.0 {
            LineLabel::StrongStable
        } else {
            LineLabel::StrongUnstable
        };
        lines.push(InvariantLine {
            label,
            eigenvalue: lambda,
            direction: oriented(eigenline(m, lambda)?),
        });
    }
    let labels: Vec<LineLabel> = lines.iter().map(|l| l.label).collect();
    if labels
        != [
            LineLabel::StrongStable,
            LineLabel::Flow,
            LineLabel::StrongUnstable,
        ]
    {
        return Err(Error::DefectiveSpectrum(format!(
            "expected one contracting, one neutral and one expanding eigenvalue, got {eig:?}"
        )));
    }
    Ok(lines)
}

/// The three `dφ_T`-invariant lines, ordered `W^ss`, `F`, `W^su`.
pub fn classify_invariant_lines(
    state: &SuspensionState,
    period: f64,
) -> Result<Vec<InvariantLine>> {
    classify_matrix_lines(&period_matrix(state, period)?)
}

/// The three `dφ_T`-invariant planes: `F ⊕ W^ss`, `F ⊕ W^su`, `W^ss ⊕ W^su`.
pub fn classify_invariant_planes(
    state: &SuspensionState,
    period: f64,
) -> Result<Vec<InvariantPlane>> {
    let m = period_matrix(state, period)?;
    let lines = classify_matrix_lines(&m)?;
    let (ss, f, su) = (lines[0].direction, lines[1].direction, lines[2].direction);
    let planes = [
        (PlaneLabel::Stable, f, ss),
        (PlaneLabel::Unstable, f, su),
        (PlaneLabel::Transverse, ss, su),
    ];
    let mt = m.transpose();
    planes
        .into_iter()
        .map(|(label, a, b)| {
            let normal = Vector3::from(a).cross(&Vector3::from(b));
            if !line_invariant_under(&mt, &normal) {
                return Err(Error::DefectiveSpectrum(format!(
                    "normal of the {label:?} plane is not an eigenvector of the transpose"
                )));
            }
            Ok(InvariantPlane {
                label,
                spanning: [a, b],
                normal: oriented(normal),
            })
        })
        .collect()
}

fn line_invariant_under(m: &Matrix3<f64>, dir: &Vector3<f64>) -> bool {
    let d = dir.normalize();
    let image = m * d;
    let n = image.norm();
    n > 0.0 && image.cross(&d).norm() / n <= INVARIANCE_TOLERANCE
}

fn plane_invariant_under(m: &Matrix3<f64>, a: &Vector3<f64>, b: &Vector3<f64>) -> bool {
    let normal = a.cross(b);
    if normal.norm() == 0.0 {
        return false;
    }
    let normal = normal.normalize();
    [a, b].into_iter().all(|v| {
        let image = m * v;
        let n = image.norm();
        n > 0.0 && (image.dot(&normal) / n).abs() <= INVARIANCE_TOLERANCE
    })
}

/// Whether the line spanned by `direction` is `dφ_T`-invariant.
pub fn is_invariant_line(
    state: &SuspensionState,
    period: f64,
    direction: [f64; 3],
) -> Result<bool> {
    let d = Vector3::from(direction);
    if d.norm() == 0.0 {
        return Err(Error::InvalidArgument("zero direction".into()));
    }
    Ok(line_invariant_under(&period_matrix(state, period)?, &d))
}

/// Whether the plane spanned by `a` and `b` is `dφ_T`-invariant.
pub fn is_invariant_plane(
    state: &SuspensionState,
    period: f64,
    a: [f64; 3],
    b: [f64; 3],
) -> Result<bool> {
    let (a, b) = (Vector3::from(a), Vector3::from(b));
    if a.cross(&b).norm() == 0.0 {
        return Err(Error::InvalidArgument(
            "spanning vectors are dependent".into(),
        ));
    }
    Ok(plane_invariant_under(
        &period_matrix(state, period)?,
        &a,
        &b,
    ))
}

/// Base component of the strong stable direction.
pub fn stable_direction() -> [f64; 2] {
    TangentFrame::canonical().e_ss
}

/// Number of grid boxes per side for box size `epsilon`.
pub fn grid_size(epsilon: f64) -> usize {
    (1.0 / epsilon - 1e-9).ceil() as usize
}

/// Fraction of the `(1/ε)²` boxes met by the strong stable leaf through the origin.
pub fn leaf_density(epsilon: f64, arc_length: f64) -> Result<f64> {
    line_coverage(stable_direction(), epsilon, arc_length)
}

/// Coverage of the closed leaf of slope 1 through the origin.
pub fn control_coverage(epsilon: f64, arc_length: f64) -> Result<f64> {
    line_coverage([1.0, 1.0], epsilon, arc_length)
}

/// Fraction of grid boxes met by the straight line from the origin along
/// `direction`, walked cell by cell on the torus.
pub fn line_coverage(direction: [f64; 2], epsilon: f64, arc_length: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 1], got {epsilon}"
        )));
    }
    if !arc_length.is_finite() || arc_length < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "arc length must be non-negative, got {arc_length}"
        )));
    }
    let norm = direction[0].hypot(direction[1]);
    if norm == 0.0 {
        return Err(Error::InvalidArgument("zero direction".into()));
    }
    let d = [direction[0] / norm, direction[1] / norm];
    let n = grid_size(epsilon);
    let ni = n as i64;
    let mut visited = vec![false; n * n];
    let mut cell = [0i64; 2];
    let mut step = [0i64; 2];
    let mut rate = [0.0f64; 2];
    for a in 0..2 {
        if d[a] < 0.0 {
            cell[a] = -1;
            step[a] = -1;
        } else if d[a] > 0.0 {
            step[a] = 1;
        }
        rate[a] = d[a].abs() * n as f64;
    }
    let mut mark = |c: [i64; 2]| {
        let i = c[0].rem_euclid(ni) as usize;
        let j = c[1].rem_euclid(ni) as usize;
        visited[i * n + j] = true;
    };
    mark(cell);
    let mut k = [1u64, 1];
    let next = |k: u64, a: usize| {
        if rate[a] > 0.0 {
            k as f64 / rate[a]
        } else {
            f64::INFINITY
        }
    };
    loop {
        let tx = next(k[0], 0);
        let ty = next(k[1], 1);
        let t = tx.min(ty);
        if t > arc_length {
            break;
        }
        if tx <= ty {
            cell[0] += step[0];
            k[0] += 1;
        }
        if ty <= tx {
            cell[1] += step[1];
            k[1] += 1;
        }
        mark(cell);
    }
    Ok(visited.iter().filter(|&&v| v).count() as f64 / (n * n) as f64)
}
