use foliage::hyperbolic::{
    classify_invariant_lines, classify_invariant_planes, differential_flow,
    differential_flow_frame, differential_matrix, is_invariant_line, is_invariant_plane, lambda_s,
    lambda_u, leaf_density, line_coverage, stable_direction, suspension_flow, FrameVector,
    SuspensionState, TangentFrame,
};
use nalgebra::Vector3;
use proptest::prelude::*;

fn state() -> impl Strategy<Value = SuspensionState> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64).prop_map(|(x, y, r)| SuspensionState::new([x, y], r))
}

fn rel_close(a: [f64; 3], b: [f64; 3], tol: f64) -> bool {
    let d = Vector3::from(a) - Vector3::from(b);
    d.norm() <= tol * Vector3::from(b).norm().max(1.0)
}

fn sine(a: [f64; 3], b: [f64; 3]) -> f64 {
    let (a, b) = (Vector3::from(a), Vector3::from(b));
    a.cross(&b).norm() / (a.norm() * b.norm())
}

/// Largest gap between successive returns of the line to the circle `x = 0`,
/// counting only returns followed by a full pass across the torus.
fn max_return_gap(direction: [f64; 2], arc_length: f64) -> (f64, Vec<f64>) {
    let n = direction[0].hypot(direction[1]);
    let (dx, dy) = (direction[0] / n, direction[1] / n);
    let passes = (arc_length * dx.abs()).floor() as usize;
    let mut ys: Vec<f64> = (0..passes)
        .map(|k| (k as f64 * dy / dx.abs()).rem_euclid(1.0))
        .collect();
    ys.sort_by(f64::total_cmp);
    let mut gaps: Vec<f64> = ys.windows(2).map(|w| w[1] - w[0]).collect();
    gaps.push(1.0 - ys.last().unwrap() + ys[0]);
    (gaps.iter().copied().fold(0.0, f64::max), gaps)
}

proptest! {
    #[test]
    fn group_law(x in state(), s in -3.0..3.0f64, t in -3.0..3.0f64) {
        let a = suspension_flow(&suspension_flow(&x, t), s);
        let b = suspension_flow(&x, s + t);
        prop_assert!(a.distance(&b) <= 1e-12, "{:?} vs {:?}", a, b);
    }

    #[test]
    fn cocycle(x in state(), s in 0.0..4.0f64, t in 0.0..4.0f64, u in prop::array::uniform3(-1.0..1.0f64)) {
        let direct = differential_flow(u, s + t, &x);
        let composed = differential_flow(differential_flow(u, t, &x), s, &suspension_flow(&x, t));
        prop_assert!(rel_close(composed, direct, 1e-10));
        let m = differential_matrix(s, &suspension_flow(&x, t)) * differential_matrix(t, &x);
        let mm = differential_matrix(s + t, &x);
        prop_assert!((m - mm).norm() <= 1e-10 * mm.norm());
    }

    #[test]
    fn bundles_are_preserved(x in state(), t in 0.0..6.0f64, big in 0.0..200.0f64) {
        let f = TangentFrame::canonical();
        let ss = [f.e_ss[0], f.e_ss[1], 0.0];
        let su = [f.e_su[0], f.e_su[1], 0.0];
        prop_assert!(sine(differential_flow(ss, t, &x), ss) <= 1e-10);
        prop_assert!(sine(differential_flow(su, t, &x), su) <= 1e-10);
        prop_assert_eq!(differential_flow(f.e_flow, t, &x), f.e_flow);
        let img = differential_flow_frame(FrameVector::E_SS, big, &x);
        prop_assert!(img.su == 0.0 && img.flow == 0.0);
        let img = differential_flow_frame(FrameVector::E_SU, big, &x);
        prop_assert!(img.ss == 0.0 && img.flow == 0.0);
    }

    #[test]
    fn density_is_monotone(a in 0.0..300.0f64, b in 0.0..300.0f64, eps in 0.02..1.0f64) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(leaf_density(eps, lo).unwrap() <= leaf_density(eps, hi).unwrap());
    }
}

#[test]
fn eigenvalue_product_is_one() {
    assert!((lambda_s() * lambda_u() - 1.0).abs() <= 1e-12);
    let d = differential_matrix(1.0, &SuspensionState::fixed_point()).determinant();
    assert!((d - 1.0).abs() <= 1e-12);
}

#[test]
fn exactly_three_lines_and_planes() {
    let o = SuspensionState::fixed_point();
    // characteristic polynomial (λ² − 3λ + 1)(λ − 1)
    let disc = 5f64.sqrt();
    let want = [(3.0 - disc) / 2.0, 1.0, (3.0 + disc) / 2.0];
    let lines = classify_invariant_lines(&o, 1.0).unwrap();
    assert_eq!(lines.len(), 3);
    for (l, w) in lines.iter().zip(want) {
        assert!((l.eigenvalue - w).abs() <= 1e-12);
        assert!(is_invariant_line(&o, 1.0, l.direction).unwrap());
    }
    // no line mixing two eigendirections is invariant
    for i in 0..3 {
        for j in i + 1..3 {
            for w in [0.3, 0.5, 0.7] {
                let a = Vector3::from(lines[i].direction) * w
                    + Vector3::from(lines[j].direction) * (1.0 - w);
                assert!(!is_invariant_line(&o, 1.0, a.into()).unwrap());
            }
        }
    }
    let planes = classify_invariant_planes(&o, 1.0).unwrap();
    assert_eq!(planes.len(), 3);
    for p in &planes {
        assert!(is_invariant_plane(&o, 1.0, p.spanning[0], p.spanning[1]).unwrap());
    }
    // a plane containing exactly one eigenline is not invariant
    for l in &lines {
        let other = Vector3::from(lines[0].direction)
            + Vector3::from(lines[1].direction)
            + Vector3::from(lines[2].direction);
        assert!(!is_invariant_plane(&o, 1.0, l.direction, other.into()).unwrap());
    }
}

#[test]
fn three_gap_oracle_agrees_with_coverage() {
    let dir = stable_direction();
    for (eps, arc) in [(0.05, 2000.0), (0.1, 300.0), (0.2, 60.0), (0.05, 150.0)] {
        let (gap, gaps) = max_return_gap(dir, arc);
        let mut distinct: Vec<f64> = Vec::new();
        for g in gaps {
            if !distinct.iter().any(|d| (d - g).abs() <= 1e-9) {
                distinct.push(g);
            }
        }
        assert!(
            distinct.len() <= 3,
            "three-distance theorem violated: {distinct:?}"
        );
        if gap < eps {
            assert_eq!(
                line_coverage(dir, eps, arc).unwrap(),
                1.0,
                "eps {eps} arc {arc}"
            );
        }
    }
    let (gap, _) = max_return_gap(dir, 2000.0);
    assert!(gap < 0.05);
    assert!(max_return_gap([1.0, 1.0], 2000.0).0 > 1.0 - 1e-9);
}
