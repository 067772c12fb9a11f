use std::f64::consts::PI;

use super::*;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn torus_spec() -> SurfaceSpec {
    SurfaceSpec::from_json(
        r#"{"vertices": [{"id": 0, "angle": 6.283185307179586}],
            "triangles": [[0, 1, 2], [3, 4, 5]],
            "gluing": [[0, 3], [1, 4], [2, 5]],
            "vectors": {"0": [1, 0], "1": [0, 1], "2": [-1, -1],
                        "3": [-1, 0], "4": [0, -1], "5": [1, 1]},
            "forest": []}"#,
    )
    .unwrap()
}

#[test]
fn square_torus_from_spec() {
    let s: FlatSurface<f64> = build_surface(&torus_spec()).unwrap();
    assert_eq!(s.genus(), 1);
    assert_eq!(s.num_vertices(), 1);
    assert!((s.cone_angle(0).unwrap() - 2.0 * PI).abs() < 1e-12);
    assert!((s.total_area() - 1.0).abs() < 1e-15);
    assert_eq!(s.cone_angle(1), Err(SurfaceError::UnknownVertex(1)));
}

#[test]
fn broken_closure_is_reported() {
    let mut spec = torus_spec();
    spec.vectors.insert("5".into(), [1.0, 1.1]);
    spec.vectors.insert("2".into(), [-1.0, -1.1]);
    match build_surface::<f64>(&spec) {
        Err(SurfaceError::ClosureViolation { triangle, .. }) => assert_eq!(triangle, 0),
        other => panic!("unexpected {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = torus_spec().to_json().replacen("\"forest\"", "\"extra\": 1, \"forest\"", 1);
    assert!(matches!(SurfaceSpec::from_json(&text), Err(SurfaceError::Format(_))));
}

#[test]
fn doubled_equilateral_triangle() {
    let s = make_doubled_polygon(&regular_polygon(3, 1.0)).unwrap();
    assert_eq!(s.genus(), 0);
    assert_eq!(s.num_vertices(), 3);
    assert_eq!(s.forest().len(), 2);
    for v in 0..3 {
        assert!((s.cone_angle(v).unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
    }
    assert!((s.total_area() - 3f64.sqrt() / 2.0).abs() < 1e-14);
}

#[test]
fn doubled_pentagon_angles() {
    let s = make_doubled_polygon(&regular_polygon(5, 1.0)).unwrap();
    assert_eq!(s.num_vertices(), 5);
    assert_eq!(s.forest().len(), 4);
    for &a in s.cone_angles() {
        assert!((a - 6.0 * PI / 5.0).abs() < 1e-12);
    }
    assert!(s.gauss_bonnet_residual().abs() < 1e-12);
}

#[test]
fn irregular_doubled_polygon_validates() {
    let pts = [c(0.0, 0.0), c(2.0, -0.3), c(2.6, 1.0), c(1.1, 2.2), c(-0.4, 1.3)];
    let s = make_doubled_polygon(&pts).unwrap();
    assert_eq!(s.genus(), 0);
    assert!(s.gauss_bonnet_residual().abs() < 1e-12);
}

#[test]
fn nonconvex_polygon_is_degenerate() {
    let pts = [c(0.0, 0.0), c(2.0, 0.0), c(1.0, 0.2), c(1.0, 2.0)];
    assert!(matches!(make_doubled_polygon(&pts), Err(SurfaceError::DegenerateInput(_))));
    assert!(matches!(make_torus(c(1.0, 0.0), c(2.0, 0.0)), Err(SurfaceError::DegenerateInput(_))));
}

#[test]
fn octagon_surface() {
    let s = make_regular_4g_gon::<f64>(2).unwrap();
    assert_eq!(s.genus(), 2);
    assert_eq!(s.num_vertices(), 1);
    assert!((s.cone_angle(0).unwrap() - 6.0 * PI).abs() < 1e-10);
    let s3 = make_regular_4g_gon::<f64>(3).unwrap();
    assert_eq!(s3.genus(), 3);
    assert!((s3.cone_angle(0).unwrap() - 10.0 * PI).abs() < 1e-10);
}

#[test]
fn forest_cycle_and_missing_singularity() {
    let s = make_doubled_polygon(&regular_polygon(3, 1.0)).unwrap();
    let mut parts = s.to_parts();
    let all: Vec<usize> = s.edges().filter(|&e| !s.is_forest_edge(e)).collect();
    // closing the fold path into a triangle creates a cycle
    let fold = s.edges().find(|&e| {
        !s.is_forest_edge(e) && s.triangle_of(e) < 1 && s.triangle_of(s.twin(e)) >= 1
    });
    if let Some(e) = fold {
        parts.forest.insert(e);
        assert_eq!(FlatSurface::from_parts(parts.clone()).unwrap_err(), SurfaceError::ForestNotTrees);
    }
    assert!(!all.is_empty());
    let mut single = s.to_parts();
    let first = *single.forest.iter().next().unwrap();
    single.forest = [first].into_iter().collect();
    assert!(FlatSurface::from_parts(single).is_err());
}

#[test]
fn json_round_trip_is_exact() {
    let surfaces = [
        make_torus(c(1.0, 0.0), c(0.3, 1.7)).unwrap(),
        make_doubled_polygon(&regular_polygon(5, 1.0)).unwrap(),
        make_pillowcase().unwrap(),
        make_regular_4g_gon(2).unwrap(),
    ];
    for s in surfaces {
        let text = s.to_json();
        let back = FlatSurface::<f64>::from_json(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.to_json(), text);
    }
}

#[test]
fn scaling_area_and_equality() {
    let s = make_doubled_polygon(&regular_polygon(5, 1.0)).unwrap();
    let w = c(0.6, -1.3);
    let t = s.scaled(w).unwrap();
    let ratio = t.total_area() / s.total_area();
    assert!((ratio - w.norm_sqr()).abs() < 1e-12 * w.norm_sqr());
    assert!(s.canonically_equal(&s.clone()));
    assert!(!s.canonically_equal(&t));
}

#[test]
fn single_precision_surface() {
    let s = make_doubled_polygon(&regular_polygon::<f32>(5, 1.0)).unwrap();
    assert_eq!(s.genus(), 0);
    assert!((s.cone_angle(0).unwrap() - 6.0 * std::f32::consts::PI / 5.0).abs() < 1e-4);
}
