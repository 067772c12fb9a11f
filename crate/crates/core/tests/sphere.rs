use flatcone::charts::solution_vector;
use flatcone::linalg::{CMatrix, CVector};
use flatcone::scalar::Complex;
use flatcone::sphere::*;
use flatcone::surface::*;
use flatcone::volume::sample_nearby;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type C = Complex<f64>;

fn c(re: f64, im: f64) -> C {
    Complex::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn pentagon() -> FlatSurface<f64> {
    make_doubled_polygon(&regular_polygon(5, 1.0)).unwrap()
}

fn pillowcase() -> FlatSurface<f64> {
    make_pillowcase().unwrap()
}

// random point of f = -1 in m complex coordinates
fn point_on_quadric(rng: &mut ChaCha8Rng, m: usize) -> CVector<f64> {
    let mut z = CVector::from_fn(m, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let head: f64 = z.iter().take(m - 1).map(|x| x.norm_sqr()).sum();
    let phase = rng.random_range(0.0..std::f64::consts::TAU);
    z[m - 1] = Complex::from_polar((1.0 + head).sqrt(), phase);
    z
}

fn eta(x: &CVector<f64>, y: &CVector<f64>) -> f64 {
    let m = x.len();
    (0..m)
        .map(|k| {
            let t = (x[k].conj() * y[k]).re;
            if k + 1 == m {
                -t
            } else {
                t
            }
        })
        .sum()
}

#[test]
fn leader_counts_and_consistency() {
    for (s, leaders) in [(pillowcase(), 2), (pentagon(), 3)] {
        let chart = leader_chart(&s, s.num_vertices() - 1).unwrap();
        assert_eq!(chart.leaders.len(), leaders);
        assert_eq!(chart.expansion.ncols(), leaders);
        let z = solution_vector(&chart.cut);
        let rebuilt = &chart.expansion * &chart.coordinates;
        assert!((rebuilt - &z).norm() < 1e-10 * z.norm());
        assert!((&chart.system.rows * &chart.expansion).norm() < 1e-10 * chart.expansion.norm());
    }
    assert!(matches!(
        leader_chart(&make_torus(c(1.0, 0.0), c(0.0, 1.0)).unwrap(), 0),
        Err(SphereError::NotGenusZero(1))
    ));
    assert!(matches!(
        leader_chart(&make_doubled_polygon(&regular_polygon::<f64>(3, 1.0)).unwrap(), 0),
        Err(SphereError::TooFewVertices(3))
    ));
}

#[test]
fn area_form_signature_and_values() {
    for (s, sig) in [(pillowcase(), (1, 1)), (pentagon(), (1, 2))] {
        let chart = leader_chart(&s, s.num_vertices() - 1).unwrap();
        let form = area_form(&chart).unwrap();
        assert_eq!(form.signature, sig);
        assert!((&form.h - form.h.adjoint()).norm() < 1e-12);
        let v = &chart.coordinates;
        let q = (v.adjoint() * &form.h * v)[(0, 0)].re;
        assert!(rel(q, s.total_area()) < 1e-9);
        for t in sample_nearby(&chart.surface, 20, 4).unwrap() {
            let v = chart.leader_coordinates(&t);
            let q = (v.adjoint() * &form.h * &v)[(0, 0)].re;
            assert!(rel(q, t.total_area()) < 1e-9);
        }
    }
}

#[test]
fn normalization_diagonalizes() {
    for s in [pillowcase(), pentagon()] {
        let chart = leader_chart(&s, 0).unwrap();
        let form = area_form(&chart).unwrap();
        let norm = normalize_form(&form).unwrap();
        let m = chart.dim();
        let d = norm.p.adjoint() * form.h.map(|x| -x) * &norm.p;
        let mut target = CMatrix::<f64>::identity(m, m);
        target[(m - 1, m - 1)] = c(-1.0, 0.0);
        assert!((d - target).norm() < 1e-10);
        let z = norm.to_normalized(&chart.coordinates);
        assert!(rel(quadric(&z), -s.total_area()) < 1e-10);
        let unit = z.unscale(s.total_area().sqrt());
        assert!((quadric(&unit) + 1.0).abs() < 1e-12);
    }
}

#[test]
fn normalized_form_needs_only_phases() {
    let s = pillowcase();
    let chart = leader_chart(&s, 3).unwrap();
    let mut form = area_form(&chart).unwrap();
    let mut h = CMatrix::<f64>::identity(2, 2).map(|x| -x);
    h[(1, 1)] = c(1.0, 0.0);
    form.h = h;
    let norm = normalize_form(&form).unwrap();
    for j in 0..2 {
        for k in 0..2 {
            let x = norm.p[(j, k)];
            if j == k {
                assert!((x.norm() - 1.0).abs() < 1e-12);
            } else {
                assert!(x.norm() < 1e-12);
            }
        }
    }
}

#[test]
fn gram_identity_on_conjugate_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in [4, 5, 6] {
        let m = n - 2;
        for _ in 0..6 {
            let z = point_on_quadric(&mut rng, m);
            let frame = conjugate_frame(&z);
            let hyp = hyp_density(&z, &frame).unwrap();
            let expected = z[m - 1].norm().powi(2 * (n as i32 - 4));
            assert!(rel(hyp, expected) < 1e-9, "n={n}");
            // the completion by Z, iZ gives c0 |z_m|^{2(n-4)} / 4
            let mu = mu1_density(&z, &frame, 1.0).unwrap();
            assert!(rel(mu, expected / 4.0) < 1e-9, "n={n}");
        }
    }
}

#[test]
fn densities_on_eta_orthonormal_frame() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let z = point_on_quadric(&mut rng, 3);
    let base = conjugate_frame(&z);
    let mut basis: Vec<CVector<f64>> = Vec::new();
    for col in base.column_iter() {
        let mut x = col.into_owned();
        for q in &basis {
            x -= q * c(eta(q, &x), 0.0);
        }
        let n = eta(&x, &x).sqrt();
        basis.push(x.unscale(n));
    }
    let frame = CMatrix::from_columns(&basis);
    assert!((hyp_density(&z, &frame).unwrap() - 1.0).abs() < 1e-10);
    assert!((mu1_density(&z, &frame, 4.0).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn mu1_completion_and_scaling() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let z = point_on_quadric(&mut rng, 3);
    let frame = conjugate_frame(&z);
    let base = mu1_density(&z, &frame, 2.5).unwrap();
    for _ in 0..2 {
        let a = CVector::from_fn(3, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let b = CVector::from_fn(3, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let v = mu1_density_with(&z, &frame, &a, &b, 2.5).unwrap();
        assert!(rel(v, base) < 1e-10);
    }
    let mut scaled = frame.clone();
    scaled.column_mut(1).scale_mut(3.0);
    assert!(rel(mu1_density(&z, &scaled, 2.5).unwrap(), 3.0 * base) < 1e-12);
    assert!(rel(hyp_density(&z, &scaled).unwrap(), 3.0 * hyp_density(&z, &frame).unwrap()) < 1e-12);
    // real change of frame
    let m: DMatrix<f64> = DMatrix::from_fn(4, 4, |_, _| rng.random_range(-1.0..1.0));
    let det = m.determinant().abs();
    let moved = &frame * m.map(|x| c(x, 0.0));
    assert!(rel(mu1_density(&z, &moved, 2.5).unwrap(), det * base) < 1e-10);
}

#[test]
fn circle_action_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    let z = point_on_quadric(&mut rng, 3);
    let frame = conjugate_frame(&z);
    let (mu, hyp) = (mu1_density(&z, &frame, 1.0).unwrap(), hyp_density(&z, &frame).unwrap());
    for _ in 0..10 {
        let phase = Complex::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
        let z2 = z.map(|x| x * phase);
        let f2 = frame.map(|x| x * phase);
        assert!(rel(mu1_density(&z2, &f2, 1.0).unwrap(), mu) < 1e-10);
        assert!(rel(hyp_density(&z2, &f2).unwrap(), hyp) < 1e-10);
    }
}

#[test]
fn point_and_frame_errors() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let z = point_on_quadric(&mut rng, 3);
    let frame = conjugate_frame(&z);
    let off = z.map(|x| x * 1.1);
    assert!(matches!(mu1_density(&off, &frame, 1.0), Err(SphereError::PointNotOnQ1 { .. })));
    let mut bent = frame.clone();
    bent.set_column(0, &z);
    assert!(matches!(hyp_density(&z, &bent), Err(SphereError::FrameNotTangent { .. })));
}

#[test]
fn ratio_is_constant_across_samples_and_charts() {
    let s = pentagon();
    let a = ratio_scan(&s, 4, 50, 7).unwrap();
    let b = ratio_scan(&s, 0, 50, 8).unwrap();
    assert!(a.spread < 1e-6 && b.spread < 1e-6);
    assert!(a.area_residual < 1e-9);
    assert!(rel(a.ratios[0], b.ratios[0]) < 1e-6);
    assert!(rel(a.ratios[0] * 4.0 / a.c0, 1.0) < 1e-6);
    let p = ratio_scan(&pillowcase(), 3, 20, 1).unwrap();
    assert!(p.spread < 1e-6);
}
