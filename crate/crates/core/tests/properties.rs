use flatcone::charts::*;
use flatcone::flips::{flip, is_flippable};
use flatcone::scalar::Complex;
use flatcone::sphere::{area_form, leader_chart};
use flatcone::surface::*;
use flatcone::volume::*;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

// convex polygon: sorted angles on a circle with jittered radius
fn polygon(k: usize) -> impl Strategy<Value = Vec<Complex<f64>>> {
    (
        prop::collection::vec(-0.25f64..0.25, k),
        prop::collection::vec(0.95f64..1.05, k),
    )
        .prop_map(move |(jitter, radii)| {
            (0..k)
                .map(|i| {
                    let theta = std::f64::consts::TAU * (i as f64 + jitter[i]) / k as f64;
                    Complex::from_polar(radii[i], theta)
                })
                .collect()
        })
}

fn lattice() -> impl Strategy<Value = (Complex<f64>, Complex<f64>)> {
    (0.5f64..2.0, -0.5f64..0.5, -0.8f64..0.8, 0.5f64..2.0).prop_map(|(a, b, x, y)| (c(a, b), c(x, y)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn torus_chart_dimension((u, v) in lattice()) {
        let s = make_torus(u, v).unwrap();
        prop_assert!(s.gauss_bonnet_residual().abs() < 1e-9);
        let sys = assemble_system(&cut_along_forest(&s).unwrap()).unwrap();
        prop_assert_eq!(sys.dim(), 2);
        prop_assert!(sys.residual(&solution_vector(&cut_along_forest(&s).unwrap())) < 1e-12);
    }

    #[test]
    fn doubled_polygon_charts(points in (4usize..8).prop_flat_map(polygon)) {
        let k = points.len();
        prop_assume!(make_doubled_polygon(&points).is_ok());
        let s = make_doubled_polygon(&points).unwrap();
        let sys = assemble_system(&cut_along_forest(&s).unwrap()).unwrap();
        prop_assert_eq!(sys.dim(), k - 2);
        let chart = leader_chart(&s, k - 1).unwrap();
        prop_assert_eq!(area_form(&chart).unwrap().signature, (1, k - 3));
    }

    #[test]
    fn single_flips_keep_the_density(points in (4usize..7).prop_flat_map(polygon), pick in 0usize..100) {
        prop_assume!(make_doubled_polygon(&points).is_ok());
        let s = make_doubled_polygon(&points).unwrap();
        let options: Vec<usize> = s
            .edges()
            .filter(|&e| !s.is_forest_edge(e) && is_flippable(&s, e).unwrap())
            .collect();
        prop_assume!(!options.is_empty());
        let t = flip(&s, options[pick % options.len()]).unwrap().0;
        let frame = assemble_system(&cut_along_forest(&s).unwrap()).unwrap().kernel;
        let (a, b) = flip_invariance(&s, &t, &frame).unwrap();
        prop_assert!((a - b).abs() / a < 1e-9);
    }

    #[test]
    fn surface_json_round_trip((u, v) in lattice()) {
        let s = make_torus(u, v).unwrap();
        let back = FlatSurface::<f64>::from_json(&s.to_json()).unwrap();
        prop_assert!(back.canonically_equal(&s));
    }
}
