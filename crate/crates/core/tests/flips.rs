use flatcone::flips::*;
use flatcone::scalar::Complex;
use flatcone::surface::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

// uniform random flips blow edge lengths up exponentially on a torus;
// moves whose new diagonal leaves a window of lengths are skipped
fn random_flips(s: &FlatSurface<f64>, count: usize, seed: u64) -> FlatSurface<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = s.clone();
    let limit = 20.0 * s.length_scale();
    for _ in 0..count {
        let options: Vec<usize> = current
            .edges()
            .filter(|&e| {
                let diagonal = current.vector(current.prev(e)) + current.vector(current.next(current.twin(e)));
                !current.is_forest_edge(e) && is_flippable(&current, e).unwrap() && diagonal.norm() < limit
            })
            .collect();
        if options.is_empty() {
            break;
        }
        let e = options[rng.random_range(0..options.len())];
        current = flip(&current, e).unwrap().0;
    }
    current
}

#[test]
fn torus_flip_gives_difference_of_periods() {
    let t = make_torus(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
    let (f, mv) = flip(&t, 2).unwrap();
    assert_eq!(mv.quad, [0, 1, 3, 4]);
    assert!((mv.new_diagonal - c(1.0, -1.0)).norm() < 1e-15);
    assert!((f.vector(2) - c(1.0, -1.0)).norm() < 1e-15);
    assert!((f.total_area() - 1.0).abs() < 1e-15);
    let (back, _) = flip(&f, 2).unwrap();
    assert!(back.canonically_equal(&t));
}

#[test]
fn forest_and_nonconvex_edges_do_not_flip() {
    let s = make_doubled_polygon(&regular_polygon(4, 1.0)).unwrap();
    assert!(matches!(flip(&s, 0), Err(FlipError::ForestEdge(0))));
    assert!(matches!(flip(&s, 99), Err(FlipError::UnknownEdge(99))));
    // torus quads are parallelograms, hence always convex
    let t = make_torus(c(1.0, 0.0), c(0.3, 1.7)).unwrap();
    assert!(t.edges().all(|e| is_flippable(&t, e).unwrap()));
    let heptagon = make_doubled_polygon(&regular_polygon(7, 1.0)).unwrap();
    let mut found = false;
    for seed in 0..20 {
        let a = random_flips(&heptagon, 25, seed);
        let stuck = a.edges().find(|&e| !a.is_forest_edge(e) && !is_flippable(&a, e).unwrap());
        if let Some(e) = stuck {
            assert!(matches!(flip(&a, e), Err(FlipError::NotFlippable(_))));
            found = true;
            break;
        }
    }
    assert!(found);
}

#[test]
fn torus_trace_has_one_crossing() {
    let t = make_torus(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
    let tr = trace_segment(&t, 5, c(1.0, 2.0)).unwrap();
    assert_eq!(tr.len(), 1);
    assert_eq!(tr.crossings, vec![3]);
    for chain in [&tr.upper_chain, &tr.lower_chain] {
        let sum: Complex<f64> = chain.iter().map(|&(h, s)| t.vector(h) * f64::from(s)).sum();
        assert!((sum - c(1.0, 2.0)).norm() < 1e-14);
    }
    let poly = tr.polygon(&t);
    assert_eq!(poly.vertices.len(), 4);
    assert!(matches!(
        trace_segment(&t, 0, c(1.0, 2.0)),
        Err(TraceError::NotInSector { corner: 0 })
    ));
    assert!(matches!(
        trace_segment(&t, 5, c(1.0, 1.9)),
        Err(TraceError::DoesNotTerminateAtVertex)
    ));
}

#[test]
fn long_torus_segment_crossings() {
    let t = make_torus(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
    let tr = trace_segment(&t, 5, c(2.0, 4.0));
    assert!(matches!(tr, Err(TraceError::HitsVertexEarly { .. })), "2 + 4i passes the vertex halfway");
    let tr = trace_segment(&t, 5, c(2.0, 7.0)).unwrap();
    let sum: Complex<f64> = tr.upper_chain.iter().map(|&(h, s)| t.vector(h) * f64::from(s)).sum();
    assert!((sum - c(2.0, 7.0)).norm() < 1e-12);
    assert!(tr.len() > 3);
}

#[test]
fn insertion_makes_segment_an_edge() {
    let t = make_torus(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
    for w in [c(1.0, 2.0), c(2.0, 7.0), c(3.0, 5.0)] {
        let (s, path) = insert_segment(&t, 5, w).unwrap();
        assert!(!path.is_empty());
        assert!((0..s.num_half_edges()).any(|h| (s.vector(h) - w).norm() < 1e-9));
        assert!((s.total_area() - 1.0).abs() < 1e-9);
        let replayed = path.replay(&t).unwrap();
        assert!(replayed.canonically_equal(&s));
    }
}

#[test]
fn insertion_on_doubled_polygon() {
    let s = make_doubled_polygon(&regular_polygon(7, 1.0)).unwrap();
    let scrambled = random_flips(&s, 30, 7);
    let (back, _) = flip_path(&scrambled, &s)
        .map(|p| (p.replay(&scrambled).unwrap(), p))
        .unwrap();
    assert!(back.canonically_equal(&s));
}

#[test]
fn flip_paths_between_random_triangulations() {
    let surfaces = vec![
        make_torus(c(1.0, 0.0), c(0.31, 1.13)).unwrap(),
        make_pillowcase().unwrap(),
        make_doubled_polygon(&regular_polygon(6, 1.0)).unwrap(),
        make_doubled_polygon(&[c(0.0, 0.0), c(2.0, 0.1), c(2.5, 1.0), c(1.2, 2.2), c(-0.3, 1.1)]).unwrap(),
        make_regular_4g_gon(2).unwrap(),
    ];
    for (i, s) in surfaces.iter().enumerate() {
        for seed in 0..4 {
            let a = random_flips(s, 12, 100 * i as u64 + seed);
            let b = random_flips(s, 12, 100 * i as u64 + seed + 50);
            let path = flip_path(&a, &b).unwrap_or_else(|e| panic!("surface {i} seed {seed}: {e}"));
            assert!(path.replay(&a).unwrap().canonically_equal(&b));
            let via = flip_path_via_delaunay(&a, &b).unwrap();
            assert!(via.replay(&a).unwrap().canonically_equal(&b));
        }
    }
}

#[test]
fn delaunay_flipping_terminates() {
    let s = make_doubled_polygon(&regular_polygon(8, 1.0)).unwrap();
    let a = random_flips(&s, 40, 3);
    let (d, _) = delaunay(&a).unwrap();
    assert!(is_delaunay(&d));
    assert!((d.total_area() - s.total_area()).abs() < 1e-9);
}

#[test]
fn property_q() {
    assert!(check_property_q(&make_torus(c(1.0, 0.0), c(0.2, 1.0)).unwrap()).holds);
    assert!(check_property_q(&make_pillowcase::<f64>().unwrap()).holds);
    assert!(check_property_q(&make_regular_4g_gon::<f64>(2).unwrap()).holds);
    let tri = make_doubled_polygon(&regular_polygon(3, 1.0)).unwrap();
    let q = check_property_q(&tri);
    assert!(!q.holds);
    assert!(!q.witness.is_empty());
}

#[test]
fn records_round_trip() {
    let s = make_doubled_polygon(&regular_polygon(6, 1.0)).unwrap();
    let a = random_flips(&s, 10, 1);
    let path = flip_path(&s, &a).unwrap();
    let records = parse_records(&path.to_json()).unwrap();
    assert!(replay_records(&s, &records).unwrap().canonically_equal(&a));
    let mut bad = records.clone();
    if let Some(r) = bad.first_mut() {
        r.new_vector[0] += 0.5;
        assert!(matches!(replay_records(&s, &bad), Err(FlipError::ReplayMismatch(0))));
    }
}

#[test]
fn exchanges_between_spanning_trees() {
    let s = make_doubled_polygon(&regular_polygon(5, 1.0)).unwrap();
    let a1 = s.forest().clone();
    let last = *a1.iter().max().unwrap();
    let closing = s
        .edges()
        .find(|&e| !s.is_forest_edge(e) && s.origin(e).min(s.head(e)) == 0 && s.origin(e).max(s.head(e)) == 4)
        .unwrap();
    let mut a2 = a1.clone();
    a2.remove(&last);
    a2.insert(closing);
    let ex = exchange_tree(&s, &a1, &a2).unwrap();
    assert_eq!(ex, vec![Exchange { remove: last, add: closing }]);
    assert!(exchange_tree(&s, &a1, &a1).unwrap().is_empty());
    let mut partial = a1.clone();
    partial.remove(&last);
    assert!(matches!(exchange_tree(&s, &a1, &partial), Err(FlipError::NotSpanningTree(_))));
}

#[test]
fn flip_paths_stress() {
    let surfaces = vec![
        make_regular_4g_gon(2).unwrap(),
        make_regular_4g_gon(3).unwrap(),
        make_doubled_polygon(&regular_polygon(9, 1.0)).unwrap(),
        make_torus(c(1.0, 0.0), c(0.45, 0.83)).unwrap(),
    ];
    for (i, s) in surfaces.iter().enumerate() {
        for seed in 0..10 {
            let a = random_flips(s, 40, 1000 * i as u64 + seed);
            let b = random_flips(&a, 40, 1000 * i as u64 + seed + 500);
            let path = flip_path(&a, &b).unwrap_or_else(|e| panic!("surface {i} seed {seed}: {e}"));
            assert!(path.replay(&a).unwrap().canonically_equal(&b));
            let m = flatcone::charts::chart_transition(&a, &b).unwrap();
            let z1 = flatcone::charts::solution_vector(&flatcone::charts::cut_along_forest(&a).unwrap());
            let z2 = flatcone::charts::solution_vector(&flatcone::charts::cut_along_forest(&b).unwrap());
            assert!((&m * z1 - z2).norm() < 1e-9, "surface {i} seed {seed}");
        }
    }
}

// same triangulation with half-edge ids shuffled
fn relabel(s: &FlatSurface<f64>, seed: u64) -> FlatSurface<f64> {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let nh = s.num_half_edges();
    let mut perm: Vec<usize> = (0..nh).collect();
    perm.shuffle(&mut rng);
    let parts = s.to_parts();
    let mut twins = vec![0; nh];
    let mut vectors = vec![c(0.0, 0.0); nh];
    for h in 0..nh {
        twins[perm[h]] = perm[parts.twins[h]];
        vectors[perm[h]] = parts.vectors[h];
    }
    FlatSurface::from_parts(SurfaceParts {
        triangles: parts.triangles.iter().map(|t| t.map(|h| perm[h])).collect(),
        twins,
        vectors,
        target_angles: parts.target_angles.clone(),
        anchors: parts.anchors.as_ref().map(|a| a.iter().map(|&h| perm[h]).collect()),
        forest: parts.forest.iter().map(|&e| perm[e].min(perm[parts.twins[e]])).collect(),
    })
    .unwrap()
}

#[test]
fn identification_without_shared_ids() {
    let s = make_regular_4g_gon(2).unwrap();
    for seed in 0..5 {
        let a = random_flips(&s, 20, seed);
        let b = relabel(&random_flips(&a, 20, seed + 10), seed);
        let path = flip_path(&a, &b).unwrap();
        assert!(path.replay(&a).unwrap().canonically_equal(&b));
        let m = flatcone::charts::chart_transition(&a, &b).unwrap();
        let z1 = flatcone::charts::solution_vector(&flatcone::charts::cut_along_forest(&a).unwrap());
        let z2 = flatcone::charts::solution_vector(&flatcone::charts::cut_along_forest(&b).unwrap());
        assert!((&m * z1 - z2).norm() < 1e-9);
    }
}
