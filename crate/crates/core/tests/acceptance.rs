//! One PASS/FAIL line per acceptance criterion, each with its time budget.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use flatcone::charts::*;
use flatcone::flips::*;
use flatcone::linalg::CVector;
use flatcone::scalar::Complex;
use flatcone::sphere::*;
use flatcone::surface::*;
use flatcone::volume::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type S = FlatSurface<f64>;

fn c(re: f64, im: f64) -> Complex<f64> {
    Complex::new(re, im)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn spread(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::MIN, f64::max);
    let min = xs.iter().copied().fold(f64::MAX, f64::min);
    (max - min) / max.abs()
}

fn torus() -> S {
    make_torus(c(1.0, 0.0), c(0.0, 1.0)).unwrap()
}
fn octagon() -> S {
    make_regular_4g_gon(2).unwrap()
}
fn triangle() -> S {
    make_doubled_polygon(&regular_polygon(3, 1.0)).unwrap()
}
fn pillowcase() -> S {
    make_pillowcase().unwrap()
}
fn pentagon() -> S {
    make_doubled_polygon(&regular_polygon(5, 1.0)).unwrap()
}

fn goldens() -> Vec<(&'static str, S)> {
    vec![
        ("torus", torus()),
        ("octagon", octagon()),
        ("triangle", triangle()),
        ("pillowcase", pillowcase()),
        ("pentagon", pentagon()),
    ]
}

fn system(s: &S) -> ChartSystem<f64> {
    assemble_system(&cut_along_forest(s).unwrap()).unwrap()
}

fn flippable(s: &S) -> Vec<usize> {
    s.edges()
        .filter(|&e| !s.is_forest_edge(e) && is_flippable(s, e).unwrap())
        .collect()
}

// skips moves whose new diagonal is much longer than the surface
fn scramble(s: &S, count: usize, rng: &mut ChaCha8Rng) -> S {
    let limit = 20.0 * s.length_scale();
    let mut current = s.clone();
    for _ in 0..count {
        let options: Vec<usize> = flippable(&current)
            .into_iter()
            .filter(|&e| (current.vector(current.prev(e)) + current.vector(current.next(current.twin(e)))).norm() < limit)
            .collect();
        if options.is_empty() {
            break;
        }
        let e = options[rng.random_range(0..options.len())];
        current = flip(&current, e).unwrap().0;
    }
    current
}

// largest triangle closure and edge gluing residual relative to edge length
fn closure_residual(s: &S) -> f64 {
    let scale = s.length_scale();
    let closure = s
        .triangles()
        .iter()
        .map(|t| (s.vector(t[0]) + s.vector(t[1]) + s.vector(t[2])).norm())
        .fold(0.0, f64::max);
    let gluing = s
        .edges()
        .filter(|&e| !s.is_forest_edge(e))
        .map(|e| (s.vector(e) + s.vector(s.twin(e))).norm())
        .fold(0.0, f64::max);
    closure.max(gluing) / scale
}

fn sci(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.2e}")).collect();
    format!("[{}]", parts.join(", "))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion(id: usize, name: &str, budget: u64, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    let in_time = elapsed <= Duration::from_secs(budget);
    let pass = out.pass && in_time;
    println!(
        "{} {:>2} {name}: {} ({:.2} s of {budget} s)",
        if pass { "PASS" } else { "FAIL" },
        id,
        out.detail,
        elapsed.as_secs_f64()
    );
    pass
}

fn dimension_formula() -> Outcome {
    let expected = [("torus", 2), ("octagon", 4), ("triangle", 1), ("pillowcase", 2), ("pentagon", 3)];
    let got: Vec<(&str, usize)> = goldens().iter().map(|(n, s)| (*n, system(s).dim())).collect();
    Outcome {
        pass: got.iter().zip(expected).all(|(g, e)| g.1 == e.1),
        detail: format!("{got:?}"),
    }
}

fn residuals() -> Outcome {
    let mut worst = 0.0f64;
    for (i, (_, s)) in goldens().into_iter().enumerate() {
        worst = worst.max(s.gauss_bonnet_residual().abs()).max(closure_residual(&s));
        for t in sample_nearby(&s, 100, 100 + i as u64).unwrap() {
            worst = worst.max(t.gauss_bonnet_residual().abs()).max(closure_residual(&t));
        }
    }
    Outcome {
        pass: worst < 1e-9,
        detail: format!("max residual {worst:.2e} over 5 constructors and 500 perturbations"),
    }
}

fn flip_invariance_scan() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut count = 0;
    for (_, s) in goldens() {
        let mut current = s.clone();
        for _ in 0..20 {
            let options = flippable(&current);
            let e = options[rng.random_range(0..options.len())];
            let next = flip(&current, e).unwrap().0;
            let frame = system(&current).kernel;
            let (a, b) = flip_invariance(&current, &next, &frame).unwrap();
            worst = worst.max(rel(a, b));
            count += 1;
            // keep walking unless the torus vectors start to grow
            if next.length_scale() < 20.0 * s.length_scale() {
                current = next;
            }
        }
    }
    Outcome {
        pass: count == 100 && worst < 1e-9,
        detail: format!("{count} flips, max |ratio - 1| {worst:.2e}"),
    }
}

fn edge_between(s: &S, a: usize, b: usize) -> usize {
    s.edges()
        .find(|&e| {
            let (u, v) = (s.origin(e), s.head(e));
            (u, v) == (a, b) || (u, v) == (b, a)
        })
        .unwrap()
}

fn tree_invariance() -> Outcome {
    let s = pentagon();
    let path: BTreeSet<usize> = (0..4).map(|i| edge_between(&s, i, i + 1)).collect();
    let star: BTreeSet<usize> = (1..5).map(|i| edge_between(&s, 0, i)).collect();
    let mut exchanged = path.clone();
    exchanged.remove(&edge_between(&s, 3, 4));
    exchanged.insert(edge_between(&s, 0, 4));
    let pairs = [(&path, &star), (&path, &exchanged), (&star, &exchanged)];
    let ratios: Vec<f64> = pairs
        .iter()
        .map(|(a, b)| cut_glue_invariance(&s, a, b, None).unwrap().ratio)
        .collect();
    Outcome {
        pass: ratios.iter().all(|r| (r - 1.0).abs() < 1e-9),
        detail: format!("ratios {ratios:.12?}"),
    }
}

fn increased_constant_scan() -> Outcome {
    let mut spreads = Vec::new();
    let mut values = Vec::new();
    for s in [triangle(), pentagon()] {
        let cut = cut_along_forest(&s).unwrap();
        let sys = assemble_system(&cut).unwrap();
        let c0: Vec<f64> = s
            .edges()
            .filter(|&e| !s.is_forest_edge(e))
            .map(|e| increased_constant(&sys, &increased_system(&cut, e).unwrap(), &sys.kernel).unwrap())
            .collect();
        spreads.push(spread(&c0));
        values.push(c0[0]);
    }
    Outcome {
        pass: spreads.iter().all(|&x| x < 1e-10),
        detail: format!("c0 {values:.12?}, spreads {}", sci(&spreads)),
    }
}

fn period_scan() -> Outcome {
    let mut spreads = Vec::new();
    for (i, s) in [torus(), octagon()].into_iter().enumerate() {
        let samples = sample_nearby(&s, 10, 60 + i as u64).unwrap();
        spreads.push(period_comparison(&samples, 0).unwrap().spread);
    }
    let s = octagon();
    let family = primitive_family(&s, 0).unwrap();
    let before = period_lambda(&s, &family).unwrap();
    let e = flippable(&s).into_iter().find(|e| !family.contains(e)).unwrap();
    let after = period_lambda(&flip(&s, e).unwrap().0, &family).unwrap();
    let flip_dev = rel(before, after);
    Outcome {
        pass: spreads.iter().all(|&x| x < 1e-8) && flip_dev < 1e-8,
        detail: format!("spreads {}, flip deviation {flip_dev:.2e}", sci(&spreads)),
    }
}

fn flip_path_scan() -> Outcome {
    let mut ok = 0;
    let mut total = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for s in [torus(), pillowcase()] {
        for _ in 0..20 {
            let t = scramble(&s, 10, &mut rng);
            total += 1;
            if let Ok(path) = flip_path(&s, &t) {
                if path.replay(&s).is_ok_and(|r| r.canonically_equal(&t)) {
                    ok += 1;
                }
            }
        }
    }
    let s = pentagon();
    for _ in 0..10 {
        let t = scramble(&s, 10, &mut rng);
        total += 1;
        let forests_match = exchange_tree(&s, s.forest(), t.forest()).is_ok_and(|x| x.is_empty());
        if let Ok(path) = flip_path(&s, &t) {
            if forests_match && path.replay(&s).is_ok_and(|r| r.canonically_equal(&t)) {
                ok += 1;
            }
        }
    }
    Outcome {
        pass: ok == total,
        detail: format!("{ok}/{total} replays canonically equal"),
    }
}

fn delaunay_scan() -> Outcome {
    let mut worst = f64::MIN;
    let mut count = 0;
    for (i, (_, s)) in goldens().into_iter().enumerate() {
        let mut inputs = vec![s.clone()];
        inputs.extend(sample_nearby(&s, 10, 80 + i as u64).unwrap());
        for t in inputs {
            let (d, _) = delaunay(&t).unwrap();
            let slack = d
                .edges()
                .filter(|&e| !d.is_forest_edge(e))
                .map(|e| delaunay_slack(&d, e))
                .fold(f64::MIN, f64::max);
            worst = worst.max(slack);
            count += 1;
        }
    }
    Outcome {
        pass: worst <= 1e-9,
        detail: format!("{count} surfaces, max opposite-angle excess {worst:.2e}"),
    }
}

fn hyperbolic_comparison() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut gram_dev = 0.0f64;
    for _ in 0..6 {
        let m = 3;
        let mut z = CVector::from_fn(m, |_, _| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let head: f64 = z.iter().take(m - 1).map(|x| x.norm_sqr()).sum();
        z[m - 1] = Complex::from_polar((1.0 + head).sqrt(), rng.random_range(0.0..6.28));
        let hyp = hyp_density(&z, &conjugate_frame(&z)).unwrap();
        gram_dev = gram_dev.max(rel(hyp, z[m - 1].norm_sqr()));
    }
    let s = pentagon();
    let a = ratio_scan(&s, 4, 50, 7).unwrap();
    let b = ratio_scan(&s, 0, 50, 8).unwrap();
    let all: Vec<f64> = a.ratios.iter().chain(&b.ratios).copied().collect();
    let total = spread(&all);
    Outcome {
        pass: gram_dev < 1e-9 && a.spread < 1e-6 && b.spread < 1e-6 && total < 1e-6,
        detail: format!(
            "gram deviation {gram_dev:.2e}, ratio {:.12} (c0/4 = {:.12}), spread over both charts {total:.2e}",
            a.ratios[0],
            a.c0 / 4.0
        ),
    }
}

fn signatures() -> Outcome {
    let got: Vec<(usize, usize)> = [pillowcase(), pentagon()]
        .iter()
        .map(|s| area_form(&leader_chart(s, s.num_vertices() - 1).unwrap()).unwrap().signature)
        .collect();
    Outcome {
        pass: got == vec![(1, 1), (1, 2)],
        detail: format!("{got:?}"),
    }
}

fn main() {
    let results = [
        criterion(1, "dimension formula", 1, dimension_formula),
        criterion(2, "Gauss-Bonnet and closure residuals", 1, residuals),
        criterion(3, "flip invariance of the density", 10, flip_invariance_scan),
        criterion(4, "tree-change invariance", 5, tree_invariance),
        criterion(5, "increased-map constant", 5, increased_constant_scan),
        criterion(6, "period comparison", 10, period_scan),
        criterion(7, "flip-path correctness", 60, flip_path_scan),
        criterion(8, "Delaunay predicate", 30, delaunay_scan),
        criterion(9, "hyperbolic comparison", 60, hyperbolic_comparison),
        criterion(10, "area form signature", 1, signatures),
    ];
    let failed: Vec<usize> = (1..=10).filter(|i| !results[i - 1]).collect();
    if failed.is_empty() {
        println!("acceptance: 10/10 criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
