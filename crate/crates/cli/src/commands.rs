use std::collections::BTreeSet;
use std::fmt::{Debug, Display};
use std::fs;
use std::path::Path;

use flatcone::charts::{assemble_system, cut_along_forest, is_erasing, solution_vector};
use flatcone::flips::{delaunay, flip, flip_path, insert_segment, is_delaunay, is_flippable};
use flatcone::scalar::Complex;
use flatcone::sphere::ratio_scan;
use flatcone::surface::{
    forest_components, make_doubled_polygon, make_pillowcase, make_regular_4g_gon, make_torus,
    regular_polygon,
};
use flatcone::volume::{
    cut_glue_invariance, flip_invariance, kernel_density, period_comparison, sample_nearby, Convention,
};
use flatcone::Surface;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::report::Report;
use crate::{Output, Shape, Verb};

pub enum Failure {
    Usage(String),
    Io(String),
    Domain { code: String, message: String },
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn render(&self) -> String {
        let (code, message) = match self {
            Failure::Usage(m) => ("usage".to_string(), m.clone()),
            Failure::Io(m) => ("io".to_string(), m.clone()),
            Failure::Domain { code, message } => (code.clone(), message.clone()),
        };
        format!(
            "tool = flatcone {}\nerror = {code}\nmessage = {message}\n",
            env!("CARGO_PKG_VERSION")
        )
    }
}

/// Error code from the variant name of a library error.
fn domain<E: Debug + Display>(e: E) -> Failure {
    let debug = format!("{e:?}");
    let code: String = debug
        .chars()
        .take_while(|c| c.is_alphanumeric() || *c == '_')
        .collect();
    Failure::Domain {
        code,
        message: e.to_string(),
    }
}

type Outcome = Result<Report, Failure>;

fn read(path: &Path) -> Result<Surface, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Surface::from_json(&text).map_err(domain)
}

fn write(output: &Output, text: &str, report: &mut Report) -> Result<(), Failure> {
    if let Some(path) = &output.out {
        fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
        report.put("written", path.display());
    }
    Ok(())
}

fn convention(s: &Surface) -> &'static str {
    if s.is_translation() {
        Convention::FourTermSequence.tag()
    } else {
        Convention::ShortSequence.tag()
    }
}

fn require_seed(seed: Option<u64>) -> Result<u64, Failure> {
    seed.ok_or_else(|| Failure::Usage("this command samples randomly and needs --seed".into()))
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

pub fn run(verb: Verb) -> Outcome {
    match verb {
        Verb::Validate { surface } => validate(&surface),
        Verb::Info { surface } => info(&read(&surface)?),
        Verb::Flip { surface, edge, output } => {
            let s = read(&surface)?;
            let (t, mv) = flip(&s, edge).map_err(domain)?;
            let mut r = Report::new("flip", convention(&s));
            r.put("edge", mv.edge);
            r.list("quad", mv.quad);
            r.put("new_vector", format!("{},{}", mv.new_diagonal.re, mv.new_diagonal.im));
            write(&output, &t.to_json(), &mut r)?;
            Ok(r)
        }
        Verb::Delaunay { surface, output } => {
            let s = read(&surface)?;
            let (t, path) = delaunay(&s).map_err(domain)?;
            let mut r = Report::new("delaunay", convention(&s));
            r.put("flips", path.len());
            r.list("edges", path.edges());
            let ok = is_delaunay(&t);
            r.put("delaunay", ok);
            write(&output, &t.to_json(), &mut r)?;
            r.verdict(ok);
            Ok(r)
        }
        Verb::Insert {
            surface,
            corner,
            vec,
            output,
        } => {
            let s = read(&surface)?;
            let w = Complex::new(vec.0, vec.1);
            let (t, path) = insert_segment(&s, corner, w).map_err(domain)?;
            let mut r = Report::new("insert", convention(&s));
            r.put("flips", path.len());
            r.list("edges", path.edges());
            write(&output, &t.to_json(), &mut r)?;
            Ok(r)
        }
        Verb::FlipPath {
            source,
            target,
            output,
        } => {
            let (a, b) = (read(&source)?, read(&target)?);
            let path = flip_path(&a, &b).map_err(domain)?;
            let mut r = Report::new("flip-path", convention(&a));
            r.put("flips", path.len());
            let replayed = path.replay(&a).map_err(domain)?;
            let ok = replayed.canonically_equal(&b);
            r.put("replay_matches", ok);
            write(&output, &path.to_json(), &mut r)?;
            r.verdict(ok);
            Ok(r)
        }
        Verb::Cut { surface } => {
            let s = read(&surface)?;
            let cut = cut_along_forest(&s).map_err(domain)?;
            let mut r = Report::new("cut", convention(&s));
            r.put("edges", cut.num_edges());
            r.put("triangles", cut.num_triangles());
            r.put("rows", cut.num_rows());
            r.put("trees", cut.num_trees());
            for p in cut.pairs() {
                r.put(
                    &format!("pair.{}", p.edge),
                    format!("a={} abar={} theta={:.12e}", p.a, p.abar, p.theta),
                );
            }
            Ok(r)
        }
        Verb::Chart { surface, output } => {
            let s = read(&surface)?;
            let cut = cut_along_forest(&s).map_err(domain)?;
            let sys = assemble_system(&cut).map_err(domain)?;
            let mut r = Report::new("chart", convention(&s));
            r.put("columns", sys.num_columns());
            r.put("rows", sys.num_rows());
            r.put("rank", sys.rank);
            r.put("dim", sys.dim());
            r.put("fingerprint", format!("{:016x}", sys.fingerprint()));
            r.num("residual", sys.residual(&solution_vector(&cut)));
            let dump = serde_json::to_string_pretty(&sys.dump()).expect("chart dump serializes");
            write(&output, &dump, &mut r)?;
            Ok(r)
        }
        Verb::Density { surface } => {
            let s = read(&surface)?;
            let sys = assemble_system(&cut_along_forest(&s).map_err(domain)?).map_err(domain)?;
            let d = kernel_density(&sys, &sys.kernel).map_err(domain)?;
            let mut r = Report::new("density", d.convention.tag());
            r.num("value", d.value);
            r.put("frame", "canonical-kernel");
            r.put("fingerprint", format!("{:016x}", d.fingerprint));
            Ok(r)
        }
        Verb::CheckFlipInvariance { surface, moves, seed } => {
            check_flips(&read(&surface)?, moves, require_seed(seed)?)
        }
        Verb::CheckTreeInvariance { surface, tree } => check_trees(&read(&surface)?, tree),
        Verb::ComparePeriod { surface, samples, seed } => {
            let seed = require_seed(seed)?;
            let s = read(&surface)?;
            let mut points = vec![s.clone()];
            points.extend(sample_nearby(&s, samples, seed).map_err(domain)?);
            let rep = period_comparison(&points, 0).map_err(domain)?;
            let mut r = Report::new("compare-period", convention(&s));
            r.list("family", &rep.family);
            for (i, l) in rep.lambdas.iter().enumerate() {
                r.num(&format!("lambda.{i}"), *l);
            }
            r.num("spread", rep.spread);
            r.verdict(rep.spread < 1e-8);
            Ok(r)
        }
        Verb::HypCompare { surface, samples, seed } => {
            let seed = require_seed(seed)?;
            let s = read(&surface)?;
            let last = s.num_vertices().saturating_sub(1);
            let scan = ratio_scan(&s, last, samples, seed).map_err(domain)?;
            let mut r = Report::new("hyp-compare", convention(&s));
            r.put("last_vertex", last);
            r.num("c0", scan.c0);
            r.num("c0_over_4", scan.c0 / 4.0);
            r.num("area_residual", scan.area_residual);
            for (i, x) in scan.ratios.iter().enumerate() {
                r.num(&format!("ratio.{i}"), *x);
            }
            r.num("spread", scan.spread);
            r.verdict(scan.spread < 1e-6);
            Ok(r)
        }
        Verb::Make { kind } => make(kind),
    }
}

fn validate(path: &Path) -> Outcome {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    match Surface::from_json(&text) {
        Ok(s) => {
            let mut r = Report::new("validate", convention(&s));
            r.put("valid", true);
            r.put("vertices", s.num_vertices());
            r.put("genus", s.genus());
            r.list("angles", s.cone_angles().iter().map(|a| format!("{a:.12}")));
            r.num("gauss_bonnet_residual", s.gauss_bonnet_residual());
            r.verdict(true);
            Ok(r)
        }
        Err(e) => {
            let mut r = Report::new("validate", "none");
            r.put("valid", false);
            let Failure::Domain { code, message } = domain(&e) else {
                unreachable!()
            };
            r.put("error", code);
            r.put("message", message);
            r.verdict(false);
            Ok(r)
        }
    }
}

fn info(s: &Surface) -> Outcome {
    let cut = cut_along_forest(s).map_err(domain)?;
    let sys = assemble_system(&cut).map_err(domain)?;
    let mut r = Report::new("info", convention(s));
    r.put("vertices", s.num_vertices());
    r.put("genus", s.genus());
    r.put("edges", cut.num_edges());
    r.put("triangles", s.num_triangles());
    r.put("rows", cut.num_rows());
    r.put("rank", sys.rank);
    r.put("kernel_dim", sys.dim());
    r.put("translation", s.is_translation());
    r.list("angles", s.cone_angles().iter().map(|a| format!("{a:.12}")));
    r.list("forest", s.forest());
    r.num("area", s.total_area());
    r.num("gauss_bonnet_residual", s.gauss_bonnet_residual());
    Ok(r)
}

fn check_flips(s: &Surface, moves: usize, seed: u64) -> Outcome {
    let sys = assemble_system(&cut_along_forest(s).map_err(domain)?).map_err(domain)?;
    let frame = sys.kernel.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = s.clone();
    let mut r = Report::new("check-flip-invariance", convention(s));
    let mut worst = 0.0f64;
    for i in 0..moves {
        let options: Vec<usize> = current
            .edges()
            .filter(|&e| !current.is_forest_edge(e) && is_flippable(&current, e).unwrap_or(false))
            .collect();
        if options.is_empty() {
            break;
        }
        let e = options[rng.random_range(0..options.len())];
        current = flip(&current, e).map_err(domain)?.0;
        let (a, b) = flip_invariance(s, &current, &frame).map_err(domain)?;
        worst = worst.max(rel(a, b));
        r.put(&format!("move.{i}"), format!("edge={e} ratio={:.15}", b / a));
    }
    r.num("max_deviation", worst);
    r.verdict(worst < 1e-9);
    Ok(r)
}

fn check_trees(s: &Surface, tree: Option<Vec<usize>>) -> Outcome {
    let base = s.forest().clone();
    let targets: Vec<BTreeSet<usize>> = match tree {
        Some(list) => {
            let set: BTreeSet<usize> = list.into_iter().map(|e| s.edge_id(e.min(s.num_half_edges() - 1))).collect();
            vec![set]
        }
        None => single_exchanges(s, &base),
    };
    let mut r = Report::new("check-tree-invariance", convention(s));
    r.list("forest", &base);
    let mut worst = 0.0f64;
    for (i, t) in targets.iter().enumerate() {
        let cmp = cut_glue_invariance(s, &base, t, None).map_err(domain)?;
        worst = worst.max((cmp.ratio - 1.0).abs());
        let edges: Vec<String> = t.iter().map(|e| e.to_string()).collect();
        r.put(&format!("tree.{i}"), format!("[{}] ratio={:.15}", edges.join(", "), cmp.ratio));
    }
    r.put("pairs", targets.len());
    r.num("max_deviation", worst);
    r.verdict(worst < 1e-9);
    Ok(r)
}

fn single_exchanges(s: &Surface, base: &BTreeSet<usize>) -> Vec<BTreeSet<usize>> {
    let Some(components) = forest_components(s, base) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for &drop in base {
        for add in s.edges().filter(|e| !base.contains(e)) {
            let mut t = base.clone();
            t.remove(&drop);
            t.insert(add);
            let same = forest_components(s, &t).is_some_and(|c| {
                c.iter().max() == components.iter().max() && is_erasing(s, &t).erasing
            });
            if same && !out.contains(&t) {
                out.push(t);
            }
        }
    }
    out
}

fn make(kind: Shape) -> Outcome {
    let c = |(re, im): (f64, f64)| Complex::new(re, im);
    let (s, output) = match kind {
        Shape::Torus { u, v, output } => (make_torus(c(u), c(v)), output),
        Shape::Polygon { sides, output } => (make_doubled_polygon(&regular_polygon(sides, 1.0)), output),
        Shape::Pillowcase { output } => (make_pillowcase(), output),
        Shape::Gon { genus, output } => (make_regular_4g_gon(genus), output),
    };
    let s: Surface = s.map_err(domain)?;
    let mut r = Report::new("make", convention(&s));
    r.put("vertices", s.num_vertices());
    r.put("genus", s.genus());
    write(&output, &s.to_json(), &mut r)?;
    Ok(r)
}
