mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{figure_eight_volume, random_point, rel, solved, Solved};
use nalgebra::Matrix3;
use optlim::cli::{compute, hyperbolic_fixtures, prepare, ComputeArgs};
use optlim::identities::{check_cancellation, run_lemma31, run_lemma5, run_moves, SuiteReport};
use optlim::numerics::*;
use optlim::potential::kashaev_5_2;
use optlim::solver::{convert_w_to_z, convert_z_to_w, solve, SolveOptions};
use optlim::triangulation::{region_variable_classes, verify_cusp, verify_edge_relations};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg)
    }
}

fn within(elapsed: Duration, limit: f64) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit, format!("took {:.2} s, limit {limit} s", elapsed.as_secs_f64()))
}

fn suite_summary(r: &SuiteReport) -> Result<String, String> {
    let mut worst = Vec::new();
    for c in &r.checks {
        if !c.passed {
            return Err(format!("{}: max residual {:e} > {:e} ({:?})", c.name, c.max_residual, c.tolerance, c.failures.first()));
        }
        worst.push(c.max_residual);
    }
    Ok(format!("{} checks, worst residual {:e}", r.checks.len(), worst.iter().cloned().fold(0.0, f64::max)))
}

fn kashaev() -> Outcome {
    let t = Instant::now();
    let f = kashaev_5_2();
    let set = solve(&f.system(), 2, &SolveOptions::default()).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let z0 = Cx::new(0.3376, -0.5623);
    let u0 = Cx::new(0.1226, 0.7449);
    let hit = set
        .solutions
        .iter()
        .find(|s| (s.values[0] - z0).norm() < 1e-3 && (s.values[1] - u0).norm() < 1e-3)
        .ok_or("printed solution not found")?;
    let round4 = |x: f64| (x * 1e4).round() / 1e4;
    for (got, want) in [(hit.values[0], z0), (hit.values[1], u0)] {
        ensure(
            round4(got.re) == want.re && round4(got.im) == want.im,
            format!("{got} does not round to {want}"),
        )?;
    }
    let f0 = f.flattened(&hit.values).map_err(|e| e.to_string())?;
    let want = Cx::new(0.0, 1.0) * Cx::new(2.8281, -3.0241);
    ensure(
        (f0.re - want.re).abs() <= 1e-3 && (f0.im - want.im).abs() <= 1e-3,
        format!("F0 = {f0}, expected {want}"),
    )?;
    let companion = Matrix3::new(0.0, 0.0, 1.0, 1.0, 0.0, -2.0, 0.0, 1.0, 3.0);
    let roots: Vec<Cx> = companion.complex_eigenvalues().iter().map(|c| Cx::new(c.re, c.im)).collect();
    let mut worst: f64 = 0.0;
    for s in &set.solutions {
        let d = roots.iter().map(|r| (r - s.values[0]).norm()).fold(f64::INFINITY, f64::min);
        worst = worst.max(d);
    }
    ensure(worst <= 1e-10, format!("z differs from the cubic roots by {worst:e}"))?;
    within(elapsed, 1.0)?;
    Ok(format!("F0 = {f0:.6}, cubic root error {worst:e}, {:.3} s", elapsed.as_secs_f64()))
}

fn figure_eight() -> Outcome {
    let t = Instant::now();
    let r = compute(&ComputeArgs::for_knot("4_1")).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    let oracle = figure_eight_volume();
    ensure((r.w0.im - oracle).abs() <= 1e-6, format!("Im W0 = {}, oracle {oracle}", r.w0.im))?;
    within(elapsed, 10.0)?;
    Ok(format!("Im W0 = {:.9}, oracle {oracle:.9}, {:.3} s", r.w0.im, elapsed.as_secs_f64()))
}

fn five_two() -> Outcome {
    let t = Instant::now();
    let r = compute(&ComputeArgs::for_knot("5_2")).map_err(|e| e.to_string())?;
    let elapsed = t.elapsed();
    ensure((r.w0.im - 2.8281).abs() <= 1e-3, format!("Im W0 = {}", r.w0.im))?;
    let cs = reduce_mod(-r.w0.re, PI2);
    let want = reduce_mod(3.0241, PI2);
    ensure((cs - want).abs() <= 1e-3, format!("-Re W0 mod pi^2 = {cs}, expected {want}"))?;
    within(elapsed, 30.0)?;
    Ok(format!("Im W0 = {:.6}, -Re W0 mod pi^2 = {cs:.6}, {:.3} s", r.w0.im, elapsed.as_secs_f64()))
}

fn pair_values(fixtures: &[Solved]) -> Outcome {
    let mut worst_im: f64 = 0.0;
    let mut worst_re: f64 = 0.0;
    let mut pairs = 0;
    for s in fixtures {
        let (g, vars) = (&s.p.graph, &s.p.vars);
        let mut pairs_here: Vec<(Vec<Cx>, Vec<Cx>)> = Vec::new();
        for w in s.essential_w() {
            pairs_here.push((convert_w_to_z(&w.values, g, vars).map_err(|e| e.to_string())?, w.values.clone()));
        }
        for z in s.essential_v() {
            if let Ok(w) = convert_z_to_w(&z.values, g, vars, &s.p.thurston) {
                pairs_here.push((z.values.clone(), w));
            }
        }
        for (z, w) in pairs_here {
            let d = s.p.v.flattened(&z).map_err(|e| e.to_string())? - s.p.w.flattened(&w).map_err(|e| e.to_string())?;
            worst_im = worst_im.max(d.im.abs());
            worst_re = worst_re.max(reduce_mod(d.re, FOUR_PI2).abs());
            pairs += 1;
        }
    }
    ensure(pairs > 0, "no essential pairs".into())?;
    ensure(worst_im <= 1e-9, format!("Im(V0 - W0) up to {worst_im:e}"))?;
    ensure(worst_re <= 1e-9, format!("Re(V0 - W0) off 4pi^2 Z by {worst_re:e}"))?;
    Ok(format!("{pairs} pairs, Im {worst_im:e}, Re mod 4pi^2 {worst_re:e}"))
}

fn octahedra() -> Outcome {
    let t = Instant::now();
    let r = run_lemma5(10_000, 1);
    let elapsed = t.elapsed();
    let s = suite_summary(&r)?;
    within(elapsed, 30.0)?;
    Ok(format!("{s}, {:.3} s", elapsed.as_secs_f64()))
}

fn crossing_forms() -> Outcome {
    suite_summary(&run_lemma31(1000, 1))
}

fn structure(fixtures: &[Solved]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = 0.0;
    for name in hyperbolic_fixtures() {
        let p = prepare(&ComputeArgs::for_knot(name)).map_err(|e| e.to_string())?;
        let classes = region_variable_classes(&p.thurston, &p.graph, &p.vars);
        for _ in 0..100 {
            let x = random_point(&mut rng, p.vars.m);
            let shapes = p.thurston.shapes(&x);
            for &(l, ci) in &classes {
                let ci = ci.ok_or(format!("{name}: region variable {l} has no class-A edge"))?;
                let lhs = p.w.shape_product_form(l).eval(&x);
                worst = worst.max(rel(lhs, p.thurston.class_product(ci, &shapes)));
            }
        }
    }
    ensure(worst <= 1e-12, format!("shape-product forms differ from edge products by {worst:e}"))?;
    let mut geo: f64 = 0.0;
    for s in fixtures {
        let x = &s.geometric_w().values;
        let e = verify_edge_relations(&s.p.thurston, x).map_err(|e| e.to_string())?.max_residual;
        let c = verify_cusp(&s.p.thurston, x).map_err(|e| e.to_string())?;
        geo = geo.max(e).max(c);
    }
    ensure(geo <= 1e-9, format!("edge or cusp residual {geo:e} at the geometric solution"))?;
    Ok(format!("form residual {worst:e}, geometric edge/cusp residual {geo:e}"))
}

fn moves(fixtures: &[Solved]) -> Outcome {
    let r = run_moves(10_000, 1);
    let vol = r.checks.iter().filter(|c| c.name.ends_with("volume")).cloned().collect();
    let s = suite_summary(&SuiteReport::new("moves", r.samples, r.rng_seed, vol))?;
    let mut worst: f64 = 0.0;
    for f in fixtures {
        let (g, vars) = (&f.p.graph, &f.p.vars);
        for z in f.essential_v() {
            let Ok(w) = convert_z_to_w(&z.values, g, vars, &f.p.thurston) else { continue };
            let back = convert_w_to_z(&w, g, vars).map_err(|e| e.to_string())?;
            worst = worst.max(back.iter().zip(&z.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
    }
    ensure(worst <= 1e-9, format!("z -> w -> z error {worst:e}"))?;
    Ok(format!("volume: {s}; round trip {worst:e}"))
}

fn maximality(fixtures: &[Solved]) -> Outcome {
    let mut gap = f64::INFINITY;
    for s in fixtures {
        let gi = s.sols.w.geometric.ok_or("no geometric solution")?;
        let vmax = s.p.w.flattened(&s.sols.w.solutions[gi].values).map_err(|e| e.to_string())?.im;
        for (k, w) in s.sols.w.solutions.iter().enumerate().filter(|(_, w)| w.essential) {
            let v = s.p.w.flattened(&w.values).map_err(|e| e.to_string())?.im;
            ensure(v <= vmax + 1e-9, format!("Im W0 = {v} exceeds the geometric {vmax}"))?;
            if k != gi {
                ensure(v < vmax - 1e-9, format!("Im W0 = {v} equals the geometric value away from it"))?;
                gap = gap.min(vmax - v);
            }
        }
    }
    Ok(format!("smallest gap below the geometric value {gap:.6}"))
}

fn cancellation(all: &[Solved]) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for s in all {
        let (g, vars) = (&s.p.graph, &s.p.vars);
        for w in s.essential_w() {
            let z = convert_w_to_z(&w.values, g, vars).map_err(|e| e.to_string())?;
            worst = worst.max(check_cancellation(g, vars, &z, &w.values));
            pairs += 1;
        }
    }
    ensure(pairs > 0, "no essential pairs".into())?;
    ensure(worst <= 1e-9, format!("sum of remaining terms {worst:e}"))?;
    Ok(format!("{pairs} pairs, worst {worst:e}"))
}

fn main() -> ExitCode {
    let all: Vec<Solved> = hyperbolic_fixtures().into_iter().map(solved).collect();
    let anchored: Vec<Solved> = ["4_1", "5_2"].into_iter().map(solved).collect();
    let criteria: Vec<Criterion> = vec![
        ("Kashaev potential of 5_2", Box::new(kashaev)),
        ("figure-eight volume", Box::new(figure_eight)),
        ("5_2 complex volume", Box::new(five_two)),
        ("side and region potentials agree", Box::new(|| pair_values(&anchored))),
        ("octahedron identities", Box::new(octahedra)),
        ("crossing forms agree", Box::new(crossing_forms)),
        ("hyperbolicity equations are gluing equations", Box::new(|| structure(&all))),
        ("move invariance", Box::new(|| moves(&all))),
        ("geometric solution maximises volume", Box::new(|| maximality(&anchored))),
        ("remaining terms cancel", Box::new(|| cancellation(&all))),
    ];
    let mut failed = 0;
    for (n, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = check();
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {}: {name}: {msg} ({secs:.2} s)", n + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {msg} ({secs:.2} s)", n + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
