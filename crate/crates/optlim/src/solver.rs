//! Multi-start Newton solver for hyperbolicity systems, solution
//! classification and the conversions between side and region variables.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Slot, TangleGraph, Variables, Vertex};
use crate::numerics::{dprime, is_degenerate, prime, Cx, EPS_SOLVE};
use crate::potential::{corner_ratio, corner_sigma, ShapeProduct};
use crate::triangulation::Triangulation;

/// Distance below which a shape counts as degenerate.
pub const ESSENTIAL_TOL: f64 = 1e-8;

/// Max-norm distance below which two solutions are identified.
pub const DEDUP_TOL: f64 = 1e-6;

/// Errors raised by the solver and the conversions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no seed converged ({seeds} seeds, best residual {best_residual:e})")]
    NoConvergence { seeds: usize, best_residual: f64 },
    #[error("empty system")]
    EmptySystem,
    #[error("converted solution is not essential: {0}")]
    NonEssentialImage(String),
    #[error("conversion is inconsistent (mismatch {0:e})")]
    Inconsistent(f64),
}

/// Search parameters for [`solve`].
#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub seeds: usize,
    pub rng_seed: u64,
    pub tol: f64,
    pub max_iter: usize,
    pub threads: Option<usize>,
    /// Starting points tried before the random ones.
    pub extra_seeds: Vec<Vec<Cx>>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seeds: 200, rng_seed: 1, tol: EPS_SOLVE, max_iter: 120, threads: None, extra_seeds: Vec::new() }
    }
}

/// A solution of a hyperbolicity system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution {
    pub values: Vec<Cx>,
    pub residual: f64,
    pub essential: bool,
    pub shapes: Vec<Cx>,
    pub volume: f64,
    pub geometric: bool,
    pub positively_oriented: bool,
}

impl Solution {
    fn new(values: Vec<Cx>, residual: f64) -> Self {
        Solution {
            values,
            residual,
            essential: false,
            shapes: Vec::new(),
            volume: 0.0,
            geometric: false,
            positively_oriented: false,
        }
    }
}

/// Deduplicated solutions in canonical order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    pub solutions: Vec<Solution>,
    pub seeds_tried: usize,
    pub converged: usize,
    pub geometric: Option<usize>,
}

/// Max-norm residual `max |P_l(x) - 1|`.
pub fn residual(system: &[ShapeProduct], x: &[Cx]) -> f64 {
    system.iter().map(|e| (e.eval(x) - 1.0).norm()).fold(0.0, f64::max)
}

fn eval_system(system: &[ShapeProduct], x: &[Cx]) -> Option<(DVector<Cx>, DMatrix<Cx>)> {
    let n = x.len();
    let mut f = DVector::zeros(system.len());
    let mut j = DMatrix::zeros(system.len(), n);
    for (l, e) in system.iter().enumerate() {
        let (v, g) = e.eval_with_log_gradient(x);
        if !v.is_finite() || g.iter().any(|z| !z.is_finite()) {
            return None;
        }
        f[l] = v - 1.0;
        for k in 0..n {
            j[(l, k)] = g[k];
        }
    }
    Some((f, j))
}

/// Damped Newton iteration in logarithmic coordinates from `x0`.
pub fn newton(system: &[ShapeProduct], x0: &[Cx], opts: &SolveOptions) -> Option<Vec<Cx>> {
    let mut x = x0.to_vec();
    let (mut f, mut j) = eval_system(system, &x)?;
    let mut polish = 0;
    for _ in 0..opts.max_iter {
        let fmax = f.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if fmax < 1e-14 || (fmax < opts.tol * 1e-2 && polish >= 2) {
            break;
        }
        if fmax < opts.tol * 1e-2 {
            polish += 1;
        }
        let rhs = -f.clone();
        let dy = j.clone().svd(true, true).solve(&rhs, 1e-14).ok()?;
        let n0 = f.norm();
        let mut lambda = 1.0;
        loop {
            let xn: Vec<Cx> = x.iter().zip(dy.iter()).map(|(xi, d)| xi * (d * lambda).exp()).collect();
            if xn.iter().all(|z| z.is_finite() && z.norm() > 1e-12 && z.norm() < 1e12) {
                if let Some((fn_, jn)) = eval_system(system, &xn) {
                    if fn_.norm() < n0 * (1.0 - 0.25 * lambda) || (n0 < 1e-12 && fn_.norm() <= n0) {
                        x = xn;
                        f = fn_;
                        j = jn;
                        break;
                    }
                }
            }
            lambda *= 0.5;
            if lambda < 1e-4 {
                return if residual(system, &x) <= opts.tol { Some(x) } else { None };
            }
        }
    }
    if residual(system, &x) <= opts.tol {
        Some(x)
    } else {
        None
    }
}

fn random_seed(rng: &mut ChaCha8Rng, n: usize) -> Vec<Cx> {
    (0..n)
        .map(|_| {
            let r = 10f64.powf(rng.gen_range(-1.0..=1.0));
            let th = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            Cx::from_polar(r, th)
        })
        .collect()
}

fn structured_seed(rng: &mut ChaCha8Rng, n: usize) -> Vec<Cx> {
    let base = Cx::from_polar(1.0, std::f64::consts::FRAC_PI_3);
    (0..n)
        .map(|_| {
            let k: i32 = rng.gen_range(-2..=2);
            base.powi(k) * Cx::new(1.0 + rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05))
        })
        .collect()
}

fn max_dist(a: &[Cx], b: &[Cx]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Finds numerically distinct solutions of `{P_l(x) = 1}` from seeded
/// starting points; the result depends only on the options, not on the
/// thread count.
pub fn solve(system: &[ShapeProduct], nvars: usize, opts: &SolveOptions) -> Result<SolutionSet, SolveError> {
    if system.is_empty() || nvars == 0 {
        return Err(SolveError::EmptySystem);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.rng_seed);
    let mut starts: Vec<Vec<Cx>> = opts.extra_seeds.iter().filter(|s| s.len() == nvars).cloned().collect();
    let structured = opts.seeds / 5;
    for k in 0..opts.seeds {
        if k < structured {
            starts.push(structured_seed(&mut rng, nvars));
        } else {
            starts.push(random_seed(&mut rng, nvars));
        }
    }
    let run = || -> Vec<Option<Vec<Cx>>> { starts.par_iter().map(|s| newton(system, s, opts)).collect() };
    let results = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map(|pool| pool.install(run))
            .unwrap_or_else(|_| run()),
        None => run(),
    };
    let converged = results.iter().filter(|r| r.is_some()).count();
    let mut sols: Vec<Solution> = Vec::new();
    for x in results.into_iter().flatten() {
        if sols.iter().all(|s| max_dist(&s.values, &x) > DEDUP_TOL) {
            let r = residual(system, &x);
            sols.push(Solution::new(x, r));
        }
    }
    if sols.is_empty() {
        let best = starts.iter().map(|s| residual(system, s)).fold(f64::INFINITY, f64::min);
        return Err(SolveError::NoConvergence { seeds: starts.len(), best_residual: best });
    }
    sols.sort_by(|a, b| {
        for (x, y) in a.values.iter().zip(&b.values) {
            let c = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
            if c != std::cmp::Ordering::Equal {
                return c;
            }
        }
        std::cmp::Ordering::Equal
    });
    Ok(SolutionSet { solutions: sols, seeds_tried: starts.len(), converged, geometric: None })
}

/// Sets essential and orientation flags, volumes, and marks the essential
/// solution of largest volume as geometric.
pub fn classify(mut set: SolutionSet, t: &Triangulation) -> SolutionSet {
    for s in set.solutions.iter_mut() {
        s.shapes = t.shapes(&s.values);
        s.essential = s.shapes.iter().all(|u| !is_degenerate(*u, ESSENTIAL_TOL));
        s.positively_oriented = s.essential && s.shapes.iter().all(|u| u.im > 0.0);
        s.volume = if s.essential { t.volume(&s.values).unwrap_or(f64::NAN) } else { f64::NAN };
        s.geometric = false;
    }
    let best = set
        .solutions
        .iter()
        .enumerate()
        .filter(|(_, s)| s.essential && s.volume.is_finite())
        .max_by(|a, b| a.1.volume.total_cmp(&b.1.volume))
        .map(|(i, _)| i);
    if let Some(i) = best {
        set.solutions[i].geometric = true;
    }
    set.geometric = best;
    set
}

fn slot_value(slot: Slot, x: &[Cx]) -> Option<Cx> {
    match slot {
        Slot::Zero => None,
        Slot::One => Some(Cx::new(1.0, 0.0)),
        Slot::Var(i) => Some(x[i]),
    }
}

/// Propagates values over equations `v[a] = f · v[b]` from known seeds.
fn propagate(values: &mut [Option<Cx>], eqs: &[(usize, usize, Cx)]) -> Result<(), SolveError> {
    loop {
        let mut changed = false;
        for &(a, b, f) in eqs {
            match (values[a], values[b]) {
                (None, Some(vb)) => {
                    values[a] = Some(f * vb);
                    changed = true;
                }
                (Some(va), None) => {
                    values[b] = Some(va / f);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let mut err: f64 = 0.0;
    for &(a, b, f) in eqs {
        if let (Some(va), Some(vb)) = (values[a], values[b]) {
            err = err.max((va - f * vb).norm() / va.norm().max(1.0));
        }
    }
    if err > 1e-7 {
        return Err(SolveError::Inconsistent(err));
    }
    Ok(())
}

fn corner_t(g: &TangleGraph, vars: &Variables, v: &Vertex, l: usize, z: &[Cx]) -> Cx {
    corner_ratio(g, vars, v, l).eval(z)
}

/// Region values induced by a side solution through the shape relations of
/// the 4-5 and 3-2 moves.
pub fn convert_z_to_w(
    z: &[Cx],
    g: &TangleGraph,
    vars: &Variables,
    thurston: &Triangulation,
) -> Result<Vec<Cx>, SolveError> {
    let mut eqs = Vec::new();
    for v in &g.vertices {
        for x in 0..4 {
            if v.removed_arm == Some(x) {
                continue;
            }
            let (c1, c2) = ((x + 3) % 4, x);
            let (r1, r2) = (v.corner_region[c1], v.corner_region[c2]);
            if r1 == g.unbounded || r2 == g.unbounded {
                continue;
            }
            let mut fac = Cx::new(1.0, 0.0);
            for c in [c1, c2] {
                if g.corner_alive(v, c) {
                    let t = corner_t(g, vars, v, c, z);
                    if is_degenerate(t, ESSENTIAL_TOL) {
                        return Err(SolveError::NonEssentialImage(format!("corner shape {t}")));
                    }
                    fac *= if corner_sigma(c) > 0 { prime(t) } else { dprime(t) };
                }
            }
            let (plus, minus) = if corner_sigma(c1) > 0 { (r1, r2) } else { (r2, r1) };
            eqs.push((minus, plus, fac));
        }
    }
    let mut values = vec![None; g.regions.len()];
    values[vars.unit_region] = Some(Cx::new(1.0, 0.0));
    propagate(&mut values, &eqs)?;
    let mut w = vec![Cx::new(0.0, 0.0); vars.m];
    for (r, slot) in vars.region.iter().enumerate() {
        if let Slot::Var(i) = slot {
            w[*i] = values[r].ok_or_else(|| SolveError::NonEssentialImage(format!("region {r} unreached")))?;
        }
    }
    for (t, u) in thurston.tetrahedra.iter().zip(thurston.shapes(&w)) {
        if is_degenerate(u, ESSENTIAL_TOL) {
            return Err(SolveError::NonEssentialImage(format!("{}@{} = {u}", t.name, t.crossing)));
        }
    }
    Ok(w)
}

/// Thurston shape on arm `x` of vertex `v`: ratio of the region values of its
/// negative corner over its positive corner.
fn arm_shape(v: &Vertex, x: usize, wr: &[Option<Cx>]) -> Option<Cx> {
    let (c1, c2) = ((x + 3) % 4, x);
    let (plus, minus) = if corner_sigma(c1) > 0 { (c1, c2) } else { (c2, c1) };
    Some(wr[v.corner_region[minus]]? / wr[v.corner_region[plus]]?)
}

/// Side values induced by a region solution; sides on the unbounded region
/// keep the value `1`.
pub fn convert_w_to_z(w: &[Cx], g: &TangleGraph, vars: &Variables) -> Result<Vec<Cx>, SolveError> {
    let wr: Vec<Option<Cx>> = vars.region.iter().map(|&s| slot_value(s, w)).collect();
    let bad = |what: String| SolveError::NonEssentialImage(what);
    let mut eqs: Vec<(usize, usize, Cx)> = Vec::new();
    for v in &g.vertices {
        let alive: Vec<usize> = (0..4).filter(|&l| g.corner_alive(v, l)).collect();
        let mut t = [None; 4];
        let arm = |x: usize| arm_shape(v, x, &wr).ok_or_else(|| bad(format!("arm {x} at {}", v.crossing)));
        match (v.removed_arm, alive.len()) {
            (None, 4) => {
                let (u1, u2, u3, u4) = (arm(2)?, arm(3)?, arm(0)?, arm(1)?);
                let u5 = (u1 * u3).inv();
                t[2] = Some(dprime(u1) * dprime(u2) * prime(u5));
                t[3] = Some(prime(u2) * prime(u3) * dprime(u5));
                t[0] = Some(dprime(u3) * dprime(u4) * prime(u5));
                t[1] = Some(prime(u4) * prime(u1) * dprime(u5));
            }
            (None, 3) => {
                let missing = (0..4).find(|l| !alive.contains(l)).expect("one corner missing");
                let (c1, c2, c3) = ((missing + 1) % 4, (missing + 2) % 4, (missing + 3) % 4);
                let (x, y) = (arm(c2)?, arm(c3)?);
                if corner_sigma(c2) > 0 {
                    t[c2] = Some(dprime(x) * dprime(y));
                    t[c1] = Some(prime(x) * y);
                    t[c3] = Some(x * prime(y));
                } else {
                    t[c2] = Some(prime(x) * prime(y));
                    t[c1] = Some(dprime(x) * y);
                    t[c3] = Some(x * dprime(y));
                }
            }
            (Some(dl), _) => {
                for &c in &alive {
                    let outer = if c == (dl + 1) % 4 { c } else { (c + 1) % 4 };
                    let u = arm(outer)?;
                    t[c] = Some(if corner_sigma(c) > 0 { dprime(u) } else { prime(u) });
                }
            }
            (None, k) => {
                if k != 0 {
                    return Err(bad(format!("{k} surviving corners at crossing {}", v.crossing)));
                }
            }
        }
        for &c in &alive {
            let tv = t[c].ok_or_else(|| bad(format!("corner {c} at {}", v.crossing)))?;
            if is_degenerate(tv, ESSENTIAL_TOL) {
                return Err(bad(format!("corner shape {tv} at crossing {}", v.crossing)));
            }
            let (Some(s1), Some(s0)) = (g.arm_side(v.crossing, (c + 1) % 4), g.arm_side(v.crossing, c)) else {
                return Err(bad(format!("corner {c} at {} touches a removed arm", v.crossing)));
            };
            eqs.push((s1, s0, tv));
        }
    }
    let mut values: Vec<Option<Cx>> =
        vars.side.iter().map(|s| if *s == Slot::One { Some(Cx::new(1.0, 0.0)) } else { None }).collect();
    propagate(&mut values, &eqs)?;
    let mut z = vec![Cx::new(0.0, 0.0); vars.g];
    for (s, slot) in vars.side.iter().enumerate() {
        if let Slot::Var(i) = slot {
            z[*i] = values[s].ok_or_else(|| bad(format!("side {s} unreached")))?;
        }
    }
    Ok(z)
}

/// Classified solutions of both hyperbolicity systems of a tangle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedSolutions {
    pub v: SolutionSet,
    pub w: SolutionSet,
}

fn solve_or_empty(system: &[ShapeProduct], n: usize, opts: &SolveOptions) -> Result<SolutionSet, SolveError> {
    match solve(system, n, opts) {
        Err(SolveError::NoConvergence { seeds, .. }) => {
            Ok(SolutionSet { solutions: Vec::new(), seeds_tried: seeds, converged: 0, geometric: None })
        }
        r => r,
    }
}

/// Solves both systems, seeding each with the images of the essential
/// solutions of the other under the conversions.
pub fn solve_both(
    g: &TangleGraph,
    vars: &Variables,
    v_system: &[ShapeProduct],
    w_system: &[ShapeProduct],
    yokota: &Triangulation,
    thurston: &Triangulation,
    opts: &SolveOptions,
) -> Result<PairedSolutions, SolveError> {
    let v1 = classify(solve_or_empty(v_system, vars.g, opts)?, yokota);
    let mut w_opts = opts.clone();
    w_opts.extra_seeds.extend(
        v1.solutions
            .iter()
            .filter(|s| s.essential)
            .filter_map(|s| convert_z_to_w(&s.values, g, vars, thurston).ok()),
    );
    let w = classify(solve_or_empty(w_system, vars.m, &w_opts)?, thurston);
    let mut v_opts = opts.clone();
    v_opts.extra_seeds.extend(
        w.solutions.iter().filter(|s| s.essential).filter_map(|s| convert_w_to_z(&s.values, g, vars).ok()),
    );
    let v = classify(solve_or_empty(v_system, vars.g, &v_opts)?, yokota);
    if v.solutions.is_empty() && w.solutions.is_empty() {
        let best = residual(w_system, &vec![Cx::new(1.0, 1.0); vars.m]);
        return Err(SolveError::NoConvergence { seeds: v.seeds_tried + w.seeds_tried, best_residual: best });
    }
    Ok(PairedSolutions { v, w })
}
