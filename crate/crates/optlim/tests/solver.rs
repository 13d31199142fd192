mod common;

use common::{figure_eight_volume, solved};
use nalgebra::{Complex, Matrix3};
use optlim::numerics::*;
use optlim::potential::{kashaev_5_2, ShapeProduct};
use optlim::solver::*;

/// Roots of `z³ - 3z² + 2z - 1` as eigenvalues of its companion matrix.
fn cubic_roots() -> Vec<Cx> {
    let m = Matrix3::new(0.0, 0.0, 1.0, 1.0, 0.0, -2.0, 0.0, 1.0, 3.0);
    m.complex_eigenvalues().iter().map(|c: &Complex<f64>| Cx::new(c.re, c.im)).collect()
}

#[test]
fn kashaev_solutions() {
    let f = kashaev_5_2();
    let set = solve(&f.system(), 2, &SolveOptions::default()).unwrap();
    assert!(set.solutions.iter().all(|s| s.residual <= EPS_SOLVE));
    let z0 = Cx::new(0.3376, -0.5623);
    let u0 = Cx::new(0.1226, 0.7449);
    let hit = set
        .solutions
        .iter()
        .find(|s| (s.values[0] - z0).norm() < 1e-4 && (s.values[1] - u0).norm() < 1e-4)
        .expect("printed solution found");
    assert!(((hit.values[0].re * 1e4).round() - 3376.0).abs() < 1.0);
    assert!(((hit.values[1].im * 1e4).round() - 7449.0).abs() < 1.0);

    let roots = cubic_roots();
    for s in &set.solutions {
        let z = s.values[0];
        let d = roots.iter().map(|r| (r - z).norm()).fold(f64::INFINITY, f64::min);
        assert!(d < 1e-10, "z = {z} is not a root of the cubic");
        let one = Cx::new(1.0, 0.0);
        assert!((s.values[1] - (one - z) * (one - z)).norm() < 1e-9);
    }
    assert_eq!(set.solutions.len(), 3);
}

#[test]
fn inconsistent_system_does_not_converge() {
    // exp(w ∂p/∂w) = -1 has no solution.
    let system = vec![ShapeProduct { sign: -1, factors: Vec::new() }];
    let opts = SolveOptions { seeds: 20, ..SolveOptions::default() };
    assert!(matches!(solve(&system, 1, &opts), Err(SolveError::NoConvergence { .. })));
    assert!(matches!(solve(&[], 0, &opts), Err(SolveError::EmptySystem)));
}

#[test]
fn solving_is_deterministic() {
    let f = kashaev_5_2();
    let a = solve(&f.system(), 2, &SolveOptions { rng_seed: 5, ..SolveOptions::default() }).unwrap();
    let b = solve(&f.system(), 2, &SolveOptions { rng_seed: 5, ..SolveOptions::default() }).unwrap();
    let c = solve(&f.system(), 2, &SolveOptions { rng_seed: 5, threads: Some(1), ..SolveOptions::default() }).unwrap();
    assert_eq!(a, b);
    assert_eq!(a, c);
    // Non-essential solutions carry a NaN volume, so compare renderings.
    let s1 = solved("5_2");
    let s2 = solved("5_2");
    assert_eq!(format!("{:?}", s1.sols), format!("{:?}", s2.sols));
}

#[test]
fn fixture_solutions_satisfy_their_systems() {
    for name in ["4_1", "5_2", "6_1", "6_2", "6_3"] {
        let s = solved(name);
        for sol in &s.sols.w.solutions {
            assert!(residual(&s.p.w.system(), &sol.values) <= EPS_SOLVE, "{name}");
        }
        for sol in &s.sols.v.solutions {
            assert!(residual(&s.p.v.system(), &sol.values) <= EPS_SOLVE, "{name}");
        }
        assert!(s.sols.w.geometric.is_some(), "{name}");
    }
}

#[test]
fn figure_eight_geometric_volume() {
    let s = solved("4_1");
    let oracle = figure_eight_volume();
    assert!((s.geometric_w().volume - oracle).abs() < 1e-6);
    let w0 = s.p.w.flattened(&s.geometric_w().values).unwrap();
    assert!((w0.im - oracle).abs() < 1e-6);
}

#[test]
fn five_two_geometric_volume_and_conjugate() {
    let s = solved("5_2");
    let g = s.geometric_w();
    assert!((g.volume - 2.8281).abs() < 1e-3);
    assert!(g.positively_oriented);
    let conj: Vec<Cx> = g.values.iter().map(|x| x.conj()).collect();
    let partner = s
        .sols
        .w
        .solutions
        .iter()
        .find(|t| t.values.iter().zip(&conj).all(|(a, b)| (a - b).norm() < 1e-8))
        .expect("conjugate solution found");
    assert!((partner.volume + g.volume).abs() < 1e-9);
    assert!(!partner.geometric);
}

#[test]
fn conversions_round_trip_and_preserve_volume() {
    for name in ["4_1", "5_2", "6_1", "6_2", "6_3"] {
        let s = solved(name);
        let (g, vars) = (&s.p.graph, &s.p.vars);
        let mut pairs = 0;
        for z in s.essential_v() {
            let Ok(w) = convert_z_to_w(&z.values, g, vars, &s.p.thurston) else { continue };
            let back = convert_w_to_z(&w, g, vars).unwrap();
            for (a, b) in back.iter().zip(&z.values) {
                assert!((a - b).norm() <= 1e-9, "{name}");
            }
            let vy = s.p.yokota.volume(&z.values).unwrap();
            let vt = s.p.thurston.volume(&w).unwrap();
            assert!((vy - vt).abs() <= 1e-9, "{name}: {vy} vs {vt}");
            assert!(residual(&s.p.w.system(), &w) <= 1e-9, "{name}");
            pairs += 1;
        }
        for w in s.essential_w() {
            let z = convert_w_to_z(&w.values, g, vars).unwrap();
            let back = convert_z_to_w(&z, g, vars, &s.p.thurston).unwrap();
            for (a, b) in back.iter().zip(&w.values) {
                assert!((a - b).norm() <= 1e-9, "{name}");
            }
            assert!(residual(&s.p.v.system(), &z) <= 1e-9, "{name}");
        }
        assert!(pairs > 0, "{name}");
    }
}

#[test]
fn degenerate_inputs_have_no_essential_image() {
    let s = solved("5_2");
    let (g, vars) = (&s.p.graph, &s.p.vars);
    let ones = vec![Cx::new(1.0, 0.0); vars.g];
    assert!(matches!(convert_z_to_w(&ones, g, vars, &s.p.thurston), Err(SolveError::NonEssentialImage(_))));
    let ones = vec![Cx::new(1.0, 0.0); vars.m];
    assert!(matches!(convert_w_to_z(&ones, g, vars), Err(SolveError::NonEssentialImage(_))));
}

#[test]
fn geometric_solution_maximises_volume() {
    for name in ["4_1", "5_2"] {
        let s = solved(name);
        let gi = s.sols.w.geometric.unwrap();
        let vmax = s.p.w.flattened(&s.sols.w.solutions[gi].values).unwrap().im;
        for (k, w) in s.sols.w.solutions.iter().enumerate().filter(|(_, w)| w.essential) {
            let v = s.p.w.flattened(&w.values).unwrap().im;
            assert!(v <= vmax + 1e-9, "{name}");
            if k != gi {
                assert!(v < vmax - 1e-9, "{name}: equality away from the geometric solution");
            }
        }
    }
}

#[test]
fn side_and_region_values_agree_mod_4pi2() {
    for name in ["4_1", "5_2"] {
        let s = solved(name);
        let (g, vars) = (&s.p.graph, &s.p.vars);
        let mut pairs = 0;
        for w in s.essential_w() {
            let z = convert_w_to_z(&w.values, g, vars).unwrap();
            let d = s.p.v.flattened(&z).unwrap() - s.p.w.flattened(&w.values).unwrap();
            assert!(d.im.abs() <= 1e-9, "{name}");
            assert!(reduce_mod(d.re, FOUR_PI2).abs() <= 1e-9, "{name}");
            pairs += 1;
        }
        assert!(pairs >= 2, "{name}");
    }
}
