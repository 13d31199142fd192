mod common;

use std::f64::consts::PI;

use common::{random_point, solved};
use optlim::cli::{hyperbolic_fixtures, prepare, ComputeArgs};
use optlim::diagram::Slot;
use optlim::identities::*;
use optlim::numerics::*;
use optlim::potential::jklm_labels;
use optlim::solver::convert_w_to_z;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const OCTAHEDRON: [u8; 4] = [22, 23, 24, 25];
const COLLAPSED: [u8; 4] = [26, 27, 28, 29];

fn d_sum(z: &[Cx]) -> f64 {
    z.iter().map(|&x| bloch_wigner(x).unwrap()).sum()
}

#[test]
fn calibration_points() {
    let i = Cx::new(0.0, 1.0);
    let s = OctahedronSample::from_t([i; 4]).unwrap();
    assert!((s.u[4] + 1.0).norm() < 1e-15);
    for w in OCTAHEDRON {
        assert!(check_lemma5(&s, w).unwrap() <= 1e-12, "identity {w}");
    }
    let omega = Cx::from_polar(1.0, 2.0 * PI / 3.0);
    for w in COLLAPSED {
        assert!(check_lemma5_collapsed([omega; 3], w).unwrap() <= 1e-12, "identity {w}");
    }
}

#[test]
fn identities_hold_on_constrained_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..2000 {
        let s = sample_octahedron(&mut rng);
        for w in OCTAHEDRON {
            assert!(check_lemma5(&s, w).unwrap() <= 1e-9, "identity {w} at {s:?}");
        }
        for w in COLLAPSED {
            let t = sample_collapsed(&mut rng, w).unwrap();
            assert!(check_lemma5_collapsed(t, w).unwrap() <= 1e-9, "identity {w} at {t:?}");
        }
    }
}

#[test]
fn identities_fail_off_the_constraint_surface() {
    let t = [Cx::new(0.4, 0.9), Cx::new(1.6, -0.3), Cx::new(-0.7, 1.2), Cx::new(0.8, 1.1)];
    let s = OctahedronSample::from_t(t).unwrap();
    for w in OCTAHEDRON {
        assert!(check_lemma5(&s, w).unwrap() > 1e-6, "identity {w}");
    }
    let x = [Cx::new(0.3, 0.7), Cx::new(1.9, 0.4), Cx::new(-1.1, -0.6)];
    for w in COLLAPSED {
        assert!(check_lemma5_collapsed(x, w).unwrap() > 1e-6, "identity {w}");
    }
}

#[test]
fn unknown_identity_numbers_are_rejected() {
    let s = OctahedronSample::from_t([Cx::new(0.0, 1.0); 4]).unwrap();
    assert!(matches!(check_lemma5(&s, 26), Err(IdentityError::UnknownIdentity(26))));
    assert!(matches!(collapsed_indices(21), Err(IdentityError::UnknownIdentity(21))));
}

#[test]
fn residuals_are_invariant_under_rotation() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..500 {
        let s = sample_octahedron(&mut rng);
        let r = s.rotated().unwrap();
        assert!((d_sum(&r.u) - d_sum(&s.u)).abs() < 1e-12);
        for w in OCTAHEDRON {
            assert!(check_lemma5(&r, w).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn imaginary_parts_are_the_volume_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..2000 {
        let s = sample_octahedron(&mut rng);
        let vol = d_sum(&s.t) - d_sum(&s.u);
        assert!(vol.abs() <= 1e-12);
        assert!(volume_residual_45(&s).unwrap() <= 1e-12);
        for w in OCTAHEDRON {
            let im = lemma5_difference(&s, w).unwrap().im;
            assert!(im.abs() <= 1e-12, "identity {w}: {im}");
        }
    }
}

#[test]
fn crossing_forms_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    for _ in 0..1000 {
        let w = sample_crossing_point(&mut rng);
        for sign in [1, -1] {
            let (de, df) = check_crossing_forms(sign, &w).unwrap();
            assert!(de <= 1e-12);
            assert!(df <= 1e-10);
        }
    }
}

#[test]
fn remaining_terms_match_per_vertex_and_cancel() {
    for name in hyperbolic_fixtures() {
        let s = solved(name);
        let (g, vars) = (&s.p.graph, &s.p.vars);
        let mut pairs = 0;
        for w in s.essential_w() {
            let z = convert_w_to_z(&w.values, g, vars).unwrap();
            for v in &g.vertices {
                assert!(check_vertex_remaining(g, vars, v, &z, &w.values).unwrap() <= 1e-9, "{name}");
            }
            assert!(check_cancellation(g, vars, &z, &w.values) <= 1e-9, "{name}");
            pairs += 1;
        }
        assert!(pairs > 0, "{name}");
    }
}

/// `Σ Z_n` telescopes over the sides, so a mismatched pair is only visible
/// vertex by vertex.
#[test]
fn mismatched_pair_breaks_the_vertex_balance() {
    let s = solved("5_2");
    let (g, vars) = (&s.p.graph, &s.p.vars);
    let ws: Vec<_> = s.essential_w().filter(|w| w.volume.abs() > 1.0).collect();
    assert!(ws.len() >= 2);
    let z = convert_w_to_z(&ws[0].values, g, vars).unwrap();
    let worst = g
        .vertices
        .iter()
        .map(|v| check_vertex_remaining(g, vars, v, &z, &ws[1].values).unwrap())
        .fold(0.0, f64::max);
    assert!(worst > 1e-3);
    assert!(check_cancellation(g, vars, &z, &ws[1].values) <= 1e-9);
}

#[test]
fn remaining_term_vanishes_without_side_logarithms() {
    let mut rng = ChaCha8Rng::seed_from_u64(35);
    for name in hyperbolic_fixtures() {
        let p = prepare(&ComputeArgs::for_knot(name)).unwrap();
        let z = vec![Cx::new(1.0, 0.0); p.vars.g];
        let w = random_point(&mut rng, p.vars.m);
        for v in &p.graph.vertices {
            assert_eq!(remaining_term(&p.graph, &p.vars, v, &z, &w), Cx::new(0.0, 0.0));
        }
    }
}

#[test]
fn endpoint_remaining_term_with_unbounded_l_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(36);
    let log_slot = |slot: Slot, x: &[Cx]| match slot {
        Slot::Zero => unreachable!(),
        Slot::One => Cx::new(0.0, 0.0),
        Slot::Var(i) => clog(x[i]).unwrap(),
    };
    let mut found = 0;
    for name in hyperbolic_fixtures() {
        let p = prepare(&ComputeArgs::for_knot(name)).unwrap();
        let (g, vars) = (&p.graph, &p.vars);
        for v in g.vertices.iter().filter(|v| v.removed_arm.is_some()) {
            let [j, k, l, m] = jklm_labels(v.sign).map(|x| v.corner_region[x]);
            if vars.region[l] != Slot::Zero || j != k || vars.region[m] == Slot::Zero {
                continue;
            }
            let z = random_point(&mut rng, vars.g);
            let w = random_point(&mut rng, vars.m);
            let la = match g.arm_side(v.crossing, jklm_labels(v.sign)[0]) {
                Some(s) => log_slot(vars.side[s], &z),
                None => Cx::new(0.0, 0.0),
            };
            let expect = -(log_slot(vars.region[j], &w) - log_slot(vars.region[m], &w)) * la;
            let got = remaining_term(g, vars, v, &z, &w);
            assert!((got - expect).norm() < 1e-12, "{name} crossing {}", v.crossing);
            found += 1;
        }
    }
    assert!(found > 0);
}

#[test]
fn suites_pass_at_small_sample_counts() {
    assert!(run_lemma5(500, 3).passed);
    assert!(run_lemma31(200, 3).passed);
    assert!(run_moves(500, 3).passed);
    assert!(run_numerics(500, 3).passed);
    let r = run_lemma5(100, 4);
    let again = run_lemma5(100, 4);
    assert_eq!(r.to_json(), again.to_json());
}
