#![allow(dead_code)]

use std::f64::consts::PI;

use optlim::cli::{prepare, ComputeArgs, Prepared};
use optlim::numerics::Cx;
use optlim::solver::{solve_both, PairedSolutions, Solution, SolveOptions};
use rand::Rng;

pub struct Solved {
    pub p: Prepared,
    pub sols: PairedSolutions,
}

impl Solved {
    pub fn geometric_w(&self) -> &Solution {
        &self.sols.w.solutions[self.sols.w.geometric.expect("geometric solution found")]
    }

    pub fn essential_w(&self) -> impl Iterator<Item = &Solution> {
        self.sols.w.solutions.iter().filter(|s| s.essential)
    }

    pub fn essential_v(&self) -> impl Iterator<Item = &Solution> {
        self.sols.v.solutions.iter().filter(|s| s.essential)
    }
}

pub fn solved(name: &str) -> Solved {
    let p = prepare(&ComputeArgs::for_knot(name)).unwrap();
    let sols = solve_both(&p.graph, &p.vars, &p.v.system(), &p.w.system(), &p.yokota, &p.thurston, &SolveOptions::default())
        .unwrap();
    Solved { p, sols }
}

/// `2·D(e^{iπ/3}) = 2·Σ sin(nπ/3)/n²`, the volume of the figure-eight complement.
pub fn figure_eight_volume() -> f64 {
    let terms = 2_000_000;
    2.0 * (1..=terms).map(|n| (n as f64 * PI / 3.0).sin() / (n as f64).powi(2)).sum::<f64>()
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Cx> {
    (0..n).map(|_| Cx::from_polar(rng.gen_range(0.3..3.0), rng.gen_range(-PI..PI))).collect()
}

pub fn rel(a: Cx, b: Cx) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
