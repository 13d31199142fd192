//! Numerical checks of the dilogarithm identities of an ideal octahedron,
//! the equivalence of the crossing forms, the shape transport of the 4-5 and
//! 3-2 moves, and the per-crossing remaining terms `V₀ - W₀`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::diagram::{Slot, TangleGraph, Variables, Vertex};
use crate::numerics::{bloch_wigner, clog, dilog, dist_mod_4pi2, is_degenerate, Cx, PI2};
use crate::potential::{crossing_potential, jklm_labels, vertex_v, vertex_w};
use crate::triangulation::{move_32, move_32_inverse, move_45, move_45_inverse};

/// Margin kept between sampled shapes and the points `0` and `1`.
pub const SAMPLE_MARGIN: f64 = 0.05;

/// Outer radius of the sampling annulus.
pub const SAMPLE_RADIUS: f64 = 3.0;

/// Errors raised by the identity checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum IdentityError {
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("unknown identity {0}")]
    UnknownIdentity(u8),
}

/// Shapes of an octahedron: the four Yokota tetrahedra `t` and the five
/// Thurston tetrahedra `u` obtained by the 4-5 move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OctahedronSample {
    pub t: [Cx; 4],
    pub u: [Cx; 5],
}

impl OctahedronSample {
    /// Builds the sample from `t`, deriving `u` by the 4-5 move.
    pub fn from_t(t: [Cx; 4]) -> Result<Self, IdentityError> {
        let u = move_45(t).map_err(|e| IdentityError::DegenerateSample(e.to_string()))?;
        Ok(OctahedronSample { t, u })
    }

    /// The sample with the labels rotated by two, which exchanges
    /// `(t₁, t₂) ↔ (t₃, t₄)`.
    pub fn rotated(&self) -> Result<Self, IdentityError> {
        let [t1, t2, t3, t4] = self.t;
        Self::from_t([t3, t4, t1, t2])
    }
}

fn degenerate(what: &str, z: Cx) -> IdentityError {
    IdentityError::DegenerateSample(format!("{what} = {z}"))
}

fn ln(z: Cx, what: &str) -> Result<Cx, IdentityError> {
    clog(z).map_err(|_| degenerate(what, z))
}

fn l1(z: Cx) -> Result<Cx, IdentityError> {
    ln(Cx::new(1.0, 0.0) - z, "1 - z")
}

fn li(z: Cx) -> Cx {
    dilog(z)
}

fn inv(z: Cx) -> Cx {
    z.inv()
}

/// Uniform point of the disk of radius [`SAMPLE_RADIUS`] kept at distance
/// [`SAMPLE_MARGIN`] from `0` and `1`.
pub fn sample_shape<R: Rng>(rng: &mut R) -> Cx {
    loop {
        let z = Cx::new(
            rng.gen_range(-SAMPLE_RADIUS..SAMPLE_RADIUS),
            rng.gen_range(-SAMPLE_RADIUS..SAMPLE_RADIUS),
        );
        if z.norm() <= SAMPLE_RADIUS && z.norm() >= SAMPLE_MARGIN && (z - 1.0).norm() >= SAMPLE_MARGIN {
            return z;
        }
    }
}

/// Random octahedron on the constraint surface `t₁t₂t₃t₄ = 1` with
/// non-degenerate Thurston shapes.
pub fn sample_octahedron<R: Rng>(rng: &mut R) -> OctahedronSample {
    loop {
        let (t1, t2, t3) = (sample_shape(rng), sample_shape(rng), sample_shape(rng));
        let t4 = (t1 * t2 * t3).inv();
        if is_degenerate(t4, 1e-3) {
            continue;
        }
        if let Ok(s) = OctahedronSample::from_t([t1, t2, t3, t4]) {
            if s.u.iter().all(|u| !is_degenerate(*u, 1e-3)) {
                return s;
            }
        }
    }
}

/// Log combinations `U₁..U₄` of the Yokota shapes.
fn big_u(t: &[Cx; 4]) -> Result<[Cx; 4], IdentityError> {
    let (a1, b2, a3, b4) = (l1(t[0])?, l1(inv(t[1]))?, l1(t[2])?, l1(inv(t[3]))?);
    Ok([-a1 + b4, -a1 + b2, -a3 + b2, -a3 + b4])
}

/// Unreduced difference `LHS - RHS` of the octahedron identity `which`
/// (22 to 25).
pub fn lemma5_difference(s: &OctahedronSample, which: u8) -> Result<Cx, IdentityError> {
    let [t1, t2, t3, t4] = s.t;
    let [u1, u2, u3, u4, u5] = s.u;
    let big = big_u(&s.t)?;
    let [a, b, c, d] = big;
    let e = -(b + d);
    let lu = |z: Cx| ln(z, "u");
    let pi2_6 = Cx::new(PI2 / 6.0, 0.0);
    let lhs = li(t1) - li(inv(t2)) + li(t3) - li(inv(t4));
    let rhs = match which {
        22 => {
            li(u1) + li(u2) - li(inv(u3)) - li(inv(u4)) + li(u5) - pi2_6 + lu(u1)? * lu(u2)?
                - a * lu(u2)?
                - b * lu(u1)?
                + a * l1(u1)?
                + b * l1(u2)?
                + c * l1(inv(u3))?
                + d * l1(inv(u4))?
                + e * l1(u5)?
        }
        23 => {
            li(u1) - li(inv(u2)) - li(inv(u3)) + li(u4) - li(inv(u5)) + pi2_6 - lu(u2)? * lu(u3)?
                + c * lu(u2)?
                + b * lu(u3)?
                + a * l1(u1)?
                + b * l1(inv(u2))?
                + c * l1(inv(u3))?
                + d * l1(u4)?
                + e * l1(inv(u5))?
        }
        24 => {
            -li(inv(u1)) - li(inv(u2)) + li(u3) + li(u4) + li(u5) - pi2_6 + lu(u3)? * lu(u4)?
                - d * lu(u3)?
                - c * lu(u4)?
                + a * l1(inv(u1))?
                + b * l1(inv(u2))?
                + c * l1(u3)?
                + d * l1(u4)?
                + e * l1(u5)?
        }
        25 => {
            -li(inv(u1)) + li(u2) + li(u3) - li(inv(u4)) - li(inv(u5)) + pi2_6 - lu(u1)? * lu(u4)?
                + a * lu(u4)?
                + d * lu(u1)?
                + a * l1(inv(u1))?
                + b * l1(u2)?
                + c * l1(u3)?
                + d * l1(inv(u4))?
                + e * l1(inv(u5))?
        }
        _ => return Err(IdentityError::UnknownIdentity(which)),
    };
    Ok(lhs - rhs)
}

/// Residual of the octahedron identity `which` (22 to 25), with the real
/// part reduced modulo `4π²`.
pub fn check_lemma5(s: &OctahedronSample, which: u8) -> Result<f64, IdentityError> {
    Ok(dist_mod_4pi2(lemma5_difference(s, which)?))
}

/// Positions in `(t₁, t₂, t₃, t₄)` of the three shapes that survive when one
/// horizontal edge collapses, for identities 26 to 29.
pub fn collapsed_indices(which: u8) -> Result<[usize; 3], IdentityError> {
    match which {
        26 => Ok([0, 1, 3]),
        27 => Ok([0, 1, 2]),
        28 => Ok([1, 2, 3]),
        29 => Ok([0, 2, 3]),
        _ => Err(IdentityError::UnknownIdentity(which)),
    }
}

/// Random triple with product `1` for identity `which` (26 to 29), in the
/// order given by [`collapsed_indices`].
pub fn sample_collapsed<R: Rng>(rng: &mut R, which: u8) -> Result<[Cx; 3], IdentityError> {
    collapsed_indices(which)?;
    loop {
        let (x, y) = (sample_shape(rng), sample_shape(rng));
        let z = (x * y).inv();
        if is_degenerate(z, 1e-3) {
            continue;
        }
        let triple = [x, y, z];
        if collapsed_difference(triple, which).is_ok() {
            return Ok(triple);
        }
    }
}

/// Unreduced difference `LHS - RHS` of the collapsed identity `which`
/// (26 to 29) for the surviving shapes `t`.
pub fn collapsed_difference(t: [Cx; 3], which: u8) -> Result<Cx, IdentityError> {
    let idx = collapsed_indices(which)?;
    let nan = Cx::new(f64::NAN, f64::NAN);
    let mut full = [nan; 4];
    for (k, &i) in idx.iter().enumerate() {
        if is_degenerate(t[k], 1e-12) {
            return Err(degenerate("t", t[k]));
        }
        full[i] = t[k];
    }
    let [t1, t2, t3, t4] = full;
    let shape = |p: Cx, q: Cx| {
        let u = crate::numerics::prime(p) * crate::numerics::dprime(q);
        if is_degenerate(u, 1e-12) {
            Err(degenerate("u", u))
        } else {
            Ok(u)
        }
    };
    let lu = |z: Cx| ln(z, "u");
    let pi2_6 = Cx::new(PI2 / 6.0, 0.0);
    let ua = |p: Cx, q: Cx| -> Result<Cx, IdentityError> { Ok(-l1(p)? + l1(inv(q))?) };
    let (lhs, rhs) = match which {
        26 => {
            let (u1, u2) = (shape(t1, t4)?, shape(t1, t2)?);
            let (a, b) = (ua(t1, t4)?, ua(t1, t2)?);
            (
                li(t1) - li(inv(t2)) - li(inv(t4)) + pi2_6,
                li(u1) + li(u2) - pi2_6 + lu(u1)? * lu(u2)? + a * (-lu(u2)? + l1(u1)?) + b * (-lu(u1)? + l1(u2)?),
            )
        }
        27 => {
            let (u2, u3) = (shape(t1, t2)?, shape(t3, t2)?);
            let (b, c) = (ua(t1, t2)?, ua(t3, t2)?);
            (
                li(t1) - li(inv(t2)) + li(t3) - pi2_6,
                -li(inv(u2)) - li(inv(u3)) + pi2_6 - lu(u2)? * lu(u3)?
                    + c * (lu(u2)? + l1(inv(u3))?)
                    + b * (lu(u3)? + l1(inv(u2))?),
            )
        }
        28 => {
            let (u3, u4) = (shape(t3, t2)?, shape(t3, t4)?);
            let (c, d) = (ua(t3, t2)?, ua(t3, t4)?);
            (
                -li(inv(t2)) + li(t3) - li(inv(t4)) + pi2_6,
                li(u3) + li(u4) - pi2_6 + lu(u3)? * lu(u4)? + d * (-lu(u3)? + l1(u4)?) + c * (-lu(u4)? + l1(u3)?),
            )
        }
        29 => {
            let (u1, u4) = (shape(t1, t4)?, shape(t3, t4)?);
            let (a, d) = (ua(t1, t4)?, ua(t3, t4)?);
            (
                li(t1) + li(t3) - li(inv(t4)) - pi2_6,
                -li(inv(u1)) - li(inv(u4)) + pi2_6 - lu(u1)? * lu(u4)?
                    + a * (lu(u4)? + l1(inv(u1))?)
                    + d * (lu(u1)? + l1(inv(u4))?),
            )
        }
        _ => return Err(IdentityError::UnknownIdentity(which)),
    };
    Ok(lhs - rhs)
}

/// Residual of the collapsed identity `which` (26 to 29), with the real part
/// reduced modulo `4π²`.
pub fn check_lemma5_collapsed(t: [Cx; 3], which: u8) -> Result<f64, IdentityError> {
    Ok(dist_mod_4pi2(collapsed_difference(t, which)?))
}

fn d(z: Cx) -> Result<f64, IdentityError> {
    bloch_wigner(z).map_err(|_| degenerate("D", z))
}

/// `|ΣD(tᵢ) - ΣD(uᵢ)|` for an octahedron sample.
pub fn volume_residual_45(s: &OctahedronSample) -> Result<f64, IdentityError> {
    let mut r = 0.0;
    for t in s.t {
        r += d(t)?;
    }
    for u in s.u {
        r -= d(u)?;
    }
    Ok(r.abs())
}

/// `|D(t₁) + D(t₂) + D(t₄) - D(u₁) - D(u₂)|` across the 3-2 move.
pub fn volume_residual_32(t: [Cx; 3]) -> Result<f64, IdentityError> {
    let u = move_32(t).map_err(|e| IdentityError::DegenerateSample(e.to_string()))?;
    Ok((d(t[0])? + d(t[1])? + d(t[2])? - d(u[0])? - d(u[1])?).abs())
}

/// Residual of the crossing-form equivalence at `w = (w_j, w_k, w_l, w_m)`: the
/// largest disagreement of `exp(w_a ∂P_f/∂w_a)` across the four forms, and
/// the largest distance of pairwise flattened differences to `4π²ℤ`.
pub fn check_crossing_forms(sign: i8, w: &[Cx; 4]) -> Result<(f64, f64), IdentityError> {
    let mut exps = Vec::with_capacity(4);
    let mut flats = Vec::with_capacity(4);
    for f in 1..=4 {
        let p = crossing_potential(sign, f);
        let e: Vec<Cx> = (0..4)
            .map(|a| p.log_derivative(w, a).map(|x| x.exp()))
            .collect::<Result<_, _>>()
            .map_err(|e| IdentityError::DegenerateSample(e.to_string()))?;
        exps.push(e);
        flats.push(p.flattened_raw(w).map_err(|e| IdentityError::DegenerateSample(e.to_string()))?);
    }
    let mut de: f64 = 0.0;
    let mut df: f64 = 0.0;
    for f in 1..4 {
        for (x, y) in exps[f].iter().zip(&exps[0]) {
            de = de.max((x - y).norm() / y.norm().max(1.0));
        }
        for g in 0..f {
            df = df.max(dist_mod_4pi2(flats[f] - flats[g]));
        }
    }
    Ok((de, df))
}

/// Random point for [`check_crossing_forms`] with all pairwise ratios kept
/// away from `1`.
pub fn sample_crossing_point<R: Rng>(rng: &mut R) -> [Cx; 4] {
    loop {
        let w: [Cx; 4] = std::array::from_fn(|_| {
            Cx::from_polar(10f64.powf(rng.gen_range(-1.0..1.0)), rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        });
        let ok = (0..4).all(|a| (0..a).all(|b| (w[a] / w[b] - 1.0).norm() > SAMPLE_MARGIN))
            && (w[0] * w[2] / (w[1] * w[3]) - 1.0).norm() > SAMPLE_MARGIN;
        if ok {
            return w;
        }
    }
}

fn log_slot(slot: Slot, x: &[Cx]) -> Option<Cx> {
    match slot {
        Slot::Zero => None,
        Slot::One => Some(Cx::new(0.0, 0.0)),
        Slot::Var(i) => clog(x[i]).ok(),
    }
}

/// Remaining term `Z_n` of the vertex `v` at side values `z` and region
/// values `w`.
pub fn remaining_term(g: &TangleGraph, vars: &Variables, v: &Vertex, z: &[Cx], w: &[Cx]) -> Cx {
    let labels = jklm_labels(v.sign);
    let lw: Vec<Option<Cx>> = labels.iter().map(|&x| log_slot(vars.region[v.corner_region[x]], w)).collect();
    let lz: Vec<Cx> = labels
        .iter()
        .map(|&x| match g.arm_side(v.crossing, x) {
            Some(s) => log_slot(vars.side[s], z).unwrap_or_default(),
            None => Cx::new(0.0, 0.0),
        })
        .collect();
    let (j, k, l, m) = (lw[0], lw[1], lw[2], lw[3]);
    let term = |p: Option<Cx>, q: Option<Cx>, c: f64, s: Cx| match (p, q) {
        (Some(p), Some(q)) => (p - q) * s * c,
        _ => Cx::new(0.0, 0.0),
    };
    term(j, m, -1.0, lz[0]) + term(k, j, -1.0, lz[1]) + term(k, l, 1.0, lz[2]) + term(l, m, 1.0, lz[3])
}

/// Distance to `4π²ℤ` of `X₀ - Y₀ - Z_n` at vertex `v`, where `X₀` and `Y₀`
/// are the flattened vertex contributions to `V` and `W`.
pub fn check_vertex_remaining(
    g: &TangleGraph,
    vars: &Variables,
    v: &Vertex,
    z: &[Cx],
    w: &[Cx],
) -> Result<f64, IdentityError> {
    let err = |e: crate::potential::PotentialError| IdentityError::DegenerateSample(e.to_string());
    let x0 = vertex_v(g, vars, v).flattened_raw(z).map_err(err)?;
    let y0 = vertex_w(g, vars, v, 1).and_then(|p| p.flattened_raw(w)).map_err(err)?;
    Ok(dist_mod_4pi2(x0 - y0 - remaining_term(g, vars, v, z, w)))
}

/// `|Σ Z_n|` reduced modulo `4π²`.
pub fn check_cancellation(g: &TangleGraph, vars: &Variables, z: &[Cx], w: &[Cx]) -> f64 {
    let sum: Cx = g.vertices.iter().map(|v| remaining_term(g, vars, v, z, w)).sum();
    dist_mod_4pi2(sum)
}

/// Outcome of one named check inside a suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub samples: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl CheckReport {
    /// Aggregates per-sample residuals; degenerate samples count as failures.
    pub fn from_residuals<T: std::fmt::Debug>(
        name: &str,
        tolerance: f64,
        results: Vec<(T, Result<f64, IdentityError>)>,
    ) -> Self {
        let mut max_residual: f64 = 0.0;
        let mut failures = Vec::new();
        for (sample, r) in &results {
            match r {
                Ok(x) if *x <= tolerance => max_residual = max_residual.max(*x),
                Ok(x) => {
                    max_residual = max_residual.max(*x);
                    failures.push(format!("{sample:?}: residual {x:e}"));
                }
                Err(e) => failures.push(format!("{sample:?}: {e}")),
            }
        }
        let passed = failures.is_empty();
        failures.truncate(10);
        CheckReport { name: name.to_string(), samples: results.len(), max_residual, tolerance, passed, failures }
    }
}

/// Results of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub samples: usize,
    pub rng_seed: u64,
    pub checks: Vec<CheckReport>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn new(suite: &str, samples: usize, rng_seed: u64, checks: Vec<CheckReport>) -> Self {
        let passed = checks.iter().all(|c| c.passed);
        SuiteReport { suite: suite.to_string(), samples, rng_seed, checks, passed }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn par_check<S, F>(name: &str, tol: f64, samples: Vec<S>, f: F) -> CheckReport
where
    S: std::fmt::Debug + Send + Sync,
    F: Fn(&S) -> Result<f64, IdentityError> + Send + Sync,
{
    let results: Vec<_> = samples.into_par_iter().map(|s| {
        let r = f(&s);
        (s, r)
    }).collect();
    CheckReport::from_residuals(name, tol, results)
}

/// Octahedron identities 22 to 25 on random samples, collapsed identities
/// 26 to 29 on random triples, and both calibration points.
pub fn run_lemma5(samples: usize, rng_seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let octs: Vec<OctahedronSample> = (0..samples).map(|_| sample_octahedron(&mut rng)).collect();
    let mut checks = Vec::new();
    let i = Cx::new(0.0, 1.0);
    let calib = OctahedronSample { t: [i; 4], u: [i, i, i, i, Cx::new(-1.0, 0.0)] };
    for which in 22..=25u8 {
        checks.push(par_check(&format!("octahedron {which} calibration"), 1e-12, vec![calib], |s| {
            lemma5_difference(s, which).map(|x| x.norm())
        }));
        checks.push(par_check(&format!("octahedron {which}"), 1e-9, octs.clone(), |s| check_lemma5(s, which)));
    }
    let omega = Cx::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    for which in 26..=29u8 {
        let triples: Vec<[Cx; 3]> =
            (0..samples).map(|_| sample_collapsed(&mut rng, which).expect("known identity")).collect();
        checks.push(par_check(&format!("collapsed {which} calibration"), 1e-12, vec![[omega; 3]], |t| {
            collapsed_difference(*t, which).map(|x| x.norm())
        }));
        checks.push(par_check(&format!("collapsed {which}"), 1e-9, triples, |t| check_lemma5_collapsed(*t, which)));
    }
    checks.push(par_check("imaginary part equals volume identity", 1e-12, octs, |s| {
        let im = lemma5_difference(s, 22)?.im;
        let vol = volume_residual_45(s)?;
        Ok((im.abs() - vol).abs().max(vol))
    }));
    SuiteReport::new("lemma5", samples, rng_seed, checks)
}

/// Equivalence of the four positive and the four negative crossing forms.
pub fn run_lemma31(samples: usize, rng_seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let pts: Vec<[Cx; 4]> = (0..samples).map(|_| sample_crossing_point(&mut rng)).collect();
    let mut checks = Vec::new();
    for (sign, tag) in [(1i8, "positive"), (-1i8, "negative")] {
        checks.push(par_check(&format!("{tag} exp-derivatives"), 1e-12, pts.clone(), |w| {
            check_crossing_forms(sign, w).map(|r| r.0)
        }));
        checks.push(par_check(&format!("{tag} flattened values"), 1e-10, pts.clone(), |w| {
            check_crossing_forms(sign, w).map(|r| r.1)
        }));
    }
    SuiteReport::new("lemma31", samples, rng_seed, checks)
}

/// Volume preservation and round trips of the 4-5 and 3-2 moves.
pub fn run_moves(samples: usize, rng_seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let octs: Vec<OctahedronSample> = (0..samples).map(|_| sample_octahedron(&mut rng)).collect();
    let triples: Vec<[Cx; 3]> = (0..samples)
        .map(|_| loop {
            let t = sample_collapsed(&mut rng, 26).expect("known identity");
            if move_32(t).is_ok() {
                break t;
            }
        })
        .collect();
    let checks = vec![
        par_check("4-5 volume", 1e-12, octs.clone(), volume_residual_45),
        par_check("4-5 round trip", 1e-9, octs, |s| {
            let t = move_45_inverse(s.u).map_err(|e| IdentityError::DegenerateSample(e.to_string()))?;
            Ok(t.iter().zip(&s.t).map(|(a, b)| (a - b).norm() / b.norm().max(1.0)).fold(0.0, f64::max))
        }),
        par_check("3-2 volume", 1e-12, triples.clone(), |t| volume_residual_32(*t)),
        par_check("3-2 round trip", 1e-9, triples, |t| {
            let u = move_32(*t).map_err(|e| IdentityError::DegenerateSample(e.to_string()))?;
            let back = move_32_inverse(u).map_err(|e| IdentityError::DegenerateSample(e.to_string()))?;
            Ok(back.iter().zip(t).map(|(a, b)| (a - b).norm() / b.norm().max(1.0)).fold(0.0, f64::max))
        }),
    ];
    SuiteReport::new("moves", samples, rng_seed, checks)
}

/// Functional equations of the dilogarithm and the Bloch-Wigner function.
pub fn run_numerics(samples: usize, rng_seed: u64) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let pts: Vec<Cx> = (0..samples)
        .map(|_| loop {
            let z = sample_shape(&mut rng);
            if z.im.abs() > 1e-9 {
                break z;
            }
        })
        .collect();
    let one = Cx::new(1.0, 0.0);
    let checks = vec![
        par_check("reflection", 1e-12, pts.clone(), |z| {
            let r = li(*z) + li(one - z) - PI2 / 6.0 + ln(*z, "z")? * l1(*z)?;
            Ok(r.norm())
        }),
        par_check("inversion", 1e-12, pts.clone(), |z| {
            let lm = ln(-z, "-z")?;
            Ok((li(*z) + li(z.inv()) + PI2 / 6.0 + 0.5 * lm * lm).norm())
        }),
        par_check("D(1/z) = -D(z)", 1e-12, pts.clone(), |z| Ok((d(z.inv())? + d(*z)?).abs())),
        par_check("D symmetric under the shape triple", 1e-12, pts.clone(), |z| {
            let a = d(*z)?;
            Ok((a - d((one - z).inv())?).abs().max((a - d(one - z.inv())?).abs()))
        }),
        par_check("five-term relation", 1e-11, pts.chunks(2).filter(|c| c.len() == 2).map(|c| (c[0], c[1])).collect(), |&(x, y)| {
            let r = d(x)? + d(y)? + d((one - x) / (one - x * y))? + d(one - x * y)? + d((one - y) / (one - x * y))?;
            Ok(r.abs())
        }),
    ];
    SuiteReport::new("numerics", samples, rng_seed, checks)
}
