//! Symbolic potential functions `V(z)` and `W(w)`.
//!
//! A potential is a sum of `±Li₂(M)`, `±log M₁ · log M₂` and a rational
//! multiple of `π²`, where every `M` is a Laurent monomial in the variables.
//! Monomials may carry a power of the zero region; such factors are resolved
//! at build time so evaluation never sees them.

use std::ops::{Div, Mul};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::{Slot, TangleGraph, Variables, Vertex, A, B, C, D};
use crate::numerics::{carg, dilog, Cx, EPS_SOLVE, PI2};

/// Errors raised while building or evaluating potentials.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PotentialError {
    #[error("monomial {0} evaluates to a branch point")]
    BranchPoint(String),
    #[error("variable {var}: derivative {value} is not a multiple of 2πi")]
    NotASolution { var: usize, value: Cx },
    #[error("no crossing form keeps the zero region out of every logarithm at crossing {0}")]
    VariantUnavailable(usize),
    #[error("expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
}

/// Laurent monomial over the variables, with a separate exponent for the
/// zero region.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub exponents: Vec<i32>,
    pub zero: i32,
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one(n: usize) -> Self {
        Monomial { exponents: vec![0; n], zero: 0 }
    }

    /// The single variable `x_i`.
    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.exponents[i] = 1;
        m
    }

    /// The zero-region symbol.
    pub fn zero_region(n: usize) -> Self {
        Monomial { exponents: vec![0; n], zero: 1 }
    }

    /// Monomial for a side or region slot.
    pub fn from_slot(n: usize, slot: Slot) -> Self {
        match slot {
            Slot::Zero => Self::zero_region(n),
            Slot::One => Self::one(n),
            Slot::Var(i) => Self::var(n, i),
        }
    }

    pub fn inv(&self) -> Self {
        Monomial {
            exponents: self.exponents.iter().map(|e| -e).collect(),
            zero: -self.zero,
        }
    }

    pub fn is_one(&self) -> bool {
        self.zero == 0 && self.exponents.iter().all(|&e| e == 0)
    }

    pub fn is_constant(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    /// Exponent of variable `l`.
    pub fn exp(&self, l: usize) -> i32 {
        self.exponents[l]
    }

    /// Value at `x`; the zero-region factor must be absent.
    pub fn eval(&self, x: &[Cx]) -> Cx {
        debug_assert_eq!(self.zero, 0);
        let mut r = Cx::new(1.0, 0.0);
        for (xi, &e) in x.iter().zip(&self.exponents) {
            if e != 0 {
                r *= xi.powi(e);
            }
        }
        r
    }

    /// Sum of `e·log x_i`, a logarithm of the monomial up to `2πi·ℤ`.
    pub fn log_sum(&self, logx: &[Cx]) -> Cx {
        self.exponents
            .iter()
            .zip(logx)
            .map(|(&e, l)| l * e as f64)
            .sum()
    }

    /// Readable form such as `x0*x2^-1`.
    pub fn display(&self) -> String {
        let mut parts: Vec<String> = self
            .exponents
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
            .collect();
        if self.zero != 0 {
            parts.push(format!("O^{}", self.zero));
        }
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Mul for &Monomial {
    type Output = Monomial;
    fn mul(self, o: &Monomial) -> Monomial {
        Monomial {
            exponents: self.exponents.iter().zip(&o.exponents).map(|(a, b)| a + b).collect(),
            zero: self.zero + o.zero,
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for &Monomial {
    type Output = Monomial;
    fn div(self, o: &Monomial) -> Monomial {
        self * &o.inv()
    }
}

/// `σ·Li₂(M)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DilogTerm {
    pub sign: i8,
    pub arg: Monomial,
}

/// `c·log M₁·log M₂`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogLogTerm {
    pub coef: i8,
    pub a: Monomial,
    pub b: Monomial,
}

/// Exact potential function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialFunction {
    pub variable_count: usize,
    pub dilog_terms: Vec<DilogTerm>,
    pub loglog_terms: Vec<LogLogTerm>,
    pub pi2_coef: Rational64,
}

/// Factor of a shape-product form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Factor {
    /// `M`
    Mono(Monomial),
    /// `1 - M`
    OneMinus(Monomial),
}

/// `sign · Π factorᵉ`, the exact value of `exp(x_l ∂p/∂x_l)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShapeProduct {
    pub sign: i8,
    pub factors: Vec<(Factor, i32)>,
}

impl ShapeProduct {
    /// Numerical value at `x`.
    pub fn eval(&self, x: &[Cx]) -> Cx {
        let mut r = Cx::new(self.sign as f64, 0.0);
        for (f, e) in &self.factors {
            let v = match f {
                Factor::Mono(m) => m.eval(x),
                Factor::OneMinus(m) => Cx::new(1.0, 0.0) - m.eval(x),
            };
            r *= v.powi(*e);
        }
        r
    }

    /// Value together with its gradient in logarithmic coordinates,
    /// `∂/∂ log x_k`.
    pub fn eval_with_log_gradient(&self, x: &[Cx]) -> (Cx, Vec<Cx>) {
        let n = x.len();
        let val = self.eval(x);
        let mut g = vec![Cx::new(0.0, 0.0); n];
        for (f, e) in &self.factors {
            match f {
                Factor::Mono(m) => {
                    for (k, gk) in g.iter_mut().enumerate() {
                        *gk += (*e * m.exp(k)) as f64;
                    }
                }
                Factor::OneMinus(m) => {
                    let mv = m.eval(x);
                    let q = -mv / (Cx::new(1.0, 0.0) - mv) * (*e as f64);
                    for (k, gk) in g.iter_mut().enumerate() {
                        if m.exp(k) != 0 {
                            *gk += q * m.exp(k) as f64;
                        }
                    }
                }
            }
        }
        for gk in g.iter_mut() {
            *gk *= val;
        }
        (val, g)
    }
}

fn li2_checked(m: &Monomial, x: &[Cx]) -> Result<Cx, PotentialError> {
    let v = m.eval(x);
    if !v.is_finite() {
        return Err(PotentialError::BranchPoint(m.display()));
    }
    Ok(dilog(v))
}

fn log_checked(v: Cx, m: &Monomial) -> Result<Cx, PotentialError> {
    if !v.is_finite() || v.norm() == 0.0 {
        return Err(PotentialError::BranchPoint(m.display()));
    }
    Ok(Cx::new(v.norm().ln(), carg(v)))
}

impl PotentialFunction {
    /// The empty potential in `n` variables.
    pub fn new(n: usize) -> Self {
        PotentialFunction {
            variable_count: n,
            dilog_terms: Vec::new(),
            loglog_terms: Vec::new(),
            pi2_coef: Rational64::zero(),
        }
    }

    /// Adds `σ·Li₂(M)`, resolving zero-region and constant arguments.
    pub fn add_dilog(&mut self, sign: i8, m: Monomial) -> Result<(), PotentialError> {
        if m.zero > 0 {
            return Ok(());
        }
        if m.zero < 0 {
            return Err(PotentialError::BranchPoint(m.display()));
        }
        if m.is_one() {
            self.pi2_coef += Rational64::new(sign as i64, 6);
            return Ok(());
        }
        self.dilog_terms.push(DilogTerm { sign, arg: m });
        Ok(())
    }

    /// Adds `c·log M₁·log M₂`; a constant factor `1` removes the term.
    pub fn add_loglog(&mut self, coef: i8, a: Monomial, b: Monomial) -> Result<(), PotentialError> {
        if a.zero != 0 || b.zero != 0 {
            return Err(PotentialError::BranchPoint(format!("log({})log({})", a.display(), b.display())));
        }
        if a.is_one() || b.is_one() {
            return Ok(());
        }
        self.loglog_terms.push(LogLogTerm { coef, a, b });
        Ok(())
    }

    /// Adds a rational multiple of `π²`.
    pub fn add_pi2(&mut self, q: Rational64) {
        self.pi2_coef += q;
    }

    /// Appends all terms of `other`.
    pub fn extend(&mut self, other: &PotentialFunction) {
        self.dilog_terms.extend(other.dilog_terms.iter().cloned());
        self.loglog_terms.extend(other.loglog_terms.iter().cloned());
        self.pi2_coef += other.pi2_coef;
    }

    fn check_arity(&self, x: &[Cx]) -> Result<(), PotentialError> {
        if x.len() != self.variable_count {
            return Err(PotentialError::Arity { expected: self.variable_count, got: x.len() });
        }
        Ok(())
    }

    /// Numerical value at `x`.
    pub fn eval(&self, x: &[Cx]) -> Result<Cx, PotentialError> {
        self.check_arity(x)?;
        let mut r = Cx::new(self.pi2_coef.to_f64().unwrap_or(0.0) * PI2, 0.0);
        for t in &self.dilog_terms {
            r += li2_checked(&t.arg, x)? * t.sign as f64;
        }
        for t in &self.loglog_terms {
            let la = log_checked(t.a.eval(x), &t.a)?;
            let lb = log_checked(t.b.eval(x), &t.b)?;
            r += la * lb * t.coef as f64;
        }
        Ok(r)
    }

    /// `x_l ∂p/∂x_l` with principal logarithms.
    pub fn log_derivative(&self, x: &[Cx], l: usize) -> Result<Cx, PotentialError> {
        self.check_arity(x)?;
        let one = Cx::new(1.0, 0.0);
        let mut r = Cx::new(0.0, 0.0);
        for t in &self.dilog_terms {
            let a = t.arg.exp(l);
            if a != 0 {
                r -= log_checked(one - t.arg.eval(x), &t.arg)? * (t.sign as i32 * a) as f64;
            }
        }
        for t in &self.loglog_terms {
            let (a1, a2) = (t.a.exp(l), t.b.exp(l));
            if a1 != 0 {
                r += log_checked(t.b.eval(x), &t.b)? * (t.coef as i32 * a1) as f64;
            }
            if a2 != 0 {
                r += log_checked(t.a.eval(x), &t.a)? * (t.coef as i32 * a2) as f64;
            }
        }
        Ok(r)
    }

    /// Exact form of `exp(x_l ∂p/∂x_l)` with equal factors merged.
    pub fn shape_product_form(&self, l: usize) -> ShapeProduct {
        let mut factors: Vec<(Factor, i32)> = Vec::new();
        let mut push = |f: Factor, e: i32| {
            if e == 0 {
                return;
            }
            if let Some(slot) = factors.iter_mut().find(|(g, _)| *g == f) {
                slot.1 += e;
            } else {
                factors.push((f, e));
            }
        };
        for t in &self.dilog_terms {
            let a = t.arg.exp(l);
            push(Factor::OneMinus(t.arg.clone()), -(t.sign as i32) * a);
        }
        for t in &self.loglog_terms {
            push(Factor::Mono(t.b.clone()), t.coef as i32 * t.a.exp(l));
            push(Factor::Mono(t.a.clone()), t.coef as i32 * t.b.exp(l));
        }
        factors.retain(|(_, e)| *e != 0);
        ShapeProduct { sign: 1, factors }
    }

    /// Shape-product forms for every variable: the hyperbolicity system.
    pub fn system(&self) -> Vec<ShapeProduct> {
        (0..self.variable_count).map(|l| self.shape_product_form(l)).collect()
    }

    /// `p - Σ d_l log x_l` with unreduced derivatives `d_l`.
    pub fn flattened_raw(&self, x: &[Cx]) -> Result<Cx, PotentialError> {
        let mut r = self.eval(x)?;
        for l in 0..self.variable_count {
            let d = self.log_derivative(x, l)?;
            if d != Cx::new(0.0, 0.0) {
                r -= d * log_checked(x[l], &Monomial::var(self.variable_count, l))?;
            }
        }
        Ok(r)
    }

    /// `p - Σ d_l log x_l` where each `d_l` is snapped to `2πi·ℤ`.
    pub fn flattened(&self, x: &[Cx]) -> Result<Cx, PotentialError> {
        let mut r = self.eval(x)?;
        let two_pi_i = Cx::new(0.0, 2.0 * std::f64::consts::PI);
        for l in 0..self.variable_count {
            let d = self.log_derivative(x, l)?;
            let k = (d / two_pi_i).re.round();
            if (d - two_pi_i * k).norm() > EPS_SOLVE {
                return Err(PotentialError::NotASolution { var: l, value: d });
            }
            if k != 0.0 {
                r -= two_pi_i * k * log_checked(x[l], &Monomial::var(self.variable_count, l))?;
            }
        }
        Ok(r)
    }

    /// JSON rendering of the term lists.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("potential serializes")
    }

    /// Reads a potential written by [`PotentialFunction::to_json`].
    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// The potential `F(z,u) = -2Li₂(z) - Li₂(1/u) - log z log u + π²/2` of the
/// Kashaev invariant of the knot `5_2`, in variables `(z, u)`.
pub fn kashaev_5_2() -> PotentialFunction {
    let mut p = PotentialFunction::new(2);
    let z = Monomial::var(2, 0);
    let u = Monomial::var(2, 1);
    p.add_dilog(-1, z.clone()).expect("nonconstant");
    p.add_dilog(-1, z.clone()).expect("nonconstant");
    p.add_dilog(-1, u.inv()).expect("nonconstant");
    p.add_loglog(-1, z, u).expect("nonconstant");
    p.add_pi2(Rational64::new(1, 2));
    p
}

/// A term of a crossing form before zero-region resolution.
#[derive(Debug, Clone)]
enum Term {
    Li(i8, Monomial),
    LogLog(i8, Monomial, Monomial),
    Pi2(i64),
}

/// Terms of the crossing form `P_f` (positive) or `N_f` (negative) with region
/// monomials `w_j, w_k, w_l, w_m`; the constant is counted in sixths of `π²`.
fn crossing_terms(sign: i8, f: usize, w: [&Monomial; 4]) -> Vec<Term> {
    let [j, k, l, m] = w;
    let q = |a: &Monomial, b: &Monomial| a / b;
    let jl_km = &(j * l) / &(k * m);
    let km_jl = jl_km.inv();
    use Term::*;
    let p = match f {
        1 => vec![
            Li(-1, q(l, m)),
            Li(-1, q(l, k)),
            Li(1, jl_km),
            Li(1, q(m, j)),
            Li(1, q(k, j)),
            Pi2(-1),
            LogLog(1, q(m, j), q(k, j)),
        ],
        2 => vec![
            Li(1, q(m, l)),
            Li(-1, q(l, k)),
            Li(-1, km_jl),
            Li(1, q(m, j)),
            Li(-1, q(j, k)),
            Pi2(1),
            LogLog(-1, q(k, l), q(k, j)),
        ],
        3 => vec![
            Li(1, q(m, l)),
            Li(1, q(k, l)),
            Li(1, jl_km),
            Li(-1, q(j, m)),
            Li(-1, q(j, k)),
            Pi2(-1),
            LogLog(1, q(m, l), q(k, l)),
        ],
        4 => vec![
            Li(-1, q(l, m)),
            Li(1, q(k, l)),
            Li(-1, km_jl),
            Li(-1, q(j, m)),
            Li(1, q(k, j)),
            Pi2(1),
            LogLog(-1, q(m, l), q(m, j)),
        ],
        _ => panic!("crossing form index {f} out of range"),
    };
    if sign > 0 {
        return p;
    }
    // Negative forms: every sign flips and every ratio inverts in the log terms.
    p.into_iter()
        .map(|t| match t {
            Li(s, mm) => Li(-s, mm),
            Pi2(c) => Pi2(-c),
            LogLog(c, a, b) => LogLog(-c, a.inv(), b.inv()),
        })
        .collect()
}

fn add_terms(p: &mut PotentialFunction, terms: Vec<Term>) -> Result<(), PotentialError> {
    for t in terms {
        match t {
            Term::Li(s, m) => p.add_dilog(s, m)?,
            Term::LogLog(c, a, b) => p.add_loglog(c, a, b)?,
            Term::Pi2(c) => p.add_pi2(Rational64::new(c, 6)),
        }
    }
    Ok(())
}

/// Adds the crossing form `P_f` or `N_f` evaluated at the region monomials
/// `w = (w_j, w_k, w_l, w_m)`, applying the zero-region rules.
pub fn add_crossing_form(
    p: &mut PotentialFunction,
    sign: i8,
    f: usize,
    w: [&Monomial; 4],
) -> Result<(), PotentialError> {
    add_terms(p, crossing_terms(sign, f, w))
}

/// The full crossing potential `P_f` or `N_f` in the four variables
/// `(w_j, w_k, w_l, w_m)`.
pub fn crossing_potential(sign: i8, f: usize) -> PotentialFunction {
    let vars: Vec<Monomial> = (0..4).map(|i| Monomial::var(4, i)).collect();
    let mut p = PotentialFunction::new(4);
    add_crossing_form(&mut p, sign, f, [&vars[0], &vars[1], &vars[2], &vars[3]]).expect("generic crossing form");
    p
}

/// Corner labels `(j, k, l, m)` of a crossing, as starting labels.
pub fn jklm_labels(sign: i8) -> [usize; 4] {
    if sign > 0 {
        [C, D, A, B]
    } else {
        [B, C, D, A]
    }
}

/// Corner `σ`: `+1` on the corners starting at `A` and `C`.
pub fn corner_sigma(l: usize) -> i8 {
    if l == A || l == C {
        1
    } else {
        -1
    }
}

fn side_mono(g: &TangleGraph, vars: &Variables, v: usize, l: usize) -> Monomial {
    match g.arm_side(v, l) {
        Some(s) => Monomial::from_slot(vars.g, vars.side[s]),
        None => Monomial::one(vars.g),
    }
}

/// Ratio monomial `t` of the corner starting at label `l` of vertex `v`.
pub fn corner_ratio(g: &TangleGraph, vars: &Variables, v: &Vertex, l: usize) -> Monomial {
    let num = side_mono(g, vars, v.crossing, (l + 1) % 4);
    let den = side_mono(g, vars, v.crossing, l);
    &num / &den
}

/// Contribution of one vertex to `V`.
pub fn vertex_v(g: &TangleGraph, vars: &Variables, v: &Vertex) -> PotentialFunction {
    let mut p = PotentialFunction::new(vars.g);
    for l in 0..4 {
        if !g.corner_alive(v, l) {
            continue;
        }
        let t = corner_ratio(g, vars, v, l);
        let res = if corner_sigma(l) > 0 {
            p.add_pi2(Rational64::new(-1, 6));
            p.add_dilog(1, t)
        } else {
            p.add_pi2(Rational64::new(1, 6));
            p.add_dilog(-1, t.inv())
        };
        res.expect("side monomials carry no zero region");
    }
    p
}

/// Crossing form index chosen at a four-valent vertex.
pub fn crossing_variant(g: &TangleGraph, v: &Vertex, default: usize) -> usize {
    let [rj, rk, rl, rm] = jklm_labels(v.sign).map(|x| v.corner_region[x]);
    let ub = g.unbounded;
    if rl == ub {
        1
    } else if rm == ub {
        2
    } else if rj == ub {
        3
    } else if rk == ub {
        4
    } else {
        default
    }
}

/// Contribution of one vertex to `W`.
pub fn vertex_w(
    g: &TangleGraph,
    vars: &Variables,
    v: &Vertex,
    default_variant: usize,
) -> Result<PotentialFunction, PotentialError> {
    let w: Vec<Monomial> = jklm_labels(v.sign)
        .iter()
        .map(|&x| Monomial::from_slot(vars.m, vars.region[v.corner_region[x]]))
        .collect();
    let (j, k, l, m) = (&w[0], &w[1], &w[2], &w[3]);
    use Term::*;
    let terms = if v.crossing == g.i_endpoint.0 {
        if v.sign > 0 {
            vec![Li(1, m / j), Li(-1, l / j)]
        } else {
            vec![Li(-1, k / j), Li(1, l / j)]
        }
    } else if v.crossing == g.j_endpoint.0 {
        if v.sign > 0 {
            vec![Li(1, m / k), Li(-1, j / k)]
        } else {
            vec![Li(-1, k / l), Li(1, j / l)]
        }
    } else {
        let f = crossing_variant(g, v, default_variant);
        crossing_terms(v.sign, f, [j, k, l, m])
    };
    let mut p = PotentialFunction::new(vars.m);
    add_terms(&mut p, terms).map_err(|_| PotentialError::VariantUnavailable(v.crossing))?;
    Ok(p)
}

/// `V(z₁..z_g)` of the reduced graph.
pub fn build_v(g: &TangleGraph, vars: &Variables) -> PotentialFunction {
    let mut p = PotentialFunction::new(vars.g);
    for v in &g.vertices {
        p.extend(&vertex_v(g, vars, v));
    }
    p
}

/// `W(w₁..w_m)` of the reduced graph, using `P₁`/`N₁` where the zero region
/// does not force a choice.
pub fn build_w(g: &TangleGraph, vars: &Variables) -> Result<PotentialFunction, PotentialError> {
    build_w_with_default(g, vars, 1)
}

/// `W` with a chosen default crossing form at crossings away from the zero
/// region.
pub fn build_w_with_default(
    g: &TangleGraph,
    vars: &Variables,
    default_variant: usize,
) -> Result<PotentialFunction, PotentialError> {
    let mut p = PotentialFunction::new(vars.m);
    for v in &g.vertices {
        p.extend(&vertex_w(g, vars, v, default_variant)?);
    }
    Ok(p)
}
