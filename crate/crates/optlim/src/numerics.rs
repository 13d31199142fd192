//! Complex special functions: principal logarithm, dilogarithm, Bloch-Wigner
//! function and the shape-parameter triple of an ideal tetrahedron.
//!
//! Every routine is generic over a [`Real`] scalar; the rest of the crate uses
//! the `f64` instantiation through the [`Cx`] alias.

use std::fmt::Debug;

use num_complex::Complex;
use num_traits::{Float, FloatConst};
use thiserror::Error;

/// Floating point scalar accepted by the numerical kernels.
pub trait Real: Float + FloatConst + Debug + Send + Sync + 'static {
    /// Converts an `f64` literal into this scalar type.
    fn lit(x: f64) -> Self {
        Self::from(x).expect("f64 literal representable")
    }
}

impl<T> Real for T where T: Float + FloatConst + Debug + Send + Sync + 'static {}

/// Complex number over the working precision used throughout the crate.
pub type Cx = Complex<f64>;

/// Tolerance for identity residuals.
pub const EPS_FN: f64 = 1e-12;

/// Tolerance for residuals of the hyperbolicity equations.
pub const EPS_SOLVE: f64 = 1e-10;

/// `π²` in working precision.
pub const PI2: f64 = std::f64::consts::PI * std::f64::consts::PI;

/// `4π²`, the period of flattened potential values.
pub const FOUR_PI2: f64 = 4.0 * PI2;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    /// The argument lies outside the domain of the function.
    #[error("{op} is undefined at {re}{im:+}i")]
    Domain {
        op: &'static str,
        re: f64,
        im: f64,
    },
}

fn domain<T: Real>(op: &'static str, z: Complex<T>) -> NumericsError {
    NumericsError::Domain {
        op,
        re: z.re.to_f64().unwrap_or(f64::NAN),
        im: z.im.to_f64().unwrap_or(f64::NAN),
    }
}

/// Principal argument in `(-π, π]`; a negative real axis point with a signed
/// zero imaginary part is mapped to `π`.
pub fn carg<T: Real>(z: Complex<T>) -> T {
    if z.im == T::zero() && z.re < T::zero() {
        T::PI()
    } else {
        z.im.atan2(z.re)
    }
}

/// Principal logarithm `log|z| + i arg z` with `arg z ∈ (-π, π]`.
pub fn clog<T: Real>(z: Complex<T>) -> Result<Complex<T>, NumericsError> {
    if z.re == T::zero() && z.im == T::zero() {
        return Err(domain("log", z));
    }
    Ok(Complex::new(z.norm().ln(), carg(z)))
}

fn log_nz<T: Real>(z: Complex<T>) -> Complex<T> {
    Complex::new(z.norm().ln(), carg(z))
}

/// Power series `Σ zⁿ/n²`, used on the disk `|z| ≤ 1/2`.
fn dilog_series<T: Real>(z: Complex<T>) -> Complex<T> {
    let mut sum = Complex::new(T::zero(), T::zero());
    let mut pow = z;
    let tiny = T::epsilon() * T::lit(0.25);
    for n in 1..200 {
        let nn = T::lit((n * n) as f64);
        let term = pow / nn;
        sum = sum + term;
        if term.norm() <= tiny * sum.norm() {
            break;
        }
        pow = pow * z;
    }
    sum
}

/// Series in `u = -log(1 - x)` with coefficients `B_{2n}/(2n+1)!`.
fn dilog_bernoulli<T: Real>(u: Complex<T>) -> Complex<T> {
    const BF: [f64; 10] = [
        -1.0 / 4.0,
        1.0 / 36.0,
        -1.0 / 3600.0,
        1.0 / 211680.0,
        -1.0 / 10886400.0,
        1.0 / 526901760.0,
        -4.064_761_645_144_225_5e-11,
        8.921_691_020_456_452e-13,
        -1.993_929_586_072_107_6e-14,
        4.518_980_029_619_918e-16,
    ];
    let c = |k: usize| Complex::new(T::lit(BF[k]), T::zero());
    let u2 = u * u;
    let mut inner = c(9);
    for k in (2..9).rev() {
        inner = c(k) + u2 * inner;
    }
    u + u2 * (c(0) + u * (c(1) + u2 * inner))
}

/// Principal dilogarithm `Li₂(z)`, cut along `(1, ∞)` and continuous from
/// below on the cut.
pub fn dilog<T: Real>(z: Complex<T>) -> Complex<T> {
    let zero = T::zero();
    let one = T::one();
    let half = T::lit(0.5);
    let pi2_6 = T::PI() * T::PI() / T::lit(6.0);
    if z.re == zero && z.im == zero {
        return Complex::new(zero, zero);
    }
    if z.re == one && z.im == zero {
        return Complex::new(pi2_6, zero);
    }
    let nz = z.norm_sqr();
    if nz <= T::lit(0.25) {
        return dilog_series(z);
    }
    let c1 = Complex::new(one, zero);
    let (u, rest, sgn) = if z.re <= half {
        if nz > one {
            let lz = log_nz(-z);
            (-log_nz(c1 - z.inv()), -(lz * lz).scale(half) - Complex::new(pi2_6, zero), -one)
        } else {
            (-log_nz(c1 - z), Complex::new(zero, zero), one)
        }
    } else if nz <= T::lit(2.0) * z.re {
        let u = -log_nz(z);
        (u, u * log_nz(c1 - z) + Complex::new(pi2_6, zero), -one)
    } else {
        let lz = log_nz(-z);
        (-log_nz(c1 - z.inv()), -(lz * lz).scale(half) - Complex::new(pi2_6, zero), -one)
    };
    dilog_bernoulli(u).scale(sgn) + rest
}

/// Bloch-Wigner function `D(z) = Im Li₂(z) + log|z| arg(1 - z)`.
pub fn bloch_wigner<T: Real>(z: Complex<T>) -> Result<T, NumericsError> {
    let one = Complex::new(T::one(), T::zero());
    if z == Complex::new(T::zero(), T::zero()) || z == one {
        return Err(domain("bloch_wigner", z));
    }
    Ok(dilog(z).im + z.norm().ln() * carg(one - z))
}

/// Shape triple `(u, 1/(1-u), 1-1/u)` attached to the opposite-edge pairs of
/// an ideal tetrahedron.
pub fn shape_triple<T: Real>(u: Complex<T>) -> Result<[Complex<T>; 3], NumericsError> {
    let one = Complex::new(T::one(), T::zero());
    if u == Complex::new(T::zero(), T::zero()) || u == one {
        return Err(domain("shape_triple", u));
    }
    Ok([u, (one - u).inv(), one - u.inv()])
}

/// `u' = 1/(1-u)`.
pub fn prime(u: Cx) -> Cx {
    (Cx::new(1.0, 0.0) - u).inv()
}

/// `u'' = 1 - 1/u`.
pub fn dprime(u: Cx) -> Cx {
    Cx::new(1.0, 0.0) - u.inv()
}

/// Reduces `x` to the representative in `(-p/2, p/2]` of its class modulo `p`.
pub fn reduce_mod(x: f64, p: f64) -> f64 {
    let r = x - p * (x / p).round();
    if r <= -p / 2.0 {
        r + p
    } else if r > p / 2.0 {
        r - p
    } else {
        r
    }
}

/// Distance from a complex value to the lattice `4π²·ℤ` on the real axis.
pub fn dist_mod_4pi2(x: Cx) -> f64 {
    Cx::new(reduce_mod(x.re, FOUR_PI2), x.im).norm()
}

/// Whether `u` lies within `tol` of one of the degenerate shapes `0`, `1`, `∞`.
pub fn is_degenerate(u: Cx, tol: f64) -> bool {
    !u.is_finite() || u.norm() < tol || (u - 1.0).norm() < tol || u.norm() > 1.0 / tol
}
