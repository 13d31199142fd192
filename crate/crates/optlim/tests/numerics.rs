use std::f64::consts::PI;

use approx::assert_abs_diff_eq;
use optlim::numerics::*;
use proptest::prelude::*;

const CATALAN: f64 = 0.915_965_594_177_219;

fn raw_series(z: Cx, terms: usize) -> Cx {
    let mut sum = Cx::new(0.0, 0.0);
    let mut pow = Cx::new(1.0, 0.0);
    for n in 1..=terms {
        pow *= z;
        sum += pow / (n * n) as f64;
    }
    sum
}

/// `D(e^{iθ}) = Σ sin(nθ)/n²` on the unit circle.
fn clausen_series(theta: f64, terms: usize) -> f64 {
    (1..=terms).map(|n| (n as f64 * theta).sin() / (n * n) as f64).sum()
}

fn off_cut() -> impl Strategy<Value = Cx> {
    (-4.0..4.0f64, -4.0..4.0f64)
        .prop_filter("away from branch points", |(re, im)| {
            let z = Cx::new(*re, *im);
            z.norm() > 1e-2 && (z - 1.0).norm() > 1e-2 && im.abs() > 1e-3
        })
        .prop_map(|(re, im)| Cx::new(re, im))
}

#[test]
fn clog_examples() {
    assert_eq!(clog(Cx::new(1.0, 0.0)).unwrap(), Cx::new(0.0, 0.0));
    assert_abs_diff_eq!(clog(Cx::new(-1.0, 0.0)).unwrap().im, PI, epsilon = 1e-15);
    assert_abs_diff_eq!(clog(Cx::new(-1.0, 0.0)).unwrap().re, 0.0, epsilon = 1e-15);
    let li = clog(Cx::new(0.0, 1.0)).unwrap();
    assert_abs_diff_eq!(li.re, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(li.im, PI / 2.0, epsilon = 1e-15);
    assert!(clog(Cx::new(0.0, 0.0)).is_err());
}

#[test]
fn dilog_examples() {
    assert_eq!(dilog(Cx::new(0.0, 0.0)), Cx::new(0.0, 0.0));
    let m1 = dilog(Cx::new(-1.0, 0.0));
    assert_abs_diff_eq!(m1.re, -PI * PI / 12.0, epsilon = 1e-14);
    assert_abs_diff_eq!(m1.im, 0.0, epsilon = 1e-15);

    let half = dilog(Cx::new(0.5, 0.0));
    let oracle = raw_series(Cx::new(0.5, 0.0), 200);
    assert_abs_diff_eq!(half.re, oracle.re, epsilon = 1e-14);
    assert_abs_diff_eq!(half.re, PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0, epsilon = 1e-14);

    let i = dilog(Cx::new(0.0, 1.0));
    assert_abs_diff_eq!(i.re, -PI * PI / 48.0, epsilon = 1e-14);
    assert_abs_diff_eq!(i.im, CATALAN, epsilon = 1e-14);
}

#[test]
fn dilog_at_i_matches_series_oracle() {
    // Σ iⁿ/n² converges like 1/N, so average two consecutive partial sums.
    let n = 2_000_000;
    let s = (raw_series(Cx::new(0.0, 1.0), n) + raw_series(Cx::new(0.0, 1.0), n + 1)) / 2.0;
    let i = dilog(Cx::new(0.0, 1.0));
    assert_abs_diff_eq!(i.re, s.re, epsilon = 1e-9);
    assert_abs_diff_eq!(i.im, s.im, epsilon = 1e-9);
}

#[test]
fn bloch_wigner_examples() {
    for x in [-3.0, -0.5, 0.25, 0.5, 2.0, 7.5] {
        assert_abs_diff_eq!(bloch_wigner(Cx::new(x, 0.0)).unwrap(), 0.0, epsilon = 1e-15);
    }
    let z = Cx::from_polar(1.0, PI / 3.0);
    let oracle = clausen_series(PI / 3.0, 1_000_000);
    let d = bloch_wigner(z).unwrap();
    assert_abs_diff_eq!(d, oracle, epsilon = 1e-9);
    assert_abs_diff_eq!(d, 1.014_941_6, epsilon = 1e-7);
    assert_abs_diff_eq!(bloch_wigner(z.inv()).unwrap(), -d, epsilon = 1e-14);
    assert!(bloch_wigner(Cx::new(1.0, 0.0)).is_err());
    assert!(bloch_wigner(Cx::new(0.0, 0.0)).is_err());
}

#[test]
fn shape_triple_examples() {
    let [a, b, c] = shape_triple(Cx::new(0.0, 1.0)).unwrap();
    assert_eq!(a, Cx::new(0.0, 1.0));
    assert_abs_diff_eq!((b - Cx::new(0.5, 0.5)).norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!((c - Cx::new(1.0, 1.0)).norm(), 0.0, epsilon = 1e-15);

    let [a, b, c] = shape_triple(Cx::new(2.0, 0.0)).unwrap();
    assert_eq!(a, Cx::new(2.0, 0.0));
    assert_abs_diff_eq!((b - Cx::new(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!((c - Cx::new(0.5, 0.0)).norm(), 0.0, epsilon = 1e-15);

    assert!(shape_triple(Cx::new(1.0, 0.0)).is_err());
}

#[test]
fn generic_scalar_f32() {
    let z = num_complex::Complex::<f32>::new(0.3, 0.2);
    let lo = dilog(z);
    let hi = dilog(Cx::new(0.3, 0.2));
    assert!((lo.re as f64 - hi.re).abs() < 1e-6);
    assert!((lo.im as f64 - hi.im).abs() < 1e-6);
}

#[test]
fn reduce_mod_range() {
    assert_abs_diff_eq!(reduce_mod(FOUR_PI2 * 3.0 + 0.25, FOUR_PI2), 0.25, epsilon = 1e-12);
    assert_eq!(reduce_mod(PI2 / 2.0, PI2), PI2 / 2.0);
    assert_eq!(reduce_mod(-PI2 / 2.0, PI2), PI2 / 2.0);
}

proptest! {
    #[test]
    fn shape_triple_product_is_minus_one(z in off_cut()) {
        let [a, b, c] = shape_triple(z).unwrap();
        prop_assert!((a * b * c + 1.0).norm() < 1e-12);
    }

    #[test]
    fn reflection(z in off_cut().prop_filter("off the cut of 1-z", |z| !(z.re < 0.0 && z.im.abs() < 1e-3))) {
        let one = Cx::new(1.0, 0.0);
        let lhs = dilog(z) + dilog(one - z);
        let rhs = PI * PI / 6.0 - clog(z).unwrap() * clog(one - z).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn inversion(z in off_cut()) {
        let l = clog(-z).unwrap();
        let r = dilog(z) + dilog(z.inv()) + PI * PI / 6.0 + 0.5 * l * l;
        // The branch correction is a multiple of 2πi·log z; remove the nearest one.
        let lz = clog(z).unwrap();
        let step = Cx::new(0.0, 2.0 * PI) * lz;
        let n = (r / step).re.round();
        prop_assert!((r - step * n).norm() < 1e-12 * (1.0 + r.norm()));
    }

    #[test]
    fn bloch_wigner_triple_symmetry(z in off_cut()) {
        let one = Cx::new(1.0, 0.0);
        let d = bloch_wigner(z).unwrap();
        prop_assert!((d - bloch_wigner(one - z.inv()).unwrap()).abs() < 1e-12);
        prop_assert!((d - bloch_wigner((one - z).inv()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn bloch_wigner_inversion(z in off_cut()) {
        prop_assert!((bloch_wigner(z).unwrap() + bloch_wigner(z.inv()).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn dilog_matches_raw_series(r in 0.0..0.5f64, th in -PI..PI) {
        let z = Cx::from_polar(r, th);
        let s = raw_series(z, 10_000);
        prop_assert!((dilog(z) - s).norm() <= 1e-13 * s.norm().max(1e-300));
    }
}
