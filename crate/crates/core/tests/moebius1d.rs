mod common;

use std::f64::consts::{LN_2, PI};

use klein_freq::lattice::Rational;
use klein_freq::moebius1d::{
    cross_ratio, density_1d_angular_pullback, density_1d_chart, freq_1d_exact,
    freq_1d_log_argument, freq_1d_numeric, freq_1d_partial_sum, gk_frequency, total_mass_check,
    AngularPoint, ChartPoint1, MoebiusError,
};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

use common::rng;

fn int(k: i64) -> Rational {
    Rational::from_integer(BigInt::from(k))
}

#[test]
fn numeric_matches_exact_for_k_up_to_20() {
    for k in 1..=20 {
        let exact = freq_1d_exact(k).unwrap();
        let est = freq_1d_numeric(k, 1e-10 * exact).unwrap();
        assert!((est.value - exact).abs() <= 1e-6 * exact, "k={k}");
    }
    assert!((freq_1d_exact(1).unwrap() - 0.287682).abs() < 1e-6);
    assert!((freq_1d_exact(2).unwrap() - 0.117783).abs() < 1e-6);
    assert!((freq_1d_exact(10).unwrap() - (121.0f64 / 120.0).ln()).abs() < 1e-15);
    assert!((gk_frequency(1).unwrap() - 0.415037).abs() < 1e-6);
    assert_eq!(freq_1d_exact(0), Err(MoebiusError::Domain(0)));
}

#[test]
fn partial_sums_telescope() {
    let mut sum = 0.0;
    for k in 1..=2000i64 {
        sum += freq_1d_exact(k).unwrap();
        let closed = freq_1d_partial_sum(k).unwrap();
        assert!((sum - closed).abs() <= 1e-12, "K={k}");
        let kf = k as f64;
        assert!((closed - (2.0 * (kf + 1.0) / (kf + 2.0)).ln()).abs() < 1e-15);
    }
    // Symbolic telescoping of the log arguments.
    let mut prod = int(1);
    for k in 1..=50 {
        prod *= freq_1d_log_argument(k).unwrap();
        assert_eq!(
            prod,
            Rational::new(BigInt::from(2 * (k + 1)), BigInt::from(k + 2))
        );
    }
    let gk: f64 = (1..=100_000).map(|k| gk_frequency(k).unwrap()).sum();
    assert!((gk - 1.0).abs() < 1e-4);
}

#[test]
fn total_mass_is_ln_two() {
    let m = total_mass_check().unwrap();
    assert!((m.value - LN_2).abs() <= 1e-8, "{}", m.value);
}

#[test]
fn log_argument_is_a_cross_ratio() {
    for k in 1..=50 {
        let cr = cross_ratio(&int(-1), &int(0), &int(k), &int(k + 1)).unwrap();
        assert_eq!(cr, freq_1d_log_argument(k).unwrap());
    }
}

fn moebius(m: [i64; 4], x: &Rational) -> Option<Rational> {
    let den = int(m[2]) * x + int(m[3]);
    if den == int(0) {
        None
    } else {
        Some((int(m[0]) * x + int(m[1])) / den)
    }
}

proptest! {
    #[test]
    fn cross_ratio_is_moebius_invariant(
        m in prop::array::uniform4(-6i64..=6),
        pts in prop::array::uniform4(-30i64..=30),
    ) {
        prop_assume!(m[0] * m[3] - m[1] * m[2] != 0);
        let xs = pts.map(int);
        let Ok(before) = cross_ratio(&xs[0], &xs[1], &xs[2], &xs[3]) else { return Ok(()) };
        let ys: Option<Vec<Rational>> = xs.iter().map(|x| moebius(m, x)).collect();
        let Some(ys) = ys else { return Ok(()) };
        prop_assert_eq!(cross_ratio(&ys[0], &ys[1], &ys[2], &ys[3]).unwrap(), before);
    }

    #[test]
    fn chart_density_is_symmetric(x in -50.0f64..50.0, y in -50.0f64..50.0) {
        prop_assume!((x - y).abs() > 1e-6);
        let a = density_1d_chart(ChartPoint1 { x, y }).unwrap();
        let b = density_1d_chart(ChartPoint1 { x: y, y: x }).unwrap();
        prop_assert_eq!(a, b);
    }
}

/// Pullback along `x = tan(phi/2)` with the Jacobian from central differences.
#[test]
fn angular_chart_is_the_pullback_of_the_line_chart() {
    let mut r = rng(31);
    let h = 1e-6;
    let mut checked = 0;
    while checked < 100 {
        let phi1 = r.gen_range(-PI + 0.1..PI - 0.1);
        let phi2 = r.gen_range(-PI + 0.1..PI - 0.1);
        if (phi1 - phi2).abs() < 0.2 {
            continue;
        }
        let t = |phi: f64| (phi / 2.0).tan();
        let dt = |phi: f64| (t(phi + h) - t(phi - h)) / (2.0 * h);
        let chart = density_1d_chart(ChartPoint1 {
            x: t(phi1),
            y: t(phi2),
        })
        .unwrap();
        let pulled = chart * dt(phi1) * dt(phi2);
        let ours = density_1d_angular_pullback(AngularPoint { phi1, phi2 }).unwrap();
        assert!(((pulled - ours) / ours).abs() <= 1e-7, "{phi1} {phi2}");
        checked += 1;
    }
}
