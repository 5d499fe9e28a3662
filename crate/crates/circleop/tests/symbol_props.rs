//! Property tests for symbols: transform round trips, winding behavior,
//! sup-norm structure, and band-limited ingestion of continuous functions.

use num_complex::Complex64;
use proptest::prelude::*;

use circleop::symbol::{GridSampling, Symbol};

fn arb_complex(scale: f64) -> impl Strategy<Value = Complex64> {
    (-scale..scale, -scale..scale).prop_map(|(re, im)| Complex64::new(re, im))
}

fn arb_symbol(max_degree: i64) -> impl Strategy<Value = Symbol> {
    prop::collection::vec(
        ((-max_degree..=max_degree), arb_complex(1.0)),
        1..=(2 * max_degree as usize + 1),
    )
    .prop_map(|pairs| {
        let mut dedup = std::collections::BTreeMap::new();
        for (n, c) in pairs {
            dedup.insert(n, c);
        }
        Symbol::new(dedup).unwrap()
    })
}

/// Never-vanishing Laurent polynomials, built as products of factors with
/// roots pushed off the unit circle.
fn arb_nonvanishing(max_factors: usize) -> impl Strategy<Value = Symbol> {
    (
        prop::collection::vec((0.1f64..0.8, 0.0f64..std::f64::consts::TAU, any::<bool>()), 0..=max_factors),
        -3i64..=3,
    )
        .prop_map(|(factors, shift)| {
            let mut s = Symbol::monomial(shift, 1.0);
            for (r, th, inside) in factors {
                let radius = if inside { r } else { 1.0 / r };
                let root = Complex64::from_polar(radius, th);
                let factor = Symbol::new([(0, -root), (1, Complex64::ONE)]).unwrap();
                s = s.mul(&factor);
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sample_then_fit_recovers_coefficients(s in arb_symbol(5)) {
        let n = 64usize;
        let deg = s.support_radius().max(1) as usize;
        let back = s.sample(n).unwrap().to_symbol(deg).unwrap();
        prop_assert!(back.approx_eq(&s, 1e-12));
    }

    #[test]
    fn winding_is_additive_over_products(a in arb_nonvanishing(3), b in arb_nonvanishing(3)) {
        let n = 2048usize;
        let zero = Complex64::ZERO;
        let (Ok(wa), Ok(wb)) = (a.winding_number(zero, n), b.winding_number(zero, n)) else {
            return Ok(()); // root drifted into the guard band
        };
        let Ok(wab) = a.mul(&b).winding_number(zero, n) else { return Ok(()); };
        prop_assert_eq!(wab, wa + wb);
    }

    #[test]
    fn winding_is_grid_stable(s in arb_nonvanishing(4)) {
        let zero = Complex64::ZERO;
        let (Ok(w1), Ok(w2)) = (s.winding_number(zero, 1024), s.winding_number(zero, 2048)) else {
            return Ok(());
        };
        prop_assert_eq!(w1, w2);
    }

    #[test]
    fn sup_norm_is_submultiplicative(a in arb_symbol(4), b in arb_symbol(4)) {
        let n = 256usize;
        let prod = a.mul(&b);
        if prod.is_zero() {
            return Ok(());
        }
        let pa = a.sup_norm(n).unwrap();
        let pb = b.sup_norm(n).unwrap();
        let pab = prod.sup_norm(n).unwrap();
        prop_assert!(pab <= pa * pb + 1e-9);
    }

    #[test]
    fn sup_norm_nondecreasing_under_refinement(s in arb_symbol(5)) {
        let coarse = s.sup_norm(64).unwrap();
        let fine = s.sup_norm(128).unwrap();
        prop_assert!(fine >= coarse - 1e-12);
    }

    #[test]
    fn both_analyticities_means_constant(s in arb_symbol(4)) {
        let both = s.is_analytic() && s.is_coanalytic();
        let constant = s.iter().all(|(n, _)| n == 0);
        prop_assert_eq!(both, constant);
    }
}

/// Fourier coefficients of a smooth arc mollifier by direct quadrature on a
/// much finer grid: the oracle for band-limited ingestion.
fn quadrature_coeff(f: &dyn Fn(f64) -> f64, n_quad: usize, mode: i64) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for j in 0..n_quad {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n_quad as f64;
        acc += Complex64::from_polar(f(theta), -(mode as f64) * theta);
    }
    acc / n_quad as f64
}

fn smooth_plateau(theta: f64) -> f64 {
    // Supported on [0, pi] with C^2 shoulders inside, identically 0 on the
    // other half of the circle.
    let t = theta.rem_euclid(2.0 * std::f64::consts::PI);
    let ramp = |x: f64| {
        let x = x.clamp(0.0, 1.0);
        x * x * x * (x * (x * 6.0 - 15.0) + 10.0)
    };
    let w = 0.4;
    let pi = std::f64::consts::PI;
    if t < w {
        ramp(t / w)
    } else if t < pi - w {
        1.0
    } else if t < pi {
        ramp((pi - t) / w)
    } else {
        0.0
    }
}

#[test]
fn band_limited_fit_matches_quadrature_and_decays() {
    let n = 1024usize;
    let g = GridSampling::from_fn(n, |t| Complex64::new(smooth_plateau(t), 0.0));
    let fitted = g.to_symbol(64).unwrap();
    // DFT coefficients against direct quadrature on a 8x finer grid.
    for mode in [-5i64, -1, 0, 2, 7, 31] {
        let want = quadrature_coeff(&smooth_plateau, 8 * n, mode);
        assert!(
            (fitted.coeff(mode) - want).norm() < 1e-6,
            "mode {mode}: {} vs {want}",
            fitted.coeff(mode)
        );
    }
    // Reconstruction error decays with the fitted degree.
    let err = |deg: usize| -> f64 {
        let s = g.to_symbol(deg).unwrap();
        g.values()
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                (s.eval(t) - v).norm()
            })
            .fold(0.0, f64::max)
    };
    let e16 = err(16);
    let e64 = err(64);
    let e256 = err(256);
    assert!(e64 < e16 && e256 < e64, "{e16} {e64} {e256}");
}

#[test]
fn zero_measure_of_half_circle_plateau() {
    let n = 4096usize;
    let g = GridSampling::from_fn(n, |t| Complex64::new(smooth_plateau(t), 0.0));
    let frac = g.zero_set_measure(1e-3);
    assert!((frac - 0.5).abs() < 0.05, "{frac}");
}
