//! Invariant-subspace, compactness, and injectivity suites.

use num_complex::Complex64;
use proptest::prelude::*;

use circleop::operator::apply;
use circleop::spectral::resolvent_min_sv;
use circleop::subspace::{
    compact_distance_ratio, injectivity_classifier, invariance_residual,
    invariant_subspace_basis, kernel_basis, kernel_basis_adjoint, reducing_check,
    truncated_svd_approximation, BlaschkeProduct, InjectivityVerdict, SubspaceBasis,
    BLASCHKE_ACCURACY,
};
use circleop::symbol::{GridSampling, Symbol};
use circleop::vector::CoeffVector;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Certified expansions of products with zeros up to modulus 0.7 are
    /// unimodular on the boundary to the documented accuracy, at degrees
    /// at least 40.
    #[test]
    fn blaschke_boundary_unimodularity(
        zeros in prop::collection::vec((0.0f64..0.7, 0.0f64..std::f64::consts::TAU), 1..=3),
        power in 0u32..2,
    ) {
        let zs: Vec<Complex64> = zeros.iter().map(|&(r, t)| Complex64::from_polar(r, t)).collect();
        let b = BlaschkeProduct::new(Complex64::ONE, power, zs).unwrap();
        let degree = b.required_degree(BLASCHKE_ACCURACY).max(40);
        let s = b.coefficients(degree).unwrap();
        let n = (4 * (degree + 1)).next_power_of_two();
        let g = s.sample(n).unwrap();
        let worst = g.values().iter().map(|v| (v.norm() - 1.0).abs()).fold(0.0, f64::max);
        prop_assert!(worst <= BLASCHKE_ACCURACY, "defect {} at degree {}", worst, degree);
        // The truncated series also matches the exact boundary evaluation.
        let dev = (0..16)
            .map(|j| {
                let theta = 2.0 * std::f64::consts::PI * j as f64 / 16.0;
                (s.eval(theta) - b.eval(theta)).norm()
            })
            .fold(0.0, f64::max);
        prop_assert!(dev <= 10.0 * BLASCHKE_ACCURACY, "eval deviation {}", dev);
    }

    /// Invariance fails loudly once a vector spanning both complement
    /// directions is adjoined. (A purely analytic perturbation would merely
    /// complete the codimension-one analytic part back to the full analytic
    /// half, which is again invariant.)
    #[test]
    fn perturbed_bases_are_not_invariant(seedmode in 0i64..3) {
        let phi = BlaschkeProduct::factor(c(0.5, 0.0)).unwrap();
        let psi = BlaschkeProduct::coordinate();
        let m = 128;
        let basis = invariant_subspace_basis(&phi, &psi, m).unwrap();
        let extra = CoeffVector::basis(seedmode).add(&CoeffVector::basis(-1));
        let mut vectors: Vec<CoeffVector> = basis.vectors().to_vec();
        vectors.push(extra);
        let perturbed = SubspaceBasis::from_vectors(vectors, basis.window());
        let res = invariance_residual(&perturbed, &Symbol::z(), &Symbol::zbar());
        prop_assert!(res >= 1e-2, "residual {}", res);
    }
}

#[test]
fn canonical_inner_pairs_span_the_expected_modes() {
    // phi = z, psi = 1: the span misses exactly the constant mode.
    let basis = invariant_subspace_basis(
        &BlaschkeProduct::coordinate(),
        &BlaschkeProduct::trivial(),
        16,
    )
    .unwrap();
    let e0 = CoeffVector::basis(0);
    assert!(basis.project(&e0).norm() <= 1e-12);
    for n in [1i64, 2, 5, -1, -3] {
        let e = CoeffVector::basis(n);
        assert!((basis.project(&e).norm() - 1.0).abs() <= 1e-12, "mode {n}");
    }
    assert!(invariance_residual(&basis, &Symbol::z(), &Symbol::zbar()) <= 1e-12);

    // phi = psi = 1: everything within the shift budget is spanned.
    let full = invariant_subspace_basis(
        &BlaschkeProduct::trivial(),
        &BlaschkeProduct::trivial(),
        16,
    )
    .unwrap();
    for n in -8i64..=8 {
        let e = CoeffVector::basis(n);
        assert!((full.project(&e).norm() - 1.0).abs() <= 1e-12, "mode {n}");
    }
    assert!(invariance_residual(&full, &Symbol::z(), &Symbol::zbar()) <= 1e-12);
}

#[test]
fn reducing_dichotomy_over_six_subspaces() {
    let m = 24;
    let window = (-m, m);
    let phi = BlaschkeProduct::factor(c(0.5, 0.0)).unwrap();
    let cases: Vec<(SubspaceBasis, bool)> = vec![
        (SubspaceBasis::empty(window), true),
        (SubspaceBasis::from_modes(0..=m, window), true),
        (SubspaceBasis::from_modes(-m..=-1, window), true),
        (SubspaceBasis::from_modes(-m..=m, window), true),
        (
            invariant_subspace_basis(&phi, &BlaschkeProduct::trivial(), 128).unwrap(),
            false,
        ),
        (
            invariant_subspace_basis(&BlaschkeProduct::coordinate(), &phi, 128).unwrap(),
            false,
        ),
    ];
    for (i, (basis, want)) in cases.iter().enumerate() {
        assert_eq!(
            reducing_check(basis).is_reducing(),
            *want,
            "subspace {i} misjudged"
        );
    }
}

#[test]
fn rank_limited_svd_cannot_beat_the_gap() {
    let m = 48;
    let approx = truncated_svd_approximation(&Symbol::zbar(), &Symbol::one(), m, 5).unwrap();
    let ratio = compact_distance_ratio(&Symbol::zbar(), &Symbol::one(), &approx, m).unwrap();
    assert!(ratio >= 0.5f64.sqrt() - 1e-3, "ratio {ratio}");
}

/// A pair with a genuine kernel on the window while the adjoint stays
/// injective: non-injectivity forces dense range.
#[test]
fn kernel_implies_injective_adjoint() {
    for (alpha, beta) in [
        (Symbol::one(), Symbol::z()),
        (Symbol::zbar(), Symbol::one()),
    ] {
        let m = 24;
        let kern = kernel_basis(&alpha, &beta, m, 1e-8).unwrap();
        assert_eq!(kern.len(), 1, "({alpha}, {beta})");
        // the kernel direction is 1 - zbar up to phase
        let v = &kern[0];
        let target = CoeffVector::from_pairs([(0, c(1.0, 0.0)), (-1, c(-1.0, 0.0))]).normalized();
        let overlap = v.inner(&target).norm();
        assert!((overlap - 1.0).abs() < 1e-10, "overlap {overlap}");
        // the image of the kernel vector really vanishes
        assert!(apply(&alpha, &beta, v).norm() <= 1e-10);
        let adj = kernel_basis_adjoint(&alpha, &beta, m, 1e-8).unwrap();
        assert!(adj.is_empty());
    }
}

/// No probe point carries kernels of both the operator and its adjoint.
#[test]
fn no_shared_point_eigenvalues() {
    // Eligible pairs: both symbols non-constant (and polynomial, hence
    // never constant on a set of positive measure).
    let pairs = [
        (Symbol::z(), Symbol::zbar()),
        ("0:2;1:1".parse::<Symbol>().unwrap(), Symbol::zbar()),
        (Symbol::z(), "0:1;-1:1".parse::<Symbol>().unwrap()),
    ];
    let candidates = [
        Complex64::ZERO,
        c(0.5, 0.0),
        c(0.0, 0.5),
        c(-0.5, 0.5),
        c(1.0, 0.0),
    ];
    for (alpha, beta) in &pairs {
        for lambda in candidates {
            let shift = Symbol::constant(lambda);
            let a = alpha.sub(&shift);
            let b = beta.sub(&shift);
            let kern = kernel_basis(&a, &b, 16, 1e-8).unwrap();
            let adj = kernel_basis_adjoint(&a, &b, 16, 1e-8).unwrap();
            assert!(
                kern.is_empty() || adj.is_empty(),
                "({alpha},{beta}) at {lambda}: both kernels nonempty"
            );
        }
    }
}

/// Self-adjoint pairs (real symbols, real constant difference) show no
/// persistent truncation eigenvalue at any probe: the smallest singular
/// value never collapses across all window sizes, unlike a genuine
/// eigenvalue.
#[test]
fn no_persistent_collapse_for_self_adjoint_pairs() {
    let alpha: Symbol = "0:1;1:0.5;-1:0.5".parse().unwrap();
    let beta: Symbol = "1:0.5;-1:0.5".parse().unwrap();
    for lambda in [-0.5f64, 0.5, 1.0, 1.5] {
        let l = c(lambda, 0.0);
        let best = [32, 64, 128]
            .into_iter()
            .map(|m| resolvent_min_sv(&alpha, &beta, l, m).unwrap())
            .fold(0.0f64, f64::max);
        assert!(best >= 1e-4, "lambda {lambda}: persistent collapse, max sv {best}");
    }
    // Contrast: a genuine eigenvalue stays collapsed at every window.
    let worst = [32, 64, 128]
        .into_iter()
        .map(|m| resolvent_min_sv(&Symbol::one(), &Symbol::one(), Complex64::ONE, m).unwrap())
        .fold(0.0f64, f64::max);
    assert!(worst <= 1e-10, "{worst}");
}

/// Adjoint kernel vectors of a common-zero-arc pair concentrate on the arc.
#[test]
fn adjoint_kernel_concentrates_on_common_zeros() {
    use std::f64::consts::PI;
    let n = 1024usize;
    let arc = (1.0f64, 2.8f64);
    let sampling = mollified_arc_zero(n, arc.0, arc.1);
    let alpha = sampling.to_symbol(40).unwrap();
    let beta = alpha.clone();
    let m = 96;
    let kern = kernel_basis_adjoint(&alpha, &beta, m, 1e-2).unwrap();
    assert!(!kern.is_empty());
    let v = &kern[0];
    // Evaluate the kernel vector on the grid and measure its mass inside
    // the (slightly padded) arc.
    let pad = 0.25;
    let mut inside = 0.0f64;
    let mut total = 0.0f64;
    for j in 0..n {
        let theta = 2.0 * PI * j as f64 / n as f64;
        let val: Complex64 = v
            .iter()
            .map(|(k, cv)| cv * Complex64::from_polar(1.0, k as f64 * theta))
            .sum();
        let w = val.norm_sqr();
        total += w;
        if theta >= arc.0 - pad && theta <= arc.1 + pad {
            inside += w;
        }
    }
    assert!(inside / total >= 0.7, "concentration {}", inside / total);
}

fn mollified_arc_zero(n: usize, theta0: f64, theta1: f64) -> GridSampling {
    use std::f64::consts::TAU;
    let width = 0.3;
    GridSampling::from_fn(n, |theta| {
        let t = theta.rem_euclid(TAU);
        let (a, b) = (theta0.rem_euclid(TAU), theta1.rem_euclid(TAU));
        let inside = if a <= b { t >= a && t <= b } else { t >= a || t <= b };
        let dist = if inside {
            0.0
        } else {
            [a, b]
                .into_iter()
                .map(|x| {
                    let d = (t - x).abs();
                    d.min(TAU - d)
                })
                .fold(f64::INFINITY, f64::min)
        };
        let v = if dist <= 0.0 {
            0.0
        } else if dist >= width {
            1.0
        } else {
            let x: f64 = dist / width;
            x * x * x * (x * (x * 6.0 - 15.0) + 10.0)
        };
        Complex64::new(v, 0.0)
    })
}

/// The classifier walks all three zero-set regimes on sampled symbols.
#[test]
fn classifier_covers_the_three_regimes() {
    use std::f64::consts::PI;
    let n = 1024usize;
    let tol = 1e-3;
    let a = Symbol::z().sample(n).unwrap();
    let b = mollified_arc_zero(n, 0.5, 1.5);
    assert_eq!(
        injectivity_classifier(&a, &b, tol).unwrap().verdict,
        InjectivityVerdict::CaseOneNullZeroSet
    );
    let a = mollified_arc_zero(n, 0.2, 1.2);
    let b = mollified_arc_zero(n, PI, PI + 1.0);
    assert_eq!(
        injectivity_classifier(&a, &b, tol).unwrap().verdict,
        InjectivityVerdict::CaseSInjective
    );
    let a = mollified_arc_zero(n, 1.0, 2.5);
    let b = mollified_arc_zero(n, 1.0, 2.5);
    let report = injectivity_classifier(&a, &b, tol).unwrap();
    assert_eq!(report.verdict, InjectivityVerdict::CaseAdjointNotInjective);
    let (_, residual) = report.witness.expect("witness emitted");
    assert!(residual <= 1e-2, "{residual}");
    // zero symbol is refused
    let zero = Symbol::zero().sample(n).unwrap();
    assert!(injectivity_classifier(&zero, &b, tol).is_err());
}
