//! Spectra of `S_{alpha,beta}`.
//!
//! For continuous (here: band-limited) symbols the spectrum is decided by an
//! exact formula: the two ranges, plus the points where the two winding
//! numbers disagree. The smallest singular value of a square truncation is
//! kept alongside as a cross-check oracle only — truncations of non-normal
//! operators pollute, so the formula is always the decider.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{CircleopError, Result};
use crate::linalg::{lu_decompose, min_singular_value, polynomial_roots, singular_values, CMat};
use crate::operator::{apply, apply_adjoint, build_matrix, TruncationMode};
use crate::parallel::par_map;
use crate::symbol::{GridSampling, Symbol, DELTA_WIND};
use crate::vector::CoeffVector;

pub const TOL_SOLVE: f64 = 1e-8;

/// Smallest singular value of the square truncation of
/// `S_{alpha-lambda, beta-lambda}` on `[-m, m]`.
pub fn resolvent_min_sv(alpha: &Symbol, beta: &Symbol, lambda: Complex64, m: i64) -> Result<f64> {
    let radius = alpha.support_radius().max(beta.support_radius());
    if m < 4 * radius || m < 1 {
        return Err(CircleopError::WindowTooSmall {
            m,
            required: (4 * radius).max(1),
        });
    }
    let shift = Symbol::constant(lambda);
    let t = build_matrix(
        &alpha.sub(&shift),
        &beta.sub(&shift),
        m,
        TruncationMode::Square,
    )?;
    Ok(min_singular_value(t.matrix()))
}

/// Rectangular grid of probe points in the complex plane, with the range
/// tolerance `eps` used for membership tests.
#[derive(Clone, Copy, Debug)]
pub struct GridSpec {
    pub re0: f64,
    pub re1: f64,
    pub im0: f64,
    pub im1: f64,
    pub n: usize,
    pub eps: f64,
}

impl GridSpec {
    /// Square grid with `eps` defaulting to half the grid spacing.
    pub fn square(re0: f64, re1: f64, im0: f64, im1: f64, n: usize) -> Self {
        let spacing = ((re1 - re0) / (n.max(2) - 1) as f64).max((im1 - im0) / (n.max(2) - 1) as f64);
        GridSpec {
            re0,
            re1,
            im0,
            im1,
            n,
            eps: 0.5 * spacing,
        }
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn points(&self) -> Vec<Complex64> {
        let n = self.n.max(2);
        let mut pts = Vec::with_capacity(n * n);
        for iy in 0..n {
            let im = self.im0 + (self.im1 - self.im0) * iy as f64 / (n - 1) as f64;
            for ix in 0..n {
                let re = self.re0 + (self.re1 - self.re0) * ix as f64 / (n - 1) as f64;
                pts.push(Complex64::new(re, im));
            }
        }
        pts
    }
}

/// Per-point classification of a spectral probe.
#[derive(Clone, Debug)]
pub struct PointClass {
    pub lambda: Complex64,
    pub in_range_a: bool,
    pub in_range_b: bool,
    pub ind_a: Option<i64>,
    pub ind_b: Option<i64>,
    pub in_spectrum: bool,
    /// Set when a winding number was skipped or failed and the verdict came
    /// from range membership alone.
    pub flagged: bool,
    pub min_sv: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct SpectrumReport {
    pub points: Vec<PointClass>,
    pub eps: f64,
}

impl SpectrumReport {
    /// Plot-ready CSV: `re, im, in_range_a, in_range_b, ind_a, ind_b,
    /// in_spectrum, min_sv`.
    pub fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        writeln!(w, "re,im,in_range_a,in_range_b,ind_a,ind_b,in_spectrum,min_sv")?;
        for p in &self.points {
            let ia = p.ind_a.map(|v| v.to_string()).unwrap_or_default();
            let ib = p.ind_b.map(|v| v.to_string()).unwrap_or_default();
            let sv = p.min_sv.map(|v| format!("{v}")).unwrap_or_default();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{}",
                p.lambda.re,
                p.lambda.im,
                p.in_range_a as u8,
                p.in_range_b as u8,
                ia,
                ib,
                p.in_spectrum as u8,
                sv
            )?;
        }
        Ok(())
    }
}

fn classify_point(
    lambda: Complex64,
    av: &GridSampling,
    bv: &GridSampling,
    eps: f64,
    probe: Option<(&Symbol, &Symbol, i64)>,
) -> PointClass {
    let guard = DELTA_WIND.max(0.1 * eps);
    let da = av.distance_to(lambda);
    let db = bv.distance_to(lambda);
    let in_range_a = da < eps;
    let in_range_b = db < eps;
    let mut flagged = false;
    let mut wind = |g: &GridSampling, dist: f64| -> Option<i64> {
        if dist <= guard {
            return None;
        }
        match g.winding_number(lambda) {
            Ok(w) => Some(w),
            Err(_) => {
                flagged = true;
                None
            }
        }
    };
    let ind_a = wind(av, da);
    let ind_b = wind(bv, db);
    let index_mismatch = match (ind_a, ind_b) {
        (Some(x), Some(y)) => x != y,
        _ => {
            if !(in_range_a || in_range_b) {
                flagged = true;
            }
            false
        }
    };
    let in_spectrum = in_range_a || in_range_b || index_mismatch;
    let min_sv = probe.map(|(alpha, beta, m)| {
        resolvent_min_sv(alpha, beta, lambda, m).unwrap_or(f64::NAN)
    });
    PointClass {
        lambda,
        in_range_a,
        in_range_b,
        ind_a,
        ind_b,
        in_spectrum,
        flagged,
        min_sv,
    }
}

/// Classifies every grid point by the range/winding formula; when `probe` is
/// given, also records the truncation's smallest singular value at window
/// `[-probe, probe]`.
pub fn spectrum_continuous(
    alpha: &Symbol,
    beta: &Symbol,
    grid: &GridSpec,
    n_samples: usize,
    probe: Option<i64>,
) -> Result<SpectrumReport> {
    let av = alpha.sample(n_samples)?;
    let bv = beta.sample(n_samples)?;
    let pts = grid.points();
    let points = par_map(&pts, |&lambda| {
        classify_point(lambda, &av, &bv, grid.eps, probe.map(|m| (alpha, beta, m)))
    });
    Ok(SpectrumReport {
        points,
        eps: grid.eps,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HalfSide {
    /// `S_{alpha,0}`: spectrum of the analytic compression with `{0}` adjoined.
    AlphaZeroBeta,
    /// `S_{0,beta}`: spectrum of the co-analytic compression with `{0}` adjoined.
    BetaZeroAlpha,
}

/// Spectrum of a one-sided operator (`S_{s,0}` or `S_{0,s}`): the symbol's
/// range, the points of nonzero winding, and the adjoined origin.
pub fn half_spectrum(
    s: &Symbol,
    side: HalfSide,
    grid: &GridSpec,
    n_samples: usize,
) -> Result<SpectrumReport> {
    let sv = s.sample(n_samples)?;
    let pts = grid.points();
    let guard = DELTA_WIND.max(0.1 * grid.eps);
    let points = par_map(&pts, |&lambda| {
        let d = sv.distance_to(lambda);
        let in_range = d < grid.eps;
        let mut flagged = false;
        let ind = if d <= guard {
            None
        } else {
            match sv.winding_number(lambda) {
                Ok(w) => Some(w),
                Err(_) => {
                    flagged = true;
                    None
                }
            }
        };
        let adjoined_origin = lambda.norm() < grid.eps;
        let in_spectrum = in_range || ind.map(|w| w != 0).unwrap_or(false) || adjoined_origin;
        let (in_range_a, in_range_b, ind_a, ind_b) = match side {
            HalfSide::AlphaZeroBeta => (in_range, false, ind, None),
            HalfSide::BetaZeroAlpha => (false, in_range, None, ind),
        };
        PointClass {
            lambda,
            in_range_a,
            in_range_b,
            ind_a,
            ind_b,
            in_spectrum,
            flagged,
            min_sv: None,
        }
    });
    Ok(SpectrumReport {
        points,
        eps: grid.eps,
    })
}

/// Constructive approximate-eigenvector witness for a point of either
/// essential range: the best residual `|(S - lambda) f|` over localized
/// unit-norm test vectors peaked where the symbol is closest to `lambda`.
pub fn essential_range_in_approx_spectrum(
    alpha: &Symbol,
    beta: &Symbol,
    lambda: Complex64,
    m: i64,
    trials: usize,
) -> Result<f64> {
    let n = 4096usize;
    let av = alpha.sample_unchecked(n);
    let bv = beta.sample_unchecked(n);
    let eps = 0.05 * (1.0 + av.sup_norm().max(bv.sup_norm()));
    let near_a = av.distance_to(lambda) < eps;
    let near_b = bv.distance_to(lambda) < eps;
    if !near_a && !near_b {
        return Err(CircleopError::NotInRange(format!("{lambda}")));
    }
    let shift = Symbol::constant(lambda);
    let alpha_s = alpha.sub(&shift);
    let beta_s = beta.sub(&shift);
    let mut best = f64::INFINITY;
    let argmin = |g: &GridSampling| {
        let mut best_j = 0;
        let mut best_d = f64::INFINITY;
        for (j, v) in g.values().iter().enumerate() {
            let d = (v - lambda).norm();
            if d < best_d {
                best_d = d;
                best_j = j;
            }
        }
        2.0 * std::f64::consts::PI * best_j as f64 / n as f64
    };
    for t in 0..trials.max(1) {
        let r: f64 = 1.0 - (1 << t) as f64 / m as f64;
        if r <= 0.3 {
            break;
        }
        let amp = (1.0 - r * r).sqrt();
        if near_a {
            let theta = argmin(&av);
            let f = CoeffVector::from_pairs((0..=m).map(|k| {
                (
                    k,
                    Complex64::from_polar(amp * r.powi(k as i32), -(k as f64) * theta),
                )
            }))
            .normalized();
            best = best.min(apply(&alpha_s, &beta_s, &f).norm());
        }
        if near_b {
            let theta = argmin(&bv);
            let g = CoeffVector::from_pairs((1..=m).map(|k| {
                (
                    -k,
                    Complex64::from_polar(amp * r.powi((k - 1) as i32), (k as f64) * theta),
                )
            }))
            .normalized();
            best = best.min(apply(&alpha_s, &beta_s, &g).norm());
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InvertVerdict {
    Invertible,
    NotInvertible { ind_a: i64, ind_b: i64 },
    CurveThroughZero,
}

/// Invertibility of `S_{alpha,beta}` for never-vanishing continuous symbols:
/// the two winding numbers about the origin must agree.
pub fn invertible_by_index(alpha: &Symbol, beta: &Symbol, n: usize) -> Result<InvertVerdict> {
    let av = alpha.sample(n)?;
    let bv = beta.sample(n)?;
    let zero = Complex64::ZERO;
    if av.distance_to(zero) <= DELTA_WIND || bv.distance_to(zero) <= DELTA_WIND {
        return Ok(InvertVerdict::CurveThroughZero);
    }
    let ia = av.winding_number(zero)?;
    let ib = bv.winding_number(zero)?;
    if ia == ib {
        Ok(InvertVerdict::Invertible)
    } else {
        Ok(InvertVerdict::NotInvertible { ind_a: ia, ind_b: ib })
    }
}

/// Winding number about the origin from the zeros of the lifted polynomial:
/// write `s = z^{lo} p(z)` and count the roots of `p` strictly inside the
/// circle; the index is `lo` plus that count. Roots within the guard band of
/// the circle are refused.
pub fn index_via_roots(s: &Symbol) -> Result<i64> {
    if s.is_zero() {
        return Err(CircleopError::ZeroSymbol);
    }
    let lo = s.lo();
    let hi = s.hi();
    let coeffs: Vec<Complex64> = (lo..=hi).map(|k| s.coeff(k)).collect();
    if coeffs.len() == 1 {
        return Ok(lo);
    }
    let roots = polynomial_roots(&coeffs);
    let guard = 1e-6;
    let mut inside = 0i64;
    for r in &roots {
        let d = (r.norm() - 1.0).abs();
        if d <= guard {
            return Err(CircleopError::RootNearCircle {
                modulus: r.norm(),
                guard,
            });
        }
        if r.norm() < 1.0 {
            inside += 1;
        }
    }
    Ok(lo + inside)
}

#[derive(Clone, Debug)]
pub struct ShiftedAdjointSolve {
    pub f: CoeffVector,
    pub condition: f64,
    pub flagged: bool,
}

/// Solves `(S*_{alpha,0} - lambda) f = g` by the two-component reduction:
/// the co-analytic part is `-Qg / lambda`, and the analytic part solves the
/// shifted analytic-compression system
/// `(T_{conj(alpha)} - lambda) Pf = Pg + P(conj(alpha) Qg) / lambda`
/// truncated to modes `[0, m]`.
pub fn solve_shifted_adjoint(
    alpha: &Symbol,
    lambda: Complex64,
    g: &CoeffVector,
    m: i64,
) -> Result<ShiftedAdjointSolve> {
    if lambda.norm() == 0.0 {
        return Err(CircleopError::LambdaZero);
    }
    let abar = alpha.conj();
    let n = (m + 1) as usize;
    // T_{conj(alpha)}[i, j] = conj(alpha_hat(j - i)).
    let mut t = CMat::from_fn(n, n, |i, j| abar.coeff(i as i64 - j as i64));
    for i in 0..n {
        t[(i, i)] -= lambda;
    }
    let qg = g.riesz_q();
    let rhs_vec = g
        .riesz_p()
        .add(&qg.mul_symbol(&abar).riesz_p().scale(Complex64::ONE / lambda));
    let rhs: Vec<Complex64> = (0..=m).map(|k| rhs_vec.get(k)).collect();
    let lu = lu_decompose(&t);
    let pf = lu.solve(&rhs);
    let qf = qg.scale(-Complex64::ONE / lambda);
    let mut f = qf.add(&CoeffVector::zeros(0, m));
    for (k, c) in pf.iter().enumerate() {
        *f.get_mut(k as i64) += c;
    }
    let sv = singular_values(&t);
    let smin = sv[sv.len() - 1];
    let condition = if smin > 0.0 { sv[0] / smin } else { f64::INFINITY };
    Ok(ShiftedAdjointSolve {
        f,
        condition,
        flagged: condition > 1e8,
    })
}

/// Residual `|(S*_{alpha,0} - lambda) f - g|` restricted to interior modes.
pub fn shifted_adjoint_residual(
    alpha: &Symbol,
    lambda: Complex64,
    f: &CoeffVector,
    g: &CoeffVector,
    interior: i64,
) -> f64 {
    let sf = apply_adjoint(alpha, &Symbol::zero(), f);
    sf.sub(&f.scale(lambda))
        .sub(g)
        .restrict(-interior, interior)
        .norm()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn resolvent_probe_brackets_the_disk() {
        let z = Symbol::z();
        let zb = Symbol::zbar();
        let inside = resolvent_min_sv(&z, &zb, Complex64::ZERO, 64).unwrap();
        assert!(inside <= 0.05, "{inside}");
        let outside = resolvent_min_sv(&z, &zb, c(1.5, 0.0), 64).unwrap();
        assert!(outside >= 0.4, "{outside}");
        let eig = resolvent_min_sv(&Symbol::one(), &Symbol::one(), Complex64::ONE, 16).unwrap();
        assert!(eig <= 1e-12, "{eig}");
    }

    #[test]
    fn formula_classification_for_the_shift_pair() {
        let z = Symbol::z();
        let zb = Symbol::zbar();
        let grid = GridSpec::square(-2.0, 2.0, -2.0, 2.0, 5).with_eps(0.05);
        let report = spectrum_continuous(&z, &zb, &grid, 512, None).unwrap();
        for p in &report.points {
            let want = p.lambda.norm() < 1.0 - 0.05 || p.lambda.norm() < 1.0 + 0.05 && p.in_range_a;
            if p.lambda.norm() < 0.95 {
                assert!(p.in_spectrum, "{} should be inside", p.lambda);
                assert_eq!(p.ind_a, Some(1));
                assert_eq!(p.ind_b, Some(-1));
            } else if p.lambda.norm() > 1.05 {
                assert!(!p.in_spectrum, "{} should be outside", p.lambda);
            }
            let _ = want;
        }
        // multiplication operator by z: circle only
        let report = spectrum_continuous(&z, &z, &grid, 512, None).unwrap();
        for p in &report.points {
            if (p.lambda - c(0.5, 0.0)).norm() < 1e-12 {
                assert!(!p.in_spectrum);
            }
        }
    }

    #[test]
    fn half_spectrum_is_disk_with_origin() {
        let grid = GridSpec::square(-2.0, 2.0, -2.0, 2.0, 9).with_eps(0.05);
        let report = half_spectrum(&Symbol::z(), HalfSide::AlphaZeroBeta, &grid, 512).unwrap();
        for p in &report.points {
            if p.lambda.norm() < 0.95 {
                assert!(p.in_spectrum);
            }
            if p.lambda.norm() > 1.05 {
                assert!(!p.in_spectrum);
            }
        }
        // lambda = 0.5 in, lambda = 2 out, lambda = 0 in (adjoined).
        let probe = |l: Complex64| {
            let g = GridSpec {
                re0: l.re,
                re1: l.re,
                im0: l.im,
                im1: l.im,
                n: 2,
                eps: 0.05,
            };
            half_spectrum(&Symbol::z(), HalfSide::AlphaZeroBeta, &g, 512)
                .unwrap()
                .points[0]
                .in_spectrum
        };
        assert!(probe(c(0.5, 0.0)));
        assert!(!probe(c(2.0, 0.0)));
        assert!(probe(c(0.0, 0.0)));
    }

    #[test]
    fn approximate_eigenvector_witnesses() {
        let v = essential_range_in_approx_spectrum(
            &Symbol::z(),
            &Symbol::zbar(),
            Complex64::ONE,
            128,
            5,
        )
        .unwrap();
        assert!(v <= 0.2, "{v}");
        let two_z: Symbol = "0:2;1:1".parse().unwrap();
        let v =
            essential_range_in_approx_spectrum(&two_z, &Symbol::zbar(), c(3.0, 0.0), 128, 5)
                .unwrap();
        assert!(v <= 0.2, "{v}");
        let v = essential_range_in_approx_spectrum(
            &Symbol::one(),
            &Symbol::one(),
            Complex64::ONE,
            64,
            3,
        )
        .unwrap();
        assert!(v <= 1e-12, "{v}");
        assert!(essential_range_in_approx_spectrum(
            &Symbol::z(),
            &Symbol::zbar(),
            c(5.0, 0.0),
            64,
            3
        )
        .is_err());
    }

    #[test]
    fn invertibility_by_winding() {
        assert_eq!(
            invertible_by_index(&Symbol::z(), &Symbol::z(), 256).unwrap(),
            InvertVerdict::Invertible
        );
        assert_eq!(
            invertible_by_index(&Symbol::z(), &Symbol::one(), 256).unwrap(),
            InvertVerdict::NotInvertible { ind_a: 1, ind_b: 0 }
        );
        let s: Symbol = "0:-0.5;1:1".parse().unwrap();
        assert_eq!(
            invertible_by_index(&s, &Symbol::one(), 256).unwrap(),
            InvertVerdict::NotInvertible { ind_a: 1, ind_b: 0 }
        );
        let touching = Symbol::z().sub(&Symbol::one());
        assert_eq!(
            invertible_by_index(&touching, &Symbol::one(), 256).unwrap(),
            InvertVerdict::CurveThroughZero
        );
    }

    #[test]
    fn index_from_roots() {
        assert_eq!(index_via_roots(&Symbol::monomial(3, 1.0)).unwrap(), 3);
        assert_eq!(index_via_roots(&Symbol::zbar()).unwrap(), -1);
        let s: Symbol = "0:1;1:-2.5;2:1".parse().unwrap();
        assert_eq!(index_via_roots(&s).unwrap(), 1);
        let near: Symbol = "0:-1;1:1".parse().unwrap(); // root exactly on the circle
        assert!(matches!(
            index_via_roots(&near),
            Err(CircleopError::RootNearCircle { .. })
        ));
    }

    #[test]
    fn shifted_adjoint_solver() {
        // alpha = 0: the operator is -lambda*I, so f = -g/lambda.
        let g = CoeffVector::from_pairs([(-2, c(1.0, 0.5)), (0, c(-1.0, 0.0)), (3, c(0.0, 2.0))]);
        let sol = solve_shifted_adjoint(&Symbol::zero(), c(1.0, 0.0), &g, 16).unwrap();
        assert!(sol.f.sub(&g.scale(c(-1.0, 0.0))).norm() < 1e-12);

        // alpha = z, lambda = 2, g = 1.
        let g = CoeffVector::basis(0);
        let sol = solve_shifted_adjoint(&Symbol::z(), c(2.0, 0.0), &g, 32).unwrap();
        assert!(sol.f.riesz_q().norm() < 1e-14);
        let r = shifted_adjoint_residual(&Symbol::z(), c(2.0, 0.0), &sol.f, &g, 16);
        assert!(r <= 1e-10, "{r}");
        assert!(!sol.flagged);

        // co-analytic data: Qf = -Qg/lambda exactly.
        let g = CoeffVector::from_pairs([(-3, c(2.0, 0.0)), (-1, c(0.0, 1.0))]);
        let sol = solve_shifted_adjoint(&Symbol::z(), c(2.0, 0.0), &g, 16).unwrap();
        assert!(sol
            .f
            .riesz_q()
            .sub(&g.riesz_q().scale(c(-0.5, 0.0)))
            .norm()
            < 1e-12);

        assert!(solve_shifted_adjoint(&Symbol::z(), Complex64::ZERO, &g, 16).is_err());
    }
}
