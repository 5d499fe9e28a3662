//! Operator-norm estimation: a singular-value oracle on square truncations,
//! the sup-norm objective whose infimum over analytic functions recovers the
//! norm, and the exactly-solvable cases.
//!
//! The sup-norm objective is minimized over polynomial analytic `k` by
//! derivative-free pattern search; the value it converges to is the *square*
//! of the operator norm, which is the reading consistent with the
//! singular-value oracle on the exactly solvable cases (where the norm is 1
//! the objective is 1, but where the norm is sqrt(2) the objective is 2).

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CircleopError, Result};
use crate::operator::{build_matrix, TruncationMode};
use crate::symbol::{Symbol, TAU_EQ};

/// Convergence tolerance for the truncation sweep.
pub const TOL_CONV: f64 = 1e-4;
/// Agreement tolerance between the minimized objective and the squared
/// singular-value estimate.
pub const TOL_OBJECTIVE: f64 = 1e-2;

#[derive(Clone, Copy, Debug)]
pub struct NormEstimate {
    pub value: f64,
    pub m: i64,
    /// Whether the value moved less than [`TOL_CONV`] when the window grew
    /// from `m/2` to `m`.
    pub converged: bool,
}

/// Largest singular value of the square truncation on `[-m, m]`, together
/// with a convergence flag against the half-size window. Nondecreasing in
/// `m` since the smaller compression is a compression of the larger one.
pub fn operator_norm(alpha: &Symbol, beta: &Symbol, m: i64) -> Result<NormEstimate> {
    let radius = alpha.support_radius().max(beta.support_radius());
    if m < 4 * radius || m < 1 {
        return Err(CircleopError::WindowTooSmall {
            m,
            required: (4 * radius).max(1),
        });
    }
    let value = build_matrix(alpha, beta, m, TruncationMode::Square)?.sigma_max();
    let half = build_matrix(alpha, beta, (m / 2).max(radius.max(1)), TruncationMode::Square)?
        .sigma_max();
    Ok(NormEstimate {
        value,
        m,
        converged: (value - half).abs() < TOL_CONV,
    })
}

/// `(max(|alpha|_inf, |beta|_inf), sqrt(|alpha|_inf^2 + |beta|_inf^2))`; the
/// operator norm always lies in between.
pub fn norm_bounds(alpha: &Symbol, beta: &Symbol, n: usize) -> Result<(f64, f64)> {
    let a = sup_norm_or_zero(alpha, n)?;
    let b = sup_norm_or_zero(beta, n)?;
    Ok((a.max(b), (a * a + b * b).sqrt()))
}

fn sup_norm_or_zero(s: &Symbol, n: usize) -> Result<f64> {
    if s.is_zero() {
        Ok(0.0)
    } else {
        s.sup_norm(n)
    }
}

/// Grid maximum of
/// `(|a|^2+|b|^2)/2 + sqrt(|a conj(b) - k|^2 + ((|a|^2-|b|^2)/2)^2)`
/// for an analytic trial function `k`.
pub fn supnorm_objective(alpha: &Symbol, beta: &Symbol, k: &Symbol, n: usize) -> Result<f64> {
    if !k.is_analytic() {
        return Err(CircleopError::NotAnalytic);
    }
    let av = alpha.sample_unchecked(n);
    let bv = beta.sample_unchecked(n);
    let kv = k.sample_unchecked(n);
    Ok(objective_from_samples(av.values(), bv.values(), kv.values()))
}

fn objective_from_samples(a: &[Complex64], b: &[Complex64], k: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .zip(k)
        .map(|((&a, &b), &k)| {
            let aa = a.norm_sqr();
            let bb = b.norm_sqr();
            let cross = a * b.conj() - k;
            (aa + bb) / 2.0 + (cross.norm_sqr() + ((aa - bb) / 2.0).powi(2)).sqrt()
        })
        .fold(0.0, f64::max)
}

/// Approximate infimum of [`supnorm_objective`] over analytic polynomials of
/// degree at most `deg`: pattern search on the real and imaginary parts of
/// the coefficients, restarted from seeded perturbations of the truncated
/// analytic part of `alpha conj(beta)`. The value estimates the *squared*
/// operator norm.
pub fn minimized_objective(
    alpha: &Symbol,
    beta: &Symbol,
    deg: usize,
    n: usize,
    iters: usize,
    seed: u64,
) -> f64 {
    let av: Vec<Complex64> = alpha.sample_unchecked(n).values().to_vec();
    let bv: Vec<Complex64> = beta.sample_unchecked(n).values().to_vec();
    let dim = 2 * (deg + 1);
    // Basis samples e^{i t theta_j} for t = 0..=deg.
    let basis: Vec<Vec<Complex64>> = (0..=deg)
        .map(|t| {
            (0..n)
                .map(|j| {
                    Complex64::from_polar(
                        1.0,
                        t as f64 * 2.0 * std::f64::consts::PI * j as f64 / n as f64,
                    )
                })
                .collect()
        })
        .collect();
    let eval = |x: &[f64]| {
        let k: Vec<Complex64> = (0..n)
            .map(|j| {
                (0..=deg)
                    .map(|t| Complex64::new(x[2 * t], x[2 * t + 1]) * basis[t][j])
                    .sum()
            })
            .collect();
        objective_from_samples(&av, &bv, &k)
    };

    let k0 = alpha.mul(&beta.conj()).analytic_part().truncated(deg as i64);
    let mut x0 = vec![0.0; dim];
    for t in 0..=deg {
        let c = k0.coeff(t as i64);
        x0[2 * t] = c.re;
        x0[2 * t + 1] = c.im;
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scale = 1.0 + x0.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut best = f64::INFINITY;
    for restart in 0..5 {
        let start: Vec<f64> = if restart == 0 {
            x0.clone()
        } else {
            x0.iter()
                .map(|v| v + rng.gen_range(-0.25..0.25) * scale)
                .collect()
        };
        let (_, fx) = pattern_search(&eval, start, 0.5 * scale, 1e-7, iters);
        best = best.min(fx);
    }
    best
}

/// Greedy compass search with halving steps.
fn pattern_search(
    f: &impl Fn(&[f64]) -> f64,
    mut x: Vec<f64>,
    init_step: f64,
    min_step: f64,
    max_evals: usize,
) -> (Vec<f64>, f64) {
    let mut fx = f(&x);
    let mut step = init_step;
    let mut evals = 0usize;
    while step > min_step && evals < max_evals {
        let mut improved = false;
        for i in 0..x.len() {
            for sgn in [1.0, -1.0] {
                let old = x[i];
                x[i] = old + sgn * step;
                let ft = f(&x);
                evals += 1;
                if ft < fx - 1e-15 {
                    fx = ft;
                    improved = true;
                } else {
                    x[i] = old;
                }
                if evals >= max_evals {
                    break;
                }
            }
            if evals >= max_evals {
                break;
            }
        }
        if !improved {
            step *= 0.5;
        }
    }
    (x, fx)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormCase {
    /// `alpha conj(beta)` analytic: the norm is `max(|alpha|, |beta|)`.
    CaseAnalyticProduct,
    /// `|alpha| = |beta|` constant and `alpha conj(beta)` strictly
    /// co-analytic: the norm is `sqrt(|alpha|^2 + |beta|^2)`.
    CaseUnimodularOpposite,
    Unclassified,
}

/// Detects the two exactly solvable norm regimes; anything else is left
/// unclassified (the norm then sits strictly between the two bounds for some
/// such pairs).
pub fn norm_case_classifier(alpha: &Symbol, beta: &Symbol, n: usize) -> Result<NormCase> {
    let prod = alpha.mul(&beta.conj());
    if prod.is_analytic() {
        return Ok(NormCase::CaseAnalyticProduct);
    }
    let amod: Vec<f64> = alpha
        .sample_unchecked(n)
        .values()
        .iter()
        .map(|v| v.norm())
        .collect();
    let bmod: Vec<f64> = beta
        .sample_unchecked(n)
        .values()
        .iter()
        .map(|v| v.norm())
        .collect();
    let variance = |xs: &[f64]| {
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64
    };
    let constant_moduli = variance(&amod) < 1e-10 && variance(&bmod) < 1e-10;
    let equal = (amod[0] - bmod[0]).abs() < 1e-8;
    // Sufficient witness for the quotient condition: the product itself lies
    // in the strictly co-analytic part.
    let strictly_coanalytic =
        !prod.is_zero() && prod.iter().all(|(k, c)| k <= -1 || c.norm() <= TAU_EQ);
    if constant_moduli && equal && strictly_coanalytic {
        return Ok(NormCase::CaseUnimodularOpposite);
    }
    Ok(NormCase::Unclassified)
}
