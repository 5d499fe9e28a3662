//! Invariant and reducing subspaces of the two-sided shift, compactness
//! obstructions, and kernel/injectivity analysis.
//!
//! Inner functions are restricted to finite Blaschke products (unimodular
//! constant times a monomial times disk-automorphism factors), which enter
//! operator computations only through certified Taylor expansions: the
//! requested degree must make the coefficient tail, and hence the boundary
//! unimodularity defect, provably small.

use num_complex::Complex64;

use crate::error::{CircleopError, Result};
use crate::linalg::{low_rank_approx, small_singular_vectors, CMat};
use crate::operator::{
    apply, apply_adjoint, build_matrix, build_matrix_window, OperatorMatrix, TruncationMode,
};
use crate::symbol::{GridSampling, Symbol};
use crate::vector::CoeffVector;

/// Boundary unimodularity target for Blaschke expansions.
pub const BLASCHKE_ACCURACY: f64 = 1e-8;
/// Acceptance tolerance for reducing subspaces.
pub const REDUCING_TOL: f64 = 1e-8;

/// A finite Blaschke product `c z^p prod_j (z - z_j)/(1 - conj(z_j) z)`.
#[derive(Clone, Debug)]
pub struct BlaschkeProduct {
    constant: Complex64,
    power: u32,
    zeros: Vec<Complex64>,
}

impl BlaschkeProduct {
    pub fn new(constant: Complex64, power: u32, zeros: Vec<Complex64>) -> Result<Self> {
        if (constant.norm() - 1.0).abs() > 1e-12 {
            return Err(CircleopError::ConstantNotUnimodular(constant.norm()));
        }
        for z in &zeros {
            if z.norm() >= 1.0 - 1e-9 {
                return Err(CircleopError::ZeroNotInDisk(format!("{z}")));
            }
        }
        Ok(BlaschkeProduct {
            constant,
            power,
            zeros,
        })
    }

    /// The identity inner function `1`.
    pub fn trivial() -> Self {
        BlaschkeProduct::new(Complex64::ONE, 0, Vec::new()).unwrap()
    }

    /// The coordinate `z`.
    pub fn coordinate() -> Self {
        BlaschkeProduct::new(Complex64::ONE, 1, Vec::new()).unwrap()
    }

    /// Single factor vanishing at `a`.
    pub fn factor(a: Complex64) -> Result<Self> {
        BlaschkeProduct::new(Complex64::ONE, 0, vec![a])
    }

    pub fn degree(&self) -> usize {
        self.power as usize + self.zeros.len()
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    /// Exact boundary evaluation at `e^{i theta}`; unimodular by
    /// construction.
    pub fn eval(&self, theta: f64) -> Complex64 {
        let z = Complex64::from_polar(1.0, theta);
        let mut v = self.constant * z.powu(self.power);
        for a in &self.zeros {
            v *= (z - a) / (Complex64::ONE - a.conj() * z);
        }
        v
    }

    fn rho(&self) -> f64 {
        self.zeros.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn series_to(&self, depth: usize) -> Vec<Complex64> {
        let n = depth + 1;
        let mut series = vec![Complex64::ZERO; n];
        let p = self.power as usize;
        if p < n {
            series[p] = self.constant;
        }
        for a in &self.zeros {
            // Multiply by (z - a) * sum_k conj(a)^k z^k, truncated.
            let ac = a.conj();
            let mut geo = vec![Complex64::ZERO; n];
            let mut pw = Complex64::ONE;
            for g in geo.iter_mut() {
                *g = pw;
                pw *= ac;
            }
            let mut num = vec![Complex64::ZERO; n];
            for (k, &g) in geo.iter().enumerate() {
                if k + 1 < n {
                    num[k + 1] += g;
                }
                num[k] -= a * g;
            }
            let mut next = vec![Complex64::ZERO; n];
            for (i, &s) in series.iter().enumerate() {
                if s == Complex64::ZERO {
                    continue;
                }
                for (j, &m) in num.iter().enumerate() {
                    if i + j < n {
                        next[i + j] += s * m;
                    }
                }
            }
            series = next;
        }
        series
    }

    /// Upper estimate of the sup-norm error of the truncation at `degree`:
    /// the summed magnitudes of the computed coefficients beyond it, plus a
    /// geometric extrapolation of the part beyond the computed depth.
    fn tail_estimate(series: &[Complex64], degree: usize, rho: f64) -> f64 {
        let mut tail: f64 = series.iter().skip(degree + 1).map(|c| c.norm()).sum();
        if rho > 0.0 && rho < 1.0 {
            let last = series.last().map(|c| c.norm()).unwrap_or(0.0);
            tail += 2.0 * last * rho / (1.0 - rho);
        }
        tail
    }

    fn certified_series(&self, target: f64) -> (Vec<Complex64>, usize) {
        let rho = self.rho();
        let mut depth = (self.degree() + 96).max(192);
        loop {
            let series = self.series_to(depth);
            // The extrapolation is only grounded once the magnitudes decay.
            let recent = series[depth.saturating_sub(8)..]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            let earlier = series[depth.saturating_sub(24)..depth.saturating_sub(8)]
                .iter()
                .map(|c| c.norm())
                .fold(0.0, f64::max);
            let decaying = recent <= earlier + f64::MIN_POSITIVE;
            if decaying {
                let geo = if rho > 0.0 && rho < 1.0 {
                    2.0 * series.last().map(|c| c.norm()).unwrap_or(0.0) * rho / (1.0 - rho)
                } else {
                    0.0
                };
                let mut suffix = vec![0.0f64; series.len() + 1];
                for k in (0..series.len()).rev() {
                    suffix[k] = suffix[k + 1] + series[k].norm();
                }
                for d in self.degree().max(1)..=depth.saturating_sub(32) {
                    if suffix[d + 1] + geo <= target {
                        return (series, d);
                    }
                }
            }
            if depth >= 1 << 20 {
                return (series, depth);
            }
            depth *= 2;
        }
    }

    /// Smallest degree whose certified tail estimate meets `target`.
    pub fn required_degree(&self, target: f64) -> usize {
        self.certified_series(target).1
    }

    /// Taylor coefficients to the given degree, as an analytic symbol. The
    /// degree must be certified: large enough that the coefficient tail is
    /// below [`BLASCHKE_ACCURACY`], otherwise the rejection carries the
    /// required degree.
    pub fn coefficients(&self, degree: usize) -> Result<Symbol> {
        let rho = self.rho();
        let probe = self.series_to(degree + 96);
        if degree < self.degree()
            || Self::tail_estimate(&probe, degree, rho) > BLASCHKE_ACCURACY
        {
            return Err(CircleopError::DegreeTooLow {
                degree,
                required: self.required_degree(BLASCHKE_ACCURACY),
                target: BLASCHKE_ACCURACY,
            });
        }
        Ok(self.coefficients_unchecked(degree))
    }

    /// Expansion without the accuracy gate (still exact arithmetic on the
    /// truncated series).
    pub fn coefficients_unchecked(&self, degree: usize) -> Symbol {
        let series = self.series_to(degree);
        Symbol::new(series.into_iter().enumerate().map(|(k, c)| (k as i64, c))).unwrap()
    }
}

/// An orthonormal family of coefficient vectors on a common window.
#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    vectors: Vec<CoeffVector>,
    window: (i64, i64),
}

impl SubspaceBasis {
    /// Orthonormalizes the given spanning vectors (modified Gram-Schmidt,
    /// run twice); near-dependent vectors are dropped.
    pub fn from_vectors(vectors: Vec<CoeffVector>, window: (i64, i64)) -> Self {
        let mut basis: Vec<CoeffVector> = Vec::new();
        for v in vectors {
            let mut w = v.restrict(window.0, window.1);
            for _ in 0..2 {
                for b in &basis {
                    let c = w.inner(b);
                    w = w.sub(&b.scale(c));
                }
            }
            let n = w.norm();
            if n > 1e-8 {
                basis.push(w.scale(Complex64::new(1.0 / n, 0.0)));
            }
        }
        SubspaceBasis {
            vectors: basis,
            window,
        }
    }

    /// Basis of the span of the pure modes in `modes`.
    pub fn from_modes(modes: impl IntoIterator<Item = i64>, window: (i64, i64)) -> Self {
        let vectors = modes.into_iter().map(CoeffVector::basis).collect();
        SubspaceBasis::from_vectors(vectors, window)
    }

    pub fn empty(window: (i64, i64)) -> Self {
        SubspaceBasis {
            vectors: Vec::new(),
            window,
        }
    }

    pub fn vectors(&self) -> &[CoeffVector] {
        &self.vectors
    }

    pub fn window(&self) -> (i64, i64) {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn project(&self, v: &CoeffVector) -> CoeffVector {
        let mut out = CoeffVector::zeros(self.window.0, self.window.1);
        for b in &self.vectors {
            let c = v.inner(b);
            out = out.add(&b.scale(c));
        }
        out
    }

    /// Max deviation of the Gram matrix from the identity.
    pub fn gram_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.vectors.iter().enumerate() {
            for (j, b) in self.vectors.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((a.inner(b) - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }
}

/// Basis of `phi H^2 (+) conj(psi) H^{2-perp}` inside the window `[-m, m]`,
/// spanning shifts up to `m/2` on each side.
pub fn invariant_subspace_basis(
    phi: &BlaschkeProduct,
    psi: &BlaschkeProduct,
    m: i64,
) -> Result<SubspaceBasis> {
    let deg = phi.degree().max(psi.degree()).max(1) as i64;
    if m < 4 * deg {
        return Err(CircleopError::WindowTooSmall { m, required: 4 * deg });
    }
    let k_max = m / 2;
    let expand = |b: &BlaschkeProduct| -> Result<Symbol> {
        let d = b.required_degree(1e-12).max(b.degree());
        if (d as i64) + k_max > m {
            return Err(CircleopError::DegreeTooLow {
                degree: m as usize,
                required: d + k_max as usize,
                target: 1e-12,
            });
        }
        Ok(b.coefficients_unchecked(d))
    };
    let phi_sym = expand(phi)?;
    let psi_bar = expand(psi)?.conj();
    let mut vectors = Vec::new();
    for k in 0..=k_max {
        vectors.push(CoeffVector::basis(k).mul_symbol(&phi_sym));
    }
    for k in 0..=k_max {
        vectors.push(CoeffVector::basis(-(k + 1)).mul_symbol(&psi_bar));
    }
    Ok(SubspaceBasis::from_vectors(vectors, (-m, m)))
}

/// Max over basis vectors of the interior-restricted defect
/// `|(I - Pi_B) S v|`: zero exactly when the span is invariant under
/// `S_{alpha,beta}` as far as the window can see.
pub fn invariance_residual(basis: &SubspaceBasis, alpha: &Symbol, beta: &Symbol) -> f64 {
    residual_under(basis, |v| apply(alpha, beta, v))
}

/// Same defect for the adjoint action.
pub fn adjoint_invariance_residual(basis: &SubspaceBasis, alpha: &Symbol, beta: &Symbol) -> f64 {
    residual_under(basis, |v| apply_adjoint(alpha, beta, v))
}

fn residual_under(basis: &SubspaceBasis, op: impl Fn(&CoeffVector) -> CoeffVector) -> f64 {
    let (lo, hi) = basis.window();
    let interior = (hi.min(-lo)) / 2;
    let mut worst: f64 = 0.0;
    for v in basis.vectors() {
        let w = op(v);
        let r = w.sub(&basis.project(&w));
        worst = worst.max(r.restrict(-interior, interior).norm());
    }
    worst
}

#[derive(Clone, Debug)]
pub enum ReducingVerdict {
    Reducing,
    NotReducing {
        forward_residual: f64,
        adjoint_residual: f64,
    },
}

impl ReducingVerdict {
    pub fn is_reducing(&self) -> bool {
        matches!(self, ReducingVerdict::Reducing)
    }
}

/// A subspace reduces the two-sided shift iff both the forward and the
/// adjoint invariance defects vanish; only the four canonical subspaces
/// (zero, analytic, co-analytic, everything) pass.
pub fn reducing_check(basis: &SubspaceBasis) -> ReducingVerdict {
    let z = Symbol::z();
    let zb = Symbol::zbar();
    let forward = invariance_residual(basis, &z, &zb);
    let adjoint = adjoint_invariance_residual(basis, &z, &zb);
    if forward <= REDUCING_TOL && adjoint <= REDUCING_TOL {
        ReducingVerdict::Reducing
    } else {
        ReducingVerdict::NotReducing {
            forward_residual: forward,
            adjoint_residual: adjoint,
        }
    }
}

/// The image norms `|S z^n|` for `n = 0..=10` and `|S zbar^{n+1}|`
/// likewise: constant sequences (the two symbol L^2 norms), which is what
/// rules out compactness whenever either symbol is nonzero.
pub fn noncompactness_witness(
    alpha: &Symbol,
    beta: &Symbol,
    m: i64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let radius = alpha.support_radius().max(beta.support_radius());
    if m < radius + 10 {
        return Err(CircleopError::WindowTooSmall {
            m,
            required: radius + 10,
        });
    }
    let analytic = (0..=10)
        .map(|n| apply(alpha, beta, &CoeffVector::basis(n)).norm())
        .collect();
    let coanalytic = (0..=10)
        .map(|n| apply(alpha, beta, &CoeffVector::basis(-(n + 1))).norm())
        .collect();
    Ok((analytic, coanalytic))
}

/// `|S - K| / |S|` on the square window, for a finite-rank `K` given on the
/// same (or smaller) windows.
pub fn compact_distance_ratio(
    alpha: &Symbol,
    beta: &Symbol,
    k: &OperatorMatrix,
    m: i64,
) -> Result<f64> {
    let s = build_matrix(alpha, beta, m, TruncationMode::Square)?;
    let diff = s.sub(k);
    let s_norm = s.sigma_max();
    if s_norm == 0.0 {
        return Ok(if diff.sigma_max() == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(diff.sigma_max() / s_norm)
}

/// Best rank-`rank` truncation-SVD approximation of the square truncation.
pub fn truncated_svd_approximation(
    alpha: &Symbol,
    beta: &Symbol,
    m: i64,
    rank: usize,
) -> Result<OperatorMatrix> {
    let s = build_matrix(alpha, beta, m, TruncationMode::Square)?;
    let approx = low_rank_approx(s.matrix(), rank);
    let mut out = OperatorMatrix::new_zero(s.in_window(), s.out_window());
    let (ilo, ihi) = s.in_window();
    let (olo, ohi) = s.out_window();
    for mm in olo..=ohi {
        for nn in ilo..=ihi {
            out.set_entry(mm, nn, approx[((mm - olo) as usize, (nn - ilo) as usize)]);
        }
    }
    Ok(out)
}

/// Right singular vectors of the exact rectangular truncation with singular
/// value below `tol`; the empty list certifies injectivity on the window.
pub fn kernel_basis(alpha: &Symbol, beta: &Symbol, m: i64, tol: f64) -> Result<Vec<CoeffVector>> {
    let t = build_matrix(alpha, beta, m, TruncationMode::Exact)?;
    Ok(kernel_from_matrix(t.matrix(), -m, tol))
}

/// Kernel of the adjoint on the window: right singular vectors of the exact
/// rectangular truncation of `S*`.
pub fn kernel_basis_adjoint(
    alpha: &Symbol,
    beta: &Symbol,
    m: i64,
    tol: f64,
) -> Result<Vec<CoeffVector>> {
    let radius = alpha.support_radius().max(beta.support_radius());
    let abar = alpha.conj();
    let bbar = beta.conj();
    let in_w = (-m, m);
    let out_w = (-m - radius, m + radius);
    // Rows m >= 0 multiply by conj(alpha) then project; rows m < 0 use
    // conj(beta). Entry (mm, nn) = conj(alpha_hat(nn - mm)) etc.
    let rows = (out_w.1 - out_w.0 + 1) as usize;
    let cols = (in_w.1 - in_w.0 + 1) as usize;
    let mat = CMat::from_fn(rows, cols, |i, j| {
        let mm = out_w.0 + i as i64;
        let nn = in_w.0 + j as i64;
        if mm >= 0 {
            abar.coeff(mm - nn)
        } else {
            bbar.coeff(mm - nn)
        }
    });
    Ok(kernel_from_matrix(&mat, -m, tol))
}

fn kernel_from_matrix(mat: &CMat, in_lo: i64, tol: f64) -> Vec<CoeffVector> {
    small_singular_vectors(mat, tol)
        .into_iter()
        .map(|(_, v)| {
            CoeffVector::from_pairs(
                v.into_iter()
                    .enumerate()
                    .map(|(j, c)| (in_lo + j as i64, c)),
            )
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum InjectivityVerdict {
    /// One zero set is null: at least one of `S`, `S*` is injective.
    CaseOneNullZeroSet,
    /// Both zero sets positive but unequal: `S` is injective.
    CaseSInjective,
    /// Both positive, intersection null: `S*` is injective.
    CaseAdjointInjective,
    /// Both positive with positive common zero set: `S*` kills the
    /// (smoothed) indicator of the intersection.
    CaseAdjointNotInjective,
    Unclassified,
}

#[derive(Clone, Debug)]
pub struct InjectivityReport {
    pub verdict: InjectivityVerdict,
    pub measure_a: f64,
    pub measure_b: f64,
    pub measure_a_minus_b: f64,
    pub measure_b_minus_a: f64,
    pub measure_intersection: f64,
    /// For the non-injective adjoint case: the witness vector and its
    /// relative residual `|S* g| / |g|`.
    pub witness: Option<(CoeffVector, f64)>,
}

/// Grid-level zero-set classification of injectivity. Measures are grid
/// fractions at threshold `tol`; a measure is treated as null below `2/n`
/// and as positive above 1%, with the ambiguous band mapped to
/// `Unclassified`.
pub fn injectivity_classifier(
    alpha: &GridSampling,
    beta: &GridSampling,
    tol: f64,
) -> Result<InjectivityReport> {
    let n = alpha.n_points();
    assert_eq!(n, beta.n_points(), "samplings must share a grid");
    let az: Vec<bool> = alpha.values().iter().map(|v| v.norm() < tol).collect();
    let bz: Vec<bool> = beta.values().iter().map(|v| v.norm() < tol).collect();
    let frac = |pred: &dyn Fn(usize) -> bool| {
        (0..n).filter(|&j| pred(j)).count() as f64 / n as f64
    };
    let ma = frac(&|j| az[j]);
    let mb = frac(&|j| bz[j]);
    if ma > 0.999 || mb > 0.999 {
        return Err(CircleopError::ZeroSymbol);
    }
    let mab = frac(&|j| az[j] && !bz[j]);
    let mba = frac(&|j| bz[j] && !az[j]);
    let mi = frac(&|j| az[j] && bz[j]);
    let null = |f: f64| f < 2.0 / n as f64;
    let positive = |f: f64| f >= 0.01;
    let verdict = if null(ma) || null(mb) {
        InjectivityVerdict::CaseOneNullZeroSet
    } else if positive(ma) && positive(mb) {
        if positive(mab) || positive(mba) {
            InjectivityVerdict::CaseSInjective
        } else if positive(mi) {
            InjectivityVerdict::CaseAdjointNotInjective
        } else if null(mi) {
            InjectivityVerdict::CaseAdjointInjective
        } else {
            InjectivityVerdict::Unclassified
        }
    } else {
        InjectivityVerdict::Unclassified
    };
    let witness = if verdict == InjectivityVerdict::CaseAdjointNotInjective {
        intersection_witness(alpha, beta, &az, &bz)?
    } else {
        None
    };
    Ok(InjectivityReport {
        verdict,
        measure_a: ma,
        measure_b: mb,
        measure_a_minus_b: mab,
        measure_b_minus_a: mba,
        measure_intersection: mi,
        witness,
    })
}

/// Builds the smoothed indicator of the longest common zero arc, band-limits
/// it, and reports the relative adjoint residual against the band-limited
/// symbols.
fn intersection_witness(
    alpha: &GridSampling,
    beta: &GridSampling,
    az: &[bool],
    bz: &[bool],
) -> Result<Option<(CoeffVector, f64)>> {
    let n = az.len();
    let both: Vec<bool> = az.iter().zip(bz).map(|(a, b)| *a && *b).collect();
    let Some((start, len)) = longest_true_run(&both) else {
        return Ok(None);
    };
    // Shrink the arc and smooth its edges so the bump sits strictly inside
    // the common zero set and band-limits cleanly.
    let margin = (len as f64 * 0.15).ceil() as usize;
    if len <= 2 * margin + 4 {
        return Ok(None);
    }
    let inner_len = len - 2 * margin;
    let edge = (inner_len / 4).max(2);
    let bump = GridSampling::from_values(
        (0..n)
            .map(|j| {
                let rel = (j + n - (start + margin)) % n;
                let v = if rel >= inner_len {
                    0.0
                } else if rel < edge {
                    smoothstep(rel as f64 / edge as f64)
                } else if rel >= inner_len - edge {
                    smoothstep((inner_len - rel) as f64 / edge as f64)
                } else {
                    1.0
                };
                Complex64::new(v, 0.0)
            })
            .collect(),
    );
    let degree = n / 4;
    let g = bump.to_symbol(degree)?;
    let a_sym = alpha.to_symbol(degree)?;
    let b_sym = beta.to_symbol(degree)?;
    let gv = CoeffVector::from_pairs(g.iter());
    let gnorm = gv.norm();
    if gnorm == 0.0 {
        return Ok(None);
    }
    let residual = apply_adjoint(&a_sym, &b_sym, &gv).norm() / gnorm;
    Ok(Some((gv, residual)))
}

fn smoothstep(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    // C^2 quintic smoothstep.
    t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
}

fn longest_true_run(mask: &[bool]) -> Option<(usize, usize)> {
    let n = mask.len();
    if mask.iter().all(|&b| b) {
        return Some((0, n));
    }
    let mut best: Option<(usize, usize)> = None;
    let mut j = 0usize;
    while j < 2 * n {
        if mask[j % n] {
            let start = j;
            let mut len = 0usize;
            while j < 2 * n && mask[j % n] && len < n {
                j += 1;
                len += 1;
            }
            if start < n && best.map(|(_, l)| len > l).unwrap_or(true) {
                best = Some((start, len));
            }
        } else {
            j += 1;
        }
    }
    best
}

/// Explicit inverse check for symbols invertible on each side: when `alpha`
/// (analytic) has no roots in the closed disk and `conj(beta)` likewise, the
/// inverse is `S` of the reciprocal symbols; returns the interior deviation
/// of `S^{-1} S` from the identity, with reciprocals expanded to degree `m`.
pub fn explicit_inverse_defect(alpha: &Symbol, beta: &Symbol, m: i64) -> Result<f64> {
    let alpha_inv = invert_analytic(alpha, m as usize)?;
    let beta_inv = invert_analytic(&beta.conj(), m as usize)?.conj();
    let first = build_matrix_window(alpha, beta, (-m, m), TruncationMode::Exact)?;
    let second = build_matrix_window(&alpha_inv, &beta_inv, first.out_window(), TruncationMode::Exact)?;
    let prod = second.compose(&first);
    let r = m / 2;
    let mut worst: f64 = 0.0;
    for mm in -r..=r {
        for nn in -r..=r {
            let want = if mm == nn { Complex64::ONE } else { Complex64::ZERO };
            worst = worst.max((prod.entry(mm, nn) - want).norm());
        }
    }
    Ok(worst)
}

/// Power-series reciprocal of an analytic polynomial with nonzero constant
/// term, to the given degree.
fn invert_analytic(s: &Symbol, degree: usize) -> Result<Symbol> {
    if !s.is_analytic() {
        return Err(CircleopError::NotAnalytic);
    }
    let c0 = s.coeff(0);
    if c0.norm() == 0.0 {
        return Err(CircleopError::ZeroSymbol);
    }
    let mut inv = vec![Complex64::ZERO; degree + 1];
    inv[0] = Complex64::ONE / c0;
    for k in 1..=degree {
        let mut acc = Complex64::ZERO;
        for j in 1..=k.min(s.hi() as usize) {
            acc += s.coeff(j as i64) * inv[k - j];
        }
        inv[k] = -acc / c0;
    }
    Symbol::new(inv.into_iter().enumerate().map(|(k, c)| (k as i64, c)))
}
