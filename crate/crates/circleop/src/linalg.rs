//! Dense complex linear algebra kernels.
//!
//! Everything here is sized for truncation windows of a few hundred modes:
//! row-major storage, Householder tridiagonalization plus implicit-shift QL
//! for Hermitian eigenproblems, partially pivoted LU with inverse iteration
//! for smallest singular values, and a shifted Hessenberg QR iteration for
//! companion-matrix polynomial roots.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = CMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self[(i, k)];
                if aik == Complex64::ZERO {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += aik * b;
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matvec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, x.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x)
                    .map(|(a, b)| a * b)
                    .sum::<Complex64>()
            })
            .collect()
    }

    /// `A^H x`.
    pub fn matvec_adjoint(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.rows, x.len());
        let mut out = vec![Complex64::ZERO; self.cols];
        for (i, &xi) in x.iter().enumerate() {
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                *o += a.conj() * xi;
            }
        }
        out
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> CMat {
        CMat::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn abs_max(&self) -> f64 {
        self.data.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// `A^H A`, Hermitian of order `cols`.
    pub fn gram(&self) -> CMat {
        let n = self.cols;
        let mut g = CMat::zeros(n, n);
        for k in 0..self.rows {
            let row = self.row(k);
            for i in 0..n {
                let ri = row[i].conj();
                if ri == Complex64::ZERO {
                    continue;
                }
                let grow = &mut g.data[i * n..(i + 1) * n];
                for (gv, rv) in grow[i..].iter_mut().zip(&row[i..]) {
                    *gv += ri * rv;
                }
            }
        }
        // Fill the strictly lower triangle from the upper one.
        for i in 0..n {
            for j in 0..i {
                g[(i, j)] = g[(j, i)].conj();
            }
        }
        g
    }
}

impl std::ops::Index<(usize, usize)> for CMat {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn vec_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn seeded_unit_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let nrm = vec_norm(&v).max(f64::MIN_POSITIVE);
    for c in &mut v {
        *c /= nrm;
    }
    v
}

// ---------------------------------------------------------------------------
// Hermitian eigendecomposition
// ---------------------------------------------------------------------------

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues, and the
/// unitary of eigenvectors (as columns) when requested.
pub fn hermitian_eigen(a: &CMat, want_vectors: bool) -> (Vec<f64>, Option<CMat>) {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return (Vec::new(), want_vectors.then(|| CMat::zeros(0, 0)));
    }
    let mut work = a.clone();
    let mut q = want_vectors.then(|| CMat::identity(n));

    // Householder reduction to Hermitian tridiagonal form.
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x: Vec<Complex64> = (0..m).map(|i| work[(k + 1 + i, k)]).collect();
        let sigma = vec_norm(&x);
        if sigma <= f64::MIN_POSITIVE {
            continue;
        }
        let alpha = x[0];
        let phase = if alpha.norm() > 0.0 {
            alpha / alpha.norm()
        } else {
            Complex64::ONE
        };
        let mut v = x;
        v[0] += phase * sigma;
        let vn = vec_norm(&v);
        if vn <= f64::MIN_POSITIVE {
            continue;
        }
        for c in &mut v {
            *c /= vn;
        }
        // Two-sided update of the trailing block: B <- (I-2ww^H) B (I-2ww^H).
        let mut u = vec![Complex64::ZERO; m];
        for i in 0..m {
            let mut s = Complex64::ZERO;
            for j in 0..m {
                s += work[(k + 1 + i, k + 1 + j)] * v[j];
            }
            u[i] = s;
        }
        let gamma: Complex64 = v.iter().zip(&u).map(|(w, uu)| w.conj() * uu).sum();
        for i in 0..m {
            for j in 0..m {
                let corr = 2.0 * (v[i] * u[j].conj() + u[i] * v[j].conj())
                    - 4.0 * gamma * v[i] * v[j].conj();
                work[(k + 1 + i, k + 1 + j)] -= corr;
            }
        }
        let new_off = -phase * sigma;
        work[(k + 1, k)] = new_off;
        work[(k, k + 1)] = new_off.conj();
        for i in 2..=m {
            work[(k + i, k)] = Complex64::ZERO;
            work[(k, k + i)] = Complex64::ZERO;
        }
        if let Some(q) = q.as_mut() {
            // Q <- Q (I - 2 w w^H) on columns k+1..n.
            for r in 0..n {
                let mut dot = Complex64::ZERO;
                for j in 0..m {
                    dot += q[(r, k + 1 + j)] * v[j];
                }
                for j in 0..m {
                    let t = 2.0 * dot * v[j].conj();
                    q[(r, k + 1 + j)] -= t;
                }
            }
        }
    }

    // Rotate off-diagonal phases onto the basis so the tridiagonal is real.
    let mut d: Vec<f64> = (0..n).map(|i| work[(i, i)].re).collect();
    let mut e = vec![0.0f64; n];
    let mut dphase = Complex64::ONE;
    let mut phases = vec![Complex64::ONE; n];
    for k in 0..n - 1 {
        let off = work[(k + 1, k)];
        let m = off.norm();
        e[k] = m;
        dphase = if m > 0.0 {
            off * dphase / m
        } else {
            dphase
        };
        phases[k + 1] = dphase;
    }
    if let Some(q) = q.as_mut() {
        for r in 0..n {
            for (j, ph) in phases.iter().enumerate() {
                let t = q[(r, j)] * ph;
                q[(r, j)] = t;
            }
        }
    }

    tridiag_ql(&mut d, &mut e, q.as_mut());

    // Sort ascending, permuting eigenvector columns alongside.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let qsorted = q.map(|q| CMat::from_fn(n, n, |r, c| q[(r, order[c])]));
    (sorted, qsorted)
}

/// Implicit-shift QL iteration on a real symmetric tridiagonal matrix,
/// rotating the complex column basis `q` along.
fn tridiag_ql(d: &mut [f64], e: &mut [f64], mut q: Option<&mut CMat>) {
    let n = d.len();
    if n == 0 {
        return;
    }
    let eps = f64::EPSILON;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= eps * dd + f64::MIN_POSITIVE {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 80, "tridiagonal QL failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(q) = q.as_mut() {
                    for k in 0..q.rows() {
                        f = q[(k, i + 1)].re;
                        let fi = q[(k, i + 1)].im;
                        let qi = q[(k, i)];
                        q[(k, i + 1)] = Complex64::new(s * qi.re + c * f, s * qi.im + c * fi);
                        q[(k, i)] = Complex64::new(c * qi.re - s * f, c * qi.im - s * fi);
                    }
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Singular values
// ---------------------------------------------------------------------------

/// All singular values, descending, computed from the Gram matrix of the
/// narrower side.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let g = if a.rows() >= a.cols() {
        a.gram()
    } else {
        a.adjoint().gram()
    };
    let (mut ev, _) = hermitian_eigen(&g, false);
    ev.reverse();
    ev.into_iter().map(|l| l.max(0.0).sqrt()).collect()
}

pub fn sigma_max(a: &CMat) -> f64 {
    if a.rows() == 0 || a.cols() == 0 {
        return 0.0;
    }
    singular_values(a)[0]
}

/// Right singular vectors whose refined singular value is below `thresh`,
/// sorted by singular value. Candidates come from the Gram eigensolve; each
/// candidate's value is refined as `|A v|`, which restores full precision
/// near zero.
pub fn small_singular_vectors(a: &CMat, thresh: f64) -> Vec<(f64, Vec<Complex64>)> {
    if a.cols() == 0 {
        return Vec::new();
    }
    let g = a.gram();
    let (ev, vecs) = hermitian_eigen(&g, true);
    let vecs = vecs.unwrap();
    let mut out = Vec::new();
    for (i, &lambda) in ev.iter().enumerate() {
        let sigma_est = lambda.max(0.0).sqrt();
        if sigma_est >= 10.0 * thresh + 1e-7 {
            continue;
        }
        let v: Vec<Complex64> = (0..a.cols()).map(|r| vecs[(r, i)]).collect();
        let sigma = vec_norm(&a.matvec(&v));
        if sigma < thresh {
            out.push((sigma, v));
        }
    }
    out.sort_by(|x, y| x.0.total_cmp(&y.0));
    out
}

/// Best rank-`r` approximation, from the Gram decomposition.
pub fn low_rank_approx(a: &CMat, rank: usize) -> CMat {
    let g = a.gram();
    let (ev, vecs) = hermitian_eigen(&g, true);
    let vecs = vecs.unwrap();
    let n = a.cols();
    let mut out = CMat::zeros(a.rows(), n);
    for t in 0..rank.min(n) {
        let idx = n - 1 - t;
        let sigma = ev[idx].max(0.0).sqrt();
        if sigma <= 0.0 {
            break;
        }
        let v: Vec<Complex64> = (0..n).map(|r| vecs[(r, idx)]).collect();
        let u = a.matvec(&v); // = sigma * left vector
        for i in 0..a.rows() {
            for j in 0..n {
                out[(i, j)] += u[i] * v[j].conj();
            }
        }
    }
    out
}

/// Residual of the least-squares problem `min_x |A x - b|`, via a
/// pseudoinverse built from the Gram eigendecomposition.
pub fn least_squares_residual(a: &CMat, b: &[Complex64]) -> f64 {
    let g = a.gram();
    let (ev, vecs) = hermitian_eigen(&g, true);
    let vecs = vecs.unwrap();
    let n = a.cols();
    let atb = a.matvec_adjoint(b);
    let cutoff = ev.last().copied().unwrap_or(0.0).max(0.0) * 1e-24;
    let mut x = vec![Complex64::ZERO; n];
    for i in 0..n {
        if ev[i] <= cutoff {
            continue;
        }
        let v: Vec<Complex64> = (0..n).map(|r| vecs[(r, i)]).collect();
        let coef: Complex64 = v.iter().zip(&atb).map(|(vi, bi)| vi.conj() * bi).sum();
        for (xj, vj) in x.iter_mut().zip(&v) {
            *xj += coef / ev[i] * vj;
        }
    }
    let ax = a.matvec(&x);
    let r: Vec<Complex64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    vec_norm(&r)
}

// ---------------------------------------------------------------------------
// LU with partial pivoting
// ---------------------------------------------------------------------------

pub struct Lu {
    n: usize,
    data: Vec<Complex64>,
    piv: Vec<usize>,
    pub min_pivot: f64,
}

pub fn lu_decompose(a: &CMat) -> Lu {
    let n = a.rows();
    assert_eq!(n, a.cols());
    let mut data = a.data.clone();
    let mut piv = vec![0usize; n];
    let mut min_pivot = f64::INFINITY;
    for k in 0..n {
        let mut best = k;
        let mut best_val = data[k * n + k].norm();
        for i in k + 1..n {
            let v = data[i * n + k].norm();
            if v > best_val {
                best = i;
                best_val = v;
            }
        }
        piv[k] = best;
        if best != k {
            for j in 0..n {
                data.swap(k * n + j, best * n + j);
            }
        }
        let pivot = data[k * n + k];
        min_pivot = min_pivot.min(pivot.norm());
        if pivot.norm() <= f64::MIN_POSITIVE {
            continue;
        }
        let (top, bottom) = data.split_at_mut((k + 1) * n);
        let row_k = &top[k * n + k + 1..k * n + n];
        for row in bottom.chunks_exact_mut(n) {
            let factor = row[k] / pivot;
            row[k] = factor;
            if factor != Complex64::ZERO {
                for (a, b) in row[k + 1..].iter_mut().zip(row_k) {
                    *a -= factor * b;
                }
            }
        }
    }
    if n == 0 {
        min_pivot = 0.0;
    }
    Lu {
        n,
        data,
        piv,
        min_pivot,
    }
}

impl Lu {
    /// Solves `A x = b`.
    pub fn solve(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
        }
        for i in 0..n {
            let row = &self.data[i * n..i * n + i];
            let s: Complex64 = row.iter().zip(&x).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.data[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / self.data[i * n + i];
        }
        x
    }

    /// Solves `A^H x = b` using the same factorization: `U^H` is solved
    /// forward, `L^H` backward, and the updates run along rows of the packed
    /// factor (columns of the adjoint).
    pub fn solve_adjoint(&self, b: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let mut y = b.to_vec();
        for i in 0..n {
            let yi = y[i] / self.data[i * n + i].conj();
            y[i] = yi;
            if yi != Complex64::ZERO {
                let row = &self.data[i * n + i + 1..(i + 1) * n];
                for (v, u) in y[i + 1..].iter_mut().zip(row) {
                    *v -= u.conj() * yi;
                }
            }
        }
        for i in (1..n).rev() {
            let yi = y[i];
            if yi != Complex64::ZERO {
                let row = &self.data[i * n..i * n + i];
                for (v, l) in y[..i].iter_mut().zip(row) {
                    *v -= l.conj() * yi;
                }
            }
        }
        // Undo the row permutation.
        for k in (0..n).rev() {
            y.swap(k, self.piv[k]);
        }
        y
    }
}

/// Smallest singular value of a square matrix: inverse iteration on
/// `(A^H A)^{-1}` through an LU factorization, with a Gram-eigensolve
/// fallback when the factorization is near-singular.
pub fn min_singular_value(a: &CMat) -> f64 {
    let n = a.rows();
    assert_eq!(n, a.cols());
    if n == 0 {
        return 0.0;
    }
    let scale = a.abs_max();
    if scale == 0.0 {
        return 0.0;
    }
    let lu = lu_decompose(a);
    if lu.min_pivot <= 1e3 * f64::EPSILON * scale {
        let sv = singular_values(a);
        return sv[sv.len() - 1];
    }
    let mut v = seeded_unit_vector(n, 0x5eed_0001 ^ n as u64);
    let mut prev = f64::INFINITY;
    for _ in 0..200 {
        let w = lu.solve_adjoint(&v);
        let u = lu.solve(&w);
        let nu = vec_norm(&u);
        if !nu.is_finite() || nu > 1e280 {
            return 0.0;
        }
        if nu <= f64::MIN_POSITIVE {
            break;
        }
        let sigma = (1.0 / nu).sqrt();
        for c in u.iter().zip(&mut v) {
            *c.1 = c.0 / nu;
        }
        if (sigma - prev).abs() <= 1e-9 * sigma.max(1e-300) {
            prev = sigma;
            break;
        }
        prev = sigma;
    }
    let _ = prev;
    vec_norm(&a.matvec(&v))
}

// ---------------------------------------------------------------------------
// Polynomial roots via the companion matrix
// ---------------------------------------------------------------------------

/// Roots of `sum_k coeffs[k] z^k` (with multiplicity). The leading
/// coefficient must be nonzero; trailing zero coefficients yield roots at the
/// origin.
pub fn polynomial_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len().saturating_sub(1);
    assert!(
        coeffs.last().map(|c| c.norm() > 0.0).unwrap_or(false),
        "leading coefficient must be nonzero"
    );
    let mut roots = Vec::with_capacity(d);
    // Strip roots at the origin.
    let mut start = 0;
    while start < d && coeffs[start].norm() == 0.0 {
        roots.push(Complex64::ZERO);
        start += 1;
    }
    let monic: Vec<Complex64> = coeffs[start..d]
        .iter()
        .map(|c| c / coeffs[d])
        .collect();
    let m = monic.len();
    if m == 0 {
        return roots;
    }
    let mut h = CMat::zeros(m, m);
    for i in 0..m {
        h[(i, m - 1)] = -monic[i];
    }
    for i in 1..m {
        h[(i, i - 1)] = Complex64::ONE;
    }
    balance(&mut h);
    roots.extend(hessenberg_eigenvalues(&mut h));
    roots
}

/// Parlett-Reinsch balancing by powers of two.
fn balance(a: &mut CMat) {
    let n = a.rows();
    let radix = 2.0f64;
    loop {
        let mut converged = true;
        for i in 0..n {
            let mut c: f64 = (0..n).filter(|&j| j != i).map(|j| a[(j, i)].norm()).sum();
            let mut r: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].norm()).sum();
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let mut f = 1.0f64;
            let s = c + r;
            while c < r / radix {
                c *= radix;
                r /= radix;
                f *= radix;
            }
            while c >= r * radix {
                c /= radix;
                r *= radix;
                f /= radix;
            }
            if (c + r) < 0.95 * s && f != 1.0 {
                converged = false;
                for j in 0..n {
                    let t = a[(i, j)] / f;
                    a[(i, j)] = t;
                }
                for j in 0..n {
                    let t = a[(j, i)] * f;
                    a[(j, i)] = t;
                }
            }
        }
        if converged {
            break;
        }
    }
}

fn eig2(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> (Complex64, Complex64) {
    let tr = (a + d) * 0.5;
    let disc = ((a - d) * 0.5).powu(2) + b * c;
    let sq = disc.sqrt();
    (tr + sq, tr - sq)
}

/// Eigenvalues of an upper Hessenberg matrix by shifted QR with Givens
/// rotations and deflation.
fn hessenberg_eigenvalues(h: &mut CMat) -> Vec<Complex64> {
    let n = h.rows();
    let mut eigs = Vec::with_capacity(n);
    if n == 0 {
        return eigs;
    }
    let mut hi = n - 1;
    let mut stalled = 0usize;
    let mut total_iters = 0usize;
    let max_total = 200 * n + 200;
    loop {
        // Zero out negligible subdiagonals.
        let mut lo = hi;
        while lo > 0 {
            let s = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            let s = if s == 0.0 { 1.0 } else { s };
            if h[(lo, lo - 1)].norm() <= f64::EPSILON * s {
                h[(lo, lo - 1)] = Complex64::ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eigs.push(h[(hi, hi)]);
            if hi == 0 {
                break;
            }
            hi -= 1;
            stalled = 0;
            continue;
        }
        if lo + 1 == hi {
            let (l1, l2) = eig2(h[(lo, lo)], h[(lo, hi)], h[(hi, lo)], h[(hi, hi)]);
            eigs.push(l1);
            eigs.push(l2);
            if lo == 0 {
                break;
            }
            hi = lo - 1;
            stalled = 0;
            continue;
        }
        total_iters += 1;
        stalled += 1;
        assert!(total_iters <= max_total, "Hessenberg QR failed to converge");
        let mu = if stalled.is_multiple_of(12) {
            h[(hi, hi)] + Complex64::new(1.5 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            let (l1, l2) = eig2(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            );
            if (l1 - h[(hi, hi)]).norm() <= (l2 - h[(hi, hi)]).norm() {
                l1
            } else {
                l2
            }
        };
        for i in lo..=hi {
            let t = h[(i, i)] - mu;
            h[(i, i)] = t;
        }
        // QR by Givens rotations on the active block, then RQ.
        let mut rot = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let a = h[(i, i)];
            let b = h[(i + 1, i)];
            let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
            let (c, s) = if r <= f64::MIN_POSITIVE {
                (1.0, Complex64::ZERO)
            } else if a.norm() <= f64::MIN_POSITIVE {
                (0.0, -b.conj() / r)
            } else {
                let ph = a / a.norm();
                (a.norm() / r, -ph * b.conj() / r)
            };
            rot.push((c, s));
            for j in i..=hi {
                let t1 = h[(i, j)];
                let t2 = h[(i + 1, j)];
                h[(i, j)] = c * t1 - s * t2;
                h[(i + 1, j)] = s.conj() * t1 + c * t2;
            }
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let i = lo + idx;
            for r in lo..=(i + 1).min(hi) {
                let t1 = h[(r, i)];
                let t2 = h[(r, i + 1)];
                h[(r, i)] = c * t1 - s.conj() * t2;
                h[(r, i + 1)] = s * t1 + c * t2;
            }
        }
        for i in lo..=hi {
            let t = h[(i, i)] + mu;
            h[(i, i)] = t;
        }
    }
    eigs
}
