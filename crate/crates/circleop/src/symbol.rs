//! Multiplier symbols on the unit circle, stored as finite Laurent series.
//!
//! A [`Symbol`] is a finite map `mode -> coefficient`; it evaluates exactly at
//! any angle, so every sampled quantity (sup norms, winding numbers, range and
//! zero-set tests) is computed from exact values up to roundoff. Genuinely
//! non-polynomial symbols enter through [`GridSampling::to_symbol`], which
//! band-limits them by a discrete Fourier transform.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{CircleopError, Result};

/// Coefficientwise equality tolerance for symbols.
pub const TAU_EQ: f64 = 1e-10;
/// Guard distance below which a winding number is refused.
pub const DELTA_WIND: f64 = 1e-6;

/// A finite Laurent series `sum_n c_n z^n` acting on the circle by multiplication.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Symbol {
    coeffs: BTreeMap<i64, Complex64>,
}

impl Symbol {
    /// Builds a symbol from `(mode, coefficient)` pairs. Zero coefficients are
    /// dropped, so the stored support is exact. Duplicate modes are rejected.
    pub fn new<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut coeffs = BTreeMap::new();
        for (n, c) in pairs {
            if coeffs.insert(n, c).is_some() {
                return Err(CircleopError::DuplicateMode(n));
            }
        }
        coeffs.retain(|_, c: &mut Complex64| c.norm() > 0.0);
        Ok(Symbol { coeffs })
    }

    pub fn zero() -> Self {
        Symbol::default()
    }

    pub fn constant(c: impl Into<Complex64>) -> Self {
        Symbol::monomial(0, c)
    }

    pub fn one() -> Self {
        Symbol::constant(1.0)
    }

    /// The coordinate function `z`.
    pub fn z() -> Self {
        Symbol::monomial(1, 1.0)
    }

    /// The conjugate coordinate `z^{-1}`.
    pub fn zbar() -> Self {
        Symbol::monomial(-1, 1.0)
    }

    pub fn monomial(n: i64, c: impl Into<Complex64>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if c.norm() > 0.0 {
            coeffs.insert(n, c);
        }
        Symbol { coeffs }
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        self.coeffs.get(&n).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&n, &c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest mode in the support (0 for the zero symbol).
    pub fn lo(&self) -> i64 {
        self.coeffs.keys().next().copied().unwrap_or(0)
    }

    /// Largest mode in the support (0 for the zero symbol).
    pub fn hi(&self) -> i64 {
        self.coeffs.keys().next_back().copied().unwrap_or(0)
    }

    /// `max(|lo|, |hi|)`, the width needed to hold the symbol.
    pub fn support_radius(&self) -> i64 {
        self.lo().abs().max(self.hi().abs())
    }

    pub fn approx_eq(&self, other: &Symbol, tol: f64) -> bool {
        let modes: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .collect();
        modes
            .into_iter()
            .all(|n| (self.coeff(n) - other.coeff(n)).norm() <= tol)
    }

    /// All negative-mode coefficients vanish (within [`TAU_EQ`]).
    pub fn is_analytic(&self) -> bool {
        self.coeffs.iter().all(|(&n, c)| n >= 0 || c.norm() <= TAU_EQ)
    }

    /// All positive-mode coefficients vanish (within [`TAU_EQ`]).
    pub fn is_coanalytic(&self) -> bool {
        self.coeffs.iter().all(|(&n, c)| n <= 0 || c.norm() <= TAU_EQ)
    }

    /// Pointwise complex conjugate: mode `n` maps to `conj(c_{-n})`.
    pub fn conj(&self) -> Symbol {
        Symbol {
            coeffs: self.coeffs.iter().map(|(&n, c)| (-n, c.conj())).collect(),
        }
    }

    pub fn add(&self, other: &Symbol) -> Symbol {
        let mut coeffs = self.coeffs.clone();
        for (&n, &c) in &other.coeffs {
            *coeffs.entry(n).or_insert(Complex64::ZERO) += c;
        }
        coeffs.retain(|_, c| c.norm() > 0.0);
        Symbol { coeffs }
    }

    pub fn sub(&self, other: &Symbol) -> Symbol {
        self.add(&other.scale(-Complex64::ONE))
    }

    pub fn scale(&self, factor: Complex64) -> Symbol {
        let mut coeffs: BTreeMap<i64, Complex64> =
            self.coeffs.iter().map(|(&n, &c)| (n, c * factor)).collect();
        coeffs.retain(|_, c| c.norm() > 0.0);
        Symbol { coeffs }
    }

    /// Pointwise product, i.e. coefficient convolution.
    pub fn mul(&self, other: &Symbol) -> Symbol {
        let mut coeffs = BTreeMap::new();
        for (&n, &a) in &self.coeffs {
            for (&m, &b) in &other.coeffs {
                *coeffs.entry(n + m).or_insert(Complex64::ZERO) += a * b;
            }
        }
        coeffs.retain(|_, c: &mut Complex64| c.norm() > 0.0);
        Symbol { coeffs }
    }

    /// Drops coefficients of modulus at most `tol`.
    pub fn trimmed(&self, tol: f64) -> Symbol {
        let mut coeffs = self.coeffs.clone();
        coeffs.retain(|_, c| c.norm() > tol);
        Symbol { coeffs }
    }

    /// Keeps only modes `n >= 0`.
    pub fn analytic_part(&self) -> Symbol {
        Symbol {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&n, _)| n >= 0)
                .map(|(&n, &c)| (n, c))
                .collect(),
        }
    }

    /// Keeps only modes `|n| <= degree`.
    pub fn truncated(&self, degree: i64) -> Symbol {
        Symbol {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&n, _)| n.abs() <= degree)
                .map(|(&n, &c)| (n, c))
                .collect(),
        }
    }

    /// Exact evaluation at `e^{i theta}`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&n, &c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    fn check_grid(&self, n: usize) -> Result<()> {
        let radius = self.support_radius();
        if n < 16 || !n.is_power_of_two() || (n as i64) <= 2 * radius {
            return Err(CircleopError::GridTooSmall { n, radius });
        }
        Ok(())
    }

    /// Exact samples at the `n` equispaced angles `2 pi j / n`.
    pub fn sample(&self, n: usize) -> Result<GridSampling> {
        self.check_grid(n)?;
        Ok(self.sample_unchecked(n))
    }

    pub(crate) fn sample_unchecked(&self, n: usize) -> GridSampling {
        let values = (0..n)
            .map(|j| self.eval(2.0 * PI * j as f64 / n as f64))
            .collect();
        GridSampling { values }
    }

    /// Grid maximum of `|s|`; exact for constants and nondecreasing under
    /// refinement since doubling the grid keeps every old node.
    pub fn sup_norm(&self, n: usize) -> Result<f64> {
        Ok(self.sample(n)?.sup_norm())
    }

    /// Winding number of the sampled curve around `a`.
    pub fn winding_number(&self, a: Complex64, n: usize) -> Result<i64> {
        self.sample(n)?.winding_number(a)
    }

    /// Whether some grid value lies within `eps` of `lambda`.
    pub fn in_essential_range(&self, lambda: Complex64, eps: f64, n: usize) -> Result<bool> {
        Ok(self.sample(n)?.in_essential_range(lambda, eps))
    }

    /// Fraction of grid points where `|s| < tol`.
    pub fn zero_set_measure(&self, tol: f64, n: usize) -> Result<f64> {
        Ok(self.sample(n)?.zero_set_measure(tol))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "zero");
        }
        let mut first = true;
        for (&n, &c) in &self.coeffs {
            if !first {
                write!(f, ";")?;
            }
            first = false;
            if c.im == 0.0 {
                write!(f, "{}:{}", n, c.re)?;
            } else if c.im < 0.0 {
                write!(f, "{}:{}{}i", n, c.re, c.im)?;
            } else {
                write!(f, "{}:{}+{}i", n, c.re, c.im)?;
            }
        }
        Ok(())
    }
}

/// Parses the symbol mini-language: semicolon-separated `mode:re[+im i]`
/// terms, e.g. `0:2;1:1` for `2+z`, plus the reserved names `one`, `z`,
/// `zbar`, `zero`.
impl FromStr for Symbol {
    type Err = CircleopError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "one" => return Ok(Symbol::one()),
            "z" => return Ok(Symbol::z()),
            "zbar" => return Ok(Symbol::zbar()),
            "zero" => return Ok(Symbol::zero()),
            _ => {}
        }
        let mut pairs = Vec::new();
        let mut pos = 0usize;
        for term in s.split(';') {
            let term_start = pos;
            pos += term.len() + 1;
            let t = term.trim();
            if t.is_empty() {
                return Err(CircleopError::Parse {
                    pos: term_start,
                    msg: "empty term".into(),
                });
            }
            let colon = t.find(':').ok_or_else(|| CircleopError::Parse {
                pos: term_start,
                msg: format!("term `{t}` has no `mode:value` separator"),
            })?;
            let mode: i64 = t[..colon].trim().parse().map_err(|_| CircleopError::Parse {
                pos: term_start,
                msg: format!("bad mode `{}`", &t[..colon]),
            })?;
            let value = parse_complex(t[colon + 1..].trim()).ok_or_else(|| CircleopError::Parse {
                pos: term_start + colon + 1,
                msg: format!("bad complex literal `{}`", &t[colon + 1..]),
            })?;
            pairs.push((mode, value));
        }
        Symbol::new(pairs)
    }
}

/// Parses a complex literal: `re`, `im i`, or `re+im i` (also `re-im i`);
/// `i` alone means `1i`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some(body) = s.strip_suffix('i') {
        // Split into real part and imaginary coefficient at the last +/- that
        // is not a leading sign or part of an exponent.
        let b = body.trim_end();
        let bytes = b.as_bytes();
        let mut split = None;
        for k in (1..bytes.len()).rev() {
            let c = bytes[k] as char;
            if (c == '+' || c == '-') && !matches!(bytes[k - 1] as char, 'e' | 'E') {
                split = Some(k);
                break;
            }
        }
        return match split {
            Some(k) => {
                let re: f64 = b[..k].trim().parse().ok()?;
                let im_str = b[k..].trim();
                let im: f64 = match im_str {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_str.parse().ok()?,
                };
                Some(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if b.trim().is_empty() { 1.0 } else { b.trim().parse().ok()? };
                Some(Complex64::new(0.0, im))
            }
        };
    }
    s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0))
}

/// Samples of a circle function at `n` equispaced angles.
#[derive(Clone, Debug)]
pub struct GridSampling {
    values: Vec<Complex64>,
}

impl GridSampling {
    /// Samples an arbitrary function at the `n` equispaced angles.
    pub fn from_fn(n: usize, mut f: impl FnMut(f64) -> Complex64) -> Self {
        let values = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).collect();
        GridSampling { values }
    }

    pub fn from_values(values: Vec<Complex64>) -> Self {
        GridSampling { values }
    }

    pub fn n_points(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Band-limits the samples to modes `|n| <= degree` by discrete Fourier
    /// transform. Rejects degrees at or beyond the Nyquist mode.
    pub fn to_symbol(&self, degree: usize) -> Result<Symbol> {
        let n = self.values.len();
        if 2 * degree >= n {
            return Err(CircleopError::AliasingDegree { degree, n });
        }
        let mut buf = self.values.clone();
        FftPlanner::new().plan_fft_forward(n).process(&mut buf);
        let scale = 1.0 / n as f64;
        let floor = 1e-13 * (1.0 + self.sup_norm());
        let mut pairs = Vec::with_capacity(2 * degree + 1);
        for m in -(degree as i64)..=(degree as i64) {
            let idx = m.rem_euclid(n as i64) as usize;
            let c = buf[idx] * scale;
            if c.norm() > floor {
                pairs.push((m, c));
            }
        }
        Symbol::new(pairs)
    }

    /// Winding number around `a` by accumulating phase increments; demands a
    /// guard distance from the curve and increments below `pi/2`.
    pub fn winding_number(&self, a: Complex64) -> Result<i64> {
        let min_dist = self
            .values
            .iter()
            .map(|v| (v - a).norm())
            .fold(f64::INFINITY, f64::min);
        if min_dist <= DELTA_WIND {
            return Err(CircleopError::CurveTouchesPoint { guard: DELTA_WIND });
        }
        let n = self.values.len();
        let mut total = 0.0;
        for j in 0..n {
            let w0 = self.values[j] - a;
            let w1 = self.values[(j + 1) % n] - a;
            let inc = (w1 / w0).arg();
            if inc.abs() >= PI / 2.0 {
                return Err(CircleopError::GridTooCoarse {
                    index: j,
                    increment: inc,
                });
            }
            total += inc;
        }
        Ok((total / (2.0 * PI)).round() as i64)
    }

    pub fn in_essential_range(&self, lambda: Complex64, eps: f64) -> bool {
        self.values.iter().any(|v| (v - lambda).norm() < eps)
    }

    /// Shortest distance from `lambda` to the sampled curve.
    pub fn distance_to(&self, lambda: Complex64) -> f64 {
        self.values
            .iter()
            .map(|v| (v - lambda).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn zero_set_measure(&self, tol: f64) -> f64 {
        let hits = self.values.iter().filter(|v| v.norm() < tol).count();
        hits as f64 / self.values.len() as f64
    }
}
