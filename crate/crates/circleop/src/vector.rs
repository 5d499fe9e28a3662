//! Truncated Fourier-coefficient vectors and the Riesz projections.

use num_complex::Complex64;
use rand::Rng;

use crate::symbol::Symbol;

/// An element of `L^2` held on a finite mode window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffVector {
    lo: i64,
    entries: Vec<Complex64>,
}

impl CoeffVector {
    pub fn zeros(lo: i64, hi: i64) -> Self {
        assert!(hi >= lo, "empty window");
        CoeffVector {
            lo,
            entries: vec![Complex64::ZERO; (hi - lo + 1) as usize],
        }
    }

    /// The single basis vector `z^n`.
    pub fn basis(n: i64) -> Self {
        CoeffVector {
            lo: n,
            entries: vec![Complex64::ONE],
        }
    }

    pub fn from_pairs<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let pairs: Vec<(i64, Complex64)> = pairs.into_iter().collect();
        if pairs.is_empty() {
            return CoeffVector::zeros(0, 0);
        }
        let lo = pairs.iter().map(|p| p.0).min().unwrap();
        let hi = pairs.iter().map(|p| p.0).max().unwrap();
        let mut v = CoeffVector::zeros(lo, hi);
        for (n, c) in pairs {
            *v.get_mut(n) += c;
        }
        v
    }

    pub fn random(lo: i64, hi: i64, rng: &mut impl Rng) -> Self {
        let entries = (lo..=hi)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        CoeffVector { lo, entries }
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.lo + self.entries.len() as i64 - 1)
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.entries.len() as i64 - 1
    }

    pub fn get(&self, n: i64) -> Complex64 {
        if n < self.lo || n > self.hi() {
            Complex64::ZERO
        } else {
            self.entries[(n - self.lo) as usize]
        }
    }

    pub fn get_mut(&mut self, n: i64) -> &mut Complex64 {
        assert!(n >= self.lo && n <= self.hi(), "mode {n} outside window");
        let idx = (n - self.lo) as usize;
        &mut self.entries[idx]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.lo + i as i64, c))
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &CoeffVector) -> Complex64 {
        let lo = self.lo.max(other.lo);
        let hi = self.hi().min(other.hi());
        (lo..=hi).map(|n| self.get(n) * other.get(n).conj()).sum()
    }

    pub fn scale(&self, s: Complex64) -> CoeffVector {
        CoeffVector {
            lo: self.lo,
            entries: self.entries.iter().map(|c| c * s).collect(),
        }
    }

    /// Sum on the union window.
    pub fn add(&self, other: &CoeffVector) -> CoeffVector {
        let lo = self.lo.min(other.lo);
        let hi = self.hi().max(other.hi());
        let mut out = CoeffVector::zeros(lo, hi);
        for (n, c) in self.iter() {
            *out.get_mut(n) += c;
        }
        for (n, c) in other.iter() {
            *out.get_mut(n) += c;
        }
        out
    }

    pub fn sub(&self, other: &CoeffVector) -> CoeffVector {
        self.add(&other.scale(-Complex64::ONE))
    }

    /// Copy clipped to `[lo, hi]`.
    pub fn restrict(&self, lo: i64, hi: i64) -> CoeffVector {
        let mut out = CoeffVector::zeros(lo, hi);
        for n in lo.max(self.lo)..=hi.min(self.hi()) {
            *out.get_mut(n) = self.get(n);
        }
        out
    }

    pub fn normalized(&self) -> CoeffVector {
        let n = self.norm();
        if n == 0.0 {
            self.clone()
        } else {
            self.scale(Complex64::new(1.0 / n, 0.0))
        }
    }

    /// Riesz projection onto the analytic side: zeroes modes `n < 0`.
    pub fn riesz_p(&self) -> CoeffVector {
        let mut out = self.clone();
        for (i, c) in out.entries.iter_mut().enumerate() {
            if out.lo + (i as i64) < 0 {
                *c = Complex64::ZERO;
            }
        }
        out
    }

    /// Riesz projection onto the co-analytic side: zeroes modes `n >= 0`.
    pub fn riesz_q(&self) -> CoeffVector {
        let mut out = self.clone();
        for (i, c) in out.entries.iter_mut().enumerate() {
            if out.lo + (i as i64) >= 0 {
                *c = Complex64::ZERO;
            }
        }
        out
    }

    /// Multiplication by a symbol: exact coefficient convolution on the
    /// enlarged window.
    pub fn mul_symbol(&self, s: &Symbol) -> CoeffVector {
        if s.is_zero() {
            return CoeffVector::zeros(self.lo, self.hi());
        }
        let lo = self.lo + s.lo();
        let hi = self.hi() + s.hi();
        let mut out = CoeffVector::zeros(lo, hi);
        for (k, a) in s.iter() {
            for (n, c) in self.iter() {
                *out.get_mut(n + k) += a * c;
            }
        }
        out
    }

    pub fn approx_eq(&self, other: &CoeffVector, tol: f64) -> bool {
        self.sub(other).norm() <= tol
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}
