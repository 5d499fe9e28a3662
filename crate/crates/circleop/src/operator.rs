//! The operator `S f = alpha P f + beta Q f`, its adjoint, truncated
//! matrices, and the matrix-structure characterization.
//!
//! Truncations come in two modes. `Exact` keeps a rectangular output window
//! wide enough that polynomial symbols incur no spillover at all, which keeps
//! every algebraic identity exact; `Square` compresses to the input window
//! and is what the singular-value and spectral probes consume.

use std::io::Write;

use num_complex::Complex64;

use crate::error::{CircleopError, Result};
use crate::linalg::{sigma_max, CMat};
use crate::symbol::Symbol;
use crate::vector::CoeffVector;

/// `alpha P f + beta Q f`, exact on the enlarged window.
pub fn apply(alpha: &Symbol, beta: &Symbol, f: &CoeffVector) -> CoeffVector {
    f.riesz_p()
        .mul_symbol(alpha)
        .add(&f.riesz_q().mul_symbol(beta))
}

/// The adjoint `P(conj(alpha) f) + Q(conj(beta) f)`, exact.
pub fn apply_adjoint(alpha: &Symbol, beta: &Symbol, f: &CoeffVector) -> CoeffVector {
    f.mul_symbol(&alpha.conj())
        .riesz_p()
        .add(&f.mul_symbol(&beta.conj()).riesz_q())
}

/// `z^n P f + zbar^n Q f`, the n-th power of the two-sided shift.
pub fn shift_power(n: i64, f: &CoeffVector) -> Result<CoeffVector> {
    if n < 0 {
        return Err(CircleopError::NegativePower(n));
    }
    Ok(apply(&Symbol::monomial(n, 1.0), &Symbol::monomial(-n, 1.0), f))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationMode {
    /// Rectangular matrix with the output window enlarged by the symbol
    /// support, so polynomial symbols lose nothing.
    Exact,
    /// Compression of both windows to `[-m, m]`.
    Square,
}

/// A truncation of an operator between mode windows; entry `(m, n)` is the
/// coefficient of `z^m` in the image of `z^n`.
#[derive(Clone, Debug)]
pub struct OperatorMatrix {
    in_lo: i64,
    out_lo: i64,
    mat: CMat,
}

impl OperatorMatrix {
    pub fn new_zero(in_window: (i64, i64), out_window: (i64, i64)) -> Self {
        OperatorMatrix {
            in_lo: in_window.0,
            out_lo: out_window.0,
            mat: CMat::zeros(
                (out_window.1 - out_window.0 + 1) as usize,
                (in_window.1 - in_window.0 + 1) as usize,
            ),
        }
    }

    pub fn in_window(&self) -> (i64, i64) {
        (self.in_lo, self.in_lo + self.mat.cols() as i64 - 1)
    }

    pub fn out_window(&self) -> (i64, i64) {
        (self.out_lo, self.out_lo + self.mat.rows() as i64 - 1)
    }

    pub fn entry(&self, m: i64, n: i64) -> Complex64 {
        let (ilo, ihi) = self.in_window();
        let (olo, ohi) = self.out_window();
        if m < olo || m > ohi || n < ilo || n > ihi {
            Complex64::ZERO
        } else {
            self.mat[((m - olo) as usize, (n - ilo) as usize)]
        }
    }

    pub fn set_entry(&mut self, m: i64, n: i64, v: Complex64) {
        let i = (m - self.out_lo) as usize;
        let j = (n - self.in_lo) as usize;
        self.mat[(i, j)] = v;
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    /// Applies the truncation to a vector given on exactly the input window.
    pub fn apply_vec(&self, f: &CoeffVector) -> CoeffVector {
        let (ilo, ihi) = self.in_window();
        let clipped = f.restrict(ilo, ihi);
        let x: Vec<Complex64> = clipped.iter().map(|(_, c)| c).collect();
        let y = self.mat.matvec(&x);
        let (olo, ohi) = self.out_window();
        let mut out = CoeffVector::zeros(olo, ohi);
        for (i, c) in y.into_iter().enumerate() {
            *out.get_mut(olo + i as i64) = c;
        }
        out
    }

    /// Composition `self . other`; the input window of `self` must match the
    /// output window of `other` exactly.
    pub fn compose(&self, other: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(
            self.in_window(),
            other.out_window(),
            "window mismatch in compose"
        );
        OperatorMatrix {
            in_lo: other.in_lo,
            out_lo: self.out_lo,
            mat: self.mat.mul(&other.mat),
        }
    }

    /// Difference, after padding both onto the union of their windows.
    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        let in_w = (
            self.in_window().0.min(other.in_window().0),
            self.in_window().1.max(other.in_window().1),
        );
        let out_w = (
            self.out_window().0.min(other.out_window().0),
            self.out_window().1.max(other.out_window().1),
        );
        let mut out = OperatorMatrix::new_zero(in_w, out_w);
        for m in out_w.0..=out_w.1 {
            for n in in_w.0..=in_w.1 {
                out.set_entry(m, n, self.entry(m, n) - other.entry(m, n));
            }
        }
        out
    }

    /// Conjugate-transpose truncation (windows swap roles).
    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            in_lo: self.out_lo,
            out_lo: self.in_lo,
            mat: self.mat.adjoint(),
        }
    }

    /// Keeps only input modes in `[lo, hi]`.
    pub fn restrict_columns(&self, lo: i64, hi: i64) -> OperatorMatrix {
        let (ilo, ihi) = self.in_window();
        let lo = lo.max(ilo);
        let hi = hi.min(ihi);
        let c0 = (lo - ilo) as usize;
        let c1 = (hi - ilo + 1) as usize;
        OperatorMatrix {
            in_lo: lo,
            out_lo: self.out_lo,
            mat: self.mat.submatrix(0, self.mat.rows(), c0, c1),
        }
    }

    /// Keeps only output modes in `[lo, hi]`.
    pub fn restrict_rows(&self, lo: i64, hi: i64) -> OperatorMatrix {
        let (olo, ohi) = self.out_window();
        let lo = lo.max(olo);
        let hi = hi.min(ohi);
        let r0 = (lo - olo) as usize;
        let r1 = (hi - olo + 1) as usize;
        OperatorMatrix {
            in_lo: self.in_lo,
            out_lo: lo,
            mat: self.mat.submatrix(r0, r1, 0, self.mat.cols()),
        }
    }

    pub fn sigma_max(&self) -> f64 {
        sigma_max(&self.mat)
    }

    pub fn abs_max(&self) -> f64 {
        self.mat.abs_max()
    }

    /// Dump format: header rows `out_modes` and `in_modes`, then complex
    /// entries as `re+imi`, one output mode per row.
    pub fn write_csv(&self, w: &mut dyn Write) -> std::io::Result<()> {
        let (ilo, ihi) = self.in_window();
        let (olo, ohi) = self.out_window();
        write!(w, "out_modes")?;
        for m in olo..=ohi {
            write!(w, ",{m}")?;
        }
        writeln!(w)?;
        write!(w, "in_modes")?;
        for n in ilo..=ihi {
            write!(w, ",{n}")?;
        }
        writeln!(w)?;
        for m in olo..=ohi {
            let mut first = true;
            for n in ilo..=ihi {
                if !first {
                    write!(w, ",")?;
                }
                first = false;
                write!(w, "{}", format_complex(self.entry(m, n)))?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

pub fn format_complex(c: Complex64) -> String {
    if c.im < 0.0 {
        format!("{}{}i", c.re, c.im)
    } else {
        format!("{}+{}i", c.re, c.im)
    }
}

/// Builds the truncated matrix of `S_{alpha,beta}` on the symmetric input
/// window `[-m, m]`.
pub fn build_matrix(
    alpha: &Symbol,
    beta: &Symbol,
    m: i64,
    mode: TruncationMode,
) -> Result<OperatorMatrix> {
    build_matrix_window(alpha, beta, (-m, m), mode)
}

/// Same, on an arbitrary input window.
pub fn build_matrix_window(
    alpha: &Symbol,
    beta: &Symbol,
    in_window: (i64, i64),
    mode: TruncationMode,
) -> Result<OperatorMatrix> {
    let radius = alpha.support_radius().max(beta.support_radius());
    let half = in_window.1.min(-in_window.0);
    if half < radius {
        return Err(CircleopError::WindowTooSmall {
            m: half,
            required: radius,
        });
    }
    let out_window = match mode {
        TruncationMode::Exact => (in_window.0 - radius, in_window.1 + radius),
        TruncationMode::Square => in_window,
    };
    let mut t = OperatorMatrix::new_zero(in_window, out_window);
    for n in in_window.0..=in_window.1 {
        let s = if n >= 0 { alpha } else { beta };
        for (k, c) in s.iter() {
            let m_out = n + k;
            if m_out >= out_window.0 && m_out <= out_window.1 {
                t.set_entry(m_out, n, c);
            }
        }
    }
    Ok(t)
}

/// Outcome of checking a matrix against the structure `entry(m,n) =
/// a_{m-n}` for `n >= 0`, `b_{m-n}` for `n <= -1`.
#[derive(Clone, Debug)]
pub enum StructureVerdict {
    IsSab { alpha: Symbol, beta: Symbol },
    NotSab { witness: (i64, i64), deviation: f64 },
}

impl StructureVerdict {
    pub fn is_sab(&self) -> bool {
        matches!(self, StructureVerdict::IsSab { .. })
    }
}

pub const STRUCTURE_TOL: f64 = 1e-10;

/// Reads candidate symbols off columns `n = 0` and `n = -1` (the images of
/// `1` and of `z^{-1}`, shifted), then checks every entry of the matrix
/// against them.
pub fn verify_structure(t: &OperatorMatrix, tol: f64) -> Result<StructureVerdict> {
    let (ilo, ihi) = t.in_window();
    let (olo, ohi) = t.out_window();
    if ihi < 2 || ilo > -2 {
        return Err(CircleopError::WindowTooSmall {
            m: ihi.min(-ilo),
            required: 2,
        });
    }
    // a_k = entry(k, 0); b_k = entry(k-1, -1).
    let a_range = (olo, ohi);
    let b_range = (olo + 1, ohi + 1);
    let a = |k: i64| t.entry(k, 0);
    let b = |k: i64| t.entry(k - 1, -1);
    for m in olo..=ohi {
        for n in ilo..=ihi {
            let k = m - n;
            let expected = if n >= 0 {
                if k >= a_range.0 && k <= a_range.1 {
                    a(k)
                } else {
                    Complex64::ZERO
                }
            } else if k >= b_range.0 && k <= b_range.1 {
                b(k)
            } else {
                Complex64::ZERO
            };
            let dev = (t.entry(m, n) - expected).norm();
            if dev > tol {
                return Ok(StructureVerdict::NotSab {
                    witness: (m, n),
                    deviation: dev,
                });
            }
        }
    }
    let alpha = Symbol::new((a_range.0..=a_range.1).map(|k| (k, a(k))))?;
    let beta = Symbol::new((b_range.0..=b_range.1).map(|k| (k, b(k))))?;
    Ok(StructureVerdict::IsSab { alpha, beta })
}

/// The bounded operator `T z^n = z^n + zbar^{n+1}` for `n >= 0`, `T z^n = 0`
/// for `n < 0`, on the square window `[-m, m]`. It commutes with the
/// two-sided shift yet is not of the form `S_{alpha,beta}`.
pub fn build_shift_commuting_counterexample(m: i64) -> OperatorMatrix {
    let mut t = OperatorMatrix::new_zero((-m, m), (-m, m));
    for n in 0..=m {
        t.set_entry(n, n, Complex64::ONE);
        if -(n + 1) >= -m {
            t.set_entry(-(n + 1), n, Complex64::ONE);
        }
    }
    t
}

/// Largest singular value of `T U - U T` with rows and columns restricted to
/// the interior window `[-r, r]`, for two truncations on one square window.
pub fn interior_commutator_residual(t: &OperatorMatrix, u: &OperatorMatrix, r: i64) -> f64 {
    assert_eq!(t.in_window(), u.in_window());
    assert_eq!(t.out_window(), u.out_window());
    let d = t
        .compose(u)
        .sub(&u.compose(t))
        .restrict_columns(-r, r)
        .restrict_rows(-r, r);
    d.sigma_max()
}
