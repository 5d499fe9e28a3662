//! `circleop`: truncated matrices, norms, spectra, products, commutators,
//! kernels, and invariant subspaces of the operators `f -> a Pf + b Qf` on
//! the circle, from symbols given in the `mode:value` mini-language.
//!
//! Outputs are deterministic for a fixed seed; `CIRCLEOP_THREADS` caps the
//! worker threads used by grid sweeps.

use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use circleop::algebra::{
    commutator_residual, commute_check, product_form, zero_product_class, CommuteVerdict,
    ProductForm, ZeroProductClass,
};
use circleop::norm::{norm_bounds, minimized_objective, operator_norm, norm_case_classifier, NormCase};
use circleop::operator::{build_matrix, format_complex, TruncationMode};
use circleop::spectral::{half_spectrum, spectrum_continuous, GridSpec, HalfSide};
use circleop::subspace::{
    adjoint_invariance_residual, invariance_residual, invariant_subspace_basis, kernel_basis,
    kernel_basis_adjoint, reducing_check, BlaschkeProduct, ReducingVerdict,
};
use circleop::symbol::{parse_complex, Symbol};
use circleop::{CircleopError, CoeffVector};

#[derive(Parser)]
#[command(name = "circleop", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Seed for every randomized internal (restarts, probe vectors).
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Square,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the truncated matrix of S_{alpha,beta}.
    Matrix {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// Input window half-width.
        #[arg(long = "M", default_value_t = 8)]
        m: i64,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Norm bounds, the singular-value estimate, and the minimized sup-norm
    /// objective (an estimate of the squared norm).
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long = "M", default_value_t = 64)]
        m: i64,
        /// Polynomial degree for the objective minimization.
        #[arg(long, default_value_t = 8)]
        deg: usize,
        /// Evaluation grid size.
        #[arg(long = "N", default_value_t = 256)]
        n: usize,
        /// Evaluation budget per restart.
        #[arg(long, default_value_t = 4000)]
        iters: usize,
    },
    /// Classify grid points against the range/winding spectrum formula.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, required_unless_present = "half", allow_hyphen_values = true)]
        beta: Option<String>,
        /// re0,re1,im0,im1,n
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Range membership tolerance (default: half the grid spacing).
        #[arg(long)]
        eps: Option<f64>,
        /// Samples of each symbol curve.
        #[arg(long = "N", default_value_t = 1024)]
        n: usize,
        /// Also record the smallest singular value of the truncation at
        /// this window half-width.
        #[arg(long)]
        probe: Option<i64>,
        /// Classify the one-sided operator S_{alpha,0} instead.
        #[arg(long, default_value_t = false)]
        half: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Is the composition of two operators of the same form, and when is it
    /// zero?
    Product {
        #[arg(long, allow_hyphen_values = true)]
        alpha1: String,
        #[arg(long, allow_hyphen_values = true)]
        beta1: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: String,
        #[arg(long, allow_hyphen_values = true)]
        beta2: String,
    },
    /// Do two operators commute, and by which mechanism?
    Commute {
        #[arg(long, allow_hyphen_values = true)]
        alpha1: String,
        #[arg(long, allow_hyphen_values = true)]
        beta1: String,
        #[arg(long, allow_hyphen_values = true)]
        alpha2: String,
        #[arg(long, allow_hyphen_values = true)]
        beta2: String,
        /// Window half-width for the certifying residual.
        #[arg(long = "M", default_value_t = 16)]
        m: i64,
    },
    /// Kernel vectors of the exact rectangular truncation.
    Kernel {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long = "M", default_value_t = 24)]
        m: i64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Kernel of the adjoint instead.
        #[arg(long, default_value_t = false)]
        adjoint: bool,
    },
    /// Invariance and reducing diagnostics of a Blaschke-product subspace.
    Subspace {
        /// Zeros of the analytic inner function, comma-separated complex
        /// literals (may be empty).
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        phi_zeros: String,
        #[arg(long, default_value_t = 0)]
        phi_power: u32,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        phi_const: String,
        /// Zeros of the co-analytic-side inner function.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        psi_zeros: String,
        #[arg(long, default_value_t = 0)]
        psi_power: u32,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        psi_const: String,
        #[arg(long = "M", default_value_t = 128)]
        m: i64,
    },
    /// Winding number of a symbol curve around a point.
    Winding {
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        /// Base point, complex literal.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        at: String,
        #[arg(long = "N", default_value_t = 1024)]
        n: usize,
    },
    /// Run the full acceptance suite and print a pass/fail table.
    Selftest,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut sink: Box<dyn Write> = match &cli.out {
        Some(path) => match std::fs::File::create(path) {
            Ok(f) => Box::new(f),
            Err(e) => {
                eprintln!("cannot open {}: {e}", path.display());
                return ExitCode::from(1);
            }
        },
        None => Box::new(std::io::stdout()),
    };
    match run(&cli, &mut sink) {
        Ok(code) => code,
        Err(e) => {
            let code = match &e {
                CircleopError::Parse { .. } => 2u8,
                _ => 1u8,
            };
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}

fn sym(text: &str) -> Result<Symbol, CircleopError> {
    text.parse()
}

fn complex_arg(text: &str) -> Result<Complex64, CircleopError> {
    parse_complex(text).ok_or_else(|| CircleopError::Parse {
        pos: 0,
        msg: format!("bad complex literal `{text}`"),
    })
}

fn zeros_arg(text: &str) -> Result<Vec<Complex64>, CircleopError> {
    let mut out = Vec::new();
    let mut pos = 0usize;
    for part in text.split(',') {
        let here = pos;
        pos += part.len() + 1;
        if part.trim().is_empty() {
            continue;
        }
        out.push(parse_complex(part.trim()).ok_or_else(|| CircleopError::Parse {
            pos: here,
            msg: format!("bad complex literal `{part}`"),
        })?);
    }
    Ok(out)
}

fn grid_arg(text: &str, eps: Option<f64>) -> Result<GridSpec, CircleopError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 5 {
        return Err(CircleopError::Parse {
            pos: 0,
            msg: "grid must be re0,re1,im0,im1,n".into(),
        });
    }
    let num = |i: usize| -> Result<f64, CircleopError> {
        parts[i].trim().parse().map_err(|_| CircleopError::Parse {
            pos: i,
            msg: format!("bad grid number `{}`", parts[i]),
        })
    };
    let n: usize = parts[4].trim().parse().map_err(|_| CircleopError::Parse {
        pos: 4,
        msg: format!("bad grid count `{}`", parts[4]),
    })?;
    let mut spec = GridSpec::square(num(0)?, num(1)?, num(2)?, num(3)?, n);
    if let Some(e) = eps {
        spec = spec.with_eps(e);
    }
    Ok(spec)
}

fn complex_str(c: Complex64) -> String {
    format_complex(c)
}

fn vector_entries(v: &CoeffVector) -> Vec<String> {
    v.iter()
        .filter(|(_, c)| c.norm() > 1e-12)
        .map(|(n, c)| format!("{n}:{}", complex_str(c)))
        .collect()
}

#[derive(Serialize)]
struct NormOut {
    schema: u32,
    lower: f64,
    upper: f64,
    svd_estimate: f64,
    #[serde(rename = "M")]
    m: i64,
    converged: bool,
    ny_estimate: f64,
    case: &'static str,
}

#[derive(Serialize)]
struct ProductOut {
    schema: u32,
    product_form: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    beta: Option<String>,
    zero_product: String,
}

#[derive(Serialize)]
struct CommuteOut {
    schema: u32,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    c: Option<String>,
    residual: f64,
}

#[derive(Serialize)]
struct KernelOut {
    schema: u32,
    adjoint: bool,
    tol: f64,
    count: usize,
    vectors: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct SubspaceOut {
    schema: u32,
    dim: usize,
    gram_defect: f64,
    invariance_residual: f64,
    adjoint_residual: f64,
    reducing: bool,
}

#[derive(Serialize)]
struct WindingOut {
    schema: u32,
    winding: i64,
}

fn run(cli: &Cli, out: &mut dyn Write) -> Result<ExitCode, CircleopError> {
    match &cli.command {
        Command::Matrix {
            alpha,
            beta,
            m,
            mode,
            format,
        } => {
            let t = build_matrix(
                &sym(alpha)?,
                &sym(beta)?,
                *m,
                match mode {
                    Mode::Exact => TruncationMode::Exact,
                    Mode::Square => TruncationMode::Square,
                },
            )?;
            match format {
                Format::Csv => t.write_csv(out).expect("write"),
                Format::Json => {
                    #[derive(Serialize)]
                    struct MatrixOut {
                        schema: u32,
                        out_modes: (i64, i64),
                        in_modes: (i64, i64),
                        entries: Vec<Vec<String>>,
                    }
                    let (ilo, ihi) = t.in_window();
                    let (olo, ohi) = t.out_window();
                    let entries = (olo..=ohi)
                        .map(|mm| (ilo..=ihi).map(|nn| complex_str(t.entry(mm, nn))).collect())
                        .collect();
                    let doc = MatrixOut {
                        schema: 1,
                        out_modes: (olo, ohi),
                        in_modes: (ilo, ihi),
                        entries,
                    };
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Norm {
            alpha,
            beta,
            m,
            deg,
            n,
            iters,
        } => {
            let a = sym(alpha)?;
            let b = sym(beta)?;
            let est = operator_norm(&a, &b, *m)?;
            let (lower, upper) = norm_bounds(&a, &b, (*n).max(256))?;
            let ny = minimized_objective(&a, &b, *deg, *n, *iters, cli.seed);
            let case = match norm_case_classifier(&a, &b, (*n).max(64))? {
                NormCase::CaseAnalyticProduct => "analytic-product",
                NormCase::CaseUnimodularOpposite => "unimodular-opposite",
                NormCase::Unclassified => "unclassified",
            };
            let doc = NormOut {
                schema: 1,
                lower,
                upper,
                svd_estimate: est.value,
                m: est.m,
                converged: est.converged,
                ny_estimate: ny,
                case,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
            if est.converged {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(3))
            }
        }
        Command::Spectrum {
            alpha,
            beta,
            grid,
            eps,
            n,
            probe,
            half,
            format,
        } => {
            let spec = grid_arg(grid, *eps)?;
            let a = sym(alpha)?;
            let report = if *half {
                half_spectrum(&a, HalfSide::AlphaZeroBeta, &spec, *n)?
            } else {
                let b = sym(beta.as_deref().unwrap_or("zero"))?;
                spectrum_continuous(&a, &b, &spec, *n, *probe)?
            };
            match format {
                Format::Csv => report.write_csv(out).expect("write"),
                Format::Json => {
                    #[derive(Serialize)]
                    struct PointOut {
                        re: f64,
                        im: f64,
                        in_range_a: bool,
                        in_range_b: bool,
                        ind_a: Option<i64>,
                        ind_b: Option<i64>,
                        in_spectrum: bool,
                        min_sv: Option<f64>,
                    }
                    #[derive(Serialize)]
                    struct SpectrumOut {
                        schema: u32,
                        eps: f64,
                        points: Vec<PointOut>,
                    }
                    let doc = SpectrumOut {
                        schema: 1,
                        eps: report.eps,
                        points: report
                            .points
                            .iter()
                            .map(|p| PointOut {
                                re: p.lambda.re,
                                im: p.lambda.im,
                                in_range_a: p.in_range_a,
                                in_range_b: p.in_range_b,
                                ind_a: p.ind_a,
                                ind_b: p.ind_b,
                                in_spectrum: p.in_spectrum,
                                min_sv: p.min_sv,
                            })
                            .collect(),
                    };
                    writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Product {
            alpha1,
            beta1,
            alpha2,
            beta2,
        } => {
            let (a1, b1, a2, b2) = (sym(alpha1)?, sym(beta1)?, sym(alpha2)?, sym(beta2)?);
            let (form, alpha, beta) = match product_form(&a1, &b1, &a2, &b2) {
                ProductForm::Product { alpha, beta } => {
                    ("product", Some(alpha.to_string()), Some(beta.to_string()))
                }
                ProductForm::NotOfForm => ("not-of-form", None, None),
            };
            let zero = match zero_product_class(&a1, &b1, &a2, &b2) {
                ZeroProductClass::ZeroByI => "zero-by-i".to_string(),
                ZeroProductClass::ZeroByII => "zero-by-ii".to_string(),
                ZeroProductClass::ZeroByIII => "zero-by-iii".to_string(),
                ZeroProductClass::ZeroByIV => "zero-by-iv".to_string(),
                ZeroProductClass::NonZero { witness_norm } => {
                    format!("nonzero (witness {witness_norm:.3e})")
                }
            };
            let doc = ProductOut {
                schema: 1,
                product_form: form,
                alpha,
                beta,
                zero_product: zero,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
            Ok(ExitCode::SUCCESS)
        }
        Command::Commute {
            alpha1,
            beta1,
            alpha2,
            beta2,
            m,
        } => {
            let (a1, b1, a2, b2) = (sym(alpha1)?, sym(beta1)?, sym(alpha2)?, sym(beta2)?);
            let residual = commutator_residual(&a1, &b1, &a2, &b2, *m)?;
            let verdict = commute_check(&a1, &b1, &a2, &b2);
            let (name, a, b, c) = match &verdict {
                CommuteVerdict::ByI => ("commute-analyticity", None, None, None),
                CommuteVerdict::ByII => ("commute-equal-pairs", None, None, None),
                CommuteVerdict::ByIII { a, b, c } => (
                    "commute-linear-relation",
                    Some(complex_str(*a)),
                    Some(complex_str(*b)),
                    Some(complex_str(*c)),
                ),
                CommuteVerdict::NonCommuting { .. } => ("non-commuting", None, None, None),
            };
            let doc = CommuteOut {
                schema: 1,
                verdict: name,
                a,
                b,
                c,
                residual,
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
            Ok(ExitCode::SUCCESS)
        }
        Command::Kernel {
            alpha,
            beta,
            m,
            tol,
            adjoint,
        } => {
            let a = sym(alpha)?;
            let b = sym(beta)?;
            let vectors = if *adjoint {
                kernel_basis_adjoint(&a, &b, *m, *tol)?
            } else {
                kernel_basis(&a, &b, *m, *tol)?
            };
            let doc = KernelOut {
                schema: 1,
                adjoint: *adjoint,
                tol: *tol,
                count: vectors.len(),
                vectors: vectors.iter().map(vector_entries).collect(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
            Ok(ExitCode::SUCCESS)
        }
        Command::Subspace {
            phi_zeros,
            phi_power,
            phi_const,
            psi_zeros,
            psi_power,
            psi_const,
            m,
        } => {
            let phi =
                BlaschkeProduct::new(complex_arg(phi_const)?, *phi_power, zeros_arg(phi_zeros)?)?;
            let psi =
                BlaschkeProduct::new(complex_arg(psi_const)?, *psi_power, zeros_arg(psi_zeros)?)?;
            let basis = invariant_subspace_basis(&phi, &psi, *m)?;
            let z = Symbol::z();
            let zb = Symbol::zbar();
            let fwd = invariance_residual(&basis, &z, &zb);
            let adj = adjoint_invariance_residual(&basis, &z, &zb);
            let doc = SubspaceOut {
                schema: 1,
                dim: basis.dim(),
                gram_defect: basis.gram_defect(),
                invariance_residual: fwd,
                adjoint_residual: adj,
                reducing: matches!(reducing_check(&basis), ReducingVerdict::Reducing),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
            Ok(ExitCode::SUCCESS)
        }
        Command::Winding { symbol, at, n } => {
            let s = sym(symbol)?;
            let a = complex_arg(at)?;
            let w = s.winding_number(a, *n)?;
            let doc = WindingOut { schema: 1, winding: w };
            writeln!(out, "{}", serde_json::to_string_pretty(&doc).unwrap()).expect("write");
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let results = circleop::selftest::run_all(cli.seed);
            let mut all_ok = true;
            for r in &results {
                writeln!(out, "{}", r.line()).expect("write");
                all_ok &= r.passed;
            }
            let passed = results.iter().filter(|r| r.passed).count();
            writeln!(out, "{passed}/{} criteria passed", results.len()).expect("write");
            if all_ok {
                Ok(ExitCode::SUCCESS)
            } else {
                Ok(ExitCode::from(1))
            }
        }
    }
}
