//! Executable acceptance checks: one function per criterion, shared by the
//! `selftest` CLI subcommand and the acceptance test suite.

use num_complex::Complex64;

use crate::symbol::Symbol;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CriterionResult {
    fn new(id: u32, name: &'static str, passed: bool, detail: String) -> Self {
        CriterionResult {
            id,
            name,
            passed,
            detail,
        }
    }

    pub fn line(&self) -> String {
        format!(
            "[{}] C{:02} {:<28} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail
        )
    }
}

pub fn sym(s: &str) -> Symbol {
    s.parse().expect("static symbol literal")
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Runs all criteria in order.
pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    vec![
        criterion_01_matrix_structure(seed),
        criterion_02_isometry(seed),
        criterion_03_norm_endpoints(),
        criterion_04_strict_middle(),
        criterion_05_objective_reading(seed),
        criterion_06_products(),
        criterion_07_commutativity(),
        criterion_08_shift_commutant(),
        criterion_09_invariant_subspaces(),
        criterion_10_compactness(),
        criterion_11_spectrum(),
        criterion_12_index_equivalence(seed),
        criterion_13_adjoint_solver(seed),
        criterion_14_injectivity(),
    ]
}

mod criteria {
    use super::*;
    use crate::algebra::{
        commutator_residual, commute_check, product_form, shift_commutant_check,
        two_shift_commutant_check, zero_product_class, ProductForm,
        ZeroProductClass,
    };
    use crate::norm::{norm_bounds, minimized_objective, operator_norm};
    use crate::operator::{
        apply, build_matrix, build_shift_commuting_counterexample, interior_commutator_residual,
        verify_structure, StructureVerdict, TruncationMode, STRUCTURE_TOL,
    };
    use crate::spectral::{
        half_spectrum, index_via_roots, shifted_adjoint_residual,
        solve_shifted_adjoint, spectrum_continuous, GridSpec, HalfSide,
    };
    use crate::subspace::{
        compact_distance_ratio, injectivity_classifier, invariance_residual,
        invariant_subspace_basis, noncompactness_witness, reducing_check, BlaschkeProduct,
        InjectivityVerdict, SubspaceBasis,
    };
    use crate::symbol::GridSampling;
    use crate::vector::CoeffVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub fn random_symbol(rng: &mut impl Rng, max_degree: i64) -> Symbol {
        let mut pairs: Vec<(i64, Complex64)> = Vec::new();
        for n in -max_degree..=max_degree {
            if rng.gen_bool(0.7) {
                pairs.push((n, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))));
            }
        }
        if pairs.is_empty() {
            Symbol::one()
        } else {
            Symbol::new(pairs).unwrap()
        }
    }

    /// Matrix structure: entries of the built truncation match the symbol
    /// coefficients exactly and the structure test reconstructs the pair.
    pub fn criterion_01_matrix_structure(seed: u64) -> CriterionResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
        let mut worst_entry = 0.0f64;
        let mut worst_coeff = 0.0f64;
        let mut ok = true;
        for _ in 0..50 {
            let alpha = random_symbol(&mut rng, 5);
            let beta = random_symbol(&mut rng, 5);
            let m = 12;
            let t = build_matrix(&alpha, &beta, m, TruncationMode::Exact).unwrap();
            let (ilo, ihi) = t.in_window();
            let (olo, ohi) = t.out_window();
            for mm in olo..=ohi {
                for nn in ilo..=ihi {
                    let want = if nn >= 0 {
                        alpha.coeff(mm - nn)
                    } else {
                        beta.coeff(mm - nn)
                    };
                    worst_entry = worst_entry.max((t.entry(mm, nn) - want).norm());
                }
            }
            match verify_structure(&t, STRUCTURE_TOL).unwrap() {
                StructureVerdict::IsSab { alpha: a, beta: b } => {
                    let da = a.sub(&alpha);
                    let db = b.sub(&beta);
                    let dev = da
                        .iter()
                        .chain(db.iter())
                        .map(|(_, c)| c.norm())
                        .fold(0.0, f64::max);
                    worst_coeff = worst_coeff.max(dev);
                }
                StructureVerdict::NotSab { .. } => ok = false,
            }
        }
        let passed = ok && worst_entry <= 1e-12 && worst_coeff <= 1e-12;
        CriterionResult::new(
            1,
            "matrix-structure",
            passed,
            format!("entry dev {worst_entry:.2e}, round-trip dev {worst_coeff:.2e}"),
        )
    }

    /// The two-sided shift acts isometrically on coefficients.
    pub fn criterion_02_isometry(seed: u64) -> CriterionResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
        let z = Symbol::z();
        let zb = Symbol::zbar();
        let mut worst = 0.0f64;
        for _ in 0..100 {
            let f = CoeffVector::random(-12, 12, &mut rng);
            let g = apply(&z, &zb, &f);
            worst = worst.max((g.norm() - f.norm()).abs());
        }
        CriterionResult::new(
            2,
            "shift-isometry",
            worst <= 1e-12,
            format!("max norm deviation {worst:.2e} over 100 vectors"),
        )
    }

    /// Exactly solvable norm endpoints, bracketed by the general bounds.
    pub fn criterion_03_norm_endpoints() -> CriterionResult {
        let e1 = operator_norm(&Symbol::one(), &Symbol::zbar(), 64).unwrap();
        let (lo1, hi1) = norm_bounds(&Symbol::one(), &Symbol::zbar(), 256).unwrap();
        let e2 = operator_norm(&Symbol::one(), &Symbol::z(), 64).unwrap();
        let (lo2, hi2) = norm_bounds(&Symbol::one(), &Symbol::z(), 256).unwrap();
        let sqrt2 = 2.0f64.sqrt();
        let ok1 = (e1.value - 1.0).abs() <= 1e-6
            && e1.value >= lo1 - 1e-8
            && e1.value <= hi1 + 1e-8;
        let ok2 = (e2.value - sqrt2).abs() <= 1e-6
            && e2.value >= lo2 - 1e-8
            && e2.value <= hi2 + 1e-8;
        CriterionResult::new(
            3,
            "norm-endpoints",
            ok1 && ok2,
            format!("|S_(1,zbar)| = {:.8}, |S_(1,z)| = {:.8}", e1.value, e2.value),
        )
    }

    /// The averaged pair sits strictly between the bounds and the truncation
    /// sweep has settled.
    pub fn criterion_04_strict_middle() -> CriterionResult {
        let beta = sym("1:0.5;-1:0.5");
        let e256 = operator_norm(&Symbol::one(), &beta, 256).unwrap();
        let e128 = operator_norm(&Symbol::one(), &beta, 128).unwrap();
        let inside = e256.value >= 1.001 && e256.value <= 1.4132;
        let settled = (e256.value - e128.value).abs() < 1e-4;
        CriterionResult::new(
            4,
            "strict-middle-norm",
            inside && settled,
            format!(
                "value {:.8} (M=256), drift {:.2e} from M=128",
                e256.value,
                (e256.value - e128.value).abs()
            ),
        )
    }

    /// The minimized sup-norm objective equals the squared norm oracle.
    pub fn criterion_05_objective_reading(seed: u64) -> CriterionResult {
        let cases: [(&str, Symbol, i64); 3] = [
            ("(1,zbar)", Symbol::zbar(), 64),
            ("(1,z)", Symbol::z(), 64),
            ("(1,(z+zbar)/2)", sym("1:0.5;-1:0.5"), 256),
        ];
        let mut detail = String::new();
        let mut ok = true;
        for (name, beta, m) in cases {
            let oracle = operator_norm(&Symbol::one(), &beta, m).unwrap().value;
            let estimate = minimized_objective(&Symbol::one(), &beta, 8, 256, 6000, seed);
            let gap = (estimate - oracle * oracle).abs();
            ok &= gap <= 1e-2;
            detail.push_str(&format!("{name}: {estimate:.5} vs {:.5}; ", oracle * oracle));
        }
        CriterionResult::new(5, "objective-squared-norm", ok, detail)
    }

    /// Product verdicts agree with the matrix structure test, and every
    /// vanishing clause produces an exactly zero product matrix.
    pub fn criterion_06_products() -> CriterionResult {
        let z = Symbol::z();
        let zb = Symbol::zbar();
        let suite: Vec<(Symbol, Symbol, Symbol, Symbol)> = vec![
            (z.clone(), zb.clone(), z.clone(), zb.clone()),
            (sym("1:1;-1:1"), sym("1:1;-1:1"), sym("0:2;1:1"), zb.clone()),
            (Symbol::one(), Symbol::constant(2.0), zb.clone(), Symbol::one()),
            (sym("0:1;1:1"), zb.clone(), sym("0:1;1:2"), sym("-2:1")),
            (z.clone(), z.clone(), zb.clone(), z.clone()),
            (zb.clone(), Symbol::one(), z.clone(), zb.clone()),
            (sym("0:2"), sym("0:2"), sym("1:1;-1:1"), sym("0:3;-1:1")),
            (zb.clone(), z.clone(), z.clone(), z.clone()),
            (sym("0:1;-1:1"), sym("0:1;-1:1"), z.clone(), sym("0:1")),
            (z.clone(), sym("0:1;1:1"), sym("-1:1;1:1"), zb.clone()),
        ];
        let mut ok = true;
        let mut agreements = 0usize;
        for (a1, b1, a2, b2) in &suite {
            let verdict = product_form(a1, b1, a2, b2);
            let m = 12;
            let first = crate::operator::build_matrix_window(a2, b2, (-m, m), TruncationMode::Exact)
                .unwrap();
            let second =
                crate::operator::build_matrix_window(a1, b1, first.out_window(), TruncationMode::Exact)
                    .unwrap();
            let prod = second.compose(&first).restrict_columns(-m / 2, m / 2);
            let prod_interior = prod.restrict_rows(-m, m);
            let structure = verify_structure(&prod_interior, 1e-9).unwrap();
            match (&verdict, &structure) {
                (ProductForm::Product { alpha, beta }, StructureVerdict::IsSab { .. }) => {
                    // entrywise agreement with the product-symbol matrix
                    let want = crate::operator::build_matrix_window(
                        alpha,
                        beta,
                        prod_interior.in_window(),
                        TruncationMode::Exact,
                    )
                    .unwrap();
                    let (ilo, ihi) = prod_interior.in_window();
                    let mut dev = 0.0f64;
                    let r = m / 2;
                    for mm in -r..=r {
                        for nn in ilo..=ihi {
                            dev = dev.max((prod_interior.entry(mm, nn) - want.entry(mm, nn)).norm());
                        }
                    }
                    if dev <= 1e-12 {
                        agreements += 1;
                    } else {
                        ok = false;
                    }
                }
                (ProductForm::NotOfForm, StructureVerdict::NotSab { .. }) => agreements += 1,
                _ => ok = false,
            }
        }
        // The four vanishing clauses.
        let zero = Symbol::zero();
        let clauses: Vec<(Symbol, Symbol, Symbol, Symbol, ZeroProductClass)> = vec![
            (zero.clone(), zero.clone(), z.clone(), zb.clone(), ZeroProductClass::ZeroByI),
            (zero.clone(), Symbol::one(), z.clone(), zero.clone(), ZeroProductClass::ZeroByII),
            (Symbol::one(), zero.clone(), zero.clone(), zb.clone(), ZeroProductClass::ZeroByIII),
            (
                Symbol::one(),
                Symbol::constant(2.0),
                zero.clone(),
                zero.clone(),
                ZeroProductClass::ZeroByIV,
            ),
        ];
        let mut zero_ok = true;
        for (a1, b1, a2, b2, want) in &clauses {
            if zero_product_class(a1, b1, a2, b2) != *want {
                zero_ok = false;
            }
            let m = 8;
            let first =
                crate::operator::build_matrix_window(a2, b2, (-m, m), TruncationMode::Exact).unwrap();
            let second =
                crate::operator::build_matrix_window(a1, b1, first.out_window(), TruncationMode::Exact)
                    .unwrap();
            if second.compose(&first).abs_max() > 1e-12 {
                zero_ok = false;
            }
        }
        CriterionResult::new(
            6,
            "product-form",
            ok && zero_ok && agreements == suite.len(),
            format!("{agreements}/{} verdicts agree; zero clauses {}", suite.len(), zero_ok),
        )
    }

    /// Commutation verdicts coincide with a vanishing commutator residual on
    /// a twelve-case suite.
    pub fn criterion_07_commutativity() -> CriterionResult {
        let z = Symbol::z();
        let zb = Symbol::zbar();
        let suite: Vec<(Symbol, Symbol, Symbol, Symbol, bool)> = vec![
            // positive: both analytic/co-analytic
            (z.clone(), zb.clone(), Symbol::monomial(2, 1.0), Symbol::monomial(-3, 1.0), true),
            (sym("0:1;1:2"), sym("0:1;-1:-1"), z.clone(), zb.clone(), true),
            (Symbol::one(), zb.clone(), sym("0:2;2:1"), sym("-1:3"), true),
            // positive: equal pairs
            (sym("1:1;-1:1"), sym("1:1;-1:1"), sym("0:2;1:1;-1:1"), sym("0:2;1:1;-1:1"), true),
            (z.clone(), z.clone(), zb.clone(), zb.clone(), true),
            // positive: linear relation to a shared constant
            (z.clone(), zb.clone(), sym("0:1;1:-1"), sym("0:1;-1:-1"), true),
            (sym("0:1;-1:1"), z.clone(), sym("0:2;-1:-1"), sym("0:3;1:-1"), true),
            (sym("1:2;-1:1"), sym("1:1;-1:2"), sym("0:5;1:-2;-1:-1"), sym("0:5;1:-1;-1:-2"), true),
            // negative
            (z.clone(), zb.clone(), zb.clone(), z.clone(), false),
            (sym("0:2;1:1"), zb.clone(), zb.clone(), Symbol::one(), false),
            (z.clone(), Symbol::one(), Symbol::one(), z.clone(), false),
            (sym("1:1;-1:1"), sym("0:1"), z.clone(), z.clone(), false),
        ];
        let mut ok = true;
        let mut detail = String::new();
        for (i, (a1, b1, a2, b2, want_commute)) in suite.iter().enumerate() {
            let verdict = commute_check(a1, b1, a2, b2);
            let residual = commutator_residual(a1, b1, a2, b2, 16).unwrap();
            let commutes = verdict.commutes();
            let matched = if *want_commute {
                commutes && residual <= 1e-10
            } else {
                !commutes && residual >= 1e-3
            };
            if !matched {
                ok = false;
                detail.push_str(&format!("case {i}: {verdict:?}, residual {residual:.2e}; "));
            }
        }
        if detail.is_empty() {
            detail = "12/12 verdicts match the residual oracle".into();
        }
        CriterionResult::new(7, "commutativity", ok, detail)
    }

    /// The bounded operator commuting with the shift but not of the form:
    /// passes shift commutation, fails structure, fails the two-shift test;
    /// a genuine analytic/co-analytic pair passes all three.
    pub fn criterion_08_shift_commutant() -> CriterionResult {
        let m = 16;
        let counterexample = build_shift_commuting_counterexample(m);
        let shift = build_matrix(&Symbol::z(), &Symbol::zbar(), m, TruncationMode::Square).unwrap();
        let commutes = interior_commutator_residual(&counterexample, &shift, m / 2);
        let cex_structure = verify_structure(&counterexample, STRUCTURE_TOL).unwrap().is_sab();
        let cex_two_shift = two_shift_commutant_check(&counterexample, 1e-10).unwrap().accepted();

        let z2 = Symbol::monomial(2, 1.0);
        let good = build_matrix(&z2, &Symbol::zbar(), m, TruncationMode::Square).unwrap();
        let good_commutes = interior_commutator_residual(&good, &shift, m / 2);
        let good_structure = verify_structure(&good, STRUCTURE_TOL).unwrap().is_sab();
        let good_two_shift = two_shift_commutant_check(&good, 1e-10).unwrap().accepted();
        let good_predicate = shift_commutant_check(&z2, &Symbol::zbar());

        let passed = commutes <= 1e-12
            && !cex_structure
            && !cex_two_shift
            && good_commutes <= 1e-12
            && good_structure
            && good_two_shift
            && good_predicate;
        CriterionResult::new(
            8,
            "shift-commutant",
            passed,
            format!(
                "counterexample residual {commutes:.1e}, structure {cex_structure}, two-shift {cex_two_shift}; S_(z^2,zbar) all-pass {}",
                good_commutes <= 1e-12 && good_structure && good_two_shift
            ),
        )
    }

    /// Blaschke invariant subspace and the reducing-subspace dichotomy.
    pub fn criterion_09_invariant_subspaces() -> CriterionResult {
        let phi = BlaschkeProduct::factor(c(0.5, 0.0)).unwrap();
        let psi = BlaschkeProduct::coordinate();
        let basis = invariant_subspace_basis(&phi, &psi, 128).unwrap();
        let res = invariance_residual(&basis, &Symbol::z(), &Symbol::zbar());

        let m = 24;
        let window = (-m, m);
        let suite: Vec<(&str, SubspaceBasis, bool)> = vec![
            ("zero", SubspaceBasis::empty(window), true),
            ("analytic", SubspaceBasis::from_modes(0..=m, window), true),
            ("coanalytic", SubspaceBasis::from_modes(-m..=-1, window), true),
            ("all", SubspaceBasis::from_modes(-m..=m, window), true),
            (
                "blaschke-half",
                invariant_subspace_basis(&phi, &BlaschkeProduct::trivial(), 128).unwrap(),
                false,
            ),
            (
                "shifted-analytic",
                invariant_subspace_basis(&BlaschkeProduct::coordinate(), &BlaschkeProduct::trivial(), 128)
                    .unwrap(),
                false,
            ),
        ];
        let mut ok = res <= 1e-10;
        let mut detail = format!("invariance residual {res:.2e}; ");
        for (name, b, want) in &suite {
            let got = reducing_check(b).is_reducing();
            if got != *want {
                ok = false;
                detail.push_str(&format!("{name}: reducing={got} want {want}; "));
            }
        }
        detail.push_str("reducing suite 6/6");
        CriterionResult::new(9, "invariant-subspaces", ok, detail)
    }

    /// Non-compactness witnesses and the best compact-approximation gap.
    pub fn criterion_10_compactness() -> CriterionResult {
        let (a_seq, b_seq) = noncompactness_witness(&Symbol::z(), &Symbol::zbar(), 24).unwrap();
        let const_dev = a_seq
            .iter()
            .chain(b_seq.iter())
            .map(|v| (v - 1.0).abs())
            .fold(0.0, f64::max);
        let two_z = sym("0:2;1:1");
        let (a2, _) = noncompactness_witness(&two_z, &Symbol::zbar(), 24).unwrap();
        let const_dev2 = a2
            .iter()
            .map(|v| (v - 5.0f64.sqrt()).abs())
            .fold(0.0, f64::max);

        let m = 48;
        let mut k = crate::operator::OperatorMatrix::new_zero((-m, m), (-m, m));
        k.set_entry(-1, 0, Complex64::ONE);
        let ratio = compact_distance_ratio(&Symbol::zbar(), &Symbol::one(), &k, m).unwrap();
        let s_norm = operator_norm(&Symbol::zbar(), &Symbol::one(), m).unwrap().value;
        let sqrt2 = 2.0f64.sqrt();
        let passed = const_dev <= 1e-12
            && const_dev2 <= 1e-12
            && (ratio - 1.0 / sqrt2).abs() <= 1e-6
            && (s_norm - sqrt2).abs() <= 1e-6;
        CriterionResult::new(
            10,
            "compactness",
            passed,
            format!("witness dev {const_dev:.1e}, ratio {ratio:.8}, |S| {s_norm:.8}"),
        )
    }

    /// Formula spectrum of the shift pair: the closed disk, agreeing with
    /// the resolvent oracle away from the boundary band; one-sided spectrum
    /// is the disk with the origin adjoined.
    pub fn criterion_11_spectrum() -> CriterionResult {
        let z = Symbol::z();
        let zb = Symbol::zbar();
        let grid = GridSpec::square(-2.0, 2.0, -2.0, 2.0, 41).with_eps(0.02);
        let report = spectrum_continuous(&z, &zb, &grid, 1024, Some(128)).unwrap();
        let mut shape_ok = true;
        let mut oracle_total = 0usize;
        let mut oracle_agree = 0usize;
        for p in &report.points {
            let r = p.lambda.norm();
            if (r - 1.0).abs() > 0.05 {
                let want = r < 1.0;
                if p.in_spectrum != want {
                    shape_ok = false;
                }
            }
            if (r - 1.0).abs() > 0.1 {
                oracle_total += 1;
                let sv = p.min_sv.unwrap();
                let agree = if p.in_spectrum { sv <= 0.1 } else { sv >= 0.1 };
                if agree {
                    oracle_agree += 1;
                }
            }
        }
        let frac = oracle_agree as f64 / oracle_total as f64;

        let half = half_spectrum(&z, HalfSide::AlphaZeroBeta, &grid, 1024).unwrap();
        let mut half_ok = true;
        for p in &half.points {
            let r = p.lambda.norm();
            if (r - 1.0).abs() > 0.05 {
                let want = r < 1.0; // contains the origin point as well
                if p.in_spectrum != want {
                    half_ok = false;
                }
            }
        }
        let passed = shape_ok && frac >= 0.99 && half_ok;
        CriterionResult::new(
            11,
            "winding-spectrum",
            passed,
            format!(
                "disk shape {shape_ok}, oracle agreement {oracle_agree}/{oracle_total} ({:.2}%), one-sided {half_ok}",
                100.0 * frac
            ),
        )
    }

    /// Root counting and phase accumulation give the same index.
    pub fn criterion_12_index_equivalence(seed: u64) -> CriterionResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0c);
        let mut checked = 0usize;
        let mut ok = true;
        while checked < 50 {
            // Build a Laurent polynomial from roots kept away from the circle.
            let lo: i64 = rng.gen_range(-4..=0);
            let deg = rng.gen_range(1..=6);
            let mut coeffs = vec![Complex64::ONE];
            for _ in 0..deg {
                let inside = rng.gen_bool(0.5);
                let r = if inside {
                    rng.gen_range(0.1..0.85)
                } else {
                    rng.gen_range(1.2..2.5)
                };
                let root = Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
                let mut next = vec![Complex64::ZERO; coeffs.len() + 1];
                for (k, &ck) in coeffs.iter().enumerate() {
                    next[k + 1] += ck;
                    next[k] -= ck * root;
                }
                coeffs = next;
            }
            let s = Symbol::new(
                coeffs
                    .into_iter()
                    .enumerate()
                    .map(|(k, cc)| (lo + k as i64, cc)),
            )
            .unwrap();
            let by_roots = match index_via_roots(&s) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let by_winding = match s.winding_number(Complex64::ZERO, 1024) {
                Ok(v) => v,
                Err(_) => continue,
            };
            checked += 1;
            if by_roots != by_winding {
                ok = false;
            }
        }
        CriterionResult::new(
            12,
            "index-equivalence",
            ok,
            format!("{checked} random Laurent polynomials, exact agreement {ok}"),
        )
    }

    /// The shifted adjoint solver meets its residual contract for dominant
    /// shifts.
    pub fn criterion_13_adjoint_solver(seed: u64) -> CriterionResult {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0d);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let alpha = random_symbol(&mut rng, 3);
            let sup = alpha.sup_norm(128).unwrap_or(0.0);
            let lam_mod = sup + 0.5 + rng.gen_range(0.0..1.0);
            let lambda = Complex64::from_polar(lam_mod, rng.gen_range(0.0..std::f64::consts::TAU));
            let g = CoeffVector::random(-8, 8, &mut rng);
            let m = 64;
            let sol = solve_shifted_adjoint(&alpha, lambda, &g, m).unwrap();
            let r = shifted_adjoint_residual(&alpha, lambda, &sol.f, &g, m / 2);
            worst = worst.max(r / g.norm());
        }
        CriterionResult::new(
            13,
            "adjoint-solver",
            worst <= 1e-8,
            format!("max relative interior residual {worst:.2e} over 20 systems"),
        )
    }

    /// Mollified zero-set scenarios classify as stated and the intersection
    /// witness is an approximate adjoint kernel vector that improves with
    /// resolution.
    pub fn criterion_14_injectivity() -> CriterionResult {
        use std::f64::consts::PI;
        let tol = 1e-3;
        // Scenario 1: alpha never vanishes.
        let n = 1024;
        let alpha = Symbol::z().sample(n).unwrap();
        let beta = mollified_arc_zero(n, 1.0, 2.5);
        let r1 = injectivity_classifier(&alpha, &beta, tol).unwrap();
        let ok1 = r1.verdict == InjectivityVerdict::CaseOneNullZeroSet;
        // Scenario 2: disjoint zero arcs.
        let a2 = mollified_arc_zero(n, 0.3, 1.3);
        let b2 = mollified_arc_zero(n, PI + 0.3, PI + 1.3);
        let r2 = injectivity_classifier(&a2, &b2, tol).unwrap();
        let ok2 = r2.verdict == InjectivityVerdict::CaseSInjective;
        // Scenario 3: a common zero arc.
        let a3 = mollified_arc_zero(n, 1.0, 2.8);
        let b3 = mollified_arc_zero(n, 1.0, 2.8);
        let r3 = injectivity_classifier(&a3, &b3, tol).unwrap();
        let witness_res = r3.witness.as_ref().map(|w| w.1).unwrap_or(f64::INFINITY);
        let ok3 = r3.verdict == InjectivityVerdict::CaseAdjointNotInjective && witness_res <= 1e-2;
        // Residual decreases with resolution.
        let n2 = 2 * n;
        let a4 = mollified_arc_zero(n2, 1.0, 2.8);
        let b4 = mollified_arc_zero(n2, 1.0, 2.8);
        let r4 = injectivity_classifier(&a4, &b4, tol).unwrap();
        let witness_res2 = r4.witness.as_ref().map(|w| w.1).unwrap_or(f64::INFINITY);
        let ok4 = witness_res2 <= witness_res;
        CriterionResult::new(
            14,
            "injectivity",
            ok1 && ok2 && ok3 && ok4,
            format!(
                "scenarios {ok1}/{ok2}/{ok3}, witness residual {witness_res:.2e} -> {witness_res2:.2e}"
            ),
        )
    }

    /// A smooth function that vanishes identically on the arc
    /// `[theta0, theta1]` and is 1 away from it, with smoothed shoulders.
    pub fn mollified_arc_zero(n: usize, theta0: f64, theta1: f64) -> GridSampling {
        use std::f64::consts::TAU;
        let width = 0.3;
        GridSampling::from_fn(n, |theta| {
            let mut dist = f64::INFINITY;
            // distance from theta to the arc, on the circle
            let t = theta.rem_euclid(TAU);
            let (a, b) = (theta0.rem_euclid(TAU), theta1.rem_euclid(TAU));
            let inside = if a <= b { t >= a && t <= b } else { t >= a || t <= b };
            if inside {
                dist = 0.0;
            } else {
                for target in [a, b] {
                    let d = (t - target).abs();
                    dist = dist.min(d.min(TAU - d));
                }
            }
            let v = if dist <= 0.0 {
                0.0
            } else if dist >= width {
                1.0
            } else {
                smooth01(dist / width)
            };
            Complex64::new(v, 0.0)
        })
    }

    fn smooth01(t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        t * t * t * (t * (t * 6.0 - 15.0) + 10.0)
    }
}

pub use criteria::*;
