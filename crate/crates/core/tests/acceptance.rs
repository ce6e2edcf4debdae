//! Acceptance gate: each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use periodlab::distinction::{
    catalog_segments, check_conjecture_instance, enumerate_parameters, enumerate_rds_specs,
    factors_through_sp_symbolic, is_linear_distinguished, is_x_distinguished, is_x_elliptic_symbolic, Status,
};
use periodlab::groups::{
    builtin_catalog, builtin_model, fs_indicator, fs_indicator_value, invariant_isotropic_exists, sl2_surrogate,
    Catalog, CatalogError, IrrepModel,
};
use periodlab::matrix::{
    conjugates_to_partition, conjugator_for_partition, even_compositions, find_nondegenerate, invariant_form_sl2,
    invariant_forms, realize, w_plus, BilinearForm, GeneratorSet, PermConvention, Symmetry,
};
use periodlab::notation::{load_catalog, parse_param, print_param, CatalogLoadError, NotationError, SourceSpan};
use periodlab::param::{arthur_to_l, dimension, AParameter, ASummand, Segment, WDParameter};

const TOL: f64 = 1e-9;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn skew_form(gens: &GeneratorSet) -> Option<BilinearForm> {
    let skew: Vec<BilinearForm> = invariant_forms(gens)
        .into_iter()
        .filter(|f| f.symmetry == Symmetry::Skew)
        .collect();
    find_nondegenerate(&skew)
}

/// Largest entry of `g^T J g - J` over the generators.
fn sp_defect(gens: &GeneratorSet, j: &BilinearForm) -> f64 {
    let jm = j.gram.to_approx();
    gens.generators
        .iter()
        .map(|g| {
            let g = g.to_approx();
            g.transpose().mul(&jm).mul(&g).sub(&jm).max_abs()
        })
        .fold(0.0, f64::max)
}

fn matrix_symplectic(s: &Segment, catalog: &Catalog) -> Result<bool, String> {
    let p = WDParameter::new(vec![s.clone()]).map_err(|e| e.to_string())?;
    let gens = realize(&p, catalog).map_err(|e| e.to_string())?;
    Ok(skew_form(&gens).is_some())
}

/// Counts sets of pairwise distinct even-dimensional segments, each carrying an
/// invariant symplectic form in its matrix realization, of total dimension at
/// most `max_dim`.
fn brute_force_rds_count(catalog: &Catalog, max_dim: u64) -> Result<usize, String> {
    let mut blocks = Vec::new();
    for s in catalog_segments(catalog, max_dim) {
        if s.dimension() % 2 == 0 && matrix_symplectic(&s, catalog)? {
            blocks.push(s.dimension());
        }
    }
    let mut count = 0;
    for mask in 1u32..(1 << blocks.len()) {
        let total: u64 = (0..blocks.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| blocks[i])
            .sum();
        if total <= max_dim {
            count += 1;
        }
    }
    Ok(count)
}

fn main_theorem_sweep() -> Outcome {
    let start = Instant::now();
    let catalog = builtin_catalog();
    let specs = enumerate_rds_specs(&catalog, 8);
    let expected = brute_force_rds_count(&catalog, 8)?;
    ensure(specs.len() == expected, || {
        format!("enumerated {} specs, brute force finds {expected}", specs.len())
    })?;
    let mut worst = 0.0f64;
    for spec in &specs {
        let report =
            check_conjecture_instance(spec, true, &catalog).map_err(|e| format!("{}: {e}", spec.describe()))?;
        ensure(
            report.status == Status::Ok && report.oracle_agreement == Some(true),
            || format!("{}: status {:?}", spec.describe(), report.status),
        )?;
        let p = WDParameter::new(spec.segments.clone()).map_err(|e| e.to_string())?;
        let gens = realize(&p, &catalog).map_err(|e| e.to_string())?;
        let j = skew_form(&gens).ok_or_else(|| format!("{}: no invariant symplectic form", spec.describe()))?;
        let defect = sp_defect(&gens, &j);
        worst = worst.max(defect);
        ensure(defect <= TOL, || {
            format!("{}: g^T J g - J = {defect:e}", spec.describe())
        })?;
        let isotropic = invariant_isotropic_exists(&gens, &j).map_err(|e| format!("{}: {e}", spec.describe()))?;
        ensure(!isotropic, || {
            format!("{}: invariant isotropic subspace found", spec.describe())
        })?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} specs (brute force agrees), max defect {worst:.1e}, {:.2}s",
        specs.len(),
        elapsed.as_secs_f64()
    ))
}

fn proposition_reproduction() -> Outcome {
    let catalog = builtin_catalog();
    let mut checked = 0;
    for label in catalog.labels() {
        for k in 1..=4u32 {
            let s = Segment::new(label.clone(), k).map_err(|e| e.to_string())?;
            if s.dimension() % 2 == 1 || !is_linear_distinguished(&s).map_err(|e| e.to_string())? {
                continue;
            }
            let gens = realize(&WDParameter::new(vec![s.clone()]).unwrap(), &catalog).map_err(|e| e.to_string())?;
            let forms = invariant_forms(&gens);
            ensure(forms.len() == 1, || format!("{s}: {} invariant forms", forms.len()))?;
            let f = &forms[0];
            ensure(f.symmetry == Symmetry::Skew && f.nondegenerate, || {
                format!("{s}: form is {} (nondegenerate: {})", f.symmetry, f.nondegenerate)
            })?;
            ensure(sp_defect(&gens, f) <= TOL, || format!("{s}: generators leave Sp"))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no distinguished segments".into())?;
    let control = parse_param("St(2,q8)", &catalog).map_err(|e| e.to_string())?;
    let forms = invariant_forms(&realize(&control, &catalog).map_err(|e| e.to_string())?);
    let symmetric = forms
        .iter()
        .filter(|f| f.symmetry == Symmetry::Symmetric)
        .cloned()
        .collect::<Vec<_>>();
    ensure(!forms.iter().any(|f| f.symmetry == Symmetry::Skew), || {
        "St(2,q8) has a skew form".into()
    })?;
    ensure(
        find_nondegenerate(&symmetric).is_some_and(|f| f.symmetry == Symmetry::Symmetric),
        || "St(2,q8) has no nondegenerate symmetric form".into(),
    )?;
    Ok(format!(
        "{checked} distinguished segments with a unique skew form; St(2,q8) symmetric only"
    ))
}

fn form_parity() -> Outcome {
    let mut row = Vec::new();
    for k in 1..=8usize {
        let f = invariant_form_sl2(k).map_err(|e| format!("k={k}: {e}"))?;
        ensure(f.is_exact(), || format!("k={k}: not exact"))?;
        let expected = if k % 2 == 1 {
            Symmetry::Symmetric
        } else {
            Symmetry::Skew
        };
        ensure(f.symmetry == expected && f.nondegenerate, || {
            format!("k={k}: {}", f.symmetry)
        })?;
        row.push(format!("{k}:{}", if k % 2 == 1 { "sym" } else { "skew" }));
    }
    // Uniqueness: the full space of invariant forms on S(k) is one-dimensional.
    for k in 1..=8usize {
        let t = periodlab::matrix::sl2_sym_power_action(k);
        let gens =
            GeneratorSet::from_matrices(k, vec![t.exp_e().into(), t.exp_f().into()]).map_err(|e| e.to_string())?;
        let n = invariant_forms(&gens).len();
        ensure(n == 1, || format!("k={k}: {n}-dimensional form space"))?;
    }
    Ok(row.join(" "))
}

fn conjugator_suite() -> Outcome {
    let mut total = 0;
    for n in 1..=6usize {
        for parts in even_compositions(2 * n) {
            let perm = conjugator_for_partition(&parts).map_err(|e| format!("{parts:?}: {e}"))?;
            let ok =
                conjugates_to_partition(&perm, &parts, PermConvention::SourceColumns).map_err(|e| e.to_string())?;
            ensure(ok, || format!("{parts:?}: postcondition fails"))?;
            total += 1;
        }
        let ok = conjugates_to_partition(&w_plus(n), &vec![2; n], PermConvention::SourceColumns)
            .map_err(|e| e.to_string())?;
        ensure(ok, || format!("w_plus({n}) fails for the all-2 partition"))?;
    }
    // 2^(n-1) compositions of n into positive parts, summed over n = 1..6.
    ensure(total == 63, || format!("{total} partitions"))?;
    Ok(format!(
        "{total} even compositions of 2n <= 12; w_plus(1..6) under P[w(j), j] = 1"
    ))
}

fn oracle_symbolic_equivalence() -> Outcome {
    let catalog = builtin_catalog();
    let params: Vec<WDParameter> = enumerate_parameters(&catalog, 8, 2)
        .into_iter()
        .filter(factors_through_sp_symbolic)
        .collect();
    let mut disagreements = Vec::new();
    let mut elliptic = 0;
    for p in &params {
        let gens = realize(p, &catalog).map_err(|e| format!("{p}: {e}"))?;
        let Some(j) = skew_form(&gens) else {
            disagreements.push(format!("{p}: no invariant symplectic form"));
            continue;
        };
        let isotropic = invariant_isotropic_exists(&gens, &j).map_err(|e| format!("{p}: {e}"))?;
        if is_x_elliptic_symbolic(p) == isotropic {
            disagreements.push(p.to_string());
        }
        elliptic += usize::from(!isotropic);
    }
    ensure(disagreements.is_empty(), || {
        format!("disagreements: {}", disagreements.join("; "))
    })?;
    Ok(format!(
        "{} symplectic parameters ({elliptic} elliptic), zero disagreements",
        params.len()
    ))
}

fn indicator_gap(m: &IrrepModel, expected: i8) -> Result<f64, String> {
    let got = fs_indicator(m).map_err(|e| format!("{}: {e}", m.id))?;
    ensure(got == expected, || {
        format!("{}: indicator {got}, expected {expected}", m.id)
    })?;
    let v = fs_indicator_value(m);
    let gap = (v.re - f64::from(expected)).abs().max(v.im.abs());
    ensure(gap < 1e-6, || format!("{}: rounding gap {gap:e}", m.id))?;
    Ok(gap)
}

fn fs_ground_truth() -> Outcome {
    let mut worst = 0.0f64;
    for (id, expected) in [("q8", -1), ("s3", 1), ("c3", 0)] {
        let m = builtin_model(id).map_err(|e| e.to_string())?;
        worst = worst.max(indicator_gap(&m, expected)?);
    }
    for k in 1..=6usize {
        let m = sl2_surrogate(k).map_err(|e| e.to_string())?;
        worst = worst.max(indicator_gap(&m, if k % 2 == 1 { 1 } else { -1 })?);
    }
    Ok(format!("q8, s3, chi3 and S(1..6); max rounding gap {worst:.1e}"))
}

fn arthur_layer() -> Outcome {
    let catalog = builtin_catalog();
    let q8 = catalog.label("q8").map_err(|e| e.to_string())?;
    let a = AParameter::new(vec![ASummand {
        cuspidal: q8,
        b: 1,
        a: 2,
    }])
    .map_err(|e| e.to_string())?;
    let twists: BTreeSet<Rational64> = arthur_to_l(&a).segments().iter().map(|s| s.twist).collect();
    ensure(
        twists == BTreeSet::from([Rational64::new(1, 2), Rational64::new(-1, 2)]),
        || format!("twists {twists:?}"),
    )?;

    let labels: Vec<_> = catalog.labels().cloned().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut with_arthur, mut distinguished) = (0, 0);
    let family = 64;
    for _ in 0..family {
        let summands = (0..rng.gen_range(1..=4))
            .map(|_| ASummand {
                cuspidal: labels[rng.gen_range(0..labels.len())].clone(),
                b: rng.gen_range(1..=4),
                a: rng.gen_range(1..=3),
            })
            .collect();
        let a = AParameter::new(summands).map_err(|e| e.to_string())?;
        let l = arthur_to_l(&a);
        ensure(dimension(&l) == a.dimension(), || {
            format!("dimension {} became {}", a.dimension(), dimension(&l))
        })?;
        if a.summands.iter().any(|s| s.a >= 2) {
            with_arthur += 1;
            ensure(!is_x_distinguished(&a), || {
                format!("{l} is X-distinguished with a >= 2")
            })?;
        } else if is_x_distinguished(&a) {
            distinguished += 1;
        }
    }
    ensure(with_arthur > 0, || "family has no summand with a >= 2".into())?;
    Ok(format!(
        "{family} random A-parameters: dimension preserved, {with_arthur} with a >= 2 rejected, {distinguished} distinguished"
    ))
}

const CORPUS: &[&str] = &[
    "0",
    "triv",
    "chi3",
    "chi3bar",
    "s3",
    "q8",
    "q8b",
    "d4",
    "St(2,triv)",
    "St(3,q8)",
    "St(4,s3)",
    "St(2,d4)",
    "St(8,triv)",
    "St(3,q8) (+) St(2,triv)",
    "chi3 (+) chi3bar",
    "q8 (+) q8",
    "St(2,s3) (+) q8b (+) St(4,triv)",
    "q8 * nu^1/2 (+) q8 * nu^-1/2",
    "St(2,chi3) * nu^3 (+) St(2,chi3bar) * nu^-3",
    "  St ( 2 , s3 )*nu ^ +4/2",
    "d4 (+) triv # trailing comment",
    "St(3,triv) (+) St(3,triv) (+) St(2,q8)",
    "St(5,q8b) (+) chi3 * nu^-7/3",
];

/// Malformed inputs with the span each error must carry.
const MALFORMED: &[(&str, SourceSpan)] = &[
    (
        "St(3,q8",
        SourceSpan {
            line: 1,
            column: 7,
            length: 1,
        },
    ),
    (
        "St(2 q8)",
        SourceSpan {
            line: 1,
            column: 6,
            length: 2,
        },
    ),
    (
        "q8 (+) foo",
        SourceSpan {
            line: 1,
            column: 8,
            length: 3,
        },
    ),
    (
        "St(0,q8)",
        SourceSpan {
            line: 1,
            column: 4,
            length: 1,
        },
    ),
    (
        "q8 * nu^1/0",
        SourceSpan {
            line: 1,
            column: 11,
            length: 1,
        },
    ),
    (
        "q8 $",
        SourceSpan {
            line: 1,
            column: 4,
            length: 1,
        },
    ),
    (
        "q8 (+)\n  )",
        SourceSpan {
            line: 2,
            column: 3,
            length: 1,
        },
    ),
];

fn ingestion() -> Outcome {
    let catalog = builtin_catalog();
    for expr in CORPUS {
        let p = parse_param(expr, &catalog).map_err(|e| format!("{expr:?}: {e}"))?;
        let printed = print_param(&p);
        let again = parse_param(&printed, &catalog).map_err(|e| format!("{printed:?}: {e}"))?;
        ensure(again == p && print_param(&again) == printed, || {
            format!("{expr:?} does not round-trip")
        })?;
    }
    for (expr, span) in MALFORMED {
        let err = parse_param(expr, &catalog)
            .err()
            .ok_or_else(|| format!("{expr:?} parsed"))?;
        ensure(err.span() == *span, || {
            format!("{expr:?}: span {}, expected {span}", err.span())
        })?;
        if !matches!(err, NotationError::Parse(_) | NotationError::UnknownLabel { .. }) {
            return Err(format!("{expr:?}: unexpected error kind"));
        }
    }

    let mismatch = "[cuspidal.bad]\ndim = 2\ntype = \"orthogonal\"\nmodel = \"q8\"\n";
    let dangling = "[cuspidal.chi]\ndim = 1\ntype = \"none\"\ndual = \"psi\"\n";
    let unpaired = "[cuspidal.chi]\ndim = 1\ntype = \"none\"\ndual = \"psi\"\n\n[cuspidal.psi]\ndim = 1\ntype = \"none\"\ndual = \"eta\"\n\n[cuspidal.eta]\ndim = 1\ntype = \"none\"\ndual = \"psi\"\n";
    let rejected = [
        (
            mismatch,
            matches!(
                load_catalog(mismatch),
                Err(CatalogLoadError::Consistency {
                    error: CatalogError::IndicatorMismatch { .. },
                    ..
                })
            ),
        ),
        (
            dangling,
            matches!(
                load_catalog(dangling),
                Err(CatalogLoadError::Consistency {
                    error: CatalogError::DanglingDual { .. },
                    ..
                })
            ),
        ),
        (
            unpaired,
            matches!(load_catalog(unpaired), Err(CatalogLoadError::Consistency { .. })),
        ),
    ];
    for (text, ok) in rejected {
        ensure(ok, || format!("catalog accepted or misreported:\n{text}"))?;
    }
    Ok(format!(
        "{} expressions round-trip, {} malformed inputs with spans, {} inconsistent catalogs rejected",
        CORPUS.len(),
        MALFORMED.len(),
        rejected.len()
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("main-theorem sweep (dim <= 8, oracle)", main_theorem_sweep),
        ("unique skew form on distinguished segments", proposition_reproduction),
        ("form parity k = 1..8", form_parity),
        ("conjugators for 2n <= 12 and w_plus", conjugator_suite),
        ("oracle/symbolic ellipticity equivalence", oracle_symbolic_equivalence),
        ("Frobenius-Schur indicators", fs_ground_truth),
        ("Arthur layer", arthur_layer),
        ("ingestion: round-trip, spans, catalogs", ingestion),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS  [{}] {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL  [{}] {name}: {reason}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
