//! Report-producing entry points behind the `periodlab` binary.

use std::fmt;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::distinction::{
    catalog_segments, check_conjecture_instance, enumerate_rds_specs, factors_through_sp_symbolic,
    is_linear_distinguished, is_x_elliptic_symbolic, oracle_classify, validate_rds, Check, RDSSpec, RdsError, Status,
    Verdict,
};
use crate::groups::{builtin_catalog, Catalog};
use crate::matrix::{
    antidiag_j, conjugates_to_partition, conjugator_for_partition, even_compositions, invariant_form_sl2, partition_j,
    sl2_sym_power_action, symplectic_j, w_plus, Matrix, PermConvention, Symmetry,
};
use crate::notation::{load_catalog, parse_param};
use crate::param::{dimension, is_tempered, segment_self_duality, Segment, SelfDualityType, WDParameter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_CATALOG: i32 = 3;
pub const EXIT_ORACLE_DISAGREEMENT: i32 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub input: String,
    pub checks: Vec<Check>,
    pub oracle_agreement: Option<bool>,
    pub exit_code: i32,
}

impl Report {
    pub fn new(input: impl Into<String>, checks: Vec<Check>, oracle_agreement: Option<bool>) -> Self {
        let exit_code = exit_code(&checks, oracle_agreement);
        Report {
            input: input.into(),
            checks,
            oracle_agreement,
            exit_code,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Exit status as a function of the report alone.
pub fn exit_code(checks: &[Check], oracle_agreement: Option<bool>) -> i32 {
    let errored = |name: &str| checks.iter().any(|c| c.name == name && c.verdict == Verdict::Error);
    if errored("parse") {
        EXIT_PARSE
    } else if errored("catalog") {
        EXIT_CATALOG
    } else if oracle_agreement == Some(false) {
        EXIT_ORACLE_DISAGREEMENT
    } else if checks.iter().any(|c| c.verdict != Verdict::Pass) {
        EXIT_CHECK_FAILED
    } else {
        EXIT_OK
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "input: {}", self.input)?;
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &self.checks {
            let verdict = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Error => "ERROR",
            };
            write!(f, "{verdict:<5}  {:<width$}  [{}]", c.name, c.theorem_tag)?;
            if !c.details.is_empty() {
                write!(f, "  {}", c.details)?;
            }
            writeln!(f)?;
        }
        if let Some(a) = self.oracle_agreement {
            writeln!(f, "oracle agreement: {}", if a { "yes" } else { "NO" })?;
        }
        write!(f, "exit code: {}", self.exit_code)
    }
}

/// The built-in catalog, or the one in the file at `path`.
pub fn resolve_catalog(path: Option<&Path>) -> Result<Catalog, String> {
    let Some(path) = path else {
        return Ok(builtin_catalog());
    };
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load_catalog(&text).map_err(|e| format!("{}:{e}", path.display()))
}

fn catalog_error(input: &str, message: String) -> Report {
    Report::new(
        input,
        vec![Check::new("catalog", Verdict::Error, "catalog", message)],
        None,
    )
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    pub oracle: bool,
}

/// Classifies one parameter expression.
pub fn run_classify(expr: &str, catalog_path: Option<&Path>, options: ClassifyOptions) -> Report {
    let catalog = match resolve_catalog(catalog_path) {
        Ok(c) => c,
        Err(e) => return catalog_error(expr, e),
    };
    let p = match parse_param(expr, &catalog) {
        Ok(p) => p,
        Err(e) => {
            return Report::new(
                expr,
                vec![Check::new("parse", Verdict::Error, "notation", e.to_string())],
                None,
            )
        }
    };
    let (checks, agreement) = classify_checks(&p, &catalog, options);
    Report::new(expr, checks, agreement)
}

fn classify_checks(p: &WDParameter, catalog: &Catalog, options: ClassifyOptions) -> (Vec<Check>, Option<bool>) {
    let mut checks = vec![
        Check::new(
            "dimension",
            Verdict::Pass,
            "segment-dimension",
            dimension(p).to_string(),
        ),
        Check::new("tempered", Verdict::from_bool(is_tempered(p)), "temperedness", ""),
    ];
    for (i, s) in p.segments().iter().enumerate() {
        checks.push(Check::new(
            &format!("segment[{i}].self_duality"),
            Verdict::Pass,
            "self-duality-sign-rule",
            format!("{s}: {}", segment_self_duality(s)),
        ));
        let (verdict, details) = match is_linear_distinguished(s) {
            Ok(true) => (Verdict::Pass, format!("{s}: distinguished")),
            Ok(false) => (Verdict::Fail, format!("{s}: not distinguished")),
            Err(e) => (Verdict::Fail, e.to_string()),
        };
        checks.push(Check::new(
            &format!("segment[{i}].linear_distinguished"),
            verdict,
            "distinction-criterion",
            details,
        ));
    }
    let factors = factors_through_sp_symbolic(p);
    let elliptic = is_x_elliptic_symbolic(p);
    checks.push(Check::new(
        "factors_through_sp",
        Verdict::from_bool(factors),
        "symplectic-image",
        "",
    ));
    checks.push(Check::new("x_elliptic", Verdict::from_bool(elliptic), "x-elliptic", ""));
    if !options.oracle {
        return (checks, None);
    }
    match oracle_classify(p, catalog) {
        Ok(v) => {
            checks.push(Check::new(
                "oracle.factors_through_sp",
                Verdict::from_bool(v.factors_through_sp),
                "symplectic-image",
                "invariant nondegenerate skew form",
            ));
            checks.push(Check::new(
                "oracle.x_elliptic",
                Verdict::from_bool(v.elliptic == Some(true)),
                "x-elliptic",
                "no invariant isotropic subspace",
            ));
            (checks, Some(v.agrees_with(p)))
        }
        Err(e) => {
            checks.push(Check::new("oracle", Verdict::Error, "oracle", e.to_string()));
            (checks, None)
        }
    }
}

/// Exact identities behind the symplectic forms, the permutation w₊, the
/// partition conjugators and the parity of invariant forms on S(k).
pub fn run_verify_matrices(max_n: usize, max_k: usize) -> Report {
    let mut checks = Vec::new();

    let antidiag_ok = (1..=2 * max_n).all(|k| {
        let j = antidiag_j(k);
        j == j.transpose() && j.mul(&j) == Matrix::identity(k)
    });
    checks.push(Check::new(
        "antidiag_j",
        Verdict::from_bool(antidiag_ok),
        "j-matrices",
        format!("k = 1..{}", 2 * max_n),
    ));

    let symplectic_ok = (1..=max_n).all(|n| symplectic_j(2 * n).is_ok_and(|f| f.is_symplectic()));
    checks.push(Check::new(
        "symplectic_j",
        Verdict::from_bool(symplectic_ok),
        "j-matrices",
        format!("m = 2..{}", 2 * max_n),
    ));

    for n in 1..=max_n {
        let all_two = vec![2; n];
        let w = w_plus(n);
        let source_cols = conjugates_to_partition(&w, &all_two, PermConvention::SourceColumns).unwrap_or(false);
        let source_rows = conjugates_to_partition(&w, &all_two, PermConvention::SourceRows).unwrap_or(false);
        checks.push(Check::new(
            &format!("w_plus[{n}]"),
            Verdict::from_bool(source_cols),
            "w-plus",
            format!(
                "{w}; source-rows convention: {}",
                if source_rows { "holds" } else { "fails" }
            ),
        ));
    }

    let mut total = 0;
    let mut failures = Vec::new();
    let mut w_plus_partitions = Vec::new();
    for n in 1..=max_n {
        for parts in even_compositions(2 * n) {
            total += 1;
            if conjugator_for_partition(&parts).is_err() {
                failures.push(format!("{parts:?}"));
            }
            if conjugates_to_partition(&w_plus(n), &parts, PermConvention::SourceColumns).unwrap_or(false) {
                w_plus_partitions.push(format!("{parts:?}"));
            }
        }
    }
    checks.push(Check::new(
        "conjugators",
        Verdict::from_bool(failures.is_empty()),
        "w-plus",
        if failures.is_empty() {
            format!(
                "{total} partitions verified; w_plus itself works for {}",
                w_plus_partitions.join(" ")
            )
        } else {
            format!("failed: {}", failures.join(" "))
        },
    ));

    for k in 1..=max_k {
        let t = sl2_sym_power_action(k);
        let relations = t.e.mul(&t.f).sub(&t.f.mul(&t.e)) == t.h;
        checks.push(Check::new(
            &format!("sl2_relations[{k}]"),
            Verdict::from_bool(relations),
            "sym-power",
            "",
        ));
        let (verdict, details) = match invariant_form_sl2(k) {
            Ok(f) => {
                let expected = if k % 2 == 1 {
                    Symmetry::Symmetric
                } else {
                    Symmetry::Skew
                };
                (
                    Verdict::from_bool(f.symmetry == expected && f.nondegenerate),
                    format!("{}", f.symmetry),
                )
            }
            Err(e) => (Verdict::Error, e.to_string()),
        };
        checks.push(Check::new(
            &format!("form_parity[{k}]"),
            verdict,
            "form-parity",
            details,
        ));
    }

    let partition_ok = (1..=max_n).all(|n| partition_j(&vec![2; n]).is_ok_and(|f| f.is_symplectic()));
    checks.push(Check::new(
        "partition_j",
        Verdict::from_bool(partition_ok),
        "j-matrices",
        "",
    ));

    Report::new(format!("verify-matrices max_n={max_n} max_k={max_k}"), checks, None)
}

/// Outcome of one sweep item: the check and whether oracle and symbolic layers agreed.
type SweepItem = (Check, Option<bool>);

fn sweep_rds(spec: &RDSSpec, catalog: &Catalog) -> SweepItem {
    let name = format!("rds[{}]", spec.describe());
    match check_conjecture_instance(spec, true, catalog) {
        Ok(r) => {
            let failed: Vec<&str> = r
                .checks
                .iter()
                .filter(|c| c.verdict != Verdict::Pass)
                .map(|c| c.name.as_str())
                .collect();
            let details = match r.status {
                Status::Ok => String::new(),
                Status::OracleDisagreement => "oracle disagrees with the symbolic layer".to_string(),
                Status::Failed => format!("failed: {}", failed.join(", ")),
            };
            let verdict = if failed.contains(&"oracle") {
                Verdict::Error
            } else {
                Verdict::from_bool(r.status == Status::Ok)
            };
            (
                Check::new(&name, verdict, "rds-construction", details),
                r.oracle_agreement,
            )
        }
        Err(e) => (
            Check::new(&name, Verdict::Error, "rds-construction", e.to_string()),
            None,
        ),
    }
}

/// A control parameter expected to be rejected as an RDS, with known
/// symplectic and elliptic answers that the oracle must reproduce.
struct Control {
    name: String,
    spec: RDSSpec,
    expect_rejection: fn(&RdsError) -> bool,
    factors: bool,
}

fn sweep_control(c: &Control, catalog: &Catalog) -> SweepItem {
    let rejected = validate_rds(&c.spec).is_err_and(|e| (c.expect_rejection)(&e));
    let p = WDParameter::new(c.spec.segments.clone()).expect("one catalog");
    let symbolic_ok = factors_through_sp_symbolic(&p) == c.factors && !is_x_elliptic_symbolic(&p);
    let (agreement, oracle_note) = match oracle_classify(&p, catalog) {
        Ok(v) => (Some(v.agrees_with(&p)), String::new()),
        Err(e) => (None, format!("; oracle: {e}")),
    };
    let verdict = if agreement.is_none() {
        Verdict::Error
    } else {
        Verdict::from_bool(rejected && symbolic_ok)
    };
    let details = format!(
        "rejected: {rejected}, factors_through_sp: {}{oracle_note}",
        factors_through_sp_symbolic(&p)
    );
    (Check::new(&c.name, verdict, "rds-construction", details), agreement)
}

fn controls(catalog: &Catalog, max_dim: u64) -> Vec<Control> {
    let segments = catalog_segments(catalog, max_dim);
    let mut out = Vec::new();
    for s in &segments {
        let distinguished = is_linear_distinguished(s).unwrap_or(false);
        if distinguished && 2 * s.dimension() <= max_dim {
            let n = s.dimension() as u32;
            out.push(Control {
                name: format!("control.duplicate[{s}]"),
                spec: RDSSpec::new(n, vec![s.clone(), s.clone()]),
                expect_rejection: |e| matches!(e, RdsError::DuplicateSegment { .. }),
                factors: true,
            });
        }
        if segment_self_duality(s) == SelfDualityType::Orthogonal && s.dimension() % 2 == 0 {
            out.push(Control {
                name: format!("control.orthogonal[{s}]"),
                spec: RDSSpec::new((s.dimension() / 2) as u32, vec![s.clone()]),
                expect_rejection: |e| matches!(e, RdsError::NotDistinguished(_)),
                factors: false,
            });
        }
        if !s.cuspidal.is_self_dual() && s.cuspidal.name < s.cuspidal.dual_name && 2 * s.dimension() <= max_dim {
            if let Ok(dual) = catalog.label(&s.cuspidal.dual_name) {
                let d = Segment::new(dual, s.k).expect("k is positive");
                out.push(Control {
                    name: format!("control.dual_pair[{s} (+) {d}]"),
                    spec: RDSSpec::new(s.dimension() as u32, vec![s.clone(), d]),
                    expect_rejection: |e| matches!(e, RdsError::OddBlock { .. } | RdsError::NotDistinguished(_)),
                    factors: true,
                });
            }
        }
    }
    out
}

/// Every relative-discrete-series spec up to `max_dim`, checked symbolically
/// and by the oracle, plus negative controls.
pub fn run_conjecture_sweep(catalog_path: Option<&Path>, max_dim: u64) -> Report {
    let input = format!("sweep max_dim={max_dim}");
    let catalog = match resolve_catalog(catalog_path) {
        Ok(c) => c,
        Err(e) => return catalog_error(&input, e),
    };
    let specs = enumerate_rds_specs(&catalog, max_dim);
    let mut items: Vec<SweepItem> = specs.par_iter().map(|s| sweep_rds(s, &catalog)).collect();
    let controls = controls(&catalog, max_dim);
    items.extend(
        controls
            .par_iter()
            .map(|c| sweep_control(c, &catalog))
            .collect::<Vec<_>>(),
    );

    let agreement = items.iter().filter_map(|(_, a)| *a).all(|a| a);
    let evaluated = items.iter().any(|(_, a)| a.is_some());
    let mut checks = vec![Check::new(
        "enumeration",
        Verdict::from_bool(!specs.is_empty()),
        "rds-construction",
        format!("{} specs, {} controls", specs.len(), controls.len()),
    )];
    checks.extend(items.into_iter().map(|(c, _)| c));
    Report::new(input, checks, evaluated.then_some(agreement))
}
