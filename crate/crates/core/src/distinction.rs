//! Distinction criteria for segments, relative discrete series built from
//! them, and the symplectic / elliptic predicates on parameters, with a
//! matrix-level oracle for the latter two.

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{invariant_isotropic_exists, Catalog, OracleError};
use crate::matrix::{
    find_nondegenerate, invariant_skew_forms, is_in_sp, realize, symplectic_j, BilinearForm, MatrixError,
};
use crate::param::{
    arthur_to_l, dimension, is_tempered, key_counts, segment_self_duality, segments_equivalent, AParameter,
    CuspidalLabel, ParamError, Segment, SelfDualityType, WDParameter,
};

/// Which of `L(s, ρ, ∧²)` and `L(s, ρ, Sym²)` has a pole at `s = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PoleProfile {
    pub wedge_pole: bool,
    pub sym_pole: bool,
}

pub fn pole_profile(rho: &CuspidalLabel) -> PoleProfile {
    match rho.sd_type {
        SelfDualityType::NotSelfDual => PoleProfile {
            wedge_pole: false,
            sym_pole: false,
        },
        SelfDualityType::Symplectic => PoleProfile {
            wedge_pole: true,
            sym_pole: false,
        },
        SelfDualityType::Orthogonal => PoleProfile {
            wedge_pole: false,
            sym_pole: true,
        },
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistinctionError {
    #[error("segment {0} is twisted")]
    NonTempered(String),
    #[error("segment {0} has odd dimension")]
    OddDimension(String),
}

/// Whether `St(k, ρ)` has a linear period: for k odd, ρ must have a pole of
/// `L(s, ρ, ∧²)` (so r is even); for k even, a pole of `L(s, ρ, Sym²)`.
pub fn is_linear_distinguished(s: &Segment) -> Result<bool, DistinctionError> {
    if !s.twist.is_zero() {
        return Err(DistinctionError::NonTempered(s.to_string()));
    }
    if s.dimension() % 2 == 1 {
        return Err(DistinctionError::OddDimension(s.to_string()));
    }
    let poles = pole_profile(&s.cuspidal);
    Ok(if s.k % 2 == 1 {
        s.cuspidal.dim.is_multiple_of(2) && poles.wedge_pole
    } else {
        poles.sym_pole
    })
}

/// Data for a relative discrete series: distinct segments of even dimension summing to 2n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RDSSpec {
    pub n: u32,
    pub segments: Vec<Segment>,
}

impl RDSSpec {
    pub fn new(n: u32, segments: Vec<Segment>) -> Self {
        RDSSpec { n, segments }
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.segments.iter().map(ToString::to_string).collect();
        format!("n={}: {}", self.n, parts.join(" (+) "))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RdsError {
    #[error("segment dimensions sum to {found}, expected 2n = {expected}")]
    DimensionMismatch { expected: u64, found: u64 },
    #[error("segment {index} has odd dimension {dim}")]
    OddBlock { index: usize, dim: u64 },
    #[error("segments {first} and {second} are equivalent")]
    DuplicateSegment { first: usize, second: usize },
    #[error("segment {0} is twisted")]
    Twisted(usize),
    #[error("segment {0} is not linearly distinguished")]
    NotDistinguished(usize),
    #[error(transparent)]
    Param(#[from] ParamError),
}

/// Checks the conditions for the segments to assemble into a relative discrete
/// series and returns the resulting parameter.
pub fn validate_rds(spec: &RDSSpec) -> Result<WDParameter, RdsError> {
    let found: u64 = spec.segments.iter().map(Segment::dimension).sum();
    let expected = 2 * u64::from(spec.n);
    if found != expected || spec.n == 0 {
        return Err(RdsError::DimensionMismatch { expected, found });
    }
    for (index, s) in spec.segments.iter().enumerate() {
        if s.dimension() % 2 == 1 {
            return Err(RdsError::OddBlock {
                index,
                dim: s.dimension(),
            });
        }
    }
    for (i, a) in spec.segments.iter().enumerate() {
        for (j, b) in spec.segments.iter().enumerate().skip(i + 1) {
            if segments_equivalent(a, b)? {
                return Err(RdsError::DuplicateSegment { first: i, second: j });
            }
        }
    }
    for (index, s) in spec.segments.iter().enumerate() {
        match is_linear_distinguished(s) {
            Ok(true) => {}
            Ok(false) => return Err(RdsError::NotDistinguished(index)),
            Err(DistinctionError::NonTempered(_)) => return Err(RdsError::Twisted(index)),
            Err(DistinctionError::OddDimension(_)) => unreachable!("odd blocks rejected above"),
        }
    }
    Ok(WDParameter::new(spec.segments.clone())?)
}

/// Whether the parameter preserves a symplectic form: it must split into
/// symplectic-type segments, orthogonal-type segments in even multiplicity,
/// and pairs of mutually dual non-self-dual segments.
pub fn factors_through_sp_symbolic(p: &WDParameter) -> bool {
    let counts = key_counts(p);
    p.multiplicities()
        .into_iter()
        .all(|(s, m)| match segment_self_duality(s) {
            SelfDualityType::Symplectic => true,
            SelfDualityType::Orthogonal => m % 2 == 0,
            SelfDualityType::NotSelfDual => counts.get(&s.dual_key()).copied().unwrap_or(0) == m,
        })
}

/// Elliptic for the symplectic group: symplectic, every segment of symplectic
/// type, and no segment repeated.
pub fn is_x_elliptic_symbolic(p: &WDParameter) -> bool {
    factors_through_sp_symbolic(p)
        && p.segments()
            .iter()
            .all(|s| segment_self_duality(s) == SelfDualityType::Symplectic)
        && p.multiplicities().iter().all(|(_, m)| *m == 1)
}

/// Factors through `Sp(2n, C) × SL(2, C) → GL(2n, C)`, trivial on the SL(2) factor.
pub fn is_x_distinguished(a: &AParameter) -> bool {
    if a.summands.iter().any(|s| s.a != 1) {
        return false;
    }
    let l = arthur_to_l(a);
    is_tempered(&l) && factors_through_sp_symbolic(&l)
}

#[derive(Clone, Debug)]
pub struct DistinguishedMorphismRecord {
    pub n: u32,
    pub dual_group_descriptor: String,
    pub x_dual_group_descriptor: String,
    pub sl2_factor: String,
    pub embedding_form: BilinearForm,
    pub metadata: String,
}

pub fn distinguished_morphism(n: u32) -> DistinguishedMorphismRecord {
    assert!(n >= 1, "distinguished morphism needs n >= 1");
    DistinguishedMorphismRecord {
        n,
        dual_group_descriptor: format!("GL({},C)", 2 * n),
        x_dual_group_descriptor: format!("Sp({},C)", 2 * n),
        sl2_factor: "trivial".to_string(),
        embedding_form: symplectic_j(2 * n as usize).expect("2n is even"),
        metadata:
            "minimal θ-split parabolic is a Borel with torus Levi M0, so the principal SL(2) into M0^∨ is trivial"
                .to_string(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Error,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// One named check with the result it instantiates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub theorem_tag: String,
    pub details: String,
}

impl Check {
    pub fn new(name: &str, verdict: Verdict, theorem_tag: &str, details: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            verdict,
            theorem_tag: theorem_tag.to_string(),
            details: details.into(),
        }
    }
}

/// Matrix-level answers to the symplectic and elliptic questions.
#[derive(Clone, Debug)]
pub struct OracleVerdict {
    /// Some generator-invariant nondegenerate skew form exists and every
    /// generator lies in its symplectic group.
    pub factors_through_sp: bool,
    /// No invariant isotropic subspace for that form; `None` without a form.
    pub elliptic: Option<bool>,
    pub form: Option<BilinearForm>,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleFailure {
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

pub fn oracle_classify(p: &WDParameter, catalog: &Catalog) -> Result<OracleVerdict, OracleFailure> {
    let gens = realize(p, catalog)?;
    let Some(form) = find_nondegenerate(&invariant_skew_forms(&gens)) else {
        return Ok(OracleVerdict {
            factors_through_sp: false,
            elliptic: None,
            form: None,
        });
    };
    for g in &gens.generators {
        if !is_in_sp(g, &form)? {
            return Ok(OracleVerdict {
                factors_through_sp: false,
                elliptic: None,
                form: Some(form),
            });
        }
    }
    let isotropic = invariant_isotropic_exists(&gens, &form)?;
    Ok(OracleVerdict {
        factors_through_sp: true,
        elliptic: Some(!isotropic),
        form: Some(form),
    })
}

impl OracleVerdict {
    /// Same answers as the symbolic predicates.
    pub fn agrees_with(&self, p: &WDParameter) -> bool {
        self.factors_through_sp == factors_through_sp_symbolic(p)
            && self.elliptic.unwrap_or(false) == is_x_elliptic_symbolic(p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Failed,
    OracleDisagreement,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjectureReport {
    pub input: String,
    pub checks: Vec<Check>,
    pub oracle_agreement: Option<bool>,
    pub status: Status,
}

/// Validates the spec, then checks that the resulting parameter is tempered,
/// has dimension 2n, is symplectic and is elliptic; optionally confirms the
/// last two with the matrix oracle.
pub fn check_conjecture_instance(
    spec: &RDSSpec,
    use_oracle: bool,
    catalog: &Catalog,
) -> Result<ConjectureReport, RdsError> {
    let p = validate_rds(spec)?;
    let factors = factors_through_sp_symbolic(&p);
    let elliptic = is_x_elliptic_symbolic(&p);
    let mut checks = vec![
        Check::new("tempered", Verdict::from_bool(is_tempered(&p)), "rds-construction", ""),
        Check::new(
            "dimension",
            Verdict::from_bool(dimension(&p) == 2 * u64::from(spec.n)),
            "rds-construction",
            format!("{}", dimension(&p)),
        ),
        Check::new(
            "factors_through_sp",
            Verdict::from_bool(factors),
            "symplectic-image",
            "",
        ),
        Check::new("x_elliptic", Verdict::from_bool(elliptic), "x-elliptic", ""),
    ];
    let mut oracle_agreement = None;
    if use_oracle {
        match oracle_classify(&p, catalog) {
            Ok(v) => {
                checks.push(Check::new(
                    "oracle_symplectic_form",
                    Verdict::from_bool(v.factors_through_sp),
                    "symplectic-image",
                    "g^T J g = J for every generator",
                ));
                checks.push(Check::new(
                    "oracle_no_isotropic_subspace",
                    Verdict::from_bool(v.elliptic == Some(true)),
                    "x-elliptic",
                    "",
                ));
                oracle_agreement = Some(v.agrees_with(&p));
            }
            Err(e) => checks.push(Check::new("oracle", Verdict::Error, "oracle", e.to_string())),
        }
    }
    let status = if oracle_agreement == Some(false) {
        Status::OracleDisagreement
    } else if checks.iter().all(|c| c.verdict == Verdict::Pass) {
        Status::Ok
    } else {
        Status::Failed
    };
    Ok(ConjectureReport {
        input: spec.describe(),
        checks,
        oracle_agreement,
        status,
    })
}

/// Untwisted segments `St(k, ρ)` over the catalog with dimension at most `max_dim`,
/// in canonical order.
pub fn catalog_segments(catalog: &Catalog, max_dim: u64) -> Vec<Segment> {
    let mut out = Vec::new();
    for label in catalog.labels() {
        for k in 1.. {
            if u64::from(label.dim) * u64::from(k) > max_dim {
                break;
            }
            out.push(Segment::new(label.clone(), k).expect("k is positive"));
        }
    }
    out.sort();
    out
}

/// Every valid relative-discrete-series spec of total dimension at most `max_dim`.
///
/// Specs are sets of distinct distinguished segments, so it suffices to
/// enumerate subsets of the distinguished catalog segments.
pub fn enumerate_rds_specs(catalog: &Catalog, max_dim: u64) -> Vec<RDSSpec> {
    let pool: Vec<Segment> = catalog_segments(catalog, max_dim)
        .into_iter()
        .filter(|s| is_linear_distinguished(s).unwrap_or(false))
        .collect();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    subsets(&pool, 0, 0, max_dim, &mut chosen, &mut out);
    out
}

fn subsets(
    pool: &[Segment],
    start: usize,
    total: u64,
    max_dim: u64,
    chosen: &mut Vec<Segment>,
    out: &mut Vec<RDSSpec>,
) {
    for i in start..pool.len() {
        let t = total + pool[i].dimension();
        if t > max_dim {
            continue;
        }
        chosen.push(pool[i].clone());
        let spec = RDSSpec::new((t / 2) as u32, chosen.clone());
        if validate_rds(&spec).is_ok() {
            out.push(spec);
        }
        subsets(pool, i + 1, t, max_dim, chosen, out);
        chosen.pop();
    }
}

/// Multisets of catalog segments with total dimension at most `max_dim` and
/// every multiplicity at most `max_mult`, in a fixed order.
pub fn enumerate_parameters(catalog: &Catalog, max_dim: u64, max_mult: usize) -> Vec<WDParameter> {
    let pool = catalog_segments(catalog, max_dim);
    let mut out = Vec::new();
    let mut chosen: Vec<Segment> = Vec::new();
    multisets(&pool, 0, 0, max_dim, max_mult, &mut chosen, &mut out);
    out
}

fn multisets(
    pool: &[Segment],
    start: usize,
    total: u64,
    max_dim: u64,
    max_mult: usize,
    chosen: &mut Vec<Segment>,
    out: &mut Vec<WDParameter>,
) {
    for i in start..pool.len() {
        let d = pool[i].dimension();
        for m in 1..=max_mult {
            let t = total + d * m as u64;
            if t > max_dim {
                break;
            }
            chosen.extend(std::iter::repeat_n(pool[i].clone(), m));
            out.push(WDParameter::new(chosen.clone()).expect("one catalog"));
            multisets(pool, i + 1, t, max_dim, max_mult, chosen, out);
            chosen.truncate(chosen.len() - m);
        }
    }
}
