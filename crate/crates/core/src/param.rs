//! Weil–Deligne parameters as multisets of generalized Steinberg segments.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_rational::Rational64;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::groups::{Catalog, CatalogError, CatalogId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfDualityType {
    NotSelfDual,
    Orthogonal,
    Symplectic,
}

impl SelfDualityType {
    /// Frobenius–Schur sign: +1, -1, or 0.
    pub fn sign(self) -> i8 {
        match self {
            SelfDualityType::NotSelfDual => 0,
            SelfDualityType::Orthogonal => 1,
            SelfDualityType::Symplectic => -1,
        }
    }

    pub fn from_sign(sign: i8) -> Option<Self> {
        match sign {
            0 => Some(SelfDualityType::NotSelfDual),
            1 => Some(SelfDualityType::Orthogonal),
            -1 => Some(SelfDualityType::Symplectic),
            _ => None,
        }
    }

    /// Type of `rho ⊗ S(k)` when rho has this type.
    pub fn with_steinberg(self, k: u32) -> Self {
        let s = self.sign() * if k % 2 == 1 { 1 } else { -1 };
        SelfDualityType::from_sign(s).expect("sign product stays in {-1, 0, 1}")
    }
}

impl fmt::Display for SelfDualityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelfDualityType::NotSelfDual => "not self-dual",
            SelfDualityType::Orthogonal => "orthogonal",
            SelfDualityType::Symplectic => "symplectic",
        })
    }
}

/// An opaque irreducible supercuspidal parameter of GL(r).
///
/// Labels compare by name within a catalog; use [`same_label`] when two
/// labels might come from different catalogs.
#[derive(Clone, Debug, Serialize)]
pub struct CuspidalLabel {
    pub name: String,
    pub dim: u32,
    pub sd_type: SelfDualityType,
    pub dual_name: String,
    pub unitary: bool,
    pub model: Option<String>,
    #[serde(skip)]
    pub catalog: CatalogId,
}

impl CuspidalLabel {
    pub fn is_self_dual(&self) -> bool {
        self.sd_type != SelfDualityType::NotSelfDual
    }
}

impl PartialEq for CuspidalLabel {
    fn eq(&self, other: &Self) -> bool {
        self.catalog == other.catalog && self.name == other.name
    }
}

impl Eq for CuspidalLabel {}

impl Hash for CuspidalLabel {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.catalog.hash(state);
        self.name.hash(state);
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParamError {
    #[error("labels `{0}` and `{1}` come from different catalogs")]
    CrossCatalog(String, String),
    #[error("Steinberg length must be positive")]
    ZeroLength,
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Whether two labels are the same; comparing across catalogs is an error.
pub fn same_label(a: &CuspidalLabel, b: &CuspidalLabel) -> Result<bool, ParamError> {
    if a.catalog != b.catalog {
        return Err(ParamError::CrossCatalog(a.name.clone(), b.name.clone()));
    }
    Ok(a.name == b.name)
}

/// `St(k, rho) * nu^twist`, whose parameter is `phi_rho ⊗ S(k)` twisted by `|.|^twist`.
#[derive(Clone, Debug)]
pub struct Segment {
    pub cuspidal: Arc<CuspidalLabel>,
    pub k: u32,
    pub twist: Rational64,
}

impl Segment {
    pub fn new(cuspidal: Arc<CuspidalLabel>, k: u32) -> Result<Self, ParamError> {
        Self::twisted(cuspidal, k, Rational64::zero())
    }

    pub fn twisted(cuspidal: Arc<CuspidalLabel>, k: u32, twist: Rational64) -> Result<Self, ParamError> {
        if k == 0 {
            return Err(ParamError::ZeroLength);
        }
        Ok(Segment { cuspidal, k, twist })
    }

    pub fn dimension(&self) -> u64 {
        u64::from(self.cuspidal.dim) * u64::from(self.k)
    }

    pub fn name(&self) -> &str {
        &self.cuspidal.name
    }

    /// `(label name, k, twist)` of the contragredient segment, without a catalog lookup.
    pub fn dual_key(&self) -> (String, u32, Rational64) {
        (self.cuspidal.dual_name.clone(), self.k, -self.twist)
    }

    pub fn key(&self) -> (String, u32, Rational64) {
        (self.cuspidal.name.clone(), self.k, self.twist)
    }

    fn sort_key(&self) -> (u64, u32, &str, Rational64) {
        (self.dimension(), self.k, &self.cuspidal.name, self.twist)
    }
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cuspidal == other.cuspidal && self.k == other.k && self.twist == other.twist
    }
}

impl Eq for Segment {}

impl Hash for Segment {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.cuspidal.hash(state);
        self.k.hash(state);
        self.twist.hash(state);
    }
}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical order: (dimension, k, label name, twist).
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.sort_key()
            .cmp(&other.sort_key())
            .then_with(|| self.cuspidal.catalog.cmp(&other.cuspidal.catalog))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "{}", self.cuspidal.name)?;
        } else {
            write!(f, "St({},{})", self.k, self.cuspidal.name)?;
        }
        if !self.twist.is_zero() {
            write!(f, " * nu^{}", self.twist)?;
        }
        Ok(())
    }
}

/// A direct sum of segments. Stored in canonical order; order never matters.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WDParameter {
    segments: Vec<Segment>,
}

impl WDParameter {
    /// Rejects segments drawn from more than one catalog.
    pub fn new(mut segments: Vec<Segment>) -> Result<Self, ParamError> {
        if let Some(first) = segments.first() {
            for s in &segments[1..] {
                same_label(&first.cuspidal, &s.cuspidal)?;
            }
        }
        segments.sort();
        Ok(WDParameter { segments })
    }

    pub fn empty() -> Self {
        WDParameter::default()
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    /// Distinct segments with their multiplicities, in canonical order.
    pub fn multiplicities(&self) -> Vec<(&Segment, usize)> {
        let mut out: Vec<(&Segment, usize)> = Vec::new();
        for s in &self.segments {
            match out.last_mut() {
                Some((prev, m)) if *prev == s => *m += 1,
                _ => out.push((s, 1)),
            }
        }
        out
    }
}

impl fmt::Display for WDParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.segments.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.segments.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" (+) "))
    }
}

pub fn dimension(p: &WDParameter) -> u64 {
    p.segments.iter().map(Segment::dimension).sum()
}

/// Contragredient: dual label, same k, negated twist.
pub fn dual_segment(s: &Segment, catalog: &Catalog) -> Result<Segment, ParamError> {
    if s.cuspidal.catalog != catalog.id() {
        return Err(ParamError::CrossCatalog(
            s.cuspidal.name.clone(),
            "<catalog>".to_string(),
        ));
    }
    let dual = catalog.label(&s.cuspidal.dual_name)?;
    Segment::twisted(dual, s.k, -s.twist)
}

/// St(k1, rho1) ≅ St(k2, rho2) iff k1 = k2 and rho1 ≅ rho2 (twists included).
pub fn segments_equivalent(a: &Segment, b: &Segment) -> Result<bool, ParamError> {
    Ok(same_label(&a.cuspidal, &b.cuspidal)? && a.k == b.k && a.twist == b.twist)
}

/// Sign rule `sign(rho ⊗ S(k)) = sign(rho) * sign(S(k))`; twisted segments are
/// never self-dual.
pub fn segment_self_duality(s: &Segment) -> SelfDualityType {
    if !s.twist.is_zero() {
        return SelfDualityType::NotSelfDual;
    }
    s.cuspidal.sd_type.with_steinberg(s.k)
}

pub fn is_tempered(p: &WDParameter) -> bool {
    p.segments.iter().all(|s| s.twist.is_zero() && s.cuspidal.unitary)
}

/// One summand `rho ⊗ S(b) ⊗ S(a)` of an A-parameter; `a` is the Arthur SL(2) dimension.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ASummand {
    pub cuspidal: Arc<CuspidalLabel>,
    pub b: u32,
    pub a: u32,
}

impl ASummand {
    pub fn dimension(&self) -> u64 {
        u64::from(self.cuspidal.dim) * u64::from(self.b) * u64::from(self.a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AParameter {
    pub summands: Vec<ASummand>,
}

impl AParameter {
    pub fn new(summands: Vec<ASummand>) -> Result<Self, ParamError> {
        if summands.iter().any(|s| s.a == 0 || s.b == 0) {
            return Err(ParamError::ZeroLength);
        }
        if let Some(first) = summands.first() {
            for s in &summands[1..] {
                same_label(&first.cuspidal, &s.cuspidal)?;
            }
        }
        Ok(AParameter { summands })
    }

    pub fn dimension(&self) -> u64 {
        self.summands.iter().map(ASummand::dimension).sum()
    }
}

/// Evaluates the Arthur SL(2) at `diag(|w|^{1/2}, |w|^{-1/2})`: the summand
/// `(rho, b, a)` becomes `St(b, rho) * nu^{(a-1)/2 - i}` for `i = 0..a`.
pub fn arthur_to_l(a: &AParameter) -> WDParameter {
    let mut segments = Vec::new();
    for s in &a.summands {
        for i in 0..s.a {
            let twist = Rational64::new(i64::from(s.a) - 1 - 2 * i64::from(i), 2);
            segments.push(Segment {
                cuspidal: s.cuspidal.clone(),
                k: s.b,
                twist,
            });
        }
    }
    WDParameter::new(segments).expect("summands share a catalog")
}

/// Multiset of segment keys, for predicates that only need names.
pub(crate) fn key_counts(p: &WDParameter) -> BTreeMap<(String, u32, Rational64), usize> {
    let mut counts = BTreeMap::new();
    for s in &p.segments {
        *counts.entry(s.key()).or_insert(0) += 1;
    }
    counts
}
