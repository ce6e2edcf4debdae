use std::collections::BTreeMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use super::{builtin_model, fs_indicator, IrrepModel, SL2_SURROGATE_BOUND};
use crate::param::{CuspidalLabel, SelfDualityType};

/// Identity of a catalog; labels from different catalogs never compare equal.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CatalogId(u64);

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

impl CatalogId {
    pub const BUILTIN: CatalogId = CatalogId(0);

    fn fresh() -> Self {
        CatalogId(NEXT_ID.fetch_add(1, Ordering::Relaxed))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatalogError {
    #[error("unknown cuspidal label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` belongs to a different catalog")]
    ForeignLabel(String),
    #[error("`{0}` is not a valid label name")]
    InvalidName(String),
    #[error("label `{0}` is declared twice")]
    DuplicateLabel(String),
    #[error("label `{0}` must have positive dimension")]
    ZeroDimension(String),
    #[error("label `{0}` is symplectic but has odd dimension {1}")]
    SymplecticOddDim(String, u32),
    #[error("label `{0}` has type none but declares no dual")]
    MissingDual(String),
    #[error("label `{label}` names dual `{dual}`, which is not declared")]
    DanglingDual { label: String, dual: String },
    #[error("label `{label}` names dual `{dual}`, which does not name it back with matching dimension and type")]
    DualMismatch { label: String, dual: String },
    #[error("self-dual label `{label}` names a different dual `{dual}`")]
    SelfDualWithDual { label: String, dual: String },
    #[error("label `{label}` uses unknown model `{model}`")]
    UnknownModel { label: String, model: String },
    #[error("label `{label}` has dimension {declared} but model `{model}` has dimension {actual}")]
    DimensionMismatch {
        label: String,
        model: String,
        declared: u32,
        actual: usize,
    },
    #[error("label `{label}` is declared {declared} but its model has Frobenius–Schur indicator {indicator}")]
    IndicatorMismatch {
        label: String,
        declared: SelfDualityType,
        indicator: i8,
    },
    #[error("model for label `{label}` is unusable: {message}")]
    BadModel { label: String, message: String },
    #[error("dual labels `{0}` and `{1}` must both have models on one group with conjugate characters")]
    DualModelMismatch(String, String),
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub label: Arc<CuspidalLabel>,
    pub model: Option<Arc<IrrepModel>>,
}

/// Declaration of one label before validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntrySpec {
    pub name: String,
    pub dim: u32,
    pub sd_type: SelfDualityType,
    pub dual: Option<String>,
    pub model: Option<String>,
    pub unitary: bool,
}

impl EntrySpec {
    pub fn new(name: &str, dim: u32, sd_type: SelfDualityType) -> Self {
        EntrySpec {
            name: name.to_string(),
            dim,
            sd_type,
            dual: None,
            model: None,
            unitary: true,
        }
    }

    pub fn dual(mut self, dual: &str) -> Self {
        self.dual = Some(dual.to_string());
        self
    }

    pub fn model(mut self, model: &str) -> Self {
        self.model = Some(model.to_string());
        self
    }
}

#[derive(Clone, Debug)]
pub struct Catalog {
    id: CatalogId,
    entries: BTreeMap<String, CatalogEntry>,
    pub sl2_surrogate_bound: usize,
}

/// Catalogs are equal when they declare the same labels, regardless of identity.
impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.sl2_surrogate_bound == other.sl2_surrogate_bound
            && self.entries.len() == other.entries.len()
            && self.entries.iter().zip(&other.entries).all(|((n1, e1), (n2, e2))| {
                let (a, b) = (&e1.label, &e2.label);
                n1 == n2
                    && a.dim == b.dim
                    && a.sd_type == b.sd_type
                    && a.dual_name == b.dual_name
                    && a.unitary == b.unitary
                    && a.model == b.model
            })
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Names the expression grammar claims for itself.
const RESERVED: [&str; 2] = ["St", "nu"];

impl Catalog {
    pub fn from_specs(specs: Vec<EntrySpec>) -> Result<Catalog, CatalogError> {
        Self::build(CatalogId::fresh(), specs)
    }

    fn build(id: CatalogId, specs: Vec<EntrySpec>) -> Result<Catalog, CatalogError> {
        let mut by_name: BTreeMap<String, EntrySpec> = BTreeMap::new();
        for spec in specs {
            if !is_identifier(&spec.name) || RESERVED.contains(&spec.name.as_str()) {
                return Err(CatalogError::InvalidName(spec.name));
            }
            if by_name.contains_key(&spec.name) {
                return Err(CatalogError::DuplicateLabel(spec.name));
            }
            by_name.insert(spec.name.clone(), spec);
        }

        let mut entries = BTreeMap::new();
        for spec in by_name.values() {
            let label = validate_label(spec, &by_name)?;
            let model = match &spec.model {
                Some(m) => Some(validate_model(spec, m)?),
                None => None,
            };
            entries.insert(
                spec.name.clone(),
                CatalogEntry {
                    label: Arc::new(CuspidalLabel { catalog: id, ..label }),
                    model,
                },
            );
        }

        for entry in entries.values() {
            let label = &entry.label;
            if label.is_self_dual() || label.name > label.dual_name {
                continue;
            }
            let partner = &entries[&label.dual_name];
            let ok = match (&entry.model, &partner.model) {
                (None, None) => true,
                (Some(a), Some(b)) => {
                    Arc::ptr_eq(&a.group, &b.group)
                        && a.character()
                            .iter()
                            .zip(b.character())
                            .all(|(x, y)| (x.conj() - y).norm() < super::CHARACTER_TOLERANCE)
                }
                _ => false,
            };
            if !ok {
                return Err(CatalogError::DualModelMismatch(
                    label.name.clone(),
                    label.dual_name.clone(),
                ));
            }
        }

        Ok(Catalog {
            id,
            entries,
            sl2_surrogate_bound: SL2_SURROGATE_BOUND,
        })
    }

    pub fn id(&self) -> CatalogId {
        self.id
    }

    pub fn label(&self, name: &str) -> Result<Arc<CuspidalLabel>, CatalogError> {
        self.entry(name).map(|e| e.label.clone())
    }

    pub fn entry(&self, name: &str) -> Result<&CatalogEntry, CatalogError> {
        self.entries
            .get(name)
            .ok_or_else(|| CatalogError::UnknownLabel(name.to_string()))
    }

    /// The model behind `label`, checking that the label belongs here.
    pub fn model_for(&self, label: &CuspidalLabel) -> Result<Option<Arc<IrrepModel>>, CatalogError> {
        if label.catalog != self.id {
            return Err(CatalogError::ForeignLabel(label.name.clone()));
        }
        Ok(self.entry(&label.name)?.model.clone())
    }

    /// Labels in name order.
    pub fn labels(&self) -> impl Iterator<Item = &Arc<CuspidalLabel>> {
        self.entries.values().map(|e| &e.label)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn validate_label(spec: &EntrySpec, all: &BTreeMap<String, EntrySpec>) -> Result<CuspidalLabel, CatalogError> {
    let name = &spec.name;
    if spec.dim == 0 {
        return Err(CatalogError::ZeroDimension(name.clone()));
    }
    if spec.sd_type == SelfDualityType::Symplectic && spec.dim % 2 == 1 {
        return Err(CatalogError::SymplecticOddDim(name.clone(), spec.dim));
    }
    let dual_name = if spec.sd_type == SelfDualityType::NotSelfDual {
        let dual = spec
            .dual
            .as_ref()
            .ok_or_else(|| CatalogError::MissingDual(name.clone()))?;
        let partner = all.get(dual).ok_or_else(|| CatalogError::DanglingDual {
            label: name.clone(),
            dual: dual.clone(),
        })?;
        if dual == name
            || partner.dual.as_deref() != Some(name.as_str())
            || partner.sd_type != SelfDualityType::NotSelfDual
            || partner.dim != spec.dim
        {
            return Err(CatalogError::DualMismatch {
                label: name.clone(),
                dual: dual.clone(),
            });
        }
        dual.clone()
    } else {
        match &spec.dual {
            Some(d) if d != name => {
                return Err(CatalogError::SelfDualWithDual {
                    label: name.clone(),
                    dual: d.clone(),
                })
            }
            _ => name.clone(),
        }
    };
    Ok(CuspidalLabel {
        name: name.clone(),
        dim: spec.dim,
        sd_type: spec.sd_type,
        dual_name,
        unitary: spec.unitary,
        model: spec.model.clone(),
        catalog: CatalogId::default(),
    })
}

fn validate_model(spec: &EntrySpec, model_id: &str) -> Result<Arc<IrrepModel>, CatalogError> {
    let model = builtin_model(model_id).map_err(|_| CatalogError::UnknownModel {
        label: spec.name.clone(),
        model: model_id.to_string(),
    })?;
    if model.dim != spec.dim as usize {
        return Err(CatalogError::DimensionMismatch {
            label: spec.name.clone(),
            model: model_id.to_string(),
            declared: spec.dim,
            actual: model.dim,
        });
    }
    let indicator = fs_indicator(&model).map_err(|e| CatalogError::BadModel {
        label: spec.name.clone(),
        message: e.to_string(),
    })?;
    if indicator != spec.sd_type.sign() {
        return Err(CatalogError::IndicatorMismatch {
            label: spec.name.clone(),
            declared: spec.sd_type,
            indicator,
        });
    }
    Ok(model)
}

fn builtin_specs() -> Vec<EntrySpec> {
    use SelfDualityType::*;
    vec![
        EntrySpec::new("triv", 1, Orthogonal).model("trivial"),
        EntrySpec::new("chi3", 1, NotSelfDual).dual("chi3bar").model("c3"),
        EntrySpec::new("chi3bar", 1, NotSelfDual).dual("chi3").model("c3bar"),
        EntrySpec::new("s3", 2, Orthogonal).model("s3"),
        EntrySpec::new("q8", 2, Symplectic).model("q8"),
        // A second, inequivalent symplectic label on an independent copy of Q8.
        EntrySpec::new("q8b", 2, Symplectic).model("q8"),
        EntrySpec::new("d4", 2, Orthogonal).model("d4"),
    ]
}

/// The built-in labels, each backed by a finite-group model.
pub fn builtin_catalog() -> Catalog {
    static BUILTIN: OnceLock<Catalog> = OnceLock::new();
    BUILTIN
        .get_or_init(|| Catalog::build(CatalogId::BUILTIN, builtin_specs()).expect("built-in catalog is consistent"))
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use SelfDualityType::*;

    #[test]
    fn builtin_entries() {
        let c = builtin_catalog();
        let q8 = c.label("q8").unwrap();
        assert_eq!((q8.dim, q8.sd_type), (2, Symplectic));
        assert_eq!(c.label("s3").unwrap().sd_type, Orthogonal);
        let chi = c.label("chi3").unwrap();
        assert_eq!(chi.sd_type, NotSelfDual);
        assert_eq!(chi.dual_name, "chi3bar");
        assert_eq!(c.label("chi3bar").unwrap().dual_name, "chi3");
        assert_eq!(c.sl2_surrogate_bound, 6);
        assert_eq!(c.id(), CatalogId::BUILTIN);
    }

    #[test]
    fn indicator_mismatch_is_rejected() {
        let err = Catalog::from_specs(vec![EntrySpec::new("bad", 2, Orthogonal).model("q8")]).unwrap_err();
        assert!(matches!(err, CatalogError::IndicatorMismatch { indicator: -1, .. }));
    }

    #[test]
    fn dual_rules() {
        assert_eq!(
            Catalog::from_specs(vec![EntrySpec::new("x", 1, NotSelfDual)]).unwrap_err(),
            CatalogError::MissingDual("x".into())
        );
        assert!(matches!(
            Catalog::from_specs(vec![EntrySpec::new("x", 1, NotSelfDual).dual("y")]).unwrap_err(),
            CatalogError::DanglingDual { .. }
        ));
        assert!(matches!(
            Catalog::from_specs(vec![
                EntrySpec::new("x", 1, NotSelfDual).dual("y"),
                EntrySpec::new("y", 1, NotSelfDual).dual("z"),
                EntrySpec::new("z", 1, NotSelfDual).dual("y"),
            ])
            .unwrap_err(),
            CatalogError::DualMismatch { .. }
        ));
        assert!(matches!(
            Catalog::from_specs(vec![
                EntrySpec::new("x", 1, NotSelfDual).dual("y").model("c3"),
                EntrySpec::new("y", 1, NotSelfDual).dual("x").model("c3"),
            ])
            .unwrap_err(),
            CatalogError::DualModelMismatch(..)
        ));
    }

    #[test]
    fn symplectic_needs_even_dimension() {
        assert_eq!(
            Catalog::from_specs(vec![EntrySpec::new("x", 3, Symplectic)]).unwrap_err(),
            CatalogError::SymplecticOddDim("x".into(), 3)
        );
    }

    #[test]
    fn fresh_catalogs_are_distinct_but_equal() {
        let a = Catalog::from_specs(builtin_specs()).unwrap();
        let b = Catalog::from_specs(builtin_specs()).unwrap();
        assert_ne!(a.id(), b.id());
        assert_eq!(a, b);
        assert_eq!(a, builtin_catalog());
        assert_ne!(a.label("q8").unwrap(), b.label("q8").unwrap());
    }
}
