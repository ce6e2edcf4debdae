//! Matrix realizations of parameters: each segment `St(k, rho)` becomes the
//! block `rho ⊗ S(k)`, and the image is generated by the model group
//! generators together with `exp(E)` and `exp(F)`.
//!
//! A finite generating set is enough for invariant-form questions: a form
//! preserved by `exp(E)`, `exp(F)` is preserved by the Zariski closure of the
//! group they generate, which is all of SL(2).

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use serde::Serialize;

use super::dense::{DenseMatrix, Matrix};
use super::forms::{preserved_forms, BilinearForm, FormSubspace};
use super::scalar::Exact;
use super::sl2::{sl2_sym_power_action, sym_power};
use super::MatrixError;
use crate::groups::{binary_icosahedral, Catalog, FiniteGroupModel, IrrepModel, SL2_SURROGATE_BOUND};
use crate::param::{dimension, WDParameter};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Generator `index` of the group behind the duality class of `labels`.
    GroupElement {
        labels: Vec<String>,
        index: usize,
    },
    Sl2ExpE,
    Sl2ExpF,
    /// Stand-in when every generator acts trivially.
    Identity,
    /// Given directly rather than built from a parameter.
    Supplied,
}

/// One independent finite-group factor: a label together with its dual.
#[derive(Debug)]
pub struct RealizedFactor {
    pub labels: Vec<String>,
    pub group: Arc<FiniteGroupModel>,
    /// Model of each label in `labels`.
    pub models: Vec<Arc<IrrepModel>>,
    /// Action on the whole space of every group element, indexed like the group.
    pub elements: Vec<DenseMatrix>,
    /// Action on the whole space of every group generator, in generator order.
    pub generators: Vec<DenseMatrix>,
}

#[derive(Debug)]
pub struct RealizedSl2 {
    pub e: Matrix<Exact>,
    pub f: Matrix<Exact>,
    pub h: Matrix<Exact>,
    pub max_k: usize,
    /// Action of the binary icosahedral elements through `Sym^{k-1}`, present when `max_k` is
    /// within the surrogate bound.
    pub surrogate: Option<Vec<DenseMatrix>>,
}

/// Everything the finite-group oracles need beyond the bare generators.
#[derive(Debug)]
pub struct RealizedStructure {
    pub factors: Vec<RealizedFactor>,
    pub sl2: RealizedSl2,
    /// Per block: (label, k, offset, size).
    pub blocks: Vec<(String, usize, usize, usize)>,
}

#[derive(Debug)]
pub struct GeneratorSet {
    pub dim: usize,
    pub generators: Vec<DenseMatrix>,
    pub provenance: Vec<Provenance>,
    pub structure: Option<RealizedStructure>,
}

impl GeneratorSet {
    /// A bare generator set with no finite-group structure attached.
    pub fn from_matrices(dim: usize, generators: Vec<DenseMatrix>) -> Result<Self, MatrixError> {
        if let Some(bad) = generators.iter().find(|g| g.rows() != dim || g.cols() != dim) {
            return Err(MatrixError::ShapeMismatch {
                expected: dim,
                found: (bad.rows(), bad.cols()),
            });
        }
        let provenance = vec![Provenance::Supplied; generators.len()];
        Ok(GeneratorSet {
            dim,
            generators,
            provenance,
            structure: None,
        })
    }

    pub fn is_exact(&self) -> bool {
        self.generators.iter().all(DenseMatrix::is_exact)
    }
}

/// Block-diagonal matrix with `blocks[i]` on block i, or the identity where `None`.
fn block_diag(sizes: &[usize], blocks: Vec<Option<DenseMatrix>>) -> DenseMatrix {
    let parts: Vec<DenseMatrix> = sizes
        .iter()
        .zip(blocks)
        .map(|(&n, b)| b.unwrap_or_else(|| DenseMatrix::Exact(Matrix::identity(n))))
        .collect();
    DenseMatrix::direct_sum(&parts)
}

fn is_identity(m: &DenseMatrix) -> bool {
    match m {
        DenseMatrix::Exact(x) => *x == Matrix::identity(x.rows()),
        DenseMatrix::Approx(x) => x.approx_eq(&Matrix::identity(x.rows())),
    }
}

/// Realizes an untwisted parameter whose labels all carry finite-group models.
pub fn realize(p: &WDParameter, catalog: &Catalog) -> Result<GeneratorSet, MatrixError> {
    let segments = p.segments();
    let mut models: BTreeMap<String, Arc<IrrepModel>> = BTreeMap::new();
    for s in segments {
        if !s.twist.is_zero() {
            return Err(MatrixError::TwistedSegment(s.to_string()));
        }
        let model = catalog
            .model_for(&s.cuspidal)?
            .ok_or_else(|| MatrixError::MissingModel(s.cuspidal.name.clone()))?;
        models.insert(s.cuspidal.name.clone(), model);
    }

    // Group labels into duality classes keyed by the smaller name.
    let mut classes: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for s in segments {
        let l = &s.cuspidal;
        let key = l.name.clone().min(l.dual_name.clone());
        let members = classes.entry(key).or_default();
        if !members.contains(&l.name) {
            members.push(l.name.clone());
        }
    }
    let mut trivial_class: Option<&String> = None;
    for members in classes.values() {
        let group = &models[&members[0]].group;
        for other in &members[1..] {
            if !Arc::ptr_eq(group, &models[other].group) {
                return Err(MatrixError::ModelGroupMismatch(members[0].clone(), other.clone()));
            }
        }
        if group.order() == 1 {
            if let Some(prev) = trivial_class {
                return Err(MatrixError::IndistinguishableModels(prev.clone(), members[0].clone()));
            }
            trivial_class = Some(&members[0]);
        }
    }

    let sizes: Vec<usize> = segments.iter().map(|s| s.dimension() as usize).collect();
    let dim = dimension(p) as usize;
    let mut generators = Vec::new();
    let mut provenance = Vec::new();
    let mut factors = Vec::new();

    for members in classes.values() {
        let group = models[&members[0]].group.clone();
        let act = |pick: &dyn Fn(&IrrepModel) -> &DenseMatrix| -> DenseMatrix {
            let blocks = segments
                .iter()
                .map(|s| {
                    members.contains(&s.cuspidal.name).then(|| {
                        let m = pick(&models[&s.cuspidal.name]);
                        m.kron(&DenseMatrix::Exact(Matrix::identity(s.k as usize)))
                    })
                })
                .collect();
            block_diag(&sizes, blocks)
        };
        let elements: Vec<DenseMatrix> = (0..group.order())
            .map(|e| act(&|m: &IrrepModel| &m.matrices[e]))
            .collect();
        let gens: Vec<DenseMatrix> = (0..group.generators.len())
            .map(|g| act(&|m: &IrrepModel| &m.generator_images[g]))
            .collect();
        for (index, g) in gens.iter().enumerate() {
            if !is_identity(g) {
                generators.push(g.clone());
                provenance.push(Provenance::GroupElement {
                    labels: members.clone(),
                    index,
                });
            }
        }
        factors.push(RealizedFactor {
            labels: members.clone(),
            group,
            models: members.iter().map(|n| models[n].clone()).collect(),
            elements,
            generators: gens,
        });
    }

    let lie = |pick: &dyn Fn(usize) -> Matrix<Exact>| -> Matrix<Exact> {
        let blocks: Vec<Matrix<Exact>> = segments
            .iter()
            .map(|s| Matrix::identity(s.cuspidal.dim as usize).kron(&pick(s.k as usize)))
            .collect();
        Matrix::direct_sum(&blocks)
    };
    let e = lie(&|k| sl2_sym_power_action(k).e);
    let f = lie(&|k| sl2_sym_power_action(k).f);
    let h = lie(&|k| sl2_sym_power_action(k).h);
    let exp_e = lie(&|k| sl2_sym_power_action(k).exp_e());
    let exp_f = lie(&|k| sl2_sym_power_action(k).exp_f());
    for (m, tag) in [(exp_e, Provenance::Sl2ExpE), (exp_f, Provenance::Sl2ExpF)] {
        let m = DenseMatrix::Exact(m);
        if !is_identity(&m) {
            generators.push(m);
            provenance.push(tag);
        }
    }
    if generators.is_empty() && dim > 0 {
        generators.push(DenseMatrix::Exact(Matrix::identity(dim)));
        provenance.push(Provenance::Identity);
    }

    let max_k = segments.iter().map(|s| s.k as usize).max().unwrap_or(1);
    let surrogate = (max_k <= SL2_SURROGATE_BOUND).then(|| {
        binary_icosahedral()
            .elements
            .iter()
            .map(|q| {
                let q = q.to_approx();
                let blocks: Vec<Matrix<_>> = segments
                    .iter()
                    .map(|s| Matrix::identity(s.cuspidal.dim as usize).kron(&sym_power(&q, s.k as usize)))
                    .collect();
                DenseMatrix::Approx(Matrix::direct_sum(&blocks))
            })
            .collect()
    });

    let mut blocks = Vec::new();
    let mut offset = 0;
    for (s, &n) in segments.iter().zip(&sizes) {
        blocks.push((s.cuspidal.name.clone(), s.k as usize, offset, n));
        offset += n;
    }

    Ok(GeneratorSet {
        dim,
        generators,
        provenance,
        structure: Some(RealizedStructure {
            factors,
            sl2: RealizedSl2 {
                e,
                f,
                h,
                max_k,
                surrogate,
            },
            blocks,
        }),
    })
}

/// Basis of all forms preserved by the generators: symmetric ones first, then skew.
pub fn invariant_forms(gens: &GeneratorSet) -> Vec<BilinearForm> {
    let mut out = preserved_forms(gens.dim, &gens.generators, FormSubspace::Symmetric)
        .expect("generator shapes are checked at construction");
    out.extend(invariant_skew_forms(gens));
    out
}

/// Basis of the skew-symmetric preserved forms only.
pub fn invariant_skew_forms(gens: &GeneratorSet) -> Vec<BilinearForm> {
    preserved_forms(gens.dim, &gens.generators, FormSubspace::Skew)
        .expect("generator shapes are checked at construction")
}
