//! Finite-group stand-ins for supercuspidal parameters and for SL(2), plus
//! the character-theoretic oracles built on them.

mod builtin;
mod catalog;
mod oracle;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::{commutant_dimension, Approx, DenseMatrix, Matrix, Scalar};

pub use builtin::{binary_icosahedral, builtin_model, builtin_model_ids, sl2_surrogate, SL2_SURROGATE_BOUND};
pub use catalog::{builtin_catalog, Catalog, CatalogEntry, CatalogError, CatalogId, EntrySpec};
pub use oracle::{
    invariant_isotropic_exists, isotropic_witness, isotypic_decomposition, isotypic_multiplicities, IsotropicWitness,
    IsotypicComponent, OracleError, Sl2Route, DEFAULT_DIM_BOUND,
};

/// Tolerance for character sums before rounding to an integer.
pub const CHARACTER_TOLERANCE: f64 = 1e-6;

/// Largest group the closure procedure will enumerate.
const MAX_GROUP_ORDER: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroupError {
    #[error("group `{0}` exceeds {MAX_GROUP_ORDER} elements")]
    TooLarge(String),
    #[error("model `{model}`: expected {expected} generator images, got {found}")]
    GeneratorCount {
        model: String,
        expected: usize,
        found: usize,
    },
    #[error("model `{0}` is not a homomorphism")]
    NotHomomorphism(String),
    #[error("model `{0}` is reducible")]
    Reducible(String),
    #[error("character sum {value} for `{model}` is not within {CHARACTER_TOLERANCE} of an integer")]
    NonIntegral { model: String, value: f64 },
    #[error("S(k) surrogate valid only for 1 <= k <= {bound}, got {k}")]
    SurrogateBoundExceeded { k: usize, bound: usize },
    #[error("unknown model `{0}`")]
    UnknownModel(String),
}

type ElementKey = Vec<(i64, i64)>;

fn element_key(m: &Matrix<Approx>) -> ElementKey {
    m.entries()
        .iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

/// A finite matrix group, enumerated by closure from generators.
#[derive(Debug)]
pub struct FiniteGroupModel {
    pub name: String,
    pub dim: usize,
    /// Element 0 is the identity.
    pub elements: Vec<DenseMatrix>,
    /// Element indices of the generators.
    pub generators: Vec<usize>,
    generator_matrices: Vec<DenseMatrix>,
    /// For each non-identity element: (parent element, generator slot) with
    /// `element = parent * generator`.
    tree: Vec<Option<(usize, usize)>>,
    lookup: HashMap<ElementKey, usize>,
}

impl FiniteGroupModel {
    pub fn from_generators(name: &str, dim: usize, generators: Vec<DenseMatrix>) -> Result<Self, GroupError> {
        let identity = if generators.iter().all(DenseMatrix::is_exact) {
            DenseMatrix::Exact(Matrix::identity(dim))
        } else {
            DenseMatrix::Approx(Matrix::identity(dim))
        };
        let mut lookup = HashMap::new();
        lookup.insert(element_key(&identity.to_approx()), 0);
        let mut elements = vec![identity];
        let mut tree = vec![None];
        let mut next = 0;
        while next < elements.len() {
            for (slot, g) in generators.iter().enumerate() {
                let p = elements[next].mul(g);
                let key = element_key(&p.to_approx());
                if let std::collections::hash_map::Entry::Vacant(e) = lookup.entry(key) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(GroupError::TooLarge(name.to_string()));
                    }
                    e.insert(elements.len());
                    elements.push(p);
                    tree.push(Some((next, slot)));
                }
            }
            next += 1;
        }
        let gen_idx = generators
            .iter()
            .map(|g| lookup[&element_key(&g.to_approx())])
            .collect();
        Ok(FiniteGroupModel {
            name: name.to_string(),
            dim,
            elements,
            generators: gen_idx,
            generator_matrices: generators,
            tree,
            lookup,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, m: &DenseMatrix) -> Option<usize> {
        self.lookup.get(&element_key(&m.to_approx())).copied()
    }

    pub fn product_index(&self, a: usize, b: usize) -> usize {
        self.index_of(&self.elements[a].mul(&self.elements[b]))
            .expect("group is closed under multiplication")
    }

    /// Verifies closure under multiplication by every generator.
    pub fn verify_closure(&self) -> bool {
        self.elements.iter().all(|e| {
            self.generator_matrices
                .iter()
                .all(|g| self.index_of(&e.mul(g)).is_some())
        })
    }
}

/// An irreducible representation of a [`FiniteGroupModel`], indexed like its elements.
#[derive(Debug)]
pub struct IrrepModel {
    pub id: String,
    pub group: Arc<FiniteGroupModel>,
    pub dim: usize,
    pub matrices: Vec<DenseMatrix>,
    /// Images of the group's generators, in generator order.
    pub generator_images: Vec<DenseMatrix>,
}

impl IrrepModel {
    /// Extends generator images to the whole group along the closure tree and
    /// checks the homomorphism property against every (element, generator) pair.
    pub fn from_generator_images(
        id: &str,
        group: Arc<FiniteGroupModel>,
        dim: usize,
        images: Vec<DenseMatrix>,
    ) -> Result<Self, GroupError> {
        if images.len() != group.generator_matrices.len() {
            return Err(GroupError::GeneratorCount {
                model: id.to_string(),
                expected: group.generator_matrices.len(),
                found: images.len(),
            });
        }
        let identity = if images.iter().all(DenseMatrix::is_exact) {
            DenseMatrix::Exact(Matrix::identity(dim))
        } else {
            DenseMatrix::Approx(Matrix::identity(dim))
        };
        let mut matrices: Vec<DenseMatrix> = Vec::with_capacity(group.order());
        for node in &group.tree {
            let m = match node {
                None => identity.clone(),
                Some((parent, slot)) => matrices[*parent].mul(&images[*slot]),
            };
            matrices.push(m);
        }
        for (e, elem) in group.elements.iter().enumerate() {
            for (slot, g) in group.generator_matrices.iter().enumerate() {
                let target = group
                    .index_of(&elem.mul(g))
                    .ok_or_else(|| GroupError::NotHomomorphism(id.to_string()))?;
                if !matrices[target].approx_eq(&matrices[e].mul(&images[slot])) {
                    return Err(GroupError::NotHomomorphism(id.to_string()));
                }
            }
        }
        Ok(IrrepModel {
            id: id.to_string(),
            group,
            dim,
            matrices,
            generator_images: images,
        })
    }

    pub fn character(&self) -> Vec<Approx> {
        self.matrices.iter().map(DenseMatrix::trace).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.matrices.iter().all(DenseMatrix::is_exact)
    }

    pub fn commutant_dimension(&self) -> usize {
        if self.generator_images.iter().all(DenseMatrix::is_exact) {
            let gens: Vec<_> = self
                .generator_images
                .iter()
                .filter_map(|g| g.as_exact().cloned())
                .collect();
            commutant_dimension(self.dim, &gens)
        } else {
            let gens: Vec<_> = self.generator_images.iter().map(DenseMatrix::to_approx).collect();
            commutant_dimension(self.dim, &gens)
        }
    }

    pub fn is_irreducible(&self) -> bool {
        self.commutant_dimension() == 1
    }

    /// `<chi, chi>`, which is 1 exactly for irreducible characters.
    pub fn character_norm(&self) -> f64 {
        let chi = self.character();
        chi.iter().map(|c| c.norm_sqr()).sum::<f64>() / chi.len() as f64
    }
}

/// `(1/|G|) sum_g chi(g^2)` before rounding.
pub fn fs_indicator_value(m: &IrrepModel) -> Approx {
    let sum = m
        .matrices
        .iter()
        .map(|g| g.mul(g).trace())
        .fold(Approx::zero(), |a, b| a + b);
    sum / m.group.order() as f64
}

/// Frobenius–Schur indicator of the tensor product of irreps of two groups,
/// summed over the product group directly.
pub fn fs_indicator_tensor_value(a: &IrrepModel, b: &IrrepModel) -> Approx {
    let sa: Vec<Approx> = a.matrices.iter().map(|g| g.mul(g).trace()).collect();
    let sb: Vec<Approx> = b.matrices.iter().map(|g| g.mul(g).trace()).collect();
    let mut sum = Approx::zero();
    for x in &sa {
        for y in &sb {
            sum += x * y;
        }
    }
    sum / (sa.len() * sb.len()) as f64
}

/// Rounds a character sum, failing if it is not an integer within tolerance.
pub fn round_indicator(model: &str, value: Approx) -> Result<i8, GroupError> {
    let rounded = value.re.round();
    let gap = (value - Approx::new(rounded, 0.0)).norm();
    if gap > CHARACTER_TOLERANCE {
        return Err(GroupError::NonIntegral {
            model: model.to_string(),
            value: value.re,
        });
    }
    Ok(rounded as i8)
}

pub fn fs_indicator(m: &IrrepModel) -> Result<i8, GroupError> {
    round_indicator(&m.id, fs_indicator_value(m))
}
