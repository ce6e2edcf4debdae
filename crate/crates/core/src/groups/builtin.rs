use std::collections::BTreeMap;
use std::sync::{Arc, OnceLock};

use super::{FiniteGroupModel, GroupError, IrrepModel};
use crate::matrix::{gaussian, sym_power, Approx, DenseMatrix, Matrix};

/// Largest k for which `Sym^{k-1}` of the binary icosahedral spin model stays irreducible
/// and the surrogate is used.
pub const SL2_SURROGATE_BOUND: usize = 6;

const MODEL_IDS: [&str; 7] = ["trivial", "c3", "c3bar", "s3", "q8", "d4", "spin"];

pub fn builtin_model_ids() -> &'static [&'static str] {
    &MODEL_IDS
}

fn exact(rows: &[&[i64]]) -> DenseMatrix {
    DenseMatrix::Exact(Matrix::from_ints(rows))
}

/// `w + xi + yj + zk  ->  [[w + xi, y + zi], [-y + zi, w - xi]]`.
fn quaternion(w: f64, x: f64, y: f64, z: f64) -> Matrix<Approx> {
    Matrix::from_rows(vec![
        vec![Approx::new(w, x), Approx::new(y, z)],
        vec![Approx::new(-y, z), Approx::new(w, -x)],
    ])
}

fn spin_generators() -> Vec<Matrix<Approx>> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    vec![
        quaternion(0.5, 0.5, 0.5, 0.5),
        quaternion(phi / 2.0, 0.5 / phi, 0.5, 0.0),
    ]
}

/// The binary icosahedral group 2I ⊂ SU(2), order 120.
pub fn binary_icosahedral() -> Arc<FiniteGroupModel> {
    static GROUP: OnceLock<Arc<FiniteGroupModel>> = OnceLock::new();
    GROUP
        .get_or_init(|| {
            let gens = spin_generators().into_iter().map(DenseMatrix::from).collect();
            Arc::new(FiniteGroupModel::from_generators("2I", 2, gens).expect("binary icosahedral closure is finite"))
        })
        .clone()
}

fn faithful(name: &str, dim: usize, gens: Vec<DenseMatrix>) -> Arc<FiniteGroupModel> {
    Arc::new(FiniteGroupModel::from_generators(name, dim, gens).expect("built-in group is finite"))
}

/// The defining representation of a group given by its own generators.
fn defining(id: &str, group: &Arc<FiniteGroupModel>) -> IrrepModel {
    let images: Vec<DenseMatrix> = group.generators.iter().map(|&g| group.elements[g].clone()).collect();
    IrrepModel::from_generator_images(id, group.clone(), group.dim, images)
        .expect("defining representation is a homomorphism")
}

fn build_all() -> BTreeMap<&'static str, Arc<IrrepModel>> {
    let mut out = BTreeMap::new();

    let trivial = faithful("1", 1, vec![exact(&[&[1]])]);
    out.insert("trivial", Arc::new(defining("trivial", &trivial)));

    let omega = Approx::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
    let c3 = faithful("C3", 1, vec![DenseMatrix::Approx(Matrix::from_rows(vec![vec![omega]]))]);
    out.insert("c3", Arc::new(defining("c3", &c3)));
    let bar = vec![DenseMatrix::Approx(Matrix::from_rows(vec![vec![omega * omega]]))];
    out.insert(
        "c3bar",
        Arc::new(IrrepModel::from_generator_images("c3bar", c3, 1, bar).expect("omega^2 is a character")),
    );

    // (12) and (123) acting on the sum-zero plane of C^3.
    let s3 = faithful("S3", 2, vec![exact(&[&[-1, 1], &[0, 1]]), exact(&[&[0, -1], &[1, -1]])]);
    out.insert("s3", Arc::new(defining("s3", &s3)));

    let q8_i = DenseMatrix::Exact(Matrix::from_rows(vec![
        vec![gaussian(0, 1), gaussian(0, 0)],
        vec![gaussian(0, 0), gaussian(0, -1)],
    ]));
    let q8 = faithful("Q8", 2, vec![q8_i, exact(&[&[0, 1], &[-1, 0]])]);
    out.insert("q8", Arc::new(defining("q8", &q8)));

    let d4 = faithful("D4", 2, vec![exact(&[&[0, -1], &[1, 0]]), exact(&[&[1, 0], &[0, -1]])]);
    out.insert("d4", Arc::new(defining("d4", &d4)));

    out.insert("spin", Arc::new(defining("spin", &binary_icosahedral())));
    out
}

fn registry() -> &'static BTreeMap<&'static str, Arc<IrrepModel>> {
    static MODELS: OnceLock<BTreeMap<&'static str, Arc<IrrepModel>>> = OnceLock::new();
    MODELS.get_or_init(build_all)
}

pub fn builtin_model(id: &str) -> Result<Arc<IrrepModel>, GroupError> {
    registry()
        .get(id)
        .cloned()
        .ok_or_else(|| GroupError::UnknownModel(id.to_string()))
}

/// `Sym^{k-1}` of the spin model: a finite stand-in for S(k) restricted to 2I.
pub fn sl2_surrogate(k: usize) -> Result<IrrepModel, GroupError> {
    if k == 0 || k > SL2_SURROGATE_BOUND {
        return Err(GroupError::SurrogateBoundExceeded {
            k,
            bound: SL2_SURROGATE_BOUND,
        });
    }
    let group = binary_icosahedral();
    let images = spin_generators()
        .iter()
        .map(|g| DenseMatrix::Approx(sym_power(g, k)))
        .collect();
    IrrepModel::from_generator_images(&format!("sym{}", k - 1), group, k, images)
}
