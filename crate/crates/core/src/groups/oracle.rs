//! Character-theoretic oracles on realized parameters: isotypic decomposition
//! and the search for invariant isotropic subspaces.
//!
//! A realized parameter is a representation of `Γ_1 × .. × Γ_m × SL(2)`, one
//! finite factor per duality class of labels. Its irreducible constituents are
//! outer tensor products, so isotypic projectors are products of per-factor
//! projectors. The SL(2) projectors come from the binary icosahedral
//! surrogate when every k is within its bound, and otherwise from the
//! Casimir, which acts on S(k) by `(k^2 - 1)/2`.

use serde::Serialize;
use thiserror::Error;

use super::IrrepModel;
use crate::matrix::{
    casimir, casimir_eigenvalue, commutant_dimension, intertwiners, is_in_sp, sl2_sym_power_action, sym_power, Approx,
    BilinearForm, DenseMatrix, Exact, GeneratorSet, Matrix, RealizedStructure, Scalar, Symmetry, TOLERANCE,
};

pub const DEFAULT_DIM_BOUND: usize = 12;
const MAX_MULTIPLICITY: usize = 2;
const ROUNDING_TOLERANCE: f64 = 1e-6;
const ISOTROPY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sl2Route {
    /// Character averaging over the binary icosahedral group.
    Surrogate,
    /// Polynomials in the Casimir element.
    Lie,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("generator set carries no finite-group structure")]
    NoStructure,
    #[error("dimension {dim} exceeds the oracle bound {bound}")]
    DimBoundExceeded { dim: usize, bound: usize },
    #[error("component {component} has multiplicity {multiplicity} > {MAX_MULTIPLICITY}")]
    MultiplicityTooHigh { component: String, multiplicity: usize },
    #[error("{what} = {value} is not within {ROUNDING_TOLERANCE} of an integer")]
    NonIntegral { what: String, value: f64 },
    #[error("isotypic components account for dimension {found}, expected {dim}")]
    IncompleteDecomposition { found: usize, dim: usize },
    #[error("commutant has dimension {commutant}, multiplicities predict {expected}")]
    CommutantMismatch { commutant: usize, expected: usize },
    #[error("found {found} intertwiners into component {component}, expected {expected}")]
    HomMismatch {
        component: String,
        found: usize,
        expected: usize,
    },
    #[error("surrogate route needs every k <= 6, got {0}")]
    SurrogateUnavailable(usize),
    #[error("form is not skew-symmetric and nondegenerate")]
    FormNotSymplectic,
    #[error("form has size {found}, expected {expected}")]
    FormSizeMismatch { expected: usize, found: usize },
    #[error("form is not preserved by generator {0}")]
    FormNotInvariant(usize),
}

/// One isotypic component `m · T` with `T = ρ_1 ⊠ .. ⊠ ρ_m ⊠ S(k)`.
#[derive(Clone, Debug, Serialize)]
pub struct IsotypicComponent {
    pub id: String,
    /// Labels of the nontrivial finite-group constituents of T.
    pub labels: Vec<String>,
    pub k: usize,
    /// Dimension of T.
    pub dim: usize,
    pub multiplicity: usize,
    #[serde(skip)]
    pub projector: Matrix<Approx>,
    /// Per factor: index into that factor's options.
    #[serde(skip)]
    choice: Vec<usize>,
}

/// A nonzero invariant isotropic subspace, given as the image of an intertwiner.
#[derive(Clone, Debug)]
pub struct IsotropicWitness {
    pub component: String,
    /// Coefficients of the intertwiner in the Hom-space basis.
    pub coefficients: Vec<Approx>,
    /// Columns span the subspace.
    pub basis: Matrix<Approx>,
}

/// An irreducible of one finite factor: one of the labels' models, or the trivial character.
struct FactorOption {
    label: Option<String>,
    dim: usize,
    character: Vec<Approx>,
    generator_images: Vec<DenseMatrix>,
}

fn factor_options(models: &[(String, &IrrepModel)], order: usize, gens: usize) -> Vec<FactorOption> {
    let mut out: Vec<FactorOption> = models
        .iter()
        .map(|(name, m)| FactorOption {
            label: Some(name.clone()),
            dim: m.dim,
            character: m.character(),
            generator_images: m.generator_images.clone(),
        })
        .collect();
    let trivial = vec![Approx::new(1.0, 0.0); order];
    let is_trivial_model = |o: &FactorOption| {
        o.character
            .iter()
            .zip(&trivial)
            .all(|(a, b)| (a - b).norm() < ROUNDING_TOLERANCE)
    };
    if !out.iter().any(is_trivial_model) {
        out.push(FactorOption {
            label: None,
            dim: 1,
            character: trivial,
            generator_images: vec![DenseMatrix::Exact(Matrix::identity(1)); gens],
        });
    }
    out
}

fn round_count(what: impl FnOnce() -> String, value: Approx) -> Result<usize, OracleError> {
    let r = value.re.round();
    if (value - Approx::new(r, 0.0)).norm() > ROUNDING_TOLERANCE || r < 0.0 {
        return Err(OracleError::NonIntegral {
            what: what(),
            value: value.re,
        });
    }
    Ok(r as usize)
}

/// `(d/|G|) sum_g conj(chi(g)) R(g)`.
fn character_projector(dim: usize, elements: &[DenseMatrix], character: &[Approx], d: usize) -> Matrix<Approx> {
    let mut acc = Matrix::<Approx>::zeros(dim, dim);
    for (r, chi) in elements.iter().zip(character) {
        acc = acc.add(&r.to_approx().scale(&chi.conj()));
    }
    acc.scale(&Approx::new(d as f64 / elements.len() as f64, 0.0))
}

fn sl2_projectors(dim: usize, s: &RealizedStructure, route: Sl2Route) -> Result<Vec<Matrix<Approx>>, OracleError> {
    let max_k = s.sl2.max_k;
    match route {
        Sl2Route::Surrogate => {
            let elements = s
                .sl2
                .surrogate
                .as_ref()
                .ok_or(OracleError::SurrogateUnavailable(max_k))?;
            let spin = super::binary_icosahedral();
            Ok((1..=max_k)
                .map(|k| {
                    let chi: Vec<Approx> = spin
                        .elements
                        .iter()
                        .map(|q| sym_power(&q.to_approx(), k).trace())
                        .collect();
                    character_projector(dim, elements, &chi, k)
                })
                .collect())
        }
        Sl2Route::Lie => {
            let c = casimir(&s.sl2.e, &s.sl2.f, &s.sl2.h);
            let id = Matrix::<Exact>::identity(dim);
            Ok((1..=max_k)
                .map(|k| {
                    let mut p = id.clone();
                    for j in (1..=max_k).filter(|&j| j != k) {
                        let shift = c.sub(&id.scale(&casimir_eigenvalue(j)));
                        let denom = casimir_eigenvalue(k) - casimir_eigenvalue(j);
                        p = p.mul(&shift).scale(&(Exact::one() / denom));
                    }
                    p.to_approx()
                })
                .collect())
        }
    }
}

fn default_route(s: &RealizedStructure) -> Sl2Route {
    if s.sl2.surrogate.is_some() {
        Sl2Route::Surrogate
    } else {
        Sl2Route::Lie
    }
}

struct Decomposition<'a> {
    structure: &'a RealizedStructure,
    options: Vec<Vec<FactorOption>>,
    components: Vec<IsotypicComponent>,
}

/// Isotypic decomposition via products of character projectors, cross-checked
/// against dimension and commutant.
pub fn isotypic_decomposition(
    gens: &GeneratorSet,
    route: Option<Sl2Route>,
) -> Result<Vec<IsotypicComponent>, OracleError> {
    Ok(decompose(gens, route)?.components)
}

fn decompose(gens: &GeneratorSet, route: Option<Sl2Route>) -> Result<Decomposition<'_>, OracleError> {
    let s = gens.structure.as_ref().ok_or(OracleError::NoStructure)?;
    let dim = gens.dim;
    let options: Vec<Vec<FactorOption>> = s
        .factors
        .iter()
        .map(|f| {
            let models: Vec<(String, &IrrepModel)> = f
                .labels
                .iter()
                .cloned()
                .zip(f.models.iter().map(|m| m.as_ref()))
                .collect();
            factor_options(&models, f.group.order(), f.generators.len())
        })
        .collect();
    let sl2 = sl2_projectors(dim, s, route.unwrap_or_else(|| default_route(s)))?;

    let mut components = Vec::new();
    let mut stack: Vec<(Vec<usize>, Matrix<Approx>)> = vec![(Vec::new(), Matrix::identity(dim))];
    while let Some((choice, partial)) = stack.pop() {
        let depth = choice.len();
        if depth < s.factors.len() {
            let f = &s.factors[depth];
            for (i, opt) in options[depth].iter().enumerate().rev() {
                let p = partial.mul(&character_projector(dim, &f.elements, &opt.character, opt.dim));
                if p.trace().norm() > 0.5 {
                    let mut next = choice.clone();
                    next.push(i);
                    stack.push((next, p));
                }
            }
            continue;
        }
        let fin_dim: usize = choice.iter().zip(&options).map(|(&i, o)| o[i].dim).product();
        let labels: Vec<String> = choice
            .iter()
            .zip(&options)
            .filter_map(|(&i, o)| o[i].label.clone())
            .collect();
        for (k0, pk) in sl2.iter().enumerate() {
            let k = k0 + 1;
            let projector = partial.mul(pk);
            let t_dim = fin_dim * k;
            let id = component_id(&labels, k);
            let m = round_count(|| format!("multiplicity of {id}"), projector.trace() / t_dim as f64)?;
            if m > 0 {
                components.push(IsotypicComponent {
                    id,
                    labels: labels.clone(),
                    k,
                    dim: t_dim,
                    multiplicity: m,
                    projector,
                    choice: choice.clone(),
                });
            }
        }
    }
    components.sort_by(|a, b| (a.dim, a.k, &a.id).cmp(&(b.dim, b.k, &b.id)));

    let found: usize = components.iter().map(|c| c.dim * c.multiplicity).sum();
    if found != dim {
        return Err(OracleError::IncompleteDecomposition { found, dim });
    }
    let expected: usize = components.iter().map(|c| c.multiplicity * c.multiplicity).sum();
    let commutant = if gens.is_exact() {
        let exact: Vec<Matrix<Exact>> = gens.generators.iter().filter_map(|g| g.as_exact().cloned()).collect();
        commutant_dimension(dim, &exact)
    } else {
        let approx: Vec<Matrix<Approx>> = gens.generators.iter().map(DenseMatrix::to_approx).collect();
        commutant_dimension(dim, &approx)
    };
    if commutant != expected {
        return Err(OracleError::CommutantMismatch { commutant, expected });
    }
    Ok(Decomposition {
        structure: s,
        options,
        components,
    })
}

fn component_id(labels: &[String], k: usize) -> String {
    let head = if labels.is_empty() {
        "1".to_string()
    } else {
        labels.join("⊗")
    };
    format!("{head}⊗S({k})")
}

/// `(component id, multiplicity)` for each constituent of the realized parameter.
pub fn isotypic_multiplicities(gens: &GeneratorSet) -> Result<Vec<(String, usize)>, OracleError> {
    Ok(isotypic_decomposition(gens, None)?
        .into_iter()
        .map(|c| (c.id, c.multiplicity))
        .collect())
}

impl Decomposition<'_> {
    /// Generator actions on T and on V, aligned: factor generators, then exp(E), exp(F).
    fn generator_pairs(&self, c: &IsotypicComponent) -> (Vec<DenseMatrix>, Vec<DenseMatrix>) {
        let s = self.structure;
        let chosen: Vec<&FactorOption> = c.choice.iter().zip(&self.options).map(|(&i, o)| &o[i]).collect();
        let identity = |n: usize| DenseMatrix::Exact(Matrix::identity(n));
        let tensor = |slot: usize, m: &DenseMatrix, last: DenseMatrix| {
            chosen.iter().enumerate().rev().fold(last, |acc, (f, opt)| {
                let left = if f == slot { m.clone() } else { identity(opt.dim) };
                left.kron(&acc)
            })
        };
        let mut source = Vec::new();
        let mut target = Vec::new();
        for (f, factor) in s.factors.iter().enumerate() {
            for (g, v) in factor.generators.iter().enumerate() {
                source.push(tensor(f, &chosen[f].generator_images[g], identity(c.k)));
                target.push(v.clone());
            }
        }
        let t = sl2_sym_power_action(c.k);
        let fin: usize = chosen.iter().map(|o| o.dim).product();
        for (small, big) in [(t.exp_e(), &s.sl2.e), (t.exp_f(), &s.sl2.f)] {
            source.push(identity(fin).kron(&DenseMatrix::Exact(small)));
            target.push(DenseMatrix::Exact(big.exp_nilpotent().expect("nilpotent")));
        }
        (source, target)
    }

    /// Basis of `Hom(T, V)` for the component's type T.
    fn hom_basis(&self, c: &IsotypicComponent, dim: usize) -> Result<Vec<Matrix<Approx>>, OracleError> {
        let (source, target) = self.generator_pairs(c);
        let basis: Vec<Matrix<Approx>> = if source.iter().chain(&target).all(DenseMatrix::is_exact) {
            let s: Vec<_> = source.iter().filter_map(|m| m.as_exact().cloned()).collect();
            let t: Vec<_> = target.iter().filter_map(|m| m.as_exact().cloned()).collect();
            intertwiners(c.dim, dim, &s, &t).iter().map(Matrix::to_approx).collect()
        } else {
            let s: Vec<_> = source.iter().map(DenseMatrix::to_approx).collect();
            let t: Vec<_> = target.iter().map(DenseMatrix::to_approx).collect();
            intertwiners(c.dim, dim, &s, &t)
        };
        if basis.len() != c.multiplicity {
            return Err(OracleError::HomMismatch {
                component: c.id.clone(),
                found: basis.len(),
                expected: c.multiplicity,
            });
        }
        Ok(basis)
    }
}

fn check_form(gens: &GeneratorSet, j: &BilinearForm) -> Result<(), OracleError> {
    if j.size() != gens.dim {
        return Err(OracleError::FormSizeMismatch {
            expected: gens.dim,
            found: j.size(),
        });
    }
    if j.symmetry != Symmetry::Skew || !j.nondegenerate {
        return Err(OracleError::FormNotSymplectic);
    }
    for (i, g) in gens.generators.iter().enumerate() {
        if !is_in_sp(g, j).map_err(|_| OracleError::FormNotSymplectic)? {
            return Err(OracleError::FormNotInvariant(i));
        }
    }
    Ok(())
}

/// Whether the realized image preserves a nonzero subspace on which `j` vanishes.
pub fn invariant_isotropic_exists(gens: &GeneratorSet, j: &BilinearForm) -> Result<bool, OracleError> {
    Ok(isotropic_witness(gens, j, DEFAULT_DIM_BOUND, None)?.is_some())
}

/// Every nonzero invariant subspace contains an irreducible one, so it is
/// enough to test irreducible submodules: the whole isotypic component when
/// the multiplicity is 1, and the images of `a X_1 + b X_2` when it is 2. In
/// the latter case `(a X_1 + b X_2)^T J (a X_1 + b X_2)` is a multiple of the
/// unique invariant form on T, so isotropy is one quadratic equation in (a : b).
pub fn isotropic_witness(
    gens: &GeneratorSet,
    j: &BilinearForm,
    dim_bound: usize,
    route: Option<Sl2Route>,
) -> Result<Option<IsotropicWitness>, OracleError> {
    if gens.dim > dim_bound {
        return Err(OracleError::DimBoundExceeded {
            dim: gens.dim,
            bound: dim_bound,
        });
    }
    check_form(gens, j)?;
    let decomposition = decompose(gens, route)?;
    if let Some(c) = decomposition
        .components
        .iter()
        .find(|c| c.multiplicity > MAX_MULTIPLICITY)
    {
        return Err(OracleError::MultiplicityTooHigh {
            component: c.id.clone(),
            multiplicity: c.multiplicity,
        });
    }
    let jm = j.gram.to_approx();
    for c in &decomposition.components {
        let xs = decomposition.hom_basis(c, gens.dim)?;
        let pair = |a: &Matrix<Approx>, b: &Matrix<Approx>| a.transpose().mul(&jm).mul(b);
        let scale = jm.max_abs() * xs.iter().map(|x| x.max_abs().powi(2)).fold(0.0, f64::max) * gens.dim as f64;
        let negligible = |m: &Matrix<Approx>| m.max_abs() <= ISOTROPY_TOLERANCE * scale.max(1.0);
        let candidates: Vec<Vec<Approx>> = if xs.len() == 1 {
            vec![vec![Approx::one()]]
        } else {
            let g11 = pair(&xs[0], &xs[0]);
            let g12 = pair(&xs[0], &xs[1]).add(&pair(&xs[1], &xs[0]));
            let g22 = pair(&xs[1], &xs[1]);
            quadratic_points(&g11, &g12, &g22)
        };
        for coeffs in candidates {
            let mut x = Matrix::<Approx>::zeros(gens.dim, c.dim);
            for (a, xi) in coeffs.iter().zip(&xs) {
                x = x.add(&xi.scale(a));
            }
            if negligible(&pair(&x, &x)) {
                return Ok(Some(IsotropicWitness {
                    component: c.id.clone(),
                    coefficients: coeffs,
                    basis: x,
                }));
            }
        }
    }
    Ok(None)
}

/// Candidate points `(a : b)` where `a^2 G11 + ab G12 + b^2 G22` may vanish.
/// All three are multiples of one matrix, so the scalars are read off at the
/// entry of largest magnitude; callers verify each candidate on full matrices.
fn quadratic_points(g11: &Matrix<Approx>, g12: &Matrix<Approx>, g22: &Matrix<Approx>) -> Vec<Vec<Approx>> {
    let mut best = (0, 0.0);
    for i in 0..g11.entries().len() {
        let m = [g11, g12, g22]
            .iter()
            .map(|g| g.entries()[i].norm())
            .fold(0.0, f64::max);
        if m > best.1 {
            best = (i, m);
        }
    }
    let one = Approx::one();
    let zero = Approx::zero();
    if best.1 <= TOLERANCE {
        return vec![vec![one, zero]];
    }
    let (alpha, beta, gamma) = (g11.entries()[best.0], g12.entries()[best.0], g22.entries()[best.0]);
    let small = |z: Approx| z.norm() <= TOLERANCE * best.1;
    let mut out = vec![vec![one, zero], vec![zero, one]];
    // With a = 1 and b = c: gamma c^2 + beta c + alpha = 0.
    if small(gamma) {
        if !small(beta) {
            out.push(vec![one, -alpha / beta]);
        }
    } else {
        let disc = (beta * beta - alpha * gamma * 4.0).sqrt();
        for root in [(-beta + disc) / (gamma * 2.0), (-beta - disc) / (gamma * 2.0)] {
            out.push(vec![one, root]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::builtin_catalog;
    use crate::matrix::{find_nondegenerate, invariant_skew_forms, realize};
    use crate::param::{Segment, WDParameter};

    fn realized(segs: &[(&str, u32)]) -> GeneratorSet {
        let c = builtin_catalog();
        let p = WDParameter::new(
            segs.iter()
                .map(|(n, k)| Segment::new(c.label(n).unwrap(), *k).unwrap())
                .collect(),
        )
        .unwrap();
        realize(&p, &c).unwrap()
    }

    fn symplectic_form(g: &GeneratorSet) -> BilinearForm {
        find_nondegenerate(&invariant_skew_forms(g)).expect("a symplectic invariant form")
    }

    #[test]
    fn multiplicities_of_small_parameters() {
        assert_eq!(
            isotypic_multiplicities(&realized(&[("q8", 1)])).unwrap(),
            vec![("q8⊗S(1)".into(), 1)]
        );
        assert_eq!(
            isotypic_multiplicities(&realized(&[("q8", 3), ("q8", 3)])).unwrap(),
            vec![("q8⊗S(3)".into(), 2)]
        );
        let mixed = isotypic_multiplicities(&realized(&[("q8", 1), ("s3", 1)])).unwrap();
        assert_eq!(mixed, vec![("q8⊗S(1)".into(), 1), ("s3⊗S(1)".into(), 1)]);
    }

    #[test]
    fn routes_agree_below_the_surrogate_bound() {
        for segs in [
            &[("triv", 2), ("triv", 4)][..],
            &[("q8", 3), ("s3", 2)][..],
            &[("chi3", 2), ("chi3bar", 2)][..],
        ] {
            let g = realized(segs);
            let a: Vec<_> = isotypic_decomposition(&g, Some(Sl2Route::Surrogate)).unwrap();
            let b: Vec<_> = isotypic_decomposition(&g, Some(Sl2Route::Lie)).unwrap();
            assert_eq!(a.len(), b.len());
            for (x, y) in a.iter().zip(&b) {
                assert_eq!((&x.id, x.multiplicity), (&y.id, y.multiplicity));
                assert!(x.projector.approx_eq(&y.projector));
            }
        }
    }

    #[test]
    fn lie_route_beyond_the_bound() {
        let g = realized(&[("triv", 8)]);
        assert!(g.structure.as_ref().unwrap().sl2.surrogate.is_none());
        assert_eq!(isotypic_multiplicities(&g).unwrap(), vec![("triv⊗S(8)".into(), 1)]);
        let j = symplectic_form(&g);
        assert!(!invariant_isotropic_exists(&g, &j).unwrap());
    }

    #[test]
    fn isotropic_examples() {
        let g = realized(&[("q8", 1)]);
        assert!(!invariant_isotropic_exists(&g, &symplectic_form(&g)).unwrap());

        let g = realized(&[("q8", 1), ("q8", 1)]);
        let w = isotropic_witness(&g, &symplectic_form(&g), DEFAULT_DIM_BOUND, None)
            .unwrap()
            .expect("graph subspace");
        assert_eq!(w.coefficients.len(), 2);

        let g = realized(&[("chi3", 1), ("chi3bar", 1)]);
        assert!(invariant_isotropic_exists(&g, &symplectic_form(&g)).unwrap());
    }

    #[test]
    fn preconditions() {
        let g = realized(&[("q8", 1), ("q8", 1), ("q8", 1)]);
        let j = symplectic_form(&g);
        assert!(matches!(
            invariant_isotropic_exists(&g, &j),
            Err(OracleError::MultiplicityTooHigh { multiplicity: 3, .. })
        ));
        assert!(matches!(
            isotropic_witness(&g, &j, 4, None),
            Err(OracleError::DimBoundExceeded { dim: 6, bound: 4 })
        ));
        let g = realized(&[("q8", 1)]);
        let not_invariant = crate::matrix::symplectic_j(2).unwrap();
        let bad = BilinearForm::classify(DenseMatrix::Exact(Matrix::from_ints(&[&[0, 2], &[-2, 0]])));
        // Any skew 2x2 form is preserved by SL(2) ⊇ Q8.
        assert!(invariant_isotropic_exists(&g, &not_invariant).is_ok());
        assert!(invariant_isotropic_exists(&g, &bad).is_ok());
        let sym = BilinearForm::classify(DenseMatrix::Exact(Matrix::identity(2)));
        assert_eq!(
            invariant_isotropic_exists(&g, &sym),
            Err(OracleError::FormNotSymplectic)
        );
    }
}
