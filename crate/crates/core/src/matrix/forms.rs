//! Bilinear forms: the antidiagonal and symplectic Gram matrices, the
//! permutation relating the two symplectic conventions, and the linear solver
//! for the space of forms preserved by a set of matrices.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::dense::{normalize_leading, DenseMatrix, Matrix, RowReducer};
use super::scalar::{Approx, Exact, Scalar};
use super::MatrixError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Skew,
    Neither,
}

impl Symmetry {
    /// Sign rule for tensor products of forms.
    pub fn tensor(self, other: Symmetry) -> Symmetry {
        match (self, other) {
            (Symmetry::Neither, _) | (_, Symmetry::Neither) => Symmetry::Neither,
            (a, b) if a == b => Symmetry::Symmetric,
            _ => Symmetry::Skew,
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Symmetry::Symmetric => "symmetric",
            Symmetry::Skew => "skew",
            Symmetry::Neither => "neither",
        })
    }
}

/// A square Gram matrix together with its symmetry class and degeneracy.
#[derive(Clone, Debug, PartialEq)]
pub struct BilinearForm {
    pub gram: DenseMatrix,
    pub symmetry: Symmetry,
    pub nondegenerate: bool,
}

impl BilinearForm {
    /// Classifies `gram`. Panics if it is not square.
    pub fn classify(gram: DenseMatrix) -> BilinearForm {
        assert_eq!(gram.rows(), gram.cols(), "Gram matrix must be square");
        let t = gram.transpose();
        let symmetry = match &gram {
            DenseMatrix::Exact(g) => classify_symmetry(g, t.as_exact().unwrap()),
            DenseMatrix::Approx(g) => classify_symmetry(g, &t.to_approx()),
        };
        let nondegenerate = gram.rank() == gram.rows();
        BilinearForm {
            gram,
            symmetry,
            nondegenerate,
        }
    }

    pub fn size(&self) -> usize {
        self.gram.rows()
    }

    pub fn is_exact(&self) -> bool {
        self.gram.is_exact()
    }

    pub fn is_symplectic(&self) -> bool {
        self.symmetry == Symmetry::Skew && self.nondegenerate
    }
}

fn classify_symmetry<T: Scalar>(g: &Matrix<T>, t: &Matrix<T>) -> Symmetry {
    if g.approx_eq(t) {
        Symmetry::Symmetric
    } else if g.approx_eq(&t.neg()) {
        Symmetry::Skew
    } else {
        Symmetry::Neither
    }
}

/// The k x k matrix with ones on the antidiagonal.
pub fn antidiag_j(k: usize) -> Matrix<Exact> {
    Matrix::from_fn(k, k, |i, j| if i + j + 1 == k { Exact::one() } else { Exact::zero() })
}

/// `[[0, J_{m/2}], [-J_{m/2}, 0]]`.
pub fn symplectic_j(m: usize) -> Result<BilinearForm, MatrixError> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(MatrixError::OddSize(m));
    }
    let h = m / 2;
    let gram = Matrix::<Exact>::from_fn(m, m, |i, j| {
        if i < h && j >= h && i + (j - h) + 1 == h {
            Exact::one()
        } else if i >= h && j < h && (i - h) + j + 1 == h {
            -Exact::one()
        } else {
            Exact::zero()
        }
    });
    Ok(BilinearForm {
        gram: gram.into(),
        symmetry: Symmetry::Skew,
        nondegenerate: true,
    })
}

/// Block-diagonal sum of `symplectic_j(m_i)` over the parts.
pub fn partition_j(parts: &[usize]) -> Result<BilinearForm, MatrixError> {
    if parts.is_empty() {
        return Err(MatrixError::EmptyPartition);
    }
    let mut blocks = Vec::with_capacity(parts.len());
    for &m in parts {
        if m == 0 || m % 2 != 0 {
            return Err(MatrixError::OddPart(m));
        }
        match symplectic_j(m)?.gram {
            DenseMatrix::Exact(g) => blocks.push(g),
            DenseMatrix::Approx(_) => unreachable!("symplectic_j is exact"),
        }
    }
    Ok(BilinearForm {
        gram: Matrix::direct_sum(&blocks).into(),
        symmetry: Symmetry::Skew,
        nondegenerate: true,
    })
}

/// Tensor product of two forms.
pub fn kron_form(a: &BilinearForm, b: &BilinearForm) -> BilinearForm {
    let gram = a.gram.kron(&b.gram);
    let form = BilinearForm::classify(gram);
    debug_assert!(
        a.symmetry == Symmetry::Neither
            || b.symmetry == Symmetry::Neither
            || form.symmetry == a.symmetry.tensor(b.symmetry)
    );
    form
}

/// Whether `g^T J g = J`; exact on the exact path, within 1e-9 otherwise.
pub fn is_in_sp(g: &DenseMatrix, j: &BilinearForm) -> Result<bool, MatrixError> {
    if g.rows() != g.cols() || g.rows() != j.size() {
        return Err(MatrixError::ShapeMismatch {
            expected: j.size(),
            found: (g.rows(), g.cols()),
        });
    }
    if !j.is_symplectic() {
        return Err(MatrixError::NotSymplectic);
    }
    Ok(preserves(g, &j.gram))
}

/// Whether `g^T B g = B`, with no requirement on B.
pub fn preserves(g: &DenseMatrix, b: &DenseMatrix) -> bool {
    g.transpose().mul(b).mul(g).approx_eq(b)
}

/// Convention for turning a permutation into a matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PermConvention {
    /// `P[sigma(j), j] = 1`: column j is the basis vector `e_{sigma(j)}`.
    SourceColumns,
    /// `P[j, sigma(j)] = 1`.
    SourceRows,
}

/// A permutation of `{0, .., n-1}`; displayed 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationMap {
    images: Vec<usize>,
}

impl PermutationMap {
    pub fn from_images(images: Vec<usize>) -> Result<Self, MatrixError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v >= n || seen[v] {
                return Err(MatrixError::NotAPermutation);
            }
            seen[v] = true;
        }
        Ok(PermutationMap { images })
    }

    pub fn identity(n: usize) -> Self {
        PermutationMap {
            images: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    /// 0-based image.
    pub fn apply(&self, j: usize) -> usize {
        self.images[j]
    }

    pub fn images_one_based(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    pub fn matrix(&self, convention: PermConvention) -> Matrix<Exact> {
        let n = self.len();
        let mut p = Matrix::zeros(n, n);
        for (j, &s) in self.images.iter().enumerate() {
            match convention {
                PermConvention::SourceColumns => p.set(s, j, Exact::one()),
                PermConvention::SourceRows => p.set(j, s, Exact::one()),
            }
        }
        p
    }

    /// `P^{-1} M P` under the given convention, by exact multiplication.
    pub fn conjugate(&self, m: &Matrix<Exact>, convention: PermConvention) -> Matrix<Exact> {
        let p = self.matrix(convention);
        let p_inv = p.inverse().expect("permutation matrices are invertible");
        p_inv.mul(m).mul(&p)
    }
}

impl fmt::Display for PermutationMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .images
            .iter()
            .enumerate()
            .map(|(j, s)| format!("{}->{}", j + 1, s + 1))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// `2i-1 -> i`, `2i -> 2n+1-i` on `{1, .., 2n}`.
pub fn w_plus(n: usize) -> PermutationMap {
    let mut images = vec![0; 2 * n];
    for i in 1..=n {
        images[2 * i - 2] = i - 1;
        images[2 * i - 1] = 2 * n - i;
    }
    PermutationMap { images }
}

/// A permutation P with `P^{-1} J'_{2n} P = J''` (source-column convention),
/// where J'' is `partition_j(parts)`. The result is checked by multiplication.
pub fn conjugator_for_partition(parts: &[usize]) -> Result<PermutationMap, MatrixError> {
    let target = partition_j(parts)?;
    let size: usize = parts.iter().sum();
    let mut images = vec![usize::MAX; size];
    let mut offset = 0;
    let mut t = 0;
    for &m in parts {
        for j in 0..m / 2 {
            // J''[offset + j, offset + m - 1 - j] = +1 pairs with J'[t, size - 1 - t] = +1.
            images[offset + j] = t;
            images[offset + m - 1 - j] = size - 1 - t;
            t += 1;
        }
        offset += m;
    }
    let perm = PermutationMap::from_images(images).map_err(|_| MatrixError::ConjugatorNotFound)?;
    let standard = symplectic_j(size)?;
    let (Some(j_std), Some(j_target)) = (standard.gram.as_exact(), target.gram.as_exact()) else {
        unreachable!("symplectic Gram matrices are exact")
    };
    if &perm.conjugate(j_std, PermConvention::SourceColumns) == j_target {
        Ok(perm)
    } else {
        Err(MatrixError::ConjugatorNotFound)
    }
}

/// Whether `P^{-1} J'_{2n} P = partition_j(parts)` holds for `perm`.
pub fn conjugates_to_partition(
    perm: &PermutationMap,
    parts: &[usize],
    convention: PermConvention,
) -> Result<bool, MatrixError> {
    let target = partition_j(parts)?;
    let size: usize = parts.iter().sum();
    if perm.len() != size {
        return Ok(false);
    }
    let standard = symplectic_j(size)?;
    let (Some(j_std), Some(j_target)) = (standard.gram.as_exact(), target.gram.as_exact()) else {
        unreachable!()
    };
    Ok(&perm.conjugate(j_std, convention) == j_target)
}

/// All ordered sequences of positive even integers summing to `total`.
pub fn even_compositions(total: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (2..=rest).step_by(2) {
            prefix.push(part);
            go(rest - part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if total > 0 && total.is_multiple_of(2) {
        go(total, &mut Vec::new(), &mut out);
    }
    out
}

/// Which part of the form space to solve for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSubspace {
    All,
    Symmetric,
    Skew,
}

/// One linear constraint `sum_t c_t L_t^T B R_t = 0` on the unknown Gram matrix B.
pub(crate) type Constraint<'a, T> = Vec<(&'a Matrix<T>, &'a Matrix<T>, T)>;

struct UnknownMap {
    d: usize,
    subspace: FormSubspace,
    index: Vec<Option<usize>>,
    count: usize,
}

impl UnknownMap {
    fn new(d: usize, subspace: FormSubspace) -> Self {
        let mut index = vec![None; d * d];
        let mut count = 0;
        for i in 0..d {
            for j in 0..d {
                let owns = match subspace {
                    FormSubspace::All => true,
                    FormSubspace::Symmetric => i <= j,
                    FormSubspace::Skew => i < j,
                };
                if owns {
                    index[i * d + j] = Some(count);
                    count += 1;
                }
            }
        }
        UnknownMap {
            d,
            subspace,
            index,
            count,
        }
    }

    /// Unknown and sign carried by Gram entry (i, j).
    fn lookup(&self, i: usize, j: usize) -> Option<(usize, bool)> {
        match self.subspace {
            FormSubspace::All => self.index[i * self.d + j].map(|u| (u, false)),
            FormSubspace::Symmetric => self.index[i.min(j) * self.d + i.max(j)].map(|u| (u, false)),
            FormSubspace::Skew if i == j => None,
            FormSubspace::Skew => self.index[i.min(j) * self.d + i.max(j)].map(|u| (u, i > j)),
        }
    }

    fn gram<T: Scalar>(&self, v: &[T]) -> Matrix<T> {
        Matrix::from_fn(self.d, self.d, |i, j| match self.lookup(i, j) {
            Some((u, true)) => -v[u].clone(),
            Some((u, false)) => v[u].clone(),
            None => T::zero(),
        })
    }
}

fn column_support<T: Scalar>(m: &Matrix<T>) -> Vec<Vec<(usize, T)>> {
    (0..m.cols())
        .map(|c| {
            (0..m.rows())
                .filter(|&r| !m.get(r, c).is_zero())
                .map(|r| (r, m.get(r, c).clone()))
                .collect()
        })
        .collect()
}

/// Basis of the Gram matrices of size `d` in `subspace` satisfying every
/// constraint; each basis matrix has first nonzero entry (row-major) equal to 1.
pub(crate) fn solve_form_space<T: Scalar>(
    d: usize,
    subspace: FormSubspace,
    constraints: &[Constraint<'_, T>],
) -> Vec<Matrix<T>> {
    let map = UnknownMap::new(d, subspace);
    let mut reducer = RowReducer::new(map.count);
    'outer: for constraint in constraints {
        let supports: Vec<_> = constraint
            .iter()
            .map(|(l, r, c)| (column_support(l), column_support(r), c.clone()))
            .collect();
        for a in 0..d {
            for b in 0..d {
                let mut row = vec![T::zero(); map.count];
                for (lsup, rsup, c) in &supports {
                    for (i, li) in &lsup[a] {
                        for (j, rj) in &rsup[b] {
                            if let Some((u, neg)) = map.lookup(*i, *j) {
                                let term = c.clone() * li.clone() * rj.clone();
                                row[u] = if neg {
                                    row[u].clone() - term
                                } else {
                                    row[u].clone() + term
                                };
                            }
                        }
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    reducer.push(row);
                    if reducer.is_full() {
                        break 'outer;
                    }
                }
            }
        }
    }
    reducer
        .kernel()
        .into_iter()
        .map(|v| {
            let mut g = map.gram(&v);
            let mut entries: Vec<T> = g.entries().to_vec();
            normalize_leading(&mut entries);
            g = Matrix::from_fn(d, d, |i, j| entries[i * d + j].clone());
            g
        })
        .collect()
}

/// Forms preserved by every matrix in `gens` (`g^T B g = B`).
pub fn preserved_forms(
    dim: usize,
    gens: &[DenseMatrix],
    subspace: FormSubspace,
) -> Result<Vec<BilinearForm>, MatrixError> {
    if let Some(bad) = gens.iter().find(|g| g.rows() != dim || g.cols() != dim) {
        return Err(MatrixError::ShapeMismatch {
            expected: dim,
            found: (bad.rows(), bad.cols()),
        });
    }
    let grams: Vec<DenseMatrix> = if gens.iter().all(DenseMatrix::is_exact) {
        let exact: Vec<Matrix<Exact>> = gens.iter().filter_map(|g| g.as_exact().cloned()).collect();
        group_constraints_solve(dim, &exact, subspace)
            .into_iter()
            .map(DenseMatrix::from)
            .collect()
    } else {
        let approx: Vec<Matrix<Approx>> = gens.iter().map(DenseMatrix::to_approx).collect();
        group_constraints_solve(dim, &approx, subspace)
            .into_iter()
            .map(DenseMatrix::from)
            .collect()
    };
    Ok(grams.into_iter().map(BilinearForm::classify).collect())
}

fn group_constraints_solve<T: Scalar>(dim: usize, gens: &[Matrix<T>], subspace: FormSubspace) -> Vec<Matrix<T>> {
    let id = Matrix::<T>::identity(dim);
    let constraints: Vec<Constraint<'_, T>> = gens
        .iter()
        .map(|g| vec![(g, g, T::one()), (&id, &id, -T::one())])
        .collect();
    solve_form_space(dim, subspace, &constraints)
}

/// First nondegenerate element of the span of `basis`, trying the basis
/// elements themselves and then seeded random integer combinations.
pub fn find_nondegenerate(basis: &[BilinearForm]) -> Option<BilinearForm> {
    if let Some(f) = basis.iter().find(|f| f.nondegenerate) {
        return Some(f.clone());
    }
    if basis.len() < 2 {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f0e5);
    for _ in 0..8 {
        let coeffs: Vec<i64> = (0..basis.len()).map(|_| rng.gen_range(1..=97)).collect();
        let gram = if basis.iter().all(BilinearForm::is_exact) {
            let mut acc = Matrix::<Exact>::zeros(basis[0].size(), basis[0].size());
            for (f, c) in basis.iter().zip(&coeffs) {
                acc = acc.add(&f.gram.as_exact().unwrap().scale(&Exact::from_int(*c)));
            }
            DenseMatrix::Exact(acc)
        } else {
            let mut acc = Matrix::<Approx>::zeros(basis[0].size(), basis[0].size());
            for (f, c) in basis.iter().zip(&coeffs) {
                acc = acc.add(&f.gram.to_approx().scale(&Approx::from_int(*c)));
            }
            DenseMatrix::Approx(acc)
        };
        let form = BilinearForm::classify(gram);
        if form.nondegenerate {
            return Some(form);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(f: &BilinearForm) -> &Matrix<Exact> {
        f.gram.as_exact().unwrap()
    }

    #[test]
    fn antidiagonal_small_cases() {
        assert_eq!(antidiag_j(1), Matrix::from_ints(&[&[1]]));
        assert_eq!(antidiag_j(2), Matrix::from_ints(&[&[0, 1], &[1, 0]]));
        let j3 = antidiag_j(3);
        assert_eq!(j3, j3.transpose());
        // det of the 3x3 antidiagonal is -1: its square is the identity and it
        // swaps one pair of basis vectors.
        assert_eq!(j3.mul(&j3), Matrix::identity(3));
        assert_eq!(j3.rank(), 3);
    }

    #[test]
    fn symplectic_j_four() {
        let j = symplectic_j(4).unwrap();
        let g = exact(&j);
        assert_eq!(
            g,
            &Matrix::from_ints(&[&[0, 0, 0, 1], &[0, 0, 1, 0], &[0, -1, 0, 0], &[-1, 0, 0, 0]])
        );
        assert_eq!(BilinearForm::classify(j.gram.clone()), j);
        assert!(matches!(symplectic_j(3), Err(MatrixError::OddSize(3))));
    }

    #[test]
    fn partition_blocks() {
        let j = partition_j(&[2, 2]).unwrap();
        let two = exact(&symplectic_j(2).unwrap()).clone();
        assert_eq!(exact(&j), &Matrix::direct_sum(&[two.clone(), two]));
        assert_eq!(partition_j(&[4]).unwrap(), symplectic_j(4).unwrap());
        assert_eq!(partition_j(&[2, 2, 2]).unwrap().size(), 6);
        assert!(matches!(partition_j(&[2, 3]), Err(MatrixError::OddPart(3))));
    }

    #[test]
    fn w_plus_values() {
        assert_eq!(w_plus(1).images_one_based(), vec![1, 2]);
        assert_eq!(w_plus(2).images_one_based(), vec![1, 4, 2, 3]);
        assert_eq!(w_plus(3).images_one_based(), vec![1, 6, 2, 5, 3, 4]);
    }

    #[test]
    fn conjugator_examples() {
        assert_eq!(conjugator_for_partition(&[2, 2]).unwrap(), w_plus(2));
        assert_eq!(conjugator_for_partition(&[6]).unwrap(), PermutationMap::identity(6));
        let p = conjugator_for_partition(&[4, 2]).unwrap();
        assert!(conjugates_to_partition(&p, &[4, 2], PermConvention::SourceColumns).unwrap());
    }

    #[test]
    fn compositions_count() {
        // Compositions of 2n into even parts correspond to compositions of n.
        for n in 1..=6 {
            assert_eq!(even_compositions(2 * n).len(), 1 << (n - 1));
        }
        assert!(even_compositions(5).is_empty());
    }

    #[test]
    fn membership() {
        let j = symplectic_j(2).unwrap();
        let id = DenseMatrix::Exact(Matrix::identity(2));
        assert!(is_in_sp(&id, &j).unwrap());
        let shear = DenseMatrix::Exact(Matrix::from_ints(&[&[1, 1], &[0, 1]]));
        assert!(is_in_sp(&shear, &j).unwrap());
        let stretch = DenseMatrix::Exact(Matrix::from_ints(&[&[2, 0], &[0, 1]]));
        assert!(!is_in_sp(&stretch, &j).unwrap());
        let wrong = DenseMatrix::Exact(Matrix::identity(3));
        assert!(matches!(is_in_sp(&wrong, &j), Err(MatrixError::ShapeMismatch { .. })));
    }

    #[test]
    fn identity_preserves_everything() {
        let id = DenseMatrix::Exact(Matrix::identity(3));
        let all = preserved_forms(3, &[id], FormSubspace::All).unwrap();
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn kron_signs() {
        let skew = symplectic_j(2).unwrap();
        let sym1 = BilinearForm::classify(DenseMatrix::Exact(Matrix::identity(1)));
        let sym3 = BilinearForm::classify(DenseMatrix::Exact(antidiag_j(3)));
        assert_eq!(kron_form(&skew, &sym3).symmetry, Symmetry::Skew);
        assert_eq!(kron_form(&skew, &sym3).size(), 6);
        assert_eq!(kron_form(&sym1, &skew), skew);
        let ss = kron_form(&skew, &skew);
        assert_eq!(ss.symmetry, Symmetry::Symmetric);
        assert!(ss.nondegenerate);
    }
}
