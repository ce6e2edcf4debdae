use super::dense::{Matrix, RowReducer};
use super::scalar::Scalar;

/// Basis of `{X : X S_i = T_i X for all i}`, X of shape `target_dim x source_dim`.
///
/// `source` and `target` list the actions of the same generators in the two
/// representations. With `source == target` this is the commutant.
pub fn intertwiners<T: Scalar>(
    source_dim: usize,
    target_dim: usize,
    source: &[Matrix<T>],
    target: &[Matrix<T>],
) -> Vec<Matrix<T>> {
    assert_eq!(source.len(), target.len(), "generator lists differ in length");
    let (s, t) = (source_dim, target_dim);
    let unknowns = t * s;
    let mut reducer = RowReducer::new(unknowns);
    'outer: for (sg, tg) in source.iter().zip(target) {
        for a in 0..t {
            for b in 0..s {
                let mut row = vec![T::zero(); unknowns];
                for c in 0..s {
                    let v = sg.get(c, b);
                    if !v.is_zero() {
                        row[a * s + c] = row[a * s + c].clone() + v.clone();
                    }
                }
                for c in 0..t {
                    let v = tg.get(a, c);
                    if !v.is_zero() {
                        row[c * s + b] = row[c * s + b].clone() - v.clone();
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
        .map(|v| Matrix::from_fn(t, s, |i, j| v[i * s + j].clone()))
        .collect()
}

pub fn commutant_dimension<T: Scalar>(dim: usize, gens: &[Matrix<T>]) -> usize {
    intertwiners(dim, dim, gens, gens).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::scalar::Exact;

    #[test]
    fn commutant_of_scalar_and_diagonal() {
        let id = Matrix::<Exact>::identity(3);
        assert_eq!(commutant_dimension(3, &[id]), 9);
        let diag = Matrix::<Exact>::from_ints(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 2]]);
        assert_eq!(commutant_dimension(3, &[diag]), 1 + 4);
    }

    #[test]
    fn hom_into_a_sum_of_two_copies() {
        // The 2-dimensional irreducible of S3, generated by a transposition and a 3-cycle.
        let gens = [
            Matrix::<Exact>::from_ints(&[&[-1, 1], &[0, 1]]),
            Matrix::<Exact>::from_ints(&[&[0, -1], &[1, -1]]),
        ];
        let doubled: Vec<_> = gens
            .iter()
            .map(|a| Matrix::direct_sum(&[a.clone(), a.clone()]))
            .collect();
        assert_eq!(intertwiners(2, 4, &gens, &doubled).len(), 2);
        // A single 3-cycle splits into two characters, so alone it leaves more room.
        assert_eq!(intertwiners(2, 4, &gens[1..], &doubled[1..]).len(), 4);
    }
}
