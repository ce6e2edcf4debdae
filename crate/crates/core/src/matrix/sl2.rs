//! The k-dimensional irreducible representation of SL(2) on binary forms of
//! degree k-1, in the monomial basis `x^{k-1}, x^{k-2} y, .., y^{k-1}`.

use super::dense::Matrix;
use super::forms::{solve_form_space, BilinearForm, Constraint, FormSubspace};
use super::scalar::{Exact, Scalar};
use super::MatrixError;

/// Standard sl(2) triple acting on degree-(k-1) binary forms.
#[derive(Clone, Debug, PartialEq)]
pub struct Sl2Triple {
    pub e: Matrix<Exact>,
    pub f: Matrix<Exact>,
    pub h: Matrix<Exact>,
}

/// `E = x d/dy`, `F = y d/dx`, `H = x d/dx - y d/dy`.
pub fn sl2_sym_power_action(k: usize) -> Sl2Triple {
    assert!(k >= 1, "S(k) needs k >= 1");
    let mut e = Matrix::zeros(k, k);
    let mut f = Matrix::zeros(k, k);
    let mut h = Matrix::zeros(k, k);
    for j in 0..k {
        if j > 0 {
            e.set(j - 1, j, Exact::from_int(j as i64));
        }
        if j + 1 < k {
            f.set(j + 1, j, Exact::from_int((k - 1 - j) as i64));
        }
        h.set(j, j, Exact::from_int(k as i64 - 1 - 2 * j as i64));
    }
    Sl2Triple { e, f, h }
}

impl Sl2Triple {
    pub fn dim(&self) -> usize {
        self.h.rows()
    }

    pub fn exp_e(&self) -> Matrix<Exact> {
        self.e.exp_nilpotent().expect("E is nilpotent")
    }

    pub fn exp_f(&self) -> Matrix<Exact> {
        self.f.exp_nilpotent().expect("F is nilpotent")
    }

    /// Casimir `EF + FE + H^2/2`, acting on S(k) by `(k^2 - 1)/2`.
    pub fn casimir(&self) -> Matrix<Exact> {
        casimir(&self.e, &self.f, &self.h)
    }
}

pub fn casimir(e: &Matrix<Exact>, f: &Matrix<Exact>, h: &Matrix<Exact>) -> Matrix<Exact> {
    let half = super::scalar::rational(1, 2);
    e.mul(f).add(&f.mul(e)).add(&h.mul(h).scale(&half))
}

/// Casimir eigenvalue on S(k).
pub fn casimir_eigenvalue(k: usize) -> Exact {
    super::scalar::rational((k * k) as i64 - 1, 2)
}

/// `Sym^{k-1}(g)` for a 2x2 matrix g acting on the basis of linear forms by columns.
pub fn sym_power<T: Scalar>(g: &Matrix<T>, k: usize) -> Matrix<T> {
    assert!(g.rows() == 2 && g.cols() == 2, "sym_power needs a 2x2 matrix");
    assert!(k >= 1);
    let deg = k - 1;
    // Image of x is g00 x + g10 y, image of y is g01 x + g11 y; polynomials are
    // stored by the power of y.
    let gx = [g.get(0, 0).clone(), g.get(1, 0).clone()];
    let gy = [g.get(0, 1).clone(), g.get(1, 1).clone()];
    let powers = |lin: &[T; 2]| {
        let mut out: Vec<Vec<T>> = vec![vec![T::one()]];
        for p in 1..=deg {
            let prev = &out[p - 1];
            let mut next = vec![T::zero(); p + 1];
            for (t, c) in prev.iter().enumerate() {
                next[t] = next[t].clone() + c.clone() * lin[0].clone();
                next[t + 1] = next[t + 1].clone() + c.clone() * lin[1].clone();
            }
            out.push(next);
        }
        out
    };
    let px = powers(&gx);
    let py = powers(&gy);
    let mut m: Matrix<T> = Matrix::zeros(k, k);
    for j in 0..k {
        let a = &px[deg - j];
        let b = &py[j];
        for (s, ca) in a.iter().enumerate() {
            for (t, cb) in b.iter().enumerate() {
                let i = s + t;
                let v = m.get(i, j).clone() + ca.clone() * cb.clone();
                m.set(i, j, v);
            }
        }
    }
    m
}

/// The form on S(k) killed by the sl(2) action (`X^T B + B X = 0`),
/// normalized so its first nonzero entry is 1.
pub fn invariant_form_sl2(k: usize) -> Result<BilinearForm, MatrixError> {
    let triple = sl2_sym_power_action(k);
    let id = Matrix::<Exact>::identity(k);
    let constraints: Vec<Constraint<'_, Exact>> = [&triple.e, &triple.f, &triple.h]
        .into_iter()
        .map(|x| vec![(x, &id, Exact::one()), (&id, x, Exact::one())])
        .collect();
    let mut space = solve_form_space(k, FormSubspace::All, &constraints);
    if space.len() != 1 {
        return Err(MatrixError::FormSpaceDimension {
            expected: 1,
            found: space.len(),
        });
    }
    Ok(BilinearForm::classify(space.remove(0).into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::forms::Symmetry;
    use crate::matrix::scalar::Approx;

    #[test]
    fn standard_representation() {
        let t = sl2_sym_power_action(2);
        assert_eq!(t.e, Matrix::from_ints(&[&[0, 1], &[0, 0]]));
        assert_eq!(t.f, Matrix::from_ints(&[&[0, 0], &[1, 0]]));
        assert_eq!(t.h, Matrix::from_ints(&[&[1, 0], &[0, -1]]));
    }

    #[test]
    fn weights_of_s3() {
        assert_eq!(
            sl2_sym_power_action(3).h,
            Matrix::from_ints(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]])
        );
    }

    #[test]
    fn sl2_relations() {
        for k in 1..=8 {
            let t = sl2_sym_power_action(k);
            assert!(t.h.trace().is_zero());
            assert_eq!(t.e.mul(&t.f).sub(&t.f.mul(&t.e)), t.h);
            assert_eq!(t.h.mul(&t.e).sub(&t.e.mul(&t.h)), t.e.scale(&Exact::from_int(2)));
            assert_eq!(t.casimir(), Matrix::identity(k).scale(&casimir_eigenvalue(k)));
        }
    }

    #[test]
    fn sym_power_of_unipotents_matches_exponentials() {
        let up = Matrix::<Exact>::from_ints(&[&[1, 1], &[0, 1]]);
        let down = Matrix::<Exact>::from_ints(&[&[1, 0], &[1, 1]]);
        for k in 1..=7 {
            let t = sl2_sym_power_action(k);
            assert_eq!(sym_power(&up, k), t.exp_e());
            assert_eq!(sym_power(&down, k), t.exp_f());
        }
    }

    #[test]
    fn sym_power_is_multiplicative() {
        let a = Matrix::<Approx>::from_rows(vec![
            vec![Approx::new(0.3, 0.1), Approx::new(-1.2, 0.0)],
            vec![Approx::new(0.5, -0.7), Approx::new(2.0, 0.4)],
        ]);
        let b = Matrix::<Approx>::from_rows(vec![
            vec![Approx::new(1.1, 0.0), Approx::new(0.2, 0.9)],
            vec![Approx::new(-0.4, 0.3), Approx::new(0.8, 0.0)],
        ]);
        for k in 1..=6 {
            let lhs = sym_power(&a.mul(&b), k);
            let rhs = sym_power(&a, k).mul(&sym_power(&b, k));
            assert!(lhs.sub(&rhs).max_abs() < 1e-12);
        }
    }

    #[test]
    fn small_invariant_forms() {
        let f1 = invariant_form_sl2(1).unwrap();
        assert_eq!(f1.gram.as_exact().unwrap(), &Matrix::from_ints(&[&[1]]));
        assert_eq!(f1.symmetry, Symmetry::Symmetric);
        let f2 = invariant_form_sl2(2).unwrap();
        assert_eq!(f2.gram.as_exact().unwrap(), &Matrix::from_ints(&[&[0, 1], &[-1, 0]]));
        assert_eq!(f2.symmetry, Symmetry::Skew);
        let f3 = invariant_form_sl2(3).unwrap();
        assert_eq!(f3.symmetry, Symmetry::Symmetric);
        assert!(f3.nondegenerate);
        let g = f3.gram.as_exact().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(g.get(i, j).is_zero(), i + j != 2);
            }
        }
        // Independent check: invariance under the group elements exp(E), exp(F).
        let t = sl2_sym_power_action(3);
        for x in [t.exp_e(), t.exp_f()] {
            assert_eq!(&x.transpose().mul(g).mul(&x), g);
        }
    }
}
