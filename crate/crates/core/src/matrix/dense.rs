use std::fmt;

use super::scalar::{format_exact, Approx, Exact, Scalar};

/// Row-major dense matrix over one of the two scalar paths.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = T::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&v| T::from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    /// Matrix product; skips zero entries of the left factor.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        Self::from_fn(self.rows * other.rows, self.cols * other.cols, |i, j| {
            self.get(i / other.rows, j / other.cols).clone() * other.get(i % other.rows, j % other.cols).clone()
        })
    }

    pub fn direct_sum(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self.get(i, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(Scalar::magnitude).fold(0.0, f64::max)
    }

    pub fn to_approx(&self) -> Matrix<Approx> {
        self.map(Scalar::to_approx)
    }

    pub fn rank(&self) -> usize {
        let mut reducer = RowReducer::new(self.cols);
        for i in 0..self.rows {
            reducer.push(self.data[i * self.cols..(i + 1) * self.cols].to_vec());
        }
        reducer.rank()
    }

    /// Basis of the right kernel, each vector scaled so its first nonzero entry is 1.
    pub fn null_space(&self) -> Vec<Vec<T>> {
        let mut reducer = RowReducer::new(self.cols);
        for i in 0..self.rows {
            reducer.push(self.data[i * self.cols..(i + 1) * self.cols].to_vec());
        }
        reducer.kernel()
    }

    /// Inverse by Gauss-Jordan elimination; `None` if singular.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<T>> = (0..n)
            .map(|i| {
                let mut row: Vec<T> = self.data[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| if i == j { T::one() } else { T::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !aug[r][col].is_zero())
                .max_by(|&a, &b| aug[a][col].magnitude().total_cmp(&aug[b][col].magnitude()))?;
            aug.swap(col, pivot);
            let p = aug[col][col].clone();
            for x in aug[col].iter_mut() {
                *x = x.clone() / p.clone();
            }
            let pivot_row = aug[col].clone();
            for (r, row) in aug.iter_mut().enumerate() {
                if r != col && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, v) in row.iter_mut().zip(&pivot_row) {
                        *x = x.clone() - f.clone() * v.clone();
                    }
                }
            }
        }
        Some(Self::from_rows(aug.into_iter().map(|row| row[n..].to_vec()).collect()))
    }

    /// Exact equality on the exact path, max-entry distance within tolerance otherwise.
    pub fn approx_eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.sub(other).is_zero()
    }
}

impl Matrix<Exact> {
    /// Exponential of a nilpotent matrix (finite series).
    pub fn exp_nilpotent(&self) -> Option<Self> {
        let n = self.rows;
        let mut term = Self::identity(n);
        let mut sum = Self::identity(n);
        for j in 1..=n {
            term = term.mul(self).scale(&super::scalar::rational(1, j as i64));
            if term.is_zero() {
                return Some(sum);
            }
            sum = sum.add(&term);
        }
        if term.mul(self).is_zero() {
            Some(sum)
        } else {
            None
        }
    }
}

impl fmt::Debug for Matrix<Exact> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| format_exact(self.get(i, j))).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Matrix<Approx> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols)
                .map(|j| {
                    let z = self.get(i, j);
                    if z.im.abs() <= 1e-12 {
                        format!("{:.6}", z.re)
                    } else {
                        format!("{:.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Incremental reduced row echelon form.
///
/// Rows are pushed one at a time and kept fully reduced, so the kernel can be
/// read off at any point and pushing stops mattering once the rank is full.
pub struct RowReducer<T> {
    cols: usize,
    /// (pivot column, row with a 1 at the pivot and 0 in every other pivot column)
    pivots: Vec<(usize, Vec<T>)>,
}

impl<T: Scalar> RowReducer<T> {
    pub fn new(cols: usize) -> Self {
        RowReducer {
            cols,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.cols
    }

    /// Adds a constraint row. Returns true if the rank increased.
    pub fn push(&mut self, mut row: Vec<T>) -> bool {
        debug_assert_eq!(row.len(), self.cols);
        if self.is_full() {
            return false;
        }
        let scale = if T::EXACT {
            1.0
        } else {
            row.iter().map(Scalar::magnitude).fold(1.0, f64::max)
        };
        for (pc, prow) in &self.pivots {
            let f = row[*pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, p) in row.iter_mut().zip(prow) {
                if !p.is_zero() {
                    *x = x.clone() - f.clone() * p.clone();
                }
            }
        }
        let negligible = |x: &T| {
            if T::EXACT {
                x.is_zero()
            } else {
                x.magnitude() <= super::scalar::TOLERANCE * scale
            }
        };
        let pivot = if T::EXACT {
            row.iter().position(|x| !x.is_zero())
        } else {
            row.iter()
                .enumerate()
                .filter(|(_, x)| !negligible(x))
                .max_by(|a, b| a.1.magnitude().total_cmp(&b.1.magnitude()))
                .map(|(i, _)| i)
        };
        let Some(pc) = pivot else {
            return false;
        };
        let p = row[pc].clone();
        for x in row.iter_mut() {
            if negligible(x) {
                *x = T::zero();
            } else {
                *x = x.clone() / p.clone();
            }
        }
        row[pc] = T::one();
        for (_, prow) in self.pivots.iter_mut() {
            let f = prow[pc].clone();
            if f.is_zero() {
                continue;
            }
            for (x, r) in prow.iter_mut().zip(&row) {
                if !r.is_zero() {
                    *x = x.clone() - f.clone() * r.clone();
                }
            }
            prow[pc] = T::zero();
        }
        self.pivots.push((pc, row));
        true
    }

    pub fn kernel(&self) -> Vec<Vec<T>> {
        let mut is_pivot = vec![false; self.cols];
        for (pc, _) in &self.pivots {
            is_pivot[*pc] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![T::zero(); self.cols];
            v[free] = T::one();
            for (pc, prow) in &self.pivots {
                v[*pc] = -prow[free].clone();
            }
            normalize_leading(&mut v);
            basis.push(v);
        }
        basis
    }
}

/// Scales `v` so its first nonzero entry is 1.
pub fn normalize_leading<T: Scalar>(v: &mut [T]) {
    if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
        for x in v.iter_mut() {
            *x = if x.is_zero() {
                T::zero()
            } else {
                x.clone() / lead.clone()
            };
        }
    }
}

/// A matrix tagged with the arithmetic path that produced it.
#[derive(Clone, Debug, PartialEq)]
pub enum DenseMatrix {
    Exact(Matrix<Exact>),
    Approx(Matrix<Approx>),
}

impl DenseMatrix {
    pub fn is_exact(&self) -> bool {
        matches!(self, DenseMatrix::Exact(_))
    }

    pub fn rows(&self) -> usize {
        match self {
            DenseMatrix::Exact(m) => m.rows(),
            DenseMatrix::Approx(m) => m.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            DenseMatrix::Exact(m) => m.cols(),
            DenseMatrix::Approx(m) => m.cols(),
        }
    }

    pub fn to_approx(&self) -> Matrix<Approx> {
        match self {
            DenseMatrix::Exact(m) => m.to_approx(),
            DenseMatrix::Approx(m) => m.clone(),
        }
    }

    pub fn as_exact(&self) -> Option<&Matrix<Exact>> {
        match self {
            DenseMatrix::Exact(m) => Some(m),
            DenseMatrix::Approx(_) => None,
        }
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        match (self, other) {
            (DenseMatrix::Exact(a), DenseMatrix::Exact(b)) => DenseMatrix::Exact(a.mul(b)),
            _ => DenseMatrix::Approx(self.to_approx().mul(&other.to_approx())),
        }
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        match (self, other) {
            (DenseMatrix::Exact(a), DenseMatrix::Exact(b)) => DenseMatrix::Exact(a.kron(b)),
            _ => DenseMatrix::Approx(self.to_approx().kron(&other.to_approx())),
        }
    }

    pub fn transpose(&self) -> DenseMatrix {
        match self {
            DenseMatrix::Exact(m) => DenseMatrix::Exact(m.transpose()),
            DenseMatrix::Approx(m) => DenseMatrix::Approx(m.transpose()),
        }
    }

    pub fn trace(&self) -> Approx {
        match self {
            DenseMatrix::Exact(m) => m.trace().to_approx(),
            DenseMatrix::Approx(m) => m.trace(),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            DenseMatrix::Exact(m) => m.rank(),
            DenseMatrix::Approx(m) => m.rank(),
        }
    }

    /// Block-diagonal sum; exact only if every block is.
    pub fn direct_sum(blocks: &[DenseMatrix]) -> DenseMatrix {
        if blocks.iter().all(DenseMatrix::is_exact) {
            let exact: Vec<_> = blocks.iter().filter_map(|b| b.as_exact().cloned()).collect();
            DenseMatrix::Exact(Matrix::direct_sum(&exact))
        } else {
            let approx: Vec<_> = blocks.iter().map(DenseMatrix::to_approx).collect();
            DenseMatrix::Approx(Matrix::direct_sum(&approx))
        }
    }

    /// Max-entry distance: exact zero test when both sides are exact.
    pub fn approx_eq(&self, other: &DenseMatrix) -> bool {
        match (self, other) {
            (DenseMatrix::Exact(a), DenseMatrix::Exact(b)) => a == b,
            _ => self.to_approx().approx_eq(&other.to_approx()),
        }
    }
}

impl From<Matrix<Exact>> for DenseMatrix {
    fn from(m: Matrix<Exact>) -> Self {
        DenseMatrix::Exact(m)
    }
}

impl From<Matrix<Approx>> for DenseMatrix {
    fn from(m: Matrix<Approx>) -> Self {
        DenseMatrix::Approx(m)
    }
}
