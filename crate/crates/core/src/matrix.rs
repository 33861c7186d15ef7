//! Dense rectangular matrices over a [`FieldSpec`].
//!
//! Public index arguments are 1-based, matching the usual `A[J1|J2]` and
//! `A(J1|J2)` submatrix notation; storage is row-major and 0-based.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{CullisError, Result};
use crate::field::{FieldSpec, Scalar};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RectMatrix {
    n: usize,
    k: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl RectMatrix {
    pub fn new(n: usize, k: usize, field: FieldSpec, entries: Vec<Scalar>) -> Result<Self> {
        if n == 0 || k == 0 {
            return Err(CullisError::ShapeError(format!("{n}x{k} has an empty dimension")));
        }
        if entries.len() != n * k {
            return Err(CullisError::LengthMismatch { got: entries.len(), n, k });
        }
        if entries.iter().any(|e| e.field() != field) {
            return Err(CullisError::FieldMismatch);
        }
        Ok(RectMatrix { n, k, field, entries })
    }

    pub fn zeros(n: usize, k: usize, field: FieldSpec) -> Self {
        assert!(n > 0 && k > 0, "matrices need at least one row and column");
        RectMatrix { n, k, field, entries: vec![field.zero(); n * k] }
    }

    pub fn identity(n: usize, field: FieldSpec) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.entries[i * n + i] = field.one();
        }
        m
    }

    /// Matrix with every entry equal to one.
    pub fn ones(n: usize, k: usize, field: FieldSpec) -> Self {
        RectMatrix { n, k, field, entries: vec![field.one(); n * k] }
    }

    /// The matrix unit `E_{ij}` (1-based).
    pub fn unit(n: usize, k: usize, i: usize, j: usize, field: FieldSpec) -> Result<Self> {
        check_index(i, n)?;
        check_index(j, k)?;
        let mut m = Self::zeros(n, k, field);
        m.entries[(i - 1) * k + (j - 1)] = field.one();
        Ok(m)
    }

    /// Builds a matrix from integer rows.
    pub fn from_rows<R: AsRef<[i64]>>(field: FieldSpec, rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let k = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != k) {
            return Err(CullisError::ShapeMismatch("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().map(|&v| field.from_i64(v)))
            .collect();
        Self::new(n, k, field, entries)
    }

    pub fn from_fn(n: usize, k: usize, field: FieldSpec, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut entries = Vec::with_capacity(n * k);
        for r in 0..n {
            for c in 0..k {
                entries.push(f(r, c));
            }
        }
        Self::new(n, k, field, entries).expect("from_fn produced a consistent matrix")
    }

    pub fn nrows(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    /// Entry `x_{ij}` with 1-based indices.
    pub fn entry(&self, i: usize, j: usize) -> Result<&Scalar> {
        check_index(i, self.n)?;
        check_index(j, self.k)?;
        Ok(&self.entries[(i - 1) * self.k + (j - 1)])
    }

    /// 0-based access for internal kernels.
    #[inline]
    pub(crate) fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.entries[r * self.k + c]
    }

    #[inline]
    pub(crate) fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.entries[r * self.k + c]
    }

    /// Copy of the matrix with entry `(i, j)` (1-based) replaced.
    pub fn with_entry(&self, i: usize, j: usize, v: Scalar) -> Result<Self> {
        check_index(i, self.n)?;
        check_index(j, self.k)?;
        if v.field() != self.field {
            return Err(CullisError::FieldMismatch);
        }
        let mut m = self.clone();
        m.entries[(i - 1) * self.k + (j - 1)] = v;
        Ok(m)
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.entries[r * self.k..(r + 1) * self.k]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.n).map(|r| self.at(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    /// `A[rows|cols]`: keeps the listed rows and columns in increasing order.
    pub fn submatrix_keep(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let rows = normalize_indices(rows, self.n)?;
        let cols = normalize_indices(cols, self.k)?;
        if rows.is_empty() || cols.is_empty() {
            return Err(CullisError::EmptyResult);
        }
        Ok(self.select(&rows, &cols))
    }

    /// `A(rows|cols)`: strikes out the listed rows and columns.
    pub fn submatrix_drop(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        let rows = normalize_indices(rows, self.n)?;
        let cols = normalize_indices(cols, self.k)?;
        let keep_r: Vec<usize> = (1..=self.n).filter(|i| !rows.contains(i)).collect();
        let keep_c: Vec<usize> = (1..=self.k).filter(|j| !cols.contains(j)).collect();
        if keep_r.is_empty() || keep_c.is_empty() {
            return Err(CullisError::EmptyResult);
        }
        Ok(self.select(&keep_r, &keep_c))
    }

    /// `A(|cols]`: the listed columns, all rows.
    pub fn columns(&self, cols: &[usize]) -> Result<Self> {
        let all: Vec<usize> = (1..=self.n).collect();
        self.submatrix_keep(&all, cols)
    }

    /// `A[rows|)`: the listed rows, all columns.
    pub fn rows(&self, rows: &[usize]) -> Result<Self> {
        let all: Vec<usize> = (1..=self.k).collect();
        self.submatrix_keep(rows, &all)
    }

    fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(self.at(r - 1, c - 1).clone());
            }
        }
        RectMatrix { n: rows.len(), k: cols.len(), field: self.field, entries }
    }

    /// Column concatenation `A|B`.
    pub fn hjoin(&self, other: &RectMatrix) -> Result<Self> {
        if self.field != other.field {
            return Err(CullisError::FieldMismatch);
        }
        if self.n != other.n {
            return Err(CullisError::ShapeMismatch(format!(
                "cannot join {} rows with {} rows",
                self.n, other.n
            )));
        }
        let k = self.k + other.k;
        let mut entries = Vec::with_capacity(self.n * k);
        for r in 0..self.n {
            entries.extend_from_slice(self.row(r));
            entries.extend_from_slice(other.row(r));
        }
        Ok(RectMatrix { n: self.n, k, field: self.field, entries })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.k, self.n, self.field, |r, c| self.at(c, r).clone())
    }

    pub fn mul(&self, other: &RectMatrix) -> Result<Self> {
        if self.field != other.field {
            return Err(CullisError::FieldMismatch);
        }
        if self.k != other.n {
            return Err(CullisError::ShapeMismatch(format!(
                "{}x{} times {}x{}",
                self.n, self.k, other.n, other.k
            )));
        }
        let mut out = Self::zeros(self.n, other.k, self.field);
        for r in 0..self.n {
            for t in 0..self.k {
                let a = self.at(r, t);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.k {
                    let prod = a * other.at(t, c);
                    *out.at_mut(r, c) += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &RectMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &RectMatrix) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &RectMatrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Self> {
        if self.field != other.field {
            return Err(CullisError::FieldMismatch);
        }
        if (self.n, self.k) != (other.n, other.k) {
            return Err(CullisError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.k, other.n, other.k
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect();
        Ok(RectMatrix { n: self.n, k: self.k, field: self.field, entries })
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        self.map(|e| e * s)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Self {
        let entries = self.entries.iter().map(f).collect();
        RectMatrix { n: self.n, k: self.k, field: self.field, entries }
    }

    /// Reinterprets every entry in another field.
    pub fn to_field(&self, field: FieldSpec) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.to_field(field)).collect::<Result<_>>()?;
        Ok(RectMatrix { n: self.n, k: self.k, field, entries })
    }

    /// Column-major stacking: `vec([[a,b],[c,d]]) = (a,c,b,d)`.
    pub fn vec(&self) -> Vec<Scalar> {
        let mut v = Vec::with_capacity(self.n * self.k);
        for c in 0..self.k {
            for r in 0..self.n {
                v.push(self.at(r, c).clone());
            }
        }
        v
    }

    /// Inverse of [`RectMatrix::vec`].
    pub fn unvec(v: &[Scalar], n: usize, k: usize, field: FieldSpec) -> Result<Self> {
        if v.len() != n * k {
            return Err(CullisError::LengthMismatch { got: v.len(), n, k });
        }
        if n == 0 || k == 0 {
            return Err(CullisError::ShapeError(format!("{n}x{k} has an empty dimension")));
        }
        if v.iter().any(|e| e.field() != field) {
            return Err(CullisError::FieldMismatch);
        }
        Ok(Self::from_fn(n, k, field, |r, c| v[c * n + r].clone()))
    }

    /// Rank over the matrix's field.
    ///
    /// Residue fields use ordinary elimination. Rationals are scaled row by row
    /// to integers and reduced with fraction-free (Bareiss) elimination.
    pub fn rank(&self) -> usize {
        match self.field {
            FieldSpec::Prime(_) => {
                let mut rows: Vec<Vec<Scalar>> = (0..self.n).map(|r| self.row(r).to_vec()).collect();
                echelon_field(&mut rows, self.k).0
            }
            FieldSpec::Rational => {
                let mut rows = self.integer_rows();
                bareiss(&mut rows, self.k).0
            }
        }
    }

    /// Ordinary determinant of a square matrix.
    pub fn det_square(&self) -> Result<Scalar> {
        if self.n != self.k {
            return Err(CullisError::ShapeError(format!(
                "determinant of non-square {}x{}",
                self.n, self.k
            )));
        }
        let n = self.n;
        match n {
            1 => return Ok(self.entries[0].clone()),
            2 => return Ok(self.at(0, 0) * self.at(1, 1) - self.at(0, 1) * self.at(1, 0)),
            _ => {}
        }
        match self.field {
            FieldSpec::Prime(_) => {
                let mut rows: Vec<Vec<Scalar>> = (0..n).map(|r| self.row(r).to_vec()).collect();
                let (rank, sign) = echelon_field(&mut rows, n);
                if rank < n {
                    return Ok(self.field.zero());
                }
                let mut d = self.field.sign(sign);
                for (i, row) in rows.iter().enumerate() {
                    d *= &row[i];
                }
                Ok(d)
            }
            FieldSpec::Rational => {
                let mut scale = BigInt::one();
                let mut rows = Vec::with_capacity(n);
                for r in 0..n {
                    let (row, l) = integer_row(self.row(r));
                    scale *= l;
                    rows.push(row);
                }
                let (rank, sign, last) = bareiss(&mut rows, n);
                if rank < n {
                    return Ok(self.field.zero());
                }
                let num = if sign < 0 { -last } else { last };
                self.field.fraction(&num, &scale)
            }
        }
    }

    fn integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.n).map(|r| integer_row(self.row(r)).0).collect()
    }
}

fn check_index(i: usize, bound: usize) -> Result<()> {
    if i == 0 || i > bound {
        return Err(CullisError::IndexOutOfRange { index: i, bound });
    }
    Ok(())
}

fn normalize_indices(idx: &[usize], bound: usize) -> Result<Vec<usize>> {
    for &i in idx {
        check_index(i, bound)?;
    }
    let mut v = idx.to_vec();
    v.sort_unstable();
    v.dedup();
    Ok(v)
}

/// Scales a row of rationals by the lcm of its denominators.
fn integer_row(row: &[Scalar]) -> (Vec<BigInt>, BigInt) {
    let l = row.iter().fold(BigInt::one(), |acc, e| {
        acc.lcm(e.as_rational().expect("rational entry").denom())
    });
    let ints = row
        .iter()
        .map(|e| {
            let r = e.as_rational().expect("rational entry");
            r.numer() * (&l / r.denom())
        })
        .collect();
    (ints, l)
}

/// Row echelon form in place. Returns (rank, sign of the row permutation).
fn echelon_field(rows: &mut [Vec<Scalar>], ncols: usize) -> (usize, i8) {
    let mut rank = 0;
    let mut sign = 1i8;
    for c in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        if piv != rank {
            rows.swap(piv, rank);
            sign = -sign;
        }
        let inv = rows[rank][c].inv().expect("pivot is nonzero");
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] * &inv;
            for t in c..ncols {
                let d = &f * &pivot_row[t];
                row[t] -= d;
            }
        }
        rank += 1;
    }
    (rank, sign)
}

/// Fraction-free elimination. Returns (rank, row-swap sign, last pivot).
/// For a nonsingular square input the last pivot is the determinant.
fn bareiss(rows: &mut [Vec<BigInt>], ncols: usize) -> (usize, i8, BigInt) {
    let mut rank = 0;
    let mut sign = 1i8;
    let mut prev = BigInt::one();
    for c in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        if piv != rank {
            rows.swap(piv, rank);
            sign = -sign;
        }
        let (head, tail) = rows.split_at_mut(rank + 1);
        let p = &head[rank];
        for row in tail.iter_mut() {
            for t in (c + 1)..ncols {
                row[t] = (&row[t] * &p[c] - &row[c] * &p[t]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = p[c].clone();
        rank += 1;
    }
    (rank, sign, prev)
}

impl fmt::Display for RectMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.n {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.k {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}


#[cfg(test)]
mod properties {
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;
    use crate::error::CullisError;
    use crate::preserver::nth_matrix;
    use crate::sample::{random_matrix, seeded};
    use crate::subsets::subsets;

    fn shape() -> impl Strategy<Value = (usize, usize)> {
        (1..=6usize).prop_flat_map(|n| (Just(n), 1..=n.min(4)))
    }

    proptest! {
        #[test]
        fn keep_and_drop_are_complementary(seed in any::<u64>(), (n, k) in shape()) {
            let mut rng = seeded(seed);
            let x = random_matrix(&mut rng, n, k, FieldSpec::Rational);
            let rows: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
            let cols: Vec<usize> = (1..=k).filter(|_| rng.random_bool(0.5)).collect();
            let rest_rows: Vec<usize> = (1..=n).filter(|r| !rows.contains(r)).collect();
            let rest_cols: Vec<usize> = (1..=k).filter(|c| !cols.contains(c)).collect();
            if rows.is_empty() || cols.is_empty() {
                prop_assert!(matches!(x.submatrix_drop(&rest_rows, &rest_cols), Err(CullisError::EmptyResult)));
            } else {
                prop_assert_eq!(x.submatrix_keep(&rows, &cols).unwrap(), x.submatrix_drop(&rest_rows, &rest_cols).unwrap());
            }
        }

        #[test]
        fn vec_roundtrip(seed in any::<u64>(), (n, k) in shape(), p in prop_oneof![Just(2u64), Just(7)]) {
            let f = FieldSpec::Prime(p);
            let x = random_matrix(&mut seeded(seed), n, k, f);
            let v = x.vec();
            prop_assert_eq!(&v[..n], &x.column(0)[..]);
            prop_assert_eq!(RectMatrix::unvec(&v, n, k, f).unwrap(), x);
        }
    }

    #[test]
    fn rank_matches_largest_nonzero_minor() {
        let f = FieldSpec::Prime(2);
        for idx in 0..64 {
            let x = nth_matrix(idx, 3, 2, f);
            let brute = (1..=2)
                .filter(|&r| {
                    subsets(3, r).any(|rows| {
                        subsets(2, r).any(|cols| !x.submatrix_keep(&rows, &cols).unwrap().det_square().unwrap().is_zero())
                    })
                })
                .max()
                .unwrap_or(0);
            assert_eq!(x.rank(), brute, "{x}");
        }
    }
}
