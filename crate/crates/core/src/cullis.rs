//! Cullis' determinant of an `n x k` matrix (`n >= k`).
//!
//! Three independent evaluators are provided: the injection sum, a memoized
//! column expansion, and the signed sum of maximal row minors. They are kept
//! separate on purpose so that each can serve as an oracle for the others.

use std::collections::HashMap;

use crate::error::{CullisError, Result};
use crate::field::Scalar;
use crate::matrix::RectMatrix;
use crate::subsets::{
    binomial, falling_factorial, injections, sequence_sign, set_sign, subsets, Injection, KSubset,
};

/// Default ceiling on elementary products per determinant evaluation.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// Resource ceiling for the determinant kernels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub products: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { products: DEFAULT_BUDGET }
    }
}

impl Budget {
    pub fn new(products: u128) -> Self {
        Budget { products }
    }

    fn check(&self, what: &'static str, needed: u128) -> Result<()> {
        if needed > self.products {
            return Err(CullisError::ResourceGuard { what, needed, limit: self.products });
        }
        Ok(())
    }
}

/// Which evaluator to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DetAlgo {
    Auto,
    Definition,
    Laplace,
    MinorSum,
}

pub fn sgn_set(c: &KSubset) -> i8 {
    c.sign()
}

/// `sgn(π_σ) · sgn_[n](σ([k]))`.
pub fn sgn_injection(s: &Injection) -> i8 {
    sequence_sign(s.images()) * s.image_set().sign()
}

fn check_shape(x: &RectMatrix) -> Result<()> {
    if x.ncols() > x.nrows() {
        return Err(CullisError::ShapeError(format!(
            "Cullis determinant needs n >= k, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

pub fn definition_cost(n: usize, k: usize) -> u128 {
    falling_factorial(n, k).saturating_mul(k as u128)
}

pub fn minorsum_cost(n: usize, k: usize) -> u128 {
    binomial(n, k).saturating_mul((k as u128).pow(3))
}

/// Number of memo states times the work per state.
pub fn laplace_cost(n: usize, k: usize) -> u128 {
    (0..k).fold(0u128, |acc, t| acc.saturating_add(binomial(n, t).saturating_mul((n - t) as u128)))
}

pub fn det_definition(x: &RectMatrix) -> Result<Scalar> {
    det_definition_with(x, &Budget::default(), set_sign)
}

pub fn det_definition_budget(x: &RectMatrix, budget: &Budget) -> Result<Scalar> {
    det_definition_with(x, budget, set_sign)
}

/// Injection sum with a pluggable subset sign (used for fault injection).
pub(crate) fn det_definition_with(
    x: &RectMatrix,
    budget: &Budget,
    subset_sign: fn(&[usize]) -> i8,
) -> Result<Scalar> {
    check_shape(x)?;
    let (n, k) = (x.nrows(), x.ncols());
    budget.check("injection sum", definition_cost(n, k))?;
    let f = x.field();
    let mut acc = f.zero();
    let mut sorted = vec![0usize; k];
    for s in injections(n, k) {
        let mut term = f.one();
        for (j, &i) in s.iter().enumerate() {
            let e = x.at(i - 1, j);
            if e.is_zero() {
                term = f.zero();
                break;
            }
            term *= e;
        }
        if term.is_zero() {
            continue;
        }
        sorted.copy_from_slice(&s);
        sorted.sort_unstable();
        if sequence_sign(&s) * subset_sign(&sorted) < 0 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    Ok(acc)
}

/// Expansion along column `j` (1-based); deeper levels expand along their
/// first remaining column and are memoized on the set of struck rows.
pub fn det_laplace(x: &RectMatrix, j: usize) -> Result<Scalar> {
    det_laplace_budget(x, j, &Budget::default())
}

pub fn det_laplace_budget(x: &RectMatrix, j: usize, budget: &Budget) -> Result<Scalar> {
    check_shape(x)?;
    let (n, k) = (x.nrows(), x.ncols());
    if j == 0 || j > k {
        return Err(CullisError::IndexOutOfRange { index: j, bound: k });
    }
    if n > 64 {
        return Err(CullisError::ShapeError("column expansion supports n <= 64".into()));
    }
    budget.check("column expansion", laplace_cost(n, k))?;
    let mut order = vec![j - 1];
    order.extend((0..k).filter(|&c| c != j - 1));
    let mut memo = HashMap::new();
    Ok(laplace_rec(x, &order, 0, 0, &mut memo))
}

fn laplace_rec(
    x: &RectMatrix,
    order: &[usize],
    depth: usize,
    struck: u64,
    memo: &mut HashMap<u64, Scalar>,
) -> Scalar {
    if let Some(v) = memo.get(&struck) {
        return v.clone();
    }
    let f = x.field();
    let n = x.nrows();
    let col = order[depth];
    let remaining = order.len() - depth;
    // position of `col` among the columns still present
    let col_pos = order[depth..].iter().filter(|&&c| c < col).count();
    let mut acc = f.zero();
    let mut pos = 0usize;
    for r in 0..n {
        if struck & (1 << r) != 0 {
            continue;
        }
        let e = x.at(r, col);
        let sign_even = (pos + col_pos) % 2 == 0;
        pos += 1;
        if e.is_zero() {
            continue;
        }
        let term = if remaining == 1 {
            e.clone()
        } else {
            e * &laplace_rec(x, order, depth + 1, struck | (1 << r), memo)
        };
        if sign_even {
            acc += term;
        } else {
            acc -= term;
        }
    }
    memo.insert(struck, acc.clone());
    acc
}

pub fn det_minorsum(x: &RectMatrix) -> Result<Scalar> {
    det_minorsum_with(x, &Budget::default(), set_sign)
}

pub fn det_minorsum_budget(x: &RectMatrix, budget: &Budget) -> Result<Scalar> {
    det_minorsum_with(x, budget, set_sign)
}

pub(crate) fn det_minorsum_with(
    x: &RectMatrix,
    budget: &Budget,
    subset_sign: fn(&[usize]) -> i8,
) -> Result<Scalar> {
    check_shape(x)?;
    let (n, k) = (x.nrows(), x.ncols());
    budget.check("minor sum", minorsum_cost(n, k))?;
    let f = x.field();
    if k == 1 {
        return Ok(alternating_sum(x, subset_sign));
    }
    let mut acc = f.zero();
    for c in subsets(n, k) {
        let m = x.rows(&c)?.det_square()?;
        if m.is_zero() {
            continue;
        }
        if subset_sign(&c) < 0 {
            acc -= m;
        } else {
            acc += m;
        }
    }
    Ok(acc)
}

fn alternating_sum(x: &RectMatrix, subset_sign: fn(&[usize]) -> i8) -> Scalar {
    let mut acc = x.field().zero();
    for r in 0..x.nrows() {
        if subset_sign(&[r + 1]) < 0 {
            acc -= x.at(r, 0);
        } else {
            acc += x.at(r, 0);
        }
    }
    acc
}

/// Picks the cheaper of the minor sum and the injection sum.
pub fn det(x: &RectMatrix) -> Result<Scalar> {
    det_budget(x, &Budget::default())
}

pub fn det_budget(x: &RectMatrix, budget: &Budget) -> Result<Scalar> {
    check_shape(x)?;
    let (n, k) = (x.nrows(), x.ncols());
    if minorsum_cost(n, k) <= definition_cost(n, k) {
        det_minorsum_budget(x, budget)
    } else {
        det_definition_budget(x, budget)
    }
}

pub fn det_with_algo(x: &RectMatrix, algo: DetAlgo, budget: &Budget) -> Result<Scalar> {
    match algo {
        DetAlgo::Auto => det_budget(x, budget),
        DetAlgo::Definition => det_definition_budget(x, budget),
        DetAlgo::Laplace => det_laplace_budget(x, 1, budget),
        DetAlgo::MinorSum => det_minorsum_budget(x, budget),
    }
}

/// `Σ_{d ⊆ [k], |d| = l} det(X(|d]) · det_l(Y[d|))` for `X: n x k`, `Y: k x l`.
pub fn det_product_rhs(x: &RectMatrix, y: &RectMatrix) -> Result<Scalar> {
    let (n, k, l) = (x.nrows(), x.ncols(), y.ncols());
    if y.nrows() != k {
        return Err(CullisError::ShapeError(format!(
            "inner dimensions differ: {n}x{k} times {}x{l}",
            y.nrows()
        )));
    }
    if x.field() != y.field() {
        return Err(CullisError::FieldMismatch);
    }
    if !(l <= k && k <= n) {
        return Err(CullisError::ShapeError(format!("need l <= k <= n, got l={l}, k={k}, n={n}")));
    }
    let mut acc = x.field().zero();
    for d in subsets(k, l) {
        let a = det(&x.columns(&d)?)?;
        if a.is_zero() {
            continue;
        }
        acc += a * y.rows(&d)?.det_square()?;
    }
    Ok(acc)
}

/// `X^{(d)}`: the `n x k` matrix whose columns are `e_{d_1}, ..., e_{d_k}`.
pub fn basis_matrix(d: &KSubset, field: crate::field::FieldSpec) -> RectMatrix {
    let k = d.k();
    RectMatrix::from_fn(d.n(), k, field, |r, c| {
        if d.elems()[c] == r + 1 {
            field.one()
        } else {
            field.zero()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn subset_and_injection_signs() {
        assert_eq!(sgn_set(&KSubset::new(3, vec![1, 2]).unwrap()), 1);
        assert_eq!(sgn_set(&KSubset::new(3, vec![1, 3]).unwrap()), -1);
        assert_eq!(sgn_set(&KSubset::new(3, vec![2, 3]).unwrap()), 1);
        assert_eq!(sgn_set(&KSubset::new(9, vec![2, 3]).unwrap()), 1);
        assert_eq!(sgn_injection(&Injection::new(3, vec![1, 2]).unwrap()), 1);
        assert_eq!(sgn_injection(&Injection::new(3, vec![3, 1]).unwrap()), 1);
        assert_eq!(sgn_injection(&Injection::new(3, vec![1, 3]).unwrap()), -1);
    }

    #[test]
    fn worked_values() {
        let x = RectMatrix::from_rows(q(), &[[1, 2], [3, 4], [5, 6]]).unwrap();
        let zero = q().zero();
        assert_eq!(det_definition(&x).unwrap(), zero);
        assert_eq!(det_laplace(&x, 1).unwrap(), zero);
        assert_eq!(det_laplace(&x, 2).unwrap(), zero);
        assert_eq!(det_minorsum(&x).unwrap(), zero);
        assert_eq!(det(&x).unwrap(), zero);

        let sq = RectMatrix::from_rows(q(), &[[1, 2], [3, 4]]).unwrap();
        assert_eq!(det_definition(&sq).unwrap(), q().from_i64(-2));

        let v = RectMatrix::from_rows(q(), &[[1], [2], [3]]).unwrap();
        assert_eq!(det_laplace(&v, 1).unwrap(), q().from_i64(2));
        let v4 = RectMatrix::from_rows(q(), &[[1], [2], [3], [4]]).unwrap();
        assert_eq!(det_minorsum(&v4).unwrap(), q().from_i64(-2));

        let e = RectMatrix::from_rows(q(), &[[1, 0], [0, 1], [0, 0]]).unwrap();
        assert_eq!(det_minorsum(&e).unwrap(), q().one());
    }

    #[test]
    fn laplace_terms_by_hand() {
        // expansion of [[1,2],[3,4],[5,6]] along column 1: -2 + 12 - 10
        let x = RectMatrix::from_rows(q(), &[[1, 2], [3, 4], [5, 6]]).unwrap();
        let mut total = q().zero();
        for i in 1..=3usize {
            let minor = x.submatrix_drop(&[i], &[1]).unwrap();
            let t = x.entry(i, 1).unwrap() * &det_definition(&minor).unwrap();
            if (i + 1) % 2 == 0 {
                total += t;
            } else {
                total -= t;
            }
        }
        assert_eq!(total, det_laplace(&x, 1).unwrap());
    }

    #[test]
    fn product_rhs_example() {
        let x = RectMatrix::from_rows(q(), &[[1, 2], [3, 4], [5, 6]]).unwrap();
        let y = RectMatrix::from_rows(q(), &[[1], [1]]).unwrap();
        assert_eq!(det_product_rhs(&x, &y).unwrap(), q().from_i64(7));
        assert_eq!(det(&x.mul(&y).unwrap()).unwrap(), q().from_i64(7));
        let i2 = RectMatrix::identity(2, q());
        assert_eq!(det_product_rhs(&x, &i2).unwrap(), det(&x).unwrap());
    }

    #[test]
    fn basis_matrices_have_subset_sign() {
        let f = FieldSpec::prime(7).unwrap();
        for n in 1..=6 {
            for k in 1..=n.min(4) {
                for d in crate::subsets::ksubsets(n, k) {
                    let x = basis_matrix(&d, f);
                    assert_eq!(det(&x).unwrap(), f.sign(d.sign()));
                }
            }
        }
    }

    #[test]
    fn guard_and_shape_errors() {
        let x = RectMatrix::zeros(2, 3, q());
        assert!(matches!(det(&x), Err(CullisError::ShapeError(_))));
        let big = RectMatrix::zeros(12, 6, q());
        assert!(matches!(
            det_definition_budget(&big, &Budget::new(1000)),
            Err(CullisError::ResourceGuard { .. })
        ));
        assert!(det_laplace(&RectMatrix::zeros(3, 2, q()), 3).is_err());
    }
}
