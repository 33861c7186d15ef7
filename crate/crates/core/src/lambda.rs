//! The polynomial `λ ↦ det(A + λB)` and the degree/rank machinery built on it.
//!
//! Each coefficient `a_d(A, B)` is multilinear in the columns of `A` that it
//! uses, so "for all A" statements reduce to checking standard basis columns.

use crate::cullis::det;
use crate::error::{CullisError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::matrix::RectMatrix;
use crate::sample::{random_matrix, seeded};
use crate::subsets::{injections, subsets};

/// Fixed seed for the sign calibration of the pattern constructors.
pub const CALIBRATION_SEED: u64 = 0x4355_4C4C_4953;
/// Prime used for the calibration draw.
pub const CALIBRATION_PRIME: u64 = 10_007;

/// Coefficients `(a_0, ..., a_k)` of `det(A + λB)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaPoly {
    coeffs: Vec<Scalar>,
    field: FieldSpec,
}

impl LambdaPoly {
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    /// Degree of the formal polynomial; the zero polynomial has degree 0.
    pub fn degree(&self) -> usize {
        self.coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

fn same_shape(a: &RectMatrix, b: &RectMatrix) -> Result<()> {
    if a.field() != b.field() {
        return Err(CullisError::FieldMismatch);
    }
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(CullisError::ShapeMismatch(format!(
            "{}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    if a.ncols() > a.nrows() {
        return Err(CullisError::ShapeError(format!("need n >= k, got {}x{}", a.nrows(), a.ncols())));
    }
    Ok(())
}

/// `A` with the columns listed in `from_b` (0-based) taken from `B`.
fn mix(a: &RectMatrix, b: &RectMatrix, from_b: &[usize]) -> RectMatrix {
    RectMatrix::from_fn(a.nrows(), a.ncols(), a.field(), |r, c| {
        if from_b.contains(&c) {
            b.at(r, c).clone()
        } else {
            a.at(r, c).clone()
        }
    })
}

/// `a_d = Σ_{|S| = d} det(A with the columns in S replaced by those of B)`.
pub fn lambda_coeffs(a: &RectMatrix, b: &RectMatrix) -> Result<LambdaPoly> {
    same_shape(a, b)?;
    let k = a.ncols();
    let field = a.field();
    let mut coeffs = vec![field.zero(); k + 1];
    coeffs[0] = det(a)?;
    for (d, coeff) in coeffs.iter_mut().enumerate().skip(1) {
        for s in subsets(k, d) {
            let cols: Vec<usize> = s.iter().map(|&c| c - 1).collect();
            *coeff += det(&mix(a, b, &cols))?;
        }
    }
    Ok(LambdaPoly { coeffs, field })
}

/// Basis-column search for `a_d(·, B) ≢ 0`. Returns the first witness found:
/// `B` on the columns of `S`, distinct standard basis vectors elsewhere.
/// Repeated basis vectors are skipped since they force a zero determinant.
fn coefficient_witness(b: &RectMatrix, d: usize) -> Result<Option<RectMatrix>> {
    let (n, k) = (b.nrows(), b.ncols());
    let field = b.field();
    for s in subsets(k, d) {
        let on_s: Vec<usize> = s.iter().map(|&c| c - 1).collect();
        let off_s: Vec<usize> = (0..k).filter(|c| !on_s.contains(c)).collect();
        if off_s.is_empty() {
            if !det(b)?.is_zero() {
                return Ok(Some(RectMatrix::zeros(n, k, field)));
            }
            continue;
        }
        for rows in injections(n, off_s.len()) {
            let mut m = b.clone();
            let mut a = RectMatrix::zeros(n, k, field);
            for (&c, &r) in off_s.iter().zip(&rows) {
                for t in 0..n {
                    let v = if t + 1 == r { field.one() } else { field.zero() };
                    *m.at_mut(t, c) = v.clone();
                    *a.at_mut(t, c) = v;
                }
            }
            if !det(&m)?.is_zero() {
                return Ok(Some(a));
            }
        }
    }
    Ok(None)
}

/// `max_A deg_λ det(A + λB)` in the formal sense.
pub fn max_deg_over_all_a(b: &RectMatrix) -> Result<usize> {
    check_tall(b)?;
    for d in (1..=b.ncols()).rev() {
        if coefficient_witness(b, d)?.is_some() {
            return Ok(d);
        }
    }
    Ok(0)
}

/// An `A` with `a_d(A, B) ≠ 0`, built from basis columns (zero on the
/// columns that `B` supplies), or `None` if `a_d(·, B)` vanishes identically.
pub fn deg_witness(b: &RectMatrix, d: usize) -> Result<Option<RectMatrix>> {
    check_tall(b)?;
    if d < 2 || d > b.ncols() {
        return Err(CullisError::ShapeError(format!("degree {d} outside 2..={}", b.ncols())));
    }
    coefficient_witness(b, d)
}

fn check_tall(b: &RectMatrix) -> Result<()> {
    if b.ncols() > b.nrows() {
        return Err(CullisError::ShapeError(format!("need n >= k, got {}x{}", b.nrows(), b.ncols())));
    }
    Ok(())
}

/// `det(X | A) = 0` for every `A ∈ M_{n,k-2}`, decided on basis columns.
pub fn all_completions_vanish(x: &RectMatrix, k: usize) -> Result<bool> {
    let n = x.nrows();
    if x.ncols() != 2 {
        return Err(CullisError::ShapeError(format!("expected n x 2, got {}x{}", n, x.ncols())));
    }
    if k < 2 || k > n {
        return Err(CullisError::ShapeError(format!("need 2 <= k <= n, got k={k}, n={n}")));
    }
    if k == 2 {
        return Ok(det(x)?.is_zero());
    }
    let field = x.field();
    for rows in injections(n, k - 2) {
        let a = RectMatrix::from_fn(n, k - 2, field, |r, c| {
            if rows[c] == r + 1 {
                field.one()
            } else {
                field.zero()
            }
        });
        if !det(&x.hjoin(&a)?)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn det2(a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar) -> Scalar {
    a * d - b * c
}

/// `det [[x11 - x21, x12 - x22], [x_l1 - x_{l+1}1, x_l2 - x_{l+1}2]]`.
pub fn diffdiff_target(x: &RectMatrix, l: usize) -> Scalar {
    let (r, s) = (l - 1, l);
    det2(
        &(x.at(0, 0) - x.at(1, 0)),
        &(x.at(0, 1) - x.at(1, 1)),
        &(x.at(r, 0) - x.at(s, 0)),
        &(x.at(r, 1) - x.at(s, 1)),
    )
}

/// `Σ_{l=3}^{n-k+3} (-1)^l det [[x11 - x21, x12 - x22], [x_l1, x_l2]]`.
pub fn diffsum_target(x: &RectMatrix, k: usize) -> Scalar {
    let n = x.nrows();
    let top0 = x.at(0, 0) - x.at(1, 0);
    let top1 = x.at(0, 1) - x.at(1, 1);
    let mut acc = x.field().zero();
    for l in 3..=(n + 3 - k) {
        let t = det2(&top0, &top1, x.at(l - 1, 0), x.at(l - 1, 1));
        if l % 2 == 0 {
            acc += t;
        } else {
            acc -= t;
        }
    }
    acc
}

/// Cullis' determinant of the first `n - k + 2` rows of `X`.
pub fn plainsum_target(x: &RectMatrix, k: usize) -> Result<Scalar> {
    let rows: Vec<usize> = (1..=x.nrows() + 2 - k).collect();
    det(&x.rows(&rows)?)
}

/// Builds the unsigned 0/1 pattern from `(row, col)` pairs (1-based).
fn pattern(n: usize, width: usize, field: FieldSpec, ones: &[(usize, usize)]) -> RectMatrix {
    RectMatrix::from_fn(n, width, field, |r, c| {
        if ones.contains(&(r + 1, c + 1)) {
            field.one()
        } else {
            field.zero()
        }
    })
}

fn negate_last_column(b: &RectMatrix) -> RectMatrix {
    let last = b.ncols() - 1;
    RectMatrix::from_fn(b.nrows(), b.ncols(), b.field(), |r, c| {
        if c == last {
            -b.at(r, c)
        } else {
            b.at(r, c).clone()
        }
    })
}

/// Fixes the sign of the pattern's last column so that `det(X | B) = target(X)`
/// on a fixed pseudo-random draw over GF(10007).
fn calibrate(
    name: &'static str,
    n: usize,
    ones: &[(usize, usize)],
    width: usize,
    field: FieldSpec,
    target: impl Fn(&RectMatrix) -> Result<Scalar>,
) -> Result<RectMatrix> {
    let big = FieldSpec::prime(CALIBRATION_PRIME)?;
    let b = pattern(n, width, big, ones);
    let mut rng = seeded(CALIBRATION_SEED);
    for _ in 0..16 {
        let x = random_matrix(&mut rng, n, 2, big);
        let t = target(&x)?;
        if t.is_zero() {
            continue;
        }
        let lhs = det(&x.hjoin(&b)?)?;
        let out = pattern(n, width, field, ones);
        if lhs == t {
            return Ok(out);
        }
        if lhs == -&t {
            return Ok(negate_last_column(&out));
        }
        return Err(CullisError::CalibrationFailed(name));
    }
    Err(CullisError::CalibrationFailed(name))
}

/// `B ∈ M_{n,k-2}` with `det(X | B)` equal to the 2x2 determinant of the row
/// differences `1 - 2` and `l - (l+1)`.
pub fn make_b_diffdiff(n: usize, k: usize, l: usize, field: FieldSpec) -> Result<RectMatrix> {
    if !(n >= k && k >= 4 && 2 < l && l < n) {
        return Err(CullisError::ShapeError(format!("need n >= k >= 4 and 2 < l < n, got n={n}, k={k}, l={l}")));
    }
    let mut ones = vec![(1, 1), (2, 1), (l, 2), (l + 1, 2)];
    let free = (3..=n).filter(|&i| i != l && i != l + 1).take(k - 4);
    for (alpha, i) in free.enumerate() {
        ones.push((i, alpha + 3));
    }
    calibrate("row-difference pair pattern", n, &ones, k - 2, field, |x| Ok(diffdiff_target(x, l)))
}

/// `B ∈ M_{n,k-2}` with `det(X | B) = Σ_{l=3}^{n-k+3} (-1)^l det[[x1-x2],[x_l]]`.
pub fn make_b_diffsum(n: usize, k: usize, field: FieldSpec) -> Result<RectMatrix> {
    if !(n >= k && k >= 3) {
        return Err(CullisError::ShapeError(format!("need n >= k >= 3, got n={n}, k={k}")));
    }
    let mut ones = vec![(1, 1), (2, 1)];
    for i in 1..=k - 3 {
        ones.push((n - k + 3 + i, i + 1));
    }
    calibrate("row-difference sum pattern", n, &ones, k - 2, field, |x| Ok(diffsum_target(x, k)))
}

/// `B ∈ M_{n,k-2}` with `det(X | B)` equal to Cullis' determinant of the first
/// `n - k + 2` rows of `X`. For `k = 2` nothing is appended and `None` is
/// returned: the identity is then `det(X)` itself.
pub fn make_b_plainsum(n: usize, k: usize, field: FieldSpec) -> Result<Option<RectMatrix>> {
    if !(n >= k && k >= 2) {
        return Err(CullisError::ShapeError(format!("need n >= k >= 2, got n={n}, k={k}")));
    }
    if k == 2 {
        return Ok(None);
    }
    let ones: Vec<(usize, usize)> = (1..=k - 2).map(|i| (n - k + 2 + i, i)).collect();
    calibrate("truncated expansion pattern", n, &ones, k - 2, field, |x| plainsum_target(x, k)).map(Some)
}

/// `det(X | B)`, treating a missing `B` as zero columns appended.
pub fn completed_det(x: &RectMatrix, b: Option<&RectMatrix>) -> Result<Scalar> {
    match b {
        Some(b) => det(&x.hjoin(b)?),
        None => det(x),
    }
}


#[cfg(test)]
mod properties {
    use proptest::prelude::*;

    use super::*;
    use crate::cullis::det;
    use crate::sample::{random_matrix, random_rank1, random_scalar, seeded};

    fn shape() -> impl Strategy<Value = (usize, usize)> {
        (1..=6usize).prop_flat_map(|n| (Just(n), 1..=n.min(4)))
    }

    proptest! {
        #[test]
        fn polynomial_matches_pointwise(seed in any::<u64>(), (n, k) in shape(), rational in any::<bool>()) {
            let f = if rational { FieldSpec::Rational } else { FieldSpec::Prime(101) };
            let mut rng = seeded(seed);
            let a = random_matrix(&mut rng, n, k, f);
            let b = random_matrix(&mut rng, n, k, f);
            let poly = lambda_coeffs(&a, &b).unwrap();
            prop_assert_eq!(poly.coeffs().len(), k + 1);
            prop_assert!(poly.degree() <= k);
            prop_assert_eq!(&poly.coeffs()[0], &det(&a).unwrap());
            prop_assert_eq!(&poly.coeffs()[k], &det(&b).unwrap());
            for _ in 0..3 {
                let t = random_scalar(&mut rng, f);
                prop_assert_eq!(poly.eval(&t), det(&a.add(&b.scale(&t)).unwrap()).unwrap());
            }
        }

        #[test]
        fn rank_one_has_degree_at_most_one(seed in any::<u64>(), (n, k) in shape()) {
            let b = random_rank1(&mut seeded(seed), n, k, FieldSpec::Prime(7));
            prop_assert!(max_deg_over_all_a(&b).unwrap() <= 1);
        }
    }
}
