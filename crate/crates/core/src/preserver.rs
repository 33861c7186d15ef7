//! Linear maps on `M_{n,k}` and whether they preserve Cullis' determinant.
//!
//! A map is stored as the `(nk) x (nk)` matrix acting on column-major
//! `vec(X)`, so `E_{ij}` is basis vector `(j-1)n + i`.

use rayon::prelude::*;

use crate::cullis::{det, sgn_set};
use crate::error::{CullisError, Result};
use crate::field::{FieldSpec, Scalar};
use crate::lambda::max_deg_over_all_a;
use crate::matrix::RectMatrix;
use crate::poly::{nonvanishing_point, SparsePoly};
use crate::sample::{random_matrix, seeded};
use crate::subsets::{ksubsets, set_sign};

/// Default cap on exhaustive enumeration sizes.
pub const DEFAULT_ENUM_BUDGET: u128 = 10_000_000;
/// Default cap on monomial products in the symbolic expansion.
pub const DEFAULT_SYMBOLIC_GUARD: u128 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMapNK {
    n: usize,
    k: usize,
    mat: RectMatrix,
}

impl LinearMapNK {
    pub fn new(n: usize, k: usize, mat: RectMatrix) -> Result<Self> {
        if mat.nrows() != n * k || mat.ncols() != n * k {
            return Err(CullisError::ShapeMismatch(format!(
                "a map on {n}x{k} needs a {0}x{0} matrix, got {1}x{2}",
                n * k,
                mat.nrows(),
                mat.ncols()
            )));
        }
        Ok(LinearMapNK { n, k, mat })
    }

    /// The map whose value on each `E_{ij}` is `f(E_{ij})`.
    pub fn from_fn(n: usize, k: usize, field: FieldSpec, f: impl Fn(&RectMatrix) -> RectMatrix) -> Self {
        let nk = n * k;
        let mut cols = Vec::with_capacity(nk);
        for j in 1..=k {
            for i in 1..=n {
                let e = RectMatrix::unit(n, k, i, j, field).expect("indices in range");
                cols.push(f(&e).vec());
            }
        }
        let mat = RectMatrix::from_fn(nk, nk, field, |r, c| cols[c][r].clone());
        LinearMapNK { n, k, mat }
    }

    pub fn identity(n: usize, k: usize, field: FieldSpec) -> Self {
        LinearMapNK { n, k, mat: RectMatrix::identity(n * k, field) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn field(&self) -> FieldSpec {
        self.mat.field()
    }

    pub fn mat(&self) -> &RectMatrix {
        &self.mat
    }

    pub fn apply(&self, x: &RectMatrix) -> Result<RectMatrix> {
        if x.nrows() != self.n || x.ncols() != self.k {
            return Err(CullisError::ShapeMismatch(format!(
                "map on {}x{} applied to {}x{}",
                self.n,
                self.k,
                x.nrows(),
                x.ncols()
            )));
        }
        if x.field() != self.field() {
            return Err(CullisError::FieldMismatch);
        }
        Ok(self.apply_vec(&x.vec()))
    }

    fn apply_vec(&self, v: &[Scalar]) -> RectMatrix {
        let f = self.field();
        let nk = self.n * self.k;
        let out: Vec<Scalar> = (0..nk)
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in self.mat.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect();
        RectMatrix::unvec(&out, self.n, self.k, f).expect("length n*k")
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMapNK) -> Result<LinearMapNK> {
        if self.n != other.n || self.k != other.k {
            return Err(CullisError::ShapeMismatch("maps act on different shapes".into()));
        }
        Ok(LinearMapNK { n: self.n, k: self.k, mat: self.mat.mul(&other.mat)? })
    }

    pub fn is_invertible(&self) -> bool {
        self.mat.rank() == self.n * self.k
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Preserves,
    Violates(RectMatrix),
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MethodUsed {
    Exhaustive,
    Symbolic,
    Random { samples: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreserverReport {
    pub verdict: Verdict,
    pub method: MethodUsed,
}

impl PreserverReport {
    pub fn preserves(&self) -> bool {
        self.verdict == Verdict::Preserves
    }
}

/// How to decide preservation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMethod {
    /// Every `X ∈ GF(p)^{nk}`; refuses when `p^{nk}` exceeds the budget.
    Exhaustive { budget: u128 },
    /// Compare `det(T(X))` and `det(X)` as polynomials in the `nk` entries.
    Symbolic { guard: u128 },
    /// Random sampling; can only report a violation or "inconclusive".
    Random { samples: usize, seed: u64 },
}

impl CheckMethod {
    pub fn exhaustive() -> Self {
        CheckMethod::Exhaustive { budget: DEFAULT_ENUM_BUDGET }
    }

    pub fn symbolic() -> Self {
        CheckMethod::Symbolic { guard: DEFAULT_SYMBOLIC_GUARD }
    }
}

pub fn is_preserver(t: &LinearMapNK, method: CheckMethod) -> Result<PreserverReport> {
    if t.k > t.n {
        return Err(CullisError::ShapeError(format!("need n >= k, got {}x{}", t.n, t.k)));
    }
    match method {
        CheckMethod::Exhaustive { budget } => {
            let verdict = match exhaustive_witness(t, budget)? {
                Some(x) => Verdict::Violates(x),
                None => Verdict::Preserves,
            };
            Ok(PreserverReport { verdict, method: MethodUsed::Exhaustive })
        }
        CheckMethod::Symbolic { guard } => {
            let verdict = match symbolic_witness(t, guard)? {
                Some(x) => Verdict::Violates(x),
                None => Verdict::Preserves,
            };
            Ok(PreserverReport { verdict, method: MethodUsed::Symbolic })
        }
        CheckMethod::Random { samples, seed } => {
            let mut rng = seeded(seed);
            let mut verdict = Verdict::Inconclusive;
            for _ in 0..samples {
                let x = random_matrix(&mut rng, t.n, t.k, t.field());
                if det(&t.apply(&x)?)? != det(&x)? {
                    verdict = Verdict::Violates(x);
                    break;
                }
            }
            Ok(PreserverReport { verdict, method: MethodUsed::Random { samples, seed } })
        }
    }
}

/// `p^m`, or an error if it exceeds `budget`.
fn space_size(field: FieldSpec, m: usize, budget: u128, what: &'static str) -> Result<u128> {
    let Some(p) = field.size() else {
        return Err(CullisError::ShapeError(format!("{what} needs a finite field")));
    };
    let mut size: u128 = 1;
    for _ in 0..m {
        size = size.saturating_mul(p as u128);
        if size > budget {
            return Err(CullisError::BudgetExceeded { what, needed: pow_saturating(p as u128, m), budget });
        }
    }
    Ok(size)
}

fn pow_saturating(b: u128, e: usize) -> u128 {
    (0..e).fold(1u128, |acc, _| acc.saturating_mul(b))
}

/// The `t`-th element of `GF(p)^{n x k}` in lexicographic order of the
/// row-major entries.
pub fn nth_matrix(t: u128, n: usize, k: usize, field: FieldSpec) -> RectMatrix {
    let p = field.size().expect("finite field") as u128;
    let mut digits = vec![0u64; n * k];
    let mut rest = t;
    for d in digits.iter_mut().rev() {
        *d = (rest % p) as u64;
        rest /= p;
    }
    RectMatrix::from_fn(n, k, field, |r, c| field.element(digits[r * k + c]))
}

fn exhaustive_witness(t: &LinearMapNK, budget: u128) -> Result<Option<RectMatrix>> {
    let size = space_size(t.field(), t.n * t.k, budget, "exhaustive check")?;
    let found = (0..size as u64).into_par_iter().find_first(|&i| {
        let x = nth_matrix(i as u128, t.n, t.k, t.field());
        let tx = t.apply_vec(&x.vec());
        det(&tx).expect("n >= k") != det(&x).expect("n >= k")
    });
    Ok(found.map(|i| nth_matrix(i as u128, t.n, t.k, t.field())))
}

/// Cullis' determinant of the matrix of linear forms `forms[r][c]`, expanded
/// column by column over subsets of used rows.
///
/// `D[S]` collects the signed products for the first `|S|` columns placed on
/// the rows `S`; placing the next column on row `r` contributes the sign of
/// the rows of `S` above which `r` is inserted.
fn symbolic_det(forms: &[Vec<SparsePoly>], n: usize, k: usize, field: FieldSpec, guard: u128) -> Result<SparsePoly> {
    let mut layer: Vec<(u64, SparsePoly)> = vec![(0, SparsePoly::constant(field.one()))];
    let mut spent: u128 = 0;
    for c in 0..k {
        let mut next: std::collections::BTreeMap<u64, SparsePoly> = std::collections::BTreeMap::new();
        for (mask, poly) in &layer {
            for (r, row_forms) in forms.iter().enumerate().take(n) {
                if mask & (1 << r) != 0 || row_forms[c].is_zero() {
                    continue;
                }
                let above = (mask >> (r + 1)).count_ones();
                let (prod, cost) = poly.mul(&row_forms[c]);
                spent = spent.saturating_add(cost);
                if spent > guard {
                    return Err(CullisError::ResourceGuard { what: "symbolic expansion", needed: spent, limit: guard });
                }
                let s = field.sign(if above % 2 == 0 { 1 } else { -1 });
                next.entry(mask | (1 << r)).or_insert_with(|| SparsePoly::zero(field)).add_scaled(&prod, &s);
            }
        }
        layer = next.into_iter().collect();
    }
    let mut total = SparsePoly::zero(field);
    for (mask, poly) in layer {
        let rows: Vec<usize> = (0..n).filter(|&r| mask & (1 << r) != 0).map(|r| r + 1).collect();
        total.add_scaled(&poly, &field.sign(set_sign(&rows)));
    }
    Ok(total)
}

fn symbolic_witness(t: &LinearMapNK, guard: u128) -> Result<Option<RectMatrix>> {
    let (n, k, f) = (t.n, t.k, t.field());
    if n > 63 || n * k > u16::MAX as usize {
        return Err(CullisError::ShapeError("shape too large for symbolic expansion".into()));
    }
    let image: Vec<Vec<SparsePoly>> =
        (0..n).map(|r| (0..k).map(|c| SparsePoly::linear(f, t.mat.row(c * n + r))).collect()).collect();
    let plain: Vec<Vec<SparsePoly>> = (0..n)
        .map(|r| {
            (0..k)
                .map(|c| {
                    let mut coeffs = vec![f.zero(); n * k];
                    coeffs[c * n + r] = f.one();
                    SparsePoly::linear(f, &coeffs)
                })
                .collect()
        })
        .collect();
    let lhs = symbolic_det(&image, n, k, f, guard)?;
    let rhs = symbolic_det(&plain, n, k, f, guard)?;
    let diff = lhs.sub(&rhs);
    if diff.is_zero() {
        return Ok(None);
    }
    let point = nonvanishing_point(&diff, n * k).expect("nonzero difference has a nonvanishing point");
    let x = RectMatrix::unvec(&point, n, k, f)?;
    debug_assert_ne!(det(&t.apply(&x)?)?, det(&x)?);
    Ok(Some(x))
}

/// `X ↦ A X B` for `A: n x n`, `B: k x k`.
pub fn make_two_sided(a: &RectMatrix, b: &RectMatrix) -> Result<LinearMapNK> {
    let (n, k) = two_sided_shape(a, b)?;
    let nk = n * k;
    let f = a.field();
    // vec(AXB) = (Bᵗ ⊗ A) vec(X)
    let mat = RectMatrix::from_fn(nk, nk, f, |row, col| {
        let (q, p) = (row / n, row % n);
        let (j, i) = (col / n, col % n);
        a.at(p, i) * b.at(j, q)
    });
    Ok(LinearMapNK { n, k, mat })
}

fn two_sided_shape(a: &RectMatrix, b: &RectMatrix) -> Result<(usize, usize)> {
    if a.nrows() != a.ncols() || b.nrows() != b.ncols() {
        return Err(CullisError::ShapeMismatch("two-sided factors must be square".into()));
    }
    if a.field() != b.field() {
        return Err(CullisError::FieldMismatch);
    }
    Ok((a.nrows(), b.nrows()))
}

/// `det(A(|d]) · det_k(B) = sgn(d)` for every `k`-subset `d` of `[n]`.
pub fn check_sign_condition(a: &RectMatrix, b: &RectMatrix) -> Result<bool> {
    let (n, k) = two_sided_shape(a, b)?;
    if k > n {
        return Err(CullisError::ShapeError(format!("need k <= n, got n={n}, k={k}")));
    }
    let f = a.field();
    let db = b.det_square()?;
    for d in ksubsets(n, k) {
        if det(&a.columns(d.elems())?)? * &db != f.sign(sgn_set(&d)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The signed semi-cyclic shift `S_{i,j}` applied to a matrix of any width:
/// rotate rows so row `i` comes first, negate the `i - 1` rows that wrapped
/// to the bottom, swap columns `1` and `j`, negate column 1 unless `j = 1`,
/// and finally multiply by `(-1)^{n-i}`.
pub fn s_shift_apply(x: &RectMatrix, i: usize, j: usize) -> Result<RectMatrix> {
    let (n, k) = (x.nrows(), x.ncols());
    if i == 0 || i > n {
        return Err(CullisError::IndexOutOfRange { index: i, bound: n });
    }
    if j == 0 || j > k {
        return Err(CullisError::IndexOutOfRange { index: j, bound: k });
    }
    let f = x.field();
    let global_neg = (n - i) % 2 == 1;
    Ok(RectMatrix::from_fn(n, k, f, |r, c| {
        let src_row = (r + i - 1) % n;
        let src_col = if c == 0 {
            j - 1
        } else if c == j - 1 {
            0
        } else {
            c
        };
        let mut neg = global_neg;
        if r >= n - (i - 1) {
            neg = !neg;
        }
        if c == 0 && j != 1 {
            neg = !neg;
        }
        let v = x.at(src_row, src_col);
        if neg {
            -v
        } else {
            v.clone()
        }
    }))
}

pub fn make_s_shift(n: usize, k: usize, i: usize, j: usize, field: FieldSpec) -> Result<LinearMapNK> {
    if i == 0 || i > n {
        return Err(CullisError::IndexOutOfRange { index: i, bound: n });
    }
    if j == 0 || j > k {
        return Err(CullisError::IndexOutOfRange { index: j, bound: k });
    }
    Ok(LinearMapNK::from_fn(n, k, field, |x| s_shift_apply(x, i, j).expect("indices checked")))
}

/// The `k = 2` preserver that is not of the form `X ↦ AXB + φ(X)`: it keeps
/// every entry except the two corners
///
/// * `(1,1) ↦ Σ_{i=2}^{n-1} (-1)^i x_{i1} + Σ_{i=2}^{n} (-1)^i x_{i2}`
/// * `(n,2) ↦ Σ_{i=2}^{n-1} (-1)^{i-1} x_{i2} + Σ_{i=1}^{n-1} (-1)^{i-1} x_{i1}`
pub fn make_k2_counterexample(n: usize, field: FieldSpec) -> Result<LinearMapNK> {
    if n < 4 {
        return Err(CullisError::ShapeError(format!("need n >= 4, got {n}")));
    }
    let alt = |i: usize| field.sign(if i % 2 == 0 { 1 } else { -1 });
    Ok(LinearMapNK::from_fn(n, 2, field, |x| {
        let mut corner11 = field.zero();
        for i in 2..n {
            corner11 += alt(i) * x.at(i - 1, 0);
        }
        for i in 2..=n {
            corner11 += alt(i) * x.at(i - 1, 1);
        }
        let mut corner_n2 = field.zero();
        for i in 2..n {
            corner_n2 += alt(i - 1) * x.at(i - 1, 1);
        }
        for i in 1..n {
            corner_n2 += alt(i - 1) * x.at(i - 1, 0);
        }
        RectMatrix::from_fn(n, 2, field, |r, c| match (r, c) {
            (0, 0) => corner11.clone(),
            (r, 1) if r == n - 1 => corner_n2.clone(),
            _ => x.at(r, c).clone(),
        })
    }))
}

/// `X ↦ X - x_{11} J`, which kills the all-ones matrix `J`. It preserves the
/// determinant exactly when `J` lies in its radical, i.e. when `n + k` is odd.
pub fn make_singular_preserver(n: usize, k: usize, field: FieldSpec) -> Result<LinearMapNK> {
    if k == 0 || k > n {
        return Err(CullisError::ShapeError(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    if (n + k) % 2 == 0 {
        return Err(CullisError::ParityError(format!("n + k = {} is even; the radical is trivial", n + k)));
    }
    Ok(LinearMapNK::from_fn(n, k, field, |x| {
        let g = x.at(0, 0).clone();
        x.map(|e| e - &g)
    }))
}

/// `det(V + λW) = det(V)` identically in `V` and `λ`.
pub fn in_radical(w: &RectMatrix) -> Result<bool> {
    Ok(max_deg_over_all_a(w)? == 0)
}

/// Every radical element of `det` on `GF(p)^{n x k}`, in lexicographic order.
pub fn radical_enumerate(n: usize, k: usize, p: u64, budget: u128) -> Result<Vec<RectMatrix>> {
    let field = FieldSpec::prime(p)?;
    if k == 0 || k > n {
        return Err(CullisError::ShapeError(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let size = space_size(field, n * k, budget, "radical enumeration")?;
    let found: Vec<RectMatrix> = (0..size as u64)
        .into_par_iter()
        .filter_map(|t| {
            let w = nth_matrix(t as u128, n, k, field);
            in_radical(&w).expect("n >= k").then_some(w)
        })
        .collect();
    Ok(found)
}

/// Recovers `(A, B)` with `T(X) = A X B` when `T` has that form.
///
/// `T(E_{ij})` must equal `a_i b_jᵗ` for columns `a_i` of `A` and rows `b_j`
/// of `B`. The gauge is fixed by making the first nonzero entry of the first
/// nonzero column of `A` equal to 1. The factors are checked on every `E_{ij}`.
pub fn factor_two_sided(t: &LinearMapNK) -> Option<(RectMatrix, RectMatrix)> {
    let (n, k, f) = (t.n, t.k, t.field());
    let images: Vec<Vec<RectMatrix>> = (1..=n)
        .map(|i| (1..=k).map(|j| t.apply(&RectMatrix::unit(n, k, i, j, f).expect("in range")).expect("shape")).collect())
        .collect();
    let Some(i0) = (0..n).find(|&i| (0..k).any(|j| !images[i][j].is_zero())) else {
        return Some((RectMatrix::zeros(n, n, f), RectMatrix::zeros(k, k, f)));
    };
    let j0 = (0..k).find(|&j| (0..n).any(|i| !images[i][j].is_zero()))?;
    let pivot_img = &images[i0][j0];
    if pivot_img.is_zero() {
        return None;
    }
    let q = (0..k).find(|&c| (0..n).any(|r| !pivot_img.at(r, c).is_zero()))?;
    let p0 = (0..n).find(|&r| !pivot_img.at(r, q).is_zero())?;
    let scale = pivot_img.at(p0, q).inv().ok()?;
    let a_i0: Vec<Scalar> = (0..n).map(|r| pivot_img.at(r, q) * &scale).collect();
    // with a_{i0}[p0] = 1, row p0 of T(E_{i0 j}) is b_jᵗ
    let b_rows: Vec<Vec<Scalar>> = (0..k).map(|j| images[i0][j].row(p0).to_vec()).collect();
    let bq_inv = b_rows[j0][q].inv().ok()?;
    let mut a_cols: Vec<Vec<Scalar>> = (0..n)
        .map(|i| (0..n).map(|r| images[i][j0].at(r, q) * &bq_inv).collect())
        .collect();
    a_cols[i0] = a_i0;
    let a = RectMatrix::from_fn(n, n, f, |r, c| a_cols[c][r].clone());
    let b = RectMatrix::from_fn(k, k, f, |r, c| b_rows[r][c].clone());
    for i in 0..n {
        for j in 0..k {
            let expected = RectMatrix::from_fn(n, k, f, |r, c| &a_cols[i][r] * &b_rows[j][c]);
            if expected != images[i][j] {
                return None;
            }
        }
    }
    Some((a, b))
}

/// All preservers over GF(p) found by exhaustive search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    pub count: usize,
    pub maps: Vec<LinearMapNK>,
}

/// Every linear map on `GF(p)^{n x k}` that preserves `det`, in row-major
/// lexicographic order of the map matrices.
pub fn enumerate_preservers(n: usize, k: usize, p: u64, budget: u128) -> Result<Census> {
    let field = FieldSpec::prime(p)?;
    if k == 0 || k > n {
        return Err(CullisError::ShapeError(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let nk = n * k;
    let maps = space_size(field, nk * nk, budget, "preserver enumeration")?;
    let inputs = space_size(field, nk, budget, "preserver enumeration")?;
    let points: Vec<(Vec<Scalar>, Scalar)> = (0..inputs)
        .map(|t| {
            let x = nth_matrix(t, n, k, field);
            let d = det(&x).expect("n >= k");
            (x.vec(), d)
        })
        .collect();
    let found: Vec<LinearMapNK> = (0..maps as u64)
        .into_par_iter()
        .filter_map(|t| {
            let t = LinearMapNK { n, k, mat: nth_matrix(t as u128, nk, nk, field) };
            points
                .iter()
                .all(|(v, d)| det(&t.apply_vec(v)).expect("n >= k") == *d)
                .then_some(t)
        })
        .collect();
    Ok(Census { count: found.len(), maps: found })
}

/// For `k = 1`: every column `A(|i]` of the map matrix has alternating sum
/// `(-1)^{i-1}`.
pub fn check_k1_form(t: &LinearMapNK) -> Result<bool> {
    if t.k != 1 {
        return Err(CullisError::ShapeError(format!("expected k = 1, got k = {}", t.k)));
    }
    let f = t.field();
    for i in 1..=t.n {
        if det(&t.mat.columns(&[i])?)? != f.sign(if i % 2 == 1 { 1 } else { -1 }) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Builds `Y` from `X ∈ M_{n,2}` by replacing the corners with
/// `y_11 = S_1 + S_2 + x_{n2}` and `y_n2 = -S_1 - S_2 + x_11`, where
/// `S_c = Σ_{i=2}^{n-1} (-1)^i x_{ic}`.
pub fn corner_transform(x: &RectMatrix) -> Result<RectMatrix> {
    let n = x.nrows();
    if x.ncols() != 2 || n < 2 {
        return Err(CullisError::ShapeError(format!("expected n x 2 with n >= 2, got {}x{}", n, x.ncols())));
    }
    let f = x.field();
    let mut s = f.zero();
    for i in 2..n {
        let t = x.at(i - 1, 0) + x.at(i - 1, 1);
        if i % 2 == 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    let y11 = &s + x.at(n - 1, 1);
    let yn2 = x.at(0, 0) - &s;
    Ok(RectMatrix::from_fn(n, 2, f, |r, c| match (r, c) {
        (0, 0) => y11.clone(),
        (r, 1) if r == n - 1 => yn2.clone(),
        _ => x.at(r, c).clone(),
    }))
}

/// `det(X) = det(Y)` for `Y = corner_transform(X)`.
pub fn verify_detn2_identity(x: &RectMatrix) -> Result<bool> {
    let y = corner_transform(x)?;
    Ok(det(x)? == det(&y)?)
}


#[cfg(test)]
mod properties {
    use proptest::prelude::*;
    use rand::Rng;

    use super::*;
    use crate::cullis::det;
    use crate::lambda::max_deg_over_all_a;
    use crate::sample::{random_invertible, random_matrix, random_rank1, seeded};
    use crate::verify::two_sided_sample;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn shift_maps_compose_to_preservers(seed in any::<u64>(), (n, k) in prop_oneof![Just((4usize, 2usize)), Just((5, 3)), Just((6, 2))]) {
            let f = FieldSpec::Prime(5);
            let mut rng = seeded(seed);
            let mut pick = || make_s_shift(n, k, rng.random_range(1..=n), rng.random_range(1..=k), f).unwrap();
            let t = pick().compose(&pick()).unwrap().compose(&pick()).unwrap();
            prop_assert!(t.is_invertible());
            prop_assert!(is_preserver(&t, CheckMethod::symbolic()).unwrap().preserves());
        }

        #[test]
        fn preservers_keep_rank_one_and_degree_one(seed in any::<u64>()) {
            let (n, k, f) = (6, 4, FieldSpec::Prime(5));
            let mut rng = seeded(seed);
            let (a, b) = two_sided_sample(&mut rng, n, k, f, 1);
            let s = make_s_shift(n, k, rng.random_range(1..=n), rng.random_range(1..=k), f).unwrap();
            let t = s.compose(&make_two_sided(&a, &b).unwrap()).unwrap();
            let image = t.apply(&random_rank1(&mut rng, n, k, f)).unwrap();
            prop_assert_eq!(image.rank(), 1);
            prop_assert!(max_deg_over_all_a(&image).unwrap() <= 1);
            let x = random_matrix(&mut rng, n, k, f);
            prop_assert_eq!(det(&t.apply(&x).unwrap()).unwrap(), det(&x).unwrap());
        }
    }

    #[test]
    fn factorization_roundtrip() {
        let mut rng = seeded(77);
        for (t, &(n, k)) in [(3, 2), (4, 2), (5, 3), (6, 4)].iter().cycle().take(50).enumerate() {
            let f = if t % 2 == 0 { FieldSpec::Prime(7) } else { FieldSpec::Rational };
            let map = make_two_sided(&random_invertible(&mut rng, n, f), &random_invertible(&mut rng, k, f)).unwrap();
            let (a, b) = factor_two_sided(&map).expect("two-sided maps factor");
            assert_eq!(make_two_sided(&a, &b).unwrap(), map);
        }
    }

    #[test]
    fn sign_condition_pairs_preserve_at_six_by_four() {
        let f = FieldSpec::Prime(5);
        let mut rng = seeded(64);
        for t in 0..9 {
            let (a, b) = two_sided_sample(&mut rng, 6, 4, f, t);
            let map = make_two_sided(&a, &b).unwrap();
            let preserves = is_preserver(&map, CheckMethod::symbolic()).unwrap().preserves();
            assert_eq!(check_sign_condition(&a, &b).unwrap(), preserves, "A = {a}, B = {b}");
            if preserves {
                for _ in 0..5 {
                    let x = random_matrix(&mut rng, 6, 4, f);
                    assert_eq!(det(&map.apply(&x).unwrap()).unwrap(), det(&x).unwrap());
                }
            }
        }
    }
}
