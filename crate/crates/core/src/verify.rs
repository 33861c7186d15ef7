//! A table of identities and structural facts about Cullis' determinant and
//! its preservers, each checked on fixed shapes and fields.
//!
//! Every entry reports pass/fail with a concrete failing input. The table
//! backs the `verify-paper` command; its shape/field choices are fixed here
//! so a full run stays fast.

use rand::Rng;
use serde_json::{json, Value};

use crate::cullis::{basis_matrix, det_definition_with, det_laplace, det_minorsum_with, det_product_rhs, Budget};
use crate::error::Result;
use crate::field::{FieldSpec, Scalar};
use crate::json::matrix_to_json;
use crate::lambda::{
    completed_det, diffdiff_target, diffsum_target, make_b_diffdiff, make_b_diffsum, make_b_plainsum,
    max_deg_over_all_a, plainsum_target,
};
use crate::matrix::RectMatrix;
use crate::preserver::{
    check_k1_form, check_sign_condition, enumerate_preservers, factor_two_sided, in_radical, is_preserver,
    make_k2_counterexample, make_s_shift, make_singular_preserver, make_two_sided, radical_enumerate,
    s_shift_apply, verify_detn2_identity, CheckMethod, LinearMapNK,
};
use crate::sample::{random_matrix, random_nonzero, random_rank1, random_scalar, random_with_det, seeded, SeededRng};
use crate::subsets::{ksubsets, set_sign};

/// Deliberate corruption used to test that the table catches errors.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Fault {
    #[default]
    None,
    /// The subset sign used by the injection and minor sums is negated.
    NegateSetSign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub shapes: Option<Vec<(usize, usize)>>,
    pub primes: Option<Vec<u64>>,
    pub seed: u64,
    pub samples: usize,
    pub fault: Fault,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { shapes: None, primes: None, seed: 1, samples: 20, fault: Fault::None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Status {
    Pass,
    Fail(Value),
    Skipped,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaOutcome {
    pub id: &'static str,
    pub cases: usize,
    pub status: Status,
}

#[derive(Clone, Copy, Debug)]
struct Case {
    n: usize,
    k: usize,
    field: FieldSpec,
}

impl Case {
    fn label(&self) -> String {
        format!("{}x{} over {}", self.n, self.k, self.field)
    }
}

fn negated_set_sign(c: &[usize]) -> i8 {
    -set_sign(c)
}

struct Ctx {
    sign: fn(&[usize]) -> i8,
    samples: usize,
}

impl Ctx {
    fn det(&self, x: &RectMatrix) -> Result<Scalar> {
        det_minorsum_with(x, &Budget::default(), self.sign)
    }

    fn det_def(&self, x: &RectMatrix) -> Result<Scalar> {
        det_definition_with(x, &Budget::default(), self.sign)
    }
}

type Check = fn(&Ctx, &Case, &mut SeededRng) -> Result<Option<Value>>;

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).expect("table primes are prime")
}

fn case(n: usize, k: usize, p: u64) -> Case {
    Case { n, k, field: gf(p) }
}

fn rational(n: usize, k: usize) -> Case {
    Case { n, k, field: FieldSpec::Rational }
}

fn table() -> Vec<(&'static str, Vec<Case>, Check)> {
    vec![
        (
            "algorithm_agreement",
            vec![case(3, 2, 2), case(4, 2, 3), case(5, 3, 5), case(6, 4, 7), rational(4, 2), rational(7, 3)],
            algorithm_agreement,
        ),
        ("multilinearity", vec![case(4, 2, 5), case(5, 3, 7), rational(6, 4)], multilinearity),
        ("column_swap_negates", vec![case(4, 2, 5), case(5, 3, 7), rational(6, 4)], column_swap),
        ("duplicate_column_vanishes", vec![case(4, 2, 5), case(5, 3, 7), rational(6, 4)], duplicate_column),
        ("column_operation_invariance", vec![case(4, 2, 5), case(5, 3, 7), rational(6, 4)], column_operation),
        ("product_expansion", vec![case(4, 2, 5), case(5, 3, 7), case(6, 4, 7), rational(5, 3)], product_expansion),
        ("right_multiplication", vec![case(4, 2, 5), case(5, 3, 7), rational(6, 4)], right_multiplication),
        ("semi_cyclic_shift", vec![case(4, 2, 7), case(5, 3, 7), case(6, 2, 7)], semi_cyclic_shift),
        (
            "ones_column",
            vec![case(3, 1, 7), case(4, 1, 7), case(4, 2, 7), case(5, 2, 7), case(5, 3, 7)],
            ones_column,
        ),
        (
            "basis_matrix_sign",
            (1..=6).flat_map(|n| (1..=n.min(4)).map(move |k| case(n, k, 3))).collect(),
            basis_matrix_sign,
        ),
        ("two_sided_criterion", vec![case(3, 2, 5), case(4, 2, 7), case(5, 3, 7)], two_sided_criterion),
        ("radical_trivial_when_even", vec![case(4, 2, 3)], radical_trivial),
        (
            "ones_in_radical_iff_odd",
            vec![case(3, 1, 3), case(4, 1, 3), case(3, 2, 3), case(4, 2, 3), case(5, 2, 3), case(4, 3, 3)],
            ones_in_radical,
        ),
        ("shift_maps_preserve", vec![case(4, 2, 5), case(5, 3, 5), case(6, 2, 5)], shift_maps_preserve),
        ("shift_join_commutes", vec![case(5, 3, 7), rational(6, 4)], shift_join_commutes),
        ("rank_one_degree_bound", vec![case(5, 3, 7), case(6, 4, 5), rational(6, 3)], rank_one_degree_bound),
        ("degree_bound_forces_rank_one", vec![case(6, 4, 5)], degree_bound_forces_rank_one),
        ("rank_two_degree_one_example", vec![case(5, 3, 7), case(7, 3, 7), case(9, 3, 7)], rank_two_example),
        ("pattern_identities", vec![case(5, 4, 7), case(6, 4, 7), case(7, 5, 7)], pattern_identities),
        ("k2_non_standard_preserver", vec![case(4, 2, 3)], k2_counterexample),
        ("corner_identity_even_n", vec![case(4, 2, 7), case(6, 2, 7)], corner_identity),
        ("k1_census", vec![case(2, 1, 2), case(2, 1, 3), case(3, 1, 2)], k1_census),
        ("singular_preserver_when_odd", vec![case(4, 1, 3), case(5, 2, 5), case(4, 2, 3)], singular_preserver),
    ]
}

/// Identifiers of every table entry, in run order.
pub fn lemma_ids() -> Vec<&'static str> {
    table().into_iter().map(|(id, _, _)| id).collect()
}

fn selected(cfg: &VerifyConfig, c: &Case) -> bool {
    if let Some(shapes) = &cfg.shapes {
        if !shapes.contains(&(c.n, c.k)) {
            return false;
        }
    }
    if let Some(primes) = &cfg.primes {
        match c.field {
            FieldSpec::Prime(p) if primes.contains(&p) => {}
            _ => return false,
        }
    }
    true
}

fn case_seed(seed: u64, id: &str, idx: usize) -> u64 {
    let h = id.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
    seed ^ h ^ ((idx as u64) << 40)
}

pub fn run(cfg: &VerifyConfig) -> Vec<LemmaOutcome> {
    let ctx = Ctx {
        sign: match cfg.fault {
            Fault::None => set_sign,
            Fault::NegateSetSign => negated_set_sign,
        },
        samples: cfg.samples.max(1),
    };
    let mut out = Vec::new();
    for (id, cases, check) in table() {
        let mut ran = 0;
        let mut status = Status::Pass;
        for (idx, c) in cases.iter().enumerate().filter(|(_, c)| selected(cfg, c)) {
            ran += 1;
            let mut rng = seeded(case_seed(cfg.seed, id, idx));
            let res = check(&ctx, c, &mut rng);
            let failure = match res {
                Ok(None) => None,
                Ok(Some(w)) => Some(w),
                Err(e) => Some(json!({"error": e.to_string()})),
            };
            if let Some(mut w) = failure {
                w["case"] = json!(c.label());
                status = Status::Fail(w);
                break;
            }
        }
        if ran == 0 {
            status = Status::Skipped;
        }
        out.push(LemmaOutcome { id, cases: ran, status });
    }
    out
}

pub fn all_pass(outcomes: &[LemmaOutcome]) -> bool {
    outcomes.iter().all(|o| !matches!(o.status, Status::Fail(_)))
}

pub fn report_json(outcomes: &[LemmaOutcome]) -> Value {
    let mut lemmas = serde_json::Map::new();
    let mut first_failure = Value::Null;
    for o in outcomes {
        let entry = match &o.status {
            Status::Pass => json!({"status": "pass", "cases": o.cases}),
            Status::Skipped => json!({"status": "skipped", "cases": 0}),
            Status::Fail(w) => {
                if first_failure.is_null() {
                    first_failure = json!({"lemma": o.id, "witness": w});
                }
                json!({"status": "fail", "cases": o.cases, "witness": w})
            }
        };
        lemmas.insert(o.id.to_string(), entry);
    }
    let mut report = json!({"all_pass": all_pass(outcomes), "lemmas": Value::Object(lemmas)});
    if !first_failure.is_null() {
        report["first_failure"] = first_failure;
    }
    report
}

fn witness(x: &RectMatrix, detail: impl Into<String>) -> Option<Value> {
    Some(json!({"input": matrix_to_json(x), "detail": detail.into()}))
}

fn replace_column(x: &RectMatrix, c: usize, col: &[Scalar]) -> RectMatrix {
    RectMatrix::from_fn(x.nrows(), x.ncols(), x.field(), |r, cc| if cc == c { col[r].clone() } else { x.at(r, cc).clone() })
}

fn algorithm_agreement(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    let run_one = |x: &RectMatrix| -> Result<Option<Value>> {
        let d = ctx.det_def(x)?;
        for j in 1..=x.ncols() {
            let l = det_laplace(x, j)?;
            if l != d {
                return Ok(witness(x, format!("injection sum {d} but column-{j} expansion {l}")));
            }
        }
        let m = ctx.det(x)?;
        if m != d {
            return Ok(witness(x, format!("injection sum {d} but minor sum {m}")));
        }
        Ok(None)
    };
    if let Some(q) = c.field.size().filter(|&q| (q as u128).pow((c.n * c.k) as u32) <= 4096) {
        for t in 0..(q as u128).pow((c.n * c.k) as u32) {
            let x = crate::preserver::nth_matrix(t, c.n, c.k, c.field);
            if let Some(w) = run_one(&x)? {
                return Ok(Some(w));
            }
        }
        return Ok(None);
    }
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        if let Some(w) = run_one(&x)? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn multilinearity(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        let j = rng.random_range(0..c.k);
        let u = random_matrix(rng, c.n, 1, c.field).column(0);
        let v = random_matrix(rng, c.n, 1, c.field).column(0);
        let (a, b) = (random_scalar(rng, c.field), random_scalar(rng, c.field));
        let mixed: Vec<Scalar> = u.iter().zip(&v).map(|(s, t)| &a * s + &b * t).collect();
        let lhs = ctx.det(&replace_column(&x, j, &mixed))?;
        let rhs = &a * &ctx.det(&replace_column(&x, j, &u))? + &b * &ctx.det(&replace_column(&x, j, &v))?;
        if lhs != rhs {
            return Ok(witness(&x, format!("column {} is not linear", j + 1)));
        }
    }
    Ok(None)
}

fn swap_columns(x: &RectMatrix, a: usize, b: usize) -> RectMatrix {
    RectMatrix::from_fn(x.nrows(), x.ncols(), x.field(), |r, c| {
        let src = if c == a {
            b
        } else if c == b {
            a
        } else {
            c
        };
        x.at(r, src).clone()
    })
}

fn two_distinct(rng: &mut SeededRng, k: usize) -> (usize, usize) {
    let a = rng.random_range(0..k);
    let mut b = rng.random_range(0..k - 1);
    if b >= a {
        b += 1;
    }
    (a, b)
}

fn column_swap(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        let (a, b) = two_distinct(rng, c.k);
        if ctx.det(&swap_columns(&x, a, b))? != -&ctx.det(&x)? {
            return Ok(witness(&x, format!("swapping columns {} and {} did not negate", a + 1, b + 1)));
        }
    }
    Ok(None)
}

fn duplicate_column(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        let (a, b) = two_distinct(rng, c.k);
        let y = replace_column(&x, b, &x.column(a));
        if !ctx.det(&y)?.is_zero() {
            return Ok(witness(&y, "repeated column with nonzero determinant"));
        }
    }
    Ok(None)
}

fn column_operation(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        let j = rng.random_range(0..c.k);
        let mut col = x.column(j);
        for other in (0..c.k).filter(|&o| o != j) {
            let s = random_scalar(rng, c.field);
            for (r, e) in col.iter_mut().enumerate() {
                *e += &s * x.at(r, other);
            }
        }
        if ctx.det(&replace_column(&x, j, &col))? != ctx.det(&x)? {
            return Ok(witness(&x, "adding other columns changed the determinant"));
        }
    }
    Ok(None)
}

fn product_expansion(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let l = rng.random_range(1..=c.k);
        let x = random_matrix(rng, c.n, c.k, c.field);
        let y = random_matrix(rng, c.k, l, c.field);
        if ctx.det(&x.mul(&y)?)? != det_product_rhs(&x, &y)? {
            return Ok(witness(&x, format!("product expansion fails for l = {l} with Y = {y}")));
        }
    }
    Ok(None)
}

fn right_multiplication(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        let y = random_matrix(rng, c.k, c.k, c.field);
        if ctx.det(&x.mul(&y)?)? != ctx.det(&x)? * y.det_square()? {
            return Ok(witness(&x, format!("det(XY) != det(X) det(Y) for Y = {y}")));
        }
    }
    Ok(None)
}

/// Rotates rows so row `i` (1-based) comes first and negates the rows that
/// wrapped around to the bottom.
pub fn semi_cyclic(x: &RectMatrix, i: usize) -> RectMatrix {
    let n = x.nrows();
    RectMatrix::from_fn(n, x.ncols(), x.field(), |r, c| {
        let v = x.at((r + i - 1) % n, c);
        if r >= n - (i - 1) {
            -v
        } else {
            v.clone()
        }
    })
}

fn semi_cyclic_shift(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        for i in 1..=c.n {
            let sign = c.field.sign(if ((c.n - i) * c.k) % 2 == 0 { 1 } else { -1 });
            if ctx.det(&semi_cyclic(&x, i).scale(&sign))? != ctx.det(&x)? {
                return Ok(witness(&x, format!("shift starting at row {i} changed the determinant")));
            }
        }
    }
    Ok(None)
}

fn ones_column(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    let ones = RectMatrix::ones(c.n, 1, c.field);
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, c.k, c.field);
        let joined = ctx.det(&x.hjoin(&ones)?)?;
        let expected = if (c.n + c.k) % 2 == 1 { ctx.det(&x)? } else { c.field.zero() };
        if joined != expected {
            return Ok(witness(&x, format!("appending ones gave {joined}, expected {expected}")));
        }
    }
    Ok(None)
}

fn basis_matrix_sign(ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    for d in ksubsets(c.n, c.k) {
        let x = basis_matrix(&d, c.field);
        let got = ctx.det_def(&x)?;
        if got != c.field.sign(d.sign()) {
            return Ok(witness(&x, format!("columns {:?} gave {got}", d.elems())));
        }
    }
    Ok(None)
}

/// A two-sided pair for the criterion test. One third are random pairs, one
/// third are built from shift maps and a scalar with a compensating right
/// factor, and one third are those with the right factor's determinant
/// perturbed.
pub fn two_sided_sample(rng: &mut SeededRng, n: usize, k: usize, field: FieldSpec, t: usize) -> (RectMatrix, RectMatrix) {
    if t % 3 == 0 {
        return (random_matrix(rng, n, n, field), random_matrix(rng, k, k, field));
    }
    let c = random_nonzero(rng, field);
    let ck_inv = c.pow(k as u64).inv().expect("nonzero");
    let b0 = random_with_det(rng, k, &ck_inv);
    let mut map = make_two_sided(&RectMatrix::identity(n, field).scale(&c), &b0).expect("square factors");
    for _ in 0..rng.random_range(0..3) {
        let s = make_s_shift(n, k, rng.random_range(1..=n), rng.random_range(1..=k), field).expect("in range");
        map = s.compose(&map).expect("same shape");
    }
    let (a, b) = factor_two_sided(&map).expect("composites of two-sided maps are two-sided");
    if t % 3 == 2 {
        let mut bump = random_nonzero(rng, field);
        if bump.is_one() {
            bump = -&bump;
        }
        let b = RectMatrix::from_fn(k, k, field, |r, cc| if r == 0 { b.at(r, cc) * &bump } else { b.at(r, cc).clone() });
        return (a, b);
    }
    (a, b)
}

fn two_sided_criterion(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for t in 0..ctx.samples {
        let (a, b) = two_sided_sample(rng, c.n, c.k, c.field, t);
        let cond = check_sign_condition(&a, &b)?;
        let sym = is_preserver(&make_two_sided(&a, &b)?, CheckMethod::symbolic())?.preserves();
        if cond != sym {
            return Ok(witness(&a, format!("sign condition {cond} but symbolic check {sym}; B = {b}")));
        }
    }
    Ok(None)
}

fn radical_trivial(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    let p = c.field.size().expect("finite");
    let rad = radical_enumerate(c.n, c.k, p, 10_000_000)?;
    if rad.len() != 1 || !rad[0].is_zero() {
        let w = rad.iter().find(|w| !w.is_zero()).cloned().unwrap_or_else(|| RectMatrix::zeros(c.n, c.k, c.field));
        return Ok(witness(&w, format!("radical has {} elements", rad.len())));
    }
    Ok(None)
}

fn ones_in_radical(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    let j = RectMatrix::ones(c.n, c.k, c.field);
    let got = in_radical(&j)?;
    if got != ((c.n + c.k) % 2 == 1) {
        return Ok(witness(&j, format!("membership of the all-ones matrix is {got}")));
    }
    Ok(None)
}

fn shift_maps_preserve(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    for i in 1..=c.n {
        for j in 1..=c.k {
            let s = make_s_shift(c.n, c.k, i, j, c.field)?;
            if !s.is_invertible() {
                return Ok(witness(s.mat(), format!("S({i},{j}) is singular")));
            }
            if let crate::preserver::Verdict::Violates(x) = is_preserver(&s, CheckMethod::symbolic())?.verdict {
                return Ok(witness(&x, format!("S({i},{j}) changes the determinant")));
            }
        }
    }
    Ok(None)
}

fn shift_join_commutes(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let w = rng.random_range(1..c.k);
        let a = random_matrix(rng, c.n, w, c.field);
        let b = random_matrix(rng, c.n, c.k - w, c.field);
        let i = rng.random_range(1..=c.n);
        let lhs = s_shift_apply(&a.hjoin(&b)?, i, 1)?;
        let rhs = s_shift_apply(&a, i, 1)?.hjoin(&s_shift_apply(&b, i, 1)?)?;
        if lhs != rhs {
            return Ok(witness(&a.hjoin(&b)?, format!("S({i},1) does not split over the join")));
        }
    }
    Ok(None)
}

fn rank_one_degree_bound(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let b = random_rank1(rng, c.n, c.k, c.field);
        let d = max_deg_over_all_a(&b)?;
        if d > 1 {
            return Ok(witness(&b, format!("rank one with degree {d}")));
        }
    }
    Ok(None)
}

/// Candidates for the "degree at most one forces rank at most one" filter:
/// rank-one, rank-two and sparse matrices in rotation.
pub fn degree_filter_candidate(rng: &mut SeededRng, n: usize, k: usize, field: FieldSpec, t: usize) -> RectMatrix {
    match t % 3 {
        0 => random_rank1(rng, n, k, field),
        1 => random_rank1(rng, n, k, field).add(&random_rank1(rng, n, k, field)).expect("same shape"),
        _ => {
            let mut m = RectMatrix::zeros(n, k, field);
            for _ in 0..rng.random_range(1..=3) {
                let (r, cc) = (rng.random_range(0..n), rng.random_range(0..k));
                *m.at_mut(r, cc) = random_nonzero(rng, field);
            }
            m
        }
    }
}

fn degree_bound_forces_rank_one(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for t in 0..ctx.samples * 3 {
        let b = degree_filter_candidate(rng, c.n, c.k, c.field, t);
        if max_deg_over_all_a(&b)? <= 1 && b.rank() > 1 {
            return Ok(witness(&b, format!("degree at most one but rank {}", b.rank())));
        }
    }
    Ok(None)
}

/// The `n x 3` matrix with columns `e_1 - e_5`, `e_2 - e_4` and `0`: rank two,
/// yet every `det(A + λB)` has degree at most one.
pub fn rank_two_degree_one_matrix(n: usize, field: FieldSpec) -> RectMatrix {
    RectMatrix::from_fn(n, 3, field, |r, c| match (r + 1, c + 1) {
        (1, 1) | (2, 2) => field.one(),
        (5, 1) | (4, 2) => field.from_i64(-1),
        _ => field.zero(),
    })
}

fn rank_two_example(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    let b = rank_two_degree_one_matrix(c.n, c.field);
    let (r, d) = (b.rank(), max_deg_over_all_a(&b)?);
    if r != 2 || d > 1 {
        return Ok(witness(&b, format!("rank {r}, degree {d}")));
    }
    Ok(None)
}

fn pattern_identities(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    let (n, k, f) = (c.n, c.k, c.field);
    let ds = make_b_diffsum(n, k, f)?;
    let ps = make_b_plainsum(n, k, f)?;
    let dds: Vec<(usize, RectMatrix)> =
        if k >= 4 { (3..n).map(|l| make_b_diffdiff(n, k, l, f).map(|b| (l, b))).collect::<Result<_>>()? } else { vec![] };
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, n, 2, f);
        if completed_det(&x, Some(&ds))? != diffsum_target(&x, k) {
            return Ok(witness(&x, "row-difference sum pattern"));
        }
        if completed_det(&x, ps.as_ref())? != plainsum_target(&x, k)? {
            return Ok(witness(&x, "truncated expansion pattern"));
        }
        for (l, b) in &dds {
            if completed_det(&x, Some(b))? != diffdiff_target(&x, *l) {
                return Ok(witness(&x, format!("row-difference pair pattern, l = {l}")));
            }
        }
    }
    Ok(None)
}

fn k2_counterexample(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    let t = make_k2_counterexample(c.n, c.field)?;
    if let crate::preserver::Verdict::Violates(x) = is_preserver(&t, CheckMethod::exhaustive())?.verdict {
        return Ok(witness(&x, "changes the determinant"));
    }
    if factor_two_sided(&t).is_some() {
        return Ok(witness(t.mat(), "unexpectedly factors as X -> AXB"));
    }
    Ok(None)
}

fn corner_identity(ctx: &Ctx, c: &Case, rng: &mut SeededRng) -> Result<Option<Value>> {
    for _ in 0..ctx.samples {
        let x = random_matrix(rng, c.n, 2, c.field);
        if !verify_detn2_identity(&x)? {
            return Ok(witness(&x, "corner transform changed the determinant"));
        }
    }
    Ok(None)
}

fn k1_census(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    let p = c.field.size().expect("finite");
    let census = enumerate_preservers(c.n, 1, p, 10_000_000)?;
    let expected = p.pow((c.n * c.n - c.n) as u32) as usize;
    if census.count != expected {
        return Ok(Some(json!({"detail": format!("census has {} maps, expected {expected}", census.count)})));
    }
    for t in &census.maps {
        if !check_k1_form(t)? {
            return Ok(witness(t.mat(), "census member fails the column condition"));
        }
    }
    let total = p.pow((c.n * c.n) as u32);
    let mut satisfying = 0usize;
    for idx in 0..total {
        let m = crate::preserver::nth_matrix(idx as u128, c.n, c.n, c.field);
        if check_k1_form(&LinearMapNK::new(c.n, 1, m)?)? {
            satisfying += 1;
        }
    }
    if satisfying != census.count {
        return Ok(Some(json!({"detail": format!("{satisfying} maps satisfy the column condition, census has {}", census.count)})));
    }
    Ok(None)
}

fn singular_preserver(_ctx: &Ctx, c: &Case, _rng: &mut SeededRng) -> Result<Option<Value>> {
    let odd = (c.n + c.k) % 2 == 1;
    match make_singular_preserver(c.n, c.k, c.field) {
        Ok(t) => {
            if !odd {
                return Ok(witness(t.mat(), "constructed for even n + k"));
            }
            if t.is_invertible() {
                return Ok(witness(t.mat(), "map is invertible"));
            }
            let method = if c.field.size().map(|p| (p as u128).pow((c.n * c.k) as u32) <= 100_000).unwrap_or(false) {
                CheckMethod::exhaustive()
            } else {
                CheckMethod::symbolic()
            };
            if let crate::preserver::Verdict::Violates(x) = is_preserver(&t, method)?.verdict {
                return Ok(witness(&x, "changes the determinant"));
            }
            Ok(None)
        }
        Err(_) if !odd => {
            let rad = radical_enumerate(c.n, c.k, c.field.size().expect("finite"), 10_000_000)?;
            if rad.len() != 1 {
                return Ok(Some(json!({"detail": format!("even n + k but radical has {} elements", rad.len())})));
            }
            Ok(None)
        }
        Err(e) => Err(e),
    }
}
