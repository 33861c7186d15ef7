//! Acceptance suite: one PASS/FAIL line per criterion, exact equality
//! throughout. Runs as a plain binary so the report is always printed.

use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use cullis_core::cullis::{basis_matrix, det, det_definition, det_laplace, det_minorsum, det_product_rhs};
use cullis_core::field::{FieldSpec, Scalar};
use cullis_core::lambda::{
    completed_det, diffdiff_target, diffsum_target, lambda_coeffs, make_b_diffdiff, make_b_diffsum,
    make_b_plainsum, max_deg_over_all_a, plainsum_target,
};
use cullis_core::matrix::RectMatrix;
use cullis_core::preserver::{
    check_k1_form, check_sign_condition, enumerate_preservers, factor_two_sided, in_radical, is_preserver,
    make_k2_counterexample, make_s_shift, make_singular_preserver, make_two_sided, nth_matrix,
    radical_enumerate, s_shift_apply, verify_detn2_identity, CheckMethod, LinearMapNK, Verdict,
};
use cullis_core::sample::{random_matrix, random_rank1, random_scalar, seeded, SeededRng};
use cullis_core::subsets::ksubsets;
use cullis_core::verify::{degree_filter_candidate, rank_two_degree_one_matrix, semi_cyclic, two_sided_sample};

const SEED: u64 = 20_240_611;

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

/// Collects failures for one criterion.
struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

fn report(id: usize, name: &str, t: &Tally, started: Instant, note: &str) -> bool {
    let status = if t.ok() { "PASS" } else { "FAIL" };
    let extra = if note.is_empty() { String::new() } else { format!("; {note}") };
    println!(
        "criterion {id:>2} [{status}] {name}: {} checks, {} failures ({:.1}s){extra}",
        t.checks,
        t.failures.len(),
        started.elapsed().as_secs_f64()
    );
    for f in t.failures.iter().take(3) {
        println!("    failure: {f}");
    }
    t.ok()
}

fn replace_column(x: &RectMatrix, j: usize, col: &[Scalar]) -> RectMatrix {
    RectMatrix::from_fn(x.nrows(), x.ncols(), x.field(), |r, c| if c == j { col[r].clone() } else { at(x, r, c) })
}

fn at(x: &RectMatrix, r: usize, c: usize) -> Scalar {
    x.entry(r + 1, c + 1).unwrap().clone()
}

fn random_shape(rng: &mut SeededRng, max_n: usize, max_k: usize) -> (usize, usize) {
    let k = rng.random_range(1..=max_k);
    let n = rng.random_range(k..=max_n.max(k));
    (n, k)
}

fn fields() -> [FieldSpec; 3] {
    [gf(5), gf(7), FieldSpec::Rational]
}

fn agree(x: &RectMatrix) -> Result<(), String> {
    let d = det_definition(x).unwrap();
    let m = det_minorsum(x).unwrap();
    if m != d {
        return Err(format!("{x}: injection sum {d}, minor sum {m}"));
    }
    for j in 1..=x.ncols() {
        let l = det_laplace(x, j).unwrap();
        if l != d {
            return Err(format!("{x}: injection sum {d}, expansion along column {j} gives {l}"));
        }
    }
    Ok(())
}

fn criterion_1() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    for idx in 0..64 {
        let x = nth_matrix(idx, 3, 2, gf(2));
        let r = agree(&x);
        t.check(r.is_ok(), || r.unwrap_err());
    }
    let mut rng = seeded(SEED);
    for i in 0..500 {
        let f = fields()[i % 3];
        let (n, k) = random_shape(&mut rng, 7, 4);
        let x = random_matrix(&mut rng, n, k, f);
        let r = agree(&x);
        t.check(r.is_ok(), || r.unwrap_err());
    }
    report(1, "algorithm agreement (64 exhaustive + 500 random)", &t, start, "")
}

fn criterion_2() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = seeded(SEED + 2);
    const N: usize = 120;
    for i in 0..N {
        let f = fields()[i % 3];
        let (n, k) = random_shape(&mut rng, 6, 4);
        let x = random_matrix(&mut rng, n, k, f);
        let dx = det(&x).unwrap();

        let j = rng.random_range(0..k);
        let u = random_matrix(&mut rng, n, 1, f).column(0);
        let v = random_matrix(&mut rng, n, 1, f).column(0);
        let (a, b) = (random_scalar(&mut rng, f), random_scalar(&mut rng, f));
        let mixed: Vec<Scalar> = u.iter().zip(&v).map(|(s, w)| &a * s + &b * w).collect();
        let lhs = det(&replace_column(&x, j, &mixed)).unwrap();
        let rhs = &a * &det(&replace_column(&x, j, &u)).unwrap() + &b * &det(&replace_column(&x, j, &v)).unwrap();
        t.check(lhs == rhs, || format!("multilinearity in column {} of {x}", j + 1));

        if k >= 2 {
            let a0 = rng.random_range(0..k);
            let b0 = (a0 + rng.random_range(1..k)) % k;
            let swapped = RectMatrix::from_fn(n, k, f, |r, c| {
                let src = if c == a0 { b0 } else if c == b0 { a0 } else { c };
                at(&x, r, src)
            });
            t.check(det(&swapped).unwrap() == -&dx, || format!("column swap on {x}"));
            let dup = replace_column(&x, b0, &x.column(a0));
            t.check(det(&dup).unwrap().is_zero(), || format!("duplicate column on {x}"));
        }

        let l = rng.random_range(1..=k);
        let y = random_matrix(&mut rng, k, l, f);
        t.check(det(&x.mul(&y).unwrap()).unwrap() == det_product_rhs(&x, &y).unwrap(), || {
            format!("product expansion with X = {x}, Y = {y}")
        });

        let sq = random_matrix(&mut rng, k, k, f);
        t.check(det(&x.mul(&sq).unwrap()).unwrap() == &dx * &sq.det_square().unwrap(), || {
            format!("right multiplication with X = {x}, Y = {sq}")
        });

        let jj = rng.random_range(1..=k);
        t.check(det_laplace(&x, jj).unwrap() == det_definition(&x).unwrap(), || {
            format!("expansion along column {jj} of {x}")
        });
    }
    for (n, k) in [(4, 2), (5, 3), (6, 2)] {
        for i in 0..N {
            let f = fields()[i % 3];
            let x = random_matrix(&mut rng, n, k, f);
            let dx = det(&x).unwrap();
            for row in 1..=n {
                let s = f.sign(if ((n - row) * k) % 2 == 0 { 1 } else { -1 });
                t.check(det(&semi_cyclic(&x, row).scale(&s)).unwrap() == dx, || {
                    format!("semi-cyclic shift from row {row} of {x}")
                });
            }
        }
    }
    for (n, k) in [(3, 1), (4, 1), (4, 2), (5, 2), (5, 3)] {
        for i in 0..N {
            let f = fields()[i % 3];
            let x = random_matrix(&mut rng, n, k, f);
            let joined = det(&x.hjoin(&RectMatrix::ones(n, 1, f)).unwrap()).unwrap();
            let expected = if (n + k) % 2 == 1 { det(&x).unwrap() } else { f.zero() };
            t.check(joined == expected, || format!("ones column on {x}"));
        }
    }
    report(2, "determinant identity suite", &t, start, "")
}

fn criterion_3() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    for f in [gf(3), FieldSpec::Rational] {
        for n in 1..=6 {
            for k in 1..=n.min(4) {
                for d in ksubsets(n, k) {
                    let got = det(&basis_matrix(&d, f)).unwrap();
                    t.check(got == f.sign(d.sign()), || format!("columns {:?} in {n}x{k}: {got}", d.elems()));
                }
            }
        }
    }
    report(3, "basis-column matrices have the subset sign", &t, start, "")
}

fn criterion_4() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = seeded(SEED + 4);
    let mut positives = 0;
    for ((n, k), f) in [((3, 2), gf(5)), ((4, 2), gf(7)), ((5, 3), gf(7))] {
        for i in 0..50 {
            let (a, b) = two_sided_sample(&mut rng, n, k, f, i);
            let cond = check_sign_condition(&a, &b).unwrap();
            let sym = is_preserver(&make_two_sided(&a, &b).unwrap(), CheckMethod::symbolic()).unwrap().preserves();
            positives += usize::from(cond);
            t.check(cond == sym, || format!("A = {a}, B = {b}: sign condition {cond}, symbolic {sym}"));
        }
    }
    let negatives = 150 - positives;
    t.check(positives > 0 && negatives > 0, || "sample lacks one of the two classes".into());
    report(4, "two-sided sign condition <=> symbolic preservation", &t, start, &format!("{positives} preservers, {negatives} non-preservers"))
}

fn criterion_5() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let rad42 = radical_enumerate(4, 2, 3, 1 << 20).unwrap();
    t.check(rad42.len() == 1 && rad42[0].is_zero(), || format!("radical at 4x2 over GF(3) has {} elements", rad42.len()));
    let rad41 = radical_enumerate(4, 1, 3, 1 << 20).unwrap();
    t.check(rad41.len() == 27, || format!("radical at 4x1 over GF(3) has {} elements", rad41.len()));
    t.check(rad41.contains(&RectMatrix::ones(4, 1, gf(3))), || "all-ones missing at 4x1".into());
    for (n, k) in [(3, 1), (4, 1), (3, 2), (4, 2), (5, 2), (4, 3)] {
        for f in [gf(3), gf(5), FieldSpec::Rational] {
            let got = in_radical(&RectMatrix::ones(n, k, f)).unwrap();
            let expected = (n - (k + 1)) % 2 == 0;
            t.check(got == expected, || format!("all-ones in radical at {n}x{k} over {f}: {got}"));
        }
    }
    report(5, "radical of the determinant", &t, start, "")
}

fn criterion_6() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    for (n, k) in [(4, 2), (5, 3), (6, 4)] {
        let f = gf(5);
        for i in 1..=n {
            for j in 1..=k {
                let s = make_s_shift(n, k, i, j, f).unwrap();
                t.check(s.is_invertible(), || format!("S({i},{j}) at {n}x{k} is singular"));
                let rep = is_preserver(&s, CheckMethod::symbolic()).unwrap();
                t.check(rep.preserves(), || format!("S({i},{j}) at {n}x{k}: {:?}", rep.verdict));
            }
        }
    }
    let mut rng = seeded(SEED + 6);
    for idx in 0..100 {
        let f = fields()[idx % 3];
        let n = rng.random_range(2..=7);
        let (wa, wb) = (rng.random_range(1..=3), rng.random_range(1..=3));
        let a = random_matrix(&mut rng, n, wa, f);
        let b = random_matrix(&mut rng, n, wb, f);
        let i = rng.random_range(1..=n);
        let lhs = s_shift_apply(&a.hjoin(&b).unwrap(), i, 1).unwrap();
        let rhs = s_shift_apply(&a, i, 1).unwrap().hjoin(&s_shift_apply(&b, i, 1).unwrap()).unwrap();
        t.check(lhs == rhs, || format!("S({i},1) on the join of {a} and {b}"));
    }
    report(6, "semi-cyclic shift maps", &t, start, "")
}

fn criterion_7() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = seeded(SEED + 7);
    for idx in 0..200 {
        let f = fields()[idx % 3];
        let (n, k) = random_shape(&mut rng, 7, 4);
        let b = random_rank1(&mut rng, n, k, f);
        let d = max_deg_over_all_a(&b).unwrap();
        t.check(d <= 1, || format!("rank-one {b} has degree {d}"));
    }
    let f5 = gf(5);
    let mut filtered = 0;
    for idx in 0..300 {
        let b = degree_filter_candidate(&mut rng, 6, 4, f5, idx);
        if max_deg_over_all_a(&b).unwrap() <= 1 {
            filtered += 1;
            t.check(b.rank() <= 1, || format!("{b} has degree at most one but rank {}", b.rank()));
        }
    }
    t.check(filtered >= 100, || format!("only {filtered} candidates passed the degree filter"));
    for n in [5, 7, 9] {
        for f in [f5, FieldSpec::Rational] {
            let b = rank_two_degree_one_matrix(n, f);
            t.check(b.rank() == 2, || format!("example at n = {n} has rank {}", b.rank()));
            let d = max_deg_over_all_a(&b).unwrap();
            t.check(d <= 1, || format!("example at n = {n} has degree {d}"));
        }
    }
    let f2 = gf(2);
    for bi in 0..64 {
        let b = nth_matrix(bi, 3, 2, f2);
        let brute = (0..64)
            .map(|ai| lambda_coeffs(&nth_matrix(ai, 3, 2, f2), &b).unwrap().degree())
            .max()
            .unwrap();
        let oracle = max_deg_over_all_a(&b).unwrap();
        t.check(brute == oracle, || format!("{b}: oracle {oracle}, brute force {brute}"));
    }
    report(7, "rank and degree", &t, start, &format!("{filtered} filtered 6x4 candidates"))
}

fn criterion_8() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut rng = seeded(SEED + 8);
    let f = gf(7);
    let mut configs = 0;
    for n in 2..=8 {
        for k in 2..=n {
            let plain = make_b_plainsum(n, k, f).unwrap();
            let diffsum = (k >= 3).then(|| make_b_diffsum(n, k, f).unwrap());
            let diffdiff: Vec<(usize, RectMatrix)> =
                if k >= 4 { (3..n).map(|l| (l, make_b_diffdiff(n, k, l, f).unwrap())).collect() } else { vec![] };
            configs += 1 + usize::from(diffsum.is_some()) + diffdiff.len();
            for _ in 0..100 {
                let x = random_matrix(&mut rng, n, 2, f);
                t.check(completed_det(&x, plain.as_ref()).unwrap() == plainsum_target(&x, k).unwrap(), || {
                    format!("truncated expansion pattern at {n}x{k}, X = {x}")
                });
                if let Some(b) = &diffsum {
                    t.check(completed_det(&x, Some(b)).unwrap() == diffsum_target(&x, k), || {
                        format!("row-difference sum pattern at {n}x{k}, X = {x}")
                    });
                }
                for (l, b) in &diffdiff {
                    t.check(completed_det(&x, Some(b)).unwrap() == diffdiff_target(&x, *l), || {
                        format!("row-difference pair pattern at {n}x{k}, l = {l}, X = {x}")
                    });
                }
            }
        }
    }
    report(8, "completion pattern identities", &t, start, &format!("{configs} (n,k,l) configurations"))
}

fn criterion_9() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let f3 = gf(3);
    let tk2 = make_k2_counterexample(4, f3).unwrap();
    let rep = is_preserver(&tk2, CheckMethod::exhaustive()).unwrap();
    t.check(rep.preserves(), || format!("exhaustive check at n = 4 over GF(3): {:?}", rep.verdict));
    t.check(factor_two_sided(&tk2).is_none(), || "the map factors as X -> AXB".into());
    let q = FieldSpec::Rational;
    let img = make_k2_counterexample(4, q).unwrap().apply(&RectMatrix::unit(4, 2, 2, 1, q).unwrap()).unwrap();
    let expected = RectMatrix::from_rows(q, &[[1, 0], [1, 0], [0, 0], [0, -1]]).unwrap();
    t.check(img == expected, || format!("image of E21 is {img}"));
    let mut rng = seeded(SEED + 9);
    let f7 = gf(7);
    let mut per_n = Vec::new();
    for n in [4, 5, 6] {
        let mut bad = 0;
        for _ in 0..100 {
            let x = random_matrix(&mut rng, n, 2, f7);
            let ok = verify_detn2_identity(&x).unwrap();
            bad += usize::from(!ok);
            t.check(ok, || format!("corner identity at n = {n}, X = {x}"));
        }
        per_n.push(format!("n={n}: {bad}/100 fail"));
    }
    report(9, "k = 2 non-standard preserver", &t, start, &per_n.join(", "))
}

fn criterion_10() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut notes = Vec::new();
    for (n, p, expected) in [(2, 2, 4), (2, 3, 9), (3, 2, 64)] {
        let census = enumerate_preservers(n, 1, p, 1 << 24).unwrap();
        t.check(census.count == expected, || format!("census ({n},1,GF({p})) has {} maps", census.count));
        let invertible = census.maps.iter().filter(|m| m.is_invertible()).count();
        notes.push(format!("({n},1,GF({p})): {} maps, {invertible} invertible", census.count));
        if (n, p) == (3, 2) {
            t.check(invertible == census.count, || format!("only {invertible} of {} members are invertible", census.count));
        }
        for m in &census.maps {
            t.check(check_k1_form(m).unwrap(), || format!("member {} fails the column condition", m.mat()));
        }
        let f = gf(p);
        let total = p.pow((n * n) as u32) as u128;
        let mut satisfying = 0;
        for idx in 0..total {
            let m = LinearMapNK::new(n, 1, nth_matrix(idx, n, n, f)).unwrap();
            satisfying += usize::from(check_k1_form(&m).unwrap());
        }
        t.check(satisfying == census.count, || format!("{satisfying} maps satisfy the column condition vs census {}", census.count));
    }
    report(10, "small censuses", &t, start, &notes.join("; "))
}

fn criterion_11() -> bool {
    let start = Instant::now();
    let mut t = Tally::new();
    let f3 = gf(3);
    let s41 = make_singular_preserver(4, 1, f3).unwrap();
    t.check(!s41.is_invertible(), || "map at 4x1 is invertible".into());
    t.check(s41.apply(&RectMatrix::ones(4, 1, f3)).unwrap().is_zero(), || "all-ones not in the kernel at 4x1".into());
    let rep = is_preserver(&s41, CheckMethod::exhaustive()).unwrap();
    t.check(rep.preserves(), || format!("4x1 over GF(3): {:?}", rep.verdict));
    let f5 = gf(5);
    let s52 = make_singular_preserver(5, 2, f5).unwrap();
    t.check(!s52.is_invertible(), || "map at 5x2 is invertible".into());
    let sym = is_preserver(&s52, CheckMethod::symbolic()).unwrap();
    t.check(sym.preserves(), || format!("5x2 over GF(5), symbolic: {:?}", sym.verdict));
    let rnd = is_preserver(&s52, CheckMethod::Random { samples: 500, seed: SEED }).unwrap();
    t.check(rnd.verdict == Verdict::Inconclusive, || format!("5x2 over GF(5), random: {:?}", rnd.verdict));
    t.check(make_singular_preserver(4, 2, f3).is_err(), || "constructed a map at 4x2".into());
    let rad = radical_enumerate(4, 2, 3, 1 << 20).unwrap();
    t.check(rad.len() == 1, || format!("radical at 4x2 over GF(3) has {} elements", rad.len()));
    report(11, "singular preservers exist exactly when n + k is odd", &t, start, "")
}

fn main() -> ExitCode {
    let results = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria pass", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
