//! Seeded random matrices. Every generator is a ChaCha8 stream, so a seed
//! reproduces the same values on every platform.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{FieldSpec, Scalar};
use crate::matrix::RectMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform over GF(p); for the rationals, small fractions with numerators in
/// `[-9, 9]` and denominators in `{1, 2, 3}` (mostly 1).
pub fn random_scalar(rng: &mut SeededRng, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Prime(p) => field.element(rng.random_range(0..p)),
        FieldSpec::Rational => {
            let num = BigInt::from(rng.random_range(-9i64..=9));
            let den = if rng.random_bool(0.8) { 1 } else { rng.random_range(2i64..=3) };
            field.fraction(&num, &BigInt::from(den)).expect("nonzero denominator")
        }
    }
}

pub fn random_nonzero(rng: &mut SeededRng, field: FieldSpec) -> Scalar {
    loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

pub fn random_matrix(rng: &mut SeededRng, n: usize, k: usize, field: FieldSpec) -> RectMatrix {
    RectMatrix::from_fn(n, k, field, |_, _| random_scalar(rng, field))
}

/// `u vᵗ` with both factors nonzero, hence rank exactly one.
pub fn random_rank1(rng: &mut SeededRng, n: usize, k: usize, field: FieldSpec) -> RectMatrix {
    let u = nonzero_vector(rng, n, field);
    let v = nonzero_vector(rng, k, field);
    RectMatrix::from_fn(n, k, field, |r, c| &u[r] * &v[c])
}

fn nonzero_vector(rng: &mut SeededRng, len: usize, field: FieldSpec) -> Vec<Scalar> {
    loop {
        let v: Vec<Scalar> = (0..len).map(|_| random_scalar(rng, field)).collect();
        if v.iter().any(|s| !s.is_zero()) {
            return v;
        }
    }
}

/// A random invertible square matrix (rejection sampling).
pub fn random_invertible(rng: &mut SeededRng, n: usize, field: FieldSpec) -> RectMatrix {
    loop {
        let m = random_matrix(rng, n, n, field);
        if m.rank() == n {
            return m;
        }
    }
}

/// A random square matrix with the given determinant: a random invertible
/// matrix whose first row is rescaled.
pub fn random_with_det(rng: &mut SeededRng, n: usize, target: &Scalar) -> RectMatrix {
    let field = target.field();
    let m = random_invertible(rng, n, field);
    let d = m.det_square().expect("square");
    let s = target * &d.inv().expect("invertible");
    RectMatrix::from_fn(n, n, field, |r, c| if r == 0 { m.at(r, c) * &s } else { m.at(r, c).clone() })
}
