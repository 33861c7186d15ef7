//! Sparse multivariate polynomials keyed by sorted variable multisets.
//!
//! Over GF(p) every product is reduced modulo `x^p - x`, so two reduced
//! polynomials are equal exactly when they agree as functions on GF(p)^m.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::field::{FieldSpec, Scalar};

/// Sorted list of variable indices; `x_3^2 x_7` is `[3, 3, 7]`.
pub type Monomial = SmallVec<[u16; 8]>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    field: FieldSpec,
    terms: HashMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(field: FieldSpec) -> Self {
        SparsePoly { field, terms: HashMap::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        let mut p = Self::zero(c.field());
        p.add_term(Monomial::new(), c);
        p
    }

    /// `Σ_v coeffs[v] · x_v`.
    pub fn linear(field: FieldSpec, coeffs: &[Scalar]) -> Self {
        let mut p = Self::zero(field);
        for (v, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                p.terms.insert(SmallVec::from_slice(&[v as u16]), c.clone());
            }
        }
        p
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let m = self.reduce(m);
        match self.terms.entry(m) {
            std::collections::hash_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::hash_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// `self += s · other`.
    pub fn add_scaled(&mut self, other: &SparsePoly, s: &Scalar) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out.add_scaled(other, &-&self.field.one());
        out
    }

    /// Product; also returns the number of term products formed.
    pub fn mul(&self, other: &SparsePoly) -> (SparsePoly, u128) {
        let mut out = SparsePoly::zero(self.field);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(merge(m1, m2), c1 * c2);
            }
        }
        (out, (self.terms.len() as u128) * (other.terms.len() as u128))
    }

    /// Replaces `x_v` by the constant `a`.
    pub fn substitute(&self, v: u16, a: &Scalar) -> SparsePoly {
        let mut out = SparsePoly::zero(self.field);
        for (m, c) in &self.terms {
            let e = m.iter().filter(|&&x| x == v).count() as u64;
            if e == 0 {
                out.add_term(m.clone(), c.clone());
                continue;
            }
            let rest: Monomial = m.iter().copied().filter(|&x| x != v).collect();
            out.add_term(rest, c * &a.pow(e));
        }
        out
    }

    /// Highest power of `x_v` appearing.
    pub fn degree_in(&self, v: u16) -> usize {
        self.terms.keys().map(|m| m.iter().filter(|&&x| x == v).count()).max().unwrap_or(0)
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        let mut acc = self.field.zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &v in m {
                t *= &point[v as usize];
            }
            acc += t;
        }
        acc
    }

    /// Over GF(p), `x^p = x`: repeatedly drop `p - 1` copies of a variable
    /// that occurs at least `p` times.
    fn reduce(&self, m: Monomial) -> Monomial {
        let FieldSpec::Prime(p) = self.field else {
            return m;
        };
        let p = p as usize;
        if m.len() < p {
            return m;
        }
        let mut out = Monomial::new();
        let mut i = 0;
        while i < m.len() {
            let v = m[i];
            let mut j = i;
            while j < m.len() && m[j] == v {
                j += 1;
            }
            let mut e = j - i;
            if e >= p {
                e = (e - 1) % (p - 1) + 1;
            }
            out.extend(std::iter::repeat_n(v, e));
            i = j;
        }
        out
    }
}

fn merge(a: &Monomial, b: &Monomial) -> Monomial {
    let mut out = Monomial::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// A point where a nonzero polynomial does not vanish.
///
/// Variables are fixed one at a time, each to a value that keeps the
/// remaining polynomial nonzero: any of GF(p) over a residue field (reduced
/// polynomials are nonzero as functions), or one of `0..=deg` over the
/// rationals.
pub fn nonvanishing_point(p: &SparsePoly, nvars: usize) -> Option<Vec<Scalar>> {
    if p.is_zero() {
        return None;
    }
    let field = p.field();
    let mut cur = p.clone();
    let mut point = Vec::with_capacity(nvars);
    for v in 0..nvars as u16 {
        let candidates: Vec<Scalar> = match field.elements() {
            Some(all) => all,
            None => (0..=cur.degree_in(v) as i64).map(|i| field.from_i64(i)).collect(),
        };
        let mut chosen = None;
        for a in candidates {
            let next = cur.substitute(v, &a);
            if !next.is_zero() {
                chosen = Some((a, next));
                break;
            }
        }
        let (a, next) = chosen?;
        point.push(a);
        cur = next;
    }
    Some(point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_reduction() {
        let f = FieldSpec::prime(2).unwrap();
        let x = SparsePoly::linear(f, &[f.one()]);
        let (x2, _) = x.mul(&x);
        assert_eq!(x2, x);
        let f3 = FieldSpec::prime(3).unwrap();
        let y = SparsePoly::linear(f3, &[f3.one(), f3.one()]);
        let (y2, _) = y.mul(&y);
        let (y3, _) = y2.mul(&y);
        // (a + b)^3 = a^3 + b^3 = a + b as functions on GF(3)
        assert_eq!(y3, y);
    }

    #[test]
    fn substitution_and_evaluation() {
        let q = FieldSpec::Rational;
        let x = SparsePoly::linear(q, &[q.one(), q.from_i64(2)]);
        let (sq, _) = x.mul(&x);
        let pt = [q.from_i64(3), q.from_i64(-1)];
        assert_eq!(sq.eval(&pt), q.one());
        let s = sq.substitute(0, &pt[0]).substitute(1, &pt[1]);
        assert_eq!(s, SparsePoly::constant(q.one()));
    }

    #[test]
    fn finds_nonvanishing_points() {
        let q = FieldSpec::Rational;
        let x = SparsePoly::linear(q, &[q.one(), q.from_i64(-1)]);
        let pt = nonvanishing_point(&x, 2).unwrap();
        assert!(!x.eval(&pt).is_zero());
        assert!(nonvanishing_point(&SparsePoly::zero(q), 2).is_none());
        let f = FieldSpec::prime(2).unwrap();
        let a = SparsePoly::linear(f, &[f.one(), f.zero()]);
        let b = SparsePoly::linear(f, &[f.zero(), f.one()]);
        let (ab, _) = a.mul(&b);
        let pt = nonvanishing_point(&ab, 2).unwrap();
        assert!(ab.eval(&pt).is_one());
    }
}
