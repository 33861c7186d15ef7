//! k-subsets of `[n]` and injections `[k] -> [n]`, both 1-based and
//! enumerated in lexicographic order.

use crate::error::{CullisError, Result};

/// A strictly increasing `c = {i_1 < ... < i_k} ⊆ [n]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KSubset {
    n: usize,
    elems: Vec<usize>,
    sign: i8,
}

impl KSubset {
    pub fn new(n: usize, elems: Vec<usize>) -> Result<Self> {
        if elems.is_empty() {
            return Err(CullisError::ShapeError("empty subset".into()));
        }
        for w in elems.windows(2) {
            if w[0] >= w[1] {
                return Err(CullisError::ShapeError(format!("{elems:?} is not strictly increasing")));
            }
        }
        if let Some(&bad) = elems.iter().find(|&&i| i == 0 || i > n) {
            return Err(CullisError::IndexOutOfRange { index: bad, bound: n });
        }
        let sign = set_sign(&elems);
        Ok(KSubset { n, elems, sign })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.elems.len()
    }

    pub fn elems(&self) -> &[usize] {
        &self.elems
    }

    /// `c(α) = i_α`, 1-based α.
    pub fn at(&self, alpha: usize) -> usize {
        self.elems[alpha - 1]
    }

    /// Cached `sgn_[n](c)`.
    pub fn sign(&self) -> i8 {
        self.sign
    }
}

/// `(-1)^{Σ_α (c(α) - α)}` for increasing 1-based `c`.
pub(crate) fn set_sign(elems: &[usize]) -> i8 {
    let e: usize = elems.iter().enumerate().map(|(a, &i)| i - (a + 1)).sum();
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

/// An injection `σ: [k] -> [n]` given by its images `σ(1..k)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Injection {
    n: usize,
    images: Vec<usize>,
}

impl Injection {
    pub fn new(n: usize, images: Vec<usize>) -> Result<Self> {
        if images.is_empty() {
            return Err(CullisError::ShapeError("empty injection".into()));
        }
        if let Some(&bad) = images.iter().find(|&&i| i == 0 || i > n) {
            return Err(CullisError::IndexOutOfRange { index: bad, bound: n });
        }
        let mut sorted = images.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CullisError::ShapeError(format!("{images:?} repeats a value")));
        }
        Ok(Injection { n, images })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    /// The image set `σ([k])` as a subset.
    pub fn image_set(&self) -> KSubset {
        let mut s = self.images.clone();
        s.sort_unstable();
        KSubset::new(self.n, s).expect("images of an injection form a subset")
    }
}

/// Parity of the sequence as a permutation of its sorted values.
pub(crate) fn sequence_sign(seq: &[usize]) -> i8 {
    let mut inv = 0usize;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Lexicographic iterator over `k`-subsets of `[n]`.
pub struct Subsets {
    n: usize,
    cur: Option<Vec<usize>>,
}

pub fn subsets(n: usize, k: usize) -> Subsets {
    let cur = if k <= n { Some((1..=k).collect()) } else { None };
    Subsets { n, cur }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.cur = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - (k - 1 - i) {
                next[i] += 1;
                for t in i + 1..k {
                    next[t] = next[t - 1] + 1;
                }
                self.cur = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// All `k`-subsets with their signs.
pub fn ksubsets(n: usize, k: usize) -> impl Iterator<Item = KSubset> {
    subsets(n, k).map(move |s| KSubset::new(n, s).expect("generated subsets are valid"))
}

/// Lexicographic iterator over injections `[k] -> [n]` (as image sequences).
pub struct Injections {
    n: usize,
    k: usize,
    cur: Option<Vec<usize>>,
}

pub fn injections(n: usize, k: usize) -> Injections {
    let cur = if k <= n { Some((1..=k).collect()) } else { None };
    Injections { n, k, cur }
}

impl Iterator for Injections {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.cur.clone()?;
        self.cur = next_injection(&out, self.n, self.k);
        Some(out)
    }
}

fn next_injection(cur: &[usize], n: usize, k: usize) -> Option<Vec<usize>> {
    let mut v = cur.to_vec();
    let mut i = k;
    while i > 0 {
        i -= 1;
        let used = |x: usize, v: &[usize]| v[..i].contains(&x);
        let mut cand = v[i] + 1;
        while cand <= n && used(cand, &v) {
            cand += 1;
        }
        if cand <= n {
            v[i] = cand;
            let mut ok = true;
            for t in i + 1..k {
                let mut x = 1;
                while x <= n && v[..t].contains(&x) {
                    x += 1;
                }
                if x > n {
                    ok = false;
                    break;
                }
                v[t] = x;
            }
            if ok {
                return Some(v);
            }
        }
    }
    None
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `n! / (n-k)!`, saturating.
pub fn falling_factorial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128))
}
