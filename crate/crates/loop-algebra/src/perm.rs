//! Permutations of {0, .., n-1} and permutation triples.
//!
//! Permutations act on the right of elements and compose left to right:
//! `p.then(&q)` sends x to ((x)p)q. This matches the translation calculus
//! used everywhere else in the crate.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    image: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm { image: (0..n).collect() }
    }

    /// Builds a permutation from its image vector, checking bijectivity.
    pub fn from_image(image: Vec<usize>) -> Result<Self> {
        let n = image.len();
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(Error::NotAPermutation { n });
            }
            seen[v] = true;
        }
        Ok(Perm { image })
    }

    pub fn degree(&self) -> usize {
        self.image.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// Left-to-right composition: the result sends x to other(self(x)).
    pub fn then(&self, other: &Perm) -> Perm {
        assert_eq!(self.degree(), other.degree());
        Perm { image: self.image.iter().map(|&v| other.image[v]).collect() }
    }

    /// Checked left-to-right composition.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::OrderMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(self.then(other))
    }

    pub fn inverse(&self) -> Perm {
        let mut image = vec![0; self.image.len()];
        for (x, &v) in self.image.iter().enumerate() {
            image[v] = x;
        }
        Perm { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(x, &v)| x == v)
    }

    /// Integer power under left-to-right composition; negative powers invert.
    pub fn pow(&self, k: i64) -> Perm {
        let n = self.degree();
        if k < 0 {
            return self.inverse().pow(-k);
        }
        let mut out = Perm::identity(n);
        for _ in 0..k {
            out = out.then(self);
        }
        out
    }

    /// Order of the permutation: lcm of its cycle lengths.
    pub fn order(&self) -> usize {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut ord = 1usize;
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.image[x];
                len += 1;
            }
            ord = lcm(ord, len);
        }
        ord
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    if a == 0 || b == 0 { 0 } else { a / gcd(a, b) * b }
}

/// A triple of permutations (U, V, W), the candidate shape for autotopisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AutotopismTriple {
    pub u: Perm,
    pub v: Perm,
    pub w: Perm,
}

impl AutotopismTriple {
    pub fn new(u: Perm, v: Perm, w: Perm) -> Result<Self> {
        if u.degree() != v.degree() {
            return Err(Error::OrderMismatch { left: u.degree(), right: v.degree() });
        }
        if u.degree() != w.degree() {
            return Err(Error::OrderMismatch { left: u.degree(), right: w.degree() });
        }
        Ok(AutotopismTriple { u, v, w })
    }

    pub fn identity(n: usize) -> Self {
        AutotopismTriple { u: Perm::identity(n), v: Perm::identity(n), w: Perm::identity(n) }
    }

    pub fn degree(&self) -> usize {
        self.u.degree()
    }

    /// Componentwise left-to-right composition.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.degree() != other.degree() {
            return Err(Error::OrderMismatch { left: self.degree(), right: other.degree() });
        }
        Ok(AutotopismTriple {
            u: self.u.then(&other.u),
            v: self.v.then(&other.v),
            w: self.w.then(&other.w),
        })
    }

    pub fn inverse(&self) -> Self {
        AutotopismTriple { u: self.u.inverse(), v: self.v.inverse(), w: self.w.inverse() }
    }
}
