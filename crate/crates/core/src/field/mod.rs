//! Exact scalar fields.
//!
//! Every computation in the crate is generic over a [`Field`]. Two backends
//! exist: [`Rationals`] (arbitrary precision, the audit path) and
//! [`PrimeField`] (word-sized modular arithmetic, the fast path). Field
//! contexts are passed explicitly, in the style of `ring.add(&a, &b)`, so a
//! prime modulus can be chosen at run time.

mod prime;
mod rational;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use prime::{is_prime_u64, PrimeField, MERSENNE_61};
pub use rational::Rationals;

/// Identifies which field produced a value or a certificate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldTag {
    Rational,
    Prime(u64),
}

impl FieldTag {
    pub fn characteristic(self) -> u64 {
        match self {
            FieldTag::Rational => 0,
            FieldTag::Prime(p) => p,
        }
    }
}

impl Default for FieldTag {
    fn default() -> Self {
        FieldTag::Prime(MERSENNE_61)
    }
}

impl fmt::Display for FieldTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldTag::Rational => write!(f, "rational"),
            FieldTag::Prime(p) => write!(f, "prime:{p}"),
        }
    }
}

impl FromStr for FieldTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "rational" {
            return Ok(FieldTag::Rational);
        }
        let p = s
            .strip_prefix("prime:")
            .ok_or_else(|| Error::Malformed(format!("unknown field tag `{s}`")))?
            .parse::<u64>()
            .map_err(|e| Error::Malformed(format!("bad prime in `{s}`: {e}")))?;
        if !is_prime_u64(p) || p >= 1 << 63 {
            return Err(Error::NotPrime(p));
        }
        Ok(FieldTag::Prime(p))
    }
}

impl Serialize for FieldTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for FieldTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// An exact field with an explicit context object.
pub trait Field: Clone + fmt::Debug + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn tag(&self) -> FieldTag;

    fn characteristic(&self) -> u64 {
        self.tag().characteristic()
    }

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_i64(&self, v: i64) -> Self::Elem;
    /// Fails when the denominator vanishes in this field.
    fn from_rational(&self, v: &BigRational) -> Result<Self::Elem>;
    /// Canonical rational representative (`[0, p)` for prime fields).
    fn to_rational(&self, a: &Self::Elem) -> BigRational;

    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// A uniformly sampled element from a set of at least 2^30 values.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;

    /// Reduce `rows` (all of length `ncols`) to row echelon form in place.
    ///
    /// Returns the pivot columns, strictly increasing; the first
    /// `pivots.len()` rows carry those pivots and the remaining rows are zero.
    fn echelon(&self, rows: &mut Vec<Vec<Self::Elem>>, ncols: usize) -> Vec<usize> {
        gauss_echelon(self, rows, ncols)
    }

    /// `dst[i] -= factor * src[i]`
    fn sub_scaled(&self, dst: &mut [Self::Elem], factor: &Self::Elem, src: &[Self::Elem]) {
        for (d, s) in dst.iter_mut().zip(src) {
            if !self.is_zero(s) {
                *d = self.sub(d, &self.mul(factor, s));
            }
        }
    }

    fn format(&self, a: &Self::Elem) -> String {
        self.to_rational(a).to_string()
    }

    fn sum<I: IntoIterator<Item = Self::Elem>>(&self, items: I) -> Self::Elem {
        items.into_iter().fold(self.zero(), |acc, x| self.add(&acc, &x))
    }
}

/// Plain Gaussian elimination with field inverses.
pub fn gauss_echelon<K: Field>(
    field: &K,
    rows: &mut Vec<Vec<K::Elem>>,
    ncols: usize,
) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| !field.is_zero(&rows[i][col])) else {
            continue;
        };
        rows.swap(r, found);
        let inv = field.inv(&rows[r][col]).expect("pivot is nonzero");
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        for row in tail.iter_mut() {
            if field.is_zero(&row[col]) {
                continue;
            }
            let factor = field.mul(&row[col], &inv);
            field.sub_scaled(&mut row[col..], &factor, &pivot_row[col..]);
        }
        pivots.push(col);
        r += 1;
    }
    pivots
}
