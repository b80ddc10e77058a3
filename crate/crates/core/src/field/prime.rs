use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::Rng;
use rayon::prelude::*;

use super::{Field, FieldTag};
use crate::error::{Error, Result};

/// 2^61 - 1, the default modulus.
pub const MERSENNE_61: u64 = (1 << 61) - 1;

// Row updates below this many entries stay on the calling thread.
const PAR_THRESHOLD: usize = 1 << 14;

/// Integers modulo a prime `p < 2^63`. Elements are canonical residues in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField { p: MERSENNE_61 }
    }
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p >= 1 << 63 || !is_prime_u64(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn reduce128(&self, x: u128) -> u64 {
        if self.p == MERSENNE_61 {
            let m = MERSENNE_61 as u128;
            let r = (x & m) + (x >> 61);
            let r = ((r & m) + (r >> 61)) as u64;
            if r >= MERSENNE_61 {
                r - MERSENNE_61
            } else {
                r
            }
        } else {
            (x % self.p as u128) as u64
        }
    }

    #[inline]
    fn mulmod(&self, a: u64, b: u64) -> u64 {
        self.reduce128(a as u128 * b as u128)
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1 % self.p;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mulmod(acc, base);
            }
            base = self.mulmod(base, base);
            exp >>= 1;
        }
        acc
    }

    fn reduce_bigint(&self, v: &BigInt) -> u64 {
        let p = BigInt::from(self.p);
        let r = ((v % &p) + &p) % &p;
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn tag(&self) -> FieldTag {
        FieldTag::Prime(self.p)
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        1 % self.p
    }

    fn from_i64(&self, v: i64) -> u64 {
        let r = (v as i128).rem_euclid(self.p as i128);
        r as u64
    }

    fn from_rational(&self, v: &BigRational) -> Result<u64> {
        let num = self.reduce_bigint(v.numer());
        let den = self.reduce_bigint(v.denom());
        self.div(&num, &den)
    }

    fn to_rational(&self, a: &u64) -> BigRational {
        BigRational::from_integer(BigInt::from_biguint(Sign::Plus, (*a).into()))
    }

    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }

    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.mulmod(*a, *b)
    }

    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }

    fn inv(&self, a: &u64) -> Result<u64> {
        if *a == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(*a, self.p - 2))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        rng.gen_range(0..self.p)
    }

    #[inline]
    fn sub_scaled(&self, dst: &mut [u64], factor: &u64, src: &[u64]) {
        let neg = self.neg(factor);
        for (d, &s) in dst.iter_mut().zip(src) {
            if s != 0 {
                *d = self.reduce128(*d as u128 + neg as u128 * s as u128);
            }
        }
    }

    fn echelon(&self, rows: &mut Vec<Vec<u64>>, ncols: usize) -> Vec<usize> {
        let nrows = rows.len();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            if r == nrows {
                break;
            }
            let Some(found) = (r..nrows).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, found);
            let inv = self.inv(&rows[r][col]).expect("pivot is nonzero");
            let (head, tail) = rows.split_at_mut(r + 1);
            let pivot_row = &head[r][col..];
            let update = |row: &mut Vec<u64>| {
                if row[col] != 0 {
                    let factor = self.mulmod(row[col], inv);
                    self.sub_scaled(&mut row[col..], &factor, pivot_row);
                }
            };
            if tail.len() * (ncols - col) >= PAR_THRESHOLD {
                tail.par_iter_mut().for_each(update);
            } else {
                tail.iter_mut().for_each(update);
            }
            pivots.push(col);
            r += 1;
        }
        pivots
    }

    fn format(&self, a: &u64) -> String {
        a.to_string()
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(acc, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        acc
    };
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
