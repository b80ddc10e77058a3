use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::{Field, FieldTag};
use crate::error::{Error, Result};

const RANDOM_BITS: u32 = 30;

/// The rational numbers with arbitrary-precision numerators and denominators.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn tag(&self) -> FieldTag {
        FieldTag::Rational
    }

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn from_i64(&self, v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    fn from_rational(&self, v: &BigRational) -> Result<BigRational> {
        Ok(v.clone())
    }

    fn to_rational(&self, a: &BigRational) -> BigRational {
        a.clone()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn inv(&self, a: &BigRational) -> Result<BigRational> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(a.recip())
    }

    /// Uniform integer in `[-2^30, 2^30]`.
    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let bound = 1i64 << RANDOM_BITS;
        self.from_i64(rng.gen_range(-bound..=bound))
    }

    /// Fraction-free (Bareiss) elimination on the integer-scaled rows.
    fn echelon(&self, rows: &mut Vec<Vec<BigRational>>, ncols: usize) -> Vec<usize> {
        let mut ints: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
        let pivots = bareiss(&mut ints, ncols);
        for (dst, src) in rows.iter_mut().zip(ints) {
            *dst = src.into_iter().map(BigRational::from_integer).collect();
        }
        pivots
    }
}

/// Scale a rational row by the lcm of its denominators.
fn clear_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let lcm = row
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// In-place Bareiss elimination over the integers; returns pivot columns.
pub(crate) fn bareiss(rows: &mut [Vec<BigInt>], ncols: usize) -> Vec<usize> {
    let nrows = rows.len();
    let mut pivots = Vec::new();
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        // Smallest nonzero pivot keeps intermediate entries short.
        let Some(found) = (r..nrows)
            .filter(|&i| !rows[i][col].is_zero())
            .min_by_key(|&i| rows[i][col].abs())
        else {
            continue;
        };
        rows.swap(r, found);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[col];
        let update = |row: &mut Vec<BigInt>| {
            let lead = std::mem::take(&mut row[col]);
            for j in col + 1..ncols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                // Exact by Sylvester's identity.
                row[j] = v / &prev;
            }
        };
        if tail.len() * (ncols - col) >= 4096 {
            tail.par_iter_mut().for_each(update);
        } else {
            tail.iter_mut().for_each(update);
        }
        prev = pivot_row[col].clone();
        pivots.push(col);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn bareiss_rank_of_rational_rows() {
        let f = Rationals;
        let mut rows = vec![
            vec![q(1, 2), q(1, 3), q(1, 1)],
            vec![q(1, 1), q(2, 3), q(2, 1)],
            vec![q(0, 1), q(1, 7), q(5, 1)],
        ];
        let pivots = f.echelon(&mut rows, 3);
        assert_eq!(pivots, vec![0, 1]);
        assert!(rows[2].iter().all(|x| x.is_zero()));
    }

    #[test]
    fn bareiss_divisions_are_exact() {
        // The last Bareiss pivot equals the determinant up to sign.
        let mut rows: Vec<Vec<BigInt>> = vec![
            vec![2.into(), 3.into(), 1.into()],
            vec![4.into(), 1.into(), 5.into()],
            vec![1.into(), 1.into(), 1.into()],
        ];
        let pivots = bareiss(&mut rows, 3);
        assert_eq!(pivots.len(), 3);
        // det = 2(1-5) - 3(4-5) + 1(4-1) = -8 + 3 + 3 = -2
        assert_eq!(rows[2][2].abs(), BigInt::from(2));
    }
}
