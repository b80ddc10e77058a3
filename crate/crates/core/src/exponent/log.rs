//! Fixed-point natural logarithms of big integers.
//!
//! Values are `BigInt`s scaled by `2^PRECISION_BITS`. With 320 bits the
//! absolute error is far below `10^-90`.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const PRECISION_BITS: u64 = 320;

/// `atanh(num/den)` for `0 ≤ num/den < 1/2`, fixed point.
fn atanh_fixed(num: &BigUint, den: &BigUint) -> BigInt {
    let y = BigInt::from((num << PRECISION_BITS) / den);
    let y2 = (&y * &y) >> PRECISION_BITS;
    let mut term = y;
    let mut sum = BigInt::zero();
    let mut odd = 1u64;
    while !term.is_zero() {
        sum += &term / odd;
        term = (&term * &y2) >> PRECISION_BITS;
        odd += 2;
    }
    sum
}

fn ln2_fixed() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| atanh_fixed(&BigUint::one(), &BigUint::from(3u8)) * 2)
}

/// `ln n` in fixed point. Panics on `n = 0`.
pub fn ln_fixed(n: &BigUint) -> BigInt {
    assert!(!n.is_zero(), "logarithm of zero");
    let e = n.bits() - 1;
    let pow = BigUint::one() << e;
    // n = 2^e · x with x ∈ [1, 2); ln x = 2 atanh((x − 1)/(x + 1)).
    let frac = atanh_fixed(&(n - &pow), &(n + &pow)) * 2;
    ln2_fixed() * BigInt::from(e) + frac
}

/// `round_half_even(num / den · 10^4)` for exact integers.
pub fn round_ten_thousandths(num: &BigInt, den: &BigInt) -> BigInt {
    let (num, den) = if den.is_negative() { (-num, -den) } else { (num.clone(), den.clone()) };
    let (q, r) = (num * BigInt::from(10_000u32)).div_mod_floor(&den);
    let twice = r * 2;
    if twice > den || (twice == den && q.is_odd()) {
        q + 1
    } else {
        q
    }
}

/// If `log_base x` is rational, returns it as `(t, s)` with value `t/s`.
pub fn exact_log(base: &BigUint, x: &BigUint) -> Option<(u64, u64)> {
    if *base <= BigUint::one() || x.is_zero() {
        return None;
    }
    // Write base = g^s with g not itself a perfect power; any x with a
    // rational logarithm to base `base` is then a power of g.
    let (g, s) = (1..=base.bits())
        .rev()
        .find_map(|s| {
            let g = base.nth_root(s as u32);
            (g > BigUint::one() && g.pow(s as u32) == *base).then_some((g, s))
        })
        .expect("s = 1 always works");
    let mut t = 0u64;
    let mut rest = x.clone();
    while rest > BigUint::one() {
        let (q, r) = rest.div_rem(&g);
        if !r.is_zero() {
            return None;
        }
        rest = q;
        t += 1;
    }
    Some((t, s))
}

/// Fixed-point value as an `f64`, for display and comparisons in tests.
pub fn fixed_to_f64(v: &BigInt) -> f64 {
    let shift = PRECISION_BITS - 60;
    (v >> shift).to_f64().unwrap_or(f64::NAN) / (1u64 << 60) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ln2_leading_digits() {
        // 10^35 · ln 2, truncated.
        let digits: BigInt = "69314718055994530941723212145817656".parse().unwrap();
        let scaled = (ln2_fixed() * BigInt::from(10u8).pow(35)) >> PRECISION_BITS;
        assert_eq!(scaled, digits);
    }

    #[test]
    fn ln_of_one_is_zero() {
        assert!(ln_fixed(&BigUint::one()).is_zero());
    }

    #[test]
    fn rounding_is_half_even() {
        let b = |v: i64| BigInt::from(v);
        assert_eq!(round_ten_thousandths(&b(1), &b(20_000)), b(0));
        assert_eq!(round_ten_thousandths(&b(3), &b(20_000)), b(2));
        assert_eq!(round_ten_thousandths(&b(5), &b(2)), b(25_000));
        assert_eq!(round_ten_thousandths(&b(-1), &b(-3)), b(3333));
    }

    #[test]
    fn exact_logs() {
        let u = |v: u64| BigUint::from(v);
        assert_eq!(exact_log(&u(4), &u(8)), Some((3, 2)));
        assert_eq!(exact_log(&u(2), &u(1)), Some((0, 1)));
        assert_eq!(exact_log(&u(8), &u(2)), Some((1, 3)));
        assert_eq!(exact_log(&u(2), &u(7)), None);
        assert_eq!(exact_log(&u(6), &u(36)), Some((2, 1)));
        assert_eq!(exact_log(&u(12), &u(6)), None);
    }

    proptest! {
        #[test]
        fn agrees_with_f64(n in 1u64..u64::MAX) {
            let got = fixed_to_f64(&ln_fixed(&BigUint::from(n)));
            let want = (n as f64).ln();
            prop_assert!((got - want).abs() <= 1e-12 * want.max(1.0));
        }

        #[test]
        fn additive(a in 1u64..1 << 40, b in 1u64..1 << 40) {
            let lhs = ln_fixed(&(BigUint::from(a) * BigUint::from(b)));
            let rhs = ln_fixed(&BigUint::from(a)) + ln_fixed(&BigUint::from(b));
            prop_assert!((lhs - rhs).abs() < BigInt::from(1u32 << 16));
        }
    }
}
