//! Matrix multiplication exponent bounds from border-rank upper bounds.
//!
//! Values are computed from exact integer data with 320-bit fixed-point
//! logarithms and rounded half-even to four decimal places. When the
//! logarithm is rational it is evaluated exactly.

mod ledger;
pub mod log;

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::Pow;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use ledger::{kron_ledger_update, power_id, BoundKind, BrFact, KronProduct, Ledger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// `ω ≤ log_n R̲(M⟨n⟩)`.
    Bini,
    /// `ω ≤ log_q(4/27 · R̲(T_cw,q^⊠k)^{3/k})`.
    CwSmall,
    /// Same shape, for the skew Coppersmith–Winograd tensor.
    CwSkew,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaInputs {
    /// `n` for [`Formula::Bini`], `q` otherwise.
    pub base: u64,
    pub k: u32,
    pub r_upper: u64,
}

/// An upper bound on `ω`, held as an integer number of ten-thousandths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaBound {
    pub ten_thousandths: u64,
    pub formula: Formula,
    pub inputs: OmegaInputs,
    /// The logarithm was rational and evaluated without approximation.
    pub exact: bool,
    /// The bound is at least 3 and says nothing new.
    pub non_improving: bool,
}

impl OmegaBound {
    pub fn value(&self) -> f64 {
        self.ten_thousandths as f64 / 10_000.0
    }
}

impl fmt::Display for OmegaBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:04}", self.ten_thousandths / 10_000, self.ten_thousandths % 10_000)
    }
}

/// `log_base(num/den) / k`, rounded to ten-thousandths.
fn log_ratio(base: u64, num: &BigUint, den: &BigUint, k: u32) -> (u64, bool) {
    let b = BigUint::from(base);
    let k_big = BigInt::from(k);
    let g = num.gcd(den);
    if *den == g {
        if let Some((t, s)) = log::exact_log(&b, &(num / &g)) {
            let v = log::round_ten_thousandths(&BigInt::from(t), &(BigInt::from(s) * &k_big));
            return (to_u64(&v), true);
        }
    }
    let top = log::ln_fixed(num) - log::ln_fixed(den);
    let bottom = log::ln_fixed(&b) * k_big;
    (to_u64(&log::round_ten_thousandths(&top, &bottom)), false)
}

fn to_u64(v: &BigInt) -> u64 {
    u64::try_from(v).expect("bounds are positive and small")
}

/// `ω ≤ log_n r` from `R̲(M⟨n⟩) ≤ r`.
pub fn bini_bound(n: u64, r_upper: u64) -> Result<OmegaBound> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n ≥ 2, got {n}")));
    }
    let n2 = n.checked_mul(n).ok_or_else(|| Error::InvalidArgument(format!("n = {n} too large")))?;
    if r_upper < n2 {
        return Err(Error::InvalidArgument(format!(
            "border rank {r_upper} is below n² = {n2}, which M⟨{n}⟩ always needs"
        )));
    }
    let r = BigUint::from(r_upper);
    let (v, exact) = log_ratio(n, &r, &BigUint::from(1u8), 1);
    Ok(OmegaBound {
        ten_thousandths: v,
        formula: Formula::Bini,
        inputs: OmegaInputs { base: n, k: 1, r_upper },
        exact,
        non_improving: r >= BigUint::from(n).pow(3u32),
    })
}

fn cw_shape(formula: Formula, q: u64, k: u32, r_upper: u64) -> Result<OmegaBound> {
    if q < 2 || k < 1 {
        return Err(Error::InvalidArgument(format!("need q ≥ 2 and k ≥ 1, got q = {q}, k = {k}")));
    }
    // 4/27 · r^{3/k} = (4^k r³ / 27^k)^{1/k}.
    let num = BigUint::from(4u8).pow(k) * BigUint::from(r_upper).pow(3u32);
    let den = BigUint::from(27u8).pow(k);
    let qk = BigUint::from(q).pow(k);
    if num < &den * &qk * &qk {
        return Err(Error::InvalidArgument(format!(
            "r = {r_upper} would give ω < 2; no tensor of this shape has such border rank"
        )));
    }
    let non_improving = num >= &den * &qk * &qk * &qk;
    let (v, exact) = log_ratio(q, &num, &den, k);
    Ok(OmegaBound { ten_thousandths: v, formula, inputs: OmegaInputs { base: q, k, r_upper }, exact, non_improving })
}

/// `ω ≤ log_q(4/27 · r^{3/k})` from `R̲(T_cw,q^⊠k) ≤ r`.
pub fn cw_omega_bound(q: u64, k: u32, r_upper: u64) -> Result<OmegaBound> {
    cw_shape(Formula::CwSmall, q, k, r_upper)
}

/// The same formula for the skew Coppersmith–Winograd tensor, whose border
/// ranks are supplied from outside.
pub fn skew_cw_omega_bound(q: u64, k: u32, r_upper: u64) -> Result<OmegaBound> {
    cw_shape(Formula::CwSkew, q, k, r_upper)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn oracle(q: u64, k: u32, r: u64) -> f64 {
        ((4.0 / 27.0) * (r as f64).powf(3.0 / k as f64)).ln() / (q as f64).ln()
    }

    #[test]
    fn bini_examples() {
        assert_eq!(bini_bound(2, 8).unwrap().to_string(), "3.0000");
        assert!(bini_bound(2, 8).unwrap().exact);
        assert_eq!(bini_bound(2, 7).unwrap().to_string(), "2.8074");
        assert_eq!(bini_bound(4, 49).unwrap().to_string(), "2.8074");
        assert!(bini_bound(2, 3).is_err());
        assert!(bini_bound(1, 3).is_err());
        for n in 2..12 {
            let sq = bini_bound(n, n * n).unwrap();
            assert_eq!(sq.ten_thousandths, 20_000);
            assert!(sq.exact);
            let cube = bini_bound(n, n * n * n).unwrap();
            assert!(cube.value() <= 3.0 + 1e-9);
            assert!(cube.non_improving);
        }
    }

    #[test]
    fn cw_examples() {
        let b = cw_omega_bound(2, 1, 3).unwrap();
        assert_eq!(b.ten_thousandths, 20_000);
        assert!(b.exact);
        let sq = cw_omega_bound(2, 2, 16).unwrap();
        assert_eq!(sq.to_string(), "3.2451");
        assert!(sq.non_improving);
        let eight = cw_omega_bound(8, 1, 10).unwrap();
        assert!((eight.value() - oracle(8, 1, 10)).abs() < 1e-4);
        assert!(eight.value() <= 2.41);
        assert!(!eight.non_improving);
        assert_eq!(skew_cw_omega_bound(8, 1, 10).unwrap().ten_thousandths, eight.ten_thousandths);
        assert!(cw_omega_bound(2, 1, 2).is_err());
        assert!(cw_omega_bound(1, 1, 5).is_err());
    }

    #[test]
    fn scale_invariance() {
        for rho in [3u64, 4, 10] {
            let base = cw_omega_bound(2, 1, rho).unwrap();
            for k in 1..=3u32 {
                for q in [2, 3] {
                    if let Ok(b) = cw_omega_bound(q, k, rho.pow(k)) {
                        assert_eq!(b.ten_thousandths, cw_omega_bound(q, 1, rho).unwrap().ten_thousandths);
                    }
                }
                assert_eq!(cw_omega_bound(2, k, rho.pow(k)).unwrap(), OmegaBound {
                    inputs: OmegaInputs { base: 2, k, r_upper: rho.pow(k) },
                    ..base.clone()
                });
            }
        }
    }

    proptest! {
        #[test]
        fn monotone_in_r(q in 2u64..20, k in 1u32..4, r in 1u64..5000) {
            if let (Ok(a), Ok(b)) = (cw_omega_bound(q, k, r), cw_omega_bound(q, k, r + 1)) {
                prop_assert!(a.ten_thousandths <= b.ten_thousandths);
            }
        }

        #[test]
        fn matches_float_oracle(q in 2u64..50, r in 1u64..100_000) {
            if let Ok(b) = cw_omega_bound(q, 1, r) {
                prop_assert!((b.value() - oracle(q, 1, r)).abs() <= 0.5e-4 + 1e-9);
                prop_assert!(b.ten_thousandths >= 20_000);
            }
        }

        #[test]
        fn bini_matches_float_oracle(n in 2u64..100, extra in 0u64..1_000_000) {
            let r = n * n + extra;
            let b = bini_bound(n, r).unwrap();
            prop_assert!((b.value() - (r as f64).ln() / (n as f64).ln()).abs() <= 0.5e-4 + 1e-9);
        }
    }
}
