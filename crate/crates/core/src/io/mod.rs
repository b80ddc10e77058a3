//! JSON file formats: tensors, border decompositions, algebra tables and
//! certificate reports.

mod algebra;
mod decomposition;
mod report;
mod tensor_file;

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{Field, FieldTag};
use crate::tensor::Tensor3;

pub use algebra::AlgebraFile;
pub use decomposition::{DecompositionFile, TermFile};
pub use report::{CertificateReport, TensorIdentity, ToolInfo, TOOL_NAME, TOOL_VERSION};
pub use tensor_file::{EntryFile, TensorFile};

/// Parses `"17"`, `"-3"` or `"num/den"`; JSON integers are accepted too.
pub fn parse_scalar(v: &Value) -> Result<BigRational> {
    match v {
        Value::Number(n) => {
            let s = n.to_string();
            s.parse::<BigInt>()
                .map(BigRational::from_integer)
                .map_err(|_| Error::Malformed(format!("`{s}` is not an integer; write fractions as \"num/den\"")))
        }
        Value::String(s) => parse_rational(s),
        other => Err(Error::Malformed(format!("expected a number or string, got {other}"))),
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Malformed(format!("`{s}` is not an integer or num/den fraction"));
    match s.split_once('/') {
        None => s.parse::<BigInt>().map(BigRational::from_integer).map_err(|_| bad()),
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Malformed(format!("`{s}` has a zero denominator")));
            }
            Ok(BigRational::new(n, d))
        }
    }
}

/// Shortest exact string for a field element: reduced fractions over ℚ,
/// the representative in `(−p/2, p/2]` over `F_p`.
pub fn format_scalar<K: Field>(f: &K, a: &K::Elem) -> String {
    let r = f.to_rational(a);
    if let FieldTag::Prime(p) = f.tag() {
        let p = BigInt::from(p);
        let v = r.to_integer();
        if &v * 2 > p {
            return (v - p).to_string();
        }
        return v.to_string();
    }
    r.to_string()
}

/// SHA-256 over the dims, field tag and sorted nonzero entries. Independent
/// of entry order and of how values are written.
pub fn tensor_hash<K: Field>(t: &Tensor3<K>) -> String {
    let f = t.field();
    let [a, b, c] = t.dims();
    let mut h = Sha256::new();
    h.update(format!("dims:{a},{b},{c};field:{};", f.tag()));
    for ([i, j, k], v) in t.nonzero_entries() {
        h.update(format!("{i},{j},{k}={};", f.to_rational(v)));
    }
    hex::encode(h.finalize())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub(crate) fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
}

pub(crate) fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn to_field<K: Field>(f: &K, v: &BigRational) -> Result<K::Elem> {
    f.from_rational(v).map_err(|_| Error::Malformed(format!("{v} has a denominator that vanishes in {}", f.tag())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use serde_json::json;

    #[test]
    fn scalars() {
        assert_eq!(parse_scalar(&json!(5)).unwrap(), BigRational::from_integer(5.into()));
        assert_eq!(parse_scalar(&json!("-2/4")).unwrap(), BigRational::new((-1).into(), 2.into()));
        assert!(parse_scalar(&json!("1/0")).is_err());
        assert!(parse_scalar(&json!(1.5)).is_err());
        assert!(parse_scalar(&json!("x")).is_err());
        assert!(parse_scalar(&json!(null)).is_err());
    }

    #[test]
    fn prime_representatives_are_centered() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(format_scalar(&f, &f.from_i64(-1)), "-1");
        assert_eq!(format_scalar(&f, &f.from_i64(3)), "3");
        assert_eq!(format_scalar(&Rationals, &BigRational::new(2.into(), (-6).into())), "-1/3");
    }

    #[test]
    fn hash_ignores_construction_order() {
        let q = Rationals;
        let t1 = Tensor3::from_i64_entries(&q, [2, 2, 2], &[([0, 0, 1], 1), ([1, 0, 0], 1)]).unwrap();
        let t2 = Tensor3::from_i64_entries(&q, [2, 2, 2], &[([1, 0, 0], 1), ([0, 0, 1], 1)]).unwrap();
        assert_eq!(tensor_hash(&t1), tensor_hash(&t2));
        let t3 = Tensor3::from_i64_entries(&q, [2, 2, 2], &[([1, 0, 0], 1), ([0, 0, 1], 2)]).unwrap();
        assert_ne!(tensor_hash(&t1), tensor_hash(&t3));
        assert_eq!(tensor_hash(&t1).len(), 64);
    }
}
