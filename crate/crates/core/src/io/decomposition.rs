use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{format_scalar, parse_scalar, read_json, to_field, write_json};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::tensor::{EpsDecomposition, EpsTerm};

/// One term; each vector entry lists its `ε` coefficients, lowest first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermFile {
    pub a: Vec<Vec<Value>>,
    pub b: Vec<Vec<Value>>,
    pub c: Vec<Vec<Value>>,
}

/// On-disk border decomposition `Σ aᵢ(ε)⊗bᵢ(ε)⊗cᵢ(ε) = ε^h T + O(ε^{h+1})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionFile {
    pub h: usize,
    pub terms: Vec<TermFile>,
}

fn parse_vector(v: &[Vec<Value>]) -> Result<Vec<Vec<BigRational>>> {
    v.iter().map(|poly| poly.iter().map(parse_scalar).collect()).collect()
}

impl DecompositionFile {
    pub fn from_decomposition<K: Field>(f: &K, d: &EpsDecomposition<K::Elem>) -> Self {
        let fmt = |v: &Vec<Vec<K::Elem>>| -> Vec<Vec<Value>> {
            v.iter().map(|poly| poly.iter().map(|x| Value::String(format_scalar(f, x))).collect()).collect()
        };
        let terms = d.terms.iter().map(|t| TermFile { a: fmt(&t.a), b: fmt(&t.b), c: fmt(&t.c) }).collect();
        DecompositionFile { h: d.h, terms }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: DecompositionFile = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        file.to_rational()?;
        Ok(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let file: DecompositionFile = read_json(path)?;
        file.to_rational()?;
        Ok(file)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn to_rational(&self) -> Result<EpsDecomposition<BigRational>> {
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(EpsTerm { a: parse_vector(&t.a)?, b: parse_vector(&t.b)?, c: parse_vector(&t.c)? }))
            .collect::<Result<_>>()?;
        Ok(EpsDecomposition::new(self.h, terms))
    }

    pub fn to_field<K: Field>(&self, f: &K) -> Result<EpsDecomposition<K::Elem>> {
        let map = |v: &[Vec<Value>]| -> Result<Vec<Vec<K::Elem>>> {
            v.iter().map(|poly| poly.iter().map(|x| to_field(f, &parse_scalar(x)?)).collect()).collect()
        };
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(EpsTerm { a: map(&t.a)?, b: map(&t.b)?, c: map(&t.c)? }))
            .collect::<Result<_>>()?;
        Ok(EpsDecomposition::new(self.h, terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::zoo;

    #[test]
    fn w_state_certificate_round_trips_and_verifies() {
        let q = Rationals;
        let d = zoo::w_state_decomposition(&q);
        let file = DecompositionFile::from_decomposition(&q, &d);
        let text = serde_json::to_string(&file).unwrap();
        let back = DecompositionFile::from_json_str(&text).unwrap();
        assert_eq!(back.to_rational().unwrap(), d);
        assert!(back.to_rational().unwrap().verify(&zoo::w_state(&q)).unwrap());
        let f = PrimeField::default();
        assert!(back.to_field(&f).unwrap().verify(&zoo::w_state(&f)).unwrap());
    }

    #[test]
    fn malformed_coefficients_are_rejected() {
        let s = r#"{"h":0,"terms":[{"a":[["1"]],"b":[["x"]],"c":[["1"]]}]}"#;
        assert!(matches!(DecompositionFile::from_json_str(s), Err(Error::Malformed(_))));
        assert!(DecompositionFile::from_json_str(r#"{"terms":[]}"#).is_err());
    }
}
