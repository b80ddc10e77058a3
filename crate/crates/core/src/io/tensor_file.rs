use std::collections::HashSet;
use std::path::Path;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{format_scalar, parse_scalar, read_json, tensor_hash, to_field, write_json};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, Rationals};
use crate::tensor::Tensor3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntryFile {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// Decimal integer or `"num/den"`; JSON integers are read as well.
    pub value: Value,
}

/// On-disk tensor: sparse entries, omitted ones are zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorFile {
    pub dims: [usize; 3],
    pub field: FieldTag,
    pub entries: Vec<EntryFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

impl TensorFile {
    pub fn from_tensor<K: Field>(t: &Tensor3<K>, name: Option<String>, provenance: Option<String>) -> Self {
        let f = t.field();
        let entries = t
            .nonzero_entries()
            .map(|([i, j, k], v)| EntryFile { i, j, k, value: Value::String(format_scalar(f, v)) })
            .collect();
        TensorFile { dims: t.dims(), field: f.tag(), entries, name, provenance }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: TensorFile = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        file.validated()
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_json::<TensorFile>(path)?.validated()
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    fn validated(self) -> Result<Self> {
        self.rational_entries()?;
        Ok(self)
    }

    /// Entries as exact rationals, after range and duplicate checks.
    pub fn rational_entries(&self) -> Result<Vec<([usize; 3], BigRational)>> {
        let [a, b, c] = self.dims;
        let mut seen = HashSet::new();
        self.entries
            .iter()
            .map(|e| {
                if e.i >= a || e.j >= b || e.k >= c {
                    return Err(Error::Malformed(format!(
                        "entry ({}, {}, {}) is outside dims {:?}",
                        e.i, e.j, e.k, self.dims
                    )));
                }
                if !seen.insert([e.i, e.j, e.k]) {
                    return Err(Error::Malformed(format!("duplicate entry ({}, {}, {})", e.i, e.j, e.k)));
                }
                Ok(([e.i, e.j, e.k], parse_scalar(&e.value)?))
            })
            .collect()
    }

    /// The tensor over `field`. Values are mapped through their exact
    /// rational form, so a rational file can be read modulo a prime.
    pub fn to_tensor<K: Field>(&self, field: &K) -> Result<Tensor3<K>> {
        let mut t = Tensor3::zeros(field, self.dims);
        for ([i, j, k], v) in self.rational_entries()? {
            t.set(i, j, k, to_field(field, &v)?);
        }
        Ok(t)
    }

    /// The tensor over ℚ; only meaningful for files declared rational.
    pub fn to_rational_tensor(&self) -> Result<Tensor3<Rationals>> {
        if self.field != FieldTag::Rational {
            return Err(Error::InvalidArgument(format!("tensor is declared over {}, not rational", self.field)));
        }
        self.to_tensor(&Rationals)
    }

    /// Content hash of the tensor over its declared field.
    pub fn content_hash(&self) -> Result<String> {
        Ok(match self.field {
            FieldTag::Rational => tensor_hash(&self.to_tensor(&Rationals)?),
            FieldTag::Prime(p) => tensor_hash(&self.to_tensor(&crate::field::PrimeField::new(p)?)?),
        })
    }
}
