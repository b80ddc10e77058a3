use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{format_scalar, parse_scalar, read_json, to_field, write_json};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::zoo::AlgebraTable;

/// On-disk multiplication table: `products[i][j]` is `pᵢ pⱼ` in basis
/// coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub labels: Vec<String>,
    pub products: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<usize>,
}

impl AlgebraFile {
    pub fn from_table<K: Field>(f: &K, table: &AlgebraTable<K>) -> Self {
        let m = table.dim();
        let products = (0..m)
            .map(|i| {
                (0..m)
                    .map(|j| table.product(i, j).iter().map(|x| Value::String(format_scalar(f, x))).collect())
                    .collect()
            })
            .collect();
        AlgebraFile { labels: table.labels().to_vec(), products, unit: table.unit() }
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_json(path)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn to_table<K: Field>(&self, f: &K) -> Result<AlgebraTable<K>> {
        let products = self
            .products
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|x| to_field(f, &parse_scalar(x)?)).collect()).collect())
            .collect::<Result<_>>()?;
        AlgebraTable::new(f, self.labels.clone(), products, self.unit)
    }
}
