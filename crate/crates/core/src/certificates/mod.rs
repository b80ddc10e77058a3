//! Equation-based border-rank obstructions and the battery that runs them.
//!
//! Over a prime field every FAIL verdict and every numeric lower bound is
//! also valid over ℚ for the integer lift of the tensor: ranks can only
//! drop modulo `p`, and a residual that is nonzero modulo `p` is nonzero.
//! PASS verdicts modulo `p` hold with high probability only.

mod algebra111;
mod battery;
mod end_closed;
mod strassen;
mod symmetry;
mod t111;

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::field::{Field, FieldTag};
use crate::linalg::{hstack, LinMap};
use crate::tensor::{Factor, Tensor3};

pub use algebra111::{compute_111_algebra, Algebra111};
pub use battery::{minimal_br_battery, recheck_failures, BatteryConfig, BatteryReport, GenericityRecord, Method};
pub use end_closed::end_closed_test;
pub use strassen::{commutator_bound, strassen_test};
pub use symmetry::{symmetry_lie_dims, SymmetryDims};
pub use t111::{test_111_minimal, test_111_twofactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ObstructionName {
    Strassen,
    Commutator,
    EndClosed,
    #[serde(rename = "T111_TRIPLE")]
    T111Triple,
    #[serde(rename = "T111_TWOFACTOR")]
    T111TwoFactor,
    #[serde(rename = "SYMLIE")]
    SymLie,
    Koszul,
    #[serde(rename = "ALG111_ABUNDANCE")]
    Alg111Abundance,
}

impl ObstructionName {
    /// Obstructions that test exactly for border rank `m` on `m×m×m` tensors.
    pub fn is_minimal_test(self) -> bool {
        !matches!(self, ObstructionName::Commutator | ObstructionName::Koszul)
    }
}

impl fmt::Display for ObstructionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        f.write_str(s.as_str().expect("string"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "INAPPLICABLE",
        })
    }
}

/// Outcome of one obstruction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Obstruction {
    pub name: ObstructionName,
    pub verdict: Verdict,
    /// Numeric result: a bound or a dimension, depending on the method.
    pub payload: Option<u64>,
    /// Border-rank lower bound certified by this record.
    pub lower_bound: Option<u64>,
    pub witness: Value,
    pub field: FieldTag,
    pub seed: u64,
    pub wall_time_ms: u64,
    /// Verdict recomputed over ℚ, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub exact_recheck: Option<Verdict>,
}

impl Obstruction {
    pub fn new(name: ObstructionName, verdict: Verdict, field: FieldTag, seed: u64) -> Self {
        Obstruction {
            name,
            verdict,
            payload: None,
            lower_bound: None,
            witness: Value::Null,
            field,
            seed,
            wall_time_ms: 0,
            exact_recheck: None,
        }
    }

    pub fn inapplicable(name: ObstructionName, field: FieldTag, seed: u64, reason: impl Into<String>) -> Self {
        Obstruction::new(name, Verdict::Inapplicable, field, seed).with_witness(serde_json::json!({ "reason": reason.into() }))
    }

    pub fn with_payload(mut self, payload: usize) -> Self {
        self.payload = Some(payload as u64);
        self
    }

    pub fn with_lower_bound(mut self, bound: usize) -> Self {
        self.lower_bound = Some(bound as u64);
        self
    }

    pub fn with_witness(mut self, witness: Value) -> Self {
        self.witness = witness;
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// A compatible triple `(X, Y, Z)` with `X.T = Y.T = Z.T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleEndo<K: Field> {
    pub x: LinMap<K>,
    pub y: LinMap<K>,
    pub z: LinMap<K>,
}

/// Matrix of `X ↦ X.T` from `End(F)` to `A⊗B⊗C`, where `X.T` acts on the
/// factor `F` (`(X.T)^{ijk} = Σ_s X_is T^{sjk}` for `F = A`). Column
/// `s·d + t` is the image of the matrix unit `E_st`; rows are tensor offsets.
pub fn action_matrix<K: Field>(t: &Tensor3<K>, factor: Factor) -> LinMap<K> {
    let [a, b, c] = t.dims();
    let d = t.dim(factor);
    let mut m = LinMap::zeros(t.field(), a * b * c, d * d);
    for ([i, j, k], v) in t.nonzero_entries() {
        let src = [i, j, k][factor.index()];
        for s in 0..d {
            let mut idx = [i, j, k];
            idx[factor.index()] = s;
            let row = (idx[0] * b + idx[1]) * c + idx[2];
            m.set(row, s * d + src, v.clone());
        }
    }
    m
}

/// Column blocks `[M_1 | … | M_n]`.
pub(crate) fn side_by_side<K: Field>(field: &K, blocks: &[&LinMap<K>]) -> LinMap<K> {
    hstack(field, blocks).expect("blocks share row count")
}

/// Entries of a vector as decimal strings for witnesses.
pub(crate) fn format_vector<K: Field>(field: &K, v: &[K::Elem]) -> Vec<String> {
    v.iter().map(|x| field.format(x)).collect()
}
