use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{action_matrix, side_by_side, Obstruction, ObstructionName, Verdict};
use crate::field::Field;
use crate::tensor::{Factor, Tensor3};

/// Dimensions of `ĝ_T ⊂ gl(A)⊕gl(B)⊕gl(C)` and of the two-factor
/// annihilators `g_AB`, `g_AC`, `g_BC`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymmetryDims {
    pub g_hat: usize,
    pub g_ab: usize,
    pub g_ac: usize,
    pub g_bc: usize,
}

impl SymmetryDims {
    pub fn as_tuple(&self) -> (usize, usize, usize, usize) {
        (self.g_hat, self.g_ab, self.g_ac, self.g_bc)
    }
}

fn kernel_dim<K: Field>(t: &Tensor3<K>, factors: &[Factor]) -> usize {
    let maps: Vec<_> = factors.iter().map(|&x| action_matrix(t, x)).collect();
    let refs: Vec<_> = maps.iter().collect();
    let m = side_by_side(t.field(), &refs);
    m.ncols() - m.rank()
}

/// Kernel dimensions of `(X, Y, Z) ↦ X.T + Y.T + Z.T` and of its
/// two-factor restrictions. On an `m×m×m` tensor the obstruction passes iff
/// `dim ĝ_T ≥ 2m` and each pairwise dimension is at least `m`.
pub fn symmetry_lie_dims<K: Field>(t: &Tensor3<K>) -> (SymmetryDims, Obstruction) {
    let dims = SymmetryDims {
        g_hat: kernel_dim(t, &Factor::ALL),
        g_ab: kernel_dim(t, &[Factor::A, Factor::B]),
        g_ac: kernel_dim(t, &[Factor::A, Factor::C]),
        g_bc: kernel_dim(t, &[Factor::B, Factor::C]),
    };
    let tag = t.field().tag();
    let Some(m) = t.cubic_dim() else {
        let o = Obstruction::inapplicable(ObstructionName::SymLie, tag, 0, "dims are not cubic");
        return (dims, o);
    };
    let pass = dims.g_hat >= 2 * m && dims.g_ab >= m && dims.g_ac >= m && dims.g_bc >= m;
    let mut o = Obstruction::new(ObstructionName::SymLie, if pass { Verdict::Pass } else { Verdict::Fail }, tag, 0)
        .with_payload(dims.g_hat)
        .with_witness(json!({
            "g_hat": dims.g_hat,
            "g_ab": dims.g_ab,
            "g_ac": dims.g_ac,
            "g_bc": dims.g_bc,
            "required": [2 * m, m],
        }));
    if t.conciseness().concise {
        o = o.with_lower_bound(if pass { m } else { m + 1 });
    }
    (dims, o)
}
