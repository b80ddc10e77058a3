use serde_json::json;

use super::t111::{compatible_triples, concise_cubic};
use super::{Obstruction, ObstructionName, TripleEndo, Verdict};
use crate::field::Field;
use crate::linalg::{LinMap, Subspace};
use crate::tensor::{Factor, Tensor3};

/// The 111-algebra of a concise tensor together with the structural checks
/// run on it.
#[derive(Debug, Clone)]
pub struct Algebra111<K: Field> {
    pub basis: Vec<TripleEndo<K>>,
    pub contains_identity: bool,
    pub closed: bool,
    pub commutative: bool,
    /// Injectivity of the projections to `End(A)`, `End(B)`, `End(C)`.
    pub injective: [bool; 3],
}

impl<K: Field> Algebra111<K> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Unital, closed, commutative and injectively projecting.
    pub fn structure_ok(&self) -> bool {
        self.contains_identity && self.closed && self.commutative && self.injective.iter().all(|&b| b)
    }
}

fn split<K: Field>(t: &Tensor3<K>, v: &[K::Elem]) -> TripleEndo<K> {
    let f = t.field();
    let [a, b, c] = t.dims();
    let (x, rest) = v.split_at(a * a);
    let (y, z) = rest.split_at(b * b);
    TripleEndo {
        x: LinMap::new(f, a, a, x.to_vec()).expect("sized"),
        y: LinMap::new(f, b, b, y.to_vec()).expect("sized"),
        z: LinMap::new(f, c, c, z.to_vec()).expect("sized"),
    }
}

fn is_compatible<K: Field>(t: &Tensor3<K>, e: &TripleEndo<K>) -> bool {
    let xt = t.mode_product(Factor::A, &e.x).expect("square");
    xt == t.mode_product(Factor::B, &e.y).expect("square") && xt == t.mode_product(Factor::C, &e.z).expect("square")
}

/// Solves `X.T = Y.T = Z.T` and checks the algebra structure of the
/// solution space. Abundance passes iff the dimension is at least `m`.
pub fn compute_111_algebra<K: Field>(t: &Tensor3<K>) -> (Option<Algebra111<K>>, Obstruction) {
    let f = t.field();
    let tag = f.tag();
    let m = match concise_cubic(t) {
        Ok(m) => m,
        Err(reason) => return (None, Obstruction::inapplicable(ObstructionName::Alg111Abundance, tag, 0, reason)),
    };
    let space = compatible_triples(t);
    let basis: Vec<_> = space.basis().iter().map(|v| split(t, v)).collect();

    let id = LinMap::identity(f, m);
    let mut id_vec = Vec::with_capacity(3 * m * m);
    for _ in 0..3 {
        id_vec.extend_from_slice(id.entries());
    }
    let contains_identity = space.contains(&id_vec).unwrap_or(false);

    let mut closed = true;
    let mut commutative = true;
    for (i, p) in basis.iter().enumerate() {
        for q in &basis[i..] {
            let prod = |u: &LinMap<K>, v: &LinMap<K>| u.mul(v).expect("square");
            let pq = TripleEndo { x: prod(&p.x, &q.x), y: prod(&p.y, &q.y), z: prod(&p.z, &q.z) };
            closed &= is_compatible(t, &pq);
            commutative &= pq.x == prod(&q.x, &p.x) && pq.y == prod(&q.y, &p.y) && pq.z == prod(&q.z, &p.z);
        }
    }
    let projection_rank = |pick: fn(&TripleEndo<K>) -> &LinMap<K>| {
        let rows = basis.iter().map(|e| pick(e).entries().to_vec()).collect();
        Subspace::new(f, m * m, rows, "projection").expect("sized").dim()
    };
    let injective = [
        projection_rank(|e| &e.x) == basis.len(),
        projection_rank(|e| &e.y) == basis.len(),
        projection_rank(|e| &e.z) == basis.len(),
    ];
    let alg = Algebra111 { basis, contains_identity, closed, commutative, injective };
    let dim = alg.dim();
    let pass = dim >= m;
    let o = Obstruction::new(ObstructionName::Alg111Abundance, if pass { Verdict::Pass } else { Verdict::Fail }, tag, 0)
        .with_payload(dim)
        .with_lower_bound(if pass { m } else { m + 1 })
        .with_witness(json!({
            "dim": dim,
            "required": m,
            "contains_identity": alg.contains_identity,
            "closed": alg.closed,
            "commutative": alg.commutative,
            "injective": alg.injective,
        }));
    (Some(alg), o)
}
