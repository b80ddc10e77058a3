use serde_json::json;

use super::{action_matrix, side_by_side, Obstruction, ObstructionName, Verdict};
use crate::field::Field;
use crate::linalg::{LinMap, Subspace};
use crate::tensor::{Factor, Tensor3};

/// Reason the minimal 111 tests cannot run, if any.
pub(crate) fn concise_cubic<K: Field>(t: &Tensor3<K>) -> std::result::Result<usize, String> {
    let m = t.cubic_dim().ok_or_else(|| format!("dims {:?} are not cubic", t.dims()))?;
    let c = t.conciseness();
    if !c.concise {
        return Err(format!("not concise: slice space dims {:?}", c.slice_dims));
    }
    Ok(m)
}

/// All `(X, Y, Z) ∈ End(A)×End(B)×End(C)` with `X.T = Y.T = Z.T`, as a
/// subspace of `K^{a²+b²+c²}` with coordinates `(vec X, vec Y, vec Z)`.
pub(crate) fn compatible_triples<K: Field>(t: &Tensor3<K>) -> Subspace<K> {
    let f = t.field();
    let la = action_matrix(t, Factor::A);
    let lb = action_matrix(t, Factor::B);
    let lc = action_matrix(t, Factor::C);
    let n = la.nrows();
    let (da, db, dc) = (la.ncols(), lb.ncols(), lc.ncols());
    let system = LinMap::from_fn(f, 2 * n, da + db + dc, |r, col| {
        let (row, upper) = if r < n { (r, true) } else { (r - n, false) };
        match (upper, col) {
            (true, c) if c < da => la.get(row, c).clone(),
            (true, c) if c < da + db => f.neg(lb.get(row, c - da)),
            (false, c) if (da..da + db).contains(&c) => lb.get(row, c - da).clone(),
            (false, c) if c >= da + db => f.neg(lc.get(row, c - da - db)),
            _ => f.zero(),
        }
    });
    system.kernel_basis().with_label("compatible triples")
}

/// Dimension of `(T(A*)⊗A) ∩ (T(B*)⊗B) ∩ (T(C*)⊗C)`: the image of the
/// compatible triples under `(X, Y, Z) ↦ X.T`.
pub(crate) fn triple_intersection_dim<K: Field>(t: &Tensor3<K>, triples: &Subspace<K>) -> usize {
    let la = action_matrix(t, Factor::A);
    let da = la.ncols();
    let images = triples.basis().iter().map(|v| la.apply(&v[..da]).expect("sized")).collect();
    Subspace::new(t.field(), la.nrows(), images, "triple intersection").expect("sized").dim()
}

/// The 111 test for minimal border rank: PASS iff the triple intersection
/// has dimension at least `m`. Needs a concise `m×m×m` tensor.
pub fn test_111_minimal<K: Field>(t: &Tensor3<K>) -> Obstruction {
    let tag = t.field().tag();
    let m = match concise_cubic(t) {
        Ok(m) => m,
        Err(reason) => return Obstruction::inapplicable(ObstructionName::T111Triple, tag, 0, reason),
    };
    let triples = compatible_triples(t);
    let dim = triple_intersection_dim(t, &triples);
    let pass = dim >= m;
    Obstruction::new(ObstructionName::T111Triple, if pass { Verdict::Pass } else { Verdict::Fail }, tag, 0)
        .with_payload(dim)
        .with_lower_bound(if pass { m } else { m + 1 })
        .with_witness(json!({ "intersection_dim": dim, "required": m }))
}

/// The two-factor 111 tests: FAIL iff for some pair of factors the span
/// `⟨T(X*)⊗X, T(Y*)⊗Y⟩` has dimension at least `2m² − m + 1`.
pub fn test_111_twofactor<K: Field>(t: &Tensor3<K>) -> Obstruction {
    let f = t.field();
    let tag = f.tag();
    let m = match concise_cubic(t) {
        Ok(m) => m,
        Err(reason) => return Obstruction::inapplicable(ObstructionName::T111TwoFactor, tag, 0, reason),
    };
    let maps = Factor::ALL.map(|x| action_matrix(t, x));
    let mut spans = serde_json::Map::new();
    let mut intersections = serde_json::Map::new();
    let mut worst = 0;
    for (x, y) in [(Factor::A, Factor::B), (Factor::A, Factor::C), (Factor::B, Factor::C)] {
        let (mx, my) = (&maps[x.index()], &maps[y.index()]);
        let span = side_by_side(f, &[mx, my]).rank();
        let key = format!("{x}{y}");
        spans.insert(key.clone(), json!(span));
        intersections.insert(key, json!(mx.rank() + my.rank() - span));
        worst = worst.max(span);
    }
    let threshold = 2 * m * m - m + 1;
    let pass = worst < threshold;
    Obstruction::new(ObstructionName::T111TwoFactor, if pass { Verdict::Pass } else { Verdict::Fail }, tag, 0)
        .with_payload(worst)
        .with_lower_bound(if pass { m } else { m + 1 })
        .with_witness(json!({ "span_dims": spans, "intersection_dims": intersections, "fail_threshold": threshold }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::random::{random_vector, rng_from_seed};
    use crate::zoo;

    #[test]
    fn unit_tensor_intersection_is_diagonal() {
        let q = Rationals;
        for m in 1..=4 {
            let o = test_111_minimal(&zoo::unit_tensor(&q, m));
            assert!(o.passed());
            assert_eq!(o.payload, Some(m as u64));
            let two = test_111_twofactor(&zoo::unit_tensor(&q, m));
            assert!(two.passed());
            assert_eq!(two.payload, Some((2 * m * m - m) as u64));
        }
    }

    #[test]
    fn cw_passes_and_matmul_fails() {
        let f = PrimeField::default();
        assert!(test_111_minimal(&zoo::big_cw(&f, 2)).passed());
        assert!(test_111_twofactor(&zoo::big_cw(&f, 4)).passed());
        // g_AB of M⟨n⟩ contains gl(V) acting on the shared index, so the
        // two-factor test passes with span exactly 2m² − m; the triple test
        // sees only scalars.
        let two = test_111_twofactor(&zoo::matmul(&f, 2, 2, 2));
        assert!(two.passed());
        assert_eq!(two.payload, Some(28));
        let triple = test_111_minimal(&zoo::matmul(&f, 2, 2, 2));
        assert!(triple.failed());
        assert_eq!(triple.payload, Some(1));
    }

    #[test]
    fn random_tensor_fails() {
        let f = PrimeField::default();
        let mut rng = rng_from_seed(21);
        let t = Tensor3::new(&f, [5, 5, 5], random_vector(&f, 125, &mut rng)).unwrap();
        let o = test_111_minimal(&t);
        assert!(o.failed());
        assert!(o.payload.unwrap() < 5);
        assert_eq!(o.lower_bound, Some(6));
    }

    #[test]
    fn non_concise_or_non_cubic_is_inapplicable() {
        let q = Rationals;
        let padded = Tensor3::from_i64_entries(&q, [3, 3, 3], &[([0, 0, 0], 1), ([1, 1, 1], 1)]).unwrap();
        assert_eq!(test_111_minimal(&padded).verdict, Verdict::Inapplicable);
        assert_eq!(test_111_twofactor(&zoo::matmul(&q, 1, 2, 2)).verdict, Verdict::Inapplicable);
    }

    #[test]
    fn intersection_agrees_with_subspace_intersection() {
        let f = PrimeField::new(1_000_003).unwrap();
        let mut rng = rng_from_seed(3);
        for t in [
            zoo::big_cw(&f, 2),
            zoo::small_cw(&f, 3),
            Tensor3::new(&f, [3, 3, 3], random_vector(&f, 27, &mut rng)).unwrap(),
        ] {
            let images = Factor::ALL.map(|x| {
                let m = action_matrix(&t, x);
                Subspace::new(&f, m.nrows(), m.transpose().to_rows(), x.to_string()).unwrap()
            });
            let direct = Subspace::intersect(&[&images[0], &images[1], &images[2]]).unwrap().dim();
            assert_eq!(triple_intersection_dim(&t, &compatible_triples(&t)), direct);
        }
    }
}
