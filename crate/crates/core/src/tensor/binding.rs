use super::{Factor, Tensor3};
use crate::error::{Error, Result};
use crate::field::Field;

/// Rewrites a binding tensor as a bilinear map `C × C → C`:
/// `T̃(c₁, c₂) = T(T(β₀)⁻¹ c₁, T(α₀)⁻¹ c₂)`, where `T(β₀): A* → C` and
/// `T(α₀): B* → C`. The result is isomorphic to `T`. When `T` satisfies
/// the A-Strassen equations it is symmetric in its first two factors.
pub fn symmetrize_binding<K: Field>(t: &Tensor3<K>, alpha0: &[K::Elem], beta0: &[K::Elem]) -> Result<Tensor3<K>> {
    if t.cubic_dim().is_none() {
        return Err(Error::DimensionMismatch(format!("binding tensor must be cubic, got {:?}", t.dims())));
    }
    let on_b = t.contract(Factor::B, beta0)?;
    let on_a = t.contract(Factor::A, alpha0)?;
    let p = on_b.inverse().map_err(|_| Error::Singular("T(β₀) is not invertible".into()))?;
    let q = on_a.inverse().map_err(|_| Error::Singular("T(α₀) is not invertible".into()))?;
    t.mode_product(Factor::A, &p)?.mode_product(Factor::B, &q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::random::{random_vector, rng_from_seed};
    use crate::zoo;

    #[test]
    fn unit_tensor_stays_symmetric() {
        let q = Rationals;
        let t = zoo::unit_tensor(&q, 4);
        let ones = vec![q.one(); 4];
        let s = symmetrize_binding(&t, &ones, &ones).unwrap();
        assert!(s.is_fully_symmetric());
        assert_eq!(s, t);
    }

    #[test]
    fn commutative_algebras_become_symmetric() {
        let f = PrimeField::default();
        let mut rng = rng_from_seed(17);
        for t in [zoo::big_cw(&f, 2), zoo::big_cw(&f, 3), zoo::truncated_poly(&f, 4).structure_tensor()] {
            let m = t.cubic_dim().unwrap();
            let a0 = random_vector(&f, m, &mut rng);
            let b0 = random_vector(&f, m, &mut rng);
            let s = symmetrize_binding(&t, &a0, &b0).unwrap();
            assert!(s.is_symmetric_in(Factor::A, Factor::B));
            assert_eq!(s.conciseness(), t.conciseness());
        }
    }

    #[test]
    fn random_tensor_is_not_symmetric() {
        let f = PrimeField::default();
        let mut rng = rng_from_seed(3);
        let t = Tensor3::new(&f, [3, 3, 3], random_vector(&f, 27, &mut rng)).unwrap();
        let a0 = random_vector(&f, 3, &mut rng);
        let b0 = random_vector(&f, 3, &mut rng);
        let s = symmetrize_binding(&t, &a0, &b0).unwrap();
        assert!(!s.is_symmetric_in(Factor::A, Factor::B));
    }

    #[test]
    fn singular_witness_is_rejected() {
        let q = Rationals;
        let t = zoo::unit_tensor(&q, 3);
        let bad = vec![q.one(), q.one(), q.zero()];
        let ones = vec![q.one(); 3];
        assert!(matches!(symmetrize_binding(&t, &bad, &ones), Err(Error::Singular(_))));
        assert!(symmetrize_binding(&zoo::matmul(&q, 1, 2, 3), &ones, &ones).is_err());
    }
}
