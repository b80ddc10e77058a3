use super::{Factor, Tensor3};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinMap;

/// Kronecker product `T ⊠ T'`, pairing index `i` of `T` with `i'` of `T'`
/// as `i * a' + i'` (likewise on B and C).
pub fn kronecker<K: Field>(t: &Tensor3<K>, u: &Tensor3<K>) -> Tensor3<K> {
    let f = t.field();
    let [a, b, c] = t.dims();
    let [a2, b2, c2] = u.dims();
    let mut out = Tensor3::zeros(f, [a * a2, b * b2, c * c2]);
    let right: Vec<_> = u.nonzero_entries().collect();
    for ([i, j, k], v) in t.nonzero_entries() {
        for ([i2, j2, k2], w) in &right {
            out.set(i * a2 + i2, j * b2 + j2, k * c2 + k2, f.mul(v, w));
        }
    }
    out
}

/// `T^{⊠n}`; `n = 0` gives the 1x1x1 unit.
pub fn kronecker_power<K: Field>(t: &Tensor3<K>, n: usize) -> Tensor3<K> {
    let f = t.field();
    let mut acc = Tensor3::new(f, [1, 1, 1], vec![f.one()]).expect("sized");
    for _ in 0..n {
        acc = kronecker(&acc, t);
    }
    acc
}

/// Block direct sum `T ⊕ T'` in `(A⊕A')⊗(B⊕B')⊗(C⊕C')`.
pub fn direct_sum<K: Field>(t: &Tensor3<K>, u: &Tensor3<K>) -> Tensor3<K> {
    let [a, b, c] = t.dims();
    let [a2, b2, c2] = u.dims();
    let mut out = Tensor3::zeros(t.field(), [a + a2, b + b2, c + c2]);
    for ([i, j, k], v) in t.nonzero_entries() {
        out.set(i, j, k, v.clone());
    }
    for ([i, j, k], v) in u.nonzero_entries() {
        out.set(a + i, b + j, c + k, v.clone());
    }
    out
}

/// `(g, h, k) · T` with `(g·T)^{ijk} = Σ g_is h_jt k_ku T^{stu}`.
/// Every matrix must be square, invertible and match its factor dimension.
pub fn apply_gl<K: Field>(t: &Tensor3<K>, g: &LinMap<K>, h: &LinMap<K>, k: &LinMap<K>) -> Result<Tensor3<K>> {
    for (m, factor) in [(g, Factor::A), (h, Factor::B), (k, Factor::C)] {
        let d = t.dim(factor);
        if m.nrows() != d || m.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix acting on factor {factor} of dim {d}",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.rank() != d {
            return Err(Error::Singular(format!("matrix acting on factor {factor}")));
        }
    }
    t.mode_product(Factor::A, g)?.mode_product(Factor::B, h)?.mode_product(Factor::C, k)
}

/// Reorders the factors: slot `s` of the result is factor `perm[s]` of `t`.
pub fn permute_factors<K: Field>(t: &Tensor3<K>, perm: [Factor; 3]) -> Result<Tensor3<K>> {
    let mut seen = [false; 3];
    for p in perm {
        if std::mem::replace(&mut seen[p.index()], true) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation")));
        }
    }
    let old = t.dims();
    let dims = perm.map(|p| old[p.index()]);
    let mut out = Tensor3::zeros(t.field(), dims);
    for (idx, v) in t.nonzero_entries() {
        let n = perm.map(|p| idx[p.index()]);
        out.set(n[0], n[1], n[2], v.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::random::{random_vector, rng_from_seed};
    use crate::zoo;
    use proptest::prelude::*;

    fn random_tensor(f: &PrimeField, dims: [usize; 3], seed: u64) -> Tensor3<PrimeField> {
        let mut rng = rng_from_seed(seed);
        Tensor3::new(f, dims, random_vector(f, dims.iter().product(), &mut rng)).unwrap()
    }

    fn random_invertible(f: &PrimeField, n: usize, seed: u64) -> LinMap<PrimeField> {
        let mut rng = rng_from_seed(seed);
        loop {
            let m = LinMap::new(f, n, n, random_vector(f, n * n, &mut rng)).unwrap();
            if m.rank() == n {
                return m;
            }
        }
    }

    #[test]
    fn kronecker_of_matmul_is_matmul_after_regrouping() {
        let q = Rationals;
        let m2 = zoo::matmul(&q, 2, 2, 2);
        let m4 = zoo::matmul(&q, 4, 4, 4);
        let kr = kronecker(&m2, &m2);
        // Pair index (i*2+j)*4 + (i'*2+j') with (2i+i')*4 + (2j+j').
        let regroup = |x: usize| {
            let (p, s) = (x / 4, x % 4);
            let (i, j, i2, j2) = (p / 2, p % 2, s / 2, s % 2);
            (2 * i + i2) * 4 + (2 * j + j2)
        };
        let perm: Vec<usize> = (0..16).map(regroup).collect();
        let p = LinMap::permutation(&q, &perm).unwrap();
        assert_eq!(apply_gl(&kr, &p, &p, &p).unwrap(), m4);
    }

    #[test]
    fn kronecker_dims_and_power() {
        let q = Rationals;
        let w = zoo::w_state(&q);
        let u3 = zoo::unit_tensor(&q, 3);
        assert_eq!(kronecker(&w, &u3).dims(), [6, 6, 6]);
        assert_eq!(kronecker(&w, &u3).nnz(), 9);
        assert_eq!(kronecker_power(&w, 3).dims(), [8, 8, 8]);
        assert_eq!(kronecker_power(&w, 0).nnz(), 1);
        assert_eq!(kronecker_power(&u3, 2), zoo::unit_tensor(&q, 9));
    }

    #[test]
    fn direct_sum_of_units_and_zero_block() {
        let q = Rationals;
        let u = direct_sum(&zoo::unit_tensor(&q, 2), &zoo::unit_tensor(&q, 3));
        assert_eq!(u, zoo::unit_tensor(&q, 5));
        let z = Tensor3::zeros(&q, [0, 0, 0]);
        assert_eq!(direct_sum(&zoo::w_state(&q), &z), zoo::w_state(&q));
    }

    #[test]
    fn apply_gl_rejects_bad_matrices() {
        let q = Rationals;
        let t = zoo::unit_tensor(&q, 2);
        let id = LinMap::identity(&q, 2);
        let sing = LinMap::from_i64(&q, &[&[1, 1], &[1, 1]]).unwrap();
        assert!(matches!(apply_gl(&t, &sing, &id, &id), Err(Error::Singular(_))));
        assert!(matches!(
            apply_gl(&t, &LinMap::identity(&q, 3), &id, &id),
            Err(Error::DimensionMismatch(_))
        ));
        assert_eq!(apply_gl(&t, &id, &id, &id).unwrap(), t);
    }

    #[test]
    fn permutation_validation() {
        let q = Rationals;
        let t = zoo::matmul(&q, 1, 2, 3);
        assert!(permute_factors(&t, [Factor::A, Factor::A, Factor::C]).is_err());
        let s = permute_factors(&t, [Factor::C, Factor::A, Factor::B]).unwrap();
        assert_eq!(s.dims(), [t.dims()[2], t.dims()[0], t.dims()[1]]);
        for ([i, j, k], v) in t.nonzero_entries() {
            assert_eq!(s.get(k, i, j), v);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn gl_action_composes(seed in 0u64..1_000_000) {
            let f = PrimeField::default();
            let t = random_tensor(&f, [2, 3, 2], seed);
            let g1 = random_invertible(&f, 2, seed + 1);
            let h1 = random_invertible(&f, 3, seed + 2);
            let k1 = random_invertible(&f, 2, seed + 3);
            let g2 = random_invertible(&f, 2, seed + 4);
            let h2 = random_invertible(&f, 3, seed + 5);
            let k2 = random_invertible(&f, 2, seed + 6);
            let step = apply_gl(&apply_gl(&t, &g1, &h1, &k1).unwrap(), &g2, &h2, &k2).unwrap();
            let once = apply_gl(
                &t,
                &g2.mul(&g1).unwrap(),
                &h2.mul(&h1).unwrap(),
                &k2.mul(&k1).unwrap(),
            ).unwrap();
            prop_assert_eq!(step, once);
        }

        #[test]
        fn gl_action_preserves_slice_ranks(seed in 0u64..1_000_000) {
            let f = PrimeField::default();
            let t = kronecker(&random_tensor(&f, [1, 3, 1], seed), &random_tensor(&f, [3, 1, 3], seed + 7));
            let g = random_invertible(&f, 3, seed + 11);
            let s = apply_gl(&t, &g, &random_invertible(&f, 3, seed + 12), &random_invertible(&f, 3, seed + 13)).unwrap();
            prop_assert_eq!(s.conciseness(), t.conciseness());
            for factor in Factor::ALL {
                prop_assert_eq!(s.flattening(factor).rank(), t.flattening(factor).rank());
            }
        }

        #[test]
        fn permutations_compose_and_invert(seed in 0u64..1_000_000, p in 0usize..6) {
            let f = PrimeField::default();
            let t = random_tensor(&f, [2, 3, 4], seed);
            let perms = [
                [Factor::A, Factor::B, Factor::C],
                [Factor::A, Factor::C, Factor::B],
                [Factor::B, Factor::A, Factor::C],
                [Factor::B, Factor::C, Factor::A],
                [Factor::C, Factor::A, Factor::B],
                [Factor::C, Factor::B, Factor::A],
            ];
            let perm = perms[p];
            let mut inv = [Factor::A; 3];
            for (s, q) in perm.iter().enumerate() {
                inv[q.index()] = Factor::ALL[s];
            }
            let back = permute_factors(&permute_factors(&t, perm).unwrap(), inv).unwrap();
            prop_assert_eq!(back, t);
        }

        #[test]
        fn kronecker_multiplies_flattening_ranks(seed in 0u64..1_000_000) {
            let f = PrimeField::default();
            let t = random_tensor(&f, [2, 2, 3], seed);
            let u = zoo::w_state(&f);
            let k = kronecker(&t, &u);
            for factor in Factor::ALL {
                prop_assert_eq!(
                    k.flattening(factor).rank(),
                    t.flattening(factor).rank() * u.flattening(factor).rank()
                );
            }
        }
    }
}
