//! Koszul flattenings `T^{∧p}_A : Λ^p A ⊗ B* → Λ^{p+1} A ⊗ C`.
//!
//! Wedge signs follow sorted insertion: `a_S ∧ a_i = (−1)^{#{s∈S : s>i}} a_{S∪{i}}`,
//! i.e. `a_i` is moved leftwards past every larger index of `S`.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{Field, PrimeField};
use crate::linalg::LinMap;
use crate::random::{derive_seed_index, random_vector, rng_from_seed};
use crate::tensor::{permute_factors, Factor, Tensor3};

/// The `p`-subsets of `{0, …, n-1}` in lexicographic order.
#[derive(Debug, Clone)]
pub struct WedgeBasis {
    n: usize,
    p: usize,
    subsets: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
}

impl WedgeBasis {
    pub fn new(n: usize, p: usize) -> Self {
        let mut subsets = Vec::new();
        let mut cur = Vec::with_capacity(p);
        fn rec(start: usize, n: usize, p: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == p {
                out.push(cur.clone());
                return;
            }
            for s in start..n {
                cur.push(s);
                rec(s + 1, n, p, cur, out);
                cur.pop();
            }
        }
        rec(0, n, p, &mut cur, &mut subsets);
        let index = subsets.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        WedgeBasis { n, p, subsets, index }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, idx: usize) -> &[usize] {
        &self.subsets[idx]
    }

    pub fn position(&self, subset: &[usize]) -> Option<usize> {
        self.index.get(subset).copied()
    }

    /// `a_S ∧ a_i` as `(sign, sorted S∪{i})`, or `None` when `i ∈ S`.
    pub fn insert(subset: &[usize], i: usize) -> Option<(i64, Vec<usize>)> {
        if subset.contains(&i) {
            return None;
        }
        let larger = subset.iter().filter(|&&s| s > i).count();
        let mut out = subset.to_vec();
        out.insert(subset.len() - larger, i);
        Some((if larger % 2 == 0 { 1 } else { -1 }, out))
    }

    /// Matrix of `ω ↦ ω ∧ v` from `Λ^p` to `Λ^{p+1}`.
    pub fn wedge_matrix<K: Field>(&self, field: &K, v: &[K::Elem]) -> Result<LinMap<K>> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch(format!("vector of length {} in dimension {}", v.len(), self.n)));
        }
        let up = WedgeBasis::new(self.n, self.p + 1);
        let mut m = LinMap::zeros(field, up.len(), self.len());
        for (col, s) in self.subsets.iter().enumerate() {
            for (i, vi) in v.iter().enumerate() {
                if let Some((sign, t)) = WedgeBasis::insert(s, i) {
                    let row = up.position(&t).expect("sorted subset");
                    m.set(row, col, field.mul(&field.from_i64(sign), vi));
                }
            }
        }
        Ok(m)
    }
}

/// Binomial coefficient, saturating on overflow.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// `T` with its A factor pushed through a seeded random `target_dim × a`
/// matrix, i.e. restricted to a random `target_dim`-dimensional quotient.
pub fn restrict_a<K: Field>(t: &Tensor3<K>, target_dim: usize, seed: u64) -> Result<Tensor3<K>> {
    let a = t.dim(Factor::A);
    if target_dim > a {
        return Err(Error::InvalidArgument(format!("cannot restrict A of dim {a} to {target_dim}")));
    }
    let mut rng = rng_from_seed(seed);
    let r = LinMap::new(t.field(), target_dim, a, random_vector(t.field(), target_dim * a, &mut rng))?;
    t.mode_product(Factor::A, &r)
}

/// The matrix of `T^{∧p}_A`. Rows are indexed `(S', k) ↦ S'·c + k` over
/// `(p+1)`-subsets, columns `(S, j) ↦ S·b + j` over `p`-subsets.
/// Requires `a = 2p+1` for `p ≥ 1`; for `p = 0` any `a` is accepted and the
/// map is the flattening `B* → A⊗C`.
pub fn build_koszul<K: Field>(t: &Tensor3<K>, p: usize) -> Result<LinMap<K>> {
    let [a, b, c] = t.dims();
    if p > 0 && a != 2 * p + 1 {
        return Err(Error::DimensionMismatch(format!("p = {p} needs A of dim {}, got {a}", 2 * p + 1)));
    }
    let f = t.field();
    let lower = WedgeBasis::new(a, p);
    let upper = WedgeBasis::new(a, p + 1);
    let mut m = LinMap::zeros(f, upper.len() * c, lower.len() * b);
    for ([i, j, k], v) in t.nonzero_entries() {
        for (col_s, s) in lower.subsets.iter().enumerate() {
            if let Some((sign, s2)) = WedgeBasis::insert(s, i) {
                let row = upper.position(&s2).expect("sorted subset") * c + k;
                let col = col_s * b + j;
                let cur = m.get(row, col).clone();
                let add = if sign > 0 { v.clone() } else { f.neg(v) };
                m.set(row, col, f.add(&cur, &add));
            }
        }
    }
    Ok(m.with_labels(format!("Λ^{}A⊗C", p + 1), format!("Λ^{p}A⊗B*")))
}

/// Rank of `T^{∧p}_A` for a rank-one `T ∈ K^{2p+1}⊗K^2⊗K^2`, computed by
/// building the map for `e₀⊗e₀⊗e₀`. Memoized.
pub fn koszul_rank_one_constant(p: usize) -> usize {
    static CACHE: OnceLock<Mutex<HashMap<usize, usize>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(&k) = cache.lock().expect("cache lock").get(&p) {
        return k;
    }
    let f = PrimeField::default();
    let t = Tensor3::from_i64_entries(&f, [2 * p + 1, 2, 2], &[([0, 0, 0], 1)]).expect("in range");
    let k = build_koszul(&t, p).expect("a = 2p+1").rank();
    cache.lock().expect("cache lock").insert(p, k);
    k
}

/// Outcome of a Koszul flattening bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KoszulBound {
    pub p: usize,
    pub side: Factor,
    /// Best rank over the restrictions tried.
    pub rank: usize,
    /// Rank contributed by a single rank-one term.
    pub constant: usize,
    /// `⌈rank / constant⌉`, a border-rank lower bound.
    pub bound: usize,
    pub shape: (usize, usize),
    pub retries: usize,
}

fn to_side_a<K: Field>(t: &Tensor3<K>, side: Factor) -> Result<Tensor3<K>> {
    match side {
        Factor::A => Ok(t.clone()),
        Factor::B => permute_factors(t, [Factor::B, Factor::A, Factor::C]),
        Factor::C => permute_factors(t, [Factor::C, Factor::B, Factor::A]),
    }
}

/// `⌈rank(T^{∧p}) / k(p)⌉` maximised over `retries` random restrictions of
/// the chosen side to dimension `2p+1`. Retries run in parallel and each
/// uses its own seed derived from `seed`.
pub fn koszul_bound<K: Field>(t: &Tensor3<K>, p: usize, side: Factor, seed: u64, retries: usize) -> Result<KoszulBound> {
    let t = to_side_a(t, side)?;
    let a = t.dim(Factor::A);
    let constant = koszul_rank_one_constant(p);
    let finish = |rank: usize, shape: (usize, usize), retries: usize| KoszulBound {
        p,
        side,
        rank,
        constant,
        bound: rank.div_ceil(constant),
        shape,
        retries,
    };
    if p == 0 {
        let m = build_koszul(&t, 0)?;
        return Ok(finish(m.rank(), (m.nrows(), m.ncols()), 0));
    }
    let n = 2 * p + 1;
    if n > a {
        return Err(Error::InvalidArgument(format!("p = {p} needs side {side} of dim at least {n}, got {a}")));
    }
    let retries = retries.max(1);
    let results: Vec<Result<(usize, (usize, usize))>> = (0..retries)
        .into_par_iter()
        .map(|r| {
            let restricted = if n == a && r == 0 { t.clone() } else { restrict_a(&t, n, derive_seed_index(seed, r as u64))? };
            let m = build_koszul(&restricted, p)?;
            Ok((m.rank(), (m.nrows(), m.ncols())))
        })
        .collect();
    let mut best = (0, (0, 0));
    for res in results {
        let (rank, shape) = res?;
        if rank >= best.0 {
            best = (rank, shape);
        }
    }
    Ok(finish(best.0, best.1, retries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rationals;
    use crate::zoo;

    #[test]
    fn wedge_basis_counts_and_order() {
        let w = WedgeBasis::new(5, 2);
        assert_eq!(w.len(), 10);
        assert_eq!(w.subset(0), &[0, 1]);
        assert_eq!(w.subset(9), &[3, 4]);
        assert_eq!(w.position(&[1, 3]), Some(5));
        assert_eq!(WedgeBasis::new(3, 0).len(), 1);
        for (n, p) in [(7, 3), (9, 4), (4, 0)] {
            assert_eq!(WedgeBasis::new(n, p).len(), binomial(n, p));
        }
    }

    #[test]
    fn insertion_signs() {
        assert_eq!(WedgeBasis::insert(&[0, 2], 1), Some((-1, vec![0, 1, 2])));
        assert_eq!(WedgeBasis::insert(&[0, 2], 3), Some((1, vec![0, 2, 3])));
        assert_eq!(WedgeBasis::insert(&[1, 2], 0), Some((1, vec![0, 1, 2])));
        assert_eq!(WedgeBasis::insert(&[1, 2], 2), None);
    }

    #[test]
    fn wedge_maps_square_to_zero_and_anticommute() {
        let f = PrimeField::default();
        let mut rng = rng_from_seed(8);
        for (n, p) in [(3, 0), (3, 1), (5, 1), (5, 2), (7, 3)] {
            let v = random_vector(&f, n, &mut rng);
            let w = random_vector(&f, n, &mut rng);
            let lo = WedgeBasis::new(n, p);
            let hi = WedgeBasis::new(n, p + 1);
            let vv = hi.wedge_matrix(&f, &v).unwrap().mul(&lo.wedge_matrix(&f, &v).unwrap()).unwrap();
            assert!(vv.is_zero());
            let vw = hi.wedge_matrix(&f, &v).unwrap().mul(&lo.wedge_matrix(&f, &w).unwrap()).unwrap();
            let wv = hi.wedge_matrix(&f, &w).unwrap().mul(&lo.wedge_matrix(&f, &v).unwrap()).unwrap();
            assert!(vw.add(&wv).unwrap().is_zero());
        }
    }

    #[test]
    fn koszul_map_matches_wedge_blocks() {
        // For a rank-one tensor a⊗b⊗c the map is (∧a) ⊗ (c bᵀ).
        let q = Rationals;
        let a = [2, -1, 3].map(|x| q.from_i64(x));
        let b = [1, 4].map(|x| q.from_i64(x));
        let c = [5, 0, 1].map(|x| q.from_i64(x));
        let t = Tensor3::rank_one(&q, &a, &b, &c);
        let m = build_koszul(&t, 1).unwrap();
        let wedge = WedgeBasis::new(3, 1).wedge_matrix(&q, &a).unwrap();
        for r in 0..m.nrows() {
            for col in 0..m.ncols() {
                let (s2, k) = (r / 3, r % 3);
                let (s, j) = (col / 2, col % 2);
                let expect = q.mul(wedge.get(s2, s), &q.mul(&b[j], &c[k]));
                assert_eq!(m.get(r, col), &expect);
            }
        }
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn shapes_and_errors() {
        let f = PrimeField::default();
        let t = zoo::unit_tensor(&f, 5);
        let m = build_koszul(&t, 2).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (10 * 5, 10 * 5));
        assert!(build_koszul(&t, 1).is_err());
        assert_eq!(build_koszul(&t, 0).unwrap().rank(), 5);
        assert!(koszul_bound(&zoo::unit_tensor(&f, 4), 2, Factor::A, 0, 1).is_err());
        assert!(restrict_a(&t, 6, 0).is_err());
    }

    #[test]
    fn rank_one_constants() {
        assert_eq!(koszul_rank_one_constant(0), 1);
        assert_eq!(koszul_rank_one_constant(1), 2);
        // The oracle gives C(2p, p); C(2p, p-1) = 4 does not match at p = 2.
        assert_eq!(koszul_rank_one_constant(2), 6);
        assert_eq!(koszul_rank_one_constant(3), 20);
        for p in 0..4 {
            assert_eq!(koszul_rank_one_constant(p), binomial(2 * p, p));
        }
    }

    #[test]
    fn restriction_behaviour() {
        let f = PrimeField::default();
        let m3 = zoo::matmul(&f, 3, 3, 3);
        let r = restrict_a(&m3, 5, 7).unwrap();
        assert_eq!(r.dims(), [5, 9, 9]);
        assert!(r.conciseness().concise);
        assert_eq!(restrict_a(&m3, 5, 7).unwrap(), r);
        let one = restrict_a(&m3, 1, 3).unwrap();
        assert_eq!(one.dims(), [1, 9, 9]);
        let u = zoo::unit_tensor(&f, 3);
        let same = restrict_a(&u, 3, 1).unwrap();
        assert_eq!(build_koszul(&same, 1).unwrap().rank(), build_koszul(&u, 1).unwrap().rank());
    }

    #[test]
    fn unit_tensor_ranks_and_bounds() {
        let f = PrimeField::default();
        assert_eq!(build_koszul(&zoo::unit_tensor(&f, 3), 1).unwrap().rank(), 6);
        for m in 3..=6 {
            let kb = koszul_bound(&zoo::unit_tensor(&f, m), 1, Factor::A, 11, 3).unwrap();
            assert_eq!(kb.rank, 2 * m);
            assert_eq!(kb.bound, m);
        }
    }

    #[test]
    fn matrix_multiplication_bounds() {
        let f = PrimeField::default();
        let kb = koszul_bound(&zoo::matmul(&f, 2, 2, 2), 1, Factor::A, 1, 3).unwrap();
        assert_eq!(kb.bound, 6);
        let kb = koszul_bound(&zoo::matmul(&f, 3, 3, 3), 2, Factor::A, 1, 2).unwrap();
        assert_eq!(kb.shape, (90, 90));
        assert_eq!(kb.bound, 15);
    }

    #[test]
    fn direct_sums_add_ranks() {
        // Both blocks share the 3-dimensional A factor and sit on disjoint
        // parts of B and C.
        let f = PrimeField::default();
        let mut rng = rng_from_seed(2);
        let t1 = Tensor3::new(&f, [3, 2, 2], random_vector(&f, 12, &mut rng)).unwrap();
        let t2 = Tensor3::new(&f, [3, 3, 2], random_vector(&f, 18, &mut rng)).unwrap();
        let mut joint = Tensor3::zeros(&f, [3, 5, 4]);
        for ([i, j, k], v) in t1.nonzero_entries() {
            joint.set(i, j, k, *v);
        }
        for ([i, j, k], v) in t2.nonzero_entries() {
            joint.set(i, 2 + j, 2 + k, *v);
        }
        let r = |t: &Tensor3<PrimeField>| build_koszul(t, 1).unwrap().rank();
        assert_eq!(r(&joint), r(&t1) + r(&t2));
    }

    #[test]
    fn bounds_on_cw_tensors() {
        let f = PrimeField::default();
        assert_eq!(koszul_bound(&zoo::small_cw(&f, 2), 1, Factor::A, 4, 3).unwrap().bound, 4);
        for side in Factor::ALL {
            assert_eq!(koszul_bound(&zoo::big_cw(&f, 2), 1, side, 4, 3).unwrap().bound, 4);
        }
        // p = 0 is the conciseness bound.
        let m = zoo::matmul(&f, 2, 3, 4);
        assert_eq!(koszul_bound(&m, 0, Factor::A, 0, 1).unwrap().bound, m.dims()[1]);
    }

    #[test]
    fn bounds_stay_below_method_limit_and_upper_certificates() {
        let f = PrimeField::default();
        let zoo_tensors = vec![
            zoo::unit_tensor(&f, 4),
            zoo::matmul(&f, 2, 2, 2),
            zoo::big_cw(&f, 3),
            zoo::small_cw(&f, 3),
            zoo::w_state(&f),
            zoo::truncated_poly(&f, 5).structure_tensor(),
            zoo::det3(&f).unwrap(),
        ];
        for t in &zoo_tensors {
            let m = t.cubic_dim().unwrap();
            for p in 0..=(m - 1) / 2 {
                let kb = koszul_bound(t, p, Factor::A, 9, 2).unwrap();
                assert!(kb.bound < 2 * m, "{t:?} p={p}");
            }
        }
        for (t, d) in [
            (zoo::matmul(&f, 2, 2, 2), zoo::strassen_decomposition(&f)),
            (zoo::small_cw(&f, 2), zoo::small_cw_decomposition(&f, 2)),
            (zoo::small_cw(&f, 4), zoo::small_cw_decomposition(&f, 4)),
        ] {
            assert!(d.verify(&t).unwrap());
            let m = t.cubic_dim().unwrap();
            for p in 0..=(m - 1) / 2 {
                assert!(koszul_bound(&t, p, Factor::A, 5, 2).unwrap().bound <= d.rank());
            }
        }
    }
}
