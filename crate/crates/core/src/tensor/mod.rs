//! Dense order-3 tensors `T ∈ A⊗B⊗C` and their slices, flattenings and
//! genericity properties.
//!
//! Entries are stored row-major: `T^{ijk}` lives at `(i * b + j) * c + k`.
//! Slices use the conventions
//!
//! * `contract(A, α)` is the `b × c` matrix `Σ_i α_i T^{i··}`,
//! * `contract(B, β)` is the `a × c` matrix `Σ_j β_j T^{·j·}`,
//! * `contract(C, γ)` is the `a × b` matrix `Σ_k γ_k T^{··k}`.

mod binding;
mod eps;
mod ops;
mod polarize;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{LinMap, Subspace};
use crate::random::{derive_seed_index, random_vector, rng_from_seed};

pub use binding::symmetrize_binding;
pub use eps::{EpsDecomposition, EpsTerm};
pub use ops::{apply_gl, direct_sum, kronecker, kronecker_power, permute_factors};
pub use polarize::CubicForm;

/// One of the three tensor factors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Factor {
    A,
    B,
    C,
}

impl Factor {
    pub const ALL: [Factor; 3] = [Factor::A, Factor::B, Factor::C];

    pub fn index(self) -> usize {
        self as usize
    }

    /// The two remaining factors, in order.
    pub fn others(self) -> (Factor, Factor) {
        match self {
            Factor::A => (Factor::B, Factor::C),
            Factor::B => (Factor::A, Factor::C),
            Factor::C => (Factor::A, Factor::B),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Factor::A => "A",
            Factor::B => "B",
            Factor::C => "C",
        };
        f.write_str(s)
    }
}

/// A dense tensor in `K^a ⊗ K^b ⊗ K^c`.
#[derive(Clone)]
pub struct Tensor3<K: Field> {
    field: K,
    dims: [usize; 3],
    data: Vec<K::Elem>,
}

impl<K: Field> PartialEq for Tensor3<K> {
    fn eq(&self, other: &Self) -> bool {
        self.dims == other.dims && self.data == other.data
    }
}

impl<K: Field> fmt::Debug for Tensor3<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor3{:?} over {} {{", self.dims, self.field.tag())?;
        for ([i, j, k], v) in self.nonzero_entries() {
            write!(f, " ({i},{j},{k}):{}", self.field.format(v))?;
        }
        write!(f, " }}")
    }
}

/// Result of a genericity search along one factor.
#[derive(Debug, Clone)]
pub struct Genericity<K: Field> {
    pub factor: Factor,
    /// Largest slice rank seen.
    pub max_rank: usize,
    /// Full rank for slices along this factor: the smaller of the other two dims.
    pub full_rank: usize,
    /// A functional attaining `max_rank`.
    pub witness: Vec<K::Elem>,
    pub trials: usize,
}

impl<K: Field> Genericity<K> {
    pub fn is_generic(&self) -> bool {
        self.max_rank == self.full_rank
    }
}

/// Dimensions of the three slice spaces and whether all are maximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conciseness {
    pub concise: bool,
    pub slice_dims: [usize; 3],
}

impl<K: Field> Tensor3<K> {
    pub fn zeros(field: &K, dims: [usize; 3]) -> Self {
        Tensor3 { field: field.clone(), dims, data: vec![field.zero(); dims[0] * dims[1] * dims[2]] }
    }

    pub fn new(field: &K, dims: [usize; 3], data: Vec<K::Elem>) -> Result<Self> {
        if data.len() != dims[0] * dims[1] * dims[2] {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a tensor of dims {dims:?}",
                data.len()
            )));
        }
        Ok(Tensor3 { field: field.clone(), dims, data })
    }

    pub fn from_fn(field: &K, dims: [usize; 3], mut f: impl FnMut(usize, usize, usize) -> K::Elem) -> Self {
        let mut data = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for i in 0..dims[0] {
            for j in 0..dims[1] {
                for k in 0..dims[2] {
                    data.push(f(i, j, k));
                }
            }
        }
        Tensor3 { field: field.clone(), dims, data }
    }

    /// Sparse integer entries; repeated indices accumulate.
    pub fn from_i64_entries(field: &K, dims: [usize; 3], entries: &[([usize; 3], i64)]) -> Result<Self> {
        let mut t = Tensor3::zeros(field, dims);
        for &(idx, v) in entries {
            t.check_index(idx)?;
            let cur = t.get(idx[0], idx[1], idx[2]).clone();
            t.set(idx[0], idx[1], idx[2], field.add(&cur, &field.from_i64(v)));
        }
        Ok(t)
    }

    /// `a ⊗ b ⊗ c`.
    pub fn rank_one(field: &K, a: &[K::Elem], b: &[K::Elem], c: &[K::Elem]) -> Self {
        Tensor3::from_fn(field, [a.len(), b.len(), c.len()], |i, j, k| {
            field.mul(&field.mul(&a[i], &b[j]), &c[k])
        })
    }

    fn check_index(&self, idx: [usize; 3]) -> Result<()> {
        if idx.iter().zip(&self.dims).any(|(i, d)| i >= d) {
            return Err(Error::InvalidArgument(format!(
                "index {idx:?} out of range for dims {:?}",
                self.dims
            )));
        }
        Ok(())
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn dim(&self, factor: Factor) -> usize {
        self.dims[factor.index()]
    }

    /// `Some(m)` when all three dimensions equal `m`.
    pub fn cubic_dim(&self) -> Option<usize> {
        let [a, b, c] = self.dims;
        (a == b && b == c).then_some(a)
    }

    #[inline]
    fn offset(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.dims[1] + j) * self.dims[2] + k
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> &K::Elem {
        &self.data[self.offset(i, j, k)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: K::Elem) {
        let o = self.offset(i, j, k);
        self.data[o] = v;
    }

    pub fn data(&self) -> &[K::Elem] {
        &self.data
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = ([usize; 3], &K::Elem)> {
        let [_, b, c] = self.dims;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, v)| !self.field.is_zero(v))
            .map(move |(o, v)| ([o / (b * c), (o / c) % b, o % c], v))
    }

    pub fn nnz(&self) -> usize {
        self.nonzero_entries().count()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", self.dims, other.dims)));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.field.add(a, b)).collect();
        Ok(Tensor3 { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &K::Elem) -> Self {
        let data = self.data.iter().map(|v| self.field.mul(s, v)).collect();
        Tensor3 { data, ..self.clone() }
    }

    /// Re-express the tensor in another field through exact rationals.
    pub fn convert<L: Field>(&self, to: &L) -> Result<Tensor3<L>> {
        let data = self
            .data
            .iter()
            .map(|v| to.from_rational(&self.field.to_rational(v)))
            .collect::<Result<_>>()?;
        Tensor3::new(to, self.dims, data)
    }

    /// The slice `T(φ)` for a functional `φ` on `factor`.
    pub fn contract(&self, factor: Factor, phi: &[K::Elem]) -> Result<LinMap<K>> {
        let n = self.dim(factor);
        if phi.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "functional of length {} on factor {factor} of dim {n}",
                phi.len()
            )));
        }
        let f = &self.field;
        let [a, b, c] = self.dims;
        let (rows, cols) = match factor {
            Factor::A => (b, c),
            Factor::B => (a, c),
            Factor::C => (a, b),
        };
        let mut out = LinMap::zeros(f, rows, cols);
        for ([i, j, k], v) in self.nonzero_entries() {
            let (s, r, col) = match factor {
                Factor::A => (i, j, k),
                Factor::B => (j, i, k),
                Factor::C => (k, i, j),
            };
            if f.is_zero(&phi[s]) {
                continue;
            }
            let cur = out.get(r, col).clone();
            out.set(r, col, f.add(&cur, &f.mul(&phi[s], v)));
        }
        let (x, y) = factor.others();
        Ok(out.with_labels(x.to_string(), y.to_string()))
    }

    /// The slice along the `idx`-th coordinate functional.
    pub fn slice(&self, factor: Factor, idx: usize) -> LinMap<K> {
        let f = &self.field;
        let e: Vec<_> = (0..self.dim(factor))
            .map(|s| if s == idx { f.one() } else { f.zero() })
            .collect();
        self.contract(factor, &e).expect("unit functional is sized")
    }

    /// All coordinate slices along `factor`.
    pub fn slices(&self, factor: Factor) -> Vec<LinMap<K>> {
        (0..self.dim(factor)).map(|s| self.slice(factor, s)).collect()
    }

    /// The flattening `factor* → (other)⊗(other)`: column `s` is the
    /// vectorised `s`-th slice.
    pub fn flattening(&self, factor: Factor) -> LinMap<K> {
        let slices = self.slices(factor);
        let n = slices.len();
        let len = self.dims.iter().product::<usize>() / self.dim(factor).max(1);
        let len = if self.dim(factor) == 0 { 0 } else { len };
        let (x, y) = factor.others();
        LinMap::from_fn(&self.field, len, n, |r, s| slices[s].entries()[r].clone())
            .with_labels(format!("{x}⊗{y}"), format!("{factor}*"))
    }

    /// `T(factor*)`, the span of all slices along `factor`.
    pub fn slice_space(&self, factor: Factor) -> Subspace<K> {
        let (x, y) = factor.others();
        let ambient = self.dim(x) * self.dim(y);
        let vectors = self.slices(factor).into_iter().map(|m| m.entries().to_vec()).collect();
        Subspace::new(&self.field, ambient, vectors, format!("T({factor}*)")).expect("slices are sized")
    }

    pub fn conciseness(&self) -> Conciseness {
        let slice_dims = Factor::ALL.map(|f| self.flattening(f).rank());
        Conciseness { concise: slice_dims == self.dims, slice_dims }
    }

    pub fn is_concise(&self) -> (bool, [usize; 3]) {
        let c = self.conciseness();
        (c.concise, c.slice_dims)
    }

    /// Maximal slice rank along `factor` over `trials` seeded random
    /// functionals. Stops early once full rank is reached.
    pub fn genericity(&self, factor: Factor, trials: usize, seed: u64) -> Genericity<K> {
        let (x, y) = factor.others();
        let full_rank = self.dim(x).min(self.dim(y));
        let n = self.dim(factor);
        let mut best = Genericity {
            factor,
            max_rank: 0,
            full_rank,
            witness: vec![self.field.zero(); n],
            trials: 0,
        };
        for t in 0..trials.max(1) {
            let mut rng = rng_from_seed(derive_seed_index(seed, t as u64));
            let phi = random_vector(&self.field, n, &mut rng);
            let rank = self.contract(factor, &phi).expect("sized").rank();
            best.trials = t + 1;
            if rank > best.max_rank || t == 0 {
                best.max_rank = rank;
                best.witness = phi;
            }
            if best.max_rank == full_rank {
                break;
            }
        }
        best
    }

    /// Genericity data for a caller-supplied witness, bypassing sampling.
    pub fn genericity_with_witness(&self, factor: Factor, witness: Vec<K::Elem>) -> Result<Genericity<K>> {
        let (x, y) = factor.others();
        let max_rank = self.contract(factor, &witness)?.rank();
        Ok(Genericity {
            factor,
            max_rank,
            full_rank: self.dim(x).min(self.dim(y)),
            witness,
            trials: 0,
        })
    }

    /// `X.T` on `factor`: `(X.T)^{ijk} = Σ_s X_{is} T^{sjk}` for factor A and
    /// analogously for B and C. `X` may be rectangular (`n × dim`), in which
    /// case the factor dimension becomes `n`.
    pub fn mode_product(&self, factor: Factor, x: &LinMap<K>) -> Result<Self> {
        let d = self.dim(factor);
        if x.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on factor {factor} of dim {d}",
                x.nrows(),
                x.ncols()
            )));
        }
        let f = &self.field;
        let mut dims = self.dims;
        dims[factor.index()] = x.nrows();
        let mut out = Tensor3::zeros(f, dims);
        for ([i, j, k], v) in self.nonzero_entries() {
            let s = [i, j, k][factor.index()];
            for r in 0..x.nrows() {
                let coef = x.get(r, s);
                if f.is_zero(coef) {
                    continue;
                }
                let mut idx = [i, j, k];
                idx[factor.index()] = r;
                let o = out.offset(idx[0], idx[1], idx[2]);
                out.data[o] = f.add(&out.data[o], &f.mul(coef, v));
            }
        }
        Ok(out)
    }

    /// True when swapping the two given factors leaves the tensor unchanged.
    pub fn is_symmetric_in(&self, f1: Factor, f2: Factor) -> bool {
        if self.dim(f1) != self.dim(f2) {
            return false;
        }
        let mut perm = [Factor::A, Factor::B, Factor::C];
        perm.swap(f1.index(), f2.index());
        permute_factors(self, perm).map(|t| t == *self).unwrap_or(false)
    }

    pub fn is_fully_symmetric(&self) -> bool {
        self.is_symmetric_in(Factor::A, Factor::B) && self.is_symmetric_in(Factor::A, Factor::C)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::zoo;
    use proptest::prelude::*;

    #[test]
    fn rank_one_slice_has_rank_one() {
        let q = Rationals;
        let a = [q.from_i64(1), q.from_i64(0)];
        let b = [q.from_i64(2), q.from_i64(3), q.from_i64(-1)];
        let c = [q.from_i64(1), q.from_i64(5)];
        let t = Tensor3::rank_one(&q, &a, &b, &c);
        let s = t.contract(Factor::A, &[q.from_i64(1), q.from_i64(7)]).unwrap();
        assert_eq!(s.rank(), 1);
        assert_eq!(*s.get(1, 1), q.from_i64(15));
        assert_eq!(t.slice_space(Factor::A).dim(), 1);
        assert!(t.contract(Factor::A, &[q.from_i64(1)]).is_err());
    }

    #[test]
    fn unit_tensor_all_ones_slice_is_identity() {
        let q = Rationals;
        let t = zoo::unit_tensor(&q, 3);
        let ones = vec![q.one(); 3];
        assert_eq!(t.contract(Factor::A, &ones).unwrap(), LinMap::identity(&q, 3));
        assert_eq!(t.slice_space(Factor::A).dim(), 3);
    }

    #[test]
    fn w_state_slice() {
        let q = Rationals;
        let w = zoo::w_state(&q);
        let s = w.contract(Factor::A, &[q.one(), q.zero()]).unwrap();
        assert_eq!(s, LinMap::from_i64(&q, &[&[0, 1], &[1, 0]]).unwrap());
        assert_eq!(s.rank(), 2);
        assert_eq!(w.genericity(Factor::A, 8, 1).max_rank, 2);
    }

    #[test]
    fn conciseness_examples() {
        let q = Rationals;
        assert_eq!(zoo::unit_tensor(&q, 4).is_concise(), (true, [4, 4, 4]));
        // M1^{⊕2} padded to 3x2x2: the third A-direction is unused.
        let padded = Tensor3::from_i64_entries(&q, [3, 2, 2], &[([0, 0, 0], 1), ([1, 1, 1], 1)]).unwrap();
        assert_eq!(padded.is_concise(), (false, [2, 2, 2]));
        assert!(zoo::big_cw(&q, 2).conciseness().concise);
        assert_eq!(zoo::matmul(&q, 2, 2, 2).slice_space(Factor::A).dim(), 4);
    }

    #[test]
    fn genericity_of_matmul_and_unit() {
        let f = PrimeField::default();
        let g = zoo::unit_tensor(&f, 5).genericity(Factor::A, 8, 3);
        assert!(g.is_generic());
        assert_eq!(g.max_rank, 5);
        let ones = vec![f.one(); 5];
        assert!(zoo::unit_tensor(&f, 5).genericity_with_witness(Factor::A, ones).unwrap().is_generic());
        let m3 = zoo::matmul(&f, 3, 3, 3);
        assert_eq!(m3.genericity(Factor::A, 8, 3).max_rank, 9);
        // Identity matrix as a functional on A = matrices.
        let id: Vec<u64> = (0..9).map(|s| (s / 3 == s % 3) as u64).collect();
        assert_eq!(m3.genericity_with_witness(Factor::A, id).unwrap().max_rank, 9);
    }

    #[test]
    fn genericity_is_deterministic() {
        let f = PrimeField::default();
        let t = zoo::small_cw(&f, 3);
        let g1 = t.genericity(Factor::B, 4, 99);
        let g2 = t.genericity(Factor::B, 4, 99);
        assert_eq!(g1.witness, g2.witness);
    }

    proptest! {
        #[test]
        fn contraction_is_linear(seed in 0u64..100_000) {
            let f = PrimeField::default();
            let mut rng = rng_from_seed(seed);
            let t = Tensor3::new(&f, [3, 2, 4], random_vector(&f, 24, &mut rng)).unwrap();
            for factor in Factor::ALL {
                let n = t.dim(factor);
                let u = random_vector(&f, n, &mut rng);
                let v = random_vector(&f, n, &mut rng);
                let w: Vec<u64> = u.iter().zip(&v).map(|(x, y)| f.add(x, y)).collect();
                let lhs = t.contract(factor, &w).unwrap();
                let rhs = t.contract(factor, &u).unwrap().add(&t.contract(factor, &v).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
