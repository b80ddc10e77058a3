use super::Tensor3;
use crate::error::{Error, Result};
use crate::field::Field;

/// One rank-one term `a(ε) ⊗ b(ε) ⊗ c(ε)`. Each vector entry is the list of
/// its polynomial coefficients in `ε`, lowest degree first.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsTerm<E> {
    pub a: Vec<Vec<E>>,
    pub b: Vec<Vec<E>>,
    pub c: Vec<Vec<E>>,
}

/// A border decomposition `Σ a_i(ε)⊗b_i(ε)⊗c_i(ε) = ε^h T + O(ε^{h+1})`.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsDecomposition<E> {
    pub h: usize,
    pub terms: Vec<EpsTerm<E>>,
}

fn coefficient<K: Field>(f: &K, v: &[Vec<K::Elem>], d: usize) -> Vec<K::Elem> {
    v.iter().map(|poly| poly.get(d).cloned().unwrap_or_else(|| f.zero())).collect()
}

impl<E: Clone> EpsDecomposition<E> {
    pub fn new(h: usize, terms: Vec<EpsTerm<E>>) -> Self {
        EpsDecomposition { h, terms }
    }

    /// Number of rank-one terms, the border-rank upper bound certified.
    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    /// Coefficients of `ε^0, …, ε^h` of the expanded sum.
    pub fn expand<K: Field<Elem = E>>(&self, field: &K, dims: [usize; 3]) -> Result<Vec<Tensor3<K>>> {
        for (n, term) in self.terms.iter().enumerate() {
            if [term.a.len(), term.b.len(), term.c.len()] != dims {
                return Err(Error::DimensionMismatch(format!(
                    "term {n} has dims {:?}, tensor has {dims:?}",
                    [term.a.len(), term.b.len(), term.c.len()]
                )));
            }
        }
        let h = self.h;
        let mut out = vec![Tensor3::zeros(field, dims); h + 1];
        for term in &self.terms {
            let a: Vec<_> = (0..=h).map(|d| coefficient(field, &term.a, d)).collect();
            let b: Vec<_> = (0..=h).map(|d| coefficient(field, &term.b, d)).collect();
            let c: Vec<_> = (0..=h).map(|d| coefficient(field, &term.c, d)).collect();
            for da in 0..=h {
                if a[da].iter().all(|x| field.is_zero(x)) {
                    continue;
                }
                for db in 0..=h - da {
                    if b[db].iter().all(|x| field.is_zero(x)) {
                        continue;
                    }
                    for dc in 0..=h - da - db {
                        let piece = Tensor3::rank_one(field, &a[da], &b[db], &c[dc]);
                        let d = da + db + dc;
                        out[d] = out[d].add(&piece)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Exact check that the decomposition converges to `t` at order `h`.
    /// Errors only on a dimension mismatch.
    pub fn verify<K: Field<Elem = E>>(&self, t: &Tensor3<K>) -> Result<bool> {
        let coeffs = self.expand(t.field(), t.dims())?;
        let (top, lower) = coeffs.split_last().expect("h + 1 coefficients");
        Ok(lower.iter().all(Tensor3::is_zero) && top == t)
    }

    /// Map every coefficient into another field through exact rationals.
    pub fn convert<K: Field<Elem = E>, L: Field>(&self, from: &K, to: &L) -> Result<EpsDecomposition<L::Elem>> {
        let map = |v: &Vec<Vec<E>>| -> Result<Vec<Vec<L::Elem>>> {
            v.iter()
                .map(|poly| poly.iter().map(|x| to.from_rational(&from.to_rational(x))).collect())
                .collect()
        };
        let terms = self
            .terms
            .iter()
            .map(|t| Ok(EpsTerm { a: map(&t.a)?, b: map(&t.b)?, c: map(&t.c)? }))
            .collect::<Result<_>>()?;
        Ok(EpsDecomposition { h: self.h, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::zoo;

    fn constant<K: Field>(f: &K, v: &[i64]) -> Vec<Vec<K::Elem>> {
        v.iter().map(|&x| vec![f.from_i64(x)]).collect()
    }

    #[test]
    fn exact_decomposition_of_unit_tensor() {
        let q = Rationals;
        let m = 3;
        let terms = (0..m)
            .map(|i| {
                let e: Vec<i64> = (0..m).map(|j| (i == j) as i64).collect();
                EpsTerm { a: constant(&q, &e), b: constant(&q, &e), c: constant(&q, &e) }
            })
            .collect();
        let d = EpsDecomposition::new(0, terms);
        assert!(d.verify(&zoo::unit_tensor(&q, m)).unwrap());
        assert!(!d.verify(&zoo::unit_tensor(&q, m).scale(&q.from_i64(2))).unwrap());
    }

    #[test]
    fn w_state_border_decomposition() {
        let q = Rationals;
        let w = zoo::w_state(&q);
        let d = zoo::w_state_decomposition(&q);
        assert_eq!(d.rank(), 2);
        assert!(d.verify(&w).unwrap());

        // Hand expansion of (e0 + ε e1)^⊗3: order ε has the three W entries.
        let coeffs = d.expand(&q, [2, 2, 2]).unwrap();
        assert!(coeffs[0].is_zero());
        assert_eq!(coeffs[1], w);

        let mut flipped = d.clone();
        flipped.terms[1].a[0][0] = q.from_i64(1);
        assert!(!flipped.verify(&w).unwrap());

        let mut wrong_dims = d;
        wrong_dims.terms[0].a.push(vec![q.zero()]);
        assert!(wrong_dims.verify(&w).is_err());
    }

    #[test]
    fn strassen_decomposition_has_rank_seven() {
        let q = Rationals;
        let d = zoo::strassen_decomposition(&q);
        assert_eq!(d.rank(), 7);
        assert!(d.verify(&zoo::matmul(&q, 2, 2, 2)).unwrap());
        let f = PrimeField::default();
        let df = d.convert(&q, &f).unwrap();
        assert!(df.verify(&zoo::matmul(&f, 2, 2, 2)).unwrap());
    }

    #[test]
    fn small_cw_border_decompositions() {
        let q = Rationals;
        for n in 1..=4 {
            let d = zoo::small_cw_decomposition(&q, n);
            assert_eq!(d.rank(), n + 2);
            assert!(d.verify(&zoo::small_cw(&q, n)).unwrap(), "q = {n}");
        }
    }
}
