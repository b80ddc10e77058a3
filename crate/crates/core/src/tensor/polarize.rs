use std::collections::BTreeMap;

use super::Tensor3;
use crate::error::{Error, Result};
use crate::field::Field;

/// A homogeneous cubic polynomial in `nvars` variables, stored by sorted
/// monomial `x_a x_b x_c` with `a ≤ b ≤ c`.
#[derive(Clone, Debug)]
pub struct CubicForm<K: Field> {
    field: K,
    nvars: usize,
    terms: BTreeMap<[usize; 3], K::Elem>,
}

impl<K: Field> CubicForm<K> {
    pub fn new(field: &K, nvars: usize) -> Self {
        CubicForm { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Adds `coeff * x_a x_b x_c`.
    pub fn add_term(&mut self, vars: [usize; 3], coeff: K::Elem) -> Result<()> {
        if vars.iter().any(|&v| v >= self.nvars) {
            return Err(Error::InvalidArgument(format!("variable out of range in {vars:?}")));
        }
        let mut key = vars;
        key.sort_unstable();
        let f = &self.field;
        let cur = self.terms.remove(&key).unwrap_or_else(|| f.zero());
        let sum = f.add(&cur, &coeff);
        if !f.is_zero(&sum) {
            self.terms.insert(key, sum);
        }
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[usize; 3], &K::Elem)> {
        self.terms.iter()
    }

    pub fn evaluate(&self, x: &[K::Elem]) -> Result<K::Elem> {
        if x.len() != self.nvars {
            return Err(Error::DimensionMismatch(format!("{} values for {} variables", x.len(), self.nvars)));
        }
        let f = &self.field;
        Ok(f.sum(self.terms.iter().map(|([a, b, c], v)| f.mul(v, &f.mul(&x[*a], &f.mul(&x[*b], &x[*c]))))))
    }

    /// The symmetric tensor `T` with `T(x, x, x) = f(x)`. Each monomial's
    /// coefficient is spread evenly over the distinct orderings of its
    /// indices. Needs characteristic other than 2 and 3.
    pub fn polarize(&self) -> Result<Tensor3<K>> {
        let f = &self.field;
        let ch = f.characteristic();
        if ch == 2 || ch == 3 {
            return Err(Error::Characteristic(ch, "polarization divides by 6"));
        }
        let n = self.nvars;
        let mut t = Tensor3::zeros(f, [n, n, n]);
        for (&[a, b, c], v) in &self.terms {
            let mut orders = vec![[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]];
            orders.sort_unstable();
            orders.dedup();
            let share = f.div(v, &f.from_i64(orders.len() as i64))?;
            for [i, j, k] in orders {
                let cur = t.get(i, j, k).clone();
                t.set(i, j, k, f.add(&cur, &share));
            }
        }
        Ok(t)
    }
}
