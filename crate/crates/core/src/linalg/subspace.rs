use std::fmt;

use super::LinMap;
use crate::error::{Error, Result};
use crate::field::Field;

/// A linear subspace of `K^n` given by a basis of independent vectors.
#[derive(Clone)]
pub struct Subspace<K: Field> {
    field: K,
    ambient_dim: usize,
    basis: Vec<Vec<K::Elem>>,
    label: String,
}

impl<K: Field> fmt::Debug for Subspace<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace {:?} of dim {} in K^{}",
            self.label,
            self.basis.len(),
            self.ambient_dim
        )
    }
}

impl<K: Field> Subspace<K> {
    /// Span of `vectors`; dependent vectors are removed by row reduction.
    pub fn new(field: &K, ambient_dim: usize, vectors: Vec<Vec<K::Elem>>, label: impl Into<String>) -> Result<Self> {
        if let Some(v) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {ambient_dim}",
                v.len()
            )));
        }
        let mut rows = vectors;
        let rank = field.echelon(&mut rows, ambient_dim).len();
        rows.truncate(rank);
        Ok(Self::from_independent(field, ambient_dim, rows, label))
    }

    pub(crate) fn from_independent(
        field: &K,
        ambient_dim: usize,
        basis: Vec<Vec<K::Elem>>,
        label: impl Into<String>,
    ) -> Self {
        Subspace { field: field.clone(), ambient_dim, basis, label: label.into() }
    }

    pub fn zero(field: &K, ambient_dim: usize) -> Self {
        Self::from_independent(field, ambient_dim, Vec::new(), "0")
    }

    pub fn full(field: &K, ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| if i == j { field.one() } else { field.zero() }).collect())
            .collect();
        Self::from_independent(field, ambient_dim, basis, "full")
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn field(&self) -> &K {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn basis(&self) -> &[Vec<K::Elem>] {
        &self.basis
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Basis vectors as the rows of a matrix.
    pub fn as_rows(&self) -> LinMap<K> {
        LinMap::from_rows(&self.field, self.basis.clone(), self.ambient_dim).expect("basis vectors are sized")
    }

    pub fn contains(&self, v: &[K::Elem]) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch("membership test vector".into()));
        }
        if v.iter().all(|x| self.field.is_zero(x)) {
            return Ok(true);
        }
        let mut rows = self.basis.clone();
        rows.push(v.to_vec());
        Ok(self.field.echelon(&mut rows, self.ambient_dim).len() == self.dim())
    }

    /// Coordinates `w` with `Σ w_i * basis_i = v`, or `None` if `v` is outside.
    pub fn coordinates(&self, v: &[K::Elem]) -> Result<Option<Vec<K::Elem>>> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch("coordinate vector".into()));
        }
        // Solve [basis^T | -v] x = 0 with last coordinate 1.
        let f = &self.field;
        let d = self.dim();
        let m = LinMap::from_fn(f, self.ambient_dim, d + 1, |i, j| {
            if j < d {
                self.basis[j][i].clone()
            } else {
                f.neg(&v[i])
            }
        });
        let ker = m.kernel_basis();
        let Some(sol) = ker.basis().iter().find(|x| !f.is_zero(&x[d])) else {
            return Ok(None);
        };
        let scale = f.inv(&sol[d])?;
        Ok(Some(sol[..d].iter().map(|x| f.mul(x, &scale)).collect()))
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of K^{} and K^{}",
                self.ambient_dim, other.ambient_dim
            )));
        }
        Ok(())
    }

    /// The span of `self` and `other`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        let mut vectors = self.basis.clone();
        vectors.extend(other.basis.iter().cloned());
        Subspace::new(&self.field, self.ambient_dim, vectors, format!("<{}, {}>", self.label, other.label))
    }

    /// Linear equations cutting out `self`: the annihilator in dual coordinates.
    pub fn annihilator(&self) -> Self {
        if self.basis.is_empty() {
            return Subspace::full(&self.field, self.ambient_dim);
        }
        self.as_rows().kernel_basis().with_label(format!("ann({})", self.label))
    }

    /// Intersection of all `spaces`, computed from the stacked defining
    /// equations of every space at once.
    pub fn intersect(spaces: &[&Self]) -> Result<Self> {
        let first = spaces
            .first()
            .ok_or_else(|| Error::InvalidArgument("intersection of an empty list".into()))?;
        for s in &spaces[1..] {
            first.check_ambient(s)?;
        }
        let field = &first.field;
        let n = first.ambient_dim;
        let mut equations = Vec::new();
        for s in spaces {
            equations.extend(s.annihilator().basis);
        }
        let label = spaces.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(" ∩ ");
        if equations.is_empty() {
            return Ok(Subspace::full(field, n).with_label(label));
        }
        let system = LinMap::from_rows(field, equations, n)?;
        Ok(system.kernel_basis().with_label(label))
    }
}
