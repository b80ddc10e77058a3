//! Named benchmark tensors, algebra structure tensors and a few border
//! decompositions of them.

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinMap;
use crate::tensor::{apply_gl, CubicForm, EpsDecomposition, EpsTerm, Tensor3};

/// `M⟨l,m,n⟩ ∈ K^{lm}⊗K^{mn}⊗K^{nl}` with a 1 at each
/// `((i,j), (j,k), (k,i))`, flattened as `i*m+j`, `j*n+k`, `k*l+i`.
pub fn matmul<K: Field>(field: &K, l: usize, m: usize, n: usize) -> Tensor3<K> {
    let mut t = Tensor3::zeros(field, [l * m, m * n, n * l]);
    for i in 0..l {
        for j in 0..m {
            for k in 0..n {
                t.set(i * m + j, j * n + k, k * l + i, field.one());
            }
        }
    }
    t
}

/// `Σ e_i⊗e_i⊗e_i`, the direct sum of `m` copies of `M⟨1⟩`.
pub fn unit_tensor<K: Field>(field: &K, m: usize) -> Tensor3<K> {
    let mut t = Tensor3::zeros(field, [m, m, m]);
    for i in 0..m {
        t.set(i, i, i, field.one());
    }
    t
}

/// `e₀⊗e₀⊗e₁ + e₁⊗e₀⊗e₀ + e₀⊗e₁⊗e₀`.
pub fn w_state<K: Field>(field: &K) -> Tensor3<K> {
    Tensor3::from_i64_entries(field, [2, 2, 2], &[([0, 0, 1], 1), ([1, 0, 0], 1), ([0, 1, 0], 1)]).expect("in range")
}

/// The big Coppersmith–Winograd tensor in `(K^{q+2})^{⊗3}`.
pub fn big_cw<K: Field>(field: &K, q: usize) -> Tensor3<K> {
    let last = q + 1;
    let mut entries = vec![([0, 0, last], 1), ([0, last, 0], 1), ([last, 0, 0], 1)];
    for i in 1..=q {
        entries.extend([([0, i, i], 1), ([i, 0, i], 1), ([i, i, 0], 1)]);
    }
    Tensor3::from_i64_entries(field, [q + 2, q + 2, q + 2], &entries).expect("in range")
}

/// The small Coppersmith–Winograd tensor `Σ_i e₀eᵢeᵢ + eᵢe₀eᵢ + eᵢeᵢe₀`
/// in `(K^{q+1})^{⊗3}`.
pub fn small_cw<K: Field>(field: &K, q: usize) -> Tensor3<K> {
    let mut entries = Vec::new();
    for i in 1..=q {
        entries.extend([([0, i, i], 1), ([i, 0, i], 1), ([i, i, 0], 1)]);
    }
    Tensor3::from_i64_entries(field, [q + 1, q + 1, q + 1], &entries).expect("in range")
}

/// Multiplication table of a finite-dimensional algebra: `products[I][J]`
/// holds `p_I p_J` in basis coordinates.
#[derive(Clone, Debug)]
pub struct AlgebraTable<K: Field> {
    field: K,
    labels: Vec<String>,
    products: Vec<Vec<Vec<K::Elem>>>,
    unit: Option<usize>,
}

impl<K: Field> AlgebraTable<K> {
    pub fn new(
        field: &K,
        labels: Vec<String>,
        products: Vec<Vec<Vec<K::Elem>>>,
        unit: Option<usize>,
    ) -> Result<Self> {
        let m = labels.len();
        if products.len() != m || products.iter().any(|row| row.len() != m || row.iter().any(|v| v.len() != m)) {
            return Err(Error::Malformed(format!("product table must be {m}x{m} with vectors of length {m}")));
        }
        if let Some(u) = unit {
            if u >= m {
                return Err(Error::Malformed(format!("unit index {u} out of range")));
            }
            for i in 0..m {
                let e: Vec<_> = (0..m).map(|j| if i == j { field.one() } else { field.zero() }).collect();
                if products[u][i] != e || products[i][u] != e {
                    return Err(Error::Malformed(format!(
                        "basis element {} does not act as the identity on {}",
                        labels[u], labels[i]
                    )));
                }
            }
        }
        Ok(AlgebraTable { field: field.clone(), labels, products, unit })
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> Option<usize> {
        self.unit
    }

    pub fn product(&self, i: usize, j: usize) -> &[K::Elem] {
        &self.products[i][j]
    }

    pub fn is_commutative(&self) -> bool {
        let m = self.dim();
        (0..m).all(|i| (0..i).all(|j| self.products[i][j] == self.products[j][i]))
    }

    /// `Σ p_I*⊗p_J*⊗(p_I p_J)`: entry `[I][J][K]` is the `p_K` coefficient of `p_I p_J`.
    pub fn structure_tensor(&self) -> Tensor3<K> {
        let m = self.dim();
        Tensor3::from_fn(&self.field, [m, m, m], |i, j, k| self.products[i][j][k].clone())
    }
}

fn basis_vector<K: Field>(field: &K, m: usize, i: usize) -> Vec<K::Elem> {
    (0..m).map(|j| if i == j { field.one() } else { field.zero() }).collect()
}

/// `K^m` with the pointwise product.
pub fn split_algebra<K: Field>(field: &K, m: usize) -> AlgebraTable<K> {
    let labels = (0..m).map(|i| format!("e{i}")).collect();
    let products = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| if i == j { basis_vector(field, m, i) } else { vec![field.zero(); m] })
                .collect()
        })
        .collect();
    // The unit (1, …, 1) is not a basis element for m > 1.
    let unit = (m == 1).then_some(0);
    AlgebraTable::new(field, labels, products, unit).expect("well formed")
}

/// `K[x]/(x^k)` in the basis `1, x, …, x^{k-1}`.
pub fn truncated_poly<K: Field>(field: &K, k: usize) -> AlgebraTable<K> {
    let labels = (0..k)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        })
        .collect();
    let products = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i + j < k { basis_vector(field, k, i + j) } else { vec![field.zero(); k] })
                .collect()
        })
        .collect();
    AlgebraTable::new(field, labels, products, (k > 0).then_some(0)).expect("well formed")
}

/// The Gorenstein algebra `A_CW,q` with basis `1, x_1, …, x_q, [x²]`, where
/// `x_i x_j = δ_ij [x²]` and `[x²]` annihilates the maximal ideal.
pub fn cw_algebra<K: Field>(field: &K, q: usize) -> AlgebraTable<K> {
    let m = q + 2;
    let top = q + 1;
    let mut labels = vec!["1".to_string()];
    labels.extend((1..=q).map(|i| format!("x{i}")));
    labels.push("[x^2]".to_string());
    let products = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| match (i, j) {
                    (0, j) => basis_vector(field, m, j),
                    (i, 0) => basis_vector(field, m, i),
                    (i, j) if i == j && i != top => basis_vector(field, m, top),
                    _ => vec![field.zero(); m],
                })
                .collect()
        })
        .collect();
    AlgebraTable::new(field, labels, products, Some(0)).expect("well formed")
}

/// Structure tensor of `table`.
pub fn structure_tensor<K: Field>(table: &AlgebraTable<K>) -> Tensor3<K> {
    table.structure_tensor()
}

const PERMS3: [([usize; 3], i64); 6] =
    [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)];

fn three_by_three_form<K: Field>(field: &K, signed: bool) -> CubicForm<K> {
    let mut form = CubicForm::new(field, 9);
    for (p, sign) in PERMS3 {
        let s = if signed { sign } else { 1 };
        form.add_term([p[0], 3 + p[1], 6 + p[2]], field.from_i64(s)).expect("in range");
    }
    form
}

/// The 3x3 determinant as a cubic in variables `x_{rc}` indexed `3r + c`.
pub fn det3_form<K: Field>(field: &K) -> CubicForm<K> {
    three_by_three_form(field, true)
}

/// The 3x3 permanent, same variables as [`det3_form`].
pub fn perm3_form<K: Field>(field: &K) -> CubicForm<K> {
    three_by_three_form(field, false)
}

pub fn det3<K: Field>(field: &K) -> Result<Tensor3<K>> {
    det3_form(field).polarize()
}

pub fn perm3<K: Field>(field: &K) -> Result<Tensor3<K>> {
    perm3_form(field).polarize()
}

fn constant_vector<K: Field>(field: &K, v: &[i64]) -> Vec<Vec<K::Elem>> {
    v.iter().map(|&x| vec![field.from_i64(x)]).collect()
}

/// `(e₀+εe₁)^{⊗3} − e₀^{⊗3} = ε·W + O(ε²)`.
pub fn w_state_decomposition<K: Field>(field: &K) -> EpsDecomposition<K::Elem> {
    let f = field;
    let moving = vec![vec![f.one()], vec![f.zero(), f.one()]];
    let fixed = constant_vector(f, &[1, 0]);
    let neg = constant_vector(f, &[-1, 0]);
    EpsDecomposition::new(
        1,
        vec![
            EpsTerm { a: moving.clone(), b: moving.clone(), c: moving },
            EpsTerm { a: neg, b: fixed.clone(), c: fixed },
        ],
    )
}

/// A border decomposition of `small_cw(q)` with `q + 2` terms at order `ε³`:
/// `Σ_i ε(e₀+εe_i)^{⊗3} − (e₀+ε²Σe_i)^{⊗3} + (1−qε)e₀^{⊗3}`.
pub fn small_cw_decomposition<K: Field>(field: &K, q: usize) -> EpsDecomposition<K::Elem> {
    let f = field;
    let m = q + 1;
    let poly = |c: &[i64]| c.iter().map(|&x| f.from_i64(x)).collect::<Vec<_>>();
    let mut terms = Vec::with_capacity(q + 2);
    for i in 1..=q {
        let shifted: Vec<_> = (0..m)
            .map(|s| match s {
                0 => poly(&[0, 1]),
                s if s == i => poly(&[0, 0, 1]),
                _ => vec![],
            })
            .collect();
        let plain: Vec<_> = (0..m)
            .map(|s| match s {
                0 => poly(&[1]),
                s if s == i => poly(&[0, 1]),
                _ => vec![],
            })
            .collect();
        terms.push(EpsTerm { a: shifted, b: plain.clone(), c: plain });
    }
    let spread = |lead: i64| -> Vec<Vec<K::Elem>> {
        (0..m).map(|s| if s == 0 { poly(&[lead]) } else { poly(&[0, 0, 1]) }).collect()
    };
    let neg_spread: Vec<_> = (0..m).map(|s| if s == 0 { poly(&[-1]) } else { poly(&[0, 0, -1]) }).collect();
    terms.push(EpsTerm { a: neg_spread, b: spread(1), c: spread(1) });
    let mut e0 = vec![vec![]; m];
    e0[0] = poly(&[1]);
    let mut lead = vec![vec![]; m];
    lead[0] = poly(&[1, -(q as i64)]);
    terms.push(EpsTerm { a: lead, b: e0.clone(), c: e0 });
    EpsDecomposition::new(3, terms)
}

/// Strassen's seven-product decomposition of `M⟨2⟩` in the index
/// convention of [`matmul`].
pub fn strassen_decomposition<K: Field>(field: &K) -> EpsDecomposition<K::Elem> {
    let rows: [[[i64; 4]; 3]; 7] = [
        [[1, 0, 0, 1], [1, 0, 0, 1], [1, 0, 0, 1]],
        [[0, 0, 1, 1], [1, 0, 0, 0], [0, 1, 0, -1]],
        [[1, 0, 0, 0], [0, 1, 0, -1], [0, 0, 1, 1]],
        [[0, 0, 0, 1], [-1, 0, 1, 0], [1, 1, 0, 0]],
        [[1, 1, 0, 0], [0, 0, 0, 1], [-1, 0, 1, 0]],
        [[-1, 0, 1, 0], [1, 1, 0, 0], [0, 0, 0, 1]],
        [[0, 1, 0, -1], [0, 0, 1, 1], [1, 0, 0, 0]],
    ];
    let terms = rows
        .iter()
        .map(|[a, b, c]| EpsTerm {
            a: constant_vector(field, a),
            b: constant_vector(field, b),
            c: constant_vector(field, c),
        })
        .collect();
    EpsDecomposition::new(0, terms)
}

/// Swaps basis vectors `i` and `j` of the third factor only.
pub fn swap_in_third_factor<K: Field>(t: &Tensor3<K>, i: usize, j: usize) -> Result<Tensor3<K>> {
    let [a, b, c] = t.dims();
    let mut perm: Vec<usize> = (0..c).collect();
    perm.swap(i, j);
    let f = t.field();
    apply_gl(t, &LinMap::identity(f, a), &LinMap::identity(f, b), &LinMap::permutation(f, &perm)?)
}
