use serde_json::json;

use super::{format_vector, Obstruction, ObstructionName, Verdict};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinMap;
use crate::random::{derive_seed, random_vector, rng_from_seed};
use crate::tensor::{permute_factors, Factor, Tensor3};

const GENERICITY_TRIALS: usize = 8;

fn to_side_a<K: Field>(t: &Tensor3<K>, side: Factor) -> Result<Tensor3<K>> {
    match side {
        Factor::A => Ok(t.clone()),
        Factor::B => permute_factors(t, [Factor::B, Factor::A, Factor::C]),
        Factor::C => permute_factors(t, [Factor::C, Factor::B, Factor::A]),
    }
}

fn square_slices<K: Field>(t: &Tensor3<K>) -> Result<usize> {
    let [_, b, c] = t.dims();
    if b != c {
        return Err(Error::DimensionMismatch(format!("slices are {b}x{c}, need square")));
    }
    Ok(b)
}

/// Strassen's equations `X adj(Y) Z − Z adj(Y) X = 0` on `T(side*)`.
///
/// `X` and `Z` range over the coordinate slices (the equations are linear in
/// them); `Y` ranges over the coordinate slices plus `samples` random
/// combinations. When a full-rank slice `T(α₀)` is found, commutativity of
/// `T(α)T(α₀)⁻¹` over coordinate slices is checked as well.
pub fn strassen_test<K: Field>(t: &Tensor3<K>, side: Factor, seed: u64, samples: usize) -> Result<Obstruction> {
    let t = to_side_a(t, side)?;
    let m = square_slices(&t)?;
    let f = t.field();
    let slices = t.slices(Factor::A);
    let a = slices.len();
    let mut rng = rng_from_seed(derive_seed(seed, "strassen"));
    let mut ys: Vec<(String, LinMap<K>)> = slices.iter().enumerate().map(|(i, s)| (format!("basis {i}"), s.clone())).collect();
    for s in 0..samples {
        let alpha = random_vector(f, a, &mut rng);
        ys.push((format!("sample {s}"), t.contract(Factor::A, &alpha)?));
    }
    let mut violation = None;
    'outer: for (label, y) in &ys {
        let adj = y.adjugate()?;
        if adj.is_zero() {
            continue;
        }
        let left: Vec<LinMap<K>> = slices.iter().map(|x| x.mul(&adj)).collect::<Result<_>>()?;
        for i in 0..a {
            for k in i + 1..a {
                let r = left[i].mul(&slices[k])?.sub(&left[k].mul(&slices[i])?)?;
                if !r.is_zero() {
                    violation = Some(json!({ "x": i, "y": label, "z": k, "residual_rank": r.rank() }));
                    break 'outer;
                }
            }
        }
    }

    let generic = t.genericity(Factor::A, GENERICITY_TRIALS, derive_seed(seed, "generic"));
    let commuting = if generic.max_rank == m && m > 0 {
        let inv = t.contract(Factor::A, &generic.witness)?.inverse()?;
        let normalized: Vec<LinMap<K>> = slices.iter().map(|s| s.mul(&inv)).collect::<Result<_>>()?;
        let mut ok = true;
        for i in 0..a {
            for k in i + 1..a {
                let c = normalized[i].mul(&normalized[k])?.sub(&normalized[k].mul(&normalized[i])?)?;
                ok &= c.is_zero();
            }
        }
        Some(ok)
    } else {
        None
    };

    let pass = violation.is_none() && commuting != Some(false);
    let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    let mut out = Obstruction::new(ObstructionName::Strassen, verdict, f.tag(), seed).with_witness(json!({
        "side": side,
        "y_checked": ys.len(),
        "samples": samples,
        "violation": violation,
        "commuting": commuting,
        "alpha0": (generic.max_rank == m).then(|| format_vector(f, &generic.witness)),
    }));
    if t.cubic_dim() == Some(m) && t.conciseness().concise {
        out = out.with_lower_bound(if pass { m } else { m + 1 });
    }
    Ok(out)
}

/// Strassen's commutator bound `m + ⌈rank[T(α₁)T(α₀)⁻¹, T(α₂)T(α₀)⁻¹] / 2⌉`,
/// maximised over `samples` random pairs `(α₁, α₂)`. Needs square slices
/// and a full-rank slice `T(α₀)`.
pub fn commutator_bound<K: Field>(t: &Tensor3<K>, seed: u64, samples: usize) -> Result<Obstruction> {
    let m = square_slices(t)?;
    let f = t.field();
    let generic = t.genericity(Factor::A, GENERICITY_TRIALS, derive_seed(seed, "generic"));
    if generic.max_rank != m || m == 0 {
        return Ok(Obstruction::inapplicable(
            ObstructionName::Commutator,
            f.tag(),
            seed,
            format!("no full-rank slice found (best rank {} of {m})", generic.max_rank),
        ));
    }
    let s0 = t.contract(Factor::A, &generic.witness)?;
    let inv = s0.inverse()?;
    let a = t.dim(Factor::A);
    let mut rng = rng_from_seed(derive_seed(seed, "commutator"));
    let mut best = 0;
    for _ in 0..samples.max(1) {
        let x = t.contract(Factor::A, &random_vector(f, a, &mut rng))?.mul(&inv)?;
        let y = t.contract(Factor::A, &random_vector(f, a, &mut rng))?.mul(&inv)?;
        let r = x.mul(&y)?.sub(&y.mul(&x)?)?.rank();
        best = best.max(r);
    }
    let bound = m + best.div_ceil(2);
    let verdict = if best == 0 { Verdict::Pass } else { Verdict::Fail };
    Ok(Obstruction::new(ObstructionName::Commutator, verdict, f.tag(), seed)
        .with_payload(bound)
        .with_lower_bound(bound)
        .with_witness(json!({
            "commutator_rank": best,
            "samples": samples.max(1),
            "alpha0": format_vector(f, &generic.witness),
        })))
}
