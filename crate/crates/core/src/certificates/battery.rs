use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use super::{
    commutator_bound, compute_111_algebra, end_closed_test, format_vector, strassen_test, symmetry_lie_dims,
    test_111_minimal, test_111_twofactor, Obstruction, ObstructionName, Verdict,
};
use crate::error::{Error, Result};
use crate::field::{Field, FieldTag, Rationals};
use crate::koszul::koszul_bound;
use crate::random::derive_seed;
use crate::tensor::{permute_factors, Conciseness, Factor, Tensor3};

/// Koszul maps with more columns than this are not recomputed over ℚ.
const EXACT_KOSZUL_MAX_COLS: usize = 400;

/// A group of obstructions run together by the battery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Strassen,
    Commutator,
    EndClosed,
    #[serde(rename = "111")]
    T111,
    Symlie,
    Alg111,
    Koszul,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Strassen,
        Method::Commutator,
        Method::EndClosed,
        Method::T111,
        Method::Symlie,
        Method::Alg111,
        Method::Koszul,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Strassen => "strassen",
            Method::Commutator => "commutator",
            Method::EndClosed => "end_closed",
            Method::T111 => "111",
            Method::Symlie => "symlie",
            Method::Alg111 => "alg111",
            Method::Koszul => "koszul",
        }
    }

    fn produces(self, name: ObstructionName) -> bool {
        use ObstructionName as N;
        matches!(
            (self, name),
            (Method::Strassen, N::Strassen)
                | (Method::Commutator, N::Commutator)
                | (Method::EndClosed, N::EndClosed)
                | (Method::T111, N::T111Triple | N::T111TwoFactor)
                | (Method::Symlie, N::SymLie)
                | (Method::Alg111, N::Alg111Abundance)
                | (Method::Koszul, N::Koszul)
        )
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| {
                let known: Vec<_> = Method::ALL.iter().map(|m| m.name()).collect();
                Error::InvalidArgument(format!("unknown method {s:?}; known: {}", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatteryConfig {
    pub methods: Vec<Method>,
    /// Random `Y` slices for Strassen's equations and pairs for the commutator.
    pub samples: usize,
    /// Random restrictions per Koszul flattening.
    pub retries: usize,
    /// Largest Koszul degree tried; all feasible degrees when `None`.
    pub p_max: Option<usize>,
    /// Border rank tested by the numeric methods; defaults to the largest dimension.
    pub target_r: Option<usize>,
}

impl Default for BatteryConfig {
    fn default() -> Self {
        BatteryConfig { methods: Method::ALL.to_vec(), samples: 50, retries: 3, p_max: None, target_r: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericityRecord {
    pub factor: Factor,
    pub max_rank: usize,
    pub full_rank: usize,
    pub generic: bool,
    pub witness: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub dims: [usize; 3],
    pub field: FieldTag,
    pub seed: u64,
    pub conciseness: Conciseness,
    pub genericity: Vec<GenericityRecord>,
    /// At least two of the three genericity conditions hold.
    pub binding: bool,
    pub target_r: usize,
    pub obstructions: Vec<Obstruction>,
    /// A minimal-border-rank obstruction failed on a concise cubic tensor.
    pub minimal_obstruction_failed: bool,
    pub aggregate_lower_bound: usize,
}

impl BatteryReport {
    pub fn by_name(&self, name: ObstructionName) -> impl Iterator<Item = &Obstruction> {
        self.obstructions.iter().filter(move |o| o.name == name)
    }

    /// True when every applicable obstruction passed.
    pub fn all_pass(&self) -> bool {
        self.obstructions.iter().all(|o| o.verdict != Verdict::Fail)
    }
}

fn side_to_a<K: Field>(t: &Tensor3<K>, side: Factor) -> Tensor3<K> {
    match side {
        Factor::A => t.clone(),
        Factor::B => permute_factors(t, [Factor::B, Factor::A, Factor::C]).expect("permutation"),
        Factor::C => permute_factors(t, [Factor::C, Factor::B, Factor::A]).expect("permutation"),
    }
}

fn square_sides<K: Field>(t: &Tensor3<K>) -> Vec<Factor> {
    Factor::ALL
        .into_iter()
        .filter(|&s| {
            let (x, y) = s.others();
            t.dim(x) == t.dim(y)
        })
        .collect()
}

fn tag_side(mut o: Obstruction, side: Factor) -> Obstruction {
    if let Some(w) = o.witness.as_object_mut() {
        w.insert("side".into(), json!(side));
    }
    o
}

fn run_method<K: Field>(method: Method, t: &Tensor3<K>, seed: u64, cfg: &BatteryConfig, target: usize) -> Vec<Obstruction> {
    let tag = t.field().tag();
    let seed = derive_seed(seed, method.name());
    match method {
        Method::Strassen | Method::EndClosed => {
            let name = if method == Method::Strassen { ObstructionName::Strassen } else { ObstructionName::EndClosed };
            let sides = square_sides(t);
            if sides.is_empty() {
                return vec![Obstruction::inapplicable(name, tag, seed, "no factor has square slices")];
            }
            sides
                .into_iter()
                .map(|side| {
                    let s = derive_seed(seed, &side.to_string());
                    let res = if method == Method::Strassen {
                        strassen_test(t, side, s, cfg.samples)
                    } else {
                        end_closed_test(&side_to_a(t, side), s)
                    };
                    match res {
                        Ok(o) => tag_side(o, side),
                        Err(e) => Obstruction::inapplicable(name, tag, s, e.to_string()),
                    }
                })
                .collect()
        }
        Method::Commutator => {
            let mut o = match commutator_bound(t, seed, cfg.samples) {
                Ok(o) => o,
                Err(e) => Obstruction::inapplicable(ObstructionName::Commutator, tag, seed, e.to_string()),
            };
            if let Some(b) = o.payload {
                o.verdict = if b as usize > target { Verdict::Fail } else { Verdict::Pass };
            }
            vec![o]
        }
        Method::T111 => {
            let mut a = test_111_minimal(t);
            let mut b = test_111_twofactor(t);
            a.seed = seed;
            b.seed = seed;
            vec![a, b]
        }
        Method::Symlie => {
            let mut o = symmetry_lie_dims(t).1;
            o.seed = seed;
            vec![o]
        }
        Method::Alg111 => {
            let mut o = compute_111_algebra(t).1;
            o.seed = seed;
            vec![o]
        }
        Method::Koszul => koszul_sweep(t, seed, cfg, target),
    }
}

fn koszul_sweep<K: Field>(t: &Tensor3<K>, seed: u64, cfg: &BatteryConfig, target: usize) -> Vec<Obstruction> {
    let tag = t.field().tag();
    let largest = t.dims().into_iter().max().unwrap_or(0);
    let feasible = largest.saturating_sub(1) / 2;
    let p_max = cfg.p_max.map_or(feasible, |p| p.min(feasible));
    let mut out = Vec::new();
    for p in 0..=p_max {
        let s = derive_seed(seed, &format!("p{p}"));
        let mut best = None;
        for side in Factor::ALL {
            if p > 0 && t.dim(side) < 2 * p + 1 {
                continue;
            }
            if let Ok(kb) = koszul_bound(t, p, side, derive_seed(s, &side.to_string()), cfg.retries) {
                if best.as_ref().is_none_or(|b: &crate::koszul::KoszulBound| kb.bound > b.bound) {
                    best = Some(kb);
                }
            }
        }
        let Some(kb) = best else { continue };
        let verdict = if kb.bound > target { Verdict::Fail } else { Verdict::Pass };
        out.push(
            Obstruction::new(ObstructionName::Koszul, verdict, tag, s)
                .with_payload(kb.bound)
                .with_lower_bound(kb.bound)
                .with_witness(json!({
                    "p": kb.p,
                    "side": kb.side,
                    "rank": kb.rank,
                    "rank_one_constant": kb.constant,
                    "matrix_shape": [kb.shape.0, kb.shape.1],
                    "retries": kb.retries,
                })),
        );
    }
    if out.is_empty() {
        out.push(Obstruction::inapplicable(ObstructionName::Koszul, tag, seed, "no feasible degree"));
    }
    out
}

/// Runs the selected obstructions (in parallel, each with its own derived
/// seed) and aggregates a border-rank lower bound.
pub fn minimal_br_battery<K: Field>(t: &Tensor3<K>, seed: u64, cfg: &BatteryConfig) -> BatteryReport {
    let f = t.field();
    let conciseness = t.conciseness();
    let genericity: Vec<GenericityRecord> = Factor::ALL
        .into_iter()
        .map(|factor| {
            let g = t.genericity(factor, 8, derive_seed(seed, &format!("genericity {factor}")));
            GenericityRecord {
                factor,
                max_rank: g.max_rank,
                full_rank: g.full_rank,
                generic: g.is_generic(),
                witness: format_vector(f, &g.witness),
            }
        })
        .collect();
    let binding = genericity.iter().filter(|g| g.generic).count() >= 2;
    let largest = t.dims().into_iter().max().unwrap_or(0);
    let target = cfg.target_r.unwrap_or(largest);

    let mut methods = cfg.methods.clone();
    methods.sort();
    methods.dedup();
    let results: Vec<Vec<Obstruction>> = methods
        .par_iter()
        .map(|&m| {
            let start = Instant::now();
            let mut records = run_method(m, t, seed, cfg, target);
            let ms = start.elapsed().as_millis() as u64;
            for r in &mut records {
                r.wall_time_ms = ms;
            }
            records
        })
        .collect();
    let obstructions: Vec<Obstruction> = results.into_iter().flatten().collect();
    finish(t.dims(), f.tag(), seed, conciseness, genericity, binding, target, obstructions)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    dims: [usize; 3],
    field: FieldTag,
    seed: u64,
    conciseness: Conciseness,
    genericity: Vec<GenericityRecord>,
    binding: bool,
    target_r: usize,
    obstructions: Vec<Obstruction>,
) -> BatteryReport {
    let concise_cubic = conciseness.concise && dims[0] == dims[1] && dims[1] == dims[2];
    let minimal_obstruction_failed =
        concise_cubic && obstructions.iter().any(|o| o.name.is_minimal_test() && o.failed());
    let mut aggregate = conciseness.slice_dims.into_iter().max().unwrap_or(0);
    for o in &obstructions {
        if let Some(b) = o.lower_bound {
            aggregate = aggregate.max(b as usize);
        }
    }
    if minimal_obstruction_failed {
        aggregate = aggregate.max(dims[0] + 1);
    }
    BatteryReport {
        dims,
        field,
        seed,
        conciseness,
        genericity,
        binding,
        target_r,
        obstructions,
        minimal_obstruction_failed,
        aggregate_lower_bound: aggregate,
    }
}

/// Recomputes every FAIL verdict of `report` over ℚ on `exact`, storing the
/// result in `exact_recheck`. Koszul maps wider than a fixed size are left
/// unchecked and marked in the witness.
pub fn recheck_failures(report: &mut BatteryReport, exact: &Tensor3<Rationals>, cfg: &BatteryConfig) {
    let target = report.target_r;
    for method in Method::ALL {
        let failing = report
            .obstructions
            .iter()
            .any(|o| method.produces(o.name) && o.failed());
        if !failing {
            continue;
        }
        if method == Method::Koszul {
            for o in report.obstructions.iter_mut().filter(|o| o.name == ObstructionName::Koszul && o.failed()) {
                let cols = o.witness["matrix_shape"][1].as_u64().unwrap_or(u64::MAX) as usize;
                if cols > EXACT_KOSZUL_MAX_COLS {
                    o.witness["exact_recheck_skipped"] = json!(format!("map has {cols} columns"));
                    continue;
                }
                let p = o.witness["p"].as_u64().unwrap_or(0) as usize;
                let side: Factor = serde_json::from_value(o.witness["side"].clone()).unwrap_or(Factor::A);
                o.exact_recheck = koszul_bound(exact, p, side, o.seed, cfg.retries)
                    .ok()
                    .map(|kb| if kb.bound > target { Verdict::Fail } else { Verdict::Pass });
            }
            continue;
        }
        let rerun = run_method(method, exact, report.seed, cfg, target);
        let originals = report.obstructions.iter_mut().filter(|o| method.produces(o.name));
        for (o, r) in originals.zip(rerun) {
            if o.failed() {
                o.exact_recheck = Some(r.verdict);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::random::{random_vector, rng_from_seed};
    use crate::zoo;

    fn quick() -> BatteryConfig {
        BatteryConfig { samples: 10, retries: 2, p_max: Some(2), ..BatteryConfig::default() }
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("flag".parse::<Method>().is_err());
        assert_eq!(serde_json::to_string(&Method::T111).unwrap(), "\"111\"");
    }

    #[test]
    fn big_cw_passes_everything() {
        let f = PrimeField::default();
        let r = minimal_br_battery(&zoo::big_cw(&f, 2), 7, &quick());
        assert!(r.all_pass(), "{:#?}", r.obstructions);
        assert!(!r.minimal_obstruction_failed);
        assert_eq!(r.aggregate_lower_bound, 4);
        assert!(r.binding);
    }

    #[test]
    fn matmul_two_gets_six() {
        let f = PrimeField::default();
        let r = minimal_br_battery(&zoo::matmul(&f, 2, 2, 2), 1, &quick());
        assert_eq!(r.aggregate_lower_bound, 6);
        assert!(r.minimal_obstruction_failed);
    }

    #[test]
    fn random_tensor_fails_something() {
        let f = PrimeField::default();
        let mut rng = rng_from_seed(77);
        let t = Tensor3::new(&f, [4, 4, 4], random_vector(&f, 64, &mut rng)).unwrap();
        let r = minimal_br_battery(&t, 3, &quick());
        assert!(r.minimal_obstruction_failed);
        assert!(r.aggregate_lower_bound >= 5);
    }

    #[test]
    fn deterministic_modulo_wall_time() {
        let f = PrimeField::default();
        let t = zoo::small_cw(&f, 3);
        let strip = |mut r: BatteryReport| {
            for o in &mut r.obstructions {
                o.wall_time_ms = 0;
            }
            r
        };
        let a = strip(minimal_br_battery(&t, 42, &quick()));
        let b = strip(minimal_br_battery(&t, 42, &quick()));
        assert_eq!(a, b);
    }

    #[test]
    fn method_selection_and_inapplicable_records() {
        let f = PrimeField::default();
        let cfg = BatteryConfig { methods: vec![Method::Koszul], ..quick() };
        let r = minimal_br_battery(&zoo::matmul(&f, 2, 2, 2), 1, &cfg);
        assert!(r.obstructions.iter().all(|o| o.name == ObstructionName::Koszul));
        let rect = minimal_br_battery(&zoo::matmul(&f, 1, 2, 3), 1, &quick());
        assert!(rect.by_name(ObstructionName::T111Triple).all(|o| o.verdict == Verdict::Inapplicable));
    }

    #[test]
    fn exact_recheck_confirms_failures() {
        let q = Rationals;
        let exact = zoo::matmul(&q, 2, 2, 2);
        let f = PrimeField::default();
        let mut r = minimal_br_battery(&exact.convert(&f).unwrap(), 1, &quick());
        recheck_failures(&mut r, &exact, &quick());
        let failed: Vec<_> = r.obstructions.iter().filter(|o| o.failed()).collect();
        assert!(!failed.is_empty());
        for o in failed {
            assert_eq!(o.exact_recheck, Some(Verdict::Fail), "{o:?}");
        }
        assert!(r.obstructions.iter().filter(|o| !o.failed()).all(|o| o.exact_recheck.is_none()));
    }
}
