use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum BoundKind {
    Lower,
    Upper,
}

/// A recorded border-rank bound for a named tensor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BrFact {
    pub tensor_id: String,
    pub kind: BoundKind,
    pub value: u64,
    /// Certificate reference or literature tag.
    pub provenance: String,
}

impl BrFact {
    pub fn lower(id: impl Into<String>, value: u64, provenance: impl Into<String>) -> Self {
        BrFact { tensor_id: id.into(), kind: BoundKind::Lower, value, provenance: provenance.into() }
    }

    pub fn upper(id: impl Into<String>, value: u64, provenance: impl Into<String>) -> Self {
        BrFact { tensor_id: id.into(), kind: BoundKind::Upper, value, provenance: provenance.into() }
    }
}

/// `product = left ⊠ right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KronProduct {
    pub product: String,
    pub left: String,
    pub right: String,
}

/// Identifier used for the `k`-th Kronecker power of `base`.
pub fn power_id(base: &str, k: u32) -> String {
    if k == 1 {
        base.to_string()
    } else {
        format!("{base}^{k}")
    }
}

/// Border-rank facts plus the Kronecker products relating tensor ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    #[serde(default)]
    facts: Vec<BrFact>,
    #[serde(default)]
    products: Vec<KronProduct>,
}

impl Ledger {
    pub fn new() -> Self {
        Ledger::default()
    }

    pub fn facts(&self) -> &[BrFact] {
        &self.facts
    }

    pub fn products(&self) -> &[KronProduct] {
        &self.products
    }

    pub fn facts_for<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a BrFact> + 'a {
        self.facts.iter().filter(move |f| f.tensor_id == id)
    }

    /// Best known lower bound.
    pub fn lower(&self, id: &str) -> Option<u64> {
        self.facts_for(id).filter(|f| f.kind == BoundKind::Lower).map(|f| f.value).max()
    }

    /// Best known upper bound.
    pub fn upper(&self, id: &str) -> Option<u64> {
        self.facts_for(id).filter(|f| f.kind == BoundKind::Upper).map(|f| f.value).min()
    }

    pub fn register_product(&mut self, product: &str, left: &str, right: &str) {
        let p = KronProduct { product: product.into(), left: left.into(), right: right.into() };
        if !self.products.contains(&p) {
            self.products.push(p);
        }
    }

    /// Registers `base^j = base^{j-1} ⊠ base` for `j = 2..=k`.
    pub fn register_power(&mut self, base: &str, k: u32) {
        for j in 2..=k {
            self.register_product(&power_id(base, j), &power_id(base, j - 1), base);
        }
    }

    /// Adds facts, rejecting the whole batch if any tensor ends up with a
    /// lower bound above an upper bound. Exact duplicates are dropped.
    pub fn add_all(&mut self, facts: impl IntoIterator<Item = BrFact>) -> Result<()> {
        let mut next = self.clone();
        for f in facts {
            if !next.facts.contains(&f) {
                next.facts.push(f);
            }
        }
        next.check_consistency()?;
        *self = next;
        Ok(())
    }

    pub fn add(&mut self, fact: BrFact) -> Result<()> {
        self.add_all([fact])
    }

    pub fn check_consistency(&self) -> Result<()> {
        let mut bounds: BTreeMap<&str, (Option<&BrFact>, Option<&BrFact>)> = BTreeMap::new();
        for f in &self.facts {
            let e = bounds.entry(&f.tensor_id).or_default();
            match f.kind {
                BoundKind::Lower if e.0.is_none_or(|b| f.value > b.value) => e.0 = Some(f),
                BoundKind::Upper if e.1.is_none_or(|b| f.value < b.value) => e.1 = Some(f),
                _ => {}
            }
        }
        for (id, (lo, up)) in bounds {
            if let (Some(lo), Some(up)) = (lo, up) {
                if lo.value > up.value {
                    return Err(Error::Consistency(format!(
                        "{id}: lower bound {} ({}) exceeds upper bound {} ({})",
                        lo.value, lo.provenance, up.value, up.provenance
                    )));
                }
            }
        }
        Ok(())
    }

    /// Closes upper bounds under `R̲(T⊠T') ≤ R̲(T)·R̲(T')` for the registered
    /// products. A derived fact is recorded only when it improves the best
    /// known upper bound, so closing twice changes nothing. Lower bounds are
    /// never propagated. Returns the newly derived facts.
    pub fn close(&mut self) -> Result<Vec<BrFact>> {
        let mut next = self.clone();
        let mut derived = Vec::new();
        loop {
            let mut changed = false;
            for p in &self.products {
                let (Some(l), Some(r)) = (next.upper(&p.left), next.upper(&p.right)) else { continue };
                let Some(v) = l.checked_mul(r) else { continue };
                if next.upper(&p.product).is_none_or(|u| v < u) {
                    let f = BrFact::upper(&p.product, v, format!("kron({}, {})", p.left, p.right));
                    next.facts.push(f.clone());
                    derived.push(f);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        next.check_consistency()?;
        *self = next;
        Ok(derived)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let ledger: Ledger =
            serde_json::from_str(&text).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        ledger.check_consistency()?;
        Ok(ledger)
    }

    /// Loads the ledger at `path`, or an empty one if the file is missing.
    pub fn load_or_default(path: &Path) -> Result<Self> {
        if path.exists() {
            Ledger::load(path)
        } else {
            Ok(Ledger::new())
        }
    }

    /// Writes through a temporary file and a rename.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).expect("ledger serializes");
        let tmp = path.with_extension("json.tmp");
        fs::write(&tmp, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
        fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }
}

/// Closes `facts` under the given Kronecker products.
pub fn kron_ledger_update(facts: &[BrFact], products: &[KronProduct]) -> Result<Vec<BrFact>> {
    let mut ledger = Ledger::new();
    for p in products {
        ledger.register_product(&p.product, &p.left, &p.right);
    }
    ledger.add_all(facts.iter().cloned())?;
    ledger.close()?;
    Ok(ledger.facts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_small_cw_bound() {
        let mut l = Ledger::new();
        l.register_power("small_cw:2", 2);
        l.add(BrFact::upper("small_cw:2", 4, "certificate")).unwrap();
        l.add(BrFact::lower("small_cw:2", 4, "koszul p=1")).unwrap();
        let derived = l.close().unwrap();
        assert_eq!(derived, vec![BrFact::upper("small_cw:2^2", 16, "kron(small_cw:2, small_cw:2)")]);
        assert_eq!(l.upper("small_cw:2^2"), Some(16));
        assert_eq!(l.lower("small_cw:2^2"), None);
    }

    #[test]
    fn sharper_literature_fact_wins() {
        let mut l = Ledger::new();
        l.register_power("skew", 2);
        l.add(BrFact::upper("skew", 5, "literature")).unwrap();
        l.close().unwrap();
        assert_eq!(l.upper("skew^2"), Some(25));
        l.add(BrFact::upper("skew^2", 17, "literature")).unwrap();
        assert!(l.close().unwrap().is_empty());
        assert_eq!(l.upper("skew^2"), Some(17));
    }

    #[test]
    fn closure_is_idempotent_and_chains() {
        let mut l = Ledger::new();
        l.register_power("t", 4);
        l.register_product("t^2 x u", "t^2", "u");
        l.add_all([BrFact::upper("t", 3, "a"), BrFact::upper("u", 2, "b")]).unwrap();
        l.close().unwrap();
        assert_eq!(l.upper("t^4"), Some(81));
        assert_eq!(l.upper("t^2 x u"), Some(18));
        let snapshot = l.clone();
        assert!(l.close().unwrap().is_empty());
        assert_eq!(l, snapshot);
    }

    #[test]
    fn inconsistency_is_rejected_and_rolled_back() {
        let mut l = Ledger::new();
        l.add(BrFact::upper("t", 4, "cert")).unwrap();
        let err = l.add(BrFact::lower("t", 5, "bad")).unwrap_err();
        assert!(matches!(err, Error::Consistency(_)));
        assert_eq!(l.facts().len(), 1);

        let mut l = Ledger::new();
        l.register_power("t", 2);
        l.add_all([BrFact::upper("t", 2, "cert"), BrFact::lower("t^2", 5, "bound")]).unwrap();
        assert!(l.close().is_err());
        assert_eq!(l.upper("t^2"), None);
    }

    #[test]
    fn round_trips_through_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ledger.json");
        let mut l = Ledger::new();
        l.register_power("w", 3);
        l.add(BrFact::upper("w", 2, "cert")).unwrap();
        l.close().unwrap();
        l.save(&path).unwrap();
        assert_eq!(Ledger::load(&path).unwrap(), l);
        let text = fs::read_to_string(&path).unwrap();
        assert!(text.contains("\"UPPER\""));
        assert_eq!(Ledger::load_or_default(&dir.path().join("missing.json")).unwrap(), Ledger::new());
    }

    #[test]
    fn free_function_matches_ledger() {
        let products = [KronProduct { product: "t^2".into(), left: "t".into(), right: "t".into() }];
        let out = kron_ledger_update(&[BrFact::upper("t", 4, "c"), BrFact::lower("t", 3, "k")], &products).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|f| f.kind == BoundKind::Upper || f.tensor_id == "t"));
    }
}
