use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use borank::certificates::{minimal_br_battery, recheck_failures, BatteryConfig, BatteryReport, Method};
use borank::exponent::{bini_bound, cw_omega_bound, skew_cw_omega_bound, BoundKind, BrFact, Ledger, OmegaBound};
use borank::io::{sha256_hex, CertificateReport, DecompositionFile, TensorFile, TensorIdentity};
use borank::{Field, FieldTag, PrimeField, Rationals, Tensor3};

use crate::source::{load_tensor, zoo_tensor};
use crate::{
    AnalyzeArgs, Cli, Command, KindArg, LedgerAction, LedgerArgs, OmegaArgs, OmegaFormula, VerifyArgs, ZooArgs,
    EXIT_REJECTED,
};

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Zoo(z) => zoo(z),
        Command::VerifyDecomposition(v) => verify(v),
        Command::Ledger(l) => ledger(l),
        Command::Omega(o) => omega(o),
    }
}

fn parse_field(s: &str) -> Result<FieldTag> {
    Ok(s.parse::<FieldTag>()?)
}

/// Explicit flag, else the file's prime, else the default prime.
fn analysis_field(flag: Option<&str>, file: FieldTag) -> Result<FieldTag> {
    match (flag, file) {
        (Some(s), _) => parse_field(s),
        (None, FieldTag::Prime(p)) => Ok(FieldTag::Prime(p)),
        (None, FieldTag::Rational) => Ok(FieldTag::default()),
    }
}

fn battery_over<K: Field>(
    f: &K,
    file: &TensorFile,
    seed: u64,
    cfg: &BatteryConfig,
    exact: Option<&Tensor3<Rationals>>,
) -> Result<BatteryReport> {
    let t = file.to_tensor(f)?;
    let mut report = minimal_br_battery(&t, seed, cfg);
    if let Some(e) = exact {
        recheck_failures(&mut report, e, cfg);
    }
    Ok(report)
}

fn analyze(a: AnalyzeArgs) -> Result<i32> {
    let loaded = load_tensor(&a.tensor)?;
    let id = a.id.clone().unwrap_or(loaded.id);
    let file = loaded.file;
    let field = analysis_field(a.field.as_deref(), file.field)?;
    let methods = match &a.methods {
        None => Method::ALL.to_vec(),
        Some(names) => names.iter().map(|s| s.parse::<Method>()).collect::<borank::Result<_>>()?,
    };
    let cfg = BatteryConfig { methods, samples: a.samples, retries: a.retries, p_max: a.p_max, target_r: a.target_r };
    let exact = if a.exact_recheck {
        Some(file.to_rational_tensor().context("--exact-recheck needs a tensor given over the rationals")?)
    } else {
        None
    };
    let battery = match field {
        FieldTag::Rational => battery_over(&Rationals, &file, a.seed, &cfg, exact.as_ref())?,
        FieldTag::Prime(p) => battery_over(&PrimeField::new(p)?, &file, a.seed, &cfg, exact.as_ref())?,
    };

    let mut ledger = a.ledger.as_deref().map(Ledger::load_or_default).transpose()?;
    let uppers: Vec<BrFact> = ledger
        .as_ref()
        .map(|l| l.facts_for(&id).filter(|f| f.kind == BoundKind::Upper).cloned().collect())
        .unwrap_or_default();
    let identity = TensorIdentity { id: id.clone(), hash: file.content_hash()?, dims: file.dims, field: file.field };
    let report = CertificateReport::new(identity, cfg, battery, uppers);

    if let Some(out) = &a.out {
        report.write(out)?;
    }
    if a.json {
        println!("{}", report.to_json_string());
    } else {
        print!("{}", report.summary());
    }
    if let (Some(ledger), Some(path)) = (ledger.as_mut(), a.ledger.as_deref()) {
        ledger.add_all(report.facts.iter().cloned())?;
        ledger.close()?;
        ledger.save(path)?;
    }
    Ok(0)
}

fn need(v: Option<usize>, flag: &str, name: &str) -> Result<usize> {
    v.with_context(|| borank::Error::Malformed(format!("{name} needs --{flag}")))
}

fn zoo(z: ZooArgs) -> Result<i32> {
    let params = match z.name.as_str() {
        "matmul" => match (z.l, z.m, z.n) {
            (None, None, Some(n)) => vec![n, n, n],
            (l, m, n) => vec![need(l, "l", "matmul")?, need(m, "m", "matmul")?, need(n, "n", "matmul")?],
        },
        "unit" | "split" => vec![need(z.m, "m", &z.name)?],
        "big_cw" | "small_cw" | "cw_algebra" => vec![need(z.q, "q", &z.name)?],
        "truncated_poly" => vec![need(z.k, "k", &z.name)?],
        _ => vec![],
    };
    let (t, id) = zoo_tensor(&z.name, &params, z.table.as_deref())?;
    let file = TensorFile::from_tensor(&t, Some(id), Some("borank zoo".into()));
    match &z.out {
        Some(path) => file.write(path)?,
        None => println!("{}", file.to_json_string()),
    }
    Ok(0)
}

fn verify_over<K: Field>(f: &K, file: &TensorFile, cert: &DecompositionFile) -> Result<bool> {
    Ok(cert.to_field(f)?.verify(&file.to_tensor(f)?)?)
}

fn verify(v: VerifyArgs) -> Result<i32> {
    let loaded = load_tensor(&v.tensor)?;
    let id = v.id.clone().unwrap_or(loaded.id);
    let bytes = fs::read(&v.certificate).map_err(|e| borank::Error::Io(format!("{}: {e}", v.certificate.display())))?;
    let cert = DecompositionFile::read(&v.certificate)?;
    let field = match &v.field {
        Some(s) => parse_field(s)?,
        None => loaded.file.field,
    };
    let ok = match field {
        FieldTag::Rational => verify_over(&Rationals, &loaded.file, &cert)?,
        FieldTag::Prime(p) => verify_over(&PrimeField::new(p)?, &loaded.file, &cert)?,
    };
    let r = cert.terms.len();
    if !ok {
        println!("FAIL: the {r}-term decomposition does not converge to {id} at order h = {}", cert.h);
        return Ok(EXIT_REJECTED);
    }
    let name = v.certificate.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let provenance = format!("decomposition {name} sha256:{} h={} over {field}", &sha256_hex(&bytes)[..12], cert.h);
    let fact = BrFact::upper(&id, r as u64, provenance);
    println!("PASS: border rank of {id} is at most {r} (h = {}, over {field})", cert.h);
    println!("{}", serde_json::to_string(&fact)?);
    if let Some(path) = &v.ledger {
        let mut ledger = Ledger::load_or_default(path)?;
        ledger.add(fact)?;
        ledger.close()?;
        ledger.save(path)?;
    }
    Ok(0)
}

fn print_ledger(ledger: &Ledger, id: Option<&str>) {
    for f in ledger.facts().iter().filter(|f| id.is_none_or(|id| f.tensor_id == id)) {
        let kind = match f.kind {
            BoundKind::Lower => "≥",
            BoundKind::Upper => "≤",
        };
        println!("{} {kind} {}    [{}]", f.tensor_id, f.value, f.provenance);
    }
    if id.is_none() {
        for p in ledger.products() {
            println!("{} = {} ⊠ {}", p.product, p.left, p.right);
        }
    }
}

fn ledger(l: LedgerArgs) -> Result<i32> {
    let path = l.path.as_path();
    let mut ledger = Ledger::load_or_default(path)?;
    match l.action {
        LedgerAction::Show { id } => {
            print_ledger(&ledger, id.as_deref());
            return Ok(0);
        }
        LedgerAction::Add { id, kind, value, provenance } => {
            let fact = match kind {
                KindArg::Lower => BrFact::lower(id, value, provenance),
                KindArg::Upper => BrFact::upper(id, value, provenance),
            };
            ledger.add(fact)?;
        }
        LedgerAction::Product { product, left, right } => ledger.register_product(&product, &left, &right),
        LedgerAction::Power { base, k } => ledger.register_power(&base, k),
        LedgerAction::Close => {
            for f in ledger.close()? {
                println!("derived {} ≤ {} [{}]", f.tensor_id, f.value, f.provenance);
            }
        }
        LedgerAction::Merge { reports } => {
            for r in &reports {
                ledger.add_all(CertificateReport::read(r)?.facts)?;
            }
            ledger.close()?;
        }
    }
    ledger.save(path)?;
    Ok(0)
}

fn describe(b: &OmegaBound) -> Result<String> {
    let mut s = format!(
        "ω ≤ {b}  ({}: base {}, k {}, r {}{})",
        serde_json::to_value(b.formula)?.as_str().unwrap_or_default(),
        b.inputs.base,
        b.inputs.k,
        b.inputs.r_upper,
        if b.exact { ", exact" } else { "" }
    );
    if b.non_improving {
        s += "  [non-improving]";
    }
    Ok(s)
}

fn ledger_upper(path: &Path, id: &str) -> Result<u64> {
    let ledger = Ledger::load(path)?;
    ledger.upper(id).with_context(|| borank::Error::InvalidArgument(format!("no upper bound for {id} in the ledger")))
}

fn omega(o: OmegaArgs) -> Result<i32> {
    let bound = match o.formula {
        OmegaFormula::Bini { n, r } => bini_bound(n, r)?,
        OmegaFormula::Cw { q, k, r, skew, ledger, id } => {
            let r = match (r, ledger, id) {
                (Some(r), _, _) => r,
                (None, Some(path), Some(id)) => ledger_upper(&path, &id)?,
                _ => bail!(borank::Error::InvalidArgument("give --r, or --ledger with --id".into())),
            };
            if skew {
                skew_cw_omega_bound(q, k, r)?
            } else {
                cw_omega_bound(q, k, r)?
            }
        }
    };
    println!("{}", describe(&bound)?);
    Ok(0)
}
