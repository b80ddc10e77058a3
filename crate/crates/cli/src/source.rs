//! Resolving `zoo:` specs and tensor files.

use std::path::Path;

use anyhow::{bail, Context, Result};
use borank::io::{AlgebraFile, TensorFile};
use borank::{zoo, Rationals, Tensor3};

/// A tensor read from disk or built from the zoo, with the id used in
/// reports and ledgers.
pub struct Loaded {
    pub file: TensorFile,
    pub id: String,
}

pub const ZOO_NAMES: &[&str] = &[
    "matmul",
    "unit",
    "wstate",
    "big_cw",
    "small_cw",
    "det3",
    "perm3",
    "truncated_poly",
    "cw_algebra",
    "split",
    "structure",
];

fn one(name: &str, params: &[usize]) -> Result<usize> {
    match params {
        [v] if *v >= 1 => Ok(*v),
        _ => bail!("{name} takes one positive parameter, got {params:?}"),
    }
}

fn none(name: &str, params: &[usize]) -> Result<()> {
    if !params.is_empty() {
        bail!("{name} takes no parameters, got {params:?}");
    }
    Ok(())
}

/// Builds a zoo tensor over ℚ and returns it with its canonical id.
pub fn zoo_tensor(name: &str, params: &[usize], table: Option<&Path>) -> Result<(Tensor3<Rationals>, String)> {
    let q = Rationals;
    let t = match name {
        "matmul" => {
            let (l, m, n) = match params {
                [n] => (*n, *n, *n),
                [l, m, n] => (*l, *m, *n),
                _ => bail!("matmul takes n or l, m, n, got {params:?}"),
            };
            if l == 0 || m == 0 || n == 0 {
                bail!("matmul dimensions must be positive");
            }
            return Ok((zoo::matmul(&q, l, m, n), format!("matmul:{l}:{m}:{n}")));
        }
        "unit" => zoo::unit_tensor(&q, one(name, params)?),
        "wstate" => {
            none(name, params)?;
            zoo::w_state(&q)
        }
        "big_cw" => zoo::big_cw(&q, one(name, params)?),
        "small_cw" => zoo::small_cw(&q, one(name, params)?),
        "det3" => {
            none(name, params)?;
            zoo::det3(&q)?
        }
        "perm3" => {
            none(name, params)?;
            zoo::perm3(&q)?
        }
        "truncated_poly" => zoo::truncated_poly(&q, one(name, params)?).structure_tensor(),
        "cw_algebra" => zoo::cw_algebra(&q, one(name, params)?).structure_tensor(),
        "split" => zoo::split_algebra(&q, one(name, params)?).structure_tensor(),
        "structure" => {
            let path = table.context("structure needs an algebra table file")?;
            let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let t = AlgebraFile::read(path)?.to_table(&q)?.structure_tensor();
            return Ok((t, format!("structure:{stem}")));
        }
        other => bail!(borank::Error::Malformed(format!(
            "unknown zoo tensor `{other}`; known: {}",
            ZOO_NAMES.join(", ")
        ))),
    };
    let id = std::iter::once(name.to_string()).chain(params.iter().map(|p| p.to_string())).collect::<Vec<_>>().join(":");
    Ok((t, id))
}

/// `zoo:name[:p1[:p2…]]` or a path to a tensor file.
pub fn load_tensor(spec: &str) -> Result<Loaded> {
    if let Some(rest) = spec.strip_prefix("zoo:") {
        let mut parts = rest.split(':');
        let name = parts.next().unwrap_or_default();
        let params = parts
            .map(|p| p.parse::<usize>().map_err(|_| borank::Error::Malformed(format!("bad zoo parameter `{p}` in `{spec}`"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let (t, id) = zoo_tensor(name, &params, None)?;
        let file = TensorFile::from_tensor(&t, Some(id.clone()), Some("zoo".into()));
        return Ok(Loaded { file, id });
    }
    let path = Path::new(spec);
    let file = TensorFile::read(path)?;
    let id = file
        .name
        .clone()
        .unwrap_or_else(|| path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| spec.into()));
    Ok(Loaded { file, id })
}
