//! JSON input files: hermitian matrices and Schwartz functions.

use std::path::Path;

use hermsph::padic_cartan::{parse_k, Field, PadicHermitian, QuadExt};
use hermsph::schwartz_plancherel::SchwartzFn;
use hermsph::spherical::SpaceParams;
use num_complex::Complex64;
use serde_json::Value;

use crate::error::CliError;

fn read_json(path: &Path) -> Result<Value, CliError> {
    let s = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
    Ok(serde_json::from_str(&s)?)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Invalid(format!("missing field {key:?}")))
}

fn as_u64(v: &Value, key: &str) -> Result<u64, CliError> {
    field(v, key)?
        .as_u64()
        .ok_or_else(|| CliError::Invalid(format!("field {key:?} must be a non-negative integer")))
}

/// `{"p", "N", "m", "entries": [[{"a": "val,unit", "b": "val,unit"}, ..], ..]}`.
pub fn read_matrix(path: &Path) -> Result<PadicHermitian, CliError> {
    let v = read_json(path)?;
    let p = as_u64(&v, "p")?;
    let prec = u32::try_from(as_u64(&v, "N")?)
        .map_err(|_| CliError::Invalid("precision N too large".into()))?;
    let m = as_u64(&v, "m")? as usize;
    let f = Field::new(p, prec)?;
    let rows = field(&v, "entries")?
        .as_array()
        .ok_or_else(|| CliError::Invalid("entries must be an array of rows".into()))?;
    if m < 2 || rows.len() != m {
        return Err(CliError::Invalid(format!("expected {m} rows, got {}", rows.len())));
    }
    let mut entries = Vec::with_capacity(m);
    for row in rows {
        let row = row
            .as_array()
            .filter(|r| r.len() == m)
            .ok_or_else(|| CliError::Invalid(format!("each row must have {m} entries")))?;
        let mut out = Vec::with_capacity(m);
        for c in row {
            let part = |k: &str| -> Result<_, CliError> {
                let s = field(c, k)?
                    .as_str()
                    .ok_or_else(|| CliError::Invalid(format!("entry part {k:?} must be a string")))?;
                Ok(parse_k(f, s)?)
            };
            out.push(QuadExt::new(f, part("a")?, part("b")?));
        }
        entries.push(out);
    }
    Ok(PadicHermitian::new(f, entries)?)
}

/// `{"m", "e", "terms": [{"lambda": [..], "coeff": [re, im]}, ..]}`.
pub fn read_schwartz(path: &Path) -> Result<SchwartzFn, CliError> {
    let v = read_json(path)?;
    let m = as_u64(&v, "m")? as usize;
    let e = u32::try_from(as_u64(&v, "e")?).map_err(|_| CliError::Invalid("e too large".into()))?;
    let params = SpaceParams::new(m, e)?;
    let mut phi = SchwartzFn::zero(params);
    let terms = field(&v, "terms")?
        .as_array()
        .ok_or_else(|| CliError::Invalid("terms must be an array".into()))?;
    for t in terms {
        let lambda: Vec<i32> = serde_json::from_value(field(t, "lambda")?.clone())?;
        let coeff: [f64; 2] = serde_json::from_value(field(t, "coeff")?.clone())?;
        phi.add_term(&lambda, Complex64::new(coeff[0], coeff[1]))?;
    }
    Ok(phi)
}
