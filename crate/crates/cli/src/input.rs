//! Loading command-line inputs.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use matroid_exchange::corpus::{builtin, BUILTIN_NAMES};
use matroid_exchange::io::{self, matroid_to_json};
use matroid_exchange::matroid::MatroidData;
use matroid_exchange::{ElemSet, Matroid, MatroidError};

/// A matroid together with the bytes it was read from.
pub struct Loaded {
    pub matroid: Matroid,
    pub bytes: Vec<u8>,
}

/// Raw basis family, before validation.
pub fn load_data(spec: &str) -> Result<(MatroidData, Vec<u8>)> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let m = builtin(name)
            .ok_or_else(|| anyhow!("unknown built-in {name:?}; available: {}", BUILTIN_NAMES.join(", ")))?;
        let bytes = matroid_to_json(&m).into_bytes();
        return Ok((m.to_data(), bytes));
    }
    let text = io::read_text(Path::new(spec))?;
    let data = serde_json::from_str(&text).with_context(|| format!("{spec}: expected {{\"n\": .., \"bases\": [..]}}"))?;
    Ok((data, text.into_bytes()))
}

/// `builtin:NAME` or a path to matroid JSON.
pub fn load_matroid(spec: &str) -> Result<Loaded> {
    let (data, bytes) = load_data(spec)?;
    let matroid = Matroid::from_data(&data).map_err(|e: MatroidError| anyhow!("{spec}: {e}"))?;
    Ok(Loaded { matroid, bytes })
}

/// Parses `0,2`, `{0,2}` or `0 2`; labels are shifted down by `offset`.
pub fn parse_set(text: &str, offset: usize) -> Result<ElemSet> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = ElemSet::EMPTY;
    for tok in body.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()) {
        let e: usize = tok.parse().with_context(|| format!("bad element {tok:?} in {text:?}"))?;
        if e < offset {
            bail!("element {e} is below the first label {offset}");
        }
        let e = e - offset;
        if e >= matroid_exchange::set::MAX_ELEMENTS {
            bail!("element {e} is out of range");
        }
        if out.contains(e) {
            bail!("element {} repeated in {text:?}", e + offset);
        }
        out = out.with(e);
    }
    Ok(out)
}

pub fn parse_sets(texts: &[String], offset: usize) -> Result<Vec<ElemSet>> {
    texts.iter().map(|t| parse_set(t, offset)).collect()
}
