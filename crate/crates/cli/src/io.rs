//! File loading and argument parsing helpers.

use std::fs;
use std::path::Path;

use lks_core::dense::SparseDecomposition;
use lks_core::graph::{Graph, VertexSet};
use lks_core::rational::parse_rational;
use lks_core::{Error, Rational, Result};
use serde::de::DeserializeOwned;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    Graph::parse_text(&read(path)?)
}

pub fn load_nabla(path: &Path) -> Result<SparseDecomposition> {
    SparseDecomposition::from_json(&read(path)?)
}

pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_str(&read(path)?)?)
}

/// Clap parser for exact rationals.
pub fn rational_arg(text: &str) -> std::result::Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

/// Parses `"1,4,7"`, `"0..5"` or a mix such as `"0..3,9"`.
pub fn vertex_list(text: &str) -> std::result::Result<VertexSet, String> {
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| s.trim().parse::<usize>().map_err(|_| format!("not a vertex id: {s:?}"));
        match part.split_once("..") {
            Some((lo, hi)) => out.extend(num(lo)?..num(hi)?),
            None => out.push(num(part)?),
        }
    }
    Ok(out.into_iter().collect())
}

/// Parses `name=value` with a rational value.
pub fn knob_arg(text: &str) -> std::result::Result<(String, Rational), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("expected name=value, got {text:?}"))?;
    Ok((name.trim().to_string(), rational_arg(value)?))
}
