//! TOML geometry files.
//!
//! ```toml
//! k = 2
//! basis_dim = 3
//! # [X_a, X_b] has `value` along X_c; indices are 0-based.
//! brackets = [[1, 2, 0, -1.0], [2, 1, 0, 1.0]]
//!
//! [[summands]]
//! label = "sphere"
//! dim = 2
//! block = "plus"
//! basis = [1, 2]
//! ```
//!
//! Basis vectors not listed under any summand belong to the isotropy
//! algebra. A Minus summand may carry `casimir = <value>`; if all do, those
//! values replace the bracket tensor in the recursion operators.

use std::path::Path;

use cohomsol_core::geometry::{validate_geometry, Bracket};
use cohomsol_core::{Block, GeometrySpec, SummandSpec};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockName {
    Plus,
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SummandEntry {
    pub label: String,
    pub dim: usize,
    pub block: BlockName,
    pub basis: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub casimir: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryFile {
    pub k: usize,
    pub basis_dim: usize,
    #[serde(default)]
    pub brackets: Vec<(usize, usize, usize, f64)>,
    pub summands: Vec<SummandEntry>,
}

impl GeometryFile {
    pub fn to_spec(&self) -> Result<GeometrySpec> {
        let mut summand_of = vec![None; self.basis_dim];
        let mut specs = Vec::with_capacity(self.summands.len());
        for (s, e) in self.summands.iter().enumerate() {
            if e.basis.len() != e.dim {
                return Err(CliError::Config(format!(
                    "summand '{}' has dim {} but {} basis vectors",
                    e.label,
                    e.dim,
                    e.basis.len()
                )));
            }
            for &b in &e.basis {
                let slot = summand_of.get_mut(b).ok_or_else(|| {
                    CliError::Config(format!("basis index {b} of '{}' is out of range", e.label))
                })?;
                if slot.is_some() {
                    return Err(CliError::Config(format!("basis index {b} is listed twice")));
                }
                *slot = Some(s);
            }
            let block = match e.block {
                BlockName::Plus => Block::Plus,
                BlockName::Minus => Block::Minus,
            };
            let mut spec = SummandSpec::new(e.label.clone(), e.dim, block);
            if let Some(c) = e.casimir {
                spec = spec.with_casimir(c);
            }
            specs.push(spec);
        }
        let brackets = self
            .brackets
            .iter()
            .map(|&(a, b, c, value)| Bracket { a, b, c, value })
            .collect();
        Ok(GeometrySpec::new(self.k, specs, summand_of, brackets)?)
    }

    pub fn from_spec(geom: &GeometrySpec) -> Self {
        let summands = geom
            .summands()
            .iter()
            .enumerate()
            .map(|(s, spec)| SummandEntry {
                label: spec.label.clone(),
                dim: spec.dim,
                block: match spec.block {
                    Block::Plus => BlockName::Plus,
                    Block::Minus => BlockName::Minus,
                },
                basis: (0..geom.basis_dim())
                    .filter(|&b| geom.summand_of(b) == Some(s))
                    .collect(),
                casimir: spec.casimir_eigenvalue,
            })
            .collect();
        Self {
            k: geom.k(),
            basis_dim: geom.basis_dim(),
            brackets: geom
                .brackets()
                .iter()
                .map(|b| (b.a, b.b, b.c, b.value))
                .collect(),
            summands,
        }
    }
}

/// Parses and structurally validates a geometry.
pub fn parse(text: &str, path: &Path) -> Result<GeometrySpec> {
    let file: GeometryFile = toml::from_str(text).map_err(|source| CliError::Toml {
        path: path.to_path_buf(),
        source,
    })?;
    let geom = file.to_spec()?;
    let report = validate_geometry(&geom);
    if !report.passed() {
        let failed: Vec<String> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| {
                format!(
                    "{} (deviation {:.3e}): {}",
                    c.name, c.max_deviation, c.detail
                )
            })
            .collect();
        return Err(CliError::Config(format!(
            "geometry {} is invalid: {}",
            path.display(),
            failed.join("; ")
        )));
    }
    Ok(geom)
}

pub fn load(path: &Path) -> Result<GeometrySpec> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse(&text, path)
}

pub fn to_toml(geom: &GeometrySpec) -> String {
    toml::to_string(&GeometryFile::from_spec(geom)).expect("geometry serializes")
}
