//! Run configuration: a TOML file, command-line overrides, and resolution
//! into library inputs.

use std::path::{Path, PathBuf};

use cohomsol_core::flow::{ClosedForm, FlowOptions};
use cohomsol_core::ivp::InitialData;
use cohomsol_core::{Block, DiagonalTensor, GeometrySpec};
use serde::Deserialize;

use crate::builtin::{self, Params};
use crate::error::{CliError, Result};
use crate::geometry_file;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct L1Entry {
    pub summand: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelEntry {
    pub m: usize,
    pub coefficients: Vec<f64>,
}

/// Contents of a run configuration file. Every field may also come from the
/// command line, which wins.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Builtin name such as `stiefel-so(4)`, or a path to a geometry file.
    pub geometry: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub epsilon: Option<f64>,
    pub u2: Option<f64>,
    pub l1: Vec<L1Entry>,
    pub kernel_params: Vec<KernelEntry>,
    pub series_order: usize,
    pub t0: f64,
    pub t_end: f64,
    pub rtol: f64,
    pub atol: f64,
    pub scan_limit: usize,
    pub outputs: Option<PathBuf>,
    #[serde(skip)]
    pub base_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            geometry: None,
            n: None,
            k: None,
            p: None,
            epsilon: None,
            u2: None,
            l1: Vec::new(),
            kernel_params: Vec::new(),
            series_order: 12,
            t0: 0.05,
            t_end: 5.0,
            rtol: 1e-9,
            atol: 1e-12,
            scan_limit: cohomsol_core::indeterminacy::DEFAULT_SCAN_LIMIT,
            outputs: None,
            base_dir: None,
        }
    }
}

/// Command-line values that override a config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub geometry: Option<String>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<usize>,
    pub epsilon: Option<f64>,
    pub u2: Option<f64>,
    pub l1: Vec<L1Entry>,
    pub kernel_params: Vec<KernelEntry>,
    pub series_order: Option<usize>,
    pub t0: Option<f64>,
    pub t_end: Option<f64>,
    pub rtol: Option<f64>,
    pub atol: Option<f64>,
    pub scan_limit: Option<usize>,
    pub outputs: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml(text: &str, path: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|source| CliError::Toml {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.base_dir = path.parent().map(Path::to_path_buf);
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text, path)
    }

    pub fn apply(mut self, o: &Overrides) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$(if let Some(v) = o.$f.clone() { self.$f = Some(v); })*};
        }
        macro_rules! take_plain {
            ($($f:ident),*) => {$(if let Some(v) = o.$f { self.$f = v; })*};
        }
        take!(geometry, n, k, p, epsilon, u2, outputs);
        take_plain!(series_order, t0, t_end, rtol, atol, scan_limit);
        if o.geometry.is_some() {
            // Paths given on the command line are relative to the working
            // directory, not the config file.
            self.base_dir = None;
        }
        if !o.l1.is_empty() {
            self.l1 = o.l1.clone();
        }
        if !o.kernel_params.is_empty() {
            self.kernel_params = o.kernel_params.clone();
        }
        self
    }

    fn resolve_path(&self, p: &Path) -> PathBuf {
        match &self.base_dir {
            Some(dir) if p.is_relative() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    pub fn outputs_dir(&self) -> Option<PathBuf> {
        self.outputs.as_deref().map(|p| self.resolve_path(p))
    }

    pub fn flow_options(&self) -> FlowOptions {
        FlowOptions {
            rtol: self.rtol,
            atol: self.atol,
            ..FlowOptions::default()
        }
    }

    /// Geometry plus whatever defaults a builtin supplies.
    pub fn load_geometry(&self) -> Result<LoadedGeometry> {
        let spec = self
            .geometry
            .as_deref()
            .ok_or_else(|| CliError::Config("no geometry given".into()))?;
        if builtin::is_builtin(spec) {
            let params = Params {
                n: self.n,
                k: self.k,
                p: self.p,
            };
            let b = builtin::resolve(spec, params)?;
            let epsilon = self.epsilon.or(b.epsilon);
            let closed_form = epsilon.and_then(|e| builtin::closed_form_for(&b, e));
            return Ok(LoadedGeometry {
                name: spec.to_string(),
                geometry: b.geometry,
                epsilon,
                u2: self.u2.or(b.u2),
                closed_form,
            });
        }
        let path = self.resolve_path(Path::new(spec));
        let geometry = geometry_file::load(&path)?;
        Ok(LoadedGeometry {
            name: spec.to_string(),
            geometry,
            epsilon: self.epsilon,
            u2: self.u2,
            closed_form: None,
        })
    }

    /// Full initial value problem.
    pub fn resolve(&self) -> Result<Run> {
        let g = self.load_geometry()?;
        let epsilon = g
            .epsilon
            .ok_or_else(|| CliError::Config("epsilon is required".into()))?;
        let u2 =
            g.u2.ok_or_else(|| CliError::Config("u2 is required".into()))?;
        let geom = &g.geometry;
        let mut l1 = DiagonalTensor::zeros(geom.n_summands());
        for e in &self.l1 {
            let s = geom.summand_index(&e.summand).ok_or_else(|| {
                CliError::Config(format!("unknown summand '{}' in l1", e.summand))
            })?;
            if geom.summand(s).block == Block::Plus {
                return Err(CliError::Config(format!(
                    "l1 entry on '{}': only singular-orbit summands may carry L1",
                    e.summand
                )));
            }
            l1.values_mut()[s] = e.value;
        }
        let mut data = InitialData::new(geom, epsilon, l1, u2, self.series_order)?;
        for kp in &self.kernel_params {
            data = data.with_kernel_params(kp.m, kp.coefficients.clone());
        }
        if !(self.t0 > 0.0 && self.t_end > self.t0) {
            return Err(CliError::Config(format!(
                "need 0 < t0 < t_end, got t0 = {}, t_end = {}",
                self.t0, self.t_end
            )));
        }
        Ok(Run {
            name: g.name,
            geometry: g.geometry,
            closed_form: g.closed_form,
            data,
            t0: self.t0,
            t_end: self.t_end,
        })
    }
}

#[derive(Debug, Clone)]
pub struct LoadedGeometry {
    pub name: String,
    pub geometry: GeometrySpec,
    pub epsilon: Option<f64>,
    pub u2: Option<f64>,
    pub closed_form: Option<ClosedForm>,
}

#[derive(Debug, Clone)]
pub struct Run {
    pub name: String,
    pub geometry: GeometrySpec,
    pub closed_form: Option<ClosedForm>,
    pub data: InitialData,
    pub t0: f64,
    pub t_end: f64,
}

/// `label=value`.
pub fn parse_l1(s: &str) -> std::result::Result<L1Entry, String> {
    let (label, value) = s.split_once('=').ok_or("expected LABEL=VALUE")?;
    let value = value
        .trim()
        .parse()
        .map_err(|e| format!("bad value: {e}"))?;
    Ok(L1Entry {
        summand: label.trim().to_string(),
        value,
    })
}

/// `m:c1,c2,...`.
pub fn parse_kernel(s: &str) -> std::result::Result<KernelEntry, String> {
    let (m, coeffs) = s.split_once(':').ok_or("expected M:C1,C2,...")?;
    let m = m.trim().parse().map_err(|e| format!("bad order: {e}"))?;
    let coefficients = coeffs
        .split(',')
        .map(|c| {
            c.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad coefficient '{c}': {e}"))
        })
        .collect::<std::result::Result<_, _>>()?;
    Ok(KernelEntry { m, coefficients })
}
