//! Named geometries with their natural soliton data.

use cohomsol_core::flow::ClosedForm;
use cohomsol_core::geometry::{grassmann_product, sphere, stiefel, stiefel_codim2};
use cohomsol_core::GeometrySpec;

use crate::error::{CliError, Result};

pub const NAMES: [&str; 7] = [
    "gaussian-flat",
    "bryant-sphere",
    "cigar",
    "sine-cone",
    "stiefel-so",
    "stiefel-codim2",
    "grassmann-product",
];

/// A builtin geometry plus the data it is usually run with.
#[derive(Debug, Clone)]
pub struct Builtin {
    pub geometry: GeometrySpec,
    pub epsilon: Option<f64>,
    pub u2: Option<f64>,
    /// Closed-form solution for the default data.
    pub closed_form: Option<ClosedForm>,
}

/// Integer parameters written either inline, `stiefel-so(4)`, or as fields.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Params {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub p: Option<usize>,
}

fn split_name(spec: &str) -> Result<(&str, Vec<usize>)> {
    let spec = spec.trim();
    let Some(open) = spec.find('(') else {
        return Ok((spec, Vec::new()));
    };
    let inner = spec[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| CliError::Config(format!("unbalanced parentheses in '{spec}'")))?;
    let args = inner
        .split(',')
        .map(|a| {
            a.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Config(format!("bad argument '{a}' in '{spec}'")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((&spec[..open], args))
}

pub fn is_builtin(spec: &str) -> bool {
    split_name(spec).is_ok_and(|(name, _)| NAMES.contains(&name))
}

fn need(value: Option<usize>, what: &str, name: &str) -> Result<usize> {
    value.ok_or_else(|| CliError::Config(format!("{name} needs {what}")))
}

pub fn resolve(spec: &str, params: Params) -> Result<Builtin> {
    let (name, args) = split_name(spec)?;
    let first = args.first().copied();
    // Steady solitons with a unit bend of the potential.
    let plain = |geometry| Builtin {
        geometry,
        epsilon: Some(0.0),
        u2: Some(-1.0),
        closed_form: None,
    };
    let b = match name {
        "gaussian-flat" => {
            let k = need(first.or(params.k).or(params.n), "a dimension k", name)?;
            let eps = 2.0;
            Builtin {
                geometry: sphere(k)?,
                epsilon: Some(eps),
                u2: Some(-0.5 * eps),
                closed_form: Some(ClosedForm::Gaussian { epsilon: eps }),
            }
        }
        "bryant-sphere" => {
            let n = need(
                first.or(params.n).or(params.k),
                "a sphere dimension n",
                name,
            )?;
            Builtin {
                geometry: sphere(n)?,
                epsilon: Some(0.0),
                u2: Some(-1.0),
                closed_form: None,
            }
        }
        "cigar" => Builtin {
            geometry: sphere(1)?,
            epsilon: Some(0.0),
            u2: Some(-2.0),
            closed_form: Some(ClosedForm::Cigar),
        },
        "sine-cone" => {
            let n = need(
                first.or(params.n).or(params.k),
                "a sphere dimension n",
                name,
            )?;
            Builtin {
                geometry: sphere(n)?,
                epsilon: Some(-2.0 * n as f64),
                u2: Some(0.0),
                closed_form: Some(ClosedForm::SineCone),
            }
        }
        "stiefel-so" => {
            // `stiefel-so(N)` names G = SO(N); `n` is N - 2.
            let n = match first {
                Some(big) if big >= 4 => big - 2,
                Some(big) => {
                    return Err(CliError::Config(format!("stiefel-so({big}) needs N >= 4")))
                }
                None => need(params.n, "n (G = SO(n+2))", name)?,
            };
            plain(stiefel(n)?)
        }
        "stiefel-codim2" => plain(stiefel_codim2(need(first.or(params.n), "n", name)?)?),
        "grassmann-product" => {
            let (p, n) = match args.as_slice() {
                [p, n] => (*p, *n),
                _ => (need(params.p, "p", name)?, need(params.n, "n", name)?),
            };
            plain(grassmann_product(p, n)?)
        }
        _ => {
            return Err(CliError::Config(format!(
                "unknown builtin geometry '{name}' (known: {})",
                NAMES.join(", ")
            )))
        }
    };
    Ok(b)
}

/// The closed form applies only at its own soliton constant; the Gaussian
/// one follows whatever constant the run uses.
pub fn closed_form_for(b: &Builtin, epsilon: f64) -> Option<ClosedForm> {
    match b.closed_form? {
        ClosedForm::Gaussian { .. } => Some(ClosedForm::Gaussian { epsilon }),
        other => Some(other),
    }
}
