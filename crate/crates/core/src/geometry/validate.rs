use alloc::string::String;
use alloc::vec::Vec;

use super::ricci::ricci_endomorphism;
use super::spec::GeometrySpec;
use super::tensor::DiagonalTensor;
use crate::error::Error;

const JACOBI_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

fn antisymmetry(geom: &GeometrySpec) -> f64 {
    let n = geom.basis_dim();
    let mut dev: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                dev = dev.max((geom.c(a, b, c) + geom.c(b, a, c)).abs());
            }
        }
    }
    dev
}

/// `max |[[X_a,X_b],X_c] + [[X_b,X_c],X_a] + [[X_c,X_a],X_b]|` componentwise.
fn jacobi(geom: &GeometrySpec) -> f64 {
    let n = geom.basis_dim();
    let mut dev: f64 = 0.0;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for e in 0..n {
                    let mut sum = 0.0;
                    for d in 0..n {
                        sum += geom.c(a, b, d) * geom.c(d, c, e)
                            + geom.c(b, c, d) * geom.c(d, a, e)
                            + geom.c(c, a, d) * geom.c(d, b, e);
                    }
                    dev = dev.max(sum.abs());
                }
            }
        }
    }
    dev
}

/// Runs the structural checks on a skeleton: antisymmetry and Jacobi
/// identity of the brackets, summand bookkeeping, and a diagonality probe
/// of the Ricci tensor at a fixed scattered metric.
pub fn validate_geometry(geom: &GeometrySpec) -> ValidationReport {
    let mut checks = Vec::new();
    let anti = antisymmetry(geom);
    checks.push(CheckResult {
        name: "antisymmetry",
        passed: anti <= JACOBI_TOL,
        max_deviation: anti,
        detail: String::new(),
    });
    let jac = jacobi(geom);
    checks.push(CheckResult {
        name: "jacobi",
        passed: jac <= JACOBI_TOL,
        max_deviation: jac,
        detail: String::new(),
    });

    let counted: usize = (0..geom.basis_dim())
        .filter(|&i| geom.summand_of(i).is_some())
        .count();
    let bookkeeping = counted == geom.orbit_dim()
        && geom
            .plus_summands()
            .iter()
            .map(|&s| geom.summand(s).dim)
            .sum::<usize>()
            == geom.k();
    checks.push(CheckResult {
        name: "orthonormal_bookkeeping",
        passed: bookkeeping,
        max_deviation: 0.0,
        detail: String::new(),
    });

    // Deterministic scatter in (0.5, 2) so runs are reproducible.
    let probe = DiagonalTensor::new(
        (0..geom.n_summands())
            .map(|s| 0.5 + 1.5 * libm::fmod(0.618_033_988_75 * (s as f64 + 1.0), 1.0))
            .collect(),
    );
    let (passed, dev, detail) = match ricci_endomorphism(geom, &probe) {
        Ok(_) => (true, 0.0, String::new()),
        Err(Error::NonDiagonalRicci { max_dev }) => (false, max_dev, String::new()),
        Err(e) => (false, f64::NAN, alloc::format!("{e}")),
    };
    checks.push(CheckResult {
        name: "ricci_diagonal",
        passed,
        max_deviation: dev,
        detail,
    });
    ValidationReport { checks }
}
