//! Explicit solutions on a single collapsing sphere, used as references.

use crate::geometry::{DiagonalTensor, GeometrySpec};

use super::system::{SolitonState, StateDerivative};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ClosedForm {
    /// Steady soliton on `ℝ²`: `f = tanh t`, `u = -2 log cosh t`, `ε = 0`.
    Cigar,
    /// Round sphere: `f = sin t`, `u = 0`, `ε = -2n`.
    SineCone,
    /// Flat space with `u = -ε t²/4`.
    Gaussian { epsilon: f64 },
}

/// `x, ẋ, ẍ` of a scalar profile and `u̇, ü, u⃛`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Profile {
    pub x: [f64; 3],
    pub u: [f64; 3],
}

/// `h = f/t` and its first two derivatives, squared into `x = h²`.
fn square(h: f64, h1: f64, h2: f64) -> [f64; 3] {
    [h * h, 2.0 * h * h1, 2.0 * (h1 * h1 + h * h2)]
}

impl ClosedForm {
    pub fn profile(&self, t: f64) -> Profile {
        match *self {
            ClosedForm::Cigar => {
                let th = libm::tanh(t);
                let sech2 = 1.0 - th * th;
                let h = th / t;
                let h1 = (t * sech2 - th) / (t * t);
                let h2 = (-2.0 * t * t * sech2 * th - 2.0 * t * sech2 + 2.0 * th) / (t * t * t);
                Profile {
                    x: square(h, h1, h2),
                    u: [-2.0 * th, -2.0 * sech2, 4.0 * sech2 * th],
                }
            }
            ClosedForm::SineCone => {
                let (s, c) = (libm::sin(t), libm::cos(t));
                let h = s / t;
                let h1 = (t * c - s) / (t * t);
                let h2 = (-t * t * s - 2.0 * t * c + 2.0 * s) / (t * t * t);
                Profile {
                    x: square(h, h1, h2),
                    u: [0.0; 3],
                }
            }
            ClosedForm::Gaussian { epsilon } => Profile {
                x: [1.0, 0.0, 0.0],
                u: [-0.5 * epsilon * t, -0.5 * epsilon, 0.0],
            },
        }
    }

    /// State and derivative with every summand following the profile.
    pub fn state(&self, geom: &GeometrySpec, t: f64) -> (SolitonState, StateDerivative) {
        let p = self.profile(t);
        let n = geom.n_summands();
        let c = |v: f64| DiagonalTensor::constant(n, v);
        let state = SolitonState {
            t,
            x: c(p.x[0]),
            y: c(0.5 * p.x[1]),
            udot: p.u[0],
            uddot: p.u[1],
        };
        let deriv = StateDerivative {
            x_dot: c(p.x[1]),
            y_dot: c(0.5 * p.x[2]),
            uddot: p.u[1],
            u3: p.u[2],
        };
        (state, deriv)
    }
}
