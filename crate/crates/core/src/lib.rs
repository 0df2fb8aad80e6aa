//! Spontaneous-decay rates of magnetic (and, by duality, electric) point
//! dipoles embedded in a homogeneous, absorbing magneto-dielectric.
//!
//! The crate works in natural units `c = ε₀ = ħ = 1` with every frequency
//! measured in units of a reference transverse resonance `ω_Te`; lengths are
//! therefore in units of `c/ω_Te`. Only [`sweep::convert_radius`] touches
//! physical units.
//!
//! Layout:
//!
//! * [`medium`]: Lorentz-oscillator response `ε(ω)`, `μ(ω)` and `n(ω)`.
//! * [`greens`]: transverse magnetic Green's function, Gaussian sphere
//!   averages and the quadrature oracle for them.
//! * [`correlators`]: spatially averaged vacuum second moments of the noise
//!   and field operators in both noise-magnetisation conventions.
//! * [`decay`]: closed-form and correlator-assembled decay rates.
//! * [`duality`]: Heaviside-Larmor rotations and the operator transform table.
//! * [`sweep`] and [`verify`]: band sweeps, CSV output and the property suites
//!   driven by the command-line tool.

pub mod correlators;
pub mod decay;
pub mod duality;
mod error;
pub mod greens;
pub mod medium;
pub mod quadrature;
pub mod sweep;
pub mod verify;

pub use error::{Error, Result};

pub use num_complex::Complex64;

/// Relative difference `|a - b| / max(|a|, |b|)`, zero when both vanish.
pub fn relative_difference(a: Complex64, b: Complex64) -> f64 {
    let scale = a.norm().max(b.norm());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).norm() / scale
    }
}
