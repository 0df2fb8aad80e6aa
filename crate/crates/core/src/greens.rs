//! Transverse Green's function of the magnetic field in a homogeneous medium
//! and its regularised coincidence limit.
//!
//! `G^H` solves `ε⁻¹ ∇×∇×G − ω²μ G = δ`. In k-space its transverse part is
//! `ε (δ_ij − k_i k_j/k²) / (k² − ω²εμ)`; [`greens_kmode`] returns the scalar
//! factor. At coincident points the function diverges, so every local
//! quantity is averaged over a normalised Gaussian of scale `R`,
//! `w(r) = (2/R²)^{3/2} exp(−2πr²/R²)`, applied to both arguments.
//!
//! # Reduction of the averaged Green's function to one dimension
//!
//! The double average `∫∫ w(r) w(r′) G(r − r′)` is a convolution, so in
//! k-space it multiplies each mode by `ŵ(k)ŵ(−k)`. The Fourier transform of
//! the weight is `ŵ(k) = exp(−k²R²/8π)`, hence the product is
//! `exp(−k²R²/4π)`. The angular average of the transverse projector
//! `δ_ij − k̂_i k̂_j` over the unit sphere is `(2/3) δ_ij`, and
//! `d³k/(2π)³ = k² dk · 4π/(8π³)`. Together:
//!
//! ```text
//! ⟨G^H_ij(0)⟩ = δ_ij · (2/3) · ε/(2π²) · ∫₀^∞ k² e^{−k²R²/4π} / (k² − ω²εμ) dk
//! ```
//!
//! Splitting `k²/(k² − q²) = 1 + q²/(k² − q²)` and letting `R → 0` in the
//! second piece gives `π/R + iπq/2` for the integral, i.e. the small-`R` form
//! `(ε/6π)(2/R + i n ω)` used by [`averaged_greens_analytic`].
//! [`averaged_greens_numeric`] evaluates the integral by adaptive quadrature
//! and serves as the oracle for that truncation.
//!
//! The delta function is averaged the same way: `∫ w² d³r = 1/R³`, of which
//! the transverse projector keeps two thirds.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::medium::MediumSample;
use crate::quadrature::GaussKronrod;
use crate::{Error, Result};

/// Complex 3×3 tensor, row-major.
pub type Tensor3 = [[Complex64; 3]; 3];

/// Above this value of `|nωR|` (or `|nωρ|`) the small-argument expansions
/// are logged as unreliable.
pub const SMALL_ARGUMENT_WARN: f64 = 0.3;

/// Gaussian averaging scale `R` (natural units, `1/ω_Te`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragingSphere {
    r: f64,
}

impl AveragingSphere {
    pub fn new(r: f64) -> Result<Self> {
        if r.is_finite() && r > 0.0 {
            Ok(Self { r })
        } else {
            Err(Error::Domain(format!(
                "averaging scale R must be finite and > 0, got {r}"
            )))
        }
    }

    /// From the equivalent hard-sphere radius, `R³ = 4π R_sphere³ / 3`.
    pub fn from_sphere_radius(r_sphere: f64) -> Result<Self> {
        if !(r_sphere.is_finite() && r_sphere > 0.0) {
            return Err(Error::Domain(format!(
                "sphere radius must be finite and > 0, got {r_sphere}"
            )));
        }
        Self::new(r_sphere * (4.0 * PI / 3.0).cbrt())
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Hard-sphere radius with `R_sphere³ = 3R³/(4π)`.
    pub fn sphere_radius(&self) -> f64 {
        self.r * (3.0 / (4.0 * PI)).cbrt()
    }
}

/// `⟨G^H_ij(0, ω)⟩ = coeff · δ_ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedGreens {
    pub coeff: Complex64,
    pub omega: f64,
    pub r: f64,
}

/// Gaussian self-average of `δ_ij δ(0)`, split into its transverse and
/// longitudinal parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeltaAverage {
    pub transverse: f64,
    pub longitudinal: f64,
    pub total: f64,
}

fn warn_small_argument(what: &str, x: f64) {
    if x > SMALL_ARGUMENT_WARN {
        log::warn!("|n omega {what}| = {x:.3} exceeds {SMALL_ARGUMENT_WARN}; small-argument form is unreliable");
    }
}

/// Small-separation transverse Green's tensor with the `O(ρ)` remainder
/// dropped:
/// `(ε/4π) [ρ_iρ_j/(2ρ³) + δ_ij/(2ρ) + (2i/3) n ω δ_ij]`.
pub fn greens_smallrho(rho: [f64; 3], sample: &MediumSample) -> Result<Tensor3> {
    let dist = rho.iter().map(|x| x * x).sum::<f64>().sqrt();
    if dist == 0.0 {
        return Err(Error::Coincident);
    }
    if !dist.is_finite() {
        return Err(Error::Domain(format!(
            "separation must be finite, got {rho:?}"
        )));
    }
    warn_small_argument("rho", (sample.n * sample.omega * dist).norm());

    let prefactor = sample.eps / (4.0 * PI);
    let diagonal = 1.0 / (2.0 * dist) + Complex64::new(0.0, 2.0 / 3.0) * sample.n * sample.omega;
    let mut tensor = [[Complex64::new(0.0, 0.0); 3]; 3];
    for (i, row) in tensor.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut value = Complex64::new(rho[i] * rho[j] / (2.0 * dist.powi(3)), 0.0);
            if i == j {
                value += diagonal;
            }
            *entry = prefactor * value;
        }
    }
    Ok(tensor)
}

/// Scalar mode coefficient `g(k) = ε / (k² − ω²εμ)`; the full mode is
/// `g(k) (δ_ij − k̂_i k̂_j)`.
pub fn greens_kmode(k: f64, sample: &MediumSample) -> Result<Complex64> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::Domain(format!(
            "wavenumber must be finite and >= 0, got {k}"
        )));
    }
    let denom = k * k - sample.omega * sample.omega * sample.eps * sample.mu;
    if denom == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularMode { k });
    }
    Ok(sample.eps / denom)
}

/// Small-`R` Gaussian average `(ε/6π)(2/R + i n ω)`.
pub fn averaged_greens_analytic(sample: &MediumSample, sphere: &AveragingSphere) -> AveragedGreens {
    let r = sphere.r();
    warn_small_argument("R", (sample.n * sample.omega * r).norm());
    let coeff = sample.eps / (6.0 * PI)
        * (Complex64::new(2.0 / r, 0.0) + Complex64::new(0.0, 1.0) * sample.n * sample.omega);
    AveragedGreens {
        coeff,
        omega: sample.omega,
        r,
    }
}

/// Averaged electric Green's function `G^E` (solving
/// `μ⁻¹ ∇×∇×G − ω²ε G = δ`) in the same small-`R` form,
/// `(μ/6π)(2/R + i n ω)`.
pub fn averaged_electric_greens_analytic(
    sample: &MediumSample,
    sphere: &AveragingSphere,
) -> AveragedGreens {
    let r = sphere.r();
    let coeff = sample.mu / (6.0 * PI)
        * (Complex64::new(2.0 / r, 0.0) + Complex64::new(0.0, 1.0) * sample.n * sample.omega);
    AveragedGreens {
        coeff,
        omega: sample.omega,
        r,
    }
}

/// Relative accuracy requested from the quadrature oracle.
pub const ORACLE_REL_TOL: f64 = 1e-10;

/// Gaussian average evaluated from the one-dimensional k-space integral
/// (see the module docs) without the small-`R` expansion.
///
/// Lossless media are treated as the `Im(εμ) → 0⁺` limit: the pole at
/// `k = q` contributes its principal value plus `iπ` times its residue.
pub fn averaged_greens_numeric(
    sample: &MediumSample,
    sphere: &AveragingSphere,
) -> Result<AveragedGreens> {
    let r = sphere.r();
    let q2 = sample.omega * sample.omega * sample.eps * sample.mu;
    let a = r * r / (4.0 * PI);
    let weight = |k: f64| (-a * k * k).exp();
    let k_max = (20.0 * (4.0 * PI).sqrt() / r).max(10.0 * sample.n.norm() * sample.omega);

    let quad = GaussKronrod::with_rel_tol(ORACLE_REL_TOL);
    let lossless_pole = q2.im == 0.0 && q2.re > 0.0;

    let integral = if lossless_pole {
        if sample.eps.re < 0.0 && sample.mu.re < 0.0 {
            return Err(Error::PoleOnContour(q2.re));
        }
        let q = q2.re.sqrt();
        if q >= k_max {
            return Err(Error::PoleOnContour(q2.re));
        }
        // k² w / (k² − q²) = g(k)/(k − q) with g(k) = k² w(k)/(k + q).
        let g = |k: f64| k * k * weight(k) / (k + q);
        let gq = g(q);
        let smooth = quad.integrate_with_breakpoints(
            |k| {
                let dk = k - q;
                if dk == 0.0 {
                    // q is a breakpoint and Kronrod nodes never sit on end points
                    Complex64::new(0.0, 0.0)
                } else {
                    Complex64::new((g(k) - gq) / dk, 0.0)
                }
            },
            0.0,
            k_max,
            &[q],
        )?;
        let principal = smooth.value.re + gq * ((k_max - q) / q).ln();
        let residue = PI * gq;
        Complex64::new(principal, residue)
    } else {
        let peak = sample.omega * sample.n.re.abs();
        let result = quad.integrate_with_breakpoints(
            |k| k * k * weight(k) / (k * k - q2),
            0.0,
            k_max,
            &[peak],
        )?;
        // |k²/(k² − q²)| ≤ 1 + |q²|/(k² − |q²|) for k beyond the pole region.
        let bound_factor = 1.0 + q2.norm() / (k_max * k_max - q2.norm()).max(f64::MIN_POSITIVE);
        let tail = bound_factor * (-a * k_max * k_max).exp() / (2.0 * a * k_max);
        if tail > ORACLE_REL_TOL * result.value.norm() {
            return Err(Error::Quadrature {
                estimate: result.value,
                error_estimate: result.error_estimate + tail,
                intervals: result.intervals,
                evaluations: result.evaluations,
            });
        }
        result.value
    };

    let coeff = (2.0 / 3.0) * sample.eps / (2.0 * PI * PI) * integral;
    Ok(AveragedGreens {
        coeff,
        omega: sample.omega,
        r,
    })
}

/// Gaussian self-average of the delta function: `2/(3R³)` transverse,
/// `1/(3R³)` longitudinal, `1/R³` in total.
pub fn averaged_delta(sphere: &AveragingSphere) -> DeltaAverage {
    let total = sphere.r().powi(-3);
    DeltaAverage {
        transverse: 2.0 * total / 3.0,
        longitudinal: total / 3.0,
        total,
    }
}

/// Per-mode form of the Green's-function imaginary-part relation,
/// `|g|² (ω² Im μ + k² Im ε / |ε|²) − Im g`, which vanishes identically.
pub fn greens_identity_check(k: f64, sample: &MediumSample) -> Result<f64> {
    let g = greens_kmode(k, sample)?;
    let w2 = sample.omega * sample.omega;
    let sources = w2 * sample.mu.im + k * k * sample.eps.im / sample.eps.norm_sqr();
    Ok(g.norm_sqr() * sources - g.im)
}
