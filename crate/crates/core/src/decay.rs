//! Spontaneous-decay rates of a two-level magnetic dipole in the medium.
//!
//! Each rate is available twice: as a closed form in `ε`, `μ`, `n` and `R`,
//! and assembled as `2π m² ⟨X X†⟩` from the averaged correlators of the field
//! `X` the dipole couples to. The emitter position drops out in a homogeneous
//! medium and an isotropic medium contracts `m_i m_j δ_ij` to `m²`.
//!
//! Rates are split by how they scale with the averaging scale `R`:
//! `R`-independent radiation into the medium (`far_field`), the `1/R`
//! heating channel in which a virtual photon is absorbed right away, and the
//! `1/R³` near-field dipole-dipole transfer to the medium.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlators::{assemble, AveragedInputs, Coupling, NoiseConvention, PhaseConvention};
use crate::greens::{averaged_delta, AveragingSphere};
use crate::medium::MediumSample;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DipoleKind {
    Magnetic,
    Electric,
}

impl DipoleKind {
    pub fn dual(self) -> Self {
        match self {
            DipoleKind::Magnetic => DipoleKind::Electric,
            DipoleKind::Electric => DipoleKind::Magnetic,
        }
    }
}

/// Transition dipole of magnitude `m` at frequency `omega_a`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dipole {
    m: f64,
    omega_a: f64,
    kind: DipoleKind,
}

impl Dipole {
    pub fn new(m: f64, omega_a: f64, kind: DipoleKind) -> Result<Self> {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::Domain(format!(
                "dipole magnitude must be > 0, got {m}"
            )));
        }
        if !(omega_a.is_finite() && omega_a > 0.0) {
            return Err(Error::Domain(format!(
                "transition frequency must be > 0, got {omega_a}"
            )));
        }
        Ok(Self { m, omega_a, kind })
    }

    pub fn magnetic(m: f64, omega_a: f64) -> Result<Self> {
        Self::new(m, omega_a, DipoleKind::Magnetic)
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn omega_a(&self) -> f64 {
        self.omega_a
    }

    pub fn kind(&self) -> DipoleKind {
        self.kind
    }

    fn with_kind(self, kind: DipoleKind) -> Self {
        Self { kind, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DecayChannels {
    pub far_field: f64,
    pub heating_1over_r: f64,
    pub dipole_dipole_1over_r3: f64,
    pub residual: f64,
}

impl DecayChannels {
    pub fn sum(&self) -> f64 {
        self.far_field + self.heating_1over_r + self.dipole_dipole_1over_r3 + self.residual
    }

    fn scaled(self, factor: f64) -> Self {
        Self {
            far_field: self.far_field * factor,
            heating_1over_r: self.heating_1over_r * factor,
            dipole_dipole_1over_r3: self.dipole_dipole_1over_r3 * factor,
            residual: self.residual * factor,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayResult {
    pub gamma_total: f64,
    pub gamma_0: f64,
    pub purcell: f64,
    pub channels: DecayChannels,
    pub kind: DipoleKind,
}

impl DecayResult {
    fn from_channels(gamma_0: f64, channels: DecayChannels, kind: DipoleKind) -> Self {
        let gamma_total = channels.sum();
        Self {
            gamma_total,
            gamma_0,
            purcell: gamma_total / gamma_0,
            channels,
            kind,
        }
    }

    /// Channels in units of `γ₀`.
    pub fn purcell_channels(&self) -> DecayChannels {
        self.channels.scaled(self.gamma_0.recip())
    }
}

/// Free-space rate `γ₀ = m² ω_A³ / (3π)`.
pub fn gamma_0(dipole: &Dipole) -> f64 {
    dipole.m * dipole.m * dipole.omega_a.powi(3) / (3.0 * PI)
}

fn check_on_shell(dipole: &Dipole, sample: &MediumSample) -> Result<()> {
    let scale = dipole.omega_a.max(sample.omega);
    if (dipole.omega_a - sample.omega).abs() > 1e-12 * scale {
        return Err(Error::FrequencyMismatch {
            sample: sample.omega,
            dipole: dipole.omega_a,
        });
    }
    Ok(())
}

/// Closed-form rate for `−m·H` coupling,
/// `γ_H = γ₀ [Re(nε) + 2 Im ε / (ω_A R)]`.
pub fn gamma_h(
    dipole: &Dipole,
    sample: &MediumSample,
    sphere: &AveragingSphere,
) -> Result<DecayResult> {
    check_on_shell(dipole, sample)?;
    let g0 = gamma_0(dipole);
    let x = dipole.omega_a * sphere.r();
    let channels = DecayChannels {
        far_field: g0 * (sample.n * sample.eps).re,
        heating_1over_r: g0 * 2.0 * sample.eps.im / x,
        ..DecayChannels::default()
    };
    Ok(DecayResult::from_channels(g0, channels, dipole.kind))
}

/// Closed-form rate for `−m·B` coupling:
///
/// ```text
/// γ_B = γ₀ [ |μ|² (Re(nε) + 2 Im ε/(ω_A R))
///          + Im μ (4π/(ω_A R)³ + 4 Re(n²)/(ω_A R) − 2 Im(n³)) ]
/// ```
///
/// The `Im(n³)` coefficient follows from `4 m² Im μ ω_A² Re[μ⟨G^H⟩]` with
/// `⟨G^H⟩ = (ε/6π)(2/R + inω)`; it is the same term that appears as
/// `Im(n³/2)` with prefactor `4 Im μ / 9` in [`gamma_local`].
pub fn gamma_b(
    dipole: &Dipole,
    sample: &MediumSample,
    sphere: &AveragingSphere,
) -> Result<DecayResult> {
    check_on_shell(dipole, sample)?;
    let g0 = gamma_0(dipole);
    let x = dipole.omega_a * sphere.r();
    let (eps, mu, n) = (sample.eps, sample.mu, sample.n);
    let mu2 = mu.norm_sqr();
    let n2 = n * n;
    let channels = DecayChannels {
        far_field: g0 * (mu2 * (n * eps).re - 2.0 * mu.im * (n2 * n).im),
        heating_1over_r: g0 * (mu2 * 2.0 * eps.im + 4.0 * mu.im * n2.re) / x,
        dipole_dipole_1over_r3: g0 * 4.0 * PI * mu.im / x.powi(3),
        residual: 0.0,
    };
    Ok(DecayResult::from_channels(g0, channels, dipole.kind))
}

/// Closed-form rate with the Clausius-Mossotti local field,
///
/// ```text
/// γ = γ₀ [ |(μ+2)/3|² (Re(nε) + 2 Im ε/(ω_A R)) + 4π Im μ / (9 (ω_A R)³)
///        + (4 Im μ / 9) (Re(n² + 2ε)/(ω_A R) − Im(n³/2 + nε)) ]
/// ```
///
/// Both noise conventions give this rate; `conv` is accepted so callers can
/// state which one they assume.
pub fn gamma_local(
    dipole: &Dipole,
    sample: &MediumSample,
    sphere: &AveragingSphere,
    conv: NoiseConvention,
) -> Result<DecayResult> {
    check_on_shell(dipole, sample)?;
    let _ = conv;
    let g0 = gamma_0(dipole);
    let x = dipole.omega_a * sphere.r();
    let (eps, mu, n) = (sample.eps, sample.mu, sample.n);
    let lf = ((mu + 2.0) / 3.0).norm_sqr();
    let n2 = n * n;
    let noise = 4.0 * mu.im / 9.0;
    let channels = DecayChannels {
        far_field: g0 * (lf * (n * eps).re - noise * (n2 * n / 2.0 + n * eps).im),
        heating_1over_r: g0 * (lf * 2.0 * eps.im + noise * (n2 + 2.0 * eps).re) / x,
        dipole_dipole_1over_r3: g0 * 4.0 * PI * mu.im / (9.0 * x.powi(3)),
        residual: 0.0,
    };
    Ok(DecayResult::from_channels(g0, channels, dipole.kind))
}

/// Electric-dipole rate with the Clausius-Mossotti local field
/// `E_loc = ((ε+2)/3) E + P_N/3`, written out directly:
///
/// ```text
/// γ_E = γ₀ [ |(ε+2)/3|² (Re(nμ) + 2 Im μ/(ω_A R)) + 4π Im ε / (9 (ω_A R)³)
///          + (4 Im ε / 9) (Re(n² + 2μ)/(ω_A R) − Im(n³/2 + nμ)) ]
/// ```
pub fn electric_local_rate(
    dipole: &Dipole,
    sample: &MediumSample,
    sphere: &AveragingSphere,
) -> Result<DecayResult> {
    check_on_shell(dipole, sample)?;
    let g0 = gamma_0(dipole);
    let x = dipole.omega_a * sphere.r();
    let (eps, mu, n) = (sample.eps, sample.mu, sample.n);
    let lf = ((eps + 2.0) / 3.0).norm_sqr();
    let n2 = n * n;
    let noise = 4.0 * eps.im / 9.0;
    let channels = DecayChannels {
        far_field: g0 * (lf * (n * mu).re - noise * (n2 * n / 2.0 + n * mu).im),
        heating_1over_r: g0 * (lf * 2.0 * mu.im + noise * (n2 + 2.0 * mu).re) / x,
        dipole_dipole_1over_r3: g0 * 4.0 * PI * eps.im / (9.0 * x.powi(3)),
        residual: 0.0,
    };
    Ok(DecayResult::from_channels(
        g0,
        channels,
        DipoleKind::Electric,
    ))
}

/// Closed-form rate for the given coupling.
pub fn closed_form(
    coupling: Coupling,
    dipole: &Dipole,
    sample: &MediumSample,
    sphere: &AveragingSphere,
    conv: NoiseConvention,
) -> Result<DecayResult> {
    match coupling {
        Coupling::H => gamma_h(dipole, sample, sphere),
        Coupling::B => gamma_b(dipole, sample, sphere),
        Coupling::Local => gamma_local(dipole, sample, sphere, conv),
    }
}

/// `γ = 2π m² ⟨X X†⟩` with the frequency delta collapsed on shell.
///
/// Channels come from evaluating the (linear) assembly on the `R`-independent
/// part of `⟨G^H⟩`, on its `1/R` part and on the transverse delta separately;
/// `residual` holds whatever the full assembly differs from their sum by.
pub fn gamma_from_correlators(
    dipole: &Dipole,
    sample: &MediumSample,
    sphere: &AveragingSphere,
    coupling: Coupling,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> Result<DecayResult> {
    check_on_shell(dipole, sample)?;
    let prefactor = 2.0 * PI * dipole.m * dipole.m;
    let zero = Complex64::new(0.0, 0.0);
    let prefix = sample.eps / (6.0 * PI);
    let far = AveragedInputs {
        greens: prefix * Complex64::i() * sample.n * sample.omega,
        delta_perp: 0.0,
    };
    let near = AveragedInputs {
        greens: prefix * (2.0 / sphere.r()),
        delta_perp: 0.0,
    };
    let contact = AveragedInputs {
        greens: zero,
        delta_perp: averaged_delta(sphere).transverse,
    };
    let full = AveragedInputs::analytic(sample, sphere);

    let eval = |inputs: &AveragedInputs| -> Result<f64> {
        Ok(prefactor * assemble(sample, inputs, coupling, conv, phase)?.total())
    };
    let mut channels = DecayChannels {
        far_field: eval(&far)?,
        heating_1over_r: eval(&near)?,
        dipole_dipole_1over_r3: eval(&contact)?,
        residual: 0.0,
    };
    channels.residual = eval(&full)? - channels.sum();
    Ok(DecayResult::from_channels(
        gamma_0(dipole),
        channels,
        dipole.kind,
    ))
}

/// A rate evaluation that can be mapped to its dual description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateQuery {
    pub coupling: Coupling,
    pub convention: NoiseConvention,
    pub dipole: Dipole,
    pub sample: MediumSample,
    pub sphere: AveragingSphere,
}

impl RateQuery {
    pub fn evaluate(&self) -> Result<DecayResult> {
        closed_form(
            self.coupling,
            &self.dipole,
            &self.sample,
            &self.sphere,
            self.convention,
        )
    }

    /// Same rate with `ε ↔ μ` exchanged and the dipole kind flipped.
    pub fn dual(&self) -> Self {
        Self {
            sample: self.sample.dual(),
            dipole: self.dipole.with_kind(self.dipole.kind.dual()),
            ..*self
        }
    }
}

/// Evaluates `query` in the `θ = π/2` dual description: a magnetic-dipole
/// rate formula applied to `(μ, ε)` is the electric-dipole rate in `(ε, μ)`.
pub fn electric_dual(query: &RateQuery) -> Result<DecayResult> {
    query.dual().evaluate()
}
