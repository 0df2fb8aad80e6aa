//! Spatially averaged vacuum second moments.
//!
//! Field operators are never built; only the coefficients multiplying
//! `δ_ij δ(ω − ω′)` in their vacuum two-point functions are. Every magnetic
//! field the dipole can couple to is a combination `α H + β M_N` of the
//! macroscopic field and the noise magnetisation, so its auto-correlator is
//!
//! ```text
//! |α|² ⟨H H†⟩ + |β|² ⟨M_N M_N†⟩ + 2 Re[α β* ⟨H M_N†⟩]
//! ```
//!
//! with the last two (conjugate) cross terms already folded into one real
//! number. Only transverse parts are kept.
//!
//! The noise moments are built from the polariton map of the chosen
//! convention: `M_N = a_m f_m`, `P_N = a_e f_e` with `⟨f f†⟩ = 1`. In the
//! `OptionB` convention the noise magnetisation enters both the field
//! equation for `H` and the induction with an extra factor `μ`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::greens::{
    averaged_delta, averaged_electric_greens_analytic, averaged_greens_analytic, AveragingSphere,
};
use crate::medium::MediumSample;
use crate::{Error, Result};

/// How the noise magnetisation is attached to the medium response.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseConvention {
    /// `B = μH + M_{N,H}`: noise associated with `μ`.
    OptionH,
    /// `B = μH + μM_{N,B}`: noise associated with `κ = 1/μ`.
    OptionB,
}

impl NoiseConvention {
    pub const ALL: [NoiseConvention; 2] = [NoiseConvention::OptionH, NoiseConvention::OptionB];

    pub fn name(&self) -> &'static str {
        match self {
            NoiseConvention::OptionH => "OptionH",
            NoiseConvention::OptionB => "OptionB",
        }
    }
}

/// Phase of the `f_m → M_{N,B}` map. Irrelevant for `OptionH`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseConvention {
    /// `M_{N,B} = √(Im μ)/|μ| · f_m/√π`.
    Conventional,
    /// `M_{N,B} = i√(Im μ)/μ · f_m/√π`.
    DualSymmetric,
}

/// Which field the magnetic dipole couples to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Coupling {
    /// `−m·H`
    H,
    /// `−m·B`
    B,
    /// `−m·B_loc` with the Clausius-Mossotti local field `B_loc = 2H/3 + B/3`.
    Local,
}

impl Coupling {
    pub const ALL: [Coupling; 3] = [Coupling::H, Coupling::B, Coupling::Local];
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelatorKind {
    NoisePolarisation,
    NoiseMagnetisation(NoiseConvention),
    /// `⟨H H†⟩`
    MagneticField,
    /// `⟨H M_{N,H}†⟩`, or `μ*⟨H M_{N,B}†⟩` for `OptionB`.
    FieldNoiseCross(NoiseConvention),
    /// `⟨B B†⟩`
    Induction(NoiseConvention),
    /// `⟨B_loc B_loc†⟩ = ⟨H_loc H_loc†⟩`
    LocalField(NoiseConvention),
    /// `⟨E E†⟩`
    ElectricField,
    /// `⟨E P_N†⟩`
    ElectricFieldNoiseCross,
    /// `⟨E_loc E_loc†⟩`
    ElectricLocalField,
}

/// Coefficient of `δ_ij δ(ω − ω′)` in a vacuum two-point function. `r` is
/// the Gaussian averaging scale, absent for unaveraged noise densities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorCoefficient {
    pub value: Complex64,
    pub kind: CorrelatorKind,
    pub omega: f64,
    pub r: Option<f64>,
}

impl CorrelatorCoefficient {
    fn real(value: f64, kind: CorrelatorKind, omega: f64, r: Option<f64>) -> Self {
        Self {
            value: Complex64::new(value, 0.0),
            kind,
            omega,
            r,
        }
    }
}

/// `⟨P_N P_N†⟩ = Im ε / π` (spatial delta stripped).
pub fn noise_polarisation_cc(sample: &MediumSample) -> CorrelatorCoefficient {
    CorrelatorCoefficient::real(
        sample.eps.im / PI,
        CorrelatorKind::NoisePolarisation,
        sample.omega,
        None,
    )
}

/// `⟨M_N M_N†⟩`: `Im μ / π` for `OptionH`, `−Im κ / π` with `κ = 1/μ` for
/// `OptionB`.
pub fn noise_magnetisation_cc(
    sample: &MediumSample,
    conv: NoiseConvention,
) -> CorrelatorCoefficient {
    let value = match conv {
        NoiseConvention::OptionH => sample.mu.im / PI,
        NoiseConvention::OptionB => -sample.mu.inv().im / PI,
    };
    CorrelatorCoefficient::real(
        value,
        CorrelatorKind::NoiseMagnetisation(conv),
        sample.omega,
        None,
    )
}

/// Diagonal map `(P_N, M_N) = map · (f_e, f_m)`, including the `1/√π`.
pub type PolaritonMap = [[Complex64; 2]; 2];

pub fn polariton_map(
    sample: &MediumSample,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> PolaritonMap {
    let i = Complex64::i();
    let norm = PI.sqrt().recip();
    let electric = i * sample.eps.im.max(0.0).sqrt() * norm;
    let root_mu = sample.mu.im.max(0.0).sqrt();
    let magnetic = match (conv, phase) {
        (NoiseConvention::OptionH, _) => i * root_mu,
        (NoiseConvention::OptionB, PhaseConvention::Conventional) => {
            Complex64::new(root_mu / sample.mu.norm(), 0.0)
        }
        (NoiseConvention::OptionB, PhaseConvention::DualSymmetric) => i * root_mu / sample.mu,
    } * norm;
    let zero = Complex64::new(0.0, 0.0);
    [[electric, zero], [zero, magnetic]]
}

/// Averaged inputs every field moment is linear in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AveragedInputs {
    /// `⟨G^H(0)⟩` coefficient.
    pub greens: Complex64,
    /// Transverse delta average `⟨δ_⊥(0)⟩`.
    pub delta_perp: f64,
}

impl AveragedInputs {
    pub fn analytic(sample: &MediumSample, sphere: &AveragingSphere) -> Self {
        Self {
            greens: averaged_greens_analytic(sample, sphere).coeff,
            delta_perp: averaged_delta(sphere).transverse,
        }
    }
}

/// Term-by-term second moment of one field combination.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FieldMoments {
    /// `|α|² ⟨H H†⟩`
    pub field: f64,
    /// `|β|² ⟨M_N M_N†⟩`
    pub noise: f64,
    /// `2 Re[α β* ⟨H M_N†⟩]`
    pub cross: f64,
}

impl FieldMoments {
    pub fn total(&self) -> f64 {
        self.field + self.noise + self.cross
    }
}

/// Relative mismatch above which a convention's noise sources are rejected
/// as not reproducing the fluctuation-dissipation strengths.
const CLOSURE_TOL: f64 = 1e-12;

/// Noise sources of one convention, read off its polariton map.
struct NoiseSources {
    convention: NoiseConvention,
    /// `|a_e|²`
    electric_strength: f64,
    /// `|a_m|²`
    magnetic_strength: f64,
    /// Factor multiplying `M_N` in the source of the `H` equation and in `B`.
    magnetisation_scale: Complex64,
}

impl NoiseSources {
    fn new(sample: &MediumSample, conv: NoiseConvention, phase: PhaseConvention) -> Result<Self> {
        let map = polariton_map(sample, conv, phase);
        let magnetisation_scale = match conv {
            NoiseConvention::OptionH => Complex64::new(1.0, 0.0),
            NoiseConvention::OptionB => sample.mu,
        };
        let sources = Self {
            convention: conv,
            electric_strength: map[0][0].norm_sqr(),
            magnetic_strength: map[1][1].norm_sqr(),
            magnetisation_scale,
        };
        sources.check_closure(sample)?;
        Ok(sources)
    }

    /// `⟨H H†⟩ ∝ Im G` only holds when the effective sources carry exactly
    /// `ω² Im μ` and `Im ε / |ε|²` (the Green's-function imaginary-part
    /// relation). Checked here so a mis-scaled convention cannot slip through.
    fn check_closure(&self, sample: &MediumSample) -> Result<()> {
        let magnetic = PI * self.magnetisation_scale.norm_sqr() * self.magnetic_strength;
        let electric = PI * self.electric_strength;
        let residual = [(magnetic, sample.mu.im), (electric, sample.eps.im)]
            .iter()
            .map(|&(got, want)| {
                let scale = got.abs().max(want.abs());
                if scale == 0.0 {
                    0.0
                } else {
                    (got - want).abs() / scale
                }
            })
            .fold(0.0, f64::max);
        if residual > CLOSURE_TOL {
            return Err(Error::ConventionMismatch {
                convention: self.convention.name(),
                residual,
            });
        }
        Ok(())
    }

    /// `⟨H H†⟩ = (ω²/π) Im⟨G⟩`.
    fn field_field(&self, sample: &MediumSample, inputs: &AveragedInputs) -> f64 {
        sample.omega * sample.omega / PI * inputs.greens.im
    }

    /// `⟨M_N M_N†⟩` averaged with the transverse delta.
    fn noise_noise(&self, inputs: &AveragedInputs) -> f64 {
        self.magnetic_strength * inputs.delta_perp
    }

    /// `⟨H M_N†⟩ = ω² · scale · |a_m|² · ⟨G⟩`.
    fn field_noise(&self, sample: &MediumSample, inputs: &AveragedInputs) -> Complex64 {
        sample.omega
            * sample.omega
            * self.magnetisation_scale
            * self.magnetic_strength
            * inputs.greens
    }

    /// `(α, β)` such that the coupled field is `α H + β M_N`.
    fn weights(&self, sample: &MediumSample, coupling: Coupling) -> (Complex64, Complex64) {
        let one = Complex64::new(1.0, 0.0);
        let s = self.magnetisation_scale;
        match coupling {
            Coupling::H => (one, Complex64::new(0.0, 0.0)),
            Coupling::B => (sample.mu, s),
            Coupling::Local => ((sample.mu + 2.0) / 3.0, s / 3.0),
        }
    }

    fn moments(
        &self,
        sample: &MediumSample,
        inputs: &AveragedInputs,
        coupling: Coupling,
    ) -> FieldMoments {
        let (alpha, beta) = self.weights(sample, coupling);
        FieldMoments {
            field: alpha.norm_sqr() * self.field_field(sample, inputs),
            noise: beta.norm_sqr() * self.noise_noise(inputs),
            cross: 2.0 * (alpha * beta.conj() * self.field_noise(sample, inputs)).re,
        }
    }
}

/// Term-by-term moment of the field selected by `coupling`, built from
/// arbitrary averaged inputs. Linear in `inputs`.
pub fn assemble(
    sample: &MediumSample,
    inputs: &AveragedInputs,
    coupling: Coupling,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> Result<FieldMoments> {
    let sources = NoiseSources::new(sample, conv, phase)?;
    Ok(sources.moments(sample, inputs, coupling))
}

/// Term-by-term averaged moment with the small-`R` Green's function.
pub fn coupling_terms_averaged(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    coupling: Coupling,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> Result<FieldMoments> {
    assemble(
        sample,
        &AveragedInputs::analytic(sample, sphere),
        coupling,
        conv,
        phase,
    )
}

fn averaged_cc(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    coupling: Coupling,
    conv: NoiseConvention,
    phase: PhaseConvention,
    kind: CorrelatorKind,
) -> Result<CorrelatorCoefficient> {
    let terms = coupling_terms_averaged(sample, sphere, coupling, conv, phase)?;
    Ok(CorrelatorCoefficient::real(
        terms.total(),
        kind,
        sample.omega,
        Some(sphere.r()),
    ))
}

/// `⟨H H†⟩` averaged, `(ω²/π) Im⟨G^H⟩`.
pub fn hh_cc_averaged(sample: &MediumSample, sphere: &AveragingSphere) -> CorrelatorCoefficient {
    hh_cc_averaged_in(
        sample,
        sphere,
        NoiseConvention::OptionH,
        PhaseConvention::DualSymmetric,
    )
    .expect("OptionH noise sources always close")
}

/// `⟨H H†⟩` assembled from the noise sources of the given convention.
pub fn hh_cc_averaged_in(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> Result<CorrelatorCoefficient> {
    averaged_cc(
        sample,
        sphere,
        Coupling::H,
        conv,
        phase,
        CorrelatorKind::MagneticField,
    )
}

/// `⟨H M_{N,H}†⟩` for `OptionH`; for `OptionB` the combination
/// `μ* ⟨H M_{N,B}†⟩`, which carries the same value.
pub fn h_mnoise_cross_cc(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    conv: NoiseConvention,
) -> Result<CorrelatorCoefficient> {
    let sources = NoiseSources::new(sample, conv, PhaseConvention::DualSymmetric)?;
    let inputs = AveragedInputs::analytic(sample, sphere);
    let raw = sources.field_noise(sample, &inputs);
    let value = match conv {
        NoiseConvention::OptionH => raw,
        NoiseConvention::OptionB => sample.mu.conj() * raw,
    };
    Ok(CorrelatorCoefficient {
        value,
        kind: CorrelatorKind::FieldNoiseCross(conv),
        omega: sample.omega,
        r: Some(sphere.r()),
    })
}

/// `⟨B B†⟩` averaged, in the `OptionH` convention.
pub fn bb_cc_averaged(sample: &MediumSample, sphere: &AveragingSphere) -> CorrelatorCoefficient {
    bb_cc_averaged_in(
        sample,
        sphere,
        NoiseConvention::OptionH,
        PhaseConvention::DualSymmetric,
    )
    .expect("OptionH noise sources always close")
}

pub fn bb_cc_averaged_in(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> Result<CorrelatorCoefficient> {
    averaged_cc(
        sample,
        sphere,
        Coupling::B,
        conv,
        phase,
        CorrelatorKind::Induction(conv),
    )
}

/// `⟨B_loc B_loc†⟩` averaged, with `B_loc = H_loc = ((μ+2)/3) H + (s/3) M_N`
/// and `s = 1` (`OptionH`) or `μ` (`OptionB`).
pub fn local_field_cc_averaged(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    conv: NoiseConvention,
    phase: PhaseConvention,
) -> Result<CorrelatorCoefficient> {
    averaged_cc(
        sample,
        sphere,
        Coupling::Local,
        conv,
        phase,
        CorrelatorKind::LocalField(conv),
    )
}

/// `⟨E E†⟩` averaged, `(ω²/π) Im⟨G^E⟩`.
pub fn ee_cc_averaged(sample: &MediumSample, sphere: &AveragingSphere) -> CorrelatorCoefficient {
    let greens = averaged_electric_greens_analytic(sample, sphere).coeff;
    CorrelatorCoefficient::real(
        sample.omega * sample.omega / PI * greens.im,
        CorrelatorKind::ElectricField,
        sample.omega,
        Some(sphere.r()),
    )
}

/// `⟨E P_N†⟩` averaged, `(ω²/π) Im ε ⟨G^E⟩`.
pub fn e_pnoise_cross_cc(sample: &MediumSample, sphere: &AveragingSphere) -> CorrelatorCoefficient {
    let greens = averaged_electric_greens_analytic(sample, sphere).coeff;
    CorrelatorCoefficient {
        value: sample.omega * sample.omega / PI * sample.eps.im * greens,
        kind: CorrelatorKind::ElectricFieldNoiseCross,
        omega: sample.omega,
        r: Some(sphere.r()),
    }
}

/// Electric local field `E_loc = ((ε+2)/3) E + P_N/3`, term by term.
pub fn electric_local_field_terms(sample: &MediumSample, sphere: &AveragingSphere) -> FieldMoments {
    let weight = (sample.eps + 2.0) / 3.0;
    let pp = noise_polarisation_cc(sample).value.re * averaged_delta(sphere).transverse;
    FieldMoments {
        field: weight.norm_sqr() * ee_cc_averaged(sample, sphere).value.re,
        noise: pp / 9.0,
        cross: 2.0 * (weight / 3.0 * e_pnoise_cross_cc(sample, sphere).value).re,
    }
}

pub fn electric_local_field_cc_averaged(
    sample: &MediumSample,
    sphere: &AveragingSphere,
) -> CorrelatorCoefficient {
    CorrelatorCoefficient::real(
        electric_local_field_terms(sample, sphere).total(),
        CorrelatorKind::ElectricLocalField,
        sample.omega,
        Some(sphere.r()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::medium::MediumModel;
    use crate::relative_difference as rel;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn example(omega: f64) -> MediumSample {
        MediumModel::example().sample(omega).unwrap()
    }

    fn sphere(r: f64) -> AveragingSphere {
        AveragingSphere::new(r).unwrap()
    }

    const DS: PhaseConvention = PhaseConvention::DualSymmetric;

    #[test]
    fn noise_polarisation_values() {
        let vac = MediumSample::vacuum(1.0).unwrap();
        assert_eq!(noise_polarisation_cc(&vac).value, c(0.0, 0.0));
        let v = noise_polarisation_cc(&example(1.0)).value;
        assert!((v.re - 1.25 / PI).abs() < 1e-15);
        assert!((v.re - 0.39789).abs() < 1e-5);
    }

    #[test]
    fn noise_magnetisation_conventions() {
        let vac = MediumSample::vacuum(1.0).unwrap();
        for conv in NoiseConvention::ALL {
            assert_eq!(noise_magnetisation_cc(&vac, conv).value.re, 0.0);
        }
        let s = example(0.5);
        let h = noise_magnetisation_cc(&s, NoiseConvention::OptionH)
            .value
            .re;
        assert!((h - 0.15625 / PI).abs() < 1e-15);
        for w in [0.2, 0.5, 0.9, 1.3] {
            let s = example(w);
            let h = noise_magnetisation_cc(&s, NoiseConvention::OptionH)
                .value
                .re;
            let b = noise_magnetisation_cc(&s, NoiseConvention::OptionB)
                .value
                .re;
            assert!((b * s.mu.norm_sqr() - h).abs() <= 1e-15 * h);
        }
    }

    #[test]
    fn kappa_identity() {
        // −Im(1/μ) = Im μ / |μ|²
        for mu in [c(1.0, 0.3), c(-2.0, 0.1), c(0.01, 5.0)] {
            let lhs = -mu.inv().im;
            let rhs = mu.im / mu.norm_sqr();
            assert!((lhs - rhs).abs() <= 1e-15 * rhs.abs());
        }
    }

    #[test]
    fn hh_values() {
        for r in [0.01, 0.3] {
            let v = hh_cc_averaged(&MediumSample::vacuum(1.0).unwrap(), &sphere(r))
                .value
                .re;
            assert!((v - 1.0 / (6.0 * PI * PI)).abs() < 1e-15);
        }
        let s = example(1.0);
        let r = 0.05;
        let expected = (s.eps / (6.0 * PI) * (2.0 / r + Complex64::i() * s.n)).im / PI;
        let v = hh_cc_averaged(&s, &sphere(r)).value.re;
        assert!((v - expected).abs() < 1e-14 * expected);
        for phase in [PhaseConvention::Conventional, DS] {
            let b = hh_cc_averaged_in(&s, &sphere(r), NoiseConvention::OptionB, phase).unwrap();
            assert!(rel(b.value, c(v, 0.0)) < 1e-12);
        }
    }

    #[test]
    fn cross_values() {
        let vac = MediumSample::vacuum(1.0).unwrap();
        let v = h_mnoise_cross_cc(&vac, &sphere(0.1), NoiseConvention::OptionH).unwrap();
        assert_eq!(v.value, c(0.0, 0.0));

        let s = example(0.5);
        let h = h_mnoise_cross_cc(&s, &sphere(0.05), NoiseConvention::OptionH).unwrap();
        let b = h_mnoise_cross_cc(&s, &sphere(0.05), NoiseConvention::OptionB).unwrap();
        assert!(rel(h.value, b.value) < 1e-12);

        // Purely dielectric medium: no magnetic noise, no cross term.
        let dielectric = MediumSample::from_response(0.5, s.eps, c(1.3, 0.0)).unwrap();
        let d = h_mnoise_cross_cc(&dielectric, &sphere(0.05), NoiseConvention::OptionH).unwrap();
        assert_eq!(d.value, c(0.0, 0.0));
    }

    #[test]
    fn bb_decomposition() {
        let vac = MediumSample::vacuum(0.8).unwrap();
        let sp = sphere(0.05);
        assert_eq!(
            bb_cc_averaged(&vac, &sp).value,
            hh_cc_averaged(&vac, &sp).value
        );

        let s = example(0.5);
        let terms =
            coupling_terms_averaged(&s, &sp, Coupling::B, NoiseConvention::OptionH, DS).unwrap();
        let hh = hh_cc_averaged(&s, &sp).value.re;
        let delta = averaged_delta(&sp).transverse;
        assert!((terms.field - s.mu.norm_sqr() * hh).abs() < 1e-14 * terms.field);
        assert!((terms.noise - s.mu.im / PI * delta).abs() < 1e-14 * terms.noise);
        // The noise-magnetisation term dominates near the magnetic resonance.
        assert!(terms.noise > 10.0 * terms.field.abs());
        assert!(terms.noise > 10.0 * terms.cross.abs());
    }

    #[test]
    fn local_field_vacuum_and_equivalence() {
        let vac = MediumSample::vacuum(0.8).unwrap();
        let sp = sphere(0.05);
        let l = local_field_cc_averaged(&vac, &sp, NoiseConvention::OptionH, DS).unwrap();
        assert!(rel(l.value, hh_cc_averaged(&vac, &sp).value) < 1e-15);

        let s = example(0.5);
        let h = local_field_cc_averaged(&s, &sp, NoiseConvention::OptionH, DS).unwrap();
        let b = local_field_cc_averaged(&s, &sp, NoiseConvention::OptionB, DS).unwrap();
        assert!(rel(h.value, b.value) < 1e-12);
        assert!(h.value.re > 0.0);
    }

    #[test]
    fn local_field_closed_coefficients() {
        // Cross term (2/3)(ω²/π) Im μ Re[((μ+2)/3) ⟨G⟩].
        let s = example(0.7);
        let sp = sphere(0.04);
        let terms = coupling_terms_averaged(&s, &sp, Coupling::Local, NoiseConvention::OptionH, DS)
            .unwrap();
        let g = averaged_greens_analytic(&s, &sp).coeff;
        let w2 = s.omega * s.omega;
        let cross = 2.0 / 3.0 * w2 / PI * s.mu.im * ((s.mu + 2.0) / 3.0 * g).re;
        assert!((terms.cross - cross).abs() < 1e-13 * cross.abs());
        let noise = s.mu.im / (9.0 * PI) * averaged_delta(&sp).transverse;
        assert!((terms.noise - noise).abs() < 1e-13 * noise);
    }

    #[test]
    fn polariton_maps() {
        let s = example(1.0);
        let m = polariton_map(&s, NoiseConvention::OptionH, DS);
        let root_pi = PI.sqrt();
        assert!((m[0][0] - c(0.0, 1.25f64.sqrt()) / root_pi).norm() < 1e-15);
        assert!((m[1][1] - c(0.0, s.mu.im.sqrt()) / root_pi).norm() < 1e-15);
        assert_eq!(m[0][1], c(0.0, 0.0));

        for w in [0.3, 0.5, 1.0] {
            let s = example(w);
            let conv = polariton_map(&s, NoiseConvention::OptionB, PhaseConvention::Conventional);
            let dual = polariton_map(&s, NoiseConvention::OptionB, DS);
            assert!((conv[1][1].norm() - dual[1][1].norm()).abs() < 1e-15);
            assert!(rel(conv[1][1], dual[1][1]) > 1e-3, "phases differ");
        }

        let vac = MediumSample::vacuum(1.0).unwrap();
        for conv in NoiseConvention::ALL {
            for phase in [PhaseConvention::Conventional, DS] {
                let m = polariton_map(&vac, conv, phase);
                assert!(m.iter().flatten().all(|z| *z == c(0.0, 0.0)));
            }
        }
    }

    #[test]
    fn mis_scaled_sources_are_rejected() {
        let s = example(0.5);
        let sources = NoiseSources {
            convention: NoiseConvention::OptionB,
            electric_strength: s.eps.im / PI,
            magnetic_strength: s.mu.im / PI,
            magnetisation_scale: s.mu,
        };
        assert!(matches!(
            sources.check_closure(&s),
            Err(Error::ConventionMismatch { .. })
        ));
    }

    #[test]
    fn electric_local_is_dual_of_magnetic() {
        let s = example(0.9);
        let sp = sphere(0.02);
        let e = electric_local_field_cc_averaged(&s, &sp);
        let m = local_field_cc_averaged(&s.dual(), &sp, NoiseConvention::OptionH, DS).unwrap();
        assert!(rel(e.value, m.value) < 1e-12);
    }
}
