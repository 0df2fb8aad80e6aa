//! Heaviside-Larmor duality.
//!
//! Field pairs rotate as `(a, b) → (cos θ a + sin θ b, −sin θ a + cos θ b)` for
//! any angle. Medium and noise transforms exist only for multiples of `π/2`;
//! other angles would need a magneto-electric response.
//!
//! With the `OptionB` noise convention the `π/2` transform is not a rotation
//! at operator level: noise and polariton labels pick up medium-dependent
//! multipliers ([`transform_table_option2`]). Expectation values remain dual
//! symmetric, which [`verify_expectation_duality`] checks term by term.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::correlators::{
    coupling_terms_averaged, e_pnoise_cross_cc, ee_cc_averaged, electric_local_field_terms,
    noise_polarisation_cc, Coupling, FieldMoments, NoiseConvention, PhaseConvention,
};
use crate::decay::{electric_local_rate, gamma_local, Dipole, DipoleKind};
use crate::greens::{averaged_delta, AveragingSphere};
use crate::medium::{dual_medium, MediumSample};
use crate::{relative_difference, Error, Result};

pub type Vec3 = [Complex64; 3];

const QUARTER_TURN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DualityAngle {
    pub theta: f64,
}

impl DualityAngle {
    pub const ZERO: Self = Self { theta: 0.0 };
    pub const QUARTER: Self = Self { theta: FRAC_PI_2 };

    pub fn new(theta: f64) -> Self {
        Self { theta }
    }

    /// Number of quarter turns modulo 4, if `theta` is a multiple of `π/2`.
    pub fn quarter_turns(&self) -> Option<u8> {
        let k = self.theta / FRAC_PI_2;
        let nearest = k.round();
        if (k - nearest).abs() > QUARTER_TURN_TOL * nearest.abs().max(1.0) {
            return None;
        }
        Some(nearest.rem_euclid(4.0) as u8)
    }

    /// `(cos θ, sin θ)`, exact for multiples of `π/2`.
    fn cos_sin(&self) -> (f64, f64) {
        match self.quarter_turns() {
            Some(0) => (1.0, 0.0),
            Some(1) => (0.0, 1.0),
            Some(2) => (-1.0, 0.0),
            Some(3) => (0.0, -1.0),
            _ => (self.theta.cos(), self.theta.sin()),
        }
    }
}

/// Rotates a pair of complex 3-vectors componentwise.
pub fn rotate_pair(theta: DualityAngle, a: Vec3, b: Vec3) -> (Vec3, Vec3) {
    let (c, s) = theta.cos_sin();
    let rotated_a = std::array::from_fn(|i| a[i] * c + b[i] * s);
    let rotated_b = std::array::from_fn(|i| -a[i] * s + b[i] * c);
    (rotated_a, rotated_b)
}

/// Transforms `(P_N, M_{N,H})`, which rotate like a field pair under the
/// `OptionH` convention.
pub fn transform_noise_option1(
    theta: DualityAngle,
    p: Complex64,
    m: Complex64,
) -> Result<(Complex64, Complex64)> {
    if theta.quarter_turns().is_none() {
        return Err(Error::UnsupportedAngle(theta.theta));
    }
    let (c, s) = theta.cos_sin();
    Ok((p * c + m * s, -p * s + m * c))
}

/// Bilinear energy combination `D·E + B·H` (no complex conjugation).
pub fn energy_density(e: &Vec3, d: &Vec3, h: &Vec3, b: &Vec3) -> Complex64 {
    dot(d, e) + dot(b, h)
}

/// `E × H`.
pub fn poynting(e: &Vec3, h: &Vec3) -> Vec3 {
    [
        e[1] * h[2] - e[2] * h[1],
        e[2] * h[0] - e[0] * h[2],
        e[0] * h[1] - e[1] * h[0],
    ]
}

fn dot(a: &Vec3, b: &Vec3) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Labels acted on by the `π/2` transform tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantity {
    E,
    H,
    D,
    B,
    ElectricDipole,
    MagneticDipole,
    Permittivity,
    Permeability,
    NoisePolarisation,
    NoiseMagnetisationB,
    PolaritonElectric,
    PolaritonMagnetic,
}

impl Quantity {
    pub const ALL: [Quantity; 12] = [
        Quantity::E,
        Quantity::H,
        Quantity::D,
        Quantity::B,
        Quantity::ElectricDipole,
        Quantity::MagneticDipole,
        Quantity::Permittivity,
        Quantity::Permeability,
        Quantity::NoisePolarisation,
        Quantity::NoiseMagnetisationB,
        Quantity::PolaritonElectric,
        Quantity::PolaritonMagnetic,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Quantity::E => "E",
            Quantity::H => "H",
            Quantity::D => "D",
            Quantity::B => "B",
            Quantity::ElectricDipole => "d",
            Quantity::MagneticDipole => "m",
            Quantity::Permittivity => "eps",
            Quantity::Permeability => "mu",
            Quantity::NoisePolarisation => "P_N",
            Quantity::NoiseMagnetisationB => "M_{N,B}",
            Quantity::PolaritonElectric => "f_e",
            Quantity::PolaritonMagnetic => "f_m",
        }
    }

    /// Response functions swap without a sign; everything else is a pair
    /// component and picks up `−1` under a half turn.
    pub fn is_response(&self) -> bool {
        matches!(self, Quantity::Permittivity | Quantity::Permeability)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Quantity::ALL
            .into_iter()
            .find(|q| q.label() == s)
            .ok_or_else(|| Error::Domain(format!("unknown quantity label {s:?}")))
    }
}

/// Multiplier of a transform rule, kept symbolic until a sample is supplied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Multiplier {
    Constant(f64),
    /// `μ`
    Mu,
    /// `−1/ε`
    MinusInverseEps,
    /// `−i μ/|μ|`
    MinusIPhaseMu,
    /// `−i |ε|/ε`
    MinusIInversePhaseEps,
}

impl Multiplier {
    pub fn resolve(&self, sample: &MediumSample) -> Complex64 {
        let minus_i = -Complex64::i();
        match *self {
            Multiplier::Constant(c) => c.into(),
            Multiplier::Mu => sample.mu,
            Multiplier::MinusInverseEps => -sample.eps.inv(),
            Multiplier::MinusIPhaseMu => minus_i * sample.mu / sample.mu.norm(),
            Multiplier::MinusIInversePhaseEps => minus_i * sample.eps.norm() / sample.eps,
        }
    }

    pub fn is_medium_dependent(&self) -> bool {
        !matches!(self, Multiplier::Constant(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rule {
    pub target: Quantity,
    pub multiplier: Multiplier,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransformTable {
    rules: BTreeMap<Quantity, Rule>,
}

impl TransformTable {
    pub fn rule(&self, q: Quantity) -> Option<&Rule> {
        self.rules.get(&q)
    }

    pub fn rules(&self) -> impl Iterator<Item = (&Quantity, &Rule)> {
        self.rules.iter()
    }

    /// `q⋆` with its multiplier evaluated in `sample`.
    pub fn apply(&self, q: Quantity, sample: &MediumSample) -> Result<(Quantity, Complex64)> {
        let rule = self
            .rule(q)
            .ok_or_else(|| Error::Domain(format!("no transform rule for {q}")))?;
        Ok((rule.target, rule.multiplier.resolve(sample)))
    }

    /// `(q⋆)⋆`: the second application sees the transformed medium.
    pub fn apply_twice(&self, q: Quantity, sample: &MediumSample) -> Result<(Quantity, Complex64)> {
        let (once, first) = self.apply(q, sample)?;
        let (twice, second) = self.apply(once, &dual_medium(sample))?;
        Ok((twice, first * second))
    }
}

fn table(rules: &[(Quantity, Quantity, Multiplier)]) -> TransformTable {
    TransformTable {
        rules: rules
            .iter()
            .map(|&(from, target, multiplier)| (from, Rule { target, multiplier }))
            .collect(),
    }
}

fn pair_rules() -> Vec<(Quantity, Quantity, Multiplier)> {
    use Multiplier::Constant;
    use Quantity::*;
    vec![
        (E, H, Constant(1.0)),
        (H, E, Constant(-1.0)),
        (D, B, Constant(1.0)),
        (B, D, Constant(-1.0)),
        (ElectricDipole, MagneticDipole, Constant(1.0)),
        (MagneticDipole, ElectricDipole, Constant(-1.0)),
        (Permittivity, Permeability, Constant(1.0)),
        (Permeability, Permittivity, Constant(1.0)),
    ]
}

/// `π/2` table for the `OptionH` convention: polaritons rotate like the
/// fields. Its noise pair `(P_N, M_{N,H})` is handled by
/// [`transform_noise_option1`].
pub fn transform_table_option1() -> TransformTable {
    use Multiplier::Constant;
    use Quantity::*;
    let mut rules = pair_rules();
    rules.extend([
        (PolaritonElectric, PolaritonMagnetic, Constant(1.0)),
        (PolaritonMagnetic, PolaritonElectric, Constant(-1.0)),
    ]);
    table(&rules)
}

/// `π/2` table for the `OptionB` convention with the duality-fixed phases.
pub fn transform_table_option2() -> TransformTable {
    use Multiplier::*;
    use Quantity::*;
    let mut rules = pair_rules();
    rules.extend([
        (NoisePolarisation, NoiseMagnetisationB, Mu),
        (NoiseMagnetisationB, NoisePolarisation, MinusInverseEps),
        (PolaritonElectric, PolaritonMagnetic, MinusIPhaseMu),
        (PolaritonMagnetic, PolaritonElectric, MinusIInversePhaseEps),
    ]);
    table(&rules)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum LocalFieldTerm {
    /// `|(μ+2)/3|² ⟨H H†⟩`
    Field,
    /// `(|μ|²/9) ⟨M_{N,B} M_{N,B}†⟩`
    Noise,
    /// `2 Re[((μ+2)/9) μ* ⟨H M_{N,B}†⟩]`
    Cross,
}

impl LocalFieldTerm {
    pub const ALL: [LocalFieldTerm; 3] = [
        LocalFieldTerm::Field,
        LocalFieldTerm::Noise,
        LocalFieldTerm::Cross,
    ];

    fn pick(&self, m: &FieldMoments) -> f64 {
        match self {
            LocalFieldTerm::Field => m.field,
            LocalFieldTerm::Noise => m.noise,
            LocalFieldTerm::Cross => m.cross,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TermResidual {
    pub term: LocalFieldTerm,
    /// Magnetic-dipole term assembled on the dual medium.
    pub direct: f64,
    /// Magnetic term on this medium, mapped through the operator table.
    pub transformed: f64,
    /// Electric-dipole term assembled on this medium.
    pub electric: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub omega: f64,
    pub terms: Vec<TermResidual>,
    /// Magnetic local-field rate on the dual medium vs. the electric rate.
    pub rate_residual: f64,
    /// True when some applied rule had a multiplier that is not `±1`.
    pub operator_asymmetric: bool,
}

impl DualityReport {
    pub fn max_residual(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.residual)
            .fold(self.rate_residual, f64::max)
    }
}

fn max_spread(values: &[f64]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            worst = worst.max(relative_difference((*a).into(), (*b).into()));
        }
    }
    worst
}

/// Checks that the `OptionB` local-field correlator is dual symmetric term by
/// term even though its operators transform asymmetrically.
///
/// Each magnetic term is starred with [`transform_table_option2`]: the
/// weights get `μ → ε` and each operator is replaced by its image times the
/// resolved multiplier. The result must match both the electric local-field
/// term on `sample` and the magnetic term assembled on `dual_medium(sample)`.
pub fn verify_expectation_duality(
    sample: &MediumSample,
    sphere: &AveragingSphere,
    dipole: &Dipole,
) -> Result<DualityReport> {
    if !sample.is_passive() {
        return Err(Error::Domain(format!(
            "duality check needs a passive medium, got ε = {}, μ = {}",
            sample.eps, sample.mu
        )));
    }
    let conv = NoiseConvention::OptionB;
    let phase = PhaseConvention::DualSymmetric;
    let dual = dual_medium(sample);
    let direct = coupling_terms_averaged(&dual, sphere, Coupling::Local, conv, phase)?;
    let electric = electric_local_field_terms(sample, sphere);

    let table = transform_table_option2();
    let (h_target, h_mult) = table.apply(Quantity::H, sample)?;
    let (m_target, m_mult) = table.apply(Quantity::NoiseMagnetisationB, sample)?;
    let (mu_target, _) = table.apply(Quantity::Permeability, sample)?;
    debug_assert_eq!(
        (h_target, m_target, mu_target),
        (
            Quantity::E,
            Quantity::NoisePolarisation,
            Quantity::Permittivity
        )
    );
    let operator_asymmetric = [h_mult, m_mult]
        .iter()
        .any(|m| (m.norm() - 1.0).abs() > 1e-15 || m.im != 0.0);

    // Starred weights of H and M_{N,B}: (μ+2)/3 and μ/3 with μ⋆ = ε.
    let mu_star = sample.eps;
    let alpha = (mu_star + 2.0) / 3.0;
    let beta = mu_star / 3.0;
    let ee = ee_cc_averaged(sample, sphere).value.re;
    let pp = noise_polarisation_cc(sample).value.re * averaged_delta(sphere).transverse;
    let ep = e_pnoise_cross_cc(sample, sphere).value;
    let transformed = FieldMoments {
        field: alpha.norm_sqr() * h_mult.norm_sqr() * ee,
        noise: beta.norm_sqr() * m_mult.norm_sqr() * pp,
        cross: 2.0 * (alpha * beta.conj() * h_mult * m_mult.conj() * ep).re,
    };

    let terms = LocalFieldTerm::ALL
        .iter()
        .map(|term| {
            let (d, t, e) = (
                term.pick(&direct),
                term.pick(&transformed),
                term.pick(&electric),
            );
            TermResidual {
                term: *term,
                direct: d,
                transformed: t,
                electric: e,
                residual: max_spread(&[d, t, e]),
            }
        })
        .collect();

    let magnetic = Dipole::new(dipole.m(), dipole.omega_a(), DipoleKind::Magnetic)?;
    let electric_dipole = Dipole::new(dipole.m(), dipole.omega_a(), DipoleKind::Electric)?;
    let rates = [
        gamma_local(&magnetic, &dual, sphere, conv)?.gamma_total,
        electric_local_rate(&electric_dipole, sample, sphere)?.gamma_total,
    ];

    Ok(DualityReport {
        omega: sample.omega,
        terms,
        rate_residual: max_spread(&rates),
        operator_asymmetric,
    })
}
