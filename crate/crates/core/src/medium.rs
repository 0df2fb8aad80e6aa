//! Causal dispersive response of a homogeneous magneto-dielectric.
//!
//! Both `ε(ω)` and `μ(ω)` are sums of damped Lorentz oscillators,
//!
//! ```text
//! χ(ω) = 1 - Σ ω_L² / (ω² - ω_T² + 2iγω)
//! ```
//!
//! and the refractive index is the root of `εμ` on the attenuating branch
//! `Im n ≥ 0`. Frequencies are in units of the reference resonance `ω_Te`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One damped Lorentz resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawOscillator", into = "RawOscillator")]
pub struct LorentzOscillator {
    omega_l: f64,
    omega_t: f64,
    gamma: f64,
}

#[derive(Serialize, Deserialize)]
struct RawOscillator {
    omega_l: f64,
    omega_t: f64,
    gamma: f64,
}

impl TryFrom<RawOscillator> for LorentzOscillator {
    type Error = Error;

    fn try_from(raw: RawOscillator) -> Result<Self> {
        LorentzOscillator::new(raw.omega_l, raw.omega_t, raw.gamma)
    }
}

impl From<LorentzOscillator> for RawOscillator {
    fn from(osc: LorentzOscillator) -> Self {
        RawOscillator {
            omega_l: osc.omega_l,
            omega_t: osc.omega_t,
            gamma: osc.gamma,
        }
    }
}

impl LorentzOscillator {
    /// Coupling strength `omega_l`, resonance `omega_t` and damping `gamma`.
    /// Only absorbing oscillators (`gamma > 0`) are accepted.
    pub fn new(omega_l: f64, omega_t: f64, gamma: f64) -> Result<Self> {
        if !(omega_l.is_finite() && omega_l >= 0.0) {
            return Err(Error::InvalidOscillator(format!(
                "omega_L must be finite and >= 0, got {omega_l}"
            )));
        }
        if !(omega_t.is_finite() && omega_t > 0.0) {
            return Err(Error::InvalidOscillator(format!(
                "omega_T must be finite and > 0, got {omega_t}"
            )));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::InvalidOscillator(format!(
                "gamma must be finite and > 0, got {gamma}"
            )));
        }
        Ok(Self {
            omega_l,
            omega_t,
            gamma,
        })
    }

    pub fn omega_l(&self) -> f64 {
        self.omega_l
    }

    pub fn omega_t(&self) -> f64 {
        self.omega_t
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Contribution `ω_L² / (ω² - ω_T² + 2iγω)`; subtracted from unity by
    /// the medium.
    fn pole_term(&self, omega: f64) -> Complex64 {
        let denom = Complex64::new(
            omega * omega - self.omega_t * self.omega_t,
            2.0 * self.gamma * omega,
        );
        self.omega_l * self.omega_l / denom
    }
}

/// Electric and magnetic oscillator sets. An empty set is a vacuum response.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MediumModel {
    #[serde(default)]
    pub electric: Vec<LorentzOscillator>,
    #[serde(default)]
    pub magnetic: Vec<LorentzOscillator>,
}

impl MediumModel {
    pub fn vacuum() -> Self {
        Self::default()
    }

    /// Single-resonance example medium: `ω_Le = ω_Te/2`, `γ_e = ω_Te/10`,
    /// `ω_Lm = ω_Te/8`, `ω_Tm = ω_Te/2`, `γ_m = ω_Te/10`.
    pub fn example() -> Self {
        Self {
            electric: vec![LorentzOscillator {
                omega_l: 0.5,
                omega_t: 1.0,
                gamma: 0.1,
            }],
            magnetic: vec![LorentzOscillator {
                omega_l: 0.125,
                omega_t: 0.5,
                gamma: 0.1,
            }],
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.electric.is_empty() && self.magnetic.is_empty()
    }

    pub fn permittivity(&self, omega: f64) -> Result<Complex64> {
        eval_permittivity(self, omega)
    }

    pub fn permeability(&self, omega: f64) -> Result<Complex64> {
        eval_permeability(self, omega)
    }

    pub fn sample(&self, omega: f64) -> Result<MediumSample> {
        sample(self, omega)
    }
}

fn check_frequency(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "frequency must be finite and > 0, got {omega}"
        )))
    }
}

fn response(oscillators: &[LorentzOscillator], omega: f64) -> Complex64 {
    oscillators
        .iter()
        .fold(Complex64::new(1.0, 0.0), |acc, osc| {
            acc - osc.pole_term(omega)
        })
}

/// Relative permittivity `ε(ω)` summed over the electric oscillators.
pub fn eval_permittivity(model: &MediumModel, omega: f64) -> Result<Complex64> {
    check_frequency(omega)?;
    Ok(response(&model.electric, omega))
}

/// Relative permeability `μ(ω)` summed over the magnetic oscillators.
pub fn eval_permeability(model: &MediumModel, omega: f64) -> Result<Complex64> {
    check_frequency(omega)?;
    Ok(response(&model.magnetic, omega))
}

/// Why the attenuating branch of `√(εμ)` cannot be picked from `εμ` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchAmbiguity {
    /// `εμ` is real and negative: both roots are purely imaginary and the
    /// medium is lossless, so attenuation does not single one out.
    NegativeRealProduct,
    /// `ε` and `μ` are both real and negative: `εμ > 0` but a negative-index
    /// medium would call for `n < 0`.
    DoubleNegative,
}

/// Reports when the passive-branch rule is not physically decisive.
pub fn branch_ambiguity(eps: Complex64, mu: Complex64) -> Option<BranchAmbiguity> {
    let product = eps * mu;
    if product.im != 0.0 {
        return None;
    }
    if product.re < 0.0 {
        Some(BranchAmbiguity::NegativeRealProduct)
    } else if eps.im == 0.0 && mu.im == 0.0 && eps.re < 0.0 && mu.re < 0.0 {
        Some(BranchAmbiguity::DoubleNegative)
    } else {
        None
    }
}

/// `n = √(εμ)` on the branch with `Im n ≥ 0`; for real positive `εμ` the
/// positive root. Ambiguous lossless points are resolved the same way but
/// logged as a warning.
pub fn refractive_index(eps: Complex64, mu: Complex64) -> Result<Complex64> {
    let product = eps * mu;
    if product == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularMedium(product));
    }
    if let Some(kind) = branch_ambiguity(eps, mu) {
        log::warn!(
            "refractive index branch is ambiguous for eps = {eps}, mu = {mu} ({kind:?}); \
             returning the root with Im n >= 0, Re n >= 0"
        );
    }
    let root = product.sqrt();
    Ok(if root.im < 0.0 { -root } else { root })
}

/// `ε`, `μ` and `n` at one frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MediumSample {
    pub omega: f64,
    pub eps: Complex64,
    pub mu: Complex64,
    pub n: Complex64,
}

impl MediumSample {
    /// Builds a sample from raw response values, selecting the passive branch.
    pub fn from_response(omega: f64, eps: Complex64, mu: Complex64) -> Result<Self> {
        check_frequency(omega)?;
        let n = refractive_index(eps, mu)?;
        Ok(Self { omega, eps, mu, n })
    }

    pub fn vacuum(omega: f64) -> Result<Self> {
        Self::from_response(omega, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// `Im ε ≥ 0` and `Im μ ≥ 0`.
    pub fn is_passive(&self) -> bool {
        self.eps.im >= 0.0 && self.mu.im >= 0.0
    }

    pub fn dual(&self) -> Self {
        dual_medium(self)
    }
}

/// Evaluates `ε`, `μ` and `n` of `model` at `omega`.
pub fn sample(model: &MediumModel, omega: f64) -> Result<MediumSample> {
    let eps = eval_permittivity(model, omega)?;
    let mu = eval_permeability(model, omega)?;
    MediumSample::from_response(omega, eps, mu)
}

/// The θ = π/2 dual description: `ε⋆ = μ`, `μ⋆ = ε`, `n` unchanged.
pub fn dual_medium(sample: &MediumSample) -> MediumSample {
    MediumSample {
        omega: sample.omega,
        eps: sample.mu,
        mu: sample.eps,
        n: sample.n,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // Independent evaluation in polar form: √(r e^{iφ}) = √r e^{iφ/2}, φ ∈ (-π, π].
    fn polar_sqrt(z: Complex64) -> Complex64 {
        let r = (z.re * z.re + z.im * z.im).sqrt();
        let phi = z.im.atan2(z.re);
        Complex64::from_polar(r.sqrt(), phi / 2.0)
    }

    #[test]
    fn vacuum_response_is_unity() {
        let vac = MediumModel::vacuum();
        assert_eq!(vac.permittivity(0.7).unwrap(), c(1.0, 0.0));
        assert_eq!(vac.permeability(0.7).unwrap(), c(1.0, 0.0));
        let s = vac.sample(1.0).unwrap();
        assert_eq!((s.eps, s.mu, s.n), (c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)));
    }

    #[test]
    fn permittivity_at_electric_resonance() {
        // Real part of the denominator vanishes: ε = 1 + i ω_Le²/(2γ_e ω_Te).
        let eps = MediumModel::example().permittivity(1.0).unwrap();
        assert!((eps - c(1.0, 1.25)).norm() < 1e-14);
    }

    #[test]
    fn permeability_at_magnetic_resonance() {
        let mu = MediumModel::example().permeability(0.5).unwrap();
        let expected = c(1.0, 0.125 * 0.125 / (2.0 * 0.1 * 0.5));
        assert!((mu - expected).norm() < 1e-14);
        assert!((expected.im - 0.15625).abs() < 1e-15);
    }

    #[test]
    fn static_limits() {
        let model = MediumModel::example();
        let eps = model.permittivity(1e-9).unwrap();
        let mu = model.permeability(1e-9).unwrap();
        assert!((eps - c(1.25, 0.0)).norm() < 1e-6);
        assert!((mu - c(1.0625, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn high_frequency_limit() {
        let model = MediumModel::example();
        let eps = model.permittivity(1e3).unwrap();
        let mu = model.permeability(1e3).unwrap();
        assert!((eps - 1.0).norm() < 1e-4);
        assert!((mu - 1.0).norm() < 1e-4);
    }

    #[test]
    fn non_positive_frequency_is_rejected() {
        let model = MediumModel::example();
        assert!(matches!(model.permittivity(0.0), Err(Error::Domain(_))));
        assert!(matches!(model.permeability(-1.0), Err(Error::Domain(_))));
        assert!(matches!(model.sample(f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn oscillator_validation() {
        assert!(LorentzOscillator::new(0.5, 1.0, 0.0).is_err());
        assert!(LorentzOscillator::new(-0.1, 1.0, 0.1).is_err());
        assert!(LorentzOscillator::new(0.5, 0.0, 0.1).is_err());
        assert!(LorentzOscillator::new(0.0, 1.0, 0.1).is_ok());
    }

    #[test]
    fn oscillator_json_is_validated() {
        let bad = r#"{"omega_l": 0.5, "omega_t": 1.0, "gamma": -0.1}"#;
        assert!(serde_json::from_str::<LorentzOscillator>(bad).is_err());
        let good = r#"{"electric": [{"omega_l": 0.5, "omega_t": 1.0, "gamma": 0.1}]}"#;
        let model: MediumModel = serde_json::from_str(good).unwrap();
        assert_eq!(model.electric.len(), 1);
        assert!(model.magnetic.is_empty());
    }

    #[test]
    fn refractive_index_examples() {
        assert_eq!(
            refractive_index(c(1.0, 0.0), c(1.0, 0.0)).unwrap(),
            c(1.0, 0.0)
        );
        let eps = c(1.0, 1.25);
        let mu = c(0.98055, 0.00519);
        let n = refractive_index(eps, mu).unwrap();
        assert!((n - polar_sqrt(eps * mu)).norm() < 1e-14);
        assert!((n - c(1.1278, 0.5457)).norm() < 1e-4);
    }

    #[test]
    fn refractive_index_singular() {
        assert!(matches!(
            refractive_index(c(0.0, 0.0), c(2.0, 1.0)),
            Err(Error::SingularMedium(_))
        ));
    }

    #[test]
    fn ambiguous_branches_are_flagged() {
        assert_eq!(
            branch_ambiguity(c(-1.0, 0.0), c(-1.0, 0.0)),
            Some(BranchAmbiguity::DoubleNegative)
        );
        assert_eq!(
            branch_ambiguity(c(-2.0, 0.0), c(1.0, 0.0)),
            Some(BranchAmbiguity::NegativeRealProduct)
        );
        assert_eq!(branch_ambiguity(c(1.0, 0.1), c(1.0, 0.0)), None);
        // Still resolved to the documented branch.
        assert_eq!(
            refractive_index(c(-1.0, 0.0), c(-1.0, 0.0)).unwrap(),
            c(1.0, 0.0)
        );
        assert_eq!(
            refractive_index(c(-4.0, 0.0), c(1.0, 0.0)).unwrap(),
            c(0.0, 2.0)
        );
    }

    #[test]
    fn example_sample_at_electric_resonance() {
        let s = MediumModel::example().sample(1.0).unwrap();
        // Frozen from an independent principal-root evaluation of the product.
        assert!((s.eps - c(1.0, 1.25)).norm() < 1e-14);
        assert!((s.mu - c(0.980_549_792_531_120_3, 0.005_186_721_991_701_245)).norm() < 1e-14);
        assert!((s.n - c(1.127_770_784_516_094_5, 0.545_711_052_083_933_3)).norm() < 1e-13);
    }

    #[test]
    fn magnetic_resonance_located_by_grid_search() {
        let model = MediumModel::example();
        let (peak, _) = (1..=400)
            .map(|i| 0.3 + 0.4 * i as f64 / 400.0)
            .map(|w| (w, model.permeability(w).unwrap().im))
            .fold(
                (0.0, f64::MIN),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            );
        assert!((peak - 0.5).abs() < 0.02, "Im mu peaks at {peak}");
    }

    #[test]
    fn dual_medium_swaps_response() {
        let s = MediumSample::from_response(1.0, c(2.0, 1.0), c(1.0, 0.0)).unwrap();
        let d = dual_medium(&s);
        assert_eq!((d.eps, d.mu, d.n), (c(1.0, 0.0), c(2.0, 1.0), s.n));
        assert_eq!(dual_medium(&d), s);

        let swapped = MediumModel::example().sample(1.0).unwrap().dual();
        assert!((swapped.eps - c(0.98055, 0.00519)).norm() < 1e-5);
        assert!((swapped.mu - c(1.0, 1.25)).norm() < 1e-14);
    }
}
