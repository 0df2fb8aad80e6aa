//! Property suites behind the `verify` command. Each check reports its worst
//! residual against a tolerance; nothing here panics or short-circuits on a
//! failed comparison.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::correlators::{Coupling, NoiseConvention, PhaseConvention};
use crate::decay::{closed_form, gamma_0, gamma_from_correlators, Dipole};
use crate::duality::verify_expectation_duality;
use crate::greens::{
    averaged_greens_analytic, averaged_greens_numeric, greens_identity_check, greens_kmode,
    AveragingSphere,
};
use crate::medium::{MediumModel, MediumSample};
use crate::relative_difference;
use crate::sweep::OmegaGrid;
use crate::{Error, Result};

pub const EXACT_TOL: f64 = 1e-12;

/// Tolerances of the averaging oracle by `|n ω R|`.
pub const ORACLE_TIERS: [(f64, f64); 2] = [(0.03, 0.02), (0.1, 0.10)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Suite {
    Duality,
    Conventions,
    Oracle,
    Identities,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Duality,
        Suite::Conventions,
        Suite::Oracle,
        Suite::Identities,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Duality => "duality",
            Suite::Conventions => "conventions",
            Suite::Oracle => "oracle",
            Suite::Identities => "identities",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    /// Set when a computation failed outright.
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.worst <= self.tolerance
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        writeln!(f, "[{status}] {}", self.suite.name())?;
        for c in &self.checks {
            let mark = if c.passed() { "ok  " } else { "FAIL" };
            write!(
                f,
                "  {mark} {:<48} worst {:.3e}  (tol {:.1e}, {} samples)",
                c.name, c.worst, c.tolerance, c.samples
            )?;
            if let Some(e) = &c.error {
                write!(f, "  error: {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Accumulates the worst residual of one check.
struct Tally {
    name: String,
    tolerance: f64,
    worst: f64,
    samples: usize,
    error: Option<String>,
}

impl Tally {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            tolerance,
            worst: 0.0,
            samples: 0,
            error: None,
        }
    }

    fn record(&mut self, residual: Result<f64>) {
        self.samples += 1;
        match residual {
            Ok(r) if r.is_nan() => self.worst = f64::INFINITY,
            Ok(r) => self.worst = self.worst.max(r),
            Err(e) if self.error.is_none() => self.error = Some(e.to_string()),
            Err(_) => {}
        }
    }

    fn finish(self) -> Check {
        Check {
            name: self.name,
            worst: self.worst,
            tolerance: self.tolerance,
            samples: self.samples,
            error: self.error,
        }
    }
}

/// Medium, band and radii the suites sweep over.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    pub medium: MediumModel,
    pub grid: OmegaGrid,
    /// Values of `|n(ω) ω R|` used for the exact suites.
    pub size_parameters: Vec<f64>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            medium: MediumModel::example(),
            grid: OmegaGrid {
                min: 0.05,
                max: 1.5,
                count: 60,
            },
            size_parameters: vec![0.01, 0.03, 0.1],
        }
    }
}

impl VerifyOptions {
    pub fn vacuum() -> Self {
        Self {
            medium: MediumModel::vacuum(),
            ..Self::default()
        }
    }

    fn points(&self) -> Result<Vec<(MediumSample, Vec<AveragingSphere>)>> {
        self.grid
            .points()
            .into_iter()
            .map(|w| {
                let s = self.medium.sample(w)?;
                let spheres = self
                    .size_parameters
                    .iter()
                    .map(|x| AveragingSphere::new(x / (s.n.norm() * w)))
                    .collect::<Result<Vec<_>>>()?;
                Ok((s, spheres))
            })
            .collect()
    }
}

fn rel(a: f64, b: f64) -> f64 {
    relative_difference(a.into(), b.into())
}

fn duality_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut terms = Tally::new("per-term expectation duality", EXACT_TOL);
    let mut rates = Tally::new("local rate on dual medium vs electric rate", EXACT_TOL);
    for (s, spheres) in opts.points()? {
        let dipole = Dipole::magnetic(1.0, s.omega)?;
        for sphere in &spheres {
            match verify_expectation_duality(&s, sphere, &dipole) {
                Ok(report) => {
                    let worst = report.terms.iter().map(|t| t.residual).fold(0.0, f64::max);
                    terms.record(Ok(worst));
                    rates.record(Ok(report.rate_residual));
                }
                Err(e) => terms.record(Err(e)),
            }
        }
    }
    Ok(vec![terms.finish(), rates.finish()])
}

fn conventions_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut conventions = Tally::new("OptionH vs OptionB (dual-symmetric phase)", EXACT_TOL);
    let mut phases = Tally::new("OptionB conventional vs dual-symmetric phase", EXACT_TOL);
    let mut closed = Tally::new("assembled vs closed-form rates", EXACT_TOL);
    for (s, spheres) in opts.points()? {
        let dipole = Dipole::magnetic(1.0, s.omega)?;
        for sphere in &spheres {
            for coupling in Coupling::ALL {
                let rate = |conv, phase| {
                    gamma_from_correlators(&dipole, &s, sphere, coupling, conv, phase)
                        .map(|r| r.gamma_total)
                };
                let h = rate(NoiseConvention::OptionH, PhaseConvention::DualSymmetric);
                let b = rate(NoiseConvention::OptionB, PhaseConvention::DualSymmetric);
                let b_conv = rate(NoiseConvention::OptionB, PhaseConvention::Conventional);
                let reference =
                    closed_form(coupling, &dipole, &s, sphere, NoiseConvention::OptionH)
                        .map(|r| r.gamma_total);
                let pair = |a: &Result<f64>, b: &Result<f64>| match (a, b) {
                    (Ok(a), Ok(b)) => Ok(rel(*a, *b)),
                    (Err(e), _) | (_, Err(e)) => Err(Error::Domain(e.to_string())),
                };
                conventions.record(pair(&h, &b));
                phases.record(pair(&b, &b_conv));
                closed.record(pair(&h, &reference));
                closed.record(pair(&b, &reference));
            }
        }
    }
    Ok(vec![conventions.finish(), phases.finish(), closed.finish()])
}

fn oracle_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for (size, tol) in ORACLE_TIERS {
        let mut tally = Tally::new(
            format!("averaged G^H analytic vs k-space, |nwR| <= {size}"),
            tol,
        );
        for w in opts.grid.points() {
            let s = opts.medium.sample(w)?;
            let sphere = AveragingSphere::new(size / (s.n.norm() * w))?;
            let analytic = averaged_greens_analytic(&s, &sphere).coeff;
            tally.record(
                averaged_greens_numeric(&s, &sphere)
                    .map(|n| relative_difference(analytic, n.coeff)),
            );
        }
        checks.push(tally.finish());
    }
    Ok(checks)
}

/// Relative residual of the per-mode Green's identity.
pub fn identity_residual(k: f64, sample: &MediumSample) -> Result<f64> {
    let raw = greens_identity_check(k, sample)?;
    let scale = greens_kmode(k, sample)?.im.abs();
    Ok(if raw == 0.0 { 0.0 } else { raw.abs() / scale })
}

fn identities_suite(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut identity = Tally::new("per-mode Green's identity", EXACT_TOL);
    let mut channels = Tally::new("channels sum to total", EXACT_TOL);
    let mut vacuum = Tally::new("vacuum rates equal gamma_0", 1e-14);
    for (s, spheres) in opts.points()? {
        let q = (s.n * s.omega).norm();
        for j in 0..25 {
            let k = q * 10f64.powf(-2.0 + 4.0 * j as f64 / 24.0);
            identity.record(identity_residual(k, &s));
        }
        let dipole = Dipole::magnetic(1.0, s.omega)?;
        let vac = MediumSample::vacuum(s.omega)?;
        for sphere in &spheres {
            for coupling in Coupling::ALL {
                channels.record(
                    closed_form(coupling, &dipole, &s, sphere, NoiseConvention::OptionH)
                        .map(|r| rel(r.channels.sum(), r.gamma_total)),
                );
                vacuum.record(
                    closed_form(coupling, &dipole, &vac, sphere, NoiseConvention::OptionH)
                        .map(|r| rel(r.gamma_total, gamma_0(&dipole))),
                );
            }
        }
    }
    Ok(vec![identity.finish(), channels.finish(), vacuum.finish()])
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let checks = match suite {
        Suite::Duality => duality_suite(opts),
        Suite::Conventions => conventions_suite(opts),
        Suite::Oracle => oracle_suite(opts),
        Suite::Identities => identities_suite(opts),
    };
    let checks = checks.unwrap_or_else(|e| {
        vec![Check {
            name: "setup".into(),
            worst: f64::INFINITY,
            tolerance: 0.0,
            samples: 0,
            error: Some(e.to_string()),
        }]
    });
    SuiteReport { suite, checks }
}

/// Runs the named suite, or all of them for `None`.
pub fn verify(suite: Option<Suite>, opts: &VerifyOptions) -> Vec<SuiteReport> {
    let suites = suite.map_or_else(|| Suite::ALL.to_vec(), |s| vec![s]);
    suites.into_iter().map(|s| run_suite(s, opts)).collect()
}
