use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use mqed_decay::sweep::{emit_csv, run_sweep, SweepConfig, CSV_HEADER, THREADS_ENV};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn config() -> SweepConfig {
    SweepConfig::load(&golden_dir().join("example_50.json")).unwrap()
}

#[test]
fn sweep_matches_committed_golden() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    emit_csv(&run_sweep(&config()).unwrap(), &out).unwrap();
    let fresh = std::fs::read(&out).unwrap();
    let golden = std::fs::read(golden_dir().join("example_50.csv")).unwrap();
    assert!(
        fresh == golden,
        "sweep output drifted from tests/golden/example_50.csv"
    );
}

#[test]
fn thread_count_does_not_change_output() {
    let parallel = run_sweep(&config()).unwrap();
    std::env::set_var(THREADS_ENV, "1");
    let serial = run_sweep(&config()).unwrap();
    std::env::remove_var(THREADS_ENV);
    assert_eq!(parallel, serial);
}

#[test]
fn golden_spot_value() {
    let text = std::fs::read_to_string(golden_dir().join("example_50.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(text.lines().count(), 1 + 50 * 3 * 4);
    assert_eq!(&first[..3], ["5.00000000000e-2", "1.27032925338e0", "H"]);

    // γ_H/γ₀ = Re(nε) + 2 Im ε/(ωR), recomputed by hand from the Lorentz
    // responses at ω = 0.05 and the sphere radius in the file.
    let w = 0.05;
    let eps = lorentz(w, 0.5, 1.0, 0.1);
    let mu = lorentz(w, 0.125, 0.5, 0.1);
    let n = csqrt((eps.0 * mu.0 - eps.1 * mu.1, eps.0 * mu.1 + eps.1 * mu.0));
    let unit_angstrom = 100.0 * 10.0 / (2.0 * PI);
    let r_sphere: f64 = first[1].parse::<f64>().unwrap() / unit_angstrom;
    let r = r_sphere * (4.0 * PI / 3.0_f64).cbrt();
    let expected = (n.0 * eps.0 - n.1 * eps.1) + 2.0 * eps.1 / (w * r);
    let got: f64 = first[3].parse().unwrap();
    assert!((got / expected - 1.0).abs() < 1e-10, "{got} vs {expected}");
}

/// `1 − ω_L²/(ω² − ω_T² + 2iγω)` as (re, im).
fn lorentz(w: f64, wl: f64, wt: f64, g: f64) -> (f64, f64) {
    let (dr, di) = (w * w - wt * wt, 2.0 * g * w);
    let d2 = dr * dr + di * di;
    (1.0 - wl * wl * dr / d2, wl * wl * di / d2)
}

/// Principal square root; its imaginary part is ≥ 0 for the inputs here.
fn csqrt((re, im): (f64, f64)) -> (f64, f64) {
    let m = re.hypot(im);
    (
        ((m + re) / 2.0).sqrt(),
        ((m - re) / 2.0).sqrt().copysign(im),
    )
}
