//! Cross-route consistency: independent computational paths to the same
//! quantity must agree. These pair the series-form operators against the
//! matrix-product/polynomial forms at integration scale.

use num_complex::Complex64;

use layerscatter::forward::{forward_scatter, omega_grid, spectrum_of_profile};
use layerscatter::harmonic::{hyperbolic_tangent, HarmonicConfig};
use layerscatter::media::{ImpedanceProfile, Medium};

/// The hyperbolic-tangent series over the bump profile's own interval must
/// match the degree-4000 approximant spectrum across the band.
#[test]
fn hyperbolic_tangent_matches_approximant_spectrum() {
    let p = ImpedanceProfile::paper53(0.0, 15.0).unwrap();
    let omegas = omega_grid(8.0, 200);
    let spectrum = spectrum_of_profile(&p, 4000, &omegas).unwrap();
    let cfg = HarmonicConfig {
        tolerance: 1e-8,
        ..HarmonicConfig::default()
    };
    let series: Vec<Complex64> = omegas
        .iter()
        .map(|&w| hyperbolic_tangent(|x| p.alpha_extended(x), 0.0, 15.0, w, &cfg).unwrap())
        .collect();
    let num: f64 = series
        .iter()
        .zip(&spectrum)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    let den: f64 = spectrum.iter().map(|b| b.norm_sqr()).sum();
    let rel = (num / den).sqrt();
    assert!(rel <= 1e-4, "series vs approximant spectrum: rel l2 {rel:.3e}");
}

/// Echo data of a weak exponential ramp resummed at a frequency must match
/// the hyperbolic-tangent value there.
#[test]
fn exp_profile_data_resums_to_hyperbolic_tangent() {
    let a0 = 0.05;
    let p = ImpedanceProfile::exponential(0.0, 1.0, a0).unwrap();
    let n = 1000;
    let s = forward_scatter(&Medium::Profile(p.clone()), 0.0, 1.0, n).unwrap();
    let cfg = HarmonicConfig::default();
    for omega in [0.0, 0.4, 1.1, 2.3] {
        let z = Complex64::from_polar(1.0, 2.0 * s.delta * omega);
        let mut acc = Complex64::new(0.0, 0.0);
        for &aj in s.a.iter().rev() {
            acc = acc * z + aj;
        }
        acc *= z;
        let th = hyperbolic_tangent(|x| p.alpha_extended(x), 0.0, 1.0, omega, &cfg).unwrap();
        // gap = series truncation past t = 2 (third order in the total
        // variation) plus the O(Δ) approximant edge effects
        assert!(
            (acc - th).norm() < 5e-4,
            "omega={omega}: {acc} vs {th}"
        );
    }
    // at zero frequency the coefficient sum reaches tanh(ΣΔα) up to the
    // truncated multiple-bounce tail, which is third order in ∫α
    let sum: f64 = s.a.iter().sum::<f64>();
    let expect = (a0 * s.delta * n as f64).tanh();
    let tail_scale = a0.powi(3);
    assert!(
        (sum - expect).abs() < tail_scale,
        "{sum} vs {expect} (allowed {tail_scale:.1e})"
    );
}

/// A truncation too small for the series defers to the equally spaced
/// approximant route and still reproduces tanh at zero frequency.
#[test]
fn hyperbolic_tangent_falls_back_for_large_alpha() {
    let cfg = HarmonicConfig {
        max_order: 3,
        ..HarmonicConfig::default()
    };
    // tail bound after 3 orders of ‖α‖ = 8 is enormous: the fallback runs
    let th = hyperbolic_tangent(|_| 8.0, 0.0, 1.0, 0.0, &cfg).unwrap();
    let expect = 8.0f64.tanh();
    assert!(
        (th.re - expect).abs() < 1e-6 && th.im.abs() < 1e-9,
        "{th} vs {expect}"
    );
}

/// Cesàro mean of −log(1−|R|²) decays for continuous impedance: at band
/// length 1000 the bump profile's value sits below 0.02.
#[test]
fn continuous_profile_trace_decays() {
    let p = ImpedanceProfile::paper53(0.0, 15.0).unwrap();
    // |R| is negligible beyond |ω| ≈ 8: integrate the head densely and
    // bound the tail by the measured edge values
    let head = omega_grid(12.0, 6000);
    let spec = spectrum_of_profile(&p, 4000, &head).unwrap();
    let h = head[1] - head[0];
    let vals: Vec<f64> = spec.iter().map(|r| -(1.0 - r.norm_sqr()).ln()).collect();
    let head_integral: f64 = {
        let inner: f64 = vals[1..vals.len() - 1].iter().sum();
        h * (0.5 * (vals[0] + vals[vals.len() - 1]) + inner)
    };
    let edge = vals[0].max(*vals.last().unwrap());
    assert!(edge < 1e-4, "spectrum has not decayed by the band edge: {edge}");
    let l = 1000.0;
    // bound the unsampled tail by its edge value over the whole remainder
    let mean = (head_integral + edge * 2.0 * (l - 12.0)) / (2.0 * l);
    assert!(
        mean < 0.02,
        "trace mean {mean} at L = {l} has not decayed"
    );
    assert!(mean > 0.0);
}
