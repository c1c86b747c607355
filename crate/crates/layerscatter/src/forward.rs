//! Time-domain reflection data from an impedance or α profile, the sampled
//! reflection spectrum, and the Born approximation.
//!
//! The forward pass approximates the medium by its n-th standard approximant,
//! runs the Szegő recursion on the interface reflectivities, and expands the
//! dual-polynomial ratio (Ψ*−Φ*)/(Ψ*+Φ*) into its power series in
//! z = e^{2iΔω}: the numerator coefficients are convolved against the series
//! of 2/(Ψ*+Φ*), obtained by forward substitution through a unit lower
//! triangular Toeplitz system. Coefficient a_j is the echo amplitude at
//! two-way time t_j = 2jΔ, and ã_j = a_j/(2Δ) samples the band-limited
//! impulse response.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::{reflectivity, ImpedanceProfile, Medium, StepMedium};
use crate::opuc::{opuc_recursion, OpucQuartet, VerblunskyList};
use crate::par;

/// Echo-coefficient series: Ř_n(t) = Σ a_j δ(t − 2jΔ).
///
/// For continuous media the reported data are ã_j = a_j/(2Δ) at t_j = 2jΔ.
/// Step-medium input is flagged `singular`: the underlying response is a pulse
/// train, so the raw a_j are reported without the 1/(2Δ) scaling.
#[derive(Debug, Clone)]
pub struct ReflectionSeries {
    pub delta: f64,
    pub a: Vec<f64>,
    pub singular: bool,
}

impl ReflectionSeries {
    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Sample times t_j = 2jΔ, j = 1..=n.
    pub fn times(&self) -> Vec<f64> {
        (1..=self.a.len()).map(|j| 2.0 * j as f64 * self.delta).collect()
    }

    /// Reported values: ã_j = a_j/(2Δ), or raw a_j when `singular`.
    pub fn data(&self) -> Vec<f64> {
        if self.singular {
            self.a.clone()
        } else {
            self.a.iter().map(|a| a / (2.0 * self.delta)).collect()
        }
    }

    /// The grid step of `times()`.
    pub fn tau(&self) -> f64 {
        2.0 * self.delta
    }
}

/// Spell out the series of (Ψ* − Φ*)/(Ψ* + Φ*) to n coefficients.
///
/// `window` is the averaging width k of the data extraction: the default
/// k = 1 reports ã_j = a_j/(2Δ); k ≥ 2 averages 2k−1 neighbouring
/// coefficients, which is the windowed estimate used for wave-field work.
pub fn series_from_reflectivities(
    delta: f64,
    rs: &[f64],
    singular: bool,
    window: usize,
) -> Result<ReflectionSeries> {
    let r = VerblunskyList::new(rs.to_vec())?;
    let quartet = opuc_recursion(&r);
    let a = expand_schur_series(&quartet);
    let a = if window <= 1 { a } else { window_average(&a, window) };
    Ok(ReflectionSeries { delta, a, singular })
}

fn window_average(a: &[f64], k: usize) -> Vec<f64> {
    let n = a.len();
    (1..=n)
        .map(|j| {
            let mut s = 0.0;
            for v in (j as isize - k as isize + 1)..=(j as isize + k as isize - 1) {
                if v >= 1 && v <= n as isize {
                    s += a[(v - 1) as usize];
                }
            }
            s / k as f64
        })
        .collect()
}

/// Steps 3–4: solve the unit lower triangular Toeplitz system for the series
/// of 2/(Ψ*+Φ*), then convolve with the numerator coefficients.
fn expand_schur_series(q: &OpucQuartet) -> Vec<f64> {
    let n = q.n;
    // b_k = (Ψ*[k] − Φ*[k])/2 for k = 1..=n; c_k = (Ψ*[k] + Φ*[k])/2, c_0 = 1
    let b: Vec<f64> = (1..=n)
        .map(|k| 0.5 * (q.psi_star[k] - q.phi_star[k]))
        .collect();
    let c: Vec<f64> = (0..=n)
        .map(|k| 0.5 * (q.psi_star[k] + q.phi_star[k]))
        .collect();
    // forward substitution: d_0 = 1, Σ_{k=0}^{i} c_{i−k} d_k = 0
    let mut d = vec![0.0; n.max(1)];
    d[0] = 1.0;
    for i in 1..n {
        let mut s = 0.0;
        for k in 0..i {
            s += c[i - k] * d[k];
        }
        d[i] = -s;
    }
    // a_j = Σ_{k=0}^{j−1} b_{j−k} d_k
    par::map_range(n, |j0| {
        let j = j0 + 1;
        let mut s = 0.0;
        for k in 0..j {
            s += b[j - 1 - k] * d[k];
        }
        s
    })
}

/// Standard-approximant reflectivities of a medium over the recording window
/// (x0, x1), constant-extended outside its own interval.
pub fn window_reflectivities(medium: &Medium, x0: f64, x1: f64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if !(x1 > x0) {
        return Err(Error::invalid("need x1 > x0"));
    }
    let delta = (x1 - x0) / (n + 1) as f64;
    (1..=n)
        .map(|j| {
            let y = x0 + j as f64 * delta;
            reflectivity(medium.zeta_plus(y - 0.5 * delta), medium.zeta_plus(y + 0.5 * delta))
        })
        .collect()
}

/// Algorithm: echo data of a medium over (x0, x1) at approximation degree n.
pub fn forward_scatter(medium: &Medium, x0: f64, x1: f64, n: usize) -> Result<ReflectionSeries> {
    forward_scatter_windowed(medium, x0, x1, n, 1)
}

/// `forward_scatter` with an explicit averaging window k (k = 1 default).
pub fn forward_scatter_windowed(
    medium: &Medium,
    x0: f64,
    x1: f64,
    n: usize,
    window: usize,
) -> Result<ReflectionSeries> {
    let rs = window_reflectivities(medium, x0, x1, n)?;
    let delta = (x1 - x0) / (n + 1) as f64;
    let singular = matches!(medium, Medium::Step(_));
    series_from_reflectivities(delta, &rs, singular, window)
}

/// The α-input variant: r_j = tanh(Δ α(y_j)) on the equally spaced grid.
pub fn forward_scatter_alpha<F: Fn(f64) -> f64>(
    alpha: F,
    x0: f64,
    x1: f64,
    n: usize,
) -> Result<ReflectionSeries> {
    if n == 0 {
        return Err(Error::invalid("n must be >= 1"));
    }
    if !(x1 > x0) {
        return Err(Error::invalid("need x1 > x0"));
    }
    let delta = (x1 - x0) / (n + 1) as f64;
    let rs: Vec<f64> = (1..=n)
        .map(|j| (delta * alpha(x0 + j as f64 * delta)).tanh())
        .collect();
    series_from_reflectivities(delta, &rs, false, 1)
}

/// Reflection spectrum of a step medium sampled on an ω grid; one matrix
/// product per frequency, evaluated in parallel.
pub fn spectrum(medium: &StepMedium, omegas: &[f64]) -> Vec<Complex64> {
    par::map_slice(omegas, |&w| crate::moebius::step_reflection(medium, w))
}

/// Spectrum of a profile through its degree-n standard approximant.
pub fn spectrum_of_profile(
    profile: &ImpedanceProfile,
    n: usize,
    omegas: &[f64],
) -> Result<Vec<Complex64>> {
    let approx = crate::media::standard_approximant(profile, n)?;
    let delta = approx.delta;
    let rs = approx.reflectivities;
    Ok(par::map_slice(omegas, |&w| {
        let p = crate::moebius::equally_spaced_product(delta, &rs, w);
        p.b / p.d
    }))
}

/// Uniform ω grid with `count` points on [−band, band].
pub fn omega_grid(band: f64, count: usize) -> Vec<f64> {
    assert!(count >= 2);
    let h = 2.0 * band / (count - 1) as f64;
    (0..count).map(|i| -band + i as f64 * h).collect()
}

/// Born approximation of the echo data: α̃(t) = ½ α(½ t + x0).
pub fn born_approximation(profile: &ImpedanceProfile, times: &[f64]) -> Result<Vec<f64>> {
    let iv = profile.interval();
    let tmax = 2.0 * iv.length();
    for &t in times {
        if !(t > 0.0 && t <= tmax * (1.0 + 1e-12)) {
            return Err(Error::invalid(format!(
                "time {t} outside the response window (0, {tmax}]"
            )));
        }
    }
    Ok(times
        .iter()
        .map(|&t| 0.5 * profile.alpha_extended(0.5 * t + iv.x0))
        .collect())
}

/// Born residual ã_j − α̃(t_j) on the series' own grid.
pub fn born_residual(series: &ReflectionSeries, profile: &ImpedanceProfile) -> Result<Vec<f64>> {
    let born = born_approximation(profile, &series.times())?;
    Ok(series
        .data()
        .iter()
        .zip(&born)
        .map(|(d, b)| d - b)
        .collect())
}
