//! The singular and regular harmonic exponential operators and the
//! hyperbolic tangent operator.
//!
//! For a step medium, the singular harmonic exponential 𝓔 is the finite sum
//! over ordered tuples of jump points below y of oscillatory phase factors
//! times reflectivity products; it is read off the right column of the 2×2
//! product M₀M₁⋯Mₙ, so evaluation is O(n). For integrable α the regular
//! harmonic exponential is the series of ordered-simplex integrals
//!
//! E(ω) = 1 + Σ_j ∫_{x0<s₁<⋯<s_j<y} e^{iωκ(s)} Π α(s_ν) ds,
//!
//! with κ(s) = 2Σ(−1)^{j−ν}(s_ν − x0). Each simplex integral is the j-fold
//! iterate of the Volterra operator A_ω f(y) = ∫ α e^{2iω(x−x0)} f̄, so the
//! series is evaluated by repeated cumulative quadrature; the j-th term is
//! bounded by ‖α‖ʲ/j! and the reported error estimate is the analytic tail
//! bound. The hyperbolic tangent Th = (E_α − E_{−α})/(E_α + E_{−α}) equals
//! the reflection coefficient of a continuous impedance.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::{ImpedanceProfile, StepMedium};
use crate::moebius::HomogMatrix;
use crate::quad;

/// Truncation and resolution controls for the regular harmonic exponential.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicConfig {
    /// Maximum series order J (the multi-integral depth).
    pub max_order: usize,
    /// Nodes per dimension for the simplex-quadrature oracle, and the
    /// per-unit-phase density multiplier of the cumulative grid.
    pub quad_points: usize,
    /// Target for the factorial tail bound; exceeding it is a numeric error
    /// carrying the achieved bound.
    pub tolerance: f64,
}

impl Default for HarmonicConfig {
    fn default() -> Self {
        HarmonicConfig {
            max_order: 64,
            quad_points: 8,
            tolerance: 1e-10,
        }
    }
}

impl HarmonicConfig {
    fn validate(&self) -> Result<()> {
        if self.max_order < 1 {
            return Err(Error::invalid("max_order must be >= 1"));
        }
        if self.quad_points < 2 {
            return Err(Error::invalid("quad_points must be >= 2"));
        }
        Ok(())
    }

    fn grid_cells(&self, length: f64, omega: f64) -> usize {
        let density = 32.0 * self.quad_points as f64;
        let m = (density * length * omega.abs().max(1.0)).ceil() as usize;
        let m = m.clamp(4096, 1 << 22);
        m + (m & 1)
    }
}

/// A series value together with the analytic tail bound Σ_{k>J} ‖α‖ᵏ/k!.
#[derive(Debug, Clone, Copy)]
pub struct HarmonicValue {
    pub value: Complex64,
    pub tail_bound: f64,
}

// --- singular -----------------------------------------------------------

const PROP_M0: HomogMatrix = HomogMatrix {
    a: Complex64::new(1.0, 0.0),
    b: Complex64::new(1.0, 0.0),
    c: Complex64::new(-1.0, 0.0),
    d: Complex64::new(1.0, 0.0),
};

/// 𝓔_ζ^{(x0,y)}(ω) and 𝓔_{1/ζ}^{(x0,y)}(ω) for a step medium: the right
/// column of M₀M₁⋯Mₖ over the jumps below y.
pub fn singular_harmonic_pair(m: &StepMedium, y: f64, omega: f64) -> Result<(Complex64, Complex64)> {
    let iv = m.interval();
    if !(y > iv.x0 && y <= iv.x1) {
        return Err(Error::domain(format!(
            "y = {y} is outside ({}, {}]",
            iv.x0, iv.x1
        )));
    }
    let mut acc = PROP_M0;
    let mut prev = iv.x0;
    for (&yj, &r) in m.jumps().iter().zip(m.reflectivities().iter()) {
        if yj >= y {
            break;
        }
        let mu = Complex64::from_polar(1.0, 2.0 * (yj - prev) * omega);
        acc = acc.mul(&HomogMatrix {
            a: mu,
            b: mu * r,
            c: Complex64::new(r, 0.0),
            d: Complex64::new(1.0, 0.0),
        });
        prev = yj;
    }
    Ok((acc.b, acc.d))
}

/// 𝓔_ζ^{(x0,y)}(ω) alone.
pub fn singular_harmonic(m: &StepMedium, y: f64, omega: f64) -> Result<Complex64> {
    singular_harmonic_pair(m, y, omega).map(|(e, _)| e)
}

/// The literal ordered-tuple sum over subsets of the jump set below y; 2ⁿ
/// terms, capped at 22 jumps. Oracle for `singular_harmonic`.
pub fn singular_harmonic_enumerated(m: &StepMedium, y: f64, omega: f64) -> Result<Complex64> {
    let iv = m.interval();
    if !(y > iv.x0 && y <= iv.x1) {
        return Err(Error::domain(format!(
            "y = {y} is outside ({}, {}]",
            iv.x0, iv.x1
        )));
    }
    let jumps: Vec<(f64, f64)> = m
        .jumps()
        .iter()
        .zip(m.reflectivities().iter())
        .filter(|(&yj, _)| yj < y)
        .map(|(&yj, &r)| (yj - iv.x0, r))
        .collect();
    let n = jumps.len();
    if n > 22 {
        return Err(Error::ResourceCap {
            needed: 1usize << n.min(63),
            cap: 1 << 22,
        });
    }
    let mut sum = Complex64::new(1.0, 0.0);
    for mask in 1u32..(1u32 << n) {
        // κ alternates sign from the last tuple element downward
        let mut kappa = 0.0;
        let mut rprod = 1.0;
        let mut sign = 1.0;
        for bit in (0..n).rev() {
            if mask & (1 << bit) != 0 {
                kappa += sign * 2.0 * jumps[bit].0;
                rprod *= jumps[bit].1;
                sign = -sign;
            }
        }
        sum += rprod * Complex64::from_polar(1.0, omega * kappa);
    }
    Ok(sum)
}

// --- regular ------------------------------------------------------------

fn tail_bound(norm: f64, order: usize) -> f64 {
    // Σ_{k>order} norm^k / k!, summed upward until negligible
    let mut term = 1.0;
    for k in 1..=order + 1 {
        term *= norm / k as f64;
    }
    let mut sum = term;
    let mut k = order + 2;
    while term > 1e-18 * sum.max(f64::MIN_POSITIVE) && k < order + 400 {
        term *= norm / k as f64;
        sum += term;
        k += 1;
    }
    sum
}

/// All simplex-series terms A_ω^j 1(y) for j = 1..=J by iterated cumulative
/// quadrature, together with ‖α‖₁ on (x0, y).
pub fn harmonic_terms<F: Fn(f64) -> f64>(
    alpha: F,
    x0: f64,
    y: f64,
    omega: f64,
    cfg: &HarmonicConfig,
) -> Result<(Vec<Complex64>, f64)> {
    cfg.validate()?;
    if !(y > x0) {
        return Err(Error::domain(format!("need y > x0, got y = {y}, x0 = {x0}")));
    }
    let m = cfg.grid_cells(y - x0, omega);
    let h = (y - x0) / m as f64;
    let xs: Vec<f64> = (0..=m).map(|i| x0 + i as f64 * h).collect();
    let a_vals: Vec<f64> = xs.iter().map(|&x| alpha(x)).collect();
    let abs_vals: Vec<f64> = a_vals.iter().map(|v| v.abs()).collect();
    let norm = quad::trapezoid(&abs_vals, h);
    let weights: Vec<Complex64> = xs
        .iter()
        .zip(&a_vals)
        .map(|(&x, &a)| a * Complex64::from_polar(1.0, 2.0 * omega * (x - x0)))
        .collect();

    let mut terms = Vec::with_capacity(cfg.max_order);
    let mut f_prev: Vec<Complex64> = vec![Complex64::new(1.0, 0.0); m + 1];
    let mut integrand: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); m + 1];
    let mut f_next: Vec<Complex64> = Vec::with_capacity(m + 1);
    let mut term_mag = 1.0; // ‖α‖ʲ/j! running bound
    for j in 1..=cfg.max_order {
        for i in 0..=m {
            integrand[i] = weights[i] * f_prev[i].conj();
        }
        quad::cumulative_simpson(&integrand, h, &mut f_next);
        terms.push(f_next[m]);
        std::mem::swap(&mut f_prev, &mut f_next);
        term_mag *= norm / j as f64;
        if term_mag <= 0.25 * cfg.tolerance && j >= 2 {
            break;
        }
    }
    Ok((terms, norm))
}

/// The regular harmonic exponential E_α^{(x0,y)}(ω) with its tail bound.
/// Errors if the bound at the configured truncation exceeds the tolerance.
pub fn harmonic_exponential<F: Fn(f64) -> f64>(
    alpha: F,
    x0: f64,
    y: f64,
    omega: f64,
    cfg: &HarmonicConfig,
) -> Result<HarmonicValue> {
    let (terms, norm) = harmonic_terms(alpha, x0, y, omega, cfg)?;
    let value = Complex64::new(1.0, 0.0) + terms.iter().sum::<Complex64>();
    let bound = tail_bound(norm, terms.len());
    if bound > cfg.tolerance {
        return Err(Error::numeric(
            format!(
                "harmonic series tail bound after {} orders exceeds tolerance {:.1e}",
                terms.len(),
                cfg.tolerance
            ),
            Some(bound),
        ));
    }
    Ok(HarmonicValue {
        value,
        tail_bound: bound,
    })
}

/// Th_α^{(x0,y)}(ω) = (E_α − E_{−α})/(E_α + E_{−α}); equals the reflection
/// coefficient of the impedance exp(−2∫α) restricted to (x0, y). When the
/// series truncation cannot reach tolerance, defers to the reflection
/// coefficient of a fine equally spaced approximant (Δ·max(1,|ω|) < 0.01).
pub fn hyperbolic_tangent<F: Fn(f64) -> f64>(
    alpha: F,
    x0: f64,
    y: f64,
    omega: f64,
    cfg: &HarmonicConfig,
) -> Result<Complex64> {
    match harmonic_pair(&alpha, x0, y, omega, cfg) {
        Ok((ep, em)) => Ok((ep - em) / (ep + em)),
        Err(Error::Numeric { .. }) => opuc_fallback(&alpha, x0, y, omega),
        Err(e) => Err(e),
    }
}

fn harmonic_pair<F: Fn(f64) -> f64>(
    alpha: &F,
    x0: f64,
    y: f64,
    omega: f64,
    cfg: &HarmonicConfig,
) -> Result<(Complex64, Complex64)> {
    let ep = harmonic_exponential(alpha, x0, y, omega, cfg)?;
    let em = harmonic_exponential(|x| -alpha(x), x0, y, omega, cfg)?;
    Ok((ep.value, em.value))
}

fn opuc_fallback<F: Fn(f64) -> f64>(alpha: &F, x0: f64, y: f64, omega: f64) -> Result<Complex64> {
    let length = y - x0;
    let n = ((length * omega.abs().max(1.0)) / 0.01).ceil() as usize;
    let n = n.clamp(1024, 4_000_000);
    let delta = length / (n + 1) as f64;
    let rs: Vec<f64> = (1..=n)
        .map(|j| (delta * alpha(x0 + j as f64 * delta)).tanh())
        .collect();
    let p = crate::moebius::equally_spaced_product(delta, &rs, omega);
    Ok(p.b / p.d)
}

/// |𝓔_{ζ_n}^{(x0,y)}(ω) − E_α^{(x0,y)}(ω)| for the n-th standard approximant
/// of a continuous profile restricted to (x0, y).
pub fn singular_approximation_gap(
    profile: &ImpedanceProfile,
    y: f64,
    omega: f64,
    n: usize,
) -> Result<f64> {
    let iv = profile.interval();
    if !(y > iv.x0 && y <= iv.x1) {
        return Err(Error::domain(format!("y = {y} outside ({}, {}]", iv.x0, iv.x1)));
    }
    let approx = crate::media::standard_approximant_on(profile, iv.x0, y, n)?;
    // equally spaced product for 𝓔: all jumps lie below y by construction
    let mu = Complex64::from_polar(1.0, 2.0 * approx.delta * omega);
    let mut acc = PROP_M0;
    for &r in &approx.reflectivities {
        acc = acc.mul(&HomogMatrix {
            a: mu,
            b: mu * r,
            c: Complex64::new(r, 0.0),
            d: Complex64::new(1.0, 0.0),
        });
    }
    let singular = acc.b;
    let cfg = HarmonicConfig {
        tolerance: 1e-9,
        ..HarmonicConfig::default()
    };
    let regular = harmonic_exponential(|x| profile.alpha_extended(x), iv.x0, y, omega, &cfg)?;
    Ok((singular - regular.value).norm())
}

// --- simplex-quadrature oracle -------------------------------------------

/// A_ω^j 1(y) by symmetrized tensor Gauss–Legendre on the cube: map the
/// ordered simplex to [x0,y]^j by sorting coordinates and divide by j!.
/// Orders above 6 are refused (cost is quad_points^j). Test oracle for
/// `harmonic_terms`.
pub fn simplex_term_cube<F: Fn(f64) -> f64>(
    alpha: F,
    x0: f64,
    y: f64,
    omega: f64,
    order: usize,
    quad_points: usize,
) -> Result<Complex64> {
    if order == 0 || order > 6 {
        return Err(Error::invalid("cube quadrature handles orders 1..=6"));
    }
    let (nodes, weights) = quad::gauss_legendre(quad_points);
    let half = 0.5 * (y - x0);
    let mid = 0.5 * (y + x0);
    let pts: Vec<f64> = nodes.iter().map(|t| mid + half * t).collect();
    let mut idx = vec![0usize; order];
    let mut sum = Complex64::new(0.0, 0.0);
    let mut s_sorted = vec![0.0f64; order];
    loop {
        let mut w = 1.0;
        for (d, &i) in idx.iter().enumerate() {
            w *= weights[i];
            s_sorted[d] = pts[i];
        }
        s_sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut kappa = 0.0;
        let mut sign = 1.0;
        let mut aprod = 1.0;
        for v in s_sorted.iter().rev() {
            kappa += sign * 2.0 * (v - x0);
            aprod *= alpha(*v);
            sign = -sign;
        }
        sum += w * aprod * Complex64::from_polar(1.0, omega * kappa);
        // advance the multi-index
        let mut d = 0;
        loop {
            idx[d] += 1;
            if idx[d] < quad_points {
                break;
            }
            idx[d] = 0;
            d += 1;
            if d == order {
                let factorial: f64 = (1..=order).map(|k| k as f64).product();
                return Ok(sum * half.powi(order as i32) / factorial);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Interval;

    #[test]
    fn singular_constant_is_one() {
        let m = StepMedium::constant(Interval::new(0.0, 2.0).unwrap(), 5.0).unwrap();
        for omega in [0.0, 1.3, -7.0] {
            let e = singular_harmonic(&m, 2.0, omega).unwrap();
            assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn singular_single_jump() {
        let m = StepMedium::new(Interval::new(0.0, 2.0).unwrap(), vec![0.6], vec![1.0, 4.0]).unwrap();
        let r = m.reflectivities()[0];
        for omega in [0.0, 0.8, 5.5] {
            let e = singular_harmonic(&m, 1.5, omega).unwrap();
            let expect = Complex64::new(1.0, 0.0) + r * Complex64::from_polar(1.0, 2.0 * 0.6 * omega);
            assert!((e - expect).norm() < 1e-14);
            // reciprocal side negates r
            let (_, einv) = singular_harmonic_pair(&m, 1.5, omega).unwrap();
            let expect_inv = Complex64::new(1.0, 0.0) - r * Complex64::from_polar(1.0, 2.0 * 0.6 * omega);
            assert!((einv - expect_inv).norm() < 1e-14);
        }
        // y below the jump excludes it
        let e = singular_harmonic(&m, 0.5, 3.0).unwrap();
        assert!((e - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(singular_harmonic(&m, 0.0, 1.0).is_err());
        assert!(singular_harmonic(&m, 2.5, 1.0).is_err());
    }

    #[test]
    fn matrix_product_matches_enumeration() {
        let m = StepMedium::new(
            Interval::new(0.0, 3.0).unwrap(),
            vec![0.3, 0.9, 1.4, 2.2, 2.7],
            vec![1.0, 2.0, 1.2, 3.1, 0.7, 1.4],
        )
        .unwrap();
        for omega in [0.0, 0.77, -2.5, 9.0] {
            for y in [0.5, 1.0, 2.5, 3.0] {
                let fast = singular_harmonic(&m, y, omega).unwrap();
                let slow = singular_harmonic_enumerated(&m, y, omega).unwrap();
                assert!((fast - slow).norm() < 1e-12, "y={y} omega={omega}");
            }
        }
    }

    #[test]
    fn equally_spaced_singular_is_dual_polynomial() {
        // 𝓔_ζ = Ψ*_n(e^{2iΔω}), 𝓔_{1/ζ} = Φ*_n(e^{2iΔω})
        let rs = [0.4, -0.3, 0.2, 0.1];
        let iv = Interval::new(0.0, 1.0).unwrap();
        let delta = 0.2;
        let mut values = vec![1.0];
        for r in rs {
            let last = *values.last().unwrap();
            values.push(last * (1.0 - r) / (1.0 + r));
        }
        let jumps: Vec<f64> = (1..=4).map(|j| j as f64 * delta).collect();
        let m = StepMedium::new(iv, jumps, values).unwrap();
        let q = crate::opuc::opuc_recursion(&crate::opuc::VerblunskyList::new(rs.to_vec()).unwrap());
        for omega in [0.0, 1.0, -3.3] {
            let z = Complex64::from_polar(1.0, 2.0 * delta * omega);
            let (e, einv) = singular_harmonic_pair(&m, 1.0, omega).unwrap();
            assert!((e - q.psi_star_at(z)).norm() < 1e-13);
            assert!((einv - q.phi_star_at(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn regular_zero_alpha_is_one() {
        let cfg = HarmonicConfig::default();
        let v = harmonic_exponential(|_| 0.0, 0.0, 1.0, 2.0, &cfg).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn regular_at_zero_frequency_is_exp_integral() {
        let cfg = HarmonicConfig::default();
        // constant α₀ on (0, y): E(0) = e^{α₀ y}
        for (a0, y) in [(0.1, 1.0), (1.0, 1.0), (2.0, 1.0), (0.5, 3.0)] {
            let v = harmonic_exponential(|_| a0, 0.0, y, 0.0, &cfg).unwrap();
            let expect = (a0 * y).exp();
            assert!(
                (v.value.re - expect).abs() < 1e-9 * expect,
                "a0={a0} y={y} got {} want {expect}",
                v.value.re
            );
            assert!(v.value.im.abs() < 1e-12 * expect);
        }
        // E_α(0) = √(ζ(x0+)/ζ(y)) for the bump profile
        let p = ImpedanceProfile::paper53(0.0, 30.0).unwrap();
        let y = 12.0;
        let v = harmonic_exponential(|x| p.alpha_extended(x), 0.0, y, 0.0, &cfg).unwrap();
        let expect = (p.zeta_plus(0.0) / p.zeta_plus(y)).sqrt();
        assert!((v.value.re - expect).abs() < 1e-7 * expect);
    }

    #[test]
    fn tail_bound_failure_reports_bound() {
        let cfg = HarmonicConfig {
            max_order: 3,
            ..HarmonicConfig::default()
        };
        match harmonic_exponential(|_| 2.0, 0.0, 1.0, 0.0, &cfg) {
            Err(Error::Numeric { achieved, .. }) => {
                let b = achieved.unwrap();
                assert!(b > cfg.tolerance);
                // Σ_{k>3} 2^k/k!
                let expect = 2f64.exp() - (1.0 + 2.0 + 2.0 + 4.0 / 3.0);
                assert!((b - expect).abs() < 1e-12);
            }
            other => panic!("expected tail-bound failure, got {other:?}"),
        }
    }

    #[test]
    fn terms_match_cube_quadrature_at_zero_frequency() {
        let cfg = HarmonicConfig::default();
        let alpha = |x: f64| 0.3 + 0.2 * (1.7 * x).sin();
        let (terms, norm) = harmonic_terms(alpha, 0.0, 1.0, 0.0, &cfg).unwrap();
        assert!(norm > 0.0);
        for order in 1..=4 {
            let cube = simplex_term_cube(alpha, 0.0, 1.0, 0.0, order, 16).unwrap();
            assert!(
                (terms[order - 1] - cube).norm() < 1e-9,
                "order {order}: {:?} vs {cube:?}",
                terms[order - 1]
            );
        }
    }

    #[test]
    fn first_terms_match_cube_quadrature_oscillatory() {
        let cfg = HarmonicConfig::default();
        let alpha = |x: f64| 0.4 * (2.0 * x).cos();
        let omega = 1.5;
        let (terms, _) = harmonic_terms(alpha, 0.0, 1.0, omega, &cfg).unwrap();
        // order 1 is a plain 1-D integral: cube rule is exact for it
        let t1 = simplex_term_cube(alpha, 0.0, 1.0, omega, 1, 32).unwrap();
        assert!((terms[0] - t1).norm() < 1e-12);
        // order 2 sorted-cube rule has a C⁰ kink; compare loosely
        let t2 = simplex_term_cube(alpha, 0.0, 1.0, omega, 2, 48).unwrap();
        assert!((terms[1] - t2).norm() < 2e-4, "{:?} vs {t2:?}", terms[1]);
    }

    #[test]
    fn hyperbolic_tangent_toy() {
        let cfg = HarmonicConfig::default();
        // α ≡ 0 → 0
        let th = hyperbolic_tangent(|_| 0.0, 0.0, 1.0, 0.7, &cfg).unwrap();
        assert!(th.norm() < 1e-12);
        // constant α₀ on (0,1), ω = 0 → tanh α₀
        for a0 in [0.1, 1.0, 2.0] {
            let th = hyperbolic_tangent(|_| a0, 0.0, 1.0, 0.0, &cfg).unwrap();
            assert!(
                (th.re - a0.tanh()).abs() < 1e-9,
                "a0={a0}: {} vs {}",
                th.re,
                a0.tanh()
            );
        }
    }

    #[test]
    fn hyperbolic_tangent_antisymmetry_and_bound() {
        let cfg = HarmonicConfig::default();
        let alpha = |x: f64| 0.5 * (3.0 * x).sin();
        let l1: f64 = {
            let n = 20000;
            let h = 1.0 / n as f64;
            let vals: Vec<f64> = (0..=n).map(|i| alpha(i as f64 * h).abs()).collect();
            crate::quad::trapezoid(&vals, h)
        };
        for omega in [0.0, 0.5, 2.0] {
            let a = hyperbolic_tangent(alpha, 0.0, 1.0, omega, &cfg).unwrap();
            let b = hyperbolic_tangent(|x| -alpha(x), 0.0, 1.0, omega, &cfg).unwrap();
            assert!((a + b).norm() < 1e-9);
            assert!(a.norm() <= l1.tanh() + 1e-9);
        }
    }

    #[test]
    fn real_part_identity_and_upper_bound() {
        let cfg = HarmonicConfig::default();
        let alpha = |x: f64| 0.4 + 0.3 * (2.2 * x).cos();
        let mut state = 0x1234_5678u64;
        for _ in 0..50 {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            let omega = 8.0 * (((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5);
            let ep = harmonic_exponential(alpha, 0.0, 1.5, omega, &cfg).unwrap();
            let em = harmonic_exponential(|x| -alpha(x), 0.0, 1.5, omega, &cfg).unwrap();
            let re = (ep.value * em.value.conj()).re;
            assert!((re - 1.0).abs() < 1e-8, "omega={omega} re={re}");
            let l1 = 0.4 * 1.5 + 0.3 / 2.2 * ((2.2f64 * 1.5).sin().abs() + 0.0);
            // coarse ‖α‖ bound: α > 0 here so ∫|α| = ∫α
            assert!(ep.value.norm() <= l1.exp() * (1.0 + 1e-9));
        }
    }

    #[test]
    fn high_frequency_decay() {
        let cfg = HarmonicConfig::default();
        // smooth compactly supported α
        let alpha = |x: f64| {
            let t = x * (1.0 - x);
            if t <= 0.0 {
                0.0
            } else {
                0.8 * (std::f64::consts::PI * x).sin().powi(2)
            }
        };
        let e2 = harmonic_exponential(alpha, 0.0, 1.0, 1e2, &cfg).unwrap();
        let e3 = harmonic_exponential(alpha, 0.0, 1.0, 1e3, &cfg).unwrap();
        let d2 = (e2.value - Complex64::new(1.0, 0.0)).norm();
        let d3 = (e3.value - Complex64::new(1.0, 0.0)).norm();
        assert!(d3 < 10.0 * d2, "no decay: |E-1| at 1e2 = {d2}, at 1e3 = {d3}");
    }

    #[test]
    fn gap_vanishes_for_constant_profile() {
        let p = ImpedanceProfile::constant(0.0, 2.0, 3.0).unwrap();
        for n in [50, 100] {
            let g = singular_approximation_gap(&p, 2.0, 1.0, n).unwrap();
            assert!(g < 1e-12);
        }
    }

    #[test]
    fn gap_shrinks_with_n_exponential_profile() {
        let p = ImpedanceProfile::exponential(0.0, 1.0, 0.8).unwrap();
        let g50 = singular_approximation_gap(&p, 1.0, 1.0, 50).unwrap();
        let g400 = singular_approximation_gap(&p, 1.0, 1.0, 400).unwrap();
        assert!(g400 < g50 / 4.0, "g50={g50} g400={g400}");
        // closed-form comparison at ω = 0: 𝓔_{ζn}(0) = Π(1 − r)/(…) vs e^{α₀ L}
        let n = 100;
        let a = crate::media::standard_approximant(&p, n).unwrap();
        let mut prod = Complex64::new(1.0, 0.0);
        let mut acc = PROP_M0;
        for &r in &a.reflectivities {
            acc = acc.mul(&HomogMatrix {
                a: Complex64::new(1.0, 0.0),
                b: Complex64::new(r, 0.0),
                c: Complex64::new(r, 0.0),
                d: Complex64::new(1.0, 0.0),
            });
        }
        prod = acc.b * prod;
        let gap0 = singular_approximation_gap(&p, 1.0, 0.0, n).unwrap();
        let direct = (prod - Complex64::new((0.8f64).exp(), 0.0)).norm();
        assert!((gap0 - direct).abs() < 1e-7, "gap0={gap0} direct={direct}");
    }
}
