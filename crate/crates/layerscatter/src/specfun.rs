//! Scattering polynomials, almost-periodic structure, and trace formulas.
//!
//! The scattering polynomials π^{(p,q)} are bivariate polynomials on the
//! closed unit disk, eigenfunctions of the weighted Laplacian
//! Δ = −((1−x²−y²)/4)(∂²ₓ+∂²ᵧ) with eigenvalue pq. They are the coefficient
//! basis of the almost-periodic expansion of the generalized reflection
//! coefficient of a step medium:
//!
//! g^ω(ξ) = Σ_k 𝔞_k(r, ξ) e^{2i⟨k,𝐲⟩ω},  𝔞_k = (Π_j π^{(k_j,k_{j+1})}(r_j)) ξ^{k_{n+1}},
//!
//! where 𝐲 lists the layer spacings and k runs over tuples with k₁ = 1 and a
//! block of positive entries followed by zeros. The lowest frequency is
//! 2(y₁−x0) with coefficient r₁, which is what layer stripping reads off.
//! Cesàro means over (−L, L) extract Besicovitch coefficients numerically,
//! and the same averaging turns −log(1−|R|²) into the singular trace
//! Σ −log(1−r_j²).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::StepMedium;
use crate::par;
use crate::quad;

/// Largest admissible p+q in π^{(p,q)}; factorial ratios beyond this are
/// refused rather than evaluated inaccurately.
pub const MAX_SCATTER_ORDER: i64 = 40;

/// The scattering polynomial π^{(p,q)}(z).
///
/// π^{(p,q)} = 0 for min{p,q} < 0 or p = 0 < q; π^{(p,0)} = z^p; otherwise
/// the closed finite sum from term-by-term differentiation of (1−zz̄)^{p+q−1}:
/// π = ((−1)^p/q) (1−|z|²) Σ_{k=max(p,q)}^{p+q−1} (−1)^k k!/((p+q−1−k)!(k−p)!(k−q)!) z^{k−q} z̄^{k−p}.
pub fn scattering_polynomial(p: i64, q: i64, z: Complex64) -> Result<Complex64> {
    if p < 0 || q < 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if q == 0 {
        return Ok(z.powi(p as i32));
    }
    if p == 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    if p + q > MAX_SCATTER_ORDER {
        return Err(Error::invalid(format!(
            "scattering polynomial order p+q = {} exceeds {MAX_SCATTER_ORDER}",
            p + q
        )));
    }
    let big_p = p + q - 1;
    let zbar = z.conj();
    let one_minus = 1.0 - z.norm_sqr();
    let mut sum = Complex64::new(0.0, 0.0);
    for k in p.max(q)..=big_p {
        // k!/((P−k)!(k−p)!(k−q)!) as an incremental float product
        let mut ratio = 1.0f64;
        // k!/(k−p)! = (k−p+1)⋯k
        for v in (k - p + 1)..=k {
            ratio *= v as f64;
        }
        for v in 2..=(big_p - k) {
            ratio /= v as f64;
        }
        for v in 2..=(k - q) {
            ratio /= v as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * ratio * z.powi((k - q) as i32) * zbar.powi((k - p) as i32);
    }
    let front = if p % 2 == 0 { 1.0 } else { -1.0 };
    Ok(front / q as f64 * one_minus * sum)
}

/// Residual |Δ_h π^{(p,q)}(z) − pq π^{(p,q)}(z)| of the eigenfunction
/// identity, with the Laplacian by 5-point second differences of step h.
/// Requires p, q ≥ 1 and z at distance > h from the boundary.
pub fn laplace_beltrami_residual(p: i64, q: i64, z: Complex64, h: f64) -> Result<f64> {
    if p < 1 || q < 1 {
        return Err(Error::invalid("eigenfunction check needs p, q >= 1"));
    }
    if !(h > 0.0) || z.norm() >= 1.0 - h {
        return Err(Error::domain(format!(
            "need |z| < 1 − h for the stencil, got |z| = {}, h = {h}",
            z.norm()
        )));
    }
    let f = |w: Complex64| scattering_polynomial(p, q, w);
    let center = f(z)?;
    let fx1 = f(z + Complex64::new(h, 0.0))?;
    let fx0 = f(z - Complex64::new(h, 0.0))?;
    let fy1 = f(z + Complex64::new(0.0, h))?;
    let fy0 = f(z - Complex64::new(0.0, h))?;
    let lap = (fx1 + fx0 + fy1 + fy0 - 4.0 * center) / (h * h);
    let weight = -(1.0 - z.norm_sqr()) / 4.0;
    Ok((weight * lap - (p * q) as f64 * center).norm())
}

/// Finite almost-periodic series: strictly increasing frequencies λ with
/// complex coefficients; Σ|c|² ≤ 1 for series of a reflection coefficient.
#[derive(Debug, Clone)]
pub struct APSeries {
    pub terms: Vec<(f64, Complex64)>,
}

impl APSeries {
    /// Σ |c_λ|² over the enumerated terms.
    pub fn power(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm_sqr()).sum()
    }

    /// Partial sum at a frequency ω.
    pub fn eval(&self, omega: f64) -> Complex64 {
        self.terms
            .iter()
            .map(|&(l, c)| c * Complex64::from_polar(1.0, l * omega))
            .sum()
    }
}

/// Cap on the number of multi-indices visited by `ap_series`.
pub const AP_ENUMERATION_CAP: usize = 10_000_000;

/// Almost-periodic expansion of g^ω(ξ) for a step medium, truncated to
/// frequencies 2⟨k,𝐲⟩ ≤ lambda_max. Coefficients at coinciding frequencies
/// (commensurate spacings) merge by summation with tolerance 1e−12·λ.
pub fn ap_series(m: &StepMedium, xi: Complex64, lambda_max: f64) -> Result<APSeries> {
    if xi.norm() >= 1.0 {
        return Err(Error::domain("xi must lie in the open disk"));
    }
    let iv = m.interval();
    let n = m.jump_count();
    if n == 0 {
        return Ok(APSeries { terms: Vec::new() });
    }
    let mut spacings = Vec::with_capacity(n + 1);
    let mut prev = iv.x0;
    for &y in m.jumps() {
        spacings.push(y - prev);
        prev = y;
    }
    spacings.push(iv.x1 - prev);
    let rs = m.reflectivities();

    let mut terms: Vec<(f64, Complex64)> = Vec::new();
    let mut visited = 0usize;
    let mut k = vec![0i64; n + 1];
    k[0] = 1;
    // depth-first over the positive block length and entries
    enumerate_block(
        &mut k,
        1,
        2.0 * spacings[0],
        Complex64::new(1.0, 0.0),
        &spacings,
        &rs,
        xi,
        lambda_max,
        &mut visited,
        &mut terms,
    )?;
    terms.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    // merge coinciding frequencies
    let mut merged: Vec<(f64, Complex64)> = Vec::with_capacity(terms.len());
    for (l, c) in terms {
        if let Some(last) = merged.last_mut() {
            if (l - last.0).abs() <= 1e-12 * l.abs().max(1.0) {
                last.1 += c;
                continue;
            }
        }
        merged.push((l, c));
    }
    merged.retain(|(_, c)| c.norm() > 1e-300);
    Ok(APSeries { terms: merged })
}

#[allow(clippy::too_many_arguments)]
fn enumerate_block(
    k: &mut Vec<i64>,
    pos: usize,
    lambda_acc: f64,
    coeff_acc: Complex64,
    spacings: &[f64],
    rs: &[f64],
    xi: Complex64,
    lambda_max: f64,
    visited: &mut usize,
    out: &mut Vec<(f64, Complex64)>,
) -> Result<()> {
    let n = rs.len();
    *visited += 1;
    if *visited > AP_ENUMERATION_CAP {
        return Err(Error::ResourceCap {
            needed: *visited,
            cap: AP_ENUMERATION_CAP,
        });
    }
    if lambda_acc > lambda_max {
        return Ok(());
    }
    if pos == n + 1 {
        // ξ^{k_{n+1}} factor with k_{n+1} the last entry
        let tail = k[n];
        let factor = if tail == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            xi.powi(tail as i32)
        };
        let c = coeff_acc * factor;
        out.push((lambda_acc, c));
        return Ok(());
    }
    // terminate the positive block here: k[pos..] all zero, the remaining
    // factors are π^{(k_prev, 0)} = r^{k_prev} and then π^{(0,0)} = 1
    {
        let prev = k[pos - 1];
        let pi = scattering_polynomial(prev, 0, Complex64::new(rs[pos - 1], 0.0))?;
        let coeff = coeff_acc * pi;
        if coeff.norm() > 0.0 {
            out.push((lambda_acc, coeff));
        }
        *visited += 1;
    }
    // continue the block with k[pos] = v ≥ 1
    let mut v = 1i64;
    loop {
        let lambda = lambda_acc + 2.0 * v as f64 * spacings[pos];
        if lambda > lambda_max {
            break;
        }
        if k[pos - 1] + v > MAX_SCATTER_ORDER {
            break;
        }
        let pi = scattering_polynomial(k[pos - 1], v, Complex64::new(rs[pos - 1], 0.0))?;
        if pi.norm() > 0.0 {
            k[pos] = v;
            enumerate_block(
                k,
                pos + 1,
                lambda,
                coeff_acc * pi,
                spacings,
                rs,
                xi,
                lambda_max,
                visited,
                out,
            )?;
            k[pos] = 0;
        }
        v += 1;
    }
    Ok(())
}

/// Trapezoid Cesàro mean (1/(ω_end−ω_start)) ∫ f e^{−iλω} dω over a uniform
/// grid — the finite-band Besicovitch coefficient at frequency λ.
pub fn besicovitch_coefficient(omegas: &[f64], values: &[Complex64], lambda: f64) -> Complex64 {
    assert_eq!(omegas.len(), values.len());
    assert!(omegas.len() >= 2);
    let h = omegas[1] - omegas[0];
    let weighted: Vec<Complex64> = par::map_range(values.len(), |i| {
        values[i] * Complex64::from_polar(1.0, -lambda * omegas[i])
    });
    quad::trapezoid_c(&weighted, h) / (omegas[omegas.len() - 1] - omegas[0])
}

/// Cesàro mean of −log(1 − |R(ω)|²) over the sampled band: the singular
/// trace. For a step medium it converges to Σ −log(1 − r_j²); for continuous
/// impedance it decays to zero as the band grows.
pub fn singular_trace(omegas: &[f64], reflection: &[Complex64]) -> Result<f64> {
    if omegas.len() != reflection.len() || omegas.len() < 2 {
        return Err(Error::invalid("need matching grids with at least two points"));
    }
    let h = omegas[1] - omegas[0];
    let vals: Vec<f64> = reflection
        .iter()
        .map(|r| {
            let m = r.norm();
            if m >= 1.0 {
                Err(Error::domain(format!("|R| = {m} >= 1 in trace integrand")))
            } else {
                Ok(-(1.0 - m * m).ln())
            }
        })
        .collect::<Result<_>>()?;
    Ok(quad::trapezoid(&vals, h) / (omegas[omegas.len() - 1] - omegas[0]))
}

/// Both sides of the classical trace inequality
/// ∫ −log(1−|R|²) dω ≤ π ∫ α²: the left by trapezoid over the sampled band,
/// the right from α samples. Errors if the inequality fails beyond 1e−3
/// relative slack.
pub fn classical_trace_check(
    omegas: &[f64],
    reflection: &[Complex64],
    xs: &[f64],
    alpha: &[f64],
) -> Result<(f64, f64)> {
    if omegas.len() != reflection.len() || omegas.len() < 2 {
        return Err(Error::invalid("need matching omega grids"));
    }
    if xs.len() != alpha.len() || xs.len() < 2 {
        return Err(Error::invalid("need matching alpha grids"));
    }
    let h = omegas[1] - omegas[0];
    let vals: Vec<f64> = reflection
        .iter()
        .map(|r| -(1.0 - r.norm_sqr()).ln())
        .collect();
    let lhs = quad::trapezoid(&vals, h);
    let ha = xs[1] - xs[0];
    let a2: Vec<f64> = alpha.iter().map(|a| a * a).collect();
    let rhs = std::f64::consts::PI * quad::trapezoid(&a2, ha);
    if lhs > rhs * (1.0 + 1e-3) {
        return Err(Error::numeric(
            format!("classical trace inequality violated: lhs = {lhs}, rhs = {rhs}"),
            Some(lhs / rhs),
        ));
    }
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::media::Interval;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn scattering_polynomial_base_cases() {
        let z = c(0.3, -0.2);
        assert_eq!(scattering_polynomial(0, 0, z).unwrap(), c(1.0, 0.0));
        assert!((scattering_polynomial(3, 0, z).unwrap() - z.powi(3)).norm() < 1e-15);
        assert_eq!(scattering_polynomial(0, 2, z).unwrap(), c(0.0, 0.0));
        assert_eq!(scattering_polynomial(-1, 2, z).unwrap(), c(0.0, 0.0));
        let pi11 = scattering_polynomial(1, 1, z).unwrap();
        assert!((pi11 - c(1.0 - z.norm_sqr(), 0.0)).norm() < 1e-15);
        assert!(scattering_polynomial(25, 25, z).is_err());
    }

    #[test]
    fn laplace_beltrami_eigen_residual_second_order() {
        // residual small at h = 1e-3; for (2,1) the polynomial is cubic, so
        // the 5-point stencil is exact and only rounding remains
        let r11 = laplace_beltrami_residual(1, 1, c(0.0, 0.0), 1e-3).unwrap();
        assert!(r11 < 1e-5, "pi^(1,1) residual {r11}");
        let z = c(0.3, 0.1);
        let r21 = laplace_beltrami_residual(2, 1, z, 1e-3).unwrap();
        assert!(r21 < 1e-8, "pi^(2,1) residual {r21}");
        // (2,2) has degree 4: truncation is a clean h² term, ratio ≈ 4
        let r1 = laplace_beltrami_residual(2, 2, z, 2e-3).unwrap();
        let r2 = laplace_beltrami_residual(2, 2, z, 1e-3).unwrap();
        let ratio = r1 / r2;
        assert!(
            (3.5..4.5).contains(&ratio),
            "expected second-order decay, got ratio {ratio}"
        );
        assert!(laplace_beltrami_residual(2, 1, c(0.9999, 0.0), 1e-3).is_err());
        assert!(laplace_beltrami_residual(0, 1, c(0.0, 0.0), 1e-3).is_err());
    }

    #[test]
    fn eigen_identity_across_orders() {
        for (p, q) in [(1i64, 1i64), (2, 1), (1, 2), (3, 2), (2, 2)] {
            for z in [c(0.0, 0.0), c(0.25, -0.35), c(-0.5, 0.2)] {
                let resid = laplace_beltrami_residual(p, q, z, 5e-4).unwrap();
                let scale = scattering_polynomial(p, q, z).unwrap().norm().max(1.0);
                assert!(
                    resid < 1e-4 * scale * ((p * q) as f64).max(1.0),
                    "(p,q)=({p},{q}) z={z} resid={resid}"
                );
            }
        }
    }

    #[test]
    fn ap_series_single_jump() {
        let m = StepMedium::new(Interval::new(0.0, 2.0).unwrap(), vec![0.7], vec![1.0, 3.0])
            .unwrap();
        let r1 = m.reflectivities()[0];
        let s = ap_series(&m, c(0.0, 0.0), 50.0).unwrap();
        // at ξ = 0 the only surviving terms are k = (1, 0): a single term
        assert_eq!(s.terms.len(), 1);
        let (l, co) = s.terms[0];
        assert!((l - 1.4).abs() < 1e-12);
        assert!((co - c(r1, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn ap_series_lowest_term_is_r1() {
        let m = StepMedium::new(
            Interval::new(0.0, 3.0).unwrap(),
            vec![0.45, 1.3, 2.1],
            vec![1.0, 2.2, 0.8, 1.7],
        )
        .unwrap();
        let s = ap_series(&m, c(0.2, 0.1), 12.0).unwrap();
        let (l0, c0) = s.terms[0];
        assert!((l0 - 2.0 * 0.45).abs() < 1e-12);
        assert!((c0 - c(m.reflectivities()[0], 0.0)).norm() < 1e-13);
        for w in s.terms.windows(2) {
            assert!(w[1].0 > w[0].0);
        }
    }

    #[test]
    fn ap_series_matches_reflection_map_and_power_grows() {
        // partial sums approach g^ω(ξ) as lambda_max grows
        let m = StepMedium::new(
            Interval::new(0.0, 2.0).unwrap(),
            vec![0.5, 1.0 + 0.1 * std::f64::consts::SQRT_2],
            vec![1.0, 1.9, 0.75],
        )
        .unwrap();
        let xi = c(0.15, -0.1);
        let mut prev_gap = f64::INFINITY;
        let mut prev_power = 0.0;
        for lambda_max in [6.0, 14.0, 30.0, 60.0] {
            let s = ap_series(&m, xi, lambda_max).unwrap();
            let power = s.power();
            assert!(power <= 1.0 + 1e-12);
            assert!(power >= prev_power - 1e-15);
            prev_power = power;
            // ℓ² gap over frequencies
            let mut gap2 = 0.0;
            let mut norm2 = 0.0;
            let mut state = 0x51u64;
            for _ in 0..200 {
                state ^= state << 13;
                state ^= state >> 7;
                state ^= state << 17;
                let omega = 60.0 * (((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5);
                let truth = crate::moebius::apply(
                    &crate::moebius::step_reflection_map(&m, omega).unwrap(),
                    xi,
                )
                .unwrap();
                let approx = s.eval(omega);
                gap2 += (truth - approx).norm_sqr();
                norm2 += truth.norm_sqr();
            }
            let gap = (gap2 / norm2).sqrt();
            assert!(
                gap < prev_gap + 1e-12,
                "gap did not shrink: {gap} after {prev_gap}"
            );
            prev_gap = gap;
        }
        assert!(prev_gap < 0.02, "final truncation gap {prev_gap}");
    }

    #[test]
    fn besicovitch_pure_tone() {
        let l = 200.0;
        let n = 60000;
        let h = 2.0 * l / n as f64;
        let omegas: Vec<f64> = (0..=n).map(|i| -l + i as f64 * h).collect();
        let lambda0 = 1.7;
        let vals: Vec<Complex64> = omegas
            .iter()
            .map(|&w| Complex64::from_polar(1.0, lambda0 * w))
            .collect();
        let c_on = besicovitch_coefficient(&omegas, &vals, lambda0);
        assert!((c_on - c(1.0, 0.0)).norm() < 1e-3);
        let c_off = besicovitch_coefficient(&omegas, &vals, 2.9);
        assert!(c_off.norm() < 1.0 / (l * (2.9 - lambda0)) * 2.0);
        // decaying signal averages to zero
        let decay: Vec<Complex64> = omegas
            .iter()
            .map(|&w| c(1.0, 0.0) / (1.0 + w * w))
            .collect();
        let c_dec = besicovitch_coefficient(&omegas, &decay, 0.0);
        assert!(c_dec.norm() < 0.01);
    }

    #[test]
    fn singular_trace_rejects_unit_modulus() {
        let omegas = vec![0.0, 1.0, 2.0];
        let vals = vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        assert!(singular_trace(&omegas, &vals).is_err());
    }

    #[test]
    fn singular_trace_constant_medium_is_zero() {
        let omegas: Vec<f64> = (0..1000).map(|i| -50.0 + 0.1 * i as f64).collect();
        let vals = vec![c(0.0, 0.0); omegas.len()];
        let t = singular_trace(&omegas, &vals).unwrap();
        assert!(t.abs() < 1e-15);
    }

    #[test]
    fn classical_trace_zero_alpha() {
        let omegas: Vec<f64> = (0..100).map(|i| i as f64 * 0.1).collect();
        let vals = vec![c(0.0, 0.0); omegas.len()];
        let xs: Vec<f64> = (0..50).map(|i| i as f64 * 0.02).collect();
        let alpha = vec![0.0; xs.len()];
        let (lhs, rhs) = classical_trace_check(&omegas, &vals, &xs, &alpha).unwrap();
        assert_eq!(lhs, 0.0);
        assert_eq!(rhs, 0.0);
    }
}
