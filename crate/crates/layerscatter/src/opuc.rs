//! Szegő recursion for orthogonal polynomials on the unit circle.
//!
//! A list of real Verblunsky coefficients (the interface reflectivities of an
//! equally spaced step medium) determines two families of monic polynomials,
//! Φ_j for the coefficients and Ψ_j for their negatives, together with the
//! reversed duals Φ*_j, Ψ*_j:
//!
//! Φ_{j+1} = zΦ_j − r_{j+1}Φ*_j,   Φ*_{j+1} = Φ*_j − r_{j+1} zΦ_j,
//!
//! and likewise for Ψ with −r. The reflection coefficient of the medium is
//! the dual-polynomial ratio (Ψ*_n − Φ*_n)/(Ψ*_n + Φ*_n) at z = e^{2iΔω},
//! and the per-period integral of −log(1 − |R|²) telescopes into
//! Σ −log(1 − r_j²) (the Szegő identity).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad;

/// Real Verblunsky coefficients, each strictly inside (−1, 1).
#[derive(Debug, Clone, PartialEq)]
pub struct VerblunskyList(Vec<f64>);

impl VerblunskyList {
    pub fn new(r: Vec<f64>) -> Result<Self> {
        for (j, v) in r.iter().enumerate() {
            if !(v.abs() < 1.0) {
                return Err(Error::domain(format!(
                    "Verblunsky coefficient {j} has |r| = {} >= 1",
                    v.abs()
                )));
            }
        }
        Ok(VerblunskyList(r))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Coefficient sequences of Φ_n, Φ*_n, Ψ_n, Ψ*_n (index k holds the
/// coefficient of z^k; length n+1 each).
#[derive(Debug, Clone, PartialEq)]
pub struct OpucQuartet {
    pub n: usize,
    pub phi: Vec<f64>,
    pub phi_star: Vec<f64>,
    pub psi: Vec<f64>,
    pub psi_star: Vec<f64>,
}

impl OpucQuartet {
    pub fn phi_star_at(&self, z: Complex64) -> Complex64 {
        horner(&self.phi_star, z)
    }

    pub fn psi_star_at(&self, z: Complex64) -> Complex64 {
        horner(&self.psi_star, z)
    }

    pub fn phi_at(&self, z: Complex64) -> Complex64 {
        horner(&self.phi, z)
    }

    pub fn psi_at(&self, z: Complex64) -> Complex64 {
        horner(&self.psi, z)
    }
}

pub fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        acc = acc * z + c;
    }
    acc
}

/// Run the Szegő recursion for a full quartet. In-place with one scratch
/// buffer per family; the stars come from coefficient reversal (real case).
pub fn opuc_recursion(r: &VerblunskyList) -> OpucQuartet {
    let n = r.len();
    let phi = monic_family(r.as_slice(), 1.0);
    let psi = monic_family(r.as_slice(), -1.0);
    let mut phi_star = phi.clone();
    phi_star.reverse();
    let mut psi_star = psi.clone();
    psi_star.reverse();
    OpucQuartet {
        n,
        phi,
        phi_star,
        psi,
        psi_star,
    }
}

/// Monic family for coefficients sign·r_j: degree grows by one per step,
/// new[k] = prev[k−1] − sign·r·prev[j−k] (the reversal is the dual).
fn monic_family(r: &[f64], sign: f64) -> Vec<f64> {
    let n = r.len();
    let mut cur = vec![0.0; n + 1];
    let mut scratch = vec![0.0; n + 1];
    cur[0] = 1.0;
    for (j, &rj) in r.iter().enumerate() {
        let c = sign * rj;
        scratch[..=j].copy_from_slice(&cur[..=j]);
        cur[j + 1] = scratch[j]; // leading coefficient stays 1
        for k in (1..=j).rev() {
            cur[k] = scratch[k - 1] - c * scratch[j - k];
        }
        cur[0] = -c * scratch[j];
    }
    cur
}

/// Reflection coefficient of the equally spaced medium with spacing Δ:
/// R(ω) = (Ψ*_n − Φ*_n)/(Ψ*_n + Φ*_n) at z = e^{2iΔω}. Periodic in ω with
/// period π/Δ.
pub fn opuc_reflection(r: &VerblunskyList, delta: f64, omega: f64) -> Result<Complex64> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let q = opuc_recursion(r);
    Ok(reflection_from_quartet(&q, delta, omega))
}

pub fn reflection_from_quartet(q: &OpucQuartet, delta: f64, omega: f64) -> Complex64 {
    let z = Complex64::from_polar(1.0, 2.0 * delta * omega);
    let ps = q.psi_star_at(z);
    let fs = q.phi_star_at(z);
    (ps - fs) / (ps + fs)
}

/// Both sides of the Szegő identity
/// (Δ/π) ∫_{−π/2Δ}^{π/2Δ} −log(1 − |R(ω)|²) dω = Σ_j −log(1 − r_j²),
/// the left side by panel-doubling Gauss–Legendre to `rel_tol` (default
/// 1e−8), capped at 2²⁰ nodes.
pub fn szego_sum(r: &VerblunskyList, delta: f64, rel_tol: Option<f64>) -> Result<(f64, f64)> {
    if !(delta > 0.0) {
        return Err(Error::invalid("delta must be positive"));
    }
    let rhs: f64 = r.as_slice().iter().map(|&x| -(1.0 - x * x).ln()).sum();
    if r.is_empty() {
        return Ok((0.0, 0.0));
    }
    let tol = rel_tol.unwrap_or(1e-8);
    let q = opuc_recursion(r);
    // substitute θ = 2Δω: lhs = (1/2π) ∫_{−π}^{π} −log(1 − |R(θ)|²) dθ
    let integrand = |theta: f64| {
        let z = Complex64::from_polar(1.0, theta);
        let ps = q.psi_star_at(z);
        let fs = q.phi_star_at(z);
        let rr = ((ps - fs) / (ps + fs)).norm_sqr();
        -(1.0 - rr).ln()
    };
    let (value, achieved) = quad::adaptive_panels(
        &integrand,
        -std::f64::consts::PI,
        std::f64::consts::PI,
        tol,
        1 << 20,
    );
    let lhs = value / (2.0 * std::f64::consts::PI);
    if achieved > tol {
        return Err(Error::numeric(
            "szego quadrature did not reach the requested tolerance",
            Some(achieved),
        ));
    }
    Ok((lhs, rhs))
}

/// ⟨Σ c_k z^k, 1⟩ against a moment sequence: Σ c_k m_k.
pub fn inner_with_one(p: &[f64], moments: &[f64]) -> Result<f64> {
    if p.len() > moments.len() {
        return Err(Error::invalid(format!(
            "polynomial degree {} exceeds available moments {}",
            p.len() - 1,
            moments.len() - 1
        )));
    }
    Ok(p.iter().zip(moments).map(|(c, m)| c * m).sum())
}
