//! Disk automorphisms, homogeneous 2×2 coordinates, and the exact reflection
//! coefficient of a step medium at a single frequency.
//!
//! An automorphism φ_{μ,ρ}(ξ) = μ(ξ+ρ)/(1+ρ̄ξ) with |μ| = 1, |ρ| < 1 is
//! represented by the matrix M_{μ,ρ} = [[μ, μρ], [ρ̄, 1]] up to scale, and
//! composition is the matrix product. Scattering by a step medium composes
//! one automorphism per interface with a phase map per layer; the whole
//! composition is accumulated as a left-to-right matrix product with periodic
//! renormalization, which is scale-invariant in the projective quotient.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::media::StepMedium;

const UNIT_MODULUS_TOL: f64 = 1e-12;

/// A disk automorphism or a constant map onto the unit circle. The constant
/// variant completes the semigroup but is never produced by scattering of a
/// step medium.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DiskMap {
    Auto { mu: Complex64, rho: Complex64 },
    Constant { sigma: Complex64 },
}

impl DiskMap {
    pub fn identity() -> Self {
        DiskMap::Auto {
            mu: Complex64::new(1.0, 0.0),
            rho: Complex64::new(0.0, 0.0),
        }
    }

    /// Validated automorphism: |mu| = 1 within 1e−12, |rho| < 1.
    pub fn auto(mu: Complex64, rho: Complex64) -> Result<Self> {
        if (mu.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::invalid(format!("|mu| = {} is not 1", mu.norm())));
        }
        if rho.norm() >= 1.0 {
            return Err(Error::invalid(format!("|rho| = {} is not < 1", rho.norm())));
        }
        Ok(DiskMap::Auto { mu, rho })
    }

    /// Validated constant map: |sigma| = 1 within 1e−12.
    pub fn constant(sigma: Complex64) -> Result<Self> {
        if (sigma.norm() - 1.0).abs() > UNIT_MODULUS_TOL {
            return Err(Error::invalid(format!("|sigma| = {} is not 1", sigma.norm())));
        }
        Ok(DiskMap::Constant { sigma })
    }

    /// The rotation ξ ↦ μξ.
    pub fn rotation(mu: Complex64) -> Result<Self> {
        DiskMap::auto(mu, Complex64::new(0.0, 0.0))
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, DiskMap::Constant { .. })
    }

    /// Homogeneous matrix coordinates of an Auto map.
    pub fn matrix(&self) -> Result<HomogMatrix> {
        match *self {
            DiskMap::Auto { mu, rho } => Ok(HomogMatrix {
                a: mu,
                b: mu * rho,
                c: rho.conj(),
                d: Complex64::new(1.0, 0.0),
            }),
            DiskMap::Constant { .. } => Err(Error::NotInvertible),
        }
    }
}

/// Evaluate a disk map on the closed disk. Inputs with |ξ| > 1 (beyond
/// rounding) are a domain error.
pub fn apply(f: &DiskMap, xi: Complex64) -> Result<Complex64> {
    if xi.norm() > 1.0 + UNIT_MODULUS_TOL {
        return Err(Error::domain(format!("|xi| = {} exceeds 1", xi.norm())));
    }
    Ok(match *f {
        DiskMap::Auto { mu, rho } => mu * (xi + rho) / (Complex64::new(1.0, 0.0) + rho.conj() * xi),
        DiskMap::Constant { sigma } => sigma,
    })
}

/// Composition f ∘ g. Auto maps compose through the matrix product;
/// Auto ∘ Constant and Constant ∘ anything are Constant.
pub fn compose(f: &DiskMap, g: &DiskMap) -> Result<DiskMap> {
    match (f, g) {
        (DiskMap::Constant { sigma }, _) => Ok(DiskMap::Constant { sigma: *sigma }),
        (DiskMap::Auto { .. }, DiskMap::Constant { sigma }) => {
            let value = apply(f, *sigma)?;
            DiskMap::constant(value / value.norm())
        }
        (DiskMap::Auto { .. }, DiskMap::Auto { .. }) => {
            let m = f.matrix()?.mul(&g.matrix()?);
            m.to_disk_map()
        }
    }
}

/// Inverse of an automorphism: φ_{μ,ρ}⁻¹ = φ_{μ̄, −μρ}. Constant maps are
/// not invertible.
pub fn invert(f: &DiskMap) -> Result<DiskMap> {
    match *f {
        DiskMap::Auto { mu, rho } => DiskMap::auto(mu.conj(), -mu * rho),
        DiskMap::Constant { .. } => Err(Error::NotInvertible),
    }
}

/// 2×2 complex matrix acting projectively on the disk: ξ ↦ (aξ+b)/(cξ+d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomogMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl HomogMatrix {
    pub fn identity() -> Self {
        HomogMatrix {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    pub fn mul(&self, rhs: &HomogMatrix) -> HomogMatrix {
        HomogMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn det(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// The projective quotient 𝔭(M (ξ, 1)ᵀ).
    pub fn project(&self, xi: Complex64) -> Complex64 {
        (self.a * xi + self.b) / (self.c * xi + self.d)
    }

    /// Divide all entries by the largest modulus; the projective action is
    /// unchanged and overflow in long products is prevented.
    pub fn renormalized(&self) -> HomogMatrix {
        let m = self
            .a
            .norm()
            .max(self.b.norm())
            .max(self.c.norm())
            .max(self.d.norm());
        if m == 0.0 || !m.is_finite() {
            return *self;
        }
        HomogMatrix {
            a: self.a / m,
            b: self.b / m,
            c: self.c / m,
            d: self.d / m,
        }
    }

    /// Extract the (μ, ρ) parameters: for a representative of M_{μ,ρ},
    /// μ = a/d and ρ = b/a. μ is snapped onto the unit circle to absorb
    /// rounding from long products.
    pub fn to_disk_map(&self) -> Result<DiskMap> {
        if self.d.norm() == 0.0 || self.a.norm() == 0.0 {
            return Err(Error::numeric("degenerate homogeneous matrix", None));
        }
        let mu = self.a / self.d;
        let n = mu.norm();
        if (n - 1.0).abs() > 1e-6 {
            return Err(Error::numeric(
                format!("matrix does not represent an automorphism: |mu| = {n}"),
                None,
            ));
        }
        let mu = mu / n;
        let rho = self.b / self.a;
        if rho.norm() >= 1.0 {
            return Err(Error::numeric(
                format!("matrix does not map the disk into itself: |rho| = {}", rho.norm()),
                None,
            ));
        }
        Ok(DiskMap::Auto { mu, rho })
    }
}

/// Interface matrix M_j = [[μ, μ r], [r, 1]] with real reflectivity r and
/// phase μ = e^{2i s ω} for a layer of travel-time thickness s.
fn interface_matrix(mu: Complex64, r: f64) -> HomogMatrix {
    HomogMatrix {
        a: mu,
        b: mu * r,
        c: Complex64::new(r, 0.0),
        d: Complex64::new(1.0, 0.0),
    }
}

fn phase(s: f64, omega: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * s * omega)
}

/// Accumulated product M₁ M₂ ⋯ M_{n+1} for a step medium, renormalized every
/// few factors. The projective action of the result is g_ζ^ω.
pub fn step_product(m: &StepMedium, omega: f64) -> HomogMatrix {
    let iv = m.interval();
    let jumps = m.jumps();
    let rs = m.reflectivities();
    let mut acc = HomogMatrix::identity();
    let mut prev = iv.x0;
    for (j, (&y, &r)) in jumps.iter().zip(&rs).enumerate() {
        acc = acc.mul(&interface_matrix(phase(y - prev, omega), r));
        prev = y;
        if j % 64 == 63 {
            acc = acc.renormalized();
        }
    }
    // trailing propagation: diag(e^{2i(x1−y_n)ω}, 1)
    let tail = phase(iv.x1 - prev, omega);
    acc = acc.mul(&HomogMatrix {
        a: tail,
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    });
    acc.renormalized()
}

/// Equal-spacing variant used for standard approximants: jumps at
/// x0 + jΔ with the given reflectivities, trailing layer of width Δ.
pub fn equally_spaced_product(delta: f64, reflectivities: &[f64], omega: f64) -> HomogMatrix {
    let mu = phase(delta, omega);
    let mut acc = HomogMatrix::identity();
    for (j, &r) in reflectivities.iter().enumerate() {
        acc = acc.mul(&interface_matrix(mu, r));
        if j % 64 == 63 {
            acc = acc.renormalized();
        }
    }
    acc = acc.mul(&HomogMatrix {
        a: mu,
        b: Complex64::new(0.0, 0.0),
        c: Complex64::new(0.0, 0.0),
        d: Complex64::new(1.0, 0.0),
    });
    acc.renormalized()
}

/// The generalized reflection coefficient of a step medium at frequency ω,
/// as a disk automorphism:
/// g_ζ^ω(ξ) = φ_{μ₁,r₁} ∘ ⋯ ∘ φ_{μₙ,rₙ}(e^{2i(x1−yₙ)ω} ξ).
pub fn step_reflection_map(m: &StepMedium, omega: f64) -> Result<DiskMap> {
    step_product(m, omega).to_disk_map()
}

/// Direct right-to-left functional composition of the same map; the O(n)
/// matrix product above is the production path, this is its oracle.
pub fn step_reflection_map_composed(m: &StepMedium, omega: f64) -> Result<DiskMap> {
    let iv = m.interval();
    let jumps = m.jumps();
    let rs = m.reflectivities();
    let mut map = DiskMap::rotation(phase(iv.x1 - jumps.last().copied().unwrap_or(iv.x0), omega))?;
    let mut prev_pos = iv.x0;
    let mut factors: Vec<DiskMap> = Vec::with_capacity(jumps.len());
    for (&y, &r) in jumps.iter().zip(&rs) {
        factors.push(DiskMap::auto(phase(y - prev_pos, omega), Complex64::new(r, 0.0))?);
        prev_pos = y;
    }
    for f in factors.into_iter().rev() {
        map = compose(&f, &map)?;
    }
    Ok(map)
}

/// Reflection coefficient R(ω) = g_ζ^ω(0) of a step medium. Satisfies
/// |R| ≤ tanh 𝒱 with 𝒱 the total variation of ½ log ζ.
pub fn step_reflection(m: &StepMedium, omega: f64) -> Complex64 {
    let p = step_product(m, omega);
    p.b / p.d
}
