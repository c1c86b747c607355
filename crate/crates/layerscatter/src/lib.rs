//! Forward and inverse one-dimensional scattering in layered acoustic media.
//!
//! The library works in travel-time coordinates with a positive impedance
//! function ζ on a bounded interval. Scattering at a fixed frequency ω is an
//! automorphism of the unit disk; composing the per-interface automorphisms of
//! a piecewise-constant medium gives the reflection coefficient, and the same
//! composition in 2×2 homogeneous coordinates is the Szegő recursion for
//! orthogonal polynomials on the unit circle. The modules follow that chain:
//!
//! - [`media`] — impedance profiles, step media, reflectivities, standard
//!   (equally spaced) step approximants, concatenation and factorization.
//! - [`moebius`] — disk automorphisms, their matrix coordinates, and the exact
//!   reflection coefficient of a step medium at one frequency.
//! - [`opuc`] — the Szegő recursion from a reflectivity list, dual
//!   polynomials, and the Szegő integral identity.
//! - [`harmonic`] — the harmonic exponential operators (singular and regular)
//!   and the hyperbolic tangent operator that equals the reflection
//!   coefficient for continuous impedance.
//! - [`forward`] — time-domain echo data from an impedance or α profile, plus
//!   the Born approximation and residual.
//! - [`inverse`] — echo data back to impedance: moments, Verblunsky recovery,
//!   Born inversion, layer stripping, and the short-range inversion series.
//! - [`specfun`] — scattering polynomials, almost-periodic expansions,
//!   Besicovitch coefficients, and the trace formulas.
//!
//! With the default `parallel` feature the frequency sweeps, long averaging
//! integrals and convolutions run on rayon; disabling the feature falls back
//! to equivalent sequential loops.

// validation uses `!(v > 0.0)` so NaN fails the checks too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod forward;
pub mod harmonic;
pub mod inverse;
pub mod io;
pub mod media;
pub mod moebius;
pub mod opuc;
pub mod specfun;

pub(crate) mod par;
pub(crate) mod quad;

pub use error::{Error, Result};
