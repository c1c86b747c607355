//! Impedance profiles and step media.
//!
//! Impedance is a strictly positive function of the travel-time coordinate on
//! a bounded interval. Two representations coexist: [`StepMedium`] for
//! piecewise-constant impedance (ordered interior jumps with layer values),
//! and [`ImpedanceProfile`] for piecewise absolutely continuous impedance
//! built from closed-form registry entries or positive samples interpolated
//! linearly in log ζ. [`Medium`] unifies the two for operations that accept
//! either.
//!
//! The reflectivity of an interface with one-sided limits (ζ₋, ζ₊) is
//! r = (ζ₋ − ζ₊)/(ζ₋ + ζ₊) = tanh(½ log(ζ₋/ζ₊)), and the per-layer data of a
//! continuous profile is captured by its n-th standard approximant: the step
//! medium with n equally spaced jumps interpolating ζ at midpoints.

use crate::error::{Error, Result};

/// Smallest admissible |1 − |r|| for a jump; larger contrasts are rejected as
/// not representable at double precision.
pub const MAX_REFLECTIVITY: f64 = 1.0 - 1e-12;

/// A bounded open interval (x0, x1) in travel-time coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub x0: f64,
    pub x1: f64,
}

impl Interval {
    pub fn new(x0: f64, x1: f64) -> Result<Self> {
        if !x0.is_finite() || !x1.is_finite() {
            return Err(Error::invalid("interval endpoints must be finite"));
        }
        if x1 <= x0 {
            return Err(Error::invalid(format!(
                "interval requires x1 > x0, got ({x0}, {x1})"
            )));
        }
        Ok(Interval { x0, x1 })
    }

    pub fn length(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.x0 < x && x < self.x1
    }
}

/// Interface reflectivity from the one-sided impedance limits.
///
/// Equals tanh(½ log(left/right)); inputs must be positive and the contrast
/// representable (|r| < 1 − 1e−12).
pub fn reflectivity(left: f64, right: f64) -> Result<f64> {
    if !(left > 0.0) || !(right > 0.0) || !left.is_finite() || !right.is_finite() {
        return Err(Error::domain(format!(
            "impedance limits must be positive and finite, got ({left}, {right})"
        )));
    }
    let r = (left - right) / (left + right);
    if r.abs() >= MAX_REFLECTIVITY {
        return Err(Error::domain(format!(
            "impedance contrast {left}:{right} gives |r| >= 1 - 1e-12"
        )));
    }
    Ok(r)
}

// --- Step media ---------------------------------------------------------

/// Piecewise-constant positive impedance: value `values[j]` on
/// (y_{j-1}, y_j) with y_0 = x0, y_{n+1} = x1.
#[derive(Debug, Clone, PartialEq)]
pub struct StepMedium {
    interval: Interval,
    jumps: Vec<f64>,
    values: Vec<f64>,
}

impl StepMedium {
    /// Validates ordering, interiority, positivity, that adjacent layer
    /// values differ at every listed jump, and that every contrast is
    /// representable.
    pub fn new(interval: Interval, jumps: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if values.len() != jumps.len() + 1 {
            return Err(Error::invalid(format!(
                "need {} layer values for {} jumps, got {}",
                jumps.len() + 1,
                jumps.len(),
                values.len()
            )));
        }
        for w in jumps.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invalid("jump positions must be strictly increasing"));
            }
        }
        if let (Some(first), Some(last)) = (jumps.first(), jumps.last()) {
            if *first <= interval.x0 || *last >= interval.x1 {
                return Err(Error::invalid("jumps must lie strictly inside the interval"));
            }
        }
        for v in &values {
            if !(*v > 0.0) || !v.is_finite() {
                return Err(Error::invalid("layer values must be positive and finite"));
            }
        }
        for (j, w) in values.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::invalid(format!(
                    "removable jump at index {j}: adjacent layer values are equal"
                )));
            }
            reflectivity(w[0], w[1])?;
        }
        Ok(StepMedium {
            interval,
            jumps,
            values,
        })
    }

    pub fn constant(interval: Interval, value: f64) -> Result<Self> {
        StepMedium::new(interval, Vec::new(), vec![value])
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn jump_count(&self) -> usize {
        self.jumps.len()
    }

    /// Reflectivities r_j at the listed jumps, left-to-right.
    pub fn reflectivities(&self) -> Vec<f64> {
        self.values
            .windows(2)
            .map(|w| (w[0] - w[1]) / (w[0] + w[1]))
            .collect()
    }

    /// Index of the layer containing x (jumps resolve to the right layer).
    fn layer_of(&self, x: f64) -> usize {
        self.jumps.partition_point(|&y| y <= x)
    }

    /// Left one-sided limit ζ(x−), clamped to the first layer below x0.
    pub fn zeta_minus(&self, x: f64) -> f64 {
        if x <= self.interval.x0 {
            return self.values[0];
        }
        self.values[self.jumps.partition_point(|&y| y < x)]
    }

    /// Right one-sided limit ζ(x+), clamped to the last layer above x1.
    pub fn zeta_plus(&self, x: f64) -> f64 {
        if x >= self.interval.x1 {
            return *self.values.last().unwrap();
        }
        self.values[self.layer_of(x)]
    }

    /// The reciprocal medium 1/ζ (reflectivities negate).
    pub fn reciprocal(&self) -> StepMedium {
        StepMedium {
            interval: self.interval,
            jumps: self.jumps.clone(),
            values: self.values.iter().map(|v| 1.0 / v).collect(),
        }
    }

    /// The scaled medium sζ for s > 0 (scattering-invariant).
    pub fn scaled(&self, s: f64) -> Result<StepMedium> {
        if !(s > 0.0) {
            return Err(Error::invalid("scale must be positive"));
        }
        Ok(StepMedium {
            interval: self.interval,
            jumps: self.jumps.clone(),
            values: self.values.iter().map(|v| s * v).collect(),
        })
    }

    /// Total variation of ½ log ζ: 𝒱 = Σ_j |½ log(c_j/c_{j+1})|. The
    /// reflection coefficient obeys |R| ≤ tanh 𝒱.
    pub fn log_variation(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| 0.5 * (w[0] / w[1]).ln().abs())
            .sum()
    }

    /// Restriction to (y, x1): the tail after stripping everything below y.
    /// `y` must not coincide with a jump.
    pub fn tail_from(&self, y: f64) -> Result<StepMedium> {
        if y >= self.interval.x1 {
            return Err(Error::invalid("tail start must be below x1"));
        }
        let k = self.layer_of(y);
        StepMedium::new(
            Interval::new(y, self.interval.x1)?,
            self.jumps[k..].to_vec(),
            self.values[k..].to_vec(),
        )
    }
}

// --- Continuous / piecewise-continuous profiles --------------------------

/// Closed-form registry entries and sampled data for one continuous segment.
#[derive(Debug, Clone, PartialEq)]
pub enum SegmentKind {
    /// ζ(x) = 1 for x < a or x ≥ b, exp(−2c(b−x) sin(d(x−a)²)) on [a, b).
    Paper53 { a: f64, b: f64, c: f64, d: f64 },
    /// ζ(x) = exp(−2 α₀ x).
    Exp { alpha0: f64 },
    /// ζ(x) = value.
    Const { value: f64 },
    /// Uniform or non-uniform samples, interpolated linearly in log ζ.
    Samples { xs: Vec<f64>, log_zeta: Vec<f64> },
}

/// One maximal continuous piece of a profile, with a positive scale factor
/// so that factorization and concatenation can rescale closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub interval: Interval,
    pub kind: SegmentKind,
    pub scale: f64,
}

impl Segment {
    fn zeta(&self, x: f64) -> f64 {
        self.scale
            * match &self.kind {
                SegmentKind::Paper53 { a, b, c, d } => paper53_zeta(x, *a, *b, *c, *d),
                SegmentKind::Exp { alpha0 } => (-2.0 * alpha0 * x).exp(),
                SegmentKind::Const { value } => *value,
                SegmentKind::Samples { xs, log_zeta } => {
                    log_linear_interp(xs, log_zeta, x).exp()
                }
            }
    }

    /// α = −½ (log ζ)′, independent of the scale factor. For samples this is
    /// the slope of the log-linear interpolant (central at the grid points).
    fn alpha(&self, x: f64) -> f64 {
        match &self.kind {
            SegmentKind::Paper53 { a, b, c, d } => paper53_alpha(x, *a, *b, *c, *d),
            SegmentKind::Exp { alpha0 } => *alpha0,
            SegmentKind::Const { .. } => 0.0,
            SegmentKind::Samples { xs, log_zeta } => sample_alpha(xs, log_zeta, x),
        }
    }
}

/// The registry's reference closed-form impedance bump:
/// ζ = exp(−2c(b−x) sin(d(x−a)²)) on [a, b), 1 elsewhere.
pub fn paper53_zeta(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x < a || x >= b {
        1.0
    } else {
        (-2.0 * c * (b - x) * (d * (x - a) * (x - a)).sin()).exp()
    }
}

/// Closed-form α = −½ (log ζ)′ for the bump profile:
/// α = 2cd(b−x)(x−a) cos(d(x−a)²) − c sin(d(x−a)²) on (a, b), 0 elsewhere.
pub fn paper53_alpha(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x < a || x >= b {
        0.0
    } else {
        let s = d * (x - a) * (x - a);
        2.0 * c * d * (b - x) * (x - a) * s.cos() - c * s.sin()
    }
}

/// Closed-form Schrödinger potential q = α² − α′ = (√ζ)″/√ζ for the bump.
pub fn paper53_q(x: f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    if x < a || x >= b {
        0.0
    } else {
        let s = d * (x - a) * (x - a);
        let al = 2.0 * c * d * (b - x) * (x - a) * s.cos() - c * s.sin();
        al * al + 4.0 * c * d * d * (b - x) * (x - a) * (x - a) * s.sin()
            - 2.0 * c * d * (b + 2.0 * a - 3.0 * x) * s.cos()
    }
}

fn log_linear_interp(xs: &[f64], ls: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ls[0];
    }
    if x >= xs[n - 1] {
        return ls[n - 1];
    }
    let i = xs.partition_point(|&g| g <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ls[i] + t * (ls[i + 1] - ls[i])
}

fn sample_alpha(xs: &[f64], ls: &[f64], x: f64) -> f64 {
    let n = xs.len();
    // central divided difference at grid points, cell slope in between,
    // one-sided at the ends
    let i = xs.partition_point(|&g| g < x);
    let slope = |a: usize, b: usize| (ls[b] - ls[a]) / (xs[b] - xs[a]);
    let s = if i < n && (xs[i] - x).abs() < 1e-12 * (xs[n - 1] - xs[0]).abs().max(1.0) {
        if i == 0 {
            slope(0, 1)
        } else if i == n - 1 {
            slope(n - 2, n - 1)
        } else {
            slope(i - 1, i + 1)
        }
    } else if i == 0 {
        slope(0, 1)
    } else if i >= n {
        slope(n - 2, n - 1)
    } else {
        slope(i - 1, i)
    };
    -0.5 * s
}

/// A positive impedance function on an interval: an ordered list of
/// continuous segments; interior segment boundaries where the one-sided
/// values differ are the recorded discontinuities.
#[derive(Debug, Clone, PartialEq)]
pub struct ImpedanceProfile {
    interval: Interval,
    segments: Vec<Segment>,
}

impl ImpedanceProfile {
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("profile needs at least one segment"));
        }
        for w in segments.windows(2) {
            if (w[0].interval.x1 - w[1].interval.x0).abs() > 1e-12 {
                return Err(Error::invalid("profile segments must be adjacent"));
            }
        }
        let interval = Interval::new(
            segments[0].interval.x0,
            segments.last().unwrap().interval.x1,
        )?;
        Ok(ImpedanceProfile { interval, segments })
    }

    fn single(interval: Interval, kind: SegmentKind) -> Self {
        ImpedanceProfile {
            interval,
            segments: vec![Segment {
                interval,
                kind,
                scale: 1.0,
            }],
        }
    }

    /// Bump profile with the default parameters (a, b, c, d) = (5, 15, .065, π/10).
    pub fn paper53(x0: f64, x1: f64) -> Result<Self> {
        Self::paper53_with(x0, x1, 5.0, 15.0, 0.065, std::f64::consts::PI / 10.0)
    }

    pub fn paper53_with(x0: f64, x1: f64, a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Ok(Self::single(
            Interval::new(x0, x1)?,
            SegmentKind::Paper53 { a, b, c, d },
        ))
    }

    /// Exponential profile ζ = exp(−2 α₀ x) with constant α₀.
    pub fn exponential(x0: f64, x1: f64, alpha0: f64) -> Result<Self> {
        Ok(Self::single(Interval::new(x0, x1)?, SegmentKind::Exp { alpha0 }))
    }

    pub fn constant(x0: f64, x1: f64, value: f64) -> Result<Self> {
        if !(value > 0.0) {
            return Err(Error::invalid("constant impedance must be positive"));
        }
        Ok(Self::single(Interval::new(x0, x1)?, SegmentKind::Const { value }))
    }

    /// Positive samples at strictly increasing positions; evaluation
    /// interpolates linearly in log ζ between them.
    pub fn from_samples(xs: Vec<f64>, zetas: Vec<f64>) -> Result<Self> {
        if xs.len() != zetas.len() || xs.len() < 2 {
            return Err(Error::invalid("need matching x/zeta samples, at least two"));
        }
        for w in xs.windows(2) {
            if w[1] <= w[0] {
                return Err(Error::invalid("sample positions must be strictly increasing"));
            }
        }
        if zetas.iter().any(|z| !(*z > 0.0) || !z.is_finite()) {
            return Err(Error::invalid("impedance samples must be positive"));
        }
        let interval = Interval::new(xs[0], *xs.last().unwrap())?;
        let log_zeta = zetas.iter().map(|z| z.ln()).collect();
        Ok(Self::single(interval, SegmentKind::Samples { xs, log_zeta }))
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    fn segment_at(&self, x: f64) -> &Segment {
        let i = self
            .segments
            .partition_point(|s| s.interval.x1 <= x)
            .min(self.segments.len() - 1);
        &self.segments[i]
    }

    /// ζ(x+), clamped to the boundary values outside the interval.
    pub fn zeta_plus(&self, x: f64) -> f64 {
        if x <= self.interval.x0 {
            return self.segments[0].zeta(self.interval.x0);
        }
        if x >= self.interval.x1 {
            return self.segments.last().unwrap().zeta(self.interval.x1);
        }
        self.segment_at(x).zeta(x)
    }

    /// ζ(x−), clamped outside the interval.
    pub fn zeta_minus(&self, x: f64) -> f64 {
        if x <= self.interval.x0 {
            return self.segments[0].zeta(self.interval.x0);
        }
        if x >= self.interval.x1 {
            return self.segments.last().unwrap().zeta(self.interval.x1);
        }
        let i = self.segments.partition_point(|s| s.interval.x1 < x);
        let seg = &self.segments[i.min(self.segments.len() - 1)];
        seg.zeta(x)
    }

    /// Interior points where the one-sided values differ: (x, ζ(x−), ζ(x+)).
    pub fn discontinuities(&self) -> Vec<(f64, f64, f64)> {
        let mut out = Vec::new();
        for w in self.segments.windows(2) {
            let x = w[0].interval.x1;
            let left = w[0].zeta(x);
            let right = w[1].zeta(x);
            if (left - right).abs() > 1e-14 * left.abs().max(right.abs()) {
                out.push((x, left, right));
            }
        }
        out
    }

    pub fn is_continuous(&self) -> bool {
        self.discontinuities().is_empty()
    }

    /// α(x) = −½ (log ζ)′(x). Errors at a recorded jump location or outside
    /// the open interval.
    pub fn alpha(&self, x: f64) -> Result<f64> {
        if !self.interval.contains(x) {
            return Err(Error::domain(format!("x = {x} is not interior")));
        }
        for (y, _, _) in self.discontinuities() {
            if (x - y).abs() < 1e-12 * self.interval.length() {
                return Err(Error::domain(format!("alpha is singular at the jump x = {y}")));
            }
        }
        Ok(self.segment_at(x).alpha(x))
    }

    /// α continued to the closed interval by clamping; intended for
    /// continuous profiles where α extends continuously to the endpoints.
    pub fn alpha_extended(&self, x: f64) -> f64 {
        let eps = 1e-12 * self.interval.length();
        let x = x.clamp(self.interval.x0 + eps, self.interval.x1 - eps);
        self.segment_at(x).alpha(x)
    }

    /// Total variation of ½ log ζ (α integrated in modulus plus jump sizes),
    /// by fine trapezoid sampling per segment.
    pub fn log_variation(&self, samples_per_segment: usize) -> f64 {
        let m = samples_per_segment.max(16);
        let mut v = 0.0;
        for seg in &self.segments {
            let h = seg.interval.length() / m as f64;
            let vals: Vec<f64> = (0..=m)
                .map(|i| {
                    let x = (seg.interval.x0 + i as f64 * h)
                        .clamp(seg.interval.x0 + 1e-12, seg.interval.x1 - 1e-12);
                    seg.alpha(x).abs()
                })
                .collect();
            v += crate::quad::trapezoid(&vals, h);
        }
        for (_, l, r) in self.discontinuities() {
            v += 0.5 * (l / r).ln().abs();
        }
        v
    }
}

// --- Standard approximants ------------------------------------------------

/// The n-jump equally spaced step medium interpolating a continuous profile
/// at midpoints: Δ = (x1−x0)/(n+1), y_j = x0 + jΔ,
/// r_j = reflectivity(ζ(y_j − Δ/2), ζ(y_j + Δ/2)).
#[derive(Debug, Clone)]
pub struct StandardApproximant {
    pub interval: Interval,
    pub n: usize,
    pub delta: f64,
    pub reflectivities: Vec<f64>,
    /// Layer values c_1..c_{n+1} (c_{j+1} = ζ(y_j + Δ/2)).
    pub values: Vec<f64>,
}

impl StandardApproximant {
    /// Jump positions y_j = x0 + jΔ.
    pub fn jumps(&self) -> Vec<f64> {
        (1..=self.n)
            .map(|j| self.interval.x0 + j as f64 * self.delta)
            .collect()
    }

    /// The approximant as a step medium (removable jumps dropped).
    pub fn to_step_medium(&self) -> Result<StepMedium> {
        let mut jumps = Vec::new();
        let mut values = vec![self.values[0]];
        for (j, w) in self.values.windows(2).enumerate() {
            if w[0] != w[1] {
                jumps.push(self.interval.x0 + (j + 1) as f64 * self.delta);
                values.push(w[1]);
            }
        }
        StepMedium::new(self.interval, jumps, values)
    }
}

/// Build the n-th standard approximant of a continuous profile.
pub fn standard_approximant(profile: &ImpedanceProfile, n: usize) -> Result<StandardApproximant> {
    if n == 0 {
        return Err(Error::invalid("approximant degree n must be >= 1"));
    }
    if !profile.is_continuous() {
        return Err(Error::invalid(
            "standard approximant requires a continuous profile; factor first",
        ));
    }
    let iv = profile.interval();
    let delta = iv.length() / (n + 1) as f64;
    let mut reflectivities = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n + 1);
    values.push(profile.zeta_plus(iv.x0 + 0.5 * delta));
    for j in 1..=n {
        let y = iv.x0 + j as f64 * delta;
        let left = profile.zeta_plus(y - 0.5 * delta);
        let right = profile.zeta_plus(y + 0.5 * delta);
        reflectivities.push(reflectivity(left, right)?);
        values.push(right);
    }
    Ok(StandardApproximant {
        interval: iv,
        n,
        delta,
        reflectivities,
        values,
    })
}

/// Standard-approximant reflectivities of a profile evaluated with constant
/// extension outside (x0, x1), so a profile may be embedded in a longer
/// recording window.
pub fn standard_approximant_on(
    profile: &ImpedanceProfile,
    x0: f64,
    x1: f64,
    n: usize,
) -> Result<StandardApproximant> {
    if n == 0 {
        return Err(Error::invalid("approximant degree n must be >= 1"));
    }
    if x1 <= x0 {
        return Err(Error::invalid("need x1 > x0"));
    }
    if !profile.is_continuous() {
        return Err(Error::invalid(
            "standard approximant requires a continuous profile; factor first",
        ));
    }
    let iv = Interval::new(x0, x1)?;
    let delta = iv.length() / (n + 1) as f64;
    let mut reflectivities = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n + 1);
    values.push(profile.zeta_plus(x0 + 0.5 * delta));
    for j in 1..=n {
        let y = x0 + j as f64 * delta;
        let left = profile.zeta_plus(y - 0.5 * delta);
        let right = profile.zeta_plus(y + 0.5 * delta);
        reflectivities.push(reflectivity(left, right)?);
        values.push(right);
    }
    Ok(StandardApproximant {
        interval: iv,
        n,
        delta,
        reflectivities,
        values,
    })
}

// --- α and q ---------------------------------------------------------------

/// Sampled Schrödinger potential q = (√ζ)″/√ζ by second central divided
/// differences on a uniform grid of spacing `h` (one-sided at the ends).
/// Returns (grid, q).
pub fn potential_of(profile: &ImpedanceProfile, h: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if !(h > 0.0) {
        return Err(Error::invalid("grid spacing must be positive"));
    }
    let iv = profile.interval();
    let m = (iv.length() / h).round() as usize;
    if m < 2 {
        return Err(Error::invalid("need at least 3 grid points"));
    }
    let xs: Vec<f64> = (0..=m).map(|i| iv.x0 + i as f64 * h).collect();
    let s: Vec<f64> = xs.iter().map(|&x| profile.zeta_plus(x).sqrt()).collect();
    let q = potential_from_sqrt_samples(&s, h);
    Ok((xs, q))
}

/// q from already-sampled √ζ on a uniform grid: central second differences
/// in the interior, shifted three-point stencils at the two ends.
pub fn potential_from_sqrt_samples(sqrt_zeta: &[f64], h: f64) -> Vec<f64> {
    let n = sqrt_zeta.len();
    assert!(n >= 3, "need at least 3 samples");
    let dd = |a: f64, b: f64, c: f64| (a - 2.0 * b + c) / (h * h);
    (0..n)
        .map(|i| {
            let num = if i == 0 {
                dd(sqrt_zeta[0], sqrt_zeta[1], sqrt_zeta[2])
            } else if i == n - 1 {
                dd(sqrt_zeta[n - 3], sqrt_zeta[n - 2], sqrt_zeta[n - 1])
            } else {
                dd(sqrt_zeta[i - 1], sqrt_zeta[i], sqrt_zeta[i + 1])
            };
            num / sqrt_zeta[i]
        })
        .collect()
}

// --- Media: step or profile -------------------------------------------------

/// Either representation of a layered medium.
#[derive(Debug, Clone)]
pub enum Medium {
    Step(StepMedium),
    Profile(ImpedanceProfile),
}

impl Medium {
    pub fn interval(&self) -> Interval {
        match self {
            Medium::Step(m) => m.interval(),
            Medium::Profile(p) => p.interval(),
        }
    }

    /// ζ(x−) with constant extension outside the interval.
    pub fn zeta_minus(&self, x: f64) -> f64 {
        match self {
            Medium::Step(m) => m.zeta_minus(x),
            Medium::Profile(p) => p.zeta_minus(x),
        }
    }

    /// ζ(x+) with constant extension outside the interval.
    pub fn zeta_plus(&self, x: f64) -> f64 {
        match self {
            Medium::Step(m) => m.zeta_plus(x),
            Medium::Profile(p) => p.zeta_plus(x),
        }
    }
}

fn step_as_segments(m: &StepMedium) -> Vec<Segment> {
    let mut cuts = vec![m.interval().x0];
    cuts.extend_from_slice(m.jumps());
    cuts.push(m.interval().x1);
    m.values()
        .iter()
        .enumerate()
        .map(|(j, &v)| Segment {
            interval: Interval {
                x0: cuts[j],
                x1: cuts[j + 1],
            },
            kind: SegmentKind::Const { value: v },
            scale: 1.0,
        })
        .collect()
}

/// Concatenate two media over adjacent intervals. The result restricts to
/// each piece; a jump is recorded at the junction iff the end values differ.
pub fn concatenate(m1: &Medium, m2: &Medium) -> Result<Medium> {
    let (i1, i2) = (m1.interval(), m2.interval());
    if (i1.x1 - i2.x0).abs() > 1e-12 * i1.length().max(i2.length()) {
        return Err(Error::invalid(format!(
            "intervals are not adjacent: ({}, {}) then ({}, {})",
            i1.x0, i1.x1, i2.x0, i2.x1
        )));
    }
    match (m1, m2) {
        (Medium::Step(a), Medium::Step(b)) => {
            let mut jumps = a.jumps().to_vec();
            let mut values = a.values().to_vec();
            let junction_jump = *a.values().last().unwrap() != b.values()[0];
            if junction_jump {
                jumps.push(i1.x1);
                values.push(b.values()[0]);
            }
            jumps.extend_from_slice(b.jumps());
            values.extend_from_slice(&b.values()[1..]);
            Ok(Medium::Step(StepMedium::new(
                Interval::new(i1.x0, i2.x1)?,
                jumps,
                values,
            )?))
        }
        _ => {
            let mut segs = match m1 {
                Medium::Step(a) => step_as_segments(a),
                Medium::Profile(p) => p.segments().to_vec(),
            };
            let segs2 = match m2 {
                Medium::Step(b) => step_as_segments(b),
                Medium::Profile(p) => p.segments().to_vec(),
            };
            segs.extend(segs2);
            Ok(Medium::Profile(ImpedanceProfile::from_segments(segs)?))
        }
    }
}

/// Unique factorization ζ = ζ₁ ζ₂ with ζ₁ continuous and ζ₂ a step medium
/// normalized to ζ₂(x0+) = 1. Continuous input returns (input, constant 1).
pub fn factor(profile: &ImpedanceProfile) -> Result<(ImpedanceProfile, StepMedium)> {
    let iv = profile.interval();
    let disc = profile.discontinuities();
    if disc.is_empty() {
        return Ok((profile.clone(), StepMedium::constant(iv, 1.0)?));
    }
    let mut step_jumps = Vec::with_capacity(disc.len());
    let mut step_values = vec![1.0];
    for (x, left, right) in &disc {
        step_jumps.push(*x);
        step_values.push(step_values.last().unwrap() * right / left);
    }
    let zeta2 = StepMedium::new(iv, step_jumps, step_values.clone())?;
    // divide each continuous run of segments by the matching step value
    let mut segments = Vec::with_capacity(profile.segments().len());
    let mut level = 0usize;
    let mut next_disc = 0usize;
    for seg in profile.segments() {
        while next_disc < disc.len() && disc[next_disc].0 <= seg.interval.x0 + 1e-12 {
            level += 1;
            next_disc += 1;
        }
        let mut s = seg.clone();
        s.scale /= step_values[level];
        segments.push(s);
    }
    let zeta1 = ImpedanceProfile::from_segments(segments)?;
    Ok((zeta1, zeta2))
}
