//! Subcommand definitions and dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use layerscatter::media::{ImpedanceProfile, Medium};
use layerscatter::{forward, inverse, io, moebius, opuc, specfun};
use layerscatter::{Error, Result};

use crate::config_map;
use crate::report::RunReport;

/// Forward and inverse 1-D scattering in layered acoustic media.
#[derive(Parser)]
#[command(name = "layerscatter", version, about)]
pub struct Cli {
    /// Worker threads (default: LAYERSCATTER_THREADS, else all cores)
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write the JSON run report to this path instead of stdout
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Echo data d(t) from an impedance profile (Algorithm 1)
    Forward(ForwardArgs),
    /// Impedance from echo data (Algorithm 2)
    Invert(InvertArgs),
    /// Reflection spectrum R(ω) on a frequency band
    Spectrum(SpectrumArgs),
    /// Cesàro-averaged singular trace of −log(1−|R|²)
    Trace(TraceArgs),
    /// Szegő integral identity for a reflectivity list
    Szego(SzegoArgs),
    /// Layer stripping of a step medium
    Layerstrip(LayerstripArgs),
    /// Born approximation and first-order inversion
    Born(BornArgs),
    /// Short-range inversion series at one position
    Shortrange(ShortrangeArgs),
    /// Median reconstruction error over noisy-data seeds
    NoiseSweep(NoiseSweepArgs),
}

#[derive(Args)]
pub struct ForwardArgs {
    /// Profile: paper53 | const[:V] | exp:A0 | samples:FILE.csv | FILE.json
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    x1: f64,
    /// Approximation degree (number of output samples)
    #[arg(long, default_value_t = 100)]
    n: usize,
    /// Averaging window k of the data extraction (k = 1: ã_j = a_j/2Δ)
    #[arg(long, default_value_t = 1)]
    window: usize,
    /// Output CSV `t,d`
    #[arg(long, default_value = "data.csv")]
    out: PathBuf,
}

#[derive(Args)]
pub struct InvertArgs {
    /// Input CSV `t,d` with equally spaced t_j = jτ
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    /// ζ(x0), the known impedance at the measurement point
    #[arg(long, default_value_t = 1.0)]
    zeta0: f64,
    /// Gaussian noise fraction of the data RMS added before inversion
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    /// Seed of the noise generator
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Profile supplying truth samples for the error report
    #[arg(long)]
    truth: Option<String>,
    /// Output CSV `x,zeta`
    #[arg(long, default_value = "zeta.csv")]
    out: PathBuf,
    /// Optional output CSV `x,alpha`
    #[arg(long)]
    alpha_out: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    x1: f64,
    /// Approximation degree for continuous profiles
    #[arg(long, default_value_t = 4000)]
    n: usize,
    /// Frequency band: ω ∈ [−band, band]
    #[arg(long, default_value_t = 8.0)]
    band: f64,
    /// Number of grid points (≥ 2)
    #[arg(long, default_value_t = 1000)]
    count: usize,
    /// Output CSV `omega,re,im`
    #[arg(long, default_value = "spectrum.csv")]
    out: PathBuf,
}

#[derive(Args)]
pub struct TraceArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    x1: f64,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    /// Averaging band (−L, L)
    #[arg(long, default_value_t = 1000.0)]
    l: f64,
    /// Grid points across the band
    #[arg(long, default_value_t = 400000)]
    count: usize,
}

#[derive(Args)]
pub struct SzegoArgs {
    /// Comma-separated reflectivities, e.g. 0.5 or 0.5,-0.3
    #[arg(long, value_delimiter = ',')]
    r: Vec<f64>,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Relative quadrature tolerance
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
}

#[derive(Args)]
pub struct LayerstripArgs {
    /// Step-medium descriptor (FILE.json with kind "step")
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    x1: f64,
    #[arg(long, default_value_t = 1.0)]
    zeta0: f64,
    /// Exact almost-periodic mode (default: numeric Cesàro)
    #[arg(long, default_value_t = false)]
    exact: bool,
    /// Averaging band for numeric mode
    #[arg(long, default_value_t = 1e4)]
    l: f64,
    /// Detection threshold override for numeric mode
    #[arg(long)]
    threshold: Option<f64>,
    /// Output CSV `x,zeta` of the recovered medium (sampled)
    #[arg(long, default_value = "strip.csv")]
    out: PathBuf,
}

#[derive(Args)]
pub struct BornArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    x1: f64,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    zeta0: f64,
    /// Output CSV `x,zeta` of the Born inversion
    #[arg(long, default_value = "born.csv")]
    out: PathBuf,
}

#[derive(Args)]
pub struct ShortrangeArgs {
    /// Input CSV `t,d`
    #[arg(long)]
    data: PathBuf,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    zeta0: f64,
    /// ∫|α| over the continuous initial piece
    #[arg(long)]
    int_l1: f64,
    /// ∫|α|² over the continuous initial piece
    #[arg(long)]
    int_l2: f64,
    /// Reconstruction position
    #[arg(long)]
    y: f64,
    /// Series order J (1..=6)
    #[arg(long, default_value_t = 4)]
    order: usize,
}

#[derive(Args)]
pub struct NoiseSweepArgs {
    #[arg(long)]
    profile: String,
    #[arg(long, default_value_t = 0.0)]
    x0: f64,
    #[arg(long, default_value_t = 1.0)]
    x1: f64,
    #[arg(long, default_value_t = 2000)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    zeta0: f64,
    /// Noise fraction of data RMS
    #[arg(long, default_value_t = 0.25)]
    noise: f64,
    /// Number of seeds
    #[arg(long, default_value_t = 20)]
    seeds: usize,
    /// First seed; successive runs use seed_base, seed_base+1, …
    #[arg(long, default_value_t = 1)]
    seed_base: u64,
    /// Output CSV `seed,error`
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::Domain(_) | Error::Io(_) | Error::Parse(_) => 2,
        Error::Numeric { .. } | Error::NotInvertible => 3,
        Error::DataInconsistency { .. } => 4,
        Error::ResourceCap { .. } => 5,
    }
}

pub fn run(cli: Cli) -> i32 {
    let threads = cli.threads.or_else(|| {
        std::env::var("LAYERSCATTER_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(t) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let started = Instant::now();
    let result = dispatch(&cli.cmd);
    match result {
        Ok(mut report) => {
            report.wall_time_s = started.elapsed().as_secs_f64();
            if let Err(e) = report.emit(cli.report.as_deref()) {
                eprintln!("error: failed to write report: {e}");
                return 2;
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: &Command) -> Result<RunReport> {
    match cmd {
        Command::Forward(a) => cmd_forward(a),
        Command::Invert(a) => cmd_invert(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Trace(a) => cmd_trace(a),
        Command::Szego(a) => cmd_szego(a),
        Command::Layerstrip(a) => cmd_layerstrip(a),
        Command::Born(a) => cmd_born(a),
        Command::Shortrange(a) => cmd_shortrange(a),
        Command::NoiseSweep(a) => cmd_noise_sweep(a),
    }
}

/// Parse a profile spec: registry shorthand, samples CSV, or descriptor file.
fn parse_medium(spec: &str, x0: f64, x1: f64) -> Result<Medium> {
    if let Some(rest) = spec.strip_prefix("exp:") {
        let a0: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad exp parameter '{rest}'")))?;
        return Ok(Medium::Profile(ImpedanceProfile::exponential(x0, x1, a0)?));
    }
    if let Some(rest) = spec.strip_prefix("const:") {
        let v: f64 = rest
            .parse()
            .map_err(|_| Error::Parse(format!("bad const parameter '{rest}'")))?;
        return Ok(Medium::Profile(ImpedanceProfile::constant(x0, x1, v)?));
    }
    if let Some(rest) = spec.strip_prefix("samples:") {
        let (xs, zs) = io::read_impedance_csv(Path::new(rest))?;
        return Ok(Medium::Profile(ImpedanceProfile::from_samples(xs, zs)?));
    }
    match spec {
        "paper53" => Ok(Medium::Profile(ImpedanceProfile::paper53(x0, x1)?)),
        "const" => Ok(Medium::Profile(ImpedanceProfile::constant(x0, x1, 1.0)?)),
        path if path.ends_with(".json") => {
            let text = std::fs::read_to_string(path)?;
            io::ProfileDescriptor::from_json(&text)?.build()
        }
        other => Err(Error::Parse(format!("unknown profile '{other}'"))),
    }
}

fn cmd_forward(a: &ForwardArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "forward",
        config_map! {
            "profile" => &a.profile, "x0" => a.x0, "x1" => a.x1,
            "n" => a.n, "window" => a.window, "out" => a.out.display().to_string(),
        },
    );
    let medium = parse_medium(&a.profile, a.x0, a.x1)?;
    let series = forward::forward_scatter_windowed(&medium, a.x0, a.x1, a.n, a.window)?;
    io::write_data_csv(&a.out, &series.times(), &series.data())?;
    report.output("data_csv", &a.out);
    report.metric("n", a.n as f64);
    report.metric("delta", series.delta);
    report.metric(
        "max_abs_a",
        series.a.iter().fold(0.0f64, |m, v| m.max(v.abs())),
    );
    Ok(report)
}

fn cmd_invert(a: &InvertArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "invert",
        config_map! {
            "data" => a.data.display().to_string(), "x0" => a.x0, "zeta0" => a.zeta0,
            "noise" => a.noise, "seed" => a.seed, "truth" => a.truth.clone(),
            "out" => a.out.display().to_string(),
        },
    );
    let (times, mut data) = io::read_data_csv(&a.data)?;
    if a.noise != 0.0 {
        let sigma = inverse::add_noise(&mut data, a.noise, a.seed);
        report.metric("noise_sigma", sigma);
    }
    let inv = inverse::invert_scatter(&times, &data, a.x0, a.zeta0)?;
    let grid = inv.grid();
    io::write_impedance_csv(&a.out, &grid, &inv.impedance)?;
    report.output("zeta_csv", &a.out);
    if let Some(ap) = &a.alpha_out {
        io::write_alpha_csv(ap, &grid, &inv.alpha)?;
        report.output("alpha_csv", ap);
    }
    // per-step diagnostics: Toeplitz residual of the moment solve, the
    // largest recursion coefficient, and clamping (never applied: an
    // out-of-range coefficient aborts with exit code 4 instead)
    let tau = times[0];
    let a_in: Vec<f64> = data.iter().map(|d| tau * d).collect();
    let moments = inverse::moments_from_coefficients(&a_in);
    let back = inverse::coefficients_from_moments(&moments);
    let residual = a_in
        .iter()
        .zip(&back)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0f64, f64::max);
    report.metric("moment_residual", residual);
    report.metric("clamp_events", 0.0);
    report.metric("max_abs_r", inv.max_abs_r);
    report.metric("samples", inv.impedance.len() as f64);
    if let Some(truth_spec) = &a.truth {
        let x1 = grid.last().copied().unwrap_or(a.x0) + 0.5 * inv.tau;
        let truth = parse_medium(truth_spec, a.x0, x1)?;
        let truth_samples: Vec<f64> = grid.iter().map(|&y| truth.zeta_plus(y)).collect();
        report.metric(
            "rel_l2_error",
            inverse::relative_l2(&inv.impedance, &truth_samples),
        );
    }
    Ok(report)
}

fn cmd_spectrum(a: &SpectrumArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "spectrum",
        config_map! {
            "profile" => &a.profile, "x0" => a.x0, "x1" => a.x1, "n" => a.n,
            "band" => a.band, "count" => a.count, "out" => a.out.display().to_string(),
        },
    );
    if a.count < 2 {
        return Err(Error::invalid("count must be >= 2"));
    }
    let medium = parse_medium(&a.profile, a.x0, a.x1)?;
    let omegas = forward::omega_grid(a.band, a.count);
    let values = match &medium {
        Medium::Step(m) => forward::spectrum(m, &omegas),
        Medium::Profile(p) => forward::spectrum_of_profile(p, a.n, &omegas)?,
    };
    io::write_spectrum_csv(&a.out, &omegas, &values)?;
    report.output("spectrum_csv", &a.out);
    let max_mod = values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
    report.metric("max_modulus", max_mod);
    Ok(report)
}

fn cmd_trace(a: &TraceArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "trace",
        config_map! {
            "profile" => &a.profile, "x0" => a.x0, "x1" => a.x1,
            "n" => a.n, "l" => a.l, "count" => a.count,
        },
    );
    let medium = parse_medium(&a.profile, a.x0, a.x1)?;
    let omegas = forward::omega_grid(a.l, a.count.max(2));
    let (values, exact): (Vec<Complex64>, Option<f64>) = match &medium {
        Medium::Step(m) => (
            forward::spectrum(m, &omegas),
            Some(
                m.reflectivities()
                    .iter()
                    .map(|r| -(1.0 - r * r).ln())
                    .sum(),
            ),
        ),
        Medium::Profile(p) => (forward::spectrum_of_profile(p, a.n, &omegas)?, None),
    };
    let mean = specfun::singular_trace(&omegas, &values)?;
    report.metric("cesaro_mean", mean);
    if let Some(rhs) = exact {
        report.metric("jump_sum", rhs);
        report.metric("gap", (mean - rhs).abs());
    }
    Ok(report)
}

fn cmd_szego(a: &SzegoArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "szego",
        config_map! { "r" => a.r.clone(), "delta" => a.delta, "tol" => a.tol },
    );
    let list = opuc::VerblunskyList::new(a.r.clone())?;
    let (lhs, rhs) = opuc::szego_sum(&list, a.delta, Some(a.tol))?;
    report.metric("lhs", lhs);
    report.metric("rhs", rhs);
    report.metric("gap", (lhs - rhs).abs());
    Ok(report)
}

fn cmd_layerstrip(a: &LayerstripArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "layerstrip",
        config_map! {
            "profile" => &a.profile, "x0" => a.x0, "x1" => a.x1, "zeta0" => a.zeta0,
            "exact" => a.exact, "l" => a.l, "threshold" => a.threshold,
            "out" => a.out.display().to_string(),
        },
    );
    let medium = parse_medium(&a.profile, a.x0, a.x1)?;
    let step = match medium {
        Medium::Step(m) => m,
        Medium::Profile(_) => {
            return Err(Error::invalid("layerstrip expects a step medium (kind \"step\")"))
        }
    };
    let outcome = if a.exact {
        inverse::layer_strip_exact(&step, a.zeta0)?
    } else {
        let iv = step.interval();
        inverse::layer_strip_numeric(
            |w| moebius::step_reflection(&step, w),
            iv.x0,
            iv.x1,
            a.zeta0,
            a.l,
            a.threshold,
        )?
    };
    // sampled impedance of the recovered medium
    let iv = outcome.medium.interval();
    let count = 1000;
    let h = iv.length() / count as f64;
    let xs: Vec<f64> = (0..=count).map(|i| iv.x0 + i as f64 * h).collect();
    let zs: Vec<f64> = xs.iter().map(|&x| outcome.medium.zeta_plus(x)).collect();
    io::write_impedance_csv(&a.out, &xs, &zs)?;
    report.output("zeta_csv", &a.out);
    report.metric("jumps_recovered", outcome.medium.jump_count() as f64);
    report.metric("complete", if outcome.complete { 1.0 } else { 0.0 });
    report.metric("tolerance", outcome.tolerance);
    // recovered interfaces vs the input medium
    let mut worst_jump = 0.0f64;
    let mut worst_r = 0.0f64;
    if outcome.medium.jump_count() == step.jump_count() {
        for (a1, b1) in outcome.medium.jumps().iter().zip(step.jumps()) {
            worst_jump = worst_jump.max((a1 - b1).abs());
        }
        for (a1, b1) in outcome
            .medium
            .reflectivities()
            .iter()
            .zip(step.reflectivities())
        {
            worst_r = worst_r.max((a1 - b1).abs());
        }
        report.metric("max_jump_error", worst_jump);
        report.metric("max_reflectivity_error", worst_r);
    }
    Ok(report)
}

fn cmd_born(a: &BornArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "born",
        config_map! {
            "profile" => &a.profile, "x0" => a.x0, "x1" => a.x1,
            "n" => a.n, "zeta0" => a.zeta0, "out" => a.out.display().to_string(),
        },
    );
    let medium = parse_medium(&a.profile, a.x0, a.x1)?;
    let profile = match &medium {
        Medium::Profile(p) => p.clone(),
        Medium::Step(_) => return Err(Error::invalid("born expects a continuous profile")),
    };
    let series = forward::forward_scatter(&medium, a.x0, a.x1, a.n)?;
    let data = series.data();
    let born = forward::born_approximation(&profile, &series.times())?;
    let resid_num: f64 = data
        .iter()
        .zip(&born)
        .map(|(d, b)| (d - b) * (d - b))
        .sum();
    let data_norm: f64 = data.iter().map(|d| d * d).sum();
    report.metric("born_data_rel_error", (resid_num / data_norm).sqrt());
    let (ys, zeta_born) = inverse::born_invert(&series.times(), &data, a.x0, a.zeta0)?;
    io::write_impedance_csv(&a.out, &ys, &zeta_born)?;
    report.output("zeta_csv", &a.out);
    let truth: Vec<f64> = ys.iter().map(|&y| medium.zeta_plus(y)).collect();
    report.metric(
        "born_inversion_rel_error",
        inverse::relative_l2(&zeta_born, &truth),
    );
    Ok(report)
}

fn cmd_shortrange(a: &ShortrangeArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "shortrange",
        config_map! {
            "data" => a.data.display().to_string(), "x0" => a.x0, "zeta0" => a.zeta0,
            "int_l1" => a.int_l1, "int_l2" => a.int_l2, "y" => a.y, "order" => a.order,
        },
    );
    let (times, data) = io::read_data_csv(&a.data)?;
    if times.is_empty() {
        return Err(Error::invalid("empty data file"));
    }
    let tau = times[0];
    let series = forward::ReflectionSeries {
        delta: 0.5 * tau,
        a: data.iter().map(|d| tau * d).collect(),
        singular: false,
    };
    let z = inverse::short_range_invert(
        &series, a.x0, a.zeta0, a.int_l1, a.int_l2, a.y, a.order,
    )?;
    report.metric("zeta_y", z);
    report.metric("y", a.y);
    Ok(report)
}

fn cmd_noise_sweep(a: &NoiseSweepArgs) -> Result<RunReport> {
    let mut report = RunReport::new(
        "noise-sweep",
        config_map! {
            "profile" => &a.profile, "x0" => a.x0, "x1" => a.x1, "n" => a.n,
            "zeta0" => a.zeta0, "noise" => a.noise, "seeds" => a.seeds,
            "seed_base" => a.seed_base, "out" => a.out.display().to_string(),
        },
    );
    let medium = parse_medium(&a.profile, a.x0, a.x1)?;
    let series = forward::forward_scatter(&medium, a.x0, a.x1, a.n)?;
    let delta = series.delta;
    let reference: Vec<f64> = (1..=a.n)
        .map(|j| medium.zeta_plus(a.x0 + j as f64 * delta + 0.5 * delta))
        .collect();
    let seeds: Vec<u64> = (0..a.seeds as u64).map(|i| a.seed_base + i).collect();
    let results = inverse::noise_sweep(&series, a.x0, a.zeta0, &reference, a.noise, &seeds);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(seeds.len());
    let mut errors = Vec::with_capacity(seeds.len());
    let mut aborts = 0usize;
    for (seed, res) in seeds.iter().zip(results) {
        match res {
            Ok(err) => {
                errors.push(err);
                rows.push(vec![*seed as f64, err]);
            }
            Err(_) => aborts += 1,
        }
    }
    {
        let mut f = std::fs::File::create(&a.out)?;
        use std::io::Write;
        f.write_all(b"seed,error\n")?;
        for row in &rows {
            f.write_all(format!("{},{}\n", row[0] as u64, io::fmt_f64(row[1])).as_bytes())?;
        }
    }
    report.output("sweep_csv", &a.out);
    report.metric("aborts", aborts as f64);
    if !errors.is_empty() {
        let mut sorted = errors.clone();
        sorted.sort_by(|x, y| x.partial_cmp(y).unwrap());
        report.metric("median_error", sorted[sorted.len() / 2]);
        report.metric("min_error", sorted[0]);
        report.metric("max_error", *sorted.last().unwrap());
    }
    Ok(report)
}

