//! Quadrature helpers: Gauss–Legendre nodes, panel integration with
//! doubling, trapezoid sums, and cumulative Simpson for complex integrands.

use num_complex::Complex64;

/// Gauss–Legendre nodes and weights on (-1, 1), by Newton iteration on the
/// Legendre polynomial from the Chebyshev initial guess.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P'_n(x).
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate `f` over (a, b) with `panels` equal panels of `order`-point
/// Gauss–Legendre each.
pub fn panel_integral<F: Fn(f64) -> f64 + Sync>(f: &F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    crate::par::sum_range(panels, |p| {
        let lo = a + p as f64 * h;
        let mid = lo + 0.5 * h;
        let mut s = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            s += w * f(mid + 0.5 * h * x);
        }
        s * 0.5 * h
    })
}

/// Panel-doubling Gauss–Legendre integration: double the panel count until
/// two successive estimates agree to `rel_tol`, capped at `max_nodes` total
/// nodes. Returns the value with the achieved relative change.
pub fn adaptive_panels<F: Fn(f64) -> f64 + Sync>(
    f: &F,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_nodes: usize,
) -> (f64, f64) {
    let order = 16;
    let mut panels = 8;
    let mut prev = panel_integral(f, a, b, panels, order);
    loop {
        panels *= 2;
        let next = panel_integral(f, a, b, panels, order);
        let scale = next.abs().max(1e-300);
        let change = (next - prev).abs() / scale;
        if change <= rel_tol {
            return (next, change);
        }
        if panels * 2 * order > max_nodes {
            return (next, change);
        }
        prev = next;
    }
}

/// Trapezoid rule over a uniform grid of `values` with spacing `h`.
pub fn trapezoid(values: &[f64], h: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * (values[0] + values[values.len() - 1]) + inner)
}

/// Complex trapezoid rule over a uniform grid.
pub fn trapezoid_c(values: &[Complex64], h: f64) -> Complex64 {
    if values.len() < 2 {
        return Complex64::new(0.0, 0.0);
    }
    let inner: Complex64 = values[1..values.len() - 1].iter().sum();
    h * (0.5 * (values[0] + values[values.len() - 1]) + inner)
}

/// Cumulative integral of complex samples on a uniform grid (spacing `h`),
/// fourth order: each cell is integrated by the 4-point cubic rule on its
/// surrounding nodes. `out[0] = 0`, `out[i] ≈ ∫_{x0}^{x_i}`.
pub fn cumulative_simpson(values: &[Complex64], h: f64, out: &mut Vec<Complex64>) {
    let n = values.len();
    out.clear();
    out.resize(n, Complex64::new(0.0, 0.0));
    if n < 2 {
        return;
    }
    if n == 2 {
        out[1] = 0.5 * h * (values[0] + values[1]);
        return;
    }
    if n == 3 {
        out[1] = h / 12.0 * (5.0 * values[0] + 8.0 * values[1] - values[2]);
        out[2] = out[1] + h / 12.0 * (-values[0] + 8.0 * values[1] + 5.0 * values[2]);
        return;
    }
    let c = h / 24.0;
    for i in 1..n {
        let inc = if i == 1 {
            c * (9.0 * values[0] + 19.0 * values[1] - 5.0 * values[2] + values[3])
        } else if i == n - 1 {
            c * (values[n - 4] - 5.0 * values[n - 3] + 19.0 * values[n - 2] + 9.0 * values[n - 1])
        } else {
            c * (-values[i - 2] + 13.0 * values[i - 1] + 13.0 * values[i] - values[i + 1])
        };
        out[i] = out[i - 1] + inc;
    }
}
