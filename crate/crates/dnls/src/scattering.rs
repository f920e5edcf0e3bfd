//! Direct scattering for the Kaup–Newell type spectral problem
//! `Ψ′ = (−iζ²σ₃ + ζQ + P)Ψ`, `Q = offdiag(q, q̄)`, `P = (i/2)|q|² diag(−1, 1)`.
//!
//! The integrated variable is `n = e^{ixζ²σ₃}Ψ⁻`, normalised to `I` at the left
//! edge of the window. Its coefficient matrix carries the phase `e^{±2ixζ²}`
//! only off the diagonal, and at the right edge `n` is the transition matrix
//! read through `Ψ⁻ = Ψ⁺ n`, so `a = n₂₂`, `ă = n₁₁`, `b̆ = −n₁₂`, `b = −n₂₁`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Tolerances for the scattering stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScatteringConfig {
    pub tail_tol: f64,
    pub det_tol: f64,
    /// Local (per-step) error tolerance of the adaptive ODE solver.
    pub ode_tol: f64,
    pub wind_tol: f64,
}

impl Default for ScatteringConfig {
    fn default() -> Self {
        Self { tail_tol: 1e-10, det_tol: 1e-8, ode_tol: 1e-10, wind_tol: 1e-3 }
    }
}

/// Initial datum sampled on a uniform grid of `n` nodes over `[x_min, x_max]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Potential {
    pub schema_version: u32,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: Vec<Complex64>,
}

impl Potential {
    pub fn new(samples: Vec<Complex64>, x_min: f64, x_max: f64, tail_tol: f64) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::Invalid("potential needs at least two nodes".into()));
        }
        if !(x_min < x_max) {
            return Err(Error::Invalid(format!("window [{x_min}, {x_max}] is empty")));
        }
        let tail = samples[0].norm().max(samples[samples.len() - 1].norm());
        if !(tail <= tail_tol) {
            return Err(Error::Invalid(format!(
                "potential does not decay in the window: edge amplitude {tail:e} > tail_tol {tail_tol:e}"
            )));
        }
        Ok(Self { schema_version: SCHEMA_VERSION, x_min, x_max, samples })
    }

    /// Sample `f` on `n` nodes.
    pub fn from_fn<F: Fn(f64) -> Complex64>(f: F, x_min: f64, x_max: f64, n: usize, tail_tol: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("potential needs at least two nodes".into()));
        }
        let dx = (x_max - x_min) / (n - 1) as f64;
        let s = (0..n).map(|i| f(x_min + i as f64 * dx)).collect();
        Self::new(s, x_min, x_max, tail_tol)
    }

    /// `amp·e^{−x²}` on `[−20, 20]`.
    pub fn gaussian(amp: f64, n: usize) -> Result<Self> {
        Self::from_fn(|x| c(amp * (-x * x).exp(), 0.0), -20.0, 20.0, n, ScatteringConfig::default().tail_tol)
    }

    pub fn n(&self) -> usize {
        self.samples.len()
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n() - 1) as f64
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let dx = self.dx();
        (0..self.n()).map(move |i| self.x_min + i as f64 * dx)
    }

    /// `q₀(x)` by 8-point Lagrange interpolation; zero outside the window.
    pub fn eval(&self, x: f64) -> Complex64 {
        if x < self.x_min || x > self.x_max {
            return c(0.0, 0.0);
        }
        let n = self.n();
        let m = 8.min(n);
        let dx = self.dx();
        let u = (x - self.x_min) / dx;
        let i0 = (u.floor() as isize - (m as isize / 2 - 1)).clamp(0, (n - m) as isize) as usize;
        let mut acc = c(0.0, 0.0);
        for j in 0..m {
            let tj = (i0 + j) as f64;
            if u == tj {
                return self.samples[i0 + j];
            }
            let mut w = 1.0;
            for k in 0..m {
                if k != j {
                    let tk = (i0 + k) as f64;
                    w *= (u - tk) / (tj - tk);
                }
            }
            acc += self.samples[i0 + j] * w;
        }
        acc
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        Self::new(p.samples, p.x_min, p.x_max, f64::INFINITY)
    }
}

/// Transition coefficients at one spectral point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransitionSample {
    pub zeta: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    pub a_breve: Complex64,
    pub b_breve: Complex64,
}

impl TransitionSample {
    /// `|a·ă − b·b̆ − 1|`.
    pub fn det_residual(&self) -> f64 {
        (self.a * self.a_breve - self.b * self.b_breve - 1.0).norm()
    }
}

type State = [Complex64; 4];

// Dormand–Prince 5(4) tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn lin(y: &State, terms: &[(f64, &State)], h: f64) -> State {
    let mut out = *y;
    for (w, k) in terms {
        for i in 0..4 {
            out[i] += k[i] * (w * h);
        }
    }
    out
}

/// Adaptive Dormand–Prince integration of `y′ = f(x, y)` over `[x0, x1]`.
fn dopri<F: FnMut(f64, &State) -> State>(mut f: F, x0: f64, x1: f64, y0: State, tol: f64, zeta: Complex64) -> Result<State> {
    let mut x = x0;
    let mut y = y0;
    let mut h = 0.05f64.min(x1 - x0);
    let mut k1 = f(x, &y);
    let mut steps = 0usize;
    while x < x1 {
        if x + h > x1 {
            h = x1 - x;
        }
        let k2 = f(x + C2 * h, &lin(&y, &[(A21, &k1)], h));
        let k3 = f(x + C3 * h, &lin(&y, &[(A31, &k1), (A32, &k2)], h));
        let k4 = f(x + C4 * h, &lin(&y, &[(A41, &k1), (A42, &k2), (A43, &k3)], h));
        let k5 = f(x + C5 * h, &lin(&y, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)], h));
        let k6 = f(x + h, &lin(&y, &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)], h));
        let yn = lin(&y, &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)], h);
        let k7 = f(x + h, &yn);
        let mut err: f64 = 0.0;
        for i in 0..4 {
            let e = (k1[i] * E1 + k3[i] * E3 + k4[i] * E4 + k5[i] * E5 + k6[i] * E6 + k7[i] * E7) * h;
            let sc = tol * (1.0 + y[i].norm().max(yn[i].norm()));
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            return Err(Error::Integration { zeta, reason: "non-finite state".into() });
        }
        if err <= 1.0 {
            x += h;
            y = yn;
            k1 = k7;
        }
        let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= fac;
        if h < 1e-12 * (x1 - x0) {
            return Err(Error::Integration { zeta, reason: "step size underflow".into() });
        }
        steps += 1;
        if steps > 2_000_000 {
            return Err(Error::Integration { zeta, reason: "step budget exhausted".into() });
        }
    }
    Ok(y)
}

/// Integrates the spectral problem across the window without the
/// determinant check. Used directly for complex `ζ`, where only column 2
/// (hence `a`) is meaningful.
fn transfer(q: &Potential, zeta: Complex64, tol: f64) -> Result<State> {
    let z = zeta * zeta;
    let rhs = |x: f64, n: &State| -> State {
        let qx = q.eval(x);
        let p = c(0.0, 0.5 * qx.norm_sqr());
        let ph = (c(0.0, 2.0) * x * z).exp();
        let b12 = zeta * qx * ph;
        let b21 = zeta * qx.conj() / ph;
        // n = [n11, n12, n21, n22]
        [
            -p * n[0] + b12 * n[2],
            -p * n[1] + b12 * n[3],
            b21 * n[0] + p * n[2],
            b21 * n[1] + p * n[3],
        ]
    };
    let id = [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
    dopri(rhs, q.x_min, q.x_max, id, tol, zeta)
}

/// Transition coefficients `a, b, ă, b̆` at `ζ` with `Im ζ² = 0`.
pub fn jost_transition(q: &Potential, zeta: Complex64, cfg: &ScatteringConfig) -> Result<TransitionSample> {
    let z = zeta * zeta;
    if z.im.abs() > 1e-12 * (1.0 + z.norm()) {
        return Err(Error::Domain(format!("zeta = {zeta} is off the contour Im zeta^2 = 0")));
    }
    let n = transfer(q, zeta, cfg.ode_tol)?;
    let s = TransitionSample { zeta, a: n[3], a_breve: n[0], b_breve: -n[1], b: -n[2] };
    let r = s.det_residual();
    if !(r <= cfg.det_tol) {
        return Err(Error::Consistency { what: format!("determinant relation at zeta = {zeta}"), residual: r, tol: cfg.det_tol });
    }
    Ok(s)
}

/// `a(ζ)` for any `ζ` with `Im ζ² ≤ 0`.
pub fn a_continued(q: &Potential, zeta: Complex64, cfg: &ScatteringConfig) -> Result<Complex64> {
    Ok(transfer(q, zeta, cfg.ode_tol)?[3])
}

/// The representative `ζ` of a real `z = ζ²`: `√z` for `z ≥ 0`, `i√|z|` otherwise.
pub fn zeta_of(z: f64) -> Complex64 {
    if z >= 0.0 {
        c(z.sqrt(), 0.0)
    } else {
        c(0.0, (-z).sqrt())
    }
}

/// `ρ(z)` sampled on a real grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReflectionCoefficient {
    pub schema_version: u32,
    pub z_grid: Vec<f64>,
    pub rho: Vec<Complex64>,
    /// `min (1 − z|ρ(z)|²)` over the grid.
    pub c_margin: f64,
}

impl ReflectionCoefficient {
    pub fn new(z_grid: Vec<f64>, rho: Vec<Complex64>) -> Result<Self> {
        if z_grid.len() != rho.len() || z_grid.len() < 4 {
            return Err(Error::Invalid("reflection table needs >= 4 matching nodes".into()));
        }
        if !z_grid.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::Invalid("z grid must be strictly increasing".into()));
        }
        let c_margin = z_grid.iter().zip(&rho).map(|(&z, r)| 1.0 - z * r.norm_sqr()).fold(f64::INFINITY, f64::min);
        Ok(Self { schema_version: SCHEMA_VERSION, z_grid, rho, c_margin })
    }

    /// `ρ ≡ 0` on a uniform grid.
    pub fn zero(big_z: f64, nodes: usize) -> Self {
        let g = uniform_grid(big_z, nodes);
        let n = g.len();
        Self::new(g, vec![c(0.0, 0.0); n]).unwrap()
    }

    pub fn lo(&self) -> f64 {
        self.z_grid[0]
    }

    pub fn hi(&self) -> f64 {
        *self.z_grid.last().unwrap()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Self = serde_json::from_str(s)?;
        Self::new(r.z_grid, r.rho)
    }
}

/// `nodes` equally spaced points on `[−Z, Z]`.
pub fn uniform_grid(big_z: f64, nodes: usize) -> Vec<f64> {
    let h = 2.0 * big_z / (nodes - 1) as f64;
    (0..nodes).map(|i| -big_z + i as f64 * h).collect()
}

/// `ρ(z) = ζ⁻¹·b̆(ζ)/a(ζ)` on `z_grid`. A node at `z = 0`, where the quotient
/// is 0/0, is filled by interpolation from its neighbours.
pub fn reflection_map(q: &Potential, z_grid: &[f64], cfg: &ScatteringConfig) -> Result<ReflectionCoefficient> {
    let mut rho = Vec::with_capacity(z_grid.len());
    let mut zero_at = None;
    for (i, &z) in z_grid.iter().enumerate() {
        if z == 0.0 {
            zero_at = Some(i);
            rho.push(c(0.0, 0.0));
            continue;
        }
        let zeta = zeta_of(z);
        let s = jost_transition(q, zeta, cfg)?;
        rho.push(s.b_breve / (zeta * s.a));
    }
    if let Some(i) = zero_at {
        if i == 0 || i + 1 == z_grid.len() {
            return Err(Error::Invalid("z = 0 must be an interior node".into()));
        }
        // ρ is analytic in z across 0: Lagrange fit through up to two
        // neighbours per side
        let idx: Vec<usize> = if i >= 2 && i + 2 < z_grid.len() { vec![i - 2, i - 1, i + 1, i + 2] } else { vec![i - 1, i + 1] };
        let mut v = c(0.0, 0.0);
        for &j in &idx {
            let mut w = 1.0;
            for &k in &idx {
                if k != j {
                    w *= -z_grid[k] / (z_grid[j] - z_grid[k]);
                }
            }
            v += rho[j] * w;
        }
        rho[i] = v;
    }
    ReflectionCoefficient::new(z_grid.to_vec(), rho)
}

/// Soliton-free diagnostics.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolitonReport {
    pub c_margin: f64,
    /// Zeros of `a` inside the contour, by the argument principle.
    pub winding: i64,
    pub min_abs_a: f64,
    /// `|a|` dipped below `wind_tol` somewhere on the contour.
    pub inconclusive: bool,
    /// `c_margin ≤ 0` or a nonzero winding number.
    pub soliton_suspect: bool,
}

/// Rectangle in `{Im z < 0}` traversed by the winding count.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct WindingContour {
    pub half_width: f64,
    pub depth: f64,
    /// Distance of the top edge below the real axis.
    pub gap: f64,
    pub samples_per_edge: usize,
}

impl Default for WindingContour {
    fn default() -> Self {
        Self { half_width: 8.0, depth: 8.0, gap: 1e-2, samples_per_edge: 64 }
    }
}

pub fn soliton_free_report(rc: &ReflectionCoefficient, q: &Potential, cfg: &ScatteringConfig) -> Result<SolitonReport> {
    soliton_free_report_on(rc, q, cfg, &WindingContour::default())
}

pub fn soliton_free_report_on(
    rc: &ReflectionCoefficient,
    q: &Potential,
    cfg: &ScatteringConfig,
    contour: &WindingContour,
) -> Result<SolitonReport> {
    let (w, d, g) = (contour.half_width, contour.depth, contour.gap);
    let corners = [c(-w, -g), c(-w, -d), c(w, -d), c(w, -g), c(-w, -g)];
    let eval = |z: Complex64| a_continued(q, z.sqrt(), cfg);
    let mut total = 0.0;
    let mut min_abs = f64::INFINITY;
    for e in corners.windows(2) {
        let m = contour.samples_per_edge.max(2);
        let mut prev_z = e[0];
        let mut prev = eval(prev_z)?;
        min_abs = min_abs.min(prev.norm());
        for k in 1..=m {
            let z = e[0] + (e[1] - e[0]) * (k as f64 / m as f64);
            let (dphi, mn, val) = arg_increment(&eval, prev_z, prev, z, 0)?;
            total += dphi;
            min_abs = min_abs.min(mn);
            prev_z = z;
            prev = val;
        }
    }
    let winding = (total / (2.0 * std::f64::consts::PI)).round() as i64;
    Ok(SolitonReport {
        c_margin: rc.c_margin,
        winding,
        min_abs_a: min_abs,
        inconclusive: min_abs < cfg.wind_tol,
        soliton_suspect: rc.c_margin <= 0.0 || winding != 0,
    })
}

/// Change of `arg a` from `z0` to `z1`, bisecting until each piece turns by
/// less than π/4.
fn arg_increment<F: Fn(Complex64) -> Result<Complex64>>(
    eval: &F,
    z0: Complex64,
    a0: Complex64,
    z1: Complex64,
    depth: u32,
) -> Result<(f64, f64, Complex64)> {
    let a1 = eval(z1)?;
    let d = (a1 / a0).arg();
    if d.abs() < std::f64::consts::FRAC_PI_4 || depth >= 12 {
        return Ok((d, a1.norm(), a1));
    }
    let zm = 0.5 * (z0 + z1);
    let (d1, m1, am) = arg_increment(eval, z0, a0, zm, depth + 1)?;
    let (d2, m2, _) = arg_increment(eval, zm, am, z1, depth + 1)?;
    Ok((d1 + d2, m1.min(m2), a1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_is_exact_on_smooth_data() {
        let q = Potential::gaussian(0.3, 4001).unwrap();
        for x in [-1.234, 0.0, 0.0031, 2.5] {
            assert!((q.eval(x).re - 0.3 * (-x * x as f64).exp()).abs() < 1e-13);
        }
        assert_eq!(q.eval(25.0), c(0.0, 0.0));
    }

    #[test]
    fn tail_check_rejects_slow_decay() {
        assert!(Potential::from_fn(|x| c((-x.abs()).exp(), 0.0), -5.0, 5.0, 101, 1e-10).is_err());
    }

    #[test]
    fn zeta_representatives() {
        assert_eq!(zeta_of(4.0), c(2.0, 0.0));
        assert_eq!(zeta_of(-4.0), c(0.0, 2.0));
    }
}
