//! Leading-order long-time profiles.
//!
//! For `t → ±∞` along rays `ξ = −x/4t`,
//! `q(x, t) ≈ |t|^{-1/2}·α(ξ)·exp(∓iκ(ξ)·log 8|t| + ix²/4t)` with
//! `|α|² = κ/2ξ`, and the DNLS field `u` differs from `q` by the limit of the
//! gauge factor `exp(i∫_{-∞}^x |q|²)`, which is a function of `ξ` alone.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::KappaFunction;
use crate::error::{Error, Result};
use crate::model_rhp::{Sign, SignCase};
use crate::quad::{integrate_real, QuadOptions};
use crate::scattering::Potential;
use crate::specfun::gamma_complex;

fn opts(kf: &KappaFunction) -> QuadOptions {
    QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 8 * kf.nodes().len() + 4000 }
}

fn breaks(kf: &KappaFunction, a: f64, b: f64, extra: &[f64]) -> Vec<f64> {
    kf.nodes().iter().chain(extra).copied().filter(|&x| x > a && x < b).collect()
}

/// `∫_{-∞}^{lo} f` or `∫_{hi}^{∞} f` through `s = edge/τ`; `f` must decay
/// faster than `1/s`.
fn tail<F: Fn(f64) -> f64>(kf: &KappaFunction, left: bool, f: F) -> Result<f64> {
    let edge = if left { kf.lo() } else { kf.hi() };
    integrate_real(|t| if t == 0.0 { 0.0 } else { f(edge / t) * edge.abs() / (t * t) }, 0.0, 1.0, &[], opts(kf))
}

fn check_grid(kf: &KappaFunction, xi: f64) -> Result<()> {
    if !(xi > kf.lo() && xi < kf.hi()) {
        return Err(Error::Domain(format!("xi = {xi} is outside the reflection grid ({}, {})", kf.lo(), kf.hi())));
    }
    Ok(())
}

/// `∫ log|s − ξ|·κ′(s) ds` over `(−∞, ξ)` (`left`) or `(ξ, ∞)`.
///
/// The logarithm is integrable but slows adaptive quadrature, so on the unit
/// interval next to `ξ` the constant `κ′(ξ)` is subtracted and its integral
/// `h·log h − h` added back.
pub fn log_weighted_integral(kf: &KappaFunction, xi: f64, left: bool) -> Result<f64> {
    check_grid(kf, xi)?;
    let d0 = kf.deriv(xi);
    let (a, b) = if left { (kf.lo(), xi) } else { (xi, kf.hi()) };
    let h = (b - a).min(1.0);
    let near = |s: f64| if left { s > xi - h } else { s < xi + h };
    let f = |s: f64| {
        let w = (s - xi).abs().ln();
        let k = kf.deriv(s);
        if near(s) {
            w * (k - d0)
        } else {
            w * k
        }
    };
    let cut = if left { xi - h } else { xi + h };
    let body = integrate_real(f, a, b, &breaks(kf, a, b, &[cut]), opts(kf))?;
    let local = d0 * (h * h.ln() - h);
    let far = tail(kf, left, |s| (s - xi).abs().ln() * kf.deriv(s))?;
    Ok(body + local + far)
}

/// `κ(s)/s`, continued to `|ρ(0)|²/2π` at the origin.
fn kappa_over_s(kf: &KappaFunction, s: f64) -> f64 {
    if s.abs() < 1e-9 {
        return kf.rho(0.0).norm_sqr() / (2.0 * PI);
    }
    kf.eval(s).unwrap_or(f64::NAN) / s
}

/// `∫ κ(s)/s ds` over `(−∞, ξ)` (`left`) or `(ξ, ∞)`.
pub fn kappa_over_s_integral(kf: &KappaFunction, xi: f64, left: bool) -> Result<f64> {
    check_grid(kf, xi)?;
    let (a, b) = if left { (kf.lo(), xi) } else { (xi, kf.hi()) };
    let f = |s: f64| kappa_over_s(kf, s);
    Ok(integrate_real(f, a, b, &breaks(kf, a, b, &[0.0]), opts(kf))? + tail(kf, left, f)?)
}

/// `∫ κ(s)/s ds` over the whole line.
pub fn kappa_over_s_total(kf: &KappaFunction) -> Result<f64> {
    let (a, b) = (kf.lo(), kf.hi());
    let f = |s: f64| kappa_over_s(kf, s);
    Ok(integrate_real(f, a, b, &breaks(kf, a, b, &[0.0]), opts(kf))? + tail(kf, true, f)? + tail(kf, false, f)?)
}

/// `α` multiplying the profile in the given sign case: `α₁` on `x > 0` for
/// `t > 0` (and `x < 0` for `t < 0`), `α₂` otherwise.
pub fn alpha_eval(kf: &KappaFunction, xi: f64, case: SignCase) -> Result<Complex64> {
    check_grid(kf, xi)?;
    let rho = kf.rho(xi);
    if rho.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let (modulus, arg_gamma) = if xi == 0.0 {
        // κ/ξ → |ρ(0)|²/2π and arg Γ(iκ) → ±π/2 from the side the case sits on
        let g = if case.xi_sign() < 0.0 { PI / 2.0 } else { -PI / 2.0 };
        ((rho.norm_sqr() / (4.0 * PI)).sqrt(), g)
    } else {
        if xi.signum() != case.xi_sign() {
            return Err(Error::Invalid(format!("xi = {xi} does not match case {}", case.label())));
        }
        let kappa = kf.eval(xi)?;
        let m2 = kappa / (2.0 * xi);
        if m2 < 0.0 {
            return Err(Error::Domain(format!("kappa/xi = {} is negative", kappa / xi)));
        }
        (m2.sqrt(), gamma_complex(Complex64::new(0.0, kappa))?.arg())
    };
    let arg = match case.t_sign {
        Sign::Plus => {
            let a1 = PI / 4.0 + arg_gamma + rho.arg() - 2.0 * log_weighted_integral(kf, xi, true)?;
            if case.x_sign == Sign::Plus {
                a1
            } else {
                a1 - PI
            }
        }
        Sign::Minus => {
            let a1 = -PI / 4.0 - arg_gamma + rho.arg() - 2.0 * log_weighted_integral(kf, xi, false)?;
            if case.x_sign == Sign::Minus {
                a1
            } else {
                a1 + PI
            }
        }
    };
    Ok(Complex64::from_polar(modulus, arg))
}

/// Limit of `exp(i∫_{-∞}^{x}|q|²)` along the ray: `exp(2i∫_ξ^∞ κ/s)` for
/// `t > 0` and `exp(2i∫_{-∞}^ξ κ/s)` for `t < 0`.
pub fn gauge_phase_asymptotic(kf: &KappaFunction, xi: f64, t_sign: Sign) -> Result<Complex64> {
    if xi == 0.0 {
        return Err(Error::Domain("xi must be nonzero".into()));
    }
    let v = kappa_over_s_integral(kf, xi, t_sign == Sign::Minus)?;
    Ok(Complex64::new(0.0, 2.0 * v).exp())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AsymptoticConfig {
    /// Smallest `|t|` at which the leading term is reported.
    pub t_min: f64,
}

impl Default for AsymptoticConfig {
    fn default() -> Self {
        Self { t_min: 5.0 }
    }
}

/// Everything the leading-order profiles need at one ray.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticProfile {
    pub xi: f64,
    pub case: SignCase,
    pub kappa: f64,
    pub alpha_mod: f64,
    pub alpha_arg: f64,
    /// `arg` of the gauge limit; absent at `ξ = 0`.
    pub gauge_phase: Option<f64>,
}

impl AsymptoticProfile {
    pub fn new(kf: &KappaFunction, xi: f64, case: SignCase) -> Result<Self> {
        let alpha = alpha_eval(kf, xi, case)?;
        let kappa = if xi == 0.0 { 0.0 } else { kf.eval(xi)? };
        let gauge_phase = if xi == 0.0 { None } else { Some(gauge_phase_asymptotic(kf, xi, case.t_sign)?.arg()) };
        Ok(Self { xi, case, kappa, alpha_mod: alpha.norm(), alpha_arg: alpha.arg(), gauge_phase })
    }

    pub fn alpha(&self) -> Complex64 {
        Complex64::from_polar(self.alpha_mod, self.alpha_arg)
    }

    /// `q` at `(x, t)` on this ray (`x` is taken as given, not from `ξ`).
    pub fn q_at(&self, x: f64, t: f64) -> Complex64 {
        let tt = t.abs();
        let s = self.case.t_sign.value();
        let phase = -s * self.kappa * (8.0 * tt).ln() + x * x / (4.0 * t);
        self.alpha() * Complex64::new(0.0, phase).exp() / tt.sqrt()
    }
}

fn case_at(x: f64, t: f64) -> SignCase {
    // x = 0 belongs to the side whose formula has a finite limit there: use x > 0
    SignCase::new(Sign::of(t), if x >= 0.0 { Sign::Plus } else { Sign::Minus })
}

fn ray(x: f64, t: f64, cfg: &AsymptoticConfig) -> Result<f64> {
    if !(t.abs() >= cfg.t_min) {
        return Err(Error::Domain(format!("|t| = {} is below t_min = {}", t.abs(), cfg.t_min)));
    }
    Ok(-x / (4.0 * t))
}

/// Leading-order Gerjikov–Ivanov profile `q_as(x, t)`.
pub fn q_asymptotic(kf: &KappaFunction, x: f64, t: f64, cfg: &AsymptoticConfig) -> Result<Complex64> {
    let xi = ray(x, t, cfg)?;
    let case = case_at(x, t);
    let alpha = alpha_eval(kf, xi, case)?;
    let kappa = if xi == 0.0 { 0.0 } else { kf.eval(xi)? };
    let tt = t.abs();
    let phase = -case.t_sign.value() * kappa * (8.0 * tt).ln() + x * x / (4.0 * t);
    Ok(alpha * Complex64::new(0.0, phase).exp() / tt.sqrt())
}

/// Leading-order DNLS profile `u_as(x, t) = q_as·(gauge limit)`; `ξ ≠ 0`.
pub fn u_asymptotic(kf: &KappaFunction, x: f64, t: f64, cfg: &AsymptoticConfig) -> Result<Complex64> {
    let xi = ray(x, t, cfg)?;
    if xi == 0.0 {
        return Err(Error::Domain("xi must be nonzero".into()));
    }
    Ok(q_asymptotic(kf, x, t, cfg)? * gauge_phase_asymptotic(kf, xi, Sign::of(t))?)
}

/// `|exp(i∫|q₀|²) − exp(−(i/π)∫log(1 − s|ρ|²)/s ds)|`.
pub fn plancherel_check(q: &Potential, kf: &KappaFunction) -> Result<f64> {
    let (a, b) = (q.x_min, q.x_max);
    let pts: Vec<f64> = (1..(b - a).ceil() as usize).map(|k| a + k as f64).collect();
    let mass = integrate_real(|x| q.eval(x).norm_sqr(), a, b, &pts, QuadOptions { abs_tol: 1e-13, rel_tol: 1e-13, max_panels: 8000 })?;
    let total = kappa_over_s_total(kf)?;
    Ok((Complex64::new(0.0, mass).exp() - Complex64::new(0.0, 2.0 * total).exp()).norm())
}
