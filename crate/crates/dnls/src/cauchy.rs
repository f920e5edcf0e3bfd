//! Scalar Cauchy integrals built on `κ(s) = −(1/2π)·log(1 − s|ρ(s)|²)`.
//!
//! Beyond the edges `lo`, `hi` of the reflection grid `κ` is continued by the
//! decay model `κ(edge)·(edge/s)²`; tail integrals use the substitution
//! `s = edge/τ`, which maps them onto `τ ∈ (0, 1]` with a smooth integrand.
//! Near-singular Cauchy integrands are handled by subtracting `κ` at the
//! singular point and adding back the closed-form logarithm.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interp::Table;
use crate::quad::{integrate, QuadOptions};
use crate::scattering::ReflectionCoefficient;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Branch-cut side of a scalar RHP solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// cut `(−∞, ξ]`
    Left,
    /// cut `[ξ, ∞)`
    Right,
}

/// `κ` on top of a cubic interpolant of `ρ`.
#[derive(Debug, Clone)]
pub struct KappaFunction {
    rho: Table,
    /// `κ` at the grid nodes.
    pub values: Vec<f64>,
    pub sup_norm: f64,
}

impl KappaFunction {
    pub fn new(rc: &ReflectionCoefficient) -> Result<Self> {
        if !(rc.c_margin > 0.0) {
            return Err(Error::Domain(format!("c_margin = {} is not positive", rc.c_margin)));
        }
        let rho = Table::cubic(rc.z_grid.clone(), rc.rho.clone());
        let values: Vec<f64> = rc.z_grid.iter().zip(&rc.rho).map(|(&s, r)| kappa_formula(s, r.norm_sqr())).collect();
        let sup_norm = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(Self { rho, values, sup_norm })
    }

    pub fn lo(&self) -> f64 {
        self.rho.lo()
    }

    pub fn hi(&self) -> f64 {
        self.rho.hi()
    }

    pub fn nodes(&self) -> &[f64] {
        self.rho.x()
    }

    /// Interpolated `ρ(s)`; zero outside the grid.
    pub fn rho(&self, s: f64) -> Complex64 {
        if s < self.lo() || s > self.hi() {
            c(0.0, 0.0)
        } else {
            self.rho.eval(s)
        }
    }

    /// `κ(s)`, with the tail model outside the grid.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if s < self.lo() {
            return Ok(self.values[0] * (self.lo() / s).powi(2));
        }
        if s > self.hi() {
            return Ok(self.values[self.values.len() - 1] * (self.hi() / s).powi(2));
        }
        let m = 1.0 - s * self.rho.eval(s).norm_sqr();
        if !(m > 0.0) {
            return Err(Error::Domain(format!("1 - s|rho(s)|^2 = {m} at s = {s}")));
        }
        Ok(-m.ln() / (2.0 * PI))
    }

    fn k(&self, s: f64) -> f64 {
        self.eval(s).unwrap_or(f64::NAN)
    }

    /// `κ′(s)` from the interpolant (zero-width tails are ignored).
    pub fn deriv(&self, s: f64) -> f64 {
        if s < self.lo() || s > self.hi() {
            let e = if s < self.lo() { self.lo() } else { self.hi() };
            let ke = self.k(e);
            return -2.0 * ke * e * e / (s * s * s);
        }
        let r = self.rho.eval(s);
        let dr = self.rho.deriv(s);
        let m = 1.0 - s * r.norm_sqr();
        let dm = -r.norm_sqr() - 2.0 * s * (r.conj() * dr).re;
        -dm / (m * 2.0 * PI)
    }

    fn opts(&self) -> QuadOptions {
        QuadOptions { abs_tol: 1e-12, rel_tol: 1e-12, max_panels: 8 * self.nodes().len() + 4000 }
    }

    /// Grid nodes strictly inside `(a, b)` plus `extra`, as quadrature breaks.
    fn breaks(&self, a: f64, b: f64, extra: &[f64]) -> Vec<f64> {
        let (l, h) = (a.min(b), a.max(b));
        let mut v: Vec<f64> = self.nodes().iter().copied().filter(|&x| x > l && x < h).collect();
        v.extend(extra.iter().copied().filter(|&x| x > l && x < h));
        v
    }

    /// `∫_{-∞}^{lo} κ_tail(s)·g(s) ds` or `∫_{hi}^{∞}` via `s = edge/τ`.
    fn tail<G: Fn(f64) -> Complex64>(&self, side: Side, g: G) -> Result<Complex64> {
        let (edge, ke) = match side {
            Side::Left => (self.lo(), self.values[0]),
            Side::Right => (self.hi(), self.values[self.values.len() - 1]),
        };
        if ke == 0.0 {
            return Ok(c(0.0, 0.0));
        }
        // κ_tail(edge/τ)·|ds/dτ| = κ(edge)·τ²·|edge|/τ² = κ(edge)·|edge|
        integrate(|t| if t == 0.0 { c(0.0, 0.0) } else { ke * edge.abs() * g(edge / t) }, 0.0, 1.0, &[], self.opts())
    }

    /// `∫_a^b κ(s)/(s − z) ds` for `lo ≤ a < b ≤ hi`, subtracting `κ(Re z)` when
    /// `z` sits close to the interval.
    fn cauchy_finite(&self, a: f64, b: f64, z: Complex64) -> Result<Complex64> {
        let x0 = z.re;
        let near = x0 > a && x0 < b && z.im.abs() < 1.0;
        if near {
            let k0 = self.eval(x0)?;
            let body = integrate(|s| (self.k(s) - k0) / (s - z), a, b, &self.breaks(a, b, &[x0]), self.opts())?;
            Ok(body + k0 * ((b - z).ln() - (a - z).ln()))
        } else {
            integrate(|s| self.k(s) / (s - z), a, b, &self.breaks(a, b, &[]), self.opts())
        }
    }

    fn check_xi(&self, xi: f64) -> Result<()> {
        if !(xi > self.lo() && xi < self.hi()) {
            return Err(Error::Domain(format!("xi = {xi} is outside the reflection grid ({}, {})", self.lo(), self.hi())));
        }
        Ok(())
    }

    /// `∫_{-∞}^{ξ} κ(s)/(s − z) ds` (left) or `∫_{ξ}^{∞}` (right).
    fn cauchy_half(&self, xi: f64, z: Complex64, side: Side) -> Result<Complex64> {
        let g = |s: f64| 1.0 / (s - z);
        match side {
            Side::Left => Ok(self.cauchy_finite(self.lo(), xi, z)? + self.tail(Side::Left, g)?),
            Side::Right => Ok(self.cauchy_finite(xi, self.hi(), z)? + self.tail(Side::Right, g)?),
        }
    }

    /// `∫ κ` over the half line.
    pub fn mass(&self, xi: f64, side: Side) -> Result<f64> {
        let one = |_: f64| c(1.0, 0.0);
        let v = match side {
            Side::Left => integrate(|s| c(self.k(s), 0.0), self.lo(), xi, &self.breaks(self.lo(), xi, &[]), self.opts())? + self.tail(Side::Left, one)?,
            Side::Right => integrate(|s| c(self.k(s), 0.0), xi, self.hi(), &self.breaks(xi, self.hi(), &[]), self.opts())? + self.tail(Side::Right, one)?,
        };
        Ok(v.re)
    }
}

/// `−(1/2π)·log(1 − s·|ρ|²)`.
pub fn kappa_formula(s: f64, rho_sq: f64) -> f64 {
    -(1.0 - s * rho_sq).ln() / (2.0 * PI)
}

/// `κ(s)` from a reflection table (builds the interpolant on each call; hold a
/// [`KappaFunction`] for repeated use).
pub fn kappa_eval(rc: &ReflectionCoefficient, s: f64) -> Result<f64> {
    KappaFunction::new(rc)?.eval(s)
}

/// `δ_ℓ(z) = exp(i∫_{-∞}^{ξ} κ/(s−z))` or `δ_r(z) = exp(−i∫_{ξ}^{∞} κ/(s−z))`.
pub fn delta_eval(kf: &KappaFunction, xi: f64, z: Complex64, side: Side) -> Result<Complex64> {
    kf.check_xi(xi)?;
    let on_cut = match side {
        Side::Left => z.re <= xi,
        Side::Right => z.re >= xi,
    };
    let dist = if on_cut { z.im.abs() } else { (z - xi).norm() };
    if dist < 1e-6 {
        return Err(Error::Domain(format!("z = {z} is within 1e-6 of the cut")));
    }
    let i = kf.cauchy_half(xi, z, side)?;
    Ok(match side {
        Side::Left => (c(0.0, 1.0) * i).exp(),
        Side::Right => (c(0.0, -1.0) * i).exp(),
    })
}

/// The constants `δ₀ℓ`, `δ₀r` in `δ(z) ≈ δ₀·(z − ξ)^{iκ(ξ)}` near `z = ξ`.
/// For `δ_r` the power uses `arg(z − ξ) ∈ (0, 2π)`.
pub fn delta0_eval(kf: &KappaFunction, xi: f64, side: Side) -> Result<Complex64> {
    kf.check_xi(xi)?;
    let k0 = kf.eval(xi)?;
    let opts = kf.opts();
    let g = |s: f64| c(1.0 / (s - xi), 0.0);
    match side {
        Side::Left => {
            let a = kf.lo();
            let cut = xi - 1.0;
            let chi = |s: f64| if s > cut { k0 } else { 0.0 };
            let body = integrate(|s| c((kf.k(s) - chi(s)) / (s - xi), 0.0), a, xi, &kf.breaks(a, xi, &[cut]), opts)?;
            let mut total = body + kf.tail(Side::Left, g)?;
            if cut < a {
                // ∫_{ξ−1}^{lo} −κ(ξ)/(s−ξ) ds
                total -= k0 * (xi - a).ln();
            }
            Ok((c(0.0, 1.0) * total).exp())
        }
        Side::Right => {
            let b = kf.hi();
            let cut = xi + 1.0;
            let chi = |s: f64| if s < cut { k0 } else { 0.0 };
            let body = integrate(|s| c((kf.k(s) - chi(s)) / (s - xi), 0.0), xi, b, &kf.breaks(xi, b, &[cut]), opts)?;
            let mut total = body + kf.tail(Side::Right, g)?;
            if cut > b {
                // ∫_{hi}^{ξ+1} −κ(ξ)/(s−ξ) ds
                total -= k0 * (1.0 / (b - xi)).ln();
            }
            Ok((c(PI * k0, 0.0) + c(0.0, -1.0) * total).exp())
        }
    }
}

/// Principal value `p.v.∫ κ(s)/(λ − s) ds` over the whole line, real `λ`.
pub fn pv_kappa(kf: &KappaFunction, lambda: f64) -> Result<f64> {
    let (a, b) = (kf.lo(), kf.hi());
    let g = |s: f64| c(1.0 / (lambda - s), 0.0);
    let tails = kf.tail(Side::Left, g)? + kf.tail(Side::Right, g)?;
    let body = if lambda > a && lambda < b {
        let k0 = kf.eval(lambda)?;
        let reg = integrate(|s| c((kf.k(s) - k0) / (lambda - s), 0.0), a, b, &kf.breaks(a, b, &[lambda]), kf.opts())?;
        reg.re + k0 * ((lambda - a) / (b - lambda)).ln()
    } else {
        integrate(|s| c(kf.k(s) / (lambda - s), 0.0), a, b, &kf.breaks(a, b, &[]), kf.opts())?.re
    };
    Ok(body + tails.re)
}

/// `Δ(λ) = exp(2i·p.v.∫ κ(s)/(λ − s) ds)`, unimodular on the real line.
pub fn big_delta(kf: &KappaFunction, lambda: f64) -> Result<Complex64> {
    Ok(c(0.0, 2.0 * pv_kappa(kf, lambda)?).exp())
}

/// `ρ̆(z) = ρ(z)/Δ(z)`.
pub fn breve_rho(kf: &KappaFunction, z: f64) -> Result<Complex64> {
    Ok(kf.rho(z) / big_delta(kf, z)?)
}
