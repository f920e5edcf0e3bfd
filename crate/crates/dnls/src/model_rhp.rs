//! Parabolic-cylinder model problem: `Φ(ζ)` in the four sign cases, its
//! constant jump on the real line, `β₁₂`, and the sector factors `P`.
//!
//! For `t > 0`, `Φ₁₁ ~ ζ^{iκ}e^{−iζ²/4}` and `Φ₂₂ ~ ζ^{−iκ}e^{iζ²/4}` at
//! infinity; for `t < 0` the roles of `±iκ` and `±iζ²/4` swap. Cases with
//! `sign t = sign x` use the principal branch of `arg ζ`, the mixed cases the
//! branch `(0, 2π)`, which moves the cut of `ζ^{iκ}` onto the positive axis.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cauchy::{breve_rho, delta0_eval, KappaFunction, Side};
use crate::error::{Error, Result};
use crate::specfun::{gamma_complex, pcf_d, PcfOrder, SectorTag};

pub type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity() -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut m = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

pub fn det(a: &Mat2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

pub fn inverse(a: &Mat2) -> Mat2 {
    let d = det(a);
    [[a[1][1] / d, -a[0][1] / d], [-a[1][0] / d, a[0][0] / d]]
}

/// Frobenius norm of `a − b`.
pub fn frob_diff(a: &Mat2, b: &Mat2) -> f64 {
    let mut s = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            s += (a[i][j] - b[i][j]).norm_sqr();
        }
    }
    s.sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn of(v: f64) -> Self {
        if v >= 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// One of the four regions `±t > 0`, `±x > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCase {
    pub t_sign: Sign,
    pub x_sign: Sign,
}

impl SignCase {
    pub const ALL: [SignCase; 4] = [
        SignCase { t_sign: Sign::Plus, x_sign: Sign::Plus },
        SignCase { t_sign: Sign::Plus, x_sign: Sign::Minus },
        SignCase { t_sign: Sign::Minus, x_sign: Sign::Plus },
        SignCase { t_sign: Sign::Minus, x_sign: Sign::Minus },
    ];

    pub fn new(t_sign: Sign, x_sign: Sign) -> Self {
        Self { t_sign, x_sign }
    }

    pub fn of(x: f64, t: f64) -> Self {
        Self { t_sign: Sign::of(t), x_sign: Sign::of(x) }
    }

    pub fn branch(self) -> SectorTag {
        if self.t_sign == self.x_sign {
            SectorTag::Principal
        } else {
            SectorTag::Shifted
        }
    }

    /// Sign of `ξ = −x/4t` in this case.
    pub fn xi_sign(self) -> f64 {
        -self.t_sign.value() * self.x_sign.value()
    }

    pub fn label(self) -> &'static str {
        match (self.t_sign, self.x_sign) {
            (Sign::Plus, Sign::Plus) => "(+,+)",
            (Sign::Plus, Sign::Minus) => "(+,-)",
            (Sign::Minus, Sign::Plus) => "(-,+)",
            (Sign::Minus, Sign::Minus) => "(-,-)",
        }
    }
}

/// Data of the model problem at one `(ξ, t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrozenData {
    pub xi: f64,
    pub kappa: f64,
    /// `r_ξ` (for `t > 0`) or `r̆_ξ` (for `t < 0`).
    pub r_xi: Complex64,
    pub case: SignCase,
    /// `1 − ξ|r_ξ|²`, reported but not enforced.
    pub spectral_margin: f64,
}

impl FrozenData {
    pub fn new(xi: f64, kappa: f64, r_xi: Complex64, case: SignCase) -> Self {
        Self { xi, kappa, r_xi, case, spectral_margin: 1.0 - xi * r_xi.norm_sqr() }
    }

    /// Self-consistent data for a given `κ` (sign of `ξ`) and `arg r_ξ`:
    /// `|ρ|² = (1 − e^{−2πκ})/ξ`, with `|r_ξ|` scaled per case.
    pub fn from_kappa(xi: f64, kappa: f64, arg_r: f64, case: SignCase) -> Result<Self> {
        if kappa == 0.0 {
            return Ok(Self::new(xi, 0.0, c(0.0, 0.0), case));
        }
        let rho2 = (1.0 - (-2.0 * PI * kappa).exp()) / xi;
        if !(rho2 > 0.0) {
            return Err(Error::Invalid(format!("kappa = {kappa} and xi = {xi} must share a sign")));
        }
        let scale = match (case.t_sign, case.x_sign) {
            (Sign::Plus, Sign::Minus) => (2.0 * PI * kappa).exp(),
            (Sign::Minus, Sign::Plus) => (-2.0 * PI * kappa).exp(),
            _ => 1.0,
        };
        Ok(Self::new(xi, kappa, Complex64::from_polar(rho2.sqrt() * scale, arg_r), case))
    }

    pub fn is_degenerate(&self) -> bool {
        self.kappa == 0.0 || self.r_xi == c(0.0, 0.0)
    }
}

/// Assemble the model data from the reflection coefficient.
pub fn freeze(kf: &KappaFunction, xi: f64, t: f64, case: SignCase) -> Result<FrozenData> {
    if t.abs() < 1.0 {
        return Err(Error::Invalid(format!("|t| = {} < 1", t.abs())));
    }
    if Sign::of(t) != case.t_sign {
        return Err(Error::Invalid(format!("t = {t} does not match case {}", case.label())));
    }
    if xi == 0.0 || xi.signum() != case.xi_sign() {
        return Err(Error::Invalid(format!("xi = {xi} does not match case {}", case.label())));
    }
    let kappa = kf.eval(xi)?;
    let tt = t.abs();
    let log8t = (8.0 * tt).ln();
    let r = match (case.t_sign, case.x_sign) {
        (Sign::Plus, Sign::Plus) => {
            let d0 = delta0_eval(kf, xi, Side::Left)?;
            kf.rho(xi) * d0 * d0 * c(0.0, -kappa * log8t + 4.0 * tt * xi * xi).exp()
        }
        (Sign::Plus, Sign::Minus) => {
            let d0 = delta0_eval(kf, xi, Side::Right)?;
            breve_rho(kf, xi)? * d0 * d0 * c(0.0, -kappa * log8t + 4.0 * tt * xi * xi).exp()
        }
        (Sign::Minus, Sign::Plus) => {
            let d0 = delta0_eval(kf, xi, Side::Right)?;
            kf.rho(xi) / (d0 * d0) * c(0.0, kappa * log8t - 4.0 * tt * xi * xi).exp()
        }
        (Sign::Minus, Sign::Minus) => {
            let d0 = delta0_eval(kf, xi, Side::Left)?;
            breve_rho(kf, xi)? / (d0 * d0) * c(0.0, kappa * log8t - 4.0 * tt * xi * xi).exp()
        }
    };
    Ok(FrozenData::new(xi, kappa, r, case))
}

/// Constant jump `V` with `Φ₊ = Φ₋V` on the real line.
pub fn jump_matrix(fd: &FrozenData) -> Mat2 {
    let (k, xi, r) = (fd.kappa, fd.xi, fd.r_xi);
    let rb = r.conj();
    let e = (-2.0 * PI * k).exp();
    let one = c(1.0, 0.0);
    match (fd.case.t_sign, fd.case.x_sign) {
        (Sign::Plus, Sign::Plus) => [[one - xi * r.norm_sqr(), r], [-xi * rb, one]],
        (Sign::Plus, Sign::Minus) => [[one, r], [-xi * rb * e * e, c(e, 0.0)]],
        (Sign::Minus, Sign::Plus) => [[c(e, 0.0), -r], [xi * rb / (e * e), one]],
        (Sign::Minus, Sign::Minus) => [[one, -r], [xi * rb, one - xi * r.norm_sqr()]],
    }
}

/// Closed-form `β₁₂`; zero in the degenerate case.
pub fn beta12_eval(fd: &FrozenData) -> Result<Complex64> {
    if fd.is_degenerate() {
        return Ok(c(0.0, 0.0));
    }
    let (k, xi) = (fd.kappa, fd.xi);
    let rb = fd.r_xi.conj();
    let s = (2.0 * PI).sqrt() * (-PI * k / 2.0).exp();
    let b = match (fd.case.t_sign, fd.case.x_sign) {
        (Sign::Plus, Sign::Plus) => s * c(0.0, PI / 4.0).exp() / (-xi * rb * gamma_complex(c(0.0, -k))?),
        (Sign::Plus, Sign::Minus) => {
            s * c(0.0, PI / 4.0).exp() * (2.0 * PI * k).exp() / (-xi * rb * gamma_complex(c(0.0, -k))?)
        }
        (Sign::Minus, Sign::Plus) => {
            s * c(0.0, 3.0 * PI / 4.0).exp() * (-2.0 * PI * k).exp() / (xi * rb * gamma_complex(c(0.0, k))?)
        }
        (Sign::Minus, Sign::Minus) => s * c(0.0, 3.0 * PI / 4.0).exp() / (xi * rb * gamma_complex(c(0.0, k))?),
    };
    Ok(b)
}

/// `Φ` together with the constants fixing it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSolution {
    pub frozen: FrozenData,
    pub beta12: Complex64,
    pub beta21: Complex64,
}

impl ModelSolution {
    pub fn new(frozen: FrozenData) -> Result<Self> {
        let beta12 = beta12_eval(&frozen)?;
        let beta21 = if frozen.is_degenerate() { c(0.0, 0.0) } else { frozen.kappa / beta12 };
        Ok(Self { frozen, beta12, beta21 })
    }

    /// The model's contribution `2β₁₂/√(8|t|)` to `q`.
    pub fn q_contribution(&self, t: f64) -> Complex64 {
        2.0 * self.beta12 / (8.0 * t.abs()).sqrt()
    }
}

/// Half plane on which a boundary value is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfPlane {
    Upper,
    Lower,
}

/// `Φ` in the given half plane with explicit `β₁₂` (used by the Wronskian
/// route with `β₁₂ = 1`).
fn phi_raw(fd: &FrozenData, beta12: Complex64, beta21: Complex64, zeta: Complex64, half: HalfPlane) -> Result<Mat2> {
    let k = fd.kappa;
    if fd.is_degenerate() {
        let e = c(0.0, -0.25) * zeta * zeta;
        let (d1, d2) = match fd.case.t_sign {
            Sign::Plus => (e.exp(), (-e).exp()),
            Sign::Minus => ((-e).exp(), e.exp()),
        };
        return Ok([[d1, c(0.0, 0.0)], [c(0.0, 0.0), d2]]);
    }
    let (p, pp) = match half {
        HalfPlane::Upper => (-3.0 * PI / 4.0, -PI / 4.0),
        HalfPlane::Lower => match fd.case.branch() {
            SectorTag::Principal => (PI / 4.0, 3.0 * PI / 4.0),
            SectorTag::Shifted => (-7.0 * PI / 4.0, -5.0 * PI / 4.0),
        },
    };
    let cc = (k * p).exp();
    let cp = (-k * pp).exp();
    let w = c(0.0, p).exp();
    let wp = c(0.0, pp).exp();
    let a = c(0.0, k);
    let d = |order: Complex64, arg: Complex64| -> Result<Complex64> { pcf_d(PcfOrder::new(order)?, arg) };
    // f: the D_{iκ} column pair, g: the D_{−iκ} pair
    let f_main = cc * d(a, w * zeta)?;
    let f_off = cc * w * a * d(a - 1.0, w * zeta)?;
    let g_main = cp * d(-a, wp * zeta)?;
    let g_off = cp * wp * (-a) * d(-a - 1.0, wp * zeta)?;
    Ok(match fd.case.t_sign {
        Sign::Plus => [[f_main, g_off / beta21], [f_off / beta12, g_main]],
        Sign::Minus => [[g_main, f_off / beta21], [g_off / beta12, f_main]],
    })
}

/// `Φ(ζ)` for `ζ` off the real line.
pub fn phi_eval(ms: &ModelSolution, zeta: Complex64) -> Result<Mat2> {
    if zeta.im == 0.0 {
        return Err(Error::Domain("phi_eval needs zeta off the real line; use phi_boundary".into()));
    }
    let half = if zeta.im > 0.0 { HalfPlane::Upper } else { HalfPlane::Lower };
    phi_raw(&ms.frozen, ms.beta12, ms.beta21, zeta, half)
}

/// Boundary value `Φ±(x)` on the real line.
pub fn phi_boundary(ms: &ModelSolution, x: f64, half: HalfPlane) -> Result<Mat2> {
    phi_raw(&ms.frozen, ms.beta12, ms.beta21, c(x, 0.0), half)
}

/// `‖Φ₊ − Φ₋V‖_F` at a real point.
pub fn jump_residual(ms: &ModelSolution, zeta_real: f64) -> Result<f64> {
    if zeta_real == 0.0 || zeta_real.abs() > 50.0 {
        return Err(Error::Domain(format!("zeta = {zeta_real} must satisfy 0 < |zeta| <= 50")));
    }
    let p = phi_boundary(ms, zeta_real, HalfPlane::Upper)?;
    let m = phi_boundary(ms, zeta_real, HalfPlane::Lower)?;
    Ok(frob_diff(&p, &mat_mul(&m, &jump_matrix(&ms.frozen))))
}

/// `β₁₂` from the Wronskian `Φ₁₁⁻Φ₂₁⁺ − Φ₂₁⁻Φ₁₁⁺ = V₂₁/β₁₂`, evaluated at a
/// real point.
pub fn beta12_wronskian(fd: &FrozenData, zeta_real: f64) -> Result<Complex64> {
    if fd.is_degenerate() {
        return Ok(c(0.0, 0.0));
    }
    let one = c(1.0, 0.0);
    let z = c(zeta_real, 0.0);
    let p = phi_raw(fd, one, one, z, HalfPlane::Upper)?;
    let m = phi_raw(fd, one, one, z, HalfPlane::Lower)?;
    let w0 = m[0][0] * p[1][0] - m[1][0] * p[0][0];
    Ok(w0 / jump_matrix(fd)[1][0])
}

/// Sectors between the real axis and the rays `arg ζ = ±π/4, ±3π/4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sector {
    /// `(0, π/4)`
    Omega1,
    /// `(π/4, 3π/4)`
    Omega2,
    /// `(3π/4, π)`
    Omega3,
    /// `(−π, −3π/4)`
    Omega4,
    /// `(−3π/4, −π/4)`
    Omega5,
    /// `(−π/4, 0)`
    Omega6,
}

impl Sector {
    pub fn of(zeta: Complex64) -> Self {
        let a = zeta.arg();
        let q = PI / 4.0;
        if a >= 0.0 {
            if a < q {
                Sector::Omega1
            } else if a < 3.0 * q {
                Sector::Omega2
            } else {
                Sector::Omega3
            }
        } else if a < -3.0 * q {
            Sector::Omega4
        } else if a < -q {
            Sector::Omega5
        } else {
            Sector::Omega6
        }
    }
}

fn upper_tri(u: Complex64) -> Mat2 {
    [[c(1.0, 0.0), u], [c(0.0, 0.0), c(1.0, 0.0)]]
}

fn lower_tri(l: Complex64) -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [l, c(1.0, 0.0)]]
}

/// Triangular factor `P` on a sector, chosen so that `Φ·P·E` (with `E` the
/// normalising exponential and power of `ζ`) has no jump on the real axis.
/// On each half axis `V = P₋·J·P₊⁻¹` with `J` diagonal (the jump of `E`), so
/// the factors are read off the entries of `V`. `P = I` on `Ω₂ ∪ Ω₅`.
pub fn p_matrix(fd: &FrozenData, sector: Sector) -> Mat2 {
    let v = jump_matrix(fd);
    // V = U·J·L⁻¹: 1/j = V22, u = V12·j, ℓ = −V21·j
    let form_a = || {
        let j = 1.0 / v[1][1];
        (upper_tri(v[0][1] * j), lower_tri(-v[1][0] * j))
    };
    // V = L·J·U⁻¹: j = V11, u = −V12/j, ℓ = V21/j
    let form_b = || {
        let j = v[0][0];
        (lower_tri(v[1][0] / j), upper_tri(-v[0][1] / j))
    };
    let forward = fd.case.t_sign == Sign::Plus;
    match sector {
        Sector::Omega2 | Sector::Omega5 => identity(),
        Sector::Omega1 | Sector::Omega6 => {
            let (minus, plus) = if forward { form_a() } else { form_b() };
            if sector == Sector::Omega6 {
                minus
            } else {
                plus
            }
        }
        Sector::Omega3 | Sector::Omega4 => {
            let (minus, plus) = if forward { form_b() } else { form_a() };
            if sector == Sector::Omega4 {
                minus
            } else {
                plus
            }
        }
    }
}

/// `e^{∓iζ²/4 σ₃}·ζ^{±iκσ₃}` (upper sign for `t > 0`) on the case's branch:
/// the large-`ζ` behaviour of `Φ`.
pub fn normaliser(fd: &FrozenData, zeta: Complex64) -> Mat2 {
    let s = fd.case.t_sign.value();
    let br = fd.case.branch();
    let pw = br.pow(zeta, c(0.0, s * fd.kappa));
    let ex = c(0.0, -s * 0.25) * zeta * zeta;
    let d1 = ex.exp() * pw;
    let d2 = (-ex).exp() / pw;
    [[d1, c(0.0, 0.0)], [c(0.0, 0.0), d2]]
}

/// `Φ·P·normaliser⁻¹`, which tends to `I` at infinity away from the rays.
pub fn model_solution_normalised(ms: &ModelSolution, zeta: Complex64) -> Result<Mat2> {
    let phi = phi_eval(ms, zeta)?;
    let p = p_matrix(&ms.frozen, Sector::of(zeta));
    Ok(mat_mul(&mat_mul(&phi, &p), &inverse(&normaliser(&ms.frozen, zeta))))
}

/// Coefficient `m⁰` of the expansion `Φ·P·normaliser⁻¹ = I + m⁰/ζ + O(ζ⁻²)`:
/// `[[0, −iβ₁₂], [iβ₂₁, 0]]` for `t > 0`, opposite signs for `t < 0`.
pub fn m0_matrix(ms: &ModelSolution) -> Mat2 {
    let s = ms.frozen.case.t_sign.value();
    let i = c(0.0, s);
    [[c(0.0, 0.0), -i * ms.beta12], [i * ms.beta21, c(0.0, 0.0)]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_case_is_diagonal() {
        let fd = FrozenData::new(-0.5, 0.0, c(0.0, 0.0), SignCase::ALL[0]);
        let ms = ModelSolution::new(fd).unwrap();
        assert_eq!(ms.beta12, c(0.0, 0.0));
        assert_eq!(jump_residual(&ms, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn sectors() {
        assert_eq!(Sector::of(c(1.0, 0.5)), Sector::Omega1);
        assert_eq!(Sector::of(c(0.0, 1.0)), Sector::Omega2);
        assert_eq!(Sector::of(c(-1.0, 0.1)), Sector::Omega3);
        assert_eq!(Sector::of(c(-1.0, -0.1)), Sector::Omega4);
        assert_eq!(Sector::of(c(0.0, -1.0)), Sector::Omega5);
        assert_eq!(Sector::of(c(1.0, -0.1)), Sector::Omega6);
    }
}
