// The scalar Riemann–Hilbert functions built from `κ`: the jump of `δ` across
// its cut, its local model at the stationary point and the unimodular `Δ`.

use dnls::cauchy::{big_delta, delta0_eval, delta_eval, KappaFunction, Side};
use dnls::scattering::{reflection_map, uniform_grid, Potential, ScatteringConfig};
use dnls::Complex64;

/// Returns the jump residual of `δ_ℓ` at distance `1e-4` from the cut.
pub fn run_example() -> dnls::Result<f64> {
    let q = Potential::gaussian(0.3, 801)?;
    let rc = reflection_map(&q, &uniform_grid(8.0, 257), &ScatteringConfig::default())?;
    let kf = KappaFunction::new(&rc)?;
    let (xi, s0, eps) = (0.5, -0.7, 1e-4);
    let up = delta_eval(&kf, xi, Complex64::new(s0, eps), Side::Left)?;
    let dn = delta_eval(&kf, xi, Complex64::new(s0, -eps), Side::Left)?;
    let jump = (up - dn * (1.0 - s0 * kf.rho(s0).norm_sqr())).norm();
    println!("kappa(xi) = {:.8}", kf.eval(xi)?);
    println!("delta_+ = {up:.8}, delta_- = {dn:.8}, jump residual {jump:.1e}");
    println!("delta_0l = {:.8}", delta0_eval(&kf, xi, Side::Left)?);
    for lam in [-1.0, 0.5, 2.0] {
        let d = big_delta(&kf, lam)?;
        println!("Delta({lam:>4}) = {d:.8}  |Delta| - 1 = {:.1e}", d.norm() - 1.0);
    }
    Ok(jump)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
