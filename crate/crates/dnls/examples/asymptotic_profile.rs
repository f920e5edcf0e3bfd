// Predicted long-time profiles for the Gerjikov–Ivanov field `q` and the
// DNLS field `u` from the reflection coefficient of a Gaussian.

use dnls::asymptotics::{plancherel_check, q_asymptotic, u_asymptotic, AsymptoticConfig, AsymptoticProfile};
use dnls::cauchy::KappaFunction;
use dnls::model_rhp::SignCase;
use dnls::scattering::{reflection_map, uniform_grid, Potential, ScatteringConfig};

/// Returns `|q_as(1e-3, 100) − q_as(−1e-3, 100)| / |q_as(1e-3, 100)|`.
pub fn run_example() -> dnls::Result<f64> {
    let q0 = Potential::gaussian(0.3, 801)?;
    let rc = reflection_map(&q0, &uniform_grid(8.0, 257), &ScatteringConfig::default())?;
    let kf = KappaFunction::new(&rc)?;
    let cfg = AsymptoticConfig::default();
    println!("weak Plancherel residual {:.1e}", plancherel_check(&q0, &kf)?);
    for xi in [-0.5, -0.25] {
        let p = AsymptoticProfile::new(&kf, xi, SignCase::of(1.0, 1.0))?;
        println!("xi {xi}: |alpha| {:.8}  arg alpha {:.8}  kappa {:.8}", p.alpha_mod, p.alpha_arg, p.kappa);
    }
    for (x, t) in [(40.0, 40.0), (-80.0, 40.0), (10.0, -10.0)] {
        println!("q_as({x}, {t}) = {:.8}  u_as = {:.8}", q_asymptotic(&kf, x, t, &cfg)?, u_asymptotic(&kf, x, t, &cfg)?);
    }
    let plus = q_asymptotic(&kf, 1e-3, 100.0, &cfg)?;
    let minus = q_asymptotic(&kf, -1e-3, 100.0, &cfg)?;
    let jump = (plus - minus).norm() / plus.norm();
    println!("relative jump across x = 0 at t = 100: {jump:.1e}");
    Ok(jump)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
