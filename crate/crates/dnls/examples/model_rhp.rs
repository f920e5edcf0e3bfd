// The parabolic-cylinder model problem in each of the four sign regions:
// jump residuals and the two routes to `β₁₂`.

use dnls::model_rhp::{beta12_eval, beta12_wronskian, det, jump_residual, phi_eval, FrozenData, ModelSolution, SignCase};
use dnls::Complex64;

/// Returns the worst jump residual over cases and sample points.
pub fn run_example() -> dnls::Result<f64> {
    let mut worst = 0.0f64;
    for case in SignCase::ALL {
        let xi = case.xi_sign();
        // κ carries the sign of ξ so that |β₁₂|² = κ/ξ is positive
        let fd = FrozenData::from_kappa(xi, 0.3 * xi.signum(), 0.4, case)?;
        let ms = ModelSolution::new(fd)?;
        let b = beta12_eval(&fd)?;
        let bw = beta12_wronskian(&fd, 1.0)?;
        for z in [-5.0, -1.0, 1.0, 5.0] {
            worst = worst.max(jump_residual(&ms, z)?);
        }
        let d = det(&phi_eval(&ms, Complex64::new(0.7, 0.9))?);
        println!(
            "{:<8} beta12 {b:.8}  routes differ by {:.1e}  |beta12|^2 - kappa/xi {:.1e}  det Phi - 1 {:.1e}",
            case.label(),
            (b - bw).norm(),
            b.norm_sqr() - fd.kappa / fd.xi,
            (d - 1.0).norm()
        );
    }
    println!("worst jump residual {worst:.1e}");
    Ok(worst)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
