// Parabolic-cylinder functions of imaginary order and the identities they obey.

use dnls::specfun::{gamma_complex, pcf_d, pcf_recurrence_residual, pcf_wronskian, PcfOrder};
use dnls::Complex64;

/// Returns the worst relative Wronskian error over the sampled orders.
pub fn run_example() -> dnls::Result<f64> {
    println!("|Gamma(i)| = {:.10}", gamma_complex(Complex64::new(0.0, 1.0))?.norm());
    let z = Complex64::new(1.5, -0.5);
    let mut worst = 0.0f64;
    for kappa in [0.01, 0.1, 0.5, 1.0] {
        let a = PcfOrder::imaginary(kappa)?;
        let exact = (2.0 * std::f64::consts::PI).sqrt() / gamma_complex(-a.a)?;
        let w = pcf_wronskian(a, z)?;
        let rel = (w - exact).norm() / exact.norm();
        worst = worst.max(rel);
        println!(
            "kappa {kappa:<5} D(z) = {:.6}  W rel err {rel:.1e}  recurrence {:.1e}",
            pcf_d(a, z)?,
            pcf_recurrence_residual(a, z)?
        );
    }
    Ok(worst)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
