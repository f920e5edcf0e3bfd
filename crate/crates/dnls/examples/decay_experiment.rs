// A short end-to-end experiment: scatter, predict, evolve and fit the decay
// of `|q − q_as|` along one ray. The full-length run is `dnls verify`.

use dnls::harness::{run_pipeline, ExperimentConfig, TimeLadder};
use dnls::pde::PdeControls;

/// Returns the fitted decay slope.
pub fn run_example() -> dnls::Result<f64> {
    let cfg = ExperimentConfig {
        rays: vec![-0.25],
        times: TimeLadder { t0: 10.0, count: 3 },
        pde: PdeControls { l_box: 2048.0, n_fft: 1 << 15, ..PdeControls::default() },
        ..ExperimentConfig::default()
    };
    let report = run_pipeline(&cfg);
    if let Some(f) = &report.failure {
        return Err(dnls::Error::Invalid(format!("stage {}: {}", f.stage, f.message)));
    }
    let ray = &report.rays[0];
    println!("{:>6} {:>12} {:>10} {:>12}", "t", "|q - q_as|", "|q|sqrt(t)", "phase res");
    for r in &ray.rows {
        println!("{:>6} {:>12.3e} {:>10.6} {:>12.2e}", r.t, r.err, r.amp_scaled, r.phase_residual);
    }
    let fit = ray.fit.as_ref().ok_or_else(|| dnls::Error::Invalid("no decay fit".into()))?;
    println!("|alpha| = {:.6}; slope {:.3}, r^2 {:.5}", ray.profile.alpha_mod, fit.slope, fit.r2);
    Ok(fit.slope)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
