// Pseudo-spectral evolution of the Gerjikov–Ivanov equation with a ray probe.

use dnls::pde::{evolve_snapshots, probe_csv, ray_probe, FieldState, PdeControls};
use dnls::scattering::Potential;

/// Returns the relative mass drift at the last snapshot.
pub fn run_example() -> dnls::Result<f64> {
    let ctl = PdeControls { l_box: 2048.0, n_fft: 1 << 15, ..PdeControls::default() };
    let q0 = Potential::gaussian(0.3, 801)?;
    let start = FieldState::from_potential(&q0, &ctl)?;
    let (snaps, stats) = evolve_snapshots(&start, &[5.0, 10.0, 20.0], &ctl)?;
    println!("{} steps, max edge amplitude {:.1e}", stats.steps, stats.max_edge);
    print!("{}", probe_csv(&ray_probe(&snaps, -0.25)?));
    let last = snaps.last().unwrap();
    Ok((last.mass - start.mass).abs() / start.mass)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
