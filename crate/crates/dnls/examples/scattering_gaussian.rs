// Direct scattering of a small Gaussian: transition coefficients, the
// reflection coefficient and the soliton-free diagnostics.

use dnls::scattering::{jost_transition, reflection_map, soliton_free_report, uniform_grid, zeta_of, Potential, ScatteringConfig};

/// Returns `c_margin`.
pub fn run_example() -> dnls::Result<f64> {
    let cfg = ScatteringConfig::default();
    let q = Potential::gaussian(0.3, 801)?;
    let s = jost_transition(&q, zeta_of(1.0), &cfg)?;
    println!("a(1) = {:.12}  b(1) = {:.12}  det residual {:.1e}", s.a, s.b, s.det_residual());
    let rc = reflection_map(&q, &uniform_grid(8.0, 257), &cfg)?;
    for z in [-4.0, -1.0, 0.0, 1.0, 4.0] {
        let i = rc.z_grid.iter().position(|&g| g == z).unwrap();
        println!("rho({z:>4}) = {:.8}", rc.rho[i]);
    }
    let rep = soliton_free_report(&rc, &q, &cfg)?;
    println!("c_margin {:.10}  winding {}  soliton suspect {}", rep.c_margin, rep.winding, rep.soliton_suspect);
    Ok(rc.c_margin)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
