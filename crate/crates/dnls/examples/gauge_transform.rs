// Moving between the DNLS field `u` and the Gerjikov–Ivanov field `q`.

use dnls::pde::{cumulative_mass, gauge_forward, gauge_inverse, FieldState};
use dnls::Complex64;

/// Returns the round-trip error `max|gauge_inverse(gauge_forward(u)) − u|`.
pub fn run_example() -> dnls::Result<f64> {
    let (l, n) = (80.0, 4096);
    let u: Vec<Complex64> = (0..n)
        .map(|j| {
            let x = -l / 2.0 + j as f64 * l / n as f64;
            Complex64::from_polar(0.3 * (-x * x).exp(), 0.5 * x)
        })
        .collect();
    let u = FieldState::new(l, u, 0.0);
    let q = gauge_forward(&u);
    let back = gauge_inverse(&q);
    let err = back.field.iter().zip(&u.field).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    let modulus = q.field.iter().zip(&u.field).map(|(a, b)| (a.norm() - b.norm()).abs()).fold(0.0, f64::max);
    println!("mass {:.12}  max ||q| - |u|| {modulus:.1e}  round trip {err:.1e}", u.mass);
    // the phase accumulated across the box equals the mass
    println!("cumulative mass at the right edge {:.12}", cumulative_mass(&u)[n - 1]);
    Ok(err)
}

#[allow(dead_code)]
fn main() {
    run_example().unwrap();
}
