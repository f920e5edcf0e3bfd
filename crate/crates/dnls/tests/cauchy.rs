use std::f64::consts::PI;
use std::sync::OnceLock;

use dnls::cauchy::*;
use dnls::scattering::{reflection_map, uniform_grid, Potential, ReflectionCoefficient, ScatteringConfig};
use dnls::Complex64 as C;
use rand::{Rng, SeedableRng};

fn kf() -> &'static KappaFunction {
    static K: OnceLock<KappaFunction> = OnceLock::new();
    K.get_or_init(|| {
        let q = Potential::gaussian(0.3, 801).unwrap();
        let rc = reflection_map(&q, &uniform_grid(8.0, 257), &ScatteringConfig::default()).unwrap();
        KappaFunction::new(&rc).unwrap()
    })
}

fn i() -> C {
    C::new(0.0, 1.0)
}

#[test]
fn kappa_is_the_formula_at_nodes() {
    let k = kf();
    for (j, &s) in k.nodes().iter().enumerate() {
        let want = kappa_formula(s, k.rho(s).norm_sqr());
        assert!((k.eval(s).unwrap() - want).abs() <= 1e-12);
        assert!((k.values[j] - want).abs() <= 1e-12);
    }
}

#[test]
fn kappa_of_zero_data_vanishes() {
    let rc = ReflectionCoefficient::zero(8.0, 33);
    assert_eq!(kappa_eval(&rc, 0.7).unwrap(), 0.0);
}

#[test]
fn non_positive_margin_is_rejected() {
    let g = uniform_grid(2.0, 9);
    let rho = g.iter().map(|_| C::new(1.0, 0.0)).collect();
    assert!(KappaFunction::new(&ReflectionCoefficient::new(g, rho).unwrap()).is_err());
}

fn jump_residual(xi: f64, s0: f64, eps: f64, side: Side) -> f64 {
    let k = kf();
    let up = delta_eval(k, xi, C::new(s0, eps), side).unwrap();
    let dn = delta_eval(k, xi, C::new(s0, -eps), side).unwrap();
    let f = 1.0 - s0 * k.rho(s0).norm_sqr();
    match side {
        Side::Left => (up - dn * f).norm(),
        Side::Right => (up * f - dn).norm(),
    }
}

#[test]
fn left_jump_shrinks_linearly() {
    for (xi, s0) in [(0.5, -0.7), (0.5, 0.2), (-1.0, -2.5)] {
        let r4 = jump_residual(xi, s0, 1e-4, Side::Left);
        let r5 = jump_residual(xi, s0, 1e-5, Side::Left);
        assert!(r4 <= 1e-4, "xi {xi} s0 {s0}: {r4:e}");
        assert!(r5 < r4 / 5.0, "not shrinking: {r4:e} -> {r5:e}");
    }
}

#[test]
fn right_jump_mirrors_the_left() {
    for (xi, s0) in [(0.5, 1.3), (-1.0, 0.4)] {
        let r4 = jump_residual(xi, s0, 1e-4, Side::Right);
        let r5 = jump_residual(xi, s0, 1e-5, Side::Right);
        assert!(r4 <= 1e-4, "xi {xi} s0 {s0}: {r4:e}");
        assert!(r5 < r4 / 5.0);
    }
}

// |δ| = exp(∓ half-line Poisson integral of κ), so e^{∓π‖κ‖∞} bound it and
// are approached next to the cut.
#[test]
fn modulus_bounds_on_random_points() {
    let k = kf();
    let (lo, hi) = ((-PI * k.sup_norm).exp(), (PI * k.sup_norm).exp());
    let mut rng = rand::rngs::StdRng::seed_from_u64(11);
    for _ in 0..200 {
        let xi = rng.gen_range(-4.0..4.0);
        let z = C::new(rng.gen_range(-6.0..6.0), rng.gen_range(0.01..4.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 });
        for side in [Side::Left, Side::Right] {
            let m = delta_eval(k, xi, z, side).unwrap().norm();
            assert!(m >= lo * (1.0 - 1e-12) && m <= hi * (1.0 + 1e-12), "xi {xi} z {z} |delta| {m}");
        }
    }
}

#[test]
fn modulus_bound_is_sharp_at_the_cut() {
    let k = kf();
    let x = 0.578;
    let m = delta_eval(k, -3.0, C::new(x, 1e-3), Side::Right).unwrap().norm();
    assert!((m.ln() - PI * k.eval(x).unwrap()).abs() < 1e-2 * PI * k.sup_norm);
}

#[test]
fn conjugation_symmetry() {
    let k = kf();
    for z in [C::new(0.3, 0.5), C::new(-2.0, 1.0), C::new(4.0, -0.2)] {
        for side in [Side::Left, Side::Right] {
            let p = delta_eval(k, 0.25, z, side).unwrap() * delta_eval(k, 0.25, z.conj(), side).unwrap().conj();
            assert!((p - 1.0).norm() <= 1e-10);
        }
    }
}

#[test]
fn large_z_expansion() {
    let k = kf();
    let xi = 0.5;
    let z = C::new(0.0, 50.0);
    let d = delta_eval(k, xi, z, Side::Left).unwrap();
    let one_term = 1.0 - i() / z * k.mass(xi, Side::Left).unwrap();
    // the remainder is O(1/z²)
    assert!((d - one_term).norm() <= 10.0 / z.norm_sqr(), "{:e}", (d - one_term).norm());
    assert!((d - one_term).norm() < (d - 1.0).norm() / 10.0);
}

#[test]
fn delta0_modulus() {
    let k = kf();
    for xi in [-2.0, -0.25, 0.5, 3.0] {
        assert!((delta0_eval(k, xi, Side::Left).unwrap().norm() - 1.0).abs() <= 1e-12);
        // the right constant absorbs e^{πκ} from arg(z − ξ) ∈ (0, 2π)
        let r = delta0_eval(k, xi, Side::Right).unwrap().norm();
        assert!((r - (PI * k.eval(xi).unwrap()).exp()).abs() <= 1e-12);
    }
}

#[test]
fn delta_approaches_its_local_model() {
    let k = kf();
    let xi = 0.5;
    let kappa = k.eval(xi).unwrap();
    let d0 = delta0_eval(k, xi, Side::Left).unwrap();
    let err = |r: f64| {
        let w = C::new(0.0, r);
        (delta_eval(k, xi, xi + w, Side::Left).unwrap() - d0 * (i() * kappa * w.ln()).exp()).norm()
    };
    let (e2, e3) = (err(1e-2), err(1e-3));
    let order = (e2 / e3).log10();
    assert!(order >= 0.9, "order {order} from {e2:e}, {e3:e}");
    let c_fit = e2 / (1e-2 * (1e-2f64).ln().abs());
    assert!(e3 <= 1.5 * c_fit * 1e-3 * (1e-3f64).ln().abs());
}

#[test]
fn big_delta_is_unimodular_and_keeps_modulus() {
    let k = kf();
    for z in [-7.5, -1.0, -0.013, 0.0, 0.4, 2.0, 7.9] {
        assert!((big_delta(k, z).unwrap().norm() - 1.0).abs() <= 1e-9);
        let rb = breve_rho(k, z).unwrap();
        assert!((rb.norm() - k.rho(z).norm()).abs() <= 1e-9);
    }
}

#[test]
fn near_cut_rejected() {
    assert!(delta_eval(kf(), 0.5, C::new(0.0, 1e-8), Side::Left).is_err());
    assert!(delta_eval(kf(), 9.0, C::new(0.0, 1.0), Side::Left).is_err());
}
