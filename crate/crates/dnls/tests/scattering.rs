use std::sync::OnceLock;

use dnls::scattering::*;
use dnls::Complex64 as C;
use proptest::prelude::*;

fn gauss() -> &'static Potential {
    static Q: OnceLock<Potential> = OnceLock::new();
    Q.get_or_init(|| Potential::gaussian(0.3, 801).unwrap())
}

fn rc_257() -> &'static ReflectionCoefficient {
    static R: OnceLock<ReflectionCoefficient> = OnceLock::new();
    R.get_or_init(|| reflection_map(gauss(), &uniform_grid(8.0, 257), &ScatteringConfig::default()).unwrap())
}

fn cfg() -> ScatteringConfig {
    ScatteringConfig::default()
}

#[test]
fn free_equation_has_trivial_data() {
    let q = Potential::gaussian(0.0, 101).unwrap();
    for zeta in [C::new(1.0, 0.0), C::new(0.0, 0.7), C::new(-2.0, 0.0)] {
        let s = jost_transition(&q, zeta, &cfg()).unwrap();
        assert!((s.a - 1.0).norm() < 1e-14 && (s.a_breve - 1.0).norm() < 1e-14);
        assert!(s.b.norm() < 1e-14 && s.b_breve.norm() < 1e-14);
    }
    let rc = reflection_map(&q, &uniform_grid(8.0, 33), &cfg()).unwrap();
    assert!(rc.rho.iter().all(|r| r.norm() < 1e-14));
    assert_eq!(rc.c_margin, 1.0);
}

#[test]
fn frozen_transition_at_one() {
    // oracle: the same system integrated with scipy DOP853 at rtol 1e-13
    let s = jost_transition(gauss(), C::new(1.0, 0.0), &cfg()).unwrap();
    assert!((s.a - C::new(1.0185398781589643, -0.014775958829178669)).norm() < 1e-8, "a = {}", s.a);
    assert!((s.b - C::new(-0.19401497972936332, 0.0)).norm() < 1e-8, "b = {}", s.b);
    assert!(s.det_residual() <= 1e-8);
}

#[test]
fn frozen_margin() {
    assert!((rc_257().c_margin - 0.9215265823012484).abs() < 1e-8);
}

#[test]
fn determinant_and_symmetry_on_257_nodes() {
    for &z in &uniform_grid(8.0, 257) {
        if z == 0.0 {
            continue;
        }
        let zeta = zeta_of(z);
        let s = jost_transition(gauss(), zeta, &cfg()).unwrap();
        assert!(s.det_residual() <= 1e-8);
        // ă(ζ) = conj a(conj ζ), b̆(ζ) = conj b(conj ζ); conj ζ = ±ζ on the contour
        let m = jost_transition(gauss(), zeta.conj(), &cfg()).unwrap();
        assert!((s.a_breve - m.a.conj()).norm() <= 1e-9, "z = {z}");
        assert!((s.b_breve - m.b.conj()).norm() <= 1e-9, "z = {z}");
    }
}

#[test]
fn parity_in_zeta() {
    for zeta in [C::new(1.3, 0.0), C::new(0.0, 0.8)] {
        let p = jost_transition(gauss(), zeta, &cfg()).unwrap();
        let m = jost_transition(gauss(), -zeta, &cfg()).unwrap();
        assert!((p.a - m.a).norm() <= 1e-9);
        assert!((p.b + m.b).norm() <= 1e-9);
    }
}

#[test]
fn reflection_identity() {
    let rc = rc_257();
    for (&z, r) in rc.z_grid.iter().zip(&rc.rho) {
        if z == 0.0 {
            continue;
        }
        let s = jost_transition(gauss(), zeta_of(z), &cfg()).unwrap();
        let lhs = s.a * s.a_breve;
        let rhs = 1.0 / (1.0 - z * r.norm_sqr());
        assert!((lhs - rhs).norm() <= 1e-8, "z = {z}");
    }
}

#[test]
fn rho_decays_at_the_grid_ends() {
    let rc = rc_257();
    let n = rc.rho.len();
    for i in [0, n - 1] {
        assert!(rc.z_grid[i].powi(2) * rc.rho[i].norm() < 1.0);
    }
}

#[test]
fn datum_refinement_barely_moves_rho() {
    let grid = uniform_grid(8.0, 33);
    let fine = Potential::gaussian(0.3, 1601).unwrap();
    let a = reflection_map(gauss(), &grid, &cfg()).unwrap();
    let b = reflection_map(&fine, &grid, &cfg()).unwrap();
    let d = a.rho.iter().zip(&b.rho).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(d <= 1e-7, "change {d:e}");
}

#[test]
fn small_gaussian_is_soliton_free() {
    let r = soliton_free_report(rc_257(), gauss(), &cfg()).unwrap();
    assert_eq!(r.winding, 0);
    assert!(!r.soliton_suspect && !r.inconclusive);
    let zero = Potential::gaussian(0.0, 101).unwrap();
    let r0 = soliton_free_report(&ReflectionCoefficient::zero(8.0, 33), &zero, &cfg()).unwrap();
    assert_eq!((r0.winding, r0.c_margin), (0, 1.0));
}

#[test]
fn large_gaussian_is_flagged_not_fatal() {
    let q = Potential::gaussian(3.0, 801).unwrap();
    let grid = uniform_grid(8.0, 65);
    match reflection_map(&q, &grid, &cfg()) {
        Ok(rc) => {
            // whichever way the diagnostics land, they must come back as data
            let _ = soliton_free_report(&rc, &q, &cfg());
        }
        Err(e) => panic!("large datum should scatter, got {e}"),
    }
}

#[test]
fn off_contour_rejected() {
    assert!(jost_transition(gauss(), C::new(1.0, 1.0), &cfg()).is_err());
}

#[test]
fn json_round_trip() {
    let rc = rc_257();
    let back = ReflectionCoefficient::from_json(&rc.to_json().unwrap()).unwrap();
    assert_eq!(back.rho, rc.rho);
    let q = Potential::from_json(&gauss().to_json().unwrap()).unwrap();
    assert_eq!(q.samples, gauss().samples);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn determinant_relation_holds(amp in 0.0f64..0.5, z in -16.0f64..16.0) {
        prop_assume!(z.abs() > 1e-3);
        let q = Potential::gaussian(amp, 401).unwrap();
        let s = jost_transition(&q, zeta_of(z), &cfg()).unwrap();
        prop_assert!(s.det_residual() <= 1e-8);
    }
}
