use dnls::cauchy::{breve_rho, KappaFunction};
use dnls::model_rhp::*;
use dnls::scattering::{reflection_map, uniform_grid, Potential, ScatteringConfig};
use dnls::Complex64 as C;
use proptest::prelude::*;

const ZETAS: [f64; 10] = [-10.0, -5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0, 10.0];

fn solution(case: SignCase, kappa_abs: f64, arg_r: f64) -> ModelSolution {
    let s = case.xi_sign();
    let fd = FrozenData::from_kappa(0.7 * s, kappa_abs * s, arg_r, case).unwrap();
    ModelSolution::new(fd).unwrap()
}

fn gaussian_kappa() -> KappaFunction {
    let q = Potential::gaussian(0.3, 801).unwrap();
    let cfg = ScatteringConfig::default();
    let rc = reflection_map(&q, &uniform_grid(8.0, 129), &cfg).unwrap();
    KappaFunction::new(&rc).unwrap()
}

#[test]
fn jump_relation_all_cases() {
    for k in [0.05, 0.3, 1.0] {
        for case in SignCase::ALL {
            let ms = solution(case, k, 0.37);
            for z in ZETAS {
                let r = jump_residual(&ms, z).unwrap();
                assert!(r <= 1e-8, "{} kappa {k} zeta {z}: {r:e}", case.label());
            }
        }
    }
}

#[test]
fn jump_relation_plus_plus_example() {
    let fd = FrozenData::from_kappa(-1.0, -0.3, 1.1, SignCase::ALL[0]).unwrap();
    let ms = ModelSolution::new(fd).unwrap();
    for z in [-5.0, -1.0, 1.0, 5.0] {
        assert!(jump_residual(&ms, z).unwrap() <= 1e-8);
    }
}

#[test]
fn beta12_modulus_and_product() {
    for k in [0.05, 0.3, 1.0] {
        for case in SignCase::ALL {
            let ms = solution(case, k, -2.0);
            let fd = ms.frozen;
            assert!((ms.beta12.norm_sqr() - fd.kappa / fd.xi).abs() <= 1e-10);
            assert!((ms.beta12 * ms.beta21 - fd.kappa).norm() <= 1e-10);
        }
    }
}

#[test]
fn beta12_two_routes_agree() {
    for k in [0.05, 0.3, 1.0] {
        for case in SignCase::ALL {
            let ms = solution(case, k, 0.9);
            for z in [-1.7, 0.8, 3.0] {
                let w = beta12_wronskian(&ms.frozen, z).unwrap();
                assert!((w - ms.beta12).norm() <= 1e-7, "{} {k} {z}", case.label());
            }
        }
    }
}

#[test]
fn beta12_example_modulus() {
    // |rho| = 0.5 at xi = 1, so kappa = -ln(0.75)/(2 pi) and |beta12| = sqrt(kappa)
    let kappa = -(0.75f64).ln() / (2.0 * std::f64::consts::PI);
    let case = SignCase::new(Sign::Plus, Sign::Minus);
    let r = C::from_polar(0.5 * (2.0 * std::f64::consts::PI * kappa).exp(), 0.2);
    let b = beta12_eval(&FrozenData::new(1.0, kappa, r, case)).unwrap();
    assert!((b.norm() - 0.213_976_690_014_640_84).abs() < 1e-12);
}

#[test]
fn determinant_is_one() {
    let pts = [C::new(1.0, 1.0), C::new(-2.0, 0.3), C::new(0.4, -3.0), C::new(-6.0, -0.5), C::new(0.0, 8.0)];
    for k in [0.05, 0.3, 1.0] {
        for case in SignCase::ALL {
            let ms = solution(case, k, 0.1);
            for z in pts {
                let d = det(&phi_eval(&ms, z).unwrap());
                assert!((d - 1.0).norm() <= 1e-8, "{} {k} {z}", case.label());
            }
        }
    }
}

#[test]
fn degenerate_model() {
    for case in SignCase::ALL {
        let fd = FrozenData::new(0.5 * case.xi_sign(), 0.0, C::new(0.0, 0.0), case);
        let ms = ModelSolution::new(fd).unwrap();
        assert_eq!(ms.beta12, C::new(0.0, 0.0));
        assert_eq!(jump_residual(&ms, 2.0).unwrap(), 0.0);
        assert_eq!(p_matrix(&fd, Sector::Omega1), identity());
        let n = model_solution_normalised(&ms, C::new(0.3, 2.0)).unwrap();
        assert!(frob_diff(&n, &identity()) < 1e-14);
    }
}

#[test]
fn normalised_solution_has_no_real_jump() {
    for case in SignCase::ALL {
        let ms = solution(case, 0.3, 0.6);
        for x in [-4.0, -0.7, 0.9, 3.5] {
            let up = model_solution_normalised(&ms, C::new(x, 1e-9)).unwrap();
            let dn = model_solution_normalised(&ms, C::new(x, -1e-9)).unwrap();
            assert!(frob_diff(&up, &dn) < 1e-7, "{} {x}", case.label());
        }
    }
}

#[test]
fn normalised_solution_at_infinity() {
    for k in [0.05, 0.3, 1.0] {
        for case in SignCase::ALL {
            let ms = solution(case, k, 0.6);
            let z = C::new(0.0, 40.0);
            let n = model_solution_normalised(&ms, z).unwrap();
            let m0 = m0_matrix(&ms);
            let mut approx = identity();
            for i in 0..2 {
                for j in 0..2 {
                    approx[i][j] += m0[i][j] / z;
                }
            }
            assert!(frob_diff(&n, &approx) <= 1e-3, "{} {k}", case.label());
        }
    }
}

#[test]
fn p_matrix_entries() {
    let ms = solution(SignCase::ALL[0], 0.3, 0.6);
    let fd = ms.frozen;
    let rb = fd.r_xi.conj();
    assert_eq!(p_matrix(&fd, Sector::Omega2), identity());
    assert_eq!(p_matrix(&fd, Sector::Omega5), identity());
    assert!((p_matrix(&fd, Sector::Omega1)[1][0] - fd.xi * rb).norm() < 1e-14);
    let ll = -fd.xi * rb / (1.0 - fd.xi * fd.r_xi.norm_sqr());
    assert!((p_matrix(&fd, Sector::Omega4)[1][0] - ll).norm() < 1e-14);
}

#[test]
fn jump_residual_rejects_bad_points() {
    let ms = solution(SignCase::ALL[1], 0.3, 0.0);
    assert!(jump_residual(&ms, 0.0).is_err());
    assert!(jump_residual(&ms, 51.0).is_err());
    assert!(phi_eval(&ms, C::new(1.0, 0.0)).is_err());
}

#[test]
fn freeze_moduli_and_phase() {
    let kf = gaussian_kappa();
    let xi = -0.25;
    let pp = freeze(&kf, xi, 10.0, SignCase::ALL[0]).unwrap();
    assert!((pp.r_xi.norm() - kf.rho(xi).norm()).abs() < 1e-12);
    let mp = freeze(&kf, xi, -10.0, SignCase::new(Sign::Minus, Sign::Plus));
    assert!(mp.is_err(), "xi < 0 is not the (-,+) region");
    let k = pp.kappa;
    let mp = freeze(&kf, -xi, -10.0, SignCase::new(Sign::Minus, Sign::Plus)).unwrap();
    let k2 = mp.kappa;
    assert!((mp.r_xi.norm() - kf.rho(-xi).norm() * (-2.0 * std::f64::consts::PI * k2).exp()).abs() < 1e-9);
    let pm = freeze(&kf, -xi, 10.0, SignCase::new(Sign::Plus, Sign::Minus)).unwrap();
    let rb = breve_rho(&kf, -xi).unwrap();
    assert!((pm.r_xi.norm() - rb.norm() * (2.0 * std::f64::consts::PI * k2).exp()).abs() < 1e-9);

    // arg beta12 advances by 4 dt xi^2 - kappa log(t2/t1) in case (+,+)
    let (t1, t2) = (10.0, 10.3);
    let b1 = ModelSolution::new(freeze(&kf, xi, t1, SignCase::ALL[0]).unwrap()).unwrap().beta12;
    let b2 = ModelSolution::new(freeze(&kf, xi, t2, SignCase::ALL[0]).unwrap()).unwrap().beta12;
    let expect = 4.0 * (t2 - t1) * xi * xi - k * (t2 / t1).ln();
    assert!(((b2 / b1).arg() - expect).abs() < 1e-9);
    assert!(freeze(&kf, xi, 0.5, SignCase::ALL[0]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn beta_modulus_any_phase(k in 0.01f64..1.5, arg in -3.1f64..3.1, which in 0usize..4) {
        let case = SignCase::ALL[which];
        let ms = solution(case, k, arg);
        prop_assert!((ms.beta12.norm_sqr() - ms.frozen.kappa / ms.frozen.xi).abs() <= 1e-10);
        prop_assert!(jump_residual(&ms, 1.5).unwrap() <= 1e-8);
    }
}
