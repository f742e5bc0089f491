use super::*;
use crate::geometry::generators::left_derivative;
use crate::test_support::{random_rotation, random_state};
use crate::wavefunction::Propagator;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_gamma(rng: &mut impl Rng, radius: f64) -> Vector3<f64> {
    let v = Vector3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    v.normalize() * radius
}

#[test]
fn f_curly_values() {
    assert_eq!(f_curly(0.0).unwrap(), 1.0);
    assert!((f_curly(PI / 2.0).unwrap() - PI / 4.0).abs() < 1e-15);
    assert!(f_curly(PI).unwrap().abs() < 1e-15);
    let (below, above) = (f_curly(1e-4 * (1.0 - 1e-12)).unwrap(), f_curly(1e-4).unwrap());
    assert!((below - above).abs() < 1e-15);
    assert!(matches!(f_curly(TAU), Err(Error::Domain(_))));
    assert!(f_curly(-0.1).is_err());
}

#[test]
fn chart_generators_match_group_translations() {
    // h(γ⃗) = F(e^{γ⃗·ξ⃗}); Z^γ and Y^γ must reproduce the right and left
    // derivatives of F at e^{γ⃗·ξ⃗}.
    let f = |q: &Rotation| {
        let m = q.matrix();
        m[(0, 1)] + 0.3 * m[(2, 2)] * m[(1, 0)] - 0.7 * m[(2, 0)]
    };
    let h = |g: &Vector3<f64>| f(&Rotation::exp(g));
    let ops = GammaChartOperators::default();
    let fd = FiniteDifference::fourth_order(1e-4);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for radius in [0.0, 1e-3, 0.4, 1.5, 2.7] {
        let g = random_gamma(&mut rng, radius);
        let (y, z) = ops.y_and_z(h, &g).unwrap();
        let q = Rotation::exp(&g);
        for i in 0..3 {
            assert!((z[i] - right_derivative(f, i, &q, &fd)).abs() < 1e-8, "Z{i} at {radius}");
            assert!((y[i] - left_derivative(f, i, &q, &fd)).abs() < 1e-8, "Y{i} at {radius}");
        }
        let lam = ops.lambda(h, &g).unwrap();
        let grad = ops.partial(h, &g);
        let cross = g.cross(&Vector3::from(grad));
        for i in 0..3 {
            assert!((y[i] - z[i] - lam[i]).abs() < 1e-12);
            assert!((lam[i] - cross[i]).abs() < 1e-10);
        }
    }
    assert!(ops.y_and_z(h, &Vector3::new(0.0, 0.0, 3.2)).is_err());
}

#[test]
fn lambda_intertwines_translates() {
    let ops = GammaChartOperators::default();
    let fd = FiniteDifference::nested();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for seed in 0..3 {
        let psi = random_state(0.9, 2, 60 + seed);
        let r = random_rotation(&mut rng);
        let radius = rng.gen_range(0.2..2.8);
        let g = random_gamma(&mut rng, radius);
        for sign in [1.0, -1.0] {
            let u = |q: &Rotation, gv: &Vector3<f64>| psi.evaluate(&(*q * Rotation::exp(&(gv * (0.5 * sign)))));
            let lam = ops.lambda(|gv| u(&r, gv), &g).unwrap();
            for i in 0..3 {
                let zu = right_derivative(|q| u(q, &g), i, &r, &fd);
                let uz = (&psi.apply_lk(i) * (I_UNIT / psi.hbar())).evaluate(&(r * Rotation::exp(&(g * (0.5 * sign)))));
                assert!((lam[i] - (zu - uz)).norm() < 1e-5, "{}", (lam[i] - (zu - uz)).norm());
            }
        }
    }
}

#[test]
fn b_product_rule_holds_across_the_ball() {
    let fd = FiniteDifference::nested();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let psi = random_state(1.1, 2, 70);
    for radius in [0.0, 0.05, 1.0, 2.0, 3.0] {
        let r = random_rotation(&mut rng);
        let g = random_gamma(&mut rng, radius);
        let a = apply_b(&psi, &r, &g, &fd).unwrap();
        let b = b_product_rule(&psi, &r, &g).unwrap();
        for i in 0..3 {
            assert!((a[i] - b[i]).norm() < 1e-7, "{radius}: {}", (a[i] - b[i]).norm());
        }
    }
    let constant = WaveFunction::basis(1.0, 1, 0, 0, 0).unwrap();
    let b = apply_b(&constant, &Rotation::identity(), &Vector3::new(0.4, 1.0, -2.0), &fd).unwrap();
    assert!(b.iter().all(|v| v.norm() < 1e-12));
}

#[test]
fn constant_state_has_zero_residual() {
    let inertia = InertiaTensor::new(1.0, 2.0, 3.0).unwrap();
    let psi = WaveFunction::basis(0.7, 0, 0, 0, 0).unwrap();
    let prop = Propagator::new(&inertia, 0.7, 0, true).unwrap();
    let at = |t: f64| prop.evolve(&psi, t);
    let res = liouville_residual(&at, 0.3, 1e-2, &inertia, &Rotation::identity(), &Vector3::new(1.0, -0.5, 0.2)).unwrap();
    assert!(res.norm() < 1e-12);
}

#[test]
fn small_gamma_residual_has_the_closed_form_linear_term() {
    // For a spherical top the residual is iħ γ⃗·Z|Ψ|² / 24I + O(γ²).
    let inertia = InertiaTensor::spherical(1.3).unwrap();
    let hbar = 0.8;
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for psi in [WaveFunction::basis(hbar, 1, 1, 0, 1).unwrap(), random_state(hbar, 2, 80)] {
        let prop = Propagator::new(&inertia, hbar, psi.jmax(), true).unwrap();
        let at = |t: f64| prop.evolve(&psi, t);
        let r = random_rotation(&mut rng);
        let g = random_gamma(&mut rng, 1e-2);
        let res = liouville_residual(&at, 0.0, 1e-2, &inertia, &r, &g).unwrap();
        let fd = FiniteDifference::fourth_order(1e-4);
        let zdensity: f64 = (0..3)
            .map(|i| g[i] * right_derivative(|q| psi.evaluate(q).norm_sqr(), i, &r, &fd))
            .sum();
        let expect = I_UNIT * hbar * zdensity / (24.0 * 1.3);
        assert!((res - expect).norm() < 0.02 * expect.norm() + 1e-9, "{res} vs {expect}");
    }
}

#[test]
fn residual_grows_linearly_with_a_hamiltonian_defect() {
    let inertia = InertiaTensor::spherical(1.0).unwrap();
    let hbar = 1.0;
    let psi = random_state(hbar, 2, 81);
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let r = random_rotation(&mut rng);
    let g = random_gamma(&mut rng, 0.05);
    let residual = |defect: f64| {
        let wrong = InertiaTensor::spherical(1.0 / (1.0 + defect)).unwrap();
        let prop = Propagator::new(&wrong, hbar, psi.jmax(), true).unwrap();
        let at = |t: f64| prop.evolve(&psi, t);
        liouville_residual(&at, 0.0, 1e-2, &inertia, &r, &g).unwrap()
    };
    let base = residual(0.0);
    let excess: Vec<f64> = [0.05, 0.1, 0.2].iter().map(|&d| (residual(d) - base).norm() / d).collect();
    assert!(excess[0] > 1e-3);
    for e in &excess {
        assert!((e / excess[0] - 1.0).abs() < 1e-6, "{excess:?}");
    }
}

#[test]
fn schrodinger_residual_cases() {
    let inertia = InertiaTensor::new(1.0, 1.7, 2.9).unwrap();
    let hbar = 0.9;
    let psi = random_state(hbar, 3, 82);
    let prop = Propagator::new(&inertia, hbar, 3, true).unwrap();
    let evolved = |t: f64| prop.evolve(&psi, t);
    let coarse = schrodinger_residual(&evolved, 0.4, 1e-2, &inertia, true).unwrap();
    let fine = schrodinger_residual(&evolved, 0.4, 5e-3, &inertia, true).unwrap();
    assert!(fine.full < 1e-6 && fine.full < coarse.full);

    let frozen = |_: f64| psi.clone();
    let h = hamiltonian(&inertia, hbar, 3, true).apply(&psi);
    let still = schrodinger_residual(&frozen, 0.0, 1e-2, &inertia, true).unwrap();
    assert!((still.full - h.norm_squared().sqrt() / hbar).abs() < 1e-12);

    let flipped = schrodinger_residual(&evolved, 0.4, 5e-3, &inertia, false).unwrap();
    assert!((flipped.full - inertia.zero_point_energy(hbar) / hbar).abs() < 1e-6);
    assert!(flipped.orthogonal < 1e-6 && fine.orthogonal < 1e-6);
}

#[test]
fn scan_rows_and_crossover() {
    let inertia = InertiaTensor::spherical(1.0).unwrap();
    let psi = random_state(1.0, 1, 83);
    let prop = Propagator::new(&inertia, 1.0, 1, true).unwrap();
    let at = |t: f64| prop.evolve(&psi, t);
    let dirs = sphere_directions(6);
    assert!(dirs.iter().all(|d| (d.norm() - 1.0).abs() < 1e-14));
    let rows = coherence_scan(&at, 0.0, 1e-2, &inertia, &[Rotation::identity()], &[0.0, 0.05, 0.5], &dirs).unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].max_abs < 1e-9);
    assert!(rows[1].max_abs < rows[2].max_abs);
    assert_eq!(empirical_crossover(&rows, 1e-6), Some(0.05));
    assert_eq!(empirical_crossover(&rows, 1e3), None);
}
