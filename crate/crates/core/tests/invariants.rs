//! Property tests for the numerical invariants of each layer.

use acq::acq::{
    acq_run, compressed_generator, energy_derivatives, newton_step, AcqOptions, CompressedUnitary, StepPolicy,
};
use acq::evolution::{brockett_residual, db_qite_step, ite_step};
use acq::geometry::{fs_distance, geodesic_point};
use acq::hamiltonian::{build_tfim, decompose_local, reassemble, spectrum_of, Boundary};
use acq::harness::{simulate, ExperimentConfig, InitialState, Method};
use acq::qite::{qite_run, QiteProblem};
use acq::statespace::{expectation, herm_exp, DenseOperator, StateVector};
use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> DenseOperator {
    let d = 1 << n;
    let m = DMatrix::from_fn(d, d, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    DenseOperator::hermitian((&m + m.adjoint()) * C64::new(0.5, 0.0)).unwrap()
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn unitarity_defect(u: &DMatrix<C64>) -> f64 {
    max_abs(&(u.adjoint() * u - DMatrix::identity(u.nrows(), u.ncols())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn herm_exp_is_unitary_and_additive(n in 1usize..=4, seed in any::<u64>(), a in -3.0..3.0f64, b in -3.0..3.0f64) {
        let h = random_hermitian(n, &mut rng(seed));
        let u = herm_exp(&h, C64::new(0.0, a)).unwrap();
        prop_assert!(unitarity_defect(u.matrix()) < 1e-10);
        let ea = herm_exp(&h, C64::new(a, 0.0)).unwrap();
        let eb = herm_exp(&h, C64::new(b, 0.0)).unwrap();
        let eab = herm_exp(&h, C64::new(a + b, 0.0)).unwrap();
        // Real exponents can be large with a small product; roundoff in the
        // product scales with the factors.
        let scale = (ea.matrix().norm() * eb.matrix().norm()).max(1.0);
        prop_assert!(max_abs(&(ea.matrix() * eb.matrix() - eab.matrix())) < 1e-10 * scale);
        let (ua, ub) = (herm_exp(&h, C64::new(0.0, a)).unwrap(), herm_exp(&h, C64::new(0.0, b)).unwrap());
        let uab = herm_exp(&h, C64::new(0.0, a + b)).unwrap();
        prop_assert!(max_abs(&(ua.matrix() * ub.matrix() - uab.matrix())) < 1e-10);
    }

    #[test]
    fn expectation_is_linear_and_phase_blind(n in 1usize..=3, seed in any::<u64>(), x in -2.0..2.0f64, phase in 0.0..6.3f64) {
        let mut r = rng(seed);
        let (p, q) = (random_hermitian(n, &mut r), random_hermitian(n, &mut r));
        let psi = StateVector::random(n, &mut r).unwrap();
        let combo = DenseOperator::hermitian(p.matrix() * C64::new(x, 0.0) + q.matrix()).unwrap();
        let lhs = expectation(&psi, &combo).unwrap();
        let rhs = x * expectation(&psi, &p).unwrap() + expectation(&psi, &q).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-12);
        let rotated = StateVector::from_amplitudes(psi.amplitudes() * C64::from_polar(1.0, phase)).unwrap();
        prop_assert!((expectation(&rotated, &p).unwrap() - expectation(&psi, &p).unwrap()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn free_spins_ground_energy(n in 1usize..=8, h in 0.1..3.0f64) {
        let spectrum = build_tfim(n, 0.0, h, Boundary::Open).unwrap().exact_spectrum().unwrap();
        prop_assert!((spectrum.ground_energy() + n as f64 * h).abs() < 1e-10);
    }

    #[test]
    fn decompose_reassemble_roundtrip(n in 2usize..=8, locality in 2usize..=4, j in -2.0..2.0f64, h in -2.0..2.0f64, periodic: bool) {
        let boundary = if periodic && n >= 3 { Boundary::Periodic } else { Boundary::Open };
        let model = build_tfim(n, j, h, boundary).unwrap();
        let terms = decompose_local(&model, locality).unwrap();
        let back = reassemble(&terms, n).unwrap();
        prop_assert!(max_abs(&(back.matrix() - model.hamiltonian().matrix())) < 1e-12);
    }

    #[test]
    fn ite_energy_never_rises(n in 1usize..=3, seed in any::<u64>(), dtau in 0.001..0.5f64) {
        let mut r = rng(seed);
        let h = random_hermitian(n, &mut r);
        let mut psi = StateVector::random(n, &mut r).unwrap();
        let mut e = expectation(&psi, &h).unwrap();
        for _ in 0..20 {
            psi = ite_step(&h, &psi, dtau).unwrap();
            let next = expectation(&psi, &h).unwrap();
            prop_assert!(next <= e + 1e-13 * e.abs().max(1.0), "{e} -> {next}");
            e = next;
        }
    }

    #[test]
    fn brockett_residual_is_second_order(n in 1usize..=3, seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_hermitian(n, &mut r);
        let psi = StateVector::random(n, &mut r).unwrap();
        let (coarse, fine) = (brockett_residual(&h, &psi, 0.02).unwrap(), brockett_residual(&h, &psi, 0.01).unwrap());
        prop_assume!(fine > 1e-9);
        prop_assert!((coarse / fine - 4.0).abs() < 0.4, "{}", coarse / fine);
    }

    #[test]
    fn double_bracket_step_preserves_norm(n in 1usize..=4, seed in any::<u64>(), s in -50.0..50.0f64) {
        let mut r = rng(seed);
        let h = random_hermitian(n, &mut r);
        let psi = StateVector::random(n, &mut r).unwrap();
        prop_assert!((db_qite_step(&h, &psi, s).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn single_qubit_ite_follows_the_geodesic(seed in any::<u64>()) {
        let mut r = rng(seed);
        let h = random_hermitian(1, &mut r);
        let psi0 = StateVector::random(1, &mut r).unwrap();
        let ground = spectrum_of(&h).unwrap().ground_state;
        let total = fs_distance(&psi0, &ground).unwrap();
        prop_assume!(total > 1e-6 && total < std::f64::consts::FRAC_PI_2 - 1e-6);
        for k in 1..=20 {
            let point = ite_step(&h, &psi0, 0.25 * k as f64).unwrap();
            let gamma = 1.0 - fs_distance(&point, &ground).unwrap() / total;
            let on_curve = geodesic_point(&psi0, &ground, gamma.clamp(0.0, 1.0)).unwrap();
            prop_assert!(fs_distance(&point, &on_curve).unwrap() < 1e-8);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn generators_are_hermitian_and_factors_unitary(n in 2usize..=4, d in 2usize..=4, seed in any::<u64>(), dtau in 0.01..0.3f64) {
        let model = build_tfim(n, 0.5, 1.0, Boundary::Open).unwrap();
        let problem = QiteProblem::from_model(&model, d).unwrap();
        let psi = StateVector::random(n, &mut rng(seed)).unwrap();
        for g in problem.generators(&psi, dtau).unwrap() {
            let a = g.to_dense().unwrap();
            prop_assert!(max_abs(&(a.matrix() - a.matrix().adjoint())) < 1e-10);
            prop_assert!(unitarity_defect(g.unitary(dtau).unwrap().block()) < 1e-10);
        }
    }

    #[test]
    fn larger_domains_fit_no_worse(seed in any::<u64>(), dtau in 0.01..0.3f64) {
        let n = 5;
        let model = build_tfim(n, 0.5, 1.0, Boundary::Open).unwrap();
        let psi = StateVector::random(n, &mut rng(seed)).unwrap();
        let fits: Vec<Vec<_>> = (2..=4)
            .map(|d| QiteProblem::from_model(&model, d).unwrap().generators(&psi, dtau).unwrap())
            .collect();
        for pair in fits.windows(2) {
            for (small, large) in pair[0].iter().zip(&pair[1]) {
                prop_assert!(small.domain.iter().all(|q| large.domain.contains(q)));
                prop_assert!(large.residual <= small.residual + 1e-9, "{} > {}", large.residual, small.residual);
            }
        }
    }

    #[test]
    fn compressed_unitary_preserves_norm(n in 2usize..=5, seed in any::<u64>(), t in -5.0..5.0f64) {
        let model = build_tfim(n, 0.5, 1.0, Boundary::Open).unwrap();
        let problem = QiteProblem::from_model(&model, 2).unwrap();
        let psi = StateVector::random(n, &mut rng(seed)).unwrap();
        let gens = problem.generators(&psi, 0.1).unwrap();
        let out = CompressedUnitary::new(&gens).unwrap().evolve(&psi, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn compressed_direction_descends(n in 2usize..=5, d in 2usize..=4, seed in any::<u64>()) {
        let model = build_tfim(n, 0.5, 1.0, Boundary::Open).unwrap();
        let problem = QiteProblem::from_model(&model, d).unwrap();
        let psi = StateVector::random(n, &mut rng(seed)).unwrap();
        let a = compressed_generator(&problem.generators(&psi, 0.05).unwrap()).unwrap();
        let (e1, _) = energy_derivatives(&a, problem.hamiltonian(), &psi).unwrap();
        prop_assert!(e1 < 0.0, "{e1}");
    }

    #[test]
    fn newton_hits_quadratic_minimum(e1 in -10.0..10.0f64, e2 in 0.01..10.0f64, c0 in -5.0..5.0f64) {
        let s = newton_step(e1, e2, 0.1);
        let e = |s: f64| c0 + e1 * s + 0.5 * e2 * s * s;
        let exact = -e1 / e2;
        prop_assert!((s - exact).abs() <= 1e-12 * exact.abs().max(1.0));
        prop_assert!(e(s) <= e(exact + 1e-6) && e(s) <= e(exact - 1e-6));
    }

    #[test]
    fn acq_energies_strictly_decrease(n in 2usize..=5, seed in any::<u64>(), policy_index in 0usize..4) {
        let policy = [StepPolicy::Fixed, StepPolicy::GridLineSearch, StepPolicy::Newton, StepPolicy::VarianceBound][policy_index];
        let model = build_tfim(n, 0.5, 1.0, Boundary::Open).unwrap();
        let problem = QiteProblem::from_model(&model, 2).unwrap();
        let psi0 = StateVector::random(n, &mut rng(seed)).unwrap();
        let options = AcqOptions { max_steps: 40, ..AcqOptions::new(0.1, policy) };
        let run = acq_run(&problem, &psi0, &options).unwrap();
        let mut e = run.initial_energy;
        for r in &run.records {
            prop_assert!(r.energy < e, "{policy:?}: {e} -> {}", r.energy);
            e = r.energy;
        }
    }

    #[test]
    fn fixed_step_acq_matches_qite_for_one_term(seed in any::<u64>(), j in -1.0..1.0f64, h in 0.2..2.0f64) {
        // A two-site chain is a single local term, so the compressed unitary
        // and the per-term product coincide.
        let model = build_tfim(2, j, h, Boundary::Open).unwrap();
        let problem = QiteProblem::from_model(&model, 2).unwrap();
        prop_assert_eq!(problem.terms().len(), 1);
        let psi0 = StateVector::random(2, &mut rng(seed)).unwrap();
        let acq = acq_run(&problem, &psi0, &AcqOptions { max_steps: 30, ..AcqOptions::new(0.1, StepPolicy::Fixed) }).unwrap();
        let qite = qite_run(&problem, &psi0, 0.1, 30, true).unwrap();
        prop_assert_eq!(acq.records.len(), qite.len());
        // Compared step by step from the same input: the normal equations can
        // be near singular, so whole trajectories drift apart from roundoff.
        let mut prev = psi0;
        for a in &acq.records {
            let q = problem.sweep(&prev, 0.1).unwrap().state;
            let diff = (a.state.amplitudes() - q.amplitudes()).norm();
            prop_assert!(diff < 1e-10, "step {}: {diff}", a.step);
            prev = a.state.clone();
        }
    }

    #[test]
    fn emitted_energies_respect_the_ground_energy(n in 2usize..=5, seed in any::<u64>(), method_index in 0usize..4) {
        let method = [Method::Ite, Method::Qite, Method::Acq, Method::Dbqite][method_index];
        let config = ExperimentConfig {
            n,
            method,
            domain: 2,
            max_steps: 40,
            initial_state: InitialState::Random,
            seed,
            ..Default::default()
        };
        let run = simulate(&config).unwrap();
        for row in &run.rows {
            prop_assert!(row.energy >= run.ground_energy - 1e-9);
        }
    }
}

#[test]
fn qite_step_error_is_second_order_for_small_steps() {
    let model = build_tfim(3, 0.5, 1.0, Boundary::Open).unwrap();
    let problem = QiteProblem::from_model(&model, 3).unwrap();
    let h = model.hamiltonian();
    for seed in 0..4 {
        let psi = StateVector::random(3, &mut rng(seed)).unwrap();
        let err = |dt: f64| fs_distance(&problem.sweep(&psi, dt).unwrap().state, &ite_step(&h, &psi, dt).unwrap()).unwrap();
        let (e2, e3, e4) = (err(1e-2), err(1e-3), err(1e-4));
        assert!((e2 / e3 / 100.0 - 1.0).abs() < 0.1, "{e2} {e3}");
        assert!((e3 / e4 / 100.0 - 1.0).abs() < 0.1, "{e3} {e4}");
    }
}
