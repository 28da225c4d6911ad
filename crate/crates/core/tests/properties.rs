use std::f64::consts::TAU;

use ndarray::Array2;
use num_complex::Complex64;
use phasemix_core::closed_form::{ClosedFormModel, CouplingPair};
use phasemix_core::entanglement::{
    closed_form_negativity, negativity, negativity_general, upsilon_witness,
};
use phasemix_core::fock::{make_phase_state, photon_probability, ThermalFieldSpec};
use phasemix_core::phase::{
    evolve_mixed, exact_node_count, max_abs_diff, partial_trace_field_matrix,
    reconstruct_field_density, JointDensity,
};
use phasemix_core::reduction::{reduced_density, AtomicMixtureSpec, TwoQubitDensity};
use phasemix_core::AtomLabel;
use proptest::prelude::*;

fn arb_x_state() -> impl Strategy<Value = TwoQubitDensity> {
    // Diagonal weights from a simplex, coherence inside the positivity disc.
    (prop::array::uniform4(0.0f64..1.0), 0.0f64..1.0, 0.0f64..TAU)
        .prop_filter("non-degenerate weights", |(w, _, _)| {
            w.iter().sum::<f64>() > 1e-3
        })
        .prop_map(|(w, r, arg)| {
            let total: f64 = w.iter().sum();
            let d = w.map(|x| x / total);
            let coh = Complex64::from_polar(r * (d[1] * d[2]).sqrt(), arg);
            TwoQubitDensity::x_state(d[0], d[1], d[2], d[3], coh)
        })
}

proptest! {
    #[test]
    fn phase_state_invariants(nbar in 0.0f64..6.0, phi in -20.0f64..20.0) {
        let spec = ThermalFieldSpec::new(nbar, 1e-9).unwrap();
        let z = make_phase_state(&spec, phi);
        prop_assert!((0.0..TAU).contains(&z.phi()));
        for (n, c) in z.coefficients().iter().enumerate() {
            let p = photon_probability(n, nbar);
            prop_assert!((c.norm() - p.sqrt()).abs() <= 1e-15);
            if p > 0.0 && c.norm() > 1e-150 {
                let diff = (c.arg() - n as f64 * z.phi()).rem_euclid(TAU);
                prop_assert!(diff.min(TAU - diff) <= 1e-12 * (n as f64 + 1.0));
            }
        }
        prop_assert!((z.norm_sqr() - spec.retained_mass()).abs() <= 1e-14);
    }

    /// `phi + 2 pi` is exact whenever `phi` sits on the grid of spacing
    /// `ulp(2 pi)`; on that grid periodicity holds bit for bit.
    #[test]
    fn phase_state_is_periodic(nbar in 0.0f64..6.0, k in 0u64..(1u64 << 50)) {
        let spec = ThermalFieldSpec::new(nbar, 1e-9).unwrap();
        let phi = k as f64 * 2f64.powi(-50);
        prop_assert_eq!((phi + TAU) - TAU, phi);
        let a = make_phase_state(&spec, phi);
        let b = make_phase_state(&spec, phi + TAU);
        prop_assert_eq!(a.coefficients(), b.coefficients());
    }

    #[test]
    fn closed_form_negativity_matches_general_solver(rho in arb_x_state()) {
        let general = negativity_general(&rho).unwrap();
        prop_assert!((general.xi - closed_form_negativity(&rho)).abs() <= 1e-11);
        let fast = negativity(&rho).unwrap();
        prop_assert!((fast.xi - general.xi).abs() <= 1e-11);
        prop_assert!((0.0..=1.0 + 1e-10).contains(&general.xi));
        if upsilon_witness(&rho).abs() > 1e-12 {
            prop_assert_eq!(upsilon_witness(&rho) < 0.0, general.xi > 0.0);
        }
    }

    #[test]
    fn reduced_density_is_a_valid_x_state(
        nbar in 0.0f64..2.0,
        gamma in 0.0f64..=1.0,
        theta in 0.0f64..TAU,
        vartheta in 0.0f64..TAU,
        t in 0.0f64..30.0,
    ) {
        let spec = ThermalFieldSpec::new(nbar, 1e-10).unwrap();
        let c = CouplingPair::from_gamma(gamma).unwrap();
        let rho = reduced_density(&spec, &AtomicMixtureSpec::new(theta, vartheta), &c, t);
        prop_assert!((rho.trace() - spec.retained_mass()).abs() <= 1e-10);
        prop_assert!(rho.is_exact_x_state());
        prop_assert!(rho.b_coh().norm_sqr() <= rho.b_egeg() * rho.b_gege() + 1e-10);
        for b in [rho.b_ee(), rho.b_egeg(), rho.b_gege(), rho.b_gg()] {
            prop_assert!(b >= -1e-10);
        }
        let r = negativity(&rho).unwrap();
        prop_assert!((0.0..=1.0 + 1e-10).contains(&r.xi));
        if r.upsilon.abs() > 1e-12 {
            prop_assert_eq!(r.upsilon < 0.0, r.xi > 0.0);
        }
    }

    #[test]
    fn diagonal_states_are_separable(d in prop::array::uniform4(0.0f64..1.0)) {
        let rho = TwoQubitDensity::from_diagonal(d);
        prop_assert_eq!(negativity(&rho).unwrap().xi, 0.0);
    }

    #[test]
    fn partial_trace_preserves_trace(seed in any::<u64>(), pd in 1usize..5, fd in 1usize..6) {
        // Random PSD matrix as A A^dagger.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let d = pd * fd;
        let a = Array2::from_shape_fn((d, d), |_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let rho = a.dot(&a.t().mapv(|z| z.conj()));
        let joint = JointDensity::from_matrix(rho, pd, fd).unwrap();
        let reduced = partial_trace_field_matrix(&joint);
        let tr: Complex64 = reduced.diag().sum();
        prop_assert!((tr - joint.trace()).norm() <= 1e-13 * joint.trace().norm().max(1.0));
        prop_assert!(max_abs_diff(&reduced, &reduced.t().mapv(|z| z.conj())) <= 1e-13);
    }
}

#[test]
fn reconstruction_is_exact_up_to_forty() {
    // Pick nbar so the truncation walks through 0..=40.
    for nbar in [0.0, 0.05, 0.2, 0.5, 1.0, 1.5, 2.0, 2.6] {
        let spec = ThermalFieldSpec::new(nbar, 1e-12).unwrap();
        if spec.truncation() > 40 {
            continue;
        }
        let r = reconstruct_field_density(&spec, exact_node_count(spec.truncation())).unwrap();
        assert!(r.exact);
        let dim = spec.truncation() + 1;
        for i in 0..dim {
            for j in 0..dim {
                if i != j {
                    assert!(r.matrix[[i, j]].norm() <= 1e-12);
                }
            }
        }
    }
}

#[test]
fn evolution_is_linear_in_the_partner_mixture() {
    let spec = ThermalFieldSpec::new(0.6, 1e-9).unwrap();
    let model = ClosedFormModel::new(CouplingPair::from_gamma(0.45).unwrap(), spec.truncation());
    let m = exact_node_count(spec.truncation());
    let t = 2.7;
    let mixed = evolve_mixed(
        &model,
        &spec,
        &[(0.3, AtomLabel::Ee), (0.7, AtomLabel::Eg)],
        t,
        m,
    )
    .unwrap();
    let ee = evolve_mixed(&model, &spec, &[(1.0, AtomLabel::Ee)], t, m).unwrap();
    let eg = evolve_mixed(&model, &spec, &[(1.0, AtomLabel::Eg)], t, m).unwrap();
    let combined = ee.matrix() * 0.3 + eg.matrix() * 0.7;
    assert!(max_abs_diff(mixed.matrix(), &combined) <= 1e-13);
}

#[test]
fn refining_an_exact_rule_changes_nothing() {
    let spec = ThermalFieldSpec::new(1.0, 1e-8).unwrap();
    let model = ClosedFormModel::new(CouplingPair::from_gamma(0.8).unwrap(), spec.truncation());
    let base = exact_node_count(spec.truncation());
    let mut prev = f64::INFINITY;
    for m in [base, 2 * base, 4 * base] {
        let a = evolve_mixed(&model, &spec, &[(1.0, AtomLabel::Eg)], 3.1, m).unwrap();
        let b = evolve_mixed(&model, &spec, &[(1.0, AtomLabel::Eg)], 3.1, 2 * m).unwrap();
        let d = max_abs_diff(a.matrix(), b.matrix());
        assert!(d <= 1e-12);
        assert!(d <= prev.max(1e-14));
        prev = d;
    }
}

#[test]
fn identity_evolution_gives_product_state() {
    let spec = ThermalFieldSpec::new(1.0, 1e-8).unwrap();
    let model = ClosedFormModel::new(CouplingPair::from_gamma(0.2).unwrap(), spec.truncation());
    let mixture = [
        (0.25, AtomLabel::Ee),
        (0.5, AtomLabel::Gg),
        (0.25, AtomLabel::Eg),
    ];
    let rho = evolve_mixed(
        &model,
        &spec,
        &mixture,
        0.0,
        exact_node_count(spec.truncation()),
    )
    .unwrap();
    let fd = rho.fock_dim();
    let mut expect = Array2::<Complex64>::zeros((4 * fd, 4 * fd));
    for &(w, label) in &mixture {
        let q = label.basis().index();
        for (n, &p) in spec.probabilities().iter().enumerate() {
            expect[[q * fd + n, q * fd + n]] = Complex64::new(w * p, 0.0);
        }
    }
    assert!(max_abs_diff(rho.matrix(), &expect) <= 1e-12);
}

#[test]
fn parallel_accumulation_is_reproducible() {
    let spec = ThermalFieldSpec::new(1.0, 1e-10).unwrap();
    let model = ClosedFormModel::new(CouplingPair::from_gamma(0.5).unwrap(), spec.truncation());
    let m = exact_node_count(spec.truncation());
    let a = evolve_mixed(&model, &spec, &[(1.0, AtomLabel::Ee)], 4.2, m).unwrap();
    for _ in 0..3 {
        let b = evolve_mixed(&model, &spec, &[(1.0, AtomLabel::Ee)], 4.2, m).unwrap();
        assert_eq!(a, b);
    }
}
