//! Acceptance suite: one test per release criterion, each printing a
//! PASS line with the checked tolerances (visible with
//! `cargo test --test acceptance -- --nocapture`). A failed assertion
//! marks the criterion red.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};
use std::process::Command;

use rhosq::discrimination::{
    build_pair, discriminate_nonlinear, lige_product, lige_two_copies, optimal_povm,
    simulate_trials, symmetric_pair, LigeConstruction, StateLabel, Strategy,
};
use rhosq::linalg::{Complex64, ComplexMatrix};
use rhosq::purification::{
    bilateral_rotation, iterate, purify_step, signed_element_square, Branch, Variant,
};
use rhosq::states::{projector_down, BellState};
use rhosq::transform::{
    pipeline, power_transform, power_transform_pipeline, qudit_square, sphere_map, square_elements,
    TwoQubitGate,
};
use rhosq::{overlap, DensityMatrix, PureState};

fn random_density(rng: &mut ChaCha8Rng, dim: usize) -> DensityMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(
            rng.random::<f64>() * 2.0 - 1.0,
            rng.random::<f64>() * 2.0 - 1.0,
        )
    });
    let gram = a.matmul(&a.adjoint());
    let trace = gram.trace().re;
    DensityMatrix::new(gram.scale_re(1.0 / trace)).expect("normalized Gram matrix is a state")
}

fn random_pure(rng: &mut ChaCha8Rng, dim: usize) -> PureState {
    let raw: Vec<Complex64> = (0..dim)
        .map(|_| {
            Complex64::new(
                rng.random::<f64>() * 2.0 - 1.0,
                rng.random::<f64>() * 2.0 - 1.0,
            )
        })
        .collect();
    let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    PureState::new_normalized(raw.into_iter().map(|c| c / norm).collect()).expect("normalized")
}

#[test]
fn criterion_1_element_squaring_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let xor = TwoQubitGate::xor();
    for _ in 0..100 {
        let rho = random_density(&mut rng, 2);
        let closed = square_elements(&rho);
        let piped = pipeline(&rho, &xor);
        assert!(closed.rho_out.mat().max_abs_diff(piped.rho_out.mat()) < 1e-12);
        assert!((closed.success_probability - piped.success_probability).abs() < 1e-12);
        assert!(piped.factored);

        // The target spin always ends up spin-down: rebuild the filtered
        // two-spin matrix and compare its target factor to the projector.
        let doubled = rho.mat().tensor(rho.mat());
        let filter = ComplexMatrix::identity(2).tensor(&projector_down());
        let u = xor.matrix();
        let filtered = filter
            .matmul(&u.matmul(&doubled).matmul(&u.adjoint()))
            .matmul(&filter);
        let target = filtered.partial_trace(&[2, 2], &[1]).unwrap();
        let scale = target.trace().re;
        assert!(target.max_abs_diff(&projector_down().scale_re(scale)) < 1e-12);
        assert!(filtered.max_abs_diff(&closed.rho_out.mat().tensor(&projector_down())) < 1e-12);
    }
    println!(
        "[acceptance] criterion 1: PASS - element squaring equals the XOR filter pipeline \
         entry-wise (1e-12) and the target factor is the spin-down projector, 100 random states"
    );
}

#[test]
fn criterion_2_discrimination_orthogonalization_and_monte_carlo() {
    let n_trials = 100_000u64;
    for theta in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, FRAC_PI_2] {
        let pair = build_pair(theta, 0.0).unwrap();
        let out1 = square_elements(&pair.rho1).rho_out;
        let out2 = square_elements(&pair.rho2).rho_out;
        assert!(out1.mat().matmul(out2.mat()).max_abs_entry() < 1e-12);

        let expected = 1.0 - theta.sin().powi(2) / 2.0;
        for which in [StateLabel::State1, StateLabel::State2] {
            let dist = discriminate_nonlinear(&pair, which);
            assert!((dist.correct(which) - expected).abs() < 1e-14);
            assert_eq!(dist.wrong(which), 0.0);
        }
        let strategy = Strategy::Nonlinear(pair);
        assert!((strategy.analytic_success().unwrap() - expected).abs() < 1e-14);

        let stats = simulate_trials(&strategy, n_trials, 42).unwrap();
        assert_eq!(
            stats.counts.wrong, 0,
            "wrong identifications must be exactly 0"
        );
        let sigma = (expected * (1.0 - expected) / n_trials as f64).sqrt();
        assert!(
            (stats.empirical_success - expected).abs() <= 4.0 * sigma,
            "theta = {theta}: empirical {} vs analytic {expected} (4 sigma = {})",
            stats.empirical_success,
            4.0 * sigma
        );
    }
    println!(
        "[acceptance] criterion 2: PASS - squared outputs orthogonal (<1e-12), success \
         1 - sin²θ/2 exact, Monte Carlo within 4σ at 1e5 trials, zero wrong identifications"
    );
}

#[test]
fn criterion_3_lige_probabilities_and_rotated_states() {
    for alpha in [FRAC_PI_6, FRAC_PI_4, FRAC_PI_3, 1.2, 1.5] {
        let lige = LigeConstruction::new(alpha).unwrap();
        for which in [StateLabel::State1, StateLabel::State2] {
            let dist = lige.outcome_distribution(which);
            assert!((dist.correct(which) - (1.0 - alpha.cos())).abs() < 1e-12);
            assert!((dist.p_inconclusive - alpha.cos()).abs() < 1e-12);
            assert_eq!(dist.wrong(which), 0.0);
            let rotated = lige.rotated(which);
            let expected = lige.closed_form_output(which);
            for (a, b) in rotated.amplitudes().iter().zip(expected.amplitudes()) {
                assert!((a - b).norm() < 1e-10);
            }
        }
        let two_copy = lige_two_copies(alpha).unwrap();
        let product = lige_product(alpha).unwrap();
        let expected = 1.0 - alpha.cos().powi(2);
        assert!((two_copy - expected).abs() < 1e-12);
        assert!((product - expected).abs() < 1e-12);
    }
    println!(
        "[acceptance] criterion 3: PASS - single-copy LIGe success 1 - cos α (1e-12), rotated \
         states match the closed forms (1e-10), both two-copy usages give 1 - cos²α (1e-12)"
    );
}

#[test]
fn criterion_4_optimal_povm_and_four_strategy_agreement() {
    for alpha in [0.3, 0.7, FRAC_PI_3, 1.1, 1.4] {
        let (psi1, psi2) = symmetric_pair(alpha);
        let s = overlap(&psi1, &psi2).unwrap();
        let povm = optimal_povm(&psi1, &psi2).unwrap();

        let x = 1.0 / (1.0 + s);
        // The conclusive elements are x times rank-one projectors, so their
        // traces equal the coefficient.
        assert!((povm.elements()[0].1.trace().re - x).abs() < 1e-12);
        assert!((povm.elements()[1].1.trace().re - x).abs() < 1e-12);

        let mut sum = ComplexMatrix::zeros(2, 2);
        for (_, op) in povm.elements() {
            assert!(op.eigvals_hermitian().unwrap().min() >= -1e-10);
            sum = sum.add(op);
        }
        assert!(sum.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-10);

        for (state, which) in [(&psi1, StateLabel::State1), (&psi2, StateLabel::State2)] {
            let dist = povm.distribution(&state.density());
            assert!((dist.p_inconclusive - s).abs() < 1e-12);
            assert_eq!(dist.wrong(which), 0.0);
        }
    }

    // Matched-overlap agreement across all four strategies.
    for theta in [0.4, 0.9, FRAC_PI_3, FRAC_PI_2] {
        let pair = build_pair(theta, 0.2).unwrap();
        let s = theta.sin() / 2f64.sqrt();
        let alpha = s.acos();
        let expected = 1.0 - s * s;
        let strategies = [
            Strategy::Nonlinear(pair.clone()),
            Strategy::LigeTwoCopies { alpha },
            Strategy::LigeProduct { alpha },
            Strategy::OptimalPovm {
                psi1: pair.psi1.tensor(&pair.psi1),
                psi2: pair.psi2.tensor(&pair.psi2),
            },
        ];
        for strategy in &strategies {
            assert!(
                (strategy.analytic_success().unwrap() - expected).abs() < 1e-12,
                "{} disagrees at theta = {theta}",
                strategy.name()
            );
        }
    }
    println!(
        "[acceptance] criterion 4: PASS - x = 1/(1+overlap) (1e-12), POVM positive (≥ -1e-10) \
         and complete (1e-10), inconclusive = overlap (1e-12), four-strategy agreement (1e-12)"
    );
}

#[test]
fn criterion_5_purification() {
    // Closed form vs 16-dimensional pipeline on random pair states.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let rho = random_density(&mut rng, 4);
        let closed = signed_element_square(&rho).unwrap();
        let piped = purify_step(&rho, Branch::MinusMinus).unwrap();
        assert!(closed.mat().max_abs_diff(piped.rho_out.mat()) < 1e-12);
    }

    // The singlet maps to half of itself.
    let singlet = BellState::PsiMinus.projector();
    let out = purify_step(&singlet, Branch::MinusMinus).unwrap();
    assert!(out.rho_out.mat().max_abs_diff(&singlet.mat().scale_re(0.5)) < 1e-12);

    // Bilateral rotation: swaps ψ+ and φ+, fixes ψ- and φ-.
    let rotated = |s: BellState| bilateral_rotation(&s.projector()).unwrap();
    assert!(rotated(BellState::PsiPlus).approx_eq(&BellState::PhiPlus.projector(), 1e-12));
    assert!(rotated(BellState::PhiPlus).approx_eq(&BellState::PsiPlus.projector(), 1e-12));
    assert!(rotated(BellState::PsiMinus).approx_eq(&BellState::PsiMinus.projector(), 1e-12));
    assert!(rotated(BellState::PhiMinus).approx_eq(&BellState::PhiMinus.projector(), 1e-12));

    // Isotropic input at fidelity 0.51: the reported trajectory, within the
    // tolerance covering the unstated-input ambiguity.
    let trajectory = iterate(0.51, 15, Variant::MinusOnly).unwrap();
    let f10 = trajectory.steps[10].fidelity;
    let f15 = trajectory.steps[15].fidelity;
    assert!((f10 - 0.809).abs() <= 0.02, "F(10) = {f10}");
    assert!(f15 >= 0.999, "F(15) = {f15}");

    for f0 in [0.6, 0.75] {
        let trajectory = iterate(f0, 15, Variant::MinusOnly).unwrap();
        assert!(trajectory.steps[15].fidelity > 0.99);
    }
    println!(
        "[acceptance] criterion 5: PASS - signed squaring equals the 16-dim pipeline (1e-12, \
         100 random states), singlet halves, Bell swaps exact (1e-12), F(10) = {f10:.6} \
         (0.809 ± 0.02), F(15) = {f15:.6} ≥ 0.999, f0 ∈ {{0.6, 0.75}} converge above 0.99"
    );
}

#[test]
fn criterion_6_power_and_qudit_generalizations() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..50 {
        let rho = random_density(&mut rng, 2);
        let closed = power_transform(&rho, 2).unwrap();
        let piped = power_transform_pipeline(&rho, 2).unwrap();
        assert!(closed.rho_out.mat().max_abs_diff(piped.rho_out.mat()) < 1e-12);
        for i in 0..2 {
            for j in 0..2 {
                let entry = rho.get(i, j);
                let cubed = entry * entry * entry;
                assert!((closed.rho_out.get(i, j) - cubed).norm() < 1e-12);
            }
        }
    }
    for _ in 0..50 {
        let psi = random_pure(&mut rng, 3);
        let squared = qudit_square(&psi);
        for i in 0..3 {
            let expected = psi.amplitude(i) * psi.amplitude(i);
            assert!((squared.amplitude(i) - expected).norm() < 1e-12);
        }
    }
    println!(
        "[acceptance] criterion 6: PASS - three-copy transform cubes entries via the 8-dim \
         generalized-XOR pipeline (1e-12); qudit squaring at d = 3 is component-wise (1e-12)"
    );
}

#[test]
fn criterion_7_sphere_map_determinism_and_purity() {
    let gate = TwoQubitGate::exp_zx();
    let first = sphere_map(&gate, 32, 64);
    let second = sphere_map(&gate, 32, 64);
    assert_eq!(first.len(), 2048);
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.theta.to_bits(), b.theta.to_bits());
        assert_eq!(a.phi.to_bits(), b.phi.to_bits());
        assert_eq!(a.output.x.to_bits(), b.output.x.to_bits());
        assert_eq!(a.output.y.to_bits(), b.output.y.to_bits());
        assert_eq!(a.output.z.to_bits(), b.output.z.to_bits());
        assert_eq!(
            a.output_normalized.x.to_bits(),
            b.output_normalized.x.to_bits()
        );
        assert_eq!(
            a.success_probability.to_bits(),
            b.success_probability.to_bits()
        );
    }
    for point in &first {
        assert!(
            (point.output_normalized.norm() - 1.0).abs() < 1e-9,
            "pure input at ({}, {}) must map to a pure output",
            point.theta,
            point.phi
        );
    }
    println!(
        "[acceptance] criterion 7: PASS - 32x64 exp(i π/8 σz⊗σx) point cloud is deterministic; \
         all normalized outputs of pure inputs have unit polarization norm (1e-9)"
    );
}

#[test]
fn criterion_8_cli_reproducibility() {
    let run = |args: &[&str]| {
        let output = Command::new(env!("CARGO_BIN_EXE_rhosq"))
            .args(args)
            .env_remove("RHOSQ_SEED")
            .output()
            .expect("binary runs");
        assert!(output.status.success(), "{args:?} failed");
        output.stdout
    };
    let invocations: &[&[&str]] = &[
        &[
            "discriminate",
            "--theta",
            "1.5707963",
            "--method",
            "all",
            "--trials",
            "20000",
            "--seed",
            "42",
        ],
        &[
            "purify",
            "--f0",
            "0.51",
            "--iterations",
            "15",
            "--format",
            "json",
        ],
        &[
            "sphere",
            "--gate",
            "exp-zx",
            "--n-theta",
            "32",
            "--n-phi",
            "64",
        ],
        &["povm", "--alpha", "0.9", "--format", "json"],
        &[
            "transform",
            "--theta",
            "1.1",
            "--phi",
            "0.4",
            "--format",
            "json",
        ],
    ];
    for args in invocations {
        let first = run(args);
        let second = run(args);
        assert_eq!(first, second, "outputs differ for {args:?}");
    }

    // The same holds when writing to files.
    let dir = tempfile::tempdir().unwrap();
    let path_a = dir.path().join("a.csv");
    let path_b = dir.path().join("b.csv");
    for path in [&path_a, &path_b] {
        run(&[
            "discriminate",
            "--theta",
            "0.8",
            "--trials",
            "5000",
            "--seed",
            "7",
            "--out",
            path.to_str().unwrap(),
        ]);
    }
    assert_eq!(
        std::fs::read(&path_a).unwrap(),
        std::fs::read(&path_b).unwrap()
    );
    println!(
        "[acceptance] criterion 8: PASS - identical invocations produce byte-identical output \
         across all subcommands, to stdout and to files"
    );
}
