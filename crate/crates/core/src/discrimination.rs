//! Unambiguous discrimination of two non-orthogonal spin-1/2 states.
//!
//! Four strategies, all with zero probability of naming the wrong state:
//!
//! * element squaring followed by a von Neumann measurement along the
//!   (now orthogonal) output axis, given two copies of the state;
//! * two independent loss-induced generalized (LIGe) measurements, one
//!   per copy;
//! * a single LIGe measurement on the two-copy product state;
//! * the optimal three-outcome POVM.
//!
//! At matched overlap all four identify the state with probability
//! 1 − overlap², which is optimal. `simulate_trials` checks the analytic
//! distributions by Monte Carlo with a per-trial counter-mode RNG stream,
//! so results are reproducible for a fixed seed regardless of execution
//! parallelism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{Complex64, ComplexMatrix, C_ZERO, HERMITIAN_TOL};
use crate::states::{inner, overlap, DensityMatrix, PureState, POSITIVITY_TOL};
use crate::transform::square_elements;

/// Outcome probabilities below this are numerical dust and are zeroed so
/// that sampling can never report them.
const OUTCOME_DUST: f64 = 1e-12;

/// Which of the two hypothesis states was actually prepared.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    State1,
    State2,
}

impl StateLabel {
    fn index(self) -> usize {
        match self {
            StateLabel::State1 => 0,
            StateLabel::State2 => 1,
        }
    }
}

/// Result reported by a discrimination measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    State1,
    State2,
    Inconclusive,
}

impl Outcome {
    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::State1 => "state1",
            Outcome::State2 => "state2",
            Outcome::Inconclusive => "inconclusive",
        }
    }
}

/// Distribution over measurement outcomes for one prepared state.
#[derive(Debug, Clone, Copy)]
pub struct OutcomeDistribution {
    pub p_state1: f64,
    pub p_state2: f64,
    pub p_inconclusive: f64,
}

impl OutcomeDistribution {
    /// Build from Born-rule weights. The weights must sum to 1 within
    /// 1e-9; entries below 1e-12 (the wrong-state dust of an unambiguous
    /// strategy) are zeroed exactly and folded into the inconclusive
    /// probability.
    pub fn new(p_state1: f64, p_state2: f64, p_inconclusive: f64) -> Self {
        let sum = p_state1 + p_state2 + p_inconclusive;
        assert!(
            (sum - 1.0).abs() < 1e-9,
            "outcome probabilities sum to {sum}, expected 1"
        );
        let p1 = if p_state1 < OUTCOME_DUST {
            0.0
        } else {
            p_state1
        };
        let p2 = if p_state2 < OUTCOME_DUST {
            0.0
        } else {
            p_state2
        };
        Self {
            p_state1: p1,
            p_state2: p2,
            p_inconclusive: 1.0 - p1 - p2,
        }
    }

    /// Probability of naming the prepared state.
    pub fn correct(&self, which: StateLabel) -> f64 {
        match which {
            StateLabel::State1 => self.p_state1,
            StateLabel::State2 => self.p_state2,
        }
    }

    /// Probability of naming the other state.
    pub fn wrong(&self, which: StateLabel) -> f64 {
        match which {
            StateLabel::State1 => self.p_state2,
            StateLabel::State2 => self.p_state1,
        }
    }

    fn sample(&self, u: f64) -> Outcome {
        if u < self.p_state1 {
            Outcome::State1
        } else if u < self.p_state1 + self.p_state2 {
            Outcome::State2
        } else {
            Outcome::Inconclusive
        }
    }
}

/// A constrained pair of spin-1/2 states whose element-squared images are
/// exactly orthogonal: the partner of (θ, φ) is (θ + π, φ + π/2).
///
/// The overlap is sin θ/√2, maximal at θ = π/2. At θ ∈ {0, π} the inputs
/// are already orthogonal; the pair is still constructed but flagged
/// degenerate.
#[derive(Debug, Clone)]
pub struct DiscriminationPair {
    pub theta: f64,
    pub phi: f64,
    pub psi1: PureState,
    pub psi2: PureState,
    pub rho1: DensityMatrix,
    pub rho2: DensityMatrix,
    pub degenerate: bool,
}

/// Build the constrained pair at polar angle `theta` ∈ [0, π] and
/// azimuth `phi`.
pub fn build_pair(theta: f64, phi: f64) -> Result<DiscriminationPair> {
    if !(0.0..=std::f64::consts::PI).contains(&theta) {
        return Err(Error::OutOfRange(format!(
            "polar angle must lie in [0, π], got {theta}"
        )));
    }
    let psi1 = PureState::from_angles(theta, phi);
    let psi2 = PureState::from_angles(
        theta + std::f64::consts::PI,
        phi + std::f64::consts::FRAC_PI_2,
    );
    let rho1 = psi1.density();
    let rho2 = psi2.density();
    let degenerate = theta < 1e-12 || std::f64::consts::PI - theta < 1e-12;
    Ok(DiscriminationPair {
        theta,
        phi,
        psi1,
        psi2,
        rho1,
        rho2,
        degenerate,
    })
}

fn born(projector: &ComplexMatrix, rho: &DensityMatrix) -> f64 {
    projector.matmul(rho.mat()).trace().re
}

/// Outcome distribution of the element-squaring strategy: square the
/// prepared state's entries (success probability = surviving trace),
/// then measure along the output axis of state 1; its antipode names
/// state 2. The failed branch is inconclusive.
pub fn discriminate_nonlinear(pair: &DiscriminationPair, which: StateLabel) -> OutcomeDistribution {
    let rho = match which {
        StateLabel::State1 => &pair.rho1,
        StateLabel::State2 => &pair.rho2,
    };
    let transformed = square_elements(rho);
    let pass = transformed.success_probability;

    // Measurement axis from state 1's squared output; the outputs are
    // orthogonal, so state 2 sits at the antipode.
    let axis = square_elements(&pair.rho1)
        .rho_out
        .bloch_vector_normalized()
        .expect("squared output is 2x2");
    let axis_projector = DensityMatrix::from_bloch(&axis).expect("unit axis");
    let passed = transformed.rho_out.renormalized();
    let p1_given_pass = born(axis_projector.mat(), &passed);
    let p2_given_pass = 1.0 - p1_given_pass;

    OutcomeDistribution::new(pass * p1_given_pass, pass * p2_given_pass, 1.0 - pass)
}

/// The symmetric real pair with overlap cos α:
/// cos(α/2) e0 ± sin(α/2) e1.
pub fn symmetric_pair(alpha: f64) -> (PureState, PureState) {
    let c = Complex64::new((alpha / 2.0).cos(), 0.0);
    let s = Complex64::new((alpha / 2.0).sin(), 0.0);
    (
        PureState::new_normalized(vec![c, s]).expect("unit vector"),
        PureState::new_normalized(vec![c, -s]).expect("unit vector"),
    )
}

/// The loss-induced generalized measurement.
///
/// The two states span a plane with orthonormal axes φ1 ∝ ψ1 + ψ2 and
/// φ2 ∝ ψ1 − ψ2; a loss direction φ0 is appended as one extra dimension.
/// The measurement rotation first aligns (φ1, φ2) with the symmetric and
/// antisymmetric axes of the plane, then tilts the symmetric axis toward
/// φ0 by the angle arccos(tan(α/2)), a Givens rotation about the
/// antisymmetric axis u = φ1 − φ2. The net effect, pinned by test against
/// the closed forms, is
///
/// ψ1 ↦ √2 sin(α/2) φ1 + √(cos α) φ0,
/// ψ2 ↦ √2 sin(α/2) φ2 + √(cos α) φ0,
///
/// after which a projective measurement in {φ0, φ1, φ2} either names the
/// state (outcome φ1 or φ2, never wrongly) or is inconclusive (φ0).
#[derive(Debug, Clone)]
pub struct LigeConstruction {
    /// Angle with cos α equal to the pair overlap.
    pub alpha: f64,
    phi0: PureState,
    phi1: PureState,
    phi2: PureState,
    embedded: [PureState; 2],
    rotation: ComplexMatrix,
}

impl LigeConstruction {
    /// The canonical construction for the symmetric pair at angle `alpha`:
    /// two-dimensional inputs, three-dimensional embedding.
    pub fn new(alpha: f64) -> Result<Self> {
        check_lige_angle(alpha)?;
        let (psi1, psi2) = symmetric_pair(alpha);
        Self::for_states(&psi1, &psi2)
    }

    /// The construction for an arbitrary pair with real non-negative
    /// overlap below 1; the embedding adds one loss dimension.
    pub fn for_states(psi1: &PureState, psi2: &PureState) -> Result<Self> {
        let g = inner(psi1, psi2)?;
        if g.im.abs() > 1e-10 || g.re < -1e-10 {
            return Err(Error::OutOfRange(format!(
                "the plane construction needs a real non-negative overlap, got {g}"
            )));
        }
        let s = g.re.clamp(0.0, 1.0);
        if s > 1.0 - 1e-12 {
            return Err(Error::Degenerate(
                "states with unit overlap cannot be discriminated".into(),
            ));
        }
        let alpha = s.acos();
        let d = psi1.dim();

        let normalize = |v: Vec<Complex64>| {
            let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            v.into_iter().map(|c| c / norm).collect::<Vec<_>>()
        };
        let combine = |sign: f64| {
            normalize(
                psi1.amplitudes()
                    .iter()
                    .zip(psi2.amplitudes())
                    .map(|(a, b)| a + b.scale(sign))
                    .collect(),
            )
        };
        let embed = |mut v: Vec<Complex64>| {
            v.push(C_ZERO);
            PureState::new_normalized(v).expect("embedding preserves the norm")
        };

        let phi1 = embed(combine(1.0));
        let phi2 = embed(combine(-1.0));
        let phi0 = PureState::basis(d + 1, d);
        let embedded = [
            embed(psi1.amplitudes().to_vec()),
            embed(psi2.amplitudes().to_vec()),
        ];

        let rotation = lige_rotation(&phi1, &phi2, &phi0, alpha);
        Ok(Self {
            alpha,
            phi0,
            phi1,
            phi2,
            embedded,
            rotation,
        })
    }

    pub fn rotation(&self) -> &ComplexMatrix {
        &self.rotation
    }

    pub fn basis(&self) -> (&PureState, &PureState, &PureState) {
        (&self.phi0, &self.phi1, &self.phi2)
    }

    /// The prepared state after the rotation.
    pub fn rotated(&self, which: StateLabel) -> PureState {
        PureState::subnormalized(
            self.rotation
                .apply(self.embedded[which.index()].amplitudes()),
        )
    }

    /// The expected rotated state,
    /// √2 sin(α/2) φ_which + √(cos α) φ0.
    pub fn closed_form_output(&self, which: StateLabel) -> PureState {
        let conclusive = match which {
            StateLabel::State1 => &self.phi1,
            StateLabel::State2 => &self.phi2,
        };
        let a = 2f64.sqrt() * (self.alpha / 2.0).sin();
        let b = self.alpha.cos().max(0.0).sqrt();
        PureState::subnormalized(
            conclusive
                .amplitudes()
                .iter()
                .zip(self.phi0.amplitudes())
                .map(|(c, l)| c.scale(a) + l.scale(b))
                .collect(),
        )
    }

    /// Born probabilities of the projective measurement in {φ0, φ1, φ2}
    /// applied to the rotated state.
    pub fn outcome_distribution(&self, which: StateLabel) -> OutcomeDistribution {
        let rotated = self.rotated(which);
        let weight = |basis: &PureState| {
            inner(basis, &rotated)
                .expect("embedded dimensions agree")
                .norm_sqr()
        };
        OutcomeDistribution::new(weight(&self.phi1), weight(&self.phi2), weight(&self.phi0))
    }
}

fn check_lige_angle(alpha: f64) -> Result<()> {
    if alpha <= 0.0 || (alpha / 2.0).tan() > 1.0 + 1e-12 {
        return Err(Error::OutOfRange(format!(
            "the rotation angle arccos(tan(α/2)) requires α in (0, π/2], got {alpha}"
        )));
    }
    Ok(())
}

/// Unitary acting as the three-dimensional measurement rotation on
/// span{φ1, φ2, φ0} and as the identity on its complement.
fn lige_rotation(
    phi1: &PureState,
    phi2: &PureState,
    phi0: &PureState,
    alpha: f64,
) -> ComplexMatrix {
    let t = (alpha / 2.0).tan();
    let lift = (1.0 - t * t).max(0.0).sqrt();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    // Columns are the images of (φ1, φ2, φ0) in (φ1, φ2, φ0) coordinates.
    let r3 = ComplexMatrix::from_real(
        3,
        3,
        &[
            t * r,
            r,
            lift * r, //
            t * r,
            -r,
            lift * r, //
            lift,
            0.0,
            -t,
        ],
    );
    let dim = phi0.dim();
    let basis = [phi1, phi2, phi0];
    let b = ComplexMatrix::from_fn(dim, 3, |i, j| basis[j].amplitude(i));
    let b_adj = b.adjoint();
    ComplexMatrix::identity(dim)
        .sub(&b.matmul(&b_adj))
        .add(&b.matmul(&r3).matmul(&b_adj))
}

/// Outcome distribution of a single LIGe measurement on one copy.
/// Succeeds with probability 2 sin²(α/2) = 1 − cos α.
pub fn lige_single(alpha: f64, which: StateLabel) -> Result<OutcomeDistribution> {
    Ok(LigeConstruction::new(alpha)?.outcome_distribution(which))
}

/// Success probability of two independent LIGe measurements, one per
/// copy: p + (1 − p)p with p = 1 − cos α, which comes to 1 − cos²α.
pub fn lige_two_copies(alpha: f64) -> Result<f64> {
    let p = lige_single(alpha, StateLabel::State1)?.correct(StateLabel::State1);
    Ok(p + (1.0 - p) * p)
}

/// Success probability of one LIGe measurement on the two-copy product
/// state. The product states have overlap cos²α, the embedding has
/// dimension five, and the success probability is again 1 − cos²α.
pub fn lige_product(alpha: f64) -> Result<f64> {
    check_lige_angle(alpha)?;
    let (psi1, psi2) = symmetric_pair(alpha);
    let lige = LigeConstruction::for_states(&psi1.tensor(&psi1), &psi2.tensor(&psi2))?;
    Ok(lige
        .outcome_distribution(StateLabel::State1)
        .correct(StateLabel::State1))
}

/// A positive-operator measurement: labelled positive operators summing
/// to the identity.
#[derive(Debug, Clone)]
pub struct Povm {
    elements: Vec<(Outcome, ComplexMatrix)>,
}

impl Povm {
    /// Validate positivity (eigenvalues ≥ −1e-10) and completeness
    /// (sum within 1e-10 of the identity).
    pub fn new(elements: Vec<(Outcome, ComplexMatrix)>) -> Result<Self> {
        assert!(!elements.is_empty());
        let dim = elements[0].1.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for (_, op) in &elements {
            let asym = op.max_hermitian_asymmetry();
            if asym > HERMITIAN_TOL {
                return Err(Error::NotHermitian {
                    max_asymmetry: asym,
                    tol: HERMITIAN_TOL,
                });
            }
            let eig = op.eigvals_hermitian()?;
            if eig.min() < -POSITIVITY_TOL {
                return Err(Error::NotPositive {
                    min_eigenvalue: eig.min(),
                });
            }
            sum = sum.add(op);
        }
        let deviation = sum.max_abs_diff(&ComplexMatrix::identity(dim));
        if deviation > HERMITIAN_TOL {
            return Err(Error::DimensionMismatch(format!(
                "POVM elements sum to identity only within {deviation:.3e}"
            )));
        }
        Ok(Self { elements })
    }

    pub fn elements(&self) -> &[(Outcome, ComplexMatrix)] {
        &self.elements
    }

    pub fn dim(&self) -> usize {
        self.elements[0].1.dim()
    }

    /// Born probabilities of every element on a unit-trace state.
    pub fn outcome_probabilities(&self, rho: &DensityMatrix) -> Vec<(Outcome, f64)> {
        self.elements
            .iter()
            .map(|(label, op)| (*label, born(op, rho)))
            .collect()
    }

    /// Collapse the Born probabilities into an outcome distribution.
    pub fn distribution(&self, rho: &DensityMatrix) -> OutcomeDistribution {
        let mut p = [0.0f64; 3];
        for (label, value) in self.outcome_probabilities(rho) {
            let slot = match label {
                Outcome::State1 => 0,
                Outcome::State2 => 1,
                Outcome::Inconclusive => 2,
            };
            p[slot] += value;
        }
        OutcomeDistribution::new(p[0], p[1], p[2])
    }
}

/// The optimal unambiguous-discrimination POVM for two pure states with
/// overlap s ∈ (0, 1): the conclusive operators are x |w_i⟩⟨w_i| with
/// weight x = 1/(1 + s), where w_1 is the unit vector in the pair's span
/// orthogonal to ψ2 (and vice versa); the inconclusive operator is the
/// completion to the identity. For two-dimensional inputs this is exactly
/// x(1 − |ψ2⟩⟨ψ2|) and x(1 − |ψ1⟩⟨ψ1|); the span form keeps all three
/// operators positive in larger spaces, where it acts the same way on the
/// two hypotheses. Either prepared state draws the inconclusive outcome
/// with probability s and the wrong label with probability zero.
pub fn optimal_povm(psi1: &PureState, psi2: &PureState) -> Result<Povm> {
    let s = overlap(psi1, psi2)?;
    if !(1e-12..=1.0 - 1e-12).contains(&s) {
        return Err(Error::Degenerate(format!(
            "optimal POVM needs overlap strictly inside (0, 1), got {s}"
        )));
    }
    let x = 1.0 / (1.0 + s);
    let dim = psi1.dim();

    // Unit vector in span{ψ1, ψ2} orthogonal to `other`.
    let detector = |kept: &PureState, other: &PureState| {
        let g = inner(other, kept).expect("dimensions agree");
        let raw: Vec<Complex64> = kept
            .amplitudes()
            .iter()
            .zip(other.amplitudes())
            .map(|(k, o)| k - g * o)
            .collect();
        let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        PureState::new_normalized(raw.into_iter().map(|c| c / norm).collect())
            .expect("Gram-Schmidt residual of non-parallel states")
    };

    let a1 = detector(psi1, psi2).projector().scale_re(x);
    let a2 = detector(psi2, psi1).projector().scale_re(x);
    let rest = ComplexMatrix::identity(dim).sub(&a1).sub(&a2);
    Povm::new(vec![
        (Outcome::State1, a1),
        (Outcome::State2, a2),
        (Outcome::Inconclusive, rest),
    ])
}

/// A discrimination strategy prepared for analytic evaluation and
/// Monte Carlo simulation.
#[derive(Debug, Clone)]
pub enum Strategy {
    /// Element squaring plus von Neumann measurement on the constrained pair.
    Nonlinear(DiscriminationPair),
    /// Two independent LIGe measurements at angle α (overlap cos α).
    LigeTwoCopies { alpha: f64 },
    /// One LIGe measurement on the product state at angle α.
    LigeProduct { alpha: f64 },
    /// The optimal POVM measuring the given (normalized) states.
    OptimalPovm { psi1: PureState, psi2: PureState },
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Nonlinear(_) => "nonlinear",
            Strategy::LigeTwoCopies { .. } => "lige2",
            Strategy::LigeProduct { .. } => "lige-product",
            Strategy::OptimalPovm { .. } => "povm",
        }
    }

    /// Success probability averaged over equiprobable preparations.
    pub fn analytic_success(&self) -> Result<f64> {
        let sampler = self.sampler()?;
        Ok(sampler.analytic_success())
    }

    fn sampler(&self) -> Result<Sampler> {
        match self {
            Strategy::Nonlinear(pair) => Ok(Sampler {
                per_state: [
                    discriminate_nonlinear(pair, StateLabel::State1),
                    discriminate_nonlinear(pair, StateLabel::State2),
                ],
                retry_on_inconclusive: false,
            }),
            Strategy::LigeTwoCopies { alpha } => Ok(Sampler {
                per_state: [
                    lige_single(*alpha, StateLabel::State1)?,
                    lige_single(*alpha, StateLabel::State2)?,
                ],
                retry_on_inconclusive: true,
            }),
            Strategy::LigeProduct { alpha } => {
                check_lige_angle(*alpha)?;
                let (psi1, psi2) = symmetric_pair(*alpha);
                let lige = LigeConstruction::for_states(&psi1.tensor(&psi1), &psi2.tensor(&psi2))?;
                Ok(Sampler {
                    per_state: [
                        lige.outcome_distribution(StateLabel::State1),
                        lige.outcome_distribution(StateLabel::State2),
                    ],
                    retry_on_inconclusive: false,
                })
            }
            Strategy::OptimalPovm { psi1, psi2 } => {
                let povm = optimal_povm(psi1, psi2)?;
                Ok(Sampler {
                    per_state: [
                        povm.distribution(&psi1.density()),
                        povm.distribution(&psi2.density()),
                    ],
                    retry_on_inconclusive: false,
                })
            }
        }
    }
}

/// Precomputed outcome distributions, one per prepared state. When
/// `retry_on_inconclusive` is set (two independent measurements on two
/// copies), an inconclusive first draw is followed by a second one.
#[derive(Debug, Clone)]
struct Sampler {
    per_state: [OutcomeDistribution; 2],
    retry_on_inconclusive: bool,
}

impl Sampler {
    fn analytic_success(&self) -> f64 {
        let success = |which: StateLabel| {
            let p = self.per_state[which.index()].correct(which);
            if self.retry_on_inconclusive {
                p + (1.0 - p) * p
            } else {
                p
            }
        };
        0.5 * (success(StateLabel::State1) + success(StateLabel::State2))
    }

    fn run_trial(&self, rng: &mut ChaCha8Rng) -> (StateLabel, Outcome) {
        let which = if rng.random::<f64>() < 0.5 {
            StateLabel::State1
        } else {
            StateLabel::State2
        };
        let dist = &self.per_state[which.index()];
        let mut outcome = dist.sample(rng.random::<f64>());
        if self.retry_on_inconclusive && outcome == Outcome::Inconclusive {
            outcome = dist.sample(rng.random::<f64>());
        }
        (which, outcome)
    }
}

/// Trial tallies by how the report compared to the preparation.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct TrialCounts {
    pub correct: u64,
    pub wrong: u64,
    pub inconclusive: u64,
}

impl TrialCounts {
    fn merge(self, other: Self) -> Self {
        Self {
            correct: self.correct + other.correct,
            wrong: self.wrong + other.wrong,
            inconclusive: self.inconclusive + other.inconclusive,
        }
    }

    pub fn total(&self) -> u64 {
        self.correct + self.wrong + self.inconclusive
    }
}

/// Name of the trial generator, recorded in every `TrialStats`.
pub const TRIAL_RNG: &str = "chacha8[seed_from_u64(seed), stream=trial]";

/// Monte Carlo statistics for one strategy.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialStats {
    pub n_trials: u64,
    pub counts: TrialCounts,
    pub empirical_success: f64,
    pub analytic_success: f64,
    pub seed: u64,
    /// Generator identification, always [`TRIAL_RNG`].
    pub rng: &'static str,
}

/// Simulate `n_trials` equiprobable preparations of the two states and
/// tally the strategy's reports.
///
/// Every trial draws from its own ChaCha8 stream keyed by (seed, trial
/// index), and the tallies combine by addition, so the result is
/// identical whether trials run on one thread or many.
pub fn simulate_trials(strategy: &Strategy, n_trials: u64, seed: u64) -> Result<TrialStats> {
    let sampler = prepare(strategy, n_trials)?;
    #[cfg(feature = "parallel")]
    let counts = (0..n_trials)
        .into_par_iter()
        .map(|trial| run_one(&sampler, seed, trial))
        .reduce(TrialCounts::default, TrialCounts::merge);
    #[cfg(not(feature = "parallel"))]
    let counts = (0..n_trials)
        .map(|trial| run_one(&sampler, seed, trial))
        .fold(TrialCounts::default(), TrialCounts::merge);
    Ok(finish(&sampler, counts, n_trials, seed))
}

/// Single-threaded variant of [`simulate_trials`]; the fallback path,
/// and bit-identical to it for the same seed.
pub fn simulate_trials_seq(strategy: &Strategy, n_trials: u64, seed: u64) -> Result<TrialStats> {
    let sampler = prepare(strategy, n_trials)?;
    let counts = (0..n_trials)
        .map(|trial| run_one(&sampler, seed, trial))
        .fold(TrialCounts::default(), TrialCounts::merge);
    Ok(finish(&sampler, counts, n_trials, seed))
}

fn prepare(strategy: &Strategy, n_trials: u64) -> Result<Sampler> {
    if n_trials < 1 {
        return Err(Error::OutOfRange("trial count must be ≥ 1".into()));
    }
    strategy.sampler()
}

fn run_one(sampler: &Sampler, seed: u64, trial: u64) -> TrialCounts {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let (which, outcome) = sampler.run_trial(&mut rng);
    let mut counts = TrialCounts::default();
    match outcome {
        Outcome::Inconclusive => counts.inconclusive = 1,
        Outcome::State1 if which == StateLabel::State1 => counts.correct = 1,
        Outcome::State2 if which == StateLabel::State2 => counts.correct = 1,
        _ => counts.wrong = 1,
    }
    counts
}

fn finish(sampler: &Sampler, counts: TrialCounts, n_trials: u64, seed: u64) -> TrialStats {
    TrialStats {
        n_trials,
        counts,
        empirical_success: counts.correct as f64 / n_trials as f64,
        analytic_success: sampler.analytic_success(),
        seed,
        rng: TRIAL_RNG,
    }
}
