//! The halting protocol: measure the halt flag after every step, and once it reads 1, measure
//! the data-slot string.
//!
//! Besides the sampled protocol, this module computes the output distribution of a monitored
//! run exactly and compares it with a single measurement after `N` steps. The two agree whenever
//! the halted part of the trajectory keeps both its halt flag and its slot string.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::codec::{DataSlot, GammaString};
use crate::config::Configuration;
use crate::error::{QtmError, Result};
use crate::measurement::{decompose, sample_measure, ObservableKind, Outcome};
use crate::real::Real;
use crate::state::QuantumState;
use crate::transition::{apply_step, validate, LocalTransitionFunction, DEFAULT_TOLERANCE};

/// Tolerance for comparing monitored and unmonitored output probabilities.
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-10;

#[derive(Clone, PartialEq, Debug)]
pub struct StationarityViolation<T> {
    pub step: usize,
    pub output: GammaString,
    /// `‖U P Q_j φ_t − P Q_j U P Q_j φ_t‖`.
    pub deviation: T,
}

#[derive(Clone, PartialEq, Debug)]
pub struct StationarityReport<T> {
    pub satisfied: bool,
    /// Steps `0..steps_checked` were examined.
    pub steps_checked: usize,
    pub max_deviation: T,
    pub violations: Vec<StationarityViolation<T>>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct OutputDistribution<T> {
    /// Probability of each output string, in enumeration order.
    pub probabilities: BTreeMap<GammaString, T>,
    /// Probability of not having halted.
    pub residual: T,
    /// Halted probability first observed at step `K`, for `K = 0..=budget`. Empty for the
    /// unmonitored protocol.
    pub halt_mass_by_step: Vec<T>,
}

impl<T: Real> OutputDistribution<T> {
    pub fn probability(&self, output: &GammaString) -> T {
        self.probabilities.get(output).copied().unwrap_or_else(T::zero)
    }

    pub fn halted_mass(&self) -> T {
        self.probabilities.values().copied().sum()
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ComparisonVerdict {
    /// Stationarity holds and the distributions agree within tolerance.
    Agree,
    /// Stationarity holds but the distributions differ; the theorem is violated.
    Disagree,
    /// Stationarity fails, so no agreement is claimed.
    StationarityViolated,
}

#[derive(Clone, PartialEq, Debug)]
pub struct ProtocolComparison<T> {
    pub steps: usize,
    pub tolerance: T,
    pub stationarity: StationarityReport<T>,
    pub monitored: OutputDistribution<T>,
    pub unmonitored: OutputDistribution<T>,
    /// `|monitored − unmonitored|` for every output seen by either protocol.
    pub differences: BTreeMap<GammaString, T>,
    pub max_difference: T,
    pub residual_difference: T,
    pub verdict: ComparisonVerdict,
}

#[derive(Clone, PartialEq, Debug)]
pub struct HaltRunResult {
    pub seed: u64,
    pub halted: bool,
    pub halt_step: Option<usize>,
    pub output: Option<GammaString>,
    /// Halt-flag outcome after each executed step.
    pub trace: Vec<bool>,
}

#[derive(Clone, PartialEq, Debug)]
pub struct LemmaCheck<T> {
    pub step: usize,
    pub output: GammaString,
    /// `|‖PQ_j Uψ‖² − ‖PQ_j ψ‖² − ‖PQ_j U P^⊥ψ‖²|`.
    pub single_step_residual: T,
    /// `|⟨U P Q_j ψ, P Q_j U P^⊥ ψ⟩|`.
    pub orthogonality_residual: T,
}

#[derive(Clone, PartialEq, Debug)]
pub struct LemmaReport<T> {
    pub checks: Vec<LemmaCheck<T>>,
    pub max_single_step_residual: T,
    pub max_orthogonality_residual: T,
}

fn max<T: Real>(a: T, b: T) -> T {
    if b > a || b.is_nan() {
        b
    } else {
        a
    }
}

/// A machine together with the data slot its output is read from.
#[derive(Clone, Copy, Debug)]
pub struct HaltingProtocol<'a, T: Real> {
    d_fn: &'a LocalTransitionFunction<T>,
    slot: DataSlot,
}

impl<'a, T: Real> HaltingProtocol<'a, T> {
    pub fn new(d_fn: &'a LocalTransitionFunction<T>, slot: DataSlot) -> Self {
        Self { d_fn, slot }
    }

    fn slot_kind(&self) -> ObservableKind {
        ObservableKind::TapeSlotString(self.slot)
    }

    fn start(&self, initial: &Configuration) -> Result<QuantumState<T>> {
        QuantumState::basis(self.d_fn.spec().clone(), initial.clone())
    }

    fn require_unitary(&self) -> Result<()> {
        let report = validate(self.d_fn, T::lit(DEFAULT_TOLERANCE))?;
        if report.passed() {
            Ok(())
        } else {
            let failed: String = report.failed_conditions().into_iter().collect();
            Err(QtmError::NotUnitary(format!("conditions ({failed}) fail")))
        }
    }

    /// `(P ψ, P^⊥ ψ)`.
    fn split_halted(&self, state: &QuantumState<T>) -> (QuantumState<T>, QuantumState<T>) {
        let qf = self.d_fn.spec().halting();
        (
            state.filter(|c| c.processor == qf),
            state.filter(|c| c.processor != qf),
        )
    }

    /// `P Q_j ψ` for every slot string `j` present in the halted part of `ψ`.
    fn halted_by_output(&self, state: &QuantumState<T>) -> BTreeMap<GammaString, QuantumState<T>> {
        let (halted, _) = self.split_halted(state);
        decompose(&halted, self.slot_kind())
            .into_iter()
            .map(|(value, part)| match value {
                Outcome::Slot(x) => (x, part),
                _ => unreachable!("slot observable yields slot outcomes"),
            })
            .collect()
    }

    /// Checks `U P Q_j φ_t = P Q_j U P Q_j φ_t` along `φ_t = U^t |C⟩` for `t < budget`.
    pub fn check_stationarity(
        &self,
        initial: &Configuration,
        budget: usize,
        tolerance: T,
    ) -> Result<StationarityReport<T>> {
        if !(tolerance > T::zero()) {
            return Err(QtmError::InvalidTolerance(tolerance.to_f64().unwrap_or(f64::NAN)));
        }
        self.require_unitary()?;
        let qf = self.d_fn.spec().halting();
        let slot = self.slot;
        let mut state = self.start(initial)?;
        let mut violations = Vec::new();
        let mut max_deviation = T::zero();
        for t in 0..budget {
            for (output, part) in self.halted_by_output(&state) {
                let stepped = apply_step(self.d_fn, &part)?;
                let escaped = stepped.filter(|c| c.processor != qf || slot.decode(&c.tape) != output);
                let deviation = escaped.norm();
                max_deviation = max(max_deviation, deviation);
                if !(deviation <= tolerance) {
                    violations.push(StationarityViolation {
                        step: t,
                        output,
                        deviation,
                    });
                }
            }
            if t + 1 < budget {
                state = apply_step(self.d_fn, &state)?;
            }
        }
        Ok(StationarityReport {
            satisfied: violations.is_empty(),
            steps_checked: budget,
            max_deviation,
            violations,
        })
    }

    /// One slot measurement after `steps` steps: `Pr(j) = ‖P Q_j U^N |C⟩‖²`.
    pub fn unmonitored(&self, initial: &Configuration, steps: usize) -> Result<OutputDistribution<T>> {
        let mut state = self.start(initial)?;
        for _ in 0..steps {
            state = apply_step(self.d_fn, &state)?;
        }
        let probabilities = self
            .halted_by_output(&state)
            .into_iter()
            .map(|(x, part)| (x, part.norm_sqr()))
            .collect();
        let (_, running) = self.split_halted(&state);
        Ok(OutputDistribution {
            probabilities,
            residual: running.norm_sqr(),
            halt_mass_by_step: Vec::new(),
        })
    }

    /// Halt flag read after every step: `Pr(j) = Σ_{K=0..budget} ‖P Q_j (U P^⊥)^K |C⟩‖²`.
    pub fn monitored(&self, initial: &Configuration, budget: usize) -> Result<OutputDistribution<T>> {
        let mut state = self.start(initial)?;
        let mut probabilities: BTreeMap<GammaString, T> = BTreeMap::new();
        let mut halt_mass_by_step = Vec::with_capacity(budget + 1);
        for k in 0..=budget {
            if k > 0 {
                state = apply_step(self.d_fn, &state)?;
            }
            let mut mass = T::zero();
            for (x, part) in self.halted_by_output(&state) {
                let p = part.norm_sqr();
                mass += p;
                *probabilities.entry(x).or_insert_with(T::zero) += p;
            }
            halt_mass_by_step.push(mass);
            state = self.split_halted(&state).1;
        }
        Ok(OutputDistribution {
            probabilities,
            residual: state.norm_sqr(),
            halt_mass_by_step,
        })
    }

    /// Runs both protocols for `steps` steps and, when stationarity holds, checks that they agree.
    pub fn compare(&self, initial: &Configuration, steps: usize, tolerance: T) -> Result<ProtocolComparison<T>> {
        let stationarity = self.check_stationarity(initial, steps, tolerance)?;
        let monitored = self.monitored(initial, steps)?;
        let unmonitored = self.unmonitored(initial, steps)?;
        let keys: BTreeSet<&GammaString> = monitored
            .probabilities
            .keys()
            .chain(unmonitored.probabilities.keys())
            .collect();
        let differences: BTreeMap<GammaString, T> = keys
            .into_iter()
            .map(|x| (x.clone(), (monitored.probability(x) - unmonitored.probability(x)).abs()))
            .collect();
        let max_difference = differences.values().copied().fold(T::zero(), max);
        let residual_difference = (monitored.residual - unmonitored.residual).abs();
        let verdict = if !stationarity.satisfied {
            ComparisonVerdict::StationarityViolated
        } else if max_difference <= tolerance && residual_difference <= tolerance {
            ComparisonVerdict::Agree
        } else {
            ComparisonVerdict::Disagree
        };
        Ok(ProtocolComparison {
            steps,
            tolerance,
            stationarity,
            monitored,
            unmonitored,
            differences,
            max_difference,
            residual_difference,
            verdict,
        })
    }

    /// Evaluates the single-step identity `‖PQ_j Uψ‖² = ‖PQ_j ψ‖² + ‖PQ_j U P^⊥ψ‖²` and the
    /// orthogonality `⟨U P Q_j ψ, P Q_j U P^⊥ ψ⟩ = 0` at `ψ = U^t |C⟩` for `t < steps`.
    pub fn lemma_residuals(&self, initial: &Configuration, steps: usize) -> Result<LemmaReport<T>> {
        let mut state = self.start(initial)?;
        let mut checks = Vec::new();
        let mut max_single = T::zero();
        let mut max_orth = T::zero();
        for t in 0..steps {
            let stepped = apply_step(self.d_fn, &state)?;
            let (_, running) = self.split_halted(&state);
            let stepped_running = apply_step(self.d_fn, &running)?;

            let before = self.halted_by_output(&state);
            let after = self.halted_by_output(&stepped);
            let fresh = self.halted_by_output(&stepped_running);
            let outputs: BTreeSet<&GammaString> = before.keys().chain(after.keys()).chain(fresh.keys()).collect();
            let zero = QuantumState::zero(state.spec().clone());
            for x in outputs {
                let held = before.get(x).unwrap_or(&zero);
                let reached = after.get(x).unwrap_or(&zero);
                let entered = fresh.get(x).unwrap_or(&zero);
                let single = (reached.norm_sqr() - held.norm_sqr() - entered.norm_sqr()).abs();
                let overlap: Complex<T> = apply_step(self.d_fn, held)?.inner_product(entered)?;
                let orth = overlap.norm();
                max_single = max(max_single, single);
                max_orth = max(max_orth, orth);
                checks.push(LemmaCheck {
                    step: t,
                    output: x.clone(),
                    single_step_residual: single,
                    orthogonality_residual: orth,
                });
            }
            state = stepped;
        }
        Ok(LemmaReport {
            checks,
            max_single_step_residual: max_single,
            max_orthogonality_residual: max_orth,
        })
    }

    /// One operational run: step, sample the halt flag with collapse, and on outcome 1 sample the
    /// slot string. An initial configuration already in `q_f` halts at step 0.
    pub fn run_sampled(&self, initial: &Configuration, budget: usize, seed: u64) -> Result<HaltRunResult> {
        self.require_unitary()?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut state = self.start(initial)?;
        let mut trace = Vec::new();
        let halted_at = |state: &QuantumState<T>, step, trace, rng: &mut ChaCha8Rng| -> Result<HaltRunResult> {
            let (value, _) = sample_measure(state, self.slot_kind(), rng)?;
            let Outcome::Slot(output) = value else {
                unreachable!("slot observable yields slot outcomes")
            };
            Ok(HaltRunResult {
                seed,
                halted: true,
                halt_step: Some(step),
                output: Some(output),
                trace,
            })
        };
        if initial.processor == self.d_fn.spec().halting() {
            return halted_at(&state, 0, trace, &mut rng);
        }
        for k in 1..=budget {
            state = apply_step(self.d_fn, &state)?;
            let (flag, post) = sample_measure(&state, ObservableKind::HaltFlag, &mut rng)?;
            let halted = flag == Outcome::Flag(true);
            trace.push(halted);
            state = post;
            if halted {
                return halted_at(&state, k, trace, &mut rng);
            }
        }
        Ok(HaltRunResult {
            seed,
            halted: false,
            halt_step: None,
            output: None,
            trace,
        })
    }
}

/// [`HaltingProtocol::check_stationarity`] on the identity data slot.
pub fn check_halt_stationarity<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    initial: &Configuration,
    budget: usize,
    tolerance: T,
) -> Result<StationarityReport<T>> {
    HaltingProtocol::new(d_fn, DataSlot::IDENTITY).check_stationarity(initial, budget, tolerance)
}

/// [`HaltingProtocol::unmonitored`] on the identity data slot.
pub fn output_distribution_unmonitored<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    initial: &Configuration,
    steps: usize,
) -> Result<OutputDistribution<T>> {
    HaltingProtocol::new(d_fn, DataSlot::IDENTITY).unmonitored(initial, steps)
}

/// [`HaltingProtocol::monitored`] on the identity data slot.
pub fn output_distribution_monitored<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    initial: &Configuration,
    budget: usize,
) -> Result<OutputDistribution<T>> {
    HaltingProtocol::new(d_fn, DataSlot::IDENTITY).monitored(initial, budget)
}

/// [`HaltingProtocol::compare`] on the identity data slot.
pub fn compare_protocols<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    initial: &Configuration,
    steps: usize,
    tolerance: T,
) -> Result<ProtocolComparison<T>> {
    HaltingProtocol::new(d_fn, DataSlot::IDENTITY).compare(initial, steps, tolerance)
}

/// [`HaltingProtocol::run_sampled`] on the identity data slot.
pub fn run_protocol_sampled<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    initial: &Configuration,
    budget: usize,
    seed: u64,
) -> Result<HaltRunResult> {
    HaltingProtocol::new(d_fn, DataSlot::IDENTITY).run_sampled(initial, budget, seed)
}
