//! Computational-basis observables, their spectral projections, and projective measurement.
//!
//! Only the five observables below can be measured; there is deliberately no way to measure a
//! general operator or a function of an observable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::Rng;

use crate::codec::{DataSlot, GammaString};
use crate::config::Configuration;
use crate::error::Result;
use crate::machine::{MachineSpec, Processor, Symbol};
use crate::real::Real;
use crate::state::QuantumState;
use crate::tape::Tape;

/// Outcomes with probability below this are not reported by [`measure`].
pub const MIN_PROBABILITY: f64 = 1e-15;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ObservableKind {
    /// `q̂`.
    ProcessorState,
    /// `T̂(m)`.
    TapeCell(i64),
    /// `ξ̂`.
    HeadPosition,
    /// `T̂(S)`, the decoded contents of the data slot.
    TapeSlotString(DataSlot),
    /// `n̂₀ = |q_f⟩⟨q_f|`.
    HaltFlag,
}

/// An eigenvalue label. Outcomes of one observable sort in ascending numeric (or string
/// enumeration) order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Outcome {
    Processor(Processor),
    Symbol(Symbol),
    Head(i64),
    Slot(GammaString),
    Flag(bool),
}

impl Outcome {
    pub fn display<'a>(&'a self, spec: &'a MachineSpec) -> impl fmt::Display + 'a {
        OutcomeDisplay { outcome: self, spec }
    }
}

struct OutcomeDisplay<'a> {
    outcome: &'a Outcome,
    spec: &'a MachineSpec,
}

impl fmt::Display for OutcomeDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.outcome {
            Outcome::Processor(q) => f.write_str(self.spec.processor_name(*q)),
            Outcome::Symbol(s) => f.write_str(self.spec.symbol_name(*s)),
            Outcome::Head(h) => write!(f, "{h}"),
            Outcome::Slot(x) => write!(f, "\"{}\"", x.display(self.spec)),
            Outcome::Flag(b) => write!(f, "{}", u8::from(*b)),
        }
    }
}

impl ObservableKind {
    /// The eigenvalue of `config` for this observable.
    pub fn evaluate(&self, spec: &MachineSpec, config: &Configuration) -> Outcome {
        match *self {
            ObservableKind::ProcessorState => Outcome::Processor(config.processor),
            ObservableKind::TapeCell(m) => Outcome::Symbol(config.tape.read(m)),
            ObservableKind::HeadPosition => Outcome::Head(config.head),
            ObservableKind::TapeSlotString(slot) => Outcome::Slot(slot.decode(&config.tape)),
            ObservableKind::HaltFlag => Outcome::Flag(config.processor == spec.halting()),
        }
    }

    fn admits(&self, value: &Outcome) -> bool {
        matches!(
            (self, value),
            (ObservableKind::ProcessorState, Outcome::Processor(_))
                | (ObservableKind::TapeCell(_), Outcome::Symbol(_))
                | (ObservableKind::HeadPosition, Outcome::Head(_))
                | (ObservableKind::TapeSlotString(_), Outcome::Slot(_))
                | (ObservableKind::HaltFlag, Outcome::Flag(_))
        )
    }
}

/// A spectral projection `[[A = a, B = b, …]]`: a conjunction of eigenvalue constraints, all of
/// which are diagonal in the computational basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Projector {
    clauses: Vec<(ObservableKind, Outcome)>,
    empty: bool,
}

impl Projector {
    /// The identity.
    pub fn identity() -> Self {
        Self {
            clauses: Vec::new(),
            empty: false,
        }
    }

    /// The zero projector.
    pub fn zero() -> Self {
        Self {
            clauses: Vec::new(),
            empty: true,
        }
    }

    /// Product with another projector of this family (they all commute).
    pub fn and(&self, other: &Projector) -> Projector {
        if self.empty || other.empty {
            return Projector::zero();
        }
        let mut clauses = self.clauses.clone();
        clauses.extend(other.clauses.iter().cloned());
        Projector {
            clauses,
            empty: false,
        }
    }

    pub fn contains(&self, spec: &MachineSpec, config: &Configuration) -> bool {
        !self.empty
            && self
                .clauses
                .iter()
                .all(|(kind, value)| kind.evaluate(spec, config) == *value)
    }
}

/// `[[kind = value]]`. A value of the wrong type lies outside the spectrum and yields the zero
/// projector.
pub fn spectral_projection(kind: ObservableKind, value: Outcome) -> Projector {
    if kind.admits(&value) {
        Projector {
            clauses: vec![(kind, value)],
            empty: false,
        }
    } else {
        Projector::zero()
    }
}

/// `P ψ`, unnormalized.
pub fn project<T: Real>(state: &QuantumState<T>, proj: &Projector) -> QuantumState<T> {
    let spec = state.spec().clone();
    state.filter(|c| proj.contains(&spec, c))
}

#[derive(Clone, Debug)]
pub struct MeasuredOutcome<T: Real> {
    pub value: Outcome,
    pub probability: T,
    pub post_state: QuantumState<T>,
}

/// Outcomes in ascending order with their probabilities and collapsed states.
#[derive(Clone, Debug)]
pub struct OutcomeDistribution<T: Real> {
    pub outcomes: Vec<MeasuredOutcome<T>>,
}

impl<T: Real> OutcomeDistribution<T> {
    pub fn probability_of(&self, value: &Outcome) -> T {
        self.outcomes
            .iter()
            .find(|o| &o.value == value)
            .map_or(T::zero(), |o| o.probability)
    }

    pub fn total(&self) -> T {
        self.outcomes.iter().map(|o| o.probability).sum()
    }
}

/// Splits the support of `state` by eigenvalue, in ascending eigenvalue order.
pub(crate) fn decompose<T: Real>(
    state: &QuantumState<T>,
    kind: ObservableKind,
) -> BTreeMap<Outcome, QuantumState<T>> {
    let spec = state.spec().clone();
    let mut parts: BTreeMap<Outcome, Vec<(Configuration, num_complex::Complex<T>)>> = BTreeMap::new();
    for (config, amp) in state.iter() {
        parts
            .entry(kind.evaluate(&spec, config))
            .or_default()
            .push((config.clone(), *amp));
    }
    parts
        .into_iter()
        .map(|(value, terms)| {
            let mut part = QuantumState::zero(spec.clone());
            for (c, a) in terms {
                part.insert_raw(c, a);
            }
            (value, part)
        })
        .collect()
}

/// Projective measurement of `kind` on a normalized state: probability `‖P_a ψ‖²`, post-state
/// `P_a ψ / ‖P_a ψ‖`.
pub fn measure<T: Real>(state: &QuantumState<T>, kind: ObservableKind) -> Result<OutcomeDistribution<T>> {
    state.require_normalized()?;
    let outcomes = decompose(state, kind)
        .into_iter()
        .filter_map(|(value, part)| {
            let probability = part.norm_sqr();
            (probability >= T::lit(MIN_PROBABILITY)).then(|| MeasuredOutcome {
                value,
                probability,
                post_state: part.normalized(),
            })
        })
        .collect();
    Ok(OutcomeDistribution { outcomes })
}

/// Draws one outcome of [`measure`] by inverse CDF over the ascending outcome list.
pub fn sample_measure<T: Real, R: Rng + ?Sized>(
    state: &QuantumState<T>,
    kind: ObservableKind,
    rng: &mut R,
) -> Result<(Outcome, QuantumState<T>)> {
    let dist = measure(state, kind)?;
    let total = dist.total();
    let draw = T::lit(rng.random::<f64>()) * total;
    let mut cumulative = T::zero();
    let last = dist.outcomes.len().saturating_sub(1);
    let mut outcomes = dist.outcomes.into_iter();
    for (i, outcome) in outcomes.by_ref().enumerate() {
        cumulative += outcome.probability;
        if draw < cumulative || i == last {
            return Ok((outcome.value, outcome.post_state));
        }
    }
    unreachable!("a normalized state has at least one outcome")
}

/// 1-based position of `x` in the length-then-lexicographic enumeration of `Γ*`
/// (the empty string is 1).
pub fn gamma_string_index(spec: &MachineSpec, x: &GammaString) -> BigUint {
    let k = BigUint::from(spec.alphabet_len());
    // Strings shorter than |x|: Σ_{l < |x|} k^l.
    let mut index = BigUint::one();
    let mut power = BigUint::one();
    for _ in 0..x.len() {
        index += &power;
        power *= &k;
    }
    let mut rank = BigUint::zero();
    for &s in x.symbols() {
        rank = rank * &k + BigUint::from(spec.alphabet_rank(s).expect("Γ-string holds no blank"));
    }
    index + rank
}

/// `λ` label of the slot string held by `tape`.
pub fn slot_string_index(spec: &MachineSpec, slot: DataSlot, tape: &Tape) -> BigUint {
    gamma_string_index(spec, &slot.decode(tape))
}
