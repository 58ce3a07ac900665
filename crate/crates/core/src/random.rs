//! Seeded generators of transition tables and states, for cross-checking the validator against
//! the oracle and for property tests.
//!
//! Every generator draws only from the supplied RNG, so a suite is reproducible from its seed.
//! Amplitudes in sparse tables come from `{±1, ±i, (±1±i)/√2, 1/√2, 1/2}`; the Haar families
//! use unitaries obtained by Gram–Schmidt on complex Gaussian matrices.

use std::sync::Arc;

use num_complex::Complex;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::config::Configuration;
use crate::machine::{MachineSpec, Processor, Symbol};
use crate::real::Real;
use crate::state::QuantumState;
use crate::tape::Tape;
use crate::transition::{LocalTransitionFunction, Move, TransitionKey};

/// How head moves are attached to the columns of a table.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DirectionRule {
    /// The move depends only on the target processor symbol; always satisfies (c) and (d).
    ByTarget,
    /// Each source `(q, σ)` picks its own move; usually breaks (c) or (d).
    BySource,
    /// Every entry picks its own move independently.
    PerEntry,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    /// Independent entries from the fixed amplitude set, each present with probability 1/4.
    Sparse,
    /// A bijection `(q, σ) → (p, τ)` with unit-modulus phases.
    Permutation(DirectionRule),
    /// A Haar-random unitary on `Q × Σ`.
    Haar(DirectionRule),
    /// A permutation in which two columns are mixed by a random 2×2 unitary.
    Superposition(DirectionRule),
    /// A Haar-random isometry from `Q × Σ` into `Q × Σ × {−1, 0, 1}`; satisfies (a) and (b) only.
    Isometry,
}

impl Family {
    /// Families whose moves are attached per column or per target processor.
    pub const ALL: [Family; 8] = [
        Family::Sparse,
        Family::Permutation(DirectionRule::ByTarget),
        Family::Permutation(DirectionRule::BySource),
        Family::Haar(DirectionRule::ByTarget),
        Family::Haar(DirectionRule::BySource),
        Family::Superposition(DirectionRule::ByTarget),
        Family::Superposition(DirectionRule::BySource),
        Family::Isometry,
    ];

    /// Families with independently drawn moves. These can place a left and a right move in the
    /// same column with phases that cancel on short cyclic tapes; see [`crate::oracle`].
    pub const PER_ENTRY: [Family; 3] = [
        Family::Permutation(DirectionRule::PerEntry),
        Family::Haar(DirectionRule::PerEntry),
        Family::Superposition(DirectionRule::PerEntry),
    ];
}

fn sparse_amplitudes<T: Real>() -> Vec<Complex<T>> {
    let h = T::FRAC_1_SQRT_2();
    let (one, zero) = (T::one(), T::zero());
    vec![
        Complex::new(one, zero),
        Complex::new(-one, zero),
        Complex::new(zero, one),
        Complex::new(zero, -one),
        Complex::new(h, h),
        Complex::new(h, -h),
        Complex::new(-h, h),
        Complex::new(-h, -h),
        Complex::new(h, zero),
        Complex::new(T::lit(0.5), zero),
    ]
}

fn unit_phases<T: Real>() -> Vec<Complex<T>> {
    sparse_amplitudes::<T>().into_iter().take(8).collect()
}

fn random_move<R: Rng + ?Sized>(rng: &mut R) -> Move {
    Move::ALL[rng.random_range(0..3)]
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex::new(T::lit(re), T::lit(im))
}

/// `count` orthonormal vectors of length `len`, Haar-distributed.
pub fn haar_columns<T: Real, R: Rng + ?Sized>(rng: &mut R, len: usize, count: usize) -> Vec<Vec<Complex<T>>> {
    assert!(count <= len);
    let mut basis: Vec<Vec<Complex<T>>> = Vec::with_capacity(count);
    while basis.len() < count {
        let mut v: Vec<Complex<T>> = (0..len).map(|_| gaussian(rng)).collect();
        // Two Gram–Schmidt passes keep the result orthogonal to rounding.
        for _ in 0..2 {
            for u in &basis {
                let overlap: Complex<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= overlap * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if norm > T::lit(1e-6) {
            for x in &mut v {
                *x /= norm;
            }
            basis.push(v);
        }
    }
    basis
}

/// Symbol sets `{q0, q1}` (or `{q0}`) with `q_f` the last, and `{B, 1}` (or `{B}`).
pub fn small_spec(processors: usize, symbols: usize) -> Arc<MachineSpec> {
    let qs: Vec<String> = (0..processors).map(|i| format!("q{i}")).collect();
    let ss: Vec<String> = (0..symbols).map(|i| if i == 0 { "B".into() } else { i.to_string() }).collect();
    let last = qs.last().expect("at least one processor symbol").clone();
    Arc::new(MachineSpec::new(qs.clone(), &qs[0], &last, ss, "B").expect("small spec"))
}

/// Draws one table of the given family over `spec`.
pub fn random_machine<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    spec: Arc<MachineSpec>,
    family: Family,
) -> LocalTransitionFunction<T> {
    let pairs: Vec<(Processor, Symbol)> = spec
        .processors()
        .flat_map(|q| spec.symbols().map(move |s| (q, s)))
        .collect();
    let n = pairs.len();
    let target_moves: Vec<Move> = spec.processors().map(|_| random_move(rng)).collect();
    let source_moves: Vec<Move> = pairs.iter().map(|_| random_move(rng)).collect();
    let pick_move = |rule: DirectionRule, source: usize, target: Processor, rng: &mut R| match rule {
        DirectionRule::ByTarget => target_moves[target.index()],
        DirectionRule::BySource => source_moves[source],
        DirectionRule::PerEntry => random_move(rng),
    };

    let mut entries: Vec<(TransitionKey, Complex<T>)> = Vec::new();
    // Unitary on Q × Σ given as columns; the target of row `r` is `pairs[r]`.
    let mut from_unitary = |columns: Vec<Vec<Complex<T>>>, rule: DirectionRule, rng: &mut R| {
        for (src, column) in columns.iter().enumerate() {
            for (row, &amp) in column.iter().enumerate() {
                if amp.norm() <= T::dust() {
                    continue;
                }
                let (p, t) = pairs[row];
                let movement = pick_move(rule, src, p, rng);
                let (q, s) = pairs[src];
                entries.push((TransitionKey::new(q, s, p, t, movement), amp));
            }
        }
    };

    match family {
        Family::Sparse => {
            let values = sparse_amplitudes::<T>();
            for &(q, s) in &pairs {
                for &(p, t) in &pairs {
                    for movement in Move::ALL {
                        if rng.random_bool(0.25) {
                            let amp = values[rng.random_range(0..values.len())];
                            entries.push((TransitionKey::new(q, s, p, t, movement), amp));
                        }
                    }
                }
            }
        }
        Family::Permutation(rule) => {
            let columns = permutation_columns(rng, n);
            from_unitary(columns, rule, rng);
        }
        Family::Haar(rule) => {
            let columns = haar_columns(rng, n, n);
            from_unitary(columns, rule, rng);
        }
        Family::Superposition(rule) => {
            let mut columns = permutation_columns(rng, n);
            if n >= 2 {
                let mut idx: Vec<usize> = (0..n).collect();
                idx.shuffle(rng);
                let (i, j) = (idx[0], idx[1]);
                let mix = haar_columns::<T, R>(rng, 2, 2);
                let (ci, cj) = (columns[i].clone(), columns[j].clone());
                for r in 0..n {
                    columns[i][r] = ci[r] * mix[0][0] + cj[r] * mix[0][1];
                    columns[j][r] = ci[r] * mix[1][0] + cj[r] * mix[1][1];
                }
            }
            from_unitary(columns, rule, rng);
        }
        Family::Isometry => {
            let columns = haar_columns::<T, R>(rng, 3 * n, n);
            for (src, column) in columns.iter().enumerate() {
                let (q, s) = pairs[src];
                for (slot, &amp) in column.iter().enumerate() {
                    let (p, t) = pairs[slot / 3];
                    entries.push((TransitionKey::new(q, s, p, t, Move::ALL[slot % 3]), amp));
                }
            }
        }
    }
    LocalTransitionFunction::new(spec, entries).expect("generated entries are in range")
}

fn permutation_columns<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<Complex<T>>> {
    let phases = unit_phases::<T>();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm.iter()
        .map(|&target| {
            let mut col = vec![Complex::default(); n];
            col[target] = phases[rng.random_range(0..phases.len())];
            col
        })
        .collect()
}

/// A labelled table from a reproducible suite.
#[derive(Clone, Debug)]
pub struct SampledMachine<T: Real> {
    pub label: String,
    pub family: Family,
    pub machine: LocalTransitionFunction<T>,
}

/// `count` tables with `|Q|, |Σ| ∈ {1, 2}`, cycling through `families`.
pub fn machine_suite<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    families: &[Family],
    count: usize,
) -> Vec<SampledMachine<T>> {
    (0..count)
        .map(|i| {
            let family = families[i % families.len()];
            let spec = small_spec(rng.random_range(1..=2), rng.random_range(1..=2));
            let machine = random_machine(rng, spec.clone(), family);
            SampledMachine {
                label: format!("#{i} {family:?} |Q|={} |Σ|={}", spec.processor_count(), spec.symbol_count()),
                family,
                machine,
            }
        })
        .collect()
}

/// A random configuration with head and non-blank cells in `-radius..=radius`.
pub fn random_configuration<R: Rng + ?Sized>(rng: &mut R, spec: &MachineSpec, radius: i64) -> Configuration {
    let processor = Processor(rng.random_range(0..spec.processor_count()) as u16);
    let mut tape = Tape::new(spec.blank());
    for cell in -radius..=radius {
        if rng.random_bool(0.5) {
            tape.set(cell, Symbol(rng.random_range(0..spec.symbol_count()) as u16));
        }
    }
    Configuration::new(processor, tape, rng.random_range(-radius..=radius))
}

/// A normalized superposition of up to `terms` random configurations with Gaussian amplitudes.
pub fn random_state<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    spec: Arc<MachineSpec>,
    terms: usize,
    radius: i64,
) -> QuantumState<T> {
    loop {
        let configs: Vec<(Configuration, Complex<T>)> = (0..terms.max(1))
            .map(|_| (random_configuration(rng, &spec, radius), gaussian(rng)))
            .collect();
        let state = QuantumState::from_terms(spec.clone(), configs).expect("configurations fit the spec");
        if !state.is_zero() {
            return state.normalized();
        }
    }
}

/// Orthonormal columns of length `first.len()` whose first column is `first` (normalized).
pub fn complete_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, first: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
    let len = first.len();
    let norm = first.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
    let mut basis: Vec<Vec<Complex<T>>> = vec![first.iter().map(|z| *z / norm).collect()];
    while basis.len() < len {
        let mut v: Vec<Complex<T>> = (0..len).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for u in &basis {
                let overlap: Complex<T> = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(u) {
                    *x -= overlap * y;
                }
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if n > T::lit(1e-6) {
            basis.push(v.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// A right-moving machine over `Q = {q0, qf}` and `Σ = {B, 1, …}` that halts after a random
/// number of steps.
///
/// Reading a blank in `q0`, it either writes `1` and stays in `q0`, or writes some `γ ∈ Γ` and
/// enters `q_f`, with random amplitudes; in `q_f` over a blank it keeps moving right. Every move
/// is `+1` and the remaining columns complete a random unitary, so the table is valid. Started
/// on a blank tape the running branch stays a single configuration and every halted branch runs
/// over blanks, so the halted part keeps its flag and slot string.
pub fn halting_machine<T: Real, R: Rng + ?Sized>(rng: &mut R, symbols: usize) -> LocalTransitionFunction<T> {
    assert!(symbols >= 2, "needs a non-blank symbol");
    let spec = small_spec(2, symbols);
    let (q0, qf, blank) = (spec.initial(), spec.halting(), spec.blank());
    let one = Symbol(1);
    // Every pair except (qf, B), whose column is fixed.
    let pairs: Vec<(Processor, Symbol)> = spec
        .processors()
        .flat_map(|q| spec.symbols().map(move |s| (q, s)))
        .filter(|&pair| pair != (qf, blank))
        .collect();
    let first: Vec<Complex<T>> = pairs
        .iter()
        .map(|&(p, t)| {
            let reachable = (p == q0 && t == one) || (p == qf && t != blank);
            if reachable {
                gaussian(rng)
            } else {
                Complex::default()
            }
        })
        .collect();
    let columns = complete_unitary(rng, &first);
    let sources: Vec<(Processor, Symbol)> = std::iter::once((q0, blank))
        .chain(pairs.iter().copied().filter(|&pair| pair != (q0, blank)))
        .collect();
    let mut entries = vec![(TransitionKey::new(qf, blank, qf, blank, Move::Right), Complex::new(T::one(), T::zero()))];
    for (&(q, s), column) in sources.iter().zip(&columns) {
        for (row, &amp) in column.iter().enumerate() {
            if amp.norm() > T::dust() {
                let (p, t) = pairs[row];
                entries.push((TransitionKey::new(q, s, p, t, Move::Right), amp));
            }
        }
    }
    LocalTransitionFunction::new(spec, entries).expect("generated entries are in range")
}
