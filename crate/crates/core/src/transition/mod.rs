//! Local transition functions `D(q, σ, q′, τ, d)` and the evolution operator they induce.

mod step;
mod validate;

pub use step::{apply_step, apply_step_adjoint, evolve, matrix_element};
pub use validate::{
    validate, ConditionReport, ValidationReport, Witness, WitnessIndex, DEFAULT_TOLERANCE,
};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{QtmError, Result};
use crate::machine::{MachineSpec, Processor, Symbol};
use crate::real::Real;

/// Head displacement of one computational step.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Move {
    Left,
    Stay,
    Right,
}

impl Move {
    pub const ALL: [Move; 3] = [Move::Left, Move::Stay, Move::Right];

    pub fn offset(self) -> i64 {
        match self {
            Move::Left => -1,
            Move::Stay => 0,
            Move::Right => 1,
        }
    }

    pub fn from_offset(offset: i64) -> Option<Self> {
        match offset {
            -1 => Some(Move::Left),
            0 => Some(Move::Stay),
            1 => Some(Move::Right),
            _ => None,
        }
    }

    pub(crate) fn slot(self) -> usize {
        (self.offset() + 1) as usize
    }
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.offset())
    }
}

/// Argument tuple `(q, σ, q′, τ, d)` of the local transition function.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct TransitionKey {
    pub state: Processor,
    pub read: Symbol,
    pub next: Processor,
    pub write: Symbol,
    pub movement: Move,
}

impl TransitionKey {
    pub fn new(state: Processor, read: Symbol, next: Processor, write: Symbol, movement: Move) -> Self {
        Self {
            state,
            read,
            next,
            write,
            movement,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Branch<T> {
    pub next: Processor,
    pub write: Symbol,
    pub movement: Move,
    pub amplitude: Complex<T>,
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Preimage<T> {
    pub state: Processor,
    pub read: Symbol,
    pub amplitude: Complex<T>,
}

/// `(q, σ, q′, τ, d, amplitude)` with symbols given by name.
pub type NamedEntry<'a, T> = (&'a str, &'a str, &'a str, &'a str, i64, Complex<T>);

/// A finite table of non-zero amplitudes; absent keys have amplitude zero.
///
/// Alongside the table, the branches leaving each `(q, σ)` and the preimages reaching each
/// `(q′, τ, d)` are indexed for the forward and adjoint step.
#[derive(Clone, Debug)]
pub struct LocalTransitionFunction<T: Real> {
    spec: Arc<MachineSpec>,
    entries: BTreeMap<TransitionKey, Complex<T>>,
    columns: Vec<Vec<Branch<T>>>,
    rows: Vec<Vec<Preimage<T>>>,
}

impl<T: Real> LocalTransitionFunction<T> {
    /// Builds the table, rejecting out-of-range symbols and repeated keys. Exact zeros are not stored.
    pub fn new(
        spec: Arc<MachineSpec>,
        entries: impl IntoIterator<Item = (TransitionKey, Complex<T>)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (key, amp) in entries {
            spec.check_processor(key.state)?;
            spec.check_processor(key.next)?;
            spec.check_symbol(key.read)?;
            spec.check_symbol(key.write)?;
            if !(amp.re.is_finite() && amp.im.is_finite()) {
                return Err(QtmError::InvalidSpec(format!("non-finite amplitude at {key:?}")));
            }
            if table.insert(key, amp).is_some() {
                return Err(QtmError::InvalidSpec(format!(
                    "duplicate transition ({}, {}, {}, {}, {})",
                    spec.processor_name(key.state),
                    spec.symbol_name(key.read),
                    spec.processor_name(key.next),
                    spec.symbol_name(key.write),
                    key.movement
                )));
            }
        }
        table.retain(|_, a: &mut Complex<T>| *a != Complex::default());

        let (nq, ns) = (spec.processor_count(), spec.symbol_count());
        let mut columns = vec![Vec::new(); nq * ns];
        let mut rows = vec![Vec::new(); nq * ns * 3];
        for (key, &amplitude) in &table {
            columns[key.state.index() * ns + key.read.index()].push(Branch {
                next: key.next,
                write: key.write,
                movement: key.movement,
                amplitude,
            });
            rows[(key.next.index() * ns + key.write.index()) * 3 + key.movement.slot()].push(
                Preimage {
                    state: key.state,
                    read: key.read,
                    amplitude,
                },
            );
        }
        Ok(Self {
            spec,
            entries: table,
            columns,
            rows,
        })
    }

    /// Builds a table from symbol names, `(q, σ, q′, τ, d, amplitude)`.
    pub fn from_named(
        spec: Arc<MachineSpec>,
        entries: &[NamedEntry<'_, T>],
    ) -> Result<Self> {
        let keys = entries
            .iter()
            .map(|&(q, s, p, t, d, amp)| {
                let movement = Move::from_offset(d)
                    .ok_or_else(|| QtmError::InvalidSpec(format!("head move {d} not in {{-1, 0, 1}}")))?;
                Ok((
                    TransitionKey::new(spec.processor(q)?, spec.symbol(s)?, spec.processor(p)?, spec.symbol(t)?, movement),
                    amp,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(spec, keys)
    }

    pub fn spec(&self) -> &Arc<MachineSpec> {
        &self.spec
    }

    /// `D(q, σ, q′, τ, d)`.
    pub fn amplitude(&self, key: &TransitionKey) -> Complex<T> {
        self.entries.get(key).copied().unwrap_or_default()
    }

    /// Non-zero entries in key order.
    pub fn entries(&self) -> impl Iterator<Item = (&TransitionKey, &Complex<T>)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The largest number of branches leaving a single `(q, σ)`.
    pub fn branching(&self) -> usize {
        self.columns.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub(crate) fn column(&self, state: Processor, read: Symbol) -> &[Branch<T>] {
        &self.columns[state.index() * self.spec.symbol_count() + read.index()]
    }

    pub(crate) fn preimages(&self, next: Processor, write: Symbol, movement: Move) -> &[Preimage<T>] {
        &self.rows[(next.index() * self.spec.symbol_count() + write.index()) * 3 + movement.slot()]
    }
}

impl<T: Real> PartialEq for LocalTransitionFunction<T> {
    fn eq(&self, other: &Self) -> bool {
        self.spec == other.spec && self.entries == other.entries
    }
}
