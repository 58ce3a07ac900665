//! Exact simulation and verification of quantum Turing machines.
//!
//! A machine is a set of processor and tape symbols ([`MachineSpec`]) plus a local transition
//! function ([`LocalTransitionFunction`]) giving the amplitude `D(q, σ, q′, τ, d)` to enter `q′`,
//! write `τ` and move the head by `d` after reading `σ` in `q`. States are finite superpositions
//! of configurations `(q, T, ξ)` over a bi-infinite tape.
//!
//! The crate provides:
//!
//! * [`transition::validate`], which decides whether `D` induces a unitary step by checking
//!   four finite conditions on the table;
//! * [`oracle`], an independent dense-matrix check on a cyclic tape;
//! * exact forward and adjoint evolution ([`transition::apply_step`],
//!   [`transition::apply_step_adjoint`]);
//! * projective measurement of the computational-basis observables ([`measurement`]);
//! * the halt-flag protocol, computed exactly and by sampling ([`halting`]).
//!
//! Everything is generic over the real scalar type ([`Real`], implemented for `f32` and `f64`);
//! the aliases at the crate root fix it to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codec;
pub mod config;
pub mod error;
pub mod gallery;
pub mod halting;
pub mod machine;
pub mod measurement;
pub mod oracle;
pub mod random;
pub mod real;
pub mod state;
pub mod tape;
pub mod transition;

pub use codec::{DataSlot, GammaString};
pub use config::Configuration;
pub use error::{QtmError, Result};
pub use machine::{MachineSpec, Processor, Symbol};
pub use measurement::{ObservableKind, Outcome, Projector};
pub use real::Real;
pub use tape::Tape;
pub use transition::{LocalTransitionFunction, Move, TransitionKey};

pub use num_complex::Complex;

/// Double-precision amplitude.
pub type Amplitude = Complex<f64>;
/// Double-precision state.
pub type State = state::QuantumState<f64>;
/// Double-precision transition table.
pub type Transition = LocalTransitionFunction<f64>;
pub type Report = transition::ValidationReport<f64>;
pub type Distribution = halting::OutputDistribution<f64>;
pub type Comparison = halting::ProtocolComparison<f64>;
pub type Matrix = oracle::DenseMatrix<f64>;

/// Single-precision variants.
pub type State32 = state::QuantumState<f32>;
pub type Transition32 = LocalTransitionFunction<f32>;

pub use state::QuantumState;
