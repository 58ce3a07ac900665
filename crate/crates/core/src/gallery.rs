//! Small hand-built machines with known behaviour.

use std::sync::Arc;

use num_complex::Complex;

use crate::machine::MachineSpec;
use crate::real::Real;
use crate::transition::{LocalTransitionFunction, NamedEntry};

fn build<T: Real>(
    processors: &[&str],
    initial: &str,
    halting: &str,
    symbols: &[&str],
    entries: &[NamedEntry<'_, T>],
) -> LocalTransitionFunction<T> {
    let spec = MachineSpec::new(processors.iter().copied(), initial, halting, symbols.iter().copied(), "B")
        .expect("gallery spec");
    LocalTransitionFunction::from_named(Arc::new(spec), entries).expect("gallery table")
}

fn one<T: Real>() -> Complex<T> {
    Complex::new(T::one(), T::zero())
}

fn root_half<T: Real>() -> Complex<T> {
    Complex::new(T::FRAC_1_SQRT_2(), T::zero())
}

/// `D(q, B, q, B, 0) = 1` on a single processor symbol and the blank.
pub fn identity<T: Real>() -> LocalTransitionFunction<T> {
    build(&["q"], "q", "q", &["B"], &[("q", "B", "q", "B", 0, one())])
}

/// `D(q, B, q, B, +1) = 1`.
pub fn right_mover<T: Real>() -> LocalTransitionFunction<T> {
    build(&["q"], "q", "q", &["B"], &[("q", "B", "q", "B", 1, one())])
}

/// Flips every cell it passes while moving right.
pub fn not_machine<T: Real>() -> LocalTransitionFunction<T> {
    build(
        &["q"],
        "q",
        "q",
        &["B", "1"],
        &[("q", "B", "q", "1", 1, one()), ("q", "1", "q", "B", 1, one())],
    )
}

/// Moves left and right in equal superposition; violates condition (c) only.
pub fn head_splitter<T: Real>() -> LocalTransitionFunction<T> {
    build(
        &["q"],
        "q",
        "q",
        &["B"],
        &[("q", "B", "q", "B", 1, root_half()), ("q", "B", "q", "B", -1, root_half())],
    )
}

/// Stays and moves right in equal superposition; violates condition (d) only.
pub fn stay_right_splitter<T: Real>() -> LocalTransitionFunction<T> {
    build(
        &["q"],
        "q",
        "q",
        &["B"],
        &[("q", "B", "q", "B", 0, root_half()), ("q", "B", "q", "B", 1, root_half())],
    )
}

/// Writes `1`, enters `q_f`, and then runs right over blanks.
pub fn write_one_and_halt<T: Real>() -> LocalTransitionFunction<T> {
    build(
        &["q0", "qf"],
        "q0",
        "qf",
        &["B", "1"],
        &[
            ("q0", "B", "qf", "1", 1, one()),
            ("q0", "1", "q0", "1", 1, one()),
            ("qf", "B", "qf", "B", 1, one()),
            ("qf", "1", "q0", "B", 1, one()),
        ],
    )
}

/// Writes `a` or `b` with equal amplitude and halts.
pub fn coin<T: Real>() -> LocalTransitionFunction<T> {
    let h = root_half::<T>();
    build(
        &["q0", "qf"],
        "q0",
        "qf",
        &["B", "a", "b"],
        &[
            ("q0", "B", "qf", "a", 1, h),
            ("q0", "B", "qf", "b", 1, h),
            ("q0", "a", "q0", "a", 1, one()),
            ("q0", "b", "q0", "b", 1, one()),
            ("qf", "B", "qf", "B", 1, one()),
            ("qf", "a", "qf", "a", 1, h),
            ("qf", "a", "qf", "b", 1, -h),
            ("qf", "b", "q0", "B", 1, one()),
        ],
    )
}

/// A Hadamard on the processor while moving right: unitary, but the halted branch leaks back
/// into `q₀`.
pub fn processor_hadamard<T: Real>() -> LocalTransitionFunction<T> {
    let h = root_half::<T>();
    build(
        &["q0", "qf"],
        "q0",
        "qf",
        &["B"],
        &[
            ("q0", "B", "q0", "B", 1, h),
            ("q0", "B", "qf", "B", 1, h),
            ("qf", "B", "q0", "B", 1, h),
            ("qf", "B", "qf", "B", 1, -h),
        ],
    )
}

/// Two processor symbols, but `q_f` is never entered.
pub fn never_halting<T: Real>() -> LocalTransitionFunction<T> {
    build(
        &["q0", "qf"],
        "q0",
        "qf",
        &["B"],
        &[("q0", "B", "q0", "B", 1, one()), ("qf", "B", "qf", "B", 1, one())],
    )
}

/// `(name, machine)` for the eight reference machines.
pub fn all<T: Real>() -> Vec<(&'static str, LocalTransitionFunction<T>)> {
    vec![
        ("identity", identity()),
        ("right-mover", right_mover()),
        ("not-machine", not_machine()),
        ("head-splitter", head_splitter()),
        ("stay-right-splitter", stay_right_splitter()),
        ("write-one-and-halt", write_one_and_halt()),
        ("coin", coin()),
        ("processor-hadamard", processor_hadamard()),
    ]
}
