use num_complex::Complex;

use super::{LocalTransitionFunction, Move, TransitionKey};
use crate::config::Configuration;
use crate::error::{QtmError, Result};
use crate::real::Real;
use crate::state::{same_spec, QuantumState};

fn check_spec<T: Real>(d_fn: &LocalTransitionFunction<T>, state: &QuantumState<T>) -> Result<()> {
    if same_spec(d_fn.spec(), state.spec()) {
        Ok(())
    } else {
        Err(QtmError::SpecMismatch)
    }
}

fn shifted(head: i64, movement: Move) -> Result<i64> {
    head.checked_add(movement.offset())
        .ok_or(QtmError::HeadOverflow(head))
}

/// `⟨to|U|from⟩`: zero unless the tapes agree away from the source head cell and the head moves
/// by at most one cell, otherwise the `D` entry selected by the displacement.
pub fn matrix_element<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    to: &Configuration,
    from: &Configuration,
) -> Complex<T> {
    let Some(movement) = to
        .head
        .checked_sub(from.head)
        .and_then(Move::from_offset)
    else {
        return Complex::default();
    };
    let written = to.tape.read(from.head);
    let mut expected = from.tape.clone();
    expected.set(from.head, written);
    if expected != to.tape {
        return Complex::default();
    }
    d_fn.amplitude(&TransitionKey::new(
        from.processor,
        from.tape.read(from.head),
        to.processor,
        written,
        movement,
    ))
}

/// One computational step: `U|q, T, ξ⟩ = Σ D(q, T(ξ), p, τ, d) |p, T^τ_ξ, ξ + d⟩`, extended linearly.
pub fn apply_step<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    state: &QuantumState<T>,
) -> Result<QuantumState<T>> {
    check_spec(d_fn, state)?;
    let mut out = QuantumState::zero(state.spec().clone());
    for (config, &amp) in state.iter() {
        let read = config.tape.read(config.head);
        for branch in d_fn.column(config.processor, read) {
            let mut tape = config.tape.clone();
            tape.set(config.head, branch.write);
            let head = shifted(config.head, branch.movement)?;
            out.accumulate(
                Configuration::new(branch.next, tape, head),
                amp * branch.amplitude,
            );
        }
    }
    out.prune();
    Ok(out)
}

/// `U†`: every target `(p, T′, ξ′)` pulls back to the sources `(q, T′^σ_{ξ′−d}, ξ′ − d)` whose
/// branch wrote `T′(ξ′ − d)` and moved by `d`.
pub fn apply_step_adjoint<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    state: &QuantumState<T>,
) -> Result<QuantumState<T>> {
    check_spec(d_fn, state)?;
    let mut out = QuantumState::zero(state.spec().clone());
    for (config, &amp) in state.iter() {
        for movement in Move::ALL {
            let source_head = config
                .head
                .checked_sub(movement.offset())
                .ok_or(QtmError::HeadOverflow(config.head))?;
            let written = config.tape.read(source_head);
            for pre in d_fn.preimages(config.processor, written, movement) {
                let mut tape = config.tape.clone();
                tape.set(source_head, pre.read);
                out.accumulate(
                    Configuration::new(pre.state, tape, source_head),
                    pre.amplitude.conj() * amp,
                );
            }
        }
    }
    out.prune();
    Ok(out)
}

/// `U^steps ψ`.
pub fn evolve<T: Real>(
    d_fn: &LocalTransitionFunction<T>,
    state: &QuantumState<T>,
    steps: usize,
) -> Result<QuantumState<T>> {
    check_spec(d_fn, state)?;
    let mut current = state.clone();
    for _ in 0..steps {
        current = apply_step(d_fn, &current)?;
    }
    Ok(current)
}
