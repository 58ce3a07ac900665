use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qtm_core::halting::{ComparisonVerdict, HaltingProtocol, OutputDistribution};
use qtm_core::oracle::certify;
use qtm_core::transition::{evolve, validate, ConditionReport, WitnessIndex};
use qtm_core::{Configuration, GammaString, MachineSpec, QuantumState, Report};
use serde_json::{json, Value};

use crate::format::{complex, quoted, real};
use crate::machine_file::Machine;
use crate::{CliError, Command, Common, Start};
use crate::{EXIT_DISAGREEMENT, EXIT_NOT_STATIONARY, EXIT_OK, EXIT_VIOLATION};

/// Configurations listed in a `run` report before the listing is cut short.
const SHOWN_CONFIGURATIONS: usize = 32;

pub(crate) fn execute(command: &Command) -> Result<(i32, String), CliError> {
    match command {
        Command::Validate { common, tolerance } => cmd_validate(common, *tolerance),
        Command::Run { common, start, seed } => cmd_run(common, start, *seed),
        Command::CompareHalting { common, start, tolerance } => cmd_compare(common, start, *tolerance),
        Command::Oracle { common, cells, tolerance } => cmd_oracle(common, *cells, *tolerance),
    }
}

fn load(path: &Path) -> Result<(String, Machine), CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let machine = Machine::parse(&text)?;
    let name = machine.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });
    Ok((name, machine))
}

fn emit(json: bool, value: Value, text: String) -> String {
    if json {
        let mut out = serde_json::to_string_pretty(&value).expect("reports serialize");
        out.push('\n');
        out
    } else {
        text
    }
}

fn witness_label(spec: &MachineSpec, index: &WitnessIndex) -> String {
    let q = |p| spec.processor_name(p);
    let s = |x| spec.symbol_name(x);
    match *index {
        WitnessIndex::Column(p, a) => format!("({}, {})", q(p), s(a)),
        WitnessIndex::ColumnPair((p, a), (p2, a2)) => {
            format!("(({}, {}), ({}, {}))", q(p), s(a), q(p2), s(a2))
        }
        WitnessIndex::WritePair((p, a, t), (p2, a2, t2)) => format!(
            "(({}, {}, {}), ({}, {}, {}))",
            q(p),
            s(a),
            s(t),
            q(p2),
            s(a2),
            s(t2)
        ),
    }
}

fn witness_json(spec: &MachineSpec, index: &WitnessIndex) -> Value {
    let q = |p| spec.processor_name(p);
    let s = |x| spec.symbol_name(x);
    match *index {
        WitnessIndex::Column(p, a) => json!([[q(p), s(a)]]),
        WitnessIndex::ColumnPair((p, a), (p2, a2)) => json!([[q(p), s(a)], [q(p2), s(a2)]]),
        WitnessIndex::WritePair((p, a, t), (p2, a2, t2)) => {
            json!([[q(p), s(a), s(t)], [q(p2), s(a2), s(t2)]])
        }
    }
}

fn verdict_word(unitary: bool) -> &'static str {
    if unitary {
        "UNITARY"
    } else {
        "NOT UNITARY"
    }
}

fn condition_json(spec: &MachineSpec, c: &ConditionReport<f64>) -> Value {
    json!({
        "passed": c.passed,
        "max_residual": c.max_residual,
        "witnesses": c.witnesses.iter().map(|w| json!({
            "index": witness_json(spec, &w.index),
            "residual": w.residual,
        })).collect::<Vec<_>>(),
    })
}

fn validation_text(out: &mut String, spec: &MachineSpec, report: &Report) {
    for (label, c) in report.conditions() {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "condition ({label}): {status} (max residual {})", real(c.max_residual));
        for w in &c.witnesses {
            let _ = writeln!(out, "  witness {}: residual {}", witness_label(spec, &w.index), real(w.residual));
        }
    }
}

fn failed_list(report: &Report) -> String {
    report
        .failed_conditions()
        .iter()
        .map(|c| format!("({c})"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn cmd_validate(common: &Common, tolerance: f64) -> Result<(i32, String), CliError> {
    let (name, machine) = load(&common.machine)?;
    let spec = machine.spec();
    let report = validate(&machine.transition, tolerance)?;
    let unitary = report.passed();

    let mut text = String::new();
    let _ = writeln!(text, "machine: {name}");
    let _ = writeln!(text, "tolerance: {tolerance:e}");
    validation_text(&mut text, spec, &report);
    if unitary {
        let _ = writeln!(text, "result: UNITARY");
    } else {
        let _ = writeln!(text, "result: NOT UNITARY, conditions {} fail", failed_list(&report));
    }
    let value = json!({
        "machine": name,
        "tolerance": tolerance,
        "conditions": {
            "a": condition_json(spec, &report.condition_a),
            "b": condition_json(spec, &report.condition_b),
            "c": condition_json(spec, &report.condition_c),
            "d": condition_json(spec, &report.condition_d),
        },
        "unitary": unitary,
    });
    let code = if unitary { EXIT_OK } else { EXIT_VIOLATION };
    Ok((code, emit(common.json, value, text)))
}

/// Refuses to simulate a table that fails validation.
fn require_unitary(common: &Common, name: &str, machine: &Machine) -> Result<Option<(i32, String)>, CliError> {
    let report = validate(&machine.transition, qtm_core::transition::DEFAULT_TOLERANCE)?;
    if report.passed() {
        return Ok(None);
    }
    let mut text = String::new();
    let _ = writeln!(text, "machine: {name}");
    let _ = writeln!(text, "error: not unitary, conditions {} fail; nothing was run", failed_list(&report));
    let value = json!({
        "machine": name,
        "unitary": false,
        "failed_conditions": report.failed_conditions().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    });
    Ok(Some((EXIT_VIOLATION, emit(common.json, value, text))))
}

fn initial_configuration(machine: &Machine, input: &str) -> Result<(GammaString, Configuration), CliError> {
    let spec = machine.spec();
    let x = GammaString::parse(spec, input)?;
    let tape = machine.slot.encode(spec, &x);
    Ok((x, Configuration::new(spec.initial(), tape, 0)))
}

fn distribution_json(spec: &MachineSpec, d: &OutputDistribution<f64>) -> Value {
    let probabilities: Vec<Value> = d
        .probabilities
        .iter()
        .map(|(x, p)| json!({ "output": x.display(spec).to_string(), "probability": p }))
        .collect();
    json!({ "outputs": probabilities, "not_halted": d.residual })
}

fn cmd_run(common: &Common, start: &Start, seed: Option<u64>) -> Result<(i32, String), CliError> {
    let (name, machine) = load(&common.machine)?;
    if let Some(refusal) = require_unitary(common, &name, &machine)? {
        return Ok(refusal);
    }
    let spec = machine.spec();
    let (x, initial) = initial_configuration(&machine, &start.input)?;
    let protocol = HaltingProtocol::new(&machine.transition, machine.slot);

    let mut text = String::new();
    let _ = writeln!(text, "machine: {name}");
    let _ = writeln!(text, "input: {}", quoted(spec, &x));

    if let Some(seed) = seed {
        let result = protocol.run_sampled(&initial, start.steps, seed)?;
        let _ = writeln!(text, "seed: {seed}");
        let _ = writeln!(text, "budget: {}", start.steps);
        let trace: String = result.trace.iter().map(|&h| if h { '1' } else { '0' }).collect();
        let _ = writeln!(text, "halt flag trace: {trace}");
        match (&result.output, result.halt_step) {
            (Some(output), Some(step)) => {
                let _ = writeln!(text, "halted: yes");
                let _ = writeln!(text, "halt step: {step}");
                let _ = writeln!(text, "output: {}", quoted(spec, output));
            }
            _ => {
                let _ = writeln!(text, "halted: no");
            }
        }
        let value = json!({
            "machine": name,
            "input": x.display(spec).to_string(),
            "seed": seed,
            "budget": start.steps,
            "halted": result.halted,
            "halt_step": result.halt_step,
            "output": result.output.as_ref().map(|o| o.display(spec).to_string()),
            "trace": result.trace,
        });
        return Ok((EXIT_OK, emit(common.json, value, text)));
    }

    let psi = QuantumState::basis(spec.clone(), initial.clone())?;
    let state = evolve(&machine.transition, &psi, start.steps)?;
    let dist = protocol.unmonitored(&initial, start.steps)?;
    let sorted = state.sorted();

    let _ = writeln!(text, "steps: {}", start.steps);
    let _ = writeln!(text, "support: {} configurations", state.support_len());
    let _ = writeln!(text, "norm: {}", real(state.norm()));
    let _ = writeln!(text, "state:");
    for (config, amp) in sorted.iter().take(SHOWN_CONFIGURATIONS) {
        let _ = writeln!(text, "  {:>20}  {}", complex(*amp), config.display(spec));
    }
    if sorted.len() > SHOWN_CONFIGURATIONS {
        let _ = writeln!(text, "  ... {} more", sorted.len() - SHOWN_CONFIGURATIONS);
    }
    let _ = writeln!(text, "output distribution after {} steps:", start.steps);
    for (x, p) in &dist.probabilities {
        let _ = writeln!(text, "  {:<16} {}", quoted(spec, x), real(*p));
    }
    let _ = writeln!(text, "  {:<16} {}", "not halted", real(dist.residual));

    let value = json!({
        "machine": name,
        "input": x.display(spec).to_string(),
        "steps": start.steps,
        "support": state.support_len(),
        "norm": state.norm(),
        "state": sorted.iter().take(SHOWN_CONFIGURATIONS).map(|(c, a)| json!({
            "configuration": c.display(spec).to_string(),
            "amplitude": [a.re, a.im],
        })).collect::<Vec<_>>(),
        "distribution": distribution_json(spec, &dist),
    });
    Ok((EXIT_OK, emit(common.json, value, text)))
}

fn cmd_compare(common: &Common, start: &Start, tolerance: f64) -> Result<(i32, String), CliError> {
    let (name, machine) = load(&common.machine)?;
    if let Some(refusal) = require_unitary(common, &name, &machine)? {
        return Ok(refusal);
    }
    let spec = machine.spec();
    let (x, initial) = initial_configuration(&machine, &start.input)?;
    let protocol = HaltingProtocol::new(&machine.transition, machine.slot);
    let cmp = protocol.compare(&initial, start.steps, tolerance)?;
    let st = &cmp.stationarity;

    let mut text = String::new();
    let _ = writeln!(text, "machine: {name}");
    let _ = writeln!(text, "input: {}", quoted(spec, &x));
    let _ = writeln!(text, "steps: {}", start.steps);
    let _ = writeln!(text, "tolerance: {tolerance:e}");
    if st.satisfied {
        let _ = writeln!(
            text,
            "stationarity: satisfied on the trajectory, t < {} (max deviation {})",
            st.steps_checked,
            real(st.max_deviation)
        );
    } else {
        let _ = writeln!(text, "stationarity: VIOLATED at {} (step, output) pairs", st.violations.len());
        for v in &st.violations {
            let _ = writeln!(text, "  t={} output {}: deviation {}", v.step, quoted(spec, &v.output), real(v.deviation));
        }
    }
    let halts: Vec<String> = cmp
        .monitored
        .halt_mass_by_step
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0.0)
        .map(|(k, &m)| format!("K={k}: {}", real(m)))
        .collect();
    let _ = writeln!(text, "monitored halt mass by step: {}", if halts.is_empty() { "none".to_string() } else { halts.join(", ") });
    let _ = writeln!(text, "{:<16} {:>16} {:>16} {:>16}", "output", "monitored", "unmonitored", "difference");
    for (x, diff) in &cmp.differences {
        let _ = writeln!(
            text,
            "{:<16} {:>16} {:>16} {:>16}",
            quoted(spec, x),
            real(cmp.monitored.probability(x)),
            real(cmp.unmonitored.probability(x)),
            real(*diff)
        );
    }
    let _ = writeln!(
        text,
        "{:<16} {:>16} {:>16} {:>16}",
        "not halted",
        real(cmp.monitored.residual),
        real(cmp.unmonitored.residual),
        real(cmp.residual_difference)
    );
    let _ = writeln!(text, "max difference: {}", real(cmp.max_difference));
    let (verdict, code) = match cmp.verdict {
        ComparisonVerdict::Agree => ("AGREE", EXIT_OK),
        ComparisonVerdict::Disagree => ("DISAGREE (theorem violated)", EXIT_VIOLATION),
        ComparisonVerdict::StationarityViolated => ("NO VERDICT (stationarity fails)", EXIT_NOT_STATIONARY),
    };
    let _ = writeln!(text, "verdict: {verdict}");

    let value = json!({
        "machine": name,
        "input": x.display(spec).to_string(),
        "steps": start.steps,
        "tolerance": tolerance,
        "stationarity": {
            "satisfied": st.satisfied,
            "max_deviation": st.max_deviation,
            "violations": st.violations.iter().map(|v| json!({
                "step": v.step,
                "output": v.output.display(spec).to_string(),
                "deviation": v.deviation,
            })).collect::<Vec<_>>(),
        },
        "monitored": distribution_json(spec, &cmp.monitored),
        "monitored_halt_mass_by_step": cmp.monitored.halt_mass_by_step,
        "unmonitored": distribution_json(spec, &cmp.unmonitored),
        "max_difference": cmp.max_difference,
        "residual_difference": cmp.residual_difference,
        "verdict": match cmp.verdict {
            ComparisonVerdict::Agree => "agree",
            ComparisonVerdict::Disagree => "disagree",
            ComparisonVerdict::StationarityViolated => "stationarity-violated",
        },
    });
    Ok((code, emit(common.json, value, text)))
}

fn cmd_oracle(common: &Common, cells: usize, tolerance: f64) -> Result<(i32, String), CliError> {
    let (name, machine) = load(&common.machine)?;
    let verdict = certify(&machine.transition, cells, tolerance)?;
    let validator = validate(&machine.transition, tolerance)?.passed();
    let agree = verdict.unitary == validator;

    let mut text = String::new();
    let _ = writeln!(text, "machine: {name}");
    let _ = writeln!(text, "cells: {cells}");
    let _ = writeln!(text, "dimension: {}", verdict.dimension);
    let _ = writeln!(text, "tolerance: {tolerance:e}");
    let _ = writeln!(
        text,
        "oracle: {} (max deviation {})",
        verdict_word(verdict.unitary),
        real(verdict.deviation)
    );
    let _ = writeln!(text, "validator: {}", verdict_word(validator));
    let _ = writeln!(text, "{}", if agree { "AGREE" } else { "DISAGREE" });

    let value = json!({
        "machine": name,
        "cells": cells,
        "dimension": verdict.dimension,
        "tolerance": tolerance,
        "oracle_unitary": verdict.unitary,
        "deviation": verdict.deviation,
        "validator_unitary": validator,
        "agree": agree,
    });
    let code = if agree { EXIT_OK } else { EXIT_DISAGREEMENT };
    Ok((code, emit(common.json, value, text)))
}
