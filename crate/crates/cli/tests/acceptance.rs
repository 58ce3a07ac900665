//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use qtm_core::codec::DataSlot;
use qtm_core::halting::HaltingProtocol;
use qtm_core::oracle::certify;
use qtm_core::random::{halting_machine, machine_suite, random_state, Family};
use qtm_core::transition::{apply_step, apply_step_adjoint, validate};
use qtm_core::{gallery, Configuration, GammaString, MachineSpec, State, Tape, Transition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SUITE_SEED: u64 = 1;
const SUITE_SIZE: usize = 1000;
const VALIDATOR_TOLERANCE: f64 = 1e-9;
const RESIDUAL_TOLERANCE: f64 = 1e-12;
const DYNAMICS_TOLERANCE: f64 = 1e-10;
const DISTRIBUTION_TOLERANCE: f64 = 1e-10;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Verdict {
    Verdict { passed, detail: detail.into() }
}

fn suite() -> Vec<(String, Transition)> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut machines: Vec<(String, Transition)> = machine_suite(&mut rng, &Family::ALL, SUITE_SIZE)
        .into_iter()
        .map(|s| (s.label, s.machine))
        .collect();
    machines.extend(gallery::all().into_iter().map(|(n, m)| (n.to_string(), m)));
    machines
}

fn is_valid(d_fn: &Transition) -> bool {
    validate(d_fn, VALIDATOR_TOLERANCE).unwrap().passed()
}

/// Support stays polynomial in the step count: one branch per column, or a blank-only tape.
fn bounded_growth(d_fn: &Transition) -> bool {
    d_fn.spec().symbol_count() == 1 || d_fn.branching() == 1
}

fn blank_start(d_fn: &Transition) -> Configuration {
    let spec = d_fn.spec();
    Configuration::new(spec.initial(), Tape::new(spec.blank()), 0)
}

fn equivalence() -> Verdict {
    let start = Instant::now();
    let machines = suite();
    let mut unitary = 0;
    let mut disagreements = Vec::new();
    for (label, d_fn) in &machines {
        let valid = is_valid(d_fn);
        let oracle = certify(d_fn, 4, VALIDATOR_TOLERANCE).unwrap();
        unitary += valid as usize;
        if oracle.unitary != valid {
            disagreements.push(format!("{label} (validator {valid}, oracle deviation {:e})", oracle.deviation));
        }
    }
    let elapsed = start.elapsed();
    let detail = format!(
        "{} tables, {unitary} unitary, {} disagreements at N=4, {:.1} s{}",
        machines.len(),
        disagreements.len(),
        elapsed.as_secs_f64(),
        disagreements.first().map(|d| format!("; first: {d}")).unwrap_or_default()
    );
    verdict(disagreements.is_empty() && elapsed <= Duration::from_secs(60), detail)
}

fn isolation() -> Verdict {
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, d_fn, expected) in [
        ("head-splitter", gallery::head_splitter::<f64>(), 'c'),
        ("stay-right-splitter", gallery::stay_right_splitter(), 'd'),
    ] {
        let report = validate(&d_fn, VALIDATOR_TOLERANCE).unwrap();
        let failed = report.failed_conditions();
        let residual = report
            .conditions()
            .iter()
            .find(|(l, _)| *l == expected)
            .map(|(_, c)| c.max_residual)
            .unwrap();
        let oracle_rejects = !certify(&d_fn, 4, VALIDATOR_TOLERANCE).unwrap().unitary;
        ok &= failed == vec![expected] && (residual - 0.5).abs() <= RESIDUAL_TOLERANCE && oracle_rejects;
        parts.push(format!(
            "{name} fails {failed:?} residual {residual}, oracle rejects: {oracle_rejects}"
        ));
    }
    verdict(ok, parts.join("; "))
}

fn dynamics() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 1);
    let valid: Vec<(String, Transition)> = suite().into_iter().filter(|(_, m)| is_valid(m)).collect();
    let (mut bounded, mut branching) = (0, 0);
    let mut worst_norm = 0.0f64;
    let mut worst_adjoint = 0.0f64;
    for (_, d_fn) in &valid {
        let steps = if bounded_growth(d_fn) {
            bounded += 1;
            20
        } else {
            branching += 1;
            10
        };
        for _ in 0..10 {
            let psi: State = random_state(&mut rng, d_fn.spec().clone(), 3, 2);
            let back = apply_step_adjoint(d_fn, &apply_step(d_fn, &psi).unwrap()).unwrap();
            worst_adjoint = worst_adjoint.max(back.distance(&psi).unwrap());
            let mut phi = psi;
            for _ in 0..steps {
                phi = apply_step(d_fn, &phi).unwrap();
                worst_norm = worst_norm.max((phi.norm() - 1.0).abs());
            }
        }
    }
    let detail = format!(
        "{} unitary tables x 10 states: {bounded} bounded-growth to t=20, {branching} branching to t=10; \
         max |norm-1| {worst_norm:.1e}, max adjoint round-trip {worst_adjoint:.1e}",
        valid.len()
    );
    verdict(worst_norm <= DYNAMICS_TOLERANCE && worst_adjoint <= DYNAMICS_TOLERANCE, detail)
}

fn halting_theorem() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut candidates: Vec<(String, Transition)> = machine_suite(&mut rng, &Family::ALL, SUITE_SIZE)
        .into_iter()
        .filter(|s| is_valid(&s.machine) && bounded_growth(&s.machine))
        .map(|s| (s.label, s.machine))
        .collect();
    candidates.extend(
        gallery::all()
            .into_iter()
            .chain([("never-halting", gallery::never_halting())])
            .filter(|(_, m)| is_valid(m))
            .map(|(n, m)| (n.to_string(), m)),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED + 2);
    for i in 0..20 {
        candidates.push((format!("halting-family #{i}"), halting_machine(&mut rng, 2 + i % 3)));
    }

    let mut checked = Vec::new();
    let mut worst_diff = 0.0f64;
    let mut worst_lemma = 0.0f64;
    let mut failures = Vec::new();
    for (label, d_fn) in &candidates {
        let protocol = HaltingProtocol::new(d_fn, DataSlot::IDENTITY);
        let c = blank_start(d_fn);
        if !protocol.check_stationarity(&c, 20, DISTRIBUTION_TOLERANCE).unwrap().satisfied {
            continue;
        }
        checked.push(label.clone());
        for n in 0..=20 {
            let mon = protocol.monitored(&c, n).unwrap();
            let un = protocol.unmonitored(&c, n).unwrap();
            let outputs = mon.probabilities.keys().chain(un.probabilities.keys());
            let diff = outputs
                .map(|x| (mon.probability(x) - un.probability(x)).abs())
                .fold((mon.residual - un.residual).abs(), f64::max);
            worst_diff = worst_diff.max(diff);
            if diff > DISTRIBUTION_TOLERANCE {
                failures.push(format!("{label} N={n} difference {diff:e}"));
            }
        }
        let lemmas = protocol.lemma_residuals(&c, 20).unwrap();
        worst_lemma = worst_lemma
            .max(lemmas.max_single_step_residual)
            .max(lemmas.max_orthogonality_residual);
    }
    let missing: Vec<&String> = candidates
        .iter()
        .map(|(label, _)| label)
        .filter(|l| *l == "write-one-and-halt" || *l == "coin" || l.starts_with("halting-family"))
        .filter(|l| !checked.contains(l))
        .collect();
    let elapsed = start.elapsed();
    let detail = format!(
        "{} stationary machines of {} candidates, N=0..20; max difference {worst_diff:.1e}, max lemma residual \
         {worst_lemma:.1e}, {:.1} s{}{}",
        checked.len(),
        candidates.len(),
        elapsed.as_secs_f64(),
        if missing.is_empty() { String::new() } else { format!("; not stationary: {missing:?}") },
        failures.first().map(|f| format!("; first failure: {f}")).unwrap_or_default()
    );
    let ok = failures.is_empty()
        && missing.is_empty()
        && worst_lemma <= DISTRIBUTION_TOLERANCE
        && elapsed <= Duration::from_secs(30);
    verdict(ok, detail)
}

fn negative_control() -> Verdict {
    let d_fn = gallery::processor_hadamard::<f64>();
    let protocol = HaltingProtocol::new(&d_fn, DataSlot::IDENTITY);
    let c = blank_start(&d_fn);
    let report = protocol.check_stationarity(&c, 3, DISTRIBUTION_TOLERANCE).unwrap();
    let first = report.violations.first().map_or("none".to_string(), |v| v.step.to_string());
    let cmp = protocol.compare(&c, 2, DISTRIBUTION_TOLERANCE).unwrap();
    let gap = cmp.max_difference;
    verdict(
        !report.satisfied && first == "1" && gap >= 0.2,
        format!("first stationarity violation at t={first}, monitored vs unmonitored gap at N=2: {gap}"),
    )
}

fn codec() -> Verdict {
    let spec = MachineSpec::new(["q"], "q", "q", ["B", "a", "b"], "B").unwrap();
    let strings = GammaString::enumerate(&spec, 8);
    let slots = [DataSlot::IDENTITY, DataSlot::new(0, 2).unwrap()];
    let failures = slots
        .iter()
        .flat_map(|slot| strings.iter().map(move |x| (slot, x)))
        .filter(|(slot, x)| &slot.decode(&slot.encode(&spec, x)) != *x)
        .count();
    verdict(
        strings.len() == 511 && failures == 0,
        format!("{} strings x {} slots, {failures} round-trip failures", strings.len(), slots.len()),
    )
}

fn sampling() -> Verdict {
    let d_fn = gallery::coin::<f64>();
    let protocol = HaltingProtocol::new(&d_fn, DataSlot::IDENTITY);
    let c = blank_start(&d_fn);
    let a = GammaString::parse(d_fn.spec(), "a").unwrap();
    let runs = 10_000u64;
    let hits = (0..runs)
        .filter(|&seed| protocol.run_sampled(&c, 20, seed).unwrap().output.as_ref() == Some(&a))
        .count();
    let frequency = hits as f64 / runs as f64;
    let exact = protocol.monitored(&c, 20).unwrap().probability(&a);
    verdict(
        (frequency - 0.5).abs() <= 0.02 && (frequency - exact).abs() <= 0.02,
        format!("frequency of \"a\" over {runs} seeds: {frequency}, monitored probability {exact}"),
    )
}

fn cli_contract() -> Verdict {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let machine = |name: &str| -> PathBuf { root.join("../../machines").join(format!("{name}.json")) };
    let cases: &[(&str, &[&str], i32)] = &[
        ("validate-identity", &["validate", "identity"], 0),
        ("validate-not-machine", &["validate", "not-machine"], 0),
        ("validate-head-splitter", &["validate", "head-splitter"], 2),
        ("validate-stay-right-splitter", &["validate", "stay-right-splitter"], 2),
        ("validate-coin-json", &["validate", "coin", "--json"], 0),
        ("run-write-one", &["run", "write-one-and-halt", "--steps", "5"], 0),
        ("run-coin", &["run", "coin", "--steps", "3"], 0),
        ("run-coin-seed-7", &["run", "coin", "--seed", "7"], 0),
        ("run-coin-seed-7-json", &["run", "coin", "--seed", "7", "--json"], 0),
        ("run-never-halting-seed", &["run", "never-halting", "--steps", "5", "--seed", "3"], 0),
        ("run-head-splitter", &["run", "head-splitter"], 2),
        ("compare-coin", &["compare-halting", "coin"], 0),
        ("compare-write-one", &["compare-halting", "write-one-and-halt", "--steps", "5"], 0),
        ("compare-processor-hadamard", &["compare-halting", "processor-hadamard", "--steps", "2"], 3),
        ("compare-processor-hadamard-json", &["compare-halting", "processor-hadamard", "--steps", "2", "--json"], 3),
        ("oracle-identity", &["oracle", "identity", "--cells", "3"], 0),
        ("oracle-head-splitter", &["oracle", "head-splitter", "--cells", "4"], 0),
        ("oracle-coin", &["oracle", "coin"], 0),
    ];
    let mut problems = Vec::new();
    for &(golden, args, code) in cases {
        let path = machine(args[1]);
        let invoke = || {
            Command::new(env!("CARGO_BIN_EXE_qtm"))
                .arg(args[0])
                .arg(&path)
                .args(&args[2..])
                .env_remove("QTM_SEED")
                .output()
                .unwrap()
        };
        let (first, second) = (invoke(), invoke());
        let expected = fs::read(root.join("tests/golden").join(format!("{golden}.txt"))).unwrap_or_default();
        if first.status.code() != Some(code) || second.status.code() != Some(code) {
            problems.push(format!("{golden}: exit {:?}, expected {code}", first.status.code()));
        }
        if first.stdout != second.stdout {
            problems.push(format!("{golden}: output differs between runs"));
        }
        if first.stdout != expected {
            problems.push(format!("{golden}: output differs from golden file"));
        }
    }
    for (args, code) in [
        (vec!["validate".to_string(), "/nonexistent/machine.json".to_string()], 1),
        (vec!["oracle".to_string(), machine("coin").display().to_string(), "--cells".into(), "9".into()], 1),
        (vec!["frobnicate".to_string()], 1),
    ] {
        let out = Command::new(env!("CARGO_BIN_EXE_qtm")).args(&args).output().unwrap();
        if out.status.code() != Some(code) {
            problems.push(format!("{args:?}: exit {:?}, expected {code}", out.status.code()));
        }
    }
    verdict(
        problems.is_empty(),
        format!(
            "{} reports run twice and matched against golden files, 3 error exits{}",
            cases.len(),
            problems.first().map(|p| format!("; {p}")).unwrap_or_default()
        ),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("validator/oracle equivalence", equivalence),
        ("condition isolation", isolation),
        ("unitarity in action", dynamics),
        ("monitoring does not change the output", halting_theorem),
        ("negative control", negative_control),
        ("codec round trip", codec),
        ("sampling consistency", sampling),
        ("CLI contract", cli_contract),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!("{status} [{}] {name}: {}", i + 1, v.detail);
        failed += usize::from(!v.passed);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
