use qtm_core::codec::DataSlot;
use qtm_core::halting::{compare_protocols, run_protocol_sampled, ComparisonVerdict, HaltingProtocol};
use qtm_core::random::halting_machine;
use qtm_core::{gallery, Configuration, GammaString, Tape, Transition};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn blank_start(d_fn: &Transition) -> Configuration {
    let spec = d_fn.spec();
    Configuration::new(spec.initial(), Tape::new(spec.blank()), 0)
}

#[test]
fn generated_halting_machines_satisfy_the_theorem() {
    let mut rng = ChaCha8Rng::seed_from_u64(1618);
    for i in 0..12 {
        let d_fn: Transition = halting_machine(&mut rng, 2 + i % 3);
        let start = blank_start(&d_fn);
        for slot in [DataSlot::IDENTITY, DataSlot::new(0, 2).unwrap()] {
            let protocol = HaltingProtocol::new(&d_fn, slot);
            for n in 0..=20 {
                let cmp = protocol.compare(&start, n, 1e-10).unwrap();
                assert_eq!(cmp.verdict, ComparisonVerdict::Agree, "machine {i}, N={n}");
                let total = cmp.monitored.halted_mass() + cmp.monitored.residual;
                assert!((total - 1.0).abs() <= 1e-10);
            }
            let lemmas = protocol.lemma_residuals(&start, 20).unwrap();
            assert!(lemmas.max_single_step_residual <= 1e-10);
            assert!(lemmas.max_orthogonality_residual <= 1e-10);
        }
    }
}

#[test]
fn monitored_halt_mass_accumulates() {
    let mut rng = ChaCha8Rng::seed_from_u64(1619);
    let d_fn: Transition = halting_machine(&mut rng, 3);
    let protocol = HaltingProtocol::new(&d_fn, DataSlot::IDENTITY);
    let dist = protocol.monitored(&blank_start(&d_fn), 20).unwrap();
    assert_eq!(dist.halt_mass_by_step.len(), 21);
    let mut cumulative = 0.0;
    for &mass in &dist.halt_mass_by_step {
        assert!(mass >= 0.0);
        cumulative += mass;
    }
    assert!((cumulative - dist.halted_mass()).abs() < 1e-12);
    assert!(cumulative > 0.0);
    // Longer budgets only add mass.
    let shorter = protocol.monitored(&blank_start(&d_fn), 10).unwrap();
    assert!(shorter.halted_mass() <= dist.halted_mass() + 1e-15);
}

#[test]
fn coin_sampling_matches_exact_distribution() {
    let d_fn = gallery::coin::<f64>();
    let start = blank_start(&d_fn);
    let a = GammaString::parse(d_fn.spec(), "a").unwrap();
    let runs = 10_000;
    let hits = (0..runs)
        .filter(|&seed| run_protocol_sampled(&d_fn, &start, 5, seed).unwrap().output.as_ref() == Some(&a))
        .count();
    let exact = compare_protocols(&d_fn, &start, 5, 1e-10).unwrap().monitored.probability(&a);
    let frequency = hits as f64 / runs as f64;
    assert!((frequency - exact).abs() <= 0.02, "{frequency} vs {exact}");
}
