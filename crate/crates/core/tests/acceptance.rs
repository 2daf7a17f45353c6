//! Acceptance suite: one test per release criterion, each printing a
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use std::path::PathBuf;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use tss_rsrc_model::fuzz::{run_fuzz, FuzzConfig};
use tss_rsrc_model::lemma_suite::{enumerate_heaps, mutants, run_lemma, run_suite, HeapConfig};
use tss_rsrc_model::marshal::{marshal_u32, unmarshal_u32, MarshalError};
use tss_rsrc_model::scenario::run_scenario_file;
use tss_rsrc_model::{linked_ll, to_ll, Bank, Memory, Node, NodeRef};

fn report(name: &str, violations: Vec<String>) {
    if violations.is_empty() {
        println!("acceptance PASS: {name}");
    } else {
        println!("acceptance FAIL: {name}");
        for v in violations.iter().take(20) {
            println!("  {v}");
        }
        panic!(
            "acceptance criterion failed: {name} ({} violations)",
            violations.len()
        );
    }
}

fn scenario_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(file)
}

/// Lemma suite at max-nodes 4: zero counterexamples, closed-form config
/// count per lemma, wall time under 120 s.
#[test]
fn lemma_suite_at_four() {
    let mut violations = Vec::new();
    let started = Instant::now();
    let reports = run_suite(4).expect("4 is within scope");
    let elapsed = started.elapsed();

    if reports.len() != 9 {
        violations.push(format!("expected 9 lemmas, got {}", reports.len()));
    }
    let expected_configs = HeapConfig::total_configs(4);
    assert_eq!(expected_configs, 10_553);
    for r in &reports {
        if r.violations != 0 || !r.counterexamples.is_empty() {
            violations.push(format!(
                "{}: {} counterexamples",
                r.lemma_name, r.violations
            ));
        }
        if r.configs_checked != expected_configs {
            violations.push(format!(
                "{}: checked {} configs, closed form says {expected_configs}",
                r.lemma_name, r.configs_checked
            ));
        }
    }
    if elapsed > Duration::from_secs(120) {
        violations.push(format!("took {elapsed:?}, budget 120 s"));
    }
    report(
        "lemma suite max-nodes 4 (9 lemmas, 10553 configs each)",
        violations,
    );
}

/// Harness soundness: every registered lemma has a falsified mutant that
/// yields at least one counterexample at max-nodes <= 3.
#[test]
fn mutant_sensitivity() {
    let mut violations = Vec::new();
    if mutants().len() != 9 {
        violations.push(format!("expected 9 mutants, got {}", mutants().len()));
    }
    for mutant in mutants() {
        let r = run_lemma(mutant, 3).expect("3 is within scope");
        if r.violations == 0 {
            violations.push(format!(
                "mutant {} was not refuted at max-nodes 3",
                mutant.name
            ));
        }
    }
    report("mutant sensitivity at max-nodes <= 3", violations);
}

/// Allocator contract: every sequence of up to 8 calloc calls on
/// capacities 1..8, with and without scribbled memory, obeys the exact
/// postconditions.
#[test]
fn allocator_contract_exhaustive() {
    let mut violations = Vec::new();
    let mut check = |cap: usize, calls: usize, dirty: bool| {
        let mut bank = Bank::new(cap).unwrap();
        for call in 0..calls {
            if dirty {
                // Junk everywhere, including the allocable region.
                for i in 0..cap {
                    let node = bank.node_mut(i);
                    node.handle = 0xA500_0000 | call as u32;
                    node.rsrc.aux = call as u32 + 1;
                    node.rsrc.name[0] = 0xEE;
                }
            }
            let before = bank.snapshot();
            let r = bank.calloc_node();
            let after = bank.snapshot();
            let ctx = format!("cap={cap} call={call} dirty={dirty}");

            if !bank.valid_bank() {
                violations.push(format!("{ctx}: bank validity lost"));
            }
            if before.alloc_idx() < cap {
                if r != NodeRef::cell(before.alloc_idx()) {
                    violations.push(format!(
                        "{ctx}: returned {r:?}, cursor was {}",
                        before.alloc_idx()
                    ));
                }
                if after.alloc_idx() != before.alloc_idx() + 1 {
                    violations.push(format!("{ctx}: cursor not incremented by one"));
                }
                let cell = r.index().unwrap();
                if *after.node(cell) != Node::default() {
                    violations.push(format!("{ctx}: allocated cell {cell} not zeroed"));
                }
                for i in (0..cap).filter(|&i| i != cell) {
                    if before.node(i) != after.node(i) {
                        violations.push(format!("{ctx}: frame broken at cell {i}"));
                    }
                }
            } else {
                if r != NodeRef::NIL {
                    violations.push(format!("{ctx}: full bank returned {r:?}"));
                }
                if before != after {
                    violations.push(format!("{ctx}: full-bank call modified memory"));
                }
            }
        }
    };
    for cap in 1..=8 {
        for calls in 0..=8 {
            for dirty in [false, true] {
                check(cap, calls, dirty);
            }
        }
    }
    report(
        "allocator contract, capacities 1..8 x up to 8 calls",
        violations,
    );
}

/// 10,000 seeded lookups on a capacity-64 bank pass the full per-call
/// battery in under 10 s, and all three behaviors occur.
#[test]
fn get_node_trichotomy_fuzz() {
    let mut violations = Vec::new();
    let started = Instant::now();
    let outcome = run_fuzz(&FuzzConfig::new(10_000, 0xCAFE, 64));
    let elapsed = started.elapsed();
    match outcome {
        Ok(r) => {
            let total = r.histogram.found + r.histogram.created + r.histogram.memory;
            if total != 10_000 || r.histogram.marshal_fail != 0 {
                violations.push(format!(
                    "histogram does not partition the run: {:?}",
                    r.histogram
                ));
            }
            if r.histogram.created != 64 || r.allocated != 64 {
                violations.push(format!("expected full allocation, got {:?}", r.histogram));
            }
            if r.histogram.found == 0 || r.histogram.memory == 0 {
                violations.push(format!("behavior missing from run: {:?}", r.histogram));
            }
        }
        Err(v) => violations.push(v.to_string()),
    }
    if elapsed > Duration::from_secs(10) {
        violations.push(format!("took {elapsed:?}, budget 10 s"));
    }
    report("get_node trichotomy, 10000 ops on capacity 64", violations);
}

/// The scripted return-code scenarios replay cleanly: found -> 616 with an
/// unchanged list, creation -> 1611 with the old head second, exhaustion
/// -> 833 with unchanged state.
#[test]
fn return_code_scenarios() {
    let mut violations = Vec::new();
    for (file, bank) in [
        ("found.scn", 64),
        ("creation.scn", 64),
        ("exhaustion.scn", 1),
    ] {
        if let Err(e) = run_scenario_file(scenario_path(file), bank) {
            violations.push(format!("{file}: {e}"));
        }
    }
    report("scripted return-code scenarios", violations);
}

/// Marshal: round-trip identity on the boundary values and 10^4 random
/// values, big-endian byte order, failure atomicity; under 1 s.
#[test]
fn marshal_contract() {
    let mut violations = Vec::new();
    let started = Instant::now();

    let mut round_trip = |v: u32| {
        let mut buf = [0u8; 4];
        let mut w = 0;
        marshal_u32(v, &mut buf, &mut w).unwrap();
        if buf[0] != (v >> 24) as u8 {
            violations.push(format!(
                "{v:#x}: dest[offset] is not the most significant byte"
            ));
        }
        let mut r = 0;
        if unmarshal_u32(&buf, &mut r) != Ok(v) {
            violations.push(format!("{v:#x}: round trip lost the value"));
        }
    };
    for v in [0u32, 1, 0xFF, 0x0100, 0x0102_0304, 0xFFFF_FFFF] {
        round_trip(v);
    }
    let mut rng = ChaCha20Rng::seed_from_u64(0xB0B);
    for _ in 0..10_000 {
        round_trip(rng.gen());
    }

    // Failure atomicity on a size-4 buffer at offset 1.
    let mut buf = [0x5Au8; 4];
    let mut offset = 1;
    match marshal_u32(0xDEAD_BEEF, &mut buf, &mut offset) {
        Err(MarshalError::InsufficientBuffer { offset: 1, size: 4 }) => {}
        other => violations.push(format!("expected insufficient-buffer error, got {other:?}")),
    }
    if buf != [0x5A; 4] || offset != 1 {
        violations.push("failed marshal touched the buffer or offset".into());
    }

    let elapsed = started.elapsed();
    if elapsed > Duration::from_secs(1) {
        violations.push(format!("took {elapsed:?}, budget 1 s"));
    }
    report("marshal round-trip, byte order, atomicity", violations);
}

/// Exhaustive translator/predicate equivalence at max-nodes 4: every heap,
/// every (bgn, end) pair, every observable candidate list.
#[test]
fn to_ll_linked_ll_correspondence() {
    let mut violations = Vec::new();
    let mut heaps = 0u64;
    for heap in enumerate_heaps(4).expect("4 is within scope") {
        heaps += 1;
        let bank = heap.build_bank();
        let mut refs = vec![NodeRef::NIL];
        refs.extend((0..bank.capacity()).map(NodeRef::cell));

        let images: Vec<(NodeRef, NodeRef, Option<tss_rsrc_model::LogicList>)> = refs
            .iter()
            .flat_map(|&b| refs.iter().map(move |&e| (b, e)))
            .map(|(b, e)| (b, e, to_ll(&bank, b, e).ok()))
            .collect();
        let candidates: Vec<&tss_rsrc_model::LogicList> = {
            let mut out = Vec::new();
            for (_, _, img) in &images {
                if let Some(ll) = img {
                    if !out.contains(&ll) {
                        out.push(ll);
                    }
                }
            }
            out
        };

        for (b, e, image) in &images {
            for ll in &candidates {
                let translator_route = image.as_ref() == Some(*ll)
                    && ll.iter().all(|r| bank.is_allocated(r))
                    && ll.pairwise_distinct();
                let predicate_route = linked_ll(&bank, *b, *e, ll);
                if translator_route != predicate_route {
                    violations.push(format!(
                        "heap {heap:?}: bgn={b:?} end={e:?} ll={ll:?}: translator {translator_route}, predicate {predicate_route}"
                    ));
                }
            }
        }
    }
    if heaps != HeapConfig::total_configs(4) {
        violations.push(format!(
            "enumerated {heaps} heaps, closed form says {}",
            HeapConfig::total_configs(4)
        ));
    }
    report(
        "to_ll/linked_ll equivalence over every heap at max-nodes 4",
        violations,
    );
}
