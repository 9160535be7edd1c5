//! Acceptance suite: one test per criterion, named `criterion_<n>_…`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use alcmod::generate::{blowup_family, RandomSpec};
use alcmod::module_builder::{build, eliminate_definers, run_pipeline, Method, PipelineConfig, UiStatus};
use alcmod::normalize::clausify;
use alcmod::oracle::{entails, inseparable_sampled, is_satisfiable, TableauConfig};
use alcmod::parser_io::serialize_axiom;
use alcmod::saturation::conflict_sets;
use alcmod::syntax::{Axiom, Concept, Name, Ontology, Signature};
use alcmod::Budget;
use common::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SUITE_SIZE: usize = 200;
const SUITE_SEED: u64 = 5_000;

fn cfg() -> PipelineConfig {
    PipelineConfig::default()
}

fn tableau() -> TableauConfig {
    TableauConfig::default()
}

fn suite() -> Vec<(u64, Ontology, Signature)> {
    let spec = RandomSpec {
        max_axioms: 12,
        concept_names: 5,
        role_names: 2,
        depth: 2,
    };
    random_suite(SUITE_SIZE, &spec, SUITE_SEED)
}

fn axiom_strings(o: &Ontology) -> BTreeSet<String> {
    o.axioms().map(serialize_axiom).collect()
}

#[test]
fn criterion_1_running_example_golden_chain() {
    let o = ontology(RUNNING);
    let sigma = signature(RUNNING_SIG);
    let start = Instant::now();
    let no_module = PipelineConfig {
        star_module: false,
        ..cfg()
    };
    let trace = run_pipeline(&o, &sigma, &no_module).unwrap();
    let gm = build(Method::Gm, &o, &sigma, &cfg()).unwrap().ontology;
    let gm_star = build(Method::GmStar, &o, &sigma, &cfg()).unwrap().ontology;
    let elapsed = start.elapsed();

    let cl = [
        "¬A1 ⊔ ∃r.D1 ⊔ ∃r.D3",
        "¬D1 ⊔ ∃s.D2",
        "¬D2 ⊔ B1",
        "¬D3 ⊔ B2",
        "¬B1 ⊔ ¬B3",
        "¬A2 ⊔ A3 ⊔ ∀s.D4",
        "¬D4 ⊔ B3",
        "¬B4 ⊔ A4",
        "¬B2 ⊔ B4",
    ];
    let ri = [
        "¬A1 ⊔ ∃r.D1 ⊔ ∃r.D3",
        "¬D1 ⊔ ∃s.D2",
        "¬D3 ⊔ B2",
        "¬B1 ⊔ ¬B3",
        "¬A2 ⊔ A3 ⊔ ∀s.D4",
        "¬B4 ⊔ A4",
        "¬B2 ⊔ B4",
        "¬D2 ⊔ ¬D4",
    ];
    let role_e = [
        "¬A1 ⊔ ∃r.D1 ⊔ ∃r.D3",
        "¬D3 ⊔ B2",
        "¬B1 ⊔ ¬B3",
        "¬B4 ⊔ A4",
        "¬B2 ⊔ B4",
        "¬D2 ⊔ ¬D4",
        "¬D1 ⊔ ¬A2 ⊔ A3",
    ];
    let con_e = ["¬A1 ⊔ ∃r.D1 ⊔ ∃r.D3", "¬D1 ⊔ ¬A2 ⊔ A3", "¬D3 ⊔ A4"];
    assert!(same_modulo_definers(&trace.cl.clauses, &cl), "cl: {}", show(&trace.cl.clauses));
    assert!(same_modulo_definers(&trace.ri.clauses, &ri), "RI: {}", show(&trace.ri.clauses));
    assert!(
        same_modulo_definers(&trace.role_forgotten.clauses, &role_e),
        "rolE: {}",
        show(&trace.role_forgotten.clauses)
    );
    assert!(
        same_modulo_definers(&trace.concept_forgotten.clauses, &con_e),
        "conE: {}",
        show(&trace.concept_forgotten.clauses)
    );
    let want_gm = ontology(
        "SubClassOf(A1 ObjectUnionOf(ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B1)) ObjectSomeValuesFrom(r B2)))
SubClassOf(ObjectIntersectionOf(A2 ObjectSomeValuesFrom(s B1)) A3)
SubClassOf(B2 A4)
",
    );
    assert_eq!(gm.axiom_set(), want_gm.axiom_set(), "gm: {:?}", axiom_strings(&gm));
    let want_star = ontology(
        "SubClassOf(A1 ObjectUnionOf(ObjectSomeValuesFrom(r ObjectUnionOf(ObjectComplementOf(A2) A3)) ObjectSomeValuesFrom(r A4)))",
    );
    assert_eq!(gm_star.axiom_set(), want_star.axiom_set(), "gm*: {:?}", axiom_strings(&gm_star));
    assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}");
}

#[test]
fn criterion_2_bottom_filler_golden() {
    let o = ontology(BOTTOM_FILLER);
    let sigma = signature(BOTTOM_FILLER_SIG);
    let mut trace = run_pipeline(&o, &sigma, &cfg()).unwrap();
    let el = eliminate_definers(&mut trace);
    assert!(
        same_modulo_definers(&el.op1, &["¬A ⊔ ∀r.D1", "¬A1 ⊔ ∀r.D2", "¬A ⊔ ¬A1 ⊔ ∀r.⊥"]),
        "Op1: {}",
        show(&el.op1)
    );
    assert!(
        same_modulo_definers(&el.op2, &["¬A ⊔ ∀r.⊤", "¬A1 ⊔ ∀r.⊤", "¬A ⊔ ¬A1 ⊔ ∀r.⊥"]),
        "Op2: {}",
        show(&el.op2)
    );
    let gm_star = build(Method::GmStar, &o, &sigma, &cfg()).unwrap().ontology;
    let want = ontology("SubClassOf(ObjectIntersectionOf(A A1) ObjectAllValuesFrom(r owl:Nothing))");
    assert_eq!(gm_star.axiom_set(), want.axiom_set(), "gm*: {:?}", axiom_strings(&gm_star));
}

#[test]
fn criterion_3_exponential_family() {
    let mut failures = Vec::new();
    let mut n8_time = Duration::ZERO;
    for n in 1..=8usize {
        let (o, sigma) = blowup_family(n);
        let start = Instant::now();
        let gm = build(Method::Gm, &o, &sigma, &cfg()).unwrap().ontology;
        if n == 8 {
            n8_time = start.elapsed();
        }
        let (count, length) = (gm.len(), gm.length());
        println!("n={n}: |gm|={count} ‖gm‖={length} (claimed {}, (n+1)·2ⁿ = {})", n << (n + 1), (n + 1) << n);
        if count != 1 << n {
            failures.push(format!("n={n}: |gm|={count}, expected {}", 1 << n));
        }
        if length != n << (n + 1) {
            failures.push(format!("n={n}: ‖gm‖={length}, expected n·2ⁿ⁺¹={}", n << (n + 1)));
        }
    }
    if n8_time >= Duration::from_secs(30) {
        failures.push(format!("n=8 took {n8_time:?}"));
    }
    assert!(failures.is_empty(), "{}", failures.join("; "));
}

/// Subset-minimal definer sets of size ≤ 4 whose conjunction the tableau
/// refutes w.r.t. the clause set read as an ontology.
fn brute_force_conflicts(o: &Ontology, definers: &[Name]) -> BTreeSet<BTreeSet<Name>> {
    let mut found: BTreeSet<BTreeSet<Name>> = BTreeSet::new();
    let mut subsets: Vec<BTreeSet<Name>> = (0u32..(1 << definers.len()))
        .filter(|m| m.count_ones() <= 4)
        .map(|m| definers.iter().enumerate().filter(|(i, _)| m & (1 << i) != 0).map(|(_, d)| d.clone()).collect())
        .collect();
    subsets.sort_by_key(BTreeSet::len);
    for s in subsets {
        if found.iter().any(|f| f.is_subset(&s)) {
            continue;
        }
        let c = Concept::and(s.iter().cloned().map(Concept::Atom));
        if !is_satisfiable(o, &c, tableau()).unwrap() {
            found.insert(s);
        }
    }
    found
}

#[test]
fn criterion_4_conflict_sets_match_tableau() {
    let spec = RandomSpec {
        max_axioms: 10,
        concept_names: 3,
        role_names: 2,
        depth: 2,
    };
    let mut checked = 0;
    let mut seed = 0u64;
    let mut mismatches = Vec::new();
    while checked < SUITE_SIZE {
        let o = alcmod::generate::random_ontology(&spec, seed);
        seed += 1;
        let cl = clausify(&o);
        if cl.definers.len() > 6 {
            continue;
        }
        checked += 1;
        let definers: Vec<Name> = cl.definers.defs.keys().cloned().collect();
        let oracle = brute_force_conflicts(&cl.to_ontology(), &definers);
        let derived: BTreeSet<BTreeSet<Name>> = conflict_sets(&cl, Budget::unlimited())
            .unwrap()
            .into_iter()
            .map(|c| c.definers)
            .filter(|d| d.len() <= 4)
            .collect();
        if oracle != derived {
            mismatches.push(format!("seed {}: oracle {oracle:?} vs derived {derived:?}", seed - 1));
        }
    }
    assert!(mismatches.is_empty(), "{} mismatches: {}", mismatches.len(), mismatches.join("; "));
}

/// Runs every method on `o`/`sigma` and returns the counterexample reports.
fn inseparability_failures(seed: u64, o: &Ontology, sigma: &Signature, dm_only: bool) -> Vec<String> {
    let mut out = Vec::new();
    let methods: &[Method] = if dm_only {
        &[Method::Dm]
    } else {
        &[Method::Gm, Method::GmStar, Method::Dm, Method::Locality, Method::Ui]
    };
    for &m in methods {
        let outcome = build(m, o, sigma, &cfg()).unwrap();
        if m == Method::Ui && outcome.ui_status != Some(UiStatus::Exact) {
            continue;
        }
        match inseparable_sampled(o, &outcome.ontology, sigma, 50, 2, seed, tableau()) {
            Ok(None) => {}
            Ok(Some(cex)) => out.push(format!("seed {seed} {m:?}: {} (first={})", serialize_axiom(&cex.axiom), cex.entailed_by_first)),
            Err(e) => out.push(format!("seed {seed} {m:?}: {e}")),
        }
        if matches!(m, Method::Gm | Method::GmStar) {
            for a in outcome.ontology.axioms() {
                if !entails(o, a, tableau()).unwrap() {
                    out.push(format!("seed {seed} {m:?}: O does not entail {}", serialize_axiom(a)));
                }
            }
        }
    }
    out
}

#[test]
fn criterion_5_inseparability_suite() {
    let failures: Vec<String> = suite().iter().flat_map(|(seed, o, s)| inseparability_failures(*seed, o, s, false)).collect();
    assert!(failures.is_empty(), "{} counterexamples: {}", failures.len(), failures.join("; "));
}

/// gm without the ⊤⊥*-module preprocessing step.
fn gm(o: &Ontology, sigma: &Signature) -> Ontology {
    let plain = PipelineConfig {
        star_module: false,
        ..cfg()
    };
    build(Method::Gm, o, sigma, &plain).unwrap().ontology
}

/// Random clause-shaped ontology: `⊤ ⊑ L₁ ⊔ … ⊔ Lₖ` over literal names.
fn clause_shaped(seed: u64) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names: Vec<Name> = (1..=4).map(|i| Name::concept(&format!("A{i}"))).collect();
    let roles: Vec<Name> = (1..=2).map(|i| Name::role(&format!("r{i}"))).collect();
    let count = rng.gen_range(1..=8);
    Ontology::from_axioms((0..count).map(|_| {
        let width = rng.gen_range(1..=3);
        let lits = (0..width).map(|_| {
            let a = Concept::Atom(names.choose(&mut rng).unwrap().clone());
            let r = roles.choose(&mut rng).unwrap().clone();
            match rng.gen_range(0..4) {
                0 => a,
                1 => Concept::not(a),
                2 => Concept::exists(r, a),
                _ => Concept::forall(r, a),
            }
        });
        Axiom::new(Concept::Top, Concept::or(lits.collect::<Vec<_>>()))
    }))
}

#[test]
fn criterion_6_iterated_gm() {
    let mut violations = Vec::new();
    for (seed, o, sigma) in suite() {
        let mut m = gm(&o, &sigma);
        let mut fixpoint = false;
        for i in 1..10 {
            let next = gm(&m, &sigma);
            if !m.axiom_set().is_subset(&next.axiom_set()) {
                violations.push(format!("seed {seed}: M{i} ⊄ M{}", i + 1));
                break;
            }
            if next.axiom_set() == m.axiom_set() {
                fixpoint = true;
                break;
            }
            m = next;
        }
        if !fixpoint {
            violations.push(format!("seed {seed}: no fixpoint within 10 iterations"));
        }
    }
    for seed in 0..SUITE_SIZE as u64 {
        let o = clause_shaped(seed);
        let sigma = alcmod::generate::random_signature(&o, seed);
        let once = gm(&o, &sigma);
        let twice = gm(&once, &sigma);
        if once.axiom_set() != twice.axiom_set() {
            violations.push(format!(
                "clause-shaped seed {seed}: gm {:?} vs gm∘gm {:?}",
                axiom_strings(&once),
                axiom_strings(&twice)
            ));
        }
    }
    assert!(violations.is_empty(), "{} violations: {}", violations.len(), violations.join("; "));
}

#[test]
fn criterion_7_deductive_module() {
    let mut failures = Vec::new();
    for (seed, o, sigma) in suite() {
        let dm = build(Method::Dm, &o, &sigma, &cfg()).unwrap().ontology;
        if !dm.indices().is_subset(&o.indices()) {
            failures.push(format!("seed {seed}: indices {:?} ⊄ {:?}", dm.indices(), o.indices()));
        }
        for e in &dm.entries {
            if o.entries.iter().find(|x| x.index == e.index).map(|x| &x.axiom) != Some(&e.axiom) {
                failures.push(format!("seed {seed}: entry {} differs from the input", e.index));
            }
        }
        failures.extend(inseparability_failures(seed, &o, &sigma, true));
    }
    assert!(failures.is_empty(), "{} failures: {}", failures.len(), failures.join("; "));
}

#[test]
fn criterion_8_uniform_interpolant_status() {
    let o = ontology(RUNNING);
    let sigma = signature(RUNNING_SIG);
    let out = build(Method::Ui, &o, &sigma, &cfg()).unwrap();
    assert_eq!(out.ui_status, Some(UiStatus::Exact));
    assert!(out.ontology.signature().is_subset(&sigma), "{:?}", axiom_strings(&out.ontology));

    let o = ontology(CYCLIC);
    let sigma = signature(CYCLIC_SIG);
    let out = build(Method::Ui, &o, &sigma, &cfg()).unwrap();
    assert_eq!(out.ui_status, Some(UiStatus::Approximate));
    assert!(out.ontology.signature().contains(&Name::concept("B")), "{:?}", axiom_strings(&out.ontology));
    let cex = inseparable_sampled(&o, &out.ontology, &sigma, 50, 2, 0, tableau()).unwrap();
    assert_eq!(cex, None);
}

#[test]
fn criterion_9_bench_report_schema() {
    let dir = tempfile::tempdir().unwrap();
    let spec = RandomSpec {
        max_axioms: 40,
        concept_names: 12,
        role_names: 3,
        depth: 2,
    };
    let o = alcmod::generate::random_ontology(&spec, 42);
    let input = dir.path().join("synthetic.ofn");
    std::fs::write(&input, alcmod::parser_io::serialize_ontology(&o)).unwrap();
    let run = |report: &std::path::Path| {
        let args = [
            "alcmod",
            "bench",
            "--ontology",
            input.to_str().unwrap(),
            "--sig-size",
            "4",
            "--sig-count",
            "5",
            "--seed",
            "7",
            "--method",
            "gm-star",
            "--report",
            report.to_str().unwrap(),
        ];
        assert_eq!(alcmod::cli::run(args.map(Into::into)), 0);
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
        v
    };
    let first = run(&dir.path().join("a.json"));
    let second = run(&dir.path().join("b.json"));
    let summary = &first["summary"];
    for key in ["runs", "length_max", "length_avg", "length_median", "max_axiom_length", "time_avg_ms"] {
        assert!(summary.get(key).is_some_and(serde_json::Value::is_number), "summary.{key} missing");
    }
    assert_eq!(summary["runs"], 5);
    let runs = first["runs"].as_array().unwrap();
    let lengths: Vec<u64> = runs.iter().map(|r| r["result_length"].as_u64().unwrap()).collect();
    assert_eq!(summary["length_max"].as_u64(), lengths.iter().copied().max());
    // Everything except wall-clock times is determined by the seed.
    let strip = |v: &serde_json::Value| -> Vec<(u64, u64, u64)> {
        v["runs"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| (r["seed"].as_u64().unwrap(), r["result_length"].as_u64().unwrap(), r["max_axiom_length"].as_u64().unwrap()))
            .collect()
    };
    assert_eq!(strip(&first), strip(&second));
}
