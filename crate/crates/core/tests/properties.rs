//! Property tests over seed-pinned random inputs.

mod common;

use alcmod::generate::{random_ontology, random_signature, RandomSpec};
use alcmod::locality::{extract_star_module, locality_module, sample_signature, Locality};
use alcmod::module_builder::{build, simplify_axiom, Method, PipelineConfig};
use alcmod::oracle::{entails, TableauConfig};
use alcmod::parser_io::{parse_ontology, serialize_ontology};
use alcmod::syntax::{Axiom, Concept, Name, Ontology};
use proptest::prelude::*;

fn concept() -> impl Strategy<Value = Concept> {
    let leaf = prop_oneof![
        Just(Concept::Top),
        Just(Concept::Bottom),
        (1..=4usize).prop_map(|i| Concept::Atom(Name::concept(&format!("A{i}")))),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Concept::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Concept::and([a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Concept::or([a, b])),
            (1..=2usize, inner.clone()).prop_map(|(r, c)| Concept::exists(Name::role(&format!("r{r}")), c)),
            (1..=2usize, inner).prop_map(|(r, c)| Concept::forall(Name::role(&format!("r{r}")), c)),
        ]
    })
}

fn small_ontology(seed: u64) -> Ontology {
    random_ontology(&RandomSpec::default(), seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parser_round_trip(axioms in prop::collection::vec((concept(), concept()), 1..6)) {
        let o = Ontology::from_axioms(axioms.into_iter().map(|(l, r)| Axiom::new(l, r)));
        let text = serialize_ontology(&o);
        let back = parse_ontology(&text).unwrap();
        prop_assert_eq!(serialize_ontology(&back), text);
        prop_assert_eq!(back.axiom_set(), o.axiom_set());
    }

    #[test]
    fn simplification_preserves_meaning(lhs in concept(), rhs in concept()) {
        let a = Axiom::new(lhs, rhs);
        let cfg = TableauConfig::default();
        match simplify_axiom(&a) {
            None => prop_assert!(entails(&Ontology::default(), &a, cfg).unwrap(), "{} is not a tautology", a),
            Some(b) => {
                prop_assert!(entails(&Ontology::from_axioms([a.clone()]), &b, cfg).unwrap(), "{} ⊭ {}", a, b);
                prop_assert!(entails(&Ontology::from_axioms([b.clone()]), &a, cfg).unwrap(), "{} ⊭ {}", b, a);
            }
        }
    }

    #[test]
    fn star_module_is_idempotent_subset(seed in any::<u64>()) {
        let o = small_ontology(seed);
        let sigma = random_signature(&o, seed);
        let m = extract_star_module(&o, &sigma);
        prop_assert!(m.indices().is_subset(&o.indices()));
        prop_assert_eq!(extract_star_module(&m, &sigma), m);
    }

    #[test]
    fn bottom_module_is_monotone_in_signature(seed in any::<u64>()) {
        let o = small_ontology(seed);
        let all = o.signature().len();
        let small = sample_signature(&o, all / 2, seed).unwrap();
        let large = small.union(&sample_signature(&o, all, seed ^ 1).unwrap());
        let m_small = locality_module(&o, &small, Locality::Bottom);
        let m_large = locality_module(&o, &large, Locality::Bottom);
        prop_assert!(m_small.indices().is_subset(&m_large.indices()));
    }

    #[test]
    fn general_modules_are_entailed(seed in any::<u64>()) {
        let o = small_ontology(seed);
        let sigma = random_signature(&o, seed);
        for method in [Method::Gm, Method::GmStar] {
            let m = build(method, &o, &sigma, &PipelineConfig::default()).unwrap().ontology;
            for a in m.axioms() {
                prop_assert!(entails(&o, a, TableauConfig::default()).unwrap(), "{:?}: {}", method, a);
            }
        }
    }

    #[test]
    fn deductive_module_is_a_subset(seed in any::<u64>()) {
        let o = small_ontology(seed);
        let sigma = random_signature(&o, seed);
        let dm = build(Method::Dm, &o, &sigma, &PipelineConfig::default()).unwrap().ontology;
        prop_assert!(dm.indices().is_subset(&o.indices()));
    }

    #[test]
    fn exact_interpolants_stay_in_signature(seed in any::<u64>()) {
        let o = small_ontology(seed);
        let sigma = random_signature(&o, seed);
        let out = build(Method::Ui, &o, &sigma, &PipelineConfig::default()).unwrap();
        if out.ui_status == Some(alcmod::module_builder::UiStatus::Exact) {
            prop_assert!(out.ontology.signature().is_subset(&sigma));
        }
    }
}

#[test]
fn sample_signature_is_pinned() {
    let o = common::ontology(common::RUNNING);
    let s = sample_signature(&o, 3, 11).unwrap();
    assert_eq!(s.len(), 3);
    assert_eq!(s, sample_signature(&o, 3, 11).unwrap());
    assert!(s.is_subset(&o.signature()));
}
