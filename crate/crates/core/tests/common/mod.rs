//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use alcmod::generate::{random_ontology, random_signature, RandomSpec};
use alcmod::parser_io::{parse_ontology, parse_signature};
use alcmod::syntax::{sort_literals, Clause, Concept, Literal, Name, Ontology, Signature};

pub const RUNNING: &str = "\
SubClassOf(A1 ObjectUnionOf(ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B1)) ObjectSomeValuesFrom(r B2)))
SubClassOf(ObjectIntersectionOf(B1 B3) owl:Nothing)
SubClassOf(A2 ObjectUnionOf(A3 ObjectAllValuesFrom(s B3)))
SubClassOf(B4 A4)
SubClassOf(B2 B4)
";
pub const RUNNING_SIG: &str = "ObjectProperty: r\nClass: A1\nClass: A2\nClass: A3\nClass: A4\n";

pub const BOTTOM_FILLER: &str = "\
SubClassOf(A ObjectAllValuesFrom(r ObjectSomeValuesFrom(s B1)))
SubClassOf(A1 ObjectAllValuesFrom(r ObjectAllValuesFrom(s B2)))
SubClassOf(ObjectIntersectionOf(B1 B2) owl:Nothing)
";
pub const BOTTOM_FILLER_SIG: &str = "ObjectProperty: r\nClass: A\nClass: A1\n";

pub const CYCLIC: &str = "\
SubClassOf(A ObjectSomeValuesFrom(r B))
SubClassOf(B ObjectSomeValuesFrom(s B))
SubClassOf(B B1)
SubClassOf(B1 A1)
";
pub const CYCLIC_SIG: &str = "ObjectProperty: r\nObjectProperty: s\nClass: A\nClass: A1\n";

pub fn ontology(text: &str) -> Ontology {
    parse_ontology(text).unwrap()
}

pub fn signature(text: &str) -> Signature {
    parse_signature(text).unwrap()
}

fn name(t: &str) -> Name {
    match t.strip_prefix('D') {
        Some(i) if i.chars().all(|c| c.is_ascii_digit()) && !i.is_empty() => Name::definer(i.parse().unwrap()),
        _ => Name::concept(t),
    }
}

fn filler(t: &str) -> Concept {
    match t {
        "⊤" => Concept::Top,
        "⊥" => Concept::Bottom,
        _ => Concept::Atom(name(t)),
    }
}

/// Parses `¬A ⊔ ∃r.D1 ⊔ ∀s.⊥`-style clauses; `Dn` denotes a definer.
pub fn clause_literals(text: &str) -> Vec<Literal> {
    sort_literals(text.split('⊔').map(str::trim).map(|l| {
        if let Some(rest) = l.strip_prefix('¬') {
            Literal::Neg(name(rest))
        } else if let Some(rest) = l.strip_prefix('∃') {
            let (r, f) = rest.split_once('.').unwrap();
            Literal::Ex(Name::role(r), filler(f))
        } else if let Some(rest) = l.strip_prefix('∀') {
            let (r, f) = rest.split_once('.').unwrap();
            Literal::All(Name::role(r), filler(f))
        } else {
            Literal::Pos(name(l))
        }
    }))
}

fn rename_literal(l: &Literal, m: &BTreeMap<Name, Name>) -> Literal {
    let f = |n: &Name| m.get(n).cloned().unwrap_or_else(|| n.clone());
    match l {
        Literal::Pos(n) => Literal::Pos(f(n)),
        Literal::Neg(n) => Literal::Neg(f(n)),
        Literal::Ex(r, c) => Literal::Ex(r.clone(), c.map_atoms(&|n| m.get(n).map(|x| Concept::Atom(x.clone())))),
        Literal::All(r, c) => Literal::All(r.clone(), c.map_atoms(&|n| m.get(n).map(|x| Concept::Atom(x.clone())))),
    }
}

fn permutations(items: &[Name]) -> Vec<Vec<Name>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, head.clone());
            out.push(p);
        }
    }
    out
}

/// True if some bijective renaming of definers turns `got` into `want`
/// (both read as clause sets).
pub fn same_modulo_definers(got: &[Clause], want: &[&str]) -> bool {
    let want: BTreeSet<Vec<Literal>> = want.iter().map(|w| clause_literals(w)).collect();
    let got_set: BTreeSet<Vec<Literal>> = got.iter().map(|c| c.literals().to_vec()).collect();
    if got_set.len() != want.len() || got.len() != want.len() {
        return false;
    }
    let definers = |s: &BTreeSet<Vec<Literal>>| -> Vec<Name> {
        let mut out = BTreeSet::new();
        for c in s {
            for l in c {
                let mut sig = Signature::default();
                l.collect_names(&mut sig);
                out.extend(sig.concepts.into_iter().filter(Name::is_definer));
            }
        }
        out.into_iter().collect()
    };
    let (gd, wd) = (definers(&got_set), definers(&want));
    if gd.len() != wd.len() {
        return false;
    }
    permutations(&wd).into_iter().any(|perm| {
        let m: BTreeMap<Name, Name> = gd.iter().cloned().zip(perm).collect();
        let renamed: BTreeSet<Vec<Literal>> =
            got_set.iter().map(|c| sort_literals(c.iter().map(|l| rename_literal(l, &m)))).collect();
        renamed == want
    })
}

pub fn show(clauses: &[Clause]) -> String {
    clauses.iter().map(|c| c.to_string()).collect::<Vec<_>>().join("; ")
}

/// Seed-pinned random (ontology, signature) pairs.
pub fn random_suite(count: usize, spec: &RandomSpec, base_seed: u64) -> Vec<(u64, Ontology, Signature)> {
    (0..count as u64)
        .map(|i| {
            let seed = base_seed + i;
            let o = random_ontology(spec, seed);
            let s = random_signature(&o, seed);
            (seed, o, s)
        })
        .collect()
}
