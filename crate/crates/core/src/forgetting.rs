//! Role forgetting by exhaustive r-Rule application and concept forgetting
//! by ordered elimination with the A-Rule.

use std::collections::BTreeSet;

use crate::error::Error;
use crate::normalize::NormalizedOntology;
use crate::provenance::ProvenanceGraph;
use crate::saturation::{a_rule, is_role_isolated, r_rule, RolePremise};
use crate::store::{ClauseStore, Insert};
use crate::syntax::{Clause, Concept, Literal, Name, Quantifier, Signature};

/// Clauses carrying `q r.d`, each paired with the matching literal.
fn carrying(store: &ClauseStore, q: Quantifier, r: &Name, d: &Name) -> Vec<(Clause, Literal)> {
    let lit = Literal::role(q, r.clone(), Concept::Atom(d.clone()));
    store.with_literal(&lit).map(|(_, c)| (c.clone(), lit.clone())).collect()
}

/// Every way of picking one element from each list.
fn product<T: Clone>(lists: &[Vec<T>]) -> Vec<Vec<T>> {
    lists.iter().fold(vec![Vec::new()], |acc, list| {
        acc.iter()
            .flat_map(|prefix| {
                list.iter().map(move |x| {
                    let mut v = prefix.clone();
                    v.push(x.clone());
                    v
                })
            })
            .collect()
    })
}

/// All r-Rule conclusions on role `r` with `k` as the negative premise.
fn r_conclusions(g: &mut ProvenanceGraph, store: &ClauseStore, k: &Clause, r: &Name) -> Vec<Clause> {
    let ds: Vec<Name> = k.literals().iter().filter_map(|l| l.concept_name().cloned()).collect();
    let universal: Vec<Vec<(Clause, Literal)>> =
        ds.iter().map(|d| carrying(store, Quantifier::Forall, r, d)).collect();
    let mut shapes: Vec<Vec<Vec<(Clause, Literal)>>> = Vec::new();
    for (i, d) in ds.iter().enumerate() {
        let mut lists = vec![carrying(store, Quantifier::Exists, r, d)];
        lists.extend(universal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()));
        shapes.push(lists);
    }
    let extra: Vec<(Clause, Literal)> = store
        .iter()
        .flat_map(|(_, c)| {
            c.literals()
                .iter()
                .filter(|l| matches!(l, Literal::Ex(lr, Concept::Atom(_)) if lr == r))
                .map(|l| (c.clone(), l.clone()))
                .collect::<Vec<_>>()
        })
        .collect();
    let mut lists = vec![extra];
    lists.extend(universal);
    shapes.push(lists);

    let mut out = Vec::new();
    for lists in shapes {
        if lists.iter().any(Vec::is_empty) {
            continue;
        }
        for pick in product(&lists) {
            let (first, rest) = pick.split_first().unwrap();
            let existential = RolePremise { clause: &first.0, literal: &first.1 };
            let universals: Vec<RolePremise<'_>> =
                rest.iter().map(|(c, l)| RolePremise { clause: c, literal: l }).collect();
            out.extend(r_rule(g, existential, &universals, k, r));
        }
    }
    out
}

/// rolE: saturate under the r-Rule for every role outside `sigma`, then drop
/// every clause mentioning such a role.
pub fn forget_roles(n: &NormalizedOntology, sigma: &Signature) -> Result<NormalizedOntology, Error> {
    if !is_role_isolated(&n.clauses, sigma) {
        return Err(Error::NotRoleIsolated);
    }
    let mut out = n.with_clauses(Vec::new());
    let roles: BTreeSet<Name> = n.signature().roles.difference(&sigma.roles).cloned().collect();
    let mut store = ClauseStore::from_clauses(n.clauses.iter().cloned(), true);
    loop {
        let mut changed = false;
        for r in &roles {
            let ks: Vec<Clause> = store.all_negative().map(|(_, c)| c.clone()).collect();
            for k in ks {
                for c in r_conclusions(&mut out.graph, &store, &k, r) {
                    changed |= matches!(store.insert(c), Insert::Added(_));
                }
            }
        }
        if !changed {
            break;
        }
    }
    store.retain(|c| !c.mentions(&|x| roles.contains(x)));
    out.clauses = store.into_clauses();
    Ok(out)
}

fn occurrences(store: &ClauseStore, a: &Name) -> usize {
    store.occurrence_count(&Literal::Pos(a.clone())) + store.occurrence_count(&Literal::Neg(a.clone()))
}

/// All resolvents on `a`.
fn resolve_on(g: &mut ProvenanceGraph, store: &ClauseStore, a: &Name) -> Vec<Clause> {
    let pos: Vec<Clause> = store.with_literal(&Literal::Pos(a.clone())).map(|(_, c)| c.clone()).collect();
    let neg: Vec<Clause> = store.with_literal(&Literal::Neg(a.clone())).map(|(_, c)| c.clone()).collect();
    let mut out = Vec::new();
    for p in &pos {
        assert!(!a.is_definer(), "A-Rule applied to definer {a}");
        for q in &neg {
            out.extend(a_rule(g, p, q, a));
        }
    }
    out
}

/// conE: eliminate the concept names outside `sigma` in ascending occurrence
/// order, then delete clauses over names that no role literal points to.
pub fn forget_concepts(n: &NormalizedOntology, sigma: &Signature) -> NormalizedOntology {
    let mut out = n.with_clauses(Vec::new());
    let mut store = ClauseStore::from_clauses(n.clauses.iter().cloned(), true);
    let mut pending: BTreeSet<Name> = n
        .signature()
        .concepts
        .into_iter()
        .filter(|a| !a.is_definer() && !sigma.contains(a))
        .collect();
    let mut under_role = BTreeSet::new();
    while let Some(a) = pending.iter().min_by_key(|a| (occurrences(&store, a), *a)).cloned() {
        pending.remove(&a);
        if store.with_filler(&a).next().is_some() {
            under_role.insert(a);
            continue;
        }
        for c in resolve_on(&mut out.graph, &store, &a) {
            store.insert(c);
        }
        store.retain(|c| !c.contains(&Literal::Pos(a.clone())) && !c.contains(&Literal::Neg(a.clone())));
    }
    // Names kept as fillers: saturate, their clauses stay until purged below.
    loop {
        let mut changed = false;
        for a in &under_role {
            for c in resolve_on(&mut out.graph, &store, a) {
                changed |= matches!(store.insert(c), Insert::Added(_));
            }
        }
        if !changed {
            break;
        }
    }
    loop {
        let purgeable: Vec<Name> = store
            .clauses()
            .iter()
            .flat_map(|c| c.literals().iter().filter_map(Literal::concept_name).cloned().collect::<Vec<_>>())
            .filter(|a| !sigma.contains(a) && store.with_filler(a).next().is_none())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if purgeable.is_empty() {
            break;
        }
        let set: BTreeSet<Name> = purgeable.into_iter().collect();
        store.retain(|c| !c.literals().iter().any(|l| l.concept_name().is_some_and(|a| set.contains(a))));
    }
    out.clauses = store.into_clauses();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::provenance::ProvenanceGraph;
    use crate::syntax::sort_literals;

    fn lit(s: &str) -> Literal {
        let name = |t: &str| {
            if let Some(i) = t.strip_prefix('D') {
                Name::definer(i.parse().unwrap())
            } else {
                Name::concept(t)
            }
        };
        if let Some(rest) = s.strip_prefix("E") {
            let (r, d) = rest.split_once('.').unwrap();
            return Literal::Ex(Name::role(r), Concept::Atom(name(d)));
        }
        if let Some(rest) = s.strip_prefix("V") {
            let (r, d) = rest.split_once('.').unwrap();
            return Literal::All(Name::role(r), Concept::Atom(name(d)));
        }
        match s.strip_prefix('-') {
            Some(t) => Literal::Neg(name(t)),
            None => Literal::Pos(name(s)),
        }
    }

    fn ontology(clauses: &[&[&str]]) -> NormalizedOntology {
        let mut graph = ProvenanceGraph::new();
        let clauses = clauses
            .iter()
            .enumerate()
            .map(|(i, ls)| graph.input(sort_literals(ls.iter().map(|s| lit(s))), BTreeSet::from([i])))
            .collect();
        NormalizedOntology { clauses, graph, ..Default::default() }
    }

    fn shown(n: &NormalizedOntology) -> BTreeSet<String> {
        n.clauses.iter().map(|c| c.to_string()).collect()
    }

    #[test]
    fn single_existential_conflict() {
        let n = ontology(&[&["A", "Et.D1"], &["-D1"]]);
        let sigma = Signature::new([Name::concept("A")]);
        let out = forget_roles(&n, &sigma).unwrap();
        assert_eq!(shown(&out), BTreeSet::from(["A".to_string(), "¬_D1".to_string()]));
    }

    #[test]
    fn roles_in_sigma_are_identity() {
        let n = ontology(&[&["-A", "Er.D1"], &["-D1", "B"]]);
        let sigma = Signature::new([Name::role("r")]);
        assert_eq!(shown(&forget_roles(&n, &sigma).unwrap()), shown(&n));
    }

    #[test]
    fn not_role_isolated_is_rejected() {
        let n = ontology(&[&["-A", "Er.D1"], &["-D1", "B"]]);
        assert!(matches!(forget_roles(&n, &Signature::default()), Err(Error::NotRoleIsolated)));
    }

    #[test]
    fn one_resolution_then_purge() {
        let n = ontology(&[&["A", "B"], &["-B", "C"]]);
        let sigma = Signature::new([Name::concept("A"), Name::concept("C")]);
        assert_eq!(shown(&forget_concepts(&n, &sigma)), BTreeSet::from(["A ⊔ C".to_string()]));
    }

    #[test]
    fn concepts_in_sigma_are_identity() {
        let n = ontology(&[&["A", "B"], &["-B", "C"]]);
        assert_eq!(shown(&forget_concepts(&n, &n.signature())), shown(&n));
    }

    #[test]
    fn definers_with_role_occurrence_survive() {
        let n = ontology(&[&["-A", "Er.D1"], &["-D1", "B"], &["-D2", "B"]]);
        let sigma = Signature::new([Name::concept("A"), Name::concept("B"), Name::role("r")]);
        let out = forget_concepts(&n, &sigma);
        assert_eq!(
            shown(&out),
            BTreeSet::from(["¬A ⊔ ∃r._D1".to_string(), "B ⊔ ¬_D1".to_string()])
        );
    }
}
