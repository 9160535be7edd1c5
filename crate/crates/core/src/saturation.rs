//! A-Rule / r-Rule saturation, definer conflict sets and role isolation.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::time::Duration;

use crate::error::Error;
use crate::locality::extract_star_module;
use crate::normalize::{definer_order, roles_of, NormalizedOntology};
use crate::provenance::ProvenanceGraph;
use crate::store::{ClauseStore, Insert};
use crate::syntax::{
    canonical_clause, CanonicalClause, Clause, ClauseId, Literal, Name, Quantifier, Signature,
};
use crate::Budget;

/// A set of definers whose conjunction is unsatisfiable, with the input
/// clauses its derivation used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConflictSet {
    pub definers: BTreeSet<Name>,
    pub premises: BTreeSet<ClauseId>,
}

/// A role-literal premise: the clause and the literal the rule consumes.
#[derive(Clone, Copy, Debug)]
pub struct RolePremise<'a> {
    pub clause: &'a Clause,
    pub literal: &'a Literal,
}

fn derive(g: &mut ProvenanceGraph, lits: Vec<Literal>, premises: &[ClauseId]) -> Option<Clause> {
    match canonical_clause(lits) {
        CanonicalClause::Clause(lits) => Some(g.derived(lits, premises)),
        CanonicalClause::Tautology => None,
    }
}

/// `C₁ ⊔ A, ¬A ⊔ C₂ ⊢ C₁ ⊔ C₂`; `None` when the resolvent is a tautology.
pub fn a_rule(g: &mut ProvenanceGraph, c1: &Clause, c2: &Clause, a: &Name) -> Option<Clause> {
    let pos = Literal::Pos(a.clone());
    let neg = Literal::Neg(a.clone());
    assert!(c1.contains(&pos) && c2.contains(&neg), "A-Rule premises do not match on {a}");
    let lits = c1
        .literals()
        .iter()
        .filter(|l| **l != pos)
        .chain(c2.literals().iter().filter(|l| **l != neg))
        .cloned();
    derive(g, lits.collect(), &[c1.id, c2.id])
}

fn filler_of(l: &Literal) -> &Name {
    l.filler_name().expect("role premise must have a named filler")
}

/// `C₁ ⊔ ∃r.D₁, {Cⱼ ⊔ ∀r.Dⱼ}, K ⊢ C₁ ⊔ … ⊔ Cₙ` where `K` is `¬D₁ ⊔ … ⊔ ¬Dₙ`
/// or `¬D₂ ⊔ … ⊔ ¬Dₙ`.  Panics if the premises do not fit.
pub fn r_rule(
    g: &mut ProvenanceGraph,
    existential: RolePremise<'_>,
    universals: &[RolePremise<'_>],
    k: &Clause,
    r: &Name,
) -> Option<Clause> {
    let check = |p: &RolePremise<'_>, q: Quantifier| {
        let (pq, pr, _) = p.literal.restriction().expect("role premise must be a role literal");
        assert!(pq == q && pr == r && p.clause.contains(p.literal), "r-Rule premise mismatch");
    };
    check(&existential, Quantifier::Exists);
    universals.iter().for_each(|u| check(u, Quantifier::Forall));
    assert!(k.literals().iter().all(|l| matches!(l, Literal::Neg(_))), "K must be all-negative");
    let ks: BTreeSet<&Name> = k.literals().iter().filter_map(Literal::concept_name).collect();
    let mut with_d1: BTreeSet<&Name> = universals.iter().map(|u| filler_of(u.literal)).collect();
    let without_d1 = with_d1.clone();
    with_d1.insert(filler_of(existential.literal));
    assert!(ks == with_d1 || ks == without_d1, "K does not match the premise fillers");
    let mut lits = Vec::new();
    let mut ids = vec![existential.clause.id, k.id];
    for p in std::iter::once(&existential).chain(universals) {
        lits.extend(p.clause.literals().iter().filter(|l| *l != p.literal).cloned());
        ids.push(p.clause.id);
    }
    derive(g, lits, &ids)
}

/// The maximal non-definer concept-name literal, which alone may be resolved on.
fn max_concept_literal(c: &Clause) -> Option<&Literal> {
    c.literals()
        .iter()
        .filter(|l| l.concept_name().is_some_and(|n| !n.is_definer()))
        .max_by(|a, b| a.concept_name().cmp(&b.concept_name()))
}

fn is_role_only(c: &Clause) -> bool {
    c.literals().iter().all(|l| match l {
        Literal::Pos(n) | Literal::Neg(n) => n.is_definer(),
        _ => true,
    })
}

fn is_conflict_clause(c: &Clause) -> bool {
    c.literals().iter().all(|l| l.negated_definer().is_some())
}

/// Given-clause saturation under ordered A-Rule and the r-Rule restricted to
/// premises without plain concept literals.  Derives every conflict clause
/// needed for conflict-set completeness.
struct Saturator {
    graph: ProvenanceGraph,
    active: ClauseStore,
    passive: VecDeque<Clause>,
    ex_by_role: HashMap<Name, Vec<usize>>,
    budget: Budget,
}

impl Saturator {
    fn new(graph: ProvenanceGraph, clauses: impl IntoIterator<Item = Clause>, budget: Budget) -> Self {
        Saturator {
            graph,
            active: ClauseStore::new(true),
            passive: clauses.into_iter().collect(),
            ex_by_role: HashMap::new(),
            budget,
        }
    }

    fn run(&mut self) -> Result<(), ()> {
        while let Some(given) = self.passive.pop_front() {
            if self.budget.exhausted() {
                return Err(());
            }
            let Insert::Added(slot) = self.active.insert(given.clone()) else {
                continue;
            };
            if given.literals().is_empty() {
                return Ok(());
            }
            if is_role_only(&given) {
                for l in given.literals() {
                    if let Literal::Ex(r, _) = l {
                        self.ex_by_role.entry(r.clone()).or_default().push(slot);
                    }
                }
            }
            for c in self.infer(slot, &given) {
                if !self.active.is_subsumed(c.literals()) {
                    self.passive.push_back(c);
                }
            }
        }
        Ok(())
    }

    fn infer(&mut self, slot: usize, given: &Clause) -> Vec<Clause> {
        let mut out = Vec::new();
        if let Some(max) = max_concept_literal(given) {
            let (a, partner_lit) = match max {
                Literal::Pos(a) => (a, Literal::Neg(a.clone())),
                Literal::Neg(a) => (a, Literal::Pos(a.clone())),
                _ => unreachable!(),
            };
            let partners: Vec<Clause> = self
                .active
                .with_literal(&partner_lit)
                .filter(|(_, c)| max_concept_literal(c) == Some(&partner_lit))
                .map(|(_, c)| c.clone())
                .collect();
            for p in partners {
                let (pos, neg) = if matches!(max, Literal::Pos(_)) { (given, &p) } else { (&p, given) };
                out.extend(a_rule(&mut self.graph, pos, neg, a));
            }
            return out;
        }
        let ks: Vec<Clause> = if is_conflict_clause(given) {
            vec![given.clone()]
        } else {
            let has_ex = given.literals().iter().any(|l| matches!(l, Literal::Ex(..)));
            let mut ks: BTreeMap<usize, Clause> = BTreeMap::new();
            if has_ex {
                for (i, c) in self.active.all_negative() {
                    if is_conflict_clause(c) {
                        ks.insert(i, c.clone());
                    }
                }
            } else {
                for l in given.literals() {
                    if let Some(d) = l.filler_name() {
                        for (i, c) in self.active.with_literal(&Literal::Neg(d.clone())) {
                            if is_conflict_clause(c) {
                                ks.insert(i, c.clone());
                            }
                        }
                    }
                }
            }
            ks.into_values().collect()
        };
        for k in ks {
            out.extend(self.r_inferences(&k, slot));
        }
        out
    }

    /// Role-only premises carrying `q r.d`.
    fn premises_for(&self, q: Quantifier, r: &Name, d: &Name) -> Vec<(usize, Literal)> {
        self.active
            .with_filler(d)
            .filter(|(_, c)| is_role_only(c))
            .flat_map(|(i, c)| {
                c.literals()
                    .iter()
                    .filter(|l| matches!(l.restriction(), Some((lq, lr, _)) if lq == q && lr == r) && l.filler_name() == Some(d))
                    .map(move |l| (i, l.clone()))
            })
            .collect()
    }

    /// All r-Rule conclusions using `k` whose premises include the clause in `must`
    /// (either as `k` itself or as a role premise).
    fn r_inferences(&mut self, k: &Clause, must: usize) -> Vec<Clause> {
        let ds: Vec<Name> = k.negative_definers().cloned().collect();
        let k_slot_is_must = self.active.get(must).is_some_and(|c| c.id == k.id);
        let mut roles: Option<BTreeSet<Name>> = None;
        for d in &ds {
            let rs: BTreeSet<Name> = self
                .active
                .with_filler(d)
                .flat_map(|(_, c)| {
                    c.literals()
                        .iter()
                        .filter(|l| l.filler_name() == Some(d))
                        .filter_map(|l| l.restriction().map(|(_, r, _)| r.clone()))
                        .collect::<Vec<_>>()
                })
                .collect();
            roles = Some(match roles {
                None => rs,
                Some(prev) => prev.intersection(&rs).cloned().collect(),
            });
        }
        let mut out = Vec::new();
        let roles: BTreeSet<Name> = match roles {
            Some(r) => r,
            None => self.ex_by_role.keys().cloned().collect(),
        };
        for r in roles {
            let universal: Vec<Vec<(usize, Literal)>> = ds
                .iter()
                .map(|d| self.premises_for(Quantifier::Forall, &r, d))
                .collect();
            for (i, d) in ds.iter().enumerate() {
                let mut lists = vec![self.premises_for(Quantifier::Exists, &r, d)];
                lists.extend(universal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, l)| l.clone()));
                self.combine(k, &r, lists, k_slot_is_must, must, &mut out);
            }
            let extra: Vec<(usize, Literal)> = self
                .ex_by_role
                .get(&r)
                .into_iter()
                .flatten()
                .filter_map(|&i| self.active.get(i).map(|c| (i, c)))
                .flat_map(|(i, c)| {
                    c.literals()
                        .iter()
                        .filter(|l| matches!(l, Literal::Ex(lr, _) if *lr == r))
                        .map(move |l| (i, l.clone()))
                })
                .collect();
            let mut lists = vec![extra];
            lists.extend(universal);
            self.combine(k, &r, lists, k_slot_is_must, must, &mut out);
        }
        out
    }

    /// Cartesian product over premise lists; the first list holds the existential.
    fn combine(
        &mut self,
        k: &Clause,
        r: &Name,
        lists: Vec<Vec<(usize, Literal)>>,
        k_is_must: bool,
        must: usize,
        out: &mut Vec<Clause>,
    ) {
        if lists.iter().any(Vec::is_empty) {
            return;
        }
        if !k_is_must && !lists.iter().any(|l| l.iter().any(|(i, _)| *i == must)) {
            return;
        }
        let mut idx = vec![0usize; lists.len()];
        loop {
            let picked: Vec<&(usize, Literal)> = idx.iter().zip(&lists).map(|(&i, l)| &l[i]).collect();
            if k_is_must || picked.iter().any(|(i, _)| *i == must) {
                let clauses: Vec<Clause> = picked
                    .iter()
                    .map(|(i, _)| self.active.get(*i).unwrap().clone())
                    .collect();
                let (ex_lit, un) = picked.split_first().unwrap();
                let existential = RolePremise { clause: &clauses[0], literal: &ex_lit.1 };
                let universals: Vec<RolePremise<'_>> = un
                    .iter()
                    .zip(&clauses[1..])
                    .map(|((_, l), c)| RolePremise { clause: c, literal: l })
                    .collect();
                if existential.literal.restriction().map(|x| x.0) == Some(Quantifier::Exists) {
                    out.extend(r_rule(&mut self.graph, existential, &universals, k, r));
                }
            }
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    return;
                }
                idx[pos] += 1;
                if idx[pos] < lists[pos].len() {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }

    fn conflicts(&self) -> Vec<ConflictSet> {
        let mut found: Vec<(BTreeSet<Name>, ClauseId)> = self
            .active
            .iter()
            .filter(|(_, c)| is_conflict_clause(c))
            .map(|(_, c)| (c.negative_definers().cloned().collect(), c.id))
            .collect();
        found.sort();
        minimize(found)
            .into_iter()
            .map(|(definers, id)| ConflictSet {
                definers,
                premises: self.graph.input_ancestors([id]),
            })
            .collect()
    }
}

fn minimize(mut sets: Vec<(BTreeSet<Name>, ClauseId)>) -> Vec<(BTreeSet<Name>, ClauseId)> {
    sets.sort_by_key(|(s, _)| s.len());
    let mut kept: Vec<(BTreeSet<Name>, ClauseId)> = Vec::new();
    for (s, id) in sets {
        if !kept.iter().any(|(k, _)| k.is_subset(&s)) {
            kept.push((s, id));
        }
    }
    kept.sort();
    kept
}

/// Complete conflict sets of `n` by saturating every clause together.
pub fn conflict_sets(n: &NormalizedOntology, budget: Budget) -> Result<Vec<ConflictSet>, Error> {
    let mut sat = Saturator::new(n.graph.clone(), n.clauses.iter().cloned(), budget);
    sat.run().map_err(|_| Error::BudgetExceeded {
        uncovered: n.signature().roles.into_iter().collect(),
    })?;
    Ok(sat.conflicts())
}

/// Conflict sets restricted to definers under one role, computed per role on
/// a locality module for that role's definers.
#[derive(Clone, Debug, Default)]
pub struct RoleConflicts {
    pub sets: Vec<ConflictSet>,
    pub uncovered: Vec<Name>,
}

pub fn conflict_sets_per_role<'a>(
    n: &NormalizedOntology,
    roles: impl IntoIterator<Item = &'a Name>,
    per_role: Option<Duration>,
) -> RoleConflicts {
    let rol = roles_of(&n.clauses);
    let as_ontology = n.to_ontology();
    let mut out = RoleConflicts::default();
    let mut seen: BTreeSet<BTreeSet<Name>> = BTreeSet::new();
    for r in roles {
        let sigma_r: BTreeSet<Name> = rol
            .iter()
            .filter(|(d, rs)| d.is_definer() && rs.contains(r))
            .map(|(d, _)| d.clone())
            .collect();
        if sigma_r.is_empty() {
            continue;
        }
        let module = extract_star_module(&as_ontology, &Signature::new(sigma_r.iter().cloned()));
        let clauses = module.entries.iter().map(|e| n.clauses[e.index].clone());
        let budget = per_role.map_or_else(Budget::unlimited, Budget::new);
        let mut sat = Saturator::new(n.graph.clone(), clauses, budget);
        if sat.run().is_err() {
            out.uncovered.push(r.clone());
            continue;
        }
        for cs in sat.conflicts() {
            if cs.definers.is_subset(&sigma_r) && seen.insert(cs.definers.clone()) {
                out.sets.push(cs);
            }
        }
    }
    out.sets.sort_by(|a, b| a.definers.cmp(&b.definers));
    out
}

/// Conflict sets for the roles outside `sigma`, as role isolation needs them.
pub fn isolation_conflicts(
    n: &NormalizedOntology,
    sigma: &Signature,
    per_role: Option<Duration>,
) -> RoleConflicts {
    let roles: BTreeSet<Name> = n.signature().roles.difference(&sigma.roles).cloned().collect();
    conflict_sets_per_role(n, &roles, per_role)
}

/// cl_Σ plus the conflict clauses whose definers all occur under one role
/// outside Σ, with at most one of them existential.
pub fn role_isolate(n: &NormalizedOntology, sigma: &Signature, conflicts: &[ConflictSet]) -> NormalizedOntology {
    let rol = roles_of(&n.clauses);
    let order = definer_order(n);
    let roles_in_sigma = |d: &Name| rol.get(d).is_none_or(|rs| rs.is_subset(&sigma.roles));
    let kept: Vec<Clause> = n
        .clauses
        .iter()
        .filter(|c| c.negative_definers().all(|d| order.above(d).iter().all(roles_in_sigma)))
        .cloned()
        .collect();
    let mut occurrence: BTreeMap<Name, Vec<(Quantifier, Name)>> = BTreeMap::new();
    for c in &kept {
        for l in c.literals() {
            if let (Some((q, r, _)), Some(d)) = (l.restriction(), l.filler_name()) {
                occurrence.entry(d.clone()).or_default().push((q, r.clone()));
            }
        }
    }
    let mut out = n.with_clauses(Vec::new());
    let mut store = ClauseStore::from_clauses(kept, false);
    for cs in conflicts {
        if !qualifies(cs, sigma, &occurrence) {
            continue;
        }
        let lits = cs.definers.iter().map(|d| Literal::Neg(d.clone())).collect();
        let premises: Vec<ClauseId> = cs.premises.iter().copied().collect();
        let c = out.graph.derived(lits, &premises);
        store.insert(c);
    }
    out.clauses = store.into_clauses();
    out
}

fn qualifies(
    cs: &ConflictSet,
    sigma: &Signature,
    occurrence: &BTreeMap<Name, Vec<(Quantifier, Name)>>,
) -> bool {
    if cs.definers.is_empty() {
        return true;
    }
    let mut candidates: Option<BTreeSet<&Name>> = None;
    for d in &cs.definers {
        let rs: BTreeSet<&Name> = occurrence
            .get(d)
            .into_iter()
            .flatten()
            .map(|(_, r)| r)
            .filter(|r| !sigma.roles.contains(r))
            .collect();
        candidates = Some(match candidates {
            None => rs,
            Some(prev) => prev.intersection(&rs).copied().collect(),
        });
    }
    candidates.into_iter().flatten().any(|r| {
        let existentials = cs
            .definers
            .iter()
            .filter(|d| {
                let occ = occurrence.get(d).map(Vec::as_slice).unwrap_or_default();
                !occ.iter().any(|(q, x)| *q == Quantifier::Forall && x == r)
            })
            .count();
        existentials <= 1
    })
}

/// Out_Σ: concept names occurring as filler of some role outside Σ.
pub fn out_names(clauses: &[Clause], sigma: &Signature) -> BTreeSet<Name> {
    roles_of(clauses)
        .into_iter()
        .filter(|(_, rs)| !rs.is_subset(&sigma.roles))
        .map(|(a, _)| a)
        .collect()
}

/// Every clause is either all-negative over Out_Σ or free of Out_Σ
/// concept-name literals.
pub fn is_role_isolated(clauses: &[Clause], sigma: &Signature) -> bool {
    let out = out_names(clauses, sigma);
    clauses.iter().all(|c| {
        let c1 = c
            .literals()
            .iter()
            .all(|l| matches!(l, Literal::Neg(a) if out.contains(a)));
        let c2 = c
            .literals()
            .iter()
            .all(|l| l.concept_name().is_none_or(|a| !out.contains(a)));
        c1 || c2
    })
}
