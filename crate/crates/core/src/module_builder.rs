//! Assembles general modules, deductive modules and uniform interpolants
//! from the forgetting pipeline.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::forgetting::{forget_concepts, forget_roles};
use crate::locality::extract_star_module;
use crate::normalize::{clausify, opaque_clauses, DefinerMap, NormalizedOntology};
use crate::provenance::ProvenanceGraph;
use crate::report::RunReport;
use crate::saturation::{isolation_conflicts, role_isolate};
use crate::store::{ClauseStore, Insert};
use crate::syntax::{
    canonical_clause, clause_concept, is_tautology, sort_literals, Axiom, CanonicalClause, Clause,
    ClauseId, Concept, Literal, Name, Ontology, Quantifier, Signature,
};
use crate::Budget;

/// Budgets and switches for one pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Time allowed for the final subsumption deletion.
    pub subsumption_budget: Duration,
    /// Time allowed per role for conflict saturation; `None` for no limit.
    pub conflict_budget: Option<Duration>,
    /// Restrict the input to its ⊤⊥*-module for the signature first.
    pub star_module: bool,
    /// Time allowed for definer elimination in uniform interpolation.
    pub ui_budget: Option<Duration>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            subsumption_budget: Duration::from_secs(10),
            conflict_budget: Some(Duration::from_secs(30)),
            star_module: true,
            ui_budget: Some(Duration::from_secs(60)),
        }
    }
}

/// Outcome quality of uniform interpolation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UiStatus {
    /// All definers eliminated and the result is inside the signature.
    Exact,
    /// Cyclic definers were substituted back; the result leaves the signature.
    Approximate,
    /// Definer elimination ran out of budget; the result is gm*.
    GeneralModuleOnly,
}

impl fmt::Display for UiStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UiStatus::Exact => "exact",
            UiStatus::Approximate => "approximate",
            UiStatus::GeneralModuleOnly => "general-module-only",
        })
    }
}

/// Intermediate clause sets of one run.
#[derive(Clone, Debug)]
pub struct Trace {
    pub cl: NormalizedOntology,
    pub ri: NormalizedOntology,
    pub role_forgotten: NormalizedOntology,
    pub concept_forgotten: NormalizedOntology,
    /// Signature actually used: the request plus any widened roles.
    pub sigma: Signature,
    pub widened: Vec<Name>,
    pub stage_times_ms: BTreeMap<String, f64>,
}

fn timed<T>(times: &mut BTreeMap<String, f64>, stage: &str, f: impl FnOnce() -> T) -> T {
    let start = Instant::now();
    let out = f();
    *times.entry(stage.to_string()).or_default() += start.elapsed().as_secs_f64() * 1e3;
    out
}

/// clausify → role isolation → rolE → conE.  Roles whose conflict
/// saturation runs out of budget are moved into the signature.
pub fn run_pipeline(o: &Ontology, sigma: &Signature, cfg: &PipelineConfig) -> Result<Trace, Error> {
    let mut times = BTreeMap::new();
    let input = if cfg.star_module {
        timed(&mut times, "module", || extract_star_module(o, sigma))
    } else {
        o.clone()
    };
    let cl = timed(&mut times, "cl", || clausify(&input));
    let conflicts = timed(&mut times, "conflicts", || isolation_conflicts(&cl, sigma, cfg.conflict_budget));
    let mut sigma = sigma.clone();
    for r in &conflicts.uncovered {
        sigma.insert(r.clone());
    }
    let ri = timed(&mut times, "ri", || role_isolate(&cl, &sigma, &conflicts.sets));
    let role_forgotten = timed(&mut times, "rolE", || forget_roles(&ri, &sigma))?;
    let concept_forgotten = timed(&mut times, "conE", || forget_concepts(&role_forgotten, &sigma));
    Ok(Trace {
        cl,
        ri,
        role_forgotten,
        concept_forgotten,
        sigma,
        widened: conflicts.uncovered,
        stage_times_ms: times,
    })
}

/// Drops every clause that has a proper subset in `clauses` (and duplicates).
/// Returns whether the budget ran out, in which case the remaining clauses
/// are kept unchecked.
pub fn delete_subsumed(clauses: &[Clause], budget: Budget) -> (Vec<Clause>, bool) {
    let mut order: Vec<&Clause> = clauses.iter().collect();
    order.sort_by_key(|c| c.literals().len());
    let mut store = ClauseStore::new(true);
    let mut unchecked = HashSet::new();
    let mut hit = false;
    for c in order {
        hit = hit || budget.exhausted();
        if hit {
            unchecked.insert(c.id);
        } else {
            store.insert(c.clone());
        }
    }
    let kept: HashSet<ClauseId> = store.iter().map(|(_, c)| c.id).chain(unchecked).collect();
    (clauses.iter().filter(|c| kept.contains(&c.id)).cloned().collect(), hit)
}

/// `⊤ ⊑ L₁ ⊔ … ⊔ Lₙ` with every definer replaced by its concept.
pub fn substitute_clause(c: &Clause, defs: &DefinerMap) -> Axiom {
    Axiom::new(Concept::Top, defs.substitute(&clause_concept(c.literals())))
}

pub fn substitute_definers(clauses: &[Clause], defs: &DefinerMap) -> Ontology {
    Ontology::from_axioms(clauses.iter().map(|c| substitute_clause(c, defs)))
}

fn conjuncts(c: Concept) -> Vec<Concept> {
    match c {
        Concept::And(cs) => cs,
        Concept::Top => vec![],
        other => vec![other],
    }
}

fn disjuncts(c: Concept) -> Vec<Concept> {
    match c {
        Concept::Or(cs) => cs,
        Concept::Bottom => vec![],
        other => vec![other],
    }
}

/// Moves negated disjuncts to the left (`C₁ ⊑ ¬C₂ ⊔ C₃ ⇒ C₁⊓C₂ ⊑ C₃`,
/// `C₁ ⊑ Qr.¬C₂ ⊔ C₃ ⇒ C₁⊓Q̄r.C₂ ⊑ C₃`), drops `∃r.⊥` disjuncts and
/// returns `None` for tautologies.
pub fn simplify_axiom(a: &Axiom) -> Option<Axiom> {
    let mut lhs = conjuncts(a.lhs.clone());
    let mut rhs = Vec::new();
    let mut queue = disjuncts(a.rhs.clone());
    while let Some(d) = queue.pop() {
        match d {
            Concept::Top => return None,
            Concept::Forall(_, ref f) if **f == Concept::Top => return None,
            Concept::Exists(_, ref f) if **f == Concept::Bottom => {}
            Concept::Not(c) => lhs.push(*c),
            Concept::Exists(r, f) if matches!(*f, Concept::Not(_)) => {
                lhs.push(Concept::forall(r, Concept::not(*f)));
            }
            Concept::Forall(r, f) if matches!(*f, Concept::Not(_)) => {
                lhs.push(Concept::exists(r, Concept::not(*f)));
            }
            Concept::Or(cs) => queue.extend(cs),
            other => rhs.push(other),
        }
    }
    let lhs = Concept::and(lhs);
    let left = conjuncts(lhs.clone());
    if left.iter().any(|c| *c == Concept::Bottom || matches!(c, Concept::Exists(_, f) if **f == Concept::Bottom)) {
        return None;
    }
    let rhs = Concept::or(rhs);
    let right = disjuncts(rhs.clone());
    if left.iter().any(|c| right.contains(c)) {
        return None;
    }
    Some(Axiom::new(lhs, rhs))
}

/// Applies [`simplify_axiom`] to every statement, dropping tautologies and
/// repeated axioms.
pub fn simplify_axioms(o: &Ontology) -> Ontology {
    let mut seen = BTreeSet::new();
    Ontology {
        entries: o
            .entries
            .iter()
            .filter_map(|e| {
                let axiom = simplify_axiom(&e.axiom)?;
                seen.insert(axiom.clone()).then_some(crate::syntax::Entry { index: e.index, axiom })
            })
            .collect(),
    }
}

fn role_of(l: &Literal) -> Option<&Name> {
    l.restriction().map(|(_, r, _)| r)
}

/// conD-Elim for one negative-definer clause `k`, with any premise definer as trigger.
fn cond_elim(g: &mut ProvenanceGraph, store: &ClauseStore, k: &Clause) -> Vec<Clause> {
    let ds: Vec<&Name> = k.negative_definers().collect();
    let roles: BTreeSet<Name> = store
        .with_filler(ds[0])
        .flat_map(|(_, c)| {
            c.literals()
                .iter()
                .filter(|l| l.filler_name() == Some(ds[0]))
                .filter_map(role_of)
                .cloned()
                .collect::<Vec<_>>()
        })
        .collect();
    let mut out = Vec::new();
    for r in &roles {
        let with = |q: Quantifier, d: &Name| -> Vec<(Clause, Literal)> {
            let lit = Literal::role(q, r.clone(), Concept::Atom(d.clone()));
            store.with_literal(&lit).map(|(_, c)| (c.clone(), lit.clone())).collect()
        };
        for (i, d1) in ds.iter().enumerate() {
            let triggers: Vec<(Clause, Literal)> =
                with(Quantifier::Exists, d1).into_iter().chain(with(Quantifier::Forall, d1)).collect();
            let mut picks: Vec<Vec<(Clause, Literal)>> = triggers.into_iter().map(|t| vec![t]).collect();
            for (j, dj) in ds.iter().enumerate() {
                if j == i {
                    continue;
                }
                let partners = with(Quantifier::Forall, dj);
                picks = picks
                    .into_iter()
                    .flat_map(|p| {
                        partners.iter().map(move |x| {
                            let mut p = p.clone();
                            p.push(x.clone());
                            p
                        })
                    })
                    .collect();
            }
            for pick in picks {
                let (q1, _, _) = pick[0].1.restriction().unwrap();
                let mut lits: Vec<Literal> = Vec::new();
                let mut ids = vec![k.id];
                for (c, l) in &pick {
                    lits.extend(c.literals().iter().filter(|x| *x != l).cloned());
                    ids.push(c.id);
                }
                lits.push(Literal::role(q1, r.clone(), Concept::Bottom));
                if let CanonicalClause::Clause(lits) = canonical_clause(lits) {
                    out.push(g.derived(lits, &ids));
                }
            }
        }
    }
    out
}

/// Op1: resolve every negative-definer clause away with conD-Elim, then
/// delete those clauses.
pub fn op1_cond_elim(clauses: &[Clause], g: &mut ProvenanceGraph) -> Vec<Clause> {
    let mut store = ClauseStore::from_clauses(clauses.iter().cloned(), true);
    let mut done: BTreeSet<Vec<Literal>> = BTreeSet::new();
    loop {
        let ks: Vec<Clause> = store
            .all_negative()
            .filter(|(_, c)| c.is_negative_definer_clause())
            .map(|(_, c)| c.clone())
            .collect();
        if ks.is_empty() {
            break;
        }
        loop {
            let mut changed = false;
            for k in &ks {
                for c in cond_elim(g, &store, k) {
                    changed |= matches!(store.insert(c), Insert::Added(_));
                }
            }
            if !changed {
                break;
            }
        }
        for k in &ks {
            done.insert(k.literals().to_vec());
        }
        store.retain(|c| !(c.is_negative_definer_clause() && done.contains(c.literals())));
    }
    store.into_clauses()
}

fn definers_in(clauses: &[Clause]) -> BTreeSet<Name> {
    let mut out = BTreeSet::new();
    for c in clauses {
        out.extend(c.signature().concepts.into_iter().filter(Name::is_definer));
    }
    out
}

fn without(c: &Clause, l: &Literal) -> Vec<Literal> {
    c.literals().iter().filter(|x| *x != l).cloned().collect()
}

/// Op2: inline definers whose defining clauses are otherwise definer-free,
/// one at a time in name order.  `∀r.⊤` results are kept; callers drop them.
pub fn op2_dprop(clauses: &[Clause], g: &mut ProvenanceGraph) -> Vec<Clause> {
    let mut cur = clauses.to_vec();
    loop {
        let eligible = definers_in(&cur).into_iter().find(|d| {
            let neg = Literal::Neg(d.clone());
            cur.iter()
                .filter(|c| c.contains(&neg))
                .all(|c| without(c, &neg).iter().all(|l| !l.mentions(&|n| n.is_definer())))
        });
        let Some(d) = eligible else {
            return cur;
        };
        let neg = Literal::Neg(d.clone());
        let defining: Vec<&Clause> = cur.iter().filter(|c| c.contains(&neg)).collect();
        let filler = Concept::and(defining.iter().map(|c| clause_concept(&without(c, &neg))));
        let mut ids: Vec<ClauseId> = defining.iter().map(|c| c.id).collect();
        let mut next = Vec::new();
        let mut seen = BTreeSet::new();
        for c in &cur {
            if c.contains(&neg) {
                continue;
            }
            let points_to_d = c.literals().iter().any(|l| l.filler_name() == Some(&d));
            let clause = if points_to_d {
                let lits = c.literals().iter().map(|l| match l.restriction() {
                    Some((q, r, _)) if l.filler_name() == Some(&d) => Literal::role(q, r.clone(), filler.clone()),
                    _ => l.clone(),
                });
                ids.push(c.id);
                let clause = g.derived(sort_literals(lits), &ids);
                ids.pop();
                clause
            } else {
                c.clone()
            };
            if seen.insert(clause.literals().to_vec()) {
                next.push(clause);
            }
        }
        cur = next;
    }
}

pub fn drop_tautologies(clauses: Vec<Clause>) -> Vec<Clause> {
    clauses.into_iter().filter(|c| !is_tautology(c.literals())).collect()
}

/// Result ontology together with the clauses that produced its axioms.
#[derive(Clone, Debug)]
pub struct Assembled {
    pub ontology: Ontology,
    pub clauses: Vec<Clause>,
    pub subsumption_budget_hit: bool,
}

/// Subsumption deletion, definer substitution and simplification.
pub fn assemble(clauses: &[Clause], defs: &DefinerMap, cfg: &PipelineConfig) -> Assembled {
    let (kept, hit) = delete_subsumed(clauses, Budget::new(cfg.subsumption_budget));
    let mut seen = BTreeSet::new();
    let mut axioms = Vec::new();
    let mut used = Vec::new();
    for c in kept {
        if let Some(a) = simplify_axiom(&substitute_clause(&c, defs)) {
            if seen.insert(a.clone()) {
                axioms.push(a);
            }
            used.push(c);
        }
    }
    Assembled {
        ontology: Ontology::from_axioms(axioms),
        clauses: used,
        subsumption_budget_hit: hit,
    }
}

/// Clause sets of the definer-elimination stages.
#[derive(Clone, Debug)]
pub struct Eliminated {
    pub op1: Vec<Clause>,
    pub op2: Vec<Clause>,
    pub graph: ProvenanceGraph,
}

/// Op1 then Op2 on the conE output, tautologies kept in `op2`.
pub fn eliminate_definers(trace: &mut Trace) -> Eliminated {
    let mut graph = trace.concept_forgotten.graph.clone();
    let conc = trace.concept_forgotten.clauses.clone();
    let op1 = timed(&mut trace.stage_times_ms, "op1", || op1_cond_elim(&conc, &mut graph));
    let op2 = timed(&mut trace.stage_times_ms, "op2", || op2_dprop(&op1, &mut graph));
    Eliminated { op1, op2, graph }
}

/// Which result to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Gm,
    GmStar,
    Dm,
    Ui,
    Locality,
}

/// Result ontology plus run metadata.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub ontology: Ontology,
    pub ui_status: Option<UiStatus>,
    pub report: RunReport,
}

pub fn build(method: Method, o: &Ontology, sigma: &Signature, cfg: &PipelineConfig) -> Result<Outcome, Error> {
    let mut report = RunReport {
        input_length: o.length(),
        ..Default::default()
    };
    let (ontology, ui_status) = if method == Method::Locality {
        let start = Instant::now();
        let m = extract_star_module(o, sigma);
        report.stage_times_ms.insert("module".into(), start.elapsed().as_secs_f64() * 1e3);
        (m, None)
    } else {
        let mut trace = run_pipeline(o, sigma, cfg)?;
        report.cl_length = trace.cl.length();
        report.ri_clauses = trace.ri.clauses.len();
        report.widened_signature = trace.widened.iter().map(|n| n.text().to_string()).collect();
        let defs = trace.concept_forgotten.definers.clone();
        let (ontology, status, hit) = match method {
            Method::Gm => {
                let conc = trace.concept_forgotten.clauses.clone();
                let a = timed(&mut trace.stage_times_ms, "assemble", || assemble(&conc, &defs, cfg));
                (a.ontology, None, a.subsumption_budget_hit)
            }
            Method::GmStar | Method::Dm => {
                let el = eliminate_definers(&mut trace);
                let a = timed(&mut trace.stage_times_ms, "assemble", || {
                    assemble(&drop_tautologies(el.op2.clone()), &defs, cfg)
                });
                if method == Method::Dm {
                    let origins = el.graph.origins(a.clauses.iter().map(|c| c.id));
                    (o.restrict(&origins), None, a.subsumption_budget_hit)
                } else {
                    (a.ontology, None, a.subsumption_budget_hit)
                }
            }
            Method::Ui => {
                let (ui, status, hit) = interpolate(&mut trace, sigma, cfg);
                (ui, Some(status), hit)
            }
            Method::Locality => unreachable!(),
        };
        report.stage_times_ms = trace.stage_times_ms;
        report.subsumption_budget_hit = hit;
        (ontology, status)
    };
    report.result_length = ontology.length();
    report.result_axioms = ontology.len();
    report.max_axiom_length = ontology.max_axiom_length();
    report.ui_status = ui_status.map(|s| s.to_string());
    Ok(Outcome { ontology, ui_status, report })
}

/// gm_Σ(O): conE output, subsumption-reduced, definers substituted, simplified.
pub fn general_module(o: &Ontology, sigma: &Signature) -> Result<Ontology, Error> {
    Ok(build(Method::Gm, o, sigma, &PipelineConfig::default())?.ontology)
}

/// gm*_Σ(O): as [`general_module`] with Op1 and Op2 applied before substitution.
pub fn general_module_opt(o: &Ontology, sigma: &Signature) -> Result<Ontology, Error> {
    Ok(build(Method::GmStar, o, sigma, &PipelineConfig::default())?.ontology)
}

/// dm_Σ(O): the input statements the gm*_Σ(O) clauses were derived from.
pub fn deductive_module(o: &Ontology, sigma: &Signature) -> Result<Ontology, Error> {
    Ok(build(Method::Dm, o, sigma, &PipelineConfig::default())?.ontology)
}

pub fn uniform_interpolant(o: &Ontology, sigma: &Signature) -> Result<(Ontology, UiStatus), Error> {
    let out = build(Method::Ui, o, sigma, &PipelineConfig::default())?;
    Ok((out.ontology, out.ui_status.expect("ui run sets a status")))
}

fn interpolate(trace: &mut Trace, sigma: &Signature, cfg: &PipelineConfig) -> (Ontology, UiStatus, bool) {
    let el = eliminate_definers(trace);
    let defs = trace.concept_forgotten.definers.clone();
    let start_clauses = drop_tautologies(el.op2);
    let mut graph = el.graph;
    let budget = cfg.ui_budget.map_or_else(Budget::unlimited, Budget::new);
    let saturated = timed(&mut trace.stage_times_ms, "dres", || {
        eliminate_remaining(start_clauses.clone(), &defs, &mut graph, budget)
    });
    let Some(clauses) = saturated else {
        let a = assemble(&start_clauses, &defs, cfg);
        return (a.ontology, UiStatus::GeneralModuleOnly, a.subsumption_budget_hit);
    };
    let a = assemble(&clauses, &defs, cfg);
    let status = if a.ontology.signature().is_subset(sigma) {
        UiStatus::Exact
    } else {
        UiStatus::Approximate
    };
    (a.ontology, status, a.subsumption_budget_hit)
}

/// Definers on a cycle of the filler dependency graph.
fn cyclic_definers(edges: &BTreeMap<Name, BTreeSet<Name>>) -> BTreeSet<Name> {
    let reach = |from: &Name| -> BTreeSet<Name> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&Name> = edges.get(from).into_iter().flatten().collect();
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(edges.get(n).into_iter().flatten());
            }
        }
        seen
    };
    edges.keys().filter(|d| reach(d).contains(*d)).cloned().collect()
}

/// Replaces the definers in `cyclic` by their concepts everywhere.
fn unfold(clauses: &[Clause], cyclic: &BTreeSet<Name>, defs: &DefinerMap, g: &mut ProvenanceGraph) -> Vec<Clause> {
    let replace = |c: &Concept| c.map_atoms(&|n| cyclic.contains(n).then(|| defs.concept_of(n).clone()));
    let mut out = Vec::new();
    for c in clauses {
        let negs: Vec<&Name> = c.negative_definers().filter(|d| cyclic.contains(*d)).collect();
        let rest: Vec<Literal> = c
            .literals()
            .iter()
            .filter(|l| !l.negated_definer().is_some_and(|d| cyclic.contains(d)))
            .map(|l| match l.restriction() {
                Some((q, r, f)) => Literal::role(q, r.clone(), replace(f)),
                None => l.clone(),
            })
            .collect();
        if negs.is_empty() && rest.as_slice() == c.literals() {
            out.push(c.clone());
            continue;
        }
        let guard = Concept::not(Concept::and(negs.iter().map(|d| defs.concept_of(d).clone())));
        let parts = if negs.is_empty() { vec![vec![]] } else { opaque_clauses(&guard) };
        for part in parts {
            if let CanonicalClause::Clause(lits) = canonical_clause(part.into_iter().chain(rest.iter().cloned())) {
                out.push(g.derived(lits, &[c.id]));
            }
        }
    }
    out
}

/// D-Res conclusions with the role literal `trigger` of clause `c` as main premise.
fn d_res(g: &mut ProvenanceGraph, store: &ClauseStore, c: &Clause, trigger: &Literal, ready: &BTreeSet<Name>) -> Vec<Clause> {
    const MAX_PARTNERS: usize = 10;
    let (q, r, _) = trigger.restriction().unwrap();
    let d1 = trigger.filler_name().unwrap();
    let defining: Vec<(BTreeSet<Name>, &Clause)> = store
        .iter()
        .map(|(_, c)| (c.negative_definers().cloned().collect::<BTreeSet<_>>(), c))
        .filter(|(n, _)| !n.is_empty() && n.is_subset(ready))
        .collect();
    let multi: Vec<&BTreeSet<Name>> = defining.iter().map(|(n, _)| n).filter(|n| n.len() > 1).collect();
    let linked: BTreeSet<&Name> = multi.iter().flat_map(|n| n.iter()).collect();
    let partners: Vec<(&Clause, Literal)> = store
        .iter()
        .flat_map(|(_, p)| {
            p.literals()
                .iter()
                .filter(|l| {
                    matches!(l, Literal::All(lr, Concept::Atom(dj)) if lr == r && dj != d1 && linked.contains(dj))
                })
                .map(move |l| (p, l.clone()))
                .collect::<Vec<_>>()
        })
        .take(MAX_PARTNERS)
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << partners.len()) {
        let chosen: Vec<&(&Clause, Literal)> =
            partners.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, p)| p).collect();
        let mut x: BTreeSet<Name> = BTreeSet::from([d1.clone()]);
        x.extend(chosen.iter().filter_map(|(_, l)| l.filler_name().cloned()));
        let justified = chosen.iter().all(|(_, l)| {
            let dj = l.filler_name().unwrap();
            multi.iter().any(|n| n.contains(dj) && n.is_subset(&x))
        });
        if !justified {
            continue;
        }
        let filler = Concept::and(defining.iter().filter(|(n, _)| n.is_subset(&x)).map(|(n, dc)| {
            clause_concept(
                &dc.literals()
                    .iter()
                    .filter(|l| !l.negated_definer().is_some_and(|d| n.contains(d)))
                    .cloned()
                    .collect::<Vec<_>>(),
            )
        }));
        let mut lits = without(c, trigger);
        let mut ids = vec![c.id];
        for (p, l) in &chosen {
            lits.extend(without(p, l));
            ids.push(p.id);
        }
        ids.extend(defining.iter().filter(|(n, _)| n.is_subset(&x)).map(|(_, dc)| dc.id));
        lits.push(Literal::role(q, r.clone(), filler));
        if let CanonicalClause::Clause(lits) = canonical_clause(lits) {
            out.push(g.derived(lits, &ids));
        }
    }
    out
}

/// Eliminates the definers left after Op1/Op2 round by round: cyclic
/// definers are unfolded, definers pointing to no other definer are
/// resolved away with D-Res.  `None` if the budget runs out.
fn eliminate_remaining(clauses: Vec<Clause>, defs: &DefinerMap, g: &mut ProvenanceGraph, budget: Budget) -> Option<Vec<Clause>> {
    let mut store = ClauseStore::from_clauses(clauses, true);
    loop {
        if budget.exhausted() {
            return None;
        }
        let present = definers_in(&store.clauses());
        if present.is_empty() {
            return Some(store.into_clauses());
        }
        let mut edges: BTreeMap<Name, BTreeSet<Name>> = present.iter().map(|d| (d.clone(), BTreeSet::new())).collect();
        for (_, c) in store.iter() {
            let targets: BTreeSet<Name> = c
                .literals()
                .iter()
                .filter_map(|l| l.restriction())
                .flat_map(|(_, _, f)| f.signature().concepts.into_iter().filter(Name::is_definer))
                .collect();
            for d in c.negative_definers() {
                edges.get_mut(d).unwrap().extend(targets.iter().cloned());
            }
        }
        let cyclic = cyclic_definers(&edges);
        if !cyclic.is_empty() {
            let next = unfold(&store.clauses(), &cyclic, defs, g);
            store = ClauseStore::from_clauses(drop_tautologies(next), true);
            continue;
        }
        let ready: BTreeSet<Name> = edges.iter().filter(|(_, t)| t.is_empty()).map(|(d, _)| d.clone()).collect();
        loop {
            if budget.exhausted() {
                return None;
            }
            let mut fresh = Vec::new();
            for (_, c) in store.iter() {
                for l in c.literals() {
                    if l.filler_name().is_some_and(|d| ready.contains(d)) {
                        fresh.extend(d_res(g, &store, c, l, &ready));
                    }
                }
            }
            let mut changed = false;
            for c in fresh {
                changed |= matches!(store.insert(c), Insert::Added(_));
            }
            if !changed {
                break;
            }
        }
        store.retain(|c| !c.mentions(&|n| ready.contains(n)));
    }
}
