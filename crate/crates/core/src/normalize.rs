//! Clausification into normal form with fresh definers for role fillers.

use std::collections::{BTreeMap, BTreeSet};

use crate::provenance::ProvenanceGraph;
use crate::syntax::{
    canonical_clause, CanonicalClause, Clause, Concept, Literal, Name, Ontology, Quantifier,
    Signature,
};

/// Definer bookkeeping: the concept each definer replaced and the role
/// literal it was introduced for.
#[derive(Clone, Debug, Default)]
pub struct DefinerMap {
    pub defs: BTreeMap<Name, Concept>,
    pub occurrence: BTreeMap<Name, (Quantifier, Name)>,
}

impl DefinerMap {
    pub fn concept_of(&self, d: &Name) -> &Concept {
        self.defs
            .get(d)
            .unwrap_or_else(|| panic!("definer {d} has no recorded concept"))
    }

    pub fn len(&self) -> usize {
        self.defs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defs.is_empty()
    }

    /// Replaces every definer in `c` by its concept.
    pub fn substitute(&self, c: &Concept) -> Concept {
        c.map_atoms(&|n| n.is_definer().then(|| self.concept_of(n).clone()))
    }
}

/// A clause set in normal form with its definers and derivation record.
#[derive(Clone, Debug, Default)]
pub struct NormalizedOntology {
    pub clauses: Vec<Clause>,
    pub definers: DefinerMap,
    pub graph: ProvenanceGraph,
}

impl NormalizedOntology {
    pub fn with_clauses(&self, clauses: Vec<Clause>) -> Self {
        NormalizedOntology {
            clauses,
            definers: self.definers.clone(),
            graph: self.graph.clone(),
        }
    }

    pub fn length(&self) -> usize {
        self.clauses.iter().map(Clause::length).sum()
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature::default();
        for c in &self.clauses {
            s.extend(&c.signature());
        }
        s
    }

    /// Clauses as `⊤ ⊑ …` axioms, definers left in place.
    pub fn to_ontology(&self) -> Ontology {
        Ontology::from_axioms(self.clauses.iter().map(Clause::to_axiom))
    }

    /// Statement indices the clause with `id` derives from.
    pub fn origin(&self, id: crate::syntax::ClauseId) -> BTreeSet<usize> {
        self.graph.origins([id])
    }
}

/// Roles `r` such that some literal `Qr.A` with filler name `A` occurs.
pub fn roles_of(clauses: &[Clause]) -> BTreeMap<Name, BTreeSet<Name>> {
    let mut out: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    for c in clauses {
        for l in c.literals() {
            if let (Some((_, r, _)), Some(a)) = (l.restriction(), l.filler_name()) {
                out.entry(a.clone()).or_default().insert(r.clone());
            }
        }
    }
    out
}

/// Splits an NNF concept into clauses of opaque literal concepts.
fn cnf(c: &Concept) -> Vec<Vec<Concept>> {
    match c {
        Concept::Top => vec![],
        Concept::Bottom => vec![vec![]],
        Concept::And(cs) => cs.iter().flat_map(cnf).collect(),
        Concept::Or(cs) => {
            let mut acc: Vec<Vec<Concept>> = vec![vec![]];
            for part in cs {
                let part = cnf(part);
                let mut next = Vec::with_capacity(acc.len() * part.len());
                for a in &acc {
                    for p in &part {
                        let mut merged = a.clone();
                        merged.extend(p.iter().cloned());
                        next.push(merged);
                    }
                }
                acc = next;
            }
            acc
        }
        other => vec![vec![other.clone()]],
    }
}

fn is_opaque_tautology(clause: &[Concept]) -> bool {
    clause.iter().any(|l| match l {
        Concept::Forall(_, f) => **f == Concept::Top,
        Concept::Atom(_) => clause.contains(&Concept::not(l.clone())),
        _ => false,
    })
}

/// Clause form of `c` with role restrictions kept whole as literals, so no
/// definers are introduced.  Tautological clauses are dropped.
pub fn opaque_clauses(c: &Concept) -> Vec<Vec<Literal>> {
    cnf(&crate::syntax::nnf(c))
        .into_iter()
        .filter_map(|raw| {
            let lits = raw.into_iter().map(|l| match l {
                Concept::Atom(n) => Literal::Pos(n),
                Concept::Not(inner) => match *inner {
                    Concept::Atom(n) => Literal::Neg(n),
                    other => panic!("expected NNF, found ¬{other}"),
                },
                Concept::Exists(r, f) => Literal::Ex(r, *f),
                Concept::Forall(r, f) => Literal::All(r, *f),
                other => panic!("unexpected literal concept {other}"),
            });
            match canonical_clause(lits) {
                CanonicalClause::Clause(v) => Some(v),
                CanonicalClause::Tautology => None,
            }
        })
        .collect()
}

/// Clause form of an NNF concept: every role restriction gets a fresh
/// definer, numbered in depth-first pre-order.
pub struct Clausifier<'g> {
    pub definers: DefinerMap,
    pub graph: &'g mut ProvenanceGraph,
    next_definer: usize,
    seen: BTreeMap<Vec<Literal>, usize>,
    pub clauses: Vec<Clause>,
}

impl<'g> Clausifier<'g> {
    pub fn new(graph: &'g mut ProvenanceGraph, first_definer: usize) -> Self {
        Clausifier {
            definers: DefinerMap::default(),
            graph,
            next_definer: first_definer,
            seen: BTreeMap::new(),
            clauses: Vec::new(),
        }
    }

    /// Adds the clauses of `⊤ ⊑ c` (`c` in NNF), optionally prefixed by `guard`.
    pub fn add(&mut self, c: &Concept, guard: &[Literal], sources: &BTreeSet<usize>) {
        for raw in cnf(c) {
            if is_opaque_tautology(&raw) {
                continue;
            }
            let mut lits: Vec<Literal> = guard.to_vec();
            for l in raw {
                lits.push(self.literal(l, sources));
            }
            self.push(lits, sources);
        }
    }

    fn literal(&mut self, l: Concept, sources: &BTreeSet<usize>) -> Literal {
        match l {
            Concept::Atom(n) => Literal::Pos(n),
            Concept::Not(inner) => match *inner {
                Concept::Atom(n) => Literal::Neg(n),
                other => panic!("clausification expects NNF, found ¬{other}"),
            },
            Concept::Exists(r, f) => self.restriction(Quantifier::Exists, r, *f, sources),
            Concept::Forall(r, f) => self.restriction(Quantifier::Forall, r, *f, sources),
            other => panic!("unexpected literal concept {other}"),
        }
    }

    fn restriction(&mut self, q: Quantifier, r: Name, filler: Concept, sources: &BTreeSet<usize>) -> Literal {
        self.next_definer += 1;
        let d = Name::definer(self.next_definer);
        self.definers.defs.insert(d.clone(), filler.clone());
        self.definers.occurrence.insert(d.clone(), (q, r.clone()));
        self.add(&filler, &[Literal::Neg(d.clone())], sources);
        Literal::role(q, r, Concept::Atom(d))
    }

    fn push(&mut self, lits: Vec<Literal>, sources: &BTreeSet<usize>) {
        let CanonicalClause::Clause(lits) = canonical_clause(lits) else {
            return;
        };
        if let Some(&i) = self.seen.get(&lits) {
            let id = self.clauses[i].id;
            self.graph.add_sources(id, sources);
            return;
        }
        let clause = self.graph.input(lits.clone(), sources.clone());
        self.seen.insert(lits, self.clauses.len());
        self.clauses.push(clause);
    }

    pub fn definer_count(&self) -> usize {
        self.next_definer
    }
}

/// cl(O): normal-form clauses for every axiom, each tied to its statement index.
pub fn clausify(o: &Ontology) -> NormalizedOntology {
    let mut graph = ProvenanceGraph::new();
    let (clauses, definers) = {
        let mut cl = Clausifier::new(&mut graph, 0);
        for e in &o.entries {
            cl.add(&e.axiom.as_concept(), &[], &BTreeSet::from([e.index]));
        }
        (cl.clauses, cl.definers)
    };
    NormalizedOntology { clauses, definers, graph }
}

/// The reflexive-transitive order on definers: `D′ ⪯ D` when a clause
/// containing `¬D` mentions `D′` elsewhere.
#[derive(Clone, Debug, Default)]
pub struct DefinerOrder {
    below: BTreeMap<Name, BTreeSet<Name>>,
    above: BTreeMap<Name, BTreeSet<Name>>,
}

impl DefinerOrder {
    /// All `D′` with `D′ ⪯ d`, including `d`.
    pub fn below(&self, d: &Name) -> BTreeSet<Name> {
        self.below.get(d).cloned().unwrap_or_else(|| BTreeSet::from([d.clone()]))
    }

    /// All `D′` with `d ⪯ D′`, including `d`.
    pub fn above(&self, d: &Name) -> BTreeSet<Name> {
        self.above.get(d).cloned().unwrap_or_else(|| BTreeSet::from([d.clone()]))
    }

    pub fn le(&self, lower: &Name, upper: &Name) -> bool {
        self.below(upper).contains(lower)
    }
}

/// Computes ⪯ over the definers of `n`.  Panics if the order has a cycle,
/// which clausification rules out.
pub fn definer_order(n: &NormalizedOntology) -> DefinerOrder {
    let mut edges: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    for d in n.definers.defs.keys() {
        edges.entry(d.clone()).or_default();
    }
    for c in &n.clauses {
        for d in c.negative_definers() {
            let sig = c.signature();
            let e = edges.entry(d.clone()).or_default();
            e.extend(sig.concepts.iter().filter(|x| x.is_definer() && *x != d).cloned());
        }
    }
    let order = topological(&edges).unwrap_or_else(|d| {
        panic!("definer order has a cycle through {d}")
    });
    let mut below: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    for d in order.iter().rev() {
        let mut set = BTreeSet::from([d.clone()]);
        for child in &edges[d] {
            set.extend(below[child].iter().cloned());
        }
        below.insert(d.clone(), set);
    }
    let mut above: BTreeMap<Name, BTreeSet<Name>> = BTreeMap::new();
    for (d, lower) in &below {
        for l in lower {
            above.entry(l.clone()).or_default().insert(d.clone());
        }
    }
    DefinerOrder { below, above }
}

/// Parents before children; `Err` names a definer on a cycle.
fn topological(edges: &BTreeMap<Name, BTreeSet<Name>>) -> Result<Vec<Name>, Name> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Active,
        Done,
    }
    let mut marks: BTreeMap<&Name, Mark> = BTreeMap::new();
    let mut post = Vec::new();
    for root in edges.keys() {
        if marks.contains_key(root) {
            continue;
        }
        let mut stack: Vec<(&Name, Vec<&Name>)> = vec![(root, edges[root].iter().collect())];
        marks.insert(root, Mark::Active);
        while let Some((node, pending)) = stack.last_mut() {
            if let Some(next) = pending.pop() {
                match marks.get(next) {
                    Some(Mark::Active) => return Err(next.clone()),
                    Some(Mark::Done) => {}
                    None => {
                        marks.insert(next, Mark::Active);
                        let children = edges.get(next).map(|s| s.iter().collect()).unwrap_or_default();
                        stack.push((next, children));
                    }
                }
            } else {
                marks.insert(node, Mark::Done);
                post.push((*node).clone());
                stack.pop();
            }
        }
    }
    post.reverse();
    Ok(post)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser_io::parse_ontology;
    use crate::syntax::Axiom;

    #[test]
    fn tautology_gives_no_clauses() {
        let o = parse_ontology("SubClassOf(A A)").unwrap();
        assert!(clausify(&o).clauses.is_empty());
    }

    #[test]
    fn distribution_without_definers() {
        let c = |t| Concept::name(t);
        let ax = Axiom::new(Concept::Top, Concept::or([Concept::and([c("A"), c("B")]), c("C")]));
        let n = clausify(&Ontology::from_axioms([ax]));
        let got: Vec<String> = n.clauses.iter().map(|c| c.to_string()).collect();
        assert_eq!(got, ["A ⊔ C", "B ⊔ C"]);
        assert!(n.definers.is_empty());
    }

    #[test]
    fn atomic_fillers_get_definers() {
        let n = clausify(&parse_ontology("SubClassOf(A ObjectSomeValuesFrom(r B))").unwrap());
        assert_eq!(n.definers.len(), 1);
        let got: Vec<String> = n.clauses.iter().map(|c| c.to_string()).collect();
        assert_eq!(got, ["B ⊔ ¬_D1", "¬A ⊔ ∃r._D1"]);
        assert_eq!(n.definers.concept_of(&Name::definer(1)), &Concept::name("B"));
    }

    #[test]
    fn chain_order() {
        let o = parse_ontology(
            "SubClassOf(A ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B)))",
        )
        .unwrap();
        let n = clausify(&o);
        let ord = definer_order(&n);
        let (d1, d2) = (Name::definer(1), Name::definer(2));
        assert!(ord.le(&d2, &d1));
        assert!(!ord.le(&d1, &d2));
        assert!(ord.le(&d1, &d1));
        assert_eq!(ord.above(&d2), BTreeSet::from([d1, d2]));
    }

    #[test]
    fn single_definer_order_is_reflexive() {
        let n = clausify(&parse_ontology("SubClassOf(A ObjectAllValuesFrom(r B))").unwrap());
        let ord = definer_order(&n);
        let d1 = Name::definer(1);
        assert_eq!(ord.below(&d1), BTreeSet::from([d1]));
    }

    #[test]
    fn duplicate_clauses_merge_sources() {
        let n = clausify(&parse_ontology("SubClassOf(A B)\nSubClassOf(A B)").unwrap());
        assert_eq!(n.clauses.len(), 1);
        assert_eq!(n.origin(n.clauses[0].id), BTreeSet::from([0, 1]));
    }
}
