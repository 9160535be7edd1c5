//! Small ALC tableau reasoner with a general TBox, used to check results.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::syntax::{nnf, Axiom, Concept, Name, Ontology, Signature};

#[derive(Clone, Copy, Debug)]
pub struct TableauConfig {
    /// Upper bound on tableau nodes per satisfiability test.
    pub max_nodes: usize,
}

impl Default for TableauConfig {
    fn default() -> Self {
        TableauConfig { max_nodes: 100_000 }
    }
}

type Id = u32;

#[derive(Clone, Debug)]
enum Node {
    Top,
    Bottom,
    Atom(Name),
    NotAtom(Name),
    And(Vec<Id>),
    Or(Vec<Id>),
    Exists(Name, Id),
    Forall(Name, Id),
}

/// Tableau over a fixed TBox.  GCIs with a negated-name disjunct are
/// absorbed into lazy unfolding on that name; the rest hold at every node.
pub struct Tableau {
    cfg: TableauConfig,
    nodes: Vec<Node>,
    ids: HashMap<Concept, Id>,
    global: Vec<Id>,
    unfold: HashMap<Name, Vec<Id>>,
    unsat: HashSet<Vec<Id>>,
    steps: usize,
}

impl Tableau {
    pub fn new(o: &Ontology, cfg: TableauConfig) -> Self {
        let mut t = Tableau {
            cfg,
            nodes: Vec::new(),
            ids: HashMap::new(),
            global: Vec::new(),
            unfold: HashMap::new(),
            unsat: HashSet::new(),
            steps: 0,
        };
        for a in o.axioms() {
            let c = a.as_concept();
            match &c {
                Concept::Top => {}
                Concept::Or(ds) => match ds.iter().position(|d| matches!(d, Concept::Not(x) if matches!(**x, Concept::Atom(_)))) {
                    Some(i) => {
                        let Concept::Not(x) = &ds[i] else { unreachable!() };
                        let Concept::Atom(name) = &**x else { unreachable!() };
                        let rest = Concept::or(ds.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, d)| d.clone()));
                        let id = t.intern(&rest);
                        t.unfold.entry(name.clone()).or_default().push(id);
                    }
                    None => {
                        let id = t.intern(&c);
                        t.global.push(id);
                    }
                },
                Concept::Not(x) if matches!(**x, Concept::Atom(_)) => {
                    let Concept::Atom(name) = &**x else { unreachable!() };
                    let id = t.intern(&Concept::Bottom);
                    t.unfold.entry(name.clone()).or_default().push(id);
                }
                _ => {
                    let id = t.intern(&c);
                    t.global.push(id);
                }
            }
        }
        t.global.sort();
        t.global.dedup();
        t
    }

    /// Interns an NNF concept.
    fn intern(&mut self, c: &Concept) -> Id {
        if let Some(&id) = self.ids.get(c) {
            return id;
        }
        let node = match c {
            Concept::Top => Node::Top,
            Concept::Bottom => Node::Bottom,
            Concept::Atom(n) => Node::Atom(n.clone()),
            Concept::Not(x) => match &**x {
                Concept::Atom(n) => Node::NotAtom(n.clone()),
                other => panic!("tableau expects NNF, found ¬{other}"),
            },
            Concept::And(cs) => Node::And(cs.iter().map(|c| self.intern(c)).collect()),
            Concept::Or(cs) => Node::Or(cs.iter().map(|c| self.intern(c)).collect()),
            Concept::Exists(r, f) => Node::Exists(r.clone(), self.intern(f)),
            Concept::Forall(r, f) => Node::Forall(r.clone(), self.intern(f)),
        };
        let id = self.nodes.len() as Id;
        self.nodes.push(node);
        self.ids.insert(c.clone(), id);
        id
    }

    /// Satisfiability of `c` with respect to the TBox.
    pub fn is_satisfiable(&mut self, c: &Concept) -> Result<bool, Error> {
        let root = self.intern(&nnf(c));
        let mut label: Vec<Id> = self.global.clone();
        label.push(root);
        label.sort();
        label.dedup();
        self.steps = 0;
        self.sat(label, &mut Vec::new())
    }

    pub fn entails(&mut self, a: &Axiom) -> Result<bool, Error> {
        let test = Concept::and([a.lhs.clone(), Concept::not(a.rhs.clone())]);
        Ok(!self.is_satisfiable(&test)?)
    }

    /// Closes `start` under ⊓ and unfolding, then branches on ⊔.
    fn sat(&mut self, start: Vec<Id>, ancestors: &mut Vec<Vec<Id>>) -> Result<bool, Error> {
        if self.unsat.contains(&start) {
            return Ok(false);
        }
        let result = self.branch(start.iter().copied().collect(), start.clone(), ancestors)?;
        if !result {
            self.unsat.insert(start);
        }
        Ok(result)
    }

    fn branch(&mut self, mut label: BTreeSet<Id>, pending: Vec<Id>, ancestors: &mut Vec<Vec<Id>>) -> Result<bool, Error> {
        self.steps += 1;
        if self.steps > self.cfg.max_nodes {
            return Err(Error::ResourceExceeded { limit: self.cfg.max_nodes });
        }
        let mut work = pending;
        while let Some(id) = work.pop() {
            match &self.nodes[id as usize] {
                Node::Bottom => return Ok(false),
                Node::Atom(n) => {
                    if self.ids.get(&Concept::not(Concept::Atom(n.clone()))).is_some_and(|x| label.contains(x)) {
                        return Ok(false);
                    }
                    for &u in self.unfold.get(n).into_iter().flatten() {
                        if label.insert(u) {
                            work.push(u);
                        }
                    }
                }
                Node::NotAtom(n) => {
                    if self.ids.get(&Concept::Atom(n.clone())).is_some_and(|x| label.contains(x)) {
                        return Ok(false);
                    }
                }
                Node::And(parts) => {
                    for &p in parts {
                        if label.insert(p) {
                            work.push(p);
                        }
                    }
                }
                Node::Top | Node::Or(_) | Node::Exists(..) | Node::Forall(..) => {}
            }
        }
        let open_or = label.iter().find_map(|&id| match &self.nodes[id as usize] {
            Node::Or(ds) if !ds.iter().any(|d| label.contains(d)) => Some(ds.clone()),
            _ => None,
        });
        if let Some(ds) = open_or {
            for d in ds {
                let mut next = label.clone();
                next.insert(d);
                if self.branch(next, vec![d], ancestors)? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        self.successors(label, ancestors)
    }

    fn successors(&mut self, label: BTreeSet<Id>, ancestors: &mut Vec<Vec<Id>>) -> Result<bool, Error> {
        let full: Vec<Id> = label.iter().copied().collect();
        let mut children = Vec::new();
        for &id in &full {
            if let Node::Exists(r, f) = &self.nodes[id as usize] {
                let mut child: Vec<Id> = self.global.clone();
                child.push(*f);
                for &other in &full {
                    if let Node::Forall(r2, g) = &self.nodes[other as usize] {
                        if r2 == r {
                            child.push(*g);
                        }
                    }
                }
                child.sort();
                child.dedup();
                children.push(child);
            }
        }
        ancestors.push(full);
        let mut ok = true;
        for child in children {
            let blocked = ancestors.iter().any(|a| is_subset(&child, a));
            if !blocked && !self.sat(child, ancestors)? {
                ok = false;
                break;
            }
        }
        ancestors.pop();
        Ok(ok)
    }
}

fn is_subset(small: &[Id], big: &[Id]) -> bool {
    crate::syntax::is_sorted_subset(small, big)
}

pub fn is_satisfiable(o: &Ontology, c: &Concept, cfg: TableauConfig) -> Result<bool, Error> {
    Tableau::new(o, cfg).is_satisfiable(c)
}

pub fn entails(o: &Ontology, a: &Axiom, cfg: TableauConfig) -> Result<bool, Error> {
    Tableau::new(o, cfg).entails(a)
}

/// First Σ-axiom on which two ontologies disagree, if any was found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub entailed_by_first: bool,
}

/// Random concept over `sigma` with role depth at most `depth`.
pub fn random_concept(rng: &mut impl Rng, sigma: &Signature, depth: usize) -> Concept {
    random_at(rng, sigma, depth, 0)
}

fn random_at(rng: &mut impl Rng, sigma: &Signature, depth: usize, level: u32) -> Concept {
    let concepts: Vec<&Name> = sigma.concepts.iter().collect();
    let roles: Vec<&Name> = sigma.roles.iter().collect();
    let leaf = |rng: &mut dyn rand::RngCore| -> Concept {
        match concepts.choose(rng) {
            Some(a) if rng.gen_bool(0.9) => {
                let c = Concept::Atom((*a).clone());
                if rng.gen_bool(0.25) {
                    Concept::not(c)
                } else {
                    c
                }
            }
            _ if rng.gen_bool(0.5) => Concept::Top,
            _ => Concept::Bottom,
        }
    };
    if !rng.gen_bool(0.5f64.powi(level as i32 + 1).max(0.1)) {
        return leaf(rng);
    }
    let mut productions = vec![0, 1, 2];
    if depth > 0 && !roles.is_empty() {
        productions.extend([3, 4]);
    }
    match *productions.choose(rng).unwrap() {
        0 => Concept::not(random_at(rng, sigma, depth, level + 1)),
        1 => Concept::and([random_at(rng, sigma, depth, level + 1), random_at(rng, sigma, depth, level + 1)]),
        2 => Concept::or([random_at(rng, sigma, depth, level + 1), random_at(rng, sigma, depth, level + 1)]),
        q => {
            let r = (*roles.choose(rng).unwrap()).clone();
            let f = random_at(rng, sigma, depth - 1, level + 1);
            if q == 3 {
                Concept::exists(r, f)
            } else {
                Concept::forall(r, f)
            }
        }
    }
}

/// Random Σ-axiom; half of them have a name or a pair of names on the left.
pub fn random_axiom(rng: &mut impl Rng, sigma: &Signature, depth: usize) -> Axiom {
    let names: Vec<&Name> = sigma.concepts.iter().collect();
    let lhs = if !names.is_empty() && rng.gen_bool(0.5) {
        let a = Concept::Atom((*names.choose(rng).unwrap()).clone());
        if rng.gen_bool(0.5) {
            Concept::and([a, Concept::Atom((*names.choose(rng).unwrap()).clone())])
        } else {
            a
        }
    } else {
        random_concept(rng, sigma, depth)
    };
    Axiom::new(lhs, random_concept(rng, sigma, depth))
}

/// Compares `o1` and `o2` on the Σ-axioms of both inputs and on `samples`
/// random Σ-axioms of role depth at most `depth`.
pub fn inseparable_sampled(
    o1: &Ontology,
    o2: &Ontology,
    sigma: &Signature,
    samples: usize,
    depth: usize,
    seed: u64,
    cfg: TableauConfig,
) -> Result<Option<Counterexample>, Error> {
    let mut t1 = Tableau::new(o1, cfg);
    let mut t2 = Tableau::new(o2, cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let targeted = o1.axioms().chain(o2.axioms()).filter(|a| a.signature().is_subset(sigma)).cloned();
    let random: Vec<Axiom> = (0..samples).map(|_| random_axiom(&mut rng, sigma, depth)).collect();
    for axiom in targeted.chain(random) {
        let e1 = t1.entails(&axiom)?;
        if e1 != t2.entails(&axiom)? {
            return Ok(Some(Counterexample { axiom, entailed_by_first: e1 }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::clausify;
    use crate::parser_io::{parse_ontology, parse_signature};

    const RUNNING: &str = "\
SubClassOf(A1 ObjectUnionOf(ObjectSomeValuesFrom(r ObjectSomeValuesFrom(s B1)) ObjectSomeValuesFrom(r B2)))
SubClassOf(ObjectIntersectionOf(B1 B3) owl:Nothing)
SubClassOf(A2 ObjectUnionOf(A3 ObjectAllValuesFrom(s B3)))
SubClassOf(B4 A4)
SubClassOf(B2 B4)
";

    fn ax(text: &str) -> Axiom {
        parse_ontology(text).unwrap().entries[0].axiom.clone()
    }

    fn cfg() -> TableauConfig {
        TableauConfig::default()
    }

    #[test]
    fn disjointness() {
        let o = parse_ontology("SubClassOf(ObjectIntersectionOf(B1 B3) owl:Nothing)").unwrap();
        let c = Concept::and([Concept::name("B1"), Concept::name("B3")]);
        assert!(!is_satisfiable(&o, &c, cfg()).unwrap());
        assert!(is_satisfiable(&Ontology::default(), &Concept::name("A"), cfg()).unwrap());
    }

    #[test]
    fn running_example_entailments() {
        let o = parse_ontology(RUNNING).unwrap();
        assert!(entails(&o, &ax("SubClassOf(B2 A4)"), cfg()).unwrap());
        assert!(!entails(&o, &ax("SubClassOf(A1 A4)"), cfg()).unwrap());
        assert!(entails(&Ontology::default(), &ax("SubClassOf(A A)"), cfg()).unwrap());
        assert!(entails(
            &o,
            &ax("SubClassOf(ObjectIntersectionOf(A2 ObjectSomeValuesFrom(s B1)) A3)"),
            cfg()
        )
        .unwrap());
    }

    #[test]
    fn running_example_definer_conflict() {
        let n = clausify(&parse_ontology(RUNNING).unwrap());
        let o = n.to_ontology();
        let d = |i| Concept::Atom(Name::definer(i));
        // _D3 stands for B1 and _D4 for B3.
        assert!(!is_satisfiable(&o, &Concept::and([d(3), d(4)]), cfg()).unwrap());
        assert!(is_satisfiable(&o, &Concept::and([d(1), d(2)]), cfg()).unwrap());
    }

    #[test]
    fn cyclic_tbox_terminates() {
        let o = parse_ontology("SubClassOf(A ObjectSomeValuesFrom(r A))\nSubClassOf(A B)").unwrap();
        assert!(is_satisfiable(&o, &Concept::name("A"), cfg()).unwrap());
        let o = parse_ontology(
            "SubClassOf(A ObjectSomeValuesFrom(r ObjectComplementOf(A)))\nSubClassOf(ObjectComplementOf(A) ObjectSomeValuesFrom(r A))",
        )
        .unwrap();
        assert!(is_satisfiable(&o, &Concept::Top, cfg()).unwrap());
        let o = parse_ontology(
            "SubClassOf(owl:Thing ObjectSomeValuesFrom(r A))\nSubClassOf(A ObjectAllValuesFrom(r ObjectComplementOf(A)))",
        )
        .unwrap();
        assert!(!is_satisfiable(&o, &Concept::Top, cfg()).unwrap());
    }

    #[test]
    fn node_limit() {
        let o = parse_ontology(RUNNING).unwrap();
        let c = Concept::name("A1");
        let tight = TableauConfig { max_nodes: 1 };
        assert!(matches!(is_satisfiable(&o, &c, tight), Err(Error::ResourceExceeded { limit: 1 })));
    }

    #[test]
    fn empty_ontology_is_separable() {
        let o = parse_ontology("SubClassOf(A B)").unwrap();
        let s = parse_signature("Class: A\nClass: B").unwrap();
        let cex = inseparable_sampled(&o, &Ontology::default(), &s, 10, 2, 1, cfg()).unwrap();
        assert_eq!(cex.map(|c| c.entailed_by_first), Some(true));
        assert!(inseparable_sampled(&o, &o, &s, 30, 2, 1, cfg()).unwrap().is_none());
    }
}
