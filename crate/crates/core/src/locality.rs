//! Syntactic ⊤⊥* locality modules and frequency-weighted signature sampling.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::syntax::{nnf, Axiom, Concept, Name, Ontology, Signature};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Val {
    Bot,
    Top,
    Unknown,
}

impl Val {
    fn negate(self) -> Val {
        match self {
            Val::Bot => Val::Top,
            Val::Top => Val::Bot,
            Val::Unknown => Val::Unknown,
        }
    }
}

/// Which way names outside the signature are interpreted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Locality {
    /// Outside names become `⊥` and outside roles the empty relation.
    Bottom,
    /// Outside names become `⊤` and outside roles the universal relation.
    Top,
}

fn eval(c: &Concept, s: &Signature, mode: Locality) -> Val {
    match c {
        Concept::Top => Val::Top,
        Concept::Bottom => Val::Bot,
        Concept::Atom(a) if s.contains(a) => Val::Unknown,
        Concept::Atom(_) => match mode {
            Locality::Bottom => Val::Bot,
            Locality::Top => Val::Top,
        },
        Concept::Not(inner) => eval(inner, s, mode).negate(),
        Concept::And(cs) => {
            let vs: Vec<Val> = cs.iter().map(|c| eval(c, s, mode)).collect();
            if vs.contains(&Val::Bot) {
                Val::Bot
            } else if vs.iter().all(|v| *v == Val::Top) {
                Val::Top
            } else {
                Val::Unknown
            }
        }
        Concept::Or(cs) => {
            let vs: Vec<Val> = cs.iter().map(|c| eval(c, s, mode)).collect();
            if vs.contains(&Val::Top) {
                Val::Top
            } else if vs.iter().all(|v| *v == Val::Bot) {
                Val::Bot
            } else {
                Val::Unknown
            }
        }
        Concept::Exists(r, f) => {
            let v = eval(f, s, mode);
            match (s.contains(r), mode) {
                (_, _) if v == Val::Bot => Val::Bot,
                (false, Locality::Bottom) => Val::Bot,
                (false, Locality::Top) if v == Val::Top => Val::Top,
                _ => Val::Unknown,
            }
        }
        Concept::Forall(r, f) => {
            let v = eval(f, s, mode);
            match (s.contains(r), mode) {
                (_, _) if v == Val::Top => Val::Top,
                (false, Locality::Bottom) => Val::Top,
                (false, Locality::Top) if v == Val::Bot => Val::Bot,
                _ => Val::Unknown,
            }
        }
    }
}

/// `⊤ ⊑ C` holds by a complementary pair or a `⊤` disjunct.
pub fn is_syntactic_tautology(a: &Axiom) -> bool {
    let c = a.as_concept();
    match &c {
        Concept::Top => true,
        Concept::Or(ds) => ds
            .iter()
            .any(|d| *d == Concept::Top || ds.binary_search(&nnf(&Concept::not(d.clone()))).is_ok()),
        _ => false,
    }
}

pub fn is_local(a: &Axiom, s: &Signature, mode: Locality) -> bool {
    is_syntactic_tautology(a) || eval(&a.lhs, s, mode) == Val::Bot || eval(&a.rhs, s, mode) == Val::Top
}

/// Smallest subset of `o` whose complement is local for `sigma` together
/// with the module's own signature.
pub fn locality_module(o: &Ontology, sigma: &Signature, mode: Locality) -> Ontology {
    let mut s = sigma.clone();
    let mut inside = vec![false; o.entries.len()];
    loop {
        let mut changed = false;
        for (i, e) in o.entries.iter().enumerate() {
            if !inside[i] && !is_local(&e.axiom, &s, mode) {
                inside[i] = true;
                s.extend(&e.axiom.signature());
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    Ontology {
        entries: o
            .entries
            .iter()
            .zip(&inside)
            .filter(|(_, keep)| **keep)
            .map(|(e, _)| e.clone())
            .collect(),
    }
}

/// ⊤⊥*-module: alternate ⊥- and ⊤-module extraction until nothing changes.
pub fn extract_star_module(o: &Ontology, sigma: &Signature) -> Ontology {
    let mut m = o.clone();
    loop {
        let next = locality_module(&locality_module(&m, sigma, Locality::Bottom), sigma, Locality::Top);
        if next.len() == m.len() {
            return next;
        }
        m = next;
    }
}

/// Occurrence counts of every name in `o`.
pub fn name_frequencies(o: &Ontology) -> BTreeMap<Name, usize> {
    fn walk(c: &Concept, out: &mut BTreeMap<Name, usize>) {
        match c {
            Concept::Top | Concept::Bottom => {}
            Concept::Atom(n) => *out.entry(n.clone()).or_default() += 1,
            Concept::Not(c) => walk(c, out),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().for_each(|c| walk(c, out)),
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                *out.entry(r.clone()).or_default() += 1;
                walk(c, out);
            }
        }
    }
    let mut out = BTreeMap::new();
    for a in o.axioms() {
        walk(&a.lhs, &mut out);
        walk(&a.rhs, &mut out);
    }
    out
}

/// Draws `size` distinct names of `o` with probability proportional to
/// their occurrence counts.
pub fn sample_signature(o: &Ontology, size: usize, seed: u64) -> Result<Signature, Error> {
    let freq = name_frequencies(o);
    if size > freq.len() {
        return Err(Error::SignatureTooLarge {
            requested: size,
            available: freq.len(),
        });
    }
    let mut pool: Vec<(Name, usize)> = freq.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Signature::default();
    for _ in 0..size {
        let total: usize = pool.iter().map(|(_, w)| w).sum();
        let mut pick = rng.gen_range(0..total);
        let idx = pool
            .iter()
            .position(|(_, w)| {
                if pick < *w {
                    true
                } else {
                    pick -= w;
                    false
                }
            })
            .unwrap();
        out.insert(pool.remove(idx).0);
    }
    Ok(out)
}
