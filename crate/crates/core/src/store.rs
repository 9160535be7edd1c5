//! Indexed clause sets with optional subsumption maintenance.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::syntax::{is_sorted_subset, Clause, Literal, Name};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Insert {
    Added(usize),
    Duplicate,
    Subsumed,
}

/// Clause set indexed by literal, by first literal (for forward
/// subsumption), by the name filling a top-level role literal, and by the
/// all-negative shape.  With subsumption enabled no stored clause is a
/// superset of another.
#[derive(Clone, Debug, Default)]
pub struct ClauseStore {
    slots: Vec<Option<Clause>>,
    by_lits: HashMap<Arc<[Literal]>, usize>,
    occurs: HashMap<Literal, Vec<usize>>,
    by_first: HashMap<Literal, Vec<usize>>,
    by_filler: HashMap<Name, Vec<usize>>,
    all_negative: BTreeSet<usize>,
    empty: Option<usize>,
    subsumption: bool,
    live: usize,
}

impl ClauseStore {
    pub fn new(subsumption: bool) -> Self {
        ClauseStore {
            subsumption,
            ..Default::default()
        }
    }

    pub fn from_clauses(clauses: impl IntoIterator<Item = Clause>, subsumption: bool) -> Self {
        let mut s = Self::new(subsumption);
        for c in clauses {
            s.insert(c);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.live
    }

    pub fn is_empty(&self) -> bool {
        self.live == 0
    }

    pub fn get(&self, slot: usize) -> Option<&Clause> {
        self.slots.get(slot).and_then(Option::as_ref)
    }

    pub fn contains_literals(&self, lits: &[Literal]) -> bool {
        self.by_lits.contains_key(lits)
    }

    /// Live clauses in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Clause)> + '_ {
        self.slots
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|c| (i, c)))
    }

    pub fn clauses(&self) -> Vec<Clause> {
        self.iter().map(|(_, c)| c.clone()).collect()
    }

    pub fn into_clauses(self) -> Vec<Clause> {
        self.slots.into_iter().flatten().collect()
    }

    fn live_slots<'a>(&'a self, v: Option<&'a Vec<usize>>) -> impl Iterator<Item = (usize, &'a Clause)> + 'a {
        v.into_iter()
            .flatten()
            .filter_map(|&i| self.get(i).map(|c| (i, c)))
    }

    pub fn with_literal<'a>(&'a self, l: &Literal) -> impl Iterator<Item = (usize, &'a Clause)> + 'a {
        self.live_slots(self.occurs.get(l))
    }

    /// Clauses with a top-level role literal whose filler is the name `a`.
    pub fn with_filler<'a>(&'a self, a: &Name) -> impl Iterator<Item = (usize, &'a Clause)> + 'a {
        self.live_slots(self.by_filler.get(a))
    }

    /// Clauses whose literals are all negative concept names (the empty clause included).
    pub fn all_negative(&self) -> impl Iterator<Item = (usize, &Clause)> + '_ {
        self.all_negative.iter().filter_map(|&i| self.get(i).map(|c| (i, c)))
    }

    pub fn occurrence_count(&self, l: &Literal) -> usize {
        self.with_literal(l).count()
    }

    /// Some stored clause is a subset of `lits`.
    pub fn is_subsumed(&self, lits: &[Literal]) -> bool {
        if self.empty.is_some_and(|i| self.get(i).is_some()) {
            return true;
        }
        lits.iter().any(|l| {
            self.live_slots(self.by_first.get(l))
                .any(|(_, c)| is_sorted_subset(&c.lits, lits))
        })
    }

    /// Stored clauses that are proper supersets of `lits`.
    fn subsumed_by(&self, lits: &[Literal]) -> Vec<usize> {
        if lits.is_empty() {
            return self.iter().filter(|(_, c)| !c.lits.is_empty()).map(|(i, _)| i).collect();
        }
        let rarest = lits
            .iter()
            .min_by_key(|l| self.occurs.get(*l).map_or(0, Vec::len))
            .unwrap();
        self.with_literal(rarest)
            .filter(|(_, c)| c.lits.len() > lits.len() && is_sorted_subset(lits, &c.lits))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn insert(&mut self, c: Clause) -> Insert {
        if self.by_lits.contains_key(&c.lits) {
            return Insert::Duplicate;
        }
        if self.subsumption {
            if self.is_subsumed(&c.lits) {
                return Insert::Subsumed;
            }
            for victim in self.subsumed_by(&c.lits) {
                self.remove(victim);
            }
        }
        let slot = self.slots.len();
        for l in c.lits.iter() {
            self.occurs.entry(l.clone()).or_default().push(slot);
            if let Some(a) = l.filler_name() {
                self.by_filler.entry(a.clone()).or_default().push(slot);
            }
        }
        match c.lits.first() {
            Some(first) => self.by_first.entry(first.clone()).or_default().push(slot),
            None => self.empty = Some(slot),
        }
        if c.lits.iter().all(|l| matches!(l, Literal::Neg(_))) {
            self.all_negative.insert(slot);
        }
        self.by_lits.insert(c.lits.clone(), slot);
        self.slots.push(Some(c));
        self.live += 1;
        Insert::Added(slot)
    }

    pub fn remove(&mut self, slot: usize) -> Option<Clause> {
        let c = self.slots.get_mut(slot)?.take()?;
        self.by_lits.remove(&c.lits);
        self.all_negative.remove(&slot);
        self.live -= 1;
        Some(c)
    }

    /// Removes every clause matching `pred`; returns how many were removed.
    pub fn retain(&mut self, pred: impl Fn(&Clause) -> bool) -> usize {
        let victims: Vec<usize> = self.iter().filter(|(_, c)| !pred(c)).map(|(i, _)| i).collect();
        for &v in &victims {
            self.remove(v);
        }
        victims.len()
    }
}
