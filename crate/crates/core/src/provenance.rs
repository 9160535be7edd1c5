//! Inference graph from derived clauses back to input statements.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::syntax::{Clause, ClauseId, Literal};

/// Clause factory and derivation record.  Every clause is either an input
/// clause tied to statement indices or a derived clause with premises.
#[derive(Clone, Debug, Default)]
pub struct ProvenanceGraph {
    next: u64,
    premises: HashMap<ClauseId, Vec<ClauseId>>,
    roots: HashMap<ClauseId, BTreeSet<usize>>,
}

impl ProvenanceGraph {
    pub fn new() -> Self {
        Self::default()
    }

    fn fresh(&mut self) -> ClauseId {
        self.next += 1;
        ClauseId(self.next)
    }

    /// Literals must already be canonical.
    pub fn input(&mut self, lits: Vec<Literal>, sources: BTreeSet<usize>) -> Clause {
        let id = self.fresh();
        self.roots.insert(id, sources);
        Clause { id, lits: Arc::from(lits) }
    }

    /// Literals must already be canonical.
    pub fn derived(&mut self, lits: Vec<Literal>, premises: &[ClauseId]) -> Clause {
        let id = self.fresh();
        let mut ps = premises.to_vec();
        ps.sort();
        ps.dedup();
        self.premises.insert(id, ps);
        Clause { id, lits: Arc::from(lits) }
    }

    /// Records further statements an input clause stems from.
    pub fn add_sources(&mut self, id: ClauseId, sources: &BTreeSet<usize>) {
        self.roots.entry(id).or_default().extend(sources.iter().copied());
    }

    pub fn premises(&self, id: ClauseId) -> &[ClauseId] {
        self.premises.get(&id).map_or(&[], Vec::as_slice)
    }

    pub fn is_input(&self, id: ClauseId) -> bool {
        self.roots.contains_key(&id)
    }

    /// Input statement indices reachable backwards from `ids`.
    pub fn origins(&self, ids: impl IntoIterator<Item = ClauseId>) -> BTreeSet<usize> {
        let mut out = BTreeSet::new();
        for id in self.ancestors(ids) {
            if let Some(r) = self.roots.get(&id) {
                out.extend(r.iter().copied());
            }
        }
        out
    }

    /// Input clauses reachable backwards from `ids`.
    pub fn input_ancestors(&self, ids: impl IntoIterator<Item = ClauseId>) -> BTreeSet<ClauseId> {
        self.ancestors(ids).into_iter().filter(|id| self.is_input(*id)).collect()
    }

    fn ancestors(&self, ids: impl IntoIterator<Item = ClauseId>) -> BTreeSet<ClauseId> {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<ClauseId> = ids.into_iter().collect();
        while let Some(id) = stack.pop() {
            if seen.insert(id) {
                stack.extend(self.premises(id).iter().copied());
            }
        }
        seen
    }
}
