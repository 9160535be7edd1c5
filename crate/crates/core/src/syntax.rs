//! Concepts, axioms, ontologies, signatures and normal-form clauses.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Prefix reserved for definer names introduced by normalization.
pub const DEFINER_PREFIX: &str = "_D";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NameKind {
    Concept,
    Role,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NameOrigin {
    Input,
    Definer,
}

/// A concept or role name.  Equality and ordering use `(kind, text)` only.
#[derive(Clone, Debug)]
pub struct Name {
    kind: NameKind,
    text: Arc<str>,
    origin: NameOrigin,
}

impl Name {
    pub fn concept(text: &str) -> Self {
        Name {
            kind: NameKind::Concept,
            text: text.into(),
            origin: NameOrigin::Input,
        }
    }

    pub fn role(text: &str) -> Self {
        Name {
            kind: NameKind::Role,
            text: text.into(),
            origin: NameOrigin::Input,
        }
    }

    pub fn definer(index: usize) -> Self {
        Name {
            kind: NameKind::Concept,
            text: format!("{DEFINER_PREFIX}{index}").into(),
            origin: NameOrigin::Definer,
        }
    }

    pub fn kind(&self) -> NameKind {
        self.kind
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn origin(&self) -> NameOrigin {
        self.origin
    }

    pub fn is_definer(&self) -> bool {
        self.origin == NameOrigin::Definer
    }

    pub fn is_role(&self) -> bool {
        self.kind == NameKind::Role
    }
}

impl PartialEq for Name {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.text == other.text
    }
}

impl Eq for Name {}

impl Hash for Name {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.kind.hash(state);
        self.text.hash(state);
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        self.kind
            .cmp(&other.kind)
            .then_with(|| natural_cmp(&self.text, &other.text))
    }
}

/// Orders `_D2` before `_D10`: digit runs compare numerically.
fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut a, mut b) = (a.as_bytes(), b.as_bytes());
    loop {
        match (a.first(), b.first()) {
            (None, None) => return Ordering::Equal,
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some(x), Some(y)) if x.is_ascii_digit() && y.is_ascii_digit() => {
                let la = a.iter().take_while(|c| c.is_ascii_digit()).count();
                let lb = b.iter().take_while(|c| c.is_ascii_digit()).count();
                let (da, db) = (trim_zeros(&a[..la]), trim_zeros(&b[..lb]));
                let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db)).then(la.cmp(&lb));
                if ord != Ordering::Equal {
                    return ord;
                }
                a = &a[la..];
                b = &b[lb..];
            }
            (Some(x), Some(y)) => {
                if x != y {
                    return x.cmp(y);
                }
                a = &a[1..];
                b = &b[1..];
            }
        }
    }
}

fn trim_zeros(digits: &[u8]) -> &[u8] {
    let start = digits.iter().position(|&c| c != b'0').unwrap_or(digits.len());
    &digits[start..]
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    pub fn dual(self) -> Self {
        match self {
            Quantifier::Exists => Quantifier::Forall,
            Quantifier::Forall => Quantifier::Exists,
        }
    }
}

/// ALC concept term.  Build values through the constructor functions so that
/// conjunctions and disjunctions stay flat, sorted and duplicate-free and
/// double negations collapse.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Concept {
    Top,
    Bottom,
    Atom(Name),
    Not(Box<Concept>),
    And(Vec<Concept>),
    Or(Vec<Concept>),
    Exists(Name, Box<Concept>),
    Forall(Name, Box<Concept>),
}

impl Concept {
    pub fn atom(name: Name) -> Self {
        Concept::Atom(name)
    }

    pub fn name(text: &str) -> Self {
        Concept::Atom(Name::concept(text))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(c: Concept) -> Self {
        match c {
            Concept::Not(inner) => *inner,
            other => Concept::Not(Box::new(other)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = Concept>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Concept::And(inner) => flat.extend(inner),
                Concept::Top => {}
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Concept::Top,
            1 => flat.pop().unwrap(),
            _ => Concept::And(flat),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = Concept>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                Concept::Or(inner) => flat.extend(inner),
                Concept::Bottom => {}
                other => flat.push(other),
            }
        }
        flat.sort();
        flat.dedup();
        match flat.len() {
            0 => Concept::Bottom,
            1 => flat.pop().unwrap(),
            _ => Concept::Or(flat),
        }
    }

    pub fn exists(role: Name, filler: Concept) -> Self {
        Concept::Exists(role, Box::new(filler))
    }

    pub fn forall(role: Name, filler: Concept) -> Self {
        Concept::Forall(role, Box::new(filler))
    }

    pub fn restriction(q: Quantifier, role: Name, filler: Concept) -> Self {
        match q {
            Quantifier::Exists => Concept::exists(role, filler),
            Quantifier::Forall => Concept::forall(role, filler),
        }
    }

    pub fn length(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atom(_) => 1,
            Concept::Not(c) => c.length(),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().map(Concept::length).sum(),
            Concept::Exists(_, c) | Concept::Forall(_, c) => c.length() + 1,
        }
    }

    pub fn collect_names(&self, out: &mut Signature) {
        match self {
            Concept::Top | Concept::Bottom => {}
            Concept::Atom(n) => {
                out.concepts.insert(n.clone());
            }
            Concept::Not(c) => c.collect_names(out),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().for_each(|c| c.collect_names(out)),
            Concept::Exists(r, c) | Concept::Forall(r, c) => {
                out.roles.insert(r.clone());
                c.collect_names(out);
            }
        }
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature::default();
        self.collect_names(&mut s);
        s
    }

    pub fn mentions(&self, pred: &dyn Fn(&Name) -> bool) -> bool {
        match self {
            Concept::Top | Concept::Bottom => false,
            Concept::Atom(n) => pred(n),
            Concept::Not(c) => c.mentions(pred),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().any(|c| c.mentions(pred)),
            Concept::Exists(r, c) | Concept::Forall(r, c) => pred(r) || c.mentions(pred),
        }
    }

    pub fn contains_definer(&self) -> bool {
        self.mentions(&|n| n.is_definer())
    }

    /// Replace concept names bottom-up; the callback returns `None` to keep a name.
    pub fn map_atoms(&self, f: &dyn Fn(&Name) -> Option<Concept>) -> Concept {
        match self {
            Concept::Top => Concept::Top,
            Concept::Bottom => Concept::Bottom,
            Concept::Atom(n) => f(n).unwrap_or_else(|| self.clone()),
            Concept::Not(c) => Concept::not(c.map_atoms(f)),
            Concept::And(cs) => Concept::and(cs.iter().map(|c| c.map_atoms(f))),
            Concept::Or(cs) => Concept::or(cs.iter().map(|c| c.map_atoms(f))),
            Concept::Exists(r, c) => Concept::exists(r.clone(), c.map_atoms(f)),
            Concept::Forall(r, c) => Concept::forall(r.clone(), c.map_atoms(f)),
        }
    }

    /// Maximal nesting depth of role restrictions.
    pub fn depth(&self) -> usize {
        match self {
            Concept::Top | Concept::Bottom | Concept::Atom(_) => 0,
            Concept::Not(c) => c.depth(),
            Concept::And(cs) | Concept::Or(cs) => cs.iter().map(Concept::depth).max().unwrap_or(0),
            Concept::Exists(_, c) | Concept::Forall(_, c) => c.depth() + 1,
        }
    }
}

/// Negation normal form: negation only in front of concept names.
pub fn nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top | Concept::Bottom | Concept::Atom(_) => c.clone(),
        Concept::And(cs) => Concept::and(cs.iter().map(nnf)),
        Concept::Or(cs) => Concept::or(cs.iter().map(nnf)),
        Concept::Exists(r, f) => Concept::exists(r.clone(), nnf(f)),
        Concept::Forall(r, f) => Concept::forall(r.clone(), nnf(f)),
        Concept::Not(inner) => negated_nnf(inner),
    }
}

fn negated_nnf(c: &Concept) -> Concept {
    match c {
        Concept::Top => Concept::Bottom,
        Concept::Bottom => Concept::Top,
        Concept::Atom(_) => Concept::not(c.clone()),
        Concept::Not(inner) => nnf(inner),
        Concept::And(cs) => Concept::or(cs.iter().map(negated_nnf)),
        Concept::Or(cs) => Concept::and(cs.iter().map(negated_nnf)),
        Concept::Exists(r, f) => Concept::forall(r.clone(), negated_nnf(f)),
        Concept::Forall(r, f) => Concept::exists(r.clone(), negated_nnf(f)),
    }
}

/// Concept inclusion `lhs ⊑ rhs`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Axiom {
    pub lhs: Concept,
    pub rhs: Concept,
}

impl Axiom {
    pub fn new(lhs: Concept, rhs: Concept) -> Self {
        Axiom { lhs, rhs }
    }

    pub fn length(&self) -> usize {
        self.lhs.length() + self.rhs.length()
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature::default();
        self.lhs.collect_names(&mut s);
        self.rhs.collect_names(&mut s);
        s
    }

    /// The single concept `¬lhs ⊔ rhs` every model element must satisfy.
    pub fn as_concept(&self) -> Concept {
        nnf(&Concept::or([Concept::not(self.lhs.clone()), self.rhs.clone()]))
    }

    pub fn depth(&self) -> usize {
        self.lhs.depth().max(self.rhs.depth())
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊑ {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for Concept {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn nary(f: &mut fmt::Formatter<'_>, cs: &[Concept], sep: &str) -> fmt::Result {
            f.write_str("(")?;
            for (i, c) in cs.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{c}")?;
            }
            f.write_str(")")
        }
        match self {
            Concept::Top => f.write_str("⊤"),
            Concept::Bottom => f.write_str("⊥"),
            Concept::Atom(n) => write!(f, "{n}"),
            Concept::Not(c) => write!(f, "¬{c}"),
            Concept::And(cs) => nary(f, cs, " ⊓ "),
            Concept::Or(cs) => nary(f, cs, " ⊔ "),
            Concept::Exists(r, c) => write!(f, "∃{r}.{c}"),
            Concept::Forall(r, c) => write!(f, "∀{r}.{c}"),
        }
    }
}

/// An axiom together with the index of the input statement it came from.
/// Both halves of an `EquivalentClasses` statement share one index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Entry {
    pub index: usize,
    pub axiom: Axiom,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Ontology {
    pub entries: Vec<Entry>,
}

impl Ontology {
    /// Numbers the axioms consecutively.
    pub fn from_axioms(axioms: impl IntoIterator<Item = Axiom>) -> Self {
        Ontology {
            entries: axioms
                .into_iter()
                .enumerate()
                .map(|(index, axiom)| Entry { index, axiom })
                .collect(),
        }
    }

    pub fn axioms(&self) -> impl Iterator<Item = &Axiom> + '_ {
        self.entries.iter().map(|e| &e.axiom)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn length(&self) -> usize {
        self.axioms().map(Axiom::length).sum()
    }

    pub fn max_axiom_length(&self) -> usize {
        self.axioms().map(Axiom::length).max().unwrap_or(0)
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature::default();
        for a in self.axioms() {
            a.lhs.collect_names(&mut s);
            a.rhs.collect_names(&mut s);
        }
        s
    }

    pub fn indices(&self) -> BTreeSet<usize> {
        self.entries.iter().map(|e| e.index).collect()
    }

    /// Axiom set view, ignoring statement indices.
    pub fn axiom_set(&self) -> BTreeSet<Axiom> {
        self.axioms().cloned().collect()
    }

    /// Keeps the entries whose statement index is in `keep`.
    pub fn restrict(&self, keep: &BTreeSet<usize>) -> Ontology {
        Ontology {
            entries: self
                .entries
                .iter()
                .filter(|e| keep.contains(&e.index))
                .cloned()
                .collect(),
        }
    }
}

/// A set of concept names and role names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub concepts: BTreeSet<Name>,
    pub roles: BTreeSet<Name>,
}

impl Signature {
    pub fn new(names: impl IntoIterator<Item = Name>) -> Self {
        let mut s = Signature::default();
        for n in names {
            s.insert(n);
        }
        s
    }

    pub fn insert(&mut self, n: Name) -> bool {
        match n.kind() {
            NameKind::Concept => self.concepts.insert(n),
            NameKind::Role => self.roles.insert(n),
        }
    }

    pub fn contains(&self, n: &Name) -> bool {
        match n.kind() {
            NameKind::Concept => self.concepts.contains(n),
            NameKind::Role => self.roles.contains(n),
        }
    }

    pub fn len(&self) -> usize {
        self.concepts.len() + self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty() && self.roles.is_empty()
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut s = self.clone();
        s.extend(other);
        s
    }

    pub fn extend(&mut self, other: &Signature) {
        self.concepts.extend(other.concepts.iter().cloned());
        self.roles.extend(other.roles.iter().cloned());
    }

    pub fn is_subset(&self, other: &Signature) -> bool {
        self.concepts.is_subset(&other.concepts) && self.roles.is_subset(&other.roles)
    }

    pub fn names(&self) -> impl Iterator<Item = &Name> + '_ {
        self.concepts.iter().chain(self.roles.iter())
    }

    pub fn without_definers(&self) -> Signature {
        Signature {
            concepts: self.concepts.iter().filter(|n| !n.is_definer()).cloned().collect(),
            roles: self.roles.clone(),
        }
    }
}

/// Literal of a normal-form clause.  Role literals carry a filler concept;
/// clausification only produces definer fillers, later stages may introduce
/// `⊥` or compound fillers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Literal {
    Pos(Name),
    Neg(Name),
    Ex(Name, Concept),
    All(Name, Concept),
}

impl Literal {
    pub fn role(q: Quantifier, role: Name, filler: Concept) -> Self {
        match q {
            Quantifier::Exists => Literal::Ex(role, filler),
            Quantifier::Forall => Literal::All(role, filler),
        }
    }

    pub fn to_concept(&self) -> Concept {
        match self {
            Literal::Pos(n) => Concept::Atom(n.clone()),
            Literal::Neg(n) => Concept::not(Concept::Atom(n.clone())),
            Literal::Ex(r, c) => Concept::exists(r.clone(), c.clone()),
            Literal::All(r, c) => Concept::forall(r.clone(), c.clone()),
        }
    }

    pub fn length(&self) -> usize {
        match self {
            Literal::Pos(_) | Literal::Neg(_) => 1,
            Literal::Ex(_, c) | Literal::All(_, c) => c.length() + 1,
        }
    }

    pub fn concept_name(&self) -> Option<&Name> {
        match self {
            Literal::Pos(n) | Literal::Neg(n) => Some(n),
            _ => None,
        }
    }

    /// `(quantifier, role, filler)` of a role literal.
    pub fn restriction(&self) -> Option<(Quantifier, &Name, &Concept)> {
        match self {
            Literal::Ex(r, c) => Some((Quantifier::Exists, r, c)),
            Literal::All(r, c) => Some((Quantifier::Forall, r, c)),
            _ => None,
        }
    }

    /// The definer a role literal points to, when its filler is a plain name.
    pub fn filler_name(&self) -> Option<&Name> {
        match self.restriction() {
            Some((_, _, Concept::Atom(n))) => Some(n),
            _ => None,
        }
    }

    pub fn negated_definer(&self) -> Option<&Name> {
        match self {
            Literal::Neg(n) if n.is_definer() => Some(n),
            _ => None,
        }
    }

    pub fn collect_names(&self, out: &mut Signature) {
        self.to_concept().collect_names(out)
    }

    pub fn mentions(&self, pred: &dyn Fn(&Name) -> bool) -> bool {
        match self {
            Literal::Pos(n) | Literal::Neg(n) => pred(n),
            Literal::Ex(r, c) | Literal::All(r, c) => pred(r) || c.mentions(pred),
        }
    }

    pub fn is_trivially_true(&self) -> bool {
        matches!(self, Literal::All(_, Concept::Top))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_concept())
    }
}

/// Outcome of canonicalising a literal list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CanonicalClause {
    Clause(Vec<Literal>),
    Tautology,
}

/// Sorts, deduplicates and drops literals equivalent to `⊥` (`∃r.⊥`).
/// Does not check for tautologies.
pub fn sort_literals(lits: impl IntoIterator<Item = Literal>) -> Vec<Literal> {
    let mut v: Vec<Literal> = lits
        .into_iter()
        .filter(|l| !matches!(l, Literal::Ex(_, Concept::Bottom)))
        .collect();
    v.sort();
    v.dedup();
    v
}

/// True if the sorted literal set contains `A` and `¬A` or a `∀r.⊤`.
pub fn is_tautology(lits: &[Literal]) -> bool {
    lits.iter().any(|l| match l {
        Literal::Pos(n) => lits.binary_search(&Literal::Neg(n.clone())).is_ok(),
        other => other.is_trivially_true(),
    })
}

pub fn canonical_clause(lits: impl IntoIterator<Item = Literal>) -> CanonicalClause {
    let v = sort_literals(lits);
    if is_tautology(&v) {
        CanonicalClause::Tautology
    } else {
        CanonicalClause::Clause(v)
    }
}

/// Unique clause identifier, shared with the provenance graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClauseId(pub u64);

/// Normal-form axiom `⊤ ⊑ L₁ ⊔ … ⊔ Lₙ`; the empty clause stands for `⊤ ⊑ ⊥`.
#[derive(Clone, Debug)]
pub struct Clause {
    pub id: ClauseId,
    pub lits: Arc<[Literal]>,
}

impl Clause {
    pub fn literals(&self) -> &[Literal] {
        &self.lits
    }

    pub fn contains(&self, l: &Literal) -> bool {
        self.lits.binary_search(l).is_ok()
    }

    pub fn length(&self) -> usize {
        1 + self.lits.iter().map(Literal::length).sum::<usize>()
    }

    /// Concept-name literals that are not definers.
    pub fn has_plain_concept_literal(&self) -> bool {
        self.lits
            .iter()
            .any(|l| l.concept_name().is_some_and(|n| !n.is_definer()))
    }

    /// Non-empty and made of negative definer literals only.
    pub fn is_negative_definer_clause(&self) -> bool {
        !self.lits.is_empty() && self.lits.iter().all(|l| l.negated_definer().is_some())
    }

    pub fn negative_definers(&self) -> impl Iterator<Item = &Name> + '_ {
        self.lits.iter().filter_map(Literal::negated_definer)
    }

    pub fn mentions(&self, pred: &dyn Fn(&Name) -> bool) -> bool {
        self.lits.iter().any(|l| l.mentions(pred))
    }

    pub fn contains_definer(&self) -> bool {
        self.mentions(&|n| n.is_definer())
    }

    pub fn signature(&self) -> Signature {
        let mut s = Signature::default();
        for l in self.lits.iter() {
            l.collect_names(&mut s);
        }
        s
    }

    pub fn to_axiom(&self) -> Axiom {
        Axiom::new(Concept::Top, clause_concept(&self.lits))
    }

    /// `self ⊆ other` as literal sets.
    pub fn subsumes(&self, other: &Clause) -> bool {
        is_sorted_subset(&self.lits, &other.lits)
    }
}

impl PartialEq for Clause {
    fn eq(&self, other: &Self) -> bool {
        self.lits == other.lits
    }
}

impl Eq for Clause {}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lits.is_empty() {
            return f.write_str("⊥");
        }
        for (i, l) in self.lits.iter().enumerate() {
            if i > 0 {
                f.write_str(" ⊔ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

pub fn clause_concept(lits: &[Literal]) -> Concept {
    Concept::or(lits.iter().map(Literal::to_concept))
}

pub fn is_sorted_subset<T: Ord>(small: &[T], big: &[T]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            match y.cmp(x) {
                Ordering::Less => continue,
                Ordering::Equal => continue 'outer,
                Ordering::Greater => return false,
            }
        }
        return false;
    }
    true
}
