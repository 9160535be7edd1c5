//! Reading and writing ontologies in a small OWL functional-style subset,
//! and signatures as `Class:` / `ObjectProperty:` lines.

use std::fmt::Write as _;

use thiserror::Error;

use crate::syntax::{Axiom, Clause, Concept, Entry, Name, Ontology, Signature, DEFINER_PREFIX};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Open,
    Close,
    Word(String),
    Iri(String),
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

const UNSUPPORTED: &[&str] = &[
    "ObjectPropertyChain",
    "ObjectInverseOf",
    "ObjectMinCardinality",
    "ObjectMaxCardinality",
    "ObjectExactCardinality",
    "ObjectHasValue",
    "ObjectHasSelf",
    "ObjectOneOf",
    "SubObjectPropertyOf",
    "DisjointClasses",
    "DisjointUnionOf",
    "DataSomeValuesFrom",
    "DataAllValuesFrom",
];

fn is_word_char(c: char) -> bool {
    !c.is_whitespace() && !matches!(c, '(' | ')' | '<' | '>' | '#')
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, column) = (li + 1, i + 1);
            let push = |tok, out: &mut Vec<Spanned>| out.push(Spanned { tok, line, column });
            match c {
                '#' => break,
                c if c.is_whitespace() => i += 1,
                '(' => {
                    push(Tok::Open, &mut out);
                    i += 1;
                }
                ')' => {
                    push(Tok::Close, &mut out);
                    i += 1;
                }
                '<' => {
                    let end = chars[i + 1..].iter().position(|&c| c == '>').ok_or(ParseError {
                        line,
                        column,
                        message: "unterminated IRI".into(),
                    })?;
                    let iri: String = chars[i + 1..i + 1 + end].iter().collect();
                    push(Tok::Iri(iri), &mut out);
                    i += end + 2;
                }
                '>' => {
                    return Err(ParseError {
                        line,
                        column,
                        message: "unexpected '>'".into(),
                    })
                }
                _ => {
                    let len = chars[i..].iter().take_while(|&&c| is_word_char(c)).count();
                    push(Tok::Word(chars[i..i + len].iter().collect()), &mut out);
                    i += len;
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    end: (usize, usize),
}

impl Parser {
    fn err_at(&self, t: Option<&Spanned>, message: String) -> ParseError {
        let (line, column) = t.map_or(self.end, |t| (t.line, t.column));
        ParseError { line, column, message }
    }

    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ParseError> {
        match self.next() {
            Some(t) if t.tok == want => Ok(()),
            t => Err(self.err_at(t.as_ref(), format!("expected {what}"))),
        }
    }

    fn at_open(&self) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Open, .. }))
    }

    fn at_close(&self) -> bool {
        matches!(self.peek(), Some(Spanned { tok: Tok::Close, .. }))
    }

    fn name_text(&self, t: &Spanned, text: &str) -> Result<String, ParseError> {
        if text.starts_with(DEFINER_PREFIX) {
            return Err(self.err_at(
                Some(t),
                format!("identifier `{text}` uses the reserved prefix `{DEFINER_PREFIX}`"),
            ));
        }
        if text.is_empty() {
            return Err(self.err_at(Some(t), "empty identifier".into()));
        }
        Ok(text.to_string())
    }

    fn role(&mut self) -> Result<Name, ParseError> {
        let t = self.next();
        match t.as_ref().map(|t| &t.tok) {
            Some(Tok::Word(w)) if self.at_open() => Err(self.err_at(
                t.as_ref(),
                format!("unsupported role expression `{w}`"),
            )),
            Some(Tok::Word(w)) | Some(Tok::Iri(w)) => {
                let w = w.clone();
                Ok(Name::role(&self.name_text(t.as_ref().unwrap(), &w)?))
            }
            _ => Err(self.err_at(t.as_ref(), "expected a role name".into())),
        }
    }

    fn concept(&mut self) -> Result<Concept, ParseError> {
        let t = self.next();
        let Some(tok) = t.clone() else {
            return Err(self.err_at(None, "expected a concept".into()));
        };
        match &tok.tok {
            Tok::Iri(text) => Ok(Concept::atom(Name::concept(&self.name_text(&tok, text)?))),
            Tok::Word(w) if self.at_open() => {
                let w = w.clone();
                self.constructor(&tok, &w)
            }
            Tok::Word(w) if w == "owl:Thing" => Ok(Concept::Top),
            Tok::Word(w) if w == "owl:Nothing" => Ok(Concept::Bottom),
            Tok::Word(w) => Ok(Concept::atom(Name::concept(&self.name_text(&tok, w)?))),
            _ => Err(self.err_at(Some(&tok), "expected a concept".into())),
        }
    }

    fn constructor(&mut self, head: &Spanned, word: &str) -> Result<Concept, ParseError> {
        self.expect(Tok::Open, "'('")?;
        let c = match word {
            "ObjectIntersectionOf" | "ObjectUnionOf" => {
                let mut parts = vec![self.concept()?];
                while !self.at_close() {
                    parts.push(self.concept()?);
                }
                if word == "ObjectIntersectionOf" {
                    Concept::and(parts)
                } else {
                    Concept::or(parts)
                }
            }
            "ObjectComplementOf" => Concept::not(self.concept()?),
            "ObjectSomeValuesFrom" => {
                let r = self.role()?;
                Concept::exists(r, self.concept()?)
            }
            "ObjectAllValuesFrom" => {
                let r = self.role()?;
                Concept::forall(r, self.concept()?)
            }
            w if UNSUPPORTED.contains(&w) => {
                return Err(self.err_at(Some(head), format!("unsupported construct `{w}`")))
            }
            w => return Err(self.err_at(Some(head), format!("unknown constructor `{w}`"))),
        };
        self.expect(Tok::Close, "')'")?;
        Ok(c)
    }

    fn statement(&mut self, index: usize, out: &mut Vec<Entry>) -> Result<(), ParseError> {
        let t = self.next().unwrap();
        let word = match &t.tok {
            Tok::Word(w) => w.clone(),
            _ => return Err(self.err_at(Some(&t), "expected an axiom".into())),
        };
        match word.as_str() {
            "SubClassOf" => {
                self.expect(Tok::Open, "'('")?;
                let lhs = self.concept()?;
                let rhs = self.concept()?;
                self.expect(Tok::Close, "')'")?;
                out.push(Entry { index, axiom: Axiom::new(lhs, rhs) });
            }
            "EquivalentClasses" => {
                self.expect(Tok::Open, "'('")?;
                let a = self.concept()?;
                let b = self.concept()?;
                if !self.at_close() {
                    return Err(self.err_at(
                        self.peek(),
                        "EquivalentClasses takes exactly two class expressions".into(),
                    ));
                }
                self.expect(Tok::Close, "')'")?;
                out.push(Entry { index, axiom: Axiom::new(a.clone(), b.clone()) });
                out.push(Entry { index, axiom: Axiom::new(b, a) });
            }
            w if UNSUPPORTED.contains(&w) => {
                return Err(self.err_at(Some(&t), format!("unsupported construct `{w}`")))
            }
            w => return Err(self.err_at(Some(&t), format!("unknown axiom type `{w}`"))),
        }
        Ok(())
    }
}

fn end_position(text: &str) -> (usize, usize) {
    let lines = text.lines().count().max(1);
    let last = text.lines().last().map_or(0, |l| l.chars().count());
    (lines, last + 1)
}

/// Parses `SubClassOf` / `EquivalentClasses` statements; each statement gets
/// the next index, shared by both halves of an equivalence.
pub fn parse_ontology(text: &str) -> Result<Ontology, ParseError> {
    let mut p = Parser {
        toks: tokenize(text)?,
        pos: 0,
        end: end_position(text),
    };
    let mut entries = Vec::new();
    let mut index = 0;
    while p.peek().is_some() {
        p.statement(index, &mut entries)?;
        index += 1;
    }
    Ok(Ontology { entries })
}

pub fn parse_signature(text: &str) -> Result<Signature, ParseError> {
    let mut sig = Signature::default();
    for (li, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| ParseError { line: li + 1, column: 1, message };
        let (kind, rest) = line
            .split_once(':')
            .filter(|(k, _)| matches!(k.trim(), "Class" | "ObjectProperty"))
            .ok_or_else(|| err("expected `Class: name` or `ObjectProperty: name`".into()))?;
        let mut name = rest.trim();
        if let Some(inner) = name.strip_prefix('<').and_then(|n| n.strip_suffix('>')) {
            name = inner;
        }
        if name.is_empty() || name.chars().any(char::is_whitespace) {
            return Err(err(format!("invalid name `{name}`")));
        }
        if name.starts_with(DEFINER_PREFIX) {
            return Err(err(format!(
                "name `{name}` uses the reserved prefix `{DEFINER_PREFIX}`"
            )));
        }
        sig.insert(match kind.trim() {
            "Class" => Name::concept(name),
            _ => Name::role(name),
        });
    }
    Ok(sig)
}

fn write_name(out: &mut String, n: &Name) {
    let t = n.text();
    let bare = t.chars().all(is_word_char) && !t.is_empty() && t != "owl:Thing" && t != "owl:Nothing";
    if bare {
        out.push_str(t);
    } else {
        let _ = write!(out, "<{t}>");
    }
}

fn write_concept(out: &mut String, c: &Concept) {
    let nary = |out: &mut String, head: &str, cs: &[Concept]| {
        out.push_str(head);
        out.push('(');
        for (i, c) in cs.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            write_concept(out, c);
        }
        out.push(')');
    };
    match c {
        Concept::Top => out.push_str("owl:Thing"),
        Concept::Bottom => out.push_str("owl:Nothing"),
        Concept::Atom(n) => write_name(out, n),
        Concept::Not(c) => nary(out, "ObjectComplementOf", std::slice::from_ref(c)),
        Concept::And(cs) => nary(out, "ObjectIntersectionOf", cs),
        Concept::Or(cs) => nary(out, "ObjectUnionOf", cs),
        Concept::Exists(r, f) | Concept::Forall(r, f) => {
            out.push_str(if matches!(c, Concept::Exists(..)) {
                "ObjectSomeValuesFrom("
            } else {
                "ObjectAllValuesFrom("
            });
            write_name(out, r);
            out.push(' ');
            write_concept(out, f);
            out.push(')');
        }
    }
}

pub fn serialize_concept(c: &Concept) -> String {
    let mut s = String::new();
    write_concept(&mut s, c);
    s
}

pub fn serialize_axiom(a: &Axiom) -> String {
    format!("SubClassOf({} {})", serialize_concept(&a.lhs), serialize_concept(&a.rhs))
}

/// One statement per line.  Two consecutive converse axioms sharing an index
/// are written back as a single `EquivalentClasses`.
pub fn serialize_ontology(o: &Ontology) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < o.entries.len() {
        let e = &o.entries[i];
        if let Some(next) = o.entries.get(i + 1) {
            if next.index == e.index && next.axiom.lhs == e.axiom.rhs && next.axiom.rhs == e.axiom.lhs {
                let _ = writeln!(
                    out,
                    "EquivalentClasses({} {})",
                    serialize_concept(&e.axiom.lhs),
                    serialize_concept(&e.axiom.rhs)
                );
                i += 2;
                continue;
            }
        }
        out.push_str(&serialize_axiom(&e.axiom));
        out.push('\n');
        i += 1;
    }
    out
}

pub fn serialize_signature(s: &Signature) -> String {
    let mut out = String::new();
    for n in &s.roles {
        out.push_str("ObjectProperty: ");
        write_name(&mut out, n);
        out.push('\n');
    }
    for n in &s.concepts {
        out.push_str("Class: ");
        write_name(&mut out, n);
        out.push('\n');
    }
    out
}

/// Writes clauses as `⊤ ⊑ L₁ ⊔ … ⊔ Lₙ` statements; definer names are kept
/// verbatim, so the output is for inspection rather than re-parsing.
pub fn serialize_clauses<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> String {
    let mut out = String::new();
    for c in clauses {
        out.push_str(&serialize_axiom(&c.to_axiom()));
        out.push('\n');
    }
    out
}
