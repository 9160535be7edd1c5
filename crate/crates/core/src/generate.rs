//! Synthetic inputs: the exponential-blowup family and seed-pinned random
//! ontologies.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::locality::sample_signature;
use crate::syntax::{Axiom, Concept, Name, Ontology, Signature};

fn atom(text: String) -> Concept {
    Concept::Atom(Name::concept(&text))
}

/// The family `Oₙ` with signature `Σₙ = {Aⱼ, Abarⱼ}` whose general module
/// has `2ⁿ` axioms.
pub fn blowup_family(n: usize) -> (Ontology, Signature) {
    let s = Name::role("s");
    let mut axioms = vec![Axiom::new(Concept::and((1..=n).map(|i| atom(format!("Z{i}")))), Concept::Bottom)];
    for i in 1..=n {
        axioms.push(Axiom::new(
            Concept::or([atom(format!("X{i}")), atom(format!("Y{i}"))]),
            atom(format!("Z{i}")),
        ));
    }
    for j in 1..=n {
        let q = |f| {
            if j == 1 {
                Concept::exists(s.clone(), f)
            } else {
                Concept::forall(s.clone(), f)
            }
        };
        axioms.push(Axiom::new(Concept::Top, Concept::or([atom(format!("A{j}")), q(atom(format!("X{j}")))])));
        axioms.push(Axiom::new(Concept::Top, Concept::or([atom(format!("Abar{j}")), q(atom(format!("Y{j}")))])));
    }
    let sigma = Signature::new((1..=n).flat_map(|j| [Name::concept(&format!("A{j}")), Name::concept(&format!("Abar{j}"))]));
    (Ontology::from_axioms(axioms), sigma)
}

/// Shape of random ontologies.
#[derive(Clone, Debug)]
pub struct RandomSpec {
    pub max_axioms: usize,
    pub concept_names: usize,
    pub role_names: usize,
    pub depth: usize,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec {
            max_axioms: 10,
            concept_names: 5,
            role_names: 2,
            depth: 2,
        }
    }
}

struct Vocabulary {
    concepts: Vec<Name>,
    roles: Vec<Name>,
}

impl Vocabulary {
    fn name(&self, rng: &mut impl Rng) -> Concept {
        Concept::Atom(self.concepts.choose(rng).unwrap().clone())
    }

    fn concept(&self, rng: &mut impl Rng, depth: usize, level: i32) -> Concept {
        let compound = rng.gen_bool(0.6 * 0.5f64.powi(level));
        if !compound {
            let a = self.name(rng);
            return if rng.gen_bool(0.2) { Concept::not(a) } else { a };
        }
        let mut choices = vec![0, 1];
        if depth > 0 {
            choices.extend([2, 2, 3, 3]);
        }
        match *choices.choose(rng).unwrap() {
            0 => Concept::and([self.concept(rng, depth, level + 1), self.concept(rng, depth, level + 1)]),
            1 => Concept::or([self.concept(rng, depth, level + 1), self.concept(rng, depth, level + 1)]),
            q => {
                let r = self.roles.choose(rng).unwrap().clone();
                let f = self.concept(rng, depth - 1, level + 1);
                if q == 2 {
                    Concept::exists(r, f)
                } else {
                    Concept::forall(r, f)
                }
            }
        }
    }

    fn axiom(&self, rng: &mut impl Rng, depth: usize) -> Axiom {
        let lhs = match rng.gen_range(0..10) {
            0..=5 => self.name(rng),
            6..=7 => Concept::and([self.name(rng), self.name(rng)]),
            _ => self.concept(rng, depth, 0),
        };
        let rhs = if rng.gen_bool(0.1) {
            Concept::Bottom
        } else {
            self.concept(rng, depth, 0)
        };
        Axiom::new(lhs, rhs)
    }
}

/// Between one and `spec.max_axioms` random axioms over `A1…`, `r1…`.
pub fn random_ontology(spec: &RandomSpec, seed: u64) -> Ontology {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vocab = Vocabulary {
        concepts: (1..=spec.concept_names.max(1)).map(|i| Name::concept(&format!("A{i}"))).collect(),
        roles: (1..=spec.role_names.max(1)).map(|i| Name::role(&format!("r{i}"))).collect(),
    };
    let count = rng.gen_range(1..=spec.max_axioms.max(1));
    Ontology::from_axioms((0..count).map(|_| vocab.axiom(&mut rng, spec.depth)))
}

/// A frequency-weighted signature of random size drawn from `o`.
pub fn random_signature(o: &Ontology, seed: u64) -> Signature {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let available = o.signature().len();
    let size = if available == 0 { 0 } else { rng.gen_range(1..=available) };
    sample_signature(o, size, seed).expect("size is within the signature")
}
