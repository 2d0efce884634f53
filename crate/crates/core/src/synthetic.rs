//! A generated movie domain whose collaboration labels follow three known
//! rules, for end-to-end checks and demos.
//!
//! Types are `person`, `movie` and `genre`. Facts are `directedby(movie,
//! person)`, `actedin(person, movie)`, `ingenre(movie, genre)`,
//! `samegenre(genre, genre)` (reflexive only) and `sameperson(person,
//! person)` linking an actor to an alias identifier. With
//!
//! ```text
//! h1: directedby(M1,P1) ∧ ingenre(M1,G1) ∧ actedin(P2,M2) ∧ ingenre(M2,G2) ∧ ¬samegenre(G1,G2)
//! h2: directedby(M1,P1) ∧ actedin(P3,M1) ∧ sameperson(P3,P2)
//! h3: actedin(P1,M) ∧ actedin(P2,M)
//! ```
//!
//! `collab(P1,P2)` holds iff `h2 ∨ (h3 ∧ ¬h1)`.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

use rand::seq::{index, IndexedRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{generate_negatives, parse_modes, ExampleSet, Schema};
use crate::error::Result;
use crate::logic::{Atom, KnowledgeBase, Term};

pub const MODES: &str = "\
mode: collab(+person, +person).
mode: directedby(-movie, -person).
mode: actedin(-person, -movie).
mode: ingenre(+movie, -genre).
mode: samegenre(+genre, +genre).
mode: sameperson(-person, -person).
";

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub persons: usize,
    /// The first `directors` persons direct movies; anyone may act.
    pub directors: usize,
    pub movies: usize,
    pub genres: usize,
    /// Cast size per movie, drawn uniformly from this inclusive range.
    pub cast: (usize, usize),
    /// Probability that a director works within their home genre.
    pub home_genre_bias: f64,
    /// Fraction of non-director persons that get an alias identifier.
    pub alias_fraction: f64,
    pub neg_ratio: f64,
    /// Fraction of examples whose label is flipped after sampling.
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    fn default() -> Self {
        SyntheticConfig {
            persons: 100,
            directors: 20,
            movies: 60,
            genres: 4,
            cast: (2, 4),
            home_genre_bias: 0.9,
            alias_fraction: 0.25,
            neg_ratio: 2.0,
            label_noise: 0.05,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SyntheticData {
    pub schema: Schema,
    pub kb: KnowledgeBase,
    /// Observed examples, after label noise.
    pub examples: ExampleSet,
    /// Every `collab` atom that the rules make true.
    pub truth: HashSet<Atom>,
    pub flipped: usize,
}

struct World {
    /// Movies directed, per person.
    directed: Vec<Vec<usize>>,
    /// Movies acted in, per person.
    acted: Vec<Vec<usize>>,
    cast: Vec<Vec<usize>>,
    genre: Vec<usize>,
    /// `alias[a] = Some(p)` when person `a` is an alias of `p`.
    alias: Vec<Option<usize>>,
}

impl World {
    fn h1(&self, p1: usize, p2: usize) -> bool {
        self.directed[p1]
            .iter()
            .any(|&m1| self.acted[p2].iter().any(|&m2| self.genre[m1] != self.genre[m2]))
    }

    fn h2(&self, p1: usize, p2: usize) -> bool {
        let Some(original) = self.alias[p2] else { return false };
        self.directed[p1].iter().any(|&m| self.cast[m].contains(&original))
    }

    fn h3(&self, p1: usize, p2: usize) -> bool {
        self.acted[p1].iter().any(|m| self.acted[p2].contains(m))
    }

    fn collab(&self, p1: usize, p2: usize) -> bool {
        self.h2(p1, p2) || (self.h3(p1, p2) && !self.h1(p1, p2))
    }
}

fn person(i: usize) -> String {
    format!("p{i}")
}

pub fn generate(config: &SyntheticConfig) -> Result<SyntheticData> {
    let schema = parse_modes(MODES)?;
    let pred = |n: &str| schema.predicate(n).expect("declared in MODES").clone();
    let (collab, directedby, actedin, ingenre, samegenre, sameperson) = (
        pred("collab"),
        pred("directedby"),
        pred("actedin"),
        pred("ingenre"),
        pred("samegenre"),
        pred("sameperson"),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n = config.persons;
    let directors = config.directors.clamp(1, n);
    let home: Vec<usize> = (0..directors).map(|_| rng.random_range(0..config.genres)).collect();

    let mut world = World {
        directed: vec![Vec::new(); n],
        acted: vec![Vec::new(); n],
        cast: Vec::with_capacity(config.movies),
        genre: Vec::with_capacity(config.movies),
        alias: vec![None; n],
    };
    let people: Vec<usize> = (0..n).collect();
    for m in 0..config.movies {
        let d = rng.random_range(0..directors);
        let g = if rng.random_bool(config.home_genre_bias) {
            home[d]
        } else {
            rng.random_range(0..config.genres)
        };
        let size = rng.random_range(config.cast.0..=config.cast.1).min(n);
        let cast: Vec<usize> = people.choose_multiple(&mut rng, size).copied().collect();
        world.directed[d].push(m);
        for &p in &cast {
            world.acted[p].push(m);
        }
        world.cast.push(cast);
        world.genre.push(g);
    }
    let candidates: Vec<usize> = (directors..n).filter(|&p| !world.acted[p].is_empty()).collect();
    let n_alias = ((candidates.len() as f64) * config.alias_fraction).round() as usize;
    for i in index::sample(&mut rng, candidates.len(), n_alias.min(candidates.len())).into_vec() {
        world.alias.push(Some(candidates[i]));
        world.directed.push(Vec::new());
        world.acted.push(Vec::new());
    }
    let total = world.alias.len();

    let mut kb = KnowledgeBase::new();
    let g = |i: usize| format!("g{i}");
    let mv = |i: usize| format!("m{i}");
    for m in 0..config.movies {
        kb.insert(Atom::ground(
            &directedby,
            &[&mv(m), &person(first_director(&world, m))],
        )?)?;
        kb.insert(Atom::ground(&ingenre, &[&mv(m), &g(world.genre[m])])?)?;
        for &p in &world.cast[m] {
            kb.insert(Atom::ground(&actedin, &[&person(p), &mv(m)])?)?;
        }
    }
    for i in 0..config.genres {
        kb.insert(Atom::ground(&samegenre, &[&g(i), &g(i)])?)?;
    }
    for (a, original) in world.alias.iter().enumerate() {
        if let Some(p) = original {
            kb.insert(Atom::ground(&sameperson, &[&person(*p), &person(a)])?)?;
        }
    }
    for p in 0..total {
        kb.register_constant(&Term::constant(person(p), "person"))?;
    }

    let mut truth = HashSet::new();
    let mut positives = Vec::new();
    for p1 in 0..total {
        for p2 in 0..total {
            if world.collab(p1, p2) {
                let atom = Atom::ground(&collab, &[&person(p1), &person(p2)])?;
                truth.insert(atom.clone());
                positives.push(atom);
            }
        }
    }
    let mut negatives = generate_negatives(&kb, &collab, &positives, config.neg_ratio, config.seed)?.atoms;

    let count = positives.len() + negatives.len();
    let flips = ((count as f64) * config.label_noise).round() as usize;
    let chosen: BTreeSet<usize> = index::sample(&mut rng, count, flips.min(count)).into_iter().collect();
    let np = positives.len();
    let (mut pos, mut neg) = (Vec::new(), Vec::new());
    for (i, atom) in positives.drain(..).chain(negatives.drain(..)).enumerate() {
        let label = (i < np) != chosen.contains(&i);
        if label {
            pos.push(atom);
        } else {
            neg.push(atom);
        }
    }
    let examples = ExampleSet::new(collab, pos, neg)?;
    Ok(SyntheticData {
        schema,
        kb,
        examples,
        truth,
        flipped: chosen.len(),
    })
}

fn first_director(world: &World, movie: usize) -> usize {
    world
        .directed
        .iter()
        .position(|ms| ms.contains(&movie))
        .expect("every movie has a director")
}

impl SyntheticData {
    pub fn is_true(&self, atom: &Atom) -> bool {
        self.truth.contains(atom)
    }

    pub fn facts_text(&self) -> String {
        self.kb.to_facts_text()
    }

    pub fn modes_text(&self) -> String {
        self.schema.to_modes_text()
    }

    pub fn positives_text(&self) -> String {
        atoms_text(&self.examples.positives)
    }

    pub fn negatives_text(&self) -> String {
        atoms_text(&self.examples.negatives)
    }
}

fn atoms_text(atoms: &[Atom]) -> String {
    let mut out = String::new();
    for a in atoms {
        let _ = writeln!(out, "{a}.");
    }
    out
}
