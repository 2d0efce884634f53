use std::collections::HashSet;
use std::sync::Arc;

use indexmap::IndexSet;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::logic::{Atom, KnowledgeBase, Predicate, Symbol, Term};

/// Below this many candidate groundings the sampler enumerates them all.
const ENUMERATION_LIMIT: u128 = 1 << 20;

#[derive(Clone, Debug, PartialEq)]
pub struct NegativeSample {
    pub atoms: Vec<Atom>,
    pub requested: usize,
}

impl NegativeSample {
    /// How many fewer negatives than requested the domain could supply.
    pub fn shortfall(&self) -> usize {
        self.requested - self.atoms.len()
    }
}

/// Strategy for drawing closed-world negatives of a target predicate.
pub trait NegativeSampler {
    fn sample(
        &self,
        kb: &KnowledgeBase,
        target: &Arc<Predicate>,
        positives: &HashSet<&Atom>,
        count: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<Atom>;
}

/// Uniform without replacement over all type-consistent groundings of the
/// target that are not positives.
#[derive(Clone, Copy, Debug, Default)]
pub struct UniformSampler;

struct GroundingSpace<'a> {
    target: &'a Arc<Predicate>,
    universes: Vec<&'a IndexSet<Symbol>>,
    total: u128,
}

impl<'a> GroundingSpace<'a> {
    fn new(kb: &'a KnowledgeBase, target: &'a Arc<Predicate>) -> Option<Self> {
        let universes: Option<Vec<_>> = target.arg_types().iter().map(|t| kb.universe(t)).collect();
        let universes = universes?;
        let total = universes.iter().map(|u| u.len() as u128).product();
        Some(GroundingSpace {
            target,
            universes,
            total,
        })
    }

    /// Mixed-radix decoding; the last argument varies fastest.
    fn decode(&self, mut index: u128) -> Atom {
        let mut names = vec![None; self.universes.len()];
        for (slot, u) in self.universes.iter().enumerate().rev() {
            let n = u.len() as u128;
            names[slot] = Some(&u[(index % n) as usize]);
            index /= n;
        }
        let args = names
            .into_iter()
            .zip(self.target.arg_types())
            .map(|(n, ty)| Term::constant(n.expect("every slot decoded").clone(), ty.clone()))
            .collect();
        Atom::from_parts_unchecked(Arc::clone(self.target), args)
    }

    fn contains(&self, atom: &Atom) -> bool {
        atom.predicate() == self.target
            && atom
                .args()
                .iter()
                .zip(&self.universes)
                .all(|(t, u)| t.is_constant() && u.contains(t.name()))
    }
}

impl NegativeSampler for UniformSampler {
    fn sample(
        &self,
        kb: &KnowledgeBase,
        target: &Arc<Predicate>,
        positives: &HashSet<&Atom>,
        count: usize,
        rng: &mut ChaCha8Rng,
    ) -> Vec<Atom> {
        let Some(space) = GroundingSpace::new(kb, target) else {
            return Vec::new();
        };
        let excluded = positives.iter().filter(|a| space.contains(a)).count() as u128;
        let available = space.total - excluded;
        let count = (count as u128).min(available) as usize;
        if count == 0 {
            return Vec::new();
        }
        if space.total <= ENUMERATION_LIMIT || (count as u128) * 4 >= available {
            let pool: Vec<Atom> = (0..space.total)
                .map(|i| space.decode(i))
                .filter(|a| !positives.contains(a))
                .collect();
            index::sample(rng, pool.len(), count)
                .into_iter()
                .map(|i| pool[i].clone())
                .collect()
        } else {
            let mut chosen = HashSet::with_capacity(count);
            let mut out = Vec::with_capacity(count);
            while out.len() < count {
                let atom = space.decode(rng.random_range(0..space.total));
                if !positives.contains(&atom) && chosen.insert(atom.clone()) {
                    out.push(atom);
                }
            }
            out
        }
    }
}

/// Draws `round(ratio * |positives|)` negatives with the uniform sampler.
pub fn generate_negatives(
    kb: &KnowledgeBase,
    target: &Arc<Predicate>,
    positives: &[Atom],
    ratio: f64,
    seed: u64,
) -> Result<NegativeSample> {
    generate_negatives_with(&UniformSampler, kb, target, positives, ratio, seed)
}

pub fn generate_negatives_with(
    sampler: &dyn NegativeSampler,
    kb: &KnowledgeBase,
    target: &Arc<Predicate>,
    positives: &[Atom],
    ratio: f64,
    seed: u64,
) -> Result<NegativeSample> {
    if !(ratio >= 0.0 && ratio.is_finite()) {
        return Err(Error::Config(format!(
            "negative ratio must be a finite value >= 0, got {ratio}"
        )));
    }
    if let Some(bad) = positives.iter().find(|a| !a.is_ground()) {
        return Err(Error::NotGround(bad.to_string()));
    }
    let requested = (ratio * positives.len() as f64).round() as usize;
    let pos: HashSet<&Atom> = positives.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let atoms = sampler.sample(kb, target, &pos, requested, &mut rng);
    let sample = NegativeSample { atoms, requested };
    if sample.shortfall() > 0 {
        log::warn!(
            "only {} negatives available for `{}`, {} requested",
            sample.atoms.len(),
            target.name(),
            requested
        );
    }
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn domain(persons: usize) -> (KnowledgeBase, Arc<Predicate>) {
        let target = Predicate::new("collab", ["person", "person"]);
        let mut kb = KnowledgeBase::new();
        for i in 0..persons {
            kb.register_constant(&Term::constant(format!("p{i}"), "person"))
                .unwrap();
        }
        (kb, target)
    }

    fn pos(target: &Arc<Predicate>, pairs: &[(usize, usize)]) -> Vec<Atom> {
        pairs
            .iter()
            .map(|(a, b)| Atom::ground(target, &[&format!("p{a}"), &format!("p{b}")]).unwrap())
            .collect()
    }

    #[test]
    fn ratio_two_on_large_domain() {
        let (kb, target) = domain(30);
        let positives = pos(&target, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let s = generate_negatives(&kb, &target, &positives, 2.0, 7).unwrap();
        assert_eq!(s.atoms.len(), 8);
        assert_eq!(s.shortfall(), 0);
        let unique: HashSet<_> = s.atoms.iter().collect();
        assert_eq!(unique.len(), 8);
        assert!(s.atoms.iter().all(|a| !positives.contains(a)));
    }

    #[test]
    fn zero_positives_zero_negatives() {
        let (kb, target) = domain(5);
        let s = generate_negatives(&kb, &target, &[], 2.0, 1).unwrap();
        assert!(s.atoms.is_empty());
    }

    #[test]
    fn small_domain_is_exhausted() {
        // 3 persons -> 9 groundings; 4 positives leave exactly 5.
        let (kb, target) = domain(3);
        let positives = pos(&target, &[(0, 1), (1, 2), (2, 0), (0, 0)]);
        let oracle: HashSet<Atom> = (0..3)
            .flat_map(|a| (0..3).map(move |b| (a, b)))
            .map(|(a, b)| Atom::ground(&target, &[&format!("p{a}"), &format!("p{b}")]).unwrap())
            .filter(|a| !positives.contains(a))
            .collect();
        assert_eq!(oracle.len(), 5);
        let s = generate_negatives(&kb, &target, &positives, 2.0, 3).unwrap();
        assert_eq!(s.requested, 8);
        assert_eq!(s.atoms.len(), 5);
        assert_eq!(s.shortfall(), 3);
        assert_eq!(s.atoms.iter().cloned().collect::<HashSet<_>>(), oracle);
    }

    #[test]
    fn same_seed_same_sample() {
        let (kb, target) = domain(2000);
        let positives = pos(&target, &[(0, 1), (5, 9)]);
        let a = generate_negatives(&kb, &target, &positives, 50.0, 11).unwrap();
        let b = generate_negatives(&kb, &target, &positives, 50.0, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.atoms.len(), 100);
    }

    #[test]
    fn negative_ratio_is_rejected() {
        let (kb, target) = domain(3);
        assert!(generate_negatives(&kb, &target, &[], -1.0, 0).is_err());
    }
}
