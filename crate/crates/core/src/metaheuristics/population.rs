use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::reflect::reflect_in_place;
use super::SearchSpace;

/// A candidate solution with its cached objective value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub position: Vec<f64>,
    pub fitness: Option<f64>,
}

impl Individual {
    pub fn new(position: Vec<f64>) -> Self {
        Self { position, fitness: None }
    }
}

/// A group of individuals of equal dimension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Population {
    members: Vec<Individual>,
}

impl Population {
    pub fn new(members: Vec<Individual>) -> Self {
        Self { members }
    }

    pub fn from_positions(positions: Vec<Vec<f64>>) -> Self {
        Self::new(positions.into_iter().map(Individual::new).collect())
    }

    /// `size` individuals drawn uniformly from `range` in every coordinate.
    pub fn random<R: Rng + ?Sized>(size: usize, dim: usize, range: [f64; 2], rng: &mut R) -> Self {
        let members = (0..size)
            .map(|_| {
                Individual::new(
                    (0..dim)
                        .map(|_| range[0] + (range[1] - range[0]) * rng.random::<f64>())
                        .collect(),
                )
            })
            .collect();
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members.first().map_or(0, |m| m.position.len())
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn members_mut(&mut self) -> &mut [Individual] {
        &mut self.members
    }

    /// Index of the member with the lowest cached fitness (lowest index on
    /// ties). `None` when no member has been evaluated.
    pub fn best_index(&self) -> Option<usize> {
        self.members
            .iter()
            .enumerate()
            .filter_map(|(i, m)| m.fitness.map(|f| (i, f)))
            .fold(None, |acc: Option<(usize, f64)>, (i, f)| match acc {
                Some((_, bf)) if bf <= f => acc,
                _ => Some((i, f)),
            })
            .map(|(i, _)| i)
    }

    pub fn best(&self) -> Option<&Individual> {
        self.best_index().map(|i| &self.members[i])
    }

    /// Index of the worst member; unevaluated members count as worst.
    pub fn worst_index(&self) -> Option<usize> {
        let key = |m: &Individual| m.fitness.unwrap_or(f64::INFINITY);
        (0..self.members.len()).rev().max_by(|&a, &b| key(&self.members[a]).total_cmp(&key(&self.members[b])))
    }

    /// Drops every cached fitness, keeping positions.
    pub fn positions_only(&self) -> Self {
        Self::from_positions(self.members.iter().map(|m| m.position.clone()).collect())
    }

    /// Hash of the positions (bit patterns), for identity checks across
    /// hand-offs.
    pub fn fingerprint(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        for m in &self.members {
            for v in &m.position {
                v.to_bits().hash(&mut h);
            }
        }
        h.finish()
    }

    /// Reflects out-of-bounds members into `space`; moved members lose their
    /// cached fitness.
    pub(crate) fn clamp_into(&mut self, space: &SearchSpace) {
        for m in &mut self.members {
            let before = m.position.clone();
            reflect_in_place(&mut m.position, space.lower, space.upper);
            if before != m.position {
                m.fitness = None;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn best_and_worst() {
        let mut p = Population::from_positions(vec![vec![0.0], vec![1.0], vec![2.0]]);
        assert_eq!(p.best_index(), None);
        p.members_mut()[0].fitness = Some(0.5);
        p.members_mut()[1].fitness = Some(0.2);
        p.members_mut()[2].fitness = Some(0.2);
        assert_eq!(p.best_index(), Some(1));
        assert_eq!(p.worst_index(), Some(0));
        p.members_mut()[2].fitness = None;
        assert_eq!(p.worst_index(), Some(2));
    }

    #[test]
    fn fingerprint_ignores_fitness() {
        let mut p = Population::from_positions(vec![vec![0.0, 1.0]]);
        let a = p.fingerprint();
        p.members_mut()[0].fitness = Some(1.0);
        assert_eq!(a, p.fingerprint());
        p.members_mut()[0].position[1] = 1.5;
        assert_ne!(a, p.fingerprint());
    }
}
