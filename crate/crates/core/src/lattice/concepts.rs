use std::collections::HashMap;

use rayon::prelude::*;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::context::FormalContext;
use crate::error::Result;
use crate::lattice::{extents, ClosureSystem};

/// A formal concept `(A, B)` with `A' = B` and `B' = A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Concept {
    pub extent: ObjectSet,
    pub intent: AttributeSet,
}

/// Concepts of a context in canonical extent order, with the cover relation.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    objects: Vec<String>,
    attributes: Vec<String>,
    concepts: Vec<Concept>,
    /// `(lower, upper)` index pairs of the transitive reduction.
    covers: Vec<(usize, usize)>,
    index: HashMap<ObjectSet, usize>,
}

impl ConceptLattice {
    /// Enumerates all concepts of `ctx`, failing once more than `cap` are found.
    pub fn of(ctx: &FormalContext, cap: usize) -> Result<Self> {
        let ext = extents(ctx, cap)?;
        Ok(Self::from_extents(ctx, &ext))
    }

    /// Builds the lattice from an already enumerated extent system of `ctx`.
    pub fn from_extents(ctx: &FormalContext, ext: &ClosureSystem) -> Self {
        let concepts: Vec<Concept> = ext
            .iter()
            .map(|e| Concept {
                intent: ctx.intent_of(e),
                extent: e.clone(),
            })
            .collect();
        let covers = cover_relation(&concepts);
        let index = concepts.iter().enumerate().map(|(i, c)| (c.extent.clone(), i)).collect();
        Self {
            objects: ctx.objects().to_vec(),
            attributes: ctx.attributes().to_vec(),
            concepts,
            covers,
            index,
        }
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn concepts(&self) -> &[Concept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    /// Index of the concept with the given extent.
    pub fn position(&self, extent: &ObjectSet) -> Option<usize> {
        self.index.get(extent).copied()
    }

    /// `(A,B) ≤ (C,D) ⇔ A ⊆ C`.
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.concepts[a].extent.is_subset(&self.concepts[b].extent)
    }

    pub fn extents(&self) -> ClosureSystem {
        ClosureSystem::from_sorted_unchecked(self.objects.len(), self.concepts.iter().map(|c| c.extent.clone()).collect())
    }
}

/// Upper covers of each concept. Candidates are scanned in increasing extent
/// size; a strict superset is a cover unless it contains a cover found earlier.
fn cover_relation(concepts: &[Concept]) -> Vec<(usize, usize)> {
    let per_node: Vec<Vec<(usize, usize)>> = (0..concepts.len())
        .into_par_iter()
        .map(|i| {
            let lower = &concepts[i].extent;
            let size = lower.len();
            let mut uppers: Vec<usize> = Vec::new();
            for (k, c) in concepts.iter().enumerate().skip(i + 1) {
                if c.extent.len() == size || !lower.is_subset(&c.extent) {
                    continue;
                }
                if uppers.iter().all(|&u| !concepts[u].extent.is_subset(&c.extent)) {
                    uppers.push(k);
                }
            }
            uppers.into_iter().map(|u| (i, u)).collect()
        })
        .collect();
    per_node.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::DEFAULT_CAP;

    #[test]
    fn living_beings_lattice() {
        let k = fixtures::living_beings();
        let lat = ConceptLattice::of(&k, DEFAULT_CAP).unwrap();
        assert_eq!(lat.len(), 19);
        for c in lat.concepts() {
            assert_eq!(k.derive_objects(&c.extent).unwrap(), c.intent);
            assert_eq!(k.derive_attributes(&c.intent).unwrap(), c.extent);
        }
    }

    #[test]
    fn empty_incidence_one_by_one() {
        let k = FormalContext::from_rows(["g"], ["m"], &["."]).unwrap();
        let lat = ConceptLattice::of(&k, DEFAULT_CAP).unwrap();
        assert_eq!(lat.len(), 2);
        assert!(lat.concepts()[0].extent.is_empty());
        assert!(lat.concepts()[1].extent.is_full());
        assert_eq!(lat.covers(), [(0, 1)]);
    }

    #[test]
    fn covers_are_transitive_reduction() {
        let k = fixtures::living_beings();
        let lat = ConceptLattice::of(&k, DEFAULT_CAP).unwrap();
        let n = lat.len();
        let mut expected = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && lat.le(a, b) && !(0..n).any(|c| c != a && c != b && lat.le(a, c) && lat.le(c, b)) {
                    expected.push((a, b));
                }
            }
        }
        let mut got = lat.covers().to_vec();
        got.sort();
        assert_eq!(got, expected);
    }
}
