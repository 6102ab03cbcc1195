use std::collections::HashSet;

use serde::Serialize;

use crate::bitset::ObjectSet;
use crate::error::{Error, Result};

/// An intersection-closed family of subsets of a ground set `G` that
/// contains `G`. Members are kept duplicate-free in canonical order
/// (by size, then lexicographically by index).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClosureSystem {
    ground: usize,
    sets: Vec<ObjectSet>,
}

impl ClosureSystem {
    /// Validates `family` as a closure system on `0..ground`.
    pub fn new(ground: usize, family: impl IntoIterator<Item = ObjectSet>) -> Result<Self> {
        let cs = Self::from_parts(ground, family)?;
        if !cs.sets.iter().any(|s| s.is_full()) {
            return Err(Error::InvalidClosureSystem("ground set missing".into()));
        }
        let members: HashSet<&ObjectSet> = cs.sets.iter().collect();
        for (i, a) in cs.sets.iter().enumerate() {
            for b in &cs.sets[i + 1..] {
                if !members.contains(&a.intersection(b)) {
                    return Err(Error::InvalidClosureSystem(format!("{a:?} ∩ {b:?} missing")));
                }
            }
        }
        Ok(cs)
    }

    fn from_parts(ground: usize, family: impl IntoIterator<Item = ObjectSet>) -> Result<Self> {
        let mut sets: Vec<ObjectSet> = family.into_iter().collect();
        if let Some(bad) = sets.iter().find(|s| s.width() != ground) {
            return Err(Error::dims(ground, bad.width()));
        }
        sets.sort();
        sets.dedup();
        Ok(Self { ground, sets })
    }

    /// Caller guarantees the closure-system property.
    pub(crate) fn from_sorted_unchecked(ground: usize, sets: Vec<ObjectSet>) -> Self {
        debug_assert!(sets.windows(2).all(|w| w[0] < w[1]));
        Self { ground, sets }
    }

    pub(crate) fn from_family_unchecked(ground: usize, family: impl IntoIterator<Item = ObjectSet>) -> Self {
        let mut sets: Vec<ObjectSet> = family.into_iter().collect();
        sets.sort();
        sets.dedup();
        Self { ground, sets }
    }

    /// The trivial closure system `{G}`.
    pub fn bottom(ground: usize) -> Self {
        Self {
            ground,
            sets: vec![ObjectSet::full(ground)],
        }
    }

    pub fn ground(&self) -> usize {
        self.ground
    }

    pub fn sets(&self) -> &[ObjectSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, set: &ObjectSet) -> bool {
        self.sets.binary_search(set).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, ObjectSet> {
        self.sets.iter()
    }

    /// True if every member of `self` is a member of `other`.
    pub fn is_subfamily_of(&self, other: &ClosureSystem) -> bool {
        self.ground == other.ground && self.sets.iter().all(|s| other.contains(s))
    }

    /// Smallest member containing `set`.
    pub fn closure_of(&self, set: &ObjectSet) -> ObjectSet {
        let mut out = ObjectSet::full(self.ground);
        for s in self.sets.iter().filter(|s| set.is_subset(s)) {
            out.intersect_with(s);
        }
        out
    }

    /// Members as arrays of names, canonical order.
    pub fn to_names(&self, names: &[String]) -> Vec<Vec<String>> {
        self.sets
            .iter()
            .map(|s| s.iter().map(|g| names[g].clone()).collect())
            .collect()
    }

    /// JSON array of object-name arrays.
    pub fn to_json(&self, names: &[String]) -> serde_json::Value {
        #[derive(Serialize)]
        struct Wrapper(Vec<Vec<String>>);
        serde_json::to_value(Wrapper(self.to_names(names))).expect("string arrays serialize")
    }
}

impl<'a> IntoIterator for &'a ClosureSystem {
    type Item = &'a ObjectSet;
    type IntoIter = std::slice::Iter<'a, ObjectSet>;

    fn into_iter(self) -> Self::IntoIter {
        self.sets.iter()
    }
}

/// Smallest closure system on `0..ground` containing every set of `family`.
pub fn intersection_close(family: impl IntoIterator<Item = ObjectSet>, ground: usize) -> Result<ClosureSystem> {
    let mut members: HashSet<ObjectSet> = HashSet::new();
    let mut list: Vec<ObjectSet> = Vec::new();
    let top = ObjectSet::full(ground);
    members.insert(top.clone());
    list.push(top);
    // Adding X to a closed family F: F ∪ {X ∩ Y | Y ∈ F} is closed again.
    for x in family {
        if x.width() != ground {
            return Err(Error::dims(ground, x.width()));
        }
        if members.contains(&x) {
            continue;
        }
        let snapshot = list.len();
        for i in 0..snapshot {
            let meet = x.intersection(&list[i]);
            if members.insert(meet.clone()) {
                list.push(meet);
            }
        }
    }
    list.sort();
    Ok(ClosureSystem::from_sorted_unchecked(ground, list))
}

/// Members that are not the intersection of the members strictly above
/// them. `G` (the empty meet) is never included.
pub fn meet_irreducibles(cs: &ClosureSystem) -> Vec<ObjectSet> {
    cs.sets
        .iter()
        .filter(|a| !a.is_full())
        .filter(|a| {
            let mut meet = ObjectSet::full(cs.ground);
            for b in cs.sets.iter().filter(|b| a.is_proper_subset(b)) {
                meet.intersect_with(b);
            }
            &meet != *a
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ground: usize, xs: &[usize]) -> ObjectSet {
        ObjectSet::from_indices(ground, xs.iter().copied())
    }

    #[test]
    fn close_empty_family() {
        let cs = intersection_close([], 3).unwrap();
        assert_eq!(cs, ClosureSystem::bottom(3));
    }

    #[test]
    fn close_two_sets() {
        // {1,2},{2,3} over {1,2,3} as indices 0..3
        let cs = intersection_close([set(3, &[0, 1]), set(3, &[1, 2])], 3).unwrap();
        let expected: Vec<ObjectSet> = vec![set(3, &[1]), set(3, &[0, 1]), set(3, &[1, 2]), set(3, &[0, 1, 2])];
        assert_eq!(cs.sets(), expected.as_slice());
        assert!(intersection_close([set(2, &[0])], 3).is_err());
    }

    #[test]
    fn validation() {
        assert!(ClosureSystem::new(2, [set(2, &[0])]).is_err());
        assert!(ClosureSystem::new(3, [set(3, &[0, 1]), set(3, &[1, 2]), set(3, &[0, 1, 2])]).is_err());
        assert!(ClosureSystem::new(2, [set(2, &[0]), set(2, &[0, 1])]).is_ok());
    }

    #[test]
    fn meet_irreducibles_of_chain() {
        let cs = ClosureSystem::new(2, [set(2, &[]), set(2, &[0]), set(2, &[0, 1])]).unwrap();
        assert_eq!(meet_irreducibles(&cs), vec![set(2, &[]), set(2, &[0])]);
        assert!(meet_irreducibles(&ClosureSystem::bottom(4)).is_empty());
    }

    #[test]
    fn meet_irreducibles_of_powerset_are_coatoms() {
        let all: Vec<ObjectSet> = (0u32..8).map(|m| set(3, &(0..3).filter(|i| m >> i & 1 == 1).collect::<Vec<_>>())).collect();
        let cs = ClosureSystem::new(3, all).unwrap();
        let mi = meet_irreducibles(&cs);
        assert_eq!(mi, vec![set(3, &[0, 1]), set(3, &[0, 2]), set(3, &[1, 2])]);
    }

    #[test]
    fn closure_of_finds_smallest_member() {
        let cs = intersection_close([set(3, &[0, 1]), set(3, &[1, 2])], 3).unwrap();
        assert_eq!(cs.closure_of(&set(3, &[0])), set(3, &[0, 1]));
        assert_eq!(cs.closure_of(&set(3, &[0, 2])), set(3, &[0, 1, 2]));
        assert_eq!(cs.closure_of(&set(3, &[])), set(3, &[1]));
    }

    #[test]
    fn json_uses_names() {
        let cs = intersection_close([set(2, &[0])], 2).unwrap();
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(cs.to_json(&names).to_string(), r#"[["a"],["a","b"]]"#);
    }
}
