//! Scale-measures: verification, comparison, canonical and conjunctive
//! representations, and the join / join-complement of closure systems.
//!
//! Equivalence classes of scale-measures are handled through their
//! reflected closure systems `σ⁻¹[Ext(S)] = {σ⁻¹(A) | A ∈ Ext(S)}`, never
//! through the syntactic shape of the scale context.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::bitset::{AttributeSet, ObjectSet};
use crate::context::{FormalContext, ObjectMap};
use crate::cxt::read_cxt_file;
use crate::error::{Error, Result};
use crate::lattice::{extents, intersection_close, meet_irreducibles, ClosureSystem};

/// A verified scale-measure `(σ, S)` of a base context `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScaleMeasure {
    base: FormalContext,
    scale: FormalContext,
    map: ObjectMap,
}

/// Outcome of the attribute criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub is_scale_measure: bool,
    /// First scale attribute whose extent does not pull back to an extent of `K`.
    pub witness: Option<usize>,
}

/// `σ⁻¹(m^{I_S})` for every scale attribute `m`.
pub(crate) fn attribute_preimages(scale: &FormalContext, map: &ObjectMap) -> Vec<ObjectSet> {
    scale.columns().iter().map(|col| map.preimage(col)).collect()
}

/// Decides whether `σ` is an `S`-measure of `K` by checking only the
/// attribute extents of `S`: `(σ, S)` is a scale-measure iff
/// `σ⁻¹(m^{I_S})` is closed in `K` for every `m ∈ M_S`.
pub fn is_scale_measure(base: &FormalContext, scale: &FormalContext, map: &ObjectMap) -> Result<Verdict> {
    map.check(base, scale)?;
    let witness = attribute_preimages(scale, map)
        .iter()
        .position(|p| base.closure_objects(p).map(|c| &c != p).unwrap_or(true));
    Ok(Verdict {
        is_scale_measure: witness.is_none(),
        witness,
    })
}

/// The reflected family `{σ⁻¹(A) | A ∈ Ext(S)}`, a closure system on `G_K`.
pub fn reflected_extents(base: &FormalContext, scale: &FormalContext, map: &ObjectMap, cap: usize) -> Result<ClosureSystem> {
    map.check(base, scale)?;
    let scale_extents = extents(scale, cap)?;
    Ok(ClosureSystem::from_family_unchecked(
        base.num_objects(),
        scale_extents.iter().map(|a| map.preimage(a)),
    ))
}

impl ScaleMeasure {
    /// Checks the scale-measure property and wraps the triple.
    pub fn verify(base: FormalContext, scale: FormalContext, map: ObjectMap) -> Result<Self> {
        let verdict = is_scale_measure(&base, &scale, &map)?;
        if let Some(m) = verdict.witness {
            return Err(Error::NotAScaleMeasure {
                witness: scale.attributes()[m].clone(),
            });
        }
        Ok(Self { base, scale, map })
    }

    /// `(id, K)`, the finest scale-measure of `K`.
    pub fn identity(base: FormalContext) -> Self {
        let map = ObjectMap::identity(base.num_objects());
        Self {
            scale: base.clone(),
            base,
            map,
        }
    }

    pub fn base(&self) -> &FormalContext {
        &self.base
    }

    pub fn scale(&self) -> &FormalContext {
        &self.scale
    }

    pub fn map(&self) -> &ObjectMap {
        &self.map
    }

    pub fn reflected(&self, cap: usize) -> Result<ClosureSystem> {
        reflected_extents(&self.base, &self.scale, &self.map, cap)
    }

    pub fn into_parts(self) -> (FormalContext, FormalContext, ObjectMap) {
        (self.base, self.scale, self.map)
    }
}

/// `finer` is finer than `coarser` iff every extent reflected by `coarser`
/// is reflected by `finer`.
pub fn finer_than(finer: &ScaleMeasure, coarser: &ScaleMeasure, cap: usize) -> Result<bool> {
    if finer.base != coarser.base {
        return Err(Error::BaseMismatch);
    }
    Ok(coarser.reflected(cap)?.is_subfamily_of(&finer.reflected(cap)?))
}

/// Finer in both directions.
pub fn equivalent(a: &ScaleMeasure, b: &ScaleMeasure, cap: usize) -> Result<bool> {
    if a.base != b.base {
        return Err(Error::BaseMismatch);
    }
    Ok(a.reflected(cap)? == b.reflected(cap)?)
}

/// Context on `objects` with one attribute per member of `family`, whose
/// column is that member.
fn family_context(objects: &[String], family: &ClosureSystem, label: impl Fn(&ObjectSet) -> String) -> Result<FormalContext> {
    let attributes: Vec<String> = family.iter().map(&label).collect();
    let width = attributes.len();
    let rows = (0..objects.len())
        .map(|g| AttributeSet::from_indices(width, family.iter().enumerate().filter(|(_, a)| a.contains(g)).map(|(i, _)| i)))
        .collect();
    FormalContext::new(objects.to_vec(), attributes, rows)
}

/// Scale on `G_K` whose attributes are the members of `family`, named by
/// their object lists (`{a, b}`). Its extent system is exactly `family`.
pub fn canonical_scale(base: &FormalContext, family: &ClosureSystem) -> Result<FormalContext> {
    family_context(base.objects(), family, |a| format!("{{{}}}", base.object_names(a).join(", ")))
}

/// Scale on `G_K` with one attribute `∧{m₁,…,m_j}` per member `A` of
/// `family`, where `{m₁,…,m_j} = A^{I_K}` in context order; its column is
/// `(A^{I_K})^{I_K}`. For families of extents of `K` the column is `A` itself.
pub fn cnf_scale(base: &FormalContext, family: &ClosureSystem) -> Result<FormalContext> {
    let closed = ClosureSystem::from_family_unchecked(base.num_objects(), family.iter().map(|a| base.extent_of(&base.intent_of(a))));
    family_context(base.objects(), &closed, |a| format!("∧{{{}}}", base.attribute_names(&base.intent_of(a)).join(",")))
}

/// `(id, K_{σ⁻¹[Ext(S)]})`: one attribute per reflected extent.
pub fn canonical_representation(sm: &ScaleMeasure, cap: usize) -> Result<ScaleMeasure> {
    let family = sm.reflected(cap)?;
    let scale = canonical_scale(&sm.base, &family)?;
    Ok(ScaleMeasure {
        map: ObjectMap::identity(sm.base.num_objects()),
        base: sm.base.clone(),
        scale,
    })
}

/// Conjunctive normal form: identity map, one conjunction of base
/// attributes per reflected extent.
pub fn conjunctive_normalform(sm: &ScaleMeasure, cap: usize) -> Result<ScaleMeasure> {
    let family = sm.reflected(cap)?;
    let scale = cnf_scale(&sm.base, &family)?;
    Ok(ScaleMeasure {
        map: ObjectMap::identity(sm.base.num_objects()),
        base: sm.base.clone(),
        scale,
    })
}

/// Join in the lattice of closure systems: the smallest closure system
/// containing both.
pub fn hierarchy_join(a: &ClosureSystem, b: &ClosureSystem) -> Result<ClosureSystem> {
    if a.ground() != b.ground() {
        return Err(Error::dims(a.ground(), b.ground()));
    }
    intersection_close(a.iter().chain(b.iter()).cloned(), a.ground())
}

/// Least closure system `Q` with `hierarchy_join(Q, part) = full`.
///
/// Every meet-irreducible of `full` missing from `part` must lie in any such
/// `Q` (it cannot be produced as an intersection of other members), and those
/// meet-irreducibles already generate `full` together with `part`. Hence the
/// closure of exactly those sets is the least solution.
pub fn join_complement(full: &ClosureSystem, part: &ClosureSystem) -> Result<ClosureSystem> {
    if !part.is_subfamily_of(full) {
        return Err(Error::InvalidClosureSystem("part is not a subfamily of full".into()));
    }
    let missing = meet_irreducibles(full).into_iter().filter(|m| !part.contains(m));
    intersection_close(missing, full.ground())
}

/// On-disk description of a scaling: paths to the base and scale contexts
/// and an optional object map (omitted means identity by object name).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleMeasureSpec {
    pub base: PathBuf,
    pub scale: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<BTreeMap<String, String>>,
}

impl ScaleMeasureSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Reads both contexts (paths relative to `dir`) and resolves the map.
    pub fn load(&self, dir: &Path) -> Result<(FormalContext, FormalContext, ObjectMap)> {
        let base = read_cxt_file(dir.join(&self.base))?;
        let scale = read_cxt_file(dir.join(&self.scale))?;
        let map = match &self.map {
            None => ObjectMap::by_name(&base, &scale)?,
            Some(pairs) => ObjectMap::from_names(&base, &scale, pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())))?,
        };
        Ok((base, scale, map))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::lattice::DEFAULT_CAP;

    fn powerset(n: usize) -> ClosureSystem {
        ClosureSystem::new(n, (0u32..1 << n).map(|m| ObjectSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)))).unwrap()
    }

    fn sets(n: usize, xs: &[&[usize]]) -> Vec<ObjectSet> {
        xs.iter().map(|s| ObjectSet::from_indices(n, s.iter().copied())).collect()
    }

    #[test]
    fn living_beings_scale_reflects_twelve() {
        let k = fixtures::living_beings();
        let s = fixtures::living_beings_scale();
        let id = ObjectMap::identity(8);
        assert!(is_scale_measure(&k, &s, &id).unwrap().is_scale_measure);
        let r = reflected_extents(&k, &s, &id, DEFAULT_CAP).unwrap();
        assert_eq!(r.len(), 12);
        assert!(r.is_subfamily_of(&extents(&k, DEFAULT_CAP).unwrap()));
    }

    #[test]
    fn eq_neq_is_not_a_measure() {
        let (eq, neq) = fixtures::eq_neq();
        let v = is_scale_measure(&eq, &neq, &ObjectMap::identity(3)).unwrap();
        assert!(!v.is_scale_measure);
        assert!(v.witness.is_some());
        let r = reflected_extents(&eq, &neq, &ObjectMap::identity(3), DEFAULT_CAP).unwrap();
        assert_eq!(r, powerset(3));
        assert!(matches!(
            ScaleMeasure::verify(eq, neq, ObjectMap::identity(3)),
            Err(Error::NotAScaleMeasure { .. })
        ));
    }

    #[test]
    fn self_scaling_is_a_measure() {
        let k = fixtures::living_beings();
        assert!(is_scale_measure(&k, &k, &ObjectMap::identity(8)).unwrap().is_scale_measure);
        let r = reflected_extents(&k, &k, &ObjectMap::identity(8), DEFAULT_CAP).unwrap();
        assert_eq!(r, extents(&k, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn finer_than_cases() {
        let k = fixtures::living_beings();
        let s = fixtures::living_beings_scale();
        let sm = ScaleMeasure::verify(k.clone(), s.clone(), ObjectMap::identity(8)).unwrap();
        assert!(finer_than(&sm, &sm, DEFAULT_CAP).unwrap());
        let top = ScaleMeasure::identity(k.clone());
        assert!(finer_than(&top, &sm, DEFAULT_CAP).unwrap());
        assert!(!finer_than(&sm, &top, DEFAULT_CAP).unwrap());

        let coarse_scale = s.restrict_attributes(&s.attribute_set(["W", "plants"]).unwrap()).unwrap();
        let coarse = ScaleMeasure::verify(k.clone(), coarse_scale, ObjectMap::identity(8)).unwrap();
        assert!(finer_than(&sm, &coarse, DEFAULT_CAP).unwrap());
        assert!(!finer_than(&coarse, &sm, DEFAULT_CAP).unwrap());

        let (eq, _) = fixtures::eq_neq();
        assert!(matches!(finer_than(&sm, &ScaleMeasure::identity(eq), DEFAULT_CAP), Err(Error::BaseMismatch)));
    }

    #[test]
    fn canonical_representation_cases() {
        let k = fixtures::living_beings();
        let top = ScaleMeasure::identity(k.clone());
        let canon = canonical_representation(&top, DEFAULT_CAP).unwrap();
        assert_eq!(canon.scale().num_attributes(), 19);
        assert!(equivalent(&canon, &top, DEFAULT_CAP).unwrap());

        let sm = ScaleMeasure::verify(k.clone(), fixtures::living_beings_scale(), ObjectMap::identity(8)).unwrap();
        let canon = canonical_representation(&sm, DEFAULT_CAP).unwrap();
        assert_eq!(canon.scale().num_attributes(), 12);
        assert_eq!(canon.reflected(DEFAULT_CAP).unwrap(), sm.reflected(DEFAULT_CAP).unwrap());
        assert!(is_scale_measure(canon.base(), canon.scale(), canon.map()).unwrap().is_scale_measure);
    }

    #[test]
    fn constant_map_reflects_only_trivial_sets() {
        let k = fixtures::living_beings();
        let s = FormalContext::from_rows(["x", "y"], ["p", "q"], &["X.", ".X"]).unwrap();
        let constant = ObjectMap::new(vec![1; 8], 2).unwrap();
        let sm = ScaleMeasure::verify(k.clone(), s, constant).unwrap();
        let canon = canonical_representation(&sm, DEFAULT_CAP).unwrap();
        let fam = canon.reflected(DEFAULT_CAP).unwrap();
        assert!(fam.iter().all(|a| a.is_empty() || a.is_full()));
        assert_eq!(fam.len(), 2);
    }

    #[test]
    fn cnf_labels() {
        let k = fixtures::living_beings();
        let sm = ScaleMeasure::verify(k.clone(), fixtures::living_beings_scale(), ObjectMap::identity(8)).unwrap();
        let cnf = conjunctive_normalform(&sm, DEFAULT_CAP).unwrap();
        let mammal = cnf.scale().attribute_index("∧{L,BF,W,LL,M}").expect("mammal conjunction present");
        assert_eq!(cnf.scale().object_names(cnf.scale().column(mammal)), ["dog"]);
        // G is reflected; G' = {W} in the living beings context
        assert!(cnf.scale().attribute_index("∧{W}").is_some());
        assert!(equivalent(&cnf, &sm, DEFAULT_CAP).unwrap());

        // a context without a full column labels G with the empty conjunction
        let (eq, _) = fixtures::eq_neq();
        let cnf = conjunctive_normalform(&ScaleMeasure::identity(eq), DEFAULT_CAP).unwrap();
        let top = cnf.scale().attribute_index("∧{}").unwrap();
        assert!(cnf.scale().column(top).is_full());
    }

    #[test]
    fn join_cases() {
        let (eq, neq) = fixtures::eq_neq();
        let ext_eq = extents(&eq, DEFAULT_CAP).unwrap();
        assert_eq!(hierarchy_join(&ext_eq, &ClosureSystem::bottom(3)).unwrap(), ext_eq);
        let refl = reflected_extents(&eq, &neq, &ObjectMap::identity(3), DEFAULT_CAP).unwrap();
        assert_eq!(hierarchy_join(&ext_eq, &refl).unwrap(), powerset(3));
        assert!(hierarchy_join(&ext_eq, &ClosureSystem::bottom(2)).is_err());
    }

    #[test]
    fn join_complement_cases() {
        let p = powerset(3);
        assert_eq!(join_complement(&p, &p).unwrap(), ClosureSystem::bottom(3));
        let part = ClosureSystem::new(3, sets(3, &[&[], &[0], &[1], &[2], &[0, 1, 2]])).unwrap();
        let q = join_complement(&p, &part).unwrap();
        assert_eq!(q, intersection_close(sets(3, &[&[0, 1], &[0, 2], &[1, 2]]), 3).unwrap());
        assert_eq!(q, p);
        assert_eq!(hierarchy_join(&q, &part).unwrap(), p);
        let chain = ClosureSystem::new(3, sets(3, &[&[0], &[0, 1, 2]])).unwrap();
        let other = ClosureSystem::new(3, sets(3, &[&[1], &[0, 1, 2]])).unwrap();
        assert!(join_complement(&chain, &other).is_err());
    }

    #[test]
    fn spec_json_loads_relative_paths() {
        let dir = std::env::temp_dir().join(format!("fcaerr-spec-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        std::fs::write(dir.join("k.cxt"), fixtures::EQ3_CXT).unwrap();
        std::fs::write(dir.join("s.cxt"), fixtures::NEQ3_CXT).unwrap();
        let spec = ScaleMeasureSpec::from_json(r#"{"base": "k.cxt", "scale": "s.cxt"}"#).unwrap();
        let (k, s, map) = spec.load(&dir).unwrap();
        assert_eq!((k.num_objects(), s.num_objects()), (3, 3));
        assert!(map.is_identity());
        let spec = ScaleMeasureSpec::from_json(r#"{"base": "k.cxt", "scale": "s.cxt", "map": {"1": "2", "2": "2", "3": "1"}}"#).unwrap();
        let (_, _, map) = spec.load(&dir).unwrap();
        assert_eq!(map.image(0), 1);
        assert_eq!(map.image(2), 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
