//! Conceptual scaling error of a scaling `(σ, S)` with respect to `K`.
//!
//! The error family `E = σ⁻¹[Ext(S)] \ Ext(K)` holds the reflected object
//! sets that are not closed in `K`. Its complement inside the reflected
//! family is the consistent part `σ⁻¹[Ext(S)] ∩ Ext(K)`, itself a closure
//! system. Membership in `Ext(K)` is always tested with one closure in `K`
//! per preimage, so `Ext(K)` is never enumerated.
//!
//! Three decompositions are offered:
//! * [`apposition_measure`]: the context `K | (G_K, M_S, I_σ)` of which both
//!   `(id, K)` and `(σ, S)` are scale-measures;
//! * [`consistent_part_measure`] and [`error_join_complement`]: the consistent
//!   part as a scale-measure of `K` plus the least closure system restoring
//!   the full reflected family;
//! * [`attribute_split`]: splitting `M_S` into consistent and inconsistent
//!   attributes (polynomial time).

use rayon::prelude::*;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::context::{apposition, sigma_context, FormalContext, ObjectMap};
use crate::error::{Error, Result};
use crate::lattice::ClosureSystem;
use crate::measure::{attribute_preimages, cnf_scale, join_complement, reflected_extents, ScaleMeasure};

/// The reflected family split into consistent and erroneous members.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorFamilies {
    /// `σ⁻¹[Ext(S)]`.
    pub reflected: ClosureSystem,
    /// `E`, in canonical order.
    pub error_family: Vec<ObjectSet>,
    /// `σ⁻¹[Ext(S)] ∩ Ext(K)`.
    pub consistent_part: ClosureSystem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConceptualError {
    /// Scale attributes whose extent does not pull back to an extent of `K`.
    pub attribute_errors: AttributeSet,
    /// `None` when only the attribute error was computed.
    pub families: Option<ErrorFamilies>,
}

impl ConceptualError {
    /// AE.
    pub fn attribute_error(&self) -> usize {
        self.attribute_errors.len()
    }

    /// CE, if the families were computed.
    pub fn conceptual_error(&self) -> Option<usize> {
        self.families.as_ref().map(|f| f.error_family.len())
    }

    pub fn is_scale_measure(&self) -> bool {
        self.attribute_errors.is_empty()
    }
}

/// Scale attributes `m` with `σ⁻¹(m^{I_S}) ∉ Ext(K)`. Polynomial in `|K|` and `|S|`.
pub fn attribute_scaling_error(base: &FormalContext, scale: &FormalContext, map: &ObjectMap) -> Result<AttributeSet> {
    map.check(base, scale)?;
    let preimages = attribute_preimages(scale, map);
    let bad: Vec<usize> = preimages
        .par_iter()
        .enumerate()
        .filter(|(_, p)| base.extent_of(&base.intent_of(p)) != **p)
        .map(|(m, _)| m)
        .collect();
    Ok(AttributeSet::from_indices(scale.num_attributes(), bad))
}

/// Splits an already computed reflected family by closedness in `base`.
pub fn split_reflected(base: &FormalContext, reflected: ClosureSystem) -> ErrorFamilies {
    let closed: Vec<bool> = reflected
        .sets()
        .par_iter()
        .map(|a| base.extent_of(&base.intent_of(a)) == *a)
        .collect();
    let mut error_family = Vec::new();
    let mut consistent = Vec::new();
    for (a, ok) in reflected.iter().zip(closed) {
        if ok {
            consistent.push(a.clone());
        } else {
            error_family.push(a.clone());
        }
    }
    ErrorFamilies {
        consistent_part: ClosureSystem::from_sorted_unchecked(reflected.ground(), consistent),
        error_family,
        reflected,
    }
}

/// CE and AE of `(σ, S)` with respect to `K`.
///
/// If enumerating `Ext(S)` exceeds `cap`, the result carries the attribute
/// error only; `families` is `None`.
pub fn conceptual_scaling_error(base: &FormalContext, scale: &FormalContext, map: &ObjectMap, cap: usize) -> Result<ConceptualError> {
    let attribute_errors = attribute_scaling_error(base, scale, map)?;
    let families = match reflected_extents(base, scale, map, cap) {
        Ok(reflected) => Some(split_reflected(base, reflected)),
        Err(Error::Intractable { cap }) => {
            log::warn!("scale has more than {cap} extents; reporting the attribute error only");
            None
        }
        Err(e) => return Err(e),
    };
    Ok(ConceptualError {
        attribute_errors,
        families,
    })
}

/// A scale-measure of `K`, in conjunctive normal form, whose reflected
/// family is exactly the consistent part of `(σ, S)`.
pub fn consistent_part_measure(base: &FormalContext, scale: &FormalContext, map: &ObjectMap, cap: usize) -> Result<ScaleMeasure> {
    let reflected = reflected_extents(base, scale, map, cap)?;
    let families = split_reflected(base, reflected);
    let cnf = cnf_scale(base, &families.consistent_part)?;
    ScaleMeasure::verify(base.clone(), cnf, ObjectMap::identity(base.num_objects()))
}

/// The least closure system whose join with the consistent part gives back
/// the whole reflected family.
pub fn error_join_complement(base: &FormalContext, scale: &FormalContext, map: &ObjectMap, cap: usize) -> Result<ClosureSystem> {
    let reflected = reflected_extents(base, scale, map, cap)?;
    let families = split_reflected(base, reflected);
    join_complement(&families.reflected, &families.consistent_part)
}

/// Result of splitting the scale attributes.
#[derive(Debug, Clone)]
pub struct AttributeSplit {
    /// The consistent attributes `O`, as a subset of `M_S`.
    pub consistent_attributes: AttributeSet,
    /// `(σ, S|O)`, always a scale-measure of `K`.
    pub consistent: ScaleMeasure,
    /// `S` restricted to `M_S \ O`.
    pub inconsistent: FormalContext,
}

/// Splits `S` into its consistent attributes (a verified scale-measure) and
/// the remaining ones.
pub fn attribute_split(base: &FormalContext, scale: &FormalContext, map: &ObjectMap) -> Result<AttributeSplit> {
    let bad = attribute_scaling_error(base, scale, map)?;
    let good = bad.complement();
    let consistent_scale = scale.restrict_attributes(&good)?;
    let inconsistent = scale.restrict_attributes(&bad)?;
    let consistent = ScaleMeasure::verify(base.clone(), consistent_scale, map.clone())?;
    Ok(AttributeSplit {
        consistent_attributes: good,
        consistent,
        inconsistent,
    })
}

/// `K | (G_K, M_S, I_σ)`: both `(id, K)` and `(σ, S)` are scale-measures of it,
/// and its extents are the join of `Ext(K)` and `σ⁻¹[Ext(S)]`.
pub fn apposition_measure(base: &FormalContext, scale: &FormalContext, map: &ObjectMap) -> Result<FormalContext> {
    apposition(base, &sigma_context(base, scale, map)?)
}
