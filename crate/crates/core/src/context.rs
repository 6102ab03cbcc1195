//! Formal contexts, the two derivation operators and context constructions.

use std::collections::HashSet;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::error::{Error, Result};

/// A formal context `(G, M, I)`.
///
/// The incidence is kept twice: one packed row per object and one packed
/// column per attribute, so both derivations are word-wise intersections.
/// Values are immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<AttributeSet>,
    cols: Vec<ObjectSet>,
}

fn check_unique(names: &[String], what: &str) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidContext(format!("duplicate {what} name '{n}'")));
        }
    }
    Ok(())
}

impl FormalContext {
    /// Builds a context from object rows. Requires at least one object and
    /// unique names; zero attributes are allowed.
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: Vec<AttributeSet>) -> Result<Self> {
        if objects.is_empty() {
            return Err(Error::InvalidContext("object set must be non-empty".into()));
        }
        check_unique(&objects, "object")?;
        check_unique(&attributes, "attribute")?;
        if rows.len() != objects.len() {
            return Err(Error::dims(objects.len(), rows.len()));
        }
        if let Some(bad) = rows.iter().find(|r| r.width() != attributes.len()) {
            return Err(Error::dims(attributes.len(), bad.width()));
        }
        let mut cols = vec![ObjectSet::empty(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.iter() {
                cols[m].insert(g);
            }
        }
        Ok(Self {
            objects,
            attributes,
            rows,
            cols,
        })
    }

    /// Builds a context from a dense boolean table (`table[g][m]`).
    pub fn from_table<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        table: &[Vec<bool>],
    ) -> Result<Self> {
        let objects: Vec<String> = objects.into_iter().map(Into::into).collect();
        let attributes: Vec<String> = attributes.into_iter().map(Into::into).collect();
        let mut rows = Vec::with_capacity(table.len());
        for r in table {
            if r.len() != attributes.len() {
                return Err(Error::dims(attributes.len(), r.len()));
            }
            rows.push(AttributeSet::from_bools(r));
        }
        Self::new(objects, attributes, rows)
    }

    /// Builds a context from rows written as strings over `{'X', '.'}`.
    pub fn from_rows<S: Into<String>, T: Into<String>>(
        objects: impl IntoIterator<Item = S>,
        attributes: impl IntoIterator<Item = T>,
        rows: &[&str],
    ) -> Result<Self> {
        let table: Vec<Vec<bool>> = rows
            .iter()
            .map(|r| r.chars().map(|c| c == 'X' || c == 'x').collect())
            .collect();
        Self::from_table(objects, attributes, &table)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_attributes(&self) -> usize {
        self.attributes.len()
    }

    /// Row of object `g`, i.e. `{g}'`.
    pub fn row(&self, g: usize) -> &AttributeSet {
        &self.rows[g]
    }

    /// Column of attribute `m`, i.e. `{m}'`.
    pub fn column(&self, m: usize) -> &ObjectSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[AttributeSet] {
        &self.rows
    }

    pub fn columns(&self) -> &[ObjectSet] {
        &self.cols
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    /// Number of incident pairs `|I|`.
    pub fn incidences(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// `|I| / (|G|·|M|)`; zero when there are no attributes.
    pub fn density(&self) -> f64 {
        let cells = self.num_objects() * self.num_attributes();
        if cells == 0 {
            0.0
        } else {
            self.incidences() as f64 / cells as f64
        }
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a == name)
    }

    pub fn all_objects(&self) -> ObjectSet {
        ObjectSet::full(self.num_objects())
    }

    pub fn no_objects(&self) -> ObjectSet {
        ObjectSet::empty(self.num_objects())
    }

    pub fn all_attributes(&self) -> AttributeSet {
        AttributeSet::full(self.num_attributes())
    }

    pub fn no_attributes(&self) -> AttributeSet {
        AttributeSet::empty(self.num_attributes())
    }

    /// Object set from names. Unknown names are an error.
    pub fn object_set<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<ObjectSet> {
        let mut set = self.no_objects();
        for n in names {
            let g = self
                .object_index(n)
                .ok_or_else(|| Error::InvalidContext(format!("unknown object '{n}'")))?;
            set.insert(g);
        }
        Ok(set)
    }

    /// Attribute set from names. Unknown names are an error.
    pub fn attribute_set<'a>(&self, names: impl IntoIterator<Item = &'a str>) -> Result<AttributeSet> {
        let mut set = self.no_attributes();
        for n in names {
            let m = self
                .attribute_index(n)
                .ok_or_else(|| Error::InvalidContext(format!("unknown attribute '{n}'")))?;
            set.insert(m);
        }
        Ok(set)
    }

    pub fn object_names(&self, set: &ObjectSet) -> Vec<&str> {
        set.iter().map(|g| self.objects[g].as_str()).collect()
    }

    pub fn attribute_names(&self, set: &AttributeSet) -> Vec<&str> {
        set.iter().map(|m| self.attributes[m].as_str()).collect()
    }

    /// `A'`: the attributes shared by every object in `A`. `∅' = M`.
    pub fn derive_objects(&self, objects: &ObjectSet) -> Result<AttributeSet> {
        if objects.width() != self.num_objects() {
            return Err(Error::dims(self.num_objects(), objects.width()));
        }
        Ok(self.intent_of(objects))
    }

    /// `B'`: the objects having every attribute in `B`. `∅' = G`.
    pub fn derive_attributes(&self, attributes: &AttributeSet) -> Result<ObjectSet> {
        if attributes.width() != self.num_attributes() {
            return Err(Error::dims(self.num_attributes(), attributes.width()));
        }
        Ok(self.extent_of(attributes))
    }

    /// `A''`.
    pub fn closure_objects(&self, objects: &ObjectSet) -> Result<ObjectSet> {
        let intent = self.derive_objects(objects)?;
        Ok(self.extent_of(&intent))
    }

    /// `B''`.
    pub fn closure_attributes(&self, attributes: &AttributeSet) -> Result<AttributeSet> {
        let extent = self.derive_attributes(attributes)?;
        Ok(self.intent_of(&extent))
    }

    /// True if `A = A''`.
    pub fn is_extent(&self, objects: &ObjectSet) -> Result<bool> {
        Ok(&self.closure_objects(objects)? == objects)
    }

    // Unchecked derivations for internal hot loops; widths are guaranteed by callers.
    pub(crate) fn intent_of(&self, objects: &ObjectSet) -> AttributeSet {
        let mut out = self.all_attributes();
        for g in objects.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    pub(crate) fn extent_of(&self, attributes: &AttributeSet) -> ObjectSet {
        let mut out = self.all_objects();
        for m in attributes.iter() {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// Induced sub-context on `H × N`, keeping the original order.
    pub fn induced_subcontext(&self, objects: &ObjectSet, attributes: &AttributeSet) -> Result<FormalContext> {
        if objects.width() != self.num_objects() {
            return Err(Error::dims(self.num_objects(), objects.width()));
        }
        if attributes.width() != self.num_attributes() {
            return Err(Error::dims(self.num_attributes(), attributes.width()));
        }
        let keep: Vec<usize> = attributes.iter().collect();
        let names = objects.iter().map(|g| self.objects[g].clone()).collect();
        let attrs = keep.iter().map(|&m| self.attributes[m].clone()).collect();
        let rows = objects
            .iter()
            .map(|g| AttributeSet::from_indices(keep.len(), keep.iter().enumerate().filter(|(_, &m)| self.incident(g, m)).map(|(j, _)| j)))
            .collect();
        FormalContext::new(names, attrs, rows)
    }

    /// Restriction to a subset of attributes, keeping every object.
    pub fn restrict_attributes(&self, attributes: &AttributeSet) -> Result<FormalContext> {
        self.induced_subcontext(&self.all_objects(), attributes)
    }

    /// Copy of this context with the object names replaced.
    pub fn with_object_names(&self, objects: Vec<String>) -> Result<FormalContext> {
        if objects.len() != self.num_objects() {
            return Err(Error::dims(self.num_objects(), objects.len()));
        }
        FormalContext::new(objects, self.attributes.clone(), self.rows.clone())
    }
}

/// Apposition `K₁ | K₂` of two contexts on the same object list.
///
/// Attribute names that occur in both contexts are made disjoint by suffixing
/// `#1` (left) and `#2` (right).
pub fn apposition(left: &FormalContext, right: &FormalContext) -> Result<FormalContext> {
    if left.objects != right.objects {
        return Err(Error::ObjectMismatch(
            "apposition requires identical object lists in the same order".into(),
        ));
    }
    let left_names: HashSet<&str> = left.attributes.iter().map(String::as_str).collect();
    let right_names: HashSet<&str> = right.attributes.iter().map(String::as_str).collect();
    let mut attributes = Vec::with_capacity(left.num_attributes() + right.num_attributes());
    for a in &left.attributes {
        attributes.push(if right_names.contains(a.as_str()) { format!("{a}#1") } else { a.clone() });
    }
    for a in &right.attributes {
        attributes.push(if left_names.contains(a.as_str()) { format!("{a}#2") } else { a.clone() });
    }
    let width = attributes.len();
    let offset = left.num_attributes();
    let rows = left
        .rows
        .iter()
        .zip(&right.rows)
        .map(|(l, r)| AttributeSet::from_indices(width, l.iter().chain(r.iter().map(|m| m + offset))))
        .collect();
    FormalContext::new(left.objects.clone(), attributes, rows)
}

/// A total map `σ: G_K → G_S`, stored as target indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ObjectMap {
    targets: Vec<usize>,
    target_len: usize,
}

impl ObjectMap {
    pub fn new(targets: Vec<usize>, target_len: usize) -> Result<Self> {
        if let Some(&bad) = targets.iter().find(|&&t| t >= target_len) {
            return Err(Error::InvalidMap(format!("image index {bad} out of range for {target_len} target objects")));
        }
        Ok(Self { targets, target_len })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            targets: (0..n).collect(),
            target_len: n,
        }
    }

    /// Identity by object name: every source object maps to the target
    /// object with the same name.
    pub fn by_name(source: &FormalContext, target: &FormalContext) -> Result<Self> {
        let index: std::collections::HashMap<&str, usize> =
            target.objects().iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let targets = source
            .objects()
            .iter()
            .map(|n| {
                index
                    .get(n.as_str())
                    .copied()
                    .ok_or_else(|| Error::ObjectMismatch(format!("object '{n}' has no counterpart in the scale")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(targets, target.num_objects())
    }

    /// Map given as (source name → target name) pairs; every source object must be covered.
    pub fn from_names<'a>(
        source: &FormalContext,
        target: &FormalContext,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let mut targets = vec![None; source.num_objects()];
        for (from, to) in pairs {
            let g = source
                .object_index(from)
                .ok_or_else(|| Error::InvalidMap(format!("unknown source object '{from}'")))?;
            let h = target
                .object_index(to)
                .ok_or_else(|| Error::InvalidMap(format!("unknown target object '{to}'")))?;
            targets[g] = Some(h);
        }
        let targets = targets
            .into_iter()
            .enumerate()
            .map(|(g, t)| t.ok_or_else(|| Error::InvalidMap(format!("object '{}' is not mapped", source.objects()[g]))))
            .collect::<Result<Vec<_>>>()?;
        Self::new(targets, target.num_objects())
    }

    pub fn source_len(&self) -> usize {
        self.targets.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn image(&self, g: usize) -> usize {
        self.targets[g]
    }

    pub fn is_identity(&self) -> bool {
        self.targets.len() == self.target_len && self.targets.iter().enumerate().all(|(i, &t)| i == t)
    }

    /// `σ⁻¹(A)`.
    pub fn preimage(&self, set: &ObjectSet) -> ObjectSet {
        ObjectSet::from_indices(
            self.targets.len(),
            self.targets.iter().enumerate().filter(|(_, &t)| set.contains(t)).map(|(g, _)| g),
        )
    }

    /// Checks that this map goes from `source`'s objects to `target`'s objects.
    pub fn check(&self, source: &FormalContext, target: &FormalContext) -> Result<()> {
        if self.targets.len() != source.num_objects() {
            return Err(Error::InvalidMap(format!(
                "map has {} sources, context has {} objects",
                self.targets.len(),
                source.num_objects()
            )));
        }
        if self.target_len != target.num_objects() {
            return Err(Error::InvalidMap(format!(
                "map targets {} objects, scale has {}",
                self.target_len,
                target.num_objects()
            )));
        }
        Ok(())
    }
}

/// The context `(G_K, M_S, I_σ)` with `(g, m) ∈ I_σ ⇔ (σ(g), m) ∈ I_S`.
///
/// Its attribute derivations are exactly the preimages of the scale's
/// attribute derivations, so its extents are `σ⁻¹[Ext(S)]`.
pub fn sigma_context(base: &FormalContext, scale: &FormalContext, map: &ObjectMap) -> Result<FormalContext> {
    map.check(base, scale)?;
    let rows = (0..base.num_objects()).map(|g| scale.row(map.image(g)).clone()).collect();
    FormalContext::new(base.objects.clone(), scale.attributes.clone(), rows)
}
