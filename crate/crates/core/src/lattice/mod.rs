//! Closure systems, concept enumeration, covers and DOT export.

mod closure;
mod concepts;
mod dot;
mod enumerate;

pub use closure::{intersection_close, meet_irreducibles, ClosureSystem};
pub use concepts::{Concept, ConceptLattice};
pub use dot::{export_dot, Labeling};
pub use enumerate::{extents, DEFAULT_CAP};

use crate::context::FormalContext;
use crate::error::Result;

/// Shorthand for [`ConceptLattice::of`].
pub fn concepts(ctx: &FormalContext, cap: usize) -> Result<ConceptLattice> {
    ConceptLattice::of(ctx, cap)
}
