//! Small contexts shipped with the crate.
//!
//! * `living_beings`: the "Living Beings and Water" context (8 objects, 9 attributes).
//! * `living_beings_scale`: a conjunctive scale of it on the same objects.
//! * `eq3` / `neq3`: `({1,2,3}, {1,2,3}, =)` and `({1,2,3}, {1,2,3}, ≠)`.
//! * `domestic_scale`: a 10-attribute BMF scale of the Domesticated Animals data (41 objects).

use crate::context::FormalContext;
use crate::cxt::parse_cxt;

pub const LIVING_BEINGS_CXT: &str = include_str!("../fixtures/living_beings.cxt");
pub const LIVING_BEINGS_SCALE_CXT: &str = include_str!("../fixtures/living_beings_scale.cxt");
pub const EQ3_CXT: &str = include_str!("../fixtures/eq3.cxt");
pub const NEQ3_CXT: &str = include_str!("../fixtures/neq3.cxt");
pub const DOMESTIC_SCALE_CXT: &str = include_str!("../fixtures/domestic_scale.cxt");

fn load(text: &str) -> FormalContext {
    parse_cxt(text).expect("bundled fixture parses")
}

pub fn living_beings() -> FormalContext {
    load(LIVING_BEINGS_CXT)
}

pub fn living_beings_scale() -> FormalContext {
    load(LIVING_BEINGS_SCALE_CXT)
}

/// `(K=, K≠)` over `{1,2,3}`.
pub fn eq_neq() -> (FormalContext, FormalContext) {
    (load(EQ3_CXT), load(NEQ3_CXT))
}

pub fn domestic_scale() -> FormalContext {
    load(DOMESTIC_SCALE_CXT)
}
