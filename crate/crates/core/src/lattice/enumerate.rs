use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::bitset::{AttributeSet, ObjectSet};
use crate::context::FormalContext;
use crate::error::{Error, Result};
use crate::lattice::ClosureSystem;

/// Default upper bound on the number of concepts enumerated.
pub const DEFAULT_CAP: usize = 1_000_000;

struct Budget {
    used: AtomicUsize,
    cap: usize,
}

impl Budget {
    fn take(&self) -> Result<()> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.cap {
            Err(Error::Intractable { cap: self.cap })
        } else {
            Ok(())
        }
    }
}

/// All extents of `ctx`, by Close-by-One over the objects in index order.
///
/// Top-level branches are explored in parallel; the result is sorted into
/// canonical order so it does not depend on scheduling. Fails with
/// [`Error::Intractable`] once more than `cap` extents have been found.
pub fn extents(ctx: &FormalContext, cap: usize) -> Result<ClosureSystem> {
    let budget = Budget {
        used: AtomicUsize::new(0),
        cap,
    };
    let n = ctx.num_objects();
    let root_intent = ctx.all_attributes();
    let root = ctx.extent_of(&root_intent);
    budget.take()?;

    let branches: Vec<Vec<ObjectSet>> = (0..n)
        .into_par_iter()
        .filter(|&j| !root.contains(j))
        .map(|j| {
            let mut out = Vec::new();
            if let Some(child) = step(ctx, &root, &root_intent, j) {
                budget.take()?;
                out.push(child.0.clone());
                descend(ctx, child, j + 1, &budget, &mut out)?;
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut sets: Vec<ObjectSet> = Vec::with_capacity(branches.iter().map(Vec::len).sum::<usize>() + 1);
    sets.push(root);
    sets.extend(branches.into_iter().flatten());
    sets.par_sort_unstable();
    Ok(ClosureSystem::from_sorted_unchecked(n, sets))
}

/// Closure of `extent ∪ {j}` if it passes the canonicity test.
fn step(ctx: &FormalContext, extent: &ObjectSet, intent: &AttributeSet, j: usize) -> Option<(ObjectSet, AttributeSet)> {
    let new_intent = intent.intersection(ctx.row(j));
    let new_extent = ctx.extent_of(&new_intent);
    new_extent.agrees_below(extent, j).then_some((new_extent, new_intent))
}

fn descend(
    ctx: &FormalContext,
    start: (ObjectSet, AttributeSet),
    from: usize,
    budget: &Budget,
    out: &mut Vec<ObjectSet>,
) -> Result<()> {
    let n = ctx.num_objects();
    let mut stack = vec![(start.0, start.1, from)];
    while let Some((extent, intent, from)) = stack.pop() {
        for j in from..n {
            if extent.contains(j) {
                continue;
            }
            if let Some((e, i)) = step(ctx, &extent, &intent, j) {
                budget.take()?;
                out.push(e.clone());
                stack.push((e, i, j + 1));
            }
        }
    }
    Ok(())
}
