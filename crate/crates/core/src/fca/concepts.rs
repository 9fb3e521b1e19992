//! Formal concepts and their enumeration by Next Closure over intents.

use serde::Serialize;

use super::bitset::BitSet;
use super::context::FormalContext;
use crate::error::{Error, Result};

pub const DEFAULT_MAX_CONCEPTS: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    extent: BitSet,
    intent: BitSet,
}

impl FormalConcept {
    /// Checks `A' = B` and `B' = A`.
    pub fn new(ctx: &FormalContext, extent: BitSet, intent: BitSet) -> Result<Self> {
        if ctx.derive_objects(&extent)? != intent || ctx.derive_attributes(&intent)? != extent {
            return Err(Error::InvalidContext(format!(
                "({extent:?}, {intent:?}) is not a formal concept"
            )));
        }
        Ok(FormalConcept { extent, intent })
    }

    pub(crate) fn new_unchecked(extent: BitSet, intent: BitSet) -> Self {
        FormalConcept { extent, intent }
    }

    pub fn extent(&self) -> &BitSet {
        &self.extent
    }

    pub fn intent(&self) -> &BitSet {
        &self.intent
    }

    pub fn named(&self, ctx: &FormalContext) -> NamedConcept {
        NamedConcept {
            extent: self.extent.iter().map(|g| ctx.objects()[g].clone()).collect(),
            intent: self.intent.iter().map(|m| ctx.attributes()[m].clone()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NamedConcept {
    pub extent: Vec<String>,
    pub intent: Vec<String>,
}

/// Visits every concept once, in lectic order of intents. Stops with a
/// resource-limit error as soon as more than `max_concepts` would be visited.
pub fn for_each_concept(
    ctx: &FormalContext,
    max_concepts: usize,
    mut visit: impl FnMut(&BitSet, &BitSet),
) -> Result<usize> {
    let m = ctx.attribute_count();
    let mut extent = BitSet::full(ctx.object_count());
    let mut intent = ctx.intent_of(&extent);
    let mut count = 0usize;

    let mut emit = |extent: &BitSet, intent: &BitSet, count: &mut usize| -> Result<()> {
        if *count >= max_concepts {
            return Err(Error::ResourceLimit(format!(
                "more than {max_concepts} concepts"
            )));
        }
        *count += 1;
        visit(extent, intent);
        Ok(())
    };
    emit(&extent, &intent, &mut count)?;

    'next: loop {
        for i in (0..m).rev() {
            if intent.contains(i) {
                continue;
            }
            let mut prefix = intent.clone();
            prefix.truncate_below(i);
            let mut candidate = ctx.extent_of(&prefix);
            candidate.intersect_with(ctx.column(i));
            // Canonicity: the closure may not add any attribute below i.
            let canonical = (0..i)
                .filter(|&j| !prefix.contains(j))
                .all(|j| !candidate.is_subset(ctx.column(j)));
            if canonical {
                intent = ctx.intent_of(&candidate);
                extent = candidate;
                emit(&extent, &intent, &mut count)?;
                continue 'next;
            }
        }
        break;
    }
    Ok(count)
}

pub fn enumerate_concepts(ctx: &FormalContext, max_concepts: usize) -> Result<Vec<FormalConcept>> {
    let mut out = Vec::new();
    for_each_concept(ctx, max_concepts, |e, i| {
        out.push(FormalConcept::new_unchecked(e.clone(), i.clone()))
    })?;
    Ok(out)
}

pub fn count_concepts(ctx: &FormalContext, max_concepts: usize) -> Result<usize> {
    for_each_concept(ctx, max_concepts, |_, _| {})
}
