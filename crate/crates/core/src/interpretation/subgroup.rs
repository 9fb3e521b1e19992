//! Beam search for conjunctive subgroups ranked by weighted relative accuracy.
//!
//! `WRAcc(s) = (n_s / N) (p_s − p_0)`, which equals `(pos_s N − n_s P) / N²`
//! for a subgroup of `n_s` objects with `pos_s` target hits out of a
//! population of `N` with `P` hits. Candidates are ranked on the integer
//! numerator, so rankings carry no rounding.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fca::{BitSet, FormalContext};
use crate::scaling::BAR;

/// An attribute literal: present, or absent (rendered with a leading `¬`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Selector {
    pub attribute: String,
    pub present: bool,
}

impl Selector {
    pub fn present(attribute: impl Into<String>) -> Self {
        Selector {
            attribute: attribute.into(),
            present: true,
        }
    }

    pub fn absent(attribute: impl Into<String>) -> Self {
        Selector {
            attribute: attribute.into(),
            present: false,
        }
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.present {
            f.write_str(&self.attribute)
        } else {
            write!(f, "{BAR}{}", self.attribute)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Subgroup {
    pub selectors: Vec<Selector>,
    pub quality: f64,
    pub size: usize,
    pub positives: usize,
    /// target share `p_s` inside the subgroup
    pub share: f64,
}

impl Subgroup {
    /// Selectors joined by `∧`; the empty description reads `⊤`.
    pub fn description(&self) -> String {
        if self.selectors.is_empty() {
            return "⊤".to_string();
        }
        self.selectors.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ∧ ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchParams {
    pub beam_width: usize,
    pub max_depth: usize,
    pub top_k: usize,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            beam_width: 20,
            max_depth: 3,
            top_k: 10,
        }
    }
}

impl SearchParams {
    fn validate(&self) -> Result<()> {
        if self.beam_width == 0 || self.max_depth == 0 || self.top_k == 0 {
            return Err(Error::InvalidParameter(format!(
                "beam width, depth and top-k must be at least 1, got {}, {}, {}",
                self.beam_width, self.max_depth, self.top_k
            )));
        }
        Ok(())
    }
}

/// Selector resolved against a context. Ordered by polarity (present first),
/// then attribute index; this is the order used for lexicographic tie-breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Lit {
    absent: bool,
    attr: usize,
}

struct Population<'a> {
    data: &'a FormalContext,
    target: BitSet,
    n: i128,
    p: i128,
}

impl<'a> Population<'a> {
    fn new(data: &'a FormalContext, target: &Selector) -> Result<Self> {
        if data.object_count() == 0 {
            return Err(Error::InvalidParameter("subgroup discovery on an empty context".into()));
        }
        let target = extent(data, resolve(data, target)?);
        Ok(Population {
            data,
            n: data.object_count() as i128,
            p: target.count() as i128,
            target,
        })
    }

    fn score(&self, lits: Vec<Lit>, ext: &BitSet) -> Scored {
        let size = ext.count();
        let positives = ext.intersection_count(&self.target);
        Scored {
            numerator: positives as i128 * self.n - size as i128 * self.p,
            lits,
            size,
            positives,
        }
    }

    fn finish(&self, s: Scored) -> Subgroup {
        Subgroup {
            selectors: s
                .lits
                .iter()
                .map(|l| Selector {
                    attribute: self.data.attributes()[l.attr].clone(),
                    present: !l.absent,
                })
                .collect(),
            quality: s.numerator as f64 / (self.n * self.n) as f64,
            size: s.size,
            positives: s.positives,
            share: if s.size == 0 {
                0.0
            } else {
                s.positives as f64 / s.size as f64
            },
        }
    }
}

#[derive(Debug, Clone)]
struct Scored {
    numerator: i128,
    /// sorted
    lits: Vec<Lit>,
    size: usize,
    positives: usize,
}

/// Best first: higher quality, then shorter, then lexicographically smaller.
fn rank(a: &Scored, b: &Scored) -> Ordering {
    b.numerator
        .cmp(&a.numerator)
        .then(a.lits.len().cmp(&b.lits.len()))
        .then_with(|| a.lits.cmp(&b.lits))
}

fn resolve(data: &FormalContext, s: &Selector) -> Result<Lit> {
    let attr = data
        .attribute_index(&s.attribute)
        .map_err(|_| Error::UnknownAttribute(s.attribute.clone()))?;
    Ok(Lit {
        absent: !s.present,
        attr,
    })
}

fn extent(data: &FormalContext, lit: Lit) -> BitSet {
    let col = data.column(lit.attr);
    if lit.absent {
        col.complement()
    } else {
        col.clone()
    }
}

/// Quality and coverage of one conjunction; the empty conjunction is the
/// whole population and has quality 0.
pub fn evaluate(data: &FormalContext, target: &Selector, selectors: &[Selector]) -> Result<Subgroup> {
    let pop = Population::new(data, target)?;
    let mut lits = selectors.iter().map(|s| resolve(data, s)).collect::<Result<Vec<_>>>()?;
    lits.sort();
    lits.dedup();
    let mut ext = BitSet::full(data.object_count());
    for &l in &lits {
        ext.intersect_with(&extent(data, l));
    }
    Ok(pop.finish(pop.score(lits, &ext)))
}

/// Every attribute other than the target's, as a present and an absent literal.
pub fn default_selectors(data: &FormalContext, target: &Selector) -> Vec<Selector> {
    let mut out = Vec::new();
    for present in [true, false] {
        for a in data.attributes() {
            if *a != target.attribute {
                out.push(Selector {
                    attribute: a.clone(),
                    present,
                });
            }
        }
    }
    out
}

/// Beam search over all selectors except those on the target attribute.
pub fn subgroup_discovery(data: &FormalContext, target: &Selector, params: &SearchParams) -> Result<Vec<Subgroup>> {
    subgroup_discovery_with(data, target, &default_selectors(data, target), params)
}

/// Beam search over conjunctions drawn from `pool`.
///
/// Level `d` refines every description kept at level `d − 1` by one selector
/// on an attribute it does not mention yet. Empty subgroups are discarded,
/// the best `beam_width` refinements form the next beam, and the best
/// `top_k` descriptions over all levels are returned.
pub fn subgroup_discovery_with(
    data: &FormalContext,
    target: &Selector,
    pool: &[Selector],
    params: &SearchParams,
) -> Result<Vec<Subgroup>> {
    params.validate()?;
    let pop = Population::new(data, target)?;
    let mut lits = pool.iter().map(|s| resolve(data, s)).collect::<Result<Vec<_>>>()?;
    lits.sort();
    lits.dedup();
    let extents: Vec<BitSet> = lits.iter().map(|&l| extent(data, l)).collect();

    let mut beam: Vec<(Vec<Lit>, BitSet)> = vec![(Vec::new(), BitSet::full(data.object_count()))];
    let mut best: Vec<Scored> = Vec::new();
    for _ in 0..params.max_depth {
        let mut seen = HashSet::new();
        let mut refinements = Vec::new();
        for (desc, ext) in &beam {
            for (i, &l) in lits.iter().enumerate() {
                if desc.iter().any(|d| d.attr == l.attr) {
                    continue;
                }
                let mut next = desc.clone();
                next.push(l);
                next.sort();
                if seen.insert(next.clone()) {
                    refinements.push((next, ext, i));
                }
            }
        }
        let mut level: Vec<(Scored, BitSet)> = refinements
            .into_par_iter()
            .map(|(desc, ext, i)| {
                let e = ext.intersection(&extents[i]);
                (pop.score(desc, &e), e)
            })
            .filter(|(s, _)| s.size > 0)
            .collect();
        if level.is_empty() {
            break;
        }
        level.sort_by(|a, b| rank(&a.0, &b.0));
        level.truncate(params.beam_width);
        best.extend(level.iter().map(|(s, _)| s.clone()));
        best.sort_by(rank);
        best.truncate(params.top_k);
        beam = level.into_iter().map(|(s, e)| (s.lits, e)).collect();
    }
    Ok(best.into_iter().map(|s| pop.finish(s)).collect())
}
