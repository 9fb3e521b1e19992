//! Concept lattice: cover relation, meet-irreducibles and object-centred queries.

use std::collections::HashMap;

use serde::Serialize;

use super::bitset::BitSet;
use super::concepts::{enumerate_concepts, FormalConcept};
use super::context::FormalContext;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct ConceptLattice {
    context: FormalContext,
    concepts: Vec<FormalConcept>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    by_extent: HashMap<BitSet, usize>,
}

impl ConceptLattice {
    pub fn from_context(ctx: &FormalContext, max_concepts: usize) -> Result<Self> {
        let concepts = enumerate_concepts(ctx, max_concepts)?;
        Self::build(ctx, concepts)
    }

    /// Computes the cover relation of a complete concept list. Upper
    /// neighbours are found by closing `A ∪ {g}` for each `g ∉ A` and keeping
    /// the minimal results.
    pub fn build(ctx: &FormalContext, concepts: Vec<FormalConcept>) -> Result<Self> {
        let by_extent: HashMap<BitSet, usize> = concepts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.extent().clone(), i))
            .collect();
        if by_extent.len() != concepts.len() {
            return Err(Error::InvalidContext("duplicate concepts".into()));
        }
        let mut upper = vec![Vec::new(); concepts.len()];
        let mut lower = vec![Vec::new(); concepts.len()];
        for (ci, c) in concepts.iter().enumerate() {
            let outside = c.extent().complement();
            let mut minimal = outside.clone();
            for g in outside.iter() {
                let intent = c.intent().intersection(ctx.row(g));
                let extent = ctx.extent_of(&intent);
                let mut extra = extent.difference(c.extent());
                extra.remove(g);
                if extra.intersection_count(&minimal) == 0 {
                    let ni = *by_extent.get(&extent).ok_or_else(|| {
                        Error::InvalidContext("concept list is incomplete".into())
                    })?;
                    if !upper[ci].contains(&ni) {
                        upper[ci].push(ni);
                    }
                } else {
                    minimal.remove(g);
                }
            }
            upper[ci].sort_unstable();
            for &u in &upper[ci] {
                lower[u].push(ci);
            }
        }
        Ok(ConceptLattice {
            context: ctx.clone(),
            concepts,
            upper,
            lower,
            by_extent,
        })
    }

    pub fn context(&self) -> &FormalContext {
        &self.context
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// All cover pairs `(lower, upper)`.
    pub fn cover_edges(&self) -> Vec<(usize, usize)> {
        self.upper
            .iter()
            .enumerate()
            .flat_map(|(i, ups)| ups.iter().map(move |&u| (i, u)))
            .collect()
    }

    pub fn index_of_extent(&self, extent: &BitSet) -> Option<usize> {
        self.by_extent.get(extent).copied()
    }

    pub fn top(&self) -> usize {
        self.index_of_extent(&BitSet::full(self.context.object_count()))
            .expect("top concept exists")
    }

    pub fn bottom(&self) -> usize {
        let extent = self
            .context
            .extent_of(&BitSet::full(self.context.attribute_count()));
        self.index_of_extent(&extent).expect("bottom concept exists")
    }

    /// Concepts with exactly one upper cover.
    pub fn meet_irreducibles(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.upper[i].len() == 1).collect()
    }

    /// Smallest concept whose extent contains object `g`.
    pub fn object_concept(&self, g: usize) -> usize {
        let intent = self.context.row(g);
        self.index_of_extent(&self.context.extent_of(intent))
            .expect("object concept exists")
    }

    /// Largest concept whose intent contains attribute `m`.
    pub fn attribute_concept(&self, m: usize) -> usize {
        self.index_of_extent(self.context.column(m))
            .expect("attribute concept exists")
    }

    pub fn concepts_containing(&self, object: &str) -> Result<Vec<usize>> {
        let g = self.context.object_index(object)?;
        Ok((0..self.len())
            .filter(|&i| self.concepts[i].extent().contains(g))
            .collect())
    }

    pub fn shared_concept_counts(&self, objects: &[String]) -> Result<SharedConcepts> {
        let idx: Vec<usize> = objects
            .iter()
            .map(|o| self.context.object_index(o))
            .collect::<Result<_>>()?;
        let k = idx.len();
        let mut counts = vec![vec![0usize; k]; k];
        for c in &self.concepts {
            let inside: Vec<usize> = (0..k).filter(|&a| c.extent().contains(idx[a])).collect();
            for &a in &inside {
                for &b in &inside {
                    counts[a][b] += 1;
                }
            }
        }
        let fractions = (0..k)
            .map(|a| {
                (0..k)
                    .map(|b| counts[a][b] as f64 / counts[a][a] as f64)
                    .collect()
            })
            .collect();
        Ok(SharedConcepts {
            objects: objects.to_vec(),
            counts,
            fractions,
        })
    }
}

/// Pairwise counts of concepts whose extent contains both objects.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharedConcepts {
    pub objects: Vec<String>,
    pub counts: Vec<Vec<usize>>,
    /// `counts[a][b] / counts[a][a]`
    pub fractions: Vec<Vec<f64>>,
}

impl SharedConcepts {
    pub fn totals(&self) -> Vec<usize> {
        (0..self.objects.len()).map(|a| self.counts[a][a]).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("object");
        for o in &self.objects {
            out.push(',');
            out.push_str(o);
        }
        out.push('\n');
        for (a, o) in self.objects.iter().enumerate() {
            out.push_str(o);
            for c in &self.counts[a] {
                out.push_str(&format!(",{c}"));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fca::concepts::DEFAULT_MAX_CONCEPTS;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ctx(table: &[&[u8]]) -> FormalContext {
        let m = table.first().map(|r| r.len()).unwrap_or(0);
        let rows: Vec<Vec<bool>> = table.iter().map(|r| r.iter().map(|&b| b == 1).collect()).collect();
        FormalContext::from_bools(&rows, m).unwrap()
    }

    fn lattice(c: &FormalContext) -> ConceptLattice {
        ConceptLattice::from_context(c, DEFAULT_MAX_CONCEPTS).unwrap()
    }

    fn random_ctx(rng: &mut ChaCha8Rng) -> FormalContext {
        let g = rng.gen_range(1..=7);
        let m = rng.gen_range(1..=7);
        let d = rng.gen_range(0.2..0.8);
        let t: Vec<Vec<bool>> = (0..g).map(|_| (0..m).map(|_| rng.gen_bool(d)).collect()).collect();
        FormalContext::from_bools(&t, m).unwrap()
    }

    #[test]
    fn two_concept_chain() {
        let l = lattice(&ctx(&[&[0, 0], &[0, 0]]));
        assert_eq!(l.len(), 2);
        assert_eq!(l.cover_edges(), vec![(l.bottom(), l.top())]);
    }

    #[test]
    fn antichain_covers_only_top_and_bottom() {
        // identity context: three incomparable atoms between top and bottom
        let l = lattice(&ctx(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]));
        assert_eq!(l.len(), 5);
        let (top, bottom) = (l.top(), l.bottom());
        for (lo, up) in l.cover_edges() {
            assert!(lo == bottom || up == top);
            assert!(!(lo == bottom && up == top));
        }
        assert_eq!(l.cover_edges().len(), 6);
    }

    #[test]
    fn covers_equal_transitive_reduction() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let l = lattice(&random_ctx(&mut rng));
            let n = l.len();
            let ext = |i: usize| l.concepts()[i].extent();
            let lt = |a: usize, b: usize| a != b && ext(a).is_subset(ext(b));
            let mut expected = Vec::new();
            for a in 0..n {
                for b in 0..n {
                    if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                        expected.push((a, b));
                    }
                }
            }
            let mut got = l.cover_edges();
            got.sort_unstable();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn chain_meet_irreducibles() {
        // staircase context: intents nested, lattice is a chain of k + 1 concepts
        let k = 4;
        let rows: Vec<Vec<bool>> = (0..k).map(|i| (0..k).map(|j| j < i).collect()).collect();
        let l = lattice(&FormalContext::from_bools(&rows, k).unwrap());
        assert_eq!(l.len(), k + 1);
        let mi = l.meet_irreducibles();
        assert_eq!(mi.len(), k);
        assert!(!mi.contains(&l.top()));
    }

    #[test]
    fn contranominal_three_has_three_meet_irreducibles() {
        let c = ctx(&[&[0, 1, 1], &[1, 0, 1], &[1, 1, 0]]);
        let l = lattice(&c);
        assert_eq!(l.len(), 8);
        // definition-level: extent is not the intersection of any family of other extents
        let n = l.len();
        let mut oracle = Vec::new();
        for i in 0..n {
            let target = l.concepts()[i].extent();
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            let representable = (0u32..(1 << others.len())).any(|mask| {
                let mut acc = BitSet::full(3);
                for (k, &j) in others.iter().enumerate() {
                    if mask >> k & 1 == 1 {
                        acc.intersect_with(l.concepts()[j].extent());
                    }
                }
                &acc == target
            });
            if !representable {
                oracle.push(i);
            }
        }
        assert_eq!(oracle.len(), 3);
        assert_eq!(l.meet_irreducibles(), oracle);
    }

    #[test]
    fn concepts_containing_full_incidence() {
        let l = lattice(&ctx(&[&[1, 1], &[1, 1]]));
        assert_eq!(l.concepts_containing("g0").unwrap(), vec![0]);
        assert!(matches!(l.concepts_containing("nope"), Err(Error::UnknownObject(_))));
    }

    #[test]
    fn concepts_containing_matches_filter() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..30 {
            let c = random_ctx(&mut rng);
            let l = lattice(&c);
            for (g, name) in c.objects().iter().enumerate() {
                let expected: Vec<usize> = l
                    .concepts()
                    .iter()
                    .enumerate()
                    .filter(|(_, k)| {
                        // g is in the extent iff the intent is a subset of g's row
                        k.intent().is_subset(c.row(g))
                    })
                    .map(|(i, _)| i)
                    .collect();
                assert_eq!(l.concepts_containing(name).unwrap(), expected);
            }
        }
    }

    #[test]
    fn empty_row_object_only_in_top_region() {
        let c = ctx(&[&[0, 0], &[1, 0], &[0, 1]]);
        let l = lattice(&c);
        let found = l.concepts_containing("g0").unwrap();
        assert_eq!(found, vec![l.top()]);
    }

    #[test]
    fn shared_counts() {
        let c = ctx(&[&[1, 0, 1], &[1, 0, 1], &[0, 1, 1]]);
        let l = lattice(&c);
        let s = l.shared_concept_counts(&["g0".into()]).unwrap();
        assert_eq!(s.counts, vec![vec![l.concepts_containing("g0").unwrap().len()]]);
        let s = l.shared_concept_counts(&["g0".into(), "g1".into()]).unwrap();
        assert_eq!(s.counts[0][1], s.counts[0][0]);
        assert_eq!(s.fractions[0][1], 1.0);
    }

    #[test]
    fn shared_counts_match_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..30 {
            let c = random_ctx(&mut rng);
            let l = lattice(&c);
            let names = c.objects().to_vec();
            let s = l.shared_concept_counts(&names).unwrap();
            for a in 0..names.len() {
                for b in 0..names.len() {
                    let expected = l
                        .concepts()
                        .iter()
                        .filter(|k| k.extent().contains(a) && k.extent().contains(b))
                        .count();
                    assert_eq!(s.counts[a][b], expected);
                    assert_eq!(s.counts[a][b], s.counts[b][a]);
                    assert!(s.counts[a][b] <= s.counts[a][a]);
                }
            }
        }
    }
}
