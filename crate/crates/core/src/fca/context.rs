use std::collections::HashSet;

use super::bitset::BitSet;
use crate::error::{Error, Result};

/// Objects, attributes and an incidence relation stored as row and column bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    objects: Vec<String>,
    attributes: Vec<String>,
    rows: Vec<BitSet>,
    cols: Vec<BitSet>,
}

impl FormalContext {
    pub fn new(objects: Vec<String>, attributes: Vec<String>, rows: Vec<BitSet>) -> Result<Self> {
        unique("object", &objects)?;
        unique("attribute", &attributes)?;
        if rows.len() != objects.len() {
            return Err(Error::InvalidContext(format!(
                "{} incidence rows for {} objects",
                rows.len(),
                objects.len()
            )));
        }
        if let Some(r) = rows.iter().find(|r| r.len() != attributes.len()) {
            return Err(Error::InvalidContext(format!(
                "incidence row of width {} for {} attributes",
                r.len(),
                attributes.len()
            )));
        }
        let mut cols = vec![BitSet::empty(objects.len()); attributes.len()];
        for (g, row) in rows.iter().enumerate() {
            for m in row.iter() {
                cols[m].insert(g);
            }
        }
        Ok(FormalContext {
            objects,
            attributes,
            rows,
            cols,
        })
    }

    /// Builds a context from a boolean table; names default to `g{i}` / `m{j}`.
    pub fn from_bools(table: &[Vec<bool>], attribute_count: usize) -> Result<Self> {
        let objects = (0..table.len()).map(|i| format!("g{i}")).collect();
        let attributes = (0..attribute_count).map(|j| format!("m{j}")).collect();
        let rows = table
            .iter()
            .map(|r| {
                BitSet::from_indices(
                    attribute_count,
                    r.iter().enumerate().filter(|(_, &b)| b).map(|(j, _)| j),
                )
            })
            .collect();
        Self::new(objects, attributes, rows)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn attribute_count(&self) -> usize {
        self.attributes.len()
    }

    /// Attribute set of object `g`.
    pub fn row(&self, g: usize) -> &BitSet {
        &self.rows[g]
    }

    /// Object set of attribute `m`.
    pub fn column(&self, m: usize) -> &BitSet {
        &self.cols[m]
    }

    pub fn rows(&self) -> &[BitSet] {
        &self.rows
    }

    pub fn incident(&self, g: usize, m: usize) -> bool {
        self.rows[g].contains(m)
    }

    pub fn object_index(&self, name: &str) -> Result<usize> {
        self.objects
            .iter()
            .position(|o| o == name)
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// `A ↦ A'`: attributes shared by every object in `objects`.
    pub fn derive_objects(&self, objects: &BitSet) -> Result<BitSet> {
        if objects.len() != self.objects.len() {
            return Err(Error::OutOfRange {
                what: "object set",
                index: objects.len(),
                len: self.objects.len(),
            });
        }
        Ok(self.intent_of(objects))
    }

    /// `B ↦ B'`: objects having every attribute in `attributes`.
    pub fn derive_attributes(&self, attributes: &BitSet) -> Result<BitSet> {
        if attributes.len() != self.attributes.len() {
            return Err(Error::OutOfRange {
                what: "attribute set",
                index: attributes.len(),
                len: self.attributes.len(),
            });
        }
        Ok(self.extent_of(attributes))
    }

    pub(crate) fn intent_of(&self, objects: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.attributes.len());
        for g in objects.iter() {
            out.intersect_with(&self.rows[g]);
        }
        out
    }

    pub(crate) fn extent_of(&self, attributes: &BitSet) -> BitSet {
        let mut out = BitSet::full(self.objects.len());
        for m in attributes.iter() {
            out.intersect_with(&self.cols[m]);
        }
        out
    }

    /// `B ↦ B''`.
    pub fn closure(&self, attributes: &BitSet) -> Result<BitSet> {
        let extent = self.derive_attributes(attributes)?;
        Ok(self.intent_of(&extent))
    }

    /// `A ↦ A''`.
    pub fn object_closure(&self, objects: &BitSet) -> Result<BitSet> {
        let intent = self.derive_objects(objects)?;
        Ok(self.extent_of(&intent))
    }

    /// Context restricted to the given attribute columns, in the given order.
    pub fn select_attributes(&self, keep: &[usize]) -> Result<Self> {
        for &m in keep {
            if m >= self.attributes.len() {
                return Err(Error::OutOfRange {
                    what: "attribute",
                    index: m,
                    len: self.attributes.len(),
                });
            }
        }
        let attributes = keep.iter().map(|&m| self.attributes[m].clone()).collect();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                BitSet::from_indices(
                    keep.len(),
                    keep.iter().enumerate().filter(|(_, &m)| r.contains(m)).map(|(k, _)| k),
                )
            })
            .collect();
        Self::new(self.objects.clone(), attributes, rows)
    }

    /// Context with the given objects (rows), in the given order.
    pub fn select_objects(&self, keep: &[usize]) -> Result<Self> {
        let mut objects = Vec::with_capacity(keep.len());
        let mut rows = Vec::with_capacity(keep.len());
        for &g in keep {
            if g >= self.objects.len() {
                return Err(Error::OutOfRange {
                    what: "object",
                    index: g,
                    len: self.objects.len(),
                });
            }
            objects.push(self.objects[g].clone());
            rows.push(self.rows[g].clone());
        }
        Self::new(objects, self.attributes.clone(), rows)
    }
}

fn unique(what: &str, names: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(names.len());
    for n in names {
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidContext(format!("duplicate {what} name `{n}`")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_context(rng: &mut ChaCha8Rng, g: usize, m: usize, density: f64) -> FormalContext {
        let table: Vec<Vec<bool>> = (0..g)
            .map(|_| (0..m).map(|_| rng.gen_bool(density)).collect())
            .collect();
        FormalContext::from_bools(&table, m).unwrap()
    }

    fn random_subset(rng: &mut ChaCha8Rng, n: usize) -> BitSet {
        BitSet::from_indices(n, (0..n).filter(|_| rng.gen_bool(0.5)))
    }

    #[test]
    fn empty_set_derivations() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ctx = random_context(&mut rng, 4, 5, 0.5);
        assert_eq!(ctx.derive_objects(&BitSet::empty(4)).unwrap(), BitSet::full(5));
        assert_eq!(ctx.derive_attributes(&BitSet::empty(5)).unwrap(), BitSet::full(4));
    }

    #[test]
    fn singleton_derivations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let ctx = random_context(&mut rng, 4, 5, 0.5);
        for g in 0..4 {
            assert_eq!(&ctx.derive_objects(&BitSet::from_indices(4, [g])).unwrap(), ctx.row(g));
        }
        for m in 0..5 {
            assert_eq!(&ctx.derive_attributes(&BitSet::from_indices(5, [m])).unwrap(), ctx.column(m));
        }
    }

    #[test]
    fn derivations_match_quantifier_loops() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let ctx = random_context(&mut rng, 6, 6, 0.5);
            let a = random_subset(&mut rng, 6);
            let expected: Vec<usize> = (0..6)
                .filter(|&m| (0..6).all(|g| !a.contains(g) || ctx.incident(g, m)))
                .collect();
            assert_eq!(ctx.derive_objects(&a).unwrap().iter().collect::<Vec<_>>(), expected);
            let b = random_subset(&mut rng, 6);
            let expected: Vec<usize> = (0..6)
                .filter(|&g| (0..6).all(|m| !b.contains(m) || ctx.incident(g, m)))
                .collect();
            assert_eq!(ctx.derive_attributes(&b).unwrap().iter().collect::<Vec<_>>(), expected);
            let closed = ctx.closure(&b).unwrap();
            let twice = ctx.derive_objects(&ctx.derive_attributes(&b).unwrap()).unwrap();
            assert_eq!(closed, twice);
            assert!(b.is_subset(&closed));
            assert_eq!(ctx.closure(&closed).unwrap(), closed);
        }
    }

    #[test]
    fn top_is_closed() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ctx = random_context(&mut rng, 5, 7, 0.3);
        assert_eq!(ctx.closure(&BitSet::full(7)).unwrap(), BitSet::full(7));
    }

    #[test]
    fn size_mismatch_is_an_error() {
        let ctx = FormalContext::from_bools(&[vec![true, false]], 2).unwrap();
        assert!(matches!(ctx.derive_objects(&BitSet::empty(3)), Err(Error::OutOfRange { .. })));
        assert!(ctx.derive_attributes(&BitSet::empty(1)).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        let rows = vec![BitSet::empty(1), BitSet::empty(1)];
        assert!(FormalContext::new(vec!["a".into(), "a".into()], vec!["m".into()], rows).is_err());
    }

    #[test]
    fn attribute_selection() {
        let ctx = FormalContext::from_bools(&[vec![true, false, true]], 3).unwrap();
        let sub = ctx.select_attributes(&[2, 1]).unwrap();
        assert_eq!(sub.attributes(), &["m2".to_string(), "m1".to_string()]);
        assert!(sub.incident(0, 0));
        assert!(!sub.incident(0, 1));
    }
}
