use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::background::BackgroundKnowledge;
use crate::error::{Error, Result};
use crate::fca::{BitSet, FormalContext};
use crate::scaling::SymbolicView;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimilarityKind {
    Jaccard,
    Overlap,
}

impl FromStr for SimilarityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "jaccard" => Ok(SimilarityKind::Jaccard),
            "overlap" => Ok(SimilarityKind::Overlap),
            other => Err(Error::InvalidParameter(format!(
                "unknown similarity `{other}` (expected jaccard or overlap)"
            ))),
        }
    }
}

impl fmt::Display for SimilarityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityKind::Jaccard => "jaccard",
            SimilarityKind::Overlap => "overlap",
        })
    }
}

/// A thresholded set similarity; `A ∼ B` iff `score(A, B) ≥ θ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilaritySpec {
    pub kind: SimilarityKind,
    pub theta: f64,
}

impl Default for SimilaritySpec {
    fn default() -> Self {
        SimilaritySpec {
            kind: SimilarityKind::Jaccard,
            theta: 0.5,
        }
    }
}

impl SimilaritySpec {
    pub fn new(kind: SimilarityKind, theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::InvalidParameter(format!("theta must be in [0, 1], got {theta}")));
        }
        Ok(SimilaritySpec { kind, theta })
    }

    /// Symmetric score in `[0, 1]`; two empty sets score 1 so the relation stays reflexive.
    pub fn score(&self, a: &BitSet, b: &BitSet) -> f64 {
        let common = a.intersection_count(b);
        let (na, nb) = (a.count(), b.count());
        if na == 0 && nb == 0 {
            return 1.0;
        }
        let denom = match self.kind {
            SimilarityKind::Jaccard => na + nb - common,
            SimilarityKind::Overlap => na.min(nb),
        };
        if denom == 0 {
            0.0
        } else {
            common as f64 / denom as f64
        }
    }

    pub fn related(&self, a: &BitSet, b: &BitSet) -> bool {
        self.score(a, b) >= self.theta
    }
}

/// The context `(N, S_M, R)` relating each positive neuron attribute to the
/// features whose class extent is similar to the neuron's class extent.
pub fn symbolic_interpretation(
    sv: &SymbolicView,
    bk: &BackgroundKnowledge,
    sim: &SimilaritySpec,
) -> Result<FormalContext> {
    let h = sv.neuron_count()?;
    let classes = &sv.class_context;
    let features = bk.aligned_to(classes.objects())?;
    let m = features.attribute_count();
    let rows = (0..h)
        .map(|j| {
            let extent = classes.column(j);
            BitSet::from_indices(m, (0..m).filter(|&f| sim.related(extent, features.column(f))))
        })
        .collect();
    FormalContext::new(sv.neuron_names(), features.attributes().to_vec(), rows)
}

/// `{n}^R`: the features related to neuron `n`.
pub fn neuron_features(interp: &FormalContext, neuron: &str) -> Result<Vec<String>> {
    let n = interp
        .object_index(neuron)
        .map_err(|_| Error::UnknownNeuron(neuron.to_string()))?;
    let row = interp.derive_objects(&BitSet::from_indices(interp.object_count(), [n]))?;
    Ok(row.iter().map(|f| interp.attributes()[f].clone()).collect())
}
