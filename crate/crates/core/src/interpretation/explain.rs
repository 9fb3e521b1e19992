use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::background::BackgroundKnowledge;
use super::subgroup::{subgroup_discovery_with, SearchParams, Selector, Subgroup};
use crate::error::{Error, Result};
use crate::fca::{BitSet, FormalContext};
use crate::scaling::SymbolicView;
use crate::view::Predictions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// target a feature, describe it by neuron attributes
    NeuronsForFeature,
    /// target a neuron attribute, describe it by features
    FeaturesForNeuron,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "neurons" | "neurons_for_feature" => Ok(Direction::NeuronsForFeature),
            "features" | "features_for_neuron" => Ok(Direction::FeaturesForNeuron),
            other => Err(Error::InvalidParameter(format!(
                "unknown direction `{other}` (expected neurons or features)"
            ))),
        }
    }
}

/// Population the rules are mined over.
#[derive(Debug, Clone, PartialEq)]
pub enum Level {
    Class,
    /// Objects, each carrying the features of the class it is labelled with.
    Object(Predictions),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Rule {
    /// e.g. `¬n_13 ∧ ¬n_14 → orange`
    pub description: String,
    pub selectors: Vec<String>,
    pub target: String,
    pub quality: f64,
    pub size: usize,
    pub positives: usize,
    pub share: f64,
}

impl Rule {
    fn new(s: Subgroup, target: &str) -> Self {
        Rule {
            description: format!("{} → {target}", s.description()),
            selectors: s.selectors.iter().map(|x| x.to_string()).collect(),
            target: target.to_string(),
            quality: s.quality,
            size: s.size,
            positives: s.positives,
            share: s.share,
        }
    }
}

/// The context over classes (or objects) with attributes `N ∪ N̄ ∪ S_M`.
pub fn joined_context(sv: &SymbolicView, bk: &BackgroundKnowledge, level: &Level) -> Result<FormalContext> {
    sv.neuron_count()?;
    let classes = &sv.class_context;
    let features = bk.aligned_to(classes.objects())?;
    let neurons = classes.attribute_count();
    let width = neurons + features.attribute_count();
    let join = |neuron_row: &BitSet, class: usize| {
        let mut row = BitSet::empty(width);
        for j in neuron_row.iter() {
            row.insert(j);
        }
        for f in features.row(class).iter() {
            row.insert(neurons + f);
        }
        row
    };
    let attributes: Vec<String> = classes
        .attributes()
        .iter()
        .chain(features.attributes())
        .cloned()
        .collect();
    let (objects, rows) = match level {
        Level::Class => (
            classes.objects().to_vec(),
            (0..classes.object_count()).map(|c| join(classes.row(c), c)).collect(),
        ),
        Level::Object(labels) => {
            let objects = &sv.object_context;
            let rows = objects
                .objects()
                .iter()
                .enumerate()
                .map(|(g, id)| {
                    let label = labels.get(id).ok_or_else(|| Error::UnknownObject(id.clone()))?;
                    let c = classes
                        .object_index(label)
                        .map_err(|_| Error::UnknownClass(label.clone()))?;
                    Ok(join(objects.row(g), c))
                })
                .collect::<Result<Vec<_>>>()?;
            (objects.objects().to_vec(), rows)
        }
    };
    FormalContext::new(objects, attributes, rows)
}

/// Mines rules for one taxon.
///
/// For [`Direction::NeuronsForFeature`] the target is the feature `taxon`
/// and the selectors are the neuron attributes `N ∪ N̄`, each as a present
/// literal (`n̄` already is the negation of `n`). For
/// [`Direction::FeaturesForNeuron`] the target is the neuron attribute
/// `taxon` (barred names allowed) and the selectors are the features as
/// present and absent literals.
pub fn explain_taxon(
    sv: &SymbolicView,
    bk: &BackgroundKnowledge,
    taxon: &str,
    direction: Direction,
    params: &SearchParams,
    level: &Level,
) -> Result<Vec<Rule>> {
    let neuron_attrs = sv.class_context.attributes();
    let (pool, known) = match direction {
        Direction::NeuronsForFeature => (
            neuron_attrs.iter().map(Selector::present).collect::<Vec<_>>(),
            bk.features().iter().any(|f| f == taxon),
        ),
        Direction::FeaturesForNeuron => (
            [true, false]
                .iter()
                .flat_map(|&present| {
                    bk.features().iter().map(move |f| Selector {
                        attribute: f.clone(),
                        present,
                    })
                })
                .collect(),
            neuron_attrs.iter().any(|n| n == taxon),
        ),
    };
    if !known {
        return Err(match direction {
            Direction::NeuronsForFeature => Error::UnknownAttribute(taxon.to_string()),
            Direction::FeaturesForNeuron => Error::UnknownNeuron(taxon.to_string()),
        });
    }
    let data = joined_context(sv, bk, level)?;
    let target = data.attribute_index(taxon)?;
    if data.column(target).is_empty() {
        return Err(Error::EmptyTarget(taxon.to_string()));
    }
    let found = subgroup_discovery_with(&data, &Selector::present(taxon), &pool, params)?;
    Ok(found.into_iter().map(|s| Rule::new(s, taxon)).collect())
}
