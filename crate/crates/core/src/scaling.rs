//! Dichotomic scaling of a many-valued view into two formal contexts over
//! `N ∪ N̄`, plus the statistics used to judge a scaling.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fca::{BitSet, FormalContext};
use crate::matrix::Matrix;
use crate::view::{argmin_rows, cross_distances, ManyValuedView, Metric, Predictions};

/// Prefix marking the complement attribute `n̄` of a neuron `n`.
pub const BAR: &str = "¬";

pub fn barred(name: &str) -> String {
    format!("{BAR}{name}")
}

/// Cutoff for one matrix: a single value, or one value per neuron column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Cutoff {
    Global(f64),
    PerNeuron(Vec<f64>),
}

impl Cutoff {
    pub fn at(&self, column: usize) -> f64 {
        match self {
            Cutoff::Global(d) => *d,
            Cutoff::PerNeuron(v) => v[column],
        }
    }

    fn validate(&self, h: usize, what: &str) -> Result<()> {
        let ok = match self {
            Cutoff::Global(d) => d.is_finite(),
            Cutoff::PerNeuron(v) => v.len() == h && v.iter().all(|d| d.is_finite()),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{what} threshold must be finite with one value or {h} per-neuron values"
            )))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub delta_object: Cutoff,
    pub delta_class: Cutoff,
}

impl Thresholds {
    pub fn new(delta_object: f64, delta_class: f64) -> Self {
        Thresholds {
            delta_object: Cutoff::Global(delta_object),
            delta_class: Cutoff::Global(delta_class),
        }
    }

    pub fn zero() -> Self {
        Self::new(0.0, 0.0)
    }

    pub fn from_strategy(view: &ManyValuedView, strategy: ThresholdStrategy) -> Self {
        Thresholds {
            delta_object: strategy.cutoff(view.object_view()),
            delta_class: strategy.cutoff(view.class_view()),
        }
    }
}

impl Default for Thresholds {
    fn default() -> Self {
        Self::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdStrategy {
    Zero,
    Mean,
    Median,
    MedianPerNeuron,
}

impl ThresholdStrategy {
    pub fn cutoff(self, m: &Matrix) -> Cutoff {
        match self {
            ThresholdStrategy::Zero => Cutoff::Global(0.0),
            ThresholdStrategy::Mean => {
                let n = m.as_slice().len().max(1);
                Cutoff::Global(m.as_slice().iter().sum::<f64>() / n as f64)
            }
            ThresholdStrategy::Median => Cutoff::Global(median(m.as_slice().to_vec())),
            ThresholdStrategy::MedianPerNeuron => Cutoff::PerNeuron(
                (0..m.cols())
                    .map(|j| median(m.iter_rows().map(|r| r[j]).collect()))
                    .collect(),
            ),
        }
    }
}

impl FromStr for ThresholdStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(ThresholdStrategy::Zero),
            "mean" => Ok(ThresholdStrategy::Mean),
            "median" => Ok(ThresholdStrategy::Median),
            "median-per-neuron" => Ok(ThresholdStrategy::MedianPerNeuron),
            other => Err(Error::InvalidParameter(format!("unknown threshold strategy `{other}`"))),
        }
    }
}

impl fmt::Display for ThresholdStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdStrategy::Zero => "zero",
            ThresholdStrategy::Mean => "mean",
            ThresholdStrategy::Median => "median",
            ThresholdStrategy::MedianPerNeuron => "median-per-neuron",
        })
    }
}

fn median(mut values: Vec<f64>) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    }
}

/// Object and class contexts over `n_1..n_h, n̄_1..n̄_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicView {
    pub object_context: FormalContext,
    pub class_context: FormalContext,
}

impl SymbolicView {
    pub fn new(object_context: FormalContext, class_context: FormalContext) -> Result<Self> {
        if object_context.attributes() != class_context.attributes() {
            return Err(Error::Layout("object and class contexts have different attributes".into()));
        }
        let sv = SymbolicView {
            object_context,
            class_context,
        };
        sv.neuron_count()?;
        Ok(sv)
    }

    /// `h`, after checking the `N ∪ N̄` attribute layout.
    pub fn neuron_count(&self) -> Result<usize> {
        check_layout(&self.class_context)
    }

    pub fn neuron_names(&self) -> Vec<String> {
        let h = self.class_context.attribute_count() / 2;
        self.class_context.attributes()[..h].to_vec()
    }
}

pub(crate) fn check_layout(ctx: &FormalContext) -> Result<usize> {
    let attrs = ctx.attributes();
    if attrs.len() % 2 != 0 || attrs.is_empty() {
        return Err(Error::Layout(format!(
            "expected 2h attributes n_1..n_h, {BAR}n_1..{BAR}n_h, found {}",
            attrs.len()
        )));
    }
    let h = attrs.len() / 2;
    for j in 0..h {
        if attrs[h + j] != barred(&attrs[j]) {
            return Err(Error::Layout(format!(
                "attribute {} is `{}`, expected `{}`",
                h + j + 1,
                attrs[h + j],
                barred(&attrs[j])
            )));
        }
    }
    Ok(h)
}

fn scale_matrix(ids: &[String], names: &[String], m: &Matrix, cutoff: &Cutoff) -> Result<FormalContext> {
    let h = names.len();
    let attributes: Vec<String> = names
        .iter()
        .cloned()
        .chain(names.iter().map(|n| barred(n)))
        .collect();
    let rows = m
        .iter_rows()
        .map(|r| {
            let mut row = BitSet::empty(2 * h);
            for (j, &v) in r.iter().enumerate() {
                if v > cutoff.at(j) {
                    row.insert(j);
                } else {
                    row.insert(h + j);
                }
            }
            row
        })
        .collect();
    FormalContext::new(ids.to_vec(), attributes, rows)
}

/// `(g, n_j)` iff `n_j(g) > δ`, `(g, n̄_j)` iff `n_j(g) ≤ δ`; same for classes.
pub fn scale(view: &ManyValuedView, t: &Thresholds) -> Result<SymbolicView> {
    let h = view.neuron_count();
    t.delta_object.validate(h, "object")?;
    t.delta_class.validate(h, "class")?;
    let names = view.neuron_names();
    Ok(SymbolicView {
        object_context: scale_matrix(view.object_ids(), names, view.object_view(), &t.delta_object)?,
        class_context: scale_matrix(view.class_ids(), names, view.class_view(), &t.delta_class)?,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Split {
    pub above: usize,
    pub at_or_below: usize,
}

impl Split {
    pub fn total(&self) -> usize {
        self.above + self.at_or_below
    }

    /// `(percent > δ, percent ≤ δ)`
    pub fn percentages(&self) -> (f64, f64) {
        let n = self.total();
        if n == 0 {
            return (0.0, 0.0);
        }
        let above = 100.0 * self.above as f64 / n as f64;
        (above, 100.0 * self.at_or_below as f64 / n as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SplitStatistics {
    pub object: Split,
    pub class: Split,
}

fn split(m: &Matrix, cutoff: &Cutoff) -> Split {
    let mut above = 0;
    for r in m.iter_rows() {
        above += r.iter().enumerate().filter(|(j, &v)| v > cutoff.at(*j)).count();
    }
    Split {
        above,
        at_or_below: m.as_slice().len() - above,
    }
}

pub fn split_statistics(view: &ManyValuedView, t: &Thresholds) -> Result<SplitStatistics> {
    let h = view.neuron_count();
    t.delta_object.validate(h, "object")?;
    t.delta_class.validate(h, "class")?;
    Ok(SplitStatistics {
        object: split(view.object_view(), &t.delta_object),
        class: split(view.class_view(), &t.delta_class),
    })
}

/// Fraction of classes whose symbolic row is shared with no other class.
pub fn class_separation(sv: &SymbolicView) -> f64 {
    let rows = sv.class_context.rows();
    if rows.is_empty() {
        return 1.0;
    }
    let mut multiplicity: HashMap<&BitSet, usize> = HashMap::new();
    for r in rows {
        *multiplicity.entry(r).or_default() += 1;
    }
    let unique = rows.iter().filter(|r| multiplicity[r] == 1).count();
    unique as f64 / rows.len() as f64
}

pub(crate) fn indicator_matrix(ctx: &FormalContext) -> Matrix {
    Matrix::from_fn(ctx.object_count(), ctx.attribute_count(), |i, j| {
        if ctx.incident(i, j) {
            1.0
        } else {
            0.0
        }
    })
}

/// 1-NN over the 0/1 rows of the two contexts.
pub fn symbolic_nn_classify(sv: &SymbolicView, metric: Metric) -> Predictions {
    let objects = indicator_matrix(&sv.object_context);
    let classes = indicator_matrix(&sv.class_context);
    let d = cross_distances(&objects, &classes, metric);
    argmin_rows(&d)
        .into_iter()
        .zip(sv.object_context.objects())
        .map(|(ci, g)| (g.clone(), sv.class_context.objects()[ci].clone()))
        .collect()
}
