use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::view::{ManyValuedView, Metric};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Object,
    Class,
}

impl std::str::FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "object" => Ok(Side::Object),
            "class" => Ok(Side::Class),
            other => Err(Error::InvalidParameter(format!("unknown side `{other}`"))),
        }
    }
}

/// A finite pseudo-metric space with a probability measure on its points.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMeasureSpace {
    labels: Vec<String>,
    distances: Matrix,
    measure: Vec<f64>,
}

impl MetricMeasureSpace {
    pub fn new(labels: Vec<String>, distances: Matrix, measure: Vec<f64>) -> Result<Self> {
        let n = labels.len();
        if distances.rows() != n || distances.cols() != n || measure.len() != n {
            return Err(Error::InvalidSpace(format!(
                "{n} labels, {}x{} distances, {} measure entries",
                distances.rows(),
                distances.cols(),
                measure.len()
            )));
        }
        let scale = distances.max_abs().max(1.0);
        for i in 0..n {
            if distances.get(i, i).abs() > 1e-12 * scale {
                return Err(Error::InvalidSpace(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = distances.get(i, j);
                if !d.is_finite() || d < 0.0 {
                    return Err(Error::InvalidSpace(format!("invalid distance {d} at ({i}, {j})")));
                }
                if (d - distances.get(j, i)).abs() > 1e-12 * scale {
                    return Err(Error::InvalidSpace(format!("asymmetric at ({i}, {j})")));
                }
            }
        }
        if measure.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::InvalidSpace("measure has negative entries".into()));
        }
        let total: f64 = measure.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpace(format!("measure sums to {total}")));
        }
        Ok(MetricMeasureSpace {
            labels,
            distances,
            measure,
        })
    }

    /// Uniform measure on the given distance matrix.
    pub fn uniform(labels: Vec<String>, distances: Matrix) -> Result<Self> {
        let n = labels.len();
        let measure = vec![1.0 / n.max(1) as f64; n];
        Self::new(labels, distances, measure)
    }

    /// Pairwise distances between the rows of `points` with a uniform measure.
    pub fn from_points(labels: Vec<String>, points: &Matrix, metric: Metric) -> Result<Self> {
        let n = points.rows();
        let mut d = Matrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = metric.distance(points.row(i), points.row(j));
                d.set(i, j, v);
                d.set(j, i, v);
            }
        }
        Self::uniform(labels, d)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn distances(&self) -> &Matrix {
        &self.distances
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    /// Relabels points: new point `i` is old point `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        Self::new(
            perm.iter().map(|&i| self.labels[i].clone()).collect(),
            self.distances.permute_square(perm),
            perm.iter().map(|&i| self.measure[i]).collect(),
        )
    }
}

/// Metric-measure space over the rows of one side of a view.
///
/// With `fraction < 1` a seeded uniform subsample without replacement of
/// `round(fraction * rows)` rows is taken, kept in original row order.
pub fn space_from_view(
    view: &ManyValuedView,
    side: Side,
    metric: Metric,
    fraction: f64,
    seed: u64,
) -> Result<MetricMeasureSpace> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "subsample fraction must be in (0, 1], got {fraction}"
        )));
    }
    let (ids, m) = match side {
        Side::Object => (view.object_ids(), view.object_view()),
        Side::Class => (view.class_ids(), view.class_view()),
    };
    let total = m.rows();
    let mut idx: Vec<usize> = if fraction == 1.0 {
        (0..total).collect()
    } else {
        let k = ((fraction * total as f64).round() as usize).min(total);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        sample(&mut rng, total, k).into_vec()
    };
    idx.sort_unstable();
    if idx.len() < 2 {
        return Err(Error::TooFewPoints(idx.len()));
    }
    let labels = idx.iter().map(|&i| ids[i].clone()).collect();
    let rows: Vec<&[f64]> = idx.iter().map(|&i| m.row(i)).collect();
    let points = Matrix::from_rows(&rows).expect("rows share the neuron count");
    MetricMeasureSpace::from_points(labels, &points, metric)
}
