//! Comparing several models: pairwise GW matrix, fidelity baseline, dendrogram.

use rayon::prelude::*;
use serde::Serialize;

use super::gw::{gw_distance, GwConfig};
use super::space::MetricMeasureSpace;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::view::{fidelity, Predictions};

/// Symmetric matrix of pairwise fidelities; the diagonal is 1.
pub fn pairwise_fidelity_matrix(predictions: &[Predictions]) -> Result<Matrix> {
    let k = predictions.len();
    let mut out = Matrix::filled(k, k, 1.0);
    for a in 0..k {
        for b in a + 1..k {
            let f = fidelity(&predictions[a], &predictions[b])?;
            out.set(a, b, f);
            out.set(b, a, f);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Dendrogram {
    Leaf {
        name: String,
    },
    Merge {
        height: f64,
        size: usize,
        children: Vec<Dendrogram>,
    },
}

impl Dendrogram {
    pub fn leaf_count(&self) -> usize {
        match self {
            Dendrogram::Leaf { .. } => 1,
            Dendrogram::Merge { size, .. } => *size,
        }
    }

    pub fn leaves(&self) -> Vec<&str> {
        match self {
            Dendrogram::Leaf { name } => vec![name.as_str()],
            Dendrogram::Merge { children, .. } => children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }
}

/// Average-linkage agglomeration of a symmetric distance matrix.
///
/// At each step the pair of clusters with the smallest mean pairwise leaf
/// distance merges; ties go to the pair created earliest.
pub fn average_linkage(names: &[String], d: &Matrix) -> Result<Dendrogram> {
    let n = names.len();
    if n == 0 || d.rows() != n || d.cols() != n {
        return Err(Error::InvalidParameter(format!(
            "average linkage needs a square matrix for {n} names"
        )));
    }
    let mut clusters: Vec<(Dendrogram, Vec<usize>)> = names
        .iter()
        .enumerate()
        .map(|(i, name)| (Dendrogram::Leaf { name: name.clone() }, vec![i]))
        .collect();
    while clusters.len() > 1 {
        let mut best = (f64::INFINITY, 0, 1);
        for a in 0..clusters.len() {
            for b in a + 1..clusters.len() {
                let (la, lb) = (&clusters[a].1, &clusters[b].1);
                let sum: f64 = la.iter().flat_map(|&i| lb.iter().map(move |&j| d.get(i, j))).sum();
                let mean = sum / (la.len() * lb.len()) as f64;
                if mean < best.0 {
                    best = (mean, a, b);
                }
            }
        }
        let (height, a, b) = best;
        let (tb, lb) = clusters.remove(b);
        let (ta, mut la) = clusters.remove(a);
        la.extend(lb);
        clusters.push((
            Dendrogram::Merge {
                height,
                size: la.len(),
                children: vec![ta, tb],
            },
            la,
        ));
    }
    Ok(clusters.pop().expect("one cluster remains").0)
}

#[derive(Debug, Clone, Serialize)]
pub struct PairFlag {
    pub a: usize,
    pub b: usize,
    pub converged: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ModelComparison {
    pub names: Vec<String>,
    #[serde(skip)]
    pub distances: Matrix,
    pub flags: Vec<PairFlag>,
    pub dendrogram: Dendrogram,
}

impl ModelComparison {
    /// Square matrix with a header row and column of model names.
    pub fn distances_csv(&self) -> String {
        matrix_csv(&self.names, &self.distances)
    }
}

pub fn matrix_csv(names: &[String], m: &Matrix) -> String {
    let mut out = String::from("model");
    for n in names {
        out.push(',');
        out.push_str(n);
    }
    out.push('\n');
    for (i, n) in names.iter().enumerate() {
        out.push_str(n);
        for v in m.row(i) {
            out.push_str(&format!(",{v}"));
        }
        out.push('\n');
    }
    out
}

/// Pairwise GW distances between models, computed concurrently.
///
/// A failed pair is recorded in `flags` and its entry set to NaN; the
/// dendrogram is then built with that entry treated as infinitely far.
pub fn distance_matrix_over_models(
    names: &[String],
    spaces: &[MetricMeasureSpace],
    cfg: &GwConfig,
) -> Result<ModelComparison> {
    let k = spaces.len();
    if k < 2 || names.len() != k {
        return Err(Error::InvalidParameter(format!(
            "need at least two named spaces, got {k} spaces and {} names",
            names.len()
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).collect();
    let results: Vec<_> = pairs
        .par_iter()
        .map(|&(a, b)| gw_distance(&spaces[a], &spaces[b], cfg))
        .collect();
    let mut distances = Matrix::zeros(k, k);
    let mut flags = Vec::with_capacity(pairs.len());
    for (&(a, b), r) in pairs.iter().zip(results) {
        let (value, flag) = match r {
            Ok(r) => (
                r.distance,
                PairFlag {
                    a,
                    b,
                    converged: r.converged,
                    error: None,
                },
            ),
            Err(e) => (
                f64::NAN,
                PairFlag {
                    a,
                    b,
                    converged: false,
                    error: Some(e.to_string()),
                },
            ),
        };
        distances.set(a, b, value);
        distances.set(b, a, value);
        flags.push(flag);
    }
    let for_tree = Matrix::from_fn(k, k, |i, j| {
        let v = distances.get(i, j);
        if v.is_nan() {
            f64::MAX
        } else {
            v
        }
    });
    let dendrogram = average_linkage(names, &for_tree)?;
    Ok(ModelComparison {
        names: names.to_vec(),
        distances,
        flags,
        dendrogram,
    })
}
