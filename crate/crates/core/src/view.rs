//! Many-valued conceptual views and the 1-NN surrogate built on them.
//!
//! A view pairs the last-hidden-layer activations of every object (the
//! object view) with the output-layer weight rows of every class (the class
//! view). Both live in the same neuron space, so objects can be classified by
//! their nearest class row.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, norm, Matrix};

/// Object id to class id.
pub type Predictions = BTreeMap<String, String>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    Euclidean,
    /// `1 - cos(x, y)`; a zero vector is at distance 1 from everything.
    Cosine,
}

impl Metric {
    pub fn distance(self, a: &[f64], b: &[f64]) -> f64 {
        match self {
            Metric::Euclidean => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y) * (x - y))
                .sum::<f64>()
                .sqrt(),
            Metric::Cosine => {
                let (na, nb) = (norm(a), norm(b));
                if na == 0.0 || nb == 0.0 {
                    return 1.0;
                }
                let cos = (dot(a, b) / (na * nb)).clamp(-1.0, 1.0);
                (1.0 - cos).max(0.0)
            }
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Metric::Euclidean => "euclidean",
            Metric::Cosine => "cosine",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "euclidean" => Ok(Metric::Euclidean),
            "cosine" | "cosine_distance" | "cos" => Ok(Metric::Cosine),
            other => Err(Error::InvalidParameter(format!("unknown metric `{other}`"))),
        }
    }
}

/// Activations of the last hidden layer per object, output weights per class.
#[derive(Debug, Clone, PartialEq)]
pub struct ManyValuedView {
    object_ids: Vec<String>,
    class_ids: Vec<String>,
    neuron_names: Vec<String>,
    object_view: Matrix,
    class_view: Matrix,
    bias: Option<Vec<f64>>,
    model_predictions: Option<Predictions>,
}

/// Result of a logit evaluation together with its norm-cosine decomposition.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Logit {
    pub value: f64,
    /// `|O(g)| |W(c)| cos(O(g), W(c)) + b_c`
    pub decomposed: f64,
    /// Set when the view carries no bias and 0 was used.
    pub bias_missing: bool,
}

impl ManyValuedView {
    /// Neurons are named `n_1..n_h`.
    pub fn new(
        object_ids: Vec<String>,
        class_ids: Vec<String>,
        object_view: Matrix,
        class_view: Matrix,
    ) -> Result<Self> {
        let names = (1..=object_view.cols()).map(|j| format!("n_{j}")).collect();
        Self::with_neuron_names(object_ids, class_ids, names, object_view, class_view)
    }

    pub fn with_neuron_names(
        object_ids: Vec<String>,
        class_ids: Vec<String>,
        neuron_names: Vec<String>,
        object_view: Matrix,
        class_view: Matrix,
    ) -> Result<Self> {
        let h = neuron_names.len();
        if h == 0 {
            return Err(Error::InvalidView("neuron count must be positive".into()));
        }
        if object_view.cols() != h || class_view.cols() != h {
            return Err(Error::InvalidView(format!(
                "column counts differ: object view {}, class view {}, neurons {h}",
                object_view.cols(),
                class_view.cols()
            )));
        }
        if object_view.rows() != object_ids.len() {
            return Err(Error::InvalidView(format!(
                "{} object ids for {} object rows",
                object_ids.len(),
                object_view.rows()
            )));
        }
        if class_view.rows() != class_ids.len() {
            return Err(Error::InvalidView(format!(
                "{} class ids for {} class rows",
                class_ids.len(),
                class_view.rows()
            )));
        }
        check_unique("object", &object_ids)?;
        check_unique("class", &class_ids)?;
        check_unique("neuron", &neuron_names)?;
        Ok(ManyValuedView {
            object_ids,
            class_ids,
            neuron_names,
            object_view,
            class_view,
            bias: None,
            model_predictions: None,
        })
    }

    pub fn with_bias(mut self, bias: Vec<f64>) -> Result<Self> {
        if bias.len() != self.class_ids.len() {
            return Err(Error::InvalidView(format!(
                "bias has {} entries for {} classes",
                bias.len(),
                self.class_ids.len()
            )));
        }
        self.bias = Some(bias);
        Ok(self)
    }

    pub fn with_predictions(mut self, predictions: Predictions) -> Result<Self> {
        for (g, c) in &predictions {
            if !self.object_ids.contains(g) {
                return Err(Error::UnknownObject(g.clone()));
            }
            if !self.class_ids.contains(c) {
                return Err(Error::UnknownClass(c.clone()));
            }
        }
        self.model_predictions = Some(predictions);
        Ok(self)
    }

    pub fn object_ids(&self) -> &[String] {
        &self.object_ids
    }

    pub fn class_ids(&self) -> &[String] {
        &self.class_ids
    }

    pub fn neuron_names(&self) -> &[String] {
        &self.neuron_names
    }

    pub fn neuron_count(&self) -> usize {
        self.neuron_names.len()
    }

    pub fn object_view(&self) -> &Matrix {
        &self.object_view
    }

    pub fn class_view(&self) -> &Matrix {
        &self.class_view
    }

    pub fn bias(&self) -> Option<&[f64]> {
        self.bias.as_deref()
    }

    pub fn model_predictions(&self) -> Option<&Predictions> {
        self.model_predictions.as_ref()
    }

    pub fn object_index(&self, g: &str) -> Result<usize> {
        self.object_ids
            .iter()
            .position(|id| id == g)
            .ok_or_else(|| Error::UnknownObject(g.to_string()))
    }

    pub fn class_index(&self, c: &str) -> Result<usize> {
        self.class_ids
            .iter()
            .position(|id| id == c)
            .ok_or_else(|| Error::UnknownClass(c.to_string()))
    }

    /// `O(g)`, the activation row of object `g`.
    pub fn object_vector(&self, g: &str) -> Result<&[f64]> {
        Ok(self.object_view.row(self.object_index(g)?))
    }

    /// `W(c)`, the weight row of class `c`.
    pub fn class_vector(&self, c: &str) -> Result<&[f64]> {
        Ok(self.class_view.row(self.class_index(c)?))
    }

    pub fn logit(&self, g: &str, c: &str) -> Result<Logit> {
        let o = self.object_vector(g)?;
        let ci = self.class_index(c)?;
        let w = self.class_view.row(ci);
        let (b, bias_missing) = match &self.bias {
            Some(b) => (b[ci], false),
            None => (0.0, true),
        };
        let (no, nw) = (norm(o), norm(w));
        let cos = if no == 0.0 || nw == 0.0 {
            0.0
        } else {
            dot(o, w) / (no * nw)
        };
        Ok(Logit {
            value: dot(o, w) + b,
            decomposed: no * nw * cos + b,
            bias_missing,
        })
    }

    /// Argmax over classes of the logit, lowest class index on ties.
    pub fn logit_argmax(&self) -> Predictions {
        let bias = self.bias.clone().unwrap_or_else(|| vec![0.0; self.class_ids.len()]);
        self.object_ids
            .iter()
            .zip(self.object_view.iter_rows())
            .map(|(g, o)| {
                let mut best = 0;
                let mut best_val = f64::NEG_INFINITY;
                for (ci, w) in self.class_view.iter_rows().enumerate() {
                    let v = dot(o, w) + bias[ci];
                    if v > best_val {
                        best_val = v;
                        best = ci;
                    }
                }
                (g.clone(), self.class_ids[best].clone())
            })
            .collect()
    }

    /// Distance map `G x C`: entry `(i, j)` is `metric(O(g_i), W(c_j))`.
    pub fn object_class_distances(&self, metric: Metric) -> Matrix {
        cross_distances(&self.object_view, &self.class_view, metric)
    }

    pub fn nn_classify(&self, metric: Metric) -> Predictions {
        let d = self.object_class_distances(metric);
        argmin_rows(&d)
            .into_iter()
            .zip(&self.object_ids)
            .map(|(ci, g)| (g.clone(), self.class_ids[ci].clone()))
            .collect()
    }

    /// Same view with neuron columns reordered (new column j = old column perm[j]).
    pub fn permute_neurons(&self, perm: &[usize]) -> Result<Self> {
        let names = perm.iter().map(|&j| self.neuron_names[j].clone()).collect();
        let mut out = Self::with_neuron_names(
            self.object_ids.clone(),
            self.class_ids.clone(),
            names,
            self.object_view.permute_cols(perm),
            self.class_view.permute_cols(perm),
        )?;
        out.bias = self.bias.clone();
        out.model_predictions = self.model_predictions.clone();
        Ok(out)
    }
}

fn check_unique(what: &str, ids: &[String]) -> Result<()> {
    let mut seen = HashSet::with_capacity(ids.len());
    for id in ids {
        if !seen.insert(id.as_str()) {
            return Err(Error::InvalidView(format!("duplicate {what} id `{id}`")));
        }
    }
    Ok(())
}

/// Pairwise distances between the rows of `a` and the rows of `b`.
pub fn cross_distances(a: &Matrix, b: &Matrix, metric: Metric) -> Matrix {
    let m = b.rows();
    let data: Vec<f64> = (0..a.rows())
        .into_par_iter()
        .flat_map_iter(|i| {
            let ai = a.row(i);
            (0..m).map(move |j| metric.distance(ai, b.row(j)))
        })
        .collect();
    Matrix::from_vec(a.rows(), m, data)
}

/// Column index of the row minimum, lowest index on ties.
pub(crate) fn argmin_rows(d: &Matrix) -> Vec<usize> {
    d.iter_rows()
        .map(|row| {
            let mut best = 0;
            for (j, &v) in row.iter().enumerate() {
                if v < row[best] {
                    best = j;
                }
            }
            best
        })
        .collect()
}

/// Fraction of objects on which the two prediction maps agree.
pub fn fidelity(surrogate: &Predictions, reference: &Predictions) -> Result<f64> {
    let left: BTreeSet<&String> = surrogate.keys().collect();
    let right: BTreeSet<&String> = reference.keys().collect();
    if left != right {
        return Err(Error::KeyMismatch {
            only_left: left.difference(&right).map(|s| s.to_string()).collect(),
            only_right: right.difference(&left).map(|s| s.to_string()).collect(),
        });
    }
    if surrogate.is_empty() {
        return Ok(1.0);
    }
    let agree = surrogate
        .iter()
        .filter(|(g, c)| reference.get(*g) == Some(c))
        .count();
    Ok(agree as f64 / surrogate.len() as f64)
}

/// Mean and population standard deviation of every entry of a matrix.
pub fn mean_std(m: &Matrix) -> (f64, f64) {
    let n = m.as_slice().len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = m.as_slice().iter().sum::<f64>() / n as f64;
    let var = m.as_slice().iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ids(prefix: &str, n: usize) -> Vec<String> {
        (0..n).map(|i| format!("{prefix}{i}")).collect()
    }

    fn toy() -> ManyValuedView {
        ManyValuedView::new(
            ids("g", 2),
            ids("c", 1),
            Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap(),
            Matrix::from_rows(&[[0.0, 1.0]]).unwrap(),
        )
        .unwrap()
    }

    fn random_view(rng: &mut ChaCha8Rng, g: usize, c: usize, h: usize) -> ManyValuedView {
        let o = Matrix::from_fn(g, h, |_, _| rng.gen_range(-1.0..1.0));
        let w = Matrix::from_fn(c, h, |_, _| rng.gen_range(-1.0..1.0));
        ManyValuedView::new(ids("g", g), ids("c", c), o, w).unwrap()
    }

    #[test]
    fn object_and_class_vectors() {
        let v = toy();
        assert_eq!(v.object_vector("g0").unwrap(), &[1.0, 2.0]);
        assert_eq!(v.class_vector("c0").unwrap(), &[0.0, 1.0]);
        assert!(matches!(v.object_vector("zz"), Err(Error::UnknownObject(g)) if g == "zz"));
        assert!(matches!(v.class_vector("zz"), Err(Error::UnknownClass(_))));
    }

    #[test]
    fn rows_reassemble_the_matrices() {
        let v = toy();
        let rows: Vec<Vec<f64>> = v
            .object_ids()
            .iter()
            .map(|g| v.object_vector(g).unwrap().to_vec())
            .collect();
        assert_eq!(&Matrix::from_rows(&rows).unwrap(), v.object_view());
        let rows: Vec<Vec<f64>> = v
            .class_ids()
            .iter()
            .map(|c| v.class_vector(c).unwrap().to_vec())
            .collect();
        assert_eq!(&Matrix::from_rows(&rows).unwrap(), v.class_view());
    }

    #[test]
    fn invalid_views_rejected() {
        let o = Matrix::zeros(2, 2);
        let w = Matrix::zeros(1, 3);
        assert!(ManyValuedView::new(ids("g", 2), ids("c", 1), o.clone(), w).is_err());
        let w = Matrix::zeros(2, 2);
        assert!(ManyValuedView::new(vec!["a".into(), "a".into()], ids("c", 2), o, w).is_err());
    }

    #[test]
    fn logit_examples() {
        let v = ManyValuedView::new(
            ids("g", 1),
            ids("c", 1),
            Matrix::from_rows(&[[1.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[0.0, 1.0]]).unwrap(),
        )
        .unwrap();
        let l = v.logit("g0", "c0").unwrap();
        assert_eq!(l.value, 0.0);
        assert!(l.bias_missing);

        let v = ManyValuedView::new(
            ids("g", 1),
            ids("c", 1),
            Matrix::from_rows(&[[1.0, 2.0]]).unwrap(),
            Matrix::from_rows(&[[3.0, 4.0]]).unwrap(),
        )
        .unwrap()
        .with_bias(vec![0.5])
        .unwrap();
        let l = v.logit("g0", "c0").unwrap();
        assert_eq!(l.value, 11.5);
        assert!(!l.bias_missing);
        assert!((l.decomposed - 11.5).abs() < 1e-12);
    }

    #[test]
    fn logit_decomposition_agrees_on_random_vectors() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let v = random_view(&mut rng, 3, 3, 7)
                .with_bias(vec![0.3, -0.2, 1.0])
                .unwrap();
            for g in v.object_ids() {
                for c in v.class_ids() {
                    let l = v.logit(g, c).unwrap();
                    let scale = l.value.abs().max(1e-300);
                    assert!((l.value - l.decomposed).abs() / scale < 1e-9 || (l.value - l.decomposed).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn distance_examples() {
        let v = ManyValuedView::new(
            ids("g", 1),
            ids("c", 2),
            Matrix::from_rows(&[[1.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let d = v.object_class_distances(Metric::Cosine);
        assert_eq!(d.get(0, 0), 1.0);
        assert_eq!(d.get(0, 1), 0.0);
        let d = v.object_class_distances(Metric::Euclidean);
        assert_eq!(d.get(0, 1), 0.0);
        assert!((d.get(0, 0) - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_vector_cosine_is_one() {
        assert_eq!(Metric::Cosine.distance(&[0.0, 0.0], &[1.0, 2.0]), 1.0);
        assert_eq!(Metric::Cosine.distance(&[0.0, 0.0], &[0.0, 0.0]), 1.0);
    }

    #[test]
    fn distances_match_scalar_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_view(&mut rng, 3, 2, 4);
        for metric in [Metric::Euclidean, Metric::Cosine] {
            let d = v.object_class_distances(metric);
            for i in 0..3 {
                for j in 0..2 {
                    let (o, w) = (v.object_view().row(i), v.class_view().row(j));
                    let expected = match metric {
                        Metric::Euclidean => {
                            let mut s = 0.0;
                            for k in 0..4 {
                                s += (o[k] - w[k]) * (o[k] - w[k]);
                            }
                            s.sqrt()
                        }
                        Metric::Cosine => {
                            let (mut ow, mut oo, mut ww) = (0.0, 0.0, 0.0);
                            for k in 0..4 {
                                ow += o[k] * w[k];
                                oo += o[k] * o[k];
                                ww += w[k] * w[k];
                            }
                            1.0 - ow / (oo.sqrt() * ww.sqrt())
                        }
                    };
                    assert!((d.get(i, j) - expected).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn nn_classify_identity_view() {
        let rows = Matrix::from_rows(&[[1.0, 0.0, 0.5], [0.0, 1.0, 0.2], [0.3, 0.3, 0.3]]).unwrap();
        let v = ManyValuedView::new(ids("g", 3), ids("c", 3), rows.clone(), rows).unwrap();
        let p = v.nn_classify(Metric::Euclidean);
        for i in 0..3 {
            assert_eq!(p[&format!("g{i}")], format!("c{i}"));
        }
    }

    #[test]
    fn nn_classify_single_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = random_view(&mut rng, 6, 1, 3);
        assert!(v.nn_classify(Metric::Cosine).values().all(|c| c == "c0"));
    }

    #[test]
    fn nn_classify_matches_brute_force_argmin() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let v = random_view(&mut rng, 10, 4, 4);
        for metric in [Metric::Euclidean, Metric::Cosine] {
            let p = v.nn_classify(metric);
            for (i, g) in v.object_ids().iter().enumerate() {
                let mut best = (f64::INFINITY, 0);
                for j in 0..4 {
                    let d = metric.distance(v.object_view().row(i), v.class_view().row(j));
                    if d < best.0 {
                        best = (d, j);
                    }
                }
                assert_eq!(p[g], format!("c{}", best.1));
            }
        }
    }

    #[test]
    fn ties_go_to_lowest_class_index() {
        let v = ManyValuedView::new(
            ids("g", 1),
            ids("c", 2),
            Matrix::from_rows(&[[0.0, 0.0]]).unwrap(),
            Matrix::from_rows(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(),
        )
        .unwrap();
        assert_eq!(v.nn_classify(Metric::Euclidean)["g0"], "c0");
        assert_eq!(v.nn_classify(Metric::Cosine)["g0"], "c0");
    }

    #[test]
    fn fidelity_examples() {
        let a: Predictions = [("x", "1"), ("y", "2")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        let b: Predictions = [("x", "2"), ("y", "1")]
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_string()))
            .collect();
        assert_eq!(fidelity(&a, &a).unwrap(), 1.0);
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let mut c = a.clone();
        c.remove("y");
        c.insert("z".into(), "1".into());
        match fidelity(&a, &c) {
            Err(Error::KeyMismatch {
                only_left,
                only_right,
            }) => {
                assert_eq!(only_left, vec!["y".to_string()]);
                assert_eq!(only_right, vec!["z".to_string()]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn logit_argmax_uses_bias() {
        let v = ManyValuedView::new(
            ids("g", 1),
            ids("c", 2),
            Matrix::from_rows(&[[1.0, 1.0]]).unwrap(),
            Matrix::from_rows(&[[1.0, 0.0], [0.0, 0.9]]).unwrap(),
        )
        .unwrap();
        assert_eq!(v.logit_argmax()["g0"], "c0");
        let v = v.with_bias(vec![0.0, 0.5]).unwrap();
        assert_eq!(v.logit_argmax()["g0"], "c1");
    }

    #[test]
    fn mean_std_of_matrix() {
        let m = Matrix::from_rows(&[[1.0, 3.0]]).unwrap();
        assert_eq!(mean_std(&m), (2.0, 1.0));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn nn_classify_invariant_under_neuron_permutation(seed in 0u64..1000, h in 2usize..7) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v = random_view(&mut rng, 8, 3, h);
                let mut perm: Vec<usize> = (0..h).collect();
                perm.reverse();
                perm.rotate_left(seed as usize % h);
                let pv = v.permute_neurons(&perm).unwrap();
                for metric in [Metric::Euclidean, Metric::Cosine] {
                    prop_assert_eq!(v.nn_classify(metric), pv.nn_classify(metric));
                }
            }

            #[test]
            fn distances_nonnegative(seed in 0u64..1000) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v = random_view(&mut rng, 5, 3, 4);
                for metric in [Metric::Euclidean, Metric::Cosine] {
                    prop_assert!(v.object_class_distances(metric).as_slice().iter().all(|&d| d >= 0.0));
                }
            }

            #[test]
            fn fidelity_reflexive(seed in 0u64..1000) {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                let v = random_view(&mut rng, 6, 3, 4);
                let p = v.nn_classify(Metric::Euclidean);
                prop_assert_eq!(fidelity(&p, &p).unwrap(), 1.0);
            }
        }
    }
}
