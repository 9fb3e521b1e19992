//! Brute-force oracles and fixtures shared by the integration tests. The
//! oracles follow set definitions directly and share no code with the
//! library beyond its public types.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::Path;

use cviews::fca::{BitSet, FormalContext};
use cviews::io::write_view;
use cviews::similarity::MetricMeasureSpace;
use cviews::{ManyValuedView, Matrix, Metric, Predictions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub type Concept = (BTreeSet<usize>, BTreeSet<usize>);

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_context(rng: &mut ChaCha8Rng, g: usize, m: usize, density: f64) -> FormalContext {
    let table: Vec<Vec<bool>> = (0..g).map(|_| (0..m).map(|_| rng.gen_bool(density)).collect()).collect();
    FormalContext::from_bools(&table, m).unwrap()
}

pub fn incidence(ctx: &FormalContext) -> Vec<Vec<bool>> {
    (0..ctx.object_count())
        .map(|g| (0..ctx.attribute_count()).map(|m| ctx.incident(g, m)).collect())
        .collect()
}

/// `A' = {m | ∀g ∈ A: gIm}`
pub fn intent_oracle(table: &[Vec<bool>], m: usize, a: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..m).filter(|&j| a.iter().all(|&g| table[g][j])).collect()
}

/// `B' = {g | ∀m ∈ B: gIm}`
pub fn extent_oracle(table: &[Vec<bool>], b: &BTreeSet<usize>) -> BTreeSet<usize> {
    (0..table.len()).filter(|&g| b.iter().all(|&j| table[g][j])).collect()
}

pub fn subsets(n: usize) -> impl Iterator<Item = BTreeSet<usize>> {
    (0u64..1 << n).map(move |mask| (0..n).filter(|i| mask >> i & 1 == 1).collect())
}

/// All concepts `(A'', A')` for every object subset `A`.
pub fn concepts_oracle(table: &[Vec<bool>], m: usize) -> BTreeSet<Concept> {
    subsets(table.len())
        .map(|a| {
            let intent = intent_oracle(table, m, &a);
            (extent_oracle(table, &intent), intent)
        })
        .collect()
}

/// Concepts that are not the intersection of the extents strictly above them.
pub fn meet_irreducible_oracle(concepts: &BTreeSet<Concept>, objects: usize) -> BTreeSet<Concept> {
    concepts
        .iter()
        .filter(|(ext, _)| {
            let mut meet: BTreeSet<usize> = (0..objects).collect();
            for (other, _) in concepts {
                if other.is_superset(ext) && other != ext {
                    meet = meet.intersection(other).copied().collect();
                }
            }
            meet != *ext
        })
        .cloned()
        .collect()
}

pub fn to_set(b: &BitSet) -> BTreeSet<usize> {
    b.iter().collect()
}

/// Largest WRAcc numerator `pos·N − n·P` over every non-empty conjunction of
/// at most `depth` literals on distinct non-target attributes.
pub fn best_wracc_oracle(table: &[Vec<bool>], target: usize, depth: usize) -> Option<i64> {
    let n = table.len() as i64;
    let m = table[0].len();
    let p = table.iter().filter(|r| r[target]).count() as i64;
    let lits: Vec<(usize, bool)> = (0..m)
        .filter(|&j| j != target)
        .flat_map(|j| [(j, true), (j, false)])
        .collect();
    let mut best = None;
    let mut stack: Vec<(Vec<(usize, bool)>, usize)> = vec![(Vec::new(), 0)];
    while let Some((desc, from)) = stack.pop() {
        if !desc.is_empty() {
            let covered: Vec<&Vec<bool>> = table
                .iter()
                .filter(|r| desc.iter().all(|&(j, v)| r[j] == v))
                .collect();
            if !covered.is_empty() {
                let pos = covered.iter().filter(|r| r[target]).count() as i64;
                let q = pos * n - covered.len() as i64 * p;
                best = Some(best.map_or(q, |b: i64| b.max(q)));
            }
        }
        if desc.len() < depth {
            for (k, &lit) in lits.iter().enumerate().skip(from) {
                if desc.iter().all(|&(j, _)| j != lit.0) {
                    let mut next = desc.clone();
                    next.push(lit);
                    stack.push((next, k + 1));
                }
            }
        }
    }
    best
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// `Σ_{i,k} (Dx[i,k] − Dy[σi,σk])² / n²`, the GW objective of a permutation coupling.
pub fn permutation_objective(x: &Matrix, y: &Matrix, sigma: &[usize]) -> f64 {
    let n = sigma.len();
    let mut total = 0.0;
    for i in 0..n {
        for k in 0..n {
            let d = x.get(i, k) - y.get(sigma[i], sigma[k]);
            total += d * d;
        }
    }
    total / (n * n) as f64
}

pub fn best_permutation_objective(x: &Matrix, y: &Matrix) -> f64 {
    permutations(x.rows())
        .iter()
        .map(|s| permutation_objective(x, y, s))
        .fold(f64::INFINITY, f64::min)
}

pub fn random_space(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> MetricMeasureSpace {
    let pts = Matrix::from_fn(n, dim, |_, _| rng.gen_range(-1.0..1.0));
    MetricMeasureSpace::from_points(names("p", n), &pts, Metric::Euclidean).unwrap()
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn random_view(rng: &mut ChaCha8Rng, objects: usize, classes: usize, h: usize) -> ManyValuedView {
    let o = Matrix::from_fn(objects, h, |_, _| rng.gen_range(-1.0..1.0));
    let w = Matrix::from_fn(classes, h, |_, _| rng.gen_range(-1.0..1.0));
    ManyValuedView::new(names("g", objects), names("c", classes), o, w).unwrap()
}

/// Objects are class weight rows plus Gaussian noise with standard deviation
/// `noise` times the row norm; returns the view and the true classes.
pub fn noisy_class_view(rng: &mut ChaCha8Rng, objects: usize, classes: usize, h: usize, noise: f64) -> (ManyValuedView, Vec<usize>) {
    let unit = Normal::new(0.0, 1.0).unwrap();
    let w = Matrix::from_fn(classes, h, |_, _| unit.sample(rng));
    let truth: Vec<usize> = (0..objects).map(|_| rng.gen_range(0..classes)).collect();
    let mut o = Matrix::zeros(objects, h);
    for (i, &c) in truth.iter().enumerate() {
        let row = w.row(c);
        let sigma = noise * row.iter().map(|v| v * v).sum::<f64>().sqrt();
        for j in 0..h {
            o.set(i, j, row[j] + sigma * unit.sample(rng));
        }
    }
    let view = ManyValuedView::new(names("g", objects), names("c", classes), o, w).unwrap();
    (view, truth)
}

/// A small view with bias and predictions written to `dir`.
pub fn write_toy_view(dir: &Path, seed: u64, objects: usize, classes: usize, h: usize) -> ManyValuedView {
    let mut r = rng(seed);
    let (view, _) = noisy_class_view(&mut r, objects, classes, h, 0.3);
    let bias: Vec<f64> = (0..classes).map(|_| r.gen_range(-0.1..0.1)).collect();
    let view = view.with_bias(bias).unwrap();
    let preds: Predictions = view.logit_argmax();
    let view = view.with_predictions(preds).unwrap();
    write_view(dir, &view, "tanh", "toy").unwrap();
    view
}
