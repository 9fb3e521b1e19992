//! Squared-loss Gromov-Wasserstein discrepancy by conditional gradient.
//!
//! Minimises `E(T) = Σ_{i,j,k,l} (Dx[i,k] − Dy[j,l])² T[i,j] T[k,l]` over
//! couplings `T` of the two measures. Each step solves the linearised problem
//! exactly with the network simplex and takes an exact line search on the
//! quadratic. The problem is non-convex: the solver runs from the product
//! coupling and from several seeded random vertices of the transport polytope,
//! polishes permutation solutions by pairwise exchange where that applies, and
//! keeps the best local optimum. The reported value is an upper bound on the
//! global minimum.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::emd::solve_transport;
use super::space::MetricMeasureSpace;
use crate::error::Result;
use crate::matrix::Matrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GwConfig {
    pub max_iter: usize,
    /// relative objective change below which a run stops
    pub tol: f64,
    /// random vertex starts in addition to the product coupling
    pub restarts: usize,
    pub seed: u64,
    /// largest equal-size uniform problem that gets the pairwise-exchange polish
    pub polish_max_points: usize,
}

impl Default for GwConfig {
    fn default() -> Self {
        GwConfig {
            max_iter: 1000,
            tol: 1e-9,
            restarts: 16,
            seed: 7,
            polish_max_points: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GwResult {
    /// `sqrt(objective)`
    pub distance: f64,
    pub objective: f64,
    #[serde(skip)]
    pub coupling: Matrix,
    pub iterations: usize,
    pub converged: bool,
    /// objective after each iteration of the winning run, starting with the initial coupling
    #[serde(skip)]
    pub trace: Vec<f64>,
}

struct Problem<'a> {
    x: &'a Matrix,
    y: &'a Matrix,
    p: &'a [f64],
    q: &'a [f64],
    /// `c[i,j] = Σ_k Dx[i,k]² p_k + Σ_l Dy[j,l]² q_l`
    c: Matrix,
}

impl<'a> Problem<'a> {
    fn new(x: &'a MetricMeasureSpace, y: &'a MetricMeasureSpace) -> Self {
        let (dx, dy) = (x.distances(), y.distances());
        let (p, q) = (x.measure(), y.measure());
        let cx: Vec<f64> = dx
            .iter_rows()
            .map(|r| r.iter().zip(p).map(|(d, w)| d * d * w).sum())
            .collect();
        let cy: Vec<f64> = dy
            .iter_rows()
            .map(|r| r.iter().zip(q).map(|(d, w)| d * d * w).sum())
            .collect();
        Problem {
            x: dx,
            y: dy,
            p,
            q,
            c: Matrix::from_fn(p.len(), q.len(), |i, j| cx[i] + cy[j]),
        }
    }

    /// `Dx T Dy`
    fn cross(&self, t: &Matrix) -> Matrix {
        self.x.matmul(t).matmul(self.y)
    }

    fn objective_with(&self, t: &Matrix, cross: &Matrix) -> f64 {
        self.c.dot(t) - 2.0 * cross.dot(t)
    }

    fn objective(&self, t: &Matrix) -> f64 {
        self.objective_with(t, &self.cross(t))
    }

    fn run(&self, mut t: Matrix, cfg: &GwConfig) -> Result<Run> {
        let mut cross = self.cross(&t);
        let mut value = self.objective_with(&t, &cross);
        let mut trace = vec![value];
        let mut converged = false;
        let mut iterations = 0;
        while iterations < cfg.max_iter {
            iterations += 1;
            let grad = Matrix::from_fn(t.rows(), t.cols(), |i, j| {
                2.0 * self.c.get(i, j) - 4.0 * cross.get(i, j)
            });
            let target = solve_transport(self.p, self.q, &grad)?;
            let dir = Matrix::from_fn(t.rows(), t.cols(), |i, j| target.get(i, j) - t.get(i, j));
            let slope = grad.dot(&dir);
            if slope >= 0.0 {
                converged = true;
                break;
            }
            let dir_cross = self.cross(&dir);
            let curvature = -2.0 * dir_cross.dot(&dir);
            let step = if curvature > 0.0 {
                (-slope / (2.0 * curvature)).clamp(0.0, 1.0)
            } else if curvature + slope < 0.0 {
                1.0
            } else {
                0.0
            };
            if step == 0.0 {
                converged = true;
                break;
            }
            let next = Matrix::from_fn(t.rows(), t.cols(), |i, j| t.get(i, j) + step * dir.get(i, j));
            let next_cross = Matrix::from_fn(t.rows(), t.cols(), |i, j| {
                cross.get(i, j) + step * dir_cross.get(i, j)
            });
            let next_value = self.objective_with(&next, &next_cross);
            if next_value > value {
                // rounding noise at a stationary point
                converged = true;
                break;
            }
            let change = value - next_value;
            t = next;
            cross = next_cross;
            value = next_value;
            trace.push(value);
            if change <= cfg.tol * value.abs() || value.abs() <= f64::MIN_POSITIVE {
                converged = true;
                break;
            }
        }
        // recompute to shed drift in the incrementally updated cross term
        let objective = self.objective(&t).max(0.0);
        Ok(Run {
            coupling: t,
            objective,
            iterations,
            converged,
            trace,
        })
    }
}

impl Problem<'_> {
    /// For equal-size uniform measures, rounds a local optimum to its nearest
    /// permutation, improves that by pairwise exchanges and restarts from it.
    /// Vertices are almost always stationary for the linearisation, so this is
    /// what lets the search escape poor permutation basins.
    fn polished(&self, run: Run, cfg: &GwConfig) -> Result<Run> {
        let n = self.p.len();
        if n != self.q.len() || n > cfg.polish_max_points || self.p.iter().chain(self.q).any(|&w| w != self.p[0]) {
            return Ok(run);
        }
        let neg = Matrix::from_fn(n, n, |i, j| -run.coupling.get(i, j));
        let vertex = solve_transport(self.p, self.q, &neg)?;
        let mut sigma: Vec<usize> = (0..n)
            .map(|i| (0..n).max_by(|&a, &b| vertex.get(i, a).total_cmp(&vertex.get(i, b))).unwrap())
            .collect();
        two_swap(self.x, self.y, &mut sigma);
        let w = 1.0 / n as f64;
        let start = Matrix::from_fn(n, n, |i, j| if sigma[i] == j { w } else { 0.0 });
        let again = self.run(start, cfg)?;
        Ok(if again.objective < run.objective { again } else { run })
    }
}

/// Best-improvement pairwise exchange on a permutation `sigma` for the
/// unnormalised cost `Σ_{i,k} (Dx[i,k] − Dy[σi,σk])²`.
fn two_swap(dx: &Matrix, dy: &Matrix, sigma: &mut [usize]) {
    let n = sigma.len();
    let scale = dx.max_abs().max(dy.max_abs()).powi(2).max(f64::MIN_POSITIVE);
    loop {
        let mut best = (-1e-12 * scale, 0, 0);
        for a in 0..n {
            for b in a + 1..n {
                let (sa, sb) = (sigma[a], sigma[b]);
                let mut delta = 0.0;
                for k in 0..n {
                    if k == a || k == b {
                        continue;
                    }
                    let sk = sigma[k];
                    let (xa, xb) = (dx.get(a, k), dx.get(b, k));
                    let (ya, yb) = (dy.get(sa, sk), dy.get(sb, sk));
                    delta += (xa - yb).powi(2) + (xb - ya).powi(2) - (xa - ya).powi(2) - (xb - yb).powi(2);
                }
                if 2.0 * delta < best.0 {
                    best = (2.0 * delta, a, b);
                }
            }
        }
        if best.1 == best.2 {
            return;
        }
        sigma.swap(best.1, best.2);
    }
}

struct Run {
    coupling: Matrix,
    objective: f64,
    iterations: usize,
    converged: bool,
    trace: Vec<f64>,
}

fn space_cmp(a: &MetricMeasureSpace, b: &MetricMeasureSpace) -> Ordering {
    a.len()
        .cmp(&b.len())
        .then_with(|| {
            a.distances()
                .as_slice()
                .iter()
                .zip(b.distances().as_slice())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
        .then_with(|| {
            a.measure()
                .iter()
                .zip(b.measure())
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
}

/// Point order determined by the metric structure alone: by mass, then by
/// the sorted profile of `(distance, mass)` pairs to all points.
fn canonical_order(x: &MetricMeasureSpace) -> Vec<usize> {
    let (d, p) = (x.distances(), x.measure());
    let profiles: Vec<Vec<(f64, f64)>> = (0..x.len())
        .map(|i| {
            let mut row: Vec<(f64, f64)> = d.row(i).iter().copied().zip(p.iter().copied()).collect();
            row.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
            row
        })
        .collect();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&i, &j| {
        p[i].total_cmp(&p[j]).then_with(|| {
            profiles[i]
                .iter()
                .zip(&profiles[j])
                .map(|(a, b)| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        })
    });
    order
}

/// GW discrepancy between two metric-measure spaces.
///
/// Both spaces are put in a canonical point order and the pair in a canonical
/// orientation before solving, and the coupling is mapped back afterwards.
/// Relabelling points or swapping the arguments therefore leaves the reported
/// value unchanged, apart from points whose structural profiles tie exactly.
pub fn gw_distance(x: &MetricMeasureSpace, y: &MetricMeasureSpace, cfg: &GwConfig) -> Result<GwResult> {
    let (ox, oy) = (canonical_order(x), canonical_order(y));
    let (cx, cy) = (x.permuted(&ox)?, y.permuted(&oy)?);
    let mut r = if space_cmp(&cx, &cy) == Ordering::Greater {
        let mut r = solve_oriented(&cy, &cx, cfg)?;
        r.coupling = r.coupling.transpose();
        r
    } else {
        solve_oriented(&cx, &cy, cfg)?
    };
    let mut coupling = Matrix::zeros(x.len(), y.len());
    for (i, &gi) in ox.iter().enumerate() {
        for (j, &gj) in oy.iter().enumerate() {
            coupling.set(gi, gj, r.coupling.get(i, j));
        }
    }
    r.coupling = coupling;
    Ok(r)
}

fn solve_oriented(x: &MetricMeasureSpace, y: &MetricMeasureSpace, cfg: &GwConfig) -> Result<GwResult> {
    let problem = Problem::new(x, y);
    let (n, m) = (x.len(), y.len());
    let product = Matrix::from_fn(n, m, |i, j| x.measure()[i] * y.measure()[j]);
    let mut best = problem.polished(problem.run(product, cfg)?, cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let noise = Matrix::from_fn(n, m, |_, _| rng.gen::<f64>());
        let start = solve_transport(x.measure(), y.measure(), &noise)?;
        let run = problem.polished(problem.run(start, cfg)?, cfg)?;
        if run.objective < best.objective {
            best = run;
        }
    }
    Ok(GwResult {
        distance: best.objective.sqrt(),
        objective: best.objective,
        coupling: best.coupling,
        iterations: best.iterations,
        converged: best.converged,
        trace: best.trace,
    })
}

/// `Σ (Dx[i,k] − Dy[j,l])² T[i,j] T[k,l]` evaluated directly.
pub fn gw_objective(x: &MetricMeasureSpace, y: &MetricMeasureSpace, coupling: &Matrix) -> f64 {
    let (n, m) = (x.len(), y.len());
    let (dx, dy) = (x.distances(), y.distances());
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..m {
            let tij = coupling.get(i, j);
            if tij == 0.0 {
                continue;
            }
            for k in 0..n {
                for l in 0..m {
                    let d = dx.get(i, k) - dy.get(j, l);
                    total += d * d * tij * coupling.get(k, l);
                }
            }
        }
    }
    total
}
