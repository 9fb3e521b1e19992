//! Exact discrete optimal transport by the primal network simplex method.
//!
//! Sources and sinks are joined by complete uncapacitated arcs. An artificial
//! root with big-M arcs gives the initial spanning tree. Leaving arcs follow
//! the strongly feasible tree rule, which rules out cycling on degenerate
//! pivots. The tree is rebuilt from its arc list after each pivot; pricing
//! dominates the cost of a pivot anyway.

use crate::error::{Error, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dir {
    /// tree arc points from the node to its parent
    Up,
    /// tree arc points from the parent to the node
    Down,
}

struct Network<'a> {
    m: usize,
    n: usize,
    cost: &'a Matrix,
    art_cost: f64,
    flow: Vec<f64>,
    in_tree: Vec<bool>,
    tree_arcs: Vec<usize>,
    slot_of: Vec<usize>,
    parent: Vec<usize>,
    pred: Vec<usize>,
    dir: Vec<Dir>,
    depth: Vec<usize>,
    pi: Vec<f64>,
    adj: Vec<Vec<(usize, usize)>>,
}

const NONE: usize = usize::MAX;

impl<'a> Network<'a> {
    fn root(&self) -> usize {
        self.m + self.n
    }

    fn real_arcs(&self) -> usize {
        self.m * self.n
    }

    fn arc_count(&self) -> usize {
        self.m * self.n + self.m + self.n
    }

    fn ends(&self, e: usize) -> (usize, usize) {
        let real = self.real_arcs();
        if e < real {
            (e / self.n, self.m + e % self.n)
        } else {
            let k = e - real;
            if k < self.m {
                (k, self.root())
            } else {
                (self.root(), k)
            }
        }
    }

    fn arc_cost(&self, e: usize) -> f64 {
        let real = self.real_arcs();
        if e < real {
            self.cost.get(e / self.n, e % self.n)
        } else if e - real < self.m {
            0.0
        } else {
            self.art_cost
        }
    }

    fn reduced_cost(&self, e: usize) -> f64 {
        let (s, t) = self.ends(e);
        self.arc_cost(e) + self.pi[s] - self.pi[t]
    }

    fn rebuild_tree(&mut self) {
        let nodes = self.m + self.n + 1;
        for a in &mut self.adj {
            a.clear();
        }
        for &e in &self.tree_arcs {
            let (s, t) = self.ends(e);
            self.adj[s].push((e, t));
            self.adj[t].push((e, s));
        }
        let root = self.root();
        self.parent[root] = NONE;
        self.pred[root] = NONE;
        self.depth[root] = 0;
        self.pi[root] = 0.0;
        let mut stack = Vec::with_capacity(nodes);
        stack.push(root);
        let mut seen = vec![false; nodes];
        seen[root] = true;
        while let Some(u) = stack.pop() {
            for k in 0..self.adj[u].len() {
                let (e, v) = self.adj[u][k];
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                self.parent[v] = u;
                self.pred[v] = e;
                self.depth[v] = self.depth[u] + 1;
                let (s, _) = self.ends(e);
                let c = self.arc_cost(e);
                if s == v {
                    self.dir[v] = Dir::Up;
                    self.pi[v] = self.pi[u] - c;
                } else {
                    self.dir[v] = Dir::Down;
                    self.pi[v] = self.pi[u] + c;
                }
                stack.push(v);
            }
        }
    }

    /// Block-search pricing; returns an arc with negative reduced cost.
    fn find_entering(&self, start: &mut usize, block: usize, tol: f64) -> Option<usize> {
        let total = self.arc_count();
        let mut best = None;
        let mut best_rc = -tol;
        let mut scanned_in_block = 0;
        let mut e = *start;
        for _ in 0..total {
            if !self.in_tree[e] {
                let rc = self.reduced_cost(e);
                if rc < best_rc {
                    best_rc = rc;
                    best = Some(e);
                }
            }
            e += 1;
            if e == total {
                e = 0;
            }
            scanned_in_block += 1;
            if scanned_in_block == block {
                if best.is_some() {
                    *start = e;
                    return best;
                }
                scanned_in_block = 0;
            }
        }
        *start = e;
        best
    }

    fn pivot(&mut self, entering: usize) -> Result<()> {
        let (first, second) = self.ends(entering);
        let (mut a, mut b) = (first, second);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.parent[a];
            } else {
                b = self.parent[b];
            }
        }
        let join = a;

        let mut delta = f64::INFINITY;
        let mut leaving_node = NONE;
        let mut u = first;
        while u != join {
            if self.dir[u] == Dir::Up {
                let d = self.flow[self.pred[u]];
                if d < delta {
                    delta = d;
                    leaving_node = u;
                }
            }
            u = self.parent[u];
        }
        let mut u = second;
        while u != join {
            if self.dir[u] == Dir::Down {
                let d = self.flow[self.pred[u]];
                if d <= delta {
                    delta = d;
                    leaving_node = u;
                }
            }
            u = self.parent[u];
        }
        if leaving_node == NONE {
            return Err(Error::InvalidParameter("unbounded transport problem".into()));
        }

        if delta > 0.0 {
            self.flow[entering] += delta;
            let mut u = first;
            while u != join {
                let e = self.pred[u];
                match self.dir[u] {
                    Dir::Up => self.flow[e] -= delta,
                    Dir::Down => self.flow[e] += delta,
                }
                u = self.parent[u];
            }
            let mut u = second;
            while u != join {
                let e = self.pred[u];
                match self.dir[u] {
                    Dir::Up => self.flow[e] += delta,
                    Dir::Down => self.flow[e] -= delta,
                }
                u = self.parent[u];
            }
        }
        let leaving = self.pred[leaving_node];
        self.flow[leaving] = 0.0;
        let slot = self.slot_of[leaving];
        self.tree_arcs[slot] = entering;
        self.slot_of[entering] = slot;
        self.slot_of[leaving] = NONE;
        self.in_tree[leaving] = false;
        self.in_tree[entering] = true;
        self.rebuild_tree();
        Ok(())
    }
}

/// Minimum-cost coupling of `a` and `b` under `cost` (rows = sources).
///
/// Both marginals must be nonnegative with equal totals (up to rounding).
pub fn solve_transport(a: &[f64], b: &[f64], cost: &Matrix) -> Result<Matrix> {
    if cost.rows() != a.len() || cost.cols() != b.len() {
        return Err(Error::InvalidParameter(format!(
            "cost matrix is {}x{}, marginals have lengths {} and {}",
            cost.rows(),
            cost.cols(),
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|&x| !(x >= 0.0) || !x.is_finite()) {
        return Err(Error::InvalidParameter("marginals must be finite and nonnegative".into()));
    }
    if cost.as_slice().iter().any(|c| !c.is_finite()) {
        return Err(Error::InvalidParameter("cost matrix must be finite".into()));
    }
    let (sa, sb): (f64, f64) = (a.iter().sum(), b.iter().sum());
    if (sa - sb).abs() > 1e-9 * sa.max(sb).max(1.0) {
        return Err(Error::InvalidParameter(format!(
            "marginal totals differ: {sa} vs {sb}"
        )));
    }

    let rows: Vec<usize> = (0..a.len()).filter(|&i| a[i] > 0.0).collect();
    let cols: Vec<usize> = (0..b.len()).filter(|&j| b[j] > 0.0).collect();
    let mut plan = Matrix::zeros(a.len(), b.len());
    if rows.is_empty() || cols.is_empty() {
        return Ok(plan);
    }
    let sub_cost = Matrix::from_fn(rows.len(), cols.len(), |i, j| cost.get(rows[i], cols[j]));
    let sub_a: Vec<f64> = rows.iter().map(|&i| a[i]).collect();
    let sub_b: Vec<f64> = cols.iter().map(|&j| b[j]).collect();
    let flows = network_simplex(&sub_a, &sub_b, &sub_cost)?;
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            plan.set(r, c, flows.get(i, j));
        }
    }
    Ok(plan)
}

fn network_simplex(a: &[f64], b: &[f64], cost: &Matrix) -> Result<Matrix> {
    let (m, n) = (a.len(), b.len());
    let nodes = m + n + 1;
    let max_abs = cost.max_abs();
    let art_cost = (max_abs + 1.0) * nodes as f64;
    let arc_total = m * n + m + n;
    let mut net = Network {
        m,
        n,
        cost,
        art_cost,
        flow: vec![0.0; arc_total],
        in_tree: vec![false; arc_total],
        tree_arcs: Vec::with_capacity(m + n),
        slot_of: vec![NONE; arc_total],
        parent: vec![NONE; nodes],
        pred: vec![NONE; nodes],
        dir: vec![Dir::Up; nodes],
        depth: vec![0; nodes],
        pi: vec![0.0; nodes],
        adj: vec![Vec::new(); nodes],
    };
    for (i, &supply) in a.iter().enumerate() {
        let e = m * n + i;
        net.flow[e] = supply;
        net.in_tree[e] = true;
        net.slot_of[e] = net.tree_arcs.len();
        net.tree_arcs.push(e);
    }
    for (j, &demand) in b.iter().enumerate() {
        let e = m * n + m + j;
        net.flow[e] = demand;
        net.in_tree[e] = true;
        net.slot_of[e] = net.tree_arcs.len();
        net.tree_arcs.push(e);
    }
    net.rebuild_tree();

    let tol = 1e-12 * max_abs.max(1e-300);
    let block = ((arc_total as f64).sqrt().ceil() as usize).max(10).min(arc_total);
    let max_pivots = 50 * arc_total + 10_000;
    let mut start = 0;
    let mut pivots = 0;
    while let Some(e) = net.find_entering(&mut start, block, tol) {
        net.pivot(e)?;
        pivots += 1;
        if pivots > max_pivots {
            return Err(Error::ResourceLimit(format!(
                "network simplex exceeded {max_pivots} pivots"
            )));
        }
    }
    Ok(Matrix::from_fn(m, n, |i, j| net.flow[i * n + j]))
}
