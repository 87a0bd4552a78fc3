//! Lower bounds on the number of rows still needed.

use fixedbitset::FixedBitSet;

const EPS: f64 = 1e-9;

/// `ceil(uncovered / max_support)`.
pub(crate) fn counting_bound(uncovered: usize, max_support: usize) -> usize {
    if uncovered == 0 {
        0
    } else if max_support == 0 {
        usize::MAX
    } else {
        uncovered.div_ceil(max_support)
    }
}

/// Dual-feasible column weights `y` (every row's weight sum at most 1)
/// give `sum(y) <= optimum`. Also reports each row's slack, which bounds
/// the cost of forcing that row in.
pub(crate) struct DualBound {
    y: Vec<f64>,
    slack: Vec<f64>,
    max_gain: Vec<usize>,
}

impl DualBound {
    pub fn new(num_rows: usize, num_cols: usize) -> Self {
        DualBound {
            y: vec![0.0; num_cols],
            slack: vec![0.0; num_rows],
            max_gain: vec![0; num_cols],
        }
    }

    pub fn weight(&self, c: usize) -> f64 {
        self.y[c]
    }

    /// Value of the dual solution for the subproblem on `uncovered`, with
    /// `gain[r] = |S_r ∩ uncovered|` for allowed rows (zero otherwise).
    /// `order` lists uncovered columns, hardest first.
    pub fn evaluate(
        &mut self,
        row_bits: &[FixedBitSet],
        col_rows: &[Vec<u32>],
        allowed: &FixedBitSet,
        uncovered: &FixedBitSet,
        gain: &[usize],
        order: &[u32],
    ) -> f64 {
        for &c in order {
            let c = c as usize;
            self.max_gain[c] = col_rows[c]
                .iter()
                .filter(|&&r| allowed.contains(r as usize))
                .map(|&r| gain[r as usize])
                .max()
                .unwrap_or(0);
            self.y[c] = 1.0 / self.max_gain[c] as f64;
        }
        for r in allowed.ones() {
            let used: f64 = row_bits[r].intersection(uncovered).map(|c| self.y[c]).sum();
            self.slack[r] = (1.0 - used).max(0.0);
        }
        for &c in order {
            let c = c as usize;
            let delta = col_rows[c]
                .iter()
                .filter(|&&r| allowed.contains(r as usize))
                .map(|&r| self.slack[r as usize])
                .fold(f64::INFINITY, f64::min);
            if delta > EPS {
                self.y[c] += delta;
                for &r in &col_rows[c] {
                    if allowed.contains(r as usize) {
                        self.slack[r as usize] -= delta;
                    }
                }
            }
        }
        order.iter().map(|&c| self.y[c as usize]).sum()
    }
}

/// Smallest integer not below `x`, tolerant to rounding noise.
pub(crate) fn ceil_bound(x: f64) -> usize {
    (x - EPS).ceil().max(0.0) as usize
}

/// Lagrangian relaxation of the covering constraints: for multipliers
/// `u >= 0` on uncovered columns,
/// `L(u) = sum(u) + sum_r min(0, 1 - sum_{c in S_r} u_c) <= optimum`.
/// Multipliers are improved by projected subgradient steps.
pub(crate) struct Lagrangian {
    /// Reduced cost `1 - sum u` of each live row at the best multipliers.
    pub rc: Vec<f64>,
    work_rc: Vec<f64>,
    grad: Vec<f64>,
    best_u: Vec<f64>,
}

/// Live rows restricted to the uncovered columns of a node.
pub(crate) struct NodeRows {
    pub rows: Vec<usize>,
    pub cols: Vec<Vec<u32>>,
}

impl NodeRows {
    pub fn new(row_bits: &[FixedBitSet], allowed: &FixedBitSet, uncovered: &FixedBitSet) -> Self {
        let rows: Vec<usize> = allowed.ones().collect();
        let cols = rows
            .iter()
            .map(|&r| row_bits[r].intersection(uncovered).map(|c| c as u32).collect())
            .collect();
        NodeRows { rows, cols }
    }
}

pub(crate) struct SubgradientParams {
    pub iterations: usize,
    pub step: f64,
    pub patience: usize,
}

impl Lagrangian {
    pub fn new(num_cols: usize, num_live: usize) -> Self {
        Lagrangian {
            rc: vec![0.0; num_live],
            work_rc: vec![0.0; num_live],
            grad: vec![0.0; num_cols],
            best_u: vec![0.0; num_cols],
        }
    }

    fn value(&mut self, node: &NodeRows, cols: &[u32], u: &[f64]) -> f64 {
        let mut total: f64 = cols.iter().map(|&c| u[c as usize]).sum();
        for (i, sup) in node.cols.iter().enumerate() {
            let rc = 1.0 - sup.iter().map(|&c| u[c as usize]).sum::<f64>();
            self.work_rc[i] = rc;
            if rc < 0.0 {
                total += rc;
            }
        }
        total
    }

    /// Improves `u` (indexed by column) towards proving `target`. Returns the
    /// best bound found; `u` and `rc` are left at the maximising multipliers.
    pub fn run(&mut self, node: &NodeRows, cols: &[u32], u: &mut [f64], target: f64, p: &SubgradientParams) -> f64 {
        if self.work_rc.len() < node.rows.len() {
            self.work_rc.resize(node.rows.len(), 0.0);
            self.rc.resize(node.rows.len(), 0.0);
        }
        let mut step = p.step;
        let mut best = f64::NEG_INFINITY;
        let mut since_best = 0;
        for it in 0..=p.iterations {
            let l = self.value(node, cols, u);
            if l > best + EPS {
                best = l;
                since_best = 0;
                for &c in cols {
                    self.best_u[c as usize] = u[c as usize];
                }
                self.rc[..node.rows.len()].copy_from_slice(&self.work_rc[..node.rows.len()]);
                if ceil_bound(best) as f64 >= target {
                    break;
                }
            } else {
                since_best += 1;
                if since_best >= p.patience {
                    step /= 2.0;
                    since_best = 0;
                }
            }
            if it == p.iterations || step < 1e-4 {
                break;
            }
            for &c in cols {
                self.grad[c as usize] = 1.0;
            }
            for (i, sup) in node.cols.iter().enumerate() {
                if self.work_rc[i] < 0.0 {
                    for &c in sup {
                        self.grad[c as usize] -= 1.0;
                    }
                }
            }
            let mut norm = 0.0;
            for &c in cols {
                let c = c as usize;
                if u[c] <= 0.0 && self.grad[c] < 0.0 {
                    self.grad[c] = 0.0;
                }
                norm += self.grad[c] * self.grad[c];
            }
            if norm == 0.0 {
                break;
            }
            let t = step * (target - l).max(0.05) / norm;
            for &c in cols {
                let c = c as usize;
                u[c] = (u[c] + t * self.grad[c]).max(0.0);
            }
        }
        for &c in cols {
            u[c as usize] = self.best_u[c as usize];
        }
        best
    }
}
