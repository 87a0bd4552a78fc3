use std::time::Instant;

use fixedbitset::FixedBitSet;

use super::bound::{ceil_bound, counting_bound, DualBound, Lagrangian, NodeRows, SubgradientParams};
use super::local;
use super::reduce::{reduce, Reduced};
use super::{solve_greedy, Budget, CoverProblem, CoverSolution, Status};
use crate::error::{Error, Result};

/// Seed of the local-search random stream; fixed so solves are reproducible.
const LOCAL_SEARCH_SEED: u64 = 0x5eed_c0de;

const ROOT_PARAMS: SubgradientParams = SubgradientParams {
    iterations: 2000,
    step: 2.0,
    patience: 30,
};
const NODE_PARAMS: SubgradientParams = SubgradientParams {
    iterations: 60,
    step: 0.5,
    patience: 8,
};

struct Search<'a> {
    red: &'a Reduced,
    best: usize,
    best_set: Option<Vec<u32>>,
    chosen: Vec<u32>,
    nodes: u64,
    limit: u64,
    deadline: Option<Instant>,
    aborted: bool,
    dual: DualBound,
    lagrangian: Lagrangian,
    gain: Vec<usize>,
    deg: Vec<usize>,
}

impl Search<'_> {
    fn out_of_budget(&mut self) -> bool {
        if self.nodes >= self.limit {
            return true;
        }
        match self.deadline {
            Some(d) if self.nodes.is_multiple_of(256) => Instant::now() >= d,
            _ => false,
        }
    }

    /// Columns of `uncovered`, fewest allowed covering rows first. Fills
    /// `gain` and `deg`; returns `None` when a column cannot be covered.
    fn profile(&mut self, uncovered: &FixedBitSet, allowed: &mut FixedBitSet) -> Option<Vec<u32>> {
        let red = self.red;
        let rows: Vec<usize> = allowed.ones().collect();
        for r in rows {
            let g = red.row_bits[r].intersection_count(uncovered);
            self.gain[r] = g;
            if g == 0 {
                allowed.set(r, false);
            }
        }
        let mut order: Vec<u32> = Vec::with_capacity(uncovered.count_ones(..));
        for c in uncovered.ones() {
            let d = red.col_rows[c]
                .iter()
                .filter(|&&r| allowed.contains(r as usize))
                .count();
            if d == 0 {
                return None;
            }
            self.deg[c] = d;
            order.push(c as u32);
        }
        order.sort_by_key(|&c| (self.deg[c as usize], c));
        Some(order)
    }

    fn dfs(&mut self, uncovered: &FixedBitSet, mut allowed: FixedBitSet, mut u: Vec<f64>) {
        if self.aborted {
            return;
        }
        if self.out_of_budget() {
            self.aborted = true;
            return;
        }
        self.nodes += 1;
        let depth = self.chosen.len();
        if uncovered.is_clear() {
            if depth < self.best {
                self.best = depth;
                self.best_set = Some(self.chosen.clone());
            }
            return;
        }
        if depth + 1 >= self.best {
            return;
        }
        let Some(order) = self.profile(uncovered, &mut allowed) else {
            return;
        };
        let red = self.red;
        let max_gain = allowed.ones().map(|r| self.gain[r]).max().unwrap_or(0);
        if depth + counting_bound(order.len(), max_gain) >= self.best {
            return;
        }
        let ascent = self
            .dual
            .evaluate(&red.row_bits, &red.col_rows, &allowed, uncovered, &self.gain, &order);
        if depth + ceil_bound(ascent) >= self.best {
            return;
        }

        let node = NodeRows::new(&red.row_bits, &allowed, uncovered);
        let params = if depth == 0 { &ROOT_PARAMS } else { &NODE_PARAMS };
        let target = (self.best - depth) as f64;
        let value = self.lagrangian.run(&node, &order, &mut u, target, params);
        if depth + ceil_bound(value) >= self.best {
            return;
        }
        // Reduced-cost tests: a row whose inclusion cannot pay off is
        // dropped; a row whose exclusion cannot pay off is taken.
        let mut required = None;
        for (i, &r) in node.rows.iter().enumerate() {
            let rc = self.lagrangian.rc[i];
            if rc > 0.0 && depth + ceil_bound(value + rc) >= self.best {
                allowed.set(r, false);
            } else if rc < 0.0 && required.is_none() && depth + ceil_bound(value - rc) >= self.best {
                required = Some(r);
            }
        }

        let candidates = match required {
            Some(r) => vec![r],
            None => {
                let pivot = order
                    .iter()
                    .map(|&c| c as usize)
                    .min_by_key(|&c| {
                        let d = red.col_rows[c]
                            .iter()
                            .filter(|&&r| allowed.contains(r as usize))
                            .count();
                        (d, c)
                    })
                    .expect("nonempty");
                let mut rows: Vec<usize> = red.col_rows[pivot]
                    .iter()
                    .map(|&r| r as usize)
                    .filter(|&r| allowed.contains(r))
                    .collect();
                rows.sort_by_key(|&r| (std::cmp::Reverse(self.gain[r]), r));
                rows
            }
        };

        for r in candidates {
            allowed.set(r, false);
            let mut child = uncovered.clone();
            child.difference_with(&red.row_bits[r]);
            self.chosen.push(r as u32);
            self.dfs(&child, allowed.clone(), u.clone());
            self.chosen.pop();
            if self.aborted || depth + 1 >= self.best {
                return;
            }
        }
    }
}

/// Lower bound for the whole reduced instance and the multipliers that
/// attain it.
fn root_bound(red: &Reduced, upper: usize) -> (usize, Vec<f64>) {
    let m = red.num_rows();
    let k = red.num_cols();
    let mut u = vec![0.0; k];
    if k == 0 {
        return (0, u);
    }
    let mut allowed = FixedBitSet::with_capacity(m);
    allowed.insert_range(..);
    let mut uncovered = FixedBitSet::with_capacity(k);
    uncovered.insert_range(..);
    let mut s = Search {
        red,
        best: usize::MAX,
        best_set: None,
        chosen: Vec::new(),
        nodes: 0,
        limit: 0,
        deadline: None,
        aborted: false,
        dual: DualBound::new(m, k),
        lagrangian: Lagrangian::new(k, m),
        gain: vec![0; m],
        deg: vec![0; k],
    };
    let order = s.profile(&uncovered, &mut allowed).expect("reduced instance is feasible");
    let max_gain = allowed.ones().map(|r| s.gain[r]).max().unwrap_or(0);
    let ascent = s
        .dual
        .evaluate(&red.row_bits, &red.col_rows, &allowed, &uncovered, &s.gain, &order);
    for &c in &order {
        u[c as usize] = s.dual.weight(c as usize);
    }
    let node = NodeRows::new(&red.row_bits, &allowed, &uncovered);
    let value = s.lagrangian.run(&node, &order, &mut u, upper as f64, &ROOT_PARAMS);
    let lb = ceil_bound(ascent)
        .max(ceil_bound(value))
        .max(counting_bound(k, max_gain));
    (lb, u)
}

/// Minimum cover by branch and bound.
///
/// The root is reduced by forced rows and row/column dominance. Greedy and
/// a weighted local search supply the incumbent. Each node branches on the
/// uncovered column with the fewest candidate rows, trying its rows in
/// order of uncovered support; rows already tried are excluded from later
/// siblings. Nodes are pruned with the counting bound and a dual-feasible
/// column-weight bound, which also excludes rows that cannot pay off.
pub fn solve_exact(p: &CoverProblem, budget: Budget) -> Result<CoverSolution> {
    if budget.nodes == 0 || budget.time_limit.is_some_and(|t| t.is_zero()) {
        return Err(Error::range("solver budget must be positive"));
    }
    let deadline = budget.time_limit.map(|t| Instant::now() + t);
    let greedy = solve_greedy(p);
    let red = reduce(p);
    let fixed = red.forced.len();
    let (reduced_lb, root_u) = root_bound(&red, greedy.objective.saturating_sub(fixed));
    let root_lb = fixed + reduced_lb;

    let to_original = |local: &[u32]| -> Vec<usize> {
        let mut sel: Vec<usize> = red.forced.clone();
        sel.extend(local.iter().map(|&r| red.rows[r as usize]));
        sel.sort_unstable();
        sel
    };

    let mut best = greedy.selected.clone();
    let mut nodes = 0u64;
    if best.len() > root_lb {
        let target = root_lb - fixed;
        let steps = budget.nodes / 2;
        let (local_best, used) = local::improve(&red, target, steps, deadline, LOCAL_SEARCH_SEED);
        nodes += used;
        if fixed + local_best.len() < best.len() {
            best = to_original(&local_best);
        }
    }

    let mut status = Status::Optimal;
    let mut lower_bound = best.len();
    if best.len() > root_lb {
        let m = red.num_rows();
        let k = red.num_cols();
        let mut search = Search {
            red: &red,
            best: best.len() - fixed,
            best_set: None,
            chosen: Vec::new(),
            nodes: 0,
            limit: budget.nodes.saturating_sub(nodes).max(1),
            deadline,
            aborted: false,
            dual: DualBound::new(m, k),
            lagrangian: Lagrangian::new(k, m),
            gain: vec![0; m],
            deg: vec![0; k],
        };
        let mut uncovered = FixedBitSet::with_capacity(k);
        uncovered.insert_range(..);
        let mut allowed = FixedBitSet::with_capacity(m);
        allowed.insert_range(..);
        search.dfs(&uncovered, allowed, root_u);
        nodes += search.nodes;
        if let Some(local) = &search.best_set {
            best = to_original(local);
        }
        if search.aborted && best.len() > root_lb {
            status = Status::Feasible;
            lower_bound = root_lb;
        }
    }
    Ok(CoverSolution {
        objective: best.len(),
        selected: best,
        status,
        lower_bound,
        nodes,
    })
}
