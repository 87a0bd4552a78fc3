use super::bound::counting_bound;
use super::{CoverProblem, CoverSolution, Status};

/// Largest-uncovered-support-first greedy cover, ties to the lowest row.
pub fn solve_greedy(p: &CoverProblem) -> CoverSolution {
    let rows = p.row_bitsets();
    let mut uncovered = fixedbitset::FixedBitSet::with_capacity(p.num_cols());
    uncovered.insert_range(..);
    let mut selected = Vec::new();
    while !uncovered.is_clear() {
        let mut best = (0, 0);
        for (r, s) in rows.iter().enumerate() {
            let gain = s.intersection_count(&uncovered);
            if gain > best.1 {
                best = (r, gain);
            }
        }
        selected.push(best.0);
        uncovered.difference_with(&rows[best.0]);
    }
    selected.sort_unstable();
    let max_support = p.supports().iter().map(Vec::len).max().unwrap_or(0);
    CoverSolution {
        objective: selected.len(),
        selected,
        status: Status::Greedy,
        lower_bound: counting_bound(p.num_cols(), max_support),
        nodes: 0,
    }
}
