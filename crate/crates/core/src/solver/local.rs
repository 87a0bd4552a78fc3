//! Row-weighting local search for unicost set cover.
//!
//! Alternates dropping the cheapest selected row with adding the best row
//! for a random uncovered column. Uncovered columns gain weight every step,
//! steering the search out of local minima; configuration checking stops a
//! row from re-entering before one of its neighbours changed.

use std::time::Instant;

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::reduce::Reduced;

/// Moves without improvement after which the search gives up.
const STALL_STEPS: u64 = 200_000;

struct State<'a> {
    supports: Vec<Vec<u32>>,
    col_rows: &'a [Vec<u32>],
    weight: Vec<u64>,
    cover_count: Vec<u32>,
    score: Vec<i64>,
    stamp: Vec<u64>,
    conf: Vec<bool>,
    in_sol: Vec<bool>,
    solution: Vec<u32>,
    uncovered: Vec<u32>,
    uncovered_pos: Vec<usize>,
}

impl State<'_> {
    fn mark_uncovered(&mut self, c: usize) {
        self.uncovered_pos[c] = self.uncovered.len();
        self.uncovered.push(c as u32);
    }

    fn mark_covered(&mut self, c: usize) {
        let pos = self.uncovered_pos[c];
        let last = *self.uncovered.last().expect("column was uncovered");
        self.uncovered.swap_remove(pos);
        if last as usize != c {
            self.uncovered_pos[last as usize] = pos;
        }
        self.uncovered_pos[c] = usize::MAX;
    }

    fn touch_neighbours(&mut self, r: usize) {
        for &c in &self.supports[r] {
            for &s in &self.col_rows[c as usize] {
                self.conf[s as usize] = true;
            }
        }
    }

    fn add(&mut self, r: usize, step: u64) {
        for i in 0..self.supports[r].len() {
            let c = self.supports[r][i] as usize;
            let w = self.weight[c] as i64;
            match self.cover_count[c] {
                0 => {
                    for &s in &self.col_rows[c] {
                        if s as usize != r {
                            self.score[s as usize] -= w;
                        }
                    }
                    self.mark_covered(c);
                }
                1 => {
                    let owner = self.col_rows[c]
                        .iter()
                        .copied()
                        .find(|&s| self.in_sol[s as usize])
                        .expect("covered column has an owner");
                    self.score[owner as usize] += w;
                }
                _ => {}
            }
            self.cover_count[c] += 1;
        }
        self.score[r] = -self.score[r];
        self.in_sol[r] = true;
        self.solution.push(r as u32);
        self.stamp[r] = step;
        self.touch_neighbours(r);
    }

    fn remove(&mut self, r: usize, step: u64) {
        self.in_sol[r] = false;
        let pos = self.solution.iter().position(|&s| s as usize == r).expect("row selected");
        self.solution.swap_remove(pos);
        for i in 0..self.supports[r].len() {
            let c = self.supports[r][i] as usize;
            let w = self.weight[c] as i64;
            self.cover_count[c] -= 1;
            match self.cover_count[c] {
                0 => {
                    for &s in &self.col_rows[c] {
                        if s as usize != r {
                            self.score[s as usize] += w;
                        }
                    }
                    self.mark_uncovered(c);
                }
                1 => {
                    let owner = self.col_rows[c]
                        .iter()
                        .copied()
                        .find(|&s| self.in_sol[s as usize])
                        .expect("covered column has an owner");
                    self.score[owner as usize] -= w;
                }
                _ => {}
            }
        }
        self.score[r] = -self.score[r];
        self.stamp[r] = step;
        self.touch_neighbours(r);
        self.conf[r] = false;
    }

    /// Selected row with the highest score, oldest first on ties.
    fn pick_removal(&self, tabu: Option<usize>) -> Option<usize> {
        self.solution
            .iter()
            .map(|&r| r as usize)
            .filter(|&r| Some(r) != tabu || self.solution.len() == 1)
            .max_by_key(|&r| (self.score[r], std::cmp::Reverse(self.stamp[r]), std::cmp::Reverse(r)))
    }

    fn pick_addition(&self, c: usize) -> usize {
        let best = |only_conf: bool| {
            self.col_rows[c]
                .iter()
                .map(|&r| r as usize)
                .filter(|&r| !only_conf || self.conf[r])
                .max_by_key(|&r| (self.score[r], std::cmp::Reverse(self.stamp[r]), std::cmp::Reverse(r)))
        };
        best(true).or_else(|| best(false)).expect("every column has a row")
    }
}

fn greedy_start(red: &Reduced) -> Vec<u32> {
    let mut uncovered = FixedBitSet::with_capacity(red.num_cols());
    uncovered.insert_range(..);
    let mut out = Vec::new();
    while !uncovered.is_clear() {
        let (r, _) = red
            .row_bits
            .iter()
            .enumerate()
            .map(|(r, b)| (r, b.intersection_count(&uncovered)))
            .fold((0, 0), |acc, x| if x.1 > acc.1 { x } else { acc });
        uncovered.difference_with(&red.row_bits[r]);
        out.push(r as u32);
    }
    out
}

/// Runs at most `max_steps` moves; stops early once a cover of `target`
/// rows is found or the search stalls. Returns the best cover seen (local row indices) and the
/// number of moves used.
pub(crate) fn improve(
    red: &Reduced,
    target: usize,
    max_steps: u64,
    deadline: Option<Instant>,
    seed: u64,
) -> (Vec<u32>, u64) {
    let m = red.num_rows();
    let k = red.num_cols();
    let start = greedy_start(red);
    if k == 0 || start.len() <= target || max_steps == 0 {
        return (start, 0);
    }
    let mut st = State {
        supports: red
            .row_bits
            .iter()
            .map(|b| b.ones().map(|c| c as u32).collect())
            .collect(),
        col_rows: &red.col_rows,
        weight: vec![1; k],
        cover_count: vec![0; k],
        score: vec![0; m],
        stamp: vec![0; m],
        conf: vec![true; m],
        in_sol: vec![false; m],
        solution: Vec::new(),
        uncovered: Vec::with_capacity(k),
        uncovered_pos: vec![usize::MAX; k],
    };
    for c in 0..k {
        st.mark_uncovered(c);
    }
    for r in 0..m {
        st.score[r] = st.supports[r].len() as i64;
    }
    for &r in &start {
        st.add(r as usize, 0);
    }
    let mut best = start;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tabu = None;
    let mut step = 0u64;
    let mut last_gain = 0u64;
    while step < max_steps && step - last_gain < STALL_STEPS {
        if step.is_multiple_of(1024) && deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        step += 1;
        while st.uncovered.is_empty() {
            if st.solution.len() < best.len() {
                best = st.solution.clone();
                last_gain = step;
                if best.len() <= target {
                    return (best, step);
                }
            }
            let r = st.pick_removal(None).expect("nonempty cover");
            st.remove(r, step);
        }
        if let Some(r) = st.pick_removal(tabu) {
            st.remove(r, step);
        }
        let c = st.uncovered[rng.random_range(0..st.uncovered.len())] as usize;
        let r = st.pick_addition(c);
        st.add(r, step);
        tabu = Some(r);
        for i in 0..st.uncovered.len() {
            let c = st.uncovered[i] as usize;
            st.weight[c] += 1;
            for &s in &st.col_rows[c] {
                st.score[s as usize] += 1;
            }
        }
    }
    if st.uncovered.is_empty() && st.solution.len() < best.len() {
        best = st.solution.clone();
    }
    (best, step)
}
