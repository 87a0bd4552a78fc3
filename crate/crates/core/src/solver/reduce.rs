//! Root reductions: forced rows, dominated rows and dominated columns.

use fixedbitset::FixedBitSet;

use super::CoverProblem;

/// A reduced instance. Local row `i` is original row `rows[i]`; local column
/// `j` is original column `cols[j]`.
pub(crate) struct Reduced {
    pub forced: Vec<usize>,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub row_bits: Vec<FixedBitSet>,
    pub col_rows: Vec<Vec<u32>>,
}

impl Reduced {
    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }
}

struct Work {
    row_bits: Vec<FixedBitSet>,
    col_bits: Vec<FixedBitSet>,
    live_rows: FixedBitSet,
    live_cols: FixedBitSet,
    forced: Vec<usize>,
}

impl Work {
    fn support(&self, r: usize) -> FixedBitSet {
        let mut s = self.row_bits[r].clone();
        s.intersect_with(&self.live_cols);
        s
    }

    fn rows_of(&self, c: usize) -> FixedBitSet {
        let mut s = self.col_bits[c].clone();
        s.intersect_with(&self.live_rows);
        s
    }

    fn take_row(&mut self, r: usize) {
        self.forced.push(r);
        self.live_cols.difference_with(&self.row_bits[r]);
        self.live_rows.set(r, false);
    }

    /// Includes rows that are the only cover of some live column.
    fn force(&mut self) -> bool {
        let mut changed = false;
        let cols: Vec<usize> = self.live_cols.ones().collect();
        for c in cols {
            if !self.live_cols.contains(c) {
                continue;
            }
            let rows = self.rows_of(c);
            if rows.count_ones(..) == 1 {
                let r = rows.minimum().expect("one row");
                self.take_row(r);
                changed = true;
            }
        }
        changed
    }

    /// Removes rows whose live support is empty or contained in another
    /// live row's support; of two equal rows the lower index survives.
    fn drop_rows(&mut self) -> bool {
        let mut changed = false;
        let rows: Vec<usize> = self.live_rows.ones().collect();
        for r in rows {
            let sr = self.support(r);
            let Some(pivot) = sr
                .ones()
                .min_by_key(|&c| (self.col_bits[c].intersection_count(&self.live_rows), c))
            else {
                self.live_rows.set(r, false);
                changed = true;
                continue;
            };
            let len = sr.count_ones(..);
            let dominated = self.rows_of(pivot).ones().any(|s| {
                if s == r {
                    return false;
                }
                let ss = self.support(s);
                let slen = ss.count_ones(..);
                sr.is_subset(&ss) && (slen > len || s < r)
            });
            if dominated {
                self.live_rows.set(r, false);
                changed = true;
            }
        }
        changed
    }

    /// Removes column `d` when some other live column `c` has its covering
    /// rows contained in those of `d`: covering `c` then covers `d`.
    fn drop_cols(&mut self) -> bool {
        let mut changed = false;
        let cols: Vec<usize> = self.live_cols.ones().collect();
        for d in cols {
            let rd = self.rows_of(d);
            let nd = rd.count_ones(..);
            let mut candidates = FixedBitSet::with_capacity(self.live_cols.len());
            for r in rd.ones() {
                candidates.union_with(&self.row_bits[r]);
            }
            candidates.intersect_with(&self.live_cols);
            let dominated = candidates.ones().any(|c| {
                if c == d {
                    return false;
                }
                let rc = self.rows_of(c);
                let nc = rc.count_ones(..);
                rc.is_subset(&rd) && (nc < nd || c < d)
            });
            if dominated {
                self.live_cols.set(d, false);
                changed = true;
            }
        }
        changed
    }
}

pub(crate) fn reduce(p: &CoverProblem) -> Reduced {
    let m = p.num_rows();
    let k = p.num_cols();
    let row_bits = p.row_bitsets();
    let mut col_bits = vec![FixedBitSet::with_capacity(m); k];
    for (r, s) in p.supports().iter().enumerate() {
        for &c in s {
            col_bits[c as usize].insert(r);
        }
    }
    let mut live_rows = FixedBitSet::with_capacity(m);
    live_rows.insert_range(..);
    let mut live_cols = FixedBitSet::with_capacity(k);
    live_cols.insert_range(..);
    let mut w = Work {
        row_bits,
        col_bits,
        live_rows,
        live_cols,
        forced: Vec::new(),
    };
    loop {
        let a = w.force();
        let b = w.drop_rows();
        let c = w.drop_cols();
        if !(a || b || c) {
            break;
        }
    }

    let rows: Vec<usize> = w.live_rows.ones().collect();
    let cols: Vec<usize> = w.live_cols.ones().collect();
    let mut col_pos = vec![usize::MAX; k];
    for (j, &c) in cols.iter().enumerate() {
        col_pos[c] = j;
    }
    let mut col_rows = vec![Vec::new(); cols.len()];
    let row_bits = rows
        .iter()
        .enumerate()
        .map(|(i, &r)| {
            let mut b = FixedBitSet::with_capacity(cols.len());
            for c in w.row_bits[r].ones().filter(|&c| col_pos[c] != usize::MAX) {
                b.insert(col_pos[c]);
                col_rows[col_pos[c]].push(i as u32);
            }
            b
        })
        .collect();
    w.forced.sort_unstable();
    Reduced {
        forced: w.forced,
        rows,
        cols,
        row_bits,
        col_rows,
    }
}
