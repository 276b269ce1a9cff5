//! Minimum exact cover of up to 64 items by bitmask candidates.
//!
//! Branches on the lowest uncovered item; every usable candidate must have
//! that item as its lowest member, so candidates are grouped by lowest bit.
//! Results are memoized on the covered set.

use std::collections::HashMap;

pub struct ExactCover {
    full: u64,
    by_lowest: Vec<Vec<u64>>,
    memo: HashMap<u64, u32>,
}

const INFEASIBLE: u32 = u32::MAX;

impl ExactCover {
    /// `items <= 64`; duplicate candidates are ignored.
    pub fn new(items: usize, candidates: impl IntoIterator<Item = u64>) -> Self {
        assert!(items <= 64, "at most 64 items");
        let full = if items == 64 {
            u64::MAX
        } else {
            (1u64 << items) - 1
        };
        let mut by_lowest = vec![Vec::new(); items];
        for c in candidates {
            if c == 0 || c & !full != 0 {
                continue;
            }
            let low = c.trailing_zeros() as usize;
            if !by_lowest[low].contains(&c) {
                by_lowest[low].push(c);
            }
        }
        for list in &mut by_lowest {
            // larger pieces first finds good bounds early
            list.sort_by_key(|c| std::cmp::Reverse(c.count_ones()));
        }
        ExactCover {
            full,
            by_lowest,
            memo: HashMap::new(),
        }
    }

    fn best(&mut self, covered: u64) -> u32 {
        if covered == self.full {
            return 0;
        }
        if let Some(&v) = self.memo.get(&covered) {
            return v;
        }
        let low = (!covered).trailing_zeros() as usize;
        let mut best = INFEASIBLE;
        for k in 0..self.by_lowest[low].len() {
            let c = self.by_lowest[low][k];
            if c & covered != 0 {
                continue;
            }
            let sub = self.best(covered | c);
            if sub != INFEASIBLE {
                best = best.min(sub + 1);
            }
        }
        self.memo.insert(covered, best);
        best
    }

    /// Minimum number of candidates partitioning all items.
    pub fn minimum(&mut self) -> Option<usize> {
        let b = self.best(0);
        (b != INFEASIBLE).then_some(b as usize)
    }

    /// Up to `limit` optimal partitions; the flag tells whether all were listed.
    pub fn optimal_partitions(&mut self, limit: usize) -> (Vec<Vec<u64>>, bool) {
        let mut out = Vec::new();
        if self.minimum().is_none() {
            return (out, true);
        }
        let mut stack = Vec::new();
        let complete = self.collect(0, &mut stack, &mut out, limit);
        (out, complete)
    }

    fn collect(
        &mut self,
        covered: u64,
        stack: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
        limit: usize,
    ) -> bool {
        if covered == self.full {
            if out.len() >= limit {
                return false;
            }
            out.push(stack.clone());
            return true;
        }
        let target = self.best(covered);
        let low = (!covered).trailing_zeros() as usize;
        for k in 0..self.by_lowest[low].len() {
            let c = self.by_lowest[low][k];
            if c & covered != 0 {
                continue;
            }
            let sub = self.best(covered | c);
            if sub == INFEASIBLE || sub + 1 != target {
                continue;
            }
            stack.push(c);
            let ok = self.collect(covered | c, stack, out, limit);
            stack.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}
