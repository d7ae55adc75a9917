//! Dynamic programming over placed-subsets of the required blocks.
//!
//! A reachable placed-set has at most one partially placed contiguity set,
//! so the open group is a function of the subset alone and the DP state is
//! just the bitmask. Tables are filled layer by layer (by popcount) in pull
//! form, so every row of a layer can be computed independently.

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::ExpandedGraph;

/// Largest graph the exact subset DP accepts.
pub const DP_GUARD: usize = 20;

const NO_GROUP: u8 = u8::MAX;
const UNREACHED_POS: u16 = u16::MAX;

pub(crate) struct SubsetSpace {
    n: usize,
    preds: Vec<u32>,
    group_masks: Vec<u32>,
    /// Partially placed group for each subset, or `NO_GROUP`.
    open: Vec<u8>,
    /// Subsets bucketed by popcount.
    layers: Vec<Vec<u32>>,
}

impl SubsetSpace {
    pub(crate) fn new(graph: &ExpandedGraph) -> Result<Self> {
        let n = graph.len();
        if n > DP_GUARD {
            return Err(Error::TooLarge {
                nodes: n,
                limit: DP_GUARD,
            });
        }
        let preds = (0..n)
            .map(|v| graph.preds(v).iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();
        let group_masks: Vec<u32> = graph
            .contiguity_sets()
            .iter()
            .map(|set| set.iter().fold(0u32, |m, &u| m | 1 << u))
            .collect();

        let full = 1usize << n;
        let mut open = vec![NO_GROUP; full];
        let mut layers = vec![Vec::new(); n + 1];
        for (mask, slot) in open.iter_mut().enumerate() {
            let mask = mask as u32;
            if let Some(g) = group_masks.iter().position(|&gm| {
                let inside = gm & mask;
                inside != 0 && inside != gm
            }) {
                *slot = g as u8;
            }
            layers[mask.count_ones() as usize].push(mask);
        }
        Ok(SubsetSpace {
            n,
            preds,
            group_masks,
            open,
            layers,
        })
    }

    /// Whether `node` (not in `placed`) may be placed next.
    #[inline]
    fn placeable(&self, placed: u32, node: usize) -> bool {
        if self.preds[node] & !placed != 0 {
            return false;
        }
        match self.open[placed as usize] {
            NO_GROUP => true,
            g => self.group_masks[g as usize] & (1 << node) != 0,
        }
    }

    fn full(&self) -> u32 {
        ((1u64 << self.n) - 1) as u32
    }

    /// Number of accepted orderings.
    pub(crate) fn count(&self, exec: Exec) -> u64 {
        let mut table = vec![0u64; 1 << self.n];
        table[0] = 1;
        let mut buf = Vec::new();
        for layer in &self.layers[1..] {
            buf.clear();
            buf.resize(layer.len(), 0u64);
            let prev = &table;
            exec.fill_rows(layer, &mut buf, 1, |&mask, row| {
                let mut total = 0u64;
                let mut rest = mask;
                while rest != 0 {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let before = mask & !(1 << t);
                    let ways = prev[before as usize];
                    if ways != 0 && self.placeable(before, t) {
                        total += ways;
                    }
                }
                row[0] = total;
            });
            for (&mask, &v) in layer.iter().zip(&buf) {
                table[mask as usize] = v;
            }
        }
        table[self.full() as usize]
    }

    /// Longest common subsequence between `target` and any accepted ordering.
    ///
    /// `target` is a sequence of node indices and may repeat nodes. For a
    /// placed-set and a match count `c`, the table keeps the earliest
    /// position in `target` at which some valid prefix with that set can have
    /// matched `c` lines; an earlier end position dominates a later one.
    pub(crate) fn best_lcs(&self, target: &[usize], exec: Exec) -> Result<usize> {
        if target.len() >= UNREACHED_POS as usize {
            return Err(Error::SubmissionTooLong {
                lines: target.len(),
                limit: UNREACHED_POS as usize - 1,
            });
        }
        let len = target.len();
        // next[t][e]: first position >= e holding node t, or UNREACHED_POS.
        let mut next = vec![vec![UNREACHED_POS; len + 1]; self.n];
        for e in (0..len).rev() {
            for row in next.iter_mut() {
                row[e] = row[e + 1];
            }
            next[target[e]][e] = e as u16;
        }

        let width = self.n + 1;
        let mut table = vec![UNREACHED_POS; (1usize << self.n) * width];
        table[0] = 0;
        let mut buf = Vec::new();
        for layer in &self.layers[1..] {
            buf.clear();
            buf.resize(layer.len() * width, UNREACHED_POS);
            let prev = &table;
            let next = &next;
            exec.fill_rows(layer, &mut buf, width, |&mask, row| {
                let mut rest = mask;
                while rest != 0 {
                    let t = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    let before = mask & !(1 << t);
                    let from = &prev[before as usize * width..][..width];
                    // Column 0 is reached by every reachable subset.
                    if from[0] == UNREACHED_POS || !self.placeable(before, t) {
                        continue;
                    }
                    for c in 0..width {
                        let skip = from[c];
                        if skip < row[c] {
                            row[c] = skip;
                        }
                        if c > 0 && from[c - 1] != UNREACHED_POS {
                            let hit = next[t][from[c - 1] as usize];
                            if hit != UNREACHED_POS && hit + 1 < row[c] {
                                row[c] = hit + 1;
                            }
                        }
                    }
                }
            });
            for (r, &mask) in layer.iter().enumerate() {
                table[mask as usize * width..][..width].copy_from_slice(&buf[r * width..][..width]);
            }
        }
        let last = &table[self.full() as usize * width..][..width];
        if last[0] == UNREACHED_POS {
            return Err(Error::NoValidOrdering);
        }
        Ok(last.iter().rposition(|&e| e != UNREACHED_POS).unwrap_or(0))
    }
}
