//! Column matroids of integer matrices, described by their circuits, and an
//! isomorphism search over column bijections.

use std::collections::HashSet;
use std::ops::ControlFlow;

use itertools::Itertools;

use super::{SystemError, UnimodularSystem};
use crate::exactmat::{self, rank_small, IntMatrix};

/// Largest ground set handled; subsets are `u32` bitmasks.
pub const MAX_ELEMENTS: usize = 32;

/// The matroid on the columns of a matrix, with all of its circuits.
#[derive(Debug, Clone)]
pub struct ColumnMatroid {
    size: usize,
    rank: usize,
    circuits: Vec<u32>,
    circuit_set: HashSet<u32>,
    /// `profile[e][k]` = number of circuits of size `k` containing `e`.
    profile: Vec<Vec<u32>>,
}

impl ColumnMatroid {
    pub fn from_matrix(m: &IntMatrix) -> Result<Self, SystemError> {
        if m.cols() > MAX_ELEMENTS {
            return Err(SystemError::TooLarge(m.cols()));
        }
        let small = m.to_i64_rows();
        let cols = m.cols();
        let rank_of = |mask: u32| -> usize {
            let idx: Vec<usize> = (0..cols).filter(|&c| mask >> c & 1 == 1).collect();
            if let Some(rows) = &small {
                let sub: Vec<Vec<i64>> = rows
                    .iter()
                    .map(|r| idx.iter().map(|&c| r[c]).collect())
                    .collect();
                if let Some(r) = rank_small(&sub) {
                    return r;
                }
            }
            exactmat::rank(&m.select_columns(&idx))
        };
        let rank = rank_of(if cols == 32 { u32::MAX } else { (1u32 << cols) - 1 });
        Ok(Self::from_rank_oracle(cols, rank, |mask| rank_of(mask) == mask.count_ones() as usize))
    }

    /// Builds the matroid from an independence test on bitmasks.
    pub fn from_rank_oracle(size: usize, rank: usize, independent: impl Fn(u32) -> bool) -> Self {
        let mut circuits: Vec<u32> = Vec::new();
        // A dependent set avoiding every smaller circuit is itself a circuit.
        for k in 1..=(rank + 1).min(size) {
            for combo in (0..size).combinations(k) {
                let mask = combo.iter().fold(0u32, |acc, &e| acc | 1 << e);
                if circuits.iter().any(|&c| c & mask == c) {
                    continue;
                }
                if !independent(mask) {
                    circuits.push(mask);
                }
            }
        }
        let mut profile = vec![vec![0u32; size + 2]; size];
        for &c in &circuits {
            let k = c.count_ones() as usize;
            for (e, row) in profile.iter_mut().enumerate() {
                if c >> e & 1 == 1 {
                    row[k] += 1;
                }
            }
        }
        let circuit_set = circuits.iter().copied().collect();
        Self {
            size,
            rank,
            circuits,
            circuit_set,
            profile,
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn circuits(&self) -> &[u32] {
        &self.circuits
    }

    pub fn is_circuit(&self, mask: u32) -> bool {
        self.circuit_set.contains(&mask)
    }

    /// Number of circuits of each size, indexed by size.
    pub fn circuit_size_counts(&self) -> Vec<u32> {
        let mut counts = vec![0u32; self.size + 2];
        for &c in &self.circuits {
            counts[c.count_ones() as usize] += 1;
        }
        counts
    }

    /// Independent iff the set contains no circuit.
    pub fn is_independent(&self, mask: u32) -> bool {
        !self.circuits.iter().any(|&c| c & mask == c)
    }

    /// Cheap isomorphism invariants: size, rank, circuit counts, element profiles.
    pub fn invariants_match(&self, other: &ColumnMatroid) -> bool {
        if self.size != other.size
            || self.rank != other.rank
            || self.circuits.len() != other.circuits.len()
            || self.circuit_size_counts() != other.circuit_size_counts()
        {
            return false;
        }
        let mut a = self.profile.clone();
        let mut b = other.profile.clone();
        a.sort();
        b.sort();
        a == b
    }

    /// Whether `map` (element of `self` → element of `other`) carries circuits onto circuits.
    pub fn is_isomorphism(&self, other: &ColumnMatroid, map: &[usize]) -> bool {
        self.size == other.size
            && self.circuits.len() == other.circuits.len()
            && map.iter().all_unique()
            && self
                .circuits
                .iter()
                .all(|&c| other.is_circuit(image(c, map)))
    }

    /// Visits every isomorphism `self → other` in a deterministic order until
    /// the callback breaks.
    pub fn for_each_isomorphism<B>(
        &self,
        other: &ColumnMatroid,
        mut visit: impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> Option<B> {
        if !self.invariants_match(other) {
            return None;
        }
        let order = self.search_order();
        // closing[k]: circuits whose last element in `order` sits at position k.
        let mut pos = vec![0; self.size];
        for (k, &e) in order.iter().enumerate() {
            pos[e] = k;
        }
        let mut closing = vec![Vec::new(); self.size];
        for &c in &self.circuits {
            let last = (0..self.size)
                .filter(|&e| c >> e & 1 == 1)
                .max_by_key(|&e| pos[e])
                .expect("circuits are nonempty");
            closing[pos[last]].push(c);
        }
        let mut map = vec![usize::MAX; self.size];
        let mut used = vec![false; other.size];
        let mut search = Search {
            a: self,
            b: other,
            order: &order,
            closing: &closing,
            map: &mut map,
            used: &mut used,
        };
        match search.extend(0, &mut visit) {
            ControlFlow::Break(b) => Some(b),
            ControlFlow::Continue(()) => None,
        }
    }

    /// The first isomorphism found, if any.
    pub fn find_isomorphism(&self, other: &ColumnMatroid) -> Option<Vec<usize>> {
        let identity: Vec<usize> = (0..self.size).collect();
        if self.invariants_match(other) && self.is_isomorphism(other, &identity) {
            return Some(identity);
        }
        self.for_each_isomorphism(other, |m| ControlFlow::Break(m.to_vec()))
    }

    /// Greedy order that closes circuits as early as possible.
    fn search_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.size);
        let mut placed = 0u32;
        while order.len() < self.size {
            let best = (0..self.size)
                .filter(|&e| placed >> e & 1 == 0)
                .max_by_key(|&e| {
                    let with = placed | 1 << e;
                    let closed = self.circuits.iter().filter(|&&c| c >> e & 1 == 1 && c & with == c).count();
                    let touching = self.circuits.iter().filter(|&&c| c >> e & 1 == 1 && c & placed != 0).count();
                    (closed, touching, std::cmp::Reverse(e))
                })
                .expect("an unplaced element remains");
            placed |= 1 << best;
            order.push(best);
        }
        order
    }
}

fn image(mask: u32, map: &[usize]) -> u32 {
    (0..map.len())
        .filter(|&e| mask >> e & 1 == 1)
        .fold(0u32, |acc, e| acc | 1 << map[e])
}

struct Search<'s> {
    a: &'s ColumnMatroid,
    b: &'s ColumnMatroid,
    order: &'s [usize],
    closing: &'s [Vec<u32>],
    map: &'s mut Vec<usize>,
    used: &'s mut Vec<bool>,
}

impl Search<'_> {
    fn extend<B>(&mut self, k: usize, visit: &mut impl FnMut(&[usize]) -> ControlFlow<B>) -> ControlFlow<B> {
        if k == self.order.len() {
            return visit(self.map);
        }
        let e = self.order[k];
        for cand in 0..self.b.size {
            if self.used[cand] || self.a.profile[e] != self.b.profile[cand] {
                continue;
            }
            self.map[e] = cand;
            if self.closing[k].iter().all(|&c| self.b.is_circuit(image(c, self.map))) {
                self.used[cand] = true;
                self.extend(k + 1, visit)?;
                self.used[cand] = false;
            }
            self.map[e] = usize::MAX;
        }
        ControlFlow::Continue(())
    }
}

/// A bijection `σ` of columns with `A`'s circuits carried exactly onto `B`'s,
/// where `σ[j]` is the column of `B` matched to column `j` of `A`.
pub fn matroid_equivalent(a: &UnimodularSystem, b: &UnimodularSystem) -> Result<Option<Vec<usize>>, SystemError> {
    if a.len() != b.len() {
        return Ok(None);
    }
    let ma = ColumnMatroid::from_matrix(a.matrix())?;
    let mb = ColumnMatroid::from_matrix(b.matrix())?;
    Ok(ma.find_isomorphism(&mb))
}
