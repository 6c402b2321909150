//! Exhaustive searches used as ground truth for small systems.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use thiserror::Error;

use crate::designs::{BlockSystem, Kind, Point};
use crate::goodness::{closes_short_block, first_violation, forbidden_next, Sequencing};
use crate::sequencer::tail;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("n = {n} exceeds the exhaustive-search limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("expected an unordered triple system, got {kind} with k={k}")]
    NotTripleSystem { kind: Kind, k: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleLimits {
    pub backtrack: usize,
    pub max_ell: usize,
    pub brute_sequenceable: usize,
    pub enumerate: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits {
            backtrack: 16,
            max_ell: 12,
            brute_sequenceable: 9,
            enumerate: 8,
        }
    }
}

fn guard(n: usize, limit: usize) -> Result<(), OracleError> {
    if n > limit {
        return Err(OracleError::TooLarge { n, limit });
    }
    Ok(())
}

struct Search<'a> {
    sys: &'a BlockSystem,
    ell: usize,
    cyclic: bool,
    order: Vec<Point>,
    pos: Vec<usize>,
}

impl Search<'_> {
    fn allowed(&self, z: Point) -> bool {
        if self.pos[z as usize] != usize::MAX {
            return false;
        }
        if self.cyclic {
            let n = self.sys.n();
            !closes_short_block(self.sys, &self.pos, z, self.order.len(), self.ell, n, true)
        } else {
            !forbidden_next(self.sys, tail(&self.order, self.ell.saturating_sub(1))).contains(&z)
        }
    }

    fn push(&mut self, z: Point) {
        self.pos[z as usize] = self.order.len();
        self.order.push(z);
    }

    fn pop(&mut self) {
        let z = self.order.pop().expect("non-empty");
        self.pos[z as usize] = usize::MAX;
    }

    fn dfs(&mut self) -> bool {
        let n = self.sys.n();
        if self.order.len() == n {
            return true;
        }
        for z in 0..n as Point {
            if self.allowed(z) {
                self.push(z);
                if self.dfs() {
                    return true;
                }
                self.pop();
            }
        }
        false
    }
}

/// Some `ell`-good sequencing, or `None` when none exists. Cyclic searches
/// put point 0 first, which loses nothing since rotations preserve goodness.
pub fn backtrack_sequencing(
    sys: &BlockSystem,
    ell: usize,
    cyclic: bool,
    limits: &OracleLimits,
) -> Result<Option<Sequencing>, OracleError> {
    let n = sys.n();
    guard(n, limits.backtrack)?;
    let fresh = || Search {
        sys,
        ell,
        cyclic,
        order: Vec::with_capacity(n),
        pos: vec![usize::MAX; n],
    };
    let mut root = fresh();
    if cyclic {
        root.push(0);
    }
    let prefix = root.order.clone();
    let found = (0..n as Point)
        .into_par_iter()
        .filter(|&z| root.allowed(z) || (n == prefix.len()))
        .find_map_first(|z| {
            let mut s = fresh();
            prefix.iter().for_each(|&p| s.push(p));
            s.push(z);
            s.dfs().then(|| s.order.clone())
        });
    let found = match found {
        Some(order) => Some(order),
        None if n == prefix.len() => Some(prefix),
        None => None,
    };
    Ok(found.map(|order| {
        let seq = Sequencing::from_order(order).expect("search yields a permutation");
        debug_assert!(first_violation(sys, &seq, ell, cyclic).is_none());
        seq
    }))
}

/// Largest `ell` admitting a good sequencing. Cyclic answers are capped at `n - 1`.
pub fn oracle_max_ell(sys: &BlockSystem, cyclic: bool, limits: &OracleLimits) -> Result<usize, OracleError> {
    let n = sys.n();
    guard(n, limits.max_ell)?;
    let cap = if cyclic { n.saturating_sub(1).max(1) } else { n };
    let (mut lo, mut hi) = (1, cap);
    while lo < hi {
        let mid = (lo + hi).div_ceil(2);
        if backtrack_sequencing(sys, mid, cyclic, limits)?.is_some() {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Ok(lo)
}

fn require_triples(sys: &BlockSystem) -> Result<(), OracleError> {
    if sys.k() != 3 || sys.kind().ordered() {
        return Err(OracleError::NotTripleSystem {
            kind: sys.kind(),
            k: sys.k(),
        });
    }
    Ok(())
}

/// Whether the point set is the union of pairwise disjoint blocks, by trying
/// every family of the right size.
pub fn naive_is_disjoint_union(sys: &BlockSystem, points: &[Point]) -> bool {
    if !points.len().is_multiple_of(3) {
        return false;
    }
    let set: BTreeSet<Point> = points.iter().copied().collect();
    let inside: Vec<&[Point]> = sys
        .blocks()
        .iter()
        .map(|b| b.points())
        .filter(|b| b.iter().all(|p| set.contains(p)))
        .collect();
    inside.into_iter().combinations(points.len() / 3).any(|family| {
        let union: BTreeSet<Point> = family.iter().flat_map(|b| b.iter().copied()).collect();
        union == set
    })
}

/// The first segment of length `3r` (by start, then length) that is a union
/// of disjoint blocks, checked naively.
pub fn naive_bad_segment(sys: &BlockSystem, seq: &Sequencing) -> Option<(usize, usize)> {
    let n = seq.len();
    (0..n).find_map(|start| {
        (1..=(n - start) / 3)
            .map(|r| 3 * r)
            .find(|&len| naive_is_disjoint_union(sys, &seq.order()[start..start + len]))
            .map(|len| (start, len))
    })
}

fn sequenceable_dfs(sys: &BlockSystem, order: &mut Vec<Point>, used: &mut [bool]) -> bool {
    let n = sys.n();
    if order.len() == n {
        return true;
    }
    for z in 0..n as Point {
        if used[z as usize] {
            continue;
        }
        order.push(z);
        let end = order.len();
        let bad = (1..=end / 3).any(|r| naive_is_disjoint_union(sys, &order[end - 3 * r..]));
        if !bad {
            used[z as usize] = true;
            if sequenceable_dfs(sys, order, used) {
                return true;
            }
            used[z as usize] = false;
        }
        order.pop();
    }
    false
}

/// A sequencing with no segment equal to a union of disjoint blocks, if any.
pub fn brute_sequenceable(sys: &BlockSystem, limits: &OracleLimits) -> Result<Option<Sequencing>, OracleError> {
    require_triples(sys)?;
    guard(sys.n(), limits.brute_sequenceable)?;
    let mut order = Vec::with_capacity(sys.n());
    let mut used = vec![false; sys.n()];
    Ok(sequenceable_dfs(sys, &mut order, &mut used)
        .then(|| Sequencing::from_order(order).expect("search yields a permutation")))
}

/// Relabels 3-subsets of `0..n` (as bitmasks) under every permutation of the points.
struct Relabeler {
    tables: Vec<[[u16; 16]; 2]>,
}

impl Relabeler {
    fn new(n: usize) -> Relabeler {
        let tables = (0..n)
            .permutations(n)
            .map(|perm| {
                let image = |bits: usize, shift: usize| -> u16 {
                    (0..4)
                        .filter(|b| bits >> b & 1 == 1 && b + shift < n)
                        .map(|b| 1u16 << perm[b + shift])
                        .fold(0, |a, m| a | m)
                };
                [0, 4].map(|shift| std::array::from_fn(|bits| image(bits, shift)))
            })
            .collect();
        Relabeler { tables }
    }

    fn canonical(&self, blocks: &[u16]) -> Vec<u16> {
        let mut best: Option<Vec<u16>> = None;
        let mut buf = Vec::with_capacity(blocks.len());
        for t in &self.tables {
            buf.clear();
            buf.extend(blocks.iter().map(|&m| t[0][(m & 15) as usize] | t[1][(m >> 4) as usize]));
            buf.sort_unstable();
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        best.unwrap_or_default()
    }
}

/// One representative of every isomorphism class of partial triple systems
/// on `n` points with at most `max_blocks` blocks.
pub fn enumerate_psts(n: usize, max_blocks: usize, limits: &OracleLimits) -> Result<Vec<BlockSystem>, OracleError> {
    guard(n, limits.enumerate)?;
    let triples: Vec<u16> = (0..n)
        .combinations(3)
        .map(|c| c.iter().fold(0u16, |m, &p| m | 1 << p))
        .collect();
    let relabel = Relabeler::new(n);
    let mut level: BTreeSet<Vec<u16>> = BTreeSet::from([Vec::new()]);
    let mut all: Vec<Vec<u16>> = vec![Vec::new()];
    for _ in 0..max_blocks {
        let mut next = BTreeSet::new();
        for rep in &level {
            for &t in &triples {
                if rep.iter().all(|&b| (b & t).count_ones() <= 1) {
                    let mut grown = rep.clone();
                    grown.push(t);
                    next.insert(relabel.canonical(&grown));
                }
            }
        }
        all.extend(next.iter().cloned());
        level = next;
    }
    Ok(all
        .into_iter()
        .map(|masks| {
            let blocks = masks
                .iter()
                .map(|&m| (0..n as Point).filter(|&p| m >> p & 1 == 1).collect())
                .collect();
            BlockSystem::assemble(Kind::Psts, n, 2, 3, 1, blocks).expect("pairwise compatible triples")
        })
        .collect())
}
