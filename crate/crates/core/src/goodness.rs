use std::collections::{BTreeSet, HashMap};

use itertools::Itertools;
use thiserror::Error;

use crate::designs::{Block, BlockSystem, Kind, Point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequencingError {
    #[error("a sequencing needs at least one point")]
    EmptyUniverse,
    #[error("order is not a permutation of 0..{n}")]
    NotAPermutation { n: usize },
    #[error("sequencing has {found} points but the system has {expected}")]
    LengthMismatch { found: usize, expected: usize },
}

/// A permutation of `0..n` together with its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequencing {
    order: Vec<Point>,
    pos: Vec<usize>,
}

impl Sequencing {
    pub fn from_order(order: Vec<Point>) -> Result<Sequencing, SequencingError> {
        let n = order.len();
        let mut pos = vec![usize::MAX; n];
        for (i, &p) in order.iter().enumerate() {
            let slot = pos
                .get_mut(p as usize)
                .ok_or(SequencingError::NotAPermutation { n })?;
            if *slot != usize::MAX {
                return Err(SequencingError::NotAPermutation { n });
            }
            *slot = i;
        }
        Ok(Sequencing { order, pos })
    }

    pub fn natural(n: usize) -> Result<Sequencing, SequencingError> {
        if n == 0 {
            return Err(SequencingError::EmptyUniverse);
        }
        Ok(Sequencing {
            order: (0..n as Point).collect(),
            pos: (0..n).collect(),
        })
    }

    pub fn order(&self) -> &[Point] {
        &self.order
    }

    pub fn into_order(self) -> Vec<Point> {
        self.order
    }

    pub fn pos(&self, p: Point) -> usize {
        self.pos[p as usize]
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Cyclic rotation starting at position `start`.
    pub fn rotated(&self, start: usize) -> Sequencing {
        let mut order = self.order.clone();
        let len = order.len().max(1);
        order.rotate_left(start % len);
        Sequencing::from_order(order).expect("rotation of a permutation")
    }
}

/// A block found inside a (possibly wrapping) window of the sequencing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowViolation {
    pub window_start: usize,
    pub window_len: usize,
    pub block: Block,
    pub subsequence_positions: Vec<usize>,
}

/// Whether the block occurs among positioned points (as a set, or in order
/// for ordered kinds).
fn occurs(kind: Kind, block: &Block, pos: impl Fn(Point) -> Option<i64>) -> bool {
    if !kind.ordered() {
        return block.points().iter().all(|&p| pos(p).is_some());
    }
    block.forbidden_orders(kind).iter().any(|order| {
        let mut last = i64::MIN;
        order.iter().all(|&p| match pos(p) {
            Some(q) if q > last => {
                last = q;
                true
            }
            _ => false,
        })
    })
}

/// Minimal segments `(start, len)` holding an occurrence of the block, given
/// every block point's position in a sequence of length `n`.
pub(crate) fn block_spans(
    kind: Kind,
    block: &Block,
    pos: impl Fn(Point) -> usize,
    n: usize,
    cyclic: bool,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    if !kind.ordered() {
        let mut ps: Vec<usize> = block.points().iter().map(|&p| pos(p)).collect();
        ps.sort_unstable();
        let k = ps.len();
        if cyclic {
            for i in 0..k {
                let start = ps[i];
                let end = ps[(i + k - 1) % k];
                out.push((start, (end + n - start) % n + 1));
            }
        } else {
            out.push((ps[0], ps[k - 1] - ps[0] + 1));
        }
        return out;
    }
    for order in block.forbidden_orders(kind) {
        let ps: Vec<usize> = order.iter().map(|&p| pos(p)).collect();
        if cyclic {
            let total: usize = ps.windows(2).map(|w| (w[1] + n - w[0]) % n).sum();
            if total < n {
                out.push((ps[0], total + 1));
            }
        } else if ps.windows(2).all(|w| w[0] < w[1]) {
            out.push((ps[0], ps[ps.len() - 1] - ps[0] + 1));
        }
    }
    out
}

fn min_span(sys: &BlockSystem, block: &Block, seq: &Sequencing, cyclic: bool) -> Option<usize> {
    block_spans(sys.kind(), block, |p| seq.pos(p), seq.len(), cyclic)
        .into_iter()
        .map(|(_, len)| len)
        .min()
}

/// True iff no block occurs in the window (as a subset, or as an
/// order-respecting subsequence for MTS/DTS).
pub fn window_is_good(sys: &BlockSystem, window: &[Point]) -> bool {
    let at: HashMap<Point, i64> = window.iter().enumerate().map(|(i, &p)| (p, i as i64)).collect();
    window.iter().all(|&p| {
        sys.blocks_through(p)
            .iter()
            .all(|&id| !occurs(sys.kind(), sys.block(id), |q| at.get(&q).copied()))
    })
}

/// The least `(start, len)` segment of `slice` with `len <= ell` that holds a
/// block, if any.
pub fn slice_violation(sys: &BlockSystem, slice: &[Point], ell: usize) -> Option<(usize, usize)> {
    let at: HashMap<Point, usize> = slice.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut best: Option<(usize, usize)> = None;
    for &p in slice {
        for &id in sys.blocks_through(p) {
            let b = sys.block(id);
            if !b.points().iter().all(|q| at.contains_key(q)) {
                continue;
            }
            for span in block_spans(sys.kind(), b, |q| at[&q], slice.len(), false) {
                if span.1 <= ell && best.is_none_or(|cur| span < cur) {
                    best = Some(span);
                }
            }
        }
    }
    best
}

pub fn slice_is_good(sys: &BlockSystem, slice: &[Point], ell: usize) -> bool {
    slice_violation(sys, slice, ell).is_none()
}

/// Scans every (cyclic) window of length `min(ell, n)` and returns the
/// violation with the least `(window_start, window_len)`, reported as the
/// tightest segment holding the block.
pub fn first_violation(sys: &BlockSystem, seq: &Sequencing, ell: usize, cyclic: bool) -> Option<WindowViolation> {
    let n = seq.len();
    let limit = ell.min(n);
    let mut best: Option<((usize, usize), usize)> = None;
    for (id, b) in sys.blocks().iter().enumerate() {
        for span in block_spans(sys.kind(), b, |p| seq.pos(p), n, cyclic) {
            if span.1 <= limit && best.is_none_or(|(cur, _)| span < cur) {
                best = Some((span, id));
            }
        }
    }
    best.map(|((window_start, window_len), id)| {
        let block = sys.block(id).clone();
        let subsequence_positions = block.points().iter().map(|&p| seq.pos(p)).sorted().collect();
        WindowViolation {
            window_start,
            window_len,
            block,
            subsequence_positions,
        }
    })
}

/// The largest `ell` (at most `n`, or `n - 1` cyclically) for which the
/// sequencing is `ell`-good.
pub fn max_good_ell(sys: &BlockSystem, seq: &Sequencing, cyclic: bool) -> usize {
    let n = seq.len();
    let cap = if cyclic { n.saturating_sub(1) } else { n };
    sys.blocks()
        .iter()
        .filter_map(|b| min_span(sys, b, seq, cyclic))
        .min()
        .map_or(cap, |m| (m - 1).min(cap))
}

fn window_positions(window: &[Point]) -> HashMap<Point, i64> {
    window.iter().enumerate().map(|(i, &p)| (p, i as i64)).collect()
}

/// Whether some block through `z` occurs in `window` followed by `z`.
pub fn completes_block(sys: &BlockSystem, window: &[Point], z: Point) -> bool {
    let at = window_positions(window);
    completes_with(sys, &at, z, window.len() as i64)
}

/// Whether some block through `z` occurs in `z` followed by `window`.
pub fn precedes_block(sys: &BlockSystem, z: Point, window: &[Point]) -> bool {
    let at = window_positions(window);
    completes_with(sys, &at, z, -1)
}

fn completes_with(sys: &BlockSystem, at: &HashMap<Point, i64>, z: Point, z_pos: i64) -> bool {
    if at.contains_key(&z) {
        return false;
    }
    sys.blocks_through(z).iter().any(|&id| {
        occurs(sys.kind(), sys.block(id), |q| {
            if q == z {
                Some(z_pos)
            } else {
                at.get(&q).copied()
            }
        })
    })
}

fn one_missing_candidates(sys: &BlockSystem, at: &HashMap<Point, i64>) -> BTreeSet<Point> {
    let mut out = BTreeSet::new();
    for &p in at.keys() {
        for &id in sys.blocks_through(p) {
            let mut missing = sys.block(id).points().iter().filter(|q| !at.contains_key(q));
            if let (Some(&z), None) = (missing.next(), missing.next()) {
                out.insert(z);
            }
        }
    }
    out
}

/// Points `z` for which `window` followed by `z` is not good.
pub fn forbidden_next(sys: &BlockSystem, window: &[Point]) -> BTreeSet<Point> {
    let at = window_positions(window);
    let end = window.len() as i64;
    one_missing_candidates(sys, &at)
        .into_iter()
        .filter(|&z| completes_with(sys, &at, z, end))
        .collect()
}

/// Points `z` for which `z` followed by `window` is not good.
pub fn forbidden_prev(sys: &BlockSystem, window: &[Point]) -> BTreeSet<Point> {
    let at = window_positions(window);
    one_missing_candidates(sys, &at)
        .into_iter()
        .filter(|&z| completes_with(sys, &at, z, -1))
        .collect()
}

/// Whether putting `candidate` at position `at` of a sequence of length `n`
/// (positions of already placed points in `pos`, `usize::MAX` if unplaced)
/// completes a block whose tightest (cyclic) segment has length `<= ell`.
pub(crate) fn closes_short_block(
    sys: &BlockSystem,
    pos: &[usize],
    candidate: Point,
    at: usize,
    ell: usize,
    n: usize,
    cyclic: bool,
) -> bool {
    sys.blocks_through(candidate).iter().any(|&id| {
        let b = sys.block(id);
        if b.points().iter().any(|&q| q != candidate && pos[q as usize] == usize::MAX) {
            return false;
        }
        let place = |q: Point| if q == candidate { at } else { pos[q as usize] };
        block_spans(sys.kind(), b, place, n, cyclic)
            .iter()
            .any(|&(_, len)| len <= ell)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::build_system;

    fn fano() -> BlockSystem {
        let blocks = (1u32..=7)
            .array_combinations()
            .filter(|&[a, b, c]| a ^ b ^ c == 0)
            .map(|[a, b, c]| vec![a - 1, b - 1, c - 1])
            .collect();
        build_system(Kind::Sts, 7, 2, 3, 1, blocks).unwrap()
    }

    fn dts_single() -> BlockSystem {
        build_system(Kind::Dts, 3, 2, 3, 1, vec![vec![0, 1, 2]]).unwrap()
    }

    #[test]
    fn sequencing_validation() {
        assert!(Sequencing::from_order(vec![0, 2, 1]).is_ok());
        assert_eq!(
            Sequencing::from_order(vec![0, 0, 1]),
            Err(SequencingError::NotAPermutation { n: 3 })
        );
        assert_eq!(
            Sequencing::from_order(vec![0, 3, 1]),
            Err(SequencingError::NotAPermutation { n: 3 })
        );
        assert_eq!(Sequencing::natural(0), Err(SequencingError::EmptyUniverse));
        let s = Sequencing::from_order(vec![2, 0, 1]).unwrap();
        assert_eq!(s.pos(2), 0);
        assert_eq!(s.rotated(1).order(), &[0, 1, 2]);
    }

    #[test]
    fn fano_windows() {
        let f = fano();
        assert!(!window_is_good(&f, &[0, 1, 2]));
        assert!(window_is_good(&f, &[0, 1, 3]));
        for [a, b] in (0..7).array_combinations() {
            assert!(window_is_good(&f, &[a, b]));
        }
    }

    #[test]
    fn dts_order_matters() {
        let d = dts_single();
        assert!(window_is_good(&d, &[2, 0, 1]));
        assert!(!window_is_good(&d, &[0, 1, 2]));
        assert_eq!(forbidden_prev(&d, &[1, 2]), BTreeSet::from([0]));
        assert_eq!(forbidden_next(&d, &[0, 1]), BTreeSet::from([2]));
        assert!(forbidden_prev(&d, &[0, 1]).is_empty());
    }

    #[test]
    fn mts_rotations() {
        let m = build_system(Kind::Mts, 4, 2, 3, 1, vec![vec![0, 1, 2]]).unwrap();
        assert!(!window_is_good(&m, &[1, 2, 0]));
        assert!(!window_is_good(&m, &[2, 3, 0, 1]));
        assert!(window_is_good(&m, &[2, 1, 0]));
        assert_eq!(forbidden_next(&m, &[1, 2]), BTreeSet::from([0]));
        assert_eq!(forbidden_prev(&m, &[1, 2]), BTreeSet::from([0]));
        assert!(forbidden_next(&m, &[2, 1]).is_empty());
    }

    #[test]
    fn fano_natural_order() {
        let f = fano();
        let s = Sequencing::natural(7).unwrap();
        assert_eq!(max_good_ell(&f, &s, false), 2);
        let v = first_violation(&f, &s, 3, false).unwrap();
        assert_eq!((v.window_start, v.window_len), (0, 3));
        assert_eq!(v.block.points(), &[0, 1, 2]);
        assert!(first_violation(&f, &s, 2, true).is_none());
    }

    #[test]
    fn forbidden_next_fano() {
        let f = fano();
        assert_eq!(forbidden_next(&f, &[0, 1]), BTreeSet::from([2]));
        assert!(forbidden_next(&f, &[]).is_empty());
        assert!(forbidden_next(&f, &[4]).is_empty());
    }

    #[test]
    fn cyclic_spans_wrap() {
        let p = build_system(Kind::Psts, 6, 2, 3, 1, vec![vec![0, 1, 5]]).unwrap();
        let s = Sequencing::natural(6).unwrap();
        assert_eq!(max_good_ell(&p, &s, false), 5);
        assert_eq!(max_good_ell(&p, &s, true), 2);
        let v = first_violation(&p, &s, 3, true).unwrap();
        assert_eq!((v.window_start, v.window_len), (5, 3));
        assert_eq!(v.subsequence_positions, vec![0, 1, 5]);
    }

    #[test]
    fn cyclic_ordered_span() {
        let d = dts_single();
        // 1 2 0: (0,1,2) occurs cyclically from position 2, span 3
        let s = Sequencing::from_order(vec![1, 2, 0]).unwrap();
        assert_eq!(max_good_ell(&d, &s, false), 3);
        assert_eq!(max_good_ell(&d, &s, true), 2);
        // 2 1 0 never contains 0,1,2 in order, even cyclically
        let s = Sequencing::from_order(vec![2, 1, 0]).unwrap();
        assert_eq!(max_good_ell(&d, &s, true), 2);
    }

    #[test]
    fn empty_system_caps() {
        let e = BlockSystem::assemble(Kind::Psts, 5, 2, 3, 1, vec![]).unwrap();
        let s = Sequencing::natural(5).unwrap();
        assert_eq!(max_good_ell(&e, &s, false), 5);
        assert_eq!(max_good_ell(&e, &s, true), 4);
    }

    #[test]
    fn slice_checks() {
        let p = build_system(Kind::Psts, 5, 2, 3, 1, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(slice_violation(&p, &[3, 0, 4, 1, 2], 5), Some((1, 4)));
        assert_eq!(slice_violation(&p, &[3, 0, 4, 1, 2], 3), None);
    }

    #[test]
    fn closes_short_block_matches_spans() {
        let f = fano();
        let mut pos = vec![usize::MAX; 7];
        pos[0] = 0;
        pos[1] = 1;
        assert!(closes_short_block(&f, &pos, 2, 2, 3, 7, false));
        assert!(!closes_short_block(&f, &pos, 2, 3, 3, 7, false));
        assert!(closes_short_block(&f, &pos, 2, 6, 3, 7, true));
    }
}
