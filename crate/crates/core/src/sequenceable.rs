//! Sequencings of partial triple systems in which no segment of length `3r`
//! is the union of `r` pairwise disjoint blocks.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::designs::{BlockSystem, Kind, Point};
use crate::goodness::Sequencing;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceableError {
    #[error("k must be at least 1")]
    KZero,
    #[error("pattern for k={k} needs n >= {min}, got {n}")]
    TooShort { k: u64, n: u64, min: u64 },
    #[error("{blocks} blocks is too many for exact disjoint-block search (limit {limit})")]
    TooLargeForExact { blocks: usize, limit: usize },
    #[error("expected a partial triple system, got {kind} with k={k}")]
    NotTripleSystem { kind: Kind, k: usize },
    #[error("no admissible point at position {position}")]
    GreedyStuck { position: usize },
}

pub const EXACT_BLOCK_LIMIT: usize = 64;

pub fn icbrt(x: u64) -> u64 {
    let mut r = (x as f64).cbrt() as u64;
    while r > 0 && r.pow(3) > x {
        r -= 1;
    }
    while (r + 1).pow(3) <= x {
        r += 1;
    }
    r
}

/// Smallest `n` with `n > 9k + 22 k^(2/3) + 10`.
pub fn alspach_threshold(k: u64) -> u64 {
    let target = 10648u128 * u128::from(k) * u128::from(k);
    let mut a = icbrt(u64::try_from(target).unwrap_or(u64::MAX)).saturating_sub(1);
    while u128::from(a).pow(3) <= target {
        a += 1;
    }
    9 * k + 10 + a
}

/// The zero/one placement pattern; zeros mark where witness points go.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSeq {
    pub bits: Vec<u8>,
    pub k: u64,
    pub ellp: u64,
    pub n: u64,
}

impl PatternSeq {
    /// Length of the part that holds all zeros, `9k + floor(3k / ellp)`.
    pub fn core_len(&self) -> u64 {
        9 * self.k + 3 * self.k / self.ellp
    }

    /// 1-based positions of the zeros.
    pub fn zeros(&self) -> Vec<u64> {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 0)
            .map(|(i, _)| i as u64 + 1)
            .collect()
    }
}

impl fmt::Display for PatternSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

pub fn pattern_sequence(k: u64, n: u64) -> Result<PatternSeq, SequenceableError> {
    if k == 0 {
        return Err(SequenceableError::KZero);
    }
    let ellp = icbrt(k);
    let copies = 3 * k / ellp;
    let min = 9 * k + copies;
    if n < min {
        return Err(SequenceableError::TooShort { k, n, min });
    }
    let mut bits = Vec::with_capacity(n as usize);
    for _ in 0..copies {
        for _ in 1..ellp {
            bits.extend([0, 1, 1]);
        }
        bits.extend([0, 1, 1, 1]);
    }
    for _ in copies * ellp..3 * k {
        bits.extend([0, 1, 1]);
    }
    bits.resize(n as usize, 1);
    Ok(PatternSeq { bits, k, ellp, n })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct PatternReport {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

impl PatternReport {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c
    }
}

/// The three segment properties, decided from the zero positions:
/// (a) every length-`3r` segment has at most `r` zeros; (b) those ending at
/// `core_len + 1` or later have at most `r - 1`; (c) so do those with
/// `r >= 3 ellp + 1`.
pub fn pattern_properties(p: &PatternSeq) -> PatternReport {
    let z = p.zeros();
    let d: Vec<i64> = z.iter().enumerate().map(|(j, &q)| q as i64 - 3 * j as i64).collect();
    let a = d.windows(2).all(|w| w[1] >= w[0]);

    let gap = 3 * p.ellp as usize;
    let mut c = true;
    let mut running_max = i64::MIN;
    for j in gap..d.len() {
        running_max = running_max.max(d[j - gap]);
        if d[j] - running_max <= 2 {
            c = false;
            break;
        }
    }

    let n = p.bits.len();
    let mut prefix = vec![0usize; n + 1];
    for (i, &bit) in p.bits.iter().enumerate() {
        prefix[i + 1] = prefix[i] + usize::from(bit == 0);
    }
    let first_end = p.core_len() as usize + 1;
    let b = (1..=n / 3).all(|r| {
        let end = first_end.max(3 * r);
        end > n || prefix[end] - prefix[end - 3 * r] < r
    });
    PatternReport { a, b, c }
}

pub fn pattern_properties_check(p: &PatternSeq) -> bool {
    pattern_properties(p).all()
}

/// The same properties by scanning every segment.
pub fn pattern_properties_naive(p: &PatternSeq) -> PatternReport {
    let n = p.bits.len();
    let core = p.core_len() as usize;
    let mut report = PatternReport {
        a: true,
        b: true,
        c: true,
    };
    for r in 1..=n / 3 {
        for start in 0..=n - 3 * r {
            let zeros = p.bits[start..start + 3 * r].iter().filter(|&&b| b == 0).count();
            report.a &= zeros <= r;
            if start + 3 * r > core {
                report.b &= zeros < r;
            }
            if r as u64 > 3 * p.ellp {
                report.c &= zeros < r;
            }
        }
    }
    report
}

fn require_triples(sys: &BlockSystem) -> Result<(), SequenceableError> {
    if sys.k() != 3 || sys.kind().ordered() {
        return Err(SequenceableError::NotTripleSystem {
            kind: sys.kind(),
            k: sys.k(),
        });
    }
    Ok(())
}

/// A largest family of pairwise disjoint blocks, as block ids.
pub fn max_disjoint_blocks(sys: &BlockSystem) -> Result<Vec<usize>, SequenceableError> {
    require_triples(sys)?;
    let m = sys.blocks().len();
    if m > EXACT_BLOCK_LIMIT {
        return Err(SequenceableError::TooLargeForExact {
            blocks: m,
            limit: EXACT_BLOCK_LIMIT,
        });
    }
    let mut used = vec![false; sys.n()];
    let mut best = Vec::new();
    for (id, b) in sys.blocks().iter().enumerate() {
        if b.points().iter().all(|&p| !used[p as usize]) {
            b.points().iter().for_each(|&p| used[p as usize] = true);
            best.push(id);
        }
    }
    used.iter_mut().for_each(|u| *u = false);
    let mut current = Vec::new();
    search_disjoint(sys, 0, &mut used, sys.n(), &mut current, &mut best);
    Ok(best)
}

fn search_disjoint(
    sys: &BlockSystem,
    from: usize,
    used: &mut [bool],
    free: usize,
    current: &mut Vec<usize>,
    best: &mut Vec<usize>,
) {
    if current.len() > best.len() {
        *best = current.clone();
    }
    let remaining = sys.blocks().len() - from;
    if current.len() + remaining.min(free / 3) <= best.len() {
        return;
    }
    for id in from..sys.blocks().len() {
        let pts = sys.block(id).points();
        if pts.iter().any(|&p| used[p as usize]) {
            continue;
        }
        pts.iter().for_each(|&p| used[p as usize] = true);
        current.push(id);
        search_disjoint(sys, id + 1, used, free - 3, current, best);
        current.pop();
        pts.iter().for_each(|&p| used[p as usize] = false);
        if current.len() + (sys.blocks().len() - id - 1).min(free / 3) <= best.len() {
            return;
        }
    }
}

/// A triple system together with a maximum disjoint family: `x` lists the
/// family's points block by block, `y` the rest ascending.
#[derive(Clone, Debug)]
pub struct SequenceableInstance {
    pub system: BlockSystem,
    pub k: usize,
    pub x: Vec<Point>,
    pub y: Vec<Point>,
}

impl SequenceableInstance {
    pub fn new(system: BlockSystem) -> Result<SequenceableInstance, SequenceableError> {
        let family = max_disjoint_blocks(&system)?;
        let x: Vec<Point> = family
            .iter()
            .flat_map(|&id| system.block(id).points().iter().copied())
            .collect();
        let in_x: BTreeSet<Point> = x.iter().copied().collect();
        let y = (0..system.n() as Point).filter(|p| !in_x.contains(p)).collect();
        Ok(SequenceableInstance {
            k: family.len(),
            system,
            x,
            y,
        })
    }
}

/// Places witness points at the pattern's zeros and fills the ones greedily
/// so that no early point of `Y` closes a block with recent points.
pub fn alspach_sequencing(inst: &SequenceableInstance) -> Result<Sequencing, SequenceableError> {
    let sys = &inst.system;
    let n = sys.n();
    if inst.k == 0 {
        return Ok(Sequencing::from_order((0..n as Point).collect()).expect("identity"));
    }
    let pattern = pattern_sequence(inst.k as u64, n as u64)?;
    let ellp = pattern.ellp as usize;
    let core = pattern.core_len() as usize;
    let three_k = 3 * inst.k;
    let mut in_x = vec![false; n];
    inst.x.iter().for_each(|&p| in_x[p as usize] = true);
    let mut unused_y: BTreeSet<Point> = inst.y.iter().copied().collect();
    let mut recent_y: VecDeque<Point> = VecDeque::with_capacity(6 * ellp + 1);
    let mut order = Vec::with_capacity(n);
    let mut j = 0usize;
    for i in 1..=n {
        if pattern.bits[i - 1] == 0 {
            j += 1;
            order.push(inst.x[j - 1]);
            continue;
        }
        let pick = if i > core {
            unused_y.first().copied()
        } else {
            let lo = (j + 1).saturating_sub(3 * ellp).max(1);
            let hi = (j + 1).min(three_k);
            let x_window: BTreeSet<Point> = inst.x[lo - 1..hi].iter().copied().collect();
            unused_y.iter().copied().find(|&y| {
                !sys.blocks_through(y).iter().any(|&id| {
                    let others: Vec<Point> = sys.block(id).points().iter().copied().filter(|&p| p != y).collect();
                    let hit = |a: Point, b: Point| x_window.contains(&a) && recent_y.contains(&b);
                    hit(others[0], others[1]) || hit(others[1], others[0])
                })
            })
        };
        let y = pick.ok_or(SequenceableError::GreedyStuck { position: i })?;
        unused_y.remove(&y);
        recent_y.push_back(y);
        if recent_y.len() > 6 * ellp {
            recent_y.pop_front();
        }
        order.push(y);
    }
    Ok(Sequencing::from_order(order).expect("pattern places every point once"))
}

/// A segment `[start, start + len)` and the disjoint blocks covering it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadSegment {
    pub start: usize,
    pub len: usize,
    pub blocks: Vec<usize>,
}

/// Partition of the segment's points into blocks, if one exists.
pub fn segment_cover(sys: &BlockSystem, seq: &Sequencing, start: usize, len: usize) -> Option<Vec<usize>> {
    let inside = |p: Point| (start..start + len).contains(&seq.pos(p));
    let mut covered = vec![false; len];
    let mut chosen = Vec::new();
    cover_from(sys, seq, start, &inside, &mut covered, &mut chosen).then_some(chosen)
}

fn cover_from(
    sys: &BlockSystem,
    seq: &Sequencing,
    start: usize,
    inside: &dyn Fn(Point) -> bool,
    covered: &mut [bool],
    chosen: &mut Vec<usize>,
) -> bool {
    let Some(first) = covered.iter().position(|&c| !c) else {
        return true;
    };
    let p = seq.order()[start + first];
    for &id in sys.blocks_through(p) {
        let pts = sys.block(id).points();
        if !pts.iter().all(|&q| inside(q) && !covered[seq.pos(q) - start]) {
            continue;
        }
        pts.iter().for_each(|&q| covered[seq.pos(q) - start] = true);
        chosen.push(id);
        if cover_from(sys, seq, start, inside, covered, chosen) {
            return true;
        }
        chosen.pop();
        pts.iter().for_each(|&q| covered[seq.pos(q) - start] = false);
    }
    false
}

fn bad_at(sys: &BlockSystem, seq: &Sequencing, start: usize, in_x: Option<&[bool]>) -> Option<BadSegment> {
    let n = seq.len();
    (1..=(n - start) / 3).find_map(|r| {
        let len = 3 * r;
        if let Some(in_x) = in_x {
            let xs = seq.order()[start..start + len].iter().filter(|&&p| in_x[p as usize]).count();
            if xs < r {
                return None;
            }
        }
        segment_cover(sys, seq, start, len).map(|blocks| BadSegment { start, len, blocks })
    })
}

fn first_bad(sys: &BlockSystem, seq: &Sequencing, in_x: Option<&[bool]>) -> Option<BadSegment> {
    (0..seq.len())
        .into_par_iter()
        .find_map_first(|start| bad_at(sys, seq, start, in_x))
}

/// The first segment (by start, then length) that is a union of disjoint blocks.
pub fn first_bad_segment(sys: &BlockSystem, seq: &Sequencing) -> Option<BadSegment> {
    first_bad(sys, seq, None)
}

/// As [`first_bad_segment`], skipping segments with fewer than `r` points of
/// a maximum disjoint family's union `x`.
pub fn first_bad_segment_pruned(sys: &BlockSystem, seq: &Sequencing, x: &[Point]) -> Option<BadSegment> {
    let mut in_x = vec![false; seq.len()];
    x.iter().for_each(|&p| in_x[p as usize] = true);
    first_bad(sys, seq, Some(&in_x))
}

pub fn verify_sequenceable(sys: &BlockSystem, seq: &Sequencing) -> bool {
    first_bad_segment(sys, seq).is_none()
}
