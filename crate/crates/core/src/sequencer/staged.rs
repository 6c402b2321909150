use std::collections::BTreeSet;

use crate::designs::{BlockSystem, Kind, Point};
use crate::goodness::{closes_short_block, completes_block, first_violation, forbidden_next, slice_is_good, Sequencing};

use super::{constants_for_system, naive_greedy, tail, Chooser, PropertyConstants, SequencerError, TieRule};

/// The pieces of a staged run, kept for inspection.
#[derive(Clone, Debug)]
pub struct StagedState {
    pub constants: PropertyConstants,
    /// `x^1..x^L` (non-cyclic) or `x^0..x^G` (cyclic), each of length `ell - 1`.
    pub segments: Vec<Vec<Point>>,
    pub vprime: BTreeSet<Point>,
    pub unfortunate: BTreeSet<Point>,
    /// Points appended after the last segment.
    pub tail: Vec<Point>,
    /// The points placed into the gaps between segments.
    pub gaps: Vec<Point>,
    /// Cyclic only: the bridge from the end of the tail back to `x^0`.
    pub bridge: Vec<Point>,
    pub sequencing: Sequencing,
}

fn failed(stage: u8, detail: impl Into<String>) -> SequencerError {
    SequencerError::StageFailed {
        stage,
        detail: detail.into(),
    }
}

/// Points of `V'` that cannot fill some gap: `y` such that `x^{j-1} y x^j`
/// is not `ell`-good for some gap `j` (with an empty `x^0`).
pub fn unfortunate_set(sys: &BlockSystem, ell: usize, segments: &[Vec<Point>]) -> BTreeSet<Point> {
    let used: BTreeSet<Point> = segments.iter().flatten().copied().collect();
    let vprime = (0..sys.n() as Point).filter(|p| !used.contains(p));
    let mut gaps: Vec<(&[Point], &[Point])> = Vec::new();
    if let Some(first) = segments.first() {
        gaps.push((&[], first));
    }
    for w in segments.windows(2) {
        gaps.push((&w[0], &w[1]));
    }
    unfortunate_over(sys, ell, vprime, &gaps)
}

fn unfortunate_over(
    sys: &BlockSystem,
    ell: usize,
    candidates: impl Iterator<Item = Point>,
    gaps: &[(&[Point], &[Point])],
) -> BTreeSet<Point> {
    let mut buf = Vec::new();
    candidates
        .filter(|&y| {
            gaps.iter().any(|(left, right)| {
                buf.clear();
                buf.extend_from_slice(left);
                buf.push(y);
                buf.extend_from_slice(right);
                !slice_is_good(sys, &buf, ell)
            })
        })
        .collect()
}

/// Picks `ell - 1` points of `pool` so that appending them and then `u` to a
/// sequence ending in `prefix_window` keeps it `ell`-good.
pub fn reachability_extend(
    sys: &BlockSystem,
    ell: usize,
    prefix_window: &[Point],
    pool: &BTreeSet<Point>,
    u: Point,
) -> Result<Vec<Point>, SequencerError> {
    reach(sys, ell, prefix_window, pool, u, &mut Chooser::new(TieRule::Min))
}

fn reach(
    sys: &BlockSystem,
    ell: usize,
    prefix_window: &[Point],
    pool: &BTreeSet<Point>,
    u: Point,
    chooser: &mut Chooser,
) -> Result<Vec<Point>, SequencerError> {
    let s = ell.saturating_sub(1);
    let mut line: Vec<Point> = tail(prefix_window, s).to_vec();
    let base = line.len();
    for step in 0..s {
        let forbidden = forbidden_next(sys, tail(&line, s));
        let mut trial = line[base..].to_vec();
        let usable: Vec<Point> = pool
            .iter()
            .copied()
            .filter(|&w| w != u && !line[base..].contains(&w) && !forbidden.contains(&w))
            .filter(|&w| {
                trial.push(w);
                let ok = !completes_block(sys, &trial, u);
                trial.pop();
                ok
            })
            .collect();
        let available = usable.len();
        let pick = chooser
            .choose(usable.into_iter())
            .ok_or(SequencerError::ReachabilityFailed { step, available })?;
        line.push(pick);
    }
    if forbidden_next(sys, tail(&line, s)).contains(&u) {
        return Err(SequencerError::ReachabilityFailed { step: s, available: 0 });
    }
    Ok(line.split_off(base))
}

/// Picks `ell - 1` points of `pool` to put between `x_end` and `x_start` so
/// that the whole line is `ell`-good.
pub fn completion_bridge(
    sys: &BlockSystem,
    ell: usize,
    x_end: &[Point],
    x_start: &[Point],
    pool: &BTreeSet<Point>,
) -> Result<Vec<Point>, SequencerError> {
    bridge(sys, ell, x_end, x_start, pool, &mut Chooser::new(TieRule::Min))
}

fn bridge(
    sys: &BlockSystem,
    ell: usize,
    x_end: &[Point],
    x_start: &[Point],
    pool: &BTreeSet<Point>,
    chooser: &mut Chooser,
) -> Result<Vec<Point>, SequencerError> {
    let s = ell.saturating_sub(1);
    let total = x_end.len() + s + x_start.len();
    let mut pos = vec![usize::MAX; sys.n()];
    for (i, &p) in x_end.iter().enumerate() {
        pos[p as usize] = i;
    }
    for (i, &p) in x_start.iter().enumerate() {
        pos[p as usize] = x_end.len() + s + i;
    }
    let mut out = Vec::with_capacity(s);
    for step in 0..s {
        let at = x_end.len() + step;
        let pick = chooser
            .choose(
                pool.iter()
                    .copied()
                    .filter(|&y| pos[y as usize] == usize::MAX)
                    .filter(|&y| !closes_short_block(sys, &pos, y, at, ell, total, false)),
            )
            .ok_or(SequencerError::CompletionFailed { step })?;
        pos[pick as usize] = at;
        out.push(pick);
    }
    Ok(out)
}

struct Run<'a> {
    sys: &'a BlockSystem,
    ell: usize,
    chooser: Chooser,
    used: Vec<bool>,
}

impl Run<'_> {
    fn mark(&mut self, p: Point) {
        self.used[p as usize] = true;
    }

    fn unused_in<'b>(&'b self, set: &'b BTreeSet<Point>) -> impl Iterator<Item = Point> + 'b {
        set.iter().copied().filter(|&p| !self.used[p as usize])
    }

    /// Greedy extension of `line` by one point of `from` keeping it good.
    fn extend(&mut self, line: &mut Vec<Point>, from: &BTreeSet<Point>, stage: u8) -> Result<(), SequencerError> {
        let forbidden = forbidden_next(self.sys, tail(line, self.ell - 1));
        let used = &self.used;
        let pick = self
            .chooser
            .choose(
                from.iter()
                    .copied()
                    .filter(|&p| !used[p as usize] && !forbidden.contains(&p)),
            )
            .ok_or_else(|| failed(stage, format!("no eligible point after {} placed", line.len())))?;
        self.mark(pick);
        line.push(pick);
        Ok(())
    }

    /// Stage 1: a good line of `count` points, cut into segments.
    fn segments(&mut self, count: usize) -> Result<Vec<Vec<Point>>, SequencerError> {
        let width = self.ell - 1;
        let all: BTreeSet<Point> = (0..self.sys.n() as Point).collect();
        if self.sys.n() < width * count {
            return Err(failed(1, format!("need {} points, have {}", width * count, self.sys.n())));
        }
        let mut line = Vec::with_capacity(width * count);
        while line.len() < width * count {
            self.extend(&mut line, &all, 1)?;
        }
        Ok(line.chunks(width).map(<[Point]>::to_vec).collect())
    }

    /// Stages 2 to 4: extend the last segment by all unfortunate points and
    /// then by ordinary points until `keep` points of `V'` are left.
    fn tail(
        &mut self,
        last: &[Point],
        vprime: &BTreeSet<Point>,
        unfortunate: &BTreeSet<Point>,
        l: usize,
        keep: usize,
    ) -> Result<Vec<Point>, SequencerError> {
        let mut line = last.to_vec();
        while self.unused_in(unfortunate).count() > l {
            self.extend(&mut line, unfortunate, 2)?;
        }
        let rest: Vec<Point> = self.unused_in(unfortunate).collect();
        for u in rest {
            if self.used[u as usize] {
                continue;
            }
            let pool: BTreeSet<Point> = self.unused_in(vprime).filter(|&p| p != u).collect();
            let ws = reach(self.sys, self.ell, tail(&line, self.ell - 1), &pool, u, &mut self.chooser)
                .map_err(|e| failed(3, e.to_string()))?;
            for w in ws {
                self.mark(w);
                line.push(w);
            }
            self.mark(u);
            line.push(u);
        }
        let left = self.unused_in(vprime).count();
        if left < keep {
            return Err(failed(4, format!("{left} points of V' left, need {keep}")));
        }
        while self.unused_in(vprime).count() > keep {
            self.extend(&mut line, vprime, 4)?;
        }
        Ok(line.split_off(last.len()))
    }
}

/// Asserts the counting bounds on `|U|` for `segments` segments.
fn check_unfortunate_bounds(
    sys: &BlockSystem,
    c: &PropertyConstants,
    u: usize,
    segments: u64,
    cyclic: bool,
) -> Result<(), SequencerError> {
    let u = u as u64;
    let broken = |what: &str, cap: u64| SequencerError::InvariantBroken(format!("|U| = {u} exceeds {what} = {cap}"));
    let gaps = if cyclic { segments - 1 } else { segments };
    let general = if c.symmetric {
        segments * c.l + gaps * c.k
    } else {
        gaps * (c.l + c.lp + c.k)
    };
    if u > general {
        return Err(broken("the counting bound", general));
    }
    if !cyclic && matches!(sys.kind(), Kind::Psts | Kind::Sts) {
        let l = c.l;
        if u > 3 * l * l {
            return Err(broken("3L^2", 3 * l * l));
        }
        if l >= 2 && u > 3 * l * (l - 1) {
            return Err(broken("3/2 (ell-1)(ell-2)(L-1)", 3 * l * (l - 1)));
        }
    }
    Ok(())
}

fn trivial(sys: &BlockSystem, ell: usize, c: PropertyConstants, cyclic: bool) -> Result<StagedState, SequencerError> {
    let seq = naive_greedy(sys, ell, cyclic, TieRule::Min).ok_or_else(|| failed(1, "greedy stuck"))?;
    Ok(StagedState {
        constants: c,
        segments: Vec::new(),
        vprime: (0..sys.n() as Point).collect(),
        unfortunate: BTreeSet::new(),
        tail: seq.order().to_vec(),
        gaps: Vec::new(),
        bridge: Vec::new(),
        sequencing: seq,
    })
}

fn self_check(sys: &BlockSystem, seq: &Sequencing, ell: usize, cyclic: bool) -> Result<(), SequencerError> {
    match first_violation(sys, seq, ell, cyclic) {
        None => Ok(()),
        Some(v) => Err(SequencerError::SelfCheckFailed {
            start: v.window_start,
            len: v.window_len,
        }),
    }
}

/// Four-stage greedy producing an `ell`-good sequencing of shape
/// `y_1 x^1 y_2 x^2 ... y_L x^L z`.
pub fn staged_greedy(sys: &BlockSystem, ell: usize, tie: TieRule) -> Result<Sequencing, SequencerError> {
    staged_greedy_state(sys, ell, tie).map(|s| s.sequencing)
}

pub fn staged_greedy_state(sys: &BlockSystem, ell: usize, tie: TieRule) -> Result<StagedState, SequencerError> {
    let c = constants_for_system(sys, ell)?;
    let l = c.l as usize;
    if ell < sys.k() || l == 0 || sys.blocks().is_empty() {
        return trivial(sys, ell, c, false);
    }
    let mut run = Run {
        sys,
        ell,
        chooser: Chooser::new(tie),
        used: vec![false; sys.n()],
    };
    let segments = run.segments(l)?;
    let vprime: BTreeSet<Point> = (0..sys.n() as Point).filter(|&p| !run.used[p as usize]).collect();
    let unfortunate = unfortunate_set(sys, ell, &segments);
    check_unfortunate_bounds(sys, &c, unfortunate.len(), c.l, false)?;
    let tail = run.tail(&segments[l - 1], &vprime, &unfortunate, l, l)?;
    let gaps: Vec<Point> = run.unused_in(&vprime).collect();
    let mut order = Vec::with_capacity(sys.n());
    for (y, x) in gaps.iter().zip(&segments) {
        order.push(*y);
        order.extend_from_slice(x);
    }
    order.extend_from_slice(&tail);
    let sequencing = Sequencing::from_order(order).map_err(|e| SequencerError::InvariantBroken(e.to_string()))?;
    self_check(sys, &sequencing, ell, false)?;
    Ok(StagedState {
        constants: c,
        segments,
        vprime,
        unfortunate,
        tail,
        gaps,
        bridge: Vec::new(),
        sequencing,
    })
}

/// Five-stage greedy producing a cyclically `ell`-good sequencing of shape
/// `x^0 y_1 x^1 ... y_G x^G z y` with `G = K' - s'`.
pub fn cyclic_staged_greedy(sys: &BlockSystem, ell: usize, tie: TieRule) -> Result<Sequencing, SequencerError> {
    cyclic_staged_greedy_state(sys, ell, tie).map(|s| s.sequencing)
}

pub fn cyclic_staged_greedy_state(sys: &BlockSystem, ell: usize, tie: TieRule) -> Result<StagedState, SequencerError> {
    let c = constants_for_system(sys, ell)?;
    if c.kp < c.sp {
        return Err(SequencerError::ConstantsInconsistent { kp: c.kp, sp: c.sp });
    }
    let l = c.l as usize;
    if ell < sys.k() || l == 0 || sys.blocks().is_empty() {
        return trivial(sys, ell, c, true);
    }
    let g = (c.kp - c.sp) as usize;
    let mut run = Run {
        sys,
        ell,
        chooser: Chooser::new(tie),
        used: vec![false; sys.n()],
    };
    let segments = run.segments(g + 1)?;
    let vprime: BTreeSet<Point> = (0..sys.n() as Point).filter(|&p| !run.used[p as usize]).collect();
    let gap_pairs: Vec<(&[Point], &[Point])> = segments.windows(2).map(|w| (&w[0][..], &w[1][..])).collect();
    let unfortunate = unfortunate_over(sys, ell, vprime.iter().copied(), &gap_pairs);
    check_unfortunate_bounds(sys, &c, unfortunate.len(), g as u64 + 1, true)?;
    let z = run.tail(&segments[g], &vprime, &unfortunate, l, c.kp as usize)?;
    let rest: BTreeSet<Point> = run.unused_in(&vprime).collect();
    let mut line = segments[g].clone();
    line.extend_from_slice(&z);
    let bridge = bridge(sys, ell, tail(&line, ell - 1), &segments[0], &rest, &mut run.chooser)
        .map_err(|e| failed(5, e.to_string()))?;
    let gaps: Vec<Point> = rest.iter().copied().filter(|p| !bridge.contains(p)).collect();
    let mut order = Vec::with_capacity(sys.n());
    order.extend_from_slice(&segments[0]);
    for (y, x) in gaps.iter().zip(&segments[1..]) {
        order.push(*y);
        order.extend_from_slice(x);
    }
    order.extend_from_slice(&z);
    order.extend_from_slice(&bridge);
    let sequencing = Sequencing::from_order(order).map_err(|e| SequencerError::InvariantBroken(e.to_string()))?;
    self_check(sys, &sequencing, ell, true)?;
    Ok(StagedState {
        constants: c,
        segments,
        vprime,
        unfortunate,
        tail: z,
        gaps,
        bridge,
        sequencing,
    })
}
