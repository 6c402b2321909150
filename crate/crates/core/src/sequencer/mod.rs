//! Greedy sequencing engines and the constants that make them provably work.

mod staged;

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::designs::{binom, BlockSystem, Kind, Point};
use crate::goodness::{closes_short_block, forbidden_next, Sequencing};

pub use staged::{
    completion_bridge, cyclic_staged_greedy, cyclic_staged_greedy_state, reachability_extend, staged_greedy,
    staged_greedy_state, unfortunate_set, StagedState,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequencerError {
    #[error("ell must be at least 1")]
    EllZero,
    #[error("no property constants for {kind} with t={t}, k={k}")]
    UnsupportedKind { kind: Kind, t: usize, k: usize },
    #[error("completion constant K'={kp} is smaller than s'={sp}")]
    ConstantsInconsistent { kp: u64, sp: u64 },
    #[error("stage {stage} failed: {detail}")]
    StageFailed { stage: u8, detail: String },
    #[error("reachability failed: only {available} usable points for step {step}")]
    ReachabilityFailed { step: usize, available: usize },
    #[error("completion failed at step {step}")]
    CompletionFailed { step: usize },
    #[error("engine produced a sequencing that is not good: block in window ({start}, {len})")]
    SelfCheckFailed { start: usize, len: usize },
    #[error("internal bound violated: {0}")]
    InvariantBroken(String),
}

/// The extension-counting constants of a forbidden family at a given `ell`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PropertyConstants {
    pub l: u64,
    pub lp: u64,
    pub k: u64,
    pub j: u64,
    pub s: u64,
    pub kp: u64,
    pub sp: u64,
    pub symmetric: bool,
}

fn b(n: u64, k: u64) -> u64 {
    u64::try_from(binom(n, k)).expect("binomial fits in u64")
}

pub fn constants_for(kind: Kind, ell: usize, t: usize, k: usize, lambda: usize) -> Result<PropertyConstants, SequencerError> {
    if ell == 0 {
        return Err(SequencerError::EllZero);
    }
    let e = ell as u64;
    let s = e - 1;
    let triple = match kind {
        Kind::Psts | Kind::Sts | Kind::Mts | Kind::Dts => true,
        Kind::Sqs | Kind::Bd => false,
    };
    if triple && (t, k) != (2, 3) || !triple && !(t >= 2 && t < k) {
        return Err(SequencerError::UnsupportedKind { kind, t, k });
    }
    if triple {
        let l = if kind == Kind::Dts { b(e, 2) } else { b(s, 2) };
        return Ok(PropertyConstants {
            l,
            lp: l,
            k: l,
            j: b(s, 2) + 2 * e,
            s,
            kp: 3 * b(s, 2) + s,
            sp: s,
            symmetric: kind != Kind::Dts,
        });
    }
    let (t, k, lambda) = (t as u64, k as u64, lambda as u64);
    let l = (lambda * b(s, t)).div_ceil(b(k - 1, t));
    let kk = lambda * b(2 * s, t);
    Ok(PropertyConstants {
        l,
        lp: l,
        k: kk,
        j: l + s + lambda * b(s, t - 1),
        s,
        kp: kk + s,
        sp: s,
        symmetric: true,
    })
}

pub fn constants_for_system(sys: &BlockSystem, ell: usize) -> Result<PropertyConstants, SequencerError> {
    constants_for(sys.kind(), ell, sys.t(), sys.k(), sys.lambda())
}

/// Smallest order for which every PSTS has an `ell`-good sequencing.
pub fn threshold_psts(ell: usize) -> u64 {
    if ell < 3 {
        return 3;
    }
    let e = ell as u64;
    let l = b(e - 1, 2);
    (2 * e + 3 * l) * l + e
}

pub fn threshold_general(c: &PropertyConstants, ell: usize) -> u64 {
    let e = ell as u64;
    let middle = if c.symmetric { c.l + c.k } else { c.l + c.lp + c.k };
    e * c.l + middle * c.l + c.s * c.l + c.j
}

pub fn threshold_cyclic(c: &PropertyConstants, ell: usize) -> Result<u64, SequencerError> {
    if c.kp < c.sp {
        return Err(SequencerError::ConstantsInconsistent { kp: c.kp, sp: c.sp });
    }
    let e = ell as u64;
    let g = c.kp - c.sp;
    let middle = if c.symmetric { c.l + c.k } else { c.l + c.lp + c.k };
    Ok(g * e + e + g * middle + c.s.saturating_sub(1) * c.l + c.j + c.kp)
}

/// How ties among eligible points are broken.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TieRule {
    #[default]
    Min,
    Random(u64),
}

pub(crate) struct Chooser {
    rng: Option<ChaCha8Rng>,
}

impl Chooser {
    pub(crate) fn new(tie: TieRule) -> Chooser {
        Chooser {
            rng: match tie {
                TieRule::Min => None,
                TieRule::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
            },
        }
    }

    /// Picks from candidates given in ascending order.
    pub(crate) fn choose(&mut self, candidates: impl Iterator<Item = Point>) -> Option<Point> {
        match &mut self.rng {
            None => candidates.into_iter().next(),
            Some(rng) => {
                let all: Vec<Point> = candidates.collect();
                all.choose(rng).copied()
            }
        }
    }
}

pub(crate) fn tail(seq: &[Point], len: usize) -> &[Point] {
    &seq[seq.len().saturating_sub(len)..]
}

/// Appends the least eligible point until stuck. With `cyclic_check`, also
/// keeps the wrap-around windows good.
pub fn naive_greedy(sys: &BlockSystem, ell: usize, cyclic_check: bool, tie: TieRule) -> Option<Sequencing> {
    let n = sys.n();
    let mut chooser = Chooser::new(tie);
    let mut order: Vec<Point> = Vec::with_capacity(n);
    let mut pos = vec![usize::MAX; n];
    for i in 0..n {
        let forbidden = forbidden_next(sys, tail(&order, ell.saturating_sub(1)));
        let pick = chooser.choose((0..n as Point).filter(|&z| {
            pos[z as usize] == usize::MAX
                && !forbidden.contains(&z)
                && !(cyclic_check && closes_short_block(sys, &pos, z, i, ell, n, true))
        }))?;
        pos[pick as usize] = i;
        order.push(pick);
    }
    Sequencing::from_order(order).ok()
}
