use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use thiserror::Error;

/// A point of a design; points of a system on `n` points are `0..n`.
pub type Point = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Psts,
    Sts,
    Sqs,
    Mts,
    Dts,
    Bd,
}

impl Kind {
    /// Whether block order matters (MTS cycles and DTS transitive triples).
    pub fn ordered(self) -> bool {
        matches!(self, Kind::Mts | Kind::Dts)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Psts => "PSTS",
            Kind::Sts => "STS",
            Kind::Sqs => "SQS",
            Kind::Mts => "MTS",
            Kind::Dts => "DTS",
            Kind::Bd => "BD",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Kind {
    type Err = DesignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PSTS" => Ok(Kind::Psts),
            "STS" => Ok(Kind::Sts),
            "SQS" => Ok(Kind::Sqs),
            "MTS" => Ok(Kind::Mts),
            "DTS" => Ok(Kind::Dts),
            "BD" => Ok(Kind::Bd),
            _ => Err(DesignError::UnknownKind(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesignError {
    #[error("unknown design kind `{0}`")]
    UnknownKind(String),
    #[error("parameters t={t} k={k} lambda={lambda} not allowed for {kind} on {n} points")]
    BadParameters {
        kind: Kind,
        n: usize,
        t: usize,
        k: usize,
        lambda: usize,
    },
    #[error("block {index} has {found} points, expected {expected}")]
    WrongBlockSize {
        index: usize,
        found: usize,
        expected: usize,
    },
    #[error("point {point} out of range for n = {n}")]
    PointOutOfRange { point: Point, n: usize },
    #[error("block {0:?} listed more than once")]
    DuplicateBlock(Vec<Point>),
    #[error("block {0:?} repeats a point")]
    RepeatedPointInBlock(Vec<Point>),
    #[error("subset of size {size} is not smaller than the block size {k}")]
    SubsetTooLarge { size: usize, k: usize },
    #[error("subset {0:?} repeats a point")]
    RepeatedPointInSubset(Vec<Point>),
    #[error("system does not satisfy the {kind} conditions ({} violations)", .report.violations.len())]
    Invalid { kind: Kind, report: ValidationReport },
}

/// A block. Unordered blocks are stored ascending, MTS cycles with their
/// minimum first, DTS triples in their given order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Block {
    points: Vec<Point>,
    ordered: bool,
}

impl Block {
    fn canonical(kind: Kind, mut points: Vec<Point>) -> Block {
        match kind {
            Kind::Dts => {}
            Kind::Mts => {
                let at = points.iter().position_min().unwrap_or(0);
                points.rotate_left(at);
            }
            _ => points.sort_unstable(),
        }
        Block {
            points,
            ordered: kind.ordered(),
        }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn ordered(&self) -> bool {
        self.ordered
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, p: Point) -> bool {
        self.points.contains(&p)
    }

    /// The point sequences this block forbids as subsequences: one for a
    /// transitive triple, three rotations for a cycle, none for unordered
    /// blocks (which are forbidden as sets).
    pub fn forbidden_orders(&self, kind: Kind) -> Vec<Vec<Point>> {
        match kind {
            Kind::Dts => vec![self.points.clone()],
            Kind::Mts => (0..self.points.len())
                .map(|r| {
                    let mut v = self.points.clone();
                    v.rotate_left(r);
                    v
                })
                .collect(),
            _ => Vec::new(),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.ordered { '(' } else { '{' };
        let close = if self.ordered { ')' } else { '}' };
        write!(f, "{open}{}{close}", self.points.iter().join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub subset: Vec<Point>,
    pub found: usize,
    pub required: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

/// Lookup from points and small subsets to the blocks containing them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionIndex {
    by_point: Vec<Vec<usize>>,
    by_subset: HashMap<Vec<Point>, Vec<usize>>,
    min_size: usize,
    max_size: usize,
}

const INDEX_ENTRY_LIMIT: u128 = 10_000_000;

impl CompletionIndex {
    fn build(n: usize, t: usize, k: usize, blocks: &[Block]) -> CompletionIndex {
        let mut by_point = vec![Vec::new(); n];
        for (id, b) in blocks.iter().enumerate() {
            for &p in b.points() {
                by_point[p as usize].push(id);
            }
        }
        let top = k.saturating_sub(1);
        let lo = t.clamp(1, top.max(1));
        let per_block: u128 = (lo..=top).map(|s| binom(k as u64, s as u64)).sum();
        let min_size = if per_block * blocks.len() as u128 <= INDEX_ENTRY_LIMIT {
            lo
        } else {
            top
        };
        let mut by_subset: HashMap<Vec<Point>, Vec<usize>> = HashMap::new();
        if top >= 1 {
            for (id, b) in blocks.iter().enumerate() {
                let mut sorted = b.points().to_vec();
                sorted.sort_unstable();
                for size in min_size..=top {
                    for sub in sorted.iter().copied().combinations(size) {
                        by_subset.entry(sub).or_default().push(id);
                    }
                }
            }
        }
        CompletionIndex {
            by_point,
            by_subset,
            min_size,
            max_size: top,
        }
    }

    pub fn blocks_through(&self, p: Point) -> &[usize] {
        self.by_point.get(p as usize).map_or(&[], |v| v.as_slice())
    }

    /// Blocks containing every point of `sorted` (as a set).
    fn containing(&self, sorted: &[Point], blocks: &[Block]) -> Vec<usize> {
        if sorted.is_empty() {
            return (0..blocks.len()).collect();
        }
        if (self.min_size..=self.max_size).contains(&sorted.len()) {
            return self.by_subset.get(sorted).cloned().unwrap_or_default();
        }
        self.blocks_through(sorted[0])
            .iter()
            .copied()
            .filter(|&id| sorted.iter().all(|&p| blocks[id].contains(p)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockSystem {
    kind: Kind,
    n: usize,
    t: usize,
    k: usize,
    lambda: usize,
    blocks: Vec<Block>,
    index: CompletionIndex,
}

fn check_parameters(kind: Kind, n: usize, t: usize, k: usize, lambda: usize) -> Result<(), DesignError> {
    let ok = match kind {
        Kind::Psts | Kind::Sts | Kind::Mts | Kind::Dts => t == 2 && k == 3 && lambda == 1,
        Kind::Sqs => t == 3 && k == 4 && lambda == 1,
        Kind::Bd => t >= 2 && t < k && lambda >= 1,
    };
    if ok && k <= n {
        Ok(())
    } else {
        Err(DesignError::BadParameters {
            kind,
            n,
            t,
            k,
            lambda,
        })
    }
}

/// Builds a system and checks the defining condition of its kind.
pub fn build_system(
    kind: Kind,
    n: usize,
    t: usize,
    k: usize,
    lambda: usize,
    blocks: Vec<Vec<Point>>,
) -> Result<BlockSystem, DesignError> {
    let sys = BlockSystem::assemble(kind, n, t, k, lambda, blocks)?;
    let report = validate_system(&sys);
    if report.valid {
        Ok(sys)
    } else {
        Err(DesignError::Invalid { kind, report })
    }
}

pub fn validate_system(sys: &BlockSystem) -> ValidationReport {
    let mut violations = Vec::new();
    match sys.kind {
        Kind::Mts | Kind::Dts => {
            let mut seen: HashMap<(Point, Point), usize> = HashMap::new();
            for b in &sys.blocks {
                for (a, c) in directed_edges(sys.kind, b.points()) {
                    *seen.entry((a, c)).or_default() += 1;
                }
            }
            for ((a, c), found) in seen.into_iter().sorted() {
                if found > 1 {
                    violations.push(Violation {
                        subset: vec![a, c],
                        found,
                        required: 1,
                    });
                }
            }
        }
        Kind::Psts => {
            let counts = subset_counts(sys, 2);
            for (subset, found) in counts.into_iter().sorted() {
                if found > 1 {
                    violations.push(Violation {
                        subset,
                        found,
                        required: 1,
                    });
                }
            }
        }
        Kind::Sts | Kind::Sqs | Kind::Bd => {
            let counts = subset_counts(sys, sys.t);
            for subset in (0..sys.n as Point).combinations(sys.t) {
                let found = counts.get(&subset).copied().unwrap_or(0);
                if found != sys.lambda {
                    violations.push(Violation {
                        subset,
                        found,
                        required: sys.lambda,
                    });
                }
            }
        }
    }
    ValidationReport {
        valid: violations.is_empty(),
        violations,
    }
}

fn subset_counts(sys: &BlockSystem, size: usize) -> HashMap<Vec<Point>, usize> {
    let mut counts: HashMap<Vec<Point>, usize> = HashMap::new();
    for b in &sys.blocks {
        let mut pts = b.points().to_vec();
        pts.sort_unstable();
        for sub in pts.into_iter().combinations(size) {
            *counts.entry(sub).or_default() += 1;
        }
    }
    counts
}

fn directed_edges(kind: Kind, pts: &[Point]) -> Vec<(Point, Point)> {
    match kind {
        Kind::Mts => (0..pts.len())
            .map(|i| (pts[i], pts[(i + 1) % pts.len()]))
            .collect(),
        _ => pts.iter().copied().array_combinations().map(|[a, c]| (a, c)).collect(),
    }
}

impl BlockSystem {
    /// Builds a system after structural checks only (point range, block
    /// size, repeated points, duplicate blocks). The design condition of the
    /// kind is not checked; use [`validate_system`] or [`build_system`].
    pub fn assemble(
        kind: Kind,
        n: usize,
        t: usize,
        k: usize,
        lambda: usize,
        blocks: Vec<Vec<Point>>,
    ) -> Result<BlockSystem, DesignError> {
        check_parameters(kind, n, t, k, lambda)?;
        let mut canon = Vec::with_capacity(blocks.len());
        for (index, pts) in blocks.into_iter().enumerate() {
            if pts.len() != k {
                return Err(DesignError::WrongBlockSize {
                    index,
                    found: pts.len(),
                    expected: k,
                });
            }
            if let Some(&point) = pts.iter().find(|&&p| p as usize >= n) {
                return Err(DesignError::PointOutOfRange { point, n });
            }
            if !pts.iter().all_unique() {
                return Err(DesignError::RepeatedPointInBlock(pts));
            }
            canon.push(Block::canonical(kind, pts));
        }
        canon.sort();
        if let Some((a, _)) = canon.iter().tuple_windows().find(|(a, b)| a == b) {
            return Err(DesignError::DuplicateBlock(a.points.clone()));
        }
        let index = CompletionIndex::build(n, t, k, &canon);
        Ok(BlockSystem {
            kind,
            n,
            t,
            k,
            lambda,
            blocks: canon,
            index,
        })
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// Blocks in canonical (lexicographic) order.
    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: usize) -> &Block {
        &self.blocks[id]
    }

    pub fn index(&self) -> &CompletionIndex {
        &self.index
    }

    /// Ids of the blocks through `p`.
    pub fn blocks_through(&self, p: Point) -> &[usize] {
        self.index.blocks_through(p)
    }

    pub fn rebuild_index(&self) -> CompletionIndex {
        CompletionIndex::build(self.n, self.t, self.k, &self.blocks)
    }

    /// The same blocks viewed as a different kind with compatible parameters.
    pub fn with_kind(&self, kind: Kind) -> Result<BlockSystem, DesignError> {
        BlockSystem::assemble(
            kind,
            self.n,
            self.t,
            self.k,
            self.lambda,
            self.blocks.iter().map(|b| b.points.clone()).collect(),
        )
    }
}

/// Blocks containing `subset`. For DTS the subset must appear in block
/// order; for MTS in the order of some rotation.
pub fn completions<'a>(sys: &'a BlockSystem, subset: &[Point]) -> Result<Vec<&'a Block>, DesignError> {
    if subset.len() >= sys.k {
        return Err(DesignError::SubsetTooLarge {
            size: subset.len(),
            k: sys.k,
        });
    }
    if let Some(&point) = subset.iter().find(|&&p| p as usize >= sys.n) {
        return Err(DesignError::PointOutOfRange { point, n: sys.n });
    }
    if !subset.iter().all_unique() {
        return Err(DesignError::RepeatedPointInSubset(subset.to_vec()));
    }
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    let ids = sys.index.containing(&sorted, &sys.blocks);
    Ok(ids
        .into_iter()
        .map(|id| &sys.blocks[id])
        .filter(|b| !sys.kind.ordered() || respects_order(sys.kind, b, subset))
        .collect())
}

fn respects_order(kind: Kind, block: &Block, subset: &[Point]) -> bool {
    block
        .forbidden_orders(kind)
        .iter()
        .any(|order| is_subsequence(subset, order))
}

fn is_subsequence(needle: &[Point], hay: &[Point]) -> bool {
    let mut it = hay.iter();
    needle.iter().all(|p| it.any(|q| q == p))
}

pub(crate) fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}
