//! Explicit designs: Skolem triple systems, Hamming and boolean systems, and
//! the quadrupling construction for Steiner quadruple systems.

use itertools::Itertools;
use thiserror::Error;

use crate::designs::{build_system, validate_system, BlockSystem, DesignError, Kind, Point};
use crate::goodness::{Sequencing, SequencingError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("order {0} is not congruent to 2 mod 4")]
    BadResidue(usize),
    #[error("order {0} is odd")]
    OddOrder(usize),
    #[error("parameter {name} = {value} is too small (need at least {min})")]
    TooSmall { name: &'static str, value: usize, min: usize },
    #[error("base system is not a valid SQS of even order: {0}")]
    InvalidBase(String),
    #[error(transparent)]
    Design(#[from] DesignError),
    #[error(transparent)]
    Sequencing(#[from] SequencingError),
}

/// A hooked Skolem sequence, `pairs[i - 1] = (a_i, b_i)` with `b_i - a_i = i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemPairs {
    pub m: usize,
    pub pairs: Vec<(usize, usize)>,
}

impl SkolemPairs {
    pub fn b(&self, i: usize) -> usize {
        self.pairs[i - 1].1
    }
}

/// O'Keefe's hooked Skolem sequence of order `m = 4k + 2`.
pub fn okeefe_pairs(m: usize) -> Result<SkolemPairs, ConstructionError> {
    if m % 4 != 2 {
        return Err(ConstructionError::BadResidue(m));
    }
    if m == 2 {
        return Ok(SkolemPairs {
            m,
            pairs: vec![(1, 2), (3, 5)],
        });
    }
    let k = (m - 2) / 4;
    let mut rows = Vec::with_capacity(m);
    for r in 1..=2 * k {
        rows.push((r, 4 * k + 2 - r));
    }
    rows.push((2 * k + 1, 6 * k + 2));
    rows.push((4 * k + 2, 6 * k + 3));
    rows.push((4 * k + 3, 8 * k + 5));
    for r in 1..k {
        rows.push((4 * k + 3 + r, 8 * k + 4 - r));
    }
    for r in 1..k {
        rows.push((5 * k + 2 + r, 7 * k + 3 - r));
    }
    rows.push((7 * k + 3, 7 * k + 4));
    let mut pairs = vec![(0, 0); m];
    for (a, b) in rows {
        pairs[b - a - 1] = (a, b);
    }
    Ok(SkolemPairs { m, pairs })
}

/// Skolem's triple system on `Z_{6m+1}` with its natural sequencing.
pub fn skolem_sts(m: usize) -> Result<(BlockSystem, Sequencing), ConstructionError> {
    let sk = okeefe_pairs(m)?;
    let n = 6 * m + 1;
    let mut blocks = Vec::with_capacity(n * m);
    for i in 1..=m {
        let c = m + sk.b(i);
        for x in 0..n {
            blocks.push(vec![x as Point, ((x + i) % n) as Point, ((x + c) % n) as Point]);
        }
    }
    let sys = build_system(Kind::Sts, n, 2, 3, 1, blocks)?;
    Ok((sys, Sequencing::natural(n)?))
}

fn at_least(name: &'static str, value: usize, min: usize) -> Result<(), ConstructionError> {
    if value < min {
        Err(ConstructionError::TooSmall { name, value, min })
    } else {
        Ok(())
    }
}

/// The triple system of the binary Hamming code: point `i` stands for the
/// nonzero vector `i + 1`, and blocks are triples with zero XOR.
pub fn hamming_sts(r: usize) -> Result<BlockSystem, ConstructionError> {
    at_least("r", r, 2)?;
    let n = (1usize << r) - 1;
    let blocks = (1..=n as Point)
        .array_combinations()
        .filter(|&[a, b, c]| a ^ b ^ c == 0)
        .map(|[a, b, c]| vec![a - 1, b - 1, c - 1])
        .collect();
    Ok(build_system(Kind::Sts, n, 2, 3, 1, blocks)?)
}

/// The quadruple system on `2^r` points whose blocks have zero XOR.
pub fn boolean_sqs(r: usize) -> Result<BlockSystem, ConstructionError> {
    at_least("r", r, 2)?;
    let n = 1usize << r;
    let mut blocks = Vec::new();
    for [w, x, y] in (0..n as Point).array_combinations() {
        let z = w ^ x ^ y;
        if z > y {
            blocks.push(vec![w, x, y, z]);
        }
    }
    Ok(build_system(Kind::Sqs, n, 3, 4, 1, blocks)?)
}

/// A one-factorization of `K_m`; `factors[i - 1]` is the factor `F_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OneFactorization {
    pub m: usize,
    pub factors: Vec<Vec<(Point, Point)>>,
}

impl OneFactorization {
    pub fn factor(&self, i: usize) -> &[(Point, Point)] {
        &self.factors[i - 1]
    }
}

/// Round-robin factorization: factor `i` pairs `m - 1` with `i - 1` and
/// `i - 1 + j` with `i - 1 - j` (mod `m - 1`).
pub fn circle_one_factorization(m: usize) -> Result<OneFactorization, ConstructionError> {
    if m % 2 == 1 {
        return Err(ConstructionError::OddOrder(m));
    }
    at_least("m", m, 2)?;
    let q = m - 1;
    let factors = (1..m)
        .map(|i| {
            let c = i - 1;
            let mut f = vec![sorted_pair(q, c)];
            for j in 1..m / 2 {
                f.push(sorted_pair((c + j) % q, (c + q - j) % q));
            }
            f
        })
        .collect();
    Ok(OneFactorization { m, factors })
}

fn sorted_pair(a: usize, b: usize) -> (Point, Point) {
    (a.min(b) as Point, a.max(b) as Point)
}

/// Quadruples an SQS on `m` points into one on `4m` points, returned with the
/// sequencing that lists the four copies in turn.
pub fn sqs_quadruple(base: &BlockSystem) -> Result<(BlockSystem, Sequencing), ConstructionError> {
    let m = base.n();
    if base.kind() != Kind::Sqs || m % 2 == 1 || m < 2 || !validate_system(base).valid {
        return Err(ConstructionError::InvalidBase(format!(
            "{} on {} points",
            base.kind(),
            m
        )));
    }
    let f = circle_one_factorization(m)?;
    let v = |g: usize, x: Point| (g * m) as Point + x;
    let mut blocks: Vec<Vec<Point>> = Vec::new();
    for b in base.blocks() {
        for (wi, &w) in b.points().iter().enumerate() {
            let xyz: Vec<Point> = b.points().iter().enumerate().filter(|&(i, _)| i != wi).map(|(_, &p)| p).collect();
            for (lo, hi) in [(0, 2), (1, 3), (2, 0), (3, 1)] {
                let mut blk: Vec<Point> = xyz.iter().map(|&p| v(lo, p)).collect();
                blk.push(v(hi, w));
                blocks.push(blk);
            }
        }
    }
    for [a, b] in (0..m as Point).array_combinations() {
        blocks.push(vec![v(0, a), v(0, b), v(2, a), v(2, b)]);
        blocks.push(vec![v(1, a), v(1, b), v(3, a), v(3, b)]);
    }
    for (i, j) in (0..m).cartesian_product(0..m).filter(|(i, j)| i != j) {
        let (ip, jp) = (i as Point, j as Point);
        for &(a, b) in f.factor((i + m - j) % m) {
            blocks.push(vec![v(0, ip), v(1, a), v(1, b), v(2, jp)]);
            blocks.push(vec![v(1, ip), v(2, a), v(2, b), v(3, jp)]);
            blocks.push(vec![v(0, jp), v(2, ip), v(3, a), v(3, b)]);
            blocks.push(vec![v(0, a), v(0, b), v(1, jp), v(3, ip)]);
        }
    }
    for (r, s) in (0..m as Point).cartesian_product(0..m as Point).filter(|(r, s)| r != s) {
        blocks.push(vec![v(0, r), v(1, s), v(2, r), v(3, s)]);
    }
    for r in 0..m as Point {
        blocks.push(vec![v(0, r), v(1, r), v(2, r), v(3, r)]);
    }
    let sys = build_system(Kind::Sqs, 4 * m, 3, 4, 1, blocks)?;
    Ok((sys, Sequencing::natural(4 * m)?))
}

pub fn natural_sequencing(n: usize) -> Result<Sequencing, ConstructionError> {
    Ok(Sequencing::natural(n)?)
}
