//! Fixtures shared by the benchmarks.

use seqdesign::constructions::{boolean_sqs, hamming_sts, skolem_sts, sqs_quadruple};
use seqdesign::{BlockSystem, Kind, Sequencing};

pub fn skolem(m: usize) -> (BlockSystem, Sequencing) {
    skolem_sts(m).expect("m is 2 mod 4")
}

pub fn hamming(r: usize) -> BlockSystem {
    hamming_sts(r).expect("r >= 2")
}

pub fn sqs32() -> (BlockSystem, Sequencing) {
    sqs_quadruple(&boolean_sqs(3).expect("SQS(8)")).expect("valid base")
}

/// A partial triple system of `centers` disjoint stars on `n` points.
pub fn stars(centers: u32, n: usize) -> BlockSystem {
    let per = (n as u32 - centers) / (2 * centers);
    let blocks = (0..centers)
        .flat_map(|c| (0..per).map(move |i| vec![c, centers + 2 * (c * per + i), centers + 2 * (c * per + i) + 1]))
        .collect();
    BlockSystem::assemble(Kind::Psts, n, 2, 3, 1, blocks).expect("disjoint stars")
}
