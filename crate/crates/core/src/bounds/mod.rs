//! Upper bounds on `ell`: counting bounds in exact arithmetic, the cyclic LP
//! bound, and the segment profile counts behind it.

mod lp;
mod profiles;
mod simplex;

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

pub use lp::{contradiction_margin, cyclic_lp, cyclic_lp_bound, LP_VARS};
pub use profiles::{
    displayed_identities, forced_zero_profiles, is_forced_zero, pair_identities, pair_identity, parse_profile,
    profile_name, segment_profile_counts, shift_equalities, shift_sums, small_end, Family, PairIdentity, Profile,
    ProfileCounts, SHIFT_CLASSES,
};
pub use simplex::{simplex_solve, Constraint, LinearProgram, LpSolution, Relation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BoundsError {
    #[error("bad parameters: {0}")]
    BadParameters(String),
    #[error("b_{index} is negative at ell={ell}")]
    NegativeBi { ell: u64, index: usize },
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
    #[error("malformed linear program: {0}")]
    MalformedLp(String),
    #[error("segments do not partition: 6*{delta} + {eps} != {n}")]
    BadPartition { n: usize, delta: usize, eps: usize },
}

/// Largest `ell` allowed by the classical counting bound for triple systems.
pub fn sv_bound_sts(n: u64) -> u64 {
    n.div_ceil(3)
}

fn big_binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `C(d-1, t-2)` with negative or out-of-range arguments read as zero.
fn widths(d: u64, t: u64) -> BigInt {
    if d == 0 {
        return BigInt::zero();
    }
    big_binom(d - 1, t - 2)
}

fn ratio(a: BigInt) -> BigRational {
    BigRational::from_integer(a)
}

pub fn easy_bound_feasible(t: u64, k: u64, lambda: u64, n: u64, ell: u64) -> Result<bool, BoundsError> {
    if !(2 <= t && t < k && k <= n) || lambda == 0 {
        return Err(BoundsError::BadParameters(format!(
            "need 2 <= t < k <= n and lambda >= 1, got t={t} k={k} lambda={lambda} n={n}"
        )));
    }
    let mut wide = BigInt::zero();
    for d in ell + 1..n {
        wide += BigInt::from(n - d) * widths(d, t);
    }
    Ok(big_binom(n, t) <= big_binom(k, t) * wide)
}

/// Largest `ell` before the first infeasible one.
pub fn easy_bound_max_ell(t: u64, k: u64, lambda: u64, n: u64) -> Result<u64, BoundsError> {
    for ell in 1..=n {
        if !easy_bound_feasible(t, k, lambda, n, ell)? {
            return Ok(ell - 1);
        }
    }
    Ok(n)
}

/// Block counts by intersection size with the first `ell` points, for a
/// design with block size `t + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiVector {
    pub t: u64,
    pub lambda: u64,
    pub n: u64,
    pub ell: u64,
    pub b: Vec<BigRational>,
}

impl BiVector {
    pub fn total(&self) -> BigRational {
        self.b.iter().sum()
    }

    /// `lambda C(n, t) / (t + 1)`, the number of blocks.
    pub fn expected_total(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.lambda) * big_binom(self.n, self.t),
            BigInt::from(self.t + 1),
        )
    }

    pub fn first_negative(&self) -> Option<usize> {
        self.b.iter().position(|v| v.is_negative())
    }
}

pub fn bi_solve(t: u64, lambda: u64, n: u64, ell: u64) -> Result<BiVector, BoundsError> {
    if t < 2 || ell > n || t > n {
        return Err(BoundsError::BadParameters(format!(
            "need t >= 2 and ell, t <= n, got t={t} n={n} ell={ell}"
        )));
    }
    let len = t as usize + 2;
    let mut b = vec![BigRational::zero(); len];
    for i in (0..=t).rev() {
        let top = BigInt::from(lambda) * big_binom(ell, i) * big_binom(n - ell, t - i);
        let next = &b[i as usize + 1] * ratio(BigInt::from(i + 1));
        b[i as usize] = (ratio(top) - next) / ratio(BigInt::from(t + 1 - i));
    }
    Ok(BiVector { t, lambda, n, ell, b })
}

/// Upper bound on the number of blocks missing the first `ell` points.
pub fn svgen_rhs(t: u64, lambda: u64, n: u64, ell: u64) -> BigRational {
    let k = t + 1;
    let mut sum = BigInt::zero();
    if n > 2 * ell {
        for d in ell..n - ell {
            sum += BigInt::from(n - ell - d) * widths(d, t);
        }
    }
    BigRational::new(sum * BigInt::from(lambda), BigInt::from(k - 2))
}

pub fn svgen_feasible(t: u64, lambda: u64, n: u64, ell: u64) -> Result<bool, BoundsError> {
    let v = bi_solve(t, lambda, n, ell)?;
    if let Some(index) = v.first_negative() {
        return Err(BoundsError::NegativeBi { ell, index });
    }
    Ok(v.b[0] <= svgen_rhs(t, lambda, n, ell))
}

/// Largest `ell` before the first infeasible one; a negative `b_i` counts as
/// infeasible.
pub fn svgen_max_ell(t: u64, lambda: u64, n: u64) -> Result<u64, BoundsError> {
    for ell in 0..=n {
        match svgen_feasible(t, lambda, n, ell) {
            Ok(true) => {}
            Ok(false) | Err(BoundsError::NegativeBi { .. }) => return Ok(ell.saturating_sub(1)),
            Err(e) => return Err(e),
        }
    }
    Ok(n)
}

pub fn sqs_poly(x: f64) -> f64 {
    12.0 * x * x * x - 6.0 * x * x - 2.0 * x + 1.0
}

/// Smallest positive root of `12x^3 - 6x^2 - 2x + 1`.
pub fn sqs_alpha_root() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 0.45f64);
    while hi - lo > 1e-13 {
        let mid = (lo + hi) / 2.0;
        if sqs_poly(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo + hi) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &BiVector) -> Vec<i64> {
        v.b.iter()
            .map(|x| {
                assert!(x.is_integer());
                i64::try_from(x.to_integer()).unwrap()
            })
            .collect()
    }

    #[test]
    fn sv() {
        assert_eq!([7, 37, 3].map(sv_bound_sts), [3, 13, 1]);
    }

    #[test]
    fn easy() {
        assert!(easy_bound_feasible(3, 4, 1, 20, 10).unwrap());
        assert!(!easy_bound_feasible(3, 4, 1, 20, 19).unwrap());
        assert_eq!(easy_bound_max_ell(3, 4, 1, 1000).unwrap(), 673);
        assert!(easy_bound_feasible(3, 3, 1, 20, 10).is_err());
    }

    #[test]
    fn bi() {
        let v = bi_solve(2, 1, 7, 3).unwrap();
        assert_eq!(ints(&v), vec![1, 3, 3, 0]);
        assert_eq!(v.total(), v.expected_total());
        assert_eq!(ints(&bi_solve(2, 1, 9, 3).unwrap()), vec![3, 6, 3, 0]);
        let z = bi_solve(3, 1, 16, 0).unwrap();
        assert_eq!(ints(&z), vec![140, 0, 0, 0, 0]);
    }

    #[test]
    fn svgen() {
        assert_eq!(svgen_max_ell(2, 1, 37).unwrap(), 13);
        assert_eq!(svgen_max_ell(2, 1, 7).unwrap(), sv_bound_sts(7));
        assert_eq!(svgen_max_ell(3, 1, 1000).unwrap(), 409);
        assert!(svgen_feasible(3, 1, 20, 2).unwrap());
    }

    #[test]
    fn root() {
        let r = sqs_alpha_root();
        assert!((r - 1.0 / 6f64.sqrt()).abs() < 1e-9);
        assert!(sqs_poly(r).abs() < 1e-10);
        assert!(r < 0.67365);
    }
}
