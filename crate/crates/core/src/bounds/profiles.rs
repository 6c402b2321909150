//! Block counts by intersection pattern with the seven segments of a shifted
//! cyclic sequencing: six of length `delta`, then one of length `eps`.

use std::collections::BTreeMap;
use std::fmt;

use super::BoundsError;
use crate::designs::BlockSystem;
use crate::goodness::Sequencing;

pub type Profile = [u8; 6];

pub fn parse_profile(s: &str) -> Option<Profile> {
    let digits: Vec<u8> = s.bytes().map(|b| b.wrapping_sub(b'0')).collect();
    if digits.len() != 6 || digits.iter().any(|&d| d > 9) {
        return None;
    }
    digits.try_into().ok()
}

pub fn profile_name(p: &Profile) -> String {
    p.iter().map(|d| char::from(b'0' + d)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileCounts {
    pub r: usize,
    pub delta: usize,
    pub eps: usize,
    pub block_size: usize,
    pub counts: BTreeMap<Profile, u64>,
}

impl ProfileCounts {
    pub fn get(&self, p: &Profile) -> u64 {
        self.counts.get(p).copied().unwrap_or(0)
    }

    /// Count by name, e.g. `"201000"`. Unknown names count zero.
    pub fn b(&self, name: &str) -> u64 {
        parse_profile(name).map_or(0, |p| self.get(&p))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn n(&self) -> usize {
        6 * self.delta + self.eps
    }

    fn segment_size(&self, i: usize) -> u64 {
        if i == 7 {
            self.eps as u64
        } else {
            self.delta as u64
        }
    }

    /// Intersection sizes with all seven segments.
    fn full(&self, p: &Profile) -> [u64; 7] {
        let mut out = [0u64; 7];
        for (o, &k) in out.iter_mut().zip(p) {
            *o = u64::from(k);
        }
        out[6] = (self.block_size as u64).saturating_sub(p.iter().map(|&k| u64::from(k)).sum());
        out
    }

    pub fn nonzero_forced_zero(&self) -> Vec<(Profile, u64)> {
        self.counts
            .iter()
            .filter(|(p, &c)| c > 0 && is_forced_zero(p, self.block_size, self.delta, self.eps))
            .map(|(p, &c)| (*p, c))
            .collect()
    }
}

impl fmt::Display for ProfileCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shift {} delta {} eps {}", self.r, self.delta, self.eps)?;
        for (p, c) in &self.counts {
            writeln!(f, "b{} {}", profile_name(p), c)?;
        }
        Ok(())
    }
}

fn check_partition(n: usize, delta: usize, eps: usize) -> Result<(), BoundsError> {
    if delta == 0 || 6 * delta + eps != n {
        return Err(BoundsError::BadPartition { n, delta, eps });
    }
    Ok(())
}

/// Segment index (0..7) of each point for shift `r`.
fn segment_of(seq: &Sequencing, r: usize, delta: usize) -> Vec<usize> {
    let n = seq.len();
    let mut seg = vec![6; n];
    for (i, &p) in seq.order().iter().enumerate() {
        let offset = (i + n - r % n) % n;
        if offset < 6 * delta {
            seg[p as usize] = offset / delta;
        }
    }
    seg
}

pub fn segment_profile_counts(
    sys: &BlockSystem,
    seq: &Sequencing,
    r: usize,
    delta: usize,
    eps: usize,
) -> Result<ProfileCounts, BoundsError> {
    check_partition(sys.n(), delta, eps)?;
    if seq.len() != sys.n() {
        return Err(BoundsError::BadParameters(format!(
            "sequencing has {} points, design has {}",
            seq.len(),
            sys.n()
        )));
    }
    let seg = segment_of(seq, r, delta);
    let mut counts = BTreeMap::new();
    for b in sys.blocks() {
        let mut p = [0u8; 6];
        for &x in b.points() {
            let s = seg[x as usize];
            if s < 6 {
                p[s] += 1;
            }
        }
        *counts.entry(p).or_insert(0) += 1;
    }
    Ok(ProfileCounts {
        r: r % sys.n(),
        delta,
        eps,
        block_size: sys.k(),
        counts,
    })
}

/// Whether a block with this profile would lie inside one segment or two
/// cyclically consecutive ones of total length at most `2 delta`.
pub fn is_forced_zero(p: &Profile, block_size: usize, delta: usize, eps: usize) -> bool {
    let k7 = block_size.saturating_sub(p.iter().map(|&k| k as usize).sum());
    let mut support = [false; 7];
    for (s, &k) in support.iter_mut().zip(p) {
        *s = k > 0;
    }
    support[6] = k7 > 0;
    let len = |i: usize| if i == 6 { eps } else { delta };
    (0..7).any(|i| {
        let j = (i + 1) % 7;
        len(i) + len(j) <= 2 * delta && (0..7).all(|x| !support[x] || x == i || x == j)
    }) || (0..7).any(|i| len(i) <= 2 * delta && (0..7).all(|x| !support[x] || x == i))
}

/// All triple profiles that vanish for a cyclic `2 delta`-good sequencing.
pub fn forced_zero_profiles(delta: usize, eps: usize) -> Vec<Profile> {
    all_profiles(3)
        .into_iter()
        .filter(|p| is_forced_zero(p, 3, delta, eps))
        .collect()
}

fn all_profiles(size: u8) -> Vec<Profile> {
    let mut out = Vec::new();
    let mut p = [0u8; 6];
    fn rec(i: usize, left: u8, p: &mut Profile, out: &mut Vec<Profile>) {
        if i == 6 {
            out.push(*p);
            return;
        }
        for k in 0..=left {
            p[i] = k;
            rec(i + 1, left - k, p, out);
        }
        p[i] = 0;
    }
    rec(0, size, &mut p, &mut out);
    out
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairIdentity {
    pub i: usize,
    pub j: usize,
    pub lhs: u64,
    pub rhs: u64,
}

impl PairIdentity {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

/// Counts triples (x, y, B) with x in segment `i`, y in segment `j`
/// (1-based, `i <= j`), and B the block through both.
pub fn pair_identity(c: &ProfileCounts, i: usize, j: usize, skip_forced_zero: bool) -> PairIdentity {
    assert!((1..=7).contains(&i) && (i..=7).contains(&j));
    let lhs = if i == j {
        choose2(c.segment_size(i))
    } else {
        c.segment_size(i) * c.segment_size(j)
    };
    let rhs = c
        .counts
        .iter()
        .filter(|(p, _)| !(skip_forced_zero && is_forced_zero(p, c.block_size, c.delta, c.eps)))
        .map(|(p, &count)| {
            let f = c.full(p);
            let (a, b) = (f[i - 1], f[j - 1]);
            count * if i == j { choose2(a) } else { a * b }
        })
        .sum();
    PairIdentity { i, j, lhs, rhs }
}

/// All 28 raw identities, one per segment pair.
pub fn pair_identities(c: &ProfileCounts) -> Vec<PairIdentity> {
    (1..=7)
        .flat_map(|i| (i..=7).map(move |j| (i, j)))
        .map(|(i, j)| pair_identity(c, i, j, false))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Adjacent,
    OneApart,
    TwoApart,
    TwoInABlock,
    WeightOneSum,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Adjacent,
        Family::OneApart,
        Family::TwoApart,
        Family::TwoInABlock,
        Family::WeightOneSum,
    ];

    pub fn pairs(self) -> Vec<(usize, usize)> {
        match self {
            Family::Adjacent => (1..=5).map(|i| (i, i + 1)).collect(),
            Family::OneApart => (1..=4).map(|i| (i, i + 2)).collect(),
            Family::TwoApart => (1..=3).map(|i| (i, i + 3)).collect(),
            Family::TwoInABlock => (1..=6).map(|i| (i, i)).collect(),
            Family::WeightOneSum => vec![(7, 7)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Adjacent => "adjacent",
            Family::OneApart => "one-apart",
            Family::TwoApart => "two-apart",
            Family::TwoInABlock => "two-in-a-block",
            Family::WeightOneSum => "weight-one-sum",
        }
    }
}

/// The identities in displayed form: the vanishing profiles are left out of
/// the right-hand side.
pub fn displayed_identities(c: &ProfileCounts, family: Family) -> Vec<PairIdentity> {
    family.pairs().into_iter().map(|(i, j)| pair_identity(c, i, j, true)).collect()
}

/// `(b100001 + b200001 + b100002, C(eps+1, 2))`; the first should not exceed the second.
pub fn small_end(c: &ProfileCounts) -> (u64, u64) {
    let lhs = c.b("100001") + c.b("200001") + c.b("100002");
    let e = c.eps as u64;
    (lhs, e * (e + 1) / 2)
}

/// Profile counts summed over all `n` shifts (`n` times the averages).
pub fn shift_sums(
    sys: &BlockSystem,
    seq: &Sequencing,
    delta: usize,
    eps: usize,
) -> Result<BTreeMap<Profile, u64>, BoundsError> {
    let mut sums = BTreeMap::new();
    for r in 0..sys.n() {
        for (p, c) in segment_profile_counts(sys, seq, r, delta, eps)?.counts {
            *sums.entry(p).or_insert(0) += c;
        }
    }
    Ok(sums)
}

pub const SHIFT_CLASSES: [&[&str]; 5] = [
    &["102000", "010200", "001020", "000102"],
    &["201000", "020100", "002010", "000201"],
    &["100200", "010020", "001002"],
    &["200100", "020010", "002001"],
    &["200010", "020001"],
];

/// For each class, the summed counts of its members; each row should be constant.
pub fn shift_equalities(sums: &BTreeMap<Profile, u64>) -> Vec<Vec<(&'static str, u64)>> {
    SHIFT_CLASSES
        .iter()
        .map(|class| {
            class
                .iter()
                .map(|&name| (name, sums.get(&parse_profile(name).unwrap()).copied().unwrap_or(0)))
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::skolem_sts;

    #[test]
    fn names() {
        assert_eq!(parse_profile("201000"), Some([2, 0, 1, 0, 0, 0]));
        assert_eq!(parse_profile("20100"), None);
        assert_eq!(profile_name(&[0, 0, 2, 0, 0, 1]), "002001");
    }

    #[test]
    fn forced_zero_list() {
        let zero: Vec<String> = forced_zero_profiles(6, 1).iter().map(profile_name).collect();
        for name in [
            "210000", "021000", "002100", "000210", "000021", "120000", "012000", "001200", "000120",
            "000012", "200000", "100000", "000002", "000001", "000000",
        ] {
            assert!(zero.contains(&name.to_string()), "{name}");
        }
        assert!(zero.contains(&"300000".to_string()));
        for name in ["111000", "200001", "010000", "201000"] {
            assert!(!zero.contains(&name.to_string()), "{name}");
        }
        let wide: Vec<String> = forced_zero_profiles(6, 7).iter().map(profile_name).collect();
        assert!(wide.contains(&"210000".to_string()));
        assert!(!wide.contains(&"200000".to_string()));
    }

    #[test]
    fn raw_identities_on_skolem() {
        let (sys, seq) = skolem_sts(6).unwrap();
        for r in [0, 5, 36] {
            let c = segment_profile_counts(&sys, &seq, r, 6, 1).unwrap();
            assert_eq!(c.total(), 222);
            let ids = pair_identities(&c);
            assert_eq!(ids.len(), 28);
            assert!(ids.iter().all(PairIdentity::holds), "{ids:?}");
        }
    }

    #[test]
    fn shift_classes_agree() {
        let (sys, seq) = skolem_sts(6).unwrap();
        let sums = shift_sums(&sys, &seq, 6, 1).unwrap();
        for row in shift_equalities(&sums) {
            assert!(row.iter().all(|&(_, v)| v == row[0].1), "{row:?}");
        }
    }

    #[test]
    fn bad_partition() {
        let (sys, seq) = skolem_sts(6).unwrap();
        assert_eq!(
            segment_profile_counts(&sys, &seq, 0, 6, 2),
            Err(BoundsError::BadPartition { n: 37, delta: 6, eps: 2 })
        );
    }
}
