//! Finite statistical tests in the Martin-Löf style: nested critical
//! regions `V_0 ⊇ V_1 ⊇ ...` whose level-`m` proportion among strings of
//! length `n` is (at most) `2^-m`, checked by exact enumeration. Also
//! compressor-based deficiency and the counting bound on compressible
//! strings.
//!
//! The largest test uses conditional Kolmogorov complexity and is not
//! computable; [`deficiency`] substitutes an unconditional compressor size.

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::compress::{CodecError, Compressor};

/// Largest string length enumerated exhaustively.
pub const MAX_CENSUS_LEN: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RandomnessError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(String),
    #[error("exhaustive census limited to n <= {max}, asked for {n}")]
    ResourceLimit { n: usize, max: usize },
    #[error("unknown test {0:?}")]
    UnknownTest(String),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

/// A family of nested critical regions.
pub trait CriticalRegionTest: Send + Sync {
    fn name(&self) -> &str;
    /// Whether `x` lies in the level-`m` region.
    fn member(&self, m: usize, x: &BitString) -> bool;
    /// Proportion claimed for this test in the literature, if any.
    fn reference_proportion(&self, _m: usize, _n: usize) -> Option<Ratio<u64>> {
        None
    }
}

/// `V_m`: strings beginning with `m` zeros.
pub fn test_zero_prefix(m: usize, x: &BitString) -> bool {
    x.len() >= m && x.bits()[..m].iter().all(|&b| !b)
}

/// `V_m`: strings of length at least `2m` whose length-`m` prefix is the
/// mirror image of the length-`m` suffix.
pub fn test_mirror_ends(m: usize, x: &BitString) -> bool {
    let n = x.len();
    n >= 2 * m && (0..m).all(|i| x.bits()[i] == x.bits()[n - 1 - i])
}

/// `V_m`: strings whose number of zeros is at most
/// `(α + (1-α)2^-m)|x|/2`.
pub fn test_zero_excess(alpha: &BigRational, m: usize, x: &BitString) -> Result<bool, RandomnessError> {
    check_alpha(alpha)?;
    Ok(zero_excess_member(alpha, m, x))
}

fn check_alpha(alpha: &BigRational) -> Result<(), RandomnessError> {
    if alpha <= &BigRational::zero() || alpha >= &BigRational::one() {
        return Err(RandomnessError::AlphaOutOfRange(alpha.to_string()));
    }
    Ok(())
}

fn zero_excess_member(alpha: &BigRational, m: usize, x: &BitString) -> bool {
    let zeros = x.bits().iter().filter(|&&b| !b).count();
    let scale = BigRational::from_integer(BigInt::one() << m);
    let one = BigRational::one();
    let factor = alpha + (&one - alpha) / scale;
    let threshold = factor * BigRational::from_integer(BigInt::from(x.len())) / BigRational::from_integer(2.into());
    // zeros is an integer, so comparing against floor(threshold) is the same
    BigRational::from_integer(BigInt::from(zeros)) <= threshold.floor()
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroPrefix;

impl CriticalRegionTest for ZeroPrefix {
    fn name(&self) -> &str {
        "zero-prefix"
    }

    fn member(&self, m: usize, x: &BitString) -> bool {
        test_zero_prefix(m, x)
    }

    fn reference_proportion(&self, m: usize, n: usize) -> Option<Ratio<u64>> {
        Some(if m > n { Ratio::from_integer(0) } else { Ratio::new(1, 1u64 << m) })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct MirrorEnds;

impl CriticalRegionTest for MirrorEnds {
    fn name(&self) -> &str {
        "mirror-ends"
    }

    fn member(&self, m: usize, x: &BitString) -> bool {
        test_mirror_ends(m, x)
    }

    /// The published figure, `2^-2m`. The census measures `2^-m`.
    fn reference_proportion(&self, m: usize, n: usize) -> Option<Ratio<u64>> {
        Some(if 2 * m > n { Ratio::from_integer(0) } else { Ratio::new(1, 1u64 << (2 * m)) })
    }
}

#[derive(Debug, Clone)]
pub struct ZeroExcess {
    alpha: BigRational,
    label: String,
}

impl ZeroExcess {
    pub fn new(alpha: BigRational) -> Result<Self, RandomnessError> {
        check_alpha(&alpha)?;
        let label = format!("zero-excess(alpha={alpha})");
        Ok(Self { alpha, label })
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }
}

impl CriticalRegionTest for ZeroExcess {
    fn name(&self) -> &str {
        &self.label
    }

    fn member(&self, m: usize, x: &BitString) -> bool {
        zero_excess_member(&self.alpha, m, x)
    }
}

/// Parses `p/q` or a decimal such as `0.75` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        return (!q.is_zero()).then(|| BigRational::new(p, q));
    }
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let digits = format!("{int}{frac}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac.len());
    Some(BigRational::new(numer, denom))
}

/// Looks up a registered test by its command-line name.
pub fn test_by_name(name: &str, alpha: Option<&BigRational>) -> Result<Box<dyn CriticalRegionTest>, RandomnessError> {
    match name {
        "zero-prefix" => Ok(Box::new(ZeroPrefix)),
        "mirror-ends" => Ok(Box::new(MirrorEnds)),
        "zero-excess" => {
            let alpha = alpha
                .cloned()
                .unwrap_or_else(|| BigRational::new(2.into(), 3.into()));
            Ok(Box::new(ZeroExcess::new(alpha)?))
        }
        other => Err(RandomnessError::UnknownTest(other.to_string())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusLevel {
    pub m: usize,
    pub members: u64,
    pub total: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy: Option<bool>,
}

impl CensusLevel {
    pub fn proportion(&self) -> Ratio<u64> {
        Ratio::new(self.members, self.total)
    }
}

/// Exact level-by-level membership counts over all of `{0,1}^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusReport {
    pub test: String,
    pub n: usize,
    pub levels: Vec<CensusLevel>,
}

impl CensusReport {
    /// Levels whose measured proportion differs from the reference figure.
    pub fn discrepancies(&self) -> Vec<usize> {
        self.levels
            .iter()
            .filter(|l| l.discrepancy == Some(true))
            .map(|l| l.m)
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    /// Plain-text table, one row per level.
    pub fn to_table(&self) -> String {
        let mut out = format!("test {}  n={}\n", self.test, self.n);
        out.push_str("m\tmembers\ttotal\tproportion\treference\n");
        for l in &self.levels {
            out.push_str(&format!(
                "{}\t{}\t{}\t{}\t{}{}\n",
                l.m,
                l.members,
                l.total,
                l.proportion(),
                l.reference.as_deref().unwrap_or("-"),
                if l.discrepancy == Some(true) { "\tDISCREPANCY" } else { "" }
            ));
        }
        out
    }
}

/// Counts members at levels `0..=max_level` over every string of length `n`.
pub fn census(
    test: &dyn CriticalRegionTest,
    n: usize,
    max_level: usize,
) -> Result<CensusReport, RandomnessError> {
    if n > MAX_CENSUS_LEN {
        return Err(RandomnessError::ResourceLimit { n, max: MAX_CENSUS_LEN });
    }
    let total = 1u64 << n;
    let counts = (0..total)
        .into_par_iter()
        .fold(
            || vec![0u64; max_level + 1],
            |mut acc, v| {
                let x = BitString::from_uint(v, n);
                for (m, slot) in acc.iter_mut().enumerate() {
                    if test.member(m, &x) {
                        *slot += 1;
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; max_level + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    let levels = counts
        .into_iter()
        .enumerate()
        .map(|(m, members)| {
            let reference = test.reference_proportion(m, n);
            CensusLevel {
                m,
                members,
                total,
                reference: reference.map(|r| r.to_string()),
                discrepancy: reference.map(|r| r != Ratio::new(members, total)),
            }
        })
        .collect();
    Ok(CensusReport {
        test: test.name().to_string(),
        n,
        levels,
    })
}

/// First `(m, x)` with `x ∈ V_{m+1}` but `x ∉ V_m`, if any.
pub fn nesting_violation(test: &dyn CriticalRegionTest, n: usize, max_level: usize) -> Option<(usize, BitString)> {
    BitString::all_of_length(n).find_map(|x| {
        (0..max_level)
            .find(|&m| test.member(m + 1, &x) && !test.member(m, &x))
            .map(|m| (m, x.clone()))
    })
}

/// Largest `γ` with `p_m <= 2^{-γm}` for every level `m >= 1` of the census.
pub fn fitted_gamma(report: &CensusReport) -> Option<f64> {
    report
        .levels
        .iter()
        .filter(|l| l.m >= 1 && l.members > 0)
        .map(|l| -(l.members as f64 / l.total as f64).log2() / l.m as f64)
        .reduce(f64::min)
}

/// `8|x| - C(x) - 1`: positive when the codec finds structure.
pub fn deficiency(codec: &dyn Compressor, x: &[u8]) -> Result<i64, RandomnessError> {
    let c = codec.compressed_bits(x)? as i64;
    Ok(8 * x.len() as i64 - c - 1)
}

/// How binary strings are handed to a byte compressor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Packing {
    /// Eight symbols per byte, zero-padded; raw size is `n` bits.
    Bits,
    /// One ASCII `'0'`/`'1'` byte per symbol; raw size is `8n` bits.
    AsciiBytes,
}

impl Packing {
    pub fn encode(self, x: &BitString) -> Vec<u8> {
        match self {
            Packing::Bits => x.to_bytes(),
            Packing::AsciiBytes => x.bits().iter().map(|&b| if b { b'1' } else { b'0' }).collect(),
        }
    }

    pub fn raw_bits(self, n: usize) -> usize {
        match self {
            Packing::Bits => n,
            Packing::AsciiBytes => 8 * n,
        }
    }
}

/// Number of length-`n` strings compressing below `N - c` bits, against the
/// pigeonhole bound `2^{N-c} - 1` that any injective compressor obeys.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IncompressibilityCensus {
    pub n: usize,
    pub raw_bits: usize,
    pub c: usize,
    pub compressible: u64,
    pub total: u64,
    #[serde(serialize_with = "as_decimal")]
    pub bound: BigUint,
}

fn as_decimal<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl IncompressibilityCensus {
    pub fn holds(&self) -> bool {
        BigUint::from(self.compressible) <= self.bound
    }

    pub fn compressible_fraction(&self) -> Ratio<u64> {
        Ratio::new(self.compressible, self.total)
    }

    /// Fraction of `c`-incompressible strings.
    pub fn incompressible_fraction(&self) -> Ratio<u64> {
        Ratio::from_integer(1) - self.compressible_fraction()
    }
}

/// `2^k - 1` for `k >= 0`, zero otherwise: the number of bit strings
/// shorter than `k`.
pub fn programs_shorter_than(k: i64) -> BigUint {
    if k <= 0 {
        BigUint::zero()
    } else {
        (BigUint::one() << k as u64) - 1u32
    }
}

/// Census from a list of sizes, one per enumerated input, for every `c`
/// in `0..=raw_bits`.
pub fn census_from_sizes(n: usize, raw_bits: usize, sizes: &[u64]) -> Vec<IncompressibilityCensus> {
    (0..=raw_bits)
        .map(|c| {
            let limit = raw_bits as i64 - c as i64;
            let compressible = sizes.iter().filter(|&&s| (s as i64) < limit).count() as u64;
            IncompressibilityCensus {
                n,
                raw_bits,
                c,
                compressible,
                total: sizes.len() as u64,
                bound: programs_shorter_than(limit),
            }
        })
        .collect()
}

/// Exhaustive census over `{0,1}^n` for every `c`.
pub fn incompressibility_profile(
    codec: &dyn Compressor,
    n: usize,
    packing: Packing,
) -> Result<Vec<IncompressibilityCensus>, RandomnessError> {
    if n > MAX_CENSUS_LEN {
        return Err(RandomnessError::ResourceLimit { n, max: MAX_CENSUS_LEN });
    }
    let sizes = (0..1u64 << n)
        .into_par_iter()
        .map(|v| codec.compressed_bits(&packing.encode(&BitString::from_uint(v, n))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(census_from_sizes(n, packing.raw_bits(n), &sizes))
}

pub fn incompressibility_census(
    codec: &dyn Compressor,
    n: usize,
    c: usize,
    packing: Packing,
) -> Result<IncompressibilityCensus, RandomnessError> {
    let profile = incompressibility_profile(codec, n, packing)?;
    let raw = packing.raw_bits(n);
    Ok(profile.into_iter().nth(c.min(raw)).map_or_else(
        || unreachable!("profile covers 0..=raw"),
        |mut e| {
            if c > raw {
                e.c = c;
                e.compressible = 0;
                e.bound = BigUint::zero();
            }
            e
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compress::{Huff0, Identity};

    fn b(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn two_thirds() -> BigRational {
        BigRational::new(2.into(), 3.into())
    }

    #[test]
    fn zero_prefix_membership() {
        assert!(test_zero_prefix(0, &b("1111")));
        assert!(test_zero_prefix(3, &b("0001101")));
        assert!(!test_zero_prefix(3, &b("0101")));
        assert!(!test_zero_prefix(3, &b("00")));
    }

    #[test]
    fn zero_prefix_census_is_exact() {
        let r = census(&ZeroPrefix, 10, 11).unwrap();
        for l in &r.levels {
            let expected = if l.m <= 10 { Ratio::new(1, 1u64 << l.m) } else { Ratio::from_integer(0) };
            assert_eq!(l.proportion(), expected, "m={}", l.m);
        }
        assert!(r.discrepancies().is_empty());
    }

    #[test]
    fn mirror_ends_membership_and_census() {
        assert!(test_mirror_ends(0, &b("")));
        assert!(test_mirror_ends(2, &b("01110")));
        assert!(!test_mirror_ends(2, &b("01101")));
        assert!(!test_mirror_ends(3, &b("01010")));
        let pal = b("011010010110");
        for m in 0..=6 {
            assert!(test_mirror_ends(m, &pal));
        }
        let r = census(&MirrorEnds, 12, 6).unwrap();
        for l in &r.levels {
            assert_eq!(l.proportion(), Ratio::new(1, 1u64 << l.m));
        }
        // the published 2^-2m disagrees for every m >= 1
        assert_eq!(r.discrepancies(), (1..=6).collect::<Vec<_>>());
    }

    #[test]
    fn zero_excess_membership() {
        let a = two_thirds();
        let ones = BitString::repeat_bit(true, 14);
        for m in 0..40 {
            assert!(test_zero_excess(&a, m, &ones).unwrap());
        }
        // n=12, m=0: threshold 6
        assert!(test_zero_excess(&a, 0, &b("000000111111")).unwrap());
        assert!(!test_zero_excess(&a, 0, &b("000000011111")).unwrap());
        // large m: threshold tends to alpha*n/2 = 4
        assert!(test_zero_excess(&a, 60, &b("000011111111")).unwrap());
        assert!(!test_zero_excess(&a, 60, &b("000001111111")).unwrap());
        assert!(test_zero_excess(&BigRational::one(), 1, &ones).is_err());
        assert!(ZeroExcess::new(BigRational::zero()).is_err());
    }

    #[test]
    fn zero_excess_census_decreases() {
        let t = ZeroExcess::new(two_thirds()).unwrap();
        let r = census(&t, 14, 14).unwrap();
        for w in r.levels.windows(2) {
            assert!(w[1].members <= w[0].members);
        }
        let gamma = fitted_gamma(&r).unwrap();
        assert!(gamma > 0.0);
        for l in r.levels.iter().skip(1) {
            assert!((l.members as f64 / l.total as f64) <= 2f64.powf(-gamma * l.m as f64) + 1e-12);
        }
    }

    #[test]
    fn nesting_holds() {
        let tests: Vec<Box<dyn CriticalRegionTest>> = vec![
            Box::new(ZeroPrefix),
            Box::new(MirrorEnds),
            Box::new(ZeroExcess::new(two_thirds()).unwrap()),
        ];
        for t in &tests {
            for n in 0..=10 {
                assert_eq!(nesting_violation(t.as_ref(), n, n + 1), None, "{}", t.name());
            }
        }
    }

    #[test]
    fn census_limits() {
        assert!(matches!(
            census(&ZeroPrefix, 17, 1),
            Err(RandomnessError::ResourceLimit { .. })
        ));
        assert!(matches!(
            test_by_name("runs", None),
            Err(RandomnessError::UnknownTest(_))
        ));
    }

    #[test]
    fn parse_alpha() {
        assert_eq!(parse_rational("2/3").unwrap(), two_thirds());
        assert_eq!(parse_rational("0.75").unwrap(), BigRational::new(3.into(), 4.into()));
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn deficiency_values() {
        assert_eq!(deficiency(&Huff0, b"").unwrap(), -9);
        let run = vec![b'q'; 1024];
        // 8192 raw bits against 48 header + 1024 payload bits
        assert_eq!(deficiency(&Huff0, &run).unwrap(), 8192 - 1072 - 1);
        assert_eq!(deficiency(&Identity, b"abc").unwrap(), -1);
    }

    #[test]
    fn identity_never_compresses() {
        for e in incompressibility_profile(&Identity, 8, Packing::Bits).unwrap() {
            if e.c >= 1 {
                assert_eq!(e.compressible, 0);
            }
            assert!(e.holds());
        }
    }

    #[test]
    fn huff0_counting_bound() {
        for e in incompressibility_profile(&Huff0, 10, Packing::AsciiBytes).unwrap() {
            assert!(e.holds(), "c={}", e.c);
        }
        let e = incompressibility_census(&Huff0, 6, 0, Packing::Bits).unwrap();
        assert!(e.compressible_fraction() <= Ratio::from_integer(1));
        let far = incompressibility_census(&Huff0, 6, 100, Packing::Bits).unwrap();
        assert_eq!(far.compressible, 0);
        assert!(far.holds());
    }

    #[test]
    fn bound_values() {
        assert_eq!(programs_shorter_than(0), BigUint::zero());
        assert_eq!(programs_shorter_than(-3), BigUint::zero());
        assert_eq!(programs_shorter_than(3), BigUint::from(7u32));
    }
}
