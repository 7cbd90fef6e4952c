//! A two-mode reference decoder small enough that its program-size
//! complexity can be computed by exhaustive search.
//!
//! Programs are bit strings. The first bit selects the mode:
//!
//! * `0 x` outputs `x` verbatim.
//! * `1 r` reads `r` as a length-prefixed part (see
//!   [`pair_pack_len`](crate::coding::pair_pack_len)) holding a 2-adic
//!   repeat count `c >= 2` (digit `d` written as bit `d - 1`), followed by
//!   a pattern `w`; the output is `w` repeated `c` times.
//!
//! Running a program costs one step per header bit (everything before the
//! pattern) plus one per output bit.

use serde::Serialize;
use thiserror::Error;

use crate::bits::BitString;
use crate::coding::{kadic_decode, kadic_encode, pair_pack_len, read_len_prefixed};

/// Default cap on `|x|` for exact complexity.
pub const DEFAULT_EXACT_LIMIT: usize = 16;

/// Effectively unbounded step budget.
pub const UNLIMITED: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecodeFailure {
    #[error("step budget exhausted")]
    OutOfBudget,
    #[error("program denotes nothing: {0}")]
    Malformed(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToyError {
    #[error("exhaustive search limited to |x| <= {max}, got {len}")]
    ResourceLimit { len: usize, max: usize },
}

/// What a program would do, without materializing its output.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Plan {
    header_bits: usize,
    pattern: BitString,
    repeats: u64,
}

impl Plan {
    fn output_len(&self) -> Option<u64> {
        self.repeats.checked_mul(self.pattern.len() as u64)
    }

    fn cost(&self) -> Option<u64> {
        self.output_len()?.checked_add(self.header_bits as u64)
    }

    fn run(&self) -> BitString {
        let mut out = BitString::with_capacity(self.output_len().unwrap_or(0) as usize);
        for _ in 0..self.repeats {
            out.extend_from(&self.pattern);
        }
        out
    }
}

fn plan(p: &BitString) -> Result<Plan, DecodeFailure> {
    let mut r = p.reader();
    match r.read_bit() {
        None => Err(DecodeFailure::Malformed("empty program")),
        Some(false) => Ok(Plan {
            header_bits: 1,
            pattern: r.rest(),
            repeats: 1,
        }),
        Some(true) => {
            let numeral = read_len_prefixed(&mut r)
                .map_err(|_| DecodeFailure::Malformed("bad repeat-count header"))?;
            let digits: Vec<u32> = numeral.bits().iter().map(|&b| u32::from(b) + 1).collect();
            let repeats = kadic_decode(&digits, 2)
                .map_err(|_| DecodeFailure::Malformed("repeat count too large"))?;
            if repeats < 2 {
                return Err(DecodeFailure::Malformed("repeat count below 2"));
            }
            Ok(Plan {
                header_bits: r.position(),
                pattern: r.rest(),
                repeats,
            })
        }
    }
}

/// Runs `p` with at most `budget` steps.
pub fn ref_decode(p: &BitString, budget: u64) -> Result<BitString, DecodeFailure> {
    let plan = plan(p)?;
    match plan.cost() {
        Some(cost) if cost <= budget => Ok(plan.run()),
        _ => Err(DecodeFailure::OutOfBudget),
    }
}

/// Steps `p` needs, when it denotes something.
pub fn cost(p: &BitString) -> Option<u64> {
    plan(p).ok()?.cost()
}

/// The literal program `0 x`.
pub fn literal_program(x: &BitString) -> BitString {
    let mut p = BitString::with_capacity(x.len() + 1);
    p.push(false);
    p.extend_from(x);
    p
}

/// The mode-1 program printing `pattern` `repeats` times.
pub fn repeat_program(pattern: &BitString, repeats: u64) -> BitString {
    assert!(repeats >= 2, "repeat count must be at least 2");
    let numeral: BitString = kadic_encode(repeats, 2)
        .expect("radix 2 is valid")
        .into_iter()
        .map(|d| d == 2)
        .collect();
    let mut p = BitString::new();
    p.push(true);
    p.extend_from(&pair_pack_len(&[numeral], pattern));
    p
}

/// `p` decodes to `x` within `budget` steps.
fn produces(p: &BitString, x: &BitString, budget: u64) -> bool {
    let Ok(plan) = plan(p) else { return false };
    match (plan.output_len(), plan.cost()) {
        (Some(len), Some(cost)) if len == x.len() as u64 && cost <= budget => plan.run() == *x,
        _ => false,
    }
}

/// Approximation from above: the length of the shortest program of length
/// at most `cap` that prints `x` within `budget` steps, or `|x| + 1` (the
/// literal bound) when the search finds nothing shorter.
pub fn k_upper(x: &BitString, cap: usize, budget: u64) -> usize {
    let literal = x.len() + 1;
    for len in 1..=cap.min(literal - 1) {
        if BitString::all_of_length(len).any(|p| produces(&p, x, budget)) {
            return len;
        }
    }
    literal
}

/// Exact toy complexity of `x`, by exhaustive search.
pub fn k_exact(x: &BitString) -> Result<usize, ToyError> {
    k_exact_with_limit(x, DEFAULT_EXACT_LIMIT)
}

pub fn k_exact_with_limit(x: &BitString, limit: usize) -> Result<usize, ToyError> {
    if x.len() > limit {
        return Err(ToyError::ResourceLimit {
            len: x.len(),
            max: limit,
        });
    }
    Ok(k_upper(x, x.len() + 1, UNLIMITED))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceRow {
    pub budget: u64,
    pub bound: usize,
}

/// `F(x, t)` for every budget `t` from 0 until the bound can no longer
/// change.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UpperBoundTrace {
    pub x: BitString,
    pub cap: usize,
    pub rows: Vec<TraceRow>,
}

impl UpperBoundTrace {
    pub fn limit(&self) -> usize {
        self.rows.last().map_or(self.x.len() + 1, |r| r.bound)
    }

    pub fn to_table(&self) -> String {
        let mut out = String::from("t\tF\n");
        for r in &self.rows {
            out.push_str(&format!("{}\t{}\n", r.budget, r.bound));
        }
        out
    }
}

/// Collects every program of length at most `cap` that prints `x` once,
/// then reads off `F(x, t)` for `t = 0..=cap + |x|`; no program within the
/// cap needs more steps than that.
pub fn upper_bound_trace(x: &BitString, cap: usize) -> UpperBoundTrace {
    let literal = x.len() + 1;
    let mut hits: Vec<(u64, usize)> = Vec::new();
    for len in 1..=cap {
        for p in BitString::all_of_length(len) {
            if produces(&p, x, UNLIMITED) {
                hits.push((cost(&p).expect("decodable"), len));
            }
        }
    }
    let max_t = (cap + x.len()) as u64;
    let rows = (0..=max_t)
        .map(|t| TraceRow {
            budget: t,
            bound: hits
                .iter()
                .filter(|&&(c, _)| c <= t)
                .map(|&(_, l)| l)
                .min()
                .unwrap_or(literal)
                .min(literal),
        })
        .collect();
    UpperBoundTrace {
        x: x.clone(),
        cap,
        rows,
    }
}

/// Exact complexity of every string of length `n`, indexed by its value,
/// from one pass over all programs of length at most `n`.
pub fn exact_table(n: usize) -> Result<Vec<usize>, ToyError> {
    if n > DEFAULT_EXACT_LIMIT {
        return Err(ToyError::ResourceLimit {
            len: n,
            max: DEFAULT_EXACT_LIMIT,
        });
    }
    let mut best = vec![n + 1; 1 << n];
    for len in 1..=n {
        for p in BitString::all_of_length(len) {
            let Ok(plan) = plan(&p) else { continue };
            if plan.output_len() == Some(n as u64) {
                let v = plan.run().to_uint().expect("n <= 16") as usize;
                best[v] = best[v].min(len);
            }
        }
    }
    Ok(best)
}
