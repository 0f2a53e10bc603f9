//! 2-Dyck paths: validation, height profiles, the unique first-return
//! decomposition, enumeration and Fuss-Catalan counting.
//!
//! A 2-Dyck path of size `n` is a word of length `3n` over `{U, D}` where an up
//! step adds 1 to the height and a down step subtracts 2. Every prefix must stay
//! at height `>= 0` and the whole word must end at height 0.
//!
//! Step positions are 1-based throughout this module, matching the height
//! profile convention `height(j) = a_1 + ... + a_j`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default upper bound on `n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Step {
    Up,
    Down,
}

impl Step {
    pub fn delta(self) -> i64 {
        match self {
            Step::Up => 1,
            Step::Down => -2,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Step::Up => 'U',
            Step::Down => 'D',
        }
    }
}

/// A validated 2-Dyck path.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DyckPath {
    steps: Vec<Step>,
}

impl PartialOrd for DyckPath {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Paths order like their text form: `D` sorts before `U`.
impl Ord for DyckPath {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let key = |s: &Step| matches!(s, Step::Up);
        self.steps.iter().map(key).cmp(other.steps.iter().map(key))
    }
}

impl DyckPath {
    /// Validates a raw step sequence.
    pub fn new(steps: Vec<Step>) -> Result<Self> {
        let mut height = 0i64;
        for (i, s) in steps.iter().enumerate() {
            height += s.delta();
            if height < 0 {
                return Err(Error::RejectNegativePrefix { position: i + 1, height });
            }
        }
        if height != 0 {
            return Err(Error::RejectNonzeroTotal { height });
        }
        // A non-negative walk ending at 0 with steps +1/-2 always has length 3n,
        // but the check is kept explicit for callers that bypass the walk above.
        if !steps.len().is_multiple_of(3) {
            return Err(Error::RejectLength { len: steps.len() });
        }
        Ok(Self { steps })
    }

    pub(crate) fn from_steps_unchecked(steps: Vec<Step>) -> Self {
        debug_assert!(Self::new(steps.clone()).is_ok());
        Self { steps }
    }

    pub fn empty() -> Self {
        Self { steps: Vec::new() }
    }

    /// `U^{2n} D^n`, the path dominating every other path of size `n`.
    pub fn highest(n: usize) -> Self {
        let mut steps = vec![Step::Up; 2 * n];
        steps.extend(std::iter::repeat_n(Step::Down, n));
        Self { steps }
    }

    /// `(UUD)^n`, the path dominated by every other path of size `n`.
    pub fn lowest(n: usize) -> Self {
        let steps = (0..n).flat_map(|_| [Step::Up, Step::Up, Step::Down]).collect();
        Self { steps }
    }

    /// Number of down steps; the path has length `3n`.
    pub fn size(&self) -> usize {
        self.steps.len() / 3
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// `profile[j - 1] = height(j)` for `j = 1..=3n`.
    pub fn height_profile(&self) -> Vec<i64> {
        self.steps
            .iter()
            .scan(0i64, |h, s| {
                *h += s.delta();
                Some(*h)
            })
            .collect()
    }

    /// Heights including the origin: `heights[j] = height(j)` for `j = 0..=3n`.
    pub fn heights(&self) -> Vec<i64> {
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        out.push(0);
        out.extend(self.height_profile());
        out
    }

    /// Positions (1-based) of the down steps.
    pub fn down_positions(&self) -> Vec<usize> {
        self.steps
            .iter()
            .enumerate()
            .filter(|(_, s)| **s == Step::Down)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Splits a non-empty path as `U A1 U A2 D B`.
    pub fn decompose(&self) -> Result<DyckDecomposition> {
        if self.is_empty() {
            return Err(Error::EmptyPath);
        }
        let (u1, u2, z) = first_return_split(&self.steps);
        let slice = |lo: usize, hi: usize| DyckPath::from_steps_unchecked(self.steps[lo..hi].to_vec());
        // u1, u2, z are 0-based indices of the structural steps.
        Ok(DyckDecomposition {
            a1: slice(u1 + 1, u2),
            a2: slice(u2 + 1, z),
            b: slice(z + 1, self.steps.len()),
            start_a1: u1 + 2,
            start_a2: u2 + 2,
            start_b: z + 2,
        })
    }

    /// Concatenation of two paths (always a path).
    pub fn concat(&self, other: &DyckPath) -> DyckPath {
        let mut steps = self.steps.clone();
        steps.extend_from_slice(&other.steps);
        DyckPath { steps }
    }

    /// Swaps positions `i` and `i + 1` (1-based `i`), returning the result only if valid.
    pub fn swapped(&self, i: usize) -> Option<DyckPath> {
        if i == 0 || i >= self.steps.len() || self.steps[i - 1] == self.steps[i] {
            return None;
        }
        let mut steps = self.steps.clone();
        steps.swap(i - 1, i);
        DyckPath::new(steps).ok()
    }
}

/// 0-based indices of the two structural up steps and the structural down step
/// of a non-empty path.
pub(crate) fn first_return_split(steps: &[Step]) -> (usize, usize, usize) {
    let mut height = 0i64;
    // last_at[h] = last 0-based index j (prefix length) with height(j) = h, for h in {0, 1}.
    let mut last_at = [0usize, usize::MAX];
    let mut z = usize::MAX;
    for (i, s) in steps.iter().enumerate() {
        height += s.delta();
        let prefix = i + 1;
        if height == 0 {
            z = i;
            break;
        }
        if height == 1 {
            last_at[1] = prefix;
        }
    }
    debug_assert!(z != usize::MAX);
    // Structural up i sits right after the last visit to height i - 1.
    (last_at[0], last_at[1], z)
}

impl fmt::Display for DyckPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            write!(f, "{}", s.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for DyckPath {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_path(s)
    }
}

impl Serialize for DyckPath {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyckPath {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        parse_path(&text).map_err(serde::de::Error::custom)
    }
}

/// Parses `U`/`D` text; the arrow glyphs `↗`/`↘` are accepted as well.
/// Whitespace is ignored.
pub fn parse_path(text: &str) -> Result<DyckPath> {
    let mut steps = Vec::with_capacity(text.len());
    for (position, ch) in text.chars().enumerate() {
        match ch {
            'U' | 'u' | '↗' => steps.push(Step::Up),
            'D' | 'd' | '↘' => steps.push(Step::Down),
            c if c.is_whitespace() || c == ',' => {}
            ch => return Err(Error::BadCharacter { ch, position }),
        }
    }
    DyckPath::new(steps)
}

pub fn format_path(path: &DyckPath) -> String {
    path.to_string()
}

/// The three parts of `W = U A1 U A2 D B`. Start indices are 1-based and
/// point at the first step of each part inside the source path (the step
/// right after the structural step that precedes it).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DyckDecomposition {
    pub a1: DyckPath,
    pub a2: DyckPath,
    pub b: DyckPath,
    pub start_a1: usize,
    pub start_a2: usize,
    pub start_b: usize,
}

/// Inverse of [`DyckPath::decompose`].
pub fn compose(a1: &DyckPath, a2: &DyckPath, b: &DyckPath) -> DyckPath {
    let mut steps = Vec::with_capacity(a1.len() + a2.len() + b.len() + 3);
    steps.push(Step::Up);
    steps.extend_from_slice(a1.steps());
    steps.push(Step::Up);
    steps.extend_from_slice(a2.steps());
    steps.push(Step::Down);
    steps.extend_from_slice(b.steps());
    DyckPath { steps }
}

/// `C_{k,n} = binom((k+1)n, n) / (kn + 1)`.
pub fn fuss_catalan(k: u32, n: u64) -> BigUint {
    assert!(k >= 1, "Fuss-Catalan order must be positive");
    let k = u64::from(k);
    let total = (k + 1) * n;
    let mut binom = BigUint::one();
    // binom(total, n) via the multiplicative formula; each partial product is exact.
    for i in 0..n {
        binom *= BigUint::from(total - i);
        binom /= BigUint::from(i + 1);
    }
    let denom = BigUint::from(k * n + 1);
    debug_assert!((&binom % &denom).is_zero());
    binom / denom
}

/// All paths of size `n`, in text order (`D` before `U`), with the default cap.
pub fn enumerate_paths(n: usize) -> Result<Vec<DyckPath>> {
    enumerate_paths_with_cap(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_paths_with_cap(n: usize, cap: usize) -> Result<Vec<DyckPath>> {
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut out = Vec::new();
    let mut buf = Vec::with_capacity(3 * n);
    extend_paths(&mut buf, 0, 2 * n, n, &mut out);
    Ok(out)
}

fn extend_paths(buf: &mut Vec<Step>, height: i64, ups: usize, downs: usize, out: &mut Vec<DyckPath>) {
    if ups == 0 && downs == 0 {
        out.push(DyckPath { steps: buf.clone() });
        return;
    }
    // Down first so the output comes out in text order.
    if downs > 0 && height >= 2 {
        buf.push(Step::Down);
        extend_paths(buf, height - 2, ups, downs - 1, out);
        buf.pop();
    }
    if ups > 0 {
        buf.push(Step::Up);
        extend_paths(buf, height + 1, ups - 1, downs, out);
        buf.pop();
    }
}
