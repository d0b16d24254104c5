//! Index combinatorics.
//!
//! An index is a tuple of positive integers (k_1, ..., k_n). Weight is the
//! sum of the parts, depth the number of parts, height the number of parts
//! that are at least 2. An index is admissible when it is empty or its first
//! part exceeds 1; admissibility is what makes the associated nested sums
//! converge.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("index parts must be positive, got {0}")]
    NonPositivePart(i64),
    #[error("malformed index text {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// Exponent tuple (k_1, ..., k_n) with every part >= 1. The empty tuple is a
/// valid index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Index {
    parts: Vec<u32>,
}

/// Weight/depth/height summary of an index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct IndexStats {
    pub weight: u32,
    pub depth: usize,
    pub height: usize,
    pub admissible: bool,
}

/// One term of the comma/plus interpolation expansion: the collapsed index
/// together with the power of the interpolation parameter it carries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionTerm {
    pub index: Index,
    pub r_exponent: u32,
}

impl Index {
    pub fn new(parts: Vec<u32>) -> Result<Self, IndexError> {
        if let Some(&p) = parts.iter().find(|&&p| p == 0) {
            return Err(IndexError::NonPositivePart(p as i64));
        }
        Ok(Index { parts })
    }

    /// Validating constructor for possibly-negative input (CLI, config).
    pub fn from_signed(parts: &[i64]) -> Result<Self, IndexError> {
        let mut out = Vec::with_capacity(parts.len());
        for &p in parts {
            if p <= 0 {
                return Err(IndexError::NonPositivePart(p));
            }
            out.push(p as u32);
        }
        Ok(Index { parts: out })
    }

    pub fn empty() -> Self {
        Index { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    pub fn weight(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.parts.len()
    }

    pub fn height(&self) -> usize {
        self.parts.iter().filter(|&&p| p >= 2).count()
    }

    pub fn is_admissible(&self) -> bool {
        self.parts.first().map_or(true, |&k1| k1 > 1)
    }

    pub fn stats(&self) -> IndexStats {
        IndexStats {
            weight: self.weight(),
            depth: self.depth(),
            height: self.height(),
            admissible: self.is_admissible(),
        }
    }

    /// Parses comma-separated parts; `{k}^n` repeats k n times, so
    /// `3,{1}^2` means `3,1,1`.
    pub fn parse(text: &str) -> Result<Self, IndexError> {
        let err = |reason: &str| IndexError::Parse {
            text: text.to_owned(),
            reason: reason.to_owned(),
        };
        if text.trim().is_empty() {
            return Err(err("empty index text"));
        }
        let mut parts = Vec::new();
        for raw in text.split(',') {
            let token = raw.trim();
            if token.is_empty() {
                return Err(err("empty component"));
            }
            if let Some(rest) = token.strip_prefix('{') {
                let (base, tail) = rest
                    .split_once('}')
                    .ok_or_else(|| err("unterminated '{'"))?;
                let count = tail
                    .strip_prefix('^')
                    .ok_or_else(|| err("expected '^' after '}'"))?;
                let base: i64 = base
                    .trim()
                    .parse()
                    .map_err(|_| err("repeated part is not an integer"))?;
                let count: u32 = count
                    .trim()
                    .parse()
                    .map_err(|_| err("repeat count is not a nonnegative integer"))?;
                if base <= 0 {
                    return Err(IndexError::NonPositivePart(base));
                }
                parts.extend(std::iter::repeat(base as u32).take(count as usize));
            } else {
                let part: i64 = token
                    .parse()
                    .map_err(|_| err("part is not an integer"))?;
                if part <= 0 {
                    return Err(IndexError::NonPositivePart(part));
                }
                parts.push(part as u32);
            }
        }
        Ok(Index { parts })
    }
}

impl fmt::Display for Index {
    /// Plain comma-separated form; shorthand from `parse` is normalized away.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// Validates a raw part list and returns its statistics.
pub fn index_stats(parts: &[i64]) -> Result<IndexStats, IndexError> {
    Ok(Index::from_signed(parts)?.stats())
}

/// All indices of the given weight, depth and height, in lexicographically
/// descending order. With `admissible_only` the first part must exceed 1.
///
/// The result is empty outside the feasibility region; for admissible sets it
/// is nonempty exactly when weight >= depth + height and depth >= height >= 1.
pub fn enumerate_indices(
    weight: u32,
    depth: usize,
    height: usize,
    admissible_only: bool,
) -> Vec<Index> {
    let mut out = Vec::new();
    if depth == 0 {
        return out;
    }
    let mut prefix = Vec::with_capacity(depth);
    descend(
        weight,
        depth,
        height,
        admissible_only,
        &mut prefix,
        &mut out,
    );
    out
}

/// True when some composition of `weight` into `depth` parts has exactly
/// `height` parts >= 2.
fn feasible(weight: u32, depth: usize, height: usize) -> bool {
    if depth == 0 {
        return weight == 0 && height == 0;
    }
    if height > depth || weight < (depth + height) as u32 {
        return false;
    }
    // Every part is >= 1 and only `height` of them may exceed 1.
    height >= 1 || weight == depth as u32
}

fn descend(
    weight: u32,
    depth: usize,
    height: usize,
    first_at_least_two: bool,
    prefix: &mut Vec<u32>,
    out: &mut Vec<Index>,
) {
    if depth == 0 {
        if weight == 0 && height == 0 {
            out.push(Index {
                parts: prefix.clone(),
            });
        }
        return;
    }
    // Leave at least 1 for each remaining slot.
    let hi = weight.saturating_sub(depth as u32 - 1);
    let lo = if first_at_least_two { 2 } else { 1 };
    for p in (lo..=hi).rev() {
        let used_height = (p >= 2) as usize;
        if used_height > height {
            continue;
        }
        if !feasible(weight - p, depth - 1, height - used_height) {
            continue;
        }
        prefix.push(p);
        descend(weight - p, depth - 1, height - used_height, false, prefix, out);
        prefix.pop();
    }
}

/// Comma/plus expansion of an index: every way of replacing the n-1 separators
/// of (k_1 [] k_2 [] ... [] k_n) by a comma or a plus, each collapsed index
/// weighted by r^(number of pluses). Terms are ordered by the binary pattern
/// value, most significant bit at the first separator, so pattern 0 is the
/// index itself.
pub fn interpolation_expansion(k: &Index) -> Vec<ExpansionTerm> {
    let n = k.depth();
    if n <= 1 {
        return vec![ExpansionTerm {
            index: k.clone(),
            r_exponent: 0,
        }];
    }
    let slots = n - 1;
    let mut out = Vec::with_capacity(1 << slots);
    for pattern in 0u32..(1 << slots) {
        let mut parts: Vec<u32> = Vec::with_capacity(n);
        parts.push(k.parts[0]);
        for j in 0..slots {
            let plus = pattern >> (slots - 1 - j) & 1 == 1;
            if plus {
                *parts.last_mut().expect("nonempty") += k.parts[j + 1];
            } else {
                parts.push(k.parts[j + 1]);
            }
        }
        out.push(ExpansionTerm {
            index: Index { parts },
            r_exponent: pattern.count_ones(),
        });
    }
    out
}
