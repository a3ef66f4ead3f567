//! Balanced partitions of the coordinate set `{1, ..., n}`.
//!
//! A partition into blocks `F_1, ..., F_q` is balanced when both `q` and every
//! `|F_j|` lie strictly within 1 of `sqrt(n)`. All checks compare squares of
//! integers against `n`, never a floating-point root.

use std::fmt;

use num_integer::Roots;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BalancedPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

/// First constraint a candidate partition breaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PartitionViolation {
    NoBlocks,
    EmptyBlock { block: usize },
    CoordinateOutOfRange { block: usize, coord: usize },
    NotDisjoint { coord: usize },
    NotCovering { coord: usize },
    BlockCountUnbalanced { q: usize },
    BlockSizeUnbalanced { block: usize, size: usize },
}

impl fmt::Display for PartitionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NoBlocks => write!(f, "partition has no blocks"),
            Self::EmptyBlock { block } => write!(f, "block {block} is empty"),
            Self::CoordinateOutOfRange { block, coord } => {
                write!(f, "block {block} contains coordinate {coord} outside [n]")
            }
            Self::NotDisjoint { coord } => write!(f, "coordinate {coord} appears twice"),
            Self::NotCovering { coord } => write!(f, "coordinate {coord} is not covered"),
            Self::BlockCountUnbalanced { q } => write!(f, "|q - sqrt(n)| >= 1 for q = {q}"),
            Self::BlockSizeUnbalanced { block, size } => {
                write!(f, "block {block} has size {size} with ||F| - sqrt(n)| >= 1")
            }
        }
    }
}

/// `|m - sqrt(n)| < 1`, i.e. `(m-1)^2 < n < (m+1)^2`.
fn within_one_of_root(m: usize, n: usize) -> bool {
    let lo = m.saturating_sub(1);
    let below = m == 0 || lo * lo < n;
    below && (m + 1) * (m + 1) > n
}

impl BalancedPartition {
    /// Wraps arbitrary blocks of 1-based coordinates without checking them;
    /// see [`validate_partition`].
    pub fn from_blocks(n: usize, blocks: Vec<Vec<usize>>) -> Self {
        Self { n, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Block `j`, 1-based.
    pub fn block(&self, j: usize) -> &[usize] {
        &self.blocks[j - 1]
    }

    pub fn max_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn block_sizes(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().map(Vec::len)
    }

    /// `blocks=` grammar body: comma lists joined by `;`.
    pub fn blocks_string(&self) -> String {
        self.blocks
            .iter()
            .map(|b| b.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn parse_blocks(n: usize, text: &str) -> Result<Self> {
        let blocks = text
            .split(';')
            .map(|block| {
                block
                    .split(',')
                    .map(|c| {
                        c.parse::<usize>().map_err(|_| {
                            Error::InvalidPartition(format!("bad coordinate {c:?} in {text:?}"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { n, blocks })
    }

    /// Validates and converts the first violation into an error.
    pub fn checked(self) -> Result<Self> {
        match validate_partition(&self) {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::InvalidPartition(v.to_string())),
        }
    }
}

impl fmt::Display for BalancedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.blocks_string())
    }
}

/// Canonical balanced partition: with `s = floor(sqrt(n))` and `r = n - s^2`,
/// larger blocks (size s+1) come first and blocks take consecutive
/// coordinates.
pub fn make_partition(n: usize) -> Result<BalancedPartition> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    let mut next = 1;
    let blocks = canonical_block_sizes(n)
        .map(|size| {
            let block: Vec<usize> = (next..next + size).collect();
            next += size;
            block
        })
        .collect();
    debug_assert_eq!(next, n + 1);
    Ok(BalancedPartition { n, blocks })
}

/// Block sizes of the canonical partition, as `(size, multiplicity)` runs
/// in block order.
pub(crate) fn canonical_size_runs(n: usize) -> [(usize, usize); 2] {
    let s = n.sqrt();
    let r = n - s * s;
    if r <= s {
        [(s + 1, r), (s, s - r)]
    } else {
        [(s + 1, r - s), (s, 2 * s + 1 - r)]
    }
}

fn canonical_block_sizes(n: usize) -> impl Iterator<Item = usize> {
    canonical_size_runs(n)
        .into_iter()
        .flat_map(|(size, count)| std::iter::repeat_n(size, count))
}

pub fn validate_partition(part: &BalancedPartition) -> Result<(), PartitionViolation> {
    let n = part.n;
    if part.blocks.is_empty() {
        return Err(PartitionViolation::NoBlocks);
    }
    let mut seen = vec![false; n];
    for (idx, block) in part.blocks.iter().enumerate() {
        let j = idx + 1;
        if block.is_empty() {
            return Err(PartitionViolation::EmptyBlock { block: j });
        }
        for &coord in block {
            if coord == 0 || coord > n {
                return Err(PartitionViolation::CoordinateOutOfRange { block: j, coord });
            }
            if std::mem::replace(&mut seen[coord - 1], true) {
                return Err(PartitionViolation::NotDisjoint { coord });
            }
        }
    }
    if let Some(pos) = seen.iter().position(|&s| !s) {
        return Err(PartitionViolation::NotCovering { coord: pos + 1 });
    }
    let q = part.blocks.len();
    if !within_one_of_root(q, n) {
        return Err(PartitionViolation::BlockCountUnbalanced { q });
    }
    for (idx, block) in part.blocks.iter().enumerate() {
        if !within_one_of_root(block.len(), n) {
            return Err(PartitionViolation::BlockSizeUnbalanced {
                block: idx + 1,
                size: block.len(),
            });
        }
    }
    Ok(())
}
