//! X/Y classification of vertices and the witness subgraphs
//! `H(n,k)[X_i1 ∪ Y_i2]`.
//!
//! A vertex is on the X side when some block of the partition is entirely
//! zero in it, otherwise on the Y side. Both sides are refined by digit sum
//! modulo k. Because an edge changes the digit sum by a nonzero amount, each
//! residue class is independent, so every witness subgraph is bipartite with
//! sides `X_i1` and `Y_i2`.

use std::fmt;

use crate::counting::ResidueCounts;
use crate::error::{Error, Result};
use crate::hamming::{HammingParams, Vertex};
use crate::partition::BalancedPartition;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    X,
    Y,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::X => "X",
            Side::Y => "Y",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ClassLabel {
    pub side: Side,
    pub residue: u32,
}

impl ClassLabel {
    pub fn new(side: Side, residue: u32) -> Self {
        Self { side, residue }
    }
}

pub fn classify(v: &Vertex, part: &BalancedPartition, p: &HammingParams) -> ClassLabel {
    classify_digits(v.digits(), part, p.k())
}

/// [`classify`] on a raw digit slice, coordinate 1 first.
pub(crate) fn classify_digits(digits: &[u32], part: &BalancedPartition, k: u32) -> ClassLabel {
    let side = if has_zero_block(digits, part) { Side::X } else { Side::Y };
    let residue = digits.iter().map(|&d| u64::from(d)).sum::<u64>() % u64::from(k);
    ClassLabel::new(side, residue as u32)
}

pub(crate) fn has_zero_block(digits: &[u32], part: &BalancedPartition) -> bool {
    part.blocks()
        .iter()
        .any(|block| block.iter().all(|&c| digits[c - 1] == 0))
}

/// 1-based indices of the blocks that are entirely zero in `v`.
pub fn zero_blocks(v: &Vertex, part: &BalancedPartition) -> Vec<usize> {
    part.blocks()
        .iter()
        .enumerate()
        .filter(|(_, block)| block.iter().all(|&c| v.coord(c) == 0))
        .map(|(idx, _)| idx + 1)
        .collect()
}

/// One member `H(n,k)[X_i1 ∪ Y_i2]` of the witness family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessSpec {
    params: HammingParams,
    partition: BalancedPartition,
    i1: u32,
    i2: u32,
    // 0-based block index for each 0-based coordinate
    block_of: Vec<usize>,
    // blocks with coordinates sorted ascending (0-based)
    sorted_blocks: Vec<Vec<usize>>,
}

impl WitnessSpec {
    pub fn new(params: HammingParams, partition: BalancedPartition, i1: u32, i2: u32) -> Result<Self> {
        if partition.n() != params.n() {
            return Err(Error::InvalidWitness(format!(
                "partition covers n = {} but params have n = {}",
                partition.n(),
                params.n()
            )));
        }
        if i1 >= params.k() || i2 >= params.k() {
            return Err(Error::InvalidWitness(format!(
                "residues ({i1}, {i2}) must lie in [0, {})",
                params.k()
            )));
        }
        let partition = partition.checked()?;
        let mut block_of = vec![0; params.n()];
        let sorted_blocks = partition
            .blocks()
            .iter()
            .enumerate()
            .map(|(j, block)| {
                let mut coords: Vec<usize> = block.iter().map(|&c| c - 1).collect();
                coords.sort_unstable();
                for &c in &coords {
                    block_of[c] = j;
                }
                coords
            })
            .collect();
        Ok(Self {
            params,
            partition,
            i1,
            i2,
            block_of,
            sorted_blocks,
        })
    }

    pub fn params(&self) -> &HammingParams {
        &self.params
    }

    pub fn partition(&self) -> &BalancedPartition {
        &self.partition
    }

    pub fn i1(&self) -> u32 {
        self.i1
    }

    pub fn i2(&self) -> u32 {
        self.i2
    }

    pub fn contains_label(&self, label: ClassLabel) -> bool {
        match label.side {
            Side::X => label.residue == self.i1,
            Side::Y => label.residue == self.i2,
        }
    }

    /// `(i2 - i1) mod k`, the digit carried by the Y endpoint of every
    /// witness edge at the changed coordinate.
    pub fn pivot_digit(&self) -> u32 {
        (self.i2 + self.params.k() - self.i1) % self.params.k()
    }

    pub(crate) fn profile(&self, digits: &[u32]) -> Profile {
        let mut nonzero = vec![0u32; self.sorted_blocks.len()];
        let mut sum = 0u64;
        for (c, &d) in digits.iter().enumerate() {
            sum += u64::from(d);
            if d != 0 {
                nonzero[self.block_of[c]] += 1;
            }
        }
        let zero_blocks = nonzero.iter().filter(|&&z| z == 0).count();
        Profile {
            residue: (sum % u64::from(self.params.k())) as u32,
            nonzero,
            zero_blocks,
        }
    }

    pub(crate) fn block_of(&self, coord0: usize) -> usize {
        self.block_of[coord0]
    }

    /// Closed-form witness degree of a member, given its profile.
    pub(crate) fn member_degree(&self, digits: &[u32], profile: &Profile) -> usize {
        if self.i1 == self.i2 {
            return 0;
        }
        if profile.zero_blocks > 0 {
            if profile.zero_blocks == 1 {
                let j = profile.nonzero.iter().position(|&z| z == 0).unwrap();
                self.sorted_blocks[j].len()
            } else {
                0
            }
        } else {
            let pivot = self.pivot_digit();
            self.sorted_blocks
                .iter()
                .enumerate()
                .filter(|(j, block)| {
                    profile.nonzero[*j] == 1 && block.iter().any(|&c| digits[c] == pivot)
                })
                .count()
        }
    }
}

/// Digit sum residue and per-block nonzero counts of a vertex, enough to
/// classify any of its Hamming neighbors in O(1).
#[derive(Debug, Clone)]
pub(crate) struct Profile {
    pub residue: u32,
    pub nonzero: Vec<u32>,
    pub zero_blocks: usize,
}

impl Profile {
    pub fn label(&self) -> ClassLabel {
        let side = if self.zero_blocks > 0 { Side::X } else { Side::Y };
        ClassLabel::new(side, self.residue)
    }

    /// Label of the neighbor obtained by changing a digit `old -> new` in
    /// block `block`.
    pub fn neighbor_label(&self, block: usize, old: u32, new: u32, k: u32) -> ClassLabel {
        let residue = (self.residue + k - old + new) % k;
        let before = self.nonzero[block];
        let after = before + u32::from(new != 0) - u32::from(old != 0);
        let zero_blocks =
            self.zero_blocks + usize::from(after == 0) - usize::from(before == 0);
        let side = if zero_blocks > 0 { Side::X } else { Side::Y };
        ClassLabel::new(side, residue)
    }
}

pub fn in_witness(v: &Vertex, w: &WitnessSpec) -> bool {
    w.contains_label(classify(v, &w.partition, &w.params))
}

/// Neighbors of a member inside the witness subgraph, from the closed form:
///
/// * `v ∈ X_i1` has neighbors only if exactly one block `F_j` is zero in it;
///   they are obtained by setting one coordinate of `F_j` to `i2 - i1`.
/// * `v ∈ Y_i2` has one neighbor for each block holding exactly one nonzero
///   digit, equal to `i2 - i1`; that digit is reset to zero.
///
/// Both are empty when `i1 == i2`. X-side neighbors come out in ascending
/// coordinate order, Y-side neighbors in ascending block order.
pub fn witness_neighbors(v: &Vertex, w: &WitnessSpec) -> Result<Vec<Vertex>> {
    v.validate(&w.params)?;
    let label = classify(v, &w.partition, &w.params);
    if !w.contains_label(label) {
        return Err(Error::NotAMember);
    }
    if w.i1 == w.i2 {
        return Ok(Vec::new());
    }
    let pivot = w.pivot_digit();
    let digits = v.digits();
    let emit = |coord0: usize, digit: u32| {
        let mut d = digits.to_vec();
        d[coord0] = digit;
        Vertex::from_digits_unchecked(d)
    };
    let out = match label.side {
        Side::X => {
            let mut zero = w
                .sorted_blocks
                .iter()
                .filter(|block| block.iter().all(|&c| digits[c] == 0));
            match (zero.next(), zero.next()) {
                (Some(block), None) => block.iter().map(|&c| emit(c, pivot)).collect(),
                _ => Vec::new(),
            }
        }
        Side::Y => w
            .sorted_blocks
            .iter()
            .filter_map(|block| {
                let mut nz = block.iter().filter(|&&c| digits[c] != 0);
                match (nz.next(), nz.next()) {
                    (Some(&c), None) if digits[c] == pivot => Some(emit(c, 0)),
                    _ => None,
                }
            })
            .collect(),
    };
    Ok(out)
}

/// Argmax residues of the X and Y count vectors, ties to the smallest index.
pub fn select_witness(xc: &ResidueCounts, yc: &ResidueCounts) -> (u32, u32) {
    (xc.argmax(), yc.argmax())
}
