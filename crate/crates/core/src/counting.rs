//! Exact counts of `|X|`, `|X_i|` and `|Y_i|`.
//!
//! Three independent routes are provided:
//!
//! * [`count_x_total`]: inclusion-exclusion over nonempty sets of blocks,
//!   grouped by how many blocks of each size are taken;
//! * [`count_y_residues`]: per-block residue vectors folded by cyclic
//!   convolution over `Z_k`, with `X_i` obtained as the complement of `Y_i`
//!   inside each residue class;
//! * [`enumerate_counts`]: classification of every vertex, for small
//!   instances only.
//!
//! Everything is exact; there is no floating point in this module.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::construction::{classify_digits, has_zero_block};
use crate::error::{Error, Result};
use crate::hamming::{big_pow, HammingParams, RankSpace};
use crate::partition::BalancedPartition;

/// Length-k vector of counts indexed by digit-sum residue.
///
/// Kept as machine words whenever every entry fits in a `u64`, so instances
/// with a large alphabet and few coordinates stay cheap.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueCounts(Repr);

// canonical: `Big` only when some entry exceeds u64
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Small(Vec<u64>),
    Big(Vec<BigUint>),
}

impl ResidueCounts {
    pub fn new(counts: Vec<BigUint>) -> Self {
        match counts.iter().map(ToPrimitive::to_u64).collect::<Option<Vec<_>>>() {
            Some(small) => Self(Repr::Small(small)),
            None => Self(Repr::Big(counts)),
        }
    }

    pub fn from_u64s(counts: impl IntoIterator<Item = u64>) -> Self {
        Self(Repr::Small(counts.into_iter().collect()))
    }

    /// `at_zero` at residue 0 and `elsewhere` at the other `k - 1` residues.
    fn uniform_spike(k: u32, at_zero: BigUint, elsewhere: BigUint) -> Self {
        let k = k as usize;
        match (at_zero.to_u64(), elsewhere.to_u64()) {
            (Some(z), Some(e)) => {
                let mut v = vec![e; k];
                v[0] = z;
                Self(Repr::Small(v))
            }
            _ => {
                let mut v = vec![elsewhere; k];
                v[0] = at_zero;
                Self(Repr::Big(v))
            }
        }
    }

    pub fn len(&self) -> usize {
        match &self.0 {
            Repr::Small(v) => v.len(),
            Repr::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, residue: u32) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(v[residue as usize]),
            Repr::Big(v) => v[residue as usize].clone(),
        }
    }

    pub fn get_u64(&self, residue: u32) -> Option<u64> {
        match &self.0 {
            Repr::Small(v) => Some(v[residue as usize]),
            Repr::Big(v) => v[residue as usize].to_u64(),
        }
    }

    /// The counts as machine words, when every one fits.
    pub fn as_u64s(&self) -> Option<&[u64]> {
        match &self.0 {
            Repr::Small(v) => Some(v),
            Repr::Big(_) => None,
        }
    }

    pub fn to_vec(&self) -> Vec<BigUint> {
        match &self.0 {
            Repr::Small(v) => v.iter().map(|&c| BigUint::from(c)).collect(),
            Repr::Big(v) => v.clone(),
        }
    }

    pub fn total(&self) -> BigUint {
        match &self.0 {
            Repr::Small(v) => BigUint::from(v.iter().map(|&c| u128::from(c)).sum::<u128>()),
            Repr::Big(v) => v.iter().sum(),
        }
    }

    pub fn max(&self) -> BigUint {
        self.get(self.argmax())
    }

    /// Index of the largest count; the smallest such index on ties.
    pub fn argmax(&self) -> u32 {
        fn first_max<T: Ord>(v: &[T]) -> usize {
            let mut best = 0;
            for (i, c) in v.iter().enumerate().skip(1) {
                if *c > v[best] {
                    best = i;
                }
            }
            best
        }
        (match &self.0 {
            Repr::Small(v) => first_max(v),
            Repr::Big(v) => first_max(v),
        }) as u32
    }
}

impl fmt::Display for ResidueCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn join<T: fmt::Display>(f: &mut fmt::Formatter<'_>, v: &[T]) -> fmt::Result {
            for (i, c) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{c}")?;
            }
            Ok(())
        }
        match &self.0 {
            Repr::Small(v) => join(f, v),
            Repr::Big(v) => join(f, v),
        }
    }
}

fn check_consistent(p: &HammingParams, part: &BalancedPartition) -> Result<()> {
    if part.n() != p.n() {
        return Err(Error::InvalidPartition(format!(
            "partition covers n = {} but params have n = {}",
            part.n(),
            p.n()
        )));
    }
    if part.q() == 0 || part.block_sizes().any(|s| s == 0) {
        return Err(Error::InvalidPartition("empty block".into()));
    }
    Ok(())
}

fn size_classes(part: &BalancedPartition) -> BTreeMap<usize, usize> {
    let mut classes = BTreeMap::new();
    for size in part.block_sizes() {
        *classes.entry(size).or_insert(0) += 1;
    }
    classes
}

/// `|X|` by inclusion-exclusion,
/// `sum over nonempty S of (-1)^(|S|+1) k^(n - |F_S|)`.
///
/// Disjoint blocks make a term depend only on how many blocks of each size
/// S contains, so subsets are grouped by those multiplicities with binomial
/// weights. Writing the exponent as the total size of the blocks kept out of
/// S, the grouped sum over one size class `(s, c)` is a polynomial in `k^s`
/// whose coefficients are `C(c, a) (-1)^(c-a)`; it is evaluated by Horner's
/// rule and the classes multiply together.
pub fn count_x_total(p: &HammingParams, part: &BalancedPartition) -> Result<BigUint> {
    check_consistent(p, part)?;
    let k = p.k();
    // signed sum over all S, empty set included
    let mut all_subsets = BigInt::one();
    for (size, count) in size_classes(part) {
        let x = BigInt::from(big_pow(k, size));
        let mut binom = BigInt::one();
        let mut acc = BigInt::zero();
        // a = number of kept blocks, descending from c to 0
        for a in (0..=count).rev() {
            let sign_negative = (count - a) % 2 == 1;
            let coeff = if sign_negative { -&binom } else { binom.clone() };
            acc = acc * &x + coeff;
            // C(c, a-1) = C(c, a) * a / (c - a + 1)
            binom = binom * a / (count - a + 1);
        }
        all_subsets *= acc;
    }
    let empty_term = BigInt::from(p.vertex_count());
    let total = empty_term - all_subsets;
    total
        .to_biguint()
        .ok_or_else(|| Error::Inconsistent("inclusion-exclusion produced a negative count".into()))
}

/// `|X|` by summing all `2^q - 1` inclusion-exclusion terms one by one.
/// Only for `q <= 20`.
pub fn count_x_total_direct(p: &HammingParams, part: &BalancedPartition) -> Result<BigUint> {
    check_consistent(p, part)?;
    let q = part.q();
    if q > 20 {
        return Err(Error::Precondition(format!("direct inclusion-exclusion needs q <= 20, got {q}")));
    }
    let sizes: Vec<usize> = part.block_sizes().collect();
    let mut plus = BigUint::zero();
    let mut minus = BigUint::zero();
    for mask in 1u32..(1 << q) {
        let covered: usize = (0..q).filter(|j| mask >> j & 1 == 1).map(|j| sizes[j]).sum();
        let term = big_pow(p.k(), p.n() - covered);
        if mask.count_ones() % 2 == 1 {
            plus += term;
        } else {
            minus += term;
        }
    }
    Ok(plus - minus)
}

/// `|X| ≡ (-1)^(q+1) (mod k)`, which in particular makes `|X|` not divisible
/// by k.
pub fn x_congruence_check(p: &HammingParams, part: &BalancedPartition) -> Result<bool> {
    let total = count_x_total(p, part)?;
    Ok(congruence_holds(&total, part.q(), p.k()))
}

pub(crate) fn congruence_holds(x_total: &BigUint, q: usize, k: u32) -> bool {
    let residue = (x_total % k).to_u32().expect("residue below k");
    let expected = if q % 2 == 1 { 1 % k } else { k - 1 };
    residue == expected && residue != 0
}

/// `k * max_i X_i > sum_i X_i`.
pub fn pigeonhole_strict(xc: &ResidueCounts) -> bool {
    xc.max() * BigUint::from(xc.len()) > xc.total()
}

/// Residue vector of the form `uniform * 1 + spike * e_0`.
///
/// Per-block Y vectors `k^(m-1) * 1 - e_0` live in this two-dimensional
/// subalgebra of the cyclic convolution algebra over `Z_k`, which is closed
/// under convolution:
/// `(c 1 + d e0) * (a 1 + b e0) = (c a k + c b + d a) 1 + d b e0`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct UniformSpike {
    uniform: BigInt,
    spike: BigInt,
}

impl UniformSpike {
    fn identity() -> Self {
        Self {
            uniform: BigInt::zero(),
            spike: BigInt::one(),
        }
    }

    fn convolve(&self, other: &Self, k: &BigInt) -> Self {
        let uniform = &self.uniform * &other.uniform * k
            + &self.uniform * &other.spike
            + &self.spike * &other.uniform;
        Self {
            uniform,
            spike: &self.spike * &other.spike,
        }
    }

    fn pow(&self, mut exp: usize, k: &BigInt) -> Self {
        let mut result = Self::identity();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                result = result.convolve(&base, k);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.convolve(&base, k);
            }
        }
        result
    }
}

/// Y vector of one block of `m` coordinates: assignments by digit-sum residue
/// (`k^(m-1)` each) minus the all-zero assignment.
fn block_factor(k: u32, m: usize) -> UniformSpike {
    UniformSpike {
        uniform: BigInt::from(big_pow(k, m - 1)),
        spike: -BigInt::one(),
    }
}

fn nonnegative(values: Vec<BigInt>, what: &str) -> Result<ResidueCounts> {
    values
        .into_iter()
        .map(|v| {
            v.to_biguint()
                .ok_or_else(|| Error::Inconsistent(format!("negative {what} count")))
        })
        .collect::<Result<Vec<_>>>()
        .map(ResidueCounts::new)
}

fn fold_y(p: &HammingParams, part: &BalancedPartition) -> Result<(BigUint, BigUint)> {
    check_consistent(p, part)?;
    let k = BigInt::from(p.k());
    let folded = size_classes(part)
        .into_iter()
        .fold(UniformSpike::identity(), |acc, (size, count)| {
            acc.convolve(&block_factor(p.k(), size).pow(count, &k), &k)
        });
    let at_zero = (&folded.uniform + &folded.spike).to_biguint();
    match (at_zero, folded.uniform.to_biguint()) {
        (Some(z), Some(e)) => Ok((z, e)),
        _ => Err(Error::Inconsistent("negative Y count".into())),
    }
}

/// `(Y_0, ..., Y_{k-1})` as the k-cyclic convolution over blocks of
/// `k^(|F_j|-1) * 1 - e_0`. Blocks of equal size are folded by repeated
/// squaring.
pub fn count_y_residues(p: &HammingParams, part: &BalancedPartition) -> Result<ResidueCounts> {
    let (at_zero, elsewhere) = fold_y(p, part)?;
    Ok(ResidueCounts::uniform_spike(p.k(), at_zero, elsewhere))
}

/// Dense cyclic convolution over `Z_k`: `out[(i + j) mod k] += a[i] * b[j]`.
pub fn cyclic_convolve(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    assert_eq!(a.len(), b.len(), "cyclic convolution needs equal lengths");
    let k = a.len();
    let mut out = vec![BigInt::zero(); k];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[(i + j) % k] += x * y;
        }
    }
    out
}

/// Same vector as [`count_y_residues`], folding block by block with dense
/// length-k convolutions. O(q k^2) big-integer products.
pub fn count_y_residues_dense(p: &HammingParams, part: &BalancedPartition) -> Result<ResidueCounts> {
    check_consistent(p, part)?;
    let k = p.k() as usize;
    let mut acc = vec![BigInt::zero(); k];
    acc[0] = BigInt::one();
    for size in part.block_sizes() {
        let per = BigInt::from(big_pow(p.k(), size - 1));
        let mut factor = vec![per; k];
        factor[0] -= 1;
        acc = cyclic_convolve(&acc, &factor);
    }
    nonnegative(acc, "Y")
}

/// All residue counts of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountSummary {
    pub x_counts: ResidueCounts,
    pub y_counts: ResidueCounts,
    pub x_total: BigUint,
}

/// `X_i = k^(n-1) - Y_i`, cross-checked against the inclusion-exclusion
/// total and against `k^n` on every call.
pub fn count_residues(p: &HammingParams, part: &BalancedPartition) -> Result<CountSummary> {
    let (y_zero, y_else) = fold_y(p, part)?;
    let per_class = p.alpha();
    if y_zero > per_class || y_else > per_class {
        return Err(Error::Inconsistent("a Y residue count exceeds k^(n-1)".into()));
    }
    let (x_zero, x_else) = (&per_class - &y_zero, &per_class - &y_else);
    let others = BigUint::from(p.k() - 1);
    let x_sum = &x_zero + &x_else * &others;
    let x_total = count_x_total(p, part)?;
    if x_sum != x_total {
        return Err(Error::Inconsistent(format!(
            "sum of X residues {x_sum} differs from inclusion-exclusion |X| = {x_total}"
        )));
    }
    if &x_sum + &y_zero + &y_else * &others != p.vertex_count() {
        return Err(Error::Inconsistent("|X| + |Y| differs from k^n".into()));
    }
    Ok(CountSummary {
        x_counts: ResidueCounts::uniform_spike(p.k(), x_zero, x_else),
        y_counts: ResidueCounts::uniform_spike(p.k(), y_zero, y_else),
        x_total,
    })
}

pub fn count_x_residues(p: &HammingParams, part: &BalancedPartition) -> Result<ResidueCounts> {
    count_residues(p, part).map(|s| s.x_counts)
}

const SHARD: u64 = 1 << 12;

/// Tallies X and Y residue counts by classifying every vertex. Shards the
/// rank range across the current rayon pool; tallies merge by addition.
pub fn enumerate_counts(
    p: &HammingParams,
    part: &BalancedPartition,
    limit: u64,
) -> Result<(ResidueCounts, ResidueCounts)> {
    check_consistent(p, part)?;
    let space = RankSpace::new(p, limit)?;
    let k = p.k() as usize;
    // each shard keeps 2k tallies, so shards must be long compared to k
    let shard_len = SHARD.max(4 * k as u64);
    let shards = space.vertex_count().div_ceil(shard_len);
    let (x, y) = (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut x = vec![0u64; k];
            let mut y = vec![0u64; k];
            let end = ((s + 1) * shard_len).min(space.vertex_count());
            let mut digits = vec![0u32; p.n()];
            space.unrank_into(s * shard_len, &mut digits);
            let mut residue = classify_digits(&digits, part, p.k()).residue as usize;
            for _ in s * shard_len..end {
                if has_zero_block(&digits, part) {
                    x[residue] += 1;
                } else {
                    y[residue] += 1;
                }
                // next rank, coordinate 1 fastest; each carry turns a k-1
                // into 0, so the residue steps by 1 + carries
                let mut step = 1;
                for d in digits.iter_mut() {
                    *d += 1;
                    if *d < p.k() {
                        break;
                    }
                    *d = 0;
                    step += 1;
                }
                residue += step;
                while residue >= k {
                    residue -= k;
                }
            }
            (x, y)
        })
        .reduce(
            || (vec![0u64; k], vec![0u64; k]),
            |(mut ax, mut ay), (bx, by)| {
                ax.iter_mut().zip(bx).for_each(|(a, b)| *a += b);
                ay.iter_mut().zip(by).for_each(|(a, b)| *a += b);
                (ax, ay)
            },
        );
    Ok((ResidueCounts::from_u64s(x), ResidueCounts::from_u64s(y)))
}
