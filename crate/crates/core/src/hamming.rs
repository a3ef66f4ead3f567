//! Implicit Hamming graph H(n, k).
//!
//! Vertices are words of length `n` over `Z_k`; two words are adjacent when
//! they differ in exactly one coordinate. Nothing here materializes an edge
//! list: neighbors are generated on demand from a vertex or its rank.
//!
//! Ranks use the little-endian mixed-radix rule
//! `rank = sum_l v(l) * k^(l-1)`, coordinate 1 being the least significant
//! digit.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::One;

use crate::error::{Error, Result};

/// The pair (n, k) defining H(n, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HammingParams {
    n: usize,
    k: u32,
}

impl HammingParams {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroDimension);
        }
        match k {
            0 => Err(Error::InvalidAlphabet(0)),
            1 => Err(Error::DegenerateAlphabet),
            _ => Ok(Self { n, k }),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// k^n, exactly.
    pub fn vertex_count(&self) -> BigUint {
        big_pow(self.k, self.n)
    }

    /// k^(n-1), the independence number of H(n, k).
    pub fn alpha(&self) -> BigUint {
        big_pow(self.k, self.n - 1)
    }

    /// ceil(sqrt(n)).
    pub fn degree_cap(&self) -> usize {
        ceil_sqrt(self.n)
    }

    /// Degree of every vertex of H(n, k).
    pub fn regular_degree(&self) -> usize {
        self.n * (self.k as usize - 1)
    }

    /// k^n when it fits in a `u64`.
    pub fn vertex_count_u64(&self) -> Option<u64> {
        let exp = u32::try_from(self.n).ok()?;
        u64::from(self.k).checked_pow(exp)
    }

    /// k^n as a `u64`, refusing instances above `limit`.
    pub fn enumerable_count(&self, limit: u64) -> Result<u64> {
        match self.vertex_count_u64() {
            Some(count) if count <= limit => Ok(count),
            _ => Err(Error::LimitExceeded {
                vertex_count: self.vertex_count().to_string(),
                limit,
            }),
        }
    }
}

impl fmt::Display for HammingParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H({},{})", self.n, self.k)
    }
}

pub(crate) fn big_pow(base: u32, exp: usize) -> BigUint {
    let mut result = BigUint::one();
    let mut square = BigUint::from(base);
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result *= &square;
        }
        e >>= 1;
        if e > 0 {
            square = &square * &square;
        }
    }
    result
}

pub(crate) fn ceil_sqrt(n: usize) -> usize {
    let s = n.sqrt();
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// A word of length n over `Z_k`. `digits[0]` is coordinate 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    digits: Vec<u32>,
}

impl Vertex {
    pub fn new(digits: Vec<u32>, p: &HammingParams) -> Result<Self> {
        let v = Self { digits };
        v.validate(p)?;
        Ok(v)
    }

    pub fn zero(p: &HammingParams) -> Self {
        Self {
            digits: vec![0; p.n],
        }
    }

    pub(crate) fn from_digits_unchecked(digits: Vec<u32>) -> Self {
        Self { digits }
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// Digit at 1-based coordinate `coord`.
    pub fn coord(&self, coord: usize) -> u32 {
        self.digits[coord - 1]
    }

    pub fn validate(&self, p: &HammingParams) -> Result<()> {
        if self.digits.len() != p.n {
            return Err(Error::InvalidVertex(format!(
                "expected {} digits, got {}",
                p.n,
                self.digits.len()
            )));
        }
        if let Some(pos) = self.digits.iter().position(|&d| d >= p.k) {
            return Err(Error::InvalidVertex(format!(
                "digit {} at coordinate {} is not below k = {}",
                self.digits[pos],
                pos + 1,
                p.k
            )));
        }
        Ok(())
    }

    /// Digit sum modulo k.
    pub fn residue(&self, k: u32) -> u32 {
        let sum: u64 = self.digits.iter().map(|&d| u64::from(d)).sum();
        (sum % u64::from(k)) as u32
    }

    /// Coordinate 1 first; digits are concatenated when k <= 10 and
    /// dot-separated otherwise.
    pub fn digit_string(&self, k: u32) -> String {
        let parts: Vec<String> = self.digits.iter().map(u32::to_string).collect();
        if k <= 10 {
            parts.concat()
        } else {
            parts.join(".")
        }
    }
}

/// Rank of a vertex in `[0, k^n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexId(pub u64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

pub fn rank(v: &Vertex, p: &HammingParams) -> Result<VertexId> {
    v.validate(p)?;
    let k = u64::from(p.k);
    let mut acc: u64 = 0;
    for &d in v.digits.iter().rev() {
        acc = acc
            .checked_mul(k)
            .and_then(|a| a.checked_add(u64::from(d)))
            .ok_or_else(|| Error::LimitExceeded {
                vertex_count: p.vertex_count().to_string(),
                limit: u64::MAX,
            })?;
    }
    Ok(VertexId(acc))
}

pub fn unrank(id: VertexId, p: &HammingParams) -> Result<Vertex> {
    if let Some(count) = p.vertex_count_u64() {
        if id.0 >= count {
            return Err(Error::RankOutOfRange {
                rank: id.0,
                vertex_count: count.to_string(),
            });
        }
    }
    let k = u64::from(p.k);
    let mut rest = id.0;
    let digits = (0..p.n)
        .map(|_| {
            let d = (rest % k) as u32;
            rest /= k;
            d
        })
        .collect();
    Ok(Vertex { digits })
}

/// All n(k-1) neighbors: coordinate ascending, then replacement digit
/// ascending.
pub fn neighbors(v: &Vertex, p: &HammingParams) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(p.regular_degree());
    for pos in 0..v.digits.len() {
        let current = v.digits[pos];
        for d in (0..p.k).filter(|&d| d != current) {
            let mut digits = v.digits.clone();
            digits[pos] = d;
            out.push(Vertex { digits });
        }
    }
    out
}

pub fn are_adjacent(u: &Vertex, v: &Vertex, _p: &HammingParams) -> bool {
    u.digits.len() == v.digits.len()
        && u.digits.iter().zip(&v.digits).filter(|(a, b)| a != b).count() == 1
}

pub fn alpha(p: &HammingParams) -> BigUint {
    p.alpha()
}

/// Rank arithmetic for instances small enough to enumerate.
#[derive(Debug, Clone)]
pub struct RankSpace {
    params: HammingParams,
    vertex_count: u64,
    place: Vec<u64>,
}

impl RankSpace {
    pub fn new(p: &HammingParams, limit: u64) -> Result<Self> {
        let vertex_count = p.enumerable_count(limit)?;
        let k = u64::from(p.k);
        let mut place = Vec::with_capacity(p.n);
        let mut w = 1u64;
        for _ in 0..p.n {
            place.push(w);
            w = w.wrapping_mul(k);
        }
        Ok(Self {
            params: *p,
            vertex_count,
            place,
        })
    }

    pub fn params(&self) -> &HammingParams {
        &self.params
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    /// Writes the digits of `rank` into `digits` (length n).
    pub fn unrank_into(&self, rank: u64, digits: &mut [u32]) {
        let k = u64::from(self.params.k);
        let mut rest = rank;
        for d in digits.iter_mut() {
            *d = (rest % k) as u32;
            rest /= k;
        }
    }

    pub fn vertex(&self, rank: u64) -> Vertex {
        let mut digits = vec![0; self.params.n];
        self.unrank_into(rank, &mut digits);
        Vertex { digits }
    }

    pub fn rank_of(&self, digits: &[u32]) -> u64 {
        digits.iter().zip(&self.place).map(|(&d, &w)| u64::from(d) * w).sum()
    }

    /// Neighbor ranks in the same order as [`neighbors`].
    pub fn neighbor_ranks(&self, rank: u64) -> impl Iterator<Item = u64> + '_ {
        let k = u64::from(self.params.k);
        self.place.iter().flat_map(move |&w| {
            let current = (rank / w) % k;
            let base = rank - current * w;
            (0..k).filter(move |&d| d != current).map(move |d| base + d * w)
        })
    }
}
