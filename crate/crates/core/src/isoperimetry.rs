//! Edge-density bound for subgraphs of H(n, k): a subgraph S with average
//! degree `d` satisfies `log2 |V(S)| >= d / (k - 1)`, equivalently
//! `(k - 1) |V| log2 |V| >= 2 |E|`.
//!
//! Only induced subgraphs are checked: for a fixed vertex set they carry the
//! most edges. Comparisons are done in `f64` first; anything within a
//! relative band of `1e-9` is decided exactly by [`crate::logsign`].

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use num_integer::Integer;
use num_rational::Ratio;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hamming::{HammingParams, RankSpace, VertexId};
use crate::logsign::LogForm;

pub const GUARD_BAND: f64 = 1e-9;
pub const EXHAUSTIVE_GUARD: u64 = 16;
pub const SAMPLED_GUARD: u64 = 1 << 20;

/// Inclusion probabilities for sampled subsets; one is drawn per sample.
pub const DENSITY_GRID: [f64; 10] = [0.02, 0.05, 0.1, 0.2, 0.35, 0.5, 0.65, 0.8, 0.9, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubsetStats {
    pub vertex_count: u64,
    pub edge_count: u64,
    pub average_degree: Ratio<u64>,
}

impl SubsetStats {
    fn new(vertex_count: u64, edge_count: u64) -> Self {
        Self {
            vertex_count,
            edge_count,
            average_degree: Ratio::new(2 * edge_count, vertex_count),
        }
    }
}

/// Outcome of one inequality check; `margin` is left side minus right side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck {
    pub holds: bool,
    pub margin: f64,
}

fn in_band(lhs: f64, rhs: f64) -> bool {
    let diff = (lhs - rhs).abs();
    diff <= GUARD_BAND * lhs.abs().max(rhs.abs()) || diff == 0.0
}

/// Decides `lhs >= rhs` from `f64` values, deferring to `exact` inside the
/// guard band. A margin decided exactly equal is reported as `0.0`.
fn decide(lhs: f64, rhs: f64, exact: impl FnOnce() -> Result<Ordering>) -> Result<BoundCheck> {
    if !in_band(lhs, rhs) {
        return Ok(BoundCheck {
            holds: lhs >= rhs,
            margin: lhs - rhs,
        });
    }
    let ord = exact()?;
    Ok(BoundCheck {
        holds: ord != Ordering::Less,
        margin: if ord == Ordering::Equal { 0.0 } else { lhs - rhs },
    })
}

/// `(k-1) log2 |V| >= 2|E| / |V|` from the two counts.
pub fn edge_bound_from_counts(vertex_count: u64, edge_count: u64, k: u32) -> Result<BoundCheck> {
    if vertex_count == 0 {
        return Err(Error::Precondition("empty vertex set".into()));
    }
    let km1 = f64::from(k - 1);
    let lhs = km1 * (vertex_count as f64).log2();
    let rhs = 2.0 * edge_count as f64 / vertex_count as f64;
    decide(lhs, rhs, || {
        LogForm::new()
            .log_term(i128::from(k - 1) * i128::from(vertex_count), u128::from(vertex_count))
            .constant(-2 * i128::from(edge_count))
            .sign()
    })
}

fn membership(vertices: &[VertexId], space: &RankSpace) -> Result<HashSet<u64>> {
    if vertices.is_empty() {
        return Err(Error::Precondition("empty vertex set".into()));
    }
    vertices
        .iter()
        .map(|v| {
            if v.0 < space.vertex_count() {
                Ok(v.0)
            } else {
                Err(Error::RankOutOfRange {
                    rank: v.0,
                    vertex_count: space.vertex_count().to_string(),
                })
            }
        })
        .collect()
}

/// Vertex count, induced edge count and average degree of a vertex set.
/// Duplicated ranks count once.
pub fn subset_stats(vertices: &[VertexId], p: &HammingParams) -> Result<SubsetStats> {
    let space = RankSpace::new(p, u64::MAX)?;
    let set = membership(vertices, &space)?;
    let edges: u64 = set
        .iter()
        .map(|&r| {
            space
                .neighbor_ranks(r)
                .filter(|s| *s > r && set.contains(s))
                .count() as u64
        })
        .sum();
    Ok(SubsetStats::new(set.len() as u64, edges))
}

pub fn check_edge_bound(vertices: &[VertexId], p: &HammingParams) -> Result<BoundCheck> {
    let stats = subset_stats(vertices, p)?;
    edge_bound_from_counts(stats.vertex_count, stats.edge_count, p.k())
}

/// `(a+b) log2(a+b) >= a log2 a + b log2 b + 2a` for `0 < a <= b`.
pub fn check_scalar_ineq(a: Ratio<u64>, b: Ratio<u64>) -> Result<BoundCheck> {
    if *a.numer() == 0 || a > b {
        return Err(Error::Precondition(format!("need 0 < a <= b, got a = {a}, b = {b}")));
    }
    let f = |r: Ratio<u64>| *r.numer() as f64 / *r.denom() as f64;
    let (af, bf) = (f(a), f(b));
    let lhs = (af + bf) * (af + bf).log2();
    let rhs = af * af.log2() + bf * bf.log2() + 2.0 * af;
    decide(lhs, rhs, || scalar_form(a, b)?.sign())
}

/// Over a common denominator D the `log D` terms cancel:
/// `D * (lhs - rhs) = (x+y) log(x+y) - x log x - y log y - 2x`.
fn scalar_form(a: Ratio<u64>, b: Ratio<u64>) -> Result<LogForm> {
    let d = u128::from(*a.denom()).lcm(&u128::from(*b.denom()));
    let x = u128::from(*a.numer()) * (d / u128::from(*a.denom()));
    let y = u128::from(*b.numer()) * (d / u128::from(*b.denom()));
    let signed =
        |v: u128| i128::try_from(v).map_err(|_| Error::Precondition("rational too large".into()));
    Ok(LogForm::new()
        .log_term(signed(x + y)?, x + y)
        .log_term(-signed(x)?, x)
        .log_term(-signed(y)?, y)
        .constant(-2 * signed(x)?))
}

/// Cap on how many violating subsets a report keeps verbatim.
pub const MAX_REPORTED_VIOLATIONS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct LemmaReport {
    pub params: HammingParams,
    pub exhaustive: bool,
    pub subsets_checked: u64,
    pub violation_count: u64,
    pub violations: Vec<Vec<VertexId>>,
    pub min_margin: f64,
    pub min_margin_witness: Vec<VertexId>,
    pub min_margin_stats: SubsetStats,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

struct Tracker {
    memo: HashMap<(u64, u64), BoundCheck>,
    checked: u64,
    violation_count: u64,
    violations: Vec<Vec<VertexId>>,
    best: Option<(f64, SubsetStats, Vec<VertexId>)>,
    k: u32,
}

impl Tracker {
    fn new(k: u32) -> Self {
        Self {
            memo: HashMap::new(),
            checked: 0,
            violation_count: 0,
            violations: Vec::new(),
            best: None,
            k,
        }
    }

    /// Smallest margin wins; ties go to the larger vertex set, then to the
    /// earlier subset.
    fn record(&mut self, stats: SubsetStats, subset: impl FnOnce() -> Vec<VertexId>) -> Result<()> {
        let key = (stats.vertex_count, stats.edge_count);
        let check = match self.memo.get(&key) {
            Some(c) => *c,
            None => {
                let c = edge_bound_from_counts(key.0, key.1, self.k)?;
                self.memo.insert(key, c);
                c
            }
        };
        self.checked += 1;
        let better = match &self.best {
            None => true,
            Some((m, s, _)) => {
                check.margin < *m || (check.margin == *m && stats.vertex_count > s.vertex_count)
            }
        };
        if !check.holds || better {
            let ids = subset();
            if !check.holds {
                self.violation_count += 1;
                if self.violations.len() < MAX_REPORTED_VIOLATIONS {
                    self.violations.push(ids.clone());
                }
            }
            if better {
                self.best = Some((check.margin, stats, ids));
            }
        }
        Ok(())
    }

    fn finish(self, params: HammingParams, exhaustive: bool) -> LemmaReport {
        let (min_margin, min_margin_stats, min_margin_witness) =
            self.best.expect("at least one subset checked");
        LemmaReport {
            params,
            exhaustive,
            subsets_checked: self.checked,
            violation_count: self.violation_count,
            violations: self.violations,
            min_margin,
            min_margin_witness,
            min_margin_stats,
        }
    }
}

/// Checks all `2^(k^n) - 1` nonempty vertex subsets; needs `k^n <= 16`.
pub fn exhaustive_lemma_check(p: &HammingParams) -> Result<LemmaReport> {
    let space = RankSpace::new(p, EXHAUSTIVE_GUARD)?;
    let order = space.vertex_count() as u32;
    let adj: Vec<u32> = (0..space.vertex_count())
        .map(|r| space.neighbor_ranks(r).fold(0u32, |m, s| m | 1 << s))
        .collect();
    let mut tracker = Tracker::new(p.k());
    for mask in 1u32..(1u32 << order) {
        let mut rest = mask;
        let mut twice_edges = 0u32;
        while rest != 0 {
            let v = rest.trailing_zeros();
            twice_edges += (adj[v as usize] & mask).count_ones();
            rest &= rest - 1;
        }
        let stats = SubsetStats::new(u64::from(mask.count_ones()), u64::from(twice_edges / 2));
        tracker.record(stats, || {
            (0..order)
                .filter(|b| mask >> b & 1 == 1)
                .map(|b| VertexId(u64::from(b)))
                .collect()
        })?;
    }
    Ok(tracker.finish(*p, true))
}

/// Seeded random subsets, `samples` of them.
///
/// Generator: `ChaCha8Rng::seed_from_u64(seed)`. For each sample an
/// inclusion probability is picked uniformly from [`DENSITY_GRID`], then
/// every rank in ascending order is kept with that probability
/// (`random_bool`). Empty draws are discarded and redrawn.
pub fn sampled_lemma_check(p: &HammingParams, samples: u64, seed: u64) -> Result<LemmaReport> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    let space = RankSpace::new(p, SAMPLED_GUARD)?;
    let order = space.vertex_count() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut tracker = Tracker::new(p.k());
    let mut member = vec![false; order];
    let mut chosen: Vec<u64> = Vec::with_capacity(order);
    for _ in 0..samples {
        loop {
            chosen.clear();
            let density = DENSITY_GRID[rng.random_range(0..DENSITY_GRID.len())];
            for r in 0..order as u64 {
                let keep = rng.random_bool(density);
                member[r as usize] = keep;
                if keep {
                    chosen.push(r);
                }
            }
            if !chosen.is_empty() {
                break;
            }
        }
        let edges: u64 = chosen
            .iter()
            .map(|&r| {
                space
                    .neighbor_ranks(r)
                    .filter(|&s| s > r && member[s as usize])
                    .count() as u64
            })
            .sum();
        let stats = SubsetStats::new(chosen.len() as u64, edges);
        tracker.record(stats, || chosen.iter().map(|&r| VertexId(r)).collect())?;
    }
    Ok(tracker.finish(*p, false))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamming::{are_adjacent, rank, unrank, Vertex};
    use num_bigint::BigUint;

    fn params(n: usize, k: u32) -> HammingParams {
        HammingParams::new(n, k).unwrap()
    }

    fn ids(ranks: &[u64]) -> Vec<VertexId> {
        ranks.iter().map(|&r| VertexId(r)).collect()
    }

    /// `V^((k-1)V) >= 2^(2E)`, exact and independent of any logarithm.
    fn edge_bound_oracle(v: u64, e: u64, k: u32) -> Ordering {
        let lhs = BigUint::from(v).pow((u64::from(k - 1) * v) as u32);
        let rhs = BigUint::from(1u32) << (2 * e);
        lhs.cmp(&rhs)
    }

    /// `(x+y)^(x+y)` against `x^x y^y 4^x`.
    fn scalar_oracle(x: u32, y: u32) -> Ordering {
        let big = |b: u32, e: u32| BigUint::from(b).pow(e);
        let lhs = big(x + y, x + y);
        let rhs = big(x, x) * big(y, y) * big(4, x);
        lhs.cmp(&rhs)
    }

    #[test]
    fn stats_examples() {
        let p = params(2, 2);
        assert_eq!(subset_stats(&ids(&[2]), &p).unwrap(), SubsetStats::new(1, 0));
        let full = subset_stats(&ids(&[0, 1, 2, 3]), &p).unwrap();
        assert_eq!((full.vertex_count, full.edge_count), (4, 4));
        assert_eq!(full.average_degree, Ratio::from_integer(2));

        let p = params(2, 3);
        let set: Vec<VertexId> = [[0, 0], [0, 1], [1, 2], [2, 2]]
            .iter()
            .map(|d| rank(&Vertex::new(d.to_vec(), &p).unwrap(), &p).unwrap())
            .collect();
        let s = subset_stats(&set, &p).unwrap();
        assert_eq!((s.vertex_count, s.edge_count), (4, 2));
        assert_eq!(s.average_degree, Ratio::from_integer(1));
        assert!(subset_stats(&[], &p).is_err());
        assert!(subset_stats(&ids(&[9]), &p).is_err());
    }

    #[test]
    fn edge_bound_examples() {
        let p = params(2, 2);
        assert_eq!(
            check_edge_bound(&ids(&[0]), &p).unwrap(),
            BoundCheck { holds: true, margin: 0.0 }
        );
        assert_eq!(
            check_edge_bound(&ids(&[0, 1, 2, 3]), &p).unwrap(),
            BoundCheck { holds: true, margin: 0.0 }
        );
        for (n, k) in [(3, 3), (4, 2), (2, 5), (5, 3)] {
            let p = params(n, k);
            let all: Vec<VertexId> = (0..p.vertex_count_u64().unwrap()).map(VertexId).collect();
            let c = check_edge_bound(&all, &p).unwrap();
            assert!(c.holds && c.margin >= 0.0);
        }
    }

    #[test]
    fn edge_bound_agrees_with_power_oracle() {
        for k in 2..=4u32 {
            for v in 1..=40u64 {
                for e in 0..=(v * (v - 1) / 2).min(120) {
                    let c = edge_bound_from_counts(v, e, k).unwrap();
                    let ord = edge_bound_oracle(v, e, k);
                    assert_eq!(c.holds, ord != Ordering::Less, "v={v} e={e} k={k}");
                    if ord == Ordering::Equal {
                        assert_eq!(c.margin, 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn scalar_examples() {
        let r = |n: u64| Ratio::from_integer(n);
        assert_eq!(check_scalar_ineq(r(1), r(1)).unwrap(), BoundCheck { holds: true, margin: 0.0 });
        let c = check_scalar_ineq(r(1), r(3)).unwrap();
        assert!(c.holds);
        assert!((c.margin - (8.0 - 3.0 * 3f64.log2() - 2.0)).abs() < 1e-12);
        assert_eq!(check_scalar_ineq(r(2), r(2)).unwrap(), BoundCheck { holds: true, margin: 0.0 });
        assert!(check_scalar_ineq(r(3), r(2)).is_err());
        assert!(check_scalar_ineq(r(0), r(2)).is_err());
    }

    #[test]
    fn scalar_grid() {
        for a in 1..=100u32 {
            for b in a..=100u32 {
                let c = check_scalar_ineq(Ratio::from_integer(a.into()), Ratio::from_integer(b.into())).unwrap();
                assert!(c.holds, "a={a} b={b}");
                if a <= 30 && b <= 30 {
                    let ord = scalar_oracle(a, b);
                    assert_ne!(ord, Ordering::Less);
                    assert_eq!(c.margin == 0.0, ord == Ordering::Equal, "a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn scalar_equal_rationals_are_tight() {
        let a = Ratio::new(7u64, 3);
        let c = check_scalar_ineq(a, a).unwrap();
        assert_eq!(c, BoundCheck { holds: true, margin: 0.0 });
    }

    #[test]
    fn exhaustive_h22() {
        let r = exhaustive_lemma_check(&params(2, 2)).unwrap();
        assert_eq!(r.subsets_checked, 15);
        assert!(r.passed());
        assert_eq!(r.min_margin, 0.0);
        assert_eq!(r.min_margin_witness, ids(&[0, 1, 2, 3]));
    }

    #[test]
    fn exhaustive_guard() {
        assert!(matches!(
            exhaustive_lemma_check(&params(3, 3)),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn sampled_is_deterministic() {
        let p = params(3, 3);
        let a = sampled_lemma_check(&p, 300, 9).unwrap();
        let b = sampled_lemma_check(&p, 300, 9).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
        assert_eq!(a.subsets_checked, 300);
    }

    #[test]
    fn independent_sets_have_zero_degree() {
        let p = params(3, 3);
        // residue class 0 of Z_3^3 is independent
        let set: Vec<VertexId> = (0..27)
            .map(VertexId)
            .filter(|v| unrank(*v, &p).unwrap().residue(3) == 0)
            .collect();
        let s = subset_stats(&set, &p).unwrap();
        assert_eq!(s.edge_count, 0);
        assert!(check_edge_bound(&set, &p).unwrap().holds);
    }

    #[test]
    fn stats_match_pairwise_oracle() {
        let p = params(4, 4);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let set: Vec<VertexId> = (0..256).filter(|_| rng.random_bool(0.3)).map(VertexId).collect();
            if set.is_empty() {
                continue;
            }
            let verts: Vec<Vertex> = set.iter().map(|&v| unrank(v, &p).unwrap()).collect();
            let mut e = 0;
            for i in 0..verts.len() {
                for j in i + 1..verts.len() {
                    if are_adjacent(&verts[i], &verts[j], &p) {
                        e += 1;
                    }
                }
            }
            assert_eq!(subset_stats(&set, &p).unwrap().edge_count, e);
        }
    }
}
