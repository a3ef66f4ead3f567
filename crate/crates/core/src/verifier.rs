//! End-to-end certification of one instance H(n, k).
//!
//! Counting picks the argmax residues `(i1, i2)`; the size and congruence
//! checks are exact arithmetic in every mode. Degree and bipartiteness are
//! checked by scanning member vertices: all of them (exhaustive), a seeded
//! sample (sampled), or none (counts-only).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::construction::{in_witness, select_witness, WitnessSpec};
use crate::counting::{congruence_holds, count_residues, ResidueCounts};
use crate::error::{Error, Result};
use crate::hamming::{HammingParams, RankSpace, Vertex};
use crate::partition::BalancedPartition;

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exhaustive,
    Sampled,
    CountsOnly,
}

impl Mode {
    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Exhaustive => "exhaustive",
            Mode::Sampled => "sampled",
            Mode::CountsOnly => "counts-only",
        }
    }

    /// Exhaustive iff `k^n <= limit`, counts-only otherwise.
    pub fn auto(p: &HammingParams, limit: u64) -> Mode {
        match p.vertex_count_u64() {
            Some(count) if count <= limit => Mode::Exhaustive,
            _ => Mode::CountsOnly,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Mode::Exhaustive),
            "sampled" => Ok(Mode::Sampled),
            "counts-only" => Ok(Mode::CountsOnly),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

impl CheckStatus {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "fail",
            CheckStatus::Skipped => "skipped",
        }
    }
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pass" => Ok(CheckStatus::Pass),
            "fail" => Ok(CheckStatus::Fail),
            "skipped" => Ok(CheckStatus::Skipped),
            other => Err(Error::Parse(format!("unknown check status {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checks {
    pub size_gt_alpha: CheckStatus,
    pub degree_le_bound: CheckStatus,
    pub bipartite: CheckStatus,
    pub congruence: CheckStatus,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        [self.size_gt_alpha, self.degree_le_bound, self.bipartite, self.congruence]
            .iter()
            .all(|c| *c != CheckStatus::Fail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessCertificate {
    pub spec: WitnessSpec,
    pub x_counts: ResidueCounts,
    pub y_counts: ResidueCounts,
    pub size: BigUint,
    pub alpha: BigUint,
    pub delta_bound: usize,
    pub delta_observed: Option<usize>,
    pub mode: Mode,
    pub checks: Checks,
    pub seed: u64,
}

impl WitnessCertificate {
    pub fn passed(&self) -> bool {
        self.checks.all_pass()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CertifyOptions {
    pub mode: Mode,
    pub sample_size: usize,
    pub seed: u64,
    pub limit: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Exhaustive,
            sample_size: 10_000,
            seed: 0,
            limit: DEFAULT_ENUMERATION_LIMIT,
        }
    }
}

/// Result of scanning member vertices of one witness subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ScanOutcome {
    pub members: u64,
    pub max_degree: usize,
    pub same_side_edges: u64,
}

impl ScanOutcome {
    fn merge(self, other: Self) -> Self {
        Self {
            members: self.members + other.members,
            max_degree: self.max_degree.max(other.max_degree),
            same_side_edges: self.same_side_edges + other.same_side_edges,
        }
    }
}

/// Scans one member: closed-form degree, plus every Hamming neighbor
/// classified incrementally. Returns `None` for non-members.
fn scan_vertex(w: &WitnessSpec, digits: &[u32]) -> Result<Option<ScanOutcome>> {
    let k = w.params().k();
    let profile = w.profile(digits);
    let label = profile.label();
    if !w.contains_label(label) {
        return Ok(None);
    }
    let degree = w.member_degree(digits, &profile);
    let mut across = 0usize;
    let mut same_side = 0u64;
    for (c, &old) in digits.iter().enumerate() {
        let block = w.block_of(c);
        for new in (0..k).filter(|&d| d != old) {
            let nl = profile.neighbor_label(block, old, new, k);
            if w.contains_label(nl) {
                if nl.side == label.side {
                    same_side += 1;
                } else {
                    across += 1;
                }
            }
        }
    }
    if across != degree {
        return Err(Error::Inconsistent(format!(
            "closed-form degree {degree} differs from neighbor scan {across}"
        )));
    }
    Ok(Some(ScanOutcome {
        members: 1,
        max_degree: degree + same_side as usize,
        same_side_edges: same_side,
    }))
}

const SHARD: u64 = 1 << 12;

/// Scans every vertex of H(n, k), sharded over the current rayon pool.
pub fn scan_exhaustive(w: &WitnessSpec, limit: u64) -> Result<ScanOutcome> {
    let space = RankSpace::new(w.params(), limit)?;
    let n = w.params().n();
    let shards = space.vertex_count().div_ceil(SHARD);
    (0..shards)
        .into_par_iter()
        .map(|s| {
            let mut digits = vec![0u32; n];
            let mut acc = ScanOutcome::default();
            let end = ((s + 1) * SHARD).min(space.vertex_count());
            for r in s * SHARD..end {
                space.unrank_into(r, &mut digits);
                if let Some(o) = scan_vertex(w, &digits)? {
                    acc = acc.merge(o);
                }
            }
            Ok(acc)
        })
        .try_reduce(ScanOutcome::default, |a, b| Ok(a.merge(b)))
}

pub fn scan_members(w: &WitnessSpec, members: &[Vertex]) -> Result<ScanOutcome> {
    members
        .par_iter()
        .map(|v| {
            scan_vertex(w, v.digits())?
                .ok_or(Error::NotAMember)
        })
        .try_reduce(ScanOutcome::default, |a, b| Ok(a.merge(b)))
}

/// Extra draws allowed per requested member, on top of a fixed slack.
/// Members make up more than `1/k` of all vertices for the argmax pair.
const DRAWS_PER_MEMBER_PER_LETTER: u64 = 64;
const DRAW_SLACK: u64 = 1024;

/// Seeded rejection sampler over members of `w`.
///
/// The generator is `ChaCha8Rng::seed_from_u64(seed)`. Each candidate is
/// drawn as n independent uniform digits via `random_range(0..k)`,
/// coordinate 1 first, which is a uniform draw of a rank; candidates failing
/// [`in_witness`] are discarded. At most `64 * count * k + 1024` candidates
/// are drawn.
pub fn sample_members(w: &WitnessSpec, count: usize, seed: u64) -> Result<Vec<Vertex>> {
    if count == 0 {
        return Err(Error::Precondition("sample size must be at least 1".into()));
    }
    let p = w.params();
    let budget = DRAWS_PER_MEMBER_PER_LETTER
        .saturating_mul(count as u64)
        .saturating_mul(u64::from(p.k()))
        .saturating_add(DRAW_SLACK);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0u64;
    while out.len() < count {
        if attempts == budget {
            return Err(Error::SamplingFailed {
                requested: count,
                accepted: out.len(),
                attempts,
            });
        }
        attempts += 1;
        let digits: Vec<u32> = (0..p.n()).map(|_| rng.random_range(0..p.k())).collect();
        let v = Vertex::new(digits, p)?;
        if in_witness(&v, w) {
            out.push(v);
        }
    }
    Ok(out)
}

/// Degree/bipartite scan for a given spec in the requested mode.
pub fn scan(w: &WitnessSpec, opts: &CertifyOptions) -> Result<Option<ScanOutcome>> {
    match opts.mode {
        Mode::CountsOnly => Ok(None),
        Mode::Exhaustive => scan_exhaustive(w, opts.limit).map(Some),
        Mode::Sampled => {
            let members = sample_members(w, opts.sample_size, opts.seed)?;
            scan_members(w, &members).map(Some)
        }
    }
}

pub fn certify(
    p: &HammingParams,
    part: &BalancedPartition,
    opts: &CertifyOptions,
) -> Result<WitnessCertificate> {
    if opts.mode == Mode::Exhaustive {
        p.enumerable_count(opts.limit)?;
    }
    if opts.mode == Mode::Sampled && opts.sample_size == 0 {
        return Err(Error::Precondition("sampled mode needs a sample size of at least 1".into()));
    }
    let counts = count_residues(p, part)?;
    let (i1, i2) = select_witness(&counts.x_counts, &counts.y_counts);
    let spec = WitnessSpec::new(*p, part.clone(), i1, i2)?;
    let size = counts.x_counts.get(i1) + counts.y_counts.get(i2);
    let alpha = p.alpha();
    if size.is_zero() && opts.mode != Mode::CountsOnly {
        return Err(Error::Inconsistent("selected witness subgraph is empty".into()));
    }
    let delta_bound = p.degree_cap();
    let outcome = scan(&spec, opts)?;
    let (degree_le_bound, bipartite) = match outcome {
        None => (CheckStatus::Skipped, CheckStatus::Skipped),
        Some(o) => (
            CheckStatus::from_bool(o.max_degree <= delta_bound),
            CheckStatus::from_bool(o.same_side_edges == 0),
        ),
    };
    let checks = Checks {
        size_gt_alpha: CheckStatus::from_bool(size > alpha),
        degree_le_bound,
        bipartite,
        congruence: CheckStatus::from_bool(congruence_holds(&counts.x_total, part.q(), p.k())),
    };
    Ok(WitnessCertificate {
        spec,
        x_counts: counts.x_counts,
        y_counts: counts.y_counts,
        size,
        alpha,
        delta_bound,
        delta_observed: outcome.map(|o| o.max_degree),
        mode: opts.mode,
        checks,
        seed: opts.seed,
    })
}

/// Verification summary for one member of the k^2 family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub i1: u32,
    pub i2: u32,
    pub size: BigUint,
    pub delta_observed: Option<usize>,
    pub degree_le_bound: CheckStatus,
    pub bipartite: CheckStatus,
}

/// Scans all k^2 pairs `(i1, i2)`, not just the argmax pair.
pub fn certify_family(
    p: &HammingParams,
    part: &BalancedPartition,
    opts: &CertifyOptions,
) -> Result<Vec<FamilyMember>> {
    let counts = count_residues(p, part)?;
    let mut out = Vec::with_capacity((p.k() * p.k()) as usize);
    for i1 in 0..p.k() {
        for i2 in 0..p.k() {
            let spec = WitnessSpec::new(*p, part.clone(), i1, i2)?;
            let size = counts.x_counts.get(i1) + counts.y_counts.get(i2);
            let outcome = if size.is_zero() { None } else { scan(&spec, opts)? };
            let (degree_le_bound, bipartite) = match outcome {
                None => (CheckStatus::Skipped, CheckStatus::Skipped),
                Some(o) => (
                    CheckStatus::from_bool(o.max_degree <= p.degree_cap()),
                    CheckStatus::from_bool(o.same_side_edges == 0),
                ),
            };
            out.push(FamilyMember {
                i1,
                i2,
                size,
                delta_observed: outcome.map(|o| o.max_degree),
                degree_le_bound,
                bipartite,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{classify, witness_neighbors};
    use crate::hamming::{are_adjacent, neighbors};
    use crate::partition::make_partition;

    fn params(n: usize, k: u32) -> HammingParams {
        HammingParams::new(n, k).unwrap()
    }

    fn exhaustive(n: usize, k: u32) -> WitnessCertificate {
        let opts = CertifyOptions {
            mode: Mode::Exhaustive,
            ..Default::default()
        };
        certify(&params(n, k), &make_partition(n).unwrap(), &opts).unwrap()
    }

    /// Max degree of the induced subgraph by materializing the member set
    /// and testing all pairs.
    fn naive_max_degree(w: &WitnessSpec) -> usize {
        let p = w.params();
        let space = RankSpace::new(p, 1 << 20).unwrap();
        let members: Vec<Vertex> = (0..space.vertex_count())
            .map(|r| space.vertex(r))
            .filter(|v| in_witness(v, w))
            .collect();
        members
            .iter()
            .map(|v| members.iter().filter(|u| are_adjacent(u, v, p)).count())
            .max()
            .unwrap_or(0)
    }

    #[test]
    fn h22_worked_instance() {
        let c = exhaustive(2, 2);
        assert_eq!((c.spec.i1(), c.spec.i2()), (0, 1));
        assert_eq!(c.size, BigUint::from(3u32));
        assert_eq!(c.alpha, BigUint::from(2u32));
        assert_eq!(c.delta_observed, Some(2));
        assert_eq!(c.delta_bound, 2);
        assert_eq!(c.checks.bipartite, CheckStatus::Pass);
        assert!(c.passed());
    }

    #[test]
    fn h93_exhaustive_passes() {
        let c = exhaustive(9, 3);
        assert!(c.passed());
        assert_eq!(c.delta_bound, 3);
        assert!(c.delta_observed.unwrap() <= 3);
    }

    #[test]
    fn h23_size_exceeds_alpha() {
        let c = exhaustive(2, 3);
        assert_eq!(c.size, c.x_counts.max() + c.y_counts.max());
        assert!(c.size > BigUint::from(3u32));
    }

    #[test]
    fn observed_delta_matches_naive() {
        for (n, k) in [(2, 2), (3, 2), (4, 2), (5, 2), (6, 2), (3, 3), (4, 3), (2, 4), (3, 4), (2, 5)] {
            let c = exhaustive(n, k);
            assert_eq!(c.delta_observed, Some(naive_max_degree(&c.spec)), "H({n},{k})");
        }
    }

    #[test]
    fn counts_only_skips_scans() {
        let opts = CertifyOptions {
            mode: Mode::CountsOnly,
            ..Default::default()
        };
        let c = certify(&params(400, 7), &make_partition(400).unwrap(), &opts).unwrap();
        assert_eq!(c.delta_observed, None);
        assert_eq!(c.checks.degree_le_bound, CheckStatus::Skipped);
        assert_eq!(c.checks.size_gt_alpha, CheckStatus::Pass);
        assert_eq!(c.checks.congruence, CheckStatus::Pass);
        assert!(c.passed());
    }

    #[test]
    fn exhaustive_refuses_over_limit() {
        let opts = CertifyOptions {
            mode: Mode::Exhaustive,
            limit: 100,
            ..Default::default()
        };
        assert!(matches!(
            certify(&params(5, 3), &make_partition(5).unwrap(), &opts),
            Err(Error::LimitExceeded { .. })
        ));
    }

    #[test]
    fn sampler_is_deterministic_and_sound() {
        let w = WitnessSpec::new(params(6, 3), make_partition(6).unwrap(), 0, 1).unwrap();
        let a = sample_members(&w, 200, 42).unwrap();
        let b = sample_members(&w, 200, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|v| in_witness(v, &w)));
        assert_ne!(a, sample_members(&w, 200, 43).unwrap());
    }

    #[test]
    fn sampler_h22_draws_from_member_set() {
        let p = params(2, 2);
        let w = WitnessSpec::new(p, make_partition(2).unwrap(), 0, 1).unwrap();
        let members: Vec<Vertex> = [[0, 0], [0, 1], [1, 0]]
            .iter()
            .map(|d| Vertex::new(d.to_vec(), &p).unwrap())
            .collect();
        let got = sample_members(&w, 3, 0).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.iter().all(|v| members.contains(v)));
        assert!(sample_members(&w, 0, 0).is_err());
    }

    #[test]
    fn sampler_reports_exhausted_budget() {
        // H(1,2): X = {0} has residue 0 and Y = {1} residue 1, so (1, 0) has no members
        let w = WitnessSpec::new(params(1, 2), make_partition(1).unwrap(), 1, 0).unwrap();
        match sample_members(&w, 2, 0) {
            Err(Error::SamplingFailed { requested: 2, accepted: 0, attempts }) => {
                assert_eq!(attempts, 64 * 2 * 2 + 1024)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn sampled_never_exceeds_exhaustive() {
        for (n, k) in [(5, 2), (4, 3), (7, 2), (3, 4)] {
            let full = exhaustive(n, k);
            for seed in 0..5 {
                let opts = CertifyOptions {
                    mode: Mode::Sampled,
                    sample_size: 50,
                    seed,
                    ..Default::default()
                };
                let c = certify(&params(n, k), &make_partition(n).unwrap(), &opts).unwrap();
                assert!(c.delta_observed <= full.delta_observed);
                assert!(c.passed());
                assert_eq!(c, certify(&params(n, k), &make_partition(n).unwrap(), &opts).unwrap());
            }
        }
    }

    #[test]
    fn scan_uses_closed_form_consistent_with_witness_neighbors() {
        let p = params(5, 3);
        let w = WitnessSpec::new(p, make_partition(5).unwrap(), 2, 1).unwrap();
        let space = RankSpace::new(&p, 1000).unwrap();
        for r in 0..space.vertex_count() {
            let v = space.vertex(r);
            match scan_vertex(&w, v.digits()).unwrap() {
                Some(o) => {
                    assert_eq!(o.max_degree, witness_neighbors(&v, &w).unwrap().len());
                    let naive = neighbors(&v, &p).iter().filter(|u| in_witness(u, &w)).count();
                    assert_eq!(o.max_degree, naive);
                }
                None => assert!(!w.contains_label(classify(&v, w.partition(), &p))),
            }
        }
    }

    #[test]
    fn family_covers_all_pairs() {
        let p = params(4, 3);
        let fam = certify_family(&p, &make_partition(4).unwrap(), &CertifyOptions::default()).unwrap();
        assert_eq!(fam.len(), 9);
        for m in &fam {
            assert_eq!(m.bipartite, CheckStatus::Pass);
            assert_eq!(m.degree_le_bound, CheckStatus::Pass);
            if m.i1 == m.i2 {
                assert_eq!(m.delta_observed, Some(0));
            }
        }
    }

    #[test]
    fn shard_count_does_not_change_result() {
        let w = WitnessSpec::new(params(9, 3), make_partition(9).unwrap(), 0, 1).unwrap();
        let serial = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let wide = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = serial.install(|| scan_exhaustive(&w, 1 << 20)).unwrap();
        let b = wide.install(|| scan_exhaustive(&w, 1 << 20)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn mode_strings() {
        for m in [Mode::Exhaustive, Mode::Sampled, Mode::CountsOnly] {
            assert_eq!(m.as_str().parse::<Mode>().unwrap(), m);
        }
        assert_eq!(Mode::auto(&params(20, 2), 1 << 20), Mode::Exhaustive);
        assert_eq!(Mode::auto(&params(21, 2), 1 << 20), Mode::CountsOnly);
        assert_eq!(Mode::auto(&params(1000, 7), 1 << 20), Mode::CountsOnly);
    }
}
