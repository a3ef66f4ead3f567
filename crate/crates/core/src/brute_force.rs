//! Exact ground truth on tiny instances: `f(H(n,k))`, the smallest maximum
//! degree over induced subgraphs on `alpha + 1` vertices, and the
//! independence number itself.
//!
//! Both searches work on a bitmask adjacency (k^n <= 64) and count nodes
//! against a budget instead of wall-clock time. Since translations
//! `v -> v + t` are automorphisms of H(n,k), any subset can be moved to one
//! containing rank 0, which the searches assume by default.

use crate::error::{Error, Result};
use crate::hamming::{HammingParams, RankSpace, VertexId};

pub const DEFAULT_GUARD: u64 = 64;
pub const DEFAULT_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub value: usize,
    pub witness_subset: Vec<VertexId>,
    pub nodes_explored: u64,
    /// False when the budget ran out; `value` is then only an upper bound.
    pub exhausted: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub budget: u64,
    pub guard: u64,
    /// Restrict to subsets containing rank 0.
    pub translate_to_origin: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            guard: DEFAULT_GUARD,
            translate_to_origin: true,
        }
    }
}

struct Graph {
    adj: Vec<u64>,
    order: usize,
}

impl Graph {
    fn new(p: &HammingParams, guard: u64) -> Result<Self> {
        let space = RankSpace::new(p, guard.min(64))?;
        let order = space.vertex_count() as usize;
        let adj = (0..space.vertex_count())
            .map(|r| space.neighbor_ranks(r).fold(0u64, |m, s| m | 1 << s))
            .collect();
        Ok(Self { adj, order })
    }

    fn all(&self) -> u64 {
        if self.order == 64 {
            u64::MAX
        } else {
            (1u64 << self.order) - 1
        }
    }
}

fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

fn mask_to_ids(mask: u64) -> Vec<VertexId> {
    bits(mask).map(|b| VertexId(b as u64)).collect()
}

struct MaxDegSearch<'a> {
    g: &'a Graph,
    size: usize,
    budget: u64,
    nodes: u64,
    best: usize,
    best_mask: u64,
    deg: Vec<usize>,
    out_of_budget: bool,
}

impl MaxDegSearch<'_> {
    /// Decides vertices `i..order`; `chosen` holds `count` vertices whose
    /// induced degrees are in `deg` and whose maximum is `cur`.
    fn run(&mut self, i: usize, chosen: u64, count: usize, cur: usize) {
        if self.out_of_budget || self.best == 0 {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.out_of_budget = true;
            return;
        }
        if cur >= self.best {
            return;
        }
        if count == self.size {
            self.best = cur;
            self.best_mask = chosen;
            return;
        }
        let below = if i >= 64 { u64::MAX } else { (1u64 << i) - 1 };
        let remaining = self.g.all() & !below & !chosen;
        // a vertex can still join only if it keeps every degree below best
        let cap = self.best - 1;
        let saturated = bits(chosen).filter(|&v| self.deg[v] >= cap);
        let blocked = saturated.fold(0u64, |m, v| m | self.g.adj[v]);
        let addable = bits(remaining & !blocked)
            .filter(|&j| (self.g.adj[j] & chosen).count_ones() as usize <= cap)
            .count();
        if count + addable < self.size {
            return;
        }
        let Some(j) = bits(remaining).next() else { return };

        let nb = self.g.adj[j] & chosen;
        let dj = nb.count_ones() as usize;
        let mut next = cur.max(dj);
        for u in bits(nb) {
            self.deg[u] += 1;
            next = next.max(self.deg[u]);
        }
        self.deg[j] = dj;
        if next < self.best {
            self.run(j + 1, chosen | 1 << j, count + 1, next);
        }
        for u in bits(nb) {
            self.deg[u] -= 1;
        }
        self.deg[j] = 0;

        self.run(j + 1, chosen, count, cur);
    }
}

fn induced_max_degree(g: &Graph, mask: u64) -> usize {
    bits(mask)
        .map(|v| (g.adj[v] & mask).count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Minimum, over all `size`-subsets, of the induced maximum degree.
pub fn min_maxdeg_subset_with(
    p: &HammingParams,
    size: usize,
    opts: &SearchOptions,
) -> Result<SearchResult> {
    let g = Graph::new(p, opts.guard)?;
    if size == 0 || size > g.order {
        return Err(Error::Precondition(format!(
            "subset size {size} outside [1, {}]",
            g.order
        )));
    }
    // incumbent: the first `size` ranks
    let first = if size == 64 { u64::MAX } else { (1u64 << size) - 1 };
    let mut search = MaxDegSearch {
        g: &g,
        size,
        budget: opts.budget,
        nodes: 0,
        best: induced_max_degree(&g, first),
        best_mask: first,
        deg: vec![0; g.order],
        out_of_budget: false,
    };
    if opts.translate_to_origin {
        search.run(1, 1, 1, 0);
    } else {
        search.run(0, 0, 0, 0);
    }
    Ok(SearchResult {
        value: search.best,
        witness_subset: mask_to_ids(search.best_mask),
        nodes_explored: search.nodes,
        exhausted: !search.out_of_budget,
    })
}

pub fn min_maxdeg_subset(p: &HammingParams, size: usize, budget: u64) -> Result<SearchResult> {
    min_maxdeg_subset_with(
        p,
        size,
        &SearchOptions {
            budget,
            ..Default::default()
        },
    )
}

/// `f(H(n,k))`: the search above with `size = k^(n-1) + 1`.
pub fn exact_f(p: &HammingParams, budget: u64) -> Result<SearchResult> {
    exact_f_with(
        p,
        &SearchOptions {
            budget,
            ..Default::default()
        },
    )
}

pub fn exact_f_with(p: &HammingParams, opts: &SearchOptions) -> Result<SearchResult> {
    p.enumerable_count(opts.guard.min(64))?;
    let alpha = p.vertex_count_u64().unwrap() / u64::from(p.k());
    min_maxdeg_subset_with(p, alpha as usize + 1, opts)
}

struct IndependentSearch<'a> {
    g: &'a Graph,
    budget: u64,
    nodes: u64,
    best: usize,
}

impl IndependentSearch<'_> {
    /// Greedy clique cover of `cand`; an independent set meets each clique
    /// at most once.
    fn cover_bound(&self, mut cand: u64) -> usize {
        let mut cliques = 0;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            let mut clique = 1u64 << v;
            let mut common = cand & self.g.adj[v];
            while common != 0 {
                let u = common.trailing_zeros() as usize;
                clique |= 1 << u;
                common &= self.g.adj[u];
            }
            cand &= !clique;
            cliques += 1;
        }
        cliques
    }

    fn run(&mut self, cand: u64, size: usize) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        if cand == 0 {
            self.best = self.best.max(size);
            return Ok(());
        }
        if size + (cand.count_ones() as usize) <= self.best
            || size + self.cover_bound(cand) <= self.best
        {
            return Ok(());
        }
        let v = cand.trailing_zeros() as usize;
        self.run(cand & !(1 << v) & !self.g.adj[v], size + 1)?;
        self.run(cand & !(1 << v), size)
    }
}

fn greedy_independent(g: &Graph, mut cand: u64) -> usize {
    let mut size = 0;
    while cand != 0 {
        let v = cand.trailing_zeros() as usize;
        cand &= !(1 << v) & !g.adj[v];
        size += 1;
    }
    size
}

/// Independence number by branch-and-bound. Fails rather than returning a
/// bound when the budget runs out.
pub fn exact_alpha(p: &HammingParams, budget: u64) -> Result<u64> {
    exact_alpha_with(p, budget, DEFAULT_GUARD)
}

pub fn exact_alpha_with(p: &HammingParams, budget: u64, guard: u64) -> Result<u64> {
    let g = Graph::new(p, guard)?;
    // rank 0 can be assumed in the set
    let start = g.all() & !1 & !g.adj[0];
    let mut search = IndependentSearch {
        g: &g,
        budget,
        nodes: 0,
        best: 1 + greedy_independent(&g, start),
    };
    search.run(start, 1)?;
    Ok(search.best as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, k: u32) -> HammingParams {
        HammingParams::new(n, k).unwrap()
    }

    /// Plain enumeration of every `size`-subset, no pruning or symmetry.
    fn enumerate_min_maxdeg(p: &HammingParams, size: usize) -> usize {
        let g = Graph::new(p, 64).unwrap();
        let n = g.order as u32;
        (0u64..1 << n)
            .filter(|m| m.count_ones() as usize == size)
            .map(|m| induced_max_degree(&g, m))
            .min()
            .unwrap()
    }

    fn enumerate_alpha(p: &HammingParams) -> usize {
        let g = Graph::new(p, 64).unwrap();
        (0u64..1 << g.order)
            .filter(|&m| bits(m).all(|v| g.adj[v] & m == 0))
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn f_examples() {
        for ((n, k), f) in [((2, 2), 2), ((2, 3), 1), ((3, 2), 2)] {
            let r = exact_f(&params(n, k), DEFAULT_BUDGET).unwrap();
            assert!(r.exhausted);
            assert_eq!(r.value, f, "H({n},{k})");
        }
    }

    #[test]
    fn f_witness_is_valid() {
        for (n, k) in [(2, 2), (2, 3), (3, 2), (4, 2), (2, 4), (3, 3)] {
            let p = params(n, k);
            let r = exact_f(&p, DEFAULT_BUDGET).unwrap();
            let g = Graph::new(&p, 64).unwrap();
            let mask = r.witness_subset.iter().fold(0u64, |m, v| m | 1 << v.0);
            assert_eq!(r.witness_subset.len() as u64, p.vertex_count_u64().unwrap() / k as u64 + 1);
            assert_eq!(induced_max_degree(&g, mask), r.value);
            assert!(r.value >= 1 && r.value <= p.degree_cap());
        }
    }

    #[test]
    fn h23_two_disjoint_edges() {
        let p = params(2, 3);
        let g = Graph::new(&p, 64).unwrap();
        // (0,0),(0,1),(1,2),(2,2) as ranks: 0, 3, 7, 8
        let mask = [0u64, 3, 7, 8].iter().fold(0, |m, r| m | 1 << r);
        assert_eq!(induced_max_degree(&g, mask), 1);
    }

    #[test]
    fn small_size_and_full_size() {
        let p = params(3, 2);
        for size in 1..=4 {
            assert_eq!(min_maxdeg_subset(&p, size, DEFAULT_BUDGET).unwrap().value, 0);
        }
        assert_eq!(min_maxdeg_subset(&p, 8, DEFAULT_BUDGET).unwrap().value, 3);
        let p = params(2, 3);
        assert_eq!(min_maxdeg_subset(&p, 9, DEFAULT_BUDGET).unwrap().value, 4);
        assert_eq!(min_maxdeg_subset(&params(2, 2), 3, DEFAULT_BUDGET).unwrap().value, 2);
        assert!(min_maxdeg_subset(&p, 0, DEFAULT_BUDGET).is_err());
        assert!(min_maxdeg_subset(&p, 10, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn symmetry_reduction_matches_unrestricted_and_enumeration() {
        for (n, k) in [(2, 2), (3, 2), (4, 2), (2, 3), (2, 4)] {
            let p = params(n, k);
            let order = p.vertex_count_u64().unwrap() as usize;
            let plain = SearchOptions {
                translate_to_origin: false,
                ..Default::default()
            };
            for size in 1..=order {
                let reduced = min_maxdeg_subset(&p, size, DEFAULT_BUDGET).unwrap();
                let full = min_maxdeg_subset_with(&p, size, &plain).unwrap();
                assert_eq!(reduced.value, full.value, "H({n},{k}) size {size}");
                if order <= 9 {
                    assert_eq!(reduced.value, enumerate_min_maxdeg(&p, size));
                }
            }
        }
    }

    #[test]
    fn monotone_in_size() {
        for (n, k) in [(3, 2), (2, 4), (4, 2)] {
            let p = params(n, k);
            let order = p.vertex_count_u64().unwrap() as usize;
            let values: Vec<usize> = (1..=order)
                .map(|s| min_maxdeg_subset(&p, s, DEFAULT_BUDGET).unwrap().value)
                .collect();
            assert!(values.windows(2).all(|w| w[0] <= w[1]), "{values:?}");
        }
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(exact_alpha(&params(2, 2), DEFAULT_BUDGET).unwrap(), 2);
        assert_eq!(exact_alpha(&params(2, 3), DEFAULT_BUDGET).unwrap(), 3);
        assert_eq!(exact_alpha(&params(3, 2), DEFAULT_BUDGET).unwrap(), 4);
    }

    #[test]
    fn alpha_matches_formula_within_guard() {
        for (n, k) in [(1, 2), (1, 7), (2, 5), (2, 8), (3, 3), (3, 4), (4, 2), (5, 2), (6, 2)] {
            let p = params(n, k);
            let a = exact_alpha(&p, DEFAULT_BUDGET).unwrap();
            assert_eq!(a, p.vertex_count_u64().unwrap() / k as u64, "H({n},{k})");
        }
        for (n, k) in [(2, 2), (3, 2), (2, 3), (4, 2)] {
            let p = params(n, k);
            assert_eq!(exact_alpha(&p, DEFAULT_BUDGET).unwrap() as usize, enumerate_alpha(&p));
        }
    }

    #[test]
    fn guard_and_budget() {
        assert!(matches!(
            exact_f(&params(3, 5), DEFAULT_BUDGET),
            Err(Error::LimitExceeded { .. })
        ));
        let r = exact_f(&params(4, 2), 3).unwrap();
        assert!(!r.exhausted);
        assert!(r.value >= 2);
        assert!(matches!(
            exact_alpha(&params(3, 3), 2),
            Err(Error::BudgetExhausted { budget: 2 })
        ));
    }
}
