//! Exact integral covering: `f(n,k)` by branch-and-bound, the layered
//! variant, and the deficiency minimum `g(n,m,k)` by multiset search.
//!
//! Columns are maximal traces. This loses nothing: demands are lower bounds,
//! every hyperplane's trace lies inside some maximal trace, and swapping each
//! plane for a plane with the larger trace keeps the multiset size.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::constructions::{best_known, layered_cover, lift_cover, MultiCover};
use crate::cube::{check_dim, harmonic, vertex_count, DemandVector};
use crate::error::{Error, Result};
use crate::geometry::{covering_trace, maximal_traces, trace_of, Trace};
use crate::lp::{CoveringProgram, LpStatus};
use crate::scalar::Exact;
use crate::Rational;

/// Largest dimension accepted by the integral solvers.
pub const MAX_ILP_DIM: usize = 5;

/// Search budget; exhausting it is reported through [`SearchStatus`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_nodes: u64,
    pub time_limit: Option<Duration>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { max_nodes: 1_000_000, time_limit: Some(Duration::from_secs(300)) }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SearchStatus {
    Proved,
    LimitReached,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Proved => "proved",
            SearchStatus::LimitReached => "limit_reached",
        }
    }
}

struct Budget {
    limits: Limits,
    start: Instant,
    nodes: u64,
}

impl Budget {
    fn new(limits: &Limits) -> Self {
        Budget { limits: limits.clone(), start: Instant::now(), nodes: 0 }
    }

    /// Counts a node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        if self.nodes >= self.limits.max_nodes {
            return false;
        }
        if let Some(t) = self.limits.time_limit {
            // the clock is read every 64 nodes to keep the hot path cheap
            if self.nodes % 64 == 0 && self.start.elapsed() > t {
                return false;
            }
        }
        self.nodes += 1;
        true
    }
}

/// Outcome of an integral covering solve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IlpResult<S = Rational> {
    pub optimum: u64,
    /// `(column index, multiplicity)`, ascending by column.
    pub witness: Vec<(usize, u64)>,
    pub lp_root_bound: S,
    /// Proven lower bound; equals `optimum` when proved.
    pub lower_bound: u64,
    pub nodes_explored: u64,
    pub status: SearchStatus,
}

fn group(indices: impl IntoIterator<Item = usize>) -> Vec<(usize, u64)> {
    let mut out: Vec<(usize, u64)> = Vec::new();
    let mut sorted: Vec<usize> = indices.into_iter().collect();
    sorted.sort_unstable();
    for i in sorted {
        match out.last_mut() {
            Some((j, m)) if *j == i => *m += 1,
            _ => out.push((i, 1)),
        }
    }
    out
}

/// Column multiplicities realising a cover: each plane is charged to the
/// first column containing its trace. Planes missing every nonzero vertex
/// are dropped.
fn cover_to_counts<S: Exact>(columns: &[Trace], c: &MultiCover<S>) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; columns.len()];
    for (plane, mult) in c.planes() {
        let t = trace_of(plane)?;
        if t.is_empty() {
            continue;
        }
        let j = covering_trace(columns, &t).ok_or_else(|| {
            Error::InvalidArgument(format!("trace {t} lies in no listed column"))
        })?;
        if !mult.is_integral() {
            return Err(Error::InvalidArgument("incumbent multiplicities must be integers".into()));
        }
        counts[j] += mult.floor_int().try_into().unwrap_or(u64::MAX);
    }
    Ok(counts)
}

fn satisfies(columns: &[Trace], demands: &DemandVector, x: &[u64]) -> bool {
    demands.iter().all(|(v, d)| {
        let got: u64 = columns.iter().zip(x).filter(|(t, _)| t.contains(v)).map(|(_, m)| m).sum();
        got >= d
    })
}

#[derive(Clone)]
struct Node {
    lower: Vec<u64>,
    /// `u64::MAX` for no upper bound.
    upper: Vec<u64>,
}

struct NodeLp<S> {
    value: S,
    /// Full solution `lower + x'`.
    x: Vec<S>,
}

fn solve_node<S: Exact>(columns: &[Trace], demands: &DemandVector, node: &Node) -> Result<Option<NodeLp<S>>> {
    let mut residual: Vec<i64> = demands.as_slice().iter().map(|&d| d as i64).collect();
    for (t, &l) in columns.iter().zip(&node.lower) {
        if l > 0 {
            for v in t.vertices() {
                residual[v.index()] -= l as i64;
            }
        }
    }
    let mut row_of = vec![usize::MAX; residual.len()];
    let mut demand_rows = Vec::new();
    for (i, &r) in residual.iter().enumerate() {
        if r > 0 {
            row_of[i] = demand_rows.len();
            demand_rows.push(S::from_int(r));
        }
    }
    let mut p = CoveringProgram::new(demand_rows);
    let mut live = Vec::new();
    for (j, t) in columns.iter().enumerate() {
        if node.upper[j] == node.lower[j] {
            continue;
        }
        let entries: Vec<(usize, S)> = t
            .vertices()
            .filter(|v| row_of[v.index()] != usize::MAX)
            .map(|v| (row_of[v.index()], S::one()))
            .collect();
        if entries.is_empty() {
            continue;
        }
        p.push_column(entries, S::one());
        live.push(j);
    }
    for (c, &j) in live.iter().enumerate() {
        if node.upper[j] != u64::MAX {
            let slack = (node.upper[j] - node.lower[j]) as i64;
            p.push_row(&[(c, -S::one())], S::from_int(-slack));
        }
    }
    let sol = p.solve()?;
    if sol.status == LpStatus::Infeasible {
        return Ok(None);
    }
    let fixed: u64 = node.lower.iter().sum();
    let mut x: Vec<S> = node.lower.iter().map(|&l| S::from_int(l as i64)).collect();
    for (c, &j) in live.iter().enumerate() {
        x[j] = x[j].clone() + sol.primal[c].clone();
    }
    Ok(Some(NodeLp { value: sol.value + S::from_int(fixed as i64), x }))
}

/// Minimum-size integral multicover: `min Σ x_j` with every vertex `v`
/// covered at least `demands(v)` times by the chosen columns.
///
/// Depth-first branch-and-bound. Each node solves the LP relaxation with the
/// branching bounds; its ceiling is the node bound. The column whose weight
/// is furthest from an integer (smallest index on ties) is branched into
/// `x_j >= ⌈w⌉` (explored first) and `x_j <= ⌊w⌋`. Rounding every LP weight
/// up gives an incumbent at each node; a seeded incumbent may be supplied.
pub fn solve_multicover<S: Exact>(
    columns: &[Trace],
    demands: &DemandVector,
    incumbent: Option<&MultiCover<S>>,
    limits: &Limits,
) -> Result<IlpResult<S>> {
    let n = demands.n();
    if columns.iter().any(|t| t.n() != n) {
        return Err(Error::InvalidArgument("trace dimension differs from demand dimension".into()));
    }
    if let Some((v, _)) = demands.iter().find(|(v, d)| *d > 0 && !columns.iter().any(|t| t.contains(*v))) {
        return Err(Error::Infeasible(format!("vertex {v} is on no column")));
    }
    let mut best: Option<(u64, Vec<u64>)> = None;
    if let Some(c) = incumbent {
        if c.n() != n {
            return Err(Error::CoefficientCount { expected: n, got: c.n() });
        }
        let x = cover_to_counts(columns, c)?;
        if satisfies(columns, demands, &x) {
            best = Some((x.iter().sum(), x));
        }
    }

    let mut budget = Budget::new(limits);
    let root = Node { lower: vec![0; columns.len()], upper: vec![u64::MAX; columns.len()] };
    budget.nodes = 1;
    let root_lp = solve_node::<S>(columns, demands, &root)?
        .ok_or_else(|| Error::Infeasible("root relaxation is infeasible".into()))?;
    let root_bound = root_lp.value.clone();
    let root_ceil = root_bound.ceil_int().try_into().unwrap_or(u64::MAX);

    let mut stack = vec![(root, Some(root_lp))];
    let mut exhausted = true;
    while let Some((node, pre)) = stack.pop() {
        let lp = match pre {
            Some(lp) => lp,
            None => {
                if !budget.tick() {
                    exhausted = false;
                    break;
                }
                match solve_node::<S>(columns, demands, &node)? {
                    Some(lp) => lp,
                    None => continue,
                }
            }
        };
        let bound: u64 = lp.value.ceil_int().try_into().unwrap_or(u64::MAX);
        if best.as_ref().is_some_and(|(b, _)| bound >= *b) {
            continue;
        }
        let rounded: Vec<u64> = lp.x.iter().map(|w| w.ceil_int().try_into().unwrap_or(u64::MAX)).collect();
        let total: u64 = rounded.iter().sum();
        if best.as_ref().map_or(true, |(b, _)| total < *b) {
            debug_assert!(satisfies(columns, demands, &rounded));
            best = Some((total, rounded));
        }
        if best.as_ref().is_some_and(|(b, _)| bound >= *b) {
            continue;
        }
        let mut pick: Option<(usize, S)> = None;
        for (j, w) in lp.x.iter().enumerate() {
            let frac = w.clone() - S::from_bigint(w.floor_int());
            if frac.is_zero() {
                continue;
            }
            let other = S::one() - frac.clone();
            let dist = if frac < other { frac } else { other };
            if pick.as_ref().map_or(true, |(_, d)| dist > *d) {
                pick = Some((j, dist));
            }
        }
        // integral LP optimum: the rounding above already recorded it
        let Some((j, _)) = pick else { continue };
        let w = &lp.x[j];
        let (lo, hi): (u64, u64) = (
            w.floor_int().try_into().unwrap_or(u64::MAX),
            w.ceil_int().try_into().unwrap_or(u64::MAX),
        );
        let mut down = node.clone();
        down.upper[j] = lo;
        let mut up = node;
        up.lower[j] = hi;
        stack.push((down, None));
        stack.push((up, None));
    }

    let (optimum, x) = best.expect("root rounding always yields an incumbent");
    let status = if exhausted { SearchStatus::Proved } else { SearchStatus::LimitReached };
    let lower_bound = if exhausted { optimum } else { root_ceil.min(optimum) };
    let witness = x.iter().enumerate().filter(|(_, m)| **m > 0).map(|(j, m)| (j, *m)).collect();
    Ok(IlpResult {
        optimum,
        witness,
        lp_root_bound: root_bound,
        lower_bound,
        nodes_explored: budget.nodes,
        status,
    })
}

fn check_ilp_dim(n: usize) -> Result<()> {
    check_dim(n)?;
    if n > MAX_ILP_DIM {
        return Err(Error::Dimension { n, max: MAX_ILP_DIM });
    }
    Ok(())
}

/// Maximal traces of `Q^n` as bare bitsets.
pub fn trace_columns(n: usize) -> Result<Vec<Trace>> {
    Ok(maximal_traces(n)?.into_iter().map(|w| w.trace).collect())
}

/// `f(n,k)`, the minimum size of an almost k-cover of `Q^n`.
pub fn f_exact(n: usize, k: u64, limits: &Limits) -> Result<IlpResult> {
    check_ilp_dim(n)?;
    f_exact_over(&trace_columns(n)?, n, k, limits)
}

/// [`f_exact`] over a precomputed list of maximal traces.
pub fn f_exact_over(columns: &[Trace], n: usize, k: u64, limits: &Limits) -> Result<IlpResult> {
    check_ilp_dim(n)?;
    let seed = best_known::<Rational>(n, k)?;
    solve_multicover(columns, &DemandVector::uniform(n, k)?, Some(&seed), limits)
}

/// Fewest planes covering every vertex with `t` ones at least `k - t` times.
pub fn layered_min_m(n: usize, k: u64, limits: &Limits) -> Result<IlpResult> {
    check_ilp_dim(n)?;
    layered_min_m_over(&trace_columns(n)?, n, k, limits)
}

pub fn layered_min_m_over(columns: &[Trace], n: usize, k: u64, limits: &Limits) -> Result<IlpResult> {
    check_ilp_dim(n)?;
    if k < 2 {
        return Err(Error::InvalidArgument("the layered problem needs k >= 2".into()));
    }
    let seed = layered_cover::<Rational>(n, k)?;
    solve_multicover(columns, &DemandVector::layered(n, k)?, Some(&seed), limits)
}

/// `1 - k + k H_{k-1}`: the fractional bound for the layered problem,
/// independent of `n`.
pub fn layered_lp_bound<S: Exact>(k: u64) -> Result<S> {
    if k < 2 {
        return Err(Error::InvalidArgument("the layered bound needs k >= 2".into()));
    }
    let k_s = S::from_int(k as i64);
    Ok(S::one() - k_s.clone() + k_s * harmonic::<S>(k - 1)?)
}

/// Outcome of a deficiency search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GResult {
    pub n: usize,
    pub m: u64,
    pub k: u64,
    /// Vertices, origin included, covered fewer than `k` times by the witness.
    pub deficiency: u64,
    /// `(trace index, multiplicity)`; multiplicities sum to `m`.
    pub witness: Vec<(usize, u64)>,
    pub lower_bound: u64,
    pub nodes_explored: u64,
    pub status: SearchStatus,
}

/// `2^{n-m+k-1}`, clamped to `[1, 2^n]`.
pub fn trivial_g_bound(n: usize, m: u64, k: u64) -> u64 {
    let e = n as i64 - m as i64 + k as i64 - 1;
    if e < 0 {
        1
    } else {
        1u64 << e.min(n as i64)
    }
}

/// Vertices of `Q^n`, origin included, that the multiset covers fewer than
/// `k` times.
pub fn deficiency(traces: &[Trace], n: usize, k: u64, witness: &[(usize, u64)]) -> u64 {
    let mut cov = vec![0u64; vertex_count(n) + 1];
    for &(j, m) in witness {
        for v in traces[j].vertices() {
            cov[v.mask() as usize] += m;
        }
    }
    cov.iter().filter(|&&c| c < k).count() as u64
}

/// Smallest index in the orbit of each trace under coordinate permutations.
fn orbit_minima(traces: &[Trace], n: usize) -> Vec<usize> {
    let index: HashMap<Trace, usize> = traces.iter().enumerate().map(|(i, t)| (*t, i)).collect();
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    traces
        .iter()
        .map(|t| perms.iter().filter_map(|p| index.get(&t.permuted(p)).copied()).min().unwrap())
        .collect()
}

fn permutations(a: &mut Vec<usize>, i: usize, out: &mut Vec<Vec<usize>>) {
    if i == a.len() {
        out.push(a.clone());
        return;
    }
    for j in i..a.len() {
        a.swap(i, j);
        permutations(a, i + 1, out);
        a.swap(i, j);
    }
}

struct GSearch<'a> {
    members: Vec<Vec<usize>>,
    /// Largest trace size among indices `>= i`.
    suffix_max: Vec<u64>,
    is_rep: Vec<bool>,
    k: u64,
    cov: Vec<u64>,
    chosen: Vec<usize>,
    best: u64,
    best_witness: Vec<usize>,
    budget: &'a mut Budget,
    stopped: bool,
    need_hist: Vec<u64>,
}

impl GSearch<'_> {
    /// Deficiency that no choice of `r` more traces from `start` onward can
    /// avoid: the origin, vertices needing more than `r` additional planes,
    /// and whatever the coverage capacity `r · max|T|` cannot repair when
    /// the cheapest vertices are repaired first.
    fn bound(&mut self, start: usize, r: u64) -> u64 {
        let k = self.k;
        let mut forced = 1;
        self.need_hist.iter_mut().for_each(|h| *h = 0);
        for &c in &self.cov[1..] {
            if c < k {
                let need = k - c;
                if need > r {
                    forced += 1;
                } else {
                    self.need_hist[need as usize] += 1;
                }
            }
        }
        let mut capacity = if r == 0 { 0 } else { r * self.suffix_max[start] };
        let mut left = 0;
        for need in 1..self.need_hist.len() {
            let count = self.need_hist[need];
            if count == 0 {
                continue;
            }
            let fixable = (capacity / need as u64).min(count);
            capacity -= fixable * need as u64;
            left += count - fixable;
        }
        forced + left
    }

    fn dfs(&mut self, start: usize, r: u64) {
        if self.stopped {
            return;
        }
        if !self.budget.tick() {
            self.stopped = true;
            return;
        }
        let lb = self.bound(start, r);
        if lb >= self.best {
            return;
        }
        if r == 0 {
            self.best = lb;
            self.best_witness = self.chosen.clone();
            return;
        }
        for i in start..self.members.len() {
            if self.chosen.is_empty() && !self.is_rep[i] {
                continue;
            }
            for &v in &self.members[i] {
                self.cov[v] += 1;
            }
            self.chosen.push(i);
            self.dfs(i, r - 1);
            self.chosen.pop();
            for &v in &self.members[i] {
                self.cov[v] -= 1;
            }
            // the origin is never covered, so 1 cannot be beaten
            if self.stopped || self.best <= 1 {
                return;
            }
        }
    }
}

/// `g(n,m,k)`: the fewest vertices covered fewer than `k` times by `m`
/// origin-avoiding hyperplanes.
pub fn g_exact(n: usize, m: u64, k: u64, limits: &Limits) -> Result<GResult> {
    check_ilp_dim(n)?;
    g_exact_over(&trace_columns(n)?, n, m, k, limits)
}

/// [`g_exact`] over the maximal traces of `Q^n`, listed in canonical order.
///
/// Multisets are enumerated as nondecreasing index sequences. The smallest
/// element of some optimal multiset can be moved by a coordinate
/// permutation onto the smallest index of its orbit, so only those indices
/// start a sequence. The search is seeded with lifted covers of lower
/// dimension padded to `m` planes.
pub fn g_exact_over(traces: &[Trace], n: usize, m: u64, k: u64, limits: &Limits) -> Result<GResult> {
    check_ilp_dim(n)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if traces.is_empty() || traces.iter().any(|t| t.n() != n) {
        return Err(Error::InvalidArgument("traces must be the maximal traces of Q^n".into()));
    }
    let mut best = u64::MAX;
    let mut best_witness: Vec<usize> = Vec::new();
    for d in 1..=n {
        let Ok(c) = best_known::<Rational>(d, k) else { continue };
        let counts = cover_to_counts(traces, &lift_cover(&c, n)?)?;
        let used: u64 = counts.iter().sum();
        if used > m {
            continue;
        }
        let mut w: Vec<usize> = counts
            .iter()
            .enumerate()
            .flat_map(|(j, &c)| std::iter::repeat(j).take(c as usize))
            .collect();
        w.extend(std::iter::repeat(0).take((m - used) as usize));
        let def = deficiency(traces, n, k, &group(w.iter().copied()));
        if def < best {
            best = def;
            best_witness = w;
        }
    }

    let mut budget = Budget::new(limits);
    let mut search = GSearch {
        members: traces.iter().map(|t| t.vertices().map(|v| v.mask() as usize).collect()).collect(),
        suffix_max: {
            let mut s = vec![0u64; traces.len() + 1];
            for i in (0..traces.len()).rev() {
                s[i] = s[i + 1].max(traces[i].len() as u64);
            }
            s
        },
        is_rep: orbit_minima(traces, n).into_iter().enumerate().map(|(i, r)| i == r).collect(),
        k,
        cov: vec![0; vertex_count(n) + 1],
        chosen: Vec::new(),
        best,
        best_witness,
        budget: &mut budget,
        stopped: false,
        need_hist: vec![0; k as usize + 1],
    };
    if search.best > 1 {
        search.dfs(0, m);
    }
    let stopped = search.stopped;
    let (best, witness) = (search.best, group(search.best_witness.iter().copied()));
    let deficiency_check = deficiency(traces, n, k, &witness);
    debug_assert_eq!(best, deficiency_check);
    let status = if stopped { SearchStatus::LimitReached } else { SearchStatus::Proved };
    Ok(GResult {
        n,
        m,
        k,
        deficiency: deficiency_check,
        witness,
        lower_bound: if stopped { 1 } else { deficiency_check },
        nodes_explored: budget.nodes,
        status,
    })
}
