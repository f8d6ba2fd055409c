//! Exact linear programming for fractional covers.
//!
//! Programs have the covering shape `min c·x  s.t.  A x >= b,  x >= 0` with
//! `c >= 0`, so they are never unbounded. They are solved by a two-phase
//! primal simplex on a dense tableau, in integer arithmetic when the data
//! allows and exact rationals otherwise. Optimal answers carry a primal
//! vector and a dual price vector, both re-checked against the original data
//! before they are returned.

use std::collections::BTreeMap;

use crate::cube::{check_dim, harmonic, vertex_weight, vertices, DemandVector, Vertex};
use crate::error::{Error, Result};
use crate::geometry::Trace;
use crate::scalar::Exact;

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum LpStatus {
    Optimal,
    Infeasible,
}

/// `min Σ cost_j x_j` subject to `Σ_j a_ij x_j >= demand_i`, `x >= 0`.
#[derive(Clone, Debug)]
pub struct CoveringProgram<S> {
    rows: usize,
    /// Sparse columns: `(row, coefficient)` pairs.
    columns: Vec<Vec<(usize, S)>>,
    cost: Vec<S>,
    demand: Vec<S>,
}

impl<S: Exact> CoveringProgram<S> {
    pub fn new(demand: Vec<S>) -> Self {
        CoveringProgram { rows: demand.len(), columns: Vec::new(), cost: Vec::new(), demand }
    }

    /// Adds a column; costs must be nonnegative.
    pub fn push_column(&mut self, entries: Vec<(usize, S)>, cost: S) -> usize {
        assert!(!cost.is_negative(), "covering programs need nonnegative costs");
        debug_assert!(entries.iter().all(|(r, _)| *r < self.rows));
        self.columns.push(entries);
        self.cost.push(cost);
        self.columns.len() - 1
    }

    /// Adds the constraint `Σ coeffs · x >= rhs`.
    pub fn push_row(&mut self, coeffs: &[(usize, S)], rhs: S) -> usize {
        let r = self.rows;
        self.rows += 1;
        self.demand.push(rhs);
        for (j, c) in coeffs {
            self.columns[*j].push((r, c.clone()));
        }
        r
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_columns(&self) -> usize {
        self.columns.len()
    }

    pub fn solve(&self) -> Result<LpSolution<S>> {
        let sol = match IntTableau::new(self).and_then(IntTableau::run) {
            Some(sol) => sol,
            None => Tableau::new(self).run(),
        };
        if sol.status == LpStatus::Optimal {
            verify_certificates(self, &sol)?;
        }
        Ok(sol)
    }
}

/// Optimum with certificates. `primal` is indexed by column, `dual` by row.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LpSolution<S> {
    pub status: LpStatus,
    pub value: S,
    pub primal: Vec<S>,
    pub dual: Vec<S>,
    pub pivots: usize,
}

/// Checks primal feasibility, dual feasibility and equal objectives using
/// only the program data, never the tableau.
pub fn verify_certificates<S: Exact>(p: &CoveringProgram<S>, sol: &LpSolution<S>) -> Result<()> {
    let fail = |m: &str| Err(Error::Certificate(m.to_string()));
    if sol.primal.len() != p.columns.len() || sol.dual.len() != p.rows {
        return fail("certificate dimensions do not match the program");
    }
    if sol.primal.iter().chain(&sol.dual).any(|x| x.is_negative()) {
        return fail("negative primal or dual entry");
    }
    let mut lhs = vec![S::zero(); p.rows];
    for (col, x) in p.columns.iter().zip(&sol.primal) {
        if x.is_zero() {
            continue;
        }
        for (r, a) in col {
            lhs[*r] = lhs[*r].clone() + a.clone() * x.clone();
        }
    }
    if lhs.iter().zip(&p.demand).any(|(l, b)| l < b) {
        return fail("primal solution violates a covering constraint");
    }
    for (col, c) in p.columns.iter().zip(&p.cost) {
        let price = col
            .iter()
            .fold(S::zero(), |acc, (r, a)| acc + a.clone() * sol.dual[*r].clone());
        if &price > c {
            return fail("dual prices overpay a column");
        }
    }
    let primal_obj = p
        .cost
        .iter()
        .zip(&sol.primal)
        .fold(S::zero(), |acc, (c, x)| acc + c.clone() * x.clone());
    let dual_obj = p
        .demand
        .iter()
        .zip(&sol.dual)
        .fold(S::zero(), |acc, (b, y)| acc + b.clone() * y.clone());
    if primal_obj != dual_obj || primal_obj != sol.value {
        return fail("primal and dual objectives differ");
    }
    Ok(())
}

/// Dense two-phase primal simplex tableau.
///
/// Row `i` of `A x - s = b` is negated when `b_i < 0`, so every right-hand
/// side is nonnegative. Negated rows start with their surplus in the basis;
/// the others get an artificial column. Columns are laid out as structural
/// `0..n`, surplus `n..n+m`, artificial `n+m..`.
struct Tableau<S> {
    n: usize,
    m: usize,
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    reduced: Vec<S>,
    basis: Vec<usize>,
    cost: Vec<S>,
    pivots: usize,
}

impl<S: Exact> Tableau<S> {
    fn new(p: &CoveringProgram<S>) -> Self {
        let n = p.columns.len();
        let m = p.rows;
        let flip: Vec<bool> = p.demand.iter().map(|b| b.is_negative()).collect();
        let artificial: Vec<usize> = (0..m).filter(|&i| !flip[i]).collect();
        let width = n + m + artificial.len();
        let mut rows = vec![vec![S::zero(); width]; m];
        for (j, col) in p.columns.iter().enumerate() {
            for (r, a) in col {
                rows[*r][j] = rows[*r][j].clone() + a.clone();
            }
        }
        let mut basis = vec![0; m];
        for (i, row) in rows.iter_mut().enumerate() {
            row[n + i] = -S::one();
            if flip[i] {
                for x in row.iter_mut() {
                    if !x.is_zero() {
                        *x = -x.clone();
                    }
                }
                basis[i] = n + i;
            }
        }
        for (k, &i) in artificial.iter().enumerate() {
            rows[i][n + m + k] = S::one();
            basis[i] = n + m + k;
        }
        let rhs = p
            .demand
            .iter()
            .zip(&flip)
            .map(|(b, &f)| if f { -b.clone() } else { b.clone() })
            .collect();
        let mut cost = p.cost.clone();
        cost.resize(width, S::zero());
        Tableau { n, m, rows, rhs, reduced: Vec::new(), basis, cost, pivots: 0 }
    }

    fn width(&self) -> usize {
        self.n + self.m + (self.rows.first().map_or(0, |r| r.len()) - self.n - self.m)
    }

    /// `d = c - c_B^T T` for the given cost vector.
    fn price(&mut self, cost: &[S]) {
        let mut d = cost.to_vec();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (dj, x) in d.iter_mut().zip(row) {
                if !x.is_zero() {
                    *dj = dj.clone() - cb.clone() * x.clone();
                }
            }
        }
        self.reduced = d;
    }

    /// Runs to optimality over the columns `j < allowed`.
    fn optimize(&mut self, allowed: usize) {
        // Dantzig pricing while the objective moves; Bland's smallest-index
        // rule for as long as pivots are degenerate, which rules out cycling.
        let mut bland = false;
        loop {
            let candidates = (0..allowed).filter(|&j| self.reduced[j].is_negative());
            let entering = if bland {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| self.reduced[a].cmp(&self.reduced[b]).then(a.cmp(&b)))
            };
            let Some(q) = entering else {
                return;
            };
            let mut leaving: Option<(usize, S)> = None;
            for i in 0..self.m {
                let a = &self.rows[i][q];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            // Covering programs with nonnegative costs are bounded below.
            let (r, step) = leaving.expect("covering program cannot be unbounded");
            bland = step.is_zero();
            self.pivot(r, q);
        }
    }

    fn pivot(&mut self, r: usize, q: usize) {
        let inv = S::one() / self.rows[r][q].clone();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x = x.clone() * inv.clone();
            }
        }
        self.rhs[r] = self.rhs[r].clone() * inv;
        let support: Vec<usize> = (0..self.rows[r].len())
            .filter(|&c| !self.rows[r][c].is_zero())
            .collect();
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[q].is_zero() {
                continue;
            }
            let f = row[q].clone();
            for &c in &support {
                row[c] = row[c].clone() - f.clone() * pivot_row[c].clone();
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.reduced[q].clone();
        if !f.is_zero() {
            for &c in &support {
                self.reduced[c] = self.reduced[c].clone() - f.clone() * pivot_row[c].clone();
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = q;
        self.pivots += 1;
    }

    fn run(mut self) -> LpSolution<S> {
        let real = self.n + self.m;
        let width = self.width();
        if width > real {
            let phase_one: Vec<S> = (0..width)
                .map(|j| if j >= real { S::one() } else { S::zero() })
                .collect();
            self.price(&phase_one);
            self.optimize(width);
            let residual = (0..self.m)
                .filter(|&i| self.basis[i] >= real)
                .fold(S::zero(), |acc, i| acc + self.rhs[i].clone());
            if residual.is_positive() {
                return LpSolution {
                    status: LpStatus::Infeasible,
                    value: S::zero(),
                    primal: Vec::new(),
                    dual: Vec::new(),
                    pivots: self.pivots,
                };
            }
            // Drive zero-level artificials out of the basis where possible;
            // a row with no real nonzero is redundant and keeps its artificial.
            for i in 0..self.m {
                if self.basis[i] >= real {
                    if let Some(q) = (0..real).find(|&j| !self.rows[i][j].is_zero()) {
                        self.pivot(i, q);
                    }
                }
            }
        }
        let cost = self.cost.clone();
        self.price(&cost);
        self.optimize(real);
        self.finish()
    }

    fn finish(self) -> LpSolution<S> {
        let mut primal = vec![S::zero(); self.n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                primal[b] = self.rhs[r].clone();
            }
        }
        // The reduced cost of row i's surplus column is its dual price.
        let dual = (0..self.m).map(|i| self.reduced[self.n + i].clone()).collect();
        let value = primal
            .iter()
            .zip(&self.cost)
            .fold(S::zero(), |acc, (x, c)| acc + x.clone() * c.clone());
        LpSolution { status: LpStatus::Optimal, value, primal, dual, pivots: self.pivots }
    }
}

/// Integer-pivoting twin of [`Tableau`] for programs with integral data.
///
/// Every entry is stored as a numerator over one shared positive denominator
/// `den`, so a pivot is a pair of `i128` products followed by an exact
/// division. Pivot choices match [`Tableau`] step for step. Any overflow or
/// inexact division abandons the attempt and the caller falls back.
struct IntTableau {
    n: usize,
    m: usize,
    rows: Vec<Vec<i128>>,
    rhs: Vec<i128>,
    reduced: Vec<i128>,
    basis: Vec<usize>,
    cost: Vec<i128>,
    den: i128,
    pivots: usize,
}

fn to_i128<S: Exact>(x: &S) -> Option<i128> {
    if !x.is_integral() {
        return None;
    }
    i128::try_from(x.floor_int()).ok()
}

/// `(a * p - b * c) / den`, exact or nothing.
fn cross(a: i128, p: i128, b: i128, c: i128, den: i128) -> Option<i128> {
    let v = a.checked_mul(p)?.checked_sub(b.checked_mul(c)?)?;
    (v % den == 0).then(|| v / den)
}

impl IntTableau {
    fn new<S: Exact>(p: &CoveringProgram<S>) -> Option<Self> {
        let n = p.columns.len();
        let m = p.rows;
        let demand: Vec<i128> = p.demand.iter().map(to_i128).collect::<Option<_>>()?;
        let mut cost: Vec<i128> = p.cost.iter().map(to_i128).collect::<Option<_>>()?;
        let flip: Vec<bool> = demand.iter().map(|&b| b < 0).collect();
        let artificial: Vec<usize> = (0..m).filter(|&i| !flip[i]).collect();
        let width = n + m + artificial.len();
        let mut rows = vec![vec![0i128; width]; m];
        for (j, col) in p.columns.iter().enumerate() {
            for (r, a) in col {
                rows[*r][j] = rows[*r][j].checked_add(to_i128(a)?)?;
            }
        }
        let mut basis = vec![0; m];
        for (i, row) in rows.iter_mut().enumerate() {
            row[n + i] = -1;
            if flip[i] {
                for x in row.iter_mut() {
                    *x = x.checked_neg()?;
                }
                basis[i] = n + i;
            }
        }
        for (k, &i) in artificial.iter().enumerate() {
            rows[i][n + m + k] = 1;
            basis[i] = n + m + k;
        }
        let rhs = demand
            .iter()
            .zip(&flip)
            .map(|(&b, &f)| if f { b.checked_neg() } else { Some(b) })
            .collect::<Option<_>>()?;
        cost.resize(width, 0);
        Some(IntTableau { n, m, rows, rhs, reduced: Vec::new(), basis, cost, den: 1, pivots: 0 })
    }

    fn width(&self) -> usize {
        self.cost.len()
    }

    fn price(&mut self, cost: &[i128]) -> Option<()> {
        let mut d = cost
            .iter()
            .map(|c| c.checked_mul(self.den))
            .collect::<Option<Vec<_>>>()?;
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost[b];
            if cb == 0 {
                continue;
            }
            for (dj, &x) in d.iter_mut().zip(row) {
                if x != 0 {
                    *dj = dj.checked_sub(cb.checked_mul(x)?)?;
                }
            }
        }
        self.reduced = d;
        Some(())
    }

    fn optimize(&mut self, allowed: usize) -> Option<()> {
        let mut bland = false;
        loop {
            let candidates = (0..allowed).filter(|&j| self.reduced[j] < 0);
            let entering = if bland {
                candidates.min()
            } else {
                candidates.min_by(|&a, &b| self.reduced[a].cmp(&self.reduced[b]).then(a.cmp(&b)))
            };
            let Some(q) = entering else {
                return Some(());
            };
            let mut leaving: Option<usize> = None;
            for i in 0..self.m {
                let a = self.rows[i][q];
                if a <= 0 {
                    continue;
                }
                let better = match leaving {
                    None => true,
                    Some(r) => {
                        let lhs = self.rhs[i].checked_mul(self.rows[r][q])?;
                        let rhs = self.rhs[r].checked_mul(a)?;
                        lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[r])
                    }
                };
                if better {
                    leaving = Some(i);
                }
            }
            let r = leaving.expect("covering program cannot be unbounded");
            bland = self.rhs[r] == 0;
            self.pivot(r, q)?;
        }
    }

    fn pivot(&mut self, r: usize, q: usize) -> Option<()> {
        let p = self.rows[r][q];
        let sign = p.signum();
        let den = self.den;
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r];
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[q];
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = sign * cross(*x, p, f, y, den)?;
            }
            self.rhs[i] = sign * cross(self.rhs[i], p, f, pivot_rhs, den)?;
        }
        let f = self.reduced[q];
        for (x, &y) in self.reduced.iter_mut().zip(&pivot_row) {
            *x = sign * cross(*x, p, f, y, den)?;
        }
        self.rows[r] = pivot_row.into_iter().map(|x| sign * x).collect();
        self.rhs[r] = sign * pivot_rhs;
        self.den = p.abs();
        self.basis[r] = q;
        self.pivots += 1;
        Some(())
    }

    fn run<S: Exact>(mut self) -> Option<LpSolution<S>> {
        let real = self.n + self.m;
        let width = self.width();
        if width > real {
            let phase_one: Vec<i128> = (0..width).map(|j| i128::from(j >= real)).collect();
            self.price(&phase_one)?;
            self.optimize(width)?;
            if (0..self.m).any(|i| self.basis[i] >= real && self.rhs[i] > 0) {
                return Some(LpSolution {
                    status: LpStatus::Infeasible,
                    value: S::zero(),
                    primal: Vec::new(),
                    dual: Vec::new(),
                    pivots: self.pivots,
                });
            }
            for i in 0..self.m {
                if self.basis[i] >= real {
                    if let Some(q) = (0..real).find(|&j| self.rows[i][j] != 0) {
                        self.pivot(i, q)?;
                    }
                }
            }
        }
        let cost = self.cost.clone();
        self.price(&cost)?;
        self.optimize(real)?;
        let den = S::from_bigint(self.den.into());
        let scale = |x: i128| S::from_bigint(x.into()) / den.clone();
        let mut primal = vec![S::zero(); self.n];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                primal[b] = scale(self.rhs[r]);
            }
        }
        let dual = (0..self.m).map(|i| scale(self.reduced[self.n + i])).collect();
        let value = primal
            .iter()
            .zip(&self.cost)
            .fold(S::zero(), |acc, (x, &c)| acc + x.clone() * S::from_bigint(c.into()));
        Some(LpSolution { status: LpStatus::Optimal, value, primal, dual, pivots: self.pivots })
    }
}

/// Fractional cover problem over a fixed list of traces.
#[derive(Clone, Debug)]
pub struct LpProblem {
    pub columns: Vec<Trace>,
    pub demands: DemandVector,
}

impl LpProblem {
    pub fn to_program<S: Exact>(&self) -> Result<CoveringProgram<S>> {
        let n = self.demands.n();
        if self.columns.iter().any(|t| t.n() != n) {
            return Err(Error::InvalidArgument("trace dimension differs from demand dimension".into()));
        }
        let mut p = CoveringProgram::new(
            self.demands.as_slice().iter().map(|&d| S::from_int(d as i64)).collect(),
        );
        for t in &self.columns {
            p.push_column(t.vertices().map(|v| (v.index(), S::one())).collect(), S::one());
        }
        Ok(p)
    }
}

/// Fractional cover LP solution keyed by trace index and vertex.
#[derive(Clone, Debug)]
pub struct CoverLpSolution<S> {
    pub status: LpStatus,
    pub value: S,
    /// Nonzero weights only, by column index.
    pub primal: BTreeMap<usize, S>,
    /// Nonzero prices only.
    pub dual: BTreeMap<Vertex, S>,
}

pub fn solve_cover_lp<S: Exact>(p: &LpProblem) -> Result<CoverLpSolution<S>> {
    let sol = p.to_program::<S>()?.solve()?;
    let n = p.demands.n();
    Ok(CoverLpSolution {
        status: sol.status,
        value: sol.value,
        primal: sol
            .primal
            .into_iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .collect(),
        dual: vertices(n)
            .zip(sol.dual)
            .filter(|(_, y)| !y.is_zero())
            .collect(),
    })
}

/// `f*(n, k) = H_n · k`, in closed form.
pub fn f_star<S: Exact>(n: usize, k: u64) -> Result<S> {
    check_dim(n)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(harmonic::<S>(n as u64)? * S::from_int(k as i64))
}

/// Prices `k / (t C(n,t))` on every nonzero vertex. Dual feasible for the
/// all-`k` problem over any set of traces.
pub fn weight_dual_certificate<S: Exact>(n: usize, k: u64) -> Result<BTreeMap<Vertex, S>> {
    check_dim(n)?;
    let k = S::from_int(k as i64);
    Ok(vertices(n)
        .map(|v| (v, vertex_weight::<S>(n, v) * k.clone()))
        .collect())
}
