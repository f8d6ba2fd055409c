//! The subset-sum LYM inequality and the permutation counting behind it.
//!
//! For reals `a_1..a_n`, let `A` be the nonempty sets `S` with
//! `Σ_{i∈S} a_i = 1`. Then `Σ_{S∈A} 1/(|S| C(n,|S|)) <= 1`. The proof
//! associates to `S` with `|S| = t` every permutation of `[n]` that starts
//! with `S` in an order whose proper prefixes sum to less than 1. At least
//! `(t-1)!(n-t)!` permutations are associated to each `S`, and no permutation
//! is associated to two of them.

use crate::cube::{check_dim, vertex_weight, Vertex};
use crate::error::{Error, Result};
use crate::geometry::subset_sums;
use crate::scalar::{format, Exact};

/// Largest `n` accepted by the permutation scans.
pub const MAX_PERMUTATION_DIM: usize = 8;

/// The sets summing to 1, as vertices of `Q^n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SubsetSumFamily<S> {
    pub n: usize,
    pub a: Vec<S>,
    /// Ascending by mask.
    pub members: Vec<Vertex>,
    /// `layer_counts[t]` is the number of members of size `t`; entry 0 is 0.
    pub layer_counts: Vec<u64>,
}

pub fn subset_sum_family<S: Exact>(a: &[S]) -> Result<SubsetSumFamily<S>> {
    let n = a.len();
    check_dim(n)?;
    let sums = subset_sums(a);
    let mut members = Vec::new();
    let mut layer_counts = vec![0u64; n + 1];
    for (mask, s) in sums.iter().enumerate().skip(1) {
        if s.is_one() {
            let v = Vertex::new(mask as u32, n)?;
            layer_counts[v.layer()] += 1;
            members.push(v);
        }
    }
    Ok(SubsetSumFamily { n, a: a.to_vec(), members, layer_counts })
}

impl<S: Exact> SubsetSumFamily<S> {
    /// `Σ_t |A_t| / (t C(n,t))`.
    pub fn layered_sum(&self) -> S {
        (1..=self.n)
            .map(|t| {
                let w = vertex_weight::<S>(self.n, Vertex::new((1u32 << t) - 1, self.n).unwrap());
                w * S::from_int(self.layer_counts[t] as i64)
            })
            .fold(S::zero(), |a, b| a + b)
    }
}

/// `Σ_{S∈A} 1/(|S| C(n,|S|))`.
pub fn lym_sum<S: Exact>(a: &[S]) -> Result<S> {
    let fam = subset_sum_family(a)?;
    Ok(fam
        .members
        .iter()
        .map(|&v| vertex_weight::<S>(fam.n, v))
        .fold(S::zero(), |x, y| x + y))
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn check_perm_dim(n: usize) -> Result<()> {
    check_dim(n)?;
    if n > MAX_PERMUTATION_DIM {
        return Err(Error::Dimension { n, max: MAX_PERMUTATION_DIM });
    }
    Ok(())
}

/// Visits every ordering of `items` (Heap's algorithm).
fn for_each_ordering(items: &mut [usize], f: &mut impl FnMut(&[usize])) {
    fn go(k: usize, a: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            f(a);
            return;
        }
        for i in 0..k {
            go(k - 1, a, f);
            let j = if k % 2 == 0 { i } else { 0 };
            if i + 1 < k {
                a.swap(j, k - 1);
            }
        }
    }
    let k = items.len();
    go(k, items, f);
}

/// Proper prefixes of `order` all sum to strictly less than 1.
fn prefixes_below_one<S: Exact>(a: &[S], order: &[usize]) -> bool {
    let mut s = S::zero();
    for &i in &order[..order.len().saturating_sub(1)] {
        s = s + a[i].clone();
        if s >= S::one() {
            return false;
        }
    }
    true
}

/// Permutations of `[n]` associated to the member `v`: those beginning with
/// the support of `v` in an order whose proper prefix sums are `< 1`.
pub fn associated_permutation_count<S: Exact>(a: &[S], v: Vertex) -> Result<u64> {
    let n = a.len();
    check_perm_dim(n)?;
    if v.mask() >> n != 0 {
        return Err(Error::BadVertex { mask: v.mask() as u64, n });
    }
    let mut support: Vec<usize> = v.support().collect();
    let total = support.iter().fold(S::zero(), |s, &i| s + a[i].clone());
    if !total.is_one() {
        return Err(Error::NotOnHyperplane { mask: v.mask() as u64 });
    }
    let mut good = 0u64;
    for_each_ordering(&mut support, &mut |o| {
        if prefixes_below_one(a, o) {
            good += 1;
        }
    });
    Ok(good * factorial(n - v.layer()))
}

/// No permutation of `[n]` is associated to two members. Scans all `n!`
/// permutations and tests each against every member.
pub fn disjointness_check<S: Exact>(a: &[S]) -> Result<bool> {
    let n = a.len();
    check_perm_dim(n)?;
    let fam = subset_sum_family(a)?;
    let mut member = vec![false; 1 << n];
    for v in &fam.members {
        member[v.mask() as usize] = true;
    }
    let mut ok = true;
    let mut perm: Vec<usize> = (0..n).collect();
    for_each_ordering(&mut perm, &mut |p| {
        let mut prefix = 0usize;
        let mut hits = 0;
        for t in 1..=n {
            prefix |= 1 << p[t - 1];
            if member[prefix] && prefixes_below_one(a, &p[..t]) {
                hits += 1;
            }
        }
        if hits > 1 {
            ok = false;
        }
    });
    Ok(ok)
}

/// Totals for the packing argument.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PackingReport {
    /// `Σ_S` associated permutations of `S`.
    pub associated: u64,
    /// `Σ_S (|S|-1)!(n-|S|)!`.
    pub lower: u64,
    /// `n!`.
    pub total: u64,
}

impl PackingReport {
    pub fn holds(&self) -> bool {
        self.lower <= self.associated && self.associated <= self.total
    }
}

pub fn packing_report<S: Exact>(a: &[S]) -> Result<PackingReport> {
    let fam = subset_sum_family(a)?;
    check_perm_dim(fam.n)?;
    let mut associated = 0;
    let mut lower = 0;
    for &v in &fam.members {
        associated += associated_permutation_count(a, v)?;
        lower += factorial(v.layer() - 1) * factorial(fam.n - v.layer());
    }
    Ok(PackingReport { associated, lower, total: factorial(fam.n) })
}

/// A start `s` (1-based) from which every cyclic prefix of length `1..t-1`
/// has sum `<= 0`.
///
/// Takes the consecutive circular block of largest sum (the empty block
/// counts, with sum 0), breaking ties by smallest start and then by shortest
/// length, and starts right after it.
pub fn cycle_start<S: Exact>(e: &[S]) -> Result<usize> {
    let t = e.len();
    if t == 0 {
        return Err(Error::InvalidArgument("cycle_start needs a nonempty list".into()));
    }
    let total = e.iter().fold(S::zero(), |a, b| a + b.clone());
    if !total.is_zero() {
        return Err(Error::NonZeroSum(format(&total)));
    }
    let (mut best, mut best_start, mut best_len) = (S::zero(), 0, 0);
    for start in 0..t {
        let mut s = S::zero();
        for len in 1..t {
            s = s + e[(start + len - 1) % t].clone();
            if s > best {
                (best, best_start, best_len) = (s.clone(), start, len);
            }
        }
    }
    Ok((best_start + best_len) % t + 1)
}

/// Whether every cyclic prefix of length `1..t-1` from `s` (1-based) is `<= 0`.
pub fn is_cycle_start<S: Exact>(e: &[S], s: usize) -> bool {
    let t = e.len();
    if s == 0 || s > t {
        return false;
    }
    let mut acc = S::zero();
    (0..t - 1).all(|j| {
        acc = acc.clone() + e[(s - 1 + j) % t].clone();
        !acc.is_positive()
    })
}
