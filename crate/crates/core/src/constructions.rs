//! Explicit covers: the basic `n + C(k,2)` cover, the symmetric cover built
//! from all coordinate-sum planes, the ad-hoc small covers, lifting to higher
//! dimension, and an exact coverage verifier.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cube::{binomial, check_dim, harmonic, lcm_binomials, vertices, Vertex};
use crate::error::{Error, Result};
use crate::geometry::HyperplaneForm;
use crate::scalar::Exact;

/// A multiset of origin-avoiding hyperplanes with positive multiplicities.
/// Multiplicities are integral for ordinary covers and rational for
/// fractional ones.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiCover<S> {
    n: usize,
    planes: Vec<(HyperplaneForm<S>, S)>,
}

impl<S: Exact> MultiCover<S> {
    pub fn new(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(MultiCover { n, planes: Vec::new() })
    }

    /// Adds `mult` copies of `plane`, merging with an identical plane already
    /// present.
    pub fn push(&mut self, plane: HyperplaneForm<S>, mult: S) -> Result<()> {
        if plane.n() != self.n {
            return Err(Error::CoefficientCount { expected: self.n, got: plane.n() });
        }
        if !mult.is_positive() {
            return Err(Error::InvalidArgument("multiplicities must be positive".into()));
        }
        match self.planes.iter_mut().find(|(p, _)| *p == plane) {
            Some((_, m)) => *m = m.clone() + mult,
            None => self.planes.push((plane, mult)),
        }
        Ok(())
    }

    pub fn push_int(&mut self, plane: HyperplaneForm<S>, mult: i64) -> Result<()> {
        self.push(plane, S::from_int(mult))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn planes(&self) -> &[(HyperplaneForm<S>, S)] {
        &self.planes
    }

    /// Total multiplicity.
    pub fn size(&self) -> S {
        self.planes.iter().fold(S::zero(), |acc, (_, m)| acc + m.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.planes.iter().all(|(_, m)| m.is_integral())
    }

    /// Multiset union; coverage adds.
    pub fn union(&self, other: &MultiCover<S>) -> Result<MultiCover<S>> {
        let mut out = self.clone();
        for (p, m) in &other.planes {
            out.push(p.clone(), m.clone())?;
        }
        Ok(out)
    }

    /// Number of planes, with multiplicity, through `v`.
    pub fn coverage(&self, v: Vertex) -> S {
        self.planes
            .iter()
            .filter(|(p, _)| p.contains(v))
            .fold(S::zero(), |acc, (_, m)| acc + m.clone())
    }
}

/// Exact coverage counts of a cover.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoverageReport<S> {
    pub n: usize,
    pub k: S,
    pub size: S,
    pub coverage: BTreeMap<Vertex, S>,
    pub min_coverage: S,
    pub origin_coverage: S,
    /// Minimum coverage within each layer `t = 1..=n`.
    pub layer_minima: BTreeMap<usize, S>,
}

impl<S: Exact> CoverageReport<S> {
    /// Every nonzero vertex covered at least `k` times and the origin never.
    pub fn is_almost_cover(&self) -> bool {
        self.min_coverage >= self.k && self.origin_coverage.is_zero()
    }

    /// Vertices covered fewer than `k` times, counting the origin.
    pub fn deficiency(&self) -> usize {
        let origin = usize::from(self.origin_coverage < self.k);
        origin + self.coverage.values().filter(|c| **c < self.k).count()
    }
}

pub fn verify_cover<S: Exact>(c: &MultiCover<S>, k: S) -> CoverageReport<S> {
    let n = c.n;
    let coverage: BTreeMap<Vertex, S> = vertices(n).map(|v| (v, c.coverage(v))).collect();
    // `<a, 0> = 0 != 1`: a normal-form plane never passes through the origin.
    let origin_coverage = S::zero();
    let mut layer_minima: BTreeMap<usize, S> = BTreeMap::new();
    for (v, cov) in &coverage {
        layer_minima
            .entry(v.layer())
            .and_modify(|m| {
                if cov < m {
                    *m = cov.clone()
                }
            })
            .or_insert_with(|| cov.clone());
    }
    let min_coverage = coverage.values().min().cloned().unwrap_or_else(S::zero);
    CoverageReport { n, k, size: c.size(), coverage, min_coverage, origin_coverage, layer_minima }
}

/// `x_i = 1` for every `i`, plus `k - t` copies of `x_1 + ... + x_n = t` for
/// `t = 1..k-1`. Size `n + C(k,2)`.
pub fn basic_cover<S: Exact>(n: usize, k: u64) -> Result<MultiCover<S>> {
    check_dim(n)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut c = MultiCover::new(n)?;
    for i in 0..n {
        c.push_int(HyperplaneForm::coordinate_sum(n, &[i], 1)?, 1)?;
    }
    let all: Vec<usize> = (0..n).collect();
    for t in 1..k {
        c.push_int(HyperplaneForm::coordinate_sum(n, &all, t as i64)?, (k - t) as i64)?;
    }
    Ok(c)
}

/// `k - t` copies of `x_1 + ... + x_n = t` for `t = 1..k-1`: covers every
/// vertex with `t` ones at least `k - t` times using `C(k,2)` planes.
pub fn layered_cover<S: Exact>(n: usize, k: u64) -> Result<MultiCover<S>> {
    check_dim(n)?;
    let mut c = MultiCover::new(n)?;
    let all: Vec<usize> = (0..n).collect();
    for t in 1..k {
        c.push_int(HyperplaneForm::coordinate_sum(n, &all, t as i64)?, (k - t) as i64)?;
    }
    Ok(c)
}

/// Weight `k / (j C(n,j))` on every plane `x_{i1} + ... + x_{ij} = 1`.
/// Covers every vertex exactly `k` times with total weight `H_n k`.
pub fn fractional_symmetric<S: Exact>(n: usize, k: u64) -> Result<MultiCover<S>> {
    check_dim(n)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let mut c = MultiCover::new(n)?;
    for v in vertices(n) {
        let j = v.layer();
        let denom = binomial(n as u64, j as i64) * j as u64;
        let w = S::from_int(k as i64) / S::from_bigint(BigInt::from(denom));
        let coords: Vec<usize> = v.support().collect();
        c.push(HyperplaneForm::coordinate_sum(n, &coords, 1)?, w)?;
    }
    Ok(c)
}

/// Smallest `k` for which [`symmetric_cover`] is integral: `n · lcm(C(n-1, ·))`.
pub fn symmetric_period(n: usize) -> Result<u64> {
    check_dim(n)?;
    let x = lcm_binomials(n as u64)? * n as u64;
    x.to_u64()
        .ok_or_else(|| Error::InvalidArgument(format!("period for n = {n} overflows")))
}

/// The integral version of [`fractional_symmetric`]; needs the symmetric
/// period to divide `k`.
pub fn symmetric_cover<S: Exact>(n: usize, k: u64) -> Result<MultiCover<S>> {
    let period = symmetric_period(n)?;
    if k == 0 || k % period != 0 {
        return Err(Error::NotDivisible { n, k, required: period.to_string() });
    }
    let c = fractional_symmetric(n, k)?;
    debug_assert!(c.is_integral());
    Ok(c)
}

/// Names accepted by [`special_cover`].
pub const CATALOG: [&str; 5] = ["q3_k4", "q4_k4", "q5_k4", "q3_k5", "q3_k7"];

/// A named cover with the dimension and multiplicity it is claimed for.
#[derive(Clone, Debug)]
pub struct CatalogEntry<S> {
    pub name: &'static str,
    pub n: usize,
    pub k: u64,
    pub cover: MultiCover<S>,
}

/// Plane `Σ coeffs_i x_i = rhs` from small integers.
fn plane<S: Exact>(coeffs: &[i64], rhs: i64) -> Result<HyperplaneForm<S>> {
    HyperplaneForm::from_equation(coeffs.iter().map(|&c| S::from_int(c)).collect(), S::from_int(rhs))
}

pub fn special_cover<S: Exact>(name: &str) -> Result<CatalogEntry<S>> {
    let (n, k, list): (usize, u64, Vec<(Vec<i64>, i64, i64)>) = match name {
        // the almost 2-cover {x_i = 1, x1 + x2 + x3 = 1}, doubled
        "q3_k4" => (
            3,
            4,
            vec![
                (vec![1, 0, 0], 1, 2),
                (vec![0, 1, 0], 1, 2),
                (vec![0, 0, 1], 1, 2),
                (vec![1, 1, 1], 1, 2),
            ],
        ),
        "q4_k4" => (
            4,
            4,
            vec![
                (vec![1, 0, 0, 0], 1, 1),
                (vec![0, 1, 0, 0], 1, 1),
                (vec![0, 0, 1, 0], 1, 1),
                (vec![0, 0, 0, 1], 1, 1),
                (vec![1, 0, 0, 1], 1, 1),
                (vec![0, 1, 0, 1], 1, 1),
                (vec![0, 0, 1, 1], 1, 1),
                (vec![1, 1, 1, 0], 1, 1),
                (vec![1, 1, 1, 1], 1, 1),
            ],
        ),
        "q5_k4" => {
            let mut list: Vec<(Vec<i64>, i64, i64)> = (0..5)
                .map(|i| ((0..5).map(|j| i64::from(i == j)).collect(), 1, 1))
                .collect();
            // x_i + x_{i+1} + x_{i+2} = 1, indices mod 5
            for i in 0..5 {
                let coeffs = (0..5)
                    .map(|j| i64::from((j + 5 - i) % 5 < 3))
                    .collect();
                list.push((coeffs, 1, 1));
            }
            (5, 4, list)
        }
        "q3_k5" => (
            3,
            5,
            vec![
                (vec![1, 0, 0], 1, 2),
                (vec![0, 1, 0], 1, 2),
                (vec![0, 0, 1], 1, 2),
                (vec![1, 1, 1], 1, 3),
                (vec![1, 1, 1], 2, 1),
            ],
        ),
        "q3_k7" => (
            3,
            7,
            vec![
                (vec![1, 0, 0], 1, 2),
                (vec![0, 1, 0], 1, 2),
                (vec![0, 0, 1], 1, 2),
                (vec![1, 1, 0], 1, 2),
                (vec![1, 0, 1], 1, 2),
                (vec![0, 1, 1], 1, 1),
                (vec![-1, 1, 1], 1, 1),
                (vec![1, 1, 1], 1, 1),
            ],
        ),
        other => return Err(Error::UnknownCover(other.to_string())),
    };
    let mut cover = MultiCover::new(n)?;
    for (coeffs, rhs, mult) in list {
        cover.push_int(plane(&coeffs, rhs)?, mult)?;
    }
    let name = CATALOG.iter().find(|c| **c == name).copied().expect("listed");
    Ok(CatalogEntry { name, n, k, cover })
}

pub fn catalog<S: Exact>() -> Vec<CatalogEntry<S>> {
    CATALOG
        .iter()
        .map(|name| special_cover(name).expect("catalog entries are well-formed"))
        .collect()
}

/// `H × R^{n-d}` for every plane `H`: pads coefficient vectors with zeros.
/// The `2^{n-d}` vertices `0 × {0,1}^{n-d}` (origin included) are left
/// uncovered; everything else keeps its coverage from the base cover.
pub fn lift_cover<S: Exact>(c: &MultiCover<S>, n: usize) -> Result<MultiCover<S>> {
    let mut out = MultiCover::new(n)?;
    for (p, m) in &c.planes {
        out.push(p.pad(n)?, m.clone())?;
    }
    Ok(out)
}

/// Largest `k` for which [`best_known`] is offered.
pub const BEST_KNOWN_MAX_K: u64 = 512;

/// The smallest verified almost k-cover assembled from the basic cover, the
/// symmetric cover, the catalog, and unions of smaller covers.
///
/// `best[j]` is the best of the direct candidates for `j` and every union
/// `best[a] ∪ best[j - a]`; a cover for a larger multiplicity also counts.
pub fn best_known<S: Exact>(n: usize, k: u64) -> Result<MultiCover<S>> {
    check_dim(n)?;
    if k == 0 || k > BEST_KNOWN_MAX_K {
        return Err(Error::InvalidArgument(format!(
            "best_known supports 1 <= k <= {BEST_KNOWN_MAX_K}"
        )));
    }
    let k = k as usize;
    let period = symmetric_period(n).ok().filter(|p| *p <= 4 * BEST_KNOWN_MAX_K);
    let mut best: Vec<Option<MultiCover<S>>> = vec![None; k + 1];
    let offer = |slot: &mut Option<MultiCover<S>>, c: MultiCover<S>| {
        if slot.as_ref().map_or(true, |b| c.size() < b.size()) {
            *slot = Some(c);
        }
    };
    for j in 1..=k {
        offer(&mut best[j], basic_cover(n, j as u64)?);
        if let Some(p) = period {
            let multiple = (j as u64).div_ceil(p) * p;
            offer(&mut best[j], symmetric_cover(n, multiple)?);
        }
        for e in catalog::<S>() {
            if e.n == n && e.k as usize >= j {
                offer(&mut best[j], e.cover);
            }
        }
        for a in 1..=j / 2 {
            let (lo, hi) = (best[a].clone().unwrap(), best[j - a].clone().unwrap());
            offer(&mut best[j], lo.union(&hi)?);
        }
    }
    let c = best[k].take().expect("filled above");
    let report = verify_cover(&c, S::from_int(k as i64));
    debug_assert!(report.is_almost_cover());
    if !report.is_almost_cover() {
        return Err(Error::Certificate("assembled cover fails verification".into()));
    }
    Ok(c)
}

/// `H_n · k`, the size of the symmetric cover.
pub fn symmetric_size<S: Exact>(n: usize, k: u64) -> Result<S> {
    Ok(harmonic::<S>(n as u64)? * S::from_int(k as i64))
}
