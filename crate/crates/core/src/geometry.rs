//! Origin-avoiding hyperplanes and the finite set of vertex sets ("traces")
//! they can cut out of the cube.
//!
//! Every hyperplane missing the origin can be written `<a, x> = 1`. Its trace
//! is the set of nonzero vertices on it. A trace is maximal when no other
//! trace strictly contains it. Maximal traces always have full affine
//! dimension `n - 1`: if `aff(T)` were smaller, the linear span of `T` would
//! be a proper subspace, so some vertex `v` lies outside it, and `T ∪ {v}`
//! would still avoid the origin in its affine hull. Hence the maximal traces
//! are exactly the closures of the affinely independent `n`-subsets whose
//! hyperplane misses the origin, which is what [`enumerate_maximal_traces`]
//! scans.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;

use crate::cube::{check_dim, vertex_count, vertices, Vertex};
use crate::error::{Error, Result};
use crate::scalar::Exact;

/// Largest dimension whose traces fit a 64-bit set (`2^6 - 1 = 63` vertices).
pub const MAX_TRACE_DIM: usize = 6;

/// The hyperplane `<a, x> = 1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct HyperplaneForm<S> {
    coeffs: Vec<S>,
}

impl<S: Exact> HyperplaneForm<S> {
    pub fn new(coeffs: Vec<S>) -> Result<Self> {
        check_dim(coeffs.len())?;
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::ZeroHyperplane);
        }
        Ok(HyperplaneForm { coeffs })
    }

    /// Normalizes `<c, x> = rhs` to right-hand side 1.
    pub fn from_equation(coeffs: Vec<S>, rhs: S) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::InvalidArgument(
                "hyperplane passes through the origin".into(),
            ));
        }
        Self::new(coeffs.into_iter().map(|c| c / rhs.clone()).collect())
    }

    /// `x_{i1} + ... + x_{ij} = rhs` for the given 0-based coordinates.
    pub fn coordinate_sum(n: usize, coords: &[usize], rhs: i64) -> Result<Self> {
        let mut c = vec![S::zero(); n];
        for &i in coords {
            if i >= n {
                return Err(Error::InvalidArgument(format!("coordinate {i} out of range")));
            }
            c[i] = S::one();
        }
        Self::from_equation(c, S::from_int(rhs))
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    /// `<a, v>`.
    pub fn eval(&self, v: Vertex) -> S {
        v.support().fold(S::zero(), |acc, j| acc + self.coeffs[j].clone())
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.eval(v).is_one()
    }

    /// The same hyperplane viewed in `Q^n`, `n >= self.n()`: `H × R^{n-d}`.
    pub fn pad(&self, n: usize) -> Result<Self> {
        check_dim(n)?;
        if n < self.n() {
            return Err(Error::InvalidArgument(format!(
                "cannot lift from dimension {} down to {n}",
                self.n()
            )));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(n, S::zero());
        Ok(HyperplaneForm { coeffs })
    }
}

/// Set of nonzero vertices of `Q^n`, bit `mask - 1` per vertex.
///
/// Ordering is by dimension, then by the bitset read as an unsigned integer.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Trace {
    n: u8,
    bits: u64,
}

impl Trace {
    pub fn new(n: usize, bits: u64) -> Result<Self> {
        check_trace_dim(n)?;
        if bits >> vertex_count(n) != 0 {
            return Err(Error::Parse(format!(
                "trace bits {bits:#x} exceed the {} vertices of Q^{n}",
                vertex_count(n)
            )));
        }
        Ok(Trace { n: n as u8, bits })
    }

    pub fn empty(n: usize) -> Result<Self> {
        Self::new(n, 0)
    }

    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut t = Self::empty(n)?;
        for v in vs {
            if v.mask() as u64 >> n != 0 {
                return Err(Error::BadVertex { mask: v.mask() as u64, n });
            }
            t.bits |= 1 << v.index();
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.bits >> v.index() & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_subset(&self, other: &Trace) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        let bits = self.bits;
        (0..64u32)
            .filter(move |i| bits >> i & 1 == 1)
            .map(|i| Vertex::from_mask(i + 1))
    }

    pub fn to_hex(&self) -> String {
        format!("{:x}", self.bits)
    }

    pub fn from_hex(n: usize, s: &str) -> Result<Self> {
        let bits =
            u64::from_str_radix(s, 16).map_err(|_| Error::Parse(format!("bad trace `{s}`")))?;
        Self::new(n, bits)
    }

    /// Image under the coordinate permutation `x_j -> x_{perm[j]}`.
    pub fn permuted(&self, perm: &[usize]) -> Trace {
        let mut bits = 0u64;
        for v in self.vertices() {
            let image = v.support().fold(0u32, |m, j| m | 1 << perm[j]);
            bits |= 1 << (image - 1);
        }
        Trace { n: self.n, bits }
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.bits)
    }
}

fn check_trace_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_TRACE_DIM {
        return Err(Error::Dimension { n, max: MAX_TRACE_DIM });
    }
    Ok(())
}

pub fn trace_of<S: Exact>(h: &HyperplaneForm<S>) -> Result<Trace> {
    let n = h.n();
    check_trace_dim(n)?;
    let sums = subset_sums(h.coeffs());
    let mut bits = 0u64;
    for (i, s) in sums.iter().enumerate().skip(1) {
        if s.is_one() {
            bits |= 1 << (i - 1);
        }
    }
    Ok(Trace { n: n as u8, bits })
}

/// `sums[mask] = Σ_{j ∈ mask} a_j` for every mask in `0..2^n`.
pub(crate) fn subset_sums<S: Exact>(a: &[S]) -> Vec<S> {
    let mut sums = Vec::with_capacity(1 << a.len());
    sums.push(S::zero());
    for mask in 1usize..(1 << a.len()) {
        let low = mask.trailing_zeros() as usize;
        let prev = sums[mask & (mask - 1)].clone();
        sums.push(prev + a[low].clone());
    }
    sums
}

/// All `a` with `<a, v> = 1` for every `v` in the constraint set:
/// `particular + span(basis)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AffineSolutionSpace<S> {
    pub particular: Vec<S>,
    pub basis: Vec<Vec<S>>,
}

impl<S: Exact> AffineSolutionSpace<S> {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// The point `particular + Σ t_i basis_i`.
    pub fn point(&self, t: &[S]) -> Vec<S> {
        let mut a = self.particular.clone();
        for (ti, b) in t.iter().zip(&self.basis) {
            for (aj, bj) in a.iter_mut().zip(b) {
                *aj = aj.clone() + ti.clone() * bj.clone();
            }
        }
        a
    }
}

/// Row space kept in reduced row echelon form.
#[derive(Clone, Debug)]
struct Echelon<S> {
    width: usize,
    rows: Vec<(usize, Vec<S>)>,
}

impl<S: Exact> Echelon<S> {
    fn new(width: usize) -> Self {
        Echelon { width, rows: Vec::new() }
    }

    fn reduce(&self, mut v: Vec<S>) -> Vec<S> {
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    if !r.is_zero() {
                        *x = x.clone() - f.clone() * r.clone();
                    }
                }
            }
        }
        v
    }

    fn contains(&self, v: Vec<S>) -> bool {
        self.reduce(v).iter().all(|x| x.is_zero())
    }

    /// Adds `v` if independent of the current rows, pivoting on the first
    /// nonzero column below `pivot_limit`. Returns whether the span grew.
    fn insert_limited(&mut self, v: Vec<S>, pivot_limit: usize) -> bool {
        let mut r = self.reduce(v);
        let Some(p) = r[..pivot_limit].iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let lead = r[p].clone();
        for x in r.iter_mut() {
            *x = x.clone() / lead.clone();
        }
        for (_, row) in self.rows.iter_mut() {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (x, y) in row.iter_mut().zip(&r) {
                    if !y.is_zero() {
                        *x = x.clone() - f.clone() * y.clone();
                    }
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, r));
        true
    }

    fn insert(&mut self, v: Vec<S>) -> bool {
        let w = self.width;
        self.insert_limited(v, w)
    }
}

/// `(v, 1)` as a row vector.
fn lifted_row<S: Exact>(v: Vertex, n: usize) -> Vec<S> {
    let mut row: Vec<S> = (0..n)
        .map(|j| if v.has(j) { S::one() } else { S::zero() })
        .collect();
    row.push(S::one());
    row
}

fn check_vertices(set: &[Vertex], n: usize) -> Result<()> {
    check_dim(n)?;
    if set.is_empty() {
        return Err(Error::InvalidArgument("vertex set must be nonempty".into()));
    }
    for v in set {
        if v.mask() as u64 >> n != 0 {
            return Err(Error::BadVertex { mask: v.mask() as u64, n });
        }
    }
    Ok(())
}

fn lifted_span<S: Exact>(set: &[Vertex], n: usize) -> Echelon<S> {
    let mut e = Echelon::new(n + 1);
    for &v in set {
        e.insert(lifted_row(v, n));
    }
    e
}

/// Whether `0` is an affine combination of the set, i.e. no `a` satisfies
/// `<a, v> = 1` on all of it.
pub fn origin_in_affine_hull(set: &[Vertex], n: usize) -> Result<bool> {
    check_vertices(set, n)?;
    let e = lifted_span::<num_rational::BigRational>(set, n);
    let mut origin = vec![num_rational::BigRational::from_int(0); n];
    origin.push(num_rational::BigRational::from_int(1));
    Ok(e.contains(origin))
}

/// Full solution space of `<a, v> = 1` for all `v` in the set, or `None`
/// when the origin lies in the set's affine hull.
///
/// Gauss-Jordan elimination with the smallest available pivot index; free
/// variables are set to zero in the particular solution.
pub fn solve_hyperplane_through<S: Exact>(
    set: &[Vertex],
    n: usize,
) -> Result<Option<AffineSolutionSpace<S>>> {
    check_vertices(set, n)?;
    let mut rows: Vec<Vec<S>> = set.iter().map(|&v| lifted_row(v, n)).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x = x.clone() / lead.clone();
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(pivot_row) {
                    *x = x.clone() - f.clone() * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return Ok(None);
    }
    let mut particular = vec![S::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = rows[i][n].clone();
    }
    let basis = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut b = vec![S::zero(); n];
            b[free] = S::one();
            for (i, &c) in pivots.iter().enumerate() {
                b[c] = -rows[i][free].clone();
            }
            b
        })
        .collect();
    Ok(Some(AffineSolutionSpace { particular, basis }))
}

/// Vertices forced onto every hyperplane through the set: those whose `(u, 1)`
/// lies in the span of the `(v, 1)`.
pub fn affine_closure_trace(set: &[Vertex], n: usize) -> Result<Trace> {
    check_vertices(set, n)?;
    check_trace_dim(n)?;
    if origin_in_affine_hull(set, n)? {
        return Err(Error::OriginInHull);
    }
    let e = lifted_span::<num_rational::BigRational>(set, n);
    Trace::from_vertices(n, vertices(n).filter(|&u| e.contains(lifted_row(u, n))))
}

/// A maximal trace together with the unique hyperplane realizing it.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WitnessedTrace<S> {
    pub trace: Trace,
    pub witness: HyperplaneForm<S>,
}

/// Every inclusion-maximal trace of `Q^n`, sorted ascending by bitset.
///
/// Scans affinely independent `n`-subsets in increasing mask order with an
/// incrementally maintained echelon form of `[v | 1]`; once `n` rows are in,
/// the form reads `[I | a]` and `a` is the hyperplane. Work is split by the
/// smallest vertex of the subset and merged, so the output does not depend on
/// the number of rayon workers.
pub fn enumerate_maximal_traces<S: Exact>(n: usize) -> Result<Vec<WitnessedTrace<S>>> {
    check_trace_dim(n)?;
    let count = vertex_count(n);
    let found: HashMap<u64, Vec<S>> = (1..=count as u32)
        .into_par_iter()
        .map(|first| {
            let mut out = HashMap::new();
            let mut e = Echelon::new(n + 1);
            e.insert_limited(lifted_row(Vertex::from_mask(first), n), n);
            scan(n, count as u32, first + 1, &mut e, &mut out);
            out
        })
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                a.entry(k).or_insert(v);
            }
            a
        });
    let mut traces: Vec<WitnessedTrace<S>> = found
        .into_iter()
        .map(|(bits, a)| WitnessedTrace {
            trace: Trace { n: n as u8, bits },
            witness: HyperplaneForm { coeffs: a },
        })
        .collect();
    traces.sort_by_key(|t| t.trace);
    Ok(traces)
}

fn scan<S: Exact>(
    n: usize,
    last: u32,
    next: u32,
    e: &mut Echelon<S>,
    out: &mut HashMap<u64, Vec<S>>,
) {
    if e.rows.len() == n {
        let a: Vec<S> = e.rows.iter().map(|(_, row)| row[n].clone()).collect();
        let sums = subset_sums(&a);
        let bits = sums
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, s)| s.is_one())
            .fold(0u64, |b, (i, _)| b | 1 << (i - 1));
        out.entry(bits).or_insert(a);
        return;
    }
    let need = n - e.rows.len();
    for m in next..=last {
        if (last - m + 1) < need as u32 {
            break;
        }
        let mut child = e.clone();
        if child.insert_limited(lifted_row(Vertex::from_mask(m), n), n) {
            scan(n, last, m + 1, &mut child, out);
        }
    }
}

/// [`enumerate_maximal_traces`] run in fixed-width arithmetic, with the
/// witnesses widened to arbitrary precision. Entries of the reduced echelon
/// form of a 0/1 system are ratios of minors bounded by Hadamard's inequality,
/// which fit in `i64` for `n <= 6`.
pub fn maximal_traces(n: usize) -> Result<Vec<WitnessedTrace<crate::Rational>>> {
    Ok(enumerate_maximal_traces::<crate::SmallRational>(n)?
        .into_iter()
        .map(|w| WitnessedTrace {
            trace: w.trace,
            witness: HyperplaneForm {
                coeffs: w.witness.coeffs.iter().map(|c| crate::Rational::from_big(&c.to_big()).expect("widening")).collect(),
            },
        })
        .collect())
}

/// Index of the first listed trace containing `t`, if any.
pub fn covering_trace(traces: &[Trace], t: &Trace) -> Option<usize> {
    traces.iter().position(|m| t.is_subset(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Rational, SmallRational};

    fn q(p: i64, d: i64) -> Rational {
        Rational::ratio(p, d)
    }

    fn vs(n: usize, masks: &[u32]) -> Vec<Vertex> {
        masks.iter().map(|&m| Vertex::new(m, n).unwrap()).collect()
    }

    fn plane(c: &[i64]) -> HyperplaneForm<Rational> {
        HyperplaneForm::new(c.iter().map(|&x| Rational::from_int(x)).collect()).unwrap()
    }

    // Masks: bit 0 is x1, so (1,0) is 0b01 and (0,1) is 0b10.
    #[test]
    fn trace_examples() {
        assert_eq!(trace_of(&plane(&[1, 1])).unwrap().bits(), 0b011);
        assert_eq!(
            trace_of(&plane(&[1, 1, 1])).unwrap(),
            Trace::from_vertices(3, vs(3, &[0b001, 0b010, 0b100])).unwrap()
        );
        assert_eq!(
            trace_of(&plane(&[1, 0])).unwrap(),
            Trace::from_vertices(2, vs(2, &[0b01, 0b11])).unwrap()
        );
    }

    #[test]
    fn zero_hyperplane_rejected() {
        assert_eq!(
            HyperplaneForm::<Rational>::new(vec![q(0, 1), q(0, 1)]),
            Err(Error::ZeroHyperplane)
        );
        assert!(HyperplaneForm::<Rational>::from_equation(vec![q(1, 1)], q(0, 1)).is_err());
    }

    #[test]
    fn origin_hull_examples() {
        assert!(origin_in_affine_hull(&vs(2, &[0b01, 0b10, 0b11]), 2).unwrap());
        assert!(!origin_in_affine_hull(&vs(2, &[0b01, 0b10]), 2).unwrap());
        assert!(origin_in_affine_hull(&vs(3, &[1, 2, 3, 4, 5, 6, 7]), 3).unwrap());
        assert!(origin_in_affine_hull(&[], 2).is_err());
    }

    #[test]
    fn solve_examples() {
        let s = solve_hyperplane_through::<Rational>(&vs(2, &[0b01, 0b10]), 2)
            .unwrap()
            .unwrap();
        assert_eq!(s.particular, vec![q(1, 1), q(1, 1)]);
        assert!(s.basis.is_empty());

        let s = solve_hyperplane_through::<Rational>(&vs(3, &[0b111]), 3)
            .unwrap()
            .unwrap();
        assert_eq!(s.dimension(), 2);
        let v = Vertex::new(0b111, 3).unwrap();
        for t in [[q(0, 1), q(0, 1)], [q(3, 1), q(-2, 7)], [q(1, 2), q(5, 1)]] {
            let a = HyperplaneForm::new(s.point(&t)).unwrap();
            assert!(a.contains(v));
        }

        assert!(solve_hyperplane_through::<Rational>(&vs(2, &[1, 2, 3]), 2)
            .unwrap()
            .is_none());
    }

    #[test]
    fn closure_examples() {
        assert_eq!(
            affine_closure_trace(&vs(2, &[0b01]), 2).unwrap(),
            Trace::from_vertices(2, vs(2, &[0b01])).unwrap()
        );
        let layer1 = vs(3, &[0b001, 0b010, 0b100]);
        assert_eq!(
            affine_closure_trace(&layer1, 3).unwrap(),
            Trace::from_vertices(3, layer1.clone()).unwrap()
        );
        assert_eq!(
            affine_closure_trace(&vs(2, &[1, 2, 3]), 2),
            Err(Error::OriginInHull)
        );
    }

    #[test]
    fn small_enumerations() {
        let t1 = enumerate_maximal_traces::<Rational>(1).unwrap();
        assert_eq!(t1.len(), 1);
        assert_eq!(t1[0].trace.bits(), 1);

        let t2: Vec<u64> = enumerate_maximal_traces::<Rational>(2)
            .unwrap()
            .iter()
            .map(|t| t.trace.bits())
            .collect();
        // {(1,0),(0,1)} = 0b011, {(1,0),(1,1)} = 0b101, {(0,1),(1,1)} = 0b110
        assert_eq!(t2, vec![0b011, 0b101, 0b110]);
        assert!(enumerate_maximal_traces::<Rational>(7).is_err());
    }

    #[test]
    fn scalar_types_agree() {
        for n in 1..=4 {
            let big = enumerate_maximal_traces::<Rational>(n).unwrap();
            let small = enumerate_maximal_traces::<SmallRational>(n).unwrap();
            assert_eq!(big.len(), small.len());
            for (b, s) in big.iter().zip(&small) {
                assert_eq!(b.trace, s.trace);
                let conv: Vec<Rational> = s
                    .witness
                    .coeffs()
                    .iter()
                    .map(|c| crate::scalar::convert(c).unwrap())
                    .collect();
                assert_eq!(b.witness.coeffs(), &conv[..]);
            }
        }
    }

    #[test]
    fn permutation_maps_traces() {
        let t = trace_of(&plane(&[1, 0, 0])).unwrap();
        let u = t.permuted(&[2, 1, 0]);
        assert_eq!(u, trace_of(&plane(&[0, 0, 1])).unwrap());
    }

    #[test]
    fn hex_round_trip() {
        let t = Trace::new(3, 0x5a).unwrap();
        assert_eq!(Trace::from_hex(3, &t.to_hex()).unwrap(), t);
        assert!(Trace::new(2, 0x8).is_err());
    }

    #[test]
    fn padding() {
        let h = plane(&[1, -1]).pad(4).unwrap();
        assert_eq!(h.coeffs().len(), 4);
        assert!(h.contains(Vertex::new(0b0101, 4).unwrap()));
        assert!(plane(&[1, 1, 1]).pad(2).is_err());
    }
}
