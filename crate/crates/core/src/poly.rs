//! Exact sparse multivariate polynomials, used to read coverage counts as
//! zero multiplicities of the product of the affine forms `<a,x> - 1`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;

use crate::constructions::MultiCover;
use crate::cube::{binomial, vertices};
use crate::error::{Error, Result};
use crate::scalar::{format, Exact};

/// Largest variable count accepted by [`product_of_forms`].
pub const MAX_POLY_VARS: usize = 4;
/// Largest total multiplicity accepted by [`product_of_forms`].
pub const MAX_POLY_FACTORS: u64 = 12;

/// Polynomial in `n` variables; terms keyed by exponent vector, zero
/// coefficients never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<S> {
    n: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Exact> MultiPoly<S> {
    pub fn zero(n: usize) -> Self {
        MultiPoly { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: S) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, S::one())
    }

    /// `<a, x> + c`.
    pub fn affine(a: &[S], c: S) -> Self {
        let n = a.len();
        let mut p = Self::constant(n, c);
        for (i, ai) in a.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, ai.clone());
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                let s = slot.get().clone() + c;
                if s.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, e: &[u32]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    /// `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Smallest total degree of a term; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.clone() * c2.clone());
            }
        }
        out
    }

    pub fn evaluate(&self, p: &[S]) -> S {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter()
                    .zip(p)
                    .fold(c.clone(), |acc, (&k, x)| acc * pow(x, k))
            })
            .fold(S::zero(), |a, b| a + b)
    }

    /// `∂f/∂x_i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut d = e.clone();
                d[i] -= 1;
                out.add_term(d, c.clone() * S::from_int(e[i] as i64));
            }
        }
        out
    }

    /// `f(x + p)`, expanding each `(x_i + p_i)^e` binomially.
    pub fn shift(&self, p: &[S]) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let mut partial: Vec<(Vec<u32>, S)> = vec![(vec![0; self.n], c.clone())];
            for i in 0..self.n {
                let mut next = Vec::with_capacity(partial.len() * (e[i] as usize + 1));
                for (ex, cx) in &partial {
                    for j in 0..=e[i] {
                        let b = S::from_bigint(BigInt::from(binomial(e[i] as u64, j as i64)));
                        let coeff = cx.clone() * b * pow(&p[i], e[i] - j);
                        if coeff.is_zero() {
                            continue;
                        }
                        let mut ey = ex.clone();
                        ey[i] = j;
                        next.push((ey, coeff));
                    }
                }
                partial = next;
            }
            for (ex, cx) in partial {
                out.add_term(ex, cx);
            }
        }
        out
    }
}

fn pow<S: Exact>(x: &S, k: u32) -> S {
    (0..k).fold(S::one(), |acc, _| acc * x.clone())
}

impl<S: Exact> fmt::Display for MultiPoly<S> {
    /// Terms by descending total degree, then descending exponent vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut terms: Vec<(&Vec<u32>, &S)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (idx, (e, c)) in terms.into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, k)| **k > 0)
                .map(|(i, k)| if *k == 1 { format!("x{}", i + 1) } else { format!("x{}^{}", i + 1, k) })
                .collect();
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            match (idx, c.is_negative()) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                _ => write!(f, " {sign} ")?,
            }
            if mono.is_empty() {
                write!(f, "{}", format(&mag))?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", format(&mag), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `Π (<a,x> - 1)^{mult}` over the planes of an integral cover.
pub fn product_of_forms<S: Exact>(c: &MultiCover<S>) -> Result<MultiPoly<S>> {
    let n = c.n();
    if n > MAX_POLY_VARS {
        return Err(Error::Guard(format!("{n} variables (at most {MAX_POLY_VARS})")));
    }
    if !c.is_integral() {
        return Err(Error::InvalidArgument("product needs integral multiplicities".into()));
    }
    let size = c.size();
    if size > S::from_int(MAX_POLY_FACTORS as i64) {
        return Err(Error::Guard(format!("{} factors (at most {MAX_POLY_FACTORS})", format(&size))));
    }
    let mut out = MultiPoly::one(n);
    for (plane, mult) in c.planes() {
        let form = MultiPoly::affine(plane.coeffs(), -S::one());
        for _ in 0..mult.floor_int().try_into().unwrap_or(0u64) {
            out = out.mul(&form);
        }
    }
    Ok(out)
}

/// Lowest total degree in `f(x + p)`: 0 iff `f(p) != 0`, `None` for `f = 0`.
pub fn zero_multiplicity<S: Exact>(f: &MultiPoly<S>, p: &[S]) -> Option<u32> {
    f.shift(p).min_degree()
}

/// Multiplicity at each nonzero vertex and at the origin.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiplicityReport {
    pub origin: Option<u32>,
    /// By vertex mask.
    pub vertices: BTreeMap<u32, Option<u32>>,
}

pub fn cover_multiplicities<S: Exact>(c: &MultiCover<S>) -> Result<MultiplicityReport> {
    let f = product_of_forms(c)?;
    let n = c.n();
    let point = |mask: u32| -> Vec<S> { (0..n).map(|i| S::from_int(i64::from(mask >> i & 1))).collect() };
    Ok(MultiplicityReport {
        origin: zero_multiplicity(&f, &point(0)),
        vertices: vertices(n).map(|v| (v.mask(), zero_multiplicity(&f, &point(v.mask())))).collect(),
    })
}

/// Every nonzero vertex is a zero of multiplicity at least `k` and the origin
/// is not a zero.
pub fn check_cover_multiplicity<S: Exact>(c: &MultiCover<S>, k: u32) -> Result<bool> {
    let r = cover_multiplicities(c)?;
    Ok(r.origin == Some(0) && r.vertices.values().all(|m| m.map_or(true, |m| m >= k)))
}
