//! Cube indexing and the counting quantities shared by every other module.

use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Exact;

/// Largest dimension accepted by the cube types.
pub const MAX_DIM: usize = 20;

/// A nonzero 0/1 point of `Q^n`; bit `j` of the mask is coordinate `x_{j+1}`.
#[derive(Copy, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Vertex(u32);

impl Vertex {
    pub fn new(mask: u32, n: usize) -> Result<Self> {
        check_dim(n)?;
        if mask == 0 || (mask as u64) >> n != 0 {
            return Err(Error::BadVertex { mask: mask as u64, n });
        }
        Ok(Vertex(mask))
    }

    /// Unchecked constructor for internal loops over `1..2^n`.
    pub(crate) fn from_mask(mask: u32) -> Self {
        debug_assert!(mask != 0);
        Vertex(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    /// Number of coordinates equal to one.
    pub fn layer(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn has(self, coord: usize) -> bool {
        self.0 >> coord & 1 == 1
    }

    /// 0-based indices of the one-coordinates, ascending.
    pub fn support(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |j| mask >> j & 1 == 1)
    }

    /// Position of this vertex in a `2^n - 1` bitset.
    pub fn index(self) -> usize {
        self.0 as usize - 1
    }

    pub fn to_hex(self) -> String {
        format!("{:x}", self.0)
    }

    pub fn from_hex(s: &str, n: usize) -> Result<Self> {
        let mask = u32::from_str_radix(s, 16)
            .map_err(|_| Error::Parse(format!("bad vertex `{s}`")))?;
        Vertex::new(mask, n)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:x}", self.0)
    }
}

impl Serialize for Vertex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Vertex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let mask = u32::from_str_radix(&s, 16).map_err(serde::de::Error::custom)?;
        if mask == 0 {
            return Err(serde::de::Error::custom("the origin is not a vertex"));
        }
        Ok(Vertex(mask))
    }
}

pub fn check_dim(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DIM {
        return Err(Error::Dimension { n, max: MAX_DIM });
    }
    Ok(())
}

/// All nonzero vertices of `Q^n` in mask order.
pub fn vertices(n: usize) -> impl Iterator<Item = Vertex> {
    (1u32..(1u32 << n)).map(Vertex)
}

pub fn vertex_count(n: usize) -> usize {
    (1usize << n) - 1
}

/// Required coverage per nonzero vertex. The origin's demand is always 0
/// and is not stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DemandVector {
    n: usize,
    demand: Vec<u64>,
}

impl DemandVector {
    pub fn uniform(n: usize, k: u64) -> Result<Self> {
        check_dim(n)?;
        Ok(DemandVector { n, demand: vec![k; vertex_count(n)] })
    }

    /// `max(k - layer(v), 0)` at every vertex.
    pub fn layered(n: usize, k: u64) -> Result<Self> {
        check_dim(n)?;
        let demand = vertices(n)
            .map(|v| k.saturating_sub(v.layer() as u64))
            .collect();
        Ok(DemandVector { n, demand })
    }

    pub fn from_fn(n: usize, f: impl Fn(Vertex) -> u64) -> Result<Self> {
        check_dim(n)?;
        Ok(DemandVector { n, demand: vertices(n).map(f).collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, v: Vertex) -> u64 {
        self.demand[v.index()]
    }

    /// Demands indexed by `mask - 1`.
    pub fn as_slice(&self) -> &[u64] {
        &self.demand
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, u64)> + '_ {
        vertices(self.n).zip(self.demand.iter().copied())
    }
}

/// `C(n, t)`, zero outside `0..=n`.
pub fn binomial(n: u64, t: i64) -> BigUint {
    if t < 0 || t as u64 > n {
        return BigUint::zero();
    }
    let t = (t as u64).min(n - t as u64);
    let mut acc = BigUint::one();
    for i in 0..t {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// `C(n, t)` as a machine integer, for the small dimensions the solvers use.
pub fn binomial_u64(n: u64, t: i64) -> u64 {
    let b = binomial(n, t);
    u64::try_from(b).expect("binomial coefficient overflows u64")
}

/// `H_n = 1 + 1/2 + ... + 1/n`.
pub fn harmonic<S: Exact>(n: u64) -> Result<S> {
    if n == 0 {
        return Err(Error::InvalidArgument("harmonic number needs n >= 1".into()));
    }
    Ok((1..=n as i64).fold(S::zero(), |acc, i| acc + S::ratio(1, i)))
}

/// `lcm(C(n-1,0), C(n-1,1), ..., C(n-1,n-1))`.
pub fn lcm_binomials(n: u64) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidArgument("lcm_binomials needs n >= 1".into()));
    }
    Ok((0..n as i64).fold(BigUint::one(), |acc, j| acc.lcm(&binomial(n - 1, j))))
}

/// The vertex weight `1 / (t C(n,t))` with `t = layer(v)`.
pub fn vertex_weight<S: Exact>(n: usize, v: Vertex) -> S {
    let t = v.layer();
    debug_assert!(t >= 1 && t <= n);
    let denom = binomial(n as u64, t as i64) * t as u64;
    S::one() / S::from_bigint(denom.into())
}
