//! Seeded random inputs for the randomized property suites.

use rand::Rng;

use crate::scalar::Exact;

/// `n` rationals `p/q` with `1 <= q <= max_den` and `-2q <= p <= 2q`.
pub fn random_rationals<S: Exact, R: Rng + ?Sized>(rng: &mut R, n: usize, max_den: i64) -> Vec<S> {
    assert!(max_den >= 1);
    (0..n)
        .map(|_| {
            let q = rng.gen_range(1..=max_den);
            S::ratio(rng.gen_range(-2 * q..=2 * q), q)
        })
        .collect()
}

/// A random vector with many subsets summing to 1: entries are drawn from
/// a handful of values of the form `1/j`, `0` and small negatives.
pub fn clustered_rationals<S: Exact, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<S> {
    (0..n)
        .map(|_| match rng.gen_range(0..4) {
            0 => S::zero(),
            1 => S::ratio(-1, rng.gen_range(1..=3)),
            _ => S::ratio(1, rng.gen_range(1..=4)),
        })
        .collect()
}

/// A nonzero 0/1 vector of length `n`.
pub fn random_binary<S: Exact, R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<S> {
    loop {
        let v: Vec<S> = (0..n).map(|_| S::from_int(rng.gen_range(0..=1))).collect();
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

/// `t` rationals summing to zero; the last entry balances the others.
pub fn zero_sum_list<S: Exact, R: Rng + ?Sized>(rng: &mut R, t: usize, max_den: i64) -> Vec<S> {
    assert!(t >= 1);
    let mut v: Vec<S> = random_rationals(rng, t - 1, max_den);
    let s = v.iter().fold(S::zero(), |a, b| a + b.clone());
    v.push(-s);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;
    use rand::SeedableRng;
    use num_traits::Zero;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_and_balanced() {
        let a: Vec<Rational> = zero_sum_list(&mut ChaCha8Rng::seed_from_u64(7), 9, 10);
        let b: Vec<Rational> = zero_sum_list(&mut ChaCha8Rng::seed_from_u64(7), 9, 10);
        assert_eq!(a, b);
        assert!(a.iter().fold(Rational::from_int(0), |x, y| x + y).is_zero());
    }
}
