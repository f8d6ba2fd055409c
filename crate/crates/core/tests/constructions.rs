use hypercover::constructions::{
    basic_cover, best_known, catalog, fractional_symmetric, lift_cover, symmetric_cover,
    symmetric_period, verify_cover, MultiCover,
};
use hypercover::{binomial, harmonic, Exact, HyperplaneForm, Rational, Vertex};
use num_bigint::BigUint;
use proptest::prelude::*;

fn int(x: i64) -> Rational {
    Rational::from_int(x)
}

/// Coverage of `v` computed from scratch: `Σ a_i v_i = 1`.
fn direct_coverage(c: &MultiCover<Rational>, v: Vertex) -> Rational {
    let mut total = int(0);
    for (p, m) in c.planes() {
        let s: Rational = v.support().map(|i| p.coeffs()[i].clone()).sum();
        if s == int(1) {
            total += m.clone();
        }
    }
    total
}

#[test]
fn coverage_matches_direct_sum() {
    for e in catalog::<Rational>() {
        let r = verify_cover(&e.cover, int(e.k as i64));
        for (v, c) in &r.coverage {
            assert_eq!(*c, direct_coverage(&e.cover, *v), "{}", e.name);
        }
    }
}

#[test]
fn binomial_coverage_identity() {
    for n in 1..=8u64 {
        for t in 1..=n {
            let lhs: BigUint = (1..=n).map(|j| binomial(n - j, t as i64 - 1)).sum();
            assert_eq!(lhs, binomial(n, t as i64));
        }
    }
}

#[test]
fn basic_covers_verify() {
    for n in 1..=5 {
        for k in 1..=5u64 {
            let c = basic_cover::<Rational>(n, k).unwrap();
            let r = verify_cover(&c, int(k as i64));
            assert!(r.is_almost_cover(), "n = {n}, k = {k}");
            assert_eq!(c.size(), int((n as u64 + k * (k - 1) / 2) as i64));
        }
    }
}

#[test]
fn symmetric_covers_are_uniform() {
    for n in 1..=4 {
        let k = symmetric_period(n).unwrap();
        let c = symmetric_cover::<Rational>(n, k).unwrap();
        assert_eq!(c.size(), harmonic::<Rational>(n as u64).unwrap() * int(k as i64));
        let r = verify_cover(&c, int(k as i64));
        assert!(r.coverage.values().all(|x| *x == int(k as i64)));
        assert!(r.layer_minima.values().all(|x| *x == int(k as i64)));
    }
    assert_eq!(symmetric_period(3).unwrap(), 6);
    assert_eq!(symmetric_period(4).unwrap(), 12);
}

#[test]
fn fractional_covers_are_uniform() {
    for n in 1..=6 {
        let c = fractional_symmetric::<Rational>(n, 1).unwrap();
        assert_eq!(c.size(), harmonic::<Rational>(n as u64).unwrap());
        assert!(verify_cover(&c, int(1)).coverage.values().all(|x| *x == int(1)));
    }
}

#[test]
fn best_known_beats_basic_and_verifies() {
    for n in 1..=5 {
        for k in 1..=12u64 {
            let b = best_known::<Rational>(n, k).unwrap();
            assert!(verify_cover(&b, int(k as i64)).is_almost_cover());
            assert!(b.size() <= basic_cover::<Rational>(n, k).unwrap().size());
            let floor = (harmonic::<Rational>(n as u64).unwrap() * int(k as i64)).ceil_int();
            assert!(b.size() >= Rational::from_integer(floor));
        }
    }
}

#[test]
fn catalog_origin_is_uncovered() {
    for e in catalog::<Rational>() {
        let r = verify_cover(&e.cover, int(e.k as i64));
        assert_eq!(r.origin_coverage, int(0));
        assert!(r.is_almost_cover(), "{}", e.name);
    }
}

proptest! {
    #[test]
    fn lifting_leaves_exactly_the_base_fiber(d in 1usize..=3, extra in 0usize..=2, k in 1u64..=4) {
        let n = d + extra;
        let c = best_known::<Rational>(d, k).unwrap();
        let r = verify_cover(&lift_cover(&c, n).unwrap(), int(k as i64));
        prop_assert_eq!(r.deficiency(), 1 << extra);
        for (v, cov) in &r.coverage {
            let base_zero = v.mask() & ((1 << d) - 1) == 0;
            prop_assert_eq!(*cov < int(k as i64), base_zero);
        }
    }

    #[test]
    fn unions_add_coverage(n in 1usize..=4, k1 in 1u64..=3, k2 in 1u64..=3) {
        let a = basic_cover::<Rational>(n, k1).unwrap();
        let b = best_known::<Rational>(n, k2).unwrap();
        let u = a.union(&b).unwrap();
        prop_assert_eq!(u.size(), a.size() + b.size());
        prop_assert!(verify_cover(&u, int((k1 + k2) as i64)).is_almost_cover());
    }
}

#[test]
fn negative_coefficients_are_supported() {
    let p = HyperplaneForm::<Rational>::from_equation(vec![int(-1), int(1), int(1)], int(1)).unwrap();
    let mut c = MultiCover::new(3).unwrap();
    c.push_int(p, 1).unwrap();
    let r = verify_cover(&c, int(1));
    let covered: Vec<u32> = r.coverage.iter().filter(|(_, x)| **x == int(1)).map(|(v, _)| v.mask()).collect();
    assert_eq!(covered, vec![0b010, 0b100, 0b111]);
}
