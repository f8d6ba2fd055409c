use hypercover::constructions::{best_known, lift_cover, verify_cover};
use hypercover::ilp::{
    deficiency, f_exact, g_exact, layered_min_m, solve_multicover, trace_columns, trivial_g_bound,
    Limits, SearchStatus,
};
use hypercover::lp::f_star;
use hypercover::{DemandVector, Exact, Rational, Trace};

/// Visits every multiset of `m` indices below `len` as a nondecreasing list.
fn multisets(len: usize, m: usize, f: &mut impl FnMut(&[usize])) {
    fn go(len: usize, m: usize, start: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if cur.len() == m {
            f(cur);
            return;
        }
        for i in start..len {
            cur.push(i);
            go(len, m, i, cur, f);
            cur.pop();
        }
    }
    go(len, m, 0, &mut Vec::new(), f);
}

fn coverage(traces: &[Trace], n: usize, chosen: &[usize]) -> Vec<u64> {
    let mut cov = vec![0u64; 1 << n];
    for &i in chosen {
        for v in traces[i].vertices() {
            cov[v.mask() as usize] += 1;
        }
    }
    cov
}

fn brute_f(n: usize, k: u64) -> u64 {
    let traces = trace_columns(n).unwrap();
    for m in 0.. {
        let mut found = false;
        multisets(traces.len(), m, &mut |c| {
            found |= coverage(&traces, n, c)[1..].iter().all(|&x| x >= k);
        });
        if found {
            return m as u64;
        }
    }
    unreachable!()
}

fn brute_g(n: usize, m: usize, k: u64) -> u64 {
    let traces = trace_columns(n).unwrap();
    let mut best = u64::MAX;
    multisets(traces.len(), m, &mut |c| {
        let d = coverage(&traces, n, c).iter().filter(|&&x| x < k).count() as u64;
        best = best.min(d);
    });
    best
}

fn proved_f(n: usize, k: u64) -> u64 {
    let r = f_exact(n, k, &Limits::default()).unwrap();
    assert_eq!(r.status, SearchStatus::Proved);
    r.optimum
}

#[test]
fn f_matches_exhaustive_search() {
    for (n, kmax) in [(1, 4), (2, 5), (3, 3)] {
        for k in 1..=kmax {
            assert_eq!(proved_f(n, k), brute_f(n, k), "f({n},{k})");
        }
    }
}

#[test]
fn g_matches_exhaustive_search() {
    for (n, mmax, kmax) in [(2, 4, 3), (3, 4, 3), (4, 2, 2)] {
        for m in 0..=mmax {
            for k in 1..=kmax {
                let r = g_exact(n, m as u64, k, &Limits::default()).unwrap();
                assert_eq!(r.status, SearchStatus::Proved);
                assert_eq!(r.deficiency, brute_g(n, m, k), "g({n},{m},{k})");
            }
        }
    }
}

#[test]
fn witnesses_are_feasible() {
    let l = Limits::default();
    for n in 2..=4 {
        let traces = trace_columns(n).unwrap();
        for k in 1..=4 {
            let r = f_exact(n, k, &l).unwrap();
            let chosen: Vec<usize> =
                r.witness.iter().flat_map(|&(j, m)| std::iter::repeat(j).take(m as usize)).collect();
            assert_eq!(chosen.len() as u64, r.optimum);
            assert!(coverage(&traces, n, &chosen)[1..].iter().all(|&x| x >= k));
        }
        for m in 1..=3 {
            let r = g_exact(n, m, 2, &l).unwrap();
            assert_eq!(r.witness.iter().map(|w| w.1).sum::<u64>(), m);
            assert_eq!(deficiency(&traces, n, 2, &r.witness), r.deficiency);
        }
    }
}

#[test]
fn sandwich_step_and_subadditivity() {
    let mut f = std::collections::BTreeMap::new();
    for n in 2..=4 {
        for k in 1..=5u64 {
            let v = proved_f(n, k);
            let lp: Rational = f_star(n, k).unwrap();
            assert!(Rational::from_int(v as i64) >= lp);
            assert!(v <= n as u64 + k * (k - 1) / 2);
            f.insert((n, k), v);
        }
    }
    for (&(n, k), &v) in &f {
        if k >= 2 {
            assert!(v >= f[&(n, k - 1)] + 1, "step at ({n},{k})");
        }
        for k1 in 1..k {
            assert!(v <= f[&(n, k1)] + f[&(n, k - k1)], "subadditivity at ({n},{k})");
        }
    }
}

#[test]
fn deterministic_node_counts() {
    let l = Limits::default();
    let a = f_exact(4, 5, &l).unwrap();
    let b = f_exact(4, 5, &l).unwrap();
    assert_eq!(a, b);
    let a = g_exact(4, 4, 3, &l).unwrap();
    let b = g_exact(4, 4, 3, &l).unwrap();
    assert_eq!(a, b);
}

#[test]
fn g_bounds_hold() {
    let l = Limits::default();
    for n in 1..=4 {
        for m in 0..=(n as u64 + 1) {
            for k in 1..=3 {
                let r = g_exact(n, m, k, &l).unwrap();
                assert!(r.deficiency >= trivial_g_bound(n, m, k), "g({n},{m},{k})");
            }
        }
    }
    for d in 1..=3 {
        for k in 1..=3 {
            let f = proved_f(d, k);
            for n in d..=4 {
                let r = g_exact(n, f, k, &l).unwrap();
                assert!(r.deficiency <= 1 << (n - d));
            }
        }
    }
}

#[test]
fn lifted_covers_realise_the_lift_bound() {
    let c = best_known::<Rational>(2, 3).unwrap();
    let r = verify_cover(&lift_cover(&c, 4).unwrap(), Rational::from_int(3));
    assert_eq!(r.deficiency(), 4);
}

#[test]
fn layered_against_exhaustive_search() {
    for (n, k) in [(2, 2), (2, 3), (3, 2), (3, 3), (3, 4)] {
        let traces = trace_columns(n).unwrap();
        let demand = DemandVector::layered(n, k).unwrap();
        let mut m = 0;
        let best = loop {
            let mut found = false;
            multisets(traces.len(), m, &mut |c| {
                let cov = coverage(&traces, n, c);
                found |= demand.iter().all(|(v, d)| cov[v.mask() as usize] >= d);
            });
            if found {
                break m as u64;
            }
            m += 1;
        };
        let r = layered_min_m(n, k, &Limits::default()).unwrap();
        assert_eq!((r.optimum, r.status), (best, SearchStatus::Proved), "({n},{k})");
    }
}

#[test]
fn general_demands() {
    let traces = trace_columns(3).unwrap();
    let d = DemandVector::from_fn(3, |v| if v.layer() == 3 { 2 } else { 0 }).unwrap();
    let r = solve_multicover::<Rational>(&traces, &d, None, &Limits::default()).unwrap();
    assert_eq!(r.optimum, 2);
}
