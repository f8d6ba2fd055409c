//! Acceptance suite: one line per criterion, nonzero exit if a gating
//! criterion fails. Criterion 5 is a stretch goal and never gates; its
//! budget in seconds comes from `HYPERCOVER_STRETCH_SECS` (default 0, which
//! skips it).

use std::time::{Duration, Instant};

use hypercover::constructions::{
    basic_cover, catalog, layered_cover, special_cover, symmetric_cover, verify_cover,
};
use hypercover::ilp::{
    f_exact_over, g_exact_over, layered_lp_bound, layered_min_m_over, trace_columns,
    trivial_g_bound, Limits, SearchStatus,
};
use hypercover::lp::{solve_cover_lp, LpProblem, LpStatus};
use hypercover::lym::{
    associated_permutation_count, cycle_start, disjointness_check, is_cycle_start, lym_sum,
    subset_sum_family,
};
use hypercover::poly::{cover_multiplicities, MAX_POLY_FACTORS, MAX_POLY_VARS};
use hypercover::sampling::{clustered_rationals, random_rationals, zero_sum_list};
use hypercover::{maximal_traces, DemandVector, Exact, Rational, Trace};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn q(p: i64, d: i64) -> Rational {
    Rational::ratio(p, d)
}

fn harmonic_direct(n: u64) -> Rational {
    (1..=n as i64).map(|i| q(1, i)).sum()
}

fn ceil(x: Rational) -> u64 {
    x.ceil_int().try_into().unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= budget, || format!("{what} took {t:.1?}, budget {budget:?}"))
}

struct Columns(Vec<Vec<Trace>>);

impl Columns {
    fn new() -> Self {
        Columns((1..=4).map(|n| trace_columns(n).unwrap()).collect())
    }
    fn of(&self, n: usize) -> &[Trace] {
        &self.0[n - 1]
    }
}

fn proved_f(cols: &Columns, n: usize, k: u64) -> Result<u64, String> {
    let r = f_exact_over(cols.of(n), n, k, &Limits::default()).map_err(|e| e.to_string())?;
    ensure(r.status == SearchStatus::Proved, || format!("f({n},{k}) not proved"))?;
    Ok(r.optimum)
}

fn criterion_1() -> Check {
    let start = Instant::now();
    for n in 1..=5usize {
        let columns: Vec<Trace> = maximal_traces(n).unwrap().into_iter().map(|t| t.trace).collect();
        for k in [1u64, 2, 7] {
            let p = LpProblem { columns: columns.clone(), demands: DemandVector::uniform(n, k).unwrap() };
            let s = solve_cover_lp::<Rational>(&p).map_err(|e| e.to_string())?;
            let expect = harmonic_direct(n as u64) * q(k as i64, 1);
            ensure(s.status == LpStatus::Optimal && s.value == expect, || {
                format!("n={n} k={k}: got {}, expected {expect}", s.value)
            })?;
            // certificates once more, from the problem data alone
            for (v, d) in p.demands.iter() {
                let cov: Rational =
                    s.primal.iter().filter(|(j, _)| columns[**j].contains(v)).map(|(_, w)| w.clone()).sum();
                ensure(cov >= q(d as i64, 1), || format!("n={n} k={k}: primal infeasible"))?;
            }
            for t in &columns {
                let load: Rational = s.dual.iter().filter(|(v, _)| t.contains(**v)).map(|(_, y)| y.clone()).sum();
                ensure(load <= Rational::one(), || format!("n={n} k={k}: dual infeasible"))?;
            }
            let dual_obj: Rational = s.dual.values().map(|y| y.clone() * q(k as i64, 1)).sum();
            ensure(dual_obj == s.value, || format!("n={n} k={k}: duality gap"))?;
        }
    }
    within(start, Duration::from_secs(60), "n <= 5 enumeration and LPs")?;
    Ok(format!("15 LPs equal H_n k with verified certificates in {:.1?}", start.elapsed()))
}

fn criterion_2(cols: &Columns) -> Check {
    let start = Instant::now();
    let mut cells = 0;
    let cases: Vec<(usize, u64, u64)> = (1..=10)
        .map(|k| (2, k, ceil(q(3 * k as i64, 2))))
        .chain([(3, 1, 3)])
        .chain((2..=8).map(|k| (3, k, ceil(q(11 * k as i64, 6)))))
        .chain([(4, 1, 4)])
        .chain((2..=4).map(|k| (4, k, ceil(q(25 * k as i64, 12)))))
        .collect();
    for (n, k, expect) in cases {
        let got = proved_f(cols, n, k)?;
        ensure(got == expect, || format!("f({n},{k}) = {got}, expected {expect}"))?;
        cells += 1;
    }
    within(start, Duration::from_secs(300), "closed-form table")?;
    Ok(format!("{cells} values proved in {:.1?}", start.elapsed()))
}

fn criterion_3(cols: &Columns) -> Check {
    let start = Instant::now();
    for n in 2..=4usize {
        let got = proved_f(cols, n, 3)?;
        ensure(got == n as u64 + 3, || format!("f({n},3) = {got}"))?;
    }
    within(start, Duration::from_secs(120), "f(n,3)")?;
    Ok(format!("f(n,3) = n+3 for n = 2,3,4 in {:.1?}", start.elapsed()))
}

fn criterion_4(cols: &Columns) -> Check {
    ensure(proved_f(cols, 3, 4)? == 8, || "f(3,4) != 8".into())?;
    ensure(proved_f(cols, 4, 4)? == 9, || "f(4,4) != 9".into())?;
    let c = special_cover::<Rational>("q5_k4").unwrap().cover;
    ensure(verify_cover(&c, q(4, 1)).is_almost_cover() && c.size() == q(10, 1), || {
        "q5_k4 does not verify with 10 planes".into()
    })?;
    let start = Instant::now();
    let limits = Limits { max_nodes: 1_000_000, time_limit: Some(Duration::from_secs(1800)) };
    let r = f_exact_over(&trace_columns(5).unwrap(), 5, 4, &limits).map_err(|e| e.to_string())?;
    ensure(r.optimum == 10, || format!("f(5,4) search returned {}", r.optimum))?;
    let tail = match r.status {
        SearchStatus::Proved => format!("f(5,4) = 10 proved in {:.1?}", start.elapsed()),
        SearchStatus::LimitReached => "f(5,4) <= 10 verified; lower bound not completed".into(),
    };
    Ok(format!("f(3,4) = 8, f(4,4) = 9 proved; q5_k4 verifies; {tail}"))
}

const NOT_RUN: &str = "skipped (HYPERCOVER_STRETCH_SECS=0)";

fn criterion_5() -> Check {
    let secs: u64 = std::env::var("HYPERCOVER_STRETCH_SECS").ok().and_then(|s| s.parse().ok()).unwrap_or(1800);
    if secs == 0 {
        return Err(NOT_RUN.into());
    }
    let limits = Limits { max_nodes: u64::MAX, time_limit: Some(Duration::from_secs(secs)) };
    let start = Instant::now();
    let r = f_exact_over(&trace_columns(5).unwrap(), 5, 15, &limits).map_err(|e| e.to_string())?;
    match r.status {
        SearchStatus::Proved => {
            ensure(r.optimum == 35, || format!("f(5,15) = {}, expected 35", r.optimum))?;
            Ok(format!("f(5,15) = 35 proved in {:.1?} ({} nodes)", start.elapsed(), r.nodes_explored))
        }
        SearchStatus::LimitReached => Err(format!(
            "not completed in {secs} s: {} <= f(5,15) <= {} after {} nodes",
            r.lower_bound, r.optimum, r.nodes_explored
        )),
    }
}

fn criterion_6() -> Check {
    let mut count = 0;
    let mut check = |name: String, c: &hypercover::Cover, k: u64| -> Result<(), String> {
        let r = verify_cover(c, q(k as i64, 1));
        count += 1;
        ensure(r.is_almost_cover() && r.origin_coverage == q(0, 1), || format!("{name} fails at k={k}"))
    };
    for e in catalog::<Rational>() {
        check(e.name.to_string(), &e.cover, e.k)?;
    }
    for n in 1..=5 {
        for k in 1..=5 {
            check(format!("basic({n},{k})"), &basic_cover(n, k).unwrap(), k)?;
        }
    }
    let s = symmetric_cover::<Rational>(3, 6).unwrap();
    check("symmetric(3,6)".into(), &s, 6)?;
    let r = verify_cover(&s, q(6, 1));
    ensure(s.size() == q(11, 1) && r.coverage.values().all(|c| *c == q(6, 1)), || {
        "symmetric(3,6) is not 11 planes with uniform coverage 6".into()
    })?;
    Ok(format!("{count} covers verify"))
}

fn criterion_7() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let a: Vec<Rational> =
            if i % 2 == 0 { random_rationals(&mut rng, n, 100) } else { clustered_rationals(&mut rng, n) };
        let s = lym_sum(&a).unwrap();
        ensure(s <= Rational::one(), || format!("sum {s} for {a:?}"))?;
    }
    let mut binary = 0;
    for n in 1..=10usize {
        for mask in 1u32..(1 << n) {
            let a: Vec<Rational> = (0..n).map(|i| q(i64::from(mask >> i & 1), 1)).collect();
            ensure(lym_sum(&a).unwrap() == Rational::one(), || format!("not tight at {mask:b}"))?;
            binary += 1;
        }
    }
    Ok(format!("10000 random vectors <= 1; {binary} binary vectors tight"))
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut members = 0;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=6);
        let a: Vec<Rational> = clustered_rationals(&mut rng, n);
        ensure(disjointness_check(&a).unwrap(), || format!("overlap for {a:?}"))?;
        for v in subset_sum_family(&a).unwrap().members {
            let c = associated_permutation_count(&a, v).unwrap();
            let t = v.layer();
            let bound: u64 = (1..t as u64).product::<u64>() * (1..=(n - t) as u64).product::<u64>();
            ensure(c >= bound, || format!("count {c} < {bound} for {a:?}"))?;
            members += 1;
        }
    }
    for _ in 0..100_000 {
        let t = rng.gen_range(1..=12);
        let e: Vec<Rational> = zero_sum_list(&mut rng, t, 6);
        let s = cycle_start(&e).unwrap();
        ensure(is_cycle_start(&e, s), || format!("bad start {s} for {e:?}"))?;
    }
    within(start, Duration::from_secs(300), "proof machinery")?;
    Ok(format!("1000 vectors disjoint ({members} members counted); 100000 cycle starts valid"))
}

fn criterion_9() -> Check {
    let start = Instant::now();
    let mut names = Vec::new();
    for e in catalog::<Rational>() {
        if e.n > MAX_POLY_VARS || e.cover.size() > q(MAX_POLY_FACTORS as i64, 1) {
            continue;
        }
        let m = cover_multiplicities(&e.cover).map_err(|x| x.to_string())?;
        let r = verify_cover(&e.cover, q(e.k as i64, 1));
        ensure(m.origin == Some(0), || format!("{}: origin is a zero", e.name))?;
        for (v, c) in &r.coverage {
            let got = m.vertices[&v.mask()];
            ensure(got.map(|g| q(g as i64, 1)) == Some(c.clone()), || format!("{}: vertex {v}", e.name))?;
        }
        names.push(e.name);
    }
    within(start, Duration::from_secs(60), "multiplicities")?;
    Ok(format!("multiplicity = coverage on {}", names.join(", ")))
}

fn criterion_10(cols: &Columns) -> Check {
    let start = Instant::now();
    let l = Limits::default();
    let g = |n: usize, m: u64, k: u64| -> Result<u64, String> {
        let r = g_exact_over(cols.of(n), n, m, k, &l).map_err(|e| e.to_string())?;
        ensure(r.status == SearchStatus::Proved, || format!("g({n},{m},{k}) not proved"))?;
        ensure(r.deficiency >= trivial_g_bound(n, m, k), || format!("g({n},{m},{k}) below trivial bound"))?;
        Ok(r.deficiency)
    };
    let mut solved = 0;
    for n in 1..=4usize {
        for m in 0..=n as u64 {
            let v = g(n, m, 1)?;
            ensure(v == 1 << (n as u64 - m), || format!("g({n},{m},1) = {v}"))?;
            solved += 1;
        }
        for m in 1..=n as u64 + 1 {
            let v = g(n, m, 2)?;
            ensure(v == 1 << (n as u64 + 1 - m), || format!("g({n},{m},2) = {v}"))?;
            solved += 1;
        }
        for m in 0..=n as u64 + 2 {
            g(n, m, 3)?;
            solved += 1;
        }
    }
    for d in 1..=3usize {
        for k in 1..=3u64 {
            let f = proved_f(cols, d, k)?;
            for n in d..=4 {
                let v = g(n, f, k)?;
                ensure(v <= 1 << (n - d), || format!("g({n},{f},{k}) = {v} above lift bound"))?;
                solved += 1;
            }
        }
    }
    within(start, Duration::from_secs(600), "deficiency table")?;
    Ok(format!("{solved} instances proved in {:.1?}", start.elapsed()))
}

fn criterion_11(cols: &Columns) -> Check {
    for n in 1..=4usize {
        for k in 2..=4u64 {
            let r = layered_min_m_over(cols.of(n), n, k, &Limits::default()).map_err(|e| e.to_string())?;
            let witness = layered_cover::<Rational>(n, k).unwrap();
            let rep = verify_cover(&witness, q(0, 1));
            let meets = rep.coverage.iter().all(|(v, c)| *c >= q(k as i64 - v.layer() as i64, 1));
            let cap = k * (k - 1) / 2;
            ensure(meets && witness.size() == q(cap as i64, 1), || format!("({n},{k}) witness"))?;
            ensure(r.optimum <= cap, || format!("layered({n},{k}) = {} > {cap}", r.optimum))?;
        }
    }
    for k in 2..=10i64 {
        let direct: Rational = (1..k).map(|t| q(k - t, t)).sum();
        let closed = q(1 - k, 1) + q(k, 1) * harmonic_direct(k as u64 - 1);
        let got = layered_lp_bound::<Rational>(k as u64).unwrap();
        ensure(got == direct && got == closed, || format!("bound at k={k}: {got}"))?;
    }
    Ok("layered optimum <= C(k,2) for n, k <= 4; LP bound exact for k <= 10".into())
}

fn main() {
    let cols = Columns::new();
    let results: Vec<(u32, bool, Check)> = vec![
        (1, true, criterion_1()),
        (2, true, criterion_2(&cols)),
        (3, true, criterion_3(&cols)),
        (4, true, criterion_4(&cols)),
        (5, false, criterion_5()),
        (6, true, criterion_6()),
        (7, true, criterion_7()),
        (8, true, criterion_8()),
        (9, true, criterion_9()),
        (10, true, criterion_10(&cols)),
        (11, true, criterion_11(&cols)),
    ];
    let mut failed = 0;
    for (id, gating, r) in &results {
        let tag = if *gating { "" } else { " (stretch)" };
        match r {
            Ok(msg) => println!("criterion {id}{tag}: PASS - {msg}"),
            Err(msg) if msg == NOT_RUN => println!("criterion {id}{tag}: NOT RUN - {msg}"),
            Err(msg) => {
                println!("criterion {id}{tag}: FAIL - {msg}");
                failed += usize::from(*gating);
            }
        }
    }
    if failed > 0 {
        println!("{failed} gating criteria failed");
        std::process::exit(1);
    }
}
