use std::process::ExitCode;
use std::time::{Duration, Instant};

use ggcode_core::certificate::{certify, rayleigh_check};
use ggcode_core::fixtures::{
    fixture_k333, fixture_k777, hamming_pair, k333_matrix_m, k333_triangle, K333_MATRIX_M,
};
use ggcode_core::graphcode::bipartite_bound;
use ggcode_core::graphs::closed_form_spectrum;
use ggcode_core::matrix::{symmetric_eigen, symmetric_eigenvalues, JACOBI_DEFAULT_TOL};
use ggcode_core::mindist::{min_distance_bz, min_distance_exhaustive};
use ggcode_core::{
    BoundOutcome, BoundValue, EdgeAssignment, Engine, FieldSpec, GeneralizedGraphCode, GfMatrix,
    Lambda2, LinearCode, PartiteGraph, RealSymMatrix, SearchOptions,
};
use num_rational::Ratio;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn exact(v: i64) -> BoundOutcome {
    BoundOutcome::Applicable(BoundValue::Exact(Ratio::from_integer(v)))
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:?}, limit {limit:?}"))
}

fn k777_reproduction() -> Outcome {
    let start = Instant::now();
    let gc = fixture_k777();
    ensure(gc.len() == 147, || format!("N = {}", gc.len()))?;
    let opts = SearchOptions {
        engine: Engine::Bz,
        ..Default::default()
    };
    let (bracket, engine) = gc
        .minimum_distance(&opts)
        .map_err(|e| e.to_string())?
        .ok_or("zero code")?;
    ensure(engine == Engine::Bz, || format!("engine {engine}"))?;
    ensure(bracket.value() == Some(9), || format!("D bracket {bracket:?}"))?;
    let bound = gc.theorem_bound().map_err(|e| e.to_string())?;
    ensure(
        bound == BoundOutcome::Applicable(BoundValue::Exact(Ratio::new(9, 2))),
        || format!("bound {bound:?}"),
    )?;
    ensure(bound.value().unwrap().is_met_by(9), || "9 >= 9/2 fails".into())?;
    let k = gc.dimension();
    let k_shuffled = gc.dimension_shuffled(0x5eed);
    ensure(k == k_shuffled, || format!("K = {k} but shuffled elimination gives {k_shuffled}"))?;
    ensure(k == 48, || format!("discrepancy: claimed K = 48, computed K = {k}"))?;
    within(Duration::from_secs(300), start)?;
    Ok(format!("N=147 K={k} D=9 (bz) bound=9/2 in {:.1?}", start.elapsed()))
}

fn k333_reproduction() -> Outcome {
    let gc = fixture_k333();
    let k = gc.dimension();
    ensure(k <= 27 - 8, || format!("K = {k}"))?;
    let opts = SearchOptions {
        engine: Engine::Exhaustive,
        ..Default::default()
    };
    let (bracket, engine) = gc
        .minimum_distance(&opts)
        .map_err(|e| e.to_string())?
        .ok_or("zero code")?;
    ensure(engine == Engine::Exhaustive && bracket.value() == Some(3), || {
        format!("{engine}: {bracket:?}")
    })?;
    let bound = gc.theorem_bound().map_err(|e| e.to_string())?;
    ensure(bound == exact(2), || format!("bound {bound:?}"))?;

    let m = k333_matrix_m(&gc);
    ensure(gc.verify_membership(&m).map_err(|e| e.to_string())?.is_member, || {
        "matrix M assignment is not a codeword".into()
    })?;
    // each edge appears twice in the symmetric matrix
    let entry_sum: u32 = K333_MATRIX_M.iter().flatten().sum();
    ensure(entry_sum % 2 == 0 && m.weight() == (entry_sum / 2) as usize && m.weight() == 18, || {
        format!("matrix M weight {} vs entry sum {entry_sum}", m.weight())
    })?;
    let t = k333_triangle(&gc);
    ensure(t.weight() == 3, || format!("triangle weight {}", t.weight()))?;
    ensure(gc.verify_membership(&t).map_err(|e| e.to_string())?.is_member, || {
        "triangle is not a codeword".into()
    })?;
    Ok(format!("K={k} D=3 (exhaustive over 2^{k}) bound=2 wt(M)=18 wt(triangle)=3"))
}

fn bipartite_consistency() -> Outcome {
    let start = Instant::now();
    let g = PartiteGraph::complete_multipartite(2, 4).map_err(|e| e.to_string())?;
    let gc = GeneralizedGraphCode::build(g, vec![LinearCode::even_weight(4).unwrap()])
        .map_err(|e| e.to_string())?;
    let general = gc.theorem_bound().map_err(|e| e.to_string())?;
    let l2 = gc.lambda2().map_err(|e| e.to_string())?;
    let prop = bipartite_bound(2, 4, 4, l2).ok_or("bipartite bound not applicable")?;
    ensure(general == exact(4), || format!("general bound {general:?}"))?;
    ensure(general.value() == Some(prop), || format!("bipartite bound {prop:?}"))?;
    let opts = SearchOptions {
        engine: Engine::Exhaustive,
        ..Default::default()
    };
    let (b, _) = gc.minimum_distance(&opts).map_err(|e| e.to_string())?.ok_or("zero code")?;
    ensure(b.value() == Some(4), || format!("D bracket {b:?}"))?;
    // the 4-cycle v1 v5 v2 v6
    let cycle: Vec<usize> = [(0, 4), (1, 4), (1, 5), (0, 5)]
        .iter()
        .map(|e| gc.graph().edges().iter().position(|x| x == e).unwrap())
        .collect();
    let c = EdgeAssignment::indicator(gc.len(), &cycle);
    ensure(gc.verify_membership(&c).map_err(|e| e.to_string())?.is_member, || {
        "4-cycle is not a codeword".into()
    })?;
    within(Duration::from_secs(10), start)?;
    Ok(format!("K={} bound=4 matches bipartite form, D=4 tight", gc.dimension()))
}

fn rayleigh_suite() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut checked = 0;
    for _ in 0..100 {
        let n = rng.random_range(2..=10);
        let mut p = RealSymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                p.set(i, j, rng.random_range(-1.0..1.0));
            }
        }
        let eig = symmetric_eigen(&p, JACOBI_DEFAULT_TOL).map_err(|e| e.to_string())?;
        let top = &eig.vectors[0];
        for _ in 0..10 {
            let mut y: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            let dot: f64 = y.iter().zip(top).map(|(a, b)| a * b).sum();
            for (yi, ti) in y.iter_mut().zip(top) {
                *yi -= dot * ti;
            }
            let ok = rayleigh_check(&p, &y, 1e-9).map_err(|e| e.to_string())?;
            ensure(ok, || format!("violation at order {n}: y = {y:?}"))?;
            checked += 1;
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("{checked} vectors, 0 violations"))
}

fn random_code(rng: &mut ChaCha8Rng) -> GfMatrix {
    let f = FieldSpec::gf2();
    loop {
        let k = rng.random_range(1..=12);
        let n = rng.random_range(k..=24);
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|_| (0..n).map(|_| rng.random_range(0..2)).collect())
            .collect();
        let g = GfMatrix::from_rows(&f, &rows).unwrap();
        if g.rank() == k {
            return g;
        }
    }
}

fn engine_cross_validation() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut gens: Vec<GfMatrix> = (0..100).map(|_| random_code(&mut rng)).collect();
    gens.push(hamming_pair().generator().clone());
    gens.push(LinearCode::even_weight(6).unwrap().generator().clone());
    let inner = [(14, 8, 3), (6, 5, 2)];
    for (idx, g) in gens.iter().enumerate() {
        let ex = min_distance_exhaustive(g).map_err(|e| e.to_string())?;
        let bz = min_distance_bz(g, &SearchOptions::default()).map_err(|e| e.to_string())?;
        ensure(bz.value() == Some(ex), || {
            format!("code {idx} ({}x{}): bz {bz:?} vs exhaustive {ex}", g.rows(), g.cols())
        })?;
        if idx >= 100 {
            let want = inner[idx - 100];
            ensure((g.cols(), g.rows(), ex) == want, || format!("inner code {:?}", (g.cols(), g.rows(), ex)))?;
        }
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("{} codes, 0 mismatches", gens.len()))
}

/// `xᵀAx` summed over ordered cross-part pairs of a complete multipartite graph.
fn brute_quadratic_form(ell: usize, m: usize, x: &[i64]) -> i64 {
    let mut s = 0;
    for u in 0..ell * m {
        for w in 0..ell * m {
            if u / m != w / m {
                s += x[u] * x[w];
            }
        }
    }
    s
}

fn theorem_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    for (name, gc, d) in [("k777", fixture_k777(), 3i64), ("k333", fixture_k333(), 2)] {
        let (ell, m, n) = (gc.ell() as i64, gc.m() as i64, gc.n() as i64);
        ensure(gc.lambda2().unwrap() == Lambda2::Exact(Ratio::from_integer(0)), || "lambda2".into())?;
        let l2 = 0.0;
        let k = gc.dimension();
        let mut drawn = 0;
        while drawn < 200 {
            let msg: Vec<u32> = (0..k).map(|_| rng.random_range(0..2)).collect();
            let c = gc.encode(&msg).map_err(|e| e.to_string())?;
            if c.weight() == 0 {
                continue;
            }
            drawn += 1;
            // supports from local views, independent of the certificate code
            let mut a = 0i64;
            for i in 0..gc.ell() {
                let s = gc
                    .graph()
                    .part(i)
                    .filter(|&v| gc.local_view(&c, v).unwrap().weight() > 0)
                    .count() as i64;
                a = a.max(s);
            }
            let cert = certify(&gc, &c).map_err(|e| e.to_string())?;
            let fail = |what: &str| format!("{name} codeword #{drawn}: {what} ({c:?})");
            ensure(cert.supports.a as i64 == a, || fail("a"))?;
            ensure(c.weight() as i64 >= d * a, || fail("wt(c) >= d*a"))?;
            let x = &cert.supports.x;
            let norm: i64 = x.iter().map(|v| v * v).sum();
            ensure(norm == ell * a * m * (m - a), || fail("|x|^2 identity"))?;
            let q = brute_quadratic_form(gc.ell(), gc.m(), x);
            ensure(q == cert.quadratic_form, || fail("quadratic form"))?;
            ensure(q as f64 <= l2 * (ell * a * m * (m - a)) as f64 + 1e-6, || fail("x'Ax upper bound"))?;
            // a >= m(d - λ₂)/((ℓ-1)n - λ₂) with λ₂ = 0
            ensure(a * (ell - 1) * n >= m * d, || fail("a lower bound"))?;
            ensure(cert.verdict(), || fail("certificate verdict"))?;
        }
        total += drawn;
    }
    Ok(format!("{total} codewords, 0 violations"))
}

fn spectral_closed_form() -> Outcome {
    let mut cases = 0;
    for ell in 2..=15 {
        for m in 1..=30 / ell {
            let g = PartiteGraph::complete_multipartite(ell, m).unwrap();
            let got = symmetric_eigenvalues(&g.adjacency_matrix(), JACOBI_DEFAULT_TOL)
                .map_err(|e| e.to_string())?;
            let mut want = vec![((ell - 1) * m) as f64];
            want.extend(std::iter::repeat_n(0.0, ell * (m - 1)));
            want.extend(std::iter::repeat_n(-(m as f64), ell - 1));
            want.sort_by(|a, b| b.partial_cmp(a).unwrap());
            ensure(got.len() == want.len(), || format!("K_{m}x{ell}: {} eigenvalues", got.len()))?;
            for (a, b) in got.iter().zip(&want) {
                ensure((a - b).abs() <= 1e-8, || format!("K_{m}x{ell}: {a} vs {b}"))?;
            }
            let closed: usize = closed_form_spectrum(ell, m).iter().map(|&(_, k)| k).sum();
            ensure(closed == ell * m, || format!("closed form multiplicities for K_{m}x{ell}"))?;
            cases += 1;
        }
    }
    let l2 = PartiteGraph::complete_multipartite(3, 3).unwrap().lambda2().map_err(|e| e.to_string())?;
    ensure(l2 == Lambda2::Exact(Ratio::from_integer(0)), || format!("lambda2(K333) = {l2:?}"))?;
    Ok(format!("{cases} graphs within 1e-8, lambda2(K3,3,3) = 0 exactly"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("K7,7,7 reproduction", k777_reproduction),
        ("K3,3,3 reproduction", k333_reproduction),
        ("bipartite consistency", bipartite_consistency),
        ("Rayleigh quotient suite", rayleigh_suite),
        ("engine cross-validation", engine_cross_validation),
        ("theorem property suite", theorem_properties),
        ("spectral closed form", spectral_closed_form),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("[PASS] {}. {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("[FAIL] {}. {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
