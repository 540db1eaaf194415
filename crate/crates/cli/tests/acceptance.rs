//! Acceptance criteria 1–10: one PASS/FAIL line each; exits non-zero if any fail.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::BTreeSet;
use std::panic;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rhoshift::classify::{
    canonical_form, cohomologous, common_extension_degree1, extensions_equivalent, minimal_index, parse_certificate,
    shifts_isomorphic, Certification, IsoStatus, SearchConfig,
};
use rhoshift::contraction::{degree, DEFAULT_SUBSET_BUDGET};
use rhoshift::extension::{emit_gsp, persistent_partitions, DEFAULT_PERSISTENT_BUDGET};
use rhoshift::graph::sgf::emit_sgf;
use rhoshift::graph::Path as GPath;
use rhoshift::homo::{coloring, enumerate_colorings, ColoringBudget};
use rhoshift::reduction::reduce_to_irreducible;
use rhoshift::simulate::{
    chain_variance, empirical_fiber_collapse, empirical_pair_positivity, empirical_pattern, pattern_variance, sample,
    sample_letters, within_sigma,
};
use rhoshift::{fixtures, Permutation, Rational, Rho, StochasticGraph};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// ρ = (1/3, 2/3): letter `0` (weight 1/3) steps left.
fn p() -> Rational {
    r(2, 3)
}

fn swap() -> Permutation {
    Permutation::transposition(2, 0, 1)
}

fn run_cli(args: &[&str]) -> (i32, Vec<(String, String)>) {
    let out = Command::new(env!("CARGO_BIN_EXE_rhoshift"))
        .args(args)
        .output()
        .expect("cli runs");
    let text = String::from_utf8(out.stdout).expect("utf-8");
    let pairs = text
        .lines()
        .filter_map(|l| l.split_once('='))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
    (out.status.code().unwrap_or(-1), pairs)
}

fn get<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

/// Named test graphs over their ρ.
fn fixture_set() -> Vec<(String, StochasticGraph, Rho)> {
    let mut out = Vec::new();
    let rho = fixtures::rho_pq(p());
    for n in 1..=5 {
        out.push((format!("drunkard{n}"), fixtures::drunkard_ruin(n, p()).graph, rho.clone()));
        out.push((format!("drunkard{n}-z2"), fixtures::drunkard_z2(n, p()).total_graph().0, rho.clone()));
    }
    out.push(("bernoulli".into(), rho.bernoulli_graph(), rho.clone()));
    let half = fixtures::rho_pq(r(1, 2));
    for (name, a) in [("recolored", Permutation::identity(2)), ("swap-swap", swap())] {
        let e = fixtures::bernoulli_extension(&half, vec![a, swap()]);
        out.push((name.into(), e.total_graph().0, half.clone()));
    }
    out.push(("two-cycle".into(), fixtures::two_cycle(), Rho::infer(&fixtures::two_cycle()).unwrap()));
    out
}

fn criterion1() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    for n in 1..=5 {
        let fdr = fixtures::drunkard_ruin(n, p());
        let path = dir.path().join(format!("fdr{n}.sgf"));
        std::fs::write(&path, emit_sgf(&fdr.graph, Some(&fdr.rho), Some(&fdr.labels))).map_err(|e| e.to_string())?;
        let (code, rep) = run_cli(&["--report", "degree", path.to_str().unwrap()]);
        check(code == 0, format!("n={n}: exit {code}"))?;
        check(get(&rep, "degree") == Some("1"), format!("n={n}: degree {:?}", get(&rep, "degree")))?;
        check(get(&rep, "exhausted") == Some("true"), format!("n={n}: not exhausted"))?;
        let w = get(&rep, "witness").unwrap_or("?");
        check(w.chars().all(|c| c == '0') && w.len() <= n, format!("n={n}: witness `{w}`"))?;
    }
    Ok("degree=1, witnesses 0^k with k ≤ n for n = 1..5".into())
}

fn criterion2() -> Outcome {
    for n in 1..=5 {
        for q in [p(), r(1, 4)] {
            let e = fixtures::drunkard_z2(n, q);
            let (h, labels) = e.total_graph();
            let phi = coloring(Arc::new(h), e.rho(), labels).map_err(|e| e.to_string())?;
            let d = degree(&rhoshift::homo::LetterMaps::from_coloring(&phi).unwrap(), DEFAULT_SUBSET_BUDGET);
            check(d.exhausted && d.degree == 2, format!("n={n}: degree {}", d.degree))?;
            let red = reduce_to_irreducible(&e, DEFAULT_PERSISTENT_BUDGET).map_err(|e| e.to_string())?;
            check(red.irreducible, format!("n={n}: reported reducible"))?;
        }
    }
    Ok("d(ψ∘π) = 2 and irreducible for n = 1..5".into())
}

fn criterion3() -> Outcome {
    let expected = [1usize, 2, 3, 7];
    let mut failures = Vec::new();
    let mut found = Vec::new();
    for (n, &want) in (1..=4).zip(&expected) {
        let e = fixtures::drunkard_z2(n, p());
        let transversal = transversal_partitions(n, 2);
        check(transversal.len() == 1 << (n - 1), format!("n={n}: {} transversal", transversal.len()))?;
        let census = persistent_partitions(&e, DEFAULT_PERSISTENT_BUDGET).map_err(|e| e.to_string())?;
        let lib: BTreeSet<Vec<usize>> = census
            .functions
            .iter()
            .map(|c| canonical(&c.partition().block_of()))
            .collect();
        found.push(lib.len());
        if n >= 3 {
            let alternating = canonical(&(0..2 * n).map(|v| (v / 2 + v % 2) % 2).collect::<Vec<_>>());
            check(!lib.contains(&alternating), format!("n={n}: alternating partition reported persistent"))?;
            let missing: Vec<_> = transversal.difference(&lib).collect();
            if missing.len() != 1 {
                failures.push(format!(
                    "n={n}: {} non-persistent partitions {missing:?}, expected only the alternating one",
                    missing.len()
                ));
            }
        }
        if n == 3 {
            let oracle = brute_persistent(e.base().maps(), &images(e.cocycles()), 2, 10);
            check(oracle == lib, "n=3: brute-force oracle disagrees")?;
        }
        if lib.len() != want {
            failures.push(format!("n={n}: persistent count {} expected {want}", lib.len()));
        }
    }
    if failures.is_empty() {
        Ok(format!("persistent counts {found:?}; oracle agrees at n=3"))
    } else {
        Err(format!("persistent counts {found:?}; {}", failures.join("; ")))
    }
}

fn config() -> SearchConfig {
    SearchConfig::default()
}

fn verdict(g1: &StochasticGraph, g2: &StochasticGraph, rho: &Rho) -> Result<rhoshift::classify::IsoVerdict, String> {
    shifts_isomorphic(g1, g2, rho, &config()).map_err(|e| e.to_string())
}

fn certificate_revalidates(v: &rhoshift::classify::IsoVerdict) -> bool {
    v.certificate.as_ref().is_some_and(|c| {
        c.verify()
            && parse_certificate(&c.to_text(), DEFAULT_SUBSET_BUDGET)
                .map(|back| back.verify() && &back == c)
                .unwrap_or(false)
    })
}

fn criterion4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut count = 0;
    for (name, g, rho) in fixture_set() {
        for k in 0..50 {
            let (vo, eo) = random_relabeling(&mut rng, &g);
            let h = g.relabeled(&vo, &eo);
            let v = verdict(&g, &h, &rho)?;
            check(v.status == IsoStatus::Yes, format!("{name} relabeling {k}: {}", v.status.as_str()))?;
            check(certificate_revalidates(&v), format!("{name} relabeling {k}: certificate"))?;
            count += 1;
        }
        let s2 = g.stringing(2).map_err(|e| e.to_string())?.graph;
        let v = verdict(&g, &s2, &rho)?;
        check(v.status == IsoStatus::Yes, format!("{name} vs its 2-stringing: {}", v.status.as_str()))?;
        check(certificate_revalidates(&v), format!("{name} vs 2-stringing: certificate"))?;
        count += 1;
    }
    let rho = fixtures::rho_pq(p());
    let (g3, g4) = (
        fixtures::drunkard_z2(3, p()).total_graph().0,
        fixtures::drunkard_z2(4, p()).total_graph().0,
    );
    let v = verdict(&g3, &g4, &rho)?;
    check(v.status == IsoStatus::No, format!("FDR-Z2 3 vs 4: {}", v.status.as_str()))?;
    Ok(format!("{} YES verdicts with valid certificates; FDR-Z2 3 vs 4 is NO", count))
}

fn criterion5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut bases = Vec::new();
    for n in 1..=4 {
        bases.push(fixtures::drunkard_ruin(n, p()).base);
    }
    bases.push(fixtures::bernoulli_extension(&fixtures::rho_pq(p()), vec![swap(), swap()]).base().clone());
    // bases of the lifts computed for the fixture graphs
    for (_, g, rho) in fixture_set() {
        if let Ok(c) = canonical_form(&g, &rho, &config()) {
            for b in [c.lift.extension.base(), c.extension.base()] {
                if b.vertex_count() <= 4 && !bases.contains(b) {
                    bases.push(b.clone());
                }
            }
        }
    }
    let (mut cases, mut positive) = (0, 0);
    for base in &bases {
        let (j, letters) = (base.vertex_count(), base.letter_count());
        for d in 1..=3 {
            for _ in 0..40 {
                let a1 = random_cocycle(&mut rng, letters, j, d);
                let a2 = if rng.gen_bool(0.5) {
                    let w: Vec<_> = (0..j).map(|_| random_perm(&mut rng, d)).collect();
                    twist(base, &a1, &w)
                } else {
                    random_cocycle(&mut rng, letters, j, d)
                };
                let lib = cohomologous(base, &a1, &a2, d);
                let oracle = brute_cohomologous(base.maps(), &images(&a1), &images(&a2), d);
                check(lib.is_some() == oracle, format!("disagreement on {:?}", base.maps()))?;
                positive += oracle as usize;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases}/{cases} agree ({positive} cohomologous) over {} bases", bases.len()))
}

fn simultaneously_conjugate(a: &[Permutation], b: &[Permutation]) -> bool {
    let d = a[0].degree();
    Permutation::all(d)
        .iter()
        .any(|s| a.iter().zip(b).all(|(x, y)| s.compose(x).compose(&s.inverse()) == *y))
}

fn transitive(a: &[Permutation]) -> bool {
    let d = a[0].degree();
    let mut seen = vec![false; d];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(y) = stack.pop() {
        for p in a {
            let z = p.apply(y);
            if !seen[z] {
                seen[z] = true;
                stack.push(z);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let rho = fixtures::rho_pq(p());
    let (mut yes, mut no) = (0, 0);
    for d in [2, 3] {
        let mut done = 0;
        while done < 10 {
            let a: Vec<Permutation> = (0..2).map(|_| random_perm(&mut rng, d)).collect();
            let b: Vec<Permutation> = if done % 2 == 0 {
                let s = random_perm(&mut rng, d);
                a.iter().map(|x| s.compose(x).compose(&s.inverse())).collect()
            } else {
                (0..2).map(|_| random_perm(&mut rng, d)).collect()
            };
            // the skew product is irreducible only for transitive cocycles
            if !transitive(&a) || !transitive(&b) {
                continue;
            }
            let (ga, gb) = (
                fixtures::bernoulli_extension(&rho, a.clone()).total_graph().0,
                fixtures::bernoulli_extension(&rho, b.clone()).total_graph().0,
            );
            let v = verdict(&ga, &gb, &rho)?;
            let expect = simultaneously_conjugate(&a, &b);
            check(v.status != IsoStatus::Unknown, format!("d={d}: UNKNOWN for {a:?} / {b:?}"))?;
            check(
                (v.status == IsoStatus::Yes) == expect,
                format!("d={d}: verdict {} but conjugate={expect} for {a:?} / {b:?}", v.status.as_str()),
            )?;
            if expect {
                yes += 1;
            } else {
                no += 1;
            }
            done += 1;
        }
    }
    Ok(format!("20/20 agree ({yes} conjugate, {no} not)"))
}

fn criterion7() -> Outcome {
    let half = fixtures::rho_pq(r(1, 2));
    let recolored = fixtures::bernoulli_extension(&half, vec![Permutation::identity(2), swap()]).total_graph().0;
    let m = minimal_index(&recolored, &half, &config()).map_err(|e| e.to_string())?;
    check(m.d_found == 1 && m.achieved_at.0 == 1, format!("(id, swap): d={} at n={}", m.d_found, m.achieved_at.0))?;
    check(m.certified_minimal, "(id, swap): not certified")?;
    let swapped = fixtures::bernoulli_extension(&half, vec![swap(), swap()]).total_graph().0;
    let m = minimal_index(&swapped, &half, &config()).map_err(|e| e.to_string())?;
    let period = swapped.period().map_err(|e| e.to_string())?;
    check(
        m.d_found == 2 && period == 2 && m.certification == Certification::Period,
        format!("(swap, swap): d={} period={period} cert={}", m.d_found, m.certification.as_str()),
    )?;
    Ok("(id, swap): d=1 at n=1; (swap, swap): d=2=period".into())
}

fn criterion8() -> Outcome {
    let one = Rational::from_integer(1.into());
    let zero = Rational::from_integer(0.into());
    let mut colorings = 0;
    for (name, g, rho) in fixture_set() {
        for graph in [g.clone(), g.stringing(2).map_err(|e| e.to_string())?.graph] {
            let pi = graph.stationary_distribution().map_err(|e| e.to_string())?;
            let mut next = vec![zero.clone(); graph.vertex_count()];
            for e in graph.edges() {
                next[e.dst] += &pi[e.src] * &e.weight;
            }
            check(next == pi, format!("{name}: stationary equation"))?;
            for len in 1..=3 {
                let total = graph
                    .paths_of_length(len)
                    .into_iter()
                    .map(|p| graph.cylinder_measure(&GPath::new(&graph, p).unwrap()).unwrap())
                    .fold(zero.clone(), |a, b| a + b);
                check(total == one, format!("{name}: length-{len} cylinders sum to {total}"))?;
            }
            for labels in enumerate_colorings(&graph, &rho, ColoringBudget::default()).map_err(|e| e.to_string())? {
                let mut mass = vec![zero.clone(); rho.len()];
                for (e, &i) in graph.edges().iter().zip(&labels) {
                    mass[i] += &e.weight * &pi[e.src];
                }
                check(mass == rho.weights(), format!("{name}: pushforward {mass:?}"))?;
                colorings += 1;
            }
        }
    }
    Ok(format!("exact identities on all fixtures and 2-stringings ({colorings} colorings)"))
}

fn criterion9() -> Outcome {
    const N: usize = 100_000;
    let mut checks = 0;
    for (n, seed) in [(3, 101), (5, 102)] {
        let g = fixtures::drunkard_ruin(n, p()).graph;
        let s = sample(&g, seed, N).map_err(|e| e.to_string())?;
        let pi = g.stationary_distribution().map_err(|e| e.to_string())?;
        for (u, &count) in s.occupation(&g).iter().enumerate() {
            let v = chain_variance(&g, u).map_err(|e| e.to_string())?;
            check(within_sigma(count, N, &pi[u], &v, 3.0), format!("drunkard{n} vertex {u}: {count} vs {}", pi[u]))?;
            checks += 1;
        }
        for len in 1..=2 {
            for path in g.paths_of_length(len) {
                let traversal: Vec<usize> = path.iter().rev().copied().collect();
                let mu = g.cylinder_measure(&GPath::new(&g, path).unwrap()).unwrap();
                let (hits, windows) = empirical_pattern(&s, &traversal);
                let v = pattern_variance(&g, &traversal).map_err(|e| e.to_string())?;
                check(within_sigma(hits, windows, &mu, &v, 3.0), format!("drunkard{n} cylinder: {hits} vs {mu}"))?;
                checks += 1;
            }
        }
    }
    let rho = fixtures::rho_pq(p());
    let letters = sample_letters(&rho, 103, N);
    for n in 1..=5 {
        let e = fixtures::drunkard_z2(n, p());
        check(empirical_fiber_collapse(&e, &letters) == e.d(), format!("z2 n={n}: fiber collapse"))?;
        checks += 1;
    }
    for (n1, n2) in [(2, 3), (3, 3), (3, 4)] {
        let (b1, b2) = (fixtures::drunkard_ruin(n1, p()).base, fixtures::drunkard_ruin(n2, p()).base);
        let exact: BTreeSet<_> = common_extension_degree1(&b1, &b2, DEFAULT_SUBSET_BUDGET)
            .map_err(|e| e.to_string())?
            .pairs
            .into_iter()
            .collect();
        let obs = empirical_pair_positivity(&b1, &b2, &letters).map_err(|e| e.to_string())?;
        check(obs.pairs == exact, format!("pairs {n1}/{n2}: {:?} vs {exact:?}", obs.pairs))?;
        checks += 1;
    }
    Ok(format!("{checks} Monte-Carlo checks within 3σ / exact at 10^5 steps"))
}

fn criterion10() -> Outcome {
    let mut count = 0;
    for (name, g, rho) in fixture_set() {
        let c = canonical_form(&g, &rho, &config()).map_err(|e| format!("{name}: {e}"))?;
        let (h, _) = c.extension.total_graph();
        let again = canonical_form(&h, &rho, &config()).map_err(|e| format!("{name}: {e}"))?;
        check(
            again.d() == c.d() && extensions_equivalent(&c.extension, &again.extension).is_some(),
            format!("{name}: canonical form not idempotent"),
        )?;
        // the canonical extension survives its own text form
        let parsed = rhoshift::extension::parse_gsp(&emit_gsp(&c.extension), DEFAULT_SUBSET_BUDGET)
            .map_err(|e| format!("{name}: {e}"))?;
        check(extensions_equivalent(&parsed, &c.extension).is_some(), format!("{name}: round trip"))?;
        count += 1;
    }
    Ok(format!("{count}/{count} canonical forms are fixed points up to equivalence"))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("drunkard degree and witness", criterion1),
        ("Z2 extension degree and irreducibility", criterion2),
        ("persistent-partition census", criterion3),
        ("isomorphism verdicts", criterion4),
        ("cohomology oracle", criterion5),
        ("Bernoulli-extension conjugacy", criterion6),
        ("homogeneous recoloring", criterion7),
        ("exact measure identities", criterion8),
        ("Monte-Carlo guards", criterion9),
        ("canonical-form idempotence", criterion10),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(f).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", k + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", k + 1);
            }
        }
    }
    let _ = panic::take_hook();
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
