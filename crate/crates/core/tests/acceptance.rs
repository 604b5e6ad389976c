//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test -p jkssi-core --test acceptance`.

use std::process::ExitCode;
use std::time::Instant;

use jkssi_core::average::{average_game, average_point_veto};
use jkssi_core::axioms::{check_all, check_average_convexity, check_axiom, Axiom, Verdict};
use jkssi_core::builtin::{example1, exhaustive_grid, random_suite, standard_suite, ub_game, weighted_4_3211, RANDOM_SUITE_SEED};
use jkssi_core::decomposition::{alpha_leading, convex_veto_decomposition, reconstruct_phi_via_ac, ws_basis_decompose};
use jkssi_core::games::{build_point_veto, build_ws, Profile};
use jkssi_core::indices::{
    permutations_lex, phi, phi_parametric, phi_rollcall, phi_swing_formula, ssi_simple, IndexKind, ParamProfile, PowerIndex,
};
use jkssi_core::interval::{
    interval_average_closed, interval_axiom_suite, psi, psi_monte_carlo, random_step_game, IntervalIndexKind, Step, StepIntervalGame,
};
use jkssi_core::rational::{format_rational, rat, to_f64};
use jkssi_core::tu::shapley_value;
use jkssi_core::{Coalition, GameShape, JKGame, PowerVector, Rational, TUGame};
use num_traits::{One, Signed, Zero};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: jkssi_core::GameError) -> String {
    e.to_string()
}

fn pv(p: &PowerVector) -> String {
    format!("{p:?}")
}

/// Independent brute force of the average game over all of `J^n`.
fn brute_average(v: &JKGame) -> TUGame {
    let s = *v.shape();
    let n = s.n();
    let denom = Rational::from_integer((s.cells() as i64 * s.top_output() as i64).into());
    TUGame::from_fn(n, |t| {
        let mut total = 0i64;
        s.for_each_profile(|_, x| {
            let hi: Vec<u32> = (0..n).map(|i| if t.contains(i) { s.top_level() } else { x[i] }).collect();
            let lo: Vec<u32> = (0..n).map(|i| if t.contains(i) { 0 } else { x[i] }).collect();
            total += v.value(&hi) as i64 - v.value(&lo) as i64;
        });
        Rational::from_integer(total.into()) / &denom
    })
    .expect("valid TU game")
}

fn criterion_1() -> Outcome {
    let v = example1();
    let want = PowerVector::from_ratios(&[(5, 12), (7, 12)]);
    let paths = [
        ("roll-call", phi_rollcall(&v).map_err(err)?),
        ("swing formula", phi_swing_formula(&v).map_err(err)?),
        ("Shapley of average", shapley_value(&average_game(&v)).map_err(err)?),
    ];
    for (name, got) in &paths {
        ensure(*got == want, || format!("{name} gives {}", pv(got)))?;
    }
    Ok(format!("Phi(example 1) = {} on all three paths", pv(&want)))
}

fn criterion_2() -> Outcome {
    let g = average_game(&example1());
    let want = [(Coalition::EMPTY, rat(0, 1)), (Coalition::singleton(0), rat(1, 2)), (Coalition::singleton(1), rat(2, 3)), (Coalition::grand(2), rat(1, 1))];
    for (s, w) in &want {
        ensure(g[*s] == *w, || format!("average({s:?}) = {}", format_rational(&g[*s])))?;
    }
    Ok("average game of example 1 = (0, 1/2, 2/3, 1)".into())
}

fn criterion_3() -> Outcome {
    for j in [3u32, 4] {
        for k in [2u32, 3] {
            let s = GameShape::new(3, j, k).map_err(err)?;
            let u = ub_game(s).map_err(err)?;
            let jj = j as i64;
            let p = phi(&u).map_err(err)?;
            ensure(p == PowerVector::from_ratios(&[(1, jj), (jj - 1, jj), (0, 1)]), || format!("j={j}: Phi(u^b) = {}", pv(&p)))?;
            let a = Profile::uniform(j - 2, &s).map_err(err)?;
            let pa = phi_parametric(&u, &a).map_err(err)?;
            ensure(pa == PowerVector::from_ratios(&[(0, 1), (1, 1), (0, 1)]), || format!("j={j}: Phi^a(u^b) = {}", pv(&pa)))?;
            let left = vec![(Rational::one(), u.clone())];
            let right = vec![
                (rat(1, jj), build_ws(Coalition::singleton(0), s).map_err(err)?),
                (rat(jj - 1, jj), build_ws(Coalition::singleton(1), s).map_err(err)?),
            ];
            let fa = IndexKind::Parametric(ParamProfile::Uniform(j - 2));
            let bad = check_average_convexity(&fa, left.clone(), right.clone()).map_err(err)?;
            ensure(bad.verdict == Verdict::Violated, || format!("j={j}: Phi^a not flagged: {:?}", bad.verdict))?;
            ensure(bad.replay(&fa).map_err(err)?, || "violation does not replay".into())?;
            let good = check_average_convexity(&IndexKind::Phi, left, right).map_err(err)?;
            ensure(good.verdict == Verdict::HoldsOnSuite, || format!("j={j}: Phi flagged {:?}", good.message))?;
        }
    }
    Ok("u^b values exact for j=3,4; AC violation of Phi^a detected, Phi passes".into())
}

fn criterion_4() -> Outcome {
    let grid = exhaustive_grid();
    let random = random_suite(200, 3, 4, RANDOM_SUITE_SEED);
    for v in grid.iter().chain(&random) {
        let a = phi_rollcall(v).map_err(err)?;
        let b = phi(v).map_err(err)?;
        let c = shapley_value(&brute_average(v)).map_err(err)?;
        ensure(a == b && b == c, || format!("disagreement on {v:?}: {} / {} / {}", pv(&a), pv(&b), pv(&c)))?;
    }
    Ok(format!("roll-call = phi = Shapley(average) on {} grid games and {} random games", grid.len(), random.len()))
}

fn criterion_5() -> Outcome {
    let suite = standard_suite();
    for r in check_all(&IndexKind::Phi, &suite).map_err(err)? {
        ensure(r.verdict == Verdict::HoldsOnSuite, || format!("Phi fails {}: {:?}", r.axiom, r.message))?;
    }
    let high_j: Vec<JKGame> = suite.iter().filter(|g| g.shape().j() >= 3).cloned().collect();
    let cases: [(IndexKind, Axiom, &[JKGame]); 4] = [
        (IndexKind::Scaled(rat(2, 1)), Axiom::E, &suite),
        (IndexKind::BlendEqualDivision(rat(1, 2)), Axiom::NP, &suite),
        (IndexKind::Parametric(ParamProfile::BelowTop(1)), Axiom::AC, &high_j),
        (IndexKind::BasisWeighted { favored: 0 }, Axiom::S, &suite),
    ];
    let mut summary = Vec::new();
    for (f, designated, games) in cases {
        for a in [Axiom::E, Axiom::NP, Axiom::AC, Axiom::S] {
            let r = check_axiom(a, &f, games).map_err(err)?;
            let want = if a == designated { Verdict::Violated } else { Verdict::HoldsOnSuite };
            ensure(r.verdict == want, || format!("{} on {a}: {:?} ({:?})", f.name(), r.verdict, r.message))?;
            if r.verdict == Verdict::Violated {
                ensure(r.replay(&f).map_err(err)?, || format!("{} witness does not replay", f.name()))?;
            }
        }
        summary.push(format!("{} fails only {designated}", f.name()));
    }
    Ok(format!("Phi satisfies all nine axioms on {} games; {}", suite.len(), summary.join(", ")))
}

fn criterion_6() -> Outcome {
    let suite = standard_suite();
    for v in &suite {
        let d = convex_veto_decomposition(v).map_err(err)?;
        let combo = d.to_combo().map_err(err)?;
        ensure(combo.is_convex(), || format!("non-convex decomposition of {v:?}"))?;
        ensure(combo.to_game().map_err(err)?.same_function(v), || format!("veto decomposition differs on {v:?}"))?;
        let avg = average_game(v);
        let x = ws_basis_decompose(&avg, v.shape()).map_err(err)?;
        ensure(x.reconstruct() == avg, || format!("basis reconstruction differs on {v:?}"))?;
        let r = reconstruct_phi_via_ac(v).map_err(err)?;
        ensure(r.index == phi(v).map_err(err)?, || format!("AC reconstruction differs on {v:?}"))?;
    }
    Ok(format!("veto, basis and AC round trips exact on {} games", suite.len()))
}

fn criterion_7() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        for j in 2..=4 {
            let s = GameShape::new(n, j, 2).map_err(err)?;
            let mut bad = None;
            s.for_each_profile(|_, a| {
                if bad.is_some() || a.iter().all(|&l| l == 0) {
                    return;
                }
                let p = Profile::new(a.to_vec(), &s).expect("in range");
                let closed = average_point_veto(&p, &s).expect("nonzero");
                if closed != brute_average(&build_point_veto(p, s).expect("nonzero")) {
                    bad = Some(a.to_vec());
                }
                checked += 1;
            });
            if let Some(a) = bad {
                return Err(format!("closed form differs from brute force at a = {a:?}, j = {j}"));
            }
        }
    }
    let mut zeros = Vec::new();
    let mut total = 0;
    for j in 2..=5u32 {
        for c in Coalition::all(5).filter(|c| !c.is_empty()) {
            total += 1;
            if alpha_leading(c, j).map_err(err)?.is_zero() {
                zeros.push((j, c));
            }
        }
    }
    if !zeros.is_empty() {
        let js: Vec<u32> = {
            let mut v: Vec<u32> = zeros.iter().map(|z| z.0).collect();
            v.dedup();
            v
        };
        let sizes: Vec<usize> = {
            let mut v: Vec<usize> = zeros.iter().map(|z| z.1.len()).collect();
            v.sort();
            v.dedup();
            v
        };
        return Err(format!(
            "closed form matches brute force for {checked} point-veto games, but alpha_C = 0 for {} of {total} (j, C) pairs: j in {js:?}, |C| in {sizes:?}",
            zeros.len()
        ));
    }
    Ok(format!("closed form exact on {checked} point-veto games; alpha_C nonzero on {total} pairs"))
}

fn criterion_8() -> Outcome {
    let v = weighted_4_3211();
    let want = PowerVector::from_ratios(&[(1, 2), (1, 6), (1, 6), (1, 6)]);
    let perms = permutations_lex(4);
    let mut counts = [0i64; 4];
    for order in &perms {
        let mut x = vec![0u32; 4];
        for &i in order {
            let before = v.value(&x);
            x[i] = 1;
            if before == 0 && v.value(&x) == 1 {
                counts[i] += 1;
                break;
            }
        }
    }
    let oracle = PowerVector(counts.iter().map(|&c| rat(c, perms.len() as i64)).collect());
    let ssi = ssi_simple(&v).map_err(err)?;
    let table = phi(&v.to_table_game()).map_err(err)?;
    ensure(oracle == want, || format!("ordering oracle gives {}", pv(&oracle)))?;
    ensure(ssi == want, || format!("ssi gives {}", pv(&ssi)))?;
    ensure(table == want, || format!("phi of the table gives {}", pv(&table)))?;
    Ok(format!("[4;3,2,1,1] -> {} by ssi, phi and 24 orderings", pv(&want)))
}

fn criterion_9() -> Outcome {
    for n in 1..=5 {
        for s in Coalition::all(n).filter(|s| !s.is_empty()) {
            let c = StepIntervalGame::unanimity(s, n).map_err(err)?;
            let g = interval_average_closed(&c).map_err(err)?;
            ensure(g == TUGame::unanimity(s, n).map_err(err)?, || format!("average of C^{s:?} is not gamma"))?;
            let p = psi(&c).map_err(err)?;
            ensure(p == PowerVector::uniform_on(s, n), || format!("psi(C^{s:?}) = {}", pv(&p)))?;
        }
    }
    let mut worst: f64 = 0.0;
    for seed in 0..20u64 {
        let n = 2 + (seed as usize % 3);
        let g = random_step_game(n, 1 + seed as usize % 4, 4, 4, 500 + seed).map_err(err)?;
        let exact = psi(&g).map_err(err)?;
        let est = psi_monte_carlo(&g.to_black_box(), 100_000, seed).map_err(err)?;
        for i in 0..n {
            let dev = (est.value[i] - to_f64(&exact[i])).abs();
            let budget = 4.0 * est.std_error[i] + 1e-9;
            ensure(dev <= budget, || format!("seed {seed} player {}: |{} - {}| > {budget}", i + 1, est.value[i], to_f64(&exact[i])))?;
            if est.std_error[i] > 0.0 {
                worst = worst.max(dev / est.std_error[i]);
            }
        }
    }
    let suite = jkssi_core::builtin::interval_suite();
    for r in interval_axiom_suite(&IntervalIndexKind::Psi, &suite).map_err(err)? {
        ensure(r.verdict == Verdict::HoldsOnSuite, || format!("Psi fails {}: {:?}", r.axiom, r.message))?;
    }
    let cases = [
        (IntervalIndexKind::Scaled(rat(2, 1)), Axiom::E),
        (IntervalIndexKind::BlendEqualDivision(rat(1, 2)), Axiom::NP),
        (IntervalIndexKind::Parametric(rat(0, 1)), Axiom::AC),
        (IntervalIndexKind::BasisWeighted { favored: 0 }, Axiom::S),
    ];
    for (f, designated) in cases {
        for r in interval_axiom_suite(&f, &suite).map_err(err)? {
            let want = if r.axiom == designated { Verdict::Violated } else { Verdict::HoldsOnSuite };
            ensure(r.verdict == want, || format!("{} on {}: {:?}", f.name(), r.axiom, r.verdict))?;
        }
    }
    Ok(format!(
        "C^S averages exact for n <= 5; Monte Carlo within 4 sigma on 20 games (worst {worst:.2} sigma); interval axioms reproduced"
    ))
}

/// Step game from `(threshold, level)` pairs written in halves.
fn halves(n: usize, steps: &[(&[i64], i64)]) -> Result<StepIntervalGame, String> {
    let steps = steps
        .iter()
        .map(|(t, l)| Step { threshold: t.iter().map(|&h| rat(h, 2)).collect(), level: rat(*l, 2) })
        .collect();
    StepIntervalGame::new(n, steps).map_err(err)
}

fn criterion_10() -> Outcome {
    // Thresholds and levels on {0, 1/2, 1}, which lies on the grid for every j in {3, 5, 9}.
    let games = [
        halves(2, &[(&[1, 0], 1), (&[2, 1], 2)])?,
        halves(2, &[(&[0, 1], 1), (&[1, 2], 2), (&[2, 0], 2)])?,
        halves(3, &[(&[1, 1, 0], 1), (&[2, 1, 1], 2)])?,
        halves(3, &[(&[2, 0, 0], 1), (&[0, 2, 1], 2)])?,
        halves(3, &[(&[1, 0, 0], 1), (&[2, 2, 0], 2), (&[0, 1, 2], 2)])?,
    ];
    let mut lines = Vec::new();
    for (idx, g) in games.iter().enumerate() {
        let n = g.n();
        let target = psi(g).map_err(err)?;
        let mut dists = Vec::new();
        for j in [3u32, 5, 9] {
            let p = phi(&g.discretize(j, j).map_err(err)?).map_err(err)?;
            dists.push((0..n).map(|i| (&p[i] - &target[i]).abs()).max().expect("n >= 1"));
        }
        let shown: Vec<String> = dists.iter().map(|d| format!("{:.4}", to_f64(d))).collect();
        ensure(dists.windows(2).all(|w| w[1] < w[0]), || format!("game {}: distances {shown:?} do not decrease", idx + 1))?;
        lines.push(shown.join(" > "));
    }
    Ok(format!("sup distance to Psi decreases along j = 3, 5, 9 on 5 games: {}", lines.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("golden Phi of example 1", criterion_1),
        ("golden average game", criterion_2),
        ("u^b counterexample pair", criterion_3),
        ("oracle equivalence", criterion_4),
        ("axiom suite", criterion_5),
        ("decomposition round trips", criterion_6),
        ("closed forms", criterion_7),
        ("classical anchor", criterion_8),
        ("interval games", criterion_9),
        ("discretization consistency", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("PASS criterion {:>2} ({name}): {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
