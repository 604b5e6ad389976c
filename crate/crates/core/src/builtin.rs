//! Reference games and the standard test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::games::{
    build_point_veto, build_table_game, build_veto_set, build_weighted, profile, random_monotone_game, GameShape, JKGame, Profile,
};
use crate::interval::{random_step_game, StepIntervalGame};
use crate::rational::{int, rat};

/// Seed of the standard random suite.
pub const RANDOM_SUITE_SEED: u64 = 20_190_101;

/// The (3,3) game on two players with `v(0,0) = v(1,0) = 0`,
/// `v(0,1) = v(1,1) = 1` and 2 elsewhere.
pub fn example1() -> JKGame {
    let shape = GameShape::new(2, 3, 3).expect("shape");
    build_table_game(shape, vec![0, 1, 2, 0, 1, 2, 2, 2, 2]).expect("valid table")
}

/// `k−1` only at the top profile.
pub fn top_point_game(shape: GameShape) -> JKGame {
    build_point_veto(shape.top(), shape).expect("top profile is nonzero")
}

/// `k−1` everywhere except at the zero profile.
pub fn companion_game(shape: GameShape) -> JKGame {
    let n = shape.n();
    let units = (0..n).map(|i| profile(&(0..n).map(|h| u32::from(h == i)).collect::<Vec<_>>(), &shape)).collect();
    build_veto_set(shape, units).expect("unit vectors are nonzero")
}

/// `u^b` with `b = (1, j−1, 0, …, 0)`.
pub fn ub_game(shape: GameShape) -> Result<JKGame> {
    if shape.n() < 2 {
        return Err(GameError::BadParam("u^b needs at least two players".into()));
    }
    let mut b = vec![0; shape.n()];
    b[0] = 1;
    b[1] = shape.top_level();
    build_point_veto(Profile::new(b, &shape)?, shape)
}

/// The two veto sets `E = {(1,2,3), (2,1,2)}` and `E' = {(4,1,1), (1,1,3)}`
/// on three players with `j = 5`.
pub fn veto_pair(k: u32) -> Result<(JKGame, JKGame)> {
    let shape = GameShape::new(3, 5, k)?;
    let e = build_veto_set(shape, vec![profile(&[1, 2, 3], &shape), profile(&[2, 1, 2], &shape)])?;
    let f = build_veto_set(shape, vec![profile(&[4, 1, 1], &shape), profile(&[1, 1, 3], &shape)])?;
    Ok((e, f))
}

/// `[4; 3, 2, 1, 1]`.
pub fn weighted_4_3211() -> JKGame {
    let shape = GameShape::new(4, 2, 2).expect("shape");
    build_weighted(shape, int(4), vec![int(3), int(2), int(1), int(1)]).expect("valid weighted game")
}

/// The golden games, named.
pub fn golden_games() -> Vec<(String, JKGame)> {
    let mut out = vec![("example1".to_string(), example1())];
    let s = GameShape::new(3, 3, 3).expect("shape");
    out.push(("top-point(3,3,3)".into(), top_point_game(s)));
    out.push(("companion(3,3,3)".into(), companion_game(s)));
    for j in [3, 4] {
        let s = GameShape::new(3, j, 2).expect("shape");
        out.push((format!("u^b(j={j})"), ub_game(s).expect("n = 3")));
    }
    let (e, f) = veto_pair(3).expect("shape");
    out.push(("veto-E".into(), e));
    out.push(("veto-E'".into(), f));
    out.push(("weighted-4-3211".into(), weighted_4_3211()));
    out
}

/// Every game of `shape`, by backtracking in canonical order: a cell's value
/// is bounded below by its single-coordinate predecessors, which come first.
pub fn exhaustive_games(shape: GameShape) -> Result<Vec<JKGame>> {
    const LIMIT: usize = 200_000;
    let cells = shape.cells();
    let preds: Vec<Vec<usize>> = (0..cells)
        .map(|idx| {
            let x = shape.levels_at(idx);
            (0..shape.n())
                .filter(|&i| x[i] > 0)
                .map(|i| {
                    let mut y = x.clone();
                    y[i] -= 1;
                    shape.index_of(&y)
                })
                .collect()
        })
        .collect();
    let top = shape.top_output();
    let mut values = vec![0u32; cells];
    let mut out = Vec::new();
    fn rec(
        idx: usize,
        values: &mut Vec<u32>,
        preds: &[Vec<usize>],
        top: u32,
        shape: GameShape,
        out: &mut Vec<JKGame>,
        limit: usize,
    ) -> Result<()> {
        if out.len() > limit {
            return Err(GameError::SizeCapExceeded { what: "exhaustive games", needed: out.len() as u128, cap: limit as u128 });
        }
        if idx == values.len() {
            out.push(build_table_game(shape, values.clone())?);
            return Ok(());
        }
        let lo = preds[idx].iter().map(|&p| values[p]).max().unwrap_or(0);
        let (lo, hi) = if idx == 0 {
            (0, 0)
        } else if idx == values.len() - 1 {
            (top, top)
        } else {
            (lo, top)
        };
        if lo > hi {
            return Ok(());
        }
        for y in lo..=hi {
            values[idx] = y;
            rec(idx + 1, values, preds, top, shape, out, limit)?;
        }
        Ok(())
    }
    rec(0, &mut values, &preds, top, shape, &mut out, LIMIT)?;
    Ok(out)
}

/// All games on two players with `j, k ∈ {2, 3}`.
pub fn exhaustive_grid() -> Vec<JKGame> {
    let mut out = Vec::new();
    for j in [2, 3] {
        for k in [2, 3] {
            out.extend(exhaustive_games(GameShape::new(2, j, k).expect("shape")).expect("small grid"));
        }
    }
    out
}

/// `count` seeded random games on `n` players with `j, k ∈ 2..=max_level`.
pub fn random_suite(count: usize, n: usize, max_level: u32, seed: u64) -> Vec<JKGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let j = rng.random_range(2..=max_level);
            let k = rng.random_range(2..=max_level);
            let shape = GameShape::new(n, j, k).expect("small shape");
            random_monotone_game(shape, rng.random())
        })
        .collect()
}

/// The exhaustive two-player grid followed by 200 random three-player games
/// with `j, k ≤ 4`.
pub fn standard_suite() -> Vec<JKGame> {
    let mut out = exhaustive_grid();
    out.extend(random_suite(200, 3, 4, RANDOM_SUITE_SEED));
    out
}

/// Suites addressable by name.
pub fn builtin_suite(name: &str) -> Result<Vec<JKGame>> {
    match name {
        "golden" => Ok(golden_games().into_iter().map(|(_, g)| g).collect()),
        "grid" => Ok(exhaustive_grid()),
        "random" => Ok(random_suite(200, 3, 4, RANDOM_SUITE_SEED)),
        "standard" | "builtin" => Ok(standard_suite()),
        other => Err(GameError::BadParam(format!("unknown builtin suite {other:?} (golden, grid, random, standard)"))),
    }
}

/// Interval suite: every `C^S` on three players, the top-point game and its
/// companion, two point-veto games and seeded random step games.
pub fn interval_suite() -> Vec<StepIntervalGame> {
    let n = 3;
    let mut out: Vec<StepIntervalGame> =
        Coalition::all(n).filter(|s| !s.is_empty()).map(|s| StepIntervalGame::unanimity(s, n).expect("nonempty S")).collect();
    out.push(StepIntervalGame::point_veto(vec![int(1); n]).expect("top point"));
    out.push(StepIntervalGame::point_veto(vec![int(0); n]).expect("off zero"));
    out.push(StepIntervalGame::point_veto(vec![rat(1, 4), rat(3, 4), int(0)]).expect("point veto"));
    out.push(StepIntervalGame::point_veto(vec![rat(1, 2), rat(1, 2), rat(1, 2)]).expect("point veto"));
    for seed in 0..12 {
        out.push(random_step_game(n, 1 + (seed as usize % 4), 4, 2, 1000 + seed).expect("random step game"));
    }
    out
}
