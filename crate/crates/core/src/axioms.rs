//! Executable axioms for power indices on (j,k) simple games.
//!
//! Every check is broken into [`Case`]s. A violated report keeps the first
//! failing case, which can be replayed against any index.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::average::{average_game, average_of_combo};
use crate::decomposition::{convex_veto_decomposition, ws_basis_decompose};
use crate::error::{GameError, Result};
use crate::games::{
    and_game, build_point_veto, build_table_game, build_veto_set, build_ws, or_game, random_monotone_game, GameCombo, GameShape,
    JKGame, Profile,
};
use crate::indices::{permutations_lex, PowerIndex};
use crate::rational::{self, rat, Rational};
use crate::tu::PowerVector;

/// Sampled permutations per game for (A) when `n > 4`.
pub const ANONYMITY_SAMPLES: usize = 20;
/// Seed for every sampled choice the checker makes.
pub const AXIOM_SEED: u64 = 0x5eed_a110;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Axiom {
    P,
    A,
    S,
    E,
    NP,
    T,
    C,
    L,
    AC,
}

impl Axiom {
    pub const ALL: [Axiom; 9] = [Axiom::P, Axiom::A, Axiom::S, Axiom::E, Axiom::NP, Axiom::T, Axiom::C, Axiom::L, Axiom::AC];

    pub fn parse(s: &str) -> Option<Axiom> {
        Axiom::ALL.into_iter().find(|a| a.to_string().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnSuite,
    Violated,
    /// No applicable case (or only cases whose precondition failed).
    Vacuous,
}

/// Convex (or, for (L), arbitrary) weights over games.
pub type WeightedGames = Vec<(Rational, JKGame)>;

/// One concrete instance of an axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Case {
    /// (P), (E), (S) or (NP) on a single game.
    Single { axiom: Axiom, game: JKGame },
    /// (A): `F_{π(i)}(πv) = F_i(v)` with `perm[i] = π(i)`.
    Permuted { game: JKGame, perm: Vec<usize> },
    /// (T) on the pair `u, v`.
    Transfer { u: JKGame, v: JKGame },
    /// (C) or (L): `combined = Σ terms` pointwise.
    Combination { axiom: Axiom, combined: JKGame, terms: WeightedGames },
    /// (AC): two convex systems.
    AverageConvexity { left: WeightedGames, right: WeightedGames },
}

impl Case {
    pub fn axiom(&self) -> Axiom {
        match self {
            Case::Single { axiom, .. } | Case::Combination { axiom, .. } => *axiom,
            Case::Permuted { .. } => Axiom::A,
            Case::Transfer { .. } => Axiom::T,
            Case::AverageConvexity { .. } => Axiom::AC,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    /// The case does not apply; carries the reason.
    Skipped(String),
}

#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub axiom: Axiom,
    pub index: String,
    pub verdict: Verdict,
    pub cases: usize,
    pub skipped: usize,
    pub witness: Option<Case>,
    pub message: Option<String>,
}

impl AxiomReport {
    /// Reruns the recorded witness; `true` if it still fails under `f`.
    pub fn replay(&self, f: &dyn PowerIndex) -> Result<bool> {
        match &self.witness {
            Some(case) => Ok(matches!(evaluate_case(f, case)?, Outcome::Fail(_))),
            None => Ok(false),
        }
    }
}

fn combine(terms: &[(Rational, PowerVector)], n: usize) -> PowerVector {
    terms.iter().fold(PowerVector::zeros(n), |acc, (w, p)| &acc + &(w * p))
}

fn is_convex_system(terms: &[(Rational, JKGame)]) -> bool {
    !terms.is_empty() && terms.iter().all(|(w, _)| !w.is_negative()) && terms.iter().map(|(w, _)| w).sum::<Rational>().is_one()
}

/// Evaluates one case against `f`.
pub fn evaluate_case(f: &dyn PowerIndex, case: &Case) -> Result<Outcome> {
    Ok(match case {
        Case::Single { axiom, game } => {
            let p = f.compute(game)?;
            match axiom {
                Axiom::P => {
                    if p.is_zero() {
                        Outcome::Fail(format!("F = {p:?} is the zero vector"))
                    } else if !p.is_nonneg() {
                        Outcome::Fail(format!("F = {p:?} has a negative entry"))
                    } else {
                        Outcome::Pass
                    }
                }
                Axiom::E => {
                    let s = p.sum();
                    if s.is_one() {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(format!("sum of F = {}", rational::format_rational(&s)))
                    }
                }
                Axiom::NP => match game.null_players().into_iter().find(|&i| !p[i].is_zero()) {
                    Some(i) => Outcome::Fail(format!("null player {} gets {}", i + 1, rational::format_rational(&p[i]))),
                    None => Outcome::Pass,
                },
                Axiom::S => match game.equivalent_pairs().into_iter().find(|&(i, h)| p[i] != p[h]) {
                    Some((i, h)) => Outcome::Fail(format!(
                        "equivalent players {} and {} get {} and {}",
                        i + 1,
                        h + 1,
                        rational::format_rational(&p[i]),
                        rational::format_rational(&p[h])
                    )),
                    None => Outcome::Pass,
                },
                other => return Err(GameError::BadParam(format!("{other} is not a single-game axiom"))),
            }
        }
        Case::Permuted { game, perm } => {
            let p = f.compute(game)?;
            let q = f.compute(&game.permute(perm)?)?;
            match (0..game.n()).find(|&i| q[perm[i]] != p[i]) {
                Some(i) => Outcome::Fail(format!("F_{}(πv) != F_{}(v)", perm[i] + 1, i + 1)),
                None => Outcome::Pass,
            }
        }
        Case::Transfer { u, v } => {
            let lhs = &f.compute(u)? + &f.compute(v)?;
            let rhs = &f.compute(&or_game(u, v)?)? + &f.compute(&and_game(u, v)?)?;
            if lhs == rhs {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("F(u)+F(v) = {lhs:?}, F(u∨v)+F(u∧v) = {rhs:?}"))
            }
        }
        Case::Combination { axiom, combined, terms } => {
            if *axiom == Axiom::C && !is_convex_system(terms) {
                return Err(GameError::BadParam("(C) needs convex weights".into()));
            }
            let sum = GameCombo::new(terms.clone())?.to_game()?;
            if !sum.same_function(combined) {
                return Err(GameError::BadParam("combination does not equal the combined game".into()));
            }
            let lhs = f.compute(combined)?;
            let parts = terms.iter().map(|(w, g)| Ok((w.clone(), f.compute(g)?))).collect::<Result<Vec<_>>>()?;
            let rhs = combine(&parts, combined.n());
            if lhs == rhs {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("F(w) = {lhs:?}, combination of F = {rhs:?}"))
            }
        }
        Case::AverageConvexity { left, right } => {
            if !is_convex_system(left) || !is_convex_system(right) {
                return Err(GameError::BadParam("(AC) needs two convex systems".into()));
            }
            let l = GameCombo::new(left.clone())?;
            let r = GameCombo::new(right.clone())?;
            l.shape().ensure_same(r.shape())?;
            if average_of_combo(&l) != average_of_combo(&r) {
                return Ok(Outcome::Skipped("average games differ".into()));
            }
            let n = l.shape().n();
            let side = |terms: &WeightedGames| -> Result<PowerVector> {
                let parts = terms.iter().map(|(w, g)| Ok((w.clone(), f.compute(g)?))).collect::<Result<Vec<_>>>()?;
                Ok(combine(&parts, n))
            };
            let (a, b) = (side(left)?, side(right)?);
            if a == b {
                Outcome::Pass
            } else {
                Outcome::Fail(format!("left gives {a:?}, right gives {b:?}"))
            }
        }
    })
}

/// Runs all cases (in parallel) and folds them into a report keeping the
/// first failure in case order.
pub fn run_cases(axiom: Axiom, f: &dyn PowerIndex, cases: Vec<Case>) -> Result<AxiomReport> {
    let outcomes = cases.par_iter().map(|c| evaluate_case(f, c)).collect::<Vec<_>>();
    let mut skipped = 0;
    let mut total = 0;
    for (case, outcome) in cases.iter().zip(outcomes) {
        total += 1;
        match outcome? {
            Outcome::Pass => {}
            Outcome::Skipped(_) => skipped += 1,
            Outcome::Fail(msg) => {
                return Ok(AxiomReport {
                    axiom,
                    index: f.name(),
                    verdict: Verdict::Violated,
                    cases: total,
                    skipped,
                    witness: Some(case.clone()),
                    message: Some(msg),
                })
            }
        }
    }
    let verdict = if total == skipped { Verdict::Vacuous } else { Verdict::HoldsOnSuite };
    Ok(AxiomReport { axiom, index: f.name(), verdict, cases: total, skipped, witness: None, message: None })
}

/// Groups the suite by shape, keeping the suite order inside each group.
fn by_shape(suite: &[JKGame]) -> BTreeMap<(usize, u32, u32), Vec<&JKGame>> {
    let mut groups: BTreeMap<_, Vec<&JKGame>> = BTreeMap::new();
    for g in suite {
        let s = g.shape();
        groups.entry((s.n(), s.j(), s.k())).or_default().push(g);
    }
    groups
}

/// Pairs inside each shape group: neighbours in suite order plus one seeded
/// random partner per game.
fn suite_pairs(suite: &[JKGame]) -> Vec<(JKGame, JKGame)> {
    let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);
    let mut out = Vec::new();
    for group in by_shape(suite).into_values() {
        let m = group.len();
        if m < 2 {
            continue;
        }
        for i in 0..m {
            out.push((group[i].clone(), group[(i + 1) % m].clone()));
            let r = rng.random_range(0..m);
            if r != i {
                out.push((group[i].clone(), group[r].clone()));
            }
        }
    }
    out
}

fn map_values(v: &JKGame, f: impl Fn(u32) -> u32) -> Result<JKGame> {
    build_table_game(*v.shape(), v.table().iter().map(|&y| f(y)).collect())
}

/// `v = ½·round_up(v) + ½·round_down(v)`, where odd interior output levels
/// move one step up or down. Both parts are games; `None` if `v` has no odd
/// interior level.
pub fn rounding_mixture(v: &JKGame) -> Result<Option<(JKGame, JKGame)>> {
    let top = v.shape().top_output();
    let odd = |y: u32| y % 2 == 1 && y < top;
    if !v.table().iter().any(|&y| odd(y)) {
        return Ok(None);
    }
    let up = map_values(v, |y| if odd(y) { y + 1 } else { y })?;
    let down = map_values(v, |y| if odd(y) { y - 1 } else { y })?;
    Ok(Some((up, down)))
}

fn permutation_cases(game: &JKGame, rng: &mut ChaCha8Rng) -> Vec<Case> {
    let n = game.n();
    let mut perms = Vec::new();
    if n <= 4 {
        perms = permutations_lex(n);
    } else {
        for a in 0..n {
            for b in a + 1..n {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(a, b);
                perms.push(p);
            }
        }
        for _ in 0..ANONYMITY_SAMPLES {
            let mut p: Vec<usize> = (0..n).collect();
            p.shuffle(rng);
            perms.push(p);
        }
    }
    perms.into_iter().map(|perm| Case::Permuted { game: game.clone(), perm }).collect()
}

/// Cases of one axiom over a suite (AC included, via the witness recipes).
pub fn axiom_cases(axiom: Axiom, suite: &[JKGame]) -> Result<Vec<Case>> {
    let mut cases = Vec::new();
    match axiom {
        Axiom::P | Axiom::E | Axiom::S | Axiom::NP => {
            cases.extend(suite.iter().map(|g| Case::Single { axiom, game: g.clone() }));
        }
        Axiom::A => {
            let mut rng = ChaCha8Rng::seed_from_u64(AXIOM_SEED);
            for g in suite {
                cases.extend(permutation_cases(g, &mut rng));
            }
        }
        Axiom::T => {
            cases.extend(suite_pairs(suite).into_iter().map(|(u, v)| Case::Transfer { u, v }));
        }
        Axiom::C | Axiom::L => {
            let half = rat(1, 2);
            for g in suite {
                if let Some((up, down)) = rounding_mixture(g)? {
                    cases.push(Case::Combination {
                        axiom,
                        combined: g.clone(),
                        terms: vec![(half.clone(), up.clone()), (half.clone(), down.clone())],
                    });
                    if axiom == Axiom::L {
                        cases.push(Case::Combination { axiom, combined: up, terms: vec![(rational::int(2), g.clone()), (rational::int(-1), down)] });
                    }
                }
            }
            for (u, v) in suite_pairs(suite) {
                for alpha in [rat(1, 2), rat(1, 3), rat(2, 3)] {
                    let terms = vec![(alpha.clone(), u.clone()), (rational::one() - &alpha, v.clone())];
                    if let Ok(combined) = GameCombo::new(terms.clone())?.to_game() {
                        cases.push(Case::Combination { axiom, combined, terms });
                    }
                }
            }
        }
        Axiom::AC => {
            for group in by_shape(suite).into_values() {
                let (l, r) = ac_twins(*group[0].shape())?;
                cases.push(Case::AverageConvexity { left: l, right: r });
            }
            for g in suite {
                let (l, r) = ac_basis_rearrangement(g)?;
                cases.push(Case::AverageConvexity { left: l, right: r });
                let (l, r) = ac_veto_decomposition(g)?;
                cases.push(Case::AverageConvexity { left: l, right: r });
            }
        }
    }
    Ok(cases)
}

/// Checks `axiom` for `f` over `suite`. Games of different shapes are
/// checked in their own groups; pairs never mix shapes.
pub fn check_axiom(axiom: Axiom, f: &dyn PowerIndex, suite: &[JKGame]) -> Result<AxiomReport> {
    run_cases(axiom, f, axiom_cases(axiom, suite)?)
}

/// All nine axioms, in [`Axiom::ALL`] order.
pub fn check_all(f: &dyn PowerIndex, suite: &[JKGame]) -> Result<Vec<AxiomReport>> {
    Axiom::ALL.into_iter().map(|a| check_axiom(a, f, suite)).collect()
}

/// `Σ α_t F(u_t) = Σ β_t F(v_t)` whenever `Σ α_t ũ_t = Σ β_t ṽ_t`. Unequal
/// averages give a [`Verdict::Vacuous`] report.
pub fn check_average_convexity(f: &dyn PowerIndex, left: WeightedGames, right: WeightedGames) -> Result<AxiomReport> {
    run_cases(Axiom::AC, f, vec![Case::AverageConvexity { left, right }])
}

/// Top-point game versus "top unless every input is zero": different games,
/// same average game.
pub fn ac_twins(shape: GameShape) -> Result<(WeightedGames, WeightedGames)> {
    let u = build_point_veto(shape.top(), shape)?;
    let units = (0..shape.n())
        .map(|i| Profile::from_vec((0..shape.n()).map(|h| u32::from(h == i)).collect()))
        .collect();
    let v = build_veto_set(shape, units)?;
    Ok((vec![(rational::one(), u)], vec![(rational::one(), v)]))
}

/// `(1/ϖ)u + Σ_{x_S<0} (−x_S/ϖ) w^S` versus `Σ_{x_S>0} (x_S/ϖ) w^S` from the
/// `w̃^S` coefficients of `ũ`.
pub fn ac_basis_rearrangement(u: &JKGame) -> Result<(WeightedGames, WeightedGames)> {
    let shape = *u.shape();
    let x = ws_basis_decompose(&average_game(u), &shape)?;
    let varpi: Rational = x.nonzero().filter(|(_, c)| c.is_positive()).map(|(_, c)| c).sum();
    if !varpi.is_positive() {
        return Err(GameError::SingularSystem("no positive basis coefficient".into()));
    }
    let mut left = vec![(rational::one() / &varpi, u.clone())];
    let mut right = Vec::new();
    for (s, c) in x.nonzero() {
        let w = build_ws(s, shape)?;
        if c.is_positive() {
            right.push((c / &varpi, w));
        } else {
            left.push((-c / &varpi, w));
        }
    }
    Ok((left, right))
}

/// The convex veto decomposition of `u` versus `u` itself.
pub fn ac_veto_decomposition(u: &JKGame) -> Result<(WeightedGames, WeightedGames)> {
    let combo = convex_veto_decomposition(u)?.to_combo()?;
    Ok((combo.terms().to_vec(), vec![(rational::one(), u.clone())]))
}

/// Equal-average convex systems from all three recipes, on a seeded random
/// game of `shape`. Each pair is re-verified before it is returned.
pub fn ac_witness_generator(shape: GameShape, seed: u64) -> Result<Vec<(WeightedGames, WeightedGames)>> {
    let u = random_monotone_game(shape, seed);
    let pairs = vec![ac_twins(shape)?, ac_basis_rearrangement(&u)?, ac_veto_decomposition(&u)?];
    for (l, r) in &pairs {
        if average_of_combo(&GameCombo::new(l.clone())?) != average_of_combo(&GameCombo::new(r.clone())?) {
            return Err(GameError::PreconditionNotMet);
        }
    }
    Ok(pairs)
}
