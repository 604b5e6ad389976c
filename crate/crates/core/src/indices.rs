//! Power indices for (j,k) simple games.
//!
//! `Φ` is available by roll-call enumeration ([`phi_rollcall`]), by the swing
//! formula over `C(v, T)` ([`phi_swing_formula`]) and as the Shapley value of
//! the average game ([`phi`]); all three agree exactly.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::average::{average_game, c_function, va_game};
use crate::coalition::Coalition;
use crate::decomposition::ws_basis_decompose;
use crate::error::{GameError, Result};
use crate::games::{check_permutation, GameShape, JKGame, Profile};
use crate::rational::{self, Rational};
use crate::tu::{shapley_value, PowerVector};

/// Default budget for roll-call enumeration, in `n!·j^n·n` summand evaluations.
pub const DEFAULT_ROLLCALL_BUDGET: u128 = 1_000_000_000;

/// An ordering of the voters together with their votes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RollCall {
    order: Vec<usize>,
    votes: Profile,
}

impl RollCall {
    /// `order[0]` votes first.
    pub fn new(order: Vec<usize>, votes: Profile, shape: &GameShape) -> Result<Self> {
        check_permutation(&order, shape.n())?;
        let votes = Profile::new(votes.levels().to_vec(), shape)?;
        Ok(RollCall { order, votes })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn votes(&self) -> &Profile {
        &self.votes
    }
}

/// Reachable outcome interval `[v(x_first, 0_rest), v(x_first, top_rest)]`
/// after each prefix of the roll-call; entry `p` is before the `p`-th vote.
fn reachable_intervals(v: &JKGame, order: &[usize], x: &[u32]) -> Vec<(u32, u32)> {
    let shape = v.shape();
    let mut lo = vec![0u32; shape.n()];
    let mut hi = vec![shape.top_level(); shape.n()];
    let mut out = Vec::with_capacity(order.len() + 1);
    out.push((v.value(&lo), v.value(&hi)));
    for &i in order {
        lo[i] = x[i];
        hi[i] = x[i];
        out.push((v.value(&lo), v.value(&hi)));
    }
    out
}

fn check_roll_call(v: &JKGame, rc: &RollCall) -> Result<()> {
    if rc.order.len() != v.n() || rc.votes.levels().iter().any(|&l| l >= v.shape().j()) {
        return Err(GameError::ShapeMismatch("roll-call does not fit the game".into()));
    }
    Ok(())
}

/// Number of outcomes excluded by voter `i`'s vote in the roll-call.
pub fn uncertainty_reduction(v: &JKGame, rc: &RollCall, i: usize) -> Result<u32> {
    check_roll_call(v, rc)?;
    let p = rc.order.iter().position(|&q| q == i).ok_or_else(|| GameError::BadParam(format!("player {i} not in roll-call")))?;
    let iv = reachable_intervals(v, &rc.order, rc.votes.levels());
    let (lo0, hi0) = iv[p];
    let (lo1, hi1) = iv[p + 1];
    Ok((hi0 - lo0) - (hi1 - lo1))
}

/// Number of `h ∈ {1, …, k−1}` for which voter `i` is the `h`-pivot: before
/// the vote both `≥ h` and `≤ h−1` were reachable, afterwards only one is.
pub fn h_pivot_count(v: &JKGame, rc: &RollCall, i: usize) -> Result<u32> {
    check_roll_call(v, rc)?;
    let p = rc.order.iter().position(|&q| q == i).ok_or_else(|| GameError::BadParam(format!("player {i} not in roll-call")))?;
    let iv = reachable_intervals(v, &rc.order, rc.votes.levels());
    Ok(count_h_pivots(iv[p], iv[p + 1], v.shape().k()))
}

fn count_h_pivots(before: (u32, u32), after: (u32, u32), k: u32) -> u32 {
    (1..k)
        .filter(|&h| {
            let open_before = before.0 < h && before.1 >= h;
            let decided_after = after.0 >= h || after.1 < h;
            open_before && decided_after
        })
        .count() as u32
}

/// How [`phi_rollcall_with`] attributes each roll-call.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotCounting {
    /// Length drop of the reachable-outcome interval.
    UncertaintyReduction,
    /// Literal count of `h`-pivot events, one per `h`.
    HPivot,
}

pub fn phi_rollcall(v: &JKGame) -> Result<PowerVector> {
    phi_rollcall_with(v, PivotCounting::UncertaintyReduction, DEFAULT_ROLLCALL_BUDGET)
}

/// `Φ` by enumerating every roll-call `(π, x) ∈ S_n × J^n`.
pub fn phi_rollcall_with(v: &JKGame, mode: PivotCounting, budget: u128) -> Result<PowerVector> {
    let shape = *v.shape();
    let n = shape.n();
    let n_fact = (1..=n as u128).product::<u128>();
    let needed = n_fact.saturating_mul(shape.cells() as u128).saturating_mul(n as u128);
    if needed > budget {
        return Err(GameError::SizeCapExceeded { what: "roll-call summands", needed, cap: budget });
    }
    let table = v.table();
    let mut strides = vec![1usize; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape.j() as usize;
    }
    let top_index = shape.cells() - 1;
    let perms = permutations_lex(n);
    let counts = perms
        .par_iter()
        .map(|order| {
            let mut acc = vec![0u64; n];
            shape.for_each_profile(|_, x| {
                let (mut lo_idx, mut hi_idx) = (0usize, top_index);
                let mut before = (table[lo_idx], table[hi_idx]);
                for &i in order {
                    lo_idx += x[i] as usize * strides[i];
                    hi_idx -= (shape.top_level() - x[i]) as usize * strides[i];
                    let after = (table[lo_idx], table[hi_idx]);
                    acc[i] += match mode {
                        PivotCounting::UncertaintyReduction => ((before.1 - before.0) - (after.1 - after.0)) as u64,
                        PivotCounting::HPivot => count_h_pivots(before, after, shape.k()) as u64,
                    };
                    before = after;
                }
            });
            acc
        })
        .reduce(|| vec![0u64; n], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect());
    let denom = BigInt::from(n_fact) * BigInt::from(shape.cells()) * BigInt::from(shape.top_output());
    Ok(PowerVector(counts.into_iter().map(|c| Rational::new(BigInt::from(c), denom.clone())).collect()))
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations_lex(n: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..n).collect();
    let mut out = vec![cur.clone()];
    while let Some(p) = (1..n).rev().find(|&p| cur[p - 1] < cur[p]) {
        let q = (p..n).rev().find(|&q| cur[q] > cur[p - 1]).expect("successor exists");
        cur.swap(p - 1, q);
        cur[p..].reverse();
        out.push(cur.clone());
    }
    out
}

/// `Φ_i = Σ_{S∋i} (s−1)!(n−s)!/n! · [C(v,S) − C(v,S\{i})]`, evaluated
/// literally from [`c_function`].
pub fn phi_swing_formula(v: &JKGame) -> Result<PowerVector> {
    let n = v.n();
    let c: Vec<Rational> = Coalition::all(n).map(|t| c_function(v, t)).collect::<Result<_>>()?;
    let w = rational::shapley_weights(n);
    let entries = (0..n)
        .map(|i| {
            Coalition::all(n)
                .filter(|s| s.contains(i))
                .map(|s| &w[s.len()] * (&c[s.index()] - &c[s.without(i).index()]))
                .sum()
        })
        .collect();
    Ok(PowerVector(entries))
}

/// `Φ(v)` as the Shapley value of `ṽ`.
pub fn phi(v: &JKGame) -> Result<PowerVector> {
    shapley_value(&average_game(v))
}

/// `Φ^a(v)`: the Shapley value of `v_a`. Axiom guarantees hold for constant `a`.
pub fn phi_parametric(v: &JKGame, a: &Profile) -> Result<PowerVector> {
    shapley_value(&va_game(v, a)?)
}

/// Classical Shapley-Shubik index of a (2,2) game by swing enumeration.
pub fn ssi_simple(v: &JKGame) -> Result<PowerVector> {
    let shape = v.shape();
    if shape.j() != 2 || shape.k() != 2 {
        return Err(GameError::ShapeMismatch(format!("ssi needs a (2,2) game, got ({}, {})", shape.j(), shape.k())));
    }
    let n = shape.n();
    let w = rational::shapley_weights(n);
    let win = |s: Coalition| {
        let x: Vec<u32> = (0..n).map(|i| u32::from(s.contains(i))).collect();
        v.value(&x)
    };
    let entries = (0..n)
        .map(|i| {
            Coalition::all(n)
                .filter(|s| s.contains(i) && win(*s) == 1 && win(s.without(i)) == 0)
                .map(|s| w[s.len()].clone())
                .sum()
        })
        .collect();
    Ok(PowerVector(entries))
}

/// A power index: a map from games to payoff vectors.
pub trait PowerIndex: Sync {
    fn name(&self) -> String;
    fn compute(&self, v: &JKGame) -> Result<PowerVector>;
}

/// The level vector for a parametric index, resolved per shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamProfile {
    Explicit(Vec<u32>),
    /// `a_i = j − 1 − d` for every player.
    BelowTop(u32),
    /// `a_i = level` for every player.
    Uniform(u32),
}

impl ParamProfile {
    pub fn resolve(&self, shape: &GameShape) -> Result<Profile> {
        match self {
            ParamProfile::Explicit(levels) => Profile::new(levels.clone(), shape),
            ParamProfile::BelowTop(d) => {
                let level = shape.top_level().checked_sub(*d).ok_or_else(|| GameError::BadParam(format!("j − 1 − {d} < 0 for j = {}", shape.j())))?;
                Profile::uniform(level, shape)
            }
            ParamProfile::Uniform(level) => Profile::uniform(*level, shape),
        }
    }
}

/// `Φ` and the indices used to show the axioms independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IndexKind {
    Phi,
    /// `λ·Φ`.
    Scaled(Rational),
    /// `λ·Φ + (1 − λ)·ED` with ED the equal division.
    BlendEqualDivision(Rational),
    /// `Φ^a`.
    Parametric(ParamProfile),
    /// `F(u) = Σ_S x_S^u F(w^S)` from the `w̃^S`-basis coefficients of `ũ`,
    /// with `F(w^N)` tilted towards `favored`.
    BasisWeighted { favored: usize },
}

/// Validates parameters and returns the index.
pub fn counterexample_index(kind: IndexKind) -> Result<IndexKind> {
    match &kind {
        IndexKind::BlendEqualDivision(l) if *l < rational::zero() || *l > rational::one() => {
            Err(GameError::BadParam(format!("blend weight {l} outside [0, 1]")))
        }
        IndexKind::Scaled(l) if l.is_zero() => Err(GameError::BadParam("scale must be nonzero".into())),
        _ => Ok(kind),
    }
}

/// `F(w^S)` for the basis-weighted index.
pub fn basis_weighted_base(s: Coalition, n: usize, favored: usize) -> PowerVector {
    if s != Coalition::grand(n) {
        return PowerVector::uniform_on(s, n);
    }
    PowerVector((0..n).map(|i| rational::rat(if i == favored { 2 } else { 1 }, n as i64 + 1)).collect())
}

impl PowerIndex for IndexKind {
    fn name(&self) -> String {
        match self {
            IndexKind::Phi => "phi".into(),
            IndexKind::Scaled(l) => format!("scaled({})", rational::format_rational(l)),
            IndexKind::BlendEqualDivision(l) => format!("blend-ed({})", rational::format_rational(l)),
            IndexKind::Parametric(p) => format!("parametric({p:?})"),
            IndexKind::BasisWeighted { favored } => format!("basis-weighted({})", favored + 1),
        }
    }

    fn compute(&self, v: &JKGame) -> Result<PowerVector> {
        let n = v.n();
        match self {
            IndexKind::Phi => phi(v),
            IndexKind::Scaled(l) => Ok(l * &phi(v)?),
            IndexKind::BlendEqualDivision(l) => {
                let ed = PowerVector::uniform_on(Coalition::grand(n), n);
                Ok(&(l * &phi(v)?) + &(&(rational::one() - l) * &ed))
            }
            IndexKind::Parametric(p) => phi_parametric(v, &p.resolve(v.shape())?),
            IndexKind::BasisWeighted { favored } => {
                if *favored >= n {
                    return Err(GameError::BadParam(format!("favored player {} > n = {n}", favored + 1)));
                }
                let x = ws_basis_decompose(&average_game(v), v.shape())?;
                let mut out = PowerVector::zeros(n);
                for (s, coeff) in x.nonzero() {
                    out = &out + &(coeff * &basis_weighted_base(s, n, *favored));
                }
                Ok(out)
            }
        }
    }
}

/// Wraps a closure as a [`PowerIndex`].
pub struct FnIndex<F> {
    name: String,
    f: F,
}

impl<F> FnIndex<F>
where
    F: Fn(&JKGame) -> Result<PowerVector> + Sync,
{
    pub fn new(name: impl Into<String>, f: F) -> Self {
        FnIndex { name: name.into(), f }
    }
}

impl<F> PowerIndex for FnIndex<F>
where
    F: Fn(&JKGame) -> Result<PowerVector> + Sync,
{
    fn name(&self) -> String {
        self.name.clone()
    }

    fn compute(&self, v: &JKGame) -> Result<PowerVector> {
        (self.f)(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{example1, exhaustive_grid, random_suite, ub_game, weighted_4_3211, RANDOM_SUITE_SEED};
    use crate::games::{build_table_game, build_ws, profile};
    use crate::rational::rat;
    use crate::tu::TUGame;
    use num_traits::One;

    /// Classical pivot count over all orderings of a (2,2) game.
    fn ordering_pivots(v: &JKGame) -> PowerVector {
        let n = v.n();
        let perms = permutations_lex(n);
        let mut counts = vec![0i64; n];
        for order in &perms {
            let mut x = vec![0u32; n];
            for &i in order {
                let before = v.value(&x);
                x[i] = 1;
                if before == 0 && v.value(&x) == 1 {
                    counts[i] += 1;
                    break;
                }
            }
        }
        PowerVector(counts.into_iter().map(|c| rat(c, perms.len() as i64)).collect())
    }

    #[test]
    fn example1_on_every_path() {
        let v = example1();
        let expected = PowerVector::from_ratios(&[(5, 12), (7, 12)]);
        assert_eq!(phi_rollcall(&v).unwrap(), expected);
        assert_eq!(phi_rollcall_with(&v, PivotCounting::HPivot, DEFAULT_ROLLCALL_BUDGET).unwrap(), expected);
        assert_eq!(phi_swing_formula(&v).unwrap(), expected);
        assert_eq!(phi(&v).unwrap(), expected);
    }

    #[test]
    fn example1_roll_call() {
        let v = example1();
        let rc = RollCall::new(vec![1, 0], profile(&[2, 1], v.shape()), v.shape()).unwrap();
        assert_eq!(uncertainty_reduction(&v, &rc, 1).unwrap(), 1);
        assert_eq!(uncertainty_reduction(&v, &rc, 0).unwrap(), 1);
        assert_eq!(h_pivot_count(&v, &rc, 1).unwrap(), 1);
        assert_eq!(h_pivot_count(&v, &rc, 0).unwrap(), 1);
        assert!(RollCall::new(vec![1, 1], profile(&[2, 1], v.shape()), v.shape()).is_err());
    }

    #[test]
    fn roll_call_reductions_sum_to_range() {
        for v in random_suite(15, 3, 4, 21) {
            let s = *v.shape();
            for order in permutations_lex(3) {
                s.for_each_profile(|_, x| {
                    let rc = RollCall::new(order.clone(), profile(x, &s), &s).unwrap();
                    let total: u32 = (0..3).map(|i| uncertainty_reduction(&v, &rc, i).unwrap()).sum();
                    assert_eq!(total, s.top_output());
                    for i in v.null_players() {
                        assert_eq!(uncertainty_reduction(&v, &rc, i).unwrap(), 0);
                    }
                });
            }
        }
    }

    #[test]
    fn h_pivots_match_reductions_on_the_grid() {
        for v in exhaustive_grid() {
            let s = *v.shape();
            for order in permutations_lex(2) {
                s.for_each_profile(|_, x| {
                    let rc = RollCall::new(order.clone(), profile(x, &s), &s).unwrap();
                    for i in 0..2 {
                        assert_eq!(h_pivot_count(&v, &rc, i).unwrap(), uncertainty_reduction(&v, &rc, i).unwrap());
                    }
                });
            }
        }
    }

    #[test]
    fn ub_values() {
        for j in [3u32, 4, 5] {
            let s = GameShape::new(3, j, 2).unwrap();
            let u = ub_game(s).unwrap();
            let jj = j as i64;
            assert_eq!(phi_rollcall(&u).unwrap(), PowerVector::from_ratios(&[(1, jj), (jj - 1, jj), (0, 1)]));
            assert_eq!(phi(&u).unwrap(), PowerVector::from_ratios(&[(1, jj), (jj - 1, jj), (0, 1)]));
            let a = Profile::uniform(j - 2, &s).unwrap();
            assert_eq!(phi_parametric(&u, &a).unwrap(), PowerVector::from_ratios(&[(0, 1), (1, 1), (0, 1)]));
        }
    }

    #[test]
    fn weighted_game_classical_value() {
        let v = weighted_4_3211();
        let expected = PowerVector::from_ratios(&[(1, 2), (1, 6), (1, 6), (1, 6)]);
        assert_eq!(ordering_pivots(&v), expected);
        assert_eq!(ssi_simple(&v).unwrap(), expected);
        assert_eq!(phi(&v.to_table_game()).unwrap(), expected);
        assert_eq!(phi_rollcall(&v).unwrap(), expected);
        assert!(matches!(ssi_simple(&example1()), Err(GameError::ShapeMismatch(_))));
    }

    #[test]
    fn ssi_trivial_games() {
        let s = GameShape::new(3, 2, 2).unwrap();
        let t = Coalition::from_players([0, 2]);
        assert_eq!(ssi_simple(&build_ws(t, s).unwrap()).unwrap(), PowerVector::uniform_on(t, 3));
        let dictator = build_ws(Coalition::singleton(0), s).unwrap();
        assert_eq!(ssi_simple(&dictator).unwrap(), PowerVector::from_ratios(&[(1, 1), (0, 1), (0, 1)]));
    }

    #[test]
    fn three_paths_agree_on_the_standard_suite() {
        let mut suite = exhaustive_grid();
        suite.extend(random_suite(200, 3, 4, RANDOM_SUITE_SEED));
        for v in &suite {
            let p = phi(v).unwrap();
            assert_eq!(phi_rollcall(v).unwrap(), p);
            assert_eq!(phi_swing_formula(v).unwrap(), p);
            assert_eq!(shapley_value(&average_game(v)).unwrap(), p);
            assert!(p.sum().is_one());
            assert!(p.is_nonneg());
        }
    }

    #[test]
    fn parametric_on_ws_and_binary_games() {
        let s = GameShape::new(3, 3, 2).unwrap();
        for t in Coalition::all(3).filter(|t| !t.is_empty()) {
            for level in 0..3 {
                let a = Profile::uniform(level, &s).unwrap();
                assert_eq!(phi_parametric(&build_ws(t, s).unwrap(), &a).unwrap(), PowerVector::uniform_on(t, 3));
            }
        }
        for v in random_suite(40, 3, 2, 17) {
            let s = *v.shape();
            let p = phi(&v).unwrap();
            assert_eq!(phi_parametric(&v, &s.zeros()).unwrap(), p);
            assert_eq!(phi_parametric(&v, &s.top()).unwrap(), p);
        }
    }

    #[test]
    fn counterexample_indices() {
        let s2 = GameShape::new(2, 3, 2).unwrap();
        let w1 = build_ws(Coalition::singleton(0), s2).unwrap();
        let blend = counterexample_index(IndexKind::BlendEqualDivision(rat(1, 2))).unwrap();
        assert_eq!(blend.compute(&w1).unwrap(), PowerVector::from_ratios(&[(3, 4), (1, 4)]));
        let wn = build_ws(Coalition::grand(2), s2).unwrap();
        let bw = counterexample_index(IndexKind::BasisWeighted { favored: 0 }).unwrap();
        assert_eq!(bw.compute(&wn).unwrap(), PowerVector::from_ratios(&[(2, 3), (1, 3)]));
        let scaled = counterexample_index(IndexKind::Scaled(rat(2, 1))).unwrap();
        assert_eq!(scaled.compute(&example1()).unwrap().sum(), rat(2, 1));
        assert!(counterexample_index(IndexKind::BlendEqualDivision(rat(3, 2))).is_err());
        assert!(IndexKind::BasisWeighted { favored: 5 }.compute(&wn).is_err());
        assert!(IndexKind::Parametric(ParamProfile::BelowTop(2)).compute(&build_ws(Coalition::grand(2), GameShape::new(2, 2, 2).unwrap()).unwrap()).is_err());
    }

    #[test]
    fn rollcall_budget() {
        let s = GameShape::new(3, 3, 2).unwrap();
        let v = build_ws(Coalition::grand(3), s).unwrap();
        assert!(matches!(phi_rollcall_with(&v, PivotCounting::UncertaintyReduction, 10), Err(GameError::SizeCapExceeded { .. })));
    }

    #[test]
    fn unanimity_table_agrees_with_tu_shapley() {
        let s = GameShape::new(3, 2, 2).unwrap();
        let t = Coalition::from_players([1, 2]);
        let table = (0..8u32).map(|m| u32::from(t.is_subset_of(Coalition(m.reverse_bits() >> 29)))).collect();
        let v = build_table_game(s, table).unwrap();
        assert_eq!(phi(&v).unwrap(), shapley_value(&TUGame::unanimity(t, 3).unwrap()).unwrap());
    }
}
