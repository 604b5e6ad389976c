//! Interval simple games `[0,1]^n → [0,1]`: exact work on finite step
//! representations, Monte Carlo for arbitrary monotone evaluators.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::axioms::{Axiom, Outcome, Verdict};
use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::games::{build_table_game, GameShape, JKGame};
use crate::indices::permutations_lex;
use crate::rational::{self, rat, Rational};
use crate::tu::{shapley_value, unanimity_decompose, PowerVector, TUGame};

/// Most steps a [`StepIntervalGame`] may carry.
pub const MAX_STEPS: usize = 30;
/// Most players for exact interval work (`2^n` coalitions).
pub const INTERVAL_MAX_PLAYERS: usize = 16;
/// Largest `n` for the exact permutation sum of [`psi_parametric`].
pub const PARAMETRIC_MAX_PLAYERS: usize = 10;
/// Samples processed per parallel chunk in Monte Carlo.
const MC_CHUNK: u64 = 4096;

/// `v(x) = level` on `{x : threshold ≤ x}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub threshold: Vec<Rational>,
    pub level: Rational,
}

/// `v(x) = max{level : threshold ≤ x}` (0 if no step applies).
///
/// A step with the zero threshold is allowed; `v(𝟎)` is then still pinned to
/// 0, so "1 iff x ≠ 𝟎" is representable.
#[derive(Clone, PartialEq, Eq)]
pub struct StepIntervalGame {
    n: usize,
    steps: Vec<Step>,
}

impl fmt::Debug for StepIntervalGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let steps: Vec<String> = self
            .steps
            .iter()
            .map(|s| {
                let t: Vec<String> = s.threshold.iter().map(rational::format_rational).collect();
                format!("({})→{}", t.join(","), rational::format_rational(&s.level))
            })
            .collect();
        write!(f, "StepIntervalGame[n={}; {}]", self.n, steps.join("; "))
    }
}

fn in_unit(r: &Rational) -> bool {
    !r.is_negative() && *r <= Rational::one()
}

impl StepIntervalGame {
    pub fn new(n: usize, steps: Vec<Step>) -> Result<Self> {
        if n == 0 || n > INTERVAL_MAX_PLAYERS {
            return Err(GameError::InvalidIntervalGame(format!("n = {n} outside 1..={INTERVAL_MAX_PLAYERS}")));
        }
        if steps.len() > MAX_STEPS {
            return Err(GameError::SizeCapExceeded { what: "interval steps", needed: steps.len() as u128, cap: MAX_STEPS as u128 });
        }
        for s in &steps {
            if s.threshold.len() != n {
                return Err(GameError::InvalidIntervalGame(format!("threshold of length {} for n = {n}", s.threshold.len())));
            }
            if !s.threshold.iter().all(in_unit) {
                return Err(GameError::InvalidIntervalGame("threshold coordinate outside [0, 1]".into()));
            }
            if !in_unit(&s.level) {
                return Err(GameError::InvalidIntervalGame(format!("level {} outside [0, 1]", s.level)));
            }
        }
        if !steps.iter().any(|s| s.level.is_one()) {
            return Err(GameError::InvalidIntervalGame("no step reaches level 1, so v(1) < 1".into()));
        }
        let mut steps: Vec<Step> = steps.into_iter().filter(|s| s.level.is_positive()).collect();
        steps.sort_by(|a, b| (&a.threshold, &a.level).cmp(&(&b.threshold, &b.level)));
        steps.dedup();
        Ok(StepIntervalGame { n, steps })
    }

    /// `C^S`: 1 iff every member of `S` votes 1.
    pub fn unanimity(s: Coalition, n: usize) -> Result<Self> {
        if s.is_empty() || !s.is_subset_of(Coalition::grand(n)) {
            return Err(GameError::BadParam(format!("C^S needs a nonempty S inside N, got {s:?}")));
        }
        let threshold = (0..n).map(|i| if s.contains(i) { rational::one() } else { rational::zero() }).collect();
        StepIntervalGame::new(n, vec![Step { threshold, level: rational::one() }])
    }

    /// `u^a`: 1 iff `a ≤ x`.
    pub fn point_veto(a: Vec<Rational>) -> Result<Self> {
        let n = a.len();
        StepIntervalGame::new(n, vec![Step { threshold: a, level: rational::one() }])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// True if some step sits at the zero profile (and `v(𝟎)` is pinned).
    pub fn pinned_zero(&self) -> bool {
        self.steps.iter().any(|s| s.threshold.iter().all(Zero::is_zero))
    }

    pub fn value(&self, x: &[Rational]) -> Rational {
        if x.iter().all(Zero::is_zero) {
            return Rational::zero();
        }
        self.steps
            .iter()
            .filter(|s| s.threshold.iter().zip(x).all(|(a, b)| a <= b))
            .map(|s| s.level.clone())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Distinct positive levels, increasing.
    pub fn levels(&self) -> Vec<Rational> {
        let mut l: Vec<Rational> = self.steps.iter().map(|s| s.level.clone()).collect();
        l.sort();
        l.dedup();
        l
    }

    /// Minimal thresholds of the upper set `{v ≥ level}`.
    pub fn level_antichain(&self, level: &Rational) -> Vec<Vec<Rational>> {
        let mut pts: Vec<Vec<Rational>> = self.steps.iter().filter(|s| &s.level >= level).map(|s| s.threshold.clone()).collect();
        pts.sort();
        pts.dedup();
        let le = |a: &Vec<Rational>, b: &Vec<Rational>| a.iter().zip(b).all(|(x, y)| x <= y);
        let keep: Vec<bool> = pts.iter().map(|a| !pts.iter().any(|b| b != a && le(b, a))).collect();
        pts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect()
    }

    /// Exact: every upper level set is a cylinder in coordinate `i`. A pinned
    /// zero makes every player matter at the origin.
    pub fn is_null_player(&self, i: usize) -> bool {
        if self.pinned_zero() {
            return false;
        }
        self.levels().iter().all(|l| self.level_antichain(l).iter().all(|a| a[i].is_zero()))
    }

    /// Exact: every upper level set is invariant under swapping `i` and `h`.
    pub fn are_equivalent(&self, i: usize, h: usize) -> bool {
        self.levels().iter().all(|l| {
            let mut anti = self.level_antichain(l);
            let mut swapped: Vec<Vec<Rational>> = anti
                .iter()
                .map(|a| {
                    let mut b = a.clone();
                    b.swap(i, h);
                    b
                })
                .collect();
            anti.sort();
            swapped.sort();
            anti == swapped
        })
    }

    pub fn null_players(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.is_null_player(i)).collect()
    }

    pub fn equivalent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n).flat_map(|i| (i + 1..n).map(move |h| (i, h))).filter(|&(i, h)| self.are_equivalent(i, h)).collect()
    }

    /// Floating-point evaluator for the Monte Carlo path.
    pub fn to_black_box(&self) -> BlackBoxIntervalGame {
        let steps: Vec<(Vec<f64>, f64)> =
            self.steps.iter().map(|s| (s.threshold.iter().map(rational::to_f64).collect(), rational::to_f64(&s.level))).collect();
        let n = self.n;
        BlackBoxIntervalGame {
            n,
            eval: Arc::new(move |x: &[f64]| {
                if x.iter().all(|&c| c == 0.0) {
                    return 0.0;
                }
                steps
                    .iter()
                    .filter(|(t, _)| t.iter().zip(x).all(|(a, b)| a <= b))
                    .map(|(_, l)| *l)
                    .fold(0.0, f64::max)
            }),
        }
    }

    /// The `(j,k)` game `x ↦ (k−1)·v(x/(j−1))`. Thresholds must lie on the
    /// grid `{0, 1/(j−1), …, 1}` and levels on `{0, 1/(k−1), …, 1}`.
    pub fn discretize(&self, j: u32, k: u32) -> Result<JKGame> {
        let shape = GameShape::new(self.n, j, k)?;
        let jm1 = Rational::from_integer(BigInt::from(j - 1));
        let km1 = Rational::from_integer(BigInt::from(k - 1));
        for s in &self.steps {
            if !s.threshold.iter().all(|a| (a * &jm1).is_integer()) {
                return Err(GameError::BadParam(format!("threshold off the grid of step 1/{}", j - 1)));
            }
            if !(&s.level * &km1).is_integer() {
                return Err(GameError::BadParam(format!("level off the grid of step 1/{}", k - 1)));
            }
        }
        let mut values = Vec::with_capacity(shape.cells());
        shape.for_each_profile(|_, x| {
            let point: Vec<Rational> = x.iter().map(|&l| Rational::from_integer(l.into()) / &jm1).collect();
            let y = self.value(&point) * &km1;
            values.push(u32::try_from(y.to_integer()).expect("level in range"));
        });
        build_table_game(shape, values)
    }
}

/// Volume of `{y ∈ [0,1]^m : ∃ a ∈ pts, a ≤ y}` by sweeping one coordinate at a
/// time.
fn union_volume(pts: &[Vec<Rational>]) -> Rational {
    if pts.is_empty() {
        return Rational::zero();
    }
    if pts[0].is_empty() {
        return Rational::one();
    }
    let mut cuts: Vec<&Rational> = pts.iter().map(|p| &p[0]).collect();
    cuts.sort();
    cuts.dedup();
    let mut total = Rational::zero();
    for (q, &lo) in cuts.iter().enumerate() {
        let hi = cuts.get(q + 1).map(|r| (*r).clone()).unwrap_or_else(Rational::one);
        let width = hi - lo;
        if width.is_zero() {
            continue;
        }
        let active: Vec<Vec<Rational>> = pts.iter().filter(|p| &p[0] <= lo).map(|p| p[1..].to_vec()).collect();
        total += width * union_volume(&active);
    }
    total
}

/// Inclusion–exclusion form of [`union_volume`]; exponential, kept as an
/// oracle.
pub fn union_volume_inclusion_exclusion(pts: &[Vec<Rational>]) -> Rational {
    let m = pts.len();
    assert!(m <= 20, "inclusion-exclusion oracle is exponential");
    let mut total = Rational::zero();
    for mask in 1u32..(1 << m) {
        let chosen: Vec<&Vec<Rational>> = (0..m).filter(|b| mask >> b & 1 == 1).map(|b| &pts[b]).collect();
        let dims = chosen[0].len();
        let vol: Rational = (0..dims)
            .map(|d| Rational::one() - chosen.iter().map(|p| p[d].clone()).max().expect("nonempty"))
            .product();
        if mask.count_ones() % 2 == 1 {
            total += vol;
        } else {
            total -= vol;
        }
    }
    total
}

fn project(a: &[Rational], s: Coalition) -> Vec<Rational> {
    a.iter().enumerate().filter(|(i, _)| !s.contains(*i)).map(|(_, r)| r.clone()).collect()
}

/// `v̂(S) = ∫ v(𝟏_S, x_{−S}) − v(𝟎_S, x_{−S}) dx`, exactly, by layer cake over
/// the level sets.
pub fn interval_average_closed(v: &StepIntervalGame) -> Result<TUGame> {
    let n = v.n();
    let levels = v.levels();
    let layers: Vec<(Rational, Vec<Vec<Rational>>)> = levels
        .iter()
        .scan(Rational::zero(), |prev, l| {
            let d = l - &*prev;
            *prev = l.clone();
            Some((d, v.level_antichain(l)))
        })
        .collect();
    let grand = Coalition::grand(n);
    let values: Vec<Rational> = Coalition::all(n)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|s| {
            if s.is_empty() {
                return Rational::zero();
            }
            if s == grand {
                return v.value(&vec![rational::one(); n]) - v.value(&vec![rational::zero(); n]);
            }
            layers
                .iter()
                .map(|(d, anti)| {
                    let up: Vec<Vec<Rational>> = anti.iter().map(|a| project(a, s)).collect();
                    let down: Vec<Vec<Rational>> =
                        anti.iter().filter(|a| s.players().all(|i| a[i].is_zero())).map(|a| project(a, s)).collect();
                    d * (union_volume(&up) - union_volume(&down))
                })
                .sum()
        })
        .collect();
    TUGame::new(n, values)
}

/// `Ψ(v)`: the Shapley value of `v̂`.
pub fn psi(v: &StepIntervalGame) -> Result<PowerVector> {
    shapley_value(&interval_average_closed(v)?)
}

/// `Ψ^a` for `a = (α, …, α)` by the literal sum over all `n!` orderings:
/// every player is charged the drop of the swing `v(a_P, 𝟏) − v(a_P, 𝟎)` when
/// it joins its predecessors `P`.
pub fn psi_parametric(v: &StepIntervalGame, alpha: &Rational) -> Result<PowerVector> {
    let n = v.n();
    if !in_unit(alpha) {
        return Err(GameError::BadParam(format!("alpha = {alpha} outside [0, 1]")));
    }
    if n > PARAMETRIC_MAX_PLAYERS {
        return Err(GameError::SizeCapExceeded { what: "parametric players", needed: n as u128, cap: PARAMETRIC_MAX_PLAYERS as u128 });
    }
    // The swing only depends on the predecessor set, so tabulate it once.
    let swing: Vec<Rational> = Coalition::all(n).map(|p| parametric_swing(v, alpha, p)).collect();
    let perms = permutations_lex(n);
    let count = Rational::from_integer(BigInt::from(perms.len()));
    let mut out = vec![Rational::zero(); n];
    for perm in perms {
        let mut pred = Coalition::EMPTY;
        for &i in &perm {
            let next = pred.with(i);
            out[i] += &swing[pred.index()] - &swing[next.index()];
            pred = next;
        }
    }
    Ok(PowerVector(out.into_iter().map(|x| x / &count).collect()))
}

/// `v(a_P, 𝟏_{N∖P}) − v(a_P, 𝟎_{N∖P})`.
fn parametric_swing(v: &StepIntervalGame, alpha: &Rational, p: Coalition) -> Rational {
    let n = v.n();
    let hi: Vec<Rational> = (0..n).map(|i| if p.contains(i) { alpha.clone() } else { rational::one() }).collect();
    let lo: Vec<Rational> = (0..n).map(|i| if p.contains(i) { alpha.clone() } else { rational::zero() }).collect();
    v.value(&hi) - v.value(&lo)
}

/// `Ψ^a` as the Shapley value of `S ↦ v(𝟏_S, a_{−S}) − v(𝟎_S, a_{−S})`.
pub fn psi_parametric_shapley(v: &StepIntervalGame, alpha: &Rational) -> Result<PowerVector> {
    let n = v.n();
    let full = Coalition::grand(n);
    let g = TUGame::from_fn(n, |s| parametric_swing(v, alpha, full.difference(s)))?;
    shapley_value(&g)
}

/// A monotone evaluator `[0,1]^n → [0,1]` supplied by the caller.
#[derive(Clone)]
pub struct BlackBoxIntervalGame {
    n: usize,
    eval: Evaluator,
}

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

impl fmt::Debug for BlackBoxIntervalGame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BlackBoxIntervalGame[n={}]", self.n)
    }
}

/// Comparable pairs drawn by [`BlackBoxIntervalGame::new`].
pub const SPOT_CHECK_PAIRS: usize = 64;

impl BlackBoxIntervalGame {
    /// Wraps `eval` after checking `v(𝟎) = 0`, `v(𝟏) = 1` and monotonicity on
    /// seeded comparable pairs.
    pub fn new(n: usize, eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let g = BlackBoxIntervalGame { n, eval: Arc::new(eval) };
        g.spot_check()?;
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        (self.eval)(x)
    }

    fn spot_check(&self) -> Result<()> {
        let n = self.n;
        if n == 0 || n > INTERVAL_MAX_PLAYERS {
            return Err(GameError::InvalidIntervalGame(format!("n = {n} outside 1..={INTERVAL_MAX_PLAYERS}")));
        }
        let lo = self.eval(&vec![0.0; n]);
        let hi = self.eval(&vec![1.0; n]);
        if lo != 0.0 || hi != 1.0 {
            return Err(GameError::MonotonicitySpotCheckFailed(format!("v(0) = {lo}, v(1) = {hi}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x5107);
        for _ in 0..SPOT_CHECK_PAIRS {
            let x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
            let y: Vec<f64> = x.iter().map(|&c| c + (1.0 - c) * rng.random::<f64>()).collect();
            let (vx, vy) = (self.eval(&x), self.eval(&y));
            if !(0.0..=1.0).contains(&vx) || vx > vy {
                return Err(GameError::MonotonicitySpotCheckFailed(format!("v({x:?}) = {vx} but v({y:?}) = {vy}")));
            }
        }
        Ok(())
    }
}

/// A Monte Carlo estimate with per-component standard errors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MCEstimate {
    pub value: Vec<f64>,
    pub std_error: Vec<f64>,
    pub samples: u64,
    pub seed: u64,
}

/// Uniform point for sample `index`: its own ChaCha stream, so the draw does
/// not depend on how samples are scheduled.
fn sample_point(seed: u64, index: u64, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    (0..n).map(|_| rng.random::<f64>()).collect()
}

/// Per-sample Shapley estimate from the swings `d_T(x)` of every coalition.
fn sample_shapley(v: &BlackBoxIntervalGame, x: &[f64], weights: &[f64], buf: &mut [f64], d: &mut [f64]) -> Vec<f64> {
    let n = v.n();
    for (t, dt) in d.iter_mut().enumerate().skip(1) {
        for (i, (b, &xi)) in buf.iter_mut().zip(x).enumerate() {
            *b = if t >> i & 1 == 1 { 1.0 } else { xi };
        }
        let up = v.eval(buf);
        for (i, b) in buf.iter_mut().enumerate() {
            if t >> i & 1 == 1 {
                *b = 0.0;
            }
        }
        *dt = up - v.eval(buf);
    }
    (0..n)
        .map(|i| {
            let bit = 1usize << i;
            (0..d.len()).filter(|s| s & bit != 0).map(|s| weights[s.count_ones() as usize] * (d[s] - d[s ^ bit])).sum()
        })
        .collect()
}

/// Unbiased estimate of `Ψ` from `samples` uniform points shared across all
/// coalitions. Chunks are reduced in a fixed order, so the result only
/// depends on `(samples, seed)`.
pub fn psi_monte_carlo(v: &BlackBoxIntervalGame, samples: u64, seed: u64) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(GameError::BadParam("samples must be at least 1".into()));
    }
    let n = v.n();
    let weights: Vec<f64> = rational::shapley_weights(n).iter().map(rational::to_f64).collect();
    let chunks = samples.div_ceil(MC_CHUNK);
    let partial: Vec<(Vec<f64>, Vec<f64>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut sum = vec![0.0; n];
            let mut sq = vec![0.0; n];
            let mut buf = vec![0.0; n];
            let mut d = vec![0.0; 1 << n];
            for s in c * MC_CHUNK..((c + 1) * MC_CHUNK).min(samples) {
                let x = sample_point(seed, s, n);
                let phi = sample_shapley(v, &x, &weights, &mut buf, &mut d);
                for i in 0..n {
                    sum[i] += phi[i];
                    sq[i] += phi[i] * phi[i];
                }
            }
            (sum, sq)
        })
        .collect();
    let mut sum = vec![0.0; n];
    let mut sq = vec![0.0; n];
    for (s, q) in partial {
        for i in 0..n {
            sum[i] += s[i];
            sq[i] += q[i];
        }
    }
    let m = samples as f64;
    let value: Vec<f64> = sum.iter().map(|s| s / m).collect();
    let std_error = (0..n)
        .map(|i| {
            if samples < 2 {
                return f64::INFINITY;
            }
            let var = ((sq[i] - m * value[i] * value[i]) / (m - 1.0)).max(0.0);
            (var / m).sqrt()
        })
        .collect();
    Ok(MCEstimate { value, std_error, samples, seed })
}

/// `Ψ^a` from `samples` uniformly drawn orderings; for any `n`.
pub fn psi_parametric_sampled(v: &BlackBoxIntervalGame, alpha: f64, samples: u64, seed: u64) -> Result<MCEstimate> {
    if samples == 0 {
        return Err(GameError::BadParam("samples must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&alpha) {
        return Err(GameError::BadParam(format!("alpha = {alpha} outside [0, 1]")));
    }
    let n = v.n();
    let draws: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(s);
            let mut perm: Vec<usize> = (0..n).collect();
            perm.shuffle(&mut rng);
            let mut hi = vec![1.0; n];
            let mut lo = vec![0.0; n];
            let mut out = vec![0.0; n];
            let mut prev = v.eval(&hi) - v.eval(&lo);
            for &i in &perm {
                hi[i] = alpha;
                lo[i] = alpha;
                let next = v.eval(&hi) - v.eval(&lo);
                out[i] = prev - next;
                prev = next;
            }
            out
        })
        .collect();
    let m = samples as f64;
    let value: Vec<f64> = (0..n).map(|i| draws.iter().map(|d| d[i]).sum::<f64>() / m).collect();
    let std_error = (0..n)
        .map(|i| {
            if samples < 2 {
                return f64::INFINITY;
            }
            let var = draws.iter().map(|d| (d[i] - value[i]).powi(2)).sum::<f64>() / (m - 1.0);
            (var / m).sqrt()
        })
        .collect();
    Ok(MCEstimate { value, std_error, samples, seed })
}

/// `Ψ` and the indices that show its axioms independent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalIndexKind {
    Psi,
    Scaled(Rational),
    BlendEqualDivision(Rational),
    /// `Ψ^a` with `a = (α, …, α)`.
    Parametric(Rational),
    /// `F(u) = Σ_S y_S F(C^S)` with `û = Σ y_S Ĉ^S` and `F(C^N)` tilted
    /// towards `favored`.
    BasisWeighted { favored: usize },
}

impl IntervalIndexKind {
    pub fn name(&self) -> String {
        match self {
            IntervalIndexKind::Psi => "psi".into(),
            IntervalIndexKind::Scaled(l) => format!("scaled({})", rational::format_rational(l)),
            IntervalIndexKind::BlendEqualDivision(l) => format!("blend-ed({})", rational::format_rational(l)),
            IntervalIndexKind::Parametric(a) => format!("parametric({})", rational::format_rational(a)),
            IntervalIndexKind::BasisWeighted { favored } => format!("basis-weighted({})", favored + 1),
        }
    }

    pub fn compute(&self, v: &StepIntervalGame) -> Result<PowerVector> {
        let n = v.n();
        match self {
            IntervalIndexKind::Psi => psi(v),
            IntervalIndexKind::Scaled(l) => Ok(l * &psi(v)?),
            IntervalIndexKind::BlendEqualDivision(l) => {
                let ed = PowerVector::uniform_on(Coalition::grand(n), n);
                Ok(&(l * &psi(v)?) + &(&(rational::one() - l) * &ed))
            }
            IntervalIndexKind::Parametric(a) => psi_parametric(v, a),
            IntervalIndexKind::BasisWeighted { favored } => {
                if *favored >= n {
                    return Err(GameError::BadParam(format!("favored player {} > n = {n}", favored + 1)));
                }
                reconstruct_psi_via_ac(v, |s| crate::indices::basis_weighted_base(s, n, *favored)).map(|r| r.index)
            }
        }
    }
}

/// Quantities of the reconstruction from the `Ĉ^S = γ_S` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalAcReconstruction {
    /// `y_S` with `û = Σ y_S Ĉ^S` (the Möbius coefficients of `û`).
    pub coefficients: TUGame,
    pub varpi: Rational,
    pub index: PowerVector,
}

/// `F(u)` from `F(C^S)`:
/// `(1/ϖ)F(u) + Σ_{y_S<0} (−y_S/ϖ) F(C^S) = Σ_{y_S>0} (y_S/ϖ) F(C^S)`.
pub fn reconstruct_psi_via_ac(u: &StepIntervalGame, base_values: impl Fn(Coalition) -> PowerVector) -> Result<IntervalAcReconstruction> {
    let n = u.n();
    let y = unanimity_decompose(&interval_average_closed(u)?);
    let varpi: Rational = y.values().iter().filter(|c| c.is_positive()).sum();
    if !varpi.is_positive() {
        return Err(GameError::SingularSystem("no positive basis coefficient".into()));
    }
    let mut rhs = PowerVector::zeros(n);
    let mut lhs_rest = PowerVector::zeros(n);
    for s in Coalition::all(n).filter(|s| !s.is_empty()) {
        let c = y.value(s);
        if c.is_positive() {
            rhs = &rhs + &(&(c / &varpi) * &base_values(s));
        } else if c.is_negative() {
            lhs_rest = &lhs_rest + &(&(-c / &varpi) * &base_values(s));
        }
    }
    let index = &varpi * &(&rhs - &lhs_rest);
    Ok(IntervalAcReconstruction { coefficients: y, varpi, index })
}

pub type WeightedIntervalGames = Vec<(Rational, StepIntervalGame)>;

/// One instance of an interval axiom.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntervalCase {
    Single { axiom: Axiom, game: StepIntervalGame },
    AverageConvexity { left: WeightedIntervalGames, right: WeightedIntervalGames },
}

#[derive(Clone, Debug)]
pub struct IntervalAxiomReport {
    pub axiom: Axiom,
    pub index: String,
    pub verdict: Verdict,
    pub cases: usize,
    pub skipped: usize,
    pub witness: Option<IntervalCase>,
    pub message: Option<String>,
}

impl IntervalAxiomReport {
    pub fn replay(&self, f: &IntervalIndexKind) -> Result<bool> {
        match &self.witness {
            Some(c) => Ok(matches!(evaluate_interval_case(f, c)?, Outcome::Fail(_))),
            None => Ok(false),
        }
    }
}

fn combo_average(terms: &WeightedIntervalGames) -> Result<TUGame> {
    let n = terms.first().ok_or_else(|| GameError::BadParam("empty combination".into()))?.1.n();
    let mut acc = TUGame::zero(n);
    for (w, g) in terms {
        if g.n() != n {
            return Err(GameError::ShapeMismatch("interval games with different n".into()));
        }
        acc = &acc + &interval_average_closed(g)?.scale(w);
    }
    Ok(acc)
}

fn is_convex(terms: &WeightedIntervalGames) -> bool {
    !terms.is_empty() && terms.iter().all(|(w, _)| !w.is_negative()) && terms.iter().map(|(w, _)| w).sum::<Rational>().is_one()
}

pub fn evaluate_interval_case(f: &IntervalIndexKind, case: &IntervalCase) -> Result<Outcome> {
    Ok(match case {
        IntervalCase::Single { axiom, game } => {
            let p = f.compute(game)?;
            match axiom {
                Axiom::E => {
                    if p.sum().is_one() {
                        Outcome::Pass
                    } else {
                        Outcome::Fail(format!("sum of F = {}", rational::format_rational(&p.sum())))
                    }
                }
                Axiom::NP => match game.null_players().into_iter().find(|&i| !p[i].is_zero()) {
                    Some(i) => Outcome::Fail(format!("null player {} gets {}", i + 1, rational::format_rational(&p[i]))),
                    None => Outcome::Pass,
                },
                Axiom::S => match game.equivalent_pairs().into_iter().find(|&(i, h)| p[i] != p[h]) {
                    Some((i, h)) => Outcome::Fail(format!("equivalent players {} and {} get {:?}", i + 1, h + 1, p)),
                    None => Outcome::Pass,
                },
                Axiom::P => {
                    if p.is_zero() || !p.is_nonneg() {
                        Outcome::Fail(format!("F = {p:?}"))
                    } else {
                        Outcome::Pass
                    }
                }
                other => return Err(GameError::BadParam(format!("{other} is not a single-game interval axiom"))),
            }
        }
        IntervalCase::AverageConvexity { left, right } => {
            if !is_convex(left) || !is_convex(right) {
                return Err(GameError::BadParam("(AC) needs two convex systems".into()));
            }
            if combo_average(left)? != combo_average(right)? {
                return Ok(Outcome::Skipped("average games differ".into()));
            }
            let n = left[0].1.n();
            let side = |t: &WeightedIntervalGames| -> Result<PowerVector> {
                let mut acc = PowerVector::zeros(n);
                for (w, g) in t {
                    acc = &acc + &(w * &f.compute(g)?);
                }
                Ok(acc)
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

/// Top-point game versus "1 unless x = 𝟎".
pub fn interval_twins(n: usize) -> Result<(WeightedIntervalGames, WeightedIntervalGames)> {
    let top = StepIntervalGame::point_veto(vec![rational::one(); n])?;
    let off_zero = StepIntervalGame::point_veto(vec![rational::zero(); n])?;
    Ok((vec![(rational::one(), top)], vec![(rational::one(), off_zero)]))
}

/// `u` rearranged against the `C^S` games of its basis coefficients.
pub fn interval_basis_rearrangement(u: &StepIntervalGame) -> Result<(WeightedIntervalGames, WeightedIntervalGames)> {
    let n = u.n();
    let y = unanimity_decompose(&interval_average_closed(u)?);
    let varpi: Rational = y.values().iter().filter(|c| c.is_positive()).sum();
    let mut left = vec![(rational::one() / &varpi, u.clone())];
    let mut right = Vec::new();
    for s in Coalition::all(n).filter(|s| !s.is_empty()) {
        let c = y.value(s);
        if c.is_positive() {
            right.push((c / &varpi, StepIntervalGame::unanimity(s, n)?));
        } else if c.is_negative() {
            left.push((-c / &varpi, StepIntervalGame::unanimity(s, n)?));
        }
    }
    Ok((left, right))
}

/// Layer-cake split `u = Σ Δλ_t · 1[x ∈ {u ≥ λ_t}]` versus `u` itself.
pub fn interval_layer_decomposition(u: &StepIntervalGame) -> Result<(WeightedIntervalGames, WeightedIntervalGames)> {
    let mut prev = Rational::zero();
    let mut left = Vec::new();
    for l in u.levels() {
        let steps = u.level_antichain(&l).into_iter().map(|threshold| Step { threshold, level: rational::one() }).collect();
        left.push((&l - &prev, StepIntervalGame::new(u.n(), steps)?));
        prev = l;
    }
    Ok((left, vec![(rational::one(), u.clone())]))
}

fn interval_cases(axiom: Axiom, suite: &[StepIntervalGame]) -> Result<Vec<IntervalCase>> {
    let mut cases = Vec::new();
    match axiom {
        Axiom::AC => {
            let mut ns: Vec<usize> = suite.iter().map(|g| g.n()).collect();
            ns.sort();
            ns.dedup();
            for n in ns {
                let (l, r) = interval_twins(n)?;
                cases.push(IntervalCase::AverageConvexity { left: l, right: r });
            }
            for g in suite {
                for (l, r) in [interval_basis_rearrangement(g)?, interval_layer_decomposition(g)?] {
                    cases.push(IntervalCase::AverageConvexity { left: l, right: r });
                }
            }
        }
        _ => cases.extend(suite.iter().map(|g| IntervalCase::Single { axiom, game: g.clone() })),
    }
    Ok(cases)
}

/// Runs (E), (S), (NP) and (AC) for `f` over `suite`.
pub fn interval_axiom_suite(f: &IntervalIndexKind, suite: &[StepIntervalGame]) -> Result<Vec<IntervalAxiomReport>> {
    [Axiom::E, Axiom::S, Axiom::NP, Axiom::AC].into_iter().map(|a| check_interval_axiom(a, f, suite)).collect()
}

pub fn check_interval_axiom(axiom: Axiom, f: &IntervalIndexKind, suite: &[StepIntervalGame]) -> Result<IntervalAxiomReport> {
    let cases = interval_cases(axiom, suite)?;
    let outcomes: Vec<Result<Outcome>> = cases.par_iter().map(|c| evaluate_interval_case(f, c)).collect();
    let mut skipped = 0;
    for (i, (case, outcome)) in cases.iter().zip(outcomes).enumerate() {
        match outcome? {
            Outcome::Pass => {}
            Outcome::Skipped(_) => skipped += 1,
            Outcome::Fail(msg) => {
                return Ok(IntervalAxiomReport {
                    axiom,
                    index: f.name(),
                    verdict: Verdict::Violated,
                    cases: i + 1,
                    skipped,
                    witness: Some(case.clone()),
                    message: Some(msg),
                })
            }
        }
    }
    let verdict = if skipped == cases.len() { Verdict::Vacuous } else { Verdict::HoldsOnSuite };
    Ok(IntervalAxiomReport { axiom, index: f.name(), verdict, cases: cases.len(), skipped, witness: None, message: None })
}

/// A seeded step game: thresholds on `{0, 1/d, …, 1}`, levels on
/// `{1/m, …, 1}`, one level-1 step guaranteed and no zero threshold.
pub fn random_step_game(n: usize, steps: usize, d: i64, m: i64, seed: u64) -> Result<StepIntervalGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(steps.max(1));
    for t in 0..steps.max(1) {
        let mut threshold: Vec<Rational> = (0..n).map(|_| rat(rng.random_range(0..=d), d)).collect();
        if threshold.iter().all(Zero::is_zero) {
            let i = rng.random_range(0..n);
            threshold[i] = rat(rng.random_range(1..=d), d);
        }
        let level = if t == 0 { rational::one() } else { rat(rng.random_range(1..=m), m) };
        out.push(Step { threshold, level });
    }
    StepIntervalGame::new(n, out)
}
