//! (j,k) simple games: shapes, profiles, the structured representations,
//! pointwise evaluation and the structural predicates used everywhere else.

use std::borrow::Cow;

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{GameError, Result};
use crate::rational::{self, Rational};

/// Default cap on the number of profiles `j^n` a game may enumerate.
pub const DEFAULT_TABLE_CAP: u64 = 1 << 24;

/// Player count and the number of input/output levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GameShape {
    n: usize,
    j: u32,
    k: u32,
}

impl GameShape {
    pub fn new(n: usize, j: u32, k: u32) -> Result<Self> {
        Self::with_cap(n, j, k, DEFAULT_TABLE_CAP)
    }

    /// Like [`GameShape::new`] with an explicit cap on `j^n`.
    pub fn with_cap(n: usize, j: u32, k: u32, cap: u64) -> Result<Self> {
        if n == 0 || n > MAX_PLAYERS {
            return Err(GameError::InvalidShape(format!("n = {n} must be in 1..={MAX_PLAYERS}")));
        }
        if j < 2 || k < 2 {
            return Err(GameError::InvalidShape(format!("need j >= 2 and k >= 2, got j = {j}, k = {k}")));
        }
        let cells = (j as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        if cells > cap as u128 {
            return Err(GameError::SizeCapExceeded { what: "profiles j^n", needed: cells, cap: cap as u128 });
        }
        Ok(GameShape { n, j, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn j(&self) -> u32 {
        self.j
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// Highest input level `j - 1`.
    pub fn top_level(&self) -> u32 {
        self.j - 1
    }

    /// Highest output level `k - 1`.
    pub fn top_output(&self) -> u32 {
        self.k - 1
    }

    /// Number of profiles `j^n`.
    pub fn cells(&self) -> usize {
        (self.j as usize).pow(self.n as u32)
    }

    pub fn grand(&self) -> Coalition {
        Coalition::grand(self.n)
    }

    /// Canonical index: player 1 (index 0) is the most significant digit.
    pub fn index_of(&self, levels: &[u32]) -> usize {
        levels.iter().fold(0usize, |acc, &l| acc * self.j as usize + l as usize)
    }

    pub fn levels_at(&self, mut index: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.n];
        for slot in out.iter_mut().rev() {
            *slot = (index % self.j as usize) as u32;
            index /= self.j as usize;
        }
        out
    }

    pub fn zeros(&self) -> Profile {
        Profile(vec![0; self.n])
    }

    pub fn top(&self) -> Profile {
        Profile(vec![self.j - 1; self.n])
    }

    pub fn ensure_same(&self, other: &GameShape) -> Result<()> {
        if self != other {
            return Err(GameError::ShapeMismatch(format!("{self:?} vs {other:?}")));
        }
        Ok(())
    }

    /// Calls `f(index, levels)` for every profile in canonical order.
    pub fn for_each_profile(&self, mut f: impl FnMut(usize, &[u32])) {
        let mut levels = vec![0u32; self.n];
        for idx in 0..self.cells() {
            f(idx, &levels);
            for slot in levels.iter_mut().rev() {
                *slot += 1;
                if *slot < self.j {
                    break;
                }
                *slot = 0;
            }
        }
    }
}

/// Steps `buf` through every assignment of the positions in `free` to
/// `0..j`, leaving the other positions untouched. Returns `false` when the
/// enumeration wrapped around (all free positions back to 0).
pub(crate) fn advance_free(buf: &mut [u32], free: &[usize], j: u32) -> bool {
    for &p in free.iter().rev() {
        buf[p] += 1;
        if buf[p] < j {
            return true;
        }
        buf[p] = 0;
    }
    false
}

/// A vector of input levels, one per player.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Profile(Vec<u32>);

impl Profile {
    pub fn new(levels: Vec<u32>, shape: &GameShape) -> Result<Self> {
        if levels.len() != shape.n {
            return Err(GameError::InvalidProfile(format!("length {} but n = {}", levels.len(), shape.n)));
        }
        if let Some((i, &l)) = levels.iter().enumerate().find(|(_, &l)| l >= shape.j) {
            return Err(GameError::InvalidProfile(format!("player {} has level {l} >= j = {}", i + 1, shape.j)));
        }
        Ok(Profile(levels))
    }

    pub(crate) fn from_vec(levels: Vec<u32>) -> Self {
        Profile(levels)
    }

    /// Profile with the same level for every player.
    pub fn uniform(level: u32, shape: &GameShape) -> Result<Self> {
        Profile::new(vec![level; shape.n], shape)
    }

    pub fn levels(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&l| l == 0)
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &[u32]) -> bool {
        self.0.iter().zip(other).all(|(a, b)| a <= b)
    }

    pub fn join(&self, other: &Profile) -> Profile {
        Profile(self.0.iter().zip(&other.0).map(|(&a, &b)| a.max(b)).collect())
    }

    /// Players with a positive level (the vetoers `N^a` of `u^a`).
    pub fn support(&self) -> Coalition {
        Coalition::from_players(self.0.iter().enumerate().filter(|(_, &l)| l > 0).map(|(i, _)| i))
    }

    fn check_shape(&self, shape: &GameShape) -> Result<()> {
        Profile::new(self.0.clone(), shape).map(|_| ())
    }
}

/// How a game's function is stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GameBody {
    /// Values indexed by canonical profile index.
    Table(Vec<u32>),
    /// `u^a`: top output iff `a ≤ x`.
    PointVeto(Profile),
    /// `u^E`: top output iff some threshold of the antichain `E` is `≤ x`.
    VetoSet(Vec<Profile>),
    /// `[q; w_1, …, w_n]`, only for `j = k = 2`.
    Weighted { quota: Rational, weights: Vec<Rational> },
}

/// A validated (j,k) simple game. Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JKGame {
    shape: GameShape,
    body: GameBody,
}

impl JKGame {
    pub fn shape(&self) -> &GameShape {
        &self.shape
    }

    pub fn body(&self) -> &GameBody {
        &self.body
    }

    pub fn n(&self) -> usize {
        self.shape.n
    }

    /// Whether the game only takes the values `0` and `k - 1` via thresholds.
    pub fn veto_thresholds(&self) -> Option<Cow<'_, [Profile]>> {
        match &self.body {
            GameBody::PointVeto(a) => Some(Cow::Owned(vec![a.clone()])),
            GameBody::VetoSet(e) => Some(Cow::Borrowed(e)),
            _ => None,
        }
    }

    /// Unchecked pointwise value; `x` must conform to the shape.
    pub fn value(&self, x: &[u32]) -> u32 {
        let top = self.shape.top_output();
        match &self.body {
            GameBody::Table(t) => t[self.shape.index_of(x)],
            GameBody::PointVeto(a) => {
                if a.le(x) {
                    top
                } else {
                    0
                }
            }
            GameBody::VetoSet(e) => {
                if e.iter().any(|a| a.le(x)) {
                    top
                } else {
                    0
                }
            }
            GameBody::Weighted { quota, weights } => {
                let total: Rational = weights.iter().zip(x).filter(|(_, &l)| l > 0).map(|(w, _)| w).sum();
                u32::from(total >= *quota)
            }
        }
    }

    pub fn eval(&self, x: &Profile) -> Result<u32> {
        x.check_shape(&self.shape)?;
        Ok(self.value(x.levels()))
    }

    /// All values in canonical index order.
    pub fn table(&self) -> Cow<'_, [u32]> {
        match &self.body {
            GameBody::Table(t) => Cow::Borrowed(t),
            _ => {
                let mut out = Vec::with_capacity(self.shape.cells());
                self.shape.for_each_profile(|_, x| out.push(self.value(x)));
                Cow::Owned(out)
            }
        }
    }

    /// The same game as an explicit table.
    pub fn to_table_game(&self) -> JKGame {
        JKGame { shape: self.shape, body: GameBody::Table(self.table().into_owned()) }
    }

    /// Pointwise equality of the underlying functions.
    pub fn same_function(&self, other: &JKGame) -> bool {
        self.shape == other.shape && self.table() == other.table()
    }

    pub fn is_null_player(&self, i: usize) -> bool {
        let t = self.table();
        let stride = (self.shape.j as usize).pow((self.shape.n - 1 - i) as u32);
        let mut null = true;
        self.shape.for_each_profile(|idx, x| {
            if null && x[i] > 0 {
                null = t[idx] == t[idx - stride * x[i] as usize];
            }
        });
        null
    }

    pub fn are_equivalent(&self, i: usize, h: usize) -> bool {
        if i == h {
            return true;
        }
        let t = self.table();
        let mut swapped = vec![0u32; self.shape.n];
        let mut eq = true;
        self.shape.for_each_profile(|idx, x| {
            if eq && x[i] < x[h] {
                swapped.copy_from_slice(x);
                swapped.swap(i, h);
                eq = t[idx] == t[self.shape.index_of(&swapped)];
            }
        });
        eq
    }

    pub fn null_players(&self) -> Vec<usize> {
        (0..self.shape.n).filter(|&i| self.is_null_player(i)).collect()
    }

    pub fn equivalent_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.shape.n;
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |h| (i, h)))
            .filter(|&(i, h)| self.are_equivalent(i, h))
            .collect()
    }

    /// `πv` with `(πv)(x) = v(x_{π(1)}, …, x_{π(n)})`; `perm[i]` is `π(i)`.
    pub fn permute(&self, perm: &[usize]) -> Result<JKGame> {
        check_permutation(perm, self.shape.n)?;
        let t = self.table();
        let mut moved = vec![0u32; self.shape.n];
        let mut out = Vec::with_capacity(t.len());
        self.shape.for_each_profile(|_, x| {
            for (slot, &p) in moved.iter_mut().zip(perm) {
                *slot = x[p];
            }
            out.push(t[self.shape.index_of(&moved)]);
        });
        Ok(JKGame { shape: self.shape, body: GameBody::Table(out) })
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(GameError::BadParam(format!("permutation of length {} for n = {n}", perm.len())));
    }
    for &p in perm {
        if p >= n || seen[p] {
            return Err(GameError::BadParam(format!("{perm:?} is not a permutation of 0..{n}")));
        }
        seen[p] = true;
    }
    Ok(())
}

fn validate_table(shape: &GameShape, values: &[u32]) -> Result<()> {
    if values.len() != shape.cells() {
        return Err(GameError::TableLength { got: values.len(), expected: shape.cells() });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| v >= shape.k) {
        return Err(GameError::ValueOutOfRange { index, value, k: shape.k });
    }
    if values[0] != 0 {
        return Err(GameError::BoundaryViolation { profile: vec![0; shape.n], value: values[0], expected: 0 });
    }
    let last = values[values.len() - 1];
    if last != shape.top_output() {
        return Err(GameError::BoundaryViolation {
            profile: vec![shape.top_level(); shape.n],
            value: last,
            expected: shape.top_output(),
        });
    }
    // ≤ on J^n is generated by single-coordinate covers.
    let mut err = None;
    shape.for_each_profile(|idx, x| {
        if err.is_some() {
            return;
        }
        let mut stride = 1usize;
        for i in (0..shape.n).rev() {
            if x[i] > 0 && values[idx - stride] > values[idx] {
                let lower = shape.levels_at(idx - stride);
                err = Some(GameError::MonotonicityViolation {
                    lower,
                    upper: x.to_vec(),
                    lower_value: values[idx - stride],
                    upper_value: values[idx],
                });
                return;
            }
            stride *= shape.j as usize;
        }
    });
    err.map_or(Ok(()), Err)
}

/// Validates and wraps an explicit value table in canonical index order.
pub fn build_table_game(shape: GameShape, values: Vec<u32>) -> Result<JKGame> {
    validate_table(&shape, &values)?;
    Ok(JKGame { shape, body: GameBody::Table(values) })
}

/// `u^a`.
pub fn build_point_veto(a: Profile, shape: GameShape) -> Result<JKGame> {
    a.check_shape(&shape)?;
    if a.is_zero() {
        return Err(GameError::ZeroVeto);
    }
    Ok(JKGame { shape, body: GameBody::PointVeto(a) })
}

/// `w^S`: the point veto demanding `j - 1` from every member of `S`.
pub fn build_ws(s: Coalition, shape: GameShape) -> Result<JKGame> {
    if !s.is_subset_of(shape.grand()) {
        return Err(GameError::InvalidProfile(format!("coalition {s:?} outside {} players", shape.n)));
    }
    let levels = (0..shape.n).map(|i| if s.contains(i) { shape.top_level() } else { 0 }).collect();
    build_point_veto(Profile(levels), shape)
}

/// `u^E`, stored as the antichain of minimal thresholds.
pub fn build_veto_set(shape: GameShape, thresholds: Vec<Profile>) -> Result<JKGame> {
    for a in &thresholds {
        a.check_shape(&shape)?;
        if a.is_zero() {
            return Err(GameError::ZeroVeto);
        }
    }
    let e = normalize_veto_set(thresholds)?;
    Ok(JKGame { shape, body: GameBody::VetoSet(e) })
}

/// `[q; w]` for simple games (`j = k = 2`).
pub fn build_weighted(shape: GameShape, quota: Rational, weights: Vec<Rational>) -> Result<JKGame> {
    if shape.j != 2 || shape.k != 2 {
        return Err(GameError::Weighted(format!("only (2,2) games can be weighted, got ({}, {})", shape.j, shape.k)));
    }
    if !quota.is_positive() {
        return Err(GameError::Weighted("quota must be positive".into()));
    }
    if weights.len() != shape.n {
        return Err(GameError::Weighted(format!("{} weights for n = {}", weights.len(), shape.n)));
    }
    if weights.iter().any(|w| w.is_negative()) {
        return Err(GameError::Weighted("weights must be nonnegative".into()));
    }
    let total: Rational = weights.iter().sum();
    if total < quota {
        return Err(GameError::BoundaryViolation { profile: vec![1; shape.n], value: 0, expected: 1 });
    }
    Ok(JKGame { shape, body: GameBody::Weighted { quota, weights } })
}

/// Minimal elements of `E` under `≤`, deduplicated and sorted canonically.
/// Zero profiles are not legal thresholds and are dropped first.
pub fn normalize_veto_set(thresholds: Vec<Profile>) -> Result<Vec<Profile>> {
    let mut e: Vec<Profile> = thresholds.into_iter().filter(|a| !a.is_zero()).collect();
    if e.is_empty() {
        return Err(GameError::EmptyAfterValidation);
    }
    e.sort_by_key(|a| (a.levels().iter().map(|&l| l as u64).sum::<u64>(), a.clone()));
    e.dedup();
    let mut kept: Vec<Profile> = Vec::new();
    for a in e {
        if !kept.iter().any(|b| b.le(a.levels())) {
            kept.push(a);
        }
    }
    kept.sort();
    Ok(kept)
}

/// Thresholds of `u^E ∨ u^{E'}`.
pub fn veto_join(e: &[Profile], f: &[Profile]) -> Result<Vec<Profile>> {
    check_common_len(e, f)?;
    normalize_veto_set(e.iter().chain(f).cloned().collect())
}

/// Thresholds of `u^E ∧ u^{E'}`: componentwise maxima of all pairs.
pub fn veto_meet(e: &[Profile], f: &[Profile]) -> Result<Vec<Profile>> {
    check_common_len(e, f)?;
    normalize_veto_set(e.iter().flat_map(|a| f.iter().map(move |b| a.join(b))).collect())
}

fn check_common_len(e: &[Profile], f: &[Profile]) -> Result<()> {
    let n = e.first().or(f.first()).map(Profile::len).unwrap_or(0);
    if e.iter().chain(f).any(|a| a.len() != n) {
        return Err(GameError::ShapeMismatch("thresholds of different lengths".into()));
    }
    Ok(())
}

fn lattice_op(u: &JKGame, v: &JKGame, max: bool) -> Result<JKGame> {
    u.shape.ensure_same(&v.shape)?;
    if let (Some(e), Some(f)) = (u.veto_thresholds(), v.veto_thresholds()) {
        let thresholds = if max { veto_join(&e, &f)? } else { veto_meet(&e, &f)? };
        return Ok(JKGame { shape: u.shape, body: GameBody::VetoSet(thresholds) });
    }
    let (a, b) = (u.table(), v.table());
    let values = a.iter().zip(b.iter()).map(|(&x, &y)| if max { x.max(y) } else { x.min(y) }).collect();
    Ok(JKGame { shape: u.shape, body: GameBody::Table(values) })
}

/// `u ∨ v` (pointwise max).
pub fn or_game(u: &JKGame, v: &JKGame) -> Result<JKGame> {
    lattice_op(u, v, true)
}

/// `u ∧ v` (pointwise min).
pub fn and_game(u: &JKGame, v: &JKGame) -> Result<JKGame> {
    lattice_op(u, v, false)
}

/// Seeded random monotone table game. Values are drawn uniformly from K and
/// repaired upward in canonical order, then the boundary is forced.
pub fn random_monotone_game(shape: GameShape, seed: u64) -> JKGame {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<u32> = (0..shape.cells()).map(|_| rng.random_range(0..shape.k)).collect();
    repair_monotone(&shape, &mut values);
    values[0] = 0;
    let last = values.len() - 1;
    values[last] = shape.top_output();
    repair_monotone(&shape, &mut values);
    JKGame { shape, body: GameBody::Table(values) }
}

fn repair_monotone(shape: &GameShape, values: &mut [u32]) {
    let mut strides = vec![1usize; shape.n];
    for i in (0..shape.n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * shape.j as usize;
    }
    shape.for_each_profile(|idx, x| {
        let best = (0..shape.n).filter(|&i| x[i] > 0).map(|i| values[idx - strides[i]]).max().unwrap_or(0);
        if best > values[idx] {
            values[idx] = best;
        }
    });
}

/// A weighted sum of games over a common shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameCombo {
    terms: Vec<(Rational, JKGame)>,
}

impl GameCombo {
    pub fn new(terms: Vec<(Rational, JKGame)>) -> Result<Self> {
        let first = terms.first().ok_or_else(|| GameError::BadParam("empty combination".into()))?;
        let shape = first.1.shape;
        for (_, g) in &terms {
            shape.ensure_same(&g.shape)?;
        }
        Ok(GameCombo { terms })
    }

    pub fn terms(&self) -> &[(Rational, JKGame)] {
        &self.terms
    }

    pub fn shape(&self) -> &GameShape {
        &self.terms[0].1.shape
    }

    /// Nonnegative weights summing to one.
    pub fn is_convex(&self) -> bool {
        self.terms.iter().all(|(w, _)| rational::is_nonneg(w))
            && self.terms.iter().map(|(w, _)| w).sum::<Rational>() == rational::one()
    }

    pub fn combo_eval(&self, x: &Profile) -> Result<Rational> {
        x.check_shape(self.shape())?;
        Ok(self.value(x.levels()))
    }

    pub(crate) fn value(&self, x: &[u32]) -> Rational {
        self.terms.iter().map(|(w, g)| w * Rational::from_integer(g.value(x).into())).sum()
    }

    /// The pointwise combination as a game, if it is integer-valued and
    /// passes validation.
    pub fn to_game(&self) -> Result<JKGame> {
        let shape = *self.shape();
        let tables: Vec<_> = self.terms.iter().map(|(w, g)| (w, g.table())).collect();
        let mut values = Vec::with_capacity(shape.cells());
        for idx in 0..shape.cells() {
            let v: Rational = tables.iter().map(|(w, t)| *w * Rational::from_integer(t[idx].into())).sum();
            if !v.is_integer() || v.is_negative() {
                return Err(GameError::ValueOutOfRange { index: idx, value: u32::MAX, k: shape.k });
            }
            let v = v.to_integer();
            let v: u32 = v.try_into().map_err(|_| GameError::ValueOutOfRange { index: idx, value: u32::MAX, k: shape.k })?;
            values.push(v);
        }
        build_table_game(shape, values)
    }
}

impl From<JKGame> for GameCombo {
    fn from(g: JKGame) -> Self {
        GameCombo { terms: vec![(rational::one(), g)] }
    }
}

/// Convenience: `Profile::new` that panics, for literals in tests and builtins.
pub fn profile(levels: &[u32], shape: &GameShape) -> Profile {
    Profile::new(levels.to_vec(), shape).expect("profile literal out of range")
}
