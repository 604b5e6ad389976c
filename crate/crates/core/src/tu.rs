//! TU games over exact rationals: Shapley value, unanimity (Möbius) basis and
//! coalition-wise linear combinations.

use std::fmt;
use std::ops::{Add, Index, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::coalition::{Coalition, MAX_PLAYERS};
use crate::error::{GameError, Result};
use crate::rational::{self, format_rational, Rational};

/// Default cap on players for the Shapley value.
pub const SHAPLEY_MAX_PLAYERS: usize = 20;

/// A coalition function `2^N → ℚ` with value 0 on the empty coalition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TUGame {
    n: usize,
    values: Vec<Rational>,
}

impl TUGame {
    /// `values[S]` for every bitmask `S`, `values.len() == 2^n`.
    pub fn new(n: usize, values: Vec<Rational>) -> Result<Self> {
        if n > MAX_PLAYERS {
            return Err(GameError::InvalidTuGame(format!("n = {n} exceeds {MAX_PLAYERS}")));
        }
        if values.len() != 1usize << n {
            return Err(GameError::InvalidTuGame(format!("{} values for n = {n}", values.len())));
        }
        if !values[0].is_zero() {
            return Err(GameError::InvalidTuGame("value of the empty coalition must be 0".into()));
        }
        Ok(TUGame { n, values })
    }

    pub fn from_fn(n: usize, f: impl FnMut(Coalition) -> Rational) -> Result<Self> {
        TUGame::new(n, Coalition::all(n).map(f).collect())
    }

    pub fn zero(n: usize) -> Self {
        TUGame { n, values: vec![Rational::zero(); 1 << n] }
    }

    /// `γ_T`: 1 on supersets of `T`.
    pub fn unanimity(t: Coalition, n: usize) -> Result<Self> {
        if t.is_empty() {
            return Err(GameError::BadParam("unanimity game needs a nonempty coalition".into()));
        }
        TUGame::from_fn(n, |s| if gamma_eval(t, s) { rational::one() } else { rational::zero() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: Coalition) -> &Rational {
        &self.values[s.index()]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn grand_value(&self) -> &Rational {
        &self.values[self.values.len() - 1]
    }

    pub fn is_monotone(&self) -> bool {
        Coalition::all(self.n).all(|s| {
            (0..self.n).filter(|&i| !s.contains(i)).all(|i| self.value(s) <= self.value(s.with(i)))
        })
    }

    pub fn is_null_player(&self, i: usize) -> bool {
        Coalition::all(self.n).filter(|s| !s.contains(i)).all(|s| self.value(s) == self.value(s.with(i)))
    }

    pub fn are_symmetric(&self, i: usize, h: usize) -> bool {
        Coalition::all(self.n)
            .filter(|s| !s.contains(i) && !s.contains(h))
            .all(|s| self.value(s.with(i)) == self.value(s.with(h)))
    }

    pub fn scale(&self, w: &Rational) -> TUGame {
        TUGame { n: self.n, values: self.values.iter().map(|v| v * w).collect() }
    }
}

impl Index<Coalition> for TUGame {
    type Output = Rational;

    fn index(&self, s: Coalition) -> &Rational {
        self.value(s)
    }
}

impl Add for &TUGame {
    type Output = TUGame;

    fn add(self, rhs: &TUGame) -> TUGame {
        assert_eq!(self.n, rhs.n, "adding TU games of different size");
        TUGame { n: self.n, values: self.values.iter().zip(&rhs.values).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &TUGame {
    type Output = TUGame;

    fn sub(self, rhs: &TUGame) -> TUGame {
        assert_eq!(self.n, rhs.n, "subtracting TU games of different size");
        TUGame { n: self.n, values: self.values.iter().zip(&rhs.values).map(|(a, b)| a - b).collect() }
    }
}

/// `γ_S(T) = 1` iff `S ⊆ T`.
pub fn gamma_eval(s: Coalition, t: Coalition) -> bool {
    s.is_subset_of(t)
}

/// Coalition-wise `Σ weight · game`.
pub fn tu_linear_combo(terms: &[(Rational, TUGame)]) -> Result<TUGame> {
    let n = terms.first().map(|(_, g)| g.n).ok_or_else(|| GameError::BadParam("empty combination".into()))?;
    let mut out = TUGame::zero(n);
    for (w, g) in terms {
        if g.n != n {
            return Err(GameError::ShapeMismatch(format!("TU games on {n} and {} players", g.n)));
        }
        for (o, v) in out.values.iter_mut().zip(&g.values) {
            *o += w * v;
        }
    }
    Ok(out)
}

/// Exact Shapley value with the default player cap.
pub fn shapley_value(g: &TUGame) -> Result<PowerVector> {
    shapley_value_capped(g, SHAPLEY_MAX_PLAYERS)
}

/// `φ_i = Σ_{S∋i} (s-1)!(n-s)!/n! · [g(S) − g(S\{i})]`.
///
/// Values are brought to a common denominator first so the inner sums run
/// over big integers; differences are grouped by `|S|` before weighting.
pub fn shapley_value_capped(g: &TUGame, max_players: usize) -> Result<PowerVector> {
    let n = g.n;
    if n > max_players {
        return Err(GameError::SizeCapExceeded { what: "Shapley players", needed: n as u128, cap: max_players as u128 });
    }
    let lcm = g.values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    let ints: Vec<BigInt> = g.values.iter().map(|v| v.numer() * (&lcm / v.denom())).collect();
    let weights = rational::shapley_weights(n);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let bit = 1usize << i;
        let mut by_size = vec![BigInt::zero(); n + 1];
        for s in 0..ints.len() {
            if s & bit != 0 {
                by_size[s.count_ones() as usize] += &ints[s] - &ints[s ^ bit];
            }
        }
        let total: Rational = (1..=n).map(|s| &weights[s] * Rational::from_integer(by_size[s].clone())).sum();
        out.push(total / Rational::from_integer(lcm.clone()));
    }
    Ok(PowerVector(out))
}

/// Coefficients `y_S` with `g = Σ_{S≠∅} y_S γ_S` (Möbius inversion), as a
/// TU game indexed by coalition (`y_∅ = 0`).
pub fn unanimity_decompose(g: &TUGame) -> TUGame {
    let mut y = g.values.clone();
    for i in 0..g.n {
        let bit = 1usize << i;
        for s in 0..y.len() {
            if s & bit != 0 {
                let lower = y[s ^ bit].clone();
                y[s] -= lower;
            }
        }
    }
    TUGame { n: g.n, values: y }
}

/// Inverse of [`unanimity_decompose`]: `g(T) = Σ_{S⊆T} y_S`.
pub fn unanimity_reconstruct(y: &TUGame) -> TUGame {
    let mut g = y.values.clone();
    for i in 0..y.n {
        let bit = 1usize << i;
        for s in 0..g.len() {
            if s & bit != 0 {
                let lower = g[s ^ bit].clone();
                g[s] += lower;
            }
        }
    }
    TUGame { n: y.n, values: g }
}

/// A length-n payoff vector of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PowerVector(pub Vec<Rational>);

impl PowerVector {
    pub fn zeros(n: usize) -> Self {
        PowerVector(vec![Rational::zero(); n])
    }

    /// `1/|S|` on `S`, 0 elsewhere.
    pub fn uniform_on(s: Coalition, n: usize) -> Self {
        let share = Rational::new(BigInt::one(), BigInt::from(s.len().max(1)));
        PowerVector((0..n).map(|i| if s.contains(i) { share.clone() } else { Rational::zero() }).collect())
    }

    pub fn from_ratios(entries: &[(i64, i64)]) -> Self {
        PowerVector(entries.iter().map(|&(p, q)| rational::rat(p, q)).collect())
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|x| !x.is_negative())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(format_rational).collect()
    }

    /// Largest absolute entry difference, as a float.
    pub fn max_abs_diff(&self, other: &PowerVector) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| rational::to_f64(&(a - b).abs())).fold(0.0, f64::max)
    }
}

impl Index<usize> for PowerVector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Add for &PowerVector {
    type Output = PowerVector;

    fn add(self, rhs: &PowerVector) -> PowerVector {
        PowerVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &PowerVector {
    type Output = PowerVector;

    fn sub(self, rhs: &PowerVector) -> PowerVector {
        PowerVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<&PowerVector> for &Rational {
    type Output = PowerVector;

    fn mul(self, rhs: &PowerVector) -> PowerVector {
        PowerVector(rhs.0.iter().map(|x| self * x).collect())
    }
}

impl fmt::Debug for PowerVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.to_strings().join(", "))
    }
}

impl Serialize for PowerVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for x in &self.0 {
            seq.serialize_element(&format_rational(x))?;
        }
        seq.end()
    }
}

/// `Σ weight · vector`.
pub fn weighted_sum(terms: &[(Rational, PowerVector)], n: usize) -> PowerVector {
    terms.iter().fold(PowerVector::zeros(n), |acc, (w, p)| &acc + &(w * p))
}
