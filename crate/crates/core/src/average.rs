//! The average game `ṽ(S)`: expected output swing when `S` moves from zero
//! to full support, averaged over uniform inputs of the other players and
//! normalized by `k - 1`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::games::{GameCombo, GameShape, JKGame, Profile};
use crate::rational::Rational;
use crate::tu::TUGame;

fn strides(shape: &GameShape) -> Vec<usize> {
    let mut s = vec![1usize; shape.n()];
    for i in (0..shape.n().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * shape.j() as usize;
    }
    s
}

/// Integer swing `Σ_{x_{-T}} [v(top_T, x_{-T}) − v(0_T, x_{-T})]` over the
/// `j^{n-|T|}` assignments of the players outside `T`.
fn swing_sum(table: &[u32], shape: &GameShape, strides: &[usize], t: Coalition) -> i64 {
    let top_offset: usize = t.players().map(|i| strides[i] * shape.top_level() as usize).sum();
    let free: Vec<usize> = (0..shape.n()).filter(|&i| !t.contains(i)).collect();
    let mut digits = vec![0u32; shape.n()];
    let mut total = 0i64;
    loop {
        let base: usize = free.iter().map(|&i| digits[i] as usize * strides[i]).sum();
        total += table[base + top_offset] as i64 - table[base] as i64;
        if !crate::games::advance_free(&mut digits, &free, shape.j()) {
            break;
        }
    }
    total
}

/// `C(v, T)`; the summand ignores `x_T`, so only `J^{N\T}` is enumerated.
pub fn c_function(v: &JKGame, t: Coalition) -> Result<Rational> {
    let shape = v.shape();
    if !t.is_subset_of(shape.grand()) {
        return Err(GameError::ShapeMismatch(format!("coalition {t:?} outside {} players", shape.n())));
    }
    let table = v.table();
    let sum = swing_sum(&table, shape, &strides(shape), t);
    Ok(normalize(sum, shape, t))
}

fn normalize(sum: i64, shape: &GameShape, t: Coalition) -> Rational {
    let free = (shape.n() - t.len()) as u32;
    let denom = BigInt::from(shape.j()).pow(free) * BigInt::from(shape.top_output());
    Rational::new(BigInt::from(sum), denom)
}

/// `ṽ` for every coalition.
pub fn average_game(v: &JKGame) -> TUGame {
    let shape = v.shape();
    let table = v.table();
    let st = strides(shape);
    let values: Vec<Rational> = (0..1usize << shape.n())
        .into_par_iter()
        .map(|m| {
            let t = Coalition(m as u32);
            normalize(swing_sum(&table, shape, &st, t), shape, t)
        })
        .collect();
    TUGame::new(shape.n(), values).expect("average game has value 0 on the empty coalition")
}

/// `ũ^a(S)` at one coalition from the product formula.
pub fn average_point_veto_at(a: &Profile, shape: &GameShape, s: Coalition) -> Rational {
    if s.is_empty() {
        return Rational::zero();
    }
    if s == shape.grand() {
        return Rational::one();
    }
    if !s.intersects(a.support()) {
        return Rational::zero();
    }
    let j = BigInt::from(shape.j());
    s.complement(shape.n())
        .players()
        .map(|i| Rational::new(&j - BigInt::from(a.levels()[i]), j.clone()))
        .product()
}

/// Closed form of the average game of `u^a`.
pub fn average_point_veto(a: &Profile, shape: &GameShape) -> Result<TUGame> {
    Profile::new(a.levels().to_vec(), shape)?;
    if a.is_zero() {
        return Err(GameError::ZeroVeto);
    }
    TUGame::from_fn(shape.n(), |s| average_point_veto_at(a, shape, s))
}

/// `v_a(S) = [v(top_S, a_{-S}) − v(0_S, a_{-S})] / (k − 1)`.
pub fn va_game(v: &JKGame, a: &Profile) -> Result<TUGame> {
    let shape = v.shape();
    Profile::new(a.levels().to_vec(), shape)?;
    let km1 = Rational::from_integer(BigInt::from(shape.top_output()));
    let mut hi = a.levels().to_vec();
    let mut lo = a.levels().to_vec();
    TUGame::from_fn(shape.n(), |s| {
        for i in 0..shape.n() {
            let inside = s.contains(i);
            hi[i] = if inside { shape.top_level() } else { a.levels()[i] };
            lo[i] = if inside { 0 } else { a.levels()[i] };
        }
        let diff = v.value(&hi) as i64 - v.value(&lo) as i64;
        Rational::from_integer(BigInt::from(diff)) / &km1
    })
}

/// `Σ_t weight_t · ṽ_t`.
pub fn average_of_combo(c: &GameCombo) -> TUGame {
    let n = c.shape().n();
    c.terms().iter().fold(TUGame::zero(n), |acc, (w, g)| &acc + &average_game(g).scale(w))
}
