//! Constructive decompositions: games as convex combinations of veto games,
//! TU games in the `w̃^S` basis, and the index reconstruction built on it.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::average::{average_game, average_point_veto_at};
use crate::coalition::Coalition;
use crate::error::{GameError, Result};
use crate::games::{build_veto_set, build_ws, GameCombo, GameShape, JKGame, Profile};
use crate::rational::Rational;
use crate::tu::{unanimity_decompose, PowerVector, TUGame};

/// Largest player count accepted by [`ws_basis_decompose`].
pub const BASIS_MAX_PLAYERS: usize = 12;

/// `v = Σ_t α_t u^{F_t}` with positive weights summing to one and nested
/// supports `F_1 ⊇ F_2 ⊇ …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VetoDecomposition {
    shape: GameShape,
    terms: Vec<(Rational, Vec<Profile>)>,
}

impl VetoDecomposition {
    pub fn terms(&self) -> &[(Rational, Vec<Profile>)] {
        &self.terms
    }

    /// The terms as veto-set games (thresholds reduced to antichains).
    pub fn to_combo(&self) -> Result<GameCombo> {
        let terms = self
            .terms
            .iter()
            .map(|(a, f)| Ok((a.clone(), build_veto_set(self.shape, f.clone())?)))
            .collect::<Result<Vec<_>>>()?;
        GameCombo::new(terms)
    }
}

/// Sorts the positive-value support by `(v(x), Σx, lexicographic)`, which
/// refines `≤`, and cuts it wherever the value steps up.
pub fn convex_veto_decomposition(v: &JKGame) -> Result<VetoDecomposition> {
    let shape = *v.shape();
    let table = v.table();
    let mut support: Vec<(u32, u64, Vec<u32>)> = Vec::new();
    shape.for_each_profile(|idx, x| {
        if table[idx] > 0 {
            support.push((table[idx], x.iter().map(|&l| l as u64).sum(), x.to_vec()));
        }
    });
    support.sort();
    let km1 = BigInt::from(shape.top_output());
    let mut terms = Vec::new();
    let mut prev = 0u32;
    for t in 0..support.len() {
        let value = support[t].0;
        if value > prev {
            let alpha = Rational::new(BigInt::from(value - prev), km1.clone());
            let f = support[t..].iter().map(|(_, _, x)| Profile::from_vec(x.clone())).collect();
            terms.push((alpha, f));
            prev = value;
        }
    }
    Ok(VetoDecomposition { shape, terms })
}

/// Coefficients over nonempty coalitions in the `w̃^S` basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisCoefficients {
    shape: GameShape,
    coeffs: Vec<Rational>,
}

impl BasisCoefficients {
    pub fn get(&self, s: Coalition) -> &Rational {
        &self.coeffs[s.index()]
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (Coalition, &Rational)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(m, c)| (Coalition(m as u32), c))
    }

    /// `Σ_S x_S · w̃^S`.
    pub fn reconstruct(&self) -> TUGame {
        let n = self.shape.n();
        let mut acc = TUGame::zero(n);
        for (s, x) in self.nonzero() {
            let a = ws_profile(s, &self.shape);
            let col = TUGame::from_fn(n, |t| average_point_veto_at(&a, &self.shape, t)).expect("valid TU game");
            acc = &acc + &col.scale(x);
        }
        acc
    }
}

fn ws_profile(s: Coalition, shape: &GameShape) -> Profile {
    Profile::from_vec((0..shape.n()).map(|i| if s.contains(i) { shape.top_level() } else { 0 }).collect())
}

/// Bits of `s` in increasing order of player.
fn submask_list(s: Coalition) -> Vec<Coalition> {
    let players: Vec<usize> = s.players().collect();
    (0..1usize << players.len())
        .map(|c| Coalition::from_players(players.iter().enumerate().filter(|(b, _)| c >> b & 1 == 1).map(|(_, &p)| p)))
        .collect()
}

/// Unanimity coordinates of `w̃^S` on the subsets of `S`, in the order of
/// [`submask_list`].
fn ws_column(s: Coalition, shape: &GameShape) -> (Vec<Coalition>, Vec<Rational>) {
    let a = ws_profile(s, shape);
    let subs = submask_list(s);
    let mut y: Vec<Rational> = subs.iter().map(|&t| average_point_veto_at(&a, shape, t)).collect();
    for b in 0..s.len() {
        let bit = 1usize << b;
        for c in 0..y.len() {
            if c & bit != 0 {
                let lower = y[c ^ bit].clone();
                y[c] -= lower;
            }
        }
    }
    (subs, y)
}

/// Solves `Σ_S x_S · w̃^S = g` exactly in unanimity coordinates.
///
/// `w̃^S` has unanimity coordinates only on `2^S`, so ordering the unknowns by
/// decreasing bitmask makes the system upper triangular and elimination is
/// back substitution. A zero pivot (this happens for `j = 2` and `|S|` even)
/// makes `x_S` free; it is set to 0 when the residual allows it, otherwise the
/// system is reported singular.
pub fn ws_basis_decompose(g: &TUGame, shape: &GameShape) -> Result<BasisCoefficients> {
    let n = shape.n();
    if g.n() != n {
        return Err(GameError::ShapeMismatch(format!("TU game on {} players, shape has {n}", g.n())));
    }
    if n > BASIS_MAX_PLAYERS {
        return Err(GameError::SizeCapExceeded { what: "basis players", needed: n as u128, cap: BASIS_MAX_PLAYERS as u128 });
    }
    let mut residual = unanimity_decompose(g).values().to_vec();
    let mut coeffs = vec![Rational::zero(); 1 << n];
    for m in (1..1usize << n).rev() {
        let s = Coalition(m as u32);
        let (subs, col) = ws_column(s, shape);
        let pivot = col.last().expect("column is nonempty");
        let x = if pivot.is_zero() {
            if !residual[m].is_zero() {
                return Err(GameError::SingularSystem(format!(
                    "w̃^{s:?} has no leading coefficient and the target has a nonzero unanimity coordinate there"
                )));
            }
            continue;
        } else {
            &residual[m] / pivot
        };
        if x.is_zero() {
            continue;
        }
        for (t, c) in subs.iter().zip(&col) {
            if !c.is_zero() {
                residual[t.index()] -= &x * c;
            }
        }
        coeffs[m] = x;
    }
    if let Some(m) = residual.iter().position(|r| !r.is_zero()) {
        return Err(GameError::SingularSystem(format!("residual left at {:?}", Coalition(m as u32))));
    }
    Ok(BasisCoefficients { shape: *shape, coeffs })
}

/// `α_C = Σ_{∅≠S⊆C} (−1)^{|C\S|} w̃^C(S)`, the leading unanimity coordinate
/// of `w̃^C`, from the closed-form average of point-veto games.
pub fn alpha_leading(c: Coalition, j: u32) -> Result<Rational> {
    if c.is_empty() {
        return Err(GameError::BadParam("alpha_leading needs a nonempty coalition".into()));
    }
    let n = 32 - c.bits().leading_zeros() as usize;
    let shape = GameShape::with_cap(n, j, 2, u64::MAX)?;
    let a = ws_profile(c, &shape);
    Ok(c.subsets()
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v = average_point_veto_at(&a, &shape, s);
            if c.difference(s).len().is_multiple_of(2) {
                v
            } else {
                -v
            }
        })
        .sum())
}

/// Intermediate quantities of the index reconstruction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AcReconstruction {
    pub coefficients: BasisCoefficients,
    /// `E_1`: coalitions with positive coefficient.
    pub positive: Vec<Coalition>,
    /// `E_2`: coalitions with negative coefficient.
    pub negative: Vec<Coalition>,
    /// `ϖ = Σ_{S∈E_1} x_S`.
    pub varpi: Rational,
    pub index: PowerVector,
}

/// Rebuilds `F(u)` from `F(w^S)` through the `w̃^S` decomposition of `ũ`:
/// `(1/ϖ)F(u) + Σ_{E_2} (−x_S/ϖ) F(w^S) = Σ_{E_1} (x_S/ϖ) F(w^S)`.
pub fn reconstruct_index_via_ac(u: &JKGame, base_values: impl Fn(Coalition) -> PowerVector) -> Result<AcReconstruction> {
    let shape = *u.shape();
    let n = shape.n();
    let coefficients = ws_basis_decompose(&average_game(u), &shape)?;
    let positive: Vec<Coalition> = coefficients.nonzero().filter(|(_, x)| x.is_positive()).map(|(s, _)| s).collect();
    let negative: Vec<Coalition> = coefficients.nonzero().filter(|(_, x)| x.is_negative()).map(|(s, _)| s).collect();
    let varpi: Rational = positive.iter().map(|&s| coefficients.get(s)).sum();
    if !varpi.is_positive() {
        return Err(GameError::SingularSystem("no positive basis coefficient".into()));
    }
    let mut rhs = PowerVector::zeros(n);
    for &s in &positive {
        rhs = &rhs + &(&(coefficients.get(s) / &varpi) * &base_values(s));
    }
    let mut lhs_rest = PowerVector::zeros(n);
    for &s in &negative {
        lhs_rest = &lhs_rest + &(&(-coefficients.get(s) / &varpi) * &base_values(s));
    }
    let index = &varpi * &(&rhs - &lhs_rest);
    Ok(AcReconstruction { coefficients, positive, negative, varpi, index })
}

/// [`reconstruct_index_via_ac`] with `F(w^S) = Φ(w^S)`, uniform on `S`.
pub fn reconstruct_phi_via_ac(u: &JKGame) -> Result<AcReconstruction> {
    let n = u.n();
    reconstruct_index_via_ac(u, |s| PowerVector::uniform_on(s, n))
}

/// `w^S` games for every coalition with a nonzero coefficient.
pub fn basis_games(x: &BasisCoefficients) -> Result<Vec<(Rational, JKGame)>> {
    x.nonzero().map(|(s, c)| Ok((c.clone(), build_ws(s, x.shape)?))).collect()
}
