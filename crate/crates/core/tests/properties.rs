use jkssi_core::average::{average_game, average_of_combo};
use jkssi_core::decomposition::{convex_veto_decomposition, reconstruct_phi_via_ac, ws_basis_decompose};
use jkssi_core::games::{and_game, or_game, random_monotone_game};
use jkssi_core::indices::{phi, phi_rollcall, phi_swing_formula};
use jkssi_core::interval::{interval_average_closed, psi, psi_parametric, psi_parametric_shapley, random_step_game};
use jkssi_core::rational::rat;
use jkssi_core::tu::shapley_value;
use jkssi_core::{GameShape, JKGame, PowerVector};
use num_traits::One;
use proptest::prelude::*;

fn game() -> impl Strategy<Value = JKGame> {
    (1usize..=3, 2u32..=4, 2u32..=4, any::<u64>())
        .prop_map(|(n, j, k, seed)| random_monotone_game(GameShape::new(n, j, k).unwrap(), seed))
}

fn game_pair() -> impl Strategy<Value = (JKGame, JKGame)> {
    (1usize..=3, 2u32..=4, 2u32..=4, any::<u64>(), any::<u64>()).prop_map(|(n, j, k, a, b)| {
        let s = GameShape::new(n, j, k).unwrap();
        (random_monotone_game(s, a), random_monotone_game(s, b))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn phi_is_a_probability_vector(v in game()) {
        let p = phi(&v).unwrap();
        prop_assert!(p.is_nonneg());
        prop_assert!(p.sum().is_one());
    }

    #[test]
    fn three_phi_paths_agree(v in game()) {
        let a = phi_rollcall(&v).unwrap();
        prop_assert_eq!(&a, &phi_swing_formula(&v).unwrap());
        prop_assert_eq!(&a, &shapley_value(&average_game(&v)).unwrap());
    }

    #[test]
    fn phi_follows_relabelling(v in game(), rot in 0usize..3) {
        let n = v.n();
        let perm: Vec<usize> = (0..n).map(|i| (i + rot) % n).collect();
        let p = phi(&v).unwrap();
        let q = phi(&v.permute(&perm).unwrap()).unwrap();
        for i in 0..n {
            prop_assert_eq!(&q[perm[i]], &p[i]);
        }
    }

    #[test]
    fn transfer_holds_for_phi((u, v) in game_pair()) {
        let lhs = &phi(&or_game(&u, &v).unwrap()).unwrap() + &phi(&and_game(&u, &v).unwrap()).unwrap();
        let rhs = &phi(&u).unwrap() + &phi(&v).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn veto_decomposition_preserves_average_and_phi(v in game()) {
        let combo = convex_veto_decomposition(&v).unwrap().to_combo().unwrap();
        prop_assert_eq!(average_of_combo(&combo), average_game(&v));
        prop_assert_eq!(reconstruct_phi_via_ac(&v).unwrap().index, phi(&v).unwrap());
    }

    #[test]
    fn basis_coefficients_rebuild_the_average(v in game()) {
        let avg = average_game(&v);
        match ws_basis_decompose(&avg, v.shape()) {
            Ok(x) => prop_assert_eq!(x.reconstruct(), avg),
            // Only j = 2 has zero pivots.
            Err(_) => prop_assert_eq!(v.shape().j(), 2),
        }
    }

    #[test]
    fn psi_matches_shapley_of_closed_average(n in 1usize..=3, steps in 1usize..=4, seed in any::<u64>()) {
        let g = random_step_game(n, steps, 4, 3, seed).unwrap();
        let p = psi(&g).unwrap();
        prop_assert_eq!(&p, &shapley_value(&interval_average_closed(&g).unwrap()).unwrap());
        prop_assert!(p.is_nonneg());
        prop_assert!(p.sum().is_one());
    }

    #[test]
    fn parametric_psi_paths_agree(n in 1usize..=3, seed in any::<u64>(), q in 0i64..=4) {
        let g = random_step_game(n, 3, 4, 3, seed).unwrap();
        let alpha = rat(q, 4);
        let a: PowerVector = psi_parametric(&g, &alpha).unwrap();
        prop_assert_eq!(a, psi_parametric_shapley(&g, &alpha).unwrap());
    }
}
