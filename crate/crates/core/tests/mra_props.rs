mod common;

use common::*;
use padwave::families::haar_type::haar_mask_at_level;
use padwave::mra::*;
use padwave::padic::rat;
use padwave::{Ball, CycNumber, FilterSeq, Mode, Piece, Prime, Rat, StepFunction};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn example_pair() -> (StepFunction, FilterSeq) {
    let p3 = p(3);
    let vals = (0..9)
        .map(|k| CycNumber::from_rat(&if k % 3 == 0 { rat(-1, 3) } else { rat(2, 3) }))
        .collect();
    let h = FilterSeq::new(p3, 1, vals).unwrap();
    let piece = |c: Rat, v: Rat| {
        Piece::new(
            Ball::new(&c, 0, p3),
            Rat::from_integer(0.into()),
            CycNumber::from_rat(&v),
        )
    };
    let phi = StepFunction::from_pieces(
        p3,
        vec![
            piece(rat(0, 1), rat(-1, 3)),
            piece(rat(1, 3), rat(2, 3)),
            piece(rat(2, 3), rat(2, 3)),
        ],
    );
    (phi, h)
}

/// (φ, h, refinable): the unit ball with the Haar mask at several levels, two
/// non-refinable perturbations per prime, and the p = 3 example.
fn fixtures() -> Vec<(StepFunction, FilterSeq, bool)> {
    let mut out = vec![];
    for q in [2u64, 3, 5] {
        let phi = StepFunction::unit_ball(p(q));
        for s in 0..=2 {
            out.push((phi.clone(), haar_mask_at_level(p(q), s), true));
        }
        let mut bad = haar_mask_at_level(p(q), 1);
        bad.set(1, CycNumber::one());
        out.push((phi.clone(), bad, false));
        out.push((phi.translate(&rat(1, q as i64)), haar_mask_at_level(p(q), 0), false));
    }
    let (phi, h) = example_pair();
    out.push((phi, h, true));
    out
}

#[test]
fn refinement_routes_agree_on_fixtures() {
    for (phi, h, want) in fixtures() {
        assert_eq!(verify_refinement(&phi, &h).unwrap(), want);
        assert_eq!(fourier_refinement_check(&phi, &h).unwrap(), want);
        for n2 in h.level()..=h.level() + 1 {
            assert_eq!(verify_refinement(&phi, &h.lift(n2)).unwrap(), want);
        }
    }
}

#[test]
fn strang_fix_gives_approximation_order() {
    for (phi, h, refinable) in fixtures() {
        if !refinable {
            continue;
        }
        for mode in [Mode::Real, Mode::Integer] {
            for k in 1..=3 {
                if strang_fix(&h, k, mode).holds {
                    assert!(approximation_order(&phi, k, None, mode).holds, "k={} {:?}", k, h);
                }
            }
        }
    }
}

#[test]
fn haar_masks_and_banks() {
    for q in [2u64, 3, 5, 7] {
        let h = solve_haar_mask(p(q)).unwrap();
        assert_eq!(h, haar_mask_at_level(p(q), 0));
        assert!(mask_orthonormality_test(&h).passed);
        assert!(mask_sum_check(&h));
        let bank = complete_haar_bank(&h).unwrap();
        assert_eq!(bank.len() as u64, q - 1);
        let scales = bank_scales(&bank).unwrap();
        assert!(verify_filter_bank(&h, &bank, Some(&scales)).unwrap().passed);
        let g = character_table(p(q));
        assert!(g.is_scaled_unitary(&Rat::from_integer(q.into())));
    }
}

fn p(n: u64) -> Prime {
    Prime::new(n).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refinement_routes_agree(q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = if rng.gen_bool(0.5) { StepFunction::unit_ball(p(q)) } else { rand_stepfn(&mut rng, q, 3) };
        let n = rng.gen_range(0..=1u32);
        let mut h = haar_mask_at_level(p(q), n);
        if rng.gen_bool(0.6) {
            let k = rng.gen_range(0..h.len() as u64);
            h.set(k, rand_root(&mut rng, &[q]));
        }
        prop_assert_eq!(verify_refinement(&phi, &h).unwrap(), fourier_refinement_check(&phi, &h).unwrap());
    }

    #[test]
    fn symbol_is_lift_invariant(q in prop::sample::select(vec![2u64, 3]), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let len = q as usize;
        let vals = (0..len).map(|_| rand_root(&mut rng, &[q])).collect();
        let h = FilterSeq::new(p(q), 0, vals).unwrap();
        let sym = mask_symbol(&h);
        let lifted = mask_symbol(&h.lift(2));
        for _ in 0..4 {
            let xi = rand_point(&mut rng, q, 2, 4);
            prop_assert_eq!(sym.eval(&xi), lifted.eval(&xi));
        }
        prop_assert_eq!(sym.eval(&Rat::from_integer(0.into())), h.sum().scale(&rat(1, q as i64)));
    }
}
