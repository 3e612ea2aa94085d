use proptest::prelude::*;
use radial_ld::bounds::{lemma2_coord_bound, lemma2_proper_bound, theorem2_guarantee, theorem2_min_cutoff};
use radial_ld::{integrate, EventKind, FieldModel, Outcome, SimConfig};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn impulse_is_additive(q2 in 0.1f64..3.0, r0 in 1.0f64..50.0, f1 in 0.05f64..0.95, f2 in 0.05f64..0.95) {
        let field = FieldModel::cutoff_coulomb(q2, r0).unwrap();
        let (lo, hi) = (f1.min(f2), f1.max(f2));
        let (a, m, b) = (-r0, -r0 * (1.0 - lo), -r0 * (1.0 - hi));
        let whole = field.field_impulse(a, b).unwrap();
        let parts = field.field_impulse(a, m).unwrap() + field.field_impulse(m, b).unwrap();
        prop_assert!((whole - parts).abs() <= 1e-12 * whole.abs().max(1.0));
        prop_assert!(whole >= 0.0);
    }

    #[test]
    fn tabulated_impulse_is_monotone(mags in proptest::collection::vec(0.0f64..5.0, 2..8), x in 0.1f64..0.9) {
        let knots: Vec<(f64, f64)> = mags.iter().enumerate().map(|(i, &m)| (1.0 + i as f64, m)).collect();
        let field = FieldModel::tabulated(knots).unwrap();
        let r0 = field.r0();
        let near = field.field_impulse(-r0, -r0 * x.max(0.5)).unwrap();
        let far = field.field_impulse(-r0, -r0 * x.min(0.5)).unwrap();
        prop_assert!(far >= near - 1e-12);
    }

    #[test]
    fn lemma2_bounds_grow_with_impulse(v0 in 0.01f64..0.99, k in 0.0f64..10.0, dk in 0.0f64..1.0) {
        prop_assert!(lemma2_proper_bound(v0, k + dk).unwrap() >= lemma2_proper_bound(v0, k).unwrap());
        prop_assert!(lemma2_coord_bound(v0, k + dk).unwrap() >= lemma2_coord_bound(v0, k).unwrap());
        // (1 - v0²)² K / v0 <= K / (v0 γ0) since (1 - v0²)^{3/2} <= 1.
        prop_assert!(lemma2_coord_bound(v0, k).unwrap() <= lemma2_proper_bound(v0, k).unwrap() + 1e-15);
    }

    #[test]
    fn minimal_cutoff_meets_guarantee(v0 in 0.02f64..0.5, r1 in 0.2f64..2.0) {
        let r0 = theorem2_min_cutoff(v0, r1, 1.0).unwrap();
        prop_assert!(r0 > r1);
        let g = theorem2_guarantee(v0, r1, r0, 1.0).unwrap();
        prop_assert!((g - v0).abs() <= 1e-8 * v0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn coulomb_runs_turn_and_escape(q2 in 0.3f64..3.0, r0 in 2.0f64..60.0, v0 in 0.005f64..0.95) {
        let field = FieldModel::cutoff_coulomb(q2, r0).unwrap();
        let wl = integrate(&SimConfig::new(field, v0).unwrap()).unwrap();
        prop_assert_eq!(wl.outcome(), Outcome::TurnedAndEscaped);
        let turn = wl.event(EventKind::Turn).unwrap().state;
        prop_assert!(-r0 < turn.x && turn.x < 0.0);
        let s = wl.samples();
        for w in s.windows(2) {
            prop_assert!(w[1].tau > w[0].tau);
            prop_assert!(w[1].t > w[0].t);
            prop_assert!(w[1].theta.is_finite());
        }
        // Leaving the field takes at least as long in t as the distance covered.
        let exit = wl.event(EventKind::Exit).unwrap().state;
        prop_assert!(exit.t - turn.t >= (turn.x - exit.x) - 1e-9);
    }
}
