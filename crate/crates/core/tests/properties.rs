//! Property tests for the structural invariants: reaction admissibility
//! across the parameter ranges of the catalog, free-boundary detection, and
//! determinism of the classification.

use frontlab::pde::{self, InitialData};
use frontlab::reaction::ReactionSpec;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Every admissible catalog reaction satisfies the sign pattern, the
    /// roots at 0 and 1, and the negative slope at 1.
    #[test]
    fn catalog_reactions_are_admissible(
        a in 0.05f64..0.95,
        p in 1.0f64..8.0,
        k in 0.1f64..10.0,
    ) {
        let specs = vec![
            ReactionSpec::bistable(a).unwrap(),
            ReactionSpec::combustion(a).unwrap(),
            ReactionSpec::power_monostable(p).unwrap(),
            ReactionSpec::fujita_critical(k, 0.5, 2.0, 1).unwrap(),
        ];
        for spec in &specs {
            prop_assert!(spec.validate().is_ok(), "{spec} failed admissibility");
            prop_assert_eq!(spec.eval(0.0).unwrap(), 0.0);
            prop_assert!(spec.eval(1.0).unwrap().abs() < 1e-15);
            prop_assert!(spec.eval_prime(1.0).unwrap() < 0.0);
        }
    }

    /// Classification is a pure function: repeated calls agree bitwise.
    #[test]
    fn classification_is_deterministic(a in 0.05f64..0.95, m in 1.2f64..4.0) {
        let spec = ReactionSpec::bistable(a).unwrap();
        let c1 = spec.classify(m, 1).unwrap();
        let c2 = spec.classify(m, 1).unwrap();
        prop_assert_eq!(c1.hosono.to_bits(), c2.hosono.to_bits());
        prop_assert_eq!(c1.sigma.to_bits(), c2.sigma.to_bits());
        prop_assert_eq!(c1.delta_stable.to_bits(), c2.delta_stable.to_bits());
        prop_assert!(c1.delta_stable > 0.0 && c1.delta_stable <= 0.5);
    }

    /// Box support is recovered within a cell on both sides.
    #[test]
    fn box_support_detected_within_a_cell(
        h in 0.1f64..1.5,
        x0 in -8.0f64..-1.0,
        width in 1.0f64..6.0,
    ) {
        let grid = pde::GridSpec::cartesian(-10.0, 10.0, 0.05).unwrap();
        let spec = ReactionSpec::logistic();
        let u = pde::build_initial(
            &grid,
            &InitialData::Box { height: h, x0, x1: x0 + width },
            &spec,
            2.0,
        )
        .unwrap();
        let field = pde::Field::new(grid, 0.0, u).unwrap();
        let (zm, zp) = pde::free_boundaries(&field, 1e-8).unwrap();
        prop_assert!((zm - x0).abs() <= 0.05 + 1e-9, "zm={zm} vs {x0}");
        prop_assert!((zp - (x0 + width)).abs() <= 0.05 + 1e-9, "zp={zp}");
    }

    /// The stability shift bounds are ordered and vanish with eps.
    #[test]
    fn shift_bounds_ordered(eps in 1e-6f64..0.99, k in 0.0f64..10.0) {
        let (s1, s2) = frontlab::barriers::stability_shift_bounds(eps, k).unwrap();
        prop_assert!(s1 >= s2);
        prop_assert!(s2 >= 0.0);
    }
}
