mod common;

use common::oracles::{arc_count, brute_jet_count, TPoly};
use logjet_core::dimension::{count_points, groebner_dimension, FpConfig};
use logjet_core::jets::{
    derive, derive_log, derive_ordinary, expand_by_substitution, iterated_derivatives, jet_ideal,
    specialize_log_to_ordinary,
};
use logjet_core::poly::{integer, parse_poly, JetMode, JetMonomial, JetPoly, RingDescriptor};
use logjet_core::strata::chart_jet_presentation;
use logjet_core::{Budget, Chart, Dimension, IdealPresentation};
use proptest::prelude::*;

type Terms = Vec<(i64, Vec<i32>, Vec<u32>)>;

fn build(ring: RingDescriptor, terms: &Terms) -> JetPoly {
    terms.iter().fold(JetPoly::zero(ring), |acc, (c, b, j)| {
        &acc + &JetPoly::term(ring, integer(*c), JetMonomial::from_parts(b.clone(), j.clone()))
    })
}

fn terms(n: usize, jets: usize, base: std::ops::RangeInclusive<i32>, len: usize) -> impl Strategy<Value = Terms> {
    prop::collection::vec(
        (
            -4i64..=4,
            prop::collection::vec(base, n),
            prop::collection::vec(prop_oneof![3 => Just(0u32), 1 => 1u32..=2], jets),
        ),
        0..=len,
    )
}

/// `(ring, f, g, h)` with `f, g, h` in the same ring.
fn triple(mode: JetMode) -> impl Strategy<Value = (RingDescriptor, JetPoly, JetPoly, JetPoly)> {
    (1usize..=3, 0usize..=3).prop_flat_map(move |(n, m)| {
        let ring = RingDescriptor::new(n, m, mode);
        let base = if mode == JetMode::Log { -2..=3 } else { 0..=3 };
        (
            terms(n, n * m, base.clone(), 4),
            terms(n, n * m, base.clone(), 4),
            terms(n, n * m, base, 4),
        )
            .prop_map(move |(a, b, c)| (ring, build(ring, &a), build(ring, &b), build(ring, &c)))
    })
}

fn mode() -> impl Strategy<Value = JetMode> {
    prop_oneof![Just(JetMode::Ordinary), Just(JetMode::Log)]
}

fn base_poly(n: usize, deg: i32) -> impl Strategy<Value = JetPoly> {
    terms(n, 0, 0..=deg, 4).prop_map(move |t| build(RingDescriptor::base(n), &t))
}

fn config(cases: u32) -> ProptestConfig {
    // Integration tests have no lib.rs for proptest to place regression
    // files next to.
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_laws((_, f, g, h) in mode().prop_flat_map(triple)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&(&f + &g) * &h, &(&f * &h) + &(&g * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn render_parse_round_trip((ring, f, _, _) in mode().prop_flat_map(triple)) {
        let text = f.to_string();
        prop_assert_eq!(parse_poly(&text, ring).unwrap(), f, "{}", text);
    }

    #[test]
    fn leibniz_rule((_, f, g, _) in mode().prop_flat_map(triple)) {
        prop_assert_eq!(derive(&(&f * &g)), &(&derive(&f) * &g) + &(&f * &derive(&g)));
    }

    #[test]
    fn derivations_agree_with_substitution(f in (1usize..=3).prop_flat_map(|n| base_poly(n, 3)), m in 0usize..=3, mode in mode()) {
        prop_assert_eq!(iterated_derivatives(&f, m, mode), expand_by_substitution(&f, m, mode).unwrap());
    }

    #[test]
    fn specialization_intertwines((_, g, _, _) in triple(JetMode::Log)) {
        let lhs = specialize_log_to_ordinary(&derive_log(&g).unwrap()).unwrap();
        let rhs = derive_ordinary(&specialize_log_to_ordinary(&g).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn affine_linear_derivatives_vanish(c in prop::collection::vec(-4i64..=4, 4), m in 0usize..=4) {
        let ring = RingDescriptor::base(3);
        let f = (0..3).fold(JetPoly::constant(ring, integer(c[3])), |acc, i| {
            &acc + &JetPoly::var(ring, i + 1).scale(&integer(c[i]))
        });
        let top = iterated_derivatives(&f, m, JetMode::Ordinary).pop().unwrap();
        prop_assert!(derive(&top).is_zero());
    }

    #[test]
    fn principal_ideals_are_hypersurfaces(f in (1usize..=3).prop_flat_map(|n| base_poly(n, 3))) {
        let n = f.ring().n;
        let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        let ideal = IdealPresentation::from_jet_polys(names, f.ring(), std::slice::from_ref(&f), "f", false).unwrap();
        let d = groebner_dimension(&ideal, &Budget::default()).unwrap().dimension;
        let expected = if f.is_zero() {
            Dimension::Finite(n)
        } else if f.is_constant() {
            Dimension::Empty
        } else {
            Dimension::Finite(n - 1)
        };
        prop_assert_eq!(d, expected);
    }

    #[test]
    fn more_generators_never_raise_dimension(fs in prop::collection::vec(base_poly(3, 2), 1..=3)) {
        let names: Vec<String> = (1..=3).map(|i| format!("x{i}")).collect();
        let mut previous = Dimension::Finite(3);
        for k in 1..=fs.len() {
            let ideal = IdealPresentation::from_jet_polys(names.clone(), RingDescriptor::base(3), &fs[..k], "fs", false).unwrap();
            let d = groebner_dimension(&ideal, &Budget::default()).unwrap().dimension;
            prop_assert!(d <= previous, "{} after {}", d, previous);
            previous = d;
        }
    }

    #[test]
    fn jet_ideals_are_deterministic(f in base_poly(2, 2), m in 1usize..=2, mode in mode()) {
        prop_assume!(!f.is_constant());
        let chart = Chart::new(logjet_core::AffineMonoid::orthant(2).unwrap(), vec![f], logjet_core::LogStructure::Standard).unwrap();
        prop_assert_eq!(jet_ideal(&chart, m, mode).unwrap(), jet_ideal(&chart, m, mode).unwrap());
        // Running out of budget has to be just as reproducible as an answer.
        let ideal = chart_jet_presentation(&chart, m, JetMode::Ordinary).unwrap();
        let budget = Budget { max_pairs: 2000, max_degree: 20 };
        prop_assert_eq!(groebner_dimension(&ideal, &budget), groebner_dimension(&ideal, &budget));
    }
}

proptest! {
    #![proptest_config(config(24))]

    /// The engine's point counter on jet ideals against the arc-lifting
    /// oracle and brute force.
    #[test]
    fn jet_point_counts_match_oracles(
        coeffs in prop::collection::vec((-3i64..=3, prop::collection::vec(0u32..=3, 2)), 1..=3),
        m in 0usize..=2,
    ) {
        let ring = RingDescriptor::base(2);
        let f = coeffs.iter().fold(JetPoly::zero(ring), |acc, (c, e)| {
            let e: Vec<i32> = e.iter().map(|&x| x as i32).collect();
            &acc + &JetPoly::term(ring, integer(*c), JetMonomial::from_parts(e, Vec::new()))
        });
        prop_assume!(!f.is_constant());
        let chart = Chart::new(logjet_core::AffineMonoid::orthant(2).unwrap(), vec![f.clone()], logjet_core::LogStructure::Trivial).unwrap();
        let ideal = chart_jet_presentation(&chart, m, JetMode::Ordinary).unwrap();
        let p = 5;
        let t = TPoly::from_integer(p, 2, &common::integer_terms(&f));
        let engine = count_points(&ideal, p, &FpConfig::default()).unwrap();
        prop_assert_eq!(engine, arc_count(&t, m));
        prop_assert_eq!(engine, brute_jet_count(&t, m));
    }
}
