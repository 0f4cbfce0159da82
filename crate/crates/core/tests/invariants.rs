use bidisc::disc::poincare_distance_raw;
use bidisc::geometry::kobayashi_distance_raw;
use bidisc::{BidiscExpr, BidiscMap, DiscMap, C64};
use proptest::prelude::*;

fn disc_point() -> impl Strategy<Value = C64> {
    (0.0..0.999f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

fn small_point() -> impl Strategy<Value = C64> {
    (0.0..0.8f64, 0.0..std::f64::consts::TAU).prop_map(|(r, t)| C64::from_polar(r, t))
}

/// Random self-maps of the disc built from the grammar's constructors.
fn disc_map() -> impl Strategy<Value = DiscMap> {
    let leaf = prop_oneof![
        Just(DiscMap::identity()),
        (1u32..4).prop_map(|n| DiscMap::power(n).unwrap()),
        (small_point(), -3.0..3.0f64).prop_map(|(a, phase)| DiscMap::mobius(a, phase).unwrap()),
        small_point().prop_map(|c| DiscMap::constant(c).unwrap()),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(f, g)| DiscMap::compose(f, g)),
            (inner.clone(), inner.clone()).prop_map(|(f, g)| DiscMap::product(f, g)),
            (0.0..1.0f64, inner.clone(), inner).prop_map(|(t, f, g)| DiscMap::mix(t, f, g).unwrap()),
        ]
    })
}

fn bidisc_expr() -> impl Strategy<Value = BidiscExpr> {
    let leaf = prop_oneof![
        Just(BidiscExpr::coord(1).unwrap()),
        Just(BidiscExpr::coord(2).unwrap()),
        small_point().prop_map(|c| BidiscExpr::constant(c).unwrap()),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (disc_map(), inner.clone()).prop_map(|(g, e)| BidiscExpr::apply(g, e)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| BidiscExpr::product(a, b)),
            (0.0..1.0f64, inner.clone(), inner).prop_map(|(t, a, b)| BidiscExpr::mix(t, a, b).unwrap()),
        ]
    })
}

fn bidisc_map() -> impl Strategy<Value = BidiscMap> {
    (bidisc_expr(), bidisc_expr()).prop_map(|(a, b)| BidiscMap::new(a, b).unwrap())
}

/// Poincare distance from the cross ratio, written out independently.
fn rho(z: C64, w: C64) -> f64 {
    let q = ((z - w) / (C64::new(1.0, 0.0) - w.conj() * z)).norm();
    0.5 * ((1.0 + q) / (1.0 - q)).ln()
}

proptest! {
    #[test]
    fn poincare_distance_matches_the_cross_ratio(z in disc_point(), w in disc_point()) {
        let d = poincare_distance_raw(z, w);
        prop_assert!((d - rho(z, w)).abs() <= 1e-9 * (1.0 + d));
        prop_assert!((d - poincare_distance_raw(w, z)).abs() <= 1e-12 * (1.0 + d));
    }

    #[test]
    fn kobayashi_distance_is_the_larger_coordinate_distance(p in (disc_point(), disc_point()), q in (disc_point(), disc_point())) {
        let d = kobayashi_distance_raw(p, q);
        let oracle = rho(p.0, q.0).max(rho(p.1, q.1));
        prop_assert!((d - oracle).abs() <= 1e-9 * (1.0 + oracle));
    }

    #[test]
    fn schwarz_pick(g in disc_map(), z in small_point(), w in small_point()) {
        let before = rho(z, w);
        let after = rho(g.eval_raw(z), g.eval_raw(w));
        prop_assert!(after.is_nan() || after <= before + 1e-9, "{g}: {after} > {before}");
    }

    #[test]
    fn kobayashi_contraction(f in bidisc_map(), p in (small_point(), small_point()), q in (small_point(), small_point())) {
        let fp = f.eval_raw(p.0, p.1);
        let fq = f.eval_raw(q.0, q.1);
        let before = kobayashi_distance_raw(p, q);
        let after = kobayashi_distance_raw(fp, fq);
        prop_assert!(after <= before + 1e-9 * (1.0 + before), "{f}: {after} > {before}");
    }

    #[test]
    fn derivatives_match_finite_differences(g in disc_map(), z in small_point()) {
        let (value, derivative) = g.jet_raw(z);
        prop_assert!((value - g.eval_raw(z)).norm() < 1e-12);
        let h = 1e-6;
        for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
            let fd = (g.eval_raw(z + dir * h) - g.eval_raw(z - dir * h)) / (dir * 2.0 * h);
            prop_assert!((fd - derivative).norm() <= 1e-5 * (1.0 + derivative.norm()), "{g} at {z}: {fd} vs {derivative}");
        }
    }

    #[test]
    fn map_syntax_round_trips(f in bidisc_map(), z1 in small_point(), z2 in small_point()) {
        let reparsed: BidiscMap = f.to_string().parse().unwrap();
        let (a, b) = (f.eval_raw(z1, z2), reparsed.eval_raw(z1, z2));
        prop_assert!((a.0 - b.0).norm() < 1e-12 && (a.1 - b.1).norm() < 1e-12, "{f}");
        prop_assert_eq!(reparsed.to_string(), f.to_string());
    }
}
