use std::path::Path;

use bidisc::curves::CurveKind;
use bidisc::scenario::{Corpus, DynamicsSettings, GeodesicSpec, Scenario, TestFunction, Tolerances};
use bidisc::{DeviceKind, DiscMap, Orientation, C64};
use proptest::prelude::*;

fn unimodular() -> impl Strategy<Value = C64> {
    (0.0..std::f64::consts::TAU).prop_map(|t| C64::from_polar(1.0, t))
}

fn curve_kind() -> impl Strategy<Value = CurveKind> {
    prop_oneof![
        Just(CurveKind::Radial),
        (-1.2..1.2f64).prop_map(|theta| CurveKind::Angled { theta }),
        (1.1..3.0f64).prop_map(|decay| CurveKind::SpecialPerturbed { decay }),
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| CurveKind::RatioControlled { c: C64::new(re, im) }),
    ]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    let maps = prop::sample::select(vec![
        "z1; z2",
        "product(z1, z1); product(z1, z2)",
        "compose(mobius(0.5-0.25j, 1), z2); mix(0.25, z1, const(0.1j))",
    ]);
    (
        maps,
        prop::option::of((unimodular(), unimodular())),
        prop::option::of((prop::sample::select(vec!["identity", "power(2)", "mobius(0.5, 0)"]), any::<bool>())),
        prop::option::of(prop::sample::select(vec![
            DeviceKind::Coordinate,
            DeviceKind::Abate,
            DeviceKind::Linear(C64::new(0.25, 0.5)),
        ])),
        prop::option::of(prop::collection::vec(curve_kind(), 1..4)),
        prop::option::of(prop::collection::vec(0.01..10.0f64, 1..4)),
        (prop::option::of(1usize..100_000), prop::option::of(any::<u64>()), prop::option::of(1.5..200.0f64)),
        (prop::option::of(1e-12..1e-3f64), any::<bool>(), any::<bool>()),
    )
        .prop_map(|(map, point, geodesic, device, curves, radii, (samples, seed, stolz), (tol, lindelof, dynamics))| {
            let mut s = Scenario::new(map.parse().unwrap());
            s.point = point;
            s.geodesic = geodesic.map(|(g, first)| GeodesicSpec {
                g: g.parse::<DiscMap>().unwrap(),
                orientation: if first { Orientation::FirstIdentity } else { Orientation::SecondIdentity },
            });
            s.device = device;
            s.curves = curves;
            s.radii = radii;
            s.samples = samples;
            s.seed = seed;
            s.stolz_amplitude = stolz;
            s.tolerances = tol.map(|limit| Tolerances { limit, ..Tolerances::default() });
            if lindelof {
                s.lindelof = Some(TestFunction::Expression {
                    expr: "product(z1, compose(mobius(0.5, 0), z2))".parse().unwrap(),
                });
            }
            if dynamics {
                s.dynamics = Some(DynamicsSettings { grid: 8, seeds: 5, iterates: 50 });
            }
            s
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn scenarios_round_trip(s in scenario()) {
        let json = s.to_json();
        let back = Scenario::from_json(&json).unwrap();
        prop_assert_eq!(back.to_json(), json);
        prop_assert_eq!(back, s);
    }
}

#[test]
fn unknown_fields_are_rejected() {
    assert!(Scenario::from_json(r#"{"map": "z1; z2", "radius": 2}"#).is_err());
    assert!(Scenario::from_json(r#"{"map": "z1; z3"}"#).is_err());
}

#[test]
fn shipped_corpus_is_the_builtin_one() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/default");
    assert_eq!(Corpus::load(&dir).unwrap(), Corpus::builtin());
}

#[test]
fn shipped_scenarios_load() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus/scenarios");
    let mut count = 0;
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let s = Scenario::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        s.geodesic().unwrap();
        count += 1;
    }
    assert!(count >= 5);
}
