use bidisc::curves::{is_g_restricted, is_g_special, make_curve, special_ratio, CurveKind, RatioOrder};
use bidisc::dynamics::check_generalized_wolff;
use bidisc::{BidiscBoundaryPoint, BidiscMap, ComplexGeodesic, DeviceKind, LimitOptions, ProjectionDevice, C64};
use rand::{Rng, SeedableRng};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn diagonal_device() -> ProjectionDevice {
    let x = BidiscBoundaryPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    ProjectionDevice::new(ComplexGeodesic::diagonal(x).unwrap(), DeviceKind::Coordinate).unwrap()
}

#[test]
fn radial_and_tangential_signatures() {
    let device = diagonal_device();
    let options = LimitOptions::default();
    for (kind, special, restricted) in [
        (CurveKind::Radial, true, true),
        (CurveKind::SpecialPerturbed { decay: 2.0 }, true, true),
        (CurveKind::Angled { theta: 0.7 }, true, true),
        (CurveKind::Tangential { exponent: 0.5, clockwise: false }, true, false),
        (CurveKind::RatioControlled { c: c(2.0, 0.0) }, false, true),
    ] {
        let curve = make_curve(device.geodesic(), kind).unwrap();
        let s = is_g_special(&curve, &device, 1e-6, &options).unwrap();
        let r = is_g_restricted(&curve, &device, 4.0, &options).unwrap();
        assert_eq!((s.special, r.restricted), (special, restricted), "{}", kind.label());
    }
}

#[test]
fn ratio_controlled_curve_limits() {
    let device = diagonal_device();
    let options = LimitOptions::default();
    for target in [c(2.0, 0.0), c(1.5, 0.5), c(1.0, -0.25)] {
        let curve = make_curve(device.geodesic(), CurveKind::RatioControlled { c: target }).unwrap();
        // the curve is (t, 1 - w(t)) with w ~ c (1 - t), so the retraction
        // distance tends to the hyperbolic length of |1 - c| / |1 + c|
        let q = ((target - 1.0) / (target + 1.0)).norm();
        let oracle = 0.5 * ((1.0 + q) / (1.0 - q)).ln();
        let s = is_g_special(&curve, &device, 1e-6, &options).unwrap();
        assert!((s.estimate.value - oracle).abs() < 1e-6, "{target}: {} vs {oracle}", s.estimate.value);
        let ratio = special_ratio(&curve, RatioOrder::FirstOverSecond, &options).unwrap();
        assert!((ratio.value() - 1.0 / target).norm() < 1e-6, "{target}: {}", ratio.value());
    }
}

#[test]
fn horoballs_away_from_the_wolff_set_are_not_invariant() {
    let h = "mobius(-0.5, 0)";
    let f: BidiscMap = format!("compose({h}, z1); compose({h}, z2)").parse().unwrap();
    let one = BidiscBoundaryPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
    let at_one = check_generalized_wolff(&f, &one, &ComplexGeodesic::diagonal(one).unwrap(), &[1.0], 2000, 1).unwrap();
    assert!(at_one.passed);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for i in 0..5 {
        let angle = |rng: &mut rand_chacha::ChaCha8Rng| rng.gen_range(0.5..std::f64::consts::TAU - 0.5);
        let tau = BidiscBoundaryPoint::new(C64::from_polar(1.0, angle(&mut rng)), C64::from_polar(1.0, angle(&mut rng))).unwrap();
        let verdict = check_generalized_wolff(&f, &tau, &ComplexGeodesic::diagonal(tau).unwrap(), &[1.0], 2000, i).unwrap();
        assert!(!verdict.passed, "({}, {})", tau.x1(), tau.x2());
    }
}
