//! One function per subcommand. Each returns a [`Report`]; errors are mapped
//! to exit codes by [`exit_code`].

use std::path::Path;

use bidisc::boundary::{
    busemann_closed_form, busemann_value_raw, dilation_disc, koranyi_value, koranyi_value_closed_form, phi_dilation,
};
use bidisc::disc::poincare_distance_raw;
use bidisc::dynamics::{check_generalized_wolff, classify_herve, target_set, wolff_sets, MapType, SliceFamily};
use bidisc::geometry::kobayashi_distance_raw;
use bidisc::julia::{admissibility, julia_target, jwc_bound_check, jwc_ratios, lindelof_check, verify_julia};
use bidisc::limits::schedule_point;
use bidisc::sampling::par_samples;
use bidisc::scenario::{test_function, Corpus, Scenario, TestFunction, Tolerances};
use bidisc::syntax::parse_complex;
use bidisc::{BidiscBoundaryPoint, DiscMap, DiscPoint, Error, ProjectionDevice, Result, C64};
use rand::Rng;

pub use crate::report::Report;
use crate::report::{fmt_complex, fmt_num, table, Record, Value};
use crate::verify::{containment_probes, Suite};

/// Stolz amplitude of the incremental-ratio command when the scenario does
/// not set one; large enough to admit every non-tangential generated curve.
pub const JWC_STOLZ_AMPLITUDE: f64 = 100.0;
/// Samples per radius of the generalized-Wolff containment test in the
/// dynamics command.
pub const DYNAMICS_CONTAINMENT_SAMPLES: usize = 2_000;

/// Flags shared by all subcommands.
#[derive(Debug, Clone, Default)]
pub struct Common {
    pub seed: Option<u64>,
    /// Overrides the tolerance of boundary-limit estimates.
    pub tol: Option<f64>,
}

/// Exit status for a library error: 1 assertion failure, 2 input error,
/// 3 hypothesis violated.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::NotConverged { .. } | Error::NoConvergedReference | Error::AmbiguousSlice { .. } => 1,
        Error::HypothesisViolated(_) | Error::InteriorFixedPoint { .. } | Error::CurveNotAdmissible { .. } => 3,
        Error::OutsideDisc { .. }
        | Error::NotOnBoundary { .. }
        | Error::InvalidParameter(_)
        | Error::Parse { .. }
        | Error::DomainEscape { .. }
        | Error::UnsupportedDevice(_)
        | Error::Io(_) => 2,
    }
}

fn tolerances(scenario: Option<&Scenario>, common: &Common) -> Result<Tolerances> {
    let mut t = scenario.map(Scenario::tolerances).unwrap_or_default();
    if let Some(tol) = common.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidParameter(format!("--tol must be positive, got {tol}")));
        }
        t.limit = tol;
    }
    Ok(t)
}

fn seed(scenario: &Scenario, common: &Common) -> u64 {
    common.seed.unwrap_or_else(|| scenario.seed())
}

fn parse_pair(text: &str) -> Result<(C64, C64)> {
    let (a, b) = text.split_once(',').ok_or_else(|| Error::Parse {
        offset: 0,
        message: format!("expected `z1,z2`, got `{text}`"),
    })?;
    Ok((parse_complex(a.trim())?, parse_complex(b.trim())?))
}

fn interior_pair(p: (C64, C64)) -> Result<(C64, C64)> {
    DiscPoint::new(p.0)?;
    DiscPoint::new(p.1)?;
    Ok(p)
}

pub enum DistanceInput<'a> {
    Disc(&'a str, &'a str),
    Bidisc(&'a str, &'a str),
}

pub fn distance(input: DistanceInput<'_>, common: &Common) -> Result<Report> {
    let mut report = Report::new("distance", None, tolerances(None, common)?);
    let record = match input {
        DistanceInput::Disc(z, w) => {
            let z = DiscPoint::new(parse_complex(z)?)?.value();
            let w = DiscPoint::new(parse_complex(w)?)?.value();
            let value = poincare_distance_raw(z, w);
            report.headline = Some(fmt_num(value));
            Record::new("distance").text("metric", "poincare").complex("z", z).complex("w", w).num("value", value)
        }
        DistanceInput::Bidisc(p, q) => {
            let p = interior_pair(parse_pair(p)?)?;
            let q = interior_pair(parse_pair(q)?)?;
            let value = kobayashi_distance_raw(p, q);
            report.headline = Some(fmt_num(value));
            Record::new("distance").text("metric", "kobayashi").pair("p", p).pair("q", q).num("value", value)
        }
    };
    report.push(record);
    Ok(report)
}

/// Output of the dilation command: a report, or CSV columns for plotting.
pub enum DilationOutput {
    Report(Report),
    Csv(String),
}

pub fn dilation(
    scenario: Option<&Scenario>,
    map: Option<&str>,
    at: Option<&str>,
    csv: bool,
    common: &Common,
) -> Result<DilationOutput> {
    let t = tolerances(scenario, common)?;
    let options = t.limit_options();
    if let Some(map) = map {
        let g: DiscMap = map.parse()?;
        let sigma = match at {
            Some(text) => parse_complex(text)?,
            None => C64::new(1.0, 0.0),
        };
        if (sigma.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NotOnBoundary { modulus: sigma.norm() });
        }
        if csv {
            let mut out = String::from("t,value\n");
            for k in options.schedule() {
                let s = schedule_point(k);
                let value = (1.0 - g.eval_raw(sigma * s).norm()) / (1.0 - s);
                out.push_str(&format!("{},{}\n", fmt_num(s), fmt_num(value)));
            }
            return Ok(DilationOutput::Csv(out));
        }
        let lambda = dilation_disc(&g, sigma, &options)?;
        let mut report = Report::new("dilation", None, t);
        report.headline = Some(format!("lambda = {}", fmt_num(lambda)));
        let mut record = Record::new("dilation").text("map", g.to_string()).complex("at", sigma).num("lambda", lambda);
        if let Ok(derivative) = g.derivative_disc(sigma) {
            record = record.num("derivative_modulus", derivative.norm());
        }
        report.push(record);
        return Ok(DilationOutput::Report(report));
    }
    if csv {
        return Err(Error::InvalidParameter("--csv needs --map".into()));
    }
    let scenario = scenario.ok_or_else(|| Error::InvalidParameter("dilation needs --map or --scenario".into()))?;
    let geodesic = scenario.geodesic()?;
    let lambda_g = geodesic.lambda()?;
    let lambda = [
        phi_dilation(scenario.map.component(1), &geodesic, &options)?,
        phi_dilation(scenario.map.component(2), &geodesic, &options)?,
    ];
    let mut report = Report::new("dilation", None, t);
    report.headline = Some(format!(
        "lambda_g = {}; lambda = ({}, {})",
        fmt_num(lambda_g),
        fmt_num(lambda[0]),
        fmt_num(lambda[1])
    ));
    report.push(
        Record::new("dilation")
            .text("map", scenario.map.to_string())
            .pair("x", target_pair(geodesic.target()))
            .text("g", geodesic.g().to_string())
            .num("lambda_g", lambda_g)
            .nums("lambda", &lambda),
    );
    Ok(DilationOutput::Report(report))
}

fn target_pair(x: &BidiscBoundaryPoint) -> (C64, C64) {
    (x.x1(), x.x2())
}

pub fn busemann(scenario: &Scenario, point: &str, common: &Common) -> Result<Report> {
    let t = tolerances(Some(scenario), common)?;
    let options = t.limit_options();
    let p = interior_pair(parse_pair(point)?)?;
    let geodesic = scenario.geodesic()?;
    let limit = busemann_value_raw(&geodesic, p, &options)?;
    let closed = busemann_closed_form(&geodesic, p)?;
    let koranyi = koranyi_value(&geodesic, p, &options)?;
    let koranyi_closed = koranyi_value_closed_form(&geodesic, p)?;
    let mut report = Report::new("busemann", None, t);
    report.passed = (limit - closed).abs() <= 1e-6;
    report.headline = Some(format!("B = {} (closed form {})", fmt_num(limit), fmt_num(closed)));
    report.push(
        Record::new("busemann")
            .pair("x", target_pair(geodesic.target()))
            .text("g", geodesic.g().to_string())
            .pair("point", p)
            .num("limit", limit)
            .num("closed_form", closed)
            .num("koranyi", koranyi)
            .num("koranyi_closed_form", koranyi_closed),
    );
    Ok(report)
}

pub fn julia(scenario: &Scenario, common: &Common) -> Result<Report> {
    let t = tolerances(Some(scenario), common)?;
    let seed = seed(scenario, common);
    let geodesic = scenario.geodesic()?;
    let certificate = verify_julia(
        &scenario.map,
        &geodesic,
        &scenario.radii(),
        scenario.samples(),
        seed,
        t.julia_slack,
        &t.limit_options(),
    )?;
    let mut report = Report::new("julia", Some(seed), t);
    let target = &certificate.target;
    report.passed = certificate.passed();
    report.headline = Some(format!(
        "y = {}; lambda = ({}, {}); {} violations",
        crate::report::fmt_pair(target_pair(&target.y)),
        fmt_num(target.lambda[0]),
        fmt_num(target.lambda[1]),
        certificate.violations()
    ));
    report.push(
        Record::new("julia")
            .pair("x", target_pair(&certificate.x))
            .pair("y", target_pair(&target.y))
            .nums("lambda", &target.lambda)
            .num("lambda_g", certificate.lambda_g),
    );
    for check in &certificate.radii {
        report.push(
            Record::new("radius")
                .num("radius", check.radius)
                .int("samples", check.samples)
                .int("violations", check.violations)
                .num("worst_slack", check.worst_slack),
        );
    }
    Ok(report)
}

pub fn jwc(scenario: &Scenario, common: &Common) -> Result<Report> {
    let t = tolerances(Some(scenario), common)?;
    let options = t.limit_options();
    let seed = seed(scenario, common);
    let geodesic = scenario.geodesic()?;
    let m = scenario.stolz_amplitude.unwrap_or(JWC_STOLZ_AMPLITUDE);
    let mut curves = Vec::new();
    if scenario.curves.is_some() {
        curves = scenario.curves()?.into_iter().map(|(_, c)| c).collect();
    } else {
        let device = ProjectionDevice::new(geodesic.clone(), bidisc::DeviceKind::Coordinate)?;
        for (_, curve) in scenario.curves()? {
            if admissibility(&curve, &device, m, &options)?.admissible() {
                curves.push(curve);
            }
        }
    }
    let ratios = jwc_ratios(&scenario.map, &geodesic, &curves, m, &options)?;
    let bound = jwc_bound_check(&scenario.map, &geodesic, &scenario.koranyi_amplitudes(), scenario.samples(), seed, &options)?;
    let mut report = Report::new("jwc", Some(seed), t);
    report.passed = ratios.passed(t.relative) && bound.passed();
    let worst = |pick: &dyn Fn(&bidisc::julia::JwcCurve) -> [C64; 2], expected: [f64; 2]| -> [f64; 2] {
        let mut out = expected;
        let mut deviation = [-1.0; 2];
        for curve in &ratios.curves {
            let values = pick(curve);
            for j in 0..2 {
                let d = (values[j] - expected[j]).norm();
                if d > deviation[j] {
                    deviation[j] = d;
                    out[j] = values[j].re;
                }
            }
        }
        out
    };
    let first = worst(&|c| [c.first[0].value(), c.first[1].value()], ratios.expected_first);
    let second = worst(&|c| [c.second[0].value(), c.second[1].value()], ratios.expected_second);
    let short = |x: f64| crate::report::fmt_short(x);
    report.headline = Some(format!(
        "ratios {}, {} vs expected {}, {}; second ratios {}, {} vs expected {}, {}",
        short(first[0]),
        short(first[1]),
        short(ratios.expected_first[0]),
        short(ratios.expected_first[1]),
        short(second[0]),
        short(second[1]),
        short(ratios.expected_second[0]),
        short(ratios.expected_second[1]),
    ));
    report.push(
        Record::new("jwc")
            .pair("y", target_pair(&ratios.target.y))
            .nums("lambda", &ratios.target.lambda)
            .num("lambda_g", ratios.lambda_g)
            .nums("expected_first", &ratios.expected_first)
            .nums("expected_second", &ratios.expected_second)
            .int("curves", ratios.curves.len())
            .num("max_ratio_deviation", ratios.max_ratio_deviation())
            .num("max_quotient_deviation", ratios.max_quotient_deviation())
            .num("max_limit_deviation", ratios.max_limit_deviation()),
    );
    for curve in &ratios.curves {
        let values = |limits: &[bidisc::limits::ComplexLimit; 2]| {
            Value::List(limits.iter().map(|l| Value::Complex(l.value())).collect())
        };
        report.push(
            Record::new("curve")
                .text("label", &curve.label)
                .field("first", values(&curve.first))
                .field("second", values(&curve.second))
                .flag("converged", (0..2).all(|j| curve.first[j].is_converged() && curve.second[j].is_converged())),
        );
    }
    for (name, rows) in [
        ("first", &bound.first[0]),
        ("first", &bound.first[1]),
        ("second", &bound.second[0]),
        ("second", &bound.second[1]),
    ]
    .iter()
    .zip([1, 2, 1, 2])
    .map(|((n, r), j)| ((*n, j), *r))
    {
        for row in rows {
            report.push(
                Record::new("bound")
                    .text("ratio", name.0)
                    .int("component", name.1)
                    .num("m", row.m)
                    .int("samples", row.samples)
                    .num("sup", row.sup)
                    .num("bound", row.bound.unwrap_or(f64::INFINITY))
                    .flag("within", row.within_bound()),
            );
        }
    }
    Ok(report)
}

pub fn lindelof(scenario: &Scenario, common: &Common) -> Result<Report> {
    let t = tolerances(Some(scenario), common)?;
    let options = t.limit_options();
    let device = scenario.device()?;
    let function = scenario.lindelof_function();
    let y = match function {
        TestFunction::FirstRatio { .. } | TestFunction::SecondRatio { .. } => {
            julia_target(&scenario.map, device.geodesic(), &options)?.y
        }
        _ => *device.geodesic().target(),
    };
    let h = test_function(&function, &scenario.map, &device, &y)?;
    let family: Vec<_> = scenario.curves()?.into_iter().map(|(_, c)| c).collect();
    let m = scenario.stolz_amplitude();
    let result = lindelof_check(h.as_ref(), &device, &family, m, t.lindelof, &options)?;
    let mut report = Report::new("lindelof", None, t);
    report.passed = result.passed();
    report.headline = Some(format!(
        "limit {} along {} admissible curves, worst deviation {}",
        fmt_complex(result.reference),
        result.admissible.len(),
        fmt_num(result.max_admissible_deviation())
    ));
    report.push(
        Record::new("lindelof")
            .text("function", function_label(&function))
            .complex("reference", result.reference)
            .text("reference_curve", &result.reference_label)
            .int("admissible", result.admissible.len())
            .int("inadmissible", result.inadmissible.len())
            .num("max_admissible_deviation", result.max_admissible_deviation())
            .num("max_inadmissible_deviation", result.max_inadmissible_deviation()),
    );
    for curve in result.admissible.iter().chain(&result.inadmissible) {
        report.push(
            Record::new("curve")
                .text("label", &curve.label)
                .flag("special", curve.admissibility.special)
                .flag("restricted", curve.admissibility.restricted)
                .complex("limit", curve.limit.value())
                .flag("converged", curve.limit.is_converged())
                .num("deviation", curve.deviation),
        );
    }
    Ok(report)
}

fn function_label(function: &TestFunction) -> String {
    match function {
        TestFunction::LeftInverse => "left_inverse".into(),
        TestFunction::FirstRatio { component } => format!("first_ratio({component})"),
        TestFunction::SecondRatio { component } => format!("second_ratio({component})"),
        TestFunction::Expression { expr } => expr.to_string(),
    }
}

fn slices_label(family: &SliceFamily) -> String {
    match family {
        SliceFamily::FixedPoints(table) => format!("interior fixed points ({} slices)", table.len()),
        SliceFamily::Wolff(tau) => format!("common Wolff point {}", fmt_complex(*tau)),
        SliceFamily::Projection => "coordinate projection".into(),
    }
}

pub fn dynamics(scenario: &Scenario, common: &Common) -> Result<Report> {
    let t = tolerances(Some(scenario), common)?;
    let seed = seed(scenario, common);
    let settings = scenario.dynamics();
    let class = classify_herve(&scenario.map, settings.grid)?;
    let sets = wolff_sets(&class);
    let seeds = par_samples(settings.seeds, seed, |rng| {
        let mut point = || C64::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU));
        (point(), point())
    });
    let clusters = target_set(&scenario.map, &seeds, settings.iterates, t.cluster)?;
    let reference = sets.wg.as_ref().unwrap_or(&sets.w);
    let worst_cluster = clusters.iter().map(|c| reference.distance(c.center)).fold(0.0, f64::max);
    let mut report = Report::new("dynamics", Some(seed), t);
    let wg_text = sets.wg.as_ref().map_or("not covered".to_string(), |w| w.to_string());
    report.headline = Some(format!("{} type; W(f)={}; W_G(f)={}", class.map_type.name(), sets.w, wg_text));
    let mut record = Record::new("classification").text("type", class.map_type.name());
    record = match class.map_type {
        MapType::First { lambda1, lambda2, wolff } => record.num("lambda1", lambda1).num("lambda2", lambda2).pair("wolff", wolff),
        MapType::Second { wolff_component, alpha1, alpha2, k2, borderline } => record
            .int("wolff_component", wolff_component)
            .complex("alpha1", alpha1)
            .complex("alpha2", alpha2)
            .num("k2", k2)
            .flag("borderline", borderline),
        MapType::Third { gamma1, gamma2 } => record.complex("gamma1", gamma1).complex("gamma2", gamma2),
        MapType::Degenerate { projection, wolff } => record.int("projection", projection).complex("wolff", wolff),
    };
    report.push(
        record
            .text("slices1", slices_label(&class.slices[0]))
            .text("slices2", slices_label(&class.slices[1])),
    );
    report.push(
        Record::new("wolff_sets")
            .text("w_case", sets.w_case)
            .text("w", sets.w.to_string())
            .text("wg_case", sets.wg_case.unwrap_or("none"))
            .text("wg", wg_text.clone())
            .flag("w_in_wg", sets.wg.as_ref().is_none_or(|wg| sets.w.is_subset_of(wg)))
            .flag("wg_connected", sets.wg.as_ref().is_none_or(|wg| wg.is_connected()))
            .field("notes", Value::List(sets.notes.iter().map(|n| Value::Text(n.clone())).collect())),
    );
    for cluster in &clusters {
        report.push(
            Record::new("cluster")
                .pair("center", cluster.center)
                .int("members", cluster.members)
                .num("distance", reference.distance(cluster.center)),
        );
    }
    let mut containment_ok = true;
    if let Some(wg) = &sets.wg {
        let samples = scenario.samples.unwrap_or(DYNAMICS_CONTAINMENT_SAMPLES);
        for (i, (tau, geodesic)) in containment_probes(&wg.components)?.into_iter().enumerate() {
            let verdict = check_generalized_wolff(&scenario.map, &tau, &geodesic, &scenario.radii(), samples, seed.wrapping_add(i as u64))?;
            containment_ok &= verdict.passed;
            let violations: usize = verdict.radii.iter().map(|r| r.2).sum();
            report.push(
                Record::new("containment")
                    .pair("tau", target_pair(&tau))
                    .text("g", geodesic.g().to_string())
                    .int("violations", violations)
                    .flag("passed", verdict.passed),
            );
        }
    }
    report.passed = worst_cluster <= t.cluster
        && containment_ok
        && sets.wg.as_ref().is_none_or(|wg| sets.w.is_subset_of(wg));
    Ok(report)
}

pub fn verify(corpus: &Path, common: &Common) -> Result<Report> {
    let corpus = Corpus::load(corpus)?;
    let t = tolerances(None, common)?;
    let seed = common.seed.unwrap_or(bidisc::scenario::DEFAULT_SEED);
    let suite = Suite::new(corpus, t, seed);
    let results = suite.run_all();
    let mut report = Report::new("verify", Some(seed), t);
    report.passed = results.iter().all(|r| r.passed);
    let passed = results.iter().filter(|r| r.passed).count();
    report.headline = Some(format!("{passed}/{} criteria passed", results.len()));
    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            vec![
                r.id.to_string(),
                r.name.to_string(),
                if r.passed { "PASS" } else { "FAIL" }.to_string(),
                r.detail.clone(),
            ]
        })
        .collect();
    report.table = Some(table(&["#", "criterion", "result", "detail"], &rows));
    report.records = results.into_iter().map(|r| r.record).collect();
    Ok(report)
}
