//! Scenario and corpus documents: JSON with map expressions in prefix
//! notation and complex numbers written as `"re+imj"`.

use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::curves::{make_curve, standard_kinds, CurveKind, XCurve};
use crate::error::{Error, Result};
use crate::geometry::{BidiscBoundaryPoint, ComplexGeodesic, DeviceKind, Orientation, ProjectionDevice};
use crate::holomap::{BidiscExpr, BidiscMap, DiscMap};
use crate::limits::LimitOptions;

/// Numerical tolerances used by the checks; every field has a default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute tolerance on accelerated increments of radial limits.
    pub limit: f64,
    /// Distance to the retraction below which a curve is special.
    pub special: f64,
    /// Relative tolerance for incremental-ratio limits.
    pub relative: f64,
    /// Agreement of restricted limits across admissible curves.
    pub lindelof: f64,
    /// Excess over a target sublevel still counted as containment.
    pub julia_slack: f64,
    /// Geodesic isometry defect.
    pub isometry: f64,
    /// Excess of `K(f(p), f(q))` over `K(p, q)`.
    pub contraction: f64,
    /// Relative agreement of dilation coefficients.
    pub dilation: f64,
    /// Agreement of curve ratio limits with their designed values.
    pub ratio: f64,
    /// Distance of target-set clusters from the symbolic set.
    pub cluster: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            limit: crate::limits::DEFAULT_TOLERANCE,
            special: crate::julia::SPECIAL_TOLERANCE,
            relative: 1e-3,
            lindelof: 1e-4,
            julia_slack: crate::julia::JULIA_SLACK,
            isometry: 1e-13,
            contraction: 1e-10,
            dilation: 1e-4,
            ratio: 1e-4,
            cluster: 1e-3,
        }
    }
}

impl Tolerances {
    pub fn limit_options(&self) -> LimitOptions {
        LimitOptions::with_tolerance(self.limit)
    }

    /// Named values in declaration order.
    pub fn entries(&self) -> [(&'static str, f64); 10] {
        [
            ("limit", self.limit),
            ("special", self.special),
            ("relative", self.relative),
            ("lindelof", self.lindelof),
            ("julia_slack", self.julia_slack),
            ("isometry", self.isometry),
            ("contraction", self.contraction),
            ("dilation", self.dilation),
            ("ratio", self.ratio),
            ("cluster", self.cluster),
        ]
    }
}

/// A complex geodesic `z -> (z, g(z))` (or the transposed graph) through a
/// boundary point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicSpec {
    pub g: DiscMap,
    #[serde(default = "default_orientation")]
    pub orientation: Orientation,
}

fn default_orientation() -> Orientation {
    Orientation::FirstIdentity
}

/// Test function for the Lindelöf check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TestFunction {
    /// The device's left inverse.
    LeftInverse,
    /// `(y_j - f_j) / (x_id - z_id)`, rotated to `x = y = (1, 1)`.
    FirstRatio { component: usize },
    /// `(y_j - f_j) / (x_other - z_other)`, rotated likewise.
    SecondRatio { component: usize },
    /// A bounded holomorphic function of the bidisc.
    Expression { expr: BidiscExpr },
}

/// Settings of the dynamics command.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DynamicsSettings {
    pub grid: usize,
    pub seeds: usize,
    pub iterates: usize,
}

impl Default for DynamicsSettings {
    fn default() -> Self {
        Self {
            grid: 16,
            seeds: 20,
            iterates: 200,
        }
    }
}

/// Input document of the single-check commands. Only `map` is required.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub map: BidiscMap,
    /// Boundary point `x`; defaults to `(1, 1)`.
    #[serde(default, skip_serializing_if = "Option::is_none", with = "optional_pair")]
    pub point: Option<(C64, C64)>,
    /// Defaults to the diagonal geodesic through `x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geodesic: Option<GeodesicSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<DeviceKind>,
    /// Defaults to the standard 20-curve family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curves: Option<Vec<CurveKind>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radii: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Stolz amplitude for restrictedness.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stolz_amplitude: Option<f64>,
    /// Koranyi amplitudes for the boundedness check.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub koranyi_amplitudes: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lindelof: Option<TestFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<DynamicsSettings>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

mod optional_pair {
    use super::*;

    pub fn serialize<S: serde::Serializer>(z: &Option<(C64, C64)>, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match z {
            Some(pair) => crate::syntax::complex_pair_text::serialize(pair, serializer),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Option<(C64, C64)>, D::Error> {
        crate::syntax::complex_pair_text::deserialize(deserializer).map(Some)
    }
}

pub const DEFAULT_RADII: [f64; 3] = [0.25, 1.0, 4.0];
pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_STOLZ_AMPLITUDE: f64 = 4.0;
pub const DEFAULT_KORANYI_AMPLITUDES: [f64; 2] = [2.0, 4.0];

impl Scenario {
    pub fn new(map: BidiscMap) -> Self {
        Self {
            map,
            point: None,
            geodesic: None,
            device: None,
            curves: None,
            radii: None,
            samples: None,
            seed: None,
            stolz_amplitude: None,
            koranyi_amplitudes: None,
            lindelof: None,
            dynamics: None,
            tolerances: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            offset: e.column(),
            message: format!("line {}: {e}", e.line()),
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serialization cannot fail")
    }

    pub fn boundary_point(&self) -> Result<BidiscBoundaryPoint> {
        let (a, b) = self.point.unwrap_or((C64::new(1.0, 0.0), C64::new(1.0, 0.0)));
        BidiscBoundaryPoint::new(a, b)
    }

    pub fn geodesic(&self) -> Result<ComplexGeodesic> {
        let x = self.boundary_point()?;
        match &self.geodesic {
            Some(spec) => ComplexGeodesic::new(spec.g.clone(), spec.orientation, x),
            None => ComplexGeodesic::diagonal(x),
        }
    }

    pub fn device(&self) -> Result<ProjectionDevice> {
        ProjectionDevice::new(self.geodesic()?, self.device.unwrap_or(DeviceKind::Coordinate))
    }

    pub fn curve_kinds(&self) -> Result<Vec<CurveKind>> {
        match &self.curves {
            Some(kinds) => Ok(kinds.clone()),
            None => {
                let geodesic = self.geodesic()?;
                Ok(standard_kinds(geodesic.lambda()?, geodesic.target().is_silov()))
            }
        }
    }

    pub fn curves(&self) -> Result<Vec<(CurveKind, XCurve)>> {
        let geodesic = self.geodesic()?;
        self.curve_kinds()?
            .into_iter()
            .map(|kind| Ok((kind, make_curve(&geodesic, kind)?)))
            .collect()
    }

    pub fn radii(&self) -> Vec<f64> {
        self.radii.clone().unwrap_or_else(|| DEFAULT_RADII.to_vec())
    }

    pub fn samples(&self) -> usize {
        self.samples.unwrap_or(DEFAULT_SAMPLES)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn stolz_amplitude(&self) -> f64 {
        self.stolz_amplitude.unwrap_or(DEFAULT_STOLZ_AMPLITUDE)
    }

    pub fn koranyi_amplitudes(&self) -> Vec<f64> {
        self.koranyi_amplitudes
            .clone()
            .unwrap_or_else(|| DEFAULT_KORANYI_AMPLITUDES.to_vec())
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    pub fn dynamics(&self) -> DynamicsSettings {
        self.dynamics.unwrap_or_default()
    }

    pub fn lindelof_function(&self) -> TestFunction {
        self.lindelof.clone().unwrap_or(TestFunction::FirstRatio { component: 1 })
    }
}

/// A named self-map of the bidisc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedMap {
    pub name: String,
    pub map: BidiscMap,
}

/// A named geodesic through a boundary point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NamedGeodesic {
    pub name: String,
    pub g: DiscMap,
    pub orientation: Orientation,
    #[serde(with = "crate::syntax::complex_pair_text")]
    pub point: (C64, C64),
}

impl NamedGeodesic {
    pub fn build(&self) -> Result<ComplexGeodesic> {
        ComplexGeodesic::new(self.g.clone(), self.orientation, BidiscBoundaryPoint::new(self.point.0, self.point.1)?)
    }
}

/// A disc map with a boundary point where its dilation coefficient is finite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DilationProbe {
    pub g: DiscMap,
    #[serde(with = "crate::syntax::complex_text")]
    pub at: C64,
}

/// A fixed-point-free map with its expected classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DynamicsCase {
    pub name: String,
    pub map: BidiscMap,
    pub expected_type: String,
    pub expected_w_case: String,
    pub expected_wg_case: String,
    /// Boundary points where generalized-Wolff containment must fail.
    #[serde(default)]
    pub repelling: Vec<[String; 2]>,
}

/// The bundled verification corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub maps: Vec<NamedMap>,
    pub geodesics: Vec<NamedGeodesic>,
    pub dilation: Vec<DilationProbe>,
    pub dynamics: Vec<DynamicsCase>,
}

/// Relative location of the corpus file inside a corpus directory.
pub const CORPUS_FILE: &str = "corpus.json";

impl Corpus {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse {
            offset: e.column(),
            message: format!("line {}: {e}", e.line()),
        })
    }

    /// Loads `path` itself when it is a file, otherwise `path/corpus.json`.
    pub fn load(path: &Path) -> Result<Self> {
        let file = if path.is_dir() { path.join(CORPUS_FILE) } else { path.to_path_buf() };
        Self::from_json(&std::fs::read_to_string(file)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("corpus serialization cannot fail")
    }

    /// The default corpus, identical to `corpus/default/corpus.json`.
    pub fn builtin() -> Self {
        let one = C64::new(1.0, 0.0);
        let map = |name: &str, text: &str| NamedMap {
            name: name.into(),
            map: text.parse().expect("builtin map"),
        };
        let disc = |text: &str| -> DiscMap { text.parse().expect("builtin disc map") };
        let geodesic = |name: &str, g: &str, orientation: Orientation, point: (C64, C64)| NamedGeodesic {
            name: name.into(),
            g: disc(g),
            orientation,
            point,
        };
        let third = std::f64::consts::FRAC_PI_3;
        let quarter = std::f64::consts::FRAC_PI_4;
        let blaschke = DiscMap::blaschke_through(
            vec![(C64::new(0.3, 0.0), 1), (C64::new(-0.2, 0.4), 1)],
            one,
            one,
        )
        .expect("builtin Blaschke product");
        let h = "mobius(-0.5, 0)";
        Corpus {
            maps: vec![
                map("identity", "z1; z2"),
                map("squares", "product(z1, z1); product(z1, z2)"),
                map("mobius_first", "compose(mobius(0.5, 0), z1); z2"),
                map("hyperbolic_pair", &format!("compose({h}, z1); compose({h}, z2)")),
                map("hyperbolic_swap", &format!("compose({h}, z2); compose({h}, z1)")),
                map("skew_product", &format!("compose({h}, z1); product(z1, z2)")),
                map("swap", "z2; z1"),
                map("average", "mix(0.5, z1, z2); product(z1, z2)"),
                map("blaschke_cube", &format!("compose({blaschke}, z1); compose(power(3), z2)")),
                map("flat_first", "const(0.5); z2"),
            ],
            geodesics: vec![
                geodesic("diagonal", "identity", Orientation::FirstIdentity, (one, one)),
                geodesic("square", "power(2)", Orientation::FirstIdentity, (one, one)),
                geodesic("mobius_3", "mobius(0.5, 0)", Orientation::FirstIdentity, (one, one)),
                geodesic("mobius_third", "mobius(-0.5, 0)", Orientation::FirstIdentity, (one, one)),
                geodesic("blaschke", &blaschke.to_string(), Orientation::FirstIdentity, (one, one)),
                geodesic("cube", "power(3)", Orientation::FirstIdentity, (one, one)),
                geodesic("mobius_square", "compose(mobius(0.5, 0), power(2))", Orientation::FirstIdentity, (one, one)),
                geodesic(
                    "rotated",
                    &format!("mobius(0, {third})"),
                    Orientation::FirstIdentity,
                    (one, C64::from_polar(1.0, third)),
                ),
                geodesic(
                    "diagonal_quarter",
                    "identity",
                    Orientation::FirstIdentity,
                    (C64::from_polar(1.0, quarter), C64::from_polar(1.0, quarter)),
                ),
                geodesic("flat", "const(0.3)", Orientation::FirstIdentity, (one, C64::new(0.3, 0.0))),
                geodesic("mixed", "mix(0.5, identity, power(2))", Orientation::FirstIdentity, (one, one)),
                geodesic("transposed_square", "power(2)", Orientation::SecondIdentity, (one, one)),
            ],
            dilation: vec![
                DilationProbe { g: disc("mobius(0.5, 0)"), at: one },
                DilationProbe { g: disc("mobius(-0.5, 0)"), at: one },
                DilationProbe {
                    g: disc("mobius(0.3+0.4j, 1)"),
                    at: C64::from_polar(1.0, 0.7),
                },
                DilationProbe { g: blaschke.clone(), at: one },
                DilationProbe {
                    g: disc("blaschke(0.5, 0.6j, -0.3^2)"),
                    at: C64::from_polar(1.0, -1.1),
                },
                DilationProbe {
                    g: disc("power(3)"),
                    at: C64::from_polar(1.0, 0.3),
                },
            ],
            dynamics: vec![
                DynamicsCase {
                    name: "third_type".into(),
                    map: format!("compose({h}, z1); compose({h}, z2)").parse().expect("builtin map"),
                    expected_type: "third".into(),
                    expected_w_case: "v".into(),
                    expected_wg_case: "iii".into(),
                    repelling: vec![["-1".into(), "-1".into()]],
                },
                DynamicsCase {
                    name: "first_type".into(),
                    map: format!("compose({h}, z2); compose({h}, z1)").parse().expect("builtin map"),
                    expected_type: "first".into(),
                    expected_w_case: "ii".into(),
                    expected_wg_case: "i".into(),
                    repelling: vec![],
                },
                DynamicsCase {
                    name: "second_type".into(),
                    map: format!("compose({h}, z1); product(z1, z2)").parse().expect("builtin map"),
                    expected_type: "second".into(),
                    expected_w_case: "iii".into(),
                    expected_wg_case: "ii".into(),
                    repelling: vec![],
                },
            ],
        }
    }
}

/// A scalar function on the bidisc.
pub type TestFn = Box<dyn Fn((C64, C64)) -> C64 + Send + Sync>;

/// Builds the Lindelöf test function of a scenario.
pub fn test_function(
    function: &TestFunction,
    map: &BidiscMap,
    device: &ProjectionDevice,
    y: &BidiscBoundaryPoint,
) -> Result<TestFn> {
    let x = *device.geodesic().target();
    let id = device.geodesic().orientation().identity_index();
    let one = C64::new(1.0, 0.0);
    let ratio = |component: usize, k: usize| -> Result<TestFn> {
        if !(1..=2).contains(&component) {
            return Err(Error::InvalidParameter(format!("component must be 1 or 2, got {component}")));
        }
        let f = map.component(component).clone();
        let yj = y.coord(component);
        let xk = if x.is_unimodular(k) { x.coord(k) } else { one };
        Ok(Box::new(move |p: (C64, C64)| {
            let z = if k == 1 { p.0 } else { p.1 };
            (one - yj.conj() * f.eval_raw(p.0, p.1)) / (one - xk.conj() * z)
        }))
    };
    match function {
        TestFunction::LeftInverse => {
            let device = device.clone();
            Ok(Box::new(move |p| device.left_inverse_raw(p)))
        }
        TestFunction::FirstRatio { component } => ratio(*component, id),
        TestFunction::SecondRatio { component } => ratio(*component, 3 - id),
        TestFunction::Expression { expr } => {
            let expr = expr.clone();
            Ok(Box::new(move |p| expr.eval_raw(p.0, p.1)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_scenario_uses_defaults() {
        let s = Scenario::from_json(r#"{"map": "product(z1, z1); product(z1, z2)"}"#).unwrap();
        assert_eq!(s.boundary_point().unwrap().x1(), C64::new(1.0, 0.0));
        assert_eq!(s.radii(), vec![0.25, 1.0, 4.0]);
        assert_eq!(s.curves().unwrap().len(), 20);
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn full_scenario_round_trips() {
        let mut s = Scenario::new("compose(mobius(0.5, 0), z1); z2".parse().unwrap());
        s.point = Some((C64::new(1.0, 0.0), C64::from_polar(1.0, 0.5)));
        s.geodesic = Some(GeodesicSpec {
            g: "mobius(0, 0.5)".parse().unwrap(),
            orientation: Orientation::FirstIdentity,
        });
        s.device = Some(DeviceKind::Linear(C64::new(1.0 / 3.0, 1.0 / 3.0)));
        s.curves = Some(vec![CurveKind::Radial, CurveKind::RatioControlled { c: C64::new(2.0, 0.5) }]);
        s.lindelof = Some(TestFunction::Expression {
            expr: "product(z1, z2)".parse().unwrap(),
        });
        s.tolerances = Some(Tolerances::default());
        let text = s.to_json();
        assert_eq!(Scenario::from_json(&text).unwrap(), s);
    }

    #[test]
    fn malformed_scenarios_are_rejected() {
        assert!(matches!(Scenario::from_json("{"), Err(Error::Parse { .. })));
        assert!(Scenario::from_json(r#"{"map": "z1; powr(2)"}"#).is_err());
        assert!(Scenario::from_json(r#"{"map": "z1; z2", "colour": 1}"#).is_err());
    }

    #[test]
    fn builtin_corpus_builds() {
        let corpus = Corpus::builtin();
        assert_eq!(Corpus::from_json(&corpus.to_json()).unwrap(), corpus);
        for g in &corpus.geodesics {
            g.build().unwrap();
        }
    }
}
