//! Curves converging to boundary points of the bidisc, generators for test
//! families and the admissibility predicates (g-special, g-restricted).

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::boundary::koranyi_value;
use crate::disc::stolz_ratio_raw;
use crate::error::{Error, Result};
use crate::geometry::{kobayashi_distance_raw, BidiscBoundaryPoint, ComplexGeodesic, ProjectionDevice};
use crate::limits::{radial_limit, radial_limit_complex, schedule_point, ComplexLimit, LimitEstimate, LimitOptions, LimitStatus};

/// Schedule index at which a curve must already be close to its target.
const ENDPOINT_CHECK_K: u32 = 40;
/// Euclidean tolerance of the endpoint check.
const ENDPOINT_TOLERANCE: f64 = 1e-4;
/// Latest schedule index from which "eventually" conditions may start.
pub const EVENTUALLY_BY_K: u32 = 40;

type Path = dyn Fn(f64) -> (C64, C64) + Send + Sync;

/// A continuous curve `t -> sigma(t)` in the bidisc converging to `target`
/// as `t -> 1-`.
#[derive(Clone)]
pub struct XCurve {
    target: BidiscBoundaryPoint,
    path: Arc<Path>,
    label: String,
}

impl fmt::Debug for XCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("XCurve")
            .field("label", &self.label)
            .field("target", &self.target)
            .finish()
    }
}

impl XCurve {
    /// Checks that the path is close to the target at `t = 1 - 2^-40`.
    pub fn new(
        target: BidiscBoundaryPoint,
        label: impl Into<String>,
        path: impl Fn(f64) -> (C64, C64) + Send + Sync + 'static,
    ) -> Result<Self> {
        let label = label.into();
        let (a, b) = path(schedule_point(ENDPOINT_CHECK_K));
        let distance = ((a - target.x1()).norm_sqr() + (b - target.x2()).norm_sqr()).sqrt();
        if !(distance <= ENDPOINT_TOLERANCE) {
            return Err(Error::InvalidParameter(format!(
                "curve `{label}` ends at distance {distance:e} from its target"
            )));
        }
        Ok(Self {
            target,
            path: Arc::new(path),
            label,
        })
    }

    pub fn target(&self) -> &BidiscBoundaryPoint {
        &self.target
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    #[inline]
    pub fn at(&self, t: f64) -> (C64, C64) {
        (self.path)(t)
    }
}

/// Generators for curve families relative to a geodesic. Each kind has an
/// expected signature, see [`CurveKind::expected`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveKind {
    /// The geodesic ray `phi_g(t sigma)`.
    Radial,
    /// The geodesic over a Euclidean ray at angle `theta` to the radius.
    Angled { theta: f64 },
    /// The geodesic ray pushed inwards by `(1 - t)^decay` in the graph
    /// coordinate; `decay > 1`.
    SpecialPerturbed { decay: f64 },
    /// Radial identity coordinate with the graph coordinate chosen so that
    /// the incremental ratio tends to `c`; Šilov targets only.
    RatioControlled {
        #[serde(with = "crate::syntax::complex_text")]
        c: C64,
    },
    /// The geodesic over a curve approaching tangentially, with angle
    /// `±(pi/2)(1 - (1-t)^exponent)`.
    Tangential { exponent: f64, clockwise: bool },
}

/// Expected admissibility of a generated curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Signature {
    pub special: bool,
    /// `None` when restrictedness depends on the amplitude.
    pub restricted: Option<bool>,
}

impl CurveKind {
    /// Signature with respect to the coordinate device of a geodesic with
    /// boundary dilation coefficient `lambda_g`.
    pub fn expected(&self, lambda_g: f64) -> Signature {
        match *self {
            CurveKind::Radial | CurveKind::SpecialPerturbed { .. } => Signature {
                special: true,
                restricted: Some(true),
            },
            CurveKind::Angled { .. } => Signature {
                special: true,
                restricted: None,
            },
            CurveKind::RatioControlled { c } => Signature {
                special: (c - C64::new(lambda_g, 0.0)).norm() <= 1e-12 * lambda_g.max(1.0),
                restricted: Some(true),
            },
            CurveKind::Tangential { .. } => Signature {
                special: true,
                restricted: Some(false),
            },
        }
    }

    pub fn label(&self) -> String {
        match *self {
            CurveKind::Radial => "radial".into(),
            CurveKind::Angled { theta } => format!("angled({theta:.4})"),
            CurveKind::SpecialPerturbed { decay } => format!("special_perturbed({decay})"),
            CurveKind::RatioControlled { c } => format!("ratio_controlled({})", crate::syntax::format_complex(c)),
            CurveKind::Tangential { exponent, clockwise } => {
                format!("tangential({exponent:.4}, {})", if clockwise { "cw" } else { "ccw" })
            }
        }
    }
}

fn place(orientation_id: usize, id_value: C64, other_value: C64) -> (C64, C64) {
    if orientation_id == 1 {
        (id_value, other_value)
    } else {
        (other_value, id_value)
    }
}

/// Builds the curve of the given kind towards the target of `geodesic`.
pub fn make_curve(geodesic: &ComplexGeodesic, kind: CurveKind) -> Result<XCurve> {
    let x = *geodesic.target();
    let sigma = geodesic.sigma();
    let id = geodesic.orientation().identity_index();
    let other = 3 - id;
    let g = geodesic.g().clone();
    let one = C64::new(1.0, 0.0);
    match kind {
        CurveKind::Radial => XCurve::new(x, kind.label(), move |t| {
            let z = sigma * t;
            place(id, z, g.eval_raw(z))
        }),
        CurveKind::Angled { theta } => {
            if !(theta.abs() < std::f64::consts::FRAC_PI_2) {
                return Err(Error::InvalidParameter(format!("angle {theta} is not in (-pi/2, pi/2)")));
            }
            // rescaled so that the whole ray stays inside the disc
            let direction = C64::new(1.0, theta.tan());
            let scale = theta.cos().powi(2);
            XCurve::new(x, kind.label(), move |t| {
                let z = sigma * (one - direction * ((1.0 - t) * scale));
                place(id, z, g.eval_raw(z))
            })
        }
        CurveKind::SpecialPerturbed { decay } => {
            if !(decay > 1.0 && decay.is_finite()) {
                return Err(Error::InvalidParameter(format!("decay {decay} must exceed 1")));
            }
            XCurve::new(x, kind.label(), move |t| {
                let z = sigma * t;
                place(id, z, g.eval_raw(z) * (1.0 - (1.0 - t).powf(decay)))
            })
        }
        CurveKind::RatioControlled { c } => {
            if !x.is_silov() {
                return Err(Error::InvalidParameter("ratio controlled curves need a Šilov target".into()));
            }
            if !(c.re > 0.0) || c.re < 0.5 * c.norm() {
                return Err(Error::InvalidParameter(format!("ratio {c} must satisfy Re c >= |c|/2")));
            }
            let target_other = x.coord(other);
            XCurve::new(x, kind.label(), move |t| {
                let s = 1.0 - t;
                let w = c * (s / (1.0 + c.norm() * s));
                place(id, sigma * t, target_other * (one - w))
            })
        }
        CurveKind::Tangential { exponent, clockwise } => {
            if !(exponent > 0.0 && exponent < 1.0) {
                return Err(Error::InvalidParameter(format!("tangential exponent {exponent} must lie in (0, 1)")));
            }
            let sign = if clockwise { -1.0 } else { 1.0 };
            XCurve::new(x, kind.label(), move |t| {
                let s = 1.0 - t;
                let angle = sign * std::f64::consts::FRAC_PI_2 * (1.0 - s.powf(exponent));
                let z = sigma * (one - C64::from_polar(s, angle));
                place(id, z, g.eval_raw(z))
            })
        }
    }
}

/// The kinds of the standard 20-curve family around a geodesic with
/// dilation coefficient `lambda_g`; ratio controlled members are included
/// only for Šilov targets.
pub fn standard_kinds(lambda_g: f64, silov: bool) -> Vec<CurveKind> {
    use std::f64::consts::PI;
    let mut kinds = vec![CurveKind::Radial];
    for theta in [-PI / 3.0, -PI / 4.0, -PI / 8.0, PI / 8.0, PI / 4.0, PI / 3.0] {
        kinds.push(CurveKind::Angled { theta });
    }
    for decay in [1.5, 2.0, 3.0, 4.0] {
        kinds.push(CurveKind::SpecialPerturbed { decay });
    }
    if silov && lambda_g.is_finite() {
        for c in [
            C64::new(lambda_g, 0.0),
            C64::new(0.5 * lambda_g, 0.0),
            C64::new(2.0 * lambda_g, 0.0),
            C64::new(3.0 * lambda_g, 0.0),
            C64::new(lambda_g, 0.3 * lambda_g),
            C64::new(1.5 * lambda_g, 0.0),
        ] {
            kinds.push(CurveKind::RatioControlled { c });
        }
    }
    kinds.push(CurveKind::Tangential {
        exponent: 0.5,
        clockwise: false,
    });
    kinds.push(CurveKind::Tangential {
        exponent: 0.5,
        clockwise: true,
    });
    kinds.push(CurveKind::Tangential {
        exponent: 1.0 / 3.0,
        clockwise: false,
    });
    kinds
}

/// Builds the standard family for a geodesic.
pub fn standard_family(geodesic: &ComplexGeodesic) -> Result<Vec<(CurveKind, XCurve)>> {
    let lambda = geodesic.lambda()?;
    standard_kinds(lambda, geodesic.target().is_silov())
        .into_iter()
        .map(|kind| Ok((kind, make_curve(geodesic, kind)?)))
        .collect()
}

fn check_same_target(curve: &XCurve, device: &ProjectionDevice) -> Result<()> {
    let a = curve.target();
    let b = device.geodesic().target();
    if (a.x1() - b.x1()).norm() > 1e-9 || (a.x2() - b.x2()).norm() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "curve `{}` and the device have different targets",
            curve.label()
        )));
    }
    Ok(())
}

/// Verdict of [`is_g_special`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpecialVerdict {
    pub special: bool,
    /// Limit of `K(sigma(t), pi_g(sigma(t)))`.
    pub estimate: LimitEstimate,
}

/// Whether `K(sigma(t), pi_g(sigma(t))) -> 0`, decided on the radial limit
/// of the distance with the given tolerance (default `1e-6`).
pub fn is_g_special(
    curve: &XCurve,
    device: &ProjectionDevice,
    tolerance: f64,
    options: &LimitOptions,
) -> Result<SpecialVerdict> {
    check_same_target(curve, device)?;
    let estimate = radial_limit(
        |t| {
            let p = curve.at(t);
            kobayashi_distance_raw(p, device.retraction_raw(p))
        },
        options,
    );
    match estimate.status {
        LimitStatus::NotConverged => Err(Error::NotConverged {
            quantity: "distance to the retraction",
            last_delta: estimate.last_delta,
        }),
        _ => Ok(SpecialVerdict {
            special: estimate.value <= tolerance,
            estimate,
        }),
    }
}

/// Verdict of [`is_g_restricted`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RestrictedVerdict {
    pub restricted: bool,
    /// First index from which all projected points stay in the Stolz region.
    pub from_k: Option<u32>,
    /// Stolz ratios of the projected points along the schedule.
    pub ratios: Vec<f64>,
}

/// Whether the projected curve eventually stays in the Stolz region
/// `H(pi_g(x), M)`: for all schedule indices from some `k0 <= 40` on.
pub fn is_g_restricted(curve: &XCurve, device: &ProjectionDevice, m: f64, options: &LimitOptions) -> Result<RestrictedVerdict> {
    check_same_target(curve, device)?;
    if !(m > 1.0) {
        return Err(Error::InvalidParameter(format!("Stolz amplitude must exceed 1, got {m}")));
    }
    let x = curve.target();
    let vertex = device.left_inverse_raw((x.x1(), x.x2()));
    let vertex = vertex / vertex.norm();
    let ks: Vec<u32> = options.schedule().collect();
    let ratios: Vec<f64> = ks
        .iter()
        .map(|&k| stolz_ratio_raw(vertex, device.left_inverse_raw(curve.at(schedule_point(k)))))
        .collect();
    let mut from_k = None;
    for (i, &k) in ks.iter().enumerate().rev() {
        if ratios[i] < m {
            from_k = Some(k);
        } else {
            break;
        }
    }
    let from_k = from_k.filter(|&k| k <= EVENTUALLY_BY_K);
    Ok(RestrictedVerdict {
        restricted: from_k.is_some(),
        from_k,
        ratios,
    })
}

/// Which incremental ratio to estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioOrder {
    /// `(1 - sigma_1) / (1 - sigma_2)`.
    FirstOverSecond,
    /// `(1 - sigma_2) / (1 - sigma_1)`.
    SecondOverFirst,
}

/// Limit of the incremental ratio of a curve towards a Šilov point, after
/// rotating the target to `(1, 1)`.
pub fn special_ratio(curve: &XCurve, which: RatioOrder, options: &LimitOptions) -> Result<ComplexLimit> {
    let x = *curve.target();
    if !x.is_silov() {
        return Err(Error::InvalidParameter("incremental ratios need a Šilov target".into()));
    }
    let one = C64::new(1.0, 0.0);
    Ok(radial_limit_complex(
        |t| {
            let (a, b) = curve.at(t);
            let d1 = one - x.x1().conj() * a;
            let d2 = one - x.x2().conj() * b;
            match which {
                RatioOrder::FirstOverSecond => d1 / d2,
                RatioOrder::SecondOverFirst => d2 / d1,
            }
        },
        options,
    ))
}

/// Limit of `|alpha_2(t)| / (1 - |g(sigma_1(t))|)` where `alpha` is the
/// difference between the curve and its coordinate retraction onto the
/// geodesic.
pub fn graph_defect_ratio(curve: &XCurve, geodesic: &ComplexGeodesic, options: &LimitOptions) -> LimitEstimate {
    let id = geodesic.orientation().identity_index();
    radial_limit(
        |t| {
            let (a, b) = curve.at(t);
            let (free, graph) = if id == 1 { (a, b) } else { (b, a) };
            let image = geodesic.g().eval_raw(free);
            (graph - image).norm() / (1.0 - image.norm())
        },
        options,
    )
}

/// Whether the retracted curve eventually lies in the Koranyi region
/// `H(x, M)` of the device's geodesic, sampled on `k = first_k..=last_k`.
pub fn retraction_in_koranyi(
    curve: &XCurve,
    device: &ProjectionDevice,
    m: f64,
    last_k: u32,
    options: &LimitOptions,
) -> Result<bool> {
    check_same_target(curve, device)?;
    let threshold = m.ln();
    let mut inside_from_start = Vec::new();
    for k in options.first_k..=last_k {
        let q = device.retraction_raw(curve.at(schedule_point(k)));
        inside_from_start.push(koranyi_value(device.geodesic(), q, options)? < threshold);
    }
    let tail_start = inside_from_start.iter().rposition(|&inside| !inside).map_or(0, |i| i + 1);
    Ok(options.first_k + tail_start as u32 <= last_k.saturating_sub(2))
}
