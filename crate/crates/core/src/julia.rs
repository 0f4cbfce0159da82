//! Numerical certificates for the Julia lemma along a complex geodesic, the
//! Julia-Wolff-Carathéodory incremental ratios, the Koranyi-boundedness
//! bound behind them and the Lindelöf principle for restricted limits.

use num_complex::Complex64 as C64;

use crate::boundary::{koranyi_value_closed_form, phi_dilation, BusemannSublevel};
use crate::curves::{is_g_restricted, is_g_special, XCurve};
use crate::error::{Error, Result};
use crate::geometry::{BidiscBoundaryPoint, ComplexGeodesic, DeviceKind, ProjectionDevice};
use crate::holomap::BidiscMap;
use crate::limits::{radial_limit_complex, schedule_point, ComplexLimit, LimitOptions};
use crate::sampling::{par_samples, sample_sublevel_member};

/// Excess over a target sublevel that still counts as containment.
pub const JULIA_SLACK: f64 = 1e-9;
/// Allowed distance of a finite-coefficient target coordinate from the circle.
pub const TARGET_MODULUS_TOLERANCE: f64 = 1e-6;
/// Distance below which a special curve counts as glued to its retraction.
pub const SPECIAL_TOLERANCE: f64 = 1e-6;

/// Boundary point reached by `f` along the geodesic ray, with the
/// coefficients `lambda_j` of the components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JuliaTarget {
    pub y: BidiscBoundaryPoint,
    pub lambda: [f64; 2],
    /// Whether the radial limit of each component converged. A component
    /// with infinite coefficient is unconstrained by the Julia inclusion.
    pub determined: [bool; 2],
}

/// Computes `y` as the radial limits of `f_j` along the geodesic and
/// `lambda_j` as the geodesic dilation coefficients of the components.
pub fn julia_target(f: &BidiscMap, geodesic: &ComplexGeodesic, options: &LimitOptions) -> Result<JuliaTarget> {
    let mut lambda = [0.0; 2];
    let mut coords = [C64::new(0.0, 0.0); 2];
    let mut determined = [false; 2];
    for j in 1..=2 {
        let component = f.component(j);
        lambda[j - 1] = phi_dilation(component, geodesic, options)?;
        let limit = radial_limit_complex(|t| {
            let p = geodesic.ray_raw(t);
            component.eval_raw(p.0, p.1)
        }, options);
        determined[j - 1] = limit.is_converged();
        if lambda[j - 1].is_finite() {
            if !limit.is_converged() {
                return Err(Error::NotConverged {
                    quantity: "radial limit of a component",
                    last_delta: limit.last_delta(),
                });
            }
            let value = limit.value();
            if (value.norm() - 1.0).abs() > TARGET_MODULUS_TOLERANCE {
                return Err(Error::HypothesisViolated(format!(
                    "component {j} has finite coefficient but radial limit of modulus {}",
                    value.norm()
                )));
            }
            coords[j - 1] = value / value.norm();
        } else {
            let value = if limit.is_converged() {
                limit.value()
            } else {
                let p = geodesic.ray_raw(schedule_point(options.last_k));
                component.eval_raw(p.0, p.1)
            };
            coords[j - 1] = if value.norm() > 1.0 { value / value.norm() } else { value };
        }
    }
    if lambda.iter().all(|l| l.is_infinite()) {
        return Err(Error::HypothesisViolated(
            "both components have infinite dilation coefficient along the geodesic".into(),
        ));
    }
    Ok(JuliaTarget {
        y: BidiscBoundaryPoint::new(coords[0], coords[1])?,
        lambda,
        determined,
    })
}

/// Containment statistics at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusCheck {
    pub radius: f64,
    /// Samples that landed in the source set and were mapped.
    pub samples: usize,
    pub violations: usize,
    /// Largest `h_j(f_j(p)) - lambda_j R` over samples and proper factors.
    pub worst_slack: f64,
}

/// Result of [`verify_julia`].
#[derive(Debug, Clone, PartialEq)]
pub struct JuliaCertificate {
    pub x: BidiscBoundaryPoint,
    pub target: JuliaTarget,
    pub lambda_g: f64,
    pub radii: Vec<RadiusCheck>,
}

impl JuliaCertificate {
    pub fn violations(&self) -> usize {
        self.radii.iter().map(|r| r.violations).sum()
    }

    pub fn worst_slack(&self) -> f64 {
        self.radii.iter().map(|r| r.worst_slack).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn passed(&self) -> bool {
        self.violations() == 0
    }
}

fn mix_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x2545_F491_4F6C_DD1D).wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Samples the geodesic's Busemann sublevel sets of the given radii, maps
/// them through `f` and counts samples leaving the target sublevel
/// `E(y1, lambda1 R) x E(y2, lambda2 R)` by more than `slack` (normally
/// [`JULIA_SLACK`]).
pub fn verify_julia(
    f: &BidiscMap,
    geodesic: &ComplexGeodesic,
    radii: &[f64],
    samples_per_radius: usize,
    seed: u64,
    slack: f64,
    options: &LimitOptions,
) -> Result<JuliaCertificate> {
    let target = julia_target(f, geodesic, options)?;
    let lambda_g = geodesic.lambda()?;
    let mut checks = Vec::with_capacity(radii.len());
    for (i, &radius) in radii.iter().enumerate() {
        let source = BusemannSublevel::of_geodesic(geodesic, radius)?;
        let image = BusemannSublevel::new(target.y, radius, target.lambda[0], target.lambda[1])?;
        let excesses = par_samples(samples_per_radius, mix_seed(seed, i as u64), |rng| {
            sample_sublevel_member(rng, &source).map(|p| image.excess(f.eval_raw(p.0, p.1)))
        });
        let mapped: Vec<f64> = excesses.into_iter().flatten().collect();
        checks.push(RadiusCheck {
            radius,
            samples: mapped.len(),
            violations: mapped.iter().filter(|&&e| !(e <= slack)).count(),
            worst_slack: mapped.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });
    }
    Ok(JuliaCertificate {
        x: *geodesic.target(),
        target,
        lambda_g,
        radii: checks,
    })
}

/// Whether a curve is g-special and g-restricted for the coordinate device.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Admissibility {
    pub special: bool,
    pub restricted: bool,
}

impl Admissibility {
    pub fn admissible(&self) -> bool {
        self.special && self.restricted
    }
}

/// Checks a curve against a device with Stolz amplitude `m`.
pub fn admissibility(curve: &XCurve, device: &ProjectionDevice, m: f64, options: &LimitOptions) -> Result<Admissibility> {
    Ok(Admissibility {
        special: is_g_special(curve, device, SPECIAL_TOLERANCE, options)?.special,
        restricted: is_g_restricted(curve, device, m, options)?.restricted,
    })
}

/// Denominator `1 - conj(x_j) z_j`, or `1 - z_j` at an interior coordinate.
fn rotated_gap(x: C64, unimodular: bool, z: C64) -> C64 {
    let one = C64::new(1.0, 0.0);
    if unimodular {
        one - x.conj() * z
    } else {
        one - z
    }
}

/// Incremental ratio limits along one curve.
#[derive(Debug, Clone, PartialEq)]
pub struct JwcCurve {
    pub label: String,
    /// Limits of `f_j`.
    pub component_limit: [ComplexLimit; 2],
    /// Limits of `(y_j - f_j) / (x_id - pi(z))`, rotated to `x = y = (1, 1)`.
    pub first: [ComplexLimit; 2],
    /// Limits of `(y_j - f_j) / (x_other - z_other)`, rotated likewise.
    pub second: [ComplexLimit; 2],
}

/// Result of [`jwc_ratios`].
#[derive(Debug, Clone, PartialEq)]
pub struct JwcReport {
    pub target: JuliaTarget,
    pub lambda_g: f64,
    /// `lambda_j min(1, lambda_g)`.
    pub expected_first: [f64; 2],
    /// `lambda_j / max(1, lambda_g)`.
    pub expected_second: [f64; 2],
    pub curves: Vec<JwcCurve>,
}

fn relative_deviation(value: C64, expected: f64) -> f64 {
    if expected == 0.0 {
        value.norm()
    } else {
        (value - expected).norm() / expected.abs()
    }
}

impl JwcReport {
    /// Largest relative deviation of the ratio limits from the expected
    /// values over curves and components.
    pub fn max_ratio_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for curve in &self.curves {
            for j in 0..2 {
                worst = worst
                    .max(relative_deviation(curve.first[j].value(), self.expected_first[j]))
                    .max(relative_deviation(curve.second[j].value(), self.expected_second[j]));
            }
        }
        worst
    }

    /// Largest Euclidean distance of the component limits from `y`.
    pub fn max_limit_deviation(&self) -> f64 {
        let y = [self.target.y.x1(), self.target.y.x2()];
        self.curves
            .iter()
            .flat_map(|c| (0..2).map(move |j| (c.component_limit[j].value() - y[j]).norm()))
            .fold(0.0, f64::max)
    }

    /// Largest relative deviation of `first / second` from `lambda_g`.
    pub fn max_quotient_deviation(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for curve in &self.curves {
            for j in 0..2 {
                let quotient = curve.first[j].value() / curve.second[j].value();
                worst = worst.max(relative_deviation(quotient, self.lambda_g));
            }
        }
        worst
    }

    pub fn all_converged(&self) -> bool {
        self.curves
            .iter()
            .all(|c| (0..2).all(|j| c.first[j].is_converged() && c.second[j].is_converged()))
    }

    /// Passes when every limit converged, ratios match within `relative`
    /// and component limits equal `y` within `1e-6`.
    pub fn passed(&self, relative: f64) -> bool {
        self.all_converged() && self.max_ratio_deviation() <= relative && self.max_limit_deviation() <= 1e-6
    }
}

/// Estimates both incremental ratio limits of `f` along each curve and
/// compares them with `lambda_j min(1, lambda_g)` and
/// `lambda_j / max(1, lambda_g)`. Every curve must be g-special and
/// g-restricted with Stolz amplitude `m` for the coordinate device.
pub fn jwc_ratios(
    f: &BidiscMap,
    geodesic: &ComplexGeodesic,
    curves: &[XCurve],
    m: f64,
    options: &LimitOptions,
) -> Result<JwcReport> {
    let target = julia_target(f, geodesic, options)?;
    if target.lambda.iter().any(|l| l.is_infinite()) {
        return Err(Error::HypothesisViolated(
            "incremental ratios need finite coefficients for both components".into(),
        ));
    }
    let lambda_g = geodesic.lambda()?;
    let device = ProjectionDevice::new(geodesic.clone(), DeviceKind::Coordinate)?;
    let x = *geodesic.target();
    let id = geodesic.orientation().identity_index();
    let other = 3 - id;
    let y = [target.y.x1(), target.y.x2()];
    let mut reports = Vec::with_capacity(curves.len());
    for curve in curves {
        if !admissibility(curve, &device, m, options)?.admissible() {
            return Err(Error::CurveNotAdmissible {
                label: curve.label().to_string(),
            });
        }
        let limits = |j: usize| {
            let component = f.component(j + 1);
            let value = radial_limit_complex(
                |t| {
                    let p = curve.at(t);
                    component.eval_raw(p.0, p.1)
                },
                options,
            );
            let coord = |p: (C64, C64), k: usize| if k == 1 { p.0 } else { p.1 };
            let ratio = |denominator_index: usize| {
                radial_limit_complex(
                    |t| {
                        let p = curve.at(t);
                        let numerator = C64::new(1.0, 0.0) - y[j].conj() * component.eval_raw(p.0, p.1);
                        let k = denominator_index;
                        numerator / rotated_gap(x.coord(k), x.is_unimodular(k), coord(p, k))
                    },
                    options,
                )
            };
            (value, ratio(id), ratio(other))
        };
        let (v1, a1, b1) = limits(0);
        let (v2, a2, b2) = limits(1);
        reports.push(JwcCurve {
            label: curve.label().to_string(),
            component_limit: [v1, v2],
            first: [a1, a2],
            second: [b1, b2],
        });
    }
    let expected_first = target.lambda.map(|l| l * lambda_g.min(1.0));
    let expected_second = target.lambda.map(|l| l / lambda_g.max(1.0));
    Ok(JwcReport {
        target,
        lambda_g,
        expected_first,
        expected_second,
        curves: reports,
    })
}

/// Supremum of `|h|` over samples of one Koranyi region.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgBoundRow {
    pub m: f64,
    /// Samples that fell in the Koranyi region.
    pub samples: usize,
    pub sup: f64,
    pub bound: Option<f64>,
}

impl KgBoundRow {
    pub fn within_bound(&self) -> bool {
        self.bound.is_none_or(|b| self.sup <= b)
    }
}

/// Samples `H(x, M)` for each amplitude by rejection from the Busemann
/// sublevel of radius `M^2` (which contains it) and reports `sup |h|`.
pub fn kg_bound_check(
    h: &(dyn Fn((C64, C64)) -> C64 + Sync),
    geodesic: &ComplexGeodesic,
    amplitudes: &[f64],
    samples: usize,
    seed: u64,
    bound: Option<&dyn Fn(f64) -> f64>,
) -> Result<Vec<KgBoundRow>> {
    let mut rows = Vec::with_capacity(amplitudes.len());
    for (i, &m) in amplitudes.iter().enumerate() {
        if !(m > 1.0) {
            return Err(Error::InvalidParameter(format!("Koranyi amplitude must exceed 1, got {m}")));
        }
        let superset = BusemannSublevel::of_geodesic(geodesic, m * m)?;
        let threshold = m.ln();
        let values = par_samples(samples, mix_seed(seed, i as u64), |rng| {
            let p = sample_sublevel_member(rng, &superset)?;
            match koranyi_value_closed_form(geodesic, p) {
                Ok(v) if v < threshold => Some(h(p).norm()),
                _ => None,
            }
        });
        let inside: Vec<f64> = values.into_iter().flatten().collect();
        rows.push(KgBoundRow {
            m,
            samples: inside.len(),
            sup: inside.iter().copied().fold(0.0, f64::max),
            bound: bound.map(|b| b(m)),
        });
    }
    Ok(rows)
}

/// Bound check for the four incremental ratios of `f`, against
/// `2 lambda_j M^2 c_g` with `c_g = (1 + |g(0)|) / (1 - |g(0)|)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JwcBoundReport {
    pub c_g: f64,
    pub lambda: [f64; 2],
    /// Rows for the first ratio of components 1 and 2.
    pub first: [Vec<KgBoundRow>; 2],
    /// Rows for the second ratio of components 1 and 2.
    pub second: [Vec<KgBoundRow>; 2],
}

impl JwcBoundReport {
    pub fn passed(&self) -> bool {
        self.first.iter().chain(self.second.iter()).flatten().all(KgBoundRow::within_bound)
    }
}

pub fn jwc_bound_check(
    f: &BidiscMap,
    geodesic: &ComplexGeodesic,
    amplitudes: &[f64],
    samples: usize,
    seed: u64,
    options: &LimitOptions,
) -> Result<JwcBoundReport> {
    let target = julia_target(f, geodesic, options)?;
    let g0 = geodesic.g().eval_raw(C64::new(0.0, 0.0)).norm();
    let c_g = (1.0 + g0) / (1.0 - g0);
    let x = *geodesic.target();
    let id = geodesic.orientation().identity_index();
    let other = 3 - id;
    let y = [target.y.x1(), target.y.x2()];
    let coord = |p: (C64, C64), k: usize| if k == 1 { p.0 } else { p.1 };
    let mut first: [Vec<KgBoundRow>; 2] = Default::default();
    let mut second: [Vec<KgBoundRow>; 2] = Default::default();
    for j in 0..2 {
        let component = f.component(j + 1);
        let lambda = target.lambda[j];
        let bound = move |m: f64| 2.0 * lambda * m * m * c_g;
        for (slot, k) in [(&mut first[j], id), (&mut second[j], other)] {
            let h = |p: (C64, C64)| {
                (C64::new(1.0, 0.0) - y[j].conj() * component.eval_raw(p.0, p.1))
                    / rotated_gap(x.coord(k), x.is_unimodular(k), coord(p, k))
            };
            *slot = kg_bound_check(&h, geodesic, amplitudes, samples, mix_seed(seed, (2 * j + k) as u64), Some(&bound))?;
        }
    }
    Ok(JwcBoundReport {
        c_g,
        lambda: target.lambda,
        first,
        second,
    })
}

/// Limit of the test function along one curve of a Lindelöf family.
#[derive(Debug, Clone, PartialEq)]
pub struct LindelofCurve {
    pub label: String,
    pub admissibility: Admissibility,
    pub limit: ComplexLimit,
    /// Distance of the limit from the reference value.
    pub deviation: f64,
}

/// Result of [`lindelof_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct LindelofReport {
    pub reference: C64,
    pub reference_label: String,
    pub tolerance: f64,
    pub admissible: Vec<LindelofCurve>,
    pub inadmissible: Vec<LindelofCurve>,
}

impl LindelofReport {
    pub fn max_admissible_deviation(&self) -> f64 {
        self.admissible.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    /// Largest deviation over inadmissible curves with a converged limit.
    pub fn max_inadmissible_deviation(&self) -> f64 {
        self.inadmissible
            .iter()
            .filter(|c| c.limit.is_converged())
            .map(|c| c.deviation)
            .fold(0.0, f64::max)
    }

    /// Every admissible curve converged to the reference within tolerance.
    pub fn passed(&self) -> bool {
        self.admissible
            .iter()
            .all(|c| c.limit.is_converged() && c.deviation <= self.tolerance)
    }
}

/// Minimum number of admissible curves in a Lindelöf family.
pub const MIN_ADMISSIBLE: usize = 5;

/// Compares the limits of `h` along the admissible curves of a family
/// (g-special and g-restricted with amplitude `m` for the device). The
/// reference is the first admissible curve with a converged limit.
pub fn lindelof_check(
    h: &(dyn Fn((C64, C64)) -> C64 + Sync),
    device: &ProjectionDevice,
    family: &[XCurve],
    m: f64,
    tolerance: f64,
    options: &LimitOptions,
) -> Result<LindelofReport> {
    let mut curves = Vec::with_capacity(family.len());
    for curve in family {
        let admissibility = admissibility(curve, device, m, options)?;
        let limit = radial_limit_complex(|t| h(curve.at(t)), options);
        curves.push((curve.label().to_string(), admissibility, limit));
    }
    let count = curves.iter().filter(|c| c.1.admissible()).count();
    if count < MIN_ADMISSIBLE {
        return Err(Error::HypothesisViolated(format!(
            "family has {count} admissible curves, at least {MIN_ADMISSIBLE} are required"
        )));
    }
    let (reference_label, reference) = curves
        .iter()
        .find(|c| c.1.admissible() && c.2.is_converged())
        .map(|c| (c.0.clone(), c.2.value()))
        .ok_or(Error::NoConvergedReference)?;
    let mut admissible = Vec::new();
    let mut inadmissible = Vec::new();
    for (label, admissibility, limit) in curves {
        let entry = LindelofCurve {
            deviation: (limit.value() - reference).norm(),
            label,
            admissibility,
            limit,
        };
        if admissibility.admissible() {
            admissible.push(entry);
        } else {
            inadmissible.push(entry);
        }
    }
    Ok(LindelofReport {
        reference,
        reference_label,
        tolerance,
        admissible,
        inadmissible,
    })
}
