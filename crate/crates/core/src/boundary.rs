//! Quantities defined by boundary limits: dilation coefficients, Busemann
//! functions and their sublevel sets, horosphere estimators and Koranyi
//! regions.

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::disc::{boundary_gap, distance_from_origin_raw, horocycle_value_raw};
use crate::error::{Error, Result};
use crate::geometry::{kobayashi_distance_raw, BidiscBoundaryPoint, ComplexGeodesic, Orientation};
use crate::holomap::{BidiscExpr, DiscMap};
use crate::limits::{radial_limit, schedule_point, LimitEstimate, LimitOptions, LimitStatus};
use crate::BidiscPoint;

/// Gap `1 - |g(t sigma)|` at `t = 1 - 2^-40` above which the radial image
/// is considered bounded away from the circle.
const FLAT_TARGET_GAP: f64 = 1e-6;

fn settle(estimate: LimitEstimate, quantity: &'static str) -> Result<f64> {
    match estimate.status {
        LimitStatus::Converged | LimitStatus::Infinite => Ok(estimate.value),
        LimitStatus::NotConverged => Err(Error::NotConverged {
            quantity,
            last_delta: estimate.last_delta,
        }),
    }
}

/// Boundary dilation coefficient of an arbitrary holomorphic self-map of the
/// disc at `sigma`: `lim (1 - |g(t sigma)|) / (1 - t)`, or `+inf` when the
/// radial image stays away from the circle.
pub fn dilation_of(g: impl Fn(C64) -> C64, sigma: C64, options: &LimitOptions) -> Result<f64> {
    let far = g(sigma * schedule_point(40));
    if !far.norm().is_finite() || 1.0 - far.norm() > FLAT_TARGET_GAP {
        return Ok(f64::INFINITY);
    }
    let estimate = radial_limit(|t| (1.0 - g(sigma * t).norm()) / (1.0 - t), options);
    let value = settle(estimate, "boundary dilation coefficient")?;
    Ok(if value.is_infinite() { f64::INFINITY } else { value })
}

/// Boundary dilation coefficient `lambda_g` of a disc map at `sigma`.
pub fn dilation_disc(g: &DiscMap, sigma: C64, options: &LimitOptions) -> Result<f64> {
    dilation_of(|z| g.eval_raw(z), sigma, options)
}

fn log_ratio_limit(mut h: impl FnMut(f64) -> f64, options: &LimitOptions, quantity: &'static str) -> Result<f64> {
    let estimate = radial_limit(&mut h, options);
    let half_log = settle(estimate, quantity)?;
    Ok(if half_log == f64::INFINITY {
        f64::INFINITY
    } else {
        (2.0 * half_log).exp()
    })
}

/// The `phi_g`-boundary dilation coefficient of a component `f_j`:
/// `1/2 log lambda = lim [K(0, phi_g(t sigma)) - omega(0, f_j(phi_g(t sigma)))]`.
pub fn phi_dilation(f: &BidiscExpr, geodesic: &ComplexGeodesic, options: &LimitOptions) -> Result<f64> {
    phi_dilation_of(|p| f.eval_raw(p.0, p.1), |t| geodesic.ray_raw(t), options)
}

/// [`phi_dilation`] for an arbitrary component and ray parameterization.
pub fn phi_dilation_of(
    f: impl Fn((C64, C64)) -> C64,
    ray: impl Fn(f64) -> (C64, C64),
    options: &LimitOptions,
) -> Result<f64> {
    let origin = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    log_ratio_limit(
        |t| {
            let p = ray(t);
            kobayashi_distance_raw(origin, p) - distance_from_origin_raw(f(p))
        },
        options,
        "geodesic dilation coefficient",
    )
}

/// Abate's dilation coefficient of `f_j` at `x`, along `t -> t x`.
pub fn abate_alpha(f: &BidiscExpr, x: &BidiscBoundaryPoint, options: &LimitOptions) -> Result<f64> {
    phi_dilation_of(|p| f.eval_raw(p.0, p.1), |t| (x.x1() * t, x.x2() * t), options)
}

/// Busemann function of the geodesic at `p`, computed as a limit along the
/// geodesic ray. The ray parameter is rescaled so that the schedule starts
/// closer to the boundary than `p` and `phi_g(0)`.
pub fn busemann_value(geodesic: &ComplexGeodesic, p: &BidiscPoint, options: &LimitOptions) -> Result<f64> {
    busemann_value_raw(geodesic, p.coords(), options)
}

pub fn busemann_value_raw(geodesic: &ComplexGeodesic, p: (C64, C64), options: &LimitOptions) -> Result<f64> {
    let base = geodesic.base_point();
    let scale = [p.0, p.1, base.0, base.1]
        .iter()
        .map(|&z| boundary_gap(z))
        .fold(1.0, f64::min);
    let estimate = radial_limit(
        |t| {
            let r = 1.0 - (1.0 - t) * scale;
            let q = geodesic.ray_raw(r);
            kobayashi_distance_raw(p, q) - kobayashi_distance_raw(base, q)
        },
        options,
    );
    settle(estimate, "Busemann function")
}

/// Closed form of the Busemann function:
/// `1/2 log max(h_{sigma}(p_id), h_{x_other}(p_other) / lambda_g)`, where the
/// second term is dropped when the other coordinate of the target is
/// interior or `lambda_g` is infinite.
pub fn busemann_closed_form(geodesic: &ComplexGeodesic, p: (C64, C64)) -> Result<f64> {
    let x = geodesic.target();
    let id = geodesic.orientation().identity_index();
    let other = 3 - id;
    let coord = |j: usize| if j == 1 { p.0 } else { p.1 };
    let mut level = horocycle_value_raw(x.coord(id), coord(id));
    let lambda = geodesic.lambda()?;
    if x.is_unimodular(other) && lambda.is_finite() {
        level = level.max(horocycle_value_raw(x.coord(other), coord(other)) / lambda);
    }
    Ok(0.5 * level.ln())
}

/// A product of horocycles `E(x1, lambda1 R) x E(x2, lambda2 R)`, where a
/// factor is the whole disc when the centre coordinate is interior or the
/// coefficient is infinite. Stored through the effective radius of each
/// factor so that the different `(R, lambda)` representations of the same
/// set compare equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BusemannSublevel {
    center: BidiscBoundaryPoint,
    /// `lambda_j R`, or `+inf` for a factor equal to the disc.
    radii: [f64; 2],
}

impl BusemannSublevel {
    pub fn new(center: BidiscBoundaryPoint, radius: f64, lambda1: f64, lambda2: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidParameter(format!("sublevel radius must be positive, got {radius}")));
        }
        let mut radii = [0.0; 2];
        for (j, lambda) in [(1, lambda1), (2, lambda2)] {
            if !(lambda > 0.0) {
                return Err(Error::InvalidParameter(format!("coefficient lambda{j} must be positive")));
            }
            radii[j - 1] = if center.is_unimodular(j) && lambda.is_finite() {
                lambda * radius
            } else {
                f64::INFINITY
            };
        }
        Ok(Self { center, radii })
    }

    /// The sublevel `{B <= 1/2 log R}` of the geodesic's Busemann function.
    pub fn of_geodesic(geodesic: &ComplexGeodesic, radius: f64) -> Result<Self> {
        let lambda = geodesic.lambda()?;
        let (l1, l2) = match geodesic.orientation() {
            Orientation::FirstIdentity => (1.0, lambda),
            Orientation::SecondIdentity => (lambda, 1.0),
        };
        Self::new(*geodesic.target(), radius, l1, l2)
    }

    pub fn center(&self) -> &BidiscBoundaryPoint {
        &self.center
    }

    /// Effective horocycle radius of factor `j`.
    pub fn factor_radius(&self, j: usize) -> f64 {
        self.radii[j - 1]
    }

    /// Representation normalized to `lambda1 = 1`: `(R lambda1, lambda2 / lambda1)`.
    pub fn canonical(&self) -> (f64, f64) {
        (self.radii[0], self.radii[1] / self.radii[0])
    }

    /// Largest excess `h_j(p_j) - lambda_j R` over the proper factors;
    /// non-positive exactly for members.
    pub fn excess(&self, p: (C64, C64)) -> f64 {
        let mut worst = f64::NEG_INFINITY;
        for (j, z) in [(1, p.0), (2, p.1)] {
            let r = self.radii[j - 1];
            if r.is_finite() {
                worst = worst.max(horocycle_value_raw(self.center.coord(j), z) - r);
            }
        }
        worst
    }

    pub fn contains_raw(&self, p: (C64, C64)) -> bool {
        self.excess(p) <= 0.0
    }

    pub fn contains(&self, p: &BidiscPoint) -> bool {
        self.contains_raw(p.coords())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HorosphereMode {
    /// Upper limit over approach directions.
    Small,
    /// Lower limit over approach directions.
    Big,
}

/// Verdict of [`horosphere_estimate`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HorosphereEstimate {
    pub member: bool,
    pub low_confidence: bool,
    /// Extreme of the directional limits of `K(p, w) - K(0, w)`.
    pub value: f64,
    pub directional: Vec<f64>,
}

/// One approach curve `s -> w(s)` towards a boundary point, with `s -> 0+`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Approach {
    rates: [f64; 2],
    scales: [f64; 2],
    angles: [f64; 2],
}

fn approach_family(count: usize) -> Vec<Approach> {
    use std::f64::consts::PI;
    let mut family = vec![Approach {
        rates: [1.0, 1.0],
        scales: [1.0, 1.0],
        angles: [0.0, 0.0],
    }];
    for beta in [0.5, 2.0] {
        family.push(Approach {
            rates: [1.0, beta],
            scales: [1.0, 1.0],
            angles: [0.0, 0.0],
        });
        family.push(Approach {
            rates: [beta, 1.0],
            scales: [1.0, 1.0],
            angles: [0.0, 0.0],
        });
    }
    for (a1, a2) in [(PI / 4.0, 0.0), (0.0, -PI / 4.0), (PI / 3.0, -PI / 3.0), (-PI / 3.0, PI / 4.0)] {
        family.push(Approach {
            rates: [1.0, 1.0],
            scales: [1.0, 1.0],
            angles: [a1, a2],
        });
    }
    for (c1, c2) in [(2.0, 1.0), (1.0, 3.0), (0.5, 1.0)] {
        family.push(Approach {
            rates: [1.0, 1.0],
            scales: [c1, c2],
            angles: [0.0, 0.0],
        });
    }
    let base = family.len();
    let mut k = 0;
    while family.len() < count {
        let mut extra = family[k % base];
        let turn = 0.37 * (1 + k / base) as f64;
        extra.angles = [extra.angles[0] + turn, extra.angles[1] - turn].map(|a| a.clamp(-1.3, 1.3));
        family.push(extra);
        k += 1;
    }
    family.truncate(count.max(8));
    family
}

fn approach_point(y: &BidiscBoundaryPoint, a: &Approach, s: f64) -> (C64, C64) {
    let coord = |j: usize| {
        let yj = y.coord(j);
        let step = a.scales[j - 1] * s.powf(a.rates[j - 1]);
        if y.is_unimodular(j) {
            yj * (C64::new(1.0, 0.0) - C64::from_polar(step, a.angles[j - 1]))
        } else {
            // shrink towards the interior value along a fixed direction
            let toward = C64::from_polar(1.0, a.angles[j - 1]) * (1.0 - yj.norm());
            yj + toward * step.min(1.0) * 0.5
        }
    };
    (coord(1), coord(2))
}

/// Estimates whether `p` lies in the small (`lim sup`) or big (`lim inf`)
/// horosphere of centre `y` and radius `R` from a finite family of approach
/// curves; membership is strict.
pub fn horosphere_estimate(
    y: &BidiscBoundaryPoint,
    radius: f64,
    p: (C64, C64),
    mode: HorosphereMode,
    directions: usize,
    options: &LimitOptions,
) -> Result<HorosphereEstimate> {
    if directions < 8 {
        return Err(Error::InvalidParameter("at least 8 approach directions are required".into()));
    }
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter("horosphere radius must be positive".into()));
    }
    let origin = (C64::new(0.0, 0.0), C64::new(0.0, 0.0));
    let scale = boundary_gap(p.0).min(boundary_gap(p.1));
    let mut directional = Vec::with_capacity(directions);
    let mut unsettled = false;
    for approach in approach_family(directions) {
        // a coordinate moving like s^rate must start within the gap of p,
        // otherwise the schedule sees the transient before the crossover
        let start = approach.rates.iter().map(|&r| scale.powf(1.0 / r)).fold(scale, f64::min);
        let estimate = radial_limit(
            |t| {
                let w = approach_point(y, &approach, (1.0 - t) * start);
                kobayashi_distance_raw(p, w) - kobayashi_distance_raw(origin, w)
            },
            options,
        );
        unsettled |= estimate.status == LimitStatus::NotConverged;
        directional.push(estimate.value);
    }
    let value = match mode {
        HorosphereMode::Small => directional.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        HorosphereMode::Big => directional.iter().copied().fold(f64::INFINITY, f64::min),
    };
    let threshold = 0.5 * radius.ln();
    Ok(HorosphereEstimate {
        member: value < threshold,
        low_confidence: unsettled || (value - threshold).abs() < 1e-4,
        value,
        directional,
    })
}

/// The Koranyi expression `B(p) + K(phi_g(0), p)`.
pub fn koranyi_value(geodesic: &ComplexGeodesic, p: (C64, C64), options: &LimitOptions) -> Result<f64> {
    let b = busemann_value_raw(geodesic, p, options)?;
    Ok(b + kobayashi_distance_raw(geodesic.base_point(), p))
}

/// Strict membership in the Koranyi region `H(x, M)` of the geodesic.
pub fn koranyi_contains(geodesic: &ComplexGeodesic, m: f64, p: &BidiscPoint, options: &LimitOptions) -> Result<bool> {
    if !(m > 1.0) {
        return Err(Error::InvalidParameter(format!("Koranyi amplitude must exceed 1, got {m}")));
    }
    Ok(koranyi_value(geodesic, p.coords(), options)? < m.ln())
}

/// Koranyi expression through the closed-form Busemann function; used where
/// many points have to be classified.
pub fn koranyi_value_closed_form(geodesic: &ComplexGeodesic, p: (C64, C64)) -> Result<f64> {
    Ok(busemann_closed_form(geodesic, p)? + kobayashi_distance_raw(geodesic.base_point(), p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::BidiscExpr;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one_one() -> BidiscBoundaryPoint {
        BidiscBoundaryPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap()
    }

    fn opts() -> LimitOptions {
        LimitOptions::default()
    }

    #[test]
    fn disc_dilation_examples() {
        let one = c(1.0, 0.0);
        assert_relative_eq!(dilation_disc(&DiscMap::identity(), one, &opts()).unwrap(), 1.0, max_relative = 1e-8);
        assert_relative_eq!(dilation_disc(&DiscMap::power(2).unwrap(), one, &opts()).unwrap(), 2.0, max_relative = 1e-8);
        let theta = DiscMap::mobius(c(0.5, 0.0), 0.0).unwrap();
        assert_relative_eq!(dilation_disc(&theta, one, &opts()).unwrap(), 3.0, max_relative = 1e-8);
        let flat = DiscMap::constant(c(0.3, 0.0)).unwrap();
        assert_eq!(dilation_disc(&flat, one, &opts()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn geodesic_dilation_examples() {
        let diag = ComplexGeodesic::diagonal(one_one()).unwrap();
        let z1 = BidiscExpr::Coord(1);
        assert_relative_eq!(phi_dilation(&z1, &diag, &opts()).unwrap(), 1.0, max_relative = 1e-7);
        let sq = BidiscExpr::apply(DiscMap::power(2).unwrap(), BidiscExpr::Coord(1));
        assert_relative_eq!(phi_dilation(&sq, &diag, &opts()).unwrap(), 2.0, max_relative = 1e-7);
        let prod = BidiscExpr::product(BidiscExpr::Coord(1), BidiscExpr::Coord(2));
        assert_relative_eq!(phi_dilation(&prod, &diag, &opts()).unwrap(), 2.0, max_relative = 1e-7);
        let constant = BidiscExpr::Constant(c(0.2, 0.0));
        assert_eq!(phi_dilation(&constant, &diag, &opts()).unwrap(), f64::INFINITY);
    }

    #[test]
    fn abate_examples() {
        let z1 = BidiscExpr::Coord(1);
        assert_relative_eq!(abate_alpha(&z1, &one_one(), &opts()).unwrap(), 1.0, max_relative = 1e-7);
        let sq = BidiscExpr::apply(DiscMap::power(2).unwrap(), BidiscExpr::Coord(1));
        assert_relative_eq!(abate_alpha(&sq, &one_one(), &opts()).unwrap(), 2.0, max_relative = 1e-7);
        let flat = BidiscBoundaryPoint::new(c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        assert_relative_eq!(abate_alpha(&z1, &flat, &opts()).unwrap(), 1.0, max_relative = 1e-7);
    }

    #[test]
    fn busemann_examples() {
        let diag = ComplexGeodesic::diagonal(one_one()).unwrap();
        let zero = busemann_value_raw(&diag, (c(0.0, 0.0), c(0.0, 0.0)), &opts()).unwrap();
        assert!(zero.abs() < 1e-8);
        let half = busemann_value_raw(&diag, (c(0.5, 0.0), c(0.5, 0.0)), &opts()).unwrap();
        assert_relative_eq!(half, -0.5 * 3f64.ln(), max_relative = 1e-7);
    }

    #[test]
    fn busemann_near_the_boundary() {
        let diag = ComplexGeodesic::diagonal(one_one()).unwrap();
        let p = (c(1.0 - 1e-7, 0.0), c(0.2, 0.3));
        let limit = busemann_value_raw(&diag, p, &opts()).unwrap();
        let closed = busemann_closed_form(&diag, p).unwrap();
        assert!((limit - closed).abs() < 1e-6, "{limit} vs {closed}");
    }

    #[test]
    fn sublevel_examples() {
        let s = BusemannSublevel::new(one_one(), 2.0, 1.0, 1.0).unwrap();
        assert!(s.contains_raw((c(0.0, 0.0), c(0.0, 0.0))));
        let s = BusemannSublevel::new(one_one(), 0.5, 1.0, 1.0).unwrap();
        assert!(!s.contains_raw((c(0.0, 0.0), c(0.0, 0.0))));
        let flat = BidiscBoundaryPoint::new(c(1.0, 0.0), c(0.3, 0.0)).unwrap();
        let s = BusemannSublevel::new(flat, 1.0, 1.0, f64::INFINITY).unwrap();
        assert!(s.contains_raw((c(0.2, 0.0), c(0.99, 0.0))));
        assert!(s.contains_raw((c(0.2, 0.0), c(-0.99, 0.0))));
        assert!(!s.contains_raw((c(-0.2, 0.0), c(0.0, 0.0))));
        let a = BusemannSublevel::new(one_one(), 2.0, 1.0, 3.0).unwrap();
        let b = BusemannSublevel::new(one_one(), 1.0, 2.0, 6.0).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.canonical(), (2.0, 3.0));
    }

    #[test]
    fn horosphere_examples() {
        let est = horosphere_estimate(&one_one(), 2.0, (c(0.0, 0.0), c(0.0, 0.0)), HorosphereMode::Small, 8, &opts()).unwrap();
        assert!(est.member && !est.low_confidence, "{est:?}");
        assert!(est.value.abs() < 1e-6);
        assert!(horosphere_estimate(&one_one(), 2.0, (c(0.0, 0.0), c(0.0, 0.0)), HorosphereMode::Small, 4, &opts()).is_err());
    }

    #[test]
    fn koranyi_examples() {
        let diag = ComplexGeodesic::diagonal(one_one()).unwrap();
        for m in [1.01, 2.0, 10.0] {
            let o = BidiscPoint::origin();
            assert!(koranyi_contains(&diag, m, &o, &opts()).unwrap());
            let p = BidiscPoint::new(c(0.9, 0.0), c(0.9, 0.0)).unwrap();
            assert!(koranyi_contains(&diag, m, &p, &opts()).unwrap());
        }
        let eps = 1e-4;
        let p = BidiscPoint::new(c(1.0 - eps, 0.0), C64::from_polar(1.0 - eps, 0.3)).unwrap();
        assert!(!koranyi_contains(&diag, 2.0, &p, &opts()).unwrap());
    }
}
