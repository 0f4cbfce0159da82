//! Iteration of fixed-point-free self-maps of the bidisc: orbits, target
//! sets, Hervé's classification into first, second and third type, and the
//! resulting sets of Wolff and generalized Wolff points.

use std::fmt;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::boundary::{dilation_of, BusemannSublevel};
use crate::error::{Error, Result};
use crate::geometry::{BidiscBoundaryPoint, ComplexGeodesic};
use crate::holomap::{BidiscMap, CLOSED_RADIUS};
use crate::limits::{radial_limit, LimitOptions, LimitStatus};
use crate::sampling::{par_samples, sample_sublevel_member};
use crate::syntax::format_complex;

/// Largest orbit length accepted by [`iterate`].
pub const MAX_ITERATES: usize = 1_000_000;
/// Step below which an orbit or slice iteration counts as stationary.
pub const STATIONARY_STEP: f64 = 1e-10;
/// Maximal spread of slice Wolff points still counted as independent of the
/// slice parameter.
pub const INDEPENDENCE_TOLERANCE: f64 = 1e-6;
/// Half width of the band around 1 where `k2` is reported as borderline.
pub const K2_DEAD_ZONE: f64 = 1e-4;
/// Excess over a sublevel that still counts as containment.
pub const CONTAINMENT_SLACK: f64 = 1e-9;

const SLICE_ITERATIONS: usize = 20_000;
const SLICE_STEP: f64 = 1e-15;
const BOUNDARY_GAP: f64 = 1e-9;

/// Orbit `z0, f(z0), ..., f^n(z0)`; iterates may reach the closed bidisc
/// through rounding but never leave it.
pub fn iterate(f: &BidiscMap, z0: (C64, C64), n: usize) -> Result<Vec<(C64, C64)>> {
    if n > MAX_ITERATES {
        return Err(Error::InvalidParameter(format!("at most {MAX_ITERATES} iterates, got {n}")));
    }
    let mut orbit = Vec::with_capacity(n + 1);
    orbit.push(z0);
    let mut z = z0;
    for index in 1..=n {
        z = f.eval_raw(z.0, z.1);
        if !(z.0.norm() <= CLOSED_RADIUS && z.1.norm() <= CLOSED_RADIUS) {
            return Err(Error::DomainEscape { index });
        }
        orbit.push(z);
    }
    Ok(orbit)
}

/// An accumulation point estimated from orbit tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cluster {
    pub center: (C64, C64),
    pub members: usize,
}

fn pair_distance(a: (C64, C64), b: (C64, C64)) -> f64 {
    ((a.0 - b.0).norm_sqr() + (a.1 - b.1).norm_sqr()).sqrt()
}

/// Clusters the last tenth of each orbit at tolerance `cluster_tol`. Fails
/// when an orbit becomes stationary at an interior point.
pub fn target_set(f: &BidiscMap, seeds: &[(C64, C64)], n: usize, cluster_tol: f64) -> Result<Vec<Cluster>> {
    if n < 10 {
        return Err(Error::InvalidParameter("target sets need at least 10 iterates".into()));
    }
    let orbits: Vec<Result<Vec<(C64, C64)>>> = seeds.par_iter().map(|&z| iterate(f, z, n)).collect();
    let mut clusters: Vec<(C64, C64, usize)> = Vec::new();
    for (seed, orbit) in orbits.into_iter().enumerate() {
        let orbit = orbit?;
        let last = orbit[n];
        let step = pair_distance(last, orbit[n - 1]);
        if step < STATIONARY_STEP && last.0.norm().max(last.1.norm()) < 1.0 - 1e-6 {
            return Err(Error::InteriorFixedPoint { seed });
        }
        for &p in &orbit[n - n / 10..] {
            match clusters
                .iter_mut()
                .find(|c| pair_distance((c.0 / c.2 as f64, c.1 / c.2 as f64), p) <= cluster_tol)
            {
                Some(c) => {
                    c.0 += p.0;
                    c.1 += p.1;
                    c.2 += 1;
                }
                None => clusters.push((p.0, p.1, 1)),
            }
        }
    }
    Ok(clusters
        .into_iter()
        .map(|(a, b, m)| Cluster {
            center: (a / m as f64, b / m as f64),
            members: m,
        })
        .collect())
}

/// Outcome of the damped iteration on one slice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SliceOutcome {
    /// Interior fixed point, polished by Newton's method.
    Interior(C64),
    /// The iteration escaped to this point of the circle.
    Boundary(C64),
    /// Neither converged nor escaped.
    Stalled { last: C64 },
}

/// Solves `x = f_j(x, y)` (for `j = 1`, or `w = f_2(y, w)` for `j = 2`) by
/// the damped iteration `x <- (x + f_j)/2` from 0, with a Newton polish on
/// interior limits.
pub fn solve_slice(f: &BidiscMap, j: usize, y: C64) -> SliceOutcome {
    let component = f.component(j);
    let eval = |x: C64| if j == 1 { component.eval_raw(x, y) } else { component.eval_raw(y, x) };
    let mut x = C64::new(0.0, 0.0);
    let mut step = f64::INFINITY;
    for _ in 0..SLICE_ITERATIONS {
        let next = 0.5 * (x + eval(x));
        step = (next - x).norm();
        x = next;
        if step < SLICE_STEP || (x.norm() >= 1.0 - BOUNDARY_GAP && step < 1e-12) {
            break;
        }
    }
    if 1.0 - x.norm() < 1e-6 && step < 1e-8 {
        return SliceOutcome::Boundary(x / x.norm());
    }
    if step >= 1e-12 {
        return SliceOutcome::Stalled { last: x };
    }
    for _ in 0..3 {
        let (value, d1, d2) = if j == 1 {
            component.jet_raw(x, y)
        } else {
            component.jet_raw(y, x)
        };
        let slope = C64::new(1.0, 0.0) - if j == 1 { d1 } else { d2 };
        if slope.norm() < 1e-12 {
            break;
        }
        x -= (x - value) / slope;
    }
    SliceOutcome::Interior(x)
}

/// Golden-angle spiral grid `0.9 sqrt((k + 1/2)/n) e^{i k golden}`.
pub fn slice_grid(n: usize) -> Vec<C64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|k| C64::from_polar(0.9 * ((k as f64 + 0.5) / n as f64).sqrt(), golden * k as f64))
        .collect()
}

/// Slice behaviour of one component over the grid.
#[derive(Debug, Clone, PartialEq)]
pub enum SliceFamily {
    /// Interior fixed points `F_j(y)` tabulated on the grid.
    FixedPoints(Vec<(C64, C64)>),
    /// Common Wolff point of the slices.
    Wolff(C64),
    /// `f_j` is the coordinate projection; slices are the identity.
    Projection,
}

fn classify_slices(f: &BidiscMap, j: usize, grid: &[C64]) -> Result<SliceFamily> {
    if f.component(j).is_coordinate(j as u8) {
        return Ok(SliceFamily::Projection);
    }
    let outcomes: Vec<SliceOutcome> = grid.par_iter().map(|&y| solve_slice(f, j, y)).collect();
    let mut table = Vec::new();
    let mut wolff = Vec::new();
    for (&y, outcome) in grid.iter().zip(&outcomes) {
        match *outcome {
            SliceOutcome::Interior(x) => table.push((y, x)),
            SliceOutcome::Boundary(tau) => wolff.push(tau),
            SliceOutcome::Stalled { last } => {
                return Err(Error::AmbiguousSlice {
                    component: j,
                    detail: format!("slice at {} neither converged nor escaped (last {})", format_complex(y), format_complex(last)),
                })
            }
        }
    }
    match (table.is_empty(), wolff.is_empty()) {
        (false, true) => Ok(SliceFamily::FixedPoints(table)),
        (true, false) => {
            let spread = wolff.iter().map(|w| (w - wolff[0]).norm()).fold(0.0, f64::max);
            if spread >= INDEPENDENCE_TOLERANCE {
                return Err(Error::AmbiguousSlice {
                    component: j,
                    detail: format!("slice Wolff points spread over {spread:e}"),
                });
            }
            Ok(SliceFamily::Wolff(snap(wolff[0])))
        }
        _ => Err(Error::AmbiguousSlice {
            component: j,
            detail: "some slices have interior fixed points and others escape".into(),
        }),
    }
}

/// Rounds to 12 decimals so that boundary data print cleanly.
fn snap(z: C64) -> C64 {
    let r = |v: f64| {
        let s = (v * 1e12).round() / 1e12;
        if s == 0.0 {
            0.0
        } else {
            s
        }
    };
    C64::new(r(z.re), r(z.im))
}

/// Hervé type of a fixed-point-free self-map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapType {
    /// Both slice families have interior fixed-point functions. `lambda1` is
    /// the dilation of `F1` at `wolff.1`, `lambda2` that of `F2` at `wolff.0`,
    /// where `wolff` holds the Wolff points of `F1 o F2` and `F2 o F1`.
    First { lambda1: f64, lambda2: f64, wolff: (C64, C64) },
    /// One slice family has a common Wolff point `alpha1` (component
    /// `wolff_component`), the other a fixed-point function `F` with boundary
    /// value `alpha2` at `alpha1` and `k2 = lim |F'|` there.
    Second {
        wolff_component: usize,
        alpha1: C64,
        alpha2: C64,
        k2: f64,
        borderline: bool,
    },
    /// Both slice families have common Wolff points.
    Third { gamma1: C64, gamma2: C64 },
    /// Component `projection` is the coordinate projection; `wolff` is the
    /// Wolff point of the other component's slices.
    Degenerate { projection: usize, wolff: C64 },
}

impl MapType {
    pub fn name(&self) -> &'static str {
        match self {
            MapType::First { .. } => "first",
            MapType::Second { .. } => "second",
            MapType::Third { .. } => "third",
            MapType::Degenerate { .. } => "degenerate",
        }
    }
}

/// Result of [`classify_herve`].
#[derive(Debug, Clone, PartialEq)]
pub struct HerveClassification {
    pub map_type: MapType,
    pub slices: [SliceFamily; 2],
}

/// Fixed-point function of component `j`, solved on demand.
fn witness(f: &BidiscMap, j: usize) -> impl Fn(C64) -> C64 + '_ {
    move |y| match solve_slice(f, j, y) {
        SliceOutcome::Interior(x) => x,
        SliceOutcome::Boundary(x) => x,
        SliceOutcome::Stalled { last } => last,
    }
}

/// Wolff point of a fixed-point-free self-map of the disc by iteration.
fn disc_wolff_point(g: impl Fn(C64) -> C64) -> Result<C64> {
    let mut z = C64::new(0.0, 0.0);
    for _ in 0..SLICE_ITERATIONS {
        let next = g(z);
        let step = (next - z).norm();
        z = next;
        if 1.0 - z.norm() < BOUNDARY_GAP && step < 1e-9 {
            return Ok(snap(z / z.norm()));
        }
        if step < SLICE_STEP {
            break;
        }
    }
    if 1.0 - z.norm() < 1e-6 {
        return Ok(snap(z / z.norm()));
    }
    Err(Error::HypothesisViolated(format!(
        "composition of the fixed-point functions has an interior fixed point near {}",
        format_complex(z)
    )))
}

/// `lim |F'(t tau)|` by one-sided Richardson-extrapolated differences along
/// the radius, together with the boundary value of `F` at `tau`.
fn boundary_derivative(big_f: impl Fn(C64) -> C64, tau: C64) -> Result<(f64, C64)> {
    let options = LimitOptions {
        tolerance: 1e-6,
        last_k: 24,
        ..LimitOptions::default()
    };
    let derivative = |t: f64| {
        let x = tau * t;
        let h = 0.125 * (1.0 - t);
        let at = big_f(x);
        let d = |step: f64| (big_f(tau * (t + step)) - at) / (tau * step);
        (2.0 * d(0.5 * h) - d(h)).norm()
    };
    let estimate = radial_limit(derivative, &options);
    if estimate.status != LimitStatus::Converged {
        return Err(Error::NotConverged {
            quantity: "boundary derivative of the fixed-point function",
            last_delta: estimate.last_delta,
        });
    }
    let value = crate::limits::radial_limit_complex(|t| big_f(tau * t), &options);
    Ok((estimate.value.max(0.0), snap(value.value())))
}

/// Classifies `f` on an interior grid of `grid` slice parameters.
pub fn classify_herve(f: &BidiscMap, grid: usize) -> Result<HerveClassification> {
    if grid == 0 {
        return Err(Error::InvalidParameter("the slice grid must not be empty".into()));
    }
    let points = slice_grid(grid);
    let first = classify_slices(f, 1, &points)?;
    let second = classify_slices(f, 2, &points)?;
    let options = LimitOptions::default();
    let map_type = match (&first, &second) {
        (SliceFamily::Projection, SliceFamily::Projection) => {
            return Err(Error::HypothesisViolated("the identity map fixes every point".into()))
        }
        (SliceFamily::Projection, SliceFamily::Wolff(w)) => MapType::Degenerate { projection: 1, wolff: *w },
        (SliceFamily::Wolff(w), SliceFamily::Projection) => MapType::Degenerate { projection: 2, wolff: *w },
        (SliceFamily::Projection, SliceFamily::FixedPoints(_)) | (SliceFamily::FixedPoints(_), SliceFamily::Projection) => {
            return Err(Error::HypothesisViolated(
                "a projection component with fixed-point slices leaves interior fixed points".into(),
            ))
        }
        (SliceFamily::FixedPoints(_), SliceFamily::FixedPoints(_)) => {
            let f1 = witness(f, 1);
            let f2 = witness(f, 2);
            let theta1 = disc_wolff_point(|z| f1(f2(z)))?;
            let theta2 = disc_wolff_point(|z| f2(f1(z)))?;
            MapType::First {
                lambda1: dilation_of(&f1, theta2, &options)?,
                lambda2: dilation_of(&f2, theta1, &options)?,
                wolff: (theta1, theta2),
            }
        }
        (SliceFamily::Wolff(alpha1), SliceFamily::FixedPoints(_)) => {
            let (k2, alpha2) = boundary_derivative(witness(f, 2), *alpha1)?;
            MapType::Second {
                wolff_component: 1,
                alpha1: *alpha1,
                alpha2,
                k2,
                borderline: (k2 - 1.0).abs() < K2_DEAD_ZONE,
            }
        }
        (SliceFamily::FixedPoints(_), SliceFamily::Wolff(alpha1)) => {
            let (k2, alpha2) = boundary_derivative(witness(f, 1), *alpha1)?;
            MapType::Second {
                wolff_component: 2,
                alpha1: *alpha1,
                alpha2,
                k2,
                borderline: (k2 - 1.0).abs() < K2_DEAD_ZONE,
            }
        }
        (SliceFamily::Wolff(gamma1), SliceFamily::Wolff(gamma2)) => MapType::Third {
            gamma1: *gamma1,
            gamma2: *gamma2,
        },
    };
    Ok(HerveClassification {
        map_type,
        slices: [first, second],
    })
}

/// Connected piece of a Wolff set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WolffComponent {
    Point(C64, C64),
    /// `{a} x Delta`.
    FlatFirst(C64),
    /// `Delta x {b}`.
    FlatSecond(C64),
}

const SAME_POINT: f64 = 1e-9;

impl WolffComponent {
    /// Euclidean distance from a point of the closed bidisc to the closure.
    pub fn distance(&self, p: (C64, C64)) -> f64 {
        match *self {
            WolffComponent::Point(a, b) => pair_distance((a, b), p),
            WolffComponent::FlatFirst(a) => (p.0 - a).norm(),
            WolffComponent::FlatSecond(b) => (p.1 - b).norm(),
        }
    }

    fn covered_by(&self, other: &WolffComponent) -> bool {
        match (*self, *other) {
            (WolffComponent::Point(a, b), _) => other.distance((a, b)) < SAME_POINT,
            (WolffComponent::FlatFirst(a), WolffComponent::FlatFirst(c)) => (a - c).norm() < SAME_POINT,
            (WolffComponent::FlatSecond(a), WolffComponent::FlatSecond(c)) => (a - c).norm() < SAME_POINT,
            _ => false,
        }
    }

    fn touches(&self, other: &WolffComponent) -> bool {
        use WolffComponent::*;
        match (*self, *other) {
            (FlatFirst(_), FlatSecond(_)) | (FlatSecond(_), FlatFirst(_)) => true,
            (Point(a, b), o) | (o, Point(a, b)) => o.distance((a, b)) < SAME_POINT,
            (FlatFirst(a), FlatFirst(c)) | (FlatSecond(a), FlatSecond(c)) => (a - c).norm() < SAME_POINT,
        }
    }
}

impl fmt::Display for WolffComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WolffComponent::Point(a, b) => write!(f, "{{({},{})}}", format_complex(*a), format_complex(*b)),
            WolffComponent::FlatFirst(a) => write!(f, "{{{}}}×Δ", format_complex(*a)),
            WolffComponent::FlatSecond(b) => write!(f, "Δ×{{{}}}", format_complex(*b)),
        }
    }
}

/// A union of Wolff components.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WolffSet {
    pub components: Vec<WolffComponent>,
}

impl WolffSet {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Distance from a point to the closure of the set (`inf` when empty).
    pub fn distance(&self, p: (C64, C64)) -> f64 {
        self.components.iter().map(|c| c.distance(p)).fold(f64::INFINITY, f64::min)
    }

    /// Structural inclusion: every component lies in a component of `other`.
    pub fn is_subset_of(&self, other: &WolffSet) -> bool {
        self.components
            .iter()
            .all(|c| other.components.iter().any(|o| c.covered_by(o)))
    }

    /// Whether the closures of the components form a connected chain.
    pub fn is_connected(&self) -> bool {
        let n = self.components.len();
        if n <= 1 {
            return true;
        }
        let mut reached = vec![false; n];
        let mut stack = vec![0];
        reached[0] = true;
        while let Some(i) = stack.pop() {
            for (j, other) in self.components.iter().enumerate() {
                if !reached[j] && self.components[i].touches(other) {
                    reached[j] = true;
                    stack.push(j);
                }
            }
        }
        reached.into_iter().all(|r| r)
    }
}

impl fmt::Display for WolffSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "∅");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Wolff and generalized Wolff sets with the case labels of the decision
/// tables.
#[derive(Debug, Clone, PartialEq)]
pub struct WolffSets {
    pub w_case: &'static str,
    pub w: WolffSet,
    /// `None` for degenerate maps, which the generalized table does not cover.
    pub wg_case: Option<&'static str>,
    pub wg: Option<WolffSet>,
    pub notes: Vec<String>,
}

/// Reads `W(f)` and `W_G(f)` off the classification.
pub fn wolff_sets(c: &HerveClassification) -> WolffSets {
    use WolffComponent::*;
    let mut notes = Vec::new();
    match c.map_type {
        MapType::First { lambda1, lambda2, wolff } => {
            let point = WolffSet {
                components: vec![Point(wolff.0, wolff.1)],
            };
            let (w_case, w) = if lambda1 > 1.0 || lambda2 > 1.0 {
                ("i", WolffSet::default())
            } else {
                ("ii", point.clone())
            };
            WolffSets {
                w_case,
                w,
                wg_case: Some("i"),
                wg: Some(point),
                notes,
            }
        }
        MapType::Second {
            wolff_component,
            alpha1,
            alpha2,
            k2,
            borderline,
        } => {
            let (flat, corner) = if wolff_component == 1 {
                (FlatFirst(alpha1), Point(alpha1, alpha2))
            } else {
                (FlatSecond(alpha1), Point(alpha2, alpha1))
            };
            let mut with_corner = vec![flat];
            if (alpha2.norm() - 1.0).abs() < 1e-9 {
                with_corner.push(corner);
            } else {
                notes.push(format!(
                    "the fixed-point function tends to the interior value {} at the Wolff point, so the isolated corner lies in the flat component",
                    format_complex(alpha2)
                ));
            }
            if borderline {
                notes.push(format!("k2 = {k2} lies within {K2_DEAD_ZONE:e} of 1"));
            }
            let wg = WolffSet {
                components: with_corner.clone(),
            };
            let (w_case, w) = if k2 <= 1.0 {
                ("iii", wg.clone())
            } else {
                ("iv", WolffSet { components: vec![flat] })
            };
            WolffSets {
                w_case,
                w,
                wg_case: Some("ii"),
                wg: Some(wg),
                notes,
            }
        }
        MapType::Third { gamma1, gamma2 } => {
            let set = WolffSet {
                components: vec![FlatFirst(gamma1), Point(gamma1, gamma2), FlatSecond(gamma2)],
            };
            WolffSets {
                w_case: "v",
                w: set.clone(),
                wg_case: Some("iii"),
                wg: Some(set),
                notes,
            }
        }
        MapType::Degenerate { wolff, .. } => {
            notes.push(
                "the printed union repeats its components; the distinct components are listed once".into(),
            );
            notes.push("the generalized table does not cover coordinate projections".into());
            WolffSets {
                w_case: "vi",
                w: WolffSet {
                    components: vec![FlatFirst(wolff), Point(wolff, wolff), FlatSecond(wolff)],
                },
                wg_case: None,
                wg: None,
                notes,
            }
        }
    }
}

/// Containment statistics of [`check_generalized_wolff`].
#[derive(Debug, Clone, PartialEq)]
pub struct ContainmentVerdict {
    pub passed: bool,
    /// `(radius, samples, violations, worst excess)` per radius.
    pub radii: Vec<(f64, usize, usize, f64)>,
}

/// Tests `f(B(tau, R)) ⊆ B(tau, R)` for the Busemann sublevel sets of a
/// geodesic through `tau` by sampling, with slack [`CONTAINMENT_SLACK`].
pub fn check_generalized_wolff(
    f: &BidiscMap,
    tau: &BidiscBoundaryPoint,
    geodesic: &ComplexGeodesic,
    radii: &[f64],
    samples: usize,
    seed: u64,
) -> Result<ContainmentVerdict> {
    let target = geodesic.target();
    if (target.x1() - tau.x1()).norm() > 1e-9 || (target.x2() - tau.x2()).norm() > 1e-9 {
        return Err(Error::InvalidParameter("the geodesic does not pass through the tested point".into()));
    }
    let mut rows = Vec::with_capacity(radii.len());
    for (i, &radius) in radii.iter().enumerate() {
        let set = BusemannSublevel::of_geodesic(geodesic, radius)?;
        let excess: Vec<f64> = par_samples(samples, seed.wrapping_add(0x9E37_79B9 * i as u64), |rng| {
            sample_sublevel_member(rng, &set).map(|p| set.excess(f.eval_raw(p.0, p.1)))
        })
        .into_iter()
        .flatten()
        .collect();
        let violations = excess.iter().filter(|&&e| !(e <= CONTAINMENT_SLACK)).count();
        rows.push((radius, excess.len(), violations, excess.iter().copied().fold(f64::NEG_INFINITY, f64::max)));
    }
    Ok(ContainmentVerdict {
        passed: rows.iter().all(|r| r.2 == 0),
        radii: rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holomap::DiscMap;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn map(text: &str) -> BidiscMap {
        text.parse().unwrap()
    }

    const H: &str = "mobius(-0.5, 0)";

    #[test]
    fn orbits() {
        let id = BidiscMap::identity();
        let orbit = iterate(&id, (c(0.3, 0.1), c(-0.2, 0.0)), 5).unwrap();
        assert!(orbit.iter().all(|&p| p == (c(0.3, 0.1), c(-0.2, 0.0))));
        let f = map(&format!("compose({H}, z1); compose({H}, z2)"));
        let orbit = iterate(&f, (c(0.0, 0.0), c(0.0, 0.0)), 60).unwrap();
        assert!(pair_distance(orbit[60], (c(1.0, 0.0), c(1.0, 0.0))) < 1e-12);
    }

    #[test]
    fn interior_fixed_points_are_detected() {
        let f = map("product(z1, z1); product(z2, z2)");
        assert!(matches!(
            target_set(&f, &[(c(0.5, 0.0), c(0.5, 0.0))], 100, 1e-6),
            Err(Error::InteriorFixedPoint { seed: 0 })
        ));
    }

    #[test]
    fn third_type() {
        let f = map(&format!("compose({H}, z1); compose({H}, z2)"));
        let class = classify_herve(&f, 16).unwrap();
        assert_eq!(class.map_type, MapType::Third { gamma1: c(1.0, 0.0), gamma2: c(1.0, 0.0) });
        let sets = wolff_sets(&class);
        assert_eq!((sets.w_case, sets.wg_case), ("v", Some("iii")));
        assert_eq!(sets.w.to_string(), "{1}×Δ ∪ {(1,1)} ∪ Δ×{1}");
        assert!(sets.w.is_connected());
    }

    #[test]
    fn first_type() {
        let f = map(&format!("compose({H}, z2); compose({H}, z1)"));
        let class = classify_herve(&f, 16).unwrap();
        let MapType::First { lambda1, lambda2, wolff } = class.map_type else {
            panic!("{class:?}")
        };
        assert!((lambda1 - 1.0 / 3.0).abs() < 1e-7 && (lambda2 - 1.0 / 3.0).abs() < 1e-7);
        assert_eq!(wolff, (c(1.0, 0.0), c(1.0, 0.0)));
        let sets = wolff_sets(&class);
        assert_eq!((sets.w_case, sets.wg_case), ("ii", Some("i")));
        assert_eq!(sets.w.to_string(), "{(1,1)}");
        // witnesses solve their slice equations
        let h = DiscMap::mobius(c(-0.5, 0.0), 0.0).unwrap();
        if let SliceFamily::FixedPoints(table) = &class.slices[0] {
            for &(y, x) in table {
                assert!((x - h.eval_raw(y)).norm() < 1e-12);
            }
        } else {
            panic!("expected a fixed-point table");
        }
    }

    #[test]
    fn second_type() {
        let f = map(&format!("compose({H}, z1); product(z1, z2)"));
        let class = classify_herve(&f, 16).unwrap();
        let MapType::Second { wolff_component, alpha1, alpha2, k2, borderline } = class.map_type else {
            panic!("{class:?}")
        };
        assert_eq!((wolff_component, alpha1, alpha2), (1, c(1.0, 0.0), c(0.0, 0.0)));
        assert!(k2.abs() < 1e-9 && !borderline);
        let sets = wolff_sets(&class);
        assert_eq!((sets.w_case, sets.wg_case), ("iii", Some("ii")));
        assert!(sets.w.is_subset_of(sets.wg.as_ref().unwrap()));
    }

    #[test]
    fn second_type_boundary_derivative_matches_implicit_derivative() {
        // f2(x, w) = (x + w) / 2 has F2(x) = x, so |F2'| = 1 everywhere
        let f = map(&format!("compose({H}, z1); mix(0.5, z1, z2)"));
        let class = classify_herve(&f, 8).unwrap();
        let MapType::Second { k2, alpha2, borderline, .. } = class.map_type else {
            panic!("{class:?}")
        };
        assert!((k2 - 1.0).abs() < 1e-6, "{k2}");
        assert!(borderline);
        assert_eq!(alpha2, c(1.0, 0.0));
        // F2(x) = x^2 through w = (x^2 + w)/2: implicit derivative 2x, k2 = 2
        let f = map(&format!("compose({H}, z1); mix(0.5, product(z1, z1), z2)"));
        let MapType::Second { k2, .. } = classify_herve(&f, 8).unwrap().map_type else {
            panic!()
        };
        assert!((k2 - 2.0).abs() < 1e-5, "{k2}");
        assert_eq!(wolff_sets(&classify_herve(&f, 8).unwrap()).w_case, "iv");
    }

    #[test]
    fn degenerate_projection() {
        let f = map(&format!("z1; compose({H}, z2)"));
        let class = classify_herve(&f, 8).unwrap();
        assert_eq!(class.map_type, MapType::Degenerate { projection: 1, wolff: c(1.0, 0.0) });
        let sets = wolff_sets(&class);
        assert_eq!(sets.w_case, "vi");
        assert!(sets.wg.is_none());
    }

    #[test]
    fn generalized_wolff_containment() {
        let f = map(&format!("compose({H}, z1); compose({H}, z2)"));
        let one = BidiscBoundaryPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let diag = ComplexGeodesic::diagonal(one).unwrap();
        let verdict = check_generalized_wolff(&f, &one, &diag, &[0.25, 1.0, 4.0], 2000, 1).unwrap();
        assert!(verdict.passed, "{verdict:?}");
        let minus = BidiscBoundaryPoint::new(c(-1.0, 0.0), c(-1.0, 0.0)).unwrap();
        let diag = ComplexGeodesic::diagonal(minus).unwrap();
        assert!(!check_generalized_wolff(&f, &minus, &diag, &[0.25, 1.0, 4.0], 2000, 1).unwrap().passed);
        let id = BidiscMap::identity();
        assert!(check_generalized_wolff(&id, &minus, &diag, &[1.0], 500, 1).unwrap().passed);
    }

    #[test]
    fn set_structure() {
        use WolffComponent::*;
        let one = c(1.0, 0.0);
        let set = WolffSet {
            components: vec![FlatFirst(one), Point(one, one)],
        };
        assert!(set.is_connected());
        let split = WolffSet {
            components: vec![Point(one, one), Point(-one, one)],
        };
        assert!(!split.is_connected());
        assert!(WolffSet { components: vec![Point(one, c(0.2, 0.0))] }.is_subset_of(&set));
        assert!(!split.is_subset_of(&set));
        assert_eq!(set.distance((c(1.0, 0.0), c(0.3, 0.0))), 0.0);
        assert_eq!(WolffSet::default().to_string(), "∅");
    }
}
