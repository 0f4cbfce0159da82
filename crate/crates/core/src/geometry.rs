//! Geometry of the bidisc: Kobayashi distance, boundary points and their
//! Šilov structure, complex geodesics through boundary points and the
//! projection devices attached to them.

use std::sync::OnceLock;

use num_complex::{Complex, Complex64 as C64};

use crate::disc::{poincare_distance_raw, DiscPoint};
use crate::error::{Error, Result};
use crate::holomap::DiscMap;
use crate::limits::{schedule_point, LimitOptions};
use crate::scalar::Real;

/// Components with modulus at least `1 - SILOV_THRESHOLD` count as unimodular.
pub const SILOV_THRESHOLD: f64 = 1e-9;

/// Schedule index `k` of the parameter `1 - 2^-k` at which geodesic
/// endpoints are checked.
const ENDPOINT_CHECK_K: u32 = 40;

/// A point of the open bidisc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidiscPoint<T: Real> {
    z1: Complex<T>,
    z2: Complex<T>,
}

impl<T: Real> BidiscPoint<T> {
    pub fn new(z1: Complex<T>, z2: Complex<T>) -> Result<Self> {
        DiscPoint::new(z1)?;
        DiscPoint::new(z2)?;
        Ok(Self { z1, z2 })
    }

    pub fn from_disc(z1: DiscPoint<T>, z2: DiscPoint<T>) -> Self {
        Self {
            z1: z1.value(),
            z2: z2.value(),
        }
    }

    pub fn origin() -> Self {
        let zero = Complex::new(T::zero(), T::zero());
        Self { z1: zero, z2: zero }
    }

    #[inline]
    pub fn z1(&self) -> Complex<T> {
        self.z1
    }

    #[inline]
    pub fn z2(&self) -> Complex<T> {
        self.z2
    }

    pub fn coords(&self) -> (Complex<T>, Complex<T>) {
        (self.z1, self.z2)
    }
}

/// Kobayashi distance on raw coordinates: the larger of the two Poincaré
/// distances.
pub fn kobayashi_distance_raw<T: Real>(p: (Complex<T>, Complex<T>), q: (Complex<T>, Complex<T>)) -> T {
    poincare_distance_raw(p.0, q.0).max(poincare_distance_raw(p.1, q.1))
}

pub fn kobayashi_distance<T: Real>(p: &BidiscPoint<T>, q: &BidiscPoint<T>) -> T {
    kobayashi_distance_raw(p.coords(), q.coords())
}

/// A point of the topological boundary of the bidisc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BidiscBoundaryPoint {
    x1: C64,
    x2: C64,
    unimodular: [bool; 2],
}

impl BidiscBoundaryPoint {
    /// Components within `1e-9` of the circle are renormalized onto it; at
    /// least one component must be unimodular and none may lie outside the
    /// closed disc.
    pub fn new(x1: C64, x2: C64) -> Result<Self> {
        let mut coords = [x1, x2];
        let mut unimodular = [false; 2];
        for (x, flag) in coords.iter_mut().zip(unimodular.iter_mut()) {
            let m = x.norm();
            if !m.is_finite() || m > 1.0 + SILOV_THRESHOLD {
                return Err(Error::NotOnBoundary { modulus: m });
            }
            if m >= 1.0 - SILOV_THRESHOLD {
                *x /= m;
                *flag = true;
            }
        }
        if !unimodular.iter().any(|&u| u) {
            return Err(Error::NotOnBoundary {
                modulus: x1.norm().max(x2.norm()),
            });
        }
        Ok(Self {
            x1: coords[0],
            x2: coords[1],
            unimodular,
        })
    }

    pub fn x1(&self) -> C64 {
        self.x1
    }

    pub fn x2(&self) -> C64 {
        self.x2
    }

    /// Component `j` (1 or 2).
    pub fn coord(&self, j: usize) -> C64 {
        if j == 1 {
            self.x1
        } else {
            self.x2
        }
    }

    pub fn is_unimodular(&self, j: usize) -> bool {
        self.unimodular[j - 1]
    }

    /// Number `d_x` of unimodular components.
    pub fn silov_degree(&self) -> usize {
        self.unimodular.iter().filter(|&&u| u).count()
    }

    pub fn is_silov(&self) -> bool {
        self.silov_degree() == 2
    }

    /// The point `x̌` obtained by zeroing the non-unimodular components.
    pub fn silov_part(&self) -> (C64, C64) {
        let zero = C64::new(0.0, 0.0);
        (
            if self.unimodular[0] { self.x1 } else { zero },
            if self.unimodular[1] { self.x2 } else { zero },
        )
    }
}

/// Which coordinate of a graph geodesic is the free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `z -> (z, g(z))`.
    FirstIdentity,
    /// `z -> (g(z), z)`.
    SecondIdentity,
}

impl Orientation {
    /// Index (1 or 2) of the coordinate that equals the parameter.
    pub fn identity_index(self) -> usize {
        match self {
            Orientation::FirstIdentity => 1,
            Orientation::SecondIdentity => 2,
        }
    }

    pub fn graph_index(self) -> usize {
        3 - self.identity_index()
    }
}

/// A complex geodesic of graph type through a boundary point.
#[derive(Debug, Clone)]
pub struct ComplexGeodesic {
    g: DiscMap,
    orientation: Orientation,
    x: BidiscBoundaryPoint,
    lambda: OnceLock<Result<f64>>,
}

impl PartialEq for ComplexGeodesic {
    fn eq(&self, other: &Self) -> bool {
        self.g == other.g && self.orientation == other.orientation && self.x == other.x
    }
}

impl ComplexGeodesic {
    /// The identity coordinate of `x` must be unimodular and the radial limit
    /// of `g` there must equal the other coordinate (checked at `1 - 2^-40`
    /// within `1e-6`).
    pub fn new(g: DiscMap, orientation: Orientation, x: BidiscBoundaryPoint) -> Result<Self> {
        let id = orientation.identity_index();
        if !x.is_unimodular(id) {
            return Err(Error::InvalidParameter(format!(
                "coordinate {id} of the boundary point must be unimodular"
            )));
        }
        let sigma = x.coord(id);
        let end = g.eval_raw(sigma * schedule_point(ENDPOINT_CHECK_K));
        let target = x.coord(3 - id);
        if !((end - target).norm() <= 1e-6) {
            return Err(Error::InvalidParameter(format!(
                "g does not tend to {target} along the radius to {sigma} (value {end})"
            )));
        }
        Ok(Self {
            g,
            orientation,
            x,
            lambda: OnceLock::new(),
        })
    }

    /// The geodesic `z -> (z, (x2/x1) z)` through a Šilov point.
    pub fn diagonal(x: BidiscBoundaryPoint) -> Result<Self> {
        if !x.is_silov() {
            return Err(Error::InvalidParameter("the diagonal geodesic needs a Šilov point".into()));
        }
        let rotation = x.x2() / x.x1();
        let g = if rotation == C64::new(1.0, 0.0) {
            DiscMap::identity()
        } else {
            DiscMap::mobius(C64::new(0.0, 0.0), rotation.arg())?
        };
        Self::new(g, Orientation::FirstIdentity, x)
    }

    pub fn g(&self) -> &DiscMap {
        &self.g
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn target(&self) -> &BidiscBoundaryPoint {
        &self.x
    }

    /// The boundary value `sigma` of the free parameter.
    pub fn sigma(&self) -> C64 {
        self.x.coord(self.orientation.identity_index())
    }

    /// `phi_g(z)` on a raw parameter.
    pub fn point_raw(&self, z: C64) -> (C64, C64) {
        let w = self.g.eval_raw(z);
        match self.orientation {
            Orientation::FirstIdentity => (z, w),
            Orientation::SecondIdentity => (w, z),
        }
    }

    pub fn point(&self, z: &DiscPoint<f64>) -> BidiscPoint<f64> {
        let (a, b) = self.point_raw(z.value());
        // the graph coordinate lies in the disc because g is a self-map
        BidiscPoint { z1: a, z2: b }
    }

    /// Point `phi_g(t sigma)` of the geodesic ray.
    pub fn ray_raw(&self, t: f64) -> (C64, C64) {
        self.point_raw(self.sigma() * t)
    }

    pub fn base_point(&self) -> (C64, C64) {
        self.point_raw(C64::new(0.0, 0.0))
    }

    /// The boundary dilation coefficient of `g` at `sigma`, computed once.
    pub fn lambda(&self) -> Result<f64> {
        self.lambda
            .get_or_init(|| crate::boundary::dilation_disc(&self.g, self.sigma(), &LimitOptions::default()))
            .clone()
    }
}

/// Left inverse families.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviceKind {
    /// The identity coordinate of the geodesic.
    Coordinate,
    /// `a z1 + (1 - a) z2`, defined for the diagonal geodesic only.
    Linear(#[serde(with = "crate::syntax::complex_text")] C64),
    /// Abate's left inverse built from the Šilov part of the target.
    Abate,
}

/// A geodesic with a left inverse and the induced retraction.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionDevice {
    geodesic: ComplexGeodesic,
    kind: DeviceKind,
}

impl ProjectionDevice {
    /// Rejects combinations where the left inverse law fails: linear forms
    /// off the diagonal geodesic, and Abate's form when it does not invert
    /// the given parameterization.
    pub fn new(geodesic: ComplexGeodesic, kind: DeviceKind) -> Result<Self> {
        if let DeviceKind::Linear(a) = kind {
            if !geodesic.g.is_identity() {
                return Err(Error::UnsupportedDevice(
                    "linear left inverses are defined only along the diagonal geodesic".into(),
                ));
            }
            if !(a.re.is_finite() && a.im.is_finite()) {
                return Err(Error::InvalidParameter("linear coefficient must be finite".into()));
            }
        }
        let device = Self { geodesic, kind };
        for &(r, theta) in &[(0.0, 0.0), (0.3, 0.4), (0.6, 2.0), (0.9, -1.3), (0.99, 3.0)] {
            let z = C64::from_polar(r, theta);
            let back = device.left_inverse_raw(device.geodesic.point_raw(z));
            if !((back - z).norm() <= 1e-12) {
                return Err(Error::UnsupportedDevice(format!(
                    "{:?} left inverse does not invert the geodesic at {z}",
                    device.kind
                )));
            }
        }
        Ok(device)
    }

    pub fn geodesic(&self) -> &ComplexGeodesic {
        &self.geodesic
    }

    pub fn kind(&self) -> DeviceKind {
        self.kind
    }

    /// The left inverse on raw coordinates; no domain check.
    pub fn left_inverse_raw(&self, p: (C64, C64)) -> C64 {
        match self.kind {
            DeviceKind::Coordinate => match self.geodesic.orientation {
                Orientation::FirstIdentity => p.0,
                Orientation::SecondIdentity => p.1,
            },
            // written as an update of z2 so that points of the diagonal are
            // fixed exactly in floating point
            DeviceKind::Linear(a) => p.1 + a * (p.0 - p.1),
            DeviceKind::Abate => {
                let x = &self.geodesic.x;
                let (c1, c2) = x.silov_part();
                let pairing = (p.0 * c1.conj() + p.1 * c2.conj()) / x.silov_degree() as f64;
                self.geodesic.sigma() * pairing
            }
        }
    }

    /// The left inverse; fails when a linear form with a coefficient outside
    /// `[0, 1]` sends `p` out of the disc.
    pub fn left_inverse(&self, p: &BidiscPoint<f64>) -> Result<DiscPoint<f64>> {
        DiscPoint::new(self.left_inverse_raw(p.coords()))
    }

    pub fn retraction_raw(&self, p: (C64, C64)) -> (C64, C64) {
        self.geodesic.point_raw(self.left_inverse_raw(p))
    }

    pub fn retraction(&self, p: &BidiscPoint<f64>) -> Result<BidiscPoint<f64>> {
        let z = self.left_inverse(p)?;
        Ok(self.geodesic.point(&z))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn one_one() -> BidiscBoundaryPoint {
        BidiscBoundaryPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap()
    }

    #[test]
    fn kobayashi_examples() {
        let o = BidiscPoint::<f64>::origin();
        assert_eq!(kobayashi_distance(&o, &o), 0.0);
        let p = BidiscPoint::new(c(0.5, 0.0), c(0.0, 0.0)).unwrap();
        assert_relative_eq!(kobayashi_distance(&o, &p), 0.5 * 3f64.ln(), max_relative = 1e-15);
        let t = 0.77;
        let q = BidiscPoint::new(c(t, 0.0), c(t, 0.0)).unwrap();
        assert_eq!(kobayashi_distance(&o, &q), poincare_distance_raw(c(0.0, 0.0), c(t, 0.0)));
    }

    #[test]
    fn boundary_point_structure() {
        let flat = BidiscBoundaryPoint::new(c(1.0, 0.0), c(0.0, 0.3)).unwrap();
        assert_eq!(flat.silov_degree(), 1);
        assert_eq!(flat.silov_part(), (c(1.0, 0.0), c(0.0, 0.0)));
        assert!(one_one().is_silov());
        assert!(BidiscBoundaryPoint::new(c(0.5, 0.0), c(0.2, 0.0)).is_err());
        assert!(BidiscBoundaryPoint::new(c(1.1, 0.0), c(0.2, 0.0)).is_err());
        let near = BidiscBoundaryPoint::new(c(1.0 - 1e-11, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(near.x1(), c(1.0, 0.0));
    }

    #[test]
    fn geodesic_points() {
        let diag = ComplexGeodesic::diagonal(one_one()).unwrap();
        let z = DiscPoint::real(0.3).unwrap();
        assert_eq!(diag.point(&z).coords(), (c(0.3, 0.0), c(0.3, 0.0)));
        let square = DiscMap::power(2).unwrap();
        let t = 0.6;
        let first = ComplexGeodesic::new(square.clone(), Orientation::FirstIdentity, one_one()).unwrap();
        assert_eq!(first.point_raw(c(t, 0.0)), (c(t, 0.0), c(t * t, 0.0)));
        let second = ComplexGeodesic::new(square, Orientation::SecondIdentity, one_one()).unwrap();
        assert_eq!(second.point_raw(c(t, 0.0)), (c(t * t, 0.0), c(t, 0.0)));
        let wrong = BidiscBoundaryPoint::new(c(1.0, 0.0), c(-1.0, 0.0)).unwrap();
        assert!(ComplexGeodesic::new(DiscMap::identity(), Orientation::FirstIdentity, wrong).is_err());
    }

    #[test]
    fn device_examples() {
        let diag = ComplexGeodesic::diagonal(one_one()).unwrap();
        let abate = ProjectionDevice::new(diag.clone(), DeviceKind::Abate).unwrap();
        let p = (c(0.2, 0.1), c(-0.4, 0.5));
        let mean = (p.0 + p.1) / 2.0;
        assert!((abate.left_inverse_raw(p) - mean).norm() < 1e-16);
        assert_eq!(abate.retraction_raw(p), (mean, mean));

        let flat_x = BidiscBoundaryPoint::new(c(1.0, 0.0), c(0.0, 0.3)).unwrap();
        let flat = ComplexGeodesic::new(DiscMap::constant(c(0.0, 0.3)).unwrap(), Orientation::FirstIdentity, flat_x).unwrap();
        let flat_abate = ProjectionDevice::new(flat, DeviceKind::Abate).unwrap();
        assert_eq!(flat_abate.left_inverse_raw(p), p.0);

        let linear_one = ProjectionDevice::new(diag.clone(), DeviceKind::Linear(c(1.0, 0.0))).unwrap();
        assert!((linear_one.left_inverse_raw(p) - p.0).norm() < 1e-15);
        let coordinate = ProjectionDevice::new(diag, DeviceKind::Coordinate).unwrap();
        assert_eq!(coordinate.retraction_raw(p), (p.0, p.0));
    }

    #[test]
    fn devices_are_validated() {
        let square = ComplexGeodesic::new(DiscMap::power(2).unwrap(), Orientation::FirstIdentity, one_one()).unwrap();
        assert!(matches!(
            ProjectionDevice::new(square.clone(), DeviceKind::Linear(c(0.5, 0.0))),
            Err(Error::UnsupportedDevice(_))
        ));
        assert!(matches!(ProjectionDevice::new(square.clone(), DeviceKind::Abate), Err(Error::UnsupportedDevice(_))));
        assert!(ProjectionDevice::new(square, DeviceKind::Coordinate).is_ok());
        let rotated = BidiscBoundaryPoint::new(c(1.0, 0.0), C64::from_polar(1.0, 1.0)).unwrap();
        let diag = ComplexGeodesic::diagonal(rotated).unwrap();
        assert!(ProjectionDevice::new(diag, DeviceKind::Abate).is_ok());
    }

    #[test]
    fn retraction_is_idempotent() {
        let g = DiscMap::mobius(c(0.5, 0.0), 0.0).unwrap();
        let x = BidiscBoundaryPoint::new(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let geo = ComplexGeodesic::new(g, Orientation::FirstIdentity, x).unwrap();
        let device = ProjectionDevice::new(geo, DeviceKind::Coordinate).unwrap();
        let p = (c(0.3, -0.6), c(0.1, 0.2));
        let once = device.retraction_raw(p);
        let twice = device.retraction_raw(once);
        assert!((once.0 - twice.0).norm() < 1e-14 && (once.1 - twice.1).norm() < 1e-14);
    }
}
