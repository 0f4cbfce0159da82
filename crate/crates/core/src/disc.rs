//! Geometry of the unit disc: Poincaré distance, horocycles, Stolz regions
//! and the action of disc automorphisms.
//!
//! Every quantity of the form `1 - |z|^2` is evaluated as
//! `(1 - |z|)(1 + |z|)`, with `1 - |z|` floored at half a unit in the last
//! place so that points rounded onto the circle still give finite values.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{abs_sq, Real};

/// Tolerance on `||z| - 1|` accepted by [`BoundaryPoint::new`].
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Minimal distance to the circle accepted by [`DiscPoint::new`].
pub const INTERIOR_MARGIN: f64 = 1e-15;

/// Distance `1 - |z|` to the unit circle, floored at a positive value.
#[inline]
pub fn boundary_gap<T: Real>(z: Complex<T>) -> T {
    let gap = T::one() - z.norm();
    if gap > T::boundary_floor() {
        gap
    } else {
        T::boundary_floor()
    }
}

/// `1 - |z|^2` through the factorization `(1 - |z|)(1 + |z|)`.
#[inline]
pub fn one_minus_abs_sq<T: Real>(z: Complex<T>) -> T {
    let gap = boundary_gap(z);
    gap * (T::lit(2.0) - gap)
}

fn interior_margin<T: Real>() -> T {
    let margin = T::lit(INTERIOR_MARGIN);
    if margin > T::boundary_floor() {
        margin
    } else {
        T::boundary_floor()
    }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscPoint<T: Real> {
    value: Complex<T>,
}

impl<T: Real> DiscPoint<T> {
    /// Rejects points with `|z| >= 1 - 1e-15`.
    pub fn new(value: Complex<T>) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite())
            || value.norm() >= T::one() - interior_margin::<T>()
        {
            return Err(Error::OutsideDisc {
                re: value.re.to_f64().unwrap_or(f64::NAN),
                im: value.im.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self { value })
    }

    pub fn real(x: T) -> Result<Self> {
        Self::new(Complex::new(x, T::zero()))
    }

    pub fn origin() -> Self {
        Self {
            value: Complex::new(T::zero(), T::zero()),
        }
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.value
    }
}

/// A point of the unit circle, stored with modulus exactly one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint<T: Real> {
    value: Complex<T>,
}

impl<T: Real> BoundaryPoint<T> {
    pub fn new(value: Complex<T>) -> Result<Self> {
        let modulus = value.norm();
        let tolerance = T::lit(BOUNDARY_TOLERANCE).max(T::epsilon() * T::lit(4.0));
        if !modulus.is_finite() || (modulus - T::one()).abs() > tolerance {
            return Err(Error::NotOnBoundary {
                modulus: modulus.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self {
            value: value / modulus,
        })
    }

    pub fn from_angle(theta: T) -> Self {
        Self {
            value: Complex::from_polar(T::one(), theta),
        }
    }

    pub fn one() -> Self {
        Self {
            value: Complex::new(T::one(), T::zero()),
        }
    }

    #[inline]
    pub fn value(&self) -> Complex<T> {
        self.value
    }
}

/// Pseudo-hyperbolic distance `|z - w| / |1 - conj(z) w|` on raw values.
pub fn pseudo_distance_raw<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    let diff = abs_sq(z - w);
    let weight = one_minus_abs_sq(z) * one_minus_abs_sq(w);
    (diff / (diff + weight)).sqrt()
}

/// Poincaré distance on raw complex values; points on or outside the circle
/// are treated as if they sat at the floored boundary gap.
pub fn poincare_distance_raw<T: Real>(z: Complex<T>, w: Complex<T>) -> T {
    if z == w {
        return T::zero();
    }
    // |1 - conj(z) w|^2 = |z - w|^2 + (1 - |z|^2)(1 - |w|^2)
    let diff = abs_sq(z - w);
    let weight = one_minus_abs_sq(z) * one_minus_abs_sq(w);
    let rho = (diff / (diff + weight)).sqrt();
    let half = T::lit(0.5);
    let omega = rho.ln_1p() + half * (diff / weight).ln_1p();
    omega.max(T::zero())
}

/// Poincaré distance `omega(z, w) = atanh(rho(z, w))`.
pub fn poincare_distance<T: Real>(z: &DiscPoint<T>, w: &DiscPoint<T>) -> T {
    poincare_distance_raw(z.value, w.value)
}

/// `omega(0, z)` on a raw value.
pub fn distance_from_origin_raw<T: Real>(z: Complex<T>) -> T {
    poincare_distance_raw(Complex::new(T::zero(), T::zero()), z)
}

/// Horocycle value `|sigma - z|^2 / (1 - |z|^2)` on a raw value.
pub fn horocycle_value_raw<T: Real>(center: Complex<T>, z: Complex<T>) -> T {
    abs_sq(center - z) / one_minus_abs_sq(z)
}

/// Value of the horocycle function centred at `center`; the horocycle of
/// radius `R` is the closed sublevel set `{value <= R}`.
pub fn horocycle_value<T: Real>(center: &BoundaryPoint<T>, z: &DiscPoint<T>) -> T {
    horocycle_value_raw(center.value, z.value)
}

/// Stolz ratio `|y - z| / (1 - |z|)`; infinite for points not inside the disc.
pub fn stolz_ratio_raw<T: Real>(vertex: Complex<T>, z: Complex<T>) -> T {
    let gap = T::one() - z.norm();
    if !(gap > T::zero()) {
        return T::infinity();
    }
    (vertex - z).norm() / gap
}

/// Strict membership in the Stolz region `H(y, M)`.
pub fn stolz_contains<T: Real>(vertex: &BoundaryPoint<T>, amplitude: T, z: &DiscPoint<T>) -> bool {
    stolz_ratio_raw(vertex.value, z.value) < amplitude
}

/// The automorphism `e^{i phase} (z - a) / (1 - conj(a) z)` on a raw value.
#[inline]
pub fn mobius_apply<T: Real>(a: Complex<T>, phase: T, z: Complex<T>) -> Complex<T> {
    Complex::from_polar(T::one(), phase) * (z - a) / (Complex::new(T::one(), T::zero()) - a.conj() * z)
}

/// A horocycle `E(sigma, R)`: the closed disc internally tangent to the
/// circle at `sigma` with Euclidean centre `sigma / (1 + R)` and radius
/// `R / (1 + R)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Horocycle<T: Real> {
    center: BoundaryPoint<T>,
    radius: T,
}

impl<T: Real> Horocycle<T> {
    pub fn new(center: BoundaryPoint<T>, radius: T) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horocycle radius must be positive and finite, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> BoundaryPoint<T> {
        self.center
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn value(&self, z: &DiscPoint<T>) -> T {
        horocycle_value(&self.center, z)
    }

    pub fn contains(&self, z: &DiscPoint<T>) -> bool {
        self.value(z) <= self.radius
    }

    pub fn euclidean_center(&self) -> Complex<T> {
        self.center.value() / (T::one() + self.radius)
    }

    pub fn euclidean_radius(&self) -> T {
        self.radius / (T::one() + self.radius)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type C = Complex<f64>;

    fn random_point(rng: &mut ChaCha8Rng, max_radius: f64) -> DiscPoint<f64> {
        let r = max_radius * rng.gen::<f64>().sqrt();
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        DiscPoint::new(C::from_polar(r, theta)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let o = DiscPoint::<f64>::origin();
        assert_eq!(poincare_distance(&o, &o), 0.0);
        let half = DiscPoint::real(0.5).unwrap();
        assert_relative_eq!(poincare_distance(&o, &half), 0.5 * 3f64.ln(), max_relative = 1e-15);
        assert_relative_eq!(poincare_distance(&o, &half), 0.5493061443340549, epsilon = 1e-15);
    }

    #[test]
    fn distance_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let z = random_point(&mut rng, 0.999);
            let w = random_point(&mut rng, 0.999);
            let d1 = poincare_distance(&z, &w);
            let d2 = poincare_distance(&w, &z);
            assert!((d1 - d2).abs() <= 1e-14, "{d1} vs {d2}");
        }
    }

    #[test]
    fn triangle_inequality() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..10_000 {
            let a = random_point(&mut rng, 0.999);
            let b = random_point(&mut rng, 0.999);
            let c = random_point(&mut rng, 0.999);
            let lhs = poincare_distance(&a, &c);
            let rhs = poincare_distance(&a, &b) + poincare_distance(&b, &c);
            assert!(lhs <= rhs + 1e-12, "{lhs} > {rhs}");
        }
    }

    #[test]
    fn automorphism_invariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..2000 {
            let a = random_point(&mut rng, 0.9).value();
            let phase = rng.gen_range(-3.0..3.0);
            let z = random_point(&mut rng, 0.95);
            let w = random_point(&mut rng, 0.95);
            let tz = DiscPoint::new(mobius_apply(a, phase, z.value())).unwrap();
            let tw = DiscPoint::new(mobius_apply(a, phase, w.value())).unwrap();
            let before = poincare_distance(&z, &w);
            let after = poincare_distance(&tz, &tw);
            assert!((before - after).abs() <= 1e-12 * before.max(1.0), "{before} vs {after}");
        }
    }

    #[test]
    fn horocycle_examples() {
        let one = BoundaryPoint::<f64>::one();
        assert_eq!(horocycle_value(&one, &DiscPoint::origin()), 1.0);
        let z = DiscPoint::new(C::new(0.5, 0.5)).unwrap();
        assert_relative_eq!(horocycle_value(&one, &z), 1.0, max_relative = 1e-15);
        for k in [4, 10, 20, 30] {
            let t = 1.0 - 2f64.powi(-k);
            let value = horocycle_value(&one, &DiscPoint::real(t).unwrap());
            assert_relative_eq!(value, (1.0 - t) / (1.0 + t), max_relative = 1e-12);
        }
    }

    #[test]
    fn horodisc_is_euclidean_disc() {
        // every point of the Euclidean circle |z - s/(1+R)| = R/(1+R) has value R
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..500 {
            let center = BoundaryPoint::from_angle(rng.gen_range(0.0..std::f64::consts::TAU));
            let radius = rng.gen_range(0.05..8.0);
            let horo = Horocycle::new(center, radius).unwrap();
            let psi: f64 = rng.gen_range(0.3..6.0);
            let z = horo.euclidean_center() + C::from_polar(horo.euclidean_radius(), psi) * center.value();
            let z = DiscPoint::new(z).unwrap();
            assert_relative_eq!(horo.value(&z), radius, max_relative = 1e-9);
        }
    }

    #[test]
    fn horocycle_covariance_under_automorphisms_fixing_one() {
        // theta(z) = (z - a)/(1 - a z), a real, fixes 1 with dilation (1 + a)/(1 - a)
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let one = BoundaryPoint::<f64>::one();
        for _ in 0..2000 {
            let a: f64 = rng.gen_range(-0.8..0.8);
            let dilation = (1.0 + a) / (1.0 - a);
            let z = random_point(&mut rng, 0.99);
            let tz = DiscPoint::new(mobius_apply(C::new(a, 0.0), 0.0, z.value())).unwrap();
            let before = horocycle_value(&one, &z);
            let after = horocycle_value(&one, &tz);
            assert!((after - dilation * before).abs() <= 1e-9 * after.max(1.0));
        }
    }

    #[test]
    fn horocycle_value_is_busemann_limit() {
        let one = BoundaryPoint::<f64>::one();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..200 {
            let z = random_point(&mut rng, 0.9);
            let w = C::new(1.0 - 1e-9, 0.0);
            let limit = (2.0
                * (poincare_distance_raw(z.value(), w) - distance_from_origin_raw(w)))
            .exp();
            assert_relative_eq!(limit, horocycle_value(&one, &z), max_relative = 1e-6);
        }
    }

    #[test]
    fn stolz_examples() {
        let one = BoundaryPoint::<f64>::one();
        assert!(stolz_contains(&one, 2.0, &DiscPoint::origin()));
        for k in 1..40 {
            let t = 1.0 - 2f64.powi(-k);
            assert!(stolz_contains(&one, 2.0, &DiscPoint::real(t).unwrap()));
        }
        for eps in [1e-3, 1e-5, 1e-7] {
            let z = DiscPoint::new(C::new(1.0 - eps, 3.0 * eps)).unwrap();
            assert!(!stolz_contains(&one, 2.0, &z));
            assert_relative_eq!(stolz_ratio_raw(one.value(), z.value()), 10f64.sqrt(), max_relative = 1e-2);
        }
    }

    #[test]
    fn constructors_enforce_domains() {
        assert!(DiscPoint::<f64>::real(1.0).is_err());
        assert!(DiscPoint::<f64>::real(1.0 - 1e-16).is_err());
        assert!(DiscPoint::<f64>::real(1.0 - 1e-14).is_ok());
        assert!(BoundaryPoint::new(C::new(0.0, 1.0 + 1e-13)).is_ok());
        assert!(BoundaryPoint::new(C::new(0.0, 1.0 + 1e-9)).is_err());
        let b = BoundaryPoint::new(C::new(0.6, 0.8 + 1e-13)).unwrap();
        assert!((b.value().norm() - 1.0).abs() <= 2.0 * f64::EPSILON);
        assert!(Horocycle::new(BoundaryPoint::<f64>::one(), 0.0).is_err());
    }

    #[test]
    fn single_precision_instantiation() {
        let o = DiscPoint::<f32>::origin();
        let half = DiscPoint::<f32>::real(0.5).unwrap();
        assert!((poincare_distance(&o, &half) - 0.549_306_1).abs() < 1e-6);
        let one = BoundaryPoint::<f32>::one();
        assert!((horocycle_value(&one, &DiscPoint::new(Complex::new(0.5f32, 0.5)).unwrap()) - 1.0).abs() < 1e-6);
    }
}
