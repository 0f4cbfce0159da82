//! Holomorphic self-maps of the disc and of the bidisc as closed expression
//! trees with exact evaluation and exact derivatives.
//!
//! Every constructor validates its parameters so that a well-formed tree
//! always maps the open disc (or bidisc) into itself. All nodes are analytic
//! on a neighbourhood of the closed disc, so derivatives may be evaluated at
//! boundary points as well.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::BidiscPoint;
use crate::error::{Error, Result};

/// Largest modulus accepted by [`DiscMap::eval_disc`].
pub const EVAL_RADIUS: f64 = 1.0 - 1e-15;

/// Largest modulus accepted by [`DiscMap::derivative_disc`]; the closed disc
/// plus a rounding allowance.
pub const CLOSED_RADIUS: f64 = 1.0 + 1e-12;

const ONE: C64 = C64::new(1.0, 0.0);
const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum DiscNode {
    Constant(C64),
    Identity,
    Mobius { a: C64, phase: f64 },
    Power(u32),
    Blaschke { phase: f64, factors: Vec<(C64, u32)> },
    Compose(DiscMap, DiscMap),
    Mix(f64, DiscMap, DiscMap),
    Product(DiscMap, DiscMap),
}

/// A holomorphic self-map of the unit disc.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscMap(Arc<DiscNode>);

fn check_interior(c: C64, what: &str) -> Result<()> {
    if !(c.re.is_finite() && c.im.is_finite()) || c.norm() >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "{what} must lie in the open unit disc, got {c}"
        )));
    }
    Ok(())
}

fn check_finite(x: f64, what: &str) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("{what} must be finite")));
    }
    Ok(())
}

#[inline]
fn mobius_value(a: C64, rotation: C64, z: C64) -> C64 {
    rotation * (z - a) / (ONE - a.conj() * z)
}

#[inline]
fn mobius_derivative(a: C64, rotation: C64, z: C64) -> C64 {
    let den = ONE - a.conj() * z;
    rotation * (1.0 - a.norm_sqr()) / (den * den)
}

impl DiscMap {
    fn node(node: DiscNode) -> Self {
        DiscMap(Arc::new(node))
    }

    pub(crate) fn tree(&self) -> &DiscNode {
        &self.0
    }

    pub fn identity() -> Self {
        Self::node(DiscNode::Identity)
    }

    /// The constant map; unimodular constants are rejected.
    pub fn constant(c: C64) -> Result<Self> {
        check_interior(c, "constant")?;
        Ok(Self::node(DiscNode::Constant(c)))
    }

    /// The automorphism `e^{i phase} (z - a) / (1 - conj(a) z)`.
    pub fn mobius(a: C64, phase: f64) -> Result<Self> {
        check_interior(a, "mobius centre")?;
        check_finite(phase, "mobius phase")?;
        Ok(Self::node(DiscNode::Mobius { a, phase }))
    }

    /// The automorphism sending `a` to the origin and fixing the boundary
    /// point `sigma`.
    pub fn mobius_fixing(a: C64, sigma: C64) -> Result<Self> {
        check_interior(a, "mobius centre")?;
        if (sigma.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NotOnBoundary {
                modulus: sigma.norm(),
            });
        }
        let rotation = sigma * (ONE - a.conj() * sigma) / (sigma - a);
        Self::mobius(a, rotation.arg())
    }

    pub fn power(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("power exponent must be at least 1".into()));
        }
        Ok(Self::node(DiscNode::Power(n)))
    }

    /// Finite Blaschke product `e^{i phase} prod ((z - a_k)/(1 - conj(a_k) z))^{m_k}`.
    pub fn blaschke(phase: f64, factors: Vec<(C64, u32)>) -> Result<Self> {
        check_finite(phase, "blaschke phase")?;
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "blaschke product needs at least one zero".into(),
            ));
        }
        for &(a, m) in &factors {
            check_interior(a, "blaschke zero")?;
            if m == 0 {
                return Err(Error::InvalidParameter("blaschke multiplicity must be at least 1".into()));
            }
        }
        Ok(Self::node(DiscNode::Blaschke { phase, factors }))
    }

    /// Blaschke product with the given zeros whose phase is chosen so that
    /// the boundary point `from` is sent to `to`.
    pub fn blaschke_through(factors: Vec<(C64, u32)>, from: C64, to: C64) -> Result<Self> {
        let unrotated = Self::blaschke(0.0, factors.clone())?;
        let value = unrotated.eval_raw(from);
        Self::blaschke((to / value).arg(), factors)
    }

    pub fn compose(outer: DiscMap, inner: DiscMap) -> Self {
        Self::node(DiscNode::Compose(outer, inner))
    }

    /// Convex combination `t f + (1 - t) g`.
    pub fn mix(t: f64, f: DiscMap, g: DiscMap) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("mix weight {t} is outside [0, 1]")));
        }
        Ok(Self::node(DiscNode::Mix(t, f, g)))
    }

    pub fn product(f: DiscMap, g: DiscMap) -> Self {
        Self::node(DiscNode::Product(f, g))
    }

    /// Whether the tree is syntactically the identity.
    pub fn is_identity(&self) -> bool {
        match self.tree() {
            DiscNode::Identity => true,
            DiscNode::Mobius { a, phase } => *a == ZERO && *phase == 0.0,
            DiscNode::Power(1) => true,
            DiscNode::Compose(f, g) => f.is_identity() && g.is_identity(),
            _ => false,
        }
    }

    /// Inverse map when the tree is an automorphism built from identities,
    /// Möbius nodes and compositions of those.
    pub fn inverse(&self) -> Option<DiscMap> {
        match self.tree() {
            DiscNode::Identity => Some(self.clone()),
            DiscNode::Power(1) => Some(DiscMap::identity()),
            DiscNode::Mobius { a, phase } => {
                let rotation = C64::from_polar(1.0, *phase);
                Some(Self::node(DiscNode::Mobius {
                    a: -*a * rotation,
                    phase: -*phase,
                }))
            }
            DiscNode::Compose(f, g) => Some(DiscMap::compose(g.inverse()?, f.inverse()?)),
            _ => None,
        }
    }

    /// Evaluates without any domain check.
    pub fn eval_raw(&self, z: C64) -> C64 {
        match self.tree() {
            DiscNode::Constant(c) => *c,
            DiscNode::Identity => z,
            DiscNode::Mobius { a, phase } => mobius_value(*a, C64::from_polar(1.0, *phase), z),
            DiscNode::Power(n) => z.powu(*n),
            DiscNode::Blaschke { phase, factors } => {
                let mut value = C64::from_polar(1.0, *phase);
                for &(a, m) in factors {
                    value *= mobius_value(a, ONE, z).powu(m);
                }
                value
            }
            DiscNode::Compose(f, g) => f.eval_raw(g.eval_raw(z)),
            DiscNode::Mix(t, f, g) => f.eval_raw(z) * *t + g.eval_raw(z) * (1.0 - *t),
            DiscNode::Product(f, g) => f.eval_raw(z) * g.eval_raw(z),
        }
    }

    /// Value and derivative at `z`, without any domain check.
    pub fn jet_raw(&self, z: C64) -> (C64, C64) {
        match self.tree() {
            DiscNode::Constant(c) => (*c, ZERO),
            DiscNode::Identity => (z, ONE),
            DiscNode::Mobius { a, phase } => {
                let rotation = C64::from_polar(1.0, *phase);
                (mobius_value(*a, rotation, z), mobius_derivative(*a, rotation, z))
            }
            DiscNode::Power(n) => {
                let lower = z.powu(n - 1);
                (lower * z, lower * f64::from(*n))
            }
            DiscNode::Blaschke { phase, factors } => {
                let mut value = C64::from_polar(1.0, *phase);
                let mut derivative = ZERO;
                for &(a, m) in factors {
                    let b = mobius_value(a, ONE, z);
                    let db = mobius_derivative(a, ONE, z);
                    let lower = b.powu(m - 1);
                    let (fv, fd) = (lower * b, lower * db * f64::from(m));
                    derivative = derivative * fv + value * fd;
                    value *= fv;
                }
                (value, derivative)
            }
            DiscNode::Compose(f, g) => {
                let (gv, gd) = g.jet_raw(z);
                let (fv, fd) = f.jet_raw(gv);
                (fv, fd * gd)
            }
            DiscNode::Mix(t, f, g) => {
                let (fv, fd) = f.jet_raw(z);
                let (gv, gd) = g.jet_raw(z);
                (fv * *t + gv * (1.0 - *t), fd * *t + gd * (1.0 - *t))
            }
            DiscNode::Product(f, g) => {
                let (fv, fd) = f.jet_raw(z);
                let (gv, gd) = g.jet_raw(z);
                (fv * gv, fd * gv + fv * gd)
            }
        }
    }

    /// Evaluates at a point with `|z| <= 1 - 1e-15`.
    pub fn eval_disc(&self, z: C64) -> Result<C64> {
        if !(z.norm() <= EVAL_RADIUS) {
            return Err(Error::OutsideDisc { re: z.re, im: z.im });
        }
        Ok(self.eval_raw(z))
    }

    /// Exact derivative at a point of the closed disc.
    pub fn derivative_disc(&self, z: C64) -> Result<C64> {
        if !(z.norm() <= CLOSED_RADIUS) {
            return Err(Error::OutsideDisc { re: z.re, im: z.im });
        }
        Ok(self.jet_raw(z).1)
    }
}

/// One component of a bidisc self-map: a holomorphic map `Δ² → Δ`.
#[derive(Debug, Clone, PartialEq)]
pub enum BidiscExpr {
    /// The coordinate projection `z1` (index 1) or `z2` (index 2).
    Coord(u8),
    Constant(C64),
    /// Post-composition with a disc map.
    Apply(DiscMap, Box<BidiscExpr>),
    Product(Box<BidiscExpr>, Box<BidiscExpr>),
    Mix(f64, Box<BidiscExpr>, Box<BidiscExpr>),
}

impl BidiscExpr {
    pub fn coord(index: u8) -> Result<Self> {
        if index != 1 && index != 2 {
            return Err(Error::InvalidParameter(format!("coordinate index {index} is not 1 or 2")));
        }
        Ok(BidiscExpr::Coord(index))
    }

    pub fn constant(c: C64) -> Result<Self> {
        check_interior(c, "constant")?;
        Ok(BidiscExpr::Constant(c))
    }

    pub fn apply(g: DiscMap, inner: BidiscExpr) -> Self {
        BidiscExpr::Apply(g, Box::new(inner))
    }

    pub fn product(a: BidiscExpr, b: BidiscExpr) -> Self {
        BidiscExpr::Product(Box::new(a), Box::new(b))
    }

    pub fn mix(t: f64, a: BidiscExpr, b: BidiscExpr) -> Result<Self> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidParameter(format!("mix weight {t} is outside [0, 1]")));
        }
        Ok(BidiscExpr::Mix(t, Box::new(a), Box::new(b)))
    }

    /// Rejects malformed trees built through the public enum variants.
    pub fn validate(&self) -> Result<()> {
        match self {
            BidiscExpr::Coord(i) => Self::coord(*i).map(|_| ()),
            BidiscExpr::Constant(c) => check_interior(*c, "constant"),
            BidiscExpr::Apply(_, inner) => inner.validate(),
            BidiscExpr::Product(a, b) => {
                a.validate()?;
                b.validate()
            }
            BidiscExpr::Mix(t, a, b) => {
                if !(0.0..=1.0).contains(t) {
                    return Err(Error::InvalidParameter(format!("mix weight {t} is outside [0, 1]")));
                }
                a.validate()?;
                b.validate()
            }
        }
    }

    /// Whether the expression is syntactically the projection onto
    /// coordinate `index`.
    pub fn is_coordinate(&self, index: u8) -> bool {
        match self {
            BidiscExpr::Coord(i) => *i == index,
            BidiscExpr::Apply(g, inner) => g.is_identity() && inner.is_coordinate(index),
            _ => false,
        }
    }

    pub fn eval_raw(&self, z1: C64, z2: C64) -> C64 {
        match self {
            BidiscExpr::Coord(1) => z1,
            BidiscExpr::Coord(_) => z2,
            BidiscExpr::Constant(c) => *c,
            BidiscExpr::Apply(g, inner) => g.eval_raw(inner.eval_raw(z1, z2)),
            BidiscExpr::Product(a, b) => a.eval_raw(z1, z2) * b.eval_raw(z1, z2),
            BidiscExpr::Mix(t, a, b) => a.eval_raw(z1, z2) * *t + b.eval_raw(z1, z2) * (1.0 - *t),
        }
    }

    /// Value and the two partial derivatives `(f, df/dz1, df/dz2)`.
    pub fn jet_raw(&self, z1: C64, z2: C64) -> (C64, C64, C64) {
        match self {
            BidiscExpr::Coord(1) => (z1, ONE, ZERO),
            BidiscExpr::Coord(_) => (z2, ZERO, ONE),
            BidiscExpr::Constant(c) => (*c, ZERO, ZERO),
            BidiscExpr::Apply(g, inner) => {
                let (v, d1, d2) = inner.jet_raw(z1, z2);
                let (gv, gd) = g.jet_raw(v);
                (gv, gd * d1, gd * d2)
            }
            BidiscExpr::Product(a, b) => {
                let (av, a1, a2) = a.jet_raw(z1, z2);
                let (bv, b1, b2) = b.jet_raw(z1, z2);
                (av * bv, a1 * bv + av * b1, a2 * bv + av * b2)
            }
            BidiscExpr::Mix(t, a, b) => {
                let (av, a1, a2) = a.jet_raw(z1, z2);
                let (bv, b1, b2) = b.jet_raw(z1, z2);
                let s = 1.0 - *t;
                (av * *t + bv * s, a1 * *t + b1 * s, a2 * *t + b2 * s)
            }
        }
    }
}

/// A holomorphic self-map `f = (f1, f2)` of the bidisc.
#[derive(Debug, Clone, PartialEq)]
pub struct BidiscMap {
    components: [BidiscExpr; 2],
}

/// Outcome of [`BidiscMap::validate_self_map`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub samples: usize,
    pub max_modulus: f64,
    /// Sample points whose image left the open bidisc.
    pub violations: Vec<(C64, C64)>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.max_modulus < 1.0 && self.violations.is_empty()
    }
}

fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut result = 0.0;
    let mut scale = 1.0 / base as f64;
    while index > 0 {
        result += (index % base) as f64 * scale;
        index /= base;
        scale /= base as f64;
    }
    result
}

impl BidiscMap {
    pub fn new(f1: BidiscExpr, f2: BidiscExpr) -> Result<Self> {
        f1.validate()?;
        f2.validate()?;
        Ok(Self { components: [f1, f2] })
    }

    pub fn identity() -> Self {
        Self {
            components: [BidiscExpr::Coord(1), BidiscExpr::Coord(2)],
        }
    }

    /// Componentwise map `(g1(z1), g2(z2))`.
    pub fn diagonal(g1: DiscMap, g2: DiscMap) -> Self {
        Self {
            components: [
                BidiscExpr::apply(g1, BidiscExpr::Coord(1)),
                BidiscExpr::apply(g2, BidiscExpr::Coord(2)),
            ],
        }
    }

    /// Component `j` (1 or 2).
    pub fn component(&self, j: usize) -> &BidiscExpr {
        &self.components[j - 1]
    }

    pub fn eval_raw(&self, z1: C64, z2: C64) -> (C64, C64) {
        (
            self.components[0].eval_raw(z1, z2),
            self.components[1].eval_raw(z1, z2),
        )
    }

    pub fn apply(&self, p: &BidiscPoint) -> Result<BidiscPoint> {
        let (w1, w2) = self.eval_raw(p.z1(), p.z2());
        BidiscPoint::new(w1, w2)
    }

    /// Jacobian matrix `[[df1/dz1, df1/dz2], [df2/dz1, df2/dz2]]`.
    pub fn jacobian(&self, z1: C64, z2: C64) -> [[C64; 2]; 2] {
        let (_, a, b) = self.components[0].jet_raw(z1, z2);
        let (_, c, d) = self.components[1].jet_raw(z1, z2);
        [[a, b], [c, d]]
    }

    /// Samples a seeded quasi-random interior set together with the shells
    /// `|z_j| = 1 - 10^-k`, `k = 1..=9`, and records the largest image
    /// modulus.
    pub fn validate_self_map(&self, n_samples: usize, seed: u64) -> ValidationReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let offset: u64 = rng.gen_range(1..1 << 20);
        let tau = std::f64::consts::TAU;
        let mut points = Vec::with_capacity(n_samples + 9 * 16);
        for i in 0..n_samples as u64 {
            let idx = i + offset;
            let r1 = radical_inverse(idx, 2).sqrt();
            let r2 = radical_inverse(idx, 3).sqrt();
            let t1 = tau * radical_inverse(idx, 5);
            let t2 = tau * radical_inverse(idx, 7);
            points.push((C64::from_polar(r1.min(EVAL_RADIUS), t1), C64::from_polar(r2.min(EVAL_RADIUS), t2)));
        }
        for k in 1..=9 {
            let shell = 1.0 - 10f64.powi(-k);
            for _ in 0..16 {
                let t1 = rng.gen_range(0.0..tau);
                let t2 = rng.gen_range(0.0..tau);
                let inner = rng.gen::<f64>().sqrt();
                points.push((C64::from_polar(shell, t1), C64::from_polar(inner, t2)));
                points.push((C64::from_polar(inner, t1), C64::from_polar(shell, t2)));
                points.push((C64::from_polar(shell, t1), C64::from_polar(shell, t2)));
            }
        }
        let mut max_modulus: f64 = 0.0;
        let mut violations = Vec::new();
        for &(z1, z2) in &points {
            let (w1, w2) = self.eval_raw(z1, z2);
            let m = w1.norm().max(w2.norm());
            if !(m < 1.0) {
                violations.push((z1, z2));
            }
            if m.is_nan() {
                max_modulus = f64::NAN;
            } else if !max_modulus.is_nan() {
                max_modulus = max_modulus.max(m);
            }
        }
        ValidationReport {
            samples: points.len(),
            max_modulus,
            violations,
        }
    }
}

impl fmt::Display for DiscMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::syntax::write_disc(self, f)
    }
}

impl fmt::Display for BidiscExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::syntax::write_bidisc_expr(self, f)
    }
}

impl fmt::Display for BidiscMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}", self.components[0], self.components[1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(DiscMap::identity().eval_disc(c(0.3, 0.0)).unwrap(), c(0.3, 0.0));
        let square = DiscMap::power(2).unwrap();
        assert_eq!(square.eval_disc(c(0.5, 0.0)).unwrap(), c(0.25, 0.0));
        let composed = DiscMap::compose(DiscMap::mobius(c(0.5, 0.0), 0.0).unwrap(), square);
        for t in [0.1, 0.5, 0.9, 0.999] {
            let expected = (t * t - 0.5) / (1.0 - t * t / 2.0);
            assert_relative_eq!(composed.eval_disc(c(t, 0.0)).unwrap().re, expected, max_relative = 1e-14);
        }
        assert!(DiscMap::identity().eval_disc(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(DiscMap::power(2).unwrap().derivative_disc(c(0.5, 0.0)).unwrap(), c(1.0, 0.0));
        let theta = DiscMap::mobius(c(0.5, 0.0), 0.0).unwrap();
        assert_relative_eq!(theta.derivative_disc(c(1.0, 0.0)).unwrap().re, 3.0, max_relative = 1e-15);
        assert_eq!(theta.eval_raw(c(0.5, 0.0)), c(0.0, 0.0));
        assert!(theta.derivative_disc(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn constructors_reject_invalid_parameters() {
        assert!(DiscMap::constant(c(1.2, 0.0)).is_err());
        assert!(DiscMap::constant(c(0.0, 1.0)).is_err());
        assert!(DiscMap::mobius(c(1.0, 0.0), 0.0).is_err());
        assert!(DiscMap::power(0).is_err());
        assert!(DiscMap::blaschke(0.0, vec![]).is_err());
        assert!(DiscMap::blaschke(0.0, vec![(c(0.2, 0.0), 0)]).is_err());
        assert!(DiscMap::mix(1.5, DiscMap::identity(), DiscMap::identity()).is_err());
        assert!(BidiscExpr::coord(3).is_err());
        assert!(BidiscExpr::constant(c(1.2, 0.0)).is_err());
        assert!(BidiscMap::new(BidiscExpr::Constant(c(2.0, 0.0)), BidiscExpr::Coord(1)).is_err());
    }

    #[test]
    fn inverse_of_automorphisms() {
        let theta = DiscMap::compose(
            DiscMap::mobius(c(0.3, -0.4), 1.1).unwrap(),
            DiscMap::mobius(c(-0.5, 0.2), -0.3).unwrap(),
        );
        let inverse = theta.inverse().unwrap();
        for z in [c(0.0, 0.0), c(0.5, 0.3), c(-0.9, 0.1)] {
            let back = inverse.eval_raw(theta.eval_raw(z));
            assert!((back - z).norm() < 1e-13);
        }
        assert!(DiscMap::power(2).unwrap().inverse().is_none());
    }

    #[test]
    fn mobius_fixing_fixes_the_boundary_point() {
        for (a, sigma) in [
            (c(0.5, 0.0), c(1.0, 0.0)),
            (c(0.2, 0.6), c(1.0, 0.0)),
            (c(-0.3, 0.1), C64::from_polar(1.0, PI / 3.0)),
        ] {
            let theta = DiscMap::mobius_fixing(a, sigma).unwrap();
            assert!((theta.eval_raw(sigma) - sigma).norm() < 1e-14);
            assert!(theta.eval_raw(a).norm() < 1e-15);
        }
    }

    #[test]
    fn blaschke_through_hits_the_target() {
        let b = DiscMap::blaschke_through(vec![(c(0.3, 0.0), 1), (c(-0.2, 0.4), 2)], c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!((b.eval_raw(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(b.eval_raw(c(-0.2, 0.4)).norm() < 1e-15);
    }

    #[test]
    fn syntactic_coordinates() {
        assert!(BidiscExpr::Coord(1).is_coordinate(1));
        assert!(!BidiscExpr::Coord(1).is_coordinate(2));
        assert!(BidiscExpr::apply(DiscMap::identity(), BidiscExpr::Coord(2)).is_coordinate(2));
        assert!(!BidiscExpr::apply(DiscMap::power(2).unwrap(), BidiscExpr::Coord(2)).is_coordinate(2));
    }

    #[test]
    fn self_map_validation() {
        assert!(BidiscMap::identity().validate_self_map(2000, 1).passed());
        let product = BidiscMap::new(
            BidiscExpr::product(BidiscExpr::Coord(1), BidiscExpr::Coord(2)),
            BidiscExpr::Coord(1),
        )
        .unwrap();
        let report = product.validate_self_map(2000, 2);
        assert!(report.passed(), "{report:?}");
        assert!(report.max_modulus > 0.99);
    }
}
