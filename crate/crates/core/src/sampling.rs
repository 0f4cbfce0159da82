//! Deterministic parallel sampling of horodiscs, Busemann sublevel sets and
//! Koranyi regions.
//!
//! Samples are drawn in fixed-size chunks; chunk `c` uses a ChaCha8 stream
//! seeded from `(seed, c)`, so results do not depend on the thread count.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::boundary::BusemannSublevel;

/// Samples per deterministic chunk.
pub const CHUNK: usize = 512;
/// Samples are kept at least this far from the unit circle. Closer in,
/// `1 - |z|^2` loses enough digits that rounding alone breaks sampled
/// inequalities at the 1e-9 level.
pub const BOUNDARY_CAP: f64 = 1e-5;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Generator for chunk `chunk` of a sampling run seeded with `seed`.
pub fn chunk_rng(seed: u64, chunk: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(splitmix(seed ^ splitmix(chunk)))
}

/// Maps `f` over `n` samples in parallel; output order is the sample order.
pub fn par_samples<T: Send>(n: usize, seed: u64, f: impl Fn(&mut ChaCha8Rng) -> T + Sync) -> Vec<T> {
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = chunk_rng(seed, c as u64);
            let len = CHUNK.min(n - c * CHUNK);
            (0..len).map(|_| f(&mut rng)).collect::<Vec<T>>()
        })
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

fn cap(z: C64) -> C64 {
    let m = z.norm();
    if m > 1.0 - BOUNDARY_CAP {
        z * ((1.0 - BOUNDARY_CAP) / m)
    } else {
        z
    }
}

/// A point of the closed horodisc `{|sigma - z|^2 / (1 - |z|^2) <= r}`,
/// i.e. the Euclidean disc of centre `sigma/(1+r)` and radius `r/(1+r)`.
/// A third of the samples are area-uniform, a third lie on the horocycle and
/// a third cluster at the tangency point.
pub fn sample_horodisc(rng: &mut impl Rng, sigma: C64, r: f64) -> C64 {
    let centre = sigma / (1.0 + r);
    let radius = r / (1.0 + r);
    let z = match rng.gen_range(0..3) {
        0 => centre + C64::from_polar(radius * rng.gen::<f64>().sqrt(), rng.gen_range(0.0..std::f64::consts::TAU)),
        1 => centre + C64::from_polar(radius, rng.gen_range(0.0..std::f64::consts::TAU)),
        _ => {
            let angle = rng.gen_range(-1.0..1.0) * 10f64.powf(-rng.gen_range(0.0..6.0));
            let shrink = 1.0 - 0.1 * rng.gen::<f64>();
            centre + sigma * C64::from_polar(radius * shrink, angle)
        }
    };
    cap(z)
}

/// A point of the disc, half area-uniform and half close to the circle.
pub fn sample_disc(rng: &mut impl Rng) -> C64 {
    let modulus = if rng.gen_bool(0.5) {
        rng.gen::<f64>().sqrt()
    } else {
        1.0 - 10f64.powf(-rng.gen_range(0.0..10.0))
    };
    cap(C64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU)))
}

/// A point of a Busemann sublevel set (product of horodiscs, with disc
/// factors for infinite radii). Rounding may put a sample slightly outside
/// the set; callers filter on [`BusemannSublevel::excess`].
pub fn sample_sublevel(rng: &mut impl Rng, set: &BusemannSublevel) -> (C64, C64) {
    let mut coord = |j: usize| {
        let r = set.factor_radius(j);
        if r.is_finite() {
            sample_horodisc(rng, set.center().coord(j), r)
        } else {
            sample_disc(rng)
        }
    };
    (coord(1), coord(2))
}

/// Draws a point of the set, retrying up to 32 times when rounding puts the
/// candidate outside it.
pub fn sample_sublevel_member(rng: &mut impl Rng, set: &BusemannSublevel) -> Option<(C64, C64)> {
    (0..32).map(|_| sample_sublevel(rng, set)).find(|&p| set.excess(p) <= 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::horocycle_value_raw;
    use crate::geometry::BidiscBoundaryPoint;

    #[test]
    fn horodisc_samples_stay_in_the_horodisc() {
        let sigma = C64::from_polar(1.0, 0.7);
        let mut rng = chunk_rng(7, 0);
        for r in [0.25, 1.0, 4.0] {
            for _ in 0..2000 {
                let z = sample_horodisc(&mut rng, sigma, r);
                assert!(z.norm() <= 1.0 - BOUNDARY_CAP * 0.5);
                assert!(horocycle_value_raw(sigma, z) <= r * (1.0 + 1e-6));
            }
        }
    }

    #[test]
    fn parallel_sampling_is_deterministic() {
        let a = par_samples(3000, 11, |rng| rng.gen::<u64>());
        let b = par_samples(3000, 11, |rng| rng.gen::<u64>());
        assert_eq!(a, b);
        assert_eq!(a.len(), 3000);
        assert_ne!(a, par_samples(3000, 12, |rng| rng.gen::<u64>()));
    }

    #[test]
    fn sublevel_members() {
        let x = BidiscBoundaryPoint::new(C64::new(1.0, 0.0), C64::new(0.3, 0.0)).unwrap();
        let set = BusemannSublevel::new(x, 1.0, 1.0, 1.0).unwrap();
        let mut rng = chunk_rng(1, 1);
        for _ in 0..500 {
            let p = sample_sublevel_member(&mut rng, &set).unwrap();
            assert!(set.contains_raw(p));
        }
    }
}
