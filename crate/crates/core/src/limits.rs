//! Radial limit engine.
//!
//! Limits `lim_{t -> 1-} h(t)` are estimated on the schedule
//! `t_k = 1 - 2^-k`, `k = 4..=48`, with Aitken's delta-squared process
//! applied to the last three raw values.

use num_complex::Complex64 as C64;
use serde::Serialize;

/// First index of the radial schedule.
pub const FIRST_K: u32 = 4;
/// Last index of the radial schedule.
pub const LAST_K: u32 = 48;
/// Default absolute tolerance on accelerated increments.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// The schedule point `1 - 2^-k`.
#[inline]
pub fn schedule_point(k: u32) -> f64 {
    1.0 - schedule_gap(k)
}

/// The distance `2^-k` from the schedule point to 1.
#[inline]
pub fn schedule_gap(k: u32) -> f64 {
    (-(k as f64)).exp2()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitOptions {
    /// Absolute tolerance on consecutive accelerated values.
    pub tolerance: f64,
    pub first_k: u32,
    pub last_k: u32,
    /// Number of consecutive small increments required for convergence.
    pub stable_window: usize,
    /// Raw magnitude beyond which a monotone sequence counts as divergent.
    pub divergence_threshold: f64,
    /// Number of consecutive monotone samples past the threshold.
    pub divergence_window: usize,
}

impl Default for LimitOptions {
    fn default() -> Self {
        Self {
            tolerance: DEFAULT_TOLERANCE,
            first_k: FIRST_K,
            last_k: LAST_K,
            stable_window: 3,
            divergence_threshold: 1e8,
            divergence_window: 5,
        }
    }
}

impl LimitOptions {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn schedule(&self) -> impl Iterator<Item = u32> {
        self.first_k..=self.last_k
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitStatus {
    Converged,
    Infinite,
    NotConverged,
}

/// Estimated value of a radial limit with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitEstimate {
    /// The estimate; `±inf` when the status is [`LimitStatus::Infinite`].
    pub value: f64,
    pub status: LimitStatus,
    pub samples_used: usize,
    pub last_delta: f64,
}

impl LimitEstimate {
    pub fn is_converged(&self) -> bool {
        self.status == LimitStatus::Converged
    }

    pub fn is_infinite(&self) -> bool {
        self.status == LimitStatus::Infinite
    }

    /// The value when the limit converged or diverged.
    pub fn settled(&self) -> Option<f64> {
        (self.status != LimitStatus::NotConverged).then_some(self.value)
    }
}

/// Incremental form of the engine: feed raw values in schedule order.
#[derive(Debug, Clone)]
pub struct Accelerator {
    options: LimitOptions,
    raw: Vec<f64>,
    accelerated: Vec<f64>,
    small_steps: usize,
    last_delta: f64,
    outcome: Option<LimitEstimate>,
}

fn aitken(v0: f64, v1: f64, v2: f64) -> f64 {
    let d1 = v1 - v0;
    let d2 = v2 - v1;
    let den = d2 - d1;
    if d2 == 0.0 || den == 0.0 || !den.is_finite() {
        return v2;
    }
    // only accelerate sequences whose increments contract
    let ratio = d2 / d1;
    if !(ratio.abs() < 0.95) {
        return v2;
    }
    let accelerated = v2 - d2 * d2 / den;
    if accelerated.is_finite() {
        accelerated
    } else {
        v2
    }
}

impl Accelerator {
    pub fn new(options: LimitOptions) -> Self {
        Self {
            options,
            raw: Vec::new(),
            accelerated: Vec::new(),
            small_steps: 0,
            last_delta: f64::INFINITY,
            outcome: None,
        }
    }

    pub fn is_done(&self) -> bool {
        self.outcome.is_some()
    }

    fn settle(&mut self, value: f64, status: LimitStatus) {
        self.outcome = Some(LimitEstimate {
            value,
            status,
            samples_used: self.raw.len(),
            last_delta: self.last_delta,
        });
    }

    fn diverges_past_threshold(&self) -> bool {
        let w = self.options.divergence_window;
        let n = self.raw.len();
        if n < w {
            return false;
        }
        let tail = &self.raw[n - w..];
        let above = tail.iter().all(|v| v.abs() > self.options.divergence_threshold);
        let increasing = tail.windows(2).all(|p| p[1] > p[0]);
        let decreasing = tail.windows(2).all(|p| p[1] < p[0]);
        above && (increasing && tail[0] > 0.0 || decreasing && tail[0] < 0.0)
    }

    /// Logarithmic divergence: six strictly monotone values whose increments
    /// stay above 1e-3 and do not decay geometrically.
    fn diverges_slowly(&self) -> Option<f64> {
        let n = self.raw.len();
        if n < 6 {
            return None;
        }
        let tail = &self.raw[n - 6..];
        let steps: Vec<f64> = tail.windows(2).map(|p| p[1] - p[0]).collect();
        let sign = steps[0].signum();
        let uniform = steps.iter().all(|d| d.signum() == sign && d.abs() > 1e-3);
        let sustained = steps.windows(2).all(|p| p[1] / p[0] >= 0.9);
        (uniform && sustained).then_some(sign * f64::INFINITY)
    }

    /// Feeds the next raw value; returns the outcome once settled.
    pub fn push(&mut self, value: f64) -> Option<LimitEstimate> {
        if self.outcome.is_some() {
            return self.outcome;
        }
        if !value.is_finite() {
            let last = self.accelerated.last().or(self.raw.last()).copied().unwrap_or(f64::NAN);
            self.settle(last, LimitStatus::NotConverged);
            return self.outcome;
        }
        self.raw.push(value);
        if self.diverges_past_threshold() {
            let sign = value.signum();
            self.settle(sign * f64::INFINITY, LimitStatus::Infinite);
            return self.outcome;
        }
        if let Some(infinity) = self.diverges_slowly() {
            self.settle(infinity, LimitStatus::Infinite);
            return self.outcome;
        }
        let n = self.raw.len();
        if n >= 3 {
            let a = aitken(self.raw[n - 3], self.raw[n - 2], self.raw[n - 1]);
            if let Some(&previous) = self.accelerated.last() {
                self.last_delta = (a - previous).abs();
                if self.last_delta < self.options.tolerance {
                    self.small_steps += 1;
                } else {
                    self.small_steps = 0;
                }
            }
            self.accelerated.push(a);
            if self.small_steps >= self.options.stable_window {
                self.settle(a, LimitStatus::Converged);
            }
        }
        self.outcome
    }

    /// Closes the sequence, returning the outcome.
    pub fn finish(&mut self) -> LimitEstimate {
        if self.outcome.is_none() {
            let last = self.accelerated.last().or(self.raw.last()).copied().unwrap_or(f64::NAN);
            self.settle(last, LimitStatus::NotConverged);
        }
        self.outcome.expect("outcome was just set")
    }
}

/// Estimates `lim_{t -> 1-} h(t)` on the radial schedule.
pub fn radial_limit(mut h: impl FnMut(f64) -> f64, options: &LimitOptions) -> LimitEstimate {
    let mut engine = Accelerator::new(*options);
    for k in options.schedule() {
        if engine.push(h(schedule_point(k))).is_some() {
            break;
        }
    }
    engine.finish()
}

/// Estimate of a complex-valued radial limit; real and imaginary parts are
/// accelerated separately from a single evaluation per schedule point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexLimit {
    pub re: LimitEstimate,
    pub im: LimitEstimate,
}

impl ComplexLimit {
    pub fn value(&self) -> C64 {
        C64::new(self.re.value, self.im.value)
    }

    pub fn is_converged(&self) -> bool {
        self.re.is_converged() && self.im.is_converged()
    }

    pub fn last_delta(&self) -> f64 {
        self.re.last_delta.max(self.im.last_delta)
    }
}

pub fn radial_limit_complex(mut h: impl FnMut(f64) -> C64, options: &LimitOptions) -> ComplexLimit {
    let mut re = Accelerator::new(*options);
    let mut im = Accelerator::new(*options);
    for k in options.schedule() {
        let v = h(schedule_point(k));
        let (v_re, v_im) = if v.re.is_finite() && v.im.is_finite() {
            (v.re, v.im)
        } else {
            (f64::NAN, f64::NAN)
        };
        if !re.is_done() {
            re.push(v_re);
        }
        if !im.is_done() {
            im.push(v_im);
        }
        if re.is_done() && im.is_done() {
            break;
        }
    }
    ComplexLimit {
        re: re.finish(),
        im: im.finish(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::distance_from_origin_raw;

    #[test]
    fn converges_to_zero() {
        let est = radial_limit(|t| 1.0 - t, &LimitOptions::default());
        assert!(est.is_converged());
        assert!(est.value.abs() < 1e-8);
        assert!(est.last_delta <= 1e-8);
    }

    #[test]
    fn distance_difference_limit() {
        let est = radial_limit(|t| 0.5 * ((1.0 + t) * (1.0 + t) / (1.0 + t * t)).ln(), &LimitOptions::default());
        assert!(est.is_converged());
        assert!((est.value - 0.5 * 2f64.ln()).abs() < 1e-8);
    }

    #[test]
    fn logarithmic_blowup_is_infinite() {
        let est = radial_limit(|t| distance_from_origin_raw(C64::new(t, 0.0)), &LimitOptions::default());
        assert_eq!(est.status, LimitStatus::Infinite);
        assert_eq!(est.value, f64::INFINITY);
    }

    #[test]
    fn polynomial_blowup_is_infinite() {
        let est = radial_limit(|t| -1.0 / (1.0 - t), &LimitOptions::default());
        assert_eq!(est.status, LimitStatus::Infinite);
        assert_eq!(est.value, f64::NEG_INFINITY);
    }

    #[test]
    fn oscillation_is_not_converged() {
        let est = radial_limit(|t| (1.0 / (1.0 - t)).ln().sin(), &LimitOptions::default());
        assert_eq!(est.status, LimitStatus::NotConverged);
        assert_eq!(est.samples_used, (LAST_K - FIRST_K + 1) as usize);
    }

    #[test]
    fn slow_power_law_converges() {
        let est = radial_limit(|t| 2.0 + (1.0 - t).cbrt(), &LimitOptions::default());
        assert!(est.is_converged(), "{est:?}");
        assert!((est.value - 2.0).abs() < 1e-7);
    }

    #[test]
    fn complex_limit() {
        let est = radial_limit_complex(|t| C64::new(t * t, 1.0 - t), &LimitOptions::default());
        assert!(est.is_converged());
        assert!((est.value() - C64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn non_finite_values_truncate_the_schedule() {
        let est = radial_limit(|t| if t > 0.999 { f64::NAN } else { (1.0 / (1.0 - t)).ln().sin() }, &LimitOptions::default());
        assert_eq!(est.status, LimitStatus::NotConverged);
        assert!(est.samples_used < 10);
    }
}
