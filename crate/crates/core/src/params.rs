//! Parameter domain, polar geometry and numerical tolerances.
//!
//! A homogeneous solution `u(r, θ) = r^a g(θ)` of `Δu = γ u^(γ-1)` can only
//! exist when `γ < 2` and `a = 2 / (2 - γ)`. Both exponents are carried
//! together in [`HomogeneityParams`] so that formulas never re-derive one
//! from the other.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// The exponent pair `(γ, a)` with `a (2 - γ) = 2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityParams {
    gamma: f64,
    a: f64,
}

impl HomogeneityParams {
    /// Builds the pair from the nonlinearity exponent `γ`.
    pub fn from_gamma(gamma: f64) -> Result<Self> {
        if !gamma.is_finite() {
            return domain(format!("gamma must be finite, got {gamma}"));
        }
        if gamma >= 2.0 {
            return domain(format!(
                "gamma must be < 2 for a homogeneous solution to exist, got {gamma}"
            ));
        }
        if gamma == 0.0 {
            return domain("gamma must be nonzero");
        }
        let a = 2.0 / (2.0 - gamma);
        Ok(Self { gamma, a })
    }

    /// Builds the pair from the homogeneity degree `a`, with `γ = 2 - 2/a`.
    pub fn from_a(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return domain(format!("homogeneity degree a must be > 0, got {a}"));
        }
        if a == 1.0 {
            return domain("homogeneity degree a = 1 forces gamma = 0, which is excluded");
        }
        Ok(Self {
            gamma: 2.0 - 2.0 / a,
            a,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// Right-hand side `γ u^(γ-1)` of the equation for `u > 0`.
    pub fn source(&self, u: f64) -> f64 {
        self.gamma * u.powf(self.gamma - 1.0)
    }

    /// `2^(a/2) / a^a`, the factor relating `u = r^a g` to the profile `y`.
    pub fn profile_scale(&self) -> f64 {
        2f64.powf(0.5 * self.a) / self.a.powf(self.a)
    }

    pub fn is_superlinear(&self) -> bool {
        self.a > 1.0
    }
}

/// Validates an `(a, γ)` pair that was supplied externally.
pub fn check_consistent(a: f64, gamma: f64) -> Result<HomogeneityParams> {
    let p = HomogeneityParams::from_a(a)?;
    if (p.gamma - gamma).abs() > 1e-12 * gamma.abs().max(1.0) {
        return domain(format!(
            "a = {a} and gamma = {gamma} violate a (2 - gamma) = 2"
        ));
    }
    Ok(p)
}

/// A point of the punctured plane in polar form, `θ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarPoint {
    pub r: f64,
    pub theta: f64,
}

impl PolarPoint {
    pub fn new(r: f64, theta: f64) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() || !theta.is_finite() {
            return domain(format!("invalid polar point (r = {r}, theta = {theta})"));
        }
        Ok(Self {
            r,
            theta: normalize_angle(theta),
        })
    }
}

/// Maps an angle into `[0, 2π)`.
pub fn normalize_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if t >= TAU {
        0.0
    } else {
        t
    }
}

pub fn to_polar(x1: f64, x2: f64) -> Result<PolarPoint> {
    if x1 == 0.0 && x2 == 0.0 {
        return domain("the origin has no polar angle");
    }
    if !x1.is_finite() || !x2.is_finite() {
        return domain(format!("non-finite point ({x1}, {x2})"));
    }
    Ok(PolarPoint {
        r: x1.hypot(x2),
        theta: normalize_angle(x2.atan2(x1)),
    })
}

pub fn to_cartesian(p: PolarPoint) -> (f64, f64) {
    let (s, c) = p.theta.sin_cos();
    (p.r * c, p.r * s)
}

/// Tolerances shared by the quadrature, root finding and inversion routines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub quad_rel: f64,
    pub root_abs: f64,
    pub invert_abs: f64,
    pub fd_step: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quad_rel: 1e-10,
            root_abs: 1e-12,
            invert_abs: 1e-10,
            fd_step: 1e-5,
        }
    }
}

impl Tolerances {
    pub fn validated(self) -> Result<Self> {
        let all = [self.quad_rel, self.root_abs, self.invert_abs, self.fd_step];
        if all.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return domain(format!("tolerances must be strictly positive: {self:?}"));
        }
        if self.fd_step >= 1.0 {
            return domain(format!("fd_step must be < 1, got {}", self.fd_step));
        }
        Ok(self)
    }
}
