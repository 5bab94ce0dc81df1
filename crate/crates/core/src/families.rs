//! The homogeneous solution families as evaluable objects.
//!
//! Every solution is stored in a canonical frame and evaluated by rotating
//! the input point back into that frame first. Outside its positivity set a
//! solution is extended by zero; this is only an evaluation convention and
//! says nothing about weak-solution status across the free boundary.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::params::{normalize_angle, to_polar, HomogeneityParams};
use crate::special::{Jet, UpsilonProfile};

/// Angular tolerance for flap contact: arcs may share a boundary ray.
const ARC_CONTACT_TOL: f64 = 1e-12;

/// An open angular sector `(theta_start, theta_end)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeSpec {
    pub theta_start: f64,
    pub theta_end: f64,
}

impl ConeSpec {
    pub fn new(theta_start: f64, width: f64) -> Result<Self> {
        if !(width > 0.0 && width <= TAU) {
            return domain(format!("cone width must lie in (0, 2π], got {width}"));
        }
        Ok(Self {
            theta_start,
            theta_end: theta_start + width,
        })
    }

    pub fn width(&self) -> f64 {
        self.theta_end - self.theta_start
    }

    /// Offset of `theta` from the start ray, in `[0, 2π)`.
    pub fn offset(&self, theta: f64) -> f64 {
        normalize_angle(theta - self.theta_start)
    }

    pub fn contains(&self, theta: f64) -> bool {
        let d = self.offset(theta);
        d > 0.0 && d < self.width()
    }

    /// Whether the open sectors intersect; sharing a boundary ray is allowed.
    pub fn overlaps(&self, other: &ConeSpec) -> bool {
        let d12 = normalize_angle(other.theta_start - self.theta_start);
        let d21 = normalize_angle(self.theta_start - other.theta_start);
        d12 < self.width() - ARC_CONTACT_TOL || d21 < other.width() - ARC_CONTACT_TOL
    }
}

/// Opening `T_c` of the resonant cone: `2π - 2 arctan(1/c)` for `c > 0`,
/// `-2 arctan(1/c)` for `c < 0`.
pub fn resonant_cone_width(c: f64) -> Result<f64> {
    if c == 0.0 || !c.is_finite() {
        return domain(format!("resonant cone needs a finite c != 0, got {c}"));
    }
    Ok(if c > 0.0 {
        TAU - 2.0 * (1.0 / c).atan()
    } else {
        -2.0 * (1.0 / c).atan()
    })
}

/// One rotated acute resonant cone of a glued solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Flap {
    pub rotation: f64,
    pub c: f64,
}

impl Flap {
    fn cone(&self) -> ConeSpec {
        ConeSpec {
            theta_start: self.rotation,
            theta_end: self.rotation + resonant_cone_width(self.c).expect("validated flap"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum SolutionKind {
    /// `C_a |x|^a`, `a > 1`.
    Radial,
    /// `2^(a/2)/a^a · (x₂)₊^a`.
    HalfPlane,
    /// `2^(a/2)/a^a · |x₂|^a`.
    Slab,
    /// `2^(3/4) √(x₂ - c x₁ + c|x|)` on its cone, `a = 1/2`.
    ResonantCone { c: f64 },
    /// `2^(a/2)/a^a · r^a Υ(θ)^a` on `θ ∈ (0, 2 t_*)`.
    Implicit(Box<UpsilonProfile>),
    /// `(x₂² + 2√m x₁x₂)/2` on `{x₂(x₂ + 2√m x₁) > 0}`, `a = 2`.
    ExplicitA2 { m: f64 },
    /// Disjoint rotated acute resonant cones, `a = 1/2`.
    MultiFlap(Vec<Flap>),
}

/// A homogeneous solution together with the rotation applied to its inputs.
#[derive(Debug, Clone, Serialize)]
pub struct Solution {
    params: HomogeneityParams,
    kind: SolutionKind,
    rotation: f64,
}

fn resonant_params() -> HomogeneityParams {
    HomogeneityParams::from_a(0.5).expect("a = 1/2 is valid")
}

fn require_a(params: &HomogeneityParams, a: f64, what: &str) -> Result<()> {
    if params.a() != a {
        return domain(format!("{what} requires a = {a}, got a = {}", params.a()));
    }
    Ok(())
}

impl Solution {
    /// `u = C_a |x|^a` with `C_a = (2(a-1))^(a/2) / a^(3a/2)`.
    pub fn radial(params: HomogeneityParams) -> Result<Self> {
        if params.a() <= 1.0 {
            return domain(format!(
                "the radial solution requires a > 1 (gamma in (0,2)), got a = {}",
                params.a()
            ));
        }
        Ok(Self::canonical(params, SolutionKind::Radial))
    }

    pub fn half_plane(params: HomogeneityParams) -> Self {
        Self::canonical(params, SolutionKind::HalfPlane)
    }

    pub fn slab(params: HomogeneityParams) -> Self {
        Self::canonical(params, SolutionKind::Slab)
    }

    pub fn resonant_cone(params: HomogeneityParams, c: f64) -> Result<Self> {
        require_a(&params, 0.5, "the resonant cone")?;
        resonant_cone_width(c)?;
        Ok(Self::canonical(params, SolutionKind::ResonantCone { c }))
    }

    /// The implicitly defined family built on `Υ`; needs `a ≠ 1/2` and
    /// `t_* <= π` so that the positivity cone fits in the plane.
    pub fn implicit(profile: UpsilonProfile) -> Result<Self> {
        let params = profile.context().psi_context().params();
        if params.a() == 0.5 {
            return domain("a = 1/2 profiles are the resonant or half-plane families, not the implicit one");
        }
        if !profile.context().is_admissible() {
            return domain(format!(
                "t_* = {} exceeds π: the positivity cone (0, 2t_*) does not fit in the plane",
                profile.t_star()
            ));
        }
        Ok(Self::canonical(params, SolutionKind::Implicit(Box::new(profile))))
    }

    pub fn explicit_a2(m: f64) -> Result<Self> {
        if !(m > 0.0) || !m.is_finite() {
            return domain(format!("the explicit a = 2 solution needs m > 0, got {m}"));
        }
        let params = HomogeneityParams::from_a(2.0).expect("a = 2 is valid");
        Ok(Self::canonical(params, SolutionKind::ExplicitA2 { m }))
    }

    /// Glues rotated acute resonant cones `(rotation, c)` with `c < 0`.
    pub fn multi_flap(flaps: &[(f64, f64)]) -> Result<Self> {
        if flaps.is_empty() {
            return domain("a glued solution needs at least one flap");
        }
        let mut built: Vec<Flap> = Vec::with_capacity(flaps.len());
        for &(rotation, c) in flaps {
            if !(c < 0.0) {
                return domain(format!("flaps must be acute cones (c < 0), got c = {c}"));
            }
            if !rotation.is_finite() {
                return domain(format!("invalid flap rotation {rotation}"));
            }
            let flap = Flap {
                rotation: normalize_angle(rotation),
                c,
            };
            if let Some(other) = built.iter().find(|f| f.cone().overlaps(&flap.cone())) {
                return Err(Error::Overlap(format!(
                    "flap (rotation {}, c {}) intersects flap (rotation {}, c {})",
                    flap.rotation, flap.c, other.rotation, other.c
                )));
            }
            built.push(flap);
        }
        Ok(Self::canonical(resonant_params(), SolutionKind::MultiFlap(built)))
    }

    fn canonical(params: HomogeneityParams, kind: SolutionKind) -> Self {
        Self {
            params,
            kind,
            rotation: 0.0,
        }
    }

    /// The same solution rotated counter-clockwise by `angle`.
    pub fn rotated(mut self, angle: f64) -> Self {
        self.rotation = normalize_angle(self.rotation + angle);
        self
    }

    pub fn params(&self) -> HomogeneityParams {
        self.params
    }

    pub fn kind(&self) -> &SolutionKind {
        &self.kind
    }

    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    pub fn degree(&self) -> f64 {
        self.params.a()
    }

    pub fn label(&self) -> String {
        let a = self.params.a();
        match &self.kind {
            SolutionKind::Radial => format!("radial(a={a})"),
            SolutionKind::HalfPlane => format!("half-plane(a={a})"),
            SolutionKind::Slab => format!("slab(a={a})"),
            SolutionKind::ResonantCone { c } => format!("cone(c={c})"),
            SolutionKind::Implicit(p) => format!("implicit(a={a},m={})", p.m()),
            SolutionKind::ExplicitA2 { m } => format!("explicit-a2(m={m})"),
            SolutionKind::MultiFlap(f) => format!("multi-flap({} flaps)", f.len()),
        }
    }

    /// The input point expressed in the canonical frame.
    fn to_canonical(&self, x1: f64, x2: f64) -> (f64, f64) {
        if self.rotation == 0.0 {
            return (x1, x2);
        }
        let (s, c) = self.rotation.sin_cos();
        (c * x1 + s * x2, -s * x1 + c * x2)
    }

    /// `u(x)`, extended by zero outside the positivity set.
    pub fn evaluate(&self, x1: f64, x2: f64) -> f64 {
        let (x1, x2) = self.to_canonical(x1, x2);
        if x1 == 0.0 && x2 == 0.0 {
            return 0.0;
        }
        let a = self.params.a();
        let k = self.params.profile_scale();
        match &self.kind {
            SolutionKind::Radial => radial_coefficient(a) * x1.hypot(x2).powf(a),
            SolutionKind::HalfPlane => k * x2.max(0.0).powf(a),
            SolutionKind::Slab => k * x2.abs().powf(a),
            SolutionKind::ResonantCone { c } => resonant_value(*c, x1, x2),
            SolutionKind::Implicit(profile) => {
                let p = to_polar(x1, x2).expect("origin handled above");
                if p.theta <= 0.0 || p.theta >= profile.width() {
                    return 0.0;
                }
                let y = profile.upsilon(p.theta).unwrap_or(0.0);
                k * (p.r * y).powf(a)
            }
            SolutionKind::ExplicitA2 { m } => {
                let q = x2 * (x2 + 2.0 * m.sqrt() * x1);
                if q > 0.0 {
                    0.5 * q
                } else {
                    0.0
                }
            }
            SolutionKind::MultiFlap(flaps) => {
                let theta = to_polar(x1, x2).expect("origin handled above").theta;
                match flaps.iter().find(|f| f.cone().contains(theta)) {
                    Some(f) => {
                        let (s, c) = f.rotation.sin_cos();
                        resonant_value(f.c, c * x1 + s * x2, -s * x1 + c * x2)
                    }
                    None => 0.0,
                }
            }
        }
    }

    pub fn in_positivity_set(&self, x1: f64, x2: f64) -> bool {
        self.evaluate(x1, x2) > 0.0
    }

    /// Angular sectors of the positivity set, in the rotated frame. The radial
    /// solution returns the full turn.
    pub fn positivity_arcs(&self) -> Vec<ConeSpec> {
        let arc = |start: f64, width: f64| ConeSpec {
            theta_start: self.rotation + start,
            theta_end: self.rotation + start + width,
        };
        match &self.kind {
            SolutionKind::Radial => vec![arc(0.0, TAU)],
            SolutionKind::HalfPlane => vec![arc(0.0, PI)],
            SolutionKind::Slab => vec![arc(0.0, PI), arc(PI, PI)],
            SolutionKind::ResonantCone { c } => {
                vec![arc(0.0, resonant_cone_width(*c).expect("validated"))]
            }
            SolutionKind::Implicit(p) => vec![arc(0.0, p.width())],
            SolutionKind::ExplicitA2 { m } => {
                let w = PI - (2.0 * m.sqrt()).atan();
                vec![arc(0.0, w), arc(PI, w)]
            }
            SolutionKind::MultiFlap(flaps) => flaps
                .iter()
                .map(|f| {
                    let cone = f.cone();
                    arc(cone.theta_start, cone.width())
                })
                .collect(),
        }
    }

    /// Whether the ray `θ = 0` (in the rotated frame) bounds the positivity set
    /// from below: `u` vanishes on it and is positive just above it.
    pub fn has_boundary_ray_at_zero(&self) -> bool {
        self.positivity_arcs()
            .iter()
            .any(|arc| arc.width() < TAU && normalize_angle(arc.theta_start).min(TAU - normalize_angle(arc.theta_start)) < 1e-12)
    }

    /// Analytic angular profile `y = (a/√2) g^(1/a)` and its derivatives at
    /// the angle `theta` of the rotated frame, when `theta` lies in the
    /// positivity set.
    pub fn angular_jet(&self, theta: f64) -> Option<Jet> {
        let theta = normalize_angle(theta - self.rotation);
        let a = self.params.a();
        let (s, c) = theta.sin_cos();
        match &self.kind {
            SolutionKind::Radial => Some(Jet {
                y: ((a - 1.0) / a).sqrt(),
                dy: 0.0,
                d2y: 0.0,
            }),
            SolutionKind::HalfPlane => (s > 0.0).then_some(Jet { y: s, dy: c, d2y: -s }),
            SolutionKind::Slab => {
                if s > 0.0 {
                    Some(Jet { y: s, dy: c, d2y: -s })
                } else if s < 0.0 {
                    Some(Jet { y: -s, dy: -c, d2y: s })
                } else {
                    None
                }
            }
            SolutionKind::ResonantCone { c: k } => resonant_jet(*k, theta),
            SolutionKind::Implicit(p) => {
                if theta > 0.0 && theta < p.width() {
                    p.jet(theta).ok()
                } else {
                    None
                }
            }
            SolutionKind::ExplicitA2 { m } => {
                let r = m.sqrt();
                let (s2, c2) = (2.0 * theta).sin_cos();
                let q = 0.5 * (1.0 - c2) + r * s2;
                if q <= 0.0 {
                    return None;
                }
                let dq = s2 + 2.0 * r * c2;
                let d2q = 2.0 * c2 - 4.0 * r * s2;
                let y = q.sqrt();
                Some(Jet {
                    y,
                    dy: dq / (2.0 * y),
                    d2y: d2q / (2.0 * y) - dq * dq / (4.0 * y * y * y),
                })
            }
            SolutionKind::MultiFlap(flaps) => flaps
                .iter()
                .find(|f| f.cone().contains(theta))
                .and_then(|f| resonant_jet(f.c, theta - f.rotation)),
        }
    }
}

/// `C_a = (2(a-1))^(a/2) / a^(3a/2)`.
pub fn radial_coefficient(a: f64) -> f64 {
    (2.0 * (a - 1.0)).powf(0.5 * a) / a.powf(1.5 * a)
}

fn resonant_value(c: f64, x1: f64, x2: f64) -> f64 {
    let theta = normalize_angle(x2.atan2(x1));
    let width = resonant_cone_width(c).expect("validated");
    if theta <= 0.0 || theta >= width {
        return 0.0;
    }
    let r = x1.hypot(x2);
    // r - x1 without cancellation near the positive x₁-axis
    let r_minus_x1 = if x1 > 0.0 { x2 * x2 / (r + x1) } else { r - x1 };
    let arg = x2 + c * r_minus_x1;
    2f64.powf(0.75) * arg.max(0.0).sqrt()
}

fn resonant_jet(c: f64, theta: f64) -> Option<Jet> {
    let theta = normalize_angle(theta);
    let width = resonant_cone_width(c).ok()?;
    if !(theta > 0.0 && theta < width) {
        return None;
    }
    let (s, co) = theta.sin_cos();
    Some(Jet {
        y: s + c * (1.0 - co),
        dy: co + c * s,
        d2y: -s + c * co,
    })
}

/// The one-dimensional profile `((2-γ)² s₊² / 2)^(1/(2-γ))`.
pub fn one_d_profile(gamma: f64, s: f64) -> Result<f64> {
    if !(gamma < 2.0) {
        return domain(format!("one-dimensional profile needs gamma < 2, got {gamma}"));
    }
    let sp = s.max(0.0);
    Ok(((2.0 - gamma).powi(2) * sp * sp / 2.0).powf(1.0 / (2.0 - gamma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(a: f64) -> HomogeneityParams {
        HomogeneityParams::from_a(a).unwrap()
    }

    #[test]
    fn radial_examples() {
        let u = Solution::radial(params(2.0)).unwrap();
        assert!((u.evaluate(2.0, 0.0) - 1.0).abs() < 1e-15);
        assert_eq!(u.evaluate(0.0, 0.0), 0.0);
        let u = Solution::radial(params(1.5)).unwrap();
        // (3/2)^{-9/4}
        assert!((u.evaluate(1.0, 0.0) - 0.401600890).abs() < 1e-9);
        assert!(Solution::radial(params(0.5)).is_err());
        assert!(u.in_positivity_set(-3.0, 0.1));
    }

    #[test]
    fn half_plane_and_slab_examples() {
        let u = Solution::half_plane(params(2.0));
        assert!((u.evaluate(0.0, 3.0) - 4.5).abs() < 1e-14);
        assert_eq!(u.evaluate(5.0, -1.0), 0.0);
        assert_eq!(u.evaluate(0.0, 0.0), 0.0);
        let u = Solution::half_plane(params(0.5));
        assert!((u.evaluate(0.0, 1.0) - 2f64.powf(0.75)).abs() < 1e-15);
        assert!((2f64.powf(0.75) - 1.681793).abs() < 1e-6);

        let s = Solution::slab(params(2.0));
        assert!((s.evaluate(0.0, -3.0) - 4.5).abs() < 1e-14);
        assert_eq!(s.evaluate(7.0, 0.0), 0.0);
        assert_eq!(s.evaluate(0.0, 3.0), Solution::half_plane(params(2.0)).evaluate(0.0, 3.0));
    }

    #[test]
    fn resonant_cone_examples() {
        assert!((resonant_cone_width(1.0).unwrap() - 1.5 * PI).abs() < 1e-15);
        assert!((resonant_cone_width(-1.0).unwrap() - 0.5 * PI).abs() < 1e-15);
        for &c in &[0.1, 1.0, 7.0] {
            let w = resonant_cone_width(c).unwrap();
            assert!(w > PI && w < TAU);
            let w = resonant_cone_width(-c).unwrap();
            assert!(w > 0.0 && w < PI);
        }
        let u = Solution::resonant_cone(params(0.5), 1.0).unwrap();
        assert!((u.evaluate(0.0, 1.0) - 2f64.powf(1.25)).abs() < 1e-14);
        assert!((2f64.powf(1.25) - 2.378414).abs() < 1e-6);
        // c → 0 approaches the half-plane value 2^{3/4} at (0, 1)
        let near = Solution::resonant_cone(params(0.5), 1e-9).unwrap().evaluate(0.0, 1.0);
        assert!((near - 2f64.powf(0.75)).abs() < 1e-8);
        assert!(Solution::resonant_cone(params(2.0), 1.0).is_err());
        assert!(Solution::resonant_cone(params(0.5), 0.0).is_err());

        let acute = Solution::resonant_cone(params(0.5), -1.0).unwrap();
        let t = PI / 2.0 + 0.01;
        assert!(!acute.in_positivity_set(t.cos(), t.sin()));
        let t = PI / 2.0 - 0.01;
        assert!(acute.in_positivity_set(t.cos(), t.sin()));
    }

    #[test]
    fn resonant_cone_vanishes_on_its_boundary() {
        for &c in &[-2.0, -0.5, 0.5, 1.0] {
            let u = Solution::resonant_cone(params(0.5), c).unwrap();
            let w = resonant_cone_width(c).unwrap();
            for &eps in &[1e-2f64, 1e-4, 1e-6, 1e-8] {
                let lo = u.evaluate(eps.cos(), eps.sin());
                let hi = u.evaluate((w - eps).cos(), (w - eps).sin());
                assert!(lo < 10.0 * eps.sqrt() && hi < 10.0 * eps.sqrt(), "c={c} eps={eps}");
            }
        }
    }

    #[test]
    fn implicit_examples() {
        let p = UpsilonProfile::build(2.0, 1.0).unwrap();
        let width = p.width();
        let u = Solution::implicit(p).unwrap();
        let x = (0.5f64.cos(), 0.5f64.sin());
        assert!((u.evaluate(x.0, x.1) - 0.535660).abs() < 1e-6);
        let out = width + 0.1;
        assert_eq!(u.evaluate(out.cos(), out.sin()), 0.0);

        let u = Solution::implicit(UpsilonProfile::build(0.75, 0.0).unwrap()).unwrap();
        let h = Solution::half_plane(params(0.75));
        for k in 1..20 {
            let (x1, x2) = (-2.0 + 0.2 * k as f64, 0.3 + 0.1 * k as f64);
            assert!((u.evaluate(x1, x2) - h.evaluate(x1, x2)).abs() < 1e-8);
        }
        assert!(Solution::implicit(UpsilonProfile::build(0.5, 1.0).unwrap()).is_err());
        // t_* > π cannot be embedded in the plane
        let wide = UpsilonProfile::build(0.25, 3.0).unwrap();
        if wide.t_star() > PI {
            assert!(Solution::implicit(wide).is_err());
        }
    }

    #[test]
    fn explicit_a2_examples() {
        let u = Solution::explicit_a2(1.0).unwrap();
        assert!((u.evaluate(1.0, 1.0) - 1.5).abs() < 1e-15);
        assert_eq!(u.evaluate(1.0, 0.0), 0.0);
        assert!((u.evaluate(0.0, 1.0) - 0.5).abs() < 1e-15);
        assert!(Solution::explicit_a2(0.0).is_err());
        assert!(Solution::explicit_a2(-1.0).is_err());

        let implicit = Solution::implicit(UpsilonProfile::build(2.0, 1.0).unwrap()).unwrap();
        for k in 1..100 {
            let theta = 2.03 * k as f64 / 100.0;
            let r = 0.5 + 0.01 * k as f64;
            let (x1, x2) = (r * theta.cos(), r * theta.sin());
            assert!((u.evaluate(x1, x2) - implicit.evaluate(x1, x2)).abs() < 1e-8);
        }
    }

    #[test]
    fn one_d_profile_examples() {
        assert!((one_d_profile(1.0, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(one_d_profile(-3.0, -1.0).unwrap(), 0.0);
        assert!((one_d_profile(-2.0, 1.0).unwrap() - 8f64.powf(0.25)).abs() < 1e-15);
        assert!((8f64.powf(0.25) - 2f64.powf(0.75)).abs() < 1e-15);
        assert!(one_d_profile(2.0, 1.0).is_err());
        for &gamma in &[-5.0, -2.0, -0.3, 0.4, 1.0, 1.7] {
            let p = params(2.0 / (2.0 - gamma));
            let h = Solution::half_plane(p);
            for k in 0..100 {
                let s = 0.05 * k as f64;
                let diff = one_d_profile(gamma, s).unwrap() - h.evaluate(0.3, s);
                assert!(diff.abs() <= 1e-8 * (1.0 + h.evaluate(0.3, s)));
            }
        }
    }

    #[test]
    fn multi_flap_examples() {
        let glued = Solution::multi_flap(&[(0.0, -0.5), (PI, -2.0)]).unwrap();
        assert_eq!(glued.positivity_arcs().len(), 2);
        assert!((resonant_cone_width(-0.5).unwrap() - 2.0 * 2f64.atan()).abs() < 1e-15);
        assert!((resonant_cone_width(-2.0).unwrap() - 2.0 * 0.5f64.atan()).abs() < 1e-15);

        let single = Solution::multi_flap(&[(0.0, -1.0)]).unwrap();
        let cone = Solution::resonant_cone(params(0.5), -1.0).unwrap();
        for k in 0..50 {
            let t = TAU * k as f64 / 50.0 + 0.01;
            assert_eq!(single.evaluate(t.cos(), t.sin()), cone.evaluate(t.cos(), t.sin()));
        }
        assert!(matches!(
            Solution::multi_flap(&[(0.0, -1.0), (0.1, -1.0)]),
            Err(Error::Overlap(_))
        ));
        // touching flaps share a ray
        assert!(Solution::multi_flap(&[(0.0, -1.0), (0.5 * PI, -1.0)]).is_ok());
        assert!(Solution::multi_flap(&[(0.0, 1.0)]).is_err());
        assert!(Solution::multi_flap(&[]).is_err());

        // second flap is the c = -2 cone rotated by π
        let t = PI + 0.3;
        let rotated = Solution::resonant_cone(params(0.5), -2.0).unwrap().rotated(PI);
        assert!((glued.evaluate(t.cos(), t.sin()) - rotated.evaluate(t.cos(), t.sin())).abs() < 1e-14);
    }

    #[test]
    fn rotation_is_applied_to_inputs() {
        let u = Solution::half_plane(params(2.0)).rotated(0.5 * PI);
        // canonical upper half-plane is now the left half-plane
        assert!((u.evaluate(-3.0, 0.0) - 4.5).abs() < 1e-13);
        assert_eq!(u.evaluate(3.0, 0.0), 0.0);
        assert!(!u.has_boundary_ray_at_zero());
        assert!(Solution::half_plane(params(2.0)).has_boundary_ray_at_zero());
        assert!(!Solution::radial(params(2.0)).unwrap().has_boundary_ray_at_zero());
    }

    #[test]
    fn non_exclusive_constructors() {
        let p = params(0.5);
        Solution::half_plane(p);
        Solution::slab(p);
        assert!(Solution::resonant_cone(p, 0.5).is_ok());
        assert!(Solution::radial(p).is_err());
        let p = params(1.5);
        assert!(Solution::radial(p).is_ok());
    }

    #[test]
    fn angular_jet_matches_evaluation() {
        let sols = vec![
            Solution::radial(params(1.5)).unwrap(),
            Solution::half_plane(params(0.75)),
            Solution::slab(params(3.0)),
            Solution::resonant_cone(params(0.5), 1.0).unwrap(),
            Solution::explicit_a2(2.0).unwrap(),
            Solution::implicit(UpsilonProfile::build(1.5, 1.0).unwrap()).unwrap(),
            Solution::multi_flap(&[(0.0, -0.5), (PI, -2.0)]).unwrap(),
        ];
        for sol in &sols {
            let a = sol.degree();
            for arc in sol.positivity_arcs() {
                for k in 1..20 {
                    let theta = arc.theta_start + arc.width() * k as f64 / 20.0;
                    let jet = sol.angular_jet(theta).unwrap();
                    let g = sol.evaluate(theta.cos(), theta.sin());
                    let y = a / 2f64.sqrt() * g.powf(1.0 / a);
                    assert!((jet.y - y).abs() < 1e-10, "{} θ={theta}", sol.label());
                }
            }
        }
    }

    fn all_families() -> Vec<Solution> {
        vec![
            Solution::radial(params(2.0)).unwrap(),
            Solution::radial(params(4.0 / 3.0)).unwrap(),
            Solution::half_plane(params(0.25)).rotated(0.7),
            Solution::slab(params(1.5)),
            Solution::resonant_cone(params(0.5), -0.5).unwrap().rotated(2.0),
            Solution::resonant_cone(params(0.5), 1.0).unwrap(),
            Solution::explicit_a2(3.0).unwrap(),
            Solution::implicit(UpsilonProfile::build(0.75, 1.0).unwrap()).unwrap(),
            Solution::multi_flap(&[(0.0, -0.5), (PI, -2.0)]).unwrap(),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn homogeneity(x1 in -3.0f64..3.0, x2 in -3.0f64..3.0, lambda in 0.1f64..10.0) {
            prop_assume!(x1.hypot(x2) > 1e-3);
            for sol in all_families() {
                let base = sol.evaluate(x1, x2);
                let scaled = sol.evaluate(lambda * x1, lambda * x2);
                let expected = lambda.powf(sol.degree()) * base;
                prop_assert!(base >= 0.0);
                prop_assert!((scaled - expected).abs() <= 1e-10 * expected.abs().max(1e-300) + 1e-300,
                    "{}: {} vs {}", sol.label(), scaled, expected);
                prop_assert_eq!(sol.in_positivity_set(x1, x2), base > 0.0);
            }
        }
    }
}
