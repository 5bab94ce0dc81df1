//! The special functions behind the implicit angular profiles.
//!
//! For a homogeneity degree `a ≠ 1` and an integration constant `m`,
//!
//! ```text
//! ψ(y) = 1 + m y^(2(1-a)) - y²,       Ψ(y) = ∫_0^y dY / √ψ(Y),
//! ```
//!
//! `y_*` is the first positive zero of `ψ`, `t_* = Ψ(y_*)` and `Υ` is the
//! inverse of `Ψ` on `[0, t_*]`, evenly reflected to `[0, 2 t_*]`.
//!
//! `ψ` has a simple zero at `y_*` (`ψ'(y_*) < 0`), so the integrand of `Ψ`
//! behaves like `1/√(y_* - Y)` there. `Ψ` is therefore evaluated in two
//! pieces: `[0, y_*/2]` directly, and `[y_*/2, y_*]` after the substitution
//! `Y = y_* - s²`, which turns the integrand into the smooth function
//! `2 / √(ψ(y_* - s²) / s²)`. The quotient `ψ(y_* - ε)/ε` is formed with
//! `expm1`/`ln_1p` so that it keeps full relative accuracy as `ε → 0`.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::params::{HomogeneityParams, Tolerances};
use crate::quad::TanhSinh;
use crate::roots;

/// Below this distance from either end of `[0, 2 t_*]`, `Υ` is taken from
/// its two-term boundary expansion instead of numerical inversion.
pub const ENDPOINT_ASYMPTOTIC_WINDOW: f64 = 1e-6;

/// Geometric grid used to bracket `y_*`.
const SCAN_FROM: f64 = 1e-8;
const SCAN_TO: f64 = 1e8;
const SCAN_FACTOR: f64 = 2.0;

/// `(a, m)`: the data defining `ψ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PsiContext {
    a: f64,
    m: f64,
}

impl PsiContext {
    pub fn new(a: f64, m: f64) -> Result<Self> {
        HomogeneityParams::from_a(a)?;
        if !m.is_finite() {
            return domain(format!("m must be finite, got {m}"));
        }
        if a > 1.0 && m < 0.0 {
            return domain(format!("m must be >= 0 when a > 1 (a = {a}, m = {m})"));
        }
        Ok(Self { a, m })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn params(&self) -> HomogeneityParams {
        HomogeneityParams::from_a(self.a).expect("validated at construction")
    }

    /// `2(1 - a)`, the exponent of the `m` term.
    fn p(&self) -> f64 {
        2.0 * (1.0 - self.a)
    }

    fn m_term(&self, y: f64) -> f64 {
        if self.m == 0.0 {
            0.0
        } else {
            self.m * y.powf(self.p())
        }
    }

    pub(crate) fn psi_raw(&self, y: f64) -> f64 {
        1.0 + self.m_term(y) - y * y
    }

    /// `ψ(y) - 1`, without forming `ψ` first.
    pub(crate) fn psi_minus_one(&self, y: f64) -> f64 {
        self.m_term(y) - y * y
    }

    pub fn psi(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return domain(format!("psi is defined for y > 0, got {y}"));
        }
        Ok(self.psi_raw(y))
    }

    pub(crate) fn psi_prime_raw(&self, y: f64) -> f64 {
        let m_part = if self.m == 0.0 {
            0.0
        } else {
            self.p() * self.m * y.powf(1.0 - 2.0 * self.a)
        };
        m_part - 2.0 * y
    }

    /// `ψ'(y) = 2(1 - a) m y^(1-2a) - 2y`.
    pub fn psi_prime(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) {
            return domain(format!("psi' is defined for y > 0, got {y}"));
        }
        Ok(self.psi_prime_raw(y))
    }

    /// `1/√ψ(y)`, arranged so that it neither overflows nor forms `0·∞`
    /// as `y → 0` when `a > 1`.
    fn integrand(&self, y: f64) -> f64 {
        if self.a > 1.0 && self.m > 0.0 {
            let k = self.a - 1.0;
            let yk = y.powf(k);
            yk / (self.m + yk * yk - yk * yk * y * y).sqrt()
        } else {
            1.0 / self.psi_raw(y).sqrt()
        }
    }

    /// Magnitude of the terms of `ψ(y)`, used to judge its round-off.
    fn scale(&self, y: f64) -> f64 {
        1f64.max(y * y).max(self.m_term(y).abs())
    }

    /// First positive zero of `ψ`, together with the brackets of any later
    /// sign changes seen on the scan grid.
    pub fn find_y_star(&self, tol: &Tolerances) -> Result<YStar> {
        if self.m == 0.0 {
            return Ok(YStar {
                value: 1.0,
                later_sign_changes: Vec::new(),
            });
        }
        let scan = roots::scan_geometric(|y| self.psi_raw(y), SCAN_FROM, SCAN_TO, SCAN_FACTOR)
            .map_err(|_| {
                Error::Bracket(format!(
                    "psi has no sign change in [{SCAN_FROM:e}, {SCAN_TO:e}] for a = {}, m = {}",
                    self.a, self.m
                ))
            })?;
        let (lo, hi) = scan.first;
        let root = if lo == hi {
            lo
        } else {
            roots::brent(|y| self.psi_raw(y), lo, hi, 4.0 * f64::EPSILON * hi, 200)?
        };
        let residual = self.psi_raw(root).abs();
        if residual > tol.root_abs * self.scale(root) {
            return Err(Error::Convergence(format!(
                "|psi(y_*)| = {residual:e} exceeds root tolerance {:e}",
                tol.root_abs
            )));
        }
        Ok(YStar {
            value: root,
            later_sign_changes: scan.later,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YStar {
    pub value: f64,
    /// Brackets of further sign changes of `ψ` beyond `y_*` on the scan grid.
    pub later_sign_changes: Vec<(f64, f64)>,
}

/// `(a, m)` with the cached special values `y_*` and `t_*`.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileContext {
    psi: PsiContext,
    y_star: f64,
    t_star: f64,
    /// `Ψ(y_*/2)`, the value at which the two quadrature pieces meet.
    t_split: f64,
    later_sign_changes: Vec<(f64, f64)>,
    #[serde(skip)]
    tol: Tolerances,
}

impl ProfileContext {
    pub fn new(a: f64, m: f64) -> Result<Self> {
        Self::with_tolerances(a, m, Tolerances::default())
    }

    pub fn with_tolerances(a: f64, m: f64, tol: Tolerances) -> Result<Self> {
        let tol = tol.validated()?;
        let psi = PsiContext::new(a, m)?;
        let ys = psi.find_y_star(&tol)?;
        let y_star = ys.value;

        let slope = psi.psi_prime_raw(y_star);
        if !(slope < 0.0) {
            return Err(Error::Domain(format!(
                "psi'(y_*) = {slope} is not negative at y_* = {y_star} (a = {a}, m = {m})"
            )));
        }
        check_positive_below(&psi, y_star)?;

        let mut ctx = Self {
            psi,
            y_star,
            t_star: f64::NAN,
            t_split: f64::NAN,
            later_sign_changes: ys.later_sign_changes,
            tol,
        };
        ctx.t_split = ctx.lower(ctx.split())?;
        ctx.t_star = ctx.t_split + ctx.upper(ctx.split_s())?;
        if !(ctx.t_star.is_finite() && ctx.t_star > 0.0) {
            return Err(Error::Convergence(format!(
                "t_* = {} is not finite and positive",
                ctx.t_star
            )));
        }
        Ok(ctx)
    }

    pub fn psi_context(&self) -> &PsiContext {
        &self.psi
    }

    pub fn a(&self) -> f64 {
        self.psi.a
    }

    pub fn m(&self) -> f64 {
        self.psi.m
    }

    pub fn y_star(&self) -> f64 {
        self.y_star
    }

    pub fn t_star(&self) -> f64 {
        self.t_star
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn later_sign_changes(&self) -> &[(f64, f64)] {
        &self.later_sign_changes
    }

    /// `t_* <= π`, so that `[0, 2 t_*]` fits in one turn.
    pub fn is_admissible(&self) -> bool {
        self.t_star <= std::f64::consts::PI
    }

    fn split(&self) -> f64 {
        0.5 * self.y_star
    }

    fn split_s(&self) -> f64 {
        (self.y_star - self.split()).sqrt()
    }

    fn quad(&self) -> TanhSinh {
        TanhSinh::new(self.tol.quad_rel)
    }

    /// `∫_0^y dY/√ψ(Y)` for `y <= y_*/2`.
    fn lower(&self, y: f64) -> Result<f64> {
        if y == 0.0 {
            return Ok(0.0);
        }
        let psi = self.psi;
        Ok(self.quad().integrate(|n| psi.integrand(n.from_left), 0.0, y)?.value)
    }

    /// `ψ(y_* - ε)/ε`, exact up to the round-off in `y_*` itself.
    fn quotient(&self, eps: f64) -> f64 {
        let y = self.y_star;
        let m_part = if self.psi.m == 0.0 {
            0.0
        } else {
            let p = self.psi.p();
            self.psi.m * y.powf(p) * (p * (-eps / y).ln_1p()).exp_m1() / eps
        };
        m_part + (2.0 * y - eps)
    }

    /// `∫_{y_*-s²}^{y_*} dY/√ψ(Y) = ∫_0^s 2 dσ / √(ψ(y_* - σ²)/σ²)`.
    fn upper(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        Ok(self
            .quad()
            .integrate(|n| 2.0 / self.quotient(n.from_left * n.from_left).sqrt(), 0.0, s)?
            .value)
    }

    /// Limit of `ψ(y_* - ε)/ε` as `ε → 0`, i.e. `|ψ'(y_*)|`.
    fn apex_curvature(&self) -> f64 {
        -self.psi.psi_prime_raw(self.y_star)
    }

    /// `Ψ(y)` for `0 <= y <= y_*`.
    pub fn psi_integral(&self, y: f64) -> Result<f64> {
        if !(0.0..=self.y_star).contains(&y) {
            return domain(format!(
                "Psi is defined on [0, y_*] = [0, {}], got {y}",
                self.y_star
            ));
        }
        if y <= self.split() {
            self.lower(y)
        } else {
            Ok(self.t_star - self.upper((self.y_star - y).sqrt())?)
        }
    }

    /// Solves `Ψ(y) = τ` for `τ ∈ [0, t_*]`.
    fn invert(&self, tau: f64) -> Result<f64> {
        if tau <= 0.0 {
            return Ok(0.0);
        }
        if tau >= self.t_star {
            return Ok(self.y_star);
        }
        let a = self.psi.a;
        let m = self.psi.m;
        if tau <= self.t_split {
            // Newton in w = y^κ, where Ψ is close to linear near 0
            let kappa = if a > 1.0 && m > 0.0 { a } else { 1.0 };
            let w_hi = self.split().powf(kappa);
            let guess = if kappa == 1.0 {
                tau
            } else {
                a * m.sqrt() * tau
            };
            let w = solve_increasing(
                |w| {
                    let y = w.powf(1.0 / kappa);
                    let f = self.lower(y)? - tau;
                    let df = if kappa == 1.0 {
                        self.psi.integrand(y)
                    } else {
                        1.0 / (a * (m + y.powf(2.0 * (a - 1.0)) - y.powf(2.0 * a)).sqrt())
                    };
                    Ok((f, df))
                },
                0.0,
                w_hi,
                guess.clamp(0.0, w_hi),
            )?;
            Ok(w.powf(1.0 / kappa))
        } else {
            // Newton in s = √(y_* - y), where the remaining tail is close to linear
            let target = self.t_star - tau;
            let s_hi = self.split_s();
            let guess = 0.5 * target * self.apex_curvature().sqrt();
            let s = solve_increasing(
                |s| {
                    let f = self.upper(s)? - target;
                    let df = 2.0 / self.quotient(s * s).sqrt();
                    Ok((f, df))
                },
                0.0,
                s_hi,
                guess.clamp(0.0, s_hi),
            )?;
            Ok(self.y_star - s * s)
        }
    }

    /// Two-term expansion of `Υ` at `t → 0⁺`.
    fn boundary_expansion(&self, t: f64) -> f64 {
        let a = self.psi.a;
        let m = self.psi.m;
        if a > 1.0 && m > 0.0 {
            let c = a * m.sqrt();
            let beta = 2.0 * (a - 1.0) / a;
            let w = c * (t + c.powf(beta) * t.powf(1.0 + beta) / (2.0 * m * (1.0 + beta)));
            w.powf(1.0 / a)
        } else if m == 0.0 {
            t.sin()
        } else {
            let e = 3.0 - 2.0 * a;
            t + m * t.powf(e) / (2.0 * e)
        }
    }
}

/// Dense positivity check of ψ on `(0, y_*)`: geometric near 0, uniform above.
fn check_positive_below(psi: &PsiContext, y_star: f64) -> Result<()> {
    let geometric = (0..400).map(|k| y_star * 1e-8f64.powf(1.0 - k as f64 / 400.0));
    let uniform = (1..2000).map(|k| y_star * k as f64 / 2000.0);
    for y in geometric.chain(uniform) {
        if y > 0.0 && y < y_star && !(psi.psi_raw(y) > 0.0) {
            return Err(Error::Bracket(format!(
                "psi({y}) <= 0 below the bracketed root {y_star}: a sign change was missed"
            )));
        }
    }
    Ok(())
}

/// Safeguarded Newton iteration for an increasing function with
/// `f(lo) <= 0 <= f(hi)`; falls back to bisection when a step leaves the
/// bracket.
fn solve_increasing<F>(f: F, lo: f64, hi: f64, x0: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut x = x0;
    for _ in 0..200 {
        let (fx, dfx) = f(x)?;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx < 0.0 {
            lo = lo.max(x);
        } else {
            hi = hi.min(x);
        }
        let newton = x - fx / dfx;
        let next = if dfx > 0.0 && dfx.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        let step = (next - x).abs();
        x = next;
        if step <= 2.0 * f64::EPSILON * x.abs() || hi - lo <= 2.0 * f64::EPSILON * hi.abs() {
            return Ok(x);
        }
    }
    Err(Error::Convergence(format!(
        "inversion did not settle; bracket [{lo}, {hi}]"
    )))
}

/// `Υ` on `[0, 2 t_*]`, with its analytic derivatives.
#[derive(Debug, Clone, Serialize)]
pub struct UpsilonProfile {
    ctx: ProfileContext,
}

/// Value and first two derivatives of a profile at one point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub y: f64,
    pub dy: f64,
    pub d2y: f64,
}

impl UpsilonProfile {
    pub fn new(ctx: ProfileContext) -> Self {
        Self { ctx }
    }

    pub fn build(a: f64, m: f64) -> Result<Self> {
        Ok(Self::new(ProfileContext::new(a, m)?))
    }

    pub fn context(&self) -> &ProfileContext {
        &self.ctx
    }

    pub fn a(&self) -> f64 {
        self.ctx.a()
    }

    pub fn m(&self) -> f64 {
        self.ctx.m()
    }

    pub fn t_star(&self) -> f64 {
        self.ctx.t_star
    }

    pub fn y_star(&self) -> f64 {
        self.ctx.y_star
    }

    /// Right end of the support, `2 t_*`.
    pub fn width(&self) -> f64 {
        2.0 * self.ctx.t_star
    }

    /// Distance of `t` to the nearest zero of `Υ`, i.e. the argument of the
    /// unreflected branch.
    fn folded(&self, t: f64) -> Result<f64> {
        let width = self.width();
        if !(0.0..=width).contains(&t) {
            return domain(format!("Upsilon is defined on [0, 2 t_*] = [0, {width}], got {t}"));
        }
        Ok(t.min(width - t).max(0.0))
    }

    pub fn upsilon(&self, t: f64) -> Result<f64> {
        let tau = self.folded(t)?;
        let ctx = &self.ctx;
        if ctx.a() > 1.0 && ctx.m() == 0.0 {
            return Ok(tau.sin());
        }
        if tau < ENDPOINT_ASYMPTOTIC_WINDOW {
            return Ok(ctx.boundary_expansion(tau));
        }
        ctx.invert(tau)
    }

    fn open_interval(&self, t: f64) -> Result<()> {
        if !(t > 0.0 && t < self.width()) {
            return domain(format!(
                "derivatives of Upsilon are defined on (0, {}), got {t}",
                self.width()
            ));
        }
        Ok(())
    }

    /// `Υ' = ±√ψ(Υ)`, positive before `t_*` and negative after.
    pub fn upsilon_prime(&self, t: f64) -> Result<f64> {
        self.open_interval(t)?;
        let y = self.upsilon(t)?;
        Ok(self.prime_from_value(t, y))
    }

    fn prime_from_value(&self, t: f64, y: f64) -> f64 {
        if t == self.ctx.t_star {
            return 0.0;
        }
        let magnitude = self.ctx.psi.psi_raw(y).max(0.0).sqrt();
        if t < self.ctx.t_star {
            magnitude
        } else {
            -magnitude
        }
    }

    /// `Υ'' = m(1 - a) Υ^(1-2a) - Υ`.
    pub fn upsilon_second(&self, t: f64) -> Result<f64> {
        self.open_interval(t)?;
        let y = self.upsilon(t)?;
        Ok(self.second_from_value(y))
    }

    fn second_from_value(&self, y: f64) -> f64 {
        let (a, m) = (self.ctx.a(), self.ctx.m());
        let m_part = if m == 0.0 {
            0.0
        } else {
            m * (1.0 - a) * y.powf(1.0 - 2.0 * a)
        };
        m_part - y
    }

    pub fn jet(&self, t: f64) -> Result<Jet> {
        self.open_interval(t)?;
        let y = self.upsilon(t)?;
        Ok(Jet {
            y,
            dy: self.prime_from_value(t, y),
            d2y: self.second_from_value(y),
        })
    }

    /// `Υ'(t) - 1` on `(0, t_*)`, without the cancellation of forming `Υ'`.
    pub fn upsilon_prime_minus_one(&self, t: f64) -> Result<f64> {
        self.open_interval(t)?;
        let y = self.upsilon(t)?;
        let d = self.ctx.psi.psi_minus_one(y);
        let root = self.ctx.psi.psi_raw(y).max(0.0).sqrt();
        Ok(if t <= self.ctx.t_star {
            d / (root + 1.0)
        } else {
            -root - 1.0
        })
    }

    /// One-sided limits of `(Υ', Υ'')` at `t = 0⁺`; the values at `2t_*⁻`
    /// follow by `Υ'(2t_* - t) = -Υ'(t)` and `Υ''(2t_* - t) = Υ''(t)`.
    pub fn boundary_derivatives(&self) -> (f64, f64) {
        let (a, m) = (self.ctx.a(), self.ctx.m());
        if m == 0.0 {
            return (1.0, 0.0);
        }
        if a > 1.0 {
            return (f64::INFINITY, f64::NEG_INFINITY);
        }
        let second = if a < 0.5 {
            0.0
        } else if a == 0.5 {
            m / 2.0
        } else {
            (m * (1.0 - a)).signum() * f64::INFINITY
        };
        (1.0, second)
    }
}

/// One row of a parameter scan over `m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibleEntry {
    pub m: f64,
    pub y_star: Option<f64>,
    pub t_star: Option<f64>,
    pub admissible: bool,
    pub error: Option<String>,
}

/// Computes `(y_*, t_*)` for each `m` and flags `t_* <= π`. Entries that fail
/// record their error; the scan itself never fails.
pub fn scan_admissible_m(a: f64, m_grid: &[f64], tol: Tolerances) -> Vec<AdmissibleEntry> {
    m_grid
        .par_iter()
        .map(|&m| match ProfileContext::with_tolerances(a, m, tol) {
            Ok(ctx) => AdmissibleEntry {
                m,
                y_star: Some(ctx.y_star),
                t_star: Some(ctx.t_star),
                admissible: ctx.is_admissible(),
                error: None,
            },
            Err(e) => AdmissibleEntry {
                m,
                y_star: None,
                t_star: None,
                admissible: false,
                error: Some(e.to_string()),
            },
        })
        .collect()
}

/// `t_*` of the resonant degree `a = 1/2` in closed form.
pub fn resonant_t_star(m: f64) -> f64 {
    (m / 2.0).atan() + FRAC_PI_2
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6, PI};

    const SQRT_2: f64 = std::f64::consts::SQRT_2;

    fn ctx(a: f64, m: f64) -> ProfileContext {
        ProfileContext::new(a, m).unwrap()
    }

    // --- closed-form oracles, independent of quadrature -------------------

    fn resonant_closed(m: f64, t: f64) -> f64 {
        t.sin() + 0.5 * m * (1.0 - t.cos())
    }

    fn quadratic_closed(m: f64, t: f64) -> f64 {
        (0.5 * (1.0 - (2.0 * t).cos()) + m.sqrt() * (2.0 * t).sin()).max(0.0).sqrt()
    }

    fn quadratic_t_star(m: f64) -> f64 {
        // maximiser of the closed form: tan 2t = -2√m
        0.5 * (FRAC_PI_2 + (0.5 / m.sqrt()).atan())
    }

    #[test]
    fn psi_values() {
        let p = PsiContext::new(0.75, 0.0).unwrap();
        assert_eq!(p.psi(1.0).unwrap(), 0.0);
        let p = PsiContext::new(0.5, 2.0).unwrap();
        assert!(p.psi(1.0 + SQRT_2).unwrap().abs() < 1e-14);
        let p = PsiContext::new(2.0, 1.0).unwrap();
        assert_eq!(p.psi(1.0).unwrap(), 1.0);
        assert!(p.psi(0.0).is_err());
        assert!(p.psi(-1.0).is_err());
    }

    #[test]
    fn psi_blows_up_at_zero_for_superlinear_degree() {
        let p = PsiContext::new(1.5, 0.3).unwrap();
        let ys: Vec<f64> = (0..20).map(|k| 10f64.powi(-k)).collect();
        let vals: Vec<f64> = ys.iter().map(|&y| p.psi(y).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] > w[0]));
        assert!(vals[19] > 1e9);
    }

    #[test]
    fn psi_prime_values_and_finite_difference() {
        assert_eq!(PsiContext::new(0.3, 0.0).unwrap().psi_prime(1.0).unwrap(), -2.0);
        assert_eq!(PsiContext::new(0.5, 2.0).unwrap().psi_prime(1.0).unwrap(), 0.0);
        assert_eq!(PsiContext::new(2.0, 1.0).unwrap().psi_prime(1.0).unwrap(), -4.0);
        let h = Tolerances::default().fd_step;
        for &(a, m) in &[(0.25, -1.0), (0.75, 3.0), (1.5, 1.0), (2.0, 3.0)] {
            let p = PsiContext::new(a, m).unwrap();
            for &y in &[0.3, 0.8, 1.3] {
                let fd = (p.psi_raw(y + h) - p.psi_raw(y - h)) / (2.0 * h);
                assert!((fd - p.psi_prime(y).unwrap()).abs() < 1e-6, "a={a} m={m} y={y}");
            }
        }
    }

    #[test]
    fn invalid_contexts() {
        assert!(PsiContext::new(2.0, -0.1).is_err());
        assert!(PsiContext::new(1.0, 0.0).is_err());
        assert!(PsiContext::new(0.0, 1.0).is_err());
        assert!(PsiContext::new(0.5, f64::NAN).is_err());
    }

    #[test]
    fn y_star_values() {
        let tol = Tolerances::default();
        let y = |a, m| PsiContext::new(a, m).unwrap().find_y_star(&tol).unwrap().value;
        assert_eq!(y(0.75, 0.0), 1.0);
        assert!((y(0.5, 2.0) - (1.0 + SQRT_2)).abs() < 1e-14);
        // y⁴ - y² - 1 = 0
        let golden = ((1.0 + 5f64.sqrt()) / 2.0).sqrt();
        assert!((y(2.0, 1.0) - golden).abs() < 1e-14);
        assert!((golden - 1.272020).abs() < 1e-6);
    }

    #[test]
    fn y_star_is_first_root_with_negative_slope() {
        for &(a, m) in &[(0.25, -3.0), (0.25, 3.0), (0.75, -1.0), (1.5, 0.01), (3.0, 5.0)] {
            let c = ctx(a, m);
            assert!(c.psi_context().psi_prime(c.y_star()).unwrap() < 0.0);
            let psi = c.psi_context();
            for k in 1..1000 {
                let y = c.y_star() * k as f64 / 1000.0;
                assert!(psi.psi(y).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn psi_integral_values() {
        let c = ctx(0.75, 0.0);
        assert!((c.psi_integral(0.5).unwrap() - FRAC_PI_6).abs() < 1e-12);
        assert!((c.psi_integral(1.0).unwrap() - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(c.psi_integral(0.0).unwrap(), 0.0);
        assert!(c.psi_integral(1.0 + 1e-9).is_err());
        assert!(c.psi_integral(-1e-9).is_err());

        let c = ctx(0.5, 2.0);
        assert!((c.psi_integral(c.y_star()).unwrap() - 0.75 * PI).abs() < 1e-12);
    }

    #[test]
    fn psi_integral_is_strictly_increasing() {
        for &(a, m) in &[(0.25, -1.0), (0.75, 1.0), (2.0, 3.0)] {
            let c = ctx(a, m);
            let vals: Vec<f64> = (0..=100)
                .map(|k| c.psi_integral(c.y_star() * k as f64 / 100.0).unwrap())
                .collect();
            assert!(vals.windows(2).all(|w| w[1] > w[0]), "a={a} m={m}");
        }
    }

    #[test]
    fn t_star_values() {
        for &a in &[0.25, 0.75, 1.5, 2.0] {
            assert!((ctx(a, 0.0).t_star() - FRAC_PI_2).abs() < 1e-12, "a={a}");
        }
        assert!((ctx(0.5, 2.0).t_star() - 0.75 * PI).abs() < 1e-12);
        let t = ctx(2.0, 1.0).t_star();
        assert!((t - quadratic_t_star(1.0)).abs() < 1e-12);
        assert!((t - 1.017222).abs() < 1e-6);
    }

    #[test]
    fn upsilon_values() {
        let u = UpsilonProfile::build(0.75, 0.0).unwrap();
        assert!((u.upsilon(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-12);
        let u = UpsilonProfile::build(0.5, 2.0).unwrap();
        assert!((u.upsilon(FRAC_PI_2).unwrap() - 2.0).abs() < 1e-11);
        let u = UpsilonProfile::build(2.0, 1.0).unwrap();
        let v = u.upsilon(0.5).unwrap();
        assert!((v - quadratic_closed(1.0, 0.5)).abs() < 1e-11);
        assert!((v - 1.035046).abs() < 1e-6);
        assert!(u.upsilon(-0.1).is_err());
        assert!(u.upsilon(u.width() + 1e-9).is_err());
        assert_eq!(u.upsilon(0.0).unwrap(), 0.0);
        assert_eq!(u.upsilon(u.width()).unwrap(), 0.0);
        assert_eq!(u.upsilon(u.t_star()).unwrap(), u.y_star());
    }

    #[test]
    fn derivative_values() {
        let u = UpsilonProfile::build(0.75, 0.0).unwrap();
        assert!((u.upsilon_prime(PI / 3.0).unwrap() - 0.5).abs() < 1e-11);
        assert!((u.upsilon_second(FRAC_PI_2).unwrap() + 1.0).abs() < 1e-11);

        let u = UpsilonProfile::build(0.5, 2.0).unwrap();
        assert!((u.upsilon_prime(FRAC_PI_2).unwrap() - 1.0).abs() < 1e-10);
        assert!((u.upsilon_second(FRAC_PI_2).unwrap() + 1.0).abs() < 1e-10);

        for &(a, m) in &[(0.25, 1.0), (2.0, 1.0)] {
            let u = UpsilonProfile::build(a, m).unwrap();
            assert_eq!(u.upsilon_prime(u.t_star()).unwrap(), 0.0);
        }
        let u = UpsilonProfile::build(2.0, 1.0).unwrap();
        let expected = -u.y_star().powi(-3) - u.y_star();
        assert!((u.upsilon_second(u.t_star()).unwrap() - expected).abs() < 1e-12);
        assert!((expected + 1.758).abs() < 1e-3);
        assert!(u.upsilon_prime(0.0).is_err());
        assert!(u.upsilon_second(u.width()).is_err());
    }

    #[test]
    fn second_derivative_matches_finite_difference() {
        let h = 1e-3;
        for &(a, m) in &[(0.25, -1.0), (0.75, 1.0), (1.5, 1.0)] {
            let u = UpsilonProfile::build(a, m).unwrap();
            for k in 1..10 {
                let t = u.width() * k as f64 / 10.0;
                let f = |t| u.upsilon(t).unwrap();
                let fd = (f(t + h) - 2.0 * f(t) + f(t - h)) / (h * h);
                assert!((fd - u.upsilon_second(t).unwrap()).abs() < 1e-5, "a={a} m={m} t={t}");
            }
        }
    }

    #[test]
    fn inversion_and_symmetry() {
        for &(a, m) in &[(0.25, -1.0), (0.25, 3.0), (0.75, 1.0), (1.5, 1.0), (2.0, 3.0)] {
            let u = UpsilonProfile::build(a, m).unwrap();
            let c = u.context();
            for k in 1..200 {
                let t = u.t_star() * k as f64 / 200.0;
                let y = u.upsilon(t).unwrap();
                assert!((c.psi_integral(y).unwrap() - t).abs() <= 1e-9, "a={a} m={m} t={t}");
                let mirrored = u.upsilon(u.width() - t).unwrap();
                assert!((y - mirrored).abs() <= 1e-12);
                assert!(y > 0.0 && y <= u.y_star());
            }
        }
    }

    #[test]
    fn boundary_expansion_matches_inversion() {
        for &(a, m) in &[(0.25, 3.0), (0.75, -1.0), (1.5, 1.0), (2.0, 1.0), (4.0, 2.0)] {
            let c = ctx(a, m);
            let t = 2.0 * ENDPOINT_ASYMPTOTIC_WINDOW;
            let inv = c.invert(t).unwrap();
            let asym = c.boundary_expansion(t);
            assert!((inv - asym).abs() <= 1e-10 * inv.max(1e-3), "a={a} m={m}: {inv} vs {asym}");
        }
    }

    #[test]
    fn closed_form_equivalences() {
        for &a in &[0.25, 0.75] {
            let u = UpsilonProfile::build(a, 0.0).unwrap();
            for k in 0..=400 {
                let t = PI * k as f64 / 400.0;
                assert!((u.upsilon(t).unwrap() - t.sin()).abs() <= 1e-9);
            }
        }
        for &m in &[-2.0, -0.5, 0.5, 2.0] {
            let u = UpsilonProfile::build(0.5, m).unwrap();
            assert!((u.t_star() - resonant_t_star(m)).abs() < 1e-9);
            for k in 0..=400 {
                let t = u.width() * k as f64 / 400.0;
                let expected = resonant_closed(m, t.min(u.width() - t));
                assert!((u.upsilon(t).unwrap() - expected).abs() <= 1e-9, "m={m} t={t}");
            }
        }
        for &m in &[1.0, 3.0] {
            let u = UpsilonProfile::build(2.0, m).unwrap();
            for k in 0..=400 {
                let t = u.width() * k as f64 / 400.0;
                let expected = quadratic_closed(m, t.min(u.width() - t));
                assert!((u.upsilon(t).unwrap() - expected).abs() <= 1e-8, "m={m} t={t}");
            }
        }
    }

    #[test]
    fn ode_and_first_integral_identities() {
        for &(a, m) in &[(0.25, -1.0), (0.25, 1.0), (0.75, 1.0), (1.5, 1.0), (2.0, 1.0), (2.0, 3.0)] {
            let u = UpsilonProfile::build(a, m).unwrap();
            let psi = u.context().psi_context();
            for k in 1..=200 {
                let t = u.width() * k as f64 / 201.0;
                let j = u.jet(t).unwrap();
                let ode = j.y * j.y + j.y * j.d2y + (a - 1.0) * (j.y * j.y + j.dy * j.dy - 1.0);
                assert!(ode.abs() <= 1e-8, "a={a} m={m} t={t} residual {ode}");
                let fi = j.dy * j.dy - psi.psi(j.y).unwrap();
                assert!(fi.abs() <= 1e-10);
            }
        }
    }

    #[test]
    fn scan_examples() {
        let tol = Tolerances::default();
        let s = scan_admissible_m(0.75, &[0.0], tol);
        assert_eq!(s.len(), 1);
        assert!((s[0].t_star.unwrap() - FRAC_PI_2).abs() < 1e-10 && s[0].admissible);
        let s = scan_admissible_m(0.5, &[2.0, -2.0], tol);
        assert!((s[0].t_star.unwrap() - 0.75 * PI).abs() < 1e-10 && s[0].admissible);
        assert!((s[1].t_star.unwrap() - 0.25 * PI).abs() < 1e-10 && s[1].admissible);
        let s = scan_admissible_m(2.0, &[-1.0, 1.0], tol);
        assert!(s[0].error.is_some() && !s[0].admissible);
        assert!(s[1].error.is_none());
    }

    #[test]
    fn boundary_derivative_limits() {
        let u = UpsilonProfile::build(0.25, 3.0).unwrap();
        assert_eq!(u.boundary_derivatives(), (1.0, 0.0));
        let u = UpsilonProfile::build(0.75, -1.0).unwrap();
        assert_eq!(u.boundary_derivatives().1, f64::NEG_INFINITY);
        let u = UpsilonProfile::build(1.5, 1.0).unwrap();
        assert_eq!(u.boundary_derivatives().0, f64::INFINITY);
    }
}
