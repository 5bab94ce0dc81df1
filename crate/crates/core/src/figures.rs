//! Figure data: profile curves and solution surfaces, as CSV with an SVG
//! rendering of each.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{domain, Error, Result};
use crate::families::Solution;
use crate::params::{HomogeneityParams, Tolerances};
use crate::report::{fmt_sig, Table};
use crate::special::{ProfileContext, UpsilonProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    Radial,
    HalfPlane,
    Slab,
    Cones,
    MultiFlap,
    CurvesSublinear,
    CurvesSuperlinear,
    Surfaces,
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "1" => FigureId::Radial,
            "2" => FigureId::HalfPlane,
            "3" => FigureId::Slab,
            "4" => FigureId::Cones,
            "5" => FigureId::MultiFlap,
            "6" => FigureId::CurvesSublinear,
            "7" => FigureId::CurvesSuperlinear,
            "surfaces" => FigureId::Surfaces,
            other => return domain(format!("unknown figure id '{other}' (expected 1-7 or surfaces)")),
        })
    }
}

impl FigureId {
    pub fn stem(&self) -> &'static str {
        match self {
            FigureId::Radial => "figure1",
            FigureId::HalfPlane => "figure2",
            FigureId::Slab => "figure3",
            FigureId::Cones => "figure4",
            FigureId::MultiFlap => "figure5",
            FigureId::CurvesSublinear => "figure6",
            FigureId::CurvesSuperlinear => "figure7",
            FigureId::Surfaces => "surfaces",
        }
    }

    pub fn all() -> [FigureId; 8] {
        [
            FigureId::Radial,
            FigureId::HalfPlane,
            FigureId::Slab,
            FigureId::Cones,
            FigureId::MultiFlap,
            FigureId::CurvesSublinear,
            FigureId::CurvesSuperlinear,
            FigureId::Surfaces,
        ]
    }
}

/// Parameters of one figure, frozen from its caption unless overridden.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureSpec {
    pub id: FigureId,
    pub a: f64,
    pub m: Vec<f64>,
    pub c: Vec<f64>,
    /// Intervals per curve; rows are `samples + 1`.
    pub samples: usize,
    /// Grid points per side of a surface.
    pub grid: usize,
}

impl FigureSpec {
    pub fn caption(id: FigureId) -> Self {
        let base = Self {
            id,
            a: 4.0 / 3.0,
            m: Vec::new(),
            c: Vec::new(),
            samples: 400,
            grid: 256,
        };
        match id {
            FigureId::Radial | FigureId::HalfPlane | FigureId::Slab => base,
            FigureId::Cones => Self { a: 0.5, c: vec![-1.0, -0.5, 0.5, 1.0], ..base },
            FigureId::MultiFlap => Self { a: 0.5, c: vec![-0.5, -2.0], ..base },
            FigureId::CurvesSublinear => Self { a: 0.25, m: vec![-3.0, -1.0, 1.0, 2.0, 3.0], ..base },
            FigureId::CurvesSuperlinear => Self {
                a: 1.5,
                m: vec![0.01, 0.2, 0.5, 1.0, 2.0, 3.0],
                ..base
            },
            FigureId::Surfaces => Self { a: 2.0, m: vec![1.0], ..base },
        }
    }

    /// Applies `key=value`; keys are `a`, `m`, `c` (comma lists), `samples`
    /// and `grid`.
    pub fn apply_override(&mut self, kv: &str) -> Result<()> {
        let (key, value) = kv
            .split_once('=')
            .ok_or_else(|| Error::Domain(format!("override '{kv}' is not key=value")))?;
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::Domain(format!("override '{kv}': '{s}' is not a number")))
        };
        let list = |s: &str| s.split(',').map(num).collect::<Result<Vec<f64>>>();
        let count = |s: &str| -> Result<usize> {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Domain(format!("override '{kv}': '{s}' is not a count")))
        };
        match key.trim() {
            "a" => self.a = num(value)?,
            "m" => self.m = list(value)?,
            "c" => self.c = list(value)?,
            "samples" => self.samples = count(value)?,
            "grid" => self.grid = count(value)?,
            other => return domain(format!("unknown override key '{other}'")),
        }
        if self.samples < 2 || self.samples % 2 == 1 || self.grid < 2 {
            return domain("samples must be even and >= 2, grid >= 2");
        }
        Ok(())
    }
}

/// One output file.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file_name: String,
    pub contents: String,
}

/// Renders every file of a figure, in a fixed order.
pub fn render(spec: &FigureSpec, tol: Tolerances) -> Result<Vec<Artifact>> {
    match spec.id {
        FigureId::CurvesSublinear | FigureId::CurvesSuperlinear => render_curves(spec, tol),
        _ => render_surfaces(spec, tol),
    }
}

/// `(t, Υ)` on `samples + 1` equispaced points of `[0, 2 t_*]`.
pub fn curve_points(profile: &UpsilonProfile, samples: usize) -> Result<Vec<(f64, f64)>> {
    let w = profile.width();
    (0..=samples)
        .map(|i| {
            // the midpoint is pinned to t_* itself
            let t = if 2 * i == samples { profile.t_star() } else { w * i as f64 / samples as f64 };
            Ok((t, profile.upsilon(t.min(w))?))
        })
        .collect()
}

fn render_curves(spec: &FigureSpec, tol: Tolerances) -> Result<Vec<Artifact>> {
    let curves: Vec<(f64, Vec<(f64, f64)>)> = spec
        .m
        .par_iter()
        .map(|&m| {
            let profile = UpsilonProfile::new(ProfileContext::with_tolerances(spec.a, m, tol)?);
            Ok((m, curve_points(&profile, spec.samples)?))
        })
        .collect::<Result<_>>()?;
    let stem = spec.id.stem();
    let mut out = Vec::new();
    for (m, pts) in &curves {
        let mut t = Table::new(["t", "upsilon"]);
        for (x, y) in pts {
            t.push(vec![fmt_sig(*x), fmt_sig(*y)]);
        }
        out.push(Artifact {
            file_name: format!("{stem}_m{}.csv", fmt_sig(*m)),
            contents: t.to_csv()?,
        });
    }
    out.push(Artifact {
        file_name: format!("{stem}.svg"),
        contents: curves_svg(spec, &curves),
    });
    Ok(out)
}

const PALETTE: [&str; 10] = [
    "#440154", "#482878", "#3e4989", "#31688e", "#26828e", "#1f9e89", "#35b779", "#6ece58", "#b5de2b", "#fde725",
];

fn curves_svg(spec: &FigureSpec, curves: &[(f64, Vec<(f64, f64)>)]) -> String {
    let (w, h, pad) = (640.0, 400.0, 40.0);
    let t_max = curves.iter().flat_map(|(_, p)| p.iter().map(|q| q.0)).fold(0.0, f64::max);
    let y_max = curves.iter().flat_map(|(_, p)| p.iter().map(|q| q.1)).fold(0.0, f64::max);
    let sx = (w - 2.0 * pad) / t_max.max(f64::MIN_POSITIVE);
    let sy = (h - 2.0 * pad) / y_max.max(f64::MIN_POSITIVE);
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(s, r#"<title>Upsilon for a = {}</title>"#, fmt_sig(spec.a));
    let _ = writeln!(
        s,
        r#"<path d="M {pad} {pad} V {} H {}" fill="none" stroke="black"/>"#,
        h - pad,
        w - pad
    );
    for (k, (m, pts)) in curves.iter().enumerate() {
        let colour = PALETTE[(k * 9 / curves.len().max(2).saturating_sub(1).max(1)).min(9)];
        let coords: Vec<String> = pts
            .iter()
            .map(|(t, y)| format!("{:.2},{:.2}", pad + t * sx, h - pad - y * sy))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5" data-m="{}" points="{}"/>"#,
            fmt_sig(*m),
            coords.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

struct Panel {
    name: String,
    solution: Solution,
}

fn panels(spec: &FigureSpec, tol: Tolerances) -> Result<Vec<Panel>> {
    let params = HomogeneityParams::from_a(spec.a)?;
    let stem = spec.id.stem();
    let one = |solution: Solution| vec![Panel { name: stem.to_string(), solution }];
    Ok(match spec.id {
        FigureId::Radial => one(Solution::radial(params)?),
        FigureId::HalfPlane => one(Solution::half_plane(params)),
        FigureId::Slab => one(Solution::slab(params)),
        FigureId::Cones => spec
            .c
            .iter()
            .map(|&c| {
                Ok(Panel {
                    name: format!("{stem}_c{}", fmt_sig(c)),
                    solution: Solution::resonant_cone(params, c)?,
                })
            })
            .collect::<Result<_>>()?,
        FigureId::MultiFlap => {
            // flap k is rotated by k·π
            let flaps: Vec<(f64, f64)> = spec.c.iter().enumerate().map(|(k, &c)| (k as f64 * PI, c)).collect();
            one(Solution::multi_flap(&flaps)?)
        }
        FigureId::Surfaces => spec
            .m
            .iter()
            .map(|&m| {
                let solution = if spec.a == 2.0 {
                    Solution::explicit_a2(m)?
                } else {
                    Solution::implicit(UpsilonProfile::new(ProfileContext::with_tolerances(spec.a, m, tol)?))?
                };
                let name = if spec.m.len() == 1 { stem.to_string() } else { format!("{stem}_m{}", fmt_sig(m)) };
                Ok(Panel { name, solution })
            })
            .collect::<Result<_>>()?,
        FigureId::CurvesSublinear | FigureId::CurvesSuperlinear => unreachable!("curves are not surfaces"),
    })
}

/// `u` on a `grid × grid` lattice over `[-1, 1]²`, row-major in `x₂`.
pub fn surface_grid(sol: &Solution, grid: usize) -> Vec<Vec<f64>> {
    let coord = |i: usize| -1.0 + 2.0 * i as f64 / (grid - 1) as f64;
    (0..grid)
        .into_par_iter()
        .map(|j| (0..grid).map(|i| sol.evaluate(coord(i), coord(j))).collect())
        .collect()
}

fn render_surfaces(spec: &FigureSpec, tol: Tolerances) -> Result<Vec<Artifact>> {
    let panels = panels(spec, tol)?;
    let rendered: Vec<Vec<Artifact>> = panels
        .par_iter()
        .map(|p| {
            let values = surface_grid(&p.solution, spec.grid);
            let coord = |i: usize| -1.0 + 2.0 * i as f64 / (spec.grid - 1) as f64;
            let mut t = Table::new(["x1", "x2", "u"]);
            for (j, row) in values.iter().enumerate() {
                for (i, u) in row.iter().enumerate() {
                    t.push(vec![fmt_sig(coord(i)), fmt_sig(coord(j)), fmt_sig(*u)]);
                }
            }
            Ok(vec![
                Artifact {
                    file_name: format!("{}.csv", p.name),
                    contents: t.to_csv()?,
                },
                Artifact {
                    file_name: format!("{}.svg", p.name),
                    contents: surface_svg(&p.solution.label(), &values),
                },
            ])
        })
        .collect::<Result<_>>()?;
    Ok(rendered.into_iter().flatten().collect())
}

/// Number of linear colour bands between 0 and the maximum of `u`.
pub const BANDS: usize = 10;

/// Contour bands as horizontal runs of equal band index; the zero set is
/// left blank.
fn surface_svg(title: &str, values: &[Vec<f64>]) -> String {
    let n = values.len();
    let cell = 2usize;
    let side = n * cell;
    let u_max = values.iter().flatten().copied().fold(0.0, f64::max);
    let band = |u: f64| -> Option<usize> {
        if !(u > 0.0) || u_max == 0.0 {
            None
        } else {
            Some(((u / u_max * BANDS as f64) as usize).min(BANDS - 1))
        }
    };
    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{side}" height="{side}" viewBox="0 0 {side} {side}" shape-rendering="crispEdges">"#
    );
    let _ = writeln!(s, "<title>{title} on [-1,1]^2</title>");
    let _ = writeln!(s, r#"<rect x="0" y="0" width="{side}" height="{side}" fill="white"/>"#);
    for (j, row) in values.iter().enumerate() {
        // SVG y grows downwards, x₂ upwards
        let y = (n - 1 - j) * cell;
        let mut i = 0;
        while i < n {
            let b = band(row[i]);
            let start = i;
            while i < n && band(row[i]) == b {
                i += 1;
            }
            if let Some(b) = b {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{y}" width="{}" height="{cell}" fill="{}"/>"#,
                    start * cell,
                    (i - start) * cell,
                    PALETTE[b]
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}
