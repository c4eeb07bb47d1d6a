use std::fmt;
use std::io::Write;

use rayon::prelude::*;

use super::{filter_label, HarnessError};
use crate::dg::{Domain, ModalField2D};
use crate::filtering::{filter_field, FilterConfig, Sampling};
use crate::splines::Point2;

pub const SLICE_SAMPLES: usize = 1000;
/// Errors below this are written as `-inf` in contour grids.
pub const CONTOUR_FLOOR: f64 = 1e-300;

/// A straight sampling line through the domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cut {
    /// `y = c`
    Horizontal(f64),
    /// `x = c`
    Vertical(f64),
    /// From `(xmin, ymin)` to `(xmax, ymax)`.
    Diagonal,
}

impl Cut {
    /// File-name friendly descriptor.
    pub fn stem(&self) -> String {
        match self {
            Cut::Horizontal(y) => format!("horizontal_y{y:.6}"),
            Cut::Vertical(x) => format!("vertical_x{x:.6}"),
            Cut::Diagonal => "diagonal".into(),
        }
    }

    /// `samples` points at cell midpoints along the cut, with their arc
    /// positions measured from the cut's start.
    pub fn sample(&self, domain: Domain, samples: usize) -> Result<(Vec<f64>, Vec<Point2>), HarnessError> {
        let inside = |v: f64, lo: f64, hi: f64| v >= lo && v <= hi;
        let frac = (0..samples).map(|i| (i as f64 + 0.5) / samples as f64);
        let out: Vec<(f64, Point2)> = match *self {
            Cut::Horizontal(y) => {
                if !inside(y, domain.ymin, domain.ymax) {
                    return Err(HarnessError::Invalid(format!("cut y={y} lies outside the domain")));
                }
                frac.map(|f| (f * domain.lx(), Point2::new(domain.xmin + f * domain.lx(), y)))
                    .collect()
            }
            Cut::Vertical(x) => {
                if !inside(x, domain.xmin, domain.xmax) {
                    return Err(HarnessError::Invalid(format!("cut x={x} lies outside the domain")));
                }
                frac.map(|f| (f * domain.ly(), Point2::new(x, domain.ymin + f * domain.ly())))
                    .collect()
            }
            Cut::Diagonal => {
                let len = domain.lx().hypot(domain.ly());
                frac.map(|f| {
                    (
                        f * len,
                        Point2::new(domain.xmin + f * domain.lx(), domain.ymin + f * domain.ly()),
                    )
                })
                .collect()
            }
        };
        Ok(out.into_iter().unzip())
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cut::Horizontal(y) => write!(f, "horizontal y={y}"),
            Cut::Vertical(x) => write!(f, "vertical x={x}"),
            Cut::Diagonal => f.write_str("diagonal"),
        }
    }
}

/// Pointwise errors `|u_h - u|` and `|u* - u|` along one cut.
#[derive(Debug, Clone)]
pub struct SliceProfile {
    pub cut: Cut,
    pub positions: Vec<f64>,
    pub points: Vec<Point2>,
    pub dg: Vec<f64>,
    pub filtered: Vec<(FilterConfig, Vec<f64>)>,
}

/// `Σ |v[i+1] - v[i]|`
pub fn total_variation(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

pub fn run_slices<E>(
    field: &ModalField2D,
    exact: E,
    filters: &[FilterConfig],
    cuts: &[Cut],
    samples: usize,
) -> Result<Vec<SliceProfile>, HarnessError>
where
    E: Fn(f64, f64) -> f64 + Sync,
{
    if samples < 2 {
        return Err(HarnessError::Invalid("a slice needs at least 2 samples".into()));
    }
    let built = filters
        .iter()
        .map(|f| f.build(field).map(|pf| (*f, pf)))
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Vec::with_capacity(cuts.len());
    for cut in cuts {
        let (positions, points) = cut.sample(field.mesh().domain(), samples)?;
        let dg = points
            .iter()
            .map(|p| (field.evaluate(p.x, p.y) - exact(p.x, p.y)).abs())
            .collect();
        let mut filtered = Vec::with_capacity(built.len());
        for (config, pf) in &built {
            let errs = points
                .par_iter()
                .map(|&p| pf.apply(field, p).map(|(v, _)| (v - exact(p.x, p.y)).abs()))
                .collect::<Result<Vec<_>, _>>()?;
            filtered.push((*config, errs));
        }
        out.push(SliceProfile {
            cut: *cut,
            positions,
            points,
            dg,
            filtered,
        });
    }
    Ok(out)
}

/// Columns `s,x,y,dg,<one per filter>`.
pub fn write_slice_csv<W: Write>(profile: &SliceProfile, mut out: W) -> Result<(), HarnessError> {
    let mut header = String::from("s,x,y,dg");
    for (config, _) in &profile.filtered {
        header.push(',');
        header.push_str(&filter_label(config));
    }
    writeln!(out, "{header}")?;
    for i in 0..profile.points.len() {
        let p = profile.points[i];
        let mut line = format!("{:.10e},{:.10e},{:.10e},{:.10e}", profile.positions[i], p.x, p.y, profile.dg[i]);
        for (_, errs) in &profile.filtered {
            line.push_str(&format!(",{:.10e}", errs[i]));
        }
        writeln!(out, "{line}")?;
    }
    out.flush()?;
    Ok(())
}

/// `log10 |u - u_ref|` on a uniform grid for the DG field or one filter.
#[derive(Debug, Clone)]
pub struct ContourGrid {
    /// `dg` or a filter label.
    pub label: String,
    pub nx: usize,
    pub ny: usize,
    pub points: Vec<Point2>,
    pub log10_error: Vec<f64>,
}

impl ContourGrid {
    pub fn max(&self) -> f64 {
        self.log10_error.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn floored_log10(e: f64) -> f64 {
    if e < CONTOUR_FLOOR {
        f64::NEG_INFINITY
    } else {
        e.log10()
    }
}

/// One grid for the DG field followed by one per filter, on the uniform
/// sampling grid `xmin + i Lx / nx`.
pub fn run_contours<E>(
    field: &ModalField2D,
    exact: E,
    filters: &[FilterConfig],
    nx: usize,
    ny: usize,
) -> Result<Vec<ContourGrid>, HarnessError>
where
    E: Fn(f64, f64) -> f64 + Sync,
{
    if nx == 0 || ny == 0 {
        return Err(HarnessError::Invalid("contour grid must be at least 1x1".into()));
    }
    let sampling = Sampling::Uniform { nx, ny };
    let mut out = Vec::with_capacity(filters.len() + 1);
    let mut points = None;
    for config in filters {
        let s = filter_field(field, config, sampling)?;
        let log10_error = s
            .points
            .iter()
            .zip(&s.values)
            .map(|(p, v)| floored_log10((v - exact(p.x, p.y)).abs()))
            .collect();
        out.push(ContourGrid {
            label: filter_label(config),
            nx,
            ny,
            points: s.points.clone(),
            log10_error,
        });
        points = Some(s.points);
    }
    let points = match points {
        Some(p) => p,
        None => {
            let d = field.mesh().domain();
            (0..ny)
                .flat_map(|j| {
                    (0..nx).map(move |i| {
                        Point2::new(
                            d.xmin + i as f64 * d.lx() / nx as f64,
                            d.ymin + j as f64 * d.ly() / ny as f64,
                        )
                    })
                })
                .collect()
        }
    };
    let log10_error = points
        .iter()
        .map(|p| floored_log10((field.evaluate(p.x, p.y) - exact(p.x, p.y)).abs()))
        .collect();
    out.insert(
        0,
        ContourGrid {
            label: "dg".into(),
            nx,
            ny,
            points,
            log10_error,
        },
    );
    Ok(out)
}

/// Columns `x,y,log10_error`, x fastest; `-inf` marks errors below the floor.
pub fn write_contour_csv<W: Write>(grid: &ContourGrid, mut out: W) -> Result<(), HarnessError> {
    writeln!(out, "x,y,log10_error")?;
    for (p, e) in grid.points.iter().zip(&grid.log10_error) {
        if e.is_finite() {
            writeln!(out, "{:.10e},{:.10e},{:.10e}", p.x, p.y, e)?;
        } else {
            writeln!(out, "{:.10e},{:.10e},-inf", p.x, p.y)?;
        }
    }
    out.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::{project_initial, UniformMesh2D};
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn exact_field_gives_zero_profile() {
        let mesh = UniformMesh2D::square(12).unwrap();
        let f = project_initial(&mesh, 1, |x, y| 0.5 * x - y).unwrap();
        let filters = [FilterConfig::line_default_scaling(3.0 * FRAC_PI_4)];
        // linear data, footprints kept clear of the periodic seam
        let profiles = run_slices(&f, |x, y| 0.5 * x - y, &filters, &[Cut::Horizontal(3.0)], 50).unwrap();
        let p = &profiles[0];
        assert_eq!(p.positions.len(), 50);
        assert!(p.positions.windows(2).all(|w| w[1] > w[0]));
        let interior = |i: &usize| p.points[*i].x > 1.5 && p.points[*i].x < 4.5;
        assert!((0..50).filter(interior).all(|i| p.dg[i] < 1e-12 && p.filtered[0].1[i] < 1e-10));
    }

    #[test]
    fn cuts_sample_inside_domain() {
        let d = Domain::default();
        let (s, pts) = Cut::Diagonal.sample(d, 4).unwrap();
        assert!((pts[0].x - pts[0].y).abs() < 1e-15);
        assert!((s[3] - 0.875 * d.lx() * 2f64.sqrt()).abs() < 1e-12);
        assert!(Cut::Vertical(-1.0).sample(d, 4).is_err());
        assert_eq!(total_variation(&[0.0, 1.0, 0.5, 0.5]), 1.5);
    }

    #[test]
    fn contours_floor_and_degenerate_grid() {
        let mesh = UniformMesh2D::square(4).unwrap();
        let f = ModalField2D::zeros(mesh, 0).unwrap();
        let grids = run_contours(&f, |_, _| 0.0, &[FilterConfig::tensor(1.0)], 1, 1).unwrap();
        assert_eq!(grids.len(), 2);
        assert_eq!(grids[0].label, "dg");
        assert_eq!(grids[0].points.len(), 1);
        assert_eq!(grids[0].log10_error[0], f64::NEG_INFINITY);
        let mut buf = Vec::new();
        write_contour_csv(&grids[0], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().nth(1).unwrap(), "0.0000000000e0,0.0000000000e0,-inf");
        assert_eq!(grids[1].max(), f64::NEG_INFINITY);
        assert!(run_contours(&f, |_, _| 0.0, &[], 0, 3).is_err());
    }
}
