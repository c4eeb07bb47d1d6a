use rayon::prelude::*;

use super::{FilterConfig, FilterError, OpCounters};
use crate::dg::ModalField2D;
use crate::quadrature::GaussLegendre;
use crate::splines::Point2;

/// Where a filtered field is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampling {
    /// `(k+3)²` Gauss points per element, weighted for L2 norms.
    ErrorGrid,
    /// `xmin + i Lx / nx`, `ymin + j Ly / ny`, x fastest; weights are `Lx Ly / (nx ny)`.
    Uniform { nx: usize, ny: usize },
}

/// Filtered values at sample points.
#[derive(Debug, Clone)]
pub struct SampledField {
    pub points: Vec<Point2>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub counters: OpCounters,
}

impl SampledField {
    /// Domain-averaged L2 error of `values - exact` under the sample weights,
    /// on the same scale as [`crate::dg::l2_error`].
    pub fn l2_error<F: Fn(f64, f64) -> f64>(&self, exact: F) -> f64 {
        let area: f64 = self.weights.iter().sum();
        (self.absolute_l2_error(exact).powi(2) / area).sqrt()
    }

    pub fn absolute_l2_error<F: Fn(f64, f64) -> f64>(&self, exact: F) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(&self.values)
            .map(|((p, w), v)| {
                let d = v - exact(p.x, p.y);
                w * d * d
            })
            .sum::<f64>()
            .sqrt()
    }

    pub fn max_error<F: Fn(f64, f64) -> f64>(&self, exact: F) -> f64 {
        self.points
            .iter()
            .zip(&self.values)
            .map(|(p, v)| (v - exact(p.x, p.y)).abs())
            .fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Gauss points and weights of the `(k+3)²`-per-element error grid.
pub fn error_grid(field: &ModalField2D) -> (Vec<Point2>, Vec<f64>) {
    let mesh = field.mesh();
    let rule = GaussLegendre::new(field.degree() + 3);
    let jac = 0.25 * mesh.hx() * mesh.hy();
    let n = mesh.num_elements() * rule.len() * rule.len();
    let mut points = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for j in 0..mesh.ny() {
        for i in 0..mesh.nx() {
            for (&eta, &wy) in rule.nodes().iter().zip(rule.weights()) {
                for (&xi, &wx) in rule.nodes().iter().zip(rule.weights()) {
                    let (x, y) = mesh.map_to_physical(i, j, xi, eta);
                    points.push(Point2::new(x, y));
                    weights.push(wx * wy * jac);
                }
            }
        }
    }
    (points, weights)
}

fn uniform_grid(field: &ModalField2D, nx: usize, ny: usize) -> (Vec<Point2>, Vec<f64>) {
    let d = field.mesh().domain();
    let (dx, dy) = (d.lx() / nx as f64, d.ly() / ny as f64);
    let points = (0..ny)
        .flat_map(|j| (0..nx).map(move |i| Point2::new(d.xmin + i as f64 * dx, d.ymin + j as f64 * dy)))
        .collect();
    (points, vec![dx * dy; nx * ny])
}

/// Applies the filter at every sample point in parallel.
pub fn filter_field(field: &ModalField2D, config: &FilterConfig, sampling: Sampling) -> Result<SampledField, FilterError> {
    let filter = config.build(field)?;
    let (points, weights) = match sampling {
        Sampling::ErrorGrid => error_grid(field),
        Sampling::Uniform { nx, ny } => {
            if nx == 0 || ny == 0 {
                return Err(FilterError::InvalidConfig("uniform sampling needs nx, ny > 0".into()));
            }
            uniform_grid(field, nx, ny)
        }
    };
    let results: Vec<(f64, OpCounters)> = points
        .par_iter()
        .map(|&p| filter.apply(field, p))
        .collect::<Result<_, _>>()?;
    let counters = results.iter().map(|r| r.1).sum();
    let values = results.into_iter().map(|r| r.0).collect();
    Ok(SampledField {
        points,
        weights,
        values,
        counters,
    })
}
