use super::{mesh_lines_in, Breakpoints, FilterError, OpCounters, RegionDecomposition};
use crate::dg::{ModalField2D, UniformMesh2D};
use crate::kernel::{sort_dedup, SiacKernel};
use crate::quadrature::GaussLegendre;
use crate::splines::Point2;

/// Axis-aligned tensor-product filter:
///
/// `u*(p) = ∫∫ K_{Hx}(s) K_{Hy}(r) u_h(p.x - s, p.y - r) ds dr`
#[derive(Debug, Clone)]
pub struct TensorFilter {
    kernel_x: SiacKernel,
    kernel_y: SiacKernel,
    rule: GaussLegendre,
}

impl TensorFilter {
    /// Uses `(k+2)²` Gauss points per sub-rectangle.
    pub fn new(kernel_x: SiacKernel, kernel_y: SiacKernel) -> Self {
        let degree = kernel_x.degree().max(kernel_y.degree());
        Self {
            kernel_x,
            kernel_y,
            rule: GaussLegendre::new(degree + 2),
        }
    }

    pub fn kernels(&self) -> (&SiacKernel, &SiacKernel) {
        (&self.kernel_x, &self.kernel_y)
    }

    pub fn points_per_region(&self) -> usize {
        self.rule.len() * self.rule.len()
    }

    fn axis_breaks(kernel: &SiacKernel, centre: f64, origin: f64, h: f64, scans: &mut u64) -> Vec<f64> {
        let w = kernel.half_width();
        let mut pts = kernel.breakpoints();
        for line in mesh_lines_in(origin, h, centre - w, centre + w) {
            *scans += 1;
            let s = centre - line;
            if s > -w && s < w {
                pts.push(s);
            }
        }
        sort_dedup(&mut pts, 1e-12 * kernel.scaling());
        pts
    }

    pub fn footprint(&self, point: Point2, mesh: &UniformMesh2D) -> Result<RegionDecomposition, FilterError> {
        let d = mesh.domain();
        for (kernel, limit) in [(&self.kernel_x, d.lx()), (&self.kernel_y, d.ly())] {
            let support = 2.0 * kernel.half_width();
            if support > limit * (1.0 + 1e-12) {
                return Err(FilterError::SupportTooLarge { support, limit });
            }
        }
        let mut counters = OpCounters::default();
        let x = Self::axis_breaks(&self.kernel_x, point.x, d.xmin, mesh.hx(), &mut counters.intersection_scans);
        let y = Self::axis_breaks(&self.kernel_y, point.y, d.ymin, mesh.hy(), &mut counters.intersection_scans);
        counters.integrals = (x.len().saturating_sub(1) * y.len().saturating_sub(1)) as u64;
        counters.quadrature_evals = counters.integrals * self.points_per_region() as u64;
        Ok(RegionDecomposition {
            breakpoints: Breakpoints::Tensor { x, y },
            counters,
        })
    }

    /// `(offset, weight · K(offset))` for every Gauss point of every interval.
    fn weighted_nodes(&self, kernel: &SiacKernel, breaks: &[f64]) -> Vec<Vec<(f64, f64)>> {
        breaks
            .windows(2)
            .map(|w| self.rule.mapped(w[0], w[1]).map(|(s, wt)| (s, wt * kernel.eval(s))).collect())
            .collect()
    }

    pub fn integrate(&self, field: &ModalField2D, point: Point2, x_breaks: &[f64], y_breaks: &[f64]) -> f64 {
        let xs = self.weighted_nodes(&self.kernel_x, x_breaks);
        let ys = self.weighted_nodes(&self.kernel_y, y_breaks);
        let mut total = 0.0;
        for yi in &ys {
            for xi in &xs {
                // one sub-rectangle
                let mut rect = 0.0;
                for &(r, wy) in yi {
                    for &(s, wx) in xi {
                        rect += wx * wy * field.evaluate(point.x - s, point.y - r);
                    }
                }
                total += rect;
            }
        }
        total
    }

    pub fn apply(&self, field: &ModalField2D, point: Point2) -> Result<(f64, OpCounters), FilterError> {
        let region = self.footprint(point, field.mesh())?;
        let Breakpoints::Tensor { x, y } = &region.breakpoints else {
            unreachable!("tensor footprint")
        };
        Ok((self.integrate(field, point, x, y), region.counters))
    }
}

pub fn tensor_footprint(
    point: Point2,
    kernel_x: &SiacKernel,
    kernel_y: &SiacKernel,
    mesh: &UniformMesh2D,
) -> Result<RegionDecomposition, FilterError> {
    TensorFilter::new(kernel_x.clone(), kernel_y.clone()).footprint(point, mesh)
}

pub fn filter_point_tensor(
    field: &ModalField2D,
    point: Point2,
    kernel_x: &SiacKernel,
    kernel_y: &SiacKernel,
) -> Result<f64, FilterError> {
    TensorFilter::new(kernel_x.clone(), kernel_y.clone())
        .apply(field, point)
        .map(|(v, _)| v)
}
