use super::{mesh_lines_in, Breakpoints, FilterError, OpCounters, RegionDecomposition};
use crate::dg::{ModalField2D, UniformMesh2D};
use crate::kernel::{sort_dedup, SiacKernel};
use crate::quadrature::GaussLegendre;
use crate::splines::{Direction2, Point2};

/// One-dimensional SIAC filter along `(cos θ, sin θ)`:
///
/// `u*(p) = ∫ K_H(t) u_h(p - t (cos θ, sin θ)) dt`
#[derive(Debug, Clone)]
pub struct LineFilter {
    kernel: SiacKernel,
    theta: f64,
    direction: Direction2,
    rule: GaussLegendre,
}

impl LineFilter {
    /// Uses `2k+2` Gauss points per sub-interval.
    pub fn new(kernel: SiacKernel, theta: f64) -> Self {
        let rule = GaussLegendre::new(2 * kernel.degree() + 2);
        Self {
            kernel,
            theta,
            direction: Direction2::from_angle(theta),
            rule,
        }
    }

    pub fn kernel(&self) -> &SiacKernel {
        &self.kernel
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn points_per_region(&self) -> usize {
        self.rule.len()
    }

    fn check_support(&self, mesh: &UniformMesh2D) -> Result<(), FilterError> {
        let support = 2.0 * self.kernel.half_width();
        let d = mesh.domain();
        let limit = d.lx().min(d.ly());
        if support > limit * (1.0 + 1e-12) {
            return Err(FilterError::SupportTooLarge { support, limit });
        }
        Ok(())
    }

    /// Arc parameters of kernel knots and mesh-line crossings, merged within
    /// `1e-12 H`. Crossings are computed on the unwrapped line.
    pub fn footprint(&self, point: Point2, mesh: &UniformMesh2D) -> Result<RegionDecomposition, FilterError> {
        self.check_support(mesh)?;
        let w = self.kernel.half_width();
        let (c, s) = (self.direction.ux, self.direction.uy);
        let d = mesh.domain();
        let mut counters = OpCounters::default();
        let mut pts = self.kernel.breakpoints();
        // q(t) = p - t u crosses x = x_i at t = (p.x - x_i) / c
        for (pc, dc, origin, h) in [(point.x, c, d.xmin, mesh.hx()), (point.y, s, d.ymin, mesh.hy())] {
            if dc.abs() <= 1e-14 {
                continue;
            }
            let reach = w * dc.abs();
            for line in mesh_lines_in(origin, h, pc - reach, pc + reach) {
                counters.intersection_scans += 1;
                let t = (pc - line) / dc;
                if t > -w && t < w {
                    pts.push(t);
                }
            }
        }
        sort_dedup(&mut pts, 1e-12 * self.kernel.scaling());
        counters.integrals = pts.len().saturating_sub(1) as u64;
        counters.quadrature_evals = counters.integrals * self.rule.len() as u64;
        Ok(RegionDecomposition {
            breakpoints: Breakpoints::Line(pts),
            counters,
        })
    }

    /// Gauss quadrature over each interval between consecutive `breaks`.
    pub fn integrate(&self, field: &ModalField2D, point: Point2, breaks: &[f64]) -> f64 {
        let (c, s) = (self.direction.ux, self.direction.uy);
        breaks
            .windows(2)
            .map(|win| {
                self.rule
                    .mapped(win[0], win[1])
                    .map(|(t, wt)| wt * self.kernel.eval(t) * field.evaluate(point.x - t * c, point.y - t * s))
                    .sum::<f64>()
            })
            .sum()
    }

    pub fn apply(&self, field: &ModalField2D, point: Point2) -> Result<(f64, OpCounters), FilterError> {
        let region = self.footprint(point, field.mesh())?;
        let Breakpoints::Line(breaks) = &region.breakpoints else {
            unreachable!("line footprint")
        };
        Ok((self.integrate(field, point, breaks), region.counters))
    }
}

pub fn line_footprint(
    point: Point2,
    kernel: &SiacKernel,
    theta: f64,
    mesh: &UniformMesh2D,
) -> Result<RegionDecomposition, FilterError> {
    LineFilter::new(kernel.clone(), theta).footprint(point, mesh)
}

pub fn filter_point_line(field: &ModalField2D, point: Point2, kernel: &SiacKernel, theta: f64) -> Result<f64, FilterError> {
    LineFilter::new(kernel.clone(), theta).apply(field, point).map(|(v, _)| v)
}
