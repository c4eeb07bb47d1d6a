//! Convolution engines: tensor-product 2D filtering and rotated line filtering.
//!
//! Both decompose the kernel footprint at every break point (kernel knot or
//! mesh-line crossing) so that each region carries a polynomial integrand and
//! Gauss quadrature is exact on it.

mod line;
mod oracle;
mod sampling;
mod tensor;

use std::f64::consts::PI;
use std::iter::Sum;
use std::ops::{Add, AddAssign};

use thiserror::Error;

use crate::dg::ModalField2D;
use crate::kernel::{KernelError, SiacKernel};
use crate::splines::Point2;

pub use line::{filter_point_line, line_footprint, LineFilter};
pub use oracle::{brute_force_filter_point, brute_force_filter_point_with_slots, LINE_ORACLE_SLOTS, TENSOR_ORACLE_SLOTS};
pub use sampling::{error_grid, filter_field, SampledField, Sampling};
pub use tensor::{filter_point_tensor, tensor_footprint, TensorFilter};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("kernel support {support:.6} exceeds the periodic extent {limit:.6}")]
    SupportTooLarge { support: f64, limit: f64 },
    #[error("invalid filter configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

/// Work performed while decomposing and integrating a footprint.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounters {
    /// Candidate mesh lines tested for a crossing.
    pub intersection_scans: u64,
    /// Regions integrated (sub-intervals or sub-rectangles).
    pub integrals: u64,
    /// Field evaluations at quadrature points.
    pub quadrature_evals: u64,
}

impl Add for OpCounters {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self {
            intersection_scans: self.intersection_scans + rhs.intersection_scans,
            integrals: self.integrals + rhs.integrals,
            quadrature_evals: self.quadrature_evals + rhs.quadrature_evals,
        }
    }
}

impl AddAssign for OpCounters {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sum for OpCounters {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), Add::add)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Breakpoints {
    /// Arc parameters along the filter line.
    Line(Vec<f64>),
    /// Offsets along each axis.
    Tensor { x: Vec<f64>, y: Vec<f64> },
}

/// Break points of a footprint plus the work done to find them.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionDecomposition {
    pub breakpoints: Breakpoints,
    pub counters: OpCounters,
}

impl RegionDecomposition {
    pub fn num_regions(&self) -> usize {
        match &self.breakpoints {
            Breakpoints::Line(b) => b.len().saturating_sub(1),
            Breakpoints::Tensor { x, y } => x.len().saturating_sub(1) * y.len().saturating_sub(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterKind {
    Tensor,
    Line,
}

impl FilterKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            FilterKind::Tensor => "tensor",
            FilterKind::Line => "line",
        }
    }
}

/// What to filter with. The kernel scaling is `H = μ h`; the tensor filter
/// scales each axis by its own element size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterConfig {
    pub kind: FilterKind,
    /// Line direction in radians; ignored by the tensor filter.
    pub theta: f64,
    pub mu: f64,
    /// Kernel degree; defaults to the field's degree.
    pub degree: Option<usize>,
}

impl FilterConfig {
    pub fn line(theta: f64, mu: f64) -> Self {
        Self {
            kind: FilterKind::Line,
            theta,
            mu,
            degree: None,
        }
    }

    /// Line filter with `μ = |cos θ| + |sin θ|`, which on a square mesh is
    /// `H = h_x |cos θ| + h_y |sin θ|`.
    pub fn line_default_scaling(theta: f64) -> Self {
        Self::line(theta, default_line_mu(theta))
    }

    pub fn tensor(mu: f64) -> Self {
        Self {
            kind: FilterKind::Tensor,
            theta: 0.0,
            mu,
            degree: None,
        }
    }

    pub fn with_degree(mut self, degree: usize) -> Self {
        self.degree = Some(degree);
        self
    }

    pub fn validate(&self) -> Result<(), FilterError> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(FilterError::InvalidConfig(format!("mu must be positive, got {}", self.mu)));
        }
        if !self.theta.is_finite() {
            return Err(FilterError::InvalidConfig("theta must be finite".into()));
        }
        Ok(())
    }

    /// Short descriptor such as `line(theta=0.785398,mu=1.41421)`.
    pub fn describe(&self) -> String {
        match self.kind {
            FilterKind::Line => format!("line(theta={:.6},mu={:.6})", self.theta, self.mu),
            FilterKind::Tensor => format!("tensor(mu={:.6})", self.mu),
        }
    }

    /// Builds the point filter for `field`'s mesh and degree.
    pub fn build(&self, field: &ModalField2D) -> Result<PointFilter, FilterError> {
        self.validate()?;
        let degree = self.degree.unwrap_or(field.degree());
        let mesh = field.mesh();
        match self.kind {
            FilterKind::Line => {
                let kernel = SiacKernel::new(degree, self.mu * mesh.h())?;
                Ok(PointFilter::Line(LineFilter::new(kernel, self.theta)))
            }
            FilterKind::Tensor => {
                let kx = SiacKernel::new(degree, self.mu * mesh.hx())?;
                let ky = kx.with_scaling(self.mu * mesh.hy())?;
                Ok(PointFilter::Tensor(TensorFilter::new(kx, ky)))
            }
        }
    }
}

/// `|cos θ| + |sin θ|`
pub fn default_line_mu(theta: f64) -> f64 {
    theta.cos().abs() + theta.sin().abs()
}

/// Angle of the mesh diagonal, `arctan(h_y / h_x)`.
pub fn diagonal_angle(hx: f64, hy: f64) -> f64 {
    hy.atan2(hx).rem_euclid(PI)
}

/// A ready-to-apply filter.
#[derive(Debug, Clone)]
pub enum PointFilter {
    Line(LineFilter),
    Tensor(TensorFilter),
}

impl PointFilter {
    pub fn apply(&self, field: &ModalField2D, point: Point2) -> Result<(f64, OpCounters), FilterError> {
        match self {
            PointFilter::Line(f) => f.apply(field, point),
            PointFilter::Tensor(f) => f.apply(field, point),
        }
    }

    pub fn footprint(&self, field: &ModalField2D, point: Point2) -> Result<RegionDecomposition, FilterError> {
        match self {
            PointFilter::Line(f) => f.footprint(point, field.mesh()),
            PointFilter::Tensor(f) => f.footprint(point, field.mesh()),
        }
    }
}

/// Mesh lines `origin + i·h` lying in the closed window `[lo, hi]`.
pub(crate) fn mesh_lines_in(origin: f64, h: f64, lo: f64, hi: f64) -> impl Iterator<Item = f64> {
    let first = ((lo - origin) / h).ceil() as i64;
    let last = ((hi - origin) / h).floor() as i64;
    (first..=last).map(move |i| origin + i as f64 * h)
}
