//! Experiment drivers: convergence studies, error slices and contours, and
//! single-point cost reports, all written as plain CSV.

mod config;
mod counts;
mod profiles;
mod study;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dg::DgError;
use crate::filtering::FilterError;

pub use config::{parse_cuts, parse_filters, parse_grid, parse_point, parse_real_expr, StudySpec};
pub use counts::{run_counts_timing, write_cost_csv, CostRow};
pub use profiles::{
    run_contours, run_slices, total_variation, write_contour_csv, write_slice_csv, ContourGrid, Cut, SliceProfile,
    CONTOUR_FLOOR, SLICE_SAMPLES,
};
pub use study::{run_convergence_study, ConvergenceReport, ConvergenceRow, NEAR_EPSILON};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid argument: {0}")]
    Invalid(String),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("case {case}: {source}")]
    Case {
        case: String,
        #[source]
        source: Box<HarnessError>,
    },
}

impl HarnessError {
    pub(crate) fn in_case(self, case: impl Into<String>) -> Self {
        HarnessError::Case {
            case: case.into(),
            source: Box::new(self),
        }
    }
}

/// Initial data for `u_t + u_x + u_y = 0` on `[0, 2π]²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialCondition {
    /// `sin(x + y)`
    SinXY,
    /// `sin x · cos y`
    SinXCosY,
}

impl InitialCondition {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            InitialCondition::SinXY => (x + y).sin(),
            InitialCondition::SinXCosY => x.sin() * y.cos(),
        }
    }

    /// Exact solution at time `t`: `u0(x - t, y - t)`.
    pub fn exact(self, t: f64) -> impl Fn(f64, f64) -> f64 + Sync + Copy {
        move |x, y| self.eval(x - t, y - t)
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            InitialCondition::SinXY => "sinxy",
            InitialCondition::SinXCosY => "sinxcosy",
        }
    }
}

impl fmt::Display for InitialCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for InitialCondition {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "sinxy" => Ok(InitialCondition::SinXY),
            "sinxcosy" => Ok(InitialCondition::SinXCosY),
            other => Err(HarnessError::Invalid(format!(
                "unknown initial condition `{other}` (expected sinxy or sinxcosy)"
            ))),
        }
    }
}

/// `x` in plain decimal with 12 significant digits.
pub fn format_sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-6..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let decimals = (11 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Scientific notation with 6 significant digits.
pub fn format_error(e: f64) -> String {
    format!("{e:.5e}")
}

/// CSV-safe column label for a filter, e.g. `line_theta2.356194_mu1.414214`.
pub fn filter_label(config: &crate::filtering::FilterConfig) -> String {
    use crate::filtering::FilterKind;
    match config.kind {
        FilterKind::Line => format!("line_theta{:.6}_mu{:.6}", config.theta, config.mu),
        FilterKind::Tensor => format!("tensor_mu{:.6}", config.mu),
    }
}
