//! Data generation: modal DG fields on periodic uniform quad meshes.

pub mod basis;
mod field;
mod io;
mod mesh;
mod solver;

use thiserror::Error;

pub use field::{
    absolute_l2_error, absolute_l2_error_with_points, evaluate_field, l2_error, l2_error_with_points, project_initial,
    ModalField2D,
};
pub use io::{load_field, read_field, save_field, write_field};
pub use mesh::{Domain, Location, UniformMesh2D};
pub use solver::{solve_advection, DtRule};

#[derive(Debug, Error)]
pub enum DgError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("polynomial degree {0} is not supported (max {max})", max = basis::MAX_DEGREE)]
    InvalidDegree(usize),
    #[error("dimension mismatch: expected {expected} coefficients, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("non-finite value at {0}")]
    NonFinite(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unexpected end of data at line {line}")]
    UnexpectedEof { line: usize },
    #[error("invalid final time or step parameter {0}")]
    InvalidTime(f64),
    #[error("time step too large: dt = {dt:e} diverged at step {step}")]
    TimeStepTooLarge { dt: f64, step: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
