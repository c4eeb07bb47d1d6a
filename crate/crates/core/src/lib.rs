//! SIAC post-processing of 2D discontinuous Galerkin fields.
//!
//! * [`splines`]: central B-splines and divided differences
//! * [`kernel`]: symmetric kernels and their rotated line form
//! * [`dg`]: periodic modal DG advection solver, field I/O, L2 errors
//! * [`filtering`]: tensor-product and line convolution engines
//! * [`harness`]: convergence studies, slices, contours, cost reports

pub mod dg;
pub mod filtering;
pub mod harness;
pub mod kernel;
pub mod quadrature;
pub mod splines;
