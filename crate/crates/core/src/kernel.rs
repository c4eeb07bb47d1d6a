//! Symmetric SIAC kernels: `2k+1` central B-splines of order `k+1`, weighted so
//! that convolution reproduces polynomials up to degree `2k`.

use thiserror::Error;

use crate::quadrature::GaussLegendre;
use crate::splines::{binomial, CentralBSpline, Direction2, Point2, SplineError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KernelError {
    #[error("kernel scaling must be positive and finite, got {0}")]
    InvalidScaling(f64),
    #[error("moment system is singular for k = {0}")]
    SingularMomentSystem(usize),
    #[error(transparent)]
    Spline(#[from] SplineError),
}

/// Raw moments `∫ ψ^(ℓ)(t) t^q dt` for `q = 0..=max_q`.
///
/// `ψ^(ℓ)` is the density of a sum of `ℓ` independent uniforms on
/// `[-1/2, 1/2)`, so its moments follow from repeated binomial convolution
/// with the uniform moments `(1/2)^q / (q+1)` (even `q`; odd ones vanish).
pub fn central_spline_moments(order: usize, max_q: usize) -> Vec<f64> {
    let uniform: Vec<f64> = (0..=max_q)
        .map(|q| if q % 2 == 0 { 0.5f64.powi(q as i32) / (q as f64 + 1.0) } else { 0.0 })
        .collect();
    let mut moments = uniform.clone();
    for _ in 1..order {
        moments = (0..=max_q)
            .map(|q| {
                (0..=q)
                    .map(|j| binomial(q as u32, j as u32) * moments[j] * uniform[q - j])
                    .sum()
            })
            .collect();
    }
    moments
}

/// Weights `c_γ`, `γ = -k..=k`, of the symmetric kernel of degree `k`.
///
/// Solves the moment conditions `∫ K(t) t^q dt = δ_{q0}`, `q = 0..=2k`.
pub fn solve_kernel_coefficients(k: usize) -> Result<Vec<f64>, KernelError> {
    let n = 2 * k + 1;
    let moments = central_spline_moments(k + 1, 2 * k);
    // ∫ ψ(t - γ) t^q dt = Σ_j C(q,j) γ^(q-j) M_j
    let matrix: Vec<Vec<f64>> = (0..n)
        .map(|q| {
            (0..n)
                .map(|col| {
                    let gamma = col as f64 - k as f64;
                    (0..=q)
                        .map(|j| binomial(q as u32, j as u32) * gamma.powi((q - j) as i32) * moments[j])
                        .sum()
                })
                .collect()
        })
        .collect();
    let mut rhs = vec![0.0; n];
    rhs[0] = 1.0;
    solve_dense(matrix, rhs).ok_or(KernelError::SingularMomentSystem(k))
}

/// Gaussian elimination with partial pivoting.
fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[pivot][col].abs() <= 1e-14 * scale {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[row][c] -= factor * a[col][c];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Some(x)
}

/// `K_H(t) = (1/H) Σ_γ c_γ ψ^(k+1)(t/H - γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SiacKernel {
    degree: usize,
    coefficients: Vec<f64>,
    scaling: f64,
    spline: CentralBSpline,
}

impl SiacKernel {
    pub fn new(degree: usize, scaling: f64) -> Result<Self, KernelError> {
        if !(scaling.is_finite() && scaling > 0.0) {
            return Err(KernelError::InvalidScaling(scaling));
        }
        let spline = CentralBSpline::new(degree + 1)?;
        let coefficients = solve_kernel_coefficients(degree)?;
        Ok(Self {
            degree,
            coefficients,
            scaling,
            spline,
        })
    }

    /// Same weights, different scaling.
    pub fn with_scaling(&self, scaling: f64) -> Result<Self, KernelError> {
        if !(scaling.is_finite() && scaling > 0.0) {
            return Err(KernelError::InvalidScaling(scaling));
        }
        Ok(Self { scaling, ..self.clone() })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_splines(&self) -> usize {
        2 * self.degree + 1
    }

    pub fn spline_order(&self) -> usize {
        self.degree + 1
    }

    /// `c_γ` for `γ = -k..=k`.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn scaling(&self) -> f64 {
        self.scaling
    }

    /// Half-width of the scaled support, `(3k+1) H / 2`.
    pub fn half_width(&self) -> f64 {
        0.5 * (3 * self.degree + 1) as f64 * self.scaling
    }

    pub fn eval(&self, t: f64) -> f64 {
        let s = t / self.scaling;
        let half = 0.5 * (self.degree + 1) as f64;
        let k = self.degree as f64;
        // only splines whose support contains s contribute
        let lo = ((s - half).floor() as i64).max(-(self.degree as i64));
        let hi = ((s + half).ceil() as i64).min(self.degree as i64);
        let mut acc = 0.0;
        for gamma in lo..=hi {
            let c = self.coefficients[(gamma as f64 + k) as usize];
            acc += c * self.spline.eval(s - gamma as f64);
        }
        acc / self.scaling
    }

    /// Merged knots of all shifted splines, scaled by `H`, strictly increasing.
    pub fn breakpoints(&self) -> Vec<f64> {
        let k = self.degree as i64;
        let half = 0.5 * (self.degree + 1) as f64;
        let mut pts: Vec<f64> = (-k..=k)
            .flat_map(|gamma| (0..=self.degree + 1).map(move |j| (gamma as f64 + j as f64 - half) * self.scaling))
            .collect();
        sort_dedup(&mut pts, 1e-12 * self.scaling);
        pts
    }

    /// Max over 10 sample points in `[-1, 1]` of `|(K_H ⋆ t^p)(x) - x^p|`,
    /// integrated exactly piece by piece.
    pub fn reproduction_residual(&self, p: u32) -> f64 {
        let rule = GaussLegendre::new(2 * self.degree + 2);
        let breaks = self.breakpoints();
        (0..10)
            .map(|i| -1.0 + 2.0 * i as f64 / 9.0)
            .map(|x: f64| {
                let conv: f64 = breaks
                    .windows(2)
                    .map(|w| rule.integrate(w[0], w[1], |t| self.eval(t) * (x - t).powi(p as i32)))
                    .sum();
                (conv - x.powi(p as i32)).abs()
            })
            .fold(0.0, f64::max)
    }
}

pub fn kernel_eval(kernel: &SiacKernel, t: f64) -> f64 {
    kernel.eval(t)
}

pub fn kernel_breakpoints(kernel: &SiacKernel) -> Vec<f64> {
    kernel.breakpoints()
}

pub fn reproduction_residual(kernel: &SiacKernel, p: u32) -> f64 {
    kernel.reproduction_residual(p)
}

/// Sorts and collapses values closer than `tol` (keeps the first of a cluster).
pub(crate) fn sort_dedup(pts: &mut Vec<f64>, tol: f64) {
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|b, a| (*b - *a).abs() <= tol);
}

/// A SIAC kernel laid along the line `Γ(t) = t (cos θ, sin θ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineKernel {
    base: SiacKernel,
    theta: f64,
    direction: Direction2,
}

impl LineKernel {
    pub fn new(base: SiacKernel, theta: f64) -> Self {
        Self {
            base,
            theta,
            direction: Direction2::from_angle(theta),
        }
    }

    pub fn base(&self) -> &SiacKernel {
        &self.base
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn direction(&self) -> Direction2 {
        self.direction
    }

    /// `Γ^{-1}(x, y) = x cos θ + y sin θ`.
    pub fn arc_parameter(&self, x: f64, y: f64) -> f64 {
        x * self.direction.ux + y * self.direction.uy
    }

    /// Kernel at a Cartesian point on `Γ`; off-line points are never queried.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.eval_arc(self.arc_parameter(x, y))
    }

    /// Kernel in arc-length coordinates.
    pub fn eval_arc(&self, t: f64) -> f64 {
        self.base.eval(t)
    }
}

pub fn line_kernel_eval(lk: &LineKernel, x: f64, y: f64) -> f64 {
    lk.eval(x, y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisChange {
    /// Cartesian coordinates to coordinates along `(cos θ, sin θ)`, `(-sin θ, cos θ)`.
    ToRotated,
    ToCartesian,
}

/// Coordinates of `p` in the rotated (or Cartesian) basis.
pub fn change_of_basis(theta: f64, p: Point2, direction: BasisChange) -> Point2 {
    let (s, c) = theta.sin_cos();
    match direction {
        BasisChange::ToRotated => Point2::new(c * p.x + s * p.y, -s * p.x + c * p.y),
        BasisChange::ToCartesian => Point2::new(c * p.x - s * p.y, s * p.x + c * p.y),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn kernel(k: usize, h: f64) -> SiacKernel {
        SiacKernel::new(k, h).unwrap()
    }

    #[test]
    fn spline_moments_known_values() {
        // ψ2 (hat): second moment 1/6; ψ4: second moment 1/3, fourth 1/80*... via variance sum
        let m2 = central_spline_moments(2, 4);
        assert!((m2[2] - 1.0 / 6.0).abs() < 1e-15);
        assert_eq!(m2[1], 0.0);
        let m4 = central_spline_moments(4, 2);
        assert!((m4[2] - 4.0 / 12.0).abs() < 1e-15);
    }

    #[test]
    fn coefficient_examples() {
        assert_eq!(solve_kernel_coefficients(0).unwrap(), vec![1.0]);
        let c = solve_kernel_coefficients(1).unwrap();
        let expect = [-1.0 / 12.0, 7.0 / 6.0, -1.0 / 12.0];
        for (a, b) in c.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn coefficients_symmetric_and_sum_to_one() {
        for k in 0..=3 {
            let c = solve_kernel_coefficients(k).unwrap();
            assert_eq!(c.len(), 2 * k + 1);
            assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for g in 0..c.len() {
                assert!((c[g] - c[c.len() - 1 - g]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn reproduction_residuals() {
        for k in 0..=3 {
            let kern = kernel(k, 1.0);
            assert!(kern.reproduction_residual(0) < 1e-13);
            for p in 0..=2 * k as u32 {
                let r = kern.reproduction_residual(p);
                assert!(r < 1e-9, "k={k} p={p} r={r}");
            }
        }
        assert!(kernel(1, 1.0).reproduction_residual(2) < 1e-10);
        // degree 2k+1 is not reproduced in general: first odd moment past 2k vanishes by
        // symmetry, so check 2k+2 instead.
        assert!(kernel(1, 1.0).reproduction_residual(4) > 1e-6);
    }

    #[test]
    fn reproduction_cross_checked_by_midpoint_quadrature() {
        // blind midpoint rule, independent of the break points
        let kern = kernel(2, 0.7);
        let w = kern.half_width();
        let n = 200_000;
        let dt = 2.0 * w / n as f64;
        for &x in &[-0.4, 0.3, 1.1] {
            for p in 0..=4 {
                let conv: f64 = (0..n)
                    .map(|i| {
                        let t = -w + (i as f64 + 0.5) * dt;
                        kern.eval(t) * (x - t).powi(p)
                    })
                    .sum::<f64>()
                    * dt;
                assert!((conv - x.powi(p)).abs() < 1e-7, "x={x} p={p}");
            }
        }
    }

    #[test]
    fn support_and_breakpoints() {
        let kern = kernel(1, 0.5);
        assert_eq!(kern.eval(1.0001), 0.0);
        assert_eq!(kern.eval(-1.0001), 0.0);
        assert_eq!(kernel(0, 2.0).breakpoints(), vec![-1.0, 1.0]);
        let b = kernel(1, 1.0).breakpoints();
        assert_eq!(b, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        for k in 0..=4 {
            let kern = kernel(k, 0.37);
            let b = kern.breakpoints();
            assert!(b.len() <= (2 * k + 1) * (k + 2));
            assert!(b.windows(2).all(|w| w[0] < w[1]));
            assert!((b[0] + kern.half_width()).abs() < 1e-14);
            assert!((b[b.len() - 1] - kern.half_width()).abs() < 1e-14);
        }
    }

    #[test]
    fn unit_mass() {
        let rule = GaussLegendre::new(6);
        for k in 0..=3 {
            let kern = kernel(k, 0.3);
            let mass: f64 = kern
                .breakpoints()
                .windows(2)
                .map(|w| rule.integrate(w[0], w[1], |t| kern.eval(t)))
                .sum();
            assert!((mass - 1.0).abs() < 1e-12, "k={k}");
        }
    }

    #[test]
    fn continuous_at_breakpoints() {
        for k in 1..=3 {
            let kern = kernel(k, 1.0);
            for b in kern.breakpoints() {
                let (l, r) = (kern.eval(b - 1e-12), kern.eval(b + 1e-12));
                assert!((l - r).abs() < 1e-10, "k={k} b={b}");
            }
        }
    }

    #[test]
    fn line_kernel_examples() {
        let base = kernel(2, 0.4);
        let flat = LineKernel::new(base.clone(), 0.0);
        assert_eq!(flat.eval(0.3, 0.0), base.eval(0.3));
        for &theta in &[0.0, 0.3, PI / 4.0, 2.0, 3.0 * PI / 4.0] {
            let lk = LineKernel::new(base.clone(), theta);
            assert!(lk.direction().is_unit());
            assert!((lk.arc_parameter(theta.cos(), theta.sin()) - 1.0).abs() < 1e-15);
        }
        let diag = LineKernel::new(base.clone(), PI / 4.0);
        let r = 0.5f64.sqrt();
        for &t in &[-0.9, -0.2, 0.05, 0.6] {
            assert!((diag.eval(t * r, t * r) - base.eval(t)).abs() < 1e-14);
            assert_eq!(line_kernel_eval(&diag, t * r, t * r), diag.eval_arc(diag.arc_parameter(t * r, t * r)));
        }
    }

    #[test]
    fn change_of_basis_examples() {
        let p = Point2::new(0.3, -1.7);
        assert_eq!(change_of_basis(0.0, p, BasisChange::ToRotated), p);
        let q = change_of_basis(PI / 2.0, Point2::new(1.0, 0.0), BasisChange::ToRotated);
        assert!(q.x.abs() < 1e-15 && (q.y + 1.0).abs() < 1e-15);
    }

    #[test]
    fn scaling_rejected_when_nonpositive() {
        assert_eq!(SiacKernel::new(1, 0.0), Err(KernelError::InvalidScaling(0.0)));
        assert!(SiacKernel::new(1, f64::NAN).is_err());
    }

    proptest! {
        #[test]
        fn kernel_is_even(k in 0usize..=3, t in -6.0f64..6.0, h in 0.1f64..2.0) {
            let kern = kernel(k, h);
            prop_assert!((kern.eval(t) - kern.eval(-t)).abs() < 1e-14 / h.min(1.0));
            if t.abs() > kern.half_width() {
                prop_assert_eq!(kern.eval(t), 0.0);
            }
        }

        #[test]
        fn scaling_consistency(k in 0usize..=3, t in -5.0f64..5.0, h in 0.05f64..3.0) {
            let scaled = kernel(k, h);
            let unit = kernel(k, 1.0);
            prop_assert!((scaled.eval(t) - unit.eval(t / h) / h).abs() < 1e-14 / h);
        }

        #[test]
        fn change_of_basis_round_trip(theta in -7.0f64..7.0, x in -10.0f64..10.0, y in -10.0f64..10.0) {
            let p = Point2::new(x, y);
            let back = change_of_basis(theta, change_of_basis(theta, p, BasisChange::ToRotated), BasisChange::ToCartesian);
            prop_assert!((back.x - x).abs() < 1e-14 * 10.0 && (back.y - y).abs() < 1e-14 * 10.0);
        }
    }
}
