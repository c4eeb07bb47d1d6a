//! Central B-splines and the scalar / directional divided-difference operators.
//!
//! `ψ^(1)` is the indicator of `[-1/2, 1/2)`; higher orders follow the
//! two-term recurrence
//!
//! ```text
//! ψ^(m+1)(x) = ((m+1)/2 + x) ψ^(m)(x + 1/2) + ((m+1)/2 - x) ψ^(m)(x - 1/2)
//!              ---------------------------------------------------------
//!                                         m
//! ```
//!
//! which is evaluated bottom-up so that no polynomial pieces are stored.

use thiserror::Error;

/// Largest spline order accepted by [`CentralBSpline::new`].
pub const MAX_SPLINE_ORDER: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SplineError {
    #[error("invalid spline order {0}: must be between 1 and {MAX_SPLINE_ORDER}")]
    InvalidOrder(usize),
    #[error("derivative order exceeds smoothness: alpha = {alpha}, spline order = {order}")]
    DerivativeTooHigh { alpha: usize, order: usize },
}

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// `self + s * u`
    pub fn offset(self, u: Direction2, s: f64) -> Self {
        Self::new(self.x + s * u.ux, self.y + s * u.uy)
    }
}

/// A direction (not necessarily normalised) used for shifts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction2 {
    pub ux: f64,
    pub uy: f64,
}

impl Direction2 {
    pub const fn new(ux: f64, uy: f64) -> Self {
        Self { ux, uy }
    }

    /// Unit vector `(cos θ, sin θ)`.
    pub fn from_angle(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::new(c, s)
    }

    pub fn norm(&self) -> f64 {
        self.ux.hypot(self.uy)
    }

    pub fn is_unit(&self) -> bool {
        (self.ux * self.ux + self.uy * self.uy - 1.0).abs() <= 1e-12
    }
}

/// Central B-spline of order `ℓ` (degree `ℓ - 1`), supported on `[-ℓ/2, ℓ/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CentralBSpline {
    order: usize,
}

impl CentralBSpline {
    pub fn new(order: usize) -> Result<Self, SplineError> {
        if order == 0 || order > MAX_SPLINE_ORDER {
            return Err(SplineError::InvalidOrder(order));
        }
        Ok(Self { order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Closed support interval `[-ℓ/2, ℓ/2]`.
    pub fn support(&self) -> (f64, f64) {
        let half = 0.5 * self.order as f64;
        (-half, half)
    }

    /// The `ℓ + 1` integer-spaced knots `-ℓ/2, ..., ℓ/2`.
    pub fn knots(&self) -> Vec<f64> {
        let half = 0.5 * self.order as f64;
        (0..=self.order).map(|j| j as f64 - half).collect()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let l = self.order;
        let half = 0.5 * l as f64;
        if !(-half..half).contains(&x) {
            return 0.0;
        }
        // vals[j] = ψ^(m)(x + (l - m)/2 - j), starting at m = 1.
        let mut vals = [0.0f64; MAX_SPLINE_ORDER];
        for (j, v) in vals.iter_mut().enumerate().take(l) {
            let z = x + 0.5 * (l as f64 - 1.0) - j as f64;
            *v = if (-0.5..0.5).contains(&z) { 1.0 } else { 0.0 };
        }
        for m in 1..l {
            let mf = m as f64;
            let c = 0.5 * (mf + 1.0);
            for j in 0..(l - m) {
                let y = x + 0.5 * (l as f64 - mf - 1.0) - j as f64;
                vals[j] = ((c + y) * vals[j] + (c - y) * vals[j + 1]) / mf;
            }
        }
        vals[0]
    }

    /// `d^α ψ^(ℓ)(x)` as the `α`-th unit-width divided difference of `ψ^(ℓ-α)`.
    pub fn derivative(&self, alpha: usize, x: f64) -> Result<f64, SplineError> {
        if alpha >= self.order {
            return Err(SplineError::DerivativeTooHigh {
                alpha,
                order: self.order,
            });
        }
        let lower = CentralBSpline::new(self.order - alpha)?;
        Ok(divided_difference_1d(&|z| lower.eval(z), 1.0, alpha as u32, x))
    }
}

pub fn bspline_eval(spline: &CentralBSpline, x: f64) -> f64 {
    spline.eval(x)
}

pub fn bspline_derivative(spline: &CentralBSpline, alpha: usize, x: f64) -> Result<f64, SplineError> {
    spline.derivative(alpha, x)
}

/// Scaled central divided difference `∂_h^α f(x)`, applied recursively.
/// `alpha == 0` returns `f(x)`.
///
/// Panics if `h <= 0`.
pub fn divided_difference_1d<F>(f: &F, h: f64, alpha: u32, x: f64) -> f64
where
    F: Fn(f64) -> f64 + ?Sized,
{
    assert!(h > 0.0, "divided difference step must be positive, got {h}");
    if alpha == 0 {
        return f(x);
    }
    let hh = 0.5 * h;
    (divided_difference_1d(f, h, alpha - 1, x + hh) - divided_difference_1d(f, h, alpha - 1, x - hh)) / h
}

/// Scaled directional divided difference `∂_{u,H}^α f(p)`.
///
/// Panics if `h <= 0`.
pub fn directional_divided_difference<F>(f: &F, u: Direction2, h: f64, alpha: u32, p: Point2) -> f64
where
    F: Fn(f64, f64) -> f64 + ?Sized,
{
    assert!(h > 0.0, "divided difference step must be positive, got {h}");
    if alpha == 0 {
        return f(p.x, p.y);
    }
    let plus = p.offset(u, 0.5 * h);
    let minus = p.offset(u, -0.5 * h);
    (directional_divided_difference(f, u, h, alpha - 1, plus)
        - directional_divided_difference(f, u, h, alpha - 1, minus))
        / h
}

/// Right-hand side of the binomial splitting of `∂_{u_θ,H}^α` into axis-wise
/// differences along `u_x = (cos θ, 0)` and `u_y = (0, sin θ)`:
///
/// ```text
/// Σ_m C(α,m) ∂_{u_x}^{α-m} ∂_{u_y}^m f(x - m H cos θ / 2, y + (α-m) H sin θ / 2)
/// ```
pub fn directional_dd_binomial_expansion<F>(f: &F, theta: f64, h: f64, alpha: u32, p: Point2) -> f64
where
    F: Fn(f64, f64) -> f64 + ?Sized,
{
    assert!(h > 0.0, "divided difference step must be positive, got {h}");
    let (s, c) = theta.sin_cos();
    let ux = Direction2::new(c, 0.0);
    let uy = Direction2::new(0.0, s);
    (0..=alpha)
        .map(|m| {
            let shifted = Point2::new(
                p.x - 0.5 * m as f64 * h * c,
                p.y + 0.5 * (alpha - m) as f64 * h * s,
            );
            let inner = |x: f64, y: f64| directional_divided_difference(f, uy, h, m, Point2::new(x, y));
            binomial(alpha, m) * directional_divided_difference(&inner, ux, h, alpha - m, shifted)
        })
        .sum()
}

pub(crate) fn binomial(n: u32, k: u32) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
