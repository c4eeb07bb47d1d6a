//! Modal upwind DG for `u_t + u_x + u_y = 0` on a periodic uniform mesh,
//! advanced with classical RK4.

use rayon::prelude::*;

use super::basis::{orthonormal_legendre, orthonormal_legendre_derivative, MAX_DEGREE};
use super::field::ModalField2D;
use super::DgError;
use crate::quadrature::GaussLegendre;

/// `dt = cfl · min(hx, hy)^max(1, (2k+1)/4)`, shortened to land exactly on `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DtRule {
    pub cfl: f64,
}

impl DtRule {
    pub const DEFAULT_CFL: f64 = 0.05;

    pub fn new(cfl: f64) -> Self {
        Self { cfl }
    }

    pub fn exponent(degree: usize) -> f64 {
        ((2 * degree + 1) as f64 / 4.0).max(1.0)
    }

    pub fn nominal_step(&self, hmin: f64, degree: usize) -> f64 {
        self.cfl * hmin.powf(Self::exponent(degree))
    }

    /// Human-readable form echoed into reports.
    pub fn describe(&self) -> String {
        format!("cfl={}*h^max(1,(2k+1)/4)", self.cfl)
    }
}

impl Default for DtRule {
    fn default() -> Self {
        Self::new(Self::DEFAULT_CFL)
    }
}

/// One-dimensional pieces of the upwind operator on the reference element.
///
/// With velocity `+1` the upwind trace on the right face is the element's own,
/// on the left face the left neighbour's right trace:
/// `own = D - φ(1) φ(1)^T`, `upwind = φ(-1) φ(1)^T`, `D_{ab} = ∫ φ_a' φ_b`.
#[derive(Debug, Clone)]
struct Operator1d {
    n: usize,
    own: Vec<f64>,
    upwind: Vec<f64>,
}

impl Operator1d {
    fn new(degree: usize) -> Self {
        let n = degree + 1;
        let rule = GaussLegendre::new(n);
        let mut d = vec![0.0; n * n];
        let mut phi = [0.0; MAX_DEGREE + 1];
        let mut dphi = [0.0; MAX_DEGREE + 1];
        for (&x, &w) in rule.nodes().iter().zip(rule.weights()) {
            orthonormal_legendre(degree, x, &mut phi);
            orthonormal_legendre_derivative(degree, x, &mut dphi);
            for a in 0..n {
                for b in 0..n {
                    d[a * n + b] += w * dphi[a] * phi[b];
                }
            }
        }
        let mut right = [0.0; MAX_DEGREE + 1];
        let mut left = [0.0; MAX_DEGREE + 1];
        orthonormal_legendre(degree, 1.0, &mut right);
        orthonormal_legendre(degree, -1.0, &mut left);
        let mut own = d;
        let mut upwind = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                own[a * n + b] -= right[a] * right[b];
                upwind[a * n + b] = left[a] * right[b];
            }
        }
        Self { n, own, upwind }
    }
}

/// Semi-discrete right-hand side `du/dt = L u`.
struct AdvectionOperator {
    nx: usize,
    ny: usize,
    op: Operator1d,
    sx: f64,
    sy: f64,
}

impl AdvectionOperator {
    fn new(field: &ModalField2D) -> Self {
        let mesh = field.mesh();
        Self {
            nx: mesh.nx(),
            ny: mesh.ny(),
            op: Operator1d::new(field.degree()),
            sx: 2.0 / mesh.hx(),
            sy: 2.0 / mesh.hy(),
        }
    }

    fn apply(&self, u: &[f64], out: &mut [f64]) {
        let n = self.op.n;
        let m = n * n;
        let (nx, ny) = (self.nx, self.ny);
        out.par_chunks_mut(nx * m).enumerate().for_each(|(j, row)| {
            let jb = (j + ny - 1) % ny;
            for i in 0..nx {
                let il = (i + nx - 1) % nx;
                let own = &u[(i + nx * j) * m..][..m];
                let left = &u[(il + nx * j) * m..][..m];
                let below = &u[(i + nx * jb) * m..][..m];
                let r = &mut row[i * m..(i + 1) * m];
                for b in 0..n {
                    for a in 0..n {
                        let mut rx = 0.0;
                        for ap in 0..n {
                            rx += self.op.own[a * n + ap] * own[ap + n * b] + self.op.upwind[a * n + ap] * left[ap + n * b];
                        }
                        let mut ry = 0.0;
                        for bp in 0..n {
                            ry += self.op.own[b * n + bp] * own[a + n * bp] + self.op.upwind[b * n + bp] * below[a + n * bp];
                        }
                        r[a + n * b] = self.sx * rx + self.sy * ry;
                    }
                }
            }
        });
    }
}

/// Advances `field0` to `t_final` with velocity `(1, 1)`.
pub fn solve_advection(field0: &ModalField2D, t_final: f64, dt_rule: DtRule) -> Result<ModalField2D, DgError> {
    if !(t_final.is_finite() && t_final > 0.0) {
        return Err(DgError::InvalidTime(t_final));
    }
    if !(dt_rule.cfl.is_finite() && dt_rule.cfl > 0.0) {
        return Err(DgError::InvalidTime(dt_rule.cfl));
    }
    let mesh = field0.mesh();
    let nominal = dt_rule.nominal_step(mesh.hx().min(mesh.hy()), field0.degree());
    let steps = (t_final / nominal).ceil().max(1.0) as usize;
    let dt = t_final / steps as f64;

    let operator = AdvectionOperator::new(field0);
    let mut field = field0.clone();
    let len = field.coeffs().len();
    let mut k1 = vec![0.0; len];
    let mut k2 = vec![0.0; len];
    let mut k3 = vec![0.0; len];
    let mut k4 = vec![0.0; len];
    let mut stage = vec![0.0; len];

    let norm0 = sum_squares(field.coeffs()).max(f64::MIN_POSITIVE);
    for step in 0..steps {
        let u = field.coeffs();
        operator.apply(u, &mut k1);
        axpy_into(&mut stage, u, 0.5 * dt, &k1);
        operator.apply(&stage, &mut k2);
        axpy_into(&mut stage, u, 0.5 * dt, &k2);
        operator.apply(&stage, &mut k3);
        axpy_into(&mut stage, u, dt, &k3);
        operator.apply(&stage, &mut k4);
        let u = field.coeffs_mut();
        for idx in 0..len {
            u[idx] += dt / 6.0 * (k1[idx] + 2.0 * k2[idx] + 2.0 * k3[idx] + k4[idx]);
        }
        let norm = sum_squares(u);
        if !norm.is_finite() || norm > 100.0 * norm0 {
            return Err(DgError::TimeStepTooLarge { dt, step });
        }
    }
    Ok(field)
}

fn axpy_into(out: &mut [f64], base: &[f64], scale: f64, dir: &[f64]) {
    for ((o, b), d) in out.iter_mut().zip(base).zip(dir) {
        *o = b + scale * d;
    }
}

fn sum_squares(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum()
}
