use super::basis::{orthonormal_legendre, MAX_DEGREE};
use super::mesh::UniformMesh2D;
use super::DgError;
use crate::quadrature::GaussLegendre;

/// Piecewise tensor-Legendre field: per element, `(k+1)²` modal coefficients
/// stored x-mode fastest; elements stored row-major with `j` outer.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalField2D {
    mesh: UniformMesh2D,
    degree: usize,
    coeffs: Vec<f64>,
}

impl ModalField2D {
    pub fn new(mesh: UniformMesh2D, degree: usize, coeffs: Vec<f64>) -> Result<Self, DgError> {
        if degree > MAX_DEGREE {
            return Err(DgError::InvalidDegree(degree));
        }
        let expected = mesh.num_elements() * (degree + 1) * (degree + 1);
        if coeffs.len() != expected {
            return Err(DgError::DimensionMismatch {
                expected,
                found: coeffs.len(),
            });
        }
        if let Some(pos) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(DgError::NonFinite(format!("coefficient {pos}")));
        }
        Ok(Self { mesh, degree, coeffs })
    }

    pub fn zeros(mesh: UniformMesh2D, degree: usize) -> Result<Self, DgError> {
        let n = mesh.num_elements() * (degree + 1) * (degree + 1);
        Self::new(mesh, degree, vec![0.0; n])
    }

    pub fn mesh(&self) -> &UniformMesh2D {
        &self.mesh
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modes_per_element(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub(crate) fn coeffs_mut(&mut self) -> &mut [f64] {
        &mut self.coeffs
    }

    pub fn element_coeffs(&self, i: usize, j: usize) -> &[f64] {
        let m = self.modes_per_element();
        let e = i + self.mesh.nx() * j;
        &self.coeffs[e * m..(e + 1) * m]
    }

    /// Value at reference coordinates `(ξ, η)` of element `(i, j)`.
    #[inline]
    pub fn evaluate_in_element(&self, i: usize, j: usize, xi: f64, eta: f64) -> f64 {
        let n = self.degree + 1;
        let mut px = [0.0; MAX_DEGREE + 1];
        let mut py = [0.0; MAX_DEGREE + 1];
        orthonormal_legendre(self.degree, xi, &mut px);
        orthonormal_legendre(self.degree, eta, &mut py);
        let c = self.element_coeffs(i, j);
        let mut acc = 0.0;
        for b in 0..n {
            let row = &c[b * n..(b + 1) * n];
            let inner: f64 = row.iter().zip(&px[..n]).map(|(c, p)| c * p).sum();
            acc += py[b] * inner;
        }
        acc
    }

    /// Value at a physical point, wrapped periodically, half-open cells.
    #[inline]
    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        let loc = self.mesh.locate(x, y);
        self.evaluate_in_element(loc.i, loc.j, loc.xi, loc.eta)
    }

    /// `∫_Ω u_h`.
    pub fn integral(&self) -> f64 {
        let m = self.modes_per_element();
        let area = self.mesh.hx() * self.mesh.hy();
        // ∫φ0 dξ = √2 per direction, Jacobian hx hy / 4
        self.coeffs.chunks(m).map(|c| c[0]).sum::<f64>() * area * 0.5
    }
}

pub fn evaluate_field(field: &ModalField2D, x: f64, y: f64) -> f64 {
    field.evaluate(x, y)
}

/// Element-wise L2 projection using `(k+2)²` Gauss points per element.
pub fn project_initial<F>(mesh: &UniformMesh2D, degree: usize, u0: F) -> Result<ModalField2D, DgError>
where
    F: Fn(f64, f64) -> f64,
{
    let mut field = ModalField2D::zeros(*mesh, degree)?;
    let n = degree + 1;
    let rule = GaussLegendre::new(degree + 2);
    let q = rule.len();
    let mut basis = vec![[0.0; MAX_DEGREE + 1]; q];
    for (node, b) in rule.nodes().iter().zip(basis.iter_mut()) {
        orthonormal_legendre(degree, *node, b);
    }
    let m = n * n;
    for j in 0..mesh.ny() {
        for i in 0..mesh.nx() {
            let e = i + mesh.nx() * j;
            let c = &mut field.coeffs_mut()[e * m..(e + 1) * m];
            for (qy, &eta) in rule.nodes().iter().enumerate() {
                for (qx, &xi) in rule.nodes().iter().enumerate() {
                    let (x, y) = mesh.map_to_physical(i, j, xi, eta);
                    let w = rule.weights()[qx] * rule.weights()[qy] * u0(x, y);
                    for b in 0..n {
                        for a in 0..n {
                            c[a + n * b] += w * basis[qx][a] * basis[qy][b];
                        }
                    }
                }
            }
        }
    }
    Ok(field)
}

/// Domain-averaged L2 error `sqrt(∫(u_h - u)² / |Ω|)` with `k+3` Gauss points
/// per direction.
pub fn l2_error<F>(field: &ModalField2D, exact: F) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    l2_error_with_points(field, exact, field.degree() + 3)
}

pub fn l2_error_with_points<F>(field: &ModalField2D, exact: F, points: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let d = field.mesh().domain();
    absolute_l2_error_with_points(field, exact, points) / (d.lx() * d.ly()).sqrt()
}

/// Unnormalized `sqrt(∫(u_h - u)²)` with `k+3` points per direction.
pub fn absolute_l2_error<F>(field: &ModalField2D, exact: F) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    absolute_l2_error_with_points(field, exact, field.degree() + 3)
}

pub fn absolute_l2_error_with_points<F>(field: &ModalField2D, exact: F, points: usize) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let mesh = field.mesh();
    let rule = GaussLegendre::new(points);
    let jac = 0.25 * mesh.hx() * mesh.hy();
    let mut sum = 0.0;
    for j in 0..mesh.ny() {
        for i in 0..mesh.nx() {
            for (&eta, &wy) in rule.nodes().iter().zip(rule.weights()) {
                for (&xi, &wx) in rule.nodes().iter().zip(rule.weights()) {
                    let (x, y) = mesh.map_to_physical(i, j, xi, eta);
                    let d = field.evaluate_in_element(i, j, xi, eta) - exact(x, y);
                    sum += wx * wy * jac * d * d;
                }
            }
        }
    }
    sum.sqrt()
}
