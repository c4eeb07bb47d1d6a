use std::f64::consts::TAU;

use super::DgError;

/// Axis-aligned rectangle `[xmin, xmax] × [ymin, ymax]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl Domain {
    pub const fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Self {
        Self { xmin, xmax, ymin, ymax }
    }

    pub fn lx(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn ly(&self) -> f64 {
        self.ymax - self.ymin
    }
}

impl Default for Domain {
    /// `[0, 2π]²`
    fn default() -> Self {
        Self::new(0.0, TAU, 0.0, TAU)
    }
}

/// Uniform, doubly periodic quadrilateral mesh.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformMesh2D {
    nx: usize,
    ny: usize,
    domain: Domain,
}

/// Element indices plus reference coordinates in `[-1, 1)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Location {
    pub i: usize,
    pub j: usize,
    pub xi: f64,
    pub eta: f64,
}

impl UniformMesh2D {
    pub fn new(nx: usize, ny: usize, domain: Domain) -> Result<Self, DgError> {
        if nx == 0 || ny == 0 {
            return Err(DgError::InvalidMesh(format!("element counts must be positive, got {nx}x{ny}")));
        }
        let finite = [domain.xmin, domain.xmax, domain.ymin, domain.ymax].iter().all(|v| v.is_finite());
        if !finite || domain.lx() <= 0.0 || domain.ly() <= 0.0 {
            return Err(DgError::InvalidMesh(format!("degenerate domain {domain:?}")));
        }
        Ok(Self { nx, ny, domain })
    }

    /// `n × n` elements on `[0, 2π]²`.
    pub fn square(n: usize) -> Result<Self, DgError> {
        Self::new(n, n, Domain::default())
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn num_elements(&self) -> usize {
        self.nx * self.ny
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn hx(&self) -> f64 {
        self.domain.lx() / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        self.domain.ly() / self.ny as f64
    }

    /// Characteristic size used for kernel scaling, `max(hx, hy)`.
    pub fn h(&self) -> f64 {
        self.hx().max(self.hy())
    }

    pub fn is_square(&self) -> bool {
        (self.hx() - self.hy()).abs() <= 1e-12 * self.hx()
    }

    /// Lower-left corner of element `(i, j)`.
    pub fn element_origin(&self, i: usize, j: usize) -> (f64, f64) {
        (
            self.domain.xmin + i as f64 * self.hx(),
            self.domain.ymin + j as f64 * self.hy(),
        )
    }

    /// Physical point of reference coordinates `(ξ, η)` in element `(i, j)`.
    pub fn map_to_physical(&self, i: usize, j: usize, xi: f64, eta: f64) -> (f64, f64) {
        let (x0, y0) = self.element_origin(i, j);
        (x0 + 0.5 * (xi + 1.0) * self.hx(), y0 + 0.5 * (eta + 1.0) * self.hy())
    }

    /// Periodic wrap into `[xmin, xmax) × [ymin, ymax)`.
    pub fn wrap(&self, x: f64, y: f64) -> (f64, f64) {
        (
            wrap_axis(x, self.domain.xmin, self.domain.lx()),
            wrap_axis(y, self.domain.ymin, self.domain.ly()),
        )
    }

    /// Element containing `(x, y)` under half-open cells `[x_i, x_{i+1})`,
    /// after periodic wrapping.
    pub fn locate(&self, x: f64, y: f64) -> Location {
        let (i, xi) = locate_axis(x, self.domain.xmin, self.domain.lx(), self.nx);
        let (j, eta) = locate_axis(y, self.domain.ymin, self.domain.ly(), self.ny);
        Location { i, j, xi, eta }
    }
}

fn wrap_axis(x: f64, min: f64, len: f64) -> f64 {
    let mut r = (x - min).rem_euclid(len);
    if r >= len {
        r -= len;
    }
    min + r
}

fn locate_axis(x: f64, min: f64, len: f64, n: usize) -> (usize, f64) {
    let mut r = (x - min).rem_euclid(len) / len * n as f64;
    if r >= n as f64 {
        r -= n as f64;
    }
    let i = (r.floor() as usize).min(n - 1);
    let local = (2.0 * (r - i as f64) - 1.0).clamp(-1.0, 1.0);
    (i, local)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_empty_mesh() {
        assert!(UniformMesh2D::new(0, 3, Domain::default()).is_err());
        assert!(UniformMesh2D::new(3, 3, Domain::new(1.0, 1.0, 0.0, 1.0)).is_err());
    }

    #[test]
    fn half_open_cells() {
        let mesh = UniformMesh2D::new(8, 4, Domain::new(0.0, 8.0, 0.0, 4.0)).unwrap();
        let loc = mesh.locate(3.0, 1.5);
        assert_eq!((loc.i, loc.j), (3, 1));
        assert_eq!(loc.xi, -1.0);
        let loc = mesh.locate(8.0, 4.0);
        assert_eq!((loc.i, loc.j), (0, 0));
        let loc = mesh.locate(-0.25, 3.75);
        assert_eq!((loc.i, loc.j), (7, 3));
        assert!((loc.xi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn wrap_is_periodic() {
        let mesh = UniformMesh2D::square(10).unwrap();
        let (x, y) = mesh.wrap(TAU + 0.1, -0.2);
        assert!((x - 0.1).abs() < 1e-14);
        assert!((y - (TAU - 0.2)).abs() < 1e-14);
        let (x, _) = mesh.wrap(-1e-300, 0.0);
        assert!(x < TAU);
    }
}
