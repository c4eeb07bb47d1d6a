//! Orthonormal Legendre polynomials on `[-1, 1]`.

/// Upper bound on the per-direction polynomial degree of a field.
pub const MAX_DEGREE: usize = 9;

/// `φ_n(ξ) = sqrt(n + 1/2) P_n(ξ)` for `n = 0..=degree`, written into `out`.
#[inline]
pub fn orthonormal_legendre(degree: usize, xi: f64, out: &mut [f64]) {
    let mut p0 = 1.0;
    out[0] = std::f64::consts::FRAC_1_SQRT_2;
    if degree == 0 {
        return;
    }
    let mut p1 = xi;
    out[1] = 1.5f64.sqrt() * xi;
    for n in 2..=degree {
        let nf = n as f64;
        let p2 = ((2.0 * nf - 1.0) * xi * p1 - (nf - 1.0) * p0) / nf;
        p0 = p1;
        p1 = p2;
        out[n] = (nf + 0.5).sqrt() * p2;
    }
}

/// `φ_n'(ξ)`, via `P_n' = Σ_{m < n, n-m odd} (2m+1) P_m`.
pub fn orthonormal_legendre_derivative(degree: usize, xi: f64, out: &mut [f64]) {
    let mut p = [0.0; MAX_DEGREE + 1];
    let mut scratch = [0.0; MAX_DEGREE + 1];
    orthonormal_legendre(degree, xi, &mut scratch);
    for (m, v) in scratch.iter().enumerate().take(degree + 1) {
        p[m] = v / (m as f64 + 0.5).sqrt();
    }
    for n in 0..=degree {
        let d: f64 = (0..n).filter(|m| (n - m) % 2 == 1).map(|m| (2 * m + 1) as f64 * p[m]).sum();
        out[n] = (n as f64 + 0.5).sqrt() * d;
    }
}
