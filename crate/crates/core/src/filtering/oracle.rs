use super::{FilterConfig, FilterError, FilterKind, PointFilter};
use crate::dg::ModalField2D;
use crate::splines::Point2;

pub const LINE_ORACLE_SLOTS: usize = 20_000;
pub const TENSOR_ORACLE_SLOTS: usize = 2_000;

/// Midpoint-rule convolution that ignores the region decomposition entirely.
/// Slow and only first-order accurate near jumps; meant as a reference.
pub fn brute_force_filter_point(field: &ModalField2D, point: Point2, config: &FilterConfig) -> Result<f64, FilterError> {
    let slots = match config.kind {
        FilterKind::Line => LINE_ORACLE_SLOTS,
        FilterKind::Tensor => TENSOR_ORACLE_SLOTS,
    };
    brute_force_filter_point_with_slots(field, point, config, slots)
}

/// As [`brute_force_filter_point`] with `slots` cells per direction.
pub fn brute_force_filter_point_with_slots(
    field: &ModalField2D,
    point: Point2,
    config: &FilterConfig,
    slots: usize,
) -> Result<f64, FilterError> {
    if slots == 0 {
        return Err(FilterError::InvalidConfig("slots must be positive".into()));
    }
    let cells = |w: f64| {
        let delta = 2.0 * w / slots as f64;
        (0..slots).map(move |m| (-w + (m as f64 + 0.5) * delta, delta))
    };
    match config.build(field)? {
        PointFilter::Line(lf) => {
            // support check
            lf.footprint(point, field.mesh())?;
            let kernel = lf.kernel();
            let (c, s) = (lf.theta().cos(), lf.theta().sin());
            Ok(cells(kernel.half_width())
                .map(|(t, d)| d * kernel.eval(t) * field.evaluate(point.x - t * c, point.y - t * s))
                .sum())
        }
        PointFilter::Tensor(tf) => {
            tf.footprint(point, field.mesh())?;
            let (kx, ky) = tf.kernels();
            let xs: Vec<(f64, f64)> = cells(kx.half_width()).map(|(s, d)| (s, d * kx.eval(s))).collect();
            Ok(cells(ky.half_width())
                .map(|(r, dy)| {
                    let wy = dy * ky.eval(r);
                    xs.iter()
                        .map(|&(s, wx)| wx * field.evaluate(point.x - s, point.y - r))
                        .sum::<f64>()
                        * wy
                })
                .sum())
        }
    }
}
