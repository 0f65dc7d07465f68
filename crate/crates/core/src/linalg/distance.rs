use super::matrix::{ComplexMatrix, C64};
use super::state::{DensityMatrix, VALIDATION_TOL};
use crate::error::{Error, Result};

/// `1/2 ||a - b||_1`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    Ok(hermitian_trace_distance(a.matrix(), b.matrix()))
}

/// `1/2 ||a - b||_1` for Hermitian matrices of equal shape (no validation).
pub fn hermitian_trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = a - b;
    0.5 * diff.eigvalsh().iter().map(|v| v.abs()).sum::<f64>()
}

/// Half the diamond distance between the unitary channels of `u` and `v`.
///
/// For unitary channels this equals `sqrt(1 - d^2)` where `d` is the distance from
/// the origin to the convex hull of the spectrum of `u^dag v`.
pub fn unitary_diamond_distance(u: &ComplexMatrix, v: &ComplexMatrix) -> Result<f64> {
    u.require_unitary(VALIDATION_TOL)?;
    v.require_unitary(VALIDATION_TOL)?;
    if u.rows() != v.rows() {
        return Err(Error::DimensionMismatch {
            expected: u.rows(),
            found: v.rows(),
        });
    }
    let w = &u.adjoint() * v;
    let points: Vec<(f64, f64)> = w.eigenvalues().iter().map(|z: &C64| (z.re, z.im)).collect();
    let d = hull_distance_to_origin(&points).min(1.0);
    Ok((1.0 - d * d).max(0.0).sqrt())
}

const GEOM_TOL: f64 = 1e-12;

fn cross(o: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Counter-clockwise convex hull (monotone chain). Collinear and duplicate points
/// are dropped, so degenerate inputs come back as one or two points.
pub(crate) fn convex_hull(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup_by(|a, b| (a.0 - b.0).abs() < GEOM_TOL && (a.1 - b.1).abs() < GEOM_TOL);
    if pts.len() < 3 {
        return pts;
    }
    let mut lower: Vec<(f64, f64)> = Vec::new();
    for &p in &pts {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= GEOM_TOL {
            lower.pop();
        }
        lower.push(p);
    }
    let mut upper: Vec<(f64, f64)> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= GEOM_TOL {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn point_segment_distance(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> f64 {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len2 = dx * dx + dy * dy;
    let s = if len2 == 0.0 {
        0.0
    } else {
        (((p.0 - a.0) * dx + (p.1 - a.1) * dy) / len2).clamp(0.0, 1.0)
    };
    let (cx, cy) = (a.0 + s * dx, a.1 + s * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Euclidean distance from the origin to the convex hull of `points`.
pub(crate) fn hull_distance_to_origin(points: &[(f64, f64)]) -> f64 {
    let origin = (0.0, 0.0);
    let hull = convex_hull(points);
    match hull.len() {
        0 => f64::INFINITY,
        1 => (hull[0].0.powi(2) + hull[0].1.powi(2)).sqrt(),
        2 => point_segment_distance(origin, hull[0], hull[1]),
        n => {
            let inside = (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], origin) >= -GEOM_TOL);
            if inside {
                0.0
            } else {
                (0..n)
                    .map(|i| point_segment_distance(origin, hull[i], hull[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}
