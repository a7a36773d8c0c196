//! Newton's resistance of a concave radial profile, the equivalent boundary
//! integral over the generated body of revolution, and generic boundary
//! functionals of the outward normal on convex polygons.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{Bindings, Expr};
use crate::geometry::{edge_normals, ConvexPolygon};

#[derive(Debug, Error)]
pub enum FunctionalError {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("only the vertical stream direction (0, 0, 1) is supported")]
    UnsupportedDirection,
    #[error(transparent)]
    Expr(#[from] crate::expr::ExprError),
}

pub type Result<T> = std::result::Result<T, FunctionalError>;

/// Height profile of an axially symmetric convex body: nonincreasing,
/// concave samples u_0 .. u_{n_r} on the uniform radius grid r_i = i R / n_r,
/// bounded by 0 <= u <= M.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RadialProfile {
    pub radius: f64,
    pub height_bound: f64,
    pub heights: Vec<f64>,
}

impl RadialProfile {
    pub fn n_r(&self) -> usize {
        self.heights.len() - 1
    }

    pub fn dr(&self) -> f64 {
        self.radius / self.n_r() as f64
    }

    /// Flat profile u = M: the degenerate cylinder of maximal drag.
    pub fn flat(radius: f64, height: f64, n_r: usize) -> Self {
        RadialProfile {
            radius,
            height_bound: height,
            heights: vec![height; n_r + 1],
        }
    }

    /// Straight cone from apex height M down to zero at the rim.
    pub fn cone(radius: f64, height: f64, n_r: usize) -> Self {
        let heights = (0..=n_r)
            .map(|i| height * (1.0 - i as f64 / n_r as f64))
            .collect();
        RadialProfile {
            radius,
            height_bound: height,
            heights,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.heights.len();
        if n < 2 {
            return Err(FunctionalError::InvalidProfile(
                "need at least two height samples".into(),
            ));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(FunctionalError::InvalidProfile(format!(
                "radius must be positive, got {}",
                self.radius
            )));
        }
        if !(self.height_bound >= 0.0 && self.height_bound.is_finite()) {
            return Err(FunctionalError::InvalidProfile(format!(
                "height bound must be nonnegative, got {}",
                self.height_bound
            )));
        }
        let bound_tol = 1e-12 * self.height_bound.max(1.0);
        for (i, &u) in self.heights.iter().enumerate() {
            if !u.is_finite() || u < -bound_tol || u > self.height_bound + bound_tol {
                return Err(FunctionalError::InvalidProfile(format!(
                    "height {u} at sample {i} outside [0, {}]",
                    self.height_bound
                )));
            }
        }
        for i in 0..n - 1 {
            if self.heights[i + 1] > self.heights[i] + 1e-12 {
                return Err(FunctionalError::InvalidProfile(format!(
                    "heights increase at sample {i}"
                )));
            }
        }
        for i in 1..n - 1 {
            let second = self.heights[i + 1] - 2.0 * self.heights[i] + self.heights[i - 1];
            if second > 1e-12 * self.radius {
                return Err(FunctionalError::InvalidProfile(format!(
                    "convex kink at sample {i}: second difference {second:.3e}"
                )));
            }
        }
        Ok(())
    }

    /// Per-cell slopes (u_{i+1} - u_i) / dr.
    pub fn slopes(&self) -> Vec<f64> {
        let dr = self.dr();
        self.heights.windows(2).map(|w| (w[1] - w[0]) / dr).collect()
    }
}

/// Unit stream direction in R^3; the resistance integrand projects the
/// surface normal on it.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct StreamDirection {
    pub a: [f64; 3],
}

impl Default for StreamDirection {
    fn default() -> Self {
        StreamDirection { a: [0.0, 0.0, 1.0] }
    }
}

impl StreamDirection {
    pub fn is_vertical(&self) -> bool {
        (self.a[0].abs() < 1e-12) && (self.a[1].abs() < 1e-12) && ((self.a[2] - 1.0).abs() < 1e-12)
    }

    pub fn validate(&self) -> Result<()> {
        let norm = (self.a[0] * self.a[0] + self.a[1] * self.a[1] + self.a[2] * self.a[2]).sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(FunctionalError::InvalidProfile(format!(
                "stream direction must be a unit vector, |A| = {norm}"
            )));
        }
        Ok(())
    }
}

/// Drag of the profile in base form: the integral of 1 / (1 + |Du|^2) over
/// the base disk, reduced to the radial line and evaluated with the midpoint
/// rule per cell:  2 pi sum_i rbar_i dr / (1 + s_i^2).
pub fn resistance_profile(p: &RadialProfile) -> Result<f64> {
    p.validate()?;
    let dr = p.dr();
    let slopes = p.slopes();
    let mut sum = 0.0;
    let mut comp = 0.0; // Kahan compensation: n_r can be large
    for (i, s) in slopes.iter().enumerate() {
        let rbar = (i as f64 + 0.5) * dr;
        let term = rbar * dr / (1.0 + s * s);
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(2.0 * std::f64::consts::PI * sum)
}

/// Drag in boundary form: integral of ((nu . A)+)^3 over the boundary of the
/// body of revolution generated by the profile.
///
/// The graph part is a stack of frustum walls: on the cell with slope s the
/// normal satisfies nu . e3 = 1 / sqrt(1 + s^2) and the wall area is
/// 2 pi rbar dr sqrt(1 + s^2); flat cells reproduce the top disk. The side
/// wall has horizontal normals and the bottom disk has nu . A < 0, so both
/// drop out under the positive part.
pub fn resistance_boundary_axisym(p: &RadialProfile, stream: StreamDirection) -> Result<f64> {
    stream.validate()?;
    if !stream.is_vertical() {
        return Err(FunctionalError::UnsupportedDirection);
    }
    p.validate()?;
    let dr = p.dr();
    let slopes = p.slopes();
    let mut sum = 0.0;
    let mut comp = 0.0;
    for (i, s) in slopes.iter().enumerate() {
        let rbar = (i as f64 + 0.5) * dr;
        let slant = (1.0 + s * s).sqrt();
        let nu_dot_a = 1.0 / slant;
        let term = rbar * nu_dot_a.powi(3) * slant * dr;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    Ok(2.0 * std::f64::consts::PI * sum)
}

/// Boundary functional on a convex polygon: the sum over edges of
/// length * f(midpoint, outward unit normal), with the integrand over the
/// variables x1, x2, n1, n2.
pub fn boundary_functional_2d(poly: &ConvexPolygon, f: &Expr) -> Result<f64> {
    f.check_vars(&["x1", "x2", "n1", "n2"])?;
    let verts = poly.vertices();
    let n = verts.len();
    let mut total = 0.0;
    for (i, (normal, len)) in edge_normals(poly).into_iter().enumerate() {
        let mid = (verts[i] + verts[(i + 1) % n]) * 0.5;
        let bindings = Bindings::at_point(mid.x, mid.y)
            .set("n1", normal.x)
            .set("n2", normal.y);
        total += len * f.eval(&bindings)?;
    }
    if !total.is_finite() {
        return Err(FunctionalError::Expr(
            crate::expr::ExprError::NonFiniteResult,
        ));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;
    use crate::geometry::Point;
    use std::f64::consts::PI;

    #[test]
    fn flat_profile_gives_disk_area() {
        let p = RadialProfile::flat(1.0, 1.0, 1000);
        let r = resistance_profile(&p).unwrap();
        assert!((r - PI).abs() < 1e-12);
    }

    #[test]
    fn cone_resistance_analytic() {
        // slope -1 everywhere: 2 pi int r/2 dr = pi/2; the midpoint rule is
        // exact because the integrand is linear in r
        let p = RadialProfile::cone(1.0, 1.0, 1000);
        let r = resistance_profile(&p).unwrap();
        assert!((r - PI / 2.0).abs() < 1e-6);

        let p2 = RadialProfile::cone(1.0, 2.0, 1000);
        let r2 = resistance_profile(&p2).unwrap();
        assert!((r2 - PI / 5.0).abs() < 1e-6);
    }

    #[test]
    fn hemisphere_boundary_form() {
        let n_r = 2000;
        let heights: Vec<f64> = (0..=n_r)
            .map(|i| {
                let r = i as f64 / n_r as f64;
                (1.0 - r * r).max(0.0).sqrt()
            })
            .collect();
        let p = RadialProfile {
            radius: 1.0,
            height_bound: 1.0,
            heights,
        };
        let f = resistance_boundary_axisym(&p, StreamDirection::default()).unwrap();
        assert!((f - PI / 2.0).abs() < 1e-3, "hemisphere drag {f}");
    }

    #[test]
    fn flat_disk_boundary_form_exact() {
        let p = RadialProfile::flat(1.0, 0.7, 500);
        let f = resistance_boundary_axisym(&p, StreamDirection::default()).unwrap();
        assert!((f - PI).abs() < 1e-12);
    }

    #[test]
    fn tilted_stream_unsupported() {
        let p = RadialProfile::flat(1.0, 1.0, 10);
        let tilted = StreamDirection {
            a: [1.0, 0.0, 0.0],
        };
        assert!(matches!(
            resistance_boundary_axisym(&p, tilted),
            Err(FunctionalError::UnsupportedDirection)
        ));
    }

    #[test]
    fn invalid_profiles_rejected() {
        let increasing = RadialProfile {
            radius: 1.0,
            height_bound: 1.0,
            heights: vec![0.2, 0.4, 0.1],
        };
        assert!(matches!(
            resistance_profile(&increasing),
            Err(FunctionalError::InvalidProfile(_))
        ));
        let convex_kink = RadialProfile {
            radius: 1.0,
            height_bound: 1.0,
            heights: vec![1.0, 0.4, 0.0],
        };
        assert!(convex_kink.validate().is_err());
        let over_bound = RadialProfile {
            radius: 1.0,
            height_bound: 0.5,
            heights: vec![1.0, 0.5, 0.0],
        };
        assert!(over_bound.validate().is_err());
    }

    fn unit_square() -> ConvexPolygon {
        ConvexPolygon::from_points(&[
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(1.0, 1.0),
            Point::new(0.0, 1.0),
        ])
        .unwrap()
    }

    #[test]
    fn boundary_functional_of_one_is_perimeter() {
        let f = parse_expr("1").unwrap();
        let v = boundary_functional_2d(&unit_square(), &f).unwrap();
        assert!((v - 4.0).abs() < 1e-12);
        let f2 = parse_expr("n1*n1+n2*n2").unwrap();
        let v2 = boundary_functional_2d(&unit_square(), &f2).unwrap();
        assert!((v2 - 4.0).abs() < 1e-12);
    }

    #[test]
    fn positive_part_cube_picks_top_edge() {
        // ((|n2| + n2)/2)^3 is 1 on the top edge and 0 elsewhere
        let cube = "(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))*(0.5*(abs(n2)+n2))";
        let f = parse_expr(cube).unwrap();
        let v = boundary_functional_2d(&unit_square(), &f).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn solution_variables_rejected_on_boundary() {
        let f = parse_expr("u+n1").unwrap();
        assert!(boundary_functional_2d(&unit_square(), &f).is_err());
    }
}
