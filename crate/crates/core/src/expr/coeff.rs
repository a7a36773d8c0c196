use super::{parse_expr, Bindings, Expr, Result};
use crate::geometry::Rect;

/// Symmetric second-order coefficient field
/// `a(x) = [[a11, a12], [a12, a22]]` plus an optional nonnegative zero-order
/// term `c0(x)`, with a declared ellipticity floor `nu`.
///
/// The symmetry is structural (a12 stored once). Ellipticity is spot-checked
/// on a 32 x 32 grid, a guard rather than a proof.
#[derive(Clone, Debug)]
pub struct CoefficientField {
    pub a11: Expr,
    pub a12: Expr,
    pub a22: Expr,
    pub c0: Option<Expr>,
    pub nu: f64,
}

const SPOT_CHECK_GRID: usize = 32;

impl CoefficientField {
    /// The Laplacian: identity matrix, no zero-order term.
    pub fn laplacian() -> Self {
        CoefficientField {
            a11: Expr::Number(1.0),
            a12: Expr::Number(0.0),
            a22: Expr::Number(1.0),
            c0: None,
            nu: 1.0,
        }
    }

    pub fn from_strings(
        a11: &str,
        a12: &str,
        a22: &str,
        c0: Option<&str>,
        nu: f64,
    ) -> Result<Self> {
        let parse_coeff = |s: &str| -> Result<Expr> {
            let e = parse_expr(s)?;
            e.check_vars(&["x1", "x2"])?;
            Ok(e)
        };
        Ok(CoefficientField {
            a11: parse_coeff(a11)?,
            a12: parse_coeff(a12)?,
            a22: parse_coeff(a22)?,
            c0: c0.map(parse_coeff).transpose()?,
            nu,
        })
    }

    /// Matrix entries (a11, a12, a22) at a point.
    pub fn matrix_at(&self, x1: f64, x2: f64) -> Result<(f64, f64, f64)> {
        let b = Bindings::at_point(x1, x2);
        Ok((self.a11.eval(&b)?, self.a12.eval(&b)?, self.a22.eval(&b)?))
    }

    pub fn c0_at(&self, x1: f64, x2: f64) -> Result<f64> {
        match &self.c0 {
            None => Ok(0.0),
            Some(e) => e.eval(&Bindings::at_point(x1, x2)),
        }
    }

    pub fn is_constant(&self) -> bool {
        let const_expr = |e: &Expr| e.free_vars().is_empty();
        const_expr(&self.a11)
            && const_expr(&self.a12)
            && const_expr(&self.a22)
            && self.c0.as_ref().map(const_expr).unwrap_or(true)
    }

    /// Spot-check uniform ellipticity and nonnegativity of c0 on a grid over
    /// `domain`: the smallest matrix eigenvalue must stay >= nu and c0 >= 0.
    /// Returns a description of the first violation found.
    pub fn spot_check(&self, domain: &Rect) -> std::result::Result<(), String> {
        if !(self.nu > 0.0) {
            return Err(format!("ellipticity floor nu must be positive, got {}", self.nu));
        }
        let n = SPOT_CHECK_GRID;
        for i in 0..=n {
            for j in 0..=n {
                let x1 = domain.lower.x
                    + (domain.upper.x - domain.lower.x) * (i as f64) / (n as f64);
                let x2 = domain.lower.y
                    + (domain.upper.y - domain.lower.y) * (j as f64) / (n as f64);
                let (a11, a12, a22) = self
                    .matrix_at(x1, x2)
                    .map_err(|e| format!("coefficient evaluation failed at ({x1}, {x2}): {e}"))?;
                // smallest eigenvalue of [[a11, a12], [a12, a22]]
                let tr = a11 + a22;
                let disc = ((a11 - a22) * (a11 - a22) + 4.0 * a12 * a12).sqrt();
                let lambda_min = 0.5 * (tr - disc);
                if lambda_min < self.nu * (1.0 - 1e-9) {
                    return Err(format!(
                        "min matrix eigenvalue {lambda_min} at ({x1}, {x2}) is below nu = {}",
                        self.nu
                    ));
                }
                let c0 = self
                    .c0_at(x1, x2)
                    .map_err(|e| format!("c0 evaluation failed at ({x1}, {x2}): {e}"))?;
                if c0 < 0.0 {
                    return Err(format!("zero-order coefficient is negative at ({x1}, {x2})"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn domain() -> Rect {
        Rect::new(Point::new(-1.0, -1.0), Point::new(1.0, 1.0)).unwrap()
    }

    #[test]
    fn laplacian_passes_spot_check() {
        CoefficientField::laplacian().spot_check(&domain()).unwrap();
    }

    #[test]
    fn variable_coefficients_pass() {
        let c = CoefficientField::from_strings(
            "1+0.5*x1*x1",
            "0",
            "1+0.5*x1*x1",
            Some("1"),
            1.0,
        )
        .unwrap();
        c.spot_check(&domain()).unwrap();
    }

    #[test]
    fn indefinite_matrix_fails() {
        let c = CoefficientField::from_strings("1", "2", "1", None, 0.5).unwrap();
        assert!(c.spot_check(&domain()).is_err());
    }

    #[test]
    fn negative_c0_fails() {
        let c = CoefficientField::from_strings("1", "0", "1", Some("0-1"), 0.5).unwrap();
        assert!(c.spot_check(&domain()).is_err());
    }

    #[test]
    fn solution_variables_rejected_in_coefficients() {
        assert!(CoefficientField::from_strings("u", "0", "1", None, 1.0).is_err());
    }
}
