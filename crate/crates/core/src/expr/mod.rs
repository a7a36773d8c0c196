//! A small arithmetic-expression language for scalar coefficient fields:
//! PDE coefficients a_ij(x), zero-order terms, source terms, integrands over
//! the solution, and boundary integrands over the outward normal.
//!
//! Grammar (left associative, no implicit multiplication):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := NUMBER | IDENT | '(' expr ')' | '-' factor | IDENT '(' expr ')'
//! ```
//!
//! Functions: sin, cos, exp, sqrt, abs. Variables: x1, x2, u, ux, uy, n1, n2.

mod coeff;
mod parser;

pub use coeff::CoefficientField;
pub use parser::parse_expr;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Names the parser accepts as variables.
pub const VARIABLES: [&str; 7] = ["x1", "x2", "u", "ux", "uy", "n1", "n2"];

/// Built-in single-argument functions.
pub const FUNCTIONS: [&str; 5] = ["sin", "cos", "exp", "sqrt", "abs"];

pub const MAX_EXPR_LEN: usize = 4096;
pub const MAX_EXPR_DEPTH: usize = 64;

#[derive(Debug, Error)]
pub enum ExprError {
    /// `offset` is the 1-based byte offset of the problem.
    #[error("syntax error at offset {offset}: {message}")]
    SyntaxError { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("no binding supplied for variable `{0}`")]
    MissingBinding(String),
    #[error("evaluation produced a non-finite value")]
    NonFiniteResult,
}

pub type Result<T> = std::result::Result<T, ExprError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnaryFn {
    Sin,
    Cos,
    Exp,
    Sqrt,
    Abs,
}

impl UnaryFn {
    fn name(self) -> &'static str {
        match self {
            UnaryFn::Sin => "sin",
            UnaryFn::Cos => "cos",
            UnaryFn::Exp => "exp",
            UnaryFn::Sqrt => "sqrt",
            UnaryFn::Abs => "abs",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            UnaryFn::Sin => x.sin(),
            UnaryFn::Cos => x.cos(),
            UnaryFn::Exp => x.exp(),
            UnaryFn::Sqrt => x.sqrt(),
            UnaryFn::Abs => x.abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Parsed expression tree. Immutable after parsing; evaluation is pure.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(f64),
    Var(&'static str),
    Unary(UnaryFn, Box<Expr>),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

/// Variable bindings for evaluation; slots follow [`VARIABLES`].
#[derive(Clone, Copy, Debug, Default)]
pub struct Bindings {
    slots: [Option<f64>; VARIABLES.len()],
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(mut self, name: &str, value: f64) -> Self {
        let idx = VARIABLES
            .iter()
            .position(|v| *v == name)
            .unwrap_or_else(|| panic!("unknown binding name {name}"));
        self.slots[idx] = Some(value);
        self
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        VARIABLES
            .iter()
            .position(|v| *v == name)
            .and_then(|i| self.slots[i])
    }

    /// Spatial point only.
    pub fn at_point(x1: f64, x2: f64) -> Self {
        Self::new().set("x1", x1).set("x2", x2)
    }
}

impl Expr {
    /// Free variables in canonical order.
    pub fn free_vars(&self) -> BTreeSet<&'static str> {
        let mut set = BTreeSet::new();
        self.collect_vars(&mut set);
        set
    }

    fn collect_vars(&self, out: &mut BTreeSet<&'static str>) {
        match self {
            Expr::Number(_) => {}
            Expr::Var(v) => {
                out.insert(v);
            }
            Expr::Unary(_, e) | Expr::Neg(e) => e.collect_vars(out),
            Expr::Bin(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Check that every free variable is in `allowed`.
    pub fn check_vars(&self, allowed: &[&str]) -> Result<()> {
        for v in self.free_vars() {
            if !allowed.contains(&v) {
                return Err(ExprError::UnknownIdentifier {
                    name: v.to_string(),
                    offset: 0,
                });
            }
        }
        Ok(())
    }

    /// IEEE double evaluation, left to right. Errors on unbound variables and
    /// on non-finite intermediate results (division by zero, sqrt of a
    /// negative number, overflow).
    pub fn eval(&self, bindings: &Bindings) -> Result<f64> {
        let v = self.eval_inner(bindings)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFiniteResult)
        }
    }

    fn eval_inner(&self, bindings: &Bindings) -> Result<f64> {
        let v = match self {
            Expr::Number(x) => *x,
            Expr::Var(name) => bindings
                .get(name)
                .ok_or_else(|| ExprError::MissingBinding(name.to_string()))?,
            Expr::Unary(f, e) => f.apply(e.eval_inner(bindings)?),
            Expr::Neg(e) => -e.eval_inner(bindings)?,
            Expr::Bin(op, a, b) => {
                let x = a.eval_inner(bindings)?;
                let y = b.eval_inner(bindings)?;
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => x / y,
                }
            }
        };
        if v.is_nan() {
            return Err(ExprError::NonFiniteResult);
        }
        Ok(v)
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => 1,
            Expr::Bin(BinOp::Mul | BinOp::Div, ..) => 2,
            Expr::Neg(_) => 3,
            _ => 4,
        }
    }
}

/// Canonical printing: minimal parentheses, `Display` floats. Parsing the
/// printed form reproduces the tree, so print-parse-print is a fixed point.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(x) => write!(f, "{x}"),
            Expr::Var(v) => write!(f, "{v}"),
            Expr::Unary(func, e) => write!(f, "{}({})", func.name(), e),
            Expr::Neg(e) => {
                if e.precedence() < 3 {
                    write!(f, "-({e})")
                } else {
                    write!(f, "-{e}")
                }
            }
            Expr::Bin(op, a, b) => {
                let prec = self.precedence();
                let (sym, right_needs) = match op {
                    BinOp::Add => ("+", false),
                    BinOp::Sub => ("-", true),
                    BinOp::Mul => ("*", false),
                    BinOp::Div => ("/", true),
                };
                if a.precedence() < prec {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, "{sym}")?;
                // left associativity: the right operand needs parens at equal
                // precedence for '-' and '/', and always below current level
                let bp = b.precedence();
                if bp < prec || (bp == prec && right_needs) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_parses() {
        let e = parse_expr("1").unwrap();
        assert_eq!(e.eval(&Bindings::new()).unwrap(), 1.0);
    }

    #[test]
    fn arithmetic_with_variable() {
        let e = parse_expr("1+0.5*x1*x1").unwrap();
        let v = e.eval(&Bindings::at_point(2.0, 0.0)).unwrap();
        assert_eq!(v, 3.0);
    }

    #[test]
    fn unbalanced_paren_reports_offset() {
        match parse_expr("sin(x1") {
            Err(ExprError::SyntaxError { offset, .. }) => assert_eq!(offset, 7),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn product_of_variables() {
        let e = parse_expr("x1*x2").unwrap();
        assert_eq!(e.eval(&Bindings::at_point(3.0, 4.0)).unwrap(), 12.0);
    }

    #[test]
    fn exp_of_zero() {
        let e = parse_expr("exp(0)").unwrap();
        assert_eq!(e.eval(&Bindings::new()).unwrap(), 1.0);
    }

    #[test]
    fn division_by_zero_is_non_finite() {
        let e = parse_expr("1/x1").unwrap();
        match e.eval(&Bindings::at_point(0.0, 0.0)) {
            Err(ExprError::NonFiniteResult) => {}
            other => panic!("expected NonFiniteResult, got {other:?}"),
        }
    }

    #[test]
    fn sqrt_of_negative_is_non_finite() {
        let e = parse_expr("sqrt(0-1)").unwrap();
        assert!(matches!(
            e.eval(&Bindings::new()),
            Err(ExprError::NonFiniteResult)
        ));
    }

    #[test]
    fn missing_binding_is_reported() {
        let e = parse_expr("u*2").unwrap();
        assert!(matches!(
            e.eval(&Bindings::at_point(0.0, 0.0)),
            Err(ExprError::MissingBinding(_))
        ));
    }

    #[test]
    fn unknown_identifier_rejected() {
        assert!(matches!(
            parse_expr("foo"),
            Err(ExprError::UnknownIdentifier { .. })
        ));
        assert!(matches!(
            parse_expr("tan(x1)"),
            Err(ExprError::UnknownIdentifier { .. })
        ));
    }

    #[test]
    fn print_parse_print_fixed_point_samples() {
        for src in [
            "1+2*3",
            "(1+2)*3",
            "-x1",
            "-(x1+x2)",
            "1-(2-3)",
            "1/2/3",
            "1/(2/3)",
            "sin(x1)*cos(x2)-sqrt(abs(u))",
            "-(-(x1))",
            "2*-3",
        ] {
            let once = parse_expr(src).unwrap().to_string();
            let twice = parse_expr(&once).unwrap().to_string();
            assert_eq!(once, twice, "printing is not canonical for {src}");
        }
    }

    #[test]
    fn free_vars_collected() {
        let e = parse_expr("x1*uy+sin(n2)").unwrap();
        let vars: Vec<_> = e.free_vars().into_iter().collect();
        assert_eq!(vars, vec!["n2", "uy", "x1"]);
        assert!(e.check_vars(&["x1", "uy", "n2"]).is_ok());
        assert!(e.check_vars(&["x1", "x2"]).is_err());
    }
}
