use super::{
    BinOp, Expr, ExprError, Result, UnaryFn, FUNCTIONS, MAX_EXPR_DEPTH, MAX_EXPR_LEN, VARIABLES,
};

/// Recursive-descent parser for the coefficient grammar. Offsets in errors
/// are 1-based byte positions.
pub fn parse_expr(text: &str) -> Result<Expr> {
    if text.trim().is_empty() {
        return Err(ExprError::SyntaxError {
            offset: 1,
            message: "empty expression".into(),
        });
    }
    if text.len() > MAX_EXPR_LEN {
        return Err(ExprError::SyntaxError {
            offset: MAX_EXPR_LEN + 1,
            message: format!("expression longer than {MAX_EXPR_LEN} bytes"),
        });
    }
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let expr = p.expr(0)?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.err_here(format!(
            "unexpected `{}`",
            p.bytes[p.pos] as char
        )));
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err_here(&self, message: String) -> ExprError {
        ExprError::SyntaxError {
            offset: self.pos + 1,
            message,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expr(&mut self, depth: usize) -> Result<Expr> {
        self.check_depth(depth)?;
        let mut lhs = self.term(depth + 1)?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    let rhs = self.term(depth + 1)?;
                    lhs = Expr::Bin(BinOp::Add, Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.pos += 1;
                    let rhs = self.term(depth + 1)?;
                    lhs = Expr::Bin(BinOp::Sub, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self, depth: usize) -> Result<Expr> {
        self.check_depth(depth)?;
        let mut lhs = self.factor(depth + 1)?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.factor(depth + 1)?;
                    lhs = Expr::Bin(BinOp::Mul, Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let rhs = self.factor(depth + 1)?;
                    lhs = Expr::Bin(BinOp::Div, Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn factor(&mut self, depth: usize) -> Result<Expr> {
        self.check_depth(depth)?;
        match self.peek() {
            None => Err(self.err_here("unexpected end of expression".into())),
            Some(b'-') => {
                self.pos += 1;
                Ok(Expr::Neg(Box::new(self.factor(depth + 1)?)))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr(depth + 1)?;
                self.expect_close_paren()?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => self.ident(depth),
            Some(c) => Err(self.err_here(format!("unexpected `{}`", c as char))),
        }
    }

    fn expect_close_paren(&mut self) -> Result<()> {
        match self.peek() {
            Some(b')') => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.err_here("expected `)`".into())),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_digit() || self.bytes[self.pos] == b'.')
        {
            self.pos += 1;
        }
        // exponent part: 1e-3, 2.5E+10
        if self.pos < self.bytes.len() && matches!(self.bytes[self.pos], b'e' | b'E') {
            let mut probe = self.pos + 1;
            if probe < self.bytes.len() && matches!(self.bytes[probe], b'+' | b'-') {
                probe += 1;
            }
            if probe < self.bytes.len() && self.bytes[probe].is_ascii_digit() {
                self.pos = probe;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<f64>()
            .map(Expr::Number)
            .map_err(|_| ExprError::SyntaxError {
                offset: start + 1,
                message: format!("invalid number `{text}`"),
            })
    }

    fn ident(&mut self, depth: usize) -> Result<Expr> {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        if let Some(var) = VARIABLES.iter().find(|v| **v == name) {
            return Ok(Expr::Var(var));
        }
        if FUNCTIONS.contains(&name) {
            match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let arg = self.expr(depth + 1)?;
                    self.expect_close_paren()?;
                    let f = match name {
                        "sin" => UnaryFn::Sin,
                        "cos" => UnaryFn::Cos,
                        "exp" => UnaryFn::Exp,
                        "sqrt" => UnaryFn::Sqrt,
                        "abs" => UnaryFn::Abs,
                        _ => unreachable!(),
                    };
                    return Ok(Expr::Unary(f, Box::new(arg)));
                }
                _ => {
                    return Err(self.err_here(format!("function `{name}` needs an argument list")))
                }
            }
        }
        Err(ExprError::UnknownIdentifier {
            name: name.to_string(),
            offset: start + 1,
        })
    }

    fn check_depth(&self, depth: usize) -> Result<()> {
        if depth > MAX_EXPR_DEPTH {
            return Err(ExprError::SyntaxError {
                offset: self.pos + 1,
                message: format!("expression nested deeper than {MAX_EXPR_DEPTH}"),
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_is_ignored() {
        let e = parse_expr("  1 +  2 * x1 ").unwrap();
        assert_eq!(e.to_string(), "1+2*x1");
    }

    #[test]
    fn left_associativity() {
        let e = parse_expr("8-3-2").unwrap();
        assert_eq!(e.eval(&super::super::Bindings::new()).unwrap(), 3.0);
        let e = parse_expr("8/2/2").unwrap();
        assert_eq!(e.eval(&super::super::Bindings::new()).unwrap(), 2.0);
    }

    #[test]
    fn scientific_notation() {
        let e = parse_expr("1e-3+2E+2").unwrap();
        assert_eq!(e.eval(&super::super::Bindings::new()).unwrap(), 200.001);
    }

    #[test]
    fn deep_nesting_is_rejected() {
        let src = format!("{}1{}", "(".repeat(100), ")".repeat(100));
        assert!(matches!(
            parse_expr(&src),
            Err(ExprError::SyntaxError { .. })
        ));
    }

    #[test]
    fn trailing_garbage_rejected() {
        match parse_expr("1+2)") {
            Err(ExprError::SyntaxError { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn function_without_parens_rejected() {
        assert!(parse_expr("sin x1").is_err());
    }
}
