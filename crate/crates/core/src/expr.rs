//! Exact number expressions used in data files and catalog entries.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | primary
//! primary := INT | 'sqrt' '(' expr ')' | 'e' '(' ['-'] INT ['/' INT] ')' | '(' expr ')'
//! ```
//!
//! `e(p/q)` is the root of unity `e^{2πi p/q}`. `sqrt` is the principal
//! branch, so `sqrt(-1)` is `i` rather than an error.
//!
//! ```
//! use modular_data::expr::parse_number_expr;
//! let phi = parse_number_expr("(1+sqrt(5))/2").unwrap();
//! assert!((phi.re - 1.618_033_988_749_895).abs() < 1e-15);
//! assert_eq!(parse_number_expr("e(1/4)").unwrap().im, 1.0);
//! ```

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::ExprError;
use crate::phase::root_of_unity;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumberExpr {
    Int(u64),
    /// `e(num/den)`, with `den > 0`.
    Phase {
        num: i64,
        den: i64,
    },
    Sqrt(Box<NumberExpr>),
    Neg(Box<NumberExpr>),
    Add(Box<NumberExpr>, Box<NumberExpr>),
    Sub(Box<NumberExpr>, Box<NumberExpr>),
    Mul(Box<NumberExpr>, Box<NumberExpr>),
    Div(Box<NumberExpr>, Box<NumberExpr>),
}

impl NumberExpr {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        Ok(Parser::new(text, false).parse_all()?.0)
    }

    /// Evaluates the tree. Division by an exact zero is rejected.
    pub fn eval(&self) -> Result<Complex64, ExprError> {
        use NumberExpr::*;
        let v = match self {
            Int(n) => Complex64::new(*n as f64, 0.0),
            Phase { num, den } => {
                if *den <= 0 {
                    return Err(err(0, "phase denominator must be positive"));
                }
                root_of_unity(*num, *den)
            }
            Sqrt(x) => principal_sqrt(x.eval()?),
            Neg(x) => -x.eval()?,
            Add(a, b) => a.eval()? + b.eval()?,
            Sub(a, b) => a.eval()? - b.eval()?,
            Mul(a, b) => a.eval()? * b.eval()?,
            Div(a, b) => divide(a.eval()?, b.eval()?, 0)?,
        };
        finite(v, 0)
    }

    pub fn int(n: u64) -> Self {
        NumberExpr::Int(n)
    }

    pub fn phase(num: i64, den: i64) -> Self {
        NumberExpr::Phase { num, den }
    }

    pub fn sqrt(self) -> Self {
        NumberExpr::Sqrt(Box::new(self))
    }

    fn precedence(&self) -> u8 {
        match self {
            NumberExpr::Add(..) | NumberExpr::Sub(..) => 1,
            NumberExpr::Mul(..) | NumberExpr::Div(..) => 2,
            NumberExpr::Neg(..) => 3,
            _ => 4,
        }
    }
}

impl std::ops::Neg for NumberExpr {
    type Output = NumberExpr;
    fn neg(self) -> NumberExpr {
        NumberExpr::Neg(Box::new(self))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for NumberExpr {
            type Output = NumberExpr;
            fn $method(self, rhs: NumberExpr) -> NumberExpr {
                NumberExpr::$variant(Box::new(self), Box::new(rhs))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl FromStr for NumberExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, ExprError> {
        NumberExpr::parse(s)
    }
}

impl fmt::Display for NumberExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use NumberExpr::*;
        let p = self.precedence();
        let child = |f: &mut fmt::Formatter<'_>, x: &NumberExpr, paren: bool| {
            if paren {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        };
        match self {
            Int(n) => write!(f, "{n}"),
            Phase { num, den: 1 } => write!(f, "e({num})"),
            Phase { num, den } => write!(f, "e({num}/{den})"),
            Sqrt(x) => write!(f, "sqrt({x})"),
            Neg(x) => {
                f.write_str("-")?;
                child(f, x, x.precedence() < p)
            }
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
                child(f, a, a.precedence() < p)?;
                f.write_str(match self {
                    Add(..) => " + ",
                    Sub(..) => " - ",
                    Mul(..) => "*",
                    _ => "/",
                })?;
                child(f, b, b.precedence() <= p)
            }
        }
    }
}

/// Parses and evaluates an expression in one pass, so that domain errors
/// carry the column where they occur.
pub fn parse_number_expr(text: &str) -> Result<Complex64, ExprError> {
    Ok(Parser::new(text, true).parse_all()?.1)
}

fn err(pos: usize, msg: impl Into<String>) -> ExprError {
    ExprError { pos, msg: msg.into() }
}

fn principal_sqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), 0.0)
        } else {
            Complex64::new(0.0, (-z.re).sqrt())
        }
    } else {
        z.sqrt()
    }
}

fn divide(a: Complex64, b: Complex64, pos: usize) -> Result<Complex64, ExprError> {
    if b.re == 0.0 && b.im == 0.0 {
        return Err(err(pos, "division by zero"));
    }
    if b.im == 0.0 {
        Ok(Complex64::new(a.re / b.re, a.im / b.re))
    } else {
        Ok(a / b)
    }
}

fn finite(v: Complex64, pos: usize) -> Result<Complex64, ExprError> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(err(pos, "value is not finite"))
    }
}

type Node = (NumberExpr, Complex64);

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    // syntax-only parses skip domain checks such as division by zero
    evaluate: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, evaluate: bool) -> Self {
        Parser { src: text.as_bytes(), pos: 0, evaluate }
    }

    fn checked(&self, v: Result<Complex64, ExprError>) -> Result<Complex64, ExprError> {
        if self.evaluate {
            v
        } else {
            Ok(Complex64::new(0.0, 0.0))
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        match self.peek() {
            Some(x) if x == c => {
                self.pos += 1;
                Ok(())
            }
            Some(x) => Err(err(self.pos, format!("expected `{}`, found `{}`", c as char, x as char))),
            None => Err(err(self.pos, format!("expected `{}`, found end of input", c as char))),
        }
    }

    fn parse_all(mut self) -> Result<Node, ExprError> {
        if self.peek().is_none() {
            return Err(err(self.pos, "empty expression"));
        }
        let node = self.expr()?;
        match self.peek() {
            None => Ok(node),
            Some(c) => Err(err(self.pos, format!("unexpected `{}`", c as char))),
        }
    }

    fn expr(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            let rhs = self.term()?;
            lhs = if op == b'+' {
                (lhs.0 + rhs.0, self.checked(finite(lhs.1 + rhs.1, at))?)
            } else {
                (lhs.0 - rhs.0, self.checked(finite(lhs.1 - rhs.1, at))?)
            };
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Node, ExprError> {
        let mut lhs = self.unary()?;
        while let Some(op @ (b'*' | b'/')) = self.peek() {
            let at = self.pos;
            self.pos += 1;
            self.skip_ws();
            let rhs_at = self.pos;
            let rhs = self.unary()?;
            lhs = if op == b'*' {
                (lhs.0 * rhs.0, self.checked(finite(lhs.1 * rhs.1, at))?)
            } else {
                let v = self.checked(divide(lhs.1, rhs.1, rhs_at).and_then(|v| finite(v, at)))?;
                (lhs.0 / rhs.0, v)
            };
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Node, ExprError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            let (e, v) = self.unary()?;
            return Ok((-e, -v));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Node, ExprError> {
        let start = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let node = self.expr()?;
                self.expect(b')')?;
                Ok(node)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok((NumberExpr::Int(n), Complex64::new(n as f64, 0.0)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let ident_start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let ident = &self.src[ident_start..self.pos];
                match ident {
                    b"sqrt" => {
                        self.expect(b'(')?;
                        let (e, v) = self.expr()?;
                        self.expect(b')')?;
                        Ok((e.sqrt(), principal_sqrt(v)))
                    }
                    b"e" => self.phase_body(),
                    _ => Err(err(ident_start, format!("unknown identifier `{}`", String::from_utf8_lossy(ident)))),
                }
            }
            Some(_) => {
                // report the whole (possibly multibyte) character
                let text = std::str::from_utf8(&self.src[self.pos..]).unwrap_or("");
                let ch = text.chars().next().unwrap_or('?');
                Err(err(self.pos, format!("unexpected `{ch}`")))
            }
            None => Err(err(start.max(self.pos), "unexpected end of input")),
        }
    }

    fn phase_body(&mut self) -> Result<Node, ExprError> {
        self.expect(b'(')?;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let num_at = self.pos;
        let num = i64::try_from(self.integer()?).map_err(|_| err(num_at, "phase numerator too large"))?;
        let num = if negative { -num } else { num };
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            self.skip_ws();
            let den_at = self.pos;
            let den = self.integer()?;
            if den == 0 {
                return Err(err(den_at, "phase denominator is zero"));
            }
            i64::try_from(den).map_err(|_| err(den_at, "phase denominator too large"))?
        } else {
            1
        };
        self.expect(b')')?;
        Ok((NumberExpr::Phase { num, den }, root_of_unity(num, den)))
    }

    fn integer(&mut self) -> Result<u64, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(match self.src.get(self.pos) {
                Some(&c) => err(start, format!("expected an integer, found `{}`", c as char)),
                None => err(start, "expected an integer, found end of input"),
            });
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return Err(err(self.pos, "decimal literals are not allowed; write a fraction"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        digits.parse().map_err(|_| err(start, "integer literal too large"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-15
    }

    #[test]
    fn arithmetic_examples() {
        let v = parse_number_expr("1/2 + sqrt(2)/2").unwrap();
        assert!((v.re - 1.207_106_78).abs() < 1e-8);
        assert_eq!(v.im, 0.0);
        let phi = parse_number_expr("(1+sqrt(5))/2").unwrap();
        assert!((phi.re - 1.618_033_988_7).abs() < 1e-10);
    }

    #[test]
    fn phase_example() {
        let v = parse_number_expr("e(2/5)").unwrap();
        let a = 4.0 * std::f64::consts::PI / 5.0;
        assert!(close(v, Complex64::new(a.cos(), a.sin())));
        assert_eq!(parse_number_expr("e(-1/2)").unwrap(), Complex64::new(-1.0, 0.0));
        assert_eq!(parse_number_expr("e(3)").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_number_expr("e( - 3 / 4 )").unwrap(), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn principal_branch() {
        assert_eq!(parse_number_expr("sqrt(-4)").unwrap(), Complex64::new(0.0, 2.0));
        let v = parse_number_expr("sqrt(e(1/2) * 9)").unwrap();
        assert!(close(v, Complex64::new(0.0, 3.0)));
        let w = parse_number_expr("sqrt(e(1/4))").unwrap();
        assert!(close(w, root_of_unity(1, 8)));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(parse_number_expr("2 - 3 - 4").unwrap().re, -5.0);
        assert_eq!(parse_number_expr("12/3/2").unwrap().re, 2.0);
        assert_eq!(parse_number_expr("-2*3 + 1").unwrap().re, -5.0);
        assert_eq!(parse_number_expr("--1").unwrap().re, 1.0);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_number_expr("1 + * 2").unwrap_err();
        assert_eq!(e.pos, 4);
        let e = parse_number_expr("1/(2-2)").unwrap_err();
        assert_eq!((e.pos, e.msg.as_str()), (2, "division by zero"));
        let e = parse_number_expr("sqrt(2").unwrap_err();
        assert_eq!(e.pos, 6);
        let e = parse_number_expr("e(1/0)").unwrap_err();
        assert_eq!(e.pos, 4);
        assert!(parse_number_expr("").is_err());
        assert!(parse_number_expr("0.5").unwrap_err().msg.contains("decimal"));
        assert!(parse_number_expr("pi").unwrap_err().msg.contains("unknown identifier"));
        assert!(parse_number_expr("1 2").is_err());
        assert!(parse_number_expr("e(1/2+1)").is_err());
        assert!(parse_number_expr("φ").is_err());
        assert!(parse_number_expr("99999999999999999999999").is_err());
    }

    #[test]
    fn tree_eval_matches_streaming_eval() {
        for s in ["1/2 + sqrt(2)/2", "e(-1/16)*sqrt(2)", "-(1 - e(1/3))/(2*e(1/4))"] {
            let tree = NumberExpr::parse(s).unwrap();
            assert_eq!(tree.eval().unwrap(), parse_number_expr(s).unwrap());
        }
        let zero = NumberExpr::int(1) / (NumberExpr::phase(1, 2) + NumberExpr::int(1));
        assert!(zero.eval().is_err());
    }

    #[test]
    fn canonical_printing() {
        let cases = [
            ("1/2+sqrt(2)/2", "1/2 + sqrt(2)/2"),
            ("(1+sqrt(5))/2", "(1 + sqrt(5))/2"),
            ("1-(2-3)", "1 - (2 - 3)"),
            ("(1-2)-3", "1 - 2 - 3"),
            ("2/(3*4)", "2/(3*4)"),
            ("-(1+2)", "-(1 + 2)"),
            ("e(6/3)", "e(6/3)"),
            ("e(2)", "e(2)"),
            ("e(-1/16)", "e(-1/16)"),
        ];
        for (input, want) in cases {
            assert_eq!(NumberExpr::parse(input).unwrap().to_string(), want);
        }
    }

    fn arb_expr() -> impl Strategy<Value = NumberExpr> {
        let leaf = prop_oneof![
            (0u64..1000).prop_map(NumberExpr::Int),
            (-50i64..50, 1i64..50).prop_map(|(num, den)| NumberExpr::Phase { num, den }),
        ];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(NumberExpr::sqrt),
                inner.clone().prop_map(|x| -x),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
                (inner.clone(), inner).prop_map(|(a, b)| a / b),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.to_string();
            prop_assert_eq!(NumberExpr::parse(&text).unwrap(), e);
        }

        #[test]
        fn streaming_and_tree_eval_agree(e in arb_expr()) {
            let text = e.to_string();
            match (e.eval(), parse_number_expr(&text)) {
                (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
            }
        }
    }
}
