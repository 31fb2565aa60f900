//! A small expression language for user-supplied coefficient fields.
//!
//! Grammar (usual precedence, `^` binds tighter than unary minus and is
//! right-associative):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' unary)?
//! atom   := number | 'x' | 'y' | 'lambda' | 'pi'
//!         | ('sin' | 'cos' | 'exp') '(' expr ')'
//!         | '(' expr ')'
//! ```
//!
//! Expressions are differentiated symbolically, so user-defined fields get
//! exact gradients and Jacobians rather than finite-difference ones.

use crate::error::{Error, Result};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
    Lambda,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Var(Var),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' => i += 1,
            '+' => {
                tokens.push(Token::Plus);
                i += 1;
            }
            '-' => {
                tokens.push(Token::Minus);
                i += 1;
            }
            '*' => {
                tokens.push(Token::Star);
                i += 1;
            }
            '/' => {
                tokens.push(Token::Slash);
                i += 1;
            }
            '^' => {
                tokens.push(Token::Caret);
                i += 1;
            }
            '(' => {
                tokens.push(Token::LParen);
                i += 1;
            }
            ')' => {
                tokens.push(Token::RParen);
                i += 1;
            }
            '0'..='9' | '.' => {
                let start = i;
                while i < bytes.len() && matches!(bytes[i] as char, '0'..='9' | '.') {
                    i += 1;
                }
                // Exponent suffix like 1e-3 / 2.5E+4.
                if i < bytes.len() && matches!(bytes[i] as char, 'e' | 'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && matches!(bytes[j] as char, '+' | '-') {
                        j += 1;
                    }
                    if j < bytes.len() && (bytes[j] as char).is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && (bytes[i] as char).is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| Error::Expr(format!("invalid number '{text}'")))?;
                tokens.push(Token::Num(value));
            }
            'a'..='z' | 'A'..='Z' | '_' => {
                let start = i;
                while i < bytes.len()
                    && matches!(bytes[i] as char, 'a'..='z' | 'A'..='Z' | '0'..='9' | '_')
                {
                    i += 1;
                }
                tokens.push(Token::Ident(src[start..i].to_string()));
            }
            other => {
                return Err(Error::Expr(format!(
                    "unexpected character '{other}' at byte {i}"
                )))
            }
        }
    }
    Ok(tokens)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Token, context: &str) -> Result<()> {
        match self.next() {
            Some(t) if &t == want => Ok(()),
            got => Err(Error::Expr(format!(
                "expected {want:?} {context}, found {got:?}"
            ))),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            // Right-associative, and `2^-x` style exponents are allowed.
            let exponent = self.unary()?;
            return Ok(Expr::Pow(Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Token::Num(v)) => Ok(Expr::Num(v)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(&Token::RParen, "to close '('")?;
                Ok(inner)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "x" => Ok(Expr::Var(Var::X)),
                "y" => Ok(Expr::Var(Var::Y)),
                "lambda" => Ok(Expr::Var(Var::Lambda)),
                "pi" => Ok(Expr::Num(std::f64::consts::PI)),
                "sin" | "cos" | "exp" => {
                    self.expect(&Token::LParen, &format!("after '{name}'"))?;
                    let arg = Box::new(self.expr()?);
                    self.expect(&Token::RParen, &format!("to close '{name}('"))?;
                    Ok(match name.as_str() {
                        "sin" => Expr::Sin(arg),
                        "cos" => Expr::Cos(arg),
                        _ => Expr::Exp(arg),
                    })
                }
                other => Err(Error::Expr(format!("unknown identifier '{other}'"))),
            },
            got => Err(Error::Expr(format!("expected a value, found {got:?}"))),
        }
    }
}

/// Parse a source string into an expression tree.
pub fn parse(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    if tokens.is_empty() {
        return Err(Error::Expr("empty expression".into()));
    }
    let mut p = Parser { tokens, pos: 0 };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(Error::Expr(format!(
            "trailing input after expression: {:?}",
            &p.tokens[p.pos..]
        )));
    }
    Ok(e)
}

impl Expr {
    /// Evaluate at a point and parameter value.
    pub fn eval(&self, x: f64, y: f64, lambda: f64) -> f64 {
        match self {
            Expr::Num(v) => *v,
            Expr::Var(Var::X) => x,
            Expr::Var(Var::Y) => y,
            Expr::Var(Var::Lambda) => lambda,
            Expr::Add(a, b) => a.eval(x, y, lambda) + b.eval(x, y, lambda),
            Expr::Sub(a, b) => a.eval(x, y, lambda) - b.eval(x, y, lambda),
            Expr::Mul(a, b) => a.eval(x, y, lambda) * b.eval(x, y, lambda),
            Expr::Div(a, b) => a.eval(x, y, lambda) / b.eval(x, y, lambda),
            Expr::Pow(a, b) => a.eval(x, y, lambda).powf(b.eval(x, y, lambda)),
            Expr::Neg(a) => -a.eval(x, y, lambda),
            Expr::Sin(a) => a.eval(x, y, lambda).sin(),
            Expr::Cos(a) => a.eval(x, y, lambda).cos(),
            Expr::Exp(a) => a.eval(x, y, lambda).exp(),
        }
    }

    /// Exact partial derivative with respect to `var`, as a new expression.
    pub fn diff(&self, var: Var) -> Expr {
        use Expr::*;
        match self {
            Num(_) => Num(0.0),
            Var(v) => Num(if *v == var { 1.0 } else { 0.0 }),
            Add(a, b) => simplify(Add(Box::new(a.diff(var)), Box::new(b.diff(var)))),
            Sub(a, b) => simplify(Sub(Box::new(a.diff(var)), Box::new(b.diff(var)))),
            Mul(a, b) => {
                let left = Mul(Box::new(a.diff(var)), b.clone());
                let right = Mul(a.clone(), Box::new(b.diff(var)));
                simplify(Add(Box::new(left), Box::new(right)))
            }
            Div(a, b) => {
                // (a/b)' = (a'b - ab') / b²
                let num = Sub(
                    Box::new(Mul(Box::new(a.diff(var)), b.clone())),
                    Box::new(Mul(a.clone(), Box::new(b.diff(var)))),
                );
                let den = Mul(b.clone(), b.clone());
                simplify(Div(Box::new(num), Box::new(den)))
            }
            Pow(a, b) => match b.as_ref() {
                // Constant exponent: n a^(n-1) a'
                Num(n) => {
                    let reduced = Pow(a.clone(), Box::new(Num(n - 1.0)));
                    let outer = Mul(Box::new(Num(*n)), Box::new(reduced));
                    simplify(Mul(Box::new(outer), Box::new(a.diff(var))))
                }
                // General case via a^b = exp(b ln a) is not needed by the
                // coefficient language; reject rather than silently mis-derive.
                _ => panic!("differentiation requires a constant exponent"),
            },
            Neg(a) => simplify(Neg(Box::new(a.diff(var)))),
            Sin(a) => simplify(Mul(Box::new(Cos(a.clone())), Box::new(a.diff(var)))),
            Cos(a) => simplify(Neg(Box::new(Mul(
                Box::new(Sin(a.clone())),
                Box::new(a.diff(var)),
            )))),
            Exp(a) => simplify(Mul(Box::new(Exp(a.clone())), Box::new(a.diff(var)))),
        }
    }

    /// True if the expression contains the variable.
    pub fn depends_on(&self, var: Var) -> bool {
        match self {
            Expr::Num(_) => false,
            Expr::Var(v) => *v == var,
            Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b)
            | Expr::Pow(a, b) => a.depends_on(var) || b.depends_on(var),
            Expr::Neg(a) | Expr::Sin(a) | Expr::Cos(a) | Expr::Exp(a) => a.depends_on(var),
        }
    }
}

/// One level of constant folding and identity elimination; `diff` applies it
/// at every node it builds, which keeps derivative trees small.
fn simplify(e: Expr) -> Expr {
    use Expr::*;
    match e {
        Add(a, b) => match (*a, *b) {
            (Num(x), Num(y)) => Num(x + y),
            (Num(z), other) | (other, Num(z)) if z == 0.0 => other,
            (a, b) => Add(Box::new(a), Box::new(b)),
        },
        Sub(a, b) => match (*a, *b) {
            (Num(x), Num(y)) => Num(x - y),
            (other, Num(z)) if z == 0.0 => other,
            (Num(z), other) if z == 0.0 => simplify(Neg(Box::new(other))),
            (a, b) => Sub(Box::new(a), Box::new(b)),
        },
        Mul(a, b) => match (*a, *b) {
            (Num(x), Num(y)) => Num(x * y),
            (Num(z), _) | (_, Num(z)) if z == 0.0 => Num(0.0),
            (Num(o), other) | (other, Num(o)) if o == 1.0 => other,
            (a, b) => Mul(Box::new(a), Box::new(b)),
        },
        Div(a, b) => match (*a, *b) {
            (Num(x), Num(y)) if y != 0.0 => Num(x / y),
            (Num(z), _) if z == 0.0 => Num(0.0),
            (other, Num(o)) if o == 1.0 => other,
            (a, b) => Div(Box::new(a), Box::new(b)),
        },
        Pow(a, b) => match (*a, *b) {
            (_, Num(z)) if z == 0.0 => Num(1.0),
            (base, Num(o)) if o == 1.0 => base,
            (Num(x), Num(y)) => Num(x.powf(y)),
            (a, b) => Pow(Box::new(a), Box::new(b)),
        },
        Neg(a) => match *a {
            Num(x) => Num(-x),
            Neg(inner) => *inner,
            other => Neg(Box::new(other)),
        },
        other => other,
    }
}

/// A scalar field given by an expression, with its first partial derivatives
/// prepared symbolically at construction. Coefficient fields (`c`, `f`, `a`,
/// potentials) are carried in this form so gradients and parameter
/// sensitivities are exact rather than finite-differenced.
#[derive(Debug, Clone)]
pub struct SmoothExpr {
    expr: Expr,
    dx: Expr,
    dy: Expr,
    dlambda: Expr,
}

impl SmoothExpr {
    pub fn new(expr: Expr) -> Self {
        let dx = expr.diff(Var::X);
        let dy = expr.diff(Var::Y);
        let dlambda = expr.diff(Var::Lambda);
        SmoothExpr { expr, dx, dy, dlambda }
    }

    pub fn parse(src: &str) -> Result<Self> {
        Ok(Self::new(parse(src)?))
    }

    pub fn constant(v: f64) -> Self {
        Self::new(Expr::Num(v))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn eval(&self, x: f64, y: f64, lambda: f64) -> f64 {
        self.expr.eval(x, y, lambda)
    }

    /// Spatial gradient (∂x, ∂y) at a point.
    pub fn grad(&self, x: f64, y: f64, lambda: f64) -> [f64; 2] {
        [self.dx.eval(x, y, lambda), self.dy.eval(x, y, lambda)]
    }

    /// Partial derivative in the parameter.
    pub fn dlambda(&self, x: f64, y: f64, lambda: f64) -> f64 {
        self.dlambda.eval(x, y, lambda)
    }

    pub fn depends_on_lambda(&self) -> bool {
        self.expr.depends_on(Var::Lambda)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) => write!(f, "{v}"),
            Expr::Var(Var::X) => write!(f, "x"),
            Expr::Var(Var::Y) => write!(f, "y"),
            Expr::Var(Var::Lambda) => write!(f, "lambda"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, b) => write!(f, "({a} ^ {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn eval_str(src: &str, x: f64, y: f64, l: f64) -> f64 {
        parse(src).unwrap().eval(x, y, l)
    }

    #[test]
    fn arithmetic_and_precedence() {
        assert_eq!(eval_str("1 + 2 * 3", 0.0, 0.0, 0.0), 7.0);
        assert_eq!(eval_str("(1 + 2) * 3", 0.0, 0.0, 0.0), 9.0);
        assert_eq!(eval_str("2 ^ 3 ^ 2", 0.0, 0.0, 0.0), 512.0, "right-associative power");
        assert_eq!(eval_str("-2 ^ 2", 0.0, 0.0, 0.0), -4.0, "power binds tighter than unary minus");
        assert_eq!(eval_str("6 / 3 / 2", 0.0, 0.0, 0.0), 1.0, "division is left-associative");
        assert_eq!(eval_str("1 - 2 - 3", 0.0, 0.0, 0.0), -4.0);
    }

    #[test]
    fn variables_functions_and_constants() {
        let v = eval_str("2 + cos(x) * sin(y) - lambda", 0.0, PI / 2.0, 1.5);
        assert!((v - 1.5).abs() < 1e-15);
        assert!((eval_str("sin(pi)", 0.0, 0.0, 0.0)).abs() < 1e-15);
        assert!((eval_str("exp(1)", 0.0, 0.0, 0.0) - std::f64::consts::E).abs() < 1e-15);
        assert!((eval_str("1e-2 + 2.5E+1", 0.0, 0.0, 0.0) - 25.01).abs() < 1e-12);
    }

    #[test]
    fn parse_errors_are_reported() {
        assert!(parse("").is_err());
        assert!(parse("2 +").is_err());
        assert!(parse("sin x").is_err());
        assert!(parse("(1 + 2").is_err());
        assert!(parse("foo(3)").is_err());
        assert!(parse("1 2").is_err());
        assert!(parse("1..2").is_err());
    }

    #[test]
    fn derivatives_match_hand_formulas() {
        let e = parse("sin(2*x) + x^3 - y*lambda").unwrap();
        let dx = e.diff(Var::X);
        let dy = e.diff(Var::Y);
        let dl = e.diff(Var::Lambda);
        for &(x, y, l) in &[(0.3, -1.2, 0.7), (2.0, 0.1, -3.0)] {
            assert!((dx.eval(x, y, l) - (2.0 * (2.0 * x).cos() + 3.0 * x * x)).abs() < 1e-12);
            assert!((dy.eval(x, y, l) + l).abs() < 1e-12);
            assert!((dl.eval(x, y, l) + y).abs() < 1e-12);
        }

        let q = parse("exp(-x^2) / (2 + cos(y))").unwrap();
        let qx = q.diff(Var::X);
        let (x, y) = (0.8f64, 1.1f64);
        let expect = -2.0 * x * (-x * x).exp() / (2.0 + y.cos());
        assert!((qx.eval(x, y, 0.0) - expect).abs() < 1e-12);
    }

    #[test]
    fn dependence_tracking() {
        let e = parse("2 + sin(x) * y").unwrap();
        assert!(e.depends_on(Var::X));
        assert!(e.depends_on(Var::Y));
        assert!(!e.depends_on(Var::Lambda));
    }

    proptest! {
        // Symbolic derivative agrees with a centered difference on a family
        // of smooth expressions.
        #[test]
        fn symbolic_matches_finite_difference(
            a in -2.0..2.0f64,
            b in -2.0..2.0f64,
            x in -3.0..3.0f64,
            l in -1.0..1.0f64,
        ) {
            let src = format!("{a} * sin(x) + {b} * x^2 + exp(0.3 * x) * lambda");
            let e = parse(&src).unwrap();
            let d = e.diff(Var::X);
            let h = 1e-5;
            let fd = (e.eval(x + h, 0.0, l) - e.eval(x - h, 0.0, l)) / (2.0 * h);
            let sym = d.eval(x, 0.0, l);
            prop_assert!((fd - sym).abs() < 1e-6 * (1.0 + sym.abs()));
        }
    }
}
