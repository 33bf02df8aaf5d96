//! Polynomial and rational expressions in the chart coordinates `x1..xN`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := number | variable | '(' expr ')'
//! ```
//!
//! `-x1^2` parses as `-(x1^2)`.

use std::fmt;

use jmetric_core::dual::Scalar;
use thiserror::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(f64),
    /// Zero-based coordinate index.
    Var(usize),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

impl Expr {
    pub fn eval<S: Scalar>(&self, x: &[S]) -> S {
        match self {
            Expr::Num(c) => S::from_f64(*c),
            Expr::Var(i) => x[*i],
            Expr::Neg(a) => -a.eval(x),
            Expr::Add(a, b) => a.eval(x) + b.eval(x),
            Expr::Sub(a, b) => a.eval(x) - b.eval(x),
            Expr::Mul(a, b) => a.eval(x) * b.eval(x),
            Expr::Div(a, b) => a.eval(x) / b.eval(x),
            Expr::Pow(a, k) => a.eval(x).powi(*k),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Token {
    Num(f64),
    Var(usize),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
    End,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Token::Num(v) => write!(f, "number {v}"),
            Token::Var(i) => write!(f, "variable x{}", i + 1),
            Token::Plus => f.write_str("'+'"),
            Token::Minus => f.write_str("'-'"),
            Token::Star => f.write_str("'*'"),
            Token::Slash => f.write_str("'/'"),
            Token::Caret => f.write_str("'^'"),
            Token::Open => f.write_str("'('"),
            Token::Close => f.write_str("')'"),
            Token::End => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Spanned {
    token: Token,
    line: usize,
    column: usize,
    /// The source text of a number literal is integral.
    integral: bool,
}

fn tokenize(src: &str, n_vars: usize) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut i = 0;
    let err = |line, column, message: String| ParseError {
        line,
        column,
        message,
    };
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col, start_idx) = (line, column, i);
        if c == '\n' {
            line += 1;
            column = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            column += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '+' => Some(Token::Plus),
            '-' => Some(Token::Minus),
            '*' => Some(Token::Star),
            '/' => Some(Token::Slash),
            '^' => Some(Token::Caret),
            '(' => Some(Token::Open),
            ')' => Some(Token::Close),
            _ => None,
        };
        let mut integral = false;
        let token = if let Some(t) = single {
            i += 1;
            t
        } else if c.is_ascii_digit() || c == '.' {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut k = i + 1;
                if k < chars.len() && (chars[k] == '+' || chars[k] == '-') {
                    k += 1;
                }
                if k < chars.len() && chars[k].is_ascii_digit() {
                    i = k;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start_idx..i].iter().collect();
            integral = text.chars().all(|c| c.is_ascii_digit());
            let v = text
                .parse::<f64>()
                .map_err(|_| err(start_line, start_col, format!("malformed number `{text}`")))?;
            Token::Num(v)
        } else if c == 'x' {
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start_idx + 1..i].iter().collect();
            match text.parse::<usize>() {
                Ok(k) if (1..=n_vars).contains(&k) => Token::Var(k - 1),
                _ => {
                    return Err(err(
                        start_line,
                        start_col,
                        format!("unknown variable `x{text}` (expected x1..x{n_vars})"),
                    ))
                }
            }
        } else {
            return Err(err(start_line, start_col, format!("unexpected character `{c}`")));
        };
        out.push(Spanned {
            token,
            line: start_line,
            column: start_col,
            integral,
        });
        column = start_col + (i - start_idx);
    }
    out.push(Spanned {
        token: Token::End,
        line,
        column,
        integral: false,
    });
    Ok(out)
}

struct Parser {
    tokens: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Spanned {
        self.tokens[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.tokens[self.pos];
        if t.token != Token::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, at: Spanned, message: String) -> ParseError {
        ParseError {
            line: at.line,
            column: at.column,
            message,
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().token {
                Token::Plus => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Token::Minus => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().token {
                Token::Star => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Token::Slash => {
                    self.bump();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek().token == Token::Minus {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if self.peek().token != Token::Caret {
            return Ok(base);
        }
        self.bump();
        let negative = self.peek().token == Token::Minus;
        if negative {
            self.bump();
        }
        let t = self.bump();
        match t.token {
            Token::Num(v) if t.integral && v <= i32::MAX as f64 => {
                let k = v as i32;
                Ok(Expr::Pow(Box::new(base), if negative { -k } else { k }))
            }
            other => Err(self.error(t, format!("expected an integer exponent, found {other}"))),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        match t.token {
            Token::Num(v) => Ok(Expr::Num(v)),
            Token::Var(i) => Ok(Expr::Var(i)),
            Token::Open => {
                let inner = self.expr()?;
                let close = self.bump();
                if close.token != Token::Close {
                    return Err(self.error(close, format!("expected ')', found {}", close.token)));
                }
                Ok(inner)
            }
            other => Err(self.error(t, format!("expected a number, variable or '(', found {other}"))),
        }
    }
}

/// Parses `src` over the variables `x1..x{n_vars}`.
pub fn parse(src: &str, n_vars: usize) -> Result<Expr, ParseError> {
    let mut p = Parser {
        tokens: tokenize(src, n_vars)?,
        pos: 0,
    };
    let e = p.expr()?;
    let end = p.peek();
    if end.token != Token::End {
        return Err(p.error(end, format!("unexpected {}", end.token)));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use jmetric_core::dual::Dual;

    fn eval(src: &str, x: &[f64]) -> f64 {
        parse(src, x.len()).unwrap().eval(x)
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(eval("1 + 2 * 3", &[]), 7.0);
        assert_eq!(eval("(1 + 2) * 3", &[]), 9.0);
        assert_eq!(eval("8 / 4 / 2", &[]), 1.0);
        assert_eq!(eval("1 - 2 - 3", &[]), -4.0);
        assert_eq!(eval("-x1^2", &[3.0]), -9.0);
        assert_eq!(eval("2*x1^-1 + x2^0", &[4.0, 7.0]), 1.5);
        assert_eq!(eval("1.5e1 + .5", &[]), 15.5);
    }

    #[test]
    fn derivatives_through_duals() {
        let e = parse("x1^2*x2 / (1 + x2)", 2).unwrap();
        let v = e.eval(&Dual::seed(&[3.0, 1.0]));
        assert_eq!(v.re(), 4.5);
        assert_eq!(v.partial(0), 3.0);
        assert_eq!(v.partial(1), 9.0 / 4.0);
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("x1 + x3", 2).unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        let e = parse("1 +\n  * 2", 1).unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse("x1^1.5", 1).unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        let e = parse("(x1 + 1", 1).unwrap_err();
        assert!(e.message.contains("expected ')'"));
        let e = parse("x1 $ 2", 1).unwrap_err();
        assert_eq!((e.line, e.column), (1, 4));
        assert!(parse("x1 x1", 1).is_err());
        assert!(parse("", 1).is_err());
    }
}
