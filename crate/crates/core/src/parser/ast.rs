use super::lexer::{tokenize, NumKind, Token, TokenKind};
use super::ParseError;

/// Expression tree. Products keep their factors in written order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Number { text: String, kind: NumKind, column: usize },
    Basis { index: usize, name: String },
    Unknown { name: String, column: usize },
    Neg(Box<Expr>),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Power(Box<Expr>, u32),
    /// `a ⊗ b`; only produced when parsing tensor text.
    Tensor(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Expr,
    pub rhs: Expr,
}

struct Parser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    basis: &'a [String],
    tensor_mode: bool,
}

impl<'a> Parser<'a> {
    fn new(text: &str, basis: &'a [String], tensor_mode: bool) -> Result<Self, ParseError> {
        Ok(Parser { tokens: tokenize(text, tensor_mode)?, pos: 0, basis, tensor_mode })
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        let t = self.peek();
        match t.kind {
            TokenKind::End => Ok(()),
            TokenKind::Equals => Err(ParseError::syntax(t.column, "unexpected `=`")),
            _ => Err(ParseError::syntax(t.column, "unexpected input after expression")),
        }
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.signed()?];
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.bump();
                    terms.push(self.signed()?);
                }
                TokenKind::Minus => {
                    self.bump();
                    terms.push(Expr::Neg(Box::new(self.signed()?)));
                }
                _ => break,
            }
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Sum(terms) })
    }

    fn signed(&mut self) -> Result<Expr, ParseError> {
        match self.peek().kind {
            TokenKind::Minus => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.signed()?)))
            }
            TokenKind::Plus => {
                self.bump();
                self.signed()
            }
            _ => self.tensor(),
        }
    }

    fn tensor(&mut self) -> Result<Expr, ParseError> {
        let left = self.product()?;
        if self.peek().kind == TokenKind::Otimes {
            let t = self.bump();
            if !self.tensor_mode {
                return Err(ParseError::syntax(t.column, "tensor product is not allowed in an equation"));
            }
            let right = self.product()?;
            if self.peek().kind == TokenKind::Otimes {
                return Err(ParseError::syntax(self.peek().column, "only two tensor factors are supported"));
            }
            return Ok(Expr::Tensor(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.power()?];
        loop {
            let t = self.peek().clone();
            match t.kind {
                TokenKind::Star => {
                    self.bump();
                    factors.push(self.power()?);
                }
                TokenKind::Ident(_) | TokenKind::LParen | TokenKind::Number(..) => {
                    let after_number = matches!(factors.last(), Some(Expr::Number { .. }));
                    if after_number && !matches!(t.kind, TokenKind::Number(..)) {
                        factors.push(self.power()?);
                    } else {
                        return Err(ParseError::syntax(t.column, "expected `*` between factors"));
                    }
                }
                _ => break,
            }
        }
        Ok(if factors.len() == 1 { factors.pop().unwrap() } else { Expr::Product(factors) })
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if self.peek().kind != TokenKind::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.bump();
        match t.kind {
            TokenKind::Number(text, NumKind::Integer) => {
                let exp: u32 = text
                    .parse()
                    .map_err(|_| ParseError::syntax(t.column, "exponent is too large"))?;
                if exp == 0 {
                    return Err(ParseError::syntax(t.column, "exponent must be a positive integer"));
                }
                Ok(Expr::Power(Box::new(base), exp))
            }
            _ => Err(ParseError::syntax(t.column, "exponent must be a positive integer")),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let t = self.bump();
        match t.kind {
            TokenKind::Number(text, kind) => Ok(Expr::Number { text, kind, column: t.column }),
            TokenKind::Ident(name) => Ok(match self.basis.iter().position(|b| *b == name) {
                Some(index) => Expr::Basis { index, name },
                None => Expr::Unknown { name, column: t.column },
            }),
            TokenKind::LParen => {
                let inner = self.sum()?;
                let close = self.bump();
                if close.kind != TokenKind::RParen {
                    return Err(ParseError::syntax(close.column, "expected `)`"));
                }
                Ok(inner)
            }
            TokenKind::End => Err(ParseError::syntax(t.column, "unexpected end of input")),
            _ => Err(ParseError::syntax(t.column, "expected a number, symbol or `(`")),
        }
    }
}

/// Parses `lhs = rhs`. Identifiers found in `basis` become basis units, all
/// others unknowns.
pub fn parse_equation(text: &str, basis: &[String]) -> Result<Equation, ParseError> {
    let mut p = Parser::new(text, basis, false)?;
    let lhs = p.sum()?;
    let eq = p.bump();
    if eq.kind != TokenKind::Equals {
        return Err(ParseError::syntax(eq.column, "expected `=`"));
    }
    let rhs = p.sum()?;
    p.expect_end()?;
    Ok(Equation { lhs, rhs })
}

pub fn parse_expression(text: &str, basis: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, basis, false)?;
    let e = p.sum()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses tensor text such as `(i+j)(x)k + k⊗(j+k)`.
pub fn parse_tensor_expr(text: &str, basis: &[String]) -> Result<Expr, ParseError> {
    let mut p = Parser::new(text, basis, true)?;
    let e = p.sum()?;
    p.expect_end()?;
    Ok(e)
}

impl Expr {
    /// Unknown names in order of first appearance.
    pub fn unknowns(&self) -> Vec<(String, usize)> {
        let mut out = Vec::new();
        self.collect_unknowns(&mut out);
        out
    }

    fn collect_unknowns(&self, out: &mut Vec<(String, usize)>) {
        match self {
            Expr::Unknown { name, column } => {
                if !out.iter().any(|(n, _)| n == name) {
                    out.push((name.clone(), *column));
                }
            }
            Expr::Neg(e) | Expr::Power(e, _) => e.collect_unknowns(out),
            Expr::Sum(v) | Expr::Product(v) => v.iter().for_each(|e| e.collect_unknowns(out)),
            Expr::Tensor(a, b) => {
                a.collect_unknowns(out);
                b.collect_unknowns(out);
            }
            Expr::Number { .. } | Expr::Basis { .. } => {}
        }
    }
}
