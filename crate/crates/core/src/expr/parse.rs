//! Recursive-descent parser for coordinate expressions and curve files.
//!
//! Precedence, tightest first: `^` (right-associative), unary `-`,
//! `*` `/`, `+` `-`. The exponent of `^` may not mention the free variable.

use super::{BinOp, Constant, Func, Node};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(f64),
    Ident(String),
    Sym(char),
    Eof,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub(crate) fn lex(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let begin = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[begin..i].iter().collect();
            let value = text.parse::<f64>().map_err(|_| Error::Syntax {
                line: start_line,
                column: start_col,
                message: format!("malformed number `{text}`"),
            })?;
            col += i - begin;
            out.push(Token {
                tok: Tok::Num(value),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let begin = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - begin;
            out.push(Token {
                tok: Tok::Ident(chars[begin..i].iter().collect()),
                line: start_line,
                col: start_col,
            });
            continue;
        }
        if "+-*/^()[],:;=".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                line,
                col,
            });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Syntax {
            line,
            column: col,
            message: format!("unexpected character `{c}`"),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

pub(crate) struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    var: &'a str,
}

impl<'a> Parser<'a> {
    pub fn new(src: &str, var: &'a str) -> Result<Self> {
        Ok(Parser {
            toks: lex(src)?,
            pos: 0,
            var,
        })
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        let t = self.peek();
        Err(Error::Syntax {
            line: t.line,
            column: t.col,
            message: message.into(),
        })
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            self.syntax(format!("expected `{c}`, found {}", describe(&self.peek().tok)))
        }
    }

    pub fn expect_ident(&mut self) -> Result<(String, usize, usize)> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.bump();
                Ok((name, t.line, t.col))
            }
            other => self.syntax(format!("expected identifier, found {}", describe(&other))),
        }
    }

    pub fn expect_eof(&self) -> Result<()> {
        match &self.peek().tok {
            Tok::Eof => Ok(()),
            other => self.syntax(format!("unexpected {}", describe(other))),
        }
    }

    pub fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.eat_sym('+') {
                BinOp::Add
            } else if self.eat_sym('-') {
                BinOp::Sub
            } else {
                return Ok(lhs);
            };
            let rhs = self.term()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let op = if self.eat_sym('*') {
                BinOp::Mul
            } else if self.eat_sym('/') {
                BinOp::Div
            } else {
                return Ok(lhs);
            };
            let rhs = self.unary()?;
            lhs = Node::Bin(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn unary(&mut self) -> Result<Node> {
        if self.eat_sym('-') {
            Ok(Node::Neg(Box::new(self.unary()?)))
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.primary()?;
        if self.eat_sym('^') {
            let (line, column) = (self.peek().line, self.peek().col);
            let exponent = self.unary()?;
            if exponent.mentions_var() {
                return Err(Error::VariableExponent {
                    var: self.var.to_string(),
                    line,
                    column,
                });
            }
            Ok(Node::Bin(BinOp::Pow, Box::new(base), Box::new(exponent)))
        } else {
            Ok(base)
        }
    }

    fn primary(&mut self) -> Result<Node> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(v) => {
                self.bump();
                Ok(Node::Num(v))
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect_sym(')')?;
                Ok(inner)
            }
            Tok::Ident(name) => {
                self.bump();
                if name == self.var {
                    return Ok(Node::Var);
                }
                if let Some(c) = Constant::from_name(&name) {
                    return Ok(Node::Const(c));
                }
                if let Some(f) = Func::from_name(&name) {
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                Err(Error::UnknownIdentifier {
                    name,
                    line: t.line,
                    column: t.col,
                })
            }
            other => self.syntax(format!("expected expression, found {}", describe(&other))),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(v) => format!("number {v}"),
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".to_string(),
    }
}
