//! Closed-form expressions in one free variable, evaluated as jets.

mod curve;
mod jet;
pub(crate) mod parse;

use std::fmt;

pub use curve::{eval_jets, parse_curve, AnalyticCurve, CurveSource, CurveSpec, SampledCurve};
pub use jet::Jet;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
}

impl Func {
    fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sqrt" => Func::Sqrt,
            "sinh" => Func::Sinh,
            "cosh" => Func::Cosh,
            _ => return None,
        })
    }

    fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    fn apply(self, x: &Jet) -> Result<Jet> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => x.try_tan(),
            Func::Exp => Ok(x.exp()),
            Func::Log => x.try_ln(),
            Func::Sqrt => x.try_sqrt(),
            Func::Sinh => Ok(x.sinh()),
            Func::Cosh => Ok(x.cosh()),
        }
    }

    fn apply_f64(self, x: f64) -> Result<f64> {
        let domain = |op| Err(Error::Domain { op, value: x });
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => {
                if x.cos() == 0.0 {
                    return domain("tan");
                }
                x.tan()
            }
            Func::Exp => x.exp(),
            Func::Log => {
                if !(x > 0.0) {
                    return domain("log");
                }
                x.ln()
            }
            Func::Sqrt => {
                if !(x > 0.0) {
                    return domain("sqrt");
                }
                x.sqrt()
            }
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    fn from_name(name: &str) -> Option<Constant> {
        match name {
            "pi" => Some(Constant::Pi),
            "e" => Some(Constant::E),
            _ => None,
        }
    }

    fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(f64),
    Const(Constant),
    Var,
    Neg(Box<Node>),
    Bin(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    pub fn mentions_var(&self) -> bool {
        match self {
            Node::Num(_) | Node::Const(_) => false,
            Node::Var => true,
            Node::Neg(a) | Node::Call(_, a) => a.mentions_var(),
            Node::Bin(_, a, b) => a.mentions_var() || b.mentions_var(),
        }
    }

    fn eval_f64(&self, x: f64) -> Result<f64> {
        Ok(match self {
            Node::Num(v) => *v,
            Node::Const(c) => c.value(),
            Node::Var => x,
            Node::Neg(a) => -a.eval_f64(x)?,
            Node::Call(f, a) => f.apply_f64(a.eval_f64(x)?)?,
            Node::Bin(op, a, b) => {
                let (a, b) = (a.eval_f64(x)?, b.eval_f64(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err(Error::Domain {
                                op: "division by",
                                value: b,
                            });
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        if b.fract() != 0.0 && !(a > 0.0) {
                            return Err(Error::Domain {
                                op: "non-integer power",
                                value: a,
                            });
                        }
                        if a == 0.0 && b < 0.0 {
                            return Err(Error::Domain {
                                op: "division by",
                                value: a,
                            });
                        }
                        a.powf(b)
                    }
                }
            }
        })
    }

    fn eval_jet(&self, x: &Jet) -> Result<Jet> {
        let order = x.order();
        Ok(match self {
            Node::Num(v) => Jet::constant(*v, order),
            Node::Const(c) => Jet::constant(c.value(), order),
            Node::Var => x.clone(),
            Node::Neg(a) => -a.eval_jet(x)?,
            Node::Call(f, a) => f.apply(&a.eval_jet(x)?)?,
            Node::Bin(BinOp::Pow, a, b) => {
                let p = b.eval_f64(0.0)?;
                a.eval_jet(x)?.try_powf(p)?
            }
            Node::Bin(op, a, b) => {
                let (a, b) = (a.eval_jet(x)?, b.eval_jet(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.try_div(&b)?,
                    BinOp::Pow => unreachable!(),
                }
            }
        })
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        match self {
            Node::Num(v) => write!(f, "{v:?}"),
            Node::Const(Constant::Pi) => f.write_str("pi"),
            Node::Const(Constant::E) => f.write_str("e"),
            Node::Var => f.write_str(var),
            Node::Neg(a) => {
                f.write_str("(-")?;
                a.write(f, var)?;
                f.write_str(")")
            }
            Node::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write(f, var)?;
                f.write_str(")")
            }
            Node::Bin(op, a, b) => {
                let sym = match op {
                    BinOp::Add => " + ",
                    BinOp::Sub => " - ",
                    BinOp::Mul => " * ",
                    BinOp::Div => " / ",
                    BinOp::Pow => "^",
                };
                f.write_str("(")?;
                a.write(f, var)?;
                f.write_str(sym)?;
                b.write(f, var)?;
                f.write_str(")")
            }
        }
    }
}

/// A parsed expression tree together with the name of its free variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    root: Node,
    var: String,
}

impl Expression {
    /// Parses `src` with `var` as the only admissible free identifier.
    pub fn parse(src: &str, var: &str) -> Result<Expression> {
        let mut p = parse::Parser::new(src, var)?;
        let root = p.expr()?;
        p.expect_eof()?;
        Ok(Expression {
            root,
            var: var.to_string(),
        })
    }

    pub(crate) fn from_node(root: Node, var: &str) -> Expression {
        Expression {
            root,
            var: var.to_string(),
        }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn is_constant(&self) -> bool {
        !self.root.mentions_var()
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.root.eval_f64(x)
    }

    /// Value and derivatives up to `order` at `x`.
    pub fn eval_jet(&self, x: f64, order: usize) -> Result<Jet> {
        self.root.eval_jet(&Jet::variable(x, order))
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.write(f, &self.var)
    }
}
