//! Expression trees for generating curves `g(z)`.
//!
//! Trees are built by [`parse_expression`](super::parse_expression) and are
//! closed under [`ExprAst::derivative`]. Differentiating a power whose
//! exponent depends on `z` introduces an [`ExprAst::Ln`] node; that node has
//! no surface syntax, so only parsed trees round-trip through `Display`.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAst {
    Constant(f64),
    /// The height coordinate `z`.
    Variable,
    Add(Box<ExprAst>, Box<ExprAst>),
    Sub(Box<ExprAst>, Box<ExprAst>),
    Mul(Box<ExprAst>, Box<ExprAst>),
    Div(Box<ExprAst>, Box<ExprAst>),
    Pow(Box<ExprAst>, Box<ExprAst>),
    Sqrt(Box<ExprAst>),
    Neg(Box<ExprAst>),
    Ln(Box<ExprAst>),
}

use ExprAst::*;

impl ExprAst {
    pub fn eval(&self, z: f64) -> f64 {
        match self {
            Constant(c) => *c,
            Variable => z,
            Add(a, b) => a.eval(z) + b.eval(z),
            Sub(a, b) => a.eval(z) - b.eval(z),
            Mul(a, b) => a.eval(z) * b.eval(z),
            Div(a, b) => a.eval(z) / b.eval(z),
            Pow(a, b) => pow(a.eval(z), b.eval(z)),
            Sqrt(a) => a.eval(z).sqrt(),
            Neg(a) => -a.eval(z),
            Ln(a) => a.eval(z).ln(),
        }
    }

    pub fn depends_on_z(&self) -> bool {
        match self {
            Constant(_) => false,
            Variable => true,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                a.depends_on_z() || b.depends_on_z()
            }
            Sqrt(a) | Neg(a) | Ln(a) => a.depends_on_z(),
        }
    }

    pub fn as_constant(&self) -> Option<f64> {
        match self {
            Constant(c) => Some(*c),
            _ => None,
        }
    }

    /// Symbolic derivative with respect to `z`.
    pub fn derivative(&self) -> ExprAst {
        match self {
            Constant(_) => Constant(0.0),
            Variable => Constant(1.0),
            Add(a, b) => add(a.derivative(), b.derivative()),
            Sub(a, b) => sub(a.derivative(), b.derivative()),
            Mul(a, b) => add(
                mul(a.derivative(), (**b).clone()),
                mul((**a).clone(), b.derivative()),
            ),
            Div(a, b) => div(
                sub(
                    mul(a.derivative(), (**b).clone()),
                    mul((**a).clone(), b.derivative()),
                ),
                pow_node((**b).clone(), Constant(2.0)),
            ),
            Pow(base, exponent) if !exponent.depends_on_z() => {
                // d(u^c) = c * u^(c-1) * u'
                let c = exponent.eval(0.0);
                mul(
                    mul(
                        Constant(c),
                        pow_node((**base).clone(), Constant(c - 1.0)),
                    ),
                    base.derivative(),
                )
            }
            Pow(base, exponent) => {
                // d(u^v) = u^v * (v' ln u + v u' / u)
                let u = (**base).clone();
                let v = (**exponent).clone();
                mul(
                    self.clone(),
                    add(
                        mul(v.derivative(), Ln(Box::new(u.clone()))),
                        div(mul(v, u.derivative()), u),
                    ),
                )
            }
            Sqrt(a) => div(a.derivative(), mul(Constant(2.0), Sqrt(a.clone()))),
            Neg(a) => neg(a.derivative()),
            Ln(a) => div(a.derivative(), (**a).clone()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Constant(_) | Variable => 1,
            Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) | Pow(a, b) => {
                1 + a.node_count() + b.node_count()
            }
            Sqrt(a) | Neg(a) | Ln(a) => 1 + a.node_count(),
        }
    }
}

fn pow(base: f64, exponent: f64) -> f64 {
    if exponent == 2.0 {
        base * base
    } else if exponent == 1.0 {
        base
    } else if exponent == 0.0 {
        1.0
    } else {
        base.powf(exponent)
    }
}

fn fold(value: f64) -> Option<ExprAst> {
    value.is_finite().then_some(Constant(value))
}

pub(crate) fn add(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), Some(y)) => fold(x + y).unwrap_or_else(|| Add(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => b,
        (_, Some(y)) if y == 0.0 => a,
        _ => Add(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn sub(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), Some(y)) => fold(x - y).unwrap_or_else(|| Sub(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => neg(b),
        (_, Some(y)) if y == 0.0 => a,
        _ => Sub(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn mul(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), Some(y)) => fold(x * y).unwrap_or_else(|| Mul(Box::new(a), Box::new(b))),
        (Some(x), _) | (_, Some(x)) if x == 0.0 => Constant(0.0),
        (Some(x), _) if x == 1.0 => b,
        (_, Some(y)) if y == 1.0 => a,
        _ => Mul(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn div(a: ExprAst, b: ExprAst) -> ExprAst {
    match (a.as_constant(), b.as_constant()) {
        (Some(x), Some(y)) => fold(x / y).unwrap_or_else(|| Div(Box::new(a), Box::new(b))),
        (Some(x), _) if x == 0.0 => Constant(0.0),
        (_, Some(y)) if y == 1.0 => a,
        _ => Div(Box::new(a), Box::new(b)),
    }
}

pub(crate) fn pow_node(base: ExprAst, exponent: ExprAst) -> ExprAst {
    match (base.as_constant(), exponent.as_constant()) {
        (Some(x), Some(y)) => {
            fold(pow(x, y)).unwrap_or_else(|| Pow(Box::new(base), Box::new(exponent)))
        }
        (_, Some(y)) if y == 1.0 => base,
        (_, Some(y)) if y == 0.0 => Constant(1.0),
        _ => Pow(Box::new(base), Box::new(exponent)),
    }
}

pub(crate) fn neg(a: ExprAst) -> ExprAst {
    match a {
        Constant(c) => Constant(-c),
        Neg(inner) => *inner,
        other => Neg(Box::new(other)),
    }
}

/// Fully parenthesised rendering; parsed trees re-parse to the same values.
impl fmt::Display for ExprAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constant(c) if c.is_sign_negative() => write!(f, "(-{})", -c),
            Constant(c) => write!(f, "{c}"),
            Variable => write!(f, "z"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Sub(a, b) => write!(f, "({a} - {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Div(a, b) => write!(f, "({a} / {b})"),
            Pow(a, b) => write!(f, "({a} ^ {b})"),
            Sqrt(a) => write!(f, "sqrt({a})"),
            Neg(a) => write!(f, "(-{a})"),
            Ln(a) => write!(f, "ln({a})"),
        }
    }
}
