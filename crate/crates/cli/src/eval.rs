//! Evaluation of syntax trees into tower elements and operators.

use std::collections::HashMap;

use lindiff::field::gauss::{from_rat, imag_unit, lcm_u32};
use lindiff::linop::RatOp;
use lindiff::{LinOp, Poly, Rat, RatFun, Tower, TowerElem};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::CliError;
use crate::syntax::{BinOp, Expr, ExprKind, Span};

#[derive(Clone, Debug)]
pub enum Value {
    Scalar(TowerElem),
    Op(LinOp),
}

impl Value {
    fn into_op(self) -> LinOp {
        match self {
            Value::Scalar(s) => LinOp::scalar(s),
            Value::Op(l) => l,
        }
    }
}

fn type_err(span: Span, msg: impl Into<String>) -> CliError {
    CliError::Type { span, message: msg.into() }
}

fn math_err(span: Span, e: lindiff::Error) -> CliError {
    CliError::Eval { span, source: e }
}

/// Constant rational value of an exponent-like expression.
pub fn const_rat(e: &Expr) -> Option<Rat> {
    match &e.kind {
        ExprKind::Int(n) => Some(Rat::from_integer(n.clone())),
        ExprKind::Neg(a) => const_rat(a).map(|r| -r),
        ExprKind::Bin(op, a, b) => {
            let (x, y) = (const_rat(a)?, const_rat(b)?);
            match op {
                BinOp::Add => Some(x + y),
                BinOp::Sub => Some(x - y),
                BinOp::Mul => Some(x * y),
                BinOp::Div => (!y.is_zero()).then(|| x / y),
                BinOp::Pow => {
                    let n = y.is_integer().then(|| y.to_integer().to_i32()).flatten()?;
                    if n < 0 && x.is_zero() {
                        return None;
                    }
                    Some(num_traits::pow::Pow::pow(x, n))
                }
                BinOp::Compose => None,
            }
        }
        _ => None,
    }
}

/// Ramification needed for the fractional powers of `z` in `e`.
pub fn required_ram(e: &Expr) -> u32 {
    match &e.kind {
        ExprKind::Neg(a) => required_ram(a),
        ExprKind::Bin(BinOp::Pow, a, b) if matches!(a.kind, ExprKind::Z) => {
            const_rat(b).and_then(|r| r.denom().to_u32()).unwrap_or(1)
        }
        ExprKind::Bin(_, a, b) => lcm_u32(required_ram(a), required_ram(b)),
        _ => 1,
    }
}

/// Evaluates expressions in a fixed tower; `lets` are named expressions
/// expanded on use.
pub struct Env<'a> {
    pub tower: &'a Tower,
    pub lets: &'a HashMap<String, Expr>,
}

impl Env<'_> {
    pub fn eval(&self, e: &Expr) -> Result<Value, CliError> {
        let sc = Value::Scalar;
        Ok(match &e.kind {
            ExprKind::Int(n) => sc(TowerElem::constant(from_rat(Rat::from_integer(n.clone())))),
            ExprKind::Imag => sc(TowerElem::constant(imag_unit())),
            ExprKind::Z => sc(self.tower.z()),
            ExprKind::D => Value::Op(LinOp::d_pow(1)),
            ExprKind::Name(n) => {
                if self.tower.has_gen(n) {
                    sc(self.tower.gen(n).map_err(|x| math_err(e.span, x))?)
                } else if let Some(body) = self.lets.get(n) {
                    self.eval(body)?
                } else {
                    return Err(type_err(e.span, format!("unknown name `{n}`")));
                }
            }
            ExprKind::Neg(a) => match self.eval(a)? {
                Value::Scalar(s) => sc(-s),
                Value::Op(l) => Value::Op(l.neg()),
            },
            ExprKind::Bin(BinOp::Pow, a, b) => self.power(e, a, b)?,
            ExprKind::Bin(op, a, b) => {
                let (x, y) = (self.eval(a)?, self.eval(b)?);
                let tw = self.tower;
                match (op, x, y) {
                    (BinOp::Add, Value::Scalar(x), Value::Scalar(y)) => sc(x + y),
                    (BinOp::Sub, Value::Scalar(x), Value::Scalar(y)) => sc(x - y),
                    (BinOp::Add, x, y) => Value::Op(x.into_op().add(&y.into_op())),
                    (BinOp::Sub, x, y) => Value::Op(x.into_op().sub(&y.into_op())),
                    (BinOp::Mul, Value::Scalar(x), Value::Scalar(y)) => sc(&x * &y),
                    (BinOp::Mul, Value::Scalar(x), Value::Op(l)) => Value::Op(l.mul_left(&x)),
                    (BinOp::Mul | BinOp::Compose, x, y) => Value::Op(x.into_op().compose(tw, &y.into_op())),
                    (BinOp::Div, _, Value::Op(_)) => {
                        return Err(type_err(b.span, "cannot divide by an operator"));
                    }
                    (BinOp::Div, x, Value::Scalar(y)) => {
                        let inv = y.inv().map_err(|x| math_err(b.span, x))?;
                        match x {
                            Value::Scalar(x) => sc(&x * &inv),
                            Value::Op(l) => Value::Op(l.mul_left(&inv)),
                        }
                    }
                    (BinOp::Pow, ..) => unreachable!(),
                }
            }
        })
    }

    fn power(&self, e: &Expr, a: &Expr, b: &Expr) -> Result<Value, CliError> {
        let ex = const_rat(b).ok_or_else(|| type_err(b.span, "exponent must be a rational constant"))?;
        if matches!(a.kind, ExprKind::Z) {
            return Ok(Value::Scalar(self.tower.z_pow(&ex).map_err(|x| math_err(e.span, x))?));
        }
        let n = ex
            .is_integer()
            .then(|| ex.to_integer().to_i64())
            .flatten()
            .ok_or_else(|| type_err(b.span, "only z may be raised to a fractional power"))?;
        match self.eval(a)? {
            Value::Scalar(s) => Ok(Value::Scalar(s.pow(n).map_err(|x| math_err(e.span, x))?)),
            Value::Op(l) => {
                if n < 0 {
                    return Err(type_err(b.span, "operators only take nonnegative integer powers"));
                }
                let mut acc = LinOp::identity();
                for _ in 0..n {
                    acc = acc.compose(self.tower, &l);
                }
                Ok(Value::Op(acc))
            }
        }
    }

    pub fn operator(&self, e: &Expr) -> Result<LinOp, CliError> {
        match self.eval(e)? {
            Value::Op(l) => Ok(l),
            Value::Scalar(_) => Err(type_err(e.span, "expected an operator (an expression in D), found a scalar")),
        }
    }

    pub fn scalar(&self, e: &Expr) -> Result<TowerElem, CliError> {
        match self.eval(e)? {
            Value::Scalar(s) => Ok(s),
            Value::Op(_) => Err(type_err(e.span, "expected a scalar, found an operator")),
        }
    }

    pub fn rat_op(&self, e: &Expr) -> Result<RatOp, CliError> {
        let l = self.operator(e)?;
        RatOp::from_linop(self.tower, &l)
            .map_err(|_| type_err(e.span, "operator coefficients must be rational functions of z"))
    }

    pub fn ratfun(&self, e: &Expr) -> Result<RatFun, CliError> {
        let s = self.scalar(e)?;
        self.tower
            .to_ratfun(&s)
            .ok_or_else(|| type_err(e.span, "expected a rational function of z"))
    }

    pub fn poly(&self, e: &Expr) -> Result<Poly, CliError> {
        let r = self.ratfun(e)?;
        if !r.is_polynomial() {
            return Err(type_err(e.span, "expected a polynomial"));
        }
        let lc = r.den().lead();
        Ok(r.num().scale(&lindiff::field::gauss::gdiv(&lindiff::GaussRat::one(), &lc)))
    }

    /// A rational constant, e.g. `1/3`.
    pub fn rational(&self, e: &Expr) -> Result<Rat, CliError> {
        let c = self
            .scalar(e)?
            .as_constant()
            .filter(|c| c.im.is_zero())
            .ok_or_else(|| type_err(e.span, "expected a rational constant"))?;
        Ok(c.re)
    }

    pub fn gauss(&self, e: &Expr) -> Result<lindiff::GaussRat, CliError> {
        self.scalar(e)?.as_constant().ok_or_else(|| type_err(e.span, "expected a constant"))
    }

    /// A nonnegative integer constant.
    pub fn count(&self, e: &Expr) -> Result<u64, CliError> {
        let r = self.rational(e)?;
        r.is_integer()
            .then(|| r.to_integer())
            .filter(|n| !n.is_negative())
            .and_then(|n| n.to_u64())
            .ok_or_else(|| type_err(e.span, "expected a nonnegative integer"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn env_eval(s: &str) -> Result<Value, CliError> {
        let e = parse(s).unwrap();
        let ram = required_ram(&e);
        let tw = Tower::rational(ram);
        let lets = HashMap::new();
        Env { tower: &tw, lets: &lets }.eval(&e)
    }

    #[test]
    fn operator_arithmetic() {
        let tw = Tower::rational(1);
        let Value::Op(l) = env_eval("D*z").unwrap() else { panic!() };
        assert_eq!(l.render(&tw), "z*D + 1");
        let Value::Op(l) = env_eval("(D + 1)^2").unwrap() else { panic!() };
        assert_eq!(l.render(&tw), "D^2 + 2*D + 1");
        let Value::Op(l) = env_eval("D^3 + (z+1)/(z-1)*D + 4").unwrap() else { panic!() };
        assert_eq!(l.order(), 3);
    }

    #[test]
    fn types_and_ramification() {
        assert_eq!(required_ram(&parse("z^(3/2) + z^(1/3)").unwrap()), 6);
        assert!(matches!(env_eval("z^(1/2)*z^(1/2) - z"), Ok(Value::Scalar(s)) if s.is_zero()));
        assert!(matches!(env_eval("z / D"), Err(CliError::Type { .. })));
        assert!(matches!(env_eval("D^(1/2)"), Err(CliError::Type { .. })));
        assert!(matches!(env_eval("1/(z - z)"), Err(CliError::Eval { .. })));
    }
}
