//! Expression evaluation.
//!
//! The payload is computed by the operator table; the result level is the
//! join of the levels of all literals and the result topic their common
//! topic.

use thiserror::Error;

use crate::security::Lattice;
use crate::types::Sort;

use super::{BinOp, Expression, Payload, Value};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("operands on distinct topics `{0}` and `{1}`")]
    MixedTopics(String, String),
    #[error("operator `{op}` not defined at sorts {s1:?}, {s2:?}")]
    SortMismatch {
        op: &'static str,
        s1: Sort,
        s2: Sort,
    },
    #[error("free variable `{0}` in evaluated expression")]
    FreeVariable(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("unknown level in expression: {0}")]
    Level(String),
}

/// Evaluates a closed expression to a value `v^{l,t}`.
pub fn eval_expr(e: &Expression, lattice: &Lattice) -> Result<Value, EvalError> {
    match e {
        Expression::Var(x) => Err(EvalError::FreeVariable(x.clone())),
        Expression::Lit(v) => Ok(v.clone()),
        Expression::Un(op, a) => {
            let v = eval_expr(a, lattice)?;
            let payload = match (op, &v.payload) {
                (super::UnOp::Not, Payload::Bool(b)) => Payload::Bool(!b),
                _ => {
                    return Err(EvalError::SortMismatch {
                        op: "not",
                        s1: v.payload.sort(),
                        s2: v.payload.sort(),
                    })
                }
            };
            Ok(Value::new(payload, v.level, v.topic))
        }
        Expression::Bin(op, a, b) => {
            let va = eval_expr(a, lattice)?;
            let vb = eval_expr(b, lattice)?;
            if va.topic != vb.topic {
                return Err(EvalError::MixedTopics(va.topic.0, vb.topic.0));
            }
            let payload = apply(*op, &va.payload, &vb.payload)?;
            let level = lattice
                .join(&va.level, &vb.level)
                .map_err(|e| EvalError::Level(e.to_string()))?;
            Ok(Value::new(payload, level, va.topic))
        }
    }
}

fn apply(op: BinOp, a: &Payload, b: &Payload) -> Result<Payload, EvalError> {
    use Payload::*;
    let mismatch = || EvalError::SortMismatch {
        op: op.symbol(),
        s1: a.sort(),
        s2: b.sort(),
    };
    if op.signature(a.sort(), b.sort()).is_none() {
        return Err(mismatch());
    }
    Ok(match (op, a, b) {
        (BinOp::Add, Nat(x), Nat(y)) => Nat(x.checked_add(*y).ok_or(EvalError::Overflow)?),
        (BinOp::Mul, Nat(x), Nat(y)) => Nat(x.checked_mul(*y).ok_or(EvalError::Overflow)?),
        (BinOp::Add, Int(x), Int(y)) => Int(x.checked_add(*y).ok_or(EvalError::Overflow)?),
        (BinOp::Sub, Int(x), Int(y)) => Int(x.checked_sub(*y).ok_or(EvalError::Overflow)?),
        (BinOp::Mul, Int(x), Int(y)) => Int(x.checked_mul(*y).ok_or(EvalError::Overflow)?),
        (BinOp::Lt, Nat(x), Nat(y)) => Bool(x < y),
        (BinOp::Lt, Int(x), Int(y)) => Bool(x < y),
        (BinOp::Eq, Nat(x), Nat(y)) => Bool(x == y),
        (BinOp::Eq, Int(x), Int(y)) => Bool(x == y),
        (BinOp::And, Bool(x), Bool(y)) => Bool(*x && *y),
        (BinOp::Or, Bool(x), Bool(y)) => Bool(*x || *y),
        (BinOp::Concat, Str(x), Str(y)) => Str(format!("{x}{y}")),
        _ => return Err(mismatch()),
    })
}
