//! Symbolic expressions over the named generating vectors.
//!
//! Witnesses produced by the closure engine and the linear solver are
//! exported in this form so an independent checker can re-evaluate them with
//! nothing but vector arithmetic ([`Expr::eval_window`]) and compare against
//! the claimed target.

use crate::ecvec::{ECVector, FiniteVec, Window};
use crate::ring::{A2, B2};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Names for the distinguished vectors an expression may reference.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum GenId {
    /// The constant-`b` vector.
    BBar,
    /// The eventual-`a` generator anchored at index 0.
    ABar,
    /// The difference generator `e(i)`.
    E(i64),
    /// Spike `a^2` at one block.
    SqA(i64),
    /// Spike `b^2` at one block.
    SqB(i64),
}

impl GenId {
    /// The actual infinite vector this name stands for.
    pub fn materialize(self) -> ECVector {
        match self {
            GenId::BBar => ECVector::b_bar(),
            GenId::ABar => ECVector::a_bar(0),
            GenId::E(i) => ECVector::e(i),
            GenId::SqA(j) => ECVector::spike(j, A2),
            GenId::SqB(j) => ECVector::spike(j, B2),
        }
    }
}

impl fmt::Display for GenId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenId::BBar => write!(f, "b~"),
            GenId::ABar => write!(f, "a~"),
            GenId::E(i) => write!(f, "e({i})"),
            GenId::SqA(j) => write!(f, "sqA({j})"),
            GenId::SqB(j) => write!(f, "sqB({j})"),
        }
    }
}

/// A term built from generators with `+`, `-`, `*` and integer scaling.
///
/// Deliberately unsimplified: whatever the producing algorithm wrote down is
/// what gets checked.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Expr {
    Zero,
    Gen(GenId),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Scale(i64, Box<Expr>),
}

// builder methods, not operator impls: `Expr` is an AST being written down,
// and consuming-`self` chaining keeps construction sites linear
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn gen(g: GenId) -> Expr {
        Expr::Gen(g)
    }

    pub fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }

    pub fn add(self, rhs: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn scale(self, n: i64) -> Expr {
        Expr::Scale(n, Box::new(self))
    }

    /// Left-folded sum; `Zero` when no terms are given.
    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let mut it = terms.into_iter();
        match it.next() {
            None => Expr::Zero,
            Some(first) => it.fold(first, Expr::add),
        }
    }

    /// `sum(c_k * t_k)`, dropping zero coefficients and writing coefficient 1
    /// terms bare.
    pub fn linear_combination(terms: impl IntoIterator<Item = (i64, Expr)>) -> Expr {
        Expr::sum(terms.into_iter().filter_map(|(c, t)| match c {
            0 => None,
            1 => Some(t),
            _ => Some(t.scale(c)),
        }))
    }

    /// Evaluate as a whole eventually-constant vector.
    pub fn eval_ec(&self) -> ECVector {
        match self {
            Expr::Zero => ECVector::zero(),
            Expr::Gen(g) => g.materialize(),
            Expr::Neg(x) => -&x.eval_ec(),
            Expr::Add(x, y) => &x.eval_ec() + &y.eval_ec(),
            Expr::Mul(x, y) => &x.eval_ec() * &y.eval_ec(),
            Expr::Scale(n, x) => x.eval_ec().scale(*n),
        }
    }

    /// Evaluate inside one window only, materializing each generator as its
    /// restriction. Agrees with `eval_ec` followed by restriction because all
    /// operations are pointwise; the two routes share no arithmetic code
    /// beyond the base ring, which is what makes re-checking meaningful.
    pub fn eval_window(&self, w: Window) -> FiniteVec {
        match self {
            Expr::Zero => FiniteVec::zero(w),
            Expr::Gen(g) => g.materialize().restrict(w),
            Expr::Neg(x) => -&x.eval_window(w),
            Expr::Add(x, y) => &x.eval_window(w) + &y.eval_window(w),
            Expr::Mul(x, y) => &x.eval_window(w) * &y.eval_window(w),
            Expr::Scale(n, x) => x.eval_window(w).scale(*n),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Zero | Expr::Gen(_) => 1,
            Expr::Neg(x) | Expr::Scale(_, x) => 1 + x.node_count(),
            Expr::Add(x, y) | Expr::Mul(x, y) => 1 + x.node_count() + y.node_count(),
        }
    }

    fn fmt_operand(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero | Expr::Gen(_) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Zero => write!(f, "0"),
            Expr::Gen(g) => write!(f, "{g}"),
            Expr::Neg(x) => {
                write!(f, "-")?;
                x.fmt_operand(f)
            }
            Expr::Add(x, y) => write!(f, "{x} + {y}"),
            Expr::Mul(x, y) => {
                x.fmt_operand(f)?;
                write!(f, "*")?;
                y.fmt_operand(f)
            }
            Expr::Scale(n, x) => {
                write!(f, "{n}*")?;
                x.fmt_operand(f)
            }
        }
    }
}
