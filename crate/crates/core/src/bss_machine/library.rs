//! Small ready-made programs. Each halts within [`LibraryProgram::budget`]
//! steps on every input of its stated arity.

use num_traits::{One, Zero};

use super::{BranchRelation, BssNode, BssProgram, Expr, NodeKind};
use crate::exact_arith::rational::int;
use crate::exact_arith::Rational;

pub struct LibraryProgram {
    pub name: &'static str,
    pub description: &'static str,
    pub arity: usize,
    pub budget: u64,
    pub program: BssProgram,
}

fn node(id: usize, kind: NodeKind, successors: &[usize]) -> BssNode {
    BssNode { id, kind, successors: successors.to_vec() }
}

fn build(nodes: Vec<BssNode>) -> BssProgram {
    BssProgram::new(nodes).expect("library programs are valid")
}

/// Outputs its `n` inputs unchanged. 2 steps.
pub fn identity(n: usize) -> BssProgram {
    build(vec![node(0, NodeKind::Input, &[1]), node(1, NodeKind::Output { start: 0, len: n }, &[])])
}

/// Characteristic function of `{x : x ≥ 0}`. 4 steps.
pub fn nonnegative_indicator() -> BssProgram {
    build(vec![
        node(0, NodeKind::Input, &[1]),
        node(1, NodeKind::Branch { cell: 0, relation: BranchRelation::Lt }, &[2, 3]),
        node(2, NodeKind::Computation { target: 0, expr: Expr::constant(Rational::zero()) }, &[4]),
        node(3, NodeKind::Computation { target: 0, expr: Expr::constant(Rational::one()) }, &[4]),
        node(4, NodeKind::Output { start: 0, len: 1 }, &[]),
    ])
}

/// 1 if `x·x − 2 > 0` else 0. 5 steps, one multiplication, one
/// subtraction, one comparison.
pub fn square_minus_two_positive() -> BssProgram {
    build(vec![
        node(0, NodeKind::Input, &[1]),
        node(
            1,
            NodeKind::Computation {
                target: 0,
                expr: Expr::sub(Expr::mul(Expr::cell(0), Expr::cell(0)), Expr::constant(int(2))),
            },
            &[2],
        ),
        node(2, NodeKind::Branch { cell: 0, relation: BranchRelation::Gt }, &[3, 4]),
        node(3, NodeKind::Computation { target: 0, expr: Expr::constant(Rational::one()) }, &[5]),
        node(4, NodeKind::Computation { target: 0, expr: Expr::constant(Rational::zero()) }, &[5]),
        node(5, NodeKind::Output { start: 0, len: 1 }, &[]),
    ])
}

pub fn all() -> Vec<LibraryProgram> {
    vec![
        LibraryProgram {
            name: "identity",
            description: "outputs its single input",
            arity: 1,
            budget: 2,
            program: identity(1),
        },
        LibraryProgram {
            name: "nonnegative",
            description: "1 if x >= 0 else 0",
            arity: 1,
            budget: 4,
            program: nonnegative_indicator(),
        },
        LibraryProgram {
            name: "square-minus-two",
            description: "1 if x*x - 2 > 0 else 0",
            arity: 1,
            budget: 5,
            program: square_minus_two_positive(),
        },
    ]
}

pub fn by_name(name: &str) -> Option<LibraryProgram> {
    all().into_iter().find(|p| p.name == name)
}
