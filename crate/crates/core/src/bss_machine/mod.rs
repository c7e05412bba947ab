//! BSS machines over an exact ordered field.
//!
//! A program is a finite graph of input, computation, branch, shift and
//! output nodes acting on a bi-infinite tape of field elements. Cell
//! references are offsets from the head; unwritten cells read as zero.
//! The input node writes the input vector to cells `0..n` with the head at
//! `0`. Branch nodes compare one cell against zero and have two successors,
//! `[holds, fails]`.
//!
//! Programs serialise as a JSON list of `{id, kind, params, successors}`
//! records; node ids must equal their position in the list.

mod compile;
mod interpreter;
pub mod library;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact_arith::rational::serde_str;
use crate::exact_arith::{ArithError, Rational};

pub use compile::{compile_membership, compile_relu_network, evaluate_relu_network, CompileError};
pub use interpreter::{decide, run, run_traced, BssState, Counters, DecideError, RunOutcome, TraceEvent};

pub type NodeId = usize;

/// Arithmetic over tape cells; only field operations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    Const(#[serde(with = "serde_str")] Rational),
    Cell(i64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
}

impl Expr {
    pub fn constant(value: Rational) -> Self {
        Expr::Const(value)
    }

    pub fn cell(offset: i64) -> Self {
        Expr::Cell(offset)
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::Sub(Box::new(a), Box::new(b))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::Mul(Box::new(a), Box::new(b))
    }

    pub fn div(a: Expr, b: Expr) -> Self {
        Expr::Div(Box::new(a), Box::new(b))
    }

    pub fn neg(a: Expr) -> Self {
        Expr::Neg(Box::new(a))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BranchRelation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "=")]
    Eq,
}

impl BranchRelation {
    pub fn holds(self, sign: i8) -> bool {
        match self {
            BranchRelation::Lt => sign < 0,
            BranchRelation::Gt => sign > 0,
            BranchRelation::Eq => sign == 0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case")]
pub enum NodeKind {
    Input,
    /// `cell[target] := expr`.
    Computation { target: i64, expr: Expr },
    /// `cell[cell] relation 0`.
    Branch { cell: i64, relation: BranchRelation },
    Shift { direction: Direction },
    /// Halts with cells `start..start + len`.
    Output { start: i64, len: usize },
}

impl NodeKind {
    fn successor_count(&self) -> usize {
        match self {
            NodeKind::Output { .. } => 0,
            NodeKind::Branch { .. } => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BssNode {
    pub id: NodeId,
    #[serde(flatten)]
    pub kind: NodeKind,
    #[serde(default)]
    pub successors: Vec<NodeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BssError {
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("division by zero at node {node}")]
    DivisionByZero { node: NodeId },
    #[error("arithmetic error at node {node}: {source}")]
    Arith { node: NodeId, source: ArithError },
}

/// A validated program; the entry is the unique input node.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BssProgram {
    nodes: Vec<BssNode>,
    entry: NodeId,
}

impl BssProgram {
    pub fn new(nodes: Vec<BssNode>) -> Result<Self, BssError> {
        let invalid = |msg: String| Err(BssError::InvalidProgram(msg));
        let mut inputs = Vec::new();
        let mut outputs = 0;
        for (pos, node) in nodes.iter().enumerate() {
            if node.id != pos {
                return invalid(format!("node at position {pos} has id {}", node.id));
            }
            let want = node.kind.successor_count();
            if node.successors.len() != want {
                return invalid(format!("node {pos} needs {want} successors, has {}", node.successors.len()));
            }
            if let Some(bad) = node.successors.iter().find(|&&s| s >= nodes.len()) {
                return invalid(format!("node {pos} points at missing node {bad}"));
            }
            match node.kind {
                NodeKind::Input => inputs.push(pos),
                NodeKind::Output { .. } => outputs += 1,
                _ => {}
            }
        }
        if inputs.len() != 1 {
            return invalid(format!("expected exactly one input node, found {}", inputs.len()));
        }
        if outputs == 0 {
            return invalid("no output node".into());
        }
        Ok(Self { nodes, entry: inputs[0] })
    }

    pub fn nodes(&self) -> &[BssNode] {
        &self.nodes
    }

    pub fn entry(&self) -> NodeId {
        self.entry
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.nodes).expect("nodes serialise")
    }

    pub fn from_json(text: &str) -> Result<Self, BssError> {
        let nodes: Vec<BssNode> =
            serde_json::from_str(text).map_err(|e| BssError::InvalidProgram(format!("malformed program file: {e}")))?;
        Self::new(nodes)
    }
}

/// Appends nodes whose successors are patched once targets exist.
#[derive(Default)]
pub(crate) struct ProgramBuilder {
    nodes: Vec<BssNode>,
}

impl ProgramBuilder {
    pub fn push(&mut self, kind: NodeKind) -> NodeId {
        let id = self.nodes.len();
        self.nodes.push(BssNode { id, kind, successors: Vec::new() });
        id
    }

    pub fn link(&mut self, from: NodeId, successors: &[NodeId]) {
        self.nodes[from].successors = successors.to_vec();
    }

    /// Sets successor `slot` of `from`, growing the list as needed.
    pub fn set_successor(&mut self, from: NodeId, slot: usize, target: NodeId) {
        let succ = &mut self.nodes[from].successors;
        if succ.len() <= slot {
            succ.resize(slot + 1, usize::MAX);
        }
        succ[slot] = target;
    }

    pub fn next_id(&self) -> NodeId {
        self.nodes.len()
    }

    pub fn finish(self) -> BssProgram {
        BssProgram::new(self.nodes).expect("builder emits valid programs")
    }
}
