//! Program generators: ReLU networks and semialgebraic membership tests.

use num_traits::{One, Zero};
use thiserror::Error;

use super::{BranchRelation, BssProgram, Expr, NodeId, NodeKind, ProgramBuilder};
use crate::exact_arith::Rational;
use crate::linalg::Matrix;
use crate::polynomial::{MultivariatePolynomial, Relation, SemialgebraicDescription};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompileError {
    #[error("network needs at least one layer")]
    NoLayers,
    #[error("got {weights} weight matrices and {biases} bias vectors")]
    LayerCountMismatch { weights: usize, biases: usize },
    #[error("layer {layer}: {detail}")]
    ShapeMismatch { layer: usize, detail: String },
}

/// Input width of the network, after checking that consecutive layers fit.
fn check_network(weights: &[Matrix], biases: &[Vec<Rational>]) -> Result<usize, CompileError> {
    if weights.is_empty() {
        return Err(CompileError::NoLayers);
    }
    if weights.len() != biases.len() {
        return Err(CompileError::LayerCountMismatch { weights: weights.len(), biases: biases.len() });
    }
    let shape = |layer: usize, detail: String| Err(CompileError::ShapeMismatch { layer, detail });
    let input = weights[0].first().map_or(0, Vec::len);
    let mut width = input;
    for (layer, (w, b)) in weights.iter().zip(biases).enumerate() {
        if w.is_empty() {
            return shape(layer, "weight matrix has no rows".into());
        }
        if let Some(row) = w.iter().position(|r| r.len() != width) {
            return shape(layer, format!("row {row} has {} columns, expected {width}", w[row].len()));
        }
        if b.len() != w.len() {
            return shape(layer, format!("bias has {} entries, expected {}", b.len(), w.len()));
        }
        width = w.len();
    }
    if input == 0 {
        return shape(0, "network has no inputs".into());
    }
    Ok(input)
}

/// `T_L ∘ ρ ∘ T_{L−1} ∘ … ∘ ρ ∘ T₁` with `Tₗ(x) = Wₗx + bₗ` and `ρ = ReLU`,
/// evaluated directly.
pub fn evaluate_relu_network(
    weights: &[Matrix],
    biases: &[Vec<Rational>],
    input: &[Rational],
) -> Result<Vec<Rational>, CompileError> {
    let n = check_network(weights, biases)?;
    if input.len() != n {
        return Err(CompileError::ShapeMismatch { layer: 0, detail: format!("input has {} entries, expected {n}", input.len()) });
    }
    let mut x = input.to_vec();
    for (layer, (w, b)) in weights.iter().zip(biases).enumerate() {
        x = w
            .iter()
            .zip(b)
            .map(|(row, bias)| row.iter().zip(&x).fold(bias.clone(), |acc, (c, v)| acc + c * v))
            .collect();
        if layer + 1 < weights.len() {
            for v in &mut x {
                if *v < Rational::zero() {
                    *v = Rational::zero();
                }
            }
        }
    }
    Ok(x)
}

/// `Σ wⱼ·cell(base + j) + bias`, skipping zero weights.
fn affine_expr(row: &[Rational], base: i64, bias: &Rational) -> Expr {
    let mut terms: Vec<Expr> = row
        .iter()
        .enumerate()
        .filter(|(_, w)| !w.is_zero())
        .map(|(j, w)| {
            let cell = Expr::cell(base + j as i64);
            if w.is_one() {
                cell
            } else {
                Expr::mul(Expr::constant(w.clone()), cell)
            }
        })
        .collect();
    if !bias.is_zero() || terms.is_empty() {
        terms.push(Expr::constant(bias.clone()));
    }
    terms.into_iter().reduce(Expr::add).expect("at least one term")
}

/// Appends nodes in order, linking each single-successor node to the node
/// pushed after it.
struct Chain {
    builder: ProgramBuilder,
    /// Node still waiting for its successor.
    open: Option<NodeId>,
}

impl Chain {
    fn new() -> Self {
        let mut builder = ProgramBuilder::default();
        let input = builder.push(NodeKind::Input);
        Self { builder, open: Some(input) }
    }

    fn push(&mut self, kind: NodeKind) -> NodeId {
        let id = self.builder.push(kind);
        if let Some(prev) = self.open.take() {
            self.builder.link(prev, &[id]);
        }
        id
    }

    /// `cell := value` unconditionally, continuing in sequence.
    fn assign(&mut self, target: i64, expr: Expr) {
        let id = self.push(NodeKind::Computation { target, expr });
        self.open = Some(id);
    }

    /// `if cell < 0 { cell := 0 }`.
    fn relu(&mut self, cell: i64) {
        let branch = self.push(NodeKind::Branch { cell, relation: BranchRelation::Lt });
        let reset = self.builder.push(NodeKind::Computation { target: cell, expr: Expr::constant(Rational::zero()) });
        let join = self.builder.next_id();
        self.builder.link(branch, &[reset, join]);
        self.builder.link(reset, &[join]);
    }

    fn output(mut self, start: i64, len: usize) -> BssProgram {
        self.push(NodeKind::Output { start, len });
        self.builder.finish()
    }
}

/// Straight-line program for a ReLU network, input in cells `0..n`. Layer
/// `l` writes its outputs to a fresh block of cells; each hidden neuron is
/// followed by a branch `cell < 0` that resets it to zero.
pub fn compile_relu_network(weights: &[Matrix], biases: &[Vec<Rational>]) -> Result<BssProgram, CompileError> {
    let input = check_network(weights, biases)?;
    let mut chain = Chain::new();
    let mut base = 0i64;
    let mut width = input as i64;
    for (layer, (w, bias)) in weights.iter().zip(biases).enumerate() {
        let out = base + width;
        for (k, (row, bk)) in w.iter().zip(bias).enumerate() {
            chain.assign(out + k as i64, affine_expr(row, base, bk));
            if layer + 1 < weights.len() {
                chain.relu(out + k as i64);
            }
        }
        base = out;
        width = w.len() as i64;
    }
    Ok(chain.output(base, width as usize))
}

/// `Σ c·Π xᵢ^eᵢ` as an expression over cells `0..n`.
fn polynomial_expr(p: &MultivariatePolynomial) -> Expr {
    let terms: Vec<Expr> = p
        .terms()
        .map(|(exps, c)| {
            let factors: Vec<Expr> = exps
                .iter()
                .enumerate()
                .flat_map(|(i, &e)| std::iter::repeat_n(Expr::cell(i as i64), e as usize))
                .collect();
            match factors.into_iter().reduce(Expr::mul) {
                None => Expr::constant(c.clone()),
                Some(m) if c.is_one() => m,
                Some(m) => Expr::mul(Expr::constant(c.clone()), m),
            }
        })
        .collect();
    terms.into_iter().reduce(Expr::add).unwrap_or_else(|| Expr::constant(Rational::zero()))
}

/// Decision program for membership in a semialgebraic set: outputs 1 on
/// points of the set and 0 elsewhere. Each atom is evaluated into the
/// scratch cell `n` and tested by one branch; a failing atom jumps to the
/// next disjunct.
pub fn compile_membership(desc: &SemialgebraicDescription) -> BssProgram {
    let scratch = desc.variable_count() as i64;
    let mut b = ProgramBuilder::default();
    let input = b.push(NodeKind::Input);
    let patch = |b: &mut ProgramBuilder, edges: &[(NodeId, usize)], target: NodeId| {
        for &(node, slot) in edges {
            b.set_successor(node, slot, target);
        }
    };
    // edges (node, successor slot) into the start of the current disjunct
    let mut pending = vec![(input, 0)];
    let mut accept_edges = Vec::new();
    for conj in desc.disjuncts() {
        let mut pass = std::mem::take(&mut pending);
        for atom in conj {
            let eval = b.push(NodeKind::Computation { target: scratch, expr: polynomial_expr(&atom.polynomial) });
            patch(&mut b, &pass, eval);
            // non-strict relations branch on their negation
            let (relation, holds_slot) = match atom.relation {
                Relation::Lt => (BranchRelation::Lt, 0),
                Relation::Gt => (BranchRelation::Gt, 0),
                Relation::Eq => (BranchRelation::Eq, 0),
                Relation::Le => (BranchRelation::Gt, 1),
                Relation::Ge => (BranchRelation::Lt, 1),
            };
            let branch = b.push(NodeKind::Branch { cell: scratch, relation });
            b.set_successor(eval, 0, branch);
            pass = vec![(branch, holds_slot)];
            pending.push((branch, 1 - holds_slot));
        }
        accept_edges.extend(pass);
    }
    let reject = b.push(NodeKind::Computation { target: scratch, expr: Expr::constant(Rational::zero()) });
    patch(&mut b, &pending, reject);
    let accept = b.push(NodeKind::Computation { target: scratch, expr: Expr::constant(Rational::one()) });
    patch(&mut b, &accept_edges, accept);
    let output = b.push(NodeKind::Output { start: scratch, len: 1 });
    b.link(reject, &[output]);
    b.link(accept, &[output]);
    b.finish()
}
