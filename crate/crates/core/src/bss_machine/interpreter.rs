use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use super::{BssError, BssProgram, Direction, Expr, NodeId, NodeKind};
use crate::exact_arith::{ArithError, Scalar};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counters {
    /// Additions, subtractions and negations.
    pub adds: u64,
    pub muls: u64,
    pub divs: u64,
    pub comparisons: u64,
    pub steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BssState<S> {
    pub tape: BTreeMap<i64, S>,
    pub head: i64,
    pub current: NodeId,
    pub counters: Counters,
}

impl<S: Scalar> BssState<S> {
    fn read(&self, offset: i64) -> S {
        self.tape.get(&(self.head + offset)).cloned().unwrap_or_else(S::zero_value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RunOutcome<S> {
    Halted { output: Vec<S>, counters: Counters },
    BudgetExceeded(BssState<S>),
}

/// One executed node, reported before it runs.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct TraceEvent {
    pub node: NodeId,
    pub head: i64,
    pub counters: Counters,
}

pub fn run<S: Scalar>(prog: &BssProgram, input: &[S], budget: u64) -> Result<RunOutcome<S>, BssError> {
    run_traced(prog, input, budget, |_| {})
}

pub fn run_traced<S: Scalar>(
    prog: &BssProgram,
    input: &[S],
    budget: u64,
    mut trace: impl FnMut(&TraceEvent),
) -> Result<RunOutcome<S>, BssError> {
    if budget == 0 {
        return Err(BssError::InvalidProgram("step budget must be positive".into()));
    }
    let mut state = BssState { tape: BTreeMap::new(), head: 0, current: prog.entry(), counters: Counters::default() };
    loop {
        if state.counters.steps >= budget {
            return Ok(RunOutcome::BudgetExceeded(state));
        }
        let node = &prog.nodes()[state.current];
        trace(&TraceEvent { node: node.id, head: state.head, counters: state.counters });
        state.counters.steps += 1;
        let mut next = node.successors.first().copied();
        match &node.kind {
            NodeKind::Input => {
                for (i, v) in input.iter().enumerate() {
                    state.tape.insert(state.head + i as i64, v.clone());
                }
            }
            NodeKind::Computation { target, expr } => {
                let value = eval(expr, &state).map_err(|e| match e {
                    ArithError::DivisionByZero => BssError::DivisionByZero { node: node.id },
                    other => BssError::Arith { node: node.id, source: other },
                })?;
                count(expr, &mut state.counters);
                state.tape.insert(state.head + target, value);
            }
            NodeKind::Branch { cell, relation } => {
                state.counters.comparisons += 1;
                let holds = relation.holds(state.read(*cell).signum());
                next = Some(node.successors[if holds { 0 } else { 1 }]);
            }
            NodeKind::Shift { direction } => {
                state.head += match direction {
                    Direction::Left => -1,
                    Direction::Right => 1,
                };
            }
            NodeKind::Output { start, len } => {
                let output = (0..*len as i64).map(|k| state.read(start + k)).collect();
                return Ok(RunOutcome::Halted { output, counters: state.counters });
            }
        }
        state.current = next.expect("validated successor");
    }
}

fn eval<S: Scalar>(expr: &Expr, state: &BssState<S>) -> Result<S, ArithError> {
    Ok(match expr {
        Expr::Const(c) => S::from_rational(c),
        Expr::Cell(offset) => state.read(*offset),
        Expr::Add(a, b) => eval(a, state)?.try_add(&eval(b, state)?)?,
        Expr::Sub(a, b) => eval(a, state)?.try_sub(&eval(b, state)?)?,
        Expr::Mul(a, b) => eval(a, state)?.try_mul(&eval(b, state)?)?,
        Expr::Div(a, b) => eval(a, state)?.try_div(&eval(b, state)?)?,
        Expr::Neg(a) => eval(a, state)?.negate(),
    })
}

/// Field operations performed by one evaluation of `expr`.
fn count(expr: &Expr, counters: &mut Counters) {
    match expr {
        Expr::Const(_) | Expr::Cell(_) => {}
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            counters.adds += 1;
            count(a, counters);
            count(b, counters);
        }
        Expr::Mul(a, b) => {
            counters.muls += 1;
            count(a, counters);
            count(b, counters);
        }
        Expr::Div(a, b) => {
            counters.divs += 1;
            count(a, counters);
            count(b, counters);
        }
        Expr::Neg(a) => {
            counters.adds += 1;
            count(a, counters);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecideError {
    #[error("output is not a single 0/1 cell")]
    NonBooleanOutput,
    #[error("step budget exhausted")]
    BudgetExceeded,
    #[error(transparent)]
    Run(#[from] BssError),
}

/// Characteristic value computed by a decision program.
pub fn decide<S: Scalar + PartialEq>(prog: &BssProgram, point: &[S], budget: u64) -> Result<bool, DecideError> {
    match run(prog, point, budget)? {
        RunOutcome::BudgetExceeded(_) => Err(DecideError::BudgetExceeded),
        RunOutcome::Halted { output, .. } => match output.as_slice() {
            [v] if *v == S::one_value() => Ok(true),
            [v] if *v == S::zero_value() => Ok(false),
            _ => Err(DecideError::NonBooleanOutput),
        },
    }
}
