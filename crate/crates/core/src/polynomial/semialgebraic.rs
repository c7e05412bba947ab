use std::fmt;

use serde::{Deserialize, Serialize};

use super::{MultivariatePolynomial, PolyError};
use crate::exact_arith::Scalar;

/// Sign relation of a polynomial against zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = "=")]
    Eq,
}

impl Relation {
    pub fn holds(self, sign: i8) -> bool {
        match self {
            Relation::Lt => sign < 0,
            Relation::Gt => sign > 0,
            Relation::Le => sign <= 0,
            Relation::Ge => sign >= 0,
            Relation::Eq => sign == 0,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Gt => ">",
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

/// `polynomial Δ 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignAtom {
    pub polynomial: MultivariatePolynomial,
    pub relation: Relation,
}

impl SignAtom {
    pub fn new(polynomial: MultivariatePolynomial, relation: Relation) -> Self {
        Self { polynomial, relation }
    }

    pub fn holds<S: Scalar>(&self, point: &[S]) -> Result<bool, PolyError> {
        Ok(self.relation.holds(self.polynomial.evaluate(point)?.signum()))
    }
}

/// Quantifier-free formula in disjunctive normal form: a union of basic
/// sets, each a conjunction of sign atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemialgebraicDescription {
    variable_count: usize,
    disjuncts: Vec<Vec<SignAtom>>,
}

impl SemialgebraicDescription {
    pub fn new(variable_count: usize, disjuncts: Vec<Vec<SignAtom>>) -> Result<Self, PolyError> {
        for atom in disjuncts.iter().flatten() {
            let found = atom.polynomial.variable_count();
            if found != variable_count {
                return Err(PolyError::DimensionMismatch { expected: variable_count, found });
            }
        }
        Ok(Self { variable_count, disjuncts })
    }

    /// A single basic set.
    pub fn conjunction(variable_count: usize, atoms: Vec<SignAtom>) -> Result<Self, PolyError> {
        Self::new(variable_count, vec![atoms])
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn disjuncts(&self) -> &[Vec<SignAtom>] {
        &self.disjuncts
    }

    pub fn atoms(&self) -> impl Iterator<Item = &SignAtom> {
        self.disjuncts.iter().flatten()
    }

    pub fn union(&self, other: &Self) -> Result<Self, PolyError> {
        let mut disjuncts = self.disjuncts.clone();
        disjuncts.extend(other.disjuncts.iter().cloned());
        Self::new(self.variable_count, disjuncts)
    }

    /// Distributes the conjunction over both unions.
    pub fn intersection(&self, other: &Self) -> Result<Self, PolyError> {
        let mut disjuncts = Vec::new();
        for a in &self.disjuncts {
            for b in &other.disjuncts {
                disjuncts.push(a.iter().chain(b).cloned().collect());
            }
        }
        Self::new(self.variable_count, disjuncts)
    }

    /// Membership, decided by exact sign evaluation of every atom.
    pub fn contains<S: Scalar>(&self, point: &[S]) -> Result<bool, PolyError> {
        if point.len() != self.variable_count {
            return Err(PolyError::DimensionMismatch { expected: self.variable_count, found: point.len() });
        }
        for conj in &self.disjuncts {
            let mut all = true;
            for atom in conj {
                if !atom.holds(point)? {
                    all = false;
                    break;
                }
            }
            if all {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for SemialgebraicDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .disjuncts
            .iter()
            .map(|conj| {
                let atoms: Vec<String> =
                    conj.iter().map(|a| format!("{} {} 0", a.polynomial, a.relation.symbol())).collect();
                format!("({})", atoms.join(" ∧ "))
            })
            .collect();
        write!(f, "{}", parts.join(" ∨ "))
    }
}
