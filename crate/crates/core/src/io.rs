//! JSON file formats. Every rational is a `"p/q"` string.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::exact_arith::{format_rational, parse_rational, ArithError, QuadraticNumber, Rational};
use crate::linalg::Matrix;
use crate::optimizer::{Multipliers, Solution};
use crate::reduction::{ComplexInstance, InstanceError, RealInstance};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Rational(#[from] ArithError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("declared {field} = {declared} but data has {actual}")]
    DeclaredShape { field: &'static str, declared: usize, actual: usize },
}

#[derive(Serialize, Deserialize)]
struct RealFile {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "A")]
    a: Vec<Vec<String>>,
    y: Vec<String>,
    epsilon: String,
}

#[derive(Serialize, Deserialize)]
struct ComplexFile {
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "A_re")]
    a_re: Vec<Vec<String>>,
    #[serde(rename = "A_im")]
    a_im: Vec<Vec<String>>,
    y_re: Vec<String>,
    y_im: Vec<String>,
    epsilon: String,
}

pub enum AnyInstance {
    Real(RealInstance),
    Complex(ComplexInstance),
}

fn parse_vec(v: &[String]) -> Result<Vec<Rational>, ArithError> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn parse_matrix(m: &[Vec<String>]) -> Result<Matrix, ArithError> {
    m.iter().map(|r| parse_vec(r)).collect()
}

fn format_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn format_matrix(m: &Matrix) -> Vec<Vec<String>> {
    m.iter().map(|r| format_vec(r)).collect()
}

fn check_declared(m: usize, n: usize, a: &Matrix) -> Result<(), IoError> {
    if a.len() != m {
        return Err(IoError::DeclaredShape { field: "m", declared: m, actual: a.len() });
    }
    let cols = a.first().map_or(0, Vec::len);
    if cols != n {
        return Err(IoError::DeclaredShape { field: "N", declared: n, actual: cols });
    }
    Ok(())
}

pub fn parse_real_instance(text: &str) -> Result<RealInstance, IoError> {
    let f: RealFile = serde_json::from_str(text)?;
    let a = parse_matrix(&f.a)?;
    check_declared(f.m, f.n, &a)?;
    Ok(RealInstance::new(a, parse_vec(&f.y)?, parse_rational(&f.epsilon)?)?)
}

pub fn parse_complex_instance(text: &str) -> Result<ComplexInstance, IoError> {
    let f: ComplexFile = serde_json::from_str(text)?;
    let a_re = parse_matrix(&f.a_re)?;
    check_declared(f.m, f.n, &a_re)?;
    Ok(ComplexInstance::new(
        a_re,
        parse_matrix(&f.a_im)?,
        parse_vec(&f.y_re)?,
        parse_vec(&f.y_im)?,
        parse_rational(&f.epsilon)?,
    )?)
}

/// Complex when the file carries `A_re`.
pub fn parse_instance(text: &str) -> Result<AnyInstance, IoError> {
    let value: Value = serde_json::from_str(text)?;
    if value.get("A_re").is_some() {
        Ok(AnyInstance::Complex(parse_complex_instance(text)?))
    } else {
        Ok(AnyInstance::Real(parse_real_instance(text)?))
    }
}

pub fn real_instance_to_json(inst: &RealInstance) -> String {
    let f = RealFile {
        m: inst.rows(),
        n: inst.cols(),
        a: format_matrix(inst.a()),
        y: format_vec(inst.y()),
        epsilon: format_rational(inst.epsilon()),
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}

pub fn complex_instance_to_json(inst: &ComplexInstance) -> String {
    let f = ComplexFile {
        m: inst.rows(),
        n: inst.cols(),
        a_re: format_matrix(inst.a_re()),
        a_im: format_matrix(inst.a_im()),
        y_re: format_vec(inst.y_re()),
        y_im: format_vec(inst.y_im()),
        epsilon: format_rational(inst.epsilon()),
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}

#[derive(Serialize, Deserialize)]
struct NetworkFile {
    weights: Vec<Vec<Vec<String>>>,
    biases: Vec<Vec<String>>,
}

/// `{"weights": [matrix, ...], "biases": [vector, ...]}`.
pub fn parse_network(text: &str) -> Result<(Vec<Matrix>, Vec<Vec<Rational>>), IoError> {
    let f: NetworkFile = serde_json::from_str(text)?;
    let weights = f.weights.iter().map(|w| parse_matrix(w)).collect::<Result<_, _>>()?;
    let biases = f.biases.iter().map(|b| parse_vec(b)).collect::<Result<_, _>>()?;
    Ok((weights, biases))
}

pub fn network_to_json(weights: &[Matrix], biases: &[Vec<Rational>]) -> String {
    let f = NetworkFile {
        weights: weights.iter().map(format_matrix).collect(),
        biases: biases.iter().map(|b| format_vec(b)).collect(),
    };
    serde_json::to_string_pretty(&f).expect("plain data")
}

/// Result file of `solve`/`solve-complex`.
#[derive(Serialize)]
pub struct SolveResult<'a> {
    pub status: &'static str,
    pub objective: &'a QuadraticNumber,
    pub point: &'a [QuadraticNumber],
    pub active_set: &'a [usize],
    pub multipliers: &'a Multipliers,
    pub certificate_ok: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx: Option<Approx>,
}

/// Decimal rendering, truncated toward zero.
#[derive(Serialize)]
pub struct Approx {
    pub digits: usize,
    pub objective: String,
    pub point: Vec<String>,
}

impl<'a> SolveResult<'a> {
    pub fn new(sol: &'a Solution, certificate_ok: bool, approx_digits: Option<usize>) -> Self {
        let approx = approx_digits.map(|digits| Approx {
            digits,
            objective: sol.objective_value.to_decimal(digits),
            point: sol.point.iter().map(|x| x.to_decimal(digits)).collect(),
        });
        Self {
            status: "optimal",
            objective: &sol.objective_value,
            point: &sol.point,
            active_set: &sol.active_set,
            multipliers: &sol.multipliers,
            certificate_ok,
            approx,
        }
    }
}
