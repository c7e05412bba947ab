//! Acceptance suite. Runs every criterion, prints one line each and exits
//! non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bssbp_core::bss_machine::{compile_relu_network, run, RunOutcome};
use bssbp_core::exact_arith::rational::{int, rat};
use bssbp_core::linalg::Matrix;
use bssbp_core::optimizer::{
    certify_complex, check_feasible, oracle_solve, solve, solve_complex, FeasibilityStatus, OracleError, Solution,
};
use bssbp_core::turing_gap::{build_sequences, verify_gap};
use bssbp_core::{certify, ComplexInstance, QuadraticNumber, Rational, RealInstance};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

#[derive(Default)]
struct Certificates {
    checked: usize,
    failures: Vec<String>,
}

impl Certificates {
    fn real(&mut self, inst: &RealInstance, sol: &Solution, tag: &str) {
        self.checked += 1;
        if !certify(inst, sol) {
            self.failures.push(tag.to_string());
        }
    }

    fn complex(&mut self, inst: &ComplexInstance, sol: &Solution, tag: &str) {
        self.checked += 1;
        if !certify_complex(inst, sol) {
            self.failures.push(tag.to_string());
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || {
        format!("{what} took {:.2} s, limit {limit_secs} s", elapsed.as_secs_f64())
    })
}

fn qn(r: &Rational) -> QuadraticNumber {
    QuadraticNumber::from(r.clone())
}

fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(rng.gen_range(-max_num..=max_num), rng.gen_range(1..=max_den))
}

fn positive_rational(rng: &mut ChaCha8Rng) -> Rational {
    rat(rng.gen_range(1..=12), rng.gen_range(1..=6))
}

// 1. Closed-form family.
fn closed_form(rng: &mut ChaCha8Rng, certs: &mut Certificates) -> Outcome {
    let start = Instant::now();
    let epsilons = [rat(1, 4), rat(1, 2), rat(3, 4)];
    let mut tied = 0;
    for case in 0..200 {
        let n = rng.gen_range(2..=5);
        let mut row: Vec<Rational> = (0..n).map(|_| positive_rational(rng)).collect();
        if case % 4 == 0 {
            // force a tie for the maximum
            let top = row.iter().max().unwrap().clone();
            let j = rng.gen_range(0..n);
            row[j] = top;
        }
        let eps = epsilons[case % 3].clone();
        let inst = RealInstance::new(vec![row.clone()], vec![int(1)], eps.clone()).unwrap();
        let sol = solve(&inst).map_err(|e| format!("case {case}: {e}"))?;
        certs.real(&inst, &sol, &format!("closed-form {case}"));

        let max = row.iter().max().unwrap().clone();
        let kappa = Rational::one() - &eps;
        let expected = &kappa / &max;
        ensure(sol.objective_value == qn(&expected), || {
            format!("case {case}: objective {} != {}", sol.objective_value, expected)
        })?;
        let argmax: Vec<usize> = (0..n).filter(|&j| row[j] == max).collect();
        if argmax.len() > 1 {
            tied += 1;
        }
        let mut t_sum = Rational::zero();
        for (j, x) in sol.point.iter().enumerate() {
            let x = x.to_rational().ok_or_else(|| format!("case {case}: irrational coordinate {x}"))?;
            if !argmax.contains(&j) {
                ensure(x.is_zero(), || format!("case {case}: support outside argmax at {j}"))?;
                continue;
            }
            let t = &x * &row[j] / &kappa;
            ensure(!t.is_negative(), || format!("case {case}: t_{j} = {t} < 0"))?;
            t_sum += t;
        }
        ensure(t_sum.is_one(), || format!("case {case}: Σt = {t_sum}"))?;
    }
    within(start.elapsed(), 5.0, "200 instances")?;
    Ok(format!("200 instances ({tied} with tied maxima), {:.2} s", start.elapsed().as_secs_f64()))
}

// 3. Oracle sandwich.
fn oracle_sandwich(rng: &mut ChaCha8Rng, certs: &mut Certificates) -> Outcome {
    let start = Instant::now();
    let tol = rat(1, 1_000_000);
    let epsilons = [rat(1, 10), rat(1, 2)];
    let mut accepted = 0;
    let mut rejected = 0;
    let mut total_cells = 0;
    while accepted < 50 {
        // m < N is an instance invariant, which leaves (1, 2), (1, 3) and (2, 3)
        let (m, n) = [(1, 2), (1, 3), (2, 3)][rng.gen_range(0..3)];
        let entry = |rng: &mut ChaCha8Rng| {
            let q = rng.gen_range(1..=4);
            rat(rng.gen_range(-3 * q..=3 * q), q)
        };
        let a: Matrix = (0..m).map(|_| (0..n).map(|_| entry(rng)).collect()).collect();
        let y: Vec<Rational> = (0..m).map(|_| entry(rng)).collect();
        let eps = epsilons[rng.gen_range(0..2)].clone();
        let inst = RealInstance::new(a, y, eps).unwrap();
        if check_feasible(&inst).status == FeasibilityStatus::Empty {
            rejected += 1;
            continue;
        }
        let bracket = match oracle_solve(&inst, &tol, 2_000_000) {
            Ok(b) => b,
            // ball without interior: a null set of instances, resampled
            Err(OracleError::NoInteriorPoint) => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(format!("instance {accepted}: oracle: {e}")),
        };
        let sol = solve(&inst).map_err(|e| format!("instance {accepted}: {e}"))?;
        certs.real(&inst, &sol, &format!("sandwich {accepted}"));
        ensure(
            qn(&bracket.lower) <= sol.objective_value && sol.objective_value <= qn(&bracket.upper),
            || format!("instance {accepted}: {} not in [{}, {}]", sol.objective_value, bracket.lower, bracket.upper),
        )?;
        ensure(&bracket.upper - &bracket.lower <= tol, || format!("instance {accepted}: bracket wider than tol"))?;
        total_cells += bracket.cells;
        accepted += 1;
    }
    within(start.elapsed(), 60.0, "50 oracle runs")?;
    Ok(format!(
        "50 instances ({rejected} infeasible or boundary resampled), {total_cells} cells, {:.2} s",
        start.elapsed().as_secs_f64()
    ))
}

// 4. Complex/real consistency.
fn complex_consistency(rng: &mut ChaCha8Rng, certs: &mut Certificates) -> Outcome {
    let mut done = 0;
    let mut tries = 0;
    while done < 20 {
        tries += 1;
        let n = rng.gen_range(2..=4);
        let m = rng.gen_range(1..n);
        let a: Matrix = (0..m).map(|_| (0..n).map(|_| random_rational(rng, 6, 3)).collect()).collect();
        let y: Vec<Rational> = (0..m).map(|_| random_rational(rng, 6, 3)).collect();
        let inst = RealInstance::new(a, y, rat(rng.gen_range(1..=4), 4)).unwrap();
        if check_feasible(&inst).status == FeasibilityStatus::Empty {
            continue;
        }
        let cinst = ComplexInstance::from_real(&inst);
        ensure(cinst.is_real_valued(), || "from_real produced imaginary data".into())?;
        let real = solve(&inst).map_err(|e| e.to_string())?;
        let complex = solve_complex(&cinst).map_err(|e| e.to_string())?;
        certs.real(&inst, &real, &format!("consistency real {done}"));
        certs.complex(&cinst, &complex, &format!("consistency complex {done}"));
        ensure(complex.point[n..].iter().all(QuadraticNumber::is_zero), || {
            format!("case {done}: nonzero imaginary part")
        })?;
        ensure(complex.objective_value == real.objective_value, || {
            format!("case {done}: {} != {}", complex.objective_value, real.objective_value)
        })?;
        done += 1;
    }
    Ok(format!("20 instances ({} infeasible resampled)", tries - 20))
}

// 5. Gap demonstration.
fn gap_demo(certs: &mut Certificates) -> Outcome {
    let start = Instant::now();
    let seq = build_sequences(&rat(1, 2), 20).map_err(|e| e.to_string())?;
    let report = verify_gap(&seq).map_err(|e| e.to_string())?;
    let kappa_sq = rat(1, 4);
    ensure(report.kappa == rat(1, 2), || format!("kappa {}", report.kappa))?;
    for (r, (w1, w2)) in report.records.iter().zip(seq.omega1.iter().zip(&seq.omega2)) {
        let expected = Rational::new(BigInt::one(), BigInt::from(2).pow(r.n as u32));
        ensure(r.input_distance == expected, || format!("n = {}: distance {}", r.n, r.input_distance))?;
        ensure(r.solution_separation_sq == rat(1, 2) && r.solution_separation_sq > kappa_sq, || {
            format!("n = {}: separation² {}", r.n, r.solution_separation_sq)
        })?;
        certs.real(w1, &r.solution1, &format!("gap ω¹ n={}", r.n));
        certs.real(w2, &r.solution2, &format!("gap ω² n={}", r.n));
    }
    certs.real(&seq.omega_star, &report.limit_solution, "gap ω*");
    ensure(report.records.len() == 20, || "expected 20 records".into())?;
    ensure(report.conditions_a_b_hold, || "conditions_a_b_hold = false".into())?;
    within(start.elapsed(), 2.0, "demo-gap")?;
    Ok(format!("n = 1..20, {:.2} s", start.elapsed().as_secs_f64()))
}

fn reference_network(weights: &[Matrix], biases: &[Vec<Rational>], input: &[Rational]) -> Vec<Rational> {
    let mut x = input.to_vec();
    for (l, (w, b)) in weights.iter().zip(biases).enumerate() {
        x = w
            .iter()
            .zip(b)
            .map(|(row, bi)| row.iter().zip(&x).fold(bi.clone(), |acc, (wij, xj)| acc + wij * xj))
            .collect();
        if l + 1 < weights.len() {
            for v in &mut x {
                if v.is_negative() {
                    *v = Rational::zero();
                }
            }
        }
    }
    x
}

// 6. Compiled ReLU networks.
fn relu_networks(rng: &mut ChaCha8Rng) -> Outcome {
    let mut max_steps = 0;
    for net in 0..20 {
        let layers = rng.gen_range(1..=4);
        let mut widths = vec![rng.gen_range(1..=8)];
        for _ in 0..layers {
            widths.push(rng.gen_range(1..=8));
        }
        let weights: Vec<Matrix> = (0..layers)
            .map(|l| (0..widths[l + 1]).map(|_| (0..widths[l]).map(|_| random_rational(rng, 5, 4)).collect()).collect())
            .collect();
        let biases: Vec<Vec<Rational>> =
            (0..layers).map(|l| (0..widths[l + 1]).map(|_| random_rational(rng, 5, 4)).collect()).collect();
        let prog = compile_relu_network(&weights, &biases).map_err(|e| format!("network {net}: {e}"))?;
        for k in 0..50 {
            let input: Vec<Rational> = (0..widths[0]).map(|_| random_rational(rng, 10, 7)).collect();
            let expected = reference_network(&weights, &biases, &input);
            match run(&prog, &input, 100_000).map_err(|e| format!("network {net}: {e}"))? {
                RunOutcome::Halted { output, counters } => {
                    ensure(output == expected, || format!("network {net}, input {k}: output mismatch"))?;
                    max_steps = max_steps.max(counters.steps);
                }
                RunOutcome::BudgetExceeded(_) => return Err(format!("network {net}, input {k}: budget exceeded")),
            }
        }
    }
    Ok(format!("20 networks × 50 inputs, at most {max_steps} steps"))
}

/// `min ‖Ax − y‖²` through `AᵀA x = Aᵀy` solved by Gauss–Jordan
/// elimination with free variables set to zero.
fn normal_equations_residual(a: &Matrix, y: &[Rational]) -> Rational {
    let n = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            let mut row: Vec<Rational> =
                (0..n).map(|j| a.iter().fold(Rational::zero(), |acc, r| acc + &r[i] * &r[j])).collect();
            row.push(a.iter().zip(y).fold(Rational::zero(), |acc, (r, yi)| acc + &r[i] * yi));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..n).find(|&i| !aug[i][c].is_zero()) else { continue };
        aug.swap(r, p);
        let inv = aug[r][c].recip();
        for v in aug[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..n {
            if i != r && !aug[i][c].is_zero() {
                let f = aug[i][c].clone();
                for j in 0..=n {
                    let d = &f * &aug[r][j];
                    aug[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![Rational::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = aug[row][n].clone();
    }
    a.iter().zip(y).fold(Rational::zero(), |acc, (row, yi)| {
        let e = row.iter().zip(&x).fold(-yi.clone(), |s, (aij, xj)| s + aij * xj);
        acc + &e * &e
    })
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    let (p, q) = (r.numer(), r.denom());
    let (sp, sq) = (p.sqrt(), q.sqrt());
    (&sp * &sp == *p && &sq * &sq == *q).then(|| Rational::new(sp, sq))
}

// 7. Emptiness decision.
fn emptiness(rng: &mut ChaCha8Rng) -> Outcome {
    let mut counts = [0usize; 4];
    let mut boundary = 0;
    let mut empty = 0;
    for case in 0..100 {
        let kind = case % 4;
        let n = rng.gen_range(2..=5);
        let m = rng.gen_range(1..n.min(4));
        let mut a: Matrix = (0..m).map(|_| (0..n).map(|_| random_rational(rng, 5, 3)).collect()).collect();
        let y: Vec<Rational> = (0..m).map(|_| random_rational(rng, 5, 3)).collect();
        match kind {
            // rank-deficient: a repeated row scaled, or a zero column
            1 => {
                if m > 1 {
                    let f = random_rational(rng, 3, 2);
                    a[m - 1] = a[0].iter().map(|v| v * &f).collect();
                } else {
                    for row in &mut a {
                        row[0] = Rational::zero();
                    }
                }
            }
            2 => a = vec![vec![Rational::zero(); n]; m],
            // last row zero, so the residual includes y_m² exactly
            3 => a[m - 1] = vec![Rational::zero(); n],
            _ => {}
        }
        let residual = normal_equations_residual(&a, &y);
        let eps = match (kind, rational_sqrt(&residual)) {
            (3, Some(r)) if r.is_positive() => {
                boundary += 1;
                r
            }
            _ => rat(rng.gen_range(1..=8), 4),
        };
        let inst = RealInstance::new(a, y, eps.clone()).unwrap();
        let report = check_feasible(&inst);
        ensure(report.min_residual_sq == residual, || {
            format!("case {case}: min_residual_sq {} but normal equations give {residual}", report.min_residual_sq)
        })?;
        let expected = if residual > &eps * &eps { FeasibilityStatus::Empty } else { FeasibilityStatus::Feasible };
        ensure(report.status == expected, || format!("case {case}: status {:?}", report.status))?;
        counts[kind] += 1;
        if expected == FeasibilityStatus::Empty {
            empty += 1;
        }
    }
    Ok(format!(
        "100 instances ({} generic, {} rank-deficient, {} zero, {} zero-row; {boundary} on the boundary; {empty} empty)",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn random_radicand(rng: &mut ChaCha8Rng) -> Rational {
    const RADICANDS: [i64; 8] = [2, 3, 5, 6, 7, 8, 10, 12];
    match rng.gen_range(0..10) {
        0 => int(rng.gen_range(1..=5i64).pow(2)),
        1 => rat(RADICANDS[rng.gen_range(0..8)], rng.gen_range(1..=5)),
        _ => int(RADICANDS[rng.gen_range(0..8)]),
    }
}

fn random_quadratic(rng: &mut ChaCha8Rng, d: &Rational) -> QuadraticNumber {
    let a = if rng.gen_bool(0.1) { Rational::zero() } else { random_rational(rng, 50, 12) };
    let b = if rng.gen_bool(0.1) { Rational::zero() } else { random_rational(rng, 50, 12) };
    QuadraticNumber::new(a, b, d.clone()).unwrap()
}

/// Sign of `a + b·√d` from a 100-digit decimal enclosure of `√d`.
/// `None` when the enclosure straddles zero.
fn decimal_sign(a: &Rational, b: &Rational, d: &Rational) -> Option<i8> {
    let scale = BigInt::from(10).pow(100);
    // √d = √(pq)/q, and s ≤ √(pq)·10¹⁰⁰ < s + 1
    let pq = d.numer() * d.denom();
    let radicand = &pq * &scale * &scale;
    let s = radicand.sqrt();
    let den = d.denom() * &scale;
    let lo = a + b * Rational::new(s.clone(), den.clone());
    if &s * &s == radicand {
        // the enclosure is exact
        return Some(if lo.is_positive() { 1 } else if lo.is_negative() { -1 } else { 0 });
    }
    let hi = a + b * Rational::new(s + 1, den);
    let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    if lo.is_positive() {
        Some(1)
    } else if hi.is_negative() {
        Some(-1)
    } else if lo.is_zero() && hi.is_zero() {
        Some(0)
    } else {
        None
    }
}

// 8. Exact-arithmetic foundation.
fn arithmetic(rng: &mut ChaCha8Rng) -> Outcome {
    let zero = QuadraticNumber::zero();
    let one = QuadraticNumber::one();
    for case in 0..10_000 {
        let d = random_radicand(rng);
        let (x, y, z) = (random_quadratic(rng, &d), random_quadratic(rng, &d), random_quadratic(rng, &d));
        let fail = |law: &str| format!("case {case}: {law} fails for {x}, {y}, {z}");
        ensure(&x + &y == &y + &x, || fail("additive commutativity"))?;
        ensure(&x * &y == &y * &x, || fail("multiplicative commutativity"))?;
        ensure(&(&x + &y) + &z == &x + &(&y + &z), || fail("additive associativity"))?;
        ensure(&(&x * &y) * &z == &x * &(&y * &z), || fail("multiplicative associativity"))?;
        ensure(&x * &(&y + &z) == &(&x * &y) + &(&x * &z), || fail("distributivity"))?;
        ensure(&x + &zero == x && &x * &one == x, || fail("identities"))?;
        ensure((&x + &(-&x)).is_zero(), || fail("additive inverse"))?;
        if !x.is_zero() {
            ensure(&x * &(&one / &x) == one, || fail("multiplicative inverse"))?;
        }
    }
    let mut close = 0;
    for case in 0..1_000 {
        let d = random_radicand(rng);
        let b = random_rational(rng, 50, 12);
        // a third of the cases sit within 10⁻¹² of zero
        let a = if case % 3 == 0 {
            close += 1;
            let root = (&b * &b * &d).to_f64().unwrap().sqrt();
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let approx = (sign * root * 1e12).round() as i64 + rng.gen_range(-3..=3);
            rat(approx, 1_000_000_000_000)
        } else {
            random_rational(rng, 200, 12)
        };
        let q = QuadraticNumber::new(a.clone(), b.clone(), d.clone()).unwrap();
        let expected = decimal_sign(&a, &b, &d);
        ensure(expected.is_some(), || format!("case {case}: decimal enclosure inconclusive for {q}"))?;
        ensure(Some(q.sign()) == expected, || format!("case {case}: sign {} vs decimal {:?} for {q}", q.sign(), expected))?;
    }
    Ok(format!("10000 field-axiom cases, 1000 sign cases ({close} near zero)"))
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b55b);
    let mut certs = Certificates::default();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("1 closed-form family", closed_form(&mut rng, &mut certs)));
    results.push(("3 oracle sandwich", oracle_sandwich(&mut rng, &mut certs)));
    results.push(("4 complex/real consistency", complex_consistency(&mut rng, &mut certs)));
    results.push(("5 gap demonstration", gap_demo(&mut certs)));
    results.push(("6 compiled ReLU networks", relu_networks(&mut rng)));
    results.push(("7 emptiness decision", emptiness(&mut rng)));
    results.push(("8 exact arithmetic", arithmetic(&mut rng)));
    let cert_outcome = if certs.failures.is_empty() {
        Ok(format!("{} of {} solver outputs certified", certs.checked, certs.checked))
    } else {
        Err(format!("{} of {} rejected: {:?}", certs.failures.len(), certs.checked, certs.failures))
    };
    results.insert(1, ("2 certificates", cert_outcome));

    let mut all = true;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(detail) => {
                all = false;
                println!("criterion {name}: FAIL ({detail})");
            }
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
