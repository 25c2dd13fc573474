//! Small dense linear-feasibility kernel.
//!
//! Decides feasibility of systems of linear constraints over free real
//! variables, optionally minimizing a linear objective, via a two-phase
//! simplex with Bland's rule (no cycling). Problems here are tiny -- a
//! handful of variables and constraints -- so a dense tableau is the right
//! tool. Strict inequalities never appear: callers encode them as `>= 1` or
//! `<= -1` over positively homogeneous variables.
//!
//! The kernel never reports a silent wrong answer: a returned witness is
//! re-verified against every constraint within `1e-8`, and anything that
//! fails verification, exceeds the iteration cap, or lands in the numerical
//! gray zone comes back as `Indeterminate`.

use crate::interval::PositiveInterval;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LinFeasError {
    #[error("numerically indeterminate: {0}")]
    Indeterminate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Ge,
    Le,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub bound: f64,
}

/// Constraints over `n` free variables, with an optional linear objective
/// to minimize.
#[derive(Debug, Clone)]
pub struct LinearConstraintSystem {
    pub n: usize,
    pub constraints: Vec<Constraint>,
    pub objective: Option<Vec<f64>>,
}

impl LinearConstraintSystem {
    pub fn feasibility(n: usize) -> Self {
        Self { n, constraints: Vec::new(), objective: None }
    }

    pub fn minimize(n: usize, objective: Vec<f64>) -> Self {
        Self { n, constraints: Vec::new(), objective: Some(objective) }
    }

    pub fn push(&mut self, coeffs: Vec<f64>, relation: Relation, bound: f64) {
        self.constraints.push(Constraint { coeffs, relation, bound });
    }
}

/// Outcome of a feasibility check. A `Feasible` status carries a witness
/// satisfying every constraint within `1e-8`; `optimum` is present when an
/// objective was supplied and the minimum is attained (absent when the
/// objective is unbounded below).
#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Feasible(Vec<f64>),
    Infeasible,
    Indeterminate(String),
}

#[derive(Debug, Clone)]
pub struct FeasibilityResult {
    pub status: Status,
    pub optimum: Option<(f64, Vec<f64>)>,
}

const PIVOT_EPS: f64 = 1e-9;
const PHASE1_FEASIBLE: f64 = 1e-9;
const PHASE1_GRAY: f64 = 1e-7;
const WITNESS_TOL: f64 = 1e-8;
const MAX_ITER: usize = 20_000;

struct Tableau {
    rows: Vec<Vec<f64>>, // m x (ncols + 1), last column is rhs
    cost: Vec<f64>,      // reduced costs + objective value (negated) at the end
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let piv = self.rows[row][col];
        for v in self.rows[row].iter_mut() {
            *v /= piv;
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i != row {
                let factor = r[col];
                if factor != 0.0 {
                    for (v, p) in r.iter_mut().zip(&pivot_row) {
                        *v -= factor * p;
                    }
                }
            }
        }
        let factor = self.cost[col];
        if factor != 0.0 {
            for (v, p) in self.cost.iter_mut().zip(&pivot_row) {
                *v -= factor * p;
            }
        }
        self.basis[row] = col;
    }

    /// Bland's rule simplex on the current cost row. `allowed` bounds the
    /// columns eligible to enter. Returns Ok(true) on optimality, Ok(false)
    /// when the objective is unbounded below.
    fn run(&mut self, allowed: usize, iter_budget: &mut usize) -> Result<bool, LinFeasError> {
        loop {
            if *iter_budget == 0 {
                return Err(LinFeasError::Indeterminate("simplex iteration cap".into()));
            }
            *iter_budget -= 1;
            let entering = (0..allowed).find(|&j| self.cost[j] < -PIVOT_EPS);
            let Some(col) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > PIVOT_EPS {
                    let ratio = self.rows[i][self.ncols] / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((bi, br)) => {
                            if ratio < br - 1e-12
                                || (ratio <= br + 1e-12 && self.basis[i] < self.basis[bi])
                            {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((row, _)) = leave else {
                return Ok(false);
            };
            self.pivot(row, col);
        }
    }
}

fn verify_witness(sys: &LinearConstraintSystem, x: &[f64]) -> bool {
    sys.constraints.iter().all(|c| {
        let lhs: f64 = c.coeffs.iter().zip(x).map(|(a, b)| a * b).sum();
        match c.relation {
            Relation::Ge => lhs >= c.bound - WITNESS_TOL,
            Relation::Le => lhs <= c.bound + WITNESS_TOL,
            Relation::Eq => (lhs - c.bound).abs() <= WITNESS_TOL,
        }
    })
}

/// Decide feasibility of the closed system, and minimize the objective if
/// one is present.
pub fn feasible(sys: &LinearConstraintSystem) -> FeasibilityResult {
    let n = sys.n;
    if n == 0 {
        return FeasibilityResult {
            status: Status::Indeterminate("system has no variables".into()),
            optimum: None,
        };
    }
    for c in &sys.constraints {
        if c.coeffs.len() != n || !c.bound.is_finite() || c.coeffs.iter().any(|v| !v.is_finite()) {
            return FeasibilityResult {
                status: Status::Indeterminate("malformed constraint".into()),
                optimum: None,
            };
        }
    }
    if sys.objective.as_ref().is_some_and(|obj| obj.len() != n) {
        return FeasibilityResult {
            status: Status::Indeterminate("objective length mismatch".into()),
            optimum: None,
        };
    }
    if sys.constraints.is_empty() {
        let x = vec![0.0; n];
        let optimum = sys.objective.as_ref().map(|_| (0.0, x.clone()));
        return FeasibilityResult { status: Status::Feasible(x), optimum };
    }

    // Free vars become u - v; inequality rows gain a slack; every row gets
    // an artificial for phase 1.
    let m = sys.constraints.len();
    let n_slack = sys
        .constraints
        .iter()
        .filter(|c| c.relation != Relation::Eq)
        .count();
    let ncols_real = 2 * n + n_slack;
    let ncols = ncols_real + m;
    let mut rows = vec![vec![0.0; ncols + 1]; m];
    let mut slack_idx = 2 * n;
    for (i, c) in sys.constraints.iter().enumerate() {
        let flip = c.bound < 0.0;
        let sign = if flip { -1.0 } else { 1.0 };
        for j in 0..n {
            rows[i][j] = sign * c.coeffs[j];
            rows[i][n + j] = -sign * c.coeffs[j];
        }
        match c.relation {
            Relation::Le => {
                rows[i][slack_idx] = sign;
                slack_idx += 1;
            }
            Relation::Ge => {
                rows[i][slack_idx] = -sign;
                slack_idx += 1;
            }
            Relation::Eq => {}
        }
        rows[i][ncols_real + i] = 1.0;
        rows[i][ncols] = sign * c.bound;
    }

    let mut tab = Tableau {
        rows,
        cost: vec![0.0; ncols + 1],
        basis: (ncols_real..ncols).collect(),
        ncols,
    };
    // phase-1 cost: sum of artificials, reduced over the artificial basis
    for j in 0..=ncols {
        let col_sum: f64 = tab.rows.iter().map(|r| r[j]).sum();
        tab.cost[j] = if (ncols_real..ncols).contains(&j) { 1.0 - col_sum } else { -col_sum };
    }

    let mut iter_budget = MAX_ITER;
    match tab.run(ncols, &mut iter_budget) {
        Err(e) => {
            return FeasibilityResult {
                status: Status::Indeterminate(e.to_string()),
                optimum: None,
            }
        }
        Ok(false) => {
            return FeasibilityResult {
                status: Status::Indeterminate("phase-1 unbounded".into()),
                optimum: None,
            }
        }
        Ok(true) => {}
    }
    let phase1_value = -tab.cost[ncols];
    if phase1_value > PHASE1_GRAY {
        return FeasibilityResult { status: Status::Infeasible, optimum: None };
    }
    if phase1_value > PHASE1_FEASIBLE {
        return FeasibilityResult {
            status: Status::Indeterminate(format!(
                "phase-1 optimum {phase1_value:.3e} in the numerical gray zone"
            )),
            optimum: None,
        };
    }

    // Drive basic artificials out; rows where that is impossible are
    // redundant and harmless (the artificial stays basic at zero and is
    // barred from re-entering).
    for i in 0..m {
        if tab.basis[i] >= ncols_real {
            if let Some(col) = (0..ncols_real).find(|&j| tab.rows[i][j].abs() > PIVOT_EPS) {
                tab.pivot(i, col);
            }
        }
    }

    let extract = |tab: &Tableau| -> Vec<f64> {
        let mut full = vec![0.0; ncols];
        for (i, &b) in tab.basis.iter().enumerate() {
            full[b] = tab.rows[i][ncols];
        }
        (0..n).map(|j| full[j] - full[n + j]).collect()
    };

    let witness = extract(&tab);
    if !verify_witness(sys, &witness) {
        return FeasibilityResult {
            status: Status::Indeterminate("phase-1 witness failed verification".into()),
            optimum: None,
        };
    }

    let Some(obj) = &sys.objective else {
        return FeasibilityResult { status: Status::Feasible(witness), optimum: None };
    };

    // phase 2: reduced costs of the real objective over the current basis
    let mut cost = vec![0.0; ncols + 1];
    for j in 0..n {
        cost[j] = obj[j];
        cost[n + j] = -obj[j];
    }
    for (i, &b) in tab.basis.iter().enumerate() {
        let cb = cost[b];
        if cb != 0.0 {
            let row = tab.rows[i].clone();
            for (v, p) in cost.iter_mut().zip(&row) {
                *v -= cb * p;
            }
        }
    }
    tab.cost = cost;
    match tab.run(ncols_real, &mut iter_budget) {
        Err(e) => FeasibilityResult {
            status: Status::Indeterminate(e.to_string()),
            optimum: None,
        },
        Ok(false) => FeasibilityResult { status: Status::Feasible(witness), optimum: None },
        Ok(true) => {
            let x = extract(&tab);
            if !verify_witness(sys, &x) {
                return FeasibilityResult {
                    status: Status::Indeterminate("phase-2 witness failed verification".into()),
                    optimum: None,
                };
            }
            let value: f64 = obj.iter().zip(&x).map(|(a, b)| a * b).sum();
            FeasibilityResult { status: Status::Feasible(x.clone()), optimum: Some((value, x)) }
        }
    }
}

/// Best fit of `target` by a box-constrained combination of `columns`:
/// minimizes the max-norm residual `|| sum_j k_j col_j - target ||_inf`
/// over `k_j` in the closed hull of `boxes[j]`. Returns the coefficients
/// and the residual.
pub fn box_fit(
    columns: &[Vec<f64>],
    boxes: &[PositiveInterval],
    target: &[f64],
) -> Result<(Vec<f64>, f64), LinFeasError> {
    assert_eq!(columns.len(), boxes.len(), "one box per column");
    let dim = target.len();
    if columns.is_empty() {
        let resid = target.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        return Ok((Vec::new(), resid));
    }
    let nk = columns.len();
    let nvar = nk + 1; // k_0..k_{nk-1}, t
    let mut obj = vec![0.0; nvar];
    obj[nk] = 1.0;
    let mut sys = LinearConstraintSystem::minimize(nvar, obj);
    for i in 0..dim {
        let mut up = vec![0.0; nvar];
        let mut dn = vec![0.0; nvar];
        for (j, col) in columns.iter().enumerate() {
            up[j] = col[i];
            dn[j] = col[i];
        }
        up[nk] = -1.0;
        dn[nk] = 1.0;
        sys.push(up, Relation::Le, target[i]);
        sys.push(dn, Relation::Ge, target[i]);
    }
    for (j, b) in boxes.iter().enumerate() {
        let mut lo = vec![0.0; nvar];
        lo[j] = 1.0;
        sys.push(lo.clone(), Relation::Ge, b.lo);
        if b.hi.is_finite() {
            sys.push(lo, Relation::Le, b.hi);
        }
    }
    let mut tpos = vec![0.0; nvar];
    tpos[nk] = 1.0;
    sys.push(tpos, Relation::Ge, 0.0);

    let result = feasible(&sys);
    match result.status {
        Status::Feasible(_) => {
            let (value, point) = result.optimum.ok_or_else(|| {
                LinFeasError::Indeterminate("box fit objective unbounded".into())
            })?;
            Ok((point[..nk].to_vec(), value.max(0.0)))
        }
        Status::Infeasible => Err(LinFeasError::Indeterminate(
            "box fit reported infeasible, which contradicts box nonemptiness".into(),
        )),
        Status::Indeterminate(msg) => Err(LinFeasError::Indeterminate(msg)),
    }
}
