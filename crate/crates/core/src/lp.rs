//! Exact linear programming over the rationals.
//!
//! Problems are stated over named variables that are either nonnegative or
//! free, with equality rows and `≤` rows. [`solve`] converts the problem to
//! standard form (free variables split into a positive and a negative part,
//! one slack per `≤` row) and runs a two-phase dense tableau simplex with
//! Bland's rule. Every pivot is exact, so the returned status is exact and the
//! returned witnesses satisfy the constraints with zero tolerance.
//!
//! Strict inequalities are not expressible; callers normalise instead (for
//! example by requiring a set of multipliers to sum to one).

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(usize);

impl VarId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    NonNegative,
    Free,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Maximize,
    Minimize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub sign: Sign,
}

/// `Σ coeff·var (= or ≤) rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub terms: Vec<(VarId, Rational)>,
    pub rhs: Rational,
}

impl Row {
    fn lhs(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &x[v.0])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub direction: Direction,
    pub terms: Vec<(VarId, Rational)>,
}

impl Objective {
    pub fn value(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, c)| acc + c * &x[v.0])
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LpProblem {
    variables: Vec<Variable>,
    equalities: Vec<Row>,
    inequalities: Vec<Row>,
    objective: Option<Objective>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    /// Returned when the problem has no objective.
    Feasible { witness: Vec<Rational> },
    Bounded {
        value: Rational,
        witness: Vec<Rational>,
    },
    /// `point + t·ray` is feasible for every `t ≥ 0` and the objective
    /// improves strictly along `ray`.
    Unbounded {
        point: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

impl LpOutcome {
    pub fn witness(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Feasible { witness } | LpOutcome::Bounded { witness, .. } => Some(witness),
            LpOutcome::Unbounded { point, .. } => Some(point),
            LpOutcome::Infeasible => None,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("linear program declares no variables")]
    NoVariables,
    #[error("row references undeclared variable #{0}")]
    UndeclaredVariable(usize),
}

impl LpProblem {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, name: impl Into<String>, sign: Sign) -> VarId {
        self.variables.push(Variable {
            name: name.into(),
            sign,
        });
        VarId(self.variables.len() - 1)
    }

    pub fn add_eq(&mut self, terms: Vec<(VarId, Rational)>, rhs: Rational) {
        self.equalities.push(Row { terms, rhs });
    }

    pub fn add_le(&mut self, terms: Vec<(VarId, Rational)>, rhs: Rational) {
        self.inequalities.push(Row { terms, rhs });
    }

    /// `Σ terms ≥ rhs`, stored as `-Σ terms ≤ -rhs`.
    pub fn add_ge(&mut self, terms: Vec<(VarId, Rational)>, rhs: Rational) {
        let terms = terms.into_iter().map(|(v, c)| (v, -c)).collect();
        self.inequalities.push(Row { terms, rhs: -rhs });
    }

    pub fn set_objective(&mut self, direction: Direction, terms: Vec<(VarId, Rational)>) {
        self.objective = Some(Objective { direction, terms });
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn equalities(&self) -> &[Row] {
        &self.equalities
    }

    pub fn inequalities(&self) -> &[Row] {
        &self.inequalities
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    fn validate(&self) -> Result<(), LpError> {
        if self.variables.is_empty() {
            return Err(LpError::NoVariables);
        }
        let n = self.variables.len();
        let rows = self.equalities.iter().chain(&self.inequalities);
        let obj = self.objective.iter().flat_map(|o| o.terms.iter());
        for (v, _) in rows.flat_map(|r| r.terms.iter()).chain(obj) {
            if v.0 >= n {
                return Err(LpError::UndeclaredVariable(v.0));
            }
        }
        Ok(())
    }

    /// Exact check that `x` satisfies every sign constraint and row.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.variables.len()
            && self
                .variables
                .iter()
                .zip(x)
                .all(|(v, xi)| v.sign == Sign::Free || !xi.is_negative())
            && self.equalities.iter().all(|r| r.lhs(x) == r.rhs)
            && self.inequalities.iter().all(|r| r.lhs(x) <= r.rhs)
    }

    /// Exact check that `ray` is a recession direction that strictly improves
    /// the objective.
    pub fn is_improving_ray(&self, ray: &[Rational]) -> bool {
        let Some(obj) = &self.objective else {
            return false;
        };
        let gain = obj.value(ray);
        let improves = match obj.direction {
            Direction::Maximize => gain.is_positive(),
            Direction::Minimize => gain.is_negative(),
        };
        ray.len() == self.variables.len()
            && improves
            && self
                .variables
                .iter()
                .zip(ray)
                .all(|(v, r)| v.sign == Sign::Free || !r.is_negative())
            && self.equalities.iter().all(|r| r.lhs(ray).is_zero())
            && self.inequalities.iter().all(|r| !r.lhs(ray).is_positive())
    }
}

/// Solves `problem` exactly. Deterministic: identical problems give
/// identical outcomes.
pub fn solve(problem: &LpProblem) -> Result<LpOutcome, LpError> {
    problem.validate()?;
    let standard = StandardForm::build(problem);
    let mut tableau = Tableau::phase_one(&standard);
    tableau.optimize();
    if !tableau.objective_value().is_zero() {
        return Ok(LpOutcome::Infeasible);
    }
    tableau.drive_out_artificials(standard.structural);

    let Some(objective) = &problem.objective else {
        let witness = standard.recover(&tableau.basic_solution());
        return Ok(LpOutcome::Feasible { witness });
    };

    // Phase two minimises, so a maximisation is negated.
    let mut costs = vec![Rational::zero(); standard.structural];
    for (v, c) in &objective.terms {
        let c = match objective.direction {
            Direction::Maximize => -c,
            Direction::Minimize => c.clone(),
        };
        let (pos, neg) = standard.columns[v.0];
        costs[pos] += &c;
        if let Some(neg) = neg {
            costs[neg] -= &c;
        }
    }
    tableau.set_costs(&costs);
    match tableau.optimize() {
        Pivoting::Optimal => {
            let witness = standard.recover(&tableau.basic_solution());
            let value = objective.value(&witness);
            Ok(LpOutcome::Bounded { value, witness })
        }
        Pivoting::Unbounded(entering) => {
            let point = standard.recover(&tableau.basic_solution());
            let ray = standard.recover(&tableau.ray(entering));
            Ok(LpOutcome::Unbounded { point, ray })
        }
    }
}

/// `A x = b, x ≥ 0, b ≥ 0` over the structural columns.
struct StandardForm {
    /// Per original variable: (positive column, negative column if free).
    columns: Vec<(usize, Option<usize>)>,
    /// Number of structural columns (split variables plus slacks).
    structural: usize,
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    /// Column that can start basic in a row (a slack with coefficient +1).
    initial_basic: Vec<Option<usize>>,
}

impl StandardForm {
    fn build(problem: &LpProblem) -> Self {
        let mut columns = Vec::with_capacity(problem.variables.len());
        let mut next = 0;
        for v in &problem.variables {
            match v.sign {
                Sign::NonNegative => {
                    columns.push((next, None));
                    next += 1;
                }
                Sign::Free => {
                    columns.push((next, Some(next + 1)));
                    next += 2;
                }
            }
        }
        let first_slack = next;
        let structural = first_slack + problem.inequalities.len();

        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        let mut initial_basic = Vec::new();
        let all_rows = problem
            .equalities
            .iter()
            .map(|r| (r, None))
            .chain(
                problem
                    .inequalities
                    .iter()
                    .enumerate()
                    .map(|(i, r)| (r, Some(first_slack + i))),
            );
        for (row, slack) in all_rows {
            let mut dense = vec![Rational::zero(); structural];
            for (v, c) in &row.terms {
                let (pos, neg) = columns[v.0];
                dense[pos] += c;
                if let Some(neg) = neg {
                    dense[neg] -= c;
                }
            }
            if let Some(s) = slack {
                dense[s] = Rational::one();
            }
            let mut b = row.rhs.clone();
            let flip = b.is_negative();
            if flip {
                for d in &mut dense {
                    *d = -&*d;
                }
                b = -b;
            }
            initial_basic.push(slack.filter(|_| !flip));
            rows.push(dense);
            rhs.push(b);
        }
        Self {
            columns,
            structural,
            rows,
            rhs,
            initial_basic,
        }
    }

    fn recover(&self, x: &[Rational]) -> Vec<Rational> {
        self.columns
            .iter()
            .map(|&(pos, neg)| match neg {
                Some(neg) => &x[pos] - &x[neg],
                None => x[pos].clone(),
            })
            .collect()
    }
}

enum Pivoting {
    Optimal,
    Unbounded(usize),
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs per column.
    reduced: Vec<Rational>,
    /// Negated objective value of the current basis.
    neg_value: Rational,
    /// Columns at or past this index are never chosen to enter.
    enterable: usize,
}

impl Tableau {
    /// Builds the auxiliary problem minimising the sum of artificial
    /// variables; rows with a ready slack do not get one.
    fn phase_one(sf: &StandardForm) -> Self {
        let m = sf.rows.len();
        let artificial_rows: Vec<usize> = (0..m).filter(|&i| sf.initial_basic[i].is_none()).collect();
        let width = sf.structural + artificial_rows.len();
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = sf.structural;
        for i in 0..m {
            let mut row = sf.rows[i].clone();
            row.resize(width, Rational::zero());
            match sf.initial_basic[i] {
                Some(s) => basis.push(s),
                None => {
                    row[art] = Rational::one();
                    basis.push(art);
                    art += 1;
                }
            }
            rows.push(row);
        }
        let mut costs = vec![Rational::zero(); width];
        for c in &mut costs[sf.structural..] {
            *c = Rational::one();
        }
        let mut t = Self {
            rows,
            rhs: sf.rhs.clone(),
            basis,
            reduced: Vec::new(),
            neg_value: Rational::zero(),
            enterable: width,
        };
        t.set_costs(&costs);
        t
    }

    fn width(&self) -> usize {
        self.reduced.len()
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let width = self.rows.first().map_or(costs.len(), Vec::len);
        let mut reduced: Vec<Rational> = (0..width)
            .map(|j| costs.get(j).cloned().unwrap_or_else(Rational::zero))
            .collect();
        let mut neg_value = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs.get(b).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (r, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *r -= &cb * a;
                }
            }
            neg_value -= &cb * &self.rhs[i];
        }
        self.reduced = reduced;
        self.neg_value = neg_value;
    }

    fn objective_value(&self) -> Rational {
        -&self.neg_value
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for a in &mut self.rows[r] {
            if !a.is_zero() {
                *a *= &inv;
            }
        }
        self.rhs[r] *= &inv;
        let pivot_row = core::mem::take(&mut self.rows[r]);
        let pivot_rhs = self.rhs[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (a, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
            self.rhs[i] -= &factor * &pivot_rhs;
        }
        let factor = self.reduced[c].clone();
        if !factor.is_zero() {
            for (a, p) in self.reduced.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *a -= &factor * p;
                }
            }
            self.neg_value -= &factor * &pivot_rhs;
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Bland's rule: lowest-index improving column enters; among the rows
    /// tied in the ratio test, the one whose basic variable has the lowest
    /// index leaves.
    fn optimize(&mut self) -> Pivoting {
        loop {
            let Some(c) = (0..self.enterable.min(self.width())).find(|&j| self.reduced[j].is_negative())
            else {
                return Pivoting::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return Pivoting::Unbounded(c),
            }
        }
    }

    /// After a zero-cost phase one, pivots remaining artificial variables out
    /// of the basis, drops redundant rows, and truncates artificial columns.
    fn drive_out_artificials(&mut self, structural: usize) {
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] < structural {
                i += 1;
                continue;
            }
            match (0..structural).find(|&j| !self.rows[i][j].is_zero()) {
                Some(j) => {
                    self.pivot(i, j);
                    i += 1;
                }
                None => {
                    self.rows.remove(i);
                    self.rhs.remove(i);
                    self.basis.remove(i);
                }
            }
        }
        for row in &mut self.rows {
            row.truncate(structural);
        }
        self.reduced.truncate(structural);
        self.enterable = structural;
    }

    fn basic_solution(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.width()];
        for (i, &b) in self.basis.iter().enumerate() {
            x[b] = self.rhs[i].clone();
        }
        x
    }

    fn ray(&self, entering: usize) -> Vec<Rational> {
        let mut d = vec![Rational::zero(); self.width()];
        d[entering] = Rational::one();
        for (i, &b) in self.basis.iter().enumerate() {
            d[b] = -&self.rows[i][entering];
        }
        d
    }
}
