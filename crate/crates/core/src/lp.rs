//! Exact linear programming over [`Rational`].
//!
//! A two-phase primal simplex on a dictionary (only the nonbasic columns are
//! stored), with native equality rows and artificial variables. Every
//! optimal solve materializes a primal point and a dual vector; the pair is
//! re-checkable with [`verify_certificates`] using nothing but the original
//! program.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Eq => Relation::Eq,
            Relation::Ge => Relation::Le,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VarBound {
    /// `x >= 0`.
    NonNegative,
    /// `x >= l`.
    Lower(Rational),
    Free,
}

impl VarBound {
    fn lower(&self) -> Option<Rational> {
        match self {
            VarBound::NonNegative => Some(Rational::zero()),
            VarBound::Lower(l) => Some(l.clone()),
            VarBound::Free => None,
        }
    }
}

/// A sparse row `sum coeffs (rel) rhs`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn eval(&self, x: &[Rational]) -> Rational {
        self.coeffs.iter().map(|(j, a)| a * &x[*j]).sum()
    }

    pub fn is_satisfied(&self, x: &[Rational]) -> bool {
        let lhs = self.eval(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBound>,
    /// Optional display names, used by [`LinearProgram::to_lp_text`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub names: Option<Vec<String>>,
}

impl LinearProgram {
    /// A program over `num_vars` nonnegative variables with zero objective.
    pub fn new(num_vars: usize, sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective: vec![Rational::zero(); num_vars],
            constraints: Vec::new(),
            bounds: vec![VarBound::NonNegative; num_vars],
            names: None,
        }
    }

    /// A program whose variables are all free.
    pub fn new_free(num_vars: usize, sense: Sense) -> Self {
        LinearProgram { bounds: vec![VarBound::Free; num_vars], ..Self::new(num_vars, sense) }
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_objective(&mut self, objective: Vec<Rational>) -> Result<()> {
        if objective.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "objective has {} entries for {} variables",
                objective.len(),
                self.num_vars()
            )));
        }
        self.objective = objective;
        Ok(())
    }

    pub fn add_constraint(
        &mut self,
        coeffs: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        if let Some((j, _)) = coeffs.iter().find(|(j, _)| *j >= self.num_vars()) {
            return Err(Error::DimensionMismatch(format!(
                "coefficient for variable {j} in a program with {} variables",
                self.num_vars()
            )));
        }
        self.constraints.push(Constraint::new(coeffs, relation, rhs));
        Ok(())
    }

    /// Adds a dense row.
    pub fn add_dense_constraint(
        &mut self,
        row: &[Rational],
        relation: Relation,
        rhs: Rational,
    ) -> Result<()> {
        if row.len() != self.num_vars() {
            return Err(Error::DimensionMismatch(format!(
                "row has {} entries for {} variables",
                row.len(),
                self.num_vars()
            )));
        }
        let coeffs =
            row.iter().enumerate().filter(|(_, a)| !a.is_zero()).map(|(j, a)| (j, a.clone()));
        self.add_constraint(coeffs.collect(), relation, rhs)
    }

    fn validate(&self) -> Result<()> {
        let n = self.num_vars();
        if self.bounds.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{} bounds for {n} variables",
                self.bounds.len()
            )));
        }
        if let Some(names) = &self.names {
            if names.len() != n {
                return Err(Error::DimensionMismatch(format!("{} names for {n} variables", names.len())));
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= n) {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} references variable {j} of {n}"
                )));
            }
        }
        Ok(())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    fn var_name(&self, j: usize) -> String {
        match &self.names {
            Some(names) => names[j].clone(),
            None => format!("x{j}"),
        }
    }

    /// CPLEX-style LP text with exact fractional coefficients.
    pub fn to_lp_text(&self) -> String {
        let mut s = String::new();
        let term = |s: &mut String, first: bool, a: &Rational, name: &str| {
            let sign = if a.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = a.abs();
            let sep = if first && sign.is_empty() { "" } else { " " };
            if mag == Rational::one() {
                let _ = write!(s, " {sign}{sep}{name}");
            } else {
                let _ = write!(s, " {sign}{sep}{mag} {name}");
            }
        };
        s.push_str(match self.sense {
            Sense::Maximize => "Maximize\n obj:",
            Sense::Minimize => "Minimize\n obj:",
        });
        let mut first = true;
        for (j, c) in self.objective.iter().enumerate() {
            if !c.is_zero() {
                term(&mut s, first, c, &self.var_name(j));
                first = false;
            }
        }
        if first {
            s.push_str(" 0");
        }
        s.push_str("\nSubject To\n");
        for (i, c) in self.constraints.iter().enumerate() {
            let _ = write!(s, " c{i}:");
            let mut first = true;
            for (j, a) in &c.coeffs {
                if !a.is_zero() {
                    term(&mut s, first, a, &self.var_name(*j));
                    first = false;
                }
            }
            if first {
                s.push_str(" 0");
            }
            let _ = writeln!(s, " {} {}", c.relation.symbol(), c.rhs);
        }
        s.push_str("Bounds\n");
        for (j, b) in self.bounds.iter().enumerate() {
            match b {
                VarBound::NonNegative => {}
                VarBound::Lower(l) => {
                    let _ = writeln!(s, " {} >= {}", self.var_name(j), l);
                }
                VarBound::Free => {
                    let _ = writeln!(s, " {} free", self.var_name(j));
                }
            }
        }
        s.push_str("End\n");
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Primal/dual certificate pair. `primal`, `dual` and `objective` are only
/// meaningful when the status is optimal.
///
/// Dual sign conventions follow the program's sense: for a maximization,
/// `<=` rows carry `y >= 0` and `>=` rows `y <= 0`; a minimization mirrors
/// this. Equality rows are free.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSolution {
    pub status: LpStatus,
    pub primal: Vec<Rational>,
    pub dual: Vec<Rational>,
    pub objective: Option<Rational>,
    pub pivots: usize,
}

/// Entering-variable rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotRule {
    /// Smallest index with negative reduced cost, throughout.
    Bland,
    /// Most negative reduced cost; falls back to Bland's rule during runs of
    /// degenerate pivots so that the method cannot cycle.
    #[default]
    DantzigWithBlandFallback,
}

const DEGENERATE_RUN_BEFORE_BLAND: usize = 8;

pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_with(lp, PivotRule::default())
}

pub fn solve_with(lp: &LinearProgram, rule: PivotRule) -> Result<LpSolution> {
    lp.validate()?;
    let std = StandardForm::build(lp);
    let mut pivots = 0;

    let mut dict = Dictionary::new(&std);
    match dict.solve(&std, rule, &mut pivots) {
        None => Ok(LpSolution::without_point(LpStatus::Infeasible, pivots)),
        Some(false) => Ok(LpSolution::without_point(LpStatus::Unbounded, pivots)),
        Some(true) => {
            let (primal, dual, objective) = std.extract(lp, &dict);
            Ok(LpSolution { status: LpStatus::Optimal, primal, dual, objective: Some(objective), pivots })
        }
    }
}

impl LpSolution {
    fn without_point(status: LpStatus, pivots: usize) -> Self {
        LpSolution { status, primal: Vec::new(), dual: Vec::new(), objective: None, pivots }
    }
}

/// Internal maximization `max c.x, rows (rel) b >= 0, x >= 0`.
struct StandardForm {
    /// Internal columns per original variable: `(column, sign)` pairs.
    columns_of: Vec<Vec<(usize, i8)>>,
    /// Column count including surplus columns.
    ncols: usize,
    cost: Vec<Rational>,
    rows: Vec<Vec<(usize, Rational)>>,
    rhs: Vec<Rational>,
    /// +1 or -1: how each original row was scaled.
    row_sign: Vec<i8>,
    /// Relation of the normalized row.
    relation: Vec<Relation>,
    has_artificials: bool,
    /// Objective constant from lower-bound shifts.
    shift_value: Rational,
}

impl StandardForm {
    fn build(lp: &LinearProgram) -> StandardForm {
        let flip = lp.sense == Sense::Minimize;
        let mut columns_of = Vec::with_capacity(lp.num_vars());
        let mut cost = Vec::new();
        for (j, b) in lp.bounds.iter().enumerate() {
            let c = if flip { -&lp.objective[j] } else { lp.objective[j].clone() };
            match b {
                VarBound::Free => {
                    columns_of.push(vec![(cost.len(), 1), (cost.len() + 1, -1)]);
                    cost.push(c.clone());
                    cost.push(-c);
                }
                _ => {
                    columns_of.push(vec![(cost.len(), 1)]);
                    cost.push(c);
                }
            }
        }
        let structural = cost.len();
        let lower: Vec<Option<Rational>> = lp.bounds.iter().map(VarBound::lower).collect();
        let shift_value: Rational = lp
            .objective
            .iter()
            .zip(&lower)
            .filter_map(|(c, l)| l.as_ref().map(|l| c * l))
            .sum();

        let mut rows = Vec::with_capacity(lp.constraints.len());
        let mut rhs = Vec::new();
        let mut row_sign = Vec::new();
        let mut relation = Vec::new();
        let mut surplus_rows = Vec::new();
        for con in &lp.constraints {
            let mut b = con.rhs.clone();
            let mut row: Vec<(usize, Rational)> = Vec::new();
            for (j, a) in &con.coeffs {
                if a.is_zero() {
                    continue;
                }
                if let Some(l) = &lower[*j] {
                    b -= &(a * l);
                }
                for &(col, sign) in &columns_of[*j] {
                    let v = if sign > 0 { a.clone() } else { -a };
                    row.push((col, v));
                }
            }
            let mut rel = con.relation;
            let negate = b.is_negative() || (b.is_zero() && rel == Relation::Ge);
            if negate {
                b = -b;
                rel = rel.flipped();
                for e in row.iter_mut() {
                    e.1 = -&e.1;
                }
            }
            row_sign.push(if negate { -1 } else { 1 });
            relation.push(rel);
            if rel == Relation::Ge {
                surplus_rows.push(rows.len());
            }
            rows.push(row);
            rhs.push(b);
        }
        let mut ncols = structural;
        for &i in &surplus_rows {
            rows[i].push((ncols, -Rational::one()));
            cost.push(Rational::zero());
            ncols += 1;
        }
        let has_artificials = relation.iter().any(|r| *r != Relation::Le);
        StandardForm {
            columns_of,
            ncols,
            cost,
            rows,
            rhs,
            row_sign,
            relation,
            has_artificials,
            shift_value,
        }
    }

    fn is_artificial(&self, var: usize) -> bool {
        var >= self.ncols && self.relation[var - self.ncols] != Relation::Le
    }

    fn cost_of(&self, var: usize) -> Rational {
        if var < self.ncols {
            self.cost[var].clone()
        } else {
            Rational::zero()
        }
    }

    fn extract(
        &self,
        lp: &LinearProgram,
        dict: &Dictionary,
    ) -> (Vec<Rational>, Vec<Rational>, Rational) {
        let mut value = vec![Rational::zero(); self.ncols + self.rows.len()];
        for (i, &var) in dict.basis.iter().enumerate() {
            value[var] = dict.b[i].clone();
        }
        let primal: Vec<Rational> = lp
            .bounds
            .iter()
            .enumerate()
            .map(|(j, bound)| {
                let mut x: Rational = self.columns_of[j]
                    .iter()
                    .map(|&(col, sign)| if sign > 0 { value[col].clone() } else { -&value[col] })
                    .sum();
                if let Some(l) = bound.lower() {
                    x += &l;
                }
                x
            })
            .collect();

        let mut reduced = vec![Rational::zero(); self.ncols + self.rows.len()];
        for (j, &var) in dict.nonbasic.iter().enumerate() {
            reduced[var] = dict.d[j].clone();
        }
        let dual = (0..self.rows.len())
            .map(|i| {
                let y = &reduced[self.ncols + i];
                let y = if self.row_sign[i] < 0 { -y } else { y.clone() };
                if lp.sense == Sense::Minimize {
                    -y
                } else {
                    y
                }
            })
            .collect();
        let internal = &dict.z0 + &self.shift_value_internal(lp);
        let objective = if lp.sense == Sense::Minimize { -internal } else { internal };
        debug_assert_eq!(objective, lp.objective_value(&primal));
        (primal, dual, objective)
    }

    fn shift_value_internal(&self, lp: &LinearProgram) -> Rational {
        if lp.sense == Sense::Minimize {
            -&self.shift_value
        } else {
            self.shift_value.clone()
        }
    }
}

/// Arithmetic the dictionary needs. `f64` is only ever used to guess a
/// basis; every reported number comes from the exact instance.
/// Rows `x_B[i] + sum_j a[i][j] x_N[j] = b[i]`; objective row
/// `z + sum_j d[j] x_N[j] = z0`.
struct Dictionary {
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
    basis: Vec<usize>,
    nonbasic: Vec<usize>,
    d: Vec<Rational>,
    z0: Rational,
    /// Nonbasic columns that may never enter (artificials).
    blocked: Vec<bool>,
    /// Artificial flag by variable id.
    artificial: Vec<bool>,
}

impl Dictionary {
    fn new(std: &StandardForm) -> Dictionary {
        let m = std.rows.len();
        let nonbasic: Vec<usize> = (0..std.ncols).collect();
        let mut a = vec![vec![Rational::zero(); std.ncols]; m];
        for (i, row) in std.rows.iter().enumerate() {
            for (col, v) in row {
                a[i][*col] += v;
            }
        }
        Dictionary {
            a,
            b: std.rhs.clone(),
            basis: (std.ncols..std.ncols + m).collect(),
            nonbasic,
            d: vec![Rational::zero(); std.ncols],
            z0: Rational::zero(),
            blocked: vec![false; std.ncols],
            artificial: (0..std.ncols + m).map(|v| std.is_artificial(v)).collect(),
        }
    }

    fn load_phase_one(&mut self) {
        // maximize -(sum of artificials)
        self.z0 = Rational::zero();
        for d in self.d.iter_mut() {
            *d = Rational::zero();
        }
        for (i, &var) in self.basis.iter().enumerate() {
            if self.artificial[var] {
                self.z0 -= &self.b[i];
                for (j, a) in self.a[i].iter().enumerate() {
                    if !a.is_zero() {
                        self.d[j] -= a;
                    }
                }
            }
        }
    }

    fn load_phase_two(&mut self, std: &StandardForm) {
        let cb: Vec<Rational> = self.basis.iter().map(|&v| std.cost_of(v)).collect();
        self.z0 = cb.iter().zip(&self.b).fold(Rational::zero(), |acc, (c, b)| &acc + &(c * b));
        for (j, &var) in self.nonbasic.iter().enumerate() {
            let mut d = -std.cost_of(var);
            for (i, c) in cb.iter().enumerate() {
                if !c.is_zero() && !self.a[i][j].is_zero() {
                    d += &(c * &self.a[i][j]);
                }
            }
            self.d[j] = d;
            self.blocked[j] = self.artificial[var];
        }
    }

    /// Pivots to optimality. Returns false when the objective is unbounded.
    /// In phase one the run ends as soon as every artificial is zero.
    fn run(&mut self, rule: PivotRule, pivots: &mut usize, phase_one: bool) -> bool {
        let mut degenerate_run = 0usize;
        loop {
            if phase_one && self.z0.is_zero() {
                return true;
            }
            let use_bland =
                rule == PivotRule::Bland || degenerate_run >= DEGENERATE_RUN_BEFORE_BLAND;
            let Some(s) = self.entering(use_bland) else {
                return true;
            };
            let Some(r) = self.leaving(s) else {
                return false;
            };
            if self.b[r].is_zero() {
                degenerate_run += 1;
            } else {
                degenerate_run = 0;
            }
            self.pivot(r, s);
            *pivots += 1;
        }
    }

    fn entering(&self, bland: bool) -> Option<usize> {
        let candidates = self
            .d
            .iter()
            .enumerate()
            .filter(|(j, d)| !self.blocked[*j] && d.is_negative());
        if bland {
            candidates.min_by_key(|(j, _)| self.nonbasic[*j]).map(|(j, _)| j)
        } else {
            candidates
                .min_by(|(j1, d1), (j2, d2)| {
                    d1.cmp(d2).then(self.nonbasic[*j1].cmp(&self.nonbasic[*j2]))
                })
                .map(|(j, _)| j)
        }
    }

    /// Minimum-ratio row for entering column `s`; ties go to the smallest
    /// basic variable index.
    fn leaving(&self, s: usize) -> Option<usize> {
        let mut best: Option<(usize, Rational)> = None;
        for (i, row) in self.a.iter().enumerate() {
            let a = &row[s];
            if !a.is_positive() {
                continue;
            }
            let ratio = &self.b[i] * &a.recip();
            let better = match &best {
                None => true,
                Some((r, br)) => match ratio.cmp(br) {
                    std::cmp::Ordering::Less => true,
                    std::cmp::Ordering::Equal => self.basis[i] < self.basis[*r],
                    std::cmp::Ordering::Greater => false,
                },
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, r: usize, s: usize) {
        let p_inv = self.a[r][s].recip();
        // New pivot row.
        {
            let row = &mut self.a[r];
            for (j, v) in row.iter_mut().enumerate() {
                if j != s && !v.is_zero() {
                    *v = &*v * &p_inv;
                }
            }
            row[s] = p_inv.clone();
            self.b[r] = &self.b[r] * &p_inv;
        }
        let pivot_row = std::mem::take(&mut self.a[r]);
        let support: Vec<usize> =
            (0..pivot_row.len()).filter(|&j| j != s && !pivot_row[j].is_zero()).collect();
        let b_r = self.b[r].clone();

        let eliminate = |row: &mut Vec<Rational>, rhs: &mut Rational| {
            let f = row[s].clone();
            if f.is_zero() {
                row[s] = Rational::zero();
                return;
            }
            for &j in &support {
                row[j] -= &(&f * &pivot_row[j]);
            }
            row[s] = -(&f * &p_inv);
            if !b_r.is_zero() {
                *rhs -= &(&f * &b_r);
            }
        };
        for i in 0..self.a.len() {
            if i != r {
                let (row, rhs) = (&mut self.a[i], &mut self.b[i]);
                eliminate(row, rhs);
            }
        }
        eliminate(&mut self.d, &mut self.z0);
        self.a[r] = pivot_row;

        std::mem::swap(&mut self.basis[r], &mut self.nonbasic[s]);
        // An artificial that leaves the basis never re-enters.
        self.blocked[s] = self.artificial[self.nonbasic[s]];
    }

    fn drive_out_artificials(&mut self, pivots: &mut usize) {
        for r in 0..self.basis.len() {
            if !self.artificial[self.basis[r]] {
                continue;
            }
            let col = (0..self.nonbasic.len())
                .filter(|&j| !self.artificial[self.nonbasic[j]] && !self.a[r][j].is_zero())
                .min_by_key(|&j| self.nonbasic[j]);
            if let Some(s) = col {
                self.pivot(r, s);
                *pivots += 1;
            }
            // Otherwise the row is redundant; its artificial stays basic at zero.
        }
    }

    /// Phase one (when needed) then phase two. `None` means infeasible,
    /// `Some(false)` unbounded.
    fn solve(&mut self, std: &StandardForm, rule: PivotRule, pivots: &mut usize) -> Option<bool> {
        if std.has_artificials {
            self.load_phase_one();
            self.run(rule, pivots, true);
            if self.z0.is_negative() {
                return None;
            }
            self.drive_out_artificials(pivots);
        }
        self.load_phase_two(std);
        Some(self.run(rule, pivots, false))
    }
}

/// Re-checks an optimal solution against the original program: primal
/// feasibility, dual feasibility, and equality of the two objectives, all
/// exactly.
pub fn verify_certificates(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.status != LpStatus::Optimal || lp.validate().is_err() {
        return false;
    }
    let Some(objective) = &sol.objective else {
        return false;
    };
    let x = &sol.primal;
    let y = &sol.dual;
    if x.len() != lp.num_vars() || y.len() != lp.constraints.len() {
        return false;
    }
    // Primal feasibility.
    for (xj, b) in x.iter().zip(&lp.bounds) {
        if let Some(l) = b.lower() {
            if *xj < l {
                return false;
            }
        }
    }
    if !lp.constraints.iter().all(|c| c.is_satisfied(x)) {
        return false;
    }
    if lp.objective_value(x) != *objective {
        return false;
    }
    // Dual feasibility, written for a maximization; a minimization is the
    // maximization of the negated objective with negated duals.
    let max = lp.sense == Sense::Maximize;
    for (yi, c) in y.iter().zip(&lp.constraints) {
        let y_max = if max { yi.clone() } else { -yi };
        let ok = match c.relation {
            Relation::Le => !y_max.is_negative(),
            Relation::Ge => !y_max.is_positive(),
            Relation::Eq => true,
        };
        if !ok {
            return false;
        }
    }
    let mut aty = vec![Rational::zero(); lp.num_vars()];
    for (yi, c) in y.iter().zip(&lp.constraints) {
        if yi.is_zero() {
            continue;
        }
        for (j, a) in &c.coeffs {
            aty[*j] += &(a * yi);
        }
    }
    let mut dual_objective: Rational =
        y.iter().zip(&lp.constraints).map(|(yi, c)| yi * &c.rhs).sum();
    for (j, bound) in lp.bounds.iter().enumerate() {
        // Reduced cost in the "slack >= 0" orientation for either sense.
        let r = if max { &aty[j] - &lp.objective[j] } else { &lp.objective[j] - &aty[j] };
        match bound.lower() {
            None => {
                if !r.is_zero() {
                    return false;
                }
            }
            Some(l) => {
                if r.is_negative() {
                    return false;
                }
                if max {
                    dual_objective -= &(&l * &r);
                } else {
                    dual_objective += &(&l * &r);
                }
            }
        }
    }
    dual_objective == *objective
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn int(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn single_variable_bound() {
        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.set_objective(vec![int(1)]).unwrap();
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1)).unwrap();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Some(int(1)));
        assert!(verify_certificates(&lp, &sol));
    }

    #[test]
    fn binding_sum_constraint() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(vec![int(1), int(1)]).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Le, r(3, 2)).unwrap();
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1)).unwrap();
        lp.add_constraint(vec![(1, int(1))], Relation::Le, int(1)).unwrap();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.objective, Some(r(3, 2)));
        assert!(verify_certificates(&lp, &sol));
    }

    #[test]
    fn infeasible_and_unbounded_are_statuses() {
        let mut lp = LinearProgram::new(1, Sense::Maximize);
        lp.add_constraint(vec![(0, int(1))], Relation::Ge, int(2)).unwrap();
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(1)).unwrap();
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(vec![int(1), int(0)]).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(-1))], Relation::Le, int(1)).unwrap();
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        assert!(matches!(
            lp.add_constraint(vec![(2, int(1))], Relation::Le, int(1)),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(lp.set_objective(vec![int(1)]).is_err());
        lp.bounds.pop();
        assert!(matches!(solve(&lp), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn equalities_free_variables_and_minimization() {
        // min x - y  s.t. x + y = 4, x - 2y >= -2, y <= 3, x free, y >= 1/2
        let mut lp = LinearProgram::new(2, Sense::Minimize);
        lp.bounds = vec![VarBound::Free, VarBound::Lower(r(1, 2))];
        lp.set_objective(vec![int(1), int(-1)]).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(4)).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(-2))], Relation::Ge, int(-2)).unwrap();
        lp.add_constraint(vec![(1, int(1))], Relation::Le, int(3)).unwrap();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        // y = 2 from x - 2y >= -2 with x = 4 - y.
        assert_eq!(sol.primal, vec![int(2), int(2)]);
        assert_eq!(sol.objective, Some(int(0)));
        assert!(verify_certificates(&lp, &sol));
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(vec![int(1), int(2)]).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Eq, int(1)).unwrap();
        lp.add_constraint(vec![(0, int(2)), (1, int(2))], Relation::Eq, int(2)).unwrap();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.objective, Some(int(2)));
        assert!(verify_certificates(&lp, &sol));
    }

    #[test]
    fn perturbed_certificates_fail() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.set_objective(vec![int(3), int(2)]).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(1))], Relation::Le, int(4)).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(3))], Relation::Le, int(6)).unwrap();
        lp.add_constraint(vec![(0, int(1))], Relation::Le, int(3)).unwrap();
        let sol = solve(&lp).unwrap();
        assert!(verify_certificates(&lp, &sol));

        let mut bad = sol.clone();
        bad.primal[0] = &bad.primal[0] + &int(1);
        assert!(!verify_certificates(&lp, &bad));

        let mut bad = sol.clone();
        bad.objective = Some(sol.objective.clone().unwrap() + int(1));
        assert!(!verify_certificates(&lp, &bad));

        let mut bad = sol.clone();
        bad.dual[0] = &bad.dual[0] + &int(1);
        assert!(!verify_certificates(&lp, &bad));
    }

    #[test]
    fn both_pivot_rules_agree() {
        let mut lp = LinearProgram::new(3, Sense::Maximize);
        lp.set_objective(vec![int(2), int(3), int(1)]).unwrap();
        lp.add_constraint(vec![(0, int(1)), (1, int(1)), (2, int(1))], Relation::Le, int(10))
            .unwrap();
        lp.add_constraint(vec![(0, int(2)), (1, int(1))], Relation::Le, int(8)).unwrap();
        lp.add_constraint(vec![(1, int(1)), (2, int(3))], Relation::Ge, int(3)).unwrap();
        let a = solve_with(&lp, PivotRule::Bland).unwrap();
        let b = solve_with(&lp, PivotRule::DantzigWithBlandFallback).unwrap();
        assert_eq!(a.objective, b.objective);
        assert!(verify_certificates(&lp, &a));
        assert!(verify_certificates(&lp, &b));
    }

    #[test]
    fn lp_text_lists_rows_and_bounds() {
        let mut lp = LinearProgram::new(2, Sense::Maximize);
        lp.bounds[1] = VarBound::Free;
        lp.set_objective(vec![int(1), r(-1, 3)]).unwrap();
        lp.add_constraint(vec![(0, r(1, 2)), (1, int(1))], Relation::Eq, int(1)).unwrap();
        let text = lp.to_lp_text();
        assert_eq!(
            text,
            "Maximize\n obj: x0 - 1/3 x1\nSubject To\n c0: 1/2 x0 + x1 = 1\nBounds\n x1 free\nEnd\n"
        );
    }

    /// Exact solve of a square system by Gaussian elimination.
    fn solve_square(mut rows: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
        let d = rows.len();
        for c in 0..d {
            let p = (c..d).find(|&i| !rows[i][c].is_zero())?;
            rows.swap(c, p);
            rhs.swap(c, p);
            for i in 0..d {
                if i != c && !rows[i][c].is_zero() {
                    let f = &rows[i][c] / &rows[c][c];
                    let pivot = rows[c].clone();
                    for (x, y) in rows[i].iter_mut().zip(&pivot) {
                        *x -= &(&f * y);
                    }
                    let t = &f * &rhs[c];
                    rhs[i] -= &t;
                }
            }
        }
        Some((0..d).map(|i| &rhs[i] / &rows[i][i]).collect())
    }

    /// Best objective over all basic feasible points, or `None` when no
    /// vertex is feasible. Valid for bounded programs over `x >= 0`.
    fn vertex_oracle(lp: &LinearProgram) -> Option<Rational> {
        let d = lp.num_vars();
        let mut planes: Vec<(Vec<Rational>, Rational)> = (0..d)
            .map(|j| ((0..d).map(|k| int((k == j) as i64)).collect(), int(0)))
            .collect();
        for c in &lp.constraints {
            let mut row = vec![int(0); d];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            planes.push((row, c.rhs.clone()));
        }
        let m = planes.len();
        let mut best: Option<Rational> = None;
        for pick in 0u32..1 << m {
            if pick.count_ones() as usize != d {
                continue;
            }
            let chosen: Vec<_> = (0..m).filter(|i| pick >> i & 1 == 1).collect();
            let rows = chosen.iter().map(|&i| planes[i].0.clone()).collect();
            let rhs = chosen.iter().map(|&i| planes[i].1.clone()).collect();
            let Some(x) = solve_square(rows, rhs) else { continue };
            if x.iter().any(Rational::is_negative)
                || !lp.constraints.iter().all(|c| c.is_satisfied(&x))
            {
                continue;
            }
            let z = lp.objective_value(&x);
            if best.as_ref().is_none_or(|b| z > *b) {
                best = Some(z);
            }
        }
        best
    }

    fn arb_bounded_lp() -> impl Strategy<Value = LinearProgram> {
        let coeff = -4i64..=4;
        (2usize..=3, 1usize..=4).prop_flat_map(move |(d, m)| {
            (
                proptest::collection::vec(coeff.clone(), d),
                proptest::collection::vec(
                    (proptest::collection::vec(coeff.clone(), d), 0u8..3, -6i64..=8),
                    m,
                ),
            )
                .prop_map(move |(obj, rows)| {
                    let mut lp = LinearProgram::new(d, Sense::Maximize);
                    lp.set_objective(obj.into_iter().map(int).collect()).unwrap();
                    for (coeffs, rel, rhs) in rows {
                        let rel = [Relation::Le, Relation::Ge, Relation::Eq][rel as usize];
                        let coeffs = coeffs.into_iter().enumerate().map(|(j, a)| (j, int(a))).collect();
                        lp.add_constraint(coeffs, rel, int(rhs)).unwrap();
                    }
                    // box keeps every instance bounded
                    for j in 0..d {
                        lp.add_constraint(vec![(j, int(1))], Relation::Le, int(5)).unwrap();
                    }
                    lp
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(300))]

        #[test]
        fn simplex_matches_vertex_enumeration(lp in arb_bounded_lp()) {
            let sol = solve(&lp).unwrap();
            match vertex_oracle(&lp) {
                None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
                Some(best) => {
                    prop_assert_eq!(sol.status, LpStatus::Optimal);
                    prop_assert_eq!(sol.objective.clone(), Some(best));
                    prop_assert!(verify_certificates(&lp, &sol));
                }
            }
        }
    }
}
