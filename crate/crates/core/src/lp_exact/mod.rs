//! Exact rational linear programming.
//!
//! Problems are minimisations over nonnegative variables with `=`, `<=` and
//! `>=` rows. [`solve`] runs a two-phase tableau simplex (Dantzig pricing,
//! lexicographic ratio test); optimal answers carry the final basis so
//! [`verify_optimal`] can rebuild a dual certificate independently of the
//! tableau.

mod rational;
mod simplex;
mod text;

pub use rational::{ParseRationalError, Rational};
pub use simplex::{solve, solve_with_tiebreak};
pub use text::{format_point, parse_point};

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    Eq,
    Le,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "=",
            Relation::Le => "<=",
            Relation::Ge => ">=",
        }
    }

    fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Variable {
    pub name: String,
    pub role: String,
    pub cost: Rational,
    /// Lower bound is always 0.
    pub upper: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    pub fn lhs(&self, values: &[Rational]) -> Rational {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero()).map(|(j, c)| c * &values[*j]).sum()
    }

    pub fn is_satisfied(&self, values: &[Rational]) -> bool {
        self.relation.holds(&self.lhs(values), &self.rhs)
    }
}

/// `min c.x` subject to the constraints and `0 <= x <= upper`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    vars: Vec<Variable>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(&mut self, name: impl Into<String>, role: impl Into<String>, cost: Rational) -> usize {
        self.vars.push(Variable { name: name.into(), role: role.into(), cost, upper: None });
        self.vars.len() - 1
    }

    pub fn set_upper(&mut self, var: usize, upper: Rational) {
        self.vars[var].upper = Some(upper);
    }

    pub fn set_cost(&mut self, var: usize, cost: Rational) {
        self.vars[var].cost = cost;
    }

    pub fn add_constraint(&mut self, coeffs: Vec<(usize, Rational)>, relation: Relation, rhs: Rational) -> usize {
        self.constraints.push(Constraint { coeffs, relation, rhs });
        self.constraints.len() - 1
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn num_variables(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v.name == name)
    }

    /// Rejects out-of-range or repeated column references and unusable names.
    pub fn validate(&self) -> Result<()> {
        let n = self.vars.len();
        for (r, c) in self.constraints.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for (j, _) in &c.coeffs {
                if *j >= n {
                    return Err(Error::MalformedLp(format!("constraint {r} references column {j} of {n}")));
                }
                if !seen.insert(*j) {
                    return Err(Error::MalformedLp(format!("constraint {r} repeats column {j}")));
                }
            }
        }
        for v in &self.vars {
            if v.name.is_empty() || v.name.contains(char::is_whitespace) {
                return Err(Error::MalformedLp(format!("bad variable name {:?}", v.name)));
            }
        }
        Ok(())
    }

    pub fn objective(&self, values: &[Rational]) -> Rational {
        self.vars.iter().zip(values).filter(|(v, _)| !v.cost.is_zero()).map(|(v, x)| &v.cost * x).sum()
    }

    /// Indices of constraints (and, offset by the constraint count, variable
    /// bounds) violated by `values`.
    pub fn violations(&self, values: &[Rational]) -> Vec<usize> {
        let mut out: Vec<usize> =
            self.constraints.iter().enumerate().filter(|(_, c)| !c.is_satisfied(values)).map(|(r, _)| r).collect();
        for (j, (v, x)) in self.vars.iter().zip(values).enumerate() {
            if x.is_negative() || v.upper.as_ref().is_some_and(|u| x > u) {
                out.push(self.constraints.len() + j);
            }
        }
        out
    }

    /// Exact feasibility of `values` including bounds.
    pub fn is_feasible(&self, values: &[Rational]) -> bool {
        values.len() == self.vars.len() && self.violations(values).is_empty()
    }

    /// Values for every column from `(name, value)` pairs; absent names are 0.
    pub fn point_from_named(&self, named: &[(String, Rational)]) -> Result<Vec<Rational>> {
        let index: std::collections::HashMap<&str, usize> =
            self.vars.iter().enumerate().map(|(j, v)| (v.name.as_str(), j)).collect();
        let mut values = vec![Rational::ZERO; self.vars.len()];
        for (name, value) in named {
            let j = index.get(name.as_str()).ok_or_else(|| Error::MalformedLp(format!("unknown variable {name:?}")))?;
            values[*j] = value.clone();
        }
        Ok(values)
    }

    pub fn named_point(&self, values: &[Rational]) -> Vec<(String, Rational)> {
        self.vars.iter().zip(values).map(|(v, x)| (v.name.clone(), x.clone())).collect()
    }

    pub fn to_text(&self) -> String {
        text::format_lp(self)
    }

    pub fn parse(text: &str) -> Result<Self> {
        text::parse_lp(text)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl fmt::Display for LpStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LpStatus::Optimal => "optimal",
            LpStatus::Infeasible => "infeasible",
            LpStatus::Unbounded => "unbounded",
        })
    }
}

/// Final basis over the standard form: `cols[r]` is basic in standard row
/// `rows[r]`. Rows found redundant during phase 1 are absent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Basis {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    pub values: Vec<Rational>,
    pub objective: Rational,
    pub basis: Basis,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

/// Equality form `A x = b`, `b >= 0`, `x >= 0`: structural columns first,
/// then one slack/surplus column per inequality row (upper bounds become
/// `<=` rows appended after the explicit constraints).
/// Coefficients, relation and right-hand side of one constraint.
type RawRow = (Vec<(usize, Rational)>, Relation, Rational);

pub(crate) struct StandardForm {
    pub rows: Vec<Vec<(usize, Rational)>>,
    pub rhs: Vec<Rational>,
    pub cost: Vec<Rational>,
    pub n_struct: usize,
    /// Column of the `+1` slack in each row, if any (usable as a starting basis).
    pub unit_slack: Vec<Option<usize>>,
}

impl StandardForm {
    pub fn num_cols(&self) -> usize {
        self.cost.len()
    }

    pub fn build(lp: &LinearProgram) -> Self {
        let n = lp.vars.len();
        let mut raw: Vec<RawRow> = lp
            .constraints
            .iter()
            .map(|c| {
                let coeffs = c.coeffs.iter().filter(|(_, a)| !a.is_zero()).cloned().collect();
                (coeffs, c.relation, c.rhs.clone())
            })
            .collect();
        for (j, v) in lp.vars.iter().enumerate() {
            if let Some(u) = &v.upper {
                raw.push((vec![(j, Rational::ONE)], Relation::Le, u.clone()));
            }
        }
        let mut cost: Vec<Rational> = lp.vars.iter().map(|v| v.cost.clone()).collect();
        let mut rows = Vec::with_capacity(raw.len());
        let mut rhs = Vec::with_capacity(raw.len());
        let mut unit_slack = Vec::with_capacity(raw.len());
        for (mut coeffs, mut rel, mut b) in raw {
            if b.is_negative() {
                for (_, a) in coeffs.iter_mut() {
                    *a = -&*a;
                }
                b = -b;
                rel = match rel {
                    Relation::Le => Relation::Ge,
                    Relation::Ge => Relation::Le,
                    Relation::Eq => Relation::Eq,
                };
            }
            let mut slack = None;
            match rel {
                Relation::Eq => {}
                Relation::Le => {
                    coeffs.push((cost.len(), Rational::ONE));
                    slack = Some(cost.len());
                    cost.push(Rational::ZERO);
                }
                Relation::Ge => {
                    coeffs.push((cost.len(), -Rational::ONE));
                    cost.push(Rational::ZERO);
                }
            }
            rows.push(coeffs);
            rhs.push(b);
            unit_slack.push(slack);
        }
        Self { rows, rhs, cost, n_struct: n, unit_slack }
    }

    /// Structural values extended with the implied slack values.
    fn extend_point(&self, values: &[Rational]) -> Vec<Rational> {
        let mut x = values.to_vec();
        x.resize(self.num_cols(), Rational::ZERO);
        for (r, row) in self.rows.iter().enumerate() {
            if let Some((sc, sa)) = row.iter().find(|(j, _)| *j >= self.n_struct) {
                let lhs: Rational = row.iter().filter(|(j, _)| *j < self.n_struct).map(|(j, a)| a * &values[*j]).sum();
                // a_s * s = rhs - lhs
                x[*sc] = &(&self.rhs[r] - &lhs) / sa;
            }
        }
        x
    }
}

/// Solve the square system `M y = v` exactly; `None` when singular.
fn solve_square(mut m: Vec<Vec<Rational>>, mut v: Vec<Rational>) -> Option<Vec<Rational>> {
    let k = v.len();
    for col in 0..k {
        let piv = (col..k).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        v.swap(col, piv);
        let inv = m[col][col].recip();
        for a in &mut m[col][col..k] {
            *a = &*a * &inv;
        }
        v[col] = &v[col] * &inv;
        for r in 0..k {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let (pivot_row, row) = if r < col {
                    let (lo, hi) = m.split_at_mut(col);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = m.split_at_mut(r);
                    (&lo[col], &mut hi[0])
                };
                for (a, p) in row[col..k].iter_mut().zip(&pivot_row[col..k]) {
                    if !p.is_zero() {
                        *a -= &(&f * p);
                    }
                }
                let d = &f * &v[col];
                v[r] -= &d;
            }
        }
    }
    Some(v)
}

/// Checks an optimal solution against `lp` from scratch: exact primal
/// feasibility, consistency of the values with the reported basis, and a
/// dual vector from that basis with nonnegative reduced costs on every
/// standard-form column and matching objective.
pub fn verify_optimal(lp: &LinearProgram, sol: &LpSolution) -> bool {
    if sol.status != LpStatus::Optimal || sol.values.len() != lp.num_variables() {
        return false;
    }
    if !lp.is_feasible(&sol.values) || lp.objective(&sol.values) != sol.objective {
        return false;
    }
    let sf = StandardForm::build(lp);
    let basis = &sol.basis;
    let k = basis.rows.len();
    if basis.cols.len() != k {
        return false;
    }
    let mut seen = std::collections::HashSet::new();
    if basis.cols.iter().any(|&c| c >= sf.num_cols() || !seen.insert(c))
        || basis.rows.iter().any(|&r| r >= sf.rows.len())
    {
        return false;
    }
    let x = sf.extend_point(&sol.values);
    if (0..sf.num_cols()).any(|j| !seen.contains(&j) && !x[j].is_zero()) {
        return false;
    }

    // B^T y = c_B, B[r][c] = A[rows[r]][cols[c]]
    let row_pos: std::collections::HashMap<usize, usize> =
        basis.cols.iter().enumerate().map(|(p, &c)| (c, p)).collect();
    let mut bt = vec![vec![Rational::ZERO; k]; k];
    for (r, &sr) in basis.rows.iter().enumerate() {
        for (j, a) in &sf.rows[sr] {
            if let Some(&p) = row_pos.get(j) {
                bt[p][r] = a.clone();
            }
        }
    }
    let cb: Vec<Rational> = basis.cols.iter().map(|&c| sf.cost[c].clone()).collect();
    let Some(y) = solve_square(bt, cb) else {
        return false;
    };

    let mut reduced = sf.cost.clone();
    for (r, &sr) in basis.rows.iter().enumerate() {
        if y[r].is_zero() {
            continue;
        }
        for (j, a) in &sf.rows[sr] {
            reduced[*j] -= &(&y[r] * a);
        }
    }
    if reduced.iter().any(Rational::is_negative) {
        return false;
    }
    let dual_obj: Rational = basis.rows.iter().zip(&y).map(|(&sr, yr)| yr * &sf.rhs[sr]).sum();
    dual_obj == sol.objective
}

/// Whether every listed variable is exactly 0 or 1.
pub fn is_integral(sol: &LpSolution, vars: &[usize]) -> bool {
    vars.iter().all(|&j| {
        let v = &sol.values[j];
        v.is_zero() || v.is_one()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn one() -> Rational {
        Rational::ONE
    }

    // min x1 s.t. x1 + x2 = 1
    fn simple() -> LinearProgram {
        let mut lp = LinearProgram::new();
        let x1 = lp.add_variable("x1", "x", one());
        let x2 = lp.add_variable("x2", "x", Rational::ZERO);
        lp.add_constraint(vec![(x1, one()), (x2, one())], Relation::Eq, one());
        lp
    }

    #[test]
    fn solve_examples() {
        let lp = simple();
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.objective, Rational::ZERO);
        assert_eq!(sol.values, vec![Rational::ZERO, one()]);
        assert!(verify_optimal(&lp, &sol));

        let mut lp = LinearProgram::new();
        lp.add_variable("x1", "x", -one());
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);

        // x1 + x2 = 1, x1 - x2 = 3 forces x2 = -1
        let mut lp = LinearProgram::new();
        let x1 = lp.add_variable("x1", "x", one());
        let x2 = lp.add_variable("x2", "x", one());
        lp.set_upper(x1, one());
        lp.set_upper(x2, one());
        lp.add_constraint(vec![(x1, one()), (x2, one())], Relation::Eq, one());
        lp.add_constraint(vec![(x1, one()), (x2, -one())], Relation::Eq, r("3"));
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn tiebreak_picks_secondary_minimum_on_optimal_face() {
        // min 0 over x1 + x2 = 1: every point is optimal
        let mut lp = LinearProgram::new();
        let x1 = lp.add_variable("x1", "x", Rational::ZERO);
        let x2 = lp.add_variable("x2", "x", Rational::ZERO);
        let x3 = lp.add_variable("x3", "x", one());
        lp.add_constraint(vec![(x1, one()), (x2, one()), (x3, one())], Relation::Eq, one());
        let sol = solve_with_tiebreak(&lp, &[Rational::ZERO, one(), -one()]).unwrap();
        // x3 has positive primary reduced cost, so the secondary cannot pull it in
        assert_eq!(sol.values, vec![one(), Rational::ZERO, Rational::ZERO]);
        assert_eq!(sol.objective, Rational::ZERO);
        assert!(verify_optimal(&lp, &sol));
        assert!(solve_with_tiebreak(&lp, &[one()]).is_err());
    }

    #[test]
    fn perturbed_solution_fails_verification() {
        let lp = simple();
        let mut sol = solve(&lp).unwrap();
        sol.values[1] = r("1/2");
        assert!(!verify_optimal(&lp, &sol));
    }

    // min -x1 - x2 s.t. x1 + 2 x2 <= 4, 3 x1 + x2 <= 6. Optimum at (8/5, 6/5)
    // with value -14/5; the vertex (2, 0) is feasible but has reduced cost
    // -2/3 on x2 (computed by hand from the basis {x1, s1}).
    #[test]
    fn suboptimal_vertex_fails_verification() {
        let mut lp = LinearProgram::new();
        let x1 = lp.add_variable("x1", "x", -one());
        let x2 = lp.add_variable("x2", "x", -one());
        lp.add_constraint(vec![(x1, one()), (x2, r("2"))], Relation::Le, r("4"));
        lp.add_constraint(vec![(x1, r("3")), (x2, one())], Relation::Le, r("6"));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.objective, r("-14/5"));
        assert_eq!(sol.values, vec![r("8/5"), r("6/5")]);
        assert!(verify_optimal(&lp, &sol));

        // slack columns are 2 (row 0) and 3 (row 1)
        let bad = LpSolution {
            status: LpStatus::Optimal,
            values: vec![r("2"), Rational::ZERO],
            objective: r("-2"),
            basis: Basis { rows: vec![0, 1], cols: vec![2, 0] },
            pivots: 0,
        };
        assert!(lp.is_feasible(&bad.values));
        assert!(!verify_optimal(&lp, &bad));
    }

    #[test]
    fn integrality() {
        let sol = LpSolution {
            status: LpStatus::Optimal,
            values: vec![Rational::ZERO, one(), one(), Rational::ZERO, r("1/2")],
            objective: Rational::ZERO,
            basis: Basis::default(),
            pivots: 0,
        };
        assert!(is_integral(&sol, &[0, 1, 2, 3]));
        assert!(!is_integral(&sol, &[0, 4]));
        assert!(is_integral(&sol, &[]));
    }

    #[test]
    fn ge_rows_and_negative_rhs() {
        // min x + y s.t. x + y >= 2, -x <= -1/2  (x >= 1/2)
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", "x", one());
        let y = lp.add_variable("y", "x", r("2"));
        lp.add_constraint(vec![(x, one()), (y, one())], Relation::Ge, r("2"));
        lp.add_constraint(vec![(x, -one())], Relation::Le, r("-1/2"));
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.objective, r("2"));
        assert_eq!(sol.values, vec![r("2"), Rational::ZERO]);
        assert!(verify_optimal(&lp, &sol));
    }

    #[test]
    fn redundant_rows_are_dropped() {
        // x + y = 1 stated twice, plus 2x + 2y = 2
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", "x", r("-1"));
        let y = lp.add_variable("y", "x", r("1/3"));
        for s in ["1", "1", "2"] {
            lp.add_constraint(vec![(x, r(s)), (y, r(s))], Relation::Eq, r(s));
        }
        let sol = solve(&lp).unwrap();
        assert_eq!(sol.values, vec![one(), Rational::ZERO]);
        assert_eq!(sol.basis.rows.len(), 1);
        assert!(verify_optimal(&lp, &sol));
    }

    #[test]
    fn malformed_lp_rejected() {
        let mut lp = simple();
        lp.add_constraint(vec![(7, one())], Relation::Le, one());
        assert!(matches!(solve(&lp), Err(Error::MalformedLp(_))));
        let mut lp = simple();
        lp.add_constraint(vec![(0, one()), (0, one())], Relation::Le, one());
        assert!(solve(&lp).is_err());
    }
}
