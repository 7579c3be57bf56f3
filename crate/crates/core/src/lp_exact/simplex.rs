use super::{Basis, LinearProgram, LpSolution, LpStatus, Rational, StandardForm};
use crate::error::Result;

/// Dense tableau over the standard form plus phase-1 artificial columns.
struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Standard-form row each tableau row came from.
    origin: Vec<usize>,
    /// Reduced costs of the current phase.
    reduced: Vec<Rational>,
    /// Current objective value of the phase.
    value: Rational,
    /// Columns allowed to enter the basis.
    eligible: Vec<bool>,
    /// The initial basis columns, in row order, for lexicographic ratio ties.
    lex_cols: Vec<usize>,
    pivots: usize,
}

enum Outcome {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, e: usize) {
        self.pivots += 1;
        let mut prow = std::mem::take(&mut self.rows[r]);
        let mut prhs = std::mem::take(&mut self.rhs[r]);
        let p = prow[e].clone();
        if !p.is_one() {
            let inv = p.recip();
            for a in prow.iter_mut().filter(|a| !a.is_zero()) {
                *a = &*a * &inv;
            }
            prhs = &prhs * &inv;
        }
        let nz: Vec<usize> = (0..prow.len()).filter(|&j| !prow[j].is_zero()).collect();

        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[e].is_zero() {
                continue;
            }
            let f = row[e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                row[j] -= &d;
            }
            let d = &f * &prhs;
            self.rhs[i] -= &d;
        }
        if !self.reduced[e].is_zero() {
            let f = self.reduced[e].clone();
            for &j in &nz {
                let d = &f * &prow[j];
                self.reduced[j] -= &d;
            }
            self.value += &(&f * &prhs);
        }
        self.rows[r] = prow;
        self.rhs[r] = prhs;
        self.basis[r] = e;
    }

    /// Whether row `a` is lexicographically smaller than row `b` after
    /// scaling each by its entry in column `e`, over the initial basis columns.
    fn lex_less(&self, a: usize, b: usize, e: usize) -> bool {
        let (pa, pb) = (&self.rows[a][e], &self.rows[b][e]);
        for &c in &self.lex_cols {
            let (x, y) = (&self.rows[a][c] / pa, &self.rows[b][c] / pb);
            if x != y {
                return x < y;
            }
        }
        self.basis[a] < self.basis[b]
    }

    /// Dantzig's rule (most negative reduced cost, lowest index on ties) with
    /// a lexicographic ratio test, which cannot cycle. Bland's rule takes over
    /// after a long run of degenerate pivots as a safety net.
    fn run(&mut self) -> Outcome {
        const STALL_LIMIT: usize = 5000;
        let mut stalled = 0usize;
        loop {
            let entering = if stalled < STALL_LIMIT {
                let mut best: Option<usize> = None;
                for j in 0..self.reduced.len() {
                    if self.eligible[j]
                        && self.reduced[j].is_negative()
                        && best.is_none_or(|b| self.reduced[j] < self.reduced[b])
                    {
                        best = Some(j);
                    }
                }
                best
            } else {
                (0..self.reduced.len()).find(|&j| self.eligible[j] && self.reduced[j].is_negative())
            };
            let Some(e) = entering else {
                return Outcome::Optimal;
            };
            let bland = stalled >= STALL_LIMIT;
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][e];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv
                            || (ratio == *bv
                                && if bland { self.basis[r] < self.basis[*br] } else { self.lex_less(r, *br, e) })
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, ratio)) => {
                    if ratio.is_zero() {
                        stalled += 1;
                    } else {
                        stalled = 0;
                    }
                    self.pivot(r, e)
                }
                None => return Outcome::Unbounded,
            }
        }
    }

    fn set_phase_costs(&mut self, cost: &[Rational]) {
        let width = self.rows.first().map_or(cost.len(), Vec::len);
        let mut reduced: Vec<Rational> = (0..width).map(|j| cost.get(j).cloned().unwrap_or_default()).collect();
        let mut value = Rational::ZERO;
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost.get(b).cloned().unwrap_or_default();
            if cb.is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    reduced[j] -= &(&cb * a);
                }
            }
            value += &(&cb * &self.rhs[r]);
        }
        self.reduced = reduced;
        self.value = value;
    }
}

/// Two-phase primal simplex in exact arithmetic. Deterministic: the same LP
/// (same ordering) always yields the same basis and values.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    solve_inner(lp, None)
}

/// Like [`solve`], but among the optimal points prefers one minimising
/// `secondary` (one cost per variable). The extra pivots only use columns of
/// zero reduced cost, so the final basis still certifies the primary optimum.
pub fn solve_with_tiebreak(lp: &LinearProgram, secondary: &[Rational]) -> Result<LpSolution> {
    if secondary.len() != lp.num_variables() {
        return Err(crate::Error::LengthMismatch { expected: lp.num_variables(), got: secondary.len() });
    }
    solve_inner(lp, Some(secondary))
}

fn solve_inner(lp: &LinearProgram, secondary: Option<&[Rational]>) -> Result<LpSolution> {
    lp.validate()?;
    let sf = StandardForm::build(lp);
    let m = sf.rows.len();
    let ncols = sf.num_cols();

    let needs_art: Vec<usize> = (0..m).filter(|&r| sf.unit_slack[r].is_none()).collect();
    let width = ncols + needs_art.len();
    let mut rows = vec![vec![Rational::ZERO; width]; m];
    let mut basis = vec![0; m];
    for (r, coeffs) in sf.rows.iter().enumerate() {
        for (j, a) in coeffs {
            rows[r][*j] = a.clone();
        }
        if let Some(s) = sf.unit_slack[r] {
            basis[r] = s;
        }
    }
    for (k, &r) in needs_art.iter().enumerate() {
        rows[r][ncols + k] = Rational::ONE;
        basis[r] = ncols + k;
    }

    let mut t = Tableau {
        rows,
        rhs: sf.rhs.clone(),
        basis,
        origin: (0..m).collect(),
        reduced: Vec::new(),
        value: Rational::ZERO,
        eligible: vec![true; width],
        lex_cols: Vec::new(),
        pivots: 0,
    };
    t.lex_cols = t.basis.clone();

    if !needs_art.is_empty() {
        let mut phase1 = vec![Rational::ZERO; width];
        for c in phase1.iter_mut().skip(ncols) {
            *c = Rational::ONE;
        }
        t.set_phase_costs(&phase1);
        t.run();
        if t.value.is_positive() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective: Rational::ZERO,
                basis: Basis::default(),
                pivots: t.pivots,
            });
        }
        // Drive zero-valued artificials out; rows with no other entry are redundant.
        let mut r = 0;
        while r < t.rows.len() {
            if t.basis[r] >= ncols {
                if let Some(j) = (0..ncols).find(|&j| !t.rows[r][j].is_zero()) {
                    t.pivot(r, j);
                } else {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    t.origin.remove(r);
                    continue;
                }
            }
            r += 1;
        }
    }

    let width = t.eligible.len();
    t.eligible = (0..width).map(|j| j < ncols).collect();
    t.set_phase_costs(&sf.cost);
    if let Outcome::Unbounded = t.run() {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: Rational::ZERO,
            basis: Basis::default(),
            pivots: t.pivots,
        });
    }
    if let Some(sec) = secondary {
        // columns with positive reduced cost stay at zero on the optimal face
        t.eligible = (0..width).map(|j| j < ncols && t.reduced[j].is_zero()).collect();
        let mut cost = vec![Rational::ZERO; ncols];
        cost[..sec.len()].clone_from_slice(sec);
        t.set_phase_costs(&cost);
        // an unbounded secondary ray leaves the current optimal vertex in place
        t.run();
    }

    let mut values = vec![Rational::ZERO; sf.n_struct];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < sf.n_struct {
            values[b] = t.rhs[r].clone();
        }
    }
    let objective = lp.objective(&values);
    debug_assert!(secondary.is_some() || objective == t.value);
    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective,
        basis: Basis { rows: t.origin, cols: t.basis },
        pivots: t.pivots,
    })
}
