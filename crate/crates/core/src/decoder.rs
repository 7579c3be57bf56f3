//! LP decoding with the ML certificate, and the brute-force ML oracle.

use std::fmt;

use crate::channel::{word_cost, CostVector};
use crate::code::{EnumerationCaps, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::lp_exact::{is_integral, solve_with_tiebreak, verify_optimal, LpSolution, LpStatus, Rational};
use crate::polytopes::{build, PolytopeBuild, PolytopeKind};
use crate::ring::RingElement;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The LP optimum is integral; the word is an ML codeword.
    MlCertified(Vec<RingElement>),
    /// Fractional optimum: the `f` values `f[i][alpha - 1]`.
    Fractional(Vec<Vec<Rational>>),
    /// Build or solve failure.
    DeclaredError(String),
}

impl Outcome {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::MlCertified(_) => "ml-certified",
            Self::Fractional(_) => "fractional",
            Self::DeclaredError(_) => "declared-error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodeResult {
    pub outcome: Outcome,
    pub objective: Option<Rational>,
    pub polytope: PolytopeKind,
    pub variables: usize,
    pub constraints: usize,
    pub pivots: usize,
}

impl DecodeResult {
    fn error(polytope: PolytopeKind, msg: impl Into<String>) -> Self {
        Self {
            outcome: Outcome::DeclaredError(msg.into()),
            objective: None,
            polytope,
            variables: 0,
            constraints: 0,
            pivots: 0,
        }
    }

    pub fn word(&self) -> Option<&[RingElement]> {
        match &self.outcome {
            Outcome::MlCertified(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DecodeResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "outcome {}", self.outcome.tag())?;
        writeln!(f, "polytope {}", self.polytope)?;
        if let Some(obj) = &self.objective {
            writeln!(f, "objective {obj}")?;
        }
        match &self.outcome {
            Outcome::MlCertified(w) => {
                let codes: Vec<String> = w.iter().map(|v| v.code().to_string()).collect();
                writeln!(f, "word {}", codes.join(" "))?;
            }
            Outcome::Fractional(fv) => {
                for (i, block) in fv.iter().enumerate() {
                    let vals: Vec<String> = block.iter().map(|v| v.to_string()).collect();
                    writeln!(f, "f {i} {}", vals.join(" "))?;
                }
            }
            Outcome::DeclaredError(msg) => writeln!(f, "error {msg}")?,
        }
        writeln!(f, "size {} {}", self.variables, self.constraints)?;
        writeln!(f, "pivots {}", self.pivots)
    }
}

/// Solves the relaxation over the chosen polytope. Build and solver failures
/// are reported as [`Outcome::DeclaredError`] rather than as `Err`.
pub fn lp_decode(
    code: &ParityCheckMatrix,
    costs: &CostVector,
    polytope: PolytopeKind,
    caps: &EnumerationCaps,
) -> DecodeResult {
    let b = match build(polytope, code, costs, caps) {
        Ok(b) => b,
        Err(e) => return DecodeResult::error(polytope, format!("build failed: {e}")),
    };
    match solve_build(&b) {
        Ok(sol) => interpret(&b, costs, &sol),
        Err(e) => DecodeResult::error(polytope, format!("solve failed: {e}")),
    }
}

/// Solves a build's program; among tied optima the point with the least
/// total `f` mass wins, so zero costs decode to the all-zero word.
pub fn solve_build(build: &PolytopeBuild) -> Result<LpSolution> {
    let mut secondary = vec![Rational::ZERO; build.lp.num_variables()];
    for c in build.f_columns() {
        secondary[c] = Rational::ONE;
    }
    solve_with_tiebreak(&build.lp, &secondary)
}

/// Classifies a solution of `build`'s program.
pub fn interpret(build: &PolytopeBuild, costs: &CostVector, sol: &LpSolution) -> DecodeResult {
    let code = build.code();
    let mut res = DecodeResult {
        outcome: Outcome::DeclaredError(String::new()),
        objective: None,
        polytope: build.kind,
        variables: build.lp.num_variables(),
        constraints: build.lp.num_constraints(),
        pivots: sol.pivots,
    };
    if sol.status != LpStatus::Optimal {
        res.outcome = Outcome::DeclaredError(format!("relaxation is {}", sol.status));
        return res;
    }
    if !verify_optimal(&build.lp, sol) {
        res.outcome = Outcome::DeclaredError("optimality certificate rejected".into());
        return res;
    }
    res.objective = Some(sol.objective.clone());
    let fv = build.f_values(&sol.values);
    if !is_integral(sol, &build.f_columns()) {
        res.outcome = Outcome::Fractional(fv);
        return res;
    }
    let ring = code.ring();
    let mut word = Vec::with_capacity(fv.len());
    for block in &fv {
        let ones: Vec<usize> = (0..block.len()).filter(|&a| block[a].is_one()).collect();
        match ones[..] {
            [] => word.push(ring.zero()),
            [a] => word.push(ring.element(a as u16 + 1).expect("symbol in range")),
            _ => {
                res.outcome = Outcome::DeclaredError("integral point selects two symbols at one position".into());
                return res;
            }
        }
    }
    match (code.is_codeword(&word), word_cost(costs, &word)) {
        (Ok(true), Ok(c)) if c == sol.objective => res.outcome = Outcome::MlCertified(word),
        _ => res.outcome = Outcome::DeclaredError("integral point is not a consistent codeword".into()),
    }
    res
}

/// Cheapest codeword, first in lexicographic order among ties.
pub fn ml_brute_force(
    code: &ParityCheckMatrix,
    costs: &CostVector,
    caps: &EnumerationCaps,
) -> Result<(Vec<RingElement>, Rational)> {
    let mut best: Option<(Vec<RingElement>, Rational)> = None;
    for c in code.enumerate_codebook(caps)? {
        let cost = word_cost(costs, &c)?;
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((c, cost));
        }
    }
    Ok(best.expect("the zero word is always a codeword"))
}

/// Whether an ml-certified result is consistent: objective equals the word's
/// cost and no codeword is strictly cheaper.
pub fn certify(
    result: &DecodeResult,
    code: &ParityCheckMatrix,
    costs: &CostVector,
    caps: &EnumerationCaps,
) -> Result<bool> {
    let Outcome::MlCertified(word) = &result.outcome else {
        return Err(Error::precondition(format!("cannot certify a {} result", result.outcome.tag())));
    };
    if !code.is_codeword(word)? {
        return Ok(false);
    }
    let cost = word_cost(costs, word)?;
    if result.objective.as_ref() != Some(&cost) {
        return Ok(false);
    }
    let (_, best) = ml_brute_force(code, costs, caps)?;
    Ok(best >= cost)
}
