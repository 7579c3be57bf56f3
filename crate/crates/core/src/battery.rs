//! Seeded random instances, the cross-polytope equivalence suite, and the
//! Monte Carlo decoding harness.
//!
//! Every instance and trial draws from its own ChaCha stream (the suite seed
//! with the index as stream number), so results do not depend on scheduling
//! and reports are byte-for-byte reproducible.

use std::fmt::{self, Write as _};
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{ChannelModel, CostVector};
use crate::code::{EnumerationCaps, ParityCheckMatrix};
use crate::decoder::{interpret, lp_decode, ml_brute_force, solve_build, Outcome};
use crate::decomposition::{lift_u_to_q, push_q_to_u, DEFAULT_MU_CAP};
use crate::error::{Error, Result};
use crate::lp_exact::Rational;
use crate::polytopes::{build, CountReport, PolytopeBuild, PolytopeKind};
use crate::ring::{RingElement, RingSpec};

pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// A random parity-check matrix with `rows` checks over `n` columns whose
/// degrees lie in `degrees` and which together cover every column. Entries
/// are drawn from the units of the ring.
pub fn random_code<R: Rng + ?Sized>(
    ring: &RingSpec,
    n: usize,
    rows: usize,
    degrees: RangeInclusive<usize>,
    rng: &mut R,
) -> Result<ParityCheckMatrix> {
    let (lo, hi) = (*degrees.start(), (*degrees.end()).min(n));
    if n == 0 || rows == 0 || lo > hi || rows * hi < n {
        return Err(Error::precondition(format!("cannot cover {n} columns with {rows} checks of degree {lo}..={hi}")));
    }
    let units: Vec<u16> = ring.nonzero_elements().iter().map(|e| e.code()).filter(|&c| ring.is_unit_code(c)).collect();
    loop {
        let mut supports: Vec<Vec<usize>> = Vec::with_capacity(rows);
        for _ in 0..rows {
            let d = rng.random_range(lo..=hi);
            let mut cols: Vec<usize> = (0..n).collect();
            cols.shuffle(rng);
            cols.truncate(d);
            cols.sort_unstable();
            supports.push(cols);
        }
        let mut covered = vec![false; n];
        supports.iter().flatten().for_each(|&i| covered[i] = true);
        if !covered.iter().all(|&c| c) {
            continue;
        }
        let rows: Vec<Vec<u16>> = supports
            .iter()
            .map(|sup| {
                let mut row = vec![0u16; n];
                for &i in sup {
                    row[i] = units[rng.random_range(0..units.len())];
                }
                row
            })
            .collect();
        return ParityCheckMatrix::from_codes(ring.clone(), &rows);
    }
}

/// Costs `p/r` with `p` in `-12..=12` and `r` in `1..=6`.
pub fn random_costs<R: Rng + ?Sized>(n: usize, q: usize, rng: &mut R) -> CostVector {
    let values = (0..n)
        .map(|_| (1..q).map(|_| Rational::new(rng.random_range(-12..=12), rng.random_range(1..=6))).collect())
        .collect();
    CostVector::new(q - 1, values).expect("blocks have width q - 1")
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub instances: usize,
    pub costs_per_instance: usize,
    pub rings: Vec<RingSpec>,
    pub max_n: usize,
    pub max_m: usize,
    pub degrees: RangeInclusive<usize>,
    pub caps: EnumerationCaps,
}

impl SuiteConfig {
    pub fn standard(seed: u64) -> Self {
        Self {
            seed,
            instances: 60,
            costs_per_instance: 5,
            rings: vec![
                RingSpec::integers(2).expect("Z2"),
                RingSpec::integers(3).expect("Z3"),
                RingSpec::integers(4).expect("Z4"),
                RingSpec::galois_default(2, 2).expect("GF(4)"),
            ],
            max_n: 8,
            max_m: 3,
            degrees: 2..=5,
            caps: EnumerationCaps::default(),
        }
    }
}

/// Result of one cost vector on one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostCase {
    /// Optimal objective per polytope, in `PolytopeKind::ALL` order.
    pub objectives: Vec<Option<Rational>>,
    pub outcomes: Vec<&'static str>,
    /// Words of the ml-certified outcomes.
    pub certified: Vec<(PolytopeKind, Vec<RingElement>, Rational)>,
    pub ml_cost: Rational,
    /// `U` vertex lifted to a feasible `Q` point with the same `f`.
    pub lift_ok: bool,
    /// `Q` vertex pushed to a feasible `U` point with the same `f`.
    pub push_ok: bool,
    /// Implied bounds hold at the `U` vertex.
    pub derived_ok: bool,
}

impl CostCase {
    pub fn objectives_equal(&self) -> bool {
        self.objectives.iter().all(|o| o.is_some() && *o == self.objectives[0])
    }

    pub fn certified_ok(&self) -> bool {
        self.certified.iter().all(|(_, _, c)| *c == self.ml_cost)
    }
}

#[derive(Clone, Debug)]
pub struct InstanceReport {
    pub index: usize,
    pub code: ParityCheckMatrix,
    pub counts: Vec<CountReport>,
    pub cases: Vec<CostCase>,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub seed: u64,
    pub instances: Vec<InstanceReport>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteSummary {
    pub instances: usize,
    pub cases: usize,
    pub equal: usize,
    pub certified_outcomes: usize,
    pub certified_ok: usize,
    pub lift_ok: usize,
    pub push_ok: usize,
    pub derived_ok: usize,
    pub counts_ok: usize,
    pub count_reports: usize,
}

impl SuiteSummary {
    pub fn all_pass(&self) -> bool {
        self.equal == self.cases
            && self.certified_ok == self.certified_outcomes
            && self.lift_ok == self.cases
            && self.push_ok == self.cases
            && self.derived_ok == self.cases
            && self.counts_ok == self.count_reports
    }
}

impl fmt::Display for SuiteSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "instances {} cases {}", self.instances, self.cases)?;
        writeln!(f, "objectives-equal {}/{}", self.equal, self.cases)?;
        writeln!(f, "ml-certified {} matching-brute-force {}", self.certified_outcomes, self.certified_ok)?;
        writeln!(
            f,
            "lift {}/{} push {}/{} derived {}/{}",
            self.lift_ok, self.cases, self.push_ok, self.cases, self.derived_ok, self.cases
        )?;
        writeln!(f, "counts {}/{}", self.counts_ok, self.count_reports)
    }
}

impl SuiteReport {
    pub fn summary(&self) -> SuiteSummary {
        let mut s = SuiteSummary { instances: self.instances.len(), ..Default::default() };
        for inst in &self.instances {
            s.count_reports += inst.counts.len();
            s.counts_ok += inst.counts.iter().filter(|c| c.passes()).count();
            for c in &inst.cases {
                s.cases += 1;
                s.equal += usize::from(c.objectives_equal());
                s.certified_outcomes += c.certified.len();
                s.certified_ok += c.certified.iter().filter(|(_, _, v)| *v == c.ml_cost).count();
                s.lift_ok += usize::from(c.lift_ok);
                s.push_ok += usize::from(c.push_ok);
                s.derived_ok += usize::from(c.derived_ok);
            }
        }
        s
    }

    pub fn to_text(&self) -> String {
        let yn = |b: bool| if b { "yes" } else { "no" };
        let mut s = format!("suite seed {}\n", self.seed);
        for inst in &self.instances {
            let degrees: Vec<String> = (0..inst.code.num_rows()).map(|j| inst.code.degree(j).to_string()).collect();
            let _ = writeln!(
                s,
                "instance {} ring {} n {} m {} degrees {}",
                inst.index,
                inst.code.ring(),
                inst.code.num_cols(),
                inst.code.num_rows(),
                degrees.join(",")
            );
            for c in &inst.counts {
                let _ = writeln!(
                    s,
                    "  counts {} vars {}/{} cons {}/{} {}",
                    c.kind,
                    c.variables,
                    c.variable_bound.map_or("-".into(), |b| b.to_string()),
                    c.constraints,
                    c.constraint_bound.map_or("-".into(), |b| b.to_string()),
                    if c.passes() { "pass" } else { "fail" }
                );
            }
            for (k, c) in inst.cases.iter().enumerate() {
                let objs: Vec<String> =
                    c.objectives.iter().map(|o| o.as_ref().map_or("-".into(), |v| v.to_string())).collect();
                let _ = writeln!(
                    s,
                    "  cost {k} objectives {} equal {} outcomes {} ml {} lift {} push {} derived {}",
                    objs.join(" "),
                    yn(c.objectives_equal()),
                    c.outcomes.join(","),
                    c.ml_cost,
                    yn(c.lift_ok),
                    yn(c.push_ok),
                    yn(c.derived_ok)
                );
            }
        }
        s.push_str(&self.summary().to_string());
        s
    }
}

/// The `index`-th instance of a suite: ring, code and cost vectors.
pub fn suite_instance(config: &SuiteConfig, index: usize) -> Result<(ParityCheckMatrix, Vec<CostVector>)> {
    let mut rng = stream_rng(config.seed, index as u64);
    let ring = &config.rings[index % config.rings.len()];
    let m = rng.random_range(1..=config.max_m);
    let lo = *config.degrees.start();
    let max_n = config.max_n.min(m * *config.degrees.end());
    let n = rng.random_range(lo.max(2)..=max_n.max(lo));
    let code = random_code(ring, n, m, config.degrees.clone(), &mut rng)?;
    let q = ring.cardinality();
    let costs = (0..config.costs_per_instance).map(|_| random_costs(n, q, &mut rng)).collect();
    Ok((code, costs))
}

fn same_f(a: &PolytopeBuild, x: &[Rational], b: &PolytopeBuild, y: &[Rational]) -> bool {
    a.f_values(x) == b.f_values(y)
}

/// Runs one instance through all three polytopes.
pub fn run_instance(config: &SuiteConfig, index: usize) -> Result<InstanceReport> {
    let (code, costs) = suite_instance(config, index)?;
    let mut counts = Vec::new();
    let mut cases = Vec::new();
    for (ci, cost) in costs.iter().enumerate() {
        let builds: Vec<PolytopeBuild> =
            PolytopeKind::ALL.iter().map(|&k| build(k, &code, cost, &config.caps)).collect::<Result<_>>()?;
        if ci == 0 {
            counts = builds.iter().map(PolytopeBuild::count_report).collect();
        }
        let sols = builds.iter().map(solve_build).collect::<Result<Vec<_>>>()?;
        let results: Vec<_> = builds.iter().zip(&sols).map(|(b, s)| interpret(b, cost, s)).collect();
        let (_, ml_cost) = ml_brute_force(&code, cost, &config.caps)?;
        let certified = results
            .iter()
            .filter_map(|r| match &r.outcome {
                Outcome::MlCertified(w) => Some((r.polytope, w.clone(), r.objective.clone().expect("optimal"))),
                _ => None,
            })
            .collect();
        let (qb, ub) = (&builds[0], &builds[1]);
        let (qv, uv) = (&sols[0].values, &sols[1].values);
        let optimal = sols.iter().all(|s| s.is_optimal());
        let lift_ok = optimal
            && lift_u_to_q(ub, qb, uv, DEFAULT_MU_CAP).is_ok_and(|p| qb.lp.is_feasible(&p) && same_f(qb, &p, ub, uv));
        let push_ok = optimal && push_q_to_u(qb, ub, qv).is_ok_and(|p| ub.lp.is_feasible(&p) && same_f(ub, &p, qb, qv));
        let derived_ok = optimal && ub.derived_constraints_hold(uv)?;
        cases.push(CostCase {
            objectives: results.iter().map(|r| r.objective.clone()).collect(),
            outcomes: results.iter().map(|r| r.outcome.tag()).collect(),
            certified,
            ml_cost,
            lift_ok,
            push_ok,
            derived_ok,
        });
    }
    Ok(InstanceReport { index, code, counts, cases })
}

pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    let instances =
        (0..config.instances).into_par_iter().map(|i| run_instance(config, i)).collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { seed: config.seed, instances })
}

/// Objective of every `(cost vector, polytope)` pair.
pub fn compare(
    code: &ParityCheckMatrix,
    costs: &[CostVector],
    kinds: &[PolytopeKind],
    caps: &EnumerationCaps,
) -> Vec<Vec<Option<Rational>>> {
    costs.par_iter().map(|c| kinds.iter().map(|&k| lp_decode(code, c, k, caps).objective).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub seed: u64,
    pub trials: usize,
    pub polytope: PolytopeKind,
    /// Fractional bits kept when embedding float costs.
    pub cost_bits: u32,
    pub caps: EnumerationCaps,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimulationSummary {
    pub trials: usize,
    pub word_errors: usize,
    pub fractional: usize,
    pub declared_errors: usize,
    /// Wrong symbols among ml-certified decodes.
    pub symbol_errors: usize,
    pub certified_symbols: usize,
}

impl fmt::Display for SimulationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rate = |a: usize, b: usize| if b == 0 { "0".to_string() } else { format!("{:.6}", a as f64 / b as f64) };
        writeln!(f, "trials {}", self.trials)?;
        writeln!(f, "word-errors {} rate {}", self.word_errors, rate(self.word_errors, self.trials))?;
        writeln!(f, "fractional {} rate {}", self.fractional, rate(self.fractional, self.trials))?;
        writeln!(f, "declared-errors {}", self.declared_errors)?;
        writeln!(
            f,
            "symbol-errors {} of {} certified symbols rate {}",
            self.symbol_errors,
            self.certified_symbols,
            rate(self.symbol_errors, self.certified_symbols)
        )
    }
}

/// Sends uniformly drawn codewords through `channel` and LP-decodes them.
/// A trial is a word error unless the decoder returns the transmitted word.
pub fn simulate(
    code: &ParityCheckMatrix,
    channel: &ChannelModel,
    config: &SimulationConfig,
) -> Result<SimulationSummary> {
    let q = code.ring().cardinality();
    if channel.input_size() != q {
        return Err(Error::InvalidChannel(format!("channel has {} inputs, ring has {q}", channel.input_size())));
    }
    let book = code.enumerate_codebook(&config.caps)?;
    let trials: Vec<(bool, Option<usize>, &'static str)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = stream_rng(config.seed, t as u64);
            let sent = &book[rng.random_range(0..book.len())];
            let received: Vec<usize> =
                sent.iter().map(|c| channel.sample_output(c.code() as usize, &mut rng)).collect();
            let costs = channel.cost_vector(&received, config.cost_bits)?;
            let r = lp_decode(code, &costs, config.polytope, &config.caps);
            let wrong = r.word().map(|w| w.iter().zip(sent).filter(|(a, b)| a != b).count());
            Ok((wrong != Some(0), wrong, r.outcome.tag()))
        })
        .collect::<Result<_>>()?;
    let mut s = SimulationSummary { trials: config.trials, ..Default::default() };
    for (err, wrong, tag) in trials {
        s.word_errors += usize::from(err);
        s.fractional += usize::from(tag == "fractional");
        s.declared_errors += usize::from(tag == "declared-error");
        if let Some(w) = wrong {
            s.symbol_errors += w;
            s.certified_symbols += code.num_cols();
        }
    }
    Ok(s)
}
