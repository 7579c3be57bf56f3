//! Integral decomposition of count tables into words with a prescribed symbol
//! profile, and the point conversions between the `Q` and `U` relaxations
//! built on it.
//!
//! Given nonnegative integer tables `x_i^(alpha)` over positions `i` of a set
//! `Gamma` with `sum_i x_i^(alpha) = k_alpha M` and `sum_alpha x_i^(alpha) <= M`,
//! [`decompose`] writes `x` as a sum of `M` words `a` with `kappa_Gamma(a) = k`
//! and `sum_i a_i = 0`. Each word is found as an integral flow in a bipartite
//! network between symbols and positions.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::code::CardinalityVector;
use crate::error::{Error, Result};
use crate::lp_exact::Rational;
use crate::polytopes::PolytopeBuild;
use crate::ring::{RingElement, RingSpec};

/// Largest common denominator accepted by [`lift_u_to_q`] by default.
pub const DEFAULT_MU_CAP: u64 = 1_000_000;

/// [`decompose`] extracts one word per unit of `M`; larger inputs are refused.
pub const MAX_MULTIPLICITY: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowEdge {
    pub from: usize,
    pub to: usize,
    pub capacity: u64,
    pub lower: u64,
}

/// A directed network with integral capacities and lower bounds.
/// [`FlowNetwork::INFINITE`] marks an uncapacitated edge.
#[derive(Clone, Debug, Default)]
pub struct FlowNetwork {
    nodes: usize,
    edges: Vec<FlowEdge>,
}

impl FlowNetwork {
    pub const INFINITE: u64 = u64::MAX / 4;

    pub fn new(nodes: usize) -> Self {
        Self { nodes, edges: Vec::new() }
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes
    }

    pub fn edges(&self) -> &[FlowEdge] {
        &self.edges
    }

    pub fn add_edge(&mut self, from: usize, to: usize, capacity: u64) -> usize {
        self.add_edge_with_lower(from, to, capacity, 0)
    }

    pub fn add_edge_with_lower(&mut self, from: usize, to: usize, capacity: u64, lower: u64) -> usize {
        assert!(from < self.nodes && to < self.nodes && lower <= capacity);
        self.edges.push(FlowEdge { from, to, capacity, lower });
        self.edges.len() - 1
    }
}

/// Residual graph for Edmonds-Karp. Arcs come in pairs `2e`, `2e + 1`.
struct Residual {
    head: Vec<usize>,
    cap: Vec<u64>,
    adj: Vec<Vec<usize>>,
}

impl Residual {
    fn new(nodes: usize) -> Self {
        Self { head: Vec::new(), cap: Vec::new(), adj: vec![Vec::new(); nodes] }
    }

    fn add(&mut self, from: usize, to: usize, cap: u64) -> usize {
        let id = self.head.len();
        self.head.push(to);
        self.cap.push(cap);
        self.adj[from].push(id);
        self.head.push(from);
        self.cap.push(0);
        self.adj[to].push(id + 1);
        id
    }

    /// Shortest augmenting paths, scanning arcs in insertion order.
    fn max_flow(&mut self, s: usize, t: usize) -> u64 {
        let mut total = 0u64;
        loop {
            let mut prev = vec![usize::MAX; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                if u == t {
                    break;
                }
                for &a in &self.adj[u] {
                    let v = self.head[a];
                    if self.cap[a] > 0 && !seen[v] {
                        seen[v] = true;
                        prev[v] = a;
                        queue.push_back(v);
                    }
                }
            }
            if !seen[t] {
                return total;
            }
            let mut push = u64::MAX;
            let mut v = t;
            while v != s {
                let a = prev[v];
                push = push.min(self.cap[a]);
                v = self.head[a ^ 1];
            }
            let mut v = t;
            while v != s {
                let a = prev[v];
                self.cap[a] -= push;
                self.cap[a ^ 1] += push;
                v = self.head[a ^ 1];
            }
            total += push;
        }
    }
}

/// A maximum integral `s`-`t` flow (lower bounds ignored): its value and the
/// flow on every edge.
pub fn max_flow_integral(net: &FlowNetwork, s: usize, t: usize) -> (u64, Vec<u64>) {
    let mut r = Residual::new(net.nodes);
    let arcs: Vec<usize> = net.edges.iter().map(|e| r.add(e.from, e.to, e.capacity)).collect();
    let value = if s == t { 0 } else { r.max_flow(s, t) };
    let flows = arcs.iter().zip(&net.edges).map(|(&a, e)| e.capacity - r.cap[a]).collect();
    (value, flows)
}

/// Some integral flow respecting every lower bound and capacity with
/// conservation at all nodes except `s` and `t`, or `None` if none exists.
/// Uses the usual reduction: an uncapacitated `t -> s` return edge, the lower
/// bounds moved into node demands, and a max-flow between a super source and
/// super sink that must saturate.
pub fn feasible_flow(net: &FlowNetwork, s: usize, t: usize) -> Option<Vec<u64>> {
    let n = net.nodes;
    let (ss, tt) = (n, n + 1);
    let mut r = Residual::new(n + 2);
    let arcs: Vec<usize> = net.edges.iter().map(|e| r.add(e.from, e.to, e.capacity - e.lower)).collect();
    r.add(t, s, FlowNetwork::INFINITE);
    let mut excess = vec![0i128; n];
    for e in &net.edges {
        excess[e.to] += e.lower as i128;
        excess[e.from] -= e.lower as i128;
    }
    let mut need = 0u64;
    for (v, &ex) in excess.iter().enumerate() {
        if ex > 0 {
            r.add(ss, v, ex as u64);
            need += ex as u64;
        } else if ex < 0 {
            r.add(v, tt, (-ex) as u64);
        }
    }
    if r.max_flow(ss, tt) != need {
        return None;
    }
    Some(arcs.iter().zip(&net.edges).map(|(&a, e)| e.lower + (e.capacity - e.lower - r.cap[a])).collect())
}

/// Integer count tables `x[i][alpha - 1]` over the positions of `Gamma`
/// together with the profile `k` and multiplicity `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecomposeInput {
    pub ring: RingSpec,
    pub multiplicity: u64,
    pub profile: CardinalityVector,
    pub x: Vec<Vec<u64>>,
}

impl DecomposeInput {
    /// Checks the table shape, the column sums `sum_i x_i^(alpha) = k_alpha M`,
    /// the row bound `sum_alpha x_i^(alpha) <= M`, and that words with profile
    /// `k` sum to zero.
    pub fn validate(&self) -> Result<()> {
        let q = self.ring.cardinality();
        if self.x.is_empty() {
            return Err(Error::precondition("Gamma must contain at least one position"));
        }
        if self.profile.counts().len() != q - 1 {
            return Err(Error::LengthMismatch { expected: q - 1, got: self.profile.counts().len() });
        }
        if let Some(row) = self.x.iter().find(|r| r.len() != q - 1) {
            return Err(Error::LengthMismatch { expected: q - 1, got: row.len() });
        }
        let m = self.multiplicity as u128;
        for (i, row) in self.x.iter().enumerate() {
            if row.iter().map(|&v| v as u128).sum::<u128>() > m {
                return Err(Error::precondition(format!("position {i} carries more than M = {m}")));
            }
        }
        for a in 0..q - 1 {
            let col: u128 = self.x.iter().map(|r| r[a] as u128).sum();
            let want = self.profile.counts()[a] as u128 * m;
            if col != want {
                return Err(Error::precondition(format!("symbol {} has total {col}, expected k*M = {want}", a + 1)));
            }
        }
        if m > 0 {
            if self.profile.total() > self.x.len() as u64 {
                return Err(Error::precondition("profile has more nonzero symbols than positions"));
            }
            if self.profile.weighted_sum(&self.ring) != 0 {
                return Err(Error::precondition(format!("profile {} does not sum to zero", self.profile)));
            }
        }
        Ok(())
    }

    /// ```text
    /// ring Z3
    /// M 2
    /// k 1 1
    /// x 1 1     # one line per position: x^(1) ... x^(q-1)
    /// x 1 1
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut ring = None;
        let mut multiplicity = None;
        let mut profile: Option<Vec<u32>> = None;
        let mut x = Vec::new();
        for (ln, line) in text.lines().enumerate().map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim())) {
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let ints = |rest: &str| -> Result<Vec<u64>> {
                rest.split_whitespace()
                    .map(|t| t.parse::<u64>().map_err(|_| Error::parse(ln, format!("bad integer {t:?}"))))
                    .collect()
            };
            match key {
                "ring" if ring.is_none() => ring = Some(rest.trim().parse::<RingSpec>()?),
                "M" if multiplicity.is_none() => {
                    let v = ints(rest)?;
                    let [m] = v[..] else { return Err(Error::parse(ln, "expected `M <int>`")) };
                    multiplicity = Some(m);
                }
                "k" if profile.is_none() => {
                    let v = ints(rest)?;
                    let v = v
                        .into_iter()
                        .map(|c| u32::try_from(c).map_err(|_| Error::parse(ln, "count too large")))
                        .collect::<Result<Vec<_>>>()?;
                    profile = Some(v);
                }
                "x" => x.push(ints(rest)?),
                _ => return Err(Error::parse(ln, format!("unexpected or repeated key {key:?}"))),
            }
        }
        let input = Self {
            ring: ring.ok_or_else(|| Error::parse(0, "missing `ring`"))?,
            multiplicity: multiplicity.ok_or_else(|| Error::parse(0, "missing `M`"))?,
            profile: CardinalityVector::new(profile.ok_or_else(|| Error::parse(0, "missing `k`"))?),
            x,
        };
        input.validate()?;
        Ok(input)
    }

    pub fn to_text(&self) -> String {
        let join = |v: &mut dyn Iterator<Item = u64>| v.map(|c| c.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = format!(
            "ring {}\nM {}\nk {}\n",
            self.ring,
            self.multiplicity,
            join(&mut self.profile.counts().iter().map(|&c| c as u64))
        );
        for row in &self.x {
            s.push_str(&format!("x {}\n", join(&mut row.iter().copied())));
        }
        s
    }
}

/// Integer weights `w_a` on words `a`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessWeights {
    pub weights: BTreeMap<Vec<RingElement>, u64>,
}

impl WitnessWeights {
    pub fn total(&self) -> u64 {
        self.weights.values().sum()
    }

    /// `sum_a w_a = M`, `x_i^(alpha) = sum_{a : a_i = alpha} w_a`, and every
    /// word sums to zero with profile `k`.
    pub fn satisfies(&self, input: &DecomposeInput) -> bool {
        let ring = &input.ring;
        let q = ring.cardinality();
        if self.total() != input.multiplicity {
            return false;
        }
        let mut acc = vec![vec![0u64; q - 1]; input.x.len()];
        for (a, &w) in &self.weights {
            if a.len() != input.x.len() || w == 0 {
                return false;
            }
            let sum = a.iter().fold(0u16, |s, v| ring.add_code(s, v.code()));
            let mut counts = vec![0u32; q - 1];
            for (i, v) in a.iter().enumerate() {
                if !v.is_zero() {
                    counts[v.code() as usize - 1] += 1;
                    acc[i][v.code() as usize - 1] += w;
                }
            }
            if sum != 0 || counts != input.profile.counts() {
                return false;
            }
        }
        acc == input.x
    }
}

impl fmt::Display for WitnessWeights {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "witness {}", self.weights.len())?;
        for (a, w) in &self.weights {
            let word: Vec<String> = a.iter().map(|v| v.code().to_string()).collect();
            writeln!(f, "{w} {}", word.join(" "))?;
        }
        Ok(())
    }
}

/// One word `a` with profile `k`, `a_i = alpha` only where `x_i^(alpha) > 0`,
/// and `a_i != 0` at every critical position (`sum_alpha x_i^(alpha) = M`).
pub fn extract_assignment(input: &DecomposeInput) -> Result<Vec<RingElement>> {
    input.validate()?;
    let q = input.ring.cardinality();
    let n = input.x.len();
    let m = input.multiplicity;
    // nodes: 0 = s, 1..q = symbols, q..q+n = positions, q+n = t
    let (s, t) = (0, q + n);
    let mut net = FlowNetwork::new(q + n + 1);
    for a in 1..q {
        let k = input.profile.get(a as u16) as u64;
        net.add_edge_with_lower(s, a, k, k);
    }
    let mut symbol_edges = Vec::new();
    for a in 1..q {
        for (i, row) in input.x.iter().enumerate() {
            if row[a - 1] > 0 {
                symbol_edges.push((net.add_edge(a, q + i, FlowNetwork::INFINITE), i, a));
            }
        }
    }
    for (i, row) in input.x.iter().enumerate() {
        let critical = m > 0 && row.iter().sum::<u64>() == m;
        net.add_edge_with_lower(q + i, t, 1, u64::from(critical));
    }
    let flow = feasible_flow(&net, s, t)
        .ok_or_else(|| Error::precondition("no assignment satisfies the count and critical-position constraints"))?;
    let mut word = vec![input.ring.zero(); n];
    for (e, i, a) in symbol_edges {
        if flow[e] > 0 {
            word[i] = input.ring.elem(a as u16);
        }
    }
    Ok(word)
}

/// Peels off one extracted word at a time until `M` reaches zero.
pub fn decompose(input: &DecomposeInput) -> Result<WitnessWeights> {
    input.validate()?;
    if input.multiplicity > MAX_MULTIPLICITY {
        return Err(Error::CapExceeded {
            what: "multiplicity".into(),
            size: input.multiplicity as u128,
            cap: MAX_MULTIPLICITY as u128,
        });
    }
    let mut cur = input.clone();
    let mut out = WitnessWeights::default();
    while cur.multiplicity > 0 {
        let a = extract_assignment(&cur)?;
        for (i, v) in a.iter().enumerate() {
            if !v.is_zero() {
                cur.x[i][v.code() as usize - 1] -= 1;
            }
        }
        cur.multiplicity -= 1;
        *out.weights.entry(a).or_insert(0) += 1;
    }
    Ok(out)
}

fn same_code(a: &PolytopeBuild, b: &PolytopeBuild) -> Result<()> {
    if a.code() != b.code() {
        return Err(Error::precondition("builds describe different codes"));
    }
    if a.f_index.len() != b.f_index.len() {
        return Err(Error::precondition("builds have different indicator layouts"));
    }
    Ok(())
}

fn check_point(build: &PolytopeBuild, point: &[Rational]) -> Result<()> {
    if point.len() != build.lp.num_variables() {
        return Err(Error::LengthMismatch { expected: build.lp.num_variables(), got: point.len() });
    }
    Ok(())
}

fn copy_f(from: &PolytopeBuild, to: &PolytopeBuild, point: &[Rational], out: &mut [Rational]) {
    for (src, dst) in from.f_index.iter().zip(&to.f_index) {
        for (&a, &b) in src.iter().zip(dst) {
            out[b] = point[a].clone();
        }
    }
}

/// Maps a point `(f, w)` of `Q` to `(f, sigma, z)` of `U`:
/// `sigma_{j,k} = sum_{kappa_j(b) = k} w_{j,b}` and
/// `z^(beta)_{i,j,k} = sum_{kappa_j(b) = k, b_i = beta} w_{j,b}`.
pub fn push_q_to_u(q_build: &PolytopeBuild, u_build: &PolytopeBuild, point: &[Rational]) -> Result<Vec<Rational>> {
    same_code(q_build, u_build)?;
    check_point(q_build, point)?;
    let ql = q_build.q_layout().ok_or_else(|| Error::precondition("source build is not Q"))?;
    let ul = u_build.u_layout().ok_or_else(|| Error::precondition("target build is not U"))?;
    let code = q_build.code();
    let mut out = vec![Rational::ZERO; u_build.lp.num_variables()];
    copy_f(q_build, u_build, point, &mut out);
    for j in 0..code.num_rows() {
        for (b, &wc) in ql.local_codes[j].iter().zip(&ql.w[j]) {
            let w = &point[wc];
            if w.is_zero() {
                continue;
            }
            let k = code.kappa(j, b)?;
            let kidx = ul.profiles[j]
                .binary_search(&k)
                .map_err(|_| Error::precondition(format!("profile {k} missing from U build")))?;
            out[ul.sigma[j][kidx]] += w;
            for (pos, v) in b.values().iter().enumerate() {
                if !v.is_zero() {
                    out[ul.z[j][kidx][pos][v.code() as usize - 1]] += w;
                }
            }
        }
    }
    Ok(out)
}

fn small(v: &BigInt, what: &str) -> Result<u64> {
    v.to_u64().ok_or_else(|| Error::precondition(format!("{what} out of range")))
}

/// Maps a rational point `(f, sigma, z)` of `U` to `(f, w)` of `Q`.
///
/// For every `(j, k)` with `sigma_{j,k} > 0` the scaled tables
/// `mu * tau_{i,j,k} / sigma_{j,k}` are decomposed into `mu` words of check
/// products, each word is turned into local codewords by handing out the
/// symbols `beta` in ascending order in the amounts `mu * z^(beta) / sigma`,
/// and every resulting local codeword receives weight `sigma / mu`.
pub fn lift_u_to_q(
    u_build: &PolytopeBuild,
    q_build: &PolytopeBuild,
    point: &[Rational],
    mu_cap: u64,
) -> Result<Vec<Rational>> {
    same_code(u_build, q_build)?;
    check_point(u_build, point)?;
    let ul = u_build.u_layout().ok_or_else(|| Error::precondition("source build is not U"))?;
    let ql = q_build.q_layout().ok_or_else(|| Error::precondition("target build is not Q"))?;
    let code = u_build.code();
    let ring = code.ring();
    let q = ring.cardinality();
    let mut out = vec![Rational::ZERO; q_build.lp.num_variables()];
    copy_f(u_build, q_build, point, &mut out);

    for j in 0..code.num_rows() {
        let support = code.support(j);
        let coeffs: Vec<u16> = support.iter().map(|&i| code.entry(j, i).code()).collect();
        for (kidx, k) in ul.profiles[j].iter().enumerate() {
            let sigma = &point[ul.sigma[j][kidx]];
            if !sigma.is_positive() {
                continue;
            }
            // ratios[pos][beta - 1] = z^(beta) / sigma
            let ratios: Vec<Vec<Rational>> =
                ul.z[j][kidx].iter().map(|cols| cols.iter().map(|&c| &point[c] / sigma).collect()).collect();
            let mu = Rational::lcm_denominators(ratios.iter().flatten());
            if mu > BigInt::from(mu_cap) {
                return Err(Error::DenominatorCap { mu: mu.to_string(), cap: mu_cap });
            }
            let mu_u = small(&mu, "denominator")?;
            let scaled: Vec<Vec<u64>> = ratios
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|r| {
                            if r.is_negative() {
                                return Err(Error::precondition("negative z value"));
                            }
                            small(&r.mul_integer_exact(&mu).expect("mu clears denominators"), "scaled z")
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            // x_i^(alpha) = sum_{beta : beta h_i = alpha} scaled z^(beta)
            let mut x = vec![vec![0u64; q - 1]; support.len()];
            for (pos, row) in scaled.iter().enumerate() {
                for (b, &v) in row.iter().enumerate() {
                    let alpha = ring.mul_code(b as u16 + 1, coeffs[pos]);
                    if alpha != 0 {
                        x[pos][alpha as usize - 1] += v;
                    }
                }
            }
            let input = DecomposeInput { ring: ring.clone(), multiplicity: mu_u, profile: k.clone(), x };
            let witness = decompose(&input)?;

            let words: Vec<&Vec<RingElement>> =
                witness.weights.iter().flat_map(|(a, &w)| std::iter::repeat_n(a, w as usize)).collect();
            let mut locals = vec![vec![0u16; support.len()]; words.len()];
            for pos in 0..support.len() {
                for alpha in 0..q as u16 {
                    // symbols beta with beta h = alpha, ascending, in their amounts
                    let mut supply: Vec<(u16, u64)> = (1..q as u16)
                        .filter(|&b| ring.mul_code(b, coeffs[pos]) == alpha)
                        .map(|b| (b, scaled[pos][b as usize - 1]))
                        .filter(|&(_, c)| c > 0)
                        .collect();
                    let slots: Vec<usize> = (0..words.len()).filter(|&l| words[l][pos].code() == alpha).collect();
                    let given: u64 = supply.iter().map(|s| s.1).sum();
                    if alpha == 0 {
                        if given > slots.len() as u64 {
                            return Err(Error::precondition(format!(
                                "check {j}: mass on zero check products exceeds the zero slots at position {pos}"
                            )));
                        }
                        supply.push((0, slots.len() as u64 - given));
                    } else if given != slots.len() as u64 {
                        return Err(Error::precondition(format!("check {j}: tau and z disagree at position {pos}")));
                    }
                    let mut next = slots.into_iter();
                    for (b, c) in supply {
                        for l in next.by_ref().take(c as usize) {
                            locals[l][pos] = b;
                        }
                    }
                }
            }
            let share = sigma / &Rational::from(mu_u);
            for b in locals {
                let idx = ql.local_codes[j]
                    .iter()
                    .position(|c| c.values().iter().map(|v| v.code()).eq(b.iter().copied()))
                    .ok_or_else(|| Error::precondition(format!("check {j}: lifted word is not a local codeword")))?;
                out[ql.w[j][idx]] += &share;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::CostVector;
    use crate::code::{gamma_code_constrained, EnumerationCaps, ParityCheckMatrix};
    use crate::lp_exact::solve;
    use crate::polytopes::{build_q, build_u};
    use proptest::prelude::*;

    fn z3() -> RingSpec {
        RingSpec::integers(3).unwrap()
    }

    fn input(ring: RingSpec, m: u64, k: Vec<u32>, x: Vec<Vec<u64>>) -> DecomposeInput {
        DecomposeInput { ring, multiplicity: m, profile: CardinalityVector::new(k), x }
    }

    #[test]
    fn two_node_flow() {
        let mut net = FlowNetwork::new(2);
        net.add_edge(0, 1, 3);
        assert_eq!(max_flow_integral(&net, 0, 1), (3, vec![3]));
    }

    #[test]
    fn flow_skips_missing_edges() {
        let mut net = FlowNetwork::new(4);
        net.add_edge(0, 1, 2);
        net.add_edge(1, 3, 1);
        net.add_edge(0, 2, 5);
        let (v, f) = max_flow_integral(&net, 0, 3);
        assert_eq!(v, 1);
        assert_eq!(f[2], 0);
    }

    #[test]
    fn lower_bounds_can_be_infeasible() {
        let mut net = FlowNetwork::new(3);
        net.add_edge(0, 1, 1);
        net.add_edge_with_lower(1, 2, 5, 2);
        assert!(feasible_flow(&net, 0, 2).is_none());
        let mut net = FlowNetwork::new(3);
        net.add_edge(0, 1, 4);
        net.add_edge_with_lower(1, 2, 5, 2);
        assert!(feasible_flow(&net, 0, 2).unwrap()[1] >= 2);
    }

    #[test]
    fn z3_pair_example() {
        let inp = input(z3(), 2, vec![1, 1], vec![vec![1, 1], vec![1, 1]]);
        let a = extract_assignment(&inp).unwrap();
        let codes: Vec<u16> = a.iter().map(|v| v.code()).collect();
        assert!(codes == [1, 2] || codes == [2, 1]);
        let w = decompose(&inp).unwrap();
        assert!(w.satisfies(&inp));
        assert_eq!(w.weights.len(), 2);
        assert!(w.weights.values().all(|&c| c == 1));
    }

    #[test]
    fn zero_multiplicity_and_zero_profile() {
        let inp = input(z3(), 0, vec![1, 1], vec![vec![0, 0], vec![0, 0]]);
        assert_eq!(decompose(&inp).unwrap().total(), 0);
        let inp = input(z3(), 3, vec![0, 0], vec![vec![0, 0], vec![0, 0]]);
        let w = decompose(&inp).unwrap();
        assert_eq!(w.weights.len(), 1);
        assert!(w.satisfies(&inp));
    }

    #[test]
    fn single_word_is_forced() {
        let inp = input(z3(), 1, vec![0, 0], vec![vec![0, 0]]);
        assert_eq!(decompose(&inp).unwrap().total(), 1);
        let inp = input(z3(), 1, vec![3, 0], vec![vec![1, 0], vec![1, 0], vec![1, 0]]);
        let w = decompose(&inp).unwrap();
        assert_eq!(w.weights.keys().next().unwrap().iter().map(|v| v.code()).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn critical_position_without_mass_rejected() {
        let inp = input(z3(), 2, vec![1, 1], vec![vec![2, 0], vec![0, 2], vec![0, 0]]);
        assert!(decompose(&inp).is_ok());
        let inp = input(z3(), 2, vec![1, 1], vec![vec![2, 0], vec![0, 3], vec![0, 0]]);
        assert!(inp.validate().is_err());
    }

    #[test]
    fn text_round_trip() {
        let text = "ring Z3\nM 2\nk 1 1\nx 1 1\nx 1 1\n";
        let inp = DecomposeInput::parse(text).unwrap();
        assert_eq!(inp.to_text(), text);
        assert!(DecomposeInput::parse("ring Z3\nM 2\nk 1 1\nx 1 1\n").is_err());
        assert!(DecomposeInput::parse("ring Z3\nM 2\nM 2\n").is_err());
        let w = decompose(&inp).unwrap();
        assert_eq!(w.to_string(), "witness 2\n1 1 2\n1 2 1\n");
    }

    fn random_feasible(ring: &RingSpec, n: usize, m: u64, seed: Vec<usize>) -> Option<DecomposeInput> {
        let q = ring.cardinality();
        let mut k = vec![0u32; q - 1];
        for (i, s) in seed.iter().take(n).enumerate() {
            if i < n - 1 && s % 2 == 0 {
                k[s % (q - 1)] += 1;
            }
        }
        let mut kv = CardinalityVector::new(k.clone());
        // close the profile with one more symbol if needed
        let ws = kv.weighted_sum(ring);
        if ws != 0 {
            let need = ring.neg_code(ws);
            k[need as usize - 1] += 1;
            kv = CardinalityVector::new(k);
            if kv.weighted_sum(ring) != 0 || kv.total() > n as u64 {
                return None;
            }
        }
        let words = gamma_code_constrained(ring, n, &kv, 1 << 20).ok()?;
        if words.is_empty() {
            return None;
        }
        let mut x = vec![vec![0u64; q - 1]; n];
        for l in 0..m as usize {
            let a = &words[seed[l % seed.len()] % words.len()];
            for (i, v) in a.iter().enumerate() {
                if !v.is_zero() {
                    x[i][v.code() as usize - 1] += 1;
                }
            }
        }
        Some(DecomposeInput { ring: ring.clone(), multiplicity: m, profile: kv, x })
    }

    proptest! {
        #[test]
        fn decompose_satisfies_claims(q in prop::sample::select(vec![2u32, 3, 4, 5]), n in 1usize..6, m in 0u64..12, seed in prop::collection::vec(0usize..1000, 8)) {
            let ring = RingSpec::integers(q).unwrap();
            if let Some(inp) = random_feasible(&ring, n, m, seed) {
                let w = decompose(&inp).unwrap();
                prop_assert!(w.satisfies(&inp));
            }
        }
    }

    #[test]
    fn push_of_codeword_is_indicator() {
        let ring = RingSpec::integers(4).unwrap();
        let h = ParityCheckMatrix::from_codes(ring.clone(), &[vec![1, 3, 1, 0], vec![0, 1, 1, 1]]).unwrap();
        let caps = EnumerationCaps::default();
        let costs = CostVector::zeros(4, 4);
        let qb = build_q(&h, &costs, &caps).unwrap();
        let ub = build_u(&h, &costs, &caps).unwrap();
        for c in h.enumerate_codebook(&caps).unwrap() {
            let pushed = push_q_to_u(&qb, &ub, &qb.embed_codeword(&c).unwrap()).unwrap();
            assert_eq!(pushed, ub.embed_codeword(&c).unwrap());
            let lifted = lift_u_to_q(&ub, &qb, &pushed, DEFAULT_MU_CAP).unwrap();
            assert_eq!(lifted, qb.embed_codeword(&c).unwrap());
        }
    }

    #[test]
    fn uniform_mixture_pushes_to_profile_frequencies() {
        let h = ParityCheckMatrix::from_codes(z3(), &[vec![1, 1, 1]]).unwrap();
        let caps = EnumerationCaps::default();
        let costs = CostVector::zeros(3, 3);
        let qb = build_q(&h, &costs, &caps).unwrap();
        let ub = build_u(&h, &costs, &caps).unwrap();
        let ql = qb.q_layout().unwrap();
        let size = ql.local_codes[0].len() as i64;
        let mut x = vec![Rational::ZERO; qb.lp.num_variables()];
        for &c in &ql.w[0] {
            x[c] = Rational::new(1, size);
        }
        for (i, cols) in qb.f_index.iter().enumerate() {
            for (a, &c) in cols.iter().enumerate() {
                let hits = ql.local_codes[0].iter().filter(|b| b.at(i).code() as usize == a + 1).count();
                x[c] = Rational::new(hits as i64, size);
            }
        }
        assert!(qb.lp.is_feasible(&x));
        let pushed = push_q_to_u(&qb, &ub, &x).unwrap();
        assert!(ub.lp.is_feasible(&pushed));
        let ul = ub.u_layout().unwrap();
        for (kidx, k) in ul.profiles[0].iter().enumerate() {
            let count = ql.local_codes[0].iter().filter(|b| h.kappa(0, b).unwrap() == *k).count();
            assert_eq!(pushed[ul.sigma[0][kidx]], Rational::new(count as i64, size));
        }
        let lifted = lift_u_to_q(&ub, &qb, &pushed, DEFAULT_MU_CAP).unwrap();
        assert!(qb.lp.is_feasible(&lifted));
    }

    #[test]
    fn lift_of_mixture_and_solver_vertices() {
        let gf4 = RingSpec::galois_default(2, 2).unwrap();
        let h = ParityCheckMatrix::from_codes(gf4.clone(), &[vec![1, 2, 3, 1, 0], vec![0, 1, 1, 2, 3]]).unwrap();
        let caps = EnumerationCaps::default();
        let costs = CostVector::new(
            3,
            [[1, -2, 3], [0, 1, -1], [2, 2, -3], [-1, 0, 1], [1, -1, 1]]
                .iter()
                .map(|r| r.iter().map(|&v| Rational::from(v as i64)).collect())
                .collect(),
        )
        .unwrap();
        let qb = build_q(&h, &costs, &caps).unwrap();
        let ub = build_u(&h, &costs, &caps).unwrap();
        let book = h.enumerate_codebook(&caps).unwrap();
        let half = Rational::new(1, 2);
        let mix: Vec<Rational> = ub
            .embed_codeword(&book[1])
            .unwrap()
            .iter()
            .zip(ub.embed_codeword(&book[5]).unwrap())
            .map(|(a, b)| &(a + &b) * &half)
            .collect();
        for point in [mix, solve(&ub.lp).unwrap().values] {
            assert!(ub.lp.is_feasible(&point));
            let lifted = lift_u_to_q(&ub, &qb, &point, DEFAULT_MU_CAP).unwrap();
            assert!(qb.lp.is_feasible(&lifted));
            assert_eq!(qb.f_values(&lifted), ub.f_values(&point));
        }
        let v = solve(&qb.lp).unwrap().values;
        let pushed = push_q_to_u(&qb, &ub, &v).unwrap();
        assert!(ub.lp.is_feasible(&pushed));
        assert_eq!(ub.f_values(&pushed), qb.f_values(&v));
    }

    #[test]
    fn denominator_cap_enforced() {
        let h = ParityCheckMatrix::from_codes(z3(), &[vec![1, 1]]).unwrap();
        let caps = EnumerationCaps::default();
        let costs = CostVector::zeros(2, 3);
        let qb = build_q(&h, &costs, &caps).unwrap();
        let ub = build_u(&h, &costs, &caps).unwrap();
        let book = h.enumerate_codebook(&caps).unwrap();
        let t = Rational::new(1, 7);
        let a = ub.embed_codeword(&book[1]).unwrap();
        let b = ub.embed_codeword(&book[2]).unwrap();
        let p: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| &(x * &(&Rational::ONE - &t)) + &(y * &t)).collect();
        assert!(matches!(lift_u_to_q(&ub, &qb, &p, 5), Err(Error::DenominatorCap { .. })));
        assert!(lift_u_to_q(&ub, &qb, &p, 7).is_ok());
    }
}
