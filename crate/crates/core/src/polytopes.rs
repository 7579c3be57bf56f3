//! LP builders for the three relaxations.
//!
//! * `Q`: one weight `w_{j,b}` per local codeword `b` of every check.
//! * `U`: one weight `sigma_{j,k}` per count profile `k` of every check, plus
//!   per-position mass variables `z^(alpha)_{i,j,k}`.
//! * `S`: `Q` applied to the cascaded code, whose checks have degree <= 3.
//!
//! Columns are laid out with the `f_i^(alpha)` indicators first (position
//! major, symbol minor), followed by auxiliary columns grouped by check. Only
//! `f` columns carry cost.

use std::fmt;
use std::str::FromStr;

use crate::channel::CostVector;
use crate::code::{CardinalityVector, EnumerationCaps, LocalCodeword, ParityCheckMatrix};
use crate::error::{Error, Result};
use crate::lp_exact::{LinearProgram, Rational, Relation};
use crate::ring::RingElement;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PolytopeKind {
    Q,
    U,
    S,
}

impl PolytopeKind {
    pub const ALL: [PolytopeKind; 3] = [PolytopeKind::Q, PolytopeKind::U, PolytopeKind::S];
}

impl fmt::Display for PolytopeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Q => "q",
            Self::U => "u",
            Self::S => "s",
        })
    }
}

impl FromStr for PolytopeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(Self::Q),
            "u" => Ok(Self::U),
            "s" => Ok(Self::S),
            other => Err(Error::precondition(format!("unknown polytope {other:?} (expected q, u or s)"))),
        }
    }
}

/// Local-codeword weights of a `Q`-style program.
#[derive(Clone, Debug)]
pub struct QLayout {
    /// `C_j` per check, lexicographic.
    pub local_codes: Vec<Vec<LocalCodeword>>,
    /// `w[j][b]` is the column of `w_{j,b}` for `b = local_codes[j][b]`.
    pub w: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub struct ULayout {
    /// `T_j` per check, sorted.
    pub profiles: Vec<Vec<CardinalityVector>>,
    /// `sigma[j][k]`.
    pub sigma: Vec<Vec<usize>>,
    /// `z[j][k][pos][alpha - 1]`, `pos` indexing `I_j`.
    pub z: Vec<Vec<Vec<Vec<usize>>>>,
}

#[derive(Clone, Debug)]
pub struct SLayout {
    pub cascade: CascadedCode,
    /// Weights of `Q` over the cascaded matrix `F`.
    pub inner: QLayout,
    /// `h[j][l][alpha - 1]` for the auxiliary symbol `chi^j_{l+1}`.
    pub h: Vec<Vec<Vec<usize>>>,
    /// Indicator column of every column of `F` (original then auxiliary).
    pub columns: Vec<Vec<usize>>,
}

#[derive(Clone, Debug)]
pub enum AuxIndex {
    Q(QLayout),
    U(ULayout),
    S(SLayout),
}

/// A relaxation LP together with the maps from model variables to columns.
#[derive(Clone, Debug)]
pub struct PolytopeBuild {
    pub kind: PolytopeKind,
    pub lp: LinearProgram,
    /// `f_index[i][alpha - 1]`.
    pub f_index: Vec<Vec<usize>>,
    pub aux: AuxIndex,
    code: ParityCheckMatrix,
}

fn check_costs(code: &ParityCheckMatrix, costs: &CostVector) -> Result<()> {
    if costs.len() != code.num_cols() {
        return Err(Error::LengthMismatch { expected: code.num_cols(), got: costs.len() });
    }
    if costs.width() + 1 != code.ring().cardinality() {
        return Err(Error::LengthMismatch { expected: code.ring().cardinality() - 1, got: costs.width() });
    }
    Ok(())
}

fn word_label(values: impl IntoIterator<Item = u16>) -> String {
    let parts: Vec<String> = values.into_iter().map(|c| c.to_string()).collect();
    parts.join(".")
}

/// Emits the `Q` program of `h` into `lp`. Indicator columns are created by
/// `indicator(col, alpha)`, which returns `(name, role, cost)`.
fn emit_q(
    lp: &mut LinearProgram,
    h: &ParityCheckMatrix,
    caps: &EnumerationCaps,
    indicator: &dyn Fn(usize, u16) -> (String, &'static str, Rational),
) -> Result<(Vec<Vec<usize>>, QLayout)> {
    let q = h.ring().cardinality();
    let columns: Vec<Vec<usize>> = (0..h.num_cols())
        .map(|i| {
            (1..q as u16)
                .map(|a| {
                    let (name, role, cost) = indicator(i, a);
                    lp.add_variable(name, role, cost)
                })
                .collect()
        })
        .collect();

    let mut layout = QLayout { local_codes: Vec::new(), w: Vec::new() };
    for j in 0..h.num_rows() {
        let local = h.enumerate_local_code(j, caps)?;
        let w: Vec<usize> = local
            .iter()
            .map(|b| {
                lp.add_variable(
                    format!("w:{j}:{}", word_label(b.values().iter().map(|v| v.code()))),
                    "w",
                    Rational::ZERO,
                )
            })
            .collect();
        lp.add_constraint(w.iter().map(|&c| (c, Rational::ONE)).collect(), Relation::Eq, Rational::ONE);
        for (pos, &i) in h.support(j).iter().enumerate() {
            for a in 1..q as u16 {
                let mut coeffs = vec![(columns[i][a as usize - 1], Rational::ONE)];
                coeffs.extend(
                    local.iter().zip(&w).filter(|(b, _)| b.at(pos).code() == a).map(|(_, &c)| (c, -Rational::ONE)),
                );
                lp.add_constraint(coeffs, Relation::Eq, Rational::ZERO);
            }
        }
        layout.local_codes.push(local);
        layout.w.push(w);
    }
    Ok((columns, layout))
}

fn f_indicator<'a>(costs: &'a CostVector) -> impl Fn(usize, u16) -> (String, &'static str, Rational) + 'a {
    move |i, a| (format!("f:{i}:{a}"), "f", costs.get(i, a).clone())
}

pub fn build_q(code: &ParityCheckMatrix, costs: &CostVector, caps: &EnumerationCaps) -> Result<PolytopeBuild> {
    check_costs(code, costs)?;
    let mut lp = LinearProgram::new();
    let (f_index, layout) = emit_q(&mut lp, code, caps, &f_indicator(costs))?;
    Ok(PolytopeBuild { kind: PolytopeKind::Q, lp, f_index, aux: AuxIndex::Q(layout), code: code.clone() })
}

pub fn build_u(code: &ParityCheckMatrix, costs: &CostVector, caps: &EnumerationCaps) -> Result<PolytopeBuild> {
    check_costs(code, costs)?;
    let ring = code.ring();
    let q = ring.cardinality();
    let mut lp = LinearProgram::new();
    let f_index: Vec<Vec<usize>> = (0..code.num_cols())
        .map(|i| {
            (1..q as u16)
                .map(|a| {
                    let (name, role, cost) = f_indicator(costs)(i, a);
                    lp.add_variable(name, role, cost)
                })
                .collect()
        })
        .collect();

    let mut layout = ULayout { profiles: Vec::new(), sigma: Vec::new(), z: Vec::new() };
    for j in 0..code.num_rows() {
        let profiles: Vec<CardinalityVector> = code.tj_image(j, caps)?.into_iter().collect();
        let support = code.support(j);
        let sigma: Vec<usize> = profiles
            .iter()
            .map(|k| {
                lp.add_variable(
                    format!("s:{j}:{}", word_label(k.counts().iter().map(|&c| c as u16))),
                    "sigma",
                    Rational::ZERO,
                )
            })
            .collect();
        let z: Vec<Vec<Vec<usize>>> = profiles
            .iter()
            .map(|k| {
                let kl = word_label(k.counts().iter().map(|&c| c as u16));
                support
                    .iter()
                    .map(|&i| {
                        (1..q as u16)
                            .map(|a| lp.add_variable(format!("z:{i}:{j}:{kl}:{a}"), "z", Rational::ZERO))
                            .collect()
                    })
                    .collect()
            })
            .collect();

        // f_i^(alpha) = sum_k z^(alpha)_{i,j,k}
        for (pos, &i) in support.iter().enumerate() {
            for a in 0..q - 1 {
                let mut coeffs = vec![(f_index[i][a], Rational::ONE)];
                coeffs.extend(z.iter().map(|zk| (zk[pos][a], -Rational::ONE)));
                lp.add_constraint(coeffs, Relation::Eq, Rational::ZERO);
            }
        }
        lp.add_constraint(sigma.iter().map(|&c| (c, Rational::ONE)).collect(), Relation::Eq, Rational::ONE);
        // sum over (i, beta) with beta * H_{j,i} = alpha of z^(beta) = k_alpha sigma_k
        for (kidx, k) in profiles.iter().enumerate() {
            for alpha in 1..q as u16 {
                let mut coeffs = Vec::new();
                for (pos, &i) in support.iter().enumerate() {
                    let hji = code.entry(j, i).code();
                    for beta in 1..q as u16 {
                        if ring.mul_code(beta, hji) == alpha {
                            coeffs.push((z[kidx][pos][beta as usize - 1], Rational::ONE));
                        }
                    }
                }
                let ka = k.get(alpha);
                if ka != 0 {
                    coeffs.push((sigma[kidx], -Rational::from(ka as u64)));
                }
                lp.add_constraint(coeffs, Relation::Eq, Rational::ZERO);
            }
        }
        // per (i, k): mass with a nonzero check product is at most sigma_k
        for (kidx, _) in profiles.iter().enumerate() {
            for (pos, &i) in support.iter().enumerate() {
                let hji = code.entry(j, i).code();
                let mut coeffs: Vec<(usize, Rational)> = (1..q as u16)
                    .filter(|&beta| ring.mul_code(beta, hji) != 0)
                    .map(|beta| (z[kidx][pos][beta as usize - 1], Rational::ONE))
                    .collect();
                coeffs.push((sigma[kidx], -Rational::ONE));
                lp.add_constraint(coeffs, Relation::Le, Rational::ZERO);
            }
        }
        layout.profiles.push(profiles);
        layout.sigma.push(sigma);
        layout.z.push(z);
    }
    Ok(PolytopeBuild { kind: PolytopeKind::U, lp, f_index, aux: AuxIndex::U(layout), code: code.clone() })
}

/// The code `C^(chi)` obtained by splitting every check of degree `d_j >= 4`
/// into a chain of `d_j - 2` checks of degree at most three, linked by
/// `d_j - 3` auxiliary symbols. Checks of degree <= 3 are copied unchanged.
#[derive(Clone, Debug)]
pub struct CascadedCode {
    pub matrix: ParityCheckMatrix,
    /// Number of original columns; auxiliary columns follow them.
    pub original_cols: usize,
    /// `chi_index[j][l]` is the column of `chi^j_{l+1}` in `matrix`.
    pub chi_index: Vec<Vec<usize>>,
    /// Rows of `matrix` generated by original check `j`.
    pub row_index: Vec<Vec<usize>>,
}

pub fn build_cascaded_code(code: &ParityCheckMatrix) -> Result<CascadedCode> {
    let ring = code.ring();
    let one = ring.one();
    let minus_one = ring.neg(one)?;
    let n = code.num_cols();
    let extra: usize = (0..code.num_rows()).map(|j| code.degree(j).saturating_sub(3)).sum();
    let width = n + extra;

    let mut rows: Vec<Vec<RingElement>> = Vec::new();
    let mut chi_index = Vec::new();
    let mut row_index = Vec::new();
    let mut next_chi = n;
    for j in 0..code.num_rows() {
        let sup = code.support(j);
        let d = sup.len();
        let blank = || vec![ring.zero(); width];
        let mut my_rows = Vec::new();
        if d <= 3 {
            let mut row = blank();
            for &i in sup {
                row[i] = code.entry(j, i);
            }
            my_rows.push(row);
            chi_index.push(Vec::new());
        } else {
            let chi: Vec<usize> = (next_chi..next_chi + d - 3).collect();
            next_chi += d - 3;
            let mut first = blank();
            first[sup[0]] = code.entry(j, sup[0]);
            first[sup[1]] = code.entry(j, sup[1]);
            first[chi[0]] = one;
            my_rows.push(first);
            for l in 0..d - 4 {
                let mut row = blank();
                row[chi[l]] = minus_one;
                row[sup[l + 2]] = code.entry(j, sup[l + 2]);
                row[chi[l + 1]] = one;
                my_rows.push(row);
            }
            let mut last = blank();
            last[chi[d - 4]] = minus_one;
            last[sup[d - 2]] = code.entry(j, sup[d - 2]);
            last[sup[d - 1]] = code.entry(j, sup[d - 1]);
            my_rows.push(last);
            chi_index.push(chi);
        }
        row_index.push((rows.len()..rows.len() + my_rows.len()).collect());
        rows.extend(my_rows);
    }
    Ok(CascadedCode { matrix: ParityCheckMatrix::new(ring.clone(), rows)?, original_cols: n, chi_index, row_index })
}

impl CascadedCode {
    /// The auxiliary symbols forced by a word of the original code, i.e. the
    /// running partial sums `chi_1 = -(b_1 h_1 + b_2 h_2)`,
    /// `chi_{l+1} = chi_l - b_{l+2} h_{l+2}`.
    pub fn extend_word(&self, code: &ParityCheckMatrix, word: &[RingElement]) -> Result<Vec<RingElement>> {
        if word.len() != self.original_cols {
            return Err(Error::LengthMismatch { expected: self.original_cols, got: word.len() });
        }
        let ring = code.ring();
        let mut out = word.to_vec();
        out.resize(self.matrix.num_cols(), ring.zero());
        for (j, chi) in self.chi_index.iter().enumerate() {
            if chi.is_empty() {
                continue;
            }
            let sup = code.support(j);
            let term = |p: usize| ring.mul(word[sup[p]], code.entry(j, sup[p]));
            let mut acc = ring.neg(ring.add(term(0)?, term(1)?)?)?;
            out[chi[0]] = acc;
            for l in 1..chi.len() {
                acc = ring.sub(acc, term(l + 1)?)?;
                out[chi[l]] = acc;
            }
        }
        Ok(out)
    }

    /// The local cascaded code of check `j`: rows `row_index[j]` of the
    /// cascaded matrix restricted to `I_j` followed by the auxiliary columns.
    pub fn local_matrix(&self, code: &ParityCheckMatrix, j: usize) -> Result<ParityCheckMatrix> {
        let cols: Vec<usize> = code.support(j).iter().chain(&self.chi_index[j]).copied().collect();
        let rows = self.row_index[j].iter().map(|&r| cols.iter().map(|&c| self.matrix.entry(r, c)).collect()).collect();
        ParityCheckMatrix::new(code.ring().clone(), rows)
    }
}

pub fn build_s(code: &ParityCheckMatrix, costs: &CostVector, caps: &EnumerationCaps) -> Result<PolytopeBuild> {
    check_costs(code, costs)?;
    let cascade = build_cascaded_code(code)?;
    let n = code.num_cols();
    let mut owner = vec![(0, 0); cascade.matrix.num_cols() - n];
    for (j, chi) in cascade.chi_index.iter().enumerate() {
        for (l, &c) in chi.iter().enumerate() {
            owner[c - n] = (j, l);
        }
    }
    let indicator = |i: usize, a: u16| {
        if i < n {
            (format!("f:{i}:{a}"), "f", costs.get(i, a).clone())
        } else {
            let (j, l) = owner[i - n];
            (format!("h:{j}:{}:{a}", l + 1), "h", Rational::ZERO)
        }
    };
    let mut lp = LinearProgram::new();
    let (columns, inner) = emit_q(&mut lp, &cascade.matrix, caps, &indicator)?;
    let f_index = columns[..n].to_vec();
    let h = cascade.chi_index.iter().map(|chi| chi.iter().map(|&c| columns[c].clone()).collect()).collect();
    let layout = SLayout { cascade, inner, h, columns };
    Ok(PolytopeBuild { kind: PolytopeKind::S, lp, f_index, aux: AuxIndex::S(layout), code: code.clone() })
}

pub fn build(
    kind: PolytopeKind,
    code: &ParityCheckMatrix,
    costs: &CostVector,
    caps: &EnumerationCaps,
) -> Result<PolytopeBuild> {
    match kind {
        PolytopeKind::Q => build_q(code, costs, caps),
        PolytopeKind::U => build_u(code, costs, caps),
        PolytopeKind::S => build_s(code, costs, caps),
    }
}

fn local_index(layout: &QLayout, j: usize, b: &[RingElement]) -> Option<usize> {
    layout.local_codes[j].iter().position(|x| x.values() == b)
}

impl PolytopeBuild {
    pub fn code(&self) -> &ParityCheckMatrix {
        &self.code
    }

    pub fn q_layout(&self) -> Option<&QLayout> {
        match &self.aux {
            AuxIndex::Q(l) => Some(l),
            _ => None,
        }
    }

    pub fn u_layout(&self) -> Option<&ULayout> {
        match &self.aux {
            AuxIndex::U(l) => Some(l),
            _ => None,
        }
    }

    pub fn s_layout(&self) -> Option<&SLayout> {
        match &self.aux {
            AuxIndex::S(l) => Some(l),
            _ => None,
        }
    }

    pub fn f_columns(&self) -> Vec<usize> {
        self.f_index.iter().flatten().copied().collect()
    }

    /// `f[i][alpha - 1]` read from a full point.
    pub fn f_values(&self, point: &[Rational]) -> Vec<Vec<Rational>> {
        self.f_index.iter().map(|cols| cols.iter().map(|&c| point[c].clone()).collect()).collect()
    }

    /// The integral point of a codeword: indicators for `f` and the unique
    /// consistent auxiliary values.
    pub fn embed_codeword(&self, word: &[RingElement]) -> Result<Vec<Rational>> {
        if !self.code.is_codeword(word)? {
            return Err(Error::precondition("word is not a codeword"));
        }
        let mut x = vec![Rational::ZERO; self.lp.num_variables()];
        for (i, c) in word.iter().enumerate() {
            if !c.is_zero() {
                x[self.f_index[i][c.code() as usize - 1]] = Rational::ONE;
            }
        }
        let restrict = |m: &ParityCheckMatrix, w: &[RingElement], j: usize| -> Vec<RingElement> {
            m.support(j).iter().map(|&i| w[i]).collect()
        };
        match &self.aux {
            AuxIndex::Q(l) => {
                for j in 0..self.code.num_rows() {
                    let b = local_index(l, j, &restrict(&self.code, word, j)).expect("codeword restricts to C_j");
                    x[l.w[j][b]] = Rational::ONE;
                }
            }
            AuxIndex::U(l) => {
                for j in 0..self.code.num_rows() {
                    let b = LocalCodeword::new(restrict(&self.code, word, j));
                    let k = self.code.kappa(j, &b)?;
                    let kidx = l.profiles[j].binary_search(&k).expect("profile in T_j");
                    x[l.sigma[j][kidx]] = Rational::ONE;
                    for (pos, v) in b.values().iter().enumerate() {
                        if !v.is_zero() {
                            x[l.z[j][kidx][pos][v.code() as usize - 1]] = Rational::ONE;
                        }
                    }
                }
            }
            AuxIndex::S(l) => {
                let full = l.cascade.extend_word(&self.code, word)?;
                let f = &l.cascade.matrix;
                for (c, v) in full.iter().enumerate().skip(word.len()) {
                    if !v.is_zero() {
                        x[l.columns[c][v.code() as usize - 1]] = Rational::ONE;
                    }
                }
                for r in 0..f.num_rows() {
                    let b = local_index(&l.inner, r, &restrict(f, &full, r)).expect("extended word satisfies F");
                    x[l.inner.w[r][b]] = Rational::ONE;
                }
            }
        }
        Ok(x)
    }

    /// `tau^(alpha)_{i,j,k} = sum_{beta : beta H_{j,i} = alpha} z^(beta)_{i,j,k}`
    /// for the `pos`-th position of `I_j` and the `kidx`-th profile of `T_j`.
    pub fn tau_of(&self, point: &[Rational], j: usize, pos: usize, kidx: usize) -> Result<Vec<Rational>> {
        let l = self.u_layout().ok_or_else(|| Error::precondition("tau is defined for U builds only"))?;
        let ring = self.code.ring();
        let q = ring.cardinality();
        let hji = self.code.entry(j, self.code.support(j)[pos]).code();
        let mut tau = vec![Rational::ZERO; q - 1];
        for beta in 1..q as u16 {
            let alpha = ring.mul_code(beta, hji);
            if alpha != 0 {
                tau[alpha as usize - 1] += &point[l.z[j][kidx][pos][beta as usize - 1]];
            }
        }
        Ok(tau)
    }

    /// Whether `0 <= f <= 1`, `0 <= sigma <= 1` and `z <= sigma` hold at a
    /// point of a `U` build. These are implied by the program, never added.
    pub fn derived_constraints_hold(&self, point: &[Rational]) -> Result<bool> {
        let l = self.u_layout().ok_or_else(|| Error::precondition("derived constraints apply to U builds only"))?;
        let unit = |v: &Rational| !v.is_negative() && *v <= Rational::ONE;
        if !self.f_columns().iter().all(|&c| unit(&point[c])) {
            return Ok(false);
        }
        for (sigma, z) in l.sigma.iter().zip(&l.z) {
            for (kidx, &s) in sigma.iter().enumerate() {
                if !unit(&point[s]) {
                    return Ok(false);
                }
                if z[kidx].iter().flatten().any(|&c| point[c] > point[s]) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn count_report(&self) -> CountReport {
        count_report(self)
    }
}

/// Variable and constraint counts of a build against the published bounds.
/// Constraint counts exclude the nonnegativity bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub kind: PolytopeKind,
    pub variables: u128,
    pub constraints: u128,
    pub variable_bound: Option<u128>,
    pub constraint_bound: Option<u128>,
    /// For `U`: `(T, C(d + q - 1, d))` with `T = max_j |T_j|`.
    pub profiles: Option<(u128, u128)>,
}

impl CountReport {
    pub fn passes(&self) -> bool {
        self.variable_bound.is_none_or(|b| self.variables <= b)
            && self.constraint_bound.is_none_or(|b| self.constraints <= b)
            && self.profiles.is_none_or(|(t, b)| t <= b)
    }
}

impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bound = |b: Option<u128>| b.map_or("n/a".to_string(), |b| b.to_string());
        writeln!(f, "polytope {}", self.kind)?;
        writeln!(f, "variables {} bound {}", self.variables, bound(self.variable_bound))?;
        writeln!(f, "constraints {} bound {}", self.constraints, bound(self.constraint_bound))?;
        if let Some((t, b)) = self.profiles {
            writeln!(f, "profiles {t} bound {b}")?;
        }
        writeln!(f, "verdict {}", if self.passes() { "pass" } else { "fail" })
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

pub fn count_report(build: &PolytopeBuild) -> CountReport {
    let code = &build.code;
    let n = code.num_cols() as u128;
    let m = code.num_rows() as u128;
    let q = code.ring().cardinality() as u128;
    let d = code.max_degree() as u128;
    let pow = |b: u128, e: u128| (0..e).fold(1u128, |acc, _| acc.saturating_mul(b));
    let mut report = CountReport {
        kind: build.kind,
        variables: build.lp.num_variables() as u128,
        constraints: build.lp.num_constraints() as u128,
        variable_bound: None,
        constraint_bound: None,
        profiles: None,
    };
    match &build.aux {
        AuxIndex::Q(_) => {
            report.variable_bound = Some(n * (q - 1) + m * pow(q, d - 1));
            report.constraint_bound = Some(m * (pow(q, d - 1) + d * (q - 1) + 1));
        }
        AuxIndex::U(l) => {
            let t = l.profiles.iter().map(Vec::len).max().unwrap_or(0) as u128;
            report.variable_bound = Some(n * (q - 1) + m * (d * (q - 1) + 1) * t);
            report.constraint_bound = Some(m * (d * (q - 1) + 1) + m * ((d + 1) * (q - 1) + d) * t);
            report.profiles = Some((t, binomial(d + q - 1, d)));
        }
        AuxIndex::S(_) => {
            if d >= 4 {
                report.variable_bound = Some((n + m * (d - 3)) * (q - 1) + m * (d - 2) * q * q);
                report.constraint_bound = Some(m * (d - 2) * (q * q + 3 * q - 2));
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::word_cost;
    use crate::lp_exact::{solve, LpStatus};
    use crate::ring::RingSpec;

    fn caps() -> EnumerationCaps {
        EnumerationCaps::default()
    }

    fn z3_pair() -> ParityCheckMatrix {
        ParityCheckMatrix::from_codes(RingSpec::integers(3).unwrap(), &[vec![1, 1]]).unwrap()
    }

    fn costs(q: usize, rows: &[&[i64]]) -> CostVector {
        CostVector::new(q - 1, rows.iter().map(|r| r.iter().map(|&v| Rational::from(v)).collect()).collect()).unwrap()
    }

    #[test]
    fn q_counts_for_z3_pair() {
        let b = build_q(&z3_pair(), &CostVector::zeros(2, 3), &caps()).unwrap();
        let r = b.count_report();
        assert_eq!((r.variables, r.variable_bound), (7, Some(7)));
        assert_eq!((r.constraints, r.constraint_bound), (5, Some(8)));
        assert!(r.passes());
    }

    #[test]
    fn u_counts_for_z3_pair() {
        let b = build_u(&z3_pair(), &CostVector::zeros(2, 3), &caps()).unwrap();
        let r = b.count_report();
        assert_eq!((r.variables, r.variable_bound), (14, Some(14)));
        assert_eq!(r.profiles, Some((2, 6)));
        assert!(r.passes());
    }

    #[test]
    fn zero_cost_gives_zero_objective() {
        for kind in PolytopeKind::ALL {
            let b = build(kind, &z3_pair(), &CostVector::zeros(2, 3), &caps()).unwrap();
            let sol = solve(&b.lp).unwrap();
            assert_eq!(sol.status, LpStatus::Optimal);
            assert_eq!(sol.objective, Rational::ZERO);
        }
        let b = build_u(&z3_pair(), &CostVector::zeros(2, 3), &caps()).unwrap();
        let mut x = vec![Rational::ZERO; b.lp.num_variables()];
        x[b.u_layout().unwrap().sigma[0][0]] = Rational::ONE;
        assert!(b.lp.is_feasible(&x));
    }

    #[test]
    fn cascade_of_single_degree_four_check() {
        let z2 = RingSpec::integers(2).unwrap();
        let h = ParityCheckMatrix::from_codes(z2, &[vec![1, 1, 1, 1]]).unwrap();
        let c = build_cascaded_code(&h).unwrap();
        assert_eq!((c.matrix.num_rows(), c.matrix.num_cols()), (2, 5));
        assert!((0..2).all(|r| c.matrix.degree(r) == 3));
        assert_eq!(c.chi_index, vec![vec![4]]);
        assert_eq!(c.local_matrix(&h, 0).unwrap().num_cols(), 5);
    }

    #[test]
    fn cascade_dimensions_and_passthrough() {
        let z3 = RingSpec::integers(3).unwrap();
        let h = ParityCheckMatrix::from_codes(
            z3,
            &[vec![1, 2, 1, 1, 2, 0, 0], vec![0, 0, 1, 1, 0, 2, 0], vec![1, 1, 2, 0, 1, 1, 1]],
        )
        .unwrap();
        let c = build_cascaded_code(&h).unwrap();
        // degrees 5, 3, 6: rows 3 + 1 + 4, auxiliary columns 2 + 0 + 3
        assert_eq!((c.matrix.num_rows(), c.matrix.num_cols()), (8, 12));
        assert!(c.chi_index[1].is_empty());
        assert_eq!(
            c.matrix.row(3),
            &h.row(1).iter().copied().chain(std::iter::repeat_n(h.ring().zero(), 5)).collect::<Vec<_>>()[..]
        );
        assert!((0..8).all(|r| c.matrix.degree(r) <= 3));
    }

    #[test]
    fn cascaded_extension_satisfies_f() {
        let gf4 = RingSpec::galois_default(2, 2).unwrap();
        let h = ParityCheckMatrix::from_codes(gf4, &[vec![1, 2, 3, 1, 2], vec![2, 0, 1, 3, 0]]).unwrap();
        let c = build_cascaded_code(&h).unwrap();
        for word in h.enumerate_codebook(&caps()).unwrap() {
            let ext = c.extend_word(&h, &word).unwrap();
            assert!(c.matrix.is_codeword(&ext).unwrap());
        }
    }

    #[test]
    fn s_counts_within_bounds() {
        let z2 = RingSpec::integers(2).unwrap();
        let h = ParityCheckMatrix::from_codes(z2, &[vec![1, 1, 1, 1, 0], vec![0, 1, 1, 1, 1]]).unwrap();
        let r = build_s(&h, &CostVector::zeros(5, 2), &caps()).unwrap().count_report();
        assert!(r.variable_bound.is_some() && r.passes(), "{r}");
        let r = build_s(&z3_pair(), &CostVector::zeros(2, 3), &caps()).unwrap().count_report();
        assert_eq!(r.variable_bound, None);
    }

    #[test]
    fn codeword_embeddings_are_feasible_with_matching_objective() {
        let z4 = RingSpec::integers(4).unwrap();
        let h = ParityCheckMatrix::from_codes(z4, &[vec![1, 3, 1, 1, 0], vec![3, 0, 1, 1, 3]]).unwrap();
        let c = costs(4, &[&[1, -2, 3], &[0, 1, -1], &[2, 2, -3], &[-1, 0, 1], &[1, 1, 1]]);
        for kind in PolytopeKind::ALL {
            let b = build(kind, &h, &c, &caps()).unwrap();
            for word in h.enumerate_codebook(&caps()).unwrap() {
                let x = b.embed_codeword(&word).unwrap();
                assert!(b.lp.is_feasible(&x), "{kind} {word:?}");
                assert_eq!(b.lp.objective(&x), word_cost(&c, &word).unwrap());
                if kind == PolytopeKind::U {
                    assert!(b.derived_constraints_hold(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn objectives_agree_on_small_code() {
        let gf4 = RingSpec::galois_default(2, 2).unwrap();
        let h = ParityCheckMatrix::from_codes(gf4, &[vec![1, 2, 3, 1, 0], vec![0, 1, 1, 2, 3]]).unwrap();
        let c = costs(4, &[&[1, -2, 3], &[0, 1, -1], &[2, 2, -3], &[-1, 0, 1], &[1, -1, 1]]);
        let objs: Vec<Rational> = PolytopeKind::ALL
            .iter()
            .map(|&k| solve(&build(k, &h, &c, &caps()).unwrap().lp).unwrap().objective)
            .collect();
        assert_eq!(objs[0], objs[1]);
        assert_eq!(objs[0], objs[2]);
    }

    #[test]
    fn tau_examples() {
        let z4 = RingSpec::integers(4).unwrap();
        let h = ParityCheckMatrix::from_codes(z4, &[vec![1, 3]]).unwrap();
        let b = build_u(&h, &CostVector::zeros(2, 4), &caps()).unwrap();
        let l = b.u_layout().unwrap();
        let mut x = vec![Rational::ZERO; b.lp.num_variables()];
        assert!(b.tau_of(&x, 0, 0, 0).unwrap().iter().all(Rational::is_zero));
        for (a, v) in [(1, 1), (2, 2), (3, 5)] {
            x[l.z[0][1][0][a - 1]] = Rational::from(v as i64);
            x[l.z[0][1][1][a - 1]] = Rational::from(v as i64);
        }
        let ints = |v: Vec<Rational>| v.iter().map(|r| r.to_f64() as i64).collect::<Vec<_>>();
        // entry 1: identity
        assert_eq!(ints(b.tau_of(&x, 0, 0, 1).unwrap()), vec![1, 2, 5]);
        // entry 3: 1 -> 3, 2 -> 2, 3 -> 1
        assert_eq!(ints(b.tau_of(&x, 0, 1, 1).unwrap()), vec![5, 2, 1]);
    }

    #[test]
    fn sigma_above_one_violates_derived_and_program() {
        let b = build_u(&z3_pair(), &CostVector::zeros(2, 3), &caps()).unwrap();
        let mut x = vec![Rational::ZERO; b.lp.num_variables()];
        x[b.u_layout().unwrap().sigma[0][0]] = "3/2".parse().unwrap();
        assert!(!b.derived_constraints_hold(&x).unwrap());
        assert!(!b.lp.is_feasible(&x));
    }

    // With a zero-divisor entry the mass z^(beta) whose check product is zero
    // is not tied to any sigma, so U can be strictly larger than Q.
    #[test]
    fn zero_divisor_entry_loosens_u() {
        let z4 = RingSpec::integers(4).unwrap();
        let h = ParityCheckMatrix::from_codes(z4, &[vec![2, 2]]).unwrap();
        let c = costs(4, &[&[0, -1, 0], &[0, 0, 0]]);
        let q = solve(&build_q(&h, &c, &caps()).unwrap().lp).unwrap();
        let u = solve(&build_u(&h, &c, &caps()).unwrap().lp).unwrap();
        assert_eq!(q.status, LpStatus::Optimal);
        assert_eq!(q.objective, Rational::from(-1i64));
        assert_eq!(u.status, LpStatus::Unbounded);
    }

    #[test]
    fn polytope_kind_parse() {
        assert_eq!("U".parse::<PolytopeKind>().unwrap(), PolytopeKind::U);
        assert!("x".parse::<PolytopeKind>().is_err());
        assert_eq!(PolytopeKind::S.to_string(), "s");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(7, 0), 1);
        assert_eq!(binomial(9, 5), 126);
    }
}
