//! Memoryless channels with `q`-ary input and the per-symbol cost vectors
//! `lambda^(alpha)(y) = log(p(y|0) / p(y|alpha))`.
//!
//! Costs are irrational in general. [`ChannelModel::cost_vector`] rounds them
//! to a fixed binary precision and embeds the result as exact rationals, so
//! the LP downstream is still solved exactly. Cost vectors given directly as
//! rationals ([`CostVector::parse`]) skip the channel entirely.

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::lp_exact::Rational;
use crate::ring::RingElement;

/// Default number of fractional bits kept when embedding float costs.
pub const DEFAULT_COST_BITS: u32 = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ChannelModel {
    /// Output alphabet equals the input alphabet; a symbol survives with
    /// probability `1 - p` and otherwise becomes one of the other `q - 1`
    /// symbols uniformly.
    Symmetric { q: usize, p: Rational },
    /// `likelihood[y][c] = p(y | c)`, strictly positive.
    Table { q: usize, likelihood: Vec<Vec<Rational>> },
}

impl ChannelModel {
    pub fn symmetric(q: usize, p: Rational) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidChannel("input alphabet needs q >= 2".into()));
        }
        if !p.is_positive() || p >= Rational::ONE {
            return Err(Error::InvalidChannel(format!("error probability {p} outside (0, 1)")));
        }
        Ok(Self::Symmetric { q, p })
    }

    pub fn table(q: usize, likelihood: Vec<Vec<Rational>>) -> Result<Self> {
        if likelihood.is_empty() {
            return Err(Error::InvalidChannel("table needs at least one output".into()));
        }
        for (y, row) in likelihood.iter().enumerate() {
            if row.len() != q {
                return Err(Error::InvalidChannel(format!("output {y} has {} likelihoods, expected {q}", row.len())));
            }
            if let Some(c) = row.iter().position(|v| !v.is_positive()) {
                return Err(Error::ZeroLikelihood { output: y, input: c });
            }
        }
        Ok(Self::Table { q, likelihood })
    }

    pub fn input_size(&self) -> usize {
        match self {
            Self::Symmetric { q, .. } | Self::Table { q, .. } => *q,
        }
    }

    pub fn output_size(&self) -> usize {
        match self {
            Self::Symmetric { q, .. } => *q,
            Self::Table { likelihood, .. } => likelihood.len(),
        }
    }

    /// `p(y | c)`.
    pub fn likelihood(&self, y: usize, c: usize) -> Rational {
        match self {
            Self::Symmetric { q, p } => {
                if y == c {
                    &Rational::ONE - p
                } else {
                    p / &Rational::from(*q as u64 - 1)
                }
            }
            Self::Table { likelihood, .. } => likelihood[y][c].clone(),
        }
    }

    fn check_output(&self, y: usize) -> Result<()> {
        if y >= self.output_size() {
            return Err(Error::InvalidChannel(format!("output symbol {y} out of range")));
        }
        Ok(())
    }

    /// Exact likelihood ratios `p(y|0) / p(y|alpha)` for `alpha = 1..q`.
    pub fn likelihood_ratios(&self, y: usize) -> Result<Vec<Rational>> {
        self.check_output(y)?;
        let base = self.likelihood(y, 0);
        if !base.is_positive() {
            return Err(Error::ZeroLikelihood { output: y, input: 0 });
        }
        (1..self.input_size())
            .map(|a| {
                let l = self.likelihood(y, a);
                if l.is_positive() {
                    Ok(&base / &l)
                } else {
                    Err(Error::ZeroLikelihood { output: y, input: a })
                }
            })
            .collect()
    }

    /// `lambda(y)` in floating point.
    pub fn lambda_symbol(&self, y: usize) -> Result<Vec<f64>> {
        Ok(self.likelihood_ratios(y)?.iter().map(|r| r.to_f64().ln()).collect())
    }

    pub fn lambda_word(&self, received: &[usize]) -> Result<Vec<Vec<f64>>> {
        received.iter().map(|&y| self.lambda_symbol(y)).collect()
    }

    /// `lambda(y)` rounded to multiples of `2^-bits` and embedded exactly.
    pub fn cost_vector(&self, received: &[usize], bits: u32) -> Result<CostVector> {
        let values = self
            .lambda_word(received)?
            .into_iter()
            .map(|block| {
                block
                    .into_iter()
                    .map(|x| {
                        Rational::from_f64_rounded(x, bits)
                            .ok_or_else(|| Error::InvalidChannel(format!("cost {x} not representable")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        CostVector::new(self.input_size() - 1, values)
    }

    /// Draw a channel output for input symbol `c`.
    pub fn sample_output<R: Rng + ?Sized>(&self, c: usize, rng: &mut R) -> usize {
        match self {
            Self::Symmetric { q, p } => {
                if rng.random::<f64>() >= p.to_f64() {
                    c
                } else {
                    let other = rng.random_range(0..q - 1);
                    if other >= c {
                        other + 1
                    } else {
                        other
                    }
                }
            }
            Self::Table { likelihood, .. } => {
                let weights: Vec<f64> = likelihood.iter().map(|row| row[c].to_f64()).collect();
                let total: f64 = weights.iter().sum();
                let mut u = rng.random::<f64>() * total;
                for (y, w) in weights.iter().enumerate() {
                    if u < *w {
                        return y;
                    }
                    u -= w;
                }
                weights.len() - 1
            }
        }
    }

    /// Parses a TOML channel description:
    ///
    /// ```toml
    /// kind = "symmetric"   # or "table"
    /// p = "1/10"           # symmetric only; rational string or number
    /// table = [["1/2", "1/4"], ["1/2", "3/4"]]  # table only; rows are outputs
    /// ```
    pub fn parse_config(text: &str, q: usize) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: String,
            p: Option<toml::Value>,
            table: Option<Vec<Vec<toml::Value>>>,
        }
        let raw: Raw = toml::from_str(text).map_err(|e| Error::InvalidChannel(e.message().to_string()))?;
        let value = |v: &toml::Value| -> Result<Rational> {
            let s = match v {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) if f.is_finite() => format!("{f}"),
                other => return Err(Error::InvalidChannel(format!("expected a number, got {other}"))),
            };
            s.parse().map_err(|_| Error::InvalidChannel(format!("bad rational {s:?}")))
        };
        match raw.kind.as_str() {
            "symmetric" => {
                if raw.table.is_some() {
                    return Err(Error::InvalidChannel("symmetric channel takes no table".into()));
                }
                let p = raw.p.as_ref().ok_or_else(|| Error::InvalidChannel("missing `p`".into()))?;
                Self::symmetric(q, value(p)?)
            }
            "table" => {
                if raw.p.is_some() {
                    return Err(Error::InvalidChannel("table channel takes no `p`".into()));
                }
                let rows = raw.table.ok_or_else(|| Error::InvalidChannel("missing `table`".into()))?;
                let rows =
                    rows.iter().map(|r| r.iter().map(value).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
                Self::table(q, rows)
            }
            other => Err(Error::InvalidChannel(format!("unknown channel kind {other:?}"))),
        }
    }
}

/// Whitespace-separated output symbol codes.
pub fn parse_received(text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .enumerate()
        .map(|(k, t)| {
            t.parse::<u32>()
                .map(|v| v as usize)
                .map_err(|_| Error::parse(0, format!("received symbol {} is not a code: {t:?}", k + 1)))
        })
        .collect()
}

/// Per-position costs `lambda_i^(alpha)` for `alpha` in canonical nonzero
/// order; `lambda_i^(0) = 0` is implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CostVector {
    width: usize,
    values: Vec<Vec<Rational>>,
}

impl CostVector {
    pub fn new(width: usize, values: Vec<Vec<Rational>>) -> Result<Self> {
        if let Some(b) = values.iter().find(|b| b.len() != width) {
            return Err(Error::LengthMismatch { expected: width, got: b.len() });
        }
        Ok(Self { width, values })
    }

    pub fn zeros(n: usize, q: usize) -> Self {
        Self { width: q - 1, values: vec![vec![Rational::ZERO; q - 1]; n] }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `q - 1`.
    pub fn width(&self) -> usize {
        self.width
    }

    /// `lambda_i^(alpha)` for a nonzero code `alpha`.
    pub fn get(&self, i: usize, alpha_code: u16) -> &Rational {
        &self.values[i][alpha_code as usize - 1]
    }

    pub fn block(&self, i: usize) -> &[Rational] {
        &self.values[i]
    }

    pub fn blocks(&self) -> &[Vec<Rational>] {
        &self.values
    }

    /// `n` lines of `q - 1` rationals.
    pub fn parse(text: &str, q: usize) -> Result<Self> {
        let values = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty())
            .map(|(ln, line)| {
                let block = line
                    .split_whitespace()
                    .map(|t| t.parse::<Rational>().map_err(|e| Error::parse(ln, e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                if block.len() != q - 1 {
                    return Err(Error::parse(ln, format!("expected {} costs, got {}", q - 1, block.len())));
                }
                Ok(block)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(q - 1, values)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for block in &self.values {
            let parts: Vec<String> = block.iter().map(|v| v.to_string()).collect();
            s.push_str(&parts.join(" "));
            s.push('\n');
        }
        s
    }
}

/// `sum_i lambda_i^(c_i)` with `lambda^(0) = 0`.
pub fn word_cost(costs: &CostVector, word: &[RingElement]) -> Result<Rational> {
    if word.len() != costs.len() {
        return Err(Error::LengthMismatch { expected: costs.len(), got: word.len() });
    }
    word.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if c.code() as usize > costs.width() {
                Err(Error::InvalidElement { code: c.code() as u64, ring: format!("cost width {}", costs.width()) })
            } else {
                Ok(costs.get(i, c.code()).clone())
            }
        })
        .sum()
}
