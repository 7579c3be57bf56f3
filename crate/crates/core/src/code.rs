//! Parity-check matrices over a [`RingSpec`], their local single-parity-check
//! codes, the count profiles of local codewords, and brute-force codebook
//! enumeration.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{RingElement, RingSpec};

/// Limits on exhaustive enumeration. Exceeding a limit is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationCaps {
    /// Bound on `q^(N-1)` for single-parity-check enumeration (local codes, `C_Γ`, `T_j`).
    pub local: u128,
    /// Bound on `q^n` for full codebook enumeration.
    pub codebook: u128,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        Self { local: 1 << 20, codebook: 1_000_000 }
    }
}

fn pow_u128(base: usize, exp: usize) -> u128 {
    (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX)
}

fn check_cap(what: impl Into<String>, size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::CapExceeded { what: what.into(), size, cap })
    } else {
        Ok(())
    }
}

/// All `b` with `sum_i b_i * coeffs_i = 0`, in lexicographic order of codes
/// (first coordinate most significant).
fn spc_solutions(ring: &RingSpec, coeffs: &[u16], cap: u128, what: &str) -> Result<Vec<Vec<u16>>> {
    let q = ring.cardinality();
    let Some((&last, prefix)) = coeffs.split_last() else {
        return Ok(vec![vec![]]);
    };
    check_cap(what, pow_u128(q, prefix.len()), cap)?;

    // preimages[t] = { b : b * last = t }, ascending
    let mut preimages = vec![Vec::new(); q];
    for b in 0..q as u16 {
        preimages[ring.mul_code(b, last) as usize].push(b);
    }

    let mut out = Vec::new();
    let mut word = vec![0u16; coeffs.len()];
    let mut partial = vec![0u16; prefix.len() + 1];
    loop {
        let need = ring.neg_code(partial[prefix.len()]);
        for &b in &preimages[need as usize] {
            word[prefix.len()] = b;
            out.push(word.clone());
            check_cap(what, out.len() as u128, cap)?;
        }
        // odometer over the prefix, rightmost digit fastest
        let mut pos = prefix.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            word[pos] += 1;
            if (word[pos] as usize) < q {
                break;
            }
            word[pos] = 0;
        }
        for p in pos..prefix.len() {
            partial[p + 1] = ring.add_code(partial[p], ring.mul_code(word[p], prefix[p]));
        }
    }
}

/// Count profile: number of entries equal to each nonzero element, in
/// canonical order of `R \ {0}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CardinalityVector {
    counts: Vec<u32>,
}

impl CardinalityVector {
    pub fn new(counts: Vec<u32>) -> Self {
        Self { counts }
    }

    pub fn zero(len: usize) -> Self {
        Self { counts: vec![0; len] }
    }

    /// Count for the nonzero element with code `alpha_code`.
    pub fn get(&self, alpha_code: u16) -> u32 {
        self.counts[alpha_code as usize - 1]
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().map(|&c| c as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// `sum_alpha alpha * k_alpha` using repeated addition.
    pub fn weighted_sum(&self, ring: &RingSpec) -> u16 {
        self.counts
            .iter()
            .enumerate()
            .fold(0, |acc, (idx, &k)| ring.add_code(acc, ring.repeat_code(idx as u16 + 1, k as u64)))
    }
}

impl fmt::Display for CardinalityVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Count profile of a word over `R`: `k_alpha = |{i : a_i = alpha}|`.
pub fn kappa_gamma(ring: &RingSpec, word: &[RingElement]) -> CardinalityVector {
    let mut counts = vec![0u32; ring.cardinality() - 1];
    for a in word {
        if !a.is_zero() {
            counts[a.code() as usize - 1] += 1;
        }
    }
    CardinalityVector { counts }
}

/// A codeword of a local single-parity-check code, indexed by the check's
/// support in ascending column order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalCodeword {
    values: Vec<RingElement>,
}

impl LocalCodeword {
    pub fn new(values: Vec<RingElement>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[RingElement] {
        &self.values
    }

    /// Value at the `pos`-th support position.
    pub fn at(&self, pos: usize) -> RingElement {
        self.values[pos]
    }
}

/// All length-`n` words over `ring` summing to zero.
pub fn gamma_code(ring: &RingSpec, n: usize, cap: u128) -> Result<Vec<Vec<RingElement>>> {
    if n == 0 {
        return Err(Error::precondition("C_Gamma needs N >= 1"));
    }
    let ones = vec![1u16; n];
    Ok(spc_solutions(ring, &ones, cap, "single-parity-check code")?
        .into_iter()
        .map(|w| w.into_iter().map(|c| ring.elem(c)).collect())
        .collect())
}

/// Members of [`gamma_code`] whose count profile equals `k`.
pub fn gamma_code_constrained(
    ring: &RingSpec,
    n: usize,
    k: &CardinalityVector,
    cap: u128,
) -> Result<Vec<Vec<RingElement>>> {
    if k.counts().len() != ring.cardinality() - 1 {
        return Err(Error::LengthMismatch { expected: ring.cardinality() - 1, got: k.counts().len() });
    }
    Ok(gamma_code(ring, n, cap)?.into_iter().filter(|a| &kappa_gamma(ring, a) == k).collect())
}

/// `m x n` parity-check matrix with no all-zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityCheckMatrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    entries: Vec<RingElement>,
    supports: Vec<Vec<usize>>,
}

impl ParityCheckMatrix {
    pub fn new(ring: RingSpec, rows: Vec<Vec<RingElement>>) -> Result<Self> {
        let m = rows.len();
        if m == 0 {
            return Err(Error::InvalidMatrix("matrix needs at least one row".into()));
        }
        let n = rows[0].len();
        if n == 0 {
            return Err(Error::InvalidMatrix("matrix needs at least one column".into()));
        }
        let mut entries = Vec::with_capacity(m * n);
        let mut supports = Vec::with_capacity(m);
        for (j, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!("row {j} has {} entries, expected {n}", row.len())));
            }
            for &e in &row {
                if e.ring_id() != ring.id() {
                    return Err(Error::RingMismatch { ring: ring.to_string() });
                }
            }
            let support: Vec<usize> = (0..n).filter(|&i| !row[i].is_zero()).collect();
            if support.is_empty() {
                return Err(Error::InvalidMatrix(format!("row {j} is all zeros")));
            }
            supports.push(support);
            entries.extend(row);
        }
        Ok(Self { ring, rows: m, cols: n, entries, supports })
    }

    pub fn from_codes(ring: RingSpec, rows: &[Vec<u16>]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&c| ring.element(c)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::new(ring, rows)
    }

    pub fn ring(&self) -> &RingSpec {
        &self.ring
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, j: usize, i: usize) -> RingElement {
        self.entries[j * self.cols + i]
    }

    pub fn row(&self, j: usize) -> &[RingElement] {
        &self.entries[j * self.cols..(j + 1) * self.cols]
    }

    /// `I_j`, ascending.
    pub fn support(&self, j: usize) -> &[usize] {
        &self.supports[j]
    }

    pub fn degree(&self, j: usize) -> usize {
        self.supports[j].len()
    }

    pub fn max_degree(&self) -> usize {
        self.supports.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Rows containing column `i`.
    pub fn rows_of(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.rows).filter(move |&j| !self.entry(j, i).is_zero())
    }

    fn support_coeffs(&self, j: usize) -> Vec<u16> {
        self.supports[j].iter().map(|&i| self.entry(j, i).code()).collect()
    }

    fn check_word(&self, word: &[RingElement]) -> Result<()> {
        if word.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: word.len() });
        }
        if word.iter().any(|w| w.ring_id() != self.ring.id()) {
            return Err(Error::RingMismatch { ring: self.ring.to_string() });
        }
        Ok(())
    }

    fn check_row(&self, j: usize) -> Result<()> {
        if j >= self.rows {
            return Err(Error::precondition(format!("row {j} out of range (m = {})", self.rows)));
        }
        Ok(())
    }

    /// Whether `sum_{i in I_j} c_i * H_{j,i} = 0`.
    pub fn check_satisfied(&self, word: &[RingElement], j: usize) -> Result<bool> {
        self.check_word(word)?;
        self.check_row(j)?;
        let r = &self.ring;
        let sum = self.supports[j]
            .iter()
            .fold(0u16, |acc, &i| r.add_code(acc, r.mul_code(word[i].code(), self.entry(j, i).code())));
        Ok(sum == 0)
    }

    pub fn is_codeword(&self, word: &[RingElement]) -> Result<bool> {
        for j in 0..self.rows {
            if !self.check_satisfied(word, j)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The local code `C_j` in lexicographic order.
    pub fn enumerate_local_code(&self, j: usize, caps: &EnumerationCaps) -> Result<Vec<LocalCodeword>> {
        self.check_row(j)?;
        let sols = spc_solutions(&self.ring, &self.support_coeffs(j), caps.local, &format!("local code of check {j}"))?;
        Ok(sols
            .into_iter()
            .map(|w| LocalCodeword { values: w.into_iter().map(|c| self.ring.elem(c)).collect() })
            .collect())
    }

    /// `(kappa_j(b))_alpha = |{i in I_j : b_i * H_{j,i} = alpha}|`.
    pub fn kappa(&self, j: usize, b: &LocalCodeword) -> Result<CardinalityVector> {
        self.check_row(j)?;
        let coeffs = self.support_coeffs(j);
        if b.values.len() != coeffs.len() {
            return Err(Error::LengthMismatch { expected: coeffs.len(), got: b.values.len() });
        }
        if b.values.iter().any(|v| v.ring_id() != self.ring.id()) {
            return Err(Error::RingMismatch { ring: self.ring.to_string() });
        }
        let r = &self.ring;
        let products: Vec<u16> = b.values.iter().zip(&coeffs).map(|(v, &h)| r.mul_code(v.code(), h)).collect();
        if products.iter().fold(0u16, |acc, &p| r.add_code(acc, p)) != 0 {
            return Err(Error::NotLocalCodeword { row: j });
        }
        let mut counts = vec![0u32; r.cardinality() - 1];
        for p in products {
            if p != 0 {
                counts[p as usize - 1] += 1;
            }
        }
        Ok(CardinalityVector { counts })
    }

    /// `T_j` as the image of `kappa_j` over the enumerated local code.
    pub fn tj_image(&self, j: usize, caps: &EnumerationCaps) -> Result<BTreeSet<CardinalityVector>> {
        self.enumerate_local_code(j, caps)?.iter().map(|b| self.kappa(j, b)).collect()
    }

    /// The closed-form set `{k : sum alpha*k_alpha = 0, sum k_alpha <= d_j}`.
    pub fn tj_formula(&self, j: usize, caps: &EnumerationCaps) -> Result<BTreeSet<CardinalityVector>> {
        self.check_row(j)?;
        tj_formula_for(&self.ring, self.degree(j), caps.local)
    }

    /// Every word satisfying all checks, in lexicographic order.
    pub fn enumerate_codebook(&self, caps: &EnumerationCaps) -> Result<Vec<Vec<RingElement>>> {
        let q = self.ring.cardinality();
        check_cap("codebook", pow_u128(q, self.cols), caps.codebook)?;
        let r = &self.ring;
        // rows whose support ends at column i are checked once i is assigned
        let mut closes: Vec<Vec<usize>> = vec![Vec::new(); self.cols];
        for j in 0..self.rows {
            closes[*self.supports[j].last().unwrap()].push(j);
        }
        let mut out = Vec::new();
        let mut word = vec![0u16; self.cols];
        let mut sums = vec![vec![0u16; self.rows]; self.cols + 1];

        fn dfs(
            h: &ParityCheckMatrix,
            r: &RingSpec,
            closes: &[Vec<usize>],
            i: usize,
            word: &mut Vec<u16>,
            sums: &mut Vec<Vec<u16>>,
            out: &mut Vec<Vec<RingElement>>,
        ) {
            if i == h.cols {
                out.push(word.iter().map(|&c| r.elem(c)).collect());
                return;
            }
            for v in 0..r.cardinality() as u16 {
                word[i] = v;
                let mut next = sums[i].clone();
                for (j, s) in next.iter_mut().enumerate() {
                    let hji = h.entry(j, i).code();
                    if hji != 0 {
                        *s = r.add_code(*s, r.mul_code(v, hji));
                    }
                }
                if closes[i].iter().all(|&j| next[j] == 0) {
                    sums[i + 1] = next;
                    dfs(h, r, closes, i + 1, word, sums, out);
                }
            }
        }
        dfs(self, r, &closes, 0, &mut word, &mut sums, &mut out);
        Ok(out)
    }

    /// Plain-text form: ring spec, `m n`, then the rows of element codes.
    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n{} {}\n", self.ring, self.rows, self.cols);
        for j in 0..self.rows {
            let row: Vec<String> = self.row(j).iter().map(|e| e.code().to_string()).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(n, l)| (n + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (ln, ring_line) = lines.next().ok_or_else(|| Error::parse(1, "missing ring line"))?;
        let ring: RingSpec = ring_line.parse().map_err(|e: Error| Error::parse(ln, e.to_string()))?;
        let (ln, dims) = lines.next().ok_or_else(|| Error::parse(ln + 1, "missing dimension line"))?;
        let dims: Vec<usize> = dims
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad dimension {t:?}"))))
            .collect::<Result<_>>()?;
        let [m, n] = dims[..] else {
            return Err(Error::parse(ln, "expected `m n`"));
        };
        if m == 0 || n == 0 {
            return Err(Error::parse(ln, "dimensions must be positive"));
        }
        let mut rows = Vec::with_capacity(m.min(1 << 16));
        for _ in 0..m {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(ln, "missing matrix row"))?;
            let row = line
                .split_whitespace()
                .map(|t| {
                    let code: u16 = t.parse().map_err(|_| Error::parse(ln, format!("bad element {t:?}")))?;
                    ring.element(code).map_err(|e| Error::parse(ln, e.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::parse(ln, format!("expected {n} entries, got {}", row.len())));
            }
            rows.push(row);
        }
        if let Some((ln, _)) = lines.next() {
            return Err(Error::parse(ln, "trailing content after matrix"));
        }
        Self::new(ring, rows)
    }

    /// Binary alist import; the result is over `Z2`.
    pub fn parse_alist(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(n, l)| (n + 1, l.trim())).filter(|(_, l)| !l.is_empty());
        let mut numbers = |expect: Option<usize>| -> Result<(usize, Vec<usize>)> {
            let (ln, line) = lines.next().ok_or_else(|| Error::parse(0, "unexpected end of alist"))?;
            let v: Vec<usize> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(ln, format!("bad integer {t:?}"))))
                .collect::<Result<_>>()?;
            if let Some(e) = expect {
                if v.len() != e {
                    return Err(Error::parse(ln, format!("expected {e} integers, got {}", v.len())));
                }
            }
            Ok((ln, v))
        };
        let (ln, header) = numbers(Some(2))?;
        let (n, m) = (header[0], header[1]);
        if n == 0 || m == 0 || n > 1 << 16 || m > 1 << 16 {
            return Err(Error::parse(ln, "alist dimensions out of range"));
        }
        numbers(Some(2))?;
        let (_, col_w) = numbers(Some(n))?;
        let (_, row_w) = numbers(Some(m))?;
        let mut dense = vec![vec![0u16; n]; m];
        for (i, &w) in col_w.iter().enumerate() {
            let (ln, idx) = numbers(None)?;
            let nz: Vec<usize> = idx.into_iter().filter(|&x| x != 0).collect();
            if nz.len() != w {
                return Err(Error::parse(ln, format!("column {} weight {w} disagrees with list", i + 1)));
            }
            for j in nz {
                if j > m {
                    return Err(Error::parse(ln, format!("row index {j} out of range")));
                }
                dense[j - 1][i] = 1;
            }
        }
        for (j, &w) in row_w.iter().enumerate() {
            let (ln, idx) = numbers(None)?;
            let nz: Vec<usize> = idx.into_iter().filter(|&x| x != 0).collect();
            if nz.len() != w {
                return Err(Error::parse(ln, format!("row {} weight {w} disagrees with list", j + 1)));
            }
            let mut listed = vec![0u16; n];
            for i in nz {
                if i > n {
                    return Err(Error::parse(ln, format!("column index {i} out of range")));
                }
                listed[i - 1] = 1;
            }
            if listed != dense[j] {
                return Err(Error::parse(ln, format!("row {} list disagrees with column lists", j + 1)));
            }
        }
        Self::from_codes(RingSpec::integers(2)?, &dense)
    }

    /// Accepts either the plain-text format or an alist file.
    pub fn parse_any(text: &str) -> Result<Self> {
        let first = text.split_whitespace().next().unwrap_or("");
        if first.starts_with('Z') || first.starts_with("GF(") {
            Self::parse_text(text)
        } else {
            Self::parse_alist(text)
        }
    }
}

pub(crate) fn tj_formula_for(ring: &RingSpec, degree: usize, cap: u128) -> Result<BTreeSet<CardinalityVector>> {
    let slots = ring.cardinality() - 1;
    // |{k in N^slots : |k| <= d}| = C(d + slots, slots)
    let mut count: u128 = 1;
    for t in 1..=slots as u128 {
        count = count.saturating_mul(degree as u128 + t) / t;
    }
    check_cap("closed-form count-profile set", count, cap)?;

    let mut out = BTreeSet::new();
    let mut k = vec![0u32; slots];
    fn rec(ring: &RingSpec, idx: usize, remaining: u32, k: &mut Vec<u32>, out: &mut BTreeSet<CardinalityVector>) {
        if idx == k.len() {
            let cv = CardinalityVector { counts: k.clone() };
            if cv.weighted_sum(ring) == 0 {
                out.insert(cv);
            }
            return;
        }
        for c in 0..=remaining {
            k[idx] = c;
            rec(ring, idx + 1, remaining - c, k, out);
        }
        k[idx] = 0;
    }
    rec(ring, 0, degree as u32, &mut k, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(s: &str) -> RingSpec {
        s.parse().unwrap()
    }

    fn codes(words: &[Vec<RingElement>]) -> Vec<Vec<u16>> {
        words.iter().map(|w| w.iter().map(|e| e.code()).collect()).collect()
    }

    fn local_codes(h: &ParityCheckMatrix, j: usize) -> Vec<Vec<u16>> {
        h.enumerate_local_code(j, &EnumerationCaps::default())
            .unwrap()
            .iter()
            .map(|b| b.values().iter().map(|e| e.code()).collect())
            .collect()
    }

    fn kv(v: &[u32]) -> CardinalityVector {
        CardinalityVector::new(v.to_vec())
    }

    #[test]
    fn check_satisfied_examples() {
        let z3 = ring("Z3");
        let h = ParityCheckMatrix::from_codes(z3.clone(), &[vec![1, 1]]).unwrap();
        let w = |a, b| vec![z3.element(a).unwrap(), z3.element(b).unwrap()];
        assert!(h.check_satisfied(&w(0, 0), 0).unwrap());
        assert!(h.check_satisfied(&w(1, 2), 0).unwrap());
        assert!(!h.check_satisfied(&w(1, 1), 0).unwrap());
        assert!(matches!(h.check_satisfied(&[z3.zero()], 0), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn local_code_examples() {
        let h = ParityCheckMatrix::from_codes(ring("Z3"), &[vec![1, 1]]).unwrap();
        assert_eq!(local_codes(&h, 0), vec![vec![0, 0], vec![1, 2], vec![2, 1]]);

        let h = ParityCheckMatrix::from_codes(ring("Z2"), &[vec![1, 1, 1]]).unwrap();
        assert_eq!(local_codes(&h, 0), vec![vec![0, 0, 0], vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);

        for r in ["Z2", "Z5", "GF(2^2)"] {
            let h = ParityCheckMatrix::from_codes(ring(r), &[vec![0, 1]]).unwrap();
            assert_eq!(local_codes(&h, 0), vec![vec![0]]);
        }
    }

    #[test]
    fn local_code_cap_is_an_error() {
        let h = ParityCheckMatrix::from_codes(ring("Z4"), &[vec![1; 6]]).unwrap();
        let caps = EnumerationCaps { local: 100, codebook: 100 };
        assert!(matches!(h.enumerate_local_code(0, &caps), Err(Error::CapExceeded { .. })));
        assert!(matches!(h.enumerate_codebook(&caps), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn kappa_examples() {
        let z3 = ring("Z3");
        let h = ParityCheckMatrix::from_codes(z3.clone(), &[vec![1, 1]]).unwrap();
        let b = |a, c| LocalCodeword::new(vec![z3.element(a).unwrap(), z3.element(c).unwrap()]);
        assert!(h.kappa(0, &b(0, 0)).unwrap().is_zero());
        assert_eq!(h.kappa(0, &b(1, 2)).unwrap(), kv(&[1, 1]));
        assert!(matches!(h.kappa(0, &b(1, 1)), Err(Error::NotLocalCodeword { .. })));

        let z4 = ring("Z4");
        let h = ParityCheckMatrix::from_codes(z4.clone(), &[vec![2, 2]]).unwrap();
        let b = LocalCodeword::new(vec![z4.element(2).unwrap(), z4.element(2).unwrap()]);
        assert_eq!(h.kappa(0, &b).unwrap(), kv(&[0, 0, 0]));
    }

    #[test]
    fn tj_examples() {
        let caps = EnumerationCaps::default();
        let h = ParityCheckMatrix::from_codes(ring("Z3"), &[vec![1, 1]]).unwrap();
        let expect: BTreeSet<_> = [kv(&[0, 0]), kv(&[1, 1])].into();
        assert_eq!(h.tj_image(0, &caps).unwrap(), expect);
        assert_eq!(h.tj_formula(0, &caps).unwrap(), expect);

        let h = ParityCheckMatrix::from_codes(ring("Z2"), &[vec![1, 1, 1]]).unwrap();
        let expect: BTreeSet<_> = [kv(&[0]), kv(&[2])].into();
        assert_eq!(h.tj_image(0, &caps).unwrap(), expect);
        assert_eq!(h.tj_formula(0, &caps).unwrap(), expect);
    }

    // Zero-divisor entries make the closed form strictly larger than the image.
    #[test]
    fn tj_formula_exceeds_image_for_zero_divisors() {
        let caps = EnumerationCaps::default();
        let h = ParityCheckMatrix::from_codes(ring("Z4"), &[vec![2, 2]]).unwrap();
        let image = h.tj_image(0, &caps).unwrap();
        let formula = h.tj_formula(0, &caps).unwrap();
        assert!(image.is_subset(&formula));
        assert!(formula.contains(&kv(&[1, 0, 1])));
        assert!(!image.contains(&kv(&[1, 0, 1])));
        assert_eq!(image, [kv(&[0, 0, 0]), kv(&[0, 2, 0])].into());
    }

    // Exhaustive check over all-unit rows: |C_j| = q^(d-1) and image = formula;
    // rows with zero divisors still have image within the formula set.
    #[test]
    fn tj_image_matches_formula_on_unit_rows() {
        let caps = EnumerationCaps::default();
        for r in ["Z2", "Z3", "Z4", "Z5", "GF(2^2)"] {
            let rg = ring(r);
            let q = rg.cardinality();
            for d in 1..=5usize {
                if q.pow(d as u32) > 4096 {
                    continue;
                }
                // a few entry patterns, cycling over all nonzero codes
                for shift in 0..q - 1 {
                    let row: Vec<u16> = (0..d).map(|i| ((i + shift) % (q - 1) + 1) as u16).collect();
                    let h = ParityCheckMatrix::from_codes(rg.clone(), std::slice::from_ref(&row)).unwrap();
                    let local = h.enumerate_local_code(0, &caps).unwrap();
                    let image = h.tj_image(0, &caps).unwrap();
                    let formula = h.tj_formula(0, &caps).unwrap();
                    assert!(image.is_subset(&formula));
                    if row.iter().all(|&c| rg.is_unit_code(c)) {
                        assert_eq!(local.len(), q.pow(d as u32 - 1), "{r} {row:?}");
                        assert_eq!(image, formula, "{r} {row:?}");
                    }
                    for b in &local {
                        let k = h.kappa(0, b).unwrap();
                        let nonzero =
                            b.values().iter().zip(&row).filter(|(v, &c)| rg.mul_code(v.code(), c) != 0).count();
                        assert_eq!(k.total() as usize, nonzero);
                        assert!(nonzero <= d);
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_code_examples() {
        let z3 = ring("Z3");
        assert_eq!(codes(&gamma_code(&z3, 2, 1 << 20).unwrap()), vec![vec![0, 0], vec![1, 2], vec![2, 1]]);
        assert_eq!(codes(&gamma_code(&ring("GF(2^2)"), 1, 1 << 20).unwrap()), vec![vec![0]]);
        assert_eq!(gamma_code(&ring("Z2"), 3, 1 << 20).unwrap().len(), 4);

        assert_eq!(
            codes(&gamma_code_constrained(&z3, 2, &kv(&[1, 1]), 1 << 20).unwrap()),
            vec![vec![1, 2], vec![2, 1]]
        );
        assert_eq!(codes(&gamma_code_constrained(&z3, 2, &kv(&[0, 0]), 1 << 20).unwrap()), vec![vec![0, 0]]);
        assert!(gamma_code_constrained(&z3, 2, &kv(&[2, 0]), 1 << 20).unwrap().is_empty());
    }

    #[test]
    fn codebook_examples() {
        let caps = EnumerationCaps::default();
        let h = ParityCheckMatrix::from_codes(ring("Z2"), &[vec![1, 1]]).unwrap();
        assert_eq!(codes(&h.enumerate_codebook(&caps).unwrap()), vec![vec![0, 0], vec![1, 1]]);
        assert!(matches!(
            ParityCheckMatrix::from_codes(ring("Z3"), &[vec![1, 1], vec![0, 0]]),
            Err(Error::InvalidMatrix(_))
        ));
    }

    #[test]
    fn codebook_matches_naive_scan() {
        let caps = EnumerationCaps::default();
        let h = ParityCheckMatrix::from_codes(ring("Z4"), &[vec![1, 3, 0, 2, 1], vec![0, 2, 1, 1, 3]]).unwrap();
        let fast = h.enumerate_codebook(&caps).unwrap();
        let r = h.ring().clone();
        let mut naive = Vec::new();
        for idx in 0..4usize.pow(5) {
            let word: Vec<RingElement> =
                (0..5).map(|i| r.element(((idx / 4usize.pow(4 - i)) % 4) as u16).unwrap()).collect();
            if h.is_codeword(&word).unwrap() {
                naive.push(word);
            }
        }
        assert_eq!(fast, naive);
        assert!(fast[0].iter().all(|e| e.is_zero()));
    }

    #[test]
    fn text_round_trip() {
        let h = ParityCheckMatrix::from_codes(ring("GF(2^2)"), &[vec![1, 2, 3, 0], vec![0, 1, 1, 1]]).unwrap();
        assert_eq!(ParityCheckMatrix::parse_text(&h.to_text()).unwrap(), h);
        assert!(ParityCheckMatrix::parse_text("Z3\n2 2\n1 1\n0 0\n").is_err());
        assert!(ParityCheckMatrix::parse_text("Z3\n1 2\n1 3\n").is_err());
        assert!(ParityCheckMatrix::parse_text("Z3\n1 2\n1 1 1\n").is_err());
    }

    #[test]
    fn alist_import() {
        // H = [1 1 0; 0 1 1]
        let text = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
        let h = ParityCheckMatrix::parse_alist(text).unwrap();
        assert_eq!(h.ring().to_string(), "Z2");
        assert_eq!(h.support(0), &[0, 1]);
        assert_eq!(h.support(1), &[1, 2]);
        assert_eq!(ParityCheckMatrix::parse_any(text).unwrap(), h);
        let inconsistent = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 3\n2 3\n";
        assert!(ParityCheckMatrix::parse_alist(inconsistent).is_err());
    }
}
