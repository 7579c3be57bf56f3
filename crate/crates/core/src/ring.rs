//! Finite ring arithmetic for `Z_q` and `GF(p^m)`.
//!
//! Every ring is stored as full addition/multiplication tables over the
//! canonical element codes `0..q`. For `GF(p^m)` the code of a polynomial
//! residue is its base-`p` digit vector, coefficient of `x^i` in digit `i`.
//! Cardinality is capped at 256 so the tables stay small.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported ring.
pub const MAX_CARDINALITY: usize = 256;

/// Built-in irreducible moduli (ascending coefficients) for `p^m <= 16`, `m >= 2`.
const DEFAULT_MODULI: &[(u32, u32, &[u32])] =
    &[(2, 2, &[1, 1, 1]), (2, 3, &[1, 1, 0, 1]), (2, 4, &[1, 1, 0, 0, 1]), (3, 2, &[1, 0, 1])];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingKind {
    Integers { q: u32 },
    Galois { p: u32, m: u32, modulus: Vec<u32> },
}

/// Identity of a ring, used to reject operands drawn from different rings.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingId(u32);

/// An element of some [`RingSpec`], identified by its canonical code.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    ring: RingId,
    code: u16,
}

impl RingElement {
    pub fn code(self) -> u16 {
        self.code
    }

    pub fn ring_id(self) -> RingId {
        self.ring
    }

    pub fn is_zero(self) -> bool {
        self.code == 0
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

#[derive(Debug)]
struct Tables {
    card: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    characteristic: u32,
}

/// A finite commutative ring `Z_q` or `GF(p^m)`. Cheap to clone.
#[derive(Clone, Debug)]
pub struct RingSpec {
    kind: RingKind,
    id: RingId,
    tables: Arc<Tables>,
}

impl PartialEq for RingSpec {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for RingSpec {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

// Polynomials over GF(p) as ascending coefficient vectors without trailing zeros.
fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = poly_trim(b.to_vec());
    let mut r = poly_trim(a.to_vec());
    let lead_inv = mod_inverse(*b.last().expect("nonzero divisor"), p);
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = (r.last().unwrap() * lead_inv) % p;
        for (i, &bc) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - (factor * bc) % p) % p;
        }
        r = poly_trim(r);
    }
    r
}

fn mod_inverse(a: u32, p: u32) -> u32 {
    (1..p).find(|x| (a * x) % p == 1).expect("unit modulo prime")
}

fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let deg = modulus.len() - 1;
    // any reducible polynomial has a monic factor of degree <= deg/2
    for fdeg in 1..=deg / 2 {
        let count = (p as usize).pow(fdeg as u32);
        for low in 0..count {
            let mut f = Vec::with_capacity(fdeg + 1);
            let mut v = low;
            for _ in 0..fdeg {
                f.push((v % p as usize) as u32);
                v /= p as usize;
            }
            f.push(1);
            if poly_rem(modulus, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn ring_id_for(kind: &RingKind) -> RingId {
    // FNV-1a over the canonical spec string
    let text = match kind {
        RingKind::Integers { q } => format!("Z{q}"),
        RingKind::Galois { p, m, modulus } => format!("GF({p}^{m}){modulus:?}"),
    };
    let mut h: u32 = 0x811c_9dc5;
    for b in text.bytes() {
        h ^= b as u32;
        h = h.wrapping_mul(0x0100_0193);
    }
    RingId(h)
}

impl RingSpec {
    /// `Z_q` for `2 <= q <= 256`.
    pub fn integers(q: u32) -> Result<Self> {
        if q < 2 || q as usize > MAX_CARDINALITY {
            return Err(Error::InvalidRing(format!("Z{q}: q must lie in [2, {MAX_CARDINALITY}]")));
        }
        let card = q as usize;
        let mut add = vec![0u16; card * card];
        let mut mul = vec![0u16; card * card];
        for a in 0..card {
            for b in 0..card {
                add[a * card + b] = ((a + b) % card) as u16;
                mul[a * card + b] = ((a * b) % card) as u16;
            }
        }
        Ok(Self::from_tables(RingKind::Integers { q }, card, add, mul))
    }

    /// `GF(p^m)` with the given modulus (ascending coefficients, length `m + 1`).
    pub fn galois(p: u32, m: u32, modulus: Vec<u32>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("GF({p}^{m}): {p} is not prime")));
        }
        if m == 0 {
            return Err(Error::InvalidRing("GF(p^0) is not a field".into()));
        }
        let card = (p as usize)
            .checked_pow(m)
            .filter(|&c| c <= MAX_CARDINALITY)
            .ok_or_else(|| Error::InvalidRing(format!("GF({p}^{m}) exceeds {MAX_CARDINALITY} elements")))?;
        if modulus.len() != m as usize + 1 {
            return Err(Error::InvalidRing(format!(
                "modulus for GF({p}^{m}) needs {} coefficients, got {}",
                m + 1,
                modulus.len()
            )));
        }
        if let Some(&c) = modulus.iter().find(|&&c| c >= p) {
            return Err(Error::InvalidRing(format!("modulus coefficient {c} not reduced mod {p}")));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::InvalidRing("modulus must be monic".into()));
        }
        if !is_irreducible(&modulus, p) {
            return Err(Error::InvalidRing(format!("modulus {modulus:?} is reducible over GF({p})")));
        }

        let m_us = m as usize;
        let digits = |mut code: usize| -> Vec<u32> {
            let mut d = Vec::with_capacity(m_us);
            for _ in 0..m_us {
                d.push((code % p as usize) as u32);
                code /= p as usize;
            }
            d
        };
        let encode = |d: &[u32]| -> u16 { d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize) as u16 };

        let mut add = vec![0u16; card * card];
        let mut mul = vec![0u16; card * card];
        for a in 0..card {
            let da = digits(a);
            for b in 0..card {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * card + b] = encode(&sum);

                let mut prod = vec![0u32; 2 * m_us];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut rem = poly_rem(&prod, &modulus, p);
                rem.resize(m_us, 0);
                mul[a * card + b] = encode(&rem);
            }
        }
        Ok(Self::from_tables(RingKind::Galois { p, m, modulus }, card, add, mul))
    }

    /// `GF(p^m)` using the built-in modulus (`x` for prime fields).
    pub fn galois_default(p: u32, m: u32) -> Result<Self> {
        if m == 1 {
            return Self::galois(p, 1, vec![0, 1]);
        }
        let modulus = DEFAULT_MODULI
            .iter()
            .find(|(pp, mm, _)| *pp == p && *mm == m)
            .map(|(_, _, coeffs)| coeffs.to_vec())
            .ok_or_else(|| Error::InvalidRing(format!("no built-in modulus for GF({p}^{m}); supply one explicitly")))?;
        Self::galois(p, m, modulus)
    }

    fn from_tables(kind: RingKind, card: usize, add: Vec<u16>, mul: Vec<u16>) -> Self {
        let neg =
            (0..card).map(|a| (0..card).find(|&b| add[a * card + b] == 0).expect("additive inverse") as u16).collect();
        let mut characteristic = 1u32;
        let mut acc = 1u16;
        while acc != 0 {
            acc = add[acc as usize * card + 1];
            characteristic += 1;
        }
        let id = ring_id_for(&kind);
        Self { kind, id, tables: Arc::new(Tables { card, add, mul, neg, characteristic }) }
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn id(&self) -> RingId {
        self.id
    }

    pub fn cardinality(&self) -> usize {
        self.tables.card
    }

    /// Additive order of `1`.
    pub fn characteristic(&self) -> u32 {
        self.tables.characteristic
    }

    pub fn is_field(&self) -> bool {
        match self.kind {
            RingKind::Integers { q } => is_prime(q),
            RingKind::Galois { .. } => true,
        }
    }

    pub fn zero(&self) -> RingElement {
        RingElement { ring: self.id, code: 0 }
    }

    pub fn one(&self) -> RingElement {
        RingElement { ring: self.id, code: 1 }
    }

    /// Element with canonical code `code`.
    pub fn element(&self, code: u16) -> Result<RingElement> {
        if (code as usize) < self.cardinality() {
            Ok(RingElement { ring: self.id, code })
        } else {
            Err(Error::InvalidElement { code: code as u64, ring: self.to_string() })
        }
    }

    /// Elements in ascending canonical order.
    pub fn elements(&self) -> impl Iterator<Item = RingElement> + '_ {
        (0..self.cardinality() as u16).map(|code| RingElement { ring: self.id, code })
    }

    /// `R \ {0}` in ascending canonical order. The position of `alpha` in this
    /// list is `alpha.code() - 1`, which fixes every per-symbol indexing.
    pub fn nonzero_elements(&self) -> Vec<RingElement> {
        self.elements().skip(1).collect()
    }

    fn check(&self, a: RingElement) -> Result<()> {
        if a.ring == self.id && (a.code as usize) < self.cardinality() {
            Ok(())
        } else {
            Err(Error::RingMismatch { ring: self.to_string() })
        }
    }

    pub fn add(&self, a: RingElement, b: RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement { ring: self.id, code: self.add_code(a.code, b.code) })
    }

    pub fn sub(&self, a: RingElement, b: RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement { ring: self.id, code: self.add_code(a.code, self.neg_code(b.code)) })
    }

    pub fn neg(&self, a: RingElement) -> Result<RingElement> {
        self.check(a)?;
        Ok(RingElement { ring: self.id, code: self.neg_code(a.code) })
    }

    pub fn mul(&self, a: RingElement, b: RingElement) -> Result<RingElement> {
        self.check(a)?;
        self.check(b)?;
        Ok(RingElement { ring: self.id, code: self.mul_code(a.code, b.code) })
    }

    /// `alpha` added to itself `k` times (`0` when `k == 0`).
    pub fn scalar_repeat(&self, alpha: RingElement, k: u64) -> Result<RingElement> {
        self.check(alpha)?;
        Ok(RingElement { ring: self.id, code: self.repeat_code(alpha.code, k) })
    }

    pub fn is_unit(&self, a: RingElement) -> Result<bool> {
        self.check(a)?;
        Ok(self.is_unit_code(a.code))
    }

    // Unchecked code-level arithmetic for hot loops. Codes must be < cardinality.

    #[inline]
    pub fn add_code(&self, a: u16, b: u16) -> u16 {
        self.tables.add[a as usize * self.tables.card + b as usize]
    }

    #[inline]
    pub fn mul_code(&self, a: u16, b: u16) -> u16 {
        self.tables.mul[a as usize * self.tables.card + b as usize]
    }

    #[inline]
    pub fn neg_code(&self, a: u16) -> u16 {
        self.tables.neg[a as usize]
    }

    pub fn repeat_code(&self, a: u16, k: u64) -> u16 {
        let reps = k % self.tables.characteristic as u64;
        (0..reps).fold(0, |acc, _| self.add_code(acc, a))
    }

    pub fn is_unit_code(&self, a: u16) -> bool {
        (0..self.cardinality() as u16).any(|b| self.mul_code(a, b) == 1)
    }

    /// Wrap a raw code known to be in range.
    pub(crate) fn elem(&self, code: u16) -> RingElement {
        debug_assert!((code as usize) < self.cardinality());
        RingElement { ring: self.id, code }
    }
}

impl fmt::Display for RingSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            RingKind::Integers { q } => write!(f, "Z{q}"),
            RingKind::Galois { p, m, modulus } => {
                let coeffs: Vec<String> = modulus.iter().map(|c| c.to_string()).collect();
                write!(f, "GF({p}^{m})[{}]", coeffs.join(","))
            }
        }
    }
}

impl FromStr for RingSpec {
    type Err = Error;

    /// `Z<q>` or `GF(<p>^<m>)[c0,c1,...,cm]`; the bracketed modulus may be
    /// omitted when a built-in one exists.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidRing(format!("unrecognised ring spec {s:?}"));
        if let Some(rest) = s.strip_prefix('Z') {
            if rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            let q: u32 = rest.parse().map_err(|_| bad())?;
            return Self::integers(q);
        }
        let rest = s.strip_prefix("GF(").ok_or_else(bad)?;
        let (inner, tail) = rest.split_once(')').ok_or_else(bad)?;
        let (p, m) = inner.split_once('^').ok_or_else(bad)?;
        let p: u32 = p.trim().parse().map_err(|_| bad())?;
        let m: u32 = m.trim().parse().map_err(|_| bad())?;
        if m > 8 || p as usize > MAX_CARDINALITY {
            return Err(Error::InvalidRing(format!("GF({p}^{m}) exceeds {MAX_CARDINALITY} elements")));
        }
        let tail = tail.trim();
        if tail.is_empty() {
            return Self::galois_default(p, m);
        }
        let list = tail.strip_prefix('[').and_then(|t| t.strip_suffix(']')).ok_or_else(bad)?;
        let modulus =
            list.split(',').map(|c| c.trim().parse::<u32>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        Self::galois(p, m, modulus)
    }
}
