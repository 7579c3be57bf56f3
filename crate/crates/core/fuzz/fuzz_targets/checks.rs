//! Property checks shared by the fuzz targets and the corpus replay test.
//! Each takes raw bytes, must never panic on bad input, and asserts the
//! invariants that hold whenever parsing succeeds.

#![allow(dead_code)]

use polydec::channel::{parse_received, ChannelModel, CostVector};
use polydec::code::{EnumerationCaps, ParityCheckMatrix};
use polydec::decoder::{certify, lp_decode, Outcome};
use polydec::decomposition::{decompose, DecomposeInput};
use polydec::lp_exact::{format_point, parse_point, solve, verify_optimal, LinearProgram, LpStatus};
use polydec::polytopes::PolytopeKind;
use polydec::ring::RingSpec;

const SMALL: EnumerationCaps = EnumerationCaps { local: 4096, codebook: 4096 };

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

pub fn ring_spec(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(ring) = s.parse::<RingSpec>() {
        let again: RingSpec = ring.to_string().parse().expect("display re-parses");
        assert_eq!(again, ring);
        let q = ring.cardinality();
        assert!(q >= 2);
        for a in ring.elements() {
            let n = ring.neg(a).unwrap();
            assert!(ring.add(a, n).unwrap().is_zero());
        }
    }
}

pub fn matrix_text(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(h) = ParityCheckMatrix::parse_text(s) {
        let again = ParityCheckMatrix::parse_text(&h.to_text()).expect("to_text re-parses");
        assert_eq!(again, h);
        assert!((0..h.num_rows()).all(|j| h.degree(j) > 0));
    }
    let _ = ParityCheckMatrix::parse_any(s);
}

pub fn matrix_alist(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(h) = ParityCheckMatrix::parse_alist(s) {
        assert_eq!(h.ring().cardinality(), 2);
        assert_eq!(ParityCheckMatrix::parse_text(&h.to_text()).unwrap(), h);
    }
}

pub fn lp_text(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(lp) = LinearProgram::parse(s) else { return };
    assert_eq!(LinearProgram::parse(&lp.to_text()).expect("to_text re-parses").to_text(), lp.to_text());
    if lp.num_variables() > 8 || lp.num_constraints() > 8 {
        return;
    }
    let Ok(sol) = solve(&lp) else { return };
    if sol.status == LpStatus::Optimal {
        assert!(lp.is_feasible(&sol.values));
        assert!(verify_optimal(&lp, &sol));
        assert_eq!(lp.objective(&sol.values), sol.objective);
    }
}

pub fn point(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(p) = parse_point(s) {
        assert_eq!(parse_point(&format_point(&p)).expect("format re-parses"), p);
    }
}

pub fn cost_vector(data: &[u8]) {
    let Some((&q, rest)) = data.split_first() else { return };
    let q = 2 + q as usize % 7;
    let Some(s) = text(rest) else { return };
    if let Ok(c) = CostVector::parse(s, q) {
        assert_eq!(c.width(), q - 1);
        assert_eq!(CostVector::parse(&c.to_text(), q).unwrap(), c);
    }
}

pub fn channel_config(data: &[u8]) {
    let Some((&q, rest)) = data.split_first() else { return };
    let q = 2 + q as usize % 4;
    let Some(s) = text(rest) else { return };
    if let Ok(ch) = ChannelModel::parse_config(s, q) {
        assert_eq!(ch.input_size(), q);
        for y in 0..ch.output_size().min(8) {
            if let Ok(l) = ch.lambda_symbol(y) {
                assert_eq!(l.len(), q - 1);
            }
        }
    }
}

pub fn received_word(data: &[u8]) {
    let Some(s) = text(data) else { return };
    if let Ok(w) = parse_received(s) {
        let joined: Vec<String> = w.iter().map(|v| v.to_string()).collect();
        assert_eq!(parse_received(&joined.join(" ")).unwrap(), w);
    }
}

pub fn decompose_input(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Ok(input) = DecomposeInput::parse(s) else { return };
    assert_eq!(DecomposeInput::parse(&input.to_text()).unwrap(), input);
    if input.multiplicity > 64 || input.x.len() > 8 {
        return;
    }
    if let Ok(w) = decompose(&input) {
        assert!(w.satisfies(&input));
    }
}

/// A plain-text matrix, a line `---`, then a cost file.
pub fn decoder(data: &[u8]) {
    let Some(s) = text(data) else { return };
    let Some((m, c)) = s.split_once("---") else { return };
    let Ok(h) = ParityCheckMatrix::parse_text(m) else { return };
    if h.num_cols() > 6 || h.num_rows() > 3 || h.ring().cardinality() > 5 || h.max_degree() > 5 {
        return;
    }
    let Ok(costs) = CostVector::parse(c, h.ring().cardinality()) else { return };
    if costs.len() != h.num_cols() {
        return;
    }
    let mut objective = None;
    for kind in PolytopeKind::ALL {
        let r = lp_decode(&h, &costs, kind, &SMALL);
        if let Outcome::MlCertified(_) = r.outcome {
            assert!(certify(&r, &h, &costs, &SMALL).unwrap_or(true));
        }
        if kind == PolytopeKind::Q {
            objective = r.objective.clone();
        } else if kind == PolytopeKind::S && objective.is_some() && r.objective.is_some() {
            assert_eq!(r.objective, objective);
        }
    }
}
