use polydec::channel::{parse_received, ChannelModel, CostVector};
use polydec::code::{EnumerationCaps, ParityCheckMatrix};
use polydec::decomposition::DecomposeInput;
use polydec::lp_exact::{format_point, parse_point, LinearProgram, Rational};
use polydec::polytopes::{build, PolytopeKind};
use polydec::Error;

const GF4_MATRIX: &str = "GF(2^2)\n2 4\n1 2 3 0\n0 1 1 3\n";

#[test]
fn matrix_text_round_trips_with_canonical_ring() {
    let h = ParityCheckMatrix::parse_text(GF4_MATRIX).unwrap();
    assert_eq!(h.num_rows(), 2);
    assert_eq!(h.support(1), &[1, 2, 3]);
    let text = h.to_text();
    assert!(text.starts_with("GF(2^2)["));
    assert_eq!(ParityCheckMatrix::parse_any(&text).unwrap(), h);
}

#[test]
fn matrix_errors_carry_line_numbers() {
    let err = ParityCheckMatrix::parse_text("Z3\n1 3\n1 2\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    let err = ParityCheckMatrix::parse_text("Z3\n1 2\n1 3\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    assert!(ParityCheckMatrix::parse_text("Z3\n1 2\n0 0\n").is_err());
}

#[test]
fn alist_imports_as_binary() {
    let alist = "3 2\n2 2\n1 2 1\n2 2\n1 0\n1 2\n2 0\n1 2\n2 3\n";
    let h = ParityCheckMatrix::parse_any(alist).unwrap();
    assert_eq!(h.to_text(), "Z2\n2 3\n1 1 0\n0 1 1\n");
    let broken = alist.replace("2 3\n", "1 3\n");
    assert!(ParityCheckMatrix::parse_alist(&broken).is_err());
}

#[test]
fn polytope_programs_round_trip_through_text() {
    let h = ParityCheckMatrix::parse_text(GF4_MATRIX).unwrap();
    let costs = CostVector::parse("1 -1 1/2\n0 0 0\n-3 2 1\n1/3 1/3 -1/3\n", 4).unwrap();
    for kind in PolytopeKind::ALL {
        let b = build(kind, &h, &costs, &EnumerationCaps::default()).unwrap();
        let text = b.lp.to_text();
        let back = LinearProgram::parse(&text).unwrap();
        assert_eq!(back.to_text(), text, "{kind}");
        assert_eq!(back.num_variables(), b.lp.num_variables());
    }
}

#[test]
fn points_round_trip_and_reject_duplicates() {
    let named = vec![("f:0:1".to_string(), Rational::new(1, 2)), ("w:0:1.1".to_string(), Rational::from(-3i64))];
    assert_eq!(parse_point(&format_point(&named)).unwrap(), named);
    assert!(parse_point("point 2\nx 1\nx 2\n").is_err());
    assert!(parse_point("point 2\nx 1\n").is_err());
}

#[test]
fn cost_files_check_width() {
    let c = CostVector::parse("# comment\n1 2\n-1/2 0\n", 3).unwrap();
    assert_eq!(c.len(), 2);
    assert_eq!(c.get(1, 1), &Rational::new(-1, 2));
    assert_eq!(CostVector::parse(&c.to_text(), 3).unwrap(), c);
    assert!(CostVector::parse("1 2 3\n", 3).is_err());
    assert!(CostVector::parse("1 x\n", 3).is_err());
}

#[test]
fn channel_configs() {
    let ch = ChannelModel::parse_config("kind = \"symmetric\"\np = \"1/4\"\n", 4).unwrap();
    // lambda = log(p(y|0) / p(y|c)): at y = 0, log((3/4) / (1/12)) = log 9
    let l = ch.lambda_symbol(0).unwrap();
    assert!(l.iter().all(|v| (v - 9f64.ln()).abs() < 1e-12));
    let costs = ch.cost_vector(&[0, 1], 24).unwrap();
    assert_eq!(costs.len(), 2);
    assert!(costs.get(1, 1).is_negative());

    assert!(ChannelModel::parse_config("kind = \"symmetric\"\n", 2).is_err());
    assert!(ChannelModel::parse_config("kind = \"symmetric\"\np = 0.1\nq = 2\n", 2).is_err());
    let err =
        ChannelModel::parse_config("kind = \"table\"\ntable = [[\"1\", \"0\"], [\"0\", \"1\"]]\n", 2).unwrap_err();
    assert!(matches!(err, Error::ZeroLikelihood { output: 0, input: 1 }));
    assert!(
        ChannelModel::parse_config("kind = \"table\"\ntable = [[\"3/4\", \"1/3\"], [\"1/4\", \"2/3\"]]\n", 2).is_ok()
    );
    // rows need not be normalised: only likelihood ratios enter the costs
    let flat = ChannelModel::parse_config("kind = \"table\"\ntable = [[\"1/2\", \"1/2\"]]\n", 2).unwrap();
    assert_eq!(flat.lambda_symbol(0).unwrap(), vec![0.0]);
    assert!(ChannelModel::parse_config("kind = \"table\"\ntable = [[\"1/2\"]]\n", 2).is_err());
    assert_eq!(parse_received("0 2\n1\n").unwrap(), vec![0, 2, 1]);
    assert!(parse_received("0 -1").is_err());
}

#[test]
fn decompose_inputs_round_trip() {
    let text = "ring Z3\nM 2\nk 1 1\nx 1 1\nx 1 0\nx 0 1\n";
    let input = DecomposeInput::parse(text).unwrap();
    assert_eq!(input.to_text(), text);
    // column sums must equal k * M
    assert!(DecomposeInput::parse("ring Z3\nM 2\nk 1 1\nx 1 1\n").is_err());
    assert!(DecomposeInput::parse("ring Z3\nM 2\nM 2\nk 1 1\nx 1 1\nx 1 1\n").is_err());
}
