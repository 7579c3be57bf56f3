use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use polydec::battery::{self, SimulationConfig, SuiteConfig};
use polydec::channel::{parse_received, ChannelModel, CostVector, DEFAULT_COST_BITS};
use polydec::code::{EnumerationCaps, ParityCheckMatrix};
use polydec::decoder::{lp_decode, Outcome};
use polydec::decomposition::{self, DecomposeInput, DEFAULT_MU_CAP};
use polydec::lp_exact::{format_point, parse_point};
use polydec::polytopes::{self, PolytopeKind};
use polydec::ring::RingSpec;

const EXIT_FRACTIONAL: u8 = 3;
const EXIT_OPERATIONAL: u8 = 4;
const EXIT_MISMATCH: u8 = 5;

/// Exact LP decoding of non-binary linear codes.
///
/// Exit codes: 0 success, 2 usage error, 3 fractional decode,
/// 4 operational error, 5 verification mismatch.
#[derive(Parser)]
#[command(name = "polydec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode one cost vector over one polytope.
    Decode(DecodeArgs),
    /// Compare optimal objectives across polytopes.
    Compare(CompareArgs),
    /// Report variable and constraint counts against their bounds.
    Counts(CountsArgs),
    /// Seeded Monte Carlo simulation through a channel.
    Simulate(SimulateArgs),
    /// Map a U point to Q, or a Q point to U with --reverse.
    Lift(LiftArgs),
    /// Split a feasible (x, k, M) instance into weighted words.
    Decompose(DecomposeArgs),
    /// Run the seeded equivalence battery.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct MatrixArgs {
    /// Parity-check matrix (plain text or binary alist).
    #[arg(long)]
    matrix: PathBuf,
    /// Ring for alist input; for plain-text input it must match the file.
    #[arg(long)]
    ring: Option<String>,
}

#[derive(Args)]
struct OutArg {
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DecodeArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long, default_value = "q")]
    polytope: PolytopeKind,
    /// Rational cost file: n lines of q-1 values.
    #[arg(long, conflicts_with_all = ["channel", "received"], required_unless_present = "channel")]
    costs: Option<PathBuf>,
    /// Channel description (TOML).
    #[arg(long, requires = "received")]
    channel: Option<PathBuf>,
    /// Received word: whitespace-separated output symbols.
    #[arg(long, requires = "channel")]
    received: Option<PathBuf>,
    /// Fractional bits kept when rounding channel costs.
    #[arg(long, default_value_t = DEFAULT_COST_BITS)]
    bits: u32,
    /// Also write the built LP in text form.
    #[arg(long)]
    dump_lp: Option<PathBuf>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// At least two of q, u, s.
    #[arg(long, value_delimiter = ',', default_value = "q,u,s")]
    polytope: Vec<PolytopeKind>,
    /// Cost files; repeat for several vectors.
    #[arg(long, conflicts_with_all = ["seed", "trials"], required_unless_present = "trials")]
    costs: Vec<PathBuf>,
    /// Seed for random rational cost vectors.
    #[arg(long, requires = "trials", default_value_t = 0)]
    seed: u64,
    /// Number of random rational cost vectors.
    #[arg(long)]
    trials: Option<usize>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct CountsArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long, value_delimiter = ',', default_value = "q,u,s")]
    polytope: Vec<PolytopeKind>,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    #[arg(long)]
    channel: PathBuf,
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: usize,
    #[arg(long, default_value = "q")]
    polytope: PolytopeKind,
    #[arg(long, default_value_t = DEFAULT_COST_BITS)]
    bits: u32,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct LiftArgs {
    #[command(flatten)]
    matrix: MatrixArgs,
    /// Point file: `point <count>` then one `name value` line per entry.
    point: PathBuf,
    /// Push a Q point down to U instead.
    #[arg(long)]
    reverse: bool,
    /// Largest common denominator accepted when lifting.
    #[arg(long, default_value_t = DEFAULT_MU_CAP)]
    mu_cap: u64,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input file with `ring`, `M`, `k` and `x` lines.
    input: PathBuf,
    #[command(flatten)]
    out: OutArg,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 2024)]
    seed: u64,
    /// Number of random instances.
    #[arg(long, default_value_t = 60)]
    trials: usize,
    #[command(flatten)]
    out: OutArg,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(out: &OutArg, text: &str) -> Result<()> {
    match &out.out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_matrix(args: &MatrixArgs) -> Result<ParityCheckMatrix> {
    let text = read(&args.matrix)?;
    let h = ParityCheckMatrix::parse_any(&text).with_context(|| format!("parsing {}", args.matrix.display()))?;
    let Some(spec) = &args.ring else {
        return Ok(h);
    };
    let ring: RingSpec = spec.parse()?;
    if ring == *h.ring() {
        return Ok(h);
    }
    if h.ring().cardinality() == 2 && !text.trim_start().starts_with('Z') {
        // alist input: reinterpret the 0/1 pattern over the requested ring
        let rows: Vec<Vec<u16>> = (0..h.num_rows()).map(|j| h.row(j).iter().map(|e| e.code()).collect()).collect();
        return Ok(ParityCheckMatrix::from_codes(ring, &rows)?);
    }
    bail!("matrix is over {} but --ring says {ring}", h.ring())
}

fn status(code: u8) -> ExitCode {
    ExitCode::from(code)
}

fn decode(args: DecodeArgs) -> Result<ExitCode> {
    let h = load_matrix(&args.matrix)?;
    let q = h.ring().cardinality();
    let costs = match (&args.costs, &args.channel, &args.received) {
        (Some(c), _, _) => CostVector::parse(&read(c)?, q)?,
        (None, Some(ch), Some(rx)) => {
            let channel = ChannelModel::parse_config(&read(ch)?, q)?;
            channel.cost_vector(&parse_received(&read(rx)?)?, args.bits)?
        }
        _ => bail!("need --costs or --channel with --received"),
    };
    if costs.len() != h.num_cols() {
        bail!("cost vector has {} positions, code has {}", costs.len(), h.num_cols());
    }
    let caps = EnumerationCaps::default();
    if let Some(path) = &args.dump_lp {
        let b = polytopes::build(args.polytope, &h, &costs, &caps)?;
        fs::write(path, b.lp.to_text()).with_context(|| format!("writing {}", path.display()))?;
    }
    let result = lp_decode(&h, &costs, args.polytope, &caps);
    emit(&args.out, &result.to_text())?;
    Ok(match result.outcome {
        Outcome::MlCertified(_) => ExitCode::SUCCESS,
        Outcome::Fractional(_) => status(EXIT_FRACTIONAL),
        Outcome::DeclaredError(_) => status(EXIT_OPERATIONAL),
    })
}

fn compare(args: CompareArgs) -> Result<ExitCode> {
    let mut kinds = args.polytope.clone();
    kinds.dedup();
    if kinds.len() < 2 {
        clap::Error::raw(clap::error::ErrorKind::ValueValidation, "compare needs at least two polytopes\n").exit();
    }
    let h = load_matrix(&args.matrix)?;
    let q = h.ring().cardinality();
    let costs: Vec<CostVector> = match args.trials {
        Some(t) => (0..t)
            .map(|i| battery::random_costs(h.num_cols(), q, &mut battery::stream_rng(args.seed, i as u64)))
            .collect(),
        None => args.costs.iter().map(|p| Ok(CostVector::parse(&read(p)?, q)?)).collect::<Result<_>>()?,
    };
    for c in &costs {
        if c.len() != h.num_cols() {
            bail!("cost vector has {} positions, code has {}", c.len(), h.num_cols());
        }
    }
    let table = battery::compare(&h, &costs, &kinds, &EnumerationCaps::default());
    let names: Vec<String> = kinds.iter().map(|k| k.to_string()).collect();
    let mut s = format!("polytopes {}\n", names.join(" "));
    let mut equal = 0;
    for (i, row) in table.iter().enumerate() {
        let ok = row.iter().all(|o| o.is_some() && *o == row[0]);
        equal += usize::from(ok);
        let objs: Vec<String> = row.iter().map(|o| o.as_ref().map_or("-".into(), |v| v.to_string())).collect();
        let _ = writeln!(s, "cost {i} {} {}", objs.join(" "), if ok { "equal" } else { "differ" });
    }
    let all = equal == table.len();
    let _ = writeln!(s, "verdict {} {equal}/{}", if all { "all-equal" } else { "mismatch" }, table.len());
    emit(&args.out, &s)?;
    Ok(if all { ExitCode::SUCCESS } else { status(EXIT_MISMATCH) })
}

fn counts(args: CountsArgs) -> Result<ExitCode> {
    let h = load_matrix(&args.matrix)?;
    let costs = CostVector::zeros(h.num_cols(), h.ring().cardinality());
    let caps = EnumerationCaps::default();
    let mut s = String::new();
    let mut ok = true;
    for kind in &args.polytope {
        let report = polytopes::build(*kind, &h, &costs, &caps)?.count_report();
        ok &= report.passes();
        let _ = write!(s, "{report}");
    }
    emit(&args.out, &s)?;
    Ok(if ok { ExitCode::SUCCESS } else { status(EXIT_MISMATCH) })
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let h = load_matrix(&args.matrix)?;
    let channel = ChannelModel::parse_config(&read(&args.channel)?, h.ring().cardinality())?;
    let config = SimulationConfig {
        seed: args.seed,
        trials: args.trials,
        polytope: args.polytope,
        cost_bits: args.bits,
        caps: EnumerationCaps::default(),
    };
    let summary = battery::simulate(&h, &channel, &config)?;
    emit(&args.out, &format!("seed {}\npolytope {}\n{summary}", args.seed, args.polytope))?;
    Ok(ExitCode::SUCCESS)
}

fn lift(args: LiftArgs) -> Result<ExitCode> {
    let h = load_matrix(&args.matrix)?;
    let costs = CostVector::zeros(h.num_cols(), h.ring().cardinality());
    let caps = EnumerationCaps::default();
    let q = polytopes::build_q(&h, &costs, &caps)?;
    let u = polytopes::build_u(&h, &costs, &caps)?;
    let (src, dst) = if args.reverse { (&q, &u) } else { (&u, &q) };
    let named = parse_point(&read(&args.point)?)?;
    let point = src.lp.point_from_named(&named)?;
    if !src.lp.is_feasible(&point) {
        bail!("input point is not feasible for {}", src.kind);
    }
    let mapped = if args.reverse {
        decomposition::push_q_to_u(src, dst, &point)?
    } else {
        decomposition::lift_u_to_q(src, dst, &point, args.mu_cap)?
    };
    emit(&args.out, &format_point(&dst.lp.named_point(&mapped)))?;
    let ok = dst.lp.is_feasible(&mapped) && src.f_values(&point) == dst.f_values(&mapped);
    if !ok {
        eprintln!("error: mapped point fails the {} constraints", dst.kind);
    }
    Ok(if ok { ExitCode::SUCCESS } else { status(EXIT_MISMATCH) })
}

fn decompose(args: DecomposeArgs) -> Result<ExitCode> {
    let input = DecomposeInput::parse(&read(&args.input)?)?;
    let witness = decomposition::decompose(&input)?;
    emit(&args.out, &witness.to_string())?;
    Ok(if witness.satisfies(&input) { ExitCode::SUCCESS } else { status(EXIT_MISMATCH) })
}

fn selftest(args: SelftestArgs) -> Result<ExitCode> {
    let config = SuiteConfig { instances: args.trials, ..SuiteConfig::standard(args.seed) };
    let report = battery::run_suite(&config)?;
    emit(&args.out, &report.to_text())?;
    Ok(if report.summary().all_pass() { ExitCode::SUCCESS } else { status(EXIT_MISMATCH) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Decode(a) => decode(a),
        Command::Compare(a) => compare(a),
        Command::Counts(a) => counts(a),
        Command::Simulate(a) => simulate(a),
        Command::Lift(a) => lift(a),
        Command::Decompose(a) => decompose(a),
        Command::Selftest(a) => selftest(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            status(EXIT_OPERATIONAL)
        }
    }
}
