use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flatclique::bounds::{bound_set, evaluate, BoundArgs, BoundValue};
use flatclique::degeneracy::{classify_hyperplane, classify_point_dual, DegeneracyVerdict};
use flatclique::extraction::{extract, ExtractionParams};
use flatclique::graph::{configuration_graph, Side};
use flatclique::harness::{
    generate, parse_config, run_experiment, serialize_config, sweep, write_csv, write_jsonl, ExperimentOptions,
    GeneratorSpec, PlantedFlat, SweepSpec,
};
use flatclique::oracle::{max_biclique_oracle_with_cap, Biclique, DEFAULT_ORACLE_CAP};
use flatclique::rational::{format_rational, parse_rational};
use flatclique::{Configuration, Flat, Rational};

#[derive(Parser)]
#[command(name = "flatclique", version, about = "Point-hyperplane incidence experiments over exact rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Args)]
struct Shared {
    /// Ambient dimension
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Degeneracy parameter, e.g. `1/2`
    #[arg(long, global = true)]
    beta: Option<String>,
    /// Configuration file (JSON)
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[arg(long, global = true)]
    with_oracle: bool,
    #[arg(long, global = true)]
    oracle_cap: Option<u128>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a configuration
    Gen(GenArgs),
    /// Incidence count and maximum degrees
    Incidences,
    /// Maximum biclique by exhaustive flat search
    Oracle,
    /// Run the extraction pipeline
    Extract {
        /// Include the step-by-step trace
        #[arg(long)]
        trace: bool,
    },
    /// Degeneracy verdict for one hyperplane or one point
    Classify {
        #[arg(long, conflicts_with = "point", required_unless_present = "point")]
        hyperplane: Option<usize>,
        #[arg(long)]
        point: Option<usize>,
    },
    /// Evaluate closed-form bounds
    Bounds(BoundsArgs),
    /// One report row for a configuration
    Run {
        /// Leave wall time empty
        #[arg(long)]
        no_timing: bool,
    },
    /// Report over a parameter sweep
    Sweep {
        /// Sweep description (JSON)
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        no_timing: bool,
    },
}

#[derive(Args)]
struct GenArgs {
    /// Generator description (JSON); flags below are ignored when given
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "random")]
    kind: Kind,
    #[arg(long, default_value_t = 0)]
    side: usize,
    /// Noise points (planted) or all points (random)
    #[arg(long, default_value_t = 0)]
    points: usize,
    /// Noise hyperplanes (planted) or all hyperplanes (random)
    #[arg(long, default_value_t = 0)]
    hyperplanes: usize,
    #[arg(long, default_value_t = 2)]
    flat_dim: usize,
    #[arg(long, default_value_t = 0)]
    on_flat: usize,
    #[arg(long, default_value_t = 0)]
    through_flat: usize,
    /// Half-width of the coordinate box
    #[arg(long = "box", default_value_t = 10)]
    coord_bound: i64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Planted,
    Grid,
    Random,
}

#[derive(Args)]
struct BoundsArgs {
    /// Bound name; all applicable bounds when absent
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long, short = 'i')]
    incidences: Option<u64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    constant: Option<String>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl fmt::Display) -> Self {
        Failure {
            code: 1,
            message: message.to_string(),
        }
    }

    fn io(path: &Path, e: io::Error) -> Self {
        Failure {
            code: 3,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<flatclique::Error> for Failure {
    fn from(e: flatclique::Error) -> Self {
        Failure {
            code: if e.is_cap_exceeded() { 2 } else { 1 },
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure {
            code: 3,
            message: e.to_string(),
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(1);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: Cli) -> Outcome {
    let sh = &cli.shared;
    match &cli.command {
        Command::Gen(args) => cmd_gen(sh, args),
        Command::Incidences => cmd_incidences(sh),
        Command::Oracle => cmd_oracle(sh),
        Command::Extract { trace } => cmd_extract(sh, *trace),
        Command::Classify { hyperplane, point } => cmd_classify(sh, *hyperplane, *point),
        Command::Bounds(args) => cmd_bounds(sh, args),
        Command::Run { no_timing } => cmd_run(sh, !no_timing),
        Command::Sweep { spec, no_timing } => cmd_sweep(sh, spec, !no_timing),
    }
}

fn read(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn emit(sh: &Shared, bytes: &[u8]) -> Outcome {
    match &sh.out {
        Some(path) => fs::write(path, bytes).map_err(|e| Failure::io(path, e)),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            Ok(out.flush()?)
        }
    }
}

fn emit_json(sh: &Shared, v: &Value) -> Outcome {
    let mut text = serde_json::to_string_pretty(v).expect("json value");
    text.push('\n');
    emit(sh, text.as_bytes())
}

fn emit_table(sh: &Shared, header: &[&str], rows: &[Vec<String>]) -> Outcome {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io::Error::from)?;
    for r in rows {
        w.write_record(r).map_err(io::Error::from)?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    emit(sh, &bytes)
}

fn load(sh: &Shared) -> Outcome<Configuration> {
    let path = sh.config.as_ref().ok_or_else(|| Failure::usage("--config FILE is required"))?;
    let c = parse_config(&read(path)?)?;
    if let Some(d) = sh.d {
        if d != c.dim() {
            return Err(Failure::usage(format!("--d {d} does not match the configuration's dimension {}", c.dim())));
        }
    }
    Ok(c)
}

fn beta(sh: &Shared) -> Outcome<Rational> {
    match &sh.beta {
        Some(b) => Ok(parse_rational(b)?),
        None => Ok(ExtractionParams::default().beta),
    }
}

fn params(sh: &Shared) -> Outcome<ExtractionParams> {
    let p = ExtractionParams {
        beta: beta(sh)?,
        seed: sh.seed.unwrap_or(0),
        oracle_cap: sh.oracle_cap.unwrap_or(DEFAULT_ORACLE_CAP),
        ..ExtractionParams::default()
    };
    p.validate()?;
    Ok(p)
}

fn cmd_gen(sh: &Shared, a: &GenArgs) -> Outcome {
    let mut spec = match &a.spec {
        Some(path) => serde_json::from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        None => {
            let d = sh.d.ok_or_else(|| Failure::usage("--d is required without --spec"))?;
            match a.kind {
                Kind::Grid => GeneratorSpec::grid(d, a.side),
                Kind::Random => GeneratorSpec::random(d, a.points, a.hyperplanes, a.coord_bound, 0),
                Kind::Planted => {
                    let mut s = GeneratorSpec::planted(
                        d,
                        vec![PlantedFlat {
                            flat_dim: a.flat_dim,
                            points_on_flat: a.on_flat,
                            hyperplanes_through_flat: a.through_flat,
                            parent: None,
                        }],
                        a.points,
                        a.hyperplanes,
                        0,
                    );
                    s.coord_bound = a.coord_bound;
                    s
                }
            }
        }
    };
    if let Some(seed) = sh.seed {
        spec.seed = seed;
    }
    if a.spec.is_some() {
        if let Some(d) = sh.d {
            spec.dim = d;
        }
    }
    let c = generate(&spec)?;
    emit(sh, serialize_config(&c).as_bytes())
}

fn cmd_incidences(sh: &Shared) -> Outcome {
    let c = load(sh)?;
    let g = configuration_graph(&c);
    let fields = [
        ("d", c.dim()),
        ("m", c.m()),
        ("n", c.n()),
        ("incidences", g.edge_count()),
        ("max_point_degree", g.max_degree(Side::Left)),
        ("max_hyperplane_degree", g.max_degree(Side::Right)),
    ];
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(sh, &Value::Object(fields.iter().map(|(k, v)| (k.to_string(), json!(v))).collect())),
        Format::Csv => {
            let header: Vec<&str> = fields.iter().map(|f| f.0).collect();
            emit_table(sh, &header, &[fields.iter().map(|f| f.1.to_string()).collect()])
        }
    }
}

fn flat_json(f: &Flat) -> Value {
    let row = |xs: &[Rational]| xs.iter().map(format_rational).collect::<Vec<_>>();
    json!({
        "dim": f.dim(),
        "basepoint": row(f.basepoint().coords()),
        "directions": f.directions().iter().map(|d| row(d)).collect::<Vec<_>>(),
    })
}

fn join(xs: &[usize]) -> String {
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")
}

fn emit_biclique(sh: &Shared, b: &Biclique, extra: Option<(&str, Value)>) -> Outcome {
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(b).expect("biclique");
            if let Some(w) = &b.witness {
                v["witness"] = flat_json(w);
            }
            if let Some((k, x)) = extra {
                v[k] = x;
            }
            emit_json(sh, &v)
        }
        Format::Csv => emit_table(
            sh,
            &["r", "s", "rs", "points", "hyperplanes"],
            &[vec![
                b.r.to_string(),
                b.s.to_string(),
                b.rs.to_string(),
                join(&b.points),
                join(&b.hyperplanes),
            ]],
        ),
    }
}

fn cmd_oracle(sh: &Shared) -> Outcome {
    let c = load(sh)?;
    let b = max_biclique_oracle_with_cap(&c, sh.oracle_cap.unwrap_or(DEFAULT_ORACLE_CAP))?;
    emit_biclique(sh, &b, None)
}

fn cmd_extract(sh: &Shared, with_trace: bool) -> Outcome {
    let c = load(sh)?;
    let params = params(sh)?;
    match extract(&c, &params) {
        Ok(x) => {
            let mut info = json!({ "branch": x.trace.chosen.map(|s| s.as_str()) });
            if with_trace {
                info["trace"] = serde_json::to_value(&x.trace).expect("trace");
            }
            emit_biclique(sh, &x.biclique, Some(("extraction", info)))
        }
        Err(f) => {
            let partial = json!({ "error": f.to_string(), "rs": f.best.rs });
            eprintln!("{}", serde_json::to_string(&partial).expect("json value"));
            Err(f.error.into())
        }
    }
}

fn verdict_json(v: &DegeneracyVerdict) -> Value {
    json!({
        "verdict": v.verdict,
        "beta": format_rational(&v.beta),
        "total": v.total,
        "witness_count": v.witness_count,
        "at_boundary": v.at_boundary,
        "core": v.core.as_ref().map(flat_json),
        "witness": v.witness.as_ref().map(flat_json),
    })
}

fn cmd_classify(sh: &Shared, hyperplane: Option<usize>, point: Option<usize>) -> Outcome {
    let c = load(sh)?;
    let beta = beta(sh)?;
    let pick = |idx: usize, len: usize, what: &'static str| {
        if idx < len {
            Ok(idx)
        } else {
            Err(Failure::from(flatclique::Error::IndexOutOfRange { what, index: idx, len }))
        }
    };
    let (kind, idx, v) = match (hyperplane, point) {
        (Some(h), _) => {
            let h = pick(h, c.n(), "hyperplanes")?;
            ("hyperplane", h, classify_hyperplane(&c.hyperplanes()[h], c.points(), &beta)?)
        }
        (None, Some(p)) => {
            let p = pick(p, c.m(), "points")?;
            let pt = &c.points()[p];
            let through: Vec<_> = c.hyperplanes().iter().filter(|h| h.contains(pt)).cloned().collect();
            ("point", p, classify_point_dual(pt, &through, &beta)?)
        }
        (None, None) => return Err(Failure::usage("one of --hyperplane, --point is required")),
    };
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut out = verdict_json(&v);
            out["object"] = json!(kind);
            out["index"] = json!(idx);
            emit_json(sh, &out)
        }
        Format::Csv => emit_table(
            sh,
            &["object", "index", "verdict", "total", "witness_count", "at_boundary"],
            &[vec![
                kind.to_string(),
                idx.to_string(),
                if v.is_degenerate() { "degenerate" } else { "nondegenerate" }.to_string(),
                v.total.to_string(),
                v.witness_count.to_string(),
                v.at_boundary.to_string(),
            ]],
        ),
    }
}

fn cmd_bounds(sh: &Shared, a: &BoundsArgs) -> Outcome {
    let mut args = BoundArgs {
        m: a.m,
        n: a.n,
        incidences: a.incidences,
        k: a.k,
        d: sh.d,
        ..BoundArgs::default()
    };
    if let Some(c) = &a.constant {
        args.constant = parse_rational(c)?;
    }
    let values: Vec<BoundValue> = match &a.name {
        Some(name) => vec![evaluate(name, &args)?],
        None => bound_set(&args),
    };
    match sh.format.unwrap_or(Format::Json) {
        Format::Json => emit_json(sh, &serde_json::to_value(&values).expect("bounds")),
        Format::Csv => {
            let rows: Vec<Vec<String>> = values
                .iter()
                .map(|v| {
                    vec![
                        v.name.to_string(),
                        v.value.to_string(),
                        v.exact.as_ref().map(format_rational).unwrap_or_default(),
                        format_rational(&v.constant),
                    ]
                })
                .collect();
            emit_table(sh, &["name", "value", "exact", "constant"], &rows)
        }
    }
}

fn write_rows(sh: &Shared, rows: &[flatclique::harness::ReportRow]) -> Outcome {
    let mut buf = Vec::new();
    match sh.format.unwrap_or(Format::Csv) {
        Format::Csv => write_csv(rows, &mut buf)?,
        Format::Json => write_jsonl(rows, &mut buf)?,
    }
    emit(sh, &buf)
}

fn cmd_run(sh: &Shared, timing: bool) -> Outcome {
    let c = load(sh)?;
    let params = params(sh)?;
    let opts = ExperimentOptions {
        with_oracle: sh.with_oracle,
        oracle_cap: params.oracle_cap,
        timing,
    };
    let row = run_experiment(&c, &params, &opts);
    write_rows(sh, &[row])
}

fn cmd_sweep(sh: &Shared, path: &Path, timing: bool) -> Outcome {
    let mut spec: SweepSpec =
        serde_json::from_str(&read(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    if sh.with_oracle {
        spec.with_oracle = true;
    }
    if let Some(cap) = sh.oracle_cap {
        spec.oracle_cap = Some(cap);
    }
    if let Some(seed) = sh.seed {
        spec.generator.seed = seed;
    }
    if let Some(b) = &sh.beta {
        spec.params.beta = Some(b.clone());
    }
    let rows = sweep(&spec, timing)?;
    write_rows(sh, &rows)
}
