use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use delbif_core::functions::{self, Function, PointCloud, Shape};
use delbif_core::pipeline::{self, Grading, Outcome};
use delbif_core::{Error, IncrementalComplex, OrderedPoints};
use delbif_oracle::instances::{evaluate, function_for, function_name, random_points};
use delbif_oracle::{equivalence_suite, oracle_delaunay, oracle_incremental};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Largest input the `--verify` oracle cross-check accepts.
const VERIFY_LIMIT: usize = 14;

#[derive(Parser)]
#[command(
    name = "delbif",
    version,
    about = "Delaunay bifiltrations of function-valued point clouds"
)]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand)]
enum Command {
    /// Sample points from a shape.
    Generate(GenerateArgs),
    /// Cross-check the pipeline against the brute-force oracles on random instances.
    Verify(VerifyArgs),
    /// Print a size and timing row for a sampled shape.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionArg {
    /// Last input column.
    File,
    Codensity,
    Coeccentricity,
    Height,
    Random,
}

impl FunctionArg {
    fn resolve(self, seed: u64) -> Option<Function> {
        match self {
            FunctionArg::File => None,
            FunctionArg::Codensity => Some(Function::Codensity),
            FunctionArg::Coeccentricity => Some(Function::Coeccentricity),
            FunctionArg::Height => Some(Function::Height),
            FunctionArg::Random => Some(Function::Random { seed }),
        }
    }

    fn name(self) -> &'static str {
        match self {
            FunctionArg::File => "file",
            FunctionArg::Codensity => "codensity",
            FunctionArg::Coeccentricity => "coeccentricity",
            FunctionArg::Height => "height",
            FunctionArg::Random => "random",
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GradingArg {
    Delcech,
    Del,
}

impl From<GradingArg> for Grading {
    fn from(g: GradingArg) -> Grading {
        match g {
            GradingArg::Delcech => Grading::DelCech,
            GradingArg::Del => Grading::Del,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Input file, `-` for standard input.
    #[arg(default_value = "-")]
    input: String,
    /// Output file; standard output if absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(short, long, value_enum, default_value = "file")]
    function: FunctionArg,
    /// Seed for the random function and for `--jitter`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, value_enum, default_value = "delcech")]
    grading: GradingArg,
    /// Perturb every coordinate by up to this fraction of the bounding-box diagonal.
    #[arg(long, value_name = "EPS")]
    jitter: Option<f64>,
    /// Print counts, sizes and phase timings to standard error.
    #[arg(long)]
    stats: bool,
    /// Compare the complex against the oracle (small inputs only).
    #[arg(long)]
    verify: bool,
    /// Ambient dimension; inferred from the first line if absent.
    #[arg(short, long)]
    dim: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    shape: String,
    #[arg(short, long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append a function column.
    #[arg(short, long, value_enum)]
    function: Option<FunctionArg>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, default_value_t = 20)]
    instances: usize,
    /// Largest number of points per instance.
    #[arg(short, long, default_value_t = 8)]
    n: usize,
    #[arg(short, long, default_value_t = 2)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    shape: String,
    #[arg(short, long)]
    n: usize,
    #[arg(short, long, value_enum, default_value = "random")]
    function: FunctionArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(short, long, value_enum, default_value = "delcech")]
    grading: GradingArg,
}

fn open_output(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_cloud(args: &RunArgs) -> anyhow::Result<PointCloud> {
    let source: Box<dyn io::BufRead> = if args.input == "-" {
        Box::new(io::stdin().lock())
    } else {
        let f = File::open(&args.input).with_context(|| format!("cannot open {}", args.input))?;
        Box::new(BufReader::new(f))
    };
    let mut cloud = match args.function.resolve(args.seed) {
        None => functions::parse_input(source, args.dim)?,
        Some(_) => functions::parse_positions(source, args.dim)?,
    };
    if let Some(eps) = args.jitter {
        if !(eps.is_finite() && eps >= 0.0) {
            bail!(Error::InvalidArgument(format!(
                "jitter must be a nonnegative number, got {eps}"
            )));
        }
        functions::jitter(cloud.dim, &mut cloud.coords, eps, args.seed);
    }
    if let Some(f) = args.function.resolve(args.seed) {
        cloud.gamma = f.evaluate(cloud.dim, &cloud.coords)?;
    }
    Ok(cloud)
}

fn print_stats(outcome: &Outcome) {
    let s = outcome.complex.stats();
    let t = outcome.times;
    let counts: Vec<String> = s.counts.iter().map(usize::to_string).collect();
    eprintln!("points          {}", outcome.complex.points().len());
    eprintln!(
        "simplices       {} (by dimension: {})",
        s.total,
        counts.join(" ")
    );
    eprintln!("delaunay size   {}", s.delaunay_size);
    eprintln!("ratio           {:.3}", s.ratio);
    eprintln!("construction    {:.3} s", t.construction.as_secs_f64());
    eprintln!("grading         {:.3} s", t.grading.as_secs_f64());
    eprintln!("serialization   {:.3} s", t.serialization.as_secs_f64());
}

fn ranked_points(p: &OrderedPoints) -> Vec<Vec<f64>> {
    (0..p.len() as u32).map(|r| p.point(r).to_vec()).collect()
}

/// Mismatch descriptions between the complex and the oracles.
fn oracle_mismatches(complex: &IncrementalComplex) -> Vec<String> {
    let ranked = ranked_points(complex.points());
    let mut out = Vec::new();
    let got: BTreeSet<Vec<u32>> = complex.simplices().into_iter().collect();
    if got != oracle_incremental(&ranked) {
        out.push("incremental complex differs from the oracle".to_string());
    }
    let del: BTreeSet<Vec<u32>> = complex.delaunay_simplices().into_iter().collect();
    if del != oracle_delaunay(&ranked) {
        out.push("Delaunay triangulation differs from the oracle".to_string());
    }
    out
}

fn run(args: RunArgs) -> anyhow::Result<()> {
    let cloud = read_cloud(&args)?;
    let ordered = cloud.ordered()?;
    let n = ordered.len();
    let mut comments = vec![
        format!("delbif {}", env!("CARGO_PKG_VERSION")),
        format!(
            "function={} grading={} seed={} jitter={}",
            args.function.name(),
            match args.grading {
                GradingArg::Delcech => "delcech",
                GradingArg::Del => "del",
            },
            args.seed,
            args.jitter.map_or("none".to_string(), |e| e.to_string())
        ),
    ];
    comments.push(format!("points={n} dim={}", ordered.dim()));
    let mut out = open_output(&args.output)?;
    let outcome = pipeline::run(ordered, args.grading.into(), &mut out, &comments)?;
    out.flush()?;
    if args.stats {
        print_stats(&outcome);
    }
    if args.verify {
        if n > VERIFY_LIMIT {
            eprintln!("verify: skipped, {n} points exceed the oracle limit of {VERIFY_LIMIT}");
        } else {
            let bad = oracle_mismatches(&outcome.complex);
            if !bad.is_empty() {
                bail!(Error::InvalidArgument(format!(
                    "verify: {}",
                    bad.join("; ")
                )));
            }
            eprintln!("verify: complex and triangulation match the oracle");
        }
    }
    Ok(())
}

fn generate(args: GenerateArgs) -> anyhow::Result<()> {
    let shape: Shape = args.shape.parse()?;
    let mut cloud = functions::sample(shape, args.n, args.seed);
    if let Some(f) = args.function.and_then(|f| f.resolve(args.seed)) {
        cloud.gamma = f.evaluate(cloud.dim, &cloud.coords)?;
    }
    let mut out = open_output(&args.output)?;
    functions::write_points(&cloud, &mut out)?;
    out.flush()?;
    Ok(())
}

fn verify(args: VerifyArgs) -> anyhow::Result<()> {
    if args.dim == 0 || args.n == 0 {
        bail!(Error::InvalidArgument(
            "dimension and size must be positive".into()
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut failures = 0;
    for i in 0..args.instances {
        let n = rng.gen_range(1..=args.n);
        let points = random_points(&mut rng, n, args.dim, 50);
        let f = function_for(i, args.seed.wrapping_add(i as u64));
        let gamma = evaluate(f, &points);
        let complex = IncrementalComplex::build(OrderedPoints::from_points(&points, &gamma)?)?;
        let mut bad = oracle_mismatches(&complex);
        let report = equivalence_suite(&points, &gamma)?;
        if !report.passed() {
            bad.push(format!(
                "{} bigrades with differing Betti numbers",
                report.mismatches.len()
            ));
        }
        let status = if bad.is_empty() { "ok" } else { "FAIL" };
        println!(
            "{i:>4} n={n:<3} {:<15} {status} ({} bigrades){}",
            function_name(f),
            report.grades_checked,
            if bad.is_empty() {
                String::new()
            } else {
                format!(": {}", bad.join("; "))
            }
        );
        failures += usize::from(!bad.is_empty());
    }
    if failures > 0 {
        bail!("{failures} of {} instances failed", args.instances);
    }
    Ok(())
}

/// Peak resident set size in kB, where the platform reports it.
fn peak_memory_kb() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn bench(args: BenchArgs) -> anyhow::Result<()> {
    let shape: Shape = args.shape.parse()?;
    let mut cloud = functions::sample(shape, args.n, args.seed);
    let f = args
        .function
        .resolve(args.seed)
        .context("bench needs a synthesized function")?;
    cloud.gamma = f.evaluate(cloud.dim, &cloud.coords)?;
    let start = Instant::now();
    let outcome = pipeline::run(cloud.ordered()?, args.grading.into(), io::sink(), &[])?;
    let secs = start.elapsed().as_secs_f64();
    let s = outcome.complex.stats();
    println!("shape\tfunction\tn\tdelaunay\tincremental\tratio\ttime_s\tus_per_simplex\tpeak_kb");
    println!(
        "{}\t{}\t{}\t{}\t{}\t{:.3}\t{:.3}\t{:.3}\t{}",
        args.shape,
        args.function.name(),
        args.n,
        s.delaunay_size,
        s.total,
        s.ratio,
        secs,
        1e6 * secs / s.total.max(1) as f64,
        peak_memory_kb().map_or("-".to_string(), |k| k.to_string())
    );
    Ok(())
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(
            Error::Degenerate { .. } | Error::DuplicatePoint { .. } | Error::AffinelyDependent,
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        None => run(cli.run),
        Some(Command::Generate(a)) => generate(a),
        Some(Command::Verify(a)) => verify(a),
        Some(Command::Bench(a)) => bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = exit_code(&e);
            if code == 2 {
                eprintln!("hint: the input is not in general position; rerun with --jitter 1e-9 to perturb it");
            }
            ExitCode::from(code)
        }
    }
}
