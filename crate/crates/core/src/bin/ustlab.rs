use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ustlab::io::{parse_spec, run, write_record, write_results, Category, ExperimentSpec, Format, Kind};
use ustlab::{Error, Result};

#[derive(Parser)]
#[command(name = "ustlab", version, about = "Uniform spanning tree and loop-erased walk toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact Kirchhoff computations: tree counts, cylinders, laws, Green's functions.
    Exact(RunArgs),
    /// Draw one tree, walk or loop-erased walk and dump it.
    Sample(RunArgs),
    /// Monte Carlo experiments.
    Experiment(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// JSON spec file; inline flags are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Lattice dimension d.
    #[arg(long = "dim")]
    dim: Option<usize>,
    /// Box radius n (comma-separated for several).
    #[arg(long = "box", value_delimiter = ',')]
    box_radius: Vec<u32>,
    /// Grid side lengths, e.g. 2,3.
    #[arg(long, value_delimiter = ',')]
    grid: Vec<usize>,
    /// Separations r (or L for separator runs).
    #[arg(long, value_delimiter = ',')]
    r: Vec<u32>,
    /// Cutoffs M.
    #[arg(long, value_delimiter = ',')]
    cutoff: Vec<u64>,
    #[arg(long)]
    source: Option<u32>,
    #[arg(long)]
    target: Option<u32>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; defaults to the extension of --out, else JSON.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

// mirrors the spec kinds so clap can list them
#[derive(Clone, Copy, clap::ValueEnum)]
enum KindArg {
    TreeCount,
    Cylinder,
    CurrentFraction,
    Mu3Law,
    LerwLaw,
    FreeWiredGap,
    GreenExact,
    SampleTree,
    SampleWalk,
    SampleLerw,
    Intersection,
    IntersectionMoments,
    Connection,
    ComponentDensity,
    Separator,
    GreenScaling,
}

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        use KindArg::*;
        match k {
            TreeCount => Kind::TreeCount,
            Cylinder => Kind::Cylinder,
            CurrentFraction => Kind::CurrentFraction,
            Mu3Law => Kind::Mu3Law,
            LerwLaw => Kind::LerwLaw,
            FreeWiredGap => Kind::FreeWiredGap,
            GreenExact => Kind::GreenExact,
            SampleTree => Kind::SampleTree,
            SampleWalk => Kind::SampleWalk,
            SampleLerw => Kind::SampleLerw,
            Intersection => Kind::Intersection,
            IntersectionMoments => Kind::IntersectionMoments,
            Connection => Kind::Connection,
            ComponentDensity => Kind::ComponentDensity,
            Separator => Kind::Separator,
            GreenScaling => Kind::GreenScaling,
        }
    }
}

fn nonempty<T>(v: Vec<T>) -> Option<Vec<T>> {
    (!v.is_empty()).then_some(v)
}

fn inline_spec(a: RunArgs) -> Result<ExperimentSpec> {
    let schema = |path: &str, message: &str| Error::Schema { path: path.into(), message: message.into() };
    let kind: Kind = a.kind.ok_or_else(|| schema("kind", "required (or pass --spec)"))?.into();
    let seed = a.seed.ok_or_else(|| schema("seed", "required"))?;
    let mut s = ExperimentSpec::new(kind, seed);
    s.d = a.dim;
    s.n = nonempty(a.box_radius);
    s.grid = nonempty(a.grid);
    if kind == Kind::Separator {
        s.separations = nonempty(a.r);
    } else {
        s.r = nonempty(a.r);
    }
    s.cutoff = nonempty(a.cutoff);
    s.source = a.source;
    s.target = a.target;
    s.reps = a.reps;
    s.validate()?;
    Ok(s)
}

fn execute(category: Category, args: RunArgs) -> Result<()> {
    let out = args.out.clone();
    let format = args.format.or_else(|| out.as_deref().map(Format::from_path)).unwrap_or_default();
    let spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
            parse_spec(&text)?
        }
        None => inline_spec(args)?,
    };
    if spec.kind.category() != category {
        return Err(Error::Schema {
            path: "kind".into(),
            message: format!("{:?} belongs to the {:?} subcommand", spec.kind, spec.kind.category()).to_lowercase(),
        });
    }
    let record = run(&spec)?;
    match out {
        Some(path) => write_results(&record, &path, format),
        None => write_record(&record, format, std::io::stdout().lock()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (category, args) = match cli.command {
        Command::Exact(a) => (Category::Exact, a),
        Command::Sample(a) => (Category::Sample, a),
        Command::Experiment(a) => (Category::Experiment, a),
    };
    match execute(category, args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
