//! `bireg`: generate, bound, construct and check bi-regular girth graphs.

use std::collections::HashSet;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use bireg_core::analysis::{self, family_stats, FamilyStats};
use bireg_core::bounds::{self, ProblemSpec};
use bireg_core::canon::Canonizer;
use bireg_core::codec::{self, Format, GraphReader};
use bireg_core::constructions::{self, Construction, ConstructOptions, ScanParams, ScanReport};
use bireg_core::generator::{self, GeneratorOptions};
use bireg_core::gluing::{self, GlueError};
use bireg_core::oracle::{self, OracleOptions};
use bireg_core::{Graph, Length};

const USAGE: u8 = 2;
const VERIFICATION: u8 = 3;

#[derive(Parser)]
#[command(name = "bireg", version, about = "Bi-regular graphs of prescribed girth")]
struct Cli {
    /// Write the run manifest to this file as well as standard error.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate all ({r,m};g)-graphs of order n (or r-regular ones of girth >= g).
    Generate(GenerateArgs),
    /// Print every lower bound for (r,m,g), optionally at order n.
    Bounds {
        r: usize,
        m: usize,
        g: usize,
        #[arg(long)]
        n: Option<u64>,
    },
    /// Apply a seed construction to every regular graph in a file.
    Construct(ConstructArgs),
    /// Glue copies of each seed graph to reach degree m.
    Glue(GlueArgs),
    /// Per-order statistics of a family of graphs read from a file or stdin.
    Analyze(AnalyzeArgs),
    /// Print the order-(3m+1) member of the Petersen-like ({3,m};5) family.
    Family { m: usize },
    /// Re-encode graphs, optionally dropping isomorphic repeats.
    Convert {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "graph6")]
        to: FormatArg,
        #[arg(long)]
        dedup: bool,
    },
    /// Compare the generator with the reference search for every order up to nmax.
    Crosscheck(CrossArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Graph6,
    Sparse6,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Graph6 => Format::Graph6,
            FormatArg::Sparse6 => Format::Sparse6,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule {
    Dmin,
    Placement,
    Isolated,
    Iso,
}

#[derive(Args)]
struct GenerateArgs {
    /// r m g n, or r g n with --regular
    #[arg(num_args = 3..=4, required = true, value_name = "PARAMS")]
    values: Vec<usize>,
    /// Run only residue RES of MOD, e.g. 0/4.
    #[arg(long = "mod", value_name = "RES/MOD")]
    split: Option<String>,
    /// Number of added edges at which the search is split.
    #[arg(long, default_value_t = 1)]
    split_depth: usize,
    /// Disable a pruning rule.
    #[arg(long = "no-prune", value_enum)]
    no_prune: Vec<Rule>,
    /// Generate r-regular graphs of girth at least g.
    #[arg(long)]
    regular: bool,
    /// Write graphs to this file instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Only report the count.
    #[arg(long)]
    count_only: bool,
    #[arg(long, value_enum, default_value = "graph6")]
    format: FormatArg,
}

#[derive(Args)]
struct ConstructArgs {
    seeds: PathBuf,
    /// Construction 1, 2 or 3.
    #[arg(long)]
    which: Construction,
    /// Deleted edges (2t endpoints for construction 2, 2t edges for 3).
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long)]
    g: usize,
    /// Skip the edge-distance pre-filter.
    #[arg(long)]
    permissive: bool,
    #[arg(long, default_value_t = 64)]
    exhaustive_limit: usize,
    /// Write the best graphs here as graph6.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GlueArgs {
    seeds: PathBuf,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    g: usize,
    #[arg(long, default_value_t = gluing::EXACT_LIMIT)]
    exact_threshold: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Input file; standard input when omitted or "-".
    file: Option<PathBuf>,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    m: usize,
    /// Also report Hamiltonicity for each graph.
    #[arg(long)]
    hamilton: bool,
}

#[derive(Args)]
struct CrossArgs {
    /// r m g nmax, or r g nmax with --regular
    #[arg(num_args = 3..=4, required = true, value_name = "PARAMS")]
    values: Vec<usize>,
    /// First order to check; never below the Moore-type bound.
    #[arg(long)]
    nmin: Option<usize>,
    #[arg(long)]
    regular: bool,
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Failure {
        Failure { code: USAGE, message: message.into() }
    }

    fn verification(message: impl Into<String>) -> Failure {
        Failure { code: VERIFICATION, message: message.into() }
    }

    fn other(message: impl ToString) -> Failure {
        Failure { code: 1, message: message.to_string() }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Failure {
        Failure::other(e)
    }
}

type Outcome = Result<Value, Failure>;

struct Manifest {
    inputs: Vec<(String, String)>,
}

impl Manifest {
    fn digest(&mut self, path: &Path) -> Result<(), Failure> {
        if path == Path::new("-") {
            return Ok(());
        }
        let bytes = std::fs::read(path).map_err(|e| Failure::other(format!("{}: {e}", path.display())))?;
        let hex: String = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push((path.display().to_string(), hex));
        Ok(())
    }
}

fn workers() -> usize {
    std::env::var("BIREG_WORKERS").ok().and_then(|w| w.parse().ok()).filter(|&w| w >= 1).unwrap_or(1)
}

fn spec_of(values: &[usize], regular: bool) -> Result<(ProblemSpec, usize), Failure> {
    match (regular, values) {
        (true, [r, g, n]) => {
            if *r < 2 || *g < 3 {
                return Err(Failure::usage("need r >= 2 and g >= 3"));
            }
            Ok((ProblemSpec { r: *r, m: r + 1, g: *g }, *n))
        }
        (false, [r, m, g, n]) => Ok((ProblemSpec::new(*r, *m, *g).map_err(|e| Failure::usage(e.to_string()))?, *n)),
        (true, _) => Err(Failure::usage("expected r g n with --regular")),
        (false, _) => Err(Failure::usage("expected r m g n")),
    }
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>, Failure> {
    match path {
        None => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) if p == Path::new("-") => Ok(Box::new(BufReader::new(io::stdin()))),
        Some(p) => {
            let f = File::open(p).map_err(|e| Failure::other(format!("{}: {e}", p.display())))?;
            Ok(Box::new(BufReader::new(f)))
        }
    }
}

fn read_graphs(path: Option<&Path>) -> Result<Vec<Graph>, Failure> {
    let name = path.map_or("<stdin>".to_string(), |p| p.display().to_string());
    GraphReader::new(open_input(path)?)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::other(format!("{name}: {e}")))
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::other(format!("{}: {e}", p.display())))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn generate(a: &GenerateArgs) -> Outcome {
    let (spec, n) = spec_of(&a.values, a.regular)?;
    if n > generator::MAX_ORDER {
        return Err(Failure::usage(format!("order {n} exceeds {}", generator::MAX_ORDER)));
    }
    let mut opts = GeneratorOptions {
        regular: a.regular,
        split_depth: a.split_depth,
        ..Default::default()
    };
    for rule in &a.no_prune {
        match rule {
            Rule::Dmin => opts.dmin_rule = false,
            Rule::Placement => opts.placement_rule = false,
            Rule::Isolated => opts.isolated_rule = false,
            Rule::Iso => opts.iso_rejection = false,
        }
    }
    let mut out = output(a.out.as_deref())?;
    let format: Format = a.format.into();
    let mut count = 0u64;
    let mut write_err = None;
    let mut emit = |g: &Graph| {
        count += 1;
        if !a.count_only && write_err.is_none() {
            if let Err(e) = codec::write_graph(&mut out, g, format) {
                write_err = Some(e);
            }
        }
    };
    let stats = if let Some(split) = &a.split {
        let (res, modulus) = split
            .split_once('/')
            .and_then(|(r, m)| Some((r.parse::<u64>().ok()?, m.parse::<u64>().ok()?)))
            .ok_or_else(|| Failure::usage(format!("--mod expects RES/MOD, got {split:?}")))?;
        opts.split_res = res;
        opts.split_mod = modulus;
        generator::generate_with(&spec, n, &opts, &mut |g| emit(&g)).map_err(|e| Failure::usage(e.to_string()))?
    } else if workers() > 1 {
        let (graphs, stats) = generator::generate_parallel(&spec, n, &opts, workers()).map_err(|e| Failure::usage(e.to_string()))?;
        graphs.iter().for_each(&mut emit);
        stats
    } else {
        generator::generate_with(&spec, n, &opts, &mut |g| emit(&g)).map_err(|e| Failure::usage(e.to_string()))?
    };
    if let Some(e) = write_err {
        return Err(e.into());
    }
    out.flush()?;
    eprintln!("counted {count} graphs of order {n}");
    Ok(json!({
        "spec": {"r": spec.r, "m": if a.regular { Value::Null } else { json!(spec.m) }, "g": spec.g, "n": n},
        "regular": a.regular,
        "mod": a.split,
        "disabled": a.no_prune.iter().filter_map(|r| r.to_possible_value()).map(|v| v.get_name().to_string()).collect::<Vec<_>>(),
        "count": count,
        "nodes": stats.nodes,
        "iso_rejected": stats.iso_rejected,
        "pruned": stats.pruned,
    }))
}

fn print_bounds(r: usize, m: usize, g: usize, n: Option<u64>) -> Outcome {
    let spec = ProblemSpec::new(r, m, g).map_err(|e| Failure::usage(e.to_string()))?;
    let bireg = bounds::bireg_moore_bound(r, m, g);
    let n = n.unwrap_or(bireg);
    let rep = bounds::report(&spec, n);
    let mut out = io::stdout().lock();
    writeln!(out, "moore\t{}", rep.moore)?;
    writeln!(out, "biregMoore\t{}", rep.bireg_moore)?;
    for (d, b) in &rep.dist_bounds {
        writeln!(out, "dmin={d}\t{b}")?;
    }
    writeln!(out, "n\t{n}")?;
    writeln!(out, "minDistDegM\t{}", rep.min_dist_threshold)?;
    match &rep.max_placement {
        Some(p) => writeln!(out, "maxPlacement\t{p}")?,
        None => writeln!(out, "maxPlacement\tnone")?,
    }
    writeln!(out, "placements\t{}", rep.placements)?;
    Ok(json!({"spec": {"r": r, "m": m, "g": g, "n": n}, "biregMoore": bireg}))
}

fn construct(a: &ConstructArgs, manifest: &mut Manifest) -> Outcome {
    manifest.digest(&a.seeds)?;
    let params = ScanParams {
        construction: a.which,
        t: a.t,
        g: a.g,
        options: ConstructOptions {
            permissive: a.permissive,
            exhaustive_limit: a.exhaustive_limit,
            ..Default::default()
        },
    };
    let report: ScanReport = constructions::scan_seeds(open_input(Some(&a.seeds))?, &params).map_err(|e| match e {
        constructions::ConstructError::DegreeTooSmall { .. } => Failure::usage(e.to_string()),
        _ => Failure::other(format!("{}: {e}", a.seeds.display())),
    })?;
    let mut out = io::stdout().lock();
    writeln!(out, "{}", ScanReport::HEADER)?;
    for row in report.rows() {
        writeln!(out, "{row}")?;
    }
    if let Some(path) = &a.out {
        let mut f = output(Some(path))?;
        for b in report.best.values() {
            codec::write_graph(&mut f, &b.graph, Format::Graph6)?;
        }
        f.flush()?;
    }
    eprintln!("scanned {} seeds, skipped {}", report.seeds, report.skipped);
    Ok(json!({"seeds": report.seeds, "skipped": report.skipped, "count": report.best.len()}))
}

fn glue(a: &GlueArgs, manifest: &mut Manifest) -> Outcome {
    manifest.digest(&a.seeds)?;
    let seeds = read_graphs(Some(&a.seeds))?;
    let mut out = io::stdout().lock();
    let mut built = 0;
    for (i, seed) in seeds.iter().enumerate() {
        if seed.girth() != Length::Finite(a.g) {
            eprintln!("seed {}: girth {} differs from {}, skipped", i + 1, seed.girth(), a.g);
            continue;
        }
        match gluing::best_glued_bound(seed, a.m, a.exact_threshold) {
            Ok((order, plan, graph)) => {
                codec::write_graph(&mut out, &graph, Format::Graph6)?;
                eprintln!("seed {}: order {order} {plan}", i + 1);
                built += 1;
            }
            Err(GlueError::Verification(e)) => {
                return Err(Failure::verification(format!("seed {}: glued graph failed verification: {e}", i + 1)));
            }
            Err(e) => eprintln!("seed {}: {e}", i + 1),
        }
    }
    out.flush()?;
    Ok(json!({"m": a.m, "g": a.g, "count": built}))
}

fn analyze(a: &AnalyzeArgs, manifest: &mut Manifest) -> Outcome {
    if let Some(p) = &a.file {
        manifest.digest(p)?;
    }
    let graphs = read_graphs(a.file.as_deref())?;
    let mut by_order = std::collections::BTreeMap::<usize, Vec<&Graph>>::new();
    for g in &graphs {
        by_order.entry(g.order()).or_default().push(g);
    }
    let mut out = io::stdout().lock();
    writeln!(out, "{}", FamilyStats::HEADER)?;
    for (n, family) in &by_order {
        let stats = family_stats(family.iter().copied(), a.r, a.m).map_err(|e| Failure::usage(e.to_string()))?;
        let girth = family.iter().map(|g| g.girth()).min().unwrap_or(Length::Infinite);
        let g = girth.finite().unwrap_or(0);
        writeln!(out, "{}", stats.row(a.r, a.m, g, *n))?;
    }
    if a.hamilton {
        writeln!(out, "index\torder\tgirth\thamiltonian\thypohamiltonian")?;
        for (i, g) in graphs.iter().enumerate() {
            let ham = analysis::is_hamiltonian(g).map_err(|e| Failure::usage(e.to_string()))?;
            let hypo = analysis::is_hypohamiltonian(g).map_err(|e| Failure::usage(e.to_string()))?;
            writeln!(out, "{}\t{}\t{}\t{ham}\t{hypo}", i + 1, g.order(), g.girth())?;
        }
    }
    Ok(json!({"r": a.r, "m": a.m, "count": graphs.len()}))
}

fn family(m: usize) -> Outcome {
    let g = analysis::petersen_family(m).map_err(|e| Failure::usage(e.to_string()))?;
    let mut out = io::stdout().lock();
    codec::write_graph(&mut out, &g, Format::Graph6)?;
    Ok(json!({"m": m, "order": g.order()}))
}

fn convert(file: &Path, to: FormatArg, dedup: bool, manifest: &mut Manifest) -> Outcome {
    manifest.digest(file)?;
    let mut out = output(None)?;
    let mut canon = Canonizer::new();
    let mut seen = HashSet::new();
    let mut count = 0;
    for (i, g) in GraphReader::new(open_input(Some(file))?).enumerate() {
        let g = g.map_err(|e| Failure::other(format!("{}: {e}", file.display())))?;
        if dedup && !seen.insert(canon.certificate(&g)) {
            continue;
        }
        codec::write_graph(&mut out, &g, to.into()).map_err(|e| Failure::other(format!("graph {}: {e}", i + 1)))?;
        count += 1;
    }
    out.flush()?;
    Ok(json!({"count": count}))
}

fn crosscheck(a: &CrossArgs) -> Outcome {
    let (spec, nmax) = spec_of(&a.values, a.regular)?;
    let floor = if a.regular {
        bounds::moore_bound(spec.r, spec.g)
    } else {
        bounds::bireg_moore_bound(spec.r, spec.m, spec.g)
    } as usize;
    let nmin = a.nmin.unwrap_or(floor).max(floor);
    let opts = OracleOptions { regular: a.regular, ..Default::default() };
    let mut out = io::stdout().lock();
    writeln!(out, "n\tgenerator\toracle\tagree")?;
    let mut rows = Vec::new();
    let mut all = true;
    for n in nmin..=nmax {
        let c = oracle::cross_check(&spec, n, &GeneratorOptions::default(), &opts).map_err(|e| Failure::usage(e.to_string()))?;
        writeln!(out, "{n}\t{}\t{}\t{}", c.generator_count, c.oracle_count, c.agrees())?;
        for g in &c.only_generator {
            writeln!(out, "generator-only\t{}", codec::encode_graph6(g).map_err(Failure::other)?)?;
        }
        for g in &c.only_oracle {
            writeln!(out, "oracle-only\t{}", codec::encode_graph6(g).map_err(Failure::other)?)?;
        }
        all &= c.agrees();
        rows.push(json!({"n": n, "generator": c.generator_count, "oracle": c.oracle_count}));
    }
    out.flush()?;
    if !all {
        return Err(Failure::verification("generator and oracle disagree"));
    }
    Ok(json!({"rows": rows}))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut manifest = Manifest { inputs: Vec::new() };
    let (name, result) = match &cli.command {
        Command::Generate(a) => ("generate", generate(a)),
        Command::Bounds { r, m, g, n } => ("bounds", print_bounds(*r, *m, *g, *n)),
        Command::Construct(a) => ("construct", construct(a, &mut manifest)),
        Command::Glue(a) => ("glue", glue(a, &mut manifest)),
        Command::Analyze(a) => ("analyze", analyze(a, &mut manifest)),
        Command::Family { m } => ("family", family(*m)),
        Command::Convert { file, to, dedup } => ("convert", convert(file, *to, *dedup, &mut manifest)),
        Command::Crosscheck(a) => ("crosscheck", crosscheck(a)),
    };
    let (code, params) = match result {
        Ok(params) => (0, params),
        Err(f) => {
            eprintln!("bireg {name}: {}", f.message);
            (f.code, json!({"error": f.message}))
        }
    };
    let record = json!({
        "subcommand": name,
        "result": params,
        "exit": code,
        "wall_ms": start.elapsed().as_millis() as u64,
        "version": concat!("bireg ", env!("CARGO_PKG_VERSION")),
        "platform": format!("{}-{}", std::env::consts::ARCH, std::env::consts::OS),
        "inputs": manifest.inputs.iter().map(|(p, h)| json!({"path": p, "sha256": h})).collect::<Vec<_>>(),
    });
    eprintln!("manifest {record}");
    if let Some(path) = &cli.manifest {
        if let Err(e) = std::fs::write(path, format!("{record}\n")) {
            eprintln!("bireg: cannot write manifest {}: {e}", path.display());
        }
    }
    ExitCode::from(code)
}
