//! Command-line interface for the swap-game simulator.
//!
//! Exit codes: `0` success (for `check`: the instance is an equilibrium),
//! `1` negative verdict (`check` found unhappy players, `oracle-validate`
//! found disagreements), `2` usage or input errors.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use swapgames::analysis::{
    oracle_validate, poa_scan, unhappy_players, OracleCaseRow, PoAReport, ScanMode, ScanOptions,
};
use swapgames::dynamics::{default_max_steps, run, Outcome, RunResult, Scheduler};
use swapgames::instances as gen;
use swapgames::io::{read_edge_list, to_dot, write_edge_list, write_trace};
use swapgames::{Attitude, CostKind, ExecMode, Graph, PlayerModel};

#[derive(Parser)]
#[command(
    name = "swapgames",
    about = "Simulate and analyze local-view swap games on graphs",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance and print it as an edge list (or DOT).
    Generate(GenerateArgs),
    /// Run best-response dynamics on an instance.
    Simulate(SimulateArgs),
    /// Check whether an instance is an equilibrium for a player model.
    Check(CheckArgs),
    /// Scan tree isomorphism classes for equilibria and report cost ratios.
    Scan(ScanArgs),
    /// Compare the closed-form swap evaluation against the brute-force
    /// oracle on random cases.
    OracleValidate(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Star,
    Path,
    RandomTree,
    RandomConnected,
    Ts,
    TsPrime,
    Caterpillar,
    Seesaw,
}

#[derive(Args)]
struct FamilyParams {
    /// Instance family to generate.
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Vertex count (star, path, random-tree, random-connected).
    #[arg(long)]
    n: Option<usize>,
    /// Edge count (random-connected).
    #[arg(long)]
    m: Option<usize>,
    /// Spine parameter (ts, ts-prime).
    #[arg(long)]
    p: Option<usize>,
    /// Spine length (caterpillar).
    #[arg(long)]
    q: Option<usize>,
    /// Leaf imbalance (seesaw).
    #[arg(long)]
    seesaw_m: Option<usize>,
    /// Extra leaves on the first pendant-star center (ts only).
    #[arg(long, default_value_t = 0)]
    pad: usize,
    /// Seed for randomized families.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl FamilyParams {
    fn build(&self) -> Result<Graph> {
        let need = |name: &str, v: Option<usize>| {
            v.ok_or_else(|| anyhow!("this family requires --{name}"))
        };
        let g = match self.family {
            FamilyArg::Star => gen::gen_star(need("n", self.n)?)?,
            FamilyArg::Path => gen::gen_path(need("n", self.n)?)?,
            FamilyArg::RandomTree => gen::gen_random_tree(need("n", self.n)?, self.seed)?,
            FamilyArg::RandomConnected => {
                gen::gen_random_connected(need("n", self.n)?, need("m", self.m)?, self.seed)?
            }
            FamilyArg::Ts => {
                if self.pad > 0 {
                    gen::gen_ts_padded(need("p", self.p)?, self.pad)?
                } else {
                    gen::gen_ts(need("p", self.p)?)?
                }
            }
            FamilyArg::TsPrime => gen::gen_ts_prime(need("p", self.p)?)?,
            FamilyArg::Caterpillar => gen::gen_caterpillar(need("q", self.q)?)?,
            FamilyArg::Seesaw => gen::gen_seesaw(need("seesaw-m", self.seesaw_m)?)?,
        };
        Ok(g)
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    family: FamilyParams,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Emit DOT instead of an edge list.
    #[arg(long)]
    dot: bool,
}

#[derive(Args)]
struct ModelParams {
    /// Player attitude: pess, weak, or opt.
    #[arg(long, default_value = "pess")]
    attitude: Attitude,
    /// Cost kind: sum or max.
    #[arg(long, default_value = "sum")]
    cost: CostKind,
    /// View radius.
    #[arg(long)]
    k: usize,
}

impl ModelParams {
    fn model(&self) -> Result<PlayerModel> {
        if self.k == 0 {
            bail!("--k must be at least 1");
        }
        Ok(PlayerModel::new(self.attitude, self.cost, self.k))
    }
}

#[derive(Args)]
struct InstanceInput {
    /// Read the instance from an edge-list file (`-` for stdin).
    #[arg(long, conflicts_with = "family")]
    instance: Option<PathBuf>,
    #[command(flatten)]
    family_params: OptionalFamilyParams,
}

/// Like [`FamilyParams`] but with the family itself optional, so
/// `--instance` can be used instead.
#[derive(Args)]
struct OptionalFamilyParams {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    q: Option<usize>,
    #[arg(long)]
    seesaw_m: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pad: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InstanceInput {
    fn load(&self) -> Result<Graph> {
        if let Some(path) = &self.instance {
            return read_instance(path);
        }
        let family = self
            .family_params
            .family
            .ok_or_else(|| anyhow!("provide either --instance or --family"))?;
        FamilyParams {
            family,
            n: self.family_params.n,
            m: self.family_params.m,
            p: self.family_params.p,
            q: self.family_params.q,
            seesaw_m: self.family_params.seesaw_m,
            pad: self.family_params.pad,
            seed: self.family_params.seed,
        }
        .build()
    }
}

fn read_instance(path: &Path) -> Result<Graph> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf)?;
        Ok(read_edge_list(buf.as_bytes())?)
    } else {
        let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
        Ok(read_edge_list(BufReader::new(file))?)
    }
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    input: InstanceInput,
    #[command(flatten)]
    model: ModelParams,
    /// Scheduler: rr, random, fixed:<player>, or simul.
    #[arg(long, default_value = "rr")]
    scheduler: String,
    /// Seed for the random scheduler.
    #[arg(long, default_value_t = 0)]
    run_seed: u64,
    /// Step budget (default 4n^3).
    #[arg(long)]
    max_steps: Option<usize>,
    /// Write the per-step trace as JSON Lines to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Write the final graph as DOT to this file (last move highlighted).
    #[arg(long)]
    dot: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    input: InstanceInput,
    #[command(flatten)]
    model: ModelParams,
    /// Run scans sequentially even when the parallel pool is available.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct ScanArgs {
    /// Vertex counts to scan: a single `N` or an inclusive range `A..B`.
    #[arg(long)]
    n: String,
    #[command(flatten)]
    model: ModelParams,
    /// Scan mode: `exhaustive` or `sample:<count>`.
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Seed for sampled scans.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here (stdout when absent).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Write each worst equilibrium as DOT into this directory.
    #[arg(long)]
    witness_dir: Option<PathBuf>,
    /// Run scans sequentially even when the parallel pool is available.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args)]
struct OracleArgs {
    /// Number of random cases.
    #[arg(long, default_value_t = 300)]
    cases: usize,
    /// Case-generation seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write CSV here (stdout when absent).
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Run cases sequentially even when the parallel pool is available.
    #[arg(long)]
    sequential: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let verdict = match cli.command {
        Command::Generate(args) => cmd_generate(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Check(args) => cmd_check(&args),
        Command::Scan(args) => cmd_scan(&args),
        Command::OracleValidate(args) => cmd_oracle(&args),
    };
    match verdict {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn open_out(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        None => Ok(Box::new(io::stdout().lock())),
        Some(p) => {
            let f = File::create(p).with_context(|| format!("creating {}", p.display()))?;
            Ok(Box::new(BufWriter::new(f)))
        }
    }
}

fn cmd_generate(args: &GenerateArgs) -> Result<ExitCode> {
    let g = args.family.build()?;
    let mut out = open_out(args.out.as_ref())?;
    if args.dot {
        out.write_all(to_dot(&g, None).as_bytes())?;
    } else {
        write_edge_list(&g, &mut out)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn parse_scheduler(spec: &str, n: usize, seed: u64) -> Result<Scheduler> {
    match spec {
        "rr" => Ok(Scheduler::round_robin(n)),
        "random" => Ok(Scheduler::random(seed)),
        "simul" => Ok(Scheduler::simultaneous()),
        other => {
            if let Some(player) = other.strip_prefix("fixed:") {
                let player: usize = player
                    .parse()
                    .map_err(|_| anyhow!("invalid fixed player {player:?}"))?;
                Ok(Scheduler::fixed(player))
            } else {
                bail!("unknown scheduler {other:?} (expected rr|random|fixed:<id>|simul)")
            }
        }
    }
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let g = args.input.load()?;
    let model = args.model.model()?;
    let sch = parse_scheduler(&args.scheduler, g.n(), args.run_seed)?;
    let max_steps = args.max_steps.unwrap_or_else(|| default_max_steps(g.n()));
    if max_steps == 0 {
        bail!("--max-steps must be at least 1");
    }
    let RunResult {
        outcome,
        trace,
        final_graph,
    } = run(&g, &model, sch, max_steps)?;
    if let Some(path) = &args.trace {
        let mut out = open_out(Some(path))?;
        write_trace(&trace, &mut out)?;
    }
    if let Some(path) = &args.dot {
        let last_move = trace.last().and_then(|ev| ev.moves.last());
        let mut out = open_out(Some(path))?;
        out.write_all(to_dot(&final_graph, last_move).as_bytes())?;
    }
    println!("{}", outcome.summary());
    match outcome {
        Outcome::Equilibrium { .. }
        | Outcome::Cycle { .. }
        | Outcome::BudgetExhausted { .. }
        | Outcome::Stalled { .. }
        | Outcome::Halted { .. } => Ok(ExitCode::SUCCESS),
    }
}

fn cmd_check(args: &CheckArgs) -> Result<ExitCode> {
    let g = args.input.load()?;
    let model = args.model.model()?;
    let exec = if args.sequential {
        ExecMode::Sequential
    } else {
        ExecMode::Auto
    };
    let unhappy = unhappy_players(&g, &model, exec);
    if unhappy.is_empty() {
        println!("equilibrium");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("not an equilibrium: {} unhappy player(s)", unhappy.len());
        for (u, swap) in unhappy {
            println!(
                "player {u}: remove {{{u}, {}}}, add {{{u}, {}}}",
                swap.remove, swap.add
            );
        }
        Ok(ExitCode::from(1))
    }
}

fn parse_n_range(spec: &str) -> Result<Vec<usize>> {
    if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a
            .parse()
            .map_err(|_| anyhow!("invalid range start {a:?}"))?;
        let b: usize = b.parse().map_err(|_| anyhow!("invalid range end {b:?}"))?;
        if a > b {
            bail!("empty range {spec:?}");
        }
        Ok((a..=b).collect())
    } else {
        let n: usize = spec.parse().map_err(|_| anyhow!("invalid n {spec:?}"))?;
        Ok(vec![n])
    }
}

fn parse_scan_mode(spec: &str, seed: u64) -> Result<ScanMode> {
    match spec {
        "exhaustive" => Ok(ScanMode::Exhaustive),
        other => {
            if let Some(count) = other.strip_prefix("sample:") {
                let count: usize = count
                    .parse()
                    .map_err(|_| anyhow!("invalid sample count {count:?}"))?;
                Ok(ScanMode::Sample { count, seed })
            } else {
                bail!("unknown mode {other:?} (expected exhaustive|sample:<count>)")
            }
        }
    }
}

fn cmd_scan(args: &ScanArgs) -> Result<ExitCode> {
    let ns = parse_n_range(&args.n)?;
    let model = args.model.model()?;
    let mode = parse_scan_mode(&args.mode, args.seed)?;
    let opts = ScanOptions {
        exec: if args.sequential {
            ExecMode::Sequential
        } else {
            ExecMode::Auto
        },
    };
    let mut out = open_out(args.csv.as_ref())?;
    writeln!(out, "{}", PoAReport::csv_header())?;
    for n in ns {
        let report = poa_scan(n, &model, mode, &opts)?;
        writeln!(out, "{}", report.csv_row())?;
        if let (Some(dir), Some(worst)) = (&args.witness_dir, report.worst_equilibrium()) {
            std::fs::create_dir_all(dir)?;
            let path = dir.join(format!("witness-n{}-{}.dot", n, model));
            std::fs::write(&path, to_dot(&worst.graph, None))
                .with_context(|| format!("writing {}", path.display()))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_oracle(args: &OracleArgs) -> Result<ExitCode> {
    if args.cases == 0 {
        bail!("--cases must be at least 1");
    }
    let opts = ScanOptions {
        exec: if args.sequential {
            ExecMode::Sequential
        } else {
            ExecMode::Auto
        },
    };
    let rows = oracle_validate(args.cases, args.seed, &opts);
    let mut out = open_out(args.csv.as_ref())?;
    writeln!(out, "{}", OracleCaseRow::csv_header())?;
    let mut disagreements = 0usize;
    for row in &rows {
        writeln!(out, "{}", row.csv_row())?;
        if !row.agree {
            disagreements += 1;
        }
    }
    drop(out);
    if disagreements > 0 {
        eprintln!("{disagreements} case(s) disagreed");
        Ok(ExitCode::from(1))
    } else {
        Ok(ExitCode::SUCCESS)
    }
}
