//! `pathfair`: solve, check and explore connected allocations on a path.
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 the solver rejected
//! the input, 3 the oracle budget ran out, 64 unreadable input or bad usage.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pathfair::egalitarian::eq1_complete_chores;
use pathfair::extremal::solve_extremal;
use pathfair::format::{
    parse_allocation, parse_assignment, parse_instance, parse_lnes, write_allocation, write_instance, ParseError,
};
use pathfair::generate::{generate, GenConfig, Profile};
use pathfair::oracle::{exists_satisfying, find_dominating, max_egalitarian};
use pathfair::reductions::{build_gadget, forward_map, validate_lnes, GadgetKind};
use pathfair::{
    check, eq1_complete, po_star, AgentOrder, Allocation, EnumerationBudget, Error, Instance, Kind, Property,
    Requirement, Within,
};

#[derive(Parser)]
#[command(name = "pathfair", version, about = "Connected fair allocations of items on a path")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a solver and print its allocation with a property report.
    Solve(SolveArgs),
    /// Evaluate fairness and efficiency properties of an allocation.
    Check(CheckArgs),
    /// Answer a question by exhaustive search.
    Oracle(OracleArgs),
    /// Compile an LNES formula into a path instance.
    Reduce(ReduceArgs),
    /// Print a seeded random instance.
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Algorithm {
    Eq1Complete,
    Eq1Chores,
    PoStar,
    Extremal,
}

#[derive(Args)]
struct SolveArgs {
    instance: PathBuf,
    #[arg(long, value_enum)]
    alg: Algorithm,
    /// Agent order as names or 1-based indices, e.g. `1,2,3`; identity by default.
    #[arg(long)]
    order: Option<String>,
}

#[derive(Args)]
struct CheckArgs {
    instance: PathBuf,
    allocation: PathBuf,
    /// Comma-separated properties, e.g. `eq1,ef1,alpha-eq1=1/2,po`.
    #[arg(long, default_value = "complete,eq1,ef1")]
    props: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum WithinArg {
    All,
    SigmaEq1,
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("query").required(true).args(["find", "max_egal", "dominates"])))]
struct OracleArgs {
    instance: PathBuf,
    /// First complete allocation meeting every listed requirement, e.g. `eq1,po` or `eq1,egal>=3`.
    #[arg(long)]
    find: Option<String>,
    /// Best egalitarian welfare under `--order`.
    #[arg(long)]
    max_egal: bool,
    /// An allocation that Pareto-dominates the one in this file.
    #[arg(long)]
    dominates: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "all")]
    within: WithinArg,
    #[arg(long)]
    order: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Nw,
    Eq1Po,
    Ef1Po,
    #[value(name = "ef1-po-d", alias = "ef1-po-doubled")]
    Ef1PoD,
}

#[derive(Args)]
struct ReduceArgs {
    lnes: PathBuf,
    #[arg(long, value_enum)]
    target: Target,
    /// Satisfying assignment (true variable names) to map to an allocation.
    #[arg(long)]
    tau: Option<PathBuf>,
    /// Write the mapped allocation here instead of after the instance.
    #[arg(long, requires = "tau")]
    alloc_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Goods,
    Chores,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "goods")]
    kind: KindArg,
    /// uniform[:K], binary[:DENSITY], binary-extremal, identical[:K] or monotone[:K].
    #[arg(long, default_value = "uniform")]
    profile: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum Failure {
    CheckFailed,
    Rejected(String),
    Budget(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Rejected(other.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_err(path: &Path) -> impl Fn(ParseError) -> Failure + '_ {
    move |e| Failure::Input(format!("{}: {e}", path.display()))
}

fn load_instance(path: &Path) -> Result<Instance, Failure> {
    parse_instance(&read(path)?).map_err(parse_err(path))
}

fn load_allocation(path: &Path, inst: &Instance) -> Result<Allocation, Failure> {
    parse_allocation(&read(path)?, inst).map_err(parse_err(path))
}

fn budget() -> Result<EnumerationBudget, Failure> {
    EnumerationBudget::from_env().map_err(Failure::Input)
}

/// Names or 1-based indices, comma separated.
fn parse_order(inst: &Instance, text: Option<&str>) -> Result<AgentOrder, Failure> {
    let Some(text) = text else {
        return Ok(AgentOrder::identity(inst.n()));
    };
    let agents = text
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            inst.agent_index(tok)
                .or_else(|| tok.parse::<usize>().ok().filter(|&k| (1..=inst.n()).contains(&k)).map(|k| k - 1))
                .ok_or_else(|| Failure::Input(format!("--order: unknown agent {tok:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    AgentOrder::new(agents, inst.n()).map_err(|e| Failure::Input(format!("--order: {e}")))
}

fn parse_list<T: std::str::FromStr<Err = String>>(flag: &str, text: &str) -> Result<Vec<T>, Failure> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<T>().map_err(|e| Failure::Input(format!("{flag}: {e}"))))
        .collect()
}

fn report(inst: &Instance, alloc: &Allocation, props: &[Property]) -> Result<(String, bool), Failure> {
    let r = check(inst, alloc, props, &budget()?)?;
    let mut out = String::new();
    let profile: Vec<String> = r.utility_profile.iter().map(i64::to_string).collect();
    writeln!(out, "# utilities {}", profile.join(" ")).unwrap();
    writeln!(out, "# utilitarian {}", r.utilitarian_welfare).unwrap();
    writeln!(out, "# egalitarian {}", r.egalitarian_welfare).unwrap();
    for (p, ok) in &r.results {
        writeln!(out, "# {p} {ok}").unwrap();
    }
    Ok((out, r.all_pass()))
}

fn solve(args: &SolveArgs) -> Outcome {
    let inst = load_instance(&args.instance)?;
    let order = parse_order(&inst, args.order.as_deref())?;
    let structure = [Property::Connected, Property::SigmaConsistent, Property::Complete];
    let (alloc, fairness) = match args.alg {
        Algorithm::Eq1Complete => (eq1_complete(&inst, &order)?, Property::Eq1),
        Algorithm::Eq1Chores => (eq1_complete_chores(&inst, &order)?, Property::Eq1Chores),
        Algorithm::PoStar => (po_star(&inst, &order)?, Property::Eq1),
        Algorithm::Extremal => match solve_extremal(&inst)? {
            Some(a) => (a, Property::Nw),
            None => return Err(Failure::Rejected("no connected non-wasteful EQ1 allocation exists".into())),
        },
    };
    let mut props = structure.to_vec();
    props.push(fairness);
    if matches!(args.alg, Algorithm::Extremal) {
        props.push(Property::Eq1);
    }
    let (text, _) = report(&inst, &alloc, &props)?;
    Ok(write_allocation(&inst, &alloc) + &text)
}

fn check_cmd(args: &CheckArgs) -> Outcome {
    let inst = load_instance(&args.instance)?;
    let alloc = load_allocation(&args.allocation, &inst)?;
    let props: Vec<Property> = parse_list("--props", &args.props)?;
    let (text, pass) = report(&inst, &alloc, &props)?;
    let text: String = text.lines().map(|l| format!("{}\n", l.trim_start_matches("# "))).collect();
    if pass {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::CheckFailed)
    }
}

fn oracle(args: &OracleArgs) -> Outcome {
    let inst = load_instance(&args.instance)?;
    let budget = budget()?;
    let render = |a: Option<Allocation>| match a {
        Some(a) => write_allocation(&inst, &a),
        None => "NONE\n".to_string(),
    };
    if let Some(raw) = &args.find {
        let reqs: Vec<Requirement> = parse_list("--find", raw)?;
        let sigma = args.order.as_deref().map(|o| parse_order(&inst, Some(o))).transpose()?;
        return Ok(render(exists_satisfying(&inst, &reqs, sigma.as_ref(), &budget)?));
    }
    if args.max_egal {
        let sigma = parse_order(&inst, args.order.as_deref())?;
        let (value, witness) = max_egalitarian(&inst, &sigma, &budget)?;
        return Ok(format!("{value}\n{}", write_allocation(&inst, &witness)));
    }
    let path = args.dominates.as_ref().expect("clap enforces one query");
    let alloc = load_allocation(path, &inst)?;
    let within = match args.within {
        WithinArg::All => Within::All,
        WithinArg::SigmaEq1 => Within::SigmaEq1Complete,
    };
    Ok(render(find_dominating(&inst, &alloc, within, &budget)?))
}

fn reduce(args: &ReduceArgs) -> Outcome {
    let raw = parse_lnes(&read(&args.lnes)?).map_err(parse_err(&args.lnes))?;
    let lnes = validate_lnes(&raw)?;
    let kind = match args.target {
        Target::Nw => GadgetKind::Nw,
        Target::Eq1Po => GadgetKind::Eq1Po,
        Target::Ef1Po => GadgetKind::Ef1Po,
        Target::Ef1PoD => GadgetKind::Ef1PoDoubled,
    };
    let (inst, layout) = build_gadget(kind, &lnes);
    let labels: Vec<&str> = (0..layout.m()).map(|g| layout.label(g)).collect();
    let mut out = format!("# {kind} gadget, p = {}\n# goods: {}\n", lnes.p(), labels.join(" "));
    out += &write_instance(&inst);
    if let Some(tau_path) = &args.tau {
        let tau = parse_assignment(&read(tau_path)?, lnes.p()).map_err(parse_err(tau_path))?;
        let alloc = forward_map(&lnes, &layout, &tau)?;
        let text = write_allocation(&inst, &alloc);
        match &args.alloc_out {
            Some(path) => {
                fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            }
            None => out = out + "\n" + &text,
        }
    }
    Ok(out)
}

fn gen(args: &GenArgs) -> Outcome {
    let profile: Profile = args.profile.parse().map_err(|e| Failure::Input(format!("--profile: {e}")))?;
    let kind = match args.kind {
        KindArg::Goods => Kind::Goods,
        KindArg::Chores => Kind::Chores,
    };
    let inst = generate(&GenConfig { m: args.m, n: args.n, kind, profile, seed: args.seed })?;
    Ok(write_instance(&inst))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    let outcome = match &cli.command {
        Command::Solve(a) => solve(a),
        Command::Check(a) => check_cmd(a),
        Command::Oracle(a) => oracle(a),
        Command::Reduce(a) => reduce(a),
        Command::Gen(a) => gen(a),
    };
    match outcome {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::CheckFailed) => ExitCode::from(1),
        Err(Failure::Rejected(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
    }
}
