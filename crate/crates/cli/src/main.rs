use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use binlab::classify::{classify_fine, select_solver, Broad};
use binlab::decompose::layer_stats;
use binlab::lang::{aux_constants, families, structural_simplicity, AuxCase, LangError, LanguageFamily, Simplicity};
use binlab::problem_file::ProblemFile;
use binlab::solve::{
    plan_for, read_solution, run_plan, solve_auto, verify, write_solution, SolveError, Solved, SolverKind,
};
use binlab::tree::{generate, read_tree, write_tree};
use binlab::{Color, ColoredTree, Problem, Ratio, StructureBudget, TreeKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "binlab", version, about = "Binary labeling problems on 2-colored trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a tree file.
    Gen(GenArgs),
    /// Print the complexity class and the decision path.
    Classify(ClassifyArgs),
    /// Solve an instance and write a solution file.
    Solve(SolveArgs),
    /// Check a solution file.
    Verify(VerifyArgs),
    /// Constraint-family analysis.
    Lang {
        #[command(subcommand)]
        cmd: LangCmd,
    },
    /// Scaling benchmark, written as CSV.
    Bench(BenchArgs),
}

#[derive(Subcommand)]
enum LangCmd {
    /// Thinness and structural-simplicity constants of the problem's families.
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Path,
    Star,
    Regular,
    Random,
    Caterpillar,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: usize,
    /// White degree (regular), degree cap (random) or spine degree (caterpillar).
    #[arg(long, default_value_t = 3)]
    deg_white: usize,
    #[arg(long, default_value_t = 3)]
    deg_black: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; stdout when omitted.
    #[arg(short = 'o', long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct DegreeArgs {
    /// White degree, overriding the problem file.
    #[arg(long)]
    d: Option<usize>,
    /// Black degree, overriding the problem file.
    #[arg(long)]
    delta: Option<usize>,
}

#[derive(Args, Clone)]
struct BudgetArgs {
    /// Center-good exponent, as p/q.
    #[arg(long)]
    epsilon: Option<Ratio<u32>>,
    /// Edge-good distance.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long)]
    problem: PathBuf,
    #[command(flatten)]
    degrees: DegreeArgs,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long, default_value = "auto")]
    solver: SolverKind,
    #[arg(short = 'o', long)]
    out: PathBuf,
    #[command(flatten)]
    degrees: DegreeArgs,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    problem: PathBuf,
    #[arg(long)]
    tree: PathBuf,
    #[arg(long)]
    solution: PathBuf,
    #[command(flatten)]
    degrees: DegreeArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    problem: PathBuf,
    /// Largest degree examined.
    #[arg(long, default_value_t = 256)]
    probe: usize,
    #[command(flatten)]
    budget: BudgetArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Splitting,
    Matching,
    Sinkless,
    Quasi,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value = "auto")]
    solver: SolverKind,
    /// Comma-separated, ascending; `1e6` notation accepted.
    #[arg(long, value_delimiter = ',', value_parser = parse_size)]
    sizes: Vec<usize>,
    /// Comma-separated degree parameter values.
    #[arg(long, value_delimiter = ',')]
    degrees: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seeds: u64,
    #[arg(long)]
    csv: PathBuf,
}

fn parse_size(s: &str) -> Result<usize, String> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.fract() == 0.0 && x <= 1e12 => Ok(x as usize),
        _ => Err(format!("bad size `{s}`")),
    }
}

/// An error with its exit code: 1 infeasible, 2 invalid input, 3 internal.
struct Fail {
    code: u8,
    err: anyhow::Error,
}

fn invalid(err: impl Into<anyhow::Error>) -> Fail {
    Fail { code: 2, err: err.into() }
}

fn infeasible(err: impl Into<anyhow::Error>) -> Fail {
    Fail { code: 1, err: err.into() }
}

fn internal(err: impl Into<anyhow::Error>) -> Fail {
    Fail { code: 3, err: err.into() }
}

type CmdResult = Result<(), Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Gen(a) => cmd_gen(a),
        Cmd::Classify(a) => cmd_classify(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Lang { cmd: LangCmd::Analyze(a) } => cmd_lang(a),
        Cmd::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn write_out(path: Option<&Path>, text: &str) -> CmdResult {
    match path {
        Some(p) => fs::write(p, text)
            .with_context(|| format!("writing {}", p.display()))
            .map_err(invalid),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_tree(path: &Path) -> Result<ColoredTree, Fail> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(invalid)?;
    read_tree(&text)
        .with_context(|| format!("parsing {}", path.display()))
        .map_err(invalid)
}

fn load_problem(path: &Path, deg: &DegreeArgs) -> Result<(ProblemFile, Problem), Fail> {
    let file = ProblemFile::load(path).map_err(invalid)?;
    let p = file.resolve(deg.d, deg.delta).map_err(invalid)?;
    Ok((file, p))
}

/// Explicit flags, else the default budget. Family-derived constants are
/// reported by `lang analyze`; at small degrees they can exceed the degree
/// itself, so they are not applied implicitly.
fn budget_for(args: &BudgetArgs) -> Result<StructureBudget, Fail> {
    let default = StructureBudget::default();
    StructureBudget::new(args.epsilon.unwrap_or(default.epsilon), args.cap.unwrap_or(default.cap)).map_err(invalid)
}

fn cmd_gen(a: GenArgs) -> CmdResult {
    let kind = match a.kind {
        Kind::Path => TreeKind::Path,
        Kind::Star => TreeKind::Star { center: Color::White },
        Kind::Regular => TreeKind::Regular {
            white: a.deg_white,
            black: a.deg_black,
            depth: None,
        },
        Kind::Random => TreeKind::Random {
            cap: a.deg_white.max(a.deg_black),
        },
        Kind::Caterpillar => {
            let leaves = a.deg_white.saturating_sub(2);
            TreeKind::Caterpillar {
                spine: a.n / (1 + leaves),
                leaves,
            }
        }
    };
    let tree = generate(kind, a.n, a.seed).map_err(invalid)?;
    write_out(a.out.as_deref(), &write_tree(&tree))
}

fn cmd_classify(a: ClassifyArgs) -> CmdResult {
    let (_, p) = load_problem(&a.problem, &a.degrees)?;
    let budget = budget_for(&a.budget)?;
    let mut out = String::new();
    let broad = binlab::classify::classify_broad(&p.white, &p.black);
    let _ = writeln!(out, "problem: d={} delta={} W={} B={}", p.d, p.delta, p.white, p.black);
    let _ = writeln!(out, "budget: epsilon={} C={}", budget.epsilon, budget.cap);
    let _ = writeln!(out, "broad: {broad}");
    let class = binlab::classify::classify(&p, &budget);
    if broad == Broad::Log {
        let report = classify_fine(&p, &budget).map_err(internal)?;
        let _ = writeln!(out, "fine: {}", report.fine);
        if report.switched {
            let _ = writeln!(out, "normalized by switching colors (d < delta)");
        }
        for step in &report.path {
            let _ = writeln!(out, "  {} {}", step.question, if step.answer { "yes" } else { "no" });
        }
        for w in &report.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
    }
    let plan = select_solver(&p, &class, &budget);
    let _ = writeln!(out, "solver: {plan}");
    for note in &plan.notes {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(out, "class: {class}");
    print!("{out}");
    if broad == Broad::Unsolvable {
        return Err(infeasible(anyhow!("problem is unsolvable on some trees")));
    }
    Ok(())
}

fn solve_error(e: SolveError) -> Fail {
    match e {
        SolveError::Infeasible { .. } => infeasible(e),
        SolveError::NotConstantClass | SolveError::BadParameters(_) | SolveError::TooLarge { .. } => invalid(e),
        SolveError::CompletionInfeasible { .. } | SolveError::VerifyFailed(_) => internal(e),
    }
}

fn run_solver(tree: &ColoredTree, p: &Problem, kind: SolverKind, budget: &StructureBudget) -> Result<(Solved, String), Fail> {
    if kind == SolverKind::Auto {
        let report = solve_auto(tree, p, budget).map_err(solve_error)?;
        let mut desc = report.plan.to_string();
        if let Some(why) = &report.fallback {
            desc.push_str(&format!(" (fell back to the oracle: {why})"));
        }
        return Ok((report.solved, desc));
    }
    let plan = plan_for(kind, p, budget)
        .ok_or_else(|| invalid(anyhow!("solver does not apply to W={} B={}", p.white, p.black)))?;
    let solved = run_plan(tree, p, &plan).map_err(solve_error)?;
    Ok((solved, plan.to_string()))
}

fn cmd_solve(a: SolveArgs) -> CmdResult {
    let (_, p) = load_problem(&a.problem, &a.degrees)?;
    let budget = budget_for(&a.budget)?;
    let tree = load_tree(&a.tree)?;
    let (solved, desc) = run_solver(&tree, &p, a.solver, &budget)?;
    if let Err(v) = verify(&tree, &p, &solved.labeling) {
        return Err(internal(anyhow!("solver output failed verification at {} nodes", v.len())));
    }
    write_out(Some(&a.out), &write_solution(&tree, &solved.labeling))?;
    println!("solver: {desc}");
    if let Some(dec) = &solved.decomposition {
        let stats = layer_stats(dec);
        println!("layers: {} rounds: {}", stats.layer_count, stats.rounds_estimate);
    }
    println!("selected: {} of {} edges", solved.labeling.selected().len(), tree.edge_count());
    Ok(())
}

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let (_, p) = load_problem(&a.problem, &a.degrees)?;
    let tree = load_tree(&a.tree)?;
    let text = fs::read_to_string(&a.solution)
        .with_context(|| format!("reading {}", a.solution.display()))
        .map_err(invalid)?;
    let lab = read_solution(&tree, &text).map_err(invalid)?;
    match verify(&tree, &p, &lab) {
        Ok(()) => {
            println!("ok");
            Ok(())
        }
        Err(violations) => {
            for v in &violations {
                println!("violation: {v}");
            }
            Err(infeasible(anyhow!("{} violations", violations.len())))
        }
    }
}

fn analyze_family(name: &str, fam: &LanguageFamily, probe: usize, budget: &StructureBudget) -> String {
    let mut out = String::new();
    if let LanguageFamily::Loops(loops) = fam {
        for l in loops {
            let aux = aux_constants(l);
            let case = match aux.case {
                AuxCase::Center => format!("center: alpha={} B={}", aux.alpha, aux.shift_b),
                AuxCase::Edge => format!("edge: C={}", aux.cap_c),
            };
            let _ = writeln!(out, "{name}: loop {l} {case} from length {}", aux.min_n);
        }
    }
    match structural_simplicity(fam, probe, budget) {
        Ok(Simplicity::Simple { epsilon, cap, min_degree }) => {
            let _ = writeln!(
                out,
                "{name}: structurally simple on degrees {min_degree}..={probe} with epsilon={epsilon} C={cap}"
            );
        }
        Ok(Simplicity::NotSimple { degree, set, epsilon, cap }) => {
            let _ = writeln!(
                out,
                "{name}: not structurally simple: degree {degree} has {set}, neither {epsilon}-center-good nor {cap}-edge-good"
            );
        }
        Err(LangError::Ambiguous { length, first, second }) => {
            let _ = writeln!(out, "{name}: not thin: {first} and {second} both have length {length}");
        }
        Err(e) => {
            let _ = writeln!(out, "{name}: analysis stopped: {e}");
        }
    }
    out
}

fn cmd_lang(a: AnalyzeArgs) -> CmdResult {
    let file = ProblemFile::load(&a.problem).map_err(invalid)?;
    let budget = budget_for(&a.budget)?;
    for (name, color) in [("white", Color::White), ("black", Color::Black)] {
        match file.family(color) {
            Some(fam) => print!("{}", analyze_family(name, fam, a.probe, &budget)),
            None => println!("{name}: fixed constraint, not a family"),
        }
    }
    Ok(())
}

struct BenchRow {
    n: usize,
    d: usize,
    delta: usize,
    seed: u64,
    layers: usize,
    rounds: usize,
    wall_ms: f64,
    valid: bool,
}

fn bench_problem(family: Family, k: usize) -> Result<Problem, Fail> {
    let fam_set = |f: &LanguageFamily, k| f.set_at_degree(k).map_err(invalid);
    let (w, b) = match family {
        Family::Splitting => (fam_set(&families::splitting(), k)?, fam_set(&families::splitting(), k)?),
        Family::Matching => (fam_set(&families::matching(), k)?, fam_set(&families::matching(), k)?),
        Family::Sinkless => {
            let black = LanguageFamily::loops("011:1:-:-:-").map_err(invalid)?;
            (fam_set(&families::sinkless(), k)?, fam_set(&black, k)?)
        }
        Family::Quasi => {
            let delta = 5;
            (
                binlab::ConstraintSet::from_elems(k, [1]).map_err(invalid)?,
                binlab::ConstraintSet::from_elems(delta, [0, delta - 1]).map_err(invalid)?,
            )
        }
    };
    Problem::new(w, b).map_err(invalid)
}

fn bench_cell(p: &Problem, kind: SolverKind, n: usize, seed: u64) -> Result<BenchRow, Fail> {
    let tree = generate(
        TreeKind::Regular {
            white: p.d,
            black: p.delta,
            depth: None,
        },
        n,
        0,
    )
    .map_err(invalid)?;
    // seed 1 keeps generation order; later seeds shuffle the ids
    let tree = if seed > 1 {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        tree.relabeled(&perm)
    } else {
        tree
    };
    let start = Instant::now();
    let (solved, _) = run_solver(&tree, p, kind, &StructureBudget::default())?;
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    let valid = verify(&tree, p, &solved.labeling).is_ok();
    let (layers, rounds) = solved
        .decomposition
        .as_ref()
        .map_or((0, 0), |d| {
            let s = layer_stats(d);
            (s.layer_count, s.rounds_estimate)
        });
    Ok(BenchRow {
        n,
        d: p.d,
        delta: p.delta,
        seed,
        layers,
        rounds,
        wall_ms,
        valid,
    })
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    if a.sizes.is_empty() || a.sizes.windows(2).any(|w| w[0] > w[1]) {
        return Err(invalid(anyhow!("--sizes must be a non-empty ascending list")));
    }
    if a.degrees.is_empty() || a.seeds == 0 {
        return Err(invalid(anyhow!("need at least one degree and --seeds >= 1")));
    }
    let problems = a
        .degrees
        .iter()
        .map(|&k| bench_problem(a.family, k))
        .collect::<Result<Vec<_>, _>>()?;
    let cells: Vec<(usize, usize, u64)> = a
        .sizes
        .iter()
        .flat_map(|&n| (0..problems.len()).flat_map(move |i| (1..=a.seeds).map(move |s| (n, i, s))))
        .collect();
    let rows: Vec<BenchRow> = cells
        .par_iter()
        .map(|&(n, i, seed)| bench_cell(&problems[i], a.solver, n, seed))
        .collect::<Result<_, _>>()?;
    let family = match a.family {
        Family::Splitting => "splitting",
        Family::Matching => "matching",
        Family::Sinkless => "sinkless",
        Family::Quasi => "quasi",
    };
    let solver = format!("{:?}", a.solver).to_lowercase();
    let mut csv = String::from("family,solver,n,d,delta,seed,layers,rounds,wall_ms,valid\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{family},{solver},{},{},{},{},{},{},{:.3},{}",
            r.n, r.d, r.delta, r.seed, r.layers, r.rounds, r.wall_ms, r.valid
        );
    }
    write_out(Some(&a.csv), &csv)?;
    if let Some(r) = rows.iter().find(|r| !r.valid) {
        return Err(internal(anyhow!("invalid labeling at n={} d={} seed={}", r.n, r.d, r.seed)));
    }
    println!("{} rows written to {}", rows.len(), a.csv.display());
    Ok(())
}
