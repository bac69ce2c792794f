//! `bclab`: generate instances, build and check proofs, run searches and
//! experiment presets.
//!
//! Exit codes: 0 success, 1 proof rejected, 2 budget exhausted, 3 malformed
//! input. Failures also print one JSON object on standard error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use bclab_core::experiments::{run_preset, PresetParams, PRESETS};
use bclab_core::io;
use bclab_core::lp::LpResult;
use bclab_core::proof::{close_leaf, run_branch_and_cut, verify_proof, Mode, ProofTree, Strategy};
use bclab_core::rational::{self, Rational};
use bclab_core::search::{min_bb_tree_size, min_proof_bracket, SearchOutcome, SearchSpace};
use bclab_core::{cg_cut_along, make_split, solve_lp, transforms, zoo, Error, Instance};

const BUDGET_ENV: &str = "BCLAB_NODE_BUDGET";

#[derive(Parser)]
#[command(name = "bclab", version, about = "Exact branch-and-cut proof laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write an instance from one of the built-in families.
    Gen {
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        h: Option<i64>,
        /// Seed of the random family.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Continuous variables of the random family.
        #[arg(long, default_value_t = 0)]
        n_cont: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the LP relaxation of an instance.
    Lp {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build a proof of the instance's goal.
    Prove {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ProveStrategy::Branch)]
        strategy: ProveStrategy,
        #[arg(long, value_enum, default_value_t = ModeArg::Restricted)]
        mode: ModeArg,
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a proof file.
    Verify {
        proof: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rewrite a proof into another one.
    Transform {
        proof: PathBuf,
        #[arg(long, value_enum)]
        kind: TransformKind,
        /// New integer coordinates for `embed`.
        #[arg(long, default_value_t = 0)]
        extra_int: usize,
        /// New continuous coordinates for `embed`.
        #[arg(long, default_value_t = 0)]
        extra_cont: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimum branch-and-bound tree over a finite split family.
    Search {
        instance: PathBuf,
        /// Sparsity limit of the splits.
        #[arg(long)]
        s: usize,
        /// Coefficient bound of the splits.
        #[arg(long = "B", default_value_t = 1)]
        b: u64,
        #[arg(long, requires = "pi0_max", allow_hyphen_values = true)]
        pi0_min: Option<i64>,
        #[arg(long, requires = "pi0_min", allow_hyphen_values = true)]
        pi0_max: Option<i64>,
        /// Stop once every tree below this size is ruled out.
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<usize>,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long, value_enum, default_value_t = ModeArg::Unrestricted)]
        mode: ModeArg,
        #[arg(long)]
        no_symmetry: bool,
        /// Write the witness proof here.
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact counts from the Jeroslow analysis.
    Count {
        #[command(subcommand)]
        what: CountCommand,
    },
    /// Run an experiment preset and emit CSV.
    Experiment {
        /// Preset name; `list` prints them.
        preset: String,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        s: Option<usize>,
        #[arg(long = "B")]
        b: Option<u64>,
        #[arg(long)]
        h: Option<i64>,
        #[arg(long, env = BUDGET_ENV)]
        budget: Option<usize>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CountCommand {
    /// Optimal LP vertices of the Jeroslow polytope strictly inside a split.
    VerticesInSplit {
        #[arg(long)]
        n: usize,
        /// Comma-separated split vector.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        pi: Vec<i64>,
        #[arg(long, allow_hyphen_values = true)]
        pi0: i64,
    },
    /// All optimal LP vertices of the Jeroslow polytope.
    OptimalVertices {
        #[arg(long)]
        n: usize,
    },
    /// The bound p(n, t) on vertices inside a t-sparse split.
    PBound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
    },
    /// 0/1 solutions of <w, x> = W.
    Sperner {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w: Vec<i64>,
        #[arg(long = "W", allow_hyphen_values = true)]
        target: i64,
    },
    /// Nodes of a proof holding an integer point, per generation.
    Generations {
        proof: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Jeroslow,
    JeroslowEq,
    Partial,
    Triangle,
    Cks,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProveStrategy {
    /// Variable branching on the first fractional coordinate.
    Branch,
    /// Rounds of CG cuts along the objective.
    Cg,
    /// One CG cut along the objective, then a leaf.
    CgSingle,
    /// The sparse tree for the partial-objective Jeroslow instance.
    Theorem4,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Restricted,
    Unrestricted,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Restricted => Mode::Restricted,
            ModeArg::Unrestricted => Mode::Unrestricted,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TransformKind {
    /// Cutting-plane or branch-and-cut proof to pure branch-and-bound.
    CpToBb,
    /// Same, transplanting a branch-and-bound proof of each cut.
    BcToBb,
    /// Scale every cut to primitive integer form.
    Normalize,
    /// Add an objective variable `z <= <c, x>`.
    LiftObjective,
    /// Append unused coordinates.
    Embed,
}

/// What a command failed with, and the exit code it maps to.
enum Failure {
    Rejected(Value),
    Budget(String),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BudgetExceeded(_) | Error::NodeBudget { .. } => Failure::Budget(e.to_string()),
            Error::ProofRejected { node, message } => {
                Failure::Rejected(json!({ "node": node, "message": message }))
            }
            other => Failure::Malformed(other.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn emit(out: Option<&Path>, text: &str) -> CmdResult {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Malformed(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> CmdResult {
    emit(out, &format!("{}\n", serde_json::to_string_pretty(v).expect("json values serialize")))
}

fn read_instance(path: &Path) -> Result<Instance, Failure> {
    Ok(io::read_instance(path)?)
}

fn read_proof(path: &Path) -> Result<ProofTree, Failure> {
    Ok(io::read_proof(path)?)
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(rational::format).collect()
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, Failure> {
    v.ok_or_else(|| Failure::Malformed(format!("{family} needs --{flag}")))
}

fn gen(family: Family, n: Option<usize>, h: Option<i64>, seed: u64, n_cont: usize, out: Option<&Path>) -> CmdResult {
    let inst = match family {
        Family::Jeroslow => zoo::jeroslow_inequality(need(n, "n", "jeroslow")?)?,
        Family::JeroslowEq => zoo::jeroslow_equality(need(n, "n", "jeroslow-eq")?)?,
        Family::Partial => zoo::jeroslow_partial_objective(need(n, "n", "partial")?)?,
        Family::Triangle => zoo::triangle_t(need(h, "h", "triangle")?)?,
        Family::Cks => zoo::cks_tetrahedron(need(h, "h", "cks")?)?,
        Family::Random => {
            let n = need(n, "n", "random")?;
            if n == 0 {
                return Err(Failure::Malformed("random needs --n >= 1".into()));
            }
            zoo::random_bounded(seed, n, n_cont, 2, 3)
        }
    };
    emit(out, &io::instance_to_json(&inst))
}

fn lp(path: &Path, out: Option<&Path>) -> CmdResult {
    let inst = read_instance(path)?;
    let v = match solve_lp(&inst.polyhedron, &inst.objective)? {
        LpResult::Optimal(o) => json!({
            "status": "optimal",
            "value": rational::format(&o.value),
            "point": strs(&o.point),
            "duals": strs(&o.duals),
        }),
        LpResult::Infeasible(ray) => json!({
            "status": "infeasible",
            "farkas": strs(&ray.multipliers),
        }),
        LpResult::Unbounded => json!({ "status": "unbounded" }),
    };
    emit_json(out, &v)
}

fn cg_single(inst: &Instance) -> Result<ProofTree, Failure> {
    let cut = cg_cut_along(&inst.polyhedron, &inst.objective)?
        .ok_or_else(|| Failure::Malformed("the objective gives no CG cut (LP not optimal)".into()))?;
    let mut tree = ProofTree::new(inst.clone(), Mode::Restricted);
    let child = tree.cut(tree.root, cut);
    close_leaf(&mut tree, child)?;
    Ok(tree)
}

fn prove(path: &Path, strategy: ProveStrategy, mode: ModeArg, budget: Option<usize>, out: Option<&Path>) -> CmdResult {
    let inst = read_instance(path)?;
    let with = |mut s: Strategy| {
        s.mode = mode.into();
        if let Some(b) = budget {
            s.budget = b;
        }
        s
    };
    let tree = match strategy {
        ProveStrategy::Branch => run_branch_and_cut(&inst, &with(Strategy::variable_branching()))?,
        ProveStrategy::Cg => run_branch_and_cut(&inst, &with(Strategy::cg_objective()))?,
        ProveStrategy::CgSingle => cg_single(&inst)?,
        ProveStrategy::Theorem4 => {
            let n = inst.n_int();
            if n % 2 == 0 || n < 3 || zoo::jeroslow_partial_objective(n)? != inst {
                return Err(Failure::Malformed(
                    "theorem4 applies to the partial-objective Jeroslow instance only".into(),
                ));
            }
            bclab_core::proof::build_theorem4_tree(n)?
        }
    };
    let report = verify_proof(&tree);
    if !report.accepted() {
        let f = report.first_failure().expect("rejected reports carry a failure");
        return Err(Failure::Rejected(json!({ "node": f.node, "code": f.code, "message": f.message })));
    }
    emit(out, &io::proof_to_json(&tree))
}

fn verify(path: &Path, out: Option<&Path>) -> CmdResult {
    let tree = read_proof(path)?;
    let report = verify_proof(&tree);
    let stats = tree.stats();
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|f| json!({ "node": f.node, "code": f.code, "message": f.message }))
        .collect();
    let v = json!({
        "accepted": report.accepted(),
        "checked_nodes": report.checked_nodes,
        "size": stats.size,
        "depth": stats.depth,
        "leaves": stats.leaf_count,
        "max_sparsity": stats.max_sparsity,
        "cuts": stats.cut_count,
        "branches": stats.branch_count,
        "failures": failures,
    });
    emit_json(out, &v)?;
    match report.first_failure() {
        None => Ok(()),
        Some(f) => Err(Failure::Rejected(json!({ "node": f.node, "code": f.code, "message": f.message }))),
    }
}

fn transform(path: &Path, kind: TransformKind, extra_int: usize, extra_cont: usize, out: Option<&Path>) -> CmdResult {
    let tree = read_proof(path)?;
    let result = match kind {
        TransformKind::CpToBb => transforms::cp_proof_to_bb(&tree)?,
        TransformKind::BcToBb => transforms::bc_proof_to_bb(&tree, transforms::certificate_oracle)?,
        TransformKind::Normalize => transforms::normalize_cuts(&tree),
        TransformKind::LiftObjective => transforms::lift_objective_variable(&tree)?,
        TransformKind::Embed => transforms::lift_embedded(&tree, extra_int, extra_cont)?,
    };
    emit(out, &io::proof_to_json(&result))
}

#[allow(clippy::too_many_arguments)]
fn search(
    path: &Path,
    s: usize,
    b: u64,
    pi0: Option<(i64, i64)>,
    cap: Option<usize>,
    budget: Option<usize>,
    depth: Option<usize>,
    mode: ModeArg,
    symmetry: bool,
    witness: Option<&Path>,
    out: Option<&Path>,
) -> CmdResult {
    let inst = read_instance(path)?;
    let mut space = SearchSpace::new(s, b).with_mode(mode.into());
    if let Some((lo, hi)) = pi0 {
        space = space.with_rhs_range(lo, hi);
    }
    if let Some(n) = budget {
        space = space.with_budget(n);
    }
    space.depth_budget = depth;
    space.symmetry = symmetry;
    let outcome = match cap {
        Some(c) => min_proof_bracket(&inst, &space, c)?,
        None => min_bb_tree_size(&inst, &space)?,
    };
    let (status, evaluated) = match &outcome {
        SearchOutcome::Exact(m) => ("exact", m.evaluated),
        SearchOutcome::Bracket(b) => ("bracket", b.evaluated),
    };
    let v = json!({
        "status": status,
        "s": s,
        "B": b,
        "lower": outcome.lower(),
        "upper": outcome.upper(),
        "leaves": outcome.witness().map(|w| w.leaves().len()),
        "evaluated": evaluated,
    });
    emit_json(out, &v)?;
    if let (Some(p), Some(w)) = (witness, outcome.witness()) {
        emit(Some(p), &io::proof_to_json(w))?;
    }
    match (&outcome, cap) {
        // A bracket is the requested answer under an explicit cap.
        (SearchOutcome::Bracket(b), None) => Err(Failure::Budget(format!(
            "search budget exhausted; minimum lies in [{}, {}]",
            b.lower,
            b.upper.map_or("?".to_string(), |u| u.to_string())
        ))),
        _ => Ok(()),
    }
}

fn count(what: CountCommand) -> CmdResult {
    let v = match what {
        CountCommand::VerticesInSplit { n, pi, pi0 } => {
            let d = make_split(&rational::ints(&pi), &rational::int(pi0), n, 0)?;
            json!({ "n": n, "count": zoo::count_vertices_in_split(n, &d)? })
        }
        CountCommand::OptimalVertices { n } => {
            json!({ "n": n, "count": zoo::optimal_vertex_count(n).to_string() })
        }
        CountCommand::PBound { n, t } => {
            json!({ "n": n, "t": t, "p_bound": zoo::p_bound(n, t)?.to_string() })
        }
        CountCommand::Sperner { w, target } => {
            json!({ "count": zoo::sperner_count(&w, target)? })
        }
        CountCommand::Generations { proof } => {
            let tree = read_proof(&proof)?;
            let class = zoo::classify_splits(&tree)?;
            let max = class.nodes.iter().filter_map(|c| c.generation()).max().unwrap_or(0);
            let counts: Vec<usize> = (0..=max).map(|m| zoo::count_generation_nodes(&class, m)).collect();
            json!({ "generation_nodes": counts })
        }
    };
    emit_json(None, &v)
}

fn experiment(preset: &str, params: PresetParams, out: Option<&Path>) -> CmdResult {
    if preset == "list" {
        let text: String = PRESETS.iter().map(|(n, d)| format!("{n}\t{d}\n")).collect();
        return emit(out, &text);
    }
    let table = run_preset(preset, &params)?;
    emit(out, &table.to_csv()?)
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Gen { family, n, h, seed, n_cont, out } => gen(family, n, h, seed, n_cont, out.as_deref()),
        Command::Lp { instance, out } => lp(&instance, out.as_deref()),
        Command::Prove { instance, strategy, mode, budget, out } => {
            prove(&instance, strategy, mode, budget, out.as_deref())
        }
        Command::Verify { proof, out } => verify(&proof, out.as_deref()),
        Command::Transform { proof, kind, extra_int, extra_cont, out } => {
            transform(&proof, kind, extra_int, extra_cont, out.as_deref())
        }
        Command::Search {
            instance,
            s,
            b,
            pi0_min,
            pi0_max,
            cap,
            budget,
            depth,
            mode,
            no_symmetry,
            witness,
            out,
        } => search(
            &instance,
            s,
            b,
            pi0_min.zip(pi0_max),
            cap,
            budget,
            depth,
            mode,
            !no_symmetry,
            witness.as_deref(),
            out.as_deref(),
        ),
        Command::Count { what } => count(what),
        Command::Experiment { preset, n, s, b, h, budget, count, seed, out } => experiment(
            &preset,
            PresetParams {
                n,
                s,
                coefficient_bound: b,
                h,
                node_budget: budget,
                count,
                seed,
            },
            out.as_deref(),
        ),
    }
}

fn diagnostic(kind: &str, detail: Value) {
    eprintln!("{}", json!({ "error": kind, "detail": detail }));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Rejected(v)) => {
            diagnostic("rejected", v);
            ExitCode::from(1)
        }
        Err(Failure::Budget(m)) => {
            diagnostic("budget", m.into());
            ExitCode::from(2)
        }
        Err(Failure::Malformed(m)) => {
            diagnostic("malformed", m.into());
            ExitCode::from(3)
        }
    }
}
