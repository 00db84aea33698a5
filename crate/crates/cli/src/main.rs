use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use copytree::embedding::{
    build_construction1_with, build_construction2, build_demand_robust, verify_embedding, Construction1Options,
    CopyTreeEmbedding,
};
use copytree::graph::RootedTree;
use copytree::io::{load_graph, load_scenarios, load_stream, LoadedGraph, StreamEvent};
use copytree::online::{online_gsf_driver, online_gst_driver, partial_gst_general, GreedyTreeSolver};
use copytree::oracle::{
    opt_group_steiner_forest, opt_group_steiner_tree, opt_robust, opt_two_level_partial, OracleBudget,
};
use copytree::robust::{
    build_lp_gsf, build_lp_gst, map_robust_instance, solve_robust_general, solve_robust_tree, ProblemKind,
    RobustInstance, RoundingOptions,
};
use copytree::{gen, Error};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "copytree", version, about = "Copy tree embeddings and group Steiner solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Add wall-clock runtime to the report (makes it run-dependent).
    #[arg(long, global = true)]
    timings: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructionArg {
    MergedPartial,
    FrtSupport,
}

#[derive(Args, Debug)]
struct EmbedArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "merged-partial")]
    construction: ConstructionArg,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Padding parameter, or `auto` to calibrate.
    #[arg(long, default_value = "auto")]
    alpha: String,
    #[arg(long)]
    tau_override: Option<usize>,
    /// Sampled trees for frt-support (default ceil(n log2 n)).
    #[arg(long)]
    trees: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RobustArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    scenarios: PathBuf,
    /// Rounding copies (default 4 ceil(log^2 n) or 4 ceil(log^3 n)).
    #[arg(long)]
    copies: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    export_lp: Option<PathBuf>,
    /// Go through the demand-robust embedding even when the graph is a tree.
    #[arg(long)]
    general: bool,
    /// Compare with the exhaustive optimum.
    #[arg(long)]
    oracle: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Problem {
    Gst,
    Gsf,
    #[value(name = "2level")]
    TwoLevel,
    Robust,
}

#[derive(Subcommand)]
enum Command {
    /// Build a copy tree embedding and verify it.
    Embed {
        #[command(flatten)]
        emb: EmbedArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Include the full tree and copy map.
        #[arg(long)]
        dump: bool,
    },
    /// Verification report only.
    Verify {
        #[command(flatten)]
        emb: EmbedArgs,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
    /// Online group Steiner tree through the embedding.
    OnlineGst {
        #[command(flatten)]
        emb: EmbedArgs,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Online group Steiner forest through the embedding.
    OnlineGsf {
        #[command(flatten)]
        emb: EmbedArgs,
        #[arg(long)]
        stream: PathBuf,
        #[arg(long)]
        oracle: bool,
    },
    /// Online partial group Steiner tree by water filling.
    PartialGst {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        stream: PathBuf,
        /// Connection slack of the water filling.
        #[arg(long, default_value_t = 0.5)]
        epsilon: f64,
        /// Epsilon of the embedding's padded family.
        #[arg(long, default_value_t = 0.25)]
        family_epsilon: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Demand-robust group Steiner tree.
    RobustGst(RobustArgs),
    /// Demand-robust group Steiner forest.
    RobustGsf(RobustArgs),
    /// Exhaustive optimum of a small instance.
    Oracle {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long)]
        graph: PathBuf,
        /// Stream file (gst, gsf, 2level) or scenario file (robust).
        #[arg(long)]
        input: PathBuf,
    },
    /// Time the builders and solvers on random graphs.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [6usize, 8, 10])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn name(v: impl ValueEnum) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Infeasible(_)
        | Error::ContractViolation(_)
        | Error::GoodStart { .. }
        | Error::LpInfeasible
        | Error::LpUnbounded
        | Error::LpSolver(_) => 2,
        _ => 1,
    }
}

fn ratio(num: f64, den: f64) -> Value {
    let value = if den > 0.0 {
        json!(num / den)
    } else if num == 0.0 {
        json!(1.0)
    } else {
        Value::Null
    };
    json!({ "num": num, "den": den, "value": value })
}

fn build_embedding(g: &LoadedGraph, a: &EmbedArgs) -> copytree::Result<CopyTreeEmbedding> {
    match a.construction {
        ConstructionArg::MergedPartial => {
            let alpha = match a.alpha.as_str() {
                "auto" => None,
                s => Some(s.parse::<f64>().map_err(|_| Error::InvalidInput(format!("alpha `{s}` is not a number")))?),
            };
            let opts = Construction1Options { epsilon: a.epsilon, alpha, tau_override: a.tau_override };
            build_construction1_with(&g.graph, g.root, &opts)
        }
        ConstructionArg::FrtSupport => {
            let n = g.graph.n() as f64;
            let k = a.trees.unwrap_or(((n * n.log2()).ceil() as usize).max(1));
            build_construction2(&g.graph, g.root, k, a.seed)
        }
    }
}

fn embedding_summary(e: &CopyTreeEmbedding) -> Value {
    json!({
        "construction": e.construction(),
        "tree_nodes": e.tree().n(),
        "chi": e.copy_number(),
        "constituents": e.constituent_count(),
        "alpha": e.alpha(),
        "tau": e.family().map(|f| f.tau),
        "kept_decompositions": e.kept_decompositions().len(),
    })
}

fn groups_of(g: &LoadedGraph, events: &[StreamEvent]) -> copytree::Result<Vec<Vec<usize>>> {
    events
        .iter()
        .map(|ev| match ev {
            StreamEvent::Group { group, .. } => g.map_vertices(group),
            _ => Err(Error::InvalidInput("expected group events".into())),
        })
        .collect()
}

fn pairs_of(g: &LoadedGraph, events: &[StreamEvent]) -> copytree::Result<Vec<(Vec<usize>, Vec<usize>)>> {
    events
        .iter()
        .map(|ev| match ev {
            StreamEvent::Pair { pair: (a, b) } => Ok((g.map_vertices(a)?, g.map_vertices(b)?)),
            _ => Err(Error::InvalidInput("expected pair events".into())),
        })
        .collect()
}

fn steps_json(steps: &[copytree::online::StepReport], opts: Option<Vec<Option<f64>>>) -> Value {
    let rows: Vec<Value> = steps
        .iter()
        .enumerate()
        .map(|(t, s)| {
            let mut row = json!({
                "step": s.step,
                "cost": s.cost,
                "tree_cost": s.tree_cost,
                "feasible": s.feasible,
                "monotone": s.monotone,
                "edges": s.solution,
            });
            if let Some(o) = &opts {
                row["oracle"] = json!(o[t]);
                row["ratio"] = o[t].map_or(Value::Null, |opt| ratio(s.cost, opt));
            }
            row
        })
        .collect();
    Value::Array(rows)
}

fn online(emb: &EmbedArgs, stream: &Path, oracle: bool, forest: bool) -> copytree::Result<Value> {
    let g = load_graph(&emb.graph)?;
    let events = load_stream(stream)?;
    let e = build_embedding(&g, emb)?;
    let mut solver = GreedyTreeSolver::new(e.tree());
    let budget = OracleBudget::default();
    let (steps, opts) = if forest {
        let pairs = pairs_of(&g, &events)?;
        let steps = online_gsf_driver(&e, &mut solver, &pairs)?;
        let opts = oracle.then(|| {
            (1..=pairs.len()).map(|t| opt_group_steiner_forest(&g.graph, &pairs[..t], &budget).ok().map(|o| o.cost)).collect()
        });
        (steps, opts)
    } else {
        let groups = groups_of(&g, &events)?;
        let steps = online_gst_driver(&e, &mut solver, &groups)?;
        let opts = oracle.then(|| {
            (1..=groups.len())
                .map(|t| opt_group_steiner_tree(&g.graph, g.root, &groups[..t], &budget).ok().map(|o| o.cost))
                .collect()
        });
        (steps, opts)
    };
    Ok(json!({
        "graph": g.summary(),
        "embedding": embedding_summary(&e),
        "parameters": { "construction": name(emb.construction), "epsilon": emb.epsilon, "seed": emb.seed },
        "steps": steps_json(&steps, opts),
    }))
}

fn robust(a: &RobustArgs, kind: ProblemKind) -> copytree::Result<Value> {
    let g = load_graph(&a.graph)?;
    let inst = g.map_instance(&load_scenarios(&a.scenarios)?)?;
    inst.validate(g.graph.n())?;
    if inst.kind().is_some_and(|k| k != kind) {
        return Err(Error::InvalidInput("scenario demands do not match the subcommand".into()));
    }
    let opts = RoundingOptions { copies: a.copies, seed: a.seed, ..RoundingOptions::default() };
    let on_tree = !a.general && g.graph.m() + 1 == g.graph.n();
    let mut report = json!({ "graph": g.summary(), "parameters": { "copies": a.copies, "seed": a.seed } });
    let (worst, lp_tree, lifted) = if on_tree {
        let tree = RootedTree::from_graph(g.graph.clone(), g.root)?;
        let run = solve_robust_tree(&tree, &inst, &opts)?;
        let worst = run.evaluation.worst_case;
        report["mode"] = json!("tree");
        report["run"] = serde_json::to_value(&run).expect("plain data");
        (worst, tree, inst.clone())
    } else {
        let run = solve_robust_general(&g.graph, g.root, &inst, &opts)?;
        report["mode"] = json!("general");
        report["embedding"] = embedding_summary(&run.embedding.embedding);
        report["backward_cost_holds"] = json!(run.backward_cost_holds());
        let worst = run.evaluation.worst_case;
        report["run"] = serde_json::to_value(&run).expect("plain data");
        let d = build_demand_robust(&g.graph, g.root, inst.m().max(1), a.seed)?;
        let lifted = map_robust_instance(&inst, &d)?;
        (worst, d.embedding.tree().clone(), lifted)
    };
    if let Some(path) = &a.export_lp {
        let lp = match kind {
            ProblemKind::Tree => build_lp_gst(&lp_tree, &lifted)?.lp,
            ProblemKind::Forest => build_lp_gsf(&lp_tree, &lifted)?.lp,
        };
        std::fs::write(path, lp.to_lp_format())?;
        report["exported_lp"] = json!(path.display().to_string());
    }
    if a.oracle {
        match opt_robust(&g.graph, g.root, &inst, &OracleBudget::default()) {
            Ok(o) => {
                report["oracle"] = json!(o.cost);
                report["ratio"] = ratio(worst, o.cost);
            }
            Err(e) => report["oracle"] = json!(format!("unavailable: {e}")),
        }
    }
    Ok(report)
}

fn oracle(problem: Problem, graph: &Path, input: &Path) -> copytree::Result<Value> {
    let g = load_graph(graph)?;
    let budget = OracleBudget::default();
    let (cost, witness): (f64, Value) = match problem {
        Problem::Gst => {
            let groups = groups_of(&g, &load_stream(input)?)?;
            let o = opt_group_steiner_tree(&g.graph, g.root, &groups, &budget)?;
            (o.cost, json!(o.witness))
        }
        Problem::Gsf => {
            let pairs = pairs_of(&g, &load_stream(input)?)?;
            let o = opt_group_steiner_forest(&g.graph, &pairs, &budget)?;
            (o.cost, json!(o.witness))
        }
        Problem::TwoLevel => {
            let tree = RootedTree::from_graph(g.graph.clone(), g.root)?;
            let demands = load_stream(input)?
                .iter()
                .map(|ev| match ev {
                    StreamEvent::Groups { groups, f } => {
                        Ok((groups.iter().map(|gr| g.map_vertices(gr)).collect::<copytree::Result<_>>()?, *f))
                    }
                    StreamEvent::Group { group, f } => {
                        Ok((g.map_vertices(group)?.into_iter().map(|v| vec![v]).collect(), *f))
                    }
                    StreamEvent::Pair { .. } => Err(Error::InvalidInput("pair event in a two-level stream".into())),
                })
                .collect::<copytree::Result<Vec<_>>>()?;
            let o = opt_two_level_partial(&tree, &demands, &budget)?;
            (o.cost, json!(o.witness))
        }
        Problem::Robust => {
            let inst = g.map_instance(&load_scenarios(input)?)?;
            let o = opt_robust(&g.graph, g.root, &inst, &budget)?;
            (o.cost, json!(o.solution))
        }
    };
    Ok(json!({ "graph": g.summary(), "problem": name(problem), "cost": cost, "witness": witness }))
}

fn bench(sizes: &[usize], seed: u64) -> copytree::Result<Value> {
    use rand::SeedableRng;
    let mut rows = Vec::new();
    for &n in sizes {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ n as u64);
        let g = gen::connected_graph(&mut rng, n, n / 2, 8);
        let t = Instant::now();
        let e = build_construction1_with(&g, 0, &Construction1Options::default())?;
        let build_ms = t.elapsed().as_secs_f64() * 1e3;
        let t = Instant::now();
        let rep = verify_embedding(&e, 50, seed);
        let verify_ms = t.elapsed().as_secs_f64() * 1e3;
        let pool: Vec<usize> = (1..n).collect();
        let inst = RobustInstance::new(
            (0..2).map(|_| copytree::robust::Scenario::groups(2.0, gen::groups(&mut rng, &pool, 2, 3))).collect(),
        );
        let t = Instant::now();
        let run = solve_robust_general(&g, 0, &inst, &RoundingOptions { seed, ..RoundingOptions::default() })?;
        let robust_ms = t.elapsed().as_secs_f64() * 1e3;
        rows.push(json!({
            "n": n, "m": g.m(), "chi": e.copy_number(), "tree_nodes": e.tree().n(), "verify_passed": rep.passed,
            "build_ms": build_ms, "verify_ms": verify_ms, "robust_ms": robust_ms,
            "robust_cost": run.evaluation.worst_case,
        }));
    }
    Ok(json!({ "rows": rows }))
}

fn run(cli: &Cli) -> copytree::Result<Value> {
    let (name, mut body) = match &cli.command {
        Command::Embed { emb, trials, dump } => {
            let g = load_graph(&emb.graph)?;
            let e = build_embedding(&g, emb)?;
            let rep = verify_embedding(&e, *trials, emb.seed);
            let mut body = json!({
                "graph": g.summary(),
                "parameters": { "construction": name(emb.construction), "epsilon": emb.epsilon,
                                "alpha": emb.alpha, "tau_override": emb.tau_override, "seed": emb.seed },
                "embedding": embedding_summary(&e),
                "verify": rep,
            });
            if *dump {
                body["dump"] = e.to_json();
            }
            ("embed", body)
        }
        Command::Verify { emb, trials } => {
            let g = load_graph(&emb.graph)?;
            let e = build_embedding(&g, emb)?;
            let rep = verify_embedding(&e, *trials, emb.seed);
            if !rep.passed {
                return Err(Error::ContractViolation(serde_json::to_string(&rep).expect("plain data")));
            }
            ("verify", json!({ "graph": g.summary(), "verify": rep }))
        }
        Command::OnlineGst { emb, stream, oracle } => ("online-gst", online(emb, stream, *oracle, false)?),
        Command::OnlineGsf { emb, stream, oracle } => ("online-gsf", online(emb, stream, *oracle, true)?),
        Command::PartialGst { graph, stream, epsilon, family_epsilon, seed } => {
            let g = load_graph(graph)?;
            let events: Vec<(Vec<usize>, usize)> = load_stream(stream)?
                .iter()
                .map(|ev| match ev {
                    StreamEvent::Group { group, f } => Ok((g.map_vertices(group)?, *f)),
                    _ => Err(Error::InvalidInput("partial-gst expects group events".into())),
                })
                .collect::<copytree::Result<_>>()?;
            let opts = Construction1Options { epsilon: *family_epsilon, ..Construction1Options::default() };
            let e = build_construction1_with(&g.graph, g.root, &opts)?;
            let steps = partial_gst_general(&e, &events, *epsilon)?;
            ("partial-gst", json!({
                "graph": g.summary(),
                "parameters": { "epsilon": epsilon, "family_epsilon": family_epsilon, "seed": seed },
                "embedding": embedding_summary(&e),
                "steps": steps,
            }))
        }
        Command::RobustGst(a) => ("robust-gst", robust(a, ProblemKind::Tree)?),
        Command::RobustGsf(a) => ("robust-gsf", robust(a, ProblemKind::Forest)?),
        Command::Oracle { problem, graph, input } => ("oracle", oracle(*problem, graph, input)?),
        Command::Bench { sizes, seed } => ("bench", bench(sizes, *seed)?),
    };
    body["schema"] = json!(1);
    body["command"] = json!(name);
    Ok(body)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let mut report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    if cli.timings {
        report["runtime_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    let text = serde_json::to_string_pretty(&report).expect("plain data") + "\n";
    let written = match &cli.out {
        Some(p) => std::fs::write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
