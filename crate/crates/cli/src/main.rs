use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use signed_inertia::decomposition::verify_equivalence;
use signed_inertia::{
    check_lemmas, oracle_inertia, witness_for_pair, Evaluator, InertiaPair, OracleConfig, SignedGraph,
};

/// Minimal inertia pairs of signed multigraphs.
#[derive(Parser, Debug)]
#[command(name = "sginertia", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Minimal inertia pairs of a graph.
    Inertia {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Formula)]
        method: Method,
        #[command(flatten)]
        search: Search,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Full oracle report: observed pairs, sample counts and witnesses.
    Oracle {
        file: PathBuf,
        #[command(flatten)]
        search: Search,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compares the formula with the oracle; exits 1 on disagreement.
    Verify {
        file: PathBuf,
        #[command(flatten)]
        search: Search,
    },
    /// Prints a member of the matrix class whose pin is at most (p, q).
    Witness {
        file: PathBuf,
        #[arg(short)]
        p: usize,
        #[arg(short)]
        q: usize,
        #[command(flatten)]
        search: Search,
    },
    /// Prints the separation tree with per-pair provenance.
    Decompose {
        file: PathBuf,
        #[command(flatten)]
        search: Search,
        #[arg(long, value_enum, default_value_t = TreeFormat::Text)]
        format: TreeFormat,
    },
    /// Random-instance check of every congruence construction.
    CheckLemmas {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        size_max: usize,
        #[arg(long, value_enum, default_value_t = TreeFormat::Text)]
        format: TreeFormat,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct Search {
    /// Random samples per sign branch in base-case searches.
    #[arg(long, default_value_t = 100)]
    budget: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Search {
    fn config(self) -> OracleConfig {
        OracleConfig::new(self.budget, self.seed)
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Formula,
    Oracle,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Grid,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum TreeFormat {
    Text,
    Json,
}

enum Failure {
    /// Bad input or request, exit 2.
    Usage(String),
    /// A check failed, exit 1.
    Check,
}

type Outcome = Result<(), Failure>;

fn load(path: &Path) -> Result<SignedGraph, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    text.parse()
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("report serializes")
}

fn warn_incomplete(targets: &[(SignedGraph, InertiaPair)]) {
    for (g, p) in targets {
        eprintln!(
            "warning: factor search for {p} stopped at its node limit on base graph [{}]",
            g.serialize().trim().replace('\n', "; ")
        );
    }
}

fn inertia(file: &Path, method: Method, search: Search, format: Format) -> Outcome {
    let g = load(file)?;
    let cfg = search.config();
    let formula = match method {
        Method::Oracle => None,
        _ => {
            let tree = Evaluator::new(cfg.clone()).evaluate(&g).map_err(usage)?;
            warn_incomplete(&tree.incomplete_searches());
            Some(tree)
        }
    };
    let oracle = match method {
        Method::Formula => None,
        _ => Some(oracle_inertia(&g, &cfg)),
    };
    match format {
        Format::Text => {
            match (&formula, &oracle) {
                (Some(t), None) => println!("{}", t.frontier),
                (None, Some(r)) => println!("{}", r.frontier()),
                (Some(t), Some(r)) => {
                    println!("formula: {}", t.frontier);
                    println!("oracle: {}", r.frontier());
                    println!("cong: {}", t.frontier.cong(&r.pairs));
                }
                (None, None) => unreachable!("a method always runs"),
            }
        }
        Format::Json => {
            let mut v = json!({ "method": format!("{method:?}").to_lowercase() });
            let obj = v.as_object_mut().expect("object");
            if let Some(t) = &formula {
                obj.insert("frontier".into(), json!(t.frontier));
            }
            if let Some(r) = &oracle {
                obj.insert("oracle".into(), json!(r.summary()));
            }
            if let (Some(t), Some(r)) = (&formula, &oracle) {
                obj.insert("cong".into(), json!(t.frontier.cong(&r.pairs)));
            }
            println!("{}", pretty(&v));
        }
        Format::Grid => {
            if let Some(t) = &formula {
                if oracle.is_some() {
                    println!("formula:");
                }
                print!("{}", t.frontier.grid());
            }
            if let Some(r) = &oracle {
                if formula.is_some() {
                    println!("oracle:");
                }
                print!("{}", r.pairs.grid());
            }
        }
    }
    Ok(())
}

fn oracle(file: &Path, search: Search, format: Format) -> Outcome {
    let g = load(file)?;
    let r = oracle_inertia(&g, &search.config());
    match format {
        Format::Text => {
            println!("pairs: {}", r.pairs);
            println!("frontier: {}", r.frontier());
            println!("samples: {}", r.samples);
            println!("branches: {}/{}", r.branches_run, r.branches_total);
            println!("factor searches: {}", r.factor_searches);
            for p in r.frontier().iter() {
                let (a, src) = &r.witnesses[p];
                println!("witness {p} ({}):", format!("{src:?}").to_lowercase());
                print!("{a}");
            }
        }
        Format::Json => {
            let witnesses: Vec<_> = r
                .frontier()
                .iter()
                .map(|p| {
                    let (a, src) = &r.witnesses[p];
                    json!({"pair": p, "source": src, "matrix": a.to_string()})
                })
                .collect();
            let mut v = json!(r.summary());
            v.as_object_mut().expect("object").insert("witnesses".into(), json!(witnesses));
            println!("{}", pretty(&v));
        }
        Format::Grid => print!("{}", r.pairs.grid()),
    }
    for p in &r.incomplete {
        eprintln!("warning: factor search for {p} stopped at its node limit");
    }
    Ok(())
}

fn verify(file: &Path, search: Search) -> Outcome {
    let g = load(file)?;
    let report = verify_equivalence(&g, &search.config()).map_err(usage)?;
    println!("{}", pretty(&json!(report)));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn witness(file: &Path, p: usize, q: usize, search: Search) -> Outcome {
    let g = load(file)?;
    let tree = Evaluator::new(search.config()).evaluate(&g).map_err(usage)?;
    let target = InertiaPair::new(p, q);
    let w = witness_for_pair(&g, target, &tree).map_err(usage)?;
    print!("{}", w.matrix);
    eprintln!(
        "pin {} for target {target} via {}",
        w.pin,
        tree.provenance.get(&target).map(ToString::to_string).unwrap_or_default()
    );
    Ok(())
}

fn decompose(file: &Path, search: Search, format: TreeFormat) -> Outcome {
    let g = load(file)?;
    let tree = Evaluator::new(search.config()).evaluate(&g).map_err(usage)?;
    match format {
        TreeFormat::Text => print!("{}", tree.render()),
        TreeFormat::Json => println!("{}", pretty(&tree.to_json())),
    }
    warn_incomplete(&tree.incomplete_searches());
    Ok(())
}

fn lemmas(trials: usize, seed: u64, size_max: usize, format: TreeFormat) -> Outcome {
    let report = check_lemmas(trials, seed, size_max);
    match format {
        TreeFormat::Text => print!("{report}"),
        TreeFormat::Json => println!("{}", pretty(&json!(report))),
    }
    if report.ok() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Inertia {
            file,
            method,
            search,
            format,
        } => inertia(&file, method, search, format),
        Command::Oracle { file, search, format } => oracle(&file, search, format),
        Command::Verify { file, search } => verify(&file, search),
        Command::Witness { file, p, q, search } => witness(&file, p, q, search),
        Command::Decompose { file, search, format } => decompose(&file, search, format),
        Command::CheckLemmas {
            trials,
            seed,
            size_max,
            format,
        } => lemmas(trials, seed, size_max, format),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
