//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::time::{Duration, Instant};

use common::{charpoly_pin, corpus, fixture, intro_matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use signed_inertia::matrix::{default_pool, frac, membership, pin, sample, subdirect_sum, SignBranch};
use signed_inertia::transforms::split_1sep;
use signed_inertia::{
    check_lemmas, oracle_inertia, witness_for_pair, Evaluator, InertiaPair, OracleConfig, PairSet, Provenance,
    SignedGraph, SymMat,
};

const PIN_TRIALS: usize = 1000;
const PIN_SIZE_MAX: usize = 6;
const PIN_ENTRY_BOUND: i64 = 9;
const PIN_TIME_LIMIT: Duration = Duration::from_secs(10);

const LEMMA_TRIALS: usize = 200;
const LEMMA_SIZE_MAX: usize = 6;
const LEMMA_TIME_LIMIT: Duration = Duration::from_secs(30);

const SPLIT_GRAPHS: usize = 20;
const SPLIT_SAMPLES: usize = 200;

const CORPUS_MIN: usize = 40;
const CORPUS_BUDGET: usize = 200;
const CORPUS_SEED: u64 = 0;
const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(300);

const SOUNDNESS_SEEDS: u64 = 10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn random_matrix(rng: &mut ChaCha8Rng) -> SymMat {
    let n = rng.gen_range(1..=PIN_SIZE_MAX);
    let mut a = SymMat::zeros(n);
    for i in 0..n {
        for j in i..n {
            let num = rng.gen_range(-PIN_ENTRY_BOUND..=PIN_ENTRY_BOUND);
            let den = rng.gen_range(1..=PIN_ENTRY_BOUND);
            a.set_sym(i, j, frac(num, den));
        }
    }
    a
}

fn pin_correctness() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut mismatches = 0;
    for _ in 0..PIN_TRIALS {
        let a = random_matrix(&mut rng);
        if pin(&a) != charpoly_pin(&a) {
            mismatches += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches == 0 && elapsed < PIN_TIME_LIMIT,
        format!("{PIN_TRIALS} matrices, {mismatches} mismatches, {elapsed:.2?}"),
    )
}

fn lemma_suite() -> Outcome {
    let start = Instant::now();
    let report = check_lemmas(LEMMA_TRIALS, 0, LEMMA_SIZE_MAX);
    let elapsed = start.elapsed();
    let summary: Vec<String> = report.checks.iter().map(|c| format!("{} {}/{}", c.name, c.passed, c.trials)).collect();
    if !report.ok() {
        eprint!("{report}");
    }
    outcome(
        report.ok() && elapsed < LEMMA_TIME_LIMIT,
        format!("{}, {elapsed:.2?}", summary.join(", ")),
    )
}

fn split_round_trip() -> Outcome {
    let graphs: Vec<(String, SignedGraph)> = corpus().into_iter().take(SPLIT_GRAPHS).collect();
    let per_graph = SPLIT_SAMPLES / graphs.len().max(1);
    let mut ok = 0;
    let mut failures = Vec::new();
    for (gi, (name, g)) in graphs.iter().enumerate() {
        let sep = g.first_vertex_reducing_separation().expect("corpus graphs have a cut vertex");
        let order: Vec<usize> = sep.merged_order().iter().map(|w| w - 1).collect();
        let (g1, g2) = (sep.graph1(g), sep.graph2(g));
        for s in 0..per_graph {
            let a = sample(g, &default_pool(), &SignBranch::new(), (gi * 1000 + s) as u64).expect("sample");
            match split_1sep(&a, g, &sep) {
                Ok(split) => {
                    let glued = subdirect_sum(&split.b, &split.c, 1).expect("overlap 1");
                    let good = glued == a.permuted(&order)
                        && membership(&split.b, &g1).unwrap_or(false)
                        && membership(&split.c, &g2).unwrap_or(false);
                    if good {
                        ok += 1;
                    } else {
                        failures.push(format!("{name} sample {s}"));
                    }
                }
                Err(e) => failures.push(format!("{name} sample {s}: {e}")),
            }
        }
    }
    let total = per_graph * graphs.len();
    outcome(
        failures.is_empty() && graphs.len() == SPLIT_GRAPHS && total == SPLIT_SAMPLES,
        format!("{ok}/{total} samples over {} graphs {}", graphs.len(), failures.join("; ")),
    )
}

/// `x` lies in no set whose minimal frontier is `term`: nothing in the
/// frontier is below it.
fn excluded(term: &PairSet, x: InertiaPair) -> bool {
    term.dominated_member(&x).is_none()
}

fn check_fixture(
    name: &str,
    designated: Provenance,
    member: InertiaPair,
    absent: &[(usize, usize)],
    cfg: &OracleConfig,
) -> std::result::Result<String, String> {
    let g = fixture(name);
    let sep = g
        .find_1_separations()
        .into_iter()
        .find(|s| s.cut == 2 && s.is_vertex_reducing())
        .ok_or("no separation at vertex 2")?;
    let tree = Evaluator::new(cfg.clone()).evaluate_with(&g, &sep).map_err(|e| e.to_string())?;
    let term = |t| tree.term(t).expect("one-separation node").clone();
    if !term(designated).contains(&member) {
        return Err(format!("{name}: {member} not in {designated} ({})", term(designated)));
    }
    for t in Provenance::TERMS.into_iter().filter(|&t| t != designated) {
        for &(p, q) in absent {
            let x = InertiaPair::new(p, q);
            if !excluded(&term(t), x) {
                return Err(format!("{name}: {x} not excluded from {t} ({})", term(t)));
            }
        }
    }
    // dropping the designated term changes the frontier
    let others = Provenance::TERMS
        .into_iter()
        .filter(|&t| t != designated)
        .fold(PairSet::new(), |acc, t| acc.union(&term(t)));
    let reduced = others.truncate_n(g.vertex_count()).minimal();
    if reduced == tree.frontier {
        return Err(format!("{name}: frontier unchanged without {designated}"));
    }
    Ok(format!("{name} frontier {}", tree.frontier))
}

fn fixtures() -> Outcome {
    let cfg = OracleConfig::new(CORPUS_BUDGET, CORPUS_SEED);
    let results = [
        check_fixture(
            "path2_odd",
            Provenance::Term1,
            InertiaPair::new(1, 1),
            &[(0, 0), (1, 0), (0, 1), (1, 1)],
            &cfg,
        ),
        check_fixture("isolated3", Provenance::Term2, InertiaPair::ZERO, &[(0, 0)], &cfg),
        check_fixture(
            "path2_odd_loops",
            Provenance::Term3,
            InertiaPair::new(2, 0),
            &[(0, 0), (1, 0), (2, 0)],
            &cfg,
        ),
    ];
    let pass = results.iter().all(|r| r.is_ok());
    let detail: Vec<String> = results.into_iter().map(|r| r.unwrap_or_else(|e| e)).collect();
    outcome(pass, detail.join("; "))
}

struct CorpusRun {
    cong: usize,
    total: usize,
    elapsed: Duration,
    failures: Vec<String>,
    unsound: Vec<String>,
}

fn run_corpus(graphs: &[(String, SignedGraph)], seed: u64) -> CorpusRun {
    let start = Instant::now();
    let ev = Evaluator::new(OracleConfig::new(CORPUS_BUDGET, seed));
    let mut cong = 0;
    let mut failures = Vec::new();
    let mut unsound = Vec::new();
    for (name, g) in graphs {
        match signed_inertia::decomposition::verify_with(&ev, g) {
            Ok(r) => {
                if r.cong {
                    cong += 1;
                } else {
                    failures.push(format!("{name}: formula {} oracle {}", r.frontier, r.oracle.frontier));
                }
                for v in r.violations.iter().filter(|v| v.kind == "soundness" || v.kind == "witness") {
                    unsound.push(format!("{name} {} {}", v.kind, v.pair));
                }
            }
            Err(e) => {
                failures.push(format!("{name}: {e}"));
                unsound.push(format!("{name}: {e}"));
            }
        }
    }
    CorpusRun {
        cong,
        total: graphs.len(),
        elapsed: start.elapsed(),
        failures,
        unsound,
    }
}

fn equivalence(run: &CorpusRun) -> Outcome {
    outcome(
        run.cong == run.total && run.total >= CORPUS_MIN && run.elapsed < CORPUS_TIME_LIMIT,
        format!(
            "{}/{} graphs agree at budget {CORPUS_BUDGET} seed {CORPUS_SEED}, {:.2?} {}",
            run.cong,
            run.total,
            run.elapsed,
            run.failures.join("; ")
        ),
    )
}

fn soundness(graphs: &[(String, SignedGraph)], first: &CorpusRun) -> Outcome {
    let mut problems: Vec<String> = first.unsound.iter().map(|s| format!("seed {CORPUS_SEED} {s}")).collect();
    for seed in (0..SOUNDNESS_SEEDS).filter(|&s| s != CORPUS_SEED) {
        let run = run_corpus(graphs, seed);
        problems.extend(run.unsound.into_iter().map(|s| format!("seed {seed} {s}")));
    }
    outcome(
        problems.is_empty(),
        format!(
            "{} graphs x {SOUNDNESS_SEEDS} seeds, {} problems {}",
            graphs.len(),
            problems.len(),
            problems.join("; ")
        ),
    )
}

fn northeast() -> Outcome {
    let g = fixture("single_vertex");
    let cfg = OracleConfig::new(CORPUS_BUDGET, CORPUS_SEED);
    let formula = Evaluator::new(cfg.clone()).evaluate(&g).expect("formula").frontier.clone();
    let oracle = oracle_inertia(&g, &cfg).pairs;
    let zero = PairSet::from_pairs(&[(0, 0)]);
    let absent = |s: &PairSet| !s.contains(&InertiaPair::new(1, 0)) && !s.contains(&InertiaPair::new(0, 1));
    outcome(
        formula == zero && oracle == zero && absent(&formula) && absent(&oracle),
        format!("formula {formula}, oracle {oracle}"),
    )
}

fn intro_example() -> Outcome {
    let g = fixture("figure1");
    let a = intro_matrix();
    let member = membership(&a, &g).unwrap_or(false);
    let report = oracle_inertia(&g, &OracleConfig::new(CORPUS_BUDGET, CORPUS_SEED));
    let frontier = report.frontier();
    let target = InertiaPair::new(1, 2);
    let dominated = frontier.dominated_member(&target).is_some() && frontier.iter().all(|x| x.leq(&target));
    let (p, c) = (pin(&a), charpoly_pin(&a));
    let tree = Evaluator::new(OracleConfig::new(CORPUS_BUDGET, CORPUS_SEED)).evaluate(&g).expect("formula");
    let witness = witness_for_pair(&g, target, &tree).is_ok();
    outcome(
        member && dominated && p == target && c == target && witness,
        format!("membership {member}, oracle frontier {frontier}, pin {p}, charpoly {c}"),
    )
}

fn main() {
    let start = Instant::now();
    let graphs = corpus();
    let mut results: Vec<(&str, Outcome)> = vec![
        ("1 pin correctness", pin_correctness()),
        ("2 lemma identities", lemma_suite()),
        ("3 split round trip", split_round_trip()),
        ("4 term fixtures", fixtures()),
    ];
    let first = run_corpus(&graphs, CORPUS_SEED);
    results.push(("5 formula-oracle equivalence", equivalence(&first)));
    results.push(("6 soundness", soundness(&graphs, &first)));
    results.push(("7 northeast failure", northeast()));
    results.push(("8 intro example", intro_example()));

    let mut failed = 0;
    for (name, o) in &results {
        let status = if o.pass { "PASS" } else { "FAIL" };
        if !o.pass {
            failed += 1;
        }
        println!("criterion {name}: {status} ({})", o.detail.trim_end());
    }
    println!(
        "acceptance: {}/{} criteria passed in {:.2?}",
        results.len() - failed,
        results.len(),
        start.elapsed()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
