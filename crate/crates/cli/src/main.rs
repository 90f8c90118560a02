//! `bbd`: command-line front end for bbd-core.
//!
//! Exit codes: 0 when every check passed, 1 when a checked property failed
//! (the report carries the certificate), 2 on usage or parse errors.

use std::fmt::Write as _;
use std::io::Read as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bbd_core::constructions::check_wang_range;
use bbd_core::cycles::{hamiltonian_cycle_search, SearchOutcome};
use bbd_core::harness::{
    analyze, verify_reference_claims, wang_search, ExperimentConfig, ExperimentReport, FactorSection, Property,
    SearchMode,
};
use bbd_core::{
    cycle_factor, enumerate_bk, even_cycle_spectrum, find_bypass, hamiltonian_cycle, random_bk_digraph, random_digraph,
    BipartiteDigraph, Condition, ConditionReport, Cycle, Dedup, GeneratorConfig, Hypothesis,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "bbd",
    version,
    about = "Balanced bipartite digraphs: degree conditions, cycle factors, Hamiltonicity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Args)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct Input {
    /// Digraph in bbd/1 format; `-` reads standard input.
    file: PathBuf,
}

#[derive(Args)]
struct Generation {
    /// Half-order: each side has `a` vertices.
    #[arg(long)]
    a: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long = "arc-prob")]
    arc_probability: Option<f64>,
    #[arg(long)]
    max_attempts: Option<u32>,
    #[arg(long)]
    repair_iterations: Option<u32>,
    /// JSON file with any of the keys a, k, seed, arc_probability,
    /// max_attempts, repair_iterations. Flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Generation {
    fn resolve(&self) -> Result<GeneratorConfig, Failure> {
        let mut g = match &self.config {
            Some(path) => {
                serde_json::from_str(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?
            }
            None => GeneratorConfig::default(),
        };
        g.a = self.a.unwrap_or(g.a);
        g.k = self.k.unwrap_or(g.k);
        g.seed = self.seed.unwrap_or(g.seed);
        g.arc_probability = self.arc_probability.unwrap_or(g.arc_probability);
        g.max_attempts = self.max_attempts.unwrap_or(g.max_attempts);
        g.repair_iterations = self.repair_iterations.unwrap_or(g.repair_iterations);
        g.validate()?;
        Ok(g)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DedupArg {
    None,
    Isomorphism,
    DegreeSequence,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Random,
    Enumerate,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one condition or hypothesis; exit 1 when it fails.
    Check {
        #[command(flatten)]
        input: Input,
        /// Condition (Bk, prop1, sum_dominating, max_dominating, ...) or hypothesis name.
        #[arg(long)]
        condition: String,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        bound: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Full report: strongness, 2-connectivity, B_k, pairs, factor, Hamiltonicity, spectrum.
    Analyze {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Cycle factor, or a Hall violator (exit 1).
    CycleFactor {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Hamiltonian cycle, or exit 1 when there is none.
    Hamiltonian {
        #[command(flatten)]
        input: Input,
        /// Node budget for branch-and-bound alone; without it the search is exact.
        #[arg(long)]
        budget: Option<u64>,
        #[command(flatten)]
        output: Output,
    },
    /// Even cycle lengths present.
    Spectrum {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: Output,
    },
    /// Bypass of a host cycle, e.g. --cycle "X0 Y0"; exit 1 when there is none.
    Bypass {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        cycle: String,
        #[command(flatten)]
        output: Output,
    },
    /// Random digraphs in bbd/1, separated by blank lines. Instance i uses seed + i.
    Gen {
        #[command(flatten)]
        generation: Generation,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Repair each sample into a strong B_k digraph.
        #[arg(long)]
        bk: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Strong B_k digraphs by pruned exhaustive search (a in {4, 5}).
    Enumerate {
        #[arg(long, default_value_t = 4)]
        a: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long, value_enum)]
        dedup: Option<DedupArg>,
        #[command(flatten)]
        output: Output,
    },
    /// Re-check every claim about the reference digraphs D(8) and D(10).
    VerifyPaper {
        #[command(flatten)]
        output: Output,
    },
    /// Check proved properties (thm1_10, lemma4_1, lemma4_2, lemma4_3, prop1, all) on random instances.
    Experiment {
        name: String,
        #[command(flatten)]
        generation: Generation,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Omit wall time so identical runs print identical bytes.
        #[arg(long)]
        stable: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Search strong B_k digraphs for a non-Hamiltonian one.
    WangSearch {
        #[command(flatten)]
        generation: Generation,
        #[arg(long, value_enum, default_value = "random")]
        mode: ModeArg,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        /// Node budget for enumerate mode.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        stable: bool,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Usage(String),
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Printed text plus whether every checked property held.
struct Done {
    text: String,
    ok: bool,
}

impl Done {
    fn new(text: String, ok: bool) -> Self {
        Done { text, ok }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
    }
}

fn load(input: &Input) -> Result<BipartiteDigraph, Failure> {
    BipartiteDigraph::parse_bbd(&read(&input.file)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", input.file.display())))
}

fn pretty<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize") + "\n"
}

fn no_dot(format: Format) -> Result<(), Failure> {
    if format == Format::Dot {
        Err(Failure::Usage("--format dot is only available for analyze and gen".into()))
    } else {
        Ok(())
    }
}

fn condition_text(r: &ConditionReport) -> String {
    let params: Vec<_> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let verdict = match (r.holds, r.vacuous) {
        (true, true) => "holds (vacuously)",
        (true, false) => "holds",
        (false, _) => "fails",
    };
    let mut out = format!("{}({}): {verdict}\n", r.condition, params.join(", "));
    if let Some(w) = &r.witness {
        let _ = writeln!(out, "witness: {}", serde_json::to_string(w).expect("witness serializes"));
    }
    out
}

fn check(d: &BipartiteDigraph, name: &str, k: Option<usize>, bound: Option<usize>, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    if let Some(h) = Hypothesis::from_name(name) {
        let r = h.evaluate(d);
        let text = match f {
            Format::Json => pretty(&r),
            _ => {
                let mut out = format!("{}: {}\n", r.hypothesis, if r.holds { "holds" } else { "fails" });
                r.parts.iter().for_each(|p| out.push_str(&condition_text(p)));
                out
            }
        };
        return Ok(Done::new(text, r.holds));
    }
    let r = Condition::from_name(name, k, bound)?.evaluate(d);
    let text = if f == Format::Json { pretty(&r) } else { condition_text(&r) };
    Ok(Done::new(text, r.holds))
}

fn cycle_lines(label: &str, cycles: &[Cycle]) -> String {
    cycles.iter().map(|c| format!("{label}: {c}\n")).collect()
}

fn run_analyze(d: &BipartiteDigraph, k: usize, f: Format) -> Result<Done, Failure> {
    let r = analyze(d, k);
    let text = match f {
        Format::Json => pretty(&r),
        Format::Dot => d.to_dot(),
        Format::Text => {
            let mut out = format!("a={} order={} arcs={}\n", r.a, r.order, r.arc_count);
            for w in &r.warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            let _ = writeln!(out, "strong: {} ({} strong components)", r.strong.holds, r.scc_count);
            if let Some(t) = &r.two_connectivity {
                let _ = writeln!(out, "2-connected: {}", t.is_two_connected());
            }
            out.push_str(&condition_text(&r.bk));
            out.push_str(&condition_text(&r.partner_degree));
            let _ = writeln!(out, "dominating pairs: {}", r.dominating_pairs.len());
            match &r.cycle_factor {
                FactorSection::Factor { cycles } => out.push_str(&cycle_lines("cycle", cycles)),
                FactorSection::Missing { violator } => {
                    let _ = writeln!(out, "no cycle factor: {}", serde_json::to_string(violator).expect("serializes"));
                }
            }
            if let Some(h) = &r.hamiltonian {
                match &h.cycle {
                    Some(c) => writeln!(out, "hamiltonian: {c}"),
                    None => writeln!(out, "hamiltonian: none"),
                }
                .expect("string write");
            }
            if let Some(s) = &r.even_cycle_spectrum {
                let _ = writeln!(out, "even cycle lengths: {s:?}");
            }
            for o in &r.omissions {
                let _ = writeln!(out, "omitted: {o}");
            }
            out
        }
    };
    Ok(Done::new(text, true))
}

fn run_cycle_factor(d: &BipartiteDigraph, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    Ok(match cycle_factor(d) {
        Ok(factor) => {
            let text = if f == Format::Json { pretty(&factor) } else { cycle_lines("cycle", &factor.cycles) };
            Done::new(text, true)
        }
        Err(violator) => {
            let text = if f == Format::Json {
                pretty(&json!({ "hall_violator": violator }))
            } else {
                format!("no cycle factor: {}\n", serde_json::to_string(&violator).expect("serializes"))
            };
            Done::new(text, false)
        }
    })
}

fn run_hamiltonian(d: &BipartiteDigraph, budget: Option<u64>, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    let (cycle, decided) = match budget {
        None => (hamiltonian_cycle(d)?, true),
        Some(b) => match hamiltonian_cycle_search(d, Some(b))? {
            SearchOutcome::Found(c) => (Some(c), true),
            SearchOutcome::NotFound => (None, true),
            SearchOutcome::BudgetExhausted => (None, false),
        },
    };
    let hamiltonian = if decided { Some(cycle.is_some()) } else { None };
    let text = match f {
        Format::Json => pretty(&json!({ "hamiltonian": hamiltonian, "cycle": cycle })),
        _ => match (&cycle, decided) {
            (Some(c), _) => format!("hamiltonian: {c}\n"),
            (None, true) => "hamiltonian: none\n".to_string(),
            (None, false) => "hamiltonian: undecided (budget exhausted)\n".to_string(),
        },
    };
    Ok(Done::new(text, hamiltonian != Some(false)))
}

fn run_spectrum(d: &BipartiteDigraph, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    let lengths: Vec<usize> = even_cycle_spectrum(d)?.into_iter().collect();
    let text = match f {
        Format::Json => pretty(&json!({ "even_cycle_spectrum": lengths })),
        _ => lengths.iter().map(|m| format!("{m}\n")).collect(),
    };
    Ok(Done::new(text, true))
}

fn run_bypass(d: &BipartiteDigraph, cycle: &str, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    let host: Cycle = cycle.parse().map_err(|e: String| Failure::Usage(format!("--cycle: {e}")))?;
    let bypass = find_bypass(d, &host)?;
    let text = match (f, &bypass) {
        (Format::Json, _) => pretty(&json!({ "host": host, "bypass": bypass })),
        (_, Some(b)) => format!("bypass: {b}\n"),
        (_, None) => "bypass: none\n".to_string(),
    };
    Ok(Done::new(text, bypass.is_some()))
}

fn run_gen(generation: &Generation, count: usize, bk: bool, f: Format) -> Result<Done, Failure> {
    let base = generation.resolve()?;
    let mut digraphs = Vec::new();
    let mut failures = 0;
    for i in 0..count {
        let config = GeneratorConfig { seed: base.seed.wrapping_add(i as u64), ..base.clone() };
        if bk {
            match random_bk_digraph(&config)? {
                Some(d) => digraphs.push(d),
                None => failures += 1,
            }
        } else {
            digraphs.push(random_digraph(&config)?);
        }
    }
    if failures > 0 {
        eprintln!("{failures} of {count} samples could not be repaired within the attempt limit");
    }
    let text = match f {
        Format::Json => pretty(&json!({
            "config": base,
            "generated": digraphs.len(),
            "failures": failures,
            "digraphs": digraphs.iter().map(BipartiteDigraph::to_bbd).collect::<Vec<_>>(),
        })),
        Format::Text => digraphs.iter().map(BipartiteDigraph::to_bbd).collect::<Vec<_>>().join("\n"),
        Format::Dot => digraphs.iter().map(BipartiteDigraph::to_dot).collect::<Vec<_>>().join("\n"),
    };
    Ok(Done::new(text, true))
}

fn run_enumerate(a: usize, k: usize, budget: u64, dedup: Option<DedupArg>, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    let dedup = match dedup {
        None => Dedup::default_for(a),
        Some(DedupArg::None) => Dedup::None,
        Some(DedupArg::Isomorphism) => Dedup::Isomorphism,
        Some(DedupArg::DegreeSequence) => Dedup::DegreeSequence,
    };
    let mut digraphs = Vec::new();
    let summary = enumerate_bk(a, k, budget, dedup, |d| {
        digraphs.push(d.to_bbd());
        std::ops::ControlFlow::Continue(())
    })?;
    let text = match f {
        Format::Json => pretty(&json!({ "summary": summary, "digraphs": digraphs })),
        _ => {
            eprintln!("{}", serde_json::to_string(&summary).expect("serializes"));
            digraphs.join("\n")
        }
    };
    Ok(Done::new(text, true))
}

fn run_verify(f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    let r = verify_reference_claims();
    let text = match f {
        Format::Json => pretty(&r),
        _ => {
            let mut out = String::new();
            for a in &r.assertions {
                let _ = writeln!(out, "{} {}: {}", if a.passed { "PASS" } else { "FAIL" }, a.name, a.detail);
            }
            let _ = writeln!(out, "{} of {} assertions passed (bbd {})", r.passed, r.assertion_count, r.tool_version);
            out
        }
    };
    Ok(Done::new(text, r.all_passed))
}

fn experiment_config(generation: &Generation, count: usize) -> Result<ExperimentConfig, Failure> {
    let g = generation.resolve()?;
    Ok(ExperimentConfig {
        a: g.a,
        k: g.k,
        seed: g.seed,
        count,
        arc_probability: g.arc_probability,
        max_attempts: g.max_attempts,
        repair_iterations: g.repair_iterations,
        ..Default::default()
    })
}

fn report_text(r: &ExperimentReport) -> String {
    let mut out = format!(
        "{}: a={} k={} seed={} generated {}/{} ({} distinct)\n",
        r.experiment, r.config.a, r.config.k, r.config.seed, r.generated, r.instance_count, r.distinct_instances
    );
    for (name, n) in &r.checks {
        let _ = writeln!(out, "  {name}: {n}");
    }
    for w in &r.warnings {
        let _ = writeln!(out, "warning: {w}");
    }
    for v in &r.violations {
        let _ = writeln!(out, "violation ({}): {}", v.property.name(), v.certificate);
        out.push_str(&v.digraph);
    }
    let _ = writeln!(out, "violations: {} complete: {}", r.violations.len(), r.complete);
    if let Some(ms) = r.wall_time_ms {
        let _ = writeln!(out, "wall time: {ms} ms");
    }
    out
}

/// One compact JSON line per report.
fn emit_reports(mut reports: Vec<ExperimentReport>, stable: bool, f: Format) -> Result<Done, Failure> {
    no_dot(f)?;
    let mut text = String::new();
    let mut ok = true;
    for r in &mut reports {
        if stable {
            r.stabilize();
        }
        ok &= r.violations.is_empty();
        match f {
            Format::Json => {
                text.push_str(&serde_json::to_string(r).expect("reports serialize"));
                text.push('\n');
            }
            _ => text.push_str(&report_text(r)),
        }
    }
    Ok(Done::new(text, ok))
}

fn run_experiment_cmd(
    name: &str,
    generation: &Generation,
    count: usize,
    stable: bool,
    f: Format,
) -> Result<Done, Failure> {
    let properties = Property::parse_list(name)?;
    let config = experiment_config(generation, count)?;
    let reports =
        properties.iter().map(|&p| bbd_core::harness::run_experiment(&[p], &config)).collect::<Result<Vec<_>, _>>()?;
    emit_reports(reports, stable, f)
}

fn run_wang(
    generation: &Generation,
    mode: ModeArg,
    count: usize,
    budget: u64,
    stable: bool,
    f: Format,
) -> Result<Done, Failure> {
    let config = experiment_config(generation, count)?;
    check_wang_range(config.a, config.k)?;
    let mode = match mode {
        ModeArg::Random => SearchMode::Random,
        ModeArg::Enumerate => SearchMode::Enumerate,
    };
    let report = wang_search(mode, &config, budget)?;
    emit_reports(vec![report], stable, f)
}

fn dispatch(command: Command) -> Result<Done, Failure> {
    match command {
        Command::Check { input, condition, k, bound, output } => {
            check(&load(&input)?, &condition, k, bound, output.format)
        }
        Command::Analyze { input, k, output } => run_analyze(&load(&input)?, k, output.format),
        Command::CycleFactor { input, output } => run_cycle_factor(&load(&input)?, output.format),
        Command::Hamiltonian { input, budget, output } => run_hamiltonian(&load(&input)?, budget, output.format),
        Command::Spectrum { input, output } => run_spectrum(&load(&input)?, output.format),
        Command::Bypass { input, cycle, output } => run_bypass(&load(&input)?, &cycle, output.format),
        Command::Gen { generation, count, bk, output } => run_gen(&generation, count, bk, output.format),
        Command::Enumerate { a, k, budget, dedup, output } => run_enumerate(a, k, budget, dedup, output.format),
        Command::VerifyPaper { output } => run_verify(output.format),
        Command::Experiment { name, generation, count, stable, output } => {
            run_experiment_cmd(&name, &generation, count, stable, output.format)
        }
        Command::WangSearch { generation, mode, count, budget, stable, output } => {
            run_wang(&generation, mode, count, budget, stable, output.format)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("BBD_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("BBD_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| dispatch(cli.command)) {
        Ok(done) => {
            print!("{}", done.text);
            if done.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
