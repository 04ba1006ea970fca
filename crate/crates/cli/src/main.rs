use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use cadorder::heuristics::{self, ChooserConfig, HeuristicChoice, HeuristicName, LogmodsConfig};
use cadorder::ingest::{self, ProblemInstance, VariableMap};
use cadorder::metrics::{self, EvaluationReport, HeuristicChoices, ProblemRow, ProblemTimings};
use cadorder::projection::{self, DEFAULT_ENUMERATION_CAP};
use cadorder::{plot, ErrorKind, VariableOrdering};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

/// Variable-ordering heuristics for cylindrical algebraic decomposition.
#[derive(Parser, Debug)]
#[command(name = "cadorder", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Choose an ordering for one SMT-LIB problem with one or more heuristics.
    Choose(ChooseArgs),
    /// Print the projection sets of a problem along one ordering.
    Project(ProjectArgs),
    /// Evaluate heuristics against recorded CAD timings.
    Evaluate(EvaluateArgs),
    /// Drop all-timeout problems and keep one problem per cell-count vector.
    Cluster(ClusterArgs),
    /// Draw a survival or adversarial plot from a per-problem CSV.
    Plot(PlotArgs),
}

#[derive(Args, Debug, Clone)]
struct ChooserFlags {
    /// Seed of the random heuristic.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seconds allowed for one projection step before it counts as timed out.
    #[arg(long, default_value_t = 10.0)]
    step_time_limit: f64,
    /// Largest number of variables for which every ordering is enumerated.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    max_vars: usize,
    #[arg(long, default_value_t = 10.0)]
    logmods_base: f64,
    #[arg(long, default_value_t = 1)]
    logmods_offset: u64,
}

impl ChooserFlags {
    fn config(&self) -> anyhow::Result<ChooserConfig> {
        if !(self.step_time_limit.is_finite() && self.step_time_limit > 0.0) {
            return Err(usage("--step-time-limit must be a positive number"));
        }
        let logmods = LogmodsConfig::new(self.logmods_base, self.logmods_offset)
            .map_err(|e| usage(e.to_string()))?;
        Ok(ChooserConfig {
            step_time_limit: self.step_time_limit,
            enumeration_cap: self.max_vars,
            logmods,
            seed: self.seed,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ChooseArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated heuristic names.
    #[arg(long, value_delimiter = ',', default_value = "brown,sotd,greedy-sotd,mods,gmods,logmods,random")]
    heuristic: Vec<HeuristicName>,
    #[command(flatten)]
    chooser: ChooserFlags,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated variable names, projected first to last. Defaults to declaration order.
    #[arg(long)]
    ordering: Option<String>,
    #[arg(long, default_value_t = 10.0)]
    step_time_limit: f64,
}

#[derive(Args, Debug)]
struct EvaluateArgs {
    /// Timing CSV: problem_id,ordering,cad_time_seconds,timed_out,time_limit_seconds.
    #[arg(long)]
    timings: PathBuf,
    /// Directory of .smt2 problems; needed to compute choices.
    #[arg(long)]
    problems: Option<PathBuf>,
    #[arg(long)]
    cellcounts: Option<PathBuf>,
    #[arg(long)]
    projection_times: Option<PathBuf>,
    /// Precomputed choices: problem_id,heuristic,ordering,heuristic_cost_seconds.
    #[arg(long)]
    choices: Option<PathBuf>,
    /// Heuristics to run on the problems (default: all when --problems is given).
    #[arg(long, value_delimiter = ',')]
    heuristic: Vec<HeuristicName>,
    #[command(flatten)]
    chooser: ChooserFlags,
    /// Keep only problems whose optimal effective time exceeds this many seconds.
    #[arg(long)]
    min_optimal_seconds: Option<f64>,
    /// Charge heuristic cost in the per-problem rows.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    include_cost: bool,
    /// Report CSV: one row per heuristic and metric variant.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    per_problem: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ClusterArgs {
    #[arg(long)]
    timings: PathBuf,
    #[arg(long)]
    cellcounts: Option<PathBuf>,
    #[arg(long)]
    problems: Option<PathBuf>,
    /// Write the retained problem ids here.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum PlotKind {
    Survival,
    Adversarial,
}

#[derive(Args, Debug)]
struct PlotArgs {
    #[arg(long, value_enum)]
    kind: PlotKind,
    /// Per-problem CSV written by `evaluate --per-problem`.
    #[arg(long)]
    per_problem: PathBuf,
    /// Heuristics to draw; adversarial plots need exactly two.
    #[arg(long, value_delimiter = ',')]
    heuristic: Vec<String>,
    /// SVG path; the plotted data goes next to it with a .csv extension.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match e.chain().find_map(|c| c.downcast_ref::<cadorder::Error>()) {
        Some(err) if err.kind() == ErrorKind::Limit => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Choose(a) => choose(a),
        Command::Project(a) => project(a),
        Command::Evaluate(a) => evaluate(a),
        Command::Cluster(a) => cluster(a),
        Command::Plot(a) => plot_cmd(a),
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating file in {}", dir.display()))?;
    tmp.write_all(bytes)?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(output: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn open(path: &Path) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn choose(a: ChooseArgs) -> anyhow::Result<ExitCode> {
    let cfg = a.chooser.config()?;
    let problem = ingest::load_problem(&a.input)?;
    let vars = &problem.variables;
    let mut choices = Vec::new();
    for &h in &a.heuristic {
        if h.needs_timings() {
            return Err(usage(format!("{h} needs recorded timings; use `evaluate`")));
        }
        choices.push(heuristics::choose(h, &problem.polys, &cfg).with_context(|| format!("{h}"))?);
    }
    let text = match a.format {
        Format::Text => {
            let mut out = String::new();
            for c in &choices {
                out.push_str(&format!("{}\t{}\tcost={:.6}s\n", c.heuristic, c.ordering.render(vars), c.heuristic_cost));
                for row in heuristics::score_rows(c, vars) {
                    let mark = if row.chosen { " *" } else { "" };
                    out.push_str(&format!("  {}\t{}{mark}\n", row.candidate, row.score));
                }
            }
            out
        }
        Format::Json => {
            let value: Vec<_> = choices
                .iter()
                .map(|c| {
                    json!({
                        "heuristic": c.heuristic.as_str(),
                        "ordering": c.ordering.render(vars),
                        "heuristic_cost_seconds": c.heuristic_cost,
                        "scores": heuristics::score_rows(c, vars)
                            .into_iter()
                            .map(|r| json!({"candidate": r.candidate, "score": r.score, "chosen": r.chosen}))
                            .collect::<Vec<_>>(),
                    })
                })
                .collect();
            serde_json::to_string_pretty(&json!({"problem_id": problem.problem_id, "choices": value}))? + "\n"
        }
        Format::Csv => {
            let mut out = String::from("heuristic,candidate,score,chosen\n");
            for c in &choices {
                for r in heuristics::score_rows(c, vars) {
                    out.push_str(&format!("{},\"{}\",{},{}\n", r.heuristic, r.candidate, r.score, r.chosen));
                }
            }
            out
        }
    };
    emit(a.output.as_deref(), &text)?;
    Ok(ExitCode::SUCCESS)
}

fn project(a: ProjectArgs) -> anyhow::Result<ExitCode> {
    if !(a.step_time_limit.is_finite() && a.step_time_limit > 0.0) {
        return Err(usage("--step-time-limit must be a positive number"));
    }
    let problem = ingest::load_problem(&a.input)?;
    let vars = &problem.variables;
    let ordering = match &a.ordering {
        Some(text) => VariableOrdering::parse(text, vars)?,
        None => VariableOrdering::identity(vars.len()),
    };
    let chain = projection::project_chain(&problem.polys, &ordering, a.step_time_limit);
    print!("{}", chain.render(vars));
    for (i, t) in chain.step_times.iter().enumerate() {
        eprintln!("step {} ({}): {t:.6}s", i + 1, vars.name(ordering.as_slice()[i]));
    }
    if chain.timed_out {
        eprintln!("error: projection step exceeded {}s", a.step_time_limit);
        return Ok(ExitCode::from(3));
    }
    Ok(ExitCode::SUCCESS)
}

fn load_problems(dir: Option<&Path>) -> anyhow::Result<Option<Vec<ProblemInstance>>> {
    dir.map(|d| ingest::load_problem_dir(d).with_context(|| format!("reading problems from {}", d.display())))
        .transpose()
}

struct Loaded {
    dataset: Vec<ProblemTimings>,
    stats: ingest::DatasetStats,
    problems: Option<Vec<ProblemInstance>>,
}

fn load_dataset(
    timings: &Path,
    problems: Option<&Path>,
    cellcounts: Option<&Path>,
    projection_times: Option<&Path>,
) -> anyhow::Result<Loaded> {
    let problems = load_problems(problems)?;
    let known: Option<VariableMap> = problems.as_deref().map(ingest::variable_map);
    let t = ingest::load_timings(open(timings)?, known.as_ref()).with_context(|| timings.display().to_string())?;
    let vars = merged(known.as_ref(), &t.variables);
    let cc = cellcounts
        .map(|p| ingest::load_cellcounts(open(p)?, Some(&vars)).with_context(|| p.display().to_string()))
        .transpose()?;
    let pt = projection_times
        .map(|p| ingest::load_projection_times(open(p)?, Some(&vars)).with_context(|| p.display().to_string()))
        .transpose()?;
    let (dataset, stats) = ingest::assemble_dataset(known.as_ref(), t, cc, pt)?;
    Ok(Loaded { dataset, stats, problems })
}

fn merged(known: Option<&VariableMap>, inferred: &VariableMap) -> VariableMap {
    let mut out = inferred.clone();
    if let Some(k) = known {
        out.extend(k.iter().map(|(id, v)| (id.clone(), v.clone())));
    }
    out
}

fn evaluate(a: EvaluateArgs) -> anyhow::Result<ExitCode> {
    let cfg = a.chooser.config()?;
    let Loaded { mut dataset, stats, problems } =
        load_dataset(&a.timings, a.problems.as_deref(), a.cellcounts.as_deref(), a.projection_times.as_deref())?;
    if let Some(t) = a.min_optimal_seconds {
        dataset.retain(|p| p.optimal_time().is_some_and(|o| o > t));
    }
    eprintln!(
        "dataset: {} problems, {} all-timeout dropped, {} duplicates dropped, {} evaluated",
        stats.total,
        stats.all_timeout,
        stats.duplicates,
        dataset.len()
    );

    let mut groups: Vec<HeuristicChoices> = Vec::new();
    let vb = HeuristicChoices {
        heuristic: HeuristicName::VirtualBest.as_str().into(),
        choices: dataset
            .iter()
            .map(|p| Ok((p.problem_id.clone(), heuristics::virtual_best(p)?)))
            .collect::<cadorder::Result<_>>()?,
    };
    groups.push(vb);
    if let Some(path) = &a.choices {
        let known = merged(None, &dataset.iter().map(|p| (p.problem_id.clone(), p.variables.clone())).collect());
        let loaded = ingest::load_choices(open(path)?, Some(&known)).with_context(|| path.display().to_string())?;
        groups.extend(loaded.into_iter().filter(|g| g.heuristic != HeuristicName::VirtualBest.as_str()));
    }
    let wanted: Vec<HeuristicName> = if !a.heuristic.is_empty() {
        a.heuristic.iter().copied().filter(|h| !h.needs_timings()).collect()
    } else if problems.is_some() && a.choices.is_none() {
        HeuristicName::ALL.into_iter().filter(|h| !h.needs_timings()).collect()
    } else {
        Vec::new()
    };
    if !wanted.is_empty() {
        let Some(problems) = &problems else {
            return Err(usage("computing choices needs --problems"));
        };
        let by_id: BTreeMap<&str, &ProblemInstance> = problems.iter().map(|p| (p.problem_id.as_str(), p)).collect();
        for h in wanted {
            let mut choices = BTreeMap::new();
            for p in &dataset {
                let instance = by_id[p.problem_id.as_str()];
                let mut c: HeuristicChoice = heuristics::choose(h, &instance.polys, &cfg)
                    .with_context(|| format!("{h} on `{}`", p.problem_id))?;
                if let Some(steps) = &p.projection_times {
                    c.heuristic_cost = metrics::recorded_cost(h, &c.ordering, steps)
                        .with_context(|| format!("{h} on `{}`", p.problem_id))?;
                }
                choices.insert(p.problem_id.clone(), c);
            }
            groups.retain(|g| g.heuristic != h.as_str());
            groups.push(HeuristicChoices { heuristic: h.as_str().into(), choices });
        }
    }

    let report = EvaluationReport::build(&dataset, &groups)?;
    print!("{}", report.render_table());
    if let Some(p) = &a.report {
        let mut buf = Vec::new();
        report.write_csv(&mut buf)?;
        write_atomic(p, &buf)?;
    }
    if let Some(p) = &a.per_problem {
        let rows: Vec<ProblemRow> = report
            .rows
            .iter()
            .flat_map(|r| if a.include_cost { &r.with_cost.rows } else { &r.without_cost.rows })
            .cloned()
            .collect();
        let mut buf = Vec::new();
        metrics::write_problem_rows(&rows, &mut buf)?;
        write_atomic(p, &buf)?;
    }
    if let Some(p) = &a.json {
        let value = json!({
            "dataset": stats,
            "evaluated": dataset.len(),
            "heuristics": report.rows.iter().map(|r| json!({
                "heuristic": r.heuristic,
                "with_cost": r.with_cost.summary,
                "without_cost": r.without_cost.summary,
            })).collect::<Vec<_>>(),
        });
        write_atomic(p, (serde_json::to_string_pretty(&value)? + "\n").as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cluster(a: ClusterArgs) -> anyhow::Result<ExitCode> {
    let Loaded { dataset, stats, .. } = load_dataset(&a.timings, a.problems.as_deref(), a.cellcounts.as_deref(), None)?;
    println!("total: {}", stats.total);
    println!("all-timeout: {}", stats.all_timeout);
    println!("duplicates: {}", stats.duplicates);
    println!("unique: {}", stats.unique);
    if let Some(p) = &a.output {
        let mut out = String::from("problem_id\n");
        for d in &dataset {
            out.push_str(&d.problem_id);
            out.push('\n');
        }
        write_atomic(p, out.as_bytes())?;
    }
    Ok(ExitCode::SUCCESS)
}

fn plot_cmd(a: PlotArgs) -> anyhow::Result<ExitCode> {
    let rows = metrics::read_problem_rows(open(&a.per_problem)?).with_context(|| a.per_problem.display().to_string())?;
    let mut by_heuristic: BTreeMap<String, Vec<ProblemRow>> = BTreeMap::new();
    let mut order: Vec<String> = Vec::new();
    for r in rows {
        if !by_heuristic.contains_key(&r.heuristic) {
            order.push(r.heuristic.clone());
        }
        by_heuristic.entry(r.heuristic.clone()).or_default().push(r);
    }
    let selected = if a.heuristic.is_empty() { order } else { a.heuristic.clone() };
    for h in &selected {
        if !by_heuristic.contains_key(h) {
            bail!(cadorder::Error::Data(format!("no rows for heuristic `{h}`")));
        }
    }
    let (svg, data) = match a.kind {
        PlotKind::Survival => {
            let series: Vec<(String, Vec<(usize, f64)>)> = selected
                .iter()
                .map(|h| {
                    let times: Vec<(f64, bool)> =
                        by_heuristic[h].iter().map(|r| (r.chosen_time, !r.completed)).collect();
                    (h.clone(), metrics::survival_data(&times))
                })
                .collect();
            let mut csv = String::from("heuristic,k,cumulative_seconds\n");
            for (h, pts) in &series {
                for (k, t) in pts {
                    csv.push_str(&format!("{h},{k},{t}\n"));
                }
            }
            (plot::survival_svg(&series), csv)
        }
        PlotKind::Adversarial => {
            let [ha, hb] = selected.as_slice() else {
                return Err(usage("adversarial plots need exactly two heuristics (--heuristic a,b)"));
            };
            let points = metrics::adversarial_data(&by_heuristic[ha], &by_heuristic[hb])?;
            let mut csv = format!("problem_id,{ha}_seconds,{hb}_seconds,{ha}_timed_out,{hb}_timed_out\n");
            for p in &points {
                csv.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.problem_id, p.time_a, p.time_b, p.a_timed_out, p.b_timed_out
                ));
            }
            (plot::adversarial_svg(ha, hb, &points), csv)
        }
    };
    write_atomic(&a.output, svg.as_bytes())?;
    write_atomic(&a.output.with_extension("csv"), data.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}
