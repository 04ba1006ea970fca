//! Evaluation of ordering choices against recorded CAD timings.
//!
//! A timed-out run is charged twice its time limit. Markup adds one second
//! to both times so fast problems do not dominate the average.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::heuristics::{HeuristicChoice, HeuristicName};
use crate::polyarith::Variables;
use crate::projection::VariableOrdering;

/// Recorded CAD construction time for one problem under one ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct TimingRecord {
    pub problem_id: String,
    pub ordering: VariableOrdering,
    pub cad_time: f64,
    pub timed_out: bool,
    pub time_limit: f64,
}

impl TimingRecord {
    pub fn effective_time(&self) -> f64 {
        effective_time(self)
    }
}

/// The time charged for a record: `2 × limit` on timeout, else the measured time.
pub fn effective_time(r: &TimingRecord) -> f64 {
    if r.timed_out {
        2.0 * r.time_limit
    } else {
        r.cad_time
    }
}

/// Seconds and timeout flag of one recorded projection step.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepTime {
    pub seconds: f64,
    pub timed_out: bool,
}

/// Everything recorded about one problem.
#[derive(Clone, Debug, PartialEq)]
pub struct ProblemTimings {
    pub problem_id: String,
    pub variables: Variables,
    pub records: BTreeMap<VariableOrdering, TimingRecord>,
    pub cell_counts: Option<BTreeMap<VariableOrdering, u64>>,
    /// Keyed by the ordering prefix projected so far (including the step).
    pub projection_times: Option<BTreeMap<Vec<usize>, StepTime>>,
}

impl ProblemTimings {
    pub fn new(problem_id: impl Into<String>, variables: Variables) -> Self {
        ProblemTimings {
            problem_id: problem_id.into(),
            variables,
            records: BTreeMap::new(),
            cell_counts: None,
            projection_times: None,
        }
    }

    /// Minimal effective time over all records.
    pub fn optimal_time(&self) -> Option<f64> {
        self.records.values().map(effective_time).reduce(f64::min)
    }

    pub fn all_timed_out(&self) -> bool {
        self.records.values().all(|r| r.timed_out)
    }
}

/// `((h + 1) − (o + 1)) / (o + 1)`.
pub fn markup(heuristic_time: f64, optimal_time: f64) -> f64 {
    ((heuristic_time + 1.0) - (optimal_time + 1.0)) / (optimal_time + 1.0)
}

/// Aggregate metrics of one heuristic over a dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MetricSummary {
    pub problems: usize,
    pub accuracy: f64,
    pub total_time: f64,
    pub mean_markup: f64,
    pub completed: usize,
}

/// One heuristic on one problem, as used for plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemRow {
    pub problem_id: String,
    pub heuristic: String,
    pub ordering: String,
    pub chosen_time: f64,
    pub optimal_time: f64,
    pub markup: f64,
    /// The CAD run for the chosen ordering timed out.
    pub timed_out: bool,
    /// Heuristic cost (if charged) plus CAD time stayed under the limit.
    pub completed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicEvaluation {
    pub heuristic: String,
    pub summary: MetricSummary,
    pub rows: Vec<ProblemRow>,
}

/// Choices of one heuristic, keyed by problem id.
#[derive(Clone, Debug, Default)]
pub struct HeuristicChoices {
    pub heuristic: String,
    pub choices: BTreeMap<String, HeuristicChoice>,
}

/// Evaluates each heuristic's choices on the dataset.
///
/// Problems are visited in `problem_id` order so floating sums are
/// reproducible. Choices for problems outside the dataset are ignored.
pub fn evaluate(
    dataset: &[ProblemTimings],
    choices: &[HeuristicChoices],
    include_cost: bool,
) -> Result<Vec<HeuristicEvaluation>> {
    let mut problems: Vec<&ProblemTimings> = dataset.iter().collect();
    problems.sort_by(|a, b| a.problem_id.cmp(&b.problem_id));

    let mut out = Vec::with_capacity(choices.len());
    for hc in choices {
        let mut rows = Vec::with_capacity(problems.len());
        let mut accurate = 0usize;
        for problem in &problems {
            let choice = hc.choices.get(&problem.problem_id).ok_or_else(|| {
                Error::Data(format!("{}: no choice for problem `{}`", hc.heuristic, problem.problem_id))
            })?;
            let record = problem.records.get(&choice.ordering).ok_or_else(|| {
                Error::Data(format!(
                    "{}: problem `{}` has no timing for ordering {}",
                    hc.heuristic,
                    problem.problem_id,
                    choice.ordering.render(&problem.variables)
                ))
            })?;
            let optimal = problem
                .optimal_time()
                .ok_or_else(|| Error::NoTimingData(problem.problem_id.clone()))?;
            let cad = effective_time(record);
            if cad == optimal {
                accurate += 1;
            }
            let chosen = if include_cost { cad + choice.heuristic_cost } else { cad };
            rows.push(ProblemRow {
                problem_id: problem.problem_id.clone(),
                heuristic: hc.heuristic.clone(),
                ordering: choice.ordering.render(&problem.variables),
                chosen_time: chosen,
                optimal_time: optimal,
                markup: markup(chosen, optimal),
                timed_out: record.timed_out,
                completed: chosen < record.time_limit,
            });
        }
        let n = rows.len();
        let summary = MetricSummary {
            problems: n,
            accuracy: if n == 0 { 0.0 } else { accurate as f64 / n as f64 },
            total_time: rows.iter().map(|r| r.chosen_time).sum(),
            mean_markup: if n == 0 { 0.0 } else { rows.iter().map(|r| r.markup).sum::<f64>() / n as f64 },
            completed: rows.iter().filter(|r| r.completed).count(),
        };
        out.push(HeuristicEvaluation { heuristic: hc.heuristic.clone(), summary, rows });
    }
    Ok(out)
}

/// Both variants of the metrics for every heuristic.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub heuristic: String,
    pub with_cost: HeuristicEvaluation,
    pub without_cost: HeuristicEvaluation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub rows: Vec<ReportRow>,
}

impl EvaluationReport {
    pub fn build(dataset: &[ProblemTimings], choices: &[HeuristicChoices]) -> Result<Self> {
        let with = evaluate(dataset, choices, true)?;
        let without = evaluate(dataset, choices, false)?;
        let rows = with
            .into_iter()
            .zip(without)
            .map(|(w, wo)| ReportRow { heuristic: w.heuristic.clone(), with_cost: w, without_cost: wo })
            .collect();
        Ok(EvaluationReport { rows })
    }

    pub fn row(&self, heuristic: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.heuristic == heuristic)
    }

    /// Report CSV: one row per (heuristic, metric variant).
    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<()> {
        #[derive(Serialize)]
        struct Line<'a> {
            heuristic: &'a str,
            variant: &'a str,
            problems: usize,
            accuracy: f64,
            total_time: f64,
            mean_markup: f64,
            completed: usize,
        }
        let mut csv = csv::Writer::from_writer(w);
        for row in &self.rows {
            for (variant, e) in [("with_cost", &row.with_cost), ("without_cost", &row.without_cost)] {
                let s = &e.summary;
                csv.serialize(Line {
                    heuristic: &row.heuristic,
                    variant,
                    problems: s.problems,
                    accuracy: s.accuracy,
                    total_time: s.total_time,
                    mean_markup: s.mean_markup,
                    completed: s.completed,
                })
                .map_err(csv_err)?;
            }
        }
        csv.flush()?;
        Ok(())
    }

    /// Table with the without-cost figures in brackets where they differ.
    pub fn render_table(&self) -> String {
        let mut out = format!(
            "{:<14} {:>9} {:>26} {:>22} {:>16}\n",
            "Name", "Accuracy", "Total time", "Markup", "# Completed"
        );
        for row in &self.rows {
            let (w, wo) = (&row.with_cost.summary, &row.without_cost.summary);
            let bracket = |a: String, b: String| if a == b { a } else { format!("{a} ({b})") };
            out.push_str(&format!(
                "{:<14} {:>9.3} {:>26} {:>22} {:>16}\n",
                row.heuristic,
                w.accuracy,
                bracket(format!("{:.2}", w.total_time), format!("{:.2}", wo.total_time)),
                bracket(format!("{:.3}", w.mean_markup), format!("{:.3}", wo.mean_markup)),
                bracket(w.completed.to_string(), wo.completed.to_string()),
            ));
        }
        out
    }
}

pub(crate) fn csv_err(e: csv::Error) -> Error {
    Error::Data(format!("csv: {e}"))
}

/// Writes per-problem rows as CSV.
pub fn write_problem_rows<W: std::io::Write>(rows: &[ProblemRow], w: W) -> Result<()> {
    let mut csv = csv::Writer::from_writer(w);
    for r in rows {
        csv.serialize(r).map_err(csv_err)?;
    }
    csv.flush()?;
    Ok(())
}

/// Reads the per-problem CSV written by [`write_problem_rows`].
pub fn read_problem_rows<R: std::io::Read>(r: R) -> Result<Vec<ProblemRow>> {
    let mut csv = csv::Reader::from_reader(r);
    let mut rows = Vec::new();
    for row in csv.deserialize::<ProblemRow>() {
        let row = row.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            Error::table("per-problem rows", line, e.to_string())
        })?;
        if !(row.chosen_time.is_finite() && row.optimal_time.is_finite()) {
            return Err(Error::Data(format!("{}: non-finite time", row.problem_id)));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Heuristic cost rebuilt from recorded projection step times.
///
/// Enumerating heuristics pay for every recorded step once. Greedy sotd pays
/// for the trial steps it needed off the chosen path.
pub fn recorded_cost(
    heuristic: HeuristicName,
    ordering: &VariableOrdering,
    steps: &BTreeMap<Vec<usize>, StepTime>,
) -> Result<f64> {
    match heuristic {
        HeuristicName::Sotd | HeuristicName::Mods | HeuristicName::Logmods => {
            Ok(steps.values().map(|s| s.seconds).sum())
        }
        HeuristicName::GreedySotd => {
            let seq = ordering.as_slice();
            let mut cost = 0.0;
            for k in 0..seq.len().saturating_sub(1) {
                for &v in &seq[k + 1..] {
                    let mut prefix = seq[..k].to_vec();
                    prefix.push(v);
                    let step = steps.get(&prefix).ok_or_else(|| {
                        Error::Data(format!("no recorded projection time for prefix {prefix:?}"))
                    })?;
                    cost += step.seconds;
                }
            }
            Ok(cost)
        }
        _ => Ok(0.0),
    }
}

/// Survival-plot points `(k, t_1 + … + t_k)` over the sorted completed times.
pub fn survival_data(times: &[(f64, bool)]) -> Vec<(usize, f64)> {
    let mut solved: Vec<f64> = times.iter().filter(|(_, out)| !out).map(|(t, _)| *t).collect();
    solved.sort_by(f64::total_cmp);
    let mut acc = 0.0;
    solved
        .into_iter()
        .enumerate()
        .map(|(k, t)| {
            acc += t;
            (k + 1, acc)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AdversarialPoint {
    pub problem_id: String,
    pub time_a: f64,
    pub time_b: f64,
    pub a_timed_out: bool,
    pub b_timed_out: bool,
}

/// Pairs two heuristics' per-problem times for a scatter against the diagonal.
pub fn adversarial_data(a: &[ProblemRow], b: &[ProblemRow]) -> Result<Vec<AdversarialPoint>> {
    let index = |rows: &[ProblemRow]| -> BTreeMap<String, ProblemRow> {
        rows.iter().map(|r| (r.problem_id.clone(), r.clone())).collect()
    };
    let (ia, ib) = (index(a), index(b));
    let ka: BTreeSet<&String> = ia.keys().collect();
    let kb: BTreeSet<&String> = ib.keys().collect();
    if ka != kb {
        let only_a: Vec<&str> = ka.difference(&kb).map(|s| s.as_str()).collect();
        let only_b: Vec<&str> = kb.difference(&ka).map(|s| s.as_str()).collect();
        return Err(Error::Data(format!(
            "problem sets differ: only in first [{}], only in second [{}]",
            only_a.join(", "),
            only_b.join(", ")
        )));
    }
    Ok(ia
        .into_iter()
        .map(|(id, ra)| {
            let rb = &ib[&id];
            AdversarialPoint {
                problem_id: id,
                time_a: ra.chosen_time,
                time_b: rb.chosen_time,
                a_timed_out: !ra.completed,
                b_timed_out: !rb.completed,
            }
        })
        .collect())
}

/// Outcome of [`uniqueness_cluster`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ClusterOutcome {
    pub kept: Vec<ProblemTimings>,
    pub all_timeout: Vec<String>,
    pub duplicates: Vec<String>,
    /// Retained without clustering because cell counts were missing or partial.
    pub unclustered: Vec<String>,
}

/// Drops problems where every ordering timed out, then keeps one problem per
/// distinct vector of cell counts over all orderings (the smallest id).
pub fn uniqueness_cluster(dataset: Vec<ProblemTimings>) -> ClusterOutcome {
    let mut dataset = dataset;
    dataset.sort_by(|a, b| a.problem_id.cmp(&b.problem_id));
    let mut out = ClusterOutcome::default();
    let mut seen: BTreeSet<(usize, Vec<u64>)> = BTreeSet::new();
    for p in dataset {
        if p.all_timed_out() {
            out.all_timeout.push(p.problem_id);
            continue;
        }
        let n = p.variables.len();
        let orderings = (1..=n).try_fold(1usize, |acc, k| acc.checked_mul(k));
        let key = p
            .cell_counts
            .as_ref()
            .filter(|counts| Some(counts.len()) == orderings)
            .map(|counts| counts.values().copied().collect::<Vec<u64>>());
        match key {
            Some(vector) => {
                if seen.insert((n, vector)) {
                    out.kept.push(p);
                } else {
                    out.duplicates.push(p.problem_id);
                }
            }
            None => {
                out.unclustered.push(p.problem_id.clone());
                out.kept.push(p);
            }
        }
    }
    if !out.unclustered.is_empty() {
        log::warn!(
            "{} problem(s) lack complete cell counts and were kept without clustering",
            out.unclustered.len()
        );
    }
    out
}
