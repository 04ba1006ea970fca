//! Variable-ordering heuristics.
//!
//! Every chooser returns a [`HeuristicChoice`] carrying the ordering, the
//! projection time spent making the choice and the score of each candidate.
//! Ties always go to the lowest variable index, or for whole orderings to the
//! lexicographically smallest index sequence.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{effective_time, ProblemTimings};
use crate::polyarith::{degree_sum, sotd_value, PolySet, Variables};
use crate::projection::{all_chains, project_step, ChainForest, ProjectionChain, VariableOrdering, DEFAULT_ENUMERATION_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HeuristicName {
    Brown,
    Sotd,
    GreedySotd,
    Mods,
    Gmods,
    Logmods,
    Random,
    VirtualBest,
}

impl HeuristicName {
    pub const ALL: [HeuristicName; 8] = [
        HeuristicName::Brown,
        HeuristicName::Sotd,
        HeuristicName::GreedySotd,
        HeuristicName::Mods,
        HeuristicName::Gmods,
        HeuristicName::Logmods,
        HeuristicName::Random,
        HeuristicName::VirtualBest,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            HeuristicName::Brown => "brown",
            HeuristicName::Sotd => "sotd",
            HeuristicName::GreedySotd => "greedy-sotd",
            HeuristicName::Mods => "mods",
            HeuristicName::Gmods => "gmods",
            HeuristicName::Logmods => "logmods",
            HeuristicName::Random => "random",
            HeuristicName::VirtualBest => "virtual-best",
        }
    }

    /// Heuristics that only need the polynomial set.
    pub fn needs_timings(self) -> bool {
        self == HeuristicName::VirtualBest
    }
}

impl fmt::Display for HeuristicName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for HeuristicName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        HeuristicName::ALL
            .into_iter()
            .find(|h| h.as_str() == norm)
            .ok_or_else(|| Error::Data(format!("unknown heuristic `{s}`")))
    }
}

impl Serialize for HeuristicName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// A candidate's score. `Infinite` marks a candidate whose projection timed out.
#[derive(Clone, Debug, PartialEq)]
pub enum Score {
    Exact(BigUint),
    Count(u64),
    Real(f64),
    /// Brown's measures, compared lexicographically.
    Tuple(Vec<u64>),
    Infinite,
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Exact(v) => write!(f, "{v}"),
            Score::Count(v) => write!(f, "{v}"),
            Score::Real(v) => write!(f, "{v}"),
            Score::Tuple(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "({})", parts.join(","))
            }
            Score::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateKey {
    Ordering(VariableOrdering),
    /// Variable `var` considered at greedy step `step` (1-based).
    Step { step: usize, var: usize },
}

impl CandidateKey {
    pub fn render(&self, vars: &Variables) -> String {
        match self {
            CandidateKey::Ordering(o) => o.render(vars),
            CandidateKey::Step { step, var } => format!("step {step}: {}", vars.name(*var)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub key: CandidateKey,
    pub score: Score,
    pub chosen: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HeuristicChoice {
    pub heuristic: HeuristicName,
    pub ordering: VariableOrdering,
    /// Projection seconds spent on the choice itself.
    pub heuristic_cost: f64,
    pub diagnostics: Vec<Candidate>,
}

impl HeuristicChoice {
    pub fn chosen_score(&self) -> Option<&Score> {
        let target = CandidateKey::Ordering(self.ordering.clone());
        self.diagnostics.iter().find(|c| c.key == target).map(|c| &c.score)
    }
}

/// Scoring parameters of logmods: `Π (2·log_base(D + offset) + 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogmodsConfig {
    pub log_base: f64,
    pub degree_offset: u64,
}

impl LogmodsConfig {
    pub fn new(log_base: f64, degree_offset: u64) -> Result<Self> {
        if !(log_base.is_finite() && log_base > 1.0) {
            return Err(Error::Data(format!("logmods base must be a finite number > 1, got {log_base}")));
        }
        Ok(LogmodsConfig { log_base, degree_offset })
    }
}

impl Default for LogmodsConfig {
    fn default() -> Self {
        LogmodsConfig { log_base: 10.0, degree_offset: 1 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChooserConfig {
    pub step_time_limit: f64,
    pub enumeration_cap: usize,
    pub logmods: LogmodsConfig,
    pub seed: u64,
}

impl Default for ChooserConfig {
    fn default() -> Self {
        ChooserConfig {
            step_time_limit: 10.0,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
            logmods: LogmodsConfig::default(),
            seed: 0,
        }
    }
}

/// Runs the named heuristic on `set`. Virtual best needs timings; see [`virtual_best`].
pub fn choose(name: HeuristicName, set: &PolySet, cfg: &ChooserConfig) -> Result<HeuristicChoice> {
    match name {
        HeuristicName::Brown => Ok(brown_choose(set)),
        HeuristicName::Gmods => Ok(gmods_choose(set)),
        HeuristicName::Sotd => sotd_choose(set, cfg),
        HeuristicName::GreedySotd => greedy_sotd_choose(set, cfg),
        HeuristicName::Mods => mods_choose(set, cfg),
        HeuristicName::Logmods => logmods_choose(set, cfg),
        HeuristicName::Random => Ok(random_choose(set, cfg.seed)),
        HeuristicName::VirtualBest => Err(Error::Data("virtual-best needs recorded timings".into())),
    }
}

/// Greedy driver: `measure` scores each remaining variable on the current set.
fn greedy<M, K>(name: HeuristicName, set: &PolySet, measure: M, to_score: fn(&K) -> Score) -> HeuristicChoice
where
    M: Fn(&PolySet, usize) -> K,
    K: Ord,
{
    let n = set.nvars();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut current = set.clone();
    let mut picks = Vec::with_capacity(n);
    let mut diagnostics = Vec::new();
    let mut step = 1;
    while !remaining.is_empty() {
        let scored: Vec<(usize, K)> = remaining.iter().map(|&v| (v, measure(&current, v))).collect();
        let best = scored
            .iter()
            .min_by(|a, b| a.1.cmp(&b.1).then(a.0.cmp(&b.0)))
            .map(|(v, _)| *v)
            .expect("remaining is nonempty");
        for (v, k) in &scored {
            diagnostics.push(Candidate {
                key: CandidateKey::Step { step, var: *v },
                score: to_score(k),
                chosen: *v == best,
            });
        }
        remaining.retain(|&v| v != best);
        picks.push(best);
        if !remaining.is_empty() {
            current = project_step(&current, best);
        }
        step += 1;
    }
    HeuristicChoice {
        heuristic: name,
        ordering: VariableOrdering::new(picks, n).expect("greedy picks form a permutation"),
        heuristic_cost: 0.0,
        diagnostics,
    }
}

/// Brown's measures for `var`: max degree, max total degree of a term
/// containing it, number of terms containing it.
pub fn brown_measures(set: &PolySet, var: usize) -> [u64; 3] {
    let mut max_degree = 0u64;
    let mut max_tdeg = 0u64;
    let mut count = 0u64;
    for p in set.iter() {
        for (m, _) in p.terms() {
            let e = m.exp(var) as u64;
            if e > 0 {
                max_degree = max_degree.max(e);
                max_tdeg = max_tdeg.max(m.total_degree());
                count += 1;
            }
        }
    }
    [max_degree, max_tdeg, count]
}

pub fn brown_choose(set: &PolySet) -> HeuristicChoice {
    greedy(HeuristicName::Brown, set, brown_measures, |k| Score::Tuple(k.to_vec()))
}

pub fn gmods_choose(set: &PolySet) -> HeuristicChoice {
    greedy(HeuristicName::Gmods, set, degree_sum, |k| Score::Count(*k))
}

/// Sum of `sotd_value` over every set of the chain, the input included.
pub fn sotd_score(chain: &ProjectionChain) -> Option<u64> {
    chain.is_complete().then(|| chain.sets.iter().map(sotd_value).sum())
}

/// Degree sums `D_i` of each set with respect to the variable it eliminates.
pub fn chain_degree_sums(chain: &ProjectionChain) -> Vec<u64> {
    chain.sets.iter().zip(chain.ordering.as_slice()).map(|(s, &v)| degree_sum(s, v)).collect()
}

/// `Π (2·D_i + 1)`.
pub fn mods_score(chain: &ProjectionChain) -> Option<BigUint> {
    chain.is_complete().then(|| {
        chain_degree_sums(chain).into_iter().map(|d| BigUint::from(2 * d + 1)).product()
    })
}

/// `Π D_i`, the cruder bound that `mods_score` dominates.
pub fn degree_product(chain: &ProjectionChain) -> BigUint {
    chain_degree_sums(chain).into_iter().map(BigUint::from).product()
}

/// `Π (2·log_base(D_i + offset) + 1)`; `Ok(None)` for a timed-out chain.
pub fn logmods_score(chain: &ProjectionChain, cfg: &LogmodsConfig) -> Result<Option<f64>> {
    if !chain.is_complete() {
        return Ok(None);
    }
    let mut acc = 1.0;
    for d in chain_degree_sums(chain) {
        let arg = d + cfg.degree_offset;
        if arg == 0 {
            return Err(Error::LogDomain { degree_sum: d, offset: cfg.degree_offset });
        }
        acc *= 2.0 * (arg as f64).log(cfg.log_base) + 1.0;
    }
    Ok(Some(acc))
}

/// Picks the first minimal candidate in ordering order.
fn pick_min<T, F>(
    name: HeuristicName,
    scores: Vec<(VariableOrdering, Option<T>)>,
    strictly_better: F,
    to_score: fn(T) -> Score,
    cost: f64,
) -> Result<HeuristicChoice>
where
    F: Fn(&T, &T) -> bool,
{
    let mut best: Option<(usize, &T)> = None;
    for (i, (_, s)) in scores.iter().enumerate() {
        if let Some(s) = s {
            if best.map_or(true, |(_, b)| strictly_better(s, b)) {
                best = Some((i, s));
            }
        }
    }
    let (best_idx, _) = best.ok_or(Error::AllCandidatesTimedOut)?;
    let ordering = scores[best_idx].0.clone();
    let diagnostics = scores
        .into_iter()
        .enumerate()
        .map(|(i, (o, s))| Candidate {
            key: CandidateKey::Ordering(o),
            score: s.map_or(Score::Infinite, to_score),
            chosen: i == best_idx,
        })
        .collect();
    Ok(HeuristicChoice { heuristic: name, ordering, heuristic_cost: cost, diagnostics })
}

pub fn sotd_choose(set: &PolySet, cfg: &ChooserConfig) -> Result<HeuristicChoice> {
    let e = all_chains(set, cfg.step_time_limit, cfg.enumeration_cap)?;
    let scores = e.chains.into_iter().map(|(o, c)| (o, sotd_score(&c))).collect();
    pick_min(HeuristicName::Sotd, scores, |a, b| a < b, Score::Count, e.projection_seconds)
}

pub fn mods_choose(set: &PolySet, cfg: &ChooserConfig) -> Result<HeuristicChoice> {
    let e = all_chains(set, cfg.step_time_limit, cfg.enumeration_cap)?;
    let scores = e.chains.into_iter().map(|(o, c)| (o, mods_score(&c))).collect();
    pick_min(HeuristicName::Mods, scores, |a, b| a < b, Score::Exact, e.projection_seconds)
}

/// Relative difference below which two logmods scores count as tied.
pub const LOGMODS_TIE_WINDOW: f64 = 1e-12;

pub fn logmods_choose(set: &PolySet, cfg: &ChooserConfig) -> Result<HeuristicChoice> {
    let e = all_chains(set, cfg.step_time_limit, cfg.enumeration_cap)?;
    let mut scores = Vec::with_capacity(e.chains.len());
    for (o, c) in e.chains {
        let s = logmods_score(&c, &cfg.logmods)?;
        scores.push((o, s));
    }
    let better = |a: &f64, b: &f64| a < b && (b - a) > LOGMODS_TIE_WINDOW * b.abs().max(a.abs());
    pick_min(HeuristicName::Logmods, scores, better, Score::Real, e.projection_seconds)
}

/// One-step sotd comparison with a trial projection per remaining variable.
///
/// The cost charged is the time of every trial projection except those on
/// the chosen path, which the CAD itself reuses.
pub fn greedy_sotd_choose(set: &PolySet, cfg: &ChooserConfig) -> Result<HeuristicChoice> {
    let n = set.nvars();
    let mut forest = ChainForest::new(cfg.step_time_limit);
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut current = set.clone();
    let mut picks = Vec::with_capacity(n);
    let mut diagnostics = Vec::new();
    let mut trial_seconds = 0.0;
    let mut path_seconds = 0.0;
    let mut step = 1;
    while remaining.len() > 1 {
        let mut best: Option<(usize, u64, PolySet, f64)> = None;
        let mut row = Vec::with_capacity(remaining.len());
        for &v in &remaining {
            let (out, secs) = forest.project(&current, v);
            trial_seconds += secs;
            let score = out.as_ref().map(sotd_value);
            if let (Some(s), Some(o)) = (score, out) {
                if best.as_ref().map_or(true, |b| s < b.1) {
                    best = Some((v, s, o, secs));
                }
            }
            row.push((v, score));
        }
        let (pick, _, next, secs) = best.ok_or(Error::AllCandidatesTimedOut)?;
        for (v, s) in row {
            diagnostics.push(Candidate {
                key: CandidateKey::Step { step, var: v },
                score: s.map_or(Score::Infinite, Score::Count),
                chosen: v == pick,
            });
        }
        path_seconds += secs;
        remaining.retain(|&v| v != pick);
        picks.push(pick);
        current = next;
        step += 1;
    }
    picks.extend(remaining);
    Ok(HeuristicChoice {
        heuristic: HeuristicName::GreedySotd,
        ordering: VariableOrdering::new(picks, n)?,
        heuristic_cost: (trial_seconds - path_seconds).max(0.0),
        diagnostics,
    })
}

/// A uniformly random ordering from a seeded ChaCha generator.
pub fn random_choose(set: &PolySet, seed: u64) -> HeuristicChoice {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..set.nvars()).collect();
    order.shuffle(&mut rng);
    HeuristicChoice {
        heuristic: HeuristicName::Random,
        ordering: VariableOrdering::new(order, set.nvars()).expect("shuffle is a permutation"),
        heuristic_cost: 0.0,
        diagnostics: Vec::new(),
    }
}

/// The recorded ordering with least effective time.
pub fn virtual_best(timings: &ProblemTimings) -> Result<HeuristicChoice> {
    let mut best: Option<(&VariableOrdering, f64)> = None;
    for (o, r) in &timings.records {
        let t = effective_time(r);
        if best.map_or(true, |(_, b)| t < b) {
            best = Some((o, t));
        }
    }
    let (ordering, _) = best.ok_or_else(|| Error::NoTimingData(timings.problem_id.clone()))?;
    let diagnostics = timings
        .records
        .iter()
        .map(|(o, r)| Candidate {
            key: CandidateKey::Ordering(o.clone()),
            score: Score::Real(effective_time(r)),
            chosen: o == ordering,
        })
        .collect();
    Ok(HeuristicChoice {
        heuristic: HeuristicName::VirtualBest,
        ordering: ordering.clone(),
        heuristic_cost: 0.0,
        diagnostics,
    })
}

/// One line of the scores table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScoreRow {
    pub heuristic: HeuristicName,
    pub candidate: String,
    pub score: String,
    pub chosen: bool,
}

pub fn score_rows(choice: &HeuristicChoice, vars: &Variables) -> Vec<ScoreRow> {
    choice
        .diagnostics
        .iter()
        .map(|c| ScoreRow {
            heuristic: choice.heuristic,
            candidate: c.key.render(vars),
            score: c.score.to_string(),
            chosen: c.chosen,
        })
        .collect()
}
