//! Acceptance checks, one PASS/FAIL line per criterion.

mod common;

use std::time::Instant;

use cadorder::heuristics::{
    self, brown_choose, degree_product, gmods_choose, mods_score, virtual_best, ChooserConfig, HeuristicName,
    LogmodsConfig, Score,
};
use cadorder::ingest::{assemble_dataset, load_choices, load_timings};
use cadorder::metrics::{markup, survival_data, uniqueness_cluster, EvaluationReport, HeuristicChoices};
use cadorder::polyarith::{degree_sum, discriminant, resultant};
use cadorder::projection::{all_chains, project_chain, project_step};
use cadorder::{PolySet, VariableOrdering};
use common::{s3, set};
use num_bigint::{BigInt, BigUint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ord(v: &[usize]) -> VariableOrdering {
    VariableOrdering::new(v.to_vec(), v.len()).unwrap()
}

fn worked_examples() -> Check {
    let start = Instant::now();
    let s3 = s3();
    let s2 = project_step(&s3, 2);
    let expected_s2 = set(3, &["x2^3 + x2 - x1^4", "x2^3 - x1"]);
    ensure(s2 == expected_s2, || format!("projection of S3 w.r.t. x3 gave {s2:?}"))?;
    let s1 = project_step(&s2, 0);
    let expected_s1 = set(3, &["x2", "x2^2 + 1", "x2^11 - x2^2 - 1"]);
    ensure(s1 == expected_s1, || format!("projection of S2 w.r.t. x1 gave {s1:?}"))?;

    let cfg = ChooserConfig::default();
    let target = ord(&[2, 0, 1]);
    let chain = project_chain(&s3, &target, 10.0);
    let sotd: u64 = heuristics::sotd_score(&chain).unwrap();
    ensure(sotd == 43, || format!("sotd score {sotd}"))?;

    let sums: Vec<u64> = (0..3).map(|v| degree_sum(&s3, v)).collect();
    ensure(sums == [5, 6, 3], || format!("degree sums {sums:?}"))?;
    ensure(degree_sum(&s1, 1) == 14, || format!("D_x2(S1) = {}", degree_sum(&s1, 1)))?;

    let mods = heuristics::mods_choose(&s3, &cfg).map_err(|e| e.to_string())?;
    ensure(mods.ordering == target, || format!("mods chose {:?}", mods.ordering))?;
    ensure(mods.chosen_score() == Some(&Score::Exact(BigUint::from(2233u32))), || {
        format!("mods score {:?}", mods.chosen_score())
    })?;

    let literal = ChooserConfig { logmods: LogmodsConfig::new(10.0, 0).unwrap(), ..cfg };
    let logmods = heuristics::logmods_choose(&s3, &literal).map_err(|e| e.to_string())?;
    ensure(logmods.ordering == target, || format!("logmods chose {:?}", logmods.ordering))?;
    let Some(Score::Real(v)) = logmods.chosen_score() else { return Err("logmods score missing".into()) };
    ensure((v - 15.43).abs() <= 0.01, || format!("logmods score {v}"))?;

    let brown = brown_choose(&s3).ordering;
    ensure(brown == ord(&[2, 1, 0]), || format!("brown chose {brown:?}"))?;
    let gmods = gmods_choose(&s3).ordering;
    ensure(gmods == target, || format!("gmods chose {gmods:?}"))?;

    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("took {secs:.3}s"))
}

fn markup_example() -> Check {
    let m = markup(4.0, 0.02);
    ensure((m - 3.9).abs() <= 0.05, || format!("markup(4, 0.02) = {m}"))
}

fn resultant_oracle() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xacce);
    for _ in 0..200 {
        let p = common::random_bivariate(&mut rng, 6);
        let q = common::random_bivariate(&mut rng, 6);
        common::check_resultant_against_sylvester(&p, &q)?;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 30.0, || format!("took {secs:.1}s"))
}

fn discriminant_identity() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd15c);
    for _ in 0..100 {
        let deg = rng.gen_range(2..=5);
        let f = common::random_univariate(&mut rng, deg);
        let df = f.derivative(0);
        let disc = discriminant(&f, 0).map_err(|e| e.to_string())?;
        let res = resultant(&f, &df, 0).map_err(|e| e.to_string())?;
        let lhs = &f.leading_coefficient_in(0) * &disc;
        ensure(lhs == res || lhs == -&res, || format!("f = {f}: lc*disc = {lhs}, res = {res}"))?;
    }
    Ok(())
}

fn fixture_report() -> Result<EvaluationReport, String> {
    let timings = load_timings(common::TIMINGS_CSV.as_bytes(), None).map_err(|e| e.to_string())?;
    let choices = load_choices(common::CHOICES_CSV.as_bytes(), Some(&timings.variables)).map_err(|e| e.to_string())?;
    let (dataset, _) = assemble_dataset(None, timings, None, None).map_err(|e| e.to_string())?;
    let vb = HeuristicChoices {
        heuristic: HeuristicName::VirtualBest.as_str().into(),
        choices: dataset
            .iter()
            .map(|p| virtual_best(p).map(|c| (p.problem_id.clone(), c)))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?,
    };
    let mut groups = vec![vb];
    groups.extend(choices);
    EvaluationReport::build(&dataset, &groups).map_err(|e| e.to_string())
}

fn metric_fixture() -> Check {
    let report = fixture_report()?;
    let g = common::golden_gmods();
    let row = report.row("gmods").ok_or("gmods row missing")?;
    let (w, wo) = (&row.with_cost.summary, &row.without_cost.summary);
    let got = (w.accuracy, w.total_time, wo.total_time, w.mean_markup, wo.mean_markup, w.completed, wo.completed);
    let want = (g.accuracy, g.total_with, g.total_without, g.markup_with, g.markup_without, g.completed_with, g.completed_without);
    ensure(got == want, || format!("got {got:?}, want {want:?}"))?;
    let p2 = row.without_cost.rows.iter().find(|r| r.problem_id == "p2").ok_or("p2 missing")?;
    ensure(p2.chosen_time == 60.0, || format!("timeout charged {}", p2.chosen_time))
}

fn property_suites() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e0);
    let cfg = ChooserConfig::default();
    let deterministic =
        [HeuristicName::Brown, HeuristicName::Gmods, HeuristicName::Sotd, HeuristicName::Mods, HeuristicName::Logmods];
    let mut sets = vec![s3()];
    sets.extend((0..15).map(|_| common::random_set(&mut rng, 3)));
    for s in &sets {
        let e = all_chains(s, 60.0, 7).map_err(|e| e.to_string())?;
        for (o, chain) in &e.chains {
            ensure(mods_score(chain).unwrap() >= degree_product(chain), || format!("bound fails on {o:?}"))?;
            ensure(chain.sets == project_chain(s, o, 60.0).sets, || format!("memoised chain differs on {o:?}"))?;
        }
        let k = BigInt::from(rng.gen_range(2..=9) * if rng.gen_bool(0.5) { -1 } else { 1 });
        let scaled = PolySet::from_polys(3, s.iter().map(|p| p.scale(&k)));
        for h in deterministic {
            let a = heuristics::choose(h, s, &cfg).map_err(|e| e.to_string())?.ordering;
            let b = heuristics::choose(h, &scaled, &cfg).map_err(|e| e.to_string())?.ordering;
            ensure(a == b, || format!("{h} changed under scaling by {k}"))?;
        }
    }

    for _ in 0..50 {
        let times: Vec<(f64, bool)> = (0..rng.gen_range(0..30)).map(|_| (rng.gen_range(0.0..60.0), rng.gen_bool(0.2))).collect();
        let pts = survival_data(&times);
        ensure(pts.len() == times.iter().filter(|t| !t.1).count(), || "survival point count".into())?;
        ensure(pts.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1), || "survival not monotone".into())?;
    }

    let timings = load_timings(common::TIMINGS_CSV.as_bytes(), None).map_err(|e| e.to_string())?;
    let (dataset, _) = assemble_dataset(None, timings, None, None).map_err(|e| e.to_string())?;
    let once = uniqueness_cluster(dataset);
    let twice = uniqueness_cluster(once.kept.clone());
    ensure(once.kept == twice.kept, || "clustering not idempotent".into())
}

fn desk_scale_substitute() -> Check {
    let report = fixture_report()?;
    let table = report.render_table();
    ensure(table.lines().next().is_some_and(|h| h.contains("Accuracy") && h.contains("Markup")), || table.clone())?;
    let vb = report.row("virtual-best").ok_or("virtual-best row missing")?;
    for s in [&vb.with_cost.summary, &vb.without_cost.summary] {
        ensure(s.accuracy == 1.0 && s.mean_markup == 0.0, || format!("virtual best {s:?}"))?;
    }
    for r in &report.rows {
        let (w, wo) = (&r.with_cost.summary, &r.without_cost.summary);
        ensure(
            wo.total_time <= w.total_time && wo.mean_markup <= w.mean_markup && wo.completed >= w.completed,
            || format!("{}: bracketed variant out of order", r.heuristic),
        )?;
        ensure(vb.with_cost.summary.completed >= w.completed, || format!("{} completes more than virtual best", r.heuristic))?;
    }
    Ok(())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 7] = [
        ("worked examples: projections, sotd 43, degree sums, mods 2233, logmods 15.43, brown and gmods", worked_examples),
        ("markup(4, 0.02) = 3.9 +/- 0.05", markup_example),
        ("resultant equals Sylvester determinant on 200 random pairs in < 30 s", resultant_oracle),
        ("lc * disc = +/- res(f, f') on 100 random polynomials", discriminant_identity),
        ("three-problem metric fixture reproduced bit-exactly", metric_fixture),
        ("property suites: bound, scaling, survival, clustering, memoisation", property_suites),
        ("report from user timings: virtual best exact, bracketed variants ordered", desk_scale_substitute),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(()) => println!("criterion {}: PASS  {name}", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {e}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
