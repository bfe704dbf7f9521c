//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or overruns its time limit.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use hetwcrt::bounds::{extend_tuple, initial_tuple, new_b_2_with, path_bound, PruneMode, SearchOptions};
use hetwcrt::experiments::state_space_row;
use hetwcrt::fixtures::{example_two_graph, stacked_diamonds};
use hetwcrt::generator::{gen_task, random_cnf, sat_brute_force, sat_reduction, GenConfig};
use hetwcrt::simulator::{check_work_conserving, simulate, ExecutionScenario, SCENARIO_STEPS};
use hetwcrt::{
    new_b_1, new_b_2, new_b_2_bruteforce, old_b, CoreTypeId, Path, Platform, PreparedTask, TypedDag, Vertex, Weight,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

/// Name, time limit in seconds, and the check itself.
type Criterion = (&'static str, u64, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn w(n: i64, d: i64) -> Weight {
    Weight::new(n, d)
}

fn desk(seed: u64) -> (TypedDag, Platform) {
    let (dag, platform) = gen_task(&GenConfig::desk().with_seed(seed));
    (dag.normalize().unwrap(), platform)
}

fn exact_b2(dag: &TypedDag, platform: &Platform) -> Weight {
    new_b_2(&PreparedTask::new(dag.clone()).unwrap(), platform).unwrap().0
}

fn example_two_values() -> Check {
    let loose = |wcet: i64, s: usize| Vertex::new(Weight::from(wcet), CoreTypeId(s));
    // Same aggregates, different shape: three independent vertices.
    let flat = TypedDag::new(vec![loose(19, 1), loose(11, 0), loose(15, 1)], &[]).unwrap();
    let graphs = [example_two_graph(), flat];
    for g in &graphs {
        ensure!(
            g.longest_path() == Weight::from(19)
                && g.vol_of_type(CoreTypeId(0)) == Weight::from(11)
                && g.vol_of_type(CoreTypeId(1)) == Weight::from(34),
            "fixture aggregates are off"
        );
    }
    let few = Platform::new(vec![2, 3]).unwrap();
    let many = Platform::new(vec![20, 3]).unwrap();
    let start = Instant::now();
    let values: Vec<(Weight, Weight)> = graphs
        .iter()
        .map(|g| (old_b(g, &few).unwrap(), old_b(g, &many).unwrap()))
        .collect();
    let took = start.elapsed();
    for (a, b) in &values {
        ensure!(*a == w(59, 2), "old_b on [2,3] is {a}, expected 59/2");
        ensure!(*b == w(449, 15), "old_b on [20,3] is {b}, expected 449/15");
    }
    ensure!(took < Duration::from_millis(1), "old_b took {took:?}");
    Ok(format!(
        "59/2 -> 449/15 after adding cores, {} evaluations in {took:?}",
        2 * graphs.len()
    ))
}

fn dominance_chain() -> Check {
    let mut strict = 0;
    for seed in 0..1000 {
        let (dag, platform) = desk(10_000 + seed);
        let b0 = old_b(&dag, &platform).unwrap();
        let b1 = new_b_1(&dag, &platform).unwrap();
        let b2 = exact_b2(&dag, &platform);
        ensure!(b2 <= b1 && b1 <= b0, "seed {seed}: {b2} / {b1} / {b0}");
        strict += usize::from(b2 < b1);
    }
    Ok(format!("1000/1000 ordered, NEW-B-2 strictly below NEW-B-1 on {strict}"))
}

fn oracle_equivalence() -> Check {
    let config = GenConfig {
        vertex_range: (3, 15),
        type_count_range: (1, 3),
        pr_range: (0.05, 0.5),
        ..GenConfig::desk()
    };
    let mut max_paths = 0u128;
    for seed in 0..500 {
        let (dag, platform) = gen_task(&config.clone().with_seed(20_000 + seed));
        let task = PreparedTask::from_any(&dag).unwrap();
        let oracle = new_b_2_bruteforce(&task, &platform, 1 << 20).unwrap();
        for prune in [PruneMode::Bidirectional, PruneMode::StrictPaper, PruneMode::Disabled] {
            let options = SearchOptions {
                prune,
                ..SearchOptions::default()
            };
            let (value, _) = new_b_2_with(&task, &platform, &options).unwrap();
            ensure!(
                value == oracle,
                "seed {seed} {prune:?}: search {value}, enumeration {oracle}"
            );
        }
        max_paths = max_paths.max(task.dag().count_complete_paths().unwrap());
    }
    Ok(format!("500/500 equal in all prune modes, up to {max_paths} paths"))
}

fn self_sustainability() -> Check {
    let mut old_b_rises = 0;
    let mut sweeps = 0;
    for seed in 0..200 {
        let (dag, platform) = desk(30_000 + seed);
        let task = PreparedTask::new(dag.clone()).unwrap();
        for s in platform.types() {
            let base = platform.cores(s).unwrap();
            let mut prev: Option<(Weight, Weight, Weight)> = None;
            for extra in [0, 1, 2, 4, 8] {
                let p = platform.with_cores(s, base + extra).unwrap();
                let now = (
                    new_b_1(&dag, &p).unwrap(),
                    new_b_2(&task, &p).unwrap().0,
                    old_b(&dag, &p).unwrap(),
                );
                if let Some(before) = prev {
                    ensure!(now.0 <= before.0, "seed {seed} {s}: NEW-B-1 {} -> {}", before.0, now.0);
                    ensure!(now.1 <= before.1, "seed {seed} {s}: NEW-B-2 {} -> {}", before.1, now.1);
                    old_b_rises += usize::from(now.2 > before.2);
                }
                prev = Some(now);
            }
            sweeps += 1;
        }
    }
    Ok(format!(
        "{sweeps} single-type sweeps monotone; OLD-B rose in {old_b_rises} steps"
    ))
}

/// Shortens one vertex to the smallest grid time and reports whether the
/// response time grows.
fn find_anomaly(dag: &TypedDag, platform: &Platform, scenario: &ExecutionScenario) -> Option<String> {
    let base = simulate(dag, platform, scenario).unwrap().response_time;
    for v in dag.ids() {
        let c = dag.wcet(v);
        let shortest = c * w(1, SCENARIO_STEPS);
        if c.is_zero() || scenario.actual_time[v.0] == shortest {
            continue;
        }
        let mut faster = scenario.clone();
        faster.actual_time[v.0] = shortest;
        let after = simulate(dag, platform, &faster).unwrap().response_time;
        if after > base {
            return Some(format!(
                "{v} from {} to {shortest} raises response {base} -> {after}",
                scenario.actual_time[v.0]
            ));
        }
    }
    None
}

fn bound_safety() -> Check {
    let mut witness = None;
    let mut tightest = f64::INFINITY;
    for seed in 0..100 {
        let (dag, platform) = desk(40_000 + seed);
        let bound = exact_b2(&dag, &platform);
        for k in 0..50 {
            let scenario = if k == 0 {
                ExecutionScenario::full_wcet(&dag)
            } else {
                ExecutionScenario::random(&dag, seed * 1000 + k)
            };
            let seq = simulate(&dag, &platform, &scenario).unwrap();
            ensure!(
                seq.response_time <= bound,
                "seed {seed} scenario {k}: {} > {bound}",
                seq.response_time
            );
            if let Err(v) = check_work_conserving(&dag, &platform, &seq) {
                return Err(format!("seed {seed} scenario {k}: not work-conserving: {v:?}"));
            }
            tightest = tightest.min(bound.to_f64() - seq.response_time.to_f64());
            if witness.is_none() && k < 5 {
                witness = find_anomaly(&dag, &platform, &scenario).map(|m| format!("seed {seed}, scenario {k}: {m}"));
            }
        }
    }
    let witness = witness.ok_or("no anomaly witness found")?;
    Ok(format!(
        "5000 runs within NEW-B-2 (min slack {tightest:.3}); anomaly at {witness}"
    ))
}

fn sat_iff() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(50_000);
    let (mut sat_count, mut unsat_count) = (0, 0);
    for i in 0..100 {
        let n = rng.gen_range(1..=5);
        let m = rng.gen_range(1..=8);
        let cnf = random_cnf(n, m, true, &mut rng);
        let red = sat_reduction(&cnf);
        let bound = exact_b2(&red.dag, &red.platform);
        let sat = sat_brute_force(&cnf).unwrap();
        ensure!(
            (bound > red.threshold) == sat,
            "instance {i} (n={n}, m={m}, sat={sat}): bound {bound} vs threshold {}",
            red.threshold
        );
        if sat {
            ensure!(
                bound <= red.threshold + Weight::ONE,
                "instance {i}: bound {bound} above band"
            );
            sat_count += 1;
        } else {
            unsat_count += 1;
        }
    }
    Ok(format!(
        "100/100 agree ({sat_count} satisfiable, {unsat_count} unsatisfiable)"
    ))
}

fn random_complete_path<R: Rng>(dag: &TypedDag, rng: &mut R) -> Path {
    let mut v = dag.source();
    let mut path = vec![v];
    while v != dag.sink() {
        let next = dag.successors(v);
        v = next[rng.gen_range(0..next.len())];
        path.push(v);
    }
    Path(path)
}

fn per_path_fold() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(60_000);
    for i in 0..1000u64 {
        let (dag, platform) = desk(60_000 + i / 4);
        let task = PreparedTask::new(dag.clone()).unwrap();
        let path = random_complete_path(&dag, &mut rng);
        let mut t = initial_tuple(&task, &platform).unwrap();
        for &v in &path.vertices()[1..] {
            t = extend_tuple(&task, &platform, &t, v).unwrap();
        }
        let direct = path_bound(&task, &platform, &path).unwrap();
        ensure!(t.r() == direct, "pair {i}: fold {} vs path bound {direct}", t.r());
    }
    Ok("1000/1000 folds equal the per-path bound".into())
}

fn state_space() -> Check {
    // Same-type diamonds are the asserted family; mixed-type ones are
    // reported for comparison.
    let mut summary = Vec::new();
    for types in 1..=3 {
        let mut below_from = None;
        for k in 1..=14 {
            let dag = stacked_diamonds(k, types);
            let platform = Platform::new(vec![2; types]).unwrap();
            let row = state_space_row(&dag, &platform, u128::MAX).unwrap().unwrap();
            ensure!(row.complete_paths == 1u128 << k, "k={k}: {} paths", row.complete_paths);
            let below = (row.tuples_generated as u128) < row.complete_paths;
            if types == 1 && k >= 5 {
                ensure!(
                    below,
                    "k={k}: {} tuples for {} paths",
                    row.tuples_generated,
                    row.complete_paths
                );
            }
            if !below {
                below_from = None;
            } else if below_from.is_none() {
                below_from = Some(k);
            }
            if k == 14 {
                let from = below_from.map_or("never".to_string(), |k| format!("k>={k}"));
                summary.push(format!(
                    "{types} type(s): {} tuples, below paths for {from}",
                    row.tuples_generated
                ));
            }
        }
    }
    let mut worst = 0f64;
    for seed in 0..100 {
        let config = GenConfig {
            vertex_range: (15, 15),
            type_count_range: (1, 3),
            pr_range: (0.1, 0.5),
            ..GenConfig::desk()
        }
        .with_seed(70_000 + seed);
        let (dag, platform) = gen_task(&config);
        let row = state_space_row(&dag, &platform, u128::MAX).unwrap().unwrap();
        let cap = row.complete_paths * row.max_path_vertices as u128;
        ensure!(
            (row.tuples_generated as u128) <= cap,
            "seed {seed}: {} tuples > {} paths x {} vertices",
            row.tuples_generated,
            row.complete_paths,
            row.max_path_vertices
        );
        worst = worst.max(row.tuples_generated as f64 / cap as f64);
    }
    Ok(format!(
        "k=14 (16384 paths): {}; random 15-vertex max tuples/(paths x length) {worst:.3}",
        summary.join(", ")
    ))
}

fn scalability() -> Check {
    let config = GenConfig {
        vertex_range: (100, 100),
        type_count_range: (5, 5),
        ..GenConfig::default()
    }
    .with_seed(90_000);
    let (dag, platform) = gen_task(&config);
    let start = Instant::now();
    let task = PreparedTask::from_any(&dag).unwrap();
    let (value, stats) = new_b_2(&task, &platform).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure!(took < Duration::from_secs(60), "took {took:?}");
    Ok(format!(
        "|V|=100, |S|=5, cores {:?}: NEW-B-2 = {value} in {took:?}, {} tuples",
        platform.core_counts(),
        stats.tuples_generated
    ))
}

fn single_type() -> Check {
    let config = GenConfig {
        type_count_range: (1, 1),
        ..GenConfig::desk()
    };
    for seed in 0..100 {
        let (dag, platform) = gen_task(&config.clone().with_seed(100_000 + seed));
        let m = platform.cores(CoreTypeId(0)).unwrap();
        let len = dag.longest_path();
        let expected = len + (dag.vol() - len).div_count(m);
        let got = old_b(&dag, &platform).unwrap();
        ensure!(got == expected, "seed {seed}: {got} vs {expected}");
    }
    Ok("100/100 equal the single-type formula".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Example-2 OLD-B values", 1, example_two_values),
        ("dominance chain", 120, dominance_chain),
        ("search equals path enumeration", 60, oracle_equivalence),
        ("self-sustainability", 300, self_sustainability),
        ("bound safety and anomaly witness", 300, bound_safety),
        ("3-SAT reduction iff", 120, sat_iff),
        ("per-path tuple fold", 60, per_path_fold),
        ("state-space reduction", 600, state_space),
        ("scalability smoke", 60, scalability),
        ("single-type degeneration", 60, single_type),
    ];
    let mut failed = 0;
    for (i, (name, limit_secs, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(_) if took > Duration::from_secs(limit_secs) => Err(format!("over the {limit_secs} s limit")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("PASS  {:>2} {name} [{took:.2?}]: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {:>2} {name} [{took:.2?}]: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
