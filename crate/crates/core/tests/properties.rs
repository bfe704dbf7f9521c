//! Randomized invariants checked against direct oracles.

use hetwcrt::bounds::{
    dominates, extend_tuple, initial_tuple, new_b_2_with, path_bound, scaled_graph, PruneMode, SearchOptions,
};
use hetwcrt::generator::uunifast;
use hetwcrt::graph::{par_set, Reachability};
use hetwcrt::simulator::{check_work_conserving, simulate, ExecutionScenario};
use hetwcrt::{
    new_b_1, new_b_2, new_b_2_bruteforce, old_b, CoreTypeId, Platform, PreparedTask, TypedDag, Vertex, VertexId, Weight,
};
use proptest::prelude::*;

const PATH_LIMIT: usize = 1 << 16;

/// A random DAG over `1..=max_n` vertices with edges only from lower to
/// higher index, plus a platform covering its types.
fn task(max_n: usize, max_types: usize) -> impl Strategy<Value = (TypedDag, Platform)> {
    (1..=max_n, 1..=max_types).prop_flat_map(|(n, s)| {
        let pairs = n * (n - 1) / 2;
        (
            prop::collection::vec((0i64..=12, 1i64..=3, 0..s), n),
            prop::collection::vec(prop::bool::weighted(0.3), pairs),
            prop::collection::vec(1u32..=4, s),
        )
            .prop_map(move |(vs, mask, cores)| {
                let vertices = vs
                    .into_iter()
                    .map(|(num, den, t)| Vertex::new(Weight::new(num, den), CoreTypeId(t)))
                    .collect();
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if mask[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                (TypedDag::new(vertices, &edges).unwrap(), Platform::new(cores).unwrap())
            })
    })
}

fn normalized(max_n: usize, max_types: usize) -> impl Strategy<Value = (TypedDag, Platform)> {
    task(max_n, max_types).prop_map(|(g, p)| (g.normalize().unwrap(), p))
}

fn dfs_reaches(dag: &TypedDag, from: VertexId, to: VertexId) -> bool {
    let mut stack = vec![from];
    let mut seen = vec![false; dag.vertex_count()];
    while let Some(u) = stack.pop() {
        for &w in dag.successors(u) {
            if w == to {
                return true;
            }
            if !seen[w.0] {
                seen[w.0] = true;
                stack.push(w);
            }
        }
    }
    false
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn volume_is_sum_of_wcets((dag, platform) in task(12, 3)) {
        let total: Weight = dag.vertices().iter().map(|v| v.wcet).sum();
        prop_assert_eq!(dag.vol(), total);
        let by_type: Weight = platform.types().map(|s| dag.vol_of_type(s)).sum();
        prop_assert_eq!(by_type, total);
    }

    #[test]
    fn longest_path_matches_enumeration((dag, _) in normalized(12, 2)) {
        let paths = dag.enumerate_complete_paths(PATH_LIMIT).unwrap();
        let best = paths.iter().map(|p| dag.path_length(p).unwrap()).max().unwrap();
        prop_assert_eq!(dag.longest_path(), best);
        prop_assert_eq!(dag.count_complete_paths(), Some(paths.len() as u128));
        prop_assert!(paths.iter().all(|p| dag.is_complete_path(p)));
    }

    #[test]
    fn reachability_matches_dfs((dag, _) in task(12, 2)) {
        let reach = Reachability::new(&dag);
        for u in dag.ids() {
            for v in dag.ids() {
                prop_assert_eq!(reach.reaches(u, v), dfs_reaches(&dag, u, v), "{} -> {}", u, v);
                prop_assert_eq!(reach.descendants(u).contains(v.0), reach.ancestors(v).contains(u.0));
            }
        }
    }

    #[test]
    fn par_sets_are_symmetric_and_exact((dag, _) in normalized(12, 3)) {
        let task = PreparedTask::new(dag.clone()).unwrap();
        for u in dag.ids() {
            let direct: Vec<usize> = par_set(&dag, task.reach(), u).into_iter().map(|v| v.0).collect();
            let fast: Vec<usize> = task.par(u).iter().collect();
            prop_assert_eq!(&direct, &fast);
            prop_assert!(!task.par(u).contains(u.0));
            for w in task.par(u).iter() {
                prop_assert!(task.par(VertexId(w)).contains(u.0));
                prop_assert_eq!(dag.core_type(VertexId(w)), dag.core_type(u));
                prop_assert!(!dfs_reaches(&dag, u, VertexId(w)) && !dfs_reaches(&dag, VertexId(w), u));
            }
        }
    }

    #[test]
    fn normalize_is_idempotent((dag, _) in task(12, 2)) {
        let once = dag.normalize().unwrap();
        prop_assert!(once.is_normalized());
        prop_assert_eq!(once.normalize().unwrap(), once.clone());
        prop_assert_eq!(once.vol(), dag.vol());
        prop_assert_eq!(once.longest_path(), dag.longest_path());
    }

    #[test]
    fn bounds_are_ordered((dag, platform) in normalized(14, 3)) {
        let task = PreparedTask::new(dag.clone()).unwrap();
        let (b2, _) = new_b_2(&task, &platform).unwrap();
        let b1 = new_b_1(&dag, &platform).unwrap();
        let b0 = old_b(&dag, &platform).unwrap();
        prop_assert!(b2 <= b1, "{} > {}", b2, b1);
        prop_assert!(b1 <= b0, "{} > {}", b1, b0);
        prop_assert!(b2 >= dag.longest_path());
    }

    #[test]
    fn search_matches_path_enumeration((dag, platform) in normalized(13, 3)) {
        let task = PreparedTask::new(dag).unwrap();
        let oracle = new_b_2_bruteforce(&task, &platform, PATH_LIMIT).unwrap();
        let all = task.dag().enumerate_complete_paths(PATH_LIMIT).unwrap();
        let paths = all.len() as u128;
        let longest = all.iter().map(|p| p.len()).max().unwrap();
        let n = task.dag().vertex_count() as f64;
        let types = platform.type_count() as i32;
        for prune in [PruneMode::Bidirectional, PruneMode::StrictPaper, PruneMode::Disabled] {
            let options = SearchOptions { prune, ..SearchOptions::default() };
            let (value, stats) = new_b_2_with(&task, &platform, &options).unwrap();
            prop_assert_eq!(value, oracle, "{:?}", prune);
            prop_assert!((stats.tuples_generated as u128) <= paths * longest as u128);
            prop_assert!((stats.peak_retained as f64) <= n * (n + 1.0).powi(types));
            if prune == PruneMode::Disabled {
                prop_assert_eq!(Some(stats.final_tuples as u128), task.dag().count_complete_paths());
            }
        }
    }

    #[test]
    fn folding_tuples_along_a_path_gives_its_bound(
        (dag, platform) in normalized(12, 3),
        pick in any::<prop::sample::Index>(),
    ) {
        let task = PreparedTask::new(dag.clone()).unwrap();
        let paths = dag.enumerate_complete_paths(PATH_LIMIT).unwrap();
        let path = &paths[pick.index(paths.len())];
        let mut t = initial_tuple(&task, &platform).unwrap();
        for &v in &path.vertices()[1..] {
            t = extend_tuple(&task, &platform, &t, v).unwrap();
        }
        prop_assert_eq!(t.r(), path_bound(&task, &platform, path).unwrap());
    }

    #[test]
    fn dominated_prefixes_never_finish_higher((dag, platform) in normalized(10, 2)) {
        // Two prefixes reaching the same vertex: if one dominates, its best
        // completion is at least the other's.
        let task = PreparedTask::new(dag.clone()).unwrap();
        let paths = dag.enumerate_complete_paths(PATH_LIMIT).unwrap();
        let fold = |p: &[VertexId]| {
            let mut t = initial_tuple(&task, &platform).unwrap();
            for &v in &p[1..] {
                t = extend_tuple(&task, &platform, &t, v).unwrap();
            }
            t
        };
        let best_completion = |t: &hetwcrt::bounds::AbstractTuple, suffix_from: VertexId| {
            paths
                .iter()
                .filter_map(|p| p.vertices().iter().position(|&v| v == suffix_from).map(|i| &p.vertices()[i + 1..]))
                .map(|suffix| {
                    let mut u = t.clone();
                    for &v in suffix {
                        u = extend_tuple(&task, &platform, &u, v).unwrap();
                    }
                    u.r()
                })
                .max()
                .unwrap()
        };
        for a in &paths {
            for b in &paths {
                for (i, &v) in a.vertices().iter().enumerate() {
                    let Some(j) = b.vertices().iter().position(|&w| w == v) else { continue };
                    let ta = fold(&a.vertices()[..=i]);
                    let tb = fold(&b.vertices()[..=j]);
                    if dominates(&task, &ta, &tb).unwrap() {
                        prop_assert!(best_completion(&ta, v) >= best_completion(&tb, v));
                    }
                }
            }
        }
    }

    #[test]
    fn adding_cores_never_hurts_new_bounds(
        (dag, platform) in normalized(12, 3),
        which in any::<prop::sample::Index>(),
        extra in 1u32..=6,
    ) {
        let s = CoreTypeId(which.index(platform.type_count()));
        let more = platform.with_cores(s, platform.cores(s).unwrap() + extra).unwrap();
        let task = PreparedTask::new(dag.clone()).unwrap();
        prop_assert!(new_b_1(&dag, &more).unwrap() <= new_b_1(&dag, &platform).unwrap());
        prop_assert!(new_b_2(&task, &more).unwrap().0 <= new_b_2(&task, &platform).unwrap().0);
    }

    #[test]
    fn single_type_old_b_formula((dag, _) in normalized(12, 1), m in 1u32..=8) {
        let platform = Platform::new(vec![m]).unwrap();
        let len = dag.longest_path();
        let expected = len + (dag.vol() - len).div_count(m);
        prop_assert_eq!(old_b(&dag, &platform).unwrap(), expected);
        prop_assert_eq!(new_b_1(&dag, &platform).unwrap(), expected);
    }

    #[test]
    fn scaled_graph_keeps_shape((dag, platform) in normalized(12, 3)) {
        let scaled = scaled_graph(&dag, &platform).unwrap();
        prop_assert_eq!(scaled.edges().collect::<Vec<_>>(), dag.edges().collect::<Vec<_>>());
        for v in dag.ids() {
            prop_assert!(scaled.wcet(v) <= dag.wcet(v));
        }
    }

    #[test]
    fn simulated_schedules_are_safe_and_work_conserving(
        (dag, platform) in normalized(14, 3),
        seed in any::<u64>(),
    ) {
        let task = PreparedTask::new(dag.clone()).unwrap();
        let (bound, _) = new_b_2(&task, &platform).unwrap();
        for scenario in [ExecutionScenario::full_wcet(&dag), ExecutionScenario::random(&dag, seed)] {
            let seq = simulate(&dag, &platform, &scenario).unwrap();
            prop_assert!(seq.response_time <= bound, "{} > {}", seq.response_time, bound);
            prop_assert!(check_work_conserving(&dag, &platform, &seq).is_ok());
            for (v, _) in dag.iter() {
                let job = &seq.jobs[v.0];
                prop_assert_eq!(job.finish - job.start, scenario.actual_time[v.0]);
            }
        }
    }

    #[test]
    fn uunifast_splits_the_total_exactly(n in 1usize..40, num in 1i64..=300, seed in any::<u64>()) {
        let total = Weight::from_integer(num);
        let shares = uunifast(n, total, seed);
        prop_assert_eq!(shares.len(), n);
        prop_assert_eq!(shares.iter().copied().sum::<Weight>(), total);
        prop_assert!(shares.iter().all(|&w| w > Weight::ZERO));
        prop_assert_eq!(uunifast(n, total, seed), shares);
    }

    #[test]
    fn weights_round_trip_through_text(num in -10_000i64..10_000, den in 1i64..1000) {
        let w = Weight::new(num, den);
        prop_assert_eq!(w.to_fraction_string().parse::<Weight>().unwrap(), w);
        let json = serde_json::to_string(&w).unwrap();
        prop_assert_eq!(serde_json::from_str::<Weight>(&json).unwrap(), w);
    }
}
