//! Random typed DAG tasks, platforms and utilization splits.

mod sat;

pub use sat::{
    check_reduction, random_cnf, reduction_campaign, sat_brute_force, sat_reduction, CnfInstance, IffOutcome, Literal,
    SatReduction,
};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::{CoreTypeId, Platform, TypedDag, Vertex};
use crate::weight::Weight;

/// Grid on which UUniFast shares are snapped.
pub const UUNIFAST_DENOM: i64 = 1 << 20;

/// Grid on which a drawn utilization is snapped.
const UTILIZATION_DENOM: i64 = 100;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub vertex_range: (usize, usize),
    pub pr_range: (f64, f64),
    pub type_count_range: (usize, usize),
    pub cores_range: (u32, u32),
    pub utilization_range: (f64, f64),
    pub period: Weight,
    pub seed: u64,
}

impl Default for GenConfig {
    /// The full-scale evaluation setting.
    fn default() -> Self {
        GenConfig {
            vertex_range: (70, 100),
            pr_range: (0.08, 0.1),
            type_count_range: (5, 10),
            cores_range: (2, 11),
            utilization_range: (1.0, 3.0),
            period: Weight::from(100),
            seed: 0,
        }
    }
}

impl GenConfig {
    /// Smaller graphs and fewer types so the exact search stays fast.
    pub fn desk() -> Self {
        GenConfig {
            vertex_range: (20, 60),
            type_count_range: (2, 5),
            ..GenConfig::default()
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> crate::Result<()> {
        let bad = |what: &str| Err(crate::Error::Parse(format!("invalid generator config: {what}")));
        if self.vertex_range.0 == 0 || self.vertex_range.0 > self.vertex_range.1 {
            return bad("vertex range");
        }
        let (plo, phi) = self.pr_range;
        if !(0.0..=1.0).contains(&plo) || !(0.0..=1.0).contains(&phi) || plo > phi {
            return bad("p_r range");
        }
        if self.type_count_range.0 == 0 || self.type_count_range.0 > self.type_count_range.1 {
            return bad("type count range");
        }
        if self.cores_range.0 == 0 || self.cores_range.0 > self.cores_range.1 {
            return bad("core count range");
        }
        let (ulo, uhi) = self.utilization_range;
        if ulo.is_nan() || ulo <= 0.0 || ulo > uhi {
            return bad("utilization range");
        }
        if self.period <= Weight::ZERO {
            return bad("period");
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

fn uniform_f64<R: Rng + ?Sized>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo >= hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}

/// Draws `|S|` and every `M_s` independently.
pub fn gen_platform<R: Rng + ?Sized>(config: &GenConfig, rng: &mut R) -> Platform {
    let (tlo, thi) = config.type_count_range;
    let (clo, chi) = config.cores_range;
    let types = rng.gen_range(tlo..=thi);
    let counts = (0..types).map(|_| rng.gen_range(clo..=chi)).collect();
    Platform::new(counts).expect("core counts are positive")
}

/// Random typed DAG over `type_count` types.
///
/// Vertices are placed in a random order and every forward pair `(i, j)`,
/// `i < j`, becomes an edge with probability `p_r`, so larger `p_r` gives a
/// more sequential graph. Types are uniform; the total WCET `U · period` is
/// split with UUniFast. Multiple sources or sinks get zero-WCET dummies.
pub fn gen_dag<R: Rng + ?Sized>(config: &GenConfig, type_count: usize, rng: &mut R) -> TypedDag {
    let (vlo, vhi) = config.vertex_range;
    let n = rng.gen_range(vlo..=vhi);
    let pr = uniform_f64(rng, config.pr_range);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(pr) {
                edges.push((order[i], order[j]));
            }
        }
    }
    let utilization = uniform_f64(rng, config.utilization_range);
    let total =
        Weight::from_f64_grid(utilization, UTILIZATION_DENOM).max(Weight::new(1, UTILIZATION_DENOM)) * config.period;
    let wcets = uunifast_with(n, total, rng);
    let vertices = wcets
        .into_iter()
        .map(|wcet| Vertex::new(wcet, CoreTypeId(rng.gen_range(0..type_count))))
        .collect();
    TypedDag::new(vertices, &edges)
        .and_then(|dag| dag.normalize())
        .expect("forward edges are acyclic")
}

/// A platform and a task over its types, reproducible from `config.seed`.
pub fn gen_task(config: &GenConfig) -> (TypedDag, Platform) {
    let mut rng = config.rng();
    let platform = gen_platform(config, &mut rng);
    let dag = gen_dag(config, platform.type_count(), &mut rng);
    (dag, platform)
}

/// UUniFast split of `total` into `n` positive parts, seeded.
pub fn uunifast(n: usize, total: Weight, seed: u64) -> Vec<Weight> {
    uunifast_with(n, total, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// UUniFast with exact output: shares are drawn in floating point, snapped
/// to multiples of `2^-20`, and the last share takes whatever makes the sum
/// exactly `total`.
pub fn uunifast_with<R: Rng + ?Sized>(n: usize, total: Weight, rng: &mut R) -> Vec<Weight> {
    assert!(n >= 1, "uunifast needs at least one part");
    assert!(total > Weight::ZERO, "uunifast needs a positive total");
    let unit = Weight::new(1, UUNIFAST_DENOM);
    if total < unit * Weight::from(n as i64) {
        return vec![total / Weight::from(n as i64); n];
    }
    let total_f = total.to_f64();
    let mut remaining = 1.0f64;
    let mut parts = Vec::with_capacity(n);
    for i in 1..n {
        let next = remaining * rng.gen::<f64>().powf(1.0 / (n - i) as f64);
        let share = Weight::from_f64_grid((remaining - next) * total_f, UUNIFAST_DENOM).max(unit);
        parts.push(share);
        remaining = next;
    }
    let mut last = total - parts.iter().sum::<Weight>();
    while last <= Weight::ZERO {
        // Rounding overshot; take the deficit from the largest share.
        let (idx, _) = parts.iter().enumerate().max_by_key(|(_, w)| **w).expect("n > 1 here");
        let take = (Weight::ZERO - last) + unit;
        let take = take.min(parts[idx] - unit);
        parts[idx] = parts[idx] - take;
        last += take;
    }
    parts.push(last);
    parts
}
