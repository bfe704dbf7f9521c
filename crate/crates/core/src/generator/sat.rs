//! 3-SAT instances and their encoding as typed DAG tasks whose per-path
//! interference bound exceeds `m + n + 1` exactly when the formula is
//! satisfiable.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bounds::{new_b_2, PreparedTask};
use crate::error::{Error, Result};
use crate::graph::{CoreTypeId, Platform, TypedDag, Vertex};
use crate::weight::Weight;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    /// Zero-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    /// DIMACS convention: `3` is `x3`, `-3` is `¬x3` (one-based).
    pub fn from_dimacs(lit: i64) -> Literal {
        assert!(lit != 0, "0 is not a literal");
        Literal {
            var: lit.unsigned_abs() as usize - 1,
            positive: lit > 0,
        }
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64 + 1;
        if self.positive {
            v
        } else {
            -v
        }
    }

    fn holds(self, assignment: u32) -> bool {
        (assignment >> self.var & 1 == 1) == self.positive
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfInstance {
    vars: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfInstance {
    pub fn new(vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self> {
        for clause in &clauses {
            if let Some(l) = clause.iter().find(|l| l.var >= vars) {
                return Err(Error::Parse(format!(
                    "literal {} refers to a variable beyond {vars}",
                    l.to_dimacs()
                )));
            }
        }
        Ok(CnfInstance { vars, clauses })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// True if some clause holds both `x` and `¬x`.
    pub fn has_tautological_clause(&self) -> bool {
        self.clauses.iter().any(|c| {
            c.iter()
                .any(|a| c.iter().any(|b| a.var == b.var && a.positive != b.positive))
        })
    }

    /// Simplified DIMACS: a `p cnf <n> <m>` header, then clauses of exactly
    /// three literals each terminated by `0`. `c` lines are comments.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut literals: Vec<i64> = Vec::new();
        let mut clauses = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            let err = |msg: &str| Error::Parse(format!("line {}: {msg}", lineno + 1));
            if line.starts_with('p') {
                let fields: Vec<&str> = line.split_whitespace().collect();
                if fields.len() != 4 || fields[1] != "cnf" {
                    return Err(err("expected `p cnf <vars> <clauses>`"));
                }
                let n = fields[2].parse().map_err(|_| err("bad variable count"))?;
                let m = fields[3].parse().map_err(|_| err("bad clause count"))?;
                header = Some((n, m));
                continue;
            }
            let (n, _) = header.ok_or_else(|| err("clause before header"))?;
            for token in line.split_whitespace() {
                let lit: i64 = token.parse().map_err(|_| err("bad literal"))?;
                if lit == 0 {
                    if literals.len() != 3 {
                        return Err(err("clauses must have exactly 3 literals"));
                    }
                    let c = [0, 1, 2].map(|i| Literal::from_dimacs(literals[i]));
                    clauses.push(c);
                    literals.clear();
                } else {
                    if lit.unsigned_abs() as usize > n {
                        return Err(err("literal out of range"));
                    }
                    literals.push(lit);
                }
            }
        }
        let (n, m) = header.ok_or_else(|| Error::Parse("missing `p cnf` header".into()))?;
        if !literals.is_empty() {
            return Err(Error::Parse("unterminated clause".into()));
        }
        if clauses.len() != m {
            return Err(Error::Parse(format!(
                "header declares {m} clauses, found {}",
                clauses.len()
            )));
        }
        CnfInstance::new(n, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.vars, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(out, "{} {} {} 0", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs());
        }
        out
    }
}

/// Truth-table satisfiability check.
pub fn sat_brute_force(cnf: &CnfInstance) -> Result<bool> {
    if cnf.vars > 20 {
        return Err(Error::TooManyVariables(cnf.vars));
    }
    Ok((0..1u32 << cnf.vars).any(|assignment| cnf.clauses.iter().all(|c| c.iter().any(|l| l.holds(assignment)))))
}

/// Random instance with `m` clauses over `n >= 1` variables. When
/// `tautology_free` is set no clause mixes `x` and `¬x`; repeated literals
/// are allowed either way.
pub fn random_cnf<R: Rng + ?Sized>(n: usize, m: usize, tautology_free: bool, rng: &mut R) -> CnfInstance {
    assert!(n >= 1, "need at least one variable");
    let clauses = (0..m)
        .map(|_| {
            let mut clause = [Literal { var: 0, positive: true }; 3];
            for i in 0..3 {
                let var = rng.gen_range(0..n);
                let positive = match clause[..i].iter().find(|l| l.var == var) {
                    Some(prev) if tautology_free => prev.positive,
                    _ => rng.gen_bool(0.5),
                };
                clause[i] = Literal { var, positive };
            }
            clause
        })
        .collect();
    CnfInstance::new(n, clauses).expect("literals are in range")
}

#[derive(Clone, Debug)]
pub struct SatReduction {
    pub dag: TypedDag,
    pub platform: Platform,
    /// `m + n + 1`.
    pub threshold: Weight,
}

/// Encodes `cnf` as a typed DAG.
///
/// * A spine `v_0 … v_n` of type 0, WCET 1; `v_0` is the source and `v_n`
///   the sink.
/// * Per clause `r` a vertex `u_r` of type `r + 1`, WCET 1, between `v_0`
///   and `v_n`.
/// * Per variable `x_i` a positive and a negative branch from `v_{i-1}` to
///   `v_i`. The positive branch holds one type-`(r + 1)` vertex of WCET
///   `1/(mn + 1)` for each clause `r` containing `x_i`; likewise the negative
///   branch for `¬x_i`. An empty branch is a direct edge.
///
/// Every type has a single core. Ids: spine `0..=n`, then the clause
/// vertices, then the branch vertices.
///
/// `new_b_2 > threshold` matches satisfiability only when there is at least
/// one clause and no clause holds both `x` and `¬x`.
pub fn sat_reduction(cnf: &CnfInstance) -> SatReduction {
    let n = cnf.vars;
    let m = cnf.clauses.len();
    let one = Weight::ONE;
    let small = Weight::new(1, (m * n + 1) as i64);
    let mut vertices: Vec<Vertex> = (0..=n).map(|_| Vertex::new(one, CoreTypeId(0))).collect();
    let mut edges = Vec::new();
    for r in 0..m {
        let u = vertices.len();
        vertices.push(Vertex::new(one, CoreTypeId(r + 1)));
        edges.extend([(0, u), (u, n)]);
    }
    for i in 0..n {
        for positive in [true, false] {
            let mut prev = i;
            for (r, clause) in cnf.clauses.iter().enumerate() {
                if clause.contains(&Literal { var: i, positive }) {
                    let x = vertices.len();
                    vertices.push(Vertex::new(small, CoreTypeId(r + 1)));
                    edges.push((prev, x));
                    prev = x;
                }
            }
            edges.push((prev, i + 1));
        }
    }
    let dag = TypedDag::new(vertices, &edges).expect("construction is acyclic");
    let platform = Platform::new(vec![1; m + 1]).expect("counts are positive");
    SatReduction {
        dag,
        platform,
        threshold: Weight::from((m + n + 1) as i64),
    }
}

/// One instance of the reduction check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IffOutcome {
    pub vars: usize,
    pub clauses: usize,
    pub satisfiable: bool,
    #[serde(with = "crate::weight::fraction")]
    pub new_b_2: Weight,
    #[serde(with = "crate::weight::fraction")]
    pub threshold: Weight,
    /// Bound above the threshold exactly when satisfiable, and at most one
    /// above it when satisfiable.
    pub agrees: bool,
}

/// Compares the reduction's NEW-B-2 with truth-table satisfiability.
pub fn check_reduction(cnf: &CnfInstance) -> Result<IffOutcome> {
    let satisfiable = sat_brute_force(cnf)?;
    let red = sat_reduction(cnf);
    let task = PreparedTask::new(red.dag)?;
    let (bound, _) = new_b_2(&task, &red.platform)?;
    let above = bound > red.threshold;
    Ok(IffOutcome {
        vars: cnf.vars,
        clauses: cnf.clauses.len(),
        satisfiable,
        new_b_2: bound,
        threshold: red.threshold,
        agrees: above == satisfiable && (!satisfiable || bound <= red.threshold + Weight::ONE),
    })
}

/// Runs [`check_reduction`] on `trials` random instances drawn from `seed`.
pub fn reduction_campaign(
    vars: usize,
    clauses: usize,
    trials: usize,
    seed: u64,
    tautology_free: bool,
) -> Result<Vec<IffOutcome>> {
    if vars == 0 {
        return Err(Error::Parse("need at least one variable".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..trials)
        .map(|_| check_reduction(&random_cnf(vars, clauses, tautology_free, &mut rng)))
        .collect()
}
